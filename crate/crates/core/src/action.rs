use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphDoc, Path, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub graph: GraphDoc,
    pub vperm: BTreeMap<String, String>,
    pub eperm: BTreeMap<String, String>,
    pub rho: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Cycles<T> {
    cycles: Vec<Vec<T>>,
    // (cycle index, position) for every element
    pos: Vec<(usize, usize)>,
}

impl<T: Copy> Cycles<T> {
    fn new(perm: &[usize], wrap: impl Fn(usize) -> T) -> Self {
        let mut pos = vec![(usize::MAX, 0); perm.len()];
        let mut cycles = Vec::new();
        for start in 0..perm.len() {
            if pos[start].0 != usize::MAX {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            loop {
                pos[x] = (cycles.len(), cyc.len());
                cyc.push(wrap(x));
                x = perm[x];
                if x == start {
                    break;
                }
            }
            cycles.push(cyc);
        }
        Cycles { cycles, pos }
    }

    fn step(&self, x: usize, n: i64) -> T {
        let (c, p) = self.pos[x];
        let len = self.cycles[c].len() as i64;
        self.cycles[c][(p as i64 + n).rem_euclid(len) as usize]
    }

    fn orbit(&self, x: usize) -> Vec<T> {
        let (c, p) = self.pos[x];
        let cyc = &self.cycles[c];
        (0..cyc.len()).map(|i| cyc[(p + i) % cyc.len()]).collect()
    }
}

/// A self-similar action of `N` on a finite graph, given by its generator:
/// a graph automorphism (`vperm`, `eperm`) and the restriction `rho(e) = 1|_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfSimilarAction {
    graph: Graph,
    vperm: Vec<Vertex>,
    eperm: Vec<Edge>,
    rho: Vec<u64>,
    vcyc: Cycles<Vertex>,
    ecyc: Cycles<Edge>,
    // prefix sums of rho along each edge cycle, one extra entry for the total
    eprefix: Vec<Vec<u64>>,
}

/// Result of [`SelfSimilarAction::find_intertwiner`]: `V^q S_e = S_f V^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Intertwiner {
    pub q: u64,
    pub p: u64,
    pub f: Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbits {
    pub vertex_orbits: Vec<Vec<String>>,
    pub edge_orbits: Vec<Vec<String>>,
}

impl SelfSimilarAction {
    /// Builds and validates: both maps must be bijections, `eperm` must
    /// intertwine `vperm` through `src`/`rng`, and `vperm^{rho(e)}` must fix
    /// `vperm(s(e))`.
    pub fn new(graph: Graph, vperm: Vec<Vertex>, eperm: Vec<Edge>, rho: Vec<u64>) -> Result<Self> {
        let a = Self::new_unchecked(graph, vperm, eperm, rho)?;
        if let Some(w) = a.structural_violations().into_iter().next() {
            return Err(Error::InvalidAction(w));
        }
        Ok(a)
    }

    /// Only checks that `vperm` and `eperm` are bijections of the right size.
    /// Used to probe broken actions with [`verify_axioms`].
    pub fn new_unchecked(graph: Graph, vperm: Vec<Vertex>, eperm: Vec<Edge>, rho: Vec<u64>) -> Result<Self> {
        let nv = graph.num_vertices();
        let ne = graph.num_edges();
        if vperm.len() != nv || eperm.len() != ne || rho.len() != ne {
            return Err(Error::InvalidAction("vperm/eperm/rho sizes do not match the graph".into()));
        }
        if !is_bijection(vperm.iter().map(|v| v.0), nv) {
            return Err(Error::InvalidAction("vperm is not a bijection".into()));
        }
        if !is_bijection(eperm.iter().map(|e| e.0), ne) {
            return Err(Error::InvalidAction("eperm is not a bijection".into()));
        }
        let vcyc = Cycles::new(&vperm.iter().map(|v| v.0).collect::<Vec<_>>(), Vertex);
        let ecyc = Cycles::new(&eperm.iter().map(|e| e.0).collect::<Vec<_>>(), Edge);
        let eprefix = ecyc
            .cycles
            .iter()
            .map(|c| {
                let mut acc = vec![0u64];
                for e in c {
                    acc.push(acc.last().unwrap() + rho[e.0]);
                }
                acc
            })
            .collect();
        Ok(SelfSimilarAction { graph, vperm, eperm, rho, vcyc, ecyc, eprefix })
    }

    pub fn from_doc(doc: &ActionDoc) -> Result<Self> {
        let (graph, vperm, eperm, rho) = Self::parts_from_doc(doc)?;
        Self::new(graph, vperm, eperm, rho)
    }

    pub fn from_doc_unchecked(doc: &ActionDoc) -> Result<Self> {
        let (graph, vperm, eperm, rho) = Self::parts_from_doc(doc)?;
        Self::new_unchecked(graph, vperm, eperm, rho)
    }

    fn parts_from_doc(doc: &ActionDoc) -> Result<(Graph, Vec<Vertex>, Vec<Edge>, Vec<u64>)> {
        let graph = Graph::new(&doc.graph)?;
        let mut vperm = vec![Vertex(usize::MAX); graph.num_vertices()];
        for (k, v) in &doc.vperm {
            vperm[graph.vertex(k)?.0] = graph.vertex(v)?;
        }
        let mut eperm = vec![Edge(usize::MAX); graph.num_edges()];
        for (k, e) in &doc.eperm {
            eperm[graph.edge(k)?.0] = graph.edge(e)?;
        }
        let mut rho = vec![None; graph.num_edges()];
        for (k, r) in &doc.rho {
            rho[graph.edge(k)?.0] = Some(*r);
        }
        if let Some(v) = graph.vertices().find(|v| vperm[v.0].0 == usize::MAX) {
            return Err(Error::InvalidAction(format!("vperm misses `{}`", graph.vertex_name(v))));
        }
        if let Some(e) = graph.edges().find(|e| eperm[e.0].0 == usize::MAX) {
            return Err(Error::InvalidAction(format!("eperm misses `{}`", graph.edge_name(e))));
        }
        if let Some(e) = graph.edges().find(|e| rho[e.0].is_none()) {
            return Err(Error::InvalidAction(format!("rho misses `{}`", graph.edge_name(e))));
        }
        Ok((graph, vperm, eperm, rho.into_iter().map(|r| r.unwrap()).collect()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?)
    }

    pub fn to_doc(&self) -> ActionDoc {
        let g = &self.graph;
        ActionDoc {
            graph: g.to_doc(),
            vperm: g.vertices().map(|v| (g.vertex_name(v).into(), g.vertex_name(self.vperm(v)).into())).collect(),
            eperm: g.edges().map(|e| (g.edge_name(e).into(), g.edge_name(self.eperm(e)).into())).collect(),
            rho: g.edges().map(|e| (g.edge_name(e).into(), self.rho(e))).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("action serialises")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vperm(&self, v: Vertex) -> Vertex {
        self.vperm[v.0]
    }

    pub fn eperm(&self, e: Edge) -> Edge {
        self.eperm[e.0]
    }

    pub fn rho(&self, e: Edge) -> u64 {
        self.rho[e.0]
    }

    /// `vperm^n(v)` for any integer `n`.
    pub fn vperm_pow(&self, v: Vertex, n: i64) -> Vertex {
        self.vcyc.step(v.0, n)
    }

    /// `eperm^n(e)` for any integer `n`.
    pub fn eperm_pow(&self, e: Edge, n: i64) -> Edge {
        self.ecyc.step(e.0, n)
    }

    /// `n|_e = Σ_{i<n} rho(eperm^i(e))`.
    pub fn restrict_edge(&self, n: u64, e: Edge) -> u64 {
        let (c, p) = self.ecyc.pos[e.0];
        let pre = &self.eprefix[c];
        let len = (pre.len() - 1) as u64;
        let total = pre[pre.len() - 1];
        let full = n / len;
        let r = (n % len) as usize;
        let end = p + r;
        let partial = if end <= len as usize {
            pre[end] - pre[p]
        } else {
            (total - pre[p]) + pre[end - len as usize]
        };
        full * total + partial
    }

    /// `n·μ` and `n|_μ` together.
    pub fn act_restrict(&self, n: u64, mu: &Path) -> (Path, u64) {
        let g = &self.graph;
        let rng = self.vperm_pow(mu.rng(), n as i64);
        let src = self.vperm_pow(mu.src(), n as i64);
        let mut edges = Vec::with_capacity(mu.len());
        let mut k = n;
        for &e in mu.edges() {
            edges.push(self.eperm_pow(e, k as i64));
            k = self.restrict_edge(k, e);
        }
        // on a broken action the endpoints recorded here need not match the edges
        let rng = edges.first().map_or(rng, |&f| g.rng(f));
        let src = if mu.is_vertex() { src } else { self.vperm_pow(mu.src(), k as i64) };
        (Path::from_raw(rng, src, edges), k)
    }

    /// `n·μ`.
    pub fn act(&self, n: u64, mu: &Path) -> Path {
        self.act_restrict(n, mu).0
    }

    /// `n|_μ`; on vertices this is `n`.
    pub fn restrict(&self, n: u64, mu: &Path) -> u64 {
        mu.edges().iter().fold(n, |k, &e| self.restrict_edge(k, e))
    }

    /// The unique `ν` with `n·ν = μ`.
    pub fn act_inv(&self, n: u64, mu: &Path) -> Path {
        let g = &self.graph;
        if mu.is_vertex() {
            return g.vertex_path(self.vperm_pow(mu.rng(), -(n as i64)));
        }
        let mut edges = Vec::with_capacity(mu.len());
        let mut k = n;
        for &f in mu.edges() {
            let e = self.eperm_pow(f, -(k as i64));
            edges.push(e);
            k = self.restrict_edge(k, e);
        }
        let rng = g.rng(edges[0]);
        let src = g.src(*edges.last().unwrap());
        Path::from_raw(rng, src, edges)
    }

    /// `n · v` on vertices.
    pub fn act_vertex(&self, n: u64, v: Vertex) -> Vertex {
        self.vperm_pow(v, n as i64)
    }

    /// The orbit `v, 1·v, 2·v, …` of a vertex.
    pub fn vertex_orbit(&self, v: Vertex) -> Vec<Vertex> {
        self.vcyc.orbit(v.0)
    }

    /// The orbit `e, 1·e, 2·e, …` of an edge.
    pub fn edge_orbit(&self, e: Edge) -> Vec<Edge> {
        self.ecyc.orbit(e.0)
    }

    pub fn vertex_orbits(&self) -> Vec<Vec<Vertex>> {
        self.vcyc.cycles.clone()
    }

    pub fn edge_orbits(&self) -> Vec<Vec<Edge>> {
        self.ecyc.cycles.clone()
    }

    pub fn orbits(&self) -> Orbits {
        let g = &self.graph;
        Orbits {
            vertex_orbits: self
                .vcyc
                .cycles
                .iter()
                .map(|c| c.iter().map(|&v| g.vertex_name(v).to_string()).collect())
                .collect(),
            edge_orbits: self
                .ecyc
                .cycles
                .iter()
                .map(|c| c.iter().map(|&e| g.edge_name(e).to_string()).collect())
                .collect(),
        }
    }

    /// Every edge orbit carries some edge with nonzero `rho`.
    pub fn check_assumption_a(&self) -> Result<()> {
        for c in &self.ecyc.cycles {
            if c.iter().all(|&e| self.rho(e) == 0) {
                return Err(Error::AssumptionAViolated { edge: self.graph.edge_name(c[0]).to_string() });
            }
        }
        Ok(())
    }

    /// `M = Σ_{f ∈ Ω_e} rho(f) = m_e|_e`.
    pub fn big_m(&self, e: Edge) -> Result<u64> {
        let (c, _) = self.ecyc.pos[e.0];
        let m = *self.eprefix[c].last().unwrap();
        if m == 0 {
            return Err(Error::AssumptionAViolated { edge: self.graph.edge_name(e).to_string() });
        }
        Ok(m)
    }

    /// Smallest `q ≥ 0` with `q|_e ≥ k`, together with `p = q|_e` and `f = q·e`,
    /// so that `V^q S_e = S_f V^p` with `p ≥ k`.
    pub fn find_intertwiner(&self, e: Edge, k: i64) -> Result<Intertwiner> {
        if k <= 0 {
            return Ok(Intertwiner { q: 0, p: 0, f: e });
        }
        let big_m = self.big_m(e)?;
        let m = self.edge_orbit(e).len() as u64;
        let k = k as u64;
        let full = (k - 1) / big_m;
        let mut q = full * m;
        let mut p = full * big_m;
        while p < k {
            p += self.rho(self.eperm_pow(e, q as i64));
            q += 1;
        }
        debug_assert_eq!(p, self.restrict_edge(q, e));
        Ok(Intertwiner { q, p, f: self.eperm_pow(e, q as i64) })
    }

    /// Witnesses for failures of the automorphism and congruence conditions.
    pub fn structural_violations(&self) -> Vec<String> {
        let g = &self.graph;
        let mut out = Vec::new();
        for e in g.edges() {
            let f = self.eperm(e);
            if g.rng(f) != self.vperm(g.rng(e)) {
                out.push(format!(
                    "automorphism: r(1·{}) = {} but 1·r({}) = {}",
                    g.edge_name(e),
                    g.vertex_name(g.rng(f)),
                    g.edge_name(e),
                    g.vertex_name(self.vperm(g.rng(e)))
                ));
            }
            if g.src(f) != self.vperm(g.src(e)) {
                out.push(format!(
                    "automorphism: s(1·{}) = {} but 1·s({}) = {}",
                    g.edge_name(e),
                    g.vertex_name(g.src(f)),
                    g.edge_name(e),
                    g.vertex_name(self.vperm(g.src(e)))
                ));
            }
            let s = g.src(e);
            if self.vperm_pow(s, self.rho(e) as i64) != self.vperm(s) {
                out.push(format!(
                    "congruence: rho({}) = {} is not 1 mod the orbit size of {}",
                    g.edge_name(e),
                    self.rho(e),
                    g.vertex_name(s)
                ));
            }
        }
        out
    }
}

fn is_bijection(it: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for x in it {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    seen.into_iter().all(|b| b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub max_semigroup: u64,
    pub max_path_len: usize,
    pub checked: BTreeMap<String, usize>,
    pub violations: Vec<AxiomViolation>,
    pub suppressed: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn tick(&mut self, axiom: &str) {
        *self.checked.entry(axiom.to_string()).or_default() += 1;
    }

    fn fail(&mut self, axiom: &str, witness: String) {
        if self.violations.len() < 64 {
            self.violations.push(AxiomViolation { axiom: axiom.to_string(), witness });
        } else {
            self.suppressed += 1;
        }
    }
}

/// Bounded-exhaustive check of the self-similarity axioms for all
/// `p, q ≤ depth` and all paths of length `≤ depth`.
pub fn verify_axioms(a: &SelfSimilarAction, depth: usize) -> AxiomReport {
    verify_axioms_window(a, depth as u64, depth)
}

/// As [`verify_axioms`] with separate bounds on the semigroup elements and
/// on path length.
pub fn verify_axioms_window(a: &SelfSimilarAction, max_sg: u64, max_len: usize) -> AxiomReport {
    let g = a.graph();
    let mut rep = AxiomReport { max_semigroup: max_sg, max_path_len: max_len, ..Default::default() };
    let show = |p: &Path| g.display_path(p);

    for w in a.structural_violations() {
        let axiom = if w.starts_with("automorphism") { "automorphism" } else { "congruence" };
        rep.fail(axiom, w);
    }
    rep.tick("automorphism");
    rep.tick("congruence");

    let paths = g.paths_up_to(max_len);
    for p in 0..=max_sg {
        // (S2'): p|_v = p
        for v in g.vertices() {
            rep.tick("S2'");
            let vp = g.vertex_path(v);
            if a.restrict(p, &vp) != p {
                rep.fail("S2'", format!("{p}|_{} != {p}", g.vertex_name(v)));
            }
        }
        for mu in &paths {
            // p·μ is a path of the same length with the moved endpoints
            rep.tick("paths");
            let pm = a.act(p, mu);
            let ok = g.is_path(&pm)
                && pm.len() == mu.len()
                && pm.rng() == a.act_vertex(p, mu.rng())
                && pm.src() == a.act_vertex(a.restrict(p, mu), mu.src());
            if !ok {
                rep.fail("paths", format!("{p}·{} = {} is not a path with the right endpoints", show(mu), show(&pm)));
            }
            // (S4'): 0|_μ = 0
            if p == 0 {
                rep.tick("S4'");
                if a.restrict(0, mu) != 0 || a.act(0, mu) != *mu {
                    rep.fail("S4'", format!("0 does not act trivially at {}", show(mu)));
                }
            }
            // (S1') and (S3') for every factorisation μ = αβ
            for cut in 0..=mu.len() {
                let (alpha, beta) = split_at(g, mu, cut);
                rep.tick("S1'");
                let lhs = a.act(p, mu);
                let pa = a.act(p, &alpha);
                let pb = a.act(a.restrict(p, &alpha), &beta);
                let mut rhs_edges = pa.edges().to_vec();
                rhs_edges.extend_from_slice(pb.edges());
                if lhs.edges() != rhs_edges.as_slice() {
                    rep.fail("S1'", format!("{p}·({}|{}) splits wrongly", show(&alpha), show(&beta)));
                }
                rep.tick("S3'");
                if a.restrict(p, mu) != a.restrict(a.restrict(p, &alpha), &beta) {
                    rep.fail("S3'", format!("{p}|_({}{}) != ({p}|_{})|_{}", show(&alpha), show(&beta), show(&alpha), show(&beta)));
                }
            }
            for q in 0..=max_sg {
                // (S5'): (p+q)|_μ = p|_{q·μ} + q|_μ, and (p+q)·μ = p·(q·μ)
                rep.tick("S5'");
                let qm = a.act(q, mu);
                if a.restrict(p + q, mu) != a.restrict(p, &qm) + a.restrict(q, mu) {
                    rep.fail("S5'", format!("({p}+{q})|_{} mismatch", show(mu)));
                }
                rep.tick("action");
                if a.act(p + q, mu).edges() != a.act(p, &qm).edges() {
                    rep.fail("action", format!("({p}+{q})·{} != {p}·({q}·{})", show(mu), show(mu)));
                }
            }
        }
    }
    rep
}

fn split_at(g: &Graph, mu: &Path, cut: usize) -> (Path, Path) {
    let edges = mu.edges();
    let mid = if cut == 0 {
        mu.rng()
    } else if cut == edges.len() {
        mu.src()
    } else {
        g.src(edges[cut - 1])
    };
    let alpha = Path::from_raw(mu.rng(), mid, edges[..cut].to_vec());
    let beta = Path::from_raw(mid, mu.src(), edges[cut..].to_vec());
    (alpha, beta)
}
