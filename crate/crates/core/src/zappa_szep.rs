use std::fmt;

use crate::action::SelfSimilarAction;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphDoc, Path, Vertex};

/// An element `(μ, p)` of the Zappa–Szép product `E* ⋈ N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZsElement {
    pub path: Path,
    pub p: u64,
}

impl ZsElement {
    pub fn new(path: Path, p: u64) -> Self {
        ZsElement { path, p }
    }

    pub fn display(&self, g: &Graph) -> String {
        format!("({}, {})", g.display_path(&self.path), self.p)
    }
}

impl fmt::Display for ZsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.path, self.p)
    }
}

/// `(μ, p)(ν, q) = (μ(p·ν), p|_ν + q)`, defined when `s(μ) = p·r(ν)`.
pub fn zs_multiply(a: &SelfSimilarAction, x: &ZsElement, y: &ZsElement) -> Result<ZsElement> {
    let (pn, restricted) = a.act_restrict(x.p, &y.path);
    let path = a.graph().concat(&x.path, &pn)?;
    Ok(ZsElement { path, p: restricted + y.p })
}

/// Normal forms are canonical, so this is componentwise equality.
pub fn zs_equals(x: &ZsElement, y: &ZsElement) -> bool {
    x.path == y.path && x.p == y.p
}

/// Left-to-right product of a nonempty word.
pub fn zs_product<'a>(a: &SelfSimilarAction, word: impl IntoIterator<Item = &'a ZsElement>) -> Result<ZsElement> {
    let mut it = word.into_iter();
    let first = it.next().ok_or_else(|| Error::Composability("empty product".into()))?.clone();
    it.try_fold(first, |acc, y| zs_multiply(a, &acc, y))
}

/// Parses `<path>,<p>`, splitting on the last comma.
pub fn parse_zs(g: &Graph, s: &str) -> Result<ZsElement> {
    let (mu, p) = s.trim().trim_start_matches('(').trim_end_matches(')').rsplit_once(',').ok_or_else(|| Error::PathSyntax(s.into()))?;
    let p: u64 = p.trim().parse().map_err(|_| Error::PathSyntax(s.into()))?;
    Ok(ZsElement { path: g.parse_path(mu)?, p })
}

fn one_vertex_graph(n: usize) -> Result<Graph> {
    Graph::new(&GraphDoc {
        vertices: vec!["v".into()],
        edges: (1..=n)
            .map(|i| crate::graph::EdgeDoc { id: format!("e{i}"), src: "v".into(), rng: "v".into() })
            .collect(),
    })
}

/// Edge `e_i` of the one-vertex graphs built below.
pub fn letter(a: &SelfSimilarAction, i: usize) -> Edge {
    a.graph().edge(&format!("e{i}")).expect("letter exists")
}

/// The `n`-odometer: `e_i ↦ e_{i+1}` with restriction zero, `e_n ↦ e_1` with restriction one.
pub fn factory_odometer(n: usize) -> Result<SelfSimilarAction> {
    factory_bs(n, 1)
}

/// The Baumslag–Solitar action `BS⁺(n, m)`: the odometer with `rho(e_n) = m`.
pub fn factory_bs(n: usize, m: u64) -> Result<SelfSimilarAction> {
    if n == 0 {
        return Err(Error::InvalidGraph("need at least one edge".into()));
    }
    let g = one_vertex_graph(n)?;
    let idx = |i: usize| g.edge(&format!("e{i}")).unwrap();
    let mut eperm = vec![Edge(0); n];
    let mut rho = vec![0; n];
    for i in 1..=n {
        eperm[idx(i).0] = idx(i % n + 1);
    }
    rho[idx(n).0] = m;
    SelfSimilarAction::new(g, vec![Vertex(0)], eperm, rho)
}
