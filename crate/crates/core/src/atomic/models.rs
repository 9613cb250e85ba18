use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::{AtomicRep, AtomicTables, Image, TraceClosure};
use crate::action::SelfSimilarAction;
use crate::error::{Error, Result};
use crate::graph::{Edge, Path, Vertex};
use crate::phase::Phase;
use crate::word::Gen;
use crate::zappa_szep::{factory_odometer, letter};

#[derive(Clone, Debug, PartialEq)]
pub enum ModelImage<L> {
    Zero,
    To(L, Phase),
    Unknown,
}

/// A representation given symbolically on a countable label set, with a
/// finite window of labels to materialise.
pub trait AtomicModel {
    type Label: Clone + Ord + Hash;

    fn seeds(&self) -> Vec<Self::Label>;
    fn in_window(&self, l: &Self::Label) -> bool;
    fn vertex(&self, l: &Self::Label) -> Vertex;
    fn name(&self, l: &Self::Label) -> String;
    /// Image of `l` under `V`, `V*`, `S_e` or `S_e*`.
    fn apply(&self, g: Gen, l: &Self::Label) -> ModelImage<Self::Label>;
    fn closure(&self) -> TraceClosure;
}

/// Breadth-first expansion of the window from the seeds, then tabulation.
pub fn materialize<M: AtomicModel>(model: &M, action: &SelfSimilarAction, window_depth: usize) -> Result<AtomicRep> {
    let g = action.graph();
    let mut gens = vec![Gen::V, Gen::VAdj];
    for e in g.edges() {
        gens.push(Gen::S(e));
        gens.push(Gen::SAdj(e));
    }
    let mut seen: HashMap<M::Label, ()> = HashMap::new();
    let mut queue: VecDeque<M::Label> = model.seeds().into_iter().filter(|l| model.in_window(l)).collect();
    for l in &queue {
        seen.insert(l.clone(), ());
    }
    let mut order = Vec::new();
    while let Some(l) = queue.pop_front() {
        for &gen in &gens {
            if let ModelImage::To(m, _) = model.apply(gen, &l) {
                if model.in_window(&m) && !seen.contains_key(&m) {
                    seen.insert(m.clone(), ());
                    queue.push_back(m);
                }
            }
        }
        order.push(l);
    }
    order.sort();
    let index: HashMap<M::Label, usize> = order.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    let tab = |gen: Gen| -> Vec<Image> {
        order
            .iter()
            .map(|l| match model.apply(gen, l) {
                ModelImage::Zero => Image::Zero,
                ModelImage::Unknown => Image::Unknown,
                ModelImage::To(m, ph) => match index.get(&m) {
                    Some(&i) => Image::To(i, ph),
                    None => Image::Unknown,
                },
            })
            .collect()
    };
    let tables = AtomicTables {
        labels: order.iter().map(|l| model.name(l)).collect(),
        vertex: order.iter().map(|l| model.vertex(l)).collect(),
        v: tab(Gen::V),
        v_adj: tab(Gen::VAdj),
        s: g.edges().map(|e| tab(Gen::S(e))).collect(),
        s_adj: g.edges().map(|e| tab(Gen::SAdj(e))).collect(),
        window_depth,
        closure: model.closure(),
    };
    AtomicRep::from_tables(action.clone(), tables)
}

// ---------------------------------------------------------------------------
// left-regular (Fock) representation

struct LeftRegular<'a> {
    a: &'a SelfSimilarAction,
    v: Vertex,
    path_depth: usize,
    sg_depth: u64,
}

/// Ordered by `p`, then path length, then edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct FockLabel {
    pub p: u64,
    pub len: usize,
    pub edges: Vec<Edge>,
    pub rng: Vertex,
}

impl FockLabel {
    pub(crate) fn path(&self, a: &SelfSimilarAction) -> Path {
        if self.edges.is_empty() {
            a.graph().vertex_path(self.rng)
        } else {
            a.graph().path(&self.edges).expect("label holds a path")
        }
    }

    pub(crate) fn of(mu: &Path, p: u64) -> Self {
        FockLabel { p, len: mu.len(), edges: mu.edges().to_vec(), rng: mu.rng() }
    }
}

pub(crate) fn fock_name(a: &SelfSimilarAction, l: &FockLabel) -> String {
    format!("({}, {})", a.graph().display_path(&l.path(a)), l.p)
}

impl AtomicModel for LeftRegular<'_> {
    type Label = FockLabel;

    fn seeds(&self) -> Vec<FockLabel> {
        vec![FockLabel::of(&self.a.graph().vertex_path(self.v), 0)]
    }

    fn in_window(&self, l: &FockLabel) -> bool {
        l.len <= self.path_depth && l.p <= self.sg_depth
    }

    fn vertex(&self, l: &FockLabel) -> Vertex {
        l.rng
    }

    fn name(&self, l: &FockLabel) -> String {
        fock_name(self.a, l)
    }

    fn apply(&self, gen: Gen, l: &FockLabel) -> ModelImage<FockLabel> {
        let a = self.a;
        let g = a.graph();
        let mu = l.path(a);
        match gen {
            Gen::V => {
                let (m, k) = a.act_restrict(1, &mu);
                ModelImage::To(FockLabel::of(&m, k + l.p), Phase::one())
            }
            Gen::VAdj => {
                let nu = a.act_inv(1, &mu);
                let k = a.restrict(1, &nu);
                if l.p >= k {
                    ModelImage::To(FockLabel::of(&nu, l.p - k), Phase::one())
                } else {
                    ModelImage::Zero
                }
            }
            Gen::S(e) => {
                if g.src(e) != mu.rng() {
                    return ModelImage::Zero;
                }
                let em = g.concat(&g.edge_path(e), &mu).expect("composable");
                ModelImage::To(FockLabel::of(&em, l.p), Phase::one())
            }
            Gen::SAdj(e) => match mu.split_first(g) {
                Some((f, rest)) if f == e => ModelImage::To(FockLabel::of(&rest, l.p), Phase::one()),
                _ => ModelImage::Zero,
            },
            Gen::P(_) => unreachable!("projections are diagonal"),
        }
    }

    fn closure(&self) -> TraceClosure {
        TraceClosure::CLOSED
    }
}

/// The left-regular representation on `K_v`, basis `δ_{μ,p}` with
/// `s(μ) = p·v`, truncated to `|μ| ≤ depth` and `p ≤ depth`.
pub fn build_left_regular(a: &SelfSimilarAction, v: Vertex, depth: usize) -> Result<AtomicRep> {
    build_left_regular_window(a, v, depth, depth as u64)
}

pub fn build_left_regular_window(a: &SelfSimilarAction, v: Vertex, path_depth: usize, sg_depth: u64) -> Result<AtomicRep> {
    let model = LeftRegular { a, v, path_depth, sg_depth };
    materialize(&model, a, path_depth.min(sg_depth as usize))
}

// ---------------------------------------------------------------------------
// unitary + pure shift: S_μ applied to a wandering set, V from a bijection U0

struct PureShift<'a> {
    a: &'a SelfSimilarAction,
    names: Vec<String>,
    wvert: Vec<Vertex>,
    u0: Vec<(usize, Phase)>,
    u0_inv: Vec<(usize, Phase)>,
    depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ShiftLabel {
    w: usize,
    len: usize,
    edges: Vec<Edge>,
}

impl PureShift<'_> {
    fn path(&self, l: &ShiftLabel) -> Path {
        if l.edges.is_empty() {
            self.a.graph().vertex_path(self.wvert[l.w])
        } else {
            self.a.graph().path(&l.edges).expect("label holds a path")
        }
    }

    fn u0_pow(&self, w: usize, k: u64, inverse: bool) -> (usize, Phase) {
        let map = if inverse { &self.u0_inv } else { &self.u0 };
        let mut cur = (w, Phase::one());
        for _ in 0..k {
            let (n, ph) = map[cur.0];
            cur = (n, cur.1.mul(ph));
        }
        cur
    }
}

impl AtomicModel for PureShift<'_> {
    type Label = ShiftLabel;

    fn seeds(&self) -> Vec<ShiftLabel> {
        (0..self.names.len()).map(|w| ShiftLabel { w, len: 0, edges: vec![] }).collect()
    }

    fn in_window(&self, l: &ShiftLabel) -> bool {
        l.len <= self.depth
    }

    fn vertex(&self, l: &ShiftLabel) -> Vertex {
        self.path(l).rng()
    }

    fn name(&self, l: &ShiftLabel) -> String {
        if l.edges.is_empty() {
            self.names[l.w].clone()
        } else {
            format!("{}{}", self.a.graph().display_path(&self.path(l)), self.names[l.w])
        }
    }

    fn apply(&self, gen: Gen, l: &ShiftLabel) -> ModelImage<ShiftLabel> {
        let a = self.a;
        let g = a.graph();
        let mu = self.path(l);
        let mk = |w: usize, p: &Path| ShiftLabel { w, len: p.len(), edges: p.edges().to_vec() };
        match gen {
            Gen::V => {
                let (m, k) = a.act_restrict(1, &mu);
                let (w, ph) = self.u0_pow(l.w, k, false);
                ModelImage::To(mk(w, &m), ph)
            }
            Gen::VAdj => {
                let nu = a.act_inv(1, &mu);
                let k = a.restrict(1, &nu);
                let (w, ph) = self.u0_pow(l.w, k, true);
                ModelImage::To(mk(w, &nu), ph)
            }
            Gen::S(e) => {
                if g.src(e) != mu.rng() {
                    return ModelImage::Zero;
                }
                ModelImage::To(mk(l.w, &g.concat(&g.edge_path(e), &mu).unwrap()), Phase::one())
            }
            Gen::SAdj(e) => match mu.split_first(g) {
                Some((f, rest)) if f == e => ModelImage::To(mk(l.w, &rest), Phase::one()),
                _ => ModelImage::Zero,
            },
            Gen::P(_) => unreachable!("projections are diagonal"),
        }
    }

    fn closure(&self) -> TraceClosure {
        TraceClosure::CLOSED
    }
}

/// Unitary + pure-shift representation: the shift `S_μ ξ_w` over the
/// wandering labels `(name, vertex)`, with `V` on wandering labels given by
/// `u0[w] = (w', phase)` and extended by `U(S_μ ξ) = S_{1·μ} U0^{1|_μ} ξ`.
pub fn build_pure_shift(
    a: &SelfSimilarAction,
    wandering: &[(String, Vertex)],
    u0: &[(usize, Phase)],
    depth: usize,
) -> Result<AtomicRep> {
    let n = wandering.len();
    if u0.len() != n {
        return Err(Error::WanderingMismatch("U0 must be defined on every wandering label".into()));
    }
    let mut u0_inv = vec![(usize::MAX, Phase::one()); n];
    for (w, &(t, ph)) in u0.iter().enumerate() {
        if t >= n || u0_inv[t].0 != usize::MAX {
            return Err(Error::WanderingMismatch("U0 is not a bijection".into()));
        }
        if wandering[t].1 != a.vperm(wandering[w].1) {
            return Err(Error::WanderingMismatch(format!(
                "U0 sends `{}` at {} to `{}` at {}, expected a label at {}",
                wandering[w].0,
                a.graph().vertex_name(wandering[w].1),
                wandering[t].0,
                a.graph().vertex_name(wandering[t].1),
                a.graph().vertex_name(a.vperm(wandering[w].1)),
            )));
        }
        u0_inv[t] = (w, ph.conj());
    }
    let model = PureShift {
        a,
        names: wandering.iter().map(|w| w.0.clone()).collect(),
        wvert: wandering.iter().map(|w| w.1).collect(),
        u0: u0.to_vec(),
        u0_inv,
        depth,
    };
    materialize(&model, a, depth)
}

/// Unitary + pure-shift representation with `α` wandering vectors at each
/// vertex of the orbit `u_1 = u, u_{i+1} = 1·u_i` (`i ≤ m`): `V ξ_{i,j} =
/// ξ_{i+1,j}`, `V ξ_{m,j} = ξ_{1,j+1}`, `V ξ_{m,α} = λ ξ_{1,1}`.
pub fn build_pure_shift_cycle(a: &SelfSimilarAction, u: Vertex, alpha: usize, lambda: Phase, depth: usize) -> Result<AtomicRep> {
    if alpha == 0 {
        return Err(Error::UnsupportedInfiniteMultiplicity("alpha must be positive".into()));
    }
    let orbit = a.vertex_orbit(u);
    let m = orbit.len();
    let idx = |i: usize, j: usize| j * m + i;
    let mut wandering = vec![(String::new(), Vertex(0)); m * alpha];
    let mut u0 = vec![(0, Phase::one()); m * alpha];
    for j in 0..alpha {
        for (i, &ui) in orbit.iter().enumerate() {
            let name = if alpha == 1 { format!("ξ{}", i + 1) } else { format!("ξ{},{}", i + 1, j + 1) };
            wandering[idx(i, j)] = (name, ui);
            u0[idx(i, j)] = if i + 1 < m {
                (idx(i + 1, j), Phase::one())
            } else if j + 1 < alpha {
                (idx(0, j + 1), Phase::one())
            } else {
                (idx(0, 0), lambda)
            };
        }
    }
    build_pure_shift(a, &wandering, &u0, depth)
}

/// `c^λ_u`: one wandering vector per orbit vertex, one phase at the wrap.
pub fn build_c_lambda(a: &SelfSimilarAction, u: Vertex, lambda: Phase, depth: usize) -> Result<AtomicRep> {
    build_pure_shift_cycle(a, u, 1, lambda, depth)
}

// ---------------------------------------------------------------------------
// CK families for the odometer, described by infinite words
//
// A label (c, s, μ) stands for S_μ applied to the tail vector of component c
// in state s. The tail vectors satisfy S_x ξ_s = phase · ξ_{s'} for exactly one
// letter x (the "absorbable" letter), which is how the infinite word enters.

#[derive(Clone, Debug)]
enum Tail {
    /// ξ_{-k}, with S_{w_k} ξ_{-k} = ξ_{-(k-1)}; `w[k-1]` is `w_k`.
    Word(Vec<u8>),
    /// ξ_1..ξ_L with S_{e_i} ξ_i = ξ_{i+1} and S_{e_L} ξ_L = λ ξ_1.
    Cycle { word: Vec<u8>, lambda: Phase },
}

#[derive(Clone, Debug)]
struct Component {
    tail: Tail,
    prefix: &'static str,
    /// Target of V when the carry runs through the whole (constant) tail.
    v_jump: Option<usize>,
    /// Target of V* when the borrow runs through the whole tail; `None` means V* is zero there.
    v_adj_jump: Option<Option<usize>>,
}

struct OdometerCk {
    n: u8,
    comps: Vec<Component>,
    depth: usize,
    letter_of: HashMap<Edge, u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct CkLabel {
    comp: usize,
    state: usize,
    len: usize,
    mu: Vec<u8>,
}

impl OdometerCk {
    fn absorb(&self, c: usize, s: usize, x: u8) -> Option<(usize, Phase)> {
        match &self.comps[c].tail {
            Tail::Word(w) => (s >= 1 && w[s - 1] == x).then(|| (s - 1, Phase::one())),
            Tail::Cycle { word, lambda } => {
                let l = word.len();
                if word[s] != x {
                    None
                } else if s + 1 == l {
                    Some((0, *lambda))
                } else {
                    Some((s + 1, Phase::one()))
                }
            }
        }
    }

    /// `(c, s, μ) = phase · (c, s', μ·x)`.
    fn expand(&self, c: usize, s: usize) -> Option<(usize, u8, Phase)> {
        match &self.comps[c].tail {
            Tail::Word(w) => (s < w.len()).then(|| (s + 1, w[s], Phase::one())),
            Tail::Cycle { word, lambda } => {
                let l = word.len();
                let prev = (s + l - 1) % l;
                let ph = if prev + 1 == l { lambda.conj() } else { Phase::one() };
                Some((prev, word[prev], ph))
            }
        }
    }

    fn tail_len(&self, c: usize) -> Option<usize> {
        match &self.comps[c].tail {
            Tail::Word(_) => None,
            Tail::Cycle { word, .. } => Some(word.len()),
        }
    }

    fn canonical(&self, c: usize, mut s: usize, mut mu: Vec<u8>, mut ph: Phase) -> ModelImage<CkLabel> {
        while let Some(&x) = mu.last() {
            match self.absorb(c, s, x) {
                Some((s2, p)) => {
                    mu.pop();
                    s = s2;
                    ph = ph.mul(p);
                }
                None => break,
            }
        }
        ModelImage::To(CkLabel { comp: c, state: s, len: mu.len(), mu }, ph)
    }

    /// Odometer step on the infinite word `μ · tail`: add one (`up`) or subtract one.
    fn step(&self, l: &CkLabel, up: bool) -> ModelImage<CkLabel> {
        let (carry, fresh) = if up { (self.n, 1) } else { (1, self.n) };
        let mut mu = l.mu.clone();
        let mut s = l.state;
        let mut ph = Phase::one();
        let mut pulled = 0usize;
        loop {
            if let Some(t) = mu.iter().position(|&x| x != carry) {
                for x in mu.iter_mut().take(t) {
                    *x = fresh;
                }
                mu[t] = if up { mu[t] + 1 } else { mu[t] - 1 };
                return self.canonical(l.comp, s, mu, ph);
            }
            if self.tail_len(l.comp).is_some_and(|len| pulled >= len) {
                // the tail is constant: the carry never stops
                let jump = if up { self.comps[l.comp].v_jump.map(Some) } else { self.comps[l.comp].v_adj_jump };
                return match jump {
                    Some(Some(t)) => {
                        let len = mu.len();
                        self.canonical(t, 0, vec![fresh; len], ph)
                    }
                    Some(None) => ModelImage::Zero,
                    None => unreachable!("constant tail without a jump"),
                };
            }
            match self.expand(l.comp, s) {
                None => return ModelImage::Unknown,
                Some((s2, x, p)) => {
                    mu.push(x);
                    s = s2;
                    ph = ph.mul(p);
                    pulled += 1;
                }
            }
        }
    }
}

impl AtomicModel for OdometerCk {
    type Label = CkLabel;

    fn seeds(&self) -> Vec<CkLabel> {
        let mut out = Vec::new();
        for (c, comp) in self.comps.iter().enumerate() {
            let states = match &comp.tail {
                Tail::Word(_) => 1,
                Tail::Cycle { word, .. } => word.len(),
            };
            out.extend((0..states).map(|s| CkLabel { comp: c, state: s, len: 0, mu: vec![] }));
        }
        out
    }

    fn in_window(&self, l: &CkLabel) -> bool {
        let state_ok = match &self.comps[l.comp].tail {
            Tail::Word(w) => l.state <= self.depth.min(w.len()),
            Tail::Cycle { .. } => true,
        };
        l.len <= self.depth && state_ok
    }

    fn vertex(&self, _: &CkLabel) -> Vertex {
        Vertex(0)
    }

    fn name(&self, l: &CkLabel) -> String {
        let mu: String = l.mu.iter().map(|x| format!("e{x}")).collect();
        let comp = &self.comps[l.comp];
        let tail = match &comp.tail {
            Tail::Word(_) => format!("{}-{}", comp.prefix, l.state),
            Tail::Cycle { word, .. } if word.len() == 1 => comp.prefix.to_string(),
            Tail::Cycle { .. } => format!("{}{}", comp.prefix, l.state + 1),
        };
        format!("{mu}{tail}")
    }

    fn apply(&self, gen: Gen, l: &CkLabel) -> ModelImage<CkLabel> {
        match gen {
            Gen::V => self.step(l, true),
            Gen::VAdj => self.step(l, false),
            Gen::S(e) => {
                let mut mu = Vec::with_capacity(l.len + 1);
                mu.push(self.letter_of[&e]);
                mu.extend_from_slice(&l.mu);
                self.canonical(l.comp, l.state, mu, Phase::one())
            }
            Gen::SAdj(e) => {
                let x = self.letter_of[&e];
                if let Some((&first, rest)) = l.mu.split_first() {
                    return if first == x {
                        ModelImage::To(CkLabel { comp: l.comp, state: l.state, len: rest.len(), mu: rest.to_vec() }, Phase::one())
                    } else {
                        ModelImage::Zero
                    };
                }
                match self.expand(l.comp, l.state) {
                    None => ModelImage::Unknown,
                    Some((s2, y, ph)) if y == x => ModelImage::To(CkLabel { comp: l.comp, state: s2, len: 0, mu: vec![] }, ph),
                    Some(_) => ModelImage::Zero,
                }
            }
            Gen::P(_) => unreachable!("projections are diagonal"),
        }
    }

    fn closure(&self) -> TraceClosure {
        TraceClosure::CLOSED
    }
}

fn odometer_model(n: usize, comps: Vec<Component>, depth: usize) -> Result<(SelfSimilarAction, OdometerCk)> {
    if !(2..=250).contains(&n) {
        return Err(Error::InvalidRep("odometer models need 2 ≤ n ≤ 250".into()));
    }
    let a = factory_odometer(n)?;
    let letter_of = (1..=n).map(|i| (letter(&a, i), i as u8)).collect();
    Ok((a, OdometerCk { n: n as u8, comps, depth, letter_of }))
}

fn smallest_period(w: &[u8]) -> usize {
    (1..=w.len()).find(|&p| (p..w.len()).all(|i| w[i] == w[i - p])).unwrap_or(w.len())
}

fn check_letters(n: usize, w: &[usize]) -> Result<Vec<u8>> {
    w.iter()
        .map(|&x| {
            if x == 0 || x > n {
                Err(Error::InvalidRep(format!("letter {x} is not in 1..={n}")))
            } else {
                Ok(x as u8)
            }
        })
        .collect()
}

/// The inductive-type CK family of `O_n` attached to the infinite word
/// `w_1 w_2 …` (given by a prefix): basis `S_μ ξ_{-k}` with
/// `S_{w_k} ξ_{-k} = ξ_{-(k-1)}`, and the unique unitary `V` (add one with carry).
///
/// Aperiodicity cannot be certified from a prefix; prefixes with a period of
/// at most half their length are rejected.
pub fn build_inductive_ck(n: usize, word_prefix: &[usize], depth: usize) -> Result<AtomicRep> {
    let w = check_letters(n, word_prefix)?;
    let p = smallest_period(&w);
    if w.is_empty() || 2 * p <= w.len() {
        return Err(Error::PeriodicWordRejected { period: p });
    }
    if !w.iter().any(|&x| x as usize != n) || !w.iter().any(|&x| x != 1) {
        return Err(Error::InvalidRep("prefix needs a letter other than n and a letter other than 1".into()));
    }
    let comps = vec![Component { tail: Tail::Word(w), prefix: "ξ", v_jump: None, v_adj_jump: None }];
    let (a, model) = odometer_model(n, comps, depth)?;
    materialize(&model, &a, depth)
}

/// Cycle-type CK families of `O_n` for the primitive word `e_1 … e_L`
/// (`S_{e_i} ξ_i = ξ_{i+1}`, `S_{e_L} ξ_L = λ ξ_1`).
///
/// * word `[n]`: the paired family `{ξ}`, `{η}` with `V ξ_0 = η_0`, `S_1 η_0 = λ η_0`
///   (unitary + CK);
/// * word `[1]`: the family `{η}` alone with `V* η_0 = 0` when
///   `eta0_in_ran_v` is false (pure + CK), otherwise the paired family;
/// * any other primitive word: the unique unitary `V` (add one with carry).
pub fn build_cycle_ck(n: usize, cycle_word: &[usize], lambda: Phase, eta0_in_ran_v: bool, depth: usize) -> Result<AtomicRep> {
    let w = check_letters(n, cycle_word)?;
    if w.is_empty() {
        return Err(Error::NonPrimitiveWord { period: 0 });
    }
    let p = smallest_period(&w);
    if p < w.len() && w.len() % p == 0 {
        return Err(Error::NonPrimitiveWord { period: p });
    }
    let nn = n as u8;
    let paired = |lambda: Phase| {
        vec![
            Component { tail: Tail::Cycle { word: vec![nn], lambda }, prefix: "ξ", v_jump: Some(1), v_adj_jump: None },
            Component { tail: Tail::Cycle { word: vec![1], lambda }, prefix: "η", v_jump: None, v_adj_jump: Some(Some(0)) },
        ]
    };
    let comps = if w == [nn] || (w == [1] && eta0_in_ran_v) {
        paired(lambda)
    } else if w == [1] {
        vec![Component { tail: Tail::Cycle { word: vec![1], lambda }, prefix: "η", v_jump: None, v_adj_jump: Some(None) }]
    } else {
        vec![Component { tail: Tail::Cycle { word: w, lambda }, prefix: "ξ", v_jump: None, v_adj_jump: None }]
    };
    let (a, model) = odometer_model(n, comps, depth)?;
    materialize(&model, &a, depth)
}
