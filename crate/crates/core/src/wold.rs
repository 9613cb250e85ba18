//! Wold decomposition into the four reducing components.
//!
//! The shift part of the edge family is `⊕_μ S_μ W` with `W` the wandering
//! space, and the pure part of `V` is `⊕_k V^k ker V*`; everything else is the
//! CK part and the unitary part. Crossing the two splittings gives the four
//! types below.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::atomic::{AtomicRep, Image};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::matrix::{CMatrix, MatrixRep, SparseVec};
use crate::scalar::Real;
use crate::word::{Gen, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WoldType {
    #[serde(rename = "unitary+CK")]
    UnitaryCk,
    #[serde(rename = "pure+CK")]
    PureCk,
    #[serde(rename = "unitary+pure-shift")]
    UnitaryPureShift,
    #[serde(rename = "left-regular")]
    LeftRegular,
}

impl WoldType {
    pub const ALL: [WoldType; 4] = [WoldType::UnitaryCk, WoldType::PureCk, WoldType::UnitaryPureShift, WoldType::LeftRegular];

    pub fn of(shift: bool, pure: bool) -> WoldType {
        match (shift, pure) {
            (false, false) => WoldType::UnitaryCk,
            (false, true) => WoldType::PureCk,
            (true, false) => WoldType::UnitaryPureShift,
            (true, true) => WoldType::LeftRegular,
        }
    }

    pub fn roman(self) -> &'static str {
        match self {
            WoldType::UnitaryCk => "i",
            WoldType::PureCk => "ii",
            WoldType::UnitaryPureShift => "iii",
            WoldType::LeftRegular => "iv",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WoldType::UnitaryCk => "unitary+CK",
            WoldType::PureCk => "pure+CK",
            WoldType::UnitaryPureShift => "unitary+pure-shift",
            WoldType::LeftRegular => "left-regular",
        }
    }

    fn shift(self) -> bool {
        matches!(self, WoldType::UnitaryPureShift | WoldType::LeftRegular)
    }

    fn pure(self) -> bool {
        matches!(self, WoldType::PureCk | WoldType::LeftRegular)
    }
}

impl fmt::Display for WoldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a trace-back ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trace {
    /// Reached zero (`V*`) or a wandering label (`S*`) after this many steps.
    Ends(usize),
    Cycles,
    /// Left the window; decisive only under the representation's closure flags.
    Escapes,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelClass {
    pub label: String,
    pub vertex: String,
    pub s_trace: Trace,
    pub v_trace: Trace,
    /// `None` when the window cannot decide.
    pub kind: Option<WoldType>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub kind: WoldType,
    /// Dimension on the classified (interior) part.
    pub dimension: f64,
    /// Per-vertex multiplicity `α_v`: `dim W_v` for unitary+pure-shift,
    /// `dim(ker V* ∩ W_v)` for left-regular, `dim(ker V*)_v` for pure+CK.
    pub multiplicity: BTreeMap<String, f64>,
    /// Eigenvalues of the compressed projection, worst distance from `{0, 1}`.
    pub margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitBlock {
    pub vertices: Vec<String>,
    pub dimension: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Commutation {
    pub component: WoldType,
    pub generator: String,
    pub deviation: f64,
    pub columns: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WoldReport {
    pub engine: String,
    pub interior_dim: usize,
    pub inconclusive: usize,
    pub wandering_dims: BTreeMap<String, f64>,
    pub orbit_blocks: Vec<OrbitBlock>,
    pub h_c: f64,
    pub h_u: f64,
    pub h_s: f64,
    pub components: Vec<Component>,
    pub commutation: Vec<Commutation>,
    /// Per-label verdicts (atomic inputs only).
    pub labels: Vec<LabelClass>,
}

impl WoldReport {
    pub fn component(&self, kind: WoldType) -> Option<&Component> {
        self.components.iter().find(|c| c.kind == kind)
    }

    /// The only component with positive dimension, if there is exactly one.
    pub fn single_type(&self) -> Option<WoldType> {
        let live: Vec<_> = self.components.iter().filter(|c| c.dimension > 0.5).collect();
        (live.len() == 1).then(|| live[0].kind)
    }

    pub fn max_commutation_deviation(&self) -> f64 {
        self.commutation.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    /// `α_v` is constant on every vertex orbit for the unitary+pure-shift component.
    pub fn alpha_orbit_constant(&self, a: &crate::SelfSimilarAction) -> bool {
        let Some(c) = self.component(WoldType::UnitaryPureShift) else { return true };
        let g = a.graph();
        a.vertex_orbits().iter().all(|orb| {
            let vals: Vec<f64> = orb.iter().map(|&v| c.multiplicity.get(g.vertex_name(v)).copied().unwrap_or(0.0)).collect();
            vals.iter().all(|x| (x - vals[0]).abs() < 1e-9)
        })
    }

    /// Table for terminal output.
    pub fn table(&self) -> String {
        let mut s = format!("engine {}  interior {}  inconclusive {}\n", self.engine, self.interior_dim, self.inconclusive);
        s.push_str(&format!("H_C {}  H^U {}  H^S {}\n", fmt_dim(self.h_c), fmt_dim(self.h_u), fmt_dim(self.h_s)));
        s.push_str("type                  dim     multiplicity\n");
        for c in &self.components {
            let mult: Vec<String> = c.multiplicity.iter().map(|(v, m)| format!("{v}:{}", fmt_dim(*m))).collect();
            s.push_str(&format!("({:<3}) {:<18} {:<7} {}\n", c.kind.roman(), c.kind.name(), fmt_dim(c.dimension), mult.join(" ")));
        }
        for b in &self.orbit_blocks {
            s.push_str(&format!("H_[{}] {}\n", b.vertices.join(","), fmt_dim(b.dimension)));
        }
        s.push_str(&format!("max commutation deviation {:.3e}\n", self.max_commutation_deviation()));
        s
    }
}

fn fmt_dim(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.6}")
    }
}

// ---------------------------------------------------------------------------
// atomic route

fn s_trace(rep: &AtomicRep, x: usize) -> (Trace, usize) {
    let g = rep.action().graph();
    let mut cur = x;
    for steps in 0..=rep.len() {
        let mut next = None;
        let mut unknown = false;
        for e in g.edges() {
            match rep.apply(Gen::SAdj(e), cur) {
                Image::To(y, _) => next = Some(y),
                Image::Unknown => unknown = true,
                Image::Zero => {}
            }
        }
        match next {
            Some(y) => cur = y,
            None if unknown => return (Trace::Escapes, cur),
            None => return (Trace::Ends(steps), cur),
        }
    }
    (Trace::Cycles, cur)
}

fn v_trace(rep: &AtomicRep, x: usize) -> Trace {
    let mut cur = x;
    for steps in 0..=rep.len() {
        match rep.apply(Gen::VAdj, cur) {
            Image::To(y, _) => cur = y,
            Image::Zero => return Trace::Ends(steps),
            Image::Unknown => return Trace::Escapes,
        }
    }
    Trace::Cycles
}

/// Exact classification of an atomic representation by label combinatorics.
pub fn classify_atomic(rep: &AtomicRep) -> WoldReport {
    let a = rep.action();
    let g = a.graph();
    let closure = rep.closure();
    let n = rep.len();
    let mut labels = Vec::with_capacity(n);
    let mut kinds = vec![None; n];
    let mut ends = vec![usize::MAX; n];
    for x in 0..n {
        let (st, end) = s_trace(rep, x);
        let vt = v_trace(rep, x);
        let shift = match st {
            Trace::Ends(_) => Some(true),
            Trace::Cycles => Some(false),
            Trace::Escapes => (closure.s_trace).then_some(false),
        };
        let pure = match vt {
            Trace::Ends(_) => Some(true),
            Trace::Cycles => Some(false),
            Trace::Escapes => (closure.v_trace).then_some(false),
        };
        let kind = shift.zip(pure).map(|(s, p)| WoldType::of(s, p));
        if matches!(st, Trace::Ends(_)) {
            ends[x] = end;
        }
        kinds[x] = kind;
        labels.push(LabelClass { label: rep.label(x).to_string(), vertex: g.vertex_name(rep.vertex_of(x)).to_string(), s_trace: st, v_trace: vt, kind });
    }

    let classified: Vec<usize> = (0..n).filter(|&x| kinds[x].is_some()).collect();
    let count = |f: &dyn Fn(WoldType) -> bool| classified.iter().filter(|&&x| f(kinds[x].unwrap())).count() as f64;
    let wandering: Vec<usize> = classified.iter().copied().filter(|&x| matches!(labels[x].s_trace, Trace::Ends(0))).collect();
    let v_zero = |x: usize| matches!(labels[x].v_trace, Trace::Ends(0));

    let mut wandering_dims = BTreeMap::new();
    for v in g.vertices() {
        wandering_dims.insert(g.vertex_name(v).to_string(), wandering.iter().filter(|&&x| rep.vertex_of(x) == v).count() as f64);
    }

    let mut components = Vec::new();
    for kind in WoldType::ALL {
        let dim = count(&|k| k == kind);
        let mut mult = BTreeMap::new();
        for v in g.vertices() {
            let at_v = |x: &usize| rep.vertex_of(*x) == v && kinds[*x] == Some(kind);
            let m = match kind {
                WoldType::UnitaryCk => 0,
                WoldType::PureCk => classified.iter().filter(|x| at_v(x) && v_zero(**x)).count(),
                WoldType::UnitaryPureShift => wandering.iter().filter(|x| at_v(x)).count(),
                WoldType::LeftRegular => wandering.iter().filter(|x| at_v(x) && v_zero(**x)).count(),
            };
            if kind != WoldType::UnitaryCk {
                mult.insert(g.vertex_name(v).to_string(), m as f64);
            }
        }
        components.push(Component { kind, dimension: dim, multiplicity: mult, margin: Some(0.0) });
    }

    let orbit_blocks = a
        .vertex_orbits()
        .iter()
        .map(|orb| OrbitBlock {
            vertices: orb.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
            dimension: classified.iter().filter(|&&x| ends[x] != usize::MAX && orb.contains(&rep.vertex_of(ends[x]))).count() as f64,
        })
        .collect();

    // reducing: every generator keeps each label inside its own component
    let mut commutation = Vec::new();
    for kind in WoldType::ALL {
        for gen in rep.gens() {
            let mut dev: f64 = 0.0;
            let mut cols = 0;
            for &x in &classified {
                if let Image::To(y, _) = rep.apply(gen, x) {
                    if let Some(ky) = kinds[y] {
                        cols += 1;
                        if (kinds[x] == Some(kind)) != (ky == kind) {
                            dev = 1.0;
                        }
                    }
                }
            }
            commutation.push(Commutation { component: kind, generator: gen.display(g), deviation: dev, columns: cols });
        }
    }

    WoldReport {
        engine: "atomic".into(),
        interior_dim: classified.len(),
        inconclusive: n - classified.len(),
        wandering_dims,
        orbit_blocks,
        h_c: count(&|k| !k.shift()),
        h_u: count(&|k| !k.pure()),
        h_s: count(&|k| k.pure()),
        components,
        commutation,
        labels,
    }
}

// ---------------------------------------------------------------------------
// matrix route

/// `P_v − Σ_{e ∈ vE¹} S_eS_e*`.
pub fn wandering_projection<T: Real>(rep: &MatrixRep<T>, v: Vertex) -> CMatrix<T> {
    let g = rep.action().graph();
    let mut p = rep.p(v);
    for e in g.edges_into(v) {
        p -= rep.word_matrix(&Word::new([Gen::S(e), Gen::SAdj(e)]));
    }
    p
}

#[derive(Clone, Debug)]
pub struct VSplit<T: Real> {
    /// `V^n V*^n`: the projection onto `Ran V^n`.
    pub p_u: CMatrix<T>,
    pub p_s: CMatrix<T>,
    /// Columns where `V^n V*^n` is certified.
    pub interior: Vec<usize>,
}

/// Splits off `∩_{k ≤ n} Ran V^k = Ran V^n` and its complement `⊕_{k<n} V^k ker V*`.
pub fn v_split<T: Real>(rep: &MatrixRep<T>, n_max: usize) -> Result<VSplit<T>> {
    let word = Word::v_pow(n_max as u64).then(&Word::v_adj_pow(n_max as u64));
    let dim = rep.dim();
    let mut p_u = CMatrix::<T>::zeros(dim, dim);
    let mut interior = Vec::new();
    for x in 0..dim {
        if let Some(col) = rep.eval(&word, x) {
            for (i, c) in col {
                p_u[(i, x)] = c;
            }
            interior.push(x);
        }
    }
    if interior.is_empty() {
        return Err(Error::InteriorTooSmall { needed: 2 * n_max, available: rep.max_level() as usize });
    }
    let mut p_s = CMatrix::<T>::identity(dim, dim) - &p_u;
    let mut mask = vec![false; dim];
    for &x in &interior {
        mask[x] = true;
    }
    for x in (0..dim).filter(|&x| !mask[x]) {
        p_s.column_mut(x).fill(Complex::new(T::zero(), T::zero()));
    }
    Ok(VSplit { p_u, p_s, interior })
}

struct Columns<T: Real> {
    cols: Vec<Option<SparseVec<T>>>,
}

impl<T: Real> Columns<T> {
    fn apply(&self, v: &SparseVec<T>) -> Option<SparseVec<T>> {
        let mut out = Vec::new();
        for &(y, c) in v {
            out.extend(self.cols[y].as_ref()?.iter().map(|&(i, a)| (i, a * c)));
        }
        Some(crate::matrix::normalize(out))
    }
}

/// `P_S e_x = Σ_k V^k (I − VV*) V*^k e_x`, accumulated while mass remains.
/// Mass that never reaches `ker V*` is unitary when the closure flag allows it.
fn pure_column<T: Real>(rep: &MatrixRep<T>, x: usize, max_steps: usize) -> Option<SparseVec<T>> {
    let eps = T::tol(1e-12);
    let mut acc: SparseVec<T> = Vec::new();
    let mut y = crate::matrix::unit::<T>(x);
    let minus = Complex::new(-T::one(), T::zero());
    for k in 0..=max_steps {
        if crate::matrix::sparse_norm(&y) <= eps {
            return Some(acc);
        }
        let Some(vy) = rep.apply(Gen::VAdj, &y) else {
            return rep.closure().v_trace.then_some(acc);
        };
        let Some(vvy) = rep.apply(Gen::V, &vy) else { return None };
        let kern = crate::matrix::sparse_add(&y, &vvy, minus);
        if !kern.is_empty() {
            acc = crate::matrix::sparse_add(&acc, &rep.apply_word(&Word::v_pow(k as u64), &kern)?, Complex::new(T::one(), T::zero()));
        }
        y = vy;
    }
    // the trace cycles without losing mass: unitary
    Some(acc)
}

/// `P_sh e_x = Σ_μ S_μ P_W S_μ* e_x` with `P_W = I − Σ_e S_eS_e*`.
fn shift_column<T: Real>(rep: &MatrixRep<T>, x: usize, max_steps: usize) -> Option<SparseVec<T>> {
    let g = rep.action().graph();
    let eps = T::tol(1e-12);
    let minus = Complex::new(-T::one(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut acc: SparseVec<T> = Vec::new();
    let mut frontier: Vec<(Vec<Gen>, SparseVec<T>)> = vec![(Vec::new(), crate::matrix::unit(x))];
    for _ in 0..=max_steps {
        frontier.retain(|(_, y)| crate::matrix::sparse_norm(y) > eps);
        if frontier.is_empty() {
            return Some(acc);
        }
        let mut next = Vec::new();
        for (mu, y) in frontier {
            let adj: Option<Vec<SparseVec<T>>> = g.edges().map(|e| rep.apply(Gen::SAdj(e), &y)).collect();
            let Some(adj) = adj else {
                // leaves the window: CK mass under the closure flag
                if rep.closure().s_trace {
                    continue;
                }
                return None;
            };
            let mut proj = y.clone();
            for (e, sy) in g.edges().zip(adj) {
                if sy.is_empty() {
                    continue;
                }
                proj = crate::matrix::sparse_add(&proj, &rep.apply(Gen::S(e), &sy)?, minus);
                let mut m2 = mu.clone();
                m2.push(Gen::S(e));
                next.push((m2, sy));
            }
            if !proj.is_empty() {
                acc = crate::matrix::sparse_add(&acc, &rep.apply_word(&Word::new(mu.iter().copied()), &proj)?, one);
            }
        }
        frontier = next;
    }
    Some(acc)
}

fn hermitian_margin<T: Real>(cols: &[usize], p: &Columns<T>) -> Option<f64> {
    if cols.is_empty() || cols.len() > 1200 {
        return None;
    }
    let k = cols.len();
    let mut m = DMatrix::<Complex<T>>::zeros(k, k);
    for (j, &x) in cols.iter().enumerate() {
        let col = p.cols[x].as_ref()?;
        for &(i, c) in col {
            if let Ok(r) = cols.binary_search(&i) {
                m[(r, j)] = c;
            }
        }
    }
    let m = (&m + m.adjoint()) * Complex::new(T::of(0.5), T::zero());
    let eig = m.symmetric_eigenvalues();
    Some(eig.iter().map(|&l| Real::to_f64(l).abs().min((1.0 - Real::to_f64(l)).abs())).fold(0.0, f64::max))
}

/// Classification of a dense representation from the shift and pure projections.
pub fn classify_matrix<T: Real>(rep: &MatrixRep<T>) -> WoldReport {
    let a = rep.action();
    let g = a.graph();
    let n = rep.dim();
    let steps = n + 1;
    let ps = Columns { cols: (0..n).map(|x| pure_column(rep, x, steps)).collect() };
    let psh = Columns { cols: (0..n).map(|x| shift_column(rep, x, steps)).collect() };
    let classified: Vec<usize> = (0..n).filter(|&x| ps.cols[x].is_some() && psh.cols[x].is_some()).collect();

    // four component projections, column by column
    let one = Complex::new(T::one(), T::zero());
    let minus = -one;
    let mut comp: BTreeMap<WoldType, Columns<T>> = BTreeMap::new();
    let iv: Vec<Option<SparseVec<T>>> = (0..n).map(|x| ps.apply(psh.cols[x].as_ref()?)).collect();
    let unit = |x: usize| crate::matrix::unit::<T>(x);
    let sub = |a: &SparseVec<T>, b: &SparseVec<T>| crate::matrix::sparse_add(a, b, minus);
    let mut iii = Vec::with_capacity(n);
    let mut ii = Vec::with_capacity(n);
    let mut i1 = Vec::with_capacity(n);
    for x in 0..n {
        match (&iv[x], &ps.cols[x], &psh.cols[x]) {
            (Some(b), Some(s), Some(sh)) => {
                iii.push(Some(sub(sh, b)));
                ii.push(Some(sub(s, b)));
                let rest = sub(&sub(&unit(x), s), sh);
                i1.push(Some(crate::matrix::sparse_add(&rest, b, one)));
            }
            _ => {
                iii.push(None);
                ii.push(None);
                i1.push(None);
            }
        }
    }
    comp.insert(WoldType::LeftRegular, Columns { cols: iv });
    comp.insert(WoldType::UnitaryPureShift, Columns { cols: iii });
    comp.insert(WoldType::PureCk, Columns { cols: ii });
    comp.insert(WoldType::UnitaryCk, Columns { cols: i1 });

    let diag = |p: &Columns<T>, x: usize| -> f64 {
        p.cols[x].as_ref().and_then(|c| c.iter().find(|(i, _)| *i == x)).map_or(0.0, |(_, c)| c.re.to_f64())
    };
    let trace = |p: &Columns<T>| classified.iter().map(|&x| diag(p, x)).sum::<f64>();

    // wandering projection columns and ker V* columns for multiplicities
    let wcols = Columns {
        cols: (0..n)
            .map(|x| {
                let mut v = unit(x);
                for e in g.edges() {
                    let y = rep.eval(&Word::new([Gen::S(e), Gen::SAdj(e)]), x)?;
                    v = sub(&v, &y);
                }
                Some(v)
            })
            .collect(),
    };
    let kcols = Columns {
        cols: (0..n).map(|x| rep.eval(&Word::new([Gen::V, Gen::VAdj]), x).map(|y| sub(&unit(x), &y))).collect(),
    };

    let mut wandering_dims = BTreeMap::new();
    for v in g.vertices() {
        let t: f64 = classified.iter().filter(|&&x| rep.vertex_of(x) == v).map(|&x| diag(&wcols, x)).sum();
        wandering_dims.insert(g.vertex_name(v).to_string(), t);
    }

    let mut components = Vec::new();
    for kind in WoldType::ALL {
        let p = &comp[&kind];
        let mut mult = BTreeMap::new();
        for v in g.vertices() {
            // trace of P_kind · Q on the vertex, Q the relevant wandering projection
            let t: f64 = classified
                .iter()
                .filter(|&&x| rep.vertex_of(x) == v)
                .map(|&x| {
                    let pc = p.cols[x].as_ref();
                    let inner = |q: &Columns<T>| -> f64 {
                        match (pc, q.cols[x].as_ref()) {
                            (Some(a), Some(b)) => crate::matrix::sparse_dot(a, b).re.to_f64(),
                            _ => 0.0,
                        }
                    };
                    match kind {
                        WoldType::UnitaryCk => 0.0,
                        WoldType::PureCk => inner(&kcols),
                        WoldType::UnitaryPureShift => inner(&wcols),
                        WoldType::LeftRegular => {
                            // ker V* ∩ W: both projections commute with P_kind here
                            match (pc, wcols.cols[x].as_ref().and_then(|w| kcols.apply(w))) {
                                (Some(a), Some(b)) => crate::matrix::sparse_dot(a, &b).re.to_f64(),
                                _ => 0.0,
                            }
                        }
                    }
                })
                .sum();
            if kind != WoldType::UnitaryCk {
                mult.insert(g.vertex_name(v).to_string(), t);
            }
        }
        components.push(Component { kind, dimension: trace(p), multiplicity: mult, margin: hermitian_margin(&classified, p) });
    }

    let orbit_blocks = a
        .vertex_orbits()
        .iter()
        .map(|orb| {
            let dim: f64 = classified.iter().map(|&x| orbit_share(rep, x, orb, steps)).sum();
            OrbitBlock { vertices: orb.iter().map(|&v| g.vertex_name(v).to_string()).collect(), dimension: dim }
        })
        .collect();

    let mut commutation = Vec::new();
    let tol_cols: Vec<usize> = classified.clone();
    for kind in WoldType::ALL {
        let p = &comp[&kind];
        for gen in rep.gens() {
            let mut dev: f64 = 0.0;
            let mut cols = 0;
            for &x in &tol_cols {
                let Some(gx) = rep.eval(&Word::new([gen]), x) else { continue };
                let Some(lhs) = p.apply(&gx) else { continue };
                let Some(px) = p.cols[x].as_ref() else { continue };
                let Some(rhs) = rep.apply(gen, px) else { continue };
                cols += 1;
                dev = dev.max(crate::matrix::sparse_norm(&sub(&lhs, &rhs)).to_f64());
            }
            commutation.push(Commutation { component: kind, generator: gen.display(g), deviation: dev, columns: cols });
        }
    }

    let h_s = trace(&ps);
    let h_sh = trace(&psh);
    WoldReport {
        engine: "matrix".into(),
        interior_dim: classified.len(),
        inconclusive: n - classified.len(),
        wandering_dims,
        orbit_blocks,
        h_c: classified.len() as f64 - h_sh,
        h_u: classified.len() as f64 - h_s,
        h_s,
        components,
        commutation,
        labels: Vec::new(),
    }
}

/// `Σ_μ ‖P_{W_u} S_μ* e_x‖²` over vertices `u` of the orbit.
fn orbit_share<T: Real>(rep: &MatrixRep<T>, x: usize, orb: &[Vertex], max_steps: usize) -> f64 {
    let g = rep.action().graph();
    let eps = T::tol(1e-12);
    let minus = Complex::new(-T::one(), T::zero());
    let mut total = 0.0;
    let mut frontier = vec![crate::matrix::unit::<T>(x)];
    for _ in 0..=max_steps {
        frontier.retain(|y| crate::matrix::sparse_norm(y) > eps);
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for y in frontier {
            let adj: Option<Vec<SparseVec<T>>> = g.edges().map(|e| rep.apply(Gen::SAdj(e), &y)).collect();
            let Some(adj) = adj else { continue };
            let mut proj = y.clone();
            for (e, sy) in g.edges().zip(adj) {
                if sy.is_empty() {
                    continue;
                }
                if let Some(back) = rep.apply(Gen::S(e), &sy) {
                    proj = crate::matrix::sparse_add(&proj, &back, minus);
                }
                next.push(sy);
            }
            total += proj.iter().filter(|(i, _)| orb.contains(&rep.vertex_of(*i))).map(|(_, c)| c.norm_sqr().to_f64()).sum::<f64>();
        }
        frontier = next;
    }
    total
}

/// Dispatches to the exact route for atomic input.
pub enum AnyRep<'a, T: Real> {
    Atomic(&'a AtomicRep),
    Matrix(&'a MatrixRep<T>),
}

pub fn classify<T: Real>(rep: AnyRep<'_, T>) -> WoldReport {
    match rep {
        AnyRep::Atomic(r) => classify_atomic(r),
        AnyRep::Matrix(r) => classify_matrix(r),
    }
}
