//! Exact engine for atomic representations.
//!
//! Every generator sends a basis label to zero, to a unimodular multiple of
//! another label, or (on a finite window) to somewhere outside the window.
//! The last case is [`Image::Unknown`], and nothing is ever asserted about
//! a label whose generator orbit reaches it within the tested word length.

mod models;
mod relations;
mod unitary_pure;

#[cfg(test)]
mod tests;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub use models::{
    build_c_lambda, build_cycle_ck, build_inductive_ck, build_left_regular, build_left_regular_window,
    build_pure_shift, build_pure_shift_cycle, materialize, AtomicModel, ModelImage,
};
pub use relations::{verify_relations, RelationReport, RelationStat, RelationWitness};
pub use unitary_pure::{decompose_unitary_pure, extend_unitary_from_wandering, UnitaryPureComponent};
pub(crate) use unitary_pure::{apply_s_path, trace_to_wandering};

use crate::action::SelfSimilarAction;
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};
use crate::phase::Phase;
use crate::word::{Gen, Word};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Image {
    Zero,
    To(usize, Phase),
    /// The true image lies outside the materialised window.
    Unknown,
}

impl Image {
    pub fn scaled(self, ph: Phase) -> Image {
        match self {
            Image::To(y, p) => Image::To(y, p.mul(ph)),
            other => other,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Image::Unknown)
    }

    pub fn target(&self) -> Option<usize> {
        match self {
            Image::To(y, _) => Some(*y),
            _ => None,
        }
    }
}

/// Which trace-backs are guaranteed to stay inside the window.
///
/// `s_trace`: from every label of the shift part, repeated `S*` reaches a
/// wandering label without leaving the window. `v_trace`: from every label
/// of the pure part, repeated `V*` reaches zero without leaving the window.
/// Under these flags a trace that escapes the window certifies the CK
/// (resp. unitary) side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceClosure {
    pub s_trace: bool,
    pub v_trace: bool,
}

impl TraceClosure {
    pub const CLOSED: TraceClosure = TraceClosure { s_trace: true, v_trace: true };
    pub const OPEN: TraceClosure = TraceClosure { s_trace: false, v_trace: false };
}

/// Interior level meaning "no boundary reachable".
pub const UNBOUNDED: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct AtomicRep {
    action: SelfSimilarAction,
    labels: Vec<String>,
    vertex: Vec<Vertex>,
    v: Vec<Image>,
    v_adj: Vec<Image>,
    s: Vec<Vec<Image>>,
    s_adj: Vec<Vec<Image>>,
    window_depth: usize,
    closure: TraceClosure,
    levels: Vec<u32>,
}

/// Raw tables for [`AtomicRep::from_tables`]; `s` and `s_adj` are indexed by edge, then label.
#[derive(Clone, Debug)]
pub struct AtomicTables {
    pub labels: Vec<String>,
    pub vertex: Vec<Vertex>,
    pub v: Vec<Image>,
    pub v_adj: Vec<Image>,
    pub s: Vec<Vec<Image>>,
    pub s_adj: Vec<Vec<Image>>,
    pub window_depth: usize,
    pub closure: TraceClosure,
}

impl AtomicRep {
    /// Validates the tables: partial maps are injective, `S_e` is supported on
    /// `I_{s(e)}` and lands in `I_{r(e)}`, edge ranges are disjoint, and each
    /// adjoint table inverts its forward table inside the window.
    pub fn from_tables(action: SelfSimilarAction, t: AtomicTables) -> Result<Self> {
        let g = action.graph();
        let n = t.labels.len();
        let bad = |m: String| Err(Error::InvalidRep(m));
        if t.vertex.len() != n || t.v.len() != n || t.v_adj.len() != n {
            return bad("table sizes differ from the label count".into());
        }
        if t.s.len() != g.num_edges() || t.s_adj.len() != g.num_edges() {
            return bad("S tables must have one row per edge".into());
        }
        if t.s.iter().chain(&t.s_adj).any(|r| r.len() != n) {
            return bad("S table row has the wrong length".into());
        }
        if t.vertex.iter().any(|v| v.0 >= g.num_vertices()) {
            return bad("vertex tag out of range".into());
        }
        let in_range = |img: &Image| match img {
            Image::To(y, _) => *y < n,
            _ => true,
        };
        if !t.v.iter().chain(&t.v_adj).chain(t.s.iter().flatten()).chain(t.s_adj.iter().flatten()).all(in_range) {
            return bad("image index out of range".into());
        }
        check_pair(&t.v, &t.v_adj, &t.labels, "V")?;
        let mut hit_by: Vec<Option<Edge>> = vec![None; n];
        for e in g.edges() {
            let (fwd, adj) = (&t.s[e.0], &t.s_adj[e.0]);
            check_pair(fwd, adj, &t.labels, g.edge_name(e))?;
            for x in 0..n {
                if t.vertex[x] != g.src(e) && fwd[x] != Image::Zero {
                    return bad(format!("S_{} acts on `{}` outside I_{}", g.edge_name(e), t.labels[x], g.vertex_name(g.src(e))));
                }
                if let Image::To(y, _) = fwd[x] {
                    if t.vertex[y] != g.rng(e) {
                        return bad(format!("S_{} maps `{}` outside I_{}", g.edge_name(e), t.labels[x], g.vertex_name(g.rng(e))));
                    }
                    if let Some(f) = hit_by[y] {
                        return bad(format!("`{}` lies in the ranges of S_{} and S_{}", t.labels[y], g.edge_name(f), g.edge_name(e)));
                    }
                    hit_by[y] = Some(e);
                }
            }
        }
        let mut rep = AtomicRep {
            action,
            labels: t.labels,
            vertex: t.vertex,
            v: t.v,
            v_adj: t.v_adj,
            s: t.s,
            s_adj: t.s_adj,
            window_depth: t.window_depth,
            closure: t.closure,
            levels: Vec::new(),
        };
        rep.levels = rep.compute_levels();
        Ok(rep)
    }

    pub fn tables(&self) -> AtomicTables {
        AtomicTables {
            labels: self.labels.clone(),
            vertex: self.vertex.clone(),
            v: self.v.clone(),
            v_adj: self.v_adj.clone(),
            s: self.s.clone(),
            s_adj: self.s_adj.clone(),
            window_depth: self.window_depth,
            closure: self.closure,
        }
    }

    pub fn action(&self) -> &SelfSimilarAction {
        &self.action
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn vertex_of(&self, x: usize) -> Vertex {
        self.vertex[x]
    }

    pub fn window_depth(&self) -> usize {
        self.window_depth
    }

    pub fn closure(&self) -> TraceClosure {
        self.closure
    }

    /// Largest `d` such that every generator word of length `≤ d` applied to
    /// `x` stays inside the window ([`UNBOUNDED`] if no boundary is reachable).
    pub fn level(&self, x: usize) -> u32 {
        self.levels[x]
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn is_interior(&self, x: usize, d: usize) -> bool {
        self.levels[x] as u64 >= d as u64
    }

    pub fn interior(&self, d: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.is_interior(x, d)).collect()
    }

    pub fn max_level(&self) -> u32 {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    pub fn gens(&self) -> Vec<Gen> {
        let mut out = vec![Gen::V, Gen::VAdj];
        for e in self.action.graph().edges() {
            out.push(Gen::S(e));
            out.push(Gen::SAdj(e));
        }
        out
    }

    pub fn apply(&self, g: Gen, x: usize) -> Image {
        match g {
            Gen::V => self.v[x],
            Gen::VAdj => self.v_adj[x],
            Gen::S(e) => self.s[e.0][x],
            Gen::SAdj(e) => self.s_adj[e.0][x],
            Gen::P(v) => {
                if self.vertex[x] == v {
                    Image::To(x, Phase::one())
                } else {
                    Image::Zero
                }
            }
        }
    }

    pub fn apply_image(&self, g: Gen, img: Image) -> Image {
        match img {
            Image::To(x, ph) => self.apply(g, x).scaled(ph),
            other => other,
        }
    }

    pub fn apply_word(&self, w: &Word, x: usize) -> Image {
        w.acting_order().fold(Image::To(x, Phase::one()), |img, &g| self.apply_image(g, img))
    }

    /// Replaces the V tables (used when extending an S-part).
    pub(crate) fn with_v(&self, v: Vec<Image>, v_adj: Vec<Image>) -> Result<AtomicRep> {
        let mut t = self.tables();
        t.v = v;
        t.v_adj = v_adj;
        AtomicRep::from_tables(self.action.clone(), t)
    }

    /// Labels that no `S_e` hits, certified exactly (no unknown adjoint image).
    pub fn wandering_labels(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.action.graph().edges().all(|e| self.s_adj[e.0][x] == Image::Zero))
            .collect()
    }

    /// `Some(true)` if the nonzero vectors `S_μ V^p x` with `|μ| + p ≤ depth`
    /// are pairwise distinct labels; `None` if some leave the window.
    pub fn is_wandering(&self, x: usize, depth: usize) -> Option<bool> {
        let g = self.action.graph();
        let mut hits = Vec::new();
        let mut vp = Image::To(x, Phase::one());
        for p in 0..=depth {
            if p > 0 {
                vp = self.apply_image(Gen::V, vp);
            }
            let mut layer = vec![vp];
            for len in 0..=(depth - p) {
                let mut next = Vec::new();
                for img in layer {
                    match img {
                        Image::Unknown => return None,
                        Image::Zero => {}
                        Image::To(y, _) => {
                            hits.push(y);
                            if len < depth - p {
                                next.extend(g.edges().map(|e| self.apply_image(Gen::S(e), img)));
                            }
                        }
                    }
                }
                layer = next;
            }
        }
        let total = hits.len();
        hits.sort_unstable();
        hits.dedup();
        Some(hits.len() == total)
    }

    fn compute_levels(&self) -> Vec<u32> {
        let n = self.len();
        let gens = self.gens();
        let mut level = vec![UNBOUNDED; n];
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut queue = VecDeque::new();
        for x in 0..n {
            for &g in &gens {
                match self.apply(g, x) {
                    Image::Unknown => {
                        if level[x] != 0 {
                            level[x] = 0;
                            queue.push_back(x);
                        }
                    }
                    Image::To(y, _) => rev[y].push(x),
                    Image::Zero => {}
                }
            }
        }
        while let Some(y) = queue.pop_front() {
            let d = level[y] + 1;
            for &x in &rev[y] {
                if level[x] > d {
                    level[x] = d;
                    queue.push_back(x);
                }
            }
        }
        level
    }

    /// Compression to an invariant set of labels: `V` and `S_e` are kept,
    /// adjoint images leaving the set become zero.
    pub fn restrict_to_invariant(&self, keep: &[usize]) -> Result<AtomicRep> {
        let mut idx = vec![usize::MAX; self.len()];
        for (i, &x) in keep.iter().enumerate() {
            idx[x] = i;
        }
        let map_fwd = |img: Image| -> Result<Image> {
            match img {
                Image::To(y, ph) if idx[y] != usize::MAX => Ok(Image::To(idx[y], ph)),
                Image::To(..) => Err(Error::InvalidRep("label set is not invariant".into())),
                other => Ok(other),
            }
        };
        let map_adj = |img: Image| match img {
            Image::To(y, ph) if idx[y] != usize::MAX => Image::To(idx[y], ph),
            Image::To(..) => Image::Zero,
            other => other,
        };
        let pick = |tab: &Vec<Image>| keep.iter().map(|&x| tab[x]).collect::<Vec<_>>();
        let v = pick(&self.v).into_iter().map(map_fwd).collect::<Result<Vec<_>>>()?;
        let v_adj = pick(&self.v_adj).into_iter().map(map_adj).collect();
        let s = self
            .s
            .iter()
            .map(|row| pick(row).into_iter().map(map_fwd).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let s_adj = self.s_adj.iter().map(|row| pick(row).into_iter().map(map_adj).collect()).collect();
        AtomicRep::from_tables(
            self.action.clone(),
            AtomicTables {
                labels: keep.iter().map(|&x| self.labels[x].clone()).collect(),
                vertex: keep.iter().map(|&x| self.vertex[x]).collect(),
                v,
                v_adj,
                s,
                s_adj,
                window_depth: self.window_depth,
                closure: self.closure,
            },
        )
    }

    /// Orthogonal direct sum; labels of the second summand get a `'` suffix.
    pub fn direct_sum(&self, other: &AtomicRep) -> Result<AtomicRep> {
        if self.action != other.action {
            return Err(Error::InvalidRep("direct sum needs a common action".into()));
        }
        let off = self.len();
        let shift = |img: Image| match img {
            Image::To(y, ph) => Image::To(y + off, ph),
            o => o,
        };
        let cat = |a: &Vec<Image>, b: &Vec<Image>| a.iter().copied().chain(b.iter().map(|&i| shift(i))).collect::<Vec<_>>();
        AtomicRep::from_tables(
            self.action.clone(),
            AtomicTables {
                labels: self.labels.iter().cloned().chain(other.labels.iter().map(|l| format!("{l}'"))).collect(),
                vertex: self.vertex.iter().chain(&other.vertex).copied().collect(),
                v: cat(&self.v, &other.v),
                v_adj: cat(&self.v_adj, &other.v_adj),
                s: self.s.iter().zip(&other.s).map(|(a, b)| cat(a, b)).collect(),
                s_adj: self.s_adj.iter().zip(&other.s_adj).map(|(a, b)| cat(a, b)).collect(),
                window_depth: self.window_depth.min(other.window_depth),
                closure: TraceClosure {
                    s_trace: self.closure.s_trace && other.closure.s_trace,
                    v_trace: self.closure.v_trace && other.closure.v_trace,
                },
            },
        )
    }
}

fn check_pair(fwd: &[Image], adj: &[Image], labels: &[String], name: &str) -> Result<()> {
    for x in 0..fwd.len() {
        if let Image::To(y, ph) = fwd[x] {
            match adj[y] {
                Image::To(z, ps) if z == x && ps.approx_eq(&ph.conj()) => {}
                _ => {
                    return Err(Error::InvalidRep(format!(
                        "{name}* does not invert {name} at `{}` -> `{}`",
                        labels[x], labels[y]
                    )))
                }
            }
        }
        if let Image::To(y, ph) = adj[x] {
            match fwd[y] {
                Image::To(z, ps) if z == x && ps.approx_eq(&ph.conj()) => {}
                _ => {
                    return Err(Error::InvalidRep(format!(
                        "{name} does not invert {name}* at `{}` -> `{}`",
                        labels[x], labels[y]
                    )))
                }
            }
        }
    }
    Ok(())
}
