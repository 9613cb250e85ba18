//! Dense floating-point engine.
//!
//! Matrices are stored densely (the shape callers see) together with a
//! sparse column cache used for evaluation. Each generator column also
//! carries a boundary flag: a flagged column is not trusted, and any
//! evaluation that needs it is reported as uncertified instead of being
//! compared.

mod checks;
mod fock;


use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex;

pub use checks::{compress, compression_check, Combo, IdentityCheck, MatrixRelationReport};
pub use fock::build_fock;

use crate::action::SelfSimilarAction;
use crate::atomic::{AtomicRep, Image, TraceClosure, UNBOUNDED};
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};
use crate::scalar::Real;
use crate::word::{Gen, Word};

pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Sparse vector: `(index, coefficient)` sorted by index, no repeats.
pub type SparseVec<T> = Vec<(usize, Complex<T>)>;

/// Matrices and boundary flags for [`MatrixRep::new`]; `s`, `s_adj` are indexed by edge.
#[derive(Clone, Debug)]
pub struct MatrixParts<T: Real> {
    pub labels: Vec<String>,
    pub vertex: Vec<Vertex>,
    pub v: CMatrix<T>,
    pub v_adj: CMatrix<T>,
    pub s: Vec<CMatrix<T>>,
    pub s_adj: Vec<CMatrix<T>>,
    /// Untrusted columns, indexed by generator slot (`V`, `V*`, then `S_e`, `S_e*` per edge).
    pub boundary: Vec<Vec<bool>>,
    pub closure: TraceClosure,
}

#[derive(Clone, Debug)]
pub struct MatrixRep<T: Real> {
    action: SelfSimilarAction,
    labels: Vec<String>,
    vertex: Vec<Vertex>,
    mats: Vec<CMatrix<T>>,
    cols: Vec<Vec<SparseVec<T>>>,
    boundary: Vec<Vec<bool>>,
    levels: Vec<u32>,
    closure: TraceClosure,
}

fn slot(g: Gen) -> Option<usize> {
    match g {
        Gen::V => Some(0),
        Gen::VAdj => Some(1),
        Gen::S(e) => Some(2 + 2 * e.0),
        Gen::SAdj(e) => Some(3 + 2 * e.0),
        Gen::P(_) => None,
    }
}

pub(crate) fn sparse_columns<T: Real>(m: &CMatrix<T>) -> Vec<SparseVec<T>> {
    (0..m.ncols())
        .map(|j| m.column(j).iter().enumerate().filter(|(_, c)| **c != Complex::new(T::zero(), T::zero())).map(|(i, c)| (i, *c)).collect())
        .collect()
}

/// Sorts, merges repeated indices and drops negligible coefficients.
pub(crate) fn normalize<T: Real>(mut v: SparseVec<T>) -> SparseVec<T> {
    v.sort_by_key(|p| p.0);
    let mut out: SparseVec<T> = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += c,
            _ => out.push((i, c)),
        }
    }
    let eps = T::tol(1e-14);
    out.retain(|(_, c)| c.norm() > eps);
    out
}

pub(crate) fn sparse_add<T: Real>(a: &SparseVec<T>, b: &SparseVec<T>, scale: Complex<T>) -> SparseVec<T> {
    normalize(a.iter().copied().chain(b.iter().map(|&(i, c)| (i, c * scale))).collect())
}

pub(crate) fn sparse_norm<T: Real>(a: &SparseVec<T>) -> T {
    num_traits::Float::sqrt(a.iter().fold(T::zero(), |s, (_, c)| s + c.norm_sqr()))
}

pub(crate) fn sparse_dot<T: Real>(a: &SparseVec<T>, b: &SparseVec<T>) -> Complex<T> {
    // <a, b> = Σ conj(a_i) b_i
    let (mut i, mut j) = (0, 0);
    let mut s = Complex::new(T::zero(), T::zero());
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

pub(crate) fn unit<T: Real>(x: usize) -> SparseVec<T> {
    vec![(x, Complex::new(T::one(), T::zero()))]
}

impl<T: Real> MatrixRep<T> {
    pub fn new(action: SelfSimilarAction, p: MatrixParts<T>) -> Result<Self> {
        let n = p.labels.len();
        let ne = action.graph().num_edges();
        if p.vertex.len() != n || p.s.len() != ne || p.s_adj.len() != ne || p.boundary.len() != 2 + 2 * ne {
            return Err(Error::InvalidRep("table sizes do not match the graph".into()));
        }
        let mut mats = vec![p.v, p.v_adj];
        for (s, sa) in p.s.into_iter().zip(p.s_adj) {
            mats.push(s);
            mats.push(sa);
        }
        if mats.iter().any(|m| m.nrows() != n || m.ncols() != n) || p.boundary.iter().any(|b| b.len() != n) {
            return Err(Error::InvalidRep(format!("matrices must be {n}×{n}")));
        }
        if p.vertex.iter().any(|v| v.0 >= action.graph().num_vertices()) {
            return Err(Error::InvalidRep("label vertex out of range".into()));
        }
        let cols = mats.iter().map(sparse_columns).collect();
        let mut rep = MatrixRep {
            action,
            labels: p.labels,
            vertex: p.vertex,
            mats,
            cols,
            boundary: p.boundary,
            levels: Vec::new(),
            closure: p.closure,
        };
        rep.levels = rep.compute_levels();
        Ok(rep)
    }

    /// Matrix form of an atomic representation; unknown images become zero columns flagged as boundary.
    pub fn from_atomic(rep: &AtomicRep) -> Self {
        let n = rep.len();
        let g = rep.action().graph();
        let mut gens = vec![Gen::V, Gen::VAdj];
        for e in g.edges() {
            gens.push(Gen::S(e));
            gens.push(Gen::SAdj(e));
        }
        let mut mats = Vec::new();
        let mut boundary = Vec::new();
        for &gen in &gens {
            let mut m = CMatrix::<T>::zeros(n, n);
            let mut b = vec![false; n];
            for x in 0..n {
                match rep.apply(gen, x) {
                    Image::To(y, ph) => m[(y, x)] = ph.to_complex::<T>(),
                    Image::Unknown => b[x] = true,
                    Image::Zero => {}
                }
            }
            mats.push(m);
            boundary.push(b);
        }
        let mut it = mats.into_iter();
        let v = it.next().unwrap();
        let v_adj = it.next().unwrap();
        let mut s = Vec::new();
        let mut s_adj = Vec::new();
        while let (Some(a), Some(b)) = (it.next(), it.next()) {
            s.push(a);
            s_adj.push(b);
        }
        let parts = MatrixParts {
            labels: rep.labels().to_vec(),
            vertex: (0..n).map(|x| rep.vertex_of(x)).collect(),
            v,
            v_adj,
            s,
            s_adj,
            boundary,
            closure: rep.closure(),
        };
        MatrixRep::new(rep.action().clone(), parts).expect("atomic tables are consistent")
    }

    pub fn action(&self) -> &SelfSimilarAction {
        &self.action
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
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

    pub fn closure(&self) -> TraceClosure {
        self.closure
    }

    pub fn v(&self) -> &CMatrix<T> {
        &self.mats[0]
    }

    pub fn v_adj(&self) -> &CMatrix<T> {
        &self.mats[1]
    }

    pub fn s(&self, e: Edge) -> &CMatrix<T> {
        &self.mats[2 + 2 * e.0]
    }

    pub fn s_adj(&self, e: Edge) -> &CMatrix<T> {
        &self.mats[3 + 2 * e.0]
    }

    /// The diagonal 0/1 matrix `P_v`.
    pub fn p(&self, v: Vertex) -> CMatrix<T> {
        let n = self.dim();
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.vertex.iter().map(|&w| if w == v { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) }),
        ))
    }

    /// Dense matrix of a generator.
    pub fn gen_matrix(&self, g: Gen) -> CMatrix<T> {
        match slot(g) {
            Some(i) => self.mats[i].clone(),
            None => match g {
                Gen::P(v) => self.p(v),
                _ => unreachable!(),
            },
        }
    }

    /// Dense product for a word, boundary columns included.
    pub fn word_matrix(&self, w: &Word) -> CMatrix<T> {
        let n = self.dim();
        w.acting_order().fold(CMatrix::identity(n, n), |acc, &g| self.gen_matrix(g) * acc)
    }

    pub fn gens(&self) -> Vec<Gen> {
        let mut out = vec![Gen::V, Gen::VAdj];
        for e in self.action.graph().edges() {
            out.push(Gen::S(e));
            out.push(Gen::SAdj(e));
        }
        out
    }

    pub fn is_boundary(&self, g: Gen, x: usize) -> bool {
        slot(g).is_some_and(|i| self.boundary[i][x])
    }

    pub fn boundary_mask(&self, g: Gen) -> Vec<bool> {
        slot(g).map_or_else(|| vec![false; self.dim()], |i| self.boundary[i].clone())
    }

    /// Nonzero entries of a generator column.
    pub fn column(&self, g: Gen, x: usize) -> SparseVec<T> {
        match slot(g) {
            Some(i) => self.cols[i][x].clone(),
            None => match g {
                Gen::P(v) if self.vertex[x] == v => unit(x),
                _ => Vec::new(),
            },
        }
    }

    pub fn level(&self, x: usize) -> u32 {
        self.levels[x]
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn interior(&self, d: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&x| self.levels[x] >= d as u32).collect()
    }

    pub fn max_level(&self) -> u32 {
        self.levels.iter().copied().filter(|&l| l != UNBOUNDED).max().unwrap_or(0)
    }

    fn compute_levels(&self) -> Vec<u32> {
        let n = self.dim();
        let mut level = vec![UNBOUNDED; n];
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut queue = VecDeque::new();
        for (i, cols) in self.cols.iter().enumerate() {
            for x in 0..n {
                if self.boundary[i][x] {
                    if level[x] != 0 {
                        level[x] = 0;
                        queue.push_back(x);
                    }
                } else {
                    for &(y, _) in &cols[x] {
                        rev[y].push(x);
                    }
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

    /// `g·v`, or `None` if `v` has weight on an untrusted column of `g`.
    pub fn apply(&self, g: Gen, v: &SparseVec<T>) -> Option<SparseVec<T>> {
        match slot(g) {
            Some(i) => {
                let mut out = Vec::new();
                for &(x, c) in v {
                    if self.boundary[i][x] {
                        return None;
                    }
                    out.extend(self.cols[i][x].iter().map(|&(y, a)| (y, a * c)));
                }
                Some(normalize(out))
            }
            None => match g {
                Gen::P(p) => Some(v.iter().copied().filter(|&(x, _)| self.vertex[x] == p).collect()),
                _ => unreachable!(),
            },
        }
    }

    pub fn apply_word(&self, w: &Word, v: &SparseVec<T>) -> Option<SparseVec<T>> {
        w.acting_order().try_fold(v.clone(), |acc, &g| self.apply(g, &acc))
    }

    /// Certified `w e_x`.
    pub fn eval(&self, w: &Word, x: usize) -> Option<SparseVec<T>> {
        self.apply_word(w, &unit(x))
    }

    /// Compression to a set of labels: images leaving the set flag the column as boundary.
    pub fn restrict(&self, keep: &[usize]) -> MatrixRep<T> {
        let n = self.dim();
        let mut idx = vec![usize::MAX; n];
        for (i, &x) in keep.iter().enumerate() {
            idx[x] = i;
        }
        let k = keep.len();
        let mut mats = Vec::new();
        let mut boundary = Vec::new();
        for (m, cols) in self.cols.iter().enumerate() {
            let mut mat = CMatrix::<T>::zeros(k, k);
            let mut b = vec![false; k];
            for (i, &x) in keep.iter().enumerate() {
                b[i] = self.boundary[m][x];
                for &(y, c) in &cols[x] {
                    if idx[y] == usize::MAX {
                        b[i] = true;
                    } else {
                        mat[(idx[y], i)] = c;
                    }
                }
            }
            mats.push(mat);
            boundary.push(b);
        }
        let mut it = mats.into_iter();
        let v = it.next().unwrap();
        let v_adj = it.next().unwrap();
        let (mut s, mut s_adj) = (Vec::new(), Vec::new());
        while let (Some(a), Some(b)) = (it.next(), it.next()) {
            s.push(a);
            s_adj.push(b);
        }
        MatrixRep::new(
            self.action.clone(),
            MatrixParts {
                labels: keep.iter().map(|&x| self.labels[x].clone()).collect(),
                vertex: keep.iter().map(|&x| self.vertex[x]).collect(),
                v,
                v_adj,
                s,
                s_adj,
                boundary,
                closure: self.closure,
            },
        )
        .expect("restriction keeps shapes")
    }

    pub fn parts(&self) -> MatrixParts<T> {
        let ne = self.action.graph().num_edges();
        MatrixParts {
            labels: self.labels.clone(),
            vertex: self.vertex.clone(),
            v: self.mats[0].clone(),
            v_adj: self.mats[1].clone(),
            s: (0..ne).map(|e| self.mats[2 + 2 * e].clone()).collect(),
            s_adj: (0..ne).map(|e| self.mats[3 + 2 * e].clone()).collect(),
            boundary: self.boundary.clone(),
            closure: self.closure,
        }
    }
}
