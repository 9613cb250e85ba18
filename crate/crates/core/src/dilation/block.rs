//! The `2×2` block family on `H ⊕ K` over a unitary + CK representation:
//!
//! `V' = [[V, A], [0, B]]`, `S'_v = diag(S_v, P_v)`, `S'_e = [[S_e, C_e], [E_e, D_e]]`.
//!
//! Such a `(V', S')` compresses to `(V, S)` on `H`. When `H` is unitary and
//! CK, any off-diagonal block forces a violation of one of: `V'` isometric,
//! `S'_e* S'_e = S'_{s(e)}`, `Σ S'_e S'_e* ≤ I`. [`verify_block_dilation`]
//! measures all three on the certified part of `H` and all of `K`.

use nalgebra::DVector;
use num_complex::Complex;
use serde::Serialize;

use crate::graph::Vertex;
use crate::matrix::{sparse_add, sparse_norm, unit, CMatrix, MatrixRep, SparseVec};
use crate::scalar::Real;
use crate::word::Gen;

#[derive(Clone, Debug)]
pub struct BlockDilation<T: Real> {
    pub rep: MatrixRep<T>,
    /// Vertex of each basis vector of `K`; `None` means `P_v` vanishes on it for every `v`.
    pub aux_vertex: Vec<Option<Vertex>>,
    /// `H × K`.
    pub a: CMatrix<T>,
    /// `K × K`.
    pub b: CMatrix<T>,
    /// Per edge, `H × K`.
    pub c: Vec<CMatrix<T>>,
    /// Per edge, `K × K`.
    pub d: Vec<CMatrix<T>>,
    /// Per edge, `K × H`.
    pub e: Vec<CMatrix<T>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockVerdict {
    /// `max ‖(V'*V' − I) x‖` over the tested basis vectors.
    pub isometry: f64,
    /// `max ‖(S'_e*S'_e − S'_{s(e)}) x‖`.
    pub tck2: f64,
    /// `λ_max(Σ S'_eS'_e*) − 1` on the tested subspace.
    pub sum_excess: f64,
    pub columns: usize,
    pub tolerance: f64,
    /// Some condition fails beyond the tolerance.
    pub detected: bool,
}

/// A vector of `H ⊕ K`.
#[derive(Clone)]
struct Split<T: Real> {
    h: SparseVec<T>,
    k: DVector<Complex<T>>,
}

impl<T: Real> Split<T> {
    fn norm_sqr(&self) -> T {
        let h = sparse_norm(&self.h);
        h * h + self.k.norm_squared()
    }

    fn sub(&self, o: &Split<T>) -> Split<T> {
        Split { h: sparse_add(&self.h, &o.h, Complex::new(-T::one(), T::zero())), k: &self.k - &o.k }
    }

    fn add(&self, o: &Split<T>) -> Split<T> {
        Split { h: sparse_add(&self.h, &o.h, Complex::new(T::one(), T::zero())), k: &self.k + &o.k }
    }

    fn dot(&self, o: &Split<T>) -> Complex<T> {
        crate::matrix::sparse_dot(&self.h, &o.h) + self.k.dotc(&o.k)
    }
}

impl<T: Real> BlockDilation<T> {
    fn kdim(&self) -> usize {
        self.b.nrows()
    }

    /// `M h` for a dense `rows × H` matrix and sparse `h`.
    fn from_h(m: &CMatrix<T>, h: &SparseVec<T>) -> DVector<Complex<T>> {
        let mut out = DVector::zeros(m.nrows());
        for &(x, c) in h {
            out += m.column(x) * c;
        }
        out
    }

    /// `M k` for a dense `H × K` matrix, as a sparse vector.
    fn to_h(m: &CMatrix<T>, k: &DVector<Complex<T>>) -> SparseVec<T> {
        crate::matrix::normalize((m * k).iter().enumerate().map(|(i, c)| (i, *c)).collect())
    }

    fn v(&self, x: &Split<T>) -> Option<Split<T>> {
        let vh = self.rep.apply(Gen::V, &x.h)?;
        Some(Split { h: sparse_add(&vh, &Self::to_h(&self.a, &x.k), Complex::new(T::one(), T::zero())), k: &self.b * &x.k })
    }

    fn v_adj(&self, x: &Split<T>) -> Option<Split<T>> {
        let h = self.rep.apply(Gen::VAdj, &x.h)?;
        let k = Self::from_h(&self.a.adjoint(), &x.h) + self.b.adjoint() * &x.k;
        Some(Split { h, k })
    }

    fn s(&self, e: usize, x: &Split<T>) -> Option<Split<T>> {
        let sh = self.rep.apply(Gen::S(crate::graph::Edge(e)), &x.h)?;
        let h = sparse_add(&sh, &Self::to_h(&self.c[e], &x.k), Complex::new(T::one(), T::zero()));
        let k = Self::from_h(&self.e[e], &x.h) + &self.d[e] * &x.k;
        Some(Split { h, k })
    }

    fn s_adj(&self, e: usize, x: &Split<T>) -> Option<Split<T>> {
        let sh = self.rep.apply(Gen::SAdj(crate::graph::Edge(e)), &x.h)?;
        let h = sparse_add(&sh, &Self::to_h(&self.e[e].adjoint(), &x.k), Complex::new(T::one(), T::zero()));
        let k = Self::from_h(&self.c[e].adjoint(), &x.h) + self.d[e].adjoint() * &x.k;
        Some(Split { h, k })
    }

    fn p(&self, v: Vertex, x: &Split<T>) -> Split<T> {
        let h = self.rep.apply(Gen::P(v), &x.h).expect("P_v is always certified");
        let k = DVector::from_iterator(self.kdim(), x.k.iter().enumerate().map(|(i, c)| if self.aux_vertex[i] == Some(v) { *c } else { Complex::new(T::zero(), T::zero()) }));
        Split { h, k }
    }

    fn basis(&self) -> Vec<Split<T>> {
        let kd = self.kdim();
        let mut out: Vec<Split<T>> = (0..self.rep.dim()).map(|x| Split { h: unit(x), k: DVector::zeros(kd) }).collect();
        for i in 0..kd {
            let mut k = DVector::zeros(kd);
            k[i] = Complex::new(T::one(), T::zero());
            out.push(Split { h: Vec::new(), k });
        }
        out
    }
}

/// Measures the three conditions on every basis vector of `H ⊕ K` whose
/// evaluations are certified.
pub fn verify_block_dilation<T: Real>(bd: &BlockDilation<T>, tol: f64) -> BlockVerdict {
    let g = bd.rep.action().graph();
    let ne = g.num_edges();
    let basis = bd.basis();
    let (mut iso, mut tck2) = (T::zero(), T::zero());
    let mut tested: Vec<usize> = Vec::new();
    let mut sums: Vec<Split<T>> = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        let Some(vv) = bd.v(x).and_then(|y| bd.v_adj(&y)) else { continue };
        let mut pairs = Vec::with_capacity(ne);
        let mut sum: Option<Split<T>> = Some(Split { h: Vec::new(), k: DVector::zeros(bd.kdim()) });
        for e in 0..ne {
            pairs.push(bd.s(e, x).and_then(|y| bd.s_adj(e, &y)));
            sum = match (sum, bd.s_adj(e, x).and_then(|y| bd.s(e, &y))) {
                (Some(s), Some(y)) => Some(s.add(&y)),
                _ => None,
            };
        }
        let (Some(pairs), Some(sum)) = (pairs.into_iter().collect::<Option<Vec<_>>>(), sum) else { continue };
        iso = num_traits::Float::max(iso, num_traits::Float::sqrt(vv.sub(x).norm_sqr()));
        for (e, ss) in pairs.iter().enumerate() {
            let src = g.src(crate::graph::Edge(e));
            tck2 = num_traits::Float::max(tck2, num_traits::Float::sqrt(ss.sub(&bd.p(src, x)).norm_sqr()));
        }
        tested.push(i);
        sums.push(sum);
    }
    // compression of Σ S'_eS'_e* to the tested basis vectors
    let t = tested.len();
    let mut m = CMatrix::<T>::zeros(t, t);
    for (c, sum) in sums.iter().enumerate() {
        for (r, &i) in tested.iter().enumerate() {
            m[(r, c)] = basis[i].dot(sum);
        }
    }
    let m = (&m + m.adjoint()) * Complex::new(T::of(0.5), T::zero());
    let lmax = if t == 0 { T::zero() } else { m.symmetric_eigen().eigenvalues.iter().copied().fold(T::neg_infinity(), num_traits::Float::max) };
    let sum_excess = (lmax - T::one()).to_f64();
    let (iso, tck2) = (iso.to_f64(), tck2.to_f64());
    BlockVerdict { isometry: iso, tck2, sum_excess, columns: t, tolerance: tol, detected: iso > tol || tck2 > tol || sum_excess > tol }
}
