//! Unitary dilations of Toeplitz representations.
//!
//! A dilation is a bigger representation `(Û, Ŝ)` with `Û` unitary and an
//! isometry `J: H → Ĥ` such that `J* ŵ J = w` for every word `w` in `V`,
//! `S_e` and `P_v`. Three constructions are provided:
//!
//! * [`dilate_pure_case`]: for `V` pure, `Ĥ = W ⊗ ℓ²(Z)` truncated to
//!   `|k| ≤ K`, with `H` sitting in `k ≥ 0`.
//! * [`dilate_atomic_pure`]: the same construction carried out exactly on
//!   an atomic representation.
//! * [`dilate_unitary_pure`]: for a unitary + pure-shift representation,
//!   `Ĥ = H ⊗ C^M` with the twisted unitary built from the wandering space.
//!
//! [`check_trivial`] decides whether `J(H)` reduces the dilation, and
//! [`block`] covers the `2×2` block family over a unitary + CK representation.

pub mod block;
mod pure;
mod unitary;

#[cfg(test)]
mod tests;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use block::{verify_block_dilation, BlockDilation, BlockVerdict};
pub use pure::{dilate_atomic_pure, dilate_pure_case, dilate_pure_case_with, IntertwinerChoice};
pub use unitary::dilate_unitary_pure;

use crate::atomic::AtomicRep;
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::matrix::{compression_check, sparse_add, sparse_columns, sparse_norm, unit, CMatrix, IdentityCheck, MatrixRelationReport, MatrixRep, SparseVec};
use crate::scalar::Real;
use crate::word::{Gen, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    /// `W ⊗ ℓ²(Z)` for a pure `V`.
    #[serde(rename = "pure-case")]
    PureCase,
    /// `H ⊗ C^M` for a unitary + pure-shift representation.
    #[serde(rename = "unitary-pure-shift")]
    UnitaryPure,
    /// Orthogonal sum with another representation.
    #[serde(rename = "direct-sum")]
    DirectSum,
}

/// One intertwiner `V^q S_e = S_f V^p` used to define `Ŝ_e` on a negative level `-k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntertwinerUse {
    pub edge: String,
    pub k: i64,
    pub q: u64,
    pub p: u64,
    pub f: String,
}

#[derive(Clone, Debug)]
pub struct Dilation<T: Real> {
    pub construction: Construction,
    /// The dilated representation (restricted to the labels `J` is defined on).
    pub small: MatrixRep<T>,
    pub big: MatrixRep<T>,
    /// `J`, of shape `big.dim() × small.dim()`.
    pub embed: CMatrix<T>,
    /// `2K + 1` for the pure case, `M` for the unitary + pure-shift case.
    pub fiber: usize,
    pub intertwiners: Vec<IntertwinerUse>,
    /// How far the edge orbit was rotated so that its last edge has nonzero restriction.
    pub rotation: usize,
    /// `d` with `r(e0) = 1^d·s(e0)`; the embedding is precomposed with `U^{-d}`.
    pub offset: usize,
    /// Max mismatch between `Ŝ_e*` and the adjoint of `Ŝ_e` over certified pairs.
    pub adjoint_deviation: f64,
}

impl<T: Real> Dilation<T> {
    /// `J*J − I`, max absolute entry.
    pub fn isometry_deviation(&self) -> f64 {
        let d = self.embed.ncols();
        let g = self.embed.adjoint() * &self.embed - CMatrix::<T>::identity(d, d);
        g.iter().fold(0.0, |m, c| m.max(c.norm().to_f64()))
    }

    /// The trivial dilation `rep ⊕ other` with `J` the inclusion of the first summand.
    pub fn direct_sum(rep: &AtomicRep, other: &AtomicRep) -> Result<Dilation<T>> {
        let sum = rep.direct_sum(other)?;
        let big = MatrixRep::<T>::from_atomic(&sum);
        let small = MatrixRep::<T>::from_atomic(rep);
        let mut embed = CMatrix::<T>::zeros(big.dim(), small.dim());
        for x in 0..small.dim() {
            embed[(x, x)] = Complex::new(T::one(), T::zero());
        }
        Ok(Dilation {
            construction: Construction::DirectSum,
            small,
            big,
            embed,
            fiber: 1,
            intertwiners: Vec::new(),
            rotation: 0,
            offset: 0,
            adjoint_deviation: 0.0,
        })
    }
}

/// Off-corner blocks `(I − JJ*) G JJ*` and `JJ* G (I − JJ*)` of one generator.
#[derive(Clone, Debug, Serialize)]
pub struct BlockNorm {
    pub generator: String,
    pub lower: f64,
    pub upper: f64,
    pub columns: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrivialityReport {
    /// `J(H)` reduces every generator on the certified columns.
    pub trivial: bool,
    pub max_norm: f64,
    pub tolerance: f64,
    pub blocks: Vec<BlockNorm>,
}

struct Projector<T: Real> {
    jcols: Vec<SparseVec<T>>,
    rows: Vec<SparseVec<T>>,
}

impl<T: Real> Projector<T> {
    fn new(embed: &CMatrix<T>) -> Self {
        let jcols = sparse_columns(embed);
        let mut rows: Vec<SparseVec<T>> = vec![Vec::new(); embed.nrows()];
        for (x, col) in jcols.iter().enumerate() {
            for &(i, c) in col {
                rows[i].push((x, c.conj()));
            }
        }
        Projector { jcols, rows }
    }

    /// `J* v`.
    fn pull(&self, v: &SparseVec<T>) -> SparseVec<T> {
        let mut out = Vec::new();
        for &(i, c) in v {
            out.extend(self.rows[i].iter().map(|&(x, a)| (x, a * c)));
        }
        crate::matrix::normalize(out)
    }

    /// `J u`.
    fn push(&self, u: &SparseVec<T>) -> SparseVec<T> {
        let mut out = Vec::new();
        for &(x, c) in u {
            out.extend(self.jcols[x].iter().map(|&(i, a)| (i, a * c)));
        }
        crate::matrix::normalize(out)
    }

    fn project(&self, v: &SparseVec<T>) -> SparseVec<T> {
        self.push(&self.pull(v))
    }
}

fn minus<T: Real>() -> Complex<T> {
    Complex::new(-T::one(), T::zero())
}

/// Frobenius norms of the off-corner blocks of every generator of the big
/// representation with respect to `JJ*`, summed over certified columns.
/// The dilation is trivial when all of them vanish up to `tol`.
pub fn check_trivial<T: Real>(d: &Dilation<T>, tol: f64) -> TrivialityReport {
    let big = &d.big;
    let proj = Projector::new(&d.embed);
    let g = big.action().graph();
    let mut blocks = Vec::new();
    let mut max_norm: f64 = 0.0;
    for gen in big.gens() {
        let (mut lower, mut upper) = (T::zero(), T::zero());
        let mut columns = 0;
        for x in 0..big.dim() {
            let ex = unit::<T>(x);
            let px = proj.project(&ex);
            let qx = sparse_add(&ex, &px, minus());
            let (Some(gp), Some(gq)) = (big.apply(gen, &px), big.apply(gen, &qx)) else { continue };
            columns += 1;
            // (I − P) G P e_x and P G (I − P) e_x
            let lo = sparse_add(&gp, &proj.project(&gp), minus());
            let up = proj.project(&gq);
            let (a, b) = (sparse_norm(&lo), sparse_norm(&up));
            lower += a * a;
            upper += b * b;
        }
        let (lower, upper) = (num_traits::Float::sqrt(lower).to_f64(), num_traits::Float::sqrt(upper).to_f64());
        max_norm = max_norm.max(lower).max(upper);
        blocks.push(BlockNorm { generator: gen.display(g), lower, upper, columns });
    }
    TrivialityReport { trivial: max_norm <= tol, max_norm, tolerance: tol, blocks }
}

#[derive(Clone, Debug, Serialize)]
pub struct DilationReport {
    pub construction: Construction,
    pub small_dim: usize,
    pub big_dim: usize,
    pub fiber: usize,
    pub rotation: usize,
    pub offset: usize,
    pub intertwiners: Vec<IntertwinerUse>,
    pub isometry_deviation: f64,
    pub adjoint_deviation: f64,
    /// `J* ŵ J = w` for every word up to the requested length.
    pub compressions: Vec<IdentityCheck>,
    pub max_compression_deviation: f64,
    /// `Ŝ_μ J = J S_μ` on single generators.
    pub intertwining: Vec<IdentityCheck>,
    /// Relations of the big representation.
    pub big_relations: MatrixRelationReport,
    pub big_v_unitary: bool,
    /// `Some` when the small representation is CK on its interior.
    pub ck_preserved: Option<bool>,
    pub nontriviality: TrivialityReport,
    pub passed: bool,
}

fn words_up_to(gens: &[Gen], len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for &g in gens {
                next.push(Word::new([g]).then(w));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `ŵ J e_x = J w e_x`, checked on columns where both sides are certified.
fn intertwining_check<T: Real>(d: &Dilation<T>, gen: Gen) -> Option<IdentityCheck> {
    let proj = Projector::new(&d.embed);
    let tol = T::tol(1e-12);
    let mut dev = T::zero();
    let (mut columns, mut skipped) = (0, 0);
    for x in 0..d.small.dim() {
        let (Some(l), Some(r)) = (d.big.apply(gen, &proj.jcols[x]), d.small.apply(gen, &unit(x))) else {
            skipped += 1;
            continue;
        };
        columns += 1;
        let diff = sparse_norm(&sparse_add(&l, &proj.push(&r), minus()));
        if diff > dev {
            dev = diff;
        }
    }
    if columns == 0 {
        return None;
    }
    let name = gen.display(d.small.action().graph());
    Some(IdentityCheck {
        relation: "intertwining".into(),
        lhs: format!("{name}^ J"),
        rhs: format!("J {name}"),
        deviation: dev.to_f64(),
        witness: None,
        columns,
        skipped,
        tolerance: tol.to_f64(),
        exact: dev == T::zero(),
        passed: dev <= tol,
    })
}

/// Runs every check on a dilation: `J*J = I`, compressions of all words of
/// length `≤ max_len` in `V`, `S_e`, `P_v`, intertwining of `V` and `S_e`,
/// the relations of the big representation, CK preservation and
/// nontriviality.
pub fn verify_dilation<T: Real>(d: &Dilation<T>, max_len: usize) -> Result<DilationReport> {
    let a = d.small.action();
    let g = a.graph();
    let iso = d.isometry_deviation();
    if iso > T::tol(1e-12).to_f64() {
        return Err(Error::NotIsometry { deviation: iso });
    }
    let mut gens = vec![Gen::V];
    gens.extend(g.edges().map(Gen::S));
    gens.extend(g.vertices().map(Gen::P));
    let mut compressions = Vec::new();
    for w in words_up_to(&gens, max_len) {
        match compression_check(&d.big, &d.embed, &d.small, &w) {
            Ok(c) => compressions.push(c),
            Err(Error::InteriorTooSmall { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if compressions.is_empty() {
        return Err(Error::InteriorTooSmall { needed: max_len, available: d.small.max_level() as usize });
    }
    let max_compression_deviation = compressions.iter().fold(0.0, |m: f64, c| m.max(c.deviation));
    let intertwining: Vec<_> = [Gen::V].into_iter().chain(g.edges().map(Gen::S)).filter_map(|gen| intertwining_check(d, gen)).collect();

    let big_relations = d.big.verify_identities();
    let big_v_unitary = big_relations.v_unitary_on_interior;
    let small_rel = d.small.verify_identities();
    let ck_preserved = small_rel.ck_on_interior.then(|| big_ck(&d.big));
    let nontriviality = check_trivial(d, T::tol(1e-10).to_f64());
    let passed = compressions.iter().all(|c| c.passed)
        && intertwining.iter().all(|c| c.passed)
        && big_relations.passed()
        && big_v_unitary
        && d.adjoint_deviation <= T::tol(1e-12).to_f64()
        && ck_preserved != Some(false);
    Ok(DilationReport {
        construction: d.construction,
        small_dim: d.small.dim(),
        big_dim: d.big.dim(),
        fiber: d.fiber,
        rotation: d.rotation,
        offset: d.offset,
        intertwiners: d.intertwiners.clone(),
        isometry_deviation: iso,
        adjoint_deviation: d.adjoint_deviation,
        compressions,
        max_compression_deviation,
        intertwining,
        big_relations,
        big_v_unitary,
        ck_preserved,
        nontriviality,
        passed,
    })
}

/// `Σ_{r(e) = v} Ŝ_eŜ_e* = P̂_v` on every certified column.
fn big_ck<T: Real>(big: &MatrixRep<T>) -> bool {
    let g = big.action().graph();
    let tol = T::tol(1e-10);
    let mut any = false;
    for x in 0..big.dim() {
        let v: Vertex = big.vertex_of(x);
        let mut sum: SparseVec<T> = Vec::new();
        let mut ok = true;
        for e in g.edges_into(v) {
            match big.eval(&Word::new([Gen::S(e), Gen::SAdj(e)]), x) {
                Some(y) => sum = sparse_add(&sum, &y, Complex::new(T::one(), T::zero())),
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        any = true;
        if sparse_norm(&sparse_add(&sum, &unit(x), minus())) > tol {
            return false;
        }
    }
    any
}

/// Max `|Ŝ*[y, x] − conj(Ŝ[x, y])|` over pairs where both columns are certified.
pub(crate) fn adjoint_mismatch<T: Real>(fwd: &[Option<SparseVec<T>>], adj: &[Option<SparseVec<T>>]) -> f64 {
    let entry = |col: &SparseVec<T>, i: usize| col.iter().find(|p| p.0 == i).map_or(Complex::new(T::zero(), T::zero()), |p| p.1);
    let mut dev: f64 = 0.0;
    for (y, col) in fwd.iter().enumerate() {
        let Some(col) = col else { continue };
        for &(x, c) in col {
            if let Some(ac) = &adj[x] {
                dev = dev.max((entry(ac, y) - c.conj()).norm().to_f64());
            }
        }
    }
    for (x, col) in adj.iter().enumerate() {
        let Some(col) = col else { continue };
        for &(y, c) in col {
            if let Some(fc) = &fwd[y] {
                dev = dev.max((entry(fc, x) - c.conj()).norm().to_f64());
            }
        }
    }
    dev
}

/// Correspondence between an exact dilation and a matrix one.
#[derive(Clone, Debug, Serialize)]
pub struct BasisMatch {
    /// `(atomic label, matrix label, phase c)` with `Φ e_a = c e_b`.
    pub pairs: Vec<(String, String, [f64; 2])>,
    /// Generator columns compared.
    pub compared: usize,
    pub max_deviation: f64,
}

/// Matches the labels of `atomic` (a [`dilate_atomic_pure`] output) with the
/// basis of `d.big` and compares `Ĝ Φ e_a` with `Φ G e_a` for every generator
/// on columns certified on both sides. New labels are matched by name, input
/// labels through the (monomial) column `J e_x`.
pub fn match_atomic_dilation<T: Real>(atomic: &AtomicRep, d: &Dilation<T>) -> Result<BasisMatch> {
    use crate::atomic::Image;
    let big = &d.big;
    let one = Complex::new(T::one(), T::zero());
    let jcols = sparse_columns(&d.embed);
    let phi: Vec<Option<(usize, Complex<T>)>> = (0..atomic.len())
        .map(|x| {
            let name = atomic.label(x);
            if let Some(b) = big.find(name) {
                return Ok(Some((b, one)));
            }
            match d.small.find(name) {
                None => Ok(None),
                Some(s) if jcols[s].len() == 1 => Ok(Some(jcols[s][0])),
                Some(_) => Err(Error::InvalidRep(format!("J is not monomial at `{name}`"))),
            }
        })
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for (x, p) in phi.iter().enumerate() {
        if let Some((b, c)) = p {
            pairs.push((atomic.label(x).to_string(), big.label(*b).to_string(), [c.re.to_f64(), c.im.to_f64()]));
        }
    }
    let mut dev: f64 = 0.0;
    let mut compared = 0;
    for gen in atomic.gens() {
        for x in 0..atomic.len() {
            let Some((b, c)) = phi[x] else { continue };
            let rhs: SparseVec<T> = match atomic.apply(gen, x) {
                Image::Unknown => continue,
                Image::Zero => Vec::new(),
                Image::To(y, ph) => match phi[y] {
                    Some((by, cy)) => vec![(by, cy * ph.to_complex::<T>())],
                    None => continue,
                },
            };
            let Some(lhs) = big.apply(gen, &vec![(b, c)]) else { continue };
            compared += 1;
            dev = dev.max(sparse_norm(&sparse_add(&lhs, &rhs, minus())).to_f64());
        }
    }
    if compared == 0 {
        return Err(Error::InteriorTooSmall { needed: 1, available: 0 });
    }
    Ok(BasisMatch { pairs, compared, max_deviation: dev })
}
