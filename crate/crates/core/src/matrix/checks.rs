use num_complex::Complex;
use serde::Serialize;

use super::{normalize, sparse_columns, sparse_norm, CMatrix, MatrixRep, SparseVec};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::word::{Gen, Word};

/// A linear combination of words.
#[derive(Clone, Debug)]
pub struct Combo<T: Real>(pub Vec<(Complex<T>, Word)>);

impl<T: Real> Combo<T> {
    pub fn word(w: Word) -> Self {
        Combo(vec![(Complex::new(T::one(), T::zero()), w)])
    }

    pub fn plus(mut self, c: T, w: Word) -> Self {
        self.0.push((Complex::new(c, T::zero()), w));
        self
    }

    pub fn mul(&self, other: &Combo<T>) -> Combo<T> {
        let mut out = Vec::new();
        for (a, u) in &self.0 {
            for (b, w) in &other.0 {
                out.push((*a * *b, u.then(w)));
            }
        }
        Combo(out)
    }

    pub fn max_len(&self) -> usize {
        self.0.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }

    fn eval(&self, rep: &MatrixRep<T>, x: usize) -> Option<SparseVec<T>> {
        let mut out = Vec::new();
        for (c, w) in &self.0 {
            out.extend(rep.eval(w, x)?.into_iter().map(|(i, a)| (i, a * *c)));
        }
        Some(normalize(out))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
    /// Max over certified columns of `‖(L − R) e_x‖`.
    pub deviation: f64,
    pub witness: Option<String>,
    pub columns: usize,
    pub skipped: usize,
    pub tolerance: f64,
    /// Deviation is exactly zero.
    pub exact: bool,
    pub passed: bool,
}

/// Tolerance ladder: single products get the tight bound.
fn ladder<T: Real>(len: usize) -> T {
    T::tol(if len <= 2 { 1e-12 } else { 1e-10 })
}

impl<T: Real> MatrixRep<T> {
    /// Compares two words on every column where both evaluations are certified.
    pub fn check_identity(&self, lhs: &Word, rhs: &Word) -> Result<IdentityCheck> {
        let g = self.action().graph();
        let len = lhs.len().max(rhs.len());
        self.check_combo("identity", &lhs.display(g), &rhs.display(g), &Combo::word(lhs.clone()), &Combo::word(rhs.clone()), ladder::<T>(len))
    }

    pub fn check_combo(&self, relation: &str, lname: &str, rname: &str, lhs: &Combo<T>, rhs: &Combo<T>, tol: T) -> Result<IdentityCheck> {
        let mut dev = T::zero();
        let mut witness = None;
        let (mut columns, mut skipped) = (0, 0);
        for x in 0..self.dim() {
            let (Some(l), Some(r)) = (lhs.eval(self, x), rhs.eval(self, x)) else {
                skipped += 1;
                continue;
            };
            columns += 1;
            let d = sparse_norm(&super::sparse_add(&l, &r, Complex::new(-T::one(), T::zero())));
            if d > dev || (witness.is_none() && d > tol) {
                dev = d;
                witness = Some(self.label(x).to_string());
            }
        }
        if columns == 0 {
            return Err(Error::InteriorTooSmall { needed: lhs.max_len().max(rhs.max_len()), available: self.max_level() as usize });
        }
        Ok(IdentityCheck {
            relation: relation.to_string(),
            lhs: lname.to_string(),
            rhs: rname.to_string(),
            deviation: dev.to_f64(),
            witness: if dev > tol { witness } else { None },
            columns,
            skipped,
            tolerance: tol.to_f64(),
            exact: dev == T::zero(),
            passed: dev <= tol,
        })
    }

    /// Runs the defining relations and the two range-projection identities.
    pub fn verify_identities(&self) -> MatrixRelationReport {
        let a = self.action();
        let g = a.graph();
        let w = |gens: &[Gen]| Word::new(gens.iter().copied());
        let one = T::one();
        let mut r = MatrixRelationReport::default();
        let run = |r: &mut MatrixRelationReport, rel: &str, l: Combo<T>, rn: String, rr: Combo<T>| {
            let lname = show(self, &l);
            let tol = ladder::<T>(l.max_len().max(rr.max_len()));
            match self.check_combo(rel, &lname, &rn, &l, &rr, tol) {
                Ok(c) => r.checks.push(c),
                Err(_) => r.insufficient.push(format!("{rel}: {lname} = {rn}")),
            }
        };
        let ident = Combo::word(Word::identity());
        let zero = Combo(Vec::new());

        // TCK1
        let mut sum_p = Combo(Vec::new());
        for v in g.vertices() {
            sum_p = sum_p.plus(one, w(&[Gen::P(v)]));
            for u in g.vertices() {
                let rhs = if u == v { Combo::word(w(&[Gen::P(v)])) } else { zero.clone() };
                let rn = show(self, &rhs);
                run(&mut r, "TCK1", Combo::word(w(&[Gen::P(u), Gen::P(v)])), rn, rhs);
            }
        }
        run(&mut r, "TCK1", sum_p, "I".into(), ident.clone());
        run(&mut r, "isometry", Combo::word(w(&[Gen::VAdj, Gen::V])), "I".into(), ident.clone());
        for e in g.edges() {
            let (se, sa) = (Gen::S(e), Gen::SAdj(e));
            run(&mut r, "TCK2", Combo::word(w(&[sa, se])), format!("P_{}", g.vertex_name(g.src(e))), Combo::word(w(&[Gen::P(g.src(e))])));
            run(&mut r, "partial-isometry", Combo::word(w(&[se, sa, se])), format!("S_{}", g.edge_name(e)), Combo::word(w(&[se])));
            let f1 = a.eperm(e);
            let k = a.rho(e);
            let rhs = Combo::word(Word::new([Gen::S(f1)]).then(&Word::v_pow(k)));
            run(&mut r, "SS", Combo::word(w(&[Gen::V, se])), show(self, &rhs), rhs);
            let rhs = Combo::word(Word::new([se]).then(&Word::v_adj_pow(k)));
            run(&mut r, "NC", Combo::word(w(&[Gen::VAdj, Gen::S(f1)])), show(self, &rhs), rhs);
            let rhs = Combo::word(w(&[Gen::S(f1), Gen::SAdj(f1), Gen::V]));
            run(&mut r, "range-V", Combo::word(w(&[Gen::V, se, sa])), show(self, &rhs), rhs);
            let f = a.eperm_pow(e, -1);
            let rhs = Combo::word(w(&[Gen::S(f), Gen::SAdj(f), Gen::VAdj]));
            run(&mut r, "range-V*", Combo::word(w(&[Gen::VAdj, se, sa])), show(self, &rhs), rhs);
        }
        let mut ck = true;
        for v in g.vertices() {
            let (pv, p1v) = (Gen::P(v), Gen::P(a.vperm(v)));
            let rhs = Combo::word(w(&[p1v, Gen::V]));
            run(&mut r, "SS", Combo::word(w(&[Gen::V, pv])), show(self, &rhs), rhs);
            let rhs = Combo::word(w(&[pv, Gen::VAdj]));
            run(&mut r, "NC", Combo::word(w(&[Gen::VAdj, p1v])), show(self, &rhs), rhs);
            // TCK3: Q_v = P_v − Σ_{e ∈ vE¹} S_eS_e* is idempotent, hence Q_v ≥ 0
            let mut q = Combo::word(w(&[pv]));
            for e in g.edges_into(v) {
                q = q.plus(-one, w(&[Gen::S(e), Gen::SAdj(e)]));
            }
            let qq = q.mul(&q);
            let qn = show(self, &q);
            run(&mut r, "TCK3", qq, qn, q.clone());
            let mut sum = Combo(Vec::new());
            for e in g.edges_into(v) {
                sum = sum.plus(one, w(&[Gen::S(e), Gen::SAdj(e)]));
            }
            match self.check_combo("CK", &show(self, &sum), &format!("P_{}", g.vertex_name(v)), &sum, &Combo::word(w(&[pv])), ladder::<T>(2)) {
                Ok(c) => ck &= c.passed,
                Err(_) => ck = false,
            }
        }
        r.ck_on_interior = ck;
        r.v_unitary_on_interior = self
            .check_combo("unitary", "V V*", "I", &Combo::word(w(&[Gen::V, Gen::VAdj])), &ident, ladder::<T>(2))
            .is_ok_and(|c| c.passed);
        r
    }
}

fn show<T: Real>(rep: &MatrixRep<T>, c: &Combo<T>) -> String {
    let g = rep.action().graph();
    if c.0.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (k, w)) in c.0.iter().enumerate() {
        let neg = k.re < T::zero();
        if i > 0 {
            s.push_str(if neg { " - " } else { " + " });
        } else if neg {
            s.push('-');
        }
        s.push_str(&if w.is_empty() { "I".to_string() } else { w.display(g) });
    }
    s
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MatrixRelationReport {
    pub checks: Vec<IdentityCheck>,
    /// Checks with no certified column.
    pub insufficient: Vec<String>,
    pub ck_on_interior: bool,
    pub v_unitary_on_interior: bool,
}

impl MatrixRelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_deviation(&self, relation: &str) -> f64 {
        self.checks.iter().filter(|c| c.relation == relation).map(|c| c.deviation).fold(0.0, f64::max)
    }
}

fn isometry_deviation<T: Real>(j: &CMatrix<T>) -> T {
    let n = j.ncols();
    let d = j.adjoint() * j - CMatrix::<T>::identity(n, n);
    d.iter().fold(T::zero(), |m, c| num_traits::Float::max(m, c.norm()))
}

/// `J* w(big) J`, with `w` evaluated densely in the big representation.
pub fn compress<T: Real>(big: &MatrixRep<T>, embed: &CMatrix<T>, word: &Word) -> Result<CMatrix<T>> {
    if embed.nrows() != big.dim() {
        return Err(Error::InvalidRep("embedding has the wrong number of rows".into()));
    }
    let dev = isometry_deviation(embed);
    if dev > T::tol(1e-12) {
        return Err(Error::NotIsometry { deviation: dev.to_f64() });
    }
    Ok(embed.adjoint() * big.word_matrix(word) * embed)
}

/// Compares `J* w(big) J e_x` with `w(small) e_x` on columns where both are certified.
pub fn compression_check<T: Real>(big: &MatrixRep<T>, embed: &CMatrix<T>, small: &MatrixRep<T>, word: &Word) -> Result<IdentityCheck> {
    if embed.nrows() != big.dim() || embed.ncols() != small.dim() {
        return Err(Error::InvalidRep("embedding shape does not match".into()));
    }
    let jcols = sparse_columns(embed);
    let mut rows: Vec<Vec<(usize, Complex<T>)>> = vec![Vec::new(); big.dim()];
    for (x, col) in jcols.iter().enumerate() {
        for &(i, c) in col {
            rows[i].push((x, c));
        }
    }
    let tol = ladder::<T>(word.len() + 2);
    let mut dev = T::zero();
    let mut witness = None;
    let (mut columns, mut skipped) = (0, 0);
    for x in 0..small.dim() {
        let (Some(y), Some(r)) = (big.apply_word(word, &jcols[x]), small.eval(word, x)) else {
            skipped += 1;
            continue;
        };
        columns += 1;
        let mut z = Vec::new();
        for (i, c) in y {
            z.extend(rows[i].iter().map(|&(x2, j)| (x2, j.conj() * c)));
        }
        let d = sparse_norm(&super::sparse_add(&normalize(z), &r, Complex::new(-T::one(), T::zero())));
        if d > dev {
            dev = d;
            witness = Some(small.label(x).to_string());
        }
    }
    if columns == 0 {
        return Err(Error::InteriorTooSmall { needed: word.len(), available: small.max_level() as usize });
    }
    let name = word.display(small.action().graph());
    Ok(IdentityCheck {
        relation: "compression".into(),
        lhs: format!("J* {name} J"),
        rhs: name,
        deviation: dev.to_f64(),
        witness: if dev > tol { witness } else { None },
        columns,
        skipped,
        tolerance: tol.to_f64(),
        exact: dev == T::zero(),
        passed: dev <= tol,
    })
}

