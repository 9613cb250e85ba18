use num_complex::Complex;

use super::{Construction, Dilation};
use crate::atomic::{apply_s_path, extend_unitary_from_wandering, trace_to_wandering, AtomicRep, AtomicTables, Image};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::matrix::{normalize, CMatrix, MatrixRep, SparseVec};
use crate::phase::Phase;
use crate::scalar::Real;
use crate::wold::{classify_atomic, WoldType};
use crate::word::Gen;

/// `H ⊗ C^M` with `S_e ⊗ I` and the `V` tables left unknown.
fn tensor_copies(rep: &AtomicRep, copies: usize) -> Result<AtomicRep> {
    let n = rep.len();
    let g = rep.action().graph();
    let lift = |img: Image, j: usize| match img {
        Image::To(y, ph) => Image::To(j * n + y, ph),
        o => o,
    };
    let mut t = AtomicTables {
        labels: Vec::with_capacity(n * copies),
        vertex: Vec::with_capacity(n * copies),
        v: vec![Image::Unknown; n * copies],
        v_adj: vec![Image::Unknown; n * copies],
        s: vec![Vec::with_capacity(n * copies); g.num_edges()],
        s_adj: vec![Vec::with_capacity(n * copies); g.num_edges()],
        window_depth: rep.window_depth(),
        closure: rep.closure(),
    };
    for j in 0..copies {
        for x in 0..n {
            t.labels.push(format!("{}⊗w{j}", rep.label(x)));
            t.vertex.push(rep.vertex_of(x));
            for e in g.edges() {
                t.s[e.0].push(lift(rep.apply(Gen::S(e), x), j));
                t.s_adj[e.0].push(lift(rep.apply(Gen::SAdj(e), x), j));
            }
        }
    }
    AtomicRep::from_tables(rep.action().clone(), t)
}

/// `U^t w` on wandering labels, `t` of either sign.
fn u_pow(rep: &AtomicRep, w: usize, t: i64) -> Result<(usize, Phase)> {
    let gen = if t >= 0 { Gen::V } else { Gen::VAdj };
    let mut cur = (w, Phase::one());
    for _ in 0..t.unsigned_abs() {
        match rep.apply(gen, cur.0) {
            Image::To(y, ph) => cur = (y, cur.1.mul(ph)),
            _ => return Err(Error::WrongType(format!("V does not act unitarily on the wandering label `{}`", rep.label(cur.0)))),
        }
    }
    Ok(cur)
}

/// Dilation of a unitary + pure-shift atomic representation on `H ⊗ C^M`,
/// `M = Σ_{f ∈ Ω_{e0}} 1|_f`.
///
/// On wandering vectors `Û0(ξ ⊗ w_j) = Uξ ⊗ w_{j+1}` for `j < M − 1` and
/// `Û0(ξ ⊗ w_{M−1}) = U^{*(M−q−1)}ξ ⊗ w_0`, where `q = |Ω_{e0}|`. `Û` is the
/// unitary extension of `Û0` and `Ŝ_e = S_e ⊗ I`. The embedding is
/// `Jξ = (q/m)^{-1/2} Σ_{j<q} S_{e_j} U^{j|_{e0} − j} ξ ⊗ w_{j|_{e0}}` with
/// `e_j = j·e0`, `m` the vertex orbit length, and `J S_μ ξ = Ŝ_μ Jξ`. The
/// orbit is first rotated so that its last edge has nonzero restriction,
/// which keeps every index `j|_{e0}` below `M`.
///
/// When the orbit edges are not loops, `S_{e_j}` moves `ξ` from `s(e_j)` to
/// `r(e_j) = 1^d·s(e_j)`, and `Ŝ_μ Jξ` would vanish for `s(μ) = vert(ξ)`.
/// The embedding used is therefore `J U^{-d}`, which lands in the right
/// vertex space and still intertwines `Û` with `U`; `d = 0` for loops.
pub fn dilate_unitary_pure<T: Real>(rep: &AtomicRep, e0: Edge) -> Result<Dilation<T>> {
    let a = rep.action();
    let g = a.graph();
    a.check_assumption_a()?;
    let big_m = a.big_m(e0)? as usize;
    let report = classify_atomic(rep);
    if report.single_type() != Some(WoldType::UnitaryPureShift) {
        return Err(Error::WrongType("dilation on H ⊗ C^M needs a unitary + pure-shift representation".into()));
    }
    let q = a.edge_orbit(e0).len();
    let orbit = a.vertex_orbit(g.src(e0));
    let m = orbit.len();
    let rotation = (0..q)
        .find(|&r| a.rho(a.eperm_pow(e0, (r + q - 1) as i64)) != 0)
        .expect("assumption (A) gives an edge with nonzero restriction");
    let e0 = a.eperm_pow(e0, rotation as i64);
    let e0_path = g.edge_path(e0);
    // r(e_j) = 1^d · s(e_j) along the whole orbit
    let offset = (0..m)
        .find(|&d| a.vperm_pow(g.src(e0), d as i64) == g.rng(e0))
        .ok_or_else(|| Error::WrongType(format!("{} leaves the vertex orbit of its source", g.edge_name(e0))))?;

    let n = rep.len();
    let wand = rep.wandering_labels();
    if wand.is_empty() {
        return Err(Error::WanderingMismatch("no wandering labels".into()));
    }
    if let Some(&w) = wand.iter().find(|&&w| !orbit.contains(&rep.vertex_of(w))) {
        return Err(Error::WanderingMismatch(format!("wandering label `{}` is off the orbit of {}", rep.label(w), g.vertex_name(g.src(e0)))));
    }

    let tensor = tensor_copies(rep, big_m)?;
    let mut u0 = Vec::with_capacity(wand.len() * big_m);
    for &w in &wand {
        for j in 0..big_m {
            let (t, ph, jj) = if j + 1 < big_m {
                let (t, ph) = u_pow(rep, w, 1)?;
                (t, ph, j + 1)
            } else {
                let (t, ph) = u_pow(rep, w, q as i64 + 1 - big_m as i64)?;
                (t, ph, 0)
            };
            u0.push((j * n + w, jj * n + t, ph));
        }
    }
    let big_atomic = extend_unitary_from_wandering(&tensor, &u0)?;

    // Jξ on wandering labels, as exact (label, phase) terms
    let mut jw: Vec<Option<Vec<(usize, Phase)>>> = vec![None; n];
    for &w in &wand {
        let mut terms = Vec::new();
        let mut ok = true;
        let (w0, ph0) = u_pow(rep, w, -(offset as i64))?;
        for j in 0..q {
            let ej = a.eperm_pow(e0, j as i64);
            if g.src(ej) != rep.vertex_of(w0) {
                continue;
            }
            let jr = a.restrict(j as u64, &e0_path) as usize;
            let (w1, ph) = u_pow(rep, w0, jr as i64 - j as i64)?;
            match rep.apply(Gen::S(ej), w1).scaled(ph.mul(ph0)) {
                Image::To(y, c) => terms.push((jr * n + y, c)),
                _ => ok = false,
            }
        }
        if ok {
            jw[w] = Some(terms);
        }
    }
    let norm = T::of((m as f64 / q as f64).sqrt());
    let mut domain = Vec::new();
    let mut cols: Vec<SparseVec<T>> = Vec::new();
    for x in 0..n {
        let Some((edges, w, ph)) = trace_to_wandering(rep, x)? else { continue };
        let Some(terms) = &jw[w] else { continue };
        let mut col = Vec::with_capacity(terms.len());
        for &(b, c) in terms {
            match apply_s_path(&big_atomic, &edges, b, c.mul(ph)) {
                Image::To(y, d) => col.push((y, d.to_complex::<T>() * Complex::new(norm, T::zero()))),
                _ => break,
            }
        }
        if col.len() == terms.len() {
            domain.push(x);
            cols.push(normalize(col));
        }
    }
    let big = MatrixRep::<T>::from_atomic(&big_atomic);
    let full = MatrixRep::<T>::from_atomic(rep);
    let small = if domain.len() == n { full } else { full.restrict(&domain) };
    let mut embed = CMatrix::<T>::zeros(big.dim(), domain.len());
    for (c, col) in cols.iter().enumerate() {
        for &(b, v) in col {
            embed[(b, c)] = v;
        }
    }
    Ok(Dilation {
        construction: Construction::UnitaryPure,
        small,
        big,
        embed,
        fiber: big_m,
        intertwiners: Vec::new(),
        rotation,
        offset,
        adjoint_deviation: 0.0,
    })
}
