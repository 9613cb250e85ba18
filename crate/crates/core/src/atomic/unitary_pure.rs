use super::{AtomicRep, Image};
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};
use crate::phase::Phase;
use crate::word::Gen;

/// `x = phase · S_μ w` with `w` wandering, or `None` if the trace leaves the window.
pub(crate) fn trace_to_wandering(rep: &AtomicRep, x: usize) -> Result<Option<(Vec<Edge>, usize, Phase)>> {
    let g = rep.action().graph();
    let mut edges = Vec::new();
    let mut cur = x;
    let mut ph = Phase::one();
    for _ in 0..=rep.len() {
        let mut step = None;
        for e in g.edges() {
            match rep.apply(Gen::SAdj(e), cur) {
                Image::Zero => {}
                Image::Unknown => return Ok(None),
                Image::To(y, p) => step = Some((e, y, p)),
            }
        }
        match step {
            None => return Ok(Some((edges, cur, ph))),
            Some((e, y, p)) => {
                // S_e* cur = p·y, so cur = p·S_e y
                edges.push(e);
                ph = ph.mul(p);
                cur = y;
            }
        }
    }
    Err(Error::WrongType(format!("S*-trace from `{}` cycles: not a pure shift", rep.label(x))))
}

pub(crate) fn apply_s_path(rep: &AtomicRep, edges: &[Edge], w: usize, ph: Phase) -> Image {
    edges.iter().rev().fold(Image::To(w, ph), |img, &e| rep.apply_image(Gen::S(e), img))
}

/// Replaces the `V` tables of a pure-shift representation by the unique
/// unitary with `U(S_μ ξ) = S_{1·μ} U0^{1|_μ} ξ` for wandering `ξ`.
///
/// `u0` lists `(w, w', phase)` meaning `U0 w = phase · w'`; it must be a
/// bijection of the wandering labels sending `I_v` to `I_{1·v}`.
pub fn extend_unitary_from_wandering(rep: &AtomicRep, u0: &[(usize, usize, Phase)]) -> Result<AtomicRep> {
    let a = rep.action();
    let g = a.graph();
    let n = rep.len();
    let wandering = rep.wandering_labels();
    let mut fwd = vec![None; n];
    let mut inv = vec![None; n];
    for &(w, t, ph) in u0 {
        if w >= n || t >= n || !wandering.contains(&w) || !wandering.contains(&t) {
            return Err(Error::WanderingMismatch("U0 must act on wandering labels".into()));
        }
        if rep.vertex_of(t) != a.vperm(rep.vertex_of(w)) {
            return Err(Error::WanderingMismatch(format!(
                "U0 sends `{}` at {} to `{}` at {}",
                rep.label(w),
                g.vertex_name(rep.vertex_of(w)),
                rep.label(t),
                g.vertex_name(rep.vertex_of(t))
            )));
        }
        if fwd[w].is_some() || inv[t].is_some() {
            return Err(Error::WanderingMismatch("U0 is not a bijection".into()));
        }
        fwd[w] = Some((t, ph));
        inv[t] = Some((w, ph.conj()));
    }
    if wandering.iter().any(|&w| fwd[w].is_none() || inv[w].is_none()) {
        return Err(Error::WanderingMismatch("U0 must be defined on every wandering label".into()));
    }
    let pow = |map: &Vec<Option<(usize, Phase)>>, w: usize, k: u64| {
        let mut cur = (w, Phase::one());
        for _ in 0..k {
            let (t, ph) = map[cur.0].expect("bijection on wandering labels");
            cur = (t, cur.1.mul(ph));
        }
        cur
    };

    let mut v = vec![Image::Unknown; n];
    let mut v_adj = vec![Image::Unknown; n];
    for x in 0..n {
        let Some((edges, w, ph)) = trace_to_wandering(rep, x)? else { continue };
        let mu = if edges.is_empty() { g.vertex_path(rep.vertex_of(w)) } else { g.path(&edges)? };
        // U x = ph · S_{1·μ} U0^{1|_μ} w
        let (m1, k) = a.act_restrict(1, &mu);
        let (w1, p1) = pow(&fwd, w, k);
        v[x] = apply_s_path(rep, m1.edges(), w1, ph.mul(p1));
        // U* x = ph · S_ν U0^{-k} w with 1·ν = μ, k = 1|_ν
        let nu = a.act_inv(1, &mu);
        let k = a.restrict(1, &nu);
        let (w0, p0) = pow(&inv, w, k);
        v_adj[x] = apply_s_path(rep, nu.edges(), w0, ph.mul(p0));
    }
    rep.with_v(v, v_adj)
}

/// One irreducible summand `c^λ` of a unitary + pure-shift atomic representation.
#[derive(Clone, Debug)]
pub struct UnitaryPureComponent {
    /// The phase of `V^m` on the summand: `conj(β ω_k)`.
    pub lambda: Phase,
    pub orbit: Vec<Vertex>,
    /// Total phase of the `V`-cycle through the wandering labels.
    pub cycle_phase: Phase,
    pub alpha: usize,
    pub beta: Phase,
    pub omega: Phase,
    /// `η_{k,i}` for `i = 1..m` as label combinations (not normalised, norm `√α`).
    pub eta: Vec<Vec<(usize, Phase)>>,
}

/// Splits a unitary + pure-shift atomic representation into `c^λ` summands.
///
/// Each `V`-cycle through the wandering labels has length `mα`; with its
/// total phase `λ` and the principal root `β^α = conj(λ)`, the summands are
/// spanned by `η_{k,1} = Σ_j (βω_k)^{j-1} ξ_{1,j}` and carry `conj(βω_k)`.
pub fn decompose_unitary_pure(rep: &AtomicRep) -> Result<Vec<UnitaryPureComponent>> {
    let a = rep.action();
    let wandering = rep.wandering_labels();
    let mut is_w = vec![false; rep.len()];
    for &w in &wandering {
        is_w[w] = true;
    }
    let mut done = vec![false; rep.len()];
    let mut out = Vec::new();
    for &start in &wandering {
        if done[start] {
            continue;
        }
        // the cycle x_0 = start, V x_t = φ_t x_{t+1}
        let mut cyc = vec![start];
        let mut phases = Vec::new();
        let mut cur = start;
        loop {
            match rep.apply(Gen::V, cur) {
                Image::To(y, ph) if is_w[y] => {
                    phases.push(ph);
                    if y == start {
                        break;
                    }
                    if cyc.contains(&y) {
                        return Err(Error::WrongType("V is not injective on wandering labels".into()));
                    }
                    cyc.push(y);
                    cur = y;
                }
                Image::To(..) | Image::Zero => {
                    return Err(Error::WrongType(format!("V does not permute the wandering labels at `{}`", rep.label(cur))))
                }
                Image::Unknown => {
                    return Err(Error::UnsupportedInfiniteMultiplicity(format!(
                        "V-orbit of `{}` does not close inside the window",
                        rep.label(start)
                    )))
                }
            }
        }
        for &x in &cyc {
            done[x] = true;
        }
        let orbit = a.vertex_orbit(rep.vertex_of(start));
        let m = orbit.len();
        if cyc.len() % m != 0 {
            return Err(Error::WrongType("cycle length is not a multiple of the orbit size".into()));
        }
        let alpha = cyc.len() / m;
        // rescaled basis ξ'_t = c_t x_t with V ξ'_t = ξ'_{t+1}
        let mut c = vec![Phase::one()];
        for t in 0..cyc.len() - 1 {
            c.push(c[t].mul(phases[t]));
        }
        let lambda = c[cyc.len() - 1].mul(phases[cyc.len() - 1]);
        let beta = lambda.conj().principal_root(alpha as u64);
        for k in 0..alpha {
            let omega = Phase::rational(k as i64, alpha as i64)?;
            let bw = beta.mul(omega);
            // ξ_{i,j} = ξ'_{(j-1)m + (i-1)}
            let eta = (0..m)
                .map(|i| (0..alpha).map(|j| (cyc[j * m + i], bw.pow(j as i64).mul(c[j * m + i]))).collect())
                .collect();
            out.push(UnitaryPureComponent {
                lambda: bw.conj(),
                orbit: orbit.clone(),
                cycle_phase: lambda,
                alpha,
                beta,
                omega,
                eta,
            });
        }
    }
    out.sort_by(|x, y| {
        x.orbit.iter().min().cmp(&y.orbit.iter().min()).then(x.lambda.turns().total_cmp(&y.lambda.turns()))
    });
    Ok(out)
}
