use num_complex::Complex;

use super::{adjoint_mismatch, Construction, Dilation, IntertwinerUse};
use crate::action::{Intertwiner, SelfSimilarAction};
use crate::atomic::{AtomicRep, AtomicTables, Image, TraceClosure};
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};
use crate::matrix::{normalize, sparse_add, sparse_norm, unit, CMatrix, MatrixParts, MatrixRep, SparseVec};
use crate::phase::Phase;
use crate::scalar::Real;
use crate::word::{Gen, Word};

/// Which `q` defines `Ŝ_e` on a negative level.
///
/// Any `q` with `q|_e ≥ k` gives the same operator; `ExtraPeriods(t)` adds
/// `t` full orbit periods to the minimal choice, which exercises that.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IntertwinerChoice {
    #[default]
    Minimal,
    ExtraPeriods(u64),
}

fn intertwiner(a: &SelfSimilarAction, e: Edge, k: i64, choice: IntertwinerChoice) -> Result<Intertwiner> {
    let it = a.find_intertwiner(e, k)?;
    match choice {
        IntertwinerChoice::Minimal => Ok(it),
        IntertwinerChoice::ExtraPeriods(t) => {
            let q = it.q + t * a.edge_orbit(e).len() as u64;
            let (f, p) = a.act_restrict(q, &a.graph().edge_path(e));
            Ok(Intertwiner { q, p, f: f.edges()[0] })
        }
    }
}

/// `V^q S_e = S_{q·e} V^{q|_e}` for a given `q`.
fn power_intertwiner(a: &SelfSimilarAction, e: Edge, q: u64) -> Intertwiner {
    let (f, p) = a.act_restrict(q, &a.graph().edge_path(e));
    Intertwiner { q, p, f: f.edges()[0] }
}

struct Wandering<T: Real> {
    name: String,
    vertex: Vertex,
    vec: SparseVec<T>,
}

/// Orthonormal basis of `ker V*` on the certified columns: the labels
/// themselves when `I − VV*` is diagonal there, eigenvectors otherwise.
fn wandering_basis<T: Real>(rep: &MatrixRep<T>) -> Vec<Wandering<T>> {
    let n = rep.dim();
    let vv = Word::new([Gen::V, Gen::VAdj]);
    let kcols: Vec<Option<SparseVec<T>>> =
        (0..n).map(|x| rep.eval(&vv, x).map(|y| sparse_add(&unit(x), &y, Complex::new(-T::one(), T::zero())))).collect();
    let tol = T::tol(1e-10);
    let is_unit = |x: usize, c: &SparseVec<T>| c.len() == 1 && c[0].0 == x && (c[0].1 - Complex::new(T::one(), T::zero())).norm() <= tol;
    let diagonal = kcols.iter().enumerate().all(|(x, c)| c.as_ref().is_none_or(|c| c.is_empty() || is_unit(x, c)));
    if diagonal {
        return (0..n)
            .filter(|&x| kcols[x].as_ref().is_some_and(|c| is_unit(x, c)))
            .map(|x| Wandering { name: rep.label(x).to_string(), vertex: rep.vertex_of(x), vec: unit(x) })
            .collect();
    }
    // I − VV* commutes with every P_v, so diagonalise one vertex at a time
    let mut out = Vec::new();
    let g = rep.action().graph();
    for v in g.vertices() {
        let cs: Vec<usize> = (0..n).filter(|&x| rep.vertex_of(x) == v && kcols[x].is_some()).collect();
        if cs.is_empty() {
            continue;
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &x) in cs.iter().enumerate() {
            pos[x] = i;
        }
        let mut k = CMatrix::<T>::zeros(cs.len(), cs.len());
        for (j, &x) in cs.iter().enumerate() {
            for &(y, c) in kcols[x].as_ref().unwrap() {
                if pos[y] != usize::MAX {
                    k[(pos[y], j)] = c;
                }
            }
        }
        let k = (&k + k.adjoint()) * Complex::new(T::of(0.5), T::zero());
        let eig = k.symmetric_eigen();
        for (i, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam < T::of(0.5) {
                continue;
            }
            let col = eig.eigenvectors.column(i);
            let vec = normalize(cs.iter().enumerate().map(|(r, &x)| (x, col[r])).collect());
            match rep.apply(Gen::VAdj, &vec) {
                Some(y) if sparse_norm(&y) <= tol => out.push(Wandering { name: format!("w{}", out.len()), vertex: v, vec }),
                _ => {}
            }
        }
    }
    out
}

/// `ξ, Vξ, V²ξ, …` while the evaluation stays certified.
fn v_orbit<T: Real>(rep: &MatrixRep<T>, xi: &SparseVec<T>) -> Result<Vec<SparseVec<T>>> {
    let mut out = vec![xi.clone()];
    while let Some(y) = rep.apply(Gen::V, out.last().unwrap()) {
        if out.len() > rep.dim() + 1 {
            return Err(Error::WrongType("V-orbit of a wandering vector does not leave the window: V is not pure".into()));
        }
        out.push(y);
    }
    Ok(out)
}

/// Dilation of a representation with `V` pure, on `Ĥ = W ⊗ ℓ²(Z)` truncated to `|k| ≤ K`.
pub fn dilate_pure_case<T: Real>(rep: &MatrixRep<T>, k: usize) -> Result<Dilation<T>> {
    dilate_pure_case_with(rep, k, IntertwinerChoice::Minimal)
}

/// As [`dilate_pure_case`], with an explicit choice of intertwiners.
///
/// `J(V^k ξ) = ξ ⊗ e_k`. `V̂` is the bilateral shift. On level `m` the edge
/// operator is `Ŝ_e(ξ ⊗ e_m) = V̂^{*q} J(S_f V^{p+m} ξ)` where
/// `V^q S_e = S_f V^p` and `p + m ≥ 0`, and its adjoint is
/// `V̂^{*p} J S_f* V^{m+q} ξ` with `q = max(0, −m)`. Labels of `H` outside
/// the span of the truncated orbits are dropped from the dilated
/// representation.
pub fn dilate_pure_case_with<T: Real>(rep: &MatrixRep<T>, kmax: usize, choice: IntertwinerChoice) -> Result<Dilation<T>> {
    let a = rep.action().clone();
    a.check_assumption_a()?;
    let g = a.graph();
    let n = rep.dim();
    let basis = wandering_basis(rep);
    if basis.is_empty() {
        return Err(Error::WrongType("no certified wandering vectors for V".into()));
    }
    let orbits = basis.iter().map(|w| v_orbit(rep, &w.vec)).collect::<Result<Vec<_>>>()?;
    let width = 2 * kmax + 1;
    let km = kmax as i64;
    let idx = |j: usize, m: i64| j * width + (m + km) as usize;
    let dim = basis.len() * width;

    let mut jcol: Vec<SparseVec<T>> = vec![Vec::new(); n];
    for (j, orb) in orbits.iter().enumerate() {
        for (k, vec) in orb.iter().enumerate().take(kmax + 1) {
            for &(i, c) in vec {
                jcol[i].push((idx(j, k as i64), c.conj()));
            }
        }
    }
    let jcol: Vec<SparseVec<T>> = jcol.into_iter().map(normalize).collect();
    let tol = T::tol(1e-10);
    // J y, provided y lies in the span of the truncated orbits
    let to_big = |y: &SparseVec<T>| -> Option<SparseVec<T>> {
        let mut z = Vec::new();
        for &(i, c) in y {
            z.extend(jcol[i].iter().map(|&(b, a)| (b, a * c)));
        }
        let z = normalize(z);
        let (ny, nz) = (sparse_norm(y), sparse_norm(&z));
        (num_traits::Float::abs(ny * ny - nz * nz) <= tol * (T::one() + ny * ny)).then_some(z)
    };
    let shift = |z: SparseVec<T>, s: i64| -> Option<SparseVec<T>> {
        z.into_iter()
            .map(|(b, c)| {
                let (j, m) = (b / width, (b % width) as i64 - km + s);
                (-km..=km).contains(&m).then(|| (idx(j, m), c))
            })
            .collect()
    };
    let domain: Vec<usize> = (0..n)
        .filter(|&x| {
            let nn = sparse_norm(&jcol[x]);
            num_traits::Float::abs(nn * nn - T::one()) <= tol
        })
        .collect();

    let mut labels = Vec::with_capacity(dim);
    let mut vertex = Vec::with_capacity(dim);
    for w in &basis {
        for m in -km..=km {
            labels.push(format!("{}⊗e{m}", w.name));
            vertex.push(a.vperm_pow(w.vertex, m));
        }
    }

    let ne = g.num_edges();
    let mut cols: Vec<Vec<Option<SparseVec<T>>>> = vec![vec![None; dim]; 2 + 2 * ne];
    let one = Complex::new(T::one(), T::zero());
    for j in 0..basis.len() {
        for m in -km..=km {
            let b = idx(j, m);
            cols[0][b] = (m < km).then(|| vec![(idx(j, m + 1), one)]);
            cols[1][b] = (m > -km).then(|| vec![(idx(j, m - 1), one)]);
        }
    }
    let mut intertwiners = Vec::new();
    for e in g.edges() {
        for k in 1..=km {
            let it = intertwiner(&a, e, k, choice)?;
            let (edge, f) = (g.edge_name(e).to_string(), g.edge_name(it.f).to_string());
            intertwiners.push(IntertwinerUse { edge, k, q: it.q, p: it.p, f });
        }
        for (j, orb) in orbits.iter().enumerate() {
            for m in -km..=km {
                let b = idx(j, m);
                cols[2 + 2 * e.0][b] = if vertex[b] != g.src(e) {
                    Some(Vec::new())
                } else {
                    let it = intertwiner(&a, e, -m, choice)?;
                    let lvl = it.p as i64 + m;
                    orb.get(lvl as usize)
                        .and_then(|x| rep.apply(Gen::S(it.f), x))
                        .and_then(|y| to_big(&y))
                        .and_then(|z| shift(z, -(it.q as i64)))
                };
                cols[3 + 2 * e.0][b] = if vertex[b] != g.rng(e) {
                    Some(Vec::new())
                } else {
                    let it = power_intertwiner(&a, e, (-m).max(0) as u64);
                    orb.get((m + it.q as i64) as usize)
                        .and_then(|x| rep.apply(Gen::SAdj(it.f), x))
                        .and_then(|y| to_big(&y))
                        .and_then(|z| shift(z, -(it.p as i64)))
                };
            }
        }
    }
    let adjoint_deviation = g.edges().fold(0.0f64, |d, e| d.max(adjoint_mismatch(&cols[2 + 2 * e.0], &cols[3 + 2 * e.0])));

    let mut mats = Vec::new();
    let mut boundary = Vec::new();
    for slot in &cols {
        let mut mtx = CMatrix::<T>::zeros(dim, dim);
        let mut bd = vec![false; dim];
        for (x, col) in slot.iter().enumerate() {
            match col {
                Some(c) => c.iter().for_each(|&(y, v)| mtx[(y, x)] = v),
                None => bd[x] = true,
            }
        }
        mats.push(mtx);
        boundary.push(bd);
    }
    let mut it = mats.into_iter();
    let (v, v_adj) = (it.next().unwrap(), it.next().unwrap());
    let (mut s, mut s_adj) = (Vec::new(), Vec::new());
    while let (Some(x), Some(y)) = (it.next(), it.next()) {
        s.push(x);
        s_adj.push(y);
    }
    let big = MatrixRep::new(a, MatrixParts { labels, vertex, v, v_adj, s, s_adj, boundary, closure: TraceClosure::OPEN })?;

    let small = if domain.len() == n { rep.clone() } else { rep.restrict(&domain) };
    let mut embed = CMatrix::<T>::zeros(dim, domain.len());
    for (c, &x) in domain.iter().enumerate() {
        for &(b, v) in &jcol[x] {
            embed[(b, c)] = v;
        }
    }
    Ok(Dilation {
        construction: Construction::PureCase,
        small,
        big,
        embed,
        fiber: width,
        intertwiners,
        rotation: 0,
        offset: 0,
        adjoint_deviation,
    })
}

/// Exact pure-case dilation of an atomic representation.
///
/// Keeps the input labels (the `k ≥ 0` half) and adds `ξ ⊗ e_m` for each
/// wandering label `ξ` of `V` and `-K ≤ m ≤ -1`. The resulting `V̂` is
/// unitary, so the trace closure is set accordingly.
pub fn dilate_atomic_pure(rep: &AtomicRep, kneg: usize) -> Result<AtomicRep> {
    let a = rep.action().clone();
    a.check_assumption_a()?;
    let g = a.graph();
    let n = rep.len();
    let wand: Vec<usize> = (0..n).filter(|&x| rep.apply(Gen::VAdj, x) == Image::Zero).collect();
    let mut wpos = vec![usize::MAX; n];
    for (j, &w) in wand.iter().enumerate() {
        wpos[w] = j;
    }
    let km = kneg as i64;
    let new = |j: usize, m: i64| n + j * kneg + (-m - 1) as usize;
    let total = n + wand.len() * kneg;

    // V̂^{*s} of an image in H: the input V* until a wandering label, then negative levels
    let lower = |img: Image, s: u64| -> Image {
        let Image::To(mut cur, mut ph) = img else { return img };
        for t in 0..s {
            match rep.apply(Gen::VAdj, cur) {
                Image::To(y, p) => {
                    cur = y;
                    ph = ph.mul(p);
                }
                Image::Zero => {
                    let r = (s - t) as i64;
                    return if r <= km { Image::To(new(wpos[cur], -r), ph) } else { Image::Unknown };
                }
                Image::Unknown => return Image::Unknown,
            }
        }
        Image::To(cur, ph)
    };
    let v_pow = |x: usize, k: u64| (0..k).fold(Image::To(x, Phase::one()), |img, _| rep.apply_image(Gen::V, img));

    let mut t = rep.tables();
    t.labels.reserve(total - n);
    for (j, &w) in wand.iter().enumerate() {
        for m in (-km..=-1).rev() {
            debug_assert_eq!(t.labels.len(), new(j, m));
            t.labels.push(format!("{}⊗e{m}", rep.label(w)));
            t.vertex.push(a.vperm_pow(rep.vertex_of(w), m));
        }
    }
    for x in 0..n {
        if t.v_adj[x] == Image::Zero && kneg > 0 {
            t.v_adj[x] = Image::To(new(wpos[x], -1), Phase::one());
        }
    }
    for (j, &w) in wand.iter().enumerate() {
        for m in (-km..=-1).rev() {
            t.v.push(if m == -1 { Image::To(w, Phase::one()) } else { Image::To(new(j, m + 1), Phase::one()) });
            t.v_adj.push(if m == -km { Image::Unknown } else { Image::To(new(j, m - 1), Phase::one()) });
        }
    }
    for e in g.edges() {
        for (j, &w) in wand.iter().enumerate() {
            for m in (-km..=-1).rev() {
                let vx = t.vertex[new(j, m)];
                let fwd = if vx != g.src(e) {
                    Image::Zero
                } else {
                    let it = a.find_intertwiner(e, -m)?;
                    let img = rep.apply_image(Gen::S(it.f), v_pow(w, (it.p as i64 + m) as u64));
                    lower(img, it.q)
                };
                let adj = if vx != g.rng(e) {
                    Image::Zero
                } else {
                    let it = power_intertwiner(&a, e, (-m) as u64);
                    lower(rep.apply(Gen::SAdj(it.f), w), it.p)
                };
                t.s[e.0].push(fwd);
                t.s_adj[e.0].push(adj);
            }
        }
    }
    AtomicRep::from_tables(
        a,
        AtomicTables {
            closure: TraceClosure { s_trace: false, v_trace: true },
            ..t
        },
    )
}
