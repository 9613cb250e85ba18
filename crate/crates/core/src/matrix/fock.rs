use std::collections::HashMap;

use num_complex::Complex;

use super::{CMatrix, MatrixParts, MatrixRep};
use crate::action::SelfSimilarAction;
use crate::atomic::TraceClosure;
use crate::error::{Error, Result};
use crate::graph::{Edge, Path, Vertex};
use crate::scalar::Real;

/// The left-regular representation `λ_v` built directly from its formulas:
/// basis `δ_{μ,p}` with `s(μ) = p·v`, `|μ| ≤ path_depth`, `p ≤ sg_depth`,
/// `S_ν δ_{μ,p} = δ_{νμ,p}` and `V δ_{μ,p} = δ_{1·μ, 1|_μ + p}`.
pub fn build_fock<T: Real>(a: &SelfSimilarAction, v: Vertex, path_depth: usize, sg_depth: u64) -> Result<MatrixRep<T>> {
    let g = a.graph();
    if v.0 >= g.num_vertices() {
        return Err(Error::UnknownVertex(format!("{}", v.0)));
    }
    // (p, |μ|, edges) order
    let mut basis: Vec<(u64, Path)> = Vec::new();
    for p in 0..=sg_depth {
        let src = a.vperm_pow(v, p as i64);
        let mut paths: Vec<Path> = (0..=path_depth).flat_map(|d| g.paths_with_source(src, d)).collect();
        paths.sort_by(|x, y| (x.len(), x.edges()).cmp(&(y.len(), y.edges())));
        basis.extend(paths.into_iter().map(|mu| (p, mu)));
    }
    let key = |p: u64, mu: &Path| (p, mu.rng(), mu.edges().to_vec());
    let index: HashMap<(u64, Vertex, Vec<Edge>), usize> = basis.iter().enumerate().map(|(i, (p, mu))| (key(*p, mu), i)).collect();
    let n = basis.len();
    let ne = g.num_edges();
    let one = Complex::new(T::one(), T::zero());
    let mut mats = vec![CMatrix::<T>::zeros(n, n); 2 + 2 * ne];
    let mut boundary = vec![vec![false; n]; 2 + 2 * ne];
    let mut put = |m: usize, x: usize, target: Option<(u64, Path)>| match target {
        None => {}
        Some((p, mu)) => match index.get(&key(p, &mu)) {
            Some(&y) => mats[m][(y, x)] = one,
            None => boundary[m][x] = true,
        },
    };
    for (x, (p, mu)) in basis.iter().enumerate() {
        let (m1, k) = a.act_restrict(1, mu);
        put(0, x, Some((p + k, m1)));
        let nu = a.act_inv(1, mu);
        let k = a.restrict(1, &nu);
        put(1, x, (*p >= k).then(|| (p - k, nu)));
        for e in g.edges() {
            let prepended = (g.src(e) == mu.rng()).then(|| (*p, g.concat(&g.edge_path(e), mu).expect("composable")));
            put(2 + 2 * e.0, x, prepended);
            let stripped = mu.split_first(g).filter(|(f, _)| *f == e).map(|(_, rest)| (*p, rest));
            put(3 + 2 * e.0, x, stripped);
        }
    }
    let mut it = mats.into_iter();
    let v_m = it.next().unwrap();
    let v_adj = it.next().unwrap();
    let (mut s, mut s_adj) = (Vec::new(), Vec::new());
    while let (Some(x), Some(y)) = (it.next(), it.next()) {
        s.push(x);
        s_adj.push(y);
    }
    MatrixRep::new(
        a.clone(),
        MatrixParts {
            labels: basis.iter().map(|(p, mu)| format!("({}, {p})", g.display_path(mu))).collect(),
            vertex: basis.iter().map(|(_, mu)| mu.rng()).collect(),
            v: v_m,
            v_adj,
            s,
            s_adj,
            boundary,
            closure: TraceClosure::CLOSED,
        },
    )
}
