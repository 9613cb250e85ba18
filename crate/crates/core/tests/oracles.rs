//! Frozen values, each checked against a computation that does not go
//! through the routine under test where one is available.

use selfsim::action::verify_axioms;
use selfsim::atomic::{build_c_lambda, build_cycle_ck, build_inductive_ck, build_left_regular, build_left_regular_window, build_pure_shift_cycle, decompose_unitary_pure, Image};
use selfsim::dilation::{dilate_unitary_pure, verify_dilation};
use selfsim::matrix::compress;
use selfsim::wold::wandering_projection;
use selfsim::word::{Gen, Word};
use selfsim::zappa_szep::{factory_bs, factory_odometer};
use selfsim::{Edge, MatrixRep64, Path, Phase, SelfSimilarAction, Vertex, C64};

fn fixture(name: &str) -> SelfSimilarAction {
    let s = std::fs::read_to_string(format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap();
    SelfSimilarAction::from_json(&s).unwrap()
}

/// `1·μ` and `1|_μ` by peeling one edge at a time off the left.
fn step(a: &SelfSimilarAction, edges: &[Edge], k: u64) -> (Vec<Edge>, u64) {
    let mut out = Vec::with_capacity(edges.len());
    let mut k = k;
    for &e in edges {
        // k·e and k|_e by k single steps
        let (mut f, mut r) = (e, 0);
        for _ in 0..k {
            r += a.rho(f);
            f = a.eperm(f);
        }
        out.push(f);
        k = r;
    }
    (out, k)
}

fn unrolled(a: &SelfSimilarAction, n: u64, edges: &[Edge]) -> (Vec<Edge>, u64) {
    // n·μ = 1·(1·(…μ)), n|_μ = Σ 1|_{k·μ}
    let mut cur = edges.to_vec();
    let mut total = 0;
    for _ in 0..n {
        let (next, r) = step(a, &cur, 1);
        cur = next;
        total += r;
    }
    (cur, total)
}

fn p(a: &SelfSimilarAction, s: &str) -> Path {
    a.graph().parse_path(s).unwrap()
}

#[test]
fn action_matches_unrolled_recursion() {
    for name in ["odometer2", "odometer3", "bs23", "bs32", "two_vertex"] {
        let a = fixture(name);
        for mu in a.graph().paths_up_to(4) {
            for n in 0..=7 {
                let (np, r) = a.act_restrict(n, &mu);
                let (edges, rr) = unrolled(&a, n, mu.edges());
                if !mu.is_vertex() {
                    assert_eq!(np.edges(), &edges[..], "{name}: {n}·{}", a.graph().display_path(&mu));
                }
                assert_eq!(r, rr, "{name}: {n}|_{}", a.graph().display_path(&mu));
            }
        }
    }
}

#[test]
fn hand_unrolled_values() {
    let o2 = fixture("odometer2");
    let g = o2.graph();
    assert_eq!(g.display_path(&o2.act(1, &p(&o2, "e2e1"))), "e1e2");
    assert_eq!(g.display_path(&o2.act(2, &p(&o2, "e1"))), "e1");
    assert_eq!(o2.restrict(1, &p(&o2, "e2e2")), 1);
    let bs = fixture("bs23");
    assert_eq!(bs.restrict(2, &p(&bs, "e1")), 3);
}

#[test]
fn path_listings() {
    let o2 = fixture("odometer2");
    let g = o2.graph();
    let names: Vec<String> = g.paths_with_source(Vertex(0), 2).iter().map(|p| g.display_path(p)).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(sorted, ["e1e1", "e1e2", "e2e1", "e2e2"]);
    let tv = fixture("two_vertex");
    let g = tv.graph();
    let mut from_v0: Vec<String> = g.paths_with_source(g.vertex("v0").unwrap(), 1).iter().map(|p| g.display_path(p)).collect();
    from_v0.sort();
    assert_eq!(from_v0, ["e0", "f0"]);
    assert_eq!(g.display_path(&g.concat(&p(&tv, "f0"), &p(&tv, "e0")).unwrap()), "f0e0");
    assert!(g.concat(&p(&tv, "e0"), &p(&tv, "f0")).is_err());
}

#[test]
fn orbits_and_constants() {
    for n in 2..=4 {
        let a = factory_odometer(n).unwrap();
        let o = a.orbits();
        assert_eq!(o.vertex_orbits.len(), 1);
        assert_eq!(o.edge_orbits.len(), 1);
        assert_eq!(o.edge_orbits[0].len(), n);
        assert!(a.check_assumption_a().is_ok());
        assert_eq!(factory_bs(n, 1).unwrap(), a);
    }
    let tv = fixture("two_vertex");
    let o = tv.orbits();
    assert_eq!(o.vertex_orbits, vec![vec!["v0".to_string(), "v1".to_string()]]);
    assert_eq!(o.edge_orbits, vec![vec!["e0".to_string(), "e1".to_string()], vec!["f0".to_string(), "f1".to_string()]]);
    assert!(tv.check_assumption_a().is_ok());
    let o2 = fixture("odometer2");
    assert_eq!(o2.big_m(o2.graph().edge("e1").unwrap()).unwrap(), 1);
}

#[test]
fn intertwiner_values() {
    let o2 = fixture("odometer2");
    let e1 = o2.graph().edge("e1").unwrap();
    let i = o2.find_intertwiner(e1, 1).unwrap();
    assert_eq!((i.q, i.p, i.f), (2, 1, e1));
    let tv = fixture("two_vertex");
    let g = tv.graph();
    let i = tv.find_intertwiner(g.edge("e0").unwrap(), 2).unwrap();
    assert_eq!((i.q, i.p, i.f), (1, 3, g.edge("e1").unwrap()));
}

#[test]
fn bs23_axioms_at_depth_five() {
    let r = verify_axioms(&factory_bs(2, 3).unwrap(), 5);
    assert!(r.passed(), "{:?}", r.violations.first());
}

#[test]
fn left_regular_vacuum() {
    let o2 = fixture("odometer2");
    let rep = build_left_regular(&o2, Vertex(0), 4).unwrap();
    let vac = rep.find("(v, 0)").unwrap();
    assert_eq!(rep.apply(Gen::V, vac), Image::To(rep.find("(v, 1)").unwrap(), Phase::one()));
    assert_eq!(rep.apply(Gen::S(o2.graph().edge("e1").unwrap()), vac), Image::To(rep.find("(e1, 0)").unwrap(), Phase::one()));
    assert_eq!(rep.is_wandering(vac, 3), Some(true));
    // the unhit labels are exactly the vacuum orbit (v, p), one per window level of p
    let m = MatrixRep64::from_atomic(&rep);
    let pw = wandering_projection(&m, Vertex(0));
    let unhit: Vec<&str> = m.interior(1).into_iter().filter(|&x| pw[(x, x)].re > 0.5).map(|x| m.label(x)).collect();
    assert_eq!(unhit, ["(v, 0)", "(v, 1)", "(v, 2)", "(v, 3)"]);
    let flat = MatrixRep64::from_atomic(&build_left_regular_window(&o2, Vertex(0), 4, 0).unwrap());
    let pw = wandering_projection(&flat, Vertex(0));
    assert_eq!((0..flat.dim()).filter(|&x| pw[(x, x)].re > 0.5).count(), 1);
    let ck = MatrixRep64::from_atomic(&build_inductive_ck(2, &[1, 2, 2, 1, 2, 1, 1, 2], 4).unwrap());
    let pw = wandering_projection(&ck, Vertex(0));
    assert!(ck.interior(1).iter().all(|&x| pw.column(x).norm() < 1e-12));
}

#[test]
fn c_lambda_on_one_vertex() {
    let o2 = fixture("odometer2");
    let lam = Phase::rational(2, 9).unwrap();
    let rep = build_c_lambda(&o2, Vertex(0), lam, 3).unwrap();
    let xi = rep.wandering_labels()[0];
    assert_eq!(rep.apply(Gen::V, xi), Image::To(xi, lam));
    // U(S_μ ξ) = S_{1·μ} λ^{1|_μ} ξ
    for mu in o2.graph().paths_up_to(2) {
        let (nu, r) = o2.act_restrict(1, &mu);
        let lhs = rep.apply_word(&Word::new([Gen::V]).then(&Word::s_path(mu.edges())), xi);
        let rhs = rep.apply_word(&Word::s_path(nu.edges()), xi).scaled(lam.pow(r as i64));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn two_components_at_alpha_two() {
    let o2 = fixture("odometer2");
    let rep = build_pure_shift_cycle(&o2, Vertex(0), 2, Phase::one(), 3).unwrap();
    let comps = decompose_unitary_pure(&rep).unwrap();
    let mut eig: Vec<f64> = comps.iter().map(|c| c.lambda.to_complex::<f64>().re).collect();
    eig.sort_by(f64::total_cmp);
    assert!((eig[0] + 1.0).abs() < 1e-12 && (eig[1] - 1.0).abs() < 1e-12);
    // brute force: V on the two wandering labels is the swap
    let w = rep.wandering_labels();
    assert_eq!(rep.apply(Gen::V, w[0]).target(), Some(w[1]));
    assert_eq!(rep.apply(Gen::V, w[1]).target(), Some(w[0]));
}

#[test]
fn inductive_v_is_a_bijection_on_interior() {
    let rep = build_inductive_ck(3, &[1, 3, 2, 2, 1, 3, 3, 1, 2], 5).unwrap();
    let inner = rep.interior(3);
    let mut hits = vec![0; rep.len()];
    for &x in &inner {
        let Image::To(y, _) = rep.apply(Gen::V, x) else { panic!("V leaves the window at {}", rep.label(x)) };
        hits[y] += 1;
        let Image::To(z, _) = rep.apply(Gen::VAdj, x) else { panic!() };
        assert_eq!(rep.apply(Gen::V, z).target(), Some(x));
    }
    assert!(hits.iter().all(|&h| h <= 1));
}

#[test]
fn cycle_case_one_eta_eigenvector() {
    let lam = Phase::rational(3, 8).unwrap();
    let rep = build_cycle_ck(2, &[2], lam, false, 4).unwrap();
    let a = rep.action();
    let eta = rep.find("η").unwrap();
    let s1 = Gen::S(a.graph().edge("e1").unwrap());
    assert_eq!(rep.apply(s1, eta), Image::To(eta, lam));
}

#[test]
fn two_vertex_embedding_on_paths() {
    let tv = fixture("two_vertex");
    let g = tv.graph();
    let lam = Phase::rational(1, 5).unwrap();
    let rep = build_c_lambda(&tv, g.vertex("v0").unwrap(), lam, 4).unwrap();
    let d = dilate_unitary_pure::<f64>(&rep, g.edge("e0").unwrap()).unwrap();
    let mut checked = 0;
    for mu in g.paths_up_to(2) {
        let (xi, tail, w, c) = if mu.src() == g.vertex("v0").unwrap() { ("ξ1", "e0", 0, C64::new(1.0, 0.0)) } else { ("ξ2", "e1", 3, lam.to_complex()) };
        let small = if mu.is_vertex() { xi.to_string() } else { format!("{}{xi}", g.display_path(&mu)) };
        let Some(x) = d.small.find(&small) else { continue };
        let prefix = if mu.is_vertex() { String::new() } else { g.display_path(&mu) };
        let big = d.big.find(&format!("{prefix}{tail}{xi}⊗w{w}")).unwrap();
        for b in 0..d.big.dim() {
            let expect = if b == big { c } else { C64::new(0.0, 0.0) };
            assert!((d.embed[(b, x)] - expect).norm() < 1e-15, "{small} at {}", d.big.label(b));
        }
        checked += 1;
    }
    assert!(checked >= 6);
    // J* Û J on ξ1, ξ2 reproduces U0
    let u = compress(&d.big, &d.embed, &Word::new([Gen::V])).unwrap();
    let (x0, x1) = (d.small.find("ξ1").unwrap(), d.small.find("ξ2").unwrap());
    assert!((u[(x1, x0)] - C64::new(1.0, 0.0)).norm() < 1e-12);
    assert!((u[(x0, x1)] - lam.to_complex::<f64>()).norm() < 1e-12);
    let f0 = dilate_unitary_pure::<f64>(&rep, g.edge("f0").unwrap()).unwrap();
    assert_eq!(f0.fiber, 6);
    assert!(verify_dilation(&f0, 2).unwrap().passed);
}
