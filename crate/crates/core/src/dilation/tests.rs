use num_complex::Complex;

use super::*;
use crate::action::SelfSimilarAction;
use crate::atomic::{build_c_lambda, build_cycle_ck, build_inductive_ck, build_left_regular, verify_relations};
use crate::matrix::build_fock;
use crate::phase::Phase;
use crate::zappa_szep::factory_odometer;
use crate::Vertex;

fn two_vertex() -> SelfSimilarAction {
    SelfSimilarAction::from_json(include_str!("../../../../fixtures/two_vertex.json")).unwrap()
}

#[test]
fn pure_case_on_fock_space() {
    let a = factory_odometer(2).unwrap();
    let rep = build_fock::<f64>(&a, Vertex(0), 4, 4).unwrap();
    let d = dilate_pure_case(&rep, 5).unwrap();
    assert_eq!(d.fiber, 11);
    let r = verify_dilation(&d, 2).unwrap();
    assert!(r.isometry_deviation <= 1e-12);
    assert!(r.passed, "{:?}", r.compressions.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    assert!(r.adjoint_deviation <= 1e-12);
    assert!(!r.nontriviality.trivial);
    assert!(r.nontriviality.max_norm >= 0.1);
}

#[test]
fn intertwiner_choice_does_not_matter() {
    let a = factory_odometer(2).unwrap();
    let rep = build_fock::<f64>(&a, Vertex(0), 5, 5).unwrap();
    let d0 = dilate_pure_case(&rep, 4).unwrap();
    let d1 = dilate_pure_case_with(&rep, 4, IntertwinerChoice::ExtraPeriods(1)).unwrap();
    assert_eq!(d0.big.labels(), d1.big.labels());
    let mut compared = 0;
    for e in a.graph().edges() {
        for x in 0..d0.big.dim() {
            let g = crate::word::Gen::S(e);
            if d0.big.is_boundary(g, x) || d1.big.is_boundary(g, x) {
                continue;
            }
            compared += 1;
            assert_eq!(d0.big.column(g, x), d1.big.column(g, x));
        }
    }
    assert!(compared > 0);
}

#[test]
fn atomic_pure_dilation_extends_input() {
    let a = factory_odometer(2).unwrap();
    let rep = build_left_regular(&a, Vertex(0), 4).unwrap();
    let big = dilate_atomic_pure(&rep, 5).unwrap();
    assert_eq!(&big.labels()[..rep.len()], rep.labels());
    for e in a.graph().edges() {
        for x in 0..rep.len() {
            assert_eq!(big.apply(crate::word::Gen::S(e), x), rep.apply(crate::word::Gen::S(e), x));
        }
    }
    let rel = verify_relations(&big, 2);
    assert!(rel.passed(), "{:?}", rel.witnesses);
    assert!(rel.v_unitary_on_interior);
}

#[test]
fn atomic_and_matrix_pure_dilations_match() {
    let a = factory_odometer(2).unwrap();
    let rep = build_left_regular(&a, Vertex(0), 4).unwrap();
    let atomic = dilate_atomic_pure(&rep, 5).unwrap();
    let d = dilate_pure_case(&MatrixRep::<f64>::from_atomic(&rep), 5).unwrap();
    let m = match_atomic_dilation(&atomic, &d).unwrap();
    assert!(m.compared > 100);
    assert!(m.max_deviation <= 1e-12);
}

#[test]
fn unitary_pure_two_vertex_example() {
    let a = two_vertex();
    let g = a.graph();
    let lam = Phase::rational(1, 5).unwrap();
    let rep = build_c_lambda(&a, g.vertex("v0").unwrap(), lam, 4).unwrap();
    let d = dilate_unitary_pure::<f64>(&rep, g.edge("e0").unwrap()).unwrap();
    assert_eq!(d.fiber, 4);
    assert_eq!((d.rotation, d.offset), (0, 0));
    let (x0, x1) = (d.small.find("ξ1").unwrap(), d.small.find("ξ2").unwrap());
    let col = |x: usize| -> Vec<(String, Complex<f64>)> {
        (0..d.big.dim()).filter(|&b| d.embed[(b, x)] != Complex::new(0.0, 0.0)).map(|b| (d.big.label(b).to_string(), d.embed[(b, x)])).collect()
    };
    assert_eq!(col(x0), vec![("e0ξ1⊗w0".to_string(), Complex::new(1.0, 0.0))]);
    assert_eq!(col(x1), vec![("e1ξ2⊗w3".to_string(), lam.to_complex::<f64>())]);
    let r = verify_dilation(&d, 3).unwrap();
    assert!(r.passed);
    assert!(r.max_compression_deviation <= 1e-10);
    assert!(!r.nontriviality.trivial);
}

#[test]
fn unitary_pure_other_orbit_has_fiber_six() {
    let a = two_vertex();
    let g = a.graph();
    let rep = build_c_lambda(&a, g.vertex("v0").unwrap(), Phase::rational(1, 3).unwrap(), 3).unwrap();
    let d = dilate_unitary_pure::<f64>(&rep, g.edge("f0").unwrap()).unwrap();
    assert_eq!(d.fiber, 6);
    assert_eq!(d.offset, 1);
    let r = verify_dilation(&d, 2).unwrap();
    assert!(r.passed);
    assert!(!r.nontriviality.trivial);
}

#[test]
fn unitary_pure_rejects_other_types() {
    let a = two_vertex();
    let rep = build_left_regular(&a, Vertex(0), 3).unwrap();
    assert!(matches!(dilate_unitary_pure::<f64>(&rep, a.graph().edge("e0").unwrap()), Err(Error::WrongType(_))));
}

#[test]
fn direct_sum_is_trivial() {
    let rep = build_cycle_ck(2, &[2], Phase::rational(1, 3).unwrap(), false, 4).unwrap();
    let other = build_inductive_ck(2, &[1, 2, 2, 1, 2, 1, 1, 2], 4).unwrap();
    let d = Dilation::<f64>::direct_sum(&rep, &other).unwrap();
    let t = check_trivial(&d, 1e-12);
    assert!(t.trivial, "{t:?}");
    assert!(t.blocks.iter().all(|b| b.columns > 0));
}

fn block_over(rep: &MatrixRep<f64>, kdim: usize) -> BlockDilation<f64> {
    let n = rep.dim();
    let ne = rep.action().graph().num_edges();
    BlockDilation {
        rep: rep.clone(),
        aux_vertex: vec![None; kdim],
        a: CMatrix::zeros(n, kdim),
        b: CMatrix::identity(kdim, kdim),
        c: vec![CMatrix::zeros(n, kdim); ne],
        d: vec![CMatrix::zeros(kdim, kdim); ne],
        e: vec![CMatrix::zeros(kdim, n); ne],
    }
}

#[test]
fn block_family_detects_off_diagonal_blocks() {
    let atomic = build_inductive_ck(2, &[1, 2, 2, 1, 2, 1, 1, 2], 6).unwrap();
    let rep = MatrixRep::<f64>::from_atomic(&atomic);
    let deep = rep.interior(3)[0];
    let trivial = block_over(&rep, 2);
    let v = verify_block_dilation(&trivial, 1e-10);
    assert!(!v.detected, "{v:?}");
    assert!(v.columns > rep.dim() / 4);

    let mut with_a = block_over(&rep, 2);
    with_a.a[(deep, 0)] = Complex::new(0.3, 0.0);
    assert!(verify_block_dilation(&with_a, 1e-10).detected);

    let mut with_c = block_over(&rep, 2);
    with_c.c[0][(deep, 1)] = Complex::new(0.0, 0.2);
    assert!(verify_block_dilation(&with_c, 1e-10).detected);

    let mut with_e = block_over(&rep, 2);
    with_e.e[1][(0, deep)] = Complex::new(0.1, 0.1);
    assert!(verify_block_dilation(&with_e, 1e-10).detected);
}
