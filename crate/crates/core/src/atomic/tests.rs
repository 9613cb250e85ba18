use super::*;
use crate::zappa_szep::{factory_bs, factory_odometer, letter};

fn e(a: &SelfSimilarAction, i: usize) -> Gen {
    Gen::S(letter(a, i))
}

fn assert_clean(rep: &AtomicRep, d: usize) -> RelationReport {
    let r = verify_relations(rep, d);
    assert!(r.passed(), "{:?}", r.witnesses);
    assert!(r.interior_labels > 0);
    r
}

#[test]
fn left_regular_is_pure_and_not_ck() {
    let o2 = factory_odometer(2).unwrap();
    let rep = build_left_regular(&o2, Vertex(0), 4).unwrap();
    let r = assert_clean(&rep, 2);
    assert!(!r.ck_on_interior);
    assert!(!r.v_unitary_on_interior);
    let vac = rep.find("(v, 0)").unwrap();
    assert_eq!(rep.apply(Gen::VAdj, vac), Image::Zero);
    // V(e2, 0) = (e1, 1): carry
    let x = rep.find("(e2, 0)").unwrap();
    assert_eq!(rep.apply(Gen::V, x), Image::To(rep.find("(e1, 1)").unwrap(), Phase::one()));
}

#[test]
fn left_regular_on_two_vertex_graph() {
    let a = SelfSimilarAction::from_json(include_str!("../../../../fixtures/two_vertex.json")).unwrap();
    for v in a.graph().vertices() {
        let rep = build_left_regular(&a, v, 4).unwrap();
        assert_clean(&rep, 2);
    }
}

#[test]
fn cycle_ck_paired_is_unitary_and_ck() {
    let rep = build_cycle_ck(2, &[2], Phase::rational(1, 5).unwrap(), false, 5).unwrap();
    let r = assert_clean(&rep, 3);
    assert!(r.ck_on_interior);
    assert!(r.v_unitary_on_interior);
    assert!(r.relations["NC"].checked > 0);
}

#[test]
fn cycle_ck_word_one_alone_is_pure() {
    let rep = build_cycle_ck(3, &[1], Phase::one(), false, 4).unwrap();
    let r = assert_clean(&rep, 2);
    assert!(r.ck_on_interior);
    assert!(!r.v_unitary_on_interior);
    let eta = rep.find("η").unwrap();
    assert_eq!(rep.apply(Gen::VAdj, eta), Image::Zero);
}

#[test]
fn general_cycle_ck() {
    let rep = build_cycle_ck(3, &[1, 3, 2], Phase::rational(-1, 4).unwrap(), false, 5).unwrap();
    let r = assert_clean(&rep, 3);
    assert!(r.ck_on_interior && r.v_unitary_on_interior);
}

#[test]
fn non_primitive_and_periodic_words_rejected() {
    assert!(matches!(build_cycle_ck(2, &[1, 2, 1, 2], Phase::one(), false, 3), Err(Error::NonPrimitiveWord { period: 2 })));
    assert!(matches!(build_inductive_ck(2, &[1, 2, 1, 2, 1], 3), Err(Error::PeriodicWordRejected { period: 2 })));
}

#[test]
fn inductive_ck_carry() {
    let prefix = [1, 2, 2, 1, 2, 1, 1, 1, 2, 2, 2, 1];
    let rep = build_inductive_ck(2, &prefix, 8).unwrap();
    let r = assert_clean(&rep, 3);
    assert!(r.ck_on_interior && r.v_unitary_on_interior);
    // V S_1 ξ = S_2 ξ for every interior ξ
    let a = rep.action().clone();
    for x in rep.interior(2) {
        let lhs = rep.apply_word(&Word::new([Gen::V, e(&a, 1)]), x);
        let rhs = rep.apply(e(&a, 2), x);
        if !lhs.is_unknown() && !rhs.is_unknown() {
            assert_eq!(lhs, rhs, "at {}", rep.label(x));
        }
    }
}

#[test]
fn mutated_v_breaks_ss() {
    let o2 = factory_odometer(2).unwrap();
    let rep = build_left_regular(&o2, Vertex(0), 4).unwrap();
    let mut t = rep.tables();
    // swap the V-images of two labels, keeping V an isometry
    let x = rep.find("(e1, 0)").unwrap();
    let y = rep.find("(e2, 0)").unwrap();
    t.v.swap(x, y);
    let (vx, vy) = (t.v[x].target().unwrap(), t.v[y].target().unwrap());
    t.v_adj[vx] = Image::To(x, Phase::one());
    t.v_adj[vy] = Image::To(y, Phase::one());
    let bad = AtomicRep::from_tables(o2, t).unwrap();
    let r = verify_relations(&bad, 1);
    assert!(r.violations("SS") > 0);
    assert_eq!(r.violations("isometry"), 0);
    assert!(r.witnesses.iter().any(|w| w.relation == "SS"));
}

#[test]
fn from_tables_rejects_broken_adjoint() {
    let o2 = factory_odometer(2).unwrap();
    let rep = build_left_regular(&o2, Vertex(0), 2).unwrap();
    let mut t = rep.tables();
    // V (e2, 0) = (e1, 1), so V* (e1, 1) must be (e2, 0)
    t.v_adj[rep.find("(e1, 1)").unwrap()] = Image::Zero;
    assert!(AtomicRep::from_tables(o2, t).is_err());
}

#[test]
fn wandering_vectors() {
    let o2 = factory_odometer(2).unwrap();
    let rep = build_left_regular(&o2, Vertex(0), 4).unwrap();
    let vac = rep.find("(v, 0)").unwrap();
    assert_eq!(rep.is_wandering(vac, 2), Some(true));
    let ck = build_cycle_ck(2, &[2], Phase::one(), false, 4).unwrap();
    assert!(ck.wandering_labels().is_empty());
}

#[test]
fn levels_decrease_toward_boundary() {
    let o2 = factory_odometer(2).unwrap();
    let rep = build_left_regular(&o2, Vertex(0), 4).unwrap();
    for x in 0..rep.len() {
        for g in rep.gens() {
            if let Image::To(y, _) = rep.apply(g, x) {
                let (lx, ly) = (rep.level(x), rep.level(y));
                assert!(lx == UNBOUNDED || ly + 1 >= lx);
            }
        }
    }
    assert_eq!(rep.level(rep.find("(e1e1e1e1, 0)").unwrap()), 0);
}

#[test]
fn pure_shift_cycle_relations() {
    let b = factory_bs(2, 3).unwrap();
    let rep = build_pure_shift_cycle(&b, Vertex(0), 2, Phase::rational(1, 3).unwrap(), 4).unwrap();
    let r = assert_clean(&rep, 3);
    assert!(r.v_unitary_on_interior && !r.ck_on_interior);
}

#[test]
fn pure_shift_rejects_bad_u0() {
    let a = SelfSimilarAction::from_json(include_str!("../../../../fixtures/two_vertex.json")).unwrap();
    // U0 must move v0-labels to v1-labels
    let w = vec![("a".to_string(), Vertex(0)), ("b".to_string(), Vertex(1))];
    let bad = build_pure_shift(&a, &w, &[(0, Phase::one()), (1, Phase::one())], 2);
    assert!(matches!(bad, Err(Error::WanderingMismatch(_))));
    let good = build_pure_shift(&a, &w, &[(1, Phase::one()), (0, Phase::one())], 3).unwrap();
    assert_clean(&good, 2);
}

#[test]
fn extend_unitary_reproduces_builder() {
    let b = factory_bs(3, 2).unwrap();
    let lam = Phase::rational(2, 7).unwrap();
    let rep = build_pure_shift_cycle(&b, Vertex(0), 3, lam, 3).unwrap();
    let wand = rep.wandering_labels();
    assert_eq!(wand.len(), 3);
    let u0: Vec<_> = wand
        .iter()
        .map(|&w| match rep.apply(Gen::V, w) {
            Image::To(y, ph) => (w, y, ph),
            other => panic!("{other:?}"),
        })
        .collect();
    let ext = extend_unitary_from_wandering(&rep, &u0).unwrap();
    let (t0, t1) = (rep.tables(), ext.tables());
    for x in 0..rep.len() {
        for (a, b) in [(t0.v[x], t1.v[x]), (t0.v_adj[x], t1.v_adj[x])] {
            if !a.is_unknown() && !b.is_unknown() {
                assert_eq!(a, b, "at {}", rep.label(x));
            }
        }
    }
}

#[test]
fn c_lambda_splitting() {
    let b = factory_bs(2, 3).unwrap();
    let lam = Phase::rational(1, 3).unwrap();
    let alpha = 3;
    let rep = build_pure_shift_cycle(&b, Vertex(0), alpha, lam, 2).unwrap();
    let comps = decompose_unitary_pure(&rep).unwrap();
    assert_eq!(comps.len(), alpha);
    // the eigenvalues are the α-th roots of conj(λ), conjugated: z^α = λ
    for c in &comps {
        assert!(c.lambda.pow(alpha as i64).approx_eq(&lam));
        assert!(c.cycle_phase.approx_eq(&lam));
        // V η = conj(βω) η on a one-vertex orbit
        let eta = &c.eta[0];
        for &(x, ph) in eta {
            let Image::To(y, q) = rep.apply(Gen::V, x) else { panic!() };
            let coeff = eta.iter().find(|(z, _)| *z == y).unwrap().1;
            assert!(ph.mul(q).approx_eq(&c.lambda.mul(coeff)));
        }
    }
    let mut seen: Vec<f64> = comps.iter().map(|c| c.lambda.turns()).collect();
    seen.dedup();
    assert_eq!(seen.len(), alpha);
}

#[test]
fn c_lambda_on_two_vertex_orbit() {
    let a = SelfSimilarAction::from_json(include_str!("../../../../fixtures/two_vertex.json")).unwrap();
    let lam = Phase::rational(1, 4).unwrap();
    let rep = build_c_lambda(&a, Vertex(0), lam, 4).unwrap();
    assert_clean(&rep, 2);
    let comps = decompose_unitary_pure(&rep).unwrap();
    assert_eq!(comps.len(), 1);
    assert!(comps[0].lambda.approx_eq(&lam));
    assert_eq!(comps[0].orbit.len(), 2);
}

#[test]
fn direct_sum_and_restriction() {
    let rep = build_cycle_ck(2, &[2], Phase::one(), false, 3).unwrap();
    let sum = rep.direct_sum(&rep).unwrap();
    assert_eq!(sum.len(), 2 * rep.len());
    assert!(verify_relations(&sum, 2).passed());
    let back = sum.restrict_to_invariant(&(0..rep.len()).collect::<Vec<_>>()).unwrap();
    assert_eq!(back.labels(), rep.labels());
}
