//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfsim::action::{verify_axioms_window, ActionDoc};
use selfsim::atomic::{
    build_c_lambda, build_cycle_ck, build_inductive_ck, build_left_regular, build_left_regular_window, build_pure_shift_cycle,
    decompose_unitary_pure, verify_relations,
};
use selfsim::dilation::{
    check_trivial, dilate_atomic_pure, dilate_pure_case, dilate_unitary_pure, match_atomic_dilation, verify_block_dilation, verify_dilation,
    BlockDilation, Dilation,
};
use selfsim::matrix::{build_fock, CMatrix};
use selfsim::wold::{classify_atomic, classify_matrix, wandering_projection, WoldReport, WoldType};
use selfsim::word::Word;
use selfsim::zappa_szep::{parse_zs, zs_equals, zs_product, ZsElement};
use selfsim::{AtomicRep, MatrixRep64, Phase, SelfSimilarAction, Vertex, C64};

type Verdict = Result<String, String>;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn action(name: &str) -> SelfSimilarAction {
    SelfSimilarAction::from_json(&fixture(name)).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const FIXTURES: [&str; 5] = ["odometer2", "odometer3", "bs23", "bs32", "two_vertex"];

fn axiom_suite() -> Verdict {
    let start = Instant::now();
    let mut checked = 0;
    for name in FIXTURES {
        let r = verify_axioms_window(&action(name), 4, 5);
        ensure(r.passed(), || format!("{name}: {:?}", r.violations.first()))?;
        checked += r.checked.values().sum::<usize>();
    }
    let mut doc: ActionDoc = serde_json::from_str(&fixture("two_vertex")).unwrap();
    for (k, v) in [("e0", "f1"), ("e1", "e0"), ("f0", "e1"), ("f1", "f0")] {
        doc.eperm.insert(k.into(), v.into());
    }
    ensure(SelfSimilarAction::from_doc(&doc).is_err(), || "mutated fixture accepted".into())?;
    let broken = verify_axioms_window(&SelfSimilarAction::from_doc_unchecked(&doc).unwrap(), 4, 5);
    let witness = broken.violations.iter().find(|v| v.axiom == "automorphism").ok_or("no automorphism witness")?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!("{checked} instances exact, mutation caught ({}), {secs:.2} s", witness.witness))
}

fn zs_relations() -> Verdict {
    let mut n_checked = 0;
    for (name, n) in [("odometer2", 2), ("odometer3", 3)] {
        let a = action(name);
        let g = a.graph();
        let v = parse_zs(g, "∅,1").unwrap();
        let en = parse_zs(g, &format!("e{n},0")).unwrap();
        let e1 = parse_zs(g, "e1,0").unwrap();
        let lhs = zs_product(&a, [&v, &en]).unwrap();
        let rhs = zs_product(&a, [&e1, &v]).unwrap();
        ensure(zs_equals(&lhs, &rhs), || format!("{name}: {} != {}", lhs.display(g), rhs.display(g)))?;
        n_checked += 1;
    }
    for (name, n, m) in [("bs23", 2, 3), ("bs32", 3, 2)] {
        let a = action(name);
        let g = a.graph();
        let ga = parse_zs(g, "∅,1").unwrap();
        let b = parse_zs(g, "e1,0").unwrap();
        let lhs: Vec<&ZsElement> = std::iter::repeat_n(&ga, n).chain([&b]).collect();
        let rhs: Vec<&ZsElement> = [&b].into_iter().chain(std::iter::repeat_n(&ga, m)).collect();
        let (l, r) = (zs_product(&a, lhs).unwrap(), zs_product(&a, rhs).unwrap());
        ensure(zs_equals(&l, &r), || format!("{name}: {} != {}", l.display(g), r.display(g)))?;
        n_checked += 1;
    }
    Ok(format!("{n_checked} relations exact"))
}

fn structural_constants() -> Verdict {
    let a = action("two_vertex");
    let g = a.graph();
    let m_e = a.big_m(g.edge("e0").unwrap()).unwrap();
    let m_f = a.big_m(g.edge("f0").unwrap()).unwrap();
    ensure((m_e, m_f) == (4, 6), || format!("M = {m_e}, {m_f}"))?;
    for name in FIXTURES {
        let a = action(name);
        for e in a.graph().edges() {
            let k = a.vertex_orbit(a.graph().src(e)).len() as u64;
            ensure(a.rho(e) % k == 1 % k, || format!("{name}: rho mod orbit size fails at {}", a.graph().edge_name(e)))?;
        }
    }
    Ok("M(e0) = 4, M(f0) = 6, congruence on all fixtures".into())
}

fn builders(depth: usize) -> Vec<(&'static str, AtomicRep)> {
    let o2 = action("odometer2");
    let tv = action("two_vertex");
    let v0 = tv.graph().vertex("v0").unwrap();
    vec![
        ("left-regular O2", build_left_regular(&o2, Vertex(0), depth).unwrap()),
        ("left-regular two-vertex", build_left_regular(&tv, v0, depth).unwrap()),
        ("c^λ O2", build_c_lambda(&o2, Vertex(0), Phase::rational(1, 3).unwrap(), depth).unwrap()),
        ("c^λ two-vertex", build_c_lambda(&tv, v0, Phase::rational(1, 5).unwrap(), depth).unwrap()),
        ("inductive-CK", build_inductive_ck(2, &[1, 2, 2, 1, 2, 1, 1, 1, 2, 2], depth).unwrap()),
        ("cycle-CK case 1", build_cycle_ck(2, &[2], Phase::rational(2, 5).unwrap(), false, depth).unwrap()),
        ("cycle-CK case 2", build_cycle_ck(2, &[1], Phase::rational(1, 7).unwrap(), false, depth).unwrap()),
        ("cycle-CK case 2, η₀ ∈ Ran V", build_cycle_ck(2, &[1], Phase::rational(1, 7).unwrap(), true, depth).unwrap()),
    ]
}

fn representation_identities() -> Verdict {
    const NEEDED: [&str; 7] = ["SS", "NC", "TCK1", "TCK2", "TCK3", "range-V", "range-V*"];
    let mut worst: f64 = 0.0;
    let mut instances = 0;
    for (name, rep) in builders(5) {
        let r = verify_relations(&rep, 2);
        ensure(r.interior_labels > 0, || format!("{name}: empty interior"))?;
        for rel in NEEDED {
            let stat = r.relations.get(rel).ok_or_else(|| format!("{name}: {rel} not checked"))?;
            ensure(stat.checked > 0, || format!("{name}: {rel} has no instances"))?;
            instances += stat.checked;
        }
        ensure(r.passed(), || format!("{name}: {:?}", r.witnesses.first()))?;
        if r.nc_hypothesis() {
            ensure(r.violations("NC") == 0, || format!("{name}: NC fails under its hypothesis"))?;
        }
        let m = MatrixRep64::from_atomic(&rep).verify_identities();
        ensure(m.passed(), || format!("{name}: {:?}", m.failures().next()))?;
        for rel in NEEDED {
            ensure(m.checks.iter().any(|c| c.relation == rel), || format!("{name}: matrix {rel} not checked"))?;
            worst = worst.max(m.max_deviation(rel));
        }
        ensure(worst <= 1e-10, || format!("{name}: matrix deviation {worst:e}"))?;
    }
    Ok(format!("{instances} exact atomic instances, matrix max deviation {worst:.1e}"))
}

fn wold_agrees(name: &str, rep: &AtomicRep, expect: WoldType) -> Result<WoldReport, String> {
    let at = classify_atomic(rep);
    let mx = classify_matrix(&MatrixRep64::from_atomic(rep));
    for r in [&at, &mx] {
        ensure(r.inconclusive == 0, || format!("{name} ({}): {} inconclusive", r.engine, r.inconclusive))?;
        ensure(r.single_type() == Some(expect), || format!("{name} ({}): {:?}", r.engine, r.components))?;
        let total: f64 = r.components.iter().map(|c| c.dimension).sum();
        ensure((total - r.interior_dim as f64).abs() < 1e-9, || format!("{name} ({}): {total} of {}", r.engine, r.interior_dim))?;
        ensure(r.max_commutation_deviation() <= 1e-10, || format!("{name} ({}): commutation {:e}", r.engine, r.max_commutation_deviation()))?;
        ensure(!r.commutation.is_empty(), || format!("{name} ({}): no commutation checks", r.engine))?;
    }
    Ok(at)
}

fn wold_faithfulness() -> Verdict {
    let o2 = action("odometer2");
    let lr = wold_agrees("left-regular", &build_left_regular(&o2, Vertex(0), 5).unwrap(), WoldType::LeftRegular)?;
    let alpha = lr.component(WoldType::LeftRegular).unwrap().multiplicity["v"];
    ensure(alpha == 1.0, || format!("α_v = {alpha}"))?;
    let tv = action("two_vertex");
    wold_agrees("c^λ", &build_c_lambda(&tv, Vertex(0), Phase::rational(1, 5).unwrap(), 5).unwrap(), WoldType::UnitaryPureShift)?;
    wold_agrees("inductive-CK", &build_inductive_ck(2, &[1, 2, 2, 1, 2, 1, 1, 1, 2, 2], 5).unwrap(), WoldType::UnitaryCk)?;
    wold_agrees("cycle-CK case 2", &build_cycle_ck(2, &[1], Phase::one(), false, 5).unwrap(), WoldType::PureCk)?;
    Ok("types (iv), (iii), (i), (ii) in both engines, α_v = 1".into())
}

fn atomic_oracle() -> Verdict {
    let tv = action("two_vertex");
    let lam = Phase::rational(2, 7).unwrap();
    let (alpha, m) = (2usize, 2usize);
    let atomic = build_pure_shift_cycle(&tv, Vertex(0), alpha, lam, 5).unwrap();
    let rep = MatrixRep64::from_atomic(&atomic);
    let n = rep.dim();

    // orthonormal basis of the wandering space on the interior
    let inner = rep.interior(2);
    let mut pw = CMatrix::<f64>::zeros(n, n);
    for v in tv.graph().vertices() {
        pw += wandering_projection(&rep, v);
    }
    let sub = pw.select_rows(&inner).select_columns(&inner);
    let eig = sub.symmetric_eigen();
    let keep: Vec<usize> = (0..inner.len()).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    ensure(keep.len() == alpha * m, || format!("wandering dimension {}", keep.len()))?;
    let mut q = CMatrix::<f64>::zeros(n, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        for (r, &x) in inner.iter().enumerate() {
            q[(x, c)] = eig.eigenvectors[(r, i)];
        }
    }
    let vm = rep.word_matrix(&Word::v_pow(m as u64));
    let b = q.adjoint() * &vm * &q;

    // {conj(βω_k)} with β² = conj(λ), ω_k² = 1, each once per orbit vertex
    let beta = C64::from_polar(1.0, -std::f64::consts::PI * lam.turns());
    let mut dims = 0;
    let mut worst: f64 = 0.0;
    for k in 0..alpha {
        let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / alpha as f64);
        let z = (beta * omega).conj();
        let shifted = &b - CMatrix::<f64>::identity(b.nrows(), b.ncols()) * z;
        let sv = shifted.singular_values();
        let mut small: Vec<f64> = sv.iter().copied().filter(|s| *s <= 1e-9).collect();
        small.sort_by(f64::total_cmp);
        ensure(small.len() == m, || format!("eigenvalue {z} has multiplicity {}", small.len()))?;
        worst = worst.max(small.last().copied().unwrap_or(0.0));
        dims += small.len();
    }
    ensure(dims == b.nrows(), || "spectrum not exhausted".into())?;

    let comps = decompose_unitary_pure(&atomic).map_err(|e| e.to_string())?;
    ensure(comps.len() == alpha, || format!("{} summands", comps.len()))?;
    let dense = |combo: &[(usize, Phase)]| {
        let mut v = CMatrix::<f64>::zeros(n, 1);
        for &(x, ph) in combo {
            v[(x, 0)] += ph.to_complex::<f64>();
        }
        v
    };
    let mut eta_dev: f64 = 0.0;
    for c in &comps {
        let last = dense(&c.eta[m - 1]);
        let first = dense(&c.eta[0]);
        let bw = c.beta.mul(c.omega).to_complex::<f64>();
        let d = (rep.v() * &last - first * bw.inv()).norm();
        eta_dev = eta_dev.max(d);
    }
    ensure(eta_dev <= 1e-10, || format!("η deviation {eta_dev:e}"))?;
    Ok(format!("spectrum of V^2 on W matches within {worst:.1e}, η deviation {eta_dev:.1e}"))
}

fn pure_dilation() -> Verdict {
    let start = Instant::now();
    let o2 = action("odometer2");
    let rep = MatrixRep64::from_atomic(&build_left_regular(&o2, Vertex(0), 6).unwrap());
    let d = dilate_pure_case(&rep, 8).map_err(|e| e.to_string())?;
    let r = verify_dilation(&d, 3).map_err(|e| e.to_string())?;
    ensure(r.isometry_deviation <= 1e-12, || format!("J*J deviation {:e}", r.isometry_deviation))?;
    ensure(r.max_compression_deviation <= 1e-10, || format!("compression deviation {:e}", r.max_compression_deviation))?;
    ensure(r.compressions.iter().all(|c| c.passed), || "a compression failed".into())?;
    ensure(r.passed, || "verifier rejected the dilation".into())?;
    ensure(!r.nontriviality.trivial && r.nontriviality.max_norm >= 0.1, || format!("off-corner norm {}", r.nontriviality.max_norm))?;

    // CK preservation through the exact engine
    let mut ck_cases = 0;
    for (name, ck) in [
        ("inductive-CK", build_inductive_ck(2, &[1, 2, 2, 1, 2, 1, 1, 1, 2, 2], 5).unwrap()),
        ("cycle-CK case 2", build_cycle_ck(2, &[1], Phase::rational(1, 7).unwrap(), false, 5).unwrap()),
    ] {
        ensure(verify_relations(&ck, 2).ck_on_interior, || format!("{name} is not CK"))?;
        let big = dilate_atomic_pure(&ck, 8).map_err(|e| e.to_string())?;
        let rel = verify_relations(&big, 2);
        ensure(rel.passed() && rel.ck_on_interior && rel.v_unitary_on_interior, || format!("{name}: CK lost, {:?}", rel.witnesses.first()))?;
        ck_cases += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "J*J {:.1e}, {} compressions ≤ {:.1e}, off-corner {:.3}, CK kept in {ck_cases} cases, {secs:.2} s",
        r.isometry_deviation,
        r.compressions.len(),
        r.max_compression_deviation,
        r.nontriviality.max_norm
    ))
}

fn unitary_pure_dilation() -> Verdict {
    let tv = action("two_vertex");
    let g = tv.graph();
    let lam = Phase::rational(1, 5).unwrap();
    let rep = build_c_lambda(&tv, g.vertex("v0").unwrap(), lam, 5).unwrap();
    let d: Dilation<f64> = dilate_unitary_pure(&rep, g.edge("e0").unwrap()).map_err(|e| e.to_string())?;
    let col = |name: &str| -> Vec<(String, C64)> {
        let x = d.small.find(name).unwrap();
        (0..d.big.dim()).filter(|&b| d.embed[(b, x)] != C64::new(0.0, 0.0)).map(|b| (d.big.label(b).to_string(), d.embed[(b, x)])).collect()
    };
    let j0 = col("ξ1");
    let j1 = col("ξ2");
    ensure(j0 == vec![("e0ξ1⊗w0".to_string(), C64::new(1.0, 0.0))], || format!("Jδ_v0 = {j0:?}"))?;
    ensure(j1 == vec![("e1ξ2⊗w3".to_string(), lam.to_complex::<f64>())], || format!("Jδ_v1 = {j1:?}"))?;
    let r = verify_dilation(&d, 3).map_err(|e| e.to_string())?;
    ensure(r.max_compression_deviation <= 1e-10, || format!("compression deviation {:e}", r.max_compression_deviation))?;
    ensure(r.compressions.iter().any(|c| c.lhs == "J* V J"), || "U not compressed".into())?;
    ensure(r.passed, || "verifier rejected the dilation".into())?;
    ensure(!r.nontriviality.trivial, || "dilation is trivial".into())?;
    Ok(format!("Jδ_v0, Jδ_v1 exact, {} compressions ≤ {:.1e}, nontrivial", r.compressions.len(), r.max_compression_deviation))
}

fn random_block(rng: &mut ChaCha8Rng, rep: &MatrixRep64) -> (BlockDilation<f64>, &'static str) {
    let n = rep.dim();
    let ne = rep.action().graph().num_edges();
    let kdim = rng.random_range(1..=3);
    let deep = rep.interior(3);
    let mut b = CMatrix::<f64>::zeros(kdim, kdim);
    for i in 0..kdim {
        b[(i, i)] = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    }
    let mut bd = BlockDilation {
        rep: rep.clone(),
        aux_vertex: vec![None; kdim],
        a: CMatrix::zeros(n, kdim),
        b,
        c: vec![CMatrix::zeros(n, kdim); ne],
        d: vec![CMatrix::zeros(kdim, kdim); ne],
        e: vec![CMatrix::zeros(kdim, n); ne],
    };
    let entry = |rng: &mut ChaCha8Rng| C64::from_polar(rng.random_range(0.05..1.0), rng.random_range(0.0..std::f64::consts::TAU));
    let nnz = rng.random_range(1..=4);
    let which = rng.random_range(0..3);
    let e = rng.random_range(0..ne);
    for _ in 0..nnz {
        let (h, k) = (deep[rng.random_range(0..deep.len())], rng.random_range(0..kdim));
        match which {
            0 => bd.a[(h, k)] = entry(rng),
            1 => bd.c[e][(h, k)] = entry(rng),
            _ => bd.e[e][(k, h)] = entry(rng),
        }
    }
    (bd, ["A", "C_e", "E_e"][which])
}

fn maximality() -> Verdict {
    let unitary_ck = [
        build_inductive_ck(2, &[1, 2, 2, 1, 2, 1, 1, 2], 5).unwrap(),
        build_cycle_ck(2, &[2], Phase::rational(1, 3).unwrap(), false, 5).unwrap(),
        build_cycle_ck(2, &[1], Phase::rational(2, 9).unwrap(), true, 5).unwrap(),
    ];
    let mut sums = 0;
    for x in &unitary_ck {
        for y in &unitary_ck {
            let d = Dilation::<f64>::direct_sum(x, y).map_err(|e| e.to_string())?;
            let t = check_trivial(&d, 1e-12);
            ensure(t.trivial, || format!("direct sum has off-corner norm {:e}", t.max_norm))?;
            sums += 1;
        }
    }
    let reps: Vec<MatrixRep64> = unitary_ck.iter().map(MatrixRep64::from_atomic).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut counts = [0usize; 3];
    for rep in &reps {
        let mut base = random_block(&mut rng, rep).0;
        base.a.fill(C64::new(0.0, 0.0));
        base.c.iter_mut().chain(base.e.iter_mut()).for_each(|m| m.fill(C64::new(0.0, 0.0)));
        let v = verify_block_dilation(&base, 1e-10);
        ensure(!v.detected, || format!("block-diagonal instance flagged: {v:?}"))?;
    }
    let instances = 24;
    for i in 0..instances {
        let (bd, kind) = random_block(&mut rng, &reps[i % reps.len()]);
        let v = verify_block_dilation(&bd, 1e-10);
        ensure(v.detected, || format!("instance {i} with nonzero {kind} not detected: {v:?}"))?;
        counts[["A", "C_e", "E_e"].iter().position(|k| *k == kind).unwrap()] += 1;
    }
    Ok(format!("{sums} direct sums trivial, {instances} random blocks detected (A {}, C {}, E {})", counts[0], counts[1], counts[2]))
}

fn same_entries(x: &MatrixRep64, y: &MatrixRep64) -> Result<usize, String> {
    ensure(x.dim() == y.dim(), || format!("dims {} and {}", x.dim(), y.dim()))?;
    let perm: Vec<usize> = (0..x.dim()).map(|i| y.find(x.label(i)).ok_or_else(|| format!("label {} missing", x.label(i)))).collect::<Result<_, _>>()?;
    let mut entries = 0;
    for g in x.gens() {
        let (mx, my) = (x.gen_matrix(g), y.gen_matrix(g));
        for i in 0..x.dim() {
            for j in 0..x.dim() {
                ensure(mx[(i, j)] == my[(perm[i], perm[j])], || format!("{g:?} differs at ({}, {})", x.label(i), x.label(j)))?;
                entries += 1;
            }
        }
    }
    Ok(entries)
}

fn engine_agreement() -> Verdict {
    let mut entries = 0;
    for name in FIXTURES {
        let a = action(name);
        for v in a.graph().vertices() {
            let direct = build_fock::<f64>(&a, v, 3, 3).unwrap();
            let via = MatrixRep64::from_atomic(&build_left_regular_window(&a, v, 3, 3).unwrap());
            entries += same_entries(&direct, &via).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    let o2 = action("odometer2");
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for rep in [build_left_regular(&o2, Vertex(0), 5).unwrap(), build_cycle_ck(2, &[1], Phase::rational(1, 7).unwrap(), false, 5).unwrap()] {
        let atomic = dilate_atomic_pure(&rep, 6).map_err(|e| e.to_string())?;
        let d = dilate_pure_case(&MatrixRep64::from_atomic(&rep), 6).map_err(|e| e.to_string())?;
        let m = match_atomic_dilation(&atomic, &d).map_err(|e| e.to_string())?;
        ensure(m.compared > 0, || "nothing compared".into())?;
        ensure(m.max_deviation <= 1e-12, || format!("deviation {:e}", m.max_deviation))?;
        compared += m.compared;
        worst = worst.max(m.max_deviation);
    }
    Ok(format!("{entries} entries identical, {compared} dilation entries within {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("axiom suite", axiom_suite),
        ("Zappa–Szép relations", zs_relations),
        ("structural constants", structural_constants),
        ("representation identities", representation_identities),
        ("Wold faithfulness", wold_faithfulness),
        ("atomic spectrum oracle", atomic_oracle),
        ("pure-case dilation", pure_dilation),
        ("unitary + pure-shift dilation", unitary_pure_dilation),
        ("maximality", maximality),
        ("engine agreement", engine_agreement),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match verdict {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
