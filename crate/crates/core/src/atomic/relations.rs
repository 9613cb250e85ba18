use std::collections::BTreeMap;

use serde::Serialize;

use super::{AtomicRep, Image};
use crate::phase::Phase;
use crate::word::{Gen, Word};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationStat {
    pub checked: usize,
    /// Instances where a side left the window (only possible below the word length).
    pub skipped: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationWitness {
    pub relation: String,
    pub label: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub depth: usize,
    pub interior_labels: usize,
    pub relations: BTreeMap<String, RelationStat>,
    pub witnesses: Vec<RelationWitness>,
    /// Every interior label is hit by exactly one `S_e` with `e ∈ vE¹`.
    pub ck_on_interior: bool,
    pub ck_failures: usize,
    /// `V` maps onto every interior label.
    pub v_unitary_on_interior: bool,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.relations.values().all(|s| s.violations == 0)
    }

    pub fn violations(&self, relation: &str) -> usize {
        self.relations.get(relation).map_or(0, |s| s.violations)
    }

    /// Hypothesis under which (SS) forces (NC).
    pub fn nc_hypothesis(&self) -> bool {
        self.ck_on_interior || self.v_unitary_on_interior
    }

    fn record(&mut self, rel: &str, label: &str, lhs: Image, rhs: Image, show: impl Fn(Image) -> String) {
        let stat = self.relations.entry(rel.to_string()).or_default();
        if lhs.is_unknown() || rhs.is_unknown() {
            stat.skipped += 1;
            return;
        }
        stat.checked += 1;
        let same = match (lhs, rhs) {
            (Image::Zero, Image::Zero) => true,
            (Image::To(a, p), Image::To(b, q)) => a == b && p.approx_eq(&q),
            _ => false,
        };
        if !same {
            stat.violations += 1;
            if self.witnesses.len() < 64 {
                self.witnesses.push(RelationWitness {
                    relation: rel.to_string(),
                    label: label.to_string(),
                    detail: format!("{} != {}", show(lhs), show(rhs)),
                });
            }
        }
    }
}

/// Exact check of (SS), (NC), TCK1–3, the two range-projection identities
/// `V S_eS_e* = S_{1·e}S_{1·e}* V` and `V* S_eS_e* = S_fS_f* V*` (`e = 1·f`),
/// isometry of `V`, and CK-ness, on every label of interior level `≥ d`.
pub fn verify_relations(rep: &AtomicRep, d: usize) -> RelationReport {
    let a = rep.action();
    let g = a.graph();
    let xs = rep.interior(d);
    let mut r = RelationReport { depth: d, interior_labels: xs.len(), ..Default::default() };
    let show = |img: Image| match img {
        Image::Zero => "0".to_string(),
        Image::Unknown => "?".to_string(),
        Image::To(y, p) if p.is_one() => rep.label(y).to_string(),
        Image::To(y, p) => format!("{p}·{}", rep.label(y)),
    };
    let one = |x: usize| Image::To(x, Phase::one());
    let w = |gens: &[Gen]| Word::new(gens.iter().copied());

    let mut ck_ok = true;
    let mut unitary = true;
    for &x in &xs {
        let lx = rep.label(x).to_string();
        let ev = |word: &Word| rep.apply_word(word, x);

        // TCK1: one vertex per label, so the P_v are orthogonal and sum to I
        r.relations.entry("TCK1".into()).or_default().checked += 1;

        r.record("isometry", &lx, ev(&w(&[Gen::VAdj, Gen::V])), one(x), show);
        match rep.apply(Gen::VAdj, x) {
            Image::To(..) => r.record("co-isometry-on-range", &lx, ev(&w(&[Gen::V, Gen::VAdj])), one(x), show),
            _ => unitary = false,
        }

        let mut hits = 0;
        for e in g.edges() {
            let se = Gen::S(e);
            let sa = Gen::SAdj(e);
            // TCK2
            r.record("TCK2", &lx, ev(&w(&[sa, se])), rep.apply(Gen::P(g.src(e)), x), show);
            // TCK3: S_eS_e* is the projection onto part of I_{r(e)}
            let proj = ev(&w(&[se, sa]));
            let expect = match proj {
                Image::Zero | Image::Unknown => proj,
                Image::To(..) if rep.vertex_of(x) == g.rng(e) => one(x),
                Image::To(..) => Image::Zero,
            };
            r.record("TCK3", &lx, proj, expect, show);
            if matches!(proj, Image::To(..)) {
                hits += 1;
            }

            let f1 = a.eperm(e);
            let k = a.rho(e);
            // (SS): V S_e = S_{1·e} V^{1|_e}
            let lhs = w(&[Gen::V, se]);
            let rhs = Word::new([Gen::S(f1)]).then(&Word::v_pow(k));
            r.record("SS", &lx, ev(&lhs), ev(&rhs), show);
            // (NC): V* S_{1·e} = S_e V*^{1|_e}
            let lhs = w(&[Gen::VAdj, Gen::S(f1)]);
            let rhs = Word::new([se]).then(&Word::v_adj_pow(k));
            r.record("NC", &lx, ev(&lhs), ev(&rhs), show);
            // V S_eS_e* = S_{1·e}S_{1·e}* V
            r.record("range-V", &lx, ev(&w(&[Gen::V, se, sa])), ev(&w(&[Gen::S(f1), Gen::SAdj(f1), Gen::V])), show);
            // V* S_eS_e* = S_fS_f* V* with e = 1·f
            let f = a.eperm_pow(e, -1);
            r.record("range-V*", &lx, ev(&w(&[Gen::VAdj, se, sa])), ev(&w(&[Gen::S(f), Gen::SAdj(f), Gen::VAdj])), show);
        }
        let tck3_sum = r.relations.entry("TCK3-sum".into()).or_default();
        tck3_sum.checked += 1;
        if hits > 1 {
            tck3_sum.violations += 1;
        }
        let ck_row = g.edges_into(rep.vertex_of(x)).iter().all(|&e| !rep.apply(Gen::SAdj(e), x).is_unknown());
        if ck_row && hits != 1 {
            ck_ok = false;
            r.ck_failures += 1;
        }

        for v in g.vertices() {
            let pv = Gen::P(v);
            let p1v = Gen::P(a.vperm(v));
            r.record("SS", &lx, ev(&w(&[Gen::V, pv])), ev(&w(&[p1v, Gen::V])), show);
            r.record("NC", &lx, ev(&w(&[Gen::VAdj, p1v])), ev(&w(&[pv, Gen::VAdj])), show);
        }
    }
    r.ck_on_interior = ck_ok && !xs.is_empty();
    r.v_unitary_on_interior = unitary && !xs.is_empty();
    r
}
