//! JSON documents for representations and dilations.
//!
//! Every document round-trips: `to_doc(from_doc(d)) == d`. Atomic
//! representations list one entry per label; zero edge images are omitted.
//! Matrices are stored sparsely as `[row, col, [re, im]]` triples.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::action::{ActionDoc, SelfSimilarAction};
use crate::atomic::{AtomicRep, AtomicTables, Image, TraceClosure};
use crate::dilation::{Construction, Dilation, IntertwinerUse};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, MatrixParts, MatrixRep};
use crate::phase::{Phase, PhaseDoc};
use crate::scalar::Real;
use crate::word::Gen;

/// Parses JSON, reporting the path of the offending field on failure.
pub fn parse<D: DeserializeOwned>(s: &str) -> Result<D> {
    let de = &mut serde_json::Deserializer::from_str(s);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema { path, message: e.into_inner().to_string() }
    })
}

/// Parses a [`RepDoc`]; dispatches on `kind` first so that field paths survive.
pub fn parse_rep(s: &str) -> Result<RepDoc> {
    let mut v: serde_json::Value = parse(s)?;
    let kind = v.get("kind").and_then(|k| k.as_str()).map(str::to_owned);
    let schema = |e: serde_path_to_error::Error<serde_json::Error>| Error::Schema { path: e.path().to_string(), message: e.into_inner().to_string() };
    if let Some(obj) = v.as_object_mut() {
        obj.remove("kind");
    }
    match kind.as_deref() {
        Some("atomic") => serde_path_to_error::deserialize(v).map(RepDoc::Atomic).map_err(schema),
        Some("matrix") => serde_path_to_error::deserialize(v).map(RepDoc::Matrix).map_err(schema),
        _ => Err(Error::Schema { path: "kind".into(), message: "expected \"atomic\" or \"matrix\"".into() }),
    }
}

pub fn to_json<S: Serialize>(doc: &S) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialise")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageTag {
    Zero,
    Unknown,
}

/// `"zero"`, `"unknown"` or `{"to": label, "phase": …}` (phase omitted when 1).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ImageDoc {
    Tag(ImageTag),
    To {
        to: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phase: Option<PhaseDoc>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelDoc {
    pub name: String,
    pub vertex: String,
    pub v: ImageDoc,
    pub v_adj: ImageDoc,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub s: BTreeMap<String, ImageDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub s_adj: BTreeMap<String, ImageDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomicDoc {
    pub action: ActionDoc,
    pub window_depth: usize,
    pub closure: TraceClosure,
    pub labels: Vec<LabelDoc>,
}

/// Sparse matrix: `[row, col, [re, im]]`.
pub type Entries = Vec<(usize, usize, [f64; 2])>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub action: ActionDoc,
    pub closure: TraceClosure,
    pub labels: Vec<String>,
    pub vertex: Vec<String>,
    /// Keyed `V`, `V*`, `S_e`, `S_e*`.
    pub generators: BTreeMap<String, Entries>,
    /// Labels whose column of the generator is untrusted.
    #[serde(default)]
    pub boundary: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RepDoc {
    Atomic(AtomicDoc),
    Matrix(MatrixDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationDoc {
    pub construction: Construction,
    pub fiber: usize,
    pub rotation: usize,
    pub offset: usize,
    pub intertwiners: Vec<IntertwinerUse>,
    pub adjoint_deviation: f64,
    pub small: MatrixDoc,
    pub big: MatrixDoc,
    pub embed: Entries,
}

fn label_index(labels: &[String]) -> Result<BTreeMap<&str, usize>> {
    let mut idx = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if idx.insert(l.as_str(), i).is_some() {
            return Err(Error::InvalidRep(format!("duplicate label `{l}`")));
        }
    }
    Ok(idx)
}

fn image_doc(rep: &AtomicRep, img: Image) -> ImageDoc {
    match img {
        Image::Zero => ImageDoc::Tag(ImageTag::Zero),
        Image::Unknown => ImageDoc::Tag(ImageTag::Unknown),
        Image::To(y, ph) => ImageDoc::To { to: rep.label(y).to_string(), phase: (!ph.is_one()).then(|| ph.into()) },
    }
}

fn image_from(doc: &ImageDoc, idx: &BTreeMap<&str, usize>) -> Result<Image> {
    Ok(match doc {
        ImageDoc::Tag(ImageTag::Zero) => Image::Zero,
        ImageDoc::Tag(ImageTag::Unknown) => Image::Unknown,
        ImageDoc::To { to, phase } => {
            let y = *idx.get(to.as_str()).ok_or_else(|| Error::InvalidRep(format!("unknown label `{to}`")))?;
            let ph = match phase {
                Some(p) => Phase::try_from(p.clone())?,
                None => Phase::one(),
            };
            Image::To(y, ph)
        }
    })
}

pub fn atomic_to_doc(rep: &AtomicRep) -> AtomicDoc {
    let g = rep.action().graph();
    let labels = (0..rep.len())
        .map(|x| {
            let edge_map = |adj: bool| {
                g.edges()
                    .filter_map(|e| {
                        let img = rep.apply(if adj { Gen::SAdj(e) } else { Gen::S(e) }, x);
                        (img != Image::Zero).then(|| (g.edge_name(e).to_string(), image_doc(rep, img)))
                    })
                    .collect()
            };
            LabelDoc {
                name: rep.label(x).to_string(),
                vertex: g.vertex_name(rep.vertex_of(x)).to_string(),
                v: image_doc(rep, rep.apply(Gen::V, x)),
                v_adj: image_doc(rep, rep.apply(Gen::VAdj, x)),
                s: edge_map(false),
                s_adj: edge_map(true),
            }
        })
        .collect();
    AtomicDoc { action: rep.action().to_doc(), window_depth: rep.window_depth(), closure: rep.closure(), labels }
}

pub fn atomic_from_doc(doc: &AtomicDoc) -> Result<AtomicRep> {
    let a = SelfSimilarAction::from_doc(&doc.action)?;
    let g = a.graph();
    let names: Vec<String> = doc.labels.iter().map(|l| l.name.clone()).collect();
    let idx = label_index(&names)?;
    let n = names.len();
    let mut t = AtomicTables {
        labels: names.clone(),
        vertex: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
        v_adj: Vec::with_capacity(n),
        s: vec![vec![Image::Zero; n]; g.num_edges()],
        s_adj: vec![vec![Image::Zero; n]; g.num_edges()],
        window_depth: doc.window_depth,
        closure: doc.closure,
    };
    for (x, l) in doc.labels.iter().enumerate() {
        t.vertex.push(g.vertex(&l.vertex)?);
        t.v.push(image_from(&l.v, &idx)?);
        t.v_adj.push(image_from(&l.v_adj, &idx)?);
        for (e, img) in &l.s {
            t.s[g.edge(e)?.0][x] = image_from(img, &idx)?;
        }
        for (e, img) in &l.s_adj {
            t.s_adj[g.edge(e)?.0][x] = image_from(img, &idx)?;
        }
    }
    AtomicRep::from_tables(a, t)
}

fn entries<T: Real>(m: &CMatrix<T>) -> Entries {
    let mut out = Vec::new();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let z = m[(r, c)];
            if z != Complex::new(T::zero(), T::zero()) {
                out.push((r, c, [z.re.to_f64(), z.im.to_f64()]));
            }
        }
    }
    out
}

fn from_entries<T: Real>(e: &Entries, rows: usize, cols: usize) -> Result<CMatrix<T>> {
    let mut m = CMatrix::<T>::zeros(rows, cols);
    for &(r, c, [re, im]) in e {
        if r >= rows || c >= cols {
            return Err(Error::InvalidRep(format!("entry ({r}, {c}) outside a {rows}×{cols} matrix")));
        }
        m[(r, c)] = Complex::new(T::of(re), T::of(im));
    }
    Ok(m)
}

fn slots(a: &SelfSimilarAction) -> Vec<Gen> {
    let mut gens = vec![Gen::V, Gen::VAdj];
    for e in a.graph().edges() {
        gens.push(Gen::S(e));
        gens.push(Gen::SAdj(e));
    }
    gens
}

pub fn matrix_to_doc<T: Real>(rep: &MatrixRep<T>) -> MatrixDoc {
    let a = rep.action();
    let g = a.graph();
    let mut generators = BTreeMap::new();
    let mut boundary = BTreeMap::new();
    for gen in slots(a) {
        let name = gen.display(g);
        generators.insert(name.clone(), entries(&rep.gen_matrix(gen)));
        let flagged: Vec<String> = (0..rep.dim()).filter(|&x| rep.is_boundary(gen, x)).map(|x| rep.label(x).to_string()).collect();
        if !flagged.is_empty() {
            boundary.insert(name, flagged);
        }
    }
    MatrixDoc {
        action: a.to_doc(),
        closure: rep.closure(),
        labels: rep.labels().to_vec(),
        vertex: (0..rep.dim()).map(|x| g.vertex_name(rep.vertex_of(x)).to_string()).collect(),
        generators,
        boundary,
    }
}

pub fn matrix_from_doc<T: Real>(doc: &MatrixDoc) -> Result<MatrixRep<T>> {
    let a = SelfSimilarAction::from_doc(&doc.action)?;
    let g = a.graph();
    let n = doc.labels.len();
    let idx = label_index(&doc.labels)?;
    if doc.vertex.len() != n {
        return Err(Error::InvalidRep("one vertex per label is required".into()));
    }
    let gens = slots(&a);
    let names: Vec<String> = gens.iter().map(|gen| gen.display(g)).collect();
    if let Some(k) = doc.generators.keys().chain(doc.boundary.keys()).find(|k| !names.contains(k)) {
        return Err(Error::InvalidRep(format!("unknown generator `{k}`")));
    }
    let mut mats = Vec::new();
    let mut boundary = Vec::new();
    for name in &names {
        let e = doc.generators.get(name).ok_or_else(|| Error::InvalidRep(format!("missing generator `{name}`")))?;
        mats.push(from_entries::<T>(e, n, n)?);
        let mut b = vec![false; n];
        for l in doc.boundary.get(name).into_iter().flatten() {
            b[*idx.get(l.as_str()).ok_or_else(|| Error::InvalidRep(format!("unknown label `{l}`")))?] = true;
        }
        boundary.push(b);
    }
    let mut it = mats.into_iter();
    let (v, v_adj) = (it.next().unwrap(), it.next().unwrap());
    let (mut s, mut s_adj) = (Vec::new(), Vec::new());
    while let (Some(x), Some(y)) = (it.next(), it.next()) {
        s.push(x);
        s_adj.push(y);
    }
    let vertex = doc.vertex.iter().map(|v| g.vertex(v)).collect::<Result<Vec<_>>>()?;
    MatrixRep::new(a, MatrixParts { labels: doc.labels.clone(), vertex, v, v_adj, s, s_adj, boundary, closure: doc.closure })
}

pub fn rep_to_doc_atomic(rep: &AtomicRep) -> RepDoc {
    RepDoc::Atomic(atomic_to_doc(rep))
}

pub fn rep_to_doc_matrix<T: Real>(rep: &MatrixRep<T>) -> RepDoc {
    RepDoc::Matrix(matrix_to_doc(rep))
}

pub fn dilation_to_doc<T: Real>(d: &Dilation<T>) -> DilationDoc {
    DilationDoc {
        construction: d.construction,
        fiber: d.fiber,
        rotation: d.rotation,
        offset: d.offset,
        intertwiners: d.intertwiners.clone(),
        adjoint_deviation: d.adjoint_deviation,
        small: matrix_to_doc(&d.small),
        big: matrix_to_doc(&d.big),
        embed: entries(&d.embed),
    }
}

pub fn dilation_from_doc<T: Real>(doc: &DilationDoc) -> Result<Dilation<T>> {
    let small = matrix_from_doc::<T>(&doc.small)?;
    let big = matrix_from_doc::<T>(&doc.big)?;
    if small.action() != big.action() {
        return Err(Error::InvalidRep("dilation and input use different actions".into()));
    }
    let embed = from_entries::<T>(&doc.embed, big.dim(), small.dim())?;
    Ok(Dilation {
        construction: doc.construction,
        small,
        big,
        embed,
        fiber: doc.fiber,
        intertwiners: doc.intertwiners.clone(),
        rotation: doc.rotation,
        offset: doc.offset,
        adjoint_deviation: doc.adjoint_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::{build_c_lambda, build_left_regular};
    use crate::dilation::{dilate_pure_case, verify_dilation};
    use crate::zappa_szep::factory_odometer;
    use crate::Vertex;

    #[test]
    fn atomic_round_trip() {
        let a = factory_odometer(2).unwrap();
        let rep = build_c_lambda(&a, Vertex(0), Phase::rational(2, 7).unwrap(), 3).unwrap();
        let json = to_json(&rep_to_doc_atomic(&rep));
        let RepDoc::Atomic(doc) = parse_rep(&json).unwrap() else { panic!("kind changed") };
        let back = atomic_from_doc(&doc).unwrap();
        assert_eq!(to_json(&rep_to_doc_atomic(&back)), json);
        assert_eq!(back.labels(), rep.labels());
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let a = factory_odometer(2).unwrap();
        let rep = MatrixRep::<f64>::from_atomic(&build_c_lambda(&a, Vertex(0), Phase::rational(1, 7).unwrap(), 3).unwrap());
        let json = to_json(&rep_to_doc_matrix(&rep));
        let RepDoc::Matrix(doc) = parse_rep(&json).unwrap() else { panic!("kind changed") };
        let back = matrix_from_doc::<f64>(&doc).unwrap();
        assert_eq!(back.v(), rep.v());
        assert_eq!(to_json(&rep_to_doc_matrix(&back)), json);
    }

    #[test]
    fn dilation_round_trip_verifies_the_same() {
        let a = factory_odometer(2).unwrap();
        let rep = MatrixRep::<f64>::from_atomic(&build_left_regular(&a, Vertex(0), 3).unwrap());
        let d = dilate_pure_case(&rep, 3).unwrap();
        let json = to_json(&dilation_to_doc(&d));
        let back = dilation_from_doc::<f64>(&parse(&json).unwrap()).unwrap();
        assert_eq!(to_json(&dilation_to_doc(&back)), json);
        let (r0, r1) = (verify_dilation(&d, 2).unwrap(), verify_dilation(&back, 2).unwrap());
        assert_eq!(r0.max_compression_deviation, r1.max_compression_deviation);
    }

    #[test]
    fn schema_errors_carry_the_path() {
        let bad = r#"{"kind": "atomic", "action": {"graph": {"vertices": ["v"], "edges": []}, "vperm": {"v": "v"}, "eperm": {}, "rho": {}},
                      "window_depth": "deep", "closure": {"s_trace": true, "v_trace": true}, "labels": []}"#;
        match parse_rep(bad) {
            Err(Error::Schema { path, .. }) => assert!(path.contains("window_depth"), "{path}"),
            other => panic!("{other:?}"),
        }
    }
}
