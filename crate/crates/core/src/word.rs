use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

/// A generator of the Toeplitz algebra, or its adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    V,
    VAdj,
    S(Edge),
    SAdj(Edge),
    P(Vertex),
}

impl Gen {
    pub fn adjoint(self) -> Gen {
        match self {
            Gen::V => Gen::VAdj,
            Gen::VAdj => Gen::V,
            Gen::S(e) => Gen::SAdj(e),
            Gen::SAdj(e) => Gen::S(e),
            Gen::P(v) => Gen::P(v),
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            Gen::V => "V".into(),
            Gen::VAdj => "V*".into(),
            Gen::S(e) => format!("S_{}", g.edge_name(*e)),
            Gen::SAdj(e) => format!("S_{}*", g.edge_name(*e)),
            Gen::P(v) => format!("P_{}", g.vertex_name(*v)),
        }
    }
}

/// An operator product written left to right; the rightmost letter acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn new(gens: impl IntoIterator<Item = Gen>) -> Self {
        Word(gens.into_iter().collect())
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · other`.
    pub fn then(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn v_pow(k: u64) -> Word {
        Word(vec![Gen::V; k as usize])
    }

    pub fn v_adj_pow(k: u64) -> Word {
        Word(vec![Gen::VAdj; k as usize])
    }

    /// `S_μ = S_{e_1} ⋯ S_{e_k}`.
    pub fn s_path(edges: &[Edge]) -> Word {
        Word(edges.iter().map(|&e| Gen::S(e)).collect())
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.adjoint()).collect())
    }

    /// Letters in the order they act.
    pub fn acting_order(&self) -> impl Iterator<Item = &Gen> {
        self.0.iter().rev()
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.0.is_empty() {
            return "I".into();
        }
        self.0.iter().map(|x| x.display(g)).collect::<Vec<_>>().join(" ")
    }

    /// Parses whitespace-separated letters such as `V S_e1 V* P_v`.
    pub fn parse(g: &Graph, s: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            let gen = match tok {
                "V" => Gen::V,
                "V*" => Gen::VAdj,
                "I" => continue,
                t if t.starts_with("S_") && t.ends_with('*') => Gen::SAdj(g.edge(&t[2..t.len() - 1])?),
                t if t.starts_with("S_") => match g.edge(&t[2..]) {
                    Ok(e) => Gen::S(e),
                    Err(_) => Gen::P(g.vertex(&t[2..]).map_err(|_| Error::PathSyntax(t.into()))?),
                },
                t if t.starts_with("P_") => Gen::P(g.vertex(&t[2..])?),
                t => return Err(Error::PathSyntax(t.into())),
            };
            out.push(gen);
        }
        Ok(Word(out))
    }
}
