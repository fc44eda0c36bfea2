//! Whitehead graphs of the cut-open surface and their parallel arc classes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::faces::{embedding, Embedding, Side};
use super::{CurveId, DiagramError, Family, HeegaardDiagram, UnionFind};

/// A boundary circle of the surface cut along one family: curve index and side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FatVertex {
    pub curve: CurveId,
    pub side: Side,
}

impl FatVertex {
    /// Index in the order `1+, 1-, 2+, 2-`.
    pub fn rank(self) -> usize {
        2 * self.curve.index() + usize::from(self.side == Side::Minus)
    }

    pub fn from_rank(family: Family, r: usize) -> FatVertex {
        FatVertex {
            curve: CurveId::new(family, r / 2),
            side: if r % 2 == 0 { Side::Plus } else { Side::Minus },
        }
    }
}

impl fmt::Display for FatVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.curve, self.side.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WhiteheadForm {
    I,
    II,
    III,
    Unrecognized,
}

/// Edge multiplicities between the four fat vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhiteheadGraph {
    pub cut: Family,
    /// Keyed by `(rank, rank)` with the smaller rank first; loops allowed.
    pub multiplicities: BTreeMap<(usize, usize), usize>,
    pub form: WhiteheadForm,
    /// `(a, b, c, d)` when the form is recognized.
    pub parameters: Option<(usize, usize, usize, usize)>,
}

impl WhiteheadGraph {
    pub fn get(&self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        self.multiplicities.get(&key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.multiplicities.values().sum()
    }

    /// Human-readable multiplicity list such as `v1+v2+ = 3`.
    pub fn labelled(&self) -> Vec<(String, usize)> {
        self.multiplicities
            .iter()
            .map(|(&(a, b), &m)| {
                let fa = FatVertex::from_rank(self.cut, a);
                let fb = FatVertex::from_rank(self.cut, b);
                (format!("{fa}{fb}"), m)
            })
            .collect()
    }
}

/// The two fat-vertex endpoints of an arc of the non-cut family.
pub(crate) fn arc_ends(d: &HeegaardDiagram, cut: Family, curve: CurveId, arc: u32) -> [(u32, FatVertex); 2] {
    debug_assert_eq!(curve.family(), cut.other());
    let seq = d.curve(curve);
    let x = seq[arc as usize];
    let y = seq[(arc as usize + 1) % seq.len()];
    let plus_at_start = match cut {
        Family::V => d.sign(x) < 0,
        Family::U => d.sign(x) > 0,
    };
    let plus_at_end = match cut {
        Family::V => d.sign(y) > 0,
        Family::U => d.sign(y) < 0,
    };
    let fv = |z: u32, plus: bool| FatVertex {
        curve: d.locate(cut, z).0,
        side: if plus { Side::Plus } else { Side::Minus },
    };
    [(x, fv(x, plus_at_start)), (y, fv(y, plus_at_end))]
}

fn arcs_of(d: &HeegaardDiagram, cut: Family) -> Vec<(CurveId, u32)> {
    let mut out = Vec::new();
    for j in 0..2 {
        let c = CurveId::new(cut.other(), j);
        for a in 0..d.curve(c).len() as u32 {
            out.push((c, a));
        }
    }
    out
}

fn pair_key(a: FatVertex, b: FatVertex) -> (usize, usize) {
    let (x, y) = (a.rank(), b.rank());
    (x.min(y), x.max(y))
}

/// Whitehead graph of the surface cut along `cut`.
pub fn whitehead_graph(d: &HeegaardDiagram, cut: Family) -> WhiteheadGraph {
    let mut multiplicities = BTreeMap::new();
    for (c, a) in arcs_of(d, cut) {
        let [(_, p), (_, q)] = arc_ends(d, cut, c, a);
        *multiplicities.entry(pair_key(p, q)).or_insert(0) += 1;
    }
    let (form, parameters) = classify(&multiplicities);
    WhiteheadGraph {
        cut,
        multiplicities,
        form,
        parameters,
    }
}

// Ranks: 0 = 1+, 1 = 1-, 2 = 2+, 3 = 2-.
const A_PAIRS: [(usize, usize); 2] = [(0, 2), (1, 3)];
const C_PAIR: (usize, usize) = (0, 1);
const D_PAIR: (usize, usize) = (2, 3);
const TEMPLATES: [(WhiteheadForm, [(usize, usize); 2]); 3] = [
    (WhiteheadForm::I, [(0, 3), (1, 2)]),
    (WhiteheadForm::II, [(0, 0), (1, 1)]),
    (WhiteheadForm::III, [(2, 2), (3, 3)]),
];

fn classify(m: &BTreeMap<(usize, usize), usize>) -> (WhiteheadForm, Option<(usize, usize, usize, usize)>) {
    let get = |k: (usize, usize)| m.get(&k).copied().unwrap_or(0);
    if get(A_PAIRS[0]) != get(A_PAIRS[1]) {
        return (WhiteheadForm::Unrecognized, None);
    }
    for (form, b_pairs) in TEMPLATES {
        let allowed = |k: &(usize, usize)| A_PAIRS.contains(k) || b_pairs.contains(k) || *k == C_PAIR || *k == D_PAIR;
        if m.iter().any(|(k, &v)| v > 0 && !allowed(k)) {
            continue;
        }
        if get(b_pairs[0]) != get(b_pairs[1]) {
            continue;
        }
        return (form, Some((get(A_PAIRS[0]), get(b_pairs[0]), get(C_PAIR), get(D_PAIR))));
    }
    (WhiteheadForm::Unrecognized, None)
}

/// A class of mutually parallel arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcClass {
    pub ends: (FatVertex, FatVertex),
    pub arcs: Vec<(CurveId, u32)>,
}

pub(crate) fn classes_in(d: &HeegaardDiagram, emb: &Embedding, cut: Family) -> Vec<ArcClass> {
    let arcs = arcs_of(d, cut);
    let index = |c: CurveId, a: u32| arcs.iter().position(|&p| p == (c, a)).unwrap();
    let mut uf = UnionFind::new(arcs.len());
    for f in &emb.faces {
        if f.size() != 4 {
            continue;
        }
        let mine: Vec<_> = f.edge_cycle.iter().filter(|e| e.curve.family() == cut.other()).collect();
        if mine.len() == 2 {
            uf.union(index(mine[0].curve, mine[0].arc), index(mine[1].curve, mine[1].arc));
        }
    }
    let mut groups: BTreeMap<usize, Vec<(CurveId, u32)>> = BTreeMap::new();
    for (i, &p) in arcs.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(p);
    }
    groups
        .into_values()
        .map(|arcs| {
            let [(_, p), (_, q)] = arc_ends(d, cut, arcs[0].0, arcs[0].1);
            let ends = if p.rank() <= q.rank() { (p, q) } else { (q, p) };
            ArcClass { ends, arcs }
        })
        .collect()
}

/// Groups the arcs of the cut-open surface into parallel classes and checks
/// that the `1+ 2+` and `1- 2-` arcs each form a single class.
pub fn parallel_arc_classes(d: &HeegaardDiagram, cut: Family) -> Result<Vec<ArcClass>, DiagramError> {
    let emb = embedding(d);
    let classes = classes_in(d, &emb, cut);
    for key in A_PAIRS {
        let n = classes.iter().filter(|c| (c.ends.0.rank(), c.ends.1.rank()) == key).count();
        if n > 1 {
            let a = FatVertex::from_rank(cut, key.0);
            let b = FatVertex::from_rank(cut, key.1);
            return Err(DiagramError::ParallelismViolation(format!(
                "arcs joining {a} to {b} fall into {n} classes"
            )));
        }
    }
    Ok(classes)
}
