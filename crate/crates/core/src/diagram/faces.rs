//! Face tracing of the rotation system.

use serde::{Deserialize, Serialize};

use super::{CurveId, Family, HeegaardDiagram};

// Half-edge directions at a vertex.
const UF: u8 = 0;
const VF: u8 = 1;
const UB: u8 = 2;
const VB: u8 = 3;

/// Which side of its curve a face lies on. `Plus` is the left of the
/// curve's traversal direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }
}

/// One boundary edge of a face, traversed with the face on the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub curve: CurveId,
    /// Arc `i` runs from position `i` to position `i+1` of the curve.
    pub arc: u32,
    pub side: Side,
    pub forward: bool,
    pub from: u32,
    pub to: u32,
}

/// A complementary face of the diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: usize,
    pub edge_cycle: Vec<BoundaryEdge>,
}

impl Region {
    pub fn size(&self) -> usize {
        self.edge_cycle.len()
    }

    /// Compact cycle labels such as `u1[3]+`.
    pub fn cycle_labels(&self) -> Vec<String> {
        self.edge_cycle
            .iter()
            .map(|e| format!("{}[{}]{}", e.curve, e.arc, e.side.symbol()))
            .collect()
    }
}

/// Faces together with the edge-to-face incidence.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub faces: Vec<Region>,
    // per curve slot, per arc: [(face, position) on plus side, same on minus side]
    incidence: [Vec<[(usize, usize); 2]>; 4],
}

impl Embedding {
    /// `(face, position)` of the occurrence of `(curve, arc)` on the given side.
    pub fn occurrence(&self, curve: CurveId, arc: u32, side: Side) -> (usize, usize) {
        let pair = self.incidence[curve.slot()][arc as usize];
        match side {
            Side::Plus => pair[0],
            Side::Minus => pair[1],
        }
    }

    pub fn arc_count(&self, curve: CurveId) -> usize {
        self.incidence[curve.slot()].len()
    }

    /// The face across the edge at `(face, pos)`, with its position.
    pub fn across(&self, face: usize, pos: usize) -> (usize, usize) {
        let e = self.faces[face].edge_cycle[pos];
        self.occurrence(e.curve, e.arc, e.side.flip())
    }

    /// Number of connected pieces of the surface cut along `cut` curves and,
    /// optionally, along an arc inside face `f` joining positions `i < j`.
    pub fn pieces(&self, cut: &[CurveId], chord: Option<(usize, usize, usize)>) -> usize {
        let nf = self.faces.len();
        let mut uf = super::UnionFind::new(nf + 1);
        let node = |face: usize, pos: usize| -> usize {
            match chord {
                Some((f, i, j)) if f == face && pos > i && pos < j => nf,
                _ => face,
            }
        };
        for c in CurveId::ALL {
            if cut.contains(&c) {
                continue;
            }
            for pair in &self.incidence[c.slot()] {
                let a = node(pair[0].0, pair[0].1);
                let b = node(pair[1].0, pair[1].1);
                uf.union(a, b);
            }
        }
        let total = if chord.is_some() { nf + 1 } else { nf };
        let mut roots: Vec<usize> = (0..total).map(|i| uf.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

fn rotation(sign: i8) -> [u8; 4] {
    if sign > 0 {
        [UF, VF, UB, VB]
    } else {
        [UF, VB, UB, VF]
    }
}

fn twin(d: &HeegaardDiagram, x: u32, h: u8) -> (u32, u8) {
    let fam = if h == UF || h == UB { Family::U } else { Family::V };
    let (c, p) = d.locate(fam, x);
    let seq = d.curve(c);
    let k = seq.len();
    match h {
        UF | VF => (seq[(p + 1) % k], h + 2),
        _ => (seq[(p + k - 1) % k], h - 2),
    }
}

fn edge_of(d: &HeegaardDiagram, x: u32, h: u8) -> (CurveId, u32, bool) {
    let fam = if h == UF || h == UB { Family::U } else { Family::V };
    let (c, p) = d.locate(fam, x);
    let k = d.curve(c).len();
    match h {
        UF | VF => (c, p as u32, true),
        _ => (c, ((p + k - 1) % k) as u32, false),
    }
}

/// Raw dart cycles; each entry is an outgoing dart `(vertex, direction)`.
pub(crate) fn trace_darts(d: &HeegaardDiagram) -> Vec<Vec<(u32, u8)>> {
    let n = d.vertex_count();
    let mut seen = vec![[false; 4]; n];
    let mut out = Vec::new();
    for x in 1..=n as u32 {
        for h in 0..4u8 {
            if seen[x as usize - 1][h as usize] {
                continue;
            }
            let mut cyc = Vec::new();
            let (mut cx, mut ch) = (x, h);
            while !seen[cx as usize - 1][ch as usize] {
                seen[cx as usize - 1][ch as usize] = true;
                cyc.push((cx, ch));
                let (y, hin) = twin(d, cx, ch);
                let rot = rotation(d.sign(y));
                let idx = rot.iter().position(|&r| r == hin).unwrap();
                cx = y;
                ch = rot[(idx + 3) % 4];
            }
            out.push(cyc);
        }
    }
    out
}

/// Traces all faces together with the edge incidence table.
pub fn embedding(d: &HeegaardDiagram) -> Embedding {
    let mut incidence: [Vec<[(usize, usize); 2]>; 4] = Default::default();
    for c in CurveId::ALL {
        incidence[c.slot()] = vec![[(usize::MAX, 0); 2]; d.curve(c).len()];
    }
    let mut faces = Vec::new();
    for (id, cyc) in trace_darts(d).into_iter().enumerate() {
        let mut edges = Vec::with_capacity(cyc.len());
        for (pos, &(x, h)) in cyc.iter().enumerate() {
            let (curve, arc, forward) = edge_of(d, x, h);
            let (to, _) = twin(d, x, h);
            let side = if forward { Side::Plus } else { Side::Minus };
            incidence[curve.slot()][arc as usize][if forward { 0 } else { 1 }] = (id, pos);
            edges.push(BoundaryEdge {
                curve,
                arc,
                side,
                forward,
                from: x,
                to,
            });
        }
        faces.push(Region {
            id,
            edge_cycle: edges,
        });
    }
    Embedding { faces, incidence }
}

/// All faces of the diagram.
pub fn trace_faces(d: &HeegaardDiagram) -> Vec<Region> {
    embedding(d).faces
}

/// Faces with exactly two boundary edges.
pub fn find_bigons(d: &HeegaardDiagram) -> Vec<Region> {
    trace_faces(d).into_iter().filter(|r| r.size() == 2).collect()
}
