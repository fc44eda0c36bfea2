//! Genus-2 Heegaard diagrams encoded as crossing-sign rotation systems.
//!
//! Vertices are the crossings of `u1 ∪ u2` with `v1 ∪ v2`. Each u-curve is a
//! cyclic list of vertex ids; each v-curve is a cyclic list of vertex ids with
//! a crossing sign. Sign `+1` means the v-curve crosses into the positive
//! (left) side of the u-curve. Together with the traversal orders this fixes
//! the rotation at every vertex, so faces can be recovered by corner walking.

mod bandsum;
mod faces;
mod parse;
pub mod synth;
mod waves;
mod whitehead;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bandsum::{band_class, band_sum, BandSum};
pub use faces::{embedding, find_bigons, trace_faces, BoundaryEdge, Embedding, Region, Side};
pub use parse::parse_diagram;
pub use waves::{complexity, find_waves, minimize, minimize_path, wave_move, ComplexityTriple, Wave};
pub use whitehead::{
    parallel_arc_classes, whitehead_graph, ArcClass, FatVertex, WhiteheadForm, WhiteheadGraph,
};

/// One of the two curve families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    U,
    V,
}

impl Family {
    pub fn other(self) -> Family {
        match self {
            Family::U => Family::V,
            Family::V => Family::U,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::U => "u",
            Family::V => "v",
        })
    }
}

/// The four curves of a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurveId {
    U1,
    U2,
    V1,
    V2,
}

impl CurveId {
    pub const ALL: [CurveId; 4] = [CurveId::U1, CurveId::U2, CurveId::V1, CurveId::V2];

    pub fn new(family: Family, index: usize) -> CurveId {
        match (family, index) {
            (Family::U, 0) => CurveId::U1,
            (Family::U, _) => CurveId::U2,
            (Family::V, 0) => CurveId::V1,
            (Family::V, _) => CurveId::V2,
        }
    }

    pub fn family(self) -> Family {
        match self {
            CurveId::U1 | CurveId::U2 => Family::U,
            CurveId::V1 | CurveId::V2 => Family::V,
        }
    }

    /// 0 for `u1`/`v1`, 1 for `u2`/`v2`.
    pub fn index(self) -> usize {
        match self {
            CurveId::U1 | CurveId::V1 => 0,
            CurveId::U2 | CurveId::V2 => 1,
        }
    }

    /// Position in [`CurveId::ALL`].
    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveId::U1 => "u1",
            CurveId::U2 => "u2",
            CurveId::V1 => "v1",
            CurveId::V2 => "v2",
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error("vertex {vertex} appears more than once in the {family}-family")]
    DuplicateVertex { vertex: u32, family: Family },
    #[error("vertex {vertex} is never used by the {family}-family")]
    MissingVertex { vertex: u32, family: Family },
    #[error("curve {0} is empty")]
    EmptyCurve(CurveId),
    #[error("face tracing gives Euler characteristic {euler} over {components} component(s), expected a connected surface with -2")]
    GenusMismatch { euler: i64, components: usize },
    #[error("diagram has {0} bigon face(s)")]
    NotTight(usize),
    #[error("not a wave: {0}")]
    NotAWave(String),
    #[error("parallelism violated: {0}")]
    ParallelismViolation(String),
    #[error("no arcs join u1+ to u2+")]
    EmptyClass,
    #[error("band sum postcondition failed: {0}")]
    PostconditionViolation(String),
}

/// A validated genus-2 Heegaard diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegaardDiagram {
    n: usize,
    u: [Vec<u32>; 2],
    v: [Vec<u32>; 2],
    sign: Vec<i8>,
    u_at: Vec<(u8, u32)>,
    v_at: Vec<(u8, u32)>,
}

impl HeegaardDiagram {
    /// Builds and validates a diagram from raw curve data.
    pub fn new(
        vertex_count: usize,
        u1: Vec<u32>,
        u2: Vec<u32>,
        v1: Vec<(u32, i8)>,
        v2: Vec<(u32, i8)>,
    ) -> Result<Self, DiagramError> {
        let mut sign = vec![0i8; vertex_count];
        let mut v = [Vec::new(), Vec::new()];
        for (j, seq) in [v1, v2].into_iter().enumerate() {
            for (x, s) in seq {
                if (1..=vertex_count as u32).contains(&x) {
                    sign[x as usize - 1] = s;
                }
                v[j].push(x);
            }
        }
        let u = [u1, u2];
        let u_at = locate(vertex_count, &u, Family::U)?;
        let v_at = locate(vertex_count, &v, Family::V)?;
        let d = HeegaardDiagram {
            n: vertex_count,
            u,
            v,
            sign,
            u_at,
            v_at,
        };
        if d.n == 0 {
            return Err(DiagramError::EmptyCurve(CurveId::U1));
        }
        let euler = d.euler_characteristic();
        let components = d.graph_components();
        if euler != -2 || components != 1 {
            return Err(DiagramError::GenusMismatch { euler, components });
        }
        for c in CurveId::ALL {
            if d.curve(c).is_empty() {
                return Err(DiagramError::EmptyCurve(c));
            }
        }
        Ok(d)
    }

    /// Rebuilds a diagram from curves over arbitrary point keys, renumbering
    /// vertices in order of appearance along `u1` then `u2`.
    pub(crate) fn assemble<K: Copy + Eq + Hash>(
        u: [Vec<K>; 2],
        v: [Vec<K>; 2],
        sign: impl Fn(K) -> i8,
    ) -> Result<Self, DiagramError> {
        let mut ids: HashMap<K, u32> = HashMap::new();
        for seq in &u {
            for &k in seq {
                let next = ids.len() as u32 + 1;
                ids.entry(k).or_insert(next);
            }
        }
        let n = ids.len();
        let map_u = |seq: &Vec<K>| seq.iter().map(|k| ids[k]).collect::<Vec<_>>();
        let map_v = |seq: &Vec<K>| -> Result<Vec<(u32, i8)>, DiagramError> {
            seq.iter()
                .map(|k| {
                    ids.get(k)
                        .map(|&x| (x, sign(*k)))
                        .ok_or(DiagramError::MissingVertex {
                            vertex: 0,
                            family: Family::U,
                        })
                })
                .collect()
        };
        HeegaardDiagram::new(n, map_u(&u[0]), map_u(&u[1]), map_v(&v[0])?, map_v(&v[1])?)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        2 * self.n
    }

    /// Vertex ids along a curve, in traversal order.
    pub fn curve(&self, c: CurveId) -> &[u32] {
        match c.family() {
            Family::U => &self.u[c.index()],
            Family::V => &self.v[c.index()],
        }
    }

    /// The v-curve as (vertex, sign) pairs.
    pub fn signed_curve(&self, c: CurveId) -> Vec<(u32, i8)> {
        self.curve(c).iter().map(|&x| (x, self.sign(x))).collect()
    }

    pub fn sign(&self, x: u32) -> i8 {
        self.sign[x as usize - 1]
    }

    /// Curve of `family` through vertex `x`, and the position of `x` on it.
    pub fn locate(&self, family: Family, x: u32) -> (CurveId, usize) {
        let (c, p) = match family {
            Family::U => self.u_at[x as usize - 1],
            Family::V => self.v_at[x as usize - 1],
        };
        (CurveId::new(family, c as usize), p as usize)
    }

    /// Number of vertices on both `uc` and `vc`.
    pub fn pair_count(&self, vc: CurveId, uc: CurveId) -> usize {
        self.curve(vc)
            .iter()
            .filter(|&&x| self.locate(Family::U, x).0 == uc)
            .count()
    }

    /// Algebraic intersection matrix `A[j][i] = Σ sign` over `v_j ∩ u_i`.
    pub fn intersection_matrix(&self) -> [[i64; 2]; 2] {
        let mut a = [[0i64; 2]; 2];
        for j in 0..2 {
            for &x in &self.v[j] {
                let (uc, _) = self.locate(Family::U, x);
                a[j][uc.index()] += self.sign(x) as i64;
            }
        }
        a
    }

    pub fn euler_characteristic(&self) -> i64 {
        let faces = faces::trace_darts(self).len() as i64;
        self.n as i64 - 2 * self.n as i64 + faces
    }

    fn graph_components(&self) -> usize {
        let mut uf = UnionFind::new(self.n);
        for seq in self.u.iter().chain(self.v.iter()) {
            for w in 0..seq.len() {
                let a = seq[w];
                let b = seq[(w + 1) % seq.len()];
                uf.union(a as usize - 1, b as usize - 1);
            }
        }
        uf.count()
    }

    /// The same diagram with the roles of the two families exchanged.
    /// Crossing signs flip so that the rotation system is unchanged.
    pub fn dual(&self) -> HeegaardDiagram {
        let s = |x: u32| -self.sign(x);
        HeegaardDiagram::assemble(self.v.clone(), self.u.clone(), s)
            .expect("dual of a valid diagram is valid")
    }

    /// Serializes to the line-oriented diagram format.
    pub fn to_text(&self) -> String {
        let mut out = format!("vertices {}\n", self.n);
        for c in CurveId::ALL {
            out.push_str(c.name());
            out.push(':');
            for &x in self.curve(c) {
                out.push(' ');
                out.push_str(&x.to_string());
                if c.family() == Family::V {
                    out.push(if self.sign(x) > 0 { '+' } else { '-' });
                }
            }
            out.push('\n');
        }
        out
    }
}

fn locate(n: usize, curves: &[Vec<u32>; 2], family: Family) -> Result<Vec<(u8, u32)>, DiagramError> {
    let mut at = vec![None; n];
    for (c, seq) in curves.iter().enumerate() {
        for (p, &x) in seq.iter().enumerate() {
            if x == 0 || x as usize > n {
                return Err(DiagramError::SyntaxError {
                    line: 0,
                    msg: format!("vertex id {x} outside 1..={n}"),
                });
            }
            let slot = &mut at[x as usize - 1];
            if slot.is_some() {
                return Err(DiagramError::DuplicateVertex { vertex: x, family });
            }
            *slot = Some((c as u8, p as u32));
        }
    }
    at.into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or(DiagramError::MissingVertex {
                vertex: i as u32 + 1,
                family,
            })
        })
        .collect()
}

/// Plain disjoint-set forest used by the connectivity checks.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    pub fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}
