//! Components of the branch locus. Arcs run straight through crossings and
//! turn at the corners of deleted quadrilaterals.

use serde::{Deserialize, Serialize};

use super::{BranchError, BranchedSurface};
use crate::diagram::{CurveId, Family};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusArc {
    pub cusp: usize,
    pub curve: CurveId,
    pub arc: u32,
    /// Traversed along the curve's orientation.
    pub forward: bool,
    /// `[P, Q, R]` at this arc.
    pub sectors: [usize; 3],
    /// The walk turns onto the other family after this arc.
    pub corner_after: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusComponent {
    pub id: usize,
    pub cycle: Vec<LocusArc>,
}

impl LocusComponent {
    pub fn corners(&self) -> usize {
        self.cycle.iter().filter(|a| a.corner_after).count()
    }

    pub fn cusps(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycle.iter().map(|a| a.cusp)
    }
}

impl BranchedSurface {
    fn arc_alive(&self, c: CurveId, a: usize) -> bool {
        self.cusps[self.arc_cusp(c, a)].alive
    }

    // (curve, position) of vertex x on the given family
    fn position(&self, family: Family, x: u32) -> Option<(CurveId, usize)> {
        CurveId::ALL
            .into_iter()
            .filter(|c| c.family() == family)
            .find_map(|c| self.curves[c.slot()].iter().position(|&y| y == x).map(|p| (c, p)))
    }

    /// Walks every live diagram arc into cycles and renumbers the cusps'
    /// components. Split cusps keep their component.
    pub fn walk_locus(&mut self) -> Result<Vec<LocusComponent>, BranchError> {
        let mut seen = vec![false; self.cusps.len()];
        let mut out = Vec::new();
        for c0 in CurveId::ALL {
            for a0 in 0..self.curve_len(c0) {
                if !self.arc_alive(c0, a0) || seen[self.arc_cusp(c0, a0)] {
                    continue;
                }
                let id = out.len();
                let mut cycle: Vec<LocusArc> = Vec::new();
                let (mut c, mut a, mut fwd) = (c0, a0, true);
                loop {
                    let k = self.arc_cusp(c, a);
                    if seen[k] {
                        if (c, a, fwd) != (c0, a0, true) {
                            return Err(BranchError::Locus(format!("arc {}:{a} revisited", c.name())));
                        }
                        break;
                    }
                    seen[k] = true;
                    let cusp = &self.cusps[k];
                    cycle.push(LocusArc {
                        cusp: k,
                        curve: c,
                        arc: a as u32,
                        forward: fwd,
                        sectors: [cusp.p, cusp.q, cusp.r],
                        corner_after: false,
                    });
                    let n = self.curve_len(c);
                    let (x, next) = if fwd {
                        (self.curves[c.slot()][(a + 1) % n], (a + 1) % n)
                    } else {
                        (self.curves[c.slot()][a], (a + n - 1) % n)
                    };
                    if self.arc_alive(c, next) {
                        a = next;
                        continue;
                    }
                    let (oc, p) = self
                        .position(c.family().other(), x)
                        .ok_or_else(|| BranchError::Locus(format!("vertex {x} missing")))?;
                    let m = self.curve_len(oc);
                    let out_arc = self.arc_alive(oc, p);
                    let in_arc = self.arc_alive(oc, (p + m - 1) % m);
                    cycle.last_mut().unwrap().corner_after = true;
                    match (out_arc, in_arc) {
                        (true, false) => (c, a, fwd) = (oc, p, true),
                        (false, true) => (c, a, fwd) = (oc, (p + m - 1) % m, false),
                        _ => return Err(BranchError::Locus(format!("no unique turn at vertex {x}"))),
                    }
                }
                for arc in &cycle {
                    self.cusps[arc.cusp].component = id;
                }
                let comp = LocusComponent { id, cycle };
                if comp.corners() % 2 != 0 {
                    return Err(BranchError::Locus(format!("component {id} has odd corner count")));
                }
                out.push(comp);
            }
        }
        Ok(out)
    }
}
