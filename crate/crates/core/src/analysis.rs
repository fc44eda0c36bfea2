//! Counting checks on a branched surface after deletion: corner points,
//! the bound on disks of contact, and outermost arcs along a v-curve.

use serde::{Deserialize, Serialize};

use crate::branch::{BranchedSurface, ContactWitness};
use crate::diagram::{CurveId, Family, HeegaardDiagram};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("{found} corners after deleting {deleted} quadrilaterals, expected {expected}")]
    CountMismatch { deleted: usize, expected: usize, found: usize },
    #[error("component {component} has {count} corners")]
    OddCount { component: usize, count: usize },
    #[error("endpoints {from} and {to} of {curve} bound a wave on {tail} (arc {arc})")]
    WaveDetected {
        arc: usize,
        curve: String,
        from: usize,
        to: usize,
        tail: String,
    },
    #[error("bad arc family: {0}")]
    BadFamily(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerReport {
    pub counts: Vec<usize>,
    pub total: usize,
    /// Deleted quadrilaterals minus one.
    pub m: usize,
    pub components_with_2: Vec<usize>,
}

/// Corner counts of the locus of a surface produced by `delete_sectors`.
pub fn corner_report(b: &BranchedSurface) -> Result<CornerReport, AnalysisError> {
    let counts: Vec<usize> = b.locus.iter().map(|c| c.corners()).collect();
    if let Some((component, &count)) = counts.iter().enumerate().find(|(_, &n)| n % 2 != 0 || n == 0) {
        // a corner-free component is legal only when nothing was deleted
        if count != 0 || !b.deleted.is_empty() {
            return Err(AnalysisError::OddCount { component, count });
        }
    }
    let total = counts.iter().sum();
    let expected = 4 * b.deleted.len();
    if total != expected {
        return Err(AnalysisError::CountMismatch {
            deleted: b.deleted.len(),
            expected,
            found: total,
        });
    }
    Ok(CornerReport {
        components_with_2: (0..counts.len()).filter(|&i| counts[i] == 2).collect(),
        counts,
        total,
        m: b.deleted.len().saturating_sub(1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactBound {
    pub m: usize,
    /// Components carrying a detected disk of contact.
    pub q: usize,
    pub flagged: Vec<usize>,
    pub components: usize,
    /// `q <= m` and some component carries no detected disk.
    pub consistent: bool,
    pub diagnostic: Option<String>,
}

/// Compares detected disks of contact with the bound `q <= m`. Detection is
/// bounded, so a pass only means no counterexample was found.
pub fn contact_bound_check(b: &BranchedSurface, detected: &[ContactWitness]) -> ContactBound {
    let mut flagged: Vec<usize> = detected.iter().map(|w| w.component).collect();
    flagged.sort();
    flagged.dedup();
    let m = b.deleted.len().saturating_sub(1);
    let q = flagged.len();
    let components = b.locus.len();
    let diagnostic = if q > m {
        Some(format!("{q} disks of contact exceed m = {m}"))
    } else if components > 0 && q == components {
        Some("every locus component bounds a disk of contact".to_string())
    } else {
        None
    };
    ContactBound {
        m,
        q,
        flagged,
        components,
        consistent: diagnostic.is_none(),
        diagnostic,
    }
}

/// An arc meeting a v-curve at both ends, with its shadow: the run of the
/// v-curve from `start` forward to `end`. Positions index the curve's vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowArc {
    pub arc: usize,
    pub curve: CurveId,
    pub start: usize,
    pub end: usize,
}

impl ShadowArc {
    /// Positions covered by the shadow, endpoints included.
    pub fn footprint(&self, n: usize) -> Vec<usize> {
        let len = (self.end + n - self.start) % n;
        (0..=len).map(|i| (self.start + i) % n).collect()
    }

    fn strictly_inside(&self, x: usize, n: usize) -> bool {
        let off = (x + n - self.start) % n;
        off > 0 && off < (self.end + n - self.start) % n
    }
}

/// Shadow arcs of the runs a locus component makes along `v`.
pub fn shadow_arcs(b: &BranchedSurface, component: usize, v: CurveId) -> Vec<ShadowArc> {
    let Some(comp) = b.locus.iter().find(|c| c.id == component) else {
        return Vec::new();
    };
    let n = b.curve(v).len();
    let on_v: Vec<bool> = comp.cycle.iter().map(|a| a.curve == v).collect();
    let len = on_v.len();
    let Some(begin) = (0..len).find(|&i| !on_v[i]) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < len {
        let at = (begin + i) % len;
        if !on_v[at] {
            i += 1;
            continue;
        }
        let mut run = vec![&comp.cycle[at]];
        while i + 1 < len && on_v[(begin + i + 1) % len] {
            i += 1;
            run.push(&comp.cycle[(begin + i) % len]);
        }
        let (first, last) = (run[0], run[run.len() - 1]);
        let (start, end) = if first.forward {
            (first.arc as usize, (last.arc as usize + 1) % n)
        } else {
            (last.arc as usize, (first.arc as usize + 1) % n)
        };
        out.push(ShadowArc {
            arc: first.cusp,
            curve: v,
            start,
            end,
        });
        i += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutermostReport {
    pub curve: CurveId,
    pub arcs: usize,
    /// Number of outermost arcs.
    pub k: usize,
    /// `min(|v ∩ u1|, |v ∩ u2|)`.
    pub bound: usize,
    pub holds: bool,
}

/// Counts outermost arcs of a family on `v` and checks that consecutive
/// outermost endpoints always see both u-curves between them, else the
/// stretch between them is a wave.
pub fn outermost_count_check(
    d: &HeegaardDiagram,
    v: CurveId,
    family: &[ShadowArc],
) -> Result<OutermostReport, AnalysisError> {
    if v.family() != Family::V {
        return Err(AnalysisError::BadFamily(format!("{} is not a v-curve", v.name())));
    }
    let verts = d.curve(v);
    let n = verts.len();
    let mut ends: Vec<usize> = Vec::new();
    for s in family {
        if s.curve != v || s.start >= n || s.end >= n || s.start == s.end {
            return Err(AnalysisError::BadFamily(format!("arc {} does not fit {}", s.arc, v.name())));
        }
        ends.extend([s.start, s.end]);
    }
    ends.sort();
    if ends.windows(2).any(|w| w[0] == w[1]) {
        return Err(AnalysisError::BadFamily("arcs share an endpoint".into()));
    }
    for (i, s) in family.iter().enumerate() {
        for t in &family[i + 1..] {
            let ins = [t.start, t.end].map(|x| s.strictly_inside(x, n));
            let outs = [s.start, s.end].map(|x| t.strictly_inside(x, n));
            if ins[0] != ins[1] || outs[0] != outs[1] {
                return Err(AnalysisError::BadFamily(format!("arcs {} and {} cross", s.arc, t.arc)));
            }
        }
    }
    let outermost: Vec<&ShadowArc> = family
        .iter()
        .filter(|s| family.iter().all(|t| !s.strictly_inside(t.start, n)))
        .collect();
    let tail = |p: usize| d.locate(Family::U, verts[p]).0;
    let mut pts: Vec<(usize, usize)> = outermost.iter().flat_map(|s| [(s.start, s.arc), (s.end, s.arc)]).collect();
    pts.sort();
    for (i, &(x, arc)) in pts.iter().enumerate() {
        let y = pts[(i + 1) % pts.len()].0;
        let span = (y + n - x) % n;
        let mut seen = [false; 2];
        for off in 0..=span {
            seen[tail((x + off) % n).index()] = true;
        }
        if let Some(missing) = (0..2).find(|&t| !seen[t]) {
            return Err(AnalysisError::WaveDetected {
                arc,
                curve: v.name().to_string(),
                from: x,
                to: y,
                tail: CurveId::new(Family::U, 1 - missing).name().to_string(),
            });
        }
    }
    let bound = d.pair_count(v, CurveId::U1).min(d.pair_count(v, CurveId::U2));
    Ok(OutermostReport {
        curve: v,
        arcs: family.len(),
        k: outermost.len(),
        bound,
        holds: outermost.len() <= bound,
    })
}
