//! Waves, wave moves and the complexity used to pick them.

use serde::{Deserialize, Serialize};

use super::faces::{embedding, Embedding, Side};
use super::{CurveId, DiagramError, Family, HeegaardDiagram};

/// An arc inside one face joining two distinct edges of the same curve,
/// both approached from the same side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wave {
    pub family: Family,
    pub target: CurveId,
    pub side: Side,
    pub face: usize,
    /// Positions of the two endpoint edges in the face's edge cycle, `i < j`.
    pub ends: (usize, usize),
    /// Arc indices of the two endpoint edges on `target`.
    pub arcs: (u32, u32),
}

fn check_tight(emb: &Embedding) -> Result<(), DiagramError> {
    let bigons = emb.faces.iter().filter(|f| f.size() == 2).count();
    if bigons > 0 {
        return Err(DiagramError::NotTight(bigons));
    }
    Ok(())
}

pub(crate) fn waves_in(emb: &Embedding, family: Family) -> Vec<Wave> {
    let mut out = Vec::new();
    for f in &emb.faces {
        let cyc = &f.edge_cycle;
        for i in 0..cyc.len() {
            for j in i + 1..cyc.len() {
                let (a, b) = (cyc[i], cyc[j]);
                if a.curve.family() != family || a.curve != b.curve || a.side != b.side || a.arc == b.arc {
                    continue;
                }
                if emb.pieces(&[a.curve], Some((f.id, i, j))) != 1 {
                    continue;
                }
                out.push(Wave {
                    family,
                    target: a.curve,
                    side: a.side,
                    face: f.id,
                    ends: (i, j),
                    arcs: (a.arc, b.arc),
                });
            }
        }
    }
    out
}

/// All waves with respect to the curves of `family`.
pub fn find_waves(d: &HeegaardDiagram, family: Family) -> Result<Vec<Wave>, DiagramError> {
    let emb = embedding(d);
    check_tight(&emb)?;
    Ok(waves_in(&emb, family))
}

fn verify_wave(emb: &Embedding, w: &Wave) -> Result<(), DiagramError> {
    let bad = |m: &str| Err(DiagramError::NotAWave(m.to_string()));
    let Some(f) = emb.faces.get(w.face) else {
        return bad("face out of range");
    };
    let (i, j) = w.ends;
    if i >= j || j >= f.size() {
        return bad("endpoint positions out of order");
    }
    let (a, b) = (f.edge_cycle[i], f.edge_cycle[j]);
    if a.curve != w.target || b.curve != w.target || w.target.family() != w.family {
        return bad("endpoints not on the target curve");
    }
    if a.side != b.side || a.side != w.side {
        return bad("endpoints approach from different sides");
    }
    if a.arc == b.arc || (a.arc, b.arc) != w.arcs {
        return bad("endpoint arcs inconsistent");
    }
    if emb.pieces(&[w.target], Some((w.face, i, j))) != 1 {
        return bad("complement is disconnected");
    }
    Ok(())
}

/// Replaces the target curve by the surgered curve running along one of the
/// two arcs of the target cut at the wave's endpoints.
pub fn wave_move(d: &HeegaardDiagram, w: &Wave) -> Result<HeegaardDiagram, DiagramError> {
    let emb = embedding(d);
    verify_wave(&emb, w)?;
    let seq = d.curve(w.target);
    let k = seq.len();
    let (p, q) = (w.arcs.0 as usize, w.arcs.1 as usize);
    // Arc p ends at position p+1; the two sides of the cut.
    let run = |from: usize, to: usize| -> Vec<u32> {
        let mut out = Vec::new();
        let mut i = (from + 1) % k;
        loop {
            out.push(seq[i]);
            if i == to {
                break;
            }
            i = (i + 1) % k;
        }
        out
    };
    let side_a = run(p, q);
    let side_b = run(q, p);
    let mut best: Option<HeegaardDiagram> = None;
    let mut last_err = DiagramError::NotAWave("no valid surgery".into());
    for keep in [side_a, side_b] {
        match surgery(d, w.target, &keep) {
            Ok(nd) => {
                if best.as_ref().is_none_or(|b| nd.vertex_count() < b.vertex_count()) {
                    best = Some(nd);
                }
            }
            Err(e) => last_err = e,
        }
    }
    best.ok_or(last_err)
}

fn surgery(d: &HeegaardDiagram, target: CurveId, keep: &[u32]) -> Result<HeegaardDiagram, DiagramError> {
    let fam = target.family();
    let dropped: std::collections::HashSet<u32> = d
        .curve(target)
        .iter()
        .copied()
        .filter(|x| !keep.contains(x))
        .collect();
    let mut same: [Vec<u32>; 2] = [d.curve(CurveId::new(fam, 0)).to_vec(), d.curve(CurveId::new(fam, 1)).to_vec()];
    same[target.index()] = keep.to_vec();
    let opp: [Vec<u32>; 2] = [0, 1].map(|j| {
        d.curve(CurveId::new(fam.other(), j))
            .iter()
            .copied()
            .filter(|x| !dropped.contains(x))
            .collect()
    });
    let nd = match fam {
        Family::U => HeegaardDiagram::assemble(same, opp, |x| d.sign(x))?,
        Family::V => HeegaardDiagram::assemble(opp, same, |x| d.sign(x))?,
    };
    let emb = embedding(&nd);
    let cut = [CurveId::new(fam, 0), CurveId::new(fam, 1)];
    if emb.pieces(&cut, None) != 1 {
        return Err(DiagramError::NotAWave("surgered curve system does not cut to a planar piece".into()));
    }
    Ok(nd)
}

/// Lexicographic complexity `(c1, c2, c3)` with the special meridians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityTriple {
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
    pub special_v: CurveId,
    pub special_u: CurveId,
}

impl ComplexityTriple {
    pub fn key(&self) -> (usize, usize, usize) {
        (self.c1, self.c2, self.c3)
    }
}

pub fn complexity(d: &HeegaardDiagram) -> ComplexityTriple {
    let mut best: Option<(usize, usize, usize)> = None;
    for s in 0..2 {
        for t in 0..2 {
            let c = d.pair_count(CurveId::new(Family::V, s), CurveId::new(Family::U, t));
            if best.is_none_or(|(b, _, _)| c < b) {
                best = Some((c, s, t));
            }
        }
    }
    let (c1, s, t) = best.unwrap();
    let ut = CurveId::new(Family::U, t);
    let c2 = d.pair_count(CurveId::V1, ut) + d.pair_count(CurveId::V2, ut);
    ComplexityTriple {
        c1,
        c2,
        c3: d.vertex_count(),
        special_v: CurveId::new(Family::V, s),
        special_u: ut,
    }
}

/// Greedy wave reduction until no wave remains on either side.
pub fn minimize(d: &HeegaardDiagram) -> Result<HeegaardDiagram, DiagramError> {
    Ok(minimize_path(d)?.pop().unwrap())
}

/// Every diagram visited by `minimize`, starting with `d`.
pub fn minimize_path(d: &HeegaardDiagram) -> Result<Vec<HeegaardDiagram>, DiagramError> {
    let mut path = vec![d.clone()];
    loop {
        let cur = path.last().unwrap();
        let emb = embedding(&cur);
        check_tight(&emb)?;
        let mut best: Option<(ComplexityTriple, HeegaardDiagram)> = None;
        let mut failed = None;
        for fam in [Family::U, Family::V] {
            for w in waves_in(&emb, fam) {
                // moves whose curves no longer fill the surface are skipped
                let next = match wave_move(cur, &w) {
                    Ok(next) => next,
                    Err(e) => {
                        failed = Some(e);
                        continue;
                    }
                };
                let c = complexity(&next);
                if best.as_ref().is_none_or(|(b, _)| c.key() < b.key()) {
                    best = Some((c, next));
                }
            }
        }
        match (best, failed) {
            (Some((_, next)), _) => path.push(next),
            (None, None) => return Ok(path),
            (None, Some(e)) => return Err(e),
        }
    }
}
