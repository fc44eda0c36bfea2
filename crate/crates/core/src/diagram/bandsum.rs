//! Band sum of `u1` and `u2` along the rectangle of `u1+ → u2+` arcs.

use std::collections::HashSet;

use super::faces::{embedding, Side};
use super::waves::waves_in;
use super::whitehead::{arc_ends, ArcClass};
use super::{CurveId, DiagramError, Family, HeegaardDiagram};

/// Result of a band sum: the new meridian and the two diagrams it forms.
#[derive(Clone, Debug)]
pub struct BandSum {
    /// The new curve as (origin vertex, sign) pairs; each point sits beside
    /// the origin vertex on the plus side of its u-curve.
    pub curve: Vec<(u32, i8)>,
    /// Number of arcs in the rectangle.
    pub m: usize,
    /// Diagram with u-system `{u1, u'}`.
    pub with_u1: HeegaardDiagram,
    /// Diagram with u-system `{u', u2}`.
    pub with_u2: HeegaardDiagram,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Pt {
    Old(u32),
    Push(u32),
}

fn post(msg: impl Into<String>) -> DiagramError {
    DiagramError::PostconditionViolation(msg.into())
}

/// Finds the class of arcs from `u1+` to `u2+` among the given classes.
pub fn band_class(classes: &[ArcClass]) -> Result<&ArcClass, DiagramError> {
    classes
        .iter()
        .find(|c| {
            c.ends.0.curve == CurveId::U1
                && c.ends.0.side == Side::Plus
                && c.ends.1.curve == CurveId::U2
                && c.ends.1.side == Side::Plus
        })
        .ok_or(DiagramError::EmptyClass)
}

/// Cyclic interval of positions; returns the positions in order, starting at
/// the first one.
fn interval(len: usize, set: &HashSet<usize>) -> Option<Vec<usize>> {
    if set.len() == len {
        return Some((0..len).collect());
    }
    let start = (0..len).find(|&p| set.contains(&p) && !set.contains(&((p + len - 1) % len)))?;
    let run: Vec<usize> = (0..set.len()).map(|i| (start + i) % len).collect();
    run.iter().all(|p| set.contains(p)).then_some(run)
}

pub fn band_sum(d: &HeegaardDiagram, rect: &ArcClass) -> Result<BandSum, DiagramError> {
    if rect.arcs.is_empty() {
        return Err(DiagramError::EmptyClass);
    }
    let mut on1 = HashSet::new();
    let mut on2 = HashSet::new();
    for &(c, a) in &rect.arcs {
        let ends = arc_ends(d, Family::U, c, a);
        for (x, fv) in ends {
            if fv.side != Side::Plus {
                return Err(post("rectangle arc does not join plus sides"));
            }
            let (uc, p) = d.locate(Family::U, x);
            match uc {
                CurveId::U1 => on1.insert(p),
                _ => on2.insert(p),
            };
        }
    }
    let u1 = d.curve(CurveId::U1);
    let u2 = d.curve(CurveId::U2);
    let i1 = interval(u1.len(), &on1).ok_or_else(|| post("rectangle ends are not consecutive on u1"))?;
    let i2 = interval(u2.len(), &on2).ok_or_else(|| post("rectangle ends are not consecutive on u2"))?;
    let m = rect.arcs.len();

    let rest = |seq: &[u32], iv: &[usize]| -> Vec<u32> {
        let k = seq.len();
        let last = *iv.last().unwrap();
        (1..=k - iv.len()).map(|i| seq[(last + i) % k]).collect()
    };
    let r1 = rest(u1, &i1);
    let r2 = rest(u2, &i2);
    let curve: Vec<(u32, i8)> = r1.iter().chain(r2.iter()).map(|&x| (x, d.sign(x))).collect();
    if curve.is_empty() {
        return Err(post("band sum curve is empty"));
    }
    let in1: HashSet<u32> = i1.iter().map(|&p| u1[p]).collect();
    let in2: HashSet<u32> = i2.iter().map(|&p| u2[p]).collect();
    let new_u: Vec<Pt> = curve.iter().map(|&(x, _)| Pt::Push(x)).collect();

    // `keep` is the u-curve that survives next to u'.
    let build = |keep: CurveId| -> Result<HeegaardDiagram, DiagramError> {
        let (kept_band, gone_band) = if keep == CurveId::U1 { (&in1, &in2) } else { (&in2, &in1) };
        let kept: Vec<Pt> = d.curve(keep).iter().map(|&x| Pt::Old(x)).collect();
        let v = [CurveId::V1, CurveId::V2].map(|vc| {
            let mut seq = Vec::new();
            for &x in d.curve(vc) {
                let (uc, _) = d.locate(Family::U, x);
                if uc == keep {
                    if kept_band.contains(&x) {
                        seq.push(Pt::Old(x));
                    } else if d.sign(x) > 0 {
                        seq.extend([Pt::Old(x), Pt::Push(x)]);
                    } else {
                        seq.extend([Pt::Push(x), Pt::Old(x)]);
                    }
                } else if !gone_band.contains(&x) {
                    seq.push(Pt::Push(x));
                }
            }
            seq
        });
        let u = if keep == CurveId::U1 {
            [kept, new_u.clone()]
        } else {
            [new_u.clone(), kept]
        };
        let sign = |p: Pt| match p {
            Pt::Old(x) | Pt::Push(x) => d.sign(x),
        };
        let nd = HeegaardDiagram::assemble(u, v, sign).map_err(|e| post(format!("surgered diagram invalid: {e}")))?;
        let emb = embedding(&nd);
        let bigons = emb.faces.iter().filter(|f| f.size() == 2).count();
        if bigons > 0 {
            return Err(post(format!("{bigons} bigon(s) against v-curves")));
        }
        let waves = waves_in(&emb, Family::U);
        if !waves.is_empty() {
            return Err(post(format!("{} wave(s) with respect to the new u-system", waves.len())));
        }
        Ok(nd)
    };
    let with_u1 = build(CurveId::U1)?;
    let with_u2 = build(CurveId::U2)?;
    Ok(BandSum {
        curve,
        m,
        with_u1,
        with_u2,
    })
}
