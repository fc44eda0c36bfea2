//! Builders for test diagrams: assembly from Whitehead-graph data on the
//! four-holed sphere, finger moves that plant bigons, and handle slides that
//! plant waves.

use std::collections::HashMap;

use super::faces::{embedding, Side};
use super::{CurveId, DiagramError, Family, HeegaardDiagram};

/// Parameters of a form-I Whitehead graph of the surface cut along `u1, u2`,
/// plus the twists used when regluing each pair of boundary circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormOne {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub t1: usize,
    pub t2: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Class {
    // u1+ to u2+ and u1- to u2-
    ATop,
    ABot,
    // u1+ to u2- through the middle, u1- to u2+ around the outside
    BIn,
    BOut,
    C,
    D,
}

// Circles: 0 = u1+, 1 = u1-, 2 = u2+, 3 = u2-.
fn layout(p: &FormOne) -> ([Vec<(Class, usize)>; 4], Vec<(Class, usize, usize, usize)>) {
    let counts = |c: Class| match c {
        Class::ATop | Class::ABot => p.a,
        Class::BIn | Class::BOut => p.b,
        Class::C => p.c,
        Class::D => p.d,
    };
    // counter-clockwise block order around each circle
    let order: [[Class; 3]; 4] = [
        [Class::ATop, Class::C, Class::BIn],
        [Class::ABot, Class::C, Class::BOut],
        [Class::BOut, Class::ATop, Class::D],
        [Class::D, Class::BIn, Class::ABot],
    ];
    // (class, first circle, second circle)
    let ends = [
        (Class::ATop, 0, 2),
        (Class::ABot, 1, 3),
        (Class::BIn, 0, 3),
        (Class::BOut, 1, 2),
        (Class::C, 0, 1),
        (Class::D, 2, 3),
    ];
    let slots = order.map(|blocks| {
        blocks
            .iter()
            .flat_map(|&c| (0..counts(c)).map(move |k| (c, k)))
            .collect::<Vec<_>>()
    });
    let arcs = ends
        .iter()
        .flat_map(|&(c, x, y)| (0..counts(c)).map(move |k| (c, k, x, y)))
        .collect();
    (slots, arcs)
}

/// Assembles the diagram whose v-arcs realize the given form-I pattern.
pub fn from_form_one(p: FormOne) -> Result<HeegaardDiagram, DiagramError> {
    let n1 = p.a + p.b + p.c;
    let n2 = p.a + p.b + p.d;
    if n1 == 0 || n2 == 0 {
        return Err(DiagramError::EmptyCurve(if n1 == 0 { CurveId::U1 } else { CurveId::U2 }));
    }
    let (slots, arcs) = layout(&p);
    let idx = |circle: usize, c: Class, k: usize| slots[circle].iter().position(|&s| s == (c, k)).unwrap();
    // ccw slot index on a circle -> (vertex id, side)
    let point = |circle: usize, i: usize| -> (u32, Side) {
        match circle {
            0 => ((n1 - 1 - i) as u32 + 1, Side::Plus),
            1 => (((i + n1 - p.t1 % n1) % n1) as u32 + 1, Side::Minus),
            2 => ((n1 + n2 - 1 - i) as u32 + 1, Side::Plus),
            _ => ((n1 + (i + n2 - p.t2 % n2) % n2) as u32 + 1, Side::Minus),
        }
    };
    // each arc: two endpoints; the second circle sees the block reversed
    let mut endpoint: HashMap<(u32, Side), (usize, usize)> = HashMap::new();
    let mut arc_ends = Vec::new();
    for (ai, &(c, k, x, y)) in arcs.iter().enumerate() {
        let m = slots[x].iter().filter(|s| s.0 == c).count();
        let ex = point(x, idx(x, c, k));
        let ey = point(y, idx(y, c, m - 1 - k));
        endpoint.insert(ex, (ai, 0));
        endpoint.insert(ey, (ai, 1));
        arc_ends.push([ex, ey]);
    }
    let mut used = vec![false; arcs.len()];
    let mut curves: Vec<Vec<(u32, i8)>> = Vec::new();
    for start in 0..arcs.len() {
        if used[start] {
            continue;
        }
        let mut seq = Vec::new();
        let (mut ai, mut from) = (start, 0usize);
        while !used[ai] {
            used[ai] = true;
            let (x, side) = arc_ends[ai][1 - from];
            // arriving on `side`, crossing to the other side
            seq.push((x, if side == Side::Minus { 1 } else { -1 }));
            let next = endpoint[&(x, side.flip())];
            ai = next.0;
            from = next.1;
        }
        curves.push(seq);
    }
    if curves.len() != 2 {
        return Err(DiagramError::PostconditionViolation(format!(
            "gluing produced {} v-curves",
            curves.len()
        )));
    }
    let u1: Vec<u32> = (1..=n1 as u32).collect();
    let u2: Vec<u32> = (n1 as u32 + 1..=(n1 + n2) as u32).collect();
    let v2 = curves.pop().unwrap();
    let v1 = curves.pop().unwrap();
    HeegaardDiagram::new(n1 + n2, u1, u2, v1, v2)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Pt {
    Old(u32),
    New(u32, u8),
}

/// Pushes arc `v_arc` of a v-curve across arc `u_arc` of a u-curve inside a
/// face they share, planting a bigon. The two arcs must not meet at a corner.
pub fn finger_move(
    d: &HeegaardDiagram,
    v_curve: CurveId,
    v_arc: u32,
    u_curve: CurveId,
    u_arc: u32,
) -> Result<HeegaardDiagram, DiagramError> {
    let emb = embedding(d);
    let before = emb.faces.iter().filter(|f| f.size() == 2).count();
    let apart = emb.faces.iter().any(|f| {
        let k = f.size();
        let pos = |c: CurveId, a: u32| f.edge_cycle.iter().position(|e| e.curve == c && e.arc == a);
        match (pos(v_curve, v_arc), pos(u_curve, u_arc)) {
            (Some(i), Some(j)) => {
                let gap = (i + k - j) % k;
                gap.min(k - gap) >= 2
            }
            _ => false,
        }
    });
    if !apart {
        return Err(DiagramError::PostconditionViolation(
            "arcs must share a face without sharing a corner".into(),
        ));
    }
    let n = d.vertex_count() as u32;
    let x = Pt::New(n + 1, 0);
    let y = Pt::New(n + 2, 1);
    let insert = |c: CurveId, arc: u32, pts: [Pt; 2]| -> Vec<Pt> {
        let mut out = Vec::new();
        for (i, &z) in d.curve(c).iter().enumerate() {
            out.push(Pt::Old(z));
            if i as u32 == arc {
                out.extend(pts);
            }
        }
        out
    };
    let keep = |c: CurveId| d.curve(c).iter().map(|&z| Pt::Old(z)).collect::<Vec<_>>();
    let mut last = DiagramError::PostconditionViolation("no finger move realizes a bigon".into());
    for first in [1i8, -1] {
        for u_order in [[x, y], [y, x]] {
            let u = [0, 1].map(|j| {
                let c = CurveId::new(Family::U, j);
                if c == u_curve { insert(c, u_arc, u_order) } else { keep(c) }
            });
            let v = [0, 1].map(|j| {
                let c = CurveId::new(Family::V, j);
                if c == v_curve { insert(c, v_arc, [x, y]) } else { keep(c) }
            });
            let sign = |p: Pt| match p {
                Pt::Old(z) => d.sign(z),
                Pt::New(_, 0) => first,
                Pt::New(..) => -first,
            };
            match HeegaardDiagram::assemble(u, v, sign) {
                Ok(nd) if embedding(&nd).faces.iter().filter(|f| f.size() == 2).count() == before + 1 => return Ok(nd),
                Ok(_) => {}
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}

/// Slides `u1` over `u2` along a band inside `face`, joining the u1-edge at
/// position `i` of the face cycle to the u2-edge at position `j`. The result
/// carries a wave whose move undoes the slide.
pub fn handle_slide(d: &HeegaardDiagram, face: usize, i: usize, j: usize) -> Result<HeegaardDiagram, DiagramError> {
    let emb = embedding(d);
    let bad = |m: &str| DiagramError::PostconditionViolation(m.into());
    let f = emb.faces.get(face).ok_or_else(|| bad("face out of range"))?;
    let k = f.size();
    let gap = (i + k - j % k) % k;
    if gap.min(k - gap) < 3 {
        return Err(bad("band would run parallel to a single edge"));
    }
    let (e1, e2) = match (f.edge_cycle.get(i), f.edge_cycle.get(j)) {
        (Some(a), Some(b)) if a.curve == CurveId::U1 && b.curve == CurveId::U2 => (*a, *b),
        _ => return Err(bad("band must join a u1-edge to a u2-edge")),
    };
    let walk = |c: CurveId, arc: u32, side: Side| -> Vec<(u32, bool)> {
        let seq = d.curve(c);
        let k = seq.len();
        let a = arc as usize;
        if side == Side::Plus {
            (1..=k).map(|s| (seq[(a + s) % k], true)).collect()
        } else {
            (0..k).map(|s| (seq[(a + k - s) % k], false)).collect()
        }
    };
    let part1 = walk(CurveId::U1, e1.arc, e1.side);
    let part2 = walk(CurveId::U2, e2.arc, e2.side);
    let fwd: HashMap<u32, bool> = part1.iter().chain(part2.iter()).copied().collect();
    let new_u: Vec<Pt> = part1.iter().chain(part2.iter()).map(|&(z, _)| Pt::New(z, 0)).collect();
    let kept: Vec<Pt> = d.curve(CurveId::U2).iter().map(|&z| Pt::Old(z)).collect();
    let plus2 = e2.side == Side::Plus;
    let v = [CurveId::V1, CurveId::V2].map(|vc| {
        let mut seq = Vec::new();
        for &z in d.curve(vc) {
            if d.locate(Family::U, z).0 == CurveId::U1 {
                seq.push(Pt::New(z, 0));
            } else if (d.sign(z) > 0) == plus2 {
                seq.extend([Pt::Old(z), Pt::New(z, 0)]);
            } else {
                seq.extend([Pt::New(z, 0), Pt::Old(z)]);
            }
        }
        seq
    });
    let sign = |p: Pt| match p {
        Pt::Old(z) => d.sign(z),
        Pt::New(z, _) => {
            if fwd[&z] {
                d.sign(z)
            } else {
                -d.sign(z)
            }
        }
    };
    HeegaardDiagram::assemble([new_u, kept], v, sign)
}
