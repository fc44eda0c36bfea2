//! The transversely oriented branched surface built from the diagram and its
//! region words, trivial-sector deletion, and order-driven splitting.
//!
//! Everything is kept at the level of sectors, cusps and locus components.
//! A cusp is one diagram edge: the sectors `P` and `Q` continue smoothly
//! across it, `R` joins from the plus side, and `word(Q) = word(P)·word(R)`
//! holds modulo the relators. Each cusp stores a schedule of relator
//! conjugates multiplying out to `word(Q)^-1·word(P)·word(R)`.

mod contact;
mod locus;
mod split;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diagram::{embedding, CurveId, Family, HeegaardDiagram, Side};
use crate::group::{
    conjugate_schedule, invert_schedule, join_schedules, relator_conjugate, schedule_product, u_relator, v_relator,
    Certificate, Factor, GroupPresentation, RegionLabeling, TriValue, Word,
};

pub use contact::{detect_disk_of_contact, detect_disks_of_contact, detect_twisted_disk, ContactWitness, TwistedDiskReport};
pub use locus::{LocusArc, LocusComponent};
pub use split::{
    replay, run_splitting, split_step, HaltReason, Site, SplitEvent, SplitOptions, SplitTrace,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BranchError {
    #[error("cusp {cusp}: relation fails by {residue}")]
    CuspRelationViolation { cusp: usize, residue: String },
    #[error("sector {sector} is trivial but cusp {cusp} points into it")]
    SourceViolation { sector: usize, cusp: usize },
    #[error("sector {sector} is trivial but its boundary is {edges:?}")]
    QuadViolation { sector: usize, edges: Vec<String> },
    #[error("sectors {0} and {1} merge with unequal words")]
    MergeWordMismatch(usize, usize),
    #[error("sector {sector} has cusp {cusp} pointing in")]
    NotRemovable { sector: usize, cusp: usize },
    #[error("sign of {0} is undecided")]
    UndecidedSign(String),
    #[error("cone disagrees with itself: {0}")]
    SignConflict(String),
    #[error("sector {sector} has sign {sign}")]
    PositivityViolation { sector: usize, sign: String },
    #[error("no sector or cusp {0}")]
    Unknown(usize),
    #[error("locus walk failed: {0}")]
    Locus(String),
    #[error("replay: {0}")]
    ReplayMismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorKind {
    HeegaardSector(usize),
    UDisk(usize),
    VDisk(usize),
    SplitSector,
}

impl fmt::Display for SectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorKind::HeegaardSector(r) => write!(f, "s{r}"),
            SectorKind::UDisk(i) => write!(f, "U{}", i + 1),
            SectorKind::VDisk(j) => write!(f, "V{}", j + 1),
            SectorKind::SplitSector => write!(f, "split"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub id: usize,
    pub kind: SectorKind,
    pub word: Word,
    pub alive: bool,
    /// Sectors merged into this one by a deletion, itself included.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cusp {
    pub id: usize,
    pub component: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    /// Diagram edge carrying the cusp; `None` for cusps created by splits.
    pub arc: Option<(CurveId, u32)>,
    pub alive: bool,
    pub cert: Vec<Factor>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchedSurface {
    pub sectors: Vec<Sector>,
    pub cusps: Vec<Cusp>,
    pub locus: Vec<LocusComponent>,
    pub presentation: GroupPresentation,
    /// Normal directions reversed on U1, U2, V1, V2.
    pub flips: [bool; 4],
    /// Heegaard sectors removed by deletions.
    pub deleted: Vec<usize>,
    /// Vertex sequences of u1, u2, v1, v2.
    curves: [Vec<u32>; 4],
    /// Cusp id of the first arc of each curve.
    arc_base: [usize; 4],
    /// Cusp pairs already split.
    pub split_sites: std::collections::BTreeSet<(usize, usize)>,
}

/// The presentation matching a labeling: curve readings then its defects.
pub fn presentation_for(d: &HeegaardDiagram, lab: &RegionLabeling) -> GroupPresentation {
    let curves = [CurveId::V1, CurveId::V2]
        .map(|c| v_relator(d, c))
        .into_iter()
        .chain([CurveId::U1, CurveId::U2].map(|c| u_relator(d, c)));
    GroupPresentation::new(curves.chain(lab.defects.iter().cloned()))
}

pub fn build_branched(d: &HeegaardDiagram, lab: &RegionLabeling) -> Result<BranchedSurface, BranchError> {
    build_branched_oriented(d, lab, [false; 4])
}

/// Builds B with the normal directions of the listed disks reversed, which
/// replaces their words by inverses.
pub fn build_branched_oriented(
    d: &HeegaardDiagram,
    lab: &RegionLabeling,
    flips: [bool; 4],
) -> Result<BranchedSurface, BranchError> {
    let emb = embedding(d);
    let nf = emb.faces.len();
    let presentation = presentation_for(d, lab);
    let mut sectors: Vec<Sector> = (0..nf)
        .map(|f| Sector {
            id: f,
            kind: SectorKind::HeegaardSector(f),
            word: lab.labels[f].clone(),
            alive: true,
            members: vec![f],
        })
        .collect();
    for slot in 0..4 {
        let (kind, word) = if slot < 2 {
            (SectorKind::UDisk(slot), Word::generator(slot))
        } else {
            (SectorKind::VDisk(slot - 2), Word::generator(slot).conjugate(&lab.frame))
        };
        let word = if flips[slot] { word.inverse() } else { word };
        let id = nf + slot;
        sectors.push(Sector {
            id,
            kind,
            word,
            alive: true,
            members: vec![id],
        });
    }
    let curves = CurveId::ALL.map(|c| d.curve(c).to_vec());
    let mut arc_base = [0; 4];
    let mut cusps = Vec::new();
    for c in CurveId::ALL {
        arc_base[c.slot()] = cusps.len();
        let disk = nf + c.slot();
        let flip = flips[c.slot()];
        for a in 0..emb.arc_count(c) as u32 {
            let plus = emb.occurrence(c, a, Side::Plus).0;
            let minus = emb.occurrence(c, a, Side::Minus).0;
            let (p, q, r) = match (c.family(), flip) {
                (Family::U, false) => (minus, plus, disk),
                (Family::U, true) => (plus, minus, disk),
                (Family::V, false) => (disk, minus, plus),
                (Family::V, true) => (disk, plus, minus),
            };
            let id = cusps.len();
            cusps.push(Cusp {
                id,
                component: c.slot(),
                p,
                q,
                r,
                arc: Some((c, a)),
                alive: true,
                cert: Vec::new(),
            });
        }
    }
    let mut b = BranchedSurface {
        sectors,
        cusps,
        locus: Vec::new(),
        presentation,
        flips,
        deleted: Vec::new(),
        curves,
        arc_base,
        split_sites: Default::default(),
    };
    for k in 0..b.cusps.len() {
        let rel = b.relation(k);
        let cert = relator_conjugate(&b.presentation, &rel).ok_or_else(|| BranchError::CuspRelationViolation {
            cusp: k,
            residue: rel.to_string(),
        })?;
        b.cusps[k].cert = cert;
    }
    b.locus = b.walk_locus()?;
    Ok(b)
}

impl BranchedSurface {
    /// A surface given directly by sectors, cusps `(P, Q, R)` and locus
    /// components as lists of cusp ids, for planted configurations. Each
    /// cusp relation must be free or a single relator conjugate.
    pub fn from_parts(
        sectors: Vec<(SectorKind, Word)>,
        cusps: &[(usize, usize, usize)],
        components: &[Vec<usize>],
        presentation: GroupPresentation,
    ) -> Result<BranchedSurface, BranchError> {
        let sectors = sectors
            .into_iter()
            .enumerate()
            .map(|(id, (kind, word))| Sector {
                id,
                kind,
                word,
                alive: true,
                members: vec![id],
            })
            .collect::<Vec<_>>();
        let mut component = vec![0; cusps.len()];
        for (i, comp) in components.iter().enumerate() {
            for &k in comp {
                *component.get_mut(k).ok_or(BranchError::Unknown(k))? = i;
            }
        }
        let mut b = BranchedSurface {
            cusps: cusps
                .iter()
                .enumerate()
                .map(|(id, &(p, q, r))| Cusp {
                    id,
                    component: component[id],
                    p,
                    q,
                    r,
                    arc: None,
                    alive: true,
                    cert: Vec::new(),
                })
                .collect(),
            sectors,
            locus: Vec::new(),
            presentation,
            flips: [false; 4],
            deleted: Vec::new(),
            curves: Default::default(),
            arc_base: [0; 4],
            split_sites: Default::default(),
        };
        for c in &b.cusps {
            for x in [c.p, c.q, c.r] {
                if x >= b.sectors.len() {
                    return Err(BranchError::Unknown(x));
                }
            }
        }
        for k in 0..b.cusps.len() {
            let rel = b.relation(k);
            b.cusps[k].cert = relator_conjugate(&b.presentation, &rel).ok_or_else(|| {
                BranchError::CuspRelationViolation {
                    cusp: k,
                    residue: rel.to_string(),
                }
            })?;
        }
        b.locus = components
            .iter()
            .enumerate()
            .map(|(id, comp)| LocusComponent {
                id,
                cycle: comp
                    .iter()
                    .map(|&k| {
                        let c = &b.cusps[k];
                        LocusArc {
                            cusp: k,
                            curve: CurveId::U1,
                            arc: 0,
                            forward: true,
                            sectors: [c.p, c.q, c.r],
                            corner_after: false,
                        }
                    })
                    .collect(),
            })
            .collect();
        Ok(b)
    }

    pub fn word(&self, s: usize) -> &Word {
        &self.sectors[s].word
    }

    /// `word(Q)^-1 · word(P) · word(R)`, trivial in the group.
    pub fn relation(&self, k: usize) -> Word {
        let c = &self.cusps[k];
        self.word(c.q).inverse().mul(self.word(c.p)).mul(self.word(c.r))
    }

    pub fn alive_sectors(&self) -> impl Iterator<Item = &Sector> {
        self.sectors.iter().filter(|s| s.alive)
    }

    pub fn alive_cusps(&self) -> impl Iterator<Item = &Cusp> {
        self.cusps.iter().filter(|c| c.alive)
    }

    pub fn sector_count(&self) -> usize {
        self.alive_sectors().count()
    }

    pub fn cusp_count(&self) -> usize {
        self.alive_cusps().count()
    }

    /// Live cusps touching sector `s`.
    pub fn incident(&self, s: usize) -> Vec<usize> {
        self.alive_cusps()
            .filter(|c| c.p == s || c.q == s || c.r == s)
            .map(|c| c.id)
            .collect()
    }

    pub fn check_cusp(&self, k: usize) -> Result<(), BranchError> {
        let rel = self.relation(k);
        if schedule_product(&self.presentation, &self.cusps[k].cert) == rel {
            Ok(())
        } else {
            Err(BranchError::CuspRelationViolation {
                cusp: k,
                residue: rel.to_string(),
            })
        }
    }

    /// Re-verifies the relation certificate of every live cusp.
    pub fn check_all_cusps(&self) -> Result<(), BranchError> {
        for c in self.alive_cusps() {
            self.check_cusp(c.id)?;
        }
        Ok(())
    }

    pub fn total_corners(&self) -> usize {
        self.locus.iter().map(|c| c.corners()).sum()
    }

    /// Stable hash of the live sectors and cusps.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for s in self.alive_sectors() {
            h.update(format!("s {} {} {}\n", s.id, s.kind, s.word).as_bytes());
        }
        for c in self.alive_cusps() {
            h.update(format!("c {} {} {} {} {}\n", c.id, c.component, c.p, c.q, c.r).as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Vertex sequence of a diagram curve.
    pub fn curve(&self, c: CurveId) -> &[u32] {
        &self.curves[c.slot()]
    }

    fn curve_len(&self, c: CurveId) -> usize {
        self.curves[c.slot()].len()
    }

    fn arc_cusp(&self, c: CurveId, a: usize) -> usize {
        self.arc_base[c.slot()] + a
    }
}

/// Result of a triviality sweep over the Heegaard sectors.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TrivialSectors {
    pub ids: Vec<usize>,
    /// Sectors the oracle could not decide; treated as non-trivial.
    pub unknown: Vec<usize>,
    /// Schedule certifying each returned word, when one exists.
    #[serde(skip)]
    pub schedules: BTreeMap<usize, Vec<Factor>>,
}

fn schedule_of(v: &TriValue) -> Option<Vec<Factor>> {
    match v {
        TriValue::Trivial(Certificate::FreeReduction) => Some(Vec::new()),
        TriValue::Trivial(Certificate::Schedule(f)) => Some(f.clone()),
        _ => None,
    }
}

/// Heegaard sectors whose words are certified trivial, after checking that
/// each is a source quadrilateral with one edge on every curve.
pub fn trivial_sectors(
    b: &BranchedSurface,
    oracle: &dyn Fn(&Word) -> TriValue,
) -> Result<TrivialSectors, BranchError> {
    let mut out = TrivialSectors::default();
    for s in b.alive_sectors() {
        if !matches!(s.kind, SectorKind::HeegaardSector(_)) {
            continue;
        }
        let v = oracle(&s.word);
        match &v {
            TriValue::Trivial(_) => {}
            TriValue::Unknown => {
                out.unknown.push(s.id);
                continue;
            }
            TriValue::Nontrivial(_) => continue,
        }
        let edges = b.incident(s.id);
        if let Some(&k) = edges.iter().find(|&&k| b.cusps[k].q == s.id) {
            return Err(BranchError::SourceViolation { sector: s.id, cusp: k });
        }
        let mut curves: Vec<CurveId> = edges.iter().filter_map(|&k| b.cusps[k].arc.map(|a| a.0)).collect();
        curves.sort();
        curves.dedup();
        if edges.len() != 4 || curves.len() != 4 {
            let edges = edges
                .iter()
                .map(|&k| match b.cusps[k].arc {
                    Some((c, a)) => format!("{}:{a}", c.name()),
                    None => format!("cusp {k}"),
                })
                .collect();
            return Err(BranchError::QuadViolation { sector: s.id, edges });
        }
        if let Some(f) = schedule_of(&v) {
            out.schedules.insert(s.id, f);
        }
        out.ids.push(s.id);
    }
    Ok(out)
}

/// Removes source sectors. The two other sectors at each of their cusps merge;
/// the merged sector keeps the shortest member word and every remaining cusp
/// certificate is rewritten accordingly.
pub fn delete_sectors(
    b: &BranchedSurface,
    ids: &[usize],
    oracle: &dyn Fn(&Word) -> TriValue,
) -> Result<BranchedSurface, BranchError> {
    let mut out = b.clone();
    let p = out.presentation.clone();
    // edges (x, y, t) with x^-1 y = product(t)
    let mut merges: Vec<(usize, usize, Vec<Factor>)> = Vec::new();
    for &s in ids {
        let sector = out.sectors.get(s).filter(|x| x.alive).ok_or(BranchError::Unknown(s))?;
        let cert_s = schedule_of(&oracle(&sector.word)).ok_or(BranchError::MergeWordMismatch(s, s))?;
        for k in out.incident(s) {
            let c = out.cusps[k].clone();
            if c.q == s {
                return Err(BranchError::NotRemovable { sector: s, cusp: k });
            }
            let (x, y, t) = if c.p == s {
                let by = out.word(c.r).inverse();
                (c.q, c.r, join_schedules(&c.cert, &conjugate_schedule(&invert_schedule(&cert_s), &by)))
            } else {
                (c.q, c.p, join_schedules(&c.cert, &invert_schedule(&cert_s)))
            };
            if schedule_product(&p, &t) != out.word(x).inverse().mul(out.word(y)) {
                return Err(BranchError::MergeWordMismatch(x, y));
            }
            if ids.contains(&x) || ids.contains(&y) {
                return Err(BranchError::NotRemovable { sector: s, cusp: k });
            }
            merges.push((x, y, t));
            out.cusps[k].alive = false;
        }
        out.sectors[s].alive = false;
        out.deleted.push(s);
    }
    // spread certificates from a shortest representative of each class
    let n = out.sectors.len();
    let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
    for (i, (x, y, _)) in merges.iter().enumerate() {
        adj[*x].push((*y, i, true));
        adj[*y].push((*x, i, false));
    }
    let mut rep: Vec<Option<(usize, Vec<Factor>)>> = vec![None; n];
    let mut order: Vec<usize> = (0..n).filter(|&x| !adj[x].is_empty()).collect();
    order.sort_by_key(|&x| (out.sectors[x].word.len(), x));
    for &root in &order {
        if rep[root].is_some() {
            continue;
        }
        rep[root] = Some((root, Vec::new()));
        let mut queue = VecDeque::from([root]);
        let mut members = vec![root];
        while let Some(x) = queue.pop_front() {
            let cx = rep[x].as_ref().unwrap().1.clone();
            for &(y, i, fwd) in &adj[x] {
                if rep[y].is_some() {
                    continue;
                }
                let t = &merges[i].2;
                let step = if fwd { t.clone() } else { invert_schedule(t) };
                rep[y] = Some((root, join_schedules(&cx, &step)));
                members.push(y);
                queue.push_back(y);
            }
        }
        members.sort();
        let mut all = Vec::new();
        for &m in &members {
            all.extend(out.sectors[m].members.iter().copied());
            if m != root {
                out.sectors[m].alive = false;
            }
        }
        all.sort();
        out.sectors[root].members = all;
    }
    for k in 0..out.cusps.len() {
        if !out.cusps[k].alive {
            continue;
        }
        for slot in 0..3 {
            let c = &out.cusps[k];
            let x = [c.p, c.q, c.r][slot];
            let Some((r, dx)) = rep[x].clone() else { continue };
            if r == x {
                continue;
            }
            let c = &mut out.cusps[k];
            let cert = std::mem::take(&mut c.cert);
            c.cert = match slot {
                0 => {
                    let by = out.sectors[c.r].word.inverse();
                    join_schedules(&cert, &conjugate_schedule(&invert_schedule(&dx), &by))
                }
                1 => join_schedules(&dx, &cert),
                _ => join_schedules(&cert, &invert_schedule(&dx)),
            };
            match slot {
                0 => c.p = r,
                1 => c.q = r,
                _ => c.r = r,
            }
        }
        out.check_cusp(k)?;
    }
    out.locus = out.walk_locus()?;
    Ok(out)
}

/// Whether B₀ came from deleting a single quadrilateral and its branch
/// locus is one curve, the case in which the lamination extends to a taut
/// foliation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductComplement {
    pub holds: bool,
    pub deleted: usize,
    pub components: usize,
    pub conclusion: String,
}

pub fn check_product_complement(b0: &BranchedSurface) -> ProductComplement {
    let holds = b0.deleted.len() == 1 && b0.locus.len() == 1;
    let conclusion = if holds {
        "complement of N(B0) is a 3-ball; the lamination extends to a co-orientable taut foliation".to_string()
    } else {
        "more than one trivial sector; corner and disk-of-contact diagnostics apply".to_string()
    };
    ProductComplement {
        holds,
        deleted: b0.deleted.len(),
        components: b0.locus.len(),
        conclusion,
    }
}
