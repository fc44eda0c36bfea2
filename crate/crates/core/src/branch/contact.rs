//! Disks of contact and twisted disks, searched over small sector sets.
//!
//! A candidate is a connected set of sectors glued smoothly at cusps where
//! the set holds `Q` and exactly one of `P`, `R`. Every other cusp it touches
//! must hold only `Q` in the set, so the disk meets the cusp head on, and
//! those boundary cusps must be exactly the arcs of one locus component.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{BranchError, BranchedSurface, LocusComponent};
use crate::order::{PartialLeftOrder, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactWitness {
    pub component: usize,
    pub sectors: Vec<usize>,
    pub weight: usize,
}

// None when the set is not a valid candidate, else the boundary cusps.
fn boundary_of(b: &BranchedSurface, set: &BTreeSet<usize>) -> Option<BTreeSet<usize>> {
    let mut boundary = BTreeSet::new();
    let mut internal = 0usize;
    for c in b.alive_cusps() {
        let (p, q, r) = (set.contains(&c.p), set.contains(&c.q), set.contains(&c.r));
        match (p, q, r) {
            (false, false, false) => {}
            (false, true, false) => {
                boundary.insert(c.id);
            }
            (true, true, false) | (false, true, true) if c.p != c.r => internal += 1,
            _ => return None,
        }
    }
    // a tree of gluings keeps the union a disk
    (internal + 1 == set.len()).then_some(boundary)
}

fn neighbours(b: &BranchedSurface, x: usize) -> Vec<usize> {
    let mut out: Vec<usize> = b
        .alive_cusps()
        .filter_map(|c| {
            if c.q == x {
                Some([c.p, c.r])
            } else if c.p == x || c.r == x {
                Some([c.q, c.q])
            } else {
                None
            }
        })
        .flatten()
        .filter(|&y| y != x)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// First disk of contact of at most `max_weight` sectors whose boundary is a
/// whole locus component. `None` says nothing about larger weights.
pub fn detect_disk_of_contact(b: &BranchedSurface, max_weight: usize) -> Option<ContactWitness> {
    b.locus.iter().find_map(|comp| search_component(b, comp, max_weight))
}

/// One witness per locus component that has one within the weight bound.
pub fn detect_disks_of_contact(b: &BranchedSurface, max_weight: usize) -> Vec<ContactWitness> {
    b.locus.iter().filter_map(|comp| search_component(b, comp, max_weight)).collect()
}

fn search_component(b: &BranchedSurface, comp: &LocusComponent, max_weight: usize) -> Option<ContactWitness> {
    let arcs: BTreeSet<usize> = comp.cusps().collect();
    let seeds: BTreeSet<usize> = arcs.iter().map(|&k| b.cusps[k].q).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier: Vec<BTreeSet<usize>> = seeds.iter().map(|&s| BTreeSet::from([s])).collect();
    for weight in 1..=max_weight {
        let mut next = Vec::new();
        for set in frontier {
            let key: Vec<usize> = set.iter().copied().collect();
            if !seen.insert(key.clone()) {
                continue;
            }
            if boundary_of(b, &set).is_some_and(|boundary| boundary == arcs) {
                return Some(ContactWitness {
                    component: comp.id,
                    sectors: key,
                    weight,
                });
            }
            if weight < max_weight {
                for &x in &set {
                    for y in neighbours(b, x) {
                        if !set.contains(&y) {
                            let mut grown = set.clone();
                            grown.insert(y);
                            next.push(grown);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    None
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedDiskReport {
    pub sectors_checked: usize,
    pub cusps_checked: usize,
    /// Sectors whose sign the cone could not decide.
    pub undecided: Vec<usize>,
}

/// Sector words must all be positive: a twisted disk needs a sector word
/// `c = 1` or two words with `ab = 1`, impossible among positives. Also
/// checks at each cusp that positive `P` and `R` never give a non-positive `Q`.
pub fn detect_twisted_disk(b: &BranchedSurface, o: &PartialLeftOrder) -> Result<TwistedDiskReport, BranchError> {
    let mut rep = TwistedDiskReport::default();
    let mut sign = vec![Sign::Unknown; b.sectors.len()];
    for s in b.alive_sectors() {
        sign[s.id] = o.sign(&s.word);
        rep.sectors_checked += 1;
        match sign[s.id] {
            Sign::Positive => {}
            Sign::Unknown => rep.undecided.push(s.id),
            x => {
                return Err(BranchError::PositivityViolation {
                    sector: s.id,
                    sign: x.to_string(),
                })
            }
        }
    }
    for c in b.alive_cusps() {
        rep.cusps_checked += 1;
        if sign[c.p] == Sign::Positive && sign[c.r] == Sign::Positive && !matches!(sign[c.q], Sign::Positive | Sign::Unknown) {
            return Err(BranchError::PositivityViolation {
                sector: c.q,
                sign: sign[c.q].to_string(),
            });
        }
    }
    Ok(rep)
}

/// The positivity assertion for a sector created by a split.
pub(crate) fn check_new_sector(b: &BranchedSurface, s: usize, o: &PartialLeftOrder) -> Result<(), BranchError> {
    match o.sign(b.word(s)) {
        Sign::Positive | Sign::Unknown => Ok(()),
        x => Err(BranchError::PositivityViolation {
            sector: s,
            sign: x.to_string(),
        }),
    }
}
