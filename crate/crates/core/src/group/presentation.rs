//! Region words and the four-generator presentation read off a diagram.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::abelian::{smith_invariants, Lattice};
use super::word::{Letter, Word};
use crate::diagram::{embedding, CurveId, Embedding, Family, HeegaardDiagram, Side};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("region {0} does not exist")]
    UnknownRegion(usize),
    #[error("inconsistent labels: {0}")]
    InconsistentLabels(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(relators: impl IntoIterator<Item = Word>) -> GroupPresentation {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for r in relators {
            let r = r.cyclically_reduced();
            if r.is_empty() {
                continue;
            }
            if seen.insert(r.cyclic_canonical()) {
                out.push(r);
            }
        }
        GroupPresentation { relators: out }
    }

    pub fn free() -> GroupPresentation {
        GroupPresentation { relators: Vec::new() }
    }

    pub fn abelian_rows(&self) -> Vec<[i64; 4]> {
        self.relators.iter().map(Word::abelianize).collect()
    }

    pub fn relation_lattice(&self) -> Lattice {
        Lattice::new(&self.abelian_rows())
    }

    /// Invariant factors of the abelianization; zeros are free summands.
    pub fn homology(&self) -> [i64; 4] {
        smith_invariants(&self.abelian_rows())
    }

    /// Order of the abelianization, or `None` when it is infinite.
    pub fn homology_order(&self) -> Option<i64> {
        let inv = self.homology();
        inv.iter().all(|&d| d != 0).then(|| inv.iter().product())
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }
}

/// Words attached to the faces, relative to a base face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLabeling {
    pub base: usize,
    pub labels: Vec<Word>,
    /// The edge `(parent face, position)` through which each face was reached.
    pub tree: Vec<Option<(usize, usize)>>,
    /// Cyclically reduced closure defects of the non-tree edges.
    pub defects: Vec<Word>,
    /// Accumulated rebase factor; the v-disk loops read `frame · h_j · frame^-1`.
    #[serde(default)]
    pub frame: Word,
}

/// Word obtained by crossing the edge at `(face, pos)` out of `face`.
pub(crate) fn cross(emb: &Embedding, face: usize, pos: usize, label: &Word) -> Word {
    let e = emb.faces[face].edge_cycle[pos];
    let j = e.curve.index();
    match (e.curve.family(), e.side) {
        // minus side to plus side of a u-curve: right multiplication by g
        (Family::U, Side::Minus) => label.mul(&Word::generator(j)),
        (Family::U, Side::Plus) => label.mul(&Word::generator(j).inverse()),
        // plus side to minus side of a v-curve: left multiplication by h
        (Family::V, Side::Plus) => Word::generator(2 + j).mul(label),
        (Family::V, Side::Minus) => Word::generator(2 + j).inverse().mul(label),
    }
}

/// Closure defect of one edge: trivial exactly when both labels obey the
/// crossing rule.
pub(crate) fn edge_defect(emb: &Embedding, labels: &[Word], face: usize, pos: usize) -> Word {
    let (g, _) = emb.across(face, pos);
    let expected = cross(emb, face, pos, &labels[face]);
    labels[g].ldiv(&expected)
}

pub fn region_words(d: &HeegaardDiagram, base: usize) -> Result<RegionLabeling, GroupError> {
    let emb = embedding(d);
    region_words_in(&emb, base)
}

pub(crate) fn region_words_in(emb: &Embedding, base: usize) -> Result<RegionLabeling, GroupError> {
    let nf = emb.faces.len();
    if base >= nf {
        return Err(GroupError::UnknownRegion(base));
    }
    let mut labels: Vec<Option<Word>> = vec![None; nf];
    let mut tree = vec![None; nf];
    labels[base] = Some(Word::identity());
    let mut queue = VecDeque::from([base]);
    while let Some(f) = queue.pop_front() {
        let lf = labels[f].clone().unwrap();
        for pos in 0..emb.faces[f].size() {
            let (g, _) = emb.across(f, pos);
            if labels[g].is_none() {
                labels[g] = Some(cross(emb, f, pos, &lf));
                tree[g] = Some((f, pos));
                queue.push_back(g);
            }
        }
    }
    let labels: Vec<Word> = labels
        .into_iter()
        .map(|l| l.ok_or_else(|| GroupError::InconsistentLabels("face graph is disconnected".into())))
        .collect::<Result<_, _>>()?;
    let mut defects = Vec::new();
    for f in 0..nf {
        for pos in 0..emb.faces[f].size() {
            let (g, gpos) = emb.across(f, pos);
            if tree[g] == Some((f, pos)) || tree[f] == Some((g, gpos)) {
                continue;
            }
            let w = edge_defect(emb, &labels, f, pos).cyclically_reduced();
            if !w.is_empty() {
                defects.push(w);
            }
        }
    }
    Ok(RegionLabeling {
        base,
        labels,
        tree,
        defects,
        frame: Word::identity(),
    })
}

/// Left-multiplies every label by the inverse of the new base's label. The
/// v-edge rule then holds with `h_j` conjugated by the accumulated frame.
pub fn rebase(lab: &RegionLabeling, new_base: usize) -> Result<RegionLabeling, GroupError> {
    let delta = lab
        .labels
        .get(new_base)
        .ok_or(GroupError::UnknownRegion(new_base))?
        .inverse();
    Ok(RegionLabeling {
        base: new_base,
        labels: lab.labels.iter().map(|w| delta.mul(w)).collect(),
        tree: lab.tree.clone(),
        defects: lab.defects.clone(),
        frame: delta.mul(&lab.frame),
    })
}

/// Reading of a v-curve in the g-letters it crosses.
pub fn v_relator(d: &HeegaardDiagram, c: CurveId) -> Word {
    Word::from_letters(
        d.curve(c)
            .iter()
            .map(|&x| Letter::new(d.locate(Family::U, x).0.index(), d.sign(x))),
    )
}

/// Reading of a u-curve in the h-letters it crosses; left multiplication makes
/// the product run against the traversal.
pub fn u_relator(d: &HeegaardDiagram, c: CurveId) -> Word {
    Word::from_letters(
        d.curve(c)
            .iter()
            .rev()
            .map(|&x| Letter::new(2 + d.locate(Family::V, x).0.index(), d.sign(x))),
    )
}

pub fn presentation(d: &HeegaardDiagram) -> GroupPresentation {
    let emb = embedding(d);
    let lab = region_words_in(&emb, 0).expect("face 0 exists on a valid diagram");
    let curves = [CurveId::V1, CurveId::V2]
        .map(|c| v_relator(d, c))
        .into_iter()
        .chain([CurveId::U1, CurveId::U2].map(|c| u_relator(d, c)));
    GroupPresentation::new(curves.chain(lab.defects))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;

    const SMALL: &str = "vertices 6\nu1: 1 2 3\nu2: 4 5 6\nv1: 5- 3+\nv2: 4+ 6+ 2+ 1+\n";

    #[test]
    fn base_label_is_empty_and_tree_edges_obey_rules() {
        let d = parse_diagram(SMALL).unwrap();
        let emb = embedding(&d);
        for base in 0..emb.faces.len() {
            let lab = region_words(&d, base).unwrap();
            assert!(lab.labels[base].is_empty());
            for (g, t) in lab.tree.iter().enumerate() {
                if let Some((f, pos)) = *t {
                    assert_eq!(cross(&emb, f, pos, &lab.labels[f]), lab.labels[g]);
                }
            }
        }
    }

    #[test]
    fn u_edge_multiplies_on_the_right() {
        let d = parse_diagram(SMALL).unwrap();
        let emb = embedding(&d);
        let lab = region_words(&d, 0).unwrap();
        for f in &emb.faces {
            for (pos, e) in f.edge_cycle.iter().enumerate() {
                if e.curve == CurveId::U1 && e.side == Side::Minus {
                    let (q, _) = emb.across(f.id, pos);
                    if lab.tree[q] == Some((f.id, pos)) {
                        assert_eq!(lab.labels[q], lab.labels[f.id].mul(&Word::generator(0)));
                    }
                }
            }
        }
    }

    #[test]
    fn rebase_round_trip() {
        let d = parse_diagram(SMALL).unwrap();
        let lab = region_words(&d, 0).unwrap();
        let there = rebase(&lab, 2).unwrap();
        assert!(there.labels[2].is_empty());
        let back = rebase(&there, 0).unwrap();
        assert_eq!(back.labels, lab.labels);
        assert!(back.frame.is_empty());
        assert_eq!(rebase(&lab, 0).unwrap().labels, lab.labels);
    }

    #[test]
    fn single_curve_reading() {
        let d = parse_diagram(SMALL).unwrap();
        assert_eq!(v_relator(&d, CurveId::V2).to_string(), "g2 g2 g1 g1");
        assert!(presentation(&d).relators.iter().all(|r| *r == r.cyclically_reduced()));
    }
}
