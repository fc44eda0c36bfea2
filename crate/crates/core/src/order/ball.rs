//! The ball of radius `L` in the free group on four generators, with the
//! equalities between its elements that the relators certify.

use std::collections::HashMap;

use crate::diagram::UnionFind;
use crate::group::{Letter, TrivialityOracle, Word};

const OUT: u32 = u32::MAX;

pub struct Ball {
    pub radius: usize,
    /// Elements in shortlex order; index 0 is the identity.
    pub words: Vec<Word>,
    index: HashMap<Word, u32>,
    right: Vec<[u32; Letter::COUNT]>,
    left: Vec<[u32; Letter::COUNT]>,
    inverse: Vec<u32>,
}

impl Ball {
    pub fn new(radius: usize) -> Ball {
        let mut words = vec![Word::identity()];
        let mut layer = vec![Word::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &layer {
                for l in 0..Letter::COUNT as u8 {
                    let l = Letter(l);
                    if w.letters().last() == Some(&l.inverse()) {
                        continue;
                    }
                    next.push(w.mul(&Word::letter(l)));
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        let index: HashMap<Word, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let look = |w: &Word| index.get(w).copied().unwrap_or(OUT);
        let right = words
            .iter()
            .map(|w| std::array::from_fn(|l| look(&w.mul(&Word::letter(Letter(l as u8))))))
            .collect();
        let left = words
            .iter()
            .map(|w| std::array::from_fn(|l| look(&Word::letter(Letter(l as u8)).mul(w))))
            .collect();
        let inverse = words.iter().map(|w| look(&w.inverse())).collect();
        Ball {
            radius,
            words,
            index,
            right,
            left,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, w: &Word) -> Option<usize> {
        self.index.get(w).map(|&i| i as usize)
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    /// Index of the reduced product of two elements, when it lies in the ball.
    pub fn product(&self, x: usize, y: usize) -> Option<usize> {
        let mut c = x as u32;
        for l in self.words[y].letters() {
            c = self.right[c as usize][l.0 as usize];
            if c == OUT {
                return None;
            }
        }
        Some(c as usize)
    }

    /// Coarsest partition generated by the relator equalities that is closed
    /// under inversion and under multiplication by letters inside the ball.
    pub(crate) fn identify(&self, oracle: &TrivialityOracle, extra: &[(Word, Word)]) -> UnionFind {
        let p = &oracle.presentation;
        let n = self.len();
        let mut uf = UnionFind::new(n);
        let join = |uf: &mut UnionFind, a: &Word, b: &Word| {
            if let (Some(i), Some(j)) = (self.get(a), self.get(b)) {
                uf.union(i, j);
            }
        };
        for r in &p.relators {
            for e in [r.clone(), r.inverse()] {
                for k in 0..e.len() {
                    let rot = e.rotate(k);
                    for s in 0..=rot.len() {
                        // rot = a b = 1, so a = b^-1
                        let a = rot.subword(0, s);
                        let b = rot.subword(s, rot.len());
                        join(&mut uf, &a, &b.inverse());
                    }
                }
            }
        }
        for (a, b) in extra {
            join(&mut uf, a, b);
        }
        if !p.relators.is_empty() {
            for i in 0..n {
                let (s, _) = oracle.shorten(&self.words[i]);
                join(&mut uf, &self.words[i], &s);
            }
        }
        loop {
            let mut changed = false;
            for table in [&self.right, &self.left] {
                for l in 0..Letter::COUNT {
                    let mut image: HashMap<usize, usize> = HashMap::new();
                    for (i, row) in table.iter().enumerate() {
                        let t = row[l];
                        if t == OUT {
                            continue;
                        }
                        let (ci, ct) = (uf.find(i), uf.find(t as usize));
                        match image.get(&ci) {
                            Some(&prev) if uf.find(prev) != ct => {
                                uf.union(prev, ct);
                                changed = true;
                            }
                            Some(_) => {}
                            None => {
                                image.insert(ci, ct);
                            }
                        }
                    }
                }
            }
            let mut image: HashMap<usize, usize> = HashMap::new();
            for i in 0..n {
                let (ci, ct) = (uf.find(i), uf.find(self.inverse(i)));
                match image.get(&ci) {
                    Some(&prev) if uf.find(prev) != ct => {
                        uf.union(prev, ct);
                        changed = true;
                    }
                    Some(_) => {}
                    None => {
                        image.insert(ci, ct);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        uf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupPresentation;

    #[test]
    fn ball_sizes_and_order() {
        for (r, size) in [(0, 1), (1, 9), (2, 65), (3, 457)] {
            assert_eq!(Ball::new(r).len(), size);
        }
        let b = Ball::new(2);
        for w in b.words.windows(2) {
            assert_eq!(w[0].shortlex_cmp(&w[1]), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn products_stay_reduced() {
        let b = Ball::new(2);
        let x = b.get(&"g1 g2".parse().unwrap()).unwrap();
        let y = b.get(&"g2^-1 h1".parse().unwrap()).unwrap();
        assert_eq!(b.words[b.product(x, y).unwrap()].to_string(), "g1 h1");
        let z = b.get(&"h1 h1".parse().unwrap()).unwrap();
        assert_eq!(b.product(x, z), None);
    }

    #[test]
    fn relator_identifies_halves() {
        let b = Ball::new(2);
        let p = GroupPresentation::new(["g1 g2 g1^-1 g2^-1".parse::<Word>().unwrap()]);
        let mut uf = b.identify(&TrivialityOracle::new(&p, Default::default()), &[]);
        let i = |s: &str| b.get(&s.parse().unwrap()).unwrap();
        assert_eq!(uf.find(i("g1 g2")), uf.find(i("g2 g1")));
        assert_ne!(uf.find(i("g1")), uf.find(i("g2")));
        assert_ne!(uf.find(0), uf.find(i("g1")));
    }
}
