//! Integer row reduction for abelianized relators.

/// Row-echelon basis of the lattice spanned by the rows, with positive pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    rows: Vec<([i64; 4], usize)>,
}

impl Lattice {
    pub fn new(vectors: &[[i64; 4]]) -> Lattice {
        let mut pool: Vec<[i64; 4]> = vectors.iter().copied().filter(|v| v.iter().any(|&x| x != 0)).collect();
        let mut rows = Vec::new();
        for col in 0..4 {
            loop {
                let active: Vec<usize> = (0..pool.len()).filter(|&i| pool[i][col] != 0).collect();
                if active.is_empty() {
                    break;
                }
                let p = *active.iter().min_by_key(|&&i| pool[i][col].abs()).unwrap();
                let pivot = pool[p];
                let mut done = true;
                for &i in &active {
                    if i == p {
                        continue;
                    }
                    let q = pool[i][col] / pivot[col];
                    for k in 0..4 {
                        pool[i][k] -= q * pivot[k];
                    }
                    if pool[i][col] != 0 {
                        done = false;
                    }
                }
                if done {
                    let mut row = pool.swap_remove(p);
                    if row[col] < 0 {
                        row.iter_mut().for_each(|x| *x = -*x);
                    }
                    rows.push((row, col));
                    break;
                }
            }
            pool.retain(|v| v.iter().any(|&x| x != 0));
        }
        Lattice { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` modulo the lattice; zero exactly when `v` lies in it.
    pub fn residue(&self, v: [i64; 4]) -> [i64; 4] {
        let mut v = v;
        for (row, col) in &self.rows {
            let q = v[*col].div_euclid(row[*col]);
            for k in 0..4 {
                v[k] -= q * row[k];
            }
        }
        v
    }

    pub fn contains(&self, v: [i64; 4]) -> bool {
        self.residue(v) == [0; 4]
    }
}

/// Invariant factors of the integer matrix with the given rows, padded with
/// zeros to four entries (zero meaning a free summand).
pub fn smith_invariants(vectors: &[[i64; 4]]) -> [i64; 4] {
    let mut m: Vec<[i64; 4]> = vectors.to_vec();
    let mut diag = Vec::new();
    let mut cols: Vec<usize> = (0..4).collect();
    while !cols.is_empty() {
        // pick the smallest nonzero entry among remaining rows and columns
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate() {
            for &c in &cols {
                if row[c] != 0 && best.is_none_or(|(bi, bc)| row[c].abs() < m[bi][bc].abs()) {
                    best = Some((i, c));
                }
            }
        }
        let Some((pi, pc)) = best else { break };
        let p = m[pi][pc];
        let mut clean = true;
        for i in 0..m.len() {
            if i != pi && m[i][pc] != 0 {
                let q = m[i][pc] / p;
                let prow = m[pi];
                for k in 0..4 {
                    m[i][k] -= q * prow[k];
                }
                clean &= m[i][pc] == 0;
            }
        }
        for &c in &cols {
            if c != pc && m[pi][c] != 0 {
                let q = m[pi][c] / p;
                for row in m.iter_mut() {
                    row[c] -= q * row[pc];
                }
                clean &= m[pi][c] == 0;
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold any entry not divisible by p into the pivot row
        let bad = m
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pi)
            .find_map(|(i, row)| cols.iter().find(|&&c| c != pc && row[c] % p != 0).map(|_| i));
        if let Some(i) = bad {
            let row = m[i];
            for k in 0..4 {
                m[pi][k] += row[k];
            }
            continue;
        }
        diag.push(p.abs());
        m.remove(pi);
        cols.retain(|&c| c != pc);
    }
    let mut out = [0i64; 4];
    diag.sort_unstable();
    for (i, d) in diag.into_iter().enumerate() {
        out[i] = d;
    }
    // free summands sort last
    out.sort_by_key(|&d| if d == 0 { i64::MAX } else { d });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_membership() {
        let l = Lattice::new(&[[2, 0, 0, 0], [0, 3, 0, 0], [1, 1, 1, 0]]);
        assert_eq!(l.rank(), 3);
        assert!(l.contains([2, 3, 0, 0]));
        assert!(l.contains([1, 1, 1, 0]));
        assert!(!l.contains([1, 0, 0, 0]));
        assert!(!l.contains([0, 0, 0, 1]));
    }

    #[test]
    fn smith_of_small_matrices() {
        assert_eq!(smith_invariants(&[[2, 4, 0, 0], [6, 8, 0, 0]]), [2, 4, 0, 0]);
        assert_eq!(smith_invariants(&[[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]), [1, 1, 1, 6]);
        assert_eq!(smith_invariants(&[]), [0, 0, 0, 0]);
    }
}
