//! Todd–Coxeter coset enumeration (HLT strategy) with a row cap.

use super::word::{Letter, Word};

const NONE: u32 = u32::MAX;

/// A complete coset table for a subgroup of finite index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    rows: Vec<[u32; Letter::COUNT]>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    /// The coset reached from the subgroup coset by acting with `w`.
    pub fn act(&self, w: &Word) -> usize {
        let mut c = 0usize;
        for l in w.letters() {
            c = self.rows[c][l.0 as usize] as usize;
        }
        c
    }
}

struct Enumerator {
    table: Vec<[u32; Letter::COUNT]>,
    forward: Vec<u32>,
    queue: Vec<(u32, u32)>,
    limit: usize,
    overflow: bool,
}

impl Enumerator {
    fn rep(&mut self, mut c: u32) -> u32 {
        while self.forward[c as usize] != c {
            c = self.forward[c as usize];
        }
        c
    }

    fn live(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    fn define(&mut self, c: u32, l: usize) -> Option<u32> {
        if self.table.len() >= self.limit {
            self.overflow = true;
            return None;
        }
        let n = self.table.len() as u32;
        self.table.push([NONE; Letter::COUNT]);
        self.forward.push(n);
        self.table[c as usize][l] = n;
        self.table[n as usize][l ^ 1] = c;
        Some(n)
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        self.forward[gone as usize] = keep;
        self.queue.push((gone, keep));
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut head = 0;
        while head < self.queue.len() {
            let e = self.queue[head].0;
            head += 1;
            for x in 0..Letter::COUNT {
                let f = self.table[e as usize][x];
                if f == NONE {
                    continue;
                }
                if self.table[f as usize][x ^ 1] == e {
                    self.table[f as usize][x ^ 1] = NONE;
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                let t = self.table[e1 as usize][x];
                if t != NONE {
                    self.merge(f1, t);
                } else {
                    let t = self.table[f1 as usize][x ^ 1];
                    if t != NONE {
                        self.merge(e1, t);
                    } else {
                        self.table[e1 as usize][x] = f1;
                        self.table[f1 as usize][x ^ 1] = e1;
                    }
                }
            }
        }
        self.queue.clear();
    }

    fn scan_and_fill(&mut self, c: u32, w: &[Letter]) {
        let n = w.len() as isize;
        if n == 0 {
            return;
        }
        loop {
            if !self.live(c) || self.overflow {
                return;
            }
            let (mut f, mut i) = (c, 0isize);
            while i < n {
                let t = self.table[f as usize][w[i as usize].0 as usize];
                if t == NONE {
                    break;
                }
                f = self.rep(t);
                i += 1;
            }
            if i == n {
                if f != c {
                    self.coincidence(f, c);
                }
                return;
            }
            let (mut b, mut j) = (c, n - 1);
            while j >= i {
                let t = self.table[b as usize][w[j as usize].inverse().0 as usize];
                if t == NONE {
                    break;
                }
                b = self.rep(t);
                j -= 1;
            }
            if j < i {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            let l = w[i as usize].0 as usize;
            if i == j {
                self.table[f as usize][l] = b;
                let t = self.table[b as usize][l ^ 1];
                if t == NONE {
                    self.table[b as usize][l ^ 1] = f;
                } else if self.rep(t) != f {
                    self.coincidence(t, f);
                }
                return;
            }
            if self.define(f, l).is_none() {
                return;
            }
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup`; `None` if
/// more than `limit` cosets get defined.
pub fn enumerate_cosets(relators: &[Word], subgroup: &[Word], limit: usize) -> Option<CosetTable> {
    let mut e = Enumerator {
        table: vec![[NONE; Letter::COUNT]],
        forward: vec![0],
        queue: Vec::new(),
        limit: limit.max(1),
        overflow: false,
    };
    for h in subgroup {
        e.scan_and_fill(0, h.letters());
    }
    let mut c = 0u32;
    while (c as usize) < e.table.len() {
        for r in relators {
            if !e.live(c) {
                break;
            }
            e.scan_and_fill(c, r.letters());
            if e.overflow {
                return None;
            }
        }
        for l in 0..Letter::COUNT {
            if e.live(c) && e.table[c as usize][l] == NONE {
                e.define(c, l)?;
            }
        }
        c += 1;
    }
    // compact live cosets
    let mut map = vec![NONE; e.table.len()];
    let mut next = 0u32;
    for i in 0..e.table.len() {
        if e.live(i as u32) {
            map[i] = next;
            next += 1;
        }
    }
    let mut rows = Vec::with_capacity(next as usize);
    for i in 0..e.table.len() {
        if map[i] == NONE {
            continue;
        }
        let mut row = [0u32; Letter::COUNT];
        for l in 0..Letter::COUNT {
            let t = e.table[i][l];
            debug_assert!(t != NONE);
            row[l] = map[e.rep(t) as usize];
        }
        rows.push(row);
    }
    Some(CosetTable { rows })
}
