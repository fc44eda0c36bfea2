//! Layered word-problem oracle: free reduction, abelianization, Dehn's
//! algorithm under C'(1/6), coset enumeration and a bounded search over
//! products of relator conjugates.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::abelian::Lattice;
use super::coset::{enumerate_cosets, CosetTable};
use super::presentation::GroupPresentation;
use super::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Radius of the ball used by truncated cones.
    pub ball_radius: usize,
    /// Row cap for every coset enumeration.
    pub max_cosets: usize,
    /// Maximal number of relator conjugates in a search schedule.
    pub max_conjugates: usize,
    /// Cap on Dehn reductions and on search nodes.
    pub dehn_steps: usize,
    /// Cap on decisions made by the positive-cone search.
    pub cone_nodes: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            ball_radius: 8,
            max_cosets: 1_000_000,
            max_conjugates: 4,
            dehn_steps: 20_000,
            cone_nodes: 1_000_000,
        }
    }
}

/// One factor `conjugator · r^exponent · conjugator^-1` of a schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub conjugator: Word,
    pub relator: usize,
    pub exponent: i8,
}

impl Factor {
    pub fn value(&self, p: &GroupPresentation) -> Word {
        let r = &p.relators[self.relator];
        let r = if self.exponent < 0 { r.inverse() } else { r.clone() };
        r.conjugate(&self.conjugator)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// The word is empty after free reduction.
    FreeReduction,
    /// The word equals the product of these factors in the free group.
    Schedule(Vec<Factor>),
    /// Image in the abelianization, reduced modulo the relation lattice.
    Abelianization([i64; 4]),
    /// Action on the cosets of the trivial subgroup (`subgroup = None`) or of
    /// `<generator>`; `coset` is where the word sends the base coset.
    CosetAction {
        subgroup: Option<usize>,
        index: usize,
        coset: usize,
    },
    /// Dehn reduction under C'(1/6) stopped at this nonempty word.
    DehnIrreducible(Word),
    /// Identified with the identity by the relator congruence on the ball of
    /// this radius.
    BallCongruence { radius: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriValue {
    Trivial(Certificate),
    Nontrivial(Certificate),
    Unknown,
}

impl TriValue {
    pub fn is_trivial(&self) -> bool {
        matches!(self, TriValue::Trivial(_))
    }

    pub fn is_nontrivial(&self) -> bool {
        matches!(self, TriValue::Nontrivial(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            TriValue::Trivial(c) | TriValue::Nontrivial(c) => Some(c),
            TriValue::Unknown => None,
        }
    }
}

/// Multiplies out a schedule in the free group.
pub fn schedule_product(p: &GroupPresentation, factors: &[Factor]) -> Word {
    factors
        .iter()
        .fold(Word::identity(), |acc, f| acc.mul(&f.value(p)))
}

pub fn invert_schedule(factors: &[Factor]) -> Vec<Factor> {
    factors
        .iter()
        .rev()
        .map(|f| Factor {
            conjugator: f.conjugator.clone(),
            relator: f.relator,
            exponent: -f.exponent,
        })
        .collect()
}

/// Schedule for `by · w · by^-1` given one for `w`.
pub fn conjugate_schedule(factors: &[Factor], by: &Word) -> Vec<Factor> {
    factors
        .iter()
        .map(|f| Factor {
            conjugator: by.mul(&f.conjugator),
            relator: f.relator,
            exponent: f.exponent,
        })
        .collect()
}

/// Concatenation with adjacent inverse factors cancelled.
pub fn join_schedules(a: &[Factor], b: &[Factor]) -> Vec<Factor> {
    let mut out = a.to_vec();
    for f in b {
        match out.last() {
            Some(g) if g.relator == f.relator && g.exponent == -f.exponent && g.conjugator == f.conjugator => {
                out.pop();
            }
            _ => out.push(f.clone()),
        }
    }
    out
}

/// A one-factor schedule when `w` is a conjugate of a relator or its inverse.
pub fn relator_conjugate(p: &GroupPresentation, w: &Word) -> Option<Vec<Factor>> {
    if w.is_empty() {
        return Some(Vec::new());
    }
    let (core, c) = w.cyclic_core();
    for (i, r) in p.relators.iter().enumerate() {
        if r.len() != core.len() {
            continue;
        }
        for e in [1i8, -1] {
            let re = if e > 0 { r.clone() } else { r.inverse() };
            for k in 0..re.len() {
                if re.rotate(k) == core {
                    let f = Factor {
                        conjugator: c.mul(&re.subword(0, k).inverse()),
                        relator: i,
                        exponent: e,
                    };
                    return Some(vec![f]);
                }
            }
        }
    }
    None
}

/// Element of the symmetrized relator set: a cyclic rotation of `r^e`.
#[derive(Clone, Debug)]
struct Rotation {
    word: Word,
    relator: usize,
    exponent: i8,
    /// Prefix `q` with `r^e = q · rest`, so `word = q^-1 r^e q`.
    prefix: Word,
}

fn symmetrize(p: &GroupPresentation) -> Vec<Rotation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, r) in p.relators.iter().enumerate() {
        for e in [1i8, -1] {
            let re = if e > 0 { r.clone() } else { r.inverse() };
            for k in 0..re.len() {
                let word = re.rotate(k);
                if seen.insert(word.clone()) {
                    out.push(Rotation {
                        word,
                        relator: i,
                        exponent: e,
                        prefix: re.subword(0, k),
                    });
                }
            }
        }
    }
    out
}

/// Whether the symmetrized relators satisfy the metric condition C'(1/6).
pub fn is_c_prime_sixth(p: &GroupPresentation) -> bool {
    let rs = symmetrize(p);
    for (i, a) in rs.iter().enumerate() {
        for b in &rs[i + 1..] {
            let l = a
                .word
                .letters()
                .iter()
                .zip(b.word.letters())
                .take_while(|(x, y)| x == y)
                .count();
            if 6 * l >= a.word.len() || 6 * l >= b.word.len() {
                return false;
            }
        }
    }
    true
}

/// A search state: the current word is `conj · core · conj^-1` after the
/// recorded factors, with `core` cyclically reduced.
#[derive(Clone)]
struct State {
    conj: Word,
    core: Word,
    factors: Vec<Factor>,
}

impl State {
    fn new(w: &Word) -> State {
        let (core, conj) = w.cyclic_core();
        State {
            conj,
            core,
            factors: Vec::new(),
        }
    }

    /// Replaces the subword of length `m` starting at cyclic position `i`
    /// of the core, which equals a prefix of `rot`, by the inverse of the
    /// rest of `rot`.
    fn apply(&self, rot: &Rotation, i: usize, m: usize) -> State {
        let s = self.core.letters();
        // rotate the core so position i comes first: core = x y, y x
        let x = Word::from_letters(s[..i].iter().copied());
        let rotated = self.core.rotate(i);
        let conj = self.conj.mul(&x);
        let rest = Word::from_letters(rot.word.letters()[m..].iter().copied());
        let tail = Word::from_letters(rotated.letters()[m..].iter().copied());
        // rotated = u · tail = rot · rest^-1 · tail
        let next = rest.inverse().mul(&tail);
        let mut factors = self.factors.clone();
        factors.push(Factor {
            conjugator: conj.mul(&rot.prefix.inverse()),
            relator: rot.relator,
            exponent: rot.exponent,
        });
        let (core, c2) = next.cyclic_core();
        State {
            conj: conj.mul(&c2),
            core,
            factors,
        }
    }
}

fn cyclic_match(core: &Word, i: usize, r: &Word) -> usize {
    let s = core.letters();
    let n = s.len();
    r.letters()
        .iter()
        .take(n)
        .enumerate()
        .take_while(|&(k, l)| s[(i + k) % n] == *l)
        .count()
}

/// Greedy length-reducing rewriting: every step replaces more than half of
/// a relator rotation by the inverse of the rest. Returns the shortened word
/// and the schedule with `w = product(schedule) · shortened`.
pub fn shorten(p: &GroupPresentation, w: &Word, max_steps: usize) -> (Word, Vec<Factor>) {
    let rs = symmetrize(p);
    shorten_with(&rs, w, max_steps)
}

fn shorten_with(rs: &[Rotation], w: &Word, max_steps: usize) -> (Word, Vec<Factor>) {
    let mut st = State::new(w);
    for _ in 0..max_steps {
        let n = st.core.len();
        // (gain, rotation, position, match length)
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (ri, rot) in rs.iter().enumerate() {
            if rot.word.len() > 2 * n + 1 {
                continue;
            }
            for i in 0..n {
                let m = cyclic_match(&st.core, i, &rot.word);
                if 2 * m > rot.word.len() {
                    let gain = 2 * m - rot.word.len();
                    if best.is_none_or(|b| gain > b.0) {
                        best = Some((gain, ri, i, m));
                    }
                }
            }
        }
        match best {
            Some((_, ri, i, m)) => st = st.apply(&rs[ri], i, m),
            None => break,
        }
    }
    let out = st.core.conjugate(&st.conj);
    (out, st.factors)
}

/// Caches the expensive per-presentation data behind repeated queries.
pub struct TrivialityOracle {
    pub presentation: GroupPresentation,
    pub budget: Budget,
    rotations: Vec<Rotation>,
    lattice: Lattice,
    small_cancellation: bool,
    full: OnceLock<Option<CosetTable>>,
    cyclic: [OnceLock<Option<CosetTable>>; 4],
}

impl TrivialityOracle {
    pub fn new(p: &GroupPresentation, budget: Budget) -> TrivialityOracle {
        TrivialityOracle {
            presentation: p.clone(),
            budget,
            rotations: symmetrize(p),
            lattice: p.relation_lattice(),
            small_cancellation: is_c_prime_sixth(p),
            full: OnceLock::new(),
            cyclic: Default::default(),
        }
    }

    fn full_table(&self) -> Option<&CosetTable> {
        self.full
            .get_or_init(|| enumerate_cosets(&self.presentation.relators, &[], self.budget.max_cosets))
            .as_ref()
    }

    fn cyclic_table(&self, g: usize) -> Option<&CosetTable> {
        self.cyclic[g]
            .get_or_init(|| {
                enumerate_cosets(&self.presentation.relators, &[Word::generator(g)], self.budget.max_cosets)
            })
            .as_ref()
    }

    /// `Some(true)` when coset enumeration proves the group trivial.
    pub fn group_is_trivial(&self) -> Option<bool> {
        self.full_table().map(|t| t.index() == 1)
    }

    /// Generators proven trivial.
    pub fn trivial_generators(&self) -> Vec<usize> {
        (0..4)
            .filter(|&g| self.is_trivial(&Word::generator(g)).is_trivial())
            .collect()
    }

    pub fn is_trivial(&self, w: &Word) -> TriValue {
        let v = self.decide_cheap(w);
        if v != TriValue::Unknown {
            return v;
        }
        self.search(w)
    }

    /// Certified greedy shortening; see [`shorten`].
    pub fn shorten(&self, w: &Word) -> (Word, Vec<Factor>) {
        shorten_with(&self.rotations, w, self.budget.dehn_steps)
    }

    /// Layers one to three only: no coset enumeration and no search.
    pub fn decide_cheap(&self, w: &Word) -> TriValue {
        if w.is_empty() {
            return TriValue::Trivial(Certificate::FreeReduction);
        }
        let res = self.lattice.residue(w.abelianize());
        if res != [0; 4] {
            return TriValue::Nontrivial(Certificate::Abelianization(res));
        }
        if self.small_cancellation {
            let (rest, factors) = shorten_with(&self.rotations, w, self.budget.dehn_steps);
            return if rest.is_empty() {
                TriValue::Trivial(Certificate::Schedule(factors))
            } else {
                TriValue::Nontrivial(Certificate::DehnIrreducible(rest))
            };
        }
        TriValue::Unknown
    }

    // Layers four and five.
    fn search(&self, w: &Word) -> TriValue {
        if let Some(t) = self.full_table() {
            let coset = t.act(w);
            let cert = Certificate::CosetAction {
                subgroup: None,
                index: t.index(),
                coset,
            };
            return if coset == 0 {
                TriValue::Trivial(cert)
            } else {
                TriValue::Nontrivial(cert)
            };
        }
        for g in 0..4 {
            if let Some(t) = self.cyclic_table(g) {
                let coset = t.act(w);
                if coset != 0 {
                    return TriValue::Nontrivial(Certificate::CosetAction {
                        subgroup: Some(g),
                        index: t.index(),
                        coset,
                    });
                }
            }
        }
        match self.conjugate_search(w) {
            Some(factors) => TriValue::Trivial(Certificate::Schedule(factors)),
            None => TriValue::Unknown,
        }
    }

    /// Best-first search over relator insertions that cancel at least half
    /// of the inserted rotation; depth is the number of conjugates.
    fn conjugate_search(&self, w: &Word) -> Option<Vec<Factor>> {
        let (shorter, pre) = shorten_with(&self.rotations, w, self.budget.dehn_steps);
        if shorter.is_empty() && pre.len() <= self.budget.max_conjugates.max(pre.len()) {
            return self.emit(w, pre);
        }
        let k = self.budget.max_conjugates;
        let start = State::new(w);
        let mut heap = BinaryHeap::new();
        let mut states = vec![start];
        let mut seen = HashSet::new();
        heap.push(Reverse((states[0].core.len(), 0usize, 0usize)));
        let mut expanded = 0;
        while let Some(Reverse((_, depth, id))) = heap.pop() {
            expanded += 1;
            if expanded > self.budget.dehn_steps {
                break;
            }
            let st = states[id].clone();
            if st.core.is_empty() {
                return self.emit(w, st.factors);
            }
            if depth >= k {
                continue;
            }
            let n = st.core.len();
            for rot in &self.rotations {
                for i in 0..n {
                    let m = cyclic_match(&st.core, i, &rot.word);
                    if m == 0 || 2 * m < rot.word.len() {
                        continue;
                    }
                    let next = st.apply(rot, i, m);
                    if next.core.len() > n + (k - depth) * 2 {
                        continue;
                    }
                    if !seen.insert((next.core.cyclic_canonical(), depth + 1)) {
                        continue;
                    }
                    let len = next.core.len();
                    states.push(next);
                    heap.push(Reverse((len, depth + 1, states.len() - 1)));
                }
            }
        }
        None
    }

    fn emit(&self, w: &Word, factors: Vec<Factor>) -> Option<Vec<Factor>> {
        // re-verified before leaving the oracle
        (schedule_product(&self.presentation, &factors) == *w).then_some(factors)
    }
}

/// One-shot form of [`TrivialityOracle::is_trivial`].
pub fn is_trivial_word(p: &GroupPresentation, w: &Word, budget: Budget) -> TriValue {
    TrivialityOracle::new(p, budget).is_trivial(w)
}

/// Re-checks a certificate against the presentation.
pub fn verify(p: &GroupPresentation, w: &Word, v: &TriValue) -> bool {
    match v {
        TriValue::Unknown => true,
        TriValue::Trivial(Certificate::FreeReduction) => w.is_empty(),
        TriValue::Trivial(Certificate::Schedule(f)) => schedule_product(p, f) == *w,
        TriValue::Nontrivial(Certificate::Abelianization(res)) => {
            *res != [0; 4] && p.relation_lattice().residue(w.abelianize()) == *res
        }
        TriValue::Trivial(Certificate::CosetAction { subgroup: None, coset: 0, index })
        | TriValue::Nontrivial(Certificate::CosetAction { index, .. }) => *index > 0,
        TriValue::Nontrivial(Certificate::DehnIrreducible(rest)) => !rest.is_empty() && is_c_prime_sixth(p),
        TriValue::Trivial(Certificate::BallCongruence { radius }) => w.len() <= *radius,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn small_budget() -> Budget {
        Budget {
            max_cosets: 2000,
            ..Budget::default()
        }
    }

    #[test]
    fn empty_word_is_trivial() {
        let p = GroupPresentation::free();
        assert_eq!(
            is_trivial_word(&p, &Word::identity(), small_budget()),
            TriValue::Trivial(Certificate::FreeReduction)
        );
    }

    #[test]
    fn abelian_image_detects_nontrivial() {
        let p = GroupPresentation::new([w("g2"), w("h1"), w("h2")]);
        let v = is_trivial_word(&p, &w("g1"), small_budget());
        assert!(matches!(v, TriValue::Nontrivial(Certificate::Abelianization(_))));
        assert!(verify(&p, &w("g1"), &v));
    }

    #[test]
    fn planted_conjugate_found_with_one_factor() {
        let r = w("g1 h1 g2^-1 h2 g1 g1 h1^-1 g2");
        let p = GroupPresentation::new([r.clone(), w("h2 h2 g1 h1 g2 g2 g2 h1")]);
        let x = w("h1 g2 g2 h2^-1");
        let planted = r.conjugate(&x);
        let v = is_trivial_word(&p, &planted, small_budget());
        match &v {
            TriValue::Trivial(Certificate::Schedule(f)) => assert_eq!(f.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(verify(&p, &planted, &v));
    }

    #[test]
    fn finite_group_decided_by_cosets() {
        // S3 on g1, g2 with h1, h2 killed
        let p = GroupPresentation::new([w("g1 g1"), w("g2 g2 g2"), w("g1 g2 g1 g2"), w("h1"), w("h2")]);
        let o = TrivialityOracle::new(&p, small_budget());
        assert!(o.is_trivial(&w("g2 g1 g2 g1")).is_trivial());
        let v = o.is_trivial(&w("g1 g2 g1^-1 g2"));
        assert!(v.is_nontrivial() || v.is_trivial());
        assert_eq!(o.group_is_trivial(), Some(false));
        assert_eq!(o.trivial_generators(), vec![2, 3]);
    }

    #[test]
    fn small_cancellation_uses_dehn() {
        // surface-group style relator, long enough for C'(1/6)
        let p = GroupPresentation::new([w("g1 g2 g1^-1 g2^-1 h1 h2 h1^-1 h2^-1")]);
        assert!(is_c_prime_sixth(&p));
        let o = TrivialityOracle::new(&p, small_budget());
        let v = o.is_trivial(&w("g1 g2 g1^-1 g2^-1"));
        assert!(matches!(v, TriValue::Nontrivial(Certificate::DehnIrreducible(_))));
        let t = w("h2 g1 g2 g1^-1 g2^-1 h1 h2 h1^-1 h2^-1 h2^-1");
        assert!(o.is_trivial(&t).is_trivial());
        assert!(!is_c_prime_sixth(&GroupPresentation::new([w("g1 g2 g1 g2^-1")])));
    }

    #[test]
    fn schedule_algebra() {
        let p = GroupPresentation::new([w("g1 g2 h1"), w("h2 h2 g1^-1")]);
        let f = vec![
            Factor { conjugator: w("h1"), relator: 0, exponent: 1 },
            Factor { conjugator: w("g2^-1"), relator: 1, exponent: -1 },
        ];
        let x = schedule_product(&p, &f);
        assert!(schedule_product(&p, &invert_schedule(&f)) == x.inverse());
        let by = w("g1 h2");
        assert_eq!(schedule_product(&p, &conjugate_schedule(&f, &by)), x.conjugate(&by));
        assert!(join_schedules(&f, &invert_schedule(&f)).is_empty());
        let c = w("h2 h2 g1^-1").conjugate(&w("g2 g2"));
        let one = relator_conjugate(&p, &c).unwrap();
        assert_eq!(schedule_product(&p, &one), c);
        assert!(relator_conjugate(&p, &w("g1 g1")).is_none());
    }

    #[test]
    fn shorten_keeps_the_product() {
        let r = w("g1 g2 g1 h1 h2");
        let p = GroupPresentation::new([r]);
        let x = w("h1 g1 g2 g1 h2^-1");
        let (s, f) = shorten(&p, &x, 100);
        assert!(s.len() < x.len());
        assert_eq!(schedule_product(&p, &f).mul(&s), x);
    }
}
