//! Truncated positive cones: backtracking search over sign assignments on a
//! ball of the free group, and sign queries against the result.

mod ball;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::{Budget, Certificate, GroupPresentation, RegionLabeling, TriValue, TrivialityOracle, Word};
pub use ball::Ball;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Trivial,
    Unknown,
}

impl Sign {
    fn from_i8(s: i8) -> Sign {
        match s {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Trivial,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            s => s,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Trivial => "0",
            Sign::Unknown => "?",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("cone search exceeded {0} decisions")]
    BudgetExceeded(usize),
    #[error("constraint word `{0}` is longer than the cone depth")]
    ConstraintOutsideBall(Word),
    #[error("comparison of regions {0} and {1} is undecided at this depth")]
    UndecidedComparison(usize, usize),
}

/// Finite evidence that no cone at this depth meets the constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub depth: usize,
    pub decisions: usize,
    pub reason: String,
}

pub enum ConeSearch {
    Cone(Box<PartialLeftOrder>),
    Obstruction(Obstruction),
}

impl ConeSearch {
    pub fn cone(self) -> Option<PartialLeftOrder> {
        match self {
            ConeSearch::Cone(c) => Some(*c),
            ConeSearch::Obstruction(_) => None,
        }
    }
}

/// `g1, g2, h1, h2` all positive.
pub fn default_constraints() -> Vec<(Word, Sign)> {
    (0..4).map(|g| (Word::generator(g), Sign::Positive)).collect()
}

pub struct PartialLeftOrder {
    pub depth: usize,
    pub ball: Ball,
    /// Class representative (smallest index) of each ball element.
    class: Vec<usize>,
    /// Sign of each ball element: 1, -1, or 0 on the identity class.
    signs: Vec<i8>,
    oracle: TrivialityOracle,
    pieces: usize,
}

struct Search<'a> {
    ball: &'a Ball,
    class: Vec<usize>,
    inv: Vec<usize>,
    members: Vec<Vec<usize>>,
    sign: Vec<i8>,
    identity: usize,
    positive: Vec<usize>,
    trail: Vec<usize>,
    conflict: Option<String>,
}

impl Search<'_> {
    fn set_positive(&mut self, c: usize) -> bool {
        let mut queue = vec![c];
        while let Some(c) = queue.pop() {
            match self.sign[c] {
                1 => continue,
                -1 => {
                    self.conflict = Some(format!("{} forced both signs", self.ball.words[c]));
                    return false;
                }
                _ => {}
            }
            if c == self.identity {
                self.conflict = Some("identity forced positive".into());
                return false;
            }
            self.sign[c] = 1;
            self.sign[self.inv[c]] = -1;
            self.trail.push(c);
            self.positive.push(c);
            for k in 0..self.positive.len() {
                let d = self.positive[k];
                for &x in &self.members[c] {
                    for &y in &self.members[d] {
                        for z in [self.ball.product(x, y), self.ball.product(y, x)].into_iter().flatten() {
                            let cz = self.class[z];
                            if self.sign[cz] != 1 {
                                queue.push(cz);
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, trail_len: usize) {
        while self.trail.len() > trail_len {
            let c = self.trail.pop().unwrap();
            self.sign[c] = 0;
            self.sign[self.inv[c]] = 0;
            self.positive.pop();
        }
    }
}

/// Searches the ball of radius `depth` for the first consistent cone in
/// shortlex order, trying Positive before Negative at each class.
pub fn search_positive_cone(
    p: &GroupPresentation,
    depth: usize,
    constraints: &[(Word, Sign)],
    budget: &Budget,
) -> Result<ConeSearch, OrderError> {
    let ball = Ball::new(depth);
    let oracle = TrivialityOracle::new(p, *budget);
    for (w, _) in constraints {
        if w.len() > depth {
            return Err(OrderError::ConstraintOutsideBall(w.clone()));
        }
    }
    let extra: Vec<(Word, Word)> = constraints
        .iter()
        .filter(|(_, s)| *s == Sign::Trivial)
        .map(|(w, _)| (w.clone(), Word::identity()))
        .collect();
    let mut uf = ball.identify(&oracle, &extra);
    let n = ball.len();
    let class: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    let inv: Vec<usize> = (0..n).map(|i| class[ball.inverse(i)]).collect();
    let mut members = vec![Vec::new(); n];
    for i in 0..n {
        members[class[i]].push(i);
    }
    let identity = class[0];
    let obstruction = |decisions: usize, reason: String| {
        Ok(ConeSearch::Obstruction(Obstruction {
            depth,
            decisions,
            reason,
        }))
    };
    for c in 0..n {
        if class[c] == c && c != identity && inv[c] == c {
            return obstruction(0, format!("{} has order two", ball.words[c]));
        }
    }
    let mut s = Search {
        ball: &ball,
        class: class.clone(),
        inv,
        members,
        sign: vec![0; n],
        identity,
        positive: Vec::new(),
        trail: Vec::new(),
        conflict: None,
    };
    for (w, sg) in constraints {
        let i = ball.get(w).expect("constraint inside the ball");
        let ok = match sg {
            Sign::Positive => s.set_positive(class[i]),
            Sign::Negative => s.set_positive(s.inv[class[i]]),
            _ => true,
        };
        if !ok {
            return obstruction(0, s.conflict.take().unwrap_or_default());
        }
    }
    let order: Vec<usize> = (0..n).filter(|&c| class[c] == c && c != identity).collect();
    // (cursor into order, trail length, negative branch taken)
    let mut stack: Vec<(usize, usize, bool)> = Vec::new();
    let mut cursor = 0;
    let mut decisions = 0;
    loop {
        while cursor < order.len() && s.sign[order[cursor]] != 0 {
            cursor += 1;
        }
        if cursor == order.len() {
            break;
        }
        decisions += 1;
        if decisions > budget.cone_nodes {
            return Err(OrderError::BudgetExceeded(budget.cone_nodes));
        }
        stack.push((cursor, s.trail.len(), false));
        if s.set_positive(order[cursor]) {
            continue;
        }
        // backtrack to the deepest decision with an untried branch
        loop {
            let Some((at, trail, negative)) = stack.pop() else {
                let why = s.conflict.take().unwrap_or_default();
                return obstruction(decisions, format!("every assignment fails; last conflict: {why}"));
            };
            s.undo(trail);
            if negative {
                continue;
            }
            stack.push((at, trail, true));
            cursor = at;
            let c = order[at];
            if s.set_positive(s.inv[c]) {
                break;
            }
        }
    }
    let signs = (0..n).map(|i| s.sign[class[i]]).collect();
    drop(s);
    Ok(ConeSearch::Cone(Box::new(PartialLeftOrder {
        depth,
        ball,
        class,
        signs,
        oracle,
        pieces: 2,
    })))
}

impl PartialLeftOrder {
    pub fn presentation(&self) -> &GroupPresentation {
        &self.oracle.presentation
    }

    fn ball_sign(&self, w: &Word) -> Option<Sign> {
        self.ball.get(w).map(|i| Sign::from_i8(self.signs[i]))
    }

    // Sign shared by every factorization of w into at most `pieces` ball
    // elements of one sign (trivial pieces allowed); Unknown on a conflict.
    fn piece_sign(&self, w: &Word) -> Sign {
        let n = w.len();
        if n > self.pieces * self.depth {
            return Sign::Unknown;
        }
        const FAR: usize = usize::MAX;
        let mut found = [false; 3];
        for (slot, target) in [(0, 1i8), (1, -1)] {
            // fewest pieces reaching position i, all trivial / with a signed piece
            let mut plain = vec![FAR; n + 1];
            let mut signed = vec![FAR; n + 1];
            plain[0] = 0;
            for i in 0..n {
                if plain[i] == FAR && signed[i] == FAR {
                    continue;
                }
                for j in i + 1..=(i + self.depth).min(n) {
                    let Some(k) = self.ball.get(&w.subword(i, j)) else { continue };
                    let s = self.signs[k];
                    if s == 0 {
                        plain[j] = plain[j].min(plain[i].saturating_add(1));
                        signed[j] = signed[j].min(signed[i].saturating_add(1));
                    } else if s == target {
                        signed[j] = signed[j].min(plain[i].min(signed[i]).saturating_add(1));
                    }
                }
            }
            if signed[n] <= self.pieces {
                found[slot] = true;
            }
            if plain[n] <= self.pieces {
                found[2] = true;
            }
        }
        match found {
            [true, false, false] => Sign::Positive,
            [false, true, false] => Sign::Negative,
            [false, false, true] => Sign::Trivial,
            _ => Sign::Unknown,
        }
    }

    /// Allows sign queries to factor words into up to `pieces` ball elements.
    pub fn with_pieces(mut self, pieces: usize) -> PartialLeftOrder {
        self.pieces = pieces.max(1);
        self
    }

    pub fn pieces(&self) -> usize {
        self.pieces
    }

    /// Triviality from the oracle, falling back to the ball congruence.
    pub fn triviality(&self, w: &Word) -> TriValue {
        match self.oracle.is_trivial(w) {
            TriValue::Unknown if self.sign(w) == Sign::Trivial => {
                TriValue::Trivial(Certificate::BallCongruence { radius: self.depth })
            }
            v => v,
        }
    }

    pub fn oracle(&self) -> &TrivialityOracle {
        &self.oracle
    }

    pub fn sign(&self, w: &Word) -> Sign {
        if w.is_empty() {
            return Sign::Trivial;
        }
        if let Some(s) = self.ball_sign(w) {
            return s;
        }
        if self.oracle.decide_cheap(w).is_trivial() {
            return Sign::Trivial;
        }
        let (short, _) = self.oracle.shorten(w);
        if short.is_empty() {
            return Sign::Trivial;
        }
        if let Some(s) = self.ball_sign(&short) {
            return s;
        }
        match self.piece_sign(w) {
            Sign::Unknown => self.piece_sign(&short),
            s => s,
        }
    }

    /// Class representatives with their signs, identity excluded.
    pub fn signed_normal_forms(&self) -> Vec<(Word, Sign)> {
        (0..self.ball.len())
            .filter(|&i| self.class[i] == i && self.signs[i] != 0)
            .map(|i| (self.ball.words[i].clone(), Sign::from_i8(self.signs[i])))
            .collect()
    }

    /// Every ball element declared positive.
    pub fn positives(&self) -> Vec<Word> {
        (0..self.ball.len())
            .filter(|&i| self.signs[i] == 1)
            .map(|i| self.ball.words[i].clone())
            .collect()
    }

    /// Re-checks antisymmetry and closure over the whole ball.
    pub fn check_consistency(&self) -> Result<(), String> {
        let n = self.ball.len();
        for i in 0..n {
            let j = self.ball.inverse(i);
            if self.signs[i] != -self.signs[j] {
                return Err(format!("{} and its inverse", self.ball.words[i]));
            }
            if self.signs[i] == 0 && self.class[i] != self.class[0] {
                return Err(format!("{} left unsigned", self.ball.words[i]));
            }
        }
        let pos: Vec<usize> = (0..n).filter(|&i| self.signs[i] == 1).collect();
        for &x in &pos {
            for &y in &pos {
                if let Some(z) = self.ball.product(x, y) {
                    if self.signs[z] != 1 {
                        return Err(format!("{} · {}", self.ball.words[x], self.ball.words[y]));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The region whose label is smallest under the cone; ties go to the
/// smallest id.
pub fn minimal_region(lab: &RegionLabeling, o: &PartialLeftOrder) -> Result<usize, OrderError> {
    let cmp = |a: usize, b: usize| o.sign(&lab.labels[a].ldiv(&lab.labels[b]));
    let mut m = 0;
    for i in 1..lab.labels.len() {
        match cmp(m, i) {
            Sign::Negative => m = i,
            Sign::Unknown => return Err(OrderError::UndecidedComparison(m, i)),
            _ => {}
        }
    }
    for i in 0..lab.labels.len() {
        match cmp(m, i) {
            Sign::Positive => {}
            Sign::Trivial => {
                if i < m {
                    m = i;
                }
            }
            _ => return Err(OrderError::UndecidedComparison(m, i)),
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn free_cone(depth: usize) -> PartialLeftOrder {
        search_positive_cone(&GroupPresentation::free(), depth, &default_constraints(), &Budget::default())
            .unwrap()
            .cone()
            .unwrap()
    }

    #[test]
    fn free_cone_contains_generators() {
        let o = free_cone(2);
        for g in ["g1", "g2", "h1", "h2", "g1 g2"] {
            assert_eq!(o.sign(&w(g)), Sign::Positive, "{g}");
        }
        assert_eq!(o.sign(&Word::identity()), Sign::Trivial);
        assert_eq!(o.sign(&w("g1 g2 h1 h2")), Sign::Positive);
        assert_eq!(o.sign(&w("g1 g2 h1 h2 g1")), Sign::Unknown);
        assert_eq!(o.sign(&w("g1^-1 g2^-1 h1 h2^-1 g1 h1")), Sign::Unknown);
        o.check_consistency().unwrap();
        let o = o.with_pieces(3);
        assert_eq!(o.sign(&w("g1 g2 h1 h2 g1")), Sign::Positive);
        assert_eq!(o.sign(&w("g1^-1 h2^-1 g2^-1 h1^-1 g1^-1")), Sign::Negative);
    }

    #[test]
    fn trivial_generator_cannot_be_positive() {
        let p = GroupPresentation::new([w("g1")]);
        let r = search_positive_cone(&p, 2, &default_constraints(), &Budget::default()).unwrap();
        assert!(matches!(r, ConeSearch::Obstruction(_)));
    }

    #[test]
    fn contradictory_constraints() {
        let c = vec![(w("g1"), Sign::Positive), (w("g1"), Sign::Negative)];
        for depth in 1..=3 {
            let r = search_positive_cone(&GroupPresentation::free(), depth, &c, &Budget::default()).unwrap();
            assert!(matches!(r, ConeSearch::Obstruction(_)));
        }
    }

    #[test]
    fn torsion_is_an_obstruction() {
        let p = GroupPresentation::new([w("g1 g1 g1")]);
        let r = search_positive_cone(&p, 2, &[], &Budget::default()).unwrap();
        assert!(matches!(r, ConeSearch::Obstruction(_)));
    }

    #[test]
    fn abelian_relator_cone() {
        // g1 g2 = g2 g1: the cone must agree on both products
        let p = GroupPresentation::new([w("g1 g2 g1^-1 g2^-1")]);
        let o = search_positive_cone(&p, 3, &default_constraints(), &Budget::default())
            .unwrap()
            .cone()
            .unwrap();
        o.check_consistency().unwrap();
        assert_eq!(o.sign(&w("g1 g2 g1^-1 g2^-1")), Sign::Trivial);
        assert_eq!(o.sign(&w("g1^-1 g2^-1 g1 g2")), Sign::Trivial);
    }

    #[test]
    fn minimal_region_prefers_identity_and_small_ids() {
        let o = free_cone(2);
        let lab = RegionLabeling {
            base: 1,
            labels: vec![w("g1"), Word::identity(), w("g1 g2"), Word::identity()],
            tree: vec![None; 4],
            defects: Vec::new(),
            frame: Word::identity(),
        };
        assert_eq!(minimal_region(&lab, &o).unwrap(), 1);
    }
}
