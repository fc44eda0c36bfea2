//! Splitting at pairs of cusps that enter the same sector.
//!
//! With cusps `(a, e, b)` and `(c, e, d)` written as `(P, Q, R)` we have
//! `ab = e = cd` and `δ = a^-1 c = b d^-1`. A positive `δ` adds a sector `δ`
//! with cusps `(a, c, δ)` and `(δ, b, d)`; a negative one adds `δ^-1` with
//! cusps `(c, a, δ^-1)` and `(δ^-1, d, b)`; a trivial one joins the sheets
//! and adds nothing. The original cusp arcs survive outside the split strip.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::contact::check_new_sector;
use super::{BranchError, BranchedSurface, Cusp, Sector, SectorKind};
use crate::group::{conjugate_schedule, invert_schedule, join_schedules, schedule_product, Word};
use crate::order::{PartialLeftOrder, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub first: usize,
    pub second: usize,
}

impl Site {
    pub fn new(a: usize, b: usize) -> Site {
        Site {
            first: a.min(b),
            second: a.max(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitEvent {
    pub step: usize,
    pub site: Site,
    pub split_type: u8,
    pub delta: Option<Word>,
    /// New sector and cusps, for types 1 and 3.
    pub sector: Option<usize>,
    pub cusps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HaltReason {
    /// No cusps remain: B carries a closed surface.
    ClosedSurfaceCarried,
    /// Every remaining site was split or left undecided.
    NoSplittableSite { undecided: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTrace {
    pub initial_digest: String,
    pub events: Vec<SplitEvent>,
    pub final_digest: String,
    pub halted: Option<HaltReason>,
    /// Sites skipped because their sign was undecided.
    pub undecided: usize,
    /// Sites skipped because the two readings of δ got opposite signs.
    pub conflicts: usize,
    /// New sectors checked for positivity.
    pub positivity_checks: usize,
    /// Longest sector word at the end of the run.
    pub max_word: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitOptions {
    pub steps: usize,
    pub seed: u64,
    /// Re-verify every live cusp certificate at this step interval; 0 only at the end.
    pub full_check_every: usize,
}

impl Default for SplitOptions {
    fn default() -> SplitOptions {
        SplitOptions {
            steps: 10_000,
            seed: 0,
            full_check_every: 0,
        }
    }
}

// Sign of δ from its readings a^-1 c and b d^-1 and their inverses; any
// disagreement among the decided readings is a conflict.
fn decide(o: &PartialLeftOrder, delta: &Word, dual: &Word) -> Result<Sign, BranchError> {
    let reads = [
        o.sign(delta),
        o.sign(dual),
        o.sign(&delta.inverse()).flip(),
        o.sign(&dual.inverse()).flip(),
    ];
    let mut decided = reads.iter().copied().filter(|&s| s != Sign::Unknown);
    let Some(first) = decided.next() else {
        return Err(BranchError::UndecidedSign(delta.to_string()));
    };
    if decided.any(|s| s != first) {
        return Err(BranchError::SignConflict(format!("{delta} / {dual} read {reads:?}")));
    }
    Ok(first)
}

impl BranchedSurface {
    /// Splits in place. The forced type is used on replay.
    pub(crate) fn apply_split(
        &mut self,
        site: Site,
        o: &PartialLeftOrder,
        step: usize,
        forced: Option<u8>,
    ) -> Result<SplitEvent, BranchError> {
        let (i, j) = (site.first, site.second);
        let live = |k: usize| self.cusps.get(k).filter(|c| c.alive).cloned().ok_or(BranchError::Unknown(k));
        let (k1, k2) = (live(i)?, live(j)?);
        if i == j || k1.q != k2.q {
            return Err(BranchError::Unknown(j));
        }
        let p = self.presentation.clone();
        let (a, b, c, d) = (
            self.word(k1.p).clone(),
            self.word(k1.r).clone(),
            self.word(k2.p).clone(),
            self.word(k2.r).clone(),
        );
        let delta = a.ldiv(&c);
        let dual = b.mul(&d.inverse());
        let dual_cert = conjugate_schedule(&join_schedules(&invert_schedule(&k2.cert), &k1.cert), &d);
        if schedule_product(&p, &dual_cert) != delta.inverse().mul(&dual) {
            return Err(BranchError::CuspRelationViolation {
                cusp: j,
                residue: format!("{delta} against {dual}"),
            });
        }
        let sign = match forced {
            Some(1) => Sign::Positive,
            Some(2) => Sign::Trivial,
            Some(3) => Sign::Negative,
            _ => decide(o, &delta, &dual)?,
        };
        self.split_sites.insert((i, j));
        let mut event = SplitEvent {
            step,
            site,
            split_type: 2,
            delta: None,
            sector: None,
            cusps: Vec::new(),
        };
        let (word, first, second) = match sign {
            Sign::Positive => {
                event.split_type = 1;
                let x = join_schedules(&invert_schedule(&k1.cert), &k2.cert);
                (delta.clone(), (k1.p, k2.p), (k1.r, k2.r, x))
            }
            Sign::Negative => {
                event.split_type = 3;
                let x = join_schedules(&invert_schedule(&k2.cert), &k1.cert);
                (delta.inverse(), (k2.p, k1.p), (k2.r, k1.r, x))
            }
            _ => return Ok(event),
        };
        event.delta = Some(delta);
        let n = self.sectors.len();
        self.sectors.push(Sector {
            id: n,
            kind: SectorKind::SplitSector,
            word,
            alive: true,
            members: vec![n],
        });
        // (x, y, δ) with y = x δ, then (δ, z, w) with z = δ w
        let (x, y) = first;
        let (z, w, cert) = second;
        for (pp, qq, rr, cert, comp) in [(x, y, n, Vec::new(), k1.component), (n, z, w, cert, k2.component)] {
            let id = self.cusps.len();
            self.cusps.push(Cusp {
                id,
                component: comp,
                p: pp,
                q: qq,
                r: rr,
                arc: None,
                alive: true,
                cert,
            });
            self.check_cusp(id)?;
            event.cusps.push(id);
        }
        event.sector = Some(n);
        Ok(event)
    }
}

/// One split at `site`, returning the new surface.
pub fn split_step(
    b: &BranchedSurface,
    site: Site,
    o: &PartialLeftOrder,
) -> Result<(BranchedSurface, SplitEvent), BranchError> {
    let mut out = b.clone();
    let e = out.apply_split(site, o, 0, None)?;
    if let Some(s) = e.sector {
        check_new_sector(&out, s, o)?;
    }
    Ok((out, e))
}

// Pairs (i, j), i < j, of a growing list in the order (0,1), (0,2), (1,2), (0,3), ...
#[derive(Clone, Copy, Default)]
struct PairCursor {
    i: usize,
    j: usize,
}

impl PairCursor {
    fn next(&mut self, len: usize) -> Option<(usize, usize)> {
        if self.j == 0 {
            self.j = 1;
        }
        if self.j >= len {
            return None;
        }
        let out = (self.i, self.j);
        self.i += 1;
        if self.i == self.j {
            self.i = 0;
            self.j += 1;
        }
        Some(out)
    }
}

/// Round-robin splitting: each round visits the sectors in a seeded random
/// order and splits the next untried pair of cusps entering each one.
pub fn run_splitting(
    b: &BranchedSurface,
    o: &PartialLeftOrder,
    opts: SplitOptions,
) -> Result<(BranchedSurface, SplitTrace), BranchError> {
    let mut s = b.clone();
    let mut trace = SplitTrace {
        initial_digest: s.digest(),
        events: Vec::new(),
        final_digest: String::new(),
        halted: None,
        undecided: 0,
        conflicts: 0,
        positivity_checks: 0,
        max_word: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); s.sectors.len()];
    for c in s.alive_cusps() {
        incoming[c.q].push(c.id);
    }
    let mut cursors = vec![PairCursor::default(); s.sectors.len()];
    'run: while trace.events.len() < opts.steps {
        if s.cusp_count() == 0 {
            trace.halted = Some(HaltReason::ClosedSurfaceCarried);
            break;
        }
        let mut order: Vec<usize> = (0..s.sectors.len()).filter(|&x| s.sectors[x].alive).collect();
        order.shuffle(&mut rng);
        let mut progressed = false;
        for x in order {
            let site = loop {
                let Some((i, j)) = cursors[x].next(incoming[x].len()) else { break None };
                let site = Site::new(incoming[x][i], incoming[x][j]);
                if !s.split_sites.contains(&(site.first, site.second)) {
                    break Some(site);
                }
            };
            let Some(site) = site else { continue };
            let step = trace.events.len();
            match s.apply_split(site, o, step, None) {
                Ok(e) => {
                    if let Some(n) = e.sector {
                        check_new_sector(&s, n, o)?;
                        trace.positivity_checks += 1;
                        incoming.push(Vec::new());
                        cursors.push(PairCursor::default());
                        for &k in &e.cusps {
                            incoming[s.cusps[k].q].push(k);
                        }
                    }
                    trace.events.push(e);
                    progressed = true;
                    if opts.full_check_every > 0 && trace.events.len() % opts.full_check_every == 0 {
                        s.check_all_cusps()?;
                    }
                    if trace.events.len() >= opts.steps {
                        break 'run;
                    }
                }
                Err(BranchError::UndecidedSign(_)) => {
                    trace.undecided += 1;
                    progressed = true;
                }
                Err(BranchError::SignConflict(_)) => {
                    trace.conflicts += 1;
                    progressed = true;
                }
                Err(e) => return Err(e),
            }
        }
        if !progressed {
            trace.halted = Some(HaltReason::NoSplittableSite {
                undecided: trace.undecided,
            });
            break;
        }
    }
    s.check_all_cusps()?;
    trace.final_digest = s.digest();
    trace.max_word = s.alive_sectors().map(|x| x.word.len()).max().unwrap_or(0);
    Ok((s, trace))
}

/// Re-applies the recorded events and returns the resulting digest.
pub fn replay(b: &BranchedSurface, trace: &SplitTrace, o: &PartialLeftOrder) -> Result<String, BranchError> {
    let mut s = b.clone();
    if s.digest() != trace.initial_digest {
        return Err(BranchError::ReplayMismatch("initial digest differs".into()));
    }
    for e in &trace.events {
        let r = s.apply_split(e.site, o, e.step, Some(e.split_type))?;
        if r != *e {
            return Err(BranchError::ReplayMismatch(format!("step {} replays differently", e.step)));
        }
    }
    Ok(s.digest())
}
