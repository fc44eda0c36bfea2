//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines always reach the output.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use foliate::analysis::corner_report;
use foliate::branch::{
    build_branched_oriented, delete_sectors, detect_twisted_disk, replay, run_splitting, trivial_sectors,
    BranchError, BranchedSurface, SectorKind, SplitOptions, TrivialSectors,
};
use foliate::diagram::{
    band_class, band_sum, embedding, find_bigons, find_waves, minimize_path, parallel_arc_classes, parse_diagram,
    trace_faces, whitehead_graph, CurveId, Family, HeegaardDiagram, Side, WhiteheadForm,
};
use foliate::group::{presentation, rebase, region_words, Budget, GroupPresentation, RegionLabeling, Word};
use foliate::order::{
    default_constraints, minimal_region, search_positive_cone, ConeSearch, PartialLeftOrder, Sign,
};
use foliate_cli::PipelineError;

struct Entry {
    name: String,
    text: String,
    diagram: HeegaardDiagram,
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus() -> Vec<Entry> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "hd"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let diagram = parse_diagram(&text).unwrap();
            Entry {
                name: p.file_stem().unwrap().to_string_lossy().into_owned(),
                text,
                diagram,
            }
        })
        .collect()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: summary }
    } else {
        Outcome {
            pass: false,
            detail: format!("{summary}; {}", failures.join("; ")),
        }
    }
}

fn within(failures: &mut Vec<String>, what: &str, took: Duration, limit: Duration) {
    if took >= limit {
        failures.push(format!("{what} took {took:?}, limit {limit:?}"));
    }
}

fn minimized(e: &Entry) -> Option<HeegaardDiagram> {
    minimize_path(&e.diagram).ok().map(|p| p.last().unwrap().clone())
}

// ---- 1

fn euler_faces(corpus: &[Entry]) -> Outcome {
    let mut failures = Vec::new();
    let start = Instant::now();
    let mut crossings = Vec::new();
    for e in corpus {
        let d = &e.diagram;
        let faces = trace_faces(d);
        let v = d.vertex_count() as i64;
        let edges: i64 = CurveId::ALL.iter().map(|&c| d.curve(c).len() as i64).sum();
        let f = faces.len() as i64;
        let degrees: usize = faces.iter().map(|r| r.size()).sum();
        if v - edges + f != -2 || degrees != 4 * d.vertex_count() {
            failures.push(format!("{}: V-E+F = {}, degrees {degrees} vs 4V {}", e.name, v - edges + f, 4 * v));
        }
        crossings.push(d.vertex_count());
    }
    let took = start.elapsed();
    within(&mut failures, "suite", took, Duration::from_secs(1));
    let bigons = corpus.iter().filter(|e| e.name.starts_with("bigon_")).count();
    let waves = corpus.iter().filter(|e| e.name.starts_with("wave_")).count();
    if corpus.len() < 10 || bigons == 0 || waves == 0 {
        failures.push("corpus lacks size or planted variants".into());
    }
    if crossings.iter().any(|&n| !(4..=40).contains(&n)) {
        failures.push(format!("crossing counts {crossings:?} outside 4..=40"));
    }
    let (lo, hi) = (crossings.iter().min().unwrap(), crossings.iter().max().unwrap());
    outcome(
        failures,
        format!("{} diagrams ({bigons} bigon, {waves} wave), {lo}-{hi} crossings, {took:?}", corpus.len()),
    )
}

// ---- 2

fn wave_descent(corpus: &[Entry]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for e in corpus.iter().filter(|e| e.name.starts_with("wave_")) {
        let Some(target) = e.text.lines().find_map(|l| l.strip_prefix("# reduces to ")) else {
            failures.push(format!("{}: no hand-reduced oracle named", e.name));
            continue;
        };
        let oracle = corpus.iter().find(|x| x.name == target.trim()).map(|x| &x.diagram);
        let Some(oracle) = oracle else {
            failures.push(format!("{}: oracle {target} missing", e.name));
            continue;
        };
        let path = match minimize_path(&e.diagram) {
            Ok(p) => p,
            Err(err) => {
                failures.push(format!("{}: {err}", e.name));
                continue;
            }
        };
        let end = path.last().unwrap();
        let c3: Vec<usize> = path.iter().map(|d| d.vertex_count()).collect();
        if path.len() < 2 || c3.windows(2).any(|w| w[1] >= w[0]) {
            failures.push(format!("{}: c3 path {c3:?}", e.name));
        }
        if !find_waves(end, Family::U).unwrap().is_empty() || !find_waves(end, Family::V).unwrap().is_empty() {
            failures.push(format!("{}: waves remain", e.name));
        }
        let sizes = |d: &HeegaardDiagram| {
            let mut s: Vec<usize> = trace_faces(d).iter().map(|r| r.size()).collect();
            s.sort();
            s
        };
        let pairs = |d: &HeegaardDiagram| {
            let mut m = [0; 4];
            for (k, (v, u)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                m[k] = d.pair_count(CurveId::new(Family::V, v), CurveId::new(Family::U, u));
            }
            m
        };
        if end.vertex_count() != oracle.vertex_count()
            || sizes(end) != sizes(oracle)
            || pairs(end) != pairs(oracle)
            || presentation(end).homology() != presentation(oracle).homology()
        {
            failures.push(format!("{}: end differs from {target}", e.name));
        }
        checked += 1;
    }
    if checked < 3 {
        failures.push(format!("only {checked} instances"));
    }
    outcome(failures, format!("{checked} planted-wave diagrams reduce to their oracles"))
}

// ---- 3

fn rank(c: CurveId, side: Side) -> usize {
    2 * c.index() + usize::from(side == Side::Minus)
}

/// Arc endpoint sides read off the faces: the cut-family edges next to an arc
/// in a face cycle lie on the side of the cut curve that the arc leaves from.
fn face_tally(d: &HeegaardDiagram, cut: Family) -> Result<BTreeMap<(usize, usize), usize>, String> {
    let mut ends: BTreeMap<(CurveId, u32), [Option<usize>; 2]> = BTreeMap::new();
    for f in trace_faces(d) {
        let k = f.size();
        for i in 0..k {
            let e = f.edge_cycle[i];
            if e.curve.family() == cut {
                continue;
            }
            let prev = f.edge_cycle[(i + k - 1) % k];
            let next = f.edge_cycle[(i + 1) % k];
            let at_from = rank(prev.curve, prev.side);
            let at_to = rank(next.curve, next.side);
            let (s, t) = if e.forward { (at_from, at_to) } else { (at_to, at_from) };
            let slot = ends.entry((e.curve, e.arc)).or_default();
            for (j, r) in [s, t].into_iter().enumerate() {
                match slot[j] {
                    None => slot[j] = Some(r),
                    Some(old) if old != r => return Err(format!("{}:{} sides disagree", e.curve.name(), e.arc)),
                    _ => {}
                }
            }
        }
    }
    let mut tally = BTreeMap::new();
    for [a, b] in ends.values() {
        let (a, b) = (a.unwrap(), b.unwrap());
        *tally.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    Ok(tally)
}

fn whitehead_forms(corpus: &[Entry]) -> Outcome {
    let mut failures = Vec::new();
    let mut forms = BTreeMap::new();
    let mut skipped = 0;
    let start = Instant::now();
    let minimized: Vec<(&str, HeegaardDiagram)> =
        corpus.iter().filter_map(|e| minimized(e).map(|d| (e.name.as_str(), d))).collect();
    for (name, d) in &minimized {
        for cut in [Family::U, Family::V] {
            let g = whitehead_graph(d, cut);
            if g.form == WhiteheadForm::Unrecognized {
                failures.push(format!("{name} cut {cut:?} unrecognized"));
            }
            *forms.entry(format!("{:?}", g.form)).or_insert(0) += 1;
            let nonzero: BTreeMap<_, _> = g.multiplicities.iter().filter(|(_, &m)| m > 0).map(|(&k, &m)| (k, m)).collect();
            match face_tally(d, cut) {
                Ok(t) if t == nonzero => {}
                Ok(t) => failures.push(format!("{name} cut {cut:?}: tally {t:?} vs {nonzero:?}")),
                Err(err) => failures.push(format!("{name}: {err}")),
            }
        }
    }
    skipped += corpus.len() - minimized.len();
    let took = start.elapsed();
    within(&mut failures, "classification", took, Duration::from_secs(1));
    outcome(
        failures,
        format!("{} minimized diagrams, forms {forms:?}, {skipped} not tight, {took:?}", minimized.len()),
    )
}

// ---- 4

fn band_sums(corpus: &[Entry]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let start = Instant::now();
    for e in corpus {
        let Some(d) = minimized(e) else { continue };
        let classes = match parallel_arc_classes(&d, Family::U) {
            Ok(c) => c,
            Err(err) => {
                failures.push(format!("{}: {err}", e.name));
                continue;
            }
        };
        let Ok(rect) = band_class(&classes) else { continue };
        match band_sum(&d, rect) {
            Ok(bs) => {
                for nd in [&bs.with_u1, &bs.with_u2] {
                    if !find_bigons(nd).is_empty() {
                        failures.push(format!("{}: bigon after band sum", e.name));
                    } else if !find_waves(nd, Family::U).unwrap().is_empty() {
                        failures.push(format!("{}: wave after band sum", e.name));
                    }
                    if nd.euler_characteristic() != -2 {
                        failures.push(format!("{}: band sum is not genus two", e.name));
                    }
                }
                checked += 1;
            }
            Err(err) => failures.push(format!("{}: {err}", e.name)),
        }
    }
    let took = start.elapsed();
    within(&mut failures, "band sums", took, Duration::from_secs(1));
    if checked == 0 {
        failures.push("no diagram has a band class".into());
    }
    outcome(failures, format!("{checked} band sums bigon- and wave-free, {took:?}"))
}

// ---- 5

fn crossing_rule(e: &foliate::diagram::BoundaryEdge, from: &Word) -> Word {
    let j = e.curve.index();
    let g = |i: usize, neg: bool| {
        let w = Word::generator(i);
        if neg {
            w.inverse()
        } else {
            w
        }
    };
    match (e.curve.family(), e.side) {
        (Family::U, Side::Minus) => from.mul(&g(j, false)),
        (Family::U, Side::Plus) => from.mul(&g(j, true)),
        (Family::V, Side::Plus) => g(2 + j, false).mul(from),
        (Family::V, Side::Minus) => g(2 + j, true).mul(from),
    }
}

fn check_labeling(d: &HeegaardDiagram, lab: &RegionLabeling) -> Result<(usize, usize), String> {
    let emb = embedding(d);
    let mut tree_edges = 0;
    let mut defects = Vec::new();
    for f in 0..emb.faces.len() {
        for pos in 0..emb.faces[f].size() {
            let (g, gpos) = emb.across(f, pos);
            let expected = crossing_rule(&emb.faces[f].edge_cycle[pos], &lab.labels[f]);
            if lab.tree[g] == Some((f, pos)) {
                tree_edges += 1;
                if lab.labels[g] != expected {
                    return Err(format!("tree edge into face {g} breaks the crossing rule"));
                }
            } else if lab.tree[f] != Some((g, gpos)) {
                let w = lab.labels[g].inverse().mul(&expected).cyclically_reduced();
                if !w.is_empty() {
                    defects.push(w);
                }
            }
        }
    }
    if tree_edges + 1 != emb.faces.len() {
        return Err(format!("{tree_edges} tree edges for {} faces", emb.faces.len()));
    }
    let mut recorded = lab.defects.clone();
    recorded.sort_by(|a, b| a.shortlex_cmp(b));
    defects.sort_by(|a, b| a.shortlex_cmp(b));
    if recorded != defects {
        return Err("recorded closure defects differ from the recomputed ones".into());
    }
    Ok((tree_edges, defects.len()))
}

fn labeling(corpus: &[Entry]) -> Outcome {
    let mut failures = Vec::new();
    let (mut tree, mut defects, mut comparisons) = (0, 0, 0);
    for e in corpus {
        let d = &e.diagram;
        let lab = match region_words(d, 0) {
            Ok(l) => l,
            Err(err) => {
                failures.push(format!("{}: {err}", e.name));
                continue;
            }
        };
        match check_labeling(d, &lab) {
            Ok((t, k)) => {
                tree += t;
                defects += k;
            }
            Err(err) => failures.push(format!("{}: {err}", e.name)),
        }
        let n = lab.labels.len();
        for base in 0..n {
            let moved = rebase(&lab, base).unwrap();
            for i in 0..n {
                for j in 0..n {
                    comparisons += 1;
                    if moved.labels[i].inverse().mul(&moved.labels[j]) != lab.labels[i].inverse().mul(&lab.labels[j]) {
                        failures.push(format!("{}: rebase to {base} changes comparison ({i}, {j})", e.name));
                    }
                }
            }
        }
    }
    failures.truncate(5);
    outcome(
        failures,
        format!("{tree} tree edges obey the rule, {defects} defects recorded, {comparisons} rebase comparisons equal"),
    )
}

// ---- shared preparation for 6, 7, 8, 10

struct Prepared {
    name: String,
    order: PartialLeftOrder,
    base: usize,
    b: BranchedSurface,
    trivial: TrivialSectors,
    b0: BranchedSurface,
}

fn cone(p: &GroupPresentation, depth: usize) -> Option<PartialLeftOrder> {
    let budget = Budget::default();
    let found = match search_positive_cone(p, depth, &default_constraints(), &budget).ok()? {
        ConeSearch::Cone(o) => Some(*o),
        ConeSearch::Obstruction(_) => None,
    };
    found
        .or_else(|| search_positive_cone(p, depth, &[(Word::generator(0), Sign::Positive)], &budget).ok()?.cone())
        .map(|o| o.with_pieces(2))
}

/// Diagram through trivial-sector deletion at the CLI defaults, or the reason
/// it stops earlier.
fn prepare(e: &Entry) -> Result<Prepared, String> {
    let d = minimized(e).ok_or("not tight")?;
    let p = presentation(&d);
    let lab0 = region_words(&d, 0).map_err(|x| x.to_string())?;
    let mut chosen = None;
    for depth in 4..=5 {
        let o = cone(&p, depth).ok_or("no truncated cone")?;
        if let Ok(m) = minimal_region(&lab0, &o) {
            chosen = Some((o, m));
            break;
        }
    }
    let (order, base) = chosen.ok_or("minimal region undecided")?;
    let lab = rebase(&lab0, base).map_err(|x| x.to_string())?;
    let flips = std::array::from_fn(|s| {
        let g = Word::generator(s);
        let g = if s < 2 { g } else { g.conjugate(&lab.frame) };
        order.sign(&g) == Sign::Negative
    });
    let b = build_branched_oriented(&d, &lab, flips).map_err(|x| x.to_string())?;
    let triv = |w: &Word| order.triviality(w);
    let trivial = trivial_sectors(&b, &triv).map_err(|x| x.to_string())?;
    if !trivial.ids.contains(&base) {
        return Err("minimal region not certified trivial".into());
    }
    let b0 = delete_sectors(&b, &trivial.ids, &triv).map_err(|x| x.to_string())?;
    Ok(Prepared {
        name: e.name.clone(),
        order,
        base,
        b,
        trivial,
        b0,
    })
}

// ---- 6

fn trivial_sectors_check(prepared: &[Prepared], skipped: &[(String, String)]) -> Outcome {
    let mut failures = Vec::new();
    let mut certified = 0;
    for p in prepared {
        for s in p.b.alive_sectors().filter(|s| matches!(s.kind, SectorKind::HeegaardSector(_))) {
            let is_trivial = p.order.triviality(&s.word).is_trivial();
            if is_trivial != p.trivial.ids.contains(&s.id) {
                failures.push(format!("{}: sector {} certification mismatch", p.name, s.id));
            }
            if !is_trivial {
                continue;
            }
            certified += 1;
            let inc = p.b.incident(s.id);
            let curves: BTreeSet<CurveId> = inc.iter().filter_map(|&k| p.b.cusps[k].arc.map(|a| a.0)).collect();
            if inc.len() != 4 || curves.len() != 4 {
                failures.push(format!("{}: sector {} is not a quadrilateral on four curves", p.name, s.id));
            }
            if inc.iter().any(|&k| p.b.cusps[k].q == s.id) {
                failures.push(format!("{}: sector {} has an inward cusp", p.name, s.id));
            }
        }
        if !p.trivial.ids.contains(&p.base) {
            failures.push(format!("{}: base region not trivial", p.name));
        }
    }
    let code = PipelineError::from(BranchError::SourceViolation { sector: 0, cusp: 0 }).exit_code();
    let quad = PipelineError::from(BranchError::QuadViolation { sector: 0, edges: vec![] }).exit_code();
    if code != 2 || quad != 2 {
        failures.push(format!("violations exit with {code}/{quad}"));
    }
    outcome(
        failures,
        format!("{certified} trivial sectors over {} diagrams, zero violations, {} skipped", prepared.len(), skipped.len()),
    )
}

// ---- 7 and 10

const STEPS: usize = 10_000;

fn splitting(prepared: &[Prepared], skipped: &[(String, String)]) -> (Outcome, Vec<String>) {
    let mut failures = Vec::new();
    let mut replay_failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut events = 0;
    for p in prepared {
        let start = Instant::now();
        let opts = SplitOptions {
            steps: STEPS,
            seed: 0,
            full_check_every: 1,
        };
        let (end, trace) = match run_splitting(&p.b0, &p.order, opts) {
            Ok(x) => x,
            Err(err) => {
                failures.push(format!("{}: {err}", p.name));
                continue;
            }
        };
        if trace.events.len() < STEPS {
            failures.push(format!("{}: {} events", p.name, trace.events.len()));
        }
        if let Some(h) = &trace.halted {
            failures.push(format!("{}: halted {h:?}", p.name));
        }
        if let Err(err) = end.check_all_cusps() {
            failures.push(format!("{}: {err}", p.name));
        }
        if let Err(err) = detect_twisted_disk(&end, &p.order) {
            failures.push(format!("{}: {err}", p.name));
        }
        let took = start.elapsed();
        slowest = slowest.max(took);
        within(&mut failures, &p.name, took, Duration::from_secs(60));
        events += trace.events.len();
        match replay(&p.b0, &trace, &p.order) {
            Ok(digest) if digest == trace.final_digest => {}
            Ok(_) => replay_failures.push(format!("{}: replay digest differs", p.name)),
            Err(err) => replay_failures.push(format!("{}: {err}", p.name)),
        }
    }
    if prepared.is_empty() {
        failures.push("no diagram reaches splitting".into());
    }
    let names: Vec<String> = skipped.iter().map(|(n, why)| format!("{n} ({why})")).collect();
    (
        outcome(
            failures,
            format!(
                "{events} steps over {} diagrams, every cusp checked each step, slowest {slowest:?}; skipped {}",
                prepared.len(),
                names.join(", ")
            ),
        ),
        replay_failures,
    )
}

// ---- 8

fn corners_of(b: &BranchedSurface, s: usize) -> BTreeSet<u32> {
    b.incident(s)
        .into_iter()
        .flat_map(|k| {
            let (c, a) = b.cusps[k].arc.unwrap();
            let v = b.curve(c);
            [v[a as usize], v[(a as usize + 1) % v.len()]]
        })
        .collect()
}

fn check_corners(b: &BranchedSurface, deleted: usize) -> Result<(), String> {
    let total = b.total_corners();
    if total != 4 * deleted {
        return Err(format!("{total} corners after deleting {deleted}"));
    }
    if let Some(l) = b.locus.iter().find(|l| l.corners() % 2 == 1 || l.corners() < 2) {
        return Err(format!("a component has {} corners", l.corners()));
    }
    Ok(())
}

fn corner_accounting(prepared: &[Prepared]) -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for p in prepared {
        // the pipeline deletion, through the report
        match corner_report(&p.b0) {
            Ok(r) if r.total == 4 * (r.m + 1) => {}
            Ok(r) => failures.push(format!("{}: {} corners for m = {}", p.name, r.total, r.m)),
            Err(err) => failures.push(format!("{}: {err}", p.name)),
        }
        if let Err(err) = check_corners(&p.b0, p.trivial.ids.len()) {
            failures.push(format!("{}: {err}", p.name));
        }
        runs += 1;
        // larger m: greedy vertex-disjoint quadrilaterals removed by hand
        let quads: Vec<usize> = p
            .b
            .alive_sectors()
            .filter(|s| matches!(s.kind, SectorKind::HeegaardSector(_)))
            .map(|s| s.id)
            .filter(|&s| {
                let inc = p.b.incident(s);
                let curves: BTreeSet<CurveId> = inc.iter().map(|&k| p.b.cusps[k].arc.unwrap().0).collect();
                inc.len() == 4 && curves.len() == 4
            })
            .collect();
        let mut chosen: Vec<usize> = Vec::new();
        let mut used = BTreeSet::new();
        for q in quads {
            let c = corners_of(&p.b, q);
            if !c.is_disjoint(&used) {
                continue;
            }
            used.extend(c);
            chosen.push(q);
            let mut cut = p.b.clone();
            for &s in &chosen {
                for k in cut.incident(s) {
                    cut.cusps[k].alive = false;
                }
            }
            match cut.walk_locus() {
                Ok(l) => {
                    cut.locus = l;
                    if let Err(err) = check_corners(&cut, chosen.len()) {
                        failures.push(format!("{} m = {}: {err}", p.name, chosen.len() - 1));
                    }
                }
                Err(err) => failures.push(format!("{}: {err}", p.name)),
            }
            runs += 1;
        }
    }
    outcome(failures, format!("{runs} deletions, totals 4(m+1), component counts even and at least 2"))
}

// ---- 9

/// Reduced words of length at most `radius` in shortlex order, letters as
/// `2 * generator + (exponent < 0)`.
fn free_ball(radius: usize) -> Vec<Vec<u8>> {
    let mut all = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..8u8 {
                if w.last() != Some(&(l ^ 1)) {
                    let mut x: Vec<u8> = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn reduce(mut w: Vec<u8>) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::new();
    for l in w.drain(..) {
        if out.last() == Some(&(l ^ 1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn inverse(w: &[u8]) -> Vec<u8> {
    w.iter().rev().map(|l| l ^ 1).collect()
}

/// Naive depth-first search over sign assignments in ball order, positive
/// first, rejecting a partial assignment as soon as two positives multiply to
/// a negative inside the ball.
fn brute_force_cone(radius: usize, constraints: &[(Vec<u8>, bool)]) -> Option<BTreeSet<Vec<u8>>> {
    let ball = free_ball(radius);
    let index: BTreeMap<Vec<u8>, usize> = ball.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let inv: Vec<usize> = ball.iter().map(|w| index[&inverse(w)]).collect();
    let prod = |x: usize, y: usize| {
        let mut w = ball[x].clone();
        w.extend(&ball[y]);
        index.get(&reduce(w)).copied()
    };
    let consistent = |signs: &[i8]| {
        let pos: Vec<usize> = (1..ball.len()).filter(|&i| signs[i] == 1).collect();
        pos.iter().all(|&x| pos.iter().all(|&y| prod(x, y).is_none_or(|z| signs[z] != -1 && z != 0)))
    };
    let set = |signs: &mut Vec<i8>, i: usize, positive: bool| -> bool {
        let (p, n) = if positive { (i, inv[i]) } else { (inv[i], i) };
        if signs[p] == -1 || signs[n] == 1 {
            return false;
        }
        signs[p] = 1;
        signs[n] = -1;
        true
    };
    let mut signs = vec![0i8; ball.len()];
    for (w, positive) in constraints {
        if !set(&mut signs, index[w], *positive) || !consistent(&signs) {
            return None;
        }
    }
    fn dfs(
        at: usize,
        signs: &mut Vec<i8>,
        n: usize,
        set: &dyn Fn(&mut Vec<i8>, usize, bool) -> bool,
        consistent: &dyn Fn(&[i8]) -> bool,
    ) -> bool {
        let Some(i) = (at..n).find(|&i| signs[i] == 0) else {
            return true;
        };
        for positive in [true, false] {
            let saved = signs.clone();
            if set(signs, i, positive) && consistent(signs) && dfs(i + 1, signs, n, set, consistent) {
                return true;
            }
            *signs = saved;
        }
        false
    }
    dfs(1, &mut signs, ball.len(), &set, &consistent).then(|| {
        (0..ball.len()).filter(|&i| signs[i] == 1).map(|i| ball[i].clone()).collect()
    })
}

fn to_letters(w: &Word) -> Vec<u8> {
    w.letters().iter().map(|l| l.0).collect()
}

fn cone_engine() -> Outcome {
    let mut failures = Vec::new();
    let free = GroupPresentation::free();
    let budget = Budget::default();
    let parse = |s: &str| -> Word { s.parse().unwrap() };
    let cases: Vec<Vec<(Word, Sign)>> = vec![
        vec![],
        default_constraints(),
        vec![(parse("h1"), Sign::Negative), (parse("g1 g2^-1"), Sign::Positive)],
        vec![(parse("g2 h2"), Sign::Negative), (parse("h1^-1"), Sign::Positive)],
    ];
    for c in &cases {
        let oracle_in: Vec<(Vec<u8>, bool)> = c.iter().map(|(w, s)| (to_letters(w), *s == Sign::Positive)).collect();
        let expected = brute_force_cone(2, &oracle_in);
        let got = match search_positive_cone(&free, 2, c, &budget) {
            Ok(ConeSearch::Cone(o)) => Some(o.positives().iter().map(to_letters).collect::<BTreeSet<_>>()),
            Ok(ConeSearch::Obstruction(_)) => None,
            Err(err) => {
                failures.push(err.to_string());
                continue;
            }
        };
        if got != expected {
            failures.push(format!("constraints {c:?} disagree with the oracle"));
        }
    }
    let contradictions = [
        vec![(parse("g1"), Sign::Positive), (parse("g1^-1"), Sign::Positive)],
        vec![(parse("g1"), Sign::Positive), (parse("g2"), Sign::Positive), (parse("g1 g2"), Sign::Negative)],
    ];
    let mut slowest = Duration::ZERO;
    for c in &contradictions {
        let start = Instant::now();
        let found = search_positive_cone(&free, 2, c, &budget);
        let took = start.elapsed();
        slowest = slowest.max(took);
        if !matches!(found, Ok(ConeSearch::Obstruction(_))) {
            failures.push(format!("{c:?} gives no obstruction"));
        }
        within(&mut failures, "obstruction", took, Duration::from_millis(100));
        let oracle_in: Vec<(Vec<u8>, bool)> = c.iter().map(|(w, s)| (to_letters(w), *s == Sign::Positive)).collect();
        if brute_force_cone(2, &oracle_in).is_some() {
            failures.push(format!("oracle finds a cone for {c:?}"));
        }
    }
    outcome(
        failures,
        format!("{} constraint sets match the oracle on {} elements, obstructions in {slowest:?}", cases.len(), free_ball(2).len()),
    )
}

// ---- 10

fn strip_timestamp(s: &str) -> String {
    s.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

fn determinism(prepared: &[Prepared], replay_failures: Vec<String>) -> Outcome {
    let mut failures = replay_failures;
    let bin = env!("CARGO_BIN_EXE_foliate");
    let files: Vec<String> = prepared.iter().take(2).map(|p| p.name.clone()).chain(["eight".to_string()]).collect();
    for name in &files {
        let path = corpus_dir().join(format!("{name}.hd"));
        let runs: Vec<String> = (0..3)
            .map(|_| {
                let out = Command::new(bin)
                    .args(["report", "--json", "--steps", "2000"])
                    .arg(&path)
                    .output()
                    .expect("run foliate");
                strip_timestamp(&String::from_utf8_lossy(&out.stdout))
            })
            .collect();
        if runs.iter().any(|r| r != &runs[0] || r.is_empty()) {
            failures.push(format!("{name}: report differs between runs"));
        }
    }
    outcome(
        failures,
        format!("{} traces replay to their digests, report --json stable on {files:?}", prepared.len()),
    )
}

fn main() {
    let corpus = corpus();
    let mut prepared = Vec::new();
    let mut skipped = Vec::new();
    for e in corpus.iter().filter(|e| !e.name.starts_with("bigon_") && !e.name.starts_with("wave_")) {
        match prepare(e) {
            Ok(p) => prepared.push(p),
            Err(why) => skipped.push((e.name.clone(), why)),
        }
    }
    let (split, replay_failures) = splitting(&prepared, &skipped);
    let results = [
        ("Euler/face suite", euler_faces(&corpus)),
        ("wave-move descent", wave_descent(&corpus)),
        ("Whitehead classification", whitehead_forms(&corpus)),
        ("band-sum contract", band_sums(&corpus)),
        ("labeling soundness", labeling(&corpus)),
        ("trivial-sector shape", trivial_sectors_check(&prepared, &skipped)),
        ("cusp-relation conservation", split),
        ("corner accounting", corner_accounting(&prepared)),
        ("cone engine", cone_engine()),
        ("replay determinism", determinism(&prepared, replay_failures)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
