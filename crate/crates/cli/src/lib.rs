//! Staged pipeline behind the `foliate` command and its JSON report.

mod report;

use std::fmt::Write as _;

use foliate::analysis::{
    contact_bound_check, corner_report, outermost_count_check, shadow_arcs, AnalysisError,
};
use foliate::branch::{
    build_branched_oriented, check_product_complement, delete_sectors, detect_disks_of_contact, detect_twisted_disk,
    replay, run_splitting, trivial_sectors, BranchError, BranchedSurface, HaltReason, SplitOptions, SplitTrace,
};
use foliate::diagram::{
    band_class, band_sum, complexity, find_bigons, find_waves, minimize_path, parallel_arc_classes, parse_diagram,
    trace_faces, whitehead_graph, CurveId, DiagramError, Family, HeegaardDiagram, WhiteheadForm,
};
use foliate::group::{presentation, rebase, region_words, Budget, GroupError, GroupPresentation, Word};
use foliate::order::{
    default_constraints, minimal_region, search_positive_cone, ConeSearch, OrderError, PartialLeftOrder, Sign,
};
use serde::{Deserialize, Serialize};

pub use report::*;

/// How far a command runs the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    Validate,
    Reduce,
    Whitehead,
    Pi1,
    Order,
    Branch,
    Split,
    Report,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    pub cone_depth: usize,
    /// Extra cone depth tried when the minimal region is undecided.
    pub deepen: usize,
    pub pieces: usize,
    pub steps: usize,
    pub seed: u64,
    pub contact_weight: usize,
    pub budget: Budget,
    /// User constraints such as `g1:+`; empty means the default set with the
    /// g1-only fallback.
    #[serde(default)]
    pub constraints: Vec<String>,
    /// JSON-lines file receiving the split trace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            cone_depth: 4,
            deepen: 1,
            pieces: 2,
            steps: 10_000,
            seed: 0,
            contact_weight: 2,
            budget: Budget::default(),
            constraints: Vec::new(),
            trace: None,
        }
    }
}

/// Parses `key=value,key=value` into budget fields.
pub fn parse_budget(text: &str) -> Result<Budget, String> {
    let mut b = Budget::default();
    for item in text.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("expected key=value, got `{item}`"))?;
        let v: usize = v.trim().parse().map_err(|_| format!("bad number in `{item}`"))?;
        match k.trim() {
            "ball_radius" => b.ball_radius = v,
            "max_cosets" => b.max_cosets = v,
            "max_conjugates" => b.max_conjugates = v,
            "dehn_steps" => b.dehn_steps = v,
            "cone_nodes" => b.cone_nodes = v,
            other => return Err(format!("unknown budget key `{other}`")),
        }
    }
    Ok(b)
}

/// Parses `word:sign` with sign one of `+`, `-`, `0`.
pub fn parse_constraint(text: &str) -> Result<(Word, Sign), String> {
    let (w, s) = text.rsplit_once(':').ok_or_else(|| format!("expected word:sign, got `{text}`"))?;
    let w: Word = w.trim().parse().map_err(|e| format!("`{w}`: {e}"))?;
    let s = match s.trim() {
        "+" => Sign::Positive,
        "-" => Sign::Negative,
        "0" => Sign::Trivial,
        other => return Err(format!("sign must be +, - or 0, got `{other}`")),
    };
    Ok((w, s))
}

/// Failures that stop the pipeline, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl PipelineError {
    pub fn kind(&self) -> String {
        let dbg = match self {
            PipelineError::Io(_) => return "Io".into(),
            PipelineError::Diagram(e) => format!("{e:?}"),
            PipelineError::Group(e) => format!("{e:?}"),
            PipelineError::Order(e) => format!("{e:?}"),
            PipelineError::Branch(e) => format!("{e:?}"),
            PipelineError::Analysis(e) => format!("{e:?}"),
        };
        dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("").to_string()
    }

    /// 1 for bad input, 2 when a structural invariant fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Io(_) | PipelineError::Group(_) | PipelineError::Order(_) => 1,
            PipelineError::Diagram(e) => match e {
                DiagramError::ParallelismViolation(_) | DiagramError::PostconditionViolation(_) => 2,
                _ => 1,
            },
            PipelineError::Branch(e) => match e {
                BranchError::UndecidedSign(_) | BranchError::Unknown(_) => 1,
                _ => 2,
            },
            PipelineError::Analysis(_) => 2,
        }
    }

    pub fn to_json(&self) -> ErrorReport {
        ErrorReport {
            kind: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        }
    }
}

pub fn load(path: &str) -> Result<HeegaardDiagram, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io(format!("{path}: {e}")))?;
    Ok(parse_diagram(&text)?)
}

fn homology_string(p: &GroupPresentation) -> String {
    let parts: Vec<String> = p
        .homology()
        .iter()
        .filter(|&&d| d != 1)
        .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn validate_section(d: &HeegaardDiagram) -> ValidateSection {
    let faces = trace_faces(d)
        .iter()
        .map(|f| FaceEntry {
            id: f.id,
            size: f.size(),
            cycle: f.cycle_labels(),
        })
        .collect();
    let tight = find_bigons(d).is_empty();
    let waves = tight.then(|| {
        let mut all = find_waves(d, Family::U).unwrap_or_default();
        all.extend(find_waves(d, Family::V).unwrap_or_default());
        all
    });
    ValidateSection {
        vertices: d.vertex_count(),
        edges: d.edge_count(),
        faces,
        euler: d.euler_characteristic(),
        tight,
        waves,
        complexity: tight.then(|| complexity(d).key()),
    }
}

fn form_name(f: WhiteheadForm) -> String {
    format!("{f:?}")
}

fn whitehead_section(d: &HeegaardDiagram, notes: &mut Vec<String>) -> Result<WhiteheadSection, PipelineError> {
    let mut graphs = Vec::new();
    for cut in [Family::U, Family::V] {
        let g = whitehead_graph(d, cut);
        if g.form == WhiteheadForm::Unrecognized {
            notes.push(format!("Whitehead graph cut along {cut:?} is unrecognized"));
        }
        graphs.push(WhiteheadEntry {
            cut: format!("{cut:?}"),
            form: form_name(g.form),
            parameters: g.parameters,
            multiplicities: g.labelled(),
        });
    }
    let classes = parallel_arc_classes(d, Family::U)?;
    let band = match band_class(&classes) {
        Ok(rect) => {
            let bs = band_sum(d, rect)?;
            Some(BandSumEntry {
                m: bs.m,
                length: bs.curve.len(),
                tight: find_bigons(&bs.with_u1).is_empty() && find_bigons(&bs.with_u2).is_empty(),
            })
        }
        Err(_) => None,
    };
    Ok(WhiteheadSection {
        graphs,
        parallel_classes: classes.len(),
        band_sum: band,
    })
}

struct Cone {
    order: PartialLeftOrder,
    section: OrderSection,
}

fn cone_at(p: &GroupPresentation, depth: usize, opts: &Options) -> Result<Result<Cone, OrderSection>, PipelineError> {
    let mut section = OrderSection {
        depth,
        constraints: "g1, g2, h1, h2 positive".into(),
        obstruction: None,
        ball: 0,
        positives: 0,
        pieces: opts.pieces,
        cone: None,
    };
    let mut found;
    if opts.constraints.is_empty() {
        found = search_positive_cone(p, depth, &default_constraints(), &opts.budget)?;
        if let ConeSearch::Obstruction(_) = found {
            section.constraints = "g1 positive".into();
            found = search_positive_cone(p, depth, &[(Word::generator(0), Sign::Positive)], &opts.budget)?;
        }
    } else {
        let user = opts
            .constraints
            .iter()
            .map(|c| parse_constraint(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(PipelineError::Io)?;
        section.constraints = opts.constraints.join(", ");
        found = search_positive_cone(p, depth, &user, &opts.budget)?;
    }
    match found {
        ConeSearch::Cone(o) => {
            let o = o.with_pieces(opts.pieces);
            section.ball = o.ball.len();
            section.positives = o.positives().len();
            Ok(Ok(Cone { order: o, section }))
        }
        ConeSearch::Obstruction(ob) => {
            section.obstruction = Some(ob.reason);
            Ok(Err(section))
        }
    }
}

/// Runs the pipeline up to `stage`. Hypothesis failures end the run early
/// with a `HypothesisViolation` verdict instead of an error.
pub fn run(d0: &HeegaardDiagram, input: &str, stage: Stage, opts: &Options) -> Result<PipelineReport, PipelineError> {
    let mut r = PipelineReport::new(input, opts);
    r.validate = Some(validate_section(d0));
    if stage == Stage::Validate {
        return Ok(r.finish());
    }
    let path = minimize_path(d0)?;
    let d = path.last().unwrap().clone();
    r.reduce = Some(ReduceSection {
        steps: path.len() - 1,
        c3: path.iter().map(|x| x.vertex_count()).collect(),
        complexity: complexity(&d).key(),
        diagram: d.to_text(),
    });
    if stage == Stage::Reduce {
        return Ok(r.finish());
    }
    let wh = whitehead_section(&d, &mut r.notes)?;
    let unrecognized = wh.graphs.iter().any(|g| g.form == "Unrecognized");
    r.whitehead = Some(wh);
    if unrecognized {
        r.violations.push("Whitehead graph is none of the three forms".into());
    }
    if stage == Stage::Whitehead {
        return Ok(r.finish());
    }
    let pres = presentation(&d);
    let b1 = pres.homology().iter().filter(|&&x| x == 0).count();
    r.presentation = Some(PresentationSection {
        relators: pres.relators.iter().map(|w| w.to_string()).collect(),
        homology: homology_string(&pres),
        b1,
    });
    if stage == Stage::Pi1 {
        return Ok(r.finish());
    }

    // cone, deepened once when the minimal region is undecided
    let lab0 = region_words(&d, 0)?;
    let mut chosen = None;
    for depth in opts.cone_depth..=opts.cone_depth + opts.deepen {
        match cone_at(&pres, depth, opts)? {
            Err(section) => {
                r.order = Some(section);
                r.notes.push("no truncated cone; the group may not be left-orderable".into());
                return Ok(r.finish());
            }
            Ok(cone) => match minimal_region(&lab0, &cone.order) {
                Ok(m) => {
                    chosen = Some((cone, m));
                    break;
                }
                Err(e) => {
                    r.notes.push(format!("depth {depth}: {e}"));
                    r.order = Some(cone.section);
                }
            },
        }
    }
    let Some((cone, base)) = chosen else {
        return Ok(r.finish());
    };
    r.order = Some(cone.section.clone());
    let o = cone.order;
    if stage == Stage::Order {
        if let Some(section) = r.order.as_mut() {
            let forms = o.signed_normal_forms().into_iter().map(|(w, s)| (w.to_string(), s.to_string()));
            section.cone = Some(forms.collect());
        }
        return Ok(r.finish());
    }

    let lab = rebase(&lab0, base)?;
    let flips: [bool; 4] = std::array::from_fn(|s| {
        let g = Word::generator(s);
        let g = if s < 2 { g } else { g.conjugate(&lab.frame) };
        o.sign(&g) == Sign::Negative
    });
    let b = build_branched_oriented(&d, &lab, flips)?;
    let triv = |w: &Word| o.triviality(w);
    let ts = match trivial_sectors(&b, &triv) {
        Ok(ts) => ts,
        Err(e @ (BranchError::SourceViolation { .. } | BranchError::QuadViolation { .. })) => {
            r.violations.push(e.to_string());
            return Ok(r.finish());
        }
        Err(e) => return Err(e.into()),
    };
    let mut branch = BranchSection {
        minimal_region: base,
        sectors: b.sector_count(),
        cusps: b.cusp_count(),
        flips,
        trivial: ts.ids.clone(),
        undecided: ts.unknown.clone(),
        m: ts.ids.len().saturating_sub(1),
        corners: None,
        product_complement: None,
    };
    if !ts.ids.contains(&base) {
        r.notes.push(format!("minimal region {base} is not certified trivial"));
        r.branch = Some(branch);
        return Ok(r.finish());
    }
    let b0 = delete_sectors(&b, &ts.ids, &triv)?;
    b0.check_all_cusps()?;
    branch.corners = Some(corner_report(&b0)?);
    branch.product_complement = Some(check_product_complement(&b0));
    r.branch = Some(branch);
    if stage == Stage::Branch {
        return Ok(r.finish());
    }

    r.contact = Some(contact_section(&d, &b0, &o, opts, &mut r.violations)?);
    if !r.violations.is_empty() {
        return Ok(r.finish());
    }
    let split_opts = SplitOptions {
        steps: opts.steps,
        seed: opts.seed,
        full_check_every: 0,
    };
    let (end, trace) = match run_splitting(&b0, &o, split_opts) {
        Ok(x) => x,
        Err(e @ (BranchError::PositivityViolation { .. } | BranchError::CuspRelationViolation { .. })) => {
            r.violations.push(e.to_string());
            return Ok(r.finish());
        }
        Err(e) => return Err(e.into()),
    };
    let replayed = replay(&b0, &trace, &o)?;
    if let Some(path) = &opts.trace {
        write_trace(path, &trace, opts)?;
    }
    let twisted = detect_twisted_disk(&end, &o);
    if let Err(e) = &twisted {
        r.violations.push(e.to_string());
    }
    let mut types = [0usize; 3];
    for e in &trace.events {
        types[e.split_type as usize - 1] += 1;
    }
    r.split = Some(SplitSection {
        steps: opts.steps,
        seed: opts.seed,
        events: trace.events.len(),
        types,
        halted: trace.halted.as_ref().map(|h| match h {
            HaltReason::ClosedSurfaceCarried => "ClosedSurfaceCarried".to_string(),
            HaltReason::NoSplittableSite { .. } => "NoSplittableSite".to_string(),
        }),
        undecided: trace.undecided,
        conflicts: trace.conflicts,
        positivity_checks: trace.positivity_checks,
        max_word: trace.max_word,
        sectors: end.sector_count(),
        cusps: end.cusp_count(),
        initial_digest: trace.initial_digest.clone(),
        final_digest: trace.final_digest.clone(),
        replay_matches: replayed == trace.final_digest,
        twisted_disk_undecided: twisted.map(|t| t.undecided.len()).unwrap_or(0),
    });
    if replayed != trace.final_digest {
        r.violations.push("split trace does not replay".into());
    }
    Ok(r.finish())
}

/// Header line with the initial digest, one line per event, then a footer.
fn write_trace(path: &str, trace: &SplitTrace, opts: &Options) -> Result<(), PipelineError> {
    let mut out = String::new();
    let header = serde_json::json!({
        "initial_digest": trace.initial_digest,
        "steps": opts.steps,
        "seed": opts.seed,
        "cone_depth": opts.cone_depth,
    });
    let _ = writeln!(out, "{header}");
    for e in &trace.events {
        let _ = writeln!(out, "{}", serde_json::to_string(e).unwrap());
    }
    let footer = serde_json::json!({
        "final_digest": trace.final_digest,
        "halted": trace.halted,
        "undecided": trace.undecided,
        "conflicts": trace.conflicts,
    });
    let _ = writeln!(out, "{footer}");
    std::fs::write(path, out).map_err(|e| PipelineError::Io(format!("{path}: {e}")))
}

fn contact_section(
    d: &HeegaardDiagram,
    b0: &BranchedSurface,
    o: &PartialLeftOrder,
    opts: &Options,
    violations: &mut Vec<String>,
) -> Result<ContactSection, PipelineError> {
    let twisted = match detect_twisted_disk(b0, o) {
        Ok(t) => Some(t),
        Err(e) => {
            violations.push(e.to_string());
            None
        }
    };
    let disks = detect_disks_of_contact(b0, opts.contact_weight);
    let bound = contact_bound_check(b0, &disks);
    if let Some(msg) = &bound.diagnostic {
        violations.push(msg.clone());
    }
    let mut outermost = Vec::new();
    for w in &disks {
        for v in [CurveId::V1, CurveId::V2] {
            let family = shadow_arcs(b0, w.component, v);
            match outermost_count_check(d, v, &family) {
                Ok(rep) => {
                    if !rep.holds {
                        violations.push(format!("{} outermost arcs on {} exceed {}", rep.k, v.name(), rep.bound));
                    }
                    outermost.push(rep);
                }
                Err(e @ AnalysisError::WaveDetected { .. }) => violations.push(e.to_string()),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(ContactSection {
        weight: opts.contact_weight,
        twisted_disk: twisted,
        disks,
        bound,
        outermost,
    })
}

/// One-line summaries of the filled sections.
pub fn render_text(r: &PipelineReport) -> String {
    let mut s = String::new();
    if let Some(v) = &r.validate {
        let waves = v.waves.as_ref().map_or("-".to_string(), |w| w.len().to_string());
        let mut sizes: Vec<usize> = v.faces.iter().map(|f| f.size).collect();
        sizes.sort();
        let _ = writeln!(
            s,
            "diagram: V={} E={} F={} euler={} tight={} waves={waves} face sizes {sizes:?}",
            v.vertices,
            v.edges,
            v.faces.len(),
            v.euler,
            v.tight
        );
    }
    if let Some(x) = &r.reduce {
        let _ = writeln!(s, "reduce: {} wave moves, c3 {:?}, complexity {:?}", x.steps, x.c3, x.complexity);
    }
    if let Some(w) = &r.whitehead {
        for g in &w.graphs {
            let _ = writeln!(s, "whitehead cut {}: form {} {:?}", g.cut, g.form, g.parameters);
        }
        let _ = writeln!(s, "parallel classes: {}, band sum: {:?}", w.parallel_classes, w.band_sum);
    }
    if let Some(p) = &r.presentation {
        let _ = writeln!(s, "pi1: {} relators, H1 = {}", p.relators.len(), p.homology);
        for rel in &p.relators {
            let _ = writeln!(s, "  {rel}");
        }
    }
    if let Some(o) = &r.order {
        match &o.obstruction {
            Some(why) => {
                let _ = writeln!(s, "order: obstruction at depth {}: {why}", o.depth);
            }
            None => {
                let _ = writeln!(s, "order: cone at depth {} ({}), {} of {} ball elements positive", o.depth, o.constraints, o.positives, o.ball);
            }
        }
    }
    if let Some(b) = &r.branch {
        let _ = writeln!(
            s,
            "branch: base region {}, {} sectors, {} cusps, trivial {:?}, undecided {}",
            b.minimal_region,
            b.sectors,
            b.cusps,
            b.trivial,
            b.undecided.len()
        );
        if let Some(c) = &b.corners {
            let _ = writeln!(s, "corners: {:?} total {} (m = {})", c.counts, c.total, c.m);
        }
        if let Some(p) = &b.product_complement {
            let _ = writeln!(s, "product complement: {}", p.holds);
        }
    }
    if let Some(c) = &r.contact {
        let _ = writeln!(s, "contact: {} disks within weight {}, consistent {}", c.disks.len(), c.weight, c.bound.consistent);
    }
    if let Some(x) = &r.split {
        let _ = writeln!(
            s,
            "split: {} events {:?}, halted {:?}, undecided {}, conflicts {}, replay {}",
            x.events, x.types, x.halted, x.undecided, x.conflicts, x.replay_matches
        );
        let _ = writeln!(s, "digest: {}", x.final_digest);
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    for v in &r.violations {
        let _ = writeln!(s, "violation: {v}");
    }
    let _ = writeln!(s, "verdict: {:?}", r.verdict);
    s
}
