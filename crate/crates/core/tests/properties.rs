use std::collections::BTreeSet;

use foliate::branch::{
    build_branched, build_branched_oriented, delete_sectors, detect_twisted_disk, replay, run_splitting,
    trivial_sectors, BranchedSurface, SectorKind, SplitOptions,
};
use foliate::diagram::synth::{from_form_one, FormOne};
use foliate::diagram::{complexity, find_bigons, parse_diagram, trace_faces, whitehead_graph, CurveId, Family, HeegaardDiagram};
use foliate::group::{presentation, rebase, region_words, Budget, GroupPresentation, Letter, Word};
use foliate::order::{minimal_region, search_positive_cone, ConeSearch, PartialLeftOrder, Sign};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..8, 0..12).prop_map(|ls| Word::from_letters(ls.into_iter().map(Letter)))
}

fn form() -> impl Strategy<Value = HeegaardDiagram> {
    (0usize..5, 0usize..5, 0usize..3, 0usize..5, 0usize..4, 0usize..4).prop_filter_map("not a diagram", |(a, b, c, d, t1, t2)| {
        from_form_one(FormOne { a, b, c, d, t1, t2 }).ok()
    })
}

proptest! {
    #[test]
    fn words_form_a_group(x in word(), y in word(), z in word()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.mul(&x.inverse()).is_empty());
        prop_assert_eq!(x.inverse().inverse(), x.clone());
        prop_assert_eq!(x.ldiv(&y), x.inverse().mul(&y));
        let xy = x.mul(&y);
        prop_assert!(xy.letters().windows(2).all(|p| p[1] != p[0].inverse()));
        let (ax, ay, axy) = (x.abelianize(), y.abelianize(), xy.abelianize());
        prop_assert!((0..4).all(|i| axy[i] == ax[i] + ay[i]));
    }

    #[test]
    fn words_print_and_parse(x in word()) {
        let back: Word = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn cyclic_reduction_is_a_conjugate(x in word()) {
        let (core, by) = x.cyclic_core();
        prop_assert_eq!(core.conjugate(&by), x.clone());
        let c = x.cyclically_reduced();
        if c.len() > 1 {
            prop_assert_ne!(c.letters()[0], c.letters()[c.len() - 1].inverse());
        }
    }

    #[test]
    fn synthetic_diagrams_are_genus_two(d in form()) {
        let faces = trace_faces(&d);
        prop_assert_eq!(d.euler_characteristic(), -2);
        prop_assert_eq!(faces.iter().map(|f| f.size()).sum::<usize>(), 4 * d.vertex_count());
        prop_assert!(faces.iter().all(|f| f.size() % 2 == 0));
        prop_assert_eq!(parse_diagram(&d.to_text()).unwrap(), d.clone());
        for cut in [Family::U, Family::V] {
            prop_assert_eq!(whitehead_graph(&d, cut).total(), d.vertex_count());
        }
        if find_bigons(&d).is_empty() {
            let c = complexity(&d);
            prop_assert!(c.c1 <= c.c2 && c.c2 <= c.c3);
        }
        // every crossing lies on one v-curve and one u-curve
        let total: usize = [CurveId::V1, CurveId::V2]
            .iter()
            .flat_map(|&v| [CurveId::U1, CurveId::U2].map(|u| d.pair_count(v, u)))
            .sum();
        prop_assert_eq!(total, d.vertex_count());
    }

    #[test]
    fn rebase_keeps_comparisons(d in form(), pick in 0usize..64) {
        let lab = region_words(&d, 0).unwrap();
        let n = lab.labels.len();
        let base = pick % n;
        let moved = rebase(&lab, base).unwrap();
        prop_assert!(moved.labels[base].is_empty());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(moved.labels[i].ldiv(&moved.labels[j]), lab.labels[i].ldiv(&lab.labels[j]));
            }
        }
        let b = build_branched(&d, &moved).unwrap();
        prop_assert!(b.check_all_cusps().is_ok());
        prop_assert_eq!(b.cusp_count(), d.edge_count());
    }

    #[test]
    fn cones_respect_constraints(signs in prop::collection::vec(any::<bool>(), 4), extra in word()) {
        let mut constraints: Vec<(Word, Sign)> = (0..4)
            .map(|g| (Word::generator(g), if signs[g] { Sign::Positive } else { Sign::Negative }))
            .collect();
        if !extra.is_empty() && extra.len() <= 2 {
            constraints.push((extra, Sign::Positive));
        }
        let found = search_positive_cone(&GroupPresentation::free(), 2, &constraints, &Budget::default()).unwrap();
        if let ConeSearch::Cone(o) = found {
            prop_assert!(o.check_consistency().is_ok());
            for (w, s) in &constraints {
                prop_assert_eq!(o.sign(w), *s);
                prop_assert_eq!(o.sign(&w.inverse()), s.flip());
            }
        }
    }
}

struct Prepared {
    order: PartialLeftOrder,
    b: BranchedSurface,
    b0: BranchedSurface,
}

fn prepared() -> &'static Prepared {
    static CELL: std::sync::OnceLock<Prepared> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let d = from_form_one(FormOne { a: 4, b: 3, c: 0, d: 1, t1: 0, t2: 2 }).unwrap();
        let constraints = [(Word::generator(0), Sign::Positive)];
        let order = match search_positive_cone(&presentation(&d), 4, &constraints, &Budget::default()).unwrap() {
            ConeSearch::Cone(o) => *o,
            ConeSearch::Obstruction(ob) => panic!("{}", ob.reason),
        };
        let lab = region_words(&d, 0).unwrap();
        let lab = rebase(&lab, minimal_region(&lab, &order).unwrap()).unwrap();
        let flips = std::array::from_fn(|s| {
            let g = Word::generator(s);
            let g = if s < 2 { g } else { g.conjugate(&lab.frame) };
            order.sign(&g) == Sign::Negative
        });
        let b = build_branched_oriented(&d, &lab, flips).unwrap();
        let triv = |w: &Word| order.triviality(w);
        let ts = trivial_sectors(&b, &triv).unwrap();
        let b0 = delete_sectors(&b, &ts.ids, &triv).unwrap();
        Prepared { order, b, b0 }
    })
}

fn corners(b: &BranchedSurface, s: usize) -> BTreeSet<u32> {
    b.incident(s)
        .into_iter()
        .flat_map(|k| {
            let (c, a) = b.cusps[k].arc.unwrap();
            let v = b.curve(c);
            [v[a as usize], v[(a as usize + 1) % v.len()]]
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn splitting_keeps_cusp_relations(seed in any::<u64>(), steps in 0usize..150) {
        let p = prepared();
        let opts = SplitOptions { steps, seed, full_check_every: 25 };
        let (end, trace) = run_splitting(&p.b0, &p.order, opts).unwrap();
        prop_assert_eq!(trace.events.len(), steps);
        prop_assert!(end.check_all_cusps().is_ok());
        prop_assert!(detect_twisted_disk(&end, &p.order).is_ok());
        prop_assert_eq!(replay(&p.b0, &trace, &p.order).unwrap(), trace.final_digest.clone());
        prop_assert_eq!(end.total_corners(), p.b0.total_corners());
        prop_assert!(trace.events.iter().all(|e| (1..=3).contains(&e.split_type)));
    }

    #[test]
    fn corners_come_in_fours(order in Just((0..64u32).collect::<Vec<_>>()).prop_shuffle()) {
        let b = &prepared().b;
        let quads: Vec<usize> = b
            .alive_sectors()
            .filter(|s| matches!(s.kind, SectorKind::HeegaardSector(_)))
            .map(|s| s.id)
            .filter(|&s| {
                let inc = b.incident(s);
                let curves: BTreeSet<CurveId> = inc.iter().map(|&k| b.cusps[k].arc.unwrap().0).collect();
                inc.len() == 4 && curves.len() == 4
            })
            .collect();
        let mut used = BTreeSet::new();
        let mut chosen = Vec::new();
        for &i in &order {
            let Some(&q) = quads.get(i as usize % quads.len().max(1)) else { continue };
            let c = corners(b, q);
            if chosen.contains(&q) || !c.is_disjoint(&used) {
                continue;
            }
            used.extend(c);
            chosen.push(q);
        }
        let mut cut = b.clone();
        for &s in &chosen {
            for k in cut.incident(s) {
                cut.cusps[k].alive = false;
            }
        }
        cut.locus = cut.walk_locus().unwrap();
        prop_assert_eq!(cut.total_corners(), 4 * chosen.len());
        prop_assert!(cut.locus.iter().all(|l| l.corners() % 2 == 0));
        if !chosen.is_empty() {
            prop_assert!(cut.locus.iter().all(|l| l.corners() >= 2));
        }
    }
}
