//! Regenerates the diagram corpus: `cargo run --example write_corpus -- <dir>`.

use std::fs;
use std::path::Path;

use foliate::diagram::synth::{finger_move, from_form_one, handle_slide, FormOne};
use foliate::diagram::{complexity, embedding, find_bigons, find_waves, minimize, CurveId, Family, HeegaardDiagram};

const FORMS: [(&str, [usize; 6]); 9] = [
    ("eight", [0, 2, 1, 3, 0, 2]),
    ("lens3", [0, 2, 1, 1, 0, 2]),
    ("lens4", [1, 1, 1, 1, 1, 1]),
    ("f430102", [4, 3, 0, 1, 0, 2]),
    ("f341102", [3, 4, 1, 1, 0, 2]),
    ("f413122", [4, 1, 3, 1, 2, 2]),
    ("f323104", [3, 2, 3, 1, 0, 4]),
    ("f431102", [4, 3, 1, 1, 0, 2]),
    ("f440011", [4, 4, 0, 0, 1, 1]),
];

fn form(p: [usize; 6]) -> HeegaardDiagram {
    let [a, b, c, d, t1, t2] = p;
    from_form_one(FormOne { a, b, c, d, t1, t2 }).unwrap()
}

fn write(dir: &Path, name: &str, note: &str, d: &HeegaardDiagram) {
    let text = format!("# {note}\n{}", d.to_text());
    fs::write(dir.join(format!("{name}.hd")), text).unwrap();
    println!("{name}: {} vertices", d.vertex_count());
}

fn bigon(d: &HeegaardDiagram) -> HeegaardDiagram {
    for f in &embedding(d).faces {
        for e in f.edge_cycle.iter().filter(|e| e.curve.family() == Family::V) {
            for g in f.edge_cycle.iter().filter(|g| g.curve.family() == Family::U) {
                if let Ok(x) = finger_move(d, e.curve, e.arc, g.curve, g.arc) {
                    return x;
                }
            }
        }
    }
    panic!("no finger move")
}

fn wave(d: &HeegaardDiagram) -> Option<HeegaardDiagram> {
    for f in &embedding(d).faces {
        let k = f.size();
        for (i, _) in f.edge_cycle.iter().enumerate().filter(|(_, e)| e.curve == CurveId::U1) {
            for (j, _) in f.edge_cycle.iter().enumerate().filter(|(_, g)| g.curve == CurveId::U2) {
                let gap = (i + k - j) % k;
                if gap.min(k - gap) < 3 {
                    continue;
                }
                let Ok(x) = handle_slide(d, f.id, i, j) else { continue };
                let waved = find_bigons(&x).is_empty() && !find_waves(&x, Family::U).unwrap().is_empty();
                if waved && minimize(&x).is_ok_and(|y| complexity(&y).key() <= complexity(d).key()) {
                    return Some(x);
                }
            }
        }
    }
    None
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "corpus".into());
    let dir = Path::new(&dir);
    fs::create_dir_all(dir.join("invalid")).unwrap();
    for (name, p) in FORMS {
        write(dir, name, &format!("form I graph (a, b, c, d) = {:?}, twists {:?}", &p[..4], &p[4..]), &form(p));
    }
    for name in ["eight", "f430102"] {
        let d = form(FORMS.iter().find(|f| f.0 == name).unwrap().1);
        write(dir, &format!("bigon_{name}"), &format!("{name} with one finger move"), &bigon(&d));
    }
    for (name, p) in FORMS {
        if let Some(x) = wave(&form(p)) {
            write(dir, &format!("wave_{name}"), &format!("reduces to {name}"), &x);
        }
    }
    // two more wave sources among small wave-free diagrams
    let mut extra = 0;
    for code in 0..6usize.pow(6) {
        let p: [usize; 6] = std::array::from_fn(|i| code / 6usize.pow(5 - i as u32) % 6);
        if extra == 2 || FORMS.iter().any(|f| f.1 == p) {
            continue;
        }
        let Ok(d) = from_form_one(FormOne { a: p[0], b: p[1], c: p[2], d: p[3], t1: p[4], t2: p[5] }) else { continue };
        let free = find_bigons(&d).is_empty()
            && find_waves(&d, Family::U).unwrap().is_empty()
            && find_waves(&d, Family::V).unwrap().is_empty();
        if !free || d.vertex_count() > 12 {
            continue;
        }
        if let Some(x) = wave(&d) {
            let name: String = p.iter().map(|k| k.to_string()).collect();
            write(dir, &format!("f{name}"), &format!("form I graph (a, b, c, d) = {:?}, twists {:?}", &p[..4], &p[4..]), &d);
            write(dir, &format!("wave_f{name}"), &format!("reduces to f{name}"), &x);
            extra += 1;
        }
    }
    fs::write(
        dir.join("invalid/torus.hd"),
        "# u1 and v1 meeting twice, nothing else: a torus\nvertices 2\nu1: 1 2\nu2:\nv1: 1+ 2-\nv2:\n",
    )
    .unwrap();
}
