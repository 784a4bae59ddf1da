use std::path::PathBuf;

use adelie_core::chevalley::ChevalleyConstants;
use adelie_core::obstruction::{build_system, Half};
use adelie_core::RootSystem;

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn system(t: &str, half: Half) -> (RootSystem, ChevalleyConstants, adelie_core::obstruction::ObstructionSystem) {
    let rs = RootSystem::from_spec(t).unwrap();
    let c = ChevalleyConstants::build(&rs).unwrap();
    let s = build_system(&rs, &c, half).unwrap();
    (rs, c, s)
}

#[test]
fn emitted_systems_match_golden_files() {
    for t in ["A2", "A3", "D4"] {
        let l = t.to_lowercase();
        let (_, _, pos) = system(t, Half::PositiveHalf);
        assert_eq!(pos.render_with('C'), golden(&format!("{l}_positive.txt")), "{t} positive");
        let (_, _, neg) = system(t, Half::NegativeHalf);
        assert_eq!(neg.render(), golden(&format!("{l}_negative.txt")), "{t} negative");
    }
}

#[test]
fn low_heights_have_the_displayed_shape() {
    for t in ["A2", "A3", "D4"] {
        let (rs, c, sys) = system(t, Half::PositiveHalf);
        for e in &sys.equations {
            match e.height {
                1 => assert!(e.terms.is_empty()),
                2 => {
                    // C_i + C_j: exactly the term n_{C_i,C_j} φ_{C_i} φ_{C_j}, i < j
                    let support: Vec<usize> = (0..rs.rank()).filter(|&k| e.root.coords[k] != 0).collect();
                    assert_eq!(support.len(), 2);
                    let (i, j) = (support[0], support[1]);
                    assert_eq!(e.terms.len(), 1);
                    let term = &e.terms[0];
                    assert_eq!(term.beta, *rs.simple_root(i));
                    assert_eq!(term.gamma, *rs.simple_root(j));
                    let a = rs.root_index(&rs.simple_root(i).coords).unwrap();
                    let b = rs.root_index(&rs.simple_root(j).coords).unwrap();
                    assert_eq!(term.sign, c.n(a, b));
                }
                _ => {}
            }
        }
    }
}

#[test]
fn every_decomposition_appears_once() {
    // oracle: unordered pairs {β, γ} ⊂ Φ⁺ with β + γ = α
    for t in ["A3", "D4", "A5"] {
        let (rs, _, sys) = system(t, Half::PositiveHalf);
        let pos = rs.positive_roots();
        for e in &sys.equations {
            let mut expected = Vec::new();
            for i in 0..pos.len() {
                for j in i + 1..pos.len() {
                    let s: Vec<i64> = pos[i].coords.iter().zip(&pos[j].coords).map(|(a, b)| a + b).collect();
                    if s == e.root.coords {
                        expected.push((pos[i].coords.clone(), pos[j].coords.clone()));
                    }
                }
            }
            let mut found: Vec<_> = e
                .terms
                .iter()
                .map(|t| {
                    let (a, b) = (t.beta.coords.clone(), t.gamma.coords.clone());
                    let (a, b) = if pos.iter().position(|p| p.coords == a) < pos.iter().position(|p| p.coords == b) {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    (a, b)
                })
                .collect();
            found.sort();
            expected.sort();
            assert_eq!(found, expected, "{t} {}", e.root);
        }
    }
}
