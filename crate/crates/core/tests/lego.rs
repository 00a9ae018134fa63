mod common;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xplego::dense::{self, projector, DenseOperator, DenseState};
use xplego::io::{run_network, Network};
use xplego::lego::{self, Insertion, Lego};
use xplego::registry::lookup;
use xplego::{Error, LegRole, XpGroup};

fn network(name: &str) -> Lego {
    let path = format!("{}/networks/{name}", env!("CARGO_MANIFEST_DIR"));
    run_network(&Network::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()).unwrap()
}

fn canon(n: u32, rows: &[&str]) -> XpGroup {
    XpGroup::from_strs(n, rows).unwrap().canonical_form().unwrap()
}

#[test]
fn tensor_with_an_empty_lego_is_the_identity() {
    let a = lookup("steane-xp").unwrap().lego().unwrap();
    let empty = Lego::new(XpGroup::empty(0, 8)).unwrap();
    let t = lego::tensor_product(&a, &empty).unwrap();
    assert_eq!(t.group, a.group);
    assert_eq!(t.legs, a.legs);
}

#[test]
fn tensor_of_plus_states() {
    let plus = Lego::new(XpGroup::from_strs(2, &["1|0|0"]).unwrap()).unwrap().with_state_shadow().unwrap();
    let t = lego::tensor_product(&plus, &plus).unwrap();
    assert_eq!(t.group, canon(2, &["10|00|0", "01|00|0"]));
    let pp = DenseState { n: 2, amps: vec![C64::new(0.5, 0.0); 4] };
    assert!(t.dense.as_ref().unwrap().proportional(&pp, 1e-12));
}

#[test]
fn two_lego_states_make_a_twelve_generator_group() {
    let v = lookup("state-v1").unwrap().lego().unwrap();
    let t = lego::tensor_product(&v, &v).unwrap();
    assert_eq!(t.n(), 12);
    assert_eq!(t.group.generators().len(), 12);
    assert!(t.counting_check().unwrap());
}

#[test]
fn code_722_self_trace_reproduces_the_printed_matrix() {
    let l = lookup("code-722").unwrap().lego().unwrap();
    let traced = lego::self_trace(&l, 0, 1).unwrap();
    assert_eq!(traced.group, lookup("code-722-traced").unwrap().group.canonical_form().unwrap());
    assert_eq!(network("code-722-trace.json").group, traced.group);
}

#[test]
fn lego_networks_reproduce_both_seven_qubit_codes() {
    for (file, name) in [("steane-xp.json", "steane-xp"), ("xp-713-b.json", "xp-713-b")] {
        let l = network(file);
        let want = lookup(name).unwrap().group.canonical_form().unwrap();
        assert_eq!(l.code_group().unwrap(), want, "{file}");
        assert!(l.is_xp());
    }
}

#[test]
fn tracing_a_bell_state_with_itself_gives_a_scalar() {
    let l = lookup("repetition").unwrap().lego().unwrap();
    let t = lego::self_trace(&l, 0, 1).unwrap();
    assert_eq!(t.n(), 0);
    let amp = t.dense.unwrap().amps[0];
    assert!((amp - C64::new(2.0, 0.0)).norm() < 1e-12);
}

#[test]
fn bell_state_with_x_insertion_vanishes() {
    let l = lookup("repetition").unwrap().lego().unwrap();
    let t = lego::trace_with_insertion(&l, 0, 1, &Insertion::X).unwrap();
    assert_eq!(t.n(), 0);
    assert!(t.dense.unwrap().amps[0].norm() < 1e-12);
    assert!(t.warnings.iter().any(|w| w.contains("empty trace")));
}

#[test]
fn identity_insertion_is_a_plain_self_trace() {
    let l = lookup("state-v1").unwrap().lego().unwrap();
    let a = lego::trace_with_insertion(&l, 2, 3, &Insertion::Identity).unwrap();
    let b = lego::self_trace(&l, 2, 3).unwrap();
    assert_eq!(a.group, b.group);
}

#[test]
fn non_xp_trace_is_flagged() {
    let l = network("non-xp-trace.json");
    assert_eq!(l.n(), 4);
    assert_eq!(l.group.generators().len(), 3);
    assert!(!l.counting_check().unwrap());
    // The code form counts the spurious logical direction and passes.
    assert!(l.group.counting_check().unwrap());
    assert!(!l.is_xp());
    assert!(l.warnings.iter().any(|w| w.contains("restricted")));
    assert!(dense::xp_certificate(l.dense.as_ref().unwrap(), 8).unwrap().is_none());
    // Every matched generator still stabilizes the contracted state.
    for g in l.group.generators() {
        assert!(dense::stabilizes(g, l.dense.as_ref().unwrap(), 1e-9));
    }
}

#[test]
fn unitary_insertion_is_dense_only() {
    let l = lookup("repetition").unwrap().lego().unwrap();
    let t = lego::tensor_product(&l, &l).unwrap();
    let h = xplego::io::insertion(Some("H")).unwrap();
    let r = lego::trace_with_insertion(&t, 1, 2, &h).unwrap();
    assert!(!r.symbolic);
    assert!(!r.is_xp());
    let hm = h.matrix().unwrap();
    let want = dense::self_contract(t.dense.as_ref().unwrap(), 1, 2, Some(&hm)).unwrap();
    assert!(r.dense.unwrap().proportional(&want, 1e-12));
}

#[test]
fn random_pauli_legos_with_x_insertion_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 40 {
        let l = common::some_state(&mut rng, 4, 2);
        let t = lego::trace_with_insertion(&l, 1, 3, &Insertion::X).unwrap();
        let d = dense::self_contract(l.dense.as_ref().unwrap(), 1, 3, Some(&dense::pauli_mat(1))).unwrap();
        if d.norm() < 1e-9 {
            assert!(t.group.z_support().is_err() || t.warnings.iter().any(|w| w.contains("empty")));
            continue;
        }
        let want = DenseOperator::outer(&d.normalized());
        assert!(projector(&t.group).unwrap().distance(&want) < 1e-9, "{}", l.group.render());
        checked += 1;
    }
}

#[test]
fn leg_errors() {
    let l = lookup("repetition").unwrap().lego().unwrap();
    assert!(matches!(lego::self_trace(&l, 0, 0), Err(Error::Leg(_))));
    assert!(matches!(lego::self_trace(&l, 0, 5), Err(Error::Leg(_))));
    let h = lookup("hadamard").unwrap().lego().unwrap();
    assert!(matches!(lego::self_trace(&h, 0, 1), Err(Error::Leg(_))));
    let a = lookup("steane").unwrap().lego().unwrap();
    let b = lookup("steane-xp").unwrap().lego().unwrap();
    assert!(matches!(lego::tensor_product(&a, &b), Err(Error::Incompatible(_))));
}

#[test]
fn logical_leg_of_422_becomes_physical() {
    let l = lookup("code-422").unwrap().lego().unwrap();
    let r = lego::redesignate(&l, 4, LegRole::Physical).unwrap();
    let want = canon(2, &["11110|00000|0", "00000|11110|0", "11001|00000|0", "00000|10101|0"]);
    assert_eq!(r.code_group().unwrap(), want);
}

#[test]
fn physical_leg_of_422_becomes_logical() {
    let l = lookup("code-422").unwrap().lego().unwrap();
    let r = lego::redesignate(&l, 0, LegRole::Logical).unwrap();
    let g = r.code_group().unwrap();
    assert_eq!(g.n(), 3);
    assert!(g.generators().is_empty());
    assert!((projector(&g).unwrap().trace().re - 8.0).abs() < 1e-9);
}

#[test]
fn shortening_the_second_seven_qubit_code() {
    let l = Lego::new(lookup("xp-713-b").unwrap().group).unwrap();
    // Leg 0 of the network is the logical leg, so leg 2 is the second physical qubit.
    let state = network("xp-713-b.json");
    assert_eq!(state.logical_legs(), vec![0]);
    let short = lego::redesignate(&state, 2, LegRole::Logical).unwrap();
    let g = short.code_group().unwrap();
    assert_eq!(g.n(), 6);
    assert_eq!(g.generators().len(), 4);
    assert!((projector(&g).unwrap().trace().re - 4.0).abs() < 1e-9);
    // The dropped second row now acts on the code space as a nontrivial logical.
    let row = l.group.generators().iter().find(|a| a.x()[1] == 1 && !a.is_diagonal()).unwrap().clone();
    let cols: Vec<usize> = (0..7).filter(|&c| c != 1).collect();
    let q = dense::render_operator(&row.select_columns(&cols)).unwrap();
    let p = projector(&g).unwrap();
    let qp = q.matmul(&p);
    assert!(p.matmul(&qp).distance(&qp) < 1e-9, "preserves the code space");
    assert!(qp.distance(&p) > 1e-3, "acts nontrivially");
}

#[test]
fn physical_to_logical_requires_an_isometry() {
    let l = lookup("zero").unwrap().lego().unwrap();
    let t = lego::tensor_product(&l, &l).unwrap();
    assert!(matches!(lego::redesignate(&t, 0, LegRole::Logical), Err(Error::NotIsometry(_))));
}
