mod common;

use common::*;
use hyperquiver::arrangement::build_poset;
use hyperquiver::dmod::{
    check_d_squared, complex_dual_quiver, dual_complex, gr_model, koszul_differential, same_differentials, theta_spectrum,
};
use hyperquiver::exactlin::{Matrix, Rat};
use hyperquiver::quiver::{check_relations, Rep};
use hyperquiver::specialize::specialize_rep;
use hyperquiver::verma::build_verma;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dimensions of the Verma representation, every map random in {−1, 0, 1}
/// or zero; zero maps keep the relations, random ones mostly break them.
fn random_rep(arr: &hyperquiver::arrangement::Arrangement, rng: &mut ChaCha8Rng) -> Rep {
    let m = build_verma(arr, &nonresonant(arr)).unwrap().rep;
    let mut r = Rep::with_dims(m.graph_arc(), m.dims().to_vec());
    let sparse = rng.gen_bool(0.3);
    for (a, b) in m.graph().adjacent_pairs() {
        let mut x = Matrix::zeros(m.dim(a), m.dim(b));
        for i in 0..m.dim(a) {
            for j in 0..m.dim(b) {
                if !sparse || rng.gen_bool(0.15) {
                    x[(i, j)] = Rat::from_int(rng.gen_range(-1..=1));
                }
            }
        }
        r.set_map(a, b, x).unwrap();
    }
    r
}

#[test]
fn d_squared_detects_exactly_the_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut seen = [0usize; 2];
    for (name, arr) in corpus() {
        for _ in 0..20 {
            let r = random_rep(&arr, &mut rng);
            let rel = check_relations(&r).unwrap().passed;
            assert_eq!(check_d_squared(&koszul_differential(&r).unwrap()).passed, rel, "{name}");
            seen[rel as usize] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn dual_complex_is_the_complex_of_the_dual_quiver() {
    for (name, arr) in corpus() {
        let m = build_verma(&arr, &nonresonant(&arr)).unwrap().rep;
        let d = dual_complex(&koszul_differential(&m).unwrap()).unwrap();
        assert!(same_differentials(&d, &koszul_differential(&complex_dual_quiver(&m)).unwrap()), "{name}");
        assert!(check_d_squared(&d).passed, "{name}");
    }
}

// On A3 every line meets the other two at the origin, so specializing to a
// line merges them; the point and the open stratum do not.
#[test]
fn a3_theta_law_holds_exactly_off_merges() {
    let arr = a3();
    let w = nonresonant(&arr);
    let m = build_verma(&arr, &w).unwrap().rep;
    let g = build_poset(&arr);
    for a in 0..g.len() {
        let merges = specialize_rep(&m, &arr, a).unwrap().origins.iter().any(|o| o.len() > 1);
        let gr = gr_model(&m, &arr, a, 5).unwrap();
        assert!(gr.compare().passed, "{:?}", g.key(a));
        let r = theta_spectrum(&gr, &w, 4);
        assert!(r.slices.iter().all(|s| s.closed));
        assert_eq!(r.passed, !merges, "{:?}", g.key(a));
    }
}

#[test]
fn remote_strata_break_the_comparison_on_the_triangle() {
    let arr = a4();
    let m = build_verma(&arr, &nonresonant(&arr)).unwrap().rep;
    let g = build_poset(&arr);
    for a in 0..g.len() {
        let remote = specialize_rep(&m, &arr, a).unwrap().vertex_map.iter().any(Option::is_none);
        let r = gr_model(&m, &arr, a, 4).unwrap().compare();
        assert_eq!(r.passed, !remote, "{:?}", g.key(a));
        assert!(r.remote_terms > 0 || !remote);
    }
}
