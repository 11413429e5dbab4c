mod common;

use common::*;
use hyperquiver::arrangement::build_poset;
use hyperquiver::exactlin::Rat;
use hyperquiver::quiver::{check_relations, dualize, find_isomorphism};
use hyperquiver::specialize::{match_by_original_keys, relabel, specialize_along_flag, specialize_rep};
use hyperquiver::verma::build_verma;
use hyperquiver::weights::is_nonresonant;

#[test]
fn sp_preserves_relations_and_duality() {
    for (name, arr) in corpus() {
        for w in weight_sets(&arr) {
            let g = build_poset(&arr);
            assert!(is_nonresonant(&g, &w, false).nonresonant, "{name}");
            let m = build_verma(&arr, &w).unwrap().rep;
            for alpha in 0..g.len() {
                let sp = specialize_rep(&m, &arr, alpha).unwrap();
                assert!(check_relations(&sp.rep).unwrap().passed, "{name} {:?}", g.key(alpha));
                let d = specialize_rep(&dualize(&m), &arr, alpha).unwrap();
                assert!(find_isomorphism(&d.rep, &dualize(&sp.rep)).unwrap().is_found(), "{name} dual");
            }
        }
    }
}

#[test]
fn iterated_sp_commutes_on_nested_pairs() {
    for (name, arr) in corpus() {
        let w = nonresonant(&arr);
        let g = build_poset(&arr);
        let m = build_verma(&arr, &w).unwrap().rep;
        for a in 1..g.len() {
            for b in 1..g.len() {
                if a == b || !g.contains(a, b) {
                    continue;
                }
                let x = specialize_along_flag(&m, &arr, &[a, b]).unwrap();
                let y = specialize_along_flag(&m, &arr, &[b, a]).unwrap();
                assert!(check_relations(&x.rep).unwrap().passed);
                let map = match_by_original_keys(&y, &x).unwrap();
                let y_on_x = relabel(&y.rep, x.rep.graph_arc(), &map).unwrap();
                assert!(find_isomorphism(&x.rep, &y_on_x).unwrap().is_found(), "{name} {:?} {:?}", g.key(a), g.key(b));
            }
        }
    }
}

// Sp(M_λ) ≅ M_{Sp λ} holds exactly when no two hyperplanes merge. A merge
// means a point of the flat lies on three or more hyperplanes; that point
// keeps its full Verma fibre while the specialized point is only a
// crossing of two, so the dimensions there already disagree.
#[test]
fn verma_compatibility_holds_exactly_without_merges() {
    for (name, arr) in corpus() {
        for w in weight_sets(&arr) {
            let g = build_poset(&arr);
            let m = build_verma(&arr, &w).unwrap().rep;
            for alpha in 0..g.len() {
                let sp = specialize_rep(&m, &arr, alpha).unwrap();
                let target = build_verma(&sp.t_arrangement, &sp.weights(&w)).unwrap().rep;
                let merges = sp.origins.iter().any(|o| o.len() > 1);
                let iso = find_isomorphism(&sp.rep, &target).unwrap().is_found();
                assert_eq!(iso, !merges, "{name} at {:?}", g.key(alpha));
                if merges {
                    assert!(sp.rep.total_dim() > target.total_dim());
                }
            }
        }
    }
}

#[test]
fn a3_point_fibre_obstructs_compatibility() {
    let arr = a3();
    let w = nonresonant(&arr);
    let m = build_verma(&arr, &w).unwrap().rep;
    let g = m.graph();
    let origin = g.vertex(&[0, 1, 2]).unwrap();
    assert_eq!(m.dim(origin), 2);
    let sp = specialize_rep(&m, &arr, g.vertex(&[0]).unwrap()).unwrap();
    let t = sp.vertex_map[origin].unwrap();
    let target = build_verma(&sp.t_arrangement, &sp.weights(&w)).unwrap().rep;
    assert_eq!(target.dim(t), 1);
    assert!(sp.rep.dim(t) >= m.dim(origin));
}

#[test]
fn a5_figure_weights() {
    let arr = a5();
    let w = nonresonant(&arr);
    let g = build_poset(&arr);
    let m = build_verma(&arr, &w).unwrap().rep;
    let sp = specialize_rep(&m, &arr, g.vertex(&[4]).unwrap()).unwrap();
    assert_eq!(sp.dropped, vec![3]);
    let merged = sp.origins.iter().position(|o| o == &vec![1, 2]).unwrap();
    assert_eq!(*sp.weights(&w).get(merged), Rat::new(1, 3) + Rat::new(1, 5));
    assert_eq!(sp.origins.len(), 3);
}
