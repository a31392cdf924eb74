mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thom::algebra::{smith_invariants, CanonicalGroup, IntMatrix};
use thom::axioms::{check_exactness, check_strong_excision, uniqueness_cross_check, UniquenessInstance};
use thom::complexes::standard::random_simplicial_complex;
use thom::complexes::{CellComplex, Pair, Subcomplex};
use thom::doc::InstanceDocument;
use thom::ideals::{in_ideal, meets_every_member_finitely, random_set, Coord, PairedIdeals, SemilinearSet};
use thom::kdirect::{in_kdirect_sum, random_pattern};

const W: u64 = 40;

fn pairing(k: u8) -> PairedIdeals {
    match k % 4 {
        0 => PairedIdeals::horizontal(),
        1 => PairedIdeals::vertical(),
        2 => PairedIdeals::discrete(),
        _ => PairedIdeals::clustered(),
    }
}

fn set(seed: u64, coord: Coord) -> SemilinearSet {
    random_set(&mut ChaCha8Rng::seed_from_u64(seed), coord)
}

fn same_on_window(a: &SemilinearSet, pred: impl Fn(u64, u64) -> bool) -> bool {
    (1..=W).all(|i| (1..=W).all(|j| a.contains(i, j) == pred(i, j)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn set_operations_agree_with_pointwise_evaluation(a in any::<u64>(), b in any::<u64>(), row in any::<bool>()) {
        let coord = if row { Coord::J } else { Coord::I };
        let (s, t) = (set(a, coord), set(b, coord));
        prop_assert!(same_on_window(&s.union(&t), |i, j| s.contains(i, j) || t.contains(i, j)));
        prop_assert!(same_on_window(&s.intersect(&t), |i, j| s.contains(i, j) && t.contains(i, j)));
        prop_assert!(same_on_window(&s.complement(), |i, j| !s.contains(i, j)));
        prop_assert!(same_on_window(&s.difference(&t), |i, j| s.contains(i, j) && !t.contains(i, j)));
        prop_assert!(same_on_window(&s.transpose(), |i, j| s.contains(j, i)));
    }

    #[test]
    fn boolean_laws_hold_as_sets(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (s, t, u) = (set(a, Coord::J), set(b, Coord::J), set(c, Coord::J));
        prop_assert!(s.union(&t).complement().same_set(&s.complement().intersect(&t.complement())).unwrap());
        prop_assert!(s.intersect(&t.union(&u)).same_set(&s.intersect(&t).union(&s.intersect(&u))).unwrap());
        prop_assert!(s.complement().complement().same_set(&s).unwrap());
        prop_assert!(s.intersect(&s.complement()).is_empty().unwrap());
        prop_assert!(s.intersect(&t).is_subset_of(&s).unwrap());
    }

    #[test]
    fn emptiness_and_finiteness_match_the_window(a in any::<u64>()) {
        let s = set(a, Coord::J);
        let n = common::window_count(W, |i, j| s.contains(i, j));
        if s.is_empty().unwrap() {
            prop_assert_eq!(n, 0);
        }
        if s.is_finite().unwrap() {
            // finite sets from the generator live in a small box
            prop_assert_eq!(n, common::window_count(2 * W, |i, j| s.contains(i, j)));
        } else {
            prop_assert!(common::window_count(2 * W, |i, j| s.contains(i, j)) > n);
        }
    }

    #[test]
    fn ideals_are_downward_closed_and_union_closed(a in any::<u64>(), b in any::<u64>(), k in 0u8..4) {
        let pair = pairing(k);
        let coord = pair.orientation();
        let (s, t) = (set(a, coord), set(b, coord));
        for ideal in [&pair.kappa, &pair.nubar] {
            let s_in = in_ideal(&s, ideal).unwrap().member;
            let t_in = in_ideal(&t, ideal).unwrap().member;
            if s_in {
                prop_assert!(in_ideal(&s.intersect(&t), ideal).unwrap().member);
            }
            prop_assert_eq!(in_ideal(&s.union(&t), ideal).unwrap().member, s_in && t_in);
        }
    }

    #[test]
    fn generator_checks_suffice_for_finite_meeting(a in any::<u64>(), k in 0u8..4, seed in any::<u64>()) {
        let pair = pairing(k);
        let s = set(a, pair.orientation());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ideal in [&pair.kappa, &pair.nubar] {
            let (finite, witness) = meets_every_member_finitely(&s, ideal).unwrap();
            if finite {
                for g in ideal.sample_generators(&mut rng, 12) {
                    prop_assert!(s.intersect(&g).is_finite().unwrap());
                }
            } else {
                let g = witness.unwrap();
                prop_assert!(in_ideal(&g, ideal).unwrap().member);
                prop_assert!(!s.intersect(&g).is_finite().unwrap());
            }
        }
    }

    #[test]
    fn duality_between_the_two_ideals(a in any::<u64>(), k in 0u8..4) {
        let pair = pairing(k);
        let s = set(a, pair.orientation());
        prop_assert_eq!(in_ideal(&s, &pair.nubar).unwrap().member, meets_every_member_finitely(&s, &pair.kappa).unwrap().0);
        prop_assert_eq!(in_ideal(&s, &pair.kappa).unwrap().member, meets_every_member_finitely(&s, &pair.nubar).unwrap().0);
    }

    #[test]
    fn direct_sums_are_subgroups(a in any::<u64>(), b in any::<u64>(), k in 0u8..4) {
        let pair = pairing(k);
        let g = random_pattern(&mut ChaCha8Rng::seed_from_u64(a), &pair);
        let h = random_pattern(&mut ChaCha8Rng::seed_from_u64(b), &pair);
        for ideal in [&pair.kappa, &pair.nubar] {
            let g_in = in_kdirect_sum(&g, ideal).unwrap();
            let h_in = in_kdirect_sum(&h, ideal).unwrap();
            prop_assert_eq!(in_kdirect_sum(&g.neg(), ideal).unwrap(), g_in);
            if g_in && h_in {
                prop_assert!(in_kdirect_sum(&g.add(&h).unwrap(), ideal).unwrap());
            }
            let sum = g.add(&h).unwrap();
            for (i, j) in [(1, 1), (3, 7), (9, 2), (20, 20)] {
                let expect: Vec<BigInt> = g.value_at(i, j).iter().zip(h.value_at(i, j)).map(|(x, y)| x + y).collect();
                prop_assert_eq!(sum.value_at(i, j), expect);
            }
        }
    }

    #[test]
    fn canonical_groups_match_the_reference_diagonalization(
        rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 1..5),
    ) {
        let m = IntMatrix::from_rows(&rows);
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = common::diagonal(big);
        // cokernel of the matrix, viewed as a presentation of Z^rows
        let expect = CanonicalGroup::new(rows.len() - d.len(), d.into_iter().filter(|x| *x != BigInt::from(1)).collect());
        let inv = smith_invariants(&m);
        prop_assert_eq!(inv.rank, rows.len() - expect.rank());
        let got = CanonicalGroup::new(rows.len() - inv.rank, inv.torsion());
        prop_assert_eq!(got, expect);
    }
}

fn shuffled(k: &CellComplex, seed: u64) -> CellComplex {
    let mut cells = k.to_cells();
    cells.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let renamed = CellComplex::new(cells).unwrap();
    renamed.relabel(|id| format!("c_{id}")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn verdicts_ignore_cell_order_and_names(seed in any::<u64>(), perm in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Arc::new(random_simplicial_complex(&mut rng, 40));
        let y = Arc::new(shuffled(&x, perm));
        let top = x.dimension().unwrap_or(0);

        let run = |k: &Arc<CellComplex>| {
            let inst = UniquenessInstance { name: "k".into(), complex: k.clone(), maps: vec![] };
            let report = uniqueness_cross_check(&[inst]).unwrap();
            let groups: Vec<CanonicalGroup> = report.entries[0].degrees.iter().map(|d| d.direct.clone()).collect();
            (report.passed(), groups)
        };
        prop_assert_eq!(run(&x), run(&y));

        // the same subcomplex on both sides, found through the renaming
        let picks: Vec<usize> = (0..x.len()).filter(|c| (perm >> (c % 64)) & 1 == 1).collect();
        let sx = Subcomplex::closure(x.clone(), picks.iter().copied());
        let sy = Subcomplex::closure(y.clone(), picks.iter().map(|&c| y.lookup(&format!("c_{}", x.id(c))).unwrap()));
        let px = Pair::new(x.clone(), sx).unwrap();
        let py = Pair::new(y.clone(), sy).unwrap();
        prop_assert_eq!(check_exactness(&px, top).passed(), check_exactness(&py, top).passed());
        let (ex, ey) = (check_strong_excision(&px).unwrap(), check_strong_excision(&py).unwrap());
        prop_assert_eq!(ex.passed(), ey.passed());
        let gx: Vec<_> = ex.degrees.iter().map(|d| d.0.clone()).collect();
        let gy: Vec<_> = ey.degrees.iter().map(|d| d.0.clone()).collect();
        prop_assert_eq!(gx, gy);
    }
}

#[test]
fn corpus_documents_survive_a_round_trip() {
    let corpus = thom::cli::corpus::Corpus::bundled();
    for doc in &corpus.docs {
        let text = doc.to_json();
        let back = InstanceDocument::parse(&text).unwrap();
        assert_eq!(&back, doc);
        assert_eq!(back.to_json(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_complex_documents_survive_a_round_trip(seed in any::<u64>(), big in any::<i128>()) {
        let k = random_simplicial_complex(&mut ChaCha8Rng::seed_from_u64(seed), 30);
        let mut json: serde_json::Value = serde_json::json!({"kind": "complex", "name": "r", "cells": []});
        let mut cells = thom::doc::ComplexDoc::from_complex(&k).cells;
        // a wide incidence on a fresh top cell exercises big integers
        let last = cells.iter().rev().find(|c| c.dim == 0).map(|c| c.id.clone()).unwrap();
        cells.push(thom::doc::CellDoc { id: "w".into(), dim: 1, boundary: vec![(last.clone(), thom::doc::Int(BigInt::from(big))), (last, thom::doc::Int(-BigInt::from(big)))] });
        json["cells"] = serde_json::to_value(&cells).unwrap();
        let text = json.to_string();
        let doc = InstanceDocument::parse(&text).unwrap();
        let again = InstanceDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(&doc, &again);
        prop_assert!(doc.build().is_ok());
    }
}
