//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Every expected value here is frozen from an independent route: the
//! closed-form rank formulas, hand-checked small cases, or the exhaustive
//! brute-force Smith-normal-form oracle.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use maghom::chain::{Chain, Variant};
use maghom::closedform::{
    euler_crosscheck, even_rank, even_theta, magnitude_distance_regular, moore_cycles,
    moore_detect, moore_magnitude, moore_rank, moore_rank_closed_form, moore_rank_recurrence,
    MooreParams,
};
use maghom::homology::{classes_span, homology, is_cycle, HomologyGroup};
use maghom::resolution::{
    bar_resolution, certify_exactness, even_double_complex, minimal_resolution_geodetic,
    verify_chain_map_f, verify_mult_relations, verify_tensored_zero, verify_total_complex,
    verify_total_complex_of,
};
use maghom::space::{graph_girth, ExtDist, Family};
use maghom::theta::{theta_enumerate, thin_frames};
use maghom::QuasiMetricSpace;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn fam(f: Family) -> QuasiMetricSpace {
    f.build().unwrap()
}

fn snf_group(space: &QuasiMetricSpace, n: usize, l: i64) -> HomologyGroup {
    homology(space, n, &rat(l), Variant::Normalized, None).unwrap()
}

fn theta_count(space: &QuasiMetricSpace, n: usize, l: i64) -> usize {
    theta_enumerate(space, n, &rat(l)).unwrap().tuples.len()
}

/// Criterion 1: the C5 rank table, produced three independent ways.
#[test]
fn criterion_1_odd_cycle_table() {
    let c5 = fam(Family::Cycle(5));
    let params = moore_detect(&c5).expect("C5 is a Moore graph");
    let expected: [(usize, i64, usize); 9] = [
        (0, 0, 5),
        (1, 1, 10),
        (2, 2, 10),
        (2, 3, 10),
        (3, 3, 10),
        (3, 4, 30),
        (4, 4, 10),
        (4, 5, 50),
        (4, 6, 20),
    ];
    for (n, l, rank) in expected {
        let by_theta = theta_count(&c5, n, l);
        let by_recurrence = moore_rank(&params, n as i64, l).unwrap();
        let by_snf = snf_group(&c5, n, l);
        assert_eq!(by_theta, rank, "theta at ({}, {})", n, l);
        assert_eq!(
            by_recurrence,
            BigInt::from(rank),
            "recurrence at ({}, {})",
            n,
            l
        );
        assert_eq!(by_snf.rank, rank, "snf at ({}, {})", n, l);
        assert!(by_snf.torsion.is_empty(), "torsion at ({}, {})", n, l);
    }
    println!("acceptance criterion 1 (odd-cycle C5 table, three routes): PASS");
}

/// Criterion 2: Petersen ranks by recurrence, closed form, Θ count, and the
/// SNF oracle at (2, 3).
#[test]
fn criterion_2_petersen() {
    let p = fam(Family::Petersen);
    let params = moore_detect(&p).expect("Petersen is a Moore graph");
    for (n, l, rank) in [(1i64, 1i64, 30usize), (2, 3, 120), (3, 4, 480)] {
        assert_eq!(moore_rank_recurrence(&params, n, l), BigInt::from(rank));
        assert_eq!(moore_rank_closed_form(&params, n, l), BigInt::from(rank));
        assert_eq!(theta_count(&p, n as usize, l), rank);
    }
    let group = snf_group(&p, 2, 3);
    assert_eq!(group.rank, 120);
    assert!(group.torsion.is_empty());
    println!("acceptance criterion 2 (Petersen ranks, four routes at (2,3)): PASS");
}

/// Criterion 3: the generated Hoffman–Singleton graph and its Θ count at
/// (2, 3). The SNF oracle is out of scale here by design.
#[test]
fn criterion_3_hoffman_singleton() {
    let hs = fam(Family::HoffmanSingleton);
    assert_eq!(hs.point_count(), 50);
    let one = ExtDist::one();
    for x in 0..50 {
        assert_eq!((0..50).filter(|&y| hs.dist(x, y) == &one).count(), 7);
    }
    assert_eq!(graph_girth(&hs), Some(5));
    assert_eq!(hs.diameter(), ExtDist::from_integer(2));
    let params = moore_detect(&hs).expect("Hoffman-Singleton is a Moore graph");
    assert_eq!(
        params,
        MooreParams {
            degree: 7,
            diameter: 2,
            vertex_count: 50
        }
    );
    assert_eq!(moore_rank(&params, 2, 3).unwrap(), BigInt::from(12600));
    assert_eq!(theta_count(&hs, 2, 3), 12600);
    println!("acceptance criterion 3 (Hoffman-Singleton graph and R(2,3)=12600): PASS");
}

/// Criterion 4: the missing Moore graph, pure arithmetic.
#[test]
fn criterion_4_missing_moore() {
    let params = MooreParams::missing_moore();
    assert_eq!(
        params,
        MooreParams {
            degree: 57,
            diameter: 2,
            vertex_count: 3250
        }
    );
    let expected = BigInt::from(3250u64) * BigInt::from(178752u64);
    assert_eq!(moore_rank_recurrence(&params, 2, 3), expected);
    assert_eq!(moore_rank_closed_form(&params, 2, 3), expected);
    assert_eq!(
        moore_magnitude(&params).to_string(),
        "3250/(1 + 57q + 3192q^2)"
    );
    println!("acceptance criterion 4 (missing Moore graph formulas): PASS");
}

/// Criterion 5: even cycles C6 and C8 — cycle chains, spanning families,
/// and the N / 2N / 0 rank pattern including off-support zeros.
#[test]
fn criterion_5_even_cycles() {
    for n_verts in [6usize, 8] {
        let space = fam(Family::Cycle(n_verts));
        let m = (n_verts / 2) as i64;
        // Every θ_{pq}(x) with p + q ≤ 4 is a cycle.
        for p in 0..=4i64 {
            for q in 0..=4 - p {
                for x in 0..n_verts {
                    let chain = even_theta(&space, p, q, x).unwrap();
                    assert!(
                        is_cycle(&space, &chain, Variant::Normalized).unwrap(),
                        "θ_{{{},{}}}({}) on C{}",
                        p,
                        q,
                        x,
                        n_verts
                    );
                }
            }
        }
        // Rank pattern against the SNF oracle on the whole window,
        // including off-support zeros past the largest support length,
        // and spanning families on support.
        let checks: Vec<(i64, i64)> = (0..=4i64)
            .flat_map(|n| (0..=2 * m + 2).map(move |l| (n, l)))
            .collect();
        checks.par_iter().for_each(|&(n, l)| {
            let expected = even_rank(n_verts, n, l).unwrap();
            let group = snf_group(&space, n as usize, l);
            assert_eq!(
                (group.rank, group.torsion.len()),
                (expected, 0),
                "C{} at ({}, {})",
                n_verts,
                n,
                l
            );
            if expected > 0 {
                let i = (l - n) / (m - 2);
                let j = n - 2 * i;
                let mut chains = Vec::new();
                for x in 0..n_verts {
                    if j == 0 {
                        chains.push(even_theta(&space, i, i, x).unwrap());
                    } else {
                        chains.push(even_theta(&space, i + j, i, x).unwrap());
                        chains.push(even_theta(&space, i, i + j, x).unwrap());
                    }
                }
                assert!(
                    classes_span(&space, &chains, n as usize, &rat(l)).unwrap(),
                    "family at C{} ({}, {})",
                    n_verts,
                    n,
                    l
                );
            }
        });
    }
    println!("acceptance criterion 5 (even cycles C6, C8): PASS");
}

/// The shared corpus: at least 50 seeded random geodetic graphs on at most
/// 9 vertices, plus the named small families.
fn geodetic_corpus() -> Vec<(String, QuasiMetricSpace)> {
    let mut corpus: Vec<(String, QuasiMetricSpace)> = Vec::new();
    for n in 3..=6 {
        corpus.push((format!("complete({})", n), fam(Family::Complete(n))));
    }
    for n in 3..=7 {
        corpus.push((format!("path({})", n), fam(Family::Path(n))));
    }
    for n in 4..=6 {
        corpus.push((format!("star({})", n), fam(Family::Star(n))));
    }
    corpus.push(("cycle(5)".into(), fam(Family::Cycle(5))));
    corpus.push(("cycle(7)".into(), fam(Family::Cycle(7))));
    let mut random_found = 0;
    let mut seed = 0u64;
    while random_found < 50 {
        let vertices = 5 + (seed as usize) % 5;
        let family = Family::RandomGraph {
            vertices,
            edge_probability: 0.3,
            seed,
        };
        let space = fam(family);
        if space.is_geodetic() {
            corpus.push((format!("random(v={}, seed={})", vertices, seed), space));
            random_found += 1;
        }
        seed += 1;
    }
    corpus
}

/// Criterion 6: the diagonality criterion over the corpus — four-cut
/// emptiness is equivalent to vanishing off-diagonal homology in the
/// window n ≤ 4, ℓ ≤ 6.
#[test]
fn criterion_6_diagonality_criterion() {
    let corpus = geodetic_corpus();
    corpus.par_iter().for_each(|(name, space)| {
        assert!(space.is_geodetic(), "{} must be geodetic", name);
        let has_cut = !space.four_cuts(Some(1)).is_empty();
        let mut off_diagonal_nonzero = false;
        let mut nonzero_at_two = false;
        for n in 0..=4usize {
            for l in 0..=6i64 {
                if l == n as i64 {
                    continue;
                }
                let group = snf_group(space, n, l);
                if !group.is_zero() {
                    off_diagonal_nonzero = true;
                    if n == 2 {
                        nonzero_at_two = true;
                    }
                }
            }
        }
        assert_eq!(
            has_cut, off_diagonal_nonzero,
            "diagonality criterion failed on {}",
            name
        );
        // The 2-diagonality refinement: a 4-cut forces the failure to show
        // up already at homological degree two.
        if has_cut {
            assert!(
                nonzero_at_two,
                "2-diagonality refinement failed on {}",
                name
            );
        }
    });
    println!(
        "acceptance criterion 6 (diagonality ⟺ no 4-cut on {} corpus spaces): PASS",
        corpus.len()
    );
}

/// Criterion 7: Θ-vs-oracle equivalence over the corpus: ranks, torsion,
/// cycle property, and spanning, at every in-budget bidegree.
#[test]
fn criterion_7_theta_vs_oracle() {
    let corpus = geodetic_corpus();
    let budget = 20_000usize;
    corpus.par_iter().for_each(|(name, space)| {
        for n in 0..=4usize {
            for l in 0..=6i64 {
                let ell = rat(l);
                let dims_ok = [
                    maghom::chain::enumerate_basis(space, n, &ell, Variant::Normalized).dim(),
                    maghom::chain::enumerate_basis(space, n + 1, &ell, Variant::Normalized).dim(),
                ]
                .iter()
                .all(|&d| d <= budget);
                if !dims_ok {
                    continue;
                }
                let basis = theta_enumerate(space, n, &ell).unwrap();
                let group = snf_group(space, n, l);
                assert_eq!(
                    group.rank,
                    basis.tuples.len(),
                    "rank mismatch on {} at ({}, {})",
                    name,
                    n,
                    l
                );
                assert!(
                    group.torsion.is_empty(),
                    "torsion on {} at ({}, {})",
                    name,
                    n,
                    l
                );
                let mut chains = Vec::with_capacity(basis.tuples.len());
                for t in &basis.tuples {
                    let mut c = Chain::zero(n, ell.clone());
                    c.add_trail(t.clone(), BigInt::one());
                    assert!(
                        is_cycle(space, &c, Variant::Normalized).unwrap(),
                        "non-cycle Θ tuple on {} at ({}, {})",
                        name,
                        n,
                        l
                    );
                    chains.push(c);
                }
                assert!(
                    classes_span(space, &chains, n, &ell).unwrap(),
                    "Θ classes do not span on {} at ({}, {})",
                    name,
                    n,
                    l
                );
            }
        }
    });
    println!(
        "acceptance criterion 7 (Θ = SNF oracle on {} corpus spaces): PASS",
        corpus.len()
    );
}

/// Criterion 8: thin frames equal Θ strictly below m_X; C5 exhibits strict
/// disagreement at ℓ = m_X.
#[test]
fn criterion_8_thin_frames() {
    let corpus = geodetic_corpus();
    corpus.par_iter().for_each(|(name, space)| {
        let m_x = space.m_x();
        for n in 1..=4usize {
            for l in 1..=6i64 {
                let ell = rat(l);
                if ExtDist::Finite(ell.clone()) >= m_x {
                    continue;
                }
                let thin: BTreeSet<Vec<usize>> = thin_frames(space, n, &ell)
                    .iter()
                    .map(|t| t.points().to_vec())
                    .collect();
                let theta: BTreeSet<Vec<usize>> = theta_enumerate(space, n, &ell)
                    .unwrap()
                    .tuples
                    .iter()
                    .map(|t| t.points().to_vec())
                    .collect();
                assert_eq!(
                    thin, theta,
                    "thin ≠ Θ below m_X on {} at ({}, {})",
                    name, n, l
                );
            }
        }
    });
    // Strict disagreement at ℓ ≥ m_X: C5 at (2, 3).
    let c5 = fam(Family::Cycle(5));
    assert_eq!(c5.m_x(), ExtDist::from_integer(3));
    let thin = thin_frames(&c5, 2, &rat(3));
    let theta = theta_enumerate(&c5, 2, &rat(3)).unwrap();
    assert!(thin.is_empty());
    assert_eq!(theta.tuples.len(), 10);
    println!("acceptance criterion 8 (thin frames vs Θ around m_X): PASS");
}

/// Criterion 9: resolution certifications with negative controls.
#[test]
fn criterion_9_resolutions() {
    // Minimal resolutions, exact up to degree 5 (stages through 6).
    let geodetic: Vec<(String, QuasiMetricSpace)> = vec![
        ("cycle(5)".into(), fam(Family::Cycle(5))),
        ("cycle(7)".into(), fam(Family::Cycle(7))),
        ("complete(4)".into(), fam(Family::Complete(4))),
        ("path(5)".into(), fam(Family::Path(5))),
    ];
    geodetic.par_iter().for_each(|(name, space)| {
        let stages = minimal_resolution_geodetic(space, 6).unwrap();
        let report = certify_exactness(&stages);
        assert!(report.composites_vanish, "composites on {}", name);
        assert!(report.augmentation_surjective, "augmentation on {}", name);
        for d in &report.degrees {
            assert!(
                d.exact,
                "exactness fails on {} at degree {}",
                name, d.degree
            );
        }
        assert!(verify_tensored_zero(&stages), "minimality on {}", name);
    });
    // The bar resolution is the non-minimal negative control.
    let k2 = fam(Family::Complete(2));
    let bar = bar_resolution(&k2, 3);
    assert!(certify_exactness(&bar).all_exact);
    assert!(!verify_tensored_zero(&bar));
    // Even-cycle operator relations.
    for n in [6usize, 8, 10] {
        let report = verify_mult_relations(n).unwrap();
        assert!(
            report.all_pass,
            "mult relations fail for N={}: {:?}",
            n, report
        );
    }
    // Total complex for C6 up to degree 4.
    let total = verify_total_complex(6, 4).unwrap();
    assert!(total.composites_vanish && total.tensored_zero);
    assert!(total.all_exact, "{:?}", total);
    // Chain map for C6 up to degree 3.
    let chain_map = verify_chain_map_f(6, 3, true).unwrap();
    assert!(chain_map.all_commute, "{:?}", chain_map);
    // Negative control 1: a flipped block sign breaks the double complex.
    let mut corrupted = even_double_complex(6, 2, 2).unwrap();
    let block = corrupted.horizontal.get_mut(&(1, 1)).unwrap();
    *block = block.scale(&BigInt::from(-1));
    assert!(!corrupted.verify_squares());
    let corrupted_report = verify_total_complex_of(&corrupted, 2);
    assert!(!corrupted_report.all_exact);
    // Negative control 2: dropping the shuffle signs breaks the chain map,
    // first at degree two.
    let unsigned = verify_chain_map_f(6, 3, false).unwrap();
    assert!(!unsigned.all_commute);
    assert_eq!(unsigned.first_failure, Some(2));
    println!("acceptance criterion 9 (resolution certifications + negative controls): PASS");
}

/// Criterion 10: magnitude series coefficients match alternating rank sums.
#[test]
fn criterion_10_euler_crosscheck() {
    let cases: Vec<(String, QuasiMetricSpace, i64)> = vec![
        ("cycle(5)".into(), fam(Family::Cycle(5)), 5),
        ("complete(2)".into(), fam(Family::Complete(2)), 6),
        ("complete(3)".into(), fam(Family::Complete(3)), 4),
        ("petersen".into(), fam(Family::Petersen), 3),
    ];
    cases.par_iter().for_each(|(name, space, l_max)| {
        let entries = euler_crosscheck(space, *l_max, None).unwrap();
        for e in &entries {
            assert!(
                e.matches,
                "euler mismatch on {} at ℓ={}: series {} vs ranks {}",
                name, e.ell, e.series_coefficient, e.alternating_rank_sum
            );
        }
        // The series itself must be integral for these graphs.
        let series = magnitude_distance_regular(space)
            .unwrap()
            .series(*l_max as usize);
        assert!(
            series.iter().all(|c| c.is_integer()),
            "non-integer series on {}",
            name
        );
    });
    // Spot value: the (2,3) cycle count on C5 feeds the ℓ=3 coefficient.
    let c5 = fam(Family::Cycle(5));
    let params = moore_detect(&c5).unwrap();
    assert_eq!(moore_cycles(&c5, &params, 2, 3).unwrap().len(), 10);
    println!("acceptance criterion 10 (Euler characteristic cross-check): PASS");
}
