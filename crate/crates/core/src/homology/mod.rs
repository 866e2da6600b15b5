//! Integer homology of the magnitude chain complex via Smith normal form.

pub mod lattice;
pub mod snf;

pub use lattice::Lattice;
pub use snf::{kernel_basis, rank, smith_normal_form, IntegralSolver, SmithNormalForm};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::chain::{
    boundary_matrix_between, enumerate_basis, Chain, ChainError, GradedPiece, Variant,
};
use crate::space::QuasiMetricSpace;

/// Default cap on basis elements per bidegree before a computation is
/// refused.
pub const DEFAULT_BASIS_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("basis at (n={n}, ℓ={ell}) has {size} elements, over the cap of {cap}")]
    ResourceLimit {
        n: usize,
        ell: String,
        size: usize,
        cap: usize,
    },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("chains do not share the requested bidegree")]
    MixedBidegrees,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A finitely generated abelian group: free rank plus torsion coefficients
/// in a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

fn check_cap(piece: &GradedPiece, cap: usize) -> Result<(), HomologyError> {
    if piece.dim() > cap {
        return Err(HomologyError::ResourceLimit {
            n: piece.n,
            ell: crate::space::rational_string(&piece.ell),
            size: piece.dim(),
            cap,
        });
    }
    Ok(())
}

/// The magnitude homology group at `(n, ℓ)`.
///
/// The free rank is `dim ker ∂_n − rank ∂_{n+1}`; the torsion coefficients
/// are the nontrivial invariant factors of `∂_{n+1}`, which is exact because
/// the kernel of `∂_n` is a saturated sublattice.
pub fn homology(
    space: &QuasiMetricSpace,
    n: usize,
    ell: &BigRational,
    variant: Variant,
    cap: Option<usize>,
) -> Result<HomologyGroup, HomologyError> {
    let cap = cap.unwrap_or(DEFAULT_BASIS_CAP);
    let piece_n = enumerate_basis(space, n, ell, variant);
    check_cap(&piece_n, cap)?;
    if piece_n.dim() == 0 {
        return Ok(HomologyGroup::zero());
    }
    let piece_up = enumerate_basis(space, n + 1, ell, variant);
    check_cap(&piece_up, cap)?;
    let rank_down = if n == 0 {
        0
    } else {
        let piece_down = enumerate_basis(space, n - 1, ell, variant);
        check_cap(&piece_down, cap)?;
        let d_n = boundary_matrix_between(space, &piece_n, &piece_down);
        snf::rank(&d_n)
    };
    let d_up = boundary_matrix_between(space, &piece_up, &piece_n);
    let snf_up = snf::smith_normal_form(&d_up, false);
    let rank = piece_n.dim() - rank_down - snf_up.rank();
    Ok(HomologyGroup {
        rank,
        torsion: snf_up.torsion(),
    })
}

/// The boundary of a chain, computed termwise by the face formula of the
/// chosen variant.
pub fn boundary_of_chain(
    space: &QuasiMetricSpace,
    chain: &Chain,
    variant: Variant,
) -> Result<BTreeMap<Vec<usize>, BigInt>, HomologyError> {
    let n = chain.n;
    let mut acc: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
    for (trail, coeff) in chain.terms() {
        if variant == Variant::Normalized && !trail.is_nondegenerate() {
            return Err(ChainError::UnknownTrail(trail.points().to_vec()).into());
        }
        let points = trail.points();
        let range = match variant {
            Variant::Normalized => {
                if n >= 2 {
                    1..n
                } else {
                    0..0
                }
            }
            Variant::Unnormalized => 0..n + 1,
        };
        for i in range {
            let prev = if i == 0 { points[1] } else { points[i - 1] };
            let next = if i == n { points[n - 1] } else { points[i + 1] };
            if !space.between(prev, points[i], next) {
                continue;
            }
            let mut image = points.to_vec();
            image.remove(i);
            let sign = if i % 2 == 0 {
                coeff.clone()
            } else {
                -coeff.clone()
            };
            let e = acc.entry(image).or_insert_with(BigInt::zero);
            *e += sign;
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(acc)
}

/// Whether the chain's boundary vanishes identically.
pub fn is_cycle(
    space: &QuasiMetricSpace,
    chain: &Chain,
    variant: Variant,
) -> Result<bool, HomologyError> {
    Ok(boundary_of_chain(space, chain, variant)?.is_empty())
}

fn chains_matrix(
    chains: &[Chain],
    piece: &GradedPiece,
) -> Result<crate::matrix::SparseIntMatrix, HomologyError> {
    let mut columns = Vec::with_capacity(chains.len());
    for c in chains {
        columns.push(c.to_vector(piece)?);
    }
    Ok(crate::matrix::SparseIntMatrix::from_columns(
        piece.dim(),
        &columns,
    ))
}

fn classes_analysis(
    space: &QuasiMetricSpace,
    chains: &[Chain],
    n: usize,
    ell: &BigRational,
    cap: usize,
) -> Result<(bool, HomologyGroup), HomologyError> {
    for c in chains {
        if c.n != n || &c.ell != ell {
            return Err(HomologyError::MixedBidegrees);
        }
        if !is_cycle(space, c, Variant::Normalized)? {
            return Err(HomologyError::NotACycle);
        }
    }
    let group = homology(space, n, ell, Variant::Normalized, Some(cap))?;
    if chains.is_empty() {
        return Ok((true, group));
    }
    let piece_n = enumerate_basis(space, n, ell, Variant::Normalized);
    let piece_up = enumerate_basis(space, n + 1, ell, Variant::Normalized);
    let d_up = boundary_matrix_between(space, &piece_up, &piece_n);
    let c = chains_matrix(chains, &piece_n)?;
    let rank_b = snf::rank(&d_up);
    let rank_bc = snf::rank(&d_up.hstack(&c));
    let independent_rational = rank_bc == rank_b + chains.len();
    let independent = independent_rational && group.is_free() && group.rank >= chains.len();
    Ok((independent, group))
}

/// Whether the homology classes of the given cycles are linearly
/// independent. Requires the group to be torsion-free, where the rational
/// rank comparison against `im ∂_{n+1}` is conclusive.
pub fn classes_independent(
    space: &QuasiMetricSpace,
    chains: &[Chain],
    n: usize,
    ell: &BigRational,
) -> Result<bool, HomologyError> {
    classes_analysis(space, chains, n, ell, DEFAULT_BASIS_CAP).map(|(ind, _)| ind)
}

/// Whether the classes form a basis: independent, as many as the free rank,
/// and no torsion.
pub fn classes_span(
    space: &QuasiMetricSpace,
    chains: &[Chain],
    n: usize,
    ell: &BigRational,
) -> Result<bool, HomologyError> {
    let (independent, group) = classes_analysis(space, chains, n, ell, DEFAULT_BASIS_CAP)?;
    if chains.is_empty() {
        return Ok(group.is_zero());
    }
    Ok(independent && group.rank == chains.len() && group.is_free())
}

/// One row of a homology table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HomologyEntry {
    pub n: usize,
    pub ell: String,
    pub rank: usize,
    pub torsion: Vec<String>,
}

impl HomologyEntry {
    pub fn new(n: usize, ell: &BigRational, group: &HomologyGroup) -> Self {
        HomologyEntry {
            n,
            ell: crate::space::rational_string(ell),
            rank: group.rank,
            torsion: group.torsion.iter().map(|t| t.to_string()).collect(),
        }
    }
}

/// Convenience: homology of a one-term chain's bidegree with integer ℓ.
pub fn integer_ell(l: i64) -> BigRational {
    BigRational::from_integer(l.into())
}

/// Checks that the two chain-complex variants agree on a bidegree.
pub fn variants_agree(
    space: &QuasiMetricSpace,
    n: usize,
    ell: &BigRational,
    cap: Option<usize>,
) -> Result<bool, HomologyError> {
    let a = homology(space, n, ell, Variant::Normalized, cap)?;
    let b = homology(space, n, ell, Variant::Unnormalized, cap)?;
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Family, Trail};
    use num_traits::One;

    fn fam(f: Family) -> QuasiMetricSpace {
        f.build().unwrap()
    }

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn k2_diagonal_ranks() {
        // Alternating trails (0,1,0,…) and (1,0,1,…) generate rank 2 at
        // every (n, n); brute-force SNF confirms.
        let s = fam(Family::Complete(2));
        for n in 0..=5usize {
            let h = homology(&s, n, &rat(n as i64), Variant::Normalized, None).unwrap();
            assert_eq!((h.rank, h.torsion.len()), (2, 0), "K2 at n={}", n);
        }
    }

    #[test]
    fn c5_rank_at_two_three() {
        let s = fam(Family::Cycle(5));
        let h = homology(&s, 2, &rat(3), Variant::Normalized, None).unwrap();
        assert_eq!(h.rank, 10);
        assert!(h.is_free());
    }

    #[test]
    fn c6_rank_at_two_three() {
        let s = fam(Family::Cycle(6));
        let h = homology(&s, 2, &rat(3), Variant::Normalized, None).unwrap();
        assert_eq!(h.rank, 6);
        assert!(h.is_free());
    }

    #[test]
    fn empty_bidegree_is_zero_group() {
        let s = fam(Family::Complete(3));
        let h = homology(&s, 3, &rat(17), Variant::Normalized, None).unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn resource_limit_fires() {
        let s = fam(Family::Petersen);
        let err = homology(&s, 2, &rat(3), Variant::Normalized, Some(10)).unwrap_err();
        assert!(matches!(err, HomologyError::ResourceLimit { .. }));
    }

    #[test]
    fn variants_agree_on_small_corpus() {
        let randoms = (0..3).map(|seed| Family::RandomGraph {
            vertices: 6,
            edge_probability: 0.4,
            seed,
        });
        for family in [
            Family::Cycle(5),
            Family::Cycle(6),
            Family::Complete(3),
            Family::Path(4),
        ]
        .into_iter()
        .chain(randoms)
        {
            let s = fam(family.clone());
            for n in 0..=3usize {
                for l in 0..=4i64 {
                    assert!(
                        variants_agree(&s, n, &rat(l), None).unwrap(),
                        "variant mismatch on {:?} at ({}, {})",
                        family,
                        n,
                        l
                    );
                }
            }
        }
    }

    #[test]
    fn single_between_trail_is_not_a_cycle() {
        let s = fam(Family::Cycle(5));
        let mut c = Chain::zero(2, rat(2));
        c.add_trail(Trail::new(&s, vec![0, 1, 2]).unwrap(), BigInt::one());
        assert!(!is_cycle(&s, &c, Variant::Normalized).unwrap());
    }

    #[test]
    fn unknown_trail_is_reported() {
        let s = fam(Family::Complete(2));
        let mut c = Chain::zero(2, rat(1));
        // Degenerate trail: not a normalized basis element.
        c.add_trail(Trail::new(&s, vec![0, 0, 1]).unwrap(), BigInt::one());
        assert!(matches!(
            is_cycle(&s, &c, Variant::Normalized),
            Err(HomologyError::Chain(ChainError::UnknownTrail(_)))
        ));
    }

    #[test]
    fn independence_detects_boundaries_and_duplicates() {
        let s = fam(Family::Cycle(5));
        let ell = rat(3);
        // The Θ tuples at (2, 3) are independent and spanning.
        let basis = crate::theta::theta_enumerate(&s, 2, &ell).unwrap();
        let chains: Vec<Chain> = basis
            .tuples
            .iter()
            .map(|t| {
                let mut c = Chain::zero(2, ell.clone());
                c.add_trail(t.clone(), BigInt::one());
                c
            })
            .collect();
        assert!(classes_independent(&s, &chains, 2, &ell).unwrap());
        assert!(classes_span(&s, &chains, 2, &ell).unwrap());
        // Repeating a chain breaks independence.
        let mut with_duplicate = chains.clone();
        with_duplicate.push(chains[0].clone());
        assert!(!classes_independent(&s, &with_duplicate, 2, &ell).unwrap());
        // A boundary is a cycle whose class vanishes.
        let mut boundary = Chain::zero(2, ell.clone());
        boundary.add_trail(Trail::new(&s, vec![0, 2, 3]).unwrap(), -BigInt::one());
        boundary.add_trail(Trail::new(&s, vec![0, 1, 3]).unwrap(), BigInt::one());
        assert!(is_cycle(&s, &boundary, Variant::Normalized).unwrap());
        assert!(!classes_independent(&s, &[boundary], 2, &ell).unwrap());
        // A non-cycle input is rejected.
        let mut not_cycle = Chain::zero(2, rat(2));
        not_cycle.add_trail(Trail::new(&s, vec![0, 1, 2]).unwrap(), BigInt::one());
        assert!(matches!(
            classes_independent(&s, &[not_cycle], 2, &rat(2)),
            Err(HomologyError::NotACycle)
        ));
    }

    #[test]
    fn empty_family_spans_only_zero_groups() {
        let s = fam(Family::Cycle(5));
        assert!(classes_independent(&s, &[], 2, &rat(3)).unwrap());
        assert!(!classes_span(&s, &[], 2, &rat(3)).unwrap());
        assert!(classes_span(&s, &[], 2, &rat(5)).unwrap());
    }

    #[test]
    fn snf_diagonal_invariant_under_unimodular_moves() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rows = rng.gen_range(1..=5);
            let cols = rng.gen_range(1..=5);
            let mut m = crate::matrix::SparseIntMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen::<f64>() < 0.6 {
                        m.set(r, c, BigInt::from(rng.gen_range(-6i64..=6)));
                    }
                }
            }
            let base = smith_normal_form(&m, false).diag;
            // Random elementary row and column operations.
            let mut t = m.clone();
            for _ in 0..6 {
                let q = BigInt::from(rng.gen_range(-3i64..=3));
                if rows >= 2 {
                    let i = rng.gen_range(0..rows);
                    let mut j = rng.gen_range(0..rows);
                    if i == j {
                        j = (j + 1) % rows;
                    }
                    let mut e = crate::matrix::SparseIntMatrix::identity(rows);
                    e.set(i, j, q.clone());
                    t = e.mul(&t);
                }
                if cols >= 2 {
                    let i = rng.gen_range(0..cols);
                    let mut j = rng.gen_range(0..cols);
                    if i == j {
                        j = (j + 1) % cols;
                    }
                    let mut e = crate::matrix::SparseIntMatrix::identity(cols);
                    e.set(i, j, q);
                    t = t.mul(&e);
                }
            }
            assert_eq!(smith_normal_form(&t, false).diag, base);
        }
    }
}
