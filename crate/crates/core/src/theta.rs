//! The combinatorial basis machinery for geodetic spaces: the κ and β
//! operators on pair sets, Θ-tuple enumeration, thin frames, and the
//! diagonality criterion.
//!
//! For a geodetic space the Θ tuples at `(n, ℓ)` form a basis of the
//! magnitude homology group there, so enumeration doubles as an exact rank
//! computation that never touches linear algebra.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::chain::{enumerate_basis, Variant};
use crate::space::{FourCut, QuasiMetricSpace, Trail};

/// A set of ordered finite-distance pairs `e_{xy}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairSet(pub BTreeSet<(usize, usize)>);

impl PairSet {
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        PairSet(pairs.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.0.contains(&pair)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("the space is not geodetic; witness interval I({a}, {b}) has incomparable {x}, {y}")]
    NotGeodetic {
        a: usize,
        b: usize,
        x: usize,
        y: usize,
    },
}

fn require_geodetic(space: &QuasiMetricSpace) -> Result<(), ThetaError> {
    match space.geodetic_witness() {
        None => Ok(()),
        Some((a, b, x, y)) => Err(ThetaError::NotGeodetic { a, b, x, y }),
    }
}

/// `κ(e_{xy})`: the pairs `e_{yw}` with finite `d(y, w)` and `¬(x ≤ y ≤ w)`,
/// i.e. the kernel directions of left multiplication by `e_{xy}` on the
/// column `{y} × X`.
pub fn kappa(space: &QuasiMetricSpace, e: (usize, usize)) -> PairSet {
    let (x, y) = e;
    debug_assert!(space.dist(x, y).is_finite());
    PairSet(
        (0..space.point_count())
            .filter(|&w| space.dist(y, w).is_finite() && !space.between(x, y, w))
            .map(|w| (y, w))
            .collect(),
    )
}

/// `ι(e_{xy}, X²_f)`: the image pairs `e_{xw}` with `x ≤ y ≤ w`.
pub fn iota_left(space: &QuasiMetricSpace, e: (usize, usize)) -> PairSet {
    let (x, y) = e;
    PairSet(
        (0..space.point_count())
            .filter(|&w| space.between(x, y, w))
            .map(|w| (x, w))
            .collect(),
    )
}

/// `β(S)`: removes every `e_{zw}` reachable as a proper right-multiple of
/// another member, leaving the minimal generators of `ℤS` over σX.
///
/// Concretely, `e_{zw}` is removed when some `a ≠ w` has `e_{za} ∈ S` and
/// `z ≤ a ≤ w`.
pub fn beta(space: &QuasiMetricSpace, s: &PairSet) -> PairSet {
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for (z, a) in s.iter() {
        by_source.entry(z).or_default().push(a);
    }
    PairSet(
        s.iter()
            .filter(|&(z, w)| {
                by_source[&z]
                    .iter()
                    .all(|&a| a == w || !space.between(z, a, w))
            })
            .collect(),
    )
}

/// `βκ` of a single pair, the extension set in the Θ recursion.
pub fn beta_kappa(space: &QuasiMetricSpace, e: (usize, usize)) -> PairSet {
    beta(space, &kappa(space, e))
}

/// The seed set `β(X²_{f+})`: ordered pairs of distinct points with no
/// strictly intermediate point.
pub fn theta_seeds(space: &QuasiMetricSpace) -> PairSet {
    beta(space, &PairSet::from_pairs(space.positive_pairs()))
}

/// The Θ basis at one bidegree.
#[derive(Debug, Clone)]
pub struct ThetaBasis {
    pub n: usize,
    pub ell: BigRational,
    pub tuples: Vec<Trail>,
}

/// Enumerates `Θ_n^ℓ(β(X²_{f+}))` by depth-first extension: seeds are the
/// β pairs, a partial tuple extends by the pairs in `βκ` of its last edge,
/// and branches whose accumulated length cannot reach `ℓ` exactly are
/// pruned. Output is in lexicographic order.
pub fn theta_enumerate(
    space: &QuasiMetricSpace,
    n: usize,
    ell: &BigRational,
) -> Result<ThetaBasis, ThetaError> {
    require_geodetic(space)?;
    let mut tuples = Vec::new();
    if n == 0 {
        if ell.is_zero() {
            for x in 0..space.point_count() {
                tuples.push(Trail::new(space, vec![x]).expect("single point"));
            }
        }
        return Ok(ThetaBasis {
            n,
            ell: ell.clone(),
            tuples,
        });
    }
    let min_step = space.min_positive_distance();
    let max_step = space.max_finite_distance();
    let mut memo: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    let mut points: Vec<usize> = Vec::with_capacity(n + 1);
    for (x0, x1) in theta_seeds(space).iter() {
        let step = space.dist(x0, x1).finite().expect("seed is finite").clone();
        if &step > ell {
            continue;
        }
        points.push(x0);
        points.push(x1);
        extend_theta(
            space,
            n,
            ell,
            &mut points,
            step,
            min_step.as_ref(),
            max_step.as_ref(),
            &mut memo,
            &mut tuples,
        );
        points.clear();
    }
    Ok(ThetaBasis {
        n,
        ell: ell.clone(),
        tuples,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_theta(
    space: &QuasiMetricSpace,
    n: usize,
    ell: &BigRational,
    points: &mut Vec<usize>,
    acc: BigRational,
    min_step: Option<&BigRational>,
    max_step: Option<&BigRational>,
    memo: &mut HashMap<(usize, usize), Vec<(usize, usize)>>,
    out: &mut Vec<Trail>,
) {
    let remaining = n + 1 - points.len();
    if remaining == 0 {
        if &acc == ell {
            out.push(Trail::new(space, points.clone()).expect("finite steps"));
        }
        return;
    }
    // Admissible pruning: every extension step has positive length, bounded
    // below by the global minimum positive distance.
    if let Some(m) = min_step {
        if &acc + m * BigRational::from_integer(remaining.into()) > *ell {
            return;
        }
    }
    if let Some(mx) = max_step {
        if &acc + mx * BigRational::from_integer(remaining.into()) < *ell {
            return;
        }
    }
    let last_edge = (points[points.len() - 2], points[points.len() - 1]);
    let extensions = memo
        .entry(last_edge)
        .or_insert_with(|| beta_kappa(space, last_edge).iter().collect())
        .clone();
    for (_, w) in extensions {
        let step = space
            .dist(last_edge.1, w)
            .finite()
            .expect("βκ pairs are finite")
            .clone();
        let acc2 = &acc + &step;
        if &acc2 > ell {
            continue;
        }
        points.push(w);
        extend_theta(space, n, ell, points, acc2, min_step, max_step, memo, out);
        points.pop();
    }
}

/// Enumerates `Θ_n(β(X²_{f+}))` across all lengths, in lexicographic order.
/// This is the generator stratum of stage `n` of the minimal resolution.
pub fn theta_enumerate_all(space: &QuasiMetricSpace, n: usize) -> Result<Vec<Trail>, ThetaError> {
    require_geodetic(space)?;
    let mut tuples = Vec::new();
    if n == 0 {
        for x in 0..space.point_count() {
            tuples.push(Trail::new(space, vec![x]).expect("single point"));
        }
        return Ok(tuples);
    }
    let mut memo: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    fn go(
        space: &QuasiMetricSpace,
        n: usize,
        points: &mut Vec<usize>,
        memo: &mut HashMap<(usize, usize), Vec<(usize, usize)>>,
        out: &mut Vec<Trail>,
    ) {
        if points.len() == n + 1 {
            out.push(Trail::new(space, points.clone()).expect("finite steps"));
            return;
        }
        let last_edge = (points[points.len() - 2], points[points.len() - 1]);
        let extensions = memo
            .entry(last_edge)
            .or_insert_with(|| beta_kappa(space, last_edge).iter().collect())
            .clone();
        for (_, w) in extensions {
            points.push(w);
            go(space, n, points, memo, out);
            points.pop();
        }
    }
    let mut points = Vec::with_capacity(n + 1);
    for (x0, x1) in theta_seeds(space).iter() {
        points.push(x0);
        points.push(x1);
        go(space, n, &mut points, &mut memo, &mut tuples);
        points.clear();
    }
    Ok(tuples)
}

/// Direct re-check of the basis conditions for a tuple, independent of the
/// recursive enumeration: first step is a β pair, no interior betweenness,
/// and every proper intermediate of an interior step is reachable from the
/// previous point.
pub fn theta_conditions_hold(space: &QuasiMetricSpace, points: &[usize]) -> bool {
    let n = points.len() - 1;
    if n == 0 {
        return true;
    }
    let (x0, x1) = (points[0], points[1]);
    if x0 == x1 || !space.dist(x0, x1).is_finite() {
        return false;
    }
    for w in points.windows(2) {
        if !space.dist(w[0], w[1]).is_finite() {
            return false;
        }
    }
    // First pair saturated.
    let sat = (0..space.point_count()).all(|a| a == x0 || a == x1 || !space.between(x0, a, x1));
    if !sat {
        return false;
    }
    for i in 1..n {
        if space.between(points[i - 1], points[i], points[i + 1]) {
            return false;
        }
        for a in 0..space.point_count() {
            if a != points[i + 1]
                && space.between(points[i], a, points[i + 1])
                && !space.between(points[i - 1], points[i], a)
            {
                return false;
            }
        }
    }
    true
}

/// All thin frames of degree `n` and length `ℓ`: tuples with no interior
/// betweenness whose every step is a saturated pair.
pub fn thin_frames(space: &QuasiMetricSpace, n: usize, ell: &BigRational) -> Vec<Trail> {
    let piece = enumerate_basis(space, n, ell, Variant::Unnormalized);
    piece
        .basis()
        .iter()
        .filter(|t| {
            let p = t.points();
            (1..n).all(|i| !space.between(p[i - 1], p[i], p[i + 1]))
                && p.windows(2).all(|w| {
                    (0..space.point_count())
                        .all(|a| a == w[0] || a == w[1] || !space.between(w[0], a, w[1]))
                })
        })
        .cloned()
        .collect()
}

/// Verdict of the diagonality criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagonalityCertificate {
    NoFourCut,
    MinimalFourCut(FourCut),
}

/// A finite geodetic space is diagonal exactly when it has no 4-cut. The
/// certificate is either that emptiness or a minimal-length 4-cut.
pub fn is_diagonal(space: &QuasiMetricSpace) -> Result<(bool, DiagonalityCertificate), ThetaError> {
    require_geodetic(space)?;
    match space.minimal_four_cut() {
        None => Ok((true, DiagonalityCertificate::NoFourCut)),
        Some(fc) => Ok((false, DiagonalityCertificate::MinimalFourCut(fc))),
    }
}

/// Predicted homology rank at `(n, ℓ)`: the number of Θ tuples there.
pub fn rank_prediction(
    space: &QuasiMetricSpace,
    n: usize,
    ell: &BigRational,
) -> Result<usize, ThetaError> {
    Ok(theta_enumerate(space, n, ell)?.tuples.len())
}
