//! Magnitude chain complexes as explicit sparse integer matrices, and the
//! distance algebra σX with its multiplication operators.
//!
//! A graded piece is indexed by a homological degree `n` and an exact
//! rational length `ℓ`. Bases are ordered lexicographically on point-index
//! sequences so every matrix is reproducible bit for bit.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matrix::SparseIntMatrix;
use crate::space::{ExtDist, QuasiMetricSpace, SpaceError, Trail};

/// Which magnitude chain complex to build.
///
/// The normalized complex generates on tuples with distinct consecutive
/// points and sums interior faces only; the unnormalized complex allows
/// repeated consecutive points and uses the formal end conventions
/// `x_{-1} = x_1`, `x_{n+1} = x_{n-1}`. Both compute the same homology; the
/// unnormalized variant exists for cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Normalized,
    Unnormalized,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("trail {0:?} is not a basis element of the requested graded piece")]
    UnknownTrail(Vec<usize>),
    #[error("the space is not the standard even cycle C_N with N even and ≥ 6")]
    NotAnEvenCycle,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// An ordered basis of trails for one `(n, ℓ)` bidegree.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub n: usize,
    pub ell: BigRational,
    pub variant: Variant,
    basis: Vec<Trail>,
    index: HashMap<Vec<usize>, usize>,
}

impl GradedPiece {
    pub fn basis(&self) -> &[Trail] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, points: &[usize]) -> Option<usize> {
        self.index.get(points).copied()
    }
}

/// All trails of degree `n` and exact length `ell`, in lexicographic order.
pub fn enumerate_basis(
    space: &QuasiMetricSpace,
    n: usize,
    ell: &BigRational,
    variant: Variant,
) -> GradedPiece {
    let mut basis = Vec::new();
    let zero = BigRational::zero();
    if ell >= &zero {
        let min_step = space.min_positive_distance();
        let max_step = space.max_finite_distance();
        let mut points = Vec::with_capacity(n + 1);
        for start in 0..space.point_count() {
            points.push(start);
            extend_trails(
                space,
                n,
                ell,
                variant,
                &mut points,
                BigRational::zero(),
                min_step.as_ref(),
                max_step.as_ref(),
                &mut basis,
            );
            points.pop();
        }
    }
    let index = basis
        .iter()
        .enumerate()
        .map(|(i, t)| (t.points().to_vec(), i))
        .collect();
    GradedPiece {
        n,
        ell: ell.clone(),
        variant,
        basis,
        index,
    }
}

#[allow(clippy::too_many_arguments)]
fn extend_trails(
    space: &QuasiMetricSpace,
    n: usize,
    ell: &BigRational,
    variant: Variant,
    points: &mut Vec<usize>,
    acc: BigRational,
    min_step: Option<&BigRational>,
    max_step: Option<&BigRational>,
    out: &mut Vec<Trail>,
) {
    let remaining = n + 1 - points.len();
    if remaining == 0 {
        if &acc == ell {
            out.push(Trail::new(space, points.clone()).expect("steps already checked finite"));
        }
        return;
    }
    let last = *points.last().unwrap();
    for next in 0..space.point_count() {
        let step = match space.dist(last, next) {
            ExtDist::Finite(d) => d.clone(),
            ExtDist::Infinity => continue,
        };
        if variant == Variant::Normalized && next == last {
            continue;
        }
        let acc2 = &acc + &step;
        if &acc2 > ell {
            continue;
        }
        // Admissible pruning: each further step is at least the minimum
        // positive distance (zero in the unnormalized variant) and at most
        // the maximum finite distance.
        let further = remaining - 1;
        if further > 0 {
            if variant == Variant::Normalized {
                if let Some(m) = min_step {
                    if &acc2 + m * BigRational::from_integer(further.into()) > *ell {
                        continue;
                    }
                }
            }
            match max_step {
                Some(mx) => {
                    if &acc2 + mx * BigRational::from_integer(further.into()) < *ell {
                        continue;
                    }
                }
                None => continue,
            }
        }
        points.push(next);
        extend_trails(
            space, n, ell, variant, points, acc2, min_step, max_step, out,
        );
        points.pop();
    }
}

/// Whether face `i` of the tuple is deleted by the boundary, honoring the
/// formal conventions of the chosen variant.
fn face_fires(space: &QuasiMetricSpace, points: &[usize], i: usize, variant: Variant) -> bool {
    let n = points.len() - 1;
    match variant {
        Variant::Normalized => {
            debug_assert!(i >= 1 && i < n);
            space.between(points[i - 1], points[i], points[i + 1])
        }
        Variant::Unnormalized => {
            let prev = if i == 0 { points[1] } else { points[i - 1] };
            let next = if i == n { points[n - 1] } else { points[i + 1] };
            space.between(prev, points[i], next)
        }
    }
}

fn face_range(n: usize, variant: Variant) -> std::ops::Range<usize> {
    match variant {
        Variant::Normalized => {
            if n >= 2 {
                1..n
            } else {
                0..0
            }
        }
        Variant::Unnormalized => 0..n + 1,
    }
}

/// The matrix of `∂ = Σ_i (−1)^i ∂_{n,i}` from the `(n, ℓ)` basis to the
/// `(n−1, ℓ)` basis.
pub fn boundary_matrix_between(
    space: &QuasiMetricSpace,
    source: &GradedPiece,
    target: &GradedPiece,
) -> SparseIntMatrix {
    assert_eq!(source.variant, target.variant);
    assert!(source.n == target.n + 1 || source.n == 0);
    assert_eq!(source.ell, target.ell);
    let mut m = SparseIntMatrix::zero(target.dim(), source.dim());
    if source.n == 0 {
        return m;
    }
    let variant = source.variant;
    for (col, trail) in source.basis().iter().enumerate() {
        let points = trail.points();
        for i in face_range(source.n, variant) {
            if !face_fires(space, points, i, variant) {
                continue;
            }
            let mut image: Vec<usize> = Vec::with_capacity(points.len() - 1);
            image.extend_from_slice(&points[..i]);
            image.extend_from_slice(&points[i + 1..]);
            let row = target
                .position(&image)
                .expect("boundary image must stay in the graded piece");
            let sign = if i % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            m.add_to(row, col, &sign);
        }
    }
    m
}

/// Boundary matrix at `(n, ℓ)`, building both bases on demand.
pub fn boundary_matrix(
    space: &QuasiMetricSpace,
    n: usize,
    ell: &BigRational,
    variant: Variant,
) -> SparseIntMatrix {
    let source = enumerate_basis(space, n, ell, variant);
    if n == 0 {
        return SparseIntMatrix::zero(0, source.dim());
    }
    let target = enumerate_basis(space, n - 1, ell, variant);
    boundary_matrix_between(space, &source, &target)
}

/// A finite integer combination of trails of common degree and length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub n: usize,
    pub ell: BigRational,
    coeffs: BTreeMap<Trail, BigInt>,
}

impl Chain {
    pub fn zero(n: usize, ell: BigRational) -> Self {
        Chain {
            n,
            ell,
            coeffs: BTreeMap::new(),
        }
    }

    /// Accumulates `coeff · trail`, dropping the trail when the total
    /// coefficient cancels to zero.
    pub fn add_trail(&mut self, trail: Trail, coeff: BigInt) {
        assert_eq!(trail.degree(), self.n, "degree mismatch");
        assert_eq!(*trail.length(), self.ell, "length mismatch");
        if coeff.is_zero() {
            return;
        }
        if let Some(e) = self.coeffs.get_mut(&trail) {
            *e += coeff;
            if e.is_zero() {
                self.coeffs.remove(&trail);
            }
        } else {
            self.coeffs.insert(trail, coeff);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Trail, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coordinate vector of the chain in a graded piece's basis.
    pub fn to_vector(&self, piece: &GradedPiece) -> Result<Vec<BigInt>, ChainError> {
        let mut v = vec![BigInt::zero(); piece.dim()];
        for (trail, coeff) in &self.coeffs {
            let pos = piece
                .position(trail.points())
                .ok_or_else(|| ChainError::UnknownTrail(trail.points().to_vec()))?;
            v[pos] = coeff.clone();
        }
        Ok(v)
    }
}

/// The distance algebra σX on the finite-distance pairs `e_{xy}`.
///
/// The product is `e_{xy}·e_{zw} = e_{xw}` when `y = z` and `x ≤ y ≤ w`,
/// zero otherwise; the unit is `Σ_x e_{xx}`.
#[derive(Debug, Clone)]
pub struct SigmaAlgebra<'a> {
    space: &'a QuasiMetricSpace,
    basis: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

/// An element of σX as a sparse integer combination of basis pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SigmaElement {
    pub coeffs: BTreeMap<(usize, usize), BigInt>,
}

impl SigmaElement {
    pub fn basis(pair: (usize, usize)) -> Self {
        SigmaElement {
            coeffs: BTreeMap::from([(pair, BigInt::one())]),
        }
    }

    pub fn add_term(&mut self, pair: (usize, usize), coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let e = self.coeffs.entry(pair).or_insert_with(BigInt::zero);
        *e += coeff;
        if e.is_zero() {
            self.coeffs.remove(&pair);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }
}

impl<'a> SigmaAlgebra<'a> {
    pub fn new(space: &'a QuasiMetricSpace) -> Self {
        let basis = space.finite_pairs();
        let index = basis.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        SigmaAlgebra {
            space,
            basis,
            index,
        }
    }

    pub fn space(&self) -> &QuasiMetricSpace {
        self.space
    }

    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, pair: (usize, usize)) -> Option<usize> {
        self.index.get(&pair).copied()
    }

    pub fn unit(&self) -> SigmaElement {
        let mut u = SigmaElement::default();
        for x in 0..self.space.point_count() {
            u.add_term((x, x), BigInt::one());
        }
        u
    }

    /// The structure constants: `e_{xy}·e_{zw}`, nonzero only on composable
    /// betweenness.
    pub fn product_pair(&self, a: (usize, usize), b: (usize, usize)) -> Option<(usize, usize)> {
        if a.1 == b.0 && self.space.between(a.0, a.1, b.1) {
            Some((a.0, b.1))
        } else {
            None
        }
    }

    pub fn multiply(&self, a: &SigmaElement, b: &SigmaElement) -> SigmaElement {
        let mut out = SigmaElement::default();
        for (&pa, ca) in &a.coeffs {
            for (&pb, cb) in &b.coeffs {
                if let Some(p) = self.product_pair(pa, pb) {
                    out.add_term(p, ca * cb);
                }
            }
        }
        out
    }

    pub fn power(&self, a: &SigmaElement, k: usize) -> SigmaElement {
        let mut out = self.unit();
        for _ in 0..k {
            out = self.multiply(a, &out);
        }
        out
    }

    /// The matrix of left multiplication `v ↦ element · v` on the pair
    /// basis.
    pub fn left_mult_matrix(&self, element: &SigmaElement) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::zero(self.dim(), self.dim());
        for (col, &pb) in self.basis.iter().enumerate() {
            for (&pa, ca) in &element.coeffs {
                if let Some(p) = self.product_pair(pa, pb) {
                    let row = self.position(p).expect("product stays in the basis");
                    m.add_to(row, col, ca);
                }
            }
        }
        m
    }

    /// The augmentation σX → ℤ^N killing all off-diagonal pairs.
    pub fn augmentation_matrix(&self) -> SparseIntMatrix {
        let n = self.space.point_count();
        let mut m = SparseIntMatrix::zero(n, self.dim());
        for (col, &(x, y)) in self.basis.iter().enumerate() {
            if x == y {
                m.set(x, col, BigInt::one());
            }
        }
        m
    }
}

/// Whether the space is the standard cycle graph metric on `0..N` with the
/// rotation `i ↦ i + 1 mod N`.
pub fn is_standard_cycle(space: &QuasiMetricSpace) -> bool {
    let n = space.point_count();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            let hop = (n + j - i) % n;
            let expected = ExtDist::from_integer(hop.min(n - hop) as u64);
            if space.dist(i, j) != &expected {
                return false;
            }
        }
    }
    true
}

/// The elements `a = Σ e_{i,i+1}` and `b = Σ e_{i,i−1}` of σC_N for an even
/// cycle, with the rotation direction fixed as `i ↦ i + 1 mod N`.
///
/// Both sums run over the full rotation orbit, so they are independent of
/// the basepoint used to write them down.
pub fn ab_elements(alg: &SigmaAlgebra<'_>) -> Result<(SigmaElement, SigmaElement), ChainError> {
    let n = alg.space().point_count();
    if n < 6 || !n.is_multiple_of(2) || !is_standard_cycle(alg.space()) {
        return Err(ChainError::NotAnEvenCycle);
    }
    let mut a = SigmaElement::default();
    let mut b = SigmaElement::default();
    for i in 0..n {
        a.add_term((i, (i + 1) % n), BigInt::one());
        b.add_term((i, (i + n - 1) % n), BigInt::one());
    }
    Ok((a, b))
}

/// Matrix export in the coordinate-list text format.
pub fn export_matrix(m: &SparseIntMatrix) -> String {
    m.to_coordinate_text()
}
