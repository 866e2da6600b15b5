//! Closed-form and generator-level results: Moore-graph rank formulas and
//! explicit cycle tuples, even-cycle cycle chains built from lattice-path
//! shuffles, and the magnitude function of distance-regular graphs.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chain::{is_standard_cycle, Chain};
use crate::homology::{homology, HomologyError};
use crate::space::{graph_girth, rational_string, ExtDist, QuasiMetricSpace, Trail};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("bidegree (n={n}, ℓ={ell}) is off the support lattice")]
    OffSupport { n: i64, ell: i64 },
    #[error("N = {0} is not an even integer ≥ 6")]
    BadN(usize),
    #[error("shuffle indices must be nonnegative, got ({p}, {q})")]
    BadShuffle { p: i64, q: i64 },
    #[error("the space is not the standard even cycle C_N")]
    NotAnEvenCycle,
    #[error("the space is not a Moore graph")]
    NotMoore,
    #[error("the space is not distance-degree regular")]
    NotDistanceRegular,
    #[error("magnitude function needs integer distances")]
    NonIntegerDistances,
    #[error("recurrence and closed form disagree at (n={n}, ℓ={ell}): {a} vs {b}")]
    ConventionMismatch {
        n: i64,
        ell: i64,
        a: String,
        b: String,
    },
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Binomial coefficient with the boundary conventions the rank formula
/// needs: `C(-1,-1) = 1`, and `C(s,t) = 0` when `s < t` or `t < 0 ≤ s`.
pub fn binomial(s: i64, t: i64) -> BigInt {
    if s == -1 && t == -1 {
        return BigInt::one();
    }
    if s < t || t < 0 {
        return BigInt::zero();
    }
    // Here 0 ≤ t ≤ s: the ordinary binomial coefficient.
    let mut acc = BigInt::one();
    for k in 0..t {
        acc = acc * BigInt::from(s - k) / BigInt::from(k + 1);
    }
    acc
}

/// Parameters of a Moore graph: degree, diameter, vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MooreParams {
    pub degree: u64,
    pub diameter: u64,
    pub vertex_count: u64,
}

impl MooreParams {
    pub fn new(degree: u64, diameter: u64) -> Self {
        let d = degree;
        let m = diameter;
        let mut vertex_count = 1u64;
        let mut layer = d;
        for _ in 0..m {
            vertex_count += layer;
            layer = layer.saturating_mul(d.saturating_sub(1));
        }
        MooreParams {
            degree,
            diameter,
            vertex_count,
        }
    }

    /// The missing Moore graph: degree 57, diameter 2, 3250 vertices.
    pub fn missing_moore() -> Self {
        MooreParams::new(57, 2)
    }

    /// The recurrence weight `D(D-1)^m`.
    pub fn weight(&self) -> BigInt {
        BigInt::from(self.degree) * BigInt::from(self.degree - 1).pow(self.diameter as u32)
    }

    /// Decomposes `(n, ℓ) = (2i+j, (m+1)i+j)`, when possible.
    pub fn support(&self, n: i64, ell: i64) -> Option<(i64, i64)> {
        let span = self.diameter as i64 - 1;
        debug_assert!(span >= 1, "diameter must exceed 1");
        let diff = ell - n;
        if diff < 0 || diff % span != 0 {
            return None;
        }
        let i = diff / span;
        let j = n - 2 * i;
        if j < 0 {
            return None;
        }
        Some((i, j))
    }
}

/// Detects Moore graph structure: regular, diameter `m > 1`, girth `2m + 1`,
/// and the extremal vertex count.
pub fn moore_detect(space: &QuasiMetricSpace) -> Option<MooreParams> {
    if !space.is_symmetric() || !space.all_finite() || space.point_count() < 3 {
        return None;
    }
    let n = space.point_count();
    let one = ExtDist::one();
    let degree = (0..n).filter(|&y| space.dist(0, y) == &one).count();
    for x in 1..n {
        if (0..n).filter(|&y| space.dist(x, y) == &one).count() != degree {
            return None;
        }
    }
    let diameter = match space.diameter() {
        ExtDist::Finite(d) => {
            if !d.is_integer() {
                return None;
            }
            let m: i64 = d.to_integer().try_into().ok()?;
            m as u64
        }
        ExtDist::Infinity => return None,
    };
    if diameter <= 1 {
        return None;
    }
    let girth = graph_girth(space)?;
    if girth != 2 * diameter + 1 {
        return None;
    }
    let params = MooreParams::new(degree as u64, diameter);
    if params.vertex_count != n as u64 {
        return None;
    }
    Some(params)
}

/// Evaluator A: the memoized rank recurrence
/// `R(n,ℓ) = R(n-1,ℓ-1) + D(D-1)^m R(n-2,ℓ-m-1)` with `R(0,0) = N`,
/// `R(1,1) = ND`, zero for negative arguments.
pub fn moore_rank_recurrence(params: &MooreParams, n: i64, ell: i64) -> BigInt {
    fn go(
        params: &MooreParams,
        n: i64,
        ell: i64,
        memo: &mut HashMap<(i64, i64), BigInt>,
    ) -> BigInt {
        if n < 0 || ell < 0 {
            return BigInt::zero();
        }
        if (n, ell) == (0, 0) {
            return BigInt::from(params.vertex_count);
        }
        if (n, ell) == (1, 1) {
            return BigInt::from(params.vertex_count) * BigInt::from(params.degree);
        }
        if let Some(v) = memo.get(&(n, ell)) {
            return v.clone();
        }
        let m = params.diameter as i64;
        let v = go(params, n - 1, ell - 1, memo)
            + params.weight() * go(params, n - 2, ell - m - 1, memo);
        memo.insert((n, ell), v.clone());
        v
    }
    go(params, n, ell, &mut HashMap::new())
}

/// Evaluator B: the closed form
/// `N (D(D-1)^m)^i (C(i+j-1, i-1) + D·C(i+j-1, i))` on the support lattice
/// `(n, ℓ) = (2i+j, (m+1)i+j)`, zero elsewhere.
pub fn moore_rank_closed_form(params: &MooreParams, n: i64, ell: i64) -> BigInt {
    match params.support(n, ell) {
        None => BigInt::zero(),
        Some((i, j)) => {
            let lambda_pow = params.weight().pow(i as u32);
            let combin =
                binomial(i + j - 1, i - 1) + BigInt::from(params.degree) * binomial(i + j - 1, i);
            BigInt::from(params.vertex_count) * lambda_pow * combin
        }
    }
}

/// The homology rank of a Moore graph at `(n, ℓ)`, computed by both
/// evaluators, which must agree.
pub fn moore_rank(params: &MooreParams, n: i64, ell: i64) -> Result<BigInt, ClosedFormError> {
    let a = moore_rank_recurrence(params, n, ell);
    let b = moore_rank_closed_form(params, n, ell);
    if a != b {
        return Err(ClosedFormError::ConventionMismatch {
            n,
            ell,
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    Ok(a)
}

/// Enumerates the explicit basis tuples of a Moore graph at `(n, ℓ)`:
/// arrangements of unit back-and-forth steps and distance-`m` steps, where
/// an `m`-step must follow a unit step that it does not compose with.
pub fn moore_cycles(
    space: &QuasiMetricSpace,
    params: &MooreParams,
    n: i64,
    ell: i64,
) -> Result<Vec<Trail>, ClosedFormError> {
    let (i, _j) = params
        .support(n, ell)
        .ok_or(ClosedFormError::OffSupport { n, ell })?;
    let n = n as usize;
    let m_steps_total = i as usize;
    let mut out = Vec::new();
    if n == 0 {
        for x in 0..space.point_count() {
            out.push(Trail::new(space, vec![x]).expect("single point"));
        }
        return Ok(out);
    }
    let one = ExtDist::one();
    let m_dist = ExtDist::from_integer(params.diameter);
    let mut points = Vec::with_capacity(n + 1);
    #[allow(clippy::too_many_arguments)]
    fn extend(
        space: &QuasiMetricSpace,
        n: usize,
        m_steps_total: usize,
        one: &ExtDist,
        m_dist: &ExtDist,
        points: &mut Vec<usize>,
        m_steps_used: usize,
        last_was_m: bool,
        out: &mut Vec<Trail>,
    ) {
        let k = points.len() - 1;
        if k == n {
            if m_steps_used == m_steps_total {
                out.push(Trail::new(space, points.clone()).expect("finite steps"));
            }
            return;
        }
        // Remaining steps must accommodate the missing m-steps.
        if m_steps_total - m_steps_used > n - k {
            return;
        }
        let last = points[k];
        for w in 0..space.point_count() {
            let d = space.dist(last, w);
            if d == one {
                // A unit step after a unit step must backtrack.
                if k >= 1 && !last_was_m && w != points[k - 1] {
                    continue;
                }
                points.push(w);
                extend(
                    space,
                    n,
                    m_steps_total,
                    one,
                    m_dist,
                    points,
                    m_steps_used,
                    false,
                    out,
                );
                points.pop();
            } else if d == m_dist {
                // An m-step needs a preceding unit step it does not extend.
                if k == 0 || last_was_m || m_steps_used == m_steps_total {
                    continue;
                }
                if space.between(last, points[k - 1], w) {
                    continue;
                }
                points.push(w);
                extend(
                    space,
                    n,
                    m_steps_total,
                    one,
                    m_dist,
                    points,
                    m_steps_used + 1,
                    true,
                    out,
                );
                points.pop();
            }
        }
    }
    for x0 in 0..space.point_count() {
        points.push(x0);
        extend(
            space,
            n,
            m_steps_total,
            &one,
            &m_dist,
            &mut points,
            0,
            false,
            &mut out,
        );
        points.pop();
    }
    Ok(out)
}

fn xi(t: i64) -> i64 {
    if t >= 0 {
        1
    } else {
        0
    }
}

/// The rotation exponent for one lattice step arriving at `(p, q)`.
/// Horizontal steps use `(-1)^{p+q+1}((m-2)ξ(q-p)+1)`; vertical steps are
/// the negated transpose.
pub fn lambda_exponent(step: (i64, i64), at: (i64, i64), m: i64) -> i64 {
    let (p, q) = at;
    match step {
        (1, 0) => {
            let sign = if (p + q + 1) % 2 == 0 { 1 } else { -1 };
            sign * ((m - 2) * xi(q - p) + 1)
        }
        (0, 1) => -lambda_exponent((1, 0), (q, p), m),
        _ => panic!("not a unit lattice step"),
    }
}

/// The sign `μ` attached to one lattice step: −1 exactly when the exponent
/// is `−(m−1)`.
pub fn mu_sign(step: (i64, i64), at: (i64, i64), _m: i64) -> i64 {
    let (p, q) = at;
    let e = match step {
        (1, 0) => (p + q + 1) * xi(q - p),
        (0, 1) => (p + q) * xi(p - q),
        _ => panic!("not a unit lattice step"),
    };
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All `(p, q)`-shuffles: monotone lattice paths from `(0,0)` to `(p,q)`,
/// as vertex sequences.
pub fn shuffles(p: i64, q: i64) -> Vec<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    let mut path = vec![(0i64, 0i64)];
    fn go(p: i64, q: i64, path: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
        let &(a, b) = path.last().unwrap();
        if (a, b) == (p, q) {
            out.push(path.clone());
            return;
        }
        if a < p {
            path.push((a + 1, b));
            go(p, q, path, out);
            path.pop();
        }
        if b < q {
            path.push((a, b + 1));
            go(p, q, path, out);
            path.pop();
        }
    }
    go(p, q, &mut path, &mut out);
    out
}

/// The sign exponent `ν(s) = n(n+1)/2 + #{i : λ_i = -(m-1)}`.
pub fn nu(shuffle: &[(i64, i64)], m: i64) -> i64 {
    let n = (shuffle.len() - 1) as i64;
    let mut count = 0;
    for w in shuffle.windows(2) {
        let step = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        if lambda_exponent(step, w[1], m) == -(m - 1) {
            count += 1;
        }
    }
    n * (n + 1) / 2 + count
}

/// The cycle chain `θ_{pq}(x) = Σ_s (−1)^{ν(s)} φ(x; s)` on the standard
/// even cycle. Trails coming from distinct shuffles may coincide; their
/// coefficients accumulate.
pub fn even_theta(
    space: &QuasiMetricSpace,
    p: i64,
    q: i64,
    basepoint: usize,
) -> Result<Chain, ClosedFormError> {
    if p < 0 || q < 0 {
        return Err(ClosedFormError::BadShuffle { p, q });
    }
    let n_verts = space.point_count();
    if n_verts < 6 || !n_verts.is_multiple_of(2) {
        return Err(ClosedFormError::BadN(n_verts));
    }
    if !is_standard_cycle(space) {
        return Err(ClosedFormError::NotAnEvenCycle);
    }
    let m = (n_verts / 2) as i64;
    let degree = p + q;
    let ell = BigRational::from_integer((m * p.min(q) + (p - q).abs()).into());
    let mut chain = Chain::zero(degree as usize, ell);
    for s in shuffles(p, q) {
        let mut vertex = basepoint as i64;
        let mut points = vec![basepoint];
        for w in s.windows(2) {
            let step = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let e = lambda_exponent(step, w[1], m);
            vertex = (vertex + e).rem_euclid(n_verts as i64);
            points.push(vertex as usize);
        }
        let sign = if nu(&s, m) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        chain.add_trail(
            Trail::new(space, points).expect("cycle steps are finite"),
            sign,
        );
    }
    Ok(chain)
}

/// The rank pattern for even cycles: `N` at `(2i, mi)`, `2N` at
/// `(2i+j, mi+j)` with `j > 0`, zero elsewhere.
pub fn even_rank(n_verts: usize, n: i64, ell: i64) -> Result<usize, ClosedFormError> {
    if n_verts < 6 || !n_verts.is_multiple_of(2) {
        return Err(ClosedFormError::BadN(n_verts));
    }
    let m = (n_verts / 2) as i64;
    let diff = ell - n;
    if n < 0 || ell < 0 || diff < 0 || diff % (m - 2) != 0 {
        return Ok(0);
    }
    let i = diff / (m - 2);
    let j = n - 2 * i;
    if j < 0 {
        return Ok(0);
    }
    Ok(if j == 0 { n_verts } else { 2 * n_verts })
}

/// A rational function in `q` with integer polynomial numerator and
/// denominator; the denominator has nonzero constant term so the power
/// series expansion is well defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: Vec<BigInt>,
    pub denominator: Vec<BigInt>,
}

impl RationalFunction {
    /// The first `order + 1` power series coefficients, by exact long
    /// division.
    pub fn series(&self, order: usize) -> Vec<BigRational> {
        let den0 = BigRational::from_integer(self.denominator[0].clone());
        assert!(!den0.is_zero(), "denominator constant term must be nonzero");
        let mut coeffs: Vec<BigRational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self
                .numerator
                .get(k)
                .cloned()
                .map(BigRational::from_integer)
                .unwrap_or_else(BigRational::zero);
            for j in 1..=k.min(self.denominator.len() - 1) {
                acc -= BigRational::from_integer(self.denominator[j].clone()) * &coeffs[k - j];
            }
            coeffs.push(acc / &den0);
        }
        coeffs
    }
}

impl std::fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let poly = |c: &[BigInt]| -> String {
            let terms: Vec<String> = c
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| match i {
                    0 => format!("{}", v),
                    1 if v.is_one() => "q".to_string(),
                    1 => format!("{}q", v),
                    _ if v.is_one() => format!("q^{}", i),
                    _ => format!("{}q^{}", v, i),
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        write!(f, "{}/({})", poly(&self.numerator), poly(&self.denominator))
    }
}

/// The magnitude function `N / Σ_ℓ D_ℓ q^ℓ` of a distance-degree regular
/// graph (integer distances required).
pub fn magnitude_distance_regular(
    space: &QuasiMetricSpace,
) -> Result<RationalFunction, ClosedFormError> {
    let distribution = space
        .distance_regularity()
        .map_err(|_| ClosedFormError::NotDistanceRegular)?
        .ok_or(ClosedFormError::NotDistanceRegular)?;
    let mut denominator = Vec::new();
    for (d, count) in &distribution {
        if !d.is_integer() {
            return Err(ClosedFormError::NonIntegerDistances);
        }
        let exp: usize = d
            .to_integer()
            .try_into()
            .map_err(|_| ClosedFormError::NonIntegerDistances)?;
        if denominator.len() <= exp {
            denominator.resize(exp + 1, BigInt::zero());
        }
        denominator[exp] = BigInt::from(*count);
    }
    Ok(RationalFunction {
        numerator: vec![BigInt::from(space.point_count())],
        denominator,
    })
}

/// Magnitude of a Moore graph directly from its parameters, using the layer
/// counts `D_ℓ = D(D-1)^{ℓ-1}`. This covers the missing Moore graph, which
/// has no explicit construction.
pub fn moore_magnitude(params: &MooreParams) -> RationalFunction {
    let mut denominator = vec![BigInt::one()];
    let mut layer = BigInt::from(params.degree);
    for _ in 0..params.diameter {
        denominator.push(layer.clone());
        layer *= BigInt::from(params.degree - 1);
    }
    RationalFunction {
        numerator: vec![BigInt::from(params.vertex_count)],
        denominator,
    }
}

/// One line of the Euler characteristic cross-check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EulerEntry {
    pub ell: i64,
    pub series_coefficient: String,
    pub alternating_rank_sum: String,
    pub matches: bool,
}

/// Verifies that the magnitude series coefficients equal the alternating
/// sums of homology ranks, length by length up to `l_max`.
pub fn euler_crosscheck(
    space: &QuasiMetricSpace,
    l_max: i64,
    cap: Option<usize>,
) -> Result<Vec<EulerEntry>, ClosedFormError> {
    let magnitude = magnitude_distance_regular(space)?;
    let series = magnitude.series(l_max as usize);
    let min_pos = space
        .min_positive_distance()
        .unwrap_or_else(BigRational::one);
    let mut out = Vec::new();
    for ell in 0..=l_max {
        let ell_rat = BigRational::from_integer(ell.into());
        // Ranks vanish once every step being minimal still overshoots ℓ.
        let n_max = (&ell_rat / &min_pos).floor().to_integer();
        let n_max: i64 = n_max.try_into().unwrap_or(i64::MAX);
        let mut alternating = BigInt::zero();
        for n in 0..=n_max {
            let h = homology(
                space,
                n as usize,
                &ell_rat,
                crate::chain::Variant::Normalized,
                cap,
            )?;
            let signed = BigInt::from(h.rank);
            if n % 2 == 0 {
                alternating += signed;
            } else {
                alternating -= signed;
            }
        }
        let coeff = &series[ell as usize];
        let matches = coeff == &BigRational::from_integer(alternating.clone());
        out.push(EulerEntry {
            ell,
            series_coefficient: rational_string(coeff),
            alternating_rank_sum: alternating.to_string(),
            matches,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Family;
    use num_traits::Signed;

    fn fam(f: Family) -> QuasiMetricSpace {
        f.build().unwrap()
    }

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(-1, -1), bi(1));
        assert_eq!(binomial(-1, 0), bi(0));
        assert_eq!(binomial(0, -1), bi(0));
        assert_eq!(binomial(3, -1), bi(0));
        assert_eq!(binomial(2, 3), bi(0));
        assert_eq!(binomial(0, 0), bi(1));
        assert_eq!(binomial(4, 2), bi(6));
        assert_eq!(binomial(5, 0), bi(1));
    }

    #[test]
    fn moore_detection() {
        assert_eq!(
            moore_detect(&fam(Family::Petersen)),
            Some(MooreParams {
                degree: 3,
                diameter: 2,
                vertex_count: 10
            })
        );
        assert_eq!(
            moore_detect(&fam(Family::Cycle(7))),
            Some(MooreParams {
                degree: 2,
                diameter: 3,
                vertex_count: 7
            })
        );
        assert_eq!(moore_detect(&fam(Family::Cycle(6))), None);
        assert_eq!(moore_detect(&fam(Family::Star(5))), None);
        // Complete graphs have diameter 1, outside the m > 1 regime.
        assert_eq!(moore_detect(&fam(Family::Complete(5))), None);
    }

    #[test]
    fn petersen_ranks() {
        let p = MooreParams::new(3, 2);
        assert_eq!(moore_rank(&p, 1, 1).unwrap(), bi(30));
        assert_eq!(moore_rank(&p, 2, 3).unwrap(), bi(120));
        assert_eq!(moore_rank(&p, 3, 4).unwrap(), bi(480));
        assert_eq!(moore_rank(&p, 2, 2).unwrap(), bi(30));
        assert_eq!(moore_rank(&p, 1, 2).unwrap(), bi(0));
    }

    #[test]
    fn c5_ranks() {
        let p = MooreParams::new(2, 2);
        assert_eq!(p.vertex_count, 5);
        assert_eq!(moore_rank(&p, 4, 5).unwrap(), bi(50));
        assert_eq!(moore_rank(&p, 3, 4).unwrap(), bi(30));
        assert_eq!(moore_rank(&p, 4, 6).unwrap(), bi(20));
    }

    #[test]
    fn evaluators_agree_widely() {
        for (d, m) in [(2u64, 2u64), (2, 3), (3, 2), (7, 2), (57, 2)] {
            let p = MooreParams::new(d, m);
            for n in 0..=40i64 {
                for ell in 0..=44i64 {
                    assert!(
                        moore_rank(&p, n, ell).is_ok(),
                        "mismatch for (D={}, m={}) at ({}, {})",
                        d,
                        m,
                        n,
                        ell
                    );
                }
            }
        }
    }

    #[test]
    fn moore_cycles_match_rank() {
        let c5 = fam(Family::Cycle(5));
        let p5 = moore_detect(&c5).unwrap();
        for n in 0..=6i64 {
            for ell in 0..=8i64 {
                if p5.support(n, ell).is_none() {
                    continue;
                }
                let cycles = moore_cycles(&c5, &p5, n, ell).unwrap();
                let rank = moore_rank(&p5, n, ell).unwrap();
                assert_eq!(BigInt::from(cycles.len()), rank, "C5 at ({}, {})", n, ell);
            }
        }
        for (family, n_max) in [(Family::Cycle(7), 6i64), (Family::Petersen, 6)] {
            let space = fam(family);
            let params = moore_detect(&space).unwrap();
            for n in 0..=n_max {
                for ell in 0..=(n_max + n_max * params.diameter as i64) {
                    if params.support(n, ell).is_none() {
                        continue;
                    }
                    let cycles = moore_cycles(&space, &params, n, ell).unwrap();
                    let rank = moore_rank(&params, n, ell).unwrap();
                    assert_eq!(
                        BigInt::from(cycles.len()),
                        rank,
                        "{} vertices at ({}, {})",
                        space.point_count(),
                        n,
                        ell
                    );
                }
            }
        }
        let petersen = fam(Family::Petersen);
        let pp = moore_detect(&petersen).unwrap();
        assert_eq!(moore_cycles(&petersen, &pp, 1, 1).unwrap().len(), 30);
        assert_eq!(moore_cycles(&c5, &p5, 2, 3).unwrap().len(), 10);
        assert!(matches!(
            moore_cycles(&c5, &p5, 1, 2),
            Err(ClosedFormError::OffSupport { .. })
        ));
    }

    #[test]
    fn moore_cycles_are_theta_tuples() {
        use std::collections::BTreeSet;
        let spaces = [
            (fam(Family::Cycle(5)), vec![(2i64, 3i64), (3, 4), (4, 5)]),
            (fam(Family::Petersen), vec![(2, 3), (3, 4)]),
        ];
        for (space, bidegrees) in spaces {
            let params = moore_detect(&space).unwrap();
            for (n, ell) in bidegrees {
                let cycles: BTreeSet<Vec<usize>> = moore_cycles(&space, &params, n, ell)
                    .unwrap()
                    .iter()
                    .map(|t| t.points().to_vec())
                    .collect();
                let theta: BTreeSet<Vec<usize>> = crate::theta::theta_enumerate(
                    &space,
                    n as usize,
                    &BigRational::from_integer(ell.into()),
                )
                .unwrap()
                .tuples
                .iter()
                .map(|t| t.points().to_vec())
                .collect();
                assert_eq!(cycles, theta, "at ({}, {})", n, ell);
            }
        }
    }

    #[test]
    fn moore_rank_matches_snf_on_and_off_support() {
        use crate::chain::Variant;
        use crate::homology::homology;
        let c5 = fam(Family::Cycle(5));
        let params = moore_detect(&c5).unwrap();
        for n in 0..=3i64 {
            for ell in 0..=5i64 {
                let predicted = moore_rank(&params, n, ell).unwrap();
                let group = homology(
                    &c5,
                    n as usize,
                    &BigRational::from_integer(ell.into()),
                    Variant::Normalized,
                    None,
                )
                .unwrap();
                assert_eq!(
                    BigInt::from(group.rank),
                    predicted,
                    "C5 at ({}, {})",
                    n,
                    ell
                );
                assert!(group.torsion.is_empty());
            }
        }
    }

    #[test]
    fn lambda_and_mu_worked_values() {
        // m = 3 (C6): the horizontal exponent at the diagonal is -(m-1).
        assert_eq!(lambda_exponent((1, 0), (1, 0), 3), 1);
        assert_eq!(lambda_exponent((1, 0), (1, 1), 3), -2);
        assert_eq!(lambda_exponent((0, 1), (1, 1), 3), 2);
        assert_eq!(lambda_exponent((0, 1), (0, 1), 3), -1);
        assert_eq!(mu_sign((1, 0), (1, 1), 3), -1);
        assert_eq!(mu_sign((1, 0), (2, 1), 3), 1);
        assert_eq!(mu_sign((0, 1), (1, 1), 3), 1);
    }

    #[test]
    fn theta_21_matches_worked_example() {
        // θ_{2,1}(x) = −(x, γx, x, γ^{-m+1}x) + (x, γx, γ^m x, γ^{m+1}x)
        //              − (x, γ^{-1}x, γ^m x, γ^{-m+1}x)  on C6 (γ^{-m}=γ^m).
        let c6 = fam(Family::Cycle(6));
        let chain = even_theta(&c6, 2, 1, 0).unwrap();
        let terms: Vec<(Vec<usize>, BigInt)> = chain
            .terms()
            .map(|(t, c)| (t.points().to_vec(), c.clone()))
            .collect();
        let expected = vec![
            (vec![0, 1, 0, 4], bi(-1)),
            (vec![0, 1, 3, 4], bi(1)),
            (vec![0, 5, 3, 4], bi(-1)),
        ];
        let expected_sorted: std::collections::BTreeMap<Vec<usize>, BigInt> =
            expected.into_iter().collect();
        let got: std::collections::BTreeMap<Vec<usize>, BigInt> = terms.into_iter().collect();
        assert_eq!(got, expected_sorted);
        assert_eq!(chain.n, 3);
        assert_eq!(chain.ell, BigRational::from_integer(4.into()));
    }

    #[test]
    fn theta_00_and_10() {
        let c6 = fam(Family::Cycle(6));
        let c = even_theta(&c6, 0, 0, 2).unwrap();
        assert_eq!(c.len(), 1);
        let (t, coeff) = c.terms().next().unwrap();
        assert_eq!(t.points(), &[2]);
        assert_eq!(coeff, &bi(1));

        let c = even_theta(&c6, 1, 0, 0).unwrap();
        assert_eq!(c.len(), 1);
        let (t, coeff) = c.terms().next().unwrap();
        assert_eq!(t.points(), &[0, 1]);
        assert_eq!(coeff.abs(), bi(1));
    }

    #[test]
    fn even_theta_chains_are_cycles() {
        use crate::chain::Variant;
        use crate::homology::is_cycle;
        for n_verts in [6usize, 8] {
            let s = fam(Family::Cycle(n_verts));
            let m = (n_verts / 2) as i64;
            for p in 0..=3i64 {
                for q in 0..=3i64 {
                    if p + q > 4 {
                        continue;
                    }
                    let chain = even_theta(&s, p, q, 1).unwrap();
                    assert_eq!(chain.n as i64, p + q);
                    assert_eq!(
                        chain.ell,
                        BigRational::from_integer((m * p.min(q) + (p - q).abs()).into())
                    );
                    assert!(
                        is_cycle(&s, &chain, Variant::Normalized).unwrap(),
                        "θ_{{{},{}}} on C{}",
                        p,
                        q,
                        n_verts
                    );
                }
            }
        }
    }

    #[test]
    fn even_rank_pattern() {
        assert_eq!(even_rank(6, 2, 3).unwrap(), 6);
        assert_eq!(even_rank(6, 3, 4).unwrap(), 12);
        assert_eq!(even_rank(6, 2, 2).unwrap(), 12);
        assert_eq!(even_rank(6, 0, 0).unwrap(), 6);
        assert_eq!(even_rank(6, 2, 4).unwrap(), 0);
        assert_eq!(even_rank(8, 2, 4).unwrap(), 8);
        assert_eq!(even_rank(8, 2, 3).unwrap(), 0);
        assert!(even_rank(5, 1, 1).is_err());
        assert!(even_rank(4, 1, 1).is_err());
    }

    #[test]
    fn magnitude_functions() {
        let missing = moore_magnitude(&MooreParams::missing_moore());
        assert_eq!(missing.numerator, vec![bi(3250)]);
        assert_eq!(missing.denominator, vec![bi(1), bi(57), bi(3192)]);
        assert_eq!(missing.to_string(), "3250/(1 + 57q + 3192q^2)");

        let c5 = magnitude_distance_regular(&fam(Family::Cycle(5))).unwrap();
        assert_eq!(c5.denominator, vec![bi(1), bi(2), bi(2)]);
        let k4 = magnitude_distance_regular(&fam(Family::Complete(4))).unwrap();
        assert_eq!(k4.denominator, vec![bi(1), bi(3)]);
        assert!(matches!(
            magnitude_distance_regular(&fam(Family::Star(4))),
            Err(ClosedFormError::NotDistanceRegular)
        ));
    }

    #[test]
    fn k2_series_alternates() {
        let k2 = magnitude_distance_regular(&fam(Family::Complete(2))).unwrap();
        let series = k2.series(6);
        for (k, c) in series.iter().enumerate() {
            let expected = if k % 2 == 0 { 2 } else { -2 };
            assert_eq!(c, &BigRational::from_integer(expected.into()));
        }
    }

    #[test]
    fn euler_crosscheck_k2() {
        let entries = euler_crosscheck(&fam(Family::Complete(2)), 6, None).unwrap();
        assert!(entries.iter().all(|e| e.matches));
    }
}
