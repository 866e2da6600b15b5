//! Finite quasi metric spaces with exact extended-rational distances.
//!
//! Distances live in `[0, ∞]`: exact rationals plus a distinguished infinity
//! symbol. Symmetry is not assumed. Points are identified by index; labels
//! are presentation-only.

pub mod families;
mod io;

pub use families::{graph_girth, Family};
pub use io::{
    parse_distance_csv, parse_edge_list, parse_ext_dist, parse_space_json, space_to_json,
    to_distance_csv, IoError,
};

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// An extended distance: a nonnegative exact rational or infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtDist {
    Finite(BigRational),
    Infinity,
}

impl ExtDist {
    pub fn zero() -> Self {
        ExtDist::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        ExtDist::Finite(BigRational::one())
    }

    pub fn from_integer(n: u64) -> Self {
        ExtDist::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtDist::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtDist::Finite(v) if v.is_zero())
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtDist::Finite(v) => Some(v),
            ExtDist::Infinity => None,
        }
    }
}

impl Add<&ExtDist> for &ExtDist {
    type Output = ExtDist;

    /// Total addition: anything plus infinity is infinity.
    fn add(self, rhs: &ExtDist) -> ExtDist {
        match (self, rhs) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => ExtDist::Finite(a + b),
            _ => ExtDist::Infinity,
        }
    }
}

impl PartialOrd for ExtDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtDist {
    /// Total order with infinity as the greatest element.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtDist::Finite(a), ExtDist::Finite(b)) => a.cmp(b),
            (ExtDist::Finite(_), ExtDist::Infinity) => Ordering::Less,
            (ExtDist::Infinity, ExtDist::Finite(_)) => Ordering::Greater,
            (ExtDist::Infinity, ExtDist::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDist::Infinity => write!(f, "inf"),
            ExtDist::Finite(v) => {
                if v.is_integer() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
        }
    }
}

/// Renders a finite rational as `p/q`, or just `p` for integers.
pub fn rational_string(v: &BigRational) -> String {
    if v.is_integer() {
        format!("{}", v.numer())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomKind {
    SelfDistance,
    ZeroSeparation,
    Triangle,
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomKind::SelfDistance => write!(f, "self-distance"),
            AxiomKind::ZeroSeparation => write!(f, "zero-separation"),
            AxiomKind::Triangle => write!(f, "triangle"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("matrix is not square: row {row} has {len} cells but there are {rows} rows")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("distance matrix has a negative entry at ({x}, {y})")]
    NegativeDistance { x: usize, y: usize },
    #[error("axiom violation ({kind}) witnessed by points ({x}, {y}, {z})")]
    AxiomViolation {
        kind: AxiomKind,
        x: usize,
        y: usize,
        z: usize,
    },
    #[error("label count {labels} does not match point count {points}")]
    LabelCount { labels: usize, points: usize },
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("bad family parameters: {0}")]
    BadParams(String),
    #[error("vertex index {index} out of range for {count} vertices")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("distance from {from} to {to} is infinite")]
    InfiniteDistance { from: usize, to: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// A tuple of points with finite consecutive distances, carrying its exact
/// length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trail {
    points: Vec<usize>,
    length: BigRational,
}

impl Trail {
    pub fn new(space: &QuasiMetricSpace, points: Vec<usize>) -> Result<Self, SpaceError> {
        assert!(!points.is_empty(), "a trail has at least one point");
        let mut length = BigRational::zero();
        for w in points.windows(2) {
            match space.dist(w[0], w[1]) {
                ExtDist::Finite(d) => length += d,
                ExtDist::Infinity => {
                    return Err(SpaceError::InfiniteDistance {
                        from: w[0],
                        to: w[1],
                    })
                }
            }
        }
        Ok(Trail { points, length })
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    /// Homological degree: one less than the number of points.
    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn length(&self) -> &BigRational {
        &self.length
    }

    /// True when no two consecutive points coincide.
    pub fn is_nondegenerate(&self) -> bool {
        self.points.windows(2).all(|w| w[0] != w[1])
    }
}

/// A quadruple with two overlapping betweenness relations that fail to
/// compose. Its length is the trail length of the quadruple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourCut {
    pub points: [usize; 4],
    pub length: BigRational,
}

/// An interval `I(a, b)` with its comparability data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub a: usize,
    pub b: usize,
    /// Members of the interval in increasing index order.
    pub points: Vec<usize>,
    /// Whether the order `x ⪯ y ⟺ a ≤ x ≤ y` is total on the interval.
    pub is_total: bool,
}

impl Interval {
    /// The interval's partial order: `x ⪯ y ⟺ a ≤ x ≤ y`.
    pub fn precedes(&self, space: &QuasiMetricSpace, x: usize, y: usize) -> bool {
        space.between(self.a, x, y)
    }
}

/// A finite quasi metric space: points 0..n with an exact distance matrix.
///
/// Immutable after construction; all operations are pure, so shared
/// references can be used freely across threads.
#[derive(Debug, Clone)]
pub struct QuasiMetricSpace {
    labels: Vec<String>,
    dist: Vec<ExtDist>,
    n: usize,
    /// Betweenness lookup for small spaces: entry x*n*n + y*n + z.
    between_table: Option<Vec<bool>>,
}

const BETWEEN_TABLE_LIMIT: usize = 128;

impl QuasiMetricSpace {
    /// Validates a distance matrix against the quasi metric axioms and wraps
    /// it into a space.
    pub fn from_distance_matrix(
        matrix: Vec<Vec<ExtDist>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, SpaceError> {
        let n = matrix.len();
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(SpaceError::NotSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in &matrix {
            for d in row {
                if let ExtDist::Finite(v) = d {
                    if v < &BigRational::zero() {
                        return Err(SpaceError::NegativeDistance {
                            x: dist.len() / n.max(1),
                            y: dist.len() % n.max(1),
                        });
                    }
                }
                dist.push(d.clone());
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(SpaceError::LabelCount {
                        labels: l.len(),
                        points: n,
                    });
                }
                l
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let mut space = QuasiMetricSpace {
            labels,
            dist,
            n,
            between_table: None,
        };
        space.validate_axioms()?;
        if n <= BETWEEN_TABLE_LIMIT {
            space.build_between_table();
        }
        Ok(space)
    }

    fn validate_axioms(&self) -> Result<(), SpaceError> {
        let n = self.n;
        for x in 0..n {
            if !self.dist(x, x).is_zero() {
                return Err(SpaceError::AxiomViolation {
                    kind: AxiomKind::SelfDistance,
                    x,
                    y: x,
                    z: x,
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && self.dist(x, y).is_zero() {
                    return Err(SpaceError::AxiomViolation {
                        kind: AxiomKind::ZeroSeparation,
                        x,
                        y,
                        z: y,
                    });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let via = self.dist(x, y) + self.dist(y, z);
                    if &via < self.dist(x, z) {
                        return Err(SpaceError::AxiomViolation {
                            kind: AxiomKind::Triangle,
                            x,
                            y,
                            z,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn build_between_table(&mut self) {
        let n = self.n;
        let mut table = vec![false; n * n * n];
        for x in 0..n {
            for y in 0..n {
                let dxy = self.dist(x, y);
                if !dxy.is_finite() {
                    continue;
                }
                for z in 0..n {
                    let dyz = self.dist(y, z);
                    if !dyz.is_finite() {
                        continue;
                    }
                    if &(dxy + dyz) == self.dist(x, z) {
                        table[(x * n + y) * n + z] = true;
                    }
                }
            }
        }
        self.between_table = Some(table);
    }

    /// Shortest-path hop-count metric of a graph; unreachable pairs get
    /// infinite distance.
    pub fn from_graph(
        vertex_count: usize,
        edges: &[(usize, usize)],
        directed: bool,
    ) -> Result<Self, SpaceError> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for &w in &[u, v] {
                if w >= vertex_count {
                    return Err(SpaceError::IndexOutOfRange {
                        index: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                continue;
            }
            adj[u].push(v);
            if !directed {
                adj[v].push(u);
            }
        }
        let mut matrix = vec![vec![ExtDist::Infinity; vertex_count]; vertex_count];
        for src in 0..vertex_count {
            let mut seen = vec![u64::MAX; vertex_count];
            seen[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if seen[v] == u64::MAX {
                        seen[v] = seen[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            for (v, &hops) in seen.iter().enumerate() {
                if hops != u64::MAX {
                    matrix[src][v] = ExtDist::from_integer(hops);
                }
            }
        }
        Self::from_distance_matrix(matrix, None)
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, x: usize, y: usize) -> &ExtDist {
        &self.dist[x * self.n + y]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|x| (x..self.n).all(|y| self.dist(x, y) == self.dist(y, x)))
    }

    pub fn all_finite(&self) -> bool {
        self.dist.iter().all(|d| d.is_finite())
    }

    /// The betweenness relation `x ≤ y ≤ z`: all three distances finite and
    /// `d(x,y) + d(y,z) = d(x,z)`.
    pub fn between(&self, x: usize, y: usize, z: usize) -> bool {
        if let Some(table) = &self.between_table {
            return table[(x * self.n + y) * self.n + z];
        }
        match (self.dist(x, y), self.dist(y, z), self.dist(x, z)) {
            (ExtDist::Finite(a), ExtDist::Finite(b), ExtDist::Finite(c)) => &(a + b) == c,
            _ => false,
        }
    }

    /// The interval `I(a, b)` ordered by nearness to `a`.
    pub fn interval(&self, a: usize, b: usize) -> Result<Interval, SpaceError> {
        if !self.dist(a, b).is_finite() {
            return Err(SpaceError::InfiniteDistance { from: a, to: b });
        }
        let points: Vec<usize> = (0..self.n).filter(|&x| self.between(a, x, b)).collect();
        let is_total = points.iter().enumerate().all(|(i, &x)| {
            points[i + 1..]
                .iter()
                .all(|&y| self.between(a, x, y) || self.between(a, y, x))
        });
        Ok(Interval {
            a,
            b,
            points,
            is_total,
        })
    }

    /// Whether every interval with finite endpoint distance is totally
    /// ordered.
    pub fn is_geodetic(&self) -> bool {
        self.geodetic_witness().is_none()
    }

    /// On failure of geodeticity, the lexicographically first witness
    /// `(a, b, x, y)` with `x`, `y` incomparable in `I(a, b)`.
    pub fn geodetic_witness(&self) -> Option<(usize, usize, usize, usize)> {
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.dist(a, b).is_finite() {
                    continue;
                }
                let members: Vec<usize> = (0..self.n).filter(|&x| self.between(a, x, b)).collect();
                for (i, &x) in members.iter().enumerate() {
                    for &y in &members[i + 1..] {
                        if !self.between(a, x, y) && !self.between(a, y, x) {
                            return Some((a, b, x, y));
                        }
                    }
                }
            }
        }
        None
    }

    fn four_cut_at(&self, q: [usize; 4]) -> Option<FourCut> {
        let [x0, x1, x2, x3] = q;
        if x1 == x2 {
            return None;
        }
        if !self.between(x0, x1, x2) || !self.between(x1, x2, x3) || self.between(x0, x1, x3) {
            return None;
        }
        let length = [(x0, x1), (x1, x2), (x2, x3)]
            .iter()
            .map(|&(u, v)| self.dist(u, v).finite().expect("betweenness is finite"))
            .fold(BigRational::zero(), |acc, d| acc + d);
        Some(FourCut { points: q, length })
    }

    /// Exhaustively enumerates 4-cuts in lexicographic order on the point
    /// indices, stopping after `max_count` when given.
    pub fn four_cuts(&self, max_count: Option<usize>) -> Vec<FourCut> {
        let mut out = Vec::new();
        for x0 in 0..self.n {
            for x1 in 0..self.n {
                for x2 in 0..self.n {
                    if !self.between(x0, x1, x2) {
                        continue;
                    }
                    for x3 in 0..self.n {
                        if let Some(fc) = self.four_cut_at([x0, x1, x2, x3]) {
                            out.push(fc);
                            if let Some(limit) = max_count {
                                if out.len() >= limit {
                                    return out;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The infimum of 4-cut lengths; infinity when there is no 4-cut.
    pub fn m_x(&self) -> ExtDist {
        match self.minimal_four_cut() {
            Some(fc) => ExtDist::Finite(fc.length),
            None => ExtDist::Infinity,
        }
    }

    /// A 4-cut of minimal length (lexicographically first among minima), or
    /// `None` when the space has no 4-cut.
    pub fn minimal_four_cut(&self) -> Option<FourCut> {
        let mut best: Option<FourCut> = None;
        for x0 in 0..self.n {
            for x1 in 0..self.n {
                for x2 in 0..self.n {
                    if !self.between(x0, x1, x2) {
                        continue;
                    }
                    for x3 in 0..self.n {
                        if let Some(fc) = self.four_cut_at([x0, x1, x2, x3]) {
                            let better = match &best {
                                None => true,
                                Some(b) => fc.length < b.length,
                            };
                            if better {
                                best = Some(fc);
                            }
                        }
                    }
                }
            }
        }
        best
    }

    /// Whether the space contains any 4-cut at all.
    pub fn has_four_cut(&self) -> bool {
        !self.four_cuts(Some(1)).is_empty()
    }

    /// A tuple is saturated when no consecutive pair admits a strictly
    /// intermediate point.
    pub fn is_saturated(&self, points: &[usize]) -> bool {
        points
            .windows(2)
            .all(|w| (0..self.n).all(|a| a == w[0] || a == w[1] || !self.between(w[0], a, w[1])))
    }

    /// Distance-degree regularity: for every occurring distance value, the
    /// number of points at that distance is independent of the base point.
    ///
    /// Returns the common distribution (distance, count) sorted by distance
    /// when regular, `None` when not. This is weaker than full distance
    /// regularity, but it is exactly the hypothesis the magnitude formula
    /// consumes.
    pub fn distance_regularity(&self) -> Result<Option<Vec<(BigRational, usize)>>, SpaceError> {
        if !self.is_symmetric() {
            return Err(SpaceError::NotApplicable(
                "distance regularity needs a symmetric metric".into(),
            ));
        }
        if !self.all_finite() {
            return Err(SpaceError::NotApplicable(
                "distance regularity needs a connected (all-finite) metric".into(),
            ));
        }
        let mut reference: Option<Vec<(BigRational, usize)>> = None;
        for x in 0..self.n {
            let mut counts: Vec<(BigRational, usize)> = Vec::new();
            for y in 0..self.n {
                let d = self.dist(x, y).finite().unwrap().clone();
                match counts.iter_mut().find(|(v, _)| *v == d) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((d, 1)),
                }
            }
            counts.sort_by(|a, b| a.0.cmp(&b.0));
            match &reference {
                None => reference = Some(counts),
                Some(r) => {
                    if r != &counts {
                        return Ok(None);
                    }
                }
            }
        }
        Ok(reference)
    }

    /// The sub-quasi-metric-space induced on the given points, in the given
    /// order.
    pub fn induced_subspace(&self, points: &[usize]) -> Result<Self, SpaceError> {
        for &p in points {
            if p >= self.n {
                return Err(SpaceError::IndexOutOfRange {
                    index: p,
                    count: self.n,
                });
            }
        }
        let matrix: Vec<Vec<ExtDist>> = points
            .iter()
            .map(|&x| points.iter().map(|&y| self.dist(x, y).clone()).collect())
            .collect();
        let labels = points.iter().map(|&x| self.labels[x].clone()).collect();
        Self::from_distance_matrix(matrix, Some(labels))
    }

    /// All ordered pairs with finite distance, lexicographically.
    pub fn finite_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if self.dist(x, y).is_finite() {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Ordered pairs of distinct points with finite positive distance.
    pub fn positive_pairs(&self) -> Vec<(usize, usize)> {
        self.finite_pairs()
            .into_iter()
            .filter(|&(x, y)| x != y)
            .collect()
    }

    /// The minimum over all finite positive distances, used as an admissible
    /// per-step lower bound when pruning enumerations.
    pub fn min_positive_distance(&self) -> Option<BigRational> {
        self.dist
            .iter()
            .filter_map(|d| d.finite())
            .filter(|v| !v.is_zero())
            .min()
            .cloned()
    }

    pub fn max_finite_distance(&self) -> Option<BigRational> {
        self.dist.iter().filter_map(|d| d.finite()).max().cloned()
    }

    /// Largest distance when all distances are finite, otherwise infinity.
    pub fn diameter(&self) -> ExtDist {
        self.dist
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(ExtDist::zero)
    }
}
