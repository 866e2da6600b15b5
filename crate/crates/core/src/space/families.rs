//! Named graph families as shortest-path metric spaces.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{QuasiMetricSpace, SpaceError};

/// The built-in graph families.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Cycle(usize),
    Complete(usize),
    Path(usize),
    /// `Star(n)` is the star with `n` vertices: center 0 and `n - 1` leaves.
    Star(usize),
    Petersen,
    HoffmanSingleton,
    RandomGraph {
        vertices: usize,
        edge_probability: f64,
        seed: u64,
    },
}

impl Family {
    /// Parses a family from its name and positional parameters as they appear
    /// on the command line.
    pub fn parse(name: &str, params: &[String]) -> Result<Self, SpaceError> {
        let want = |k: usize| -> Result<(), SpaceError> {
            if params.len() == k {
                Ok(())
            } else {
                Err(SpaceError::BadParams(format!(
                    "family '{}' takes {} parameter(s), got {}",
                    name,
                    k,
                    params.len()
                )))
            }
        };
        let int = |s: &String| -> Result<usize, SpaceError> {
            s.parse()
                .map_err(|_| SpaceError::BadParams(format!("not an integer: '{}'", s)))
        };
        match name {
            "cycle" => {
                want(1)?;
                Ok(Family::Cycle(int(&params[0])?))
            }
            "complete" => {
                want(1)?;
                Ok(Family::Complete(int(&params[0])?))
            }
            "path" => {
                want(1)?;
                Ok(Family::Path(int(&params[0])?))
            }
            "star" => {
                want(1)?;
                Ok(Family::Star(int(&params[0])?))
            }
            "petersen" => {
                want(0)?;
                Ok(Family::Petersen)
            }
            "hoffman_singleton" => {
                want(0)?;
                Ok(Family::HoffmanSingleton)
            }
            "random_graph" => {
                want(3)?;
                let vertices = int(&params[0])?;
                let edge_probability: f64 = params[1].parse().map_err(|_| {
                    SpaceError::BadParams(format!("not a probability: '{}'", params[1]))
                })?;
                if !(0.0..=1.0).contains(&edge_probability) {
                    return Err(SpaceError::BadParams(format!(
                        "edge probability {} outside [0, 1]",
                        edge_probability
                    )));
                }
                let seed: u64 = params[2]
                    .parse()
                    .map_err(|_| SpaceError::BadParams(format!("not a seed: '{}'", params[2])))?;
                Ok(Family::RandomGraph {
                    vertices,
                    edge_probability,
                    seed,
                })
            }
            _ => Err(SpaceError::UnknownFamily(name.to_string())),
        }
    }

    /// Builds the family as a quasi metric space.
    pub fn build(&self) -> Result<QuasiMetricSpace, SpaceError> {
        match *self {
            Family::Cycle(n) => {
                if n < 3 {
                    return Err(SpaceError::BadParams(
                        "cycle needs at least 3 vertices".into(),
                    ));
                }
                let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
                QuasiMetricSpace::from_graph(n, &edges, false)
            }
            Family::Complete(n) => {
                if n < 1 {
                    return Err(SpaceError::BadParams(
                        "complete graph needs at least 1 vertex".into(),
                    ));
                }
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        edges.push((i, j));
                    }
                }
                QuasiMetricSpace::from_graph(n, &edges, false)
            }
            Family::Path(n) => {
                if n < 1 {
                    return Err(SpaceError::BadParams("path needs at least 1 vertex".into()));
                }
                let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
                QuasiMetricSpace::from_graph(n, &edges, false)
            }
            Family::Star(n) => {
                if n < 2 {
                    return Err(SpaceError::BadParams(
                        "star needs at least 2 vertices".into(),
                    ));
                }
                let edges: Vec<(usize, usize)> = (1..n).map(|i| (0, i)).collect();
                QuasiMetricSpace::from_graph(n, &edges, false)
            }
            Family::Petersen => QuasiMetricSpace::from_graph(10, &petersen_edges(), false),
            Family::HoffmanSingleton => {
                QuasiMetricSpace::from_graph(50, &hoffman_singleton_edges(), false)
            }
            Family::RandomGraph {
                vertices,
                edge_probability,
                seed,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut edges = Vec::new();
                for i in 0..vertices {
                    for j in i + 1..vertices {
                        if rng.gen::<f64>() < edge_probability {
                            edges.push((i, j));
                        }
                    }
                }
                QuasiMetricSpace::from_graph(vertices, &edges, false)
            }
        }
    }
}

/// Outer 5-cycle 0..4, spokes to 5..9, inner pentagram on 5..9.
fn petersen_edges() -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    edges
}

/// Five pentagons P_h (j adjacent to j±1 mod 5) and five pentagrams Q_i
/// (j adjacent to j±2 mod 5), with vertex j of P_h joined to vertex
/// (h·i + j mod 5) of Q_i.
///
/// Pentagon vertex (h, j) is index 5h + j; pentagram vertex (i, j) is index
/// 25 + 5i + j.
fn hoffman_singleton_edges() -> Vec<(usize, usize)> {
    let p = |h: usize, j: usize| 5 * h + (j % 5);
    let q = |i: usize, j: usize| 25 + 5 * i + (j % 5);
    let mut edges = Vec::new();
    for h in 0..5 {
        for j in 0..5 {
            edges.push((p(h, j), p(h, j + 1)));
            edges.push((q(h, j), q(h, j + 2)));
        }
    }
    for h in 0..5 {
        for i in 0..5 {
            for j in 0..5 {
                edges.push((p(h, j), q(i, h * i + j)));
            }
        }
    }
    edges
}

/// Girth of a symmetric all-finite graph metric; `None` for forests.
pub fn graph_girth(space: &QuasiMetricSpace) -> Option<u64> {
    let n = space.point_count();
    let one = super::ExtDist::one();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| space.dist(u, v) == &one).collect())
        .collect();
    let mut best: Option<u64> = None;
    for root in 0..n {
        let mut depth = vec![u64::MAX; n];
        let mut parent = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if depth[v] == u64::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if v != parent[u] {
                    let cycle = depth[u] + depth[v] + 1;
                    if best.map(|b| cycle < b).unwrap_or(true) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    best
}
