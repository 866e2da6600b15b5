//! Implementations of the CLI commands over the library API.

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use maghom::chain::{boundary_matrix, Chain, Variant};
use maghom::closedform::{
    euler_crosscheck, even_rank, even_theta, magnitude_distance_regular, moore_cycles,
    moore_detect, moore_rank, moore_rank_closed_form, moore_rank_recurrence, ClosedFormError,
    MooreParams,
};
use maghom::homology::{classes_span, homology, is_cycle, HomologyEntry, HomologyError};
use maghom::resolution::{
    certify_exactness, minimal_resolution_geodetic, verify_chain_map_f, verify_mult_relations,
    verify_tensored_zero, verify_total_complex,
};
use maghom::space::{parse_ext_dist, rational_string, ExtDist, SpaceError};
use maghom::theta::{theta_enumerate, ThetaError};
use maghom::QuasiMetricSpace;

use crate::cache;
use crate::input::load_space;
use crate::{CliError, Command, OutputArgs, VerifySuite};

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::Hypothesis(e.to_string())
    }
}

impl From<ThetaError> for CliError {
    fn from(e: ThetaError) -> Self {
        CliError::Hypothesis(e.to_string())
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<ClosedFormError> for CliError {
    fn from(e: ClosedFormError) -> Self {
        match e {
            ClosedFormError::ConventionMismatch { .. } => CliError::Internal(e.to_string()),
            ClosedFormError::Homology(h) => CliError::from(h),
            _ => CliError::Hypothesis(e.to_string()),
        }
    }
}

fn parse_length(text: &str) -> Result<BigRational, CliError> {
    match parse_ext_dist(text) {
        Ok(ExtDist::Finite(v)) if !v.is_negative() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "'{}' is not a nonnegative rational length",
            text
        ))),
    }
}

fn parse_variant(text: &str) -> Variant {
    match text {
        "unnormalized" => Variant::Unnormalized,
        _ => Variant::Normalized,
    }
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.out {
        None => {
            print!("{}", text);
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {}", path, e))),
    }
}

/// Runs `compute` through the advisory cache when one is configured.
fn with_cache<F>(
    output: &OutputArgs,
    space: Option<&QuasiMetricSpace>,
    command: &str,
    params: &str,
    compute: F,
) -> Result<(), CliError>
where
    F: FnOnce() -> Result<String, CliError>,
{
    if let Some(dir) = &output.cache {
        let key = cache::cache_key(space, command, params);
        if let Some(hit) = cache::lookup(dir, &key) {
            return emit(output, &hit);
        }
        let text = compute()?;
        cache::store(dir, &key, &text);
        return emit(output, &text);
    }
    let text = compute()?;
    emit(output, &text)
}

#[derive(Serialize)]
struct SpaceProfile {
    points: usize,
    labels: Vec<String>,
    symmetric: bool,
    all_finite: bool,
    diameter: String,
    geodetic: bool,
    geodetic_witness: Option<(usize, usize, usize, usize)>,
    m_x: String,
    four_cut_count: usize,
    minimal_four_cut: Option<Vec<usize>>,
    distance_regular: bool,
    distance_distribution: Option<Vec<(String, usize)>>,
    moore: Option<MooreProfile>,
}

#[derive(Serialize)]
struct MooreProfile {
    degree: u64,
    diameter: u64,
    vertex_count: u64,
}

fn cmd_space(space: &QuasiMetricSpace) -> String {
    let witness = space.geodetic_witness();
    let cuts = space.four_cuts(None);
    let distance_distribution = space.distance_regularity().ok().flatten().map(|d| {
        d.into_iter()
            .map(|(v, c)| (rational_string(&v), c))
            .collect::<Vec<_>>()
    });
    let profile = SpaceProfile {
        points: space.point_count(),
        labels: space.labels().to_vec(),
        symmetric: space.is_symmetric(),
        all_finite: space.all_finite(),
        diameter: space.diameter().to_string(),
        geodetic: witness.is_none(),
        geodetic_witness: witness,
        m_x: space.m_x().to_string(),
        four_cut_count: cuts.len(),
        minimal_four_cut: space.minimal_four_cut().map(|fc| fc.points.to_vec()),
        distance_regular: distance_distribution.is_some(),
        distance_distribution,
        moore: moore_detect(space).map(|p| MooreProfile {
            degree: p.degree,
            diameter: p.diameter,
            vertex_count: p.vertex_count,
        }),
    };
    render(&profile)
}

fn homology_entries(
    space: &QuasiMetricSpace,
    bidegrees: &[(usize, BigRational)],
    variant: Variant,
    cap: Option<usize>,
    jobs: usize,
) -> Result<Vec<HomologyEntry>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let results: Vec<Result<HomologyEntry, HomologyError>> = pool.install(|| {
        bidegrees
            .par_iter()
            .map(|(n, ell)| {
                homology(space, *n, ell, variant, cap)
                    .map(|group| HomologyEntry::new(*n, ell, &group))
            })
            .collect()
    });
    results
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::from)
}

fn rank_table_csv(entries: &[HomologyEntry], nmax: usize, lmax: i64) -> String {
    let mut table = String::from("n\\l");
    for l in 0..=lmax {
        table.push_str(&format!(",{}", l));
    }
    table.push('\n');
    for n in 0..=nmax {
        table.push_str(&n.to_string());
        for l in 0..=lmax {
            let cell = entries
                .iter()
                .find(|e| e.n == n && e.ell == l.to_string())
                .map(|e| {
                    if e.rank == 0 && e.torsion.is_empty() {
                        String::new()
                    } else if e.torsion.is_empty() {
                        e.rank.to_string()
                    } else {
                        format!("{}+t{:?}", e.rank, e.torsion)
                    }
                })
                .unwrap_or_default();
            table.push(',');
            table.push_str(&cell);
        }
        table.push('\n');
    }
    table
}

#[derive(Serialize)]
struct ThetaDocument {
    n: usize,
    ell: String,
    count: usize,
    tuples: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct MooreDocument {
    degree: u64,
    diameter: u64,
    vertex_count: u64,
    entries: Vec<MooreEntry>,
}

#[derive(Serialize)]
struct MooreEntry {
    n: i64,
    ell: i64,
    rank: String,
    cycles: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize)]
struct ChainDocument {
    n: usize,
    ell: String,
    count: usize,
    chains: Vec<ChainEntry>,
}

#[derive(Serialize)]
struct ChainEntry {
    basepoint: usize,
    p: i64,
    q: i64,
    terms: Vec<(Vec<usize>, String)>,
}

fn chain_entry(chain: &Chain, basepoint: usize, p: i64, q: i64) -> ChainEntry {
    ChainEntry {
        basepoint,
        p,
        q,
        terms: chain
            .terms()
            .map(|(t, c)| (t.points().to_vec(), c.to_string()))
            .collect(),
    }
}

#[derive(Serialize)]
struct MagnitudeDocument {
    function: String,
    numerator: Vec<String>,
    denominator: Vec<String>,
    series: Vec<String>,
}

#[derive(Serialize)]
struct SuiteCheck {
    check: String,
    params: serde_json::Value,
    verdict: &'static str,
    witness: Option<String>,
}

#[derive(Serialize)]
struct SuiteReport {
    suite: String,
    checks: Vec<SuiteCheck>,
    all_pass: bool,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checks: Vec::new(),
            all_pass: true,
        }
    }

    fn push(
        &mut self,
        check: &str,
        params: serde_json::Value,
        pass: bool,
        witness: Option<String>,
    ) {
        self.checks.push(SuiteCheck {
            check: check.to_string(),
            params,
            verdict: if pass { "pass" } else { "fail" },
            witness,
        });
        self.all_pass &= pass;
    }

    fn finish(self, output: &OutputArgs) -> Result<(), CliError> {
        let all_pass = self.all_pass;
        let text = render(&self);
        emit(output, &text)?;
        if all_pass {
            Ok(())
        } else {
            Err(CliError::Internal("verification failed".into()))
        }
    }
}

fn suite_theta_vs_snf(
    space: &QuasiMetricSpace,
    budget: i64,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let mut report = SuiteReport::new("theta-vs-snf");
    for n in 0..=budget.max(0) as usize {
        for l in 0..=budget {
            let ell = BigRational::from_integer(l.into());
            let basis = theta_enumerate(space, n, &ell)?;
            let group = homology(space, n, &ell, Variant::Normalized, None)?;
            let params = serde_json::json!({"n": n, "l": l});
            let rank_match = group.rank == basis.tuples.len() && group.torsion.is_empty();
            report.push(
                "rank equals theta count, torsion free",
                params.clone(),
                rank_match,
                (!rank_match).then(|| {
                    format!(
                        "snf rank {} torsion {:?} vs theta {}",
                        group.rank,
                        group.torsion,
                        basis.tuples.len()
                    )
                }),
            );
            let mut chains = Vec::new();
            let mut cycles_ok = true;
            for t in &basis.tuples {
                let mut c = Chain::zero(n, ell.clone());
                c.add_trail(t.clone(), num_bigint::BigInt::one());
                cycles_ok &= is_cycle(space, &c, Variant::Normalized)?;
                chains.push(c);
            }
            report.push("theta tuples are cycles", params.clone(), cycles_ok, None);
            let spans = classes_span(space, &chains, n, &ell)?;
            report.push("theta classes span", params, spans, None);
        }
    }
    report.finish(output)
}

fn suite_moore(space: &QuasiMetricSpace, nmax: i64, output: &OutputArgs) -> Result<(), CliError> {
    let params = moore_detect(space)
        .ok_or_else(|| CliError::Hypothesis("the space is not a Moore graph".into()))?;
    let mut report = SuiteReport::new("moore");
    let lmax = nmax + nmax.max(0) * params.diameter as i64;
    for n in 0..=nmax {
        for ell in 0..=lmax {
            let a = moore_rank_recurrence(&params, n, ell);
            let b = moore_rank_closed_form(&params, n, ell);
            let p = serde_json::json!({"n": n, "l": ell});
            report.push(
                "recurrence equals closed form",
                p.clone(),
                a == b,
                (a != b).then(|| format!("{} vs {}", a, b)),
            );
            if params.support(n, ell).is_some() {
                let cycles = moore_cycles(space, &params, n, ell)?;
                report.push(
                    "cycle count equals rank",
                    p,
                    num_bigint::BigInt::from(cycles.len()) == a,
                    None,
                );
            }
        }
    }
    report.finish(output)
}

fn suite_even_cycle(n_vertices: usize, nmax: i64, output: &OutputArgs) -> Result<(), CliError> {
    if n_vertices < 6 || !n_vertices.is_multiple_of(2) {
        return Err(CliError::Hypothesis(format!(
            "N = {} is not an even integer ≥ 6",
            n_vertices
        )));
    }
    let space = maghom::space::Family::Cycle(n_vertices)
        .build()
        .map_err(|e| CliError::Hypothesis(e.to_string()))?;
    let m = (n_vertices / 2) as i64;
    let mut report = SuiteReport::new("even-cycle");
    // All θ_{pq} with p+q ≤ nmax are cycles.
    for p in 0..=nmax {
        for q in 0..=nmax - p {
            let mut all_cycles = true;
            for x in 0..n_vertices {
                let chain = even_theta(&space, p, q, x)?;
                all_cycles &= is_cycle(&space, &chain, Variant::Normalized)?;
            }
            report.push(
                "theta_pq cycles",
                serde_json::json!({"p": p, "q": q}),
                all_cycles,
                None,
            );
        }
    }
    // Rank pattern and spanning families on the window.
    for n in 0..=nmax {
        for ell in 0..=(m * n) {
            let expected = even_rank(n_vertices, n, ell)?;
            let ell_rat = BigRational::from_integer(ell.into());
            let group = homology(&space, n as usize, &ell_rat, Variant::Normalized, None)?;
            let p = serde_json::json!({"n": n, "l": ell});
            report.push(
                "snf rank matches pattern",
                p.clone(),
                group.rank == expected && group.torsion.is_empty(),
                Some(format!("snf {} expected {}", group.rank, expected)),
            );
            if expected > 0 {
                let diff = ell - n;
                let i = diff / (m - 2);
                let j = n - 2 * i;
                let mut chains = Vec::new();
                for x in 0..n_vertices {
                    if j == 0 {
                        chains.push(even_theta(&space, i, i, x)?);
                    } else {
                        chains.push(even_theta(&space, i + j, i, x)?);
                        chains.push(even_theta(&space, i, i + j, x)?);
                    }
                }
                let spans = classes_span(&space, &chains, n as usize, &ell_rat)?;
                report.push("stated family spans", p, spans, None);
            }
        }
    }
    report.finish(output)
}

fn suite_resolution(
    space: Option<&QuasiMetricSpace>,
    n_vertices: Option<usize>,
    degree: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let mut report = SuiteReport::new("resolution");
    match (space, n_vertices) {
        (Some(space), None) => {
            let stages = minimal_resolution_geodetic(space, degree)?;
            let exactness = certify_exactness(&stages);
            report.push(
                "augmentation surjective",
                serde_json::json!({}),
                exactness.augmentation_surjective,
                None,
            );
            report.push(
                "composites vanish",
                serde_json::json!({}),
                exactness.composites_vanish,
                None,
            );
            for d in &exactness.degrees {
                report.push(
                    "exact at degree",
                    serde_json::json!({"degree": d.degree}),
                    d.exact,
                    (!d.exact)
                        .then(|| format!("rank defect {} torsion {:?}", d.rank_defect, d.torsion)),
                );
            }
            report.push(
                "tensored differential vanishes",
                serde_json::json!({}),
                verify_tensored_zero(&stages),
                None,
            );
        }
        (None, Some(n)) => {
            let total = verify_total_complex(n, degree)?;
            report.push(
                "total complex composites vanish",
                serde_json::json!({"N": n}),
                total.composites_vanish,
                None,
            );
            report.push(
                "total complex tensored zero",
                serde_json::json!({"N": n}),
                total.tensored_zero,
                None,
            );
            for d in &total.degrees {
                report.push(
                    "total complex exact at degree",
                    serde_json::json!({"N": n, "degree": d.degree}),
                    d.exact,
                    None,
                );
            }
            let chain_map = verify_chain_map_f(n, degree.min(3), true)?;
            report.push(
                "chain map commutes",
                serde_json::json!({"N": n, "max_degree": degree.min(3)}),
                chain_map.all_commute,
                None,
            );
        }
        _ => {
            return Err(CliError::Usage(
                "pass a geodetic space (--family/--matrix/--edges) or --N for the even cycle"
                    .into(),
            ))
        }
    }
    report.finish(output)
}

fn suite_mult_rel(n_vertices: usize, output: &OutputArgs) -> Result<(), CliError> {
    let rel = verify_mult_relations(n_vertices)?;
    let mut report = SuiteReport::new("mult-rel");
    for check in &rel.checks {
        report.push(
            &check.check,
            serde_json::json!({"N": n_vertices}),
            check.pass,
            None,
        );
    }
    report.finish(output)
}

fn suite_euler(space: &QuasiMetricSpace, order: i64, output: &OutputArgs) -> Result<(), CliError> {
    let entries = euler_crosscheck(space, order, None)?;
    let mut report = SuiteReport::new("euler");
    for e in &entries {
        report.push(
            "series coefficient equals alternating rank sum",
            serde_json::json!({"l": e.ell}),
            e.matches,
            Some(format!(
                "series {} vs ranks {}",
                e.series_coefficient, e.alternating_rank_sum
            )),
        );
    }
    report.finish(output)
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Space { space, output } => {
            let (s, desc) = load_space(&space)?;
            with_cache(&output, Some(&s), "space", &desc, || Ok(cmd_space(&s)))
        }
        Command::Homology {
            space,
            n,
            l,
            nmax,
            lmax,
            variant,
            cap,
            jobs,
            format,
            output,
        } => {
            let (s, desc) = load_space(&space)?;
            let variant_parsed = parse_variant(&variant);
            let params = format!(
                "{} n={:?} l={:?} nmax={} lmax={} variant={} cap={:?} format={}",
                desc, n, l, nmax, lmax, variant, cap, format
            );
            with_cache(&output, Some(&s), "homology", &params, || {
                let single_l = l.as_deref().map(parse_length).transpose()?;
                let bidegrees: Vec<(usize, BigRational)> = match (n, single_l) {
                    (Some(n), Some(l)) => vec![(n, l)],
                    (Some(n), None) => (0..=lmax)
                        .map(|l| (n, BigRational::from_integer(l.into())))
                        .collect(),
                    (None, Some(l)) => (0..=nmax).map(|n| (n, l.clone())).collect(),
                    (None, None) => (0..=nmax)
                        .flat_map(|n| {
                            (0..=lmax).map(move |l| (n, BigRational::from_integer(l.into())))
                        })
                        .collect(),
                };
                let entries = homology_entries(&s, &bidegrees, variant_parsed, cap, jobs)?;
                if format == "csv" {
                    Ok(rank_table_csv(&entries, nmax, lmax))
                } else {
                    Ok(render(&entries))
                }
            })
        }
        Command::Theta {
            space,
            n,
            l,
            output,
        } => {
            let (s, desc) = load_space(&space)?;
            let params = format!("{} n={} l={}", desc, n, l);
            with_cache(&output, Some(&s), "theta", &params, || {
                let ell = parse_length(&l)?;
                let basis = theta_enumerate(&s, n, &ell)?;
                Ok(render(&ThetaDocument {
                    n,
                    ell: rational_string(&ell),
                    count: basis.tuples.len(),
                    tuples: basis.tuples.iter().map(|t| t.points().to_vec()).collect(),
                }))
            })
        }
        Command::Moore {
            space,
            nmax,
            lmax,
            cycles,
            output,
        } => {
            let (s, desc) = load_space(&space)?;
            let params_str = format!("{} nmax={} lmax={} cycles={}", desc, nmax, lmax, cycles);
            with_cache(&output, Some(&s), "moore", &params_str, || {
                let params: MooreParams = moore_detect(&s)
                    .ok_or_else(|| CliError::Hypothesis("the space is not a Moore graph".into()))?;
                let mut entries = Vec::new();
                for n in 0..=nmax {
                    for ell in 0..=lmax {
                        if params.support(n, ell).is_none() {
                            continue;
                        }
                        let rank = moore_rank(&params, n, ell)?;
                        let cycle_list = if cycles {
                            Some(
                                moore_cycles(&s, &params, n, ell)?
                                    .iter()
                                    .map(|t| t.points().to_vec())
                                    .collect(),
                            )
                        } else {
                            None
                        };
                        entries.push(MooreEntry {
                            n,
                            ell,
                            rank: rank.to_string(),
                            cycles: cycle_list,
                        });
                    }
                }
                Ok(render(&MooreDocument {
                    degree: params.degree,
                    diameter: params.diameter,
                    vertex_count: params.vertex_count,
                    entries,
                }))
            })
        }
        Command::Evencycle {
            n_vertices,
            p,
            q,
            basepoint,
            output,
        } => {
            let space = maghom::space::Family::Cycle(n_vertices)
                .build()
                .map_err(|e| CliError::Hypothesis(e.to_string()))?;
            let params = format!("N={} p={} q={} basepoint={:?}", n_vertices, p, q, basepoint);
            with_cache(&output, Some(&space), "evencycle", &params, || {
                let basepoints: Vec<usize> = match basepoint {
                    Some(x) if x < n_vertices => vec![x],
                    Some(x) => {
                        return Err(CliError::Usage(format!(
                            "basepoint {} out of range for {} vertices",
                            x, n_vertices
                        )))
                    }
                    None => (0..n_vertices).collect(),
                };
                let mut chains = Vec::new();
                let mut bidegree = None;
                for x in basepoints {
                    let chain = even_theta(&space, p, q, x)?;
                    bidegree.get_or_insert((chain.n, rational_string(&chain.ell)));
                    chains.push(chain_entry(&chain, x, p, q));
                }
                let (n, ell) = bidegree.expect("at least one basepoint");
                Ok(render(&ChainDocument {
                    n,
                    ell,
                    count: chains.len(),
                    chains,
                }))
            })
        }
        Command::Magnitude {
            space,
            order,
            output,
        } => {
            let (s, desc) = load_space(&space)?;
            let params = format!("{} order={}", desc, order);
            with_cache(&output, Some(&s), "magnitude", &params, || {
                let f = magnitude_distance_regular(&s)?;
                let series = f.series(order);
                Ok(render(&MagnitudeDocument {
                    function: f.to_string(),
                    numerator: f.numerator.iter().map(|c| c.to_string()).collect(),
                    denominator: f.denominator.iter().map(|c| c.to_string()).collect(),
                    series: series.iter().map(rational_string).collect(),
                }))
            })
        }
        Command::ExportMatrix {
            space,
            n,
            l,
            variant,
            output,
        } => {
            let (s, desc) = load_space(&space)?;
            let params = format!("{} n={} l={} variant={}", desc, n, l, variant);
            with_cache(&output, Some(&s), "export-matrix", &params, || {
                let ell = parse_length(&l)?;
                let m = boundary_matrix(&s, n, &ell, parse_variant(&variant));
                Ok(m.to_coordinate_text())
            })
        }
        Command::Verify { suite } => match suite {
            VerifySuite::ThetaVsSnf {
                space,
                budget,
                output,
            } => {
                let (s, _) = load_space(&space)?;
                suite_theta_vs_snf(&s, budget, &output)
            }
            VerifySuite::Moore {
                space,
                nmax,
                output,
            } => {
                let (s, _) = load_space(&space)?;
                suite_moore(&s, nmax, &output)
            }
            VerifySuite::EvenCycle {
                n_vertices,
                nmax,
                output,
            } => suite_even_cycle(n_vertices, nmax, &output),
            VerifySuite::Resolution {
                space,
                n_vertices,
                degree,
                output,
            } => {
                let loaded =
                    if space.family.is_some() || space.matrix.is_some() || space.edges.is_some() {
                        Some(load_space(&space)?.0)
                    } else {
                        None
                    };
                suite_resolution(loaded.as_ref(), n_vertices, degree, &output)
            }
            VerifySuite::MultRel { n_vertices, output } => suite_mult_rel(n_vertices, &output),
            VerifySuite::Euler {
                space,
                order,
                output,
            } => {
                let (s, _) = load_space(&space)?;
                suite_euler(&s, order, &output)
            }
        },
    }
}
