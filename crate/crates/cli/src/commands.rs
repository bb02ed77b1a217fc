use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use potts_core::bounds::{bound_ids, grid, verify_bound, BoundReport, Family};
use potts_core::chromatic::exact_count_oracle;
use potts_core::graph::{
    enumerate_graphs, generate_family, parse_edge_list, to_edge_list, FamilyKind, PartiallyColoredGraph,
};
use potts_core::interpolation::{approx_partition_at, CountEstimate};
use potts_core::potts::partition_poly;
use potts_core::zeros::{clique_margins, log_log_slope, regime_q, zero_free_scan, CliqueMargin, ScanSummary};
use serde::Serialize;

use crate::error::{CliError, CHECK_FAILED, OK, REGIME, USAGE};
use crate::output::{csv_document, emit, json_document, write_atomic, Format, TOOL, VERSION};
use crate::{ExactArgs, GenArgs, InterpolateArgs, Kind, ScanArgs, VerifyArgs};

fn read_graph(path: &Path, q: Option<usize>) -> Result<PartiallyColoredGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read `{}`: {e}", path.display())))?;
    let g = parse_edge_list(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    match q {
        Some(q) => Ok(g.with_q(q)?),
        None => Ok(g),
    }
}

fn in_unit_interval(w: &BigRational) -> bool {
    *w >= BigRational::zero() && *w <= BigRational::one()
}

#[derive(Serialize)]
struct Evaluation {
    w: String,
    value: String,
    decimal: f64,
}

#[derive(Serialize)]
struct ExactResult {
    n: usize,
    q: usize,
    free: usize,
    /// Coefficients of `w^0, w^1, ...` as decimal strings when they exceed
    /// 64 bits.
    polynomial: Vec<serde_json::Value>,
    evaluations: Vec<Evaluation>,
}

fn coefficient_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => v.into(),
        None => c.to_string().into(),
    }
}

pub fn exact(args: &ExactArgs) -> Result<u8, CliError> {
    let g = read_graph(&args.input, args.q)?;
    let p = partition_poly(&g)?;
    let ws = if args.ws.is_empty() { grid(args.grid) } else { args.ws.clone() };
    let evaluations: Vec<Evaluation> = ws
        .iter()
        .map(|w| {
            let v = p.eval_rational(w);
            Evaluation { w: w.to_string(), value: v.to_string(), decimal: v.to_f64().unwrap_or(f64::NAN) }
        })
        .collect();
    let text = match args.common.format {
        Format::Json => {
            let result = ExactResult {
                n: g.n(),
                q: g.q(),
                free: g.free_count(),
                polynomial: p.coeffs().iter().map(coefficient_json).collect(),
                evaluations,
            };
            json_document("exact", args, &result)?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = evaluations
                .into_iter()
                .map(|e| vec![e.w, e.value, e.decimal.to_string()])
                .collect();
            csv_document("exact", args, &["w", "value", "decimal"], &rows)?
        }
    };
    emit(args.common.output.as_deref(), &text)?;
    Ok(OK)
}

#[derive(Serialize)]
struct VerifyResult {
    passed: bool,
    reports: Vec<BoundReport>,
}

pub fn verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let ids: Vec<String> = if args.all {
        bound_ids().iter().map(|s| s.to_string()).collect()
    } else {
        args.bounds.clone()
    };
    if let Some(bad) = ids.iter().find(|id| !bound_ids().contains(&id.as_str())) {
        return Err(CliError::usage(format!(
            "unknown bound `{bad}`; known ids: {}",
            bound_ids().join(", ")
        )));
    }
    let ws = if args.ws.is_empty() { grid(args.grid) } else { args.ws.clone() };
    if let Some(w) = ws.iter().find(|w| !in_unit_interval(w)) {
        return Err(CliError::usage(format!("weight {w} is outside [0, 1]")));
    }
    let family = Family { n_max: args.nmax, delta: args.delta, q: args.q, pins: args.pins.into() };
    let reports = ids
        .iter()
        .map(|id| verify_bound(id, &family, &ws))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out_of_regime = false;
    let mut violated = false;
    for r in &reports {
        if !r.in_regime() {
            out_of_regime = true;
            eprintln!("warning: {} is out of regime for q = {}, Δ = {}", r.bound_id, args.q, args.delta);
        } else if r.violations > 0 {
            violated = true;
            eprintln!("{}: {} violations, worst slack {:?}", r.bound_id, r.violations, r.worst_slack);
        }
    }
    let result = VerifyResult { passed: !violated, reports };
    let text = match args.common.format {
        Format::Json => json_document("verify", args, &result)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = result.reports.iter().map(BoundReport::csv_record).collect();
            csv_document("verify", args, &BoundReport::CSV_HEADER, &rows)?
        }
    };
    emit(args.common.output.as_deref(), &text)?;
    Ok(if args.strict && out_of_regime {
        REGIME
    } else if violated {
        CHECK_FAILED
    } else {
        OK
    })
}

#[derive(Serialize)]
struct ScanResult {
    #[serde(flatten)]
    summary: ScanSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    cliques: Vec<CliqueMargin>,
    #[serde(skip_serializing_if = "Option::is_none")]
    clique_log_log_slope: Option<f64>,
}

pub fn scan(args: &ScanArgs) -> Result<u8, CliError> {
    let (graphs, delta, q) = match (&args.family, &args.input) {
        (Some(f), None) if f == "all" => {
            let delta = args.delta.unwrap_or(3);
            let q = args.q.unwrap_or_else(|| regime_q(delta));
            (enumerate_graphs(args.nmax, delta, q, args.pins.into()), delta, q)
        }
        (Some(f), None) => return Err(CliError::usage(format!("unknown family `{f}`; use `all` or --input"))),
        (None, Some(path)) => {
            let g = read_graph(path, args.q)?;
            let delta = args.delta.unwrap_or(g.max_degree());
            g.check_max_degree(delta)?;
            let q = g.q();
            (vec![g], delta, q)
        }
        _ => return Err(CliError::usage("give exactly one of --family and --input")),
    };
    let summary = zero_free_scan(&graphs, q, delta)?;
    let cliques = clique_margins(&args.cliques)?;
    let slope = log_log_slope(&cliques);
    match summary.min_margin {
        Some(m) => eprintln!("family min margin: {m} over {} graphs", summary.graphs),
        None => eprintln!("family min margin: none (no roots) over {} graphs", summary.graphs),
    }
    if summary.exploratory {
        eprintln!("warning: q = {q} is below the zero-free regime for Δ = {delta}; results are exploratory");
    }
    let healthy = summary.margin_positive()
        && summary.all_degree_checks
        && summary.reports.iter().all(|r| r.residuals_ok());
    let code = if args.strict && summary.exploratory {
        REGIME
    } else if !summary.exploratory && !healthy {
        CHECK_FAILED
    } else {
        OK
    };
    let text = match args.common.format {
        Format::Json => {
            let result = ScanResult { summary, cliques, clique_log_log_slope: slope };
            json_document("scan", args, &result)?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = summary
                .reports
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![
                        i.to_string(),
                        r.degree.to_string(),
                        r.min_dist_to_interval.map(|d| d.to_string()).unwrap_or_else(|| "inf".into()),
                    ]
                })
                .collect();
            csv_document("scan", args, &["graph_id", "degree", "min_dist"], &rows)?
        }
    };
    emit(args.common.output.as_deref(), &text)?;
    Ok(code)
}

pub fn interpolate(args: &InterpolateArgs) -> Result<u8, CliError> {
    let g = read_graph(&args.input, args.q)?;
    if !in_unit_interval(&args.target) {
        return Err(CliError::usage(format!("target {} is outside [0, 1]", args.target)));
    }
    let mut estimate: CountEstimate = approx_partition_at(&g, &args.target, args.eps)?;
    let mut code = OK;
    if args.check {
        let exact = if args.target.is_zero() {
            exact_count_oracle(&g)?
        } else {
            // Exact rational value; compared through its logarithm below.
            let v = partition_poly(&g)?.eval_rational(&args.target);
            estimate.exact_value = Some(v.to_string());
            let err = if estimate.exact_zero {
                if v.is_zero() { 0.0 } else { f64::INFINITY }
            } else {
                (estimate.log_xi - v.to_f64().unwrap_or(f64::NAN).ln()).abs()
            };
            if !(err <= estimate.eps_achieved + 1e-12) {
                code = CHECK_FAILED;
            }
            eprintln!("|log xi - log exact| = {err}");
            BigInt::zero()
        };
        if args.target.is_zero() {
            estimate = estimate.with_exact(&exact);
            let ok = match estimate.log_error() {
                Some(err) => {
                    eprintln!("|log xi - log exact| = {err}");
                    err <= estimate.eps_achieved + 1e-12
                }
                None => estimate.exact_zero == exact.is_zero(),
            };
            if !ok {
                code = CHECK_FAILED;
            }
        }
    }
    let text = match args.common.format {
        Format::Json => json_document("interpolate", args, &estimate)?,
        Format::Csv => {
            let row = vec![
                estimate.xi.clone(),
                estimate.log_xi.to_string(),
                estimate.target.clone(),
                estimate.eps_target.to_string(),
                estimate.eps_achieved.to_string(),
                estimate.steps.to_string(),
                estimate.m.to_string(),
                estimate.exact_value.clone().unwrap_or_default(),
            ];
            let header = ["xi", "log_xi", "target", "eps_target", "eps_achieved", "steps", "m", "exact_value"];
            csv_document("interpolate", args, &header, &[row])?
        }
    };
    emit(args.common.output.as_deref(), &text)?;
    Ok(code)
}

fn need(v: Option<usize>, flag: &str, kind: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::usage(format!("--{flag} is required for --kind {kind}")))
}

pub fn gen(args: &GenArgs) -> Result<u8, CliError> {
    let header = format!("# generated by {TOOL} {VERSION}\n");
    let kind = match args.kind {
        Kind::All => {
            let n = need(args.n, "n", "all")?;
            let d = need(args.d, "d", "all")?;
            let dir = args
                .output
                .as_deref()
                .ok_or_else(|| CliError::usage("--kind all needs --output naming a directory"))?;
            fs::create_dir_all(dir).map_err(CliError::io)?;
            let graphs = enumerate_graphs(n, d, args.q, args.pins.into());
            for (i, g) in graphs.iter().enumerate() {
                let text = format!("{header}{}", to_edge_list(g));
                write_atomic(&dir.join(format!("g{i:05}.edges")), text.as_bytes())?;
            }
            eprintln!("wrote {} graphs to {}", graphs.len(), dir.display());
            return Ok(OK);
        }
        Kind::Cycle => FamilyKind::Cycle { n: need(args.n, "n", "cycle")? },
        Kind::Clique => FamilyKind::Clique { n: need(args.n, "n", "clique")? },
        Kind::Path => FamilyKind::Path { n: need(args.n, "n", "path")? },
        Kind::Star => FamilyKind::Star { leaves: need(args.n, "n", "star")? },
        Kind::RandomRegular => FamilyKind::RandomRegular {
            n: need(args.n, "n", "random-regular")?,
            d: need(args.d, "d", "random-regular")?,
            seed: args.seed,
        },
        Kind::CompleteBipartite => FamilyKind::CompleteBipartite {
            a: need(args.a, "a", "complete-bipartite")?,
            b: need(args.b, "b", "complete-bipartite")?,
        },
        Kind::Petersen => FamilyKind::Petersen,
    };
    if args.q == 0 {
        return Err(CliError { code: USAGE, message: "--q must be positive".into() });
    }
    let g = generate_family(&kind, args.q)?;
    emit(args.output.as_deref(), &format!("{header}{}", to_edge_list(&g)))?;
    Ok(OK)
}
