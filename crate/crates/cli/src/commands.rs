use gft_core::beta_solver::{beta_series, closed_form, solve_beta, BetaNormalization, BetaResult};
use gft_core::numerics::quadrature::QuadratureConfig;
use gft_core::q_functions::{q_integral, q_pfq, q_series};
use gft_core::transform::{check_c_membership, transformed_extremal, GridSpec, MembershipReport};
use gft_core::verifier::{
    beta_region, cs_region, decreasing_condition, default_eps_grid, default_t_grid, default_z_grid,
    hohlov_region, komatu_region, m_pi_check, M_TOL,
};
use gft_core::weights::{WeightFamily, WeightSpec};
use gft_core::{Params, Report, Witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{
    Axis, BetaArgs, BetaOptions, CheckArgs, Command, GridArgs, ParamArgs, QtableArgs, SweepArgs,
    VerifyArgs,
};
use crate::output::{Cell, Output, Table};

pub const SWEEP_COLUMNS: [&str; 9] = [
    "alpha",
    "gamma",
    "delta",
    "zeta",
    "weight",
    "beta",
    "region_pass",
    "decreasing_pass",
    "membership_min",
];
pub const QTABLE_COLUMNS: [&str; 5] = ["t", "q_integral", "q_series", "q_pfq", "max_disagreement"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] gft_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// A finished command. `failure` is set when a table was cut short by a numeric error;
/// the rows computed before it are still in `output`.
pub struct Run {
    pub output: Output,
    pub failure: Option<String>,
}

impl From<Output> for Run {
    fn from(output: Output) -> Self {
        Run {
            output,
            failure: None,
        }
    }
}

pub fn run(cmd: &Command) -> Result<Run, CliError> {
    match cmd {
        Command::Beta(a) => cmd_beta(a).map(Run::from),
        Command::Check(a) => cmd_check(a).map(Run::from),
        Command::Verify(a) => cmd_verify(a).map(Run::from),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Qtable(a) => cmd_qtable(a),
    }
}

/// Caps the rayon pool at `GFT_THREADS` when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("GFT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("GFT_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// Parameter axes in lattice order: (alpha | mu), (gamma | nu), delta, zeta.
struct ParamAxes {
    roots: bool,
    axes: [Axis; 4],
}

impl ParamAxes {
    fn from_args(a: &ParamArgs) -> Result<Self, CliError> {
        let delta = a.delta.unwrap_or(Axis::Value(1.0));
        let zeta = a.zeta.unwrap_or(Axis::Value(0.0));
        match (a.mu, a.nu, a.alpha) {
            (Some(mu), Some(nu), _) => Ok(Self {
                roots: true,
                axes: [mu, nu, delta, zeta],
            }),
            (_, _, Some(alpha)) => Ok(Self {
                roots: false,
                axes: [alpha, a.gamma.unwrap_or(Axis::Value(0.0)), delta, zeta],
            }),
            _ => Err(usage(
                "give --alpha (with optional --gamma) or both --mu and --nu",
            )),
        }
    }

    fn build(&self, v: [f64; 4]) -> gft_core::Result<Params> {
        if self.roots {
            Params::from_roots(v[0], v[1], v[2], v[3])
        } else {
            Params::derive(v[0], v[1], v[2], v[3])
        }
    }

    fn single(&self) -> Result<Params, CliError> {
        let mut v = [0.0; 4];
        for (slot, axis) in v.iter_mut().zip(&self.axes) {
            *slot = axis
                .scalar()
                .ok_or_else(|| usage(format!("range '{axis}' is only accepted by sweep")))?;
        }
        self.build(v).map_err(|e| usage(e.to_string()))
    }
}

fn single_params(a: &ParamArgs) -> Result<Params, CliError> {
    ParamAxes::from_args(a)?.single()
}

fn parse_weight(s: &str) -> Result<WeightSpec, CliError> {
    s.parse().map_err(|e: gft_core::Error| usage(e.to_string()))
}

/// `family:x1,x2,...` where any `x` may be a range.
fn parse_template(s: &str) -> Result<(String, Vec<Axis>), CliError> {
    let (family, rest) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("expected family:args, got '{s}'")))?;
    let args = rest
        .split(',')
        .map(|x| x.parse::<Axis>().map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((family.to_owned(), args))
}

fn norm(o: &BetaOptions) -> BetaNormalization {
    if o.printed_normalization {
        BetaNormalization::Printed
    } else {
        BetaNormalization::Sharp
    }
}

fn norm_name(n: BetaNormalization) -> &'static str {
    match n {
        BetaNormalization::Sharp => "sharp",
        BetaNormalization::Printed => "printed",
    }
}

/// The beta a run works with, plus the quadrature result it is checked against.
fn compute_beta(
    p: &Params,
    w: &WeightSpec,
    o: &BetaOptions,
) -> Result<(BetaResult, BetaResult), CliError> {
    let n = norm(o);
    let mut quad = solve_beta(p, w, &cfg())?;
    quad.beta = n.invert(quad.integral)?;
    if !o.closed_form {
        return Ok((quad, quad));
    }
    let cf =
        closed_form(p, w, n).ok_or_else(|| usage(format!("weight {w} has no closed form")))??;
    Ok((cf, quad))
}

fn region_for(p: &Params, w: &WeightSpec) -> Report {
    match w.family() {
        WeightFamily::GeneralBeta { a, b, c, .. } => beta_region(p, *a, *b, *c),
        WeightFamily::Hohlov { a, b, c } => hohlov_region(p, *a, *b, *c),
        WeightFamily::CarlsonShaffer { b, c } => cs_region(p, *b, *c),
        WeightFamily::Komatu { k, p: e } => komatu_region(p, *k, *e),
    }
}

fn grid(g: &GridArgs) -> Result<(GridSpec, usize), CliError> {
    let spec = GridSpec::new(g.grid_r.clone(), g.grid_n).map_err(|e| usage(e.to_string()))?;
    let order = g.series_order.unwrap_or_else(|| spec.required_order());
    if order == 0 {
        return Err(usage("--series-order must be positive"));
    }
    Ok((spec, order))
}

fn membership(
    p: &Params,
    w: &WeightSpec,
    beta: f64,
    g: &GridArgs,
) -> Result<MembershipReport, CliError> {
    let (spec, order) = grid(g)?;
    let f = transformed_extremal(p, w, beta, order);
    Ok(check_c_membership(&f, p.zeta(), &spec, g.tol)?)
}

fn witness_text(w: &Option<Witness>) -> String {
    match w {
        None => String::new(),
        Some(Witness::Z { re, im }) => format!("z={re}{im:+}i"),
        Some(Witness::ZEps {
            z_re,
            z_im,
            eps_re,
            eps_im,
        }) => format!("z={z_re}{z_im:+}i eps={eps_re}{eps_im:+}i"),
        Some(Witness::T { t }) => format!("t={t}"),
        Some(Witness::Interval { lo, hi }) => format!("t in [{lo}, {hi}]"),
        Some(Witness::Text { detail }) => detail.clone(),
    }
}

fn cmd_beta(a: &BetaArgs) -> Result<Output, CliError> {
    let p = single_params(&a.params)?;
    let w = parse_weight(&a.weight)?;
    let n = norm(&a.beta);
    let (r, quad) = compute_beta(&p, &w, &a.beta)?;
    let mut diagnostics = p.warnings();
    if a.beta.closed_form {
        diagnostics.push(format!(
            "closed form minus quadrature: beta {:e}, integral {:e}",
            r.beta - quad.beta,
            r.integral - quad.integral
        ));
    }
    let series =
        match beta_series(&p, &w, a.series_terms).and_then(|s| Ok((n.invert(s.integral)?, s))) {
            Ok((beta, s)) => {
                diagnostics.push(format!(
                    "series minus quadrature: integral {:e}",
                    s.integral - quad.integral
                ));
                json!({ "beta": beta, "integral": s.integral, "terms": s.work })
            }
            Err(e) => {
                diagnostics.push(format!("series cross-check unavailable: {e}"));
                Value::Null
            }
        };
    let json = json!({
        "params": p,
        "weight": w.to_string(),
        "normalization": norm_name(n),
        "beta": r.beta,
        "integral": r.integral,
        "method": r.method,
        "error_estimate": r.error_estimate,
        "work": r.work,
        "quadrature": { "beta": quad.beta, "integral": quad.integral },
        "series": series,
        "diagnostics": diagnostics,
    });
    let table = Table::record(vec![
        ("weight", w.to_string().into()),
        ("normalization", norm_name(n).into()),
        ("beta", r.beta.into()),
        ("integral", r.integral.into()),
        ("method", format!("{:?}", r.method).into()),
        ("error_estimate", r.error_estimate.into()),
        ("quadrature_beta", quad.beta.into()),
    ]);
    Ok(Output {
        json,
        table,
        trailer: diagnostics,
    })
}

fn cmd_check(a: &CheckArgs) -> Result<Output, CliError> {
    let p = single_params(&a.params)?;
    let w = parse_weight(&a.weight)?;
    if a.t_points < 2 || a.z_points < 2 || a.eps_points < 1 {
        return Err(usage(
            "need --t-points >= 2, --z-points >= 2 and --eps-points >= 1",
        ));
    }
    let mut r = Report::new();
    r.merge("region.", region_for(&p, &w));
    r.merge(
        "decreasing.",
        decreasing_condition(&p, &w, &default_t_grid(a.t_points), &cfg())?,
    );
    let m = m_pi_check(
        &p,
        &w,
        &default_z_grid(a.z_points),
        &default_eps_grid(a.eps_points),
        &cfg(),
        M_TOL,
    )?;
    r.merge("m_pi.", m);
    for warning in p.warnings() {
        r.note(warning);
    }
    let mut table = Table::new(&["check", "value", "relation", "threshold", "pass", "witness"]);
    for c in &r.checks {
        let relation = serde_json::to_value(c.relation).expect("serializable");
        table.rows.push(vec![
            c.name.as_str().into(),
            c.value.into(),
            relation.as_str().unwrap_or_default().into(),
            c.threshold.into(),
            c.pass.into(),
            witness_text(&c.witness).into(),
        ]);
    }
    let json = json!({ "params": p, "weight": w.to_string(), "pass": r.pass, "report": r });
    Ok(Output {
        json,
        table,
        trailer: r.notes.clone(),
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Output, CliError> {
    let p = single_params(&a.params)?;
    let w = parse_weight(&a.weight)?;
    let (beta, _) = compute_beta(&p, &w, &a.beta)?;
    let m = membership(&p, &w, beta.beta, &a.grid)?;
    let table = Table::record(vec![
        ("weight", w.to_string().into()),
        ("beta", beta.beta.into()),
        ("class", m.class.into()),
        ("pass", m.pass.into()),
        ("membership_min", m.min_value.into()),
        ("witness", witness_text(&m.witness_z).into()),
        ("series_order", (m.series_order as f64).into()),
    ]);
    let mut trailer = p.warnings();
    trailer.extend(m.notes.iter().cloned());
    let json = json!({
        "params": p,
        "weight": w.to_string(),
        "beta": beta.beta,
        "beta_method": beta.method,
        "normalization": norm_name(norm(&a.beta)),
        "membership": m,
    });
    Ok(Output {
        json,
        table,
        trailer,
    })
}

fn sample_axis(axis: &Axis, rng: &mut ChaCha8Rng) -> f64 {
    match *axis {
        Axis::Value(x) => x,
        Axis::Range { lo, hi, .. } if lo == hi => lo,
        Axis::Range { lo, hi, .. } => rng.gen_range(lo.min(hi)..=lo.max(hi)),
    }
}

/// Row-major lattice over `axes`, the last axis varying fastest.
fn lattice(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        let vals = axis.values();
        acc.into_iter()
            .flat_map(|prefix| {
                vals.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn sweep_point(
    pa: &ParamAxes,
    family: &str,
    pt: &[f64],
    a: &SweepArgs,
) -> Result<Vec<Cell>, CliError> {
    let p = pa.build([pt[0], pt[1], pt[2], pt[3]])?;
    let args: Vec<String> = pt[4..].iter().map(|x| x.to_string()).collect();
    let w: WeightSpec = format!("{family}:{}", args.join(",")).parse()?;
    let beta = solve_beta(&p, &w, &cfg())?.beta;
    let region = region_for(&p, &w).pass;
    let dec = decreasing_condition(&p, &w, &default_t_grid(a.t_points), &cfg())?.pass;
    let m = membership(&p, &w, beta, &a.grid)?;
    Ok(vec![
        p.alpha().into(),
        p.gamma().into(),
        p.delta().into(),
        p.zeta().into(),
        w.to_string().into(),
        beta.into(),
        region.into(),
        dec.into(),
        m.min_value.into(),
    ])
}

fn cmd_sweep(a: &SweepArgs) -> Result<Run, CliError> {
    let pa = ParamAxes::from_args(&a.params)?;
    let (family, wargs) = parse_template(&a.weight)?;
    // surface bad grids and family names before any work
    grid(&a.grid)?;
    if a.t_points < 2 {
        return Err(usage("--t-points must be >= 2"));
    }
    if !["hohlov", "cs", "carlson-shaffer", "komatu", "genbeta"]
        .contains(&family.trim().to_ascii_lowercase().as_str())
    {
        return Err(usage(format!("unknown weight family '{family}'")));
    }
    let axes: Vec<Axis> = pa.axes.iter().copied().chain(wargs).collect();
    let points = match a.samples {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..n)
                .map(|_| axes.iter().map(|x| sample_axis(x, &mut rng)).collect())
                .collect()
        }
        None => lattice(&axes),
    };
    let results: Vec<Result<Vec<Cell>, CliError>> = points
        .par_iter()
        .map(|pt| sweep_point(&pa, &family, pt, a))
        .collect();
    let mut table = Table::new(&SWEEP_COLUMNS);
    let mut failure = None;
    for (i, (r, pt)) in results.into_iter().zip(&points).enumerate() {
        match r {
            Ok(row) => table.rows.push(row),
            Err(e) => {
                failure = Some(format!("error at point {i} {pt:?}: {e}"));
                break;
            }
        }
    }
    Ok(finish_table(table, failure))
}

fn finish_table(table: Table, failure: Option<String>) -> Run {
    let mut json = json!({ "rows": table.to_json() });
    if let Some(f) = &failure {
        json["error"] = Value::String(f.clone());
    }
    let trailer = failure.iter().cloned().collect();
    Run {
        output: Output {
            json,
            table,
            trailer,
        },
        failure,
    }
}

fn cmd_qtable(a: &QtableArgs) -> Result<Run, CliError> {
    let p = single_params(&a.params)?;
    let ts: Vec<f64> = if a.t.is_empty() {
        (0..10).map(|i| i as f64 / 10.0).collect()
    } else {
        a.t.clone()
    };
    if let Some(t) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(usage(format!("t = {t} outside [0, 1]")));
    }
    let mut table = Table::new(&QTABLE_COLUMNS);
    let mut failure = None;
    for &t in &ts {
        let row = (|| -> gft_core::Result<Vec<Cell>> {
            let qi = q_integral(&p, t, &cfg())?.value;
            let qs = q_series(&p, t, a.n_terms)?.value;
            let qp = q_pfq(&p, t, 1e-15)?.value;
            let d = (qi - qs).abs().max((qs - qp).abs()).max((qi - qp).abs());
            Ok(vec![t.into(), qi.into(), qs.into(), qp.into(), d.into()])
        })();
        match row {
            Ok(r) => table.rows.push(r),
            Err(e) => {
                failure = Some(format!("error at t = {t}: {e}"));
                break;
            }
        }
    }
    Ok(finish_table(table, failure))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_is_row_major() {
        let axes = [
            Axis::Range {
                lo: 0.0,
                hi: 1.0,
                n: 2,
            },
            Axis::Value(5.0),
            Axis::Range {
                lo: 1.0,
                hi: 3.0,
                n: 3,
            },
        ];
        let l = lattice(&axes);
        assert_eq!(l.len(), 6);
        assert_eq!(l[0], vec![0.0, 5.0, 1.0]);
        assert_eq!(l[1], vec![0.0, 5.0, 2.0]);
        assert_eq!(l[3], vec![1.0, 5.0, 1.0]);
    }

    #[test]
    fn template_accepts_ranges() {
        let (f, args) = parse_template("genbeta:1,0.1:1:10,4").unwrap();
        assert_eq!(f, "genbeta");
        assert_eq!(args[1].values().len(), 10);
        assert!(parse_template("genbeta").is_err());
    }

    #[test]
    fn seeded_samples_repeat() {
        let axis = Axis::Range {
            lo: 0.0,
            hi: 2.0,
            n: 1,
        };
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..5)
                .map(|_| sample_axis(&axis, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
        assert!(draw(3).iter().all(|x| (0.0..=2.0).contains(x)));
    }

    #[test]
    fn region_dispatch_by_family() {
        let p = Params::from_roots(0.5, 2.0, 1.0, 0.0).unwrap();
        assert!(region_for(&p, &"cs:0.1,4".parse().unwrap())
            .check("c>=a+b+2")
            .is_some());
        assert!(region_for(&p, &"genbeta:1,0.1,4".parse().unwrap())
            .check("C>=A+B+2")
            .is_some());
        assert!(region_for(&p, &"komatu:-0.5,2".parse().unwrap())
            .check("k>-1")
            .is_some());
    }
}
