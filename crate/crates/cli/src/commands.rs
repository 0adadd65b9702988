use idcyl_core::cylindrical::{cf_root, root_gram_check};
use idcyl_core::definiteness::positive_definite_check;
use idcyl_core::extension::{d_nu_decomposition, Region};
use idcyl_core::gallery;
use idcyl_core::onedim::{empirical_cf, ks_critical_value, KsOracle};
use idcyl_core::{
    cf_1d, cf_cyl, cf_projection, continuity_report, id_conditions_report, negative_definite_check,
    project_1d, sample_1d, schoenberg_check, ConditionGrids, CylindricalCharacteristics,
    DefinitenessReport, Error, Tolerances,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{linspace, Kernel, Mode, Points, Requirement, RunConfig, SequenceSpec, Step};
use crate::error::{CliError, CliResult};

/// A CSV table with a fixed header.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub enum Report {
    Table(Table),
    Json(Value),
}

impl Report {
    pub fn extension(&self) -> &'static str {
        match self {
            Report::Table(_) => "csv",
            Report::Json(_) => "json",
        }
    }
}

pub struct Outcome {
    pub passed: bool,
    pub report: Report,
    /// Extra fields for the one-line stdout verdict.
    pub summary: Value,
}

/// Resolved run context: the config plus flag overrides.
pub struct Context {
    pub config: RunConfig,
    pub seed: u64,
    pub tol: Option<f64>,
}

fn num(x: f64) -> String {
    x.to_string()
}

fn vector(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn json_string<T: Serialize>(v: &T) -> CliResult<String> {
    Ok(serde_json::to_string(v)?)
}

pub fn cf(ctx: &Context) -> CliResult<Outcome> {
    let chr = ctx.config.characteristics()?;
    let params = &ctx.config.cf;
    let dim = chr.space.dim;
    let slack = ctx.tol.unwrap_or(1e-12);
    let points = match (&params.points, params.projections.is_empty()) {
        (Some(p), _) => p.resolve(dim, ctx.seed, "cf.points")?,
        (None, true) => Points::Random { random: 16 }.resolve(dim, ctx.seed, "cf.points")?,
        (None, false) => Vec::new(),
    };
    let mut table = Table::new(&[
        "source",
        "index",
        "functional",
        "coefficients",
        "re",
        "im",
        "abs",
    ]);
    let mut worst: f64 = 0.0;
    let mut row = |source: &str, index: usize, functional: String, coeffs: String, z: Complex64| {
        worst = if z.norm().is_finite() {
            worst.max(z.norm())
        } else {
            f64::INFINITY
        };
        table.push(vec![
            source.into(),
            index.to_string(),
            functional,
            coeffs,
            num(z.re),
            num(z.im),
            num(z.norm()),
        ]);
    };
    for (i, a) in points.iter().enumerate() {
        row("point", i, vector(a), String::new(), cf_cyl(&chr, a)?);
    }
    for (j, proj) in params.projections.iter().enumerate() {
        crate::config::check_dims(&proj.functionals, dim, "cf.projections")?;
        let functionals = proj
            .functionals
            .iter()
            .map(|a| vector(a))
            .collect::<Vec<_>>()
            .join("|");
        for t in &proj.coefficients {
            if t.len() != proj.functionals.len() {
                return Err(CliError::Config(format!(
                    "cf.projections[{j}]: {} coefficients for {} functionals",
                    t.len(),
                    proj.functionals.len()
                )));
            }
            row(
                "projection",
                j,
                functionals.clone(),
                vector(t),
                cf_projection(&chr, &proj.functionals, t)?,
            );
        }
    }
    let passed = worst <= 1.0 + slack;
    Ok(Outcome {
        passed,
        report: Report::Table(table),
        summary: json!({ "max_modulus": worst, "tolerance": slack }),
    })
}

pub fn check(ctx: &Context) -> CliResult<Outcome> {
    let chr = ctx.config.characteristics()?;
    let params = &ctx.config.check;
    let dim = chr.space.dim;
    let sets = params
        .point_sets
        .resolve(&chr, ctx.seed, "check.point_sets")?;
    let sequences = match &params.sequences {
        Some(specs) => specs
            .iter()
            .enumerate()
            .map(|(i, s)| s.resolve(dim, ctx.seed.wrapping_add(1 + i as u64), 30))
            .collect::<CliResult<Vec<_>>>()?,
        None => vec![SequenceSpec {
            step: Step::Dyadic,
            ..SequenceSpec::default()
        }
        .resolve(dim, ctx.seed.wrapping_add(1), 30)?],
    };
    let mut grids = ConditionGrids::new(sets).with_sequences(sequences);
    if let Some(d) = &params.divisors {
        grids.divisors = d.clone();
    }
    if let Some(t) = ctx.tol {
        grids.tolerances.eigen = t;
    }
    if let Some(c) = params.continuity_tol {
        grids.continuity_tol = c;
    }
    let report = id_conditions_report(&chr, &grids)?;
    let passed = report.all_passed();
    let rows = report.rows();
    Ok(Outcome {
        passed,
        report: Report::Json(json!({
            "command": "check",
            "passed": passed,
            "rows": rows,
            "report": report,
        })),
        summary: json!({ "rows": rows }),
    })
}

fn drift_kappa(
    chr: &CylindricalCharacteristics,
) -> impl Fn(&[f64]) -> idcyl_core::Result<Complex64> + Sync + '_ {
    move |a: &[f64]| Ok(Complex64::new(0.0, -chr.p.eval(&chr.space, a)?))
}

pub fn definiteness(ctx: &Context) -> CliResult<Outcome> {
    let chr = ctx.config.characteristics()?;
    let params = &ctx.config.definiteness;
    let sets = params
        .point_sets
        .resolve(&chr, ctx.seed, "definiteness.point_sets")?;
    let tol = ctx.tol.map(Tolerances::eigen).unwrap_or_default();
    let divisors = params.divisors.clone().unwrap_or_else(|| vec![1, 2, 3, 4]);
    let kappa = |a: &[f64]| chr.kappa(a);
    let mut reports: Vec<(usize, DefinitenessReport)> = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        let batch = match (params.kernel, params.mode) {
            (Kernel::Cf, Mode::Positive) => vec![positive_definite_check(
                |a: &[f64]| cf_cyl(&chr, a),
                set,
                tol,
            )?],
            (Kernel::Root, Mode::Positive) => {
                let k = params.k.ok_or_else(|| {
                    CliError::Config("definiteness.k is required for the root kernel".into())
                })?;
                if k == 0 {
                    return Err(CliError::Config("definiteness.k must be >= 1".into()));
                }
                if k == 1 {
                    vec![positive_definite_check(
                        |a: &[f64]| cf_root(&chr, a, 1),
                        set,
                        tol,
                    )?]
                } else {
                    vec![root_gram_check(&chr, set, k, tol)?]
                }
            }
            (Kernel::Kappa, Mode::Negative) => vec![negative_definite_check(kappa, set, tol)?],
            (Kernel::DriftKappa, Mode::Negative) => {
                vec![negative_definite_check(drift_kappa(&chr), set, tol)?]
            }
            (Kernel::Kappa, Mode::Schoenberg) => schoenberg_check(kappa, set, &divisors, tol)?,
            (Kernel::DriftKappa, Mode::Schoenberg) => {
                schoenberg_check(drift_kappa(&chr), set, &divisors, tol)?
            }
            (kernel, mode) => {
                return Err(CliError::Config(format!(
                    "definiteness: mode {} does not apply to kernel {}",
                    serde_json::to_string(&mode)?,
                    serde_json::to_string(&kernel)?
                )))
            }
        };
        reports.extend(batch.into_iter().map(|r| (i, r)));
    }
    let passed = reports.iter().all(|(_, r)| r.passed());
    let entries: Vec<Value> = reports
        .iter()
        .map(|(set, r)| json!({ "set": set, "report": r }))
        .collect();
    let failures = reports.iter().filter(|(_, r)| !r.passed()).count();
    Ok(Outcome {
        passed,
        report: Report::Json(json!({
            "command": "definiteness",
            "kernel": params.kernel,
            "mode": params.mode,
            "passed": passed,
            "reports": entries,
        })),
        summary: json!({ "checks": reports.len(), "failures": failures }),
    })
}

pub fn project(ctx: &Context) -> CliResult<Outcome> {
    let chr = ctx.config.characteristics()?;
    let params = &ctx.config.project;
    let points = params
        .points
        .resolve(chr.space.dim, ctx.seed, "project.points")?;
    let ts = params
        .t_grid
        .clone()
        .unwrap_or_else(|| linspace(-4.0, 4.0, 41));
    let tol = ctx.tol.unwrap_or(1e-10);
    let mut table = Table::new(&[
        "index",
        "functional",
        "m",
        "r",
        "truncation",
        "eta",
        "residual",
    ]);
    let mut worst: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        let p1 = project_1d(&chr, a)?;
        let mut residual: f64 = 0.0;
        for &t in &ts {
            let ta: Vec<f64> = a.iter().map(|x| t * x).collect();
            residual = residual.max((cf_1d(&p1, t)? - cf_cyl(&chr, &ta)?).norm());
        }
        worst = worst.max(residual);
        table.push(vec![
            i.to_string(),
            vector(a),
            num(p1.m),
            num(p1.r),
            p1.h.name().to_string(),
            json_string(&p1.eta)?,
            num(residual),
        ]);
    }
    Ok(Outcome {
        passed: worst <= tol,
        report: Report::Table(table),
        summary: json!({ "max_residual": worst, "tolerance": tol }),
    })
}

pub fn sample(ctx: &Context) -> CliResult<Outcome> {
    let chr = ctx.config.characteristics()?;
    let params = &ctx.config.sample;
    let a = params
        .functional
        .clone()
        .ok_or_else(|| CliError::Config("sample.functional is required".into()))?;
    crate::config::check_dims(std::slice::from_ref(&a), chr.space.dim, "sample.functional")?;
    let n = params.n.unwrap_or(100_000);
    if n == 0 {
        return Err(CliError::Config("sample.n must be >= 1".into()));
    }
    let cutoff = params.jump_cutoff.unwrap_or(0.0);
    let alpha = params.alpha.unwrap_or(0.01);
    let ts = params
        .t_grid
        .clone()
        .unwrap_or_else(|| linspace(-5.0, 5.0, 21));
    let p1 = project_1d(&chr, &a)?;
    let target = if cutoff > 0.0 {
        p1.truncated_jumps(cutoff)
    } else {
        p1.clone()
    };
    let xs = sample_1d(&p1, n, ctx.seed, cutoff)?;
    let bound = ctx.tol.unwrap_or(3.0 / (n as f64).sqrt());
    let mut table = Table::new(&[
        "t",
        "empirical_re",
        "empirical_im",
        "analytic_re",
        "analytic_im",
        "deviation",
    ]);
    let mut worst: f64 = 0.0;
    for &t in &ts {
        let e = empirical_cf(&xs, t);
        let c = cf_1d(&target, t)?;
        let d = (e - c).norm();
        worst = worst.max(d);
        table.push(vec![
            num(t),
            num(e.re),
            num(e.im),
            num(c.re),
            num(c.im),
            num(d),
        ]);
    }
    let ks = match KsOracle::for_characteristics(&target) {
        Some(oracle) => {
            let statistic = oracle.ks_statistic(&xs)?;
            let critical = ks_critical_value(n, alpha);
            Some((oracle, statistic, critical))
        }
        None => None,
    };
    let ks_ok = match &ks {
        Some((_, s, c)) => s < c,
        None => true,
    };
    Ok(Outcome {
        passed: worst <= bound && ks_ok,
        report: Report::Table(table),
        summary: json!({
            "n": n,
            "max_deviation": worst,
            "bound": bound,
            "ks": ks.map(|(oracle, statistic, critical)| json!({
                "oracle": oracle,
                "statistic": statistic,
                "critical": critical,
                "alpha": alpha,
            })),
        }),
    })
}

pub fn dnu(ctx: &Context) -> CliResult<Outcome> {
    let params = &ctx.config.dnu;
    let chr = if ctx.config.has_source() {
        Some(ctx.config.characteristics()?)
    } else {
        None
    };
    let measure = match (&params.measure, &chr) {
        (Some(m), _) => m.clone(),
        (None, Some(c)) => c.nu.as_measure_on_u().ok_or_else(|| {
            CliError::Config("dnu: the characteristics' ν is not a measure on U".into())
        })?,
        (None, None) => {
            return Err(CliError::Config(
                "dnu: give `dnu.measure` or a characteristics source".into(),
            ))
        }
    };
    let space = params
        .space
        .or(chr.as_ref().map(|c| c.space))
        .ok_or_else(|| CliError::Config("dnu: `dnu.space` is required".into()))?;
    let h = params
        .truncation
        .or(chr.as_ref().map(|c| c.truncation))
        .ok_or_else(|| CliError::Config("dnu: `dnu.truncation` is required".into()))?;
    measure.validate(&space)?;
    let points = params.points.resolve(space.dim, ctx.seed, "dnu.points")?;
    let mut table = Table::new(&[
        "index",
        "functional",
        "region",
        "value",
        "abs_value",
        "bound",
        "holds",
    ]);
    let mut violations = 0;
    for (i, a) in points.iter().enumerate() {
        match d_nu_decomposition(&measure, a, h, &space) {
            Ok(dec) => {
                for r in &dec.regions {
                    table.push(vec![
                        i.to_string(),
                        vector(a),
                        r.region.name().to_string(),
                        num(r.value),
                        num(r.abs_value),
                        num(r.bound),
                        r.holds().to_string(),
                    ]);
                }
                table.push(vec![
                    i.to_string(),
                    vector(a),
                    "total".into(),
                    num(dec.value),
                    String::new(),
                    String::new(),
                    "true".into(),
                ]);
            }
            Err(Error::BoundViolated {
                region,
                value,
                bound,
            }) => {
                violations += 1;
                table.push(vec![
                    i.to_string(),
                    vector(a),
                    region.to_string(),
                    String::new(),
                    num(value),
                    num(bound),
                    "false".into(),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let regions: Vec<&str> = Region::ALL.iter().map(|r| r.name()).collect();
    Ok(Outcome {
        passed: violations == 0,
        report: Report::Table(table),
        summary: json!({ "functionals": points.len(), "violations": violations, "regions": regions }),
    })
}

pub fn continuity(ctx: &Context) -> CliResult<Outcome> {
    let chr = ctx.config.characteristics()?;
    let params = &ctx.config.continuity;
    let seq = params.sequence.resolve(chr.space.dim, ctx.seed, 64)?;
    let mut settings = params.trend.unwrap_or_default();
    if let Some(t) = ctx.tol {
        settings.threshold = t;
    }
    let report = continuity_report(&chr, &seq, &settings)?;
    let mut table = Table::new(&["n", "drift_gap", "quadratic_gap", "combined_bl", "levy_bl"]);
    for r in &report.rows {
        table.push(vec![
            r.n.to_string(),
            num(r.drift_gap),
            num(r.quadratic_gap),
            num(r.combined_bl),
            num(r.levy_bl),
        ]);
    }
    let passed = match params.require {
        Requirement::Continuity => report.continuity,
        Requirement::RegularContinuity => report.regular_continuity,
    };
    Ok(Outcome {
        passed,
        report: Report::Table(table),
        summary: json!({
            "require": params.require,
            "continuity": report.continuity,
            "regular_continuity": report.regular_continuity,
            "radon_extendability": report.radon_extendability,
            "trends": report.trends,
        }),
    })
}

pub fn gallery_list() -> CliResult<Outcome> {
    let mut table = Table::new(&["name", "dim", "expected"]);
    for entry in gallery::list()? {
        let expected = entry
            .expected
            .iter()
            .map(|e| {
                Ok(format!(
                    "{}={}",
                    serde_json::to_value(e.property)?.as_str().unwrap_or(""),
                    e.holds
                ))
            })
            .collect::<CliResult<Vec<_>>>()?
            .join(";");
        table.push(vec![
            entry.name,
            entry.characteristics.space.dim.to_string(),
            expected,
        ]);
    }
    Ok(Outcome {
        passed: true,
        report: Report::Table(table),
        summary: json!({ "entries": gallery::NAMES }),
    })
}

pub fn gallery_build(name: &str, dim: usize) -> CliResult<Outcome> {
    let entry = match gallery::build(name, dim) {
        Ok(e) => e,
        Err(e @ Error::Hypothesis(_)) => return Err(CliError::Property(e)),
        Err(e) => return Err(e.into()),
    };
    let outcomes = entry.verify()?;
    let passed = outcomes.iter().all(|o| o.matches());
    Ok(Outcome {
        passed,
        report: Report::Json(json!({
            "command": "gallery build",
            "passed": passed,
            "entry": entry,
            "verification": outcomes,
        })),
        summary: json!({ "name": name, "dim": dim }),
    })
}
