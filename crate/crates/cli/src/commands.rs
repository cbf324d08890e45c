//! One function per subcommand, each returning its table(s) without doing I/O.

use pvmeta::diagnostics::{claims_sweep, DEFAULT_SWEEP};
use pvmeta::mc::{ks_distance, sample_min_pvalues, MCConfig};
use pvmeta::metadist::{self, dispersion_stats, mean_true_pvalue, solve_median_for_mean};
use pvmeta::phacking::{cdf_min, hacking_curve, pdf_min};
use pvmeta::power::{power_metadensity, power_metadensity_integral, PowerParams};
use pvmeta::{HackingParams, MetaDistParams, QuadratureConfig, SampleSize};

use crate::args::{CurveArgs, FiguresArgs, HackArgs, McCheckArgs, OutputArgs, PowerArgs, StatsArgs};
use crate::error::CliError;
use crate::grid::GridSpec;
use crate::table::OutputTable;

type Result<T> = std::result::Result<T, CliError>;

pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

pub fn quad_config(tol: Option<f64>) -> Result<QuadratureConfig> {
    match tol {
        None => Ok(QuadratureConfig::default()),
        Some(t) if t > 0.0 && t.is_finite() => Ok(QuadratureConfig::with_tolerance(t)),
        Some(t) => Err(CliError::Usage(format!("--quad-tol {t} must be a positive number"))),
    }
}

fn describe_quad(table: &mut OutputTable, quad: &QuadratureConfig) {
    table
        .meta("quad_abs_tol", quad.abs_tol)
        .meta("quad_rel_tol", quad.rel_tol)
        .meta("quad_max_subdivisions", quad.max_subdivisions);
}

fn stamp(table: &mut OutputTable, command: &str, regenerate: String) {
    table
        .meta("command", command)
        .meta("regenerate", regenerate)
        .meta("tool", concat!("pvmeta-cli ", env!("CARGO_PKG_VERSION")));
}

fn tol_flag(tol: Option<f64>) -> String {
    tol.map(|t| format!(" --quad-tol {t}")).unwrap_or_default()
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn median_or_solved(pm: Option<f64>, mean: Option<f64>, n: SampleSize, quad: &QuadratureConfig) -> Result<f64> {
    match (pm, mean) {
        (Some(m), None) => Ok(m),
        (None, Some(target)) => Ok(solve_median_for_mean(target, n, quad)?.get()),
        _ => Err(CliError::Usage("give exactly one of --pm and --mean".into())),
    }
}

/// `pdf` and `cdf`: the grid in column `p`, then one column per median.
pub fn curves(args: &CurveArgs, cumulative: bool) -> Result<OutputTable> {
    let quad = quad_config(args.output.quad_tol)?;
    let name = if cumulative { "cdf" } else { "pdf" };
    let params = args
        .pm
        .iter()
        .map(|&m| MetaDistParams::new(m, args.n))
        .collect::<pvmeta::Result<Vec<_>>>()?;
    let mut columns = vec!["p".to_string()];
    columns.extend(args.pm.iter().map(|m| format!("{name}_pm_{m}")));
    let mut table = OutputTable::new(&columns.iter().map(String::as_str).collect::<Vec<_>>());
    for p in args.grid.points() {
        let mut row = vec![p];
        for params in &params {
            row.push(if cumulative {
                metadist::cdf(p, params)?
            } else {
                metadist::pdf(p, params)?
            });
        }
        table.push(row);
    }
    stamp(
        &mut table,
        name,
        format!(
            "pvmeta {name} --pm {} --n {} --grid {}{}",
            join(&args.pm),
            args.n,
            args.grid,
            tol_flag(args.output.quad_tol)
        ),
    );
    table
        .meta("pm", join(&args.pm))
        .meta("n", args.n)
        .meta("grid", args.grid);
    describe_quad(&mut table, &quad);
    Ok(table)
}

pub fn hack(args: &HackArgs) -> Result<OutputTable> {
    let quad = quad_config(args.output.quad_tol)?;
    let base = MetaDistParams::new(args.pm, args.n)?;
    let curve = hacking_curve(&base, args.mmax, &quad)?;
    let mut columns = vec!["m", "expected_min", "expected_min_abs_error"];
    if args.mc {
        columns.extend(["mc_mean", "mc_std_error"]);
    }
    let mut table = OutputTable::new(&columns);
    for row in &curve {
        let mut r = vec![row.trials as f64, row.expected_min.value, row.expected_min.abs_error];
        if args.mc {
            let hp = HackingParams::new(base, row.trials)?;
            let emp = sample_min_pvalues(&hp, &MCConfig::new(args.draws, args.seed))?;
            r.extend([emp.mean(), emp.std_error()]);
        }
        table.push(r);
    }
    let mc_flags = if args.mc {
        format!(" --mc --draws {} --seed {}", args.draws, args.seed)
    } else {
        String::new()
    };
    stamp(
        &mut table,
        "hack",
        format!(
            "pvmeta hack --pm {} --n {} --mmax {}{mc_flags}{}",
            args.pm,
            args.n,
            args.mmax,
            tol_flag(args.output.quad_tol)
        ),
    );
    table.meta("pm", args.pm).meta("n", args.n).meta("mmax", args.mmax);
    if args.mc {
        table
            .meta("mc_draws", args.draws)
            .meta("mc_seed", args.seed)
            .meta("mc_stream_count", MCConfig::new(args.draws, args.seed).stream_count);
    }
    describe_quad(&mut table, &quad);
    Ok(table)
}

fn parse_sweep(spec: &[String]) -> Result<Vec<SampleSize>> {
    if spec.len() == 1 && spec[0].trim() == "default" {
        return Ok(DEFAULT_SWEEP.to_vec());
    }
    spec.iter()
        .map(|s| s.parse::<SampleSize>().map_err(CliError::from))
        .collect()
}

pub fn stats(args: &StatsArgs) -> Result<OutputTable> {
    let quad = quad_config(args.output.quad_tol)?;
    if let Some(spec) = &args.sweep_n {
        let ns = parse_sweep(spec)?;
        let rows = claims_sweep(&ns, &quad)?;
        let mut table = OutputTable::new(&[
            "n",
            "median_for_mean_0.05",
            "fraction_below_0.05_at_mean_0.05",
            "median_for_mean_0.12",
            "fraction_below_0.05_at_mean_0.12",
            "mean_at_median_0.02",
            "std_at_median_0.02",
            "mad_at_median_0.02",
        ]);
        for r in rows {
            table.push(vec![
                r.n.finite().map_or(f64::INFINITY, f64::from),
                r.median_for_mean_05,
                r.below_05_at_mean_05,
                r.median_for_mean_12,
                r.below_05_at_mean_12,
                r.mean_at_median_02,
                r.std_at_median_02,
                r.mad_at_median_02,
            ]);
        }
        let list = ns.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        stamp(
            &mut table,
            "stats",
            format!("pvmeta stats --sweep-n {list}{}", tol_flag(args.output.quad_tol)),
        );
        table
            .meta("sweep_n", list)
            .meta("n_encoding", "limit is written as inf");
        describe_quad(&mut table, &quad);
        return Ok(table);
    }

    let median = median_or_solved(args.pm, args.mean, args.n, &quad)?;
    let params = MetaDistParams::new(median, args.n)?;
    let d = dispersion_stats(&params, &QUANTILE_LEVELS, &quad)?;
    let mut table = OutputTable::new(&[
        "p_M",
        "p_s",
        "p_s_abs_error",
        "std",
        "mad",
        "q05",
        "q25",
        "q50",
        "q75",
        "q95",
    ]);
    let mut row = vec![median, d.mean.value, d.mean.abs_error, d.std.value, d.mad.value];
    row.extend(d.quantiles.iter().map(|&(_, q)| q));
    table.push(row);
    let target = match (args.pm, args.mean) {
        (Some(m), _) => format!("--pm {m}"),
        (_, Some(t)) => format!("--mean {t}"),
        _ => unreachable!("clap requires one target"),
    };
    stamp(
        &mut table,
        "stats",
        format!("pvmeta stats {target} --n {}{}", args.n, tol_flag(args.output.quad_tol)),
    );
    table.meta("n", args.n).meta("p_M", median);
    if let Some(t) = args.mean {
        table.meta("target_mean", t).meta("p_M_solved", true);
    }
    describe_quad(&mut table, &quad);
    Ok(table)
}

pub fn power(args: &PowerArgs) -> Result<OutputTable> {
    let quad = quad_config(args.output.quad_tol)?;
    let params = PowerParams::new(args.ps, args.n)?;
    let mut table = OutputTable::new(&["beta_c", "density", "gamma1", "gamma2", "gamma3"]);
    let (mut negative, mut undefined) = (0usize, Vec::new());
    for b in args.grid.points() {
        match power_metadensity(b, &params) {
            Ok(ev) => {
                negative += usize::from(ev.is_negative());
                let i = ev.intermediates;
                table.push(vec![
                    b,
                    ev.value,
                    i.gamma1.unwrap_or(f64::NAN),
                    i.gamma2.unwrap_or(f64::NAN),
                    i.gamma3,
                ]);
            }
            Err(pvmeta::Error::Domain(msg)) => {
                // β_c = 1/2 and similar points are recorded, not fatal.
                undefined.push(format!("{b}: {msg}"));
                table.push(vec![b, f64::NAN, f64::NAN, f64::NAN, f64::NAN]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    stamp(
        &mut table,
        "power",
        format!(
            "pvmeta power --ps {} --n {} --grid {}{}",
            args.ps,
            args.n,
            args.grid,
            tol_flag(args.output.quad_tol)
        ),
    );
    table
        .meta("ps", args.ps)
        .meta("n", args.n)
        .meta("grid", args.grid)
        .meta("negative_count", negative)
        .meta("undefined_count", undefined.len());
    if !undefined.is_empty() {
        table.meta("undefined_points", undefined.join("; "));
    }
    match power_metadensity_integral(&params, &quad) {
        Ok(i) => table.meta("integral", i.value).meta("integral_abs_error", i.abs_error),
        Err(e) => table.meta("integral", f64::NAN).meta("integral_error", e),
    };
    describe_quad(&mut table, &quad);
    Ok(table)
}

/// Histogram of Monte Carlo minimum p-values against the analytic density.
pub fn mc_check(args: &McCheckArgs) -> Result<OutputTable> {
    let quad = quad_config(args.output.quad_tol)?;
    let median = median_or_solved(args.pm, args.mean, args.n, &quad)?;
    let target = match args.mean {
        Some(t) => format!("--mean {t}"),
        None => format!("--pm {median}"),
    };
    let mut table = mc_table(median, args.n, args.m, args.draws, args.seed, args.bins, &quad)?;
    stamp(
        &mut table,
        "mc-check",
        format!(
            "pvmeta mc-check {target} --n {} --m {} --draws {} --seed {} --bins {}{}",
            args.n,
            args.m,
            args.draws,
            args.seed,
            args.bins,
            tol_flag(args.output.quad_tol)
        ),
    );
    if let Some(t) = args.mean {
        table.meta("target_mean", t).meta("p_M_solved", true);
    }
    Ok(table)
}

fn mc_table(
    median: f64,
    n: SampleSize,
    m: u32,
    draws: usize,
    seed: u64,
    bins: usize,
    quad: &QuadratureConfig,
) -> Result<OutputTable> {
    if bins == 0 {
        return Err(CliError::Usage("--bins must be at least 1".into()));
    }
    let hp = HackingParams::new(MetaDistParams::new(median, n)?, m)?;
    let cfg = MCConfig::new(draws, seed);
    let emp = sample_min_pvalues(&hp, &cfg)?;
    let cdf = |x: f64| -> pvmeta::Result<f64> {
        if x <= 0.0 {
            Ok(0.0)
        } else if x >= 1.0 {
            Ok(1.0)
        } else {
            cdf_min(x, &hp)
        }
    };
    // Evaluate once up front so a domain error surfaces instead of a NaN KS.
    cdf(0.5)?;
    let ks = ks_distance(&emp, |x| cdf(x).unwrap_or(f64::NAN));
    let analytic_mean = pvmeta::phacking::expected_min(&hp, quad)?;

    let mut table = OutputTable::new(&["bin_centre", "mc_density", "analytic_bin_density", "analytic_pdf"]);
    let width = 1.0 / bins as f64;
    for (i, (centre, density)) in emp.histogram(bins).into_iter().enumerate() {
        let lo = i as f64 * width;
        let hi = if i + 1 == bins { 1.0 } else { lo + width };
        table.push(vec![
            centre,
            density,
            (cdf(hi)? - cdf(lo)?) / (hi - lo),
            pdf_min(centre, &hp)?,
        ]);
    }
    table
        .meta("p_M", median)
        .meta("n", n)
        .meta("m", m)
        .meta("mc_draws", draws)
        .meta("mc_seed", seed)
        .meta("mc_stream_count", cfg.stream_count)
        .meta("bins", bins)
        .meta("ks_distance", ks)
        .meta("mc_mean", emp.mean())
        .meta("mc_std_error", emp.std_error())
        .meta("analytic_mean", analytic_mean.value);
    describe_quad(&mut table, quad);
    Ok(table)
}

pub const FIG2_MEDIAN: f64 = 0.15;
pub const FIG2_NS: [u32; 4] = [5, 10, 30, 100];
pub const FIG4_LIMIT_MEDIANS: [f64; 6] = [0.025, 0.05, 0.1, 0.15, 0.25, 0.5];
pub const FIG4_K: [f64; 3] = [10.0, 100.0, 1000.0];
pub const FIG4_N: u32 = 30;

fn fig_grid() -> GridSpec {
    GridSpec {
        start: 0.001,
        stop: 0.999,
        points: 999,
    }
}

/// The four figure tables, keyed by file stem.
pub fn figures(args: &FiguresArgs) -> Result<Vec<(&'static str, OutputTable)>> {
    let quad = quad_config(args.quad_tol)?;
    let regen = format!(
        "pvmeta figures --seed {} --draws {}{}",
        args.seed,
        args.draws,
        tol_flag(args.quad_tol)
    );
    let grid = fig_grid();

    let mut fig1 = hack(&HackArgs {
        pm: 0.15,
        n: SampleSize::Finite(20),
        mmax: 20,
        mc: false,
        draws: args.draws,
        seed: args.seed,
        output: OutputArgs {
            format: args.format,
            out: None,
            quad_tol: args.quad_tol,
        },
    })?;
    let p_s = mean_true_pvalue(&MetaDistParams::finite(0.15, 20)?, &quad)?;
    fig1.meta("p_s", p_s.value);

    let mut columns = vec!["p".to_string()];
    columns.extend(FIG2_NS.iter().map(|n| format!("pdf_n_{n}")));
    columns.push("pdf_n_limit".into());
    let mut fig2 = OutputTable::new(&columns.iter().map(String::as_str).collect::<Vec<_>>());
    let mut fig2_params: Vec<MetaDistParams> = FIG2_NS
        .iter()
        .map(|&n| MetaDistParams::finite(FIG2_MEDIAN, n))
        .collect::<pvmeta::Result<_>>()?;
    fig2_params.push(MetaDistParams::limit(FIG2_MEDIAN)?);
    for p in grid.points() {
        let mut row = vec![p];
        for params in &fig2_params {
            row.push(metadist::pdf(p, params)?);
        }
        fig2.push(row);
    }
    fig2.meta("pm", FIG2_MEDIAN)
        .meta("grid", grid)
        .meta("n_values", "5,10,30,100,limit");
    describe_quad(&mut fig2, &quad);

    let solved = solve_median_for_mean(0.11, SampleSize::Finite(20), &quad)?.get();
    let mut fig3 = mc_table(solved, SampleSize::Finite(20), 1, args.draws, args.seed, 100, &quad)?;
    fig3.meta("target_mean", 0.11).meta("p_M_solved", true);

    let mut family: Vec<(String, MetaDistParams)> = FIG4_LIMIT_MEDIANS
        .iter()
        .map(|&m| Ok((format!("pdf_pm_{m}_n_limit"), MetaDistParams::limit(m)?)))
        .collect::<pvmeta::Result<_>>()?;
    for k in FIG4_K {
        for (sign, label) in [(-1.0, "minus"), (1.0, "plus")] {
            family.push((
                format!("pdf_pm_half_{label}_1_over_{k}_n_{FIG4_N}"),
                MetaDistParams::finite(0.5 + sign / k, FIG4_N)?,
            ));
        }
    }
    let mut columns = vec!["p".to_string()];
    columns.extend(family.iter().map(|(c, _)| c.clone()));
    let mut fig4 = OutputTable::new(&columns.iter().map(String::as_str).collect::<Vec<_>>());
    for p in grid.points() {
        let mut row = vec![p];
        for (_, params) in &family {
            row.push(metadist::pdf(p, params)?);
        }
        fig4.push(row);
    }
    fig4.meta("grid", grid)
        .meta("limit_medians", join(&FIG4_LIMIT_MEDIANS))
        .meta("half_offsets_k", join(&FIG4_K))
        .meta("finite_n", FIG4_N);
    describe_quad(&mut fig4, &quad);

    let mut out = vec![("fig1", fig1), ("fig2", fig2), ("fig3", fig3), ("fig4", fig4)];
    for (name, table) in out.iter_mut() {
        stamp(table, "figures", regen.clone());
        table.meta("figure", *name);
    }
    Ok(out)
}
