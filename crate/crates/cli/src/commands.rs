use anyhow::Context;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde_json::{json, Value};

use pochzeta_core::coefficients::{
    compute_b, compute_d, compute_dhat_binomial, compute_dhat_primes, compute_dhat_zeros_beta,
    compute_dhathat, compute_dhathat_binomial, compute_maslanka_A, compute_s_series,
};
use pochzeta_core::critical::{prime_contribution, psi1, psi_infbeta, summarize_values, sweep_critical};
use pochzeta_core::data::{is_prime, sieve_primes};
use pochzeta_core::expansions::{eval_critical_line_series, ExpansionPlan};
use pochzeta_core::hiprec::euler_gamma;
use pochzeta_core::{
    BetaMode, CoefficientKind, CoefficientSeries, CriticalConfig, ExactComplex, ExpansionParams,
    HComplex, Kernel, PrecisionContext, PrimeLimit, Route, SeriesTarget, SweepSummary,
};

use crate::config::{
    ratio, usage, AxisArg, Cli, CoeffsArgs, Command, Common, CriticalArgs, Defaults, Fig6Args,
    Fig7Args, KindArg, RouteArg, RunConfig, SeriesArgs, TargetArg,
};
use crate::output::{emit, Cell, Table};

/// Fewest ordinates for which the infinite-beta residual drops below 1e-3.
const GAMMA_LIMIT_ZEROS: usize = 3600;

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let (table, cfg) = match cli.command {
        Command::Fig1(c) => fig1_fig2(&c, ratio(0, 1), ratio(18, 1), 181)?,
        Command::Fig2(c) => fig1_fig2(&c, ratio(18, 1), ratio(40, 1), 221)?,
        Command::Fig3(c) => fig3(&c)?,
        Command::Fig4(a) => fig4(&a)?,
        Command::Fig5(a) => fig5(&a)?,
        Command::Fig6(a) => fig6(&a)?,
        Command::Fig7(a) => fig7(&a)?,
        Command::Coeffs(a) => coeffs(&a)?,
        Command::Series(a) => series(&a)?,
        Command::Sweep(c) => sweep(&c)?,
    };
    emit(&table, cfg.format, cfg.out.as_deref())
}

fn reject_params(c: &Common, what: &str) -> anyhow::Result<()> {
    if c.alpha.is_some() || c.beta.is_some() || c.sigma.is_some() {
        return Err(usage(format!("{what}; use `series` for other parameters")));
    }
    Ok(())
}

fn floats(grid: &[Rational], bits: u32) -> Vec<Float> {
    grid.iter().map(|r| Float::with_val(bits, r)).collect()
}

fn fig1_fig2(c: &Common, t_min: Rational, t_max: Rational, points: usize) -> anyhow::Result<(Table, RunConfig)> {
    reject_params(c, "the critical-line figures fix alpha = 1/2, beta = i")?;
    let cfg = RunConfig::resolve(c, Defaults::new(ExpansionParams::critical_line(), t_min, t_max, points))?;
    if cfg.grid.iter().any(|t| *t < 0 || *t > 40) {
        return Err(usage("t must lie in [0, 40]"));
    }
    let (k_low, k_high) = match c.order {
        Some(k) => (k, k),
        None => (20, 50),
    };
    let ctx = cfg.ctx_for_order(k_low.max(k_high));
    let evals = eval_critical_line_series(k_low, k_high, &floats(&cfg.grid, ctx.bits()), ctx)?;
    let d = cfg.digits;
    let mut table = Table::new(&["t", "series_re", "series_im", "direct_re", "direct_im"]);
    for (t, e) in cfg.grid.iter().zip(&evals) {
        let direct = e.direct_value.as_ref().context("direct value unavailable")?;
        table.push(vec![
            Cell::num(&Float::with_val(ctx.bits(), t), d),
            Cell::num(&e.partial_sum.re, d),
            Cell::num(&e.partial_sum.im, d),
            Cell::num(&direct.re, d),
            Cell::num(&direct.im, d),
        ]);
    }
    Ok((table, cfg))
}

fn fig3(c: &Common) -> anyhow::Result<(Table, RunConfig)> {
    let params = ExpansionParams::real(ratio(2, 1), ratio(2, 1), ratio(1, 2))?;
    let mut defaults = Defaults::new(params, ratio(-1, 1), ratio(1, 1), 200);
    defaults.half_open = true;
    let cfg = RunConfig::resolve(c, defaults)?;
    let ctx = cfg.ctx_for_order(cfg.order);
    let plan = ExpansionPlan::new(SeriesTarget::LogEta, &cfg.params, cfg.order, ctx)?;
    let bits = ctx.bits();
    let evals = cfg
        .grid
        .par_iter()
        .map(|sigma| plan.evaluate(&HComplex::from_real(Float::with_val(bits, sigma)), cfg.order))
        .collect::<pochzeta_core::Result<Vec<_>>>()?;
    let d = cfg.digits;
    let mut table = Table::new(&["sigma", "series", "direct", "abs_error"]);
    for (sigma, e) in cfg.grid.iter().zip(&evals) {
        let (direct, err) = match (&e.direct_value, e.abs_error()) {
            (Some(v), Some(err)) => (Cell::num(&v.re, d), Cell::num(&err, d)),
            _ => (Cell::Missing, Cell::Missing),
        };
        table.push(vec![
            Cell::num(&Float::with_val(bits, sigma), d),
            Cell::num(&e.partial_sum.re, d),
            direct,
            err,
        ]);
    }
    Ok((table, cfg))
}

fn critical_defaults() -> Defaults {
    let mut d = Defaults::new(ExpansionParams::critical_default(), ratio(5, 2), ratio(30, 1), 200);
    d.n_zeros = Some(10);
    d
}

/// Kernels of a psi1/psi2 run: `base_paper` selects the large-k formulas,
/// which `--approx-paper` and `--asymptotic` can also switch on one by one.
fn critical_config(cfg: &RunConfig, base_paper: bool) -> CriticalConfig {
    let mut cc = if base_paper {
        CriticalConfig::paper()
    } else {
        CriticalConfig::exact()
    };
    cc.n_zeros = cfg.n_zeros;
    cc.n_trivial = cfg.n_trivial;
    cc.q_max = cfg.q_max;
    if cfg.asymptotic {
        cc.psi1_kernel = Kernel::Asymptotic;
        cc.psi2.first_term = Kernel::Asymptotic;
    }
    if cfg.approx_paper {
        cc.psi2.approx_paper = true;
    }
    cc
}

fn kernel_name(k: Kernel) -> &'static str {
    match k {
        Kernel::ExactBeta => "beta",
        Kernel::Asymptotic => "asymptotic",
    }
}

fn critical_summary(cfg: &RunConfig, cc: &CriticalConfig, s: &SweepSummary, with_primes: bool) -> Value {
    let mut v = json!({
        "alpha": cfg.params.alpha.to_string(),
        "beta": cfg.params.beta.to_string(),
        "sigma": cfg.params.sigma.to_string(),
        "n_zeros": cc.n_zeros,
        "n_trivial": cc.n_trivial,
        "psi1_kernel": kernel_name(cc.psi1_kernel),
        "digits": cfg.digits,
        "points": s.points,
        "mean_psi1": s.mean_psi1,
        "sign_changes": s.sign_changes,
        "oscillations": s.oscillations,
        "amplitude": s.amplitude,
    });
    if with_primes {
        v["n_primes"] = json!(cfg.n_primes);
        v["q_max"] = json!(cc.q_max);
        v["psi2_first_term"] = json!(kernel_name(cc.psi2.first_term));
        v["approx_paper"] = json!(cc.psi2.approx_paper);
        v["max_diff"] = json!(s.max_diff);
    }
    v
}

fn require_sweep_params(cfg: &RunConfig) -> anyhow::Result<()> {
    cfg.params
        .require_real_above_one()
        .map_err(|e| usage(format!("critical sweeps need real alpha > 1 and beta > 0: {e}")))?;
    if cfg.grid.len() < 2 {
        return Err(usage("a sweep needs at least 2 points"));
    }
    Ok(())
}

fn fig4(a: &CriticalArgs) -> anyhow::Result<(Table, RunConfig)> {
    let cfg = RunConfig::resolve(&a.common, critical_defaults())?;
    require_sweep_params(&cfg)?;
    let cc = critical_config(&cfg, !a.exact);
    let ctx = cfg.ctx();
    let bits = ctx.bits();
    let xs = floats(&cfg.grid, bits);
    let psi = xs
        .par_iter()
        .map(|x| psi1(x, &cfg.params, &cfg.zeros, cc.n_zeros, cc.n_trivial, cc.psi1_kernel, ctx))
        .collect::<pochzeta_core::Result<Vec<_>>>()?;
    let d = cfg.digits;
    let mut table = Table::new(&["x", "k", "psi1"]);
    for (x, p) in xs.iter().zip(&psi) {
        table.push(vec![
            Cell::num(x, d),
            Cell::num(&Float::with_val(bits, x.exp_ref()), d),
            Cell::num(p, d),
        ]);
    }
    let values: Vec<f64> = psi.iter().map(Float::to_f64).collect();
    let summary = summarize_values(&values, &[]);
    table.summary = Some(critical_summary(&cfg, &cc, &summary, false));
    Ok((table, cfg))
}

fn critical_sweep(cfg: &RunConfig, cc: &CriticalConfig) -> anyhow::Result<Table> {
    require_sweep_params(cfg)?;
    let primes = sieve_primes(PrimeLimit::FirstN(cfg.n_primes))?;
    let grid = cfg.grid_f64();
    let (samples, summary) = sweep_critical(
        grid[0],
        grid[grid.len() - 1],
        grid.len(),
        &cfg.params,
        &cfg.zeros,
        &primes,
        cc,
        cfg.ctx(),
    )?;
    let d = cfg.digits;
    let mut table = Table::new(&["x", "k", "psi1", "psi2", "diff"]);
    for s in &samples {
        table.push(vec![
            Cell::num(&s.x, d),
            Cell::num(&s.k, d),
            Cell::num(&s.psi1, d),
            Cell::num(&s.psi2, d),
            Cell::num(&s.diff, d),
        ]);
    }
    table.summary = Some(critical_summary(cfg, cc, &summary, true));
    Ok(table)
}

fn fig5(a: &CriticalArgs) -> anyhow::Result<(Table, RunConfig)> {
    let cfg = RunConfig::resolve(&a.common, critical_defaults())?;
    let cc = critical_config(&cfg, !a.exact);
    Ok((critical_sweep(&cfg, &cc)?, cfg))
}

fn sweep(c: &Common) -> anyhow::Result<(Table, RunConfig)> {
    let cfg = RunConfig::resolve(c, critical_defaults())?;
    let cc = critical_config(&cfg, false);
    Ok((critical_sweep(&cfg, &cc)?, cfg))
}

fn fig6(a: &Fig6Args) -> anyhow::Result<(Table, RunConfig)> {
    let mut defaults = critical_defaults();
    defaults.q_max = 100;
    let cfg = RunConfig::resolve(&a.common, defaults)?;
    require_sweep_params(&cfg)?;
    if a.primes.is_empty() {
        return Err(usage("--primes is empty"));
    }
    if let Some(p) = a.primes.iter().find(|&&p| !is_prime(p)) {
        return Err(usage(format!("{p} is not prime")));
    }
    let approx = !a.exact || cfg.approx_paper;
    let ctx = cfg.ctx();
    let xs = floats(&cfg.grid, ctx.bits());
    let curves = a
        .primes
        .iter()
        .map(|&p| prime_contribution(p, &xs, &cfg.params, cfg.q_max, approx, ctx))
        .collect::<pochzeta_core::Result<Vec<_>>>()?;
    let names: Vec<String> = a.primes.iter().map(|p| format!("p{p}")).collect();
    let mut columns = vec!["x"];
    columns.extend(names.iter().map(String::as_str));
    let d = cfg.digits;
    let mut table = Table::new(&columns);
    for (i, x) in xs.iter().enumerate() {
        let mut row = vec![Cell::num(x, d)];
        row.extend(curves.iter().map(|c| Cell::num(&c[i].1, d)));
        table.push(row);
    }
    Ok((table, cfg))
}

fn fig7(a: &Fig7Args) -> anyhow::Result<(Table, RunConfig)> {
    if !a.log_k.is_finite() || a.log_k <= 0.0 {
        return Err(usage("--log-k must be positive"));
    }
    let params = ExpansionParams::real(ratio(1, 1), ratio(1, 1), ratio(1, 2))?;
    let mut defaults = Defaults::new(params, ratio(1, 1), ratio(1_000_000, 1), 61);
    defaults.n_trivial = 200_000;
    let cfg = RunConfig::resolve(&a.common, defaults)?;
    if cfg.params.beta != ExactComplex::real(1) {
        return Err(usage("fig7 sweeps beta through --x-min/--x-max; --beta is not used"));
    }
    if cfg.grid[0] <= 0 {
        return Err(usage("beta must be positive"));
    }
    if cfg.n_zeros < GAMMA_LIMIT_ZEROS {
        eprintln!(
            "warning: {} zeros; the residual is dominated by the missing zeros (at least {GAMMA_LIMIT_ZEROS} are needed for |psi - gamma| < 1e-3)",
            cfg.n_zeros
        );
    }
    // log-spaced beta from x_min to x_max
    let (lo, hi) = (cfg.grid[0].to_f64().log10(), cfg.grid[cfg.grid.len() - 1].to_f64().log10());
    let n = cfg.grid.len();
    let betas: Vec<Option<Rational>> = (0..n)
        .map(|i| {
            let e = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
            Some(Rational::from_f64(10f64.powf(e)).expect("finite"))
        })
        .chain(std::iter::once(None))
        .collect();
    let ctx = cfg.ctx();
    let bits = ctx.bits();
    let k = Float::with_val(bits, a.log_k).exp();
    let alpha = cfg.params.alpha.clone();
    let sigma = cfg.params.sigma.clone();
    let psi = betas
        .par_iter()
        .map(|b| {
            let (params, mode) = match b {
                Some(b) => (
                    ExpansionParams::new(alpha.clone(), ExactComplex::real(b.clone()), sigma.clone())?,
                    BetaMode::Finite,
                ),
                None => (cfg.params.clone(), BetaMode::Infinite),
            };
            psi_infbeta(&k, &params, &cfg.zeros, cfg.n_zeros, cfg.n_trivial, mode, ctx)
        })
        .collect::<pochzeta_core::Result<Vec<_>>>()?;
    let gamma = euler_gamma(bits);
    let d = cfg.digits;
    let mut table = Table::new(&["beta", "psi", "psi_minus_gamma"]);
    for (b, p) in betas.iter().zip(&psi) {
        let beta = match b {
            Some(b) => Cell::num(&Float::with_val(bits, b), d),
            None => Cell::Text("inf".into()),
        };
        table.push(vec![beta, Cell::num(p, d), Cell::num(&Float::with_val(bits, p - &gamma), d)]);
    }
    Ok((table, cfg))
}

fn kind_of(k: KindArg) -> CoefficientKind {
    match k {
        KindArg::B => CoefficientKind::B,
        KindArg::A => CoefficientKind::A,
        KindArg::D => CoefficientKind::D,
        KindArg::Dhat => CoefficientKind::DHat,
        KindArg::Dhathat => CoefficientKind::DHatHat,
        KindArg::S => CoefficientKind::S,
    }
}

fn coeffs(a: &CoeffsArgs) -> anyhow::Result<(Table, RunConfig)> {
    let mut defaults = Defaults::new(ExpansionParams::riesz(), ratio(0, 1), ratio(1, 1), 1);
    defaults.order = 50;
    let cfg = RunConfig::resolve(&a.common, defaults)?;
    let route = a.route.unwrap_or(if a.kind == KindArg::S {
        RouteArg::ClosedForm
    } else {
        RouteArg::Binomial
    });
    let kernel = if cfg.asymptotic { Kernel::Asymptotic } else { Kernel::ExactBeta };
    let k_max = cfg.order;
    let p = &cfg.params;
    let (ctx, binomial) = (cfg.ctx_for_order(k_max), route == RouteArg::Binomial);
    let ctx = if binomial { ctx } else { cfg.ctx() };
    if matches!(a.kind, KindArg::Dhat | KindArg::Dhathat | KindArg::S) {
        p.require_real_above_one()
            .map_err(|e| usage(format!("{:?} needs real alpha > 1 and beta > 0: {e}", a.kind)))?;
    }
    let zeros = cfg.zeros.truncated(cfg.n_zeros);
    let per_k = |f: &(dyn Fn(u64) -> pochzeta_core::Result<HComplex> + Sync), route: Route| {
        let values = (1..=k_max)
            .into_par_iter()
            .map(f)
            .collect::<pochzeta_core::Result<Vec<_>>>()?;
        anyhow::Ok((route, 1u64, values))
    };
    let (route_used, first_k, values) = match (a.kind, route) {
        (KindArg::B, RouteArg::Binomial) => from_series(compute_b(p, k_max, ctx)?),
        (KindArg::A, RouteArg::Binomial) => from_series(compute_maslanka_A(k_max, ctx)?),
        (KindArg::D, RouteArg::Binomial) => from_series(compute_d(p, k_max, ctx)?),
        (KindArg::Dhat, RouteArg::Binomial) => from_series(compute_dhat_binomial(p, k_max, ctx)?),
        (KindArg::Dhathat, RouteArg::Binomial) => from_series(compute_dhathat_binomial(p, k_max, ctx)?),
        (KindArg::S, RouteArg::ClosedForm) => from_series(compute_s_series(p, k_max, ctx)?),
        (KindArg::Dhat, RouteArg::Zeros) => per_k(
            &|k| compute_dhat_zeros_beta(p, k, &zeros, cfg.n_trivial, kernel, ctx),
            Route::ZerosBeta,
        )?,
        (KindArg::Dhathat, RouteArg::Zeros) => per_k(
            &|k| compute_dhathat(p, k, &zeros, cfg.n_trivial, kernel, ctx),
            Route::ZerosBeta,
        )?,
        (KindArg::Dhat, RouteArg::Primes) => {
            let primes = sieve_primes(PrimeLimit::FirstN(cfg.n_primes))?;
            let opts = pochzeta_core::PrimeRouteOptions {
                approx_paper: cfg.approx_paper,
                first_term: kernel,
            };
            per_k(
                &|k| {
                    compute_dhat_primes(p, k, &primes, cfg.q_max, opts, ctx).map(HComplex::from_real)
                },
                Route::Primes,
            )?
        }
        (kind, route) => {
            return Err(usage(format!("no {route:?} route for {kind:?}")));
        }
    };
    let d = cfg.digits;
    let mut table = Table::new(&["k", "re", "im", "kind", "alpha", "beta", "route", "digits"]);
    let (alpha, beta) = if a.kind == KindArg::A {
        let r = ExpansionParams::riesz();
        (r.alpha.to_string(), r.beta.to_string())
    } else {
        (p.alpha.to_string(), p.beta.to_string())
    };
    for (i, v) in values.iter().enumerate() {
        table.push(vec![
            Cell::Int(first_k + i as u64),
            Cell::num(&v.re, d),
            Cell::num(&v.im, d),
            Cell::Text(kind_of(a.kind).as_str().into()),
            Cell::Text(alpha.clone()),
            Cell::Text(beta.clone()),
            Cell::Text(route_used.as_str().into()),
            Cell::Int(u64::from(d)),
        ]);
    }
    Ok((table, cfg))
}

fn from_series(s: CoefficientSeries) -> (Route, u64, Vec<HComplex>) {
    (s.route, 0, s.values)
}

fn target_of(t: TargetArg) -> SeriesTarget {
    match t {
        TargetArg::EtaFactor => SeriesTarget::EtaFactor,
        TargetArg::Maslanka => SeriesTarget::Maslanka,
        TargetArg::LogEta => SeriesTarget::LogEta,
        TargetArg::LogDeriv => SeriesTarget::LogDeriv,
        TargetArg::FFunction => SeriesTarget::FFunction,
        TargetArg::InvSMinus1 => SeriesTarget::InvSMinus1,
    }
}

fn series(a: &SeriesArgs) -> anyhow::Result<(Table, RunConfig)> {
    let (lo, hi, n) = match a.axis {
        AxisArg::T => (ratio(0, 1), ratio(30, 1), 61),
        AxisArg::Sigma => (ratio(1, 10), ratio(9, 10), 9),
    };
    let cfg = RunConfig::resolve(&a.common, Defaults::new(ExpansionParams::riesz(), lo, hi, n))?;
    let target = target_of(a.target);
    let ctx: PrecisionContext = cfg.ctx_for_order(cfg.order);
    let plan = ExpansionPlan::new(target, &cfg.params, cfg.order, ctx)?;
    let bits = ctx.bits();
    let fixed = match a.axis {
        AxisArg::T => Float::with_val(bits, a.common.sigma.clone().unwrap_or(ratio(1, 2))),
        AxisArg::Sigma => Float::with_val(bits, a.t.clone().unwrap_or(ratio(0, 1))),
    };
    let points: Vec<HComplex> = floats(&cfg.grid, bits)
        .into_iter()
        .map(|x| match a.axis {
            AxisArg::T => HComplex::new(fixed.clone(), x),
            AxisArg::Sigma => HComplex::new(x, fixed.clone()),
        })
        .collect();
    let evals = points
        .par_iter()
        .map(|s| plan.evaluate(s, cfg.order))
        .collect::<pochzeta_core::Result<Vec<_>>>()?;
    let label = match a.axis {
        AxisArg::T => "t",
        AxisArg::Sigma => "sigma",
    };
    let d = cfg.digits;
    let mut table = Table::new(&[label, "K", "sum_re", "sum_im", "direct_re", "direct_im", "abs_error"]);
    for e in &evals {
        let coord = match a.axis {
            AxisArg::T => &e.s.im,
            AxisArg::Sigma => &e.s.re,
        };
        let (dre, dim) = match &e.direct_value {
            Some(v) => (Cell::num(&v.re, d), Cell::num(&v.im, d)),
            None => (Cell::Missing, Cell::Missing),
        };
        let err = e.abs_error().map_or(Cell::Missing, |x| Cell::num(&x, d));
        table.push(vec![
            Cell::num(coord, d),
            Cell::Int(e.order),
            Cell::num(&e.partial_sum.re, d),
            Cell::num(&e.partial_sum.im, d),
            dre,
            dim,
            err,
        ]);
    }
    Ok((table, cfg))
}
