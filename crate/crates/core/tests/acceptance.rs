//! Acceptance gate: every criterion runs at its stated tolerance and prints
//! one PASS/FAIL line. The process exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rug::{Float, Rational};

use pochzeta_core::coefficients::{
    compute_b, compute_d, compute_dhat_binomial, compute_dhat_primes, compute_dhat_zeros_beta,
    compute_dhathat_binomial, compute_maslanka_A, compute_s, compute_s_series, CoefficientSeries,
};
use pochzeta_core::critical::{psi_infbeta, sweep_critical, trivial_zero_sum};
use pochzeta_core::data::{bundled_zeros, load_zeros, sieve_primes, verify_zero};
use pochzeta_core::expansions::{eval_critical_line_series, inverse_series_exact, ExpansionPlan};
use pochzeta_core::hiprec::{euler_gamma, prime_series_tail_bound, required_guard};
use pochzeta_core::{
    BetaMode, CriticalConfig, CriticalSample, Error, ExpansionParams, HComplex, Kernel,
    PrecisionContext, PrimeLimit, PrimeRouteOptions, SeriesTarget, SweepSummary,
};

/// Name, check, runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn f(bits: u32, x: f64) -> Float {
    Float::with_val(bits, x)
}

fn real_params(a: (i64, i64), b: (i64, i64)) -> ExpansionParams {
    ExpansionParams::real(Rational::from(a), Rational::from(b), Rational::from((1, 2))).unwrap()
}

fn critical_line_representation() -> Outcome {
    let ctx = PrecisionContext::new(30, required_guard(50)).unwrap();
    let bits = ctx.bits();
    let grid: Vec<Float> = (0..=200).map(|i| f(bits, 30.0 * i as f64 / 200.0)).collect();
    let evals = eval_critical_line_series(20, 50, &grid, ctx).unwrap();
    let errors: Vec<(f64, f64)> = evals
        .iter()
        .map(|e| (e.s.im.to_f64(), e.abs_error().unwrap().to_f64()))
        .collect();
    let (t_worst, worst) = errors.iter().copied().fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let beyond = errors
        .iter()
        .filter(|(t, _)| *t >= 2.0)
        .map(|e| e.1)
        .fold(0.0, f64::max);
    let zeros_ok: Vec<f64> = [14.1347, 21.0220, 25.0109]
        .iter()
        .map(|&t| verify_zero(&f(bits, t), ctx).unwrap().min_magnitude.to_f64())
        .collect();
    let dips = zeros_ok.iter().all(|&m| m < 1e-3);
    outcome(
        worst < 0.05 && dips,
        format!(
            "max |series - direct| = {worst:.3e} at t = {t_worst} (< 5e-2; {beyond:.2e} on t >= 2); min |direct| near t1..t3 = {} (< 1e-3)",
            list(&zeros_ok)
        ),
    )
}

fn maslanka_limit() -> Outcome {
    let ctx = PrecisionContext::for_order(30, 60).unwrap();
    let bits = ctx.bits();
    let eta = ExpansionPlan::new(SeriesTarget::EtaFactor, &ExpansionParams::riesz(), 60, ctx).unwrap();
    let masl = ExpansionPlan::new(SeriesTarget::Maslanka, &ExpansionParams::riesz(), 60, ctx).unwrap();
    let mut eta_errs = Vec::new();
    let mut masl_errs = Vec::new();
    for sigma in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let s = HComplex::from_f64(bits, sigma, 0.0);
        eta_errs.push(eta.evaluate(&s, 60).unwrap().abs_error().unwrap().to_f64());
        masl_errs.push(masl.evaluate(&s, 60).unwrap().abs_error().unwrap().to_f64());
    }
    let ok = eta_errs.iter().chain(&masl_errs).all(|&e| e < 1e-4);
    outcome(
        ok,
        format!(
            "errors at sigma = 0.1..0.9 (< 1e-4): eta-factor series {}, (s-1)zeta series {}",
            list(&eta_errs),
            list(&masl_errs)
        ),
    )
}

fn log_eta_series() -> Outcome {
    let ctx = PrecisionContext::for_order(30, 40).unwrap();
    let bits = ctx.bits();
    let plan = ExpansionPlan::new(SeriesTarget::LogEta, &ExpansionParams::riesz(), 40, ctx).unwrap();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let sigma = 0.99 * i as f64 / 99.0;
        let e = plan.evaluate(&HComplex::from_f64(bits, sigma, 0.0), 40).unwrap();
        worst = worst.max(e.abs_error().unwrap().to_f64());
    }
    outcome(worst < 1e-2, format!("max error over 100 points = {worst:.3e} (< 1e-2)"))
}

fn central_sweep() -> &'static (Vec<CriticalSample>, SweepSummary, Duration) {
    static SWEEP: OnceLock<(Vec<CriticalSample>, SweepSummary, Duration)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let ctx = PrecisionContext::new(30, 10).unwrap();
        let primes = sieve_primes(PrimeLimit::FirstN(5000)).unwrap();
        let (samples, summary) = sweep_critical(
            2.5,
            30.0,
            200,
            &ExpansionParams::critical_default(),
            &bundled_zeros(),
            &primes,
            &CriticalConfig::paper(),
            ctx,
        )
        .unwrap();
        (samples, summary, start.elapsed())
    })
}

fn criterion_4a() -> Outcome {
    let (_, s, _) = central_sweep();
    outcome(s.max_diff < 0.002, format!("max |psi1 - psi2| = {:.3e} (< 2e-3)", s.max_diff))
}

fn criterion_4b() -> Outcome {
    let (_, s, _) = central_sweep();
    outcome(
        (11..=13).contains(&s.oscillations),
        format!(
            "oscillations = {} ({} sign changes about the mean {:.2e}); expected 12 +- 1",
            s.oscillations, s.sign_changes, s.mean_psi1
        ),
    )
}

fn criterion_4c() -> Outcome {
    let (_, s, elapsed) = central_sweep();
    outcome(
        (0.005..=0.02).contains(&s.amplitude) && *elapsed < Duration::from_secs(600),
        format!("amplitude = {:.3e} (in [5e-3, 2e-2]); sweep took {:.1?} (< 10 min)", s.amplitude, elapsed),
    )
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gamma_limit() -> Outcome {
    let ctx = PrecisionContext::new(20, 10).unwrap();
    let bits = ctx.bits();
    let params = real_params((1, 1), (1_000_000, 1));
    let g = euler_gamma(bits).to_f64();
    let one = f(bits, 1.0);
    let zeros = match load_zeros(fixture("zeros_3600.txt"), 3600) {
        Ok(z) => z,
        Err(e) => return outcome(false, format!("cannot load 3600-zero table: {e}")),
    };
    if zeros.len() < 3600 {
        return outcome(false, format!("table holds only {} zeros", zeros.len()));
    }
    let full = psi_infbeta(&one, &params, &zeros, 3600, 200_000, BetaMode::Infinite, ctx).unwrap();
    let r3600 = (full.to_f64() - g).abs();

    let bundled = bundled_zeros();
    let mut residuals = Vec::new();
    for n in (20..=100).step_by(20) {
        let v = psi_infbeta(&one, &params, &bundled, n, 200_000, BetaMode::Infinite, ctx).unwrap();
        residuals.push((v.to_f64() - g).abs());
    }
    let monotone = residuals.windows(2).all(|w| w[1] < w[0]);
    outcome(
        r3600 < 1e-3 && monotone,
        format!("|psi - gamma| with 3600 zeros = {r3600:.3e} (< 1e-3); bundled residuals by 20s = {} (decreasing)", list(&residuals)),
    )
}

fn route_equivalence() -> Outcome {
    let params = ExpansionParams::critical_default();
    let ks = [1u64, 2, 5, 10, 100, 1000];
    let ctx = PrecisionContext::for_order(30, 1000).unwrap();
    let binomial = compute_dhat_binomial(&params, 1000, ctx).unwrap();
    let primes = sieve_primes(PrimeLimit::FirstN(5000)).unwrap();
    let tail = prime_series_tail_bound(4.5, primes.largest().unwrap());
    let small = PrecisionContext::new(30, 10).unwrap();
    let mut worst_ratio = 0.0f64;
    for &k in &ks {
        let p = compute_dhat_primes(&params, k, &primes, 50, PrimeRouteOptions::default(), small).unwrap();
        let b = &binomial.values[k as usize].re;
        let d = Float::with_val(small.bits(), &p - b).abs().to_f64();
        worst_ratio = worst_ratio.max(d / tail);
    }
    let zeros = bundled_zeros().truncated(50);
    let mut worst_zero = 0.0f64;
    for k in [100u64, 1000] {
        let z = compute_dhat_zeros_beta(&params, k, &zeros, 50, Kernel::ExactBeta, small).unwrap();
        let b = HComplex::from_real(binomial.values[k as usize].re.clone());
        worst_zero = worst_zero.max((&z - &b).abs().to_f64());
    }
    outcome(
        worst_ratio < 10.0 && worst_zero < 1e-3,
        format!(
            "binomial vs primes: max diff / tail bound ({tail:.2e}) = {worst_ratio:.3}; binomial vs zeros at k = 100, 1000: {worst_zero:.3e} (< 1e-3)"
        ),
    )
}

fn exact_closed_forms() -> Outcome {
    let ctx = PrecisionContext::new(30, 10).unwrap();
    let p = real_params((2, 1), (1, 1));
    let series = compute_s_series(&p, 100, ctx).unwrap();
    let s_exact = (0..=100u64).all(|k| {
        let expect = Float::with_val(ctx.bits(), Rational::from((1, k + 1)));
        series.values[k as usize].re == expect && compute_s(&p, k, ctx).unwrap() == expect
    });
    let inv_exact = (2..=10u64).all(|m| {
        let m = Rational::from(m);
        let full = inverse_series_exact(&p, 30, &m).unwrap();
        let cut = inverse_series_exact(&p, m.to_f64() as u64 - 1, &m).unwrap();
        full == cut && full == Rational::from(1) / (m - 1u32)
    });
    let bits = ctx.bits();
    let limit = 1.0 - std::f64::consts::LN_2;
    let errs: Vec<f64> = [1000u64, 2000, 4000]
        .iter()
        .map(|&n| (limit - trivial_zero_sum(&f(bits, 1.0), n, bits).to_f64()).abs())
        .collect();
    let halving = errs.windows(2).all(|w| (w[0] / w[1] - 2.0).abs() < 0.05);
    outcome(
        s_exact && inv_exact && halving,
        format!("s_k = 1/(k+1) exact: {s_exact}; 1/(s-1) series exact at m = 2..10: {inv_exact}; trivial-sum errors {} halve: {halving}", list(&errs)),
    )
}

fn max_change(a: &CoefficientSeries, b: &CoefficientSeries) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs().to_f64())
        .fold(0.0, f64::max)
}

fn precision_stability() -> Outcome {
    let ctx = PrecisionContext::for_order(20, 50).unwrap();
    let dbl = ctx.doubled_guard();
    let riesz = ExpansionParams::riesz();
    let crit = ExpansionParams::critical_line();
    let dflt = ExpansionParams::critical_default();
    type Family<'a> = (&'a str, Box<dyn Fn(PrecisionContext) -> CoefficientSeries + 'a>);
    let families: Vec<Family> = vec![
        ("b(2,2)", Box::new(|c| compute_b(&riesz, 50, c).unwrap())),
        ("b(1/2,i)", Box::new(|c| compute_b(&crit, 50, c).unwrap())),
        ("A", Box::new(|c| compute_maslanka_A(50, c).unwrap())),
        ("d", Box::new(|c| compute_d(&riesz, 50, c).unwrap())),
        ("dhat", Box::new(|c| compute_dhat_binomial(&dflt, 50, c).unwrap())),
        ("dhathat", Box::new(|c| compute_dhathat_binomial(&dflt, 50, c).unwrap())),
        ("s", Box::new(|c| compute_s_series(&dflt, 50, c).unwrap())),
    ];
    let tol = 10f64.powi(-(ctx.target_digits() as i32));
    let mut worst = 0.0f64;
    let mut worst_name = "";
    for (name, make) in &families {
        let d = max_change(&make(ctx), &make(dbl));
        if d >= worst {
            worst = d;
            worst_name = name;
        }
    }
    let weak = PrecisionContext::new(20, 5).unwrap();
    let raised = matches!(compute_b(&riesz, 60, weak), Err(Error::Precision { .. }));
    outcome(
        worst < tol && raised,
        format!("largest change under doubled guard = {worst:.2e} ({worst_name}, < {tol:.0e}); k = 60 with guard 5 raises PrecisionError: {raised}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1  critical-line series", critical_line_representation, 300),
        ("2  Maslanka limit", maslanka_limit, 120),
        ("3  log eta-factor series", log_eta_series, 120),
        ("4a psi1 vs psi2", criterion_4a, 600),
        ("4b oscillation count", criterion_4b, 600),
        ("4c oscillation amplitude", criterion_4c, 600),
        ("5  gamma limit", gamma_limit, 60),
        ("6  route equivalence", route_equivalence, 180),
        ("7  exact closed forms", exact_closed_forms, 30),
        ("8  precision stability", precision_stability, 60),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {name:<26} {} [{:.1?}, budget {budget}s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
