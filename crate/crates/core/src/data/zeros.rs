//! Tables of ordinates `t_j` of the nontrivial zeros `1/2 + i t_j`.

use std::fs;
use std::path::{Path, PathBuf};

use rug::Float;

use crate::error::{Error, Result};
use crate::hiprec::{eval_eta_factor, HComplex, HReal, PrecisionContext};

const BUNDLED: &str = include_str!("../../data/zeros_100.txt");

/// Precision at which file ordinates are held.
const TABLE_BITS: u32 = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<HReal>,
    source: String,
    digits: u32,
}

impl ZeroTable {
    pub fn ordinates(&self) -> &[HReal] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// File path or `"bundled"`.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Fewest significant digits among the stored ordinates.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// The first `n` ordinates (or all of them).
    pub fn truncated(&self, n: usize) -> ZeroTable {
        ZeroTable {
            ordinates: self.ordinates[..n.min(self.len())].to_vec(),
            source: self.source.clone(),
            digits: self.digits,
        }
    }
}

/// The first 100 ordinates shipped with the crate.
pub fn bundled_zeros() -> ZeroTable {
    parse_zeros(BUNDLED, Path::new("bundled"), usize::MAX)
        .map(|mut t| {
            t.source = "bundled".into();
            t
        })
        .expect("bundled zero table is well formed")
}

/// Reads up to `max_count` ordinates from a text file: one decimal per
/// line, `#` starts a comment line, blank lines are skipped.
pub fn load_zeros(path: impl AsRef<Path>, max_count: usize) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_zeros(&text, path, max_count)
}

pub fn parse_zeros(text: &str, path: &Path, max_count: usize) -> Result<ZeroTable> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        msg,
    };
    let mut ordinates: Vec<HReal> = Vec::new();
    let mut digits = u32::MAX;
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        seen_data = true;
        if ordinates.len() >= max_count {
            break;
        }
        let value = Float::parse(line)
            .map(|v| Float::with_val(TABLE_BITS, v))
            .map_err(|e| parse_err(i + 1, format!("{line:?}: {e}")))?;
        if !value.is_finite() || value <= 0 {
            return Err(parse_err(i + 1, format!("ordinate must be positive, got {line}")));
        }
        if let Some(prev) = ordinates.last() {
            if value <= *prev {
                return Err(Error::Order {
                    path: PathBuf::from(path),
                    line: i + 1,
                });
            }
        }
        digits = digits.min(significant_digits(line));
        ordinates.push(value);
    }
    if !seen_data {
        return Err(parse_err(0, "no ordinates in file".into()));
    }
    Ok(ZeroTable {
        ordinates,
        source: path.display().to_string(),
        digits: if digits == u32::MAX { 0 } else { digits },
    })
}

fn significant_digits(s: &str) -> u32 {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    digits.trim_start_matches('0').len() as u32
}

/// Where `|(1 - 2^{1-s}) zeta(s)|` is smallest for `s = 1/2 + i t'`,
/// `t' in [t - 0.01, t + 0.01]`.
#[derive(Clone, Debug)]
pub struct ZeroCheck {
    pub argmin: HReal,
    pub min_magnitude: HReal,
}

pub fn verify_zero(t: &HReal, ctx: PrecisionContext) -> Result<ZeroCheck> {
    if *t <= 0 {
        return Err(Error::Domain("zero ordinate must be positive".into()));
    }
    let bits = ctx.bits();
    let half = Float::with_val(bits, 0.5);
    let mag = |tt: &Float| -> Result<Float> {
        let s = HComplex::new(half.clone(), tt.clone());
        Ok(eval_eta_factor(&s, ctx)?.abs())
    };
    const GRID: i32 = 40;
    let width = Float::with_val(bits, 0.02);
    let lo = Float::with_val(bits, t - 0.01);
    let step = Float::with_val(bits, &width / GRID);
    let at = |i: i32| Float::with_val(bits, &lo + Float::with_val(bits, &step * i));
    let mut best = 0;
    let mut best_val = mag(&at(0))?;
    for i in 1..=GRID {
        let v = mag(&at(i))?;
        if v < best_val {
            best = i;
            best_val = v;
        }
    }
    // golden-section refinement inside the bracketing cells
    let mut a = at((best - 1).max(0));
    let mut b = at((best + 1).min(GRID));
    let inv_phi = Float::with_val(bits, (Float::with_val(bits, 5).sqrt() - 1u32) / 2u32);
    let span = |a: &Float, b: &Float| Float::with_val(bits, b - a);
    let mut c = Float::with_val(bits, &b - Float::with_val(bits, span(&a, &b) * &inv_phi));
    let mut d = Float::with_val(bits, &a + Float::with_val(bits, span(&a, &b) * &inv_phi));
    let mut fc = mag(&c)?;
    let mut fd = mag(&d)?;
    let tol = crate::hiprec::pow10(bits, -(ctx.target_digits() as i32));
    let mut iters = 0;
    while span(&a, &b) > tol && iters < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = Float::with_val(bits, &b - Float::with_val(bits, span(&a, &b) * &inv_phi));
            fc = mag(&c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = Float::with_val(bits, &a + Float::with_val(bits, span(&a, &b) * &inv_phi));
            fd = mag(&d)?;
        }
        iters += 1;
    }
    let (mut argmin, mut min_magnitude) = if fc < fd { (c, fc) } else { (d, fd) };
    if best_val < min_magnitude {
        argmin = at(best);
        min_magnitude = best_val;
    }
    Ok(ZeroCheck { argmin, min_magnitude })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(15, 10).unwrap()
    }

    #[test]
    fn bundled_table() {
        let z = bundled_zeros();
        assert_eq!(z.len(), 100);
        assert_eq!(z.source(), "bundled");
        assert!(z.digits() >= 9);
        let first: Vec<f64> = z.ordinates()[..5].iter().map(Float::to_f64).collect();
        let expect = [14.134725, 21.022040, 25.010858, 30.424876, 32.935062];
        for (a, b) in first.iter().zip(expect) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn parse_rules() {
        let p = Path::new("mem");
        let t = parse_zeros("# header\n\n14.1\n21.0\n 25.0 \n", p, 2).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.digits(), 3);
        let t = parse_zeros("14.1\n21.0\n", p, 0).unwrap();
        assert!(t.is_empty());
        assert!(matches!(parse_zeros("", p, 5), Err(Error::Parse { .. })));
        assert!(matches!(parse_zeros("# only\n", p, 5), Err(Error::Parse { .. })));
        match parse_zeros("14.1\nabc\n", p, 5) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_zeros("# c\n21.0\n14.1\n", p, 5) {
            Err(Error::Order { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_zeros("-3\n", p, 5).is_err());
        assert!(load_zeros("/nonexistent/zeros.txt", 5).is_err());
    }

    #[test]
    fn verify_known_and_unknown() {
        let ctx = ctx();
        let bits = ctx.bits();
        let r = verify_zero(&Float::with_val(bits, 14.134725), ctx).unwrap();
        assert!(r.min_magnitude < 1e-5);
        assert!((r.argmin.to_f64() - 14.134_725_141_734_69).abs() < 1e-8);
        let r = verify_zero(&Float::with_val(bits, 32.935062), ctx).unwrap();
        assert!(r.min_magnitude < 1e-5);
        let r = verify_zero(&Float::with_val(bits, 15.0), ctx).unwrap();
        assert!(r.min_magnitude > 0.1);
        assert!(verify_zero(&Float::with_val(bits, -1.0), ctx).is_err());
    }

    #[test]
    fn fourth_ordinate_sign_change() {
        // Hardy's Z(t) = Re(e^{i theta(t)} zeta(1/2 + i t)) changes sign across t_4
        use crate::hiprec::{eval_zeta, GammaEngine};
        let ctx = ctx();
        let bits = ctx.bits();
        let gamma = GammaEngine::for_ctx(ctx);
        let z = |t: f64| {
            let lg = gamma.ln_gamma(&HComplex::from_f64(bits, 0.25, t / 2.0)).unwrap();
            let pi = crate::hiprec::pi(bits);
            let theta = lg.im - Float::with_val(bits, pi.ln() * t / 2.0);
            let rot = HComplex::new(Float::new(bits), theta).exp();
            let zeta = eval_zeta(&HComplex::from_f64(bits, 0.5, t), ctx).unwrap();
            (&rot * &zeta).re.to_f64()
        };
        assert!(z(30.4) * z(30.5) < 0.0);
        assert!(z(21.0) * z(21.05) < 0.0);
        let t4 = bundled_zeros().ordinates()[3].clone();
        assert!(t4 > 30.4 && t4 < 30.5);
        assert!(verify_zero(&t4, ctx).unwrap().min_magnitude < 1e-5);
    }
}
