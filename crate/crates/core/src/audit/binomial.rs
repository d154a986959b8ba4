use crate::error::{Error, Result};
use crate::magnum::Magnitude;

/// Stop once the remaining terms are bounded by this fraction of the sum.
const TAIL_CUTOFF: f64 = 1e-18;

/// `ln C(n, m)` as a sum of logs, `min(m, n - m)` terms.
fn ln_choose(n: u64, m: u64) -> f64 {
    let m = m.min(n - m);
    let mut acc = 0.0;
    let mut c = 0.0; // Kahan compensation
    for i in 1..=m {
        let y = ((n - m + i) as f64 / i as f64).ln() - c;
        let t = acc + y;
        c = (t - acc) - y;
        acc = t;
    }
    acc
}

/// `ln` of `t_0 + t_1 + ...` over `count` terms, given `ln t_0` and the log
/// ratio `ln(t_{i+1} / t_i)` as a function of `i`. The ratios must be
/// non-increasing so the remainder can be bounded by a geometric series.
fn ln_sum(ln_first: f64, count: u64, ln_ratio: impl Fn(u64) -> f64) -> f64 {
    let mut ln_term = ln_first;
    let mut ln_max = ln_term;
    let mut scaled = 1.0; // sum / exp(ln_max)
    for i in 1..count {
        let r = ln_ratio(i - 1);
        ln_term += r;
        if ln_term > ln_max {
            scaled = scaled * (ln_max - ln_term).exp() + 1.0;
            ln_max = ln_term;
        } else {
            scaled += (ln_term - ln_max).exp();
        }
        if r < 0.0 {
            // ratios only shrink from here, so the rest is at most a
            // geometric series
            let q = r.exp();
            let rest = (ln_term - ln_max).exp() * q / (1.0 - q);
            if rest <= TAIL_CUTOFF * scaled {
                break;
            }
        }
    }
    ln_max + scaled.ln()
}

/// `P(X >= m)` for `X ~ Binomial(n, p)`, summed in the log domain so that
/// results far below the `f64` range are exact to about `1e-12` relative.
/// Tails above one half are taken as `1 - P(X < m)`, which keeps them
/// accurate (and monotone) as they approach 1.
pub fn binomial_tail_at_least(n: u64, m: u64, p: &Magnitude<f64>) -> Result<Magnitude<f64>> {
    if m > n {
        return Err(Error::domain(format!("need m <= n, got m={m}, n={n}")));
    }
    if p.is_zero() || *p >= Magnitude::one() {
        return Err(Error::domain(format!("need 0 < p < 1, got {p}")));
    }
    if m == 0 {
        return Ok(Magnitude::one());
    }
    let ln_p = p.log10_value() * std::f64::consts::LN_10;
    // p below the f64 range contributes nothing to ln(1 - p)
    let ln_q = (-p.to_real()).ln_1p();
    let odds = ln_p - ln_q;
    let ln_term = |j: u64| ln_choose(n, j) + j as f64 * ln_p + (n - j) as f64 * ln_q;

    let upper = ln_sum(ln_term(m), n - m + 1, |i| {
        let j = m + i;
        ((n - j) as f64 / (j + 1) as f64).ln() + odds
    });
    let ln_tail = if upper < -std::f64::consts::LN_2 {
        upper
    } else {
        let lower = ln_sum(ln_term(m - 1), m, |i| {
            let j = m - 1 - i;
            (j as f64 / (n - j + 1) as f64).ln() - odds
        });
        (-lower.exp()).ln_1p()
    };
    Magnitude::from_log10((ln_tail / std::f64::consts::LN_10).min(0.0))
}
