use std::io::{self, Write};

use super::{log2_gamma, BoundInputs};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "log2_q,neg_log2_gamma,valid";

#[derive(Clone, Debug, PartialEq)]
pub struct GammaRow {
    pub q: f64,
    pub log2_q: f64,
    /// `-log2 Γ(q)`; `None` when the row is invalid.
    pub neg_log2_gamma: Option<f64>,
    pub valid: bool,
}

/// Evaluates `-log2 Γ(q)` for each `q` with the other inputs taken from
/// `template`. A row is valid when `q > 0`, `q floor(l/m) <= 2^m`,
/// `1 - (alpha + k)/N >= 0` and `Γ(q) <= 1`.
pub fn gamma_curve(template: &BoundInputs, q_values: &[f64]) -> Vec<GammaRow> {
    q_values
        .iter()
        .map(|&q| {
            let b = template.clone().with_queries(q);
            let value = row_value(&b);
            GammaRow {
                q,
                log2_q: q.log2(),
                neg_log2_gamma: value,
                valid: value.is_some(),
            }
        })
        .collect()
}

fn row_value(b: &BoundInputs) -> Option<f64> {
    if !(b.queries.is_finite() && b.queries > 0.0) || b.msg_bits == 0 {
        return None;
    }
    let leaked = b.queries * b.leaked_messages() as f64;
    if leaked.log2() > b.msg_bits as f64 {
        return None;
    }
    if b.h_inv_argument() < 0.0 {
        return None;
    }
    let lg = log2_gamma(b).ok()?;
    (lg <= 0.0).then_some(-lg)
}

/// `points` values from `from` to `to` inclusive, evenly spaced in `log q`.
pub fn log_spaced(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && to >= from && to.is_finite()) {
        return Err(Error::domain(format!(
            "q range [{from}, {to}] must satisfy 0 < from <= to"
        )));
    }
    if points == 0 {
        return Err(Error::domain("points must be at least 1"));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let (a, b) = (from.log2(), to.log2());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                to
            } else {
                (a + step * i as f64).exp2()
            }
        })
        .collect())
}

/// Smallest `q` in `[lo, hi]` with `Γ(q) >= target`, located by bisection on
/// `log2 q` to `1e-9`. `None` if `Γ(hi) < target`.
pub fn gamma_crossing(
    template: &BoundInputs,
    target: f64,
    lo: f64,
    hi: f64,
) -> Result<Option<f64>> {
    let above = |lq: f64| -> Result<bool> {
        let b = template.clone().with_queries(lq.exp2());
        Ok(b.h_inv_argument() < 0.0 || log2_gamma(&b)? >= target.log2())
    };
    let (mut a, mut b) = (lo.log2(), hi.log2());
    if above(a)? {
        return Ok(Some(lo));
    }
    if !above(b)? {
        return Ok(None);
    }
    while b - a > 1e-9 {
        let mid = 0.5 * (a + b);
        if above(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Some(b.exp2()))
}

/// Decimal rendering with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_gamma_csv<W: Write>(rows: &[GammaRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let value = row
            .neg_log2_gamma
            .map(|v| format_sig(v, 10))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{}",
            format_sig(row.log2_q, 10),
            value,
            row.valid
        )?;
    }
    Ok(())
}
