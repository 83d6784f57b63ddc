//! The interference integral `I_k(R) = ∫_R^∞ (1 − (1 + Γ l(R)/l(r))^{−k}) r dr`
//! and its single-slope normalisation `H(k, α, Γ) = I_k(1)` for `l(r) = r^α`.
//!
//! On a power-law segment `l = C r^β` the substitution `t = a r^{−β}` with
//! `a = Γ l(R)/C` and `δ = 2/β` gives, between inner and outer parameters
//! `t₁ > t₂`,
//!
//! ```text
//! J = a^δ/2 · [φ(t₂) t₂^{−δ} − φ(t₁) t₁^{−δ} + k (Q(t₁) − Q(t₂))]
//! φ(t) = 1 − (1 + t)^{−k}
//! Q(t) = t^{1−δ}/(1−δ) · (1 + t)^{−k−1} · ₂F₁(k+1, 1; 2−δ; t/(1+t))
//! ```
//!
//! which needs `β > 2` and is evaluated to any precision with positive-term
//! series. [`h_integral`] is the direct quadrature used for double-precision
//! work and as an independent check.

use rug::ops::Pow;
use rug::Float;

use super::precision::hyp2f1_k1;
use super::quadrature::{integrate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::model::PathLossModel;

fn check_exponent(alpha: f64) -> Result<()> {
    if alpha > 2.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "interference integral diverges for path-loss exponent {alpha} <= 2"
        )))
    }
}

fn tight() -> QuadratureSpec {
    QuadratureSpec {
        rel_tolerance: 1e-12,
        abs_tolerance: 1e-300,
        max_subdivisions: 20_000,
        ..QuadratureSpec::default()
    }
}

/// `(1 − (1+x)^{−k})/x`, continuous at `x = 0`.
fn phi_over_x(k: f64, x: f64) -> f64 {
    if x == 0.0 {
        k
    } else {
        -(-k * x.ln_1p()).exp_m1() / x
    }
}

/// `H(k, α, Γ) = ∫_1^∞ (1 − (1 + Γ r^{−α})^{−k}) r dr` by adaptive quadrature
/// in `s = r^{−(α−2)}` on `(0, 1]`.
pub fn h_integral(k: u64, alpha: f64, gamma: f64) -> Result<f64> {
    check_exponent(alpha)?;
    if !(gamma > 0.0) {
        return Err(Error::domain("gamma must be > 0"));
    }
    if k == 0 {
        return Ok(0.0);
    }
    let e = alpha / (alpha - 2.0);
    let kf = k as f64;
    let scale = gamma / (alpha - 2.0);
    let r = integrate(
        |s: f64| scale * phi_over_x(kf, gamma * s.powf(e)),
        &[0.0, 0.5, 1.0],
        &tight(),
    )?;
    Ok(r.value)
}

/// Closed form of `H(k, α, Γ)` at `prec` bits.
pub fn h_closed_form(k: u64, alpha: f64, gamma: f64, prec: u32) -> Result<Float> {
    check_exponent(alpha)?;
    let g = Float::with_val(prec, gamma);
    let one_plus = Float::with_val(prec, 1 + &g);
    let delta = Float::with_val(prec, 2) / Float::with_val(prec, alpha);
    let c = Float::with_val(prec, 2 - &delta);
    let z = Float::with_val(prec, &g / &one_plus);
    Ok(h_from_parts(k, &g, &one_plus, &delta, &c, &z))
}

fn h_from_parts(k: u64, g: &Float, one_plus: &Float, delta: &Float, c: &Float, z: &Float) -> Float {
    let prec = g.prec();
    if k == 0 {
        return Float::with_val(prec, 0);
    }
    let f = hyp2f1_k1(k, c, z);
    let one_minus_delta = Float::with_val(prec, 1 - delta);
    let pow = Float::with_val(prec, one_plus.pow(-(k as i64) - 1));
    let i_k = f * pow / one_minus_delta;
    let first = Float::with_val(prec, g * k) * i_k;
    let phi = 1 - Float::with_val(prec, one_plus.pow(-(k as i64)));
    (first - phi) / 2
}

/// `H(k, α, Γ)` for `k = 0..=k_max` at a fixed precision.
#[derive(Debug, Clone)]
pub struct HTable {
    pub alpha: f64,
    pub gamma: f64,
    values: Vec<Float>,
}

impl HTable {
    pub fn new(alpha: f64, gamma: f64, k_max: usize, prec: u32) -> Result<Self> {
        check_exponent(alpha)?;
        let g = Float::with_val(prec, gamma);
        let one_plus = Float::with_val(prec, 1 + &g);
        let delta = Float::with_val(prec, 2) / Float::with_val(prec, alpha);
        let c = Float::with_val(prec, 2 - &delta);
        let z = Float::with_val(prec, &g / &one_plus);
        let values = (0..=k_max as u64)
            .map(|k| h_from_parts(k, &g, &one_plus, &delta, &c, &z))
            .collect();
        Ok(HTable {
            alpha,
            gamma,
            values,
        })
    }

    pub fn prec(&self) -> u32 {
        self.values[0].prec()
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> &Float {
        &self.values[k]
    }

    pub fn get_f64(&self, k: usize) -> f64 {
        self.values[k].to_f64()
    }
}

/// `Q(t)` of the segment formula; zero at `t = 0`.
fn q_term(k: u64, t: &Float, delta: &Float) -> Float {
    let prec = t.prec();
    if t.is_zero() {
        return Float::with_val(prec, 0);
    }
    let one_minus_delta = Float::with_val(prec, 1 - delta);
    let c = Float::with_val(prec, 2 - delta);
    let one_plus = Float::with_val(prec, 1 + t);
    let z = Float::with_val(prec, t / &one_plus);
    let f = hyp2f1_k1(k, &c, &z);
    let tp = Float::with_val(prec, t.pow(&one_minus_delta));
    let pw = Float::with_val(prec, one_plus.pow(-(k as i64) - 1));
    tp * pw * f / one_minus_delta
}

/// `φ(t) t^{−δ}`; zero at `t = 0` since `δ < 1`.
fn boundary_term(k: u64, t: &Float, delta: &Float) -> Float {
    let prec = t.prec();
    if t.is_zero() {
        return Float::with_val(prec, 0);
    }
    let one_plus = Float::with_val(prec, 1 + t);
    let phi = 1 - Float::with_val(prec, one_plus.pow(-(k as i64)));
    let neg_delta = Float::with_val(prec, -delta);
    phi * Float::with_val(prec, t.pow(&neg_delta))
}

/// One power-law segment: `a^δ/2 · [...]` with inner parameter `t1` and outer `t2`.
pub fn segment_integral(k: u64, a: &Float, beta: f64, t1: &Float, t2: &Float) -> Result<Float> {
    check_exponent(beta)?;
    let prec = a.prec();
    if k == 0 {
        return Ok(Float::with_val(prec, 0));
    }
    let delta = Float::with_val(prec, 2) / Float::with_val(prec, beta);
    let ad = Float::with_val(prec, a.pow(&delta));
    let mut bracket = boundary_term(k, t2, &delta) - boundary_term(k, t1, &delta);
    let dq = q_term(k, t1, &delta) - q_term(k, t2, &delta);
    bracket += dq * k;
    Ok(ad * bracket / 2)
}

/// `I_k(R)` for a dual-slope model at `prec` bits. Infinite for `k ≥ 1` when
/// `α_N = 2`; LOS exponents `≤ 2` with `R < R_c` are not supported.
pub fn interference_integral(
    k: u64,
    r: f64,
    plm: &PathLossModel,
    gamma: f64,
    prec: u32,
) -> Result<Float> {
    if k == 0 {
        return Ok(Float::with_val(prec, 0));
    }
    if plm.alpha_nlos <= 2.0 {
        return Ok(Float::with_val(prec, f64::INFINITY));
    }
    let g = Float::with_val(prec, gamma);
    let rf = Float::with_val(prec, r);
    if r >= plm.r_critical || plm.is_single_slope() {
        // one segment from R outwards: R² H(k, α_N, Γ)
        let h = h_closed_form(k, plm.alpha_nlos, gamma, prec)?;
        return Ok(h * Float::with_val(prec, rf.square_ref()));
    }
    if plm.alpha_los <= 2.0 {
        return Err(Error::Unsupported(format!(
            "interference inside the LOS radius needs alpha_los > 2 (got {})",
            plm.alpha_los
        )));
    }
    let rc = Float::with_val(prec, plm.r_critical);
    // LOS part [R, R_c): a = Γ R^α_L, t runs from Γ down to Γ (R/R_c)^α_L
    let a_l = Float::with_val(prec, &g * Float::with_val(prec, (&rf).pow(plm.alpha_los)));
    let ratio = Float::with_val(prec, &rf / &rc);
    let t2_l = Float::with_val(prec, &g * Float::with_val(prec, ratio.pow(plm.alpha_los)));
    let los = segment_integral(k, &a_l, plm.alpha_los, &g, &t2_l)?;
    // NLOS part [R_c, ∞): a = Γ l(R)/C_N
    let l_r = Float::with_val(prec, plm.c_los) * Float::with_val(prec, (&rf).pow(plm.alpha_los));
    let a_n = Float::with_val(prec, &g * &l_r) / Float::with_val(prec, plm.c_nlos);
    let rc_pow = Float::with_val(prec, (&rc).pow(plm.alpha_nlos));
    let t1_n = Float::with_val(prec, &a_n / &rc_pow);
    let zero = Float::with_val(prec, 0);
    let nlos = segment_integral(k, &a_n, plm.alpha_nlos, &t1_n, &zero)?;
    Ok(los + nlos)
}

/// Double-precision `I_k(R)` by quadrature, split at `R_c`.
pub fn interference_integral_quad(k: u64, r: f64, plm: &PathLossModel, gamma: f64) -> Result<f64> {
    if k == 0 {
        return Ok(0.0);
    }
    check_exponent(plm.alpha_nlos)?;
    let kf = k as f64;
    let lr = plm.eval(r);
    let integrand = |s: f64| -> f64 {
        let x = gamma * lr / plm.eval(s);
        -(-kf * x.ln_1p()).exp_m1() * s
    };
    let spec = tight();
    let mut total = 0.0;
    let start = if r < plm.r_critical && !plm.is_single_slope() {
        total += integrate(integrand, &[r, plm.r_critical], &spec)?.value;
        plm.r_critical
    } else {
        r
    };
    // tail [start, ∞) in s = (start/r')^{α_N − 2}
    let b = plm.alpha_nlos - 2.0;
    let tail = integrate(
        |u: f64| {
            if u <= 0.0 {
                // limit of the integrand: k Γ l(R) start^{2}/(C_N start^{α_N} b)
                return kf * gamma * lr / (plm.c_nlos * start.powf(plm.alpha_nlos)) * start * start
                    / b;
            }
            let rr = start * u.powf(-1.0 / b);
            // r dr = start² u^{−2/b − 1} du / b
            integrand(rr) / rr * start * start * u.powf(-2.0 / b - 1.0) / b
        },
        &[0.0, 0.5, 1.0],
        &spec,
    )?;
    Ok(total + tail.value)
}
