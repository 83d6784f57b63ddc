//! Adaptive Gauss–Legendre quadrature, scalar and vector valued.
//!
//! Each panel is integrated with an `n`-point rule on the whole panel and on
//! its two halves; the difference is the panel's error estimate and the
//! halves' sum is its value. The panel with the largest weighted error is
//! split until the global error meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the semi-infinite distance integrals are mapped to a finite range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    /// Integrate in `v = λπr²/M` up to a cut-off where `e^{−v}` is negligible.
    #[default]
    SquaredDistance,
    /// Integrate in `s = 1/(1 + v − v₀)` over `(0, 1]`.
    Reciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tolerance: f64,
    pub abs_tolerance: f64,
    pub max_subdivisions: usize,
    pub transform: Transform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tolerance: 1e-9,
            abs_tolerance: 1e-15,
            max_subdivisions: 4000,
            transform: Transform::SquaredDistance,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance > 0.0 && self.abs_tolerance > 0.0) {
            return Err(Error::config(
                "quadrature.rel_tolerance",
                "tolerances must be > 0",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::config("quadrature.max_subdivisions", "must be >= 1"));
        }
        Ok(())
    }

    /// Same rule with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tolerance: self.rel_tolerance / factor,
            abs_tolerance: self.abs_tolerance / factor,
            max_subdivisions: self.max_subdivisions * 2,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

const ORDER: usize = 12;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter()
        .zip(w)
        .map(|(&xi, &wi)| wi * f(c + h * xi))
        .sum::<f64>()
        * h
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

struct Keyed(f64, usize);

impl PartialEq for Keyed {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl Eq for Keyed {}
impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

fn refine<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let m = 0.5 * (a + b);
    let whole = panel(f, a, b);
    let halves = panel(f, a, m) + panel(f, m, b);
    Panel {
        a,
        b,
        value: halves,
        error: (whole - halves).abs(),
    }
}

/// Adaptive integral of `f` over `[a, b]`, starting from the given breakpoints.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| refine(&mut f, w[0], w[1]))
        .collect();
    let mut heap: BinaryHeap<Keyed> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| Keyed(p.error, i))
        .collect();
    let mut subdivisions = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let tol = spec.abs_tolerance.max(spec.rel_tolerance * value.abs());
        if error <= tol {
            return Ok(QuadResult {
                value,
                error,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Quadrature {
                error,
                subdivisions,
            });
        }
        let Some(Keyed(_, i)) = heap.pop() else {
            return Err(Error::Quadrature {
                error,
                subdivisions,
            });
        };
        let (a, b) = (panels[i].a, panels[i].b);
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            // panel cannot be split further in floating point
            return Err(Error::Quadrature {
                error,
                subdivisions,
            });
        }
        panels[i] = refine(&mut f, a, m);
        heap.push(Keyed(panels[i].error, i));
        let right = refine(&mut f, m, b);
        heap.push(Keyed(right.error, panels.len()));
        panels.push(right);
        subdivisions += 1;
    }
}

/// Vector-valued result: one value and error per component.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadVecResult {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub subdivisions: usize,
}

struct VecPanel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
}

fn panel_vec<F: FnMut(f64, &mut [f64])>(
    f: &mut F,
    a: f64,
    b: f64,
    buf: &mut [f64],
    acc: &mut [f64],
) {
    let (x, w) = rule();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    acc.iter_mut().for_each(|v| *v = 0.0);
    for (&xi, &wi) in x.iter().zip(w) {
        f(c + h * xi, buf);
        for (s, &v) in acc.iter_mut().zip(buf.iter()) {
            *s += wi * h * v;
        }
    }
}

fn refine_vec<F: FnMut(f64, &mut [f64])>(f: &mut F, a: f64, b: f64, n: usize) -> VecPanel {
    let m = 0.5 * (a + b);
    let mut buf = vec![0.0; n];
    let mut whole = vec![0.0; n];
    let mut left = vec![0.0; n];
    let mut right = vec![0.0; n];
    panel_vec(f, a, b, &mut buf, &mut whole);
    panel_vec(f, a, m, &mut buf, &mut left);
    panel_vec(f, m, b, &mut buf, &mut right);
    let value: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l + r).collect();
    let error = whole
        .iter()
        .zip(&value)
        .map(|(w, v)| (w - v).abs())
        .collect();
    VecPanel { a, b, value, error }
}

/// Adaptive integral of an `n`-component integrand. Every component must meet
/// `max(abs_tol, rel_tol·|value|)`.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    n: usize,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadVecResult> {
    let mut panels: Vec<VecPanel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| refine_vec(&mut f, w[0], w[1], n))
        .collect();
    let mut values = vec![0.0; n];
    let mut errors = vec![0.0; n];
    for p in &panels {
        for c in 0..n {
            values[c] += p.value[c];
            errors[c] += p.error[c];
        }
    }
    let weights = |values: &[f64]| -> Vec<f64> {
        values
            .iter()
            .map(|v| 1.0 / spec.abs_tolerance.max(spec.rel_tolerance * v.abs()))
            .collect()
    };
    let score = |p: &VecPanel, w: &[f64]| {
        p.error
            .iter()
            .zip(w)
            .map(|(e, w)| e * w)
            .fold(0.0, f64::max)
    };
    let mut w = weights(&values);
    let mut heap: BinaryHeap<Keyed> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| Keyed(score(p, &w), i))
        .collect();
    let mut next_reweight = panels.len() * 2;
    let mut subdivisions = 0;
    loop {
        let worst = errors
            .iter()
            .zip(&values)
            .map(|(e, v)| e / spec.abs_tolerance.max(spec.rel_tolerance * v.abs()))
            .fold(0.0, f64::max);
        if worst <= 1.0 {
            return Ok(QuadVecResult {
                values,
                errors,
                subdivisions,
            });
        }
        let total_error = errors.iter().cloned().fold(0.0, f64::max);
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Quadrature {
                error: total_error,
                subdivisions,
            });
        }
        if panels.len() >= next_reweight {
            w = weights(&values);
            heap = panels
                .iter()
                .enumerate()
                .map(|(i, p)| Keyed(score(p, &w), i))
                .collect();
            next_reweight = panels.len() * 2;
        }
        let Some(Keyed(_, i)) = heap.pop() else {
            return Err(Error::Quadrature {
                error: total_error,
                subdivisions,
            });
        };
        let (a, b) = (panels[i].a, panels[i].b);
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            return Err(Error::Quadrature {
                error: total_error,
                subdivisions,
            });
        }
        let left = refine_vec(&mut f, a, m, n);
        let right = refine_vec(&mut f, m, b, n);
        for c in 0..n {
            values[c] += left.value[c] + right.value[c] - panels[i].value[c];
            errors[c] += left.error[c] + right.error[c] - panels[i].error[c];
            // drift from the running update must not fake convergence
            errors[c] = errors[c].max(0.0);
        }
        panels[i] = left;
        heap.push(Keyed(score(&panels[i], &w), i));
        heap.push(Keyed(score(&right, &w), panels.len()));
        panels.push(right);
        subdivisions += 1;
    }
}

/// Cut-off beyond which `e^{−(v − v₀)}` contributes less than 1e-26.
pub const TAIL_SPAN: f64 = 60.0;

/// `∫_{v₀}^{∞} g(v) e^{−(v − v₀)} dv` for an `n`-component `g`, with optional
/// interior breakpoints in `v` (e.g. the LOS/NLOS boundary).
pub fn integrate_exp_tail_vec<G: FnMut(f64, &mut [f64])>(
    mut g: G,
    n: usize,
    v0: f64,
    kinks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadVecResult> {
    match spec.transform {
        Transform::SquaredDistance => {
            let mut breaks = vec![v0];
            breaks.extend(
                kinks
                    .iter()
                    .copied()
                    .filter(|&k| k > v0 && k < v0 + TAIL_SPAN),
            );
            breaks.push(v0 + TAIL_SPAN);
            integrate_vec(
                |v, out| {
                    g(v, out);
                    let e = (-(v - v0)).exp();
                    out.iter_mut().for_each(|x| *x *= e);
                },
                n,
                &breaks,
                spec,
            )
        }
        Transform::Reciprocal => {
            let to_s = |v: f64| 1.0 / (1.0 + v - v0);
            let mut breaks = vec![0.0];
            let mut inner: Vec<f64> = kinks
                .iter()
                .copied()
                .filter(|&k| k > v0)
                .map(to_s)
                .collect();
            inner.sort_by(f64::total_cmp);
            breaks.extend(inner);
            breaks.push(1.0);
            integrate_vec(
                |s, out| {
                    if s <= 0.0 {
                        out.iter_mut().for_each(|x| *x = 0.0);
                        return;
                    }
                    let t = (1.0 - s) / s;
                    g(v0 + t, out);
                    let e = (-t).exp() / (s * s);
                    out.iter_mut().for_each(|x| *x *= e);
                },
                n,
                &breaks,
                spec,
            )
        }
    }
}
