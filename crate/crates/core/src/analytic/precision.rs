//! Extended-precision kernels for the alternating binomial sums.
//!
//! `Σ_k (−1)^k C(j,k) m_k` loses up to `j` bits to cancellation. The sums are
//! accumulated with an incremental difference table at a working precision of
//! `max(64, 1.5·J) + 64` bits, which leaves at least 64 clean bits for every
//! `j ≤ J` and costs `O(j)` per new `j`, so callers may stop as soon as a
//! series converges.

// linked against the system GMP/MPFR rather than a vendored build
use gmp_mpfr_sys as _;
use rug::ops::Pow;
use rug::Float;

/// Working precision for sums up to index `j_max`.
pub fn precision_bits(j_max: usize) -> u32 {
    let base = ((1.5 * j_max as f64).ceil() as u32).max(64);
    base + 64
}

/// Bound on the absolute error of the `j`-th sum at precision `prec`, given
/// inputs in `[0, 1]` with absolute error at most `2^−prec`.
pub fn certified_error(j: usize, prec: u32) -> f64 {
    (j as f64 + 2.0) * 2f64.powi(j as i32 + 1 - prec as i32)
}

/// Running alternating sums `g_j = Σ_{k≤j} (−1)^k C(j,k) m_k`.
///
/// After pushing `m_0 … m_j` the table holds `h_i = Σ_k (−1)^k C(i,k) m_{j−i+k}`,
/// so pushing `m_{j+1}` updates it with `h'_0 = m_{j+1}`, `h'_i = h_{i−1} − h'_{i−1}`.
/// When the `m_k` are moments `E[F^k]` of a variable in `[0, 1]` every entry is
/// a probability, which keeps the table bounded.
#[derive(Debug, Clone)]
pub struct AltSum {
    prec: u32,
    h: Vec<Float>,
}

impl AltSum {
    pub fn new(prec: u32) -> Self {
        AltSum {
            prec,
            h: Vec::new(),
        }
    }

    pub fn with_capacity(prec: u32, cap: usize) -> Self {
        AltSum {
            prec,
            h: Vec::with_capacity(cap),
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Index of the most recent sum, `None` before the first push.
    pub fn last_index(&self) -> Option<usize> {
        self.h.len().checked_sub(1)
    }

    /// Appends `m_{j+1}` and returns the new sum `g_{j+1}` rounded to `f64`.
    pub fn push(&mut self, m: Float) -> f64 {
        let n = self.h.len();
        if n == 0 {
            self.h.push(Float::with_val(self.prec, &m));
            return self.h[0].to_f64();
        }
        let mut carry = std::mem::replace(&mut self.h[0], Float::with_val(self.prec, &m));
        for i in 1..n {
            let (left, right) = self.h.split_at_mut(i);
            carry -= &left[i - 1];
            std::mem::swap(&mut carry, &mut right[0]);
        }
        carry -= &self.h[n - 1];
        self.h.push(carry);
        self.h[n].to_f64()
    }

    pub fn push_f64(&mut self, m: f64) -> f64 {
        self.push(Float::with_val(self.prec, m))
    }

    /// The latest sum at full precision.
    pub fn current(&self) -> Option<&Float> {
        self.h.last()
    }
}

/// `₂F₁(k+1, 1; c; z)` for `0 ≤ z < 1`, `c > 0`. Every term is positive.
pub fn hyp2f1_k1(k: u64, c: &Float, z: &Float) -> Float {
    let prec = z.prec().max(c.prec());
    let mut sum = Float::with_val(prec, 1);
    let mut term = Float::with_val(prec, 1);
    let a = Float::with_val(prec, k + 1);
    let mut n: u64 = 0;
    let stop = Float::with_val(prec, 2).pow(-(prec as i32) - 8);
    loop {
        // ratio (k+1+n)/(c+n) · z
        let num = Float::with_val(prec, &a + n);
        let den = Float::with_val(prec, c + n);
        let ratio = Float::with_val(prec, &num / &den) * z;
        term *= &ratio;
        sum += &term;
        n += 1;
        if ratio < 1 {
            // the ratio decreases in n when k + 1 ≥ c, so this bounds the tail
            let one_minus = Float::with_val(prec, 1 - &ratio);
            let tail = Float::with_val(prec, &term * &ratio) / one_minus;
            if tail <= Float::with_val(prec, &sum * &stop) {
                break;
            }
        }
        if term.is_zero() || n > 1_000_000 {
            break;
        }
    }
    sum
}

/// Reference alternating sum with explicit binomials in log space; slow and
/// only meant as an oracle for [`AltSum`].
pub fn alternating_sum_direct(m: &[Float], j: usize, prec: u32) -> Float {
    let mut sum = Float::with_val(prec, 0);
    for (k, mk) in m.iter().take(j + 1).enumerate() {
        let ln_c = ln_binomial(j as u64, k as u64, prec);
        let c = ln_c.exp();
        let t = c * mk;
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    sum
}

/// `ln C(n, k)` via log-gamma.
pub fn ln_binomial(n: u64, k: u64, prec: u32) -> Float {
    let f = |x: u64| Float::with_val(prec, x + 1).ln_gamma();
    f(n) - f(k) - f(n - k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn power_moments_give_binomial_form() {
        // m_k = x^k  ⇒  g_j = (1 − x)^j
        let prec = precision_bits(200);
        let x = 0.37f64;
        let mut alt = AltSum::new(prec);
        let xf = Float::with_val(prec, x);
        for j in 0..200 {
            let m = Float::with_val(prec, xf.clone().pow(j as u32));
            let g = alt.push(m);
            let exact = (1.0 - x).powi(j);
            assert!(
                (g - exact).abs() <= 1e-13 * exact + 1e-30,
                "j={j} g={g} exact={exact}"
            );
        }
    }

    #[test]
    fn double_precision_would_fail() {
        let x = 0.37f64;
        let naive: f64 = (0..=60)
            .map(|k| {
                let c = (ln_binomial(60, k, 64).to_f64()).exp();
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                s * c * x.powi(k as i32)
            })
            .sum();
        let exact = (1.0 - x).powi(60);
        assert!((naive - exact).abs() > 1e3 * exact);
    }

    #[test]
    fn hypergeometric_small_cases() {
        let prec = 128;
        // ₂F₁(1, 1; 2; z) = −ln(1−z)/z
        let z = Float::with_val(prec, 0.3);
        let c = Float::with_val(prec, 2);
        let v = hyp2f1_k1(0, &c, &z).to_f64();
        assert_relative_eq!(v, -(0.7f64).ln() / 0.3, max_relative = 1e-15);
        // ₂F₁(a, 1; 1; z) = (1−z)^{−a}
        let c1 = Float::with_val(prec, 1);
        let v = hyp2f1_k1(9, &c1, &z).to_f64();
        assert_relative_eq!(v, 0.7f64.powi(-10), max_relative = 1e-14);
    }

    #[test]
    fn certificate_is_tiny_at_design_precision() {
        for jmax in [10usize, 100, 500, 1500] {
            let p = precision_bits(jmax);
            assert!(certified_error(jmax, p) < 1e-18);
        }
    }

    proptest! {
        #[test]
        fn table_matches_direct_sum(vals in proptest::collection::vec(0.0f64..1.0, 1..40)) {
            // sorted descending: a moment sequence shape
            let mut v = vals.clone();
            v.sort_by(|a, b| b.total_cmp(a));
            let prec = precision_bits(v.len());
            let mf: Vec<Float> = v.iter().map(|&x| Float::with_val(prec, x)).collect();
            let mut alt = AltSum::new(prec);
            for (j, m) in mf.iter().enumerate() {
                alt.push(m.clone());
                let d = alternating_sum_direct(&mf, j, prec);
                let diff = Float::with_val(prec, alt.current().unwrap() - &d).abs().to_f64();
                prop_assert!(diff < 1e-25, "j={} diff={}", j, diff);
            }
        }
    }
}
