//! Shifted-Chebyshev interpolation on [0,1] with an FFT-backed cosine
//! transform, and the backward recurrence that integrates a Chebyshev series
//! against a Jacobi weight.

use std::cell::RefCell;

use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Coefficients `gamma_0 .. gamma_M` of an expansion in shifted Chebyshev
/// polynomials `T_i(2x - 1)` on [0,1].
///
/// `gamma_0` is stored unhalved; the "first term halved" summation
/// convention is applied by consumers (evaluation and integration).
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    pub coeffs: Vec<f64>,
}

impl ChebyshevSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates the series at `x` in [0,1] by Clenshaw's recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let u = 2.0 * x - 1.0;
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &g in self.coeffs.iter().skip(1).rev() {
            let b = g + 2.0 * u * b1 - b2;
            b2 = b1;
            b1 = b;
        }
        0.5 * self.coeffs[0] + u * b1 - b2
    }
}

/// Interpolation nodes `s_j = 1/2 + 1/2 cos(j pi / M)`, `j = 0..=M`
/// (decreasing from 1 to 0).
pub fn chebyshev_nodes(m: usize) -> Vec<f64> {
    debug_assert!(m >= 1);
    (0..=m)
        .map(|j| 0.5 + 0.5 * (j as f64 * std::f64::consts::PI / m as f64).cos())
        .collect()
}

/// Type-I cosine transform via an FFT of the even extension:
/// `out_i = (2 - delta_{i,M}) / M * sum''_j samples_j cos(i j pi / M)`
/// with the first and last summands halved.
fn dct_i(samples: &[f64]) -> Vec<f64> {
    let m = samples.len() - 1;
    let n = 2 * m;
    let mut buf: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); n];
    for (j, &s) in samples.iter().enumerate() {
        buf[j].re = s;
    }
    for j in 1..m {
        buf[n - j].re = samples[j];
    }
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_forward(n);
        fft.process(&mut buf);
    });
    (0..=m)
        .map(|i| {
            let scale = if i == m { 1.0 } else { 2.0 };
            scale * buf[i].re / (2.0 * m as f64)
        })
        .collect()
}

/// Builds the degree-`M` interpolant through `M + 1` samples taken at
/// [`chebyshev_nodes`]`(M)`. `M` must be a power of two `>= 8` so that the
/// adaptive doubling strategy can reuse the node set.
pub fn cheb_interpolate(samples: &[f64]) -> Result<ChebyshevSeries> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no interpolation samples".into()));
    }
    let m = samples.len() - 1;
    if m < 8 || !m.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "interpolation degree M = {m} must be a power of two >= 8"
        )));
    }
    Ok(ChebyshevSeries::new(dct_i(samples)))
}

/// Integrates a Chebyshev series against the Jacobi weight:
/// `J(alpha, beta; S) = integral_0^1 (1-x)^alpha x^beta S(x) dx`,
/// `alpha, beta > -1`, by the backward recurrence
/// `d_{i-1} = (2 r d_i + (i - u) d_{i+1} - gamma_i) / (i + u)` with
/// `r = beta - alpha`, `u = alpha + beta + 1`, and output
/// `B (gamma_0/2 - r d_0 + u d_1)`, `B = Gamma(a+1)Gamma(b+1)/Gamma(a+b+2)`.
pub fn jacobi_cheb_integral(alpha: f64, beta: f64, series: &ChebyshevSeries) -> f64 {
    debug_assert!(alpha > -1.0 && beta > -1.0);
    let r = beta - alpha;
    let u = alpha + beta + 1.0;
    let g = &series.coeffs;
    let mut d_next2 = 0.0; // d_{i+1}
    let mut d_next = 0.0; // d_i
    for i in (1..g.len()).rev() {
        let fi = i as f64;
        let d = (2.0 * r * d_next + (fi - u) * d_next2 - g[i]) / (fi + u);
        d_next2 = d_next;
        d_next = d;
    }
    let b = (ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(alpha + beta + 2.0)).exp();
    b * (0.5 * g[0] - r * d_next + u * d_next2)
}
