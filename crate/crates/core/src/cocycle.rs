//! Truncated Fourier cocycle over an irrational rotation.
//!
//! `H(t) = sum_{0 < |k| <= K} (1/|k|) e(n_k t)` and
//! `h(t) = H(t + alpha) - H(t) = sum (1/|k|)(e(n_k alpha) - 1) e(n_k t)`, with
//! `e(s) = exp(2 pi i s)` and `n_{-k} = -n_k`. The skew product driven by
//! `u = lambda h + beta` is `(x, y) -> (x + alpha, y + u(x))`.
//!
//! Every phase `n_k t` is formed in 128-bit fixed point before the
//! trigonometric call, so frequencies of order `10^6` cost no accuracy.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::averages::{validate_checkpoints, AverageSeries, CheckpointAccumulator};
use crate::{CompensatedSum, Error, FixedAngle, Real, Result, TorusPoint};

/// Default truncation order.
pub const DEFAULT_TRUNCATION: usize = 4;

/// Phases are recomputed exactly every this many steps of a walker.
const RESYNC_EVERY: u64 = 256;

/// `n_k` for `k = 1..=truncation`: `10, 100, 10^6`, then `10^6 * 2^(k-3)`.
pub fn default_frequencies(truncation: usize) -> Vec<u64> {
    (1..=truncation)
        .map(|k| match k {
            1 => 10,
            2 => 100,
            _ => 1_000_000u64 << (k - 3),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Mode<F> {
    freq: u64,
    weight: F,
    /// `n_k * alpha mod 1`
    step: FixedAngle,
    /// `(1/k)(e(n_k alpha) - 1)`
    coeff: Complex<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleParams<F> {
    alpha: FixedAngle,
    lambda: F,
    beta: FixedAngle,
    modes: Vec<Mode<F>>,
}

impl<F: Real> Default for CocycleParams<F> {
    /// Liouville-type `alpha`, `lambda = 1`, `beta = sqrt(2) - 1`, `K = 4`.
    fn default() -> Self {
        Self::new(
            FixedAngle::LIOUVILLE,
            F::one(),
            FixedAngle::SQRT2_MINUS_ONE,
            default_frequencies(DEFAULT_TRUNCATION),
        )
        .expect("default schedule is valid")
    }
}

impl<F: Real> CocycleParams<F> {
    pub fn new(alpha: FixedAngle, lambda: F, beta: FixedAngle, freqs: Vec<u64>) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::invalid("lambda", "must be finite"));
        }
        if freqs.first() == Some(&0) {
            return Err(Error::invalid("freqs", "frequencies must be positive"));
        }
        if freqs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("freqs", "frequencies must be strictly increasing"));
        }
        let modes = freqs
            .iter()
            .enumerate()
            .map(|(i, &freq)| {
                let weight = F::one() / F::of((i + 1) as f64);
                let step = alpha.mul_int(freq as i128);
                // e(a) - 1 = -2 sin^2(pi a) + i sin(2 pi a), well conditioned near a = 0
                let a = F::of(step.to_signed_f64());
                let s = (a * F::PI()).sin();
                let re = -(s * s + s * s);
                let im = (a * F::TAU()).sin();
                Mode {
                    freq,
                    weight,
                    step,
                    coeff: Complex::new(re * weight, im * weight),
                }
            })
            .collect();
        Ok(Self {
            alpha,
            lambda,
            beta,
            modes,
        })
    }

    /// Same parameters with a different `lambda`.
    pub fn with_lambda(&self, lambda: F) -> Result<Self> {
        Self::new(self.alpha, lambda, self.beta, self.freqs())
    }

    pub fn alpha(&self) -> FixedAngle {
        self.alpha
    }

    pub fn lambda(&self) -> F {
        self.lambda
    }

    pub fn beta(&self) -> FixedAngle {
        self.beta
    }

    pub fn truncation(&self) -> usize {
        self.modes.len()
    }

    pub fn freqs(&self) -> Vec<u64> {
        self.modes.iter().map(|m| m.freq).collect()
    }

    /// `|(1/k)(e(n_k alpha) - 1)|` for `k = 1..=K`.
    pub fn coefficient_magnitudes(&self) -> Vec<F> {
        self.modes.iter().map(|m| m.coeff.norm()).collect()
    }

    /// `H(theta) = 2 sum_k (1/k) cos(2 pi n_k theta)`.
    pub fn primitive(&self, theta: F) -> F {
        self.primitive_at(FixedAngle::from_real(theta))
    }

    pub fn primitive_at(&self, theta: FixedAngle) -> F {
        let two = F::one() + F::one();
        self.modes.iter().fold(F::zero(), |acc, m| {
            acc + two * m.weight * theta.mul_int(m.freq as i128).cos_2pi::<F>()
        })
    }

    /// `h(theta)` summed from its Fourier coefficients.
    pub fn h(&self, theta: F) -> F {
        self.h_at(FixedAngle::from_real(theta))
    }

    pub fn h_at(&self, theta: FixedAngle) -> F {
        let two = F::one() + F::one();
        self.modes.iter().fold(F::zero(), |acc, m| {
            let (s, c) = theta.mul_int(m.freq as i128).sin_cos_2pi::<F>();
            acc + two * (m.coeff.re * c - m.coeff.im * s)
        })
    }

    /// `h(theta)` summed over `k` and `-k` separately. The imaginary part is
    /// pure rounding error.
    pub fn h_complex_at(&self, theta: FixedAngle) -> Complex<F> {
        self.modes.iter().fold(Complex::new(F::zero(), F::zero()), |acc, m| {
            let (s, c) = theta.mul_int(m.freq as i128).sin_cos_2pi::<F>();
            let plus = m.coeff * Complex::new(c, s);
            let minus = m.coeff.conj() * Complex::new(c, -s);
            acc + plus + minus
        })
    }

    /// `u(x) = lambda h(x) + beta` as an angle.
    pub fn displacement(&self, x: FixedAngle) -> FixedAngle {
        FixedAngle::from_real(self.lambda * self.h_at(x)) + self.beta
    }

    /// Partial sums `S_n = sum_{j<n} lambda h(x + j alpha)` for `n = 1..=n_max`.
    pub fn birkhoff_deviation(&self, x: F, n_max: u64) -> Result<Vec<F>> {
        if n_max == 0 {
            return Err(Error::invalid("n_max", "must be at least 1"));
        }
        let mut out = Vec::with_capacity(n_max as usize);
        let mut walker = Walker::new(self, FixedAngle::from_real(x));
        let mut sum = CompensatedSum::new();
        for _ in 0..n_max {
            sum += self.lambda * walker.next_h();
            out.push(sum.value());
        }
        Ok(out)
    }

    /// Per-point sup and inf of `S_n`, `1 <= n <= n_max`, on the grid `x_i = i / grid_size`.
    pub fn unbounded_motion_scan(
        &self,
        grid_size: usize,
        n_max: u64,
        threshold: F,
    ) -> Result<DeviationReport<F>> {
        if grid_size < 2 {
            return Err(Error::invalid("grid_size", "must be at least 2"));
        }
        if n_max == 0 {
            return Err(Error::invalid("n_max", "must be at least 1"));
        }
        let rows: Vec<DeviationRow<F>> = (0..grid_size)
            .into_par_iter()
            .map(|i| {
                let x = FixedAngle::from_ratio(i as i64, grid_size as u64);
                self.deviation_extremes(x, n_max)
            })
            .collect();
        Ok(DeviationReport::from_rows(rows, n_max, threshold))
    }

    fn deviation_extremes(&self, x: FixedAngle, n_max: u64) -> DeviationRow<F> {
        let mut walker = Walker::new(self, x);
        let mut sum = CompensatedSum::new();
        let mut row = DeviationRow {
            x: x.to_real(),
            sup: F::neg_infinity(),
            argmax: 0,
            inf: F::infinity(),
            argmin: 0,
        };
        for n in 1..=n_max {
            sum += self.lambda * walker.next_h();
            let s = sum.value();
            if s > row.sup {
                row.sup = s;
                row.argmax = n;
            }
            if s < row.inf {
                row.inf = s;
                row.argmin = n;
            }
        }
        row
    }

    /// Birkhoff averages of `f(w) = cos(2 pi w_2)` along
    /// `U(w_1, w_2) = (w_1 + alpha, w_2 + lambda h(w_1))`.
    pub fn circle_extension_average(&self, n_list: &[u64], w: &TorusPoint) -> Result<AverageSeries<F>> {
        validate_checkpoints(n_list)?;
        if w.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: w.dim(),
            });
        }
        let w2 = w.coord(1);
        let mut walker = Walker::new(self, w.coord(0));
        // second coordinate is w2 + S_n: an exact angle plus a compensated real offset
        let mut offset = CompensatedSum::<F>::new();
        let mut acc = CheckpointAccumulator::new(n_list);
        while !acc.is_done() {
            let shift = FixedAngle::from_real(offset.value());
            acc.push((w2 + shift).cos_2pi::<F>());
            offset += self.lambda * walker.next_h();
        }
        Ok(acc.finish())
    }
}

/// Steps `x, x + alpha, x + 2 alpha, ...` and evaluates `h` there.
///
/// Each mode's unit phasor is advanced by complex multiplication and
/// re-seeded from the exact fixed-point phase every [`RESYNC_EVERY`] steps.
struct Walker<'a, F> {
    params: &'a CocycleParams<F>,
    phase: Vec<FixedAngle>,
    phasor: Vec<Complex<F>>,
    rotor: Vec<Complex<F>>,
    counter: u64,
}

impl<'a, F: Real> Walker<'a, F> {
    fn new(params: &'a CocycleParams<F>, x: FixedAngle) -> Self {
        let phase: Vec<FixedAngle> = params.modes.iter().map(|m| x.mul_int(m.freq as i128)).collect();
        let rotor = params
            .modes
            .iter()
            .map(|m| {
                let (s, c) = m.step.sin_cos_2pi::<F>();
                Complex::new(c, s)
            })
            .collect();
        let mut w = Self {
            params,
            phasor: vec![Complex::new(F::one(), F::zero()); phase.len()],
            phase,
            rotor,
            counter: 0,
        };
        w.resync();
        w
    }

    fn resync(&mut self) {
        for (p, ph) in self.phasor.iter_mut().zip(&self.phase) {
            let (s, c) = ph.sin_cos_2pi::<F>();
            *p = Complex::new(c, s);
        }
    }

    /// `h` at the current point, then advance by `alpha`.
    fn next_h(&mut self) -> F {
        let two = F::one() + F::one();
        let mut h = F::zero();
        for (m, p) in self.params.modes.iter().zip(&self.phasor) {
            h = h + two * (m.coeff.re * p.re - m.coeff.im * p.im);
        }
        self.counter += 1;
        for (ph, m) in self.phase.iter_mut().zip(&self.params.modes) {
            *ph += m.step;
        }
        if self.counter.is_multiple_of(RESYNC_EVERY) {
            self.resync();
        } else {
            for (p, r) in self.phasor.iter_mut().zip(&self.rotor) {
                *p = *p * *r;
            }
        }
        h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeviationRow<F> {
    pub x: F,
    pub sup: F,
    pub argmax: u64,
    pub inf: F,
    pub argmin: u64,
}

impl<F: Real> DeviationRow<F> {
    /// `max_{n <= N} |S_n(x)|`
    pub fn max_abs(&self) -> F {
        self.sup.abs().max(self.inf.abs())
    }
}

/// Result of [`CocycleParams::unbounded_motion_scan`]. Indices refer to `rows`;
/// ties resolve to the first grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationReport<F> {
    pub rows: Vec<DeviationRow<F>>,
    pub n_max: u64,
    pub threshold: F,
    pub global_max: F,
    pub global_max_at: usize,
    /// The global arg-max, when its sup exceeds the threshold.
    pub evidence: Option<usize>,
    /// `min_x sup_n S_n(x)`
    pub min_sup: F,
    pub min_sup_at: usize,
    /// `max_x inf_n S_n(x)`
    pub max_inf: F,
    pub max_inf_at: usize,
}

impl<F: Real> DeviationReport<F> {
    fn from_rows(rows: Vec<DeviationRow<F>>, n_max: u64, threshold: F) -> Self {
        let mut global_max_at = 0;
        let mut min_sup_at = 0;
        let mut max_inf_at = 0;
        for (i, r) in rows.iter().enumerate() {
            if r.sup > rows[global_max_at].sup {
                global_max_at = i;
            }
            if r.sup < rows[min_sup_at].sup {
                min_sup_at = i;
            }
            if r.inf > rows[max_inf_at].inf {
                max_inf_at = i;
            }
        }
        let global_max = rows[global_max_at].sup;
        Self {
            n_max,
            threshold,
            global_max,
            global_max_at,
            evidence: (global_max > threshold).then_some(global_max_at),
            min_sup: rows[min_sup_at].sup,
            min_sup_at,
            max_inf: rows[max_inf_at].inf,
            max_inf_at,
            rows,
        }
    }

    pub const CSV_HEADER: [&'static str; 4] = ["x", "sup_n", "argmax_n", "inf_n"];

    /// Rows for the `x, sup_n, argmax_n, inf_n` table.
    pub fn csv_rows(&self) -> impl Iterator<Item = [String; 4]> + '_ {
        self.rows.iter().map(|r| {
            [
                format!("{:e}", r.x),
                format!("{:e}", r.sup),
                r.argmax.to_string(),
                format!("{:e}", r.inf),
            ]
        })
    }
}
