//! Velocity, vorticity and energy spectra of a stream function.
//!
//! Conventions: `(u, v) = (∂ψ/∂y, -∂ψ/∂x)` and `ω = -Δψ`. Derivatives are
//! spectral by default; for even grids the unmatched Nyquist coefficient is
//! dropped so that derivatives of real fields stay real.

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::fieldio::ScalarField;
use crate::{Error, Real, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<T> {
    pub nx: usize,
    pub ny: usize,
    pub lx: T,
    pub ly: T,
    pub u: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Real> VectorField<T> {
    pub fn speed_squared(&self) -> Vec<T> {
        self.u.iter().zip(&self.v).map(|(&a, &b)| a * a + b * b).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Derivative {
    #[default]
    Spectral,
    /// Second-order centered differences, for data that is not band-limited.
    FiniteDifference,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBin<T> {
    pub k: T,
    pub e: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub dk: T,
    pub bins: Vec<SpectrumBin<T>>,
}

impl<T: Real> Spectrum<T> {
    /// `Σ E(k) Δk`, the mean kinetic energy.
    pub fn total(&self) -> T {
        self.bins.iter().map(|b| b.e).sum::<T>() * self.dk
    }

    /// CSV with header `k,E`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,E\n");
        for b in &self.bins {
            out.push_str(&format!("{},{:e}\n", b.k.as_f64(), b.e.as_f64()));
        }
        out
    }

    /// Least-squares slope of `log E` against `log k` over `k ∈ [lo, hi]`,
    /// skipping empty bins.
    pub fn loglog_slope(&self, lo: T, hi: T) -> Option<T> {
        let pts: Vec<(f64, f64)> = self
            .bins
            .iter()
            .filter(|b| b.k >= lo && b.k <= hi && b.k > T::zero() && b.e > T::zero())
            .map(|b| (b.k.as_f64().ln(), b.e.as_f64().ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        Some(T::lit(sxy / sxx))
    }
}

/// In-place 2-D FFT of a row-major `nx × ny` array. The inverse is
/// unnormalized, matching `rustfft`.
pub(crate) fn fft2<T: Real>(data: &mut [Complex<T>], nx: usize, ny: usize, inverse: bool) {
    let mut planner = FftPlanner::<T>::new();
    let (row, col) = if inverse {
        (planner.plan_fft_inverse(nx), planner.plan_fft_inverse(ny))
    } else {
        (planner.plan_fft_forward(nx), planner.plan_fft_forward(ny))
    };
    for r in data.chunks_mut(nx) {
        row.process(r);
    }
    let mut column = vec![Complex::new(T::zero(), T::zero()); ny];
    for i in 0..nx {
        for j in 0..ny {
            column[j] = data[j * nx + i];
        }
        col.process(&mut column);
        for j in 0..ny {
            data[j * nx + i] = column[j];
        }
    }
}

/// Signed integer wavenumber for FFT index `m`, `None` at the Nyquist index.
fn wavenumber(m: usize, n: usize) -> Option<i64> {
    if n % 2 == 0 && m == n / 2 {
        None
    } else if m <= n / 2 {
        Some(m as i64)
    } else {
        Some(m as i64 - n as i64)
    }
}

struct Spectral<T> {
    nx: usize,
    ny: usize,
    /// physical wave vector per coefficient, `None` where dropped
    k: Vec<Option<(T, T)>>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Spectral<T> {
    /// Forward transform normalized by the pixel count.
    fn of(field: &ScalarField<T>) -> Self {
        let (nx, ny) = (field.nx(), field.ny());
        let mut coeffs: Vec<Complex<T>> = field.values().iter().map(|&v| Complex::new(v, T::zero())).collect();
        fft2(&mut coeffs, nx, ny, false);
        let inv_n = T::one() / T::from_usize_lossy(nx * ny);
        coeffs.iter_mut().for_each(|c| *c = *c * inv_n);
        let sx = T::TAU() / field.lx();
        let sy = T::TAU() / field.ly();
        let mut k = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                k.push(match (wavenumber(i, nx), wavenumber(j, ny)) {
                    (Some(a), Some(b)) => Some((T::lit(a as f64) * sx, T::lit(b as f64) * sy)),
                    _ => None,
                });
            }
        }
        Self { nx, ny, k, coeffs }
    }

    /// Applies a multiplier `m(kx, ky)` and transforms back to real space.
    fn apply(&self, m: impl Fn(T, T) -> Complex<T>) -> Vec<T> {
        let mut out: Vec<Complex<T>> = self
            .coeffs
            .iter()
            .zip(&self.k)
            .map(|(&c, k)| match k {
                Some((kx, ky)) => c * m(*kx, *ky),
                None => Complex::new(T::zero(), T::zero()),
            })
            .collect();
        fft2(&mut out, self.nx, self.ny, true);
        out.into_iter().map(|c| c.re).collect()
    }
}

fn centered_difference<T: Real>(f: &ScalarField<T>, along_x: bool) -> Vec<T> {
    let (nx, ny) = (f.nx(), f.ny());
    let h = if along_x {
        f.lx() / T::from_usize_lossy(nx)
    } else {
        f.ly() / T::from_usize_lossy(ny)
    };
    let two_h = h + h;
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            let d = if along_x {
                f.at(i + 1, j) - f.at(i - 1, j)
            } else {
                f.at(i, j + 1) - f.at(i, j - 1)
            };
            out.push(d / two_h);
        }
    }
    out
}

pub fn velocity_from_stream<T: Real>(psi: &ScalarField<T>) -> VectorField<T> {
    velocity_with(psi, Derivative::Spectral)
}

pub fn velocity_with<T: Real>(psi: &ScalarField<T>, method: Derivative) -> VectorField<T> {
    let (u, v) = match method {
        Derivative::Spectral => {
            let s = Spectral::of(psi);
            let i = Complex::new(T::zero(), T::one());
            let u = s.apply(|_, ky| i * ky);
            let v = s.apply(|kx, _| -(i * kx));
            (u, v)
        }
        Derivative::FiniteDifference => {
            let u = centered_difference(psi, false);
            let v = centered_difference(psi, true).into_iter().map(|d| -d).collect();
            (u, v)
        }
    };
    VectorField { nx: psi.nx(), ny: psi.ny(), lx: psi.lx(), ly: psi.ly(), u, v }
}

pub fn vorticity_from_stream<T: Real>(psi: &ScalarField<T>) -> ScalarField<T> {
    vorticity_with(psi, Derivative::Spectral)
}

pub fn vorticity_with<T: Real>(psi: &ScalarField<T>, method: Derivative) -> ScalarField<T> {
    let values = match method {
        Derivative::Spectral => Spectral::of(psi).apply(|kx, ky| Complex::new(kx * kx + ky * ky, T::zero())),
        Derivative::FiniteDifference => {
            let hx = psi.lx() / T::from_usize_lossy(psi.nx());
            let hy = psi.ly() / T::from_usize_lossy(psi.ny());
            let two = T::lit(2.0);
            let mut out = Vec::with_capacity(psi.len());
            for j in 0..psi.ny() as isize {
                for i in 0..psi.nx() as isize {
                    let c = psi.at(i, j);
                    let dxx = (psi.at(i + 1, j) - two * c + psi.at(i - 1, j)) / (hx * hx);
                    let dyy = (psi.at(i, j + 1) - two * c + psi.at(i, j - 1)) / (hy * hy);
                    out.push(-(dxx + dyy));
                }
            }
            out
        }
    };
    psi.with_values(values).expect("same grid")
}

/// `E(k) = Σ_{k ≤ |k| < k+Δk} ½|û(k)|² / Δk`, with `û` the Fourier
/// coefficients of the velocity normalized so that Parseval reads
/// `Σ E Δk = ½⟨|u|²⟩`. Bins start at `k = 0` and are labelled by their
/// lower edge.
pub fn energy_spectrum<T: Real>(psi: &ScalarField<T>, dk: T) -> Result<Spectrum<T>> {
    if !(dk > T::zero()) {
        return Err(Error::Argument(format!("bin width must be positive, got {dk}")));
    }
    let s = Spectral::of(psi);
    let kmax = s
        .k
        .iter()
        .flatten()
        .map(|&(kx, ky)| (kx * kx + ky * ky).sqrt())
        .fold(T::zero(), T::max);
    let nbins = (kmax / dk).floor().to_usize().unwrap_or(0) + 1;
    let mut e = vec![T::zero(); nbins];
    let half = T::lit(0.5);
    for (c, k) in s.coeffs.iter().zip(&s.k) {
        if let Some((kx, ky)) = *k {
            let k2 = kx * kx + ky * ky;
            // |û|² = |i ky ψ̂|² + |i kx ψ̂|²
            let energy = half * k2 * c.norm_sqr();
            let b = ((k2.sqrt() / dk).floor().to_usize().unwrap_or(0)).min(nbins - 1);
            e[b] = e[b] + energy / dk;
        }
    }
    let bins = e
        .into_iter()
        .enumerate()
        .map(|(b, e)| SpectrumBin { k: T::from_usize_lossy(b) * dk, e })
        .collect();
    Ok(Spectrum { dk, bins })
}

/// `ω²` per pixel.
pub fn pointwise_enstrophy<T: Real>(psi: &ScalarField<T>) -> ScalarField<T> {
    vorticity_from_stream(psi).map(|w| w * w)
}

/// `|u|²` per pixel (no factor ½).
pub fn pointwise_energy<T: Real>(psi: &ScalarField<T>) -> ScalarField<T> {
    psi.with_values(velocity_from_stream(psi).speed_squared()).expect("same grid")
}
