//! Doubly periodic scalar fields: storage, file formats, coarse-graining,
//! normalization and synthetic spectra.
//!
//! Pixel `(i, j)` samples the field at `(i * lx / nx, j * ly / ny)`; storage
//! is row-major with row `j = 0` (the bottom of the domain) first. The
//! periodic boundary is implicit: no row or column is duplicated.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::fft2;
use crate::{Error, Real, Result};

const MAGIC: &[u8; 4] = b"TFD1";
const HEADER_LEN: usize = 28;

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField<T> {
    nx: usize,
    ny: usize,
    lx: T,
    ly: T,
    values: Vec<T>,
}

impl<T: Real> ScalarField<T> {
    pub fn new(nx: usize, ny: usize, lx: T, ly: T, values: Vec<T>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Argument(format!("empty grid {nx}x{ny}")));
        }
        if values.len() != nx * ny {
            return Err(Error::Argument(format!(
                "expected {} values for a {nx}x{ny} grid, got {}",
                nx * ny,
                values.len()
            )));
        }
        if !(lx > T::zero() && ly > T::zero() && lx.is_finite() && ly.is_finite()) {
            return Err(Error::Argument(format!("domain size must be positive, got {lx}x{ly}")));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(format!("non-finite value at pixel ({}, {})", k % nx, k / nx)));
        }
        Ok(Self { nx, ny, lx, ly, values })
    }

    /// Field on the default `2π × 2π` domain.
    pub fn from_values(nx: usize, ny: usize, values: Vec<T>) -> Result<Self> {
        Self::new(nx, ny, T::TAU(), T::TAU(), values)
    }

    /// Samples `f(x, y)` on an `nx × ny` grid over `[0, lx) × [0, ly)`.
    pub fn from_fn(nx: usize, ny: usize, lx: T, ly: T, mut f: impl FnMut(T, T) -> T) -> Result<Self> {
        let dx = lx / T::from_usize_lossy(nx);
        let dy = ly / T::from_usize_lossy(ny);
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = T::from_usize_lossy(j) * dy;
            for i in 0..nx {
                values.push(f(T::from_usize_lossy(i) * dx, y));
            }
        }
        Self::new(nx, ny, lx, ly, values)
    }

    /// Samples `f(x, y)` on the default `2π × 2π` domain.
    pub fn sample(n: usize, f: impl FnMut(T, T) -> T) -> Result<Self> {
        Self::from_fn(n, n, T::TAU(), T::TAU(), f)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> T {
        self.lx
    }

    pub fn ly(&self) -> T {
        self.ly
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn pixel(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    /// Value at `(i, j)` with periodic wrap.
    #[inline]
    pub fn at(&self, i: isize, j: isize) -> T {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        self.values[j * self.nx + i]
    }

    pub fn min_max(&self) -> (T, T) {
        self.values
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::from_usize_lossy(self.values.len())
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<T>) -> Result<Self> {
        Self::new(self.nx, self.ny, self.lx, self.ly, values)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    /// Cyclic shift: output pixel `(i + di, j + dj)` holds input pixel `(i, j)`.
    pub fn rolled(&self, di: isize, dj: isize) -> Self {
        let mut values = vec![T::zero(); self.values.len()];
        for j in 0..self.ny {
            for i in 0..self.nx {
                let ti = (i as isize + di).rem_euclid(self.nx as isize) as usize;
                let tj = (j as isize + dj).rem_euclid(self.ny as isize) as usize;
                values[tj * self.nx + ti] = self.values[j * self.nx + i];
            }
        }
        Self { values, ..self.clone() }
    }

    /// Swaps the axes: output `(i, j)` holds input `(j, i)`.
    pub fn transposed(&self) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.nx {
            for i in 0..self.ny {
                values.push(self.values[i * self.nx + j]);
            }
        }
        Self { nx: self.ny, ny: self.nx, lx: self.ly, ly: self.lx, values }
    }

    pub fn same_grid<U>(&self, other: &ScalarField<U>) -> bool {
        self.nx == other.nx && self.ny == other.ny
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldFormat {
    Binary,
    Csv,
}

impl FieldFormat {
    /// `.csv` is text, anything else is the binary format.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => FieldFormat::Csv,
            _ => FieldFormat::Binary,
        }
    }
}

pub fn load_field<T: Real>(path: impl AsRef<Path>, format: FieldFormat) -> Result<ScalarField<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    match format {
        FieldFormat::Binary => decode_binary(&bytes),
        FieldFormat::Csv => {
            let text = String::from_utf8(bytes)
                .map_err(|e| Error::format(format!("byte {}", e.utf8_error().valid_up_to()), "invalid UTF-8"))?;
            decode_csv(&text)
        }
    }
}

pub fn save_field<T: Real>(field: &ScalarField<T>, path: impl AsRef<Path>, format: FieldFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = match format {
        FieldFormat::Binary => encode_binary(field),
        FieldFormat::Csv => encode_csv(field).into_bytes(),
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn encode_binary<T: Real>(field: &ScalarField<T>) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * field.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(field.nx as u32).to_le_bytes());
    out.extend_from_slice(&(field.ny as u32).to_le_bytes());
    out.extend_from_slice(&field.lx.as_f64().to_le_bytes());
    out.extend_from_slice(&field.ly.as_f64().to_le_bytes());
    for v in &field.values {
        out.extend_from_slice(&v.as_f64().to_le_bytes());
    }
    out
}

pub fn decode_binary<T: Real>(bytes: &[u8]) -> Result<ScalarField<T>> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::format(format!("byte {}", bytes.len()), "truncated header"));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::format("byte 0", "bad magic"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let (nx, ny) = (u32_at(4), u32_at(8));
    let (lx, ly) = (f64_at(12), f64_at(20));
    if nx == 0 || ny == 0 {
        return Err(Error::format("byte 4", format!("empty grid {nx}x{ny}")));
    }
    for (offset, l) in [(12, lx), (20, ly)] {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::format(format!("byte {offset}"), format!("invalid domain size {l}")));
        }
    }
    let expected = nx
        .checked_mul(ny)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| n.checked_add(HEADER_LEN))
        .ok_or_else(|| Error::format("byte 4", "grid too large"))?;
    if bytes.len() != expected {
        return Err(Error::format(
            format!("byte {}", bytes.len().min(expected)),
            format!("payload length {} does not match {nx}x{ny} grid ({expected} bytes)", bytes.len()),
        ));
    }
    let mut values = Vec::with_capacity(nx * ny);
    for k in 0..nx * ny {
        let offset = HEADER_LEN + 8 * k;
        let v = f64_at(offset);
        if !v.is_finite() {
            return Err(Error::format(format!("byte {offset}"), "non-finite value"));
        }
        values.push(T::lit(v));
    }
    ScalarField::new(nx, ny, T::lit(lx), T::lit(ly), values)
}

pub fn encode_csv<T: Real>(field: &ScalarField<T>) -> String {
    let mut out = String::new();
    for row in field.values.chunks(field.nx) {
        let line: Vec<String> = row.iter().map(|v| format!("{:e}", v.as_f64())).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// `ny` lines of `nx` comma-separated numbers, row `j = 0` first; the domain
/// is taken to be `2π × 2π`.
pub fn decode_csv<T: Real>(text: &str) -> Result<ScalarField<T>> {
    let mut values = Vec::new();
    let mut nx = None;
    let mut ny = 0;
    for (row, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut count = 0;
        for cell in line.split(',') {
            let v: f64 = cell
                .trim()
                .parse()
                .map_err(|_| Error::format(format!("row {row}"), format!("cannot parse {:?} as a number", cell.trim())))?;
            if !v.is_finite() {
                return Err(Error::format(format!("row {row}"), "non-finite value"));
            }
            values.push(T::lit(v));
            count += 1;
        }
        match nx {
            None => nx = Some(count),
            Some(n) if n != count => {
                return Err(Error::format(format!("row {row}"), format!("expected {n} columns, found {count}")));
            }
            _ => {}
        }
        ny += 1;
    }
    let nx = nx.ok_or_else(|| Error::format("row 0", "empty file"))?;
    ScalarField::from_values(nx, ny, values)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarseMethod {
    #[default]
    Mean,
    Subsample,
}

/// Block-reduces the field by `factor` along both axes.
pub fn coarse_grain<T: Real>(field: &ScalarField<T>, factor: usize, method: CoarseMethod) -> Result<ScalarField<T>> {
    if factor == 0 || field.nx % factor != 0 || field.ny % factor != 0 {
        return Err(Error::Argument(format!(
            "coarse factor {factor} does not divide the {}x{} grid",
            field.nx, field.ny
        )));
    }
    if factor == 1 {
        return Ok(field.clone());
    }
    let (cx, cy) = (field.nx / factor, field.ny / factor);
    let inv = T::one() / T::from_usize_lossy(factor * factor);
    let mut values = Vec::with_capacity(cx * cy);
    for bj in 0..cy {
        for bi in 0..cx {
            let v = match method {
                CoarseMethod::Subsample => field.values[bj * factor * field.nx + bi * factor],
                CoarseMethod::Mean => {
                    let mut acc = T::zero();
                    for j in bj * factor..(bj + 1) * factor {
                        let row = &field.values[j * field.nx..(j + 1) * field.nx];
                        acc = acc + row[bi * factor..(bi + 1) * factor].iter().copied().sum::<T>();
                    }
                    acc * inv
                }
            };
            values.push(v);
        }
    }
    ScalarField::new(cx, cy, field.lx, field.ly, values)
}

/// Divides every value by the field's extent `max - min` (no shift).
pub fn normalize<T: Real>(field: &ScalarField<T>) -> Result<ScalarField<T>> {
    let (lo, hi) = field.min_max();
    let extent = hi - lo;
    if !(extent > T::zero()) {
        return Err(Error::Degenerate("constant field cannot be normalized".into()));
    }
    Ok(field.map(|v| v / extent))
}

/// Parameters of a random-phase field with a prescribed energy spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub nx: usize,
    pub ny: usize,
    pub exponent: f64,
    pub kmin: usize,
    pub kmax: usize,
    pub seed: u64,
}

/// `ψ = Σ a_k cos(k·x + φ_k)` over wave vectors with `kmin ≤ |k| ≤ kmax`.
///
/// Phases are uniform and drawn from a seeded ChaCha stream in a fixed
/// wave-vector order. Amplitudes are set per unit-width shell so that the
/// energy spectrum of `ψ` is exactly `E(k) = k^exponent` at every populated
/// integer shell.
pub fn synth_field<T: Real>(p: &SynthParams) -> Result<ScalarField<T>> {
    let SynthParams { nx, ny, exponent, kmin, kmax, seed } = *p;
    if kmin < 1 || kmin > kmax || 2 * kmax >= nx.min(ny) {
        return Err(Error::Argument(format!(
            "need 1 <= kmin <= kmax < min(nx, ny)/2, got kmin={kmin} kmax={kmax} on {nx}x{ny}"
        )));
    }
    let k_max = kmax as i64;
    // half plane: kx > 0, or kx == 0 and ky > 0
    let modes: Vec<(i64, i64)> = (0..=k_max)
        .flat_map(|kx| (-k_max..=k_max).map(move |ky| (kx, ky)))
        .filter(|&(kx, ky)| kx > 0 || ky > 0)
        .filter(|&(kx, ky)| {
            let k2 = kx * kx + ky * ky;
            k2 >= (kmin * kmin) as i64 && k2 <= k_max * k_max
        })
        .collect();
    if modes.is_empty() {
        return Err(Error::Argument("empty wavenumber shell".into()));
    }
    let shell = |kx: i64, ky: i64| (((kx * kx + ky * ky) as f64).sqrt() + 1e-9).floor() as usize;
    let mut per_shell = vec![0usize; kmax + 1];
    for &(kx, ky) in &modes {
        per_shell[shell(kx, ky)] += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = vec![Complex::new(T::zero(), T::zero()); nx * ny];
    for &(kx, ky) in &modes {
        let phase: f64 = rng.random::<f64>() * TAU;
        let b = shell(kx, ky);
        let k2 = (kx * kx + ky * ky) as f64;
        // mode energy a²|k|²/4, shared evenly by the shell's modes
        let amp = (4.0 * (b as f64).powf(exponent) / (k2 * per_shell[b] as f64)).sqrt();
        let half = Complex::from_polar(0.5 * amp, phase);
        let ix = kx.rem_euclid(nx as i64) as usize;
        let iy = ky.rem_euclid(ny as i64) as usize;
        let jx = (-kx).rem_euclid(nx as i64) as usize;
        let jy = (-ky).rem_euclid(ny as i64) as usize;
        spectrum[iy * nx + ix] = Complex::new(T::lit(half.re), T::lit(half.im));
        spectrum[jy * nx + jx] = Complex::new(T::lit(half.re), T::lit(-half.im));
    }
    fft2(&mut spectrum, nx, ny, true);
    ScalarField::from_values(nx, ny, spectrum.into_iter().map(|c| c.re).collect())
}
