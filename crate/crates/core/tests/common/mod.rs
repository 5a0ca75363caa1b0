//! Fields and generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::{Rng, RngCore};
use tfda_core::fieldio::{synth_field, ScalarField, SynthParams};

pub const FREE_DECAY_COT: &str = "β·₊ · α₋·₊(σ₋) · α₊·₋(σ₊) · β·₋";

pub const ENSTROPHY_COT: &str = "β₊̇·α₋₊̇(b₋₊(b₋₋{b₋₋{σ₋, σ₋}, b₋₋{b₋₋{b₋₋{σ₋,σ₋}, σ₋}, σ₋}},σ₊)) · a₊₊̇(σ₊) · α₊₋̇(b₊₊{b₊₊{σ₊, σ₊},σ₊}) · β₋̇";

/// `cos y + 0.3 cos x`: one essential band of each sign.
pub fn free_decay(n: usize) -> ScalarField<f64> {
    ScalarField::sample(n, |x: f64, y: f64| y.cos() + 0.3 * x.cos()).unwrap()
}

/// Periodic Gaussian bump of width `w` centred at `(cx, cy)`.
pub fn bump(x: f64, y: f64, cx: f64, cy: f64, w: f64) -> f64 {
    let wrap = |d: f64| d - TAU * (d / TAU).round();
    let (dx, dy) = (wrap(x - cx), wrap(y - cy));
    (-(dx * dx + dy * dy) / (2.0 * w * w)).exp()
}

/// A background band flow decorated with signed bumps so that the nested
/// `b₋₋` / `b₊₊` saddle structure of [`ENSTROPHY_COT`] appears.
#[allow(clippy::approx_constant)]
pub fn enstrophy_analog(n: usize) -> ScalarField<f64> {
    let gaps = [40.0_f64, 70.0, 35.0, 45.0, 55.0, 115.0];
    let wells: Vec<f64> = gaps
        .iter()
        .scan(0.0_f64, |acc, g| {
            let a = acc.to_radians();
            *acc += g;
            Some(a)
        })
        .collect();
    ScalarField::sample(n, |x: f64, y: f64| {
        let mut h = y.cos() + 0.3 * x.cos();
        h += 0.8 * bump(x, y, PI, PI, 0.35);
        for th in &wells {
            h -= 0.6 * bump(x, y, PI + th.cos(), PI + th.sin(), 0.25);
        }
        for k in [-1.0, 0.0, 1.0] {
            h += 0.6 * bump(x, y, k + 0.1 * k * k, 0.0, 0.3);
        }
        h + 0.6 * bump(x, y, 3.14, 1.57, 0.2)
    })
    .unwrap()
}

/// Low-mode synthetic field: `kmin = 1`, `kmax` cycling through 3..=5,
/// which gives between 14 and 40 Fourier modes.
pub fn low_mode(seed: u64, n: usize) -> ScalarField<f64> {
    let kmax = 3 + (seed % 3) as usize;
    synth_field(&SynthParams { nx: n, ny: n, exponent: -3.0, kmin: 1, kmax, seed }).unwrap()
}

/// Random COT text derived from the grammar, with randomized spelling.
pub struct CotWriter<'a, R: RngCore> {
    pub rng: &'a mut R,
    pub permissive: bool,
}

impl<R: RngCore> CotWriter<'_, R> {
    fn sign(&mut self, plus: bool) -> &'static str {
        match (plus, self.rng.random_bool(0.7)) {
            (true, true) => "₊",
            (true, false) => "+",
            (false, true) => "₋",
            (false, false) => "-",
        }
    }

    /// A sign carrying the dot, either as a prefix or a combining suffix.
    fn dotted(&mut self, plus: bool) -> String {
        let s = self.sign(plus);
        match self.rng.random_range(0..3) {
            0 => format!("·{s}"),
            1 => format!(".{s}"),
            _ => format!("{s}\u{307}"),
        }
    }

    fn sep(&mut self) -> &'static str {
        [" · ", "·", " * ", "*"][self.rng.random_range(0..4)]
    }

    fn head(&mut self, unicode: &'static str, ascii: &'static str) -> &'static str {
        if self.rng.random_bool(0.6) {
            unicode
        } else {
            ascii
        }
    }

    pub fn root(&mut self, depth: usize) -> String {
        let beta = if self.permissive { self.head("β", "λ") } else { self.head("β", "B") };
        let mut out = format!("{beta}{}{}", self.dotted(true), self.sep());
        if self.permissive && self.rng.random_bool(0.5) {
            let side = self.rng.random_bool(0.5);
            out += &self.chain(side, depth);
        } else {
            let alpha = self.head("α", "o");
            let (m, p) = (self.sign(false), self.dotted(true));
            out += &format!("{alpha}{m}{p}({}){}{}", self.branch(false, depth), self.sep(), self.chain(true, depth));
        }
        out
    }

    /// `plus` selects Chain₊.
    pub fn chain(&mut self, plus: bool, depth: usize) -> String {
        if depth == 0 || self.rng.random_bool(0.3) {
            let beta = self.head("β", "B");
            return format!("{beta}{}", self.dotted(false));
        }
        let d = depth - 1;
        let switch = self.rng.random_bool(0.4);
        let (head, branch, next) = if switch {
            // α with the branch on the current side, moving across.
            (self.head("α", "o"), plus, !plus)
        } else {
            ("a", self.rng.random_bool(0.5), plus)
        };
        let first = self.sign(branch);
        let second = self.dotted(next);
        let b = self.branch(branch, d);
        let sep = self.sep();
        let rest = self.chain(next, d);
        format!("{head}{first}{second}({b}){sep}{rest}")
    }

    pub fn branch(&mut self, plus: bool, depth: usize) -> String {
        let roll = self.rng.random_range(0..10);
        if depth == 0 || roll < 4 {
            let s = self.head("σ", "s");
            return format!("{s}{}", self.sign(plus));
        }
        let d = depth - 1;
        if self.permissive && roll == 9 {
            return if self.rng.random_bool(0.5) {
                let (a, b) = (self.dotted(plus), self.dotted(!plus));
                format!("a{a}{b}({}, {})", self.chain(plus, d), self.chain(!plus, d))
            } else {
                let alpha = self.head("α", "o");
                let (a, b) = (self.dotted(plus), self.dotted(plus));
                format!("{alpha}{a}{b}{{{}, {}}}", self.chain(plus, d), self.chain(plus, d))
            };
        }
        let (s, t) = (self.sign(plus), plus);
        if roll < 7 {
            let t2 = self.sign(t);
            format!("b{s}{t2}{{{},{}}}", self.branch(plus, d), self.branch(plus, d))
        } else {
            let t2 = self.sign(!t);
            format!("b{s}{t2}({}, {})", self.branch(plus, d), self.branch(!plus, d))
        }
    }
}
