//! Terminal vortices: the domains attached to surviving `σ±` leaves.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::calculus::{velocity_from_stream, vorticity_from_stream, VectorField};
use crate::cot::CotTree;
use crate::cotlang::{Sign, Symbol};
use crate::fieldio::ScalarField;
use crate::reeb::Region;
use crate::{Error, Real, Result};

pub const CSV_HEADER: &str = "id,orientation,area,enstrophy,energy,leaf_value,saddle_value";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Counter-clockwise, around a maximum of the stream function.
    Plus,
    Minus,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Plus => "plus",
            Orientation::Minus => "minus",
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Orientation::Plus),
            "minus" | "-" => Ok(Orientation::Minus),
            _ => Err(Error::Argument(format!("unknown orientation {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerminalVortex<T> {
    pub id: usize,
    pub orientation: Orientation,
    /// Sorted `(i, j)` pixels.
    pub pixels: Vec<(usize, usize)>,
    /// Fraction of the domain covered.
    pub area: T,
    pub enstrophy: T,
    pub energy: T,
    pub leaf_value: T,
    pub saddle_value: T,
}

/// One vortex per `σ` leaf of a filtered tree whose edge spans more than
/// `eps0`. Quantities are left at zero; see [`vortex_quantities`].
pub fn extract_terminal_vortices<T: Real>(
    cot: &CotTree<T>,
    regions: &[Region<T>],
    field: &ScalarField<T>,
    eps0: T,
) -> Vec<TerminalVortex<T>> {
    let total = T::from_usize_lossy(field.len());
    let mut out = Vec::new();
    for node in &cot.nodes {
        let Symbol::Sigma(sign) = node.symbol else { continue };
        let (Some(leaf_value), Some(parent)) = (node.value, node.parent) else { continue };
        let Some(saddle_value) = cot.nodes[parent].value else { continue };
        if !((leaf_value - saddle_value).abs() > eps0) {
            continue;
        }
        let mut pixels: Vec<(usize, usize)> = node
            .regions
            .iter()
            .flat_map(|&r| regions[r].pixels.iter().map(|&p| field.pixel(p)))
            .chain(node.absorbed.iter().copied())
            .collect();
        pixels.sort_unstable_by_key(|&(i, j)| (j, i));
        pixels.dedup();
        out.push(TerminalVortex {
            id: out.len(),
            orientation: if sign == Sign::Plus { Orientation::Plus } else { Orientation::Minus },
            area: T::from_usize_lossy(pixels.len()) / total,
            pixels,
            enstrophy: T::zero(),
            energy: T::zero(),
            leaf_value,
            saddle_value,
        });
    }
    out
}

/// Fills in enstrophy `Σω²/N` and energy `Σ|u|²/N` over the vortex pixels.
pub fn vortex_quantities<T: Real>(
    mut v: TerminalVortex<T>,
    omega: &ScalarField<T>,
    vel: &VectorField<T>,
) -> Result<TerminalVortex<T>> {
    if omega.nx() != vel.nx || omega.ny() != vel.ny {
        return Err(Error::Argument(format!(
            "vorticity grid {}x{} differs from velocity grid {}x{}",
            omega.nx(),
            omega.ny(),
            vel.nx,
            vel.ny
        )));
    }
    if let Some(&(i, j)) = v.pixels.iter().find(|&&(i, j)| i >= omega.nx() || j >= omega.ny()) {
        return Err(Error::Argument(format!("vortex pixel ({i}, {j}) outside the {}x{} grid", omega.nx(), omega.ny())));
    }
    let total = T::from_usize_lossy(omega.len());
    let (mut z, mut e) = (T::zero(), T::zero());
    for &(i, j) in &v.pixels {
        let k = omega.index(i, j);
        z = z + omega.values()[k] * omega.values()[k];
        e = e + vel.u[k] * vel.u[k] + vel.v[k] * vel.v[k];
    }
    v.enstrophy = z / total;
    v.energy = e / total;
    Ok(v)
}

/// Quantities for every vortex, with derivatives taken spectrally from `psi`.
pub fn with_quantities<T: Real>(vortices: Vec<TerminalVortex<T>>, psi: &ScalarField<T>) -> Result<Vec<TerminalVortex<T>>> {
    let omega = vorticity_from_stream(psi);
    let vel = velocity_from_stream(psi);
    vortices.into_iter().map(|v| vortex_quantities(v, &omega, &vel)).collect()
}

pub fn vortices_to_csv<T: Real>(vortices: &[TerminalVortex<T>]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for v in vortices {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            v.id,
            v.orientation.as_str(),
            v.area.as_f64(),
            v.enstrophy.as_f64(),
            v.energy.as_f64(),
            v.leaf_value.as_f64(),
            v.saddle_value.as_f64()
        );
    }
    out
}
