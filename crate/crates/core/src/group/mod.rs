//! Concrete compact groups, their unitary duals, quadrature grids and the
//! Peter-Weyl transform pair.
//!
//! Matrix coefficients of the irreducible representations are orthogonal
//! with respect to the normalized Haar measure, and the transform follows
//! the convention
//!
//! ```text
//! f^(xi) = ∫ f(x) xi(x)^* dx,      f(x) = Σ d_xi Tr(xi(x) f^(xi)).
//! ```
//!
//! Tori use characters `e^{i k·x}`; SU(2) uses Wigner D-matrices in
//! Z-Y-Z Euler angles with `alpha ∈ [0, 2π)`, `beta ∈ [0, π]` and
//! `gamma ∈ [0, 4π)`, which covers the group once.

mod field;
mod grid;
mod quadrature;
pub mod su2;
mod transform;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use field::{GridField, SpectralField};
pub use grid::{build_grid, QuadratureGrid};
pub use quadrature::gauss_legendre;
pub use transform::{plancherel_inner, plancherel_norm, plancherel_norm_sq, Harmonics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupId {
    Torus1,
    Torus2,
    Torus3,
    Su2,
}

impl GroupId {
    /// Topological dimension of the group manifold.
    pub fn dimension(self) -> usize {
        match self {
            GroupId::Torus1 => 1,
            GroupId::Torus2 => 2,
            GroupId::Torus3 => 3,
            GroupId::Su2 => 3,
        }
    }

    pub fn is_torus(self) -> bool {
        !matches!(self, GroupId::Su2)
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupId::Torus1 => "torus1",
            GroupId::Torus2 => "torus2",
            GroupId::Torus3 => "torus3",
            GroupId::Su2 => "su2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "torus1" | "t1" => Ok(GroupId::Torus1),
            "torus2" | "t2" => Ok(GroupId::Torus2),
            "torus3" | "t3" => Ok(GroupId::Torus3),
            "su2" => Ok(GroupId::Su2),
            other => Err(Error::InvalidParameter(format!("unknown group `{other}`"))),
        }
    }
}

/// A group from the catalog together with its spectral truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub group: GroupId,
    /// Largest admitted `λ_ξ = sqrt(λ_ξ²)`.
    pub truncation: f64,
}

impl GroupSpec {
    pub fn new(group: GroupId, truncation: f64) -> Result<Self> {
        if !(truncation > 0.0 && truncation.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "truncation must be positive and finite, got {truncation}"
            )));
        }
        Ok(GroupSpec { group, truncation })
    }

    pub fn dimension(&self) -> usize {
        self.group.dimension()
    }
}

/// Label of an irreducible representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModeIndex {
    /// Character `e^{i k·x}` of a torus.
    Torus(Vec<i32>),
    /// Spin `ℓ = two_l / 2` representation of SU(2).
    Su2 { two_l: u32 },
}

impl ModeIndex {
    pub fn is_trivial(&self) -> bool {
        match self {
            ModeIndex::Torus(k) => k.iter().all(|&c| c == 0),
            ModeIndex::Su2 { two_l } => *two_l == 0,
        }
    }
}

impl Ord for ModeIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ModeIndex::Torus(a), ModeIndex::Torus(b)) => a.cmp(b),
            (ModeIndex::Su2 { two_l: a }, ModeIndex::Su2 { two_l: b }) => a.cmp(b),
            (ModeIndex::Torus(_), ModeIndex::Su2 { .. }) => Ordering::Less,
            (ModeIndex::Su2 { .. }, ModeIndex::Torus(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for ModeIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeIndex::Torus(k) => {
                let parts: Vec<String> = k.iter().map(|c| c.to_string()).collect();
                write!(f, "k=({})", parts.join(","))
            }
            ModeIndex::Su2 { two_l } if two_l % 2 == 0 => write!(f, "l={}", two_l / 2),
            ModeIndex::Su2 { two_l } => write!(f, "l={}/2", two_l),
        }
    }
}

/// One class `[ξ]` of the unitary dual.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    pub index: ModeIndex,
    /// Representation dimension `d_ξ`.
    pub dim: usize,
    /// Laplace-Beltrami eigenvalue `λ_ξ²`.
    pub lambda_sq: f64,
}

impl Mode {
    pub fn lambda(&self) -> f64 {
        self.lambda_sq.sqrt()
    }

    pub fn is_trivial(&self) -> bool {
        self.index.is_trivial()
    }
}

/// Ordered set of modes together with the offsets of their coefficient
/// blocks in a flat `SpectralField` buffer.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSet {
    modes: Vec<Mode>,
    offsets: Vec<usize>,
    len: usize,
}

impl ModeSet {
    pub fn new(modes: Vec<Mode>) -> Self {
        let mut offsets = Vec::with_capacity(modes.len());
        let mut len = 0;
        for m in &modes {
            offsets.push(len);
            len += m.dim * m.dim;
        }
        ModeSet {
            modes,
            offsets,
            len,
        }
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Total number of complex coefficients.
    pub fn coefficient_count(&self) -> usize {
        self.len
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Coefficient range of mode `i` in the flat buffer.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let d = self.modes[i].dim;
        self.offsets[i]..self.offsets[i] + d * d
    }

    pub fn trivial_position(&self) -> usize {
        self.modes
            .iter()
            .position(Mode::is_trivial)
            .expect("every mode set contains the trivial representation")
    }

    pub fn position(&self, index: &ModeIndex) -> Option<usize> {
        self.modes.iter().position(|m| &m.index == index)
    }

    /// `λ_ξ²` for every coefficient of the flat buffer.
    pub fn coefficient_lambda_sq(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len);
        for m in &self.modes {
            out.extend(std::iter::repeat_n(m.lambda_sq, m.dim * m.dim));
        }
        out
    }
}

fn admitted(lambda_sq: f64, truncation: f64) -> bool {
    lambda_sq <= truncation * truncation * (1.0 + 1e-12)
}

/// All modes with `λ_ξ ≤ Λ`, sorted by eigenvalue and then by index.
pub fn enumerate_modes(spec: &GroupSpec) -> Vec<Mode> {
    let mut modes = match spec.group {
        GroupId::Su2 => {
            let mut out = Vec::new();
            let mut two_l = 0u32;
            loop {
                let l = two_l as f64 / 2.0;
                let lambda_sq = l * (l + 1.0);
                if !admitted(lambda_sq, spec.truncation) {
                    break;
                }
                out.push(Mode {
                    index: ModeIndex::Su2 { two_l },
                    dim: two_l as usize + 1,
                    lambda_sq,
                });
                two_l += 1;
            }
            out
        }
        torus => {
            let n = torus.dimension();
            let kmax = spec.truncation.floor() as i32;
            let mut out = Vec::new();
            let side = (2 * kmax + 1) as usize;
            for flat in 0..side.pow(n as u32) {
                let mut rest = flat;
                let mut k = vec![0i32; n];
                for c in k.iter_mut().rev() {
                    *c = (rest % side) as i32 - kmax;
                    rest /= side;
                }
                let norm_sq: i64 = k.iter().map(|&c| (c as i64) * (c as i64)).sum();
                let lambda_sq = norm_sq as f64;
                if admitted(lambda_sq, spec.truncation) {
                    out.push(Mode {
                        index: ModeIndex::Torus(k),
                        dim: 1,
                        lambda_sq,
                    });
                }
            }
            out
        }
    };
    modes.sort_by(|a, b| {
        a.lambda_sq
            .partial_cmp(&b.lambda_sq)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.index.cmp(&b.index))
    });
    modes
}

pub(crate) fn mode_set(spec: &GroupSpec) -> Arc<ModeSet> {
    Arc::new(ModeSet::new(enumerate_modes(spec)))
}
