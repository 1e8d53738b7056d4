use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::GridLayout;
use super::su2::wigner_small_d_matrix;
use super::{
    build_grid, mode_set, GridField, GroupSpec, ModeIndex, ModeSet, QuadratureGrid, SpectralField,
};
use crate::error::Result;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Mode set, quadrature grid and precomputed tables for one group.
///
/// Both transforms are separable: partial DFTs over the periodic
/// coordinates followed, on SU(2), by a Gauss-Legendre sum in `β`.
#[derive(Clone, Debug)]
pub struct Harmonics {
    spec: GroupSpec,
    modes: Arc<ModeSet>,
    grid: QuadratureGrid,
    tables: Tables,
}

#[derive(Clone, Debug)]
enum Tables {
    Torus(TorusTables),
    Su2(Su2Tables),
}

#[derive(Clone, Debug)]
struct TorusTables {
    n: usize,
    per_axis: usize,
    kmax: usize,
    /// `e^{-i k x_j} / N`, indexed `[k + K][j]`.
    fwd: Vec<Complex64>,
    /// `e^{i k x_j}`, indexed `[j][k + K]`.
    inv: Vec<Complex64>,
    /// Flat index into the `(2K+1)^n` frequency cube for every mode.
    cube_index: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Su2Tables {
    two_j: usize,
    n_alpha: usize,
    n_beta: usize,
    n_gamma: usize,
    beta_weights: Vec<f64>,
    /// `e^{i a α} / N_α`, indexed `[2a + J][ia]`.
    alpha_fwd: Vec<Complex64>,
    /// `e^{i b γ} / N_γ`, indexed `[2b + J][ig]`.
    gamma_fwd: Vec<Complex64>,
    /// `d^ℓ(β_k)` blocks, indexed `[mode][k]`.
    small_d: Vec<Vec<Vec<f64>>>,
    two_l: Vec<usize>,
}

impl Harmonics {
    pub fn new(spec: GroupSpec) -> Self {
        let modes = mode_set(&spec);
        let grid = build_grid(&spec);
        let tables = match &grid.layout {
            GridLayout::Torus { n, per_axis } => {
                Tables::Torus(torus_tables(&modes, *n, *per_axis, &spec))
            }
            GridLayout::Su2 {
                n_alpha,
                n_beta,
                n_gamma,
                betas,
                beta_weights,
            } => Tables::Su2(su2_tables(
                &modes,
                *n_alpha,
                *n_beta,
                *n_gamma,
                betas,
                beta_weights,
            )),
        };
        Harmonics {
            spec,
            modes,
            grid,
            tables,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn grid_len(&self) -> usize {
        self.grid.len()
    }

    pub fn zero_spectral(&self) -> SpectralField {
        SpectralField::zeros(self.modes.clone())
    }

    /// `f^(ξ) = Σ_x w_x f(x) ξ(x)^*` for every admitted mode.
    ///
    /// The first grid value is transformed analytically, so a constant grid
    /// has exactly zero non-trivial coefficients.
    pub fn forward(&self, f: &GridField) -> Result<SpectralField> {
        f.check_len(self.grid.len())?;
        let Some(&c) = f.values().first() else {
            return Ok(self.zero_spectral());
        };
        let shifted: Vec<Complex64> = f.values().iter().map(|v| v - c).collect();
        let mut data = match &self.tables {
            Tables::Torus(t) => t.forward(&shifted, &self.modes),
            Tables::Su2(t) => t.forward(&shifted, &self.modes),
        };
        data[self.modes.offset(self.modes.trivial_position())] += c;
        SpectralField::from_data(self.modes.clone(), data)
    }

    /// Peter-Weyl series `Σ d_ξ Tr(ξ(x) F(ξ))` at every grid point.
    pub fn inverse(&self, field: &SpectralField) -> Result<GridField> {
        if !(Arc::ptr_eq(field.modes(), &self.modes) || **field.modes() == *self.modes) {
            return Err(crate::Error::ModeSetMismatch);
        }
        let values = match &self.tables {
            Tables::Torus(t) => t.inverse(field.data()),
            Tables::Su2(t) => t.inverse(field),
        };
        Ok(GridField::new(values))
    }

    /// Weighted grid sum, i.e. the Haar integral of a band-limited product.
    pub fn integrate(&self, f: &GridField) -> Result<Complex64> {
        f.check_len(self.grid.len())?;
        Ok(f.values()
            .iter()
            .zip(&self.grid.weights)
            .map(|(v, w)| v * w)
            .sum())
    }

    /// Grid-quadrature `L²` norm.
    pub fn grid_l2_norm(&self, f: &GridField) -> Result<f64> {
        f.check_len(self.grid.len())?;
        Ok(f.values()
            .iter()
            .zip(&self.grid.weights)
            .map(|(v, w)| v.norm_sqr() * w)
            .sum::<f64>()
            .sqrt())
    }
}

/// `(Σ_ξ d_ξ ‖F(ξ)‖²_HS)^{1/2}`.
pub fn plancherel_norm(field: &SpectralField) -> f64 {
    plancherel_norm_sq(field).sqrt()
}

pub fn plancherel_norm_sq(field: &SpectralField) -> f64 {
    field
        .modes()
        .modes()
        .iter()
        .enumerate()
        .map(|(i, m)| m.dim as f64 * field.block(i).iter().map(|c| c.norm_sqr()).sum::<f64>())
        .sum()
}

/// Plancherel inner product `Σ d_ξ Tr(G(ξ)^* F(ξ))`.
pub fn plancherel_inner(f: &SpectralField, g: &SpectralField) -> Complex64 {
    f.modes()
        .modes()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let s: Complex64 = f
                .block(i)
                .iter()
                .zip(g.block(i))
                .map(|(a, b)| b.conj() * a)
                .sum();
            s * m.dim as f64
        })
        .sum()
}

fn torus_tables(modes: &ModeSet, n: usize, per_axis: usize, spec: &GroupSpec) -> TorusTables {
    let kmax = spec.truncation.floor() as usize;
    let side = 2 * kmax + 1;
    let mut fwd = vec![ZERO; side * per_axis];
    let mut inv = vec![ZERO; per_axis * side];
    for ki in 0..side {
        let k = ki as f64 - kmax as f64;
        for j in 0..per_axis {
            let x = 2.0 * PI * j as f64 / per_axis as f64;
            fwd[ki * per_axis + j] = Complex64::from_polar(1.0 / per_axis as f64, -k * x);
            inv[j * side + ki] = Complex64::from_polar(1.0, k * x);
        }
    }
    let cube_index = modes
        .modes()
        .iter()
        .map(|m| match &m.index {
            ModeIndex::Torus(k) => k
                .iter()
                .fold(0usize, |acc, &c| acc * side + (c + kmax as i32) as usize),
            ModeIndex::Su2 { .. } => unreachable!("torus mode set"),
        })
        .collect();
    TorusTables {
        n,
        per_axis,
        kmax,
        fwd,
        inv,
        cube_index,
    }
}

/// Contracts `axis` of a row-major tensor with `mat` (`out_len × dims[axis]`).
fn apply_axis(
    data: &[Complex64],
    dims: &mut [usize],
    axis: usize,
    mat: &[Complex64],
    out_len: usize,
) -> Vec<Complex64> {
    let in_len = dims[axis];
    let outer: usize = dims[..axis].iter().product();
    let inner: usize = dims[axis + 1..].iter().product();
    let mut out = vec![ZERO; outer * out_len * inner];
    for o in 0..outer {
        let src = &data[o * in_len * inner..(o + 1) * in_len * inner];
        let dst = &mut out[o * out_len * inner..(o + 1) * out_len * inner];
        for r in 0..out_len {
            let row = &mat[r * in_len..(r + 1) * in_len];
            let d = &mut dst[r * inner..(r + 1) * inner];
            for (i, &m) in row.iter().enumerate() {
                let s = &src[i * inner..(i + 1) * inner];
                for (x, y) in d.iter_mut().zip(s) {
                    *x += m * y;
                }
            }
        }
    }
    dims[axis] = out_len;
    out
}

impl TorusTables {
    fn forward(&self, values: &[Complex64], modes: &ModeSet) -> Vec<Complex64> {
        let side = 2 * self.kmax + 1;
        let mut dims = vec![self.per_axis; self.n];
        let mut data = values.to_vec();
        for axis in 0..self.n {
            data = apply_axis(&data, &mut dims, axis, &self.fwd, side);
        }
        debug_assert_eq!(modes.coefficient_count(), self.cube_index.len());
        self.cube_index.iter().map(|&c| data[c]).collect()
    }

    fn inverse(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let side = 2 * self.kmax + 1;
        let mut cube = vec![ZERO; side.pow(self.n as u32)];
        for (&c, &v) in self.cube_index.iter().zip(coeffs) {
            cube[c] = v;
        }
        let mut dims = vec![side; self.n];
        for axis in 0..self.n {
            cube = apply_axis(&cube, &mut dims, axis, &self.inv, self.per_axis);
        }
        cube
    }
}

fn su2_tables(
    modes: &ModeSet,
    n_alpha: usize,
    n_beta: usize,
    n_gamma: usize,
    betas: &[f64],
    beta_weights: &[f64],
) -> Su2Tables {
    let two_l: Vec<usize> = modes
        .modes()
        .iter()
        .map(|m| match m.index {
            ModeIndex::Su2 { two_l } => two_l as usize,
            ModeIndex::Torus(_) => unreachable!("SU(2) mode set"),
        })
        .collect();
    let two_j = two_l.iter().copied().max().unwrap_or(0);
    let side = 2 * two_j + 1;
    let mut alpha_fwd = vec![ZERO; side * n_alpha];
    let mut gamma_fwd = vec![ZERO; side * n_gamma];
    for ai in 0..side {
        let half_freq = (ai as f64 - two_j as f64) / 2.0;
        for ia in 0..n_alpha {
            let alpha = 2.0 * PI * ia as f64 / n_alpha as f64;
            alpha_fwd[ai * n_alpha + ia] =
                Complex64::from_polar(1.0 / n_alpha as f64, half_freq * alpha);
        }
        for ig in 0..n_gamma {
            let gamma = 4.0 * PI * ig as f64 / n_gamma as f64;
            gamma_fwd[ai * n_gamma + ig] =
                Complex64::from_polar(1.0 / n_gamma as f64, half_freq * gamma);
        }
    }
    let small_d = two_l
        .iter()
        .map(|&tl| {
            betas
                .iter()
                .map(|&b| wigner_small_d_matrix(tl as u32, b))
                .collect()
        })
        .collect();
    Su2Tables {
        two_j,
        n_alpha,
        n_beta,
        n_gamma,
        beta_weights: beta_weights.to_vec(),
        alpha_fwd,
        gamma_fwd,
        small_d,
        two_l,
    }
}

impl Su2Tables {
    fn side(&self) -> usize {
        2 * self.two_j + 1
    }

    fn forward(&self, values: &[Complex64], modes: &ModeSet) -> Vec<Complex64> {
        let side = self.side();
        let (na, ng) = (self.n_alpha, self.n_gamma);
        let mut out = vec![ZERO; modes.coefficient_count()];
        let mut h = vec![ZERO; na * side];
        let mut g = vec![ZERO; side * side];
        for kb in 0..self.n_beta {
            let slab = &values[kb * na * ng..(kb + 1) * na * ng];
            // H[ia][b] = Σ_γ f e^{i b γ} / N_γ
            for ia in 0..na {
                let row = &slab[ia * ng..(ia + 1) * ng];
                for bi in 0..side {
                    let e = &self.gamma_fwd[bi * ng..(bi + 1) * ng];
                    h[ia * side + bi] = row.iter().zip(e).map(|(x, y)| x * y).sum();
                }
            }
            // G[a][b] = Σ_α e^{i a α} H[ia][b] / N_α
            g.iter_mut().for_each(|x| *x = ZERO);
            for ai in 0..side {
                let e = &self.alpha_fwd[ai * na..(ai + 1) * na];
                let dst = &mut g[ai * side..(ai + 1) * side];
                for (ia, &ea) in e.iter().enumerate() {
                    let src = &h[ia * side..(ia + 1) * side];
                    for (x, y) in dst.iter_mut().zip(src) {
                        *x += ea * y;
                    }
                }
            }
            let wb = self.beta_weights[kb];
            for (mi, &tl) in self.two_l.iter().enumerate() {
                let d = tl + 1;
                let dmat = &self.small_d[mi][kb];
                let block = &mut out[modes.block_range(mi)];
                // F_ij = Σ w conj(D_{m_j m_i}) = Σ w d_{m_j m_i} e^{i m_j α} e^{i m_i γ}
                let shift = self.two_j - tl;
                for i in 0..d {
                    for j in 0..d {
                        let a = shift + 2 * j;
                        let b = shift + 2 * i;
                        block[i * d + j] += g[a * side + b] * (wb * dmat[j * d + i]);
                    }
                }
            }
        }
        out
    }

    fn inverse(&self, field: &SpectralField) -> Vec<Complex64> {
        let side = self.side();
        let (na, ng) = (self.n_alpha, self.n_gamma);
        let mut out = vec![ZERO; self.n_beta * na * ng];
        let mut p = vec![ZERO; side * side];
        let mut q = vec![ZERO; na * side];
        for kb in 0..self.n_beta {
            // P[a][b] = Σ_ℓ d_ℓ d^ℓ_{ab}(β) F_{(b),(a)}
            p.iter_mut().for_each(|x| *x = ZERO);
            for (mi, &tl) in self.two_l.iter().enumerate() {
                let d = tl + 1;
                let dmat = &self.small_d[mi][kb];
                let block = field.block(mi);
                let shift = self.two_j - tl;
                let df = d as f64;
                for i in 0..d {
                    for j in 0..d {
                        let a = shift + 2 * i;
                        let b = shift + 2 * j;
                        p[a * side + b] += block[j * d + i] * (df * dmat[i * d + j]);
                    }
                }
            }
            // Q[ia][b] = Σ_a e^{-i a α} P[a][b]
            q.iter_mut().for_each(|x| *x = ZERO);
            for ia in 0..na {
                let dst = &mut q[ia * side..(ia + 1) * side];
                for ai in 0..side {
                    let e = self.alpha_fwd[ai * na + ia].conj() * na as f64;
                    let src = &p[ai * side..(ai + 1) * side];
                    for (x, y) in dst.iter_mut().zip(src) {
                        *x += e * y;
                    }
                }
            }
            // f[ia][ig] = Σ_b Q[ia][b] e^{-i b γ}
            let slab = &mut out[kb * na * ng..(kb + 1) * na * ng];
            for ia in 0..na {
                let qrow = &q[ia * side..(ia + 1) * side];
                for ig in 0..ng {
                    let mut s = ZERO;
                    for (bi, &qv) in qrow.iter().enumerate() {
                        s += qv * self.gamma_fwd[bi * ng + ig].conj();
                    }
                    slab[ia * ng + ig] = s * ng as f64;
                }
            }
        }
        out
    }
}
