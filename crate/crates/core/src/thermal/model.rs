//! Finite-volume heat-conduction operator assembly and its exact
//! zero-order-hold time discretization.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::expm::expm_with_integral;
use crate::sparse::CooMatrix;

use super::mesh::Mesh;

/// Gaussian input-matrix entries below this fraction of the peak are
/// truncated to exact zero so assembled models are reproducible bit for bit.
pub const GAUSSIAN_TRUNCATION: f64 = 1e-12;

/// Material constants, all SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialProps {
    /// Thermal conductivity, W/(m K).
    pub k: f64,
    /// Density, kg/m^3.
    pub rho: f64,
    /// Specific heat capacity, J/(kg K).
    pub cp: f64,
    /// Convective coefficient, W/(m^2 K). Zero in vacuum.
    pub h: f64,
    /// Thermal diffusivity k/(rho cp), m^2/s.
    pub alpha: f64,
}

impl MaterialProps {
    pub fn new(k: f64, rho: f64, cp: f64, h: f64) -> Result<Self> {
        if !(k > 0.0 && rho > 0.0 && cp > 0.0) {
            return Err(Error::invalid(format!(
                "conductivity, density and heat capacity must be positive (k={k}, rho={rho}, cp={cp})"
            )));
        }
        if h < 0.0 {
            return Err(Error::invalid(format!("convective coefficient must be nonnegative, got {h}")));
        }
        Ok(Self {
            k,
            rho,
            cp,
            h,
            alpha: k / (rho * cp),
        })
    }

    /// ER70S-6 low alloy steel.
    pub fn er70s6() -> Self {
        Self::new(31.1, 7269.0, 720.0, 0.0).unwrap()
    }
}

/// The affine continuous-time system `dT/dt = A T + e + B u`.
#[derive(Debug, Clone)]
pub struct ContinuousThermalModel {
    /// System matrix, 1/s. Symmetric, negative semidefinite.
    pub a: CooMatrix,
    /// Exogenous substrate/ambient drive, K/s.
    pub e: DVector<f64>,
    /// Gaussian-magnitude input matrix, K/(s W).
    pub b: DMatrix<f64>,
    /// Gaussian center cell index per input column.
    pub input_cells: Vec<usize>,
    /// Substrate temperature, K.
    pub t0: f64,
    /// Ambient temperature, K.
    pub tinf: f64,
    /// Beam standard deviation, m.
    pub sigma: f64,
}

impl ContinuousThermalModel {
    pub fn n_cells(&self) -> usize {
        self.e.len()
    }

    pub fn n_inputs(&self) -> usize {
        self.b.ncols()
    }
}

/// The discrete system `T+ = Ad T + ed + Bd u` for one step of `dt` seconds.
#[derive(Debug, Clone)]
pub struct DiscreteThermalModel {
    pub ad: DMatrix<f64>,
    pub ed: DVector<f64>,
    pub bd: DMatrix<f64>,
    pub dt: f64,
    /// Gaussian center cell index per input column.
    pub input_cells: Vec<usize>,
}

impl DiscreteThermalModel {
    pub fn n_cells(&self) -> usize {
        self.ed.len()
    }

    pub fn n_inputs(&self) -> usize {
        self.bd.ncols()
    }
}

/// Selects the Gaussian-center subset of the surface set.
///
/// `stride = 1` keeps every surface cell. Larger strides keep a regular
/// sublattice of the surface in grid coordinates (every stride-th column and
/// row of the surface lattice), mirroring how a coarser beam-center set is
/// chosen relative to the voxel pitch.
pub fn select_input_cells(mesh: &Mesh, stride: usize) -> Result<Vec<usize>> {
    if stride == 0 {
        return Err(Error::invalid("input stride must be at least 1"));
    }
    let picked: Vec<usize> = mesh
        .surface_set
        .iter()
        .copied()
        .filter(|&ci| {
            let [x, y, _] = mesh.cells[ci];
            x % stride == 0 && y % stride == 0
        })
        .collect();
    if picked.is_empty() {
        return Err(Error::invalid(format!(
            "input stride {stride} leaves no Gaussian centers on the surface"
        )));
    }
    Ok(picked)
}

/// Assembles the continuous-time operator triple from the mesh and material.
///
/// `A = -(alpha/l^2 L + alpha/l^4 A0 + h/(rho cp l^3) Ainf)` with `L` the
/// graph Laplacian of the cell adjacency, `A0`/`Ainf` the diagonal substrate
/// and atmosphere contact-area matrices, and
/// `e = (alpha/l^4 A0 T0 + h/(rho cp l^3) Ainf Tinf) 1`.
/// Input column `j` is a Gaussian of deviation `sigma` centered at surface
/// cell `input_cells[j]`, scaled by `1/(rho cp l) * 1/(2 pi sigma^2)`.
pub fn assemble_continuous(
    mesh: &Mesh,
    props: &MaterialProps,
    t0: f64,
    tinf: f64,
    sigma: f64,
    input_stride: usize,
) -> Result<ContinuousThermalModel> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::invalid(format!("beam sigma must be positive, got {sigma}")));
    }
    if t0 <= 0.0 || tinf <= 0.0 {
        return Err(Error::invalid(format!(
            "temperatures must be positive kelvin (T0={t0}, Tinf={tinf})"
        )));
    }

    let n = mesh.n_cells();
    let l = mesh.l;
    let diff = props.alpha / (l * l);
    let sub_coef = props.alpha / (l * l * l * l);
    let amb_coef = props.h / (props.rho * props.cp * l * l * l);

    let mut a = CooMatrix::new(n, n);
    let mut e = DVector::zeros(n);
    for i in 0..n {
        let mut degree = 0.0;
        for nb in mesh.neighbors[i].iter().flatten() {
            a.push(i, *nb, diff);
            degree += 1.0;
        }
        let diag = -(diff * degree
            + sub_coef * mesh.substrate_areas[i]
            + amb_coef * mesh.ambient_areas[i]);
        a.push(i, i, diag);
        e[i] = sub_coef * mesh.substrate_areas[i] * t0 + amb_coef * mesh.ambient_areas[i] * tinf;
    }

    let input_cells = select_input_cells(mesh, input_stride)?;
    let peak = 1.0 / (props.rho * props.cp * l) / (2.0 * std::f64::consts::PI * sigma * sigma);
    let cutoff = peak * GAUSSIAN_TRUNCATION;
    let mut b = DMatrix::zeros(n, input_cells.len());
    for (j, &cj) in input_cells.iter().enumerate() {
        let rj = mesh.coords[cj];
        for &si in &mesh.surface_set {
            let ri = mesh.coords[si];
            let d2 = (ri[0] - rj[0]).powi(2) + (ri[1] - rj[1]).powi(2) + (ri[2] - rj[2]).powi(2);
            let v = peak * (-d2 / (2.0 * sigma * sigma)).exp();
            if v >= cutoff {
                b[(si, j)] = v;
            }
        }
    }

    Ok(ContinuousThermalModel {
        a,
        e,
        b,
        input_cells,
        t0,
        tinf,
        sigma,
    })
}

/// Exact zero-order-hold discretization of the continuous model.
///
/// `Ad = exp(A dt)`; `ed = M e` and `Bd = M B` with `M = integral of
/// exp(A s) ds`, all obtained from one augmented-block matrix exponential
/// so a near-singular `A` never needs inverting.
pub fn discretize(cm: &ContinuousThermalModel, dt: f64) -> Result<DiscreteThermalModel> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(Error::invalid(format!("time step must be positive, got {dt}")));
    }
    let n = cm.n_cells();
    let m = cm.n_inputs();
    let a = cm.a.to_dense();
    // C = [e B]; the integral block gives [ed Bd] in one exponential.
    let mut c = DMatrix::zeros(n, 1 + m);
    c.column_mut(0).copy_from(&cm.e);
    c.view_mut((0, 1), (n, m)).copy_from(&cm.b);
    let (ad, mc) = expm_with_integral(&a, &c, dt)?;
    let ed = mc.column(0).into_owned();
    let bd = mc.view((0, 1), (n, m)).into_owned();
    Ok(DiscreteThermalModel {
        ad,
        ed,
        bd,
        dt,
        input_cells: cm.input_cells.clone(),
    })
}

/// Advances the temperature vector one step: `Ad T + ed + Bd u`.
pub fn thermal_step(
    dm: &DiscreteThermalModel,
    temps: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<DVector<f64>> {
    if temps.len() != dm.n_cells() {
        return Err(Error::dim("thermal_step state", dm.n_cells(), temps.len()));
    }
    if u.len() != dm.n_inputs() {
        return Err(Error::dim("thermal_step input", dm.n_inputs(), u.len()));
    }
    let mut t_next = &dm.ad * temps;
    t_next += &dm.ed;
    t_next.gemv(1.0, &dm.bd, u, 1.0);
    Ok(t_next)
}
