//! JMAK/Arrhenius transformation kinetics in the double-log representation
//! `y_hat = ln(-ln(1 - y))`, the maps between extent, hardness, and the
//! transformed coordinates, and the analytic step derivatives the optimizer
//! consumes.
//!
//! One isothermal step obeys
//! `y_hat' = n ln(exp(y_hat / n) + gdot(T) dt)`,
//! which is exact for constant temperature and additive in `ytilde^(1/n)`.
//! With `s = sigmoid(y_hat/n - ln(gdot dt))` every partial of the step has a
//! closed form in `s`, which is how the implementation stays finite for the
//! tiny Avrami exponents (n ~ 0.05) that overflow a naive `exp(y_hat/n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Universal gas constant, J/(mol K).
pub const GAS_CONSTANT: f64 = 8.3145;

/// Clamp interval applied to configured initial extents before the `y_hat`
/// transform (which diverges at 0 and 1).
pub const Y_INIT_CLAMP: (f64, f64) = (1e-9, 1.0 - 1e-9);

/// Clamp interval applied when ingesting measured or target extents
/// (hardness endpoints map to y in {0, 1} where `y_hat` diverges).
pub const Y_INGEST_CLAMP: (f64, f64) = (1e-4, 1.0 - 1e-4);

/// Avrami/Arrhenius kinetics triple.
///
/// The theta coordinates `[n ln A, 1/n, n E]` are the fitting
/// parameterization; they keep the least-squares Hessian well conditioned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AvramiParams {
    /// Avrami exponent, dimensionless.
    pub n: f64,
    /// Log pre-exponential factor, ln(1/s).
    pub ln_a: f64,
    /// Activation energy, J/mol.
    pub e: f64,
}

impl AvramiParams {
    /// `e = 0` is the degenerate temperature-independent limit, admitted so
    /// that limiting behavior is testable; identified parameters are
    /// strictly positive.
    pub fn new(n: f64, ln_a: f64, e: f64) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::invalid(format!("Avrami exponent must be positive, got {n}")));
        }
        if !(e >= 0.0) || !e.is_finite() || !ln_a.is_finite() {
            return Err(Error::invalid(format!(
                "activation energy must be nonnegative and finite (ln_a={ln_a}, e={e})"
            )));
        }
        Ok(Self { n, ln_a, e })
    }

    pub fn to_theta(&self) -> [f64; 3] {
        [self.n * self.ln_a, 1.0 / self.n, self.n * self.e]
    }

    pub fn from_theta(theta: [f64; 3]) -> Result<Self> {
        if !(theta[1] > 0.0) {
            return Err(Error::invalid(format!(
                "theta[1] = 1/n must be positive, got {}",
                theta[1]
            )));
        }
        let n = 1.0 / theta[1];
        Self::new(n, theta[0] * theta[1], theta[2] * theta[1])
    }
}

/// Linear map between transformation extent and Vickers hardness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardnessMap {
    /// Hardness of the untransformed (y = 0) state, HV.
    pub hv_max: f64,
    /// Hardness of the fully transformed (y = 1) state, HV.
    pub hv_min: f64,
}

impl HardnessMap {
    pub fn new(hv_max: f64, hv_min: f64) -> Result<Self> {
        if !(hv_max > hv_min && hv_min > 0.0) {
            return Err(Error::invalid(format!(
                "hardness endpoints must satisfy hv_max > hv_min > 0 (got {hv_max}, {hv_min})"
            )));
        }
        Ok(Self { hv_max, hv_min })
    }

    /// Empirical endpoints for quenched/tempered low-alloy steel.
    pub fn steel_default() -> Self {
        Self::new(420.0, 135.0).unwrap()
    }
}

/// Per-cell transformed extent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformState {
    pub y_hat: nalgebra::DVector<f64>,
}

impl TransformState {
    pub fn new(y_hat: nalgebra::DVector<f64>) -> Result<Self> {
        if y_hat.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("transform state must be finite"));
        }
        Ok(Self { y_hat })
    }

    /// Uniform state from a configured initial extent, clamped away from the
    /// transform's singular endpoints.
    pub fn uniform_from_y0(n_cells: usize, y0: f64) -> Self {
        let y = y0.clamp(Y_INIT_CLAMP.0, Y_INIT_CLAMP.1);
        Self {
            y_hat: nalgebra::DVector::from_element(n_cells, hat_from_y(y).unwrap()),
        }
    }
}

/// Arrhenius transformation rate `exp(ln_a - E / (R T))`, 1/s.
pub fn gdot(temp: f64, p: &AvramiParams) -> Result<f64> {
    if !(temp > 0.0) {
        return Err(Error::invalid(format!("temperature must be positive kelvin, got {temp}")));
    }
    Ok((p.ln_a - p.e / (GAS_CONSTANT * temp)).exp())
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let ex = x.exp();
        ex / (1.0 + ex)
    }
}

#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// One isothermal kinetics step in `y_hat` coordinates.
pub fn step_hat(y_hat: f64, temp: f64, dt: f64, p: &AvramiParams) -> Result<f64> {
    if !(dt >= 0.0) {
        return Err(Error::invalid(format!("step duration must be nonnegative, got {dt}")));
    }
    if !(temp > 0.0) {
        return Err(Error::invalid(format!("temperature must be positive kelvin, got {temp}")));
    }
    // ln(gdot dt) in log space; dt = 0 gives -inf and an unchanged state.
    let ln_gdt = p.ln_a - p.e / (GAS_CONSTANT * temp) + dt.ln();
    if ln_gdt == f64::NEG_INFINITY {
        return Ok(y_hat);
    }
    Ok(p.n * log_add_exp(y_hat / p.n, ln_gdt))
}

/// Value and first/second partials of one kinetics step with respect to the
/// incoming `y_hat` and the step temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepHatDerivs {
    pub next: f64,
    /// d y_hat' / d y_hat
    pub d_y: f64,
    /// d y_hat' / d T
    pub d_t: f64,
    /// d2 y_hat' / d y_hat^2
    pub d_yy: f64,
    /// d2 y_hat' / (d y_hat d T)
    pub d_yt: f64,
    /// d2 y_hat' / d T^2
    pub d_tt: f64,
}

/// Analytic partials of `step_hat`. With `s = sigmoid(y_hat/n - ln(gdot dt))`
/// and `beta = E / (R T^2)`:
///
/// dy' / dy_hat = s
/// dy' / dT     = n (1-s) beta
/// d2/dy_hat^2  = s (1-s) / n
/// d2/dy_hat dT = -s (1-s) beta
/// d2/dT^2      = n (1-s) (s beta^2 - 2 E / (R T^3))
pub fn step_hat_derivs(y_hat: f64, temp: f64, dt: f64, p: &AvramiParams) -> Result<StepHatDerivs> {
    if !(dt >= 0.0) {
        return Err(Error::invalid(format!("step duration must be nonnegative, got {dt}")));
    }
    if !(temp > 0.0) {
        return Err(Error::invalid(format!("temperature must be positive kelvin, got {temp}")));
    }
    let ln_gdt = p.ln_a - p.e / (GAS_CONSTANT * temp) + dt.ln();
    if ln_gdt == f64::NEG_INFINITY {
        return Ok(StepHatDerivs {
            next: y_hat,
            d_y: 1.0,
            d_t: 0.0,
            d_yy: 0.0,
            d_yt: 0.0,
            d_tt: 0.0,
        });
    }
    let s = sigmoid(y_hat / p.n - ln_gdt);
    let beta = p.e / (GAS_CONSTANT * temp * temp);
    let one_minus_s = 1.0 - s;
    Ok(StepHatDerivs {
        next: p.n * log_add_exp(y_hat / p.n, ln_gdt),
        d_y: s,
        d_t: p.n * one_minus_s * beta,
        d_yy: s * one_minus_s / p.n,
        d_yt: -s * one_minus_s * beta,
        d_tt: p.n * one_minus_s * (s * beta * beta - 2.0 * p.e / (GAS_CONSTANT * temp.powi(3))),
    })
}

/// `y = 1 - exp(-exp(y_hat))`.
pub fn y_from_hat(y_hat: f64) -> f64 {
    -(-y_hat.exp()).exp_m1()
}

/// `y_hat = ln(-ln(1 - y))`, defined on y in (0, 1).
pub fn hat_from_y(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::invalid(format!("extent must lie strictly in (0, 1), got {y}")));
    }
    Ok((-(-y).ln_1p()).ln())
}

/// `HV = hv_max - y (hv_max - hv_min)`.
pub fn hv_from_y(y: f64, hm: &HardnessMap) -> f64 {
    hm.hv_max - y * (hm.hv_max - hm.hv_min)
}

/// Inverse of [`hv_from_y`]; `hv` must lie within the endpoint range.
pub fn y_from_hv(hv: f64, hm: &HardnessMap) -> Result<f64> {
    if hv < hm.hv_min || hv > hm.hv_max {
        return Err(Error::invalid(format!(
            "hardness {hv} outside [{}, {}]",
            hm.hv_min, hm.hv_max
        )));
    }
    Ok((hm.hv_max - hv) / (hm.hv_max - hm.hv_min))
}

/// Ingestion path for measured or target extents: clamp into the open unit
/// interval, then transform.
pub fn ingest_y_to_hat(y: f64) -> f64 {
    hat_from_y(y.clamp(Y_INGEST_CLAMP.0, Y_INGEST_CLAMP.1)).unwrap()
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_params() -> impl Strategy<Value = AvramiParams> {
        (0.03f64..0.6, 5.0f64..40.0, 2.0e4f64..3.0e5)
            .prop_map(|(n, ln_a, e)| AvramiParams::new(n, ln_a, e).unwrap())
    }

    proptest! {
        #[test]
        fn step_never_decreases(
            p in arb_params(),
            yh in -20.0f64..3.0,
            t in 400.0f64..1100.0,
            dt in 0.0f64..10.0,
        ) {
            let next = step_hat(yh, t, dt, &p).unwrap();
            prop_assert!(next >= yh - 1e-12);
        }

        #[test]
        fn step_monotone_in_temperature(
            p in arb_params(),
            yh in -20.0f64..3.0,
            t in 400.0f64..1000.0,
            dt in 1e-3f64..10.0,
            bump in 1.0f64..200.0,
        ) {
            let lo = step_hat(yh, t, dt, &p).unwrap();
            let hi = step_hat(yh, t + bump, dt, &p).unwrap();
            prop_assert!(hi >= lo);
        }

        #[test]
        fn gain_in_unit_interval(
            p in arb_params(),
            yh in -20.0f64..3.0,
            t in 400.0f64..1100.0,
            dt in 1e-6f64..10.0,
        ) {
            let d = step_hat_derivs(yh, t, dt, &p).unwrap();
            prop_assert!(d.d_y > 0.0 && d.d_y <= 1.0);
        }

        #[test]
        fn isothermal_refinement_exact(
            p in arb_params(),
            y0 in 0.01f64..0.9,
            t in 500.0f64..1000.0,
            total in 0.1f64..20.0,
            pieces in 2usize..40,
        ) {
            let y0h = hat_from_y(y0).unwrap();
            let one = step_hat(y0h, t, total, &p).unwrap();
            let mut many = y0h;
            for _ in 0..pieces {
                many = step_hat(many, t, total / pieces as f64, &p).unwrap();
            }
            prop_assert!((one - many).abs() < 1e-12 * one.abs().max(1.0));
        }
    }
}
