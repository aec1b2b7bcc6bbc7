//! Dense matrix exponential by scaling-and-squaring with Padé approximants.
//!
//! Follows Higham's 2005 method: pick the smallest diagonal Padé degree
//! (3, 5, 7, 9, 13) whose backward-error bound covers the 1-norm of the
//! input, scaling by a power of two first when even degree 13 does not.
//! The squaring phase undoes the scaling.
//!
//! Also provides the Van Loan block trick used for zero-order-hold
//! discretization: the exponential of the augmented matrix
//! `[[A, C], [0, 0]] * dt` carries `M*C` in its top-right block, where
//! `M = integral of exp(A s) ds over [0, dt]`, without ever forming `A^-1`.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn norm_1(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// U and V for a degree <= 9 Padé approximant; `even_powers[k]` holds A^(2(k+1)).
fn pade_uv_low(
    a: &DMatrix<f64>,
    even_powers: &[DMatrix<f64>],
    b: &[f64],
) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut u_poly = &id * b[1];
    let mut v = &id * b[0];
    for (k, p) in even_powers.iter().enumerate() {
        let deg = 2 * (k + 1);
        u_poly += p * b[deg + 1];
        v += p * b[deg];
    }
    (a * u_poly, v)
}

fn pade_13_uv(a: &DMatrix<f64>, a2: &DMatrix<f64>, a4: &DMatrix<f64>, a6: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let b = &PADE_13;
    let u_hi = a6 * (a6 * b[13] + a4 * b[11] + a2 * b[9]);
    let u_lo = a6 * b[7] + a4 * b[5] + a2 * b[3] + &id * b[1];
    let u = a * (u_hi + u_lo);
    let v_hi = a6 * (a6 * b[12] + a4 * b[10] + a2 * b[8]);
    let v = v_hi + a6 * b[6] + a4 * b[4] + a2 * b[2] + &id * b[0];
    (u, v)
}

/// Computes `exp(a)` for a square matrix.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::dim("expm", n, a.ncols()));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let nrm = norm_1(a);
    if !nrm.is_finite() {
        return Err(Error::Numerics("expm: input has non-finite entries".into()));
    }

    let a2 = a * a;
    if nrm <= THETA_9 {
        let b: &[f64] = if nrm <= THETA_3 {
            &PADE_3
        } else if nrm <= THETA_5 {
            &PADE_5
        } else if nrm <= THETA_7 {
            &PADE_7
        } else {
            &PADE_9
        };
        // Even powers A^2 .. A^(degree-1), degree = b.len() - 1.
        let mut powers = vec![a2.clone()];
        while 2 * (powers.len() + 1) < b.len() {
            powers.push(&a2 * powers.last().unwrap());
        }
        let (u, v) = pade_uv_low(a, &powers, b);
        return pade_solve(u, v, 0, nrm);
    }

    // Degree 13 with scaling.
    let s = ((nrm / THETA_13).log2().ceil()).max(0.0) as u32;
    let scale = 0.5f64.powi(s as i32);
    let a_s = a * scale;
    let a2s = &a_s * &a_s;
    let a4s = &a2s * &a2s;
    let a6s = &a2s * &a4s;
    let (u, v) = pade_13_uv(&a_s, &a2s, &a4s, &a6s);
    pade_solve(u, v, s, nrm)
}

fn pade_solve(u: DMatrix<f64>, v: DMatrix<f64>, squarings: u32, nrm: f64) -> Result<DMatrix<f64>> {
    let p = &v + &u;
    let q = &v - &u;
    let lu = q.lu();
    let mut r = lu.solve(&p).ok_or_else(|| {
        Error::Numerics(format!(
            "expm: Padé denominator is singular (input 1-norm {:.3e}, squarings {})",
            nrm, squarings
        ))
    })?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// Exact zero-order-hold pair for the affine system `x' = A x + C w` with
/// `w` held constant over `[0, dt]`.
///
/// Returns `(exp(A dt), M C)` with `M = integral_0^dt exp(A s) ds`, read off
/// the block exponential of `[[A, C], [0, 0]] * dt`.
pub fn expm_with_integral(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    dt: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::dim("expm_with_integral: A", n, a.ncols()));
    }
    if c.nrows() != n {
        return Err(Error::dim("expm_with_integral: C rows", n, c.nrows()));
    }
    let m = c.ncols();
    let dim = n + m;
    let mut aug = DMatrix::<f64>::zeros(dim, dim);
    aug.view_mut((0, 0), (n, n)).copy_from(&(a * dt));
    aug.view_mut((0, n), (n, m)).copy_from(&(c * dt));
    let e = expm(&aug)?;
    let ad = e.view((0, 0), (n, n)).into_owned();
    let mc = e.view((0, n), (n, m)).into_owned();
    Ok((ad, mc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let a = DMatrix::<f64>::zeros(4, 4);
        let e = expm(&a).unwrap();
        assert_eq!(e, DMatrix::identity(4, 4));
    }

    #[test]
    fn scalar_matches_exp() {
        for &x in &[-30.0, -1.0, 0.3, 2.0, 8.0] {
            let a = DMatrix::from_element(1, 1, x);
            let e = expm(&a).unwrap();
            assert!((e[(0, 0)] - x.exp()).abs() <= 1e-13 * x.exp().max(1.0));
        }
    }

    #[test]
    fn diagonal_matches_elementwise_exp() {
        let d = [-3.0, -0.5, 0.0, 1.7];
        let a = DMatrix::from_diagonal(&DVector::from_row_slice(&d));
        let e = expm(&a).unwrap();
        for (i, &x) in d.iter().enumerate() {
            assert!((e[(i, i)] - x.exp()).abs() < 1e-12 * x.exp().max(1.0));
        }
    }

    #[test]
    fn nilpotent_closed_form() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm(&a).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(max_abs_diff(&e, &expect) < 1e-15);
    }

    #[test]
    fn rotation_closed_form() {
        let th = 0.7;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -th, th, 0.0]);
        let e = expm(&a).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        assert!(max_abs_diff(&e, &expect) < 1e-14);
    }

    /// Independent route: symmetric matrices diagonalize, so exp(A) = Q exp(L) Q^T.
    #[test]
    fn symmetric_matches_eigendecomposition() {
        let mut seed = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for &scale in &[0.1, 1.0, 20.0, 300.0] {
            let n = 12;
            let mut a = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = next() * scale;
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            let eig = a.clone().symmetric_eigen();
            let lam_exp = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::exp));
            let oracle = &eig.eigenvectors * lam_exp * eig.eigenvectors.transpose();
            let e = expm(&a).unwrap();
            let rel = max_abs_diff(&e, &oracle) / norm_1(&oracle);
            assert!(rel < 1e-12, "scale {scale}: rel err {rel:.3e}");
        }
    }

    #[test]
    fn semigroup_property() {
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[-2.0, 1.0, 0.0, 1.0, -3.0, 1.5, 0.0, 1.5, -1.0],
        );
        let e1 = expm(&a).unwrap();
        let e2 = expm(&(&a * 2.0)).unwrap();
        let rel = max_abs_diff(&(&e1 * &e1), &e2) / norm_1(&e2);
        assert!(rel < 1e-13);
    }

    #[test]
    fn integral_block_zero_a_is_dt_scaled() {
        // A = 0: Ad = I, M = dt I, so M*C = dt*C.
        let a = DMatrix::<f64>::zeros(3, 3);
        let c = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let dt = 0.25;
        let (ad, mc) = expm_with_integral(&a, &c, dt).unwrap();
        assert!(max_abs_diff(&ad, &DMatrix::identity(3, 3)) < 1e-14);
        assert!(max_abs_diff(&mc, &(&c * dt)) < 1e-14);
    }

    #[test]
    fn integral_block_scalar_closed_form() {
        // scalar a<0: Ad = e^{a dt}, M = (e^{a dt}-1)/a.
        let aval = -3.2;
        let dt = 0.13;
        let a = DMatrix::from_element(1, 1, aval);
        let c = DMatrix::from_element(1, 1, 1.0);
        let (ad, mc) = expm_with_integral(&a, &c, dt).unwrap();
        let exact_ad = (aval * dt).exp();
        let exact_m = ((aval * dt).exp() - 1.0) / aval;
        assert!((ad[(0, 0)] - exact_ad).abs() < 1e-15);
        assert!((mc[(0, 0)] - exact_m).abs() < 1e-15);
    }
}
