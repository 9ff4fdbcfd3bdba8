//! Dense complex linear algebra used by the operator layer: a seeded power
//! iteration for the largest singular value, its inverse-iteration
//! counterpart for the smallest, and small helpers. Factorizations are
//! delegated to nalgebra; the power iteration is spelled out because its
//! seeding, tolerance and iteration cap are part of this crate's contract.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("power iteration did not converge within {max_iter} iterations")]
    NonConvergence { max_iter: usize },
    #[error("matrix is numerically singular")]
    Singular,
}

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 10_000;

fn seeded_start(n: usize, seed: u64) -> Vec<Complex64> {
    // All-ones start plus a fixed seeded perturbation, so degenerate
    // orthogonality to the top singular vector cannot persist.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            Complex64::new(
                1.0 + 0.01 * (rng.gen::<f64>() - 0.5),
                0.01 * (rng.gen::<f64>() - 0.5),
            )
        })
        .collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value via power iteration on A*A, relative tolerance
/// `POWER_TOL`, at most `POWER_MAX_ITER` iterations.
pub fn largest_singular_value(a: &DMatrix<Complex64>, seed: u64) -> Result<f64, LinalgError> {
    let n = a.ncols();
    if n == 0 {
        return Ok(0.0);
    }
    let mut x = nalgebra::DVector::from_vec(seeded_start(n, seed));
    let nx = norm(x.as_slice());
    x /= Complex64::new(nx, 0.0);
    let mut lambda = 0.0f64;
    for _ in 0..POWER_MAX_ITER {
        let y = a * &x;
        let z = a.adjoint() * y;
        let nz = norm(z.as_slice());
        if nz < 1e-300 {
            return Ok(0.0);
        }
        let new_lambda = nz; // ‖A*Ax‖ for unit x approximates σ².
        let rel = (new_lambda - lambda).abs() / new_lambda.max(1e-300);
        x = z / Complex64::new(nz, 0.0);
        lambda = new_lambda;
        if rel < POWER_TOL {
            return Ok(lambda.sqrt());
        }
    }
    Err(LinalgError::NonConvergence {
        max_iter: POWER_MAX_ITER,
    })
}

/// Smallest singular value via power iteration on (A*A)^{-1}, solving with
/// LU factorizations of A and A*.
pub fn smallest_singular_value(a: &DMatrix<Complex64>, seed: u64) -> Result<f64, LinalgError> {
    let n = a.ncols();
    if n == 0 {
        return Ok(0.0);
    }
    let lu = a.clone().lu();
    let lu_adj = a.adjoint().lu();
    let mut x = nalgebra::DVector::from_vec(seeded_start(n, seed ^ 0x5eed));
    let nx = norm(x.as_slice());
    x /= Complex64::new(nx, 0.0);
    let mut mu = 0.0f64;
    for _ in 0..POWER_MAX_ITER {
        // (A*A)^{-1} x = A^{-1} (A^{-*} x).
        let y = lu_adj.solve(&x).ok_or(LinalgError::Singular)?;
        let z = lu.solve(&y).ok_or(LinalgError::Singular)?;
        let nz = norm(z.as_slice());
        if nz < 1e-300 {
            return Err(LinalgError::Singular);
        }
        let new_mu = nz;
        let rel = (new_mu - mu).abs() / new_mu.max(1e-300);
        x = z / Complex64::new(nz, 0.0);
        mu = new_mu;
        if rel < POWER_TOL {
            return Ok(mu.sqrt().recip());
        }
    }
    Err(LinalgError::NonConvergence {
        max_iter: POWER_MAX_ITER,
    })
}

/// 2-norm condition number σ_max/σ_min.
pub fn condition_number(a: &DMatrix<Complex64>, seed: u64) -> Result<f64, LinalgError> {
    let hi = largest_singular_value(a, seed)?;
    let lo = smallest_singular_value(a, seed)?;
    Ok(hi / lo)
}

pub fn frobenius(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product (row-major compounding of indices: the first factor is
/// the slow axis).
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = DMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}
