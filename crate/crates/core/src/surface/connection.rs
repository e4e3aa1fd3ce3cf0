use super::{ip, lin, max_abs, solve, LocalGeometry, V5};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::scalar::Scalar;

/// `ω_A^B(f̃_i)` of a frame field `f1..f4` along its own tangent vectors
/// `f̃1 = f1`, `f̃2 = f2`, defined by
/// `∇̃_X f_A + <X, f_A> x = Σ_B ω_A^B(X) f_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionForms {
    /// `omega[A][B][i] = ω_A^B(f̃_i)`, zero-based indices.
    pub omega: [[[f64; 2]; 4]; 4],
    /// Largest violation of `ω_A^C g_CB + ω_B^C g_CA = 0`.
    pub symmetry_residual: f64,
    /// Largest component of `∇̃_X f_A + <X,f_A> x - Σ ω_A^B(X) f_B`.
    pub reconstruction_residual: f64,
}

impl ConnectionForms {
    /// `ω_A^B(f̃_i)` with one-based `A`, `B`, `i` as written in formulas.
    pub fn get(&self, a: usize, b: usize, i: usize) -> f64 {
        self.omega[a - 1][b - 1][i - 1]
    }

    /// `φ_i = ω_1^1(f̃_i)`.
    pub fn phi(&self, i: usize) -> f64 {
        self.get(1, 1, i)
    }

    /// `ψ_i = ω_3^3(f̃_i)`.
    pub fn psi(&self, i: usize) -> f64 {
        self.get(3, 3, i)
    }
}

/// Connection forms of a frame field given as bi-jets (order >= 1) at the
/// point of `geom`. The first two fields must be tangent.
pub fn connection_forms(geom: &LocalGeometry, field: &[[Jet2; 5]; 4]) -> Result<ConnectionForms> {
    if field.iter().flatten().any(|c| c.order() < 1) {
        return Err(Error::InvalidArgument(
            "frame field jets must have order >= 1".into(),
        ));
    }
    let f: [V5; 4] = std::array::from_fn(|a| std::array::from_fn(|c| field[a][c].value()));
    let df: [[V5; 2]; 4] = std::array::from_fn(|a| {
        [0, 1].map(|k| std::array::from_fn(|c| field[a][c].d(k).expect("order >= 1").value()))
    });
    let gram: [[f64; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|b| ip(&f[a], &f[b])));
    let dirs = [0, 1].map(|i| geom.tangent_coefficients(&f[i]));

    let mut omega = [[[0.0; 2]; 4]; 4];
    let mut reconstruction: f64 = 0.0;
    for (i, dir) in dirs.iter().enumerate() {
        let xvec = &f[i];
        for a in 0..4 {
            let deriv = lin(&[(dir[0], &df[a][0]), (dir[1], &df[a][1])]);
            let p = lin(&[(1.0, &deriv), (ip(xvec, &f[a]), &geom.x)]);
            let rhs: [f64; 4] = std::array::from_fn(|c| ip(&p, &f[c]));
            let w = solve(gram, rhs).ok_or(Error::NotPseudoOrthonormal {
                residual: f64::INFINITY,
            })?;
            let mut rebuilt = [0.0; 5];
            for b in 0..4 {
                omega[a][b][i] = w[b];
                for c in 0..5 {
                    rebuilt[c] += w[b] * f[b][c];
                }
            }
            let scale = max_abs(&p).max(1.0);
            reconstruction = reconstruction.max(max_abs(&super::diff(&p, &rebuilt)) / scale);
        }
    }
    let mut symmetry: f64 = 0.0;
    for i in 0..2 {
        for a in 0..4 {
            for b in 0..4 {
                let v: f64 = (0..4)
                    .map(|c| omega[a][c][i] * gram[c][b] + omega[b][c][i] * gram[c][a])
                    .sum();
                symmetry = symmetry.max(v.abs());
            }
        }
    }
    Ok(ConnectionForms {
        omega,
        symmetry_residual: symmetry,
        reconstruction_residual: reconstruction,
    })
}
