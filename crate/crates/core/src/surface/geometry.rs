use super::{diff, ip, lin, max_abs, SurfacePatch, MIN_SURFACE_ORDER, V5};
use crate::algebra::{Signature, NULL_FRAME_GRAM, ORTHONORMAL_FRAME_GRAM};
use crate::error::{Error, Result};
use crate::frame::{orthonormal_frame, DEGENERATE_DET};
use crate::jet::Jet2;
use crate::scalar::Scalar;

/// Frames passed in by callers must be pseudo-orthonormal to this level.
pub const FRAME_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstFundamentalForm {
    pub g_ss: f64,
    pub g_st: f64,
    pub g_tt: f64,
    pub det: f64,
}

/// `ĥ` on a pseudo-orthonormal frame, with `h^μ_ij = <ĥ(f_i, f_j), f_μ>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalForm {
    pub h3_11: f64,
    pub h3_22: f64,
    pub h4_11: f64,
    pub h4_22: f64,
    pub h11: V5,
    pub h12: V5,
    pub h22: V5,
}

impl SecondFundamentalForm {
    /// `h^3_22 h^4_11 + h^3_11 h^4_22 + 1`, the Gauss equation for minimal
    /// surfaces.
    pub fn gaussian_curvature_minimal(&self) -> f64 {
        self.h3_22 * self.h4_11 + self.h3_11 * self.h4_22 + 1.0
    }

    /// `h^3_22 h^4_11 - h^3_11 h^4_22`.
    pub fn normal_curvature_minimal(&self) -> f64 {
        self.h3_22 * self.h4_11 - self.h3_11 * self.h4_22
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalResiduals {
    pub gauss: f64,
    pub codazzi: f64,
    pub ricci: f64,
}

impl FundamentalResiduals {
    pub fn max(&self) -> f64 {
        self.gauss.max(self.codazzi).max(self.ricci)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub s: f64,
    pub t: f64,
    pub k: f64,
    pub k_normal: f64,
    pub k_normal_abs: f64,
    pub mean_curvature: V5,
    pub mean_curvature_max: f64,
    /// `sqrt(|<Ĥ,Ĥ>|)`; can vanish for a nonzero null vector.
    pub mean_curvature_norm: f64,
    pub sphere: f64,
    /// Deviation from the expected coordinate form of the metric, when the
    /// patch has one.
    pub metric_form: Option<f64>,
    pub residuals: FundamentalResiduals,
}

/// Everything at one point of a patch that is derived from the coordinate
/// bi-jets: metric, Christoffel symbols, `ĥ` and its first derivatives, and an
/// orthonormal frame field.
#[derive(Debug, Clone)]
pub struct LocalGeometry {
    pub s: f64,
    pub t: f64,
    pub x: V5,
    pub xs: V5,
    pub xt: V5,
    g: [[f64; 2]; 2],
    ginv: [[f64; 2]; 2],
    det: f64,
    /// `Γ^k_ij` as `[k][i][j]`.
    christoffel: [[[f64; 2]; 2]; 2],
    k_intrinsic: f64,
    hhat: [[V5; 2]; 2],
    /// `∂_k ĥ_ij` as `[k][i][j]`.
    dhhat: [[[V5; 2]; 2]; 2],
    frame: [V5; 4],
    frame_jets: [[Jet2; 5]; 4],
}

fn values(v: &[Jet2; 5]) -> V5 {
    std::array::from_fn(|i| v[i].value())
}

fn d(j: &Jet2, k: usize) -> Jet2 {
    j.d(k).expect("bi-jet order checked on construction")
}

impl LocalGeometry {
    pub fn new(patch: &dyn SurfacePatch, s: f64, t: f64, order: usize) -> Result<Self> {
        if order < MIN_SURFACE_ORDER {
            return Err(Error::InvalidArgument(format!(
                "curvature needs bi-jets of order >= {MIN_SURFACE_ORDER}, got {order}"
            )));
        }
        let x = patch.eval(s, t, order)?;
        LocalGeometry::from_jets(x, s, t)
    }

    pub fn from_jets(x: [Jet2; 5], s: f64, t: f64) -> Result<Self> {
        let sig = Signature::E52;
        if x.iter().any(|c| c.order() < MIN_SURFACE_ORDER) {
            return Err(Error::InvalidArgument(
                "bi-jets of order >= 3 required".into(),
            ));
        }
        let xd: [[Jet2; 5]; 2] = [0, 1].map(|k| x.clone().map(|c| d(&c, k)));
        if x.iter()
            .chain(xd.iter().flatten())
            .any(|c| !c.value().is_finite())
        {
            return Err(Error::NonFinite { s, t });
        }
        let xdd: [[[Jet2; 5]; 2]; 2] =
            [0, 1].map(|i| [0, 1].map(|j| xd[i].clone().map(|c| d(&c, j))));
        let g: [[Jet2; 2]; 2] = [0, 1].map(|i| [0, 1].map(|j| sig.inner(&xd[i], &xd[j])));
        let det = g[0][0].clone() * g[1][1].clone() - g[0][1].clone() * g[0][1].clone();
        if det.value().abs() < DEGENERATE_DET {
            return Err(Error::DegenerateTangent {
                s,
                t,
                reason: format!("induced metric is singular (det {:e})", det.value()),
            });
        }
        let frame_jets = orthonormal_frame(&x, &xd[0], &xd[1]).map_err(|e| e.at_point(s, t))?;
        let inv_det = det.recip()?;
        let ginv = [
            [
                g[1][1].clone() * inv_det.clone(),
                -g[0][1].clone() * inv_det.clone(),
            ],
            [
                -g[0][1].clone() * inv_det.clone(),
                g[0][0].clone() * inv_det.clone(),
            ],
        ];
        // dg[k][a][b] = ∂_k g_ab
        let dg: [[[Jet2; 2]; 2]; 2] =
            [0, 1].map(|k| [0, 1].map(|a| [0, 1].map(|b| d(&g[a][b], k))));
        // first kind: Γ_{m,ij} = <∇_i ∂_j, ∂_m>
        let gamma1: [[[Jet2; 2]; 2]; 2] = [0, 1].map(|m| {
            [0, 1].map(|i| {
                [0, 1].map(|j| {
                    (dg[i][j][m].clone() + dg[j][i][m].clone() - dg[m][i][j].clone()) * 0.5
                })
            })
        });
        let gamma2: [[[Jet2; 2]; 2]; 2] = [0, 1].map(|k| {
            [0, 1].map(|i| {
                [0, 1].map(|j| {
                    ginv[k][0].clone() * gamma1[0][i][j].clone()
                        + ginv[k][1].clone() * gamma1[1][i][j].clone()
                })
            })
        });
        // R(∂s,∂t,∂t,∂s) = ∂_s Γ_{s,tt} - ∂_t Γ_{s,st} - Γ^m_tt Γ_{m,ss} + Γ^m_st Γ_{m,ts}
        let mut r = d(&gamma1[0][1][1], 0).value() - d(&gamma1[0][0][1], 1).value();
        for m in 0..2 {
            r -= gamma2[m][1][1].value() * gamma1[m][0][0].value();
            r += gamma2[m][0][1].value() * gamma1[m][1][0].value();
        }
        let k_intrinsic = r / det.value();

        let hhat_jets: [[[Jet2; 5]; 2]; 2] = [0, 1].map(|i| {
            [0, 1].map(|j| {
                std::array::from_fn(|c| {
                    xdd[i][j][c].clone()
                        - gamma2[0][i][j].clone() * xd[0][c].clone()
                        - gamma2[1][i][j].clone() * xd[1][c].clone()
                        + g[i][j].clone() * x[c].clone()
                })
            })
        });
        let hhat = [0, 1].map(|i| [0, 1].map(|j| values(&hhat_jets[i][j])));
        let dhhat = [0, 1].map(|k| {
            [0, 1]
                .map(|i| [0, 1].map(|j| std::array::from_fn(|c| d(&hhat_jets[i][j][c], k).value())))
        });

        Ok(LocalGeometry {
            s,
            t,
            x: values(&x),
            xs: values(&xd[0]),
            xt: values(&xd[1]),
            g: [0, 1].map(|i| [0, 1].map(|j| g[i][j].value())),
            ginv: [0, 1].map(|i| [0, 1].map(|j| ginv[i][j].value())),
            det: det.value(),
            christoffel: [0, 1].map(|k| [0, 1].map(|i| [0, 1].map(|j| gamma2[k][i][j].value()))),
            k_intrinsic,
            hhat,
            dhhat,
            frame: std::array::from_fn(|a| values(&frame_jets[a])),
            frame_jets,
        })
    }

    pub fn metric(&self) -> FirstFundamentalForm {
        FirstFundamentalForm {
            g_ss: self.g[0][0],
            g_st: self.g[0][1],
            g_tt: self.g[1][1],
            det: self.det,
        }
    }

    /// `Γ^k_ij`.
    pub fn christoffel(&self, k: usize, i: usize, j: usize) -> f64 {
        self.christoffel[k][i][j]
    }

    pub fn sphere_residual(&self) -> f64 {
        (ip(&self.x, &self.x) - 1.0).abs()
    }

    /// Intrinsic Gaussian curvature from the metric jets.
    pub fn gaussian_curvature(&self) -> f64 {
        self.k_intrinsic
    }

    /// Gauss-equation value `1 + (<ĥ_ss,ĥ_tt> - <ĥ_st,ĥ_st>) / det g`.
    pub fn gaussian_curvature_extrinsic(&self) -> f64 {
        let h = &self.hhat;
        1.0 + (ip(&h[0][0], &h[1][1]) - ip(&h[0][1], &h[0][1])) / self.det
    }

    /// Spherical second fundamental form `ĥ(∂_i, ∂_j)`.
    pub fn hhat(&self, i: usize, j: usize) -> V5 {
        self.hhat[i][j]
    }

    /// Second fundamental form of the surface in E^5_2: `ĥ - g x`.
    pub fn h_ambient(&self, i: usize, j: usize) -> V5 {
        lin(&[(1.0, &self.hhat[i][j]), (-self.g[i][j], &self.x)])
    }

    /// Coordinates `(a^s, a^t)` of the tangential part of `v`.
    pub fn tangent_coefficients(&self, v: &V5) -> [f64; 2] {
        let b = [ip(v, &self.xs), ip(v, &self.xt)];
        [
            self.ginv[0][0] * b[0] + self.ginv[0][1] * b[1],
            self.ginv[1][0] * b[0] + self.ginv[1][1] * b[1],
        ]
    }

    pub fn tangent_vector(&self, a: [f64; 2]) -> V5 {
        lin(&[(a[0], &self.xs), (a[1], &self.xt)])
    }

    /// `ĥ(X, Y)` for coordinate vectors `X = a^i ∂_i`, `Y = b^j ∂_j`.
    pub fn hhat_on(&self, a: [f64; 2], b: [f64; 2]) -> V5 {
        let mut out = [0.0; 5];
        for i in 0..2 {
            for j in 0..2 {
                for c in 0..5 {
                    out[c] += a[i] * b[j] * self.hhat[i][j][c];
                }
            }
        }
        out
    }

    /// `<[A_ξ, A_η] ∂_s, ∂_t>`.
    pub fn shape_commutator(&self, xi: &V5, eta: &V5) -> f64 {
        let hx = [0, 1].map(|i| [0, 1].map(|j| ip(&self.hhat[i][j], xi)));
        let he = [0, 1].map(|i| [0, 1].map(|j| ip(&self.hhat[i][j], eta)));
        let mut out = 0.0;
        for k in 0..2 {
            for l in 0..2 {
                out += self.ginv[k][l] * (he[0][k] * hx[1][l] - hx[0][k] * he[1][l]);
            }
        }
        out
    }

    /// The orthonormal frame `(e1, e2, e3, e4)` built at this point.
    pub fn orthonormal_frame(&self) -> [V5; 4] {
        self.frame
    }

    /// Null frame `f1 = (e1+e2)/√2, f2 = (e1-e2)/√2, f3 = (e3+e4)/√2,
    /// f4 = (e4-e3)/√2` of the constructed orthonormal frame.
    pub fn null_frame(&self) -> [V5; 4] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let e = &self.frame;
        [
            lin(&[(r, &e[0]), (r, &e[1])]),
            lin(&[(r, &e[0]), (-r, &e[1])]),
            lin(&[(r, &e[2]), (r, &e[3])]),
            lin(&[(r, &e[3]), (-r, &e[2])]),
        ]
    }

    /// Orthonormal frame field jets (order one less than the patch jets).
    pub fn frame_jets(&self) -> &[[Jet2; 5]; 4] {
        &self.frame_jets
    }

    /// Checks a caller-supplied frame: Gram matrix, tangency of the first two
    /// vectors, normality of the last two. Returns the tangent coordinates of
    /// the first two vectors.
    fn check_frame(&self, frame: &[V5; 4], expected: &[[f64; 4]; 4]) -> Result<[[f64; 2]; 2]> {
        let mut residual: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                residual = residual.max((ip(&frame[a], &frame[b]) - expected[a][b]).abs());
            }
        }
        if !(residual < FRAME_TOLERANCE) {
            return Err(Error::NotPseudoOrthonormal { residual });
        }
        let coeffs = [0, 1].map(|a| self.tangent_coefficients(&frame[a]));
        for a in 0..2 {
            let r = max_abs(&diff(&frame[a], &self.tangent_vector(coeffs[a])));
            if !(r < FRAME_TOLERANCE * max_abs(&frame[a]).max(1.0)) {
                return Err(Error::InvalidArgument(format!(
                    "frame vector {} is not tangent (residual {r:e})",
                    a + 1
                )));
            }
        }
        for v in &frame[2..] {
            let scale = max_abs(v).max(1.0) * max_abs(&self.xs).max(max_abs(&self.xt)).max(1.0);
            let r = [ip(v, &self.x), ip(v, &self.xs), ip(v, &self.xt)]
                .iter()
                .fold(0.0f64, |m, c| m.max(c.abs()));
            if !(r < FRAME_TOLERANCE * scale) {
                return Err(Error::InvalidArgument(format!(
                    "frame vectors 3 and 4 must be normal (residual {r:e})"
                )));
            }
        }
        Ok(coeffs)
    }

    /// `ĥ` on a pseudo-orthonormal null frame `f1..f4` with `f1, f2` tangent.
    pub fn spherical_sff(&self, frame: &[V5; 4]) -> Result<SecondFundamentalForm> {
        let [a1, a2] = self.check_frame(frame, &NULL_FRAME_GRAM)?;
        let h11 = self.hhat_on(a1, a1);
        let h12 = self.hhat_on(a1, a2);
        let h22 = self.hhat_on(a2, a2);
        Ok(SecondFundamentalForm {
            h3_11: ip(&h11, &frame[2]),
            h3_22: ip(&h22, &frame[2]),
            h4_11: ip(&h11, &frame[3]),
            h4_22: ip(&h22, &frame[3]),
            h11,
            h12,
            h22,
        })
    }

    /// `Ĥ = -ĥ(f1, f2)` in the constructed null frame.
    pub fn mean_curvature(&self) -> V5 {
        let f = self.null_frame();
        let a1 = self.tangent_coefficients(&f[0]);
        let a2 = self.tangent_coefficients(&f[1]);
        self.hhat_on(a1, a2).map(|c| -c)
    }

    /// `Ĥ = ½ g^ij ĥ_ij`, frame free.
    pub fn mean_curvature_coordinate(&self) -> V5 {
        let mut out = [0.0; 5];
        for i in 0..2 {
            for j in 0..2 {
                for c in 0..5 {
                    out[c] += 0.5 * self.ginv[i][j] * self.hhat[i][j][c];
                }
            }
        }
        out
    }

    fn area_factor(&self, a1: [f64; 2], a2: [f64; 2]) -> f64 {
        a1[0] * a2[1] - a1[1] * a2[0]
    }

    /// `K^D = R^D(e1, e2; e3, e4)` in the constructed frame, oriented by
    /// `det(e1, e2, e3, e4, x) > 0`.
    pub fn normal_curvature(&self) -> f64 {
        let e = &self.frame;
        let lambda = self.area_factor(
            self.tangent_coefficients(&e[0]),
            self.tangent_coefficients(&e[1]),
        );
        lambda * self.shape_commutator(&e[2], &e[3])
    }

    /// `R^D(e1, e2; e3, e4)` for a caller-supplied orthonormal frame.
    pub fn normal_curvature_orthonormal(&self, frame: &[V5; 4]) -> Result<f64> {
        let [a1, a2] = self.check_frame(frame, &ORTHONORMAL_FRAME_GRAM)?;
        Ok(self.area_factor(a1, a2) * self.shape_commutator(&frame[2], &frame[3]))
    }

    /// `K^D = -R^D(f1, f2; f3, f4)` for a caller-supplied null frame.
    pub fn normal_curvature_null(&self, frame: &[V5; 4]) -> Result<f64> {
        let [a1, a2] = self.check_frame(frame, &NULL_FRAME_GRAM)?;
        Ok(-self.area_factor(a1, a2) * self.shape_commutator(&frame[2], &frame[3]))
    }

    /// Gauss, Codazzi and Ricci equations, both sides evaluated on the
    /// constructed orthonormal frame.
    pub fn fundamental_residuals(&self) -> FundamentalResiduals {
        let gauss = (self.k_intrinsic - self.gaussian_curvature_extrinsic()).abs();

        let e = &self.frame;
        let t1 = self.tangent_coefficients(&e[0]);
        let t2 = self.tangent_coefficients(&e[1]);
        let lambda = self.area_factor(t1, t2);
        let gam = &self.christoffel;
        // (∇̄_k ĥ)_ij up to tangential and x components, which drop out when
        // paired with e3, e4.
        let cod = |k: usize, i: usize, j: usize| -> V5 {
            let mut v = self.dhhat[k][i][j];
            for m in 0..2 {
                for c in 0..5 {
                    v[c] -= gam[m][k][i] * self.hhat[m][j][c] + gam[m][k][j] * self.hhat[i][m][c];
                }
            }
            v
        };
        let mut codazzi: f64 = 0.0;
        for tc in [t1, t2] {
            let mut dvec = [0.0; 5];
            for j in 0..2 {
                let dj = diff(&cod(0, 1, j), &cod(1, 0, j));
                for c in 0..5 {
                    dvec[c] += tc[j] * dj[c];
                }
            }
            for n in &e[2..] {
                codazzi = codazzi.max((lambda * ip(&dvec, n)).abs());
            }
        }

        let sig = Signature::E52;
        let e3 = &self.frame_jets[2];
        let e4 = &self.frame_jets[3];
        let a: [Jet2; 2] = [0, 1].map(|i| {
            let de3: [Jet2; 5] = std::array::from_fn(|c| d(&e3[c], i));
            sig.inner(&de3, e4)
        });
        let lhs = d(&a[1], 0).value() - d(&a[0], 1).value();
        let rhs = self.shape_commutator(&e[2], &e[3]);
        let ricci = (lambda * (lhs - rhs)).abs();

        FundamentalResiduals {
            gauss,
            codazzi,
            ricci,
        }
    }

    pub fn report(&self) -> CurvatureReport {
        let h = self.mean_curvature();
        let k_normal = self.normal_curvature();
        CurvatureReport {
            s: self.s,
            t: self.t,
            k: self.k_intrinsic,
            k_normal,
            k_normal_abs: k_normal.abs(),
            mean_curvature: h,
            mean_curvature_max: max_abs(&h),
            mean_curvature_norm: ip(&h, &h).abs().sqrt(),
            sphere: self.sphere_residual(),
            metric_form: None,
            residuals: self.fundamental_residuals(),
        }
    }
}
