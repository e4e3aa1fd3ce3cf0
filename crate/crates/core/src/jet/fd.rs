use super::{Elementary, Jet1};
use crate::error::{Error, Result};

/// A scalar function of one variable that can be evaluated both pointwise and
/// as a jet. The two paths must be implemented independently for the
/// cross-check to mean anything.
pub trait JetFunction {
    fn value(&self, t: f64) -> Result<f64>;
    fn jet(&self, t0: f64, order: usize) -> Result<Jet1>;
}

impl JetFunction for Elementary {
    fn value(&self, t: f64) -> Result<f64> {
        self.eval(t)
    }

    fn jet(&self, t0: f64, order: usize) -> Result<Jet1> {
        Jet1::variable(t0, order).apply(*self)
    }
}

/// Central difference of order h^2 for derivative k.
fn central(f: &dyn JetFunction, t0: f64, k: usize, h: f64) -> Result<f64> {
    let y = |m: f64| f.value(t0 + m * h);
    let d = match k {
        1 => (y(1.0)? - y(-1.0)?) / (2.0 * h),
        2 => (y(1.0)? - 2.0 * y(0.0)? + y(-1.0)?) / (h * h),
        3 => (y(2.0)? - 2.0 * y(1.0)? + 2.0 * y(-1.0)? - y(-2.0)?) / (2.0 * h.powi(3)),
        4 => (y(2.0)? - 4.0 * y(1.0)? + 6.0 * y(0.0)? - 4.0 * y(-1.0)? + y(-2.0)?) / h.powi(4),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "finite differences support k in 1..=4, got {k}"
            )))
        }
    };
    Ok(d)
}

/// Central difference with one level of Richardson extrapolation (error h^4).
pub fn fd_derivative(f: &dyn JetFunction, t0: f64, k: usize, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {h}"
        )));
    }
    let coarse = central(f, t0, k, h)?;
    let fine = central(f, t0, k, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Discrepancy between the jet derivative and the finite-difference estimate,
/// relative to `max(1, |jet derivative|)`.
pub fn fd_crosscheck(f: &dyn JetFunction, t0: f64, k: usize, h: f64) -> Result<f64> {
    let exact = f.jet(t0, k)?.derivative(k)?;
    let approx = fd_derivative(f, t0, k, h)?;
    Ok((exact - approx).abs() / exact.abs().max(1.0))
}

/// A step balancing truncation and rounding for derivative `k`, shrunk so the
/// widest stencil point stays well inside a distance `room` to the nearest
/// singularity or domain end.
pub fn fd_step(k: usize, t0: f64, room: f64) -> f64 {
    let balanced = f64::EPSILON.powf(1.0 / (k as f64 + 4.0)) * t0.abs().max(1.0);
    balanced.min(0.03 * room)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct One;

    impl JetFunction for One {
        fn value(&self, _: f64) -> Result<f64> {
            Ok(1.0)
        }
        fn jet(&self, _: f64, order: usize) -> Result<Jet1> {
            Ok(Jet1::constant(1.0, order))
        }
    }

    #[test]
    fn sine_second_derivative() {
        assert!(fd_crosscheck(&Elementary::Sin, 0.3, 2, 1e-4).unwrap() < 1e-6);
    }

    #[test]
    fn constant_has_zero_discrepancy() {
        for k in 1..=4 {
            assert_eq!(fd_crosscheck(&One, 0.7, k, 1e-2).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_unsupported_order() {
        assert!(fd_crosscheck(&Elementary::Exp, 0.0, 5, 1e-2).is_err());
        assert!(fd_derivative(&Elementary::Exp, 0.0, 1, 0.0).is_err());
    }

    #[test]
    fn step_respects_room() {
        assert!(fd_step(4, 0.02, 0.02) <= 6e-4);
        assert!((fd_step(1, 0.0, 10.0) - f64::EPSILON.powf(0.2)).abs() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn elementary_jets_match_finite_differences(
            f in proptest::sample::select(Elementary::ALL.to_vec()),
            t0 in 0.2f64..1.35,
            k in 1usize..=4,
        ) {
            // distance to the nearest singularity of `f`
            let room = match f {
                Elementary::Tan | Elementary::Sec => std::f64::consts::FRAC_PI_2 - t0,
                Elementary::Csc | Elementary::Cot | Elementary::Ln | Elementary::Sqrt => t0,
                _ => 10.0,
            };
            let d = fd_crosscheck(&f, t0, k, fd_step(k, t0, room)).unwrap();
            proptest::prop_assert!(d < 1e-5, "{} at {t0}, order {k}: {d:e}", f.name());
        }
    }
}
