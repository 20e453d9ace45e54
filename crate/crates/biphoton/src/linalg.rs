//! Small dense complex linear algebra: LU solves for the 9x9 drift system and
//! a 2x2 matrix exponential for the coupled-mode propagator.

use crate::scalar::{cone, czero, Scalar, C};

/// LU factorization with partial pivoting of a small complex matrix.
pub struct Lu<T: Scalar, const N: usize> {
    lu: [[C<T>; N]; N],
    piv: [usize; N],
}

impl<T: Scalar, const N: usize> Lu<T, N> {
    /// Factors `a`; returns `None` when a pivot falls below `tiny` (singular).
    pub fn factor(a: &[[C<T>; N]; N]) -> Option<Self> {
        let mut lu = *a;
        let mut piv = [0usize; N];
        let tiny = T::of(1e-300).max(T::min_positive_value());
        for k in 0..N {
            let mut imax = k;
            let mut vmax = lu[k][k].norm_sqr();
            for i in k + 1..N {
                let v = lu[i][k].norm_sqr();
                if v > vmax {
                    vmax = v;
                    imax = i;
                }
            }
            if vmax.sqrt() < tiny {
                return None;
            }
            piv[k] = imax;
            lu.swap(k, imax);
            let pivot = lu[k][k];
            for i in k + 1..N {
                let f = lu[i][k] / pivot;
                lu[i][k] = f;
                for j in k + 1..N {
                    let sub = f * lu[k][j];
                    lu[i][j] = lu[i][j] - sub;
                }
            }
        }
        Some(Lu { lu, piv })
    }

    /// Solves `A x = b` for the factored matrix.
    pub fn solve(&self, b: &[C<T>; N]) -> [C<T>; N] {
        let mut x = *b;
        // Apply the recorded row interchanges before substituting; the stored
        // L rows are already in pivoted order.
        for k in 0..N {
            x.swap(k, self.piv[k]);
        }
        for k in 0..N {
            for i in k + 1..N {
                let sub = self.lu[i][k] * x[k];
                x[i] = x[i] - sub;
            }
        }
        for k in (0..N).rev() {
            for j in k + 1..N {
                let sub = self.lu[k][j] * x[j];
                x[k] = x[k] - sub;
            }
            x[k] = x[k] / self.lu[k][k];
        }
        x
    }
}

/// Solves `A x = b` in one shot; `None` when singular.
pub fn solve<T: Scalar, const N: usize>(a: &[[C<T>; N]; N], b: &[C<T>; N]) -> Option<[C<T>; N]> {
    Lu::factor(a).map(|lu| lu.solve(b))
}

/// Dense complex 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T: Scalar>(pub [[C<T>; 2]; 2]);

impl<T: Scalar> Mat2<T> {
    pub fn zero() -> Self {
        Mat2([[czero(); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.0[0][0] = cone();
        m.0[1][1] = cone();
        m
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] =
                    self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = out.0[i][j] + rhs.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for v in row.iter_mut() {
                *v = *v * s;
            }
        }
        out
    }

    fn norm_inf(&self) -> T {
        let r0 = self.0[0][0].norm() + self.0[0][1].norm();
        let r1 = self.0[1][0].norm() + self.0[1][1].norm();
        r0.max(r1)
    }

    /// Matrix exponential by scaling-and-squaring with a diagonal Pade
    /// approximant of order 6; unconditionally accurate at this size.
    pub fn expm(&self) -> Self {
        let norm = self.norm_inf();
        let s = if norm > T::of(0.5) {
            (norm / T::of(0.5)).log2().ceil().to_i32().unwrap_or(0).max(0) as u32
        } else {
            0
        };
        let a = self.scale(C::new(T::of(0.5).powi(s as i32), T::zero()));

        // Pade(6,6) coefficients of exp(x).
        let coef = [1.0, 0.5, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0];
        let mut pow = Mat2::identity();
        let mut num = Mat2::zero();
        let mut den = Mat2::zero();
        for (k, &c) in coef.iter().enumerate() {
            let term = pow.scale(C::new(T::of(c), T::zero()));
            num = num.add(&term);
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            den = den.add(&term.scale(C::new(sign, T::zero())));
            if k + 1 < coef.len() {
                pow = pow.mul(&a);
            }
        }
        let mut e = den
            .inverse()
            .expect("Pade denominator singular; norm scaling guarantees invertibility")
            .mul(&num);
        for _ in 0..s {
            e = e.mul(&e);
        }
        e
    }

    /// Inverse; `None` when the determinant underflows.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0];
        if det.norm() < T::of(1e-300).max(T::min_positive_value()) {
            return None;
        }
        let inv = cone::<T>() / det;
        Some(Mat2([
            [self.0[1][1] * inv, -self.0[0][1] * inv],
            [-self.0[1][0] * inv, self.0[0][0] * inv],
        ]))
    }
}

/// Gauss-Legendre nodes and weights on (0, 1).
///
/// Nodes come from Newton iteration on the Legendre polynomial recurrence,
/// then get mapped from (-1, 1) to the unit interval.
pub fn gauss_legendre<T: Scalar>(n: usize) -> Vec<(T, T)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    let nf = T::of(n as f64);
    for i in 0..n {
        // Tricomi initial guess for the i-th root.
        let theta = T::of(std::f64::consts::PI) * (T::of(i as f64) + T::of(0.75))
            / (nf + T::of(0.5));
        let mut x = theta.cos();
        for _ in 0..100 {
            // p = P_n(x), dp = P_n'(x) via the three-term recurrence.
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = T::of(k as f64);
                let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = nf * (x * p1 - p0) / (x * x - T::one());
            let dx = p1 / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::of(4.0) {
                break;
            }
        }
        // Weight on (-1, 1): 2 / ((1 - x^2) P_n'(x)^2).
        let mut p0 = T::one();
        let mut p1 = x;
        for k in 2..=n {
            let kf = T::of(k as f64);
            let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = nf * (x * p1 - p0) / (x * x - T::one());
        let w = T::of(2.0) / ((T::one() - x * x) * dp * dp);
        // Map to (0, 1); roots come out descending in x, order is irrelevant
        // for quadrature.
        out.push(((x + T::one()) / T::of(2.0), w / T::of(2.0)));
    }
    out
}

/// Trapezoidal rule on a uniformly spaced grid.
pub fn trapezoid_uniform<T: Scalar>(values: &[T], spacing: T) -> T {
    if values.len() < 2 {
        return T::zero();
    }
    let inner: T = values[1..values.len() - 1]
        .iter()
        .fold(T::zero(), |acc, &v| acc + v);
    spacing * (inner + (values[0] + values[values.len() - 1]) / T::of(2.0))
}
