//! Backward-wave two-point boundary problem for the coupled Stokes /
//! anti-Stokes modes: scattering matrix and Langevin Green's kernels.
//!
//! The propagation state is (a_s(z, +omega), a_as^dagger(z, -omega)) with z in
//! units of the medium length. The Stokes mode enters at z = 0 and exits at
//! z = 1; the anti-Stokes mode travels backward, entering at z = 1 and exiting
//! at z = 0. The full-medium transfer matrix E = exp(M) therefore gets
//! rearranged to map physical inputs to physical outputs.

use crate::atomic::CoupledModeCoefficients;
use crate::linalg::Mat2;
use crate::scalar::{ci, cone, czero, Scalar, C};
use crate::{Error, Result};

/// Physical input -> output map of the boundary problem, per frequency.
#[derive(Clone, Copy, Debug)]
pub struct ScatteringMatrix<T: Scalar> {
    pub a: C<T>,
    pub b: C<T>,
    pub c: C<T>,
    pub d: C<T>,
}

fn mode_mat2<T: Scalar>(m: &CoupledModeCoefficients<T>) -> Mat2<T> {
    Mat2([[m.m11, m.m12], [m.m21, m.m22]])
}

fn rearrange<T: Scalar>(e: &Mat2<T>, omega: T) -> Result<ScatteringMatrix<T>> {
    let e22 = e.0[1][1];
    if e22.norm() < T::of(1e-14) {
        return Err(Error::BackwardGain {
            omega: omega.to_f64().unwrap_or(f64::NAN),
            magnitude: e22.norm().to_f64().unwrap_or(0.0),
        });
    }
    Ok(ScatteringMatrix {
        a: e.0[0][0] - e.0[0][1] * e.0[1][0] / e22,
        b: e.0[0][1] / e22,
        c: -e.0[1][0] / e22,
        d: cone::<T>() / e22,
    })
}

/// Scattering matrix from the matrix exponential of the coupled-mode matrix.
pub fn scattering_matrix<T: Scalar>(
    m: &CoupledModeCoefficients<T>,
) -> Result<ScatteringMatrix<T>> {
    rearrange(&mode_mat2(m).expm(), m.omega)
}

/// Langevin Green's kernels on a z-quadrature: for each node z', the response
/// of the two output ports to a unit force injected at z', with the i sqrt(kappa)
/// prefactor folded in.
#[derive(Clone, Debug)]
pub struct GreensKernels<T: Scalar> {
    /// Quadrature nodes and weights on (0, 1).
    pub nodes: Vec<(T, T)>,
    /// p_jk(z', omega): Stokes-output kernel, one 9-vector per node.
    pub p: Vec<[C<T>; 9]>,
    /// q_jk(z', omega): anti-Stokes-output kernel, one 9-vector per node.
    pub q: Vec<[C<T>; 9]>,
}

/// Propagates unit Langevin impulses from each quadrature node to the output
/// ports, applying the same boundary rearrangement as [`scattering_matrix`].
pub fn greens_kernels<T: Scalar>(
    m: &CoupledModeCoefficients<T>,
    scat: &ScatteringMatrix<T>,
    nodes: &[(T, T)],
) -> GreensKernels<T> {
    let mat = mode_mat2(m);
    let isqrt_k = ci::<T>() * C::new(m.kappa.sqrt(), T::zero());
    let mut p = Vec::with_capacity(nodes.len());
    let mut q = Vec::with_capacity(nodes.len());
    for &(z, _) in nodes {
        let s = mat.scale(C::new(T::one() - z, T::zero())).expm();
        // Boundary rearrangement: a forward impulse injected at z' reaches the
        // Stokes exit through S with the backward reflection B subtracted, and
        // the anti-Stokes exit through the backward transmission D.
        let a1 = s.0[0][0] - scat.b * s.0[1][0];
        let a2 = s.0[0][1] - scat.b * s.0[1][1];
        let b1 = -scat.d * s.0[1][0];
        let b2 = -scat.d * s.0[1][1];
        let mut pk = [czero::<T>(); 9];
        let mut qk = [czero::<T>(); 9];
        for i in 0..9 {
            pk[i] = isqrt_k * (a1 * m.noise_weights_s[i] + a2 * m.noise_weights_as[i]);
            qk[i] = isqrt_k * (b1 * m.noise_weights_s[i] + b2 * m.noise_weights_as[i]);
        }
        p.push(pk);
        q.push(qk);
    }
    GreensKernels {
        nodes: nodes.to_vec(),
        p,
        q,
    }
}

/// Independent verification path: solves the same boundary-value problem by
/// shooting with fixed-step classical Runge-Kutta. Test-only by intent.
pub fn oracle_integrate<T: Scalar>(
    m: &CoupledModeCoefficients<T>,
    steps: usize,
) -> Result<ScatteringMatrix<T>> {
    assert!(steps >= 1, "need at least one step");
    let mat = mode_mat2(m);
    let h = C::new(T::one() / T::of(steps as f64), T::zero());
    // Integrate the full transfer matrix dE/dz = M E column-wise.
    let mut e = Mat2::identity();
    for _ in 0..steps {
        let k1 = mat.mul(&e);
        let k2 = mat.mul(&e.add(&k1.scale(h * C::new(T::of(0.5), T::zero()))));
        let k3 = mat.mul(&e.add(&k2.scale(h * C::new(T::of(0.5), T::zero()))));
        let k4 = mat.mul(&e.add(&k3.scale(h)));
        let mut incr = k1;
        incr = incr.add(&k2.scale(C::new(T::of(2.0), T::zero())));
        incr = incr.add(&k3.scale(C::new(T::of(2.0), T::zero())));
        incr = incr.add(&k4);
        e = e.add(&incr.scale(h * C::new(T::of(1.0 / 6.0), T::zero())));
    }
    rearrange(&e, m.omega)
}

/// Per-frequency commutator sum rule |A|^2 - |B|^2 + (antinormal - normal
/// kernel noise) = 1; the standard check that the Langevin forces exactly
/// compensate gain and loss.
pub fn commutator_sum<T: Scalar>(
    scat: &ScatteringMatrix<T>,
    kernels: &GreensKernels<T>,
    diffusion: &crate::atomic::DiffusionMatrix<T>,
) -> T {
    let mut noise = T::zero();
    for (idx, &(_, w)) in kernels.nodes.iter().enumerate() {
        let p = &kernels.p[idx];
        let mut anti = czero::<T>();
        let mut norm = czero::<T>();
        for mu in 0..9 {
            for nu in 0..9 {
                anti = anti + p[mu] * diffusion.antinormal(mu, nu) * p[nu].conj();
                norm = norm + p[mu].conj() * diffusion.normal(mu, nu) * p[nu];
            }
        }
        noise = noise + w * (anti - norm).re;
    }
    scat.a.norm_sqr() - scat.b.norm_sqr() + noise
}
