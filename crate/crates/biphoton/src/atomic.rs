//! Heisenberg-Langevin drift system for the effective three-level double-Lambda
//! scheme, its classical steady state, per-frequency coupled-mode coefficients,
//! and the Langevin diffusion matrix from the generalized Einstein relations.
//!
//! Level scheme: |1>, |2> ground states, |3> excited (the paper's |4> is
//! identical to |3>). The driving field couples |1>-|3> at detuning Delta_d,
//! the coupling field |2>-|3> at detuning Delta_c. Stokes photons emit on
//! |3>-|2>, anti-Stokes on |3>-|1>.
//!
//! Rotating frame: interaction picture where the quantum-field central
//! frequencies satisfy the two-photon resonance, i.e. the classical
//! Hamiltonian is diag(0, Delta_c - Delta_d, -Delta_d) with couplings
//! -Omega/2. A sideband offset omega in the paper's frame maps to the
//! resolvent argument nu = omega + (Delta_d - Delta_c) in this frame; the
//! anti-Stokes EIT transparency then lands at omega = Delta_c as required by
//! omega_as_bar = omega_41 + Delta_c.

use crate::linalg::Lu;
use crate::params::PhysicalParams;
use crate::scalar::{ci, czero, Scalar, C};
use crate::{Error, Result};

/// Canonical operator ordering for the 9 fluctuation operators delta sigma_jk.
/// Every index map in the crate derives from this single list.
pub const BASIS: [(usize, usize); 9] = [
    (1, 1),
    (2, 2),
    (3, 3),
    (1, 2),
    (2, 1),
    (1, 3),
    (3, 1),
    (2, 3),
    (3, 2),
];

/// Index of sigma_jk in [`BASIS`] (1-based level labels).
pub const fn index_of(j: usize, k: usize) -> usize {
    let mut i = 0;
    while i < 9 {
        if BASIS[i].0 == j && BASIS[i].1 == k {
            return i;
        }
        i += 1;
    }
    panic!("level labels out of range");
}

/// `CONJ[mu]` is the index of sigma_mu^dagger = sigma_kj.
pub const CONJ: [usize; 9] = {
    let mut map = [0usize; 9];
    let mut i = 0;
    while i < 9 {
        map[i] = index_of(BASIS[i].1, BASIS[i].0);
        i += 1;
    }
    map
};

const S11: usize = index_of(1, 1);
const S22: usize = index_of(2, 2);
const S33: usize = index_of(3, 3);
const S23: usize = index_of(2, 3);
const S31: usize = index_of(3, 1);

type Vec9<T> = [C<T>; 9];
type Mat9<T> = [[C<T>; 9]; 9];

/// Drift matrix and quantum-field source vectors of the linearized
/// Heisenberg-Langevin system d(delta sigma)/dt = drift * delta sigma
/// + source_s * (g a_s) + source_as * (g a_as^dagger) + F.
#[derive(Clone, Debug)]
pub struct DriftSystem<T: Scalar> {
    pub drift: Mat9<T>,
    /// Maps g a_s into the fluctuation equations: -i <[sigma_32, sigma_mu]>.
    pub source_s: Vec9<T>,
    /// Maps g a_as^dagger into the fluctuation equations: -i <[sigma_13, sigma_mu]>.
    pub source_as: Vec9<T>,
    /// Rotating-frame convention, for output metadata.
    pub frame_note: &'static str,
    params: PhysicalParams<T>,
}

fn eop(j: usize, k: usize) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    m[j - 1][k - 1] = 1.0;
    m
}

/// Assembles the drift matrix: coherent part i[H, sigma_mu] with the classical
/// rotating-frame Hamiltonian, plus relaxation (Gamma out of |3>, split
/// between |1> and |2> by the branching ratio; Gamma/2 on optical coherences;
/// gamma21 on the ground coherence).
pub fn assemble_drift<T: Scalar>(p: &PhysicalParams<T>) -> DriftSystem<T> {
    assemble_drift_with_branching(p, T::of(0.5), T::of(0.5))
}

/// [`assemble_drift`] with an explicit |3> -> |1| / |3> -> |2> branching split
/// (b1 + b2 = 1); the paper is silent, 50/50 is the default idealization.
pub fn assemble_drift_with_branching<T: Scalar>(
    p: &PhysicalParams<T>,
    b1: T,
    b2: T,
) -> DriftSystem<T> {
    let mut h = [[czero::<T>(); 3]; 3];
    h[1][1] = C::new(p.delta_c - p.delta_d, T::zero());
    h[2][2] = C::new(-p.delta_d, T::zero());
    let half = T::of(0.5);
    h[2][0] = C::new(-p.omega_d * half, T::zero());
    h[0][2] = h[2][0];
    h[2][1] = C::new(-p.omega_c * half, T::zero());
    h[1][2] = h[2][1];

    let mut drift = [[czero::<T>(); 9]; 9];
    for (mu, &(j, k)) in BASIS.iter().enumerate() {
        // i[H, E_jk] written back onto the basis: sigma_jk evolves on the
        // operator level, so the superoperator acts column-wise.
        let e = eop(j, k);
        for m in 0..3 {
            for n in 0..3 {
                let mut acc = czero::<T>();
                for l in 0..3 {
                    acc = acc + h[m][l] * T::of(e[l][n]) - h[l][n] * T::of(e[m][l]);
                }
                let row = index_of(m + 1, n + 1);
                drift[row][mu] = drift[row][mu] + ci::<T>() * acc;
            }
        }
    }

    // Population relaxation out of |3> at rate Gamma = 1.
    drift[S33][S33] = drift[S33][S33] - C::new(T::one(), T::zero());
    drift[S11][S33] = drift[S11][S33] + C::new(b1, T::zero());
    drift[S22][S33] = drift[S22][S33] + C::new(b2, T::zero());
    // Optical coherences decay at Gamma/2.
    for (j, k) in [(1, 3), (3, 1), (2, 3), (3, 2)] {
        let i = index_of(j, k);
        drift[i][i] = drift[i][i] - C::new(half, T::zero());
    }
    // Ground-state decoherence.
    for (j, k) in [(1, 2), (2, 1)] {
        let i = index_of(j, k);
        drift[i][i] = drift[i][i] - C::new(p.gamma21, T::zero());
    }

    let mut sys = DriftSystem {
        drift,
        source_s: [czero(); 9],
        source_as: [czero(); 9],
        frame_note: "interaction picture; H_cl = diag(0, Dc-Dd, -Dd), couplings -Omega/2; \
                     sideband offset omega maps to nu = omega + (Dd - Dc)",
        params: *p,
    };
    // Sources require the steady state; fill them lazily in AtomicResponse.
    // Keep the operator-level commutator maps here so the structure is in one
    // place: source_s[mu] = -i <[E32, E_mu]>, source_as[mu] = -i <[E13, E_mu]>.
    sys.source_s = [czero(); 9];
    sys.source_as = [czero(); 9];
    sys
}

impl<T: Scalar> DriftSystem<T> {
    pub fn params(&self) -> &PhysicalParams<T> {
        &self.params
    }

    /// Sum of the three population rows; identically zero by trace
    /// conservation.
    pub fn trace_row(&self) -> Vec9<T> {
        let mut row = [czero::<T>(); 9];
        for mu in 0..9 {
            row[mu] = self.drift[S11][mu] + self.drift[S22][mu] + self.drift[S33][mu];
        }
        row
    }
}

/// Zeroth-order expectation values <sigma_jk> of the classical Bloch problem.
#[derive(Clone, Copy, Debug)]
pub struct SteadyState<T: Scalar> {
    pub sigma0: Vec9<T>,
}

impl<T: Scalar> SteadyState<T> {
    pub fn population(&self, level: usize) -> T {
        self.sigma0[index_of(level, level)].re
    }
}

/// Solves drift * sigma = 0 with the unit-trace constraint replacing one
/// population row.
pub fn steady_state<T: Scalar>(d: &DriftSystem<T>) -> Result<SteadyState<T>> {
    let mut m = d.drift;
    let mut rhs = [czero::<T>(); 9];
    for mu in 0..9 {
        m[0][mu] = czero();
    }
    m[0][S11] = C::new(T::one(), T::zero());
    m[0][S22] = C::new(T::one(), T::zero());
    m[0][S33] = C::new(T::one(), T::zero());
    rhs[0] = C::new(T::one(), T::zero());

    if let Some(lu) = Lu::factor(&m) {
        let mut sigma0 = lu.solve(&rhs);
        // Enforce exact unit trace against rounding.
        let tr = sigma0[S11].re + sigma0[S22].re + sigma0[S33].re;
        for v in sigma0.iter_mut() {
            *v = *v / C::new(tr, T::zero());
        }
        return Ok(SteadyState { sigma0 });
    }

    // Degenerate case (e.g. all fields off with gamma21 = 0): the ground state
    // is a steady state but not unique. Accept it only if it actually
    // annihilates the drift.
    let mut ground = [czero::<T>(); 9];
    ground[S11] = C::new(T::one(), T::zero());
    let mut residual = T::zero();
    for row in 0..9 {
        let mut acc = czero::<T>();
        for mu in 0..9 {
            acc = acc + d.drift[row][mu] * ground[mu];
        }
        residual = residual.max(acc.norm());
    }
    if residual < T::of(1e-10) {
        Ok(SteadyState { sigma0: ground })
    } else {
        Err(Error::SingularSteadyState)
    }
}

/// Expectation of sigma_al sigma_be in the zeroth-order state, using the
/// operator contraction E_ab E_cd = delta_bc E_ad.
fn prod_expect<T: Scalar>(s0: &Vec9<T>, al: usize, be: usize) -> C<T> {
    let (a, b) = BASIS[al];
    let (c, d) = BASIS[be];
    if b == c {
        s0[index_of(a, d)]
    } else {
        czero()
    }
}

fn commutator_expect<T: Scalar>(s0: &Vec9<T>, j: usize, k: usize, mu: usize) -> C<T> {
    // <[E_jk, E_mu]> via the same contraction rule.
    let (a, b) = BASIS[mu];
    let mut acc = czero::<T>();
    if k == a {
        acc = acc + s0[index_of(j, b)];
    }
    if b == j {
        acc = acc - s0[index_of(a, k)];
    }
    acc
}

/// Quantum-field source vectors evaluated in the steady state:
/// source_s[mu] = -i <[E_32, E_mu]>, source_as[mu] = -i <[E_13, E_mu]>.
pub fn sources<T: Scalar>(s: &SteadyState<T>) -> (Vec9<T>, Vec9<T>) {
    let mut bs = [czero::<T>(); 9];
    let mut bas = [czero::<T>(); 9];
    for mu in 0..9 {
        bs[mu] = -ci::<T>() * commutator_expect(&s.sigma0, 3, 2, mu);
        bas[mu] = -ci::<T>() * commutator_expect(&s.sigma0, 1, 3, mu);
    }
    (bs, bas)
}

/// Langevin force correlations <F_mu F_nu> from the generalized Einstein
/// relation, with accessors for the two orderings used by the spectra.
#[derive(Clone, Debug)]
pub struct DiffusionMatrix<T: Scalar> {
    d: Mat9<T>,
}

impl<T: Scalar> DiffusionMatrix<T> {
    /// Raw <F_mu F_nu>.
    pub fn raw(&self) -> &Mat9<T> {
        &self.d
    }

    /// Normal ordering D_{jk^dagger, j'k'} = <F_mu^dagger F_nu> (Stokes
    /// spectrum and the cross term).
    pub fn normal(&self, mu: usize, nu: usize) -> C<T> {
        self.d[CONJ[mu]][nu]
    }

    /// Antinormal ordering D_{jk, j'k'^dagger} = <F_mu F_nu^dagger>
    /// (anti-Stokes spectrum).
    pub fn antinormal(&self, mu: usize, nu: usize) -> C<T> {
        self.d[mu][CONJ[nu]]
    }
}

/// D_{mu nu} = d<sigma_mu sigma_nu>/dt|_ss - <drift(sigma_mu) sigma_nu>
///           - <sigma_mu drift(sigma_nu)>, at zeroth order.
pub fn diffusion_matrix<T: Scalar>(
    d: &DriftSystem<T>,
    s: &SteadyState<T>,
) -> DiffusionMatrix<T> {
    let s0 = &s.sigma0;
    let mut drift_s0 = [czero::<T>(); 9];
    for row in 0..9 {
        for mu in 0..9 {
            drift_s0[row] = drift_s0[row] + d.drift[row][mu] * s0[mu];
        }
    }
    let mut out = [[czero::<T>(); 9]; 9];
    for mu in 0..9 {
        for nu in 0..9 {
            let (a, b) = BASIS[mu];
            let (c, dd) = BASIS[nu];
            let t1 = if b == c {
                drift_s0[index_of(a, dd)]
            } else {
                czero()
            };
            let mut t2 = czero::<T>();
            let mut t3 = czero::<T>();
            for r in 0..9 {
                t2 = t2 + d.drift[mu][r] * prod_expect(s0, r, nu);
                t3 = t3 + d.drift[nu][r] * prod_expect(s0, mu, r);
            }
            out[mu][nu] = t1 - t2 - t3;
        }
    }
    DiffusionMatrix { d: out }
}

/// Per-frequency coupled-mode coefficients of
/// d/dz [a_s(z, +omega); a_as^dagger(z, -omega)] = M(omega) [..] + noise.
#[derive(Clone, Copy, Debug)]
pub struct CoupledModeCoefficients<T: Scalar> {
    pub omega: T,
    pub m11: C<T>,
    pub m12: C<T>,
    pub m21: C<T>,
    /// Includes the +i Delta_k L phase-mismatch term of the backward equation.
    pub m22: C<T>,
    /// Resolvent row extracting sigma_23 (feeds the a_s equation).
    pub noise_weights_s: Vec9<T>,
    /// Resolvent row extracting sigma_31 (feeds the a_as^dagger equation).
    pub noise_weights_as: Vec9<T>,
    /// Coupling strength OD/4 in Gamma-units (the paper's g^2 N / c with z in
    /// units of L).
    pub kappa: T,
}

/// Bundle of everything frequency-independent, ready for per-omega solves.
#[derive(Clone, Debug)]
pub struct AtomicResponse<T: Scalar> {
    pub system: DriftSystem<T>,
    pub steady: SteadyState<T>,
    pub diffusion: DiffusionMatrix<T>,
    pub source_s: Vec9<T>,
    pub source_as: Vec9<T>,
}

impl<T: Scalar> AtomicResponse<T> {
    pub fn new(p: &PhysicalParams<T>) -> Result<Self> {
        p.validate()?;
        let mut system = assemble_drift(p);
        let steady = steady_state(&system)?;
        let (source_s, source_as) = sources(&steady);
        system.source_s = source_s;
        system.source_as = source_as;
        let diffusion = diffusion_matrix(&system, &steady);
        Ok(AtomicResponse {
            system,
            steady,
            diffusion,
            source_s,
            source_as,
        })
    }

    pub fn params(&self) -> &PhysicalParams<T> {
        self.system.params()
    }

    pub fn kappa(&self) -> T {
        self.params().od / T::of(4.0)
    }

    /// Solves the sideband response at paper-frame offset omega and extracts
    /// the coupled-mode matrix and noise-weight rows.
    pub fn coupled_mode_matrix(&self, omega: T) -> Result<CoupledModeCoefficients<T>> {
        let p = self.params();
        let nu = omega + (p.delta_d - p.delta_c);
        // Rows of R = (-i nu I - drift)^-1 come from solves against the
        // transpose.
        let mut mt = [[czero::<T>(); 9]; 9];
        for i in 0..9 {
            for j in 0..9 {
                mt[j][i] = -self.system.drift[i][j];
            }
            mt[i][i] = mt[i][i] - ci::<T>() * C::new(nu, T::zero());
        }
        let lu = Lu::factor(&mt).ok_or(Error::ResolventSingular {
            omega: omega.to_f64().unwrap_or(f64::NAN),
        })?;
        let mut e23 = [czero::<T>(); 9];
        e23[S23] = C::new(T::one(), T::zero());
        let mut e31 = [czero::<T>(); 9];
        e31[S31] = C::new(T::one(), T::zero());
        let r23 = lu.solve(&e23);
        let r31 = lu.solve(&e31);

        let dot = |row: &Vec9<T>, v: &Vec9<T>| -> C<T> {
            let mut acc = czero::<T>();
            for i in 0..9 {
                acc = acc + row[i] * v[i];
            }
            acc
        };
        let ik = ci::<T>() * C::new(self.kappa(), T::zero());
        Ok(CoupledModeCoefficients {
            omega,
            m11: ik * dot(&r23, &self.source_s),
            m12: ik * dot(&r23, &self.source_as),
            m21: ik * dot(&r31, &self.source_s),
            m22: ik * dot(&r31, &self.source_as) + ci::<T>() * C::new(p.delta_k_l, T::zero()),
            noise_weights_s: r23,
            noise_weights_as: r31,
            kappa: self.kappa(),
        })
    }
}
