//! Truncated Fock-basis reference simulator for single-mode channels. It
//! shares nothing with the phase-space path beyond the channel description,
//! so it serves as an independent oracle for it.

use num_complex::Complex64;

use super::spec::{ChannelSpec, PrimitiveElement};
use crate::error::{Error, Result};
use crate::forms::GaussianState;
use crate::linalg::CMatrix;

pub const MAX_CUTOFF: usize = 200;

/// Largest tolerated relative probability lost through the cutoff.
pub const LEAKAGE_TOL: f64 = 1e-6;

/// Density matrix (photon numbers `0..=cutoff`) of the channel output for a
/// single-mode Gaussian input.
pub fn fock_reference(spec: &ChannelSpec, input: &GaussianState, cutoff: usize) -> Result<CMatrix> {
    if spec.modes != 1 || input.modes() != 1 {
        return Err(Error::ModeMismatch { expected: 1, found: spec.modes.max(input.modes()) });
    }
    if cutoff == 0 || cutoff > MAX_CUTOFF {
        return Err(Error::InvalidParameter(format!(
            "cutoff must be in 1..={MAX_CUTOFF}, got {cutoff}"
        )));
    }
    spec.validate()?;
    let mut sim = FockSim::new(cutoff + 1);
    let mut rho = sim.prepare(input)?;
    for element in &spec.elements {
        rho = sim.apply(element, &rho);
    }
    if sim.leakage > LEAKAGE_TOL {
        return Err(Error::CutoffTooSmall { leakage: sim.leakage });
    }
    Ok(rho)
}

struct FockSim {
    dim: usize,
    ln_fact: Vec<f64>,
    leakage: f64,
}

impl FockSim {
    fn new(dim: usize) -> Self {
        let mut ln_fact = vec![0.0; 2 * dim + 2];
        for n in 1..ln_fact.len() {
            ln_fact[n] = ln_fact[n - 1] + (n as f64).ln();
        }
        FockSim { dim, ln_fact, leakage: 0.0 }
    }

    fn ln_binomial(&self, n: usize, j: usize) -> f64 {
        self.ln_fact[n] - self.ln_fact[j] - self.ln_fact[n - j]
    }

    /// Records probability lost through the cutoff between `rho` and `out`.
    fn track(&mut self, rho: &CMatrix, out: CMatrix) -> CMatrix {
        let before = trace(rho);
        if before > 0.0 {
            self.leakage += ((before - trace(&out)) / before).max(0.0);
        }
        out
    }

    /// Displaced squeezed thermal state matching the input moments.
    fn prepare(&mut self, input: &GaussianState) -> Result<CMatrix> {
        let v = &input.cov;
        let (a, b, d) = (v[(0, 0)], v[(0, 1)], v[(1, 1)]);
        let det = a * d - b * b;
        if !(det > 0.0) || !input.is_physical() {
            return Err(Error::InvalidParameter("input state is not physical".into()));
        }
        let nu = det.sqrt();
        let nbar = (nu - 0.5).max(0.0);
        let cosh2r = (0.5 * (a + d) / nu).max(1.0);
        let r = 0.5 * cosh2r.acosh();
        let phi = (-b).atan2(0.5 * (d - a));

        let q = nbar / (nbar + 1.0);
        let mut rho = CMatrix::zeros(self.dim, self.dim);
        for n in 0..self.dim {
            rho[(n, n)] = Complex64::new((1.0 - q) * q.powi(n as i32), 0.0);
        }
        self.leakage += q.powi(self.dim as i32);

        let xi = Complex64::from_polar(r, phi);
        let squeeze = self.unitary(|a, ad| (a * a * xi.conj() - ad * ad * xi) * Complex64::new(0.5, 0.0));
        rho = self.track(&rho, sandwich(&squeeze, &rho));

        let beta = Complex64::new(input.mean[0], input.mean[1]) / std::f64::consts::SQRT_2;
        rho = self.displace(&rho, beta);
        Ok(rho * Complex64::new(input.log_weight.exp(), 0.0))
    }

    fn displace(&mut self, rho: &CMatrix, beta: Complex64) -> CMatrix {
        let u = self.unitary(|a, ad| ad * beta - a * beta.conj());
        self.track(rho, sandwich(&u, rho))
    }

    /// `exp(G)` built on a padded space and cut back to `dim`.
    fn unitary<F: Fn(&CMatrix, &CMatrix) -> CMatrix>(&self, generator: F) -> CMatrix {
        let w = 2 * self.dim + 20;
        let a = annihilation(w);
        let ad = a.adjoint();
        let u = generator(&a, &ad).exp();
        u.view((0, 0), (self.dim, self.dim)).into_owned()
    }

    fn apply(&mut self, element: &PrimitiveElement, rho: &CMatrix) -> CMatrix {
        use PrimitiveElement::*;
        match *element {
            Displace { beta, .. } => self.displace(rho, beta),
            Phase { phi, .. } => CMatrix::from_fn(self.dim, self.dim, |n, m| {
                rho[(n, m)] * Complex64::from_polar(1.0, phi * (n as f64 - m as f64))
            }),
            Squeeze { r, phi, .. } => {
                let xi = Complex64::from_polar(r, phi);
                let u = self.unitary(|a, ad| (a * a * xi.conj() - ad * ad * xi) * Complex64::new(0.5, 0.0));
                self.track(rho, sandwich(&u, rho))
            }
            LossBs { theta, .. } => self.beam_splitter_loss(rho, theta),
            Amplify { gain, .. } => {
                let out = self.amplify(rho, gain);
                self.track(rho, out)
            },
            ThermalNoise { nbar, .. } => {
                let theta = (1.0 / (1.0 + nbar)).sqrt().acos();
                let lossy = self.beam_splitter_loss(rho, theta);
                let out = self.amplify(&lossy, 1.0 + nbar);
                self.track(&lossy, out)
            }
            TraceDecay { kappa, .. } => CMatrix::from_fn(self.dim, self.dim, |n, m| {
                rho[(n, m)] * (-kappa * (n + m) as f64).exp()
            }),
            TwoModeBs { .. } => unreachable!("single-mode simulator"),
        }
    }

    /// Beam splitter with vacuum ancilla `c`, then trace over `c`. From
    /// `U b^dag U^-1 = cos b^dag - sin c^dag`,
    /// `U |n, 0> = sum_j sqrt(C(n, j)) cos^{n-j} (-sin)^j |n-j, j>`.
    fn beam_splitter_loss(&self, rho: &CMatrix, theta: f64) -> CMatrix {
        let (s, c) = theta.sin_cos();
        let amp = |n: usize, j: usize| -> f64 {
            self.ln_binomial(n, j).mul_add(0.5, 0.0).exp() * c.powi((n - j) as i32) * (-s).powi(j as i32)
        };
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for n in 0..self.dim {
            for m in 0..self.dim {
                let r = rho[(n, m)];
                if r == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..=n.min(m) {
                    out[(n - j, m - j)] += r * (amp(n, j) * amp(m, j));
                }
            }
        }
        out
    }

    /// Two-mode squeezer on `|n, 0>` with `cosh^2 s = G`, ancilla traced:
    /// `U |n, 0> = sum_l cosh^{-(n+1)} s tanh^l s sqrt(C(n+l, l)) |n+l, l>`.
    fn amplify(&self, rho: &CMatrix, gain: f64) -> CMatrix {
        let ln_sech = -0.5 * gain.ln();
        let ln_tanh = 0.5 * ((gain - 1.0) / gain).ln();
        let amp = |n: usize, l: usize| -> f64 {
            let ln_t = if l == 0 { 0.0 } else { l as f64 * ln_tanh };
            ((n + 1) as f64 * ln_sech + ln_t + 0.5 * self.ln_binomial(n + l, l)).exp()
        };
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for n in 0..self.dim {
            for m in 0..self.dim {
                let r = rho[(n, m)];
                if r == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for l in 0..self.dim - n.max(m) {
                    out[(n + l, m + l)] += r * (amp(n, l) * amp(m, l));
                }
            }
        }
        out
    }
}

fn annihilation(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn sandwich(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    u * rho * u.adjoint()
}

pub fn trace(rho: &CMatrix) -> f64 {
    rho.diagonal().iter().map(|z| z.re).sum()
}

/// Fock amplitudes of the coherent state `|z>` up to `dim - 1` photons.
pub fn coherent_vector(z: Complex64, dim: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(dim);
    let mut term = Complex64::new((-0.5 * z.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            term = term * z / (n as f64).sqrt();
        }
        out.push(term);
    }
    out
}

/// `<z|rho|z>` for a truncated density matrix.
pub fn q_function(rho: &CMatrix, z: Complex64) -> f64 {
    let v = coherent_vector(z, rho.nrows());
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..v.len() {
        for m in 0..v.len() {
            acc += v[n].conj() * rho[(n, m)] * v[m];
        }
    }
    acc.re
}

/// First and second moments of a truncated density matrix, in the same
/// quadrature convention as [`GaussianState`]; `log_weight` is `ln tr rho`.
pub fn moments(rho: &CMatrix) -> GaussianState {
    let dim = rho.nrows();
    let tr = trace(rho);
    let mut a1 = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n_mean = 0.0;
    for n in 0..dim {
        n_mean += n as f64 * rho[(n, n)].re;
        if n >= 1 {
            // tr(rho a) = sum_n sqrt(n) rho[n, n-1]
            a1 += rho[(n, n - 1)] * (n as f64).sqrt();
        }
        if n >= 2 {
            a2 += rho[(n, n - 2)] * ((n * (n - 1)) as f64).sqrt();
        }
    }
    a1 /= tr;
    a2 /= tr;
    n_mean /= tr;
    let sq2 = std::f64::consts::SQRT_2;
    let mean = crate::linalg::RVector::from_vec(vec![sq2 * a1.re, sq2 * a1.im]);
    let vxx = a2.re + n_mean + 0.5 - 2.0 * a1.re * a1.re;
    let vpp = -a2.re + n_mean + 0.5 - 2.0 * a1.im * a1.im;
    let vxp = a2.im - 2.0 * a1.re * a1.im;
    let cov = crate::linalg::RMatrix::from_row_slice(2, 2, &[vxx, vxp, vxp, vpp]);
    GaussianState { mean, cov, log_weight: tr.ln() }
}
