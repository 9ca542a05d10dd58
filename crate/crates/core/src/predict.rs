//! Output prediction from a process: closed form for coherent inputs, a
//! Gaussian integral over the coherent-state resolution for pure
//! squeezed-coherent inputs.

use num_complex::Complex64;

use crate::channel::{apply_channel, ChannelSpec, PrimitiveElement};
use crate::error::{Error, Result};
use crate::forms::{GaussianState, HermitianMatrix, ProcessState, QForm, SymmetricMatrix};
use crate::integral::ComplexQuadratic;
use crate::linalg::CMatrix;

/// Tolerance on the imaginary residue of the reduced exponent.
const REALITY_TOL: f64 = 1e-9;

/// Output Q-form for the coherent input `|u>`.
pub fn predict_coherent(p: &ProcessState, u: &[Complex64]) -> Result<QForm> {
    let k = p.modes();
    if u.len() != k {
        return Err(Error::ModeMismatch { expected: k, found: u.len() });
    }
    let gamma = (0..k)
        .map(|j| p.gamma_b[j] + (0..k).map(|i| u[i].conj() * p.x_ab[(i, j)] + u[i] * p.y_ab[(i, j)]).sum::<Complex64>())
        .collect();
    let mut c = p.c0;
    for i in 0..k {
        c += 2.0 * (p.gamma_a[i] * u[i].conj()).re;
        for j in 0..k {
            c += (u[i].conj() * p.x_aa.get(i, j) * u[j].conj()).re;
            c += (u[i] * p.y_aa.get(i, j) * u[j].conj()).re;
        }
    }
    Ok(QForm { c, gamma, x: p.x_bb.clone(), y: p.y_bb.clone() })
}

/// The pure state `prod_j S_j(r_j, phi_j) D_j(Z_j) |0>` with
/// `S(r, phi) = exp[(r/2)(e^{-i phi} b^2 - e^{i phi} b^dag^2)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureGaussianInput {
    pub squeeze_r: Vec<f64>,
    pub squeeze_phase: Vec<f64>,
    pub displacement: Vec<Complex64>,
}

impl PureGaussianInput {
    pub fn new(squeeze_r: Vec<f64>, squeeze_phase: Vec<f64>, displacement: Vec<Complex64>) -> Result<Self> {
        let input = PureGaussianInput { squeeze_r, squeeze_phase, displacement };
        input.validate()?;
        Ok(input)
    }

    pub fn coherent(u: &[Complex64]) -> Self {
        PureGaussianInput {
            squeeze_r: vec![0.0; u.len()],
            squeeze_phase: vec![0.0; u.len()],
            displacement: u.to_vec(),
        }
    }

    pub fn modes(&self) -> usize {
        self.displacement.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.modes();
        if k == 0 {
            return Err(Error::InvalidParameter("input needs at least one mode".into()));
        }
        for len in [self.squeeze_r.len(), self.squeeze_phase.len()] {
            if len != k {
                return Err(Error::ModeMismatch { expected: k, found: len });
            }
        }
        let finite = self.squeeze_r.iter().chain(&self.squeeze_phase).all(|x| x.is_finite())
            && self.displacement.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("input parameters must be finite".into()));
        }
        if let Some(r) = self.squeeze_r.iter().find(|&&r| r < 0.0) {
            return Err(Error::InvalidParameter(format!("squeeze_r must be >= 0, got {r}")));
        }
        Ok(())
    }

    pub fn is_coherent(&self) -> bool {
        self.squeeze_r.iter().all(|&r| r == 0.0)
    }

    /// Phase-space description of the input.
    pub fn to_state(&self) -> Result<GaussianState> {
        self.validate()?;
        let k = self.modes();
        let mut elements = Vec::with_capacity(2 * k);
        for j in 0..k {
            elements.push(PrimitiveElement::Displace { mode: j, beta: self.displacement[j] });
            elements.push(PrimitiveElement::Squeeze { mode: j, r: self.squeeze_r[j], phi: self.squeeze_phase[j] });
        }
        apply_channel(&ChannelSpec::new(k, elements)?, &GaussianState::vacuum(k))
    }

    /// The input with conjugated displacement and squeeze phase.
    fn conjugate(&self) -> Self {
        PureGaussianInput {
            squeeze_r: self.squeeze_r.clone(),
            squeeze_phase: self.squeeze_phase.iter().map(|p| -p).collect(),
            displacement: self.displacement.iter().map(|z| z.conj()).collect(),
        }
    }
}

/// Coefficients `(kappa, lambda, t)` of the single-mode overlap
/// `ln <w| S(r, phi) D(z) |0> = kappa - |w|^2/2 + lambda w* - t w*^2 / 2`.
fn overlap_coefficients(r: f64, phi: f64, z: Complex64) -> (Complex64, Complex64, Complex64) {
    let t = Complex64::from_polar(r.tanh(), phi);
    let shifted = z * r.cosh() - z.conj() * Complex64::from_polar(r.sinh(), phi);
    let kappa = -0.5 * r.cosh().ln() - 0.5 * shifted.norm_sqr() - 0.5 * t * shifted.conj() * shifted.conj();
    (kappa, z / r.cosh(), t)
}

/// Output Q-form for a pure squeezed-coherent input, from
/// `tr_a[(|psi*><psi*|)_a rho_eps]` with `|psi*>` resolved over coherent
/// states. Variables are ordered `(w, w', Z_b)`, `k` modes each.
pub fn predict_gaussian(p: &ProcessState, input: &PureGaussianInput) -> Result<QForm> {
    let k = p.modes();
    input.validate()?;
    if input.modes() != k {
        return Err(Error::ModeMismatch { expected: k, found: input.modes() });
    }
    if input.is_coherent() {
        return predict_coherent(p, &input.displacement);
    }
    let (w, wp, zb) = (0, k, 2 * k);
    let mut e = ComplexQuadratic::zeros(3 * k);
    let psi = input.conjugate();
    for j in 0..k {
        let (kappa, lambda, t) = overlap_coefficients(psi.squeeze_r[j], psi.squeeze_phase[j], psi.displacement[j]);
        // <w|psi*>
        e.c += kappa;
        e.mixed[(w + j, w + j)] -= 0.5;
        e.q[w + j] += lambda;
        e.anti[(w + j, w + j)] -= t;
        // <psi*|w'>
        e.c += kappa.conj();
        e.mixed[(wp + j, wp + j)] -= 0.5;
        e.p[wp + j] += lambda.conj();
        e.hol[(wp + j, wp + j)] -= t.conj();
        // <w'|w>
        e.mixed[(w + j, w + j)] -= 0.5;
        e.mixed[(wp + j, wp + j)] -= 0.5;
        e.mixed[(wp + j, w + j)] += 1.0;
    }
    // Process Q-function continued to Z_a -> w, Z_a* -> w'*.
    e.c += p.c0;
    for i in 0..k {
        e.p[w + i] += p.gamma_a[i];
        e.p[zb + i] += p.gamma_b[i];
        e.q[wp + i] += p.gamma_a[i].conj();
        e.q[zb + i] += p.gamma_b[i].conj();
        for j in 0..k {
            e.hol[(w + i, w + j)] += p.x_aa.get(i, j);
            e.hol[(w + i, zb + j)] += p.x_ab[(i, j)];
            e.hol[(zb + j, w + i)] += p.x_ab[(i, j)];
            e.hol[(zb + i, zb + j)] += p.x_bb.get(i, j);
            e.anti[(wp + i, wp + j)] += p.x_aa.get(i, j).conj();
            e.anti[(wp + i, zb + j)] += p.x_ab[(i, j)].conj();
            e.anti[(zb + j, wp + i)] += p.x_ab[(i, j)].conj();
            e.anti[(zb + i, zb + j)] += p.x_bb.get(i, j).conj();
            e.mixed[(wp + i, w + j)] += p.y_aa.get(i, j);
            e.mixed[(wp + i, zb + j)] += p.y_ab[(i, j)];
            e.mixed[(zb + j, w + i)] += p.y_ab[(i, j)].conj();
            e.mixed[(zb + i, zb + j)] += p.y_bb.get(i, j);
        }
    }
    let reduced = e.to_exponent().integrate(&(0..2 * k).collect::<Vec<_>>())?;
    reduced.to_qform(REALITY_TOL)
}

/// Process operator of the single-mode beam-splitter loss channel with
/// transmission amplitude `cos theta`.
pub fn beam_splitter_process(theta: f64) -> ProcessState {
    let mut p = ProcessState::zeros(1);
    p.x_ab = CMatrix::from_element(1, 1, Complex64::new(theta.cos(), 0.0));
    p.y_aa = HermitianMatrix::scalar_identity(1, -theta.cos().powi(2));
    p.y_bb = HermitianMatrix::scalar_identity(1, -1.0);
    p
}

/// Known output of the beam-splitter loss channel for the input
/// `S(r, 0) D(z) |0>`, normalized to unit trace.
pub fn bs_squeezed_closed_form(theta: f64, r: f64, z: Complex64) -> QForm {
    let th = r.tanh();
    let (s2, c2) = (theta.sin().powi(2), theta.cos().powi(2));
    let g = 1.0 - th * th * s2 * s2;
    let gamma = theta.cos() * (z.conj() - z * th * s2) / (g * r.cosh());
    let mut x = SymmetricMatrix::zeros(1);
    x.set(0, 0, Complex64::new(-th * c2 / g, 0.0));
    let y = HermitianMatrix::scalar_identity(1, (th * th * s2 - 1.0) / g);
    let mut f = QForm { c: 0.0, gamma: vec![gamma], x, y };
    f.c = -f.log_normalization_integral().expect("beam-splitter output is normalizable");
    f
}
