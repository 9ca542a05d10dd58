use num_complex::Complex64;

use super::spec::{ChannelSpec, PrimitiveElement};
use crate::error::{Error, Result};
use crate::forms::GaussianState;
use crate::linalg::{RMatrix, RVector};

/// Applies every element of `spec` in order.
pub fn apply_channel(spec: &ChannelSpec, state: &GaussianState) -> Result<GaussianState> {
    if state.modes() != spec.modes {
        return Err(Error::ModeMismatch { expected: spec.modes, found: state.modes() });
    }
    spec.validate()?;
    let mut out = state.clone();
    for element in &spec.elements {
        out = apply_element(element, &out)?;
    }
    Ok(out)
}

/// Output of the channel for the coherent input `|alpha>`.
pub fn probe_coherent(spec: &ChannelSpec, alpha: &[Complex64]) -> Result<GaussianState> {
    if alpha.len() != spec.modes {
        return Err(Error::ModeMismatch { expected: spec.modes, found: alpha.len() });
    }
    apply_channel(spec, &GaussianState::coherent(alpha))
}

fn rotation(phi: f64) -> [[f64; 2]; 2] {
    let (s, c) = phi.sin_cos();
    [[c, -s], [s, c]]
}

fn apply_element(element: &PrimitiveElement, state: &GaussianState) -> Result<GaussianState> {
    use PrimitiveElement::*;
    let k = state.modes();
    match *element {
        Displace { mode, beta } => {
            let mut out = state.clone();
            out.mean[2 * mode] += std::f64::consts::SQRT_2 * beta.re;
            out.mean[2 * mode + 1] += std::f64::consts::SQRT_2 * beta.im;
            Ok(out)
        }
        Phase { mode, phi } => Ok(affine_single(state, mode, rotation(phi), 0.0)),
        Squeeze { mode, r, phi } => {
            let (ch, sh) = (r.cosh(), r.sinh());
            let (s, c) = phi.sin_cos();
            let t = [[ch - sh * c, -sh * s], [-sh * s, ch + sh * c]];
            Ok(affine_single(state, mode, t, 0.0))
        }
        LossBs { mode, theta } => {
            let (s, c) = theta.sin_cos();
            Ok(affine_single(state, mode, [[c, 0.0], [0.0, c]], 0.5 * s * s))
        }
        Amplify { mode, gain } => {
            let g = gain.sqrt();
            Ok(affine_single(state, mode, [[g, 0.0], [0.0, g]], 0.5 * (gain - 1.0)))
        }
        ThermalNoise { mode, nbar } => Ok(affine_single(state, mode, [[1.0, 0.0], [0.0, 1.0]], nbar)),
        TwoModeBs { mode_a, mode_b, theta } => {
            let (s, c) = theta.sin_cos();
            let mut t = RMatrix::identity(2 * k, 2 * k);
            for q in 0..2 {
                let (ia, ib) = (2 * mode_a + q, 2 * mode_b + q);
                t[(ia, ia)] = c;
                t[(ia, ib)] = s;
                t[(ib, ia)] = -s;
                t[(ib, ib)] = c;
            }
            Ok(affine(state, &t, &RMatrix::zeros(2 * k, 2 * k)))
        }
        TraceDecay { mode, kappa } => trace_decay(state, mode, kappa),
    }
}

/// `(mean, cov) -> (T mean, T cov T^T + noise I)` with `T` acting on one mode.
fn affine_single(state: &GaussianState, mode: usize, t: [[f64; 2]; 2], noise: f64) -> GaussianState {
    let n = state.mean.len();
    let mut full = RMatrix::identity(n, n);
    let mut add = RMatrix::zeros(n, n);
    for i in 0..2 {
        for j in 0..2 {
            full[(2 * mode + i, 2 * mode + j)] = t[i][j];
        }
        add[(2 * mode + i, 2 * mode + i)] = noise;
    }
    affine(state, &full, &add)
}

fn affine(state: &GaussianState, t: &RMatrix, noise: &RMatrix) -> GaussianState {
    let mean: RVector = t * &state.mean;
    let cov = t * &state.cov * t.transpose() + noise;
    GaussianState {
        mean,
        cov: (&cov + cov.transpose()) * 0.5,
        log_weight: state.log_weight,
    }
}

/// `e^{-kappa n} rho e^{-kappa n}` acts on Husimi functions as
/// `Q(w) -> exp(-(1 - e^{-2 kappa}) |w|^2) Q(e^{-kappa} w)` on the addressed mode.
fn trace_decay(state: &GaussianState, mode: usize, kappa: f64) -> Result<GaussianState> {
    let mut f = state.to_qform()?;
    let k = f.modes();
    let s = (-kappa).exp();
    f.gamma[mode] *= s;
    for j in 0..k {
        let factor = if j == mode { s * s } else { s };
        f.x.set(mode, j, f.x.get(mode, j) * factor);
        f.y.set(mode, j, f.y.get(mode, j) * factor);
    }
    let yjj = f.y.get(mode, mode);
    f.y.set(mode, mode, yjj - Complex64::new(1.0 - s * s, 0.0));
    f.to_state()
}
