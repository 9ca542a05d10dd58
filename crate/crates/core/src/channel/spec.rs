use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One primitive Gaussian element acting on the listed mode(s).
///
/// Conventions (Heisenberg action on the annihilation operator):
/// - `Displace`: `a -> a + beta`
/// - `Phase`: `a -> e^{i phi} a`
/// - `Squeeze`: `S = exp(1/2 (xi* a^2 - xi a^dag^2))`, `xi = r e^{i phi}`
/// - `LossBs`: beam splitter with a vacuum ancilla that is traced out,
///   `a -> cos(theta) a - sin(theta) c`
/// - `TwoModeBs`: `(a, b) -> (cos a + sin b, -sin a + cos b)`
/// - `Amplify`: phase-insensitive amplifier, `a -> sqrt(G) a + sqrt(G-1) c^dag`
/// - `ThermalNoise`: additive Gaussian noise adding `nbar` photons
/// - `TraceDecay`: the non-trace-preserving sandwich `e^{-kappa n} rho e^{-kappa n}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PrimitiveElement {
    Displace { mode: usize, beta: Complex64 },
    Phase { mode: usize, phi: f64 },
    Squeeze { mode: usize, r: f64, phi: f64 },
    LossBs { mode: usize, theta: f64 },
    TwoModeBs { mode_a: usize, mode_b: usize, theta: f64 },
    Amplify { mode: usize, gain: f64 },
    ThermalNoise { mode: usize, nbar: f64 },
    TraceDecay { mode: usize, kappa: f64 },
}

impl PrimitiveElement {
    pub fn is_trace_preserving(&self) -> bool {
        !matches!(self, PrimitiveElement::TraceDecay { .. })
    }

    fn modes(&self) -> Vec<usize> {
        use PrimitiveElement::*;
        match *self {
            Displace { mode, .. }
            | Phase { mode, .. }
            | Squeeze { mode, .. }
            | LossBs { mode, .. }
            | Amplify { mode, .. }
            | ThermalNoise { mode, .. }
            | TraceDecay { mode, .. } => vec![mode],
            TwoModeBs { mode_a, mode_b, .. } => vec![mode_a, mode_b],
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        use PrimitiveElement::*;
        for m in self.modes() {
            if m >= k {
                return Err(Error::InvalidParameter(format!(
                    "element {self:?} addresses mode {m} of a {k}-mode channel"
                )));
            }
        }
        let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} in {self:?}")));
        match *self {
            Displace { beta, .. } if !beta.is_finite() => bad("non-finite displacement"),
            Phase { phi, .. } if !phi.is_finite() => bad("non-finite phase"),
            Squeeze { r, phi, .. } if !(r.is_finite() && phi.is_finite()) => bad("non-finite squeezing"),
            LossBs { theta, .. } if !theta.is_finite() => bad("non-finite angle"),
            TwoModeBs { theta, .. } if !theta.is_finite() => bad("non-finite angle"),
            TwoModeBs { mode_a, mode_b, .. } if mode_a == mode_b => bad("identical modes"),
            Amplify { gain, .. } if !(gain.is_finite() && gain >= 1.0) => bad("gain must be >= 1"),
            ThermalNoise { nbar, .. } if !(nbar.is_finite() && nbar >= 0.0) => bad("nbar must be >= 0"),
            TraceDecay { kappa, .. } if !(kappa.is_finite() && kappa >= 0.0) => bad("kappa must be >= 0"),
            _ => Ok(()),
        }
    }
}

/// An ordered composition of primitive elements on `modes` modes. An empty
/// list is the identity channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub modes: usize,
    pub elements: Vec<PrimitiveElement>,
}

impl ChannelSpec {
    pub fn new(modes: usize, elements: Vec<PrimitiveElement>) -> Result<Self> {
        let spec = ChannelSpec { modes, elements };
        spec.validate()?;
        Ok(spec)
    }

    pub fn identity(modes: usize) -> Self {
        ChannelSpec { modes, elements: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::InvalidParameter("channel needs at least one mode".into()));
        }
        self.elements.iter().try_for_each(|e| e.validate(self.modes))
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.elements.iter().all(PrimitiveElement::is_trace_preserving)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &ChannelSpec) -> Result<ChannelSpec> {
        if self.modes != other.modes {
            return Err(Error::ModeMismatch { expected: self.modes, found: other.modes });
        }
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().cloned());
        Ok(ChannelSpec { modes: self.modes, elements })
    }
}
