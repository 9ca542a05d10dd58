//! Probe sets: the canonical choice and the nonsingularity check.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::systems::{build_j, build_k, j_size, k_size};
use crate::error::{Error, Result};
use crate::linalg::{condition_number, I};

/// Condition number above which K or J counts as singular.
pub const SINGULAR_COND: f64 = 1e12;

/// Canonical multimode sets are regenerated until J is better conditioned
/// than this.
pub const CANONICAL_COND_J: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet {
    pub modes: usize,
    pub probes: Vec<Vec<Complex64>>,
    pub trace_preserving: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conditioning {
    pub cond_k: f64,
    pub cond_j: Option<f64>,
}

/// Number of probes needed for `k` modes.
pub fn required_probes(k: usize, trace_preserving: bool) -> usize {
    if trace_preserving {
        k_size(k)
    } else {
        j_size(k)
    }
}

impl ProbeSet {
    pub fn new(modes: usize, probes: Vec<Vec<Complex64>>, trace_preserving: bool) -> Result<Self> {
        let set = ProbeSet { modes, probes, trace_preserving };
        set.check_shape()?;
        Ok(set)
    }

    fn check_shape(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::InvalidParameter("probe set needs at least one mode".into()));
        }
        let expected = required_probes(self.modes, self.trace_preserving);
        if self.probes.len() != expected {
            return Err(Error::ProbeCount { expected, found: self.probes.len() });
        }
        for p in &self.probes {
            if p.len() != self.modes {
                return Err(Error::ModeMismatch { expected: self.modes, found: p.len() });
            }
            if !p.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidParameter("probe amplitudes must be finite".into()));
            }
        }
        for (i, p) in self.probes.iter().enumerate() {
            if self.probes[..i].contains(p) {
                return Err(Error::InvalidParameter(format!("probe {i} repeats an earlier probe")));
            }
        }
        Ok(())
    }
}

/// Builds K (and J unless trace-preserving) and returns their condition
/// numbers, rejecting singular systems.
pub fn validate_probe_set(set: &ProbeSet) -> Result<Conditioning> {
    set.check_shape()?;
    let k_rows = &set.probes[..k_size(set.modes)];
    let cond_k = condition_number(&build_k(k_rows));
    if !(cond_k <= SINGULAR_COND) {
        return Err(Error::SingularK { cond: cond_k });
    }
    let cond_j = if set.trace_preserving {
        None
    } else {
        let cond = condition_number(&build_j(&set.probes));
        if !(cond <= SINGULAR_COND) {
            return Err(Error::SingularJ { cond });
        }
        Some(cond)
    };
    Ok(Conditioning { cond_k, cond_j })
}

fn unit(k: usize, j: usize, value: Complex64) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); k];
    v[j] = value;
    v
}

/// Deterministic probe pattern before scaling: `0`; `e_j`, `i e_j` per mode;
/// then `-e_j`, `-i e_j`, `(1+i) e_j` per mode; then for each pair `j < l`:
/// `e_j + e_l`, `e_j + i e_l`, `i e_j + e_l`, `i (e_j + e_l)`.
fn pattern(k: usize, trace_preserving: bool) -> Vec<Vec<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let mut probes = vec![vec![Complex64::new(0.0, 0.0); k]];
    for j in 0..k {
        probes.push(unit(k, j, one));
        probes.push(unit(k, j, I));
    }
    if trace_preserving {
        return probes;
    }
    for j in 0..k {
        probes.push(unit(k, j, -one));
        probes.push(unit(k, j, -I));
        probes.push(unit(k, j, one + I));
    }
    for j in 0..k {
        for l in j + 1..k {
            for (a, b) in [(one, one), (one, I), (I, one), (I, I)] {
                let mut v = unit(k, j, a);
                v[l] = b;
                probes.push(v);
            }
        }
    }
    probes
}

/// Canonical probe set scaled by `scale`. For one mode this is
/// `{0, 1, i, -1, -i, 1+i}` (first three when trace-preserving).
pub fn canonical_probes(k: usize, trace_preserving: bool, scale: f64) -> Result<ProbeSet> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one mode".into()));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("probe scale must be positive, got {scale}")));
    }
    let base = pattern(k, trace_preserving);
    let scaled = |probes: &[Vec<Complex64>]| probes.iter().map(|p| p.iter().map(|z| z * scale).collect()).collect();
    let set = ProbeSet::new(k, scaled(&base), trace_preserving)?;
    if trace_preserving || validate_probe_set(&set)?.cond_j.is_some_and(|c| c < CANONICAL_COND_J) {
        validate_probe_set(&set)?;
        return Ok(set);
    }
    // Perturb the extra (J-only) probes until J is well conditioned.
    let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
    let mut last = Error::SingularJ { cond: f64::INFINITY };
    for _ in 0..1000 {
        let mut probes = base.clone();
        for p in probes.iter_mut().skip(k_size(k)) {
            for z in p.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *z += Complex64::new(re, im) * 0.25;
            }
        }
        let set = ProbeSet::new(k, scaled(&probes), false)?;
        match validate_probe_set(&set) {
            Ok(c) if c.cond_j.is_some_and(|c| c < CANONICAL_COND_J) => return Ok(set),
            Ok(c) => last = Error::SingularJ { cond: c.cond_j.unwrap_or(f64::INFINITY) },
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_mode_canonical_points() {
        let full = canonical_probes(1, false, 1.0).unwrap();
        let want = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 1.0)];
        assert_eq!(full.probes, want.iter().map(|&z| vec![z]).collect::<Vec<_>>());
        let tp = canonical_probes(1, true, 1.0).unwrap();
        assert_eq!(tp.probes, full.probes[..3].to_vec());
    }

    #[test]
    fn scaling() {
        let set = canonical_probes(1, false, 0.5).unwrap();
        assert_eq!(set.probes[5], vec![c(0.5, 0.5)]);
    }

    #[test]
    fn multimode_counts_and_conditioning() {
        for k in 1..=3 {
            let full = canonical_probes(k, false, 1.0).unwrap();
            assert_eq!(full.probes.len(), (k + 1) * (2 * k + 1));
            assert!(validate_probe_set(&full).unwrap().cond_j.unwrap() < CANONICAL_COND_J);
            let tp = canonical_probes(k, true, 1.0).unwrap();
            assert_eq!(tp.probes.len(), 2 * k + 1);
            assert!(validate_probe_set(&tp).unwrap().cond_j.is_none());
        }
    }

    #[test]
    fn real_probes_are_singular() {
        let set = ProbeSet::new(1, vec![vec![c(0.0, 0.0)], vec![c(1.0, 0.0)], vec![c(2.0, 0.0)]], true).unwrap();
        assert!(matches!(validate_probe_set(&set), Err(Error::SingularK { .. })));
    }

    #[test]
    fn wrong_count_and_duplicates() {
        assert!(matches!(
            ProbeSet::new(1, vec![vec![c(0.0, 0.0)]], true),
            Err(Error::ProbeCount { expected: 3, found: 1 })
        ));
        assert!(ProbeSet::new(1, vec![vec![c(0.0, 0.0)], vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]], true).is_err());
    }

    #[test]
    fn bad_scale() {
        assert!(canonical_probes(1, false, 0.0).is_err());
        assert!(canonical_probes(0, false, 1.0).is_err());
    }
}
