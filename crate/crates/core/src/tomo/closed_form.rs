//! Explicit single-mode solution for the canonical probes
//! `{0, 1, i, -1, -i, 1+i}`, kept as an independent check on the generic
//! solver.

use num_complex::Complex64;

use super::solve::{LinearPart, QuadraticPart};
use crate::forms::{HermitianMatrix, SymmetricMatrix};
use crate::linalg::{CMatrix, I};

/// `c[i]` and `d[i]` are the outputs for the `i`-th canonical probe.
pub fn canonical_closed_form(c: &[f64; 6], d: &[Complex64; 6]) -> (LinearPart, QuadraticPart) {
    let [c1, c2, c3, c4, c5, c6] = *c;
    let (d1, d2, d3) = (d[0], d[1], d[2]);
    let one = Complex64::new(1.0, 0.0);
    let x_ab = 0.5 * (-(one + I) * d1 + d2 + I * d3);
    let y_ab = 0.5 * (-(one - I) * d1 + d2 - I * d3);
    let gamma_a = 0.25 * (c2 + I * c3 - c4 - I * c5);
    let y_aa = 0.25 * (c2 + c3 + c4 + c5) - c1;
    let x_aa = 0.25 * (Complex64::new(c2 - c3 + c4 - c5, 0.0) + 2.0 * I * (c1 - c2 - c3 + c6));

    let mut x = SymmetricMatrix::zeros(1);
    x.set(0, 0, x_aa);
    (
        LinearPart {
            gamma_b: vec![d1],
            x_ab: CMatrix::from_element(1, 1, x_ab),
            y_ab: CMatrix::from_element(1, 1, y_ab),
        },
        QuadraticPart {
            c0: c1,
            gamma_a: vec![gamma_a],
            x_aa: x,
            y_aa: HermitianMatrix::scalar_identity(1, y_aa),
        },
    )
}
