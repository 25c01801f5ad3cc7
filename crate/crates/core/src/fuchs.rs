//! An explicit discrete faithful representation of the surface group into
//! SL(2,R), realized by side pairings of the regular hyperbolic 4g-gon with
//! vertex angle `2pi/4g` centered at the disk origin.
//!
//! The polygon edge at midpoint direction `psi_j` carries the j-th letter of
//! the relator `[a_1,b_1]...[a_g,b_g]`; the generator for letter `x` is the
//! orientation-preserving isometry taking the edge labeled `x^{-1}` onto the
//! edge labeled `x` (a rotation-conjugated half-turn about an edge midpoint).
//! The contract is the validation, not the formula: every generator is
//! hyperbolic, the relator evaluates to the identity, and the relator lift
//! translates by `2 - 2g`.

use num_complex::Complex64;

use crate::error::{RepError, WordError};
use crate::mat::{Mat2, MatClass};
use crate::words::{relator, Genus, Word};

/// Tolerance for the relator evaluation residual.
pub const RELATOR_TOL: f64 = 1e-9;

/// Offset of the polygon's first edge-midpoint direction, in radians. Any
/// generic value works; this one keeps generator axes and displacements
/// comfortably away from the coordinate wrap at direction 0.
const POLYGON_PHASE: f64 = 0.35;

#[derive(Clone, Debug)]
pub struct FuchsianRep {
    genus: Genus,
    mats: Vec<Mat2>,
    orientation_flipped: bool,
}

impl FuchsianRep {
    pub fn genus(&self) -> Genus {
        self.genus
    }

    /// Determinant-1 generator matrices in the order `a_1, b_1, ..., a_g, b_g`.
    pub fn generators(&self) -> &[Mat2] {
        &self.mats
    }

    pub fn generator(&self, letter: i16) -> Mat2 {
        let m = self.mats[(letter.unsigned_abs() - 1) as usize];
        if letter > 0 {
            m
        } else {
            m.adjugate()
        }
    }

    /// True when the raw polygon construction was conjugated by the
    /// orientation-reversing coordinate swap to pin the relator translation
    /// number to `2 - 2g`.
    pub fn orientation_flipped(&self) -> bool {
        self.orientation_flipped
    }

    /// Ordered product of generator images, scale-normalized.
    pub fn evaluate(&self, w: &Word) -> Result<Mat2, WordError> {
        if w.genus() != self.genus {
            return Err(WordError::GenusMismatch { left: self.genus.get(), right: w.genus().get() });
        }
        let mut acc = Mat2::IDENTITY;
        for &x in w.letters() {
            acc = acc.mul(&self.generator(x)).normalized();
        }
        Ok(acc)
    }

    pub(crate) fn from_parts(genus: Genus, mats: Vec<Mat2>, orientation_flipped: bool) -> Self {
        FuchsianRep { genus, mats, orientation_flipped }
    }
}

/// Boundary fixed coordinate of a non-elliptic matrix: the attracting (or
/// unique neutral) direction in the `[0,1)` coordinate.
pub fn fixed_coordinate(m: &Mat2) -> Result<f64, RepError> {
    Ok(m.attracting_dir()?.coord())
}

/// Build the polygon side-pairing representation, validated but not yet
/// orientation-normalized (the lift module measures the Euler number and
/// flips if needed; see [`crate::lift::build_context`]).
pub(crate) fn build_raw(genus: Genus) -> Result<Vec<Mat2>, RepError> {
    let g = genus.get() as usize;
    let n = 4 * g;
    let pi = std::f64::consts::PI;

    // Apothem b of the regular n-gon with vertex angle 2pi/n: cosh b = cot(pi/n).
    let cosh_b = (pi / n as f64).cos() / (pi / n as f64).sin();
    let m_e = ((cosh_b - 1.0) / (cosh_b + 1.0)).sqrt(); // tanh(b/2)

    // Half-turn about the point m_e on the real axis, in SU(1,1).
    let denom = 1.0 - m_e * m_e;
    let alpha = Complex64::new(0.0, (1.0 + m_e * m_e) / denom);
    let beta = Complex64::new(0.0, -2.0 * m_e / denom);
    let flip = [alpha, beta, beta.conj(), alpha.conj()];

    let rot = |theta: f64| -> [Complex64; 4] {
        let h = Complex64::from_polar(1.0, theta / 2.0);
        [h, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), h.conj()]
    };
    let cmul = |p: &[Complex64; 4], q: &[Complex64; 4]| -> [Complex64; 4] {
        [
            p[0] * q[0] + p[1] * q[2],
            p[0] * q[1] + p[1] * q[3],
            p[2] * q[0] + p[3] * q[2],
            p[2] * q[1] + p[3] * q[3],
        ]
    };

    let psi = |j: usize| POLYGON_PHASE + 2.0 * pi * j as f64 / n as f64;

    // Edge labels read the relator around the boundary: for handle i the
    // edges 4i, 4i+1, 4i+2, 4i+3 carry a_i, b_i, a_i^{-1}, b_i^{-1}. In the
    // commutator pattern the a- and b-sides are crossed with opposite
    // orientations, so a_i pairs toward its positive edge and b_i toward its
    // inverse edge; this is the unique assignment whose commutator product
    // closes up to the identity.
    let mut mats = Vec::with_capacity(2 * g);
    for i in 0..g {
        let a = cmul(&cmul(&rot(psi(4 * i)), &flip), &rot(-psi(4 * i + 2)));
        let b = cmul(&cmul(&rot(psi(4 * i + 3)), &flip), &rot(-psi(4 * i + 1)));
        mats.push(su11_to_sl2r(&a)?);
        mats.push(su11_to_sl2r(&b)?);
    }

    validate_generators(genus, &mats)?;
    Ok(mats)
}

/// Conjugate by the coordinate flip `x -> -x` (reverses circle orientation).
pub(crate) fn flip_orientation(mats: &[Mat2]) -> Vec<Mat2> {
    mats.iter()
        .map(|m| Mat2::new(m.e[0], -m.e[1], -m.e[2], m.e[3]))
        .collect()
}

pub(crate) fn validate_generators(genus: Genus, mats: &[Mat2]) -> Result<(), RepError> {
    for (i, m) in mats.iter().enumerate() {
        let det = m.det();
        if (det - 1.0).abs() > 1e-12 {
            return Err(RepError::BadDeterminant { index: i, det });
        }
        if m.trace().abs() <= 2.0 {
            return Err(RepError::NotHyperbolic { index: i, trace: m.trace() });
        }
    }
    let rep = FuchsianRep::from_parts(genus, mats.to_vec(), false);
    let c = rep.evaluate(&relator(genus)).expect("genus matches");
    let residual = c.identity_residual();
    if residual > RELATOR_TOL {
        return Err(RepError::RelatorResidual { residual, tol: RELATOR_TOL });
    }
    Ok(())
}

fn su11_to_sl2r(m: &[Complex64; 4]) -> Result<Mat2, RepError> {
    // Conjugate by the Cayley transform C = [1 -i; 1 i] mapping the upper
    // half plane to the disk; SU(1,1) matrices become real.
    let c = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    // C^{-1} = adj(C) / det(C), det(C) = 2i.
    let det = Complex64::new(0.0, 2.0);
    let cinv = [c[3] / det, -c[1] / det, -c[2] / det, c[0] / det];
    let mul = |p: &[Complex64; 4], q: &[Complex64; 4]| -> [Complex64; 4] {
        [
            p[0] * q[0] + p[1] * q[2],
            p[0] * q[1] + p[1] * q[3],
            p[2] * q[0] + p[3] * q[2],
            p[2] * q[1] + p[3] * q[3],
        ]
    };
    let r = mul(&mul(&cinv, m), &c);
    let imag = r.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
    if imag > 1e-10 {
        return Err(RepError::NonPositiveDet);
    }
    let raw = Mat2::new(r[0].re, r[1].re, r[2].re, r[3].re);
    raw.det_normalized()
}

/// Re-exported classification with the default threshold; see
/// [`Mat2::classify`].
pub fn classify(m: &Mat2) -> MatClass {
    m.classify_default()
}
