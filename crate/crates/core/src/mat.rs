//! Real 2x2 matrices acting projectively on the circle of directions, plus
//! the extended-precision mirror used when a branch decision lands too close
//! to call in double precision.
//!
//! The circle is the projective line: the coordinate `x in [0,1)` names the
//! direction of planar angle `pi*x`, so `-M` acts like `M` and rotation by
//! `pi*t` moves every coordinate by `t`.

use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::RepError;

/// Classification threshold on the det-normalized trace.
pub const CLASS_EPS: f64 = 1e-9;

/// Margin (in coordinate units) under which a double-precision branch
/// decision is considered hazardous and recomputed in extended precision.
pub const HAZARD_EPS: f64 = 1e-12;

/// Extended-precision margin under which we give up rather than guess.
pub const DD_HAZARD_EPS: f64 = 1e-28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MatClass {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Identity,
}

/// Row-major 2x2 real matrix `[a b; c d]`. Values flowing through the lift
/// machinery are kept scale-normalized (max entry 1, first nonzero entry
/// positive); only the projective class matters there, and normalizing keeps
/// long products inside the f64 exponent range. Generator matrices are
/// validated to determinant 1 before any scaling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [f64; 4],
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { e: [1.0, 0.0, 0.0, 1.0] };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { e: [a, b, c, d] }
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Mat2::new(a, 0.0, 0.0, d)
    }

    /// Rotation by planar angle `t` (moves circle coordinates by `t/pi`).
    pub fn rotation(t: f64) -> Self {
        let (s, c) = t.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.e[0] * self.e[3] - self.e[1] * self.e[2]
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.e[0] + self.e[3]
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.e;
        let [e, f, g, h] = rhs.e;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    /// Adjugate; for determinant-1 matrices this is the exact inverse, and it
    /// involves no rounding at all.
    pub fn adjugate(&self) -> Mat2 {
        let [a, b, c, d] = self.e;
        Mat2::new(d, -b, -c, a)
    }

    /// Scale so the largest entry magnitude is 1 and the first nonzero entry
    /// is positive. A common divisor keeps exact cancellations exact.
    pub fn normalized(&self) -> Mat2 {
        let mut m = *self;
        let scale = m.e.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if scale > 0.0 && scale != 1.0 {
            for v in &mut m.e {
                *v /= scale;
            }
        }
        for &v in &m.e {
            if v != 0.0 {
                if v < 0.0 {
                    for w in &mut m.e {
                        *w = -*w;
                    }
                }
                break;
            }
        }
        m
    }

    /// Rescale to determinant 1. Fails when the determinant is not positive
    /// or would overflow.
    pub fn det_normalized(&self) -> Result<Mat2, RepError> {
        let det = self.det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(RepError::NonPositiveDet);
        }
        let s = det.sqrt();
        let mut m = *self;
        for v in &mut m.e {
            *v /= s;
        }
        Ok(m)
    }

    /// Frobenius distance to the nearer of `+I`/`-I` after determinant
    /// normalization; the residual used to validate relator evaluations.
    pub fn identity_residual(&self) -> f64 {
        match self.det_normalized() {
            Err(_) => f64::INFINITY,
            Ok(m) => {
                let d_plus = ((m.e[0] - 1.0).powi(2)
                    + m.e[1].powi(2)
                    + m.e[2].powi(2)
                    + (m.e[3] - 1.0).powi(2))
                .sqrt();
                let d_minus = ((m.e[0] + 1.0).powi(2)
                    + m.e[1].powi(2)
                    + m.e[2].powi(2)
                    + (m.e[3] + 1.0).powi(2))
                .sqrt();
                d_plus.min(d_minus)
            }
        }
    }

    /// Frobenius distance between projective classes: both matrices are
    /// scaled to unit Frobenius norm and compared up to overall sign.
    pub fn projective_distance(&self, other: &Mat2) -> f64 {
        let na = (self.e.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let nb = (other.e.iter().map(|v| v * v).sum::<f64>()).sqrt();
        if na == 0.0 || nb == 0.0 {
            return f64::INFINITY;
        }
        let mut plus = 0.0f64;
        let mut minus = 0.0f64;
        for i in 0..4 {
            let u = self.e[i] / na;
            let v = other.e[i] / nb;
            plus += (u - v) * (u - v);
            minus += (u + v) * (u + v);
        }
        plus.sqrt().min(minus.sqrt())
    }

    /// Classify by the det-normalized trace with threshold `eps`.
    pub fn classify(&self, eps: f64) -> MatClass {
        let det = self.det();
        let tr = self.trace();
        if !(det > f64::MIN_POSITIVE) {
            // Scale-normalized storage of a strongly hyperbolic product can
            // underflow the determinant; nothing else produces this.
            return MatClass::Hyperbolic;
        }
        let t2 = tr * tr / det;
        if !t2.is_finite() {
            return MatClass::Hyperbolic;
        }
        let hi = (2.0 + eps) * (2.0 + eps);
        let lo = (2.0 - eps) * (2.0 - eps);
        if t2 > hi {
            MatClass::Hyperbolic
        } else if t2 < lo {
            MatClass::Elliptic
        } else {
            let s = det.sqrt();
            let off = (self.e[1].abs() + self.e[2].abs()) / s;
            let diag = (self.e[0] - self.e[3]).abs() / s;
            if off + diag < eps {
                MatClass::Identity
            } else {
                MatClass::Parabolic
            }
        }
    }

    pub fn classify_default(&self) -> MatClass {
        self.classify(CLASS_EPS)
    }

    /// Attracting fixed direction (hyperbolic) or the unique neutral one
    /// (parabolic). Errors on elliptic input.
    pub fn attracting_dir(&self) -> Result<Dir2, RepError> {
        match self.classify_default() {
            MatClass::Elliptic => Err(RepError::EllipticFixedPoint),
            MatClass::Identity => Ok(Dir2::E1),
            class => {
                let det = self.det();
                if !(det > f64::MIN_POSITIVE) {
                    // Numerically rank-one: every direction maps to the
                    // dominant column, which is the attracting direction.
                    let c1 = Dir2::new(self.e[0], self.e[2]);
                    let c2 = Dir2::new(self.e[1], self.e[3]);
                    let n1 = self.e[0].hypot(self.e[2]);
                    let n2 = self.e[1].hypot(self.e[3]);
                    return Ok(if n1 >= n2 { c1 } else { c2 });
                }
                let s = det.sqrt();
                let t = self.trace() / s;
                let lambda_hat = match class {
                    MatClass::Hyperbolic => {
                        let r = (t * t - 4.0).max(0.0).sqrt();
                        if t >= 0.0 {
                            (t + r) / 2.0
                        } else {
                            (t - r) / 2.0
                        }
                    }
                    _ => t / 2.0, // parabolic: double eigenvalue +-1
                };
                let lambda = lambda_hat * s;
                let v1 = (self.e[1], lambda - self.e[0]);
                let v2 = (lambda - self.e[3], self.e[2]);
                let n1 = v1.0.hypot(v1.1);
                let n2 = v2.0.hypot(v2.1);
                let v = if n1 >= n2 { v1 } else { v2 };
                if v.0 == 0.0 && v.1 == 0.0 {
                    return Ok(Dir2::E1); // diagonal with lambda = a: e1 axis
                }
                Ok(Dir2::new(v.0, v.1))
            }
        }
    }

    /// Repelling fixed direction of a hyperbolic matrix.
    pub fn repelling_dir(&self) -> Result<Dir2, RepError> {
        self.adjugate().attracting_dir()
    }
}

/// A direction on the projective line, stored as a canonical unit-ish vector
/// with angle in `[0, pi)`: positive y, or zero y with positive x.
#[derive(Clone, Copy, Debug)]
pub struct Dir2 {
    pub x: f64,
    pub y: f64,
}

impl Dir2 {
    pub const E1: Dir2 = Dir2 { x: 1.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        let n = x.hypot(y);
        let (mut x, mut y) = if n > 0.0 { (x / n, y / n) } else { (1.0, 0.0) };
        if y < 0.0 || (y == 0.0 && x < 0.0) {
            x = -x;
            y = -y;
        }
        Dir2 { x, y }
    }

    /// Direction of planar angle `pi * coord`.
    pub fn of_coord(coord: f64) -> Self {
        let t = coord.rem_euclid(1.0);
        let (s, c) = (std::f64::consts::PI * t).sin_cos();
        Dir2::new(c, s)
    }

    /// Circle coordinate in `[0,1)`.
    pub fn coord(&self) -> f64 {
        let t = self.y.atan2(self.x) / std::f64::consts::PI;
        if t >= 1.0 {
            0.0
        } else if t < 0.0 {
            // Canonical directions live in the closed upper half plane; tiny
            // negative angles are rounding at the wrap.
            0.0
        } else {
            t
        }
    }

    /// Image direction under the projective action of `m`.
    pub fn apply(&self, m: &Mat2) -> Dir2 {
        Dir2::new(
            m.e[0] * self.x + m.e[1] * self.y,
            m.e[2] * self.x + m.e[3] * self.y,
        )
    }

    /// How close this direction sits to the coordinate wrap at 0: the sine of
    /// the angle to the horizontal axis.
    pub fn wrap_margin(&self) -> f64 {
        self.y.abs()
    }

    /// Signed angle from `self` to `other` in `(-pi, pi]`, in coordinate
    /// units (i.e. divided by pi). Both inputs canonical.
    pub fn coord_diff_to(&self, other: &Dir2) -> f64 {
        let cross = self.x * other.y - self.y * other.x;
        let dot = self.x * other.x + self.y * other.y;
        cross.atan2(dot) / std::f64::consts::PI
    }
}

/// Projective action on circle coordinates.
pub fn act(m: &Mat2, x: f64) -> f64 {
    Dir2::of_coord(x).apply(m).coord()
}

// ---------------------------------------------------------------------------
// Extended-precision mirror (double-double scalars). Matrices are promoted
// exactly from their f64 entries, so the extended pass resolves branches for
// the same stored values the double pass saw.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct DMat2 {
    pub e: [TwoFloat; 4],
}

impl DMat2 {
    pub fn promote(m: &Mat2) -> Self {
        DMat2 {
            e: [
                TwoFloat::from(m.e[0]),
                TwoFloat::from(m.e[1]),
                TwoFloat::from(m.e[2]),
                TwoFloat::from(m.e[3]),
            ],
        }
    }

    pub fn mul(&self, rhs: &DMat2) -> DMat2 {
        let [a, b, c, d] = self.e;
        let [e, f, g, h] = rhs.e;
        DMat2 {
            e: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }

    pub fn det(&self) -> TwoFloat {
        self.e[0] * self.e[3] - self.e[1] * self.e[2]
    }

    pub fn trace(&self) -> TwoFloat {
        self.e[0] + self.e[3]
    }

    /// Attracting (or neutral) fixed direction, extended precision.
    pub fn attracting_dir(&self) -> Option<DDir2> {
        let det = self.det();
        let zero = TwoFloat::from(0.0);
        if !(det > zero) {
            let n1 = self.e[0] * self.e[0] + self.e[2] * self.e[2];
            let n2 = self.e[1] * self.e[1] + self.e[3] * self.e[3];
            return Some(if n1 >= n2 {
                DDir2::new(self.e[0], self.e[2])
            } else {
                DDir2::new(self.e[1], self.e[3])
            });
        }
        let s = det.sqrt();
        let t = self.trace() / s;
        let disc = t * t - TwoFloat::from(4.0);
        if disc < zero {
            return None; // elliptic
        }
        let r = disc.sqrt();
        let lambda_hat = if t >= zero {
            (t + r) / TwoFloat::from(2.0)
        } else {
            (t - r) / TwoFloat::from(2.0)
        };
        let lambda = lambda_hat * s;
        let v1 = (self.e[1], lambda - self.e[0]);
        let v2 = (lambda - self.e[3], self.e[2]);
        let n1 = v1.0 * v1.0 + v1.1 * v1.1;
        let n2 = v2.0 * v2.0 + v2.1 * v2.1;
        let v = if n1 >= n2 { v1 } else { v2 };
        if v.0 == zero && v.1 == zero {
            return Some(DDir2::new(TwoFloat::from(1.0), TwoFloat::from(0.0)));
        }
        Some(DDir2::new(v.0, v.1))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DDir2 {
    pub x: TwoFloat,
    pub y: TwoFloat,
}

impl DDir2 {
    pub fn e1() -> Self {
        DDir2 { x: TwoFloat::from(1.0), y: TwoFloat::from(0.0) }
    }

    pub fn promote(d: &Dir2) -> Self {
        DDir2 { x: TwoFloat::from(d.x), y: TwoFloat::from(d.y) }
    }

    /// Canonicalize without normalizing the length (scale is irrelevant for
    /// comparisons; rescale only to dodge overflow).
    pub fn new(x: TwoFloat, y: TwoFloat) -> Self {
        let zero = TwoFloat::from(0.0);
        let (mut x, mut y) = (x, y);
        let mag = x.abs().max(y.abs());
        if mag > TwoFloat::from(1e120) {
            let inv = TwoFloat::from(1.0) / mag;
            x = x * inv;
            y = y * inv;
        }
        if y < zero || (y == zero && x < zero) {
            x = -x;
            y = -y;
        }
        DDir2 { x, y }
    }

    pub fn apply(&self, m: &DMat2) -> DDir2 {
        DDir2::new(
            m.e[0] * self.x + m.e[1] * self.y,
            m.e[2] * self.x + m.e[3] * self.y,
        )
    }

    pub fn cross(&self, other: &DDir2) -> TwoFloat {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(&self, other: &DDir2) -> TwoFloat {
        self.x * other.x + self.y * other.y
    }

    pub fn norm2(&self) -> TwoFloat {
        self.x * self.x + self.y * self.y
    }

    /// Sine of the angle to the horizontal axis (wrap margin), as f64.
    pub fn wrap_margin(&self) -> f64 {
        let n2 = self.norm2();
        let s2 = (self.y * self.y) / n2;
        f64::from(s2).max(0.0).sqrt()
    }

    /// Signed angle from `self` to `other` in coordinate units (angle / pi).
    /// Accurate to a few parts in 1e3, which is ample for rounding to a
    /// nearby integer with a 0.25 certification margin.
    pub fn coord_diff_to(&self, other: &DDir2) -> f64 {
        let cross = f64::from(self.cross(other));
        let dot = f64::from(self.dot(other));
        cross.atan2(dot) / std::f64::consts::PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn classify_examples() {
        assert_eq!(Mat2::diag(2.0, 0.5).classify_default(), MatClass::Hyperbolic);
        let rot = Mat2::rotation(std::f64::consts::PI / 3.0);
        assert_eq!(rot.classify_default(), MatClass::Elliptic);
        assert_eq!(Mat2::IDENTITY.classify_default(), MatClass::Identity);
        // Parabolic: unit shear.
        assert_eq!(Mat2::new(1.0, 1.0, 0.0, 1.0).classify_default(), MatClass::Parabolic);
    }

    #[test]
    fn fixed_directions() {
        let m = Mat2::diag(2.0, 0.5);
        assert_abs_diff_eq!(m.attracting_dir().unwrap().coord(), 0.0, epsilon = 1e-15);
        let m = Mat2::diag(0.5, 2.0);
        assert_abs_diff_eq!(m.attracting_dir().unwrap().coord(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.repelling_dir().unwrap().coord(), 0.0, epsilon = 1e-15);
        assert!(Mat2::rotation(1.0).attracting_dir().is_err());
    }

    #[test]
    fn act_examples() {
        for x in [0.0, 0.125, 0.5, 0.93] {
            assert_abs_diff_eq!(act(&Mat2::IDENTITY, x), x, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(act(&Mat2::diag(2.0, 0.5), 0.0), 0.0, epsilon = 1e-15);
        // Rotation by pi*t shifts coordinates by t.
        let t = 0.3;
        let rot = Mat2::rotation(std::f64::consts::PI * t);
        for x in [0.0, 0.2, 0.65, 0.95] {
            let expect = (x + t).rem_euclid(1.0);
            assert_abs_diff_eq!(act(&rot, x), expect, epsilon = 1e-12);
        }
        // -M acts like M.
        let m = Mat2::new(1.3, 0.2, -0.4, 0.9);
        let neg = Mat2::new(-1.3, -0.2, 0.4, -0.9);
        for x in [0.1, 0.4, 0.77] {
            assert_abs_diff_eq!(act(&m, x), act(&neg, x), epsilon = 1e-14);
        }
    }

    #[test]
    fn adjugate_product_is_exactly_scalar() {
        let m = Mat2::new(1.7, -0.3, 2.2, 0.45).normalized();
        let p = m.mul(&m.adjugate());
        assert_eq!(p.e[1], 0.0);
        assert_eq!(p.e[2], 0.0);
        assert_eq!(p.e[0], p.e[3]);
        let n = p.normalized();
        assert_eq!(n.e, Mat2::IDENTITY.e);
    }

    #[test]
    fn fixed_point_residual_random_hyperbolic() {
        // A handful of deterministic hyperbolic matrices.
        for i in 0..20 {
            let t = 0.1 + 0.13 * i as f64;
            let m = Mat2::rotation(t)
                .mul(&Mat2::diag(3.0 + i as f64, 1.0 / (3.0 + i as f64)))
                .mul(&Mat2::rotation(-0.7 * t));
            let dir = m.attracting_dir().unwrap();
            let image = dir.apply(&m);
            let drift = dir.coord_diff_to(&image).abs();
            assert!(drift < 1e-9, "drift {drift} at i={i}");
        }
    }

    #[test]
    fn dd_mirror_agrees() {
        let m = Mat2::new(2.0, 0.3, 0.7, 0.9);
        let dm = DMat2::promote(&m);
        assert_abs_diff_eq!(f64::from(dm.det()), m.det(), epsilon = 1e-15);
        let d = m.attracting_dir().unwrap();
        let dd = dm.attracting_dir().unwrap();
        let dd_f64 = Dir2::new(f64::from(dd.x), f64::from(dd.y));
        assert!(d.coord_diff_to(&dd_f64).abs() < 1e-12);
    }

    #[test]
    fn projective_distance_handles_sign() {
        let m = Mat2::new(1.0, 2.0, 3.0, 4.0);
        let n = Mat2::new(-1.0, -2.0, -3.0, -4.0);
        assert_abs_diff_eq!(m.projective_distance(&n), 0.0, epsilon = 1e-15);
    }
}
