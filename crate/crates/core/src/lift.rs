//! Lifts of the boundary circle action to the real line: canonical lifts,
//! composition with integer cocycle bookkeeping, translation numbers (exact
//! integers for non-elliptic maps), and the Euler cocycle.
//!
//! Every quantity claimed to be an integer is certified: the computed value
//! must sit within 0.25 of its rounding, and any branch decided by a margin
//! under `1e-12` circle units is recomputed in extended precision before the
//! branch is taken. A branch that stays unresolved in extended precision is
//! a loud error, never a guess.

use crate::error::LiftError;
use crate::fuchs::{self, FuchsianRep};
use crate::mat::{DDir2, DMat2, Dir2, Mat2, MatClass};
use crate::words::{relator, Genus, Word};

pub use crate::mat::act;

/// Branch-margin threshold in sine units (circle coordinate 1e-12 times pi).
const HAZ_SIN: f64 = 3.2e-12;
/// Same threshold for the extended-precision pass.
const DD_HAZ_SIN: f64 = 3.2e-28;
/// Branch-margin threshold for comparisons of circle coordinates.
const HAZARD_COORD: f64 = 1e-12;

/// Iteration count used when a translation number cannot be certified
/// exactly (elliptic input only; never a surface-group word).
pub const ELLIPTIC_ITERATIONS: u32 = 1 << 20;

/// Default cap on the length of words fed to a single lift evaluation.
pub const DEFAULT_EVAL_BUDGET: usize = crate::words::MAX_WORD_LEN;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrecisionPolicy {
    /// Plain f64; hazardous branches are errors.
    DoubleOnly,
    /// Escalate hazardous branches to double-double, then fail loudly.
    #[default]
    Extended,
}

/// An element of the universal cover of `Homeo+(S^1)`: the canonical lift of
/// a projective matrix plus an integer translation.
///
/// The canonical lift of `m` is the unique lift whose displacement at 0 lies
/// in `[0,1)`; the map represented here is `x -> canonical(m)(x) + offset`.
#[derive(Clone, Copy, Debug)]
pub struct LiftedMap {
    m: Mat2,
    pub offset: i64,
}

impl LiftedMap {
    pub const IDENTITY: LiftedMap = LiftedMap { m: Mat2::IDENTITY, offset: 0 };

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    /// Central translation by `k`.
    pub fn translation(k: i64) -> LiftedMap {
        LiftedMap { m: Mat2::IDENTITY, offset: k }
    }

    pub fn with_offset(&self, k: i64) -> LiftedMap {
        LiftedMap { m: self.m, offset: self.offset + k }
    }

    /// Value of the lift at a real point. Plain double precision; branch
    /// hazards here only wobble the value by one ulp-scale unit, which the
    /// callers of this oracle-grade function tolerate.
    pub fn eval(&self, x: f64) -> f64 {
        let floor = x.floor();
        let frac = x - floor;
        let dir = Dir2::of_coord(frac);
        let a = dir.apply(&self.m);
        let c0 = Dir2::E1.apply(&self.m);
        let plus = if a.coord() < c0.coord() { 1.0 } else { 0.0 };
        a.coord() + plus + floor + self.offset as f64
    }
}

/// The canonical lift: displacement at 0 in `[0,1)`, offset 0.
pub fn canonical_lift(m: &Mat2) -> LiftedMap {
    LiftedMap { m: m.normalized(), offset: 0 }
}

// --- certified branch primitives ------------------------------------------

struct Hazard;

/// Strict circle-coordinate order `coord(a) < coord(b)` decided on canonical
/// directions; exact coincidence compares false.
fn circ_less_f64(a: &Dir2, b: &Dir2) -> Result<bool, Hazard> {
    let cross = a.x * b.y - a.y * b.x;
    let dot = a.x * b.x + a.y * b.y;
    if cross == 0.0 && dot > 0.0 {
        return Ok(false); // identical direction
    }
    // Exactly-zero margins are deterministic canonical sides, not hazards.
    let tiny = |v: f64| v < HAZ_SIN && v != 0.0;
    if tiny(cross.abs()) || tiny(a.wrap_margin()) || tiny(b.wrap_margin()) {
        return Err(Hazard);
    }
    Ok(cross > 0.0)
}

fn circ_less_dd(a: &DDir2, b: &DDir2) -> Result<bool, LiftError> {
    let cross = a.cross(b);
    let dot = a.dot(b);
    let zero = twofloat::TwoFloat::from(0.0);
    if cross == zero && dot > zero {
        return Ok(false);
    }
    let scale = (a.norm2() * b.norm2()).sqrt();
    let margin = f64::from((cross / scale).abs());
    let tiny = |v: f64| v < DD_HAZ_SIN && v != 0.0;
    if tiny(margin) || tiny(a.wrap_margin()) || tiny(b.wrap_margin()) {
        return Err(LiftError::PrecisionExhausted { what: "circle order comparison" });
    }
    Ok(f64::from(cross) > 0.0)
}

/// Downcast an extended direction to f64 keeping its canonical orientation,
/// so the `[0,1)` window side survives the conversion.
fn downcast(d: &DDir2) -> Dir2 {
    let x = f64::from(d.x);
    let y = f64::from(d.y);
    if x == 0.0 && y == 0.0 {
        // Underflow of an extreme scale; fall back to the leading components.
        return Dir2::new(f64::from(d.x * twofloat::TwoFloat::from(1e60)), f64::from(d.y * twofloat::TwoFloat::from(1e60)));
    }
    let mut out = Dir2 { x, y };
    let n = x.hypot(y);
    out.x /= n;
    out.y /= n;
    out
}

fn round_certified(value: f64, what: &'static str) -> Result<(i64, f64), LiftError> {
    let k = value.round();
    let residual = (value - k).abs();
    if residual >= 0.25 {
        return Err(LiftError::CertificationFailed { what, residual });
    }
    Ok((k as i64, residual))
}

/// Whether the canonical lift of `m` has wrapped at window position `y`:
/// `lift(y) >= 1`, equivalently `y >= w0` where `w0` is the unique point the
/// map sends to the wrap. `w0` comes from a single application of the
/// adjugate, which stays meaningful however ill-conditioned a long product
/// is, unlike a comparison of two near-collapsed image directions.
fn window_wrapped_f64(m: &Mat2, y_dir: &Dir2) -> Result<bool, Hazard> {
    let w0_dir = Dir2::E1.apply(&m.adjugate());
    let tiny = |v: f64| v < HAZ_SIN && v != 0.0;
    if tiny(w0_dir.wrap_margin()) || tiny(y_dir.wrap_margin()) {
        return Err(Hazard);
    }
    let w0 = w0_dir.coord();
    let y = y_dir.coord();
    if w0 == 0.0 {
        return Ok(false); // displacement 0: the window never wraps
    }
    if (y - w0).abs() < HAZARD_COORD && y != w0 {
        return Err(Hazard);
    }
    Ok(y >= w0)
}

fn window_wrapped_dd(m1: &DMat2, m1_adj: &DMat2, y_dir: &DDir2) -> Result<bool, LiftError> {
    let w0_dir = DDir2::e1().apply(m1_adj);
    let tiny = |v: f64| v < DD_HAZ_SIN && v != 0.0;
    if tiny(w0_dir.wrap_margin()) || tiny(y_dir.wrap_margin()) {
        return Err(LiftError::PrecisionExhausted { what: "window wrap side" });
    }
    let w0 = downcast(&w0_dir).coord();
    let y = downcast(y_dir).coord();
    if w0 == 0.0 {
        return Ok(false);
    }
    // Resolve the tie by the exact circular order of the two directions.
    if (y - w0).abs() < 1e-9 {
        let cross = w0_dir.cross(y_dir);
        let zero = twofloat::TwoFloat::from(0.0);
        if cross == zero {
            return Ok(true); // y = w0 exactly: the lift value is exactly 1
        }
        let scale = (w0_dir.norm2() * y_dir.norm2()).sqrt();
        if f64::from((cross / scale).abs()) < DD_HAZ_SIN {
            return Err(LiftError::PrecisionExhausted { what: "window wrap tie" });
        }
        return Ok(f64::from(cross) > 0.0);
    }
    let _ = m1;
    Ok(y >= w0)
}

/// Integer correction in the lift composition: the value
/// `lift(m1)(lift(m2)(0)) - lift(p)(0)` where `p` is the stored normalized
/// product. Certified; `{0,1}` in exact arithmetic, with `-1` reachable only
/// when the product displacement straddles the wrap by rounding.
fn sigma(m1: &Mat2, m2: &Mat2, p: &Mat2, policy: PrecisionPolicy) -> Result<i64, LiftError> {
    let attempt = || -> Result<(i64, f64), Hazard> {
        let y = Dir2::E1.apply(m2);
        let a = y.apply(m1);
        let p0 = Dir2::E1.apply(p);
        let tiny = |v: f64| v < HAZ_SIN && v != 0.0;
        if tiny(a.wrap_margin()) || tiny(p0.wrap_margin()) {
            return Err(Hazard);
        }
        let plus = window_wrapped_f64(m1, &y)? as i64;
        let value = a.coord() + plus as f64 - p0.coord();
        round_certified(value, "composition cocycle").map_err(|_| Hazard)
    };
    match attempt() {
        Ok(k) => Ok(k.0),
        Err(Hazard) => {
            if policy == PrecisionPolicy::DoubleOnly {
                return Err(LiftError::PrecisionExhausted { what: "composition cocycle (extended precision disabled)" });
            }
            let dm1 = DMat2::promote(m1);
            let dm1_adj = DMat2::promote(&m1.adjugate());
            let dm2 = DMat2::promote(m2);
            let dp = DMat2::promote(p);
            let y = DDir2::e1().apply(&dm2);
            let a = y.apply(&dm1);
            let p0 = DDir2::e1().apply(&dp);
            let tiny = |v: f64| v < DD_HAZ_SIN && v != 0.0;
            if tiny(a.wrap_margin()) || tiny(p0.wrap_margin()) {
                return Err(LiftError::PrecisionExhausted { what: "composition cocycle wrap side" });
            }
            let plus = window_wrapped_dd(&dm1, &dm1_adj, &y)? as i64;
            let value = downcast(&a).coord() + plus as f64 - downcast(&p0).coord();
            round_certified(value, "composition cocycle").map(|(k, _)| k)
        }
    }
}

/// Composition `l1 ∘ l2` (apply `l2` first); group law of the cover.
pub fn compose_with(l1: &LiftedMap, l2: &LiftedMap, policy: PrecisionPolicy) -> Result<LiftedMap, LiftError> {
    let p = l1.m.mul(&l2.m).normalized();
    let s = sigma(&l1.m, &l2.m, &p, policy)?;
    Ok(LiftedMap { m: p, offset: l1.offset + l2.offset + s })
}

/// Composition with the default escalation policy.
pub fn compose(l1: &LiftedMap, l2: &LiftedMap) -> Result<LiftedMap, LiftError> {
    compose_with(l1, l2, PrecisionPolicy::Extended)
}

/// Group inverse: the lift of `m^{-1}` with offset chosen so that the
/// composition with `l` certifies to the identity lift.
pub fn invert_with(l: &LiftedMap, policy: PrecisionPolicy) -> Result<LiftedMap, LiftError> {
    let minv = sign_only(l.m.adjugate());
    let p = l.m.mul(&minv).normalized();
    let s = sigma(&l.m, &minv, &p, policy)?;
    Ok(LiftedMap { m: minv, offset: -l.offset - s })
}

pub fn invert(l: &LiftedMap) -> Result<LiftedMap, LiftError> {
    invert_with(l, PrecisionPolicy::Extended)
}

/// Sign normalization without rescaling; rescaling here would break the
/// exact cancellation in `m * adj(m)`.
fn sign_only(mut m: Mat2) -> Mat2 {
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

/// Result of a translation-number computation.
#[derive(Clone, Copy, Debug)]
pub struct TransResult {
    /// The translation number; an exact integer value when `certified`.
    pub value: f64,
    /// True when the value was certified as an exact integer.
    pub certified: bool,
    /// Distance of the raw value from the certified integer, when certified.
    pub residual: Option<f64>,
}

/// Translation number with certification. Exact integer for non-elliptic
/// matrices; for elliptic ones (which never arise from surface-group words)
/// an uncertified iterative estimate is returned.
pub fn trans_with(l: &LiftedMap, policy: PrecisionPolicy) -> Result<TransResult, LiftError> {
    match l.m.classify_default() {
        MatClass::Elliptic => Ok(TransResult {
            value: trans_iterative(l, ELLIPTIC_ITERATIONS),
            certified: false,
            residual: None,
        }),
        class => {
            let (k, residual) = trans_fixed_point(l, class, policy)?;
            Ok(TransResult { value: k as f64, certified: true, residual: Some(residual) })
        }
    }
}

pub fn trans(l: &LiftedMap) -> Result<TransResult, LiftError> {
    trans_with(l, PrecisionPolicy::Extended)
}

/// Certified integer translation number; errors on elliptic input.
pub fn trans_int(l: &LiftedMap, policy: PrecisionPolicy) -> Result<i64, LiftError> {
    let t = trans_with(l, policy)?;
    if !t.certified {
        return Err(LiftError::CertificationFailed { what: "translation number of elliptic map", residual: f64::NAN });
    }
    Ok(t.value as i64)
}

fn trans_fixed_point(l: &LiftedMap, class: MatClass, policy: PrecisionPolicy) -> Result<(i64, f64), LiftError> {
    match class {
        MatClass::Hyperbolic => trans_hyperbolic(l, policy),
        _ => trans_window(l, class, policy),
    }
}

/// Hyperbolic case. The displacement of a strongly contracting matrix sits
/// at sub-f64 distance from the attracting point, so the window branch is
/// taken on a robust reformulation instead: the canonical lift gains a full
/// unit at the attracting point exactly when the repelling point lies in the
/// arc swept from the basepoint to the attracting point, i.e. when
/// `0 < coord(repelling) < coord(attracting)` strictly.
fn trans_hyperbolic(l: &LiftedMap, policy: PrecisionPolicy) -> Result<(i64, f64), LiftError> {
    let attempt = || -> Result<(i64, f64), Hazard> {
        let att = l.m.attracting_dir().map_err(|_| Hazard)?;
        let rep = l.m.repelling_dir().map_err(|_| Hazard)?;
        let tiny = |v: f64| v < HAZ_SIN && v != 0.0;
        if tiny(att.wrap_margin()) || tiny(rep.wrap_margin()) {
            return Err(Hazard);
        }
        let u = att.coord();
        let r = rep.coord();
        let plus = if r > 0.0 && r < u { 1.0 } else { 0.0 };
        // Certify that the attracting direction is genuinely fixed.
        let residual = att.coord_diff_to(&att.apply(&l.m)).abs();
        if residual >= 0.25 {
            return Err(Hazard);
        }
        Ok((plus as i64, residual))
    };
    match attempt() {
        Ok((k, residual)) => Ok((k + l.offset, residual)),
        Err(Hazard) => {
            if policy == PrecisionPolicy::DoubleOnly {
                return Err(LiftError::PrecisionExhausted { what: "translation number (extended precision disabled)" });
            }
            let dm = DMat2::promote(&l.m);
            let att = dm
                .attracting_dir()
                .ok_or(LiftError::PrecisionExhausted { what: "fixed direction of a near-elliptic map" })?;
            let rep = DMat2::promote(&l.m.adjugate())
                .attracting_dir()
                .ok_or(LiftError::PrecisionExhausted { what: "repelling direction" })?;
            let tiny = |v: f64| v < DD_HAZ_SIN && v != 0.0;
            if tiny(att.wrap_margin()) || tiny(rep.wrap_margin()) {
                return Err(LiftError::PrecisionExhausted { what: "translation number wrap side" });
            }
            let u = downcast(&att).coord();
            let r = downcast(&rep).coord();
            let plus = if r > 0.0 && r < u { 1i64 } else { 0 };
            let a = att.apply(&dm);
            let residual = downcast(&att).coord_diff_to(&downcast(&a)).abs();
            if residual >= 0.25 {
                return Err(LiftError::CertificationFailed { what: "translation number", residual });
            }
            Ok((plus + l.offset, residual))
        }
    }
}

/// Identity / parabolic case: evaluate the canonical lift at a (near-)fixed
/// direction and certify the rounding. Surface-group words never produce
/// genuine parabolics; this path serves identity-class products and
/// user-supplied matrices.
fn trans_window(l: &LiftedMap, class: MatClass, policy: PrecisionPolicy) -> Result<(i64, f64), LiftError> {
    let attempt = || -> Result<(i64, f64), Hazard> {
        let fixed = match class {
            MatClass::Identity => Dir2::E1,
            _ => l.m.attracting_dir().map_err(|_| Hazard)?,
        };
        let a = fixed.apply(&l.m);
        let tiny = |v: f64| v < HAZ_SIN && v != 0.0;
        if tiny(a.wrap_margin()) || tiny(fixed.wrap_margin()) {
            return Err(Hazard);
        }
        let plus = window_wrapped_f64(&l.m, &fixed)? as i64;
        let value = a.coord() + plus as f64 - fixed.coord();
        round_certified(value, "translation number").map_err(|_| Hazard)
    };
    match attempt() {
        Ok((k, residual)) => Ok((k + l.offset, residual)),
        Err(Hazard) => {
            if policy == PrecisionPolicy::DoubleOnly {
                return Err(LiftError::PrecisionExhausted { what: "translation number (extended precision disabled)" });
            }
            let dm = DMat2::promote(&l.m);
            let dm_adj = DMat2::promote(&l.m.adjugate());
            let fixed = match class {
                MatClass::Identity => DDir2::e1(),
                _ => dm
                    .attracting_dir()
                    .ok_or(LiftError::PrecisionExhausted { what: "fixed direction of a near-elliptic map" })?,
            };
            let a = fixed.apply(&dm);
            let tiny = |v: f64| v < DD_HAZ_SIN && v != 0.0;
            if tiny(a.wrap_margin()) || tiny(fixed.wrap_margin()) {
                return Err(LiftError::PrecisionExhausted { what: "translation number wrap side" });
            }
            let plus = window_wrapped_dd(&dm, &dm_adj, &fixed)? as i64;
            let value = downcast(&a).coord() + plus as f64 - downcast(&fixed).coord();
            let (k, residual) = round_certified(value, "translation number")?;
            Ok((k + l.offset, residual))
        }
    }
}

/// The defining limit `f^n(0)/n`, by iteration. Within `2/n` of the exact
/// translation number; used as the independent oracle for the exact path.
pub fn trans_iterative(l: &LiftedMap, n: u32) -> f64 {
    assert!(n >= 1);
    let c0 = Dir2::E1.apply(&l.m).coord();
    let mut dir = Dir2::E1;
    let mut whole: i64 = 0;
    for _ in 0..n {
        let a = dir.apply(&l.m);
        let coord = a.coord();
        if coord < c0 {
            whole += 1;
        }
        whole += l.offset;
        dir = a;
    }
    (dir.coord() + whole as f64) / n as f64
}

// --- lifted evaluation of words --------------------------------------------

/// A choice of lift of the boundary action of the free group: the Fuchsian
/// representation plus one integer lift offset per generator. Different
/// offset vectors are different (equally valid) lifts.
#[derive(Clone, Debug)]
pub struct LiftContext {
    rep: FuchsianRep,
    offsets: Vec<i64>,
    gen_lifts: Vec<LiftedMap>,
    inv_lifts: Vec<LiftedMap>,
    budget: usize,
    policy: PrecisionPolicy,
}

impl LiftContext {
    /// Context over a validated representation, all lift offsets zero.
    pub fn new(rep: FuchsianRep) -> Result<Self, LiftError> {
        let offsets = vec![0; rep.genus().rank()];
        Self::with_offsets(rep, offsets)
    }

    pub fn with_offsets(rep: FuchsianRep, offsets: Vec<i64>) -> Result<Self, LiftError> {
        assert_eq!(offsets.len(), rep.genus().rank());
        let policy = PrecisionPolicy::Extended;
        let mut gen_lifts = Vec::with_capacity(offsets.len());
        let mut inv_lifts = Vec::with_capacity(offsets.len());
        for (k, m) in rep.generators().iter().enumerate() {
            let lift = canonical_lift(m).with_offset(offsets[k]);
            let inv = invert_with(&lift, policy)?;
            gen_lifts.push(lift);
            inv_lifts.push(inv);
        }
        Ok(LiftContext { rep, offsets, gen_lifts, inv_lifts, budget: DEFAULT_EVAL_BUDGET, policy })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_policy(mut self, policy: PrecisionPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn rep(&self) -> &FuchsianRep {
        &self.rep
    }

    pub fn genus(&self) -> Genus {
        self.rep.genus()
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    /// The lifted homomorphism on the free group: left-to-right composition
    /// of per-letter generator lifts (inverse letters get exact inverses).
    pub fn evaluate_word(&self, w: &Word) -> Result<LiftedMap, LiftError> {
        if w.genus() != self.genus() {
            return Err(LiftError::Word(crate::error::WordError::GenusMismatch {
                left: self.genus().get(),
                right: w.genus().get(),
            }));
        }
        if w.len() > self.budget {
            return Err(LiftError::BudgetExceeded { len: w.len(), budget: self.budget });
        }
        let mut acc = LiftedMap::IDENTITY;
        for &x in w.letters() {
            let letter = if x > 0 {
                &self.gen_lifts[(x - 1) as usize]
            } else {
                &self.inv_lifts[(-x - 1) as usize]
            };
            acc = compose_with(&acc, letter, self.policy)?;
        }
        Ok(acc)
    }

    pub fn trans(&self, l: &LiftedMap) -> Result<TransResult, LiftError> {
        trans_with(l, self.policy)
    }

    /// Certified integer translation number of a word's lift.
    pub fn trans_word(&self, w: &Word) -> Result<i64, LiftError> {
        trans_int(&self.evaluate_word(w)?, self.policy)
    }

    /// The Euler cocycle
    /// `tau(a, b) = trans(G(a)G(b)) - trans(G(a)) - trans(G(b))`.
    ///
    /// Independent of the lift offsets; always in `{-1, 0, 1}`.
    pub fn tau(&self, alpha: &Word, beta: &Word) -> Result<i64, LiftError> {
        let la = self.evaluate_word(alpha)?;
        let lb = self.evaluate_word(beta)?;
        let lab = compose_with(&la, &lb, self.policy)?;
        let value = trans_int(&lab, self.policy)?
            - trans_int(&la, self.policy)?
            - trans_int(&lb, self.policy)?;
        if !(-1..=1).contains(&value) {
            return Err(LiftError::TauOutOfRange { value });
        }
        Ok(value)
    }
}

/// Build a validated, orientation-normalized lift context for a genus: the
/// relator's lift translates by exactly `2 - 2g`.
pub fn build_context(genus: Genus) -> Result<LiftContext, LiftError> {
    let raw = fuchs::build_raw(genus)?;
    let expected = 2 - 2 * genus.get() as i64;
    let raw_rep = FuchsianRep::from_parts(genus, raw.clone(), false);
    let euler = LiftContext::new(raw_rep.clone())?.trans_word(&relator(genus))?;
    let ctx = if euler == expected {
        LiftContext::new(raw_rep)?
    } else {
        let flipped = fuchs::flip_orientation(&raw);
        fuchs::validate_generators(genus, &flipped)?;
        LiftContext::new(FuchsianRep::from_parts(genus, flipped, true))?
    };
    let measured = ctx.trans_word(&relator(genus))?;
    if measured != expected {
        return Err(LiftError::Rep(crate::error::RepError::EulerMismatch {
            found: measured,
            expected,
        }));
    }
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ctx(g: u16) -> LiftContext {
        build_context(Genus::new(g).unwrap()).unwrap()
    }

    #[test]
    fn canonical_lift_basics() {
        let id = canonical_lift(&Mat2::IDENTITY);
        assert_eq!(id.offset, 0);
        for x in [0.0, 0.25, 0.8, 1.5, -2.3] {
            assert_abs_diff_eq!(id.eval(x), x, epsilon = 1e-14);
        }
        let m = Mat2::diag(2.0, 0.5);
        let l = canonical_lift(&m);
        assert_eq!(l.eval(0.0), 0.0);
    }

    #[test]
    fn canonical_lift_monotone_and_equivariant() {
        let m = Mat2::rotation(0.4).mul(&Mat2::diag(3.0, 1.0 / 3.0)).mul(&Mat2::rotation(-1.1));
        let l = canonical_lift(&m);
        let n = 1024;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=n {
            let x = i as f64 / n as f64;
            let v = l.eval(x);
            assert!(v > prev, "not monotone at {x}");
            prev = v;
            assert_abs_diff_eq!(l.eval(x + 1.0), v + 1.0, epsilon = 1e-12);
        }
        // Displacement window.
        let d0 = l.eval(0.0);
        assert!((0.0..1.0).contains(&d0));
    }

    #[test]
    fn compose_and_inverse_are_exact_on_letters() {
        let c = ctx(2);
        let a1 = Word::parse(c.genus(), "a1").unwrap();
        let l = c.evaluate_word(&a1).unwrap();
        let linv = invert(&l).unwrap();
        let prod = compose(&l, &linv).unwrap();
        assert_eq!(prod.offset, 0);
        assert_eq!(prod.m.e, Mat2::IDENTITY.e);
        // Word-level: evaluating a1 A1 (already reduced to empty) and the
        // composite both give the identity lift.
        let both = compose(&linv, &l).unwrap();
        assert_eq!(both.offset, 0);
        assert_eq!(both.m.e, Mat2::IDENTITY.e);
    }

    #[test]
    fn compose_with_identity() {
        let c = ctx(2);
        let w = Word::parse(c.genus(), "a1 b2 A2").unwrap();
        let l = c.evaluate_word(&w).unwrap();
        let li = compose(&l, &LiftedMap::IDENTITY).unwrap();
        assert_eq!(li.offset, l.offset);
        assert_eq!(li.m.e, l.m.e);
    }

    #[test]
    fn compose_offsets_add() {
        // offset = o1 + o2 + sigma, with sigma recoverable from values at 0.
        let c = ctx(2);
        let u = Word::parse(c.genus(), "a1 b1").unwrap();
        let v = Word::parse(c.genus(), "b2 a2 b2").unwrap();
        let lu = c.evaluate_word(&u).unwrap().with_offset(3);
        let lv = c.evaluate_word(&v).unwrap().with_offset(-2);
        let comp = compose(&lu, &lv).unwrap();
        let value = lu.eval(lv.eval(0.0));
        assert_abs_diff_eq!(comp.eval(0.0), value, epsilon = 1e-9);
        let sigma = comp.offset - lu.offset - lv.offset;
        assert!(sigma == 0 || sigma == 1, "sigma = {sigma}");
    }

    #[test]
    fn relator_translates_by_euler_number() {
        for g in [2u16, 3, 4] {
            let c = ctx(g);
            let l = c.evaluate_word(&relator(c.genus())).unwrap();
            assert_eq!(l.m.classify_default(), MatClass::Identity);
            let t = c.trans(&l).unwrap();
            assert!(t.certified);
            assert_eq!(t.value, (2 - 2 * g as i64) as f64);
            // Iterative oracle agrees within its guarantee.
            let n = 1 << 16;
            let it = trans_iterative(&l, n);
            assert!((it - t.value).abs() <= 2.0 / n as f64);
        }
    }

    #[test]
    fn trans_examples() {
        let c = ctx(2);
        // Identity lift.
        let t = c.trans(&LiftedMap::IDENTITY).unwrap();
        assert_eq!(t.value, 0.0);
        // Central translations shift trans.
        let w = Word::parse(c.genus(), "a1 b2").unwrap();
        let l = c.evaluate_word(&w).unwrap();
        let t0 = trans_int(&l, PrecisionPolicy::Extended).unwrap();
        let t5 = trans_int(&l.with_offset(5), PrecisionPolicy::Extended).unwrap();
        assert_eq!(t5, t0 + 5);
    }

    #[test]
    fn trans_iterative_basics() {
        assert_eq!(trans_iterative(&LiftedMap::IDENTITY, 100), 0.0);
        assert_eq!(trans_iterative(&LiftedMap::translation(3), 77), 3.0);
        assert_eq!(trans_iterative(&LiftedMap::translation(-2), 64), -2.0);
    }

    #[test]
    fn trans_iterative_matches_exact() {
        let c = ctx(2);
        let words = ["a1", "a1 b1", "a2 B1 a1", "b2 b2 a1 B1", "A2 b1 a2 a1 B2"];
        let n = 1 << 16;
        for text in words {
            let w = Word::parse(c.genus(), text).unwrap();
            let l = c.evaluate_word(&w).unwrap();
            let exact = trans_int(&l, PrecisionPolicy::Extended).unwrap() as f64;
            let it = trans_iterative(&l, n);
            assert!((it - exact).abs() <= 2.0 / n as f64, "{text}: {it} vs {exact}");
        }
    }

    #[test]
    fn trans_conjugation_invariant() {
        let c = ctx(2);
        let w = Word::parse(c.genus(), "a1 b1 a2").unwrap();
        let conj = Word::parse(c.genus(), "b2 A1").unwrap();
        let l = c.evaluate_word(&w).unwrap();
        let lc = c.evaluate_word(&w.conjugate(&conj).unwrap()).unwrap();
        let a = trans_int(&l, PrecisionPolicy::Extended).unwrap();
        let b = trans_int(&lc, PrecisionPolicy::Extended).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tau_examples() {
        let c = ctx(2);
        let e = Word::empty(c.genus());
        let a1 = Word::parse(c.genus(), "a1").unwrap();
        let b1 = Word::parse(c.genus(), "b1").unwrap();
        assert_eq!(c.tau(&e, &a1).unwrap(), 0);
        assert_eq!(c.tau(&a1, &e).unwrap(), 0);
        // Common fixed point: trans(L^2) = 2 trans(L).
        assert_eq!(c.tau(&a1, &a1).unwrap(), 0);
        // Values stay in range on a handful of pairs.
        for (x, y) in [("a1", "b1"), ("a1 b1", "B1 a2"), ("A2 b2", "a1 a1 b2")] {
            let u = Word::parse(c.genus(), x).unwrap();
            let v = Word::parse(c.genus(), y).unwrap();
            let t = c.tau(&u, &v).unwrap();
            assert!((-1..=1).contains(&t));
        }
        let _ = b1;
    }

    #[test]
    fn tau_ignores_lift_offsets() {
        let genus = Genus::new(2).unwrap();
        let base = build_context(genus).unwrap();
        let offsets = vec![1, -2, 0, 2];
        let shifted = LiftContext::with_offsets(base.rep().clone(), offsets).unwrap();
        for (x, y) in [("a1", "b1"), ("a1 b2", "b1 a2"), ("B2 a1", "a2 b2 a1")] {
            let u = Word::parse(genus, x).unwrap();
            let v = Word::parse(genus, y).unwrap();
            assert_eq!(base.tau(&u, &v).unwrap(), shifted.tau(&u, &v).unwrap());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = ctx(2).with_budget(4);
        let w = Word::parse(c.genus(), "a1 b1 a1 b1 a1").unwrap();
        assert!(matches!(c.evaluate_word(&w), Err(LiftError::BudgetExceeded { .. })));
    }

    #[test]
    fn double_only_policy_fails_loud_on_hazard() {
        // A matrix fixing a direction a hair away from the wrap forces the
        // hazard path: rotate diag(2, 1/2) by a sub-picoradian angle.
        let tiny = 1e-13;
        let m = Mat2::rotation(tiny).mul(&Mat2::diag(2.0, 0.5)).mul(&Mat2::rotation(-tiny));
        let l = canonical_lift(&m);
        let res = trans_with(&l, PrecisionPolicy::DoubleOnly);
        assert!(matches!(res, Err(LiftError::PrecisionExhausted { .. })));
        // The extended pass resolves the same branch.
        let t = trans_with(&l, PrecisionPolicy::Extended).unwrap();
        assert!(t.certified);
        assert_eq!(t.value, 0.0);
    }

    #[test]
    fn act_rotation_is_rigid() {
        let theta = 0.37;
        let rot = Mat2::rotation(std::f64::consts::PI * theta);
        for i in 0..16 {
            let x = i as f64 / 16.0;
            let expect = (x + theta).rem_euclid(1.0);
            assert_abs_diff_eq!(act(&rot, x), expect, epsilon = 1e-12);
        }
    }
}
