//! Mapping classes of the once-marked surface as explicit relator-fixing
//! automorphisms of `F_2g`, stored together with their inverses: built-in
//! point-pushes and Dehn twists, composition, and the action on words.
//!
//! Every constructed class is validated eagerly: the forward images must fix
//! the relator exactly as reduced words, and forward/backward must invert
//! each other on all generators. Invalid classes are unrepresentable.

use std::fmt;

use crate::error::MapError;
use crate::words::{gen_a, gen_b, relator, surface_equal, Genus, Word};

/// An element of the relator-fixing outer automorphism group, i.e. a mapping
/// class of the genus-g surface with one marked point.
#[derive(Clone, Debug)]
pub struct MappingClass {
    genus: Genus,
    forward: Vec<Word>,
    backward: Vec<Word>,
    label: String,
}

/// Substitute generator images into a word: `x_k -> images[k-1]`.
fn subst(genus: Genus, images: &[Word], w: &Word) -> Result<Word, MapError> {
    let mut out = Word::empty(genus);
    for &x in w.letters() {
        let img = &images[(x.unsigned_abs() - 1) as usize];
        let piece = if x > 0 { img.clone() } else { img.inverse() };
        out = out.multiply(&piece)?;
    }
    Ok(out)
}

impl MappingClass {
    fn validated(
        genus: Genus,
        forward: Vec<Word>,
        backward: Vec<Word>,
        label: String,
    ) -> Result<Self, MapError> {
        let c = relator(genus);
        let image = subst(genus, &forward, &c)?;
        if image != c {
            return Err(MapError::RelatorNotFixed { image: image.to_string() });
        }
        for k in 0..genus.rank() {
            let x = Word::generator(genus, (k + 1) as i16)?;
            let roundtrip = subst(genus, &backward, &forward[k])?;
            let roundtrip_rev = subst(genus, &forward, &backward[k])?;
            if roundtrip != x || roundtrip_rev != x {
                return Err(MapError::NotInverse { index: k + 1 });
            }
        }
        Ok(MappingClass { genus, forward, backward, label })
    }

    pub fn identity(genus: Genus) -> Self {
        let images: Vec<Word> = (1..=genus.rank() as i16)
            .map(|k| Word::generator(genus, k).expect("valid generator"))
            .collect();
        MappingClass { genus, forward: images.clone(), backward: images, label: "id".to_string() }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Image of a generator under the forward automorphism.
    pub fn forward_image(&self, k: usize) -> &Word {
        &self.forward[k]
    }

    /// Apply the automorphism to a word.
    pub fn apply(&self, w: &Word) -> Result<Word, MapError> {
        if w.genus() != self.genus {
            return Err(MapError::Word(crate::error::WordError::GenusMismatch {
                left: self.genus.get(),
                right: w.genus().get(),
            }));
        }
        subst(self.genus, &self.forward, w)
    }

    /// Apply the inverse automorphism.
    pub fn apply_inverse(&self, w: &Word) -> Result<Word, MapError> {
        subst(self.genus, &self.backward, w)
    }

    /// Group product `self · other`. The underlying automorphism applies
    /// `self` first and then `other`, which is what makes
    /// `R(phi eta) = R(phi) + phi^* R(eta)` come out right.
    pub fn compose(&self, other: &MappingClass) -> Result<MappingClass, MapError> {
        if other.genus != self.genus {
            return Err(MapError::Word(crate::error::WordError::GenusMismatch {
                left: self.genus.get(),
                right: other.genus.get(),
            }));
        }
        let mut forward = Vec::with_capacity(self.forward.len());
        let mut backward = Vec::with_capacity(self.forward.len());
        for k in 0..self.forward.len() {
            forward.push(subst(self.genus, &other.forward, &self.forward[k])?);
            backward.push(subst(self.genus, &self.backward, &other.backward[k])?);
        }
        let label = format!("{}*{}", self.label, other.label);
        MappingClass::validated(self.genus, forward, backward, label)
    }

    pub fn inverse(&self) -> MappingClass {
        let label = if let Some(stripped) = self.label.strip_suffix("^-1") {
            stripped.to_string()
        } else {
            format!("{}^-1", self.label)
        };
        MappingClass {
            genus: self.genus,
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            label,
        }
    }

    /// The alternative representative `x -> c^k f(x) c^-k`, which still fixes
    /// the relator and represents the same outer class.
    pub fn c_conjugate(&self, k: i32) -> Result<MappingClass, MapError> {
        let c = relator(self.genus);
        let ck = c.power(k)?;
        let ckinv = ck.inverse();
        let mut forward = Vec::with_capacity(self.forward.len());
        let mut backward = Vec::with_capacity(self.forward.len());
        for i in 0..self.forward.len() {
            forward.push(ck.multiply(&self.forward[i])?.multiply(&ckinv)?);
            backward.push(ckinv.multiply(&self.backward[i])?.multiply(&ck)?);
        }
        let label = format!("c^{}~{}", k, self.label);
        MappingClass::validated(self.genus, forward, backward, label)
    }

    /// Point-push along a single generator letter (negative = inverse).
    ///
    /// Built by transporting the handle-one push through relator-fixing
    /// changes of basis; validated to fix the relator and to descend to
    /// conjugation by the pushed loop in the surface group.
    pub fn point_push(genus: Genus, letter: i16) -> Result<MappingClass, MapError> {
        if letter == 0 || letter.unsigned_abs() as usize > genus.rank() {
            return Err(MapError::BadGenerator { letter });
        }
        let raw = push_generator(genus, letter.unsigned_abs() as i16)?;
        let raw = if letter < 0 { raw.flip() } else { raw };
        let gamma = Word::generator(genus, letter)?;
        let label = format!("push({})", gamma);
        let mc = MappingClass::validated(genus, raw.fwd, raw.bwd, label)?;
        mc.check_descent(&gamma)?;
        Ok(mc)
    }

    /// Point-push along a word: the product of per-letter pushes in word
    /// order, descending to conjugation by the whole word.
    pub fn point_push_word(w: &Word) -> Result<MappingClass, MapError> {
        let genus = w.genus();
        let mut acc = MappingClass::identity(genus);
        for &x in w.letters() {
            acc = acc.compose(&MappingClass::point_push(genus, x)?)?;
        }
        acc.label = format!("push({})", w);
        Ok(acc)
    }

    /// Dehn twist along the `a_i` or `b_i` core curve: twisting along `a_i`
    /// maps `b_i -> b_i a_i`, twisting along `b_i` maps `a_i -> a_i b_i`;
    /// `dir = -1` gives the inverse twist.
    pub fn twist(genus: Genus, letter: i16, dir: i8) -> Result<MappingClass, MapError> {
        if letter <= 0 || letter as usize > genus.rank() {
            return Err(MapError::BadGenerator { letter });
        }
        let ident = MappingClass::identity(genus);
        let mut forward = ident.forward.clone();
        let mut backward = ident.backward.clone();
        let k = letter as usize - 1; // 0-based generator index
        let (target, curve) = if letter % 2 == 1 {
            (k + 1, letter) // a_i: twist b_i -> b_i a_i
        } else {
            (k - 1, letter) // b_i: twist a_i -> a_i b_i
        };
        let sign = if dir >= 0 { 1 } else { -1 };
        let t = Word::generator(genus, (target + 1) as i16)?;
        let cw = Word::generator(genus, sign * curve)?;
        forward[target] = t.multiply(&cw)?;
        backward[target] = t.multiply(&cw.inverse())?;
        let name = Word::generator(genus, curve)?;
        let label = if sign > 0 { format!("twist({})", name) } else { format!("twist({})^-1", name) };
        MappingClass::validated(genus, forward, backward, label)
    }

    /// Verify that this class acts on the surface group as conjugation by
    /// `gamma`: for every generator `x`, `f(x) = gamma^-1 x gamma` in the
    /// surface group.
    pub fn check_descent(&self, gamma: &Word) -> Result<(), MapError> {
        for k in 0..self.genus.rank() {
            let x = Word::generator(self.genus, (k + 1) as i16)?;
            let expect = x.conjugate(gamma)?;
            if !surface_equal(&self.forward[k], &expect)? {
                return Err(MapError::DescentFailed { index: k + 1 });
            }
        }
        Ok(())
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// Raw automorphism data used while building pushes; no validation yet.
struct RawAuto {
    fwd: Vec<Word>,
    bwd: Vec<Word>,
}

impl RawAuto {
    fn identity(genus: Genus) -> Self {
        let images: Vec<Word> = (1..=genus.rank() as i16)
            .map(|k| Word::generator(genus, k).expect("valid"))
            .collect();
        RawAuto { fwd: images.clone(), bwd: images }
    }

    fn flip(self) -> Self {
        RawAuto { fwd: self.bwd, bwd: self.fwd }
    }

    /// Function composition `outer ∘ inner`.
    fn after(genus: Genus, outer: &RawAuto, inner: &RawAuto) -> Result<RawAuto, MapError> {
        let n = inner.fwd.len();
        let mut fwd = Vec::with_capacity(n);
        let mut bwd = Vec::with_capacity(n);
        for k in 0..n {
            fwd.push(subst(genus, &outer.fwd, &inner.fwd[k])?);
            bwd.push(subst(genus, &inner.bwd, &outer.bwd[k])?);
        }
        Ok(RawAuto { fwd, bwd })
    }

    /// Conjugation `theta ∘ f ∘ theta^-1`.
    fn conjugated(genus: Genus, theta: &RawAuto, f: &RawAuto) -> Result<RawAuto, MapError> {
        let theta_inv = RawAuto { fwd: theta.bwd.clone(), bwd: theta.fwd.clone() };
        let inner = RawAuto::after(genus, f, &theta_inv)?;
        RawAuto::after(genus, theta, &inner)
    }
}

/// The point-push along `a_1`:
/// `a_1 -> a_1`, `b_1 -> a_1^-1 c b_1 a_1`, and every later generator
/// `x -> a_1^-1 c x c^-1 a_1`. Fixes the relator exactly.
fn push_a1(genus: Genus) -> Result<RawAuto, MapError> {
    let c = relator(genus);
    let a1 = Word::generator(genus, 1)?;
    let mut fwd = Vec::with_capacity(genus.rank());
    let mut bwd = Vec::with_capacity(genus.rank());
    for k in 1..=genus.rank() as i16 {
        let x = Word::generator(genus, k)?;
        if k == 1 {
            fwd.push(x.clone());
            bwd.push(x);
        } else if k == 2 {
            // b_1 -> a_1^-1 c b_1 a_1; inverse image: c^-1 a_1 b_1 a_1^-1.
            let f = a1.inverse().multiply(&c)?.multiply(&x)?.multiply(&a1)?;
            let b = c.inverse().multiply(&a1)?.multiply(&x)?.multiply(&a1.inverse())?;
            fwd.push(f);
            bwd.push(b);
        } else {
            // x -> a_1^-1 c x c^-1 a_1; inverse image: c^-1 a_1 x a_1^-1 c.
            let f = a1
                .inverse()
                .multiply(&c)?
                .multiply(&x)?
                .multiply(&c.inverse())?
                .multiply(&a1)?;
            let b = c
                .inverse()
                .multiply(&a1)?
                .multiply(&x)?
                .multiply(&a1.inverse())?
                .multiply(&c)?;
            fwd.push(f);
            bwd.push(b);
        }
    }
    Ok(RawAuto { fwd, bwd })
}

/// Quarter-turn of handle `i`: `a_i -> b_i^-1`, `b_i -> b_i a_i b_i^-1`.
/// Fixes the commutator `[a_i, b_i]`, hence the relator.
fn handle_swap(genus: Genus, i: u16) -> Result<RawAuto, MapError> {
    let mut auto = RawAuto::identity(genus);
    let a = Word::generator(genus, gen_a(i))?;
    let b = Word::generator(genus, gen_b(i))?;
    let ka = (gen_a(i) - 1) as usize;
    let kb = (gen_b(i) - 1) as usize;
    auto.fwd[ka] = b.inverse();
    auto.fwd[kb] = b.multiply(&a)?.multiply(&b.inverse())?;
    auto.bwd[ka] = a.multiply(&b)?.multiply(&a.inverse())?;
    auto.bwd[kb] = a.inverse();
    Ok(auto)
}

/// Relator-fixing transposition moving handle `i` onto handle `i+1`:
/// `a_i -> a_{i+1}`, `b_i -> b_{i+1}`, and handle `i+1` is sent back to
/// handle `i` conjugated by `[a_{i+1}, b_{i+1}]`.
fn handle_shift(genus: Genus, i: u16) -> Result<RawAuto, MapError> {
    let mut auto = RawAuto::identity(genus);
    let a0 = Word::generator(genus, gen_a(i))?;
    let b0 = Word::generator(genus, gen_b(i))?;
    let a1 = Word::generator(genus, gen_a(i + 1))?;
    let b1 = Word::generator(genus, gen_b(i + 1))?;
    let d = commutator(&a1, &b1)?;
    let ka0 = (gen_a(i) - 1) as usize;
    let kb0 = (gen_b(i) - 1) as usize;
    let ka1 = (gen_a(i + 1) - 1) as usize;
    let kb1 = (gen_b(i + 1) - 1) as usize;
    auto.fwd[ka0] = a1.clone();
    auto.fwd[kb0] = b1.clone();
    auto.fwd[ka1] = d.inverse().multiply(&a0)?.multiply(&d)?;
    auto.fwd[kb1] = d.inverse().multiply(&b0)?.multiply(&d)?;
    // Inverse: a_{i+1} -> a_i, b_{i+1} -> b_i, and handle i gets the
    // conjugated images with d' = [a_i, b_i].
    let dp = commutator(&a0, &b0)?;
    auto.bwd[ka1] = a0.clone();
    auto.bwd[kb1] = b0.clone();
    auto.bwd[ka0] = dp.multiply(&a1)?.multiply(&dp.inverse())?;
    auto.bwd[kb0] = dp.multiply(&b1)?.multiply(&dp.inverse())?;
    Ok(auto)
}

fn commutator(a: &Word, b: &Word) -> Result<Word, MapError> {
    Ok(a.multiply(b)?.multiply(&a.inverse())?.multiply(&b.inverse())?)
}

/// Point-push along the positive generator with index `letter`, built by
/// transporting the handle-one push.
fn push_generator(genus: Genus, letter: i16) -> Result<RawAuto, MapError> {
    let handle = ((letter + 1) / 2) as u16;
    let is_a = letter % 2 == 1;
    let base = push_a1(genus)?;

    // theta with theta(a_1) = a_handle.
    let mut theta = RawAuto::identity(genus);
    for j in 1..handle {
        theta = RawAuto::after(genus, &handle_shift(genus, j)?, &theta)?;
    }
    if is_a {
        RawAuto::conjugated(genus, &theta, &base)
    } else {
        // theta' = swap_handle ∘ theta maps a_1 to b_handle^-1; conjugating
        // the inverse push by it realizes the push along b_handle.
        let theta2 = RawAuto::after(genus, &handle_swap(genus, handle)?, &theta)?;
        RawAuto::conjugated(genus, &theta2, &base.flip())
    }
}
