//! Free-group words over the standard surface generators, the surface
//! relator, abelianization, the symplectic intersection form, and the
//! surface-group word problem via Dehn's algorithm.
//!
//! Letters are signed generator indices: for genus `g` the generators
//! `a_1, b_1, ..., a_g, b_g` are numbered `1..=2g` with `a_i = 2i-1` and
//! `b_i = 2i`; a negative letter is the inverse generator. Words are kept
//! freely reduced at all times.

use std::fmt;

use crate::error::WordError;

/// Hard cap on word length. Growth past this is an explicit error rather
/// than silent truncation.
pub const MAX_WORD_LEN: usize = 4096;

/// Surface genus, at least 2 (the hyperbolic-plane model breaks below that).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genus(u16);

impl Genus {
    pub fn new(g: u16) -> Result<Self, WordError> {
        if g < 2 {
            return Err(WordError::GenusTooSmall { genus: g });
        }
        Ok(Genus(g))
    }

    #[inline]
    pub fn get(self) -> u16 {
        self.0
    }

    /// Number of free generators, `2g`.
    #[inline]
    pub fn rank(self) -> usize {
        2 * self.0 as usize
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A freely reduced word in the free group `F_2g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    genus: Genus,
    letters: Vec<i16>,
}

impl Word {
    /// Free reduction of a raw letter sequence. Validates every letter
    /// against the genus and the length cap.
    pub fn reduce(genus: Genus, raw: &[i16]) -> Result<Self, WordError> {
        let rank = genus.rank() as i16;
        let mut letters: Vec<i16> = Vec::with_capacity(raw.len());
        for &x in raw {
            if x == 0 || x.unsigned_abs() as i16 > rank {
                return Err(WordError::LetterOutOfRange { letter: x, genus: genus.get() });
            }
            if letters.last() == Some(&-x) {
                letters.pop();
            } else {
                letters.push(x);
            }
        }
        if letters.len() > MAX_WORD_LEN {
            return Err(WordError::TooLong { len: letters.len(), cap: MAX_WORD_LEN });
        }
        Ok(Word { genus, letters })
    }

    pub fn empty(genus: Genus) -> Self {
        Word { genus, letters: Vec::new() }
    }

    /// Single-letter word. `letter` is a signed generator index.
    pub fn generator(genus: Genus, letter: i16) -> Result<Self, WordError> {
        Self::reduce(genus, &[letter])
    }

    #[inline]
    pub fn genus(&self) -> Genus {
        self.genus
    }

    #[inline]
    pub fn letters(&self) -> &[i16] {
        &self.letters
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_genus(&self, other: &Word) -> Result<(), WordError> {
        if self.genus != other.genus {
            return Err(WordError::GenusMismatch { left: self.genus.get(), right: other.genus.get() });
        }
        Ok(())
    }

    /// Group product `self · other`, freely reduced.
    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        self.check_genus(other)?;
        let mut letters = self.letters.clone();
        for &x in &other.letters {
            if letters.last() == Some(&-x) {
                letters.pop();
            } else {
                letters.push(x);
            }
        }
        if letters.len() > MAX_WORD_LEN {
            return Err(WordError::TooLong { len: letters.len(), cap: MAX_WORD_LEN });
        }
        Ok(Word { genus: self.genus, letters })
    }

    /// Group inverse: reverse the letters and negate.
    pub fn inverse(&self) -> Word {
        Word {
            genus: self.genus,
            letters: self.letters.iter().rev().map(|&x| -x).collect(),
        }
    }

    /// Conjugate `by⁻¹ · self · by`. This direction is fixed project-wide.
    pub fn conjugate(&self, by: &Word) -> Result<Word, WordError> {
        by.inverse().multiply(self)?.multiply(by)
    }

    /// Integer power, freely reduced.
    pub fn power(&self, n: i32) -> Result<Word, WordError> {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty(self.genus);
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base)?;
        }
        Ok(out)
    }

    /// Exponent-sum vector in `Z^2g` (the image in first homology).
    pub fn abelianize(&self) -> AbelianVector {
        let mut coords = vec![0i64; self.genus.rank()];
        for &x in &self.letters {
            let idx = (x.unsigned_abs() - 1) as usize;
            coords[idx] += x.signum() as i64;
        }
        AbelianVector { coords }
    }

    /// Cyclic reduction: returns `(u, core)` with `self = u · core · u⁻¹`
    /// and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut lo = 0usize;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo] == -self.letters[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        let prefix = Word { genus: self.genus, letters: self.letters[..lo].to_vec() };
        let core = Word { genus: self.genus, letters: self.letters[lo..hi].to_vec() };
        (prefix, core)
    }

    /// Parse the whitespace-token syntax: `a<i>` / `b<i>` lowercase, uppercase
    /// for inverses, `-` for the empty word. Example: `a1 B2 A1`.
    pub fn parse(genus: Genus, text: &str) -> Result<Self, WordError> {
        let trimmed = text.trim();
        if trimmed == "-" || trimmed.is_empty() {
            return Ok(Word::empty(genus));
        }
        let mut raw = Vec::new();
        for tok in trimmed.split_whitespace() {
            raw.push(parse_token(genus, tok)?);
        }
        Self::reduce(genus, &raw)
    }
}

fn parse_token(genus: Genus, tok: &str) -> Result<i16, WordError> {
    let mut chars = tok.chars();
    let head = chars.next().ok_or_else(|| WordError::BadToken { token: tok.to_string() })?;
    let (kind, inverse) = match head {
        'a' => (0i16, false),
        'b' => (1, false),
        'A' => (0, true),
        'B' => (1, true),
        _ => return Err(WordError::BadToken { token: tok.to_string() }),
    };
    let idx: u16 = chars
        .as_str()
        .parse()
        .map_err(|_| WordError::BadToken { token: tok.to_string() })?;
    if idx == 0 || idx > genus.get() {
        return Err(WordError::LetterOutOfRange { letter: (2 * idx as i16 - 1 + kind), genus: genus.get() });
    }
    let letter = 2 * idx as i16 - 1 + kind;
    Ok(if inverse { -letter } else { letter })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "-");
        }
        for (i, &x) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let k = x.unsigned_abs();
            let handle = (k + 1) / 2;
            let c = match (k % 2 == 1, x > 0) {
                (true, true) => 'a',
                (false, true) => 'b',
                (true, false) => 'A',
                (false, false) => 'B',
            };
            write!(f, "{}{}", c, handle)?;
        }
        Ok(())
    }
}

/// Exponent sums per generator, length exactly `2g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianVector {
    coords: Vec<i64>,
}

impl AbelianVector {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// The letter of `a_i` (1-based handle index).
pub fn gen_a(i: u16) -> i16 {
    2 * i as i16 - 1
}

/// The letter of `b_i` (1-based handle index).
pub fn gen_b(i: u16) -> i16 {
    2 * i as i16
}

/// Surface relator `[a_1,b_1]···[a_g,b_g]`, length `4g`.
pub fn relator(genus: Genus) -> Word {
    let mut letters = Vec::with_capacity(4 * genus.get() as usize);
    for i in 1..=genus.get() {
        let a = gen_a(i);
        let b = gen_b(i);
        letters.extend_from_slice(&[a, b, -a, -b]);
    }
    Word { genus, letters }
}

/// Algebraic intersection number on abelianizations:
/// `Σ_k (x_{a_k} y_{b_k} − x_{b_k} y_{a_k})`, so `i(a_1, b_1) = 1`.
pub fn intersection(a: &Word, b: &Word) -> Result<i64, WordError> {
    if a.genus() != b.genus() {
        return Err(WordError::GenusMismatch { left: a.genus().get(), right: b.genus().get() });
    }
    let x = a.abelianize();
    let y = b.abelianize();
    Ok(symplectic_pairing(&x, &y))
}

/// Symplectic pairing of two `Z^2g` vectors in the `a_1,b_1,...` basis.
pub fn symplectic_pairing(x: &AbelianVector, y: &AbelianVector) -> i64 {
    let xs = x.coords();
    let ys = y.coords();
    let mut sum = 0i64;
    for k in 0..xs.len() / 2 {
        sum += xs[2 * k] * ys[2 * k + 1] - xs[2 * k + 1] * ys[2 * k];
    }
    sum
}

/// Word problem for the surface group `F_2g / ⟨⟨c⟩⟩` via Dehn's algorithm.
///
/// `u = v` in the surface group iff `u·v⁻¹` lies in the normal closure of
/// the relator. The presentation is C'(1/6) for g ≥ 2, so greedy replacement
/// of any cyclic subword matching strictly more than half of a cyclic
/// rotation of `c^±1` terminates with the empty word exactly on trivial
/// elements. Ties of exactly half the relator are never replaced; the scan
/// is leftmost-first and prefers longer matches for determinism.
pub fn surface_equal(u: &Word, v: &Word) -> Result<bool, WordError> {
    let w = u.multiply(&v.inverse())?;
    Ok(surface_trivial(&w))
}

/// True iff the word lies in the normal closure of the relator.
pub fn surface_trivial(w: &Word) -> bool {
    let genus = w.genus();
    let rel = relator(genus);
    let half = 2 * genus.get() as usize; // 4g / 2

    // All cyclic rotations of c and c⁻¹, doubled for wrap-around matching.
    let mut tables: Vec<Vec<i16>> = Vec::with_capacity(2);
    for r in [rel.clone(), rel.inverse()] {
        let mut doubled = r.letters().to_vec();
        doubled.extend_from_slice(r.letters());
        tables.push(doubled);
    }
    let relator_len = 4 * genus.get() as usize;

    let mut cur = w.letters().to_vec();
    loop {
        cyclically_reduce(&mut cur);
        if cur.is_empty() {
            return true;
        }
        if cur.len() < half + 1 {
            return false;
        }
        match find_long_relator_match(&cur, &tables, relator_len, half) {
            None => return false,
            Some((start, mlen, table_idx, table_pos)) => {
                // Replace the matched piece s (length mlen) by the inverse of
                // the complementary piece t, where s·t is a cyclic rotation of
                // the relator; |t| = 4g − mlen < mlen.
                let table = &tables[table_idx];
                let complement: Vec<i16> = table[table_pos + mlen..table_pos + relator_len]
                    .iter()
                    .rev()
                    .map(|&x| -x)
                    .collect();
                let n = cur.len();
                let mut next: Vec<i16> = Vec::with_capacity(n - mlen + complement.len());
                // Matched subword occupies cyclic positions start..start+mlen.
                let mut keep: Vec<i16> = Vec::with_capacity(n - mlen);
                for off in mlen..n {
                    keep.push(cur[(start + off) % n]);
                }
                for &x in &complement {
                    push_reduced(&mut next, x);
                }
                for &x in &keep {
                    push_reduced(&mut next, x);
                }
                debug_assert!(next.len() < n);
                cur = next;
            }
        }
    }
}

fn push_reduced(buf: &mut Vec<i16>, x: i16) {
    if buf.last() == Some(&-x) {
        buf.pop();
    } else {
        buf.push(x);
    }
}

fn cyclically_reduce(cur: &mut Vec<i16>) {
    // Free reduction first (inputs are reduced, but replacements may expose
    // new cancellations), then trim inverse ends.
    let mut reduced: Vec<i16> = Vec::with_capacity(cur.len());
    for &x in cur.iter() {
        push_reduced(&mut reduced, x);
    }
    let mut lo = 0usize;
    let mut hi = reduced.len();
    while hi - lo >= 2 && reduced[lo] == -reduced[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    *cur = reduced[lo..hi].to_vec();
}

/// Leftmost-first, longest-match scan of the cyclic word against every
/// rotation of the relator and its inverse. Returns
/// `(start, match_len, table_idx, table_pos)` for matches longer than half.
fn find_long_relator_match(
    cur: &[i16],
    tables: &[Vec<i16>],
    relator_len: usize,
    half: usize,
) -> Option<(usize, usize, usize, usize)> {
    let n = cur.len();
    let max_len = relator_len.min(n);
    for start in 0..n {
        let mut best: Option<(usize, usize, usize)> = None; // (len, table, pos)
        for (ti, table) in tables.iter().enumerate() {
            for pos in 0..relator_len {
                let mut l = 0usize;
                while l < max_len && cur[(start + l) % n] == table[pos + l] {
                    l += 1;
                }
                if l > half && best.map_or(true, |(bl, _, _)| l > bl) {
                    best = Some((l, ti, pos));
                }
            }
        }
        if let Some((l, ti, pos)) = best {
            return Some((start, l, ti, pos));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> Genus {
        Genus::new(2).unwrap()
    }

    #[test]
    fn reduce_cancellation() {
        let w = Word::reduce(g2(), &[1, -1]).unwrap();
        assert!(w.is_empty());
        let w = Word::reduce(g2(), &[1, 2, -2, 3]).unwrap();
        assert_eq!(w.letters(), &[1, 3]);
        let w = Word::reduce(g2(), &[1, 1]).unwrap();
        assert_eq!(w.letters(), &[1, 1]);
    }

    #[test]
    fn reduce_rejects_out_of_range() {
        assert!(Word::reduce(g2(), &[5]).is_err());
        assert!(Word::reduce(g2(), &[0]).is_err());
        assert!(Word::reduce(Genus::new(3).unwrap(), &[6]).is_ok());
    }

    #[test]
    fn genus_below_two_rejected() {
        assert!(Genus::new(1).is_err());
        assert!(Genus::new(0).is_err());
    }

    #[test]
    fn group_ops() {
        let a1 = Word::generator(g2(), 1).unwrap();
        let prod = a1.multiply(&a1.inverse()).unwrap();
        assert!(prod.is_empty());

        let ab = Word::reduce(g2(), &[1, 2]).unwrap();
        assert_eq!(ab.inverse().letters(), &[-2, -1]);

        let b1 = Word::generator(g2(), 2).unwrap();
        let conj = b1.conjugate(&a1).unwrap();
        assert_eq!(conj.letters(), &[-1, 2, 1]);
    }

    #[test]
    fn relator_shape() {
        let c = relator(g2());
        assert_eq!(c.letters(), &[1, 2, -1, -2, 3, 4, -3, -4]);
        let c3 = relator(Genus::new(3).unwrap());
        assert_eq!(c3.letters(), &[1, 2, -1, -2, 3, 4, -3, -4, 5, 6, -5, -6]);
        for g in 2..=5u16 {
            assert_eq!(relator(Genus::new(g).unwrap()).len(), 4 * g as usize);
        }
    }

    #[test]
    fn abelianize_examples() {
        assert!(Word::empty(g2()).abelianize().is_zero());
        assert!(relator(g2()).abelianize().is_zero());
        let w = Word::reduce(g2(), &[1, 2, 1]).unwrap();
        assert_eq!(w.abelianize().coords(), &[2, 1, 0, 0]);
    }

    #[test]
    fn intersection_examples() {
        let a1 = Word::generator(g2(), 1).unwrap();
        let b1 = Word::generator(g2(), 2).unwrap();
        let a2 = Word::generator(g2(), 3).unwrap();
        assert_eq!(intersection(&a1, &b1).unwrap(), 1);
        assert_eq!(intersection(&a1, &a2).unwrap(), 0);
        // Oracle: brute-force pairing on abelianizations.
        let w = Word::reduce(g2(), &[1, 4]).unwrap(); // a1 b2
        let x = w.abelianize();
        let y = b1.abelianize();
        let mut oracle = 0i64;
        for k in 0..2 {
            oracle += x.coords()[2 * k] * y.coords()[2 * k + 1] - x.coords()[2 * k + 1] * y.coords()[2 * k];
        }
        assert_eq!(oracle, 1);
        assert_eq!(intersection(&w, &b1).unwrap(), oracle);
    }

    #[test]
    fn surface_equal_relator() {
        let c = relator(g2());
        let e = Word::empty(g2());
        assert!(surface_equal(&c, &e).unwrap());
        // Conjugate by w = a2 b1.
        let w = Word::reduce(g2(), &[3, 2]).unwrap();
        let conj = c.conjugate(&w).unwrap();
        assert!(surface_equal(&conj, &e).unwrap());
        let a1 = Word::generator(g2(), 1).unwrap();
        let a2 = Word::generator(g2(), 3).unwrap();
        assert!(!surface_equal(&a1, &a2).unwrap());
        assert!(surface_equal(&a1, &a1).unwrap());
    }

    #[test]
    fn surface_equal_powers_and_products() {
        let c = relator(g2());
        let e = Word::empty(g2());
        let c2 = c.power(2).unwrap();
        assert!(surface_equal(&c2, &e).unwrap());
        assert!(surface_equal(&c.inverse(), &e).unwrap());
        // c · w · c⁻¹ equals w for any w.
        let w = Word::reduce(g2(), &[2, 3, 3, -4]).unwrap();
        let cw = c.multiply(&w).unwrap().multiply(&c.inverse()).unwrap();
        assert!(surface_equal(&cw, &w).unwrap());
        assert!(!surface_equal(&w, &e).unwrap());
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let w = Word::parse(g2(), "a1 B2 A1").unwrap();
        assert_eq!(w.letters(), &[1, -4, -1]);
        assert_eq!(w.to_string(), "a1 B2 A1");
        let e = Word::parse(g2(), "-").unwrap();
        assert!(e.is_empty());
        assert_eq!(e.to_string(), "-");
        assert!(Word::parse(g2(), "a3").is_err());
        assert!(Word::parse(g2(), "x1").is_err());
        // Parsing reduces: a1 A1 is empty.
        assert!(Word::parse(g2(), "a1 A1").unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let raw: Vec<i16> = std::iter::repeat(1).take(MAX_WORD_LEN + 1).collect();
        assert!(matches!(Word::reduce(g2(), &raw), Err(WordError::TooLong { .. })));
    }

    #[test]
    fn cyclic_reduce_splits() {
        let w = Word::parse(g2(), "a1 b1 a2 B1 A1").unwrap();
        let (u, core) = w.cyclic_reduce();
        assert_eq!(u.to_string(), "a1 b1");
        assert_eq!(core.to_string(), "a2");
        let back = u.multiply(&core).unwrap().multiply(&u.inverse()).unwrap();
        assert_eq!(back, w);
    }
}
