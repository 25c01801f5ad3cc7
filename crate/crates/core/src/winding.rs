//! Combinatorial winding numbers on the surface minus a disk.
//!
//! The spine is the one-vertex fatgraph whose boundary word is the surface
//! relator. A `FieldModel` is a planar immersion of that spine (one exact
//! rational direction per directed edge-end, stored as integer ticks of a
//! full turn) together with an integer field twist per petal; this is the
//! combinatorial shadow of a nowhere-zero vector field on the thickened
//! spine. The winding number of a reduced word is the total turning of the
//! taut edge-path of its cyclically reduced core, in full turns, minus the
//! signed twist sum.
//!
//! All turning arithmetic is exact integer arithmetic in ticks, so the
//! integrality check is exact rather than floating-point.

use serde::Serialize;

use crate::error::FieldError;
use crate::words::{relator, Genus, Word};

/// Directed edge-end at the fatgraph vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Out,
    In,
}

/// Half-edge id: petal `k` in `1..=2g`, leaving or entering.
fn half_edge(k: i16, end: End) -> usize {
    2 * (k as usize - 1) + if end == End::Out { 0 } else { 1 }
}

/// One-vertex spine of the punctured surface: the cyclic order of the `4g`
/// directed edge-ends around the vertex, chosen so the single boundary
/// component reads the relator.
#[derive(Clone, Debug)]
pub struct Fatgraph {
    genus: Genus,
    /// `order[p]` = half-edge id at cyclic position `p`.
    order: Vec<usize>,
    boundary: Word,
}

impl Fatgraph {
    /// The standard spine: per handle the ends `out_b, in_a, in_b, out_a`
    /// occupy consecutive positions, handle blocks in descending order.
    /// Validated against the relator at construction.
    pub fn build(genus: Genus) -> Result<Fatgraph, FieldError> {
        let g = genus.get() as usize;
        let n = 4 * g;
        let mut order = vec![usize::MAX; n];
        for i in 0..g {
            // Handle blocks descend around the vertex; block i starts at
            // position 4g - 3 - 4i (mod 4g).
            let s = (2 * n - 3 - 4 * i) % n;
            let a = 2 * i as i16 + 1;
            let b = 2 * i as i16 + 2;
            order[s] = half_edge(b, End::Out);
            order[(s + 1) % n] = half_edge(a, End::In);
            order[(s + 2) % n] = half_edge(b, End::In);
            order[(s + 3) % n] = half_edge(a, End::Out);
        }
        let boundary = boundary_word(genus, &order)?;
        let c = relator(genus);
        if !is_rotation_of(&boundary, &c) && !is_rotation_of(&boundary, &c.inverse()) {
            return Err(FieldError::BadBoundary { found: boundary.to_string() });
        }
        Ok(Fatgraph { genus, order, boundary })
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn cyclic_order(&self) -> &[usize] {
        &self.order
    }

    /// The single boundary word (a rotation of the relator or its inverse).
    pub fn boundary_word(&self) -> &Word {
        &self.boundary
    }

    /// One vertex minus `2g` edges.
    pub fn euler_characteristic(&self) -> i64 {
        1 - self.genus.rank() as i64
    }
}

/// Trace the fatgraph boundary starting from the first half-edge: exit along
/// a half-edge (reading its letter), cross the petal, and turn to the next
/// half-edge clockwise from the arrival end.
fn boundary_word(genus: Genus, order: &[usize]) -> Result<Word, FieldError> {
    let n = order.len();
    let mut pos_of = vec![usize::MAX; n];
    for (p, &h) in order.iter().enumerate() {
        if h >= n || pos_of[h] != usize::MAX {
            return Err(FieldError::BadBoundary { found: "duplicate half-edge".to_string() });
        }
        pos_of[h] = p;
    }
    let mut letters = Vec::with_capacity(n);
    let start = order[0];
    let mut h = start;
    loop {
        let k = (h / 2 + 1) as i16;
        let letter = if h % 2 == 0 { k } else { -k };
        letters.push(letter);
        let partner = if h % 2 == 0 { h + 1 } else { h - 1 };
        let p = pos_of[partner];
        h = order[(p + n - 1) % n];
        if h == start {
            break;
        }
        if letters.len() > n {
            return Err(FieldError::BadBoundary { found: "boundary does not close".to_string() });
        }
    }
    if letters.len() != n {
        return Err(FieldError::BadBoundary { found: format!("boundary length {}", letters.len()) });
    }
    Ok(Word::reduce(genus, &letters)?)
}

fn is_rotation_of(w: &Word, of: &Word) -> bool {
    if w.len() != of.len() {
        return false;
    }
    let n = w.len();
    let doubled: Vec<i16> = of.letters().iter().chain(of.letters()).copied().collect();
    (0..n).any(|s| doubled[s..s + n] == *w.letters())
}

/// A combinatorial nowhere-zero vector field: immersion directions per
/// directed edge-end (exact ticks of a full turn) plus an integer extra
/// twist of the field along each petal.
#[derive(Clone, Debug, Serialize)]
pub struct FieldModel {
    #[serde(skip)]
    genus: Genus,
    pub label: String,
    /// Ticks in a full turn (the common denominator of all angles).
    pub ticks_per_turn: i64,
    /// Direction of each directed edge-end, indexed by half-edge id.
    pub angle_ticks: Vec<i64>,
    /// Field twist along each petal, indexed by generator `k-1`.
    pub twists: Vec<i64>,
}

impl FieldModel {
    /// The two built-in fields. They share the circular order of their
    /// directions (so taut-path turning agrees) but differ in the exact
    /// angle layout and in the petal twists.
    ///
    /// Layout: each petal carries one strand direction (the direction of the
    /// corresponding side-pairing translation axis past the base vertex,
    /// which for the regular polygon is the bisector of its two edge
    /// midpoints turned a quarter turn); the out-end points along the
    /// strand, the in-end exactly opposite, so every petal passes the vertex
    /// without a corner and all turning sits in the transitions. The regular
    /// polygon makes some strands of different handles exactly parallel, so
    /// a per-petal jitter far smaller than the slot pitch breaks the ties
    /// without changing the circular order.
    pub fn builtin(genus: Genus, which: usize) -> Result<FieldModel, FieldError> {
        let g = genus.get() as i64;
        let n = (4 * g) as usize;
        let q = 4800 * g; // pitch of 1200 ticks per polygon edge
        let mut angle_ticks = vec![0i64; n];
        for i in 0..g {
            let a = (2 * i + 1) as i16;
            let b = (2 * i + 2) as i16;
            // The strand of a petal sits at the average edge index of its two
            // polygon edges, turned a quarter turn, tie-broken by ten ticks
            // per petal index. The in-end is exactly opposite the out-end.
            let strand = |slot: i64, petal: i64| -> i64 { 3 + 1200 * slot + 1200 * g + 10 * petal };
            let sa = strand(4 * i + 1, 2 * i + 1);
            let sb = strand(4 * i + 2, 2 * i + 2);
            angle_ticks[half_edge(a, End::Out)] = sa.rem_euclid(q);
            angle_ticks[half_edge(a, End::In)] = (sa + 2400 * g).rem_euclid(q);
            angle_ticks[half_edge(b, End::Out)] = sb.rem_euclid(q);
            angle_ticks[half_edge(b, End::In)] = (sb + 2400 * g).rem_euclid(q);
        }
        let (label, twists) = match which {
            0 => ("X".to_string(), vec![0i64; n / 2]),
            _ => {
                // Shift each strand inside its ten-tick gap (circular order
                // preserved; the in-end keeps tracking its out-end) and add
                // a nonzero twist pattern.
                for k in 1..=n as i16 / 2 {
                    let j = (k as i64 % 4) + 1;
                    angle_ticks[half_edge(k, End::Out)] = (angle_ticks[half_edge(k, End::Out)] + j).rem_euclid(q);
                    angle_ticks[half_edge(k, End::In)] = (angle_ticks[half_edge(k, End::In)] + j).rem_euclid(q);
                }
                ("Y".to_string(), (0..n as i64 / 2).map(|k| (k % 3) - 1).collect())
            }
        };
        let field = FieldModel { genus, label, ticks_per_turn: q, angle_ticks, twists };
        field.validate()?;
        Ok(field)
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    /// Angles must be pairwise distinct mod a full turn; coincident ends
    /// would create exact half-turn ties at taut-path transitions.
    pub fn validate(&self) -> Result<(), FieldError> {
        let q = self.ticks_per_turn;
        let n = self.angle_ticks.len();
        for i in 0..n {
            for j in i + 1..n {
                if (self.angle_ticks[i] - self.angle_ticks[j]).rem_euclid(q) == 0 {
                    return Err(FieldError::AngleCollision { first: i, second: j });
                }
            }
        }
        Ok(())
    }

    fn angle(&self, k: i16, end: End) -> i64 {
        self.angle_ticks[half_edge(k, end)]
    }

    /// Shortest signed rotation in ticks, in `(-Q/2, Q/2]`.
    fn norm(&self, d: i64) -> i64 {
        let q = self.ticks_per_turn;
        let r = d.rem_euclid(q);
        if r > q / 2 {
            r - q
        } else {
            r
        }
    }

    /// Winding number of the taut representative of a reduced word: total
    /// turning of the cyclically reduced core's closed edge-path divided by
    /// a full turn, minus the signed petal twists. Conjugation-invariant by
    /// construction; zero on the empty word.
    pub fn omega(&self, w: &Word) -> Result<i64, FieldError> {
        if w.genus() != self.genus {
            return Err(FieldError::Word(crate::error::WordError::GenusMismatch {
                left: self.genus.get(),
                right: w.genus().get(),
            }));
        }
        let (_, core) = w.cyclic_reduce();
        if core.is_empty() {
            return Ok(0);
        }
        let letters = core.letters();
        let n = letters.len();
        let q = self.ticks_per_turn;
        let mut ticks = 0i64;
        let mut twist = 0i64;
        for i in 0..n {
            let x = letters[i];
            let k = x.unsigned_abs() as i16;
            // Petal interior: departure direction to arrival direction.
            let (dep, arr) = if x > 0 {
                (self.angle(k, End::Out), self.angle(k, End::In) + q / 2)
            } else {
                (self.angle(k, End::In), self.angle(k, End::Out) + q / 2)
            };
            ticks += self.norm(arr - dep);
            twist += if x > 0 { self.twists[(k - 1) as usize] } else { -self.twists[(k - 1) as usize] };
            // Vertex transition to the next letter (cyclically).
            let y = letters[(i + 1) % n];
            let next_dep = if y > 0 {
                self.angle(y.unsigned_abs() as i16, End::Out)
            } else {
                self.angle(y.unsigned_abs() as i16, End::In)
            };
            ticks += self.norm(next_dep - arr);
        }
        if ticks % q != 0 {
            return Err(FieldError::NonIntegerTurning { ticks, per_turn: q });
        }
        Ok(ticks / q - twist)
    }

    /// Additivity defect `omega(ab) - omega(a) - omega(b)` with `ab` freely
    /// reduced. Independent of the field (only the shared direction order
    /// matters) and of the twists.
    pub fn defect(&self, a: &Word, b: &Word) -> Result<i64, FieldError> {
        let ab = a.multiply(b)?;
        Ok(self.omega(&ab)? - self.omega(a)? - self.omega(b)?)
    }
}
