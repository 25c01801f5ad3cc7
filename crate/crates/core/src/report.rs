//! Machine-readable reports: the winding-vs-translation defect comparison
//! experiment, representation dumps, and the convention block embedded in
//! every report for reproducibility.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::batch::map_indexed;
use crate::crossed::{classify_cover, defect, c_f, r_value, Cochain, CoverType};
use crate::error::CocycleError;
use crate::fuchs::FuchsianRep;
use crate::lift::LiftContext;
use crate::mapping::MappingClass;
use crate::sample::{pair_with_reduced_concat, rng_for};
use crate::winding::FieldModel;
use crate::words::{Genus, Word};

/// The sign and direction conventions a report's numbers depend on.
#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    /// `conjugate(u, w) = w^-1 u w` throughout.
    pub conjugation: &'static str,
    /// Coordinate `x` names the direction of planar angle `pi x`.
    pub circle_coordinate: &'static str,
    /// The relator lift translates by `2 - 2g`.
    pub euler_normalization: &'static str,
    /// Whether the raw polygon representation was mirror-conjugated to meet
    /// the normalization.
    pub orientation_flipped: bool,
}

impl Conventions {
    pub fn for_rep(rep: &FuchsianRep) -> Self {
        Conventions {
            conjugation: "w^-1 u w",
            circle_coordinate: "x in [0,1) is the direction with planar angle pi*x",
            euler_normalization: "trans(lift(relator)) = 2 - 2g",
            orientation_flipped: rep.orientation_flipped(),
        }
    }
}

/// Generator matrices, row-major, full double precision.
#[derive(Clone, Debug, Serialize)]
pub struct RepDump {
    pub genus: u16,
    pub orientation_flipped: bool,
    pub conventions: Conventions,
    /// `a_1, b_1, ..., a_g, b_g`; each row-major `[a, b, c, d]`.
    pub matrices: Vec<[f64; 4]>,
}

pub fn rep_dump(rep: &FuchsianRep) -> RepDump {
    RepDump {
        genus: rep.genus().get(),
        orientation_flipped: rep.orientation_flipped(),
        conventions: Conventions::for_rep(rep),
        matrices: rep.generators().iter().map(|m| m.e).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareParams {
    pub genus: u16,
    pub samples: usize,
    pub maxlen: usize,
    pub seed: u64,
    pub field: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub alpha: String,
    pub beta: String,
    pub d_omega: i64,
    pub d_trans: i64,
    pub cover_type: CoverType,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverStat {
    pub count: usize,
    pub agree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareSummary {
    pub agree_rate: f64,
    pub by_cover: BTreeMap<String, CoverStat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub params: CompareParams,
    pub conventions: Conventions,
    pub pairs: Vec<PairRecord>,
    pub summary: CompareSummary,
}

/// The open-problem experiment: for seeded random pairs with reduced
/// concatenation, tabulate the winding-number defect against the
/// translation-number defect, broken down by cover type. Draws no
/// conclusion; the report is the deliverable.
pub fn compare_defects(
    ctx: &LiftContext,
    field: &FieldModel,
    samples: usize,
    maxlen: usize,
    seed: u64,
) -> Result<CompareReport, CocycleError> {
    let genus = ctx.genus();
    let records: Vec<Result<PairRecord, CocycleError>> = map_indexed(samples, |i| {
        let mut rng = rng_for(seed, i as u64);
        let (alpha, beta) = pair_with_reduced_concat(&mut rng, genus, maxlen);
        let d_omega = Cochain::Winding(field)
            .eval(&alpha.multiply(&beta)?)?
            - Cochain::Winding(field).eval(&alpha)?
            - Cochain::Winding(field).eval(&beta)?;
        let d_trans = ctx.tau(&alpha, &beta)?;
        let cover_type = classify_cover(ctx, &alpha, &beta)?;
        Ok(PairRecord {
            alpha: alpha.to_string(),
            beta: beta.to_string(),
            d_omega,
            d_trans,
            cover_type,
            agree: d_omega == d_trans,
        })
    });
    let mut pairs = Vec::with_capacity(samples);
    for r in records {
        pairs.push(r?);
    }
    let mut by_cover: BTreeMap<String, CoverStat> = BTreeMap::new();
    let mut agree = 0usize;
    for p in &pairs {
        let key = serde_json::to_value(p.cover_type)
            .expect("cover type serializes")
            .as_str()
            .expect("cover type is a string")
            .to_string();
        let stat = by_cover.entry(key).or_insert(CoverStat { count: 0, agree: 0 });
        stat.count += 1;
        if p.agree {
            stat.agree += 1;
            agree += 1;
        }
    }
    let agree_rate = agree as f64 / samples.max(1) as f64;
    Ok(CompareReport {
        params: CompareParams {
            genus: genus.get(),
            samples,
            maxlen,
            seed,
            field: field.label.clone(),
        },
        conventions: Conventions::for_rep(ctx.rep()),
        pairs,
        summary: CompareSummary { agree_rate, by_cover },
    })
}

/// One row of the exploratory difference table between the letter-pair
/// crossed homomorphism and the rotation-number one.
#[derive(Clone, Debug, Serialize)]
pub struct DifferenceRow {
    pub class: String,
    pub gamma: String,
    pub c_f: i64,
    pub r: i64,
    pub difference: i64,
}

/// Deterministic `C_f - R` table on point-pushes, evaluated on the
/// generators. Raw data for the open question about their coboundary.
pub fn cf_minus_r_table(ctx: &LiftContext) -> Result<Vec<DifferenceRow>, CocycleError> {
    let genus = ctx.genus();
    let mut rows = Vec::new();
    for letter in 1..=genus.rank() as i16 {
        let push = MappingClass::point_push(genus, letter)?;
        for k in 1..=genus.rank() as i16 {
            let gamma = Word::generator(genus, k)?;
            let cf = c_f(&push, &gamma)?;
            let r = r_value(ctx, &push, &gamma)?;
            rows.push(DifferenceRow {
                class: push.label().to_string(),
                gamma: gamma.to_string(),
                c_f: cf,
                r,
                difference: cf - r,
            });
        }
    }
    Ok(rows)
}

/// Sanity anchor used by tests: the winding defect of a pair via the cochain
/// interface (identical to `FieldModel::defect`).
pub fn winding_defect(field: &FieldModel, a: &Word, b: &Word) -> Result<i64, CocycleError> {
    defect(&Cochain::Winding(field), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::build_context;

    #[test]
    fn compare_defects_is_deterministic() {
        let ctx = build_context(Genus::new(2).unwrap()).unwrap();
        let field = FieldModel::builtin(ctx.genus(), 0).unwrap();
        let a = compare_defects(&ctx, &field, 50, 8, 42).unwrap();
        let b = compare_defects(&ctx, &field, 50, 8, 42).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
        assert_eq!(a.pairs.len(), 50);
    }

    #[test]
    fn torus_pairs_agree_at_zero() {
        let ctx = build_context(Genus::new(2).unwrap()).unwrap();
        let field = FieldModel::builtin(ctx.genus(), 0).unwrap();
        let report = compare_defects(&ctx, &field, 120, 8, 7).unwrap();
        for p in &report.pairs {
            if p.cover_type == CoverType::PuncturedTorus {
                assert_eq!(p.d_omega, 0, "{} | {}", p.alpha, p.beta);
                assert_eq!(p.d_trans, 0, "{} | {}", p.alpha, p.beta);
            }
        }
    }

    #[test]
    fn rep_dump_shape() {
        let ctx = build_context(Genus::new(3).unwrap()).unwrap();
        let dump = rep_dump(ctx.rep());
        assert_eq!(dump.genus, 3);
        assert_eq!(dump.matrices.len(), 6);
    }

    #[test]
    fn difference_table_deterministic() {
        let ctx = build_context(Genus::new(2).unwrap()).unwrap();
        let a = serde_json::to_string(&cf_minus_r_table(&ctx).unwrap()).unwrap();
        let b = serde_json::to_string(&cf_minus_r_table(&ctx).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
