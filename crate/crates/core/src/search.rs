//! Sweeps over (type, genus, group) triples and tabulates the best packings.

use std::sync::Arc;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::curve::{
    enumerate_exceptional_types, enumerate_generating_vectors, forced_group_order, CurveAction, CurveError, CurveType,
    GeneratingVector,
};
use crate::group::{FiniteGroup, GroupElement};
use crate::packing::{max_packing, packing_ratio, PackingOptions, DEFAULT_TIME_BUDGET};
use crate::slope::simple_galois_slope;

/// Largest ramification index tried when optimizing the slope of a packing.
pub const MAX_RAMIFICATION: u64 = 12;

/// Small-genus packing bounds for the exceptional types established by an
/// exhaustive search over all groups of the relevant orders:
/// `(type, coefficient of (g − 1), largest genus covered)`.
pub const REFERENCE_BOUNDS: &[(&[u32], (i64, i64), u64)] = &[
    (&[2, 2, 2, 3], (2, 1), 30),
    (&[2, 3, 7], (3, 1), 23),
    (&[2, 3, 8], (3, 1), 23),
    (&[2, 3, 9], (2, 1), 23),
    (&[2, 4, 5], (2, 1), 23),
    (&[2, 4, 6], (2, 1), 50),
    (&[2, 5, 5], (4, 3), 50),
    (&[3, 3, 4], (3, 1), 50),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("{group} with {curve_type} at genus {genus}: packing of size {m} exceeds |G|/nu_k = {bound}")]
    BoundExceeded { group: String, curve_type: String, genus: u64, m: usize, bound: u64 },
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub max_genus: u64,
    pub types: Vec<CurveType>,
    pub catalog: Vec<Arc<FiniteGroup>>,
    pub per_instance_budget: Option<Duration>,
    pub require_distinct: bool,
}

impl SearchSpec {
    /// The exceptional types over `catalog` with the default budget.
    pub fn new(max_genus: u64, catalog: Vec<Arc<FiniteGroup>>) -> Self {
        Self {
            max_genus,
            types: enumerate_exceptional_types().into_iter().map(|e| e.curve_type).collect(),
            catalog,
            per_instance_budget: Some(DEFAULT_TIME_BUDGET),
            require_distinct: false,
        }
    }

    pub fn with_types(mut self, types: Vec<CurveType>) -> Self {
        self.types = types;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_genus < 2 {
            return Err(SearchError::InvalidSpec(format!("max genus {} is below 2", self.max_genus)));
        }
        if let Some(t) = self.types.iter().find(|t| t.quotient_genus() != 0 || t.branch_count() < 3) {
            return Err(SearchError::InvalidSpec(format!("type {t} needs h = 0 and at least 3 branch points")));
        }
        Ok(())
    }
}

/// Best packing over all vector classes of one group, type and genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRecord {
    pub group: String,
    pub group_order: usize,
    pub curve_type: CurveType,
    pub genus: u64,
    pub vector_classes: usize,
    pub m: usize,
    /// The vector class attaining `m` (first in enumeration order).
    pub best_vector: GeneratingVector,
    pub witness: Vec<GroupElement>,
    pub mu_bound: u64,
    pub ratio: BigRational,
    /// Slope with every graph ramified to order 3.
    pub slope_all_threes: BigRational,
    /// Best slope over uniform ramification indices `2..=MAX_RAMIFICATION`.
    pub optimal_slope: BigRational,
    pub optimal_r: u64,
    pub truncated: bool,
}

/// Catalog groups whose order is the one forced by `curve_type` at `genus`.
pub fn groups_for<'a>(
    curve_type: &CurveType,
    genus: u64,
    catalog: &'a [Arc<FiniteGroup>],
) -> Vec<&'a Arc<FiniteGroup>> {
    match forced_group_order(curve_type, genus) {
        Some(order) => catalog.iter().filter(|g| g.order() as u64 == order).collect(),
        None => Vec::new(),
    }
}

/// Uniform ramification index maximizing the simple Galois slope of `m`
/// graphs; ties go to the smaller index.
pub fn optimal_uniform_slope(genus: u64, m: usize) -> (u64, BigRational) {
    let mut best = (2, simple_galois_slope(genus, &vec![2; m]));
    for r in 3..=MAX_RAMIFICATION {
        let s = simple_galois_slope(genus, &vec![r; m]);
        if s > best.1 {
            best = (r, s);
        }
    }
    best
}

fn solve_instance(
    spec: &SearchSpec,
    curve_type: &CurveType,
    genus: u64,
    group: &Arc<FiniteGroup>,
) -> Result<Option<SearchRecord>, SearchError> {
    let vectors = enumerate_generating_vectors(group, curve_type, spec.require_distinct)?;
    let options = PackingOptions { time_budget: spec.per_instance_budget, seed_lower_bound: None };
    let mut best: Option<(GeneratingVector, crate::packing::PackingResult, u64)> = None;
    let mut truncated = false;
    for vector in &vectors {
        let action = CurveAction::new(group.clone(), curve_type.clone(), vector.clone())?;
        debug_assert_eq!(action.genus(), genus);
        let result = max_packing(group, action.fixed_set(), &options).expect("fixed sets of actions are valid");
        truncated |= result.time_bounded;
        let mu = action.mu_bound();
        if result.m as u64 > mu {
            return Err(SearchError::BoundExceeded {
                group: group.name().to_string(),
                curve_type: curve_type.tuple_string(),
                genus,
                m: result.m,
                bound: mu,
            });
        }
        if best.as_ref().is_none_or(|(_, b, _)| result.m > b.m) {
            best = Some((vector.clone(), result, mu));
        }
    }
    let Some((best_vector, result, mu_bound)) = best else {
        return Ok(None);
    };
    let (optimal_r, optimal_slope) = optimal_uniform_slope(genus, result.m);
    Ok(Some(SearchRecord {
        group: group.name().to_string(),
        group_order: group.order(),
        curve_type: curve_type.clone(),
        genus,
        vector_classes: vectors.len(),
        m: result.m,
        best_vector,
        witness: result.witness,
        mu_bound,
        ratio: packing_ratio(result.m as u64, genus).expect("genus >= 2"),
        slope_all_threes: simple_galois_slope(genus, &vec![3; result.m]),
        optimal_slope,
        optimal_r,
        truncated,
    }))
}

/// Runs every (type, genus, group) instance, in parallel, and returns the
/// records sorted by type, genus and group name.
pub fn run_search(spec: &SearchSpec) -> Result<Vec<SearchRecord>, SearchError> {
    spec.validate()?;
    let mut instances = Vec::new();
    for curve_type in &spec.types {
        for genus in 2..=spec.max_genus {
            for group in groups_for(curve_type, genus, &spec.catalog) {
                instances.push((curve_type, genus, group));
            }
        }
    }
    let results: Vec<Result<Option<SearchRecord>, SearchError>> = instances
        .par_iter()
        .map(|(curve_type, genus, group)| solve_instance(spec, curve_type, *genus, group))
        .collect();
    let mut records = Vec::new();
    for r in results {
        if let Some(record) = r? {
            records.push(record);
        }
    }
    records.sort_by(|a, b| {
        (&a.curve_type, a.genus, &a.group, &a.best_vector).cmp(&(&b.curve_type, b.genus, &b.group, &b.best_vector))
    });
    Ok(records)
}

/// Per-type summary of the observed packing ratios.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioRow {
    pub curve_type: CurveType,
    pub max_ratio: BigRational,
    pub witness_group: String,
    pub witness_genus: u64,
    pub min_genus: u64,
    pub max_genus: u64,
    pub records: usize,
    /// Coefficient and genus limit from [`REFERENCE_BOUNDS`], if listed.
    pub reference: Option<(BigRational, u64)>,
}

pub fn reference_bound(curve_type: &CurveType) -> Option<(BigRational, u64)> {
    if curve_type.quotient_genus() != 0 {
        return None;
    }
    REFERENCE_BOUNDS
        .iter()
        .find(|(orders, _, _)| *orders == curve_type.branch_orders())
        .map(|(_, (n, d), limit)| (BigRational::new(BigInt::from(*n), BigInt::from(*d)), *limit))
}

/// Maximum ratio per type; the witness is the first record (in record
/// order) attaining it.
pub fn ratio_table(records: &[SearchRecord]) -> Vec<RatioRow> {
    let mut rows: Vec<RatioRow> = Vec::new();
    let mut sorted: Vec<&SearchRecord> = records.iter().collect();
    sorted.sort_by(|a, b| (&a.curve_type, a.genus, &a.group).cmp(&(&b.curve_type, b.genus, &b.group)));
    for rec in sorted {
        match rows.last_mut() {
            Some(row) if row.curve_type == rec.curve_type => {
                row.records += 1;
                row.min_genus = row.min_genus.min(rec.genus);
                row.max_genus = row.max_genus.max(rec.genus);
                if rec.ratio > row.max_ratio {
                    row.max_ratio = rec.ratio.clone();
                    row.witness_group = rec.group.clone();
                    row.witness_genus = rec.genus;
                }
            }
            _ => rows.push(RatioRow {
                curve_type: rec.curve_type.clone(),
                max_ratio: rec.ratio.clone(),
                witness_group: rec.group.clone(),
                witness_genus: rec.genus,
                min_genus: rec.genus,
                max_genus: rec.genus,
                records: 1,
                reference: reference_bound(&rec.curve_type),
            }),
        }
    }
    rows
}
