//! Riemann–Hurwitz bookkeeping, generating vectors, and fixed-point sets.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::bitset::ElementSet;
use crate::group::{FiniteGroup, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("branch orders must all be at least 2, got {0}")]
    BadBranchOrder(u32),
    #[error("cannot parse curve type `{0}` (expected e.g. `h=0;2,3,7`)")]
    ParseType(String),
    #[error("Riemann-Hurwitz gives non-integral genus (2g-2 = {0})")]
    NonIntegralGenus(String),
    #[error("Riemann-Hurwitz gives negative genus (2g-2 = {0})")]
    NegativeGenus(String),
    #[error("{divisor} does not divide {order}")]
    NonDivisor { order: u64, divisor: u64 },
    #[error("vector enumeration needs quotient genus 0 and at least 3 branch points, got {0}")]
    UnsupportedType(CurveType),
    #[error("invalid generating vector: {0}")]
    InvalidVector(String),
    #[error("curve genus {0} is below 2")]
    GenusTooSmall(u64),
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Quotient genus and ascending branch multiplicities of a group action.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveType {
    quotient_genus: u32,
    branch_orders: Vec<u32>,
}

impl CurveType {
    pub fn new(quotient_genus: u32, mut branch_orders: Vec<u32>) -> Result<Self, CurveError> {
        if let Some(&bad) = branch_orders.iter().find(|&&v| v < 2) {
            return Err(CurveError::BadBranchOrder(bad));
        }
        branch_orders.sort_unstable();
        Ok(Self { quotient_genus, branch_orders })
    }

    /// A genus-zero quotient type.
    pub fn spherical(branch_orders: &[u32]) -> Result<Self, CurveError> {
        Self::new(0, branch_orders.to_vec())
    }

    pub fn quotient_genus(&self) -> u32 {
        self.quotient_genus
    }

    pub fn branch_orders(&self) -> &[u32] {
        &self.branch_orders
    }

    pub fn branch_count(&self) -> usize {
        self.branch_orders.len()
    }

    /// Largest multiplicity, with 1 standing in for an unramified action.
    pub fn largest_order(&self) -> u32 {
        self.branch_orders.last().copied().unwrap_or(1)
    }

    /// `2h − 2 + Σ (1 − 1/νᵢ)`, the orbifold Euler characteristic up to sign.
    pub fn orbifold_defect(&self) -> BigRational {
        let mut total = rational(2 * i64::from(self.quotient_genus) - 2, 1);
        for &nu in &self.branch_orders {
            total += rational(i64::from(nu) - 1, i64::from(nu));
        }
        total
    }

    /// The parenthesised list, e.g. `(2,3,7)`.
    pub fn tuple_string(&self) -> String {
        let parts: Vec<String> = self.branch_orders.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.branch_orders.iter().map(ToString::to_string).collect();
        write!(f, "h={};{}", self.quotient_genus, parts.join(","))
    }
}

impl FromStr for CurveType {
    type Err = CurveError;

    /// Accepts `h=0;2,3,7`, `h=2;` and the shorthand `(2,3,7)` for `h = 0`.
    fn from_str(s: &str) -> Result<Self, CurveError> {
        let bad = || CurveError::ParseType(s.to_string());
        let s = s.trim();
        let (h, list) = if let Some(rest) = s.strip_prefix("h=") {
            let (h, list) = rest.split_once(';').ok_or_else(bad)?;
            (h.trim().parse::<u32>().map_err(|_| bad())?, list)
        } else if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            (0, inner)
        } else {
            return Err(bad());
        };
        let orders = if list.trim().is_empty() {
            Vec::new()
        } else {
            list.split(',').map(|t| t.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?
        };
        CurveType::new(h, orders)
    }
}

/// Exact `2g − 2 = |G| (2h − 2 + Σ (1 − 1/νᵢ))`, solved for `g`.
pub fn riemann_hurwitz_genus(group_order: u64, quotient_genus: u32, branch_orders: &[u32]) -> Result<u64, CurveError> {
    let ty = CurveType::new(quotient_genus, branch_orders.to_vec())?;
    let two_g_minus_two = ty.orbifold_defect() * BigRational::from_integer(BigInt::from(group_order));
    if !two_g_minus_two.is_integer() || two_g_minus_two.to_integer().is_odd() {
        return Err(CurveError::NonIntegralGenus(two_g_minus_two.to_string()));
    }
    let genus: BigInt = (two_g_minus_two.to_integer() + 2) / 2;
    if genus.is_negative() {
        return Err(CurveError::NegativeGenus(two_g_minus_two.to_string()));
    }
    Ok(genus.to_u64().expect("genus fits in u64"))
}

/// The group order forced by a genus-`genus` curve of this type, when it is a
/// positive integer.
pub fn forced_group_order(curve_type: &CurveType, genus: u64) -> Option<u64> {
    let defect = curve_type.orbifold_defect();
    if !defect.is_positive() {
        return None;
    }
    let order = rational(2 * genus as i64 - 2, 1) / defect;
    (order.is_integer() && order.is_positive()).then(|| order.to_integer().to_u64()).flatten()
}

/// `|G| / ν_k`, an upper bound on any packing (`ν_k = 1` when unramified).
pub fn mu_upper_bound(group_order: u64, largest_order: u64) -> Result<u64, CurveError> {
    if largest_order == 0 || !group_order.is_multiple_of(largest_order) {
        return Err(CurveError::NonDivisor { order: group_order, divisor: largest_order });
    }
    Ok(group_order / largest_order)
}

/// A genus-zero type whose packing bound exceeds `3(g − 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalType {
    pub curve_type: CurveType,
    /// `m ≤ m_coefficient · (g − 1)`
    pub m_coefficient: BigRational,
    /// `|G| = order_coefficient · (g − 1)`
    pub order_coefficient: BigRational,
}

/// `λ = ν_k (−2 + Σ (1 − 1/νᵢ))` for a genus-zero type.
pub fn lambda(curve_type: &CurveType) -> BigRational {
    curve_type.orbifold_defect() * rational(i64::from(curve_type.largest_order()), 1)
}

/// All genus-zero types with `0 < λ < 2/3`, in lexicographic order.
///
/// Five or more branch points force `λ ≥ 1`; with four, `λ < 2/3` needs
/// `ν_k ≤ 3`; with three, the smallest positive defect `1/6` of the pair
/// `(2,3)` bounds `ν_k ≤ 9`. Scanning up to 12 therefore finds every case.
pub fn enumerate_exceptional_types() -> Vec<ExceptionalType> {
    const MAX_ORDER: u32 = 12;
    let upper = rational(2, 3);
    let mut out = Vec::new();
    for k in 1..=5 {
        for orders in nondecreasing_tuples(k, 2, MAX_ORDER) {
            let ty = CurveType::new(0, orders).expect("orders >= 2");
            let lam = lambda(&ty);
            if lam.is_positive() && lam < upper {
                let nu_k = rational(i64::from(ty.largest_order()), 1);
                out.push(ExceptionalType {
                    m_coefficient: rational(2, 1) / &lam,
                    order_coefficient: rational(2, 1) * nu_k / &lam,
                    curve_type: ty,
                });
            }
        }
    }
    out.sort_by(|a, b| a.curve_type.branch_orders.cmp(&b.curve_type.branch_orders));
    out
}

/// Every nondecreasing `k`-tuple with entries in `lo..=hi`.
pub fn nondecreasing_tuples(k: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    fn go(k: usize, lo: u32, hi: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for v in lo..=hi {
            prefix.push(v);
            go(k, v, hi, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, lo, hi, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Triangle curves (genus-zero quotient, three branch points) are rigid.
pub fn is_rigid_triangle(curve_type: &CurveType) -> bool {
    curve_type.quotient_genus == 0 && curve_type.branch_count() == 3
}

/// Elements `g₁, …, g_k` with prescribed orders, trivial product, generating
/// the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratingVector {
    pub elements: Vec<GroupElement>,
}

impl GeneratingVector {
    pub fn new(elements: Vec<GroupElement>) -> Self {
        Self { elements }
    }

    /// Checks the three defining conditions against `curve_type`.
    pub fn validate(&self, group: &FiniteGroup, curve_type: &CurveType) -> Result<(), CurveError> {
        if self.elements.len() != curve_type.branch_count() {
            return Err(CurveError::InvalidVector(format!(
                "{} elements for {} branch points",
                self.elements.len(),
                curve_type.branch_count()
            )));
        }
        if let Some(bad) = self.elements.iter().find(|x| x.index() >= group.order()) {
            return Err(CurveError::InvalidVector(format!("element {bad} is not in {}", group.name())));
        }
        for (i, (&x, &nu)) in self.elements.iter().zip(curve_type.branch_orders()).enumerate() {
            let ord = group.element_order(x);
            if ord != nu as usize {
                return Err(CurveError::InvalidVector(format!("g{} has order {ord}, expected {nu}", i + 1)));
            }
        }
        if !group.product(self.elements.iter().copied()).is_identity() {
            return Err(CurveError::InvalidVector("product is not the identity".into()));
        }
        if !group.generates(&self.elements) {
            return Err(CurveError::InvalidVector(format!("elements do not generate {}", group.name())));
        }
        Ok(())
    }

    pub fn has_repeats(&self) -> bool {
        let distinct: HashSet<_> = self.elements.iter().collect();
        distinct.len() != self.elements.len()
    }
}

impl fmt::Display for GeneratingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Generating vectors of a genus-zero type, one per simultaneous-conjugacy
/// class, each given by its lexicographically least conjugate and listed in
/// lexicographic order.
pub fn enumerate_generating_vectors(
    group: &FiniteGroup,
    curve_type: &CurveType,
    require_distinct: bool,
) -> Result<Vec<GeneratingVector>, CurveError> {
    if curve_type.quotient_genus() != 0 || curve_type.branch_count() < 3 {
        return Err(CurveError::UnsupportedType(curve_type.clone()));
    }
    let orders = group.element_orders();
    let nus: Vec<usize> = curve_type.branch_orders().iter().map(|&v| v as usize).collect();
    let k = nus.len();
    let with_order =
        |nu: usize| -> Vec<GroupElement> { group.elements().filter(|x| orders[x.index()] == nu).collect() };
    let candidates: Vec<Vec<GroupElement>> = nus.iter().map(|&nu| with_order(nu)).collect();

    let mut seen: HashSet<Vec<GroupElement>> = HashSet::new();
    let mut accepted: Vec<GeneratingVector> = Vec::new();

    for class in group.conjugacy_classes() {
        let rep = GroupElement::new(class.first().expect("classes are nonempty"));
        if orders[rep.index()] != nus[0] {
            continue;
        }
        // Conjugates of a tuple that keep `rep` in front come from its centralizer.
        let centralizer: Vec<GroupElement> =
            group.elements().filter(|&h| group.mul(h, rep) == group.mul(rep, h)).collect();

        let mut tuple = vec![rep];
        let mut visit = |tuple: &[GroupElement]| {
            let last = group.inv(group.product(tuple.iter().copied()));
            if orders[last.index()] != nus[k - 1] {
                return;
            }
            let mut full = tuple.to_vec();
            full.push(last);
            let canonical = centralizer
                .iter()
                .map(|&h| full.iter().map(|&x| group.conjugate(x, h)).collect::<Vec<_>>())
                .min()
                .expect("centralizer contains the identity");
            if !seen.insert(canonical.clone()) {
                return;
            }
            let vector = GeneratingVector::new(canonical);
            if require_distinct && vector.has_repeats() {
                return;
            }
            if group.generates(&vector.elements) {
                accepted.push(vector);
            }
        };
        fill_slots(&candidates, 1, k - 1, &mut tuple, &mut visit);
    }
    accepted.sort();
    Ok(accepted)
}

/// Fills positions `pos..end` of `tuple` from `candidates` and calls `visit`
/// on every completed prefix of length `end`.
fn fill_slots(
    candidates: &[Vec<GroupElement>],
    pos: usize,
    end: usize,
    tuple: &mut Vec<GroupElement>,
    visit: &mut impl FnMut(&[GroupElement]),
) {
    if pos == end {
        visit(tuple);
        return;
    }
    for &x in &candidates[pos] {
        tuple.push(x);
        fill_slots(candidates, pos + 1, end, tuple, visit);
        tuple.pop();
    }
}

/// Non-identity elements with a fixed point: all conjugates of nontrivial
/// powers of the `gᵢ`.
pub fn fixed_point_elements(group: &FiniteGroup, vector: &GeneratingVector) -> ElementSet {
    let mut fixed = ElementSet::new(group.order());
    for &g in &vector.elements {
        let mut x = g;
        while !x.is_identity() {
            if !fixed.contains(x.index()) {
                fixed.union_with(&group.conjugacy_class(x));
            }
            x = group.mul(x, g);
        }
    }
    fixed
}

/// A genus-zero-quotient action of a group on a curve of genus at least two.
#[derive(Debug, Clone)]
pub struct CurveAction {
    group: Arc<FiniteGroup>,
    curve_type: CurveType,
    vector: GeneratingVector,
    genus: u64,
    fixed_set: ElementSet,
}

impl CurveAction {
    pub fn new(group: Arc<FiniteGroup>, curve_type: CurveType, vector: GeneratingVector) -> Result<Self, CurveError> {
        if curve_type.quotient_genus() != 0 {
            return Err(CurveError::UnsupportedType(curve_type));
        }
        vector.validate(&group, &curve_type)?;
        let genus = riemann_hurwitz_genus(group.order() as u64, 0, curve_type.branch_orders())?;
        if genus < 2 {
            return Err(CurveError::GenusTooSmall(genus));
        }
        let fixed_set = fixed_point_elements(&group, &vector);
        Ok(Self { group, curve_type, vector, genus, fixed_set })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn curve_type(&self) -> &CurveType {
        &self.curve_type
    }

    pub fn vector(&self) -> &GeneratingVector {
        &self.vector
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn fixed_set(&self) -> &ElementSet {
        &self.fixed_set
    }

    pub fn mu_bound(&self) -> u64 {
        mu_upper_bound(self.group.order() as u64, u64::from(self.curve_type.largest_order()))
            .expect("the cyclic subgroup of g_k has order dividing |G|")
    }
}

/// `m / (g − 1)` as an exact fraction.
pub fn genus_ratio(m: u64, genus: u64) -> BigRational {
    BigRational::new(BigInt::from(m), BigInt::from(genus) - BigInt::one())
}
