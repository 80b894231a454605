//! Chern numbers and slopes of coverings of a product of curves.
//!
//! A covering `S → B₁ × B₂` of degree `d` branched over disjoint curves `Dᵢ`
//! is described by an [`AdmissibleConfiguration`]: the Euler numbers of the
//! two bases, and for each branch component its degrees over the two factors
//! plus the ramification data `(r_ij, n_ij)` of the curves lying over it.
//! Everything here is exact rational arithmetic.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("Euler number {0} is not of the form 2 - 2b with b >= 2")]
    BadEuler(i64),
    #[error("covering degree must be positive")]
    ZeroDegree,
    #[error("component {component}: {message}")]
    BadComponent { component: usize, message: String },
    #[error("component {component}: degrees give e(D) = {over_first} over B1 but {over_second} over B2")]
    InconsistentDegrees { component: usize, over_first: i64, over_second: i64 },
    #[error("component {component}: sum of n*r is {sum}, expected the covering degree {degree}")]
    DegreeMismatch { component: usize, sum: u64, degree: u64 },
    #[error("component {0}: ramification indices differ in a Galois configuration")]
    NotGalois(usize),
    #[error("no component with index {0}")]
    NoSuchComponent(usize),
    #[error("slope formula has a zero denominator")]
    ZeroDenominator,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("Riemann-Hurwitz gives non-integral fibre genus (2g-2 = {0})")]
    NonIntegralGenus(u64),
    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn frac(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `8/3`, the largest slope a packing of at most `3(g − 1)` graphs reaches.
pub fn eight_thirds() -> BigRational {
    frac(8, 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct Stratum {
    /// Ramification index along the curves over the component.
    pub r: u64,
    /// Degree of those curves over the component.
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct BranchComponent {
    pub d1: u64,
    pub d2: u64,
    pub strata: Vec<Stratum>,
}

impl BranchComponent {
    /// A graph of an étale map `B₁ → B₂` of degree `d2` with one stratum.
    pub fn graph(d2: u64, r: u64, n: u64) -> Self {
        Self { d1: 1, d2, strata: vec![Stratum { r, n }] }
    }

    /// `βᵢ = Σⱼ n_ij (r_ij − 1)`
    pub fn beta(&self) -> u64 {
        self.strata.iter().map(|s| s.n * (s.r - 1)).sum()
    }
}

/// `e(Dᵢ) = d_{i1} e(B₁) = d_{i2} e(B₂)`, or an error when the two disagree.
pub fn component_euler(component: &BranchComponent, e1: i64, e2: i64, index: usize) -> Result<i64, SlopeError> {
    let over_first = component.d1 as i64 * e1;
    let over_second = component.d2 as i64 * e2;
    if over_first != over_second {
        return Err(SlopeError::InconsistentDegrees { component: index, over_first, over_second });
    }
    Ok(over_first)
}

/// Numerical branch data of a covering of `B₁ × B₂`, validated on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleConfiguration {
    e1: i64,
    e2: i64,
    d: u64,
    components: Vec<BranchComponent>,
    galois: bool,
}

fn check_euler(e: i64) -> Result<(), SlopeError> {
    if e > -2 || e % 2 != 0 {
        return Err(SlopeError::BadEuler(e));
    }
    Ok(())
}

impl AdmissibleConfiguration {
    pub fn new(e1: i64, e2: i64, d: u64, components: Vec<BranchComponent>, galois: bool) -> Result<Self, SlopeError> {
        check_euler(e1)?;
        check_euler(e2)?;
        if d == 0 {
            return Err(SlopeError::ZeroDegree);
        }
        for (i, c) in components.iter().enumerate() {
            let bad = |message: &str| SlopeError::BadComponent { component: i, message: message.to_string() };
            if c.d1 == 0 || c.d2 == 0 {
                return Err(bad("degrees over the bases must be positive"));
            }
            if c.strata.is_empty() {
                return Err(bad("needs at least one stratum"));
            }
            if c.strata.iter().any(|s| s.r < 2 || s.n < 1) {
                return Err(bad("strata need r >= 2 and n >= 1"));
            }
            component_euler(c, e1, e2, i)?;
            let sum: u64 = c.strata.iter().map(|s| s.n * s.r).sum();
            if sum != d {
                return Err(SlopeError::DegreeMismatch { component: i, sum, degree: d });
            }
            if galois && c.strata.iter().any(|s| s.r != c.strata[0].r) {
                return Err(SlopeError::NotGalois(i));
            }
        }
        Ok(Self { e1, e2, d, components, galois })
    }

    /// The simple Galois configuration of `r_list.len()` graphs over a base
    /// of Euler number `e1`, mapping with degree `e1 / e2` to a genus-`g`
    /// curve, ramified to order `rᵢ` along the `i`-th graph. The covering
    /// degree is the least common multiple of the `rᵢ`.
    pub fn simple_galois(e1: i64, genus: u64, r_list: &[u64]) -> Result<Self, SlopeError> {
        let e2 = 2 - 2 * genus as i64;
        check_euler(e2)?;
        if e1 % e2 != 0 {
            return Err(SlopeError::PreconditionViolated(format!("e1 = {e1} is not a multiple of e2 = {e2}")));
        }
        let d2 = (e1 / e2) as u64;
        let d = r_list.iter().fold(1u64, |acc, &r| num_integer::lcm(acc, r.max(1)));
        let components = r_list.iter().map(|&r| BranchComponent::graph(d2, r, d / r.max(1))).collect();
        Self::new(e1, e2, d, components, true)
    }

    pub fn e1(&self) -> i64 {
        self.e1
    }

    pub fn e2(&self) -> i64 {
        self.e2
    }

    pub fn degree(&self) -> u64 {
        self.d
    }

    pub fn components(&self) -> &[BranchComponent] {
        &self.components
    }

    pub fn is_galois(&self) -> bool {
        self.galois
    }

    /// Every component is a graph of an étale map `B₁ → B₂`.
    pub fn is_simple(&self) -> bool {
        self.components.iter().all(|c| c.d1 == 1)
    }

    pub fn is_very_simple(&self) -> bool {
        self.is_simple() && self.e1 == self.e2
    }

    pub fn euler_of_component(&self, index: usize) -> Result<i64, SlopeError> {
        let c = self.components.get(index).ok_or(SlopeError::NoSuchComponent(index))?;
        component_euler(c, self.e1, self.e2, index)
    }

    /// Genus of `B₂`.
    pub fn target_genus(&self) -> u64 {
        ((2 - self.e2) / 2) as u64
    }

    /// Common ramification index of each component (Galois configurations).
    pub fn ramification_indices(&self) -> Option<Vec<u64>> {
        self.galois.then(|| self.components.iter().map(|c| c.strata[0].r).collect())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SlopeError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Document {
            e1: i64,
            e2: i64,
            d: u64,
            #[serde(default)]
            galois: bool,
            #[serde(default)]
            components: Vec<BranchComponent>,
        }
        let doc: Document = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|span| text[..span.start].matches('\n').count() + 1).unwrap_or(1);
            SlopeError::ParseError { line, message: e.message().to_string() }
        })?;
        Self::new(doc.e1, doc.e2, doc.d, doc.components, doc.galois)
    }
}

/// Chern numbers, signature and slope of a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub c2: BigRational,
    pub c1sq: BigRational,
    pub sigma: BigRational,
    pub slope: BigRational,
}

/// `Σᵢⱼ n_ij (r_ij − 1)(r_ij + 1) / r_ij · e(Dᵢ)`
fn ramification_correction(config: &AdmissibleConfiguration) -> BigRational {
    let mut total = BigRational::zero();
    for (i, c) in config.components.iter().enumerate() {
        let e = config.euler_of_component(i).expect("validated");
        for s in &c.strata {
            total += frac(s.n * (s.r - 1) * (s.r + 1), s.r) * int(e);
        }
    }
    total
}

/// `d · e(B₁ × B₂) − Σᵢ βᵢ e(Dᵢ)`
fn euler_number(config: &AdmissibleConfiguration) -> BigRational {
    let mut total = int(config.d) * int(config.e1) * int(config.e2);
    for (i, c) in config.components.iter().enumerate() {
        total -= int(c.beta()) * int(config.euler_of_component(i).expect("validated"));
    }
    total
}

/// `c₂ = d·c₂(B₁×B₂) − Σ βᵢ e(Dᵢ)`, `c₁² = 2c₂ − Σ n(r−1)(r+1)/r · e(Dᵢ)`,
/// `σ = −⅓ Σ n(r−1)(r+1)/r · e(Dᵢ)`.
pub fn invariants(config: &AdmissibleConfiguration) -> Result<SurfaceInvariants, SlopeError> {
    let correction = ramification_correction(config);
    let c2 = euler_number(config);
    let c1sq = int(2) * &c2 - &correction;
    let sigma = -correction / int(3);
    if c2.is_zero() {
        return Err(SlopeError::ZeroDenominator);
    }
    let slope = &c1sq / &c2;
    Ok(SurfaceInvariants { c2, c1sq, sigma, slope })
}

/// The slope formula evaluated directly on the configuration data.
pub fn abstract_slope(config: &AdmissibleConfiguration) -> Result<BigRational, SlopeError> {
    let denominator = euler_number(config);
    if denominator.is_zero() {
        return Err(SlopeError::ZeroDenominator);
    }
    Ok(int(2) + (-ramification_correction(config)) / denominator)
}

/// Slope of a Galois covering from the Euler numbers `e(Dᵢ)` and the
/// ramification index of each component.
pub fn galois_slope(e_list: &[i64], r_list: &[u64], e1: i64, e2: i64) -> Result<BigRational, SlopeError> {
    if e_list.len() != r_list.len() {
        return Err(SlopeError::PreconditionViolated(format!(
            "{} Euler numbers for {} ramification indices",
            e_list.len(),
            r_list.len()
        )));
    }
    let mut numerator = BigRational::zero();
    let mut denominator = int(e1) * int(e2);
    for (&e, &r) in e_list.iter().zip(r_list) {
        numerator -= frac(r * r - 1, r * r) * int(e);
        denominator -= frac(r - 1, r) * int(e);
    }
    if denominator.is_zero() {
        return Err(SlopeError::ZeroDenominator);
    }
    Ok(int(2) + numerator / denominator)
}

/// Slope of a simple Galois configuration of `m = r_list.len()` graphs onto a
/// genus-`g` curve:
/// `2 + (1 − (1/m) Σ 1/rᵢ²) / ((2g − 2)/m + 1 − (1/m) Σ 1/rᵢ)`.
/// An empty list is the étale case with slope 2.
pub fn simple_galois_slope(genus: u64, r_list: &[u64]) -> BigRational {
    if r_list.is_empty() {
        return int(2);
    }
    if let Ok(sums) = SlopeSums::for_indices(genus, r_list) {
        return sums.slope();
    }
    let m = int(r_list.len() as u64);
    let inv_sq: BigRational = r_list.iter().map(|&r| frac(1, r * r)).sum();
    let inv: BigRational = r_list.iter().map(|&r| frac(1, r)).sum();
    let numerator = BigRational::one() - inv_sq / &m;
    let denominator = (int(2 * genus) - int(2u32)) / &m + BigRational::one() - inv / &m;
    int(2) + numerator / denominator
}

/// Running sums for the simple Galois slope in machine integers, for
/// ramification indices dividing a fixed `scale`. With `L = scale`,
///
/// `slope − 2 = (m·L² − Σ (L/rᵢ)²) / (L·((2g − 2 + m)·L − Σ L/rᵢ))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlopeSums {
    genus: u64,
    scale: u128,
    count: u128,
    inv: u128,
    inv_sq: u128,
}

fn overflow() -> SlopeError {
    SlopeError::PreconditionViolated("slope sums overflow machine integers".into())
}

impl SlopeSums {
    pub fn new(genus: u64, scale: u64) -> Result<Self, SlopeError> {
        check_genus(genus)?;
        if scale == 0 {
            return Err(SlopeError::PreconditionViolated("scale must be positive".into()));
        }
        Ok(Self { genus, scale: scale.into(), count: 0, inv: 0, inv_sq: 0 })
    }

    /// Sums for `r_list`, scaled by the least common multiple of its entries.
    pub fn for_indices(genus: u64, r_list: &[u64]) -> Result<Self, SlopeError> {
        check_indices(r_list)?;
        let mut scale = 1u64;
        for &r in r_list {
            scale = (scale / num_integer::gcd(scale, r)).checked_mul(r).ok_or_else(overflow)?;
        }
        let mut sums = Self::new(genus, scale)?;
        for &r in r_list {
            sums.push(r)?;
        }
        Ok(sums)
    }

    pub fn len(&self) -> usize {
        self.count as usize
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn push(&mut self, r: u64) -> Result<(), SlopeError> {
        let r = u128::from(r);
        if r < 2 || !self.scale.is_multiple_of(r) {
            return Err(SlopeError::PreconditionViolated(format!(
                "index {r} does not divide the scale {}",
                self.scale
            )));
        }
        let q = self.scale / r;
        self.inv = self.inv.checked_add(q).ok_or_else(overflow)?;
        self.inv_sq = q.checked_mul(q).and_then(|q2| self.inv_sq.checked_add(q2)).ok_or_else(overflow)?;
        self.count += 1;
        Ok(())
    }

    /// Undoes a previous `push(r)`.
    pub fn pop(&mut self, r: u64) {
        let q = self.scale / u128::from(r);
        self.inv -= q;
        self.inv_sq -= q * q;
        self.count -= 1;
    }

    /// `slope − 2` as an unreduced `(numerator, denominator)`.
    fn excess(&self) -> Option<(u128, u128)> {
        let l2 = self.scale.checked_mul(self.scale)?;
        let numerator = self.count.checked_mul(l2)? - self.inv_sq;
        let g = u128::from(2 * self.genus - 2) + self.count;
        let denominator = self.scale.checked_mul(g.checked_mul(self.scale)? - self.inv)?;
        Some((numerator, denominator))
    }

    fn excess_big(&self) -> (BigInt, BigInt) {
        let l = BigInt::from(self.scale);
        let numerator = BigInt::from(self.count) * &l * &l - BigInt::from(self.inv_sq);
        let g = BigInt::from(2 * self.genus - 2) + BigInt::from(self.count);
        let denominator = &l * (g * &l - BigInt::from(self.inv));
        (numerator, denominator)
    }

    pub fn slope(&self) -> BigRational {
        match self.excess().and_then(|(n, d)| Some((d.checked_mul(2)?.checked_add(n)?, d))) {
            Some((n, d)) => BigRational::new(BigInt::from(n), BigInt::from(d)),
            None => {
                let (n, d) = self.excess_big();
                int(2) + BigRational::new(n, d)
            }
        }
    }

    /// The slope, and `2 + num/den` minus the slope.
    pub fn slope_and_gap(&self, num: u64, den: u64) -> (BigRational, BigRational) {
        let small = self.excess().and_then(|(n, d)| {
            let slope_num = d.checked_mul(2)?.checked_add(n)?;
            let lhs = i128::try_from(d.checked_mul(num.into())?).ok()?;
            let rhs = i128::try_from(n.checked_mul(den.into())?).ok()?;
            let gap_den = d.checked_mul(den.into())?;
            Some((slope_num, d, lhs - rhs, gap_den))
        });
        match small {
            Some((sn, d, gn, gd)) => (
                BigRational::new(BigInt::from(sn), BigInt::from(d)),
                BigRational::new(BigInt::from(gn), BigInt::from(gd)),
            ),
            None => {
                let (n, d) = self.excess_big();
                let excess = BigRational::new(n, d);
                let gap = frac(num, den) - &excess;
                (int(2) + excess, gap)
            }
        }
    }

    /// Compares `slope − 2` with `num / den`.
    pub fn cmp_excess(&self, num: u64, den: u64) -> std::cmp::Ordering {
        if let Some((n, d)) = self.excess() {
            if let (Some(a), Some(b)) = (n.checked_mul(den.into()), d.checked_mul(num.into())) {
                return a.cmp(&b);
            }
        }
        let (n, d) = self.excess_big();
        (n * BigInt::from(den)).cmp(&(d * BigInt::from(num)))
    }

    pub fn cmp_slope(&self, other: &Self) -> std::cmp::Ordering {
        if let (Some((n1, d1)), Some((n2, d2))) = (self.excess(), other.excess()) {
            if let (Some(a), Some(b)) = (n1.checked_mul(d2), n2.checked_mul(d1)) {
                return a.cmp(&b);
            }
        }
        let (n1, d1) = self.excess_big();
        let (n2, d2) = other.excess_big();
        (n1 * d2).cmp(&(n2 * d1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Below,
    Equal,
    Above,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Below => "below",
            Verdict::Equal => "equal",
            Verdict::Above => "above",
        })
    }
}

/// Outcome of comparing a simple Galois slope with `8/3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeBoundCheck {
    pub verdict: Verdict,
    pub slope: BigRational,
    /// `8/3 − slope`
    pub gap: BigRational,
    /// Whether `m = 3(g − 1)` and every index is 3.
    pub extremal: bool,
}

/// Compares the simple Galois slope with `8/3` for `m ≤ 3(g − 1)` graphs.
/// Equality must happen exactly for `m = 3(g − 1)` with all indices 3, and
/// the slope never exceeds `8/3`; a violation of either is reported as an
/// error.
pub fn check_slope_bound(genus: u64, r_list: &[u64]) -> Result<SlopeBoundCheck, SlopeError> {
    check_genus(genus)?;
    let m = r_list.len() as u64;
    if m > 3 * (genus - 1) {
        return Err(SlopeError::PreconditionViolated(format!("m = {m} exceeds 3(g-1) = {}", 3 * (genus - 1))));
    }
    check_indices(r_list)?;
    let (slope, gap) = match SlopeSums::for_indices(genus, r_list) {
        Ok(sums) => sums.slope_and_gap(2, 3),
        Err(_) => {
            let slope = simple_galois_slope(genus, r_list);
            let gap = eight_thirds() - &slope;
            (slope, gap)
        }
    };
    let verdict = match gap.numer().sign() {
        Sign::Plus => Verdict::Below,
        Sign::NoSign => Verdict::Equal,
        Sign::Minus => Verdict::Above,
    };
    let extremal = m == 3 * (genus - 1) && r_list.iter().all(|&r| r == 3);
    if verdict == Verdict::Above || (verdict == Verdict::Equal) != extremal {
        return Err(SlopeError::PreconditionViolated(format!(
            "slope {slope} contradicts the 8/3 bound for g = {genus}, r = {r_list:?}"
        )));
    }
    Ok(SlopeBoundCheck { verdict, gap, slope, extremal })
}

fn check_genus(genus: u64) -> Result<(), SlopeError> {
    if genus < 2 {
        return Err(SlopeError::PreconditionViolated(format!("genus {genus} is below 2")));
    }
    Ok(())
}

fn check_indices(r_list: &[u64]) -> Result<(), SlopeError> {
    if let Some(r) = r_list.iter().find(|&&r| r < 2) {
        return Err(SlopeError::PreconditionViolated(format!("ramification index {r} is below 2")));
    }
    Ok(())
}

/// For `r_list.len() ≤ 4(g − 1)` components: whether removing the last one
/// strictly lowers the slope. Returns an error if it does not.
pub fn drop_last_component_increases(genus: u64, r_list: &[u64]) -> Result<bool, SlopeError> {
    check_genus(genus)?;
    check_indices(r_list)?;
    let Some((_, shorter)) = r_list.split_last() else {
        return Err(SlopeError::PreconditionViolated("need at least one component".into()));
    };
    let total = r_list.len() as u64;
    if total > 4 * (genus - 1) {
        return Err(SlopeError::PreconditionViolated(format!(
            "{total} components exceed 4(g-1) = {}",
            4 * (genus - 1)
        )));
    }
    let increases = match (SlopeSums::for_indices(genus, shorter), SlopeSums::for_indices(genus, r_list)) {
        (Ok(a), Ok(b)) => a.cmp_slope(&b).is_lt(),
        _ => simple_galois_slope(genus, shorter) < simple_galois_slope(genus, r_list),
    };
    if !increases {
        return Err(SlopeError::PreconditionViolated(format!(
            "dropping the last of {r_list:?} does not lower the slope at g = {genus}"
        )));
    }
    Ok(increases)
}

/// Slope of the double cover branched over an even number of the `m`
/// graphs (one graph is left out when `m` is odd).
pub fn betterbound_slope(m: u64, genus: u64) -> BigRational {
    let branched = m - m % 2;
    simple_galois_slope(genus, &vec![2; branched as usize])
}

/// Genus of a degree-`r` cyclic cover of a genus-`base_genus` curve branched
/// at `m` points: `2g − 2 = r(2g_base − 2) + m(r − 1)`.
pub fn cyclic_cover_fiber_genus(r: u64, base_genus: u64, m: u64) -> Result<u64, SlopeError> {
    if r < 2 || base_genus < 2 {
        return Err(SlopeError::PreconditionViolated(format!(
            "need r >= 2 and base genus >= 2, got {r}, {base_genus}"
        )));
    }
    let two_g_minus_two = r * (2 * base_genus - 2) + m * (r - 1);
    if !two_g_minus_two.is_multiple_of(2) {
        return Err(SlopeError::NonIntegralGenus(two_g_minus_two));
    }
    Ok(two_g_minus_two / 2 + 1)
}

/// A simple cyclic cover of degree `r` branched on `m` graphs needs the
/// branch divisor divisible by `r` on a fibre.
pub fn branch_divisibility_ok(r: u64, m: u64) -> bool {
    r >= 2 && m.is_multiple_of(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    fn example(e1: i64) -> AdmissibleConfiguration {
        let d2 = (e1 / -2) as u64;
        AdmissibleConfiguration::new(e1, -2, 3, vec![BranchComponent::graph(d2, 3, 1); 3], true).unwrap()
    }

    #[test]
    fn component_euler_numbers() {
        let c = AdmissibleConfiguration::new(-2, -2, 3, vec![BranchComponent::graph(1, 3, 1)], true).unwrap();
        assert_eq!(c.euler_of_component(0), Ok(-2));
        let two_one = BranchComponent { d1: 2, d2: 1, strata: vec![Stratum { r: 2, n: 1 }] };
        assert_eq!(component_euler(&two_one, -2, -4, 0), Ok(-4));
        let bad = BranchComponent { d1: 2, d2: 3, strata: vec![Stratum { r: 2, n: 1 }] };
        assert_eq!(
            component_euler(&bad, -2, -2, 0),
            Err(SlopeError::InconsistentDegrees { component: 0, over_first: -4, over_second: -6 })
        );
        assert_eq!(c.euler_of_component(1), Err(SlopeError::NoSuchComponent(1)));
    }

    #[test]
    fn validation() {
        assert_eq!(AdmissibleConfiguration::new(-3, -2, 1, vec![], false), Err(SlopeError::BadEuler(-3)));
        assert_eq!(AdmissibleConfiguration::new(0, -2, 1, vec![], false), Err(SlopeError::BadEuler(0)));
        assert_eq!(AdmissibleConfiguration::new(-2, -2, 0, vec![], false), Err(SlopeError::ZeroDegree));
        assert_eq!(
            AdmissibleConfiguration::new(-2, -2, 4, vec![BranchComponent::graph(1, 3, 1)], false),
            Err(SlopeError::DegreeMismatch { component: 0, sum: 3, degree: 4 })
        );
        let mixed = BranchComponent { d1: 1, d2: 1, strata: vec![Stratum { r: 2, n: 2 }, Stratum { r: 3, n: 2 }] };
        assert!(AdmissibleConfiguration::new(-2, -2, 10, vec![mixed.clone()], false).is_ok());
        assert_eq!(AdmissibleConfiguration::new(-2, -2, 10, vec![mixed], true), Err(SlopeError::NotGalois(0)));
        let empty = BranchComponent { d1: 1, d2: 1, strata: vec![] };
        assert!(matches!(
            AdmissibleConfiguration::new(-2, -2, 1, vec![empty], false),
            Err(SlopeError::BadComponent { component: 0, .. })
        ));
    }

    #[test]
    fn flags() {
        let c = example(-2);
        assert!(c.is_simple() && c.is_very_simple() && c.is_galois());
        let c = example(-4);
        assert!(c.is_simple() && !c.is_very_simple());
        assert_eq!(c.target_genus(), 2);
        assert_eq!(c.ramification_indices(), Some(vec![3, 3, 3]));
    }

    #[test]
    fn etale_product() {
        let c = AdmissibleConfiguration::new(-2, -4, 1, vec![], false).unwrap();
        let inv = invariants(&c).unwrap();
        assert_eq!(inv.c2, int(8));
        assert_eq!(inv.c1sq, int(16));
        assert_eq!(inv.sigma, int(0));
        assert_eq!(inv.slope, int(2));
        assert_eq!(abstract_slope(&c).unwrap(), int(2));
    }

    #[test]
    fn example_configuration_has_slope_eight_thirds() {
        for e1 in [-2, -4, -6, -12, -50] {
            let c = example(e1);
            let inv = invariants(&c).unwrap();
            assert_eq!(inv.slope, eight_thirds(), "e1 = {e1}");
            assert_eq!(abstract_slope(&c).unwrap(), eight_thirds());
            assert_eq!(int(3) * &inv.sigma, &inv.c1sq - int(2) * &inv.c2);
        }
        // with e1 = e2 = -2: c2 = 3*4 - 3*2*(-2) = 24, c1sq = 48 - 3*(8/3)*(-2) = 64
        let inv = invariants(&example(-2)).unwrap();
        assert_eq!((inv.c2, inv.c1sq, inv.sigma), (int(24), int(64), q("16/3")));
    }

    /// One component, r = 2, n = 1, d = 2, e1 = e2 = -2, d1 = d2 = 1, expanded
    /// by hand: numerator -(1·1·3/2)(-2) = 3, denominator 2·4 - 1·(-2) = 10.
    #[test]
    fn hand_expanded_double_cover() {
        let c = AdmissibleConfiguration::new(-2, -2, 2, vec![BranchComponent::graph(1, 2, 1)], true).unwrap();
        assert_eq!(abstract_slope(&c).unwrap(), q("23/10"));
        assert_eq!(invariants(&c).unwrap().slope, q("23/10"));
    }

    #[test]
    fn galois_formula() {
        assert_eq!(galois_slope(&[], &[], -2, -2).unwrap(), int(2));
        assert_eq!(galois_slope(&[-2, -2, -2], &[3, 3, 3], -2, -2).unwrap(), eight_thirds());
        assert!(matches!(galois_slope(&[-2], &[], -2, -2), Err(SlopeError::PreconditionViolated(_))));
    }

    #[test]
    fn simple_galois_formula() {
        assert_eq!(simple_galois_slope(2, &[3, 3, 3]), eight_thirds());
        assert_eq!(simple_galois_slope(2, &[2; 8]), int(3));
        for r in 2..20u64 {
            let expected = int(2) + (int(1) - frac(1, r * r)) / (int(3) - frac(1, r));
            assert_eq!(simple_galois_slope(2, &[r]), expected);
        }
        assert_eq!(simple_galois_slope(5, &[]), int(2));
    }

    #[test]
    fn slope_bound_verdicts() {
        let eq = check_slope_bound(2, &[3, 3, 3]).unwrap();
        assert_eq!(eq.verdict, Verdict::Equal);
        assert!(eq.extremal);
        assert_eq!(eq.gap, int(0));
        assert_eq!(check_slope_bound(2, &[3, 3, 4]).unwrap().verdict, Verdict::Below);
        assert_eq!(check_slope_bound(2, &[2, 2, 2]).unwrap().verdict, Verdict::Below);
        assert_eq!(check_slope_bound(2, &[]).unwrap().slope, int(2));
        assert!(matches!(check_slope_bound(2, &[3, 3, 3, 3]), Err(SlopeError::PreconditionViolated(_))));
        assert!(matches!(check_slope_bound(1, &[]), Err(SlopeError::PreconditionViolated(_))));
    }

    #[test]
    fn monotonicity() {
        assert_eq!(drop_last_component_increases(2, &[3, 3, 3]), Ok(true));
        assert_eq!(drop_last_component_increases(3, &[2, 5]), Ok(true));
        assert!(matches!(drop_last_component_increases(2, &[2; 5]), Err(SlopeError::PreconditionViolated(_))));
        assert!(matches!(drop_last_component_increases(2, &[]), Err(SlopeError::PreconditionViolated(_))));
    }

    #[test]
    fn double_cover_bound() {
        assert_eq!(betterbound_slope(8, 2), int(3));
        assert_eq!(betterbound_slope(3, 2), q("5/2"));
        assert_eq!(betterbound_slope(16, 3), int(3));
        assert_eq!(betterbound_slope(9, 2), int(3));
        assert_eq!(betterbound_slope(1, 2), int(2));
    }

    #[test]
    fn fibre_genus() {
        assert_eq!(cyclic_cover_fiber_genus(3, 2, 3), Ok(7));
        assert_eq!(cyclic_cover_fiber_genus(2, 2, 0), Ok(3));
        assert_eq!(cyclic_cover_fiber_genus(3, 2, 4), Ok(8));
        assert_eq!(cyclic_cover_fiber_genus(2, 2, 1), Err(SlopeError::NonIntegralGenus(5)));
    }

    #[test]
    fn divisibility() {
        assert!(branch_divisibility_ok(3, 3));
        assert!(!branch_divisibility_ok(3, 4));
        assert!(branch_divisibility_ok(2, 8));
    }

    #[test]
    fn simple_galois_constructor_matches_formula() {
        let c = AdmissibleConfiguration::simple_galois(-4, 2, &[2, 3, 5]).unwrap();
        assert_eq!(c.degree(), 30);
        assert_eq!(abstract_slope(&c).unwrap(), simple_galois_slope(2, &[2, 3, 5]));
    }

    #[test]
    fn toml_documents() {
        let text =
            "e1 = -2\ne2 = -2\nd = 3\ngalois = true\n\n[[components]]\nd1 = 1\nd2 = 1\nstrata = [{ r = 3, n = 1 }]\n";
        let c = AdmissibleConfiguration::from_toml_str(text).unwrap();
        assert_eq!(c.components().len(), 1);
        let err = AdmissibleConfiguration::from_toml_str("e1 = -2\ne2 = -2\nd = oops\n").unwrap_err();
        assert!(matches!(err, SlopeError::ParseError { line: 3, .. }), "{err:?}");
        let err = AdmissibleConfiguration::from_toml_str("e1 = -2\ne2 = -2\n").unwrap_err();
        assert!(matches!(err, SlopeError::ParseError { .. }));
        let err = AdmissibleConfiguration::from_toml_str("e1 = -2\ne2 = -2\nd = 1\nfoo = 1\n").unwrap_err();
        assert!(matches!(err, SlopeError::ParseError { line: 4, .. }), "{err:?}");
    }

    fn direct_slope(genus: u64, r_list: &[u64]) -> BigRational {
        let m = int(r_list.len() as u64);
        let inv_sq: BigRational = r_list.iter().map(|&r| frac(1, r * r)).sum();
        let inv: BigRational = r_list.iter().map(|&r| frac(1, r)).sum();
        int(2) + (&m - inv_sq) / (int(2 * genus - 2) + &m - inv)
    }

    #[test]
    fn sums_agree_with_direct_formula() {
        for (g, r) in [(2, vec![3, 3, 3]), (3, vec![2, 5, 7, 12]), (7, vec![11; 9]), (2, vec![2])] {
            assert_eq!(simple_galois_slope(g, &r), direct_slope(g, &r), "{g} {r:?}");
        }
        let big = [1_000_003, 1_000_033, 1_000_037, 1_000_039, 999_983];
        assert!(SlopeSums::for_indices(4, &big).is_err());
        assert_eq!(simple_galois_slope(4, &big), direct_slope(4, &big));
    }

    #[test]
    fn sums_push_pop_and_compare() {
        let mut s = SlopeSums::new(2, 27720).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.slope(), int(2));
        for _ in 0..3 {
            s.push(3).unwrap();
        }
        assert_eq!(s.slope(), eight_thirds());
        assert_eq!(s.cmp_excess(2, 3), std::cmp::Ordering::Equal);
        let before = s;
        s.push(7).unwrap();
        assert!(s.cmp_slope(&before).is_gt());
        s.pop(7);
        assert_eq!(s, before);
        assert!(s.push(13).is_err());
        assert!(s.push(1).is_err());
        assert!(SlopeSums::new(1, 6).is_err());
    }
}
