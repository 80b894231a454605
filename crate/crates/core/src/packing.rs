//! Maximum packings of graphs of automorphisms.
//!
//! Two automorphisms `x ≠ y` have disjoint graphs exactly when `x⁻¹y` has no
//! fixed point, so a packing is a clique in the compatibility graph
//! `x ~ y ⇔ x⁻¹y ∉ F`. The graph is invariant under left translation, which
//! lets the solver restrict to cliques through the identity.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use thiserror::Error;

use crate::bitset::ElementSet;
use crate::curve::genus_ratio;
use crate::group::{FiniteGroup, GroupElement};

/// Largest group the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 64;

/// Largest group for which maximum packings are counted.
pub const COUNTING_LIMIT: usize = 120;

pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("graphs_disjoint needs two distinct elements, got {0} twice")]
    SameElement(GroupElement),
    #[error("group of order {order} exceeds the limit of {limit}")]
    GroupTooLarge { order: usize, limit: usize },
    #[error("fixed-point set is not closed under inversion ({0} without its inverse)")]
    NotInverseClosed(usize),
    #[error("fixed-point set contains the identity")]
    ContainsIdentity,
    #[error("fixed-point set has capacity {found}, group has order {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("packing ratio needs genus at least 2, got {0}")]
    GenusTooSmall(u64),
}

fn check_fixed_set(group: &FiniteGroup, fixed: &ElementSet) -> Result<(), PackingError> {
    if fixed.capacity() != group.order() {
        return Err(PackingError::SizeMismatch { expected: group.order(), found: fixed.capacity() });
    }
    if fixed.contains(0) {
        return Err(PackingError::ContainsIdentity);
    }
    if let Some(x) = fixed.iter().find(|&x| !fixed.contains(group.inv_idx(x))) {
        return Err(PackingError::NotInverseClosed(x));
    }
    Ok(())
}

/// `x ~ y ⇔ x ≠ y ∧ x⁻¹y ∉ F`, stored as one bit set per vertex.
#[derive(Debug, Clone)]
pub struct CompatibilityGraph {
    adjacency: Vec<ElementSet>,
}

impl CompatibilityGraph {
    pub fn new(group: &FiniteGroup, fixed: &ElementSet) -> Result<Self, PackingError> {
        check_fixed_set(group, fixed)?;
        let n = group.order();
        let adjacency = (0..n)
            .map(|x| {
                let x_inv = group.inv_idx(x);
                let mut row = ElementSet::new(n);
                for y in (0..n).filter(|&y| y != x) {
                    if !fixed.contains(group.mul_idx(x_inv, y)) {
                        row.insert(y);
                    }
                }
                row
            })
            .collect();
        Ok(Self { adjacency })
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].contains(y)
    }

    pub fn neighbors(&self, x: usize) -> &ElementSet {
        &self.adjacency[x]
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| vertices[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }
}

/// True iff the graphs of `x` and `y` do not meet, i.e. `x⁻¹y ∉ F`.
pub fn graphs_disjoint(
    group: &FiniteGroup,
    fixed: &ElementSet,
    x: GroupElement,
    y: GroupElement,
) -> Result<bool, PackingError> {
    if x == y {
        return Err(PackingError::SameElement(x));
    }
    Ok(!fixed.contains(group.mul(group.inv(x), y).index()))
}

/// True iff every pair of distinct elements of `set` has disjoint graphs.
pub fn verify_packing(group: &FiniteGroup, fixed: &ElementSet, set: &[GroupElement]) -> bool {
    let mut members: Vec<GroupElement> = set.to_vec();
    members.sort();
    members.dedup();
    members.iter().enumerate().all(|(i, &x)| {
        members[i + 1..].iter().all(|&y| graphs_disjoint(group, fixed, x, y).expect("members are distinct"))
    })
}

#[derive(Debug, Clone)]
pub struct PackingOptions {
    /// `None` searches to completion.
    pub time_budget: Option<Duration>,
    /// A packing size known to be attainable; used only to prune.
    pub seed_lower_bound: Option<usize>,
}

impl Default for PackingOptions {
    fn default() -> Self {
        Self { time_budget: Some(DEFAULT_TIME_BUDGET), seed_lower_bound: None }
    }
}

impl PackingOptions {
    pub fn unbounded() -> Self {
        Self { time_budget: None, seed_lower_bound: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingResult {
    /// Maximum packing size; only a lower bound when `time_bounded`.
    pub m: usize,
    /// Sorted, contains the identity. Lexicographically least among maximum
    /// packings through the identity when `canonical` is set.
    pub witness: Vec<GroupElement>,
    pub nodes_explored: u64,
    pub time_bounded: bool,
    pub canonical: bool,
}

struct Deadline {
    until: Option<Instant>,
    expired: bool,
}

impl Deadline {
    fn new(budget: Option<Duration>) -> Self {
        Self { until: budget.map(|b| Instant::now() + b), expired: false }
    }

    fn check(&mut self, nodes: u64) -> bool {
        if !self.expired && nodes % 1024 == 1 {
            if let Some(until) = self.until {
                self.expired = Instant::now() >= until;
            }
        }
        self.expired
    }
}

/// Branch and bound for a maximum clique, bounded by greedy sequential
/// coloring of the candidate set.
struct CliqueSearch<'g> {
    graph: &'g CompatibilityGraph,
    /// Cliques of this size or smaller are not recorded.
    incumbent: usize,
    best: Vec<usize>,
    /// Stop as soon as a clique of this size is found.
    target: Option<usize>,
    nodes: u64,
    deadline: Deadline,
}

impl<'g> CliqueSearch<'g> {
    fn new(graph: &'g CompatibilityGraph, deadline: Deadline) -> Self {
        Self { graph, incumbent: 0, best: Vec::new(), target: None, nodes: 0, deadline }
    }

    fn done(&self) -> bool {
        self.deadline.expired || self.target.is_some_and(|t| self.best.len() >= t)
    }

    /// Greedy coloring in increasing vertex order. Returns vertices ordered
    /// by color together with the color number of each.
    fn color(&self, candidates: &ElementSet) -> Vec<(usize, usize)> {
        let mut uncolored = candidates.clone();
        let mut ordered = Vec::with_capacity(candidates.len());
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut available = uncolored.clone();
            while let Some(v) = available.first() {
                available.remove(v);
                available.difference_with(self.graph.neighbors(v));
                uncolored.remove(v);
                ordered.push((v, color));
            }
        }
        ordered
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut candidates: ElementSet) {
        self.nodes += 1;
        if self.deadline.check(self.nodes) {
            return;
        }
        let colored = self.color(&candidates);
        for &(v, color) in colored.iter().rev() {
            if current.len() + color <= self.incumbent || self.done() {
                return;
            }
            current.push(v);
            let next = candidates.intersection(self.graph.neighbors(v));
            if next.is_empty() {
                if current.len() > self.incumbent {
                    self.incumbent = current.len();
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            candidates.remove(v);
        }
    }

    fn run(&mut self, candidates: &ElementSet) {
        if candidates.is_empty() {
            return;
        }
        self.expand(&mut Vec::new(), candidates.clone());
    }
}

/// Exact maximum packing by branch and bound over cliques through the
/// identity, followed by a sequential pass that extracts the
/// lexicographically least maximum packing.
pub fn max_packing(
    group: &FiniteGroup,
    fixed: &ElementSet,
    options: &PackingOptions,
) -> Result<PackingResult, PackingError> {
    let graph = CompatibilityGraph::new(group, fixed)?;
    Ok(max_packing_in_graph(&graph, options))
}

pub fn max_packing_in_graph(graph: &CompatibilityGraph, options: &PackingOptions) -> PackingResult {
    let root = graph.neighbors(0).clone();
    let mut search = CliqueSearch::new(graph, Deadline::new(options.time_budget));
    // The seed counts the identity; the search runs inside its neighborhood.
    let seed = options.seed_lower_bound.unwrap_or(0).saturating_sub(1);
    search.incumbent = seed.saturating_sub(1);
    search.run(&root);
    if search.best.len() < seed && !search.deadline.expired {
        // the seed was not attainable after all
        search.incumbent = 0;
        search.run(&root);
    }
    let mut nodes = search.nodes;
    let time_bounded = search.deadline.expired;
    let mut fallback: Vec<usize> = search.best.clone();
    fallback.push(0);
    fallback.sort_unstable();
    let m = fallback.len();

    let mut witness = fallback.clone();
    let mut canonical = false;
    if !time_bounded {
        let mut deadline = search.deadline;
        match canonical_clique(graph, m, &mut deadline, &mut nodes) {
            Some(found) => {
                witness = found;
                canonical = true;
            }
            None => witness = fallback,
        }
    }
    PackingResult {
        m,
        witness: witness.into_iter().map(GroupElement::new).collect(),
        nodes_explored: nodes,
        time_bounded,
        canonical,
    }
}

/// Lexicographically least clique of size `m` containing vertex 0, built by
/// committing to the smallest vertex that still extends to size `m`.
fn canonical_clique(
    graph: &CompatibilityGraph,
    m: usize,
    deadline: &mut Deadline,
    nodes: &mut u64,
) -> Option<Vec<usize>> {
    let mut chosen = vec![0usize];
    let mut candidates = graph.neighbors(0).clone();
    while chosen.len() < m {
        let v = candidates.iter().find(|&v| {
            let mut rest = candidates.intersection(graph.neighbors(v));
            rest.clear_through(v);
            let need = m - chosen.len() - 1;
            if need == 0 {
                return true;
            }
            let mut probe = CliqueSearch::new(graph, Deadline { until: deadline.until, expired: false });
            probe.incumbent = need - 1;
            probe.target = Some(need);
            probe.run(&rest);
            *nodes += probe.nodes;
            deadline.expired |= probe.deadline.expired;
            probe.best.len() >= need
        })?;
        if deadline.expired {
            return None;
        }
        chosen.push(v);
        candidates.intersect_with(graph.neighbors(v));
        candidates.clear_through(v);
    }
    Some(chosen)
}

/// Number of maximum packings (all of them, not only those through the
/// identity). Each packing of size `m` has exactly `m` left translates
/// through the identity, so the total is `|G| · C₀ / m`.
pub fn count_max_packings(group: &FiniteGroup, fixed: &ElementSet) -> Result<u64, PackingError> {
    if group.order() > COUNTING_LIMIT {
        return Err(PackingError::GroupTooLarge { order: group.order(), limit: COUNTING_LIMIT });
    }
    let graph = CompatibilityGraph::new(group, fixed)?;
    let m = max_packing_in_graph(&graph, &PackingOptions::unbounded()).m;

    fn count(graph: &CompatibilityGraph, need: usize, mut candidates: ElementSet) -> u64 {
        if need == 0 {
            return 1;
        }
        let mut total = 0;
        while let Some(v) = candidates.first() {
            if candidates.len() < need {
                break;
            }
            candidates.remove(v);
            total += count(graph, need - 1, candidates.intersection(graph.neighbors(v)));
        }
        total
    }

    let through_identity = count(&graph, m - 1, graph.neighbors(0).clone());
    Ok(group.order() as u64 * through_identity / m as u64)
}

/// Exhaustive maximum packing: extends subsets in lexicographic order and
/// keeps every subset that stays a packing. No translation symmetry and no
/// bounds are used, so it shares nothing with [`max_packing`] beyond the
/// group table.
pub fn brute_force_max_packing(group: &FiniteGroup, fixed: &ElementSet) -> Result<usize, PackingError> {
    let n = group.order();
    if n > BRUTE_FORCE_LIMIT {
        return Err(PackingError::GroupTooLarge { order: n, limit: BRUTE_FORCE_LIMIT });
    }
    check_fixed_set(group, fixed)?;
    let compatible: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| {
                    y != x && !fixed.contains(group.mul(group.inv(GroupElement::new(x)), GroupElement::new(y)).index())
                })
                .fold(0u64, |mask, y| mask | 1 << y)
        })
        .collect();

    fn extend(compatible: &[u64], size: usize, allowed: u64, best: &mut usize) {
        *best = (*best).max(size);
        let mut rest = allowed;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // only larger indices may follow v
            extend(compatible, size + 1, rest & compatible[v], best);
        }
    }

    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    extend(&compatible, 0, all, &mut best);
    Ok(best)
}

/// `m / (g − 1)`.
pub fn packing_ratio(m: u64, genus: u64) -> Result<BigRational, PackingError> {
    if genus < 2 {
        return Err(PackingError::GenusTooSmall(genus));
    }
    Ok(genus_ratio(m, genus))
}
