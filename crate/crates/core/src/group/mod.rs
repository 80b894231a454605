//! Small finite groups stored as dense multiplication tables.
//!
//! Every group keeps its identity at index 0. Elements are plain indices into
//! the table, so multiplication, inversion and conjugation are table lookups.
//! Groups built from generating permutations also remember the permutation of
//! each element, which is how matrix groups are handed to the rest of the
//! crate.

mod builtin;
mod catalog;

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitset::ElementSet;

pub use builtin::{builtin, matrix_permutation, BuiltinSpec, DEFAULT_CATALOG};
pub use catalog::parse_catalog;

/// Closure size at which `from_permutations` gives up unless told otherwise.
pub const DEFAULT_ORDER_CAP: usize = 5000;

/// Largest order for which associativity is checked on every triple.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 600;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(NotAGroup),
    #[error("closure exceeded the order cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unsupported group spec `{0}`")]
    UnsupportedSpec(String),
    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },
}

/// The first defect found while validating a multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotAGroup {
    Empty,
    NotSquare { row: usize },
    EntryOutOfRange { row: usize, col: usize, value: usize },
    NoIdentity,
    MissingInverse { element: usize },
    NonAssociative { x: usize, y: usize, z: usize },
}

impl fmt::Display for NotAGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotAGroup::Empty => write!(f, "empty table"),
            NotAGroup::NotSquare { row } => write!(f, "row {row} has the wrong length"),
            NotAGroup::EntryOutOfRange { row, col, value } => {
                write!(f, "entry ({row},{col}) = {value} is out of range")
            }
            NotAGroup::NoIdentity => write!(f, "no two-sided identity"),
            NotAGroup::MissingInverse { element } => write!(f, "element {element} has no inverse"),
            NotAGroup::NonAssociative { x, y, z } => {
                write!(f, "({x}*{y})*{z} != {x}*({y}*{z})")
            }
        }
    }
}

impl From<NotAGroup> for GroupError {
    fn from(e: NotAGroup) -> Self {
        GroupError::NotAGroup(e)
    }
}

/// Index of an element inside its owning [`FiniteGroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(u32);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub fn new(index: usize) -> Self {
        GroupElement(u32::try_from(index).expect("element index overflows u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A faithful permutation representation: `images[x]` is the permutation of
/// `0..degree` attached to element `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermRepresentation {
    pub degree: usize,
    pub images: Vec<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    perms: Option<PermRepresentation>,
}

impl FiniteGroup {
    /// Validates `table` as a group law on `0..n` and relabels the identity
    /// to index 0 if it sits elsewhere.
    pub fn from_multiplication_table(name: impl Into<String>, table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(NotAGroup::Empty.into());
        }
        let mut mul = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(NotAGroup::NotSquare { row }.into());
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(NotAGroup::EntryOutOfRange { row, col, value }.into());
                }
                mul.push(value as u32);
            }
        }
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        let identity = (0..n).find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x)).ok_or(NotAGroup::NoIdentity)?;
        if identity != 0 {
            mul = relabel_swap(&mul, n, 0, identity);
        }
        Self::from_flat_table(name.into(), n, mul, None)
    }

    fn from_flat_table(
        name: String,
        n: usize,
        mul: Vec<u32>,
        perms: Option<PermRepresentation>,
    ) -> Result<Self, GroupError> {
        debug_assert_eq!(mul.len(), n * n);
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            let row = &mul[x * n..(x + 1) * n];
            match row.iter().position(|&v| v == 0) {
                Some(y) if mul[y * n + x] == 0 => inv[x] = y as u32,
                _ => return Err(NotAGroup::MissingInverse { element: x }.into()),
            }
        }
        let group = FiniteGroup { name, order: n, mul, inv, perms };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<(), NotAGroup> {
        let n = self.order;
        let check = |x: usize, y: usize, z: usize| {
            let lhs = self.mul_idx(self.mul_idx(x, y), z);
            let rhs = self.mul_idx(x, self.mul_idx(y, z));
            if lhs == rhs {
                Ok(())
            } else {
                Err(NotAGroup::NonAssociative { x, y, z })
            }
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        check(x, y, z)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..10 * n {
                check(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Closes `generators` (images of `0..degree`, 0-based) under composition.
    ///
    /// Products compose like functions: `(x * y)(i) = x(y(i))`, so a matrix
    /// group acting on column vectors maps homomorphically onto its
    /// permutation images.
    pub fn from_permutations(
        name: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
        order_cap: usize,
    ) -> Result<Self, GroupError> {
        let mut gens: Vec<Vec<u32>> = Vec::with_capacity(generators.len());
        for (k, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::InvalidPermutation(format!(
                    "generator {k} has {} images, expected {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &img in g {
                if img >= degree || std::mem::replace(&mut seen[img], true) {
                    return Err(GroupError::InvalidPermutation(format!(
                        "generator {k} is not a bijection of {degree} points"
                    )));
                }
            }
            gens.push(g.iter().map(|&i| i as u32).collect());
        }

        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut images = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(identity, 0)]);
        // right[x * k + j] = x * gens[j]
        let mut right: Vec<u32> = Vec::new();
        // BFS tree: element b = parent[b] * gens[via[b]]
        let mut parent = vec![0u32];
        let mut via = vec![0u32];
        let mut head = 0;
        while head < images.len() {
            for (j, g) in gens.iter().enumerate() {
                let x = &images[head];
                let product: Vec<u32> = g.iter().map(|&i| x[i as usize]).collect();
                let next = index.len() as u32;
                let idx = *index.entry(product.clone()).or_insert(next);
                if idx == next {
                    if images.len() >= order_cap {
                        return Err(GroupError::OrderCapExceeded { cap: order_cap });
                    }
                    images.push(product);
                    parent.push(head as u32);
                    via.push(j as u32);
                }
                right.push(idx);
            }
            head += 1;
        }

        let n = images.len();
        let k = gens.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            mul[a * n] = a as u32;
            for b in 1..n {
                let partial = mul[a * n + parent[b] as usize] as usize;
                mul[a * n + b] = right[partial * k + via[b] as usize];
            }
        }
        let perms = PermRepresentation { degree, images };
        Self::from_flat_table(name.into(), n, mul, Some(perms))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order).map(GroupElement::new)
    }

    pub fn element(&self, index: usize) -> Option<GroupElement> {
        (index < self.order).then(|| GroupElement::new(index))
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub(crate) fn inv_idx(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(self.mul[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn inv(&self, a: GroupElement) -> GroupElement {
        GroupElement(self.inv[a.index()])
    }

    /// Product of the elements in order, left to right.
    pub fn product<I: IntoIterator<Item = GroupElement>>(&self, xs: I) -> GroupElement {
        xs.into_iter().fold(self.identity(), |acc, x| self.mul(acc, x))
    }

    pub fn pow(&self, a: GroupElement, exp: usize) -> GroupElement {
        (0..exp).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conjugate(&self, x: GroupElement, by: GroupElement) -> GroupElement {
        self.mul(self.mul(by, x), self.inv(by))
    }

    pub fn element_order(&self, x: GroupElement) -> usize {
        let mut power = x;
        let mut t = 1;
        while !power.is_identity() {
            power = self.mul(power, x);
            t += 1;
        }
        t
    }

    /// Element orders indexed by element.
    pub fn element_orders(&self) -> Vec<usize> {
        self.elements().map(|x| self.element_order(x)).collect()
    }

    pub fn conjugacy_class(&self, x: GroupElement) -> ElementSet {
        let mut class = ElementSet::new(self.order);
        for g in self.elements() {
            class.insert(self.conjugate(x, g).index());
        }
        class
    }

    /// All conjugacy classes, each listed once, ordered by their least element.
    pub fn conjugacy_classes(&self) -> Vec<ElementSet> {
        let mut seen = ElementSet::new(self.order);
        let mut classes = Vec::new();
        for x in self.elements() {
            if seen.contains(x.index()) {
                continue;
            }
            let class = self.conjugacy_class(x);
            seen.union_with(&class);
            classes.push(class);
        }
        classes
    }

    pub fn is_central(&self, x: GroupElement) -> bool {
        self.elements().all(|g| self.mul(g, x) == self.mul(x, g))
    }

    /// The subgroup generated by `xs`; `{identity}` when `xs` is empty.
    pub fn subgroup_generated(&self, xs: &[GroupElement]) -> ElementSet {
        let mut members = ElementSet::new(self.order);
        members.insert(0);
        let mut frontier = vec![self.identity()];
        while let Some(y) = frontier.pop() {
            for &x in xs {
                let z = self.mul(y, x);
                if members.insert(z.index()) {
                    frontier.push(z);
                }
            }
        }
        assert_eq!(
            self.order % members.len(),
            0,
            "subgroup of size {} does not divide |G| = {}",
            members.len(),
            self.order
        );
        members
    }

    pub fn generates(&self, xs: &[GroupElement]) -> bool {
        self.subgroup_generated(xs).len() == self.order
    }

    pub fn permutation_representation(&self) -> Option<&PermRepresentation> {
        self.perms.as_ref()
    }

    /// Looks up the element whose permutation image is `perm` (0-based).
    pub fn element_of_permutation(&self, perm: &[u32]) -> Option<GroupElement> {
        let rep = self.perms.as_ref()?;
        rep.images.iter().position(|p| p.as_slice() == perm).map(GroupElement::new)
    }

    /// The table in row-major nested form, mostly for bindings and tests.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul_idx(a, b)).collect()).collect()
    }

    /// Direct product `self × other`, with `(a, b)` stored at `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup, name: impl Into<String>) -> Result<Self, GroupError> {
        let (n1, n2) = (self.order, other.order);
        let n = n1 * n2;
        let mut mul = vec![0u32; n * n];
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                let a = a1 * n2 + a2;
                for b1 in 0..n1 {
                    let c1 = self.mul_idx(a1, b1) * n2;
                    for b2 in 0..n2 {
                        mul[a * n + b1 * n2 + b2] = (c1 + other.mul_idx(a2, b2)) as u32;
                    }
                }
            }
        }
        let perms = match (&self.perms, &other.perms) {
            (Some(p), Some(q)) => {
                let degree = p.degree + q.degree;
                let mut images = Vec::with_capacity(n);
                for x in &p.images {
                    for y in &q.images {
                        let mut img = x.clone();
                        img.extend(y.iter().map(|&i| i + p.degree as u32));
                        images.push(img);
                    }
                }
                Some(PermRepresentation { degree, images })
            }
            _ => None,
        };
        Self::from_flat_table(name.into(), n, mul, perms)
    }
}

/// Relabels a flat table by exchanging the labels `a` and `b`.
fn relabel_swap(mul: &[u32], n: usize, a: usize, b: usize) -> Vec<u32> {
    let swap = |x: usize| {
        if x == a {
            b
        } else if x == b {
            a
        } else {
            x
        }
    };
    let mut out = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            out[x * n + y] = swap(mul[swap(x) * n + swap(y)] as usize) as u32;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    /// S3 by brute-force composition of all six permutations of three points.
    fn s3_table() -> Vec<Vec<usize>> {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let find = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        perms.iter().map(|x| perms.iter().map(|y| find([x[y[0]], x[y[1]], x[y[2]]])).collect()).collect()
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_multiplication_table("1", &[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.element_order(g.identity()), 1);
    }

    #[test]
    fn cyclic_three_orders() {
        let g = FiniteGroup::from_multiplication_table("C3", &cyclic_table(3)).unwrap();
        assert_eq!(g.element_orders(), vec![1, 3, 3]);
    }

    #[test]
    fn identity_is_relabelled_to_zero() {
        // Z/3 with labels shifted so that 2 is the identity.
        let table: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b + 1) % 3).collect()).collect();
        let g = FiniteGroup::from_multiplication_table("C3'", &table).unwrap();
        for x in g.elements() {
            assert_eq!(g.mul(g.identity(), x), x);
            assert_eq!(g.mul(x, g.identity()), x);
        }
        assert_eq!(g.element_orders().iter().filter(|&&o| o == 3).count(), 2);
    }

    #[test]
    fn mutated_s3_is_rejected() {
        let mut table = s3_table();
        assert!(FiniteGroup::from_multiplication_table("S3", &table).is_ok());
        // Swap two non-identity products in row 1; identity and inverses
        // survive, so the only possible defect is associativity.
        let cols: Vec<usize> = (1..6).filter(|&c| table[1][c] != 0).take(2).collect();
        table[1].swap(cols[0], cols[1]);
        let err = FiniteGroup::from_multiplication_table("bad", &table).unwrap_err();
        let GroupError::NotAGroup(NotAGroup::NonAssociative { x, y, z }) = err else {
            panic!("expected associativity failure, got {err:?}");
        };
        let m = |a: usize, b: usize| table[a][b];
        assert_ne!(m(m(x, y), z), m(x, m(y, z)));
    }

    #[test]
    fn single_associativity_violation_reports_triple() {
        // Latin square of order 5 that is a loop but not a group: identity 0,
        // every element has an inverse, associativity fails.
        let table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_multiplication_table("loop", &table).unwrap_err();
        let GroupError::NotAGroup(NotAGroup::NonAssociative { x, y, z }) = err else {
            panic!("expected associativity failure, got {err:?}");
        };
        let m = |a: usize, b: usize| table[a][b];
        assert_ne!(m(m(x, y), z), m(x, m(y, z)));
    }

    #[test]
    fn table_errors() {
        assert_eq!(
            FiniteGroup::from_multiplication_table("e", &[]).unwrap_err(),
            GroupError::NotAGroup(NotAGroup::Empty)
        );
        assert!(matches!(
            FiniteGroup::from_multiplication_table("r", &[vec![0, 1], vec![1]]),
            Err(GroupError::NotAGroup(NotAGroup::NotSquare { row: 1 }))
        ));
        assert!(matches!(
            FiniteGroup::from_multiplication_table("o", &[vec![0, 2], vec![1, 0]]),
            Err(GroupError::NotAGroup(NotAGroup::EntryOutOfRange { row: 0, col: 1, value: 2 }))
        ));
        assert!(matches!(
            FiniteGroup::from_multiplication_table("z", &[vec![0, 0], vec![0, 0]]),
            Err(GroupError::NotAGroup(NotAGroup::NoIdentity))
        ));
    }

    #[test]
    fn permutation_closure_s3() {
        let g = FiniteGroup::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_ORDER_CAP).unwrap();
        let mut orders = g.element_orders();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
        // the same table as brute-force composition, up to relabelling
        let reference = FiniteGroup::from_multiplication_table("S3", &s3_table()).unwrap();
        let mut ref_orders = reference.element_orders();
        ref_orders.sort();
        assert_eq!(orders, ref_orders);
    }

    #[test]
    fn permutation_images_form_homomorphism() {
        let g =
            FiniteGroup::from_permutations("S4", 4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], DEFAULT_ORDER_CAP).unwrap();
        let rep = g.permutation_representation().unwrap();
        for a in g.elements() {
            for b in g.elements() {
                let (pa, pb) = (&rep.images[a.index()], &rep.images[b.index()]);
                let composed: Vec<u32> = pb.iter().map(|&i| pa[i as usize]).collect();
                assert_eq!(rep.images[g.mul(a, b).index()], composed);
            }
        }
        let distinct: std::collections::HashSet<_> = rep.images.iter().collect();
        assert_eq!(distinct.len(), g.order());
    }

    #[test]
    fn identity_generator_gives_trivial_group() {
        let g = FiniteGroup::from_permutations("1", 3, &[vec![0, 1, 2]], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 1);
        let g = FiniteGroup::from_permutations("1", 3, &[], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn permutation_errors() {
        assert!(matches!(
            FiniteGroup::from_permutations("x", 3, &[vec![0, 0, 1]], DEFAULT_ORDER_CAP),
            Err(GroupError::InvalidPermutation(_))
        ));
        assert!(matches!(
            FiniteGroup::from_permutations("x", 3, &[vec![0, 1]], DEFAULT_ORDER_CAP),
            Err(GroupError::InvalidPermutation(_))
        ));
        assert_eq!(
            FiniteGroup::from_permutations("S5", 5, &[vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]], 100).unwrap_err(),
            GroupError::OrderCapExceeded { cap: 100 }
        );
    }

    #[test]
    fn conjugacy_in_s3() {
        let g = FiniteGroup::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_ORDER_CAP).unwrap();
        let transposition = g.element_of_permutation(&[1, 0, 2]).unwrap();
        assert_eq!(g.conjugacy_class(transposition).len(), 3);
        assert_eq!(g.conjugacy_class(g.identity()).to_vec(), vec![0]);
        let sizes: Vec<usize> = g.conjugacy_classes().iter().map(ElementSet::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 6);
        assert_eq!(sizes.len(), 3);
    }

    #[test]
    fn generated_subgroups() {
        let g = FiniteGroup::from_multiplication_table("C6", &cyclic_table(6)).unwrap();
        assert_eq!(g.subgroup_generated(&[]).to_vec(), vec![0]);
        for x in g.elements() {
            assert_eq!(g.subgroup_generated(&[x]).len(), g.element_order(x));
        }
        assert!(g.generates(&[GroupElement::new(1)]));
        assert!(!g.generates(&[GroupElement::new(2), GroupElement::new(4)]));
        assert!(g.generates(&[GroupElement::new(2), GroupElement::new(3)]));
    }

    #[test]
    fn direct_product_orders() {
        let c2 = FiniteGroup::from_multiplication_table("C2", &cyclic_table(2)).unwrap();
        let c3 = FiniteGroup::from_multiplication_table("C3", &cyclic_table(3)).unwrap();
        let c6 = c2.direct_product(&c3, "C2xC3").unwrap();
        let mut orders = c6.element_orders();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 3, 3, 6, 6]);
    }
}
