use std::fmt;
use std::str::FromStr;

use super::{FiniteGroup, GroupError, DEFAULT_ORDER_CAP};

/// Built-in group constructors, written as e.g. `sl2(3)` or
/// `product(cyclic(2),alternating(4))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BuiltinSpec {
    Trivial,
    Cyclic(usize),
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    Abelian(Vec<usize>),
    Symmetric(usize),
    Alternating(usize),
    Sl2(usize),
    Psl2(usize),
    Product(Box<BuiltinSpec>, Box<BuiltinSpec>),
}

/// Groups searched when no catalog file is given, in addition to anything the
/// caller passes explicitly.
pub const DEFAULT_CATALOG: &[&str] = &[
    "trivial",
    "cyclic(2)",
    "cyclic(3)",
    "cyclic(4)",
    "cyclic(5)",
    "cyclic(6)",
    "cyclic(7)",
    "cyclic(8)",
    "cyclic(9)",
    "cyclic(10)",
    "cyclic(12)",
    "cyclic(14)",
    "cyclic(15)",
    "cyclic(16)",
    "cyclic(18)",
    "cyclic(20)",
    "cyclic(24)",
    "abelian(2,2)",
    "abelian(2,4)",
    "abelian(2,2,2)",
    "abelian(3,3)",
    "abelian(2,6)",
    "abelian(2,2,4)",
    "abelian(2,10)",
    "abelian(2,12)",
    "abelian(2,2,6)",
    "dihedral(3)",
    "dihedral(4)",
    "dihedral(5)",
    "dihedral(6)",
    "dihedral(7)",
    "dihedral(8)",
    "dihedral(9)",
    "dihedral(10)",
    "dihedral(12)",
    "symmetric(3)",
    "symmetric(4)",
    "symmetric(5)",
    "alternating(4)",
    "alternating(5)",
    "sl2(3)",
    "sl2(5)",
    "psl2(7)",
    "product(cyclic(2),alternating(4))",
    "product(cyclic(3),symmetric(3))",
    "product(cyclic(2),sl2(3))",
    "product(cyclic(2),symmetric(4))",
    "product(cyclic(2),dihedral(4))",
    "product(symmetric(3),symmetric(3))",
];

const SMALL_PRIMES: [usize; 6] = [2, 3, 5, 7, 11, 13];

impl BuiltinSpec {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        let name = self.to_string();
        let unsupported = || GroupError::UnsupportedSpec(name.clone());
        match self {
            BuiltinSpec::Trivial => FiniteGroup::from_multiplication_table(name, &[vec![0]]),
            BuiltinSpec::Cyclic(n) => {
                if *n == 0 {
                    return Err(unsupported());
                }
                FiniteGroup::from_permutations(name, *n, &[cycle(*n)], DEFAULT_ORDER_CAP)
            }
            BuiltinSpec::Dihedral(n) => {
                if *n == 0 {
                    return Err(unsupported());
                }
                FiniteGroup::from_multiplication_table(name, &dihedral_table(*n))
            }
            BuiltinSpec::Abelian(factors) => {
                if factors.is_empty() || factors.contains(&0) {
                    return Err(unsupported());
                }
                let mut group = BuiltinSpec::Cyclic(factors[0]).build()?;
                for &f in &factors[1..] {
                    group = group.direct_product(&BuiltinSpec::Cyclic(f).build()?, name.clone())?;
                }
                Ok(group.with_name(name))
            }
            BuiltinSpec::Symmetric(n) => {
                if !(1..=6).contains(n) {
                    return Err(unsupported());
                }
                let gens = if *n < 2 { vec![] } else { vec![transposition(*n, 0, 1), cycle(*n)] };
                FiniteGroup::from_permutations(name, *n, &gens, DEFAULT_ORDER_CAP)
            }
            BuiltinSpec::Alternating(n) => {
                if !(1..=7).contains(n) {
                    return Err(unsupported());
                }
                let gens: Vec<Vec<usize>> = (2..*n)
                    .map(|i| {
                        let mut p: Vec<usize> = (0..*n).collect();
                        p[0] = 1;
                        p[1] = i;
                        p[i] = 0;
                        p
                    })
                    .collect();
                FiniteGroup::from_permutations(name, *n, &gens, DEFAULT_ORDER_CAP)
            }
            BuiltinSpec::Sl2(p) => {
                if !SMALL_PRIMES.contains(p) {
                    return Err(unsupported());
                }
                let gens = [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]
                    .iter()
                    .map(|m| to_usize(matrix_permutation(*p, *m)))
                    .collect::<Vec<_>>();
                FiniteGroup::from_permutations(name, p * p - 1, &gens, DEFAULT_ORDER_CAP)
            }
            BuiltinSpec::Psl2(p) => {
                if !SMALL_PRIMES.contains(p) {
                    return Err(unsupported());
                }
                let gens = [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]
                    .iter()
                    .map(|m| projective_permutation(*p, *m))
                    .collect::<Vec<_>>();
                FiniteGroup::from_permutations(name, p + 1, &gens, DEFAULT_ORDER_CAP)
            }
            BuiltinSpec::Product(a, b) => a.build()?.direct_product(&b.build()?, name),
        }
    }
}

/// Parses and builds a builtin group spec.
pub fn builtin(spec: &str) -> Result<FiniteGroup, GroupError> {
    spec.parse::<BuiltinSpec>()?.build()
}

fn cycle(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn transposition(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

fn to_usize(p: Vec<u32>) -> Vec<usize> {
    p.into_iter().map(|i| i as usize).collect()
}

/// `r^i s^j` is stored at `i + n * j`, with `s r s = r⁻¹`.
fn dihedral_table(n: usize) -> Vec<Vec<usize>> {
    let elems: Vec<(usize, usize)> = (0..2).flat_map(|j| (0..n).map(move |i| (i, j))).collect();
    elems
        .iter()
        .map(|&(i, a)| {
            elems
                .iter()
                .map(|&(k, b)| {
                    let rot = if a == 0 { (i + k) % n } else { (i + n - k) % n };
                    rot + n * ((a + b) % 2)
                })
                .collect()
        })
        .collect()
}

/// Index of the nonzero column vector `(x, y)` over `Z/p`.
fn vector_index(p: usize, x: usize, y: usize) -> usize {
    x * p + y - 1
}

/// The permutation of the `p² − 1` nonzero column vectors of `(Z/p)²` induced
/// by left multiplication with `m` (rows given first). This is the labelling
/// `sl2(p)` uses for its permutation images.
pub fn matrix_permutation(p: usize, m: [[usize; 2]; 2]) -> Vec<u32> {
    let mut perm = vec![0u32; p * p - 1];
    for x in 0..p {
        for y in 0..p {
            if x == 0 && y == 0 {
                continue;
            }
            let nx = (m[0][0] * x + m[0][1] * y) % p;
            let ny = (m[1][0] * x + m[1][1] * y) % p;
            perm[vector_index(p, x, y)] = vector_index(p, nx, ny) as u32;
        }
    }
    perm
}

/// Action on the projective line: `[1:y]` is point `y`, `[0:1]` is point `p`.
fn projective_permutation(p: usize, m: [[usize; 2]; 2]) -> Vec<usize> {
    let normalize = |x: usize, y: usize| -> usize {
        if x == 0 {
            p
        } else {
            let x_inv = (1..p).find(|&t| t * x % p == 1).expect("p is prime");
            y * x_inv % p
        }
    };
    (0..=p)
        .map(|point| {
            let (x, y) = if point == p { (0, 1) } else { (1, point) };
            normalize((m[0][0] * x + m[0][1] * y) % p, (m[1][0] * x + m[1][1] * y) % p)
        })
        .collect()
}

impl fmt::Display for BuiltinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinSpec::Trivial => write!(f, "trivial"),
            BuiltinSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            BuiltinSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            BuiltinSpec::Abelian(ns) => {
                let parts: Vec<String> = ns.iter().map(ToString::to_string).collect();
                write!(f, "abelian({})", parts.join(","))
            }
            BuiltinSpec::Symmetric(n) => write!(f, "symmetric({n})"),
            BuiltinSpec::Alternating(n) => write!(f, "alternating({n})"),
            BuiltinSpec::Sl2(p) => write!(f, "sl2({p})"),
            BuiltinSpec::Psl2(p) => write!(f, "psl2({p})"),
            BuiltinSpec::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

impl FromStr for BuiltinSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parser = SpecParser { text: &compact, pos: 0 };
        let spec = parser.spec();
        match spec {
            Some(spec) if parser.pos == compact.len() => Ok(spec),
            _ => Err(GroupError::UnsupportedSpec(s.to_string())),
        }
    }
}

struct SpecParser<'a> {
    text: &'a str,
    pos: usize,
}

impl SpecParser<'_> {
    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> &str {
        let len = self.rest().chars().take_while(|c| c.is_ascii_alphanumeric()).count();
        let start = self.pos;
        self.pos += len;
        &self.text[start..self.pos]
    }

    fn number(&mut self) -> Option<usize> {
        let len = self.rest().chars().take_while(char::is_ascii_digit).count();
        let n = self.rest()[..len].parse().ok()?;
        self.pos += len;
        Some(n)
    }

    fn numbers(&mut self) -> Option<Vec<usize>> {
        let mut out = vec![self.number()?];
        while self.eat(",") {
            out.push(self.number()?);
        }
        Some(out)
    }

    fn spec(&mut self) -> Option<BuiltinSpec> {
        let name = self.ident().to_string();
        if name == "trivial" {
            return Some(BuiltinSpec::Trivial);
        }
        if !self.eat("(") {
            return None;
        }
        let spec = if name == "product" {
            let a = self.spec()?;
            if !self.eat(",") {
                return None;
            }
            let b = self.spec()?;
            BuiltinSpec::Product(Box::new(a), Box::new(b))
        } else {
            let args = self.numbers()?;
            let single = || (args.len() == 1).then(|| args[0]);
            match name.as_str() {
                "cyclic" => BuiltinSpec::Cyclic(single()?),
                "dihedral" => BuiltinSpec::Dihedral(single()?),
                "abelian" => BuiltinSpec::Abelian(args),
                "symmetric" => BuiltinSpec::Symmetric(single()?),
                "alternating" => BuiltinSpec::Alternating(single()?),
                "sl2" => BuiltinSpec::Sl2(single()?),
                "psl2" => BuiltinSpec::Psl2(single()?),
                _ => return None,
            }
        };
        self.eat(")").then_some(spec)
    }
}
