use std::fmt;

use num::traits::{One, Signed};

use crate::diagram::FinitePath;
use crate::rational::{format_rational, parse_rational, Rational};

/// The discrete groups potentials may take values in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// `ℤ^d` under addition.
    Lattice(usize),
    /// `ℚ₊*` under multiplication.
    PositiveRationals,
}

/// An exact group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Lattice(Vec<i64>),
    Rational(Rational),
}

impl GroupSpec {
    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Lattice(d) => GroupElement::Lattice(vec![0; *d]),
            GroupSpec::PositiveRationals => GroupElement::Rational(Rational::one()),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupSpec::Lattice(d), GroupElement::Lattice(v)) => v.len() == *d,
            (GroupSpec::PositiveRationals, GroupElement::Rational(r)) => r.is_positive(),
            _ => false,
        }
    }

    /// `g·h`.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (g, h) {
            (GroupElement::Lattice(a), GroupElement::Lattice(b)) => {
                GroupElement::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupElement::Rational(a), GroupElement::Rational(b)) => GroupElement::Rational(a * b),
            _ => panic!("mixed group elements {g} and {h}"),
        }
    }

    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Lattice(a) => GroupElement::Lattice(a.iter().map(|x| -x).collect()),
            GroupElement::Rational(a) => GroupElement::Rational(a.recip()),
        }
    }

    /// Parses one element: `3` or `1;-2` for lattices, `num/den` for
    /// rationals.
    pub fn parse(&self, text: &str) -> Option<GroupElement> {
        let text = text.trim();
        let g = match self {
            GroupSpec::Lattice(_) => {
                let trimmed = text.trim_start_matches('(').trim_end_matches(')');
                GroupElement::Lattice(
                    trimmed
                        .split(';')
                        .map(|c| c.trim().parse::<i64>().ok())
                        .collect::<Option<Vec<_>>>()?,
                )
            }
            GroupSpec::PositiveRationals => GroupElement::Rational(parse_rational(text)?),
        };
        self.contains(&g).then_some(g)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Lattice(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(";"))
            }
            GroupElement::Rational(r) => write!(f, "{}", format_rational(r)),
        }
    }
}

/// A group-valued edge map `ρ : E → G`, stored per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePotential {
    group: GroupSpec,
    levels: Vec<Vec<GroupElement>>,
}

impl EdgePotential {
    /// All values must belong to `group`.
    pub fn new(group: GroupSpec, levels: Vec<Vec<GroupElement>>) -> Option<Self> {
        levels
            .iter()
            .flatten()
            .all(|g| group.contains(g))
            .then_some(Self { group, levels })
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    /// `ρ(e)` for `e ∈ E(n)`.
    pub fn get(&self, n: usize, e: usize) -> &GroupElement {
        &self.levels[n - 1][e]
    }

    pub fn levels(&self) -> &[Vec<GroupElement>] {
        &self.levels
    }

    /// Ordered product `ρ(a₁)···ρ(aₖ)`.
    pub fn along(&self, path: &FinitePath) -> GroupElement {
        path.edges()
            .iter()
            .enumerate()
            .fold(self.group.identity(), |acc, (i, &e)| {
                self.group.mul(&acc, self.get(path.start_level() + i + 1, e))
            })
    }
}
