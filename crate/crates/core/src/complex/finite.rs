//! Finite subgroups of PSL₂(O₋ₘ) and their isomorphism types.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::GroupElement;
use crate::error::{Error, Result};

/// The six isomorphism types of finite subgroups in PSL₂(O₋ₘ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IsoType {
    Trivial,
    C2,
    C3,
    D2,
    S3,
    A4,
}

impl IsoType {
    pub const ALL: [IsoType; 6] = [IsoType::Trivial, IsoType::C2, IsoType::C3, IsoType::D2, IsoType::S3, IsoType::A4];

    pub fn order(self) -> usize {
        match self {
            IsoType::Trivial => 1,
            IsoType::C2 => 2,
            IsoType::C3 => 3,
            IsoType::D2 => 4,
            IsoType::S3 => 6,
            IsoType::A4 => 12,
        }
    }

    pub fn index(self) -> usize {
        IsoType::ALL.iter().position(|&t| t == self).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            IsoType::Trivial => "1",
            IsoType::C2 => "Z/2",
            IsoType::C3 => "Z/3",
            IsoType::D2 => "D2",
            IsoType::S3 => "S3",
            IsoType::A4 => "A4",
        }
    }

    /// Type of the preimage in SL₂.
    pub fn linear_preimage(self) -> LinearType {
        match self {
            IsoType::Trivial => LinearType::C2,
            IsoType::C2 => LinearType::C4,
            IsoType::C3 => LinearType::C6,
            IsoType::D2 => LinearType::Q8,
            IsoType::S3 => LinearType::Dic3,
            IsoType::A4 => LinearType::BinaryTetrahedral,
        }
    }
}

impl fmt::Display for IsoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Types of finite subgroups of SL₂(O₋ₘ) containing −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinearType {
    C2,
    C4,
    C6,
    Q8,
    Dic3,
    BinaryTetrahedral,
}

/// A finite group of matrices, closed under products, listed in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSubgroup {
    elements: Vec<GroupElement>,
}

impl FiniteSubgroup {
    /// Closure of the given elements; `None` if it exceeds `cap` elements.
    pub fn generated(gens: &[GroupElement], identity: GroupElement, cap: usize) -> Option<Self> {
        let mut set: BTreeSet<GroupElement> = BTreeSet::new();
        set.insert(identity);
        let mut frontier: Vec<GroupElement> = set.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.mul(g);
                if set.insert(y.clone()) {
                    if set.len() > cap {
                        return None;
                    }
                    frontier.push(y);
                }
            }
        }
        Some(FiniteSubgroup { elements: set.into_iter().collect() })
    }

    /// Wrap an element list, checking closure.
    pub fn from_elements(elements: Vec<GroupElement>) -> Result<Self> {
        let set: BTreeSet<GroupElement> = elements.into_iter().collect();
        for a in &set {
            for b in &set {
                if !set.contains(&a.mul(b)) {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        if !set.iter().any(|g| g.is_identity()) {
            return Err(Error::NotASubgroup);
        }
        Ok(FiniteSubgroup { elements: set.into_iter().collect() })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, o: &FiniteSubgroup) -> bool {
        self.elements.iter().all(|g| o.contains(g))
    }

    pub fn conjugate_by(&self, g: &GroupElement) -> FiniteSubgroup {
        let mut e: Vec<GroupElement> = self.elements.iter().map(|x| x.conjugate_by(g)).collect();
        e.sort();
        FiniteSubgroup { elements: e }
    }

    pub fn element_orders(&self) -> Vec<usize> {
        self.elements.iter().map(|g| g.order(24).expect("finite order")).collect()
    }

    pub fn exponent(&self) -> usize {
        self.element_orders().into_iter().fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements.iter().all(|a| self.elements.iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// Elements of the given order.
    pub fn elements_of_order(&self, k: usize) -> Vec<GroupElement> {
        self.elements.iter().filter(|g| g.order(24) == Some(k)).cloned().collect()
    }

    /// Isomorphism type of a projective subgroup.
    pub fn classify(&self) -> Result<IsoType> {
        let n = self.order();
        let e = self.exponent();
        let t = match (n, e) {
            (1, 1) => IsoType::Trivial,
            (2, 2) => IsoType::C2,
            (3, 3) => IsoType::C3,
            (4, 2) => IsoType::D2,
            (6, 6) if !self.is_abelian() => IsoType::S3,
            (12, 6) if self.elements_of_order(6).is_empty() && !self.is_abelian() => IsoType::A4,
            _ => return Err(Error::UnknownType { order: n, exponent: e }),
        };
        Ok(t)
    }

    /// Preimage in SL₂ (elements with both signs, in the linear model).
    pub fn linear_preimage(&self) -> FiniteSubgroup {
        let mut e: Vec<GroupElement> = self.elements.iter().flat_map(|g| [g.to_linear(), g.to_linear().negated()]).collect();
        e.sort();
        e.dedup();
        FiniteSubgroup { elements: e }
    }

    /// Type of a linear subgroup containing −1.
    pub fn classify_linear(&self) -> Result<LinearType> {
        let n = self.order();
        let e = self.exponent();
        let count = |k: usize| self.elements_of_order(k).len();
        let t = match n {
            2 => LinearType::C2,
            4 if e == 4 => LinearType::C4,
            6 if e == 6 => LinearType::C6,
            8 if count(4) == 6 => LinearType::Q8,
            12 if !self.is_abelian() && count(4) == 6 => LinearType::Dic3,
            24 if count(4) == 6 && count(6) == 8 => LinearType::BinaryTetrahedral,
            _ => return Err(Error::UnknownType { order: n, exponent: e }),
        };
        Ok(t)
    }
}
