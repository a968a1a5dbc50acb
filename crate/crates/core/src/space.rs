//! Finite bigraded spaces: an ordered basis whose elements carry a
//! cohomological degree and a weight.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// A pair of integers `(first, second)`.
///
/// For a basis element this is `(p, n)`: cohomological degree and weight.
/// For a graded map it is `(r, s)`: the map sends `C^p(n)` into `D^{p+r}(n-s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree(pub i64, pub i64);

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree(0, 0);

    /// Total degree; it governs every Koszul sign.
    pub fn total(self) -> i64 {
        self.0 + self.1
    }

    /// Location of the image of an element at `self` under a map of bidegree `map`.
    pub fn shifted_by(self, map: Bidegree) -> Bidegree {
        Bidegree(self.0 + map.0, self.1 - map.1)
    }

    /// Sum as element bidegrees (used for tensors and for composing maps).
    pub fn plus(self, other: Bidegree) -> Bidegree {
        Bidegree(self.0 + other.0, self.1 + other.1)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

#[derive(Debug)]
enum Shape {
    Named {
        labels: Vec<String>,
        index: HashMap<String, usize>,
    },
    /// Flattened: no factor is itself a tensor space. Flat indices are
    /// mixed-radix with the first factor most significant.
    Tensor { factors: Vec<Space> },
    Suspension { base: Space },
}

/// A finite free module with a bigraded basis. Basis order is part of
/// the identity of the space.
#[derive(Debug)]
pub struct BigradedSpace {
    field: Field,
    shape: Shape,
    bidegrees: Vec<Bidegree>,
}

pub type Space = Arc<BigradedSpace>;

impl BigradedSpace {
    pub fn new(field: Field, basis: Vec<BasisElement>) -> Result<Space> {
        let mut index = HashMap::with_capacity(basis.len());
        let mut labels = Vec::with_capacity(basis.len());
        let mut bidegrees = Vec::with_capacity(basis.len());
        for (i, b) in basis.into_iter().enumerate() {
            if b.name.is_empty() || b.name.contains('⊗') {
                return Err(Error::InvalidBasis(format!("illegal label `{}`", b.name)));
            }
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::InvalidBasis(format!("duplicate label `{}`", b.name)));
            }
            bidegrees.push(Bidegree(b.degree, b.weight));
            labels.push(b.name);
        }
        Ok(Arc::new(BigradedSpace {
            field,
            shape: Shape::Named { labels, index },
            bidegrees,
        }))
    }

    /// Convenience constructor from `(name, degree, weight)` triples.
    pub fn from_triples<S: Into<String>>(field: Field, basis: impl IntoIterator<Item = (S, i64, i64)>) -> Result<Space> {
        Self::new(
            field,
            basis
                .into_iter()
                .map(|(name, degree, weight)| BasisElement {
                    name: name.into(),
                    degree,
                    weight,
                })
                .collect(),
        )
    }

    pub fn zero(field: Field) -> Space {
        Self::new(field, Vec::new()).unwrap()
    }

    pub fn tensor(a: &Space, b: &Space) -> Result<Space> {
        if a.field != b.field {
            return Err(Error::FieldMismatch {
                left: a.field.to_string(),
                right: b.field.to_string(),
            });
        }
        let mut factors = a.factors();
        factors.extend(b.factors());
        let mut bidegrees = Vec::with_capacity(a.dim() * b.dim());
        for x in &a.bidegrees {
            for y in &b.bidegrees {
                bidegrees.push(x.plus(*y));
            }
        }
        Ok(Arc::new(BigradedSpace {
            field: a.field,
            shape: Shape::Tensor { factors },
            bidegrees,
        }))
    }

    /// `space^{⊗n}` for `n ≥ 1`.
    pub fn tensor_power(space: &Space, n: usize) -> Space {
        assert!(n >= 1, "tensor powers start at 1");
        let mut acc = space.clone();
        for _ in 1..n {
            acc = Self::tensor(&acc, space).expect("same field");
        }
        acc
    }

    /// The suspension: `(SC)^i(n) = C^{i+1}(n)`, basis in the same order.
    pub fn suspension(base: &Space) -> Space {
        let bidegrees = base.bidegrees.iter().map(|b| Bidegree(b.0 - 1, b.1)).collect();
        Arc::new(BigradedSpace {
            field: base.field,
            shape: Shape::Suspension { base: base.clone() },
            bidegrees,
        })
    }

    fn factors(self: &Arc<Self>) -> Vec<Space> {
        match &self.shape {
            Shape::Tensor { factors } => factors.clone(),
            _ => vec![self.clone()],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.bidegrees.len()
    }

    pub fn bidegree(&self, i: usize) -> Bidegree {
        self.bidegrees[i]
    }

    pub fn bidegrees(&self) -> &[Bidegree] {
        &self.bidegrees
    }

    /// Number of tensor factors (1 for a non-tensor space).
    pub fn arity(&self) -> usize {
        match &self.shape {
            Shape::Tensor { factors } => factors.len(),
            _ => 1,
        }
    }

    pub fn label(&self, i: usize) -> String {
        match &self.shape {
            Shape::Named { labels, .. } => labels[i].clone(),
            Shape::Suspension { base } => format!("s{}", base.label(i)),
            Shape::Tensor { factors } => self
                .split_index(i)
                .iter()
                .zip(factors)
                .map(|(&j, f)| f.label(j))
                .collect::<Vec<_>>()
                .join("⊗"),
        }
    }

    /// Index of a basis element by label; tensor labels are `⊗`-joined.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.shape {
            Shape::Named { index, .. } => index.get(label).copied(),
            Shape::Suspension { base } => base.index_of(label.strip_prefix('s')?),
            Shape::Tensor { factors } => {
                let parts: Vec<&str> = label.split('⊗').collect();
                if parts.len() != factors.len() {
                    return None;
                }
                let idx = parts
                    .iter()
                    .zip(factors)
                    .map(|(p, f)| f.index_of(p))
                    .collect::<Option<Vec<_>>>()?;
                Some(self.join_index(&idx))
            }
        }
    }

    /// Factor indices of a flat tensor index.
    pub fn split_index(&self, mut i: usize) -> Vec<usize> {
        match &self.shape {
            Shape::Tensor { factors } => {
                let mut out = vec![0; factors.len()];
                for (slot, f) in out.iter_mut().zip(factors).rev() {
                    *slot = i % f.dim();
                    i /= f.dim();
                }
                out
            }
            _ => vec![i],
        }
    }

    pub fn join_index(&self, idx: &[usize]) -> usize {
        match &self.shape {
            Shape::Tensor { factors } => idx.iter().zip(factors).fold(0, |acc, (&j, f)| acc * f.dim() + j),
            _ => idx[0],
        }
    }

    /// Basis indices sitting at the given bidegree.
    pub fn component(&self, at: Bidegree) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.bidegrees[i] == at).collect()
    }

    /// Distinct bidegrees carrying basis elements, sorted.
    pub fn support(&self) -> Vec<Bidegree> {
        let mut v = self.bidegrees.clone();
        v.sort();
        v.dedup();
        v
    }

    pub fn basis(&self) -> Vec<BasisElement> {
        (0..self.dim())
            .map(|i| BasisElement {
                name: self.label(i),
                degree: self.bidegrees[i].0,
                weight: self.bidegrees[i].1,
            })
            .collect()
    }

    /// A named copy with the same labels and bidegrees.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Space> {
        if labels.len() != self.dim() {
            return Err(Error::InvalidBasis("label count differs from dimension".into()));
        }
        Self::new(
            self.field,
            labels
                .into_iter()
                .zip(&self.bidegrees)
                .map(|(name, b)| BasisElement {
                    name,
                    degree: b.0,
                    weight: b.1,
                })
                .collect(),
        )
    }
}

impl PartialEq for BigradedSpace {
    fn eq(&self, other: &Self) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.field != other.field || self.bidegrees != other.bidegrees {
            return false;
        }
        match (&self.shape, &other.shape) {
            (Shape::Named { labels: a, .. }, Shape::Named { labels: b, .. }) => a == b,
            (Shape::Tensor { factors: a }, Shape::Tensor { factors: b }) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| Arc::ptr_eq(x, y) || x == y)
            }
            (Shape::Suspension { base: a }, Shape::Suspension { base: b }) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for BigradedSpace {}

/// Pointer-fast equality for shared spaces.
pub fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(names: &[(&str, i64, i64)]) -> Space {
        BigradedSpace::from_triples(Field::Rational, names.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_duplicate_and_reserved_labels() {
        assert!(BigradedSpace::from_triples(Field::Rational, [("a", 0, 0), ("a", 1, 0)]).is_err());
        assert!(BigradedSpace::from_triples(Field::Rational, [("a⊗b", 0, 0)]).is_err());
    }

    #[test]
    fn tensor_is_strictly_associative() {
        let a = space(&[("a", 0, 1), ("b", 1, -1)]);
        let b = space(&[("x", 2, 0)]);
        let c = space(&[("u", 0, 0), ("v", -1, 2)]);
        let left = BigradedSpace::tensor(&BigradedSpace::tensor(&a, &b).unwrap(), &c).unwrap();
        let right = BigradedSpace::tensor(&a, &BigradedSpace::tensor(&b, &c).unwrap()).unwrap();
        assert!(same_space(&left, &right));
        assert_eq!(left.arity(), 3);
        let i = left.index_of("b⊗x⊗v").unwrap();
        assert_eq!(left.split_index(i), vec![1, 0, 1]);
        assert_eq!(left.bidegree(i), Bidegree(2, 1));
        assert_eq!(left.label(i), "b⊗x⊗v");
    }

    #[test]
    fn suspension_shifts_degree_only() {
        let a = space(&[("a", 0, 1), ("b", 1, -1)]);
        let s = BigradedSpace::suspension(&a);
        assert_eq!(s.bidegree(0), Bidegree(-1, 1));
        assert_eq!(s.bidegree(1), Bidegree(0, -1));
        assert_eq!(s.index_of("sb"), Some(1));
        let ss = BigradedSpace::suspension(&s);
        assert_eq!(ss.bidegree(1), Bidegree(-1, -1));
        assert_eq!(ss.label(0), "ssa");
    }

    #[test]
    fn bidegree_shift_lowers_weight() {
        assert_eq!(Bidegree(3, 2).shifted_by(Bidegree(1, 1)), Bidegree(4, 1));
        assert_eq!(Bidegree(1, 1).total(), 2);
    }
}
