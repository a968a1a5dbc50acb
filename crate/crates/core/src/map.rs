//! Sparse graded maps between bigraded spaces.
//!
//! A map of bidegree `(r, s)` sends a basis element at `(p, n)` to a linear
//! combination of target elements at `(p + r, n - s)`. Composition carries
//! no sign; all Koszul signs arise in [`GradedMap::tensor`].

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::space::{same_space, Bidegree, BigradedSpace, Space};

/// A sparse vector: strictly increasing indices, no zero coefficients.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Sorts, merges duplicates and drops zeros.
pub fn normalize(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_unstable_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += &c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

pub fn axpy(acc: &mut Vec<(usize, Scalar)>, coeff: &Scalar, v: &[(usize, Scalar)]) {
    acc.extend(v.iter().map(|(i, c)| (*i, coeff * c)));
}

#[derive(Clone, Debug)]
pub struct GradedMap {
    source: Space,
    target: Space,
    bidegree: Bidegree,
    columns: Vec<SparseVec>,
}

impl GradedMap {
    pub fn zero(source: &Space, target: &Space, bidegree: Bidegree) -> GradedMap {
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            bidegree,
            columns: vec![Vec::new(); source.dim()],
        }
    }

    pub fn identity(space: &Space) -> GradedMap {
        let one = space.field().one();
        GradedMap {
            source: space.clone(),
            target: space.clone(),
            bidegree: Bidegree::ZERO,
            columns: (0..space.dim()).map(|i| vec![(i, one.clone())]).collect(),
        }
    }

    /// Builds a map from per-source-element images, checking fields and bidegrees.
    pub fn from_columns(source: &Space, target: &Space, bidegree: Bidegree, columns: Vec<Vec<(usize, Scalar)>>) -> Result<GradedMap> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch {
                left: source.field().to_string(),
                right: target.field().to_string(),
            });
        }
        if columns.len() != source.dim() {
            return Err(Error::InvalidBasis(format!(
                "{} columns for a source of dimension {}",
                columns.len(),
                source.dim()
            )));
        }
        let field = source.field();
        let columns: Vec<SparseVec> = columns.into_iter().map(normalize).collect();
        for (j, col) in columns.iter().enumerate() {
            let want = source.bidegree(j).shifted_by(bidegree);
            for (i, c) in col {
                if *i >= target.dim() {
                    return Err(Error::InvalidBasis(format!("target index {i} out of range")));
                }
                if c.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field.to_string(),
                        right: c.field().to_string(),
                    });
                }
                if target.bidegree(*i) != want {
                    return Err(Error::BidegreeViolation {
                        bidegree,
                        from: source.label(j),
                        to: target.label(*i),
                    });
                }
            }
        }
        Ok(GradedMap {
            source: source.clone(),
            target: target.clone(),
            bidegree,
            columns,
        })
    }

    /// Builds a map from `(from, to, coeff)` triples of basis indices.
    pub fn from_entries(source: &Space, target: &Space, bidegree: Bidegree, entries: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Result<GradedMap> {
        let mut cols = vec![Vec::new(); source.dim()];
        for (from, to, c) in entries {
            if from >= source.dim() {
                return Err(Error::InvalidBasis(format!("source index {from} out of range")));
            }
            cols[from].push((to, c));
        }
        Self::from_columns(source, target, bidegree, cols)
    }

    /// Internal constructor for columns already known to be valid and normalized.
    pub(crate) fn from_raw(source: &Space, target: &Space, bidegree: Bidegree, columns: Vec<SparseVec>) -> GradedMap {
        debug_assert_eq!(columns.len(), source.dim());
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            bidegree,
            columns,
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn bidegree(&self) -> Bidegree {
        self.bidegree
    }

    pub fn total_degree(&self) -> i64 {
        self.bidegree.total()
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn column(&self, j: usize) -> &[(usize, Scalar)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    /// Coefficient of target element `i` in the image of source element `j`.
    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        match self.columns[j].binary_search_by_key(&i, |(k, _)| *k) {
            Ok(pos) => self.columns[j][pos].1.clone(),
            Err(_) => self.field().zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// `(from, to, coeff)` triples in deterministic basis order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, c)| (j, *i, c)))
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Vec::new();
        for (j, c) in v {
            axpy(&mut acc, c, &self.columns[*j]);
        }
        normalize(acc)
    }

    fn check_parallel(&self, other: &GradedMap, context: &'static str) -> Result<()> {
        if !same_space(&self.source, &other.source) || !same_space(&self.target, &other.target) || self.bidegree != other.bidegree {
            return Err(Error::ShapeMismatch {
                context,
                left: self.bidegree,
                right: other.bidegree,
            });
        }
        Ok(())
    }

    /// Sum of parallel maps. A zero summand may carry any bidegree.
    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.bidegree != other.bidegree {
            if other.is_zero() || self.is_zero() {
                let mut probe = other.clone();
                probe.bidegree = self.bidegree;
                self.check_parallel(&probe, "add")?;
                return Ok(if other.is_zero() { self.clone() } else { other.clone() });
            }
        }
        self.check_parallel(other, "add")?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                if b.is_empty() {
                    a.clone()
                } else if a.is_empty() {
                    b.clone()
                } else {
                    normalize(a.iter().chain(b).cloned().collect())
                }
            })
            .collect();
        Ok(GradedMap::from_raw(&self.source, &self.target, self.bidegree, columns))
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        if c.is_zero() {
            return GradedMap::zero(&self.source, &self.target, self.bidegree);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(i, x)| (*i, c * x)).collect())
            .collect();
        GradedMap::from_raw(&self.source, &self.target, self.bidegree, columns)
    }

    pub fn neg(&self) -> GradedMap {
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(i, x)| (*i, -x)).collect())
            .collect();
        GradedMap::from_raw(&self.source, &self.target, self.bidegree, columns)
    }

    /// `self ∘ other`; bidegrees add and no sign is introduced.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if !same_space(&other.target, &self.source) {
            return Err(Error::ShapeMismatch {
                context: "compose",
                left: self.bidegree,
                right: other.bidegree,
            });
        }
        let columns = other.columns.iter().map(|col| self.apply(col)).collect();
        Ok(GradedMap::from_raw(
            &other.source,
            &self.target,
            self.bidegree.plus(other.bidegree),
            columns,
        ))
    }

    /// `u ⊗ v` with `(u⊗v)(a⊗b) = (-1)^{|a||v|} u(a) ⊗ v(b)`, `|·|` the total degree.
    pub fn tensor(&self, other: &GradedMap) -> Result<GradedMap> {
        let source = BigradedSpace::tensor(&self.source, &other.source)?;
        let target = BigradedSpace::tensor(&self.target, &other.target)?;
        Ok(self.tensor_into(other, &source, &target))
    }

    /// As [`GradedMap::tensor`], reusing already built product spaces.
    pub(crate) fn tensor_into(&self, other: &GradedMap, source: &Space, target: &Space) -> GradedMap {
        debug_assert_eq!(source.dim(), self.source.dim() * other.source.dim());
        debug_assert_eq!(target.dim(), self.target.dim() * other.target.dim());
        let v_odd = other.total_degree().rem_euclid(2) == 1;
        let inner = other.target.dim();
        let mut columns = Vec::with_capacity(source.dim());
        for (a, ucol) in self.columns.iter().enumerate() {
            let negate = v_odd && self.source.bidegree(a).total().rem_euclid(2) == 1;
            for vcol in &other.columns {
                let mut col = Vec::with_capacity(ucol.len() * vcol.len());
                for (i, x) in ucol {
                    for (k, y) in vcol {
                        let c = x * y;
                        col.push((i * inner + k, if negate { -c } else { c }));
                    }
                }
                columns.push(col);
            }
        }
        GradedMap::from_raw(source, target, self.bidegree.plus(other.bidegree), columns)
    }

    /// `f_1 ⊗ … ⊗ f_k`, folded from the left.
    pub fn tensor_all(maps: &[&GradedMap]) -> Result<GradedMap> {
        let (first, rest) = maps.split_first().ok_or_else(|| Error::Rejected("empty tensor product".into()))?;
        let mut acc = (*first).clone();
        for m in rest {
            acc = acc.tensor(m)?;
        }
        Ok(acc)
    }

    /// Same matrix, reinterpreted between spaces of identical shape.
    pub fn rebase(&self, source: &Space, target: &Space) -> Result<GradedMap> {
        if source.bidegrees() != self.source.bidegrees() || target.bidegrees() != self.target.bidegrees() {
            return Err(Error::ShapeMismatch {
                context: "rebase",
                left: self.bidegree,
                right: self.bidegree,
            });
        }
        Ok(GradedMap::from_raw(source, target, self.bidegree, self.columns.clone()))
    }
}

impl PartialEq for GradedMap {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.source, &other.source)
            && same_space(&self.target, &other.target)
            && (self.bidegree == other.bidegree || (self.is_zero() && other.is_zero()))
            && self.columns == other.columns
    }
}

impl fmt::Display for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "map of bidegree {}", self.bidegree)?;
        for (j, i, c) in self.entries() {
            writeln!(f, "  {} -> {} : {}", self.source.label(j), self.target.label(i), c)?;
        }
        Ok(())
    }
}
