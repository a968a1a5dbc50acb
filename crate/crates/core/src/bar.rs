//! The reduced tensor coalgebra on `SC`, truncated at arity `N`, and maps
//! between such coalgebras stored as blocks `(SC)^{⊗j} → (SC')^{⊗k}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::complex::{suspend, Complex, Suspension};
use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::multilinear::{tensor_maps, whisker, Powers};
use crate::space::{same_space, Bidegree};

/// A complex, its suspension, and the tensor powers of both up to arity `N`.
#[derive(Debug)]
pub struct BarContext {
    complex: Complex,
    suspension: Suspension,
    arity: usize,
    bar_powers: Powers,
    plain_powers: Powers,
}

impl BarContext {
    pub fn new(complex: &Complex, arity: usize) -> Result<Arc<BarContext>> {
        if arity == 0 {
            return Err(Error::Rejected("truncation arity must be at least 1".into()));
        }
        let suspension = suspend(complex);
        let bar_powers = Powers::new(suspension.complex.space(), arity);
        let plain_powers = Powers::new(complex.space(), arity);
        Ok(Arc::new(BarContext {
            complex: complex.clone(),
            suspension,
            arity,
            bar_powers,
            plain_powers,
        }))
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn suspension(&self) -> &Suspension {
        &self.suspension
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `(SC)^{⊗j}` for `1 ≤ j ≤ N`.
    pub fn bar_powers(&self) -> &Powers {
        &self.bar_powers
    }

    /// `C^{⊗j}` for `1 ≤ j ≤ N`.
    pub fn plain_powers(&self) -> &Powers {
        &self.plain_powers
    }

    pub fn same(a: &Arc<BarContext>, b: &Arc<BarContext>) -> bool {
        Arc::ptr_eq(a, b) || (a.arity == b.arity && a.complex == b.complex)
    }
}

/// A truncated map of bar coalgebras of one total degree. Absent blocks are zero.
#[derive(Clone, Debug)]
pub struct BarMap {
    source: Arc<BarContext>,
    target: Arc<BarContext>,
    degree: i64,
    blocks: BTreeMap<(usize, usize), GradedMap>,
}

impl BarMap {
    pub fn zero(source: &Arc<BarContext>, target: &Arc<BarContext>, degree: i64) -> BarMap {
        BarMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(ctx: &Arc<BarContext>) -> BarMap {
        let mut out = BarMap::zero(ctx, ctx, 0);
        for j in 1..=ctx.arity {
            let id = GradedMap::identity(ctx.bar_powers.get(j));
            out.insert(j, j, id);
        }
        out
    }

    /// Checks every block against the contexts and the declared degree.
    pub fn from_blocks(
        source: &Arc<BarContext>,
        target: &Arc<BarContext>,
        degree: i64,
        blocks: impl IntoIterator<Item = ((usize, usize), GradedMap)>,
    ) -> Result<BarMap> {
        if source.arity != target.arity {
            return Err(Error::TruncationMismatch(source.arity, target.arity));
        }
        let mut out = BarMap::zero(source, target, degree);
        for ((j, k), m) in blocks {
            if j == 0 || k == 0 || j > source.arity || k > target.arity {
                return Err(Error::Rejected(format!("block {j}->{k} outside arity {}", source.arity)));
            }
            if m.is_zero() {
                continue;
            }
            if m.total_degree() != degree {
                return Err(Error::MixedDegrees(degree, m.total_degree()));
            }
            let m = source
                .bar_powers
                .adopt(&m, j, &target.bar_powers, k)
                .ok_or_else(|| Error::Rejected(format!("block {j}->{k} has the wrong source or target")))?;
            out.blocks.insert((j, k), m);
        }
        Ok(out)
    }

    /// Adds `m` into block `j→k`; `m` must already live on the cached powers.
    fn insert(&mut self, j: usize, k: usize, m: GradedMap) {
        if m.is_zero() {
            return;
        }
        debug_assert!(same_space(m.source(), self.source.bar_powers.get(j)));
        debug_assert!(same_space(m.target(), self.target.bar_powers.get(k)));
        match self.blocks.remove(&(j, k)) {
            None => {
                self.blocks.insert((j, k), m);
            }
            Some(old) => {
                let sum = old.add(&m).expect("parallel blocks");
                if !sum.is_zero() {
                    self.blocks.insert((j, k), sum);
                }
            }
        }
    }

    pub fn source(&self) -> &Arc<BarContext> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BarContext> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn arity(&self) -> usize {
        self.source.arity
    }

    pub fn block(&self, j: usize, k: usize) -> Option<&GradedMap> {
        self.blocks.get(&(j, k))
    }

    pub fn blocks(&self) -> impl Iterator<Item = ((usize, usize), &GradedMap)> {
        self.blocks.iter().map(|(k, v)| (*k, v))
    }

    /// Total number of nonzero entries over all blocks.
    pub fn nnz(&self) -> usize {
        self.blocks.values().map(GradedMap::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The first nonzero block in `(j, k)` order.
    pub fn first_nonzero_block(&self) -> Option<(usize, usize)> {
        self.blocks.keys().next().copied()
    }

    /// The blocks `j→1`, indexed by `j − 1`.
    pub fn corestriction(&self) -> Vec<Option<GradedMap>> {
        (1..=self.arity()).map(|j| self.block(j, 1).cloned()).collect()
    }

    fn check_parallel(&self, other: &BarMap) -> Result<()> {
        if !BarContext::same(&self.source, &other.source) || !BarContext::same(&self.target, &other.target) {
            return Err(Error::Rejected("bar maps between different coalgebras".into()));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::MixedDegrees(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &BarMap) -> Result<BarMap> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        if self.is_zero() {
            out.degree = other.degree;
        }
        for ((j, k), m) in &other.blocks {
            out.insert(*j, *k, m.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> BarMap {
        let mut out = self.clone();
        for m in out.blocks.values_mut() {
            *m = m.neg();
        }
        out
    }

    pub fn sub(&self, other: &BarMap) -> Result<BarMap> {
        self.add(&other.neg())
    }

    /// `(F∘G)_{j→k} = Σ_m F_{m→k} ∘ G_{j→m}`.
    pub fn compose(&self, other: &BarMap) -> Result<BarMap> {
        if self.arity() != other.arity() {
            return Err(Error::TruncationMismatch(self.arity(), other.arity()));
        }
        if !BarContext::same(&other.target, &self.source) {
            return Err(Error::Rejected("composing bar maps over different coalgebras".into()));
        }
        let mut out = BarMap::zero(&other.source, &self.target, self.degree + other.degree);
        for ((j, m), g) in &other.blocks {
            for ((_, k), f) in self.blocks.range((*m, 1)..=(*m, usize::MAX)) {
                out.insert(*j, *k, f.compose(g).expect("cached powers"));
            }
        }
        Ok(out)
    }

    /// `d'∘F + (-1)^{k+1} F∘d` for `F` of total degree `k`.
    pub fn differential(&self, d_source: &BarMap, d_target: &BarMap) -> Result<BarMap> {
        let left = d_target.compose(self)?;
        let right = self.compose(d_source)?;
        if (self.degree + 1).rem_euclid(2) == 0 {
            left.add(&right)
        } else {
            left.sub(&right)
        }
    }

    /// Every block with `k > j` vanishes.
    pub fn respects_filtration(&self) -> bool {
        self.blocks.keys().all(|(j, k)| k <= j)
    }

    /// Every block strictly lowers arity.
    pub fn lowers_filtration(&self) -> bool {
        self.blocks.keys().all(|(j, k)| k < j)
    }
}

impl PartialEq for BarMap {
    fn eq(&self, other: &Self) -> bool {
        self.check_parallel(other).is_ok() && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl fmt::Display for BarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bar map of total degree {} through arity {}", self.degree, self.arity())?;
        for ((j, k), m) in &self.blocks {
            writeln!(f, "block {j}->{k}: {} nonzero entries", m.nnz())?;
        }
        Ok(())
    }
}

fn common_degree(components: &[Option<GradedMap>]) -> Result<i64> {
    let mut degree = None;
    for m in components.iter().flatten().filter(|m| !m.is_zero()) {
        match degree {
            None => degree = Some(m.total_degree()),
            Some(d) if d != m.total_degree() => return Err(Error::MixedDegrees(d, m.total_degree())),
            _ => {}
        }
    }
    Ok(degree.unwrap_or(0))
}

fn adopt_components(ctx_src: &BarContext, ctx_tgt: &BarContext, components: &[Option<GradedMap>]) -> Result<Vec<Option<GradedMap>>> {
    if components.len() > ctx_src.arity {
        return Err(Error::TruncationMismatch(components.len(), ctx_src.arity));
    }
    components
        .iter()
        .enumerate()
        .map(|(i, m)| match m {
            Some(m) if !m.is_zero() => ctx_src
                .bar_powers
                .adopt(m, i + 1, &ctx_tgt.bar_powers, 1)
                .map(Some)
                .ok_or_else(|| Error::Rejected(format!("component of arity {} has the wrong shape", i + 1))),
            _ => Ok(None),
        })
        .collect()
}

/// The coderivation with corestriction `b_1, …, b_N` (`components[i]` has arity `i+1`):
/// block `j→u` is `Σ_{r+s+t=j, u=r+1+t} 1^{⊗r} ⊗ b_s ⊗ 1^{⊗t}`.
pub fn lift_coderivation(ctx: &Arc<BarContext>, components: &[Option<GradedMap>]) -> Result<BarMap> {
    let degree = common_degree(components)?;
    let comps = adopt_components(ctx, ctx, components)?;
    let mut out = BarMap::zero(ctx, ctx, degree);
    for j in 1..=ctx.arity {
        for (si, b) in comps.iter().enumerate() {
            let Some(b) = b else { continue };
            let s = si + 1;
            if s > j {
                break;
            }
            for r in 0..=(j - s) {
                let t = j - s - r;
                out.insert(j, r + 1 + t, whisker(&ctx.bar_powers, r, b, t));
            }
        }
    }
    Ok(out)
}

/// Compositions of `j` into `k` positive parts, each at most `max`.
pub fn compositions(j: usize, k: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(j: usize, k: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if j == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in 1..=max.min(j.saturating_sub(k - 1)) {
            prefix.push(first);
            go(j - first, k - 1, max, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(j, k, max, &mut Vec::new(), &mut out);
    out
}

/// The coalgebra morphism with corestriction `f_1, …, f_N`: block `j→k` is the
/// sum over compositions `j = i_1 + … + i_k` of `f_{i_1} ⊗ … ⊗ f_{i_k}`.
pub fn lift_morphism(source: &Arc<BarContext>, target: &Arc<BarContext>, components: &[Option<GradedMap>]) -> Result<BarMap> {
    if source.arity != target.arity {
        return Err(Error::TruncationMismatch(source.arity, target.arity));
    }
    let degree = common_degree(components)?;
    if degree != 0 {
        return Err(Error::WrongBidegree {
            what: "coalgebra morphism component".into(),
            expected: Bidegree::ZERO,
            found: components.iter().flatten().find(|m| !m.is_zero()).unwrap().bidegree(),
        });
    }
    let comps = adopt_components(source, target, components)?;
    let mut out = BarMap::zero(source, target, 0);
    for j in 1..=source.arity {
        for k in 1..=j {
            for parts in compositions(j, k, comps.len()) {
                let maps: Option<Vec<&GradedMap>> = parts.iter().map(|&i| comps[i - 1].as_ref()).collect();
                if let Some(maps) = maps {
                    out.insert(j, k, tensor_maps(&maps, &source.bar_powers, &target.bar_powers));
                }
            }
        }
    }
    Ok(out)
}

/// The strict morphism `f^{⊗j}` on every arity, for `f : SC → SC'`.
pub fn strict_morphism(source: &Arc<BarContext>, target: &Arc<BarContext>, f: &GradedMap) -> Result<BarMap> {
    lift_morphism(source, target, &[Some(f.clone())])
}

/// True iff `F` equals the coderivation lifted from its own corestriction.
pub fn is_coderivation(f: &BarMap) -> bool {
    if !BarContext::same(&f.source, &f.target) {
        return false;
    }
    match lift_coderivation(&f.source, &f.corestriction()) {
        Ok(lift) => lift == *f,
        Err(_) => false,
    }
}

/// True iff `F` equals the coalgebra morphism lifted from its own corestriction.
pub fn is_coalgebra_morphism(f: &BarMap) -> bool {
    if f.degree != 0 && !f.is_zero() {
        return false;
    }
    match lift_morphism(&f.source, &f.target, &f.corestriction()) {
        Ok(lift) => lift == *f,
        Err(_) => false,
    }
}

/// The bar differential induced by `d_{SC}` alone.
pub fn bar_differential_of_d(ctx: &Arc<BarContext>) -> BarMap {
    lift_coderivation(ctx, &[Some(ctx.suspension.complex.d().clone())]).expect("one component")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DIFFERENTIAL;
    use crate::scalar::Field;
    use crate::space::BigradedSpace;

    fn ctx(n: usize) -> Arc<BarContext> {
        let f = Field::Rational;
        let s = BigradedSpace::from_triples(f, [("x", 0, 1), ("y", 1, 1), ("z", 1, 0)]).unwrap();
        let c = Complex::new(GradedMap::from_entries(&s, &s, DIFFERENTIAL, [(0, 1, f.from_i64(2))]).unwrap()).unwrap();
        BarContext::new(&c, n).unwrap()
    }

    #[test]
    fn bar_differential_squares_to_zero() {
        let c = ctx(3);
        let d = bar_differential_of_d(&c);
        assert!(d.compose(&d).unwrap().is_zero());
        assert!(is_coderivation(&d));
        assert!(d.block(2, 1).is_none());
        let expect = c
            .suspension()
            .complex
            .d()
            .tensor(&GradedMap::identity(c.bar_powers().get(1)))
            .unwrap()
            .add(&GradedMap::identity(c.bar_powers().get(1)).tensor(c.suspension().complex.d()).unwrap())
            .unwrap();
        assert_eq!(d.block(2, 2).unwrap(), &expect);
    }

    #[test]
    fn binary_component_lift_at_three() {
        let c = ctx(3);
        let p = c.bar_powers();
        let f = Field::Rational;
        let b2 = GradedMap::from_entries(p.get(2), p.get(1), Bidegree(1, 0), [(p.get(2).index_of("sx⊗sz").unwrap(), 1, f.one())]).unwrap();
        let lift = lift_coderivation(&c, &[None, Some(b2.clone())]).unwrap();
        let id = GradedMap::identity(p.get(1));
        let expect = b2.tensor(&id).unwrap().add(&id.tensor(&b2).unwrap()).unwrap();
        assert_eq!(lift.block(3, 2).unwrap(), &expect);
        assert!(lift.lowers_filtration());
        assert!(is_coderivation(&lift));
    }

    #[test]
    fn morphism_lift_enumerates_compositions() {
        let c = ctx(2);
        let p = c.bar_powers();
        let f = Field::Rational;
        let f2 = GradedMap::from_entries(p.get(2), p.get(1), Bidegree(0, 0), [(p.get(2).index_of("sy⊗sz").unwrap(), 1, f.from_i64(5))]).unwrap();
        let id = GradedMap::identity(p.get(1));
        let lift = lift_morphism(&c, &c, &[Some(id.clone()), Some(f2.clone())]).unwrap();
        assert_eq!(lift.block(2, 1).unwrap(), &f2);
        assert_eq!(lift.block(2, 2).unwrap(), &GradedMap::identity(p.get(2)));
        assert!(is_coalgebra_morphism(&lift));
        assert!(!is_coderivation(&lift) || lift.degree() == 0);
        assert_eq!(compositions(4, 2, 4).len(), 3);
        assert_eq!(compositions(4, 2, 2), vec![vec![2, 2]]);
    }

    #[test]
    fn mixed_degrees_rejected() {
        let c = ctx(2);
        let p = c.bar_powers();
        let f = Field::Rational;
        let b1 = c.suspension().complex.d().clone();
        let b2 = GradedMap::from_entries(p.get(2), p.get(1), Bidegree(0, 0), [(p.get(2).index_of("sy⊗sz").unwrap(), 1, f.one())]).unwrap();
        assert!(matches!(lift_coderivation(&c, &[Some(b1), Some(b2)]), Err(Error::MixedDegrees(..))));
        assert!(matches!(BarMap::identity(&c).compose(&BarMap::identity(&ctx(3))), Err(Error::TruncationMismatch(..))));
    }
}
