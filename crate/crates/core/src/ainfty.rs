//! A∞-structures and morphisms, in signed form on `A` and sign-free form on `SA`.

use std::sync::Arc;

use crate::bar::{lift_coderivation, lift_morphism, BarContext, BarMap};
use crate::complex::{is_closed, tensor_complex, Complex};
use crate::error::{Error, Result};
use crate::homology::{class_coordinates, homology_basis};
use crate::linalg::Matrix;
use crate::map::{GradedMap, SparseVec};
use crate::multilinear::{desuspension_parity, tensor_vectors, whisker, Powers};
use crate::scalar::{Field, Scalar};
use crate::space::{Bidegree, Space};

/// `(-1)^{r+s+i-1} s_D ∘ f ∘ (s_C^{-1})^{⊗i}` for `f : C^{⊗i} → D` of bidegree `(r, s)`.
///
/// `suspended` holds the powers of `SC`; the result lands in `target` (`SD`).
pub fn suspend_multilinear(f: &GradedMap, suspended: &Powers, target: &Space) -> GradedMap {
    let i = suspended.arity_of(f.source()).max(1);
    let Bidegree(r, s) = f.bidegree();
    let global = (r + s + i as i64 - 1).rem_euclid(2) == 1;
    let source = suspended.get(i);
    let columns = (0..source.dim())
        .map(|x| {
            let negate = global ^ desuspension_parity(suspended, i, x);
            f.column(x)
                .iter()
                .map(|(k, c)| (*k, if negate { -c } else { c.clone() }))
                .collect()
        })
        .collect();
    GradedMap::from_raw(source, target, Bidegree(r + i as i64 - 1, s), columns)
}

/// Inverse of [`suspend_multilinear`]: `b : (SC)^{⊗i} → SD` back to `C^{⊗i} → D`.
pub fn desuspend_multilinear(b: &GradedMap, suspended: &Powers, plain: &Powers, target: &Space) -> GradedMap {
    let i = suspended.arity_of(b.source()).max(1);
    let Bidegree(r, s) = b.bidegree();
    let global = (r + s).rem_euclid(2) == 1;
    let source = plain.get(i);
    let columns = (0..source.dim())
        .map(|x| {
            let negate = global ^ desuspension_parity(suspended, i, x);
            b.column(x)
                .iter()
                .map(|(k, c)| (*k, if negate { -c } else { c.clone() }))
                .collect()
        })
        .collect();
    GradedMap::from_raw(source, target, Bidegree(r - i as i64 + 1, s), columns)
}

fn operation_bidegree(n: usize) -> Bidegree {
    Bidegree(2 - n as i64, 0)
}

fn morphism_bidegree(n: usize) -> Bidegree {
    Bidegree(1 - n as i64, 0)
}

/// Puts `m : X^{⊗n} → Y` onto the cached spaces, enforcing its bidegree.
fn adopt_operation(m: &GradedMap, n: usize, source: &Powers, target: &Space, expected: Bidegree, what: &str) -> Result<GradedMap> {
    if m.is_zero() {
        if m.source().dim() != source.get(n).dim() || **m.source() != **source.get(n) || **m.target() != **target {
            return Err(Error::Rejected(format!("{what} has the wrong source or target")));
        }
        return Ok(GradedMap::zero(source.get(n), target, expected));
    }
    if m.bidegree() != expected {
        return Err(Error::WrongBidegree {
            what: what.to_string(),
            expected,
            found: m.bidegree(),
        });
    }
    if **m.source() != **source.get(n) || **m.target() != **target {
        return Err(Error::Rejected(format!("{what} has the wrong source or target")));
    }
    m.rebase(source.get(n), target)
}

/// A complex `A` with operations `m_n : A^{⊗n} → A` of bidegree `(2-n, 0)`, `n ≤ N`,
/// and `m_1 = d`.
#[derive(Clone, Debug)]
pub struct AInfinityStructure {
    context: Arc<BarContext>,
    ops: Vec<GradedMap>,
}

impl AInfinityStructure {
    /// `ops[n-1]` is `m_n`; missing higher operations are zero.
    pub fn new(complex: &Complex, arity: usize, ops: &[GradedMap]) -> Result<AInfinityStructure> {
        let context = BarContext::new(complex, arity)?;
        Self::on_context(&context, ops)
    }

    pub fn on_context(context: &Arc<BarContext>, ops: &[GradedMap]) -> Result<AInfinityStructure> {
        let n_max = context.arity();
        if ops.len() > n_max {
            return Err(Error::TruncationMismatch(ops.len(), n_max));
        }
        let plain = context.plain_powers();
        let space = context.complex().space();
        let mut out = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let m = match ops.get(n - 1) {
                Some(m) => adopt_operation(m, n, plain, space, operation_bidegree(n), &format!("m{n}"))?,
                None if n == 1 => context.complex().d().clone(),
                None => GradedMap::zero(plain.get(n), space, operation_bidegree(n)),
            };
            out.push(m);
        }
        if out[0] != *context.complex().d() {
            return Err(Error::Rejected("m1 must equal the differential".into()));
        }
        Ok(AInfinityStructure {
            context: context.clone(),
            ops: out,
        })
    }

    /// `m_1 = d`, `m_2 = μ`, higher operations zero. Requires `μ` closed and associative.
    pub fn from_dga(complex: &Complex, mu: &GradedMap, arity: usize) -> Result<AInfinityStructure> {
        let context = BarContext::new(complex, arity.max(2))?;
        let plain = context.plain_powers();
        let mu = adopt_operation(mu, 2, plain, complex.space(), Bidegree::ZERO, "product")?;
        let square = tensor_complex(complex, complex)?;
        let mu_on_square = mu.rebase(square.space(), complex.space())?;
        if !is_closed(&mu_on_square, &square, complex)? {
            let defect = complex.d().compose(&mu_on_square)?.sub(&mu_on_square.compose(square.d())?)?;
            let at = (0..defect.source().dim()).find(|&j| !defect.column(j).is_empty()).unwrap();
            return Err(Error::Rejected(format!(
                "product is not closed (Leibniz fails) at {}",
                plain.get(2).label(at)
            )));
        }
        let left = mu.compose(&whisker(plain, 0, &mu, 1))?;
        let right = mu.compose(&whisker(plain, 1, &mu, 0))?;
        let assoc = left.sub(&right)?;
        if let Some(at) = (0..assoc.source().dim()).find(|&j| !assoc.column(j).is_empty()) {
            return Err(Error::Rejected(format!("product is not associative at {}", plain.get(3).label(at))));
        }
        let structure = Self::on_context(&context, &[complex.d().clone(), mu])?;
        if arity < 2 {
            return structure.truncate(arity.max(1));
        }
        Ok(structure)
    }

    /// The same operations up to a smaller (or equal) arity.
    pub fn truncate(&self, arity: usize) -> Result<AInfinityStructure> {
        if arity > self.arity() {
            return Err(Error::TruncationMismatch(arity, self.arity()));
        }
        let context = BarContext::new(self.complex(), arity)?;
        let ops: Vec<GradedMap> = self.ops[..arity].to_vec();
        let plain = context.plain_powers();
        let ops: Vec<GradedMap> = ops
            .iter()
            .enumerate()
            .map(|(i, m)| m.rebase(plain.get(i + 1), self.complex().space()).expect("same shape"))
            .collect();
        Self::on_context(&context, &ops)
    }

    pub fn context(&self) -> &Arc<BarContext> {
        &self.context
    }

    pub fn complex(&self) -> &Complex {
        self.context.complex()
    }

    pub fn arity(&self) -> usize {
        self.ops.len()
    }

    /// `m_n`, `1 ≤ n ≤ N`.
    pub fn m(&self, n: usize) -> &GradedMap {
        &self.ops[n - 1]
    }

    pub fn operations(&self) -> &[GradedMap] {
        &self.ops
    }

    pub fn field(&self) -> Field {
        self.complex().space().field()
    }

    /// `Σ_{r+s+t=n} (-1)^{r+st} m_{r+1+t} ∘ (1^{⊗r} ⊗ m_s ⊗ 1^{⊗t})`.
    pub fn stasheff_defect(&self, n: usize) -> GradedMap {
        let plain = self.context.plain_powers();
        let field = self.field();
        let mut acc = GradedMap::zero(plain.get(n), self.complex().space(), Bidegree(3 - n as i64, 0));
        for s in 1..=n {
            for r in 0..=(n - s) {
                let t = n - s - r;
                let inner = self.m(s);
                if inner.is_zero() || self.m(r + 1 + t).is_zero() {
                    continue;
                }
                let term = self.m(r + 1 + t).compose(&whisker(plain, r, inner, t)).expect("cached powers");
                let sign = Scalar::sign(field, (r + s * t) as i64);
                acc = acc.add(&term.scale(&sign)).expect("same shape");
            }
        }
        acc
    }

    /// True iff every signed defect through arity `N` vanishes.
    pub fn is_valid(&self) -> bool {
        (1..=self.arity()).all(|n| self.stasheff_defect(n).is_zero())
    }

    /// `b_n = suspend_multilinear(m_n)`.
    pub fn b_form(&self) -> Vec<GradedMap> {
        let sp = self.context.bar_powers();
        let target = self.context.suspension().complex.space();
        self.ops.iter().map(|m| suspend_multilinear(m, sp, target)).collect()
    }

    /// The coderivation lifted from the `b_n`.
    pub fn bar_differential(&self) -> BarMap {
        let comps: Vec<Option<GradedMap>> = self.b_form().into_iter().map(Some).collect();
        lift_coderivation(&self.context, &comps).expect("common degree 1")
    }

    /// Rebuilds a structure from the corestriction of a bar coderivation.
    pub fn from_bar(context: &Arc<BarContext>, b: &BarMap) -> Result<AInfinityStructure> {
        let sp = context.bar_powers();
        let plain = context.plain_powers();
        let target = context.complex().space();
        let ops: Vec<GradedMap> = (1..=context.arity())
            .map(|n| match b.block(n, 1) {
                Some(m) => desuspend_multilinear(m, sp, plain, target),
                None => GradedMap::zero(plain.get(n), target, operation_bidegree(n)),
            })
            .collect();
        Self::on_context(context, &ops)
    }
}

/// An A∞-morphism `A → B` with components `f_n : A^{⊗n} → B` of bidegree `(1-n, 0)`.
#[derive(Clone, Debug)]
pub struct AInfinityMorphism {
    source: AInfinityStructure,
    target: AInfinityStructure,
    components: Vec<GradedMap>,
}

impl AInfinityMorphism {
    pub fn new(source: &AInfinityStructure, target: &AInfinityStructure, components: &[GradedMap]) -> Result<AInfinityMorphism> {
        if source.arity() != target.arity() {
            return Err(Error::TruncationMismatch(source.arity(), target.arity()));
        }
        if components.len() > source.arity() {
            return Err(Error::TruncationMismatch(components.len(), source.arity()));
        }
        let plain = source.context.plain_powers();
        let space = target.complex().space();
        let components = (1..=source.arity())
            .map(|n| match components.get(n - 1) {
                Some(f) => adopt_operation(f, n, plain, space, morphism_bidegree(n), &format!("f{n}")),
                None => Ok(GradedMap::zero(plain.get(n), space, morphism_bidegree(n))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AInfinityMorphism {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(a: &AInfinityStructure) -> AInfinityMorphism {
        Self::new(a, a, &[GradedMap::identity(a.complex().space())]).expect("identity")
    }

    /// Desuspends the corestriction of a coalgebra morphism.
    pub fn from_bar(source: &AInfinityStructure, target: &AInfinityStructure, f: &BarMap) -> Result<AInfinityMorphism> {
        let sp = source.context.bar_powers();
        let plain = source.context.plain_powers();
        let space = target.complex().space();
        let comps: Vec<GradedMap> = (1..=source.arity())
            .map(|n| match f.block(n, 1) {
                Some(m) => desuspend_multilinear(m, sp, plain, space),
                None => GradedMap::zero(plain.get(n), space, morphism_bidegree(n)),
            })
            .collect();
        Self::new(source, target, &comps)
    }

    pub fn source(&self) -> &AInfinityStructure {
        &self.source
    }

    pub fn target(&self) -> &AInfinityStructure {
        &self.target
    }

    /// `f_n`, `1 ≤ n ≤ N`.
    pub fn f(&self, n: usize) -> &GradedMap {
        &self.components[n - 1]
    }

    pub fn components(&self) -> &[GradedMap] {
        &self.components
    }

    /// The coalgebra morphism lifted from the suspended components.
    pub fn bar_form(&self) -> BarMap {
        let sp = self.source.context.bar_powers();
        let target = self.target.context.suspension().complex.space();
        let comps: Vec<Option<GradedMap>> = self
            .components
            .iter()
            .map(|f| Some(suspend_multilinear(f, sp, target)))
            .collect();
        lift_morphism(&self.source.context, &self.target.context, &comps).expect("degree zero")
    }

    /// `F ∘ b_A − b_B ∘ F` through arity `N`.
    pub fn defect(&self) -> BarMap {
        let f = self.bar_form();
        let left = f.compose(&self.source.bar_differential()).expect("matching contexts");
        let right = self.target.bar_differential().compose(&f).expect("matching contexts");
        left.sub(&right).expect("parallel")
    }
}

pub fn check_morphism(f: &AInfinityMorphism) -> bool {
    f.defect().is_zero()
}

/// The class of `m_3(x, y, z)` together with the indeterminacy subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct MasseyClass {
    pub bidegree: Bidegree,
    /// Cycle representatives of the homology basis at `bidegree`.
    pub basis: Vec<SparseVec>,
    /// Coordinates of `[m_3(x,y,z)]` in `basis`.
    pub class: Vec<Scalar>,
    /// Spanning vectors (coordinates in `basis`) of `[m_2(x,·)] + [m_2(·,z)]`.
    pub indeterminacy: Vec<Vec<Scalar>>,
    /// Dimension of the indeterminacy subspace.
    pub indeterminacy_rank: usize,
    /// True iff the class lies outside the indeterminacy.
    pub nonzero: bool,
}

fn homogeneous(space: &Space, v: &[(usize, Scalar)]) -> Option<Bidegree> {
    let mut it = v.iter().map(|(i, _)| space.bidegree(*i));
    let first = it.next()?;
    it.all(|b| b == first).then_some(first)
}

/// The triple product `[m_3(x, y, z)]` for cycles with `[m_2(x,y)] = [m_2(y,z)] = 0`.
///
/// The zero vector is accepted for any argument and gives the zero class.
pub fn massey_triple(a: &AInfinityStructure, x: &[(usize, Scalar)], y: &[(usize, Scalar)], z: &[(usize, Scalar)]) -> Result<MasseyClass> {
    if a.arity() < 3 {
        return Err(Error::TruncationMismatch(3, a.arity()));
    }
    let c = a.complex();
    let space = c.space();
    let field = a.field();
    let d0 = space.dim();
    for (name, v) in [("x", x), ("y", y), ("z", z)] {
        if !c.d().apply(v).is_empty() {
            return Err(Error::Rejected(format!("{name} is not a cycle")));
        }
    }
    let degrees = [homogeneous(space, x), homogeneous(space, y), homogeneous(space, z)];
    let m2 = a.m(2);
    let m3 = a.m(3);
    let pair = |u: &[(usize, Scalar)], v: &[(usize, Scalar)]| m2.apply(&tensor_vectors(field, &[u, v], d0));
    let boundary_check = |u: &[(usize, Scalar)], v: &[(usize, Scalar)], label: &str| -> Result<()> {
        let p = pair(u, v);
        if p.is_empty() {
            return Ok(());
        }
        let at = homogeneous(space, &p).ok_or_else(|| Error::Rejected("inhomogeneous product".into()))?;
        let reps = homology_basis(c)
            .into_iter()
            .find(|h| h.bidegree == at)
            .map(|h| h.representatives)
            .unwrap_or_default();
        let coords = class_coordinates(c, at, &reps, &p).ok_or_else(|| Error::Rejected(format!("{label} is not a cycle")))?;
        if coords.iter().any(|s| !s.is_zero()) {
            let shown: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
            return Err(Error::Rejected(format!("product {label} has nonzero class [{}]", shown.join(", "))));
        }
        Ok(())
    };
    boundary_check(x, y, "m2(x,y)")?;
    boundary_check(y, z, "m2(y,z)")?;
    let value = m3.apply(&tensor_vectors(field, &[x, y, z], d0));
    let at = match degrees {
        [Some(p), Some(q), Some(r)] => Bidegree(p.0 + q.0 + r.0 - 1, p.1 + q.1 + r.1),
        _ => {
            if !value.is_empty() {
                return Err(Error::Rejected("arguments must be homogeneous".into()));
            }
            return Ok(MasseyClass {
                bidegree: Bidegree::ZERO,
                basis: Vec::new(),
                class: Vec::new(),
                indeterminacy: Vec::new(),
                indeterminacy_rank: 0,
                nonzero: false,
            });
        }
    };
    let pieces = homology_basis(c);
    let reps_at = |b: Bidegree| {
        pieces
            .iter()
            .find(|h| h.bidegree == b)
            .map(|h| h.representatives.clone())
            .unwrap_or_default()
    };
    let basis = reps_at(at);
    let class = class_coordinates(c, at, &basis, &value).ok_or_else(|| Error::Rejected("m3(x,y,z) is not a cycle".into()))?;
    let [Some(dx), Some(dy), Some(dz)] = degrees else { unreachable!() };
    let mut indeterminacy = Vec::new();
    for w in reps_at(Bidegree(dy.0 + dz.0 - 1, dy.1 + dz.1)) {
        let v = pair(x, &w);
        indeterminacy.push(class_coordinates(c, at, &basis, &v).ok_or_else(|| Error::Rejected("m2(x,w) is not a cycle".into()))?);
    }
    for w in reps_at(Bidegree(dx.0 + dy.0 - 1, dx.1 + dy.1)) {
        let v = pair(&w, z);
        indeterminacy.push(class_coordinates(c, at, &basis, &v).ok_or_else(|| Error::Rejected("m2(w,z) is not a cycle".into()))?);
    }
    let as_cols = |vs: &[Vec<Scalar>]| -> Vec<SparseVec> {
        vs.iter()
            .map(|v| v.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| (i, s.clone())).collect())
            .collect()
    };
    let indeterminacy_rank = Matrix::from_columns(field, basis.len(), &as_cols(&indeterminacy)).rank();
    let mut with_class = indeterminacy.clone();
    with_class.push(class.clone());
    let nonzero = Matrix::from_columns(field, basis.len(), &as_cols(&with_class)).rank() > indeterminacy_rank;
    Ok(MasseyClass {
        bidegree: at,
        basis,
        class,
        indeterminacy,
        indeterminacy_rank,
        nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DIFFERENTIAL;
    use crate::space::BigradedSpace;

    fn small() -> Complex {
        let f = Field::Rational;
        let s = BigradedSpace::from_triples(f, [("x", 0, 1), ("y", 1, 1), ("z", 1, 0)]).unwrap();
        Complex::new(GradedMap::from_entries(&s, &s, DIFFERENTIAL, [(0, 1, f.from_i64(2))]).unwrap()).unwrap()
    }

    #[test]
    fn suspension_of_differential_is_suspended_differential() {
        let c = small();
        let ctx = BarContext::new(&c, 2).unwrap();
        let b1 = suspend_multilinear(c.d(), ctx.bar_powers(), ctx.suspension().complex.space());
        assert_eq!(&b1, ctx.suspension().complex.d());
        let back = desuspend_multilinear(&b1, ctx.bar_powers(), ctx.plain_powers(), c.space());
        assert_eq!(&back, c.d());
    }

    #[test]
    fn binary_suspension_matches_explicit_formula() {
        let c = small();
        let ctx = BarContext::new(&c, 2).unwrap();
        let f = Field::Rational;
        let plain = ctx.plain_powers();
        let at = |l: &str| plain.get(2).index_of(l).unwrap();
        let mu = GradedMap::from_entries(
            plain.get(2),
            c.space(),
            Bidegree(0, 1),
            [
                (at("x⊗z"), 2, f.from_i64(3)),
                (at("x⊗x"), 0, f.from_i64(-1)),
                (at("y⊗x"), 1, f.from_i64(2)),
                (at("x⊗y"), 1, f.one()),
            ],
        )
        .unwrap();
        let sus = ctx.suspension();
        let sinv2 = sus.s_inv.tensor(&sus.s_inv).unwrap();
        let sign = Scalar::sign(f, mu.total_degree() + 1);
        let explicit = sus.s.compose(&mu.rebase(sinv2.target(), c.space()).unwrap()).unwrap().compose(&sinv2).unwrap().scale(&sign);
        let fast = suspend_multilinear(&mu, ctx.bar_powers(), sus.complex.space());
        assert_eq!(fast.columns(), explicit.columns());
        assert_eq!(fast.bidegree(), explicit.bidegree());
    }

    #[test]
    fn trivial_structure_is_valid() {
        let c = small();
        let a = AInfinityStructure::new(&c, 3, &[]).unwrap();
        assert!(a.is_valid());
        let b = a.bar_differential();
        assert!(b.compose(&b).unwrap().is_zero());
        assert!(check_morphism(&AInfinityMorphism::identity(&a)));
    }

    #[test]
    fn wrong_bidegree_rejected() {
        let c = small();
        let ctx = BarContext::new(&c, 2).unwrap();
        let plain = ctx.plain_powers();
        let f = Field::Rational;
        let bad = GradedMap::from_entries(plain.get(2), c.space(), Bidegree(0, 1), [(plain.get(2).index_of("x⊗z").unwrap(), 2, f.one())]).unwrap();
        assert!(matches!(
            AInfinityStructure::on_context(&ctx, &[c.d().clone(), bad]),
            Err(Error::WrongBidegree { .. })
        ));
    }
}
