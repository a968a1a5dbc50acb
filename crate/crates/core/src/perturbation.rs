//! Strong deformation retracts, contractions, and transfer of A∞-structures
//! through the perturbation lemma applied to bar coalgebras.

use std::sync::Arc;

use serde::Serialize;

use crate::ainfty::{suspend_multilinear, AInfinityMorphism, AInfinityStructure};
use crate::bar::{bar_differential_of_d, is_coalgebra_morphism, is_coderivation, lift_coderivation, lift_morphism, strict_morphism, BarContext, BarMap};
use crate::complex::{map_differential, Complex};
use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::multilinear::tensor_maps;
use crate::space::{same_space, Bidegree};

/// `α : C → D`, `r : D → C` of bidegree `(0,0)` and `H : D → D` of bidegree `(-1,0)`.
#[derive(Clone, Debug)]
pub struct SdrDatum {
    pub small: Complex,
    pub big: Complex,
    pub alpha: GradedMap,
    pub r: GradedMap,
    pub h: GradedMap,
}

fn expect_shape(m: &GradedMap, what: &str, from: &Complex, to: &Complex, bidegree: Bidegree) -> Result<GradedMap> {
    if !same_space(m.source(), from.space()) || !same_space(m.target(), to.space()) {
        return Err(Error::Rejected(format!("{what} runs between the wrong spaces")));
    }
    if m.is_zero() {
        return Ok(GradedMap::zero(from.space(), to.space(), bidegree));
    }
    if m.bidegree() != bidegree {
        return Err(Error::WrongBidegree {
            what: what.into(),
            expected: bidegree,
            found: m.bidegree(),
        });
    }
    Ok(m.clone())
}

impl SdrDatum {
    /// Checks shapes and bidegrees only; identities are checked by [`check_sdr`].
    pub fn new(small: &Complex, big: &Complex, alpha: &GradedMap, r: &GradedMap, h: &GradedMap) -> Result<SdrDatum> {
        Ok(SdrDatum {
            small: small.clone(),
            big: big.clone(),
            alpha: expect_shape(alpha, "α", small, big, Bidegree::ZERO)?,
            r: expect_shape(r, "r", big, small, Bidegree::ZERO)?,
            h: expect_shape(h, "H", big, big, Bidegree(-1, 0))?,
        })
    }

    /// `C = D`, `α = r = 1`, `H = 0`.
    pub fn identity(c: &Complex) -> SdrDatum {
        SdrDatum {
            small: c.clone(),
            big: c.clone(),
            alpha: GradedMap::identity(c.space()),
            r: GradedMap::identity(c.space()),
            h: GradedMap::zero(c.space(), c.space(), Bidegree(-1, 0)),
        }
    }

    /// `1 − α∘r` on `D`.
    pub fn complement(&self) -> GradedMap {
        let ar = self.alpha.compose(&self.r).expect("shapes checked");
        GradedMap::identity(self.big.space()).sub(&ar).expect("same shape")
    }

    pub fn with_homotopy(&self, h: GradedMap) -> Result<SdrDatum> {
        SdrDatum::new(&self.small, &self.big, &self.alpha, &self.r, &h)
    }
}

/// Defect counts (nonzero entries) of every identity; zero means it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SdrReport {
    pub alpha_closed: usize,
    pub r_closed: usize,
    pub retraction: usize,
    pub homotopy: usize,
    pub h_alpha: usize,
    pub r_h: usize,
    pub h_h: usize,
}

impl SdrReport {
    pub fn checks(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("α closed", self.alpha_closed),
            ("r closed", self.r_closed),
            ("r∘α=1", self.retraction),
            ("δ(H)=1−α∘r", self.homotopy),
            ("H∘α=0", self.h_alpha),
            ("r∘H=0", self.r_h),
            ("H∘H=0", self.h_h),
        ]
    }

    pub fn is_sdr(&self) -> bool {
        self.checks()[..4].iter().all(|(_, n)| *n == 0)
    }

    pub fn is_contraction(&self) -> bool {
        self.checks().iter().all(|(_, n)| *n == 0)
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.checks().into_iter().find(|(_, n)| *n != 0).map(|(name, _)| name)
    }
}

pub fn check_sdr(s: &SdrDatum) -> SdrReport {
    let nnz = |m: Result<GradedMap>| m.expect("shapes checked").nnz();
    SdrReport {
        alpha_closed: nnz(map_differential(&s.alpha, &s.small, &s.big)),
        r_closed: nnz(map_differential(&s.r, &s.big, &s.small)),
        retraction: nnz(s.r.compose(&s.alpha).and_then(|ra| ra.sub(&GradedMap::identity(s.small.space())))),
        homotopy: nnz(map_differential(&s.h, &s.big, &s.big).and_then(|dh| dh.sub(&s.complement()))),
        h_alpha: nnz(s.h.compose(&s.alpha)),
        r_h: nnz(s.r.compose(&s.h)),
        h_h: nnz(s.h.compose(&s.h)),
    }
}

/// An SDR datum known to satisfy the three side conditions.
#[derive(Clone, Debug)]
pub struct Contraction {
    datum: SdrDatum,
    report: SdrReport,
}

impl Contraction {
    pub fn new(datum: SdrDatum) -> Result<Contraction> {
        let report = check_sdr(&datum);
        if let Some(failed) = report.first_failure() {
            return Err(Error::NotAContraction(format!("`{failed}` fails")));
        }
        Ok(Contraction { datum, report })
    }

    pub fn identity(c: &Complex) -> Contraction {
        Contraction::new(SdrDatum::identity(c)).expect("identity contraction")
    }

    pub fn datum(&self) -> &SdrDatum {
        &self.datum
    }

    pub fn report(&self) -> &SdrReport {
        &self.report
    }

    pub fn small(&self) -> &Complex {
        &self.datum.small
    }

    pub fn big(&self) -> &Complex {
        &self.datum.big
    }

    pub fn alpha(&self) -> &GradedMap {
        &self.datum.alpha
    }

    pub fn r(&self) -> &GradedMap {
        &self.datum.r
    }

    pub fn h(&self) -> &GradedMap {
        &self.datum.h
    }
}

/// `H' = δ(H)∘H∘δ(H)`, then `H'' = H'∘d∘H'`. The result is re-verified in full.
pub fn repair_to_contraction(datum: &SdrDatum) -> Result<Contraction> {
    let report = check_sdr(datum);
    if !report.is_sdr() {
        return Err(Error::NotAContraction(format!(
            "input is not an SDR datum: `{}` fails",
            report.first_failure().unwrap()
        )));
    }
    let p = map_differential(&datum.h, &datum.big, &datum.big)?;
    let h1 = p.compose(&datum.h)?.compose(&p)?;
    let h2 = h1.compose(datum.big.d())?.compose(&h1)?;
    Contraction::new(datum.with_homotopy(h2)?)
}

/// The three bar maps `B(α)`, `B(r)`, `B(H)` of a contraction at arity `N`.
#[derive(Clone, Debug)]
pub struct BarContraction {
    pub small: Arc<BarContext>,
    pub big: Arc<BarContext>,
    pub alpha: BarMap,
    pub r: BarMap,
    pub h: BarMap,
}

/// `B(H)` on `(SD)^{⊗n}`: `Σ_i 1^{⊗i-1} ⊗ S(H) ⊗ (S(α)S(r))^{⊗n-i}`, where
/// `S(H) = suspend_multilinear(H) = −s H s^{-1}`, so that `δ(B(H)) = 1 − B(α)B(r)`.
pub fn bar_homotopy(c: &Contraction, big: &Arc<BarContext>) -> Result<BarMap> {
    Ok(bar_contraction_on(c, big, None)?.h)
}

/// Builds the bar contraction on a given context for `D` (and optionally `C`).
pub fn bar_contraction_on(c: &Contraction, big: &Arc<BarContext>, small: Option<&Arc<BarContext>>) -> Result<BarContraction> {
    if big.complex() != c.big() {
        return Err(Error::Rejected("bar context does not carry the contraction's big complex".into()));
    }
    let n = big.arity();
    let small = match small {
        Some(s) => s.clone(),
        None => BarContext::new(c.small(), n)?,
    };
    let sd = big.bar_powers();
    let sc = small.bar_powers();
    let sd_space = big.suspension().complex.space();
    let sc_space = small.suspension().complex.space();
    let s_alpha = suspend_multilinear(c.alpha(), sc, sd_space);
    let s_r = suspend_multilinear(c.r(), sd, sc_space);
    let s_h = suspend_multilinear(c.h(), sd, sd_space);
    let proj = s_alpha.compose(&s_r)?;
    let mut proj_powers = vec![proj.clone()];
    for _ in 2..n {
        let next = tensor_maps(&[proj_powers.last().unwrap(), &proj], sd, sd);
        proj_powers.push(next);
    }
    let mut blocks = Vec::new();
    for len in 1..=n {
        let mut acc: Option<GradedMap> = None;
        for i in 1..=len {
            let id;
            let mut parts: Vec<&GradedMap> = Vec::new();
            if i > 1 {
                id = GradedMap::identity(sd.get(i - 1));
                parts.push(&id);
            }
            parts.push(&s_h);
            if len > i {
                parts.push(&proj_powers[len - i - 1]);
            }
            let term = tensor_maps(&parts, sd, sd);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        blocks.push(((len, len), acc.unwrap()));
    }
    let h = BarMap::from_blocks(big, big, -1, blocks)?;
    Ok(BarContraction {
        alpha: strict_morphism(&small, big, &s_alpha)?,
        r: strict_morphism(big, &small, &s_r)?,
        small,
        big: big.clone(),
        h,
    })
}

/// Output of [`transfer`]. Bar maps live on the contexts of `C` and `D` at arity `N`.
#[derive(Clone, Debug)]
pub struct TransferResult {
    pub structure: AInfinityStructure,
    pub alpha: AInfinityMorphism,
    pub r: AInfinityMorphism,
    /// The perturbed differential `b_C`.
    pub bar_differential: BarMap,
    pub alpha_bar: BarMap,
    pub r_bar: BarMap,
    /// The perturbed homotopy, normalised so that `δ(B(H)^∞) = 1 − B(α)^∞ B(r)^∞`.
    pub homotopy_bar: BarMap,
    /// `Σ = t + t h t + … + (t h)^{p-1} t` at the stable stage.
    pub sigma: BarMap,
    /// Number of nonzero terms `t^{(p)}` in `Σ`.
    pub depth: usize,
    pub unperturbed: BarContraction,
    /// `b_D` of the input structure.
    pub source_differential: BarMap,
}

/// Transfers `a` (on `D`) along `c` to `C` through arity `n ≤` the arity of `a`.
///
/// The recursion is run with `h = −B(H)`, i.e. with blocks built from `+sHs^{-1}`:
/// the standard lemma needs `δ(h) = αr − 1`, while `B(H)` as normalised here has
/// `δ(B(H)) = 1 − B(α)B(r)`.
pub fn transfer(c: &Contraction, a: &AInfinityStructure, n: usize) -> Result<TransferResult> {
    let a = if n == a.arity() { a.clone() } else { a.truncate(n)? };
    if a.complex() != c.big() {
        return Err(Error::Rejected("structure does not live on the contraction's big complex".into()));
    }
    let big = a.context().clone();
    let bars = bar_contraction_on(c, &big, None)?;
    let small = bars.small.clone();
    let b_d = a.bar_differential();
    let d_d = bar_differential_of_d(&big);
    let t = b_d.sub(&d_d)?;
    if !t.lowers_filtration() {
        return Err(Error::Rejected("perturbation does not lower arity".into()));
    }
    let h = bars.h.neg();
    let th = t.compose(&h)?;
    let mut sigma = BarMap::zero(&big, &big, 1);
    let mut term = t.clone();
    let mut depth = 0;
    while !term.is_zero() {
        depth += 1;
        sigma = sigma.add(&term)?;
        if depth >= n {
            break;
        }
        term = th.compose(&term)?;
    }
    debug_assert!(term.is_zero() || depth < n);
    let sigma_alpha = sigma.compose(&bars.alpha)?;
    let sigma_h = sigma.compose(&h)?;
    let b_c = bar_differential_of_d(&small).add(&bars.r.compose(&sigma_alpha)?)?;
    let alpha_inf = bars.alpha.add(&h.compose(&sigma_alpha)?)?;
    let r_inf = bars.r.add(&bars.r.compose(&sigma_h)?)?;
    let h_inf = h.add(&h.compose(&sigma_h)?)?;
    let structure = AInfinityStructure::from_bar(&small, &b_c)?;
    let alpha = AInfinityMorphism::from_bar(&structure, &a, &alpha_inf)?;
    let r = AInfinityMorphism::from_bar(&a, &structure, &r_inf)?;
    Ok(TransferResult {
        structure,
        alpha,
        r,
        bar_differential: b_c,
        alpha_bar: alpha_inf,
        r_bar: r_inf,
        homotopy_bar: h_inf.neg(),
        sigma,
        depth,
        unperturbed: bars,
        source_differential: b_d,
    })
}

/// Named defect counts for every postcondition of [`transfer`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub arity: usize,
    pub depth: usize,
    pub checks: Vec<(String, usize)>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, n)| *n == 0)
    }

    pub fn defect(&self, name: &str) -> Option<usize> {
        self.checks.iter().find(|(k, _)| k == name).map(|(_, n)| *n)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|(_, n)| *n != 0).map(|(k, _)| k.as_str())
    }
}

/// Which postconditions to evaluate; the homotopy identity is the expensive one.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub homotopy: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { homotopy: true }
    }
}

pub fn verify_transfer(res: &TransferResult, options: VerifyOptions) -> Result<TransferReport> {
    let s = &res.structure;
    let b_c = &res.bar_differential;
    let b_d = &res.source_differential;
    let mut checks: Vec<(String, usize)> = Vec::new();
    let stasheff: usize = (1..=s.arity()).map(|n| s.stasheff_defect(n).nnz()).sum();
    checks.push(("stasheff identities".into(), stasheff));
    checks.push(("b_C∘b_C=0".into(), b_c.compose(b_c)?.nnz()));
    checks.push(("m1=d_C".into(), s.m(1).sub(s.complex().d())?.nnz()));
    let lifted = lift_coderivation(b_c.source(), &b_c.corestriction())?;
    checks.push(("b_C is a coderivation".into(), lifted.sub(b_c)?.nnz()));
    let id_c = BarMap::identity(b_c.source());
    checks.push(("r∞∘α∞=1".into(), res.r_bar.compose(&res.alpha_bar)?.sub(&id_c)?.nnz()));
    checks.push((
        "α∞ intertwines".into(),
        res.alpha_bar.compose(b_c)?.sub(&b_d.compose(&res.alpha_bar)?)?.nnz(),
    ));
    checks.push((
        "r∞ intertwines".into(),
        res.r_bar.compose(b_d)?.sub(&b_c.compose(&res.r_bar)?)?.nnz(),
    ));
    let morphism_defect = |f: &BarMap| -> Result<usize> {
        let lift = lift_morphism(f.source(), f.target(), &f.corestriction())?;
        Ok(lift.sub(f)?.nnz())
    };
    checks.push(("α∞ is a coalgebra morphism".into(), morphism_defect(&res.alpha_bar)?));
    checks.push(("r∞ is a coalgebra morphism".into(), morphism_defect(&res.r_bar)?));
    if options.homotopy {
        let id_d = BarMap::identity(b_d.source());
        let rhs = id_d.sub(&res.alpha_bar.compose(&res.r_bar)?)?;
        let lhs = res.homotopy_bar.differential(b_d, b_d)?;
        checks.push(("δ(H∞)=1−α∞∘r∞".into(), lhs.sub(&rhs)?.nnz()));
    }
    debug_assert!(is_coderivation(b_c) == (checks[3].1 == 0));
    debug_assert!(is_coalgebra_morphism(&res.alpha_bar) == (checks[7].1 == 0));
    Ok(TransferReport {
        arity: s.arity(),
        depth: res.depth,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DIFFERENTIAL;
    use crate::scalar::Field;
    use crate::space::BigradedSpace;

    fn acyclic() -> (Complex, Complex) {
        let f = Field::Rational;
        let s = BigradedSpace::from_triples(f, [("x", 0, 0), ("y", 1, 0)]).unwrap();
        let d = Complex::new(GradedMap::from_entries(&s, &s, DIFFERENTIAL, [(0, 1, f.one())]).unwrap()).unwrap();
        let zero = Complex::trivial(&BigradedSpace::zero(f));
        (zero, d)
    }

    fn pair_datum(scale: i64) -> SdrDatum {
        let (c, d) = acyclic();
        let f = Field::Rational;
        let h = GradedMap::from_entries(d.space(), d.space(), Bidegree(-1, 0), [(1, 0, f.from_i64(scale))]).unwrap();
        SdrDatum::new(
            &c,
            &d,
            &GradedMap::zero(c.space(), d.space(), Bidegree::ZERO),
            &GradedMap::zero(d.space(), c.space(), Bidegree::ZERO),
            &h,
        )
        .unwrap()
    }

    #[test]
    fn acyclic_pair_is_a_contraction() {
        let report = check_sdr(&pair_datum(1));
        assert!(report.is_contraction());
        let bad = check_sdr(&pair_datum(2));
        assert_eq!(bad.homotopy, 2);
        assert!(!bad.is_sdr());
        assert!(repair_to_contraction(&pair_datum(2)).is_err());
    }

    #[test]
    fn repair_fixes_pair_unchanged() {
        let datum = pair_datum(1);
        let c = repair_to_contraction(&datum).unwrap();
        assert_eq!(c.h(), &datum.h);
    }

    #[test]
    fn identity_transfer_returns_input() {
        let (_, d) = acyclic();
        let a = AInfinityStructure::new(&d, 3, &[]).unwrap();
        let c = Contraction::identity(&d);
        let res = transfer(&c, &a, 3).unwrap();
        assert_eq!(res.depth, 0);
        for n in 1..=3 {
            assert_eq!(res.structure.m(n).columns(), a.m(n).columns());
        }
        assert!(verify_transfer(&res, VerifyOptions::default()).unwrap().passed());
    }

    #[test]
    fn bar_homotopy_contracts() {
        let (_, d) = acyclic();
        let c = Contraction::new(pair_datum(1)).unwrap();
        let ctx = BarContext::new(&d, 3).unwrap();
        let bars = bar_contraction_on(&c, &ctx, None).unwrap();
        let dd = bar_differential_of_d(&ctx);
        let lhs = bars.h.differential(&dd, &dd).unwrap();
        let rhs = BarMap::identity(&ctx).sub(&bars.alpha.compose(&bars.r).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(bars.h.compose(&bars.h).unwrap().is_zero());
    }
}
