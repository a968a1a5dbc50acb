//! Compatibility of transfer with maps of contractions that intertwine the data.

use serde::Serialize;

use crate::ainfty::{suspend_multilinear, AInfinityStructure};
use crate::bar::{strict_morphism, BarMap};
use crate::complex::{is_closed, Complex, DIFFERENTIAL};
use crate::error::Result;
use crate::map::{GradedMap, SparseVec};
use crate::perturbation::{transfer, Contraction, SdrDatum, TransferResult};
use crate::scalar::Scalar;
use crate::space::{BasisElement, Bidegree, BigradedSpace, Space};

/// A comparison between two contractions carrying structures on their big complexes.
#[derive(Clone, Debug)]
pub struct ComparisonPair {
    pub source: Contraction,
    pub target: Contraction,
    pub source_structure: AInfinityStructure,
    pub target_structure: AInfinityStructure,
    /// `φ_D : D → D'`.
    pub big_map: GradedMap,
    /// `φ_C : C → C'`.
    pub small_map: GradedMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NaturalityVerdict {
    Natural,
    HypothesesNotSatisfied { first: String },
    NotNatural { first: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    pub arity: usize,
    pub hypotheses: Vec<(String, usize)>,
    /// Empty when a hypothesis fails.
    pub conclusions: Vec<(String, usize)>,
    pub verdict: NaturalityVerdict,
}

fn power_of(f: &GradedMap, n: usize, source: &Space, target: &Space) -> Result<GradedMap> {
    let maps = vec![f; n];
    GradedMap::tensor_all(&maps)?.rebase(source, target)
}

fn defect(left: Result<GradedMap>, right: Result<GradedMap>) -> usize {
    match (left, right) {
        (Ok(l), Ok(r)) => l.sub(&r).map_or(usize::MAX, |m| m.nnz()),
        _ => usize::MAX,
    }
}

fn first_block(name: &str, diff: &BarMap) -> (String, usize) {
    match diff.first_nonzero_block() {
        Some((j, k)) => (format!("{name} at block {j}->{k}"), diff.nnz()),
        None => (name.to_string(), 0),
    }
}

/// Checks every hypothesis on `pair` through arity `n`; if all hold, transfers
/// both structures and checks that `φ_C` intertwines the results and that the
/// bar forms of `φ` conjugate `α∞` and `r∞` into each other.
pub fn naturality_check(pair: &ComparisonPair, n: usize) -> Result<NaturalityReport> {
    let (c, c2) = (&pair.source, &pair.target);
    let (a, a2) = (pair.source_structure.truncate(n)?, pair.target_structure.truncate(n)?);
    let (phi_d, phi_c) = (&pair.big_map, &pair.small_map);
    let mut hypotheses: Vec<(String, usize)> = Vec::new();
    let homogeneous = |m: &GradedMap| usize::from(!m.is_zero() && m.bidegree() != Bidegree::ZERO);
    hypotheses.push(("φ_D of bidegree (0,0)".into(), homogeneous(phi_d)));
    hypotheses.push(("φ_C of bidegree (0,0)".into(), homogeneous(phi_c)));
    hypotheses.push(("φ_D closed".into(), usize::from(!is_closed(phi_d, c.big(), c2.big())?)));
    hypotheses.push(("φ_C closed".into(), usize::from(!is_closed(phi_c, c.small(), c2.small())?)));
    hypotheses.push(("φ_D∘α = α′∘φ_C".into(), defect(phi_d.compose(c.alpha()), c2.alpha().compose(phi_c))));
    hypotheses.push(("φ_C∘r = r′∘φ_D".into(), defect(phi_c.compose(c.r()), c2.r().compose(phi_d))));
    hypotheses.push(("φ_D∘H = H′∘φ_D".into(), defect(phi_d.compose(c.h()), c2.h().compose(phi_d))));
    for k in 2..=n {
        let left = phi_d.compose(a.m(k));
        let right = power_of(phi_d, k, a.m(k).source(), a2.m(k).source()).and_then(|p| a2.m(k).compose(&p));
        hypotheses.push((format!("φ_D intertwines m{k}"), defect(left, right)));
    }
    if let Some((name, _)) = hypotheses.iter().find(|(_, d)| *d != 0) {
        let first = name.clone();
        return Ok(NaturalityReport {
            arity: n,
            hypotheses,
            conclusions: Vec::new(),
            verdict: NaturalityVerdict::HypothesesNotSatisfied { first },
        });
    }
    let t = transfer(c, &a, n)?;
    let t2 = transfer(c2, &a2, n)?;
    let conclusions = conclusions(&t, &t2, phi_d, phi_c)?;
    let verdict = match conclusions.iter().find(|(_, d)| *d != 0) {
        Some((name, _)) => NaturalityVerdict::NotNatural { first: name.clone() },
        None => NaturalityVerdict::Natural,
    };
    Ok(NaturalityReport {
        arity: n,
        hypotheses,
        conclusions,
        verdict,
    })
}

fn conclusions(t: &TransferResult, t2: &TransferResult, phi_d: &GradedMap, phi_c: &GradedMap) -> Result<Vec<(String, usize)>> {
    let (s, s2) = (&t.structure, &t2.structure);
    let mut out = Vec::new();
    for k in 1..=s.arity() {
        let left = phi_c.compose(s.m(k));
        let right = power_of(phi_c, k, s.m(k).source(), s2.m(k).source()).and_then(|p| s2.m(k).compose(&p));
        let d = defect(left, right);
        out.push((format!("φ_C intertwines transferred m{k}"), d));
    }
    let (ctx_c, ctx_d) = (t.alpha_bar.source(), t.alpha_bar.target());
    let (ctx_c2, ctx_d2) = (t2.alpha_bar.source(), t2.alpha_bar.target());
    let lift = |f: &GradedMap, from: &std::sync::Arc<crate::bar::BarContext>, to: &std::sync::Arc<crate::bar::BarContext>| {
        strict_morphism(from, to, &suspend_multilinear(f, from.bar_powers(), to.suspension().complex.space()))
    };
    let b_phi_d = lift(phi_d, ctx_d, ctx_d2)?;
    let b_phi_c = lift(phi_c, ctx_c, ctx_c2)?;
    let alpha = b_phi_d.compose(&t.alpha_bar)?.sub(&t2.alpha_bar.compose(&b_phi_c)?)?;
    out.push(first_block("B(φ_D)∘α∞ = α′∞∘B(φ_C)", &alpha));
    let r = b_phi_c.compose(&t.r_bar)?.sub(&t2.r_bar.compose(&b_phi_d)?)?;
    out.push(first_block("B(φ_C)∘r∞ = r′∞∘B(φ_D)", &r));
    Ok(out)
}

/// The acyclic complex `x → y`, `y' → z` with `x` at `at`, and its contraction to
/// zero with free parameter `t`: `H(y) = x`, `H(y') = −t x`, `H(z) = y' + t y`.
fn acyclic_block(at: Bidegree, t: &Scalar) -> (Vec<(i64, i64)>, Vec<SparseVec>, Vec<SparseVec>) {
    let f = t.field();
    let Bidegree(p, w) = at;
    let bidegrees = vec![(p, w), (p + 1, w), (p + 1, w), (p + 2, w)];
    let d = vec![vec![(1, f.one())], Vec::new(), vec![(3, f.one())], Vec::new()];
    let mut h_y2 = Vec::new();
    if !t.is_zero() {
        h_y2.push((0, -t));
    }
    let mut h_z = vec![(1, t.clone()), (2, f.one())];
    h_z.retain(|(_, c)| !c.is_zero());
    let h = vec![Vec::new(), vec![(0, f.one())], h_y2, h_z];
    (bidegrees, d, h)
}

/// `D ⊕ E` with `E` the acyclic block at `at`; the contraction and structure are
/// extended by zero on `E`, except `H_t` on `E`. Returns the extended pair and
/// the inclusion `D → D ⊕ E`.
pub fn extend_by_acyclic(c: &Contraction, a: &AInfinityStructure, at: Bidegree, t: &Scalar) -> Result<(Contraction, AInfinityStructure, GradedMap)> {
    let d = c.big();
    let field = d.space().field();
    let n0 = d.dim();
    let (bidegrees, d_e, h_e) = acyclic_block(at, t);
    let mut basis = d.space().basis();
    for (i, (p, w)) in bidegrees.iter().enumerate() {
        let mut name = format!("k{i}");
        while d.space().index_of(&name).is_some() {
            name.push('\'');
        }
        basis.push(BasisElement {
            name,
            degree: *p,
            weight: *w,
        });
    }
    let space = BigradedSpace::new(field, basis)?;
    let shift = |v: &SparseVec| -> SparseVec { v.iter().map(|(i, x)| (i + n0, x.clone())).collect() };
    let mut d_cols: Vec<SparseVec> = d.d().columns().to_vec();
    d_cols.extend(d_e.iter().map(shift));
    let big = Complex::new(GradedMap::from_columns(&space, &space, DIFFERENTIAL, d_cols)?)?;
    let mut h_cols: Vec<SparseVec> = c.h().columns().to_vec();
    h_cols.extend(h_e.iter().map(shift));
    let mut r_cols: Vec<SparseVec> = c.r().columns().to_vec();
    r_cols.extend(std::iter::repeat(Vec::new()).take(4));
    let small = c.small();
    let alpha = GradedMap::from_columns(small.space(), &space, Bidegree::ZERO, c.alpha().columns().to_vec())?;
    let r = GradedMap::from_columns(&space, small.space(), Bidegree::ZERO, r_cols)?;
    let h = GradedMap::from_columns(&space, &space, Bidegree(-1, 0), h_cols)?;
    let contraction = Contraction::new(SdrDatum::new(small, &big, &alpha, &r, &h)?)?;
    let probe = AInfinityStructure::new(&big, a.arity(), &[])?;
    let powers = probe.context().plain_powers();
    let old = a.context().plain_powers();
    let mut ops = vec![big.d().clone()];
    for k in 2..=a.arity() {
        let src = powers.get(k);
        let cols = (0..src.dim())
            .map(|x| {
                let factors = src.split_index(x);
                if factors.iter().all(|&i| i < n0) {
                    a.m(k).column(old.get(k).join_index(&factors)).to_vec()
                } else {
                    Vec::new()
                }
            })
            .collect();
        ops.push(GradedMap::from_columns(src, &space, a.m(k).bidegree(), cols)?);
    }
    let structure = AInfinityStructure::on_context(probe.context(), &ops)?;
    let inclusion = GradedMap::from_columns(
        d.space(),
        &space,
        Bidegree::ZERO,
        (0..n0).map(|i| vec![(i, field.one())]).collect(),
    )?;
    Ok((contraction, structure, inclusion))
}

/// `φ_D` the inclusion of `D` into `D ⊕ E`, `φ_C` the identity.
pub fn inclusion_pair(c: &Contraction, a: &AInfinityStructure, at: Bidegree, t: &Scalar) -> Result<ComparisonPair> {
    let (target, target_structure, big_map) = extend_by_acyclic(c, a, at, t)?;
    Ok(ComparisonPair {
        source: c.clone(),
        target,
        source_structure: a.clone(),
        target_structure,
        big_map,
        small_map: GradedMap::identity(c.small().space()),
    })
}

fn weight_scaling(space: &Space, lambda: &Scalar) -> GradedMap {
    let inv = lambda.inv().expect("nonzero scale");
    let cols = (0..space.dim())
        .map(|i| {
            let w = space.bidegree(i).1;
            let base = if w >= 0 { lambda } else { &inv };
            let mut x = lambda.field().one();
            for _ in 0..w.unsigned_abs() {
                x = &x * base;
            }
            vec![(i, x)]
        })
        .collect();
    GradedMap::from_columns(space, space, Bidegree::ZERO, cols).expect("diagonal")
}

/// `φ` multiplies weight-`w` elements by `λ^w` on both `D` and `C`; every
/// structure map preserves weight, so the data are intertwined.
pub fn weight_scaling_pair(c: &Contraction, a: &AInfinityStructure, lambda: &Scalar) -> ComparisonPair {
    ComparisonPair {
        source: c.clone(),
        target: c.clone(),
        source_structure: a.clone(),
        target_structure: a.clone(),
        big_map: weight_scaling(c.big().space(), lambda),
        small_map: weight_scaling(c.small().space(), lambda),
    }
}

/// Two extensions of the same data by the acyclic block, with homotopy
/// parameters `t ≠ t'`, compared by the identity: products, `α`, `r` are
/// intertwined but `H` is not.
pub fn homotopy_mismatch_pair(c: &Contraction, a: &AInfinityStructure, at: Bidegree, t: &Scalar, t2: &Scalar) -> Result<ComparisonPair> {
    let (source, source_structure, _) = extend_by_acyclic(c, a, at, t)?;
    let (target, target_structure, _) = extend_by_acyclic(c, a, at, t2)?;
    Ok(ComparisonPair {
        big_map: GradedMap::identity(source.big().space()),
        small_map: GradedMap::identity(source.small().space()),
        source,
        target,
        source_structure,
        target_structure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{gaussian_contraction, massey_instance};
    use crate::scalar::Field;

    fn massey() -> (Contraction, AInfinityStructure) {
        let (d, mu, ..) = massey_instance(Field::Rational).unwrap();
        let a = AInfinityStructure::from_dga(&d, &mu, 3).unwrap();
        (gaussian_contraction(&d).unwrap(), a)
    }

    #[test]
    fn identity_is_natural() {
        let (c, a) = massey();
        let f = Field::Rational;
        let pair = weight_scaling_pair(&c, &a, &f.one());
        assert_eq!(naturality_check(&pair, 3).unwrap().verdict, NaturalityVerdict::Natural);
    }

    #[test]
    fn inclusion_into_acyclic_extension_is_natural() {
        let (c, a) = massey();
        let f = Field::Rational;
        let pair = inclusion_pair(&c, &a, Bidegree(1, 0), &f.from_i64(2)).unwrap();
        let report = naturality_check(&pair, 3).unwrap();
        assert_eq!(report.verdict, NaturalityVerdict::Natural, "{report:?}");
    }

    #[test]
    fn mismatched_homotopy_is_a_hypothesis_failure() {
        let (c, a) = massey();
        let f = Field::Rational;
        let pair = homotopy_mismatch_pair(&c, &a, Bidegree(0, 0), &f.zero(), &f.one()).unwrap();
        let report = naturality_check(&pair, 3).unwrap();
        assert_eq!(
            report.verdict,
            NaturalityVerdict::HypothesesNotSatisfied {
                first: "φ_D∘H = H′∘φ_D".into()
            }
        );
    }
}
