//! Independent reference computations, built only from generic composition and
//! the Koszul-signed tensor product of `GradedMap`.
#![allow(dead_code)]

use hpt_core::ainfty::AInfinityStructure;
use hpt_core::perturbation::{Contraction, TransferResult};
use hpt_core::{suspend, GradedMap, Scalar, Space, Suspension};

/// `s ∘ f ∘ (s^{-1})^{⊗i}` with sign `(-1)^{r+s+i-1}`, the desuspensions tensored generically.
pub fn suspend_generic(f: &GradedMap, arity: usize, src: &Suspension, tgt: &Suspension) -> GradedMap {
    let inv: Vec<&GradedMap> = std::iter::repeat_n(&src.s_inv, arity).collect();
    let desusp = GradedMap::tensor_all(&inv).unwrap();
    let f = f.rebase(desusp.target(), f.target()).unwrap();
    let out = tgt.s.compose(&f).unwrap().compose(&desusp).unwrap();
    let b = f.bidegree();
    if (b.0 + b.1 + arity as i64 - 1).rem_euclid(2) == 1 {
        out.neg()
    } else {
        out
    }
}

/// Inverse of [`suspend_generic`].
pub fn desuspend_generic(b: &GradedMap, arity: usize, src: &Suspension, tgt: &Suspension) -> GradedMap {
    let s: Vec<&GradedMap> = std::iter::repeat_n(&src.s, arity).collect();
    let susp = GradedMap::tensor_all(&s).unwrap();
    let b = b.rebase(susp.target(), b.target()).unwrap();
    // (s^{-1})^{⊗i} ∘ s^{⊗i} = (-1)^{i(i-1)/2}
    let koszul = (arity * (arity.saturating_sub(1)) / 2) as i64;
    let out = tgt.s_inv.compose(&b).unwrap().compose(&susp).unwrap();
    let bd = out.bidegree();
    let global = bd.0 + bd.1 + arity as i64 - 1 + koszul;
    if global.rem_euclid(2) == 1 {
        out.neg()
    } else {
        out
    }
}

/// Structural comparison up to the concrete (but equally shaped) source and target spaces.
pub fn same_map(a: &GradedMap, b: &GradedMap) -> bool {
    match a.rebase(b.source(), b.target()) {
        Ok(a) => a.sub(b).map(|d| d.is_zero()).unwrap_or(false),
        Err(_) => a.is_zero() && b.is_zero(),
    }
}

/// `r ∘ m_2 ∘ (α ⊗ α)`.
pub fn transferred_m2(c: &Contraction, a: &AInfinityStructure) -> GradedMap {
    let aa = c.alpha().tensor(c.alpha()).unwrap();
    let m2 = a.m(2).rebase(aa.target(), a.m(2).target()).unwrap();
    c.r().compose(&m2).unwrap().compose(&aa).unwrap()
}

/// `Sr ∘ [b_3 + b_2(h b_2 ⊗ 1) + b_2(1 ⊗ h b_2)] ∘ (Sα)^{⊗3}` with `h = s H s^{-1}`,
/// for a source whose higher operations above arity 3 do not enter.
pub fn transferred_b3(c: &Contraction, a: &AInfinityStructure) -> GradedMap {
    let sc = suspend(c.small());
    let sd = suspend(c.big());
    let b2 = suspend_generic(a.m(2), 2, &sd, &sd);
    let b3 = suspend_generic(a.m(3), 3, &sd, &sd);
    let s_alpha = sd.s.compose(c.alpha()).unwrap().compose(&sc.s_inv).unwrap();
    let s_r = sc.s.compose(c.r()).unwrap().compose(&sd.s_inv).unwrap();
    let h = sd.s.compose(c.h()).unwrap().compose(&sd.s_inv).unwrap();
    let one = GradedMap::identity(sd.complex.space());
    let hb2 = h.compose(&b2).unwrap();
    let left = hb2.tensor(&one).unwrap();
    let right = one.tensor(&hb2).unwrap();
    let b2l = b2.rebase(left.target(), b2.target()).unwrap();
    let b3 = b3.rebase(left.source(), b3.target()).unwrap();
    let inner = b3
        .add(&b2l.compose(&left).unwrap())
        .unwrap()
        .add(&b2l.compose(&right.rebase(left.source(), left.target()).unwrap()).unwrap())
        .unwrap();
    let cube = GradedMap::tensor_all(&[&s_alpha, &s_alpha, &s_alpha]).unwrap();
    let inner = inner.rebase(cube.target(), inner.target()).unwrap();
    s_r.compose(&inner).unwrap().compose(&cube).unwrap()
}

/// `Σ r†_{n+1+m} ∘ (1^{⊗n} ⊗ b^D_s ⊗ 1^{⊗m}) ∘ (α†_{i_1} ⊗ … ⊗ α†_{i_k})` over
/// `i_1+…+i_k = u`, `n+s+m = k`, with `r†`, `α†` the corestrictions of `r∞`, `α∞`.
pub fn composed_b(res: &TransferResult, input: &AInfinityStructure, u: usize) -> GradedMap {
    let alpha = res.alpha_bar.corestriction();
    let r = res.r_bar.corestriction();
    let b_d = input.b_form();
    let sd = res.alpha_bar.target().suspension().complex.space().clone();
    let sc = res.alpha_bar.source().suspension().complex.space().clone();
    let one = GradedMap::identity(&sd);
    let source = Space::clone(res.alpha_bar.source().bar_powers().get(u));
    let mut acc = GradedMap::zero(&source, &sc, hpt_core::Bidegree(1, 0));
    let max = res.structure.arity();
    for k in 1..=u {
        for parts in compositions(u, k, max) {
            let factors: Option<Vec<&GradedMap>> = parts.iter().map(|&i| alpha[i - 1].as_ref()).collect();
            let Some(factors) = factors else { continue };
            let lower = GradedMap::tensor_all(&factors).unwrap();
            for s in 1..=k {
                if s > b_d.len() || b_d[s - 1].is_zero() {
                    continue;
                }
                for n in 0..=(k - s) {
                    let m = k - s - n;
                    let Some(rc) = r.get(n + m).and_then(|x| x.as_ref()) else { continue };
                    let mut pieces: Vec<&GradedMap> = vec![&one; n];
                    pieces.push(&b_d[s - 1]);
                    pieces.extend(std::iter::repeat_n(&one, m));
                    let mid = GradedMap::tensor_all(&pieces).unwrap();
                    let mid = mid.rebase(lower.target(), mid.target()).unwrap();
                    let rc = rc.rebase(mid.target(), rc.target()).unwrap();
                    let term = rc.compose(&mid).unwrap().compose(&lower).unwrap();
                    let term = term.rebase(&source, &sc).unwrap();
                    acc = acc.add(&term).unwrap();
                }
            }
        }
    }
    acc
}

/// Ordered decompositions of `total` into `parts` positive integers, each at most `max`.
pub fn compositions(total: usize, parts: usize, max: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=max.min(total) {
        for mut rest in compositions(total - first, parts - 1, max) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn q(n: i64) -> Scalar {
    hpt_core::Field::Rational.from_i64(n)
}
