//! The recursion must run with `−B(H)`: with `B(H)` as built (so that
//! `δ(B(H)) = 1 − B(α)B(r)`), the literal `+B(H)` recursion breaks `b_C² = 0`
//! as soon as the small complex is not minimal.

use hpt_core::ainfty::AInfinityStructure;
use hpt_core::bar::{bar_differential_of_d, BarMap};
use hpt_core::factory::{gaussian_reduction, massey_instance};
use hpt_core::perturbation::{bar_contraction_on, transfer};
use hpt_core::Field;

fn perturbed_differential(sign: i64) -> (BarMap, BarMap) {
    let (d, mu, ..) = massey_instance(Field::Rational).unwrap();
    let a = AInfinityStructure::from_dga(&d, &mu, 4).unwrap();
    // one elimination step leaves a small complex with nonzero differential
    let c = gaussian_reduction(&d, 1).unwrap();
    assert!(!c.small().d().is_zero());
    let bars = bar_contraction_on(&c, a.context(), None).unwrap();
    let t = a.bar_differential().sub(&bar_differential_of_d(a.context())).unwrap();
    let h = if sign > 0 { bars.h.clone() } else { bars.h.neg() };
    let th = t.compose(&h).unwrap();
    let mut sigma = t.clone();
    let mut term = t.clone();
    for _ in 1..4 {
        term = th.compose(&term).unwrap();
        sigma = sigma.add(&term).unwrap();
    }
    let b_c = bar_differential_of_d(&bars.small)
        .add(&bars.r.compose(&sigma).unwrap().compose(&bars.alpha).unwrap())
        .unwrap();
    let reference = transfer(&c, &a, 4).unwrap().bar_differential;
    (b_c, reference)
}

#[test]
fn negated_homotopy_reproduces_transfer() {
    let (b_c, reference) = perturbed_differential(-1);
    assert_eq!(b_c, reference);
    assert!(b_c.compose(&b_c).unwrap().is_zero());
}

#[test]
fn literal_homotopy_sign_breaks_square_zero() {
    let (b_c, _) = perturbed_differential(1);
    let square = b_c.compose(&b_c).unwrap();
    assert!(!square.is_zero());
}
