//! One PASS/FAIL line per acceptance criterion, each with its time budget.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use common::{composed_b, same_map, transferred_b3, transferred_m2};
use hpt_core::ainfty::{massey_triple, AInfinityStructure};
use hpt_core::bar::BarMap;
use hpt_core::factory::random::{nonzero_scalar, random_complex, random_dga, random_map, random_operations, random_sdr, rng};
use hpt_core::factory::{massey_instance, random_suite, SuiteInstance};
use hpt_core::homology::{class_coordinates, homology_basis};
use hpt_core::interchange::Document;
use hpt_core::naturality::{homotopy_mismatch_pair, inclusion_pair, naturality_check, weight_scaling_pair, ComparisonPair, NaturalityVerdict};
use hpt_core::perturbation::{repair_to_contraction, transfer, verify_transfer, Contraction, VerifyOptions};
use hpt_core::{map_differential, tensor_complex, Bidegree, Complex, Field, GradedMap, Scalar};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion(n: usize, title: &str, budget: f64, f: impl FnOnce() -> Outcome) -> bool {
    let started = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f));
    let secs = started.elapsed().as_secs_f64();
    let (mut ok, mut detail) = match result {
        Ok(Ok(d)) => (true, d),
        Ok(Err(e)) => (false, e),
        Err(p) => (
            false,
            p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()),
        ),
    };
    if secs >= budget {
        ok = false;
        detail = format!("{detail}; over budget");
    }
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {n}: {title} [{detail}] ({secs:.2} s, budget {budget} s)");
    ok
}

fn field_for(i: usize) -> Field {
    match i % 4 {
        0 | 1 => Field::Rational,
        2 => Field::prime(2).unwrap(),
        _ => Field::prime(7).unwrap(),
    }
}

/// Mostly the bidegree separating a random source and target element, so the map has room.
fn random_bidegree(g: &mut impl Rng, from: &Complex, to: &Complex) -> Bidegree {
    if g.gen_bool(0.8) {
        let x = from.space().bidegree(g.gen_range(0..from.dim()));
        let y = to.space().bidegree(g.gen_range(0..to.dim()));
        Bidegree(y.0 - x.0, y.1 - x.1)
    } else {
        Bidegree(g.gen_range(-2..=2), g.gen_range(-2..=2))
    }
}

fn weight_range(i: usize) -> std::ops::RangeInclusive<i64> {
    match i % 3 {
        0 => 0..=0,
        1 => -1..=1,
        _ => -2..=2,
    }
}

fn sign_calculus() -> Outcome {
    let mut nonzero = 0;
    for i in 0..200 {
        let field = field_for(i);
        let weights = weight_range(i);
        let mut g = rng(1_000 + i as u64);
        let cs: Vec<Complex> = (0..6).map(|_| random_complex(&mut g, field, 6, &weights).unwrap()).collect();
        let b = random_bidegree(&mut g, &cs[1], &cs[2]);
        let u = random_map(&mut g, cs[1].space(), cs[2].space(), b, 0.5);
        let b = random_bidegree(&mut g, &cs[0], &cs[1]);
        let v = random_map(&mut g, cs[0].space(), cs[1].space(), b, 0.5);
        let b = random_bidegree(&mut g, &cs[3], &cs[4]);
        let x = random_map(&mut g, cs[3].space(), cs[4].space(), b, 0.5);
        let b = random_bidegree(&mut g, &cs[4], &cs[5]);
        let y = random_map(&mut g, cs[4].space(), cs[5].space(), b, 0.5);
        nonzero += usize::from(!u.is_zero());

        let du = map_differential(&u, &cs[1], &cs[2]).unwrap();
        ensure(map_differential(&du, &cs[1], &cs[2]).unwrap().is_zero(), || format!("δ² ≠ 0 on map {i}"))?;

        let dv = map_differential(&v, &cs[0], &cs[1]).unwrap();
        let duv = map_differential(&u.compose(&v).unwrap(), &cs[0], &cs[2]).unwrap();
        let sign = Scalar::sign(field, u.total_degree());
        let leibniz = du.compose(&v).unwrap().add(&u.compose(&dv).unwrap().scale(&sign)).unwrap();
        ensure(duv == leibniz, || format!("Leibniz fails on map {i}"))?;

        // (u⊗y)∘(v⊗x) = (-1)^{|y||v|} uv ⊗ yx
        let lhs = u.tensor(&y).unwrap().compose(&v.tensor(&x).unwrap()).unwrap();
        let sign = Scalar::sign(field, y.total_degree() * v.total_degree());
        let rhs = u.compose(&v).unwrap().tensor(&y.compose(&x).unwrap()).unwrap().scale(&sign);
        ensure(lhs == rhs, || format!("interchange fails on map {i}"))?;
    }
    Ok(format!("200 maps, {nonzero} nonzero"))
}

fn tensor_power_complex(c: &Complex, n: usize) -> Complex {
    let mut acc = c.clone();
    for _ in 1..n {
        acc = tensor_complex(&acc, c).unwrap();
    }
    acc
}

fn valid_by_forms(a: &AInfinityStructure) -> (bool, bool) {
    let m_form = (1..=a.arity()).all(|n| a.stasheff_defect(n).is_zero());
    let b = a.bar_differential();
    (m_form, b.compose(&b).unwrap().is_zero())
}

fn form_equivalence() -> Outcome {
    let (mut valid, mut mutated, mut broken, mut non_closed) = (0, 0, 0, 0);
    for i in 0..100 {
        let field = field_for(i);
        let mut g = rng(2_000 + i as u64);
        let a = if i % 2 == 0 {
            let (c, mu) = random_dga(&mut g, field, 6, &weight_range(i / 2)).unwrap();
            AInfinityStructure::from_dga(&c, &mu, 4).unwrap()
        } else {
            let c = random_complex(&mut g, field, 4, &weight_range(i / 2)).unwrap();
            let density = g.gen_range(0.02..0.5);
            AInfinityStructure::new(&c, 4, &random_operations(&mut g, &c, 4, density)).unwrap()
        };
        let (m_ok, b_ok) = valid_by_forms(&a);
        ensure(m_ok == b_ok, || format!("family {i}: m-form {m_ok}, b-form {b_ok}"))?;
        if !m_ok {
            continue;
        }
        valid += 1;
        let c = a.complex();
        for _ in 0..3 {
            let n = g.gen_range(2..=4);
            let m = a.m(n);
            let src = m.source().clone();
            let slots: Vec<(usize, usize)> = (0..src.dim())
                .flat_map(|x| c.space().component(src.bidegree(x).shifted_by(m.bidegree())).into_iter().map(move |y| (x, y)))
                .collect();
            if slots.is_empty() {
                continue;
            }
            let (x, y) = slots[g.gen_range(0..slots.len())];
            let e = GradedMap::from_entries(&src, c.space(), m.bidegree(), [(x, y, nonzero_scalar(&mut g, field))]).unwrap();
            let mut ops = a.operations().to_vec();
            ops[n - 1] = ops[n - 1].add(&e).unwrap();
            let a2 = AInfinityStructure::new(c, 4, &ops).unwrap();
            let (m2, b2) = valid_by_forms(&a2);
            mutated += 1;
            ensure(m2 == b2, || format!("mutated family {i}: m-form {m2}, b-form {b2}"))?;
            broken += usize::from(!m2);
            let tc = tensor_power_complex(c, n);
            let closed = map_differential(&e.rebase(tc.space(), c.space()).unwrap(), &tc, c).unwrap().is_zero();
            if !closed {
                non_closed += 1;
                ensure(!m2 && !b2, || format!("non-closed mutation of family {i} left it valid"))?;
            }
        }
    }
    ensure(non_closed > 0, || "no non-closed mutation drawn".into())?;
    Ok(format!(
        "100 families, {valid} valid, {mutated} mutated, {broken} broken in both forms, {non_closed} non-closed"
    ))
}

fn contraction_repair() -> Outcome {
    let mut already = 0;
    let mut draws = 0u64;
    for i in 0..100 {
        let field = field_for(i);
        // at most 20 inputs that already are contractions
        let (c, s) = loop {
            let mut g = rng(3_000 + draws);
            draws += 1;
            let c = if draws % 2 == 0 {
                random_dga(&mut g, field, 6, &weight_range(draws as usize / 2)).unwrap().0
            } else {
                random_complex(&mut g, field, 6, &weight_range(draws as usize / 2)).unwrap()
            };
            let s = random_sdr(&mut g, &c).unwrap();
            let fine = s.h.compose(&s.alpha).unwrap().is_zero() && s.r.compose(&s.h).unwrap().is_zero() && s.h.compose(&s.h).unwrap().is_zero();
            if !fine || already < 20 {
                already += usize::from(fine);
                break (c, s);
            }
        };
        let k = repair_to_contraction(&s).map_err(|e| format!("SDR {i}: {e}"))?;
        let (alpha, r, h) = (k.alpha(), k.r(), k.h());
        ensure(h.compose(alpha).unwrap().is_zero(), || format!("SDR {i}: H∘α ≠ 0"))?;
        ensure(r.compose(h).unwrap().is_zero(), || format!("SDR {i}: r∘H ≠ 0"))?;
        ensure(h.compose(h).unwrap().is_zero(), || format!("SDR {i}: H² ≠ 0"))?;
        let dh = map_differential(h, &c, &c).unwrap();
        let complement = GradedMap::identity(c.space()).sub(&alpha.compose(r).unwrap()).unwrap();
        ensure(dh == complement, || format!("SDR {i}: δ(H″) ≠ 1−α∘r"))?;
        ensure(r.compose(alpha).unwrap() == GradedMap::identity(k.small().space()), || format!("SDR {i}: r∘α ≠ 1"))?;
    }
    Ok(format!("100 SDR data, {} violating a side condition", 100 - already))
}

fn dga_suite(seed: u64, count: usize, field: Field) -> Vec<(SuiteInstance, GradedMap)> {
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < count {
        for inst in random_suite(seed + round, count, 6, -2..=2, field).unwrap() {
            if let Some(mu) = inst.product.clone() {
                if out.len() < count {
                    out.push((inst, mu));
                }
            }
        }
        round += 1;
    }
    out
}

fn transfer_theorem() -> Outcome {
    let mut higher = 0;
    for (i, (inst, mu)) in dga_suite(4_000, 100, Field::Rational).into_iter().enumerate() {
        let a = AInfinityStructure::from_dga(&inst.complex, &mu, 5).unwrap();
        let res = transfer(&inst.contraction, &a, 5).unwrap();
        ensure((1..=5).all(|n| res.structure.stasheff_defect(n).is_zero()), || format!("pair {i}: Stasheff identity fails"))?;
        let small = res.r_bar.target().clone();
        let big = res.alpha_bar.target().clone();
        ensure(res.r_bar.compose(&res.alpha_bar).unwrap() == BarMap::identity(&small), || format!("pair {i}: r∞∘α∞ ≠ 1"))?;
        let b_d = &res.source_differential;
        let lhs = res.homotopy_bar.differential(b_d, b_d).unwrap();
        let rhs = BarMap::identity(&big).sub(&res.alpha_bar.compose(&res.r_bar).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("pair {i}: δ(H∞) ≠ 1 − α∞r∞"))?;
        let report = verify_transfer(&res, VerifyOptions::default()).unwrap();
        ensure(report.passed(), || format!("pair {i}: {:?}", report.first_failure()))?;
        higher += usize::from((3..=5).any(|n| !res.structure.m(n).is_zero()));
    }
    Ok(format!("100 pairs at N=5, {higher} with nonzero m₃..m₅"))
}

fn oracle_equivalence() -> Outcome {
    let (mut checked, mut nonzero_m3) = (0, 0);
    for seed in [1u64, 5_000] {
        for (i, inst) in random_suite(seed, 50, 6, -2..=2, Field::Rational).unwrap().into_iter().enumerate() {
            let a = match &inst.product {
                Some(mu) => AInfinityStructure::from_dga(&inst.complex, mu, 3).unwrap(),
                None => AInfinityStructure::new(&inst.complex, 3, &[]).unwrap(),
            };
            let res = transfer(&inst.contraction, &a, 3).unwrap();
            ensure(same_map(&transferred_m2(&inst.contraction, &a), res.structure.m(2)), || format!("seed {seed} instance {i}: m₂ ≠ r∘m₂∘(α⊗α)"))?;
            let b3 = transferred_b3(&inst.contraction, &a);
            ensure(same_map(&b3, &res.structure.b_form()[2]), || format!("seed {seed} instance {i}: arity-3 tree formula differs"))?;
            checked += 1;
            nonzero_m3 += usize::from(!b3.is_zero());
        }
    }
    let (d, mu, ..) = massey_instance(Field::Rational).unwrap();
    let a = AInfinityStructure::from_dga(&d, &mu, 3).unwrap();
    let c = hpt_core::factory::gaussian_contraction(&d).unwrap();
    let res = transfer(&c, &a, 3).unwrap();
    ensure(same_map(&transferred_b3(&c, &a), &res.structure.b_form()[2]), || "massey instance: arity-3 tree formula differs".into())?;
    Ok(format!("{checked} suite instances plus the Massey instance, {nonzero_m3} with nonzero m₃"))
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load_fixture(name: &str) -> (AInfinityStructure, Contraction) {
    let text = std::fs::read_to_string(fixtures_dir().join(format!("{name}.json"))).unwrap();
    let doc = Document::from_json(&text).unwrap();
    let mut r = doc.reader().unwrap();
    (r.structure("A", None).unwrap(), r.contraction("contraction").unwrap())
}

/// `α(m₂(x,y))` and `μ(αx ⊗ αy)` represent the same class for all basis pairs of `C`.
fn m2_is_cup_product(name: &str) -> Result<usize, String> {
    let (a, k) = load_fixture(name);
    let res = transfer(&k, &a, 2).unwrap();
    let (c, d) = (k.small(), k.big());
    let field = d.space().field();
    let one = field.one();
    let alpha_of = |i: usize| k.alpha().apply(&[(i, one.clone())]);
    let mut nonzero = 0;
    for x in 0..c.dim() {
        for y in 0..c.dim() {
            let xy = GradedMap::tensor_all(&[k.alpha(), k.alpha()]).unwrap();
            let cup = a.m(2).apply(&xy.apply(&[(x * c.dim() + y, one.clone())]));
            let m2 = res.structure.m(2).apply(&[(x * c.dim() + y, one.clone())]);
            let at = c.space().bidegree(x).plus(c.space().bidegree(y));
            let reps: Vec<_> = c.space().component(at).into_iter().map(alpha_of).collect();
            let coords = class_coordinates(d, at, &reps, &cup).ok_or_else(|| format!("{name}: cup product not a cycle"))?;
            let expected: Vec<Scalar> = c.space().component(at).into_iter().map(|i| m2.iter().find(|(j, _)| *j == i).map_or(field.zero(), |(_, v)| v.clone())).collect();
            ensure(coords == expected, || format!("{name}: m₂ differs from the cup product on ({x},{y})"))?;
            nonzero += usize::from(coords.iter().any(|v| !v.is_zero()));
        }
    }
    ensure(homology_basis(d).iter().map(|p| p.betti).sum::<usize>() == c.dim(), || format!("{name}: C is not the cohomology"))?;
    Ok(nonzero)
}

fn massey_detection() -> Outcome {
    let (d, mu, x, y, z) = massey_instance(Field::Rational).unwrap();
    let a = AInfinityStructure::from_dga(&d, &mu, 3).unwrap();
    let c = hpt_core::factory::gaussian_contraction(&d).unwrap();
    let res = transfer(&c, &a, 3).unwrap();
    let to_small = |v: &[(usize, Scalar)]| c.r().apply(v);
    let m = massey_triple(&res.structure, &to_small(&x), &to_small(&y), &to_small(&z)).unwrap();
    ensure(m.nonzero, || "Massey triple product vanishes".into())?;
    ensure(m.class.iter().any(|v| !v.is_zero()), || "zero class reported as nonzero".into())?;
    let circle = m2_is_cup_product("circle")?;
    let torus = m2_is_cup_product("torus")?;
    ensure(torus > 0, || "torus cup products all vanish".into())?;
    Ok(format!(
        "class {:?} at {:?}, indeterminacy rank {}; cup products match on circle ({circle} nonzero) and torus ({torus} nonzero)",
        m.class.iter().map(ToString::to_string).collect::<Vec<_>>(),
        m.bidegree,
        m.indeterminacy_rank
    ))
}

fn composition_audit() -> Outcome {
    let (d, mu, ..) = massey_instance(Field::Rational).unwrap();
    let mut instances = vec![(AInfinityStructure::from_dga(&d, &mu, 4).unwrap(), hpt_core::factory::gaussian_contraction(&d).unwrap())];
    // mostly instances whose transferred structure has higher operations
    let (mut higher, mut plain) = (0, 0);
    for (inst, mu) in dga_suite(7_000, 400, Field::Rational) {
        let a = AInfinityStructure::from_dga(&inst.complex, &mu, 4).unwrap();
        let res = transfer(&inst.contraction, &a, 4).unwrap();
        let has_higher = (3..=4).any(|n| !res.structure.m(n).is_zero());
        if has_higher && higher < 14 {
            higher += 1;
        } else if !has_higher && plain < 5 {
            plain += 1;
        } else {
            continue;
        }
        instances.push((a, inst.contraction));
        if instances.len() == 20 {
            break;
        }
    }
    ensure(instances.len() == 20, || format!("only {} instances found", instances.len()))?;
    let mut nonzero = 0;
    for (i, (a, k)) in instances.iter().enumerate() {
        let res = transfer(k, a, 4).unwrap();
        let b = res.structure.b_form();
        for u in 1..=4 {
            ensure(same_map(&composed_b(&res, a, u), &b[u - 1]), || format!("instance {i}: arity {u} differs"))?;
        }
        nonzero += usize::from(b[2..].iter().any(|m| !m.is_zero()));
    }
    Ok(format!("{} instances through arity 4, {nonzero} with nonzero higher components", instances.len()))
}

fn naturality() -> Outcome {
    let f = Field::Rational;
    let mut bases: Vec<(Contraction, AInfinityStructure)> = Vec::new();
    let (d, mu, ..) = massey_instance(f).unwrap();
    bases.push((hpt_core::factory::gaussian_contraction(&d).unwrap(), AInfinityStructure::from_dga(&d, &mu, 4).unwrap()));
    for (inst, mu) in dga_suite(8_000, 9, f) {
        bases.push((inst.contraction, AInfinityStructure::from_dga(&inst.complex, &mu, 4).unwrap()));
    }
    let mut natural = 0;
    for (i, (k, a)) in bases.iter().enumerate() {
        let at = Bidegree(i as i64 % 3 - 1, i as i64 % 2);
        let pairs = [
            inclusion_pair(k, a, at, &f.from_i64(i as i64 - 4)).unwrap(),
            weight_scaling_pair(k, a, &f.from_i64(i as i64 % 3 + 2)),
        ];
        for pair in pairs {
            let report = naturality_check(&pair, 4).unwrap();
            ensure(report.verdict == NaturalityVerdict::Natural, || format!("base {i}: {:?}", report.verdict))?;
            natural += 1;
        }
    }
    let mut failures = 0;
    for (i, (k, a)) in bases.iter().take(3).enumerate() {
        let pair = homotopy_mismatch_pair(k, a, Bidegree(i as i64, 0), &f.zero(), &f.from_i64(i as i64 + 1)).unwrap();
        let report = naturality_check(&pair, 4).unwrap();
        ensure(matches!(report.verdict, NaturalityVerdict::HypothesesNotSatisfied { .. }), || format!("mismatch {i}: {:?}", report.verdict))?;
        failures += 1;
    }
    // Doubling is closed and commutes with (α, r, H) but not with a nonzero product.
    for (i, (k, a)) in bases.iter().filter(|(_, a)| !a.m(2).is_zero()).take(2).enumerate() {
        let two = f.from_i64(2);
        let pair = ComparisonPair {
            source: k.clone(),
            target: k.clone(),
            source_structure: a.clone(),
            target_structure: a.clone(),
            big_map: GradedMap::identity(k.big().space()).scale(&two),
            small_map: GradedMap::identity(k.small().space()).scale(&two),
        };
        let report = naturality_check(&pair, 4).unwrap();
        ensure(matches!(report.verdict, NaturalityVerdict::HypothesesNotSatisfied { .. }), || format!("doubling {i}: {:?}", report.verdict))?;
        failures += 1;
    }
    ensure(natural == 20 && failures == 5, || format!("{natural} natural, {failures} failures constructed"))?;
    Ok("20 natural pairs, 5 hypothesis failures".into())
}

fn cli_determinism() -> Outcome {
    let first = hpt_cli::cmd_suite(1, 10, 4, "Q", 6).map_err(|e| e.to_string())?;
    let second = hpt_cli::cmd_suite(1, 10, 4, "Q", 6).map_err(|e| e.to_string())?;
    ensure(first.verdicts() == second.verdicts(), || "verdicts differ between runs".into())?;
    ensure(first.passed, || "suite seed 1 does not pass".into())?;
    Ok(format!("{} bytes of identical verdicts", first.verdicts().len()))
}

fn main() {
    let results = [
        criterion(1, "sign calculus: δ²=0, Leibniz, interchange", 10.0, sign_calculus),
        criterion(2, "Stasheff defects vanish iff b²=0, single-entry mutations", 30.0, form_equivalence),
        criterion(3, "contraction repair", 10.0, contraction_repair),
        criterion(4, "transfer at N=5", 120.0, transfer_theorem),
        criterion(5, "tree-formula oracle at arities 2 and 3", 30.0, oracle_equivalence),
        criterion(6, "Massey detection and cup products", 10.0, massey_detection),
        criterion(7, "composition formula through arity 4", 60.0, composition_audit),
        criterion(8, "naturality", 30.0, naturality),
        criterion(9, "CLI suite determinism", 10.0, cli_determinism),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
