//! Seeded random complexes, algebras, maps and contractions.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{map_differential, Complex, DIFFERENTIAL};
use crate::error::Result;
use crate::factory::elimination::gaussian_reduction;
use crate::factory::quiver::{path_dga, Quiver};
use crate::factory::simplicial::{cochain_dga, SimplicialComplexDescription};
use crate::linalg::Matrix;
use crate::map::{GradedMap, SparseVec};
use crate::multilinear::Powers;
use crate::perturbation::{repair_to_contraction, Contraction, SdrDatum};
use crate::scalar::{Field, Scalar};
use crate::space::{BasisElement, Bidegree, BigradedSpace, Space};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero scalar drawn from `±1, ±2, ±3, ±1/2`.
pub fn nonzero_scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    loop {
        let n = *[1i64, -1, 2, -2, 3, -3].choose(rng).unwrap();
        let x = if rng.gen_bool(0.15) {
            field.from_ratio(n, 2).unwrap_or_else(|| field.from_i64(n))
        } else {
            field.from_i64(n)
        };
        if !x.is_zero() {
            return x;
        }
    }
}

/// A map of the given bidegree; each admissible entry is nonzero with probability `density`.
pub fn random_map(rng: &mut impl Rng, source: &Space, target: &Space, bidegree: Bidegree, density: f64) -> GradedMap {
    let field = source.field();
    let mut columns = Vec::with_capacity(source.dim());
    for x in 0..source.dim() {
        let to = source.bidegree(x).shifted_by(bidegree);
        let mut col: SparseVec = Vec::new();
        for y in target.component(to) {
            if rng.gen_bool(density) {
                col.push((y, nonzero_scalar(rng, field)));
            }
        }
        columns.push(col);
    }
    GradedMap::from_columns(source, target, bidegree, columns).expect("entries respect the bidegree")
}

/// A random bidegree-preserving automorphism and its inverse.
pub fn random_automorphism(rng: &mut impl Rng, space: &Space) -> (GradedMap, GradedMap) {
    let field = space.field();
    loop {
        let phi = random_map(rng, space, space, Bidegree::ZERO, 0.5).add(&GradedMap::identity(space)).expect("same shape");
        let m = Matrix::from_columns(field, space.dim(), phi.columns());
        if let Some(inv) = m.inverse() {
            let cols = (0..space.dim()).map(|j| inv.column(j)).collect();
            let inv = GradedMap::from_columns(space, space, Bidegree::ZERO, cols).expect("block diagonal inverse");
            return (phi, inv);
        }
    }
}

/// Transports `d` (and `μ`) along a random automorphism `φ`: `φ⁻¹dφ`, `φ⁻¹μ(φ⊗φ)`.
pub fn conjugate(rng: &mut impl Rng, c: &Complex, mu: Option<&GradedMap>) -> Result<(Complex, Option<GradedMap>)> {
    let (phi, inv) = random_automorphism(rng, c.space());
    let d = inv.compose(c.d())?.compose(&phi)?;
    let mu = match mu {
        Some(mu) => {
            let sq = Powers::new(c.space(), 2);
            let pp = phi.tensor(&phi)?.rebase(sq.get(2), sq.get(2))?;
            Some(inv.compose(mu)?.compose(&pp)?)
        }
        None => None,
    };
    Ok((Complex::new(d)?, mu))
}

fn element(name: String, p: i64, w: i64) -> BasisElement {
    BasisElement {
        name,
        degree: p,
        weight: w,
    }
}

/// Homology generators plus acyclic pairs `x → λy`, shuffled and conjugated.
pub fn random_complex(rng: &mut impl Rng, field: Field, max_dim: usize, weights: &RangeInclusive<i64>) -> Result<Complex> {
    let dim = rng.gen_range(1..=max_dim.max(1));
    let mut basis = Vec::new();
    let mut pairs = Vec::new();
    while basis.len() < dim {
        let p = rng.gen_range(-1..=2);
        let w = rng.gen_range(weights.clone());
        if basis.len() + 2 <= dim && rng.gen_bool(0.5) {
            pairs.push((basis.len(), basis.len() + 1));
            basis.push((p, w));
            basis.push((p + 1, w));
        } else {
            basis.push((p, w));
        }
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.shuffle(rng);
    let mut pos = vec![0; dim];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let space = BigradedSpace::new(
        field,
        order.iter()
            .enumerate()
            .map(|(i, &old)| element(format!("e{i}"), basis[old].0, basis[old].1))
            .collect(),
    )?;
    let entries: Vec<_> = pairs.iter().map(|&(x, y)| (pos[x], pos[y], nonzero_scalar(rng, field))).collect();
    let c = Complex::new(GradedMap::from_entries(&space, &space, DIFFERENTIAL, entries)?)?;
    Ok(conjugate(rng, &c, None)?.0)
}

const ARROW_NAMES: [&str; 8] = ["a", "b", "c", "e", "f", "g", "u", "v"];

fn random_bidegree(rng: &mut impl Rng, weights: &RangeInclusive<i64>) -> Bidegree {
    Bidegree(rng.gen_range(-1..=2), rng.gen_range(weights.clone()))
}

/// Three composable closed arrows `a, b, c`; one of `ab`, `bc` bounds a new arrow
/// and the other vanishes. Six dimensions, with a nonzero triple product.
pub fn massey_shaped_quiver(rng: &mut impl Rng, field: Field, weights: &RangeInclusive<i64>) -> Quiver {
    let mut q = Quiver::new(4, false);
    let a = q.closed("a", 0, 1, random_bidegree(rng, weights));
    let b = q.closed("b", 1, 2, random_bidegree(rng, weights));
    let c = q.closed("c", 2, 3, random_bidegree(rng, weights));
    let lambda = nonzero_scalar(rng, field);
    if rng.gen_bool(0.5) {
        q.bounding("u", lambda, vec![a, b]);
        q.relation(vec![b, c]);
    } else {
        q.bounding("v", lambda, vec![b, c]);
        q.relation(vec![a, b]);
    }
    q
}

/// A random acyclic-quiver algebra of dimension at most `max_dim`.
pub fn random_quiver(rng: &mut impl Rng, field: Field, max_dim: usize, weights: &RangeInclusive<i64>) -> Quiver {
    if max_dim >= 6 && rng.gen_bool(0.3) {
        return massey_shaped_quiver(rng, field, weights);
    }
    loop {
        let vertices = rng.gen_range(2..=4);
        let mut q = Quiver::new(vertices, rng.gen_bool(0.5));
        let arrows = rng.gen_range(1..=4);
        for k in 0..arrows {
            let i = rng.gen_range(0..vertices - 1);
            let j = rng.gen_range(i + 1..vertices);
            let b = random_bidegree(rng, weights);
            q.closed(ARROW_NAMES[k], i, j, b);
        }
        let composable: Vec<(usize, usize)> = (0..arrows)
            .flat_map(|x| (0..arrows).map(move |y| (x, y)))
            .filter(|&(x, y)| q.arrows[x].target == q.arrows[y].source)
            .collect();
        if !composable.is_empty() && rng.gen_bool(0.4) {
            let rel = *composable.choose(rng).unwrap();
            q.relation(vec![rel.0, rel.1]);
        }
        let free: Vec<&(usize, usize)> = composable.iter().filter(|&&(x, y)| !q.relations.contains(&vec![x, y])).collect();
        if !free.is_empty() && rng.gen_bool(0.7) {
            let (x, y) = **free.choose(rng).unwrap();
            q.bounding(ARROW_NAMES[arrows], nonzero_scalar(rng, field), vec![x, y]);
        }
        if q.dimension() <= max_dim {
            return q;
        }
    }
}

/// A random DGA: a quiver path algebra or a small cochain algebra, conjugated.
pub fn random_dga(rng: &mut impl Rng, field: Field, max_dim: usize, weights: &RangeInclusive<i64>) -> Result<(Complex, GradedMap)> {
    let (c, mu) = if max_dim >= 3 && rng.gen_bool(0.2) {
        let mut shapes = vec![SimplicialComplexDescription::two_points(), SimplicialComplexDescription::interval()];
        if max_dim >= 6 {
            shapes.push(SimplicialComplexDescription::circle());
        }
        cochain_dga(shapes.choose(rng).unwrap(), field)?
    } else {
        path_dga(&random_quiver(rng, field, max_dim, weights), field)?
    };
    let (c, mu) = conjugate(rng, &c, Some(&mu))?;
    Ok((c, mu.expect("conjugated product")))
}

/// A random SDR datum on `c`: a partial Gaussian reduction whose homotopy is
/// altered by `δ(G) + α∘K∘r`, with `G` random of bidegree `(-2,0)` and `K` a closed
/// map of bidegree `(-1,0)` on the small complex. Not a contraction in general.
pub fn random_sdr(rng: &mut impl Rng, c: &Complex) -> Result<SdrDatum> {
    let full = gaussian_reduction(c, usize::MAX)?;
    let eliminated = (c.dim() - full.small().dim()) / 2;
    let steps = if rng.gen_bool(0.5) { eliminated } else { rng.gen_range(0..=eliminated) };
    let base = gaussian_reduction(c, steps)?;
    let small = base.small();
    let g = random_map(rng, c.space(), c.space(), Bidegree(-2, 0), 0.6);
    let mut k = random_map(rng, small.space(), small.space(), Bidegree(-1, 0), 0.6);
    if !map_differential(&k, small, small)?.is_zero() {
        let l = random_map(rng, small.space(), small.space(), Bidegree(-2, 0), 0.6);
        k = map_differential(&l, small, small)?;
    }
    let noise = map_differential(&g, c, c)?.add(&base.alpha().compose(&k)?.compose(base.r())?)?;
    base.datum().with_homotopy(base.h().add(&noise)?)
}

/// A random family `m_2, …, m_arity` of bidegree `(2-n, 0)` on `c`.
pub fn random_operations(rng: &mut impl Rng, c: &Complex, arity: usize, density: f64) -> Vec<GradedMap> {
    let powers = Powers::new(c.space(), arity);
    let mut ops = vec![c.d().clone()];
    for n in 2..=arity {
        ops.push(random_map(rng, powers.get(n), c.space(), Bidegree(2 - n as i64, 0), density));
    }
    ops
}

/// One suite entry: a complex, possibly a product on it, and a contraction of it.
#[derive(Clone, Debug)]
pub struct SuiteInstance {
    pub complex: Complex,
    pub product: Option<GradedMap>,
    pub contraction: Contraction,
}

/// `count` instances with total dimension at most `max_dim`; deterministic in `seed`.
pub fn random_suite(seed: u64, count: usize, max_dim: usize, weights: RangeInclusive<i64>, field: Field) -> Result<Vec<SuiteInstance>> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (complex, product) = if rng.gen_bool(0.8) {
            let (c, mu) = random_dga(&mut rng, field, max_dim, &weights)?;
            (c, Some(mu))
        } else {
            (random_complex(&mut rng, field, max_dim, &weights)?, None)
        };
        let datum = random_sdr(&mut rng, &complex)?;
        let contraction = repair_to_contraction(&datum)?;
        out.push(SuiteInstance {
            complex,
            product,
            contraction,
        });
    }
    Ok(out)
}
