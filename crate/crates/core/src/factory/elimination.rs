//! Contractions by Gaussian elimination of invertible differential entries.

use crate::complex::{Complex, DIFFERENTIAL};
use crate::error::Result;
use crate::map::{normalize, GradedMap, SparseVec};
use crate::perturbation::{Contraction, SdrDatum};
use crate::scalar::Scalar;
use crate::space::{BasisElement, Bidegree, BigradedSpace, Space};

/// Eliminates pairs until the differential vanishes. The result is a contraction
/// onto a complex with zero differential whose dimensions are the Betti numbers.
pub fn gaussian_contraction(c: &Complex) -> Result<Contraction> {
    gaussian_reduction(c, usize::MAX)
}

/// Eliminates at most `max_steps` pairs. Pivots: the source element of lowest
/// degree first (basis order breaking ties), paired with the first target in
/// basis order.
pub fn gaussian_reduction(c: &Complex, max_steps: usize) -> Result<Contraction> {
    let field = c.space().field();
    let original = c.space().clone();
    let mut space: Space = named_copy(&original);
    let mut d = c.d().rebase(&space, &space)?;
    let mut alpha = GradedMap::identity(&space).rebase(&space, &original)?;
    let mut r = GradedMap::identity(&space).rebase(&original, &space)?;
    let mut h = GradedMap::zero(&original, &original, Bidegree(-1, 0));
    let mut steps = 0;
    while steps < max_steps {
        let Some(a) = (0..space.dim())
            .filter(|&j| !d.column(j).is_empty())
            .min_by_key(|&j| (space.bidegree(j).0, j))
        else {
            break;
        };
        let (b, lambda) = d.column(a)[0].clone();
        let inv = lambda.inv().expect("nonzero entry");
        let keep: Vec<usize> = (0..space.dim()).filter(|&i| i != a && i != b).collect();
        let mut pos = vec![usize::MAX; space.dim()];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = new;
        }
        let next = BigradedSpace::new(
            field,
            keep.iter()
                .map(|&i| BasisElement {
                    name: space.label(i),
                    degree: space.bidegree(i).0,
                    weight: space.bidegree(i).1,
                })
                .collect(),
        )?;
        let project = |v: &[(usize, Scalar)]| -> SparseVec {
            v.iter()
                .filter(|(i, _)| pos[*i] != usize::MAX)
                .map(|(i, x)| (pos[*i], x.clone()))
                .collect()
        };
        let coeff_b = |v: &[(usize, Scalar)]| -> Scalar {
            v.iter()
                .find(|(i, _)| *i == b)
                .map_or_else(|| field.zero(), |(_, x)| x.clone())
        };
        let da = project(d.column(a));
        let mut d_cols = Vec::with_capacity(keep.len());
        let mut alpha_cols = Vec::with_capacity(keep.len());
        for &x in &keep {
            let dx = d.column(x);
            let t = &coeff_b(dx) * &inv;
            let mut col = project(dx);
            col.extend(da.iter().map(|(i, y)| (*i, -(&t * y))));
            d_cols.push(normalize(col));
            let mut acol = vec![(x, field.one())];
            if !t.is_zero() {
                acol.push((a, -t));
            }
            alpha_cols.push(normalize(acol));
        }
        let r_cols: Vec<SparseVec> = (0..space.dim())
            .map(|y| {
                if y == b {
                    da.iter().map(|(i, x)| (*i, -(&inv * x))).collect()
                } else if y == a {
                    Vec::new()
                } else {
                    vec![(pos[y], field.one())]
                }
            })
            .collect();
        let mut h_cols = vec![Vec::new(); space.dim()];
        h_cols[b] = vec![(a, inv.clone())];
        let d_next = GradedMap::from_columns(&next, &next, DIFFERENTIAL, d_cols)?;
        let alpha1 = GradedMap::from_columns(&next, &space, Bidegree::ZERO, alpha_cols)?;
        let r1 = GradedMap::from_columns(&space, &next, Bidegree::ZERO, r_cols)?;
        let h1 = GradedMap::from_columns(&space, &space, Bidegree(-1, 0), h_cols)?;
        h = h.add(&alpha.compose(&h1)?.compose(&r)?)?;
        alpha = alpha.compose(&alpha1)?;
        r = r1.compose(&r)?;
        d = d_next;
        space = next;
        steps += 1;
    }
    let small = Complex::new(d)?;
    Contraction::new(SdrDatum::new(&small, c, &alpha, &r, &h)?)
}

fn named_copy(space: &Space) -> Space {
    let labels: Vec<String> = (0..space.dim()).map(|i| space.label(i).replace('⊗', "·")).collect();
    space.relabeled(labels).expect("labels of a valid space stay unique")
}
