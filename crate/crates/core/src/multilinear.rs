//! Tensor powers of a single space and the multilinear block maps built on them.

use crate::map::{GradedMap, SparseVec};
use crate::scalar::{Field, Scalar};
use crate::space::{BigradedSpace, Space};

/// `X, X^{⊗2}, …, X^{⊗max}` built once and shared, so blocks compose by pointer.
#[derive(Clone, Debug)]
pub struct Powers {
    base: Space,
    spaces: Vec<Space>,
}

impl Powers {
    pub fn new(base: &Space, max: usize) -> Powers {
        let mut spaces = vec![base.clone()];
        for _ in 1..max.max(1) {
            let next = BigradedSpace::tensor(spaces.last().unwrap(), base).expect("same field");
            spaces.push(next);
        }
        Powers {
            base: base.clone(),
            spaces,
        }
    }

    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn max(&self) -> usize {
        self.spaces.len()
    }

    /// `X^{⊗k}`, `1 ≤ k ≤ max`.
    pub fn get(&self, k: usize) -> &Space {
        &self.spaces[k - 1]
    }

    /// Number of base factors in a power of the base.
    pub fn arity_of(&self, space: &Space) -> usize {
        space.arity() / self.base.arity()
    }

    /// Total degree of the basis element `idx` of `X^{⊗k}`.
    pub fn degree(&self, k: usize, idx: usize) -> i64 {
        if k == 0 {
            0
        } else {
            self.get(k).bidegree(idx).total()
        }
    }

    /// Rebuilds `m` on the cached spaces (must match structurally).
    pub fn adopt(&self, m: &GradedMap, source_arity: usize, target: &Powers, target_arity: usize) -> Option<GradedMap> {
        m.rebase(self.get(source_arity), target.get(target_arity))
            .ok()
            .filter(|_| **m.source() == **self.get(source_arity) && **m.target() == **target.get(target_arity))
    }
}

/// `1^{⊗left} ⊗ m ⊗ 1^{⊗right}` for `m : X^{⊗s} → X^{⊗k}`, with the Koszul sign
/// `(-1)^{|m|·|x_1⊗…⊗x_left|}` on each basis element.
pub fn whisker(p: &Powers, left: usize, m: &GradedMap, right: usize) -> GradedMap {
    let s = p.arity_of(m.source());
    let k = p.arity_of(m.target());
    let d0 = p.base().dim();
    let source = p.get(left + s + right);
    let target = p.get(left + k + right);
    let inner_s = d0.pow(s as u32);
    let inner_k = d0.pow(k as u32);
    let tail = d0.pow(right as u32);
    let odd = m.total_degree().rem_euclid(2) == 1;
    let mut columns = Vec::with_capacity(source.dim());
    for x in 0..source.dim() {
        let l = x / (inner_s * tail);
        let mid = (x / tail) % inner_s;
        let r = x % tail;
        let col = m.column(mid);
        if col.is_empty() {
            columns.push(Vec::new());
            continue;
        }
        let negate = odd && p.degree(left, l).rem_euclid(2) == 1;
        let base = l * inner_k;
        columns.push(
            col.iter()
                .map(|(i, c)| ((base + i) * tail + r, if negate { -c } else { c.clone() }))
                .collect(),
        );
    }
    GradedMap::from_raw(source, target, m.bidegree(), columns)
}

/// `f_1 ⊗ … ⊗ f_k` with `f_i : X^{⊗a_i} → Y^{⊗b_i}`, landing on cached powers.
pub fn tensor_maps(maps: &[&GradedMap], src: &Powers, tgt: &Powers) -> GradedMap {
    let mut acc = maps[0].clone();
    let mut a = src.arity_of(acc.source());
    let mut b = tgt.arity_of(acc.target());
    if a <= src.max() && b <= tgt.max() {
        acc = acc.rebase(src.get(a), tgt.get(b)).expect("cached power");
    }
    for f in &maps[1..] {
        a += src.arity_of(f.source());
        b += tgt.arity_of(f.target());
        acc = acc.tensor_into(f, src.get(a), tgt.get(b));
    }
    acc
}

/// `x_1 ⊗ … ⊗ x_k` for vectors in the base, as a vector of `X^{⊗k}`.
pub fn tensor_vectors(field: Field, vs: &[&[(usize, Scalar)]], d0: usize) -> SparseVec {
    let mut acc: SparseVec = vec![(0, field.one())];
    for v in vs {
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for (i, a) in &acc {
            for (j, b) in v.iter() {
                next.push((i * d0 + j, a * b));
            }
        }
        acc = next;
    }
    acc.sort_by_key(|(i, _)| *i);
    acc
}

/// Parity of `Σ_a |x_a|·(k − a)`: the sign of `(s^{-1})^{⊗k}` on `x_1⊗…⊗x_k`.
pub fn desuspension_parity(p: &Powers, k: usize, idx: usize) -> bool {
    let factors = p.get(k).split_index(idx);
    let mut parity = 0i64;
    for (a, &f) in factors.iter().enumerate() {
        parity += p.base().bidegree(f).total() * (k - 1 - a) as i64;
    }
    parity.rem_euclid(2) == 1
}
