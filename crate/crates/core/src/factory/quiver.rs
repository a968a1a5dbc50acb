//! Path algebras of acyclic quivers with a differential on the arrows.

use crate::complex::{Complex, DIFFERENTIAL};
use crate::error::{Error, Result};
use crate::map::{GradedMap, SparseVec};
use crate::multilinear::Powers;
use crate::scalar::{Field, Scalar};
use crate::space::{BasisElement, Bidegree, BigradedSpace, Space};

#[derive(Clone, Debug)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub bidegree: Bidegree,
    /// `d(arrow) = λ · path`, the path made of closed arrows (by index).
    pub differential: Option<(Scalar, Vec<usize>)>,
}

/// Quiver with arrows `i → j`, `i < j`. The algebra is spanned by the nonempty
/// paths (concatenation product, `ab` = `a` then `b`) avoiding every relation
/// as a subpath, plus a unit if requested. Relations use closed arrows only, so
/// they span a differential ideal.
#[derive(Clone, Debug)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<usize>>,
    pub unit: bool,
}

impl Quiver {
    pub fn new(vertices: usize, unit: bool) -> Self {
        Quiver {
            vertices,
            arrows: Vec::new(),
            relations: Vec::new(),
            unit,
        }
    }

    pub fn closed(&mut self, name: &str, source: usize, target: usize, bidegree: Bidegree) -> usize {
        self.arrows.push(Arrow {
            name: name.into(),
            source,
            target,
            bidegree,
            differential: None,
        });
        self.arrows.len() - 1
    }

    /// An arrow `x` with `dx = λ · path`; its endpoints and bidegree are forced.
    pub fn bounding(&mut self, name: &str, lambda: Scalar, path: Vec<usize>) -> usize {
        let source = self.arrows[path[0]].source;
        let target = self.arrows[*path.last().unwrap()].target;
        let b = self.path_bidegree(&path);
        self.arrows.push(Arrow {
            name: name.into(),
            source,
            target,
            bidegree: Bidegree(b.0 - 1, b.1),
            differential: Some((lambda, path)),
        });
        self.arrows.len() - 1
    }

    /// Declares the path (of closed arrows) to be zero.
    pub fn relation(&mut self, path: Vec<usize>) {
        self.relations.push(path);
    }

    fn vanishes(&self, path: &[usize]) -> bool {
        self.relations
            .iter()
            .any(|rel| rel.len() <= path.len() && path.windows(rel.len()).any(|w| w == rel.as_slice()))
    }

    pub fn path_bidegree(&self, path: &[usize]) -> Bidegree {
        path.iter().fold(Bidegree::ZERO, |acc, &a| acc.plus(self.arrows[a].bidegree))
    }

    fn validate(&self) -> Result<()> {
        for a in &self.arrows {
            if a.source >= a.target || a.target >= self.vertices {
                return Err(Error::Rejected(format!("arrow {} must run from a lower to a higher vertex", a.name)));
            }
            if let Some((lambda, path)) = &a.differential {
                if lambda.is_zero() || path.is_empty() {
                    return Err(Error::Rejected(format!("arrow {} has an empty differential", a.name)));
                }
                let composable = path.windows(2).all(|w| self.arrows[w[0]].target == self.arrows[w[1]].source);
                let closed = path.iter().all(|&i| self.arrows[i].differential.is_none());
                let ends = self.arrows[path[0]].source == a.source && self.arrows[*path.last().unwrap()].target == a.target;
                let b = self.path_bidegree(path);
                if !composable || !closed || !ends || Bidegree(b.0 - 1, b.1) != a.bidegree {
                    return Err(Error::Rejected(format!("arrow {} has an inadmissible differential", a.name)));
                }
            }
        }
        for rel in &self.relations {
            let composable = rel.windows(2).all(|w| self.arrows[w[0]].target == self.arrows[w[1]].source);
            if rel.len() < 2 || !composable || rel.iter().any(|&i| self.arrows[i].differential.is_some()) {
                return Err(Error::Rejected("relations must be composable paths of closed arrows".into()));
            }
        }
        Ok(())
    }

    /// All nonempty paths, by length and then arrow order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.arrows.len()).map(|a| vec![a]).collect();
        let mut frontier = out.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                let end = self.arrows[*p.last().unwrap()].target;
                for (a, arrow) in self.arrows.iter().enumerate() {
                    if arrow.source == end {
                        let mut q = p.clone();
                        q.push(a);
                        if !self.vanishes(&q) {
                            next.push(q);
                        }
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.paths().len() + usize::from(self.unit)
    }
}

/// The differential graded path algebra and its product.
pub fn path_dga(q: &Quiver, field: Field) -> Result<(Complex, GradedMap)> {
    q.validate()?;
    let paths = q.paths();
    let offset = usize::from(q.unit);
    let mut basis = Vec::new();
    if q.unit {
        basis.push(BasisElement {
            name: "1".into(),
            degree: 0,
            weight: 0,
        });
    }
    for p in &paths {
        let b = q.path_bidegree(p);
        basis.push(BasisElement {
            name: p.iter().map(|&a| q.arrows[a].name.as_str()).collect(),
            degree: b.0,
            weight: b.1,
        });
    }
    let space: Space = BigradedSpace::new(field, basis)?;
    let index = |p: &[usize]| paths.iter().position(|x| x == p).map(|i| i + offset);
    let mut d_cols: Vec<SparseVec> = vec![Vec::new(); space.dim()];
    for (pi, p) in paths.iter().enumerate() {
        let mut before = 0i64;
        for (i, &a) in p.iter().enumerate() {
            if let Some((lambda, path)) = &q.arrows[a].differential {
                let mut image = p[..i].to_vec();
                image.extend(path);
                image.extend(&p[i + 1..]);
                if let Some(target) = index(&image) {
                    d_cols[pi + offset].push((target, &Scalar::sign(field, before) * lambda));
                }
            }
            before += q.arrows[a].bidegree.total();
        }
    }
    let d = GradedMap::from_columns(&space, &space, DIFFERENTIAL, d_cols)?;
    let complex = Complex::new(d)?;
    let square = Powers::new(&space, 2);
    let mut entries = Vec::new();
    for x in 0..space.dim() {
        for y in 0..space.dim() {
            let product = if q.unit && x == 0 {
                Some(y)
            } else if q.unit && y == 0 {
                Some(x)
            } else {
                let (p, r) = (&paths[x - offset], &paths[y - offset]);
                if q.arrows[*p.last().unwrap()].target == q.arrows[r[0]].source {
                    let mut pr = p.clone();
                    pr.extend(r);
                    index(&pr)
                } else {
                    None
                }
            };
            if let Some(z) = product {
                entries.push((square.get(2).join_index(&[x, y]), z, field.one()));
            }
        }
    }
    let mu = GradedMap::from_entries(square.get(2), &space, Bidegree::ZERO, entries)?;
    Ok((complex, mu))
}

/// `a : 0→1`, `b : 1→2`, `c : 2→3` in degree 1, `u : 0→2` with `du = ab`,
/// `v : 1→3` with `dv = bc`, and a unit. Eleven dimensions.
pub fn massey_quiver(field: Field) -> Quiver {
    let mut q = Quiver::new(4, true);
    let a = q.closed("a", 0, 1, Bidegree(1, 0));
    let b = q.closed("b", 1, 2, Bidegree(1, 0));
    let c = q.closed("c", 2, 3, Bidegree(1, 0));
    q.bounding("u", field.one(), vec![a, b]);
    q.bounding("v", field.one(), vec![b, c]);
    q
}

/// The Massey algebra with its three distinguished cycles `a`, `b`, `c`.
pub fn massey_instance(field: Field) -> Result<(Complex, GradedMap, SparseVec, SparseVec, SparseVec)> {
    let (c, mu) = path_dga(&massey_quiver(field), field)?;
    let at = |l: &str| vec![(c.space().index_of(l).expect("massey label"), field.one())];
    let (x, y, z) = (at("a"), at("b"), at("c"));
    Ok((c, mu, x, y, z))
}
