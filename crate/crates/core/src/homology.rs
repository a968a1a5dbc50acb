//! Cohomology of a complex, piece by piece.

use crate::complex::Complex;
use crate::linalg::Matrix;
use crate::map::SparseVec;
use crate::scalar::Scalar;
use crate::space::Bidegree;

/// One graded piece `H^p(n)` with representative cycles for a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyPiece {
    pub bidegree: Bidegree,
    pub betti: usize,
    /// Cycles in the ambient basis whose classes form a basis of the piece.
    pub representatives: Vec<SparseVec>,
}

struct Piece {
    cycles_from: Matrix,
    boundaries: Vec<SparseVec>,
    local: Vec<usize>,
}

fn piece(c: &Complex, at: Bidegree) -> Piece {
    let field = c.space().field();
    let local = c.space().component(at);
    let below = c.space().component(Bidegree(at.0 - 1, at.1));
    let above = c.space().component(Bidegree(at.0 + 1, at.1));
    let pos = |set: &[usize], i: usize| set.iter().position(|&x| x == i).expect("graded");
    let out_cols: Vec<SparseVec> = local
        .iter()
        .map(|&j| c.d().column(j).iter().map(|(i, x)| (pos(&above, *i), x.clone())).collect())
        .collect();
    let boundaries: Vec<SparseVec> = below
        .iter()
        .map(|&j| c.d().column(j).iter().map(|(i, x)| (pos(&local, *i), x.clone())).collect())
        .collect();
    Piece {
        cycles_from: Matrix::from_columns(field, above.len(), &out_cols),
        boundaries,
        local,
    }
}

/// Betti numbers and representatives for every bidegree carrying basis elements.
///
/// Representatives are kernel vectors of `d` chosen greedily (in kernel-basis
/// order) to extend a basis of the boundaries.
pub fn homology_basis(c: &Complex) -> Vec<HomologyPiece> {
    let field = c.space().field();
    let mut out = Vec::new();
    for at in c.space().support() {
        let Piece {
            cycles_from,
            boundaries,
            local,
        } = piece(c, at);
        let kernel = cycles_from.kernel();
        let mut span = boundaries.clone();
        let mut rank = Matrix::from_columns(field, local.len(), &span).rank();
        let mut reps = Vec::new();
        for z in kernel {
            span.push(z.clone());
            let r = Matrix::from_columns(field, local.len(), &span).rank();
            if r > rank {
                rank = r;
                reps.push(z.into_iter().map(|(i, x)| (local[i], x)).collect());
            } else {
                span.pop();
            }
        }
        out.push(HomologyPiece {
            bidegree: at,
            betti: reps.len(),
            representatives: reps,
        });
    }
    out
}

pub fn betti(c: &Complex, at: Bidegree) -> usize {
    homology_basis(c)
        .into_iter()
        .find(|p| p.bidegree == at)
        .map_or(0, |p| p.betti)
}

/// Coordinates of the class of `cycle` in the basis given by `representatives`
/// (all in one bidegree `at`). `None` if `cycle` is not a cycle there.
pub fn class_coordinates(c: &Complex, at: Bidegree, representatives: &[SparseVec], cycle: &[(usize, Scalar)]) -> Option<Vec<Scalar>> {
    let field = c.space().field();
    let p = piece(c, at);
    let pos = |i: usize| p.local.iter().position(|&x| x == i);
    let local_cycle: SparseVec = cycle.iter().map(|(i, x)| Some((pos(*i)?, x.clone()))).collect::<Option<_>>()?;
    if !p.is_cycle(&local_cycle) {
        return None;
    }
    let mut cols: Vec<SparseVec> = representatives
        .iter()
        .map(|r| r.iter().map(|(i, x)| Some((pos(*i)?, x.clone()))).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    cols.extend(p.boundaries.iter().cloned());
    let system = Matrix::from_columns(field, p.local.len(), &cols);
    let sol = system.solve(&local_cycle)?;
    let mut coords = vec![field.zero(); representatives.len()];
    for (k, x) in sol {
        if k < representatives.len() {
            coords[k] = x;
        }
    }
    Some(coords)
}

impl Piece {
    fn is_cycle(&self, v: &[(usize, Scalar)]) -> bool {
        let m = &self.cycles_from;
        let Some((_, first)) = v.first() else {
            return true;
        };
        (0..m.rows()).all(|i| {
            let mut s = first.field().zero();
            for (j, x) in v {
                s += &(&m[(i, *j)] * x);
            }
            s.is_zero()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DIFFERENTIAL;
    use crate::map::GradedMap;
    use crate::scalar::Field;
    use crate::space::BigradedSpace;

    #[test]
    fn acyclic_pair_has_no_homology() {
        let f = Field::Rational;
        let s = BigradedSpace::from_triples(f, [("x", 0, 0), ("y", 1, 0)]).unwrap();
        let c = Complex::new(GradedMap::from_entries(&s, &s, DIFFERENTIAL, [(0, 1, f.one())]).unwrap()).unwrap();
        assert!(homology_basis(&c).iter().all(|p| p.betti == 0));
    }

    #[test]
    fn circle_cochains() {
        // vertices a,b,c; edges ab, bc, ac; d(v*) = Σ ± (edges)*
        let f = Field::Rational;
        let s = BigradedSpace::from_triples(
            f,
            [("a", 0, 0), ("b", 0, 0), ("c", 0, 0), ("ab", 1, 0), ("ac", 1, 0), ("bc", 1, 0)],
        )
        .unwrap();
        let m1 = f.from_i64(-1);
        let one = f.one();
        let d = GradedMap::from_entries(
            &s,
            &s,
            DIFFERENTIAL,
            [
                (0, 3, m1.clone()),
                (0, 4, m1.clone()),
                (1, 3, one.clone()),
                (1, 5, m1.clone()),
                (2, 4, one.clone()),
                (2, 5, one.clone()),
            ],
        )
        .unwrap();
        let c = Complex::new(d).unwrap();
        assert_eq!(betti(&c, Bidegree(0, 0)), 1);
        assert_eq!(betti(&c, Bidegree(1, 0)), 1);
        let h1 = homology_basis(&c).into_iter().find(|p| p.bidegree == Bidegree(1, 0)).unwrap();
        let coords = class_coordinates(&c, Bidegree(1, 0), &h1.representatives, &h1.representatives[0]).unwrap();
        assert!(coords[0].is_one());
        // a boundary has class zero
        let boundary = c.d().column(0).to_vec();
        let coords = class_coordinates(&c, Bidegree(1, 0), &h1.representatives, &boundary).unwrap();
        assert!(coords[0].is_zero());
    }
}
