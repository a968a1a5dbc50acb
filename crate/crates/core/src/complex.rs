//! Bigraded cochain complexes and the sign calculus on maps between them.

use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::scalar::Scalar;
use crate::space::{same_space, Bidegree, BigradedSpace, Space};

pub const DIFFERENTIAL: Bidegree = Bidegree(1, 0);

/// A bigraded space with a differential of bidegree `(1, 0)` squaring to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    space: Space,
    d: GradedMap,
}

impl Complex {
    pub fn new(d: GradedMap) -> Result<Complex> {
        if !same_space(d.source(), d.target()) {
            return Err(Error::Rejected("differential must be an endomorphism".into()));
        }
        if d.bidegree() != DIFFERENTIAL && !d.is_zero() {
            return Err(Error::WrongBidegree {
                what: "differential".into(),
                expected: DIFFERENTIAL,
                found: d.bidegree(),
            });
        }
        let dd = d.compose(&d)?;
        if !dd.is_zero() {
            return Err(Error::IdentityFails {
                identity: "d∘d=0".into(),
                defect: dd.nnz(),
            });
        }
        let d = if d.bidegree() == DIFFERENTIAL {
            d
        } else {
            GradedMap::zero(d.source(), d.target(), DIFFERENTIAL)
        };
        Ok(Complex {
            space: d.source().clone(),
            d,
        })
    }

    /// The complex with zero differential on `space`.
    pub fn trivial(space: &Space) -> Complex {
        Complex {
            space: space.clone(),
            d: GradedMap::zero(space, space, DIFFERENTIAL),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn check_ends(u: &GradedMap, source: &Complex, target: &Complex) -> Result<()> {
    if !same_space(u.source(), source.space()) || !same_space(u.target(), target.space()) {
        return Err(Error::Rejected(
            "map does not run between the given complexes".into(),
        ));
    }
    Ok(())
}

/// `δ(u) = d∘u + (-1)^{k+1} u∘d` for `u` of total degree `k`.
pub fn map_differential(u: &GradedMap, source: &Complex, target: &Complex) -> Result<GradedMap> {
    check_ends(u, source, target)?;
    let left = target.d().compose(u)?;
    let right = u.compose(source.d())?;
    let sign = Scalar::sign(u.field(), u.total_degree() + 1);
    left.add(&right.scale(&sign))
}

pub fn is_closed(u: &GradedMap, source: &Complex, target: &Complex) -> Result<bool> {
    Ok(map_differential(u, source, target)?.is_zero())
}

/// `C ⊗ D` with `d(a⊗b) = da⊗b + (-1)^{p+n} a⊗db` for `a` at `(p, n)`.
pub fn tensor_complex(c: &Complex, d: &Complex) -> Result<Complex> {
    let space = BigradedSpace::tensor(c.space(), d.space())?;
    let field = space.field();
    let inner = d.dim();
    let mut columns = Vec::with_capacity(space.dim());
    for a in 0..c.dim() {
        let sign = Scalar::sign(field, c.space().bidegree(a).total());
        for b in 0..d.dim() {
            let mut col = Vec::new();
            for (i, x) in c.d().column(a) {
                col.push((i * inner + b, x.clone()));
            }
            for (k, y) in d.d().column(b) {
                col.push((a * inner + k, &sign * y));
            }
            columns.push(col);
        }
    }
    Complex::new(GradedMap::from_columns(&space, &space, DIFFERENTIAL, columns)?)
}

/// The suspension `SC` together with `s : C → SC` (bidegree `(-1,0)`) and its inverse.
#[derive(Clone, Debug)]
pub struct Suspension {
    pub complex: Complex,
    pub s: GradedMap,
    pub s_inv: GradedMap,
}

/// `(SC)^i(n) = C^{i+1}(n)` with `d_{SC} = -s∘d∘s^{-1}`.
pub fn suspend(c: &Complex) -> Suspension {
    let sc = BigradedSpace::suspension(c.space());
    let one = sc.field().one();
    let identity_columns: Vec<_> = (0..c.dim()).map(|i| vec![(i, one.clone())]).collect();
    let s = GradedMap::from_raw(c.space(), &sc, Bidegree(-1, 0), identity_columns.clone());
    let s_inv = GradedMap::from_raw(&sc, c.space(), Bidegree(1, 0), identity_columns);
    let d = GradedMap::from_raw(&sc, &sc, DIFFERENTIAL, c.d().columns().to_vec()).neg();
    Suspension {
        complex: Complex { space: sc, d },
        s,
        s_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    /// `k → k` at degrees 0 → 1, identity.
    fn acyclic() -> Complex {
        let s = BigradedSpace::from_triples(Field::Rational, [("x", 0, 0), ("y", 1, 0)]).unwrap();
        Complex::new(GradedMap::from_entries(&s, &s, DIFFERENTIAL, [(0, 1, q(1))]).unwrap()).unwrap()
    }

    #[test]
    fn rejects_non_square_zero() {
        let s = BigradedSpace::from_triples(Field::Rational, [("x", 0, 0), ("y", 1, 0), ("z", 2, 0)]).unwrap();
        let d = GradedMap::from_entries(&s, &s, DIFFERENTIAL, [(0, 1, q(1)), (1, 2, q(1))]).unwrap();
        let err = Complex::new(d).unwrap_err();
        assert_eq!(
            err,
            Error::IdentityFails {
                identity: "d∘d=0".into(),
                defect: 1
            }
        );
    }

    #[test]
    fn degree_zero_differential_sign() {
        let c = acyclic();
        let u = GradedMap::from_entries(c.space(), c.space(), Bidegree::ZERO, [(0, 0, q(1))]).unwrap();
        let du = map_differential(&u, &c, &c).unwrap();
        let expect = c.d().compose(&u).unwrap().sub(&u.compose(c.d()).unwrap()).unwrap();
        assert_eq!(du, expect);
    }

    #[test]
    fn homotopy_of_acyclic_pair() {
        let c = acyclic();
        let h = GradedMap::from_entries(c.space(), c.space(), Bidegree(-1, 0), [(1, 0, q(1))]).unwrap();
        let dh = map_differential(&h, &c, &c).unwrap();
        assert_eq!(dh, GradedMap::identity(c.space()));
        assert!(!is_closed(&h, &c, &c).unwrap());
        assert!(is_closed(&GradedMap::identity(c.space()), &c, &c).unwrap());
    }

    #[test]
    fn tensor_differential_sign() {
        let c = acyclic();
        let cc = tensor_complex(&c, &c).unwrap();
        // d(y⊗x) = dy⊗x - y⊗dx = -y⊗y
        let j = cc.space().index_of("y⊗x").unwrap();
        let i = cc.space().index_of("y⊗y").unwrap();
        assert_eq!(cc.d().entry(i, j), q(-1));
        let via_maps = c
            .d()
            .tensor(&GradedMap::identity(c.space()))
            .unwrap()
            .add(&GradedMap::identity(c.space()).tensor(c.d()).unwrap())
            .unwrap();
        assert_eq!(cc.d(), &via_maps);
    }

    #[test]
    fn suspension_is_closed_and_invertible() {
        let c = acyclic();
        let sus = suspend(&c);
        assert_eq!(sus.complex.space().bidegree(0), Bidegree(-1, 0));
        assert!(is_closed(&sus.s, &c, &sus.complex).unwrap());
        assert_eq!(sus.s.compose(&sus.s_inv).unwrap(), GradedMap::identity(sus.complex.space()));
        let conj = sus.s.compose(c.d()).unwrap().compose(&sus.s_inv).unwrap().neg();
        assert_eq!(&conj, sus.complex.d());
        let twice = suspend(&sus.complex);
        assert_eq!(twice.complex.space().bidegree(1), Bidegree(-1, 0));
        assert_eq!(twice.complex.d().entry(1, 0), q(1));
    }
}
