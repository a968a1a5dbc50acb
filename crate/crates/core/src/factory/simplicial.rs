//! Simplicial cochain algebras with the front-face/back-face cup product.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, DIFFERENTIAL};
use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::multilinear::Powers;
use crate::scalar::{Field, Scalar};
use crate::space::{BasisElement, Bidegree, BigradedSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplexDescription {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplexDescription {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>, facets: Vec<Vec<usize>>) -> Self {
        SimplicialComplexDescription {
            vertices: vertices.into_iter().map(Into::into).collect(),
            facets,
        }
    }

    pub fn point() -> Self {
        Self::new(["p"], vec![vec![0]])
    }

    pub fn two_points() -> Self {
        Self::new(["p", "q"], vec![vec![0], vec![1]])
    }

    pub fn interval() -> Self {
        Self::new(["a", "b"], vec![vec![0, 1]])
    }

    /// Boundary of a triangle.
    pub fn circle() -> Self {
        Self::new(["a", "b", "c"], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    /// The 3×3 grid triangulation of the torus (9 vertices, 18 triangles).
    pub fn torus() -> Self {
        let v = |i: usize, j: usize| 3 * (i % 3) + (j % 3);
        let mut facets = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for tri in [[v(i, j), v(i + 1, j), v(i + 1, j + 1)], [v(i, j), v(i, j + 1), v(i + 1, j + 1)]] {
                    let mut t = tri.to_vec();
                    t.sort_unstable();
                    facets.push(t);
                }
            }
        }
        Self::new((0..9).map(|i| format!("v{i}")), facets)
    }

    /// All faces, ordered by dimension and then lexicographically.
    pub fn simplices(&self) -> Result<Vec<Vec<usize>>> {
        let mut faces = BTreeSet::new();
        for facet in &self.facets {
            if facet.is_empty() || facet.windows(2).any(|w| w[0] >= w[1]) || facet.iter().any(|&v| v >= self.vertices.len()) {
                return Err(Error::Rejected(format!("malformed facet {facet:?}")));
            }
            let k = facet.len();
            for mask in 1u64..(1 << k) {
                let face: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| facet[i]).collect();
                faces.insert((face.len(), face));
            }
        }
        Ok(faces.into_iter().map(|(_, f)| f).collect())
    }
}

/// Cochains `C^*(K)` in weight 0 with the simplicial coboundary, and the cup product.
pub fn cochain_dga(k: &SimplicialComplexDescription, field: Field) -> Result<(Complex, GradedMap)> {
    let simplices = k.simplices()?;
    let single = k.vertices.iter().all(|v| v.chars().count() == 1);
    let label = |s: &[usize]| -> String {
        let names: Vec<&str> = s.iter().map(|&i| k.vertices[i].as_str()).collect();
        if single {
            names.concat()
        } else {
            names.join("-")
        }
    };
    let space = BigradedSpace::new(
        field,
        simplices
            .iter()
            .map(|s| BasisElement {
                name: label(s),
                degree: s.len() as i64 - 1,
                weight: 0,
            })
            .collect(),
    )?;
    let index = |s: &[usize]| simplices.iter().position(|t| t == s);
    // d(σ*) = Σ_{τ ⊃ σ} (-1)^i τ*, where σ is τ with its i-th vertex removed
    let mut d_entries = Vec::new();
    for (ti, tau) in simplices.iter().enumerate() {
        if tau.len() < 2 {
            continue;
        }
        for i in 0..tau.len() {
            let mut face = tau.clone();
            face.remove(i);
            let si = index(&face).expect("closed under faces");
            d_entries.push((si, ti, Scalar::sign(field, i as i64)));
        }
    }
    let d = GradedMap::from_entries(&space, &space, DIFFERENTIAL, d_entries)?;
    let complex = Complex::new(d)?;
    let square = Powers::new(&space, 2);
    let mut mu_entries = Vec::new();
    for (ti, tau) in simplices.iter().enumerate() {
        for p in 0..tau.len() {
            let front = index(&tau[..=p]).unwrap();
            let back = index(&tau[p..]).unwrap();
            mu_entries.push((square.get(2).join_index(&[front, back]), ti, field.one()));
        }
    }
    let mu = GradedMap::from_entries(square.get(2), &space, Bidegree::ZERO, mu_entries)?;
    Ok((complex, mu))
}
