//! Newton polyhedra at infinity: exact convex hulls of integer support
//! sets, faces `Delta(q, Gamma)` with values `d(q, Gamma)`, convenience,
//! Minkowski sums, lattice points and face-tuple enumeration.
//!
//! A polyhedron is stored as the compact hull of its generators. Facets
//! are relative to the affine hull: each facet normal lies in the
//! direction space of the polyhedron and is a primitive integer vector.

mod fan;
mod lp;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use fan::{
    enumerate_face_tuples_with, enumerate_negative_face_tuples, face_lattice, TupleEnumeration, TupleMode,
    MAX_EXACT_DIM,
};
pub use lp::strictly_positive_solution;

use crate::error::{Error, Result};
use crate::linalg::{self, clear_denominators, cross_product, dot_i64, kernel_i64, primitive_i128};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    /// Primitive inner normal `a` with `<a, kappa> >= offset` on the polyhedron.
    pub normal: Vec<i64>,
    pub offset: i64,
    /// Indices into [`NewtonPolyhedron::vertices`].
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    n: usize,
    generators: Vec<Vec<i64>>,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    dim: usize,
    complement: Vec<Vec<i64>>,
}

/// Newton polyhedron of a support set in `Z_+^n`.
pub fn newton_polyhedron(support: &[Vec<i64>]) -> Result<NewtonPolyhedron> {
    if let Some(bad) = support.iter().find(|p| p.iter().any(|&x| x < 0)) {
        return Err(Error::NegativeSupport(bad.clone()));
    }
    NewtonPolyhedron::hull(support)
}

impl NewtonPolyhedron {
    /// Exact convex hull of arbitrary integer points.
    pub fn hull(points: &[Vec<i64>]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptySupport);
        };
        let n = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let mut generators = points.to_vec();
        generators.sort();
        generators.dedup();

        let base = &generators[0];
        let diffs: Vec<Vec<i64>> = generators[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let dim = linalg::rank_i64(&diffs);
        let complement = kernel_i64(&diffs, n);

        if dim == 0 {
            return Ok(Self {
                n,
                vertices: vec![base.clone()],
                generators,
                facets: Vec::new(),
                dim,
                complement,
            });
        }

        let facet_map = facet_hyperplanes(&generators, &complement, dim, n);
        let on_facet: Vec<(Vec<i64>, i64, Vec<usize>)> = facet_map
            .into_iter()
            .map(|(normal, offset)| {
                let idx = generators
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| dot_i64(&normal, g) == offset)
                    .map(|(i, _)| i)
                    .collect();
                (normal, offset, idx)
            })
            .collect();

        let is_vertex: Vec<bool> = (0..generators.len())
            .map(|gi| {
                let normals: Vec<Vec<i64>> = on_facet
                    .iter()
                    .filter(|(_, _, idx)| idx.contains(&gi))
                    .map(|(a, _, _)| a.clone())
                    .collect();
                linalg::rank_i64(&normals) == dim
            })
            .collect();
        let mut vertex_index = vec![usize::MAX; generators.len()];
        let mut vertices = Vec::new();
        for (gi, g) in generators.iter().enumerate() {
            if is_vertex[gi] {
                vertex_index[gi] = vertices.len();
                vertices.push(g.clone());
            }
        }
        let facets = on_facet
            .into_iter()
            .map(|(normal, offset, idx)| Facet {
                normal,
                offset,
                vertices: idx
                    .into_iter()
                    .filter(|&gi| is_vertex[gi])
                    .map(|gi| vertex_index[gi])
                    .collect(),
            })
            .collect();
        Ok(Self {
            n,
            generators,
            vertices,
            facets,
            dim,
            complement,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Deduplicated support points, sorted.
    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Affine dimension.
    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Integer basis of the covectors constant on the polyhedron.
    pub fn complement(&self) -> &[Vec<i64>] {
        &self.complement
    }

    /// `d(q, Gamma)` and `Delta(q, Gamma)` for an integer covector. For
    /// `q = 0` this is the whole polyhedron with `d = 0`. The returned `d`
    /// is for `q` as given; the face stores the primitive witness and its
    /// own value.
    pub fn d_and_face(&self, q: &[i64]) -> (i64, Face) {
        assert_eq!(q.len(), self.n, "covector length");
        let d = self
            .generators
            .iter()
            .map(|g| dot_i64(q, g))
            .min()
            .expect("nonempty generators");
        let witness: Vec<i64> =
            primitive_i128(&q.iter().map(|&x| x as i128).collect::<Vec<_>>()).unwrap_or_else(|| vec![0; self.n]);
        let scale = q.iter().zip(&witness).find(|(_, w)| **w != 0).map_or(1, |(a, w)| a / w);
        let points: Vec<Vec<i64>> = self.generators.iter().filter(|g| dot_i64(q, g) == d).cloned().collect();
        let vertices = self.vertices.iter().filter(|g| dot_i64(q, g) == d).cloned().collect();
        (
            d,
            Face {
                n: self.n,
                witness_q: witness,
                d: d / scale,
                points,
                vertices,
            },
        )
    }

    /// Rational-covector version of [`Self::d_and_face`].
    pub fn d_and_face_rational(&self, q: &[Rational]) -> (Rational, Face) {
        let qi = clear_denominators(q);
        let (d_int, face) = self.d_and_face(&qi);
        let lambda = q
            .iter()
            .zip(&qi)
            .find(|(_, w)| **w != 0)
            .map_or_else(|| Rational::from_integer(1.into()), |(a, w)| a / linalg::q(*w));
        (lambda * linalg::q(d_int), face)
    }

    /// True iff the polyhedron meets every coordinate axis away from 0.
    pub fn is_convenient(&self) -> bool {
        (0..self.n).all(|j| {
            self.generators
                .iter()
                .any(|g| g[j] > 0 && g.iter().enumerate().all(|(i, &x)| i == j || x == 0))
        })
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let sums: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .flat_map(|a| {
                other
                    .vertices
                    .iter()
                    .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
            })
            .collect();
        Self::hull(&sums)
    }

    /// Translate by an integer vector.
    pub fn translate(&self, t: &[i64]) -> Result<Self> {
        let pts: Vec<Vec<i64>> = self
            .generators
            .iter()
            .map(|g| g.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        Self::hull(&pts)
    }

    /// Exact membership of an integer point.
    pub fn contains(&self, z: &[i64]) -> bool {
        let base = &self.generators[0];
        let rel: Vec<i64> = z.iter().zip(base).map(|(a, b)| a - b).collect();
        if self.complement.iter().any(|w| dot_i64(w, &rel) != 0) {
            return false;
        }
        self.facets.iter().all(|f| dot_i64(&f.normal, z) >= f.offset)
    }

    /// All lattice points of the polyhedron, sorted.
    pub fn integer_points(&self) -> Vec<Vec<i64>> {
        let lo: Vec<i64> = (0..self.n)
            .map(|j| self.vertices.iter().map(|v| v[j]).min().unwrap())
            .collect();
        let hi: Vec<i64> = (0..self.n)
            .map(|j| self.vertices.iter().map(|v| v[j]).max().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut z = lo.clone();
        loop {
            if self.contains(&z) {
                out.push(z.clone());
            }
            let mut j = self.n;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if z[j] < hi[j] {
                    z[j] += 1;
                    break;
                }
                z[j] = lo[j];
            }
        }
    }

    pub fn to_json(&self) -> PolyhedronJson {
        PolyhedronJson {
            n: self.n,
            vertices: self.vertices.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetJson {
                    normal: f.normal.clone(),
                    offset: f.offset.to_string(),
                })
                .collect(),
            dim: self.dim,
        }
    }
}

/// Enumerates the relative facet hyperplanes of the hull by brute force
/// over `dim`-subsets of the generators.
fn facet_hyperplanes(gens: &[Vec<i64>], complement: &[Vec<i64>], dim: usize, n: usize) -> BTreeMap<Vec<i64>, i64> {
    let mut out = BTreeMap::new();
    let m = gens.len();
    let mut combo: Vec<usize> = (0..dim).collect();
    loop {
        let base = &gens[combo[0]];
        let mut rows: Vec<Vec<i64>> = combo[1..]
            .iter()
            .map(|&i| gens[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        rows.extend(complement.iter().cloned());
        if let Some(normal) = primitive_i128(&cross_product(&rows, n)) {
            let v0 = dot_i64(&normal, base);
            let (mut below, mut above) = (false, false);
            for g in gens {
                let v = dot_i64(&normal, g);
                below |= v < v0;
                above |= v > v0;
                if below && above {
                    break;
                }
            }
            if !below {
                out.insert(normal, v0);
            } else if !above {
                out.insert(normal.iter().map(|x| -x).collect(), -v0);
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] < m - dim + i {
                combo[i] += 1;
                for k in i + 1..dim {
                    combo[k] = combo[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A face `Delta(q, Gamma)` together with its witness covector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    n: usize,
    witness_q: Vec<i64>,
    d: i64,
    points: Vec<Vec<i64>>,
    vertices: Vec<Vec<i64>>,
}

impl Face {
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Primitive covector realizing the face (zero for the whole polyhedron).
    pub fn witness_q(&self) -> &[i64] {
        &self.witness_q
    }

    /// `d(witness_q, Gamma)`.
    pub fn d(&self) -> i64 {
        self.d
    }

    /// Generators on the face, sorted.
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        let base = &self.points[0];
        let diffs: Vec<Vec<i64>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        linalg::rank_i64(&diffs)
    }
}

/// Faces `(Delta(q, Gamma_1), ..., Delta(q, Gamma_p))` realized by one covector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceTuple {
    pub faces: Vec<Face>,
    pub witness_q: Vec<i64>,
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub n: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<FacetJson>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetJson {
    pub normal: Vec<i64>,
    pub offset: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gam(pts: &[&[i64]]) -> NewtonPolyhedron {
        newton_polyhedron(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn g31() -> NewtonPolyhedron {
        gam(&[&[0, 0], &[2, 0], &[1, 1], &[2, 2], &[4, 0]])
    }

    #[test]
    fn example_31_hull() {
        let g = g31();
        assert_eq!(g.vertices(), &[vec![0, 0], vec![2, 2], vec![4, 0]]);
        assert_eq!(g.dimension(), 2);
        assert_eq!(g.facets().len(), 3);
        for f in g.facets() {
            assert_eq!(f.vertices.len(), 2);
            for gen in g.generators() {
                assert!(dot_i64(&f.normal, gen) >= f.offset);
            }
        }
    }

    #[test]
    fn degenerate_hulls() {
        let p = gam(&[&[3, 5]]);
        assert_eq!((p.dimension(), p.vertices().len()), (0, 1));
        let s = gam(&[&[2, 0], &[0, 2]]);
        assert_eq!(s.dimension(), 1);
        assert_eq!(s.vertices(), &[vec![0, 2], vec![2, 0]]);
        let s3 = gam(&[&[2, 0, 1], &[1, 1, 1], &[0, 2, 1]]);
        assert_eq!(s3.dimension(), 1);
        assert_eq!(s3.vertices().len(), 2);
        assert!(matches!(newton_polyhedron(&[]), Err(Error::EmptySupport)));
        assert!(matches!(
            newton_polyhedron(&[vec![-1, 0]]),
            Err(Error::NegativeSupport(_))
        ));
    }

    #[test]
    fn faces_and_values() {
        let g = g31();
        let (d, f) = g.d_and_face(&[-1, -1]);
        assert_eq!(d, -4);
        assert_eq!(f.points(), &[vec![2, 2], vec![4, 0]]);
        let (d, f) = g.d_and_face(&[0, -1]);
        assert_eq!(d, -2);
        assert_eq!(f.points(), &[vec![2, 2]]);
        let (d, f) = g.d_and_face(&[1, 1]);
        assert_eq!(d, 0);
        assert!(f.points().contains(&vec![0, 0]));
        let (d, f) = g.d_and_face(&[-2, -2]);
        assert_eq!((d, f.d(), f.witness_q()), (-8, -4, &[-1i64, -1][..]));
        let (d, f) = g.d_and_face(&[0, 0]);
        assert_eq!(d, 0);
        assert_eq!(f.points(), g.generators());
        let (dq, _) = g.d_and_face_rational(&[
            Rational::new((-1).into(), 2.into()),
            Rational::new((-1).into(), 2.into()),
        ]);
        assert_eq!(dq, linalg::q(-2));
    }

    #[test]
    fn convenience() {
        assert!(!g31().is_convenient());
        assert!(gam(&[&[0, 0], &[2, 0], &[4, 0], &[0, 2], &[0, 4]]).is_convenient());
        assert!(gam(&[&[2, 0], &[0, 2]]).is_convenient());
    }

    #[test]
    fn minkowski() {
        let a = gam(&[&[2, 0], &[0, 4]]);
        let b = gam(&[&[2, 0], &[0, 2]]);
        let s = a.minkowski_sum(&b).unwrap();
        assert_eq!(s.vertices(), &[vec![0, 6], vec![2, 2], vec![2, 4], vec![4, 0]]);
        assert_eq!(s.dimension(), 2);
        let t = a.minkowski_sum(&gam(&[&[1, 1]])).unwrap();
        assert_eq!(t, a.translate(&[1, 1]).unwrap());
        let seg = gam(&[&[0, 0], &[1, 1]])
            .minkowski_sum(&gam(&[&[0, 0], &[2, 2]]))
            .unwrap();
        assert_eq!(seg.dimension(), 1);
        assert_eq!(seg.vertices(), &[vec![0, 0], vec![3, 3]]);
    }

    #[test]
    fn lattice_points() {
        let s = gam(&[&[2, 0], &[0, 2]]);
        assert_eq!(s.integer_points(), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let t = gam(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(t.integer_points().len(), 6);
        assert_eq!(gam(&[&[3, 5]]).integer_points(), vec![vec![3, 5]]);
    }

    #[test]
    fn four_dimensional_simplex() {
        let pts: Vec<Vec<i64>> = vec![
            vec![0, 0, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 0, 0],
        ];
        let s = newton_polyhedron(&pts).unwrap();
        assert_eq!(s.dimension(), 4);
        assert_eq!(s.vertices().len(), 5);
        assert_eq!(s.facets().len(), 5);
    }
}
