use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lp::strictly_positive_solution;
use super::{FaceTuple, NewtonPolyhedron};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{clear_denominators, dot_i64, primitive_i128, q, q_vec};
use crate::Rational;

/// Largest ambient dimension handled by exact enumeration.
pub const MAX_EXACT_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum TupleMode {
    Exact,
    /// Random primitive covectors with entries in `[-bound, bound]`.
    Sampled {
        samples: usize,
        bound: i64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleEnumeration {
    pub tuples: Vec<FaceTuple>,
    /// False for sampled enumeration, which may miss tuples.
    pub complete: bool,
}

/// Every face of a polytope, as sorted vertex-index sets. The polytope
/// itself is included; the empty face is not.
pub fn face_lattice(p: &NewtonPolyhedron) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..p.vertices().len()).collect();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert(all);
    let mut queue: Vec<Vec<usize>> = p.facets().iter().map(|f| f.vertices.clone()).collect();
    let facet_sets = queue.clone();
    while let Some(f) = queue.pop() {
        if !faces.insert(f.clone()) {
            continue;
        }
        for g in &facet_sets {
            let meet: Vec<usize> = f.iter().filter(|i| g.contains(i)).copied().collect();
            if !meet.is_empty() && !faces.contains(&meet) {
                queue.push(meet);
            }
        }
    }
    faces.into_iter().collect()
}

/// All face tuples `(Delta(q, Gamma_i))_i` whose covector makes every
/// `d(q, Gamma_i)` negative, enumerated exactly through the normal fan of
/// the Minkowski sum. Supports `n <= 4`.
pub fn enumerate_negative_face_tuples(polys: &[NewtonPolyhedron]) -> Result<Vec<FaceTuple>> {
    Ok(enumerate_face_tuples_with(polys, &TupleMode::Exact, Exec::Sequential)?.tuples)
}

pub fn enumerate_face_tuples_with(
    polys: &[NewtonPolyhedron],
    mode: &TupleMode,
    exec: Exec,
) -> Result<TupleEnumeration> {
    let Some(first) = polys.first() else {
        return Err(Error::NoComponents);
    };
    let n = first.ambient_dim();
    if let Some(bad) = polys.iter().find(|p| p.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.ambient_dim(),
        });
    }
    match mode {
        TupleMode::Exact => {
            if n > MAX_EXACT_DIM {
                return Err(Error::DimensionTooLarge(n));
            }
            exact(polys, exec)
        }
        TupleMode::Sampled { samples, bound, seed } => {
            if *bound < 1 {
                return Err(Error::InvalidArgument("sampling bound must be >= 1".into()));
            }
            Ok(sampled(polys, *samples, *bound, *seed, exec))
        }
    }
}

fn tuple_for(polys: &[NewtonPolyhedron], q: &[i64]) -> FaceTuple {
    let (degrees, faces) = polys.iter().map(|p| p.d_and_face(q)).unzip();
    FaceTuple {
        faces,
        witness_q: q.to_vec(),
        degrees,
    }
}

fn exact(polys: &[NewtonPolyhedron], exec: Exec) -> Result<TupleEnumeration> {
    let mut sum = polys[0].clone();
    for p in &polys[1..] {
        sum = sum.minkowski_sum(p)?;
    }
    let faces = face_lattice(&sum);
    let found: Vec<Result<Option<FaceTuple>>> = exec.map_slice(&faces, |f| tuple_for_face(polys, &sum, f));
    let mut out = BTreeMap::new();
    for t in found {
        if let Some(t) = t? {
            let key: Vec<_> = t.faces.iter().map(|f| f.points().to_vec()).collect();
            out.entry(key).or_insert(t);
        }
    }
    Ok(TupleEnumeration {
        tuples: out.into_values().collect(),
        complete: true,
    })
}

/// Searches the relative interior of the normal cone of one face of the
/// Minkowski sum for a covector with all `d_i < 0`.
fn tuple_for_face(polys: &[NewtonPolyhedron], sum: &NewtonPolyhedron, face: &[usize]) -> Result<Option<FaceTuple>> {
    let n = sum.ambient_dim();
    let normals: Vec<&Vec<i64>> = sum
        .facets()
        .iter()
        .filter(|f| face.iter().all(|v| f.vertices.contains(v)))
        .map(|f| &f.normal)
        .collect();
    let lineality = sum.complement();
    let mut q0 = vec![0i64; n];
    for a in &normals {
        for (x, y) in q0.iter_mut().zip(a.iter()) {
            *x += y;
        }
    }
    let base: Vec<_> = polys.iter().map(|p| p.d_and_face(&q0).1).collect();

    // variables: lambda (one per normal, strictly positive), mu (free)
    let gens: Vec<&Vec<i64>> = normals.iter().copied().chain(lineality.iter()).collect();
    let nv = gens.len();
    let mut rows: Vec<Vec<Rational>> = (0..normals.len())
        .map(|k| (0..nv).map(|j| q(i64::from(j == k))).collect())
        .collect();
    for f in &base {
        let v = &f.points()[0];
        rows.push(gens.iter().map(|g| q(-dot_i64(g, v))).collect());
    }
    let Some(y) = strictly_positive_solution(&rows, nv) else {
        return Ok(None);
    };
    let mut qr = vec![q(0); n];
    for (g, c) in gens.iter().zip(&y) {
        for (acc, gj) in qr.iter_mut().zip(q_vec(g)) {
            *acc += c * gj;
        }
    }
    let qi = clear_denominators(&qr);
    let qi = primitive_i128(&qi.iter().map(|&x| x as i128).collect::<Vec<_>>())
        .ok_or_else(|| Error::Internal("zero covector from face search".into()))?;
    let t = tuple_for(polys, &qi);
    let consistent =
        t.degrees.iter().all(|&d| d < 0) && t.faces.iter().zip(&base).all(|(a, b)| a.points() == b.points());
    if !consistent {
        return Err(Error::Internal(format!(
            "covector {qi:?} does not realize the expected face tuple"
        )));
    }
    Ok(Some(t))
}

fn sampled(polys: &[NewtonPolyhedron], samples: usize, bound: i64, seed: u64, exec: Exec) -> TupleEnumeration {
    let n = polys[0].ambient_dim();
    let found: Vec<Option<FaceTuple>> = exec.map(samples, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
        let raw: Vec<i128> = (0..n).map(|_| i128::from(rng.gen_range(-bound..=bound))).collect();
        let qv = primitive_i128(&raw)?;
        let t = tuple_for(polys, &qv);
        t.degrees.iter().all(|&d| d < 0).then_some(t)
    });
    let mut out = BTreeMap::new();
    for t in found.into_iter().flatten() {
        let key: Vec<_> = t.faces.iter().map(|f| f.points().to_vec()).collect();
        out.entry(key).or_insert(t);
    }
    TupleEnumeration {
        tuples: out.into_values().collect(),
        complete: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::newton_polyhedron;

    fn gam(pts: &[&[i64]]) -> NewtonPolyhedron {
        newton_polyhedron(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn square_face_lattice() {
        let s = gam(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(face_lattice(&s).len(), 9);
        let seg = gam(&[&[0, 0], &[2, 2]]);
        assert_eq!(face_lattice(&seg).len(), 3);
    }

    #[test]
    fn single_polyhedron_tuples() {
        let g = gam(&[&[0, 0], &[2, 0], &[1, 1], &[2, 2], &[4, 0]]);
        let tuples = enumerate_negative_face_tuples(&[g]).unwrap();
        let faces: Vec<Vec<Vec<i64>>> = tuples.iter().map(|t| t.faces[0].points().to_vec()).collect();
        // the edge from (2,2) to (4,0) and its two endpoints
        assert_eq!(
            faces,
            vec![vec![vec![2, 2]], vec![vec![2, 2], vec![4, 0]], vec![vec![4, 0]]]
        );
        for t in &tuples {
            assert!(t.degrees[0] < 0);
        }
    }

    #[test]
    fn exact_and_sampled_agree_on_small_cases() {
        let a = gam(&[&[0, 0], &[2, 0], &[0, 2]]);
        let b = gam(&[&[1, 0], &[0, 3], &[2, 2]]);
        let exact = enumerate_negative_face_tuples(&[a.clone(), b.clone()]).unwrap();
        let mode = TupleMode::Sampled {
            samples: 4000,
            bound: 9,
            seed: 7,
        };
        let s = enumerate_face_tuples_with(&[a, b], &mode, Exec::Sequential).unwrap();
        assert!(!s.complete);
        for t in &s.tuples {
            assert!(exact
                .iter()
                .any(|e| e.faces == t.faces || e.faces.iter().zip(&t.faces).all(|(x, y)| x.points() == y.points())));
        }
    }

    #[test]
    fn too_large_is_an_error() {
        let g = newton_polyhedron(&[vec![1, 0, 0, 0, 0], vec![0, 0, 0, 0, 1]]).unwrap();
        assert!(matches!(
            enumerate_negative_face_tuples(&[g]),
            Err(Error::DimensionTooLarge(5))
        ));
    }
}
