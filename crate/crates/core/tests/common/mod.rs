//! Brute-force oracles shared by the integration and acceptance tests.
//! Nothing here calls into the library's own geometry or lattice code.

#![allow(dead_code)]

use lojnewton::{ExponentVector, Polynomial, Rational};
use rand::Rng;

/// `min <q, kappa>` over the support and the points attaining it.
pub fn brute_d_and_face(support: &[Vec<i64>], q: &[i64]) -> (i64, Vec<Vec<i64>>) {
    let val = |k: &Vec<i64>| k.iter().zip(q).map(|(a, b)| a * b).sum::<i64>();
    let d = support.iter().map(val).min().unwrap();
    let mut pts: Vec<Vec<i64>> = support.iter().filter(|k| val(k) == d).cloned().collect();
    pts.sort();
    pts.dedup();
    (d, pts)
}

/// Determinant by cofactor expansion along the first row.
pub fn det_expand(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det_expand(&minor)
            })
            .sum(),
    }
}

/// Rank over the rationals by fraction-free elimination on `i128`.
pub fn rank_exact(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i128, |g, v| gcd(g, *v));
                if g > 1 {
                    m[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Lattice points of `conv{0, v_1..v_n}` other than its vertices, by a
/// bounding-box scan with barycentric coordinates from the adjugate.
pub fn simplex_extra_points(verts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = verts.len();
    // columns are the vertices: z = M t
    let m: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| verts[j][i] as i128).collect()).collect();
    let det = det_expand(&m);
    assert!(det != 0);
    let adj: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i128>> = m
                        .iter()
                        .enumerate()
                        .filter(|(r, _)| *r != j)
                        .map(|(_, row)| {
                            row.iter()
                                .enumerate()
                                .filter(|(c, _)| *c != i)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    sign * det_expand(&minor)
                })
                .collect()
        })
        .collect();
    let lo: Vec<i64> = (0..n)
        .map(|i| verts.iter().map(|v| v[i]).min().unwrap().min(0))
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|i| verts.iter().map(|v| v[i]).max().unwrap().max(0))
        .collect();
    let mut out = Vec::new();
    let mut z = lo.clone();
    loop {
        // t = adj z / det; inside iff all t >= 0 and sum t <= 1
        let t: Vec<i128> = (0..n)
            .map(|i| (0..n).map(|j| adj[i][j] * z[j] as i128).sum::<i128>() * det.signum())
            .collect();
        let inside = t.iter().all(|v| *v >= 0) && t.iter().sum::<i128>() <= det.abs();
        let is_vertex = z.iter().all(|v| *v == 0) || verts.contains(&z);
        if inside && !is_vertex {
            out.push(z.clone());
        }
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            if z[j] < hi[j] {
                z[j] += 1;
                break;
            }
            z[j] = lo[j];
            j += 1;
        }
    }
}

pub fn random_polynomial<R: Rng>(rng: &mut R, n: usize, max_terms: usize, max_exp: u32) -> Polynomial {
    let terms = rng.gen_range(1..=max_terms);
    loop {
        let p = Polynomial::from_terms(
            n,
            (0..terms).map(|_| {
                let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
                let mut c: i64 = rng.gen_range(-9..=9);
                if c == 0 {
                    c = 1;
                }
                (ExponentVector::new(e).unwrap(), Rational::from_integer(c.into()))
            }),
        )
        .unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// A random input for the unimodular completion: independent covectors
/// together with points on which all of them are nonnegative.
pub fn random_completion_instance<R: Rng>(rng: &mut R) -> (usize, Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = rng.gen_range(1..=4);
    loop {
        let d = rng.gen_range(0..=n);
        let qs: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        if qs.iter().any(|v| v.iter().all(|x| *x == 0)) || rank_exact(&qs) < d {
            continue;
        }
        let s: Vec<Vec<i64>> = (0..40)
            .map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect::<Vec<i64>>())
            .filter(|k| qs.iter().all(|v| v.iter().zip(k).map(|(a, b)| a * b).sum::<i64>() >= 0))
            .collect();
        return (n, qs, s);
    }
}

/// A mapping whose supports all lie in translates of one proper linear
/// subspace of `R^n`, so that their Minkowski sum is not full-dimensional.
pub fn random_flat_mapping<R: Rng>(rng: &mut R) -> lojnewton::PolynomialMapping {
    loop {
        let n = rng.gen_range(2..=4);
        let dim = rng.gen_range(0..n);
        let gens: Vec<Vec<i64>> = (0..dim)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        if rank_exact(&gens) < dim {
            continue;
        }
        let p = rng.gen_range(1..=n.min(3));
        let comps: Vec<Polynomial> = (0..p)
            .map(|_| {
                let base: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
                let terms = (0..rng.gen_range(1..=5)).filter_map(|_| {
                    let mut e = base.clone();
                    for g in &gens {
                        let c = rng.gen_range(-2..=2);
                        e.iter_mut().zip(g).for_each(|(x, y)| *x += c * y);
                    }
                    if e.iter().any(|x| *x < 0) {
                        return None;
                    }
                    let c: i64 = if rng.gen_bool(0.5) {
                        rng.gen_range(1..=9)
                    } else {
                        -rng.gen_range(1..=9)
                    };
                    Some((
                        ExponentVector::new(e.iter().map(|x| *x as u32).collect()).unwrap(),
                        q(c),
                    ))
                });
                let mut t: Vec<_> = terms.collect();
                t.push((
                    ExponentVector::new(base.iter().map(|x| *x as u32).collect()).unwrap(),
                    q(1),
                ));
                Polynomial::from_terms(n, t).unwrap()
            })
            .collect();
        if comps.iter().any(Polynomial::is_zero) {
            continue;
        }
        return lojnewton::PolynomialMapping::new(comps).unwrap();
    }
}

/// The starting frame: the covectors followed by the lexicographically first
/// standard basis vectors that keep the family independent.
fn extended_frame(n: usize, qs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = qs.to_vec();
    for j in 0..n {
        if out.len() == n {
            break;
        }
        let mut t = out.clone();
        t.push((0..n).map(|i| i64::from(i == j)).collect());
        if rank_exact(&t) == t.len() {
            out = t;
        }
    }
    out
}

pub fn check_completion(n: usize, qs: &[Vec<i64>], s: &[Vec<i64>]) -> Result<(), String> {
    let b = lojnewton::lattice::unimodular_complete(n, qs, s).map_err(|e| e.to_string())?;
    let rows = b.rows();
    if rows.len() != n {
        return Err("wrong row count".into());
    }
    let frame = extended_frame(n, qs);
    for j in 1..=n {
        let mut both = rows[..j].to_vec();
        both.extend_from_slice(&frame[..j]);
        if rank_exact(&rows[..j]) != j || rank_exact(&both) != j {
            return Err(format!("prefix span {j} differs"));
        }
    }
    for (j, r) in rows.iter().enumerate().take(qs.len()) {
        if s.iter().any(|k| r.iter().zip(k).map(|(a, b)| a * b).sum::<i64>() < 0) {
            return Err(format!("row {j} negative on S"));
        }
    }
    let extra = simplex_extra_points(rows);
    if !extra.is_empty() {
        return Err(format!("simplex has extra points {extra:?}"));
    }
    let m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    if det_expand(&m).abs() != 1 {
        return Err("determinant is not +-1".into());
    }
    Ok(())
}
