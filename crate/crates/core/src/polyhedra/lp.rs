use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Exact search for `y` with `<g, y> > 0` for every row `g`.
///
/// Solves `max t` subject to `<g, y> >= t`, `t <= 1`, `-1 <= y <= 1` with a
/// dense rational simplex using Bland's rule. Returns `None` when the
/// optimum is `t = 0`, i.e. no strict solution exists.
pub fn strictly_positive_solution(rows: &[Vec<Rational>], nvars: usize) -> Option<Vec<Rational>> {
    if rows.is_empty() {
        return Some(vec![Rational::zero(); nvars]);
    }
    // structural columns: y+ (nvars), y- (nvars), t
    let ns = 2 * nvars + 1;
    let nr = rows.len() + 2 * nvars + 1;
    let width = ns + nr + 1;
    let rhs = width - 1;
    let mut tab = vec![vec![Rational::zero(); width]; nr];
    for (r, g) in rows.iter().enumerate() {
        for j in 0..nvars {
            tab[r][j] = -g[j].clone();
            tab[r][nvars + j] = g[j].clone();
        }
        tab[r][2 * nvars] = Rational::one();
    }
    for j in 0..2 * nvars {
        let r = rows.len() + j;
        tab[r][j] = Rational::one();
        tab[r][rhs] = Rational::one();
    }
    let last = nr - 1;
    tab[last][2 * nvars] = Rational::one();
    tab[last][rhs] = Rational::one();
    for (r, row) in tab.iter_mut().enumerate() {
        row[ns + r] = Rational::one();
    }
    let mut basis: Vec<usize> = (ns..ns + nr).collect();
    let mut obj = vec![Rational::zero(); width];
    obj[2 * nvars] = -Rational::one();

    loop {
        let Some(enter) = (0..width - 1).find(|&c| obj[c].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..nr {
            if !tab[r][enter].is_positive() {
                continue;
            }
            let ratio = &tab[r][rhs] / &tab[r][enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let (pr, _) = leave.expect("bounded program");
        let piv = tab[pr][enter].clone();
        for v in tab[pr].iter_mut() {
            *v /= &piv;
        }
        let prow = tab[pr].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (v, p) in obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[pr] = enter;
    }

    let mut x = vec![Rational::zero(); ns];
    for (r, &b) in basis.iter().enumerate() {
        if b < ns {
            x[b] = tab[r][rhs].clone();
        }
    }
    if !x[2 * nvars].is_positive() {
        return None;
    }
    Some((0..nvars).map(|j| &x[j] - &x[nvars + j]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot_q, q, q_vec};

    #[test]
    fn feasible_and_infeasible() {
        let rows = vec![q_vec(&[1, 0]), q_vec(&[0, 1]), q_vec(&[-1, -1])];
        assert!(strictly_positive_solution(&rows, 2).is_none());
        let rows = vec![q_vec(&[1, -1]), q_vec(&[0, 1]), q_vec(&[-3, 5])];
        let y = strictly_positive_solution(&rows, 2).unwrap();
        for g in &rows {
            assert!(dot_q(g, &y) > q(0));
        }
        assert!(strictly_positive_solution(&[q_vec(&[0, 0])], 2).is_none());
        assert!(strictly_positive_solution(&[q_vec(&[1, 0]), q_vec(&[-1, 0])], 2).is_none());
    }
}
