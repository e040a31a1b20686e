use super::{powu, rational_to_f64, Polynomial};

/// Floating-point copy of a polynomial for the numerical probes.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    n: usize,
    exps: Vec<Vec<u32>>,
    coeffs: Vec<f64>,
}

impl FloatPoly {
    pub fn from_polynomial(p: &Polynomial) -> Self {
        let (exps, coeffs) = p
            .terms()
            .map(|(e, c)| (e.entries().to_vec(), rational_to_f64(c)))
            .unzip();
        Self {
            n: p.num_vars(),
            exps,
            coeffs,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn monomial(e: &[u32], x: &[f64]) -> f64 {
        e.iter()
            .zip(x)
            .filter(|(k, _)| **k > 0)
            .map(|(&k, &v)| powu(v, k))
            .product()
    }

    fn monomial_without(e: &[u32], x: &[f64], j: usize, drop: u32) -> f64 {
        e.iter()
            .zip(x)
            .enumerate()
            .map(|(i, (&k, &v))| {
                let k = if i == j { k - drop } else { k };
                if k == 0 {
                    1.0
                } else {
                    powu(v, k)
                }
            })
            .product()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        neumaier(
            self.exps
                .iter()
                .zip(&self.coeffs)
                .map(|(e, c)| c * Self::monomial(e, x)),
        )
    }

    /// `sum |c_kappa x^kappa|`, the natural scale of `f(x)`.
    pub fn magnitude(&self, x: &[f64]) -> f64 {
        self.exps
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| (c * Self::monomial(e, x)).abs())
            .sum()
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| {
                neumaier(
                    self.exps
                        .iter()
                        .zip(&self.coeffs)
                        .filter(|(e, _)| e[j] > 0)
                        .map(|(e, c)| c * f64::from(e[j]) * Self::monomial_without(e, x, j, 1)),
                )
            })
            .collect()
    }

    /// Weighted gradient `(x_j df/dx_j)_j`.
    pub fn weighted_grad(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| {
                neumaier(
                    self.exps
                        .iter()
                        .zip(&self.coeffs)
                        .filter(|(e, _)| e[j] > 0)
                        .map(|(e, c)| c * f64::from(e[j]) * Self::monomial(e, x)),
                )
            })
            .collect()
    }

    pub fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut h = vec![vec![0.0; self.n]; self.n];
        for (e, &c) in self.exps.iter().zip(&self.coeffs) {
            for j in 0..self.n {
                if e[j] == 0 {
                    continue;
                }
                for l in j..self.n {
                    let v = if l == j {
                        if e[j] < 2 {
                            continue;
                        }
                        c * f64::from(e[j]) * f64::from(e[j] - 1) * Self::monomial_without(e, x, j, 2)
                    } else {
                        if e[l] == 0 {
                            continue;
                        }
                        let mut ee = e.clone();
                        ee[j] -= 1;
                        ee[l] -= 1;
                        c * f64::from(e[j]) * f64::from(e[l]) * Self::monomial(&ee, x)
                    };
                    h[j][l] += v;
                    if l != j {
                        h[l][j] += v;
                    }
                }
            }
        }
        h
    }
}

/// Compensated summation.
pub(crate) fn neumaier<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in it {
        let t = sum + v;
        if !t.is_finite() {
            return t;
        }
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
