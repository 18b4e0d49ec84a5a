//! Just enough dense linear algebra for the desk-scale systems in this crate:
//! exact nonnegative integer matrices for path counting and small f64 solves.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square nonnegative integer matrix with checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    n: usize,
    a: Vec<u128>,
}

impl IntMat {
    pub fn zeros(n: usize) -> Self {
        IntMat { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u128 {
        self.a[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut u128 {
        &mut self.a[i * self.n + j]
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let term = aik
                        .checked_mul(other.get(k, j))
                        .ok_or_else(|| Error::NumericOverflow("matrix product".into()))?;
                    let cell = out.get_mut(i, j);
                    *cell = cell
                        .checked_add(term)
                        .ok_or_else(|| Error::NumericOverflow("matrix product".into()))?;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<IntMat> {
        let mut acc = IntMat::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn row_sum(&self, i: usize) -> u128 {
        (0..self.n).map(|j| self.get(i, j)).sum()
    }

    pub fn max_row_sum(&self) -> u128 {
        (0..self.n).map(|i| self.row_sum(i)).max().unwrap_or(0)
    }

    pub fn to_f64(&self) -> Mat {
        Mat {
            n: self.n,
            a: self.a.iter().map(|&x| x as f64).collect(),
        }
    }

    /// Irreducibility of the nonzero pattern: every ordered pair (i, j) is
    /// connected by some power.
    pub fn is_irreducible(&self) -> bool {
        let n = self.n;
        if n == 0 {
            return false;
        }
        for start in 0..n {
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if self.get(i, j) > 0 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            if seen.iter().any(|&s| !s) {
                return false;
            }
        }
        true
    }
}

/// Dense row-major f64 matrix.
#[derive(Debug, Clone)]
pub struct Mat {
    n: usize,
    a: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, a: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                s += self.a[i * n + j] * x[j];
            }
            y[i] = s;
        }
        y
    }

    /// Solves self * x = b by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut a = self.a.clone();
        let mut x = b.to_vec();
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            if a[piv * n + col].abs() < 1e-300 {
                return Err(Error::SingularSystem);
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                x.swap(col, piv);
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
                x[r] -= f * x[col];
            }
        }
        for col in (0..n).rev() {
            let mut s = x[col];
            for j in col + 1..n {
                s -= a[col * n + j] * x[j];
            }
            x[col] = s / a[col * n + col];
        }
        Ok(x)
    }

    /// Solves with a complex right-hand side (real matrix, two real solves).
    pub fn solve_complex(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let re: Vec<f64> = b.iter().map(|z| z.re).collect();
        let im: Vec<f64> = b.iter().map(|z| z.im).collect();
        let xr = self.solve(&re)?;
        let xi = self.solve(&im)?;
        Ok(xr
            .into_iter()
            .zip(xi)
            .map(|(r, i)| Complex64::new(r, i))
            .collect())
    }
}

/// An upper bound C * q^k (k > after) on sums of weighted path counts, from
/// the submultiplicative estimate rho(B) <= ||B^m||_inf^(1/m).
#[derive(Debug, Clone, Copy)]
pub struct GeometricTail {
    pub coeff: f64,
    pub ratio: f64,
}

impl GeometricTail {
    /// Bound on sum_{k > after} e^{-beta k} ||B^k||_inf.
    pub fn tail_after(&self, after: usize) -> f64 {
        if self.ratio >= 1.0 {
            return f64::INFINITY;
        }
        self.coeff * self.ratio.powi(after as i32 + 1) / (1.0 - self.ratio)
    }
}

/// Builds the geometric bound for e^{-beta k} ||B^k||_inf. Increases the
/// window until the estimated ratio drops below 1, which succeeds whenever
/// beta is strictly above ln rho(B).
pub fn geometric_tail(b: &IntMat, beta: f64) -> Result<GeometricTail> {
    let n = b.n();
    if n == 0 {
        return Ok(GeometricTail { coeff: 0.0, ratio: 0.0 });
    }
    let mut m = 16usize;
    loop {
        // Row sums of B^k satisfy s_{k+1} = B s_k starting from the ones
        // vector; f64 is fine for an upper bound at this scale.
        let bf = b.to_f64();
        let mut norms = Vec::with_capacity(m + 1);
        let mut s = vec![1.0f64; n];
        let inf_norm = |s: &[f64]| s.iter().fold(0.0f64, |a, &x| a.max(x));
        norms.push(inf_norm(&s));
        for _ in 0..m {
            s = bf.mul_vec(&s);
            norms.push(inf_norm(&s));
        }
        let rho_ub = norms[m].powf(1.0 / m as f64).max(1e-12);
        let ratio = (-beta).exp() * rho_ub * (1.0 + 1e-9);
        if ratio < 1.0 - 1e-12 {
            let mut coeff = 0.0f64;
            for (k, nk) in norms.iter().enumerate().take(m) {
                coeff = coeff.max(nk / rho_ub.powi(k as i32));
            }
            return Ok(GeometricTail {
                coeff: coeff * (1.0 + 1e-9),
                ratio,
            });
        }
        m *= 2;
        if m > 4096 {
            return Err(Error::BetaAtOrBelowCritical {
                beta,
                critical: rho_ub.ln(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_pow() {
        let mut b = IntMat::zeros(2);
        *b.get_mut(0, 0) = 1;
        *b.get_mut(0, 1) = 1;
        *b.get_mut(1, 0) = 2;
        let b2 = b.pow(2).unwrap();
        assert_eq!(
            (b2.get(0, 0), b2.get(0, 1), b2.get(1, 0), b2.get(1, 1)),
            (3, 1, 2, 2)
        );
        assert!(b.is_irreducible());
    }

    #[test]
    fn solve_small() {
        let a = Mat::from_fn(2, |i, j| match (i, j) {
            (0, 0) => 0.75,
            (0, 1) => -0.25,
            (1, 0) => -0.5,
            (1, 1) => 1.0,
            _ => unreachable!(),
        });
        let x = a.solve(&[0.5, 0.5]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_detected() {
        let a = Mat::from_fn(2, |_, _| 1.0);
        assert!(matches!(a.solve(&[1.0, 2.0]), Err(Error::SingularSystem)));
    }

    #[test]
    fn tail_bound_dominates_series() {
        let mut b = IntMat::zeros(2);
        *b.get_mut(0, 0) = 1;
        *b.get_mut(0, 1) = 1;
        *b.get_mut(1, 0) = 2;
        // rho = 2; beta = ln 4 gives ratio about 1/2.
        let tail = geometric_tail(&b, 4.0f64.ln()).unwrap();
        // Actual tail sum_{k>5} e^{-beta k} ||B^k||_inf computed directly.
        let mut actual = 0.0;
        let mut p = IntMat::identity(2);
        for k in 0..60 {
            p = p.mul(&b).unwrap();
            if k + 1 > 5 {
                actual += (-(4.0f64.ln()) * (k as f64 + 1.0)).exp() * p.max_row_sum() as f64;
            }
        }
        assert!(tail.tail_after(5) >= actual);
    }
}
