//! Truncated Taylor series `a_0 + a_1 t + ... + a_{n-1} t^{n-1}`.

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct Series(pub Vec<Complex64>);

impl Series {
    pub fn zeros(len: usize) -> Self {
        Series(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.0.get(k).copied().unwrap_or_default()
    }

    /// First `len` coefficients of a coefficient slice, zero padded.
    pub fn from_slice(c: &[Complex64], len: usize) -> Self {
        Series((0..len).map(|k| c.get(k).copied().unwrap_or_default()).collect())
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        let mut out = Series::zeros(n);
        for i in 0..n {
            for j in 0..(n - i) {
                out.0[i + j] += self.0[i] * other.0[j];
            }
        }
        out
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        Series((0..n).map(|k| self.0[k] + other.0[k]).collect())
    }

    pub fn scale(&self, s: Complex64) -> Series {
        Series(self.0.iter().map(|&c| c * s).collect())
    }

    /// Requires a nonzero constant term.
    pub fn recip(&self) -> Series {
        let n = self.len();
        let mut out = Series::zeros(n);
        if n == 0 {
            return out;
        }
        let inv0 = self.0[0].inv();
        out.0[0] = inv0;
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|j| self.0[j] * out.0[k - j]).sum();
            out.0[k] = -s * inv0;
        }
        out
    }

    pub fn div(&self, other: &Series) -> Series {
        self.mul(&other.recip())
    }

    /// `self^alpha` with the constant term of the result prescribed by the
    /// caller (this fixes the branch). Uses the J.C.P. Miller recurrence.
    pub fn powf_with_leading(&self, alpha: f64, leading: Complex64) -> Series {
        let n = self.len();
        let mut out = Series::zeros(n);
        if n == 0 {
            return out;
        }
        out.0[0] = leading;
        let a0 = self.0[0];
        for k in 1..n {
            let s: Complex64 = (1..=k)
                .map(|j| self.0[j] * out.0[k - j] * ((alpha + 1.0) * j as f64 - k as f64))
                .sum();
            out.0[k] = s / (a0 * k as f64);
        }
        out
    }

    /// Formal derivative, keeping the same length (top coefficient becomes 0).
    pub fn derivative(&self) -> Series {
        let n = self.len();
        Series(
            (0..n)
                .map(|k| if k + 1 < n { self.0[k + 1] * (k + 1) as f64 } else { Complex64::default() })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_one_plus_t() {
        // (1+t)^(1/2) = 1 + t/2 - t^2/8 + t^3/16
        let s = Series::from_slice(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)], 4);
        let r = s.powf_with_leading(0.5, Complex64::new(1.0, 0.0));
        let expect = [1.0, 0.5, -0.125, 0.0625];
        for (c, e) in r.0.iter().zip(expect) {
            assert!((c - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn recip_geometric() {
        let s = Series::from_slice(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)], 5);
        assert!(s.recip().0.iter().all(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }
}
