use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// `Σ c_k x_k` with integer coefficients, dense over `x_1..x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn zero(n: usize) -> LinearForm {
        LinearForm { coeffs: vec![0; n] }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> LinearForm {
        LinearForm { coeffs }
    }

    /// `x_k`.
    pub fn var(n: usize, k: usize) -> LinearForm {
        let mut f = LinearForm::zero(n);
        f.coeffs[k - 1] = 1;
        f
    }

    /// `Σ_{k ∈ labels} x_k`.
    pub fn sum_of(n: usize, labels: impl IntoIterator<Item = usize>) -> LinearForm {
        let mut f = LinearForm::zero(n);
        for k in labels {
            f.coeffs[k - 1] += 1;
        }
        f
    }

    /// `x_1 + ⋯ + x_n`.
    pub fn full(n: usize) -> LinearForm {
        LinearForm { coeffs: vec![1; n] }
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficient of `x_k`.
    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs[k - 1]
    }

    pub fn set_coeff(&mut self, k: usize, c: i64) {
        self.coeffs[k - 1] = c;
    }

    /// `x_k ∈ x^s`: the coefficient of `x_k` is nonzero.
    pub fn contains(&self, k: usize) -> bool {
        self.coeffs[k - 1] != 0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (1..=self.coeffs.len())
            .filter(|&k| self.contains(k))
            .collect()
    }

    /// Keeps only the coefficients selected by `keep(k)`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> LinearForm {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if keep(i + 1) { c } else { 0 })
                .collect(),
        }
    }

    pub fn scale(&self, s: i64) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn eval_int(&self, x: &[i64]) -> i128 {
        self.coeffs
            .iter()
            .zip(x)
            .map(|(&c, &v)| c as i128 * v as i128)
            .sum()
    }

    pub fn eval_big(&self, x: &[BigInt]) -> BigInt {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(c, _)| **c != 0)
            .map(|(&c, v)| v * c)
            .fold(BigInt::zero(), |a, b| a + b)
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(c, _)| **c != 0)
            .map(|(&c, v)| v * BigRational::from_integer(c.into()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Parses forms like `x3+x4+x5`, `-x1-x2+x6`, `2x3`, `-(x1+x2)` or `0`.
    pub fn parse(s: &str, n: usize) -> Result<LinearForm> {
        let bad = || Error::Parse(format!("`{s}` is not a linear form"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(inner) = compact.strip_prefix("-(").and_then(|r| r.strip_suffix(')')) {
            return Ok(-LinearForm::parse(inner, n)?);
        }
        let mut f = LinearForm::zero(n);
        if compact == "0" {
            return Ok(f);
        }
        if compact.is_empty() {
            return Err(bad());
        }
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mult: i64 = if i > start {
                compact[start..i].parse().map_err(|_| bad())?
            } else {
                1
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            if i >= bytes.len() || bytes[i] != b'x' {
                return Err(bad());
            }
            i += 1;
            let vstart = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let k: usize = compact[vstart..i].parse().map_err(|_| bad())?;
            if k == 0 || k > n {
                return Err(Error::Range(format!("variable x{k} not in x1..x{n}")));
            }
            f.coeffs[k - 1] += sign * mult;
        }
        Ok(f)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "x{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(mut self, rhs: LinearForm) -> LinearForm {
        self += &rhs;
        self
    }
}

impl AddAssign<&LinearForm> for LinearForm {
    fn add_assign(&mut self, rhs: &LinearForm) {
        assert_eq!(
            self.coeffs.len(),
            rhs.coeffs.len(),
            "forms over different variables"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self + &(-rhs)
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: LinearForm) -> LinearForm {
        &self - &rhs
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(-1)
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(-1)
    }
}

impl Mul<i64> for &LinearForm {
    type Output = LinearForm;
    fn mul(self, s: i64) -> LinearForm {
        self.scale(s)
    }
}
