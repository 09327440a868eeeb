//! Polynomials in q with arbitrary-precision integer coefficients.
//!
//! Every multiplicity generating function in this crate (Kostant partition
//! values K_beta(q), the q-analogs C^lambda_mu(q) and ^eC^lambda_mu(q),
//! string characters) is a [`QPolynomial`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Dense ascending-degree coefficient vector with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// c * q^deg
    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        let mut p = QPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = QPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, deg: usize) -> BigInt {
        self.coeffs.get(deg).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add_assign(&mut self, other: &QPolynomial) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigInt::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i] += c;
        }
        self.trim();
    }

    pub fn sub_assign(&mut self, other: &QPolynomial) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigInt::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i] -= c;
        }
        self.trim();
    }

    pub fn add(&self, other: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn mul(&self, other: &QPolynomial) -> QPolynomial {
        if self.is_zero() || other.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }

    /// Multiply by c * q^deg.
    pub fn mul_monomial(&self, c: &BigInt, deg: usize) -> QPolynomial {
        let mut coeffs = vec![BigInt::zero(); deg];
        coeffs.extend(self.coeffs.iter().map(|a| a * c));
        QPolynomial::from_coeffs(coeffs)
    }

    /// Evaluate at q = 1 (the ungraded total).
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Canonical display form like "1 + 2q + q^3"; the zero polynomial is "0".
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (deg, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if s.is_empty() {
                if c.sign() == num_bigint::Sign::Minus {
                    s.push('-');
                }
            } else {
                s.push_str(if c.sign() == num_bigint::Sign::Minus { " - " } else { " + " });
            }
            let show_coeff = !mag.is_one() || deg == 0;
            if show_coeff {
                s.push_str(&mag.to_string());
            }
            match deg {
                0 => {}
                1 => s.push('q'),
                _ => s.push_str(&format!("q^{deg}")),
            }
        }
        s
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// JSON form: ascending-degree array of integers; coefficients beyond the
/// i64 range fall back to decimal strings.
impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}
