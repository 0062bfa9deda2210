//! Univariate polynomials over an [`ExtensionField`].

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{ExtensionField, FieldElement};

/// `c_0 + c_1 X + ... + c_d X^d` with coefficients in a fixed field.
#[derive(Clone, PartialEq, Eq)]
pub struct FqPolynomial {
    field: ExtensionField,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for FqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqPolynomial{:?} over {:?}", self.coeffs, self.field)
    }
}

impl FqPolynomial {
    /// Coefficients in increasing degree; trailing zeros are trimmed.
    pub fn new(field: &ExtensionField, mut coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch(
                "coefficient outside the polynomial's field".into(),
            ));
        }
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Ok(Self {
            field: field.clone(),
            coeffs,
        })
    }

    /// Coefficients given as residues in the prime subfield.
    pub fn from_u64s(field: &ExtensionField, coeffs: &[u64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| field.from_u64(c)).collect();
        Self::new(field, coeffs).expect("coefficients built in the same field")
    }

    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(FieldElement::is_one)
    }

    /// Horner evaluation at a point of this field or of an extension of it.
    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        let target = x.field();
        let mut acc = target.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &c.embed(target)?;
        }
        Ok(acc)
    }

    /// `f(X + t)`.
    pub fn shift(&self, t: &FieldElement) -> FqPolynomial {
        // Horner on polynomials: ((c_d)(X+t) + c_{d-1})(X+t) + ...
        let mut acc: Vec<FieldElement> = Vec::new();
        for c in self.coeffs.iter().rev() {
            let mut next = vec![self.field.zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = &next[i + 1] + a;
                next[i] = &next[i] + &(a * t);
            }
            next[0] = &next[0] + c;
            acc = next;
        }
        FqPolynomial::new(&self.field, acc).expect("same field")
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &FieldElement) -> FqPolynomial {
        FqPolynomial::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
            .expect("same field")
    }
}
