//! Sparse multivariate polynomials over a prime field `F_p`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::FieldElement;

/// Dense exponent vector, ordered graded-lexicographically (total degree first,
/// then by the exponent of `X1`, `X2`, ...).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `X1..Xn` with coefficients in `0..p`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMultiPoly {
    p: u64,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl FpMultiPoly {
    pub fn zero(p: u64, nvars: usize) -> Self {
        Self {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u64, nvars: usize, c: i64) -> Self {
        let mut out = Self::zero(p, nvars);
        out.add_term(Monomial::one(nvars), c.rem_euclid(p as i64) as u64);
        out
    }

    /// The variable `X_index` (1-based).
    pub fn var(p: u64, nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index - 1] = 1;
        let mut out = Self::zero(p, nvars);
        out.add_term(Monomial(e), 1);
        out
    }

    pub fn from_terms(
        p: u64,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, i64)>,
    ) -> Self {
        let mut out = Self::zero(p, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            out.add_term(Monomial(e), c.rem_euclid(p as i64) as u64);
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> u64 {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree in `X_index` (1-based).
    pub fn degree_in(&self, index: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[index - 1]).max()
    }

    /// True when every term has the same total degree (vacuously for zero).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let p = self.p;
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() + c) % p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.p, other.p, "polynomials over different primes");
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials in different variable counts"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = c.rem_euclid(self.p as i64) as u64;
        let mut out = Self::zero(self.p, self.nvars);
        for (m, &v) in &self.terms {
            out.add_term(m.clone(), (v as u128 * c as u128 % self.p as u128) as u64);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.p, self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(
                    ma.mul(mb),
                    (ca as u128 * cb as u128 % self.p as u128) as u64,
                );
            }
        }
        out
    }

    /// Fixes the last `values.len()` variables to the given constants and drops them.
    pub fn specialize_tail(&self, values: &[u64]) -> Self {
        let k = values.len();
        assert!(k <= self.nvars);
        let keep = self.nvars - k;
        let mut out = Self::zero(self.p, keep);
        for (m, &c) in &self.terms {
            let mut coeff = c as u128;
            for (e, &v) in m.0[keep..].iter().zip(values) {
                coeff =
                    coeff * crate::arith::pow_mod(v, *e as u64, self.p) as u128 % self.p as u128;
            }
            out.add_term(Monomial(m.0[..keep].to_vec()), coeff as u64);
        }
        out
    }

    /// Value at a point of `F_p^n`.
    pub fn eval_fp(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.nvars);
        let p = self.p as u128;
        let mut acc = 0u128;
        for (m, &c) in &self.terms {
            let mut t = c as u128;
            for (&x, &e) in point.iter().zip(&m.0) {
                t = t * crate::arith::pow_mod(x, e as u64, self.p) as u128 % p;
            }
            acc = (acc + t) % p;
        }
        acc as u64
    }

    /// Value at a point of an extension field of characteristic `p`.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::FieldMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let Some(first) = point.first() else {
            return Err(Error::FieldMismatch(
                "constant polynomial needs a target field; use evaluate_in".into(),
            ));
        };
        self.evaluate_in(first.field(), point)
    }

    /// Like [`evaluate`](Self::evaluate) but with the target field given explicitly,
    /// which also covers polynomials in zero variables.
    pub fn evaluate_in(
        &self,
        field: &crate::field::ExtensionField,
        point: &[FieldElement],
    ) -> Result<FieldElement> {
        if field.p() != self.p {
            return Err(Error::FieldMismatch(format!(
                "field characteristic {} but polynomial over F_{}",
                field.p(),
                self.p
            )));
        }
        if point.len() != self.nvars {
            return Err(Error::FieldMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        if let Some(x) = point.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(format!(
                "coordinate lives in a field of order {}",
                x.field().order()
            )));
        }
        let mut acc = field.zero();
        for (m, &c) in &self.terms {
            let mut t = field.from_u64(c);
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e as u64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
}

impl fmt::Display for FpMultiPoly {
    /// Canonical form: terms in decreasing graded-lex order, `c*X1^e1*...`, joined by `+`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*X{}", v + 1)?,
                    _ => write!(f, "*X{}^{}", v + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Parses the canonical text form; the prime and variable count are not part of
/// the text, so they come from [`parse_poly`].
pub fn parse_poly(text: &str, p: u64, nvars: usize) -> Result<FpMultiPoly> {
    let bad = |why: &str| Error::Invalid(format!("cannot parse polynomial {text:?}: {why}"));
    let mut out = FpMultiPoly::zero(p, nvars);
    let text = text.trim();
    if text == "0" {
        return Ok(out);
    }
    for term in text.split('+') {
        let mut factors = term.trim().split('*');
        let c = i64::from_str(factors.next().ok_or_else(|| bad("empty term"))?.trim())
            .map_err(|_| bad("coefficient"))?;
        let mut e = vec![0u32; nvars];
        for fac in factors {
            let fac = fac.trim();
            let rest = fac
                .strip_prefix('X')
                .ok_or_else(|| bad("expected variable"))?;
            let (idx, exp) = match rest.split_once('^') {
                Some((i, x)) => (i, u32::from_str(x).map_err(|_| bad("exponent"))?),
                None => (rest, 1),
            };
            let idx = usize::from_str(idx).map_err(|_| bad("variable index"))?;
            if idx == 0 || idx > nvars {
                return Err(bad("variable index out of range"));
            }
            e[idx - 1] += exp;
        }
        out.add_term(Monomial(e), c.rem_euclid(p as i64) as u64);
    }
    Ok(out)
}

/// `{g^k}_n` for the generic `g = X1*T + X2*T^2 + ... + Xd*T^d`, as a polynomial in
/// `X1..Xd` over `F_p`.
///
/// Built by `k` successive multiplications by `g`, keeping after `j` steps only the
/// `T`-degrees that can still reach `n` in the remaining `k - j` steps.
pub fn power_coefficient(p: u64, d: usize, k: usize, n: usize) -> FpMultiPoly {
    let mut out = FpMultiPoly::zero(p, d);
    if n < k || n > d * k {
        return out;
    }
    // layers[t - lo] holds the T^t coefficient of g^j
    let mut lo = 0usize;
    let mut layers: Vec<BTreeMap<Vec<u32>, u64>> = vec![BTreeMap::from([(vec![0u32; d], 1u64)])];
    for j in 1..=k {
        let remaining = k - j;
        let new_lo = n.saturating_sub(remaining * d);
        let new_hi = n - remaining;
        let mut next: Vec<BTreeMap<Vec<u32>, u64>> = vec![BTreeMap::new(); new_hi - new_lo + 1];
        for (offset, layer) in layers.iter().enumerate() {
            let t = lo + offset;
            for i in 1..=d {
                let t2 = t + i;
                if t2 < new_lo || t2 > new_hi {
                    continue;
                }
                let target = &mut next[t2 - new_lo];
                for (mono, &c) in layer {
                    let mut m2 = mono.clone();
                    m2[i - 1] += 1;
                    let slot = target.entry(m2).or_insert(0);
                    *slot = (*slot + c) % p;
                }
            }
        }
        lo = new_lo;
        layers = next;
    }
    if n < lo || n - lo >= layers.len() {
        return out;
    }
    for (e, c) in std::mem::take(&mut layers[n - lo]) {
        out.add_term(Monomial(e), c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_coefficient_examples() {
        assert_eq!(power_coefficient(11, 3, 1, 2), FpMultiPoly::var(11, 3, 2));
        let expected = FpMultiPoly::from_terms(11, 3, [(vec![1, 0, 3], 4), (vec![0, 2, 2], 6)]);
        assert_eq!(power_coefficient(11, 3, 4, 10), expected);
        assert!(power_coefficient(11, 3, 2, 7).is_zero());
        assert!(power_coefficient(11, 3, 3, 2).is_zero());
        assert_eq!(
            power_coefficient(5, 3, 0, 0),
            FpMultiPoly::constant(5, 3, 1)
        );
    }

    #[test]
    fn canonical_text() {
        let p = power_coefficient(11, 3, 4, 10);
        assert_eq!(p.to_string(), "4*X1*X3^3+6*X2^2*X3^2");
        assert_eq!(parse_poly(&p.to_string(), 11, 3).unwrap(), p);
        assert_eq!(FpMultiPoly::zero(7, 2).to_string(), "0");
        assert_eq!(FpMultiPoly::constant(7, 0, 3).to_string(), "3");
        assert!(parse_poly("3*Y1", 7, 2).is_err());
        assert!(parse_poly("3*X3", 7, 2).is_err());
    }

    #[test]
    fn arithmetic_and_degrees() {
        let x = FpMultiPoly::var(5, 2, 1);
        let y = FpMultiPoly::var(5, 2, 2);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coefficient(&[1, 1]), 2);
        assert_eq!(sq.total_degree(), Some(2));
        assert!(sq.is_homogeneous());
        assert_eq!(FpMultiPoly::zero(5, 2).total_degree(), None);
        let fifth = (0..4).fold(s.clone(), |acc, _| acc.mul(&s));
        // Frobenius: (x + y)^5 = x^5 + y^5 in characteristic 5
        assert_eq!(fifth.num_terms(), 2);
        assert!(s.sub(&s).is_zero());
        assert!(!s.add(&FpMultiPoly::constant(5, 2, 1)).is_homogeneous());
    }

    #[test]
    fn specialization() {
        let p = power_coefficient(11, 3, 4, 10);
        let g = p.specialize_tail(&[1]);
        assert_eq!(g.to_string(), "6*X2^2+4*X1");
        let h = p.specialize_tail(&[0, 1]);
        assert_eq!(h.to_string(), "4*X1");
        assert_eq!(h.eval_fp(&[3]), 1);
        assert_eq!(h.eval_fp(&[0]), 0);
    }
}
