//! Finite fields `F_p`, `F_q = F_{p^m}` and towers `F_{q^r}` over them.
//!
//! Every field is a chain of simple extensions ending at the prime field. An
//! element is stored as its flattened coordinate vector over `F_p`: for a field
//! `K[y]/(h(y))` with `[K : F_p] = b`, coordinates `t*b .. (t+1)*b` hold the
//! coefficient of `y^t`. Embedding `K` into the extension is then "pad with zeros".

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod_prime, is_prime, prime_factors};
use crate::error::{Error, Result};

/// Default bound on the number of elements [`ExtensionField::enumerate`] will visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

#[derive(Clone)]
pub struct ExtensionField(Arc<FieldData>);

struct FieldData {
    p: u64,
    degree: usize,
    base: Option<ExtensionField>,
    rel_degree: usize,
    /// Monic relative modulus, `rel_degree + 1` coefficients in the base field.
    rel_modulus: Vec<Vec<u64>>,
    /// Absolute trace of each `F_p`-basis vector.
    basis_traces: Vec<u64>,
}

/// Reproducibility record of how a field was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub degree: usize,
    /// Relative moduli from the bottom of the tower up; each is a list of
    /// coefficients (constant first), each coefficient a coordinate vector.
    pub moduli: Vec<Vec<Vec<u64>>>,
}

impl PartialEq for ExtensionField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.degree == other.0.degree
                && self.0.rel_modulus == other.0.rel_modulus
                && self.0.base == other.0.base)
    }
}

impl Eq for ExtensionField {}

impl fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.degree)
    }
}

/// `F_{p^s}` as a simple extension of `F_p`, modulus chosen by a seeded search.
pub fn build_field(p: u64, s: usize, seed: u64) -> Result<ExtensionField> {
    let prime = ExtensionField::prime(p)?;
    prime.extend(s, seed)
}

impl ExtensionField {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self(Arc::new(FieldData {
            p,
            degree: 1,
            base: None,
            rel_degree: 1,
            rel_modulus: vec![vec![0], vec![1]],
            basis_traces: vec![1],
        })))
    }

    /// Degree-`r` extension of `self`; the first irreducible monic polynomial
    /// produced by a generator seeded with `seed`. `r = 1` returns `self`.
    pub fn extend(&self, r: usize, seed: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        if r == 1 {
            return Ok(self.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut h: Vec<Vec<u64>> = (0..r).map(|_| self.random(&mut rng).coords).collect();
            h.push(self.one().coords);
            if self.is_irreducible_raw(&h) {
                return Ok(self.with_modulus_unchecked(h));
            }
        }
    }

    /// Extension by a caller-supplied monic modulus, verified irreducible.
    pub fn extend_with_modulus(&self, modulus: Vec<Vec<u64>>) -> Result<Self> {
        if modulus.len() < 2 || modulus.iter().any(|c| c.len() != self.degree()) {
            return Err(Error::Invalid("malformed modulus".into()));
        }
        if *modulus.last().unwrap() != self.one().coords {
            return Err(Error::NotMonic);
        }
        if modulus.iter().flatten().any(|&c| c >= self.p()) {
            return Err(Error::Invalid("modulus coefficient not reduced".into()));
        }
        if modulus.len() == 2 {
            return Ok(self.clone());
        }
        if !self.is_irreducible_raw(&modulus) {
            return Err(Error::Reducible);
        }
        Ok(self.with_modulus_unchecked(modulus))
    }

    /// Rebuilds a field from its descriptor, re-verifying every modulus.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self> {
        let mut f = Self::prime(desc.p)?;
        for m in &desc.moduli {
            f = f.extend_with_modulus(m.clone())?;
        }
        if f.degree() != desc.degree {
            return Err(Error::Invalid("descriptor degree mismatch".into()));
        }
        Ok(f)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        let mut moduli = Vec::new();
        let mut cur = Some(self.clone());
        while let Some(f) = cur {
            if f.0.base.is_some() {
                moduli.push(f.0.rel_modulus.clone());
            }
            cur = f.0.base.clone();
        }
        moduli.reverse();
        FieldDescriptor {
            p: self.p(),
            degree: self.degree(),
            moduli,
        }
    }

    fn with_modulus_unchecked(&self, rel_modulus: Vec<Vec<u64>>) -> Self {
        let rel_degree = rel_modulus.len() - 1;
        let provisional = Self(Arc::new(FieldData {
            p: self.p(),
            degree: self.degree() * rel_degree,
            base: Some(self.clone()),
            rel_degree,
            rel_modulus,
            basis_traces: Vec::new(),
        }));
        let degree = provisional.degree();
        let traces: Vec<u64> = (0..degree)
            .map(|i| {
                let mut e = vec![0; degree];
                e[i] = 1;
                provisional.trace_by_frobenius_raw(&e)
            })
            .collect();
        let mut data = Arc::try_unwrap(provisional.0)
            .unwrap_or_else(|_| unreachable!("provisional field is not shared"));
        data.basis_traces = traces;
        Self(Arc::new(data))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Absolute degree over `F_p`.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Degree over the field this one was built on (1 for a prime field).
    pub fn relative_degree(&self) -> usize {
        self.0.rel_degree
    }

    pub fn base(&self) -> Option<&ExtensionField> {
        self.0.base.as_ref()
    }

    pub fn relative_modulus(&self) -> &[Vec<u64>] {
        &self.0.rel_modulus
    }

    pub fn order(&self) -> u128 {
        (self.p() as u128).pow(self.degree() as u32)
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coords: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    /// Image of `a mod p` under the prime-subfield inclusion.
    pub fn from_u64(&self, a: u64) -> FieldElement {
        let mut coords = vec![0; self.degree()];
        coords[0] = a % self.p();
        FieldElement {
            field: self.clone(),
            coords,
        }
    }

    pub fn from_i64(&self, a: i64) -> FieldElement {
        self.from_u64(a.rem_euclid(self.p() as i64) as u64)
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<FieldElement> {
        if coords.len() != self.degree() || coords.iter().any(|&c| c >= self.p()) {
            return Err(Error::FieldMismatch(format!(
                "coordinates {coords:?} do not describe an element of {self:?}"
            )));
        }
        Ok(FieldElement {
            field: self.clone(),
            coords,
        })
    }

    /// The class of `y` in `K[y]/(h)`; for a prime field this is the root 0 of `X`.
    pub fn generator(&self) -> FieldElement {
        let mut coords = vec![0; self.degree()];
        if let Some(b) = &self.0.base {
            coords[b.degree()] = 1;
        }
        FieldElement {
            field: self.clone(),
            coords,
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let coords = (0..self.degree())
            .map(|_| rng.gen_range(0..self.p()))
            .collect();
        FieldElement {
            field: self.clone(),
            coords,
        }
    }

    /// Element number `index` in lexicographic order of coordinate vectors
    /// (`coords[0]` most significant).
    pub fn element_at(&self, mut index: u128) -> FieldElement {
        let p = self.p() as u128;
        let mut coords = vec![0; self.degree()];
        for c in coords.iter_mut().rev() {
            *c = (index % p) as u64;
            index /= p;
        }
        FieldElement {
            field: self.clone(),
            coords,
        }
    }

    /// Every element exactly once, lexicographically.
    pub fn enumerate(&self, cap: u128) -> Result<impl Iterator<Item = FieldElement> + '_> {
        let size = self.order();
        if size > cap {
            return Err(Error::EnumerationCap { size, cap });
        }
        Ok((0..size).map(move |i| self.element_at(i)))
    }

    // ---- raw coordinate arithmetic ----

    pub(crate) fn add_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p();
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }

    pub(crate) fn sub_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p();
        a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
    }

    pub(crate) fn neg_raw(&self, a: &[u64]) -> Vec<u64> {
        let p = self.p();
        a.iter().map(|x| (p - x) % p).collect()
    }

    pub(crate) fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p();
        let Some(base) = &self.0.base else {
            return vec![(a[0] as u128 * b[0] as u128 % p as u128) as u64];
        };
        let bd = base.degree();
        let r = self.0.rel_degree;
        let mut prod = vec![vec![0u64; bd]; 2 * r - 1];
        for i in 0..r {
            let ai = &a[i * bd..(i + 1) * bd];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..r {
                let bj = &b[j * bd..(j + 1) * bd];
                if bj.iter().all(|&c| c == 0) {
                    continue;
                }
                let t = base.mul_raw(ai, bj);
                prod[i + j] = base.add_raw(&prod[i + j], &t);
            }
        }
        for k in (r..2 * r - 1).rev() {
            let lead = std::mem::replace(&mut prod[k], vec![0; bd]);
            if lead.iter().all(|&c| c == 0) {
                continue;
            }
            for t in 0..r {
                let sub = base.mul_raw(&lead, &self.0.rel_modulus[t]);
                prod[k - r + t] = base.sub_raw(&prod[k - r + t], &sub);
            }
        }
        prod.truncate(r);
        prod.concat()
    }

    pub(crate) fn pow_raw(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one().coords;
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &b);
            }
            b = self.mul_raw(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: &[u64]) -> Option<Vec<u64>> {
        if a.iter().all(|&c| c == 0) {
            return None;
        }
        if self.is_prime_field() {
            return Some(vec![inv_mod_prime(a[0], self.p())]);
        }
        Some(self.pow_raw(a, self.order() - 2))
    }

    fn trace_by_frobenius_raw(&self, a: &[u64]) -> u64 {
        let mut acc = vec![0; self.degree()];
        let mut cur = a.to_vec();
        for _ in 0..self.degree() {
            acc = self.add_raw(&acc, &cur);
            cur = self.pow_raw(&cur, self.p() as u128);
        }
        debug_assert!(
            acc[1..].iter().all(|&c| c == 0),
            "trace left the prime field"
        );
        acc[0]
    }

    /// Linear absolute trace from the cached basis traces.
    pub(crate) fn trace_raw(&self, a: &[u64]) -> u64 {
        let p = self.p() as u128;
        let s: u128 = a
            .iter()
            .zip(&self.0.basis_traces)
            .map(|(&c, &t)| c as u128 * t as u128 % p)
            .sum();
        (s % p) as u64
    }

    // ---- irreducibility (Rabin's test) over this field ----

    fn is_irreducible_raw(&self, h: &[Vec<u64>]) -> bool {
        let r = h.len() - 1;
        let q = self.order();
        let x = {
            let mut v = vec![self.zero().coords; 2.min(r + 1)];
            if r >= 1 {
                v[1] = self.one().coords;
            }
            v
        };
        // x^{q^i} mod h for i = 1..r
        let mut powers = Vec::with_capacity(r);
        let mut cur = x.clone();
        for _ in 0..r {
            cur = self.upoly_powmod(&cur, q, h);
            powers.push(cur.clone());
        }
        if !self
            .upoly_trim(self.upoly_sub(&powers[r - 1], &x))
            .is_empty()
        {
            return false;
        }
        for l in prime_factors(r as u64) {
            let k = r / l as usize;
            let diff = self.upoly_trim(self.upoly_sub(&powers[k - 1], &x));
            let g = self.upoly_gcd(diff, h.to_vec());
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    fn upoly_trim(&self, mut a: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
        while a.last().is_some_and(|c| c.iter().all(|&v| v == 0)) {
            a.pop();
        }
        a
    }

    fn upoly_sub(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = a.len().max(b.len());
        let z = self.zero().coords;
        (0..n)
            .map(|i| self.sub_raw(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect()
    }

    /// Remainder of `a` modulo nonzero `m` (leading coefficient need not be one).
    fn upoly_rem(&self, a: Vec<Vec<u64>>, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut a = self.upoly_trim(a);
        let m = self.upoly_trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = self.inv_raw(&m[dm]).expect("nonzero leading coefficient");
        while a.len() > dm {
            let k = a.len() - 1;
            let factor = self.mul_raw(&a[k], &lead_inv);
            for t in 0..=dm {
                let s = self.mul_raw(&factor, &m[t]);
                a[k - dm + t] = self.sub_raw(&a[k - dm + t], &s);
            }
            a = self.upoly_trim(a);
        }
        a
    }

    fn upoly_mulmod(&self, a: &[Vec<u64>], b: &[Vec<u64>], m: &[Vec<u64>]) -> Vec<Vec<u64>> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![self.zero().coords; a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let t = self.mul_raw(ai, bj);
                prod[i + j] = self.add_raw(&prod[i + j], &t);
            }
        }
        self.upoly_rem(prod, m)
    }

    fn upoly_powmod(&self, a: &[Vec<u64>], mut e: u128, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut acc = vec![self.one().coords];
        let mut b = self.upoly_rem(a.to_vec(), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.upoly_mulmod(&acc, &b, m);
            }
            b = self.upoly_mulmod(&b, &b, m);
            e >>= 1;
        }
        acc
    }

    fn upoly_gcd(&self, mut a: Vec<Vec<u64>>, mut b: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
        a = self.upoly_trim(a);
        b = self.upoly_trim(b);
        while !b.is_empty() {
            let r = self.upoly_rem(a, &b);
            a = b;
            b = r;
        }
        a
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: ExtensionField,
    coords: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "{:?}", self.coords)
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// Residue when the element lies in the prime subfield.
    pub fn as_prime(&self) -> Option<u64> {
        self.coords[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coords[0])
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.field.pow_raw(&self.coords, e as u128),
        }
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.field.inv_raw(&self.coords).map(|coords| FieldElement {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn frobenius(&self) -> FieldElement {
        self.pow(self.field.p())
    }

    /// `Tr_{K/F_p}(x) = x + x^p + ... + x^{p^{s-1}}`.
    pub fn absolute_trace(&self) -> u64 {
        self.field.trace_raw(&self.coords)
    }

    /// The same trace by summing Frobenius iterates directly.
    pub fn absolute_trace_by_frobenius(&self) -> u64 {
        self.field.trace_by_frobenius_raw(&self.coords)
    }

    /// Image in `target`, which must be `self.field()` or be built on top of it.
    pub fn embed(&self, target: &ExtensionField) -> Result<FieldElement> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let Some(base) = target.base() else {
            return Err(Error::FieldMismatch(format!(
                "no embedding of {:?} into {:?}",
                self.field, target
            )));
        };
        let inner = self.embed(base)?;
        let mut coords = inner.coords;
        coords.resize(target.degree(), 0);
        Ok(FieldElement {
            field: target.clone(),
            coords,
        })
    }

    fn check_same(&self, other: &FieldElement) {
        assert!(
            self.field == other.field,
            "mixing elements of {:?} and {:?}",
            self.field,
            other.field
        );
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        FieldElement {
            field: self.field.clone(),
            coords: self.field.add_raw(&self.coords, &rhs.coords),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        FieldElement {
            field: self.field.clone(),
            coords: self.field.sub_raw(&self.coords, &rhs.coords),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        FieldElement {
            field: self.field.clone(),
            coords: self.field.mul_raw(&self.coords, &rhs.coords),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.field.neg_raw(&self.coords),
        }
    }
}
