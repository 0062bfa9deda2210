//! Exact arithmetic in `Z[zeta_p]`, exponential sums and their L-functions.
//!
//! Elements are stored in the power basis `zeta^0 .. zeta^{p-2}`. Values of the
//! additive character `x -> zeta^{Tr(x)}` land here, so every sum `S_r(f)` is an
//! exact [`CycInt`]. The pi-adic valuation is read off the basis
//! `lambda^0 .. lambda^{p-2}` with `lambda = zeta - 1`, in which
//! `v(sum b_j lambda^j) = min_j ((p-1) v_p(b_j) + j)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::ExtensionField;
use crate::fqpoly::FqPolynomial;
use crate::polygon::{lower_convex_hull, NewtonPolygon};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coords: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt<{}>{:?}", self.p, self.to_strings())
    }
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            coords: vec![BigInt::zero(); p as usize - 1],
        }
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(p);
        out.coords[0] = n.into();
        out
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let mut full = vec![BigInt::zero(); p as usize];
        full[k.rem_euclid(p as i64) as usize] = BigInt::from(1);
        Self::from_full_cycle(p, full)
    }

    /// From coordinates in the power basis `zeta^0 .. zeta^{p-2}`.
    pub fn from_coords(p: u64, coords: Vec<BigInt>) -> Self {
        assert_eq!(coords.len(), p as usize - 1, "expected p - 1 coordinates");
        Self { p, coords }
    }

    /// Reduces `sum_{t < p} a_t zeta^t` using `zeta^{p-1} = -(1 + ... + zeta^{p-2})`.
    pub fn from_full_cycle(p: u64, mut full: Vec<BigInt>) -> Self {
        assert_eq!(full.len(), p as usize);
        let top = full.pop().unwrap();
        for c in &mut full {
            *c -= &top;
        }
        Self { p, coords: full }
    }

    /// `sum_t counts[t] zeta^t` for a histogram of traces.
    pub fn from_histogram(p: u64, counts: &[u64]) -> Self {
        Self::from_full_cycle(p, counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(p: u64, coords: &[String]) -> Result<Self> {
        let parsed = coords
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::Invalid(format!("bad integer {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parsed.len() != p as usize - 1 {
            return Err(Error::Invalid(format!("expected {} coordinates", p - 1)));
        }
        Ok(Self { p, coords: parsed })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        Self {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        Self {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: self.p,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            p: self.p,
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p as usize;
        // cyclic convolution in Z[x]/(x^p - 1), then reduce by Phi_p
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        Self::from_full_cycle(self.p, full)
    }

    /// Exact division by an integer; `None` if some coordinate is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coords.push(q);
        }
        Some(Self { p: self.p, coords })
    }

    /// Image under the automorphism `zeta -> zeta^t`, `t` prime to `p`.
    pub fn galois(&self, t: u64) -> Self {
        assert!(!t.is_multiple_of(self.p), "t must be a unit mod p");
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (k, c) in self.coords.iter().enumerate() {
            full[(k * t as usize) % p] += c;
        }
        Self::from_full_cycle(self.p, full)
    }

    /// Coordinates in the basis `lambda^0 .. lambda^{p-2}`, `lambda = zeta - 1`.
    pub fn lambda_coords(&self) -> Vec<BigInt> {
        // zeta^k = (1 + lambda)^k, and k <= p-2 keeps every power inside the basis
        let n = self.coords.len();
        let mut out = vec![BigInt::zero(); n];
        let mut binom = vec![BigInt::zero(); n];
        for (k, c) in self.coords.iter().enumerate() {
            // binom holds row k of Pascal's triangle
            for j in (1..=k).rev() {
                let prev = binom[j - 1].clone();
                binom[j] += prev;
            }
            binom[0] = BigInt::from(1);
            if c.is_zero() {
                continue;
            }
            for j in 0..=k {
                out[j] += c * &binom[j];
            }
        }
        out
    }

    /// Values under the complex embeddings `zeta -> exp(2 pi i t / p)`, `t = 1..p-1`.
    pub fn complex_embeddings(&self) -> Vec<(f64, f64)> {
        let p = self.p as f64;
        (1..self.p)
            .map(|t| {
                self.coords
                    .iter()
                    .enumerate()
                    .fold((0.0, 0.0), |(re, im), (k, c)| {
                        let a = std::f64::consts::TAU * (t as f64) * (k as f64) / p;
                        let c = c.to_f64().unwrap_or(f64::NAN);
                        (re + c * a.cos(), im + c * a.sin())
                    })
            })
            .collect()
    }
}

/// `v_p(n)` for nonzero `n`.
pub fn p_adic_valuation(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Valuation normalized by `v(pi) = 1` (so `v(p) = p - 1`); `None` for zero.
pub fn pi_valuation(x: &CycInt) -> Option<u64> {
    let pm1 = x.p - 1;
    x.lambda_coords()
        .iter()
        .enumerate()
        .filter(|(_, b)| !b.is_zero())
        .map(|(j, b)| pm1 * p_adic_valuation(b, x.p) + j as u64)
        .min()
}

/// `S_r(f) = sum_{x in F_{q^r}} zeta^{Tr(f(x))}` by direct enumeration.
pub fn exp_sum(f: &FqPolynomial, r: usize, cap: u128) -> Result<CycInt> {
    let top = f.field().extend(r, 0)?;
    exp_sum_in(f, &top, cap)
}

/// As [`exp_sum`] over an explicitly given extension of `f`'s field.
pub fn exp_sum_in(f: &FqPolynomial, top: &ExtensionField, cap: u128) -> Result<CycInt> {
    let p = top.p();
    let mut hist = vec![0u64; p as usize];
    for x in top.enumerate(cap)? {
        hist[f.eval(&x)?.absolute_trace() as usize] += 1;
    }
    Ok(CycInt::from_histogram(p, &hist))
}

/// Precomputed traces `Tr(e_j x^i)` for every `x` of `F_{q^r}`, every `0 <= i <= d`
/// and every `F_p`-basis vector `e_j` of `F_q`.
///
/// Since the trace is `F_p`-linear, `Tr(f(x)) = sum_{i,j} c_{ij} Tr(e_j x^i)` where
/// `c_{ij}` are the coordinates of the coefficients of `f`, so one table serves
/// every polynomial of degree `<= d` over `F_q`.
pub struct CharacterSumTable {
    p: u64,
    row: usize,
    base: ExtensionField,
    top: ExtensionField,
    entries: Vec<u32>,
}

impl CharacterSumTable {
    pub fn new(base: &ExtensionField, top: &ExtensionField, d: usize, cap: u128) -> Result<Self> {
        let m = base.degree();
        let row = (d + 1) * m;
        let size = top.order();
        if size > cap {
            return Err(Error::EnumerationCap { size, cap });
        }
        let basis: Vec<Vec<u64>> = (0..m)
            .map(|j| {
                let mut e = vec![0; m];
                e[j] = 1;
                base.element(e)
                    .and_then(|e| e.embed(top))
                    .map(|e| e.coords().to_vec())
            })
            .collect::<Result<_>>()?;
        let entries: Vec<u32> = (0..size)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let x = top.element_at(idx);
                let mut out = Vec::with_capacity(row);
                let mut power = top.one().coords().to_vec();
                for _ in 0..=d {
                    for e in &basis {
                        out.push(top.trace_raw(&top.mul_raw(e, &power)) as u32);
                    }
                    power = top.mul_raw(&power, x.coords());
                }
                out
            })
            .collect();
        Ok(Self {
            p: top.p(),
            row,
            base: base.clone(),
            top: top.clone(),
            entries,
        })
    }

    pub fn top(&self) -> &ExtensionField {
        &self.top
    }

    pub fn degree(&self) -> usize {
        self.row / self.base.degree() - 1
    }

    /// `S(f)` over the table's field.
    pub fn sum(&self, f: &FqPolynomial) -> Result<CycInt> {
        if f.field() != &self.base {
            return Err(Error::FieldMismatch(
                "polynomial over a different base field".into(),
            ));
        }
        if f.degree().unwrap_or(0) > self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                got: f.degree().unwrap_or(0),
            });
        }
        let m = self.base.degree();
        let mut flat = vec![0u64; self.row];
        for (i, c) in f.coeffs().iter().enumerate() {
            flat[i * m..(i + 1) * m].copy_from_slice(c.coords());
        }
        let p = self.p;
        let mut hist = vec![0u64; p as usize];
        for row in self.entries.chunks_exact(self.row) {
            let t: u64 = row.iter().zip(&flat).map(|(&a, &c)| a as u64 * c).sum();
            hist[(t % p) as usize] += 1;
        }
        Ok(CycInt::from_histogram(p, &hist))
    }
}

/// `L(f, T) = 1 + c_1 T + ... + c_{d-1} T^{d-1}` with coefficients in `Z[zeta_p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    p: u64,
    m: usize,
    coeffs: Vec<CycInt>,
}

impl LPolynomial {
    /// From the sums `S_1 .. S_{d-1}` over `F_q`, `q = p^m`, using
    /// `n c_n = sum_{i=1}^n S_i c_{n-i}` (the logarithmic derivative of `L`).
    pub fn from_sums(sums: &[CycInt], m: usize) -> Result<Self> {
        let p = sums
            .first()
            .map(CycInt::p)
            .ok_or_else(|| Error::Invalid("no sums".into()))?;
        let mut coeffs = vec![CycInt::one(p)];
        for n in 1..=sums.len() {
            let mut acc = CycInt::zero(p);
            for i in 1..=n {
                acc = acc.add(&sums[i - 1].mul(&coeffs[n - i]));
            }
            let c = acc
                .div_exact(&BigInt::from(n))
                .ok_or(Error::NonIntegral(n))?;
            coeffs.push(c);
        }
        Ok(Self { p, m, coeffs })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[CycInt] {
        &self.coeffs
    }

    /// Degree bound `d - 1`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Inverts the recurrence: `S_n = n c_n - sum_{i=1}^{n-1} S_i c_{n-i}`.
    pub fn power_sums(&self) -> Vec<CycInt> {
        let mut sums: Vec<CycInt> = Vec::new();
        for n in 1..self.coeffs.len() {
            let mut s = self.coeffs[n].scale(&BigInt::from(n));
            for i in 1..n {
                s = s.sub(&sums[i - 1].mul(&self.coeffs[n - i]));
            }
            sums.push(s);
        }
        sums
    }

    /// `v_q(c_n)` as an exact rational, `None` for a vanishing coefficient.
    pub fn q_valuations(&self) -> Vec<Option<BigRational>> {
        let den = BigInt::from((self.p - 1) * self.m as u64);
        self.coeffs
            .iter()
            .map(|c| pi_valuation(c).map(|v| BigRational::new(BigInt::from(v), den.clone())))
            .collect()
    }
}

/// `L(f, T)` from `S_1 .. S_{d-1}` computed by direct enumeration; `d = deg f`.
pub fn l_function(f: &FqPolynomial, cap: u128) -> Result<LPolynomial> {
    let d = f
        .degree()
        .ok_or_else(|| Error::Invalid("zero polynomial".into()))?;
    let sums = (1..d)
        .map(|r| exp_sum(f, r, cap))
        .collect::<Result<Vec<_>>>()?;
    if sums.is_empty() {
        return Err(Error::Invalid("degree must be at least 2".into()));
    }
    LPolynomial::from_sums(&sums, f.field().degree())
}

/// `NP_q(f)`: lower hull of `(n, v_q(c_n))`.
pub fn newton_polygon_of_l(l: &LPolynomial) -> Result<NewtonPolygon> {
    let pts: Vec<_> = l
        .q_valuations()
        .into_iter()
        .enumerate()
        .map(|(n, v)| (n as i64, v))
        .collect();
    lower_convex_hull(&pts)
}

/// True if `|S|` stays within `bound` (relative tolerance `1e-6`) under every
/// complex embedding. Floating point; diagnostic only.
pub fn within_weil_bound(s: &CycInt, bound: f64) -> bool {
    s.complex_embeddings()
        .iter()
        .all(|(re, im)| (re * re + im * im).sqrt() <= bound * (1.0 + 1e-6))
}
