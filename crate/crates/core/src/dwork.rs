//! Finite-precision arithmetic in `Z_p[zeta_p]` and the trace congruence for `S_1`.
//!
//! Elements are kept in the basis `lambda^0 .. lambda^{p-2}` (`lambda = zeta - 1`)
//! with integer coordinates modulo `p^B`, `B = ceil(N / (p-1)) + 1`. Because
//! `(p^B) = (lambda^{(p-1)B})`, this is the exact quotient ring modulo
//! `pi^{(p-1)B}`, which is finer than the advertised precision `pi^N`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{exp_sum, p_adic_valuation, CycInt};
use crate::error::{Error, Result};
use crate::field::ExtensionField;
use crate::fqpoly::FqPolynomial;
use crate::strata::StratumParams;

const MAX_NEWTON_STEPS: usize = 64;

/// An element of `Z_p[zeta_p]` known modulo `pi^N`.
#[derive(Debug, Clone)]
pub struct TruncatedCyc {
    p: u64,
    precision: usize,
    modulus: BigInt,
    coords: Vec<BigInt>,
}

fn coefficient_exponent(p: u64, precision: usize) -> u32 {
    (precision.div_ceil(p as usize - 1) + 1) as u32
}

/// `C(p, j + 1)` for `j = 0..p-1`: the coefficients of `Phi_p(1 + lambda)`.
fn eisenstein(p: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..p {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row[1..].to_vec()
}

impl TruncatedCyc {
    pub fn zero(p: u64, precision: usize) -> Self {
        let modulus = BigInt::from(p).pow(coefficient_exponent(p, precision));
        Self {
            p,
            precision,
            modulus,
            coords: vec![BigInt::zero(); p as usize - 1],
        }
    }

    pub fn from_int(p: u64, precision: usize, n: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(p, precision);
        out.coords[0] = n.into().mod_floor(&out.modulus);
        out
    }

    /// `lambda = zeta - 1`.
    pub fn lambda(p: u64, precision: usize) -> Self {
        let mut out = Self::zero(p, precision);
        out.coords[1] = BigInt::one();
        out
    }

    pub fn from_cyc(x: &CycInt, precision: usize) -> Self {
        let mut out = Self::zero(x.p(), precision);
        for (c, b) in out.coords.iter_mut().zip(x.lambda_coords()) {
            *c = b.mod_floor(&out.modulus);
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Coordinates in the lambda basis, reduced modulo `p^B`.
    pub fn lambda_coords(&self) -> &[BigInt] {
        &self.coords
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p);
        assert_eq!(self.precision, other.precision, "mixed precisions");
    }

    fn reduce(mut self) -> Self {
        for c in &mut self.coords {
            *c = c.mod_floor(&self.modulus);
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            coords,
            ..self.clone()
        }
        .reduce()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            coords,
            ..self.clone()
        }
        .reduce()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coords = self.coords.iter().map(|a| a * k).collect();
        Self {
            coords,
            ..self.clone()
        }
        .reduce()
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.p as usize - 1;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        // lambda^{p-1} = -sum_{j < p-1} C(p, j+1) lambda^j
        let e = eisenstein(self.p);
        for k in (n..2 * n - 1).rev() {
            let top = std::mem::take(&mut prod[k]).mod_floor(&self.modulus);
            if top.is_zero() {
                continue;
            }
            for (j, c) in e[..n].iter().enumerate() {
                prod[k - n + j] -= &top * c;
            }
        }
        prod.truncate(n);
        Self {
            coords: prod,
            ..self.clone()
        }
        .reduce()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::from_int(self.p, self.precision, 1);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// `v_pi`, or `None` when the element is zero modulo `pi^N`.
    pub fn valuation(&self) -> Option<u64> {
        let v = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_zero())
            .map(|(j, b)| (self.p - 1) * p_adic_valuation(b, self.p) + j as u64)
            .min()?;
        (v < self.precision as u64).then_some(v)
    }

    /// Equality in the quotient by `pi^N`.
    pub fn congruent(&self, other: &Self) -> bool {
        self.sub(other).valuation().is_none()
    }

    /// Inverse of a unit (valuation 0), by Newton iteration `x <- x (2 - a x)`.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.coords[0].mod_floor(&BigInt::from(self.p));
        if a0.is_zero() {
            return Err(Error::Invalid("element is not a unit".into()));
        }
        let inv0 = a0.modpow(&BigInt::from(self.p - 2), &BigInt::from(self.p));
        let mut x = Self::from_int(self.p, self.precision, inv0);
        let two = Self::from_int(self.p, self.precision, 2);
        for _ in 0..MAX_NEWTON_STEPS {
            let next = x.mul(&two.sub(&self.mul(&x)));
            if next.coords == x.coords {
                return Ok(x);
            }
            x = next;
        }
        Err(Error::NoConvergence("unit inverse".into()))
    }

    /// Same element seen at a lower precision.
    pub fn truncate(&self, precision: usize) -> Self {
        assert!(precision <= self.precision);
        let mut out = Self::zero(self.p, precision);
        for (c, b) in out.coords.iter_mut().zip(&self.coords) {
            *c = b.mod_floor(&out.modulus);
        }
        out
    }
}

/// The root `pi` of `X^{p-1} + p` with `pi = lambda (mod lambda^2)`.
///
/// Writes `pi = lambda u`; then `u^{p-1} = -p / lambda^{p-1}` is a one-unit and `u`
/// is its `(p-1)`-th root congruent to 1, found by Newton iteration.
pub fn dwork_pi(p: u64, precision: usize) -> Result<TruncatedCyc> {
    if precision < 2 {
        return Err(Error::Precision {
            got: precision,
            need: 2,
        });
    }
    let e = eisenstein(p);
    let pb = BigInt::from(p);
    // -p / lambda^{p-1} = 1 / (sum_j C(p, j+1)/p lambda^j)
    let mut unit = TruncatedCyc::zero(p, precision);
    for (c, b) in unit.coords.iter_mut().zip(&e) {
        *c = (b / &pb).mod_floor(&unit.modulus);
    }
    let target = unit.inverse()?;
    let pm1 = BigInt::from(p - 1);
    let mut u = TruncatedCyc::from_int(p, precision, 1);
    let mut converged = false;
    for _ in 0..MAX_NEWTON_STEPS {
        let residual = u.pow(p - 1).sub(&target);
        let deriv = u.pow(p - 2).scale(&pm1);
        let next = u.sub(&residual.mul(&deriv.inverse()?));
        if next.coords == u.coords {
            converged = true;
            break;
        }
        u = next;
    }
    if !converged {
        return Err(Error::NoConvergence("root of X^(p-1) + p".into()));
    }
    let pi = TruncatedCyc::lambda(p, precision).mul(&u);
    let check = pi.pow(p - 1).add(&TruncatedCyc::from_int(p, precision, p));
    if check.valuation().is_some() {
        return Err(Error::NoConvergence("pi^(p-1) + p is not small".into()));
    }
    Ok(pi)
}

/// `omega(a) pi`: the root of `X^{p-1} + p` congruent to `a lambda` mod `lambda^2`.
pub fn dwork_pi_branch(p: u64, precision: usize, a: u64) -> Result<TruncatedCyc> {
    Ok(teichmuller(a, p, precision).mul(&dwork_pi(p, precision)?))
}

/// Teichmuller lift of `a mod p` into `Z_p`, by iterating `t -> t^p`.
pub fn teichmuller(a: u64, p: u64, precision: usize) -> TruncatedCyc {
    let modulus = BigInt::from(p).pow(coefficient_exponent(p, precision));
    let e = BigInt::from(p);
    let mut t = BigInt::from(a % p);
    loop {
        let next = t.modpow(&e, &modulus);
        if next == t {
            break;
        }
        t = next;
    }
    TruncatedCyc::from_int(p, precision, t)
}

/// Result of comparing `S_1(f)` with its predicted expansion in `pi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    /// `-S_1(f)`, the trace of Frobenius `theta_1 + .. + theta_{d-1}`, lambda basis.
    pub lhs: Vec<String>,
    /// The truncated series in `pi`, lambda basis.
    pub rhs: Vec<String>,
    /// `v_pi(lhs - rhs)`, `None` if zero to the working precision.
    pub valuation_of_difference: Option<u64>,
    /// `v_pi(S_1 - rhs)`, the same comparison without the sign.
    pub unnegated_valuation: Option<u64>,
    /// Required valuation, `v(p pi) = p`.
    pub threshold: u64,
    pub precision: usize,
    /// `a` in `pi_a = omega(a) pi`; 1 is the default branch.
    pub branch: u64,
    pub pass: bool,
}

/// Checks `-S_1(f) = sum_{k >= ceil((p-1)/d)}^{p-1} sum_{i=1}^{d-1} {g^k}_{(p-1) i} pi^k / k!`
/// modulo `p pi`, for `f` over `F_p` with `f(0) = 0`, where `g` has the
/// Teichmuller lifts of `f`'s coefficients.
///
/// The right side is the trace of the Frobenius matrix, and with
/// `L = exp(sum S_r T^r / r) = prod (1 - theta_i T)` that trace is `-S_1`.
/// The report also carries the valuation obtained against `+S_1`.
pub fn trace_congruence_check(f: &FqPolynomial, precision: usize) -> Result<CongruenceReport> {
    trace_congruence_check_branch(f, precision, 1)
}

pub fn trace_congruence_check_branch(
    f: &FqPolynomial,
    precision: usize,
    branch: u64,
) -> Result<CongruenceReport> {
    let field = f.field();
    if !field.is_prime_field() {
        return Err(Error::Invalid(
            "congruence applies to polynomials over F_p".into(),
        ));
    }
    let p = field.p();
    let d = f
        .degree()
        .ok_or_else(|| Error::Invalid("zero polynomial".into()))?;
    let params = StratumParams::new(d, p)?;
    params.require_congruence_tier()?;
    if !f.coeff(0).is_zero() {
        return Err(Error::Invalid("f(0) must be 0".into()));
    }
    if precision < p as usize + 1 {
        return Err(Error::Precision {
            got: precision,
            need: p as usize + 1,
        });
    }
    if branch.is_multiple_of(p) {
        return Err(Error::Invalid("branch must be a unit mod p".into()));
    }
    let s1 = TruncatedCyc::from_cyc(&exp_sum(f, 1, u128::MAX)?, precision);
    let lhs = TruncatedCyc::zero(p, precision).sub(&s1);
    let rhs = congruence_series(f, precision, branch)?;
    let diff = lhs.sub(&rhs).valuation();
    let unnegated = s1.sub(&rhs).valuation();
    let threshold = p;
    Ok(CongruenceReport {
        lhs: lhs.coords.iter().map(|c| c.to_string()).collect(),
        rhs: rhs.coords.iter().map(|c| c.to_string()).collect(),
        valuation_of_difference: diff,
        unnegated_valuation: unnegated,
        threshold,
        precision,
        branch,
        pass: diff.is_none_or(|v| v >= threshold),
    })
}

/// Runs the check on every branch `omega(a) pi`, `a = 1..p-1`.
pub fn congruence_branch_scan(f: &FqPolynomial, precision: usize) -> Result<Vec<CongruenceReport>> {
    let p = f.field().p();
    (1..p)
        .map(|a| trace_congruence_check_branch(f, precision, a))
        .collect()
}

/// Random `f` of degree `d` over `field` with `f(0) = 0`, as the congruence requires.
pub fn random_polynomial<R: Rng + ?Sized>(
    field: &ExtensionField,
    d: usize,
    rng: &mut R,
) -> FqPolynomial {
    let mut coeffs = vec![field.zero()];
    coeffs.extend((1..d).map(|_| field.random(rng)));
    let lead = loop {
        let c = field.random(rng);
        if !c.is_zero() {
            break c;
        }
    };
    coeffs.push(lead);
    FqPolynomial::new(field, coeffs).expect("coefficients share the field")
}

fn congruence_series(f: &FqPolynomial, precision: usize, branch: u64) -> Result<TruncatedCyc> {
    let p = f.field().p();
    let d = f.degree().expect("checked by caller");
    let modulus = BigInt::from(p).pow(coefficient_exponent(p, precision));
    // integer polynomial g with Teichmuller coefficients, modulo p^B
    let g: Vec<BigInt> = (0..=d)
        .map(|i| {
            let a = f.coeff(i).as_prime().expect("prime field");
            teichmuller(a, p, precision).coords[0].clone()
        })
        .collect();
    let pi = dwork_pi_branch(p, precision, branch)?;
    let k_min = (p as usize - 1).div_ceil(d);
    let mut total = TruncatedCyc::zero(p, precision);
    let mut g_pow = vec![BigInt::one()];
    let mut pi_pow = TruncatedCyc::from_int(p, precision, 1);
    let mut factorial = BigInt::one();
    for k in 1..p as usize {
        let mut next = vec![BigInt::zero(); g_pow.len() + d];
        for (i, a) in g_pow.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.iter().enumerate() {
                next[i + j] = (&next[i + j] + a * b).mod_floor(&modulus);
            }
        }
        g_pow = next;
        pi_pow = pi_pow.mul(&pi);
        factorial *= k;
        if k < k_min {
            continue;
        }
        let coeff: BigInt = (1..d)
            .filter_map(|i| g_pow.get((p as usize - 1) * i))
            .fold(BigInt::zero(), |acc, c| acc + c);
        let inv_fact = factorial
            .modinv(&modulus)
            .ok_or_else(|| Error::Invalid("k! not invertible".into()))?;
        total = total.add(&pi_pow.scale(&(coeff * inv_fact)));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn pi_satisfies_its_equation() {
        let pi = dwork_pi(11, 30).unwrap();
        let lhs = pi.pow(10).add(&TruncatedCyc::from_int(11, 30, 11));
        assert_eq!(lhs.valuation(), None);
        assert_eq!(pi.valuation(), Some(1));
        let diff = pi.sub(&TruncatedCyc::lambda(11, 30));
        assert!(diff.valuation().unwrap() >= 2);
        assert!(dwork_pi(11, 1).is_err());
    }

    #[test]
    fn branches_are_all_roots() {
        let p = 7;
        for a in 1..p {
            let pi = dwork_pi_branch(p, 20, a).unwrap();
            let check = pi.pow(p - 1).add(&TruncatedCyc::from_int(p, 20, p));
            assert_eq!(check.valuation(), None, "branch {a}");
        }
    }

    #[test]
    fn teichmuller_lifts() {
        let p = 13;
        assert_eq!(teichmuller(0, p, 30).valuation(), None);
        assert!(teichmuller(1, p, 30).congruent(&TruncatedCyc::from_int(p, 30, 1)));
        for a in 1..p {
            let t = teichmuller(a, p, 30);
            assert_eq!(
                t.lambda_coords()[0].mod_floor(&BigInt::from(p)),
                BigInt::from(a)
            );
            assert!(t.pow(p - 1).congruent(&TruncatedCyc::from_int(p, 30, 1)));
            assert!(t.pow(p).congruent(&t));
        }
    }

    #[test]
    fn inverse_and_truncation() {
        let p = 11;
        let x = TruncatedCyc::from_int(p, 40, 3).add(&TruncatedCyc::lambda(p, 40));
        let inv = x.inverse().unwrap();
        assert!(x.mul(&inv).congruent(&TruncatedCyc::from_int(p, 40, 1)));
        assert!(TruncatedCyc::lambda(p, 40).inverse().is_err());
        let pi_hi = dwork_pi(p, 60).unwrap();
        let pi_lo = dwork_pi(p, 30).unwrap();
        assert!(pi_hi.truncate(30).congruent(&pi_lo));
    }

    #[test]
    fn valuation_of_p() {
        let x = TruncatedCyc::from_int(13, 40, 13);
        assert_eq!(x.valuation(), Some(12));
        assert_eq!(TruncatedCyc::from_int(13, 10, 13).valuation(), None);
    }

    #[test]
    fn congruence_for_small_cubics() {
        let f11 = build_field(11, 1, 0).unwrap();
        let f = FqPolynomial::from_u64s(&f11, &[0, 1, 0, 1]);
        let r = trace_congruence_check(&f, 12).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.unnegated_valuation.unwrap() < 11);
        let scan = congruence_branch_scan(&f, 12).unwrap();
        let passing: Vec<u64> = scan.iter().filter(|r| r.pass).map(|r| r.branch).collect();
        // f is odd, so pi and -pi agree
        assert_eq!(passing, vec![1, 10]);
        let cube = FqPolynomial::from_u64s(&f11, &[0, 0, 0, 1]);
        let r = trace_congruence_check(&cube, 12).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.lhs.iter().all(|c| c == "0"));
    }

    #[test]
    fn congruence_preconditions() {
        let f7 = build_field(7, 1, 0).unwrap();
        // p = 7 < d + 3 for d = 5
        let f = FqPolynomial::from_u64s(&f7, &[0, 1, 0, 0, 0, 1]);
        assert!(matches!(
            trace_congruence_check(&f, 20),
            Err(Error::Tier { .. })
        ));
        let f11 = build_field(11, 1, 0).unwrap();
        let g = FqPolynomial::from_u64s(&f11, &[0, 1, 0, 1]);
        assert!(matches!(
            trace_congruence_check(&g, 5),
            Err(Error::Precision { .. })
        ));
        let h = FqPolynomial::from_u64s(&f11, &[2, 1, 0, 1]);
        assert!(trace_congruence_check(&h, 12).is_err());
    }
}
