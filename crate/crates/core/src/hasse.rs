//! Hasse polynomials `P_n`, `P_{d,p}`, `G_{d,p}` and `H_{d,p}` over `F_p`.

use std::collections::HashMap;

use crate::arith::floor_div;
use crate::error::Result;
use crate::multipoly::{power_coefficient, FpMultiPoly};
use crate::strata::{b_set, residue_j, sigma_set, sigma_zero, StratumParams};

/// Memoizes `{g^k}_n` across the factors of the `P_n`.
#[derive(Debug, Default)]
pub struct PowerCoefficientCache {
    entries: HashMap<(usize, usize), FpMultiPoly>,
}

impl PowerCoefficientCache {
    pub fn get(&mut self, params: &StratumParams, k: usize, n: usize) -> &FpMultiPoly {
        self.entries
            .entry((k, n))
            .or_insert_with(|| power_coefficient(params.p(), params.d(), k, n))
    }
}

/// `P_n = sum_{sigma in Sigma_n} sgn(sigma) prod_i {g^{ceil((p i - sigma(i))/d)}}_{p i - sigma(i)}` mod `p`.
pub fn hasse_p_n(params: &StratumParams, n: usize) -> Result<FpMultiPoly> {
    let mut cache = PowerCoefficientCache::default();
    hasse_p_n_cached(params, n, &mut cache)
}

pub fn hasse_p_n_cached(
    params: &StratumParams,
    n: usize,
    cache: &mut PowerCoefficientCache,
) -> Result<FpMultiPoly> {
    let (p, d) = (params.p(), params.d());
    let mut total = FpMultiPoly::zero(p, d);
    for sigma in sigma_set(params, n)? {
        let mut prod = FpMultiPoly::constant(p, d, sigma.sign() as i64);
        for i in 1..=n {
            let k = params.ceil_term(i, sigma.image(i)) as usize;
            let deg = p as usize * i - sigma.image(i);
            prod = prod.mul(cache.get(params, k, deg));
            if prod.is_zero() {
                break;
            }
        }
        total = total.add(&prod);
    }
    Ok(total)
}

/// `P_{d,p} = P_1 * ... * P_{floor(d/2)}`.
pub fn hasse_product(params: &StratumParams) -> Result<FpMultiPoly> {
    let mut cache = PowerCoefficientCache::default();
    let mut acc = FpMultiPoly::constant(params.p(), params.d(), 1);
    for n in 1..=params.d() / 2 {
        acc = acc.mul(&hasse_p_n_cached(params, n, &mut cache)?);
    }
    Ok(acc)
}

/// `G_{d,p}(X_1..X_{d-1}) = P_{d,p}(X_1..X_{d-1}, 1)`.
pub fn hasse_g(params: &StratumParams) -> Result<FpMultiPoly> {
    Ok(hasse_product(params)?.specialize_tail(&[1]))
}

/// `H_{d,p}(X_1..X_{d-2}) = P_{d,p}(X_1..X_{d-2}, 0, 1)`.
pub fn hasse_h(params: &StratumParams) -> Result<FpMultiPoly> {
    Ok(hasse_product(params)?.specialize_tail(&[0, 1]))
}

/// Every Hasse polynomial for one `(d, p)`, sharing a single coefficient cache.
#[derive(Debug, Clone)]
pub struct HasseFamily {
    pub params: StratumParams,
    /// `P_1 .. P_{d-1}`.
    pub p_n: Vec<FpMultiPoly>,
    pub product: FpMultiPoly,
    pub g: FpMultiPoly,
    pub h: FpMultiPoly,
}

impl HasseFamily {
    /// Computes `P_n` for all `1 <= n <= d - 1` when `all` is set, otherwise only
    /// the factors of `P_{d,p}`.
    pub fn compute(params: &StratumParams, all: bool) -> Result<Self> {
        let mut cache = PowerCoefficientCache::default();
        let top = if all { params.d() - 1 } else { params.d() / 2 };
        let p_n = (1..=top)
            .map(|n| hasse_p_n_cached(params, n, &mut cache))
            .collect::<Result<Vec<_>>>()?;
        let product = p_n[..params.d() / 2].iter().fold(
            FpMultiPoly::constant(params.p(), params.d(), 1),
            |acc, f| acc.mul(f),
        );
        let g = product.specialize_tail(&[1]);
        let h = product.specialize_tail(&[0, 1]);
        Ok(Self {
            params: *params,
            p_n,
            product,
            g,
            h,
        })
    }
}

/// The monomial of `P_n` attached to `sigma_0`, with its predicted coefficient.
///
/// The exponent vector is `X_d^{sum_i floor(p i / d)} * prod_{i not in B_n} X_{j_i - sigma_0(i)}`
/// and the coefficient `sgn(sigma_0) * prod_{i not in B_n} ceil((p i - sigma_0(i)) / d)` mod `p`.
/// Built from the combinatorics alone, so it can be checked against [`hasse_p_n`].
pub fn witness_monomial(params: &StratumParams, n: usize) -> Result<(Vec<u32>, u64)> {
    let (p, d) = (params.p(), params.d());
    let b = b_set(params, n)?;
    let s0 = sigma_zero(params, n)?;
    let mut exps = vec![0u32; d];
    exps[d - 1] = (1..=n)
        .map(|i| floor_div(p as i64 * i as i64, d as i64))
        .sum::<i64>() as u32;
    let mut coeff = s0.sign() as i64;
    for i in (1..=n).filter(|i| !b.contains(i)) {
        let idx = residue_j(params, i)? - s0.image(i);
        exps[idx - 1] += 1;
        coeff = (coeff * params.ceil_term(i, s0.image(i))).rem_euclid(p as i64);
    }
    Ok((exps, coeff.rem_euclid(p as i64) as u64))
}

/// `(d-1)/2 * floor(d/2) * (floor(d/2)+1)` and half that: the degree bounds for `G` and `H`,
/// returned as exact rationals `(numerator, denominator)`.
pub fn degree_bounds(d: usize) -> ((u64, u64), (u64, u64)) {
    let h = (d / 2) as u64;
    let num = (d as u64 - 1) * h * (h + 1);
    ((num, 2), (num, 4))
}
