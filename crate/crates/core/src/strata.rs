//! Permutation combinatorics behind the generic polygon.
//!
//! For a degree `d` and a prime `p` coprime to `d`, the quantities here are
//! `j_i` (least positive residue of `p*i` mod `d`), the sets `B_n`, the minimum
//! `Y_n` of `sum_k ceil((p*k - sigma(k)) / d)` over `S_n`, the minimizing set
//! `Sigma_n`, its subset `Sigma_n^+` and the distinguished permutation
//! `sigma_0` used to certify that the Hasse polynomials do not vanish.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{ceil_div, gcd, is_prime};
use crate::error::{Error, Result};

/// Largest `n` for which [`y_n_bruteforce`] will enumerate `S_n`.
pub const BRUTE_FORCE_CAP: usize = 8;

/// The pair `(d, p)` with `p` prime and coprime to `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumParams {
    d: usize,
    p: u64,
}

impl StratumParams {
    pub fn new(d: usize, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d < 2 || gcd(p, d as u64) != 1 {
            return Err(Error::BadDegree { d, p });
        }
        Ok(Self { d, p })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `p >= d + 3`, needed for the trace congruence.
    pub fn tier_congruence(&self) -> bool {
        self.p >= self.d as u64 + 3
    }

    /// `p >= 3d`, needed for the generic polygon and Hasse polynomial results.
    pub fn tier_theorem(&self) -> bool {
        self.p >= 3 * self.d as u64
    }

    pub fn require_congruence_tier(&self) -> Result<()> {
        if self.tier_congruence() {
            Ok(())
        } else {
            Err(Error::Tier {
                d: self.d,
                p: self.p,
                required: self.d as u64 + 3,
            })
        }
    }

    pub fn require_theorem_tier(&self) -> Result<()> {
        if self.tier_theorem() {
            Ok(())
        } else {
            Err(Error::Tier {
                d: self.d,
                p: self.p,
                required: 3 * self.d as u64,
            })
        }
    }

    fn check_n(&self, n: usize, lo: usize) -> Result<()> {
        if n < lo || n > self.d - 1 {
            return Err(Error::OutOfRange {
                value: n,
                lo,
                hi: self.d - 1,
            });
        }
        Ok(())
    }

    /// `ceil((p*i - j) / d)`, the exponent attached to the matrix position `(i, j)`.
    pub fn ceil_term(&self, i: usize, j: usize) -> i64 {
        ceil_div(self.p as i64 * i as i64 - j as i64, self.d as i64)
    }
}

/// A permutation of `{1..n}` stored by its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
    sign: i8,
}

impl Permutation {
    /// Builds a permutation from 1-based images; `None` if they are not a bijection of `1..=n`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        let sign = parity_sign(&images);
        Some(Self { images, sign })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n).collect(),
            sign: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `sigma(i)` for `1 <= i <= n`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }
}

fn parity_sign(images: &[usize]) -> i8 {
    let n = images.len();
    let mut visited = vec![false; n];
    let mut transpositions = 0usize;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !visited[cur] {
            visited[cur] = true;
            cur = images[cur] - 1;
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All permutations of `1..=n` in lexicographic order of their image vectors.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation {
            sign: parity_sign(&cur),
            images: cur.clone(),
        });
        // next lexicographic permutation
        let Some(k) = (0..n.saturating_sub(1))
            .rev()
            .find(|&k| cur[k] < cur[k + 1])
        else {
            break;
        };
        let l = (k + 1..n).rev().find(|&l| cur[k] < cur[l]).unwrap();
        cur.swap(k, l);
        cur[k + 1..].reverse();
    }
    out
}

/// `j_i`: the least positive integer congruent to `p*i` mod `d`.
pub fn residue_j(params: &StratumParams, i: usize) -> Result<usize> {
    params.check_n(i, 1)?;
    let r = (params.p % params.d as u64) as usize * i % params.d;
    Ok(if r == 0 { params.d } else { r })
}

fn residues(params: &StratumParams) -> Vec<usize> {
    // index 0 unused so that js[i] == j_i
    let mut js = vec![0];
    js.extend((1..params.d).map(|i| residue_j(params, i).expect("i in range")));
    js
}

/// `B_n = { 1 <= i <= n : j_i <= n }`.
pub fn b_set(params: &StratumParams, n: usize) -> Result<BTreeSet<usize>> {
    params.check_n(n, 1)?;
    let js = residues(params);
    Ok((1..=n).filter(|&i| js[i] <= n).collect())
}

/// `Y_n = sum_{k <= n} ceil(p*k / d) - #B_n`, with `Y_0 = 0`.
pub fn y_n(params: &StratumParams, n: usize) -> Result<u64> {
    params.check_n(n, 0)?;
    if n == 0 {
        return Ok(0);
    }
    let head: i64 = (1..=n).map(|k| params.ceil_term(k, 0)).sum();
    let b = b_set(params, n)?.len() as i64;
    Ok((head - b) as u64)
}

fn permutation_weight(params: &StratumParams, sigma: &Permutation) -> i64 {
    (1..=sigma.len())
        .map(|k| params.ceil_term(k, sigma.image(k)))
        .sum()
}

/// `Y_n` as a minimum over all of `S_n`; exponential, capped at [`BRUTE_FORCE_CAP`].
pub fn y_n_bruteforce(params: &StratumParams, n: usize) -> Result<u64> {
    params.check_n(n, 1)?;
    if n > BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let min = all_permutations(n)
        .iter()
        .map(|s| permutation_weight(params, s))
        .min()
        .expect("S_n is nonempty");
    Ok(min as u64)
}

/// Permutations attaining the brute-force minimum, for cross-checking [`sigma_set`].
pub fn sigma_set_bruteforce(params: &StratumParams, n: usize) -> Result<Vec<Permutation>> {
    let y = y_n_bruteforce(params, n)? as i64;
    Ok(all_permutations(n)
        .into_iter()
        .filter(|s| permutation_weight(params, s) == y)
        .collect())
}

/// `Sigma_n`: permutations with `sigma(i) >= j_i` for every `i` in `B_n`.
pub fn sigma_set(params: &StratumParams, n: usize) -> Result<Vec<Permutation>> {
    let b = b_set(params, n)?;
    let js = residues(params);
    Ok(all_permutations(n)
        .into_iter()
        .filter(|s| b.iter().all(|&i| s.image(i) >= js[i]))
        .collect())
}

/// `Sigma_n^+`: members of `Sigma_n` with `sigma(i) = j_i` on `B_n`.
pub fn sigma_plus(params: &StratumParams, n: usize) -> Result<Vec<Permutation>> {
    let b = b_set(params, n)?;
    let js = residues(params);
    Ok(sigma_set(params, n)?
        .into_iter()
        .filter(|s| b.iter().all(|&i| s.image(i) == js[i]))
        .collect())
}

/// The greedy permutation `sigma_0`: fixed to `j_i` on `B_n`, then indices outside
/// `B_n` taken by decreasing `j_i`, each receiving the smallest unused image.
pub fn sigma_zero(params: &StratumParams, n: usize) -> Result<Permutation> {
    let b = b_set(params, n)?;
    let js = residues(params);
    let mut images = vec![0usize; n];
    let mut free: BTreeSet<usize> = (1..=n).collect();
    for &i in &b {
        images[i - 1] = js[i];
        free.remove(&js[i]);
    }
    let mut rest: Vec<usize> = (1..=n).filter(|i| !b.contains(i)).collect();
    // j is injective, so this order has no ties
    rest.sort_by(|&a, &c| js[c].cmp(&js[a]));
    for i in rest {
        let img = *free.iter().next().expect("as many free images as indices");
        free.remove(&img);
        images[i - 1] = img;
    }
    Ok(Permutation::from_images(images).expect("greedy assignment is a bijection"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(d: usize, p: u64) -> StratumParams {
        StratumParams::new(d, p).unwrap()
    }

    #[test]
    fn params_validation() {
        assert_eq!(StratumParams::new(3, 12), Err(Error::NotPrime(12)));
        assert!(matches!(
            StratumParams::new(3, 3),
            Err(Error::BadDegree { .. })
        ));
        assert!(matches!(
            StratumParams::new(1, 5),
            Err(Error::BadDegree { .. })
        ));
        let s = sp(4, 7);
        assert!(s.tier_congruence());
        assert!(!s.tier_theorem());
        assert!(s.require_theorem_tier().is_err());
        assert!(sp(4, 13).tier_theorem());
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residue_j(&sp(3, 13), 2).unwrap(), 2);
        assert_eq!(residue_j(&sp(3, 11), 1).unwrap(), 2);
        assert_eq!(residue_j(&sp(4, 19), 1).unwrap(), 3);
        assert!(residue_j(&sp(4, 19), 0).is_err());
        assert!(residue_j(&sp(4, 19), 4).is_err());
    }

    #[test]
    fn residues_form_a_bijection() {
        for (d, p) in [(3, 11), (5, 17), (7, 23), (6, 31), (8, 37)] {
            let s = sp(d, p);
            let mut js: Vec<usize> = (1..d).map(|i| residue_j(&s, i).unwrap()).collect();
            js.sort();
            assert_eq!(js, (1..d).collect::<Vec<_>>());
        }
    }

    #[test]
    fn b_set_examples() {
        assert_eq!(b_set(&sp(3, 13), 1).unwrap(), BTreeSet::from([1]));
        assert!(b_set(&sp(3, 11), 1).unwrap().is_empty());
        assert_eq!(b_set(&sp(3, 11), 2).unwrap(), BTreeSet::from([1, 2]));
    }

    #[test]
    fn y_n_examples() {
        assert_eq!(y_n(&sp(3, 13), 1).unwrap(), 4);
        assert_eq!(y_n(&sp(3, 11), 2).unwrap(), 10);
        assert_eq!(y_n(&sp(5, 17), 0).unwrap(), 0);
        assert_eq!(y_n_bruteforce(&sp(3, 11), 1).unwrap(), 4);
        assert_eq!(y_n_bruteforce(&sp(4, 19), 2).unwrap(), 14);
        assert_eq!(y_n_bruteforce(&sp(3, 13), 2).unwrap(), 12);
        assert_eq!(
            (1..4)
                .map(|n| y_n(&sp(4, 19), n).unwrap())
                .collect::<Vec<_>>(),
            vec![5, 14, 27]
        );
    }

    #[test]
    fn brute_force_cap() {
        let s = sp(11, 13);
        assert!(matches!(
            y_n_bruteforce(&s, 9),
            Err(Error::BruteForceCap { .. })
        ));
    }

    #[test]
    fn sigma_examples() {
        let id1 = Permutation::identity(1);
        assert_eq!(sigma_set(&sp(3, 13), 1).unwrap(), vec![id1.clone()]);
        assert_eq!(sigma_plus(&sp(3, 13), 1).unwrap(), vec![id1.clone()]);
        let swap = Permutation::from_images(vec![2, 1]).unwrap();
        assert_eq!(swap.sign(), -1);
        assert_eq!(sigma_set(&sp(3, 11), 2).unwrap(), vec![swap.clone()]);
        assert_eq!(sigma_plus(&sp(3, 11), 2).unwrap(), vec![swap]);
        assert_eq!(
            sigma_set(&sp(4, 19), 2).unwrap(),
            vec![Permutation::identity(2)]
        );
        assert_eq!(sigma_zero(&sp(3, 13), 2).unwrap(), Permutation::identity(2));
        assert_eq!(sigma_zero(&sp(3, 11), 1).unwrap(), id1);
    }

    #[test]
    fn sigma_plus_fixes_b_set() {
        let s = sp(4, 19);
        let b = b_set(&s, 3).unwrap();
        assert_eq!(b, BTreeSet::from([1, 2, 3]));
        let plus = sigma_plus(&s, 3).unwrap();
        assert!(!plus.is_empty());
        for sigma in &plus {
            for &i in &b {
                assert_eq!(sigma.image(i), residue_j(&s, i).unwrap());
            }
        }
    }

    #[test]
    fn sigma_zero_is_in_sigma_plus() {
        for (d, p) in [(5, 17), (6, 19), (7, 23), (7, 37), (8, 29)] {
            let s = sp(d, p);
            for n in 1..d {
                let z = sigma_zero(&s, n).unwrap();
                let plus = sigma_plus(&s, n).unwrap();
                let set = sigma_set(&s, n).unwrap();
                assert!(plus.contains(&z), "(d,p,n)=({d},{p},{n})");
                assert!(plus.iter().all(|x| set.contains(x)));
            }
        }
    }

    #[test]
    fn permutation_sign_and_count() {
        let perms = all_permutations(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|s| s.sign() == 1).count(), 12);
        assert_eq!(all_permutations(0).len(), 1);
        assert!(Permutation::from_images(vec![1, 1]).is_none());
        assert_eq!(Permutation::from_images(vec![2, 3, 1]).unwrap().sign(), 1);
    }

    #[test]
    fn split_case_is_hodge() {
        // p = 1 mod d: j_i = i, B_n = {1..n}, Sigma_n = {id}
        for (d, p) in [(3, 13), (4, 13), (5, 31), (6, 37)] {
            let s = sp(d, p);
            for n in 1..d {
                assert_eq!(residue_j(&s, n).unwrap(), n);
                assert_eq!(b_set(&s, n).unwrap(), (1..=n).collect());
                assert_eq!(sigma_set(&s, n).unwrap(), vec![Permutation::identity(n)]);
                let hodge = (p - 1) * (n * (n + 1)) as u64 / (2 * d as u64);
                assert_eq!(y_n(&s, n).unwrap(), hodge);
            }
        }
    }
}
