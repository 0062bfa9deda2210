//! Stratum censuses: for each normalized polynomial, the actual Newton polygon of
//! its L-function next to the value of the Hasse polynomial at its coefficients.
//!
//! The two sides are computed independently (exact character sums against
//! polynomial evaluation) and only compared in the summary.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{newton_polygon_of_l, CharacterSumTable, LPolynomial};
use crate::dwork::{trace_congruence_check, CongruenceReport};
use crate::error::{Error, Result};
use crate::field::{ExtensionField, FieldDescriptor, FieldElement, DEFAULT_ENUMERATION_CAP};
use crate::fqpoly::FqPolynomial;
use crate::hasse::hasse_h;
use crate::multipoly::FpMultiPoly;
use crate::polygon::{
    generic_polygon, has_weight_one_endpoint, hodge_polygon, is_symmetric, lies_above,
    NewtonPolygon,
};
use crate::strata::StratumParams;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1_000_000;

/// Seed used for every field modulus search in a census.
const FIELD_SEED: u64 = 0;

/// `x^d + a_{d-2} x^{d-2} + ... + a_1 x` over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedPolynomial {
    field: ExtensionField,
    d: usize,
    coeffs: Vec<FieldElement>,
}

impl NormalizedPolynomial {
    /// From `a_1 .. a_{d-2}`.
    pub fn new(field: &ExtensionField, d: usize, coeffs: Vec<FieldElement>) -> Result<Self> {
        StratumParams::new(d, field.p())?;
        if coeffs.len() != d - 2 {
            return Err(Error::DegreeMismatch {
                expected: d - 2,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch("coefficient outside the field".into()));
        }
        Ok(Self {
            field: field.clone(),
            d,
            coeffs,
        })
    }

    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `a_1 .. a_{d-2}`.
    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn to_polynomial(&self) -> FqPolynomial {
        let mut c = vec![self.field.zero()];
        c.extend(self.coeffs.iter().cloned());
        c.push(self.field.zero());
        c.push(self.field.one());
        FqPolynomial::new(&self.field, c).expect("coefficients share the field")
    }
}

/// Returns `(g, t)` with `g(x) = f(x + t) - f(t)` and `t = -a_{d-1} / d`.
pub fn normalize(f: &FqPolynomial) -> Result<(NormalizedPolynomial, FieldElement)> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let field = f.field();
    let d = f.degree().expect("monic polynomial is nonzero");
    StratumParams::new(d, field.p())?;
    let d_inv = field.from_u64(d as u64).inv().expect("d is prime to p");
    let t = -&(&f.coeff(d - 1) * &d_inv);
    let g = f.shift(&t);
    debug_assert!(g.coeff(d - 1).is_zero());
    let coeffs = (1..d - 1).map(|i| g.coeff(i)).collect();
    Ok((NormalizedPolynomial::new(field, d, coeffs)?, t))
}

/// Number of normalized polynomials of degree `d` over `field`, i.e. `q^{d-2}`.
pub fn normalized_count(field: &ExtensionField, d: usize) -> u128 {
    field.order().pow(d as u32 - 2)
}

/// The `index`-th normalized polynomial, `a_1` most significant.
pub fn normalized_at(
    field: &ExtensionField,
    d: usize,
    mut index: u128,
) -> Result<NormalizedPolynomial> {
    let q = field.order();
    let mut coeffs = vec![field.zero(); d - 2];
    for c in coeffs.iter_mut().rev() {
        *c = field.element_at(index % q);
        index /= q;
    }
    NormalizedPolynomial::new(field, d, coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Exhaustive,
    /// Uniform draws with replacement.
    Sample,
}

/// Resource limits; every field may be omitted in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CensusCaps {
    /// Largest field enumerated for a character sum.
    pub enumeration: u64,
    /// Largest number of polynomials in an exhaustive census.
    pub exhaustive: u64,
}

impl Default for CensusCaps {
    fn default() -> Self {
        Self {
            enumeration: DEFAULT_ENUMERATION_CAP as u64,
            exhaustive: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusConfig {
    pub d: usize,
    pub p: u64,
    pub m: usize,
    pub mode: CensusMode,
    pub sample_size: usize,
    pub seed: u64,
    pub with_congruence: bool,
    pub caps: CensusCaps,
}

impl CensusConfig {
    pub fn exhaustive(d: usize, p: u64, m: usize) -> Self {
        Self {
            d,
            p,
            m,
            mode: CensusMode::Exhaustive,
            sample_size: 0,
            seed: 0,
            with_congruence: false,
            caps: CensusCaps::default(),
        }
    }

    pub fn sample(d: usize, p: u64, m: usize, size: usize, seed: u64) -> Self {
        Self {
            mode: CensusMode::Sample,
            sample_size: size,
            seed,
            ..Self::exhaustive(d, p, m)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub d: usize,
    pub p: u64,
    pub m: usize,
    /// `a_1 .. a_{d-2}`, each as its coordinate vector over `F_p`.
    pub coefficients: Vec<Vec<u64>>,
    pub hasse_value: Vec<u64>,
    pub np_vertices: NewtonPolygon,
    pub gnp_vertices: NewtonPolygon,
    pub is_generic: bool,
    pub lies_above: bool,
    /// `NP` symmetric with endpoint `(d-1, (d-1)/2)`.
    pub symmetric: bool,
    /// `c_0 .. c_{d-1}` in the basis `zeta^0 .. zeta^{p-2}`, decimal strings.
    pub l_coefficients: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence: Option<CongruenceReport>,
}

impl CensusRecord {
    pub fn hasse_vanishes(&self) -> bool {
        self.hasse_value.iter().all(|&c| c == 0)
    }

    /// The iff of the stratum theorem for this record.
    pub fn theorem_holds(&self) -> bool {
        self.is_generic != self.hasse_vanishes()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub total: usize,
    pub generic: usize,
    pub non_generic: usize,
    pub hasse_zero: usize,
    /// Records where `is_generic` disagrees with `hasse_value != 0`.
    pub theorem_violations: usize,
    pub lies_above_violations: usize,
    pub symmetry_violations: usize,
    pub gnp_above_hodge: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence_failures: Option<usize>,
}

impl CensusSummary {
    pub fn passed(&self) -> bool {
        self.theorem_violations == 0
            && self.lies_above_violations == 0
            && self.symmetry_violations == 0
            && self.gnp_above_hodge
            && self.congruence_failures.unwrap_or(0) == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusOutput {
    pub schema_version: u32,
    pub d: usize,
    pub p: u64,
    pub m: usize,
    pub mode: CensusMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `F_q` followed by `F_{q^r}` for `r = 2 .. d-1`.
    pub fields: Vec<FieldDescriptor>,
    pub hasse_h: String,
    pub hodge: NewtonPolygon,
    pub gnp: NewtonPolygon,
    pub summary: CensusSummary,
    pub records: Vec<CensusRecord>,
}

impl CensusOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census output serializes") + "\n"
    }

    /// One line per record: coefficients, hasse value, generic flag, NP.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("coefficients\thasse_value\tis_generic\tlies_above\tnp\n");
        for r in &self.records {
            let coeffs: Vec<String> = r.coefficients.iter().map(|c| format_coords(c)).collect();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                coeffs.join(","),
                format_coords(&r.hasse_value),
                r.is_generic,
                r.lies_above,
                r.np_vertices
            ));
        }
        out
    }
}

fn format_coords(c: &[u64]) -> String {
    match c {
        [x] => x.to_string(),
        _ => format!(
            "[{}]",
            c.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        ),
    }
}

/// Precomputed data shared by every record of a census.
struct CensusContext {
    d: usize,
    m: usize,
    base: ExtensionField,
    tables: Vec<CharacterSumTable>,
    h: FpMultiPoly,
    gnp: NewtonPolygon,
    with_congruence: bool,
}

impl CensusContext {
    fn record(&self, f: &NormalizedPolynomial) -> Result<CensusRecord> {
        let poly = f.to_polynomial();
        let sums = self
            .tables
            .iter()
            .map(|t| t.sum(&poly))
            .collect::<Result<Vec<_>>>()?;
        let l = LPolynomial::from_sums(&sums, self.m)?;
        let np = newton_polygon_of_l(&l)?;
        let hasse_value = self.h.evaluate_in(&self.base, f.coefficients())?;
        let congruence = if self.with_congruence {
            Some(trace_congruence_check(&poly, 2 * self.base.p() as usize)?)
        } else {
            None
        };
        Ok(CensusRecord {
            d: self.d,
            p: self.base.p(),
            m: self.m,
            coefficients: f
                .coefficients()
                .iter()
                .map(|c| c.coords().to_vec())
                .collect(),
            hasse_value: hasse_value.coords().to_vec(),
            is_generic: np == self.gnp,
            lies_above: lies_above(&np, &self.gnp)?,
            symmetric: is_symmetric(&np) && has_weight_one_endpoint(&np, self.d),
            np_vertices: np,
            gnp_vertices: self.gnp.clone(),
            l_coefficients: l.coeffs().iter().map(|c| c.to_strings()).collect(),
            congruence,
        })
    }
}

/// Runs a census; records come back sorted by coefficient vector.
pub fn census(config: &CensusConfig) -> Result<CensusOutput> {
    let CensusConfig {
        d,
        p,
        m,
        mode,
        sample_size,
        seed,
        with_congruence,
        caps,
    } = *config;
    let params = StratumParams::new(d, p)?;
    params.require_theorem_tier()?;
    if m == 0 {
        return Err(Error::Invalid("m must be positive".into()));
    }
    if with_congruence && m != 1 {
        return Err(Error::Invalid(
            "the trace congruence applies over F_p only (m = 1)".into(),
        ));
    }
    let base = ExtensionField::prime(p)?.extend(m, FIELD_SEED)?;
    let count = normalized_count(&base, d);
    let polys: Vec<NormalizedPolynomial> = match mode {
        CensusMode::Exhaustive => {
            if count > caps.exhaustive as u128 {
                return Err(Error::CensusCap {
                    count,
                    cap: caps.exhaustive as u128,
                });
            }
            (0..count)
                .map(|i| normalized_at(&base, d, i))
                .collect::<Result<_>>()?
        }
        CensusMode::Sample => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..sample_size)
                .map(|_| normalized_at(&base, d, rng.gen_range(0..count)))
                .collect::<Result<_>>()?
        }
    };

    let cap = caps.enumeration as u128;
    let mut fields = vec![base.clone()];
    for r in 2..d {
        fields.push(base.extend(r, FIELD_SEED)?);
    }
    let tables = fields
        .iter()
        .map(|top| CharacterSumTable::new(&base, top, d, cap))
        .collect::<Result<_>>()?;
    let ctx = CensusContext {
        d,
        m,
        base: base.clone(),
        tables,
        h: hasse_h(&params)?,
        gnp: generic_polygon(&params)?,
        with_congruence,
    };
    let mut records = polys
        .par_iter()
        .map(|f| ctx.record(f))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.coefficients.cmp(&b.coefficients));

    let hodge = hodge_polygon(d)?;
    let summary = CensusSummary {
        total: records.len(),
        generic: records.iter().filter(|r| r.is_generic).count(),
        non_generic: records.iter().filter(|r| !r.is_generic).count(),
        hasse_zero: records.iter().filter(|r| r.hasse_vanishes()).count(),
        theorem_violations: records.iter().filter(|r| !r.theorem_holds()).count(),
        lies_above_violations: records.iter().filter(|r| !r.lies_above).count(),
        symmetry_violations: records.iter().filter(|r| !r.symmetric).count(),
        gnp_above_hodge: lies_above(&ctx.gnp, &hodge)?,
        congruence_failures: with_congruence.then(|| {
            records
                .iter()
                .filter(|r| r.congruence.as_ref().is_some_and(|c| !c.pass))
                .count()
        }),
    };
    let sampled = mode == CensusMode::Sample;
    Ok(CensusOutput {
        schema_version: SCHEMA_VERSION,
        d,
        p,
        m,
        mode,
        sample_size: sampled.then_some(sample_size),
        seed: sampled.then_some(seed),
        fields: fields.iter().map(ExtensionField::descriptor).collect(),
        hasse_h: ctx.h.to_string(),
        hodge,
        gnp: ctx.gnp,
        summary,
        records,
    })
}
