//! q*, t, genus field generators, the symbol matrix C₁ and rank bounds for the 5-class group.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic_ring::{unit_element, unit_log, CycInt, RingError};
use crate::linalg::{self, Matrix, Vector};
use crate::prime_decomposition::{
    factor_radicand, splitting_type, PrimeError, Radicand, SplittingType,
};
use crate::residue_symbols::{
    norm_condition_subgroup, tame_hilbert_symbol, wild_symbol_with_support, NormConditionSubgroup,
    SymbolError, SymbolExponent,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("t = d - 3 + q* is negative (d = {d}, q* = {qstar})")]
    NegativeT { d: usize, qstar: u8 },
    #[error("generator count {found} does not match t = {expected}")]
    GeneratorCount { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QStarResult {
    pub qstar: u8,
    pub common_subgroup: NormConditionSubgroup,
}

pub fn compute_qstar(rad: &Radicand) -> QStarResult {
    let common = rad
        .primes
        .iter()
        .map(|q| norm_condition_subgroup(&q.prime.rf))
        .fold(NormConditionSubgroup::full(), |acc, g| acc.intersect(&g));
    QStarResult {
        qstar: common.dim,
        common_subgroup: common,
    }
}

pub fn compute_t(rad: &Radicand, qs: &QStarResult) -> Result<usize, RankError> {
    let t = rad.d as i64 - 3 + qs.qstar as i64;
    if t < 0 {
        return Err(RankError::NegativeT {
            d: rad.d,
            qstar: qs.qstar,
        });
    }
    Ok(t as usize)
}

/// Coordinates of an S-unit modulo fifth powers: exponents of ζ, 1+ζ, π₁..π_g, λ.
pub type SUnitVector = Vec<u8>;

pub fn realize(rad: &Radicand, v: &[u8]) -> CycInt {
    let g = rad.primes.len();
    assert_eq!(v.len(), g + 3);
    let mut y = unit_element(1, v[0] as i64, v[1] as i64);
    for (q, &e) in rad.primes.iter().zip(&v[2..2 + g]) {
        if e != 0 {
            y = &y * &q.prime.element.pow(e as u32);
        }
    }
    if v[g + 2] != 0 {
        y = &y * &CycInt::lambda().pow(v[g + 2] as u32);
    }
    y
}

/// The vector of n itself.
pub fn radicand_vector(rad: &Radicand) -> SUnitVector {
    let mut v = vec![rad.unit.1 % 5, rad.unit.2.rem_euclid(5) as u8];
    v.extend(rad.primes.iter().map(|q| (q.exponent % 5) as u8));
    v.push((rad.lambda_exponent % 5) as u8);
    v
}

/// ψ as a 5 × (g+3) matrix: column j is (λ-valuation mod 5, unit log) of the j-th basis S-unit.
pub fn psi_matrix(rad: &Radicand) -> Result<Matrix, RankError> {
    let mut cols: Vec<[u8; 5]> = Vec::new();
    let mut push_unit = |y: &CycInt| -> Result<(), RankError> {
        let l = unit_log(y)?;
        cols.push([0, l[0], l[1], l[2], l[3]]);
        Ok(())
    };
    push_unit(&CycInt::zeta())?;
    push_unit(&CycInt::one_plus_zeta())?;
    for q in &rad.primes {
        push_unit(&q.prime.element)?;
    }
    cols.push([1, 0, 0, 0, 0]);
    let n = cols.len();
    let mut m = Matrix::zeros(5, 5, n);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..5 {
            m.data[i][j] = c[i] as u64;
        }
    }
    Ok(m)
}

fn to_u8(v: &[u64]) -> SUnitVector {
    v.iter().map(|&x| x as u8).collect()
}

fn to_u64(v: &[u8]) -> Vector {
    v.iter().map(|&x| x as u64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorMethod {
    Explicit,
    KernelSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub exponents: SUnitVector,
    pub value: CycInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusGenerators {
    pub generators: Vec<Generator>,
    pub method: GeneratorMethod,
}

impl GenusGenerators {
    pub fn exponent_vectors(&self) -> Vec<SUnitVector> {
        self.generators
            .iter()
            .map(|g| g.exponents.clone())
            .collect()
    }
}

/// The span that generators are taken modulo: n's vector when it lies in ker ψ.
fn base_span(rad: &Radicand, psi: &Matrix) -> Vec<Vector> {
    let nv = to_u64(&radicand_vector(rad));
    if psi.apply(&nv).iter().all(|&x| x == 0) {
        vec![nv]
    } else {
        vec![]
    }
}

/// Extend `base` greedily by candidates that are independent of everything taken so far.
fn greedy_extend(dim: usize, base: &[Vector], cands: &[Vector], limit: usize) -> Vec<Vector> {
    let mut span = base.to_vec();
    let mut picked = Vec::new();
    for c in cands {
        if picked.len() == limit {
            break;
        }
        if !linalg::contains(5, dim, &span, c) {
            span.push(c.clone());
            picked.push(c.clone());
        }
    }
    picked
}

/// Basis of ker ψ modulo n's vector.
pub fn kernel_generator_vectors(rad: &Radicand) -> Result<Vec<SUnitVector>, RankError> {
    let psi = psi_matrix(rad)?;
    let ker = psi.nullspace();
    let base = base_span(rad, &psi);
    Ok(greedy_extend(psi.cols, &base, &ker, usize::MAX)
        .iter()
        .map(|v| to_u8(v))
        .collect())
}

/// The explicit recipe for normalized primes: prime singletons that are already fifth-power
/// classes at λ, and pairings π_a·π_i^h with the first non-qualifying prime π_a.
/// Returns None when the recipe does not reach t independent generators.
pub fn explicit_generator_vectors(
    rad: &Radicand,
    t: usize,
) -> Result<Option<Vec<SUnitVector>>, RankError> {
    let g = rad.primes.len();
    let dim = g + 3;
    let psi = psi_matrix(rad)?;
    let logs: Vec<[u8; 4]> = rad
        .primes
        .iter()
        .map(|q| unit_log(&q.prime.element))
        .collect::<Result<_, _>>()?;
    let unit_vec = |j: usize, e: u64| {
        let mut v = vec![0u64; dim];
        v[2 + j] = e;
        v
    };
    let mut singles = Vec::new();
    let mut rest = Vec::new();
    for (j, l) in logs.iter().enumerate() {
        if l.iter().all(|&x| x == 0) {
            singles.push(unit_vec(j, 1));
        } else {
            rest.push(j);
        }
    }
    let mut pairs = Vec::new();
    if let Some((&a, others)) = rest.split_first() {
        for &i in others {
            let h = (1..5u64).find(|&h| {
                let mut v = unit_vec(a, 1);
                v[2 + i] = h;
                psi.apply(&v).iter().all(|&x| x == 0)
            });
            if let Some(h) = h {
                let mut v = unit_vec(a, 1);
                v[2 + i] = h;
                pairs.push(v);
            }
        }
    }
    let mut cands = pairs;
    cands.extend(singles);
    let base = base_span(rad, &psi);
    let picked = greedy_extend(dim, &base, &cands, t);
    if picked.len() < t {
        return Ok(None);
    }
    Ok(Some(picked.iter().map(|v| to_u8(v)).collect()))
}

fn realize_all(rad: &Radicand, vs: Vec<SUnitVector>) -> Vec<Generator> {
    vs.into_iter()
        .map(|v| Generator {
            value: realize(rad, &v),
            exponents: v,
        })
        .collect()
}

pub fn genus_generators(rad: &Radicand, t: usize) -> Result<GenusGenerators, RankError> {
    if rad.all_normalized() {
        if let Some(vs) = explicit_generator_vectors(rad, t)? {
            return Ok(GenusGenerators {
                generators: realize_all(rad, vs),
                method: GeneratorMethod::Explicit,
            });
        }
    }
    let vs = kernel_generator_vectors(rad)?;
    if vs.len() != t {
        return Err(RankError::GeneratorCount {
            expected: t,
            found: vs.len(),
        });
    }
    Ok(GenusGenerators {
        generators: realize_all(rad, vs),
        method: GeneratorMethod::KernelSearch,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C1Matrix {
    pub rows: Vec<Vec<SymbolExponent>>,
    pub tame_cols: usize,
    pub wild_col: bool,
    /// Columns that would come from norms of ambiguous classes, unknown without class-group data.
    pub extra_cols_possible: usize,
}

impl C1Matrix {
    pub fn rank(&self) -> usize {
        let cols = self.tame_cols + usize::from(self.wild_col);
        let data: Vec<Vector> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| e.value() as u64).collect())
            .collect();
        linalg::rank_of(5, cols, &data)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.is_zero())
    }

    pub fn nonzero_entries(&self) -> usize {
        self.rows.iter().flatten().filter(|e| !e.is_zero()).count()
    }
}

pub fn build_c1(
    rad: &Radicand,
    gens: &GenusGenerators,
    qs: &QStarResult,
) -> Result<C1Matrix, RankError> {
    let n = CycInt::from_int(rad.n);
    let support: Vec<_> = rad.primes.iter().map(|q| q.prime.clone()).collect();
    let mut rows = Vec::with_capacity(gens.generators.len());
    for x in &gens.generators {
        let mut row = Vec::with_capacity(rad.g + 1);
        for q in &rad.primes {
            row.push(tame_hilbert_symbol(
                &x.value,
                &n,
                &q.prime.element,
                &q.prime.rf,
            )?);
        }
        if rad.lambda_ramifies {
            row.push(wild_symbol_with_support(
                &x.value,
                &CycInt::lambda(),
                &support,
            )?);
        }
        rows.push(row);
    }
    Ok(C1Matrix {
        rows,
        tame_cols: rad.g,
        wild_col: rad.lambda_ramifies,
        extra_cols_possible: qs.qstar as usize,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialFamily {
    /// r ≥ 2 distinct primes, all ≡ ±7 mod 25.
    AllPlusMinusSeven,
    /// Primes ≡ ±7 mod 25 and s ≥ 1 primes ≡ ±2 mod 5 not ±7 mod 25, n ≢ ±1, ±7 mod 25.
    MixedRamified,
    /// As above with s ≥ 2 and n ≡ ±1, ±7 mod 25.
    MixedUnramified,
    /// A power of one prime ≡ −1 mod 5.
    SplitTwoPower,
    /// p^a q^b with p ≡ ±7 mod 25 and q ≡ −1 mod 5.
    SevenTimesSplitTwo,
}

impl SpecialFamily {
    pub fn tag(self) -> &'static str {
        match self {
            SpecialFamily::AllPlusMinusSeven => "all-pm7",
            SpecialFamily::MixedRamified => "mixed-ramified",
            SpecialFamily::MixedUnramified => "mixed-unramified",
            SpecialFamily::SplitTwoPower => "split-two-power",
            SpecialFamily::SevenTimesSplitTwo => "pm7-times-split-two",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialCase {
    pub family: SpecialFamily,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub s1: usize,
    pub bounds: (usize, usize),
    /// Lower bound on the rank that holds without strong ambiguity, when the family gives one.
    pub nonstrong_floor: Option<usize>,
}

fn is_pm7(p: u64) -> bool {
    matches!(p % 25, 7 | 18)
}

fn is_pm2_not_pm7(p: u64) -> bool {
    matches!(p % 5, 2 | 3) && !is_pm7(p)
}

pub fn classify_special_case(rad: &Radicand) -> Option<SpecialCase> {
    if rad.v5 > 0 {
        return None;
    }
    let ps: Vec<u64> = rad.factorization.iter().map(|f| f.0).collect();
    let r = ps.iter().filter(|&&p| is_pm7(p)).count();
    let s = ps.iter().filter(|&&p| is_pm2_not_pm7(p)).count();
    let m = ps
        .iter()
        .filter(|&&p| splitting_type(p) == SplittingType::SplitTwo)
        .count();
    let unram = !rad.lambda_ramifies;
    let mk = |family, t: usize, s1: usize, floor: Option<usize>| SpecialCase {
        family,
        r,
        s,
        t,
        s1,
        bounds: (2 * t - s1, 4 * t - 3 * s1),
        nonstrong_floor: floor,
    };
    if r + s == ps.len() {
        if s == 0 && r >= 2 {
            return Some(mk(
                SpecialFamily::AllPlusMinusSeven,
                r - 1,
                0,
                Some((2 * r).saturating_sub(4).max(r - 1)),
            ));
        }
        if s >= 1 && !unram {
            let t = r + s - 1;
            return Some(mk(
                SpecialFamily::MixedRamified,
                t,
                0,
                Some((2 * r + 2 * s).saturating_sub(3).max(t)),
            ));
        }
        if s >= 2 && unram {
            let t = r + s - 2;
            return Some(mk(
                SpecialFamily::MixedUnramified,
                t,
                0,
                Some((2 * r + 2 * s).saturating_sub(5).max(t)),
            ));
        }
        return None;
    }
    if ps.len() == 1 && m == 1 {
        return Some(mk(SpecialFamily::SplitTwoPower, 1, 0, None));
    }
    if ps.len() == 2 && m == 1 && r == 1 {
        return Some(mk(SpecialFamily::SevenTimesSplitTwo, 2, 1, None));
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub n: u64,
    pub t: usize,
    pub qstar: u8,
    pub d: usize,
    pub g: usize,
    pub lambda_ramifies: bool,
    pub assume_strong: bool,
    pub generators: GenusGenerators,
    pub c1: C1Matrix,
    pub s1_strong: usize,
    pub s1_range_nonstrong: (usize, usize),
    pub lambda2_rank_strong: usize,
    pub lambda2_rank_range_nonstrong: (usize, usize),
    pub bounds_strong: (usize, usize),
    pub bounds_nonstrong: (usize, usize),
    pub special_case: Option<SpecialCase>,
}

impl RankReport {
    /// Bounds for the branch selected by `assume_strong`.
    pub fn bounds(&self) -> (usize, usize) {
        if self.assume_strong {
            self.bounds_strong
        } else {
            self.bounds_nonstrong
        }
    }

    pub fn bounds_collapse(&self) -> bool {
        let (lo, hi) = self.bounds();
        lo == hi
    }
}

pub fn rank_report_for(rad: &Radicand, assume_strong: bool) -> Result<RankReport, RankError> {
    let qs = compute_qstar(rad);
    let t = compute_t(rad, &qs)?;
    let generators = genus_generators(rad, t)?;
    let c1 = build_c1(rad, &generators, &qs)?;
    let s1 = c1.rank();
    assert!(s1 <= t);
    let s1_max = t.min(s1 + c1.extra_cols_possible);
    let special_case = classify_special_case(rad);
    let mut lo_ns = 2 * t - s1_max;
    if let Some(floor) = special_case.as_ref().and_then(|s| s.nonstrong_floor) {
        lo_ns = lo_ns.max(floor);
    }
    Ok(RankReport {
        n: rad.n,
        t,
        qstar: qs.qstar,
        d: rad.d,
        g: rad.g,
        lambda_ramifies: rad.lambda_ramifies,
        assume_strong,
        generators,
        s1_strong: s1,
        s1_range_nonstrong: (s1, s1_max),
        lambda2_rank_strong: t - s1,
        lambda2_rank_range_nonstrong: (t - s1_max, t - s1),
        bounds_strong: (2 * t - s1, 4 * t - 3 * s1),
        bounds_nonstrong: (lo_ns, 4 * t - 3 * s1),
        c1,
        special_case,
    })
}

pub fn rank_report(n: u64, assume_strong: bool) -> Result<RankReport, RankError> {
    rank_report_for(&factor_radicand(n)?, assume_strong)
}
