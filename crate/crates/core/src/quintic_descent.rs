//! Descent from the 5-class group of K = Q(ζ₅, n^{1/5}) to that of L = Q(n^{1/5}).

use serde::{Deserialize, Serialize};

use crate::ambiguous_rank::{
    radicand_vector, rank_report_for, realize, RankError, RankReport, SUnitVector,
};
use crate::cyclotomic_ring::{identify_unit, CycInt};
use crate::linalg::{self, Vector};
use crate::prime_decomposition::{are_associate, factor_radicand, factor_u64, FPrime, Radicand};

/// True when σ²(π) = conj(π, 4) is an associate of π.
pub fn is_sigma2_fixed(pi: &CycInt) -> bool {
    match pi.conj(4) {
        Ok(c) => are_associate(&c, pi),
        Err(_) => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorShape {
    Rational,
    Sigma2Fixed,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapedGenerator {
    pub exponents: SUnitVector,
    pub value: CycInt,
    pub shape: GeneratorShape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCounts {
    pub w: usize,
    pub r: usize,
    /// Generators re-chosen so that the first w are rational and the first r are σ²-fixed.
    pub adapted: Vec<ShapedGenerator>,
}

fn to_u64(v: &[u8]) -> Vector {
    v.iter().map(|&x| x as u64).collect()
}

fn unit_vector(dim: usize, i: usize) -> Vector {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// Exponent vector of the rational prime p (or 5) in the S-unit basis of `rad`.
fn rational_prime_vector(rad: &Radicand, p: u64) -> Option<Vector> {
    let g = rad.primes.len();
    let dim = g + 3;
    let mut v = vec![0u64; dim];
    let mut u = CycInt::from_int(p);
    if p == 5 {
        for _ in 0..4 {
            u = u.div_exact(&CycInt::lambda())?;
        }
        v[g + 2] = 4;
    } else {
        for (j, q) in rad.primes.iter().enumerate() {
            if q.prime.p == p {
                u = u.div_exact(&q.prime.element)?;
                v[2 + j] = 1;
            }
        }
    }
    let (_, a, b) = identify_unit(&u)?;
    v[0] = a as u64 % 5;
    v[1] = b.rem_euclid(5) as u64;
    Some(v)
}

/// The span of unit coordinates together with n. Shapes are read modulo this space.
fn base_space(rad: &Radicand) -> Vec<Vector> {
    let dim = rad.primes.len() + 3;
    linalg::span_basis(
        5,
        dim,
        &[
            unit_vector(dim, 0),
            unit_vector(dim, 1),
            to_u64(&radicand_vector(rad)),
        ],
    )
}

/// Rational S-units up to units: rational primes dividing n, and λ.
fn rational_space(rad: &Radicand) -> Vec<Vector> {
    let dim = rad.primes.len() + 3;
    let mut vs = vec![
        unit_vector(dim, 0),
        unit_vector(dim, 1),
        unit_vector(dim, dim - 1),
    ];
    for &(p, _) in &rad.factorization {
        if let Some(v) = rational_prime_vector(rad, p) {
            vs.push(v);
        }
    }
    linalg::span_basis(5, dim, &vs)
}

/// S-units whose exponents are constant on each set of non-σ²-fixed primes above one rational prime.
fn sigma2_space(rad: &Radicand) -> Vec<Vector> {
    let dim = rad.primes.len() + 3;
    let mut vs = vec![
        unit_vector(dim, 0),
        unit_vector(dim, 1),
        unit_vector(dim, dim - 1),
    ];
    let mut orbits: Vec<(u64, Vec<usize>)> = Vec::new();
    for (j, q) in rad.primes.iter().enumerate() {
        if is_sigma2_fixed(&q.prime.element) {
            vs.push(unit_vector(dim, 2 + j));
        } else {
            match orbits.iter_mut().find(|(p, _)| *p == q.prime.p) {
                Some((_, idx)) => idx.push(2 + j),
                None => orbits.push((q.prime.p, vec![2 + j])),
            }
        }
    }
    for (_, idx) in orbits {
        let mut v = vec![0; dim];
        for i in idx {
            v[i] = 1;
        }
        vs.push(v);
    }
    linalg::span_basis(5, dim, &vs)
}

/// Extend `chosen` (modulo `base`) by vectors from `candidates`.
fn extend_mod(dim: usize, base: &[Vector], chosen: &mut Vec<Vector>, candidates: &[Vector]) {
    for c in candidates {
        let mut span = base.to_vec();
        span.extend(chosen.iter().cloned());
        if !linalg::contains(5, dim, &span, c) {
            chosen.push(c.clone());
        }
    }
}

/// (w, r) for the genus generators of `rad`, with an adapted generator basis.
pub fn generator_shape_counts(rad: &Radicand, gens: &[SUnitVector]) -> ShapeCounts {
    let dim = rad.primes.len() + 3;
    let base = base_space(rad);
    let g: Vec<Vector> = gens.iter().map(|v| to_u64(v)).collect();
    let gm = linalg::sum(5, dim, &g, &base);
    let q = linalg::sum(5, dim, &rational_space(rad), &base);
    let s = linalg::sum(5, dim, &sigma2_space(rad), &base);
    let gq = linalg::intersect(5, dim, &gm, &q);
    let gs = linalg::intersect(5, dim, &gm, &s);

    let mut chosen = Vec::new();
    extend_mod(dim, &base, &mut chosen, &gq);
    let w = chosen.len();
    extend_mod(dim, &base, &mut chosen, &gs);
    let r = chosen.len();
    extend_mod(dim, &base, &mut chosen, &gm);

    // Each chosen vector is a generator up to units and powers of n; swap it for an element of
    // the original generator span with the same class.
    let gen_span = linalg::span_basis(5, dim, &g);
    let adapted = chosen
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let rep = representative(dim, &gen_span, &base, c).unwrap_or_else(|| c.clone());
            let exponents: SUnitVector = rep.iter().map(|&x| x as u8).collect();
            ShapedGenerator {
                value: realize(rad, &exponents),
                exponents,
                shape: if i < w {
                    GeneratorShape::Rational
                } else if i < r {
                    GeneratorShape::Sigma2Fixed
                } else {
                    GeneratorShape::Other
                },
            }
        })
        .collect();
    ShapeCounts { w, r, adapted }
}

/// An element of span(gens) congruent to c modulo `base`.
fn representative(dim: usize, gens: &[Vector], base: &[Vector], c: &[u64]) -> Option<Vector> {
    // Solve Σ a_i g_i − Σ b_j base_j = c.
    let cols: Vec<&Vector> = gens.iter().chain(base.iter()).collect();
    let k = cols.len();
    let mut rows = vec![vec![0i64; k + 1]; dim];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..dim {
            rows[i][j] = col[i] as i64;
        }
    }
    for i in 0..dim {
        rows[i][k] = c[i] as i64;
    }
    let m = linalg::Matrix::from_rows(5, k + 1, rows);
    let ns = m.nullspace();
    let sol = ns.iter().find(|v| v[k] != 0)?;
    let scale = (5 - 1) * inv5(sol[k]) % 5;
    let mut out = vec![0u64; dim];
    for (i, gv) in gens.iter().enumerate() {
        let a = sol[i] * scale % 5;
        for (o, x) in out.iter_mut().zip(gv) {
            *o = (*o + a * x) % 5;
        }
    }
    Some(out)
}

fn inv5(a: u64) -> u64 {
    [0, 1, 3, 2, 4][(a % 5) as usize]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum S1Source {
    Strong,
    ObservedRank,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentReport {
    pub n: u64,
    pub t: usize,
    pub s1: usize,
    pub s1_source: S1Source,
    pub w: usize,
    pub r: usize,
    /// Every prime divisor of n is ±2 or −1 mod 5.
    pub plus_part_vanishes: bool,
    /// Upper bound for rank (S_K/λS_K)⁺.
    pub plus_part_bound: usize,
    pub sl_upper: usize,
    /// Lower bound with s₂ = t − s₁ (the pessimistic end).
    pub sl_lower: usize,
    /// Lower bound with s₂ = 0, when the plus part vanishes.
    pub sl_lower_if_s2_zero: Option<usize>,
    pub t_equals_s1: bool,
    pub cyclic_family: Option<CyclicFamily>,
    pub generators: Vec<ShapedGenerator>,
}

impl DescentReport {
    pub fn verdict(&self) -> Option<&'static str> {
        if self.cyclic_family.is_some() {
            Some("trivial-or-cyclic")
        } else {
            None
        }
    }

    pub fn contains(&self, sl_rank: usize) -> bool {
        self.sl_lower <= sl_rank && sl_rank <= self.sl_upper
    }
}

/// The smallest s₁ in the admissible range compatible with an observed rank of S_K.
pub fn s1_from_observed_rank(report: &RankReport, sk_rank: usize) -> Option<usize> {
    let t = report.t;
    let (lo, hi) = if report.assume_strong {
        (report.s1_strong, report.s1_strong)
    } else {
        report.s1_range_nonstrong
    };
    (lo..=hi).find(|&s1| 2 * t - s1 <= sk_rank && sk_rank <= 4 * t - 3 * s1)
}

pub fn descent_report_for(
    rad: &Radicand,
    assume_strong: bool,
    observed_sk_rank: Option<usize>,
) -> Result<DescentReport, RankError> {
    let rank = rank_report_for(rad, assume_strong)?;
    let t = rank.t;
    let (s1, s1_source) = match observed_sk_rank.and_then(|k| s1_from_observed_rank(&rank, k)) {
        Some(s) => (s, S1Source::ObservedRank),
        None => (rank.s1_strong, S1Source::Strong),
    };
    let shapes = generator_shape_counts(rad, &rank.generators.exponent_vectors());
    let plus_part_vanishes = rad
        .factorization
        .iter()
        .all(|&(p, _)| matches!(p % 5, 2..=4));
    let plus_part_bound = if plus_part_vanishes { 0 } else { t - shapes.r };
    let t_equals_s1 = t == s1;
    let (sl_lower, sl_upper, sl_lower_if_s2_zero) = if t_equals_s1 {
        (0, plus_part_bound, None)
    } else if plus_part_vanishes {
        (0, t - s1, Some(t - s1))
    } else {
        (0, (plus_part_bound + (t - s1)).min(2 * t - s1), None)
    };
    Ok(DescentReport {
        n: rad.n,
        t,
        s1,
        s1_source,
        w: shapes.w,
        r: shapes.r,
        plus_part_vanishes,
        plus_part_bound,
        sl_upper,
        sl_lower,
        sl_lower_if_s2_zero,
        t_equals_s1,
        cyclic_family: classify_trivial_or_cyclic(rad.n),
        generators: shapes.adapted,
    })
}

pub fn descent_report(
    n: u64,
    assume_strong: bool,
    observed_sk_rank: Option<usize>,
) -> Result<DescentReport, RankError> {
    descent_report_for(&factor_radicand(n)?, assume_strong, observed_sk_rank)
}

/// The ten families of N for which the 5-class group of Q(N^{1/5}) is trivial or cyclic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CyclicFamily {
    /// p^a, p ≡ ±2 mod 5.
    PrimePowerPlusMinusTwo,
    /// q₁^a q₂^b, q_i ≡ ±2 mod 5 but not ±7 mod 25, N ≡ ±1, ±7 mod 25.
    TwoQUnramified,
    /// p^a, p ≡ −1 mod 5.
    PrimePowerMinusOne,
    /// p₁^a p₂^b, p_i ≡ ±7 mod 25, N ≡ ±1, ±7 mod 25.
    TwoPUnramified,
    /// p^a q^b, p ≡ ±7 mod 25, q ≡ ±2 mod 5 not ±7 mod 25, N ≢ ±1, ±7 mod 25.
    PQRamified,
    /// q₁^a q₂^b as above, N ≢ ±1, ±7 mod 25.
    TwoQRamified,
    /// p₁^a p₂^b q^c, N ≡ ±1, ±7 mod 25.
    TwoPOneQUnramified,
    /// p^a q₁^b q₂^c, N ≡ ±1, ±7 mod 25.
    OnePTwoQUnramified,
    /// q₁^a q₂^b q₃^c, N ≡ ±1, ±7 mod 25.
    ThreeQUnramified,
    /// p^a q^b, p ≡ −1 mod 5, q ≡ ±7 mod 25.
    MinusOneTimesSeven,
}

impl CyclicFamily {
    pub fn number(self) -> u8 {
        use CyclicFamily::*;
        match self {
            PrimePowerPlusMinusTwo => 1,
            TwoQUnramified => 2,
            PrimePowerMinusOne => 3,
            TwoPUnramified => 4,
            PQRamified => 5,
            TwoQRamified => 6,
            TwoPOneQUnramified => 7,
            OnePTwoQUnramified => 8,
            ThreeQUnramified => 9,
            MinusOneTimesSeven => 10,
        }
    }
}

pub fn classify_trivial_or_cyclic(n: u64) -> Option<CyclicFamily> {
    use CyclicFamily::*;
    let fac = factor_u64(n).ok()?;
    if n < 2 || fac.iter().any(|&(_, e)| e >= 5) {
        return None;
    }
    let seven = |p: u64| matches!(p % 25, 7 | 18);
    let two = |p: u64| matches!(p % 5, 2 | 3);
    let q_type = |p: u64| two(p) && !seven(p);
    let minus_one = |p: u64| p % 5 == 4;
    let unramified = matches!(n % 25, 1 | 24 | 7 | 18);
    let ps: Vec<u64> = fac.iter().map(|&(p, _)| p).collect();
    let count = |f: &dyn Fn(u64) -> bool| ps.iter().filter(|&&p| f(p)).count();
    let (np, nq, nm) = (count(&seven), count(&q_type), count(&minus_one));
    let k = ps.len();
    match (k, np, nq, nm, unramified) {
        (1, _, _, _, _) if two(ps[0]) => Some(PrimePowerPlusMinusTwo),
        (1, 0, 0, 1, _) => Some(PrimePowerMinusOne),
        (2, 0, 2, 0, true) => Some(TwoQUnramified),
        (2, 2, 0, 0, true) => Some(TwoPUnramified),
        (2, 1, 1, 0, false) => Some(PQRamified),
        (2, 0, 2, 0, false) => Some(TwoQRamified),
        (3, 2, 1, 0, true) => Some(TwoPOneQUnramified),
        (3, 1, 2, 0, true) => Some(OnePTwoQUnramified),
        (3, 0, 3, 0, true) => Some(ThreeQUnramified),
        (2, 1, 0, 1, _) => Some(MinusOneTimesSeven),
        _ => None,
    }
}

/// The σ²-fixedness test against the explicit shape a ζ² + a ζ³ + b.
pub fn has_real_shape(pi: &FPrime) -> bool {
    let c = pi.element.coeffs();
    c[1] == 0.into() && c[2] == c[3]
}
