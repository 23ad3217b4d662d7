//! How rational primes split in Z[ζ₅], explicit prime elements, and radicand factorization.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic_ring::{identify_unit, CycInt, UnitClass};
use crate::residue_symbols::{is_prime_u64, residue_fields, ResidueField, SymbolError};

/// Largest box half-width tried when searching for a prime of norm p.
pub const MAX_SEARCH_BOX: i64 = 40;
const TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("5 is ramified; use lambda")]
    Ramified,
    #[error("no element of norm {p} in the box of half-width {bound}")]
    SearchExhausted { p: u64, bound: i64 },
    #[error("primes above {0} do not match residue fields one-to-one")]
    FieldMatch(u64),
    #[error("radicand must be at least 2, got {0}")]
    TooSmall(u64),
    #[error("radicand {n} is divisible by {p}^5")]
    NotFifthPowerFree { n: u64, p: u64 },
    #[error("could not factor {0} by trial division")]
    Unfactorable(u64),
    #[error("unit part of {0} is not of the form ±ζ^a(1+ζ)^b")]
    UnitRecovery(u64),
    #[error("residue field: {0}")]
    Field(String),
}

impl From<SymbolError> for PrimeError {
    fn from(e: SymbolError) -> Self {
        PrimeError::Field(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplittingType {
    RamifiedLambda,
    Inert,
    SplitTwo,
    SplitFour,
}

impl SplittingType {
    pub fn prime_count(self) -> usize {
        match self {
            SplittingType::RamifiedLambda | SplittingType::Inert => 1,
            SplittingType::SplitTwo => 2,
            SplittingType::SplitFour => 4,
        }
    }
}

pub fn splitting_type(p: u64) -> SplittingType {
    match p % 5 {
        0 => SplittingType::RamifiedLambda,
        1 => SplittingType::SplitFour,
        4 => SplittingType::SplitTwo,
        _ => SplittingType::Inert,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FPrime {
    pub element: CycInt,
    pub p: u64,
    pub rf: ResidueField,
    pub normalized: bool,
}

fn is_rational_mod5(y: &CycInt) -> bool {
    let five = BigInt::from(5);
    y.coeffs()[1..].iter().all(|c| c.mod_floor(&five).is_zero())
}

fn memo() -> &'static Mutex<HashMap<u64, Vec<FPrime>>> {
    static MEMO: OnceLock<Mutex<HashMap<u64, Vec<FPrime>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The primes above p ≠ 5. Split-four primes are ordered by the root index of their
/// residue field; the two split-two primes put the larger constant term first.
pub fn primes_above(p: u64) -> Result<Vec<FPrime>, PrimeError> {
    if let Some(v) = memo().lock().expect("memo poisoned").get(&p) {
        return Ok(v.clone());
    }
    let v = compute_primes_above(p)?;
    memo().lock().expect("memo poisoned").insert(p, v.clone());
    Ok(v)
}

fn compute_primes_above(p: u64) -> Result<Vec<FPrime>, PrimeError> {
    if p == 5 {
        return Err(PrimeError::Ramified);
    }
    if !is_prime_u64(p) {
        return Err(PrimeError::NotPrime(p));
    }
    let fields = residue_fields(p)?;
    let elements = match splitting_type(p) {
        SplittingType::Inert => vec![CycInt::from_int(p)],
        SplittingType::SplitTwo => split_two_elements(p)?,
        SplittingType::SplitFour => split_four_elements(p, &fields[0])?,
        SplittingType::RamifiedLambda => unreachable!(),
    };
    let mut out = Vec::with_capacity(elements.len());
    for element in elements {
        let mut hits = fields.iter().filter(|rf| rf.is_zero(&rf.reduce(&element)));
        let rf = hits.next().ok_or(PrimeError::FieldMatch(p))?;
        if hits.next().is_some() {
            return Err(PrimeError::FieldMatch(p));
        }
        out.push(FPrime {
            normalized: is_rational_mod5(&element),
            element,
            p,
            rf: rf.clone(),
        });
    }
    if splitting_type(p) == SplittingType::SplitFour {
        out.sort_by_key(|q| q.rf.root_index);
    }
    let mut idx: Vec<usize> = out.iter().map(|q| q.rf.root_index).collect();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != fields.len() {
        return Err(PrimeError::FieldMatch(p));
    }
    Ok(out)
}

/// p = a² + ab − b² with the least a ≥ 1; the two primes are aζ² + aζ³ + b and aζ² + aζ³ + (a − b).
fn split_two_elements(p: u64) -> Result<Vec<CycInt>, PrimeError> {
    let p = p as i64;
    let bound = ((p as f64).sqrt().ceil() as i64) + 1;
    for a in 1..=bound {
        for b in -bound..=bound {
            if a * a + a * b - b * b == p {
                let c = a - b;
                let hi = b.max(c);
                let lo = b.min(c);
                let pi1 = CycInt::from_i64s([hi, 0, a, a]);
                let pi2 = CycInt::from_i64s([lo, 0, a, a]);
                debug_assert_eq!(&pi1 * &pi2, CycInt::from_int(p));
                return Ok(vec![pi1, pi2]);
            }
        }
    }
    Err(PrimeError::SearchExhausted { p: p as u64, bound })
}

/// Box search for one element of norm p in the prime belonging to `rf`, then its Galois conjugates.
fn split_four_elements(p: u64, rf: &ResidueField) -> Result<Vec<CycInt>, PrimeError> {
    let r = rf.zeta_image[0] as i128;
    let pi = p as i128;
    let target = BigInt::from(p);
    for bound in 1..=MAX_SEARCH_BOX {
        for c1 in -bound..=bound {
            for c2 in -bound..=bound {
                for c3 in -bound..=bound {
                    let (c1w, c2w, c3w) = (c1 as i128, c2 as i128, c3 as i128);
                    let s = (c1w * r + c2w * (r * r % pi) + c3w * (r * r % pi * r % pi)) % pi;
                    let mut c0 = (-s).rem_euclid(pi);
                    if c0 > pi / 2 {
                        c0 -= pi;
                    }
                    if c0.abs() > bound as i128 {
                        continue;
                    }
                    let y = CycInt::from_i64s([c0 as i64, c1, c2, c3]);
                    if y.norm() == target {
                        return (1..5)
                            .map(|k| y.conj(k).map_err(|e| PrimeError::Field(e.to_string())))
                            .collect();
                    }
                }
            }
        }
    }
    Err(PrimeError::SearchExhausted {
        p,
        bound: MAX_SEARCH_BOX,
    })
}

/// Replace π by the first associate ±ζ^a(1+ζ)^b·π (canonical unit order) that is
/// congruent to a rational integer mod 5, if one exists.
pub fn normalize(pi: &FPrime) -> FPrime {
    if pi.normalized {
        return pi.clone();
    }
    for u in UnitClass::all() {
        let cand = &u.to_cycint() * &pi.element;
        if is_rational_mod5(&cand) {
            return FPrime {
                element: cand,
                p: pi.p,
                rf: pi.rf.clone(),
                normalized: true,
            };
        }
    }
    pi.clone()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicandPrime {
    pub prime: FPrime,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Radicand {
    pub n: u64,
    /// Rational factorization, ascending.
    pub factorization: Vec<(u64, u32)>,
    pub v5: u32,
    /// Primes above n other than λ, grouped by rational prime in ascending order.
    pub primes: Vec<RadicandPrime>,
    /// Exact λ-exponent of n, 4·v₅(n).
    pub lambda_exponent: u32,
    /// λ-exponent modulo fifth powers.
    pub e_lambda: u32,
    /// n = ±ζ^a(1+ζ)^b · λ^{lambda_exponent} · ∏ π_j^{e_j}, stored as (sign, a, b).
    pub unit: (i8, u8, i64),
    pub g: usize,
    pub lambda_ramifies: bool,
    pub d: usize,
}

impl Radicand {
    pub fn unit_element(&self) -> CycInt {
        crate::cyclotomic_ring::unit_element(self.unit.0, self.unit.1 as i64, self.unit.2)
    }

    pub fn reconstruct(&self) -> CycInt {
        let mut y = &self.unit_element() * &CycInt::lambda().pow(self.lambda_exponent);
        for q in &self.primes {
            y = &y * &q.prime.element.pow(q.exponent);
        }
        y
    }

    pub fn all_normalized(&self) -> bool {
        self.primes.iter().all(|q| q.prime.normalized)
    }

    /// n with the 5-part removed.
    pub fn prime_to_five_part(&self) -> u64 {
        self.n / 5u64.pow(self.v5)
    }
}

/// Trial division up to 10⁶; a cofactor left over must be prime.
pub fn factor_u64(mut n: u64) -> Result<Vec<(u64, u32)>, PrimeError> {
    let orig = n;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if !is_prime_u64(n) {
            return Err(PrimeError::Unfactorable(orig));
        }
        out.push((n, 1));
    }
    Ok(out)
}

pub fn lambda_ramifies(n: u64) -> bool {
    n.is_multiple_of(5) || ![1, 7, 18, 24].contains(&(n % 25))
}

pub fn factor_radicand(n: u64) -> Result<Radicand, PrimeError> {
    if n < 2 {
        return Err(PrimeError::TooSmall(n));
    }
    let factorization = factor_u64(n)?;
    if let Some(&(p, _)) = factorization.iter().find(|&&(_, e)| e >= 5) {
        return Err(PrimeError::NotFifthPowerFree { n, p });
    }
    let mut v5 = 0;
    let mut primes = Vec::new();
    for &(p, e) in &factorization {
        if p == 5 {
            v5 = e;
            continue;
        }
        for q in primes_above(p)? {
            primes.push(RadicandPrime {
                prime: normalize(&q),
                exponent: e,
            });
        }
    }
    let lambda_exponent = 4 * v5;
    let mut u = CycInt::from_int(n);
    for q in &primes {
        for _ in 0..q.exponent {
            u = u
                .div_exact(&q.prime.element)
                .ok_or(PrimeError::UnitRecovery(n))?;
        }
    }
    for _ in 0..lambda_exponent {
        u = u
            .div_exact(&CycInt::lambda())
            .ok_or(PrimeError::UnitRecovery(n))?;
    }
    let unit = identify_unit(&u).ok_or(PrimeError::UnitRecovery(n))?;
    let g = primes.len();
    let lambda_ramifies = lambda_ramifies(n);
    Ok(Radicand {
        n,
        factorization,
        v5,
        primes,
        lambda_exponent,
        e_lambda: lambda_exponent % 5,
        unit,
        g,
        lambda_ramifies,
        d: g + usize::from(lambda_ramifies),
    })
}

/// True when a/b is a unit of Z[ζ₅].
pub fn are_associate(a: &CycInt, b: &CycInt) -> bool {
    match a.div_exact(b) {
        Some(q) => q.norm().to_i64().map(|v| v.abs() == 1).unwrap_or(false),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_types() {
        assert_eq!(splitting_type(5), SplittingType::RamifiedLambda);
        assert_eq!(splitting_type(19), SplittingType::SplitTwo);
        assert_eq!(splitting_type(11), SplittingType::SplitFour);
        assert_eq!(splitting_type(7), SplittingType::Inert);
        assert_eq!(splitting_type(2), SplittingType::Inert);
    }

    #[test]
    fn primes_above_nineteen() {
        let ps = primes_above(19).unwrap();
        let els: Vec<CycInt> = ps.iter().map(|q| q.element.clone()).collect();
        assert_eq!(els[0], CycInt::from_i64s([3, 0, 4, 4]));
        assert_eq!(els[1], CycInt::from_i64s([1, 0, 4, 4]));
        assert_eq!(&els[0] * &els[1], CycInt::from_int(19));
        // the published second prime −1−4ζ²−4ζ³ is an associate of ours
        assert!(els
            .iter()
            .any(|e| are_associate(e, &CycInt::from_i64s([-1, 0, -4, -4]))));
    }

    #[test]
    fn primes_above_eleven_match_published_list() {
        let ps = primes_above(11).unwrap();
        assert_eq!(ps.len(), 4);
        let published = [[2, 1, 0, 0], [1, 1, -1, 0], [1, -1, 0, 1], [1, 1, 2, 0]];
        for q in published {
            let q = CycInt::from_i64s(q);
            assert_eq!(
                ps.iter().filter(|p| are_associate(&p.element, &q)).count(),
                1,
                "{q}"
            );
        }
    }

    #[test]
    fn inert_prime_is_itself() {
        let ps = primes_above(7).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].element, CycInt::from_int(7));
        assert!(ps[0].normalized);
        assert!(primes_above(5).is_err());
        assert!(primes_above(21).is_err());
    }

    #[test]
    fn norms_and_non_associate_below_2000() {
        for p in (2..2000u64).filter(|&p| p != 5 && is_prime_u64(p)) {
            let ps = primes_above(p).unwrap();
            let st = splitting_type(p);
            assert_eq!(ps.len(), st.prime_count());
            let f = 4 / ps.len() as u32;
            let mut prod = BigInt::from(1);
            for q in &ps {
                assert_eq!(q.element.norm(), BigInt::from(p).pow(f), "p = {p}");
                assert!(q.rf.is_zero(&q.rf.reduce(&q.element)));
                assert_eq!(q.rf.f as u32, f);
                prod *= q.element.norm();
            }
            assert_eq!(prod, BigInt::from(p).pow(4));
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    assert!(!are_associate(&ps[i].element, &ps[j].element));
                }
            }
            if st == SplittingType::SplitTwo {
                for q in &ps {
                    let c = q.element.coeffs();
                    assert_eq!(c[1], BigInt::from(0));
                    assert_eq!(c[2], c[3]);
                    assert!(are_associate(&q.element.conj(4).unwrap(), &q.element));
                    assert!(!are_associate(&q.element.conj(2).unwrap(), &q.element));
                }
            }
        }
    }

    #[test]
    fn normalization_outcomes() {
        let seven = &primes_above(7).unwrap()[0];
        assert_eq!(normalize(seven), *seven);
        // no associate of a prime above 11 is rational mod 5
        for q in primes_above(11).unwrap() {
            assert!(!normalize(&q).normalized);
        }
        let n19: Vec<FPrime> = primes_above(19).unwrap().iter().map(normalize).collect();
        assert!(n19.iter().all(|q| q.normalized));
        assert_eq!(n19[0].element, CycInt::from_i64s([-1, 0, 5, 5]));
        assert_eq!(n19[1].element, CycInt::from_i64s([7, 0, -10, -10]));
        for q in primes_above(31).unwrap() {
            assert!(!normalize(&q).normalized);
        }
        for p in [31u64, 41, 61, 29, 59] {
            for q in primes_above(p).unwrap() {
                let nq = normalize(&q);
                assert!(are_associate(&nq.element, &q.element));
                if nq.normalized {
                    assert!(is_rational_mod5(&nq.element));
                }
            }
        }
    }

    #[test]
    fn radicand_examples() {
        let r42 = factor_radicand(42).unwrap();
        assert_eq!(r42.g, 3);
        assert!(r42.lambda_ramifies);
        assert_eq!(r42.d, 4);
        let r11 = factor_radicand(11).unwrap();
        assert_eq!(r11.g, 4);
        assert!(r11.lambda_ramifies);
        let r7 = factor_radicand(7).unwrap();
        assert_eq!(r7.g, 1);
        assert!(!r7.lambda_ramifies);
        assert_eq!(r7.d, 1);
        let r50 = factor_radicand(50).unwrap();
        assert_eq!(r50.lambda_exponent, 8);
        assert_eq!(r50.e_lambda, 3);
        assert_eq!(r50.g, 1);
        assert_eq!(r50.d, 2);
    }

    #[test]
    fn radicand_errors() {
        assert_eq!(factor_radicand(1), Err(PrimeError::TooSmall(1)));
        assert_eq!(
            factor_radicand(96),
            Err(PrimeError::NotFifthPowerFree { n: 96, p: 2 })
        );
    }

    #[test]
    fn reconstruction_up_to_1000() {
        for n in 2..1000u64 {
            let Ok(r) = factor_radicand(n) else { continue };
            assert_eq!(r.reconstruct(), CycInt::from_int(n), "n = {n}");
            for q in &r.primes {
                let e = r.factorization.iter().find(|f| f.0 == q.prime.p).unwrap().1;
                assert_eq!(q.exponent, e);
            }
        }
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_u64(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1_000_003).unwrap(), vec![(1_000_003, 1)]);
        assert_eq!(
            factor_u64(2 * 1_000_003).unwrap(),
            vec![(2, 1), (1_000_003, 1)]
        );
    }

    #[test]
    fn memo_is_shared_across_threads() {
        let hs: Vec<_> = (0..4)
            .map(|_| std::thread::spawn(|| primes_above(131).unwrap()))
            .collect();
        let rs: Vec<_> = hs.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(rs.windows(2).all(|w| w[0] == w[1]));
    }
}
