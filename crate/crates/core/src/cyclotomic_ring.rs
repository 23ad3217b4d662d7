//! Exact arithmetic in Z[ζ], ζ a primitive fifth root of unity.
//!
//! Elements are stored in the basis {1, ζ, ζ², ζ³}; ζ⁴ is always rewritten
//! as −1 − ζ − ζ² − ζ³ so equality is coordinate equality.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("element is divisible by lambda; a lambda-adic unit is required")]
    NotLambdaUnit,
    #[error("conjugation index {0} is not in 1..=4")]
    BadConjugate(u32),
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycInt {
    c: [BigInt; 4],
}

impl CycInt {
    pub fn new<T: Into<BigInt>>(c0: T, c1: T, c2: T, c3: T) -> Self {
        CycInt {
            c: [c0.into(), c1.into(), c2.into(), c3.into()],
        }
    }

    pub fn from_coeffs(c: [BigInt; 4]) -> Self {
        CycInt { c }
    }

    pub fn from_i64s(c: [i64; 4]) -> Self {
        CycInt::new(c[0], c[1], c[2], c[3])
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        CycInt::new(n.into(), BigInt::zero(), BigInt::zero(), BigInt::zero())
    }

    pub fn zero() -> Self {
        CycInt::from_i64s([0, 0, 0, 0])
    }

    pub fn one() -> Self {
        CycInt::from_i64s([1, 0, 0, 0])
    }

    pub fn zeta() -> Self {
        CycInt::from_i64s([0, 1, 0, 0])
    }

    /// λ = 1 − ζ.
    pub fn lambda() -> Self {
        CycInt::from_i64s([1, -1, 0, 0])
    }

    pub fn one_plus_zeta() -> Self {
        CycInt::from_i64s([1, 1, 0, 0])
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if any.
    pub fn as_rational(&self) -> Option<&BigInt> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            c: [
                &self.c[0] * k,
                &self.c[1] * k,
                &self.c[2] * k,
                &self.c[3] * k,
            ],
        }
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under the automorphism ζ ↦ ζᵏ.
    pub fn conj(&self, k: u32) -> Result<CycInt, RingError> {
        if !(1..=4).contains(&k) {
            return Err(RingError::BadConjugate(k));
        }
        let mut s: [BigInt; 5] = Default::default();
        for (i, ci) in self.c.iter().enumerate() {
            s[(i * k as usize) % 5] += ci;
        }
        Ok(fold5(s))
    }

    fn conj_unchecked(&self, k: u32) -> CycInt {
        self.conj(k).expect("conjugation index in range")
    }

    /// Product of the three nontrivial conjugates, so that `self * cofactor = norm`.
    pub fn norm_cofactor(&self) -> CycInt {
        &(&self.conj_unchecked(2) * &self.conj_unchecked(3)) * &self.conj_unchecked(4)
    }

    pub fn norm(&self) -> BigInt {
        let n = self * &self.norm_cofactor();
        debug_assert!(n.c[1..].iter().all(Zero::is_zero));
        n.c[0].clone()
    }

    /// `self / d` when the quotient lies in Z[ζ].
    pub fn div_exact(&self, d: &CycInt) -> Option<CycInt> {
        if d.is_zero() {
            return None;
        }
        let cof = d.norm_cofactor();
        let nd = (d * &cof).c[0].clone();
        let t = self * &cof;
        let mut out: [BigInt; 4] = Default::default();
        for (o, x) in out.iter_mut().zip(t.c.iter()) {
            let (q, r) = x.div_rem(&nd);
            if !r.is_zero() {
                return None;
            }
            *o = q;
        }
        Some(CycInt { c: out })
    }

    /// Largest k with π^k | self, or None for zero.
    pub fn valuation(&self, pi: &CycInt) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut y = self.clone();
        while let Some(q) = y.div_exact(pi) {
            y = q;
            v += 1;
        }
        Some(v)
    }

    /// Strip every factor of π, returning (valuation, cofactor).
    pub fn split_off(&self, pi: &CycInt) -> (u32, CycInt) {
        let mut v = 0;
        let mut y = self.clone();
        if y.is_zero() {
            return (0, y);
        }
        while let Some(q) = y.div_exact(pi) {
            y = q;
            v += 1;
        }
        (v, y)
    }

    /// v_λ(self); None stands for +∞ at zero.
    pub fn lambda_valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let cof = lambda_cofactor();
        let five = BigInt::from(5);
        let mut y = self.clone();
        let mut v = 0;
        loop {
            // y ∈ λZ[ζ] iff the sum of coordinates is divisible by 5.
            let s: BigInt = y.c.iter().sum();
            if !s.is_multiple_of(&five) {
                return Some(v);
            }
            let t = &y * cof;
            y = CycInt {
                c: [
                    &t.c[0] / &five,
                    &t.c[1] / &five,
                    &t.c[2] / &five,
                    &t.c[3] / &five,
                ],
            };
            v += 1;
        }
    }

    /// Coordinates reduced into [0, m).
    pub fn reduce_coeffs(&self, m: &BigInt) -> CycInt {
        CycInt {
            c: [
                self.c[0].mod_floor(m),
                self.c[1].mod_floor(m),
                self.c[2].mod_floor(m),
                self.c[3].mod_floor(m),
            ],
        }
    }

    /// Evaluate at ζ = e^{2πi/5} as an f64 pair (re, im).
    pub fn embed(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, ci) in self.c.iter().enumerate() {
            let a = ci.to_f64().unwrap_or(f64::NAN);
            let th = 2.0 * std::f64::consts::PI * i as f64 / 5.0;
            re += a * th.cos();
            im += a * th.sin();
        }
        (re, im)
    }
}

/// Fold a polynomial in ζ of degree < 5 into the canonical basis.
fn fold5(s: [BigInt; 5]) -> CycInt {
    let [a0, a1, a2, a3, a4] = s;
    CycInt {
        c: [a0 - &a4, a1 - &a4, a2 - &a4, a3 - &a4],
    }
}

fn lambda_cofactor() -> &'static CycInt {
    static COF: OnceLock<CycInt> = OnceLock::new();
    COF.get_or_init(|| CycInt::lambda().norm_cofactor())
}

impl<'a> Mul<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &'a CycInt) -> CycInt {
        let mut s: [BigInt; 7] = Default::default();
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                s[i + j] += &self.c[i] * &rhs.c[j];
            }
        }
        let [a0, a1, a2, a3, a4, a5, a6] = s;
        fold5([a0 + a5, a1 + a6, a2, a3, a4])
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}

impl<'a> Add<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn add(self, rhs: &'a CycInt) -> CycInt {
        CycInt {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl<'a> Sub<&'a CycInt> for &'a CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &'a CycInt) -> CycInt {
        CycInt {
            c: [
                &self.c[0] - &rhs.c[0],
                &self.c[1] - &rhs.c[1],
                &self.c[2] - &rhs.c[2],
                &self.c[3] - &rhs.c[3],
            ],
        }
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        &self - &rhs
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CycInt({}, {}, {}, {})",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let mag = ci.abs();
            let sign = if ci.is_negative() { "-" } else { "+" };
            if first {
                if ci.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            match (i, show_mag) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "{}z", mag)?,
                (1, false) => write!(f, "z")?,
                (_, true) => write!(f, "{}z^{}", mag, i)?,
                (_, false) => write!(f, "z^{}", i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The unit ±ζ^a(1+ζ)^b with a, b read in F₅.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UnitClass {
    /// false for +1, true for −1; sorts + before −.
    pub negative: bool,
    pub a: u8,
    pub b: u8,
}

impl UnitClass {
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn to_cycint(&self) -> CycInt {
        unit_element(self.sign(), self.a as i64, self.b as i64)
    }

    /// All 50 classes in canonical (sign, a, b) order.
    pub fn all() -> Vec<UnitClass> {
        let mut v = Vec::with_capacity(50);
        for negative in [false, true] {
            for a in 0..5 {
                for b in 0..5 {
                    v.push(UnitClass { negative, a, b });
                }
            }
        }
        v
    }
}

/// ±ζ^a(1+ζ)^b for arbitrary integers a, b.
pub fn unit_element(sign: i8, a: i64, b: i64) -> CycInt {
    let z = CycInt::zeta().pow(a.rem_euclid(5) as u32);
    let base = if b >= 0 {
        CycInt::one_plus_zeta()
    } else {
        one_plus_zeta_inverse()
    };
    let u = &z * &base.pow(b.unsigned_abs() as u32);
    if sign < 0 {
        -u
    } else {
        u
    }
}

fn one_plus_zeta_inverse() -> CycInt {
    CycInt::one()
        .div_exact(&CycInt::one_plus_zeta())
        .expect("1+z is a unit")
}

/// Write a unit as ±ζ^a(1+ζ)^b with b ∈ Z. None if `u` is not of that form.
pub fn identify_unit(u: &CycInt) -> Option<(i8, u8, i64)> {
    let (re, im) = u.embed();
    let (ore, oim) = CycInt::one_plus_zeta().embed();
    let mag = (re * re + im * im).sqrt();
    let base = (ore * ore + oim * oim).sqrt();
    if !(mag.is_finite() && mag > 0.0) {
        return None;
    }
    let guess = (mag.ln() / base.ln()).round() as i64;
    for b in [guess, guess - 1, guess + 1] {
        let pb = unit_element(1, 0, b);
        for a in 0..5u8 {
            let cand = &CycInt::zeta().pow(a as u32) * &pb;
            if &cand == u {
                return Some((1, a, b));
            }
            if -&cand == *u {
                return Some((-1, a, b));
            }
        }
    }
    None
}

/// An element of Z[ζ]/λ⁵ named by its λ-adic digits d₀..d₄ ∈ {0..4}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lambda5Residue {
    pub digits: [u8; 5],
}

impl Lambda5Residue {
    pub fn is_unit(&self) -> bool {
        self.digits[0] != 0
    }

    /// Σ dₖ λᵏ as an element of Z[ζ].
    pub fn lift(&self) -> CycInt {
        let lam = CycInt::lambda();
        let mut acc = CycInt::zero();
        let mut p = CycInt::one();
        for &d in &self.digits {
            acc = &acc + &p.scale(&BigInt::from(d));
            p = &p * &lam;
        }
        acc
    }
}

pub fn residue_mod_lambda5(y: &CycInt) -> Lambda5Residue {
    let m25 = BigInt::from(25);
    let five = BigInt::from(5);
    let cof = lambda_cofactor();
    let mut y = y.reduce_coeffs(&m25);
    let mut digits = [0u8; 5];
    for d in digits.iter_mut() {
        let s: BigInt = y.c.iter().sum();
        let d0 = s.mod_floor(&five);
        *d = d0.to_u8().expect("digit < 5");
        let shifted = &y - &CycInt::from_int(d0);
        let t = &shifted * cof;
        y = CycInt {
            c: [
                &t.c[0] / &five,
                &t.c[1] / &five,
                &t.c[2] / &five,
                &t.c[3] / &five,
            ],
        }
        .reduce_coeffs(&m25);
    }
    Lambda5Residue { digits }
}

struct Lambda5Tables {
    fifth_powers: HashSet<Lambda5Residue>,
    principal_log: HashMap<Lambda5Residue, [u8; 4]>,
}

fn tables() -> &'static Lambda5Tables {
    static T: OnceLock<Lambda5Tables> = OnceLock::new();
    T.get_or_init(build_tables)
}

fn build_tables() -> Lambda5Tables {
    let m25 = BigInt::from(25);
    let mut fifth_powers = HashSet::new();
    for u in all_unit_residues() {
        let x = u.lift();
        let x5 = x.pow(5).reduce_coeffs(&m25);
        fifth_powers.insert(residue_mod_lambda5(&x5));
    }
    let lam = CycInt::lambda();
    let gens: Vec<CycInt> = (1..=4).map(|i| &CycInt::one() + &lam.pow(i)).collect();
    let mut principal_log = HashMap::with_capacity(625);
    for code in 0..625u32 {
        let ex = [
            (code % 5) as u8,
            (code / 5 % 5) as u8,
            (code / 25 % 5) as u8,
            (code / 125) as u8,
        ];
        let mut acc = CycInt::one();
        for (g, &e) in gens.iter().zip(ex.iter()) {
            acc = (&acc * &g.pow(e as u32)).reduce_coeffs(&m25);
        }
        principal_log.insert(residue_mod_lambda5(&acc), ex);
    }
    assert_eq!(principal_log.len(), 625, "1+λ^i do not generate U1/U5");
    Lambda5Tables {
        fifth_powers,
        principal_log,
    }
}

/// All 2500 units of Z[ζ]/λ⁵, as digit labels.
pub fn all_unit_residues() -> impl Iterator<Item = Lambda5Residue> {
    (0..3125u32).filter_map(|code| {
        let mut digits = [0u8; 5];
        let mut c = code;
        for d in digits.iter_mut() {
            *d = (c % 5) as u8;
            c /= 5;
        }
        let r = Lambda5Residue { digits };
        r.is_unit().then_some(r)
    })
}

/// The fifth powers among the units of Z[ζ]/λ⁵.
pub fn fifth_power_residues() -> &'static HashSet<Lambda5Residue> {
    &tables().fifth_powers
}

pub fn is_fifth_power_unit_class(y: &CycInt) -> Result<bool, RingError> {
    let r = residue_mod_lambda5(y);
    if !r.is_unit() {
        return Err(RingError::NotLambdaUnit);
    }
    Ok(tables().fifth_powers.contains(&r))
}

/// Coordinates of a λ-unit in (Z[ζ]/λ⁵)* / (fifth powers) ≅ F₅⁴, on the basis 1+λⁱ.
pub fn unit_log(y: &CycInt) -> Result<[u8; 4], RingError> {
    let r = residue_mod_lambda5(y);
    if !r.is_unit() {
        return Err(RingError::NotLambdaUnit);
    }
    let d0 = r.digits[0] as u32;
    // ω(a) = a⁵ mod 25 is the fifth-power lift of a; scaling by ω(d0⁻¹) lands in U1.
    let inv = (1..5u32).find(|x| x * d0 % 5 == 1).expect("unit digit");
    let omega = BigInt::from(inv.pow(5) % 25);
    let y1 = y.scale(&omega).reduce_coeffs(&BigInt::from(25));
    let r1 = residue_mod_lambda5(&y1);
    Ok(*tables()
        .principal_log
        .get(&r1)
        .expect("every principal unit has a log"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: [i64; 4]) -> CycInt {
        CycInt::from_i64s(v)
    }

    #[test]
    fn zeta_has_order_five() {
        let z = CycInt::zeta();
        assert_eq!(&z * &z.pow(4), CycInt::one());
        for k in 1..5 {
            assert_ne!(z.pow(k), CycInt::one());
        }
        assert_eq!(z.pow(5), CycInt::one());
    }

    #[test]
    fn lambda_fourth_power_over_five_is_unit() {
        let l4 = CycInt::lambda().pow(4);
        assert_eq!(l4.norm(), BigInt::from(625));
        let u = CycInt::from_int(5).div_exact(&l4).unwrap();
        assert_eq!(u.norm().abs(), BigInt::one());
    }

    #[test]
    fn primes_above_eleven_multiply_to_unit_times_eleven() {
        let p = [
            c([2, 1, 0, 0]),
            c([1, 1, -1, 0]),
            c([1, -1, 0, 1]),
            c([1, 1, 2, 0]),
        ];
        let prod = p.iter().fold(CycInt::one(), |a, b| &a * b);
        let u = prod.div_exact(&CycInt::from_int(11)).unwrap();
        assert!(identify_unit(&u).is_some());
    }

    #[test]
    fn conj_examples() {
        assert_eq!(CycInt::zeta().conj(3).unwrap(), c([0, 0, 0, 1]));
        let y = c([7, 0, 3, 3]);
        assert_eq!(y.conj(4).unwrap(), y);
        let r = c([3, -2, 5, 1]);
        assert_eq!(r.conj(2).unwrap().conj(2).unwrap(), r.conj(4).unwrap());
        assert!(r.conj(0).is_err());
        assert!(r.conj(5).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(CycInt::lambda().norm(), BigInt::from(5));
        assert_eq!(c([3, 0, 4, 4]).norm(), BigInt::from(361));
        // resultant of x⁴+x³+x²+x+1 and x+2 is Φ₅(−2) = 11
        assert_eq!(c([2, 1, 0, 0]).norm(), BigInt::from(11));
    }

    #[test]
    fn lambda_valuation_examples() {
        assert_eq!(CycInt::from_int(5).lambda_valuation(), Some(4));
        assert_eq!(CycInt::from_int(25).lambda_valuation(), Some(8));
        assert_eq!(c([1, 0, -1, 0]).lambda_valuation(), Some(1));
        assert_eq!(CycInt::zero().lambda_valuation(), None);
        assert_eq!(CycInt::one().lambda_valuation(), Some(0));
    }

    #[test]
    fn one_minus_zeta_squared_is_lambda_times_one_plus_zeta() {
        let y = c([1, 0, -1, 0]);
        assert_eq!(
            y.div_exact(&CycInt::lambda()).unwrap(),
            CycInt::one_plus_zeta()
        );
    }

    #[test]
    fn residue_of_26_is_residue_of_1() {
        assert_eq!(
            residue_mod_lambda5(&CycInt::from_int(26)),
            residue_mod_lambda5(&CycInt::one())
        );
    }

    #[test]
    fn digit_labels_round_trip() {
        for code in 0..3125u32 {
            let mut digits = [0u8; 5];
            let mut cc = code;
            for d in digits.iter_mut() {
                *d = (cc % 5) as u8;
                cc /= 5;
            }
            let r = Lambda5Residue { digits };
            assert_eq!(residue_mod_lambda5(&r.lift()), r);
        }
    }

    #[test]
    fn fifth_powers_are_the_four_teichmuller_lifts() {
        let fp = fifth_power_residues();
        assert_eq!(fp.len(), 4);
        let want: HashSet<_> = [1, 7, 18, 24]
            .iter()
            .map(|&m| residue_mod_lambda5(&CycInt::from_int(m)))
            .collect();
        assert_eq!(*fp, want);
        assert_eq!(all_unit_residues().count(), 2500);
    }

    #[test]
    fn rational_fifth_power_classes() {
        for m in 1..25i64 {
            if m % 5 == 0 {
                assert!(is_fifth_power_unit_class(&CycInt::from_int(m)).is_err());
                continue;
            }
            let got = is_fifth_power_unit_class(&CycInt::from_int(m)).unwrap();
            assert_eq!(got, [1, 7, 18, 24].contains(&m), "m = {m}");
        }
        assert!(is_fifth_power_unit_class(&CycInt::from_int(7)).unwrap());
        assert!(!is_fifth_power_unit_class(&CycInt::from_int(11)).unwrap());
        assert!(!is_fifth_power_unit_class(&CycInt::from_int(19)).unwrap());
        assert!(is_fifth_power_unit_class(&CycInt::from_int(24)).unwrap());
    }

    #[test]
    fn unit_subgroup_has_fifty_elements() {
        let set: HashSet<CycInt> = UnitClass::all().iter().map(|u| u.to_cycint()).collect();
        assert_eq!(set.len(), 50);
    }

    #[test]
    fn principal_units_have_exponent_five() {
        let lam = CycInt::lambda();
        let m25 = BigInt::from(25);
        let one = residue_mod_lambda5(&CycInt::one());
        for code in 0..625u32 {
            let mut u = CycInt::zero();
            let mut p = CycInt::one();
            let mut cc = code;
            for _ in 0..4 {
                u = &u + &p.scale(&BigInt::from(cc % 5));
                p = &p * &lam;
                cc /= 5;
            }
            let x = &CycInt::one() + &(&lam * &u);
            assert_eq!(residue_mod_lambda5(&x.pow(5).reduce_coeffs(&m25)), one);
        }
    }

    #[test]
    fn unit_log_frozen_values() {
        assert_eq!(unit_log(&CycInt::zeta()).unwrap(), [4, 4, 0, 4]);
        assert_eq!(unit_log(&CycInt::one_plus_zeta()).unwrap(), [2, 4, 2, 4]);
        assert_eq!(unit_log(&CycInt::from_int(7)).unwrap(), [0, 0, 0, 0]);
        assert!(unit_log(&CycInt::lambda()).is_err());
    }

    #[test]
    fn unit_log_is_a_homomorphism() {
        let xs = [
            c([2, 1, 0, 0]),
            c([3, 0, 4, 4]),
            c([1, 1, 2, 0]),
            CycInt::zeta(),
        ];
        for a in &xs {
            for b in &xs {
                let la = unit_log(a).unwrap();
                let lb = unit_log(b).unwrap();
                let lab = unit_log(&(a * b)).unwrap();
                for i in 0..4 {
                    assert_eq!(lab[i], (la[i] + lb[i]) % 5);
                }
            }
        }
    }

    #[test]
    fn identify_unit_round_trip() {
        for b in -6..7 {
            for a in 0..5u8 {
                for s in [1i8, -1] {
                    let u = unit_element(s, a as i64, b);
                    assert_eq!(identify_unit(&u), Some((s, a, b)));
                }
            }
        }
        assert_eq!(identify_unit(&CycInt::from_int(2)), None);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(c([3, 0, 4, 4]).to_string(), "3 + 4z^2 + 4z^3");
        assert_eq!(c([0, -1, 0, 0]).to_string(), "-z");
        assert_eq!(CycInt::zero().to_string(), "0");
    }
}
