//! Exact cyclotomic arithmetic for trigonometric identities.
//!
//! The quantities `4cos²(tπ)` for rational `t = k/m` live in the ring
//! `Z[x]/Φ_m` as `2 + ζ^k + ζ^{m−k}`. All identity decisions (sum
//! conditions, product conditions, discriminants) are made by exact
//! arithmetic in these rings — no floating point anywhere.
//!
//! Coefficients are `i128` with *checked* arithmetic: any overflow aborts
//! loudly instead of wrapping. For the denominators this library targets
//! (well below 1000) coefficients stay tiny.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::arith;

/// Errors raised by the cyclotomic layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    /// A rational angle needs a nonzero denominator.
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    /// Malformed textual angle.
    #[error("cannot parse {0:?} as a rational angle (expected `p/q` or an integer)")]
    MalformedAngle(String),
    /// Lifting is only defined to a multiple of the current level.
    #[error("cannot lift level {from} to non-multiple level {to}")]
    LevelNotMultiple { from: u64, to: u64 },
}

// ---------------------------------------------------------------------------
// Rational angles
// ---------------------------------------------------------------------------

/// A rational multiple of π, stored reduced with `0 ≤ num < den`
/// (angles are taken mod Z throughout).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle {
    num: u64,
    den: u64,
}

impl RationalAngle {
    /// Build `num/den` reduced mod Z; the denominator may be negative on
    /// input but not zero.
    pub fn new(num: i64, den: i64) -> Result<Self, CycloError> {
        if den == 0 {
            return Err(CycloError::ZeroDenominator);
        }
        let (mut n, d) = if den < 0 { (-(num as i128), (den as i128).unsigned_abs()) } else { (num as i128, den as i128 as u128) };
        let d = d as u64;
        n = n.rem_euclid(d as i128);
        let n = n as u64;
        let g = arith::gcd(n, d);
        let (n, d) = if g == 0 { (0, 1) } else { (n / g, d / g) };
        Ok(RationalAngle { num: n, den: d })
    }

    /// Reduced numerator, in `[0, den)`.
    pub fn num(&self) -> u64 {
        self.num
    }

    /// Reduced denominator, at least 1.
    pub fn den(&self) -> u64 {
        self.den
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RationalAngle {
    type Err = CycloError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CycloError::MalformedAngle(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((a, b)) => {
                let num: i64 = a.trim().parse().map_err(|_| bad())?;
                let den: i64 = b.trim().parse().map_err(|_| bad())?;
                if den == 0 {
                    return Err(CycloError::ZeroDenominator);
                }
                RationalAngle::new(num, den)
            }
            None => {
                let num: i64 = t.parse().map_err(|_| bad())?;
                RationalAngle::new(num, 1)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic numbers
// ---------------------------------------------------------------------------

/// Cached cyclotomic polynomial coefficients as `i128`.
static PHI_CACHE: Lazy<Mutex<HashMap<u64, Arc<Vec<i128>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn phi_coeffs(level: u64) -> Arc<Vec<i128>> {
    let mut cache = PHI_CACHE.lock().expect("cyclotomic cache poisoned");
    cache
        .entry(level)
        .or_insert_with(|| {
            let poly = arith::cyclotomic_poly(level);
            Arc::new(
                poly.coeffs()
                    .iter()
                    .map(|c| {
                        c.to_i128()
                            .expect("cyclotomic coefficient exceeds i128 range")
                    })
                    .collect(),
            )
        })
        .clone()
}

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b)
        .expect("cyclotomic coefficient overflow (addition)")
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b)
        .expect("cyclotomic coefficient overflow (multiplication)")
}

/// Reduce raw ascending coefficients mod `Φ_level`, returning exactly
/// `φ(level)` coefficients.
fn reduce_mod_phi(mut raw: Vec<i128>, level: u64) -> Vec<i128> {
    let phi = phi_coeffs(level);
    let deg = phi.len() - 1;
    if raw.len() < deg {
        raw.resize(deg, 0);
        return raw;
    }
    for i in (deg..raw.len()).rev() {
        let c = raw[i];
        if c == 0 {
            continue;
        }
        raw[i] = 0;
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            raw[i - deg + j] = checked_add(raw[i - deg + j], checked_mul(-c, pj));
        }
    }
    raw.truncate(deg);
    raw
}

/// An exact element of `Z[x]/Φ_N`, the integral cyclotomic ring at level `N`.
///
/// Coefficients are canonical: always reduced mod `Φ_N`, always of length
/// `φ(N)`. Equality compares values, lifting both sides to a common level.
#[derive(Debug, Clone)]
pub struct CycloNumber {
    level: u64,
    coeffs: Vec<i128>,
}

impl CycloNumber {
    /// The rational integer `v` at level 1.
    pub fn from_integer(v: i64) -> Self {
        CycloNumber {
            level: 1,
            coeffs: vec![v as i128],
        }
    }

    /// The root of unity `ζ_level^k`.
    pub fn root_of_unity(level: u64, k: u64) -> Self {
        assert!(level >= 1, "level must be at least 1");
        let k = (k % level) as usize;
        let mut raw = vec![0i128; k + 1];
        raw[k] = 1;
        CycloNumber {
            level,
            coeffs: reduce_mod_phi(raw, level),
        }
    }

    /// The cyclotomic level `N`.
    pub fn level(&self) -> u64 {
        self.level
    }

    /// Canonical coefficients in the power basis (length `φ(level)`).
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Inject into the ring at a multiple level via `ζ ↦ ζ^(L/level)`.
    pub fn lift(&self, new_level: u64) -> Result<Self, CycloError> {
        if new_level % self.level != 0 || new_level == 0 {
            return Err(CycloError::LevelNotMultiple {
                from: self.level,
                to: new_level,
            });
        }
        if new_level == self.level {
            return Ok(self.clone());
        }
        let stride = (new_level / self.level) as usize;
        let mut raw = vec![0i128; (self.coeffs.len() - 1) * stride + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            raw[i * stride] = c;
        }
        Ok(CycloNumber {
            level: new_level,
            coeffs: reduce_mod_phi(raw, new_level),
        })
    }

    fn common_level(&self, other: &Self) -> u64 {
        arith::lcm(self.level, other.level).expect("cyclotomic level lcm overflows u64")
    }

    /// Exact sum.
    pub fn add(&self, other: &Self) -> Self {
        let level = self.common_level(other);
        let a = self.lift(level).expect("lcm is a multiple");
        let b = other.lift(level).expect("lcm is a multiple");
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| checked_add(x, y))
            .collect();
        CycloNumber { level, coeffs }
    }

    /// Exact difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Self {
        let level = self.common_level(other);
        let a = self.lift(level).expect("lcm is a multiple");
        let b = other.lift(level).expect("lcm is a multiple");
        let mut raw = vec![0i128; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    raw[i + j] = checked_add(raw[i + j], checked_mul(x, y));
                }
            }
        }
        CycloNumber {
            level,
            coeffs: reduce_mod_phi(raw, level),
        }
    }

    /// Exact negation.
    pub fn neg(&self) -> Self {
        CycloNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let level = self.common_level(other);
        let a = self.lift(level).expect("lcm is a multiple");
        let b = other.lift(level).expect("lcm is a multiple");
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: {:?}", self.level, self.coeffs)
    }
}

impl std::ops::Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber::add(self, rhs)
    }
}

impl std::ops::Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber::sub(self, rhs)
    }
}

impl std::ops::Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber::mul(self, rhs)
    }
}

impl std::ops::Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Trigonometric values and identity decisions
// ---------------------------------------------------------------------------

/// The exact value `4cos²(tπ) = 2 + ζ^k + ζ^{m−k}` at level `m = den(t)`.
pub fn cos_square_value(t: RationalAngle) -> CycloNumber {
    let m = t.den();
    let k = t.num();
    let two = CycloNumber {
        level: m,
        coeffs: reduce_mod_phi(vec![2], m),
    };
    let za = CycloNumber::root_of_unity(m, k);
    let zb = CycloNumber::root_of_unity(m, (m - k) % m);
    two.add(&za).add(&zb)
}

/// Does some choice of signs `ε, ε′ ∈ {−1, +1}` give `c ≡ εa + ε′b (mod Z)`?
/// Decided by exact rational arithmetic.
pub fn angle_sum_condition(a: RationalAngle, b: RationalAngle, c: RationalAngle) -> bool {
    let l_ab = arith::lcm(a.den(), b.den()).expect("angle denominator lcm overflows");
    let l = arith::lcm(l_ab, c.den()).expect("angle denominator lcm overflows");
    let na = (a.num() * (l / a.den())) as i128;
    let nb = (b.num() * (l / b.den())) as i128;
    let nc = (c.num() * (l / c.den())) as i128;
    let l = l as i128;
    [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .into_iter()
        .any(|(e1, e2)| (e1 * na + e2 * nb - nc).rem_euclid(l) == 0)
}

/// Does `αβγ = (4 − α − β − γ)²` hold exactly, where `α = 4cos²(aπ)` etc.?
pub fn product_condition(a: RationalAngle, b: RationalAngle, c: RationalAngle) -> bool {
    discriminant_locus(a, b, c).discriminant.is_zero()
}

/// The discriminant `(4−α−β−γ)² − αβγ` of `Q(X) = X² − 2(4−α−β−γ)X + αβγ`,
/// with the double root exposed whenever the discriminant vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantLocus {
    /// `(4−α−β−γ)² − αβγ`, exactly.
    pub discriminant: CycloNumber,
    /// When the discriminant vanishes, the common value `4−α−β−γ` at which
    /// the quadratic has its double root.
    pub double_root: Option<CycloNumber>,
}

/// Evaluate the discriminant of the quadratic attached to three angles.
pub fn discriminant_locus(a: RationalAngle, b: RationalAngle, c: RationalAngle) -> DiscriminantLocus {
    let alpha = cos_square_value(a);
    let beta = cos_square_value(b);
    let gamma = cos_square_value(c);
    let four = CycloNumber::from_integer(4);
    let t = four.sub(&alpha).sub(&beta).sub(&gamma);
    let discriminant = t.mul(&t).sub(&alpha.mul(&beta).mul(&gamma));
    let double_root = discriminant.is_zero().then(|| t.clone());
    DiscriminantLocus {
        discriminant,
        double_root,
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn angle(n: i64, d: i64) -> RationalAngle {
        RationalAngle::new(n, d).unwrap()
    }

    #[test]
    fn rational_angle_normalization() {
        assert_eq!(angle(1, 2), angle(3, 2).clone());
        assert_eq!(angle(-1, 3), angle(2, 3));
        assert_eq!(angle(2, 4), angle(1, 2));
        assert_eq!(angle(5, -3), angle(1, 3));
        assert_eq!(angle(0, 7), angle(0, 1));
        assert_eq!(RationalAngle::new(1, 0), Err(CycloError::ZeroDenominator));
        assert_eq!(angle(7, 12).to_string(), "7/12");
        assert_eq!(angle(0, 1).to_string(), "0");
    }

    #[test]
    fn rational_angle_parsing() {
        assert_eq!("3/4".parse::<RationalAngle>().unwrap(), angle(3, 4));
        assert_eq!(" -1/4 ".parse::<RationalAngle>().unwrap(), angle(3, 4));
        assert_eq!("2".parse::<RationalAngle>().unwrap(), angle(0, 1));
        assert_eq!(
            "1/0".parse::<RationalAngle>(),
            Err(CycloError::ZeroDenominator)
        );
        assert!(matches!(
            "x/2".parse::<RationalAngle>(),
            Err(CycloError::MalformedAngle(_))
        ));
    }

    #[test]
    fn cos_square_frozen_values() {
        assert_eq!(cos_square_value(angle(1, 3)), CycloNumber::from_integer(1));
        assert_eq!(cos_square_value(angle(1, 2)), CycloNumber::from_integer(0));
        assert_eq!(cos_square_value(angle(1, 4)), CycloNumber::from_integer(2));
        assert_eq!(cos_square_value(angle(0, 1)), CycloNumber::from_integer(4));
        assert_eq!(cos_square_value(angle(1, 6)), CycloNumber::from_integer(3));
        // 4cos²(π/5) is irrational: level-5 residue 1 − x² − x³
        let v = cos_square_value(angle(1, 5));
        assert_eq!(v.level(), 5);
        assert_eq!(v.coeffs(), &[1, 0, -1, -1]);
    }

    #[test]
    fn ring_identities() {
        // 1 + ζ₃ + ζ₃² = 0
        let z = CycloNumber::root_of_unity(3, 1);
        let z2 = CycloNumber::root_of_unity(3, 2);
        let sum = z.add(&z2).add(&CycloNumber::from_integer(1));
        assert!(sum.is_zero());
        // ζ₅ powers multiply additively in the exponent
        let a = CycloNumber::root_of_unity(5, 2);
        let b = CycloNumber::root_of_unity(5, 4);
        assert_eq!(a.mul(&b), CycloNumber::root_of_unity(5, 1));
        // operator sugar matches the named methods
        let x = cos_square_value(angle(1, 5));
        assert_eq!(&x + &x, x.add(&x));
        assert_eq!(&x - &x, CycloNumber::from_integer(0));
        assert_eq!(-(&x), x.neg());
    }

    #[test]
    fn lift_coherence() {
        let v = cos_square_value(angle(1, 5));
        for target in [5u64, 10, 15, 30, 60] {
            let lifted = v.lift(target).unwrap();
            assert_eq!(lifted.level(), target);
            assert_eq!(lifted, v, "lift to {target} must preserve the value");
        }
        // transitivity: 5 → 10 → 30 equals 5 → 30
        let via = v.lift(10).unwrap().lift(30).unwrap();
        assert_eq!(via, v.lift(30).unwrap());
        assert_eq!(
            v.lift(12),
            Err(CycloError::LevelNotMultiple { from: 5, to: 12 })
        );
    }

    /// Schoolbook oracle: multiply the raw polynomials with BigInt
    /// arithmetic and reduce mod Φ₅ by long division.
    #[test]
    fn golden_ratio_product_matches_schoolbook_oracle() {
        let a = cos_square_value(angle(1, 5)); // 2 + ζ + ζ⁴
        let b = cos_square_value(angle(2, 5)); // 2 + ζ² + ζ³
        let got = a.mul(&b);

        let raw_a: Vec<BigInt> = [2, 1, 0, 0, 1].iter().map(|&v| BigInt::from(v)).collect();
        let raw_b: Vec<BigInt> = [2, 0, 1, 1, 0].iter().map(|&v| BigInt::from(v)).collect();
        let prod = crate::arith::poly_mul(&raw_a, &raw_b);
        let phi5: Vec<BigInt> = crate::arith::cyclotomic_poly(5).coeffs().to_vec();
        let (_, rem) = crate::arith::poly_divmod_monic(&prod, &phi5);
        let mut expect = vec![BigInt::zero(); 4];
        expect[..rem.len()].clone_from_slice(&rem);
        let got_big: Vec<BigInt> = got.coeffs().iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(got_big, expect, "product must match schoolbook reduction");

        // and the value itself is the integer 1
        assert_eq!(got, CycloNumber::from_integer(1));
    }

    #[test]
    fn angle_sum_frozen_values() {
        assert!(angle_sum_condition(angle(1, 4), angle(1, 4), angle(1, 2)));
        assert!(!angle_sum_condition(angle(1, 2), angle(1, 2), angle(1, 2)));
        assert!(angle_sum_condition(angle(1, 3), angle(1, 3), angle(1, 3)));
    }

    #[test]
    fn product_condition_frozen_values() {
        assert!(product_condition(angle(1, 4), angle(1, 4), angle(1, 2)));
        assert!(!product_condition(angle(1, 2), angle(1, 2), angle(1, 2)));
        assert!(product_condition(angle(1, 3), angle(1, 3), angle(1, 3)));
    }

    #[test]
    fn discriminant_frozen_values() {
        let d = discriminant_locus(angle(1, 4), angle(1, 4), angle(1, 2));
        assert!(d.discriminant.is_zero());
        assert_eq!(d.double_root, Some(CycloNumber::from_integer(0)));

        let d = discriminant_locus(angle(1, 2), angle(1, 2), angle(1, 2));
        assert_eq!(d.discriminant, CycloNumber::from_integer(16));
        assert_eq!(d.double_root, None);

        let d = discriminant_locus(angle(1, 3), angle(1, 3), angle(1, 2));
        assert_eq!(d.discriminant, CycloNumber::from_integer(4));
        assert_eq!(d.double_root, None);
    }

    #[test]
    fn discriminant_zero_iff_product_condition() {
        let fractions = reduced_fractions(8);
        for &a in &fractions {
            for &b in &fractions {
                let c = angle(1, 3);
                assert_eq!(
                    discriminant_locus(a, b, c).discriminant.is_zero(),
                    product_condition(a, b, c)
                );
            }
        }
    }

    fn reduced_fractions(max_den: u64) -> Vec<RationalAngle> {
        let mut out = vec![];
        for d in 1..=max_den {
            for n in 0..d {
                if arith::gcd(n, d) == 1 || (n == 0 && d == 1) {
                    out.push(angle(n as i64, d as i64));
                }
            }
        }
        out
    }

    #[test]
    fn both_conditions_are_symmetric() {
        let fr = reduced_fractions(5);
        for &a in &fr {
            for &b in &fr {
                for &c in &fr {
                    let s = angle_sum_condition(a, b, c);
                    assert_eq!(s, angle_sum_condition(b, c, a), "{a} {b} {c}");
                    assert_eq!(s, angle_sum_condition(c, a, b), "{a} {b} {c}");
                    assert_eq!(s, angle_sum_condition(b, a, c), "{a} {b} {c}");
                    let p = product_condition(a, b, c);
                    assert_eq!(p, product_condition(b, c, a), "{a} {b} {c}");
                    assert_eq!(p, product_condition(c, a, b), "{a} {b} {c}");
                    assert_eq!(p, product_condition(b, a, c), "{a} {b} {c}");
                }
            }
        }
    }

    /// Sum condition and product condition agree on every unordered triple
    /// of reduced fractions with denominator at most 8 (both conditions are
    /// symmetric, which `both_conditions_are_symmetric` checks directly).
    #[test]
    fn sum_and_product_conditions_agree_small_denominators() {
        let fr = reduced_fractions(8);
        let mut checked = 0u64;
        for i in 0..fr.len() {
            for j in i..fr.len() {
                for k in j..fr.len() {
                    let (a, b, c) = (fr[i], fr[j], fr[k]);
                    assert_eq!(
                        angle_sum_condition(a, b, c),
                        product_condition(a, b, c),
                        "conditions disagree at ({a}, {b}, {c})"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 2000, "sweep must cover all multisets");
    }

    /// Float sanity check only: evaluated at the primitive root, the exact
    /// value matches 4cos²(tπ) to machine precision and lies in [0, 4].
    #[test]
    fn numeric_sanity_of_cos_square() {
        for d in 1..=12u64 {
            for n in 0..d {
                if arith::gcd(n.max(1), d) != 1 {
                    continue;
                }
                let v = cos_square_value(angle(n as i64, d as i64));
                let tau = std::f64::consts::TAU / v.level() as f64;
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for (j, &c) in v.coeffs().iter().enumerate() {
                    re += c as f64 * (tau * j as f64).cos();
                    im += c as f64 * (tau * j as f64).sin();
                }
                let expect = 4.0 * (std::f64::consts::PI * n as f64 / d as f64).cos().powi(2);
                assert!(im.abs() < 1e-9, "imaginary residue at {n}/{d}");
                assert!((re - expect).abs() < 1e-9, "value mismatch at {n}/{d}");
                assert!((-1e-9..=4.0 + 1e-9).contains(&re));
            }
        }
    }
}
