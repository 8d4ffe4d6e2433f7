//! Integer arithmetic foundations: primality, factorisation, valuations,
//! multiplicative functions, cyclotomic polynomials, integer matrices, and
//! Smith normal form.
//!
//! Everything is exact. Scalar inputs are `u64` (primality and
//! factorisation are deterministic for the full `u64` range); polynomial
//! coefficients and matrix entries are arbitrary-precision [`BigInt`] so no
//! intermediate result can overflow silently.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors raised by the arithmetic layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    /// Zero cannot be factored or given a valuation.
    #[error("zero has no prime factorisation or valuation")]
    ZeroArgument,
    /// The claimed prime modulus of a valuation is not prime.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// An lcm or product left the `u64` range.
    #[error("intermediate value exceeds the u64 range")]
    Overflow,
    /// `h_double_prime_structure` requires all pairwise lcms to agree.
    #[error("pairwise lcms differ: lcm(p,q)={0}, lcm(p,r)={1}, lcm(q,r)={2}")]
    PairwiseLcmMismatch(u64, u64, u64),
    /// Triple entries must be at least 1 here.
    #[error("entry {0} is out of range (must be >= 1)")]
    EntryOutOfRange(u64),
}

// ---------------------------------------------------------------------------
// gcd / lcm / extended gcd
// ---------------------------------------------------------------------------

/// Greatest common divisor on `u64` (Euclid); `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple on `u64`, failing on overflow. `lcm(0, x) = 0`.
pub fn lcm(a: u64, b: u64) -> Result<u64, ArithError> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(ArithError::Overflow)
}

/// Extended Euclid on `i128`: returns `(g, x, y)` with `a·x + b·y = g` and
/// `g = gcd(|a|, |b|) ≥ 0`.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        // a = q·b + r with r = a.rem_euclid(b), q = (a - r)/b
        let q = (a - a.rem_euclid(b)) / b;
        (g, y, x - q * y)
    }
}

// ---------------------------------------------------------------------------
// Primality and factorisation
// ---------------------------------------------------------------------------

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin primality test, valid for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime factorisation `m = Π p^e`, stored sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    factors: BTreeMap<u64, u32>,
}

impl PrimeFactorization {
    /// The `(prime, exponent)` pairs in increasing prime order.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().map(|(&p, &e)| (p, e))
    }

    /// The distinct primes in increasing order.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.keys().copied()
    }

    /// Exponent of `p` (zero when `p` does not divide the number).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    /// True for the factorisation of 1.
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.factors.keys().product()
    }

    /// Number of divisors `τ = Π (e + 1)`.
    pub fn divisor_count(&self) -> u64 {
        self.factors.values().map(|&e| e as u64 + 1).product()
    }

    /// Reassemble the factored number.
    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .map(|(&p, &e)| p.pow(e))
            .product()
    }
}

/// Factor `m ≥ 1` into primes by trial division with early primality exits.
///
/// `factorize(1)` is the empty factorisation; `m = 0` is rejected.
pub fn factorize(m: u64) -> Result<PrimeFactorization, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroArgument);
    }
    let mut factors = BTreeMap::new();
    let mut rest = m;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.insert(p, e);
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    let mut d = 5u64;
    while rest > 1 {
        if is_prime(rest) {
            *factors.entry(rest).or_insert(0) += 1;
            break;
        }
        while d.saturating_mul(d) <= rest {
            if rest % d == 0 {
                break;
            }
            d += if d % 6 == 5 { 2 } else { 4 };
        }
        push(d, &mut rest);
    }
    Ok(PrimeFactorization { factors })
}

/// The `p`-adic valuation `v_p(m)` of a nonzero integer (sign ignored).
pub fn valuation(p: u64, m: i64) -> Result<u32, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroArgument);
    }
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let mut v = 0;
    let mut m = m.unsigned_abs();
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    Ok(v)
}

/// Euler's totient `φ(m)` for `m ≥ 1`.
///
/// # Panics
/// Panics when `m = 0`.
pub fn totient(m: u64) -> u64 {
    assert!(m >= 1, "totient is defined for m >= 1");
    let mut result = m;
    for p in factorize(m).expect("m >= 1").primes() {
        result = result / p * (p - 1);
    }
    result
}

/// The Möbius function `μ(m)` for `m ≥ 1`.
///
/// # Panics
/// Panics when `m = 0`.
pub fn moebius(m: u64) -> i32 {
    assert!(m >= 1, "moebius is defined for m >= 1");
    let f = factorize(m).expect("m >= 1");
    let mut sign = 1;
    for (_, e) in f.pairs() {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

// ---------------------------------------------------------------------------
// Dense integer polynomials (ascending coefficients), internal helpers
// ---------------------------------------------------------------------------

pub(crate) fn poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
}

#[cfg(test)]
pub(crate) fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(&mut out);
    out
}

/// Divide by a monic divisor, returning `(quotient, remainder)`.
pub(crate) fn poly_divmod_monic(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    assert!(den.last().map(One::is_one).unwrap_or(false), "divisor must be monic");
    let d = den.len() - 1;
    let mut rem: Vec<BigInt> = num.to_vec();
    if rem.len() <= d {
        return (vec![BigInt::zero()], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - d];
    for i in (d..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - d] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let t = &c * dj;
            rem[i - d + j] -= t;
        }
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

/// Exact division by a monic divisor; panics if the remainder is nonzero.
pub(crate) fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let (q, r) = poly_divmod_monic(num, den);
    assert!(
        r.iter().all(Zero::is_zero),
        "polynomial division was not exact"
    );
    q
}

/// Substitute `x ↦ x^k` (coefficient inflation).
pub(crate) fn poly_inflate(p: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); (p.len() - 1) * k + 1];
    for (i, c) in p.iter().enumerate() {
        out[i * k] = c.clone();
    }
    out
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

/// The `n`-th cyclotomic polynomial `Φ_n`, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicPoly {
    index: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicPoly {
    /// The index `n`.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Ascending coefficients; length is `φ(n) + 1`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree `φ(n)`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Compute `Φ_n` exactly.
///
/// Uses `Φ_rad(n)` built by the identity `Φ_{mp}(x) = Φ_m(x^p)/Φ_m(x)`
/// (for primes `p ∤ m`), followed by `Φ_n(x) = Φ_rad(n)(x^{n/rad(n)})`.
///
/// # Panics
/// Panics when `n = 0`.
pub fn cyclotomic_poly(n: u64) -> CyclotomicPoly {
    assert!(n >= 1, "cyclotomic polynomials are indexed by n >= 1");
    let f = factorize(n).expect("n >= 1");
    // x - 1
    let mut poly: Vec<BigInt> = vec![BigInt::from(-1), BigInt::one()];
    for p in f.primes() {
        let inflated = poly_inflate(&poly, p as usize);
        poly = poly_div_exact(&inflated, &poly);
    }
    let radical_cofactor = n / f.radical();
    if radical_cofactor > 1 {
        poly = poly_inflate(&poly, radical_cofactor as usize);
    }
    CyclotomicPoly {
        index: n,
        coeffs: poly,
    }
}

// ---------------------------------------------------------------------------
// Integer matrices
// ---------------------------------------------------------------------------

/// A dense matrix over `Z` with arbitrary-precision entries (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// Build from row-major entries; `entries.len()` must equal `rows·cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix {
            rows,
            cols,
            data: entries,
        }
    }

    /// Convenience constructor from machine-integer rows.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| BigInt::from(v)))
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// The `size × size` identity matrix.
    pub fn identity(size: usize) -> Self {
        let mut data = vec![BigInt::zero(); size * size];
        for i in 0..size {
            data[i * size + i] = BigInt::one();
        }
        IntMatrix {
            rows: size,
            cols: size,
            data,
        }
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    /// Set entry at `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix product `self · other`.
    ///
    /// # Panics
    /// Panics on dimension mismatch (an internal programming error here:
    /// all public callers pair matrices of matching degree).
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut data = vec![BigInt::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.get(k, j);
                    data[i * other.cols + j] += t;
                }
            }
        }
        IntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() {
                        acc += self.get(i, j) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Binary exponentiation; `pow(0)` is the identity.
    pub fn pow(&self, mut exp: u64) -> IntMatrix {
        assert_eq!(self.rows, self.cols, "pow needs a square matrix");
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Is this the identity matrix?
    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// Trace (sum of diagonal entries).
    pub fn trace(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[i][j] = q;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    /// Exact characteristic polynomial (ascending, monic) by the
    /// Faddeev–LeVerrier recurrence; all divisions are exact over `Z`.
    pub fn char_poly(&self) -> Vec<BigInt> {
        assert_eq!(self.rows, self.cols, "char_poly needs a square matrix");
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        if n == 0 {
            return coeffs;
        }
        let mut ak = self.clone();
        for k in 1..=n {
            let t = ak.trace();
            let (c, r) = (-t).div_rem(&BigInt::from(k as u64));
            debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
            coeffs[n - k] = c.clone();
            if k < n {
                let mut shifted = ak.clone();
                for i in 0..n {
                    let v = shifted.get(i, i) + &c;
                    shifted.set(i, i, v);
                }
                ak = self.mul(&shifted);
            }
        }
        coeffs
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// Invariant factors `d₁ | d₂ | …` of the cokernel `Z^cols / rowspace(m)`.
///
/// The returned list always has length `cols`: the nonzero invariant
/// factors first (each dividing the next, including any leading 1s), then
/// one `0` for every free rank of the quotient.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.rows();
    let cols = m.cols();
    let dim = rows.min(cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).to_vec()).collect();

    let mut k = 0;
    while k < dim {
        // Locate a nonzero entry of minimal absolute value in the trailing
        // submatrix; done if the submatrix is zero.
        let pivot = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            // Reduce column k and row k against the pivot, pulling any
            // nonzero remainder into the pivot slot (Euclid).
            let mut progressed = true;
            while progressed {
                progressed = false;
                if a[k][k].sign() == num_bigint::Sign::Minus {
                    for v in a[k].iter_mut() {
                        *v = -std::mem::take(v);
                    }
                }
                for i in k + 1..rows {
                    if a[i][k].is_zero() {
                        continue;
                    }
                    let q = a[i][k].div_floor(&a[k][k]);
                    if !q.is_zero() {
                        for j in k..cols {
                            let t = &q * &a[k][j];
                            a[i][j] -= t;
                        }
                    }
                    if !a[i][k].is_zero() {
                        a.swap(i, k);
                        progressed = true;
                    }
                }
                for j in k + 1..cols {
                    if a[k][j].is_zero() {
                        continue;
                    }
                    let q = a[k][j].div_floor(&a[k][k]);
                    if !q.is_zero() {
                        for row in a.iter_mut().skip(k) {
                            let t = &q * &row[k];
                            row[j] -= t;
                        }
                    }
                    if !a[k][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(j, k);
                        }
                        progressed = true;
                    }
                }
            }
            // Pivot now clears its row and column. Enforce divisibility of
            // the trailing submatrix; a violation folds that row in and the
            // reduction restarts.
            let violation = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].mod_floor(&a[k][k]).is_zero());
            match violation {
                Some((i, _)) => {
                    let extra = a[i].clone();
                    for (j, v) in extra.into_iter().enumerate() {
                        a[k][j] += v;
                    }
                }
                None => break,
            }
        }
        k += 1;
    }

    let mut factors: Vec<BigInt> = (0..dim).map(|i| a[i][i].abs()).collect();
    factors.resize(cols, BigInt::zero());
    factors
}

// ---------------------------------------------------------------------------
// Relation-lattice structure for a triple
// ---------------------------------------------------------------------------

/// Invariant factors of `Z² / ⟨(p,0), (0,q), (r,r)⟩` as a pair `(d₁, d₂)`.
///
/// Requires all three pairwise lcms of `(p, q, r)` to agree (each entry
/// at least 1); rejected otherwise with the offending lcms.
pub fn h_double_prime_structure(p: u64, q: u64, r: u64) -> Result<(u64, u64), ArithError> {
    for x in [p, q, r] {
        if x < 1 {
            return Err(ArithError::EntryOutOfRange(x));
        }
    }
    let l_pq = lcm(p, q)?;
    let l_pr = lcm(p, r)?;
    let l_qr = lcm(q, r)?;
    if !(l_pq == l_pr && l_pr == l_qr) {
        return Err(ArithError::PairwiseLcmMismatch(l_pq, l_pr, l_qr));
    }
    let m = IntMatrix::from_i64_rows(&[
        vec![p as i64, 0],
        vec![0, q as i64],
        vec![r as i64, r as i64],
    ]);
    let f = smith_normal_form(&m);
    let to_u64 = |b: &BigInt| -> Result<u64, ArithError> {
        u64::try_from(b.clone()).map_err(|_| ArithError::Overflow)
    };
    Ok((to_u64(&f[0])?, to_u64(&f[1])?))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
