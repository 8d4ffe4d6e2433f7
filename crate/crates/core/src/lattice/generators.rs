//! The three standard involutive generators of `Λ ⋊ D_n` attached to a
//! triple satisfying condition (C).
//!
//! With `n = lcm(p,q,r)` and a reduced condition-(D) witness
//! `(c₁,c₂,c₃)`, the exponents `u = −p₁c₁` and `v = q₁c₂` (mod `n`)
//! give rotations of orders `p` and `q` whose quotient `g^{v−u}` has
//! order `r`. The generators are `σ₁ = (0,s)`, `σ₂ = (0, s·gᵘ)` and
//! `σ₃ = (e, s·gᵛ)` with `e` a monomial coordinate vector chosen so
//! that `σ₃` is an involution whenever `2i ≡ −v (mod n)` is solvable.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith;
use crate::dihedral::DihedralElement;
use crate::triples::{check_condition_c, decompose, solve_condition_d, Triple};

use super::{affine_order, AffineElement, AffineOrder, LatticeError};

/// The labeled triple, its decomposition, the rotation exponents, the
/// translation seed and the three generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorData {
    original: (u64, u64, u64),
    relabeled: (u64, u64, u64),
    n: u64,
    d: u64,
    p1: u64,
    q1: u64,
    r1: u64,
    u: u64,
    v: u64,
    seed_exponent: u64,
    involution_seed: bool,
    seed: Vec<BigInt>,
    sigma: [AffineElement; 3],
}

impl GeneratorData {
    /// The triple as supplied.
    pub fn original(&self) -> (u64, u64, u64) {
        self.original
    }

    /// The triple after relabeling for the even-`n` valuation
    /// convention (`v₂(p) = v₂(r) = v₂(n)`, `v₂(q) < v₂(n)`).
    pub fn relabeled(&self) -> (u64, u64, u64) {
        self.relabeled
    }

    /// The common lcm `n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The gcd `d` of the relabeled triple.
    pub fn d(&self) -> u64 {
        self.d
    }

    /// `n/p`.
    pub fn p1(&self) -> u64 {
        self.p1
    }

    /// `n/q`.
    pub fn q1(&self) -> u64 {
        self.q1
    }

    /// `n/r`.
    pub fn r1(&self) -> u64 {
        self.r1
    }

    /// Exponent of the order-`p` rotation `gᵘ = σ₁σ₂`.
    pub fn u(&self) -> u64 {
        self.u
    }

    /// Exponent of the order-`q` rotation `gᵛ` (point part of `σ₁σ₃`).
    pub fn v(&self) -> u64 {
        self.v
    }

    /// The exponent `i` with `e = x^i mod Φ_n`.
    pub fn seed_exponent(&self) -> u64 {
        self.seed_exponent
    }

    /// Whether `2i ≡ −v (mod n)` was solvable, making `σ₃` an
    /// involution; otherwise `e` falls back to the image of the first
    /// basis vector under `g` and `σ₃` may have infinite order.
    pub fn involution_seed(&self) -> bool {
        self.involution_seed
    }

    /// The translation seed `e`.
    pub fn seed(&self) -> &[BigInt] {
        &self.seed
    }

    /// `σ₁ = (0, s)`.
    pub fn sigma1(&self) -> &AffineElement {
        &self.sigma[0]
    }

    /// `σ₂ = (0, s·gᵘ)`.
    pub fn sigma2(&self) -> &AffineElement {
        &self.sigma[1]
    }

    /// `σ₃ = (e, s·gᵛ)`.
    pub fn sigma3(&self) -> &AffineElement {
        &self.sigma[2]
    }

    /// Generator by 1-based index (1, 2 or 3).
    pub fn sigma(&self, index: u8) -> &AffineElement {
        &self.sigma[(index - 1) as usize]
    }
}

/// The coordinate vector of `x^exp mod Φ_n` (length `φ(n)`).
pub(crate) fn monomial_mod_phi(n: u64, exp: u64) -> Vec<BigInt> {
    let phi_poly = arith::cyclotomic_poly(n);
    let c = phi_poly.coeffs();
    let deg = phi_poly.degree();
    let mut v = vec![BigInt::zero(); deg];
    v[0] = BigInt::one();
    for _ in 0..(exp % n) {
        // multiply by x, folding x^deg = −(c₀ + c₁x + …) back in
        let top = v[deg - 1].clone();
        for i in (1..deg).rev() {
            v[i] = v[i - 1].clone();
        }
        v[0] = BigInt::zero();
        if !top.is_zero() {
            for (vi, ci) in v.iter_mut().zip(c.iter()) {
                *vi -= &top * ci;
            }
        }
    }
    v
}

/// The smallest `i ≥ 0` with `2i ≡ −v (mod n)` when it exists (then
/// `σ₃` is an involution), else the fallback exponent 1 (the image of
/// the first basis vector under `g`).
pub(crate) fn choose_seed_exponent(n: u64, v: u64) -> (u64, bool) {
    let neg_v = (n - v % n) % n;
    if n % 2 == 1 {
        // 2 is invertible: the unique solution mod n
        let inv2 = (n + 1) / 2;
        (neg_v * inv2 % n, true)
    } else if neg_v % 2 == 0 {
        // two solutions mod n, congruent mod n/2; take the smaller
        ((neg_v / 2) % (n / 2), true)
    } else {
        (1, false)
    }
}

/// Relabel `(p,q,r)` so that when `n` is even the unique entry with
/// `v₂ < v₂(n)` sits in the middle (`q`) position.
fn relabel(p: u64, q: u64, r: u64, n: u64) -> (u64, u64, u64) {
    if n % 2 == 1 {
        return (p, q, r);
    }
    let vn = n.trailing_zeros();
    let entries = [p, q, r];
    let low: Vec<usize> = (0..3)
        .filter(|&i| entries[i].trailing_zeros() < vn)
        .collect();
    assert_eq!(
        low.len(),
        1,
        "condition (C) forces exactly one entry below the maximal 2-adic valuation"
    );
    let qi = low[0];
    let rest: Vec<u64> = (0..3).filter(|&i| i != qi).map(|i| entries[i]).collect();
    (rest[0], entries[qi], rest[1])
}

/// Build the standard generators for a condition-(C) triple.
///
/// Postconditions (asserted): `σ₁`, `σ₂` are involutions, the product
/// orders are `(p, q, r)` in the relabeled order —
/// `order(σ₁σ₂) = p`, `order(σ₁σ₃) = q`, `order(σ₂σ₃) = r` — and
/// `gcd(u, v, n) = 1` so the two rotations generate all of `⟨g⟩`.
pub fn standard_generators(p: u64, q: u64, r: u64) -> Result<GeneratorData, LatticeError> {
    let input = Triple::new(p, q, r)?;
    let cond = check_condition_c(&input);
    if !cond.holds() {
        return Err(LatticeError::ConditionViolated {
            c1: cond.c1,
            c2: cond.c2,
        });
    }
    let n = input.lcm();
    let (lp, lq, lr) = relabel(p, q, r, n);
    let labeled = Triple::new(lp, lq, lr).expect("relabeling permutes valid entries");
    let dec = decompose(&labeled).expect("condition C implies C1");
    let (p1, q1, r1, d) = (dec.b1(), dec.b2(), dec.b3(), dec.w());

    let sol = solve_condition_d(&labeled)
        .expect("condition C guarantees a reduced solution")
        .solution;
    let nn = n as i128;
    let u = (-(p1 as i128) * sol.c1).rem_euclid(nn) as u64;
    let v = ((q1 as i128) * sol.c2).rem_euclid(nn) as u64;

    let (seed_exponent, involution_seed) = choose_seed_exponent(n, v);
    let seed = monomial_mod_phi(n, seed_exponent);

    let s = DihedralElement::reflection(n, 0);
    let sgu = s
        .mul(&DihedralElement::rotation(n, u as i128))
        .expect("same level");
    let sgv = s
        .mul(&DihedralElement::rotation(n, v as i128))
        .expect("same level");
    let sigma1 = AffineElement::point(s);
    let sigma2 = AffineElement::point(sgu);
    let sigma3 = AffineElement::new(seed.clone(), sgv).expect("seed has length phi(n)");

    let gd = GeneratorData {
        original: (p, q, r),
        relabeled: (lp, lq, lr),
        n,
        d,
        p1,
        q1,
        r1,
        u,
        v,
        seed_exponent,
        involution_seed,
        seed,
        sigma: [sigma1, sigma2, sigma3],
    };

    // the rotations really have the advertised orders
    assert_eq!(DihedralElement::rotation(n, u as i128).order(), lp);
    assert_eq!(DihedralElement::rotation(n, v as i128).order(), lq);
    assert_eq!(
        DihedralElement::rotation(n, v as i128 - u as i128).order(),
        lr
    );
    // the two rotations generate the full rotation subgroup
    assert_eq!(
        arith::gcd(arith::gcd(u, v), n),
        1,
        "⟨g^u, g^v⟩ must be all of ⟨g⟩"
    );
    // σ₁, σ₂ are involutions; σ₃ is one exactly when the seed allows
    let sq = |x: &AffineElement| x.mul(x).expect("same level").is_identity();
    assert!(sq(gd.sigma1()) && sq(gd.sigma2()));
    assert_eq!(sq(gd.sigma3()), gd.involution_seed);
    // pairwise product orders are the relabeled triple
    let pair = |a: &AffineElement, b: &AffineElement| affine_order(&a.mul(b).expect("same level"));
    assert_eq!(pair(gd.sigma1(), gd.sigma2()), AffineOrder::Finite(lp));
    assert_eq!(pair(gd.sigma1(), gd.sigma3()), AffineOrder::Finite(lq));
    assert_eq!(pair(gd.sigma2(), gd.sigma3()), AffineOrder::Finite(lr));
    Ok(gd)
}
