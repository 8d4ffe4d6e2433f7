//! Arithmetic classification of integer triples.
//!
//! For a triple `(a₁, a₂, a₃)` of integers ≥ 2 with `n = lcm`, condition
//! **(D)** asks for integers `cᵢ` coprime to `aᵢ` with
//! `c₁/a₁ + c₂/a₂ + c₃/a₃ ∈ Z`, equivalently `Σ bᵢcᵢ = n` with
//! `bᵢ = n/aᵢ`. Condition **(C)** is the purely arithmetic criterion
//! equivalent to solvability:
//!
//! - **(C₁)** every pairwise lcm equals the global lcm, and
//! - **(C₂)** it is *not* the case that `n` is even and all three
//!   2-adic valuations `v₂(aᵢ)` equal `v₂(n)`.
//!
//! This module decides (C), constructively solves (D) by a residue sieve
//! on arithmetic progressions, enumerates the reduced solution box as an
//! independent brute-force oracle, and evaluates the closed counting
//! formulas for the number of reduced solutions.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use thiserror::Error;

use crate::arith;

/// Errors raised by the triple-classification layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TripleError {
    /// Triple entries must be at least 2.
    #[error("triple entry {0} is out of range (must be >= 2)")]
    EntryTooSmall(u64),
    /// Intermediate lcm or product left the `u64` range.
    #[error("intermediate value exceeds the u64 range")]
    Overflow,
    /// An operation requiring (C₁) was given a triple whose pairwise lcms
    /// do not all equal the global lcm.
    #[error("pairwise lcms {0}, {1}, {2} do not all equal the global lcm {3}")]
    ConditionC1Violated(u64, u64, u64, u64),
    /// An operation requiring the full condition (C) was given a triple
    /// failing it.
    #[error("condition C fails (C1={c1}, C2={c2})")]
    ConditionCViolated {
        /// Whether the pairwise-lcm condition held.
        c1: bool,
        /// Whether the 2-adic condition held.
        c2: bool,
    },
    /// Progression solving and class intersection need coprime inputs.
    #[error("arguments {0} and {1} are not coprime")]
    NotCoprime(i128, i128),
    /// Progression solving needs a positive modulus.
    #[error("modulus must be positive")]
    ZeroModulus,
}

// ---------------------------------------------------------------------------
// Triples and condition (C)
// ---------------------------------------------------------------------------

/// An ordered triple of integers, each at least 2, with a representable lcm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    a: [u64; 3],
}

impl Triple {
    /// Validate entries (≥ 2) and the global lcm (must fit `u64`).
    pub fn new(a1: u64, a2: u64, a3: u64) -> Result<Self, TripleError> {
        for v in [a1, a2, a3] {
            if v < 2 {
                return Err(TripleError::EntryTooSmall(v));
            }
        }
        let l = arith::lcm(a1, a2).and_then(|l| arith::lcm(l, a3));
        l.map_err(|_| TripleError::Overflow)?;
        Ok(Triple { a: [a1, a2, a3] })
    }

    /// First entry.
    pub fn a1(&self) -> u64 {
        self.a[0]
    }

    /// Second entry.
    pub fn a2(&self) -> u64 {
        self.a[1]
    }

    /// Third entry.
    pub fn a3(&self) -> u64 {
        self.a[2]
    }

    /// The entries as an array.
    pub fn entries(&self) -> [u64; 3] {
        self.a
    }

    /// Global lcm `n` (validated representable at construction).
    pub fn lcm(&self) -> u64 {
        let l = arith::lcm(self.a[0], self.a[1]).expect("validated at construction");
        arith::lcm(l, self.a[2]).expect("validated at construction")
    }

    /// Global gcd `w`.
    pub fn gcd(&self) -> u64 {
        arith::gcd(arith::gcd(self.a[0], self.a[1]), self.a[2])
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a[0], self.a[1], self.a[2])
    }
}

/// The two halves of condition (C).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionC {
    /// (C₁): all three pairwise lcms equal the global lcm.
    pub c1: bool,
    /// (C₂): not (n even and all three v₂(aᵢ) equal v₂(n)).
    pub c2: bool,
}

impl ConditionC {
    /// The conjunction: condition (C) holds.
    pub fn holds(&self) -> bool {
        self.c1 && self.c2
    }
}

/// Decide condition (C), reporting (C₁) and (C₂) separately.
pub fn check_condition_c(t: &Triple) -> ConditionC {
    let [a1, a2, a3] = t.entries();
    let n = t.lcm();
    let l12 = arith::lcm(a1, a2).expect("validated");
    let l13 = arith::lcm(a1, a3).expect("validated");
    let l23 = arith::lcm(a2, a3).expect("validated");
    let c1 = l12 == n && l13 == n && l23 == n;
    let v2 = |x: u64| x.trailing_zeros();
    let c2 = !(v2(n) >= 1 && v2(a1) == v2(n) && v2(a2) == v2(n) && v2(a3) == v2(n));
    ConditionC { c1, c2 }
}

// ---------------------------------------------------------------------------
// Decomposition under (C₁)
// ---------------------------------------------------------------------------

/// The multiplicative decomposition of a triple satisfying (C₁):
/// `n = b₁b₂b₃w`, `a₁ = b₂b₃w` (cyclically), with `bᵢ = n/aᵢ` pairwise
/// coprime, together with the prime sets steering the sieve and the
/// counting formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleDecomposition {
    n: u64,
    w: u64,
    b: [u64; 3],
    p0: BTreeSet<u64>,
    p1: BTreeSet<u64>,
    q: BTreeSet<u64>,
    qi: [BTreeSet<u64>; 3],
}

impl TripleDecomposition {
    /// Global lcm `n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Global gcd `w`.
    pub fn w(&self) -> u64 {
        self.w
    }

    /// Cofactor `b₁ = n/a₁`.
    pub fn b1(&self) -> u64 {
        self.b[0]
    }

    /// Cofactor `b₂ = n/a₂`.
    pub fn b2(&self) -> u64 {
        self.b[1]
    }

    /// Cofactor `b₃ = n/a₃`.
    pub fn b3(&self) -> u64 {
        self.b[2]
    }

    /// The cofactors as an array.
    pub fn b(&self) -> [u64; 3] {
        self.b
    }

    /// Primes dividing `w` but none of the `bᵢ` (each contributes two
    /// forbidden residue classes to the sieve).
    pub fn p0(&self) -> &BTreeSet<u64> {
        &self.p0
    }

    /// The primes of `b₁w` outside `P₀`: those of `b₁` plus those shared
    /// between `w` and `b₂` or `b₃` (one forbidden class each).
    pub fn p1(&self) -> &BTreeSet<u64> {
        &self.p1
    }

    /// Primes shared between `w` and some `bᵢ`.
    pub fn q(&self) -> &BTreeSet<u64> {
        &self.q
    }

    /// Primes of `b₁` not dividing `w`.
    pub fn q1(&self) -> &BTreeSet<u64> {
        &self.qi[0]
    }

    /// Primes of `b₂` not dividing `w`.
    pub fn q2(&self) -> &BTreeSet<u64> {
        &self.qi[1]
    }

    /// Primes of `b₃` not dividing `w`.
    pub fn q3(&self) -> &BTreeSet<u64> {
        &self.qi[2]
    }
}

fn prime_set(x: u64) -> BTreeSet<u64> {
    arith::factorize(x).expect("positive").primes().collect()
}

/// Decompose a triple satisfying (C₁); rejected otherwise.
pub fn decompose(t: &Triple) -> Result<TripleDecomposition, TripleError> {
    let [a1, a2, a3] = t.entries();
    let n = t.lcm();
    let cond = check_condition_c(t);
    if !cond.c1 {
        let l12 = arith::lcm(a1, a2).expect("validated");
        let l13 = arith::lcm(a1, a3).expect("validated");
        let l23 = arith::lcm(a2, a3).expect("validated");
        return Err(TripleError::ConditionC1Violated(l12, l13, l23, n));
    }
    let w = t.gcd();
    let b = [n / a1, n / a2, n / a3];

    // Structural identities guaranteed by (C₁): per prime, the two largest
    // valuations among the aᵢ both reach v(n).
    assert_eq!(
        b[0].checked_mul(b[1])
            .and_then(|x| x.checked_mul(b[2]))
            .and_then(|x| x.checked_mul(w)),
        Some(n),
        "decomposition identity n = b1 b2 b3 w must hold under (C1)"
    );
    assert_eq!(a1, b[1] * b[2] * w);
    assert_eq!(a2, b[0] * b[2] * w);
    assert_eq!(a3, b[0] * b[1] * w);
    assert_eq!(arith::gcd(b[0], b[1]), 1);
    assert_eq!(arith::gcd(b[0], b[2]), 1);
    assert_eq!(arith::gcd(b[1], b[2]), 1);

    let pw = prime_set(w);
    let pb: Vec<BTreeSet<u64>> = b.iter().map(|&x| prime_set(x)).collect();

    let mut p1 = pb[0].clone();
    p1.extend(pb[1].intersection(&pw));
    p1.extend(pb[2].intersection(&pw));
    let union_b: BTreeSet<u64> = pb.iter().flatten().copied().collect();
    let p0: BTreeSet<u64> = pw.difference(&union_b).copied().collect();
    let q: BTreeSet<u64> = pb
        .iter()
        .flat_map(|s| s.intersection(&pw))
        .copied()
        .collect();
    let qi = [
        pb[0].difference(&pw).copied().collect(),
        pb[1].difference(&pw).copied().collect(),
        pb[2].difference(&pw).copied().collect(),
    ];

    // P(b₁w) must split as P₁ ⊔ P₀.
    let b1w = prime_set(b[0] * w);
    let mut split = p1.clone();
    split.extend(&p0);
    assert_eq!(split, b1w, "P(b1 w) must equal P1 ⊔ P0");
    assert!(p1.is_disjoint(&p0));

    Ok(TripleDecomposition {
        n,
        w,
        b,
        p0,
        p1,
        q,
        qi,
    })
}

// ---------------------------------------------------------------------------
// Arithmetic-progression lemmas
// ---------------------------------------------------------------------------

/// Solutions `ρ` of `b | c + a·ρ` form one residue class mod `b` when
/// `gcd(a, b) = 1`; return its representative in `[0, b)`.
pub fn ap_solve(a: i128, b: u64, c: i128) -> Result<u64, TripleError> {
    if b == 0 {
        return Err(TripleError::ZeroModulus);
    }
    let bm = b as i128;
    let ar = a.rem_euclid(bm);
    let (g, inv, _) = arith::egcd(ar, bm);
    if g != 1 {
        return Err(TripleError::NotCoprime(a, bm));
    }
    // ρ ≡ -c · a⁻¹ (mod b)
    let rho = ((-c).rem_euclid(bm) * inv.rem_euclid(bm)).rem_euclid(bm);
    Ok(rho as u64)
}

/// A residue class `residue mod modulus` with `0 ≤ residue < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueClass {
    residue: u64,
    modulus: u64,
}

impl ResidueClass {
    /// Normalize `residue` into `[0, modulus)`.
    ///
    /// # Panics
    /// Panics when `modulus = 0`.
    pub fn new(residue: i128, modulus: u64) -> Self {
        assert!(modulus > 0, "residue classes need a positive modulus");
        ResidueClass {
            residue: residue.rem_euclid(modulus as i128) as u64,
            modulus,
        }
    }

    /// The canonical representative in `[0, modulus)`.
    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// The modulus.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Set membership.
    pub fn contains(&self, v: i128) -> bool {
        v.rem_euclid(self.modulus as i128) as u64 == self.residue
    }
}

impl std::fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// Intersect two residue classes with coprime moduli: by the Chinese
/// remainder theorem the intersection is a single class mod the product.
pub fn ap_intersect(a: &ResidueClass, b: &ResidueClass) -> Result<ResidueClass, TripleError> {
    if arith::gcd(a.modulus, b.modulus) != 1 {
        return Err(TripleError::NotCoprime(a.modulus as i128, b.modulus as i128));
    }
    let m = a
        .modulus
        .checked_mul(b.modulus)
        .ok_or(TripleError::Overflow)?;
    // r = ra + a_mod · t with t ≡ (rb − ra) · a_mod⁻¹ (mod b_mod)
    let am = a.modulus as i128;
    let bm = b.modulus as i128;
    let (g, inv, _) = arith::egcd(am.rem_euclid(bm), bm);
    debug_assert_eq!(g, 1);
    let t = ((b.residue as i128 - a.residue as i128).rem_euclid(bm) * inv.rem_euclid(bm))
        .rem_euclid(bm);
    Ok(ResidueClass::new(a.residue as i128 + am * t, m))
}

// ---------------------------------------------------------------------------
// Solutions of (D)
// ---------------------------------------------------------------------------

/// A candidate solution `(c₁, c₂, c₃)` of condition (D).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DSolution {
    /// Coefficient paired with `a₁`.
    pub c1: i128,
    /// Coefficient paired with `a₂`.
    pub c2: i128,
    /// Coefficient paired with `a₃`.
    pub c3: i128,
}

impl DSolution {
    /// Full invariant check against a triple: `Σ bᵢcᵢ = n`,
    /// `gcd(cᵢ, aᵢ) = 1`, and the reduced ranges
    /// `0 < c₁ < a₁`, `0 < c₂ < a₂`, `0 < |c₃| < a₃`.
    pub fn is_reduced_for(&self, t: &Triple) -> bool {
        let [a1, a2, a3] = t.entries();
        let n = t.lcm() as i128;
        let (b1, b2, b3) = ((n / a1 as i128), (n / a2 as i128), (n / a3 as i128));
        let sum_ok = b1 * self.c1 + b2 * self.c2 + b3 * self.c3 == n;
        let range_ok = 0 < self.c1
            && self.c1 < a1 as i128
            && 0 < self.c2
            && self.c2 < a2 as i128
            && self.c3 != 0
            && self.c3.abs() < a3 as i128;
        let coprime_ok = self.c1.gcd(&(a1 as i128)) == 1
            && self.c2.gcd(&(a2 as i128)) == 1
            && self.c3.gcd(&(a3 as i128)) == 1;
        sum_ok && range_ok && coprime_ok
    }
}

impl std::fmt::Display for DSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.c1, self.c2, self.c3)
    }
}

/// The trace of the constructive sieve for (D) at a fixed `c₁`:
/// a particular solution `(x₀, y₀)` of `b₂x + b₃y = b₁(a₁ − c₁)` and, for
/// each relevant prime of `b₁w`, the forbidden residue class of the scan
/// parameter `ρ` (where `c₂ = x₀ + ρb₃` and `c₃ = y₀ − ρb₂`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveState {
    c1: u64,
    x0: i128,
    y0: i128,
    modulus: u64,
    s_x: Vec<(u64, ResidueClass)>,
    s_y: Vec<(u64, ResidueClass)>,
}

impl SieveState {
    /// The chosen first coefficient.
    pub fn c1(&self) -> u64 {
        self.c1
    }

    /// Particular solution, `x` part (normalized into `[0, b₃)`).
    pub fn x0(&self) -> i128 {
        self.x0
    }

    /// Particular solution, `y` part.
    pub fn y0(&self) -> i128 {
        self.y0
    }

    /// The scan modulus `b₁w`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Forbidden classes coming from `p | c₂`, one per prime of `b₁w`
    /// outside `P(b₃)`.
    pub fn s_x(&self) -> &[(u64, ResidueClass)] {
        &self.s_x
    }

    /// Forbidden classes coming from `q | c₃`, one per prime of `b₁w`
    /// outside `P(b₂)`.
    pub fn s_y(&self) -> &[(u64, ResidueClass)] {
        &self.s_y
    }

    /// Is the scan value `ρ` forbidden by some stored class?
    pub fn is_bad(&self, rho: u64) -> bool {
        self.s_x
            .iter()
            .chain(&self.s_y)
            .any(|(_, class)| class.contains(rho as i128))
    }

    /// Group the stored classes by prime: primes contributing one
    /// distinct forbidden class, and primes contributing two.
    fn classified_primes(&self) -> (BTreeSet<u64>, BTreeSet<u64>) {
        let mut residues: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for (p, class) in self.s_x.iter().chain(&self.s_y) {
            residues.entry(*p).or_default().insert(class.residue());
        }
        let mut one = BTreeSet::new();
        let mut two = BTreeSet::new();
        for (p, rs) in residues {
            match rs.len() {
                1 => {
                    one.insert(p);
                }
                2 => {
                    two.insert(p);
                }
                _ => unreachable!("at most two classes are stored per prime"),
            }
        }
        (one, two)
    }

    /// Closed-form size of the forbidden set `T ⊆ [0, b₁w)`:
    /// `b₁w · (1 − Π_{one-class primes} (p−1)/p · Π_{two-class primes} (s−2)/s)`,
    /// evaluated exactly (every division is exact).
    pub fn t_size(&self) -> u64 {
        let (one, two) = self.classified_primes();
        let mut good = self.modulus as u128;
        for &p in one.iter().chain(&two) {
            good /= p as u128;
        }
        for &p in &one {
            good *= (p - 1) as u128;
        }
        for &s in &two {
            good *= (s - 2) as u128;
        }
        (self.modulus as u128 - good) as u64
    }

    /// Direct enumeration of the forbidden set (cost `O(b₁w · #classes)`).
    pub fn bad_residue_count(&self) -> u64 {
        (0..self.modulus).filter(|&rho| self.is_bad(rho)).count() as u64
    }
}

/// A constructive solution of (D) together with the sieve trace that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSolve {
    /// The reduced solution found.
    pub solution: DSolution,
    /// The sieve state it was scanned from.
    pub state: SieveState,
}

/// Constructively solve condition (D).
///
/// Deterministic procedure: take the smallest valid `c₁` (always 1),
/// solve the linear Diophantine equation `b₂x + b₃y = b₁(a₁ − c₁)` for a
/// particular solution with `x₀ ∈ [0, b₃)`, collect the forbidden residue
/// class of every relevant prime of `b₁w`, and scan `ρ = 0, 1, …` for the
/// first unforbidden value. Returns `None` exactly when condition (C)
/// fails. The returned solution always satisfies every [`DSolution`]
/// invariant (this is asserted), including the coprimality of `c₂` and
/// `c₃` to `b₁`.
pub fn solve_condition_d(t: &Triple) -> Option<SieveSolve> {
    let cond = check_condition_c(t);
    if !cond.c1 {
        return None;
    }
    let dec = decompose(t).expect("C1 verified above");
    let (w, [b1, b2, b3]) = (dec.w(), dec.b());
    let a1 = t.a1();

    let c1 = 1u64; // smallest value in (0, a₁) coprime to a₁
    let rhs = b1 as i128 * (a1 - c1) as i128;

    // particular solution with x₀ ∈ [0, b₃)
    let b3m = b3 as i128;
    let (g, inv, _) = arith::egcd(b2 as i128 % b3m.max(1), b3m.max(1));
    debug_assert_eq!(g, 1, "b2 and b3 are coprime");
    let x0 = if b3 == 1 {
        0
    } else {
        (rhs.rem_euclid(b3m) * inv.rem_euclid(b3m)).rem_euclid(b3m)
    };
    let y_num = rhs - b2 as i128 * x0;
    debug_assert_eq!(y_num % b3m, 0, "x0 solves the congruence mod b3");
    let y0 = y_num / b3m;

    let modulus = b1 * w;
    let mut s_x = Vec::new();
    let mut s_y = Vec::new();
    for p in prime_set(modulus) {
        if b3 % p != 0 {
            let rho = ap_solve(b3 as i128, p, x0).expect("p excluded from P(b3)");
            s_x.push((p, ResidueClass::new(rho as i128, p)));
        }
        if b2 % p != 0 {
            let rho = ap_solve(-(b2 as i128), p, y0).expect("p excluded from P(b2)");
            s_y.push((p, ResidueClass::new(rho as i128, p)));
        }
    }
    let state = SieveState {
        c1,
        x0,
        y0,
        modulus,
        s_x,
        s_y,
    };

    let rho = (0..modulus).find(|&rho| !state.is_bad(rho))?;
    let c2 = x0 + rho as i128 * b3 as i128;
    let c3 = y0 - rho as i128 * b2 as i128;
    let solution = DSolution {
        c1: c1 as i128,
        c2,
        c3,
    };
    assert_eq!(c2.gcd(&(b1 as i128)), 1, "output coprimality with b1");
    assert_eq!(c3.gcd(&(b1 as i128)), 1, "output coprimality with b1");
    assert!(
        solution.is_reduced_for(t),
        "sieve output must be a reduced solution"
    );
    Some(SieveSolve { solution, state })
}

/// Exhaustively scan the reduced box `0 < c₁ < a₁, 0 < c₂ < a₂,
/// |c₃| < a₃` for all solutions of `Σ bᵢcᵢ = n` with `gcd(cᵢ, aᵢ) = 1`
/// (for each `(c₁, c₂)` the equation pins `c₃`, so the scan is complete).
///
/// This is the module's independent brute-force oracle; it makes no use
/// of conditions (C₁)/(C₂) or the decomposition.
pub fn enumerate_reduced(t: &Triple) -> Vec<DSolution> {
    let [a1, a2, a3] = t.entries();
    let n = t.lcm();
    let (b1, b2, b3) = (n / a1, n / a2, n / a3);
    let mut out = Vec::new();
    for c1 in 1..a1 {
        if arith::gcd(c1, a1) != 1 {
            continue;
        }
        for c2 in 1..a2 {
            if arith::gcd(c2, a2) != 1 {
                continue;
            }
            let rem = n as i128 - b1 as i128 * c1 as i128 - b2 as i128 * c2 as i128;
            if rem % b3 as i128 != 0 {
                continue;
            }
            let c3 = rem / b3 as i128;
            if c3 != 0 && c3.abs() < a3 as i128 && c3.gcd(&(a3 as i128)) == 1 {
                out.push(DSolution {
                    c1: c1 as i128,
                    c2: c2 as i128,
                    c3,
                });
            }
        }
    }
    out
}

/// The two closed-form counts of reduced solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedCount {
    /// `φ(a₁)·b₁·w·Π_{P₁}((p−1)/p)·Π_{P₀}((s−2)/s)` — the product derived
    /// alongside the sieve; this is the count asserted against the
    /// brute-force oracle.
    pub proof_body: u128,
    /// `φ(n)·w·Π_{P₀}((s−2)/s)` — the shorter expression; it can differ
    /// from `proof_body` (by `Π_{q∈Q}((q−1)/q)`), and any input where the
    /// two disagree must be flagged, never silently reconciled.
    pub simplified: u128,
}

impl ReducedCount {
    /// Do the two formulas disagree on this input?
    pub fn discrepancy(&self) -> bool {
        self.proof_body != self.simplified
    }
}

/// Evaluate both closed-form counts of reduced solutions (exactly: every
/// division below is exact). Requires condition (C).
pub fn count_reduced(t: &Triple) -> Result<ReducedCount, TripleError> {
    let cond = check_condition_c(t);
    if !cond.holds() {
        return Err(TripleError::ConditionCViolated {
            c1: cond.c1,
            c2: cond.c2,
        });
    }
    let dec = decompose(t)?;
    let (n, w, b1) = (dec.n(), dec.w(), dec.b1());

    // proof-body product: φ(a₁) · b₁w · Π_{P₁}(p−1)/p · Π_{P₀}(s−2)/s
    let mut proof_body = arith::totient(t.a1()) as u128 * (b1 as u128 * w as u128);
    for &p in dec.p1().iter().chain(dec.p0()) {
        proof_body /= p as u128; // P₁ ⊔ P₀ = P(b₁w): the primes divide b₁w
    }
    for &p in dec.p1() {
        proof_body *= (p - 1) as u128;
    }
    for &s in dec.p0() {
        proof_body *= (s - 2) as u128;
    }

    // simplified form: φ(n) · w · Π_{P₀}(s−2)/s
    let mut simplified = arith::totient(n) as u128 * w as u128;
    for &s in dec.p0() {
        simplified /= s as u128; // P₀ ⊆ P(w)
    }
    for &s in dec.p0() {
        simplified *= (s - 2) as u128;
    }

    Ok(ReducedCount {
        proof_body,
        simplified,
    })
}

// ---------------------------------------------------------------------------
// Inclusion–exclusion
// ---------------------------------------------------------------------------

/// Cardinality of a union computed by the inclusion–exclusion formula
/// `|E₁ ∪ … ∪ E_k| = Σ|Eᵢ| − Σ|Eᵢ∩Eⱼ| + …` (never by direct union).
///
/// Cost is exponential in the number of sets.
pub fn inclusion_exclusion(sets: &[BTreeSet<i64>]) -> u64 {
    assert!(sets.len() <= 30, "inclusion-exclusion over too many sets");
    let mut total: i128 = 0;
    for mask in 1u32..(1 << sets.len()) {
        let mut iter = (0..sets.len()).filter(|&i| mask & (1 << i) != 0);
        let first = iter.next().expect("mask is nonzero");
        let mut inter = sets[first].clone();
        for i in iter {
            inter = inter.intersection(&sets[i]).copied().collect();
        }
        if mask.count_ones() % 2 == 1 {
            total += inter.len() as i128;
        } else {
            total -= inter.len() as i128;
        }
    }
    u64::try_from(total).expect("union cardinality is nonnegative")
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(a1: u64, a2: u64, a3: u64) -> Triple {
        Triple::new(a1, a2, a3).unwrap()
    }

    #[test]
    fn triple_construction() {
        assert_eq!(t(2, 3, 6).entries(), [2, 3, 6]);
        assert_eq!(Triple::new(1, 5, 5), Err(TripleError::EntryTooSmall(1)));
        assert_eq!(
            Triple::new(u64::MAX, u64::MAX - 1, 2),
            Err(TripleError::Overflow)
        );
        assert_eq!(t(6, 15, 10).lcm(), 30);
        assert_eq!(t(6, 15, 10).gcd(), 1);
        assert_eq!(t(4, 4, 2).gcd(), 2);
    }

    #[test]
    fn condition_c_frozen_values() {
        assert!(check_condition_c(&t(2, 3, 6)).holds());
        assert!(!check_condition_c(&t(2, 2, 2)).holds());
        assert!(check_condition_c(&t(5, 10, 2)).holds());
        assert!(check_condition_c(&t(4, 4, 2)).holds());

        // (2,2,2): the pairwise-lcm half holds, the 2-adic half fails
        let c = check_condition_c(&t(2, 2, 2));
        assert!(c.c1 && !c.c2);
        // (2,3,4): the pairwise-lcm half fails
        let c = check_condition_c(&t(2, 3, 4));
        assert!(!c.c1 && c.c2);
    }

    #[test]
    fn decompose_frozen_values() {
        let d = decompose(&t(2, 3, 6)).unwrap();
        assert_eq!((d.n(), d.w(), d.b()), (6, 1, [3, 2, 1]));
        assert_eq!(d.p1().iter().copied().collect::<Vec<_>>(), vec![3]);
        assert!(d.p0().is_empty());

        let d = decompose(&t(4, 4, 2)).unwrap();
        assert_eq!((d.n(), d.w(), d.b()), (4, 2, [1, 1, 2]));
        assert_eq!(d.p1().iter().copied().collect::<Vec<_>>(), vec![2]);
        assert!(d.p0().is_empty());
        assert_eq!(d.q().iter().copied().collect::<Vec<_>>(), vec![2]);

        let d = decompose(&t(3, 3, 3)).unwrap();
        assert_eq!((d.n(), d.w(), d.b()), (3, 3, [1, 1, 1]));
        assert!(d.p1().is_empty());
        assert_eq!(d.p0().iter().copied().collect::<Vec<_>>(), vec![3]);

        assert_eq!(
            decompose(&t(2, 3, 4)),
            Err(TripleError::ConditionC1Violated(6, 4, 12, 12))
        );
    }

    #[test]
    fn decompose_prime_sets_partition() {
        for a1 in 2..=20u64 {
            for a2 in 2..=20u64 {
                for a3 in 2..=20u64 {
                    let triple = t(a1, a2, a3);
                    let Ok(d) = decompose(&triple) else { continue };
                    // Q ⊔ (P₀) = P(w); Qᵢ ⊔ (P(bᵢ)∩P(w)) = P(bᵢ)
                    let pw = prime_set(d.w());
                    let mut qp0 = d.q().clone();
                    qp0.extend(d.p0());
                    assert_eq!(qp0, pw, "Q ⊔ P0 = P(w) at ({a1},{a2},{a3})");
                    for (qi, bi) in [
                        (d.q1(), d.b1()),
                        (d.q2(), d.b2()),
                        (d.q3(), d.b3()),
                    ] {
                        let pbi = prime_set(bi);
                        assert!(qi.is_subset(&pbi));
                        let shared: BTreeSet<u64> =
                            pbi.intersection(&pw).copied().collect();
                        let mut rebuilt = qi.clone();
                        rebuilt.extend(&shared);
                        assert_eq!(rebuilt, pbi);
                    }
                }
            }
        }
    }

    #[test]
    fn ap_solve_frozen_values() {
        assert_eq!(ap_solve(1, 5, 3), Ok(2));
        assert_eq!(ap_solve(3, 7, 1), Ok(2));
        assert_eq!(ap_solve(2, 4, 1), Err(TripleError::NotCoprime(2, 4)));
        assert_eq!(ap_solve(1, 0, 1), Err(TripleError::ZeroModulus));
        // negative slope, as used by the sieve's second family
        let rho = ap_solve(-6, 5, 13).unwrap();
        assert_eq!((13 - 6 * rho as i128).rem_euclid(5), 0);
        assert!(rho < 5);
    }

    #[test]
    fn ap_intersect_frozen_values() {
        let c = |r: i128, m: u64| ResidueClass::new(r, m);
        assert_eq!(ap_intersect(&c(1, 3), &c(2, 5)), Ok(c(7, 15)));
        assert_eq!(ap_intersect(&c(0, 2), &c(1, 3)), Ok(c(4, 6)));
        assert_eq!(
            ap_intersect(&c(0, 2), &c(0, 2)),
            Err(TripleError::NotCoprime(2, 2))
        );
    }

    proptest! {
        #[test]
        fn ap_intersect_is_set_intersection(
            ra in 0i128..30,
            ma in 1u64..30,
            rb in 0i128..30,
            mb in 1u64..30,
        ) {
            let a = ResidueClass::new(ra, ma);
            let b = ResidueClass::new(rb, mb);
            match ap_intersect(&a, &b) {
                Ok(c) => {
                    prop_assert_eq!(c.modulus(), ma * mb);
                    for v in -150i128..150 {
                        prop_assert_eq!(c.contains(v), a.contains(v) && b.contains(v));
                    }
                }
                Err(TripleError::NotCoprime(x, y)) => {
                    prop_assert_eq!((x, y), (ma as i128, mb as i128));
                    prop_assert!(arith::gcd(ma, mb) != 1);
                }
                Err(e) => prop_assert!(false, "unexpected error {e:?}"),
            }
        }

        #[test]
        fn ap_solve_postcondition(a in -60i128..60, b in 1u64..60, c in -60i128..60) {
            match ap_solve(a, b, c) {
                Ok(rho) => {
                    prop_assert!(rho < b);
                    prop_assert_eq!((c + a * rho as i128).rem_euclid(b as i128), 0);
                }
                Err(TripleError::NotCoprime(..)) => {
                    prop_assert!(arith::egcd(a, b as i128).0 != 1);
                }
                Err(e) => prop_assert!(false, "unexpected error {e:?}"),
            }
        }
    }

    #[test]
    fn sieve_frozen_solutions() {
        let s = solve_condition_d(&t(2, 3, 6)).unwrap();
        assert_eq!(s.solution, DSolution { c1: 1, c2: 1, c3: 1 });
        assert_eq!(s.state.modulus(), 3);
        assert_eq!(s.state.t_size(), 1);

        let s = solve_condition_d(&t(3, 3, 3)).unwrap();
        assert_eq!(s.solution, DSolution { c1: 1, c2: 1, c3: 1 });
        assert_eq!(s.state.t_size(), 2);

        let s = solve_condition_d(&t(4, 4, 2)).unwrap();
        assert_eq!(s.solution, DSolution { c1: 1, c2: 1, c3: 1 });
        assert_eq!(s.state.t_size(), 1);

        let s = solve_condition_d(&t(6, 15, 10)).unwrap();
        assert_eq!(s.solution, DSolution { c1: 1, c2: 2, c3: 7 });

        assert_eq!(solve_condition_d(&t(2, 2, 2)), None);
        assert_eq!(solve_condition_d(&t(2, 3, 4)), None);
    }

    #[test]
    fn enumerate_frozen_values() {
        let sols = enumerate_reduced(&t(2, 3, 6));
        assert_eq!(
            sols,
            vec![
                DSolution { c1: 1, c2: 1, c3: 1 },
                DSolution { c1: 1, c2: 2, c3: -1 },
            ]
        );
        let sols = enumerate_reduced(&t(3, 3, 3));
        assert_eq!(
            sols,
            vec![
                DSolution { c1: 1, c2: 1, c3: 1 },
                DSolution { c1: 2, c2: 2, c3: -1 },
            ]
        );
        assert!(enumerate_reduced(&t(2, 2, 2)).is_empty());
    }

    #[test]
    fn count_frozen_values() {
        let c = count_reduced(&t(2, 3, 6)).unwrap();
        assert_eq!((c.proof_body, c.simplified), (2, 2));
        assert!(!c.discrepancy());

        let c = count_reduced(&t(3, 3, 3)).unwrap();
        assert_eq!((c.proof_body, c.simplified), (2, 2));

        // the two closed forms disagree here; the brute-force count is 2
        let c = count_reduced(&t(4, 4, 2)).unwrap();
        assert_eq!((c.proof_body, c.simplified), (2, 4));
        assert!(c.discrepancy());
        assert_eq!(enumerate_reduced(&t(4, 4, 2)).len(), 2);

        assert_eq!(
            count_reduced(&t(2, 2, 2)),
            Err(TripleError::ConditionCViolated { c1: true, c2: false })
        );
        assert!(count_reduced(&t(2, 3, 4)).is_err());
    }

    /// The central equivalence and counting sweep: for every triple with
    /// entries ≤ 20, condition (C) ⟺ the sieve finds a solution ⟺ the
    /// reduced box is nonempty; the sieve output lies in the enumerated
    /// list; the proof-body count matches the enumeration; and the sieve
    /// trace's closed-form |T| matches direct enumeration and
    /// inclusion–exclusion.
    #[test]
    fn equivalence_and_counting_sweep() {
        for a1 in 2..=20u64 {
            for a2 in 2..=20u64 {
                for a3 in 2..=20u64 {
                    let triple = t(a1, a2, a3);
                    let cond = check_condition_c(&triple);
                    let solved = solve_condition_d(&triple);
                    let listed = enumerate_reduced(&triple);
                    assert_eq!(
                        cond.holds(),
                        solved.is_some(),
                        "C vs sieve at ({a1},{a2},{a3})"
                    );
                    assert_eq!(
                        cond.holds(),
                        !listed.is_empty(),
                        "C vs box at ({a1},{a2},{a3})"
                    );
                    for sol in &listed {
                        assert!(sol.is_reduced_for(&triple));
                    }
                    if let Some(s) = solved {
                        assert!(
                            listed.contains(&s.solution),
                            "sieve output enumerated at ({a1},{a2},{a3})"
                        );
                        let count = count_reduced(&triple).unwrap();
                        assert_eq!(
                            count.proof_body,
                            listed.len() as u128,
                            "count formula at ({a1},{a2},{a3})"
                        );
                        // sieve classification agrees with the decomposition
                        let dec = decompose(&triple).unwrap();
                        let (one, two) = s.state.classified_primes();
                        assert_eq!(&one, dec.p1(), "P1 at ({a1},{a2},{a3})");
                        assert_eq!(&two, dec.p0(), "P0 at ({a1},{a2},{a3})");
                        // |T|: closed form vs direct scan vs inclusion–exclusion
                        let direct = s.state.bad_residue_count();
                        assert_eq!(s.state.t_size(), direct, "T at ({a1},{a2},{a3})");
                        let class_sets: Vec<BTreeSet<i64>> = s
                            .state
                            .s_x()
                            .iter()
                            .chain(s.state.s_y())
                            .map(|(_, class)| {
                                (0..s.state.modulus())
                                    .filter(|&rho| class.contains(rho as i128))
                                    .map(|rho| rho as i64)
                                    .collect()
                            })
                            .collect();
                        assert_eq!(inclusion_exclusion(&class_sets), direct);
                    }
                }
            }
        }
    }

    /// The C/D verdict must not depend on the labeling of the entries.
    #[test]
    fn verdict_invariant_under_permutations() {
        for a1 in 2..=12u64 {
            for a2 in 2..=12u64 {
                for a3 in 2..=12u64 {
                    let base = check_condition_c(&t(a1, a2, a3)).holds();
                    for [x, y, z] in [
                        [a1, a3, a2],
                        [a2, a1, a3],
                        [a2, a3, a1],
                        [a3, a1, a2],
                        [a3, a2, a1],
                    ] {
                        let perm = t(x, y, z);
                        assert_eq!(base, check_condition_c(&perm).holds());
                        assert_eq!(base, solve_condition_d(&perm).is_some());
                        assert_eq!(base, !enumerate_reduced(&perm).is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn inclusion_exclusion_frozen_values() {
        let s = |vs: &[i64]| vs.iter().copied().collect::<BTreeSet<i64>>();
        assert_eq!(inclusion_exclusion(&[s(&[1, 2]), s(&[2, 3])]), 3);
        assert_eq!(inclusion_exclusion(&[s(&[1]), s(&[2]), s(&[3])]), 3);
        assert_eq!(inclusion_exclusion(&[s(&[1, 2, 3]), s(&[2])]), 3);
        assert_eq!(inclusion_exclusion(&[]), 0);
    }

    proptest! {
        #[test]
        fn inclusion_exclusion_matches_direct_union(
            sets in proptest::collection::vec(
                proptest::collection::btree_set(-10i64..10, 0..6),
                0..6,
            )
        ) {
            let direct: BTreeSet<i64> = sets.iter().flatten().copied().collect();
            prop_assert_eq!(inclusion_exclusion(&sets), direct.len() as u64);
        }
    }
}
