//! Exact element algebra of the finite dihedral group
//! `D_n = ⟨g, s | gⁿ = s² = 1, sgs⁻¹ = g⁻¹⟩` for `n ≥ 3`:
//! multiplication, orders, involution classes, counting conjugacy classes
//! of cyclic subgroups, and the constructive bridge from a triple
//! satisfying condition (C) to three non-central involutions whose
//! pairwise products realize the prescribed orders.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith;
use crate::triples::{check_condition_c, decompose, solve_condition_d, Triple};

/// Errors raised by the dihedral layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DihedralError {
    /// Binary operations need both elements in the same group.
    #[error("elements live in different dihedral groups (n = {0} vs n = {1})")]
    MismatchedGroups(u64, u64),
    /// No involution triple exists when condition (C) fails.
    #[error("condition C fails (C1={c1}, C2={c2}); no involution triple exists")]
    ConditionCViolated {
        /// Whether the pairwise-lcm condition held.
        c1: bool,
        /// Whether the 2-adic condition held.
        c2: bool,
    },
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// The element `gᵏ sᵉ` of `D_n` in normal form (`0 ≤ k < n`, `e ∈ {0,1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    n: u64,
    k: u64,
    refl: bool,
}

impl DihedralElement {
    /// The element `gᵏ` or `gᵏs` of `D_n`; `k` is reduced mod `n`.
    ///
    /// # Panics
    /// Panics when `n < 3` (smaller parameters give abelian groups that
    /// this module deliberately excludes).
    pub fn new(n: u64, k: i128, refl: bool) -> Self {
        assert!(n >= 3, "dihedral groups are handled for n >= 3");
        DihedralElement {
            n,
            k: k.rem_euclid(n as i128) as u64,
            refl,
        }
    }

    /// The identity of `D_n`.
    pub fn identity(n: u64) -> Self {
        Self::new(n, 0, false)
    }

    /// The rotation `gᵏ`.
    pub fn rotation(n: u64, k: i128) -> Self {
        Self::new(n, k, false)
    }

    /// The reflection `gᵏs`.
    pub fn reflection(n: u64, k: i128) -> Self {
        Self::new(n, k, true)
    }

    /// The group parameter `n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The rotation exponent `k` of the normal form `gᵏsᵉ`.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Is this a reflection (`e = 1`)?
    pub fn is_reflection(&self) -> bool {
        self.refl
    }

    /// Is this the identity?
    pub fn is_identity(&self) -> bool {
        self.k == 0 && !self.refl
    }

    /// Group product: `(k₁,e₁)·(k₂,e₂) = (k₁ + (−1)^{e₁}k₂ mod n, e₁⊕e₂)`.
    pub fn mul(&self, other: &Self) -> Result<Self, DihedralError> {
        if self.n != other.n {
            return Err(DihedralError::MismatchedGroups(self.n, other.n));
        }
        let k2 = if self.refl {
            -(other.k as i128)
        } else {
            other.k as i128
        };
        Ok(Self::new(self.n, self.k as i128 + k2, self.refl ^ other.refl))
    }

    /// Group inverse: reflections are their own inverses; `(gᵏ)⁻¹ = g⁻ᵏ`.
    pub fn inv(&self) -> Self {
        if self.refl {
            *self
        } else {
            Self::new(self.n, -(self.k as i128), false)
        }
    }

    /// Integer power (closed form; negative exponents allowed).
    pub fn pow(&self, e: i64) -> Self {
        if self.refl {
            if e.rem_euclid(2) == 1 {
                *self
            } else {
                Self::identity(self.n)
            }
        } else {
            Self::new(self.n, self.k as i128 * e as i128, false)
        }
    }

    /// Smallest `m ≥ 1` with `xᵐ = 1`: reflections have order 2,
    /// `gᵏ` has order `n/gcd(n, k)`.
    pub fn order(&self) -> u64 {
        if self.refl {
            2
        } else {
            self.n / arith::gcd(self.n, self.k)
        }
    }

    /// Is this an involution (order exactly 2)?
    pub fn is_involution(&self) -> bool {
        self.order() == 2
    }

    /// Does this element commute with everything? (identity; and `g^{n/2}`
    /// when `n` is even — reflections are never central for `n ≥ 3`)
    pub fn is_central(&self) -> bool {
        !self.refl && (2 * self.k) % self.n == 0
    }
}

impl std::fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.k, self.refl) {
            (0, false) => write!(f, "1"),
            (0, true) => write!(f, "s"),
            (k, false) => write!(f, "g^{k}"),
            (k, true) => write!(f, "g^{k} s"),
        }
    }
}

// ---------------------------------------------------------------------------
// Involution classes
// ---------------------------------------------------------------------------

/// The involutions of `D_n` organized by conjugacy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionClasses {
    /// Conjugacy classes of reflections: one class of size `n` for odd
    /// `n`; for even `n` two classes of size `n/2` (even rotation
    /// exponents first, then odd).
    pub reflection_classes: Vec<Vec<DihedralElement>>,
    /// The central involution `g^{n/2}`, present exactly when `n` is even.
    pub central: Option<DihedralElement>,
}

/// Conjugacy classes of involutions in `D_n`.
///
/// # Panics
/// Panics when `n < 3`.
pub fn involution_classes(n: u64) -> InvolutionClasses {
    assert!(n >= 3, "dihedral groups are handled for n >= 3");
    let refl = |k: u64| DihedralElement::reflection(n, k as i128);
    if n % 2 == 1 {
        InvolutionClasses {
            reflection_classes: vec![(0..n).map(refl).collect()],
            central: None,
        }
    } else {
        InvolutionClasses {
            reflection_classes: vec![
                (0..n).step_by(2).map(refl).collect(),
                (1..n).step_by(2).map(refl).collect(),
            ],
            central: Some(DihedralElement::rotation(n, (n / 2) as i128)),
        }
    }
}

/// Number of conjugacy classes of cyclic subgroups of `D_n`:
/// `τ(n) + 1` for odd `n`, `τ(n) + 2` for even `n` (`τ` = divisor count).
/// One class per divisor from `⟨g⟩`, plus one or two classes of
/// order-2 reflection subgroups.
///
/// # Panics
/// Panics when `n < 3`.
pub fn cyclic_subgroup_class_count(n: u64) -> u64 {
    assert!(n >= 3, "dihedral groups are handled for n >= 3");
    let tau = arith::factorize(n).expect("n >= 3").divisor_count();
    tau + if n % 2 == 0 { 2 } else { 1 }
}

// ---------------------------------------------------------------------------
// Generated subgroups
// ---------------------------------------------------------------------------

/// A concrete subgroup of some `D_n`, closed under multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    n: u64,
    members: BTreeSet<DihedralElement>,
}

impl Subgroup {
    /// The ambient group parameter.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The subgroup order.
    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    /// Membership test.
    pub fn contains(&self, e: &DihedralElement) -> bool {
        self.members.contains(e)
    }
}

/// Close a nonempty list of elements of a common `D_n` under
/// multiplication.
///
/// # Panics
/// Panics on an empty list, mismatched group parameters, or `n > 10⁶`
/// (the closure is materialized element by element).
pub fn generated_subgroup(elems: &[DihedralElement]) -> Subgroup {
    let n = elems.first().expect("at least one generator").n();
    assert!(
        elems.iter().all(|e| e.n() == n),
        "generators must share a dihedral group"
    );
    assert!(n <= 1_000_000, "subgroup enumeration capped at n = 10^6");
    let mut members: BTreeSet<DihedralElement> = BTreeSet::new();
    members.insert(DihedralElement::identity(n));
    let mut frontier: Vec<DihedralElement> = vec![DihedralElement::identity(n)];
    while let Some(x) = frontier.pop() {
        for gen in elems {
            let y = x.mul(gen).expect("common n");
            if members.insert(y) {
                frontier.push(y);
            }
        }
    }
    Subgroup { n, members }
}

// ---------------------------------------------------------------------------
// Involution triples from condition (C)
// ---------------------------------------------------------------------------

/// Three non-central involutions of `D_n` (`n` = lcm of the triple) whose
/// pairwise products realize the orders of the triple entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionTriple {
    /// `s₁ = s`.
    pub s1: DihedralElement,
    /// `s₂ = s·g^{b₂c₂′}`.
    pub s2: DihedralElement,
    /// `s₃ = s·g^{b₃c₃}`.
    pub s3: DihedralElement,
    /// The sign-adjusted solution `(c₁, c₂′, c₃)` with
    /// `b₁c₁ − b₂c₂′ + b₃c₃ ≡ 0 (mod n)` used in the exponents.
    pub adjusted: (i128, i128, i128),
}

impl InvolutionTriple {
    /// `(order(s₁s₂), order(s₁s₃), order(s₂s₃))`, guaranteed to equal
    /// `(a₂, a₃, a₁)`.
    pub fn product_orders(&self) -> (u64, u64, u64) {
        let o = |x: &DihedralElement, y: &DihedralElement| {
            x.mul(y).expect("common n").order()
        };
        (o(&self.s1, &self.s2), o(&self.s1, &self.s3), o(&self.s2, &self.s3))
    }
}

/// Construct three non-central involutions realizing a C-triple.
///
/// Takes the sieve's reduced solution of `Σbᵢcᵢ = n`, flips the sign of
/// `c₂` (mod `a₂`, preserving coprimality) so that
/// `b₁c₁ − b₂c₂′ + b₃c₃ ≡ 0 (mod n)`, and sets `s₁ = s`,
/// `s₂ = s·g^{b₂c₂′}`, `s₃ = s·g^{b₃c₃}`. Guarantees (all asserted):
/// each `sᵢ` is a non-central involution; `order(s₁s₂) = a₂`,
/// `order(s₁s₃) = a₃`, `order(s₂s₃) = a₁`; and every pair of the three
/// product rotations already generates all of `⟨g⟩`.
pub fn involution_triple(t: &Triple) -> Result<InvolutionTriple, DihedralError> {
    let Some(solved) = solve_condition_d(t) else {
        let cond = check_condition_c(t);
        return Err(DihedralError::ConditionCViolated {
            c1: cond.c1,
            c2: cond.c2,
        });
    };
    let dec = decompose(t).expect("condition C implies C1");
    let n = dec.n();
    assert!(n >= 3, "C-triples always have lcm >= 3");
    let (b1, b2, b3) = (dec.b1() as i128, dec.b2() as i128, dec.b3() as i128);
    let sol = solved.solution;
    let c2p = (-sol.c2).rem_euclid(t.a2() as i128);
    let nn = n as i128;
    assert_eq!(
        (b1 * sol.c1 - b2 * c2p + b3 * sol.c3).rem_euclid(nn),
        0,
        "sign-adjusted relation must hold mod n"
    );

    let g = |e: i128| DihedralElement::rotation(n, e);
    let s = DihedralElement::reflection(n, 0);
    let s1 = s;
    let s2 = s.mul(&g(b2 * c2p)).expect("common n");
    let s3 = s.mul(&g(b3 * sol.c3)).expect("common n");

    for si in [&s1, &s2, &s3] {
        assert!(si.is_involution() && !si.is_central());
    }
    let triple = InvolutionTriple {
        s1,
        s2,
        s3,
        adjusted: (sol.c1, c2p, sol.c3),
    };
    assert_eq!(
        triple.product_orders(),
        (t.a2(), t.a3(), t.a1()),
        "pairwise product orders must realize the triple"
    );
    // each pair of product rotations generates ⟨g⟩
    let k12 = (b2 * c2p).rem_euclid(nn) as u64;
    let k13 = (b3 * sol.c3).rem_euclid(nn) as u64;
    let k23 = (b3 * sol.c3 - b2 * c2p).rem_euclid(nn) as u64;
    for (x, y) in [(k12, k13), (k12, k23), (k13, k23)] {
        assert_eq!(
            arith::gcd(arith::gcd(x, y), n),
            1,
            "pairwise rotations must generate the full cyclic subgroup"
        );
    }
    Ok(triple)
}

/// Exhaustively search `D_n` (`n` = lcm of the triple) for three
/// non-central involutions with `order(s₁s₂) = a₂`, `order(s₁s₃) = a₃`,
/// `order(s₂s₃) = a₁` and all pairs of product rotations generating
/// `⟨g⟩`. Conjugating a witness moves `s₁` to `s` or `gs` while
/// preserving orders and generation, so scanning those two anchors with
/// order-constrained partners is exhaustive up to conjugacy. Returns
/// `None` when the lcm is below 3 (those dihedral groups are abelian, so
/// they have no non-central involutions at all).
pub fn search_involution_triple(
    t: &Triple,
) -> Option<(DihedralElement, DihedralElement, DihedralElement)> {
    let n = t.lcm();
    if n < 3 {
        return None;
    }
    let [a1, a2, a3] = t.entries();
    let (b2, b3) = (n / a2, n / a3);
    let nn = n as i128;
    // sᵢ = g^{uᵢ}s; order(g^{u−v}) = aₖ ⟺ u − v ∈ bₖ·(units mod aₖ)
    for u1 in 0..=1i128.min(nn - 1) {
        for t2 in (1..=a2).filter(|&t2| arith::gcd(t2, a2) == 1) {
            let u2 = (u1 - (b2 * t2) as i128).rem_euclid(nn);
            for t3 in (1..=a3).filter(|&t3| arith::gcd(t3, a3) == 1) {
                let u3 = (u1 - (b3 * t3) as i128).rem_euclid(nn);
                let d23 = (u2 - u3).rem_euclid(nn) as u64;
                if n / arith::gcd(n, d23) != a1 {
                    continue;
                }
                let d12 = (u1 - u2).rem_euclid(nn) as u64;
                let d13 = (u1 - u3).rem_euclid(nn) as u64;
                let generates = [(d12, d13), (d12, d23), (d13, d23)]
                    .into_iter()
                    .all(|(x, y)| arith::gcd(arith::gcd(x, y), n) == 1);
                if generates {
                    return Some((
                        DihedralElement::reflection(n, u1),
                        DihedralElement::reflection(n, u2),
                        DihedralElement::reflection(n, u3),
                    ));
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
