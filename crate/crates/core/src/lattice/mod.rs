//! The affine group `Λ ⋊ D_n`: the free abelian lattice of rank `φ(n)`
//! extended by the dihedral point group acting through its faithful
//! integer representation.
//!
//! Elements are pairs `(v, h)` multiplying by
//! `(v₁, h₁)(v₂, h₂) = (v₁ + M(h₁)v₂, h₁h₂)` where `M` is the
//! degree-`φ(n)` matrix model of `D_n`. The submodules provide the
//! three standard involutive generators, replayable word certificates
//! for the membership chain that proves they generate the whole group,
//! and an exact verifier computing the index of the generated
//! translation sublattice.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::Lazy;
use std::sync::Mutex;
use thiserror::Error;

use crate::arith::{self, IntMatrix};
use crate::dihedral::DihedralElement;
use crate::repr::{build_faithful_rep, RepMatrixPair};
use crate::triples::TripleError;

mod generators;
mod verify;
mod word;

pub use generators::{standard_generators, GeneratorData};
pub use verify::{verify_generation, GenerationReport, PrimeCheck, Verdict};
pub use word::{
    evaluate_word, generation_witnesses, parse_word, word_to_string, WordCertificate, WordToken,
};

/// Errors raised by the affine-group layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    /// The two elements live over different group parameters.
    #[error("elements live over different group parameters: {0} vs {1}")]
    MismatchedGroups(u64, u64),
    /// A translation vector of the wrong length was supplied.
    #[error("translation vector has length {got}, expected {expected}")]
    WrongVectorLength {
        /// Required length `φ(n)`.
        expected: usize,
        /// Supplied length.
        got: usize,
    },
    /// The underlying triple failed validation.
    #[error(transparent)]
    Triple(#[from] TripleError),
    /// The triple does not satisfy condition (C).
    #[error("the triple must satisfy condition (C): C1={c1}, C2={c2}")]
    ConditionViolated {
        /// Pairwise-lcm condition.
        c1: bool,
        /// 2-adic condition.
        c2: bool,
    },
    /// The geometric-sum steps of the membership chain need `q₁ ≥ 2`
    /// and `r₁ ≥ 2`.
    #[error(
        "degenerate labeling: the geometric sums need q1 >= 2 and r1 >= 2 (got q1={q1}, r1={r1})"
    )]
    DegenerateLabeling {
        /// `n/q` for the labeled triple.
        q1: u64,
        /// `n/r` for the labeled triple.
        r1: u64,
    },
    /// A word string contained an unrecognized token.
    #[error("unknown word token `{0}` (expected s1, s2 or s3, optionally with ^-1)")]
    UnknownToken(String),
}

static REP_CACHE: Lazy<Mutex<HashMap<u64, Arc<RepMatrixPair>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

static POINT_MATRIX_CACHE: Lazy<Mutex<HashMap<(u64, u64, bool), Arc<IntMatrix>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The cached faithful representation for level `n`.
pub(crate) fn faithful_rep(n: u64) -> Arc<RepMatrixPair> {
    let mut cache = REP_CACHE.lock().expect("rep cache poisoned");
    cache
        .entry(n)
        .or_insert_with(|| {
            Arc::new(build_faithful_rep(n).expect("dihedral elements guarantee n >= 3"))
        })
        .clone()
}

/// The matrix `M(h)` of a point-group element, memoized per `(n, k, refl)`.
pub(crate) fn point_matrix(h: &DihedralElement) -> Arc<IntMatrix> {
    let key = (h.n(), h.k(), h.is_reflection());
    {
        let cache = POINT_MATRIX_CACHE.lock().expect("matrix cache poisoned");
        if let Some(m) = cache.get(&key) {
            return m.clone();
        }
    }
    let rep = faithful_rep(h.n());
    let m = Arc::new(rep.matrix_of(h).expect("matching group parameter"));
    let mut cache = POINT_MATRIX_CACHE.lock().expect("matrix cache poisoned");
    cache.entry(key).or_insert(m).clone()
}

/// An element `(v, h)` of `Λ ⋊ D_n`: an integer translation vector of
/// length `φ(n)` together with a dihedral point part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    v: Vec<BigInt>,
    h: DihedralElement,
}

impl AffineElement {
    /// Build an element, validating the vector length against `φ(n)`.
    pub fn new(v: Vec<BigInt>, h: DihedralElement) -> Result<Self, LatticeError> {
        let expected = arith::totient(h.n()) as usize;
        if v.len() != expected {
            return Err(LatticeError::WrongVectorLength {
                expected,
                got: v.len(),
            });
        }
        Ok(AffineElement { v, h })
    }

    /// The identity element of level `n`.
    pub fn identity(n: u64) -> Self {
        AffineElement {
            v: vec![BigInt::zero(); arith::totient(n) as usize],
            h: DihedralElement::identity(n),
        }
    }

    /// A pure translation `(v, 1)`.
    pub fn translation(n: u64, v: Vec<BigInt>) -> Result<Self, LatticeError> {
        AffineElement::new(v, DihedralElement::identity(n))
    }

    /// A pure point-group element `(0, h)`.
    pub fn point(h: DihedralElement) -> Self {
        AffineElement {
            v: vec![BigInt::zero(); arith::totient(h.n()) as usize],
            h,
        }
    }

    /// The group parameter `n`.
    pub fn n(&self) -> u64 {
        self.h.n()
    }

    /// The translation part.
    pub fn v(&self) -> &[BigInt] {
        &self.v
    }

    /// The point part.
    pub fn h(&self) -> &DihedralElement {
        &self.h
    }

    /// Is this the identity?
    pub fn is_identity(&self) -> bool {
        self.h.is_identity() && self.v.iter().all(Zero::is_zero)
    }

    /// Is this a pure translation `(v, 1)`?
    pub fn is_translation(&self) -> bool {
        self.h.is_identity()
    }

    /// Semidirect product `(v₁, h₁)(v₂, h₂) = (v₁ + M(h₁)v₂, h₁h₂)`.
    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.n() != other.n() {
            return Err(LatticeError::MismatchedGroups(self.n(), other.n()));
        }
        let m = point_matrix(&self.h);
        let mut v = m.mul_vec(&other.v);
        for (vi, si) in v.iter_mut().zip(&self.v) {
            *vi += si;
        }
        let h = self.h.mul(&other.h).expect("same group parameter");
        Ok(AffineElement { v, h })
    }

    /// Inverse `(v, h)⁻¹ = (−M(h⁻¹)v, h⁻¹)`.
    pub fn inv(&self) -> Self {
        let hinv = self.h.inv();
        let m = point_matrix(&hinv);
        let v = m.mul_vec(&self.v).into_iter().map(|x| -x).collect();
        AffineElement { v, h: hinv }
    }

    /// Integer power (repeated multiplication; negative exponents via
    /// the inverse).
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = AffineElement::identity(self.n());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base).expect("same group parameter");
        }
        acc
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "([")?;
        for (i, x) in self.v.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]; {})", self.h)
    }
}

/// The order of an affine element: finite or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineOrder {
    /// The element has this finite order.
    Finite(u64),
    /// No positive power is the identity.
    Infinite,
}

impl fmt::Display for AffineOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineOrder::Finite(k) => write!(f, "{k}"),
            AffineOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// The order of `(v, h)`: with `f` the order of `h`, it is `f` exactly
/// when `Σ_{j<f} M(h)ʲ·v = 0` and infinite otherwise. For a nontrivial
/// rotation `h` the sum always vanishes (its eigenvalues are roots of
/// unity `≠ 1`, which are annihilated by `1 + X + … + X^{f−1}`), so the
/// order equals that of the point part regardless of `v`.
pub fn affine_order(x: &AffineElement) -> AffineOrder {
    let f = x.h().order();
    let m = point_matrix(x.h());
    let mut sum = x.v.clone();
    let mut cur = x.v.clone();
    for _ in 1..f {
        cur = m.mul_vec(&cur);
        for (si, ci) in sum.iter_mut().zip(&cur) {
            *si += ci;
        }
    }
    if sum.iter().all(Zero::is_zero) {
        AffineOrder::Finite(f)
    } else {
        AffineOrder::Infinite
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vec_of(entries: &[i64]) -> Vec<BigInt> {
        entries.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn elem(n: u64, v: &[i64], k: i128, refl: bool) -> AffineElement {
        AffineElement::new(vec_of(v), DihedralElement::new(n, k, refl)).unwrap()
    }

    #[test]
    fn construction_and_validation() {
        // φ(6) = 2
        assert!(AffineElement::new(vec_of(&[1, 2]), DihedralElement::identity(6)).is_ok());
        assert_eq!(
            AffineElement::new(vec_of(&[1, 2, 3]), DihedralElement::identity(6)),
            Err(LatticeError::WrongVectorLength {
                expected: 2,
                got: 3
            })
        );
        assert!(AffineElement::identity(6).is_identity());
    }

    #[test]
    fn translations_add_and_reflections_square() {
        let t1 = elem(6, &[1, 2], 0, false);
        let t2 = elem(6, &[5, -3], 0, false);
        let sum = t1.mul(&t2).unwrap();
        assert_eq!(sum, elem(6, &[6, -1], 0, false));
        // (0, s)·(0, s) = identity
        let s = AffineElement::point(DihedralElement::reflection(6, 0));
        assert!(s.mul(&s).unwrap().is_identity());
        // mismatched levels rejected
        let other = AffineElement::identity(5);
        assert_eq!(
            t1.mul(&other),
            Err(LatticeError::MismatchedGroups(6, 5))
        );
    }

    proptest! {
        #[test]
        fn group_axioms(
            n in 3u64..30,
            raw in proptest::collection::vec(-9i64..10, 3 * 30),
            k in proptest::collection::vec(0i128..60, 3),
            refl in proptest::collection::vec(proptest::bool::ANY, 3),
        ) {
            let phi = arith::totient(n) as usize;
            let mk = |i: usize| {
                elem(n, &raw[i * phi..(i + 1) * phi].to_vec(), k[i], refl[i])
            };
            let (x, y, z) = (mk(0), mk(1), mk(2));
            // associativity
            prop_assert_eq!(
                x.mul(&y).unwrap().mul(&z).unwrap(),
                x.mul(&y.mul(&z).unwrap()).unwrap()
            );
            // identity and inverses
            let id = AffineElement::identity(n);
            prop_assert_eq!(x.mul(&id).unwrap(), x.clone());
            prop_assert_eq!(id.mul(&x).unwrap(), x.clone());
            prop_assert!(x.mul(&x.inv()).unwrap().is_identity());
            prop_assert!(x.inv().mul(&x).unwrap().is_identity());
        }
    }

    #[test]
    fn order_frozen_examples() {
        // (0, g) at level n has order n
        for n in [3u64, 4, 6, 12] {
            let g = AffineElement::point(DihedralElement::rotation(n, 1));
            assert_eq!(affine_order(&g), AffineOrder::Finite(n));
        }
        // a nonzero pure translation has infinite order
        let t = elem(6, &[1, 0], 0, false);
        assert_eq!(affine_order(&t), AffineOrder::Infinite);
        // the identity has order 1
        assert_eq!(
            affine_order(&AffineElement::identity(6)),
            AffineOrder::Finite(1)
        );
    }

    proptest! {
        /// For every nontrivial rotation point part the order equals the
        /// point order no matter the translation; for reflections it is 2
        /// exactly when v + M(h)v = 0; pure nonzero translations are of
        /// infinite order. Finite orders are confirmed by direct powers.
        #[test]
        fn order_law(
            n in 3u64..30,
            raw in proptest::collection::vec(-9i64..10, 30),
            k in 0i128..60,
        ) {
            let phi = arith::totient(n) as usize;
            let v = &raw[..phi];
            // nontrivial rotation
            let kk = if k % (n as i128) == 0 { 1 } else { k };
            let rot = elem(n, &v.to_vec(), kk, false);
            let f = rot.h().order();
            prop_assert_eq!(affine_order(&rot), AffineOrder::Finite(f));
            // confirmed by direct power computation
            prop_assert!(rot.pow(f as i64).is_identity());
            for m in 1..f {
                prop_assert!(!rot.pow(m as i64).is_identity());
            }
            // reflection: order 2 iff v + M(h)v = 0
            let refl = elem(n, &v.to_vec(), k, true);
            let square = refl.mul(&refl).unwrap();
            match affine_order(&refl) {
                AffineOrder::Finite(2) => prop_assert!(square.is_identity()),
                AffineOrder::Infinite => prop_assert!(!square.is_identity()),
                other => prop_assert!(false, "unexpected reflection order {:?}", other),
            }
            // nonzero pure translation: infinite
            if v.iter().any(|&x| x != 0) {
                let t = elem(n, &v.to_vec(), 0, false);
                prop_assert_eq!(affine_order(&t), AffineOrder::Infinite);
            }
        }
    }

    #[test]
    fn inverse_formula_matches_spec() {
        let x = elem(6, &[2, -1], 4, true);
        let xi = x.inv();
        // (v,h)⁻¹ = (−M(h⁻¹)v, h⁻¹)
        let hinv = x.h().inv();
        let m = point_matrix(&hinv);
        let expect: Vec<BigInt> = m.mul_vec(x.v()).into_iter().map(|a| -a).collect();
        assert_eq!(xi.v(), &expect[..]);
        assert_eq!(xi.h(), &hinv);
    }
}
