//! Integer-matrix models of the rational irreducible representations of
//! `D_n`.
//!
//! The faithful representation of degree `φ(n)` sends `g` to the
//! companion matrix of `Φ_n` and `s` to the matrix whose `i`-th column
//! holds the coefficients of `−x^{1−i} mod Φ_n`: in the cyclic basis
//! `{x^{j−1}·e}` of the underlying module, applying `s` is plain modular
//! polynomial arithmetic, so no basis vector is ever chosen explicitly.
//! Quotient representations reuse the same construction at each divisor
//! level, and together with the four (or two) degree-1 characters they
//! exhaust the rational irreducible inventory, whose size equals the
//! number of conjugacy classes of cyclic subgroups.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{self, IntMatrix};
use crate::dihedral::DihedralElement;

/// Errors raised by the representation layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReprError {
    /// Matrix representations are built for `n ≥ 3` only.
    #[error("representations are built for n >= 3 (got {0})")]
    OrderTooSmall(u64),
    /// The element belongs to a different dihedral group.
    #[error("element lives in D_{0} but the representation is for D_{1}")]
    MismatchedGroups(u64, u64),
    /// Quotient levels must be divisors of `n` that are at least 3.
    #[error("{e} is not a divisor of {n} at least 3")]
    InvalidDivisor {
        /// The ambient order parameter.
        n: u64,
        /// The rejected level.
        e: u64,
    },
}

// ---------------------------------------------------------------------------
// The faithful representation
// ---------------------------------------------------------------------------

/// The degree-`φ(n)` integer matrices representing `g` and `s`.
///
/// Invariants (asserted at build time for small degrees, and theorems of
/// the construction in general): `S² = I`, `S·G·S = G⁻¹`, `Gⁿ = I` with
/// no smaller power trivial, and both matrices are unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMatrixPair {
    n: u64,
    g_mat: IntMatrix,
    s_mat: IntMatrix,
}

/// Multiply by `x⁻¹ mod Φ_n`, where `x⁻¹ = −(c₁ + c₂x + … + x^{φ−1})`
/// (valid because `Φ_n(0) = 1` for `n ≥ 2`).
fn mul_by_x_inverse(p: &[BigInt], x_inv: &[BigInt]) -> Vec<BigInt> {
    let phi = p.len();
    let mut q: Vec<BigInt> = p[1..].to_vec();
    q.push(BigInt::zero());
    if !p[0].is_zero() {
        for (qi, xi) in q.iter_mut().zip(x_inv) {
            *qi += &p[0] * xi;
        }
    }
    debug_assert_eq!(q.len(), phi);
    q
}

/// Build the faithful degree-`φ(n)` representation of `D_n`.
pub fn build_faithful_rep(n: u64) -> Result<RepMatrixPair, ReprError> {
    if n < 3 {
        return Err(ReprError::OrderTooSmall(n));
    }
    let phi_poly = arith::cyclotomic_poly(n);
    let c = phi_poly.coeffs();
    let phi = phi_poly.degree();

    // g ↦ companion matrix of Φ_n: column j < φ−1 shifts the basis up,
    // the last column is −(c₀, …, c_{φ−1}).
    let mut g_mat = IntMatrix::new(phi, phi, vec![BigInt::zero(); phi * phi]);
    for j in 0..phi - 1 {
        g_mat.set(j + 1, j, BigInt::one());
    }
    for i in 0..phi {
        g_mat.set(i, phi - 1, -c[i].clone());
    }

    // s ↦ columns −x^{1−i} mod Φ_n, built by repeated division by x
    let x_inv: Vec<BigInt> = (1..=phi).map(|i| -c[i].clone()).collect();
    let mut s_mat = IntMatrix::new(phi, phi, vec![BigInt::zero(); phi * phi]);
    let mut col = vec![BigInt::zero(); phi];
    col[0] = -BigInt::one(); // −x⁰
    for j in 0..phi {
        for (i, v) in col.iter().enumerate() {
            s_mat.set(i, j, v.clone());
        }
        if j + 1 < phi {
            col = mul_by_x_inverse(&col, &x_inv);
        }
    }

    let pair = RepMatrixPair { n, g_mat, s_mat };
    if phi <= 64 {
        assert!(pair.s_mat.mul(&pair.s_mat).is_identity(), "S^2 = I");
        let sgs = pair.s_mat.mul(&pair.g_mat).mul(&pair.s_mat);
        assert_eq!(sgs, pair.g_inverse(), "S G S = G^-1");
    }
    Ok(pair)
}

impl RepMatrixPair {
    /// The group parameter `n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The representation degree `φ(n)`.
    pub fn degree(&self) -> usize {
        self.g_mat.rows()
    }

    /// The matrix representing `g`.
    pub fn g_mat(&self) -> &IntMatrix {
        &self.g_mat
    }

    /// The matrix representing `s`.
    pub fn s_mat(&self) -> &IntMatrix {
        &self.s_mat
    }

    /// `G⁻¹`, computed as `G^{n−1}`.
    pub fn g_inverse(&self) -> IntMatrix {
        self.g_mat.pow(self.n - 1)
    }

    /// The matrix of an arbitrary element `gᵏsᵉ ↦ Gᵏ·Sᵉ`; this is a group
    /// homomorphism.
    pub fn matrix_of(&self, x: &DihedralElement) -> Result<IntMatrix, ReprError> {
        if x.n() != self.n {
            return Err(ReprError::MismatchedGroups(x.n(), self.n));
        }
        let gk = self.g_mat.pow(x.k());
        Ok(if x.is_reflection() {
            gk.mul(&self.s_mat)
        } else {
            gk
        })
    }
}

// ---------------------------------------------------------------------------
// Quotient representations
// ---------------------------------------------------------------------------

/// The degree-`φ(e)` representation of `D_n` factoring through the
/// rotation quotient of order `e`: `g ↦ companion(Φ_e)`, `s ↦ S_e`.
/// Its kernel is exactly `⟨gᵉ⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientRep {
    n: u64,
    e: u64,
    pair: RepMatrixPair,
}

/// Build the level-`e` quotient representation of `D_n`; requires
/// `e | n` and `e ≥ 3`.
pub fn quotient_rep(n: u64, e: u64) -> Result<QuotientRep, ReprError> {
    if n < 3 {
        return Err(ReprError::OrderTooSmall(n));
    }
    if e < 3 || n % e != 0 {
        return Err(ReprError::InvalidDivisor { n, e });
    }
    Ok(QuotientRep {
        n,
        e,
        pair: build_faithful_rep(e)?,
    })
}

impl QuotientRep {
    /// The ambient group parameter `n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The quotient level `e` (order of the image of `g`).
    pub fn e(&self) -> u64 {
        self.e
    }

    /// The representation degree `φ(e)`.
    pub fn degree(&self) -> usize {
        self.pair.degree()
    }

    /// The level-`e` matrices.
    pub fn matrices(&self) -> (&IntMatrix, &IntMatrix) {
        (self.pair.g_mat(), self.pair.s_mat())
    }

    /// The matrix of an element of `D_n`: `gᵏsᵉ ↦ G_e^{k mod e}·S_eᵉ`.
    pub fn matrix_of(&self, x: &DihedralElement) -> Result<IntMatrix, ReprError> {
        if x.n() != self.n {
            return Err(ReprError::MismatchedGroups(x.n(), self.n));
        }
        let image = DihedralElement::new(self.e, (x.k() % self.e) as i128, x.is_reflection());
        self.pair.matrix_of(&image)
    }

    /// Does the element map to the identity matrix? True exactly for the
    /// rotations `gᵏ` with `e | k`.
    pub fn is_in_kernel(&self, x: &DihedralElement) -> bool {
        !x.is_reflection() && x.k() % self.e == 0
    }
}

// ---------------------------------------------------------------------------
// Degree-one representations and the inventory
// ---------------------------------------------------------------------------

/// A degree-1 representation `g ↦ g_sign, s ↦ s_sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeOneRep {
    /// Short descriptive name.
    pub label: &'static str,
    /// Image of `g` (`±1`).
    pub g_sign: i64,
    /// Image of `s` (`±1`).
    pub s_sign: i64,
}

/// The degree-1 representations of `D_n`: the trivial one and
/// `s ↦ −1` always; for even `n` additionally `g ↦ −1` with either sign
/// on `s` (for odd `n` the relation `gⁿ = 1` forces `g ↦ 1`).
///
/// # Panics
/// Panics when `n < 3`.
pub fn degree_one_reps(n: u64) -> Vec<DegreeOneRep> {
    assert!(n >= 3, "representations are built for n >= 3");
    let mut reps = vec![
        DegreeOneRep {
            label: "trivial",
            g_sign: 1,
            s_sign: 1,
        },
        DegreeOneRep {
            label: "reflection-sign",
            g_sign: 1,
            s_sign: -1,
        },
    ];
    if n % 2 == 0 {
        reps.push(DegreeOneRep {
            label: "rotation-and-reflection-sign",
            g_sign: -1,
            s_sign: -1,
        });
        reps.push(DegreeOneRep {
            label: "rotation-sign",
            g_sign: -1,
            s_sign: 1,
        });
    }
    reps
}

/// One row of the rational inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InventoryEntry {
    /// Short descriptive name.
    pub label: String,
    /// Representation degree.
    pub degree: u64,
    /// Description of the kernel.
    pub kernel: String,
    /// Matrix of `g`.
    pub g_mat: IntMatrix,
    /// Matrix of `s`.
    pub s_mat: IntMatrix,
}

/// The complete list of rational irreducible representations of `D_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepInventory {
    /// The group parameter.
    pub n: u64,
    /// Degree-1 entries first, then one entry per divisor `e ≥ 3` of `n`
    /// in increasing order.
    pub entries: Vec<InventoryEntry>,
}

/// Assemble the full rational inventory: the degree-1 representations
/// plus one quotient representation per divisor `e ≥ 3` of `n`. The
/// entry count always equals the number of conjugacy classes of cyclic
/// subgroups of `D_n` (asserted).
///
/// # Panics
/// Panics when `n < 3`.
pub fn rational_inventory(n: u64) -> RepInventory {
    assert!(n >= 3, "representations are built for n >= 3");
    let scalar = |v: i64| IntMatrix::from_i64_rows(&[vec![v]]);
    let mut entries: Vec<InventoryEntry> = degree_one_reps(n)
        .into_iter()
        .map(|r| InventoryEntry {
            label: r.label.to_string(),
            degree: 1,
            kernel: match (r.g_sign, r.s_sign) {
                (1, 1) => "all of D_n".to_string(),
                (1, -1) => "<g> (all rotations)".to_string(),
                (-1, -1) => "<g^2, g s>".to_string(),
                (-1, 1) => "<g^2, s>".to_string(),
                _ => unreachable!("signs are ±1"),
            },
            g_mat: scalar(r.g_sign),
            s_mat: scalar(r.s_sign),
        })
        .collect();
    for e in 3..=n {
        if n % e != 0 {
            continue;
        }
        let q = quotient_rep(n, e).expect("e is a valid divisor level");
        let (g_mat, s_mat) = q.matrices();
        entries.push(InventoryEntry {
            label: format!("cyclotomic-{e}"),
            degree: q.degree() as u64,
            kernel: if e == n {
                "trivial (faithful)".to_string()
            } else {
                format!("<g^{e}>")
            },
            g_mat: g_mat.clone(),
            s_mat: s_mat.clone(),
        });
    }
    let expected = crate::dihedral::cyclic_subgroup_class_count(n);
    assert_eq!(
        entries.len() as u64,
        expected,
        "inventory size must match the cyclic-subgroup class count"
    );
    RepInventory { n, entries }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
