//! Exact arithmetic for integer triples and the groups they generate.
//!
//! Everything here is exact: integers are either checked fixed-width or
//! arbitrary precision, algebraic numbers are coordinate vectors over the
//! integers, and no floating point is used anywhere in the library. The
//! crate is organised in six layers, each building on the previous ones:
//!
//! * [`arith`] — primality, factorisation, valuations, cyclotomic
//!   polynomials, integer matrices and Smith normal form.
//! * [`cyclo`] — the residue rings `Z[x]/Φ_N(x)`, exact values of
//!   `4·cos²(tπ)` for rational `t`, and two independently computable
//!   conditions on angle triples that are provably equivalent.
//! * [`triples`] — classification of integer triples `(a₁,a₂,a₃)` by the
//!   lcm/valuation condition (C), the solvability condition (D), a
//!   constructive residue sieve, and an exact counting formula for the
//!   reduced solutions, all cross-checkable against brute force.
//! * [`dihedral`] — the finite dihedral group `D_n` of order `2n`:
//!   element arithmetic, involution classes, cyclic subgroups up to
//!   conjugacy, and construction of involution triples with prescribed
//!   pairwise product orders from a condition-(D) solution.
//! * [`repr`] — integral matrix models of the rational irreducible
//!   representations of `D_n`: the faithful degree-`φ(n)` pair, the
//!   quotients indexed by divisors of `n`, and the full inventory.
//! * [`lattice`] — the affine group `Λ ⋊ D_n` with `Λ = Z[x]/Φ_n(x)`:
//!   element orders, the three standard affine involutions attached to a
//!   triple, verified word certificates replaying the generation argument,
//!   and an exact decision procedure for whether the three involutions
//!   generate the whole affine group.

pub mod arith;
pub mod cyclo;
pub mod dihedral;
pub mod lattice;
pub mod repr;
pub mod triples;
