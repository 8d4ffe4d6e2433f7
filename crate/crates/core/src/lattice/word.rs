//! Words in the three generators and machine-checked membership
//! certificates.
//!
//! A [`WordCertificate`] pairs a target element with a token sequence
//! over `{σ₁^±1, σ₂^±1, σ₃^±1}`; the word is evaluated and compared to
//! the target at construction time, never assumed. The
//! [`generation_witnesses`] chain replays, step by step, the argument
//! that the three involutions generate the whole affine group: first
//! the rotation `g^{p₁}`, then translations `g^{p₁k}(e) − e`, then
//! `q₁e` and `r₁e` by geometric sums that telescope because the
//! relevant rotation sums vanish, then `e` itself by a Bézout
//! combination, the rotations `gᵘ`, `gᵛ` and `g`, and finally a
//! translation for every basis vector as a rotation-conjugate of `e`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::arith::{self, egcd};
use crate::dihedral::DihedralElement;

use super::generators::{monomial_mod_phi, GeneratorData};
use super::{point_matrix, AffineElement, LatticeError};

/// One letter of a word: a generator index (1, 2 or 3) with an
/// optional inverse mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordToken {
    /// Generator index in `1..=3`.
    pub generator: u8,
    /// Whether the token is the generator's inverse.
    pub inverse: bool,
}

impl fmt::Display for WordToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.generator)?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// Render a word as a space-separated token string like `"s1 s2 s3^-1"`.
pub fn word_to_string(word: &[WordToken]) -> String {
    word.iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse a space-separated token string; unknown tokens are rejected.
pub fn parse_word(text: &str) -> Result<Vec<WordToken>, LatticeError> {
    text.split_whitespace()
        .map(|tok| {
            let (base, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            match base {
                "s1" => Ok(WordToken {
                    generator: 1,
                    inverse,
                }),
                "s2" => Ok(WordToken {
                    generator: 2,
                    inverse,
                }),
                "s3" => Ok(WordToken {
                    generator: 3,
                    inverse,
                }),
                _ => Err(LatticeError::UnknownToken(tok.to_string())),
            }
        })
        .collect()
}

/// The formal inverse of a word: reversed, with every token flipped.
pub(crate) fn invert_word(word: &[WordToken]) -> Vec<WordToken> {
    word.iter()
        .rev()
        .map(|t| WordToken {
            generator: t.generator,
            inverse: !t.inverse,
        })
        .collect()
}

/// `word` repeated `times` times (negative repeats the inverse).
fn repeat_word(word: &[WordToken], times: i64) -> Vec<WordToken> {
    let body = if times < 0 {
        invert_word(word)
    } else {
        word.to_vec()
    };
    let mut out = Vec::with_capacity(body.len() * times.unsigned_abs() as usize);
    for _ in 0..times.unsigned_abs() {
        out.extend_from_slice(&body);
    }
    out
}

/// Evaluate a word left to right against the generators.
pub fn evaluate_word(gd: &GeneratorData, word: &[WordToken]) -> AffineElement {
    let inverses: [AffineElement; 3] = [
        gd.sigma1().inv(),
        gd.sigma2().inv(),
        gd.sigma3().inv(),
    ];
    let mut acc = AffineElement::identity(gd.n());
    for tok in word {
        let factor = if tok.inverse {
            &inverses[(tok.generator - 1) as usize]
        } else {
            gd.sigma(tok.generator)
        };
        acc = acc.mul(factor).expect("generators share one level");
    }
    acc
}

/// A target element together with a word that provably evaluates to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordCertificate {
    /// Human-readable description of the target.
    pub label: String,
    /// The claimed element.
    pub target: AffineElement,
    /// The word over the generators.
    pub word: Vec<WordToken>,
}

impl WordCertificate {
    /// Build a certificate, checking the word against the target.
    pub(crate) fn checked(
        label: impl Into<String>,
        target: AffineElement,
        word: Vec<WordToken>,
        gd: &GeneratorData,
    ) -> Self {
        let label = label.into();
        let value = evaluate_word(gd, &word);
        assert_eq!(
            value, target,
            "certificate `{label}` must evaluate to its target"
        );
        WordCertificate {
            label,
            target,
            word,
        }
    }

    /// Re-evaluate the word and compare with the target.
    pub fn verify(&self, gd: &GeneratorData) -> bool {
        evaluate_word(gd, &self.word) == self.target
    }
}

fn tok(generator: u8) -> WordToken {
    WordToken {
        generator,
        inverse: false,
    }
}

/// `a⁻¹ mod m` for coprime inputs (`0` when `m = 1`).
fn modinv(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (g, x, _) = egcd(a as i128, m as i128);
    assert_eq!(g, 1, "modular inverse needs coprime arguments");
    x.rem_euclid(m as i128) as u64
}

/// Word material shared by the certificate builders.
struct Chain<'a> {
    gd: &'a GeneratorData,
    /// `(σ₁σ₂)^t = (0, g^{p₁})`, with `t = k₁⁻¹ mod p`.
    t: u64,
    /// word for `(0, gᵘ)`: `s1 s2`.
    word_gu: Vec<WordToken>,
    /// word for `(0, gᵛ)` (built once `e` is certified).
    word_gv: Vec<WordToken>,
    /// `v⁻¹ mod p₁` for decomposing rotation exponents.
    inv_v_mod_p1: u64,
    p: u64,
}

impl Chain<'_> {
    /// Word for the translation `g^{p₁k}(e) − e` as the commutator
    /// `[R^k, U]` with `R = (0, g^{p₁})` and `U = σ₃σ₁ = (e, g^{−v})`.
    fn translation_word(&self, k: u64) -> Vec<WordToken> {
        let a = (self.t as u128 * k as u128 % self.p as u128) as i64;
        let mut w = repeat_word(&self.word_gu, a);
        w.extend([tok(3), tok(1)]);
        w.extend(repeat_word(&self.word_gu, -a));
        w.extend(invert_word(&[tok(3), tok(1)]));
        w
    }

    /// The translation vector `M(g^{p₁k})e − e`.
    fn translation_vector(&self, k: u64) -> Vec<BigInt> {
        let n = self.gd.n();
        let rot = DihedralElement::rotation(n, (self.gd.p1() as i128) * (k as i128));
        let m = point_matrix(&rot);
        let moved = m.mul_vec(self.gd.seed());
        moved
            .into_iter()
            .zip(self.gd.seed())
            .map(|(a, b)| a - b)
            .collect()
    }

    /// Word for `(0, g^j)`: split `j ≡ a·u + b·v (mod n)` with
    /// `b = j·v⁻¹ mod p₁` (so the remainder is a multiple of `p₁`,
    /// hence a power of `gᵘ`).
    fn rotation_word(&self, j: u64) -> Vec<WordToken> {
        let gd = self.gd;
        let n = gd.n();
        let p1 = gd.p1();
        let b = if p1 == 1 {
            0
        } else {
            (j % p1) * self.inv_v_mod_p1 % p1
        };
        let rest = (j as i128 - (b as i128) * (gd.v() as i128)).rem_euclid(n as i128) as u64;
        assert_eq!(rest % p1, 0, "remainder must be a power of g^{{p1}}");
        let a = (rest / p1) % self.p * self.t % self.p;
        let mut w = repeat_word(&self.word_gu, a as i64);
        w.extend(repeat_word(&self.word_gv, b as i64));
        w
    }
}

/// Replay the proof that the three generators reach the whole group,
/// as an ordered list of verified certificates. Requires `q₁ ≥ 2` and
/// `r₁ ≥ 2` (otherwise the geometric sums are empty and the chain
/// degenerates).
pub fn generation_witnesses(gd: &GeneratorData) -> Result<Vec<WordCertificate>, LatticeError> {
    let (q1, r1) = (gd.q1(), gd.r1());
    if q1 < 2 || r1 < 2 {
        return Err(LatticeError::DegenerateLabeling { q1, r1 });
    }
    let n = gd.n();
    let (lp, lq, lr) = gd.relabeled();
    let (p1, d) = (gd.p1(), gd.d());
    let phi = arith::totient(n) as usize;

    // u = p₁k₁ with gcd(k₁, p) = 1; t = k₁⁻¹ mod p gives (gᵘ)^t = g^{p₁}
    let k1 = gd.u() / p1;
    let t = modinv(k1 % lp, lp);
    let mut chain = Chain {
        gd,
        t,
        word_gu: vec![tok(1), tok(2)],
        word_gv: Vec::new(),
        inv_v_mod_p1: modinv(gd.v() % p1.max(1), p1),
        p: lp,
    };
    let mut certs: Vec<WordCertificate> = Vec::new();

    // 1. (0, g^{p₁}) as a power of σ₁σ₂
    certs.push(WordCertificate::checked(
        format!("(0, g^{p1})"),
        AffineElement::point(DihedralElement::rotation(n, p1 as i128)),
        repeat_word(&chain.word_gu, t as i64),
        gd,
    ));

    // 2. translations g^{p₁k}(e) − e for the exponents the sums need:
    //    p₁k = jq (j < q₁) and p₁k = jr (j < r₁)
    let mut needed: BTreeSet<u64> = BTreeSet::new();
    needed.extend((1..q1).map(|j| j * r1 * d)); // p₁·(j r₁ d) = j·q
    needed.extend((1..r1).map(|j| j * q1 * d)); // p₁·(j q₁ d) = j·r
    for &k in &needed {
        certs.push(WordCertificate::checked(
            format!("translation g^{}(e) - e", p1 * k),
            AffineElement::translation(n, chain.translation_vector(k))
                .expect("vector has length phi"),
            chain.translation_word(k),
            gd,
        ));
    }

    // 3. q₁·e: the full sum Σ_{j<q₁} M(g^{jq})e vanishes (g^q has order
    //    q₁ ≥ 2), so q₁e = −Σ_{j=1}^{q₁−1} (g^{jq}(e) − e)
    let scaled = |c: u64| -> Vec<BigInt> {
        gd.seed().iter().map(|x| x * BigInt::from(c)).collect()
    };
    let mut word_q1e = Vec::new();
    for j in 1..q1 {
        word_q1e.extend(invert_word(&chain.translation_word(j * r1 * d)));
    }
    certs.push(WordCertificate::checked(
        format!("{q1}*e"),
        AffineElement::translation(n, scaled(q1)).expect("vector has length phi"),
        word_q1e.clone(),
        gd,
    ));

    // 4. r₁·e, symmetrically through g^r of order r₁ ≥ 2
    let mut word_r1e = Vec::new();
    for j in 1..r1 {
        word_r1e.extend(invert_word(&chain.translation_word(j * q1 * d)));
    }
    certs.push(WordCertificate::checked(
        format!("{r1}*e"),
        AffineElement::translation(n, scaled(r1)).expect("vector has length phi"),
        word_r1e.clone(),
        gd,
    ));

    // 5. e by Bézout: gcd(q₁, r₁) = 1 because lcm(q, r) = n
    let (g, lam, mu) = egcd(q1 as i128, r1 as i128);
    assert_eq!(g, 1, "q1 and r1 are coprime under condition C1");
    let mut word_e = repeat_word(&word_q1e, lam as i64);
    word_e.extend(repeat_word(&word_r1e, mu as i64));
    certs.push(WordCertificate::checked(
        "e",
        AffineElement::translation(n, gd.seed().to_vec()).expect("vector has length phi"),
        word_e.clone(),
        gd,
    ));

    // 6. (0, gᵘ) = σ₁σ₂ by construction
    certs.push(WordCertificate::checked(
        format!("(0, g^{})", gd.u()),
        AffineElement::point(DihedralElement::rotation(n, gd.u() as i128)),
        chain.word_gu.clone(),
        gd,
    ));

    // 7. (0, gᵛ) = σ₁ · (e, 1)⁻¹ · σ₃
    let mut word_gv = vec![tok(1)];
    word_gv.extend(invert_word(&word_e));
    word_gv.push(tok(3));
    certs.push(WordCertificate::checked(
        format!("(0, g^{})", gd.v()),
        AffineElement::point(DihedralElement::rotation(n, gd.v() as i128)),
        word_gv.clone(),
        gd,
    ));
    chain.word_gv = word_gv;

    // 8. (0, g): split 1 ≡ a·u + b·v (mod n)
    certs.push(WordCertificate::checked(
        "(0, g)",
        AffineElement::point(DihedralElement::rotation(n, 1)),
        chain.rotation_word(1),
        gd,
    ));

    // 9. one translation per basis vector: x^m = g^{m−i}(e)
    for m in 0..phi {
        let j = ((m as i128 - gd.seed_exponent() as i128).rem_euclid(n as i128)) as u64;
        let rot = chain.rotation_word(j);
        let mut w = rot.clone();
        w.extend_from_slice(&word_e);
        w.extend(invert_word(&rot));
        certs.push(WordCertificate::checked(
            format!("basis translation x^{m}"),
            AffineElement::translation(n, monomial_mod_phi(n, m as u64))
                .expect("vector has length phi"),
            w,
            gd,
        ));
    }

    // make sure the targets named by the statement are all present
    debug_assert_eq!(certs.len(), 1 + needed.len() + 3 + 3 + phi);
    let _ = (lq, lr);
    Ok(certs)
}
