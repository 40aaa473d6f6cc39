//! Sparse linear combinations of basis words, and the Koszul sign oracle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::word::{canonicalize_odd, merge_even, render_word, BasisWord, OddKind};

/// Finite ℚ-linear combination of canonical basis words.
///
/// No zero coefficient is ever stored; the term order is the lexicographic
/// order on words supplied by the `BTreeMap`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct SparseElement {
    terms: BTreeMap<BasisWord, Rat>,
}

impl SparseElement {
    pub fn zero() -> Self {
        SparseElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(word: BasisWord, coeff: Rat) -> Self {
        let mut e = SparseElement::zero();
        e.add_term(word, coeff);
        e
    }

    pub fn unit() -> Self {
        SparseElement::term(BasisWord::empty(), Rat::one())
    }

    /// Coefficient of a word (zero when absent).
    pub fn coeff(&self, word: &BasisWord) -> Rat {
        self.terms.get(word).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisWord, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, word: BasisWord, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SparseElement, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (w, a) in other.iter() {
            self.add_term(w.clone(), a * c);
        }
    }

    pub fn add(&self, other: &SparseElement) -> SparseElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::one());
        out
    }

    pub fn sub(&self, other: &SparseElement) -> SparseElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::from_int(-1));
        out
    }

    pub fn neg(&self) -> SparseElement {
        self.scale(&Rat::from_int(-1))
    }

    pub fn scale(&self, c: &Rat) -> SparseElement {
        let mut out = SparseElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// Canonical form: zero coefficients removed, coefficients reduced.
    ///
    /// The representation maintains this invariant already, so this is the
    /// identity on well-formed values; it exists so the contract is explicit
    /// and testable.
    pub fn normalize(&self) -> SparseElement {
        let mut out = SparseElement::zero();
        for (w, c) in self.iter() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// Sum of absolute values of the coefficients; zero iff the element is zero.
    pub fn l1_norm(&self) -> Rat {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Graded-commutative product of two words in the symmetric⊗exterior
    /// setting: even parts merge commutatively, odd parts concatenate and
    /// canonicalize. `None` when an odd generator squares to zero.
    pub fn mul_words_commutative(a: &BasisWord, b: &BasisWord) -> Option<(BasisWord, i32)> {
        let mut odd = a.odd.clone();
        odd.extend_from_slice(&b.odd);
        let (odd, sign) = canonicalize_odd(&odd)?;
        Some((BasisWord { even: merge_even(&a.even, &b.even), odd }, sign))
    }

    /// Graded-commutative product extended bilinearly.
    pub fn mul_commutative(&self, other: &SparseElement) -> SparseElement {
        let mut out = SparseElement::zero();
        for (wa, ca) in self.iter() {
            for (wb, cb) in other.iter() {
                if let Some((w, sign)) = Self::mul_words_commutative(wa, wb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(w, c);
                }
            }
        }
        out
    }

    /// Largest `|even| + |odd|` over the support.
    pub fn max_filtration(&self) -> usize {
        self.terms.keys().map(BasisWord::filtration).max().unwrap_or(0)
    }

    pub fn render(&self, names: &[String], kind: OddKind) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let word = render_word(w, names, kind);
            if mag.is_one() {
                out.push_str(&word);
            } else if w.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&format!("{mag}*{word}"));
            }
        }
        out
    }
}

/// Koszul sign for reordering graded factors.
///
/// `perm` lists, in 0-based positions, the factor placed at each slot of the
/// reordered tensor: `(v_1 ⊗ ... ⊗ v_n) → (v_{perm[0]+1} ⊗ ...)`. The sign is
/// the product of `(-1)^{|v_a||v_b|}` over every pair that exchanges order.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<Rat> {
    if perm.len() != degrees.len() {
        return Err(Error::Contract(format!(
            "koszul_sign: permutation length {} does not match degree list length {}",
            perm.len(),
            degrees.len()
        )));
    }
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Contract(
                "koszul_sign: not a permutation of 0..n".to_string(),
            ));
        }
        seen[p] = true;
    }
    let mut sign = 1i64;
    for i in 0..n {
        for j in (i + 1)..n {
            if perm[i] > perm[j] && degrees[perm[i]] % 2 != 0 && degrees[perm[j]] % 2 != 0 {
                sign = -sign;
            }
        }
    }
    Ok(Rat::from_int(sign))
}
