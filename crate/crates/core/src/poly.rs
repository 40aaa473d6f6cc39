//! The graded commutative algebras S(g), ∧(g) and ∧(g*).
//!
//! ∧(g) is written in the odd variables `θ_i` of degree −1 and ∧(g*) in the
//! odd derivatives `∂θ_i` of degree +1. Words are canonical (strictly
//! increasing odd indices) with reordering signs absorbed into coefficients.
//!
//! Conventions pinned here and relied on everywhere else:
//!
//! * a ∂θ-word acts as the composition of its letters applied right to left,
//!   each letter acting as a left graded derivation with `∂θ_i(θ_j) = δ_ij`;
//! * the differential on ∧(g*) is `d(∂θ_i) = Σ_{j<k} f_jk^i ∂θ_j ∂θ_k`
//!   (restricted sum, coefficient +1). This is the unique normalization for
//!   which d² = 0 is equivalent to the Jacobi identity *and* the
//!   Chevalley–Eilenberg module compatibility residuals vanish exactly.

use crate::lie::LieAlgebra;
use crate::rat::Rat;
use crate::sparse::SparseElement;
use crate::word::{canonicalize_odd, BasisWord};

/// Element of S(g): even words only, nondecreasing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct SPoly(pub SparseElement);

/// Element of ∧(g): odd θ-words only, degree −|I|.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct ThetaPoly(pub SparseElement);

/// Element of ∧(g*): odd ∂θ-words only, degree +|J|.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct DThetaPoly(pub SparseElement);

macro_rules! poly_common {
    ($ty:ident) => {
        impl $ty {
            pub fn zero() -> Self {
                $ty(SparseElement::zero())
            }

            pub fn unit() -> Self {
                $ty(SparseElement::unit())
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }
        }
    };
}

poly_common!(SPoly);
poly_common!(ThetaPoly);
poly_common!(DThetaPoly);

impl SPoly {
    pub fn monomial(indices: Vec<usize>) -> Self {
        SPoly(SparseElement::term(BasisWord::from_even(indices), Rat::one()))
    }

    pub fn generator(i: usize) -> Self {
        SPoly::monomial(vec![i])
    }

    pub fn mul(&self, other: &SPoly) -> SPoly {
        SPoly(self.0.mul_commutative(&other.0))
    }

    /// Total polynomial degree of the support.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|(w, _)| w.even.len()).max().unwrap_or(0)
    }

    /// Constant term (the S(g) augmentation).
    pub fn constant_term(&self) -> Rat {
        self.0.coeff(&BasisWord::empty())
    }

    /// Component of polynomial degree exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> SPoly {
        let mut out = SparseElement::zero();
        for (w, c) in self.0.iter() {
            if w.even.len() == k {
                out.add_term(w.clone(), c.clone());
            }
        }
        SPoly(out)
    }
}

impl ThetaPoly {
    pub fn word(indices: Vec<usize>) -> Self {
        match canonicalize_odd(&indices) {
            None => ThetaPoly::zero(),
            Some((odd, sign)) => ThetaPoly(SparseElement::term(
                BasisWord::from_odd(odd),
                Rat::from_int(sign as i64),
            )),
        }
    }
}

impl DThetaPoly {
    pub fn word(indices: Vec<usize>) -> Self {
        match canonicalize_odd(&indices) {
            None => DThetaPoly::zero(),
            Some((odd, sign)) => DThetaPoly(SparseElement::term(
                BasisWord::from_odd(odd),
                Rat::from_int(sign as i64),
            )),
        }
    }

    pub fn generator(i: usize) -> Self {
        DThetaPoly::word(vec![i])
    }
}

/// Graded-commutative product of two θ-polynomials.
pub fn wedge_theta(u: &ThetaPoly, v: &ThetaPoly) -> ThetaPoly {
    ThetaPoly(u.0.mul_commutative(&v.0))
}

/// Graded-commutative product of two ∂θ-polynomials.
pub fn wedge_dtheta(u: &DThetaPoly, v: &DThetaPoly) -> DThetaPoly {
    DThetaPoly(u.0.mul_commutative(&v.0))
}

/// One left graded derivation step `∂θ_j` applied to the odd part of a word.
/// The even part is scalar for the contraction and picks up no sign.
fn apply_single_dtheta(word: &BasisWord, j: usize) -> Option<(BasisWord, i32)> {
    let pos = word.odd.iter().position(|&i| i == j)?;
    let sign = if pos % 2 == 0 { 1 } else { -1 };
    let mut odd = word.odd.clone();
    odd.remove(pos);
    Some((BasisWord { even: word.even.clone(), odd }, sign))
}

/// Applies the ∂θ-word `j_word` to an element with θ-content, letters applied
/// right to left. Works on mixed words (the even part rides along untouched),
/// so the same routine serves ∧(g) and the Chevalley–Eilenberg module.
pub fn contract_word(e: &SparseElement, j_word: &[usize]) -> SparseElement {
    let mut cur = e.clone();
    for &j in j_word.iter().rev() {
        let mut next = SparseElement::zero();
        for (w, c) in cur.iter() {
            if let Some((w2, sign)) = apply_single_dtheta(w, j) {
                next.add_term(w2, if sign < 0 { -c } else { c.clone() });
            }
        }
        cur = next;
    }
    cur
}

/// `contract(f, ∂θ^J)` for a single ∂θ-monomial.
pub fn contract(f: &ThetaPoly, j_word: &[usize]) -> ThetaPoly {
    ThetaPoly(contract_word(&f.0, j_word))
}

/// Linear extension of [`contract`] over a full ∂θ-polynomial.
pub fn contract_poly(f: &ThetaPoly, d: &DThetaPoly) -> ThetaPoly {
    let mut out = SparseElement::zero();
    for (w, c) in d.0.iter() {
        out.add_scaled(&contract_word(&f.0, &w.odd), c);
    }
    ThetaPoly(out)
}

/// `d(∂θ_i) = Σ_{j<k} f_jk^i ∂θ_j ∂θ_k` on one generator.
fn ce_cochain_d_generator(g: &LieAlgebra, i: usize) -> DThetaPoly {
    let mut out = SparseElement::zero();
    for j in 1..=g.dim() {
        for k in (j + 1)..=g.dim() {
            let f = g.f(j, k, i);
            if !f.is_zero() {
                out.add_term(BasisWord::from_odd(vec![j, k]), f);
            }
        }
    }
    DThetaPoly(out)
}

/// The Chevalley–Eilenberg cochain differential on ∧(g*): the degree-1 left
/// graded derivation extending the generator formula.
pub fn ce_cochain_d(g: &LieAlgebra, b: &DThetaPoly) -> DThetaPoly {
    let mut out = SparseElement::zero();
    for (w, c) in b.0.iter() {
        for (t, &i) in w.odd.iter().enumerate() {
            // d passes the first t odd generators
            let outer = if t % 2 == 0 { c.clone() } else { -c };
            for (dw, dc) in ce_cochain_d_generator(g, i).0.iter() {
                let mut seq: Vec<usize> = w.odd[..t].to_vec();
                seq.extend_from_slice(&dw.odd);
                seq.extend_from_slice(&w.odd[t + 1..]);
                if let Some((odd, sign)) = canonicalize_odd(&seq) {
                    let mut coeff = &outer * dc;
                    if sign < 0 {
                        coeff = -coeff;
                    }
                    out.add_term(BasisWord::from_odd(odd), coeff);
                }
            }
        }
    }
    DThetaPoly(out)
}

/// Maximum over generators of the l1 norm of `d(d(∂θ_i))`; exactly zero for a
/// valid Lie algebra and nonzero when Jacobi fails.
pub fn d_square_residual(g: &LieAlgebra) -> Rat {
    let mut max = Rat::zero();
    for i in 1..=g.dim() {
        let dd = ce_cochain_d(g, &ce_cochain_d(g, &DThetaPoly::generator(i)));
        let norm = dd.0.l1_norm();
        if norm > max {
            max = norm;
        }
    }
    max
}
