//! U(g), the graded UEA U(ĝ) = U(g)⊗∧(g), PBW normal forms, and the
//! symmetrization isomorphism.
//!
//! Words of U(ĝ) are rewritten into the PBW basis `x^α θ^I` (α nondecreasing,
//! I strictly increasing) by the leftmost-violation strategy, using
//! `x_j x_i = x_i x_j - [x_i, x_j]` and the graded relations
//! `[x_i, θ_j] = f_ij^k θ_k`, `[θ_i, θ_j] = 0`.

use itertools::Itertools;

use crate::lie::LieAlgebra;
use crate::poly::SPoly;
use crate::rat::Rat;
use crate::sparse::SparseElement;
use crate::word::BasisWord;

/// Letter of an un-normalized U(ĝ) word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Letter {
    X(usize),
    Th(usize),
}

/// Element of U(g) in PBW normal form (even words, nondecreasing).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct UeaElement(pub SparseElement);

/// Element of U(ĝ) ≅ U(g)⊗∧(g) in PBW normal form `x^α θ^I`; this is also the
/// representation of the Chevalley–Eilenberg complex CE(g).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct CeElement(pub SparseElement);

impl UeaElement {
    pub fn zero() -> Self {
        UeaElement(SparseElement::zero())
    }

    pub fn unit() -> Self {
        UeaElement(SparseElement::unit())
    }

    pub fn generator(i: usize) -> Self {
        UeaElement(SparseElement::term(BasisWord::from_even(vec![i]), Rat::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The augmentation ε: coefficient of the empty word.
    pub fn augmentation(&self) -> Rat {
        self.0.coeff(&BasisWord::empty())
    }
}

impl CeElement {
    pub fn zero() -> Self {
        CeElement(SparseElement::zero())
    }

    pub fn unit() -> Self {
        CeElement(SparseElement::unit())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn basis_word(even: Vec<usize>, odd: Vec<usize>) -> Self {
        CeElement(SparseElement::term(BasisWord { even, odd }, Rat::one()))
    }

    /// The augmentation: coefficient of the empty word.
    pub fn augmentation(&self) -> Rat {
        self.0.coeff(&BasisWord::empty())
    }
}

fn word_letters(w: &BasisWord) -> Vec<Letter> {
    let mut letters: Vec<Letter> = w.even.iter().map(|&i| Letter::X(i)).collect();
    letters.extend(w.odd.iter().map(|&i| Letter::Th(i)));
    letters
}

/// First position whose adjacent pair violates the normal form, if any.
fn first_violation(word: &[Letter]) -> Option<usize> {
    word.windows(2).position(|pair| match (pair[0], pair[1]) {
        (Letter::X(a), Letter::X(b)) => a > b,
        (Letter::Th(_), Letter::X(_)) => true,
        (Letter::Th(a), Letter::Th(b)) => a >= b,
        (Letter::X(_), Letter::Th(_)) => false,
    })
}

/// Rewrites a combination of raw U(ĝ) words into PBW normal form.
///
/// Each rewrite strictly lowers (word length, inversion count)
/// lexicographically, so the worklist terminates.
pub fn pbw_normal_form(g: &LieAlgebra, terms: Vec<(Vec<Letter>, Rat)>) -> SparseElement {
    let mut out = SparseElement::zero();
    let mut work = terms;
    while let Some((word, coeff)) = work.pop() {
        if coeff.is_zero() {
            continue;
        }
        match first_violation(&word) {
            None => {
                let even: Vec<usize> = word
                    .iter()
                    .filter_map(|l| match l {
                        Letter::X(i) => Some(*i),
                        Letter::Th(_) => None,
                    })
                    .collect();
                let odd: Vec<usize> = word
                    .iter()
                    .filter_map(|l| match l {
                        Letter::Th(i) => Some(*i),
                        Letter::X(_) => None,
                    })
                    .collect();
                out.add_term(BasisWord { even, odd }, coeff);
            }
            Some(t) => match (word[t], word[t + 1]) {
                // x_a x_b (a > b)  →  x_b x_a + [x_a, x_b]
                (Letter::X(a), Letter::X(b)) => {
                    let mut swapped = word.clone();
                    swapped.swap(t, t + 1);
                    work.push((swapped, coeff.clone()));
                    for (k, f) in g.bracket(a, b) {
                        let mut shorter = word[..t].to_vec();
                        shorter.push(Letter::X(k));
                        shorter.extend_from_slice(&word[t + 2..]);
                        work.push((shorter, &coeff * &f));
                    }
                }
                // θ_a x_b  →  x_b θ_a − [x_b, θ_a],  [x_b, θ_a] = f_ba^k θ_k
                (Letter::Th(a), Letter::X(b)) => {
                    let mut swapped = word.clone();
                    swapped.swap(t, t + 1);
                    work.push((swapped, coeff.clone()));
                    for (k, f) in g.bracket(b, a) {
                        let mut shorter = word[..t].to_vec();
                        shorter.push(Letter::Th(k));
                        shorter.extend_from_slice(&word[t + 2..]);
                        work.push((shorter, -&(&coeff * &f)));
                    }
                }
                // θ_a θ_b: anticommute (a > b) or square to zero (a = b)
                (Letter::Th(a), Letter::Th(b)) => {
                    if a == b {
                        continue;
                    }
                    let mut swapped = word.clone();
                    swapped.swap(t, t + 1);
                    work.push((swapped, -coeff));
                }
                (Letter::X(_), Letter::Th(_)) => unreachable!("not a violation"),
            },
        }
    }
    out
}

/// Product in U(g): concatenate words, then normalize.
pub fn uea_product(g: &LieAlgebra, u: &UeaElement, v: &UeaElement) -> UeaElement {
    UeaElement(hat_product_raw(g, &u.0, &v.0))
}

/// Product in U(ĝ) on the PBW representation (also used for the left
/// U(g)-action on CE(g)).
pub fn hat_product(g: &LieAlgebra, u: &CeElement, v: &CeElement) -> CeElement {
    CeElement(hat_product_raw(g, &u.0, &v.0))
}

fn hat_product_raw(g: &LieAlgebra, u: &SparseElement, v: &SparseElement) -> SparseElement {
    let mut terms = Vec::new();
    for (wu, cu) in u.iter() {
        for (wv, cv) in v.iter() {
            let mut letters = word_letters(wu);
            letters.extend(word_letters(wv));
            terms.push((letters, cu * cv));
        }
    }
    pbw_normal_form(g, terms)
}

/// The symmetrization map S(g) → U(g):
/// `x_{i1}···x_{iq} ↦ (1/q!) Σ_σ x_{iσ(1)}···x_{iσ(q)}`.
pub fn symmetrize(g: &LieAlgebra, a: &SPoly) -> UeaElement {
    let mut out = SparseElement::zero();
    for (w, c) in a.0.iter() {
        let q = w.even.len();
        if q == 0 {
            out.add_term(w.clone(), c.clone());
            continue;
        }
        let scale = &Rat::inv_factorial(q) * c;
        let mut terms = Vec::new();
        for perm in w.even.iter().permutations(q) {
            let letters: Vec<Letter> = perm.into_iter().map(|&i| Letter::X(i)).collect();
            terms.push((letters, scale.clone()));
        }
        out.add_scaled(&pbw_normal_form(g, terms), &Rat::one());
    }
    UeaElement(out)
}

/// Exact inverse of [`symmetrize`], solved level by level down the PBW
/// filtration (symmetrize is the identity on leading terms).
pub fn symmetrize_inverse(g: &LieAlgebra, u: &UeaElement) -> SPoly {
    let mut answer = SparseElement::zero();
    let mut rest = u.0.clone();
    while !rest.is_zero() {
        let top_len = rest.iter().map(|(w, _)| w.even.len()).max().unwrap();
        let mut level = SparseElement::zero();
        for (w, c) in rest.iter() {
            if w.even.len() == top_len {
                level.add_term(w.clone(), c.clone());
            }
        }
        answer.add_scaled(&level, &Rat::one());
        rest = rest.sub(&symmetrize(g, &SPoly(level)).0);
        debug_assert!(rest.iter().all(|(w, _)| w.even.len() < top_len));
    }
    SPoly(answer)
}

/// The twisted Koszul differential on U(ĝ): the degree-1 graded derivation
/// with `x_i ↦ 0`, `θ_i ↦ x_i`, computed by inserting `x` at each θ-slot and
/// normalizing.
pub fn dk_hat(g: &LieAlgebra, e: &CeElement) -> CeElement {
    let mut terms = Vec::new();
    for (w, c) in e.0.iter() {
        for (t, &i) in w.odd.iter().enumerate() {
            // the derivation passes the even letters (degree 0) and t odd ones
            let sign = if t % 2 == 0 { c.clone() } else { -c };
            let mut letters: Vec<Letter> = w.even.iter().map(|&j| Letter::X(j)).collect();
            letters.extend(w.odd[..t].iter().map(|&j| Letter::Th(j)));
            letters.push(Letter::X(i));
            letters.extend(w.odd[t + 1..].iter().map(|&j| Letter::Th(j)));
            terms.push((letters, sign));
        }
    }
    CeElement(pbw_normal_form(g, terms))
}
