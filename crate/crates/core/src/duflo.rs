//! The Duflo element, the isomorphism I = PBW∘√J, the star product obtained
//! as its pullback, its character, and the trace derivation identity.
//!
//! √J = exp(Σ_k c_k T_k(∂)) where Σ c_k t^k = ½·log((1−e^{−t})/t) and
//! T_k(∂) substitutes ∂_i for x_i in tr((ad ξ)^k). The modified variant keeps
//! the even-k terms only; since the odd part of the generating function is
//! exactly −t/4, the two variants differ by exp(−¼·c₁-derivation).
//!
//! Truncation orders are always derived from input degrees, so every value
//! here is exact, not approximate.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::poly::SPoly;
use crate::rat::Rat;
use crate::series::{one_minus_exp_neg_over_t, TruncSeries};
use crate::sparse::SparseElement;
use crate::uea::{symmetrize, symmetrize_inverse, uea_product, UeaElement};
use crate::word::BasisWord;

/// Which Duflo element drives the isomorphism.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DufloVariant {
    /// All trace powers: generating function ½·log((1−e^{−t})/t).
    Actual,
    /// Even trace powers only.
    Modified,
}

impl DufloVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "actual" => Ok(DufloVariant::Actual),
            "modified" => Ok(DufloVariant::Modified),
            other => Err(Error::Schema(format!(
                "unknown Duflo variant `{other}` (expected `actual` or `modified`)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DufloVariant::Actual => "actual",
            DufloVariant::Modified => "modified",
        }
    }
}

/// Coefficients c_1..c_N of `½·log((1−e^{−t})/t)`; c_1 = −1/4, c_2 = 1/48.
pub fn duflo_log_coeffs(order: usize) -> TruncSeries {
    assert!(order >= 1);
    one_minus_exp_neg_over_t(order).log().scale(&Rat::new(1, 2))
}

/// A constant-coefficient differential operator `Σ c_β ∂^β` acting on S(g);
/// multi-indices β are stored as nondecreasing index words.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ConstCoeffOperator {
    terms: BTreeMap<Vec<usize>, Rat>,
}

impl ConstCoeffOperator {
    pub fn zero() -> Self {
        ConstCoeffOperator::default()
    }

    pub fn identity() -> Self {
        let mut op = ConstCoeffOperator::zero();
        op.add_term(vec![], Rat::one());
        op
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&vec![]).is_some_and(Rat::is_one)
    }

    pub fn add_term(&mut self, mut word: Vec<usize>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        word.sort_unstable();
        let entry = self.terms.entry(word).or_insert_with(Rat::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            let key: Vec<Vec<usize>> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(w, _)| w.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Rat)> {
        self.terms.iter()
    }

    /// Builds the operator obtained from a polynomial by `x_i ↦ ∂_i`.
    pub fn from_polynomial(p: &SPoly) -> Self {
        let mut op = ConstCoeffOperator::zero();
        for (w, c) in p.0.iter() {
            op.add_term(w.even.clone(), c.clone());
        }
        op
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = ConstCoeffOperator::zero();
        for (w, a) in self.iter() {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, a) in other.iter() {
            out.add_term(w.clone(), a.clone());
        }
        out
    }

    /// Composition; constant-coefficient operators commute, so this is the
    /// commutative product on ∂-words, truncated at `max_order`.
    pub fn compose_truncated(&self, other: &Self, max_order: usize) -> Self {
        let mut out = ConstCoeffOperator::zero();
        for (w1, c1) in self.iter() {
            for (w2, c2) in other.iter() {
                if w1.len() + w2.len() > max_order {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    /// `exp(self)` truncated at operator order `max_order`; requires no
    /// constant term.
    pub fn exp_truncated(&self, max_order: usize) -> Self {
        assert!(self.terms.get(&vec![]).is_none(), "exp requires no constant term");
        let mut acc = ConstCoeffOperator::identity();
        let mut power = ConstCoeffOperator::identity();
        // minimal order of a nonzero term bounds the number of steps needed
        let min_order = self.terms.keys().map(Vec::len).min().unwrap_or(1).max(1);
        for k in 1..=(max_order / min_order).max(0) {
            power = power.compose_truncated(self, max_order);
            acc = acc.add(&power.scale(&Rat::inv_factorial(k)));
        }
        acc
    }

    /// Applies the operator to a polynomial: `∂^β(x^α)` is the product of
    /// falling factorials on each variable.
    pub fn apply(&self, p: &SPoly) -> SPoly {
        let mut out = SparseElement::zero();
        for (beta, c) in self.iter() {
            for (w, a) in p.0.iter() {
                if let Some((word, factor)) = differentiate(&w.even, beta) {
                    out.add_term(BasisWord::from_even(word), &(c * a) * &factor);
                }
            }
        }
        SPoly(out)
    }
}

/// `∂^beta(x^alpha)` on sorted multisets: `None` when annihilated.
fn differentiate(alpha: &[usize], beta: &[usize]) -> Option<(Vec<usize>, Rat)> {
    let mut remaining: BTreeMap<usize, i64> = BTreeMap::new();
    for &i in alpha {
        *remaining.entry(i).or_insert(0) += 1;
    }
    let mut factor = Rat::one();
    for &i in beta {
        let slot = remaining.get_mut(&i)?;
        if *slot == 0 {
            return None;
        }
        factor = &factor * &Rat::from_int(*slot);
        *slot -= 1;
    }
    let mut word = Vec::new();
    for (i, mult) in remaining {
        for _ in 0..mult {
            word.push(i);
        }
    }
    Some((word, factor))
}

/// The Duflo operator truncated at `max_order`: `exp(Σ_k c_k T_k(∂))` with
/// the k-sum over all k (actual) or even k only (modified).
pub fn duflo_operator(g: &LieAlgebra, variant: DufloVariant, max_order: usize) -> ConstCoeffOperator {
    duflo_operator_signed(g, variant, max_order, false)
}

/// Inverse Duflo operator (exp of the negated log-sum).
pub fn duflo_operator_inverse(
    g: &LieAlgebra,
    variant: DufloVariant,
    max_order: usize,
) -> ConstCoeffOperator {
    duflo_operator_signed(g, variant, max_order, true)
}

fn duflo_operator_signed(
    g: &LieAlgebra,
    variant: DufloVariant,
    max_order: usize,
    invert: bool,
) -> ConstCoeffOperator {
    if max_order == 0 {
        return ConstCoeffOperator::identity();
    }
    let coeffs = duflo_log_coeffs(max_order);
    let mut log_sum = ConstCoeffOperator::zero();
    for k in 1..=max_order {
        if variant == DufloVariant::Modified && k % 2 == 1 {
            continue;
        }
        let ck = coeffs.coeff(k);
        if ck.is_zero() {
            continue;
        }
        let tk = g.trace_power_poly(k).expect("k >= 1");
        log_sum = log_sum.add(&ConstCoeffOperator::from_polynomial(&tk).scale(&ck));
    }
    if invert {
        log_sum = log_sum.scale(&Rat::from_int(-1));
    }
    log_sum.exp_truncated(max_order)
}

/// The algebra isomorphism `I = PBW ∘ √J : (S(g), ⋆) → (U(g), ·)`.
pub fn iso_i(g: &LieAlgebra, variant: DufloVariant, a: &SPoly) -> UeaElement {
    let op = duflo_operator(g, variant, a.degree());
    symmetrize(g, &op.apply(a))
}

/// Exact inverse of [`iso_i`].
pub fn iso_i_inverse(g: &LieAlgebra, variant: DufloVariant, u: &UeaElement) -> SPoly {
    let a = symmetrize_inverse(g, u);
    let op = duflo_operator_inverse(g, variant, a.degree());
    op.apply(&a)
}

/// The star product pulled back through I: `a ⋆ b = I⁻¹(I(a)·I(b))`.
pub fn star(g: &LieAlgebra, variant: DufloVariant, a: &SPoly, b: &SPoly) -> SPoly {
    let u = uea_product(g, &iso_i(g, variant, a), &iso_i(g, variant, b));
    iso_i_inverse(g, variant, &u)
}

/// The ⋆-character `χ(a) = ε(√J(a))`.
pub fn character_chi(g: &LieAlgebra, variant: DufloVariant, a: &SPoly) -> Rat {
    duflo_operator(g, variant, a.degree()).apply(a).constant_term()
}

/// The derivation D of S(g) with `D(x_i) = tr(ad x_i)`.
pub fn c1_derivation(g: &LieAlgebra) -> ConstCoeffOperator {
    ConstCoeffOperator::from_polynomial(&g.c1_functional())
}

/// `D(a⋆b) − D(a)⋆b − a⋆D(b)` for the c₁ derivation D; vanishes identically.
pub fn c1_derivation_residual(
    g: &LieAlgebra,
    variant: DufloVariant,
    a: &SPoly,
    b: &SPoly,
) -> SPoly {
    let d = c1_derivation(g);
    let mut res = d.apply(&star(g, variant, a, b)).0;
    res.add_scaled(&star(g, variant, &d.apply(a), b).0, &Rat::from_int(-1));
    res.add_scaled(&star(g, variant, a, &d.apply(b)).0, &Rat::from_int(-1));
    SPoly(res)
}

/// `exp(¼ D)` truncated at the given polynomial degree.
pub fn quarter_c1_exp(g: &LieAlgebra, max_order: usize, invert: bool) -> ConstCoeffOperator {
    let sign = if invert { Rat::new(-1, 4) } else { Rat::new(1, 4) };
    c1_derivation(g).scale(&sign).exp_truncated(max_order)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lie::catalog;

    /// Independent oracle for the log coefficients: the power-series
    /// recurrence n·g_n = n·f_n − Σ_{k=1}^{n−1} k·g_k·f_{n−k} for g = log f,
    /// a different route from the Mercator expansion used by the library.
    fn log_by_recurrence(f: &TruncSeries) -> TruncSeries {
        assert!(f.coeff(0).is_one());
        let order = f.order();
        let mut g = TruncSeries::zero(order);
        for n in 1..=order {
            let mut acc = &Rat::from_int(n as i64) * &f.coeff(n);
            for k in 1..n {
                let t = &(&Rat::from_int(k as i64) * &g.coeff(k)) * &f.coeff(n - k);
                acc = &acc - &t;
            }
            g.set_coeff(n, &acc / &Rat::from_int(n as i64));
        }
        g
    }

    #[test]
    fn duflo_series_oracle() {
        let oracle = log_by_recurrence(&one_minus_exp_neg_over_t(6)).scale(&Rat::new(1, 2));
        let coeffs = duflo_log_coeffs(6);
        for n in 0..=6 {
            assert_eq!(coeffs.coeff(n), oracle.coeff(n), "coefficient of t^{n}");
        }
        // frozen values
        assert_eq!(coeffs.coeff(1), Rat::new(-1, 4));
        assert_eq!(coeffs.coeff(2), Rat::new(1, 48));
        // odd coefficients beyond t vanish: the even/odd split behind the
        // modified variant
        assert_eq!(coeffs.coeff(3), Rat::zero());
        assert_eq!(coeffs.coeff(5), Rat::zero());
    }

    #[test]
    fn duflo_operator_examples() {
        let h3 = catalog("heisenberg3").unwrap();
        for variant in [DufloVariant::Actual, DufloVariant::Modified] {
            assert!(duflo_operator(&h3, variant, 4).is_identity());
        }
        let aff1 = catalog("aff1").unwrap();
        let op = duflo_operator(&aff1, DufloVariant::Actual, 1);
        let mut expect = ConstCoeffOperator::identity();
        expect.add_term(vec![1], Rat::new(-1, 4));
        assert_eq!(op, expect);
        let ab = catalog("abelian2").unwrap();
        assert!(duflo_operator(&ab, DufloVariant::Actual, 5).is_identity());
    }

    #[test]
    fn operator_inverse_is_exact() {
        for name in ["aff1", "sl2"] {
            let g = catalog(name).unwrap();
            for variant in [DufloVariant::Actual, DufloVariant::Modified] {
                let op = duflo_operator(&g, variant, 4);
                let inv = duflo_operator_inverse(&g, variant, 4);
                let composed = op.compose_truncated(&inv, 4);
                assert!(composed.is_identity(), "{name} {variant:?}");
            }
        }
    }

    #[test]
    fn iso_i_examples() {
        let h3 = catalog("heisenberg3").unwrap();
        let i = iso_i(&h3, DufloVariant::Actual, &SPoly::monomial(vec![1, 2]));
        assert_eq!(i.0.coeff(&BasisWord::from_even(vec![1, 2])), Rat::one());
        assert_eq!(i.0.coeff(&BasisWord::from_even(vec![3])), Rat::new(-1, 2));
        let aff1 = catalog("aff1").unwrap();
        let i = iso_i(&aff1, DufloVariant::Actual, &SPoly::generator(1));
        assert_eq!(i.0.coeff(&BasisWord::from_even(vec![1])), Rat::one());
        assert_eq!(i.0.coeff(&BasisWord::empty()), Rat::new(-1, 4));
        assert_eq!(iso_i(&aff1, DufloVariant::Actual, &SPoly::unit()), UeaElement::unit());
    }

    #[test]
    fn iso_i_round_trip() {
        for name in ["heisenberg3", "sl2", "aff1"] {
            let g = catalog(name).unwrap();
            for variant in [DufloVariant::Actual, DufloVariant::Modified] {
                for m in monomials(g.dim(), 5) {
                    let a = SPoly::monomial(m.clone());
                    let back = iso_i_inverse(&g, variant, &iso_i(&g, variant, &a));
                    assert_eq!(back, a, "{name} {variant:?} on {m:?}");
                }
            }
        }
    }

    pub(crate) fn monomials(d: usize, max_deg: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![vec![]];
        for len in 1..=max_deg {
            let snapshot: Vec<Vec<usize>> =
                out.iter().filter(|m| m.len() == len - 1).cloned().collect();
            for m in snapshot {
                let lo = m.last().copied().unwrap_or(1);
                for i in lo..=d {
                    let mut m2 = m.clone();
                    m2.push(i);
                    out.push(m2);
                }
            }
        }
        out
    }

    #[test]
    fn star_examples() {
        let h3 = catalog("heisenberg3").unwrap();
        let x1 = SPoly::generator(1);
        let x2 = SPoly::generator(2);
        let p = star(&h3, DufloVariant::Actual, &x1, &x2);
        assert_eq!(p.0.coeff(&BasisWord::from_even(vec![1, 2])), Rat::one());
        assert_eq!(p.0.coeff(&BasisWord::from_even(vec![3])), Rat::new(1, 2));
        let q = star(&h3, DufloVariant::Actual, &x2, &x1);
        assert_eq!(q.0.coeff(&BasisWord::from_even(vec![3])), Rat::new(-1, 2));
        // difference is the bracket
        assert_eq!(p.0.sub(&q.0), SPoly::generator(3).0);
        // sl2: e⋆f − f⋆e = h
        let sl2 = catalog("sl2").unwrap();
        let e = SPoly::generator(1);
        let f = SPoly::generator(2);
        let ef = star(&sl2, DufloVariant::Actual, &e, &f);
        let fe = star(&sl2, DufloVariant::Actual, &f, &e);
        assert_eq!(ef.0.sub(&fe.0), SPoly::generator(3).0);
        // abelian: plain product
        let ab = catalog("abelian2").unwrap();
        let a = SPoly::monomial(vec![1, 1]);
        let b = SPoly::monomial(vec![2]);
        assert_eq!(star(&ab, DufloVariant::Actual, &a, &b), a.mul(&b));
    }

    #[test]
    fn star_commutator_is_bracket_on_generators() {
        for name in ["heisenberg3", "sl2", "aff1"] {
            let g = catalog(name).unwrap();
            for variant in [DufloVariant::Actual, DufloVariant::Modified] {
                for i in 1..=g.dim() {
                    for j in 1..=g.dim() {
                        let xi = SPoly::generator(i);
                        let xj = SPoly::generator(j);
                        let mut comm = star(&g, variant, &xi, &xj).0;
                        comm.add_scaled(&star(&g, variant, &xj, &xi).0, &Rat::from_int(-1));
                        let mut expect = SparseElement::zero();
                        for (k, f) in g.bracket(i, j) {
                            expect.add_term(BasisWord::from_even(vec![k]), f);
                        }
                        assert_eq!(comm, expect, "{name} {variant:?}: [{i},{j}]");
                    }
                }
            }
        }
    }

    #[test]
    fn star_is_associative_up_to_degree_3() {
        for name in ["heisenberg3", "sl2", "aff1"] {
            let g = catalog(name).unwrap();
            let monos = monomials(g.dim(), 3);
            for variant in [DufloVariant::Actual, DufloVariant::Modified] {
                for a in &monos {
                    for b in &monos {
                        for c in &monos {
                            let pa = SPoly::monomial(a.clone());
                            let pb = SPoly::monomial(b.clone());
                            let pc = SPoly::monomial(c.clone());
                            let left = star(&g, variant, &star(&g, variant, &pa, &pb), &pc);
                            let right = star(&g, variant, &pa, &star(&g, variant, &pb, &pc));
                            assert_eq!(left, right, "{name} {variant:?}: ({a:?}⋆{b:?})⋆{c:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chi_examples() {
        let aff1 = catalog("aff1").unwrap();
        assert_eq!(character_chi(&aff1, DufloVariant::Actual, &SPoly::unit()), Rat::one());
        assert_eq!(
            character_chi(&aff1, DufloVariant::Actual, &SPoly::generator(1)),
            Rat::new(-1, 4)
        );
        assert_eq!(
            character_chi(&aff1, DufloVariant::Actual, &SPoly::generator(2)),
            Rat::zero()
        );
        let h3 = catalog("heisenberg3").unwrap();
        for m in monomials(3, 3) {
            if !m.is_empty() {
                assert_eq!(
                    character_chi(&h3, DufloVariant::Actual, &SPoly::monomial(m)),
                    Rat::zero()
                );
            }
        }
    }

    #[test]
    fn chi_is_a_star_character() {
        for name in ["heisenberg3", "sl2", "aff1"] {
            let g = catalog(name).unwrap();
            for variant in [DufloVariant::Actual, DufloVariant::Modified] {
                for a in monomials(g.dim(), 3) {
                    for b in monomials(g.dim(), 3) {
                        let pa = SPoly::monomial(a.clone());
                        let pb = SPoly::monomial(b.clone());
                        let lhs = character_chi(&g, variant, &star(&g, variant, &pa, &pb));
                        let rhs = &character_chi(&g, variant, &pa)
                            * &character_chi(&g, variant, &pb);
                        assert_eq!(lhs, rhs, "{name} {variant:?}: χ({a:?}⋆{b:?})");
                    }
                }
            }
        }
    }

    #[test]
    fn c1_derivation_residual_vanishes() {
        for name in ["aff1", "sl2"] {
            let g = catalog(name).unwrap();
            for variant in [DufloVariant::Actual, DufloVariant::Modified] {
                for a in monomials(g.dim(), 3) {
                    for b in monomials(g.dim(), 3) {
                        let r = c1_derivation_residual(
                            &g,
                            variant,
                            &SPoly::monomial(a.clone()),
                            &SPoly::monomial(b.clone()),
                        );
                        assert!(r.is_zero(), "{name} {variant:?}: residual on {a:?}, {b:?}");
                    }
                }
            }
        }
        // abelian: trivially zero
        let ab = catalog("abelian2").unwrap();
        let r = c1_derivation_residual(
            &ab,
            DufloVariant::Actual,
            &SPoly::monomial(vec![1]),
            &SPoly::monomial(vec![2]),
        );
        assert!(r.is_zero());
    }

    #[test]
    fn variants_conjugate_by_quarter_c1_exp() {
        // ⋆_actual(a, b) = E(⋆_modified(E⁻¹ a, E⁻¹ b)) with E = exp(¼D),
        // since the odd part of the generating function is exactly −t/4.
        for name in ["aff1", "sl2", "heisenberg3"] {
            let g = catalog(name).unwrap();
            for a in monomials(g.dim(), 3) {
                for b in monomials(g.dim(), 3) {
                    let pa = SPoly::monomial(a.clone());
                    let pb = SPoly::monomial(b.clone());
                    let deg = pa.degree() + pb.degree();
                    let e = quarter_c1_exp(&g, deg, false);
                    let e_inv = quarter_c1_exp(&g, deg, true);
                    let lhs = star(&g, DufloVariant::Actual, &pa, &pb);
                    let rhs = e.apply(&star(
                        &g,
                        DufloVariant::Modified,
                        &e_inv.apply(&pa),
                        &e_inv.apply(&pb),
                    ));
                    assert_eq!(lhs, rhs, "{name}: conjugation on {a:?}, {b:?}");
                }
            }
        }
    }
}
