//! The Chevalley–Eilenberg chain complex CE(g) = U(g)⊗∧(g) as a dg
//! (U(g), ∧(g*))-bimodule, its Koszul-duality data, and truncated cohomology
//! evidence by exact rank computations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg;
use crate::poly::{contract_word, ce_cochain_d, DThetaPoly, ThetaPoly};
use crate::rat::Rat;
use crate::sparse::SparseElement;
use crate::uea::{hat_product, pbw_normal_form, CeElement, Letter, UeaElement};
use crate::word::{canonicalize_odd, BasisWord};

/// The Chevalley–Eilenberg differential
/// `d(u θ_{i1}···θ_{iq}) = Σ_k (−1)^{k+1} (u·x_{ik}) θ^{I∖ik}
///                       + Σ_{k<l} (−1)^{k+l} f_{ik,il}^j u θ_j θ^{I∖{ik,il}}`,
/// with the reinserted θ_j canonicalized from the front position.
pub fn d_ce(g: &LieAlgebra, e: &CeElement) -> CeElement {
    let mut out = SparseElement::zero();
    for (w, c) in e.0.iter() {
        let q = w.odd.len();
        // first sum: multiply x_{ik} into u from the right
        for k in 0..q {
            let sign = if k % 2 == 0 { c.clone() } else { -c };
            let mut letters: Vec<Letter> = w.even.iter().map(|&j| Letter::X(j)).collect();
            letters.push(Letter::X(w.odd[k]));
            let prod = pbw_normal_form(g, vec![(letters, sign)]);
            let mut rest: Vec<usize> = w.odd.to_vec();
            rest.remove(k);
            for (pw, pc) in prod.iter() {
                out.add_term(BasisWord { even: pw.even.clone(), odd: rest.clone() }, pc.clone());
            }
        }
        // second sum: contract a pair through the bracket
        for k in 0..q {
            for l in (k + 1)..q {
                // (−1)^{k+l} with 1-based k, l; k+l parity flips with 0-based
                let base = if (k + l) % 2 == 0 { c.clone() } else { -c };
                for (j, f) in g.bracket(w.odd[k], w.odd[l]) {
                    let mut seq = vec![j];
                    for (t, &i) in w.odd.iter().enumerate() {
                        if t != k && t != l {
                            seq.push(i);
                        }
                    }
                    if let Some((odd, sign)) = canonicalize_odd(&seq) {
                        let mut coeff = &base * &f;
                        if sign < 0 {
                            coeff = -coeff;
                        }
                        out.add_term(BasisWord { even: w.even.clone(), odd }, coeff);
                    }
                }
            }
        }
    }
    CeElement(out)
}

/// Left U(g)-action `m_L(u1, u θ^I) = (u1·u) θ^I`.
pub fn m_l(g: &LieAlgebra, u1: &UeaElement, e: &CeElement) -> CeElement {
    hat_product(g, &CeElement(u1.0.clone()), e)
}

/// Right ∧(g*)-action `m_R(u θ^I, ∂θ^J) = (−1)^{|I||J|} u (∂θ^J(θ^I))`.
pub fn m_r(_g: &LieAlgebra, e: &CeElement, b: &DThetaPoly) -> CeElement {
    let mut out = SparseElement::zero();
    for (wb, cb) in b.0.iter() {
        let jlen = wb.odd.len();
        for (we, ce) in e.0.iter() {
            let sign = if (we.odd.len() * jlen) % 2 == 0 { cb * ce } else { -&(cb * ce) };
            let single = SparseElement::term(we.clone(), sign);
            out.add_scaled(&contract_word(&single, &wb.odd), &Rat::one());
        }
    }
    CeElement(out)
}

/// Compatibility residual of the right dg action on pure exterior words:
/// `d(∂θ^I(θ^J)) − (d∂θ^I)(θ^J) − (−1)^{|I|} ∂θ^I(d θ^J)`.
///
/// Both contractions act U(g)-linearly. The residual vanishes for every pair
/// of multi-indices exactly when the right action is a dg-module action.
pub fn leibniz_residual(g: &LieAlgebra, i_word: &[usize], j_word: &[usize]) -> CeElement {
    let theta_j = CeElement::basis_word(vec![], j_word.to_vec());
    // d(∂θ^I(θ^J))
    let mut res = d_ce(g, &CeElement(contract_word(&theta_j.0, i_word))).0;
    // − (d ∂θ^I)(θ^J)
    let d_dtheta = ce_cochain_d(g, &DThetaPoly::word(i_word.to_vec()));
    for (w, c) in d_dtheta.0.iter() {
        res.add_scaled(&contract_word(&theta_j.0, &w.odd), &-c);
    }
    // − (−1)^{|I|} ∂θ^I(d θ^J)
    let sign = Rat::from_int(if i_word.len() % 2 == 0 { -1 } else { 1 });
    res.add_scaled(&contract_word(&d_ce(g, &theta_j).0, i_word), &sign);
    CeElement(res)
}

/// The twisting cocycle κ: projection of ∧(g) onto θ-degree −1 followed by
/// the inclusion g ↪ U(g).
pub fn twisting_kappa(t: &ThetaPoly) -> UeaElement {
    let mut out = SparseElement::zero();
    for (w, c) in t.0.iter() {
        if w.odd.len() == 1 {
            out.add_term(BasisWord::from_even(vec![w.odd[0]]), c.clone());
        }
    }
    UeaElement(out)
}

/// The κ-twisted summand d₁ of the differential, computed through the
/// coproduct route: split one θ off the word (with its unshuffle sign), apply
/// κ, and multiply the result into u from the right. Coincides with the first
/// sum of the differential; kept as an independent code path.
pub fn kappa_twisted_d1(g: &LieAlgebra, e: &CeElement) -> CeElement {
    let mut out = SparseElement::zero();
    for (w, c) in e.0.iter() {
        for k in 0..w.odd.len() {
            // θ^I = ε({i_k}, I) θ_{i_k} θ^{I∖i_k} with ε = (−1)^k (0-based)
            let sign = if k % 2 == 0 { c.clone() } else { -c };
            let kappa = twisting_kappa(&ThetaPoly(SparseElement::term(
                BasisWord::from_odd(vec![w.odd[k]]),
                Rat::one(),
            )));
            let mut rest: Vec<usize> = w.odd.to_vec();
            rest.remove(k);
            let u = CeElement(SparseElement::term(
                BasisWord { even: w.even.clone(), odd: vec![] },
                sign,
            ));
            let prod = hat_product(g, &u, &CeElement(kappa.0));
            for (pw, pc) in prod.0.iter() {
                out.add_term(BasisWord { even: pw.even.clone(), odd: rest.clone() }, pc.clone());
            }
        }
    }
    CeElement(out)
}

/// The codifferential d₂ on ∧(g): the bracket summand of the differential
/// with u = 1.
pub fn d2_coalgebra(g: &LieAlgebra, t: &ThetaPoly) -> ThetaPoly {
    let mut out = SparseElement::zero();
    for (w, c) in t.0.iter() {
        let q = w.odd.len();
        for k in 0..q {
            for l in (k + 1)..q {
                let base = if (k + l) % 2 == 0 { c.clone() } else { -c };
                for (j, f) in g.bracket(w.odd[k], w.odd[l]) {
                    let mut seq = vec![j];
                    for (t2, &i) in w.odd.iter().enumerate() {
                        if t2 != k && t2 != l {
                            seq.push(i);
                        }
                    }
                    if let Some((odd, sign)) = canonicalize_odd(&seq) {
                        let mut coeff = &base * &f;
                        if sign < 0 {
                            coeff = -coeff;
                        }
                        out.add_term(BasisWord::from_odd(odd), coeff);
                    }
                }
            }
        }
    }
    ThetaPoly(out)
}

/// One row of the truncated cohomology report.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CohomologyRow {
    pub degree: i32,
    pub filtration: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim_h: usize,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CohomologyReport {
    pub rows: Vec<CohomologyRow>,
    /// Every negative-degree cocycle supported in filtration ≤ N−1 bounds
    /// within filtration ≤ N.
    pub stable: bool,
}

/// PBW basis words `x^α θ^I` with θ-length `q` and `|α| ≤ max_alpha`.
fn window_basis(d: usize, q: usize, max_alpha: usize) -> Vec<BasisWord> {
    let mut evens: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=max_alpha {
        let snapshot: Vec<Vec<usize>> =
            evens.iter().filter(|m| m.len() == len - 1).cloned().collect();
        for m in snapshot {
            let lo = m.last().copied().unwrap_or(1);
            for i in lo..=d {
                let mut m2 = m.clone();
                m2.push(i);
                evens.push(m2);
            }
        }
    }
    let mut odds: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1 << d) {
        let o: Vec<usize> = (1..=d).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        if o.len() == q {
            odds.push(o);
        }
    }
    odds.sort();
    let mut words = Vec::new();
    for o in &odds {
        for e in &evens {
            words.push(BasisWord { even: e.clone(), odd: o.clone() });
        }
    }
    words
}

/// Matrix of d restricted to the span of `source`, expressed over `target`.
fn d_matrix(g: &LieAlgebra, source: &[BasisWord], target: &[BasisWord]) -> Vec<Vec<Rat>> {
    let index: BTreeMap<&BasisWord, usize> =
        target.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows = Vec::with_capacity(source.len());
    for w in source {
        let img = d_ce(g, &CeElement(SparseElement::term(w.clone(), Rat::one())));
        let mut row = vec![Rat::zero(); target.len()];
        for (iw, c) in img.0.iter() {
            let col = index
                .get(iw)
                .unwrap_or_else(|| panic!("image word {iw:?} escapes the filtration window"));
            row[*col] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Truncated cohomology of CE(g) on the window `|α| + |I| ≤ n`, with exact
/// ranks over ℚ and a one-level stability margin for the acyclicity evidence
/// (cocycles in filtration ≤ n−1 must bound within filtration ≤ n).
pub fn truncated_cohomology(g: &LieAlgebra, n: usize) -> Result<CohomologyReport> {
    if n < 1 {
        return Err(Error::Contract("truncated_cohomology requires N >= 1".to_string()));
    }
    let d = g.dim();
    let window: usize = (0..=d).map(|q| window_basis(d, q, n.saturating_sub(q)).len()).sum();
    if window > 20_000 {
        return Err(Error::ResourceBudget(format!(
            "cohomology window holds {window} basis words (limit 20000); lower --max-filtration"
        )));
    }
    let basis_at = |q: usize| -> Vec<BasisWord> {
        if q > d || q > n {
            Vec::new()
        } else {
            window_basis(d, q, n - q)
        }
    };
    let mut rows = Vec::new();
    let mut stable = true;
    for q in (0..=d.min(n)).rev() {
        let degree = -(q as i32);
        let source = basis_at(q);
        if source.is_empty() {
            continue;
        }
        let target = if q >= 1 { basis_at(q - 1) } else { Vec::new() };
        let incoming = basis_at(q + 1);
        let out_matrix = if q >= 1 { d_matrix(g, &source, &target) } else { Vec::new() };
        let in_matrix =
            if incoming.is_empty() { Vec::new() } else { d_matrix(g, &incoming, &source) };
        let rank_out = if q >= 1 { linalg::rank(out_matrix.clone()) } else { 0 };
        let rank_in = if in_matrix.is_empty() { 0 } else { linalg::rank(in_matrix.clone()) };
        let dim = source.len();
        rows.push(CohomologyRow {
            degree,
            filtration: n,
            dim,
            rank_in,
            rank_out,
            dim_h: dim - rank_in - rank_out,
        });
        // stability margin in negative degrees: cocycles supported in
        // F_{n-1} must lie in the image of d from F_n
        if q >= 1 && q <= n - 1 {
            let small_source = window_basis(d, q, n - 1 - q);
            if !small_source.is_empty() {
                let small_matrix = d_matrix(g, &small_source, &target);
                let kernel = linalg::left_nullspace(&small_matrix);
                if !kernel.is_empty() {
                    // express kernel vectors in the big source coordinates
                    let index: BTreeMap<&BasisWord, usize> =
                        source.iter().enumerate().map(|(i, w)| (w, i)).collect();
                    let lifted: Vec<Vec<Rat>> = kernel
                        .iter()
                        .map(|k| {
                            let mut v = vec![Rat::zero(); source.len()];
                            for (i, w) in small_source.iter().enumerate() {
                                v[index[w]] = k[i].clone();
                            }
                            v
                        })
                        .collect();
                    let image_rows = if incoming.is_empty() { Vec::new() } else { in_matrix };
                    if !linalg::all_in_row_span(&image_rows, &lifted) {
                        stable = false;
                    }
                }
            }
        }
    }
    rows.sort_by_key(|r| r.degree);
    Ok(CohomologyReport { rows, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{catalog, CATALOG_NAMES};
    use crate::uea::dk_hat;
    use crate::uea::tests::hat_basis;

    fn word(even: &[usize], odd: &[usize]) -> BasisWord {
        BasisWord { even: even.to_vec(), odd: odd.to_vec() }
    }

    fn ce(even: &[usize], odd: &[usize]) -> CeElement {
        CeElement::basis_word(even.to_vec(), odd.to_vec())
    }

    #[test]
    fn d_ce_examples() {
        let h3 = catalog("heisenberg3").unwrap();
        // d(u θ_i) = u·x_i
        let d = d_ce(&h3, &ce(&[2], &[1]));
        assert_eq!(d.0, SparseElement::term(word(&[1, 2], &[]), Rat::one())
            .sub(&SparseElement::term(word(&[3], &[]), Rat::one())));
        // d(θ1θ2) = x1θ2 − x2θ1 − θ3
        let d = d_ce(&h3, &ce(&[], &[1, 2]));
        assert_eq!(d.0.coeff(&word(&[1], &[2])), Rat::one());
        assert_eq!(d.0.coeff(&word(&[2], &[1])), Rat::from_int(-1));
        assert_eq!(d.0.coeff(&word(&[], &[3])), Rat::from_int(-1));
        assert_eq!(d.0.len(), 3);
        // d(u) = 0 in θ-degree 0
        assert!(d_ce(&h3, &ce(&[1, 2, 3], &[])).is_zero());
    }

    #[test]
    fn d_ce_squares_to_zero() {
        for name in CATALOG_NAMES {
            let g = catalog(name).unwrap();
            for w in hat_basis(g.dim(), 6) {
                let e = CeElement(SparseElement::term(w.clone(), Rat::one()));
                assert!(d_ce(&g, &d_ce(&g, &e)).is_zero(), "{name}: d² ≠ 0 on {w:?}");
            }
        }
    }

    #[test]
    fn dk_hat_equals_d_ce() {
        for name in CATALOG_NAMES {
            let g = catalog(name).unwrap();
            for w in hat_basis(g.dim(), 5) {
                let e = CeElement(SparseElement::term(w.clone(), Rat::one()));
                assert_eq!(dk_hat(&g, &e), d_ce(&g, &e), "{name}: mismatch on {w:?}");
            }
        }
    }

    #[test]
    fn m_l_examples() {
        let h3 = catalog("heisenberg3").unwrap();
        let e = ce(&[1], &[3]);
        // unit acts trivially
        assert_eq!(m_l(&h3, &UeaElement::unit(), &e), e);
        // m_L(x2, x1θ3) = (x1x2 − x3)θ3
        let r = m_l(&h3, &UeaElement::generator(2), &e);
        assert_eq!(r.0.coeff(&word(&[1, 2], &[3])), Rat::one());
        assert_eq!(r.0.coeff(&word(&[3], &[3])), Rat::from_int(-1));
        // m_L(x_i, θ^I) = x_i θ^I
        assert_eq!(m_l(&h3, &UeaElement::generator(2), &ce(&[], &[1, 2])), ce(&[2], &[1, 2]));
    }

    #[test]
    fn m_r_examples() {
        let h3 = catalog("heisenberg3").unwrap();
        let e = ce(&[1], &[1, 2]); // u θ1θ2 with u = x1
        // m_R(uθ1θ2, ∂θ1) = uθ2
        assert_eq!(m_r(&h3, &e, &DThetaPoly::generator(1)), ce(&[1], &[2]));
        // m_R(uθ1θ2, ∂θ2) = −uθ1
        assert_eq!(m_r(&h3, &e, &DThetaPoly::generator(2)).0, ce(&[1], &[1]).0.neg());
        // m_R(e, 1) = e
        assert_eq!(m_r(&h3, &e, &DThetaPoly::unit()), e);
    }

    #[test]
    fn left_action_properties() {
        let sl2 = catalog("sl2").unwrap();
        let u1 = UeaElement::generator(1);
        let u2 = UeaElement::generator(3);
        for w in hat_basis(3, 3) {
            let e = CeElement(SparseElement::term(w, Rat::one()));
            // m_L(u1·u2, e) = m_L(u1, m_L(u2, e))
            let prod = crate::uea::uea_product(&sl2, &u1, &u2);
            assert_eq!(m_l(&sl2, &prod, &e), m_l(&sl2, &u1, &m_l(&sl2, &u2, &e)));
            // d is left U(g)-linear
            assert_eq!(d_ce(&sl2, &m_l(&sl2, &u1, &e)), m_l(&sl2, &u1, &d_ce(&sl2, &e)));
        }
    }

    #[test]
    fn actions_commute() {
        let sl2 = catalog("sl2").unwrap();
        let u = UeaElement::generator(2);
        for w in hat_basis(3, 3) {
            let e = CeElement(SparseElement::term(w, Rat::one()));
            for j in [vec![1], vec![2], vec![1, 3]] {
                let b = DThetaPoly::word(j);
                assert_eq!(
                    m_r(&sl2, &m_l(&sl2, &u, &e), &b),
                    m_l(&sl2, &u, &m_r(&sl2, &e, &b))
                );
            }
        }
    }

    #[test]
    fn leibniz_residual_vanishes() {
        // all multi-index pairs with |I|, |J| ≤ 3
        for name in CATALOG_NAMES {
            let g = catalog(name).unwrap();
            let d = g.dim();
            let mut subsets: Vec<Vec<usize>> = Vec::new();
            for mask in 0u32..(1 << d) {
                subsets.push((1..=d).filter(|i| mask & (1 << (i - 1)) != 0).collect());
            }
            for i in &subsets {
                for j in &subsets {
                    let r = leibniz_residual(&g, i, j);
                    assert!(r.is_zero(), "{name}: residual on I={i:?}, J={j:?} is {:?}", r.0);
                }
            }
        }
    }

    #[test]
    fn leibniz_residual_trivial_when_i_too_long() {
        // |I| > |J| + 1 makes every term vanish separately
        let sl2 = catalog("sl2").unwrap();
        assert!(leibniz_residual(&sl2, &[1, 2, 3], &[1]).is_zero());
    }

    #[test]
    fn kappa_examples() {
        let t1 = ThetaPoly::word(vec![1]);
        assert_eq!(twisting_kappa(&t1), UeaElement::generator(1));
        assert!(twisting_kappa(&ThetaPoly::word(vec![1, 2])).is_zero());
        assert!(twisting_kappa(&ThetaPoly::unit()).is_zero());
    }

    #[test]
    fn kappa_twisted_d1_matches_first_sum() {
        // d₁ computed through κ equals d_CE minus the bracket summand
        for name in ["heisenberg3", "sl2", "aff1"] {
            let g = catalog(name).unwrap();
            for w in hat_basis(g.dim(), 4) {
                let e = CeElement(SparseElement::term(w.clone(), Rat::one()));
                let d1 = kappa_twisted_d1(&g, &e);
                // reconstruct the bracket summand via d2 on the θ-part
                let full = d_ce(&g, &e);
                let theta = ThetaPoly(SparseElement::term(
                    BasisWord::from_odd(w.odd.clone()),
                    Rat::one(),
                ));
                let mut d2_part = SparseElement::zero();
                for (tw, tc) in d2_coalgebra(&g, &theta).0.iter() {
                    d2_part.add_term(
                        BasisWord { even: w.even.clone(), odd: tw.odd.clone() },
                        tc.clone(),
                    );
                }
                assert_eq!(d1.0.add(&d2_part), full.0, "{name}: κ route differs on {w:?}");
            }
        }
    }

    #[test]
    fn d2_examples() {
        let h3 = catalog("heisenberg3").unwrap();
        // d₂(θ1θ2) = −θ3
        let d = d2_coalgebra(&h3, &ThetaPoly::word(vec![1, 2]));
        assert_eq!(d.0, SparseElement::term(BasisWord::from_odd(vec![3]), Rat::from_int(-1)));
        // d₂(θ_i) = 0
        assert!(d2_coalgebra(&h3, &ThetaPoly::word(vec![1])).is_zero());
        // abelian: identically zero
        let ab = catalog("abelian3").unwrap();
        assert!(d2_coalgebra(&ab, &ThetaPoly::word(vec![1, 2, 3])).is_zero());
    }

    #[test]
    fn augmentation_is_a_chain_map() {
        for name in CATALOG_NAMES {
            let g = catalog(name).unwrap();
            for w in hat_basis(g.dim(), 3) {
                let e = CeElement(SparseElement::term(w.clone(), Rat::one()));
                // ε ∘ d = 0
                assert!(d_ce(&g, &e).augmentation().is_zero());
            }
            // ε(m_L(u, 1)) = ε(u)
            let mut u = UeaElement::generator(1).0;
            u.add_term(BasisWord::empty(), Rat::new(5, 3));
            let u = UeaElement(u);
            assert_eq!(
                m_l(&g, &u, &CeElement::unit()).augmentation(),
                u.augmentation()
            );
        }
    }

    #[test]
    fn truncated_cohomology_abelian2() {
        let g = catalog("abelian2").unwrap();
        let report = truncated_cohomology(&g, 3).unwrap();
        let dims: Vec<(i32, usize)> = report.rows.iter().map(|r| (r.degree, r.dim)).collect();
        assert_eq!(dims, vec![(-2, 3), (-1, 12), (0, 10)]);
        for row in &report.rows {
            if row.degree < 0 {
                assert_eq!(row.dim_h, 0, "exactness fails in degree {}", row.degree);
            } else {
                assert_eq!(row.dim_h, 1, "H⁰ window should be one-dimensional");
            }
        }
        assert!(report.stable);
    }

    #[test]
    fn truncated_cohomology_stability() {
        for name in ["heisenberg3", "sl2"] {
            let g = catalog(name).unwrap();
            for n in [3, 4] {
                let report = truncated_cohomology(&g, n).unwrap();
                assert!(report.stable, "{name} N={n}: stability fails");
                let h0 = report.rows.iter().find(|r| r.degree == 0).unwrap();
                assert_eq!(h0.dim_h, 1, "{name} N={n}: H⁰ window");
            }
        }
    }

    #[test]
    fn truncated_cohomology_epsilon_surjective_at_n1() {
        // any g, N=1: the degree-0 window contains the constants, ε onto ℚ
        for name in CATALOG_NAMES {
            let g = catalog(name).unwrap();
            let report = truncated_cohomology(&g, 1).unwrap();
            let row0 = report.rows.iter().find(|r| r.degree == 0).unwrap();
            assert!(row0.dim >= 1);
        }
    }

    #[test]
    fn truncated_cohomology_budget() {
        let g = catalog("abelian3").unwrap();
        assert!(matches!(
            truncated_cohomology(&g, 40),
            Err(Error::ResourceBudget(_))
        ));
    }
}
