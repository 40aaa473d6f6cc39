//! Generic A∞ machinery: shifted Taylor components of algebras, bimodules
//! and morphisms, the m↔d suspension conversion, coderivation-square and
//! morphism residuals at bounded arity, the tensor product of bimodules, and
//! the bar-collapse morphism μ.
//!
//! Sign conventions, fixed once and verified by the dg-embedding residual
//! suite:
//!
//! * the coderivation extension uses the Koszul rule with |d| = 1 over the
//!   *shifted* degrees of the factors passed;
//! * suspension powers apply slotwise right-to-left with Koszul passing
//!   signs, so `s^{⊗n}` on factors of degrees `d_k` carries
//!   `(−1)^{Σ_k (n−k)·d_k}`;
//! * consequently a dg algebra embeds via `d¹ = s∘d∘s⁻¹` and
//!   `d²(sa₁|sa₂) = (−1)^{|a₁|} s(a₁·a₂)`, and a dg bimodule via
//!   `d^{1,0}(sa|sk) = (−1)^{|a|} s(a·k)`, `d^{0,1}(sk|sb) = (−1)^{|k|} s(k·b)`.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::sparse::SparseElement;

/// Values that form a ℚ-linear space.
pub trait Lin: Clone {
    fn lin_zero() -> Self;
    fn lin_is_zero(&self) -> bool;
    fn lin_add_scaled(&mut self, other: &Self, c: &Rat);
}

impl Lin for Rat {
    fn lin_zero() -> Self {
        Rat::zero()
    }
    fn lin_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn lin_add_scaled(&mut self, other: &Self, c: &Rat) {
        *self = &*self + &(other * c);
    }
}

impl Lin for SparseElement {
    fn lin_zero() -> Self {
        SparseElement::zero()
    }
    fn lin_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn lin_add_scaled(&mut self, other: &Self, c: &Rat) {
        self.add_scaled(other, c);
    }
}

/// A homogeneous value together with its degree in the *unshifted* space.
#[derive(Clone, Debug, PartialEq)]
pub struct Graded<E> {
    pub val: E,
    pub deg: i32,
}

impl<E> Graded<E> {
    pub fn new(val: E, deg: i32) -> Self {
        Graded { val, deg }
    }

    /// Degree of the suspended copy `s(val)`.
    pub fn sdeg(&self) -> i32 {
        self.deg - 1
    }
}

/// Sign of `s^{⊗n}` (or `(s⁻¹)^{⊗n}`) applied to factors of the given
/// degrees: `(−1)^{Σ_k (n−k)·deg_k}` with 1-based `k`.
pub fn suspension_sign(degrees: &[i32]) -> i32 {
    let n = degrees.len() as i32;
    let mut exp = 0i32;
    for (k, d) in degrees.iter().enumerate() {
        exp += (n - (k as i32 + 1)) * *d;
    }
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Global sign `(−1)^{n(n−1)/2}` of the algebra-level m↔d conversion.
pub fn global_alg_sign(n: usize) -> i32 {
    if (n * n.wrapping_sub(1).max(0) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Global sign `(−1)^{(m+n)(m+n+1)/2}` of the bimodule-level conversion.
pub fn global_bimod_sign(m: usize, n: usize) -> i32 {
    if ((m + n) * (m + n + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// An arity-indexed family of shifted multilinear operations on one space.
/// Arguments carry unshifted degrees; the value is the unsuspended output,
/// whose degree is `Σ (deg_i − 1) + 1 + 1` (degree-1 components).
pub struct TaylorAlgebra<'a, E> {
    pub eval: Rc<dyn Fn(usize, &[Graded<E>]) -> Result<E> + 'a>,
}

impl<'a, E: Lin + 'a> TaylorAlgebra<'a, E> {
    /// Embedding of a dg algebra `(d, m)` as a flat A∞-algebra.
    pub fn from_dg(
        d1: impl Fn(&E) -> E + 'a,
        m2: impl Fn(&E, &E) -> E + 'a,
    ) -> TaylorAlgebra<'a, E> {
        TaylorAlgebra {
            eval: Rc::new(move |arity, args| match arity {
                1 => Ok(d1(&args[0].val)),
                2 => {
                    let mut v = m2(&args[0].val, &args[1].val);
                    if args[0].deg.rem_euclid(2) == 1 {
                        let mut neg = E::lin_zero();
                        neg.lin_add_scaled(&v, &Rat::from_int(-1));
                        v = neg;
                    }
                    Ok(v)
                }
                _ => Ok(E::lin_zero()),
            }),
        }
    }

    pub fn zero() -> TaylorAlgebra<'a, E> {
        TaylorAlgebra { eval: Rc::new(|_, _| Ok(E::lin_zero())) }
    }
}

/// Taylor components of an A∞-bimodule: `d^{m,n}` consumes m A-arguments,
/// the K-slot and n B-arguments, producing a K-value.
pub struct TaylorBimodule<'a, EA, EK, EB> {
    #[allow(clippy::type_complexity)]
    pub eval: Rc<dyn Fn(usize, usize, &[Graded<EA>], &Graded<EK>, &[Graded<EB>]) -> Result<EK> + 'a>,
}

impl<'a, EA: 'a, EK: Lin + 'a, EB: 'a> TaylorBimodule<'a, EA, EK, EB> {
    /// Embedding of a dg bimodule `(d_K, m_L, m_R)`.
    pub fn from_dg(
        d: impl Fn(&EK) -> EK + 'a,
        m_l: impl Fn(&EA, &EK) -> EK + 'a,
        m_r: impl Fn(&EK, &EB) -> EK + 'a,
    ) -> TaylorBimodule<'a, EA, EK, EB> {
        TaylorBimodule {
            eval: Rc::new(move |m, n, a, k, b| {
                let signed = |v: EK, parity: i32| {
                    if parity.rem_euclid(2) == 1 {
                        let mut neg = EK::lin_zero();
                        neg.lin_add_scaled(&v, &Rat::from_int(-1));
                        neg
                    } else {
                        v
                    }
                };
                match (m, n) {
                    (0, 0) => Ok(d(&k.val)),
                    (1, 0) => Ok(signed(m_l(&a[0].val, &k.val), a[0].deg)),
                    (0, 1) => Ok(signed(m_r(&k.val, &b[0].val), k.deg)),
                    _ => Ok(EK::lin_zero()),
                }
            }),
        }
    }

    pub fn zero() -> TaylorBimodule<'a, EA, EK, EB> {
        TaylorBimodule { eval: Rc::new(|_, _, _, _, _| Ok(EK::lin_zero())) }
    }
}

/// Taylor components of a morphism of A∞-bimodules over fixed algebras; all
/// components have degree 0.
pub struct MorphismTaylor<'a, EA, K1, EB, K2> {
    #[allow(clippy::type_complexity)]
    pub eval: Rc<dyn Fn(usize, usize, &[Graded<EA>], &Graded<K1>, &[Graded<EB>]) -> Result<K2> + 'a>,
}

impl<'a, EA: 'a, K1: 'a, EB: 'a, K2: Lin + 'a> MorphismTaylor<'a, EA, K1, EB, K2> {
    /// Strict morphism: only the (0,0) component is nonzero.
    pub fn strict(phi: impl Fn(&K1) -> K2 + 'a) -> Self {
        MorphismTaylor {
            eval: Rc::new(move |m, n, _a, k, _b| {
                if m == 0 && n == 0 {
                    Ok(phi(&k.val))
                } else {
                    Ok(K2::lin_zero())
                }
            }),
        }
    }
}

/// `m^n` from `d^n`: `m^n = (−1)^{n(n−1)/2} s⁻¹ ∘ d^n ∘ s^{⊗n}` with the
/// suspension applied by the Koszul rule. Arguments carry unshifted degrees.
pub fn m_from_d<E: Lin>(
    n: usize,
    d: &dyn Fn(usize, &[Graded<E>]) -> Result<E>,
    args: &[Graded<E>],
) -> Result<E> {
    debug_assert_eq!(args.len(), n);
    let degs: Vec<i32> = args.iter().map(|a| a.deg).collect();
    let sign = global_alg_sign(n) * suspension_sign(&degs);
    let mut out = E::lin_zero();
    out.lin_add_scaled(&d(n, args)?, &Rat::from_int(sign as i64));
    Ok(out)
}

/// Exact inverse of [`m_from_d`]: the same total sign (it squares to one).
pub fn d_from_m<E: Lin>(
    n: usize,
    m: &dyn Fn(usize, &[Graded<E>]) -> Result<E>,
    args: &[Graded<E>],
) -> Result<E> {
    m_from_d(n, m, args)
}

/// Bimodule conversion sign: `d^{m,n}` from `m^{m,n}` on arguments of the
/// given unshifted degrees (A-args, K, B-args in order).
pub fn bimod_conversion_sign(m: usize, n: usize, degrees: &[i32]) -> i32 {
    debug_assert_eq!(degrees.len(), m + 1 + n);
    global_bimod_sign(m, n) * suspension_sign(degrees)
}

fn sign_rat(s: i32) -> Rat {
    Rat::from_int(s as i64)
}

/// Parity of the sum of shifted degrees of a slice of factors.
fn sdeg_sum<E>(args: &[Graded<E>]) -> i32 {
    args.iter().map(|a| a.sdeg()).sum()
}

/// The coderivation-square composite `π_K ∘ d ∘ d` evaluated on one tuple:
/// the sum over all inner collapses of a contiguous block (through d_A, d_B
/// or d_K) followed by the full outer collapse through d_K. Zero on every
/// tuple exactly when the Taylor components define an A∞-bimodule.
pub fn bimodule_square_residual<EA, EK, EB>(
    alg_a: &TaylorAlgebra<EA>,
    alg_b: &TaylorAlgebra<EB>,
    bim: &TaylorBimodule<EA, EK, EB>,
    a_args: &[Graded<EA>],
    k_arg: &Graded<EK>,
    b_args: &[Graded<EB>],
) -> Result<EK>
where
    EA: Lin,
    EK: Lin,
    EB: Lin,
{
    let m = a_args.len();
    let n = b_args.len();
    let mut total = EK::lin_zero();
    // A-blocks [i, j)
    for i in 0..m {
        for j in (i + 1)..=m {
            let sign = suspension_parity_sign(sdeg_sum(&a_args[..i]));
            let block = &a_args[i..j];
            let inner = (alg_a.eval)(block.len(), block)?;
            let inner_deg = sdeg_sum(block) + 1 + 1;
            let mut new_a: Vec<Graded<EA>> = a_args[..i].to_vec();
            new_a.push(Graded::new(inner, inner_deg));
            new_a.extend_from_slice(&a_args[j..]);
            let outer = (bim.eval)(new_a.len(), n, &new_a, k_arg, b_args)?;
            total.lin_add_scaled(&outer, &sign_rat(sign));
        }
    }
    // K-blocks: a_args[i..], k, b_args[..j]
    for i in 0..=m {
        for j in 0..=n {
            let sign = suspension_parity_sign(sdeg_sum(&a_args[..i]));
            let inner = (bim.eval)(m - i, j, &a_args[i..], k_arg, &b_args[..j])?;
            let inner_deg = sdeg_sum(&a_args[i..]) + k_arg.sdeg() + sdeg_sum(&b_args[..j]) + 1 + 1;
            let new_k = Graded::new(inner, inner_deg);
            let outer = (bim.eval)(i, n - j, &a_args[..i], &new_k, &b_args[j..])?;
            total.lin_add_scaled(&outer, &sign_rat(sign));
        }
    }
    // B-blocks [i, j)
    for i in 0..n {
        for j in (i + 1)..=n {
            let before = sdeg_sum(a_args) + k_arg.sdeg() + sdeg_sum(&b_args[..i]);
            let sign = suspension_parity_sign(before);
            let block = &b_args[i..j];
            let inner = (alg_b.eval)(block.len(), block)?;
            let inner_deg = sdeg_sum(block) + 1 + 1;
            let mut new_b: Vec<Graded<EB>> = b_args[..i].to_vec();
            new_b.push(Graded::new(inner, inner_deg));
            new_b.extend_from_slice(&b_args[j..]);
            let outer = (bim.eval)(m, new_b.len(), a_args, k_arg, &new_b)?;
            total.lin_add_scaled(&outer, &sign_rat(sign));
        }
    }
    Ok(total)
}

fn suspension_parity_sign(sdeg: i32) -> i32 {
    if sdeg.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A∞-morphism residual `π_K ∘ (Φ̂ ∘ d_src − d_tgt ∘ Φ̂)` on one tuple.
pub fn morphism_residual<EA, K1, EB, K2>(
    phi: &MorphismTaylor<EA, K1, EB, K2>,
    alg_a: &TaylorAlgebra<EA>,
    alg_b: &TaylorAlgebra<EB>,
    src: &TaylorBimodule<EA, K1, EB>,
    tgt: &TaylorBimodule<EA, K2, EB>,
    a_args: &[Graded<EA>],
    k_arg: &Graded<K1>,
    b_args: &[Graded<EB>],
) -> Result<K2>
where
    EA: Lin,
    K1: Lin,
    EB: Lin,
    K2: Lin,
{
    let m = a_args.len();
    let n = b_args.len();
    let mut total = K2::lin_zero();
    // Φ̂ ∘ d_src: inner collapse through the source structure, then φ.
    // A-blocks
    for i in 0..m {
        for j in (i + 1)..=m {
            let sign = suspension_parity_sign(sdeg_sum(&a_args[..i]));
            let block = &a_args[i..j];
            let inner = (alg_a.eval)(block.len(), block)?;
            let inner_deg = sdeg_sum(block) + 2;
            let mut new_a: Vec<Graded<EA>> = a_args[..i].to_vec();
            new_a.push(Graded::new(inner, inner_deg));
            new_a.extend_from_slice(&a_args[j..]);
            let v = (phi.eval)(new_a.len(), n, &new_a, k_arg, b_args)?;
            total.lin_add_scaled(&v, &sign_rat(sign));
        }
    }
    // K-blocks
    for i in 0..=m {
        for j in 0..=n {
            let sign = suspension_parity_sign(sdeg_sum(&a_args[..i]));
            let inner = (src.eval)(m - i, j, &a_args[i..], k_arg, &b_args[..j])?;
            let inner_deg = sdeg_sum(&a_args[i..]) + k_arg.sdeg() + sdeg_sum(&b_args[..j]) + 2;
            let new_k = Graded::new(inner, inner_deg);
            let v = (phi.eval)(i, n - j, &a_args[..i], &new_k, &b_args[j..])?;
            total.lin_add_scaled(&v, &sign_rat(sign));
        }
    }
    // B-blocks
    for i in 0..n {
        for j in (i + 1)..=n {
            let before = sdeg_sum(a_args) + k_arg.sdeg() + sdeg_sum(&b_args[..i]);
            let sign = suspension_parity_sign(before);
            let block = &b_args[i..j];
            let inner = (alg_b.eval)(block.len(), block)?;
            let inner_deg = sdeg_sum(block) + 2;
            let mut new_b: Vec<Graded<EB>> = b_args[..i].to_vec();
            new_b.push(Graded::new(inner, inner_deg));
            new_b.extend_from_slice(&b_args[j..]);
            let v = (phi.eval)(m, new_b.len(), a_args, k_arg, &new_b)?;
            total.lin_add_scaled(&v, &sign_rat(sign));
        }
    }
    // − d_tgt ∘ Φ̂: φ absorbs a block around the K-slot (degree 0, no signs).
    for i in (0..=m).rev() {
        for j in 0..=n {
            let phi_val = (phi.eval)(m - i, j, &a_args[i..], k_arg, &b_args[..j])?;
            let phi_deg = sdeg_sum(&a_args[i..]) + k_arg.sdeg() + sdeg_sum(&b_args[..j]) + 1;
            let new_k = Graded::new(phi_val, phi_deg);
            let v = (tgt.eval)(i, n - j, &a_args[..i], &new_k, &b_args[j..])?;
            total.lin_add_scaled(&v, &Rat::from_int(-1));
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Tensor product of bimodules
// ---------------------------------------------------------------------------

/// Values that decompose into canonical unit pieces (for keeping tensor
/// factors monomial). Pieces inherit the degree of the decomposed value.
pub trait Split: Lin + Ord {
    fn split(&self) -> Vec<(Self, Rat)>;
}

impl Split for Rat {
    fn split(&self) -> Vec<(Self, Rat)> {
        if self.is_zero() {
            Vec::new()
        } else {
            vec![(Rat::one(), self.clone())]
        }
    }
}

impl Split for SparseElement {
    fn split(&self) -> Vec<(Self, Rat)> {
        self.iter()
            .map(|(w, c)| (SparseElement::term(w.clone(), Rat::one()), c.clone()))
            .collect()
    }
}

/// Pure tensor `k1 ⊗ (b_1|…|b_q) ⊗ k2` with per-factor unshifted degrees.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TensorWord<E1, EB, E2> {
    pub k1: (E1, i32),
    pub mids: Vec<(EB, i32)>,
    pub k2: (E2, i32),
}

/// Formal sum of pure tensors; the element type of `K1 ⊗ T(B[1]) ⊗ K2`.
#[derive(Clone, PartialEq, Debug)]
pub struct TensorElem<E1: Ord, EB: Ord, E2: Ord> {
    pub terms: BTreeMap<TensorWord<E1, EB, E2>, Rat>,
}

impl<E1: Split, EB: Split, E2: Split> TensorElem<E1, EB, E2> {
    pub fn zero() -> Self {
        TensorElem { terms: BTreeMap::new() }
    }

    pub fn add_word(&mut self, w: TensorWord<E1, EB, E2>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(Rat::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            let dead: Vec<TensorWord<E1, EB, E2>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    /// Adds `k1 ⊗ mids ⊗ k2` splitting every factor into unit pieces.
    pub fn add_pure(
        &mut self,
        k1: &Graded<E1>,
        mids: &[Graded<EB>],
        k2: &Graded<E2>,
        coeff: &Rat,
    ) {
        if coeff.is_zero() {
            return;
        }
        let k1_pieces = k1.val.split();
        let k2_pieces = k2.val.split();
        let mid_pieces: Vec<Vec<(EB, Rat)>> = mids.iter().map(|m| m.val.split()).collect();
        // cartesian product over all factor decompositions
        fn rec<E1: Split, EB: Split, E2: Split>(
            out: &mut TensorElem<E1, EB, E2>,
            k1: &(E1, Rat),
            k1_deg: i32,
            mids: &[Vec<(EB, Rat)>],
            mid_degs: &[i32],
            chosen: &mut Vec<(EB, i32)>,
            acc: Rat,
            k2_pieces: &[(E2, Rat)],
            k2_deg: i32,
        ) {
            if chosen.len() == mids.len() {
                for (k2v, k2c) in k2_pieces {
                    out.add_word(
                        TensorWord {
                            k1: (k1.0.clone(), k1_deg),
                            mids: chosen.clone(),
                            k2: (k2v.clone(), k2_deg),
                        },
                        &acc * k2c,
                    );
                }
                return;
            }
            let idx = chosen.len();
            for (v, c) in &mids[idx] {
                chosen.push((v.clone(), mid_degs[idx]));
                rec(out, k1, k1_deg, mids, mid_degs, chosen, &acc * c, k2_pieces, k2_deg);
                chosen.pop();
            }
        }
        let mid_degs: Vec<i32> = mids.iter().map(|m| m.deg).collect();
        for (k1v, k1c) in &k1_pieces {
            let mut chosen = Vec::new();
            rec(
                self,
                &(k1v.clone(), k1c.clone()),
                k1.deg,
                &mid_pieces,
                &mid_degs,
                &mut chosen,
                coeff * k1c,
                &k2_pieces,
                k2.deg,
            );
        }
    }

    pub fn word_degree(w: &TensorWord<E1, EB, E2>) -> i32 {
        // k1 unshifted + shifted mids + k2 unshifted
        w.k1.1 + w.mids.iter().map(|(_, d)| d - 1).sum::<i32>() + w.k2.1
    }
}

impl<E1: Split, EB: Split, E2: Split> Lin for TensorElem<E1, EB, E2> {
    fn lin_zero() -> Self {
        TensorElem::zero()
    }
    fn lin_is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn lin_add_scaled(&mut self, other: &Self, c: &Rat) {
        for (w, a) in &other.terms {
            self.add_word(w.clone(), a * c);
        }
    }
}

/// The A∞-bimodule structure on `K1 ⊗ T(B[1]) ⊗ K2`, with the Taylor
/// components of the tensor product construction.
pub fn tensor_bimodule<'a, EA, E1, EB, E2, EC>(
    k1: Rc<TaylorBimodule<'a, EA, E1, EB>>,
    alg_b: Rc<TaylorAlgebra<'a, EB>>,
    k2: Rc<TaylorBimodule<'a, EB, E2, EC>>,
) -> TaylorBimodule<'a, EA, TensorElem<E1, EB, E2>, EC>
where
    EA: Lin + 'a,
    E1: Split + 'a,
    EB: Split + 'a,
    E2: Split + 'a,
    EC: Lin + 'a,
{
    TaylorBimodule {
        eval: Rc::new(move |m, n, a_args, k_arg, c_args| {
            let mut out = TensorElem::zero();
            for (word, coeff) in &k_arg.val.terms {
                let k1_graded = Graded::new(word.k1.0.clone(), word.k1.1);
                let mids: Vec<Graded<EB>> =
                    word.mids.iter().map(|(v, d)| Graded::new(v.clone(), *d)).collect();
                let k2_graded = Graded::new(word.k2.0.clone(), word.k2.1);
                let q = mids.len();
                if m > 0 && n > 0 {
                    continue;
                }
                if m > 0 {
                    // Σ_l (d_K1^{m,l} on the head) ⊗ tail ⊗ k2
                    for l in 0..=q {
                        let inner = (k1.eval)(m, l, a_args, &k1_graded, &mids[..l])?;
                        let inner_deg = sdeg_sum(a_args)
                            + k1_graded.sdeg()
                            + sdeg_sum(&mids[..l])
                            + 2;
                        out.add_pure(
                            &Graded::new(inner, inner_deg),
                            &mids[l..],
                            &k2_graded,
                            coeff,
                        );
                    }
                } else if n > 0 {
                    // (−1)^{|k1| + Σ (|b_j| − 1)} Σ_l k1 ⊗ head ⊗ d_K2^{q−l,n}
                    let sign = suspension_parity_sign(k1_graded.deg + sdeg_sum(&mids));
                    for l in 0..=q {
                        let inner = (k2.eval)(q - l, n, &mids[l..], &k2_graded, c_args)?;
                        let inner_deg =
                            sdeg_sum(&mids[l..]) + k2_graded.sdeg() + sdeg_sum(c_args) + 2;
                        let mut piece = TensorElem::zero();
                        piece.add_pure(
                            &k1_graded,
                            &mids[..l],
                            &Graded::new(inner, inner_deg),
                            coeff,
                        );
                        out.lin_add_scaled(&piece, &sign_rat(sign));
                    }
                } else {
                    // (i) right action of the mids on k1
                    for l in 0..=q {
                        let inner = (k1.eval)(0, l, &[], &k1_graded, &mids[..l])?;
                        let inner_deg = k1_graded.sdeg() + sdeg_sum(&mids[..l]) + 2;
                        out.add_pure(
                            &Graded::new(inner, inner_deg),
                            &mids[l..],
                            &k2_graded,
                            coeff,
                        );
                    }
                    // (ii) collapse of an inner B-block
                    for l in 0..q {
                        for p in 1..=(q - l) {
                            let sign =
                                suspension_parity_sign(k1_graded.sdeg() + sdeg_sum(&mids[..l]));
                            let block = &mids[l..l + p];
                            let inner = (alg_b.eval)(p, block)?;
                            let inner_deg = sdeg_sum(block) + 2;
                            let mut new_mids: Vec<Graded<EB>> = mids[..l].to_vec();
                            new_mids.push(Graded::new(inner, inner_deg));
                            new_mids.extend_from_slice(&mids[l + p..]);
                            let mut piece = TensorElem::zero();
                            piece.add_pure(&k1_graded, &new_mids, &k2_graded, coeff);
                            out.lin_add_scaled(&piece, &sign_rat(sign));
                        }
                    }
                    // (iii) left action of the mids on k2
                    let sign = suspension_parity_sign(k1_graded.deg + sdeg_sum(&mids));
                    for l in 0..=q {
                        let inner = (k2.eval)(q - l, 0, &mids[l..], &k2_graded, &[])?;
                        let inner_deg = sdeg_sum(&mids[l..]) + k2_graded.sdeg() + 2;
                        let mut piece = TensorElem::zero();
                        piece.add_pure(
                            &k1_graded,
                            &mids[..l],
                            &Graded::new(inner, inner_deg),
                            coeff,
                        );
                        out.lin_add_scaled(&piece, &sign_rat(sign));
                    }
                }
            }
            Ok(out)
        }),
    }
}

/// The natural morphism μ from `A ⊗_A K` to `K`:
/// `μ^{m,n}(a_1|…|a_m|a⊗(ã_1|…|ã_q)⊗k|b_1|…|b_n)
///   = (−1)^{Σ(|a_i|−1) + |a| + Σ(|ã_j|−1)} d_K^{m+1+q,n}(a's|a|ã's|k|b's)`.
pub fn mu_morphism<'a, EA, EK, EB>(
    bim: Rc<TaylorBimodule<'a, EA, EK, EB>>,
) -> MorphismTaylor<'a, EA, TensorElem<EA, EA, EK>, EB, EK>
where
    EA: Split + 'a,
    EK: Split + Lin + 'a,
    EB: Lin + 'a,
{
    MorphismTaylor {
        eval: Rc::new(move |_m, n, a_args, k_arg, b_args| {
            let mut out = EK::lin_zero();
            for (word, coeff) in &k_arg.val.terms {
                let mut full_a: Vec<Graded<EA>> = a_args.to_vec();
                full_a.push(Graded::new(word.k1.0.clone(), word.k1.1));
                for (v, d) in &word.mids {
                    full_a.push(Graded::new(v.clone(), *d));
                }
                let inner_k = Graded::new(word.k2.0.clone(), word.k2.1);
                let exp: i32 = sdeg_sum(a_args)
                    + word.k1.1
                    + word.mids.iter().map(|(_, d)| d - 1).sum::<i32>();
                let sign = suspension_parity_sign(exp);
                let v = (bim.eval)(full_a.len(), n, &full_a, &inner_k, b_args)?;
                out.lin_add_scaled(&v, &(&sign_rat(sign) * coeff));
            }
            Ok(out)
        }),
    }
}

/// Convenience: errors for components that exist only on part of their
/// domain.
pub fn unavailable(which: impl Into<String>) -> Error {
    Error::ComponentUnavailable(which.into())
}
