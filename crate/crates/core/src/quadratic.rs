//! Koszul complexes of homogeneous quadratic algebras A = T(V)/(R):
//! the dual coalgebra pieces, the Koszul differential, the right action of
//! the dual algebra A^! (with its opposite product), and the dg-bimodule
//! residual suite.
//!
//! A is represented by raw tensor words modulo the degree-bounded ideal
//! slices, so every zero test is an exact membership computation over ℚ.
//! Pinned conventions: the duality pairing `ev` on pure tensors is the
//! position-wise product of coordinate pairings with no extra sign, and the
//! product on A^! is the opposite concatenation (`φ1 ⋆ φ2` pairs against the
//! word `φ2 ⊗ φ1`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Row};
use crate::rat::Rat;

/// Combination of pure tensor words over the V basis, 0-based indices.
pub type Tensor = BTreeMap<Vec<usize>, Rat>;

/// Element of A ⊗ T(V): keys are (A-word, dual-coalgebra word).
pub type KoszulElement = BTreeMap<(Vec<usize>, Vec<usize>), Rat>;

fn add_tensor(t: &mut Tensor, word: Vec<usize>, c: Rat) {
    if c.is_zero() {
        return;
    }
    let entry = t.entry(word).or_insert_with(Rat::zero);
    *entry = &*entry + &c;
    if entry.is_zero() {
        let dead: Vec<Vec<usize>> =
            t.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
        for k in dead {
            t.remove(&k);
        }
    }
}

pub fn add_koszul(e: &mut KoszulElement, key: (Vec<usize>, Vec<usize>), c: Rat) {
    if c.is_zero() {
        return;
    }
    let entry = e.entry(key).or_insert_with(Rat::zero);
    *entry = &*entry + &c;
    if entry.is_zero() {
        let dead: Vec<(Vec<usize>, Vec<usize>)> =
            e.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
        for k in dead {
            e.remove(&k);
        }
    }
}

/// Quadratic data: dim V and a list of relations spanning R ⊆ V⊗V.
#[derive(Clone, Debug)]
pub struct QuadraticData {
    pub dim_v: usize,
    pub relations: Vec<Tensor>,
}

impl QuadraticData {
    pub fn new(dim_v: usize, relations: Vec<Tensor>) -> Result<Self> {
        for r in &relations {
            for w in r.keys() {
                if w.len() != 2 || w.iter().any(|&i| i >= dim_v) {
                    return Err(Error::Schema(
                        "relations must be combinations of e_i⊗e_j with indices < dimV"
                            .to_string(),
                    ));
                }
            }
        }
        // linear independence of the relation set
        let rows: Vec<Row> = relations.iter().map(|r| tensor_to_row(r, dim_v, 2)).collect();
        if linalg::rank(rows) != relations.len() {
            return Err(Error::Schema("relations are linearly dependent".to_string()));
        }
        Ok(QuadraticData { dim_v, relations })
    }

    /// Symmetric-algebra data: R spanned by `e_i⊗e_j − e_j⊗e_i`, i < j.
    pub fn symmetric(dim_v: usize) -> Self {
        let mut relations = Vec::new();
        for i in 0..dim_v {
            for j in (i + 1)..dim_v {
                let mut t = Tensor::new();
                add_tensor(&mut t, vec![i, j], Rat::one());
                add_tensor(&mut t, vec![j, i], Rat::from_int(-1));
                relations.push(t);
            }
        }
        QuadraticData { dim_v, relations }
    }
}

/// Enumerates all words of the given length over 0..dim_v, lexicographically.
fn words(dim_v: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for i in 0..dim_v {
                let mut w2 = w.clone();
                w2.push(i);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

fn word_index(w: &[usize], dim_v: usize) -> usize {
    w.iter().fold(0, |acc, &i| acc * dim_v + i)
}

fn tensor_to_row(t: &Tensor, dim_v: usize, len: usize) -> Row {
    let mut row = vec![Rat::zero(); dim_v.pow(len as u32)];
    for (w, c) in t {
        debug_assert_eq!(w.len(), len);
        row[word_index(w, dim_v)] = c.clone();
    }
    row
}

fn row_to_tensor(row: &Row, dim_v: usize, len: usize) -> Tensor {
    let mut t = Tensor::new();
    for (idx, w) in words(dim_v, len).into_iter().enumerate() {
        if !row[idx].is_zero() {
            add_tensor(&mut t, w, row[idx].clone());
        }
    }
    t
}

/// A basis of one weight piece of the Koszul dual coalgebra.
#[derive(Clone, Debug)]
pub struct KoszulDualPiece {
    pub arity: usize,
    pub basis: Vec<Tensor>,
}

/// `(A^¡)^n = ∩_{i} V^{⊗i} ⊗ R ⊗ V^{⊗(n-2-i)}` computed by exact linear
/// algebra in V^{⊗n}; `(A^¡)^0 = 𝕂` and `(A^¡)^1 = V`.
pub fn dual_coalgebra_piece(q: &QuadraticData, n: usize) -> KoszulDualPiece {
    let d = q.dim_v;
    if n == 0 {
        let mut unit = Tensor::new();
        add_tensor(&mut unit, vec![], Rat::one());
        return KoszulDualPiece { arity: 0, basis: vec![unit] };
    }
    if n == 1 {
        let basis = (0..d)
            .map(|i| {
                let mut t = Tensor::new();
                add_tensor(&mut t, vec![i], Rat::one());
                t
            })
            .collect();
        return KoszulDualPiece { arity: 1, basis };
    }
    let ncols = d.pow(n as u32);
    let mut current: Option<Vec<Row>> = None;
    for i in 0..=(n - 2) {
        // rows spanning V^{⊗i} ⊗ R ⊗ V^{⊗(n-2-i)}
        let mut rows = Vec::new();
        for left in words(d, i) {
            for r in &q.relations {
                for right in words(d, n - 2 - i) {
                    let mut t = Tensor::new();
                    for (w, c) in r {
                        let mut full = left.clone();
                        full.extend_from_slice(w);
                        full.extend_from_slice(&right);
                        add_tensor(&mut t, full, c.clone());
                    }
                    rows.push(tensor_to_row(&t, d, n));
                }
            }
        }
        let rows = linalg::independent_rows(rows);
        current = Some(match current {
            None => rows,
            Some(prev) => linalg::row_span_intersection(&prev, &rows, ncols),
        });
        if current.as_ref().unwrap().is_empty() {
            break;
        }
    }
    let basis = current
        .unwrap_or_default()
        .iter()
        .map(|row| row_to_tensor(row, d, n))
        .collect();
    KoszulDualPiece { arity: n, basis }
}

/// Ideal slice of (R) in degree m, as a row space.
fn ideal_rows(q: &QuadraticData, m: usize) -> Vec<Row> {
    let d = q.dim_v;
    if m < 2 {
        return Vec::new();
    }
    let mut rows = Vec::new();
    for i in 0..=(m - 2) {
        for left in words(d, i) {
            for r in &q.relations {
                for right in words(d, m - 2 - i) {
                    let mut t = Tensor::new();
                    for (w, c) in r {
                        let mut full = left.clone();
                        full.extend_from_slice(w);
                        full.extend_from_slice(&right);
                        add_tensor(&mut t, full, c.clone());
                    }
                    rows.push(tensor_to_row(&t, d, m));
                }
            }
        }
    }
    linalg::independent_rows(rows)
}

/// Whether a Koszul element is zero in A ⊗ T(V), i.e. every A-component lies
/// in the relevant ideal slice.
pub fn koszul_is_zero(q: &QuadraticData, e: &KoszulElement) -> bool {
    // group by (A-degree, dual word): the A-part must lie in the ideal slice
    let mut grouped: BTreeMap<(usize, Vec<usize>), Tensor> = BTreeMap::new();
    for ((aw, kw), c) in e {
        let t = grouped.entry((aw.len(), kw.clone())).or_default();
        add_tensor(t, aw.clone(), c.clone());
    }
    for ((m, _), t) in grouped {
        if t.is_empty() {
            continue;
        }
        let v = tensor_to_row(&t, q.dim_v, m);
        if !linalg::in_row_span(&ideal_rows(q, m), &v) {
            return false;
        }
    }
    true
}

/// The Koszul differential: deconcatenate one letter off the left of the
/// dual-coalgebra word and multiply it into A. Requires arity ≥ 1.
pub fn koszul_differential(q: &QuadraticData, e: &KoszulElement) -> Result<KoszulElement> {
    let mut out = KoszulElement::new();
    for ((aw, kw), c) in e {
        if kw.is_empty() {
            return Err(Error::Contract(
                "koszul_differential requires dual-coalgebra arity >= 1".to_string(),
            ));
        }
        let mut a2 = aw.clone();
        a2.push(kw[0]);
        add_koszul(&mut out, (a2, kw[1..].to_vec()), c.clone());
        let _ = q;
    }
    Ok(out)
}

/// Right action of a homogeneous element φ of A^! (a combination of dual
/// words of one length): deconcatenate from the right and pair position-wise.
pub fn right_dual_action(
    _q: &QuadraticData,
    k: &KoszulElement,
    phi: &Tensor,
) -> Result<KoszulElement> {
    let mut lens = phi.keys().map(Vec::len);
    let Some(r) = lens.next() else {
        return Ok(KoszulElement::new());
    };
    if lens.any(|l| l != r) {
        return Err(Error::Contract(
            "right_dual_action requires a homogeneous dual element".to_string(),
        ));
    }
    let mut out = KoszulElement::new();
    for ((aw, kw), c) in k {
        if kw.len() < r {
            continue;
        }
        let split = kw.len() - r;
        let (left, right) = kw.split_at(split);
        if let Some(pc) = phi.get(right) {
            add_koszul(&mut out, (aw.clone(), left.to_vec()), c * pc);
        }
    }
    Ok(out)
}

/// Opposite product on A^!: `φ1 ⋆ φ2` is the concatenation `φ2 ⊗ φ1`.
pub fn dual_opposite_product(phi1: &Tensor, phi2: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (w1, c1) in phi1 {
        for (w2, c2) in phi2 {
            let mut w = w2.clone();
            w.extend_from_slice(w1);
            add_tensor(&mut out, w, c1 * c2);
        }
    }
    out
}

/// One failed residual of the dg-bimodule suite.
#[derive(Clone, Debug, Serialize)]
pub struct KoszulResidual {
    pub check: String,
    pub description: String,
}

/// Residuals of (i) right-action associativity w.r.t. the opposite product,
/// (ii) left/right action commutation, (iii) differential-vs-right-action
/// compatibility, over all dual-coalgebra basis elements up to `n_max` and
/// all dual words up to the same length. Empty list = dg bimodule verified.
pub fn dg_bimodule_residuals(q: &QuadraticData, n_max: usize) -> Vec<KoszulResidual> {
    let d = q.dim_v;
    let mut failures = Vec::new();
    let pieces: Vec<KoszulDualPiece> =
        (0..=n_max).map(|n| dual_coalgebra_piece(q, n)).collect();
    let basis_elems: Vec<KoszulElement> = pieces
        .iter()
        .flat_map(|p| {
            p.basis.iter().map(|t| {
                let mut e = KoszulElement::new();
                for (w, c) in t {
                    add_koszul(&mut e, (vec![], w.clone()), c.clone());
                }
                e
            })
        })
        .collect();
    let mut dual_words: Vec<Vec<usize>> = Vec::new();
    for len in 1..=n_max {
        dual_words.extend(words(d, len));
    }
    let phis: Vec<Tensor> = dual_words
        .iter()
        .map(|w| {
            let mut t = Tensor::new();
            add_tensor(&mut t, w.clone(), Rat::one());
            t
        })
        .collect();

    for k in &basis_elems {
        // (iii) d(k·φ) − (dk)·φ = 0 (A^! carries the zero differential)
        for phi in &phis {
            let kphi = right_dual_action(q, k, phi).unwrap();
            let lhs = differential_or_zero(q, &kphi);
            let dk = differential_or_zero(q, k);
            let rhs = right_dual_action(q, &dk, phi).unwrap();
            let mut res = lhs;
            for (key, c) in rhs {
                add_koszul(&mut res, key, -c);
            }
            if !koszul_is_zero(q, &res) {
                failures.push(KoszulResidual {
                    check: "differential-right-action".to_string(),
                    description: format!("k = {k:?}, phi = {phi:?}"),
                });
            }
        }
        // (i) (k·φ1)·φ2 = k·(φ1 ⋆ φ2)
        for phi1 in &phis {
            for phi2 in &phis {
                let step = right_dual_action(q, &right_dual_action(q, k, phi1).unwrap(), phi2)
                    .unwrap();
                let combined =
                    right_dual_action(q, k, &dual_opposite_product(phi1, phi2)).unwrap();
                let mut res = step;
                for (key, c) in combined {
                    add_koszul(&mut res, key, -c);
                }
                if !koszul_is_zero(q, &res) {
                    failures.push(KoszulResidual {
                        check: "right-action-associativity".to_string(),
                        description: format!("k = {k:?}, phi1 = {phi1:?}, phi2 = {phi2:?}"),
                    });
                }
            }
        }
        // (ii) (a·k)·φ = a·(k·φ) for generators a
        for a in 0..d {
            for phi in &phis {
                let ak = left_multiply_generator(k, a);
                let lhs = right_dual_action(q, &ak, phi).unwrap();
                let rhs = left_multiply_generator(&right_dual_action(q, k, phi).unwrap(), a);
                let mut res = lhs;
                for (key, c) in rhs {
                    add_koszul(&mut res, key, -c);
                }
                if !koszul_is_zero(q, &res) {
                    failures.push(KoszulResidual {
                        check: "left-right-commutation".to_string(),
                        description: format!("a = e{a}, k = {k:?}, phi = {phi:?}"),
                    });
                }
            }
        }
    }
    failures
}

fn differential_or_zero(q: &QuadraticData, e: &KoszulElement) -> KoszulElement {
    let mut retained = KoszulElement::new();
    for ((aw, kw), c) in e {
        if !kw.is_empty() {
            add_koszul(&mut retained, (aw.clone(), kw.clone()), c.clone());
        }
    }
    koszul_differential(q, &retained).expect("arity >= 1 by construction")
}

/// Left multiplication by the generator `e_a` on the A factor.
pub fn left_multiply_generator(e: &KoszulElement, a: usize) -> KoszulElement {
    let mut out = KoszulElement::new();
    for ((aw, kw), c) in e {
        let mut a2 = vec![a];
        a2.extend_from_slice(aw);
        add_koszul(&mut out, (a2, kw.clone()), c.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// JSON schema: {"dimV": int, "R": [[{"i": int, "j": int, "c": "p/q"}...]...]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RelTermJson {
    i: usize,
    j: usize,
    c: Rat,
}

#[derive(Serialize, Deserialize)]
struct QuadraticJson {
    #[serde(rename = "dimV")]
    dim_v: usize,
    #[serde(rename = "R")]
    relations: Vec<Vec<RelTermJson>>,
}

impl QuadraticData {
    pub fn to_json(&self) -> String {
        let doc = QuadraticJson {
            dim_v: self.dim_v,
            relations: self
                .relations
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|(w, c)| RelTermJson { i: w[0], j: w[1], c: c.clone() })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let doc: QuadraticJson =
            serde_json::from_str(src).map_err(|e| Error::Schema(e.to_string()))?;
        let relations = doc
            .relations
            .into_iter()
            .map(|terms| {
                let mut t = Tensor::new();
                for term in terms {
                    add_tensor(&mut t, vec![term.i, term.j], term.c);
                }
                t
            })
            .collect();
        QuadraticData::new(doc.dim_v, relations)
    }
}
