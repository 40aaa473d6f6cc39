//! Finite-dimensional Lie algebras given by structure constants, with
//! validation, adjoint trace polynomials, a preset catalog and JSON ingestion.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::SPoly;
use crate::rat::Rat;
use crate::sparse::SparseElement;
use crate::word::BasisWord;

/// A Lie algebra over ℚ by structure constants: `[x_i, x_j] = Σ_k f_{ij}^k x_k`.
///
/// Only pairs `i < j` are stored (1-based indices); antisymmetry is built into
/// the accessors. Construction does not validate the Jacobi identity — use
/// [`LieAlgebra::jacobi_residual`] so failures can name the offending triple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    basis_names: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl LieAlgebra {
    pub fn new(
        name: impl Into<String>,
        basis_names: Vec<String>,
        brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
    ) -> Result<Self> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err(Error::Schema("dimension must be positive".to_string()));
        }
        for (&(i, j), terms) in &brackets {
            if !(1 <= i && i < j && j <= dim) {
                return Err(Error::Schema(format!(
                    "bracket pair ({i},{j}) must satisfy 1 <= i < j <= {dim}"
                )));
            }
            for (k, _) in terms {
                if !(1 <= *k && *k <= dim) {
                    return Err(Error::Schema(format!("bracket target {k} out of range")));
                }
            }
        }
        let brackets = brackets
            .into_iter()
            .map(|(p, mut terms)| {
                terms.sort_by_key(|(k, _)| *k);
                let mut merged: Vec<(usize, Rat)> = Vec::new();
                for (k, c) in terms {
                    match merged.last_mut() {
                        Some((k0, c0)) if *k0 == k => *c0 = &*c0 + &c,
                        _ => merged.push((k, c)),
                    }
                }
                merged.retain(|(_, c)| !c.is_zero());
                (p, merged)
            })
            .filter(|(_, terms)| !terms.is_empty())
            .collect();
        Ok(LieAlgebra { name: name.into(), dim, basis_names, brackets })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.basis_names[i - 1]
    }

    /// `[x_i, x_j]` as a list of `(k, f_{ij}^k)`, for any `i`, `j`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        if i == j {
            return Vec::new();
        }
        if i < j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            self.brackets
                .get(&(j, i))
                .map(|terms| terms.iter().map(|(k, c)| (*k, -c)).collect())
                .unwrap_or_default()
        }
    }

    /// Structure constant `f_{ij}^k` for arbitrary `i`, `j`.
    pub fn f(&self, i: usize, j: usize, k: usize) -> Rat {
        self.bracket(i, j)
            .into_iter()
            .find(|(t, _)| *t == k)
            .map(|(_, c)| c)
            .unwrap_or_else(Rat::zero)
    }

    /// Bracket extended bilinearly to degree-1 elements of S(g).
    pub fn bracket_linear(&self, a: &SPoly, b: &SPoly) -> SPoly {
        let mut out = SparseElement::zero();
        for (wa, ca) in a.0.iter() {
            for (wb, cb) in b.0.iter() {
                debug_assert!(wa.even.len() == 1 && wb.even.len() == 1);
                for (k, f) in self.bracket(wa.even[0], wb.even[0]) {
                    out.add_term(BasisWord::from_even(vec![k]), &(ca * cb) * &f);
                }
            }
        }
        SPoly(out)
    }

    /// Jacobi residual `[[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j]`
    /// for every triple `i < j < k`, as elements of g.
    pub fn jacobi_residual(&self) -> BTreeMap<(usize, usize, usize), SparseElement> {
        let gen = |i: usize| SPoly(SparseElement::term(BasisWord::from_even(vec![i]), Rat::one()));
        let mut out = BTreeMap::new();
        for i in 1..=self.dim {
            for j in (i + 1)..=self.dim {
                for k in (j + 1)..=self.dim {
                    let (xi, xj, xk) = (gen(i), gen(j), gen(k));
                    let mut r = self.bracket_linear(&self.bracket_linear(&xi, &xj), &xk).0;
                    r.add_scaled(&self.bracket_linear(&self.bracket_linear(&xj, &xk), &xi).0, &Rat::one());
                    r.add_scaled(&self.bracket_linear(&self.bracket_linear(&xk, &xi), &xj).0, &Rat::one());
                    out.insert((i, j, k), r);
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.jacobi_residual().values().all(SparseElement::is_zero)
    }

    /// The symbolic adjoint matrix: entry `(k, j)` is the linear form
    /// `Σ_i f_{ij}^k x_i`, so that substituting the coordinates of ξ gives
    /// the matrix of `ad ξ`.
    pub fn ad_matrix(&self) -> Vec<Vec<SPoly>> {
        let d = self.dim;
        let mut m = vec![vec![SPoly::zero(); d]; d];
        for j in 1..=d {
            for i in 1..=d {
                for (k, f) in self.bracket(i, j) {
                    m[k - 1][j - 1]
                        .0
                        .add_term(BasisWord::from_even(vec![i]), f);
                }
            }
        }
        m
    }

    /// The polynomial `ξ ↦ tr((ad ξ)^k)` expanded in the coordinates
    /// `x_1..x_d`; a degree-`k` element of S(g).
    pub fn trace_power_poly(&self, k: usize) -> Result<SPoly> {
        if k == 0 {
            return Err(Error::Contract(
                "trace_power_poly requires k >= 1 (k = 0 is the constant d)".to_string(),
            ));
        }
        let ad = self.ad_matrix();
        let d = self.dim;
        let mut power = ad.clone();
        for _ in 1..k {
            let mut next = vec![vec![SPoly::zero(); d]; d];
            for r in 0..d {
                for c in 0..d {
                    let mut acc = SparseElement::zero();
                    for t in 0..d {
                        acc.add_scaled(&power[r][t].0.mul_commutative(&ad[t][c].0), &Rat::one());
                    }
                    next[r][c] = SPoly(acc);
                }
            }
            power = next;
        }
        let mut tr = SparseElement::zero();
        for r in 0..d {
            tr.add_scaled(&power[r][r].0, &Rat::one());
        }
        Ok(SPoly(tr))
    }

    /// The trace of the adjoint representation as a linear form on g.
    pub fn c1_functional(&self) -> SPoly {
        self.trace_power_poly(1).expect("k = 1 is always valid")
    }

    /// Value of the c₁ functional on the basis vector `x_i`.
    pub fn c1_on_generator(&self, i: usize) -> Rat {
        self.c1_functional().0.coeff(&BasisWord::from_even(vec![i]))
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub const CATALOG_NAMES: [&str; 6] =
    ["abelian1", "abelian2", "abelian3", "heisenberg3", "aff1", "sl2"];

/// The preset catalog.
pub fn catalog(name: &str) -> Result<LieAlgebra> {
    let r = |n: i64| Rat::from_int(n);
    match name {
        "abelian1" => LieAlgebra::new("abelian1", names(&["x1"]), BTreeMap::new()),
        "abelian2" => LieAlgebra::new("abelian2", names(&["x1", "x2"]), BTreeMap::new()),
        "abelian3" => LieAlgebra::new("abelian3", names(&["x1", "x2", "x3"]), BTreeMap::new()),
        "heisenberg3" => {
            let mut b = BTreeMap::new();
            b.insert((1, 2), vec![(3, r(1))]);
            LieAlgebra::new("heisenberg3", names(&["x1", "x2", "x3"]), b)
        }
        "aff1" => {
            let mut b = BTreeMap::new();
            b.insert((1, 2), vec![(2, r(1))]);
            LieAlgebra::new("aff1", names(&["a", "b"]), b)
        }
        "sl2" => {
            // basis (e, f, h): [e,f] = h, [e,h] = -2e, [f,h] = 2f
            let mut b = BTreeMap::new();
            b.insert((1, 2), vec![(3, r(1))]);
            b.insert((1, 3), vec![(1, r(-2))]);
            b.insert((2, 3), vec![(2, r(2))]);
            LieAlgebra::new("sl2", names(&["e", "f", "h"]), b)
        }
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// JSON schema (0-based indices on the wire, i < j required)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BracketTermJson {
    k: usize,
    c: Rat,
}

#[derive(Serialize, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    terms: Vec<BracketTermJson>,
}

#[derive(Serialize, Deserialize)]
struct LieAlgebraJson {
    name: String,
    dim: usize,
    basis: Vec<String>,
    brackets: Vec<BracketJson>,
}

impl LieAlgebra {
    pub fn to_json(&self) -> String {
        let doc = LieAlgebraJson {
            name: self.name.clone(),
            dim: self.dim,
            basis: self.basis_names.clone(),
            brackets: self
                .brackets
                .iter()
                .map(|(&(i, j), terms)| BracketJson {
                    i: i - 1,
                    j: j - 1,
                    terms: terms
                        .iter()
                        .map(|(k, c)| BracketTermJson { k: k - 1, c: c.clone() })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let doc: LieAlgebraJson =
            serde_json::from_str(src).map_err(|e| Error::Schema(e.to_string()))?;
        if doc.basis.len() != doc.dim {
            return Err(Error::Schema(format!(
                "dim is {} but {} basis names given",
                doc.dim,
                doc.basis.len()
            )));
        }
        let mut brackets = BTreeMap::new();
        for b in doc.brackets {
            if b.i >= b.j {
                return Err(Error::Schema(format!(
                    "bracket pair ({}, {}) must have i < j (0-based)",
                    b.i, b.j
                )));
            }
            if b.j >= doc.dim {
                return Err(Error::Schema(format!("bracket index {} out of range", b.j)));
            }
            let terms: Vec<(usize, Rat)> = b
                .terms
                .into_iter()
                .map(|t| {
                    if t.k >= doc.dim {
                        Err(Error::Schema(format!("bracket target {} out of range", t.k)))
                    } else {
                        Ok((t.k + 1, t.c))
                    }
                })
                .collect::<Result<_>>()?;
            if brackets.insert((b.i + 1, b.j + 1), terms).is_some() {
                return Err(Error::Schema(format!(
                    "duplicate bracket pair ({}, {})",
                    b.i, b.j
                )));
            }
        }
        LieAlgebra::new(doc.name, doc.basis, brackets)
    }
}
