//! Canonical basis words.
//!
//! A [`BasisWord`] is a monomial `x^even · θ^odd` (the odd part is read as
//! `∂θ^odd` in dual contexts). Generator indices are 1-based, matching the
//! textual renderings `x1`, `th[1,3]`, `dth[2]`. The even part is kept
//! nondecreasing for commutative and PBW normal forms; the odd part is kept
//! strictly increasing with reordering signs absorbed into coefficients.

use std::fmt::Write;

/// Whether the odd part of a word denotes `θ` or `∂θ` generators.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OddKind {
    Theta,
    DTheta,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct BasisWord {
    pub even: Vec<usize>,
    pub odd: Vec<usize>,
}

impl BasisWord {
    pub fn empty() -> Self {
        BasisWord::default()
    }

    pub fn from_even(mut even: Vec<usize>) -> Self {
        even.sort_unstable();
        BasisWord { even, odd: Vec::new() }
    }

    /// Odd-only word; the indices must already be strictly increasing.
    pub fn from_odd(odd: Vec<usize>) -> Self {
        debug_assert!(odd.windows(2).all(|w| w[0] < w[1]));
        BasisWord { even: Vec::new(), odd }
    }

    pub fn is_empty(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    /// Homological degree under the non-positive grading: `-|odd|` for θ-words,
    /// `+|odd|` for ∂θ-words.
    pub fn degree(&self, kind: OddKind) -> i32 {
        match kind {
            OddKind::Theta => -(self.odd.len() as i32),
            OddKind::DTheta => self.odd.len() as i32,
        }
    }

    /// Filtration weight `|even| + |odd|`.
    pub fn filtration(&self) -> usize {
        self.even.len() + self.odd.len()
    }
}

/// Sorts an odd index sequence into strictly increasing order.
///
/// Returns the sorted word and the parity sign of the sorting permutation,
/// or `None` when an index repeats (the square of an odd generator is zero).
pub fn canonicalize_odd(indices: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = indices.to_vec();
    let mut sign = 1i32;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Merges two nondecreasing even words (commutative product of monomials).
pub fn merge_even(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            merged.push(a[i]);
            i += 1;
        } else {
            merged.push(b[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    merged
}

/// Renders a word using the given basis names, e.g. `x1^2*x3 th[1,3]`.
/// The empty word renders as `1`.
pub fn render_word(w: &BasisWord, names: &[String], kind: OddKind) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < w.even.len() {
        let g = w.even[i];
        let mut mult = 1;
        while i + mult < w.even.len() && w.even[i + mult] == g {
            mult += 1;
        }
        if !out.is_empty() {
            out.push('*');
        }
        let name = names.get(g - 1).map(String::as_str).unwrap_or("?");
        if mult == 1 {
            out.push_str(name);
        } else {
            let _ = write!(out, "{name}^{mult}");
        }
        i += mult;
    }
    if !w.odd.is_empty() {
        if !out.is_empty() {
            out.push(' ');
        }
        let tag = match kind {
            OddKind::Theta => "th",
            OddKind::DTheta => "dth",
        };
        let list: Vec<String> = w.odd.iter().map(|i| i.to_string()).collect();
        let _ = write!(out, "{tag}[{}]", list.join(","));
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_signs() {
        assert_eq!(canonicalize_odd(&[1, 2]), Some((vec![1, 2], 1)));
        assert_eq!(canonicalize_odd(&[2, 1]), Some((vec![1, 2], -1)));
        assert_eq!(canonicalize_odd(&[3, 1, 2]), Some((vec![1, 2, 3], 1)));
        assert_eq!(canonicalize_odd(&[1, 1]), None);
    }

    #[test]
    fn rendering() {
        let names: Vec<String> = ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        let w = BasisWord { even: vec![1, 1, 3], odd: vec![1, 3] };
        assert_eq!(render_word(&w, &names, OddKind::Theta), "x1^2*x3 th[1,3]");
        assert_eq!(render_word(&BasisWord::empty(), &names, OddKind::Theta), "1");
        let d = BasisWord::from_odd(vec![2]);
        assert_eq!(render_word(&d, &names, OddKind::DTheta), "dth[2]");
    }
}
