//! Exact linear algebra over ℚ: ranks, null spaces, span membership and
//! subspace intersections, on dense row-major matrices.

use crate::rat::Rat;

pub type Row = Vec<Rat>;

/// Reduces `rows` in place to row echelon form; returns the pivot columns.
pub fn row_echelon(rows: &mut Vec<Row>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for c2 in c..ncols {
                    let v = &rows[i][c2] - &(&factor * &rows[r][c2]);
                    rows[i][c2] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mut rows: Vec<Row>) -> usize {
    row_echelon(&mut rows).len()
}

/// Basis of the null space of the linear map with matrix `rows` (acting on
/// column vectors of length `ncols`).
pub fn nullspace(mut rows: Vec<Row>, ncols: usize) -> Vec<Row> {
    let pivots = row_echelon(&mut rows);
    let mut basis = Vec::new();
    let is_pivot = |c: usize| pivots.contains(&c);
    for free in 0..ncols {
        if is_pivot(free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&rows[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Basis of the left null space: vectors `x` with `xᵀ·rows = 0`.
pub fn left_nullspace(rows: &[Row]) -> Vec<Row> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut transpose = vec![vec![Rat::zero(); nrows]; ncols];
    for (r, row) in rows.iter().enumerate() {
        for c in 0..ncols {
            transpose[c][r] = row[c].clone();
        }
    }
    nullspace(transpose, nrows)
}

/// Whether `v` lies in the row span of `rows`.
pub fn in_row_span(rows: &[Row], v: &Row) -> bool {
    let base = rank(rows.to_vec());
    let mut aug = rows.to_vec();
    aug.push(v.clone());
    rank(aug) == base
}

/// Whether every row of `vs` lies in the row span of `rows`.
pub fn all_in_row_span(rows: &[Row], vs: &[Row]) -> bool {
    if vs.is_empty() {
        return true;
    }
    let base = rank(rows.to_vec());
    let mut aug = rows.to_vec();
    aug.extend(vs.iter().cloned());
    rank(aug) == base
}

/// Basis of the intersection of two row spans inside ℚ^ncols.
pub fn row_span_intersection(a: &[Row], b: &[Row], ncols: usize) -> Vec<Row> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve xᵀA = yᵀB: null space of the (ncols) × (|a|+|b|) system given by
    // the columns of [Aᵀ | −Bᵀ].
    let unknowns = a.len() + b.len();
    let mut system: Vec<Row> = vec![vec![Rat::zero(); unknowns]; ncols];
    for (i, row) in a.iter().enumerate() {
        for c in 0..ncols {
            system[c][i] = row[c].clone();
        }
    }
    for (j, row) in b.iter().enumerate() {
        for c in 0..ncols {
            system[c][a.len() + j] = -&row[c];
        }
    }
    let null = nullspace(system, unknowns);
    let mut vecs = Vec::new();
    for n in null {
        let mut v = vec![Rat::zero(); ncols];
        for (i, row) in a.iter().enumerate() {
            if !n[i].is_zero() {
                for c in 0..ncols {
                    v[c] = &v[c] + &(&n[i] * &row[c]);
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            vecs.push(v);
        }
    }
    independent_rows(vecs)
}

/// Extracts a row basis (subset of the input spanning the same space).
pub fn independent_rows(rows: Vec<Row>) -> Vec<Row> {
    let mut basis: Vec<Row> = Vec::new();
    for row in rows {
        if !in_row_span(&basis, &row) {
            basis.push(row);
        }
    }
    basis
}
