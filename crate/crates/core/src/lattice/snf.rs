use serde::Serialize;

use super::IntMatrix;

/// Smith normal form `U * M * V = S` with `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snf {
    pub u: IntMatrix,
    /// Inverse of `u`, maintained alongside it.
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.s[(i, i)]).collect()
    }

    /// An integer solution of `M x = b`, if one exists.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        let c = self.u.mul_vec(b);
        let mut y = vec![0i64; self.v.rows()];
        for (i, &ci) in c.iter().enumerate() {
            if i < self.rank {
                let d = self.s[(i, i)];
                if ci % d != 0 {
                    return None;
                }
                y[i] = ci / d;
            } else if ci != 0 {
                return None;
            }
        }
        Some(self.v.mul_vec(&y))
    }

    /// Columns spanning the integer kernel of `M`.
    pub fn kernel(&self) -> IntMatrix {
        let n = self.v.rows();
        let cols: Vec<usize> = (self.rank..n).collect();
        let rows: Vec<usize> = (0..n).collect();
        self.v.select(&rows, &cols)
    }
}

/// Deterministic elimination: the pivot is always the entry of least absolute
/// value in the remaining block, ties broken by row then column.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    s.row_labels.clear();
    s.col_labels.clear();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(i64, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = s[(i, j)].abs();
                    if x != 0 && pivot.is_none_or(|(p, _, _)| x < p) {
                        pivot = Some((x, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = pivot else {
                return Snf { u, u_inv, s, v, rank };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = s[(t, t)];
            let mut clean = true;
            for i in t + 1..rows {
                let q = s[(i, t)] / p;
                if q != 0 {
                    s.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                    u_inv.add_col(t, i, q);
                }
                clean &= s[(i, t)] == 0;
            }
            for j in t + 1..cols {
                let q = s[(t, j)] / p;
                if q != 0 {
                    s.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                clean &= s[(t, j)] == 0;
            }
            if !clean {
                continue;
            }
            let stray = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s[(i, j)] % p != 0));
            if let Some(i) = stray {
                s.add_row(t, i, 1);
                u.add_row(t, i, 1);
                u_inv.add_col(i, t, -1);
                continue;
            }
            break;
        }
        if s[(t, t)] < 0 {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        rank = t + 1;
    }
    Snf { u, u_inv, s, v, rank }
}
