//! Dense two-phase simplex with Bland's rule, generic over [`Scalar`].
//!
//! Only used on the small systems this crate builds (tens of rows), so the
//! tableau is kept dense and no attempt is made at numerical refinement.

use crate::polytope::system::LinearInequality;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal {
        value: S,
        point: Vec<S>,
    },
    Unbounded,
    Infeasible,
    /// Floating-point pivoting failed to terminate; never happens in exact mode.
    Stalled,
}

impl<S> LpOutcome<S> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

const MAX_PIVOTS: usize = 20_000;

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    basis: Vec<usize>,
    width: usize,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, objs: &mut [Vec<S>], r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<S>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *x = x.clone() - f.clone() * pr.clone();
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        for obj in objs.iter_mut() {
            eliminate(obj);
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on `objs[0]`, keeping the other objective rows
    /// updated. Returns `Some(true)` at optimum, `Some(false)` if unbounded.
    fn run(&mut self, objs: &mut [Vec<S>], blocked: &[bool], eps: &S) -> Option<bool> {
        let rhs = self.width;
        for _ in 0..MAX_PIVOTS {
            let entering = (0..self.width).find(|&j| !blocked[j] && objs[0][j] > *eps);
            let Some(c) = entering else {
                return Some(true);
            };
            let mut best: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > *eps {
                    let ratio = row[rhs].clone() / row[c].clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return Some(false),
                Some((r, _)) => self.pivot(objs, r, c),
            }
        }
        None
    }
}

/// Maximizes `objective · x` subject to `rows` and `x_j ≥ 0` where
/// `nonneg[j]`. With `objective = None` this is a pure feasibility test and
/// an `Optimal` outcome carries a feasible point with value zero.
pub fn solve<S: Scalar>(
    nonneg: &[bool],
    rows: &[LinearInequality<S>],
    objective: Option<&[S]>,
    eps: &S,
) -> LpOutcome<S> {
    let n = nonneg.len();
    let zero = S::zero;

    // Column layout: structural columns (free variables split in two), one
    // slack per row, then one artificial per row with negative rhs.
    let mut col_of = Vec::with_capacity(n);
    let mut ncols = 0;
    for &nn in nonneg {
        col_of.push(ncols);
        ncols += if nn { 1 } else { 2 };
    }
    let structural = ncols;
    let slack0 = ncols;
    ncols += rows.len();
    let negative: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].rhs < zero()).collect();
    let art0 = ncols;
    ncols += negative.len();
    let width = ncols;

    let mut t = Tableau {
        rows: Vec::with_capacity(rows.len()),
        basis: Vec::with_capacity(rows.len()),
        width,
    };
    let mut art_index = 0;
    for (i, r) in rows.iter().enumerate() {
        let mut line = vec![zero(); width + 1];
        for j in 0..n {
            let a = r.coeffs[j].clone();
            if a.is_zero() {
                continue;
            }
            if !nonneg[j] {
                line[col_of[j] + 1] = -a.clone();
            }
            line[col_of[j]] = a;
        }
        line[slack0 + i] = S::one();
        line[width] = r.rhs.clone();
        if r.rhs < zero() {
            for x in line.iter_mut() {
                *x = -x.clone();
            }
            let a = art0 + art_index;
            art_index += 1;
            line[a] = S::one();
            t.basis.push(a);
        } else {
            t.basis.push(slack0 + i);
        }
        t.rows.push(line);
    }

    let mut phase2 = vec![zero(); width + 1];
    if let Some(obj) = objective {
        for j in 0..n {
            phase2[col_of[j]] = obj[j].clone();
            if !nonneg[j] {
                phase2[col_of[j] + 1] = -obj[j].clone();
            }
        }
    }

    let mut blocked = vec![false; width];
    if !negative.is_empty() {
        let mut phase1 = vec![zero(); width + 1];
        for (i, b) in t.basis.iter().enumerate() {
            if *b >= art0 {
                for j in 0..=width {
                    if j < art0 || j == width {
                        phase1[j] = phase1[j].clone() + t.rows[i][j].clone();
                    }
                }
            }
        }
        let mut objs = [phase1, phase2];
        match t.run(&mut objs, &blocked, eps) {
            None => return LpOutcome::Stalled,
            Some(_) => {}
        }
        // The phase-1 value is minus the remaining artificial mass.
        if objs[0][width] > *eps {
            return LpOutcome::Infeasible;
        }
        // Drive artificials out of the basis, dropping rows that turn out to
        // be linear combinations of the others.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art0 {
                let col = (0..art0).find(|&j| t.rows[i][j].clone().abs() > *eps);
                match col {
                    Some(c) => {
                        t.pivot(&mut objs, i, c);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for b in blocked.iter_mut().skip(art0) {
            *b = true;
        }
        let [_, p2] = objs;
        phase2 = p2;
    }

    let mut objs = [phase2];
    let status = t.run(&mut objs, &blocked, eps);
    match status {
        None => LpOutcome::Stalled,
        Some(false) => LpOutcome::Unbounded,
        Some(true) => {
            let mut cols = vec![zero(); structural];
            for (i, &b) in t.basis.iter().enumerate() {
                if b < structural {
                    cols[b] = t.rows[i][width].clone();
                }
            }
            let point = (0..n)
                .map(|j| {
                    let v = cols[col_of[j]].clone();
                    if nonneg[j] {
                        v
                    } else {
                        v - cols[col_of[j] + 1].clone()
                    }
                })
                .collect();
            let [obj] = objs;
            LpOutcome::Optimal {
                value: -obj[width].clone(),
                point,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn row(c: &[i64], b: i64) -> LinearInequality<BigRational> {
        LinearInequality::new(
            c.iter().map(|&x| BigRational::int(x)).collect(),
            BigRational::int(b),
        )
    }

    #[test]
    fn small_max() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6
        let rows = vec![row(&[1, 2], 4), row(&[3, 1], 6)];
        let obj = [BigRational::int(1), BigRational::int(1)];
        match solve(&[true, true], &rows, Some(&obj), &BigRational::int(0)) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, BigRational::ratio(14, 5));
                assert_eq!(
                    point,
                    vec![BigRational::ratio(8, 5), BigRational::ratio(6, 5)]
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let z = BigRational::int(0);
        let rows = vec![row(&[1], 1), row(&[-1], -2)];
        assert_eq!(solve(&[true], &rows, None, &z), LpOutcome::Infeasible);
        let rows = vec![row(&[-1, 1], 0)];
        let obj = [BigRational::int(1), BigRational::int(0)];
        assert_eq!(
            solve(&[true, true], &rows, Some(&obj), &z),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn free_variable_goes_negative() {
        // max -x s.t. x >= -3, x free
        let rows = vec![LinearInequality::new(vec![-1.0], 3.0)];
        let obj = [-1.0];
        match solve(&[false], &rows, Some(&obj), &1e-9) {
            LpOutcome::Optimal { value, .. } => assert!((value - 3.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_pair_is_feasible() {
        let rows = vec![row(&[1, 1], 2), row(&[-1, -1], -2), row(&[1, 0], 1)];
        let out = solve(&[true, true], &rows, None, &BigRational::int(0));
        assert!(matches!(out, LpOutcome::Optimal { .. }));
    }
}
