//! Fourier–Motzkin elimination and redundancy removal.

use crate::polytope::lp::{self, LpOutcome};
use crate::polytope::system::{HalfspaceSystem, LinearInequality};
use crate::polytope::PolytopeError;
use crate::scalar::{eq_eps, le_eps, Scalar};

/// Counters describing one multi-variable elimination.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct FmeStats {
    /// Variables removed by substituting an equality instead of pairing rows.
    pub substituted: usize,
    /// Variables removed by pairwise combination.
    pub paired: usize,
    pub peak_rows: usize,
    /// Row count handed back, before any redundancy removal by the caller.
    pub final_rows: usize,
    /// How many times the LP pruning pass ran.
    pub lp_prunes: usize,
}

/// Row count above which intermediate systems are pruned with LP tests.
const PRUNE_ABOVE: usize = 120;

#[derive(Clone, Debug)]
struct Ancestors(Vec<u64>);

impl Ancestors {
    fn single(i: usize, n: usize) -> Self {
        let mut w = vec![0u64; n.div_ceil(64).max(1)];
        w[i / 64] |= 1 << (i % 64);
        Ancestors(w)
    }

    fn union(&self, o: &Self) -> Self {
        Ancestors(self.0.iter().zip(&o.0).map(|(a, b)| a | b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

#[derive(Clone, Debug)]
struct Tracked<S> {
    row: LinearInequality<S>,
    anc: Ancestors,
}

fn infeasible_row<S: Scalar>(n: usize) -> LinearInequality<S> {
    LinearInequality::new(vec![S::zero(); n], -S::one()).labeled("infeasible")
}

fn nonneg_row<S: Scalar>(n: usize, j: usize, name: &str) -> LinearInequality<S> {
    let mut c = vec![S::zero(); n];
    c[j] = -S::one();
    LinearInequality::new(c, S::zero()).labeled(format!("{name} >= 0"))
}

/// Combines a row with positive coefficient on `j` and one with negative
/// coefficient so that column `j` cancels.
fn combine<S: Scalar>(
    p: &LinearInequality<S>,
    n: &LinearInequality<S>,
    j: usize,
    eps: &S,
) -> LinearInequality<S> {
    let wp = -n.coeffs[j].clone();
    let wn = p.coeffs[j].clone();
    let mut coeffs: Vec<S> = p
        .coeffs
        .iter()
        .zip(&n.coeffs)
        .map(|(a, b)| a.clone() * wp.clone() + b.clone() * wn.clone())
        .collect();
    coeffs[j] = S::zero();
    let rhs = p.rhs.clone() * wp + n.rhs.clone() * wn;
    LinearInequality::new(coeffs, rhs).normalized(eps)
}

enum Cleaned<T> {
    Rows(Vec<T>),
    Infeasible,
}

/// Drops trivially true rows, detects `0 ≤ negative`, and keeps only the
/// tightest of each family of parallel rows. `key` extracts the row.
fn clean<S: Scalar, T: Clone>(
    items: Vec<T>,
    eps: &S,
    row: impl Fn(&T) -> &LinearInequality<S>,
    prefer: impl Fn(&T, &T) -> bool,
) -> Cleaned<T> {
    let mut out: Vec<(LinearInequality<S>, T)> = Vec::with_capacity(items.len());
    for it in items {
        let r = row(&it);
        if r.is_zero(eps) {
            if r.rhs < -eps.clone() {
                return Cleaned::Infeasible;
            }
            continue;
        }
        let norm = r.normalized(eps);
        let dup = out.iter().position(|(o, _)| {
            o.coeffs
                .iter()
                .zip(&norm.coeffs)
                .all(|(a, b)| eq_eps(a, b, eps))
        });
        match dup {
            None => out.push((norm, it)),
            Some(k) => {
                let (o, prev) = &out[k];
                let replace = if eq_eps(&norm.rhs, &o.rhs, eps) {
                    prefer(&it, prev)
                } else {
                    norm.rhs < o.rhs
                };
                if replace {
                    out[k] = (norm, it);
                }
            }
        }
    }
    Cleaned::Rows(out.into_iter().map(|(_, t)| t).collect())
}

fn drop_columns<S: Scalar>(
    sys: &HalfspaceSystem<S>,
    rows: Vec<LinearInequality<S>>,
    removed: &[bool],
) -> HalfspaceSystem<S> {
    let keep: Vec<usize> = (0..sys.dim()).filter(|&j| !removed[j]).collect();
    let vars = keep.iter().map(|&j| sys.variables()[j].clone()).collect();
    let nonneg = keep.iter().map(|&j| sys.nonneg()[j]).collect();
    let rows = rows
        .into_iter()
        .map(|r| LinearInequality {
            coeffs: keep.iter().map(|&j| r.coeffs[j].clone()).collect(),
            rhs: r.rhs,
            label: r.label,
        })
        .collect();
    HalfspaceSystem::from_parts(vars, nonneg, rows, sys.eps().clone())
}

/// Projects out a single variable by pairwise combination.
pub fn fme_eliminate<S: Scalar>(
    sys: &HalfspaceSystem<S>,
    var: &str,
) -> Result<HalfspaceSystem<S>, PolytopeError> {
    let j = sys.var_index(var)?;
    let n = sys.dim();
    let eps = sys.eps();
    let mut rows: Vec<LinearInequality<S>> = sys.rows().to_vec();
    if sys.nonneg()[j] {
        rows.push(nonneg_row(n, j, var));
    }
    let zero = S::zero();
    let mut out = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for r in rows {
        if r.coeffs[j] > *eps {
            pos.push(r);
        } else if r.coeffs[j] < zero.clone() - eps.clone() {
            neg.push(r);
        } else {
            let mut r = r;
            r.coeffs[j] = S::zero();
            out.push(r);
        }
    }
    for p in &pos {
        for q in &neg {
            out.push(combine(p, q, j, eps));
        }
    }
    let mut removed = vec![false; n];
    removed[j] = true;
    let rows = match clean(out, eps, |r| r, |_, _| false) {
        Cleaned::Rows(r) => r,
        Cleaned::Infeasible => vec![infeasible_row(n)],
    };
    Ok(drop_columns(sys, rows, &removed))
}

fn find_equality<S: Scalar>(
    rows: &[LinearInequality<S>],
    candidates: &[bool],
    eps: &S,
) -> Option<(usize, usize, usize)> {
    for i in 0..rows.len() {
        for k in i + 1..rows.len() {
            let (a, b) = (&rows[i], &rows[k]);
            let opposite = a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .all(|(x, y)| eq_eps(x, &-y.clone(), eps))
                && eq_eps(&a.rhs, &-b.rhs.clone(), eps);
            if !opposite {
                continue;
            }
            // Prefer a unit coefficient so substitution introduces no fractions.
            let pick = (0..a.coeffs.len())
                .filter(|&j| candidates[j] && a.coeffs[j].abs() > *eps)
                .min_by_key(|&j| if a.coeffs[j].abs() == S::one() { 0 } else { 1 });
            if let Some(j) = pick {
                return Some((i, k, j));
            }
        }
    }
    None
}

/// Removes rows strictly implied by the others (LP test), one at a time.
pub(crate) fn prune_implied<S: Scalar>(
    rows: &mut Vec<LinearInequality<S>>,
    nonneg: &[bool],
    eps: &S,
) -> usize {
    if !lp::solve(nonneg, rows, None, eps).is_feasible() {
        return 0;
    }
    let mut removed = 0;
    let mut i = 0;
    while i < rows.len() {
        let candidate = rows.remove(i);
        let implied = match lp::solve(nonneg, rows, Some(&candidate.coeffs), eps) {
            LpOutcome::Optimal { value, .. } => le_eps(&value, &candidate.rhs, eps),
            _ => false,
        };
        if implied {
            removed += 1;
        } else {
            rows.insert(i, candidate);
            i += 1;
        }
    }
    removed
}

/// Projects `sys` onto the variables not listed in `vars`.
///
/// Equalities (pairs of opposite rows) are used for substitution first; the
/// remaining variables are paired off with ancestor-count pruning, and an LP
/// pass trims the system whenever it grows past a threshold.
pub fn eliminate<S: Scalar>(
    sys: &HalfspaceSystem<S>,
    vars: &[&str],
) -> Result<(HalfspaceSystem<S>, FmeStats), PolytopeError> {
    let n = sys.dim();
    let eps = sys.eps().clone();
    let mut todo = vec![false; n];
    for v in vars {
        todo[sys.var_index(v)?] = true;
    }
    let mut removed = vec![false; n];
    let mut stats = FmeStats::default();

    // Pairing cannot prune anything from an empty set, so it would only
    // multiply rows.
    if todo.iter().any(|&t| t) && !sys.is_feasible() {
        return Ok((drop_columns(sys, vec![infeasible_row(n)], &todo), stats));
    }

    let mut rows: Vec<LinearInequality<S>> = sys.rows().to_vec();
    for j in 0..n {
        if todo[j] && sys.nonneg()[j] {
            rows.push(nonneg_row(n, j, &sys.variables()[j]));
        }
    }

    while let Some((i, k, j)) = find_equality(&rows, &todo, &eps) {
        let e = rows[i].clone();
        rows.remove(k);
        rows.remove(i);
        let pivot = e.coeffs[j].clone();
        for r in rows.iter_mut() {
            if r.coeffs[j].is_zero() {
                continue;
            }
            let f = r.coeffs[j].clone() / pivot.clone();
            for (c, ec) in r.coeffs.iter_mut().zip(&e.coeffs) {
                *c = c.clone() - f.clone() * ec.clone();
            }
            r.coeffs[j] = S::zero();
            r.rhs = r.rhs.clone() - f * e.rhs.clone();
        }
        todo[j] = false;
        removed[j] = true;
        stats.substituted += 1;
    }

    // Nonnegativity of the surviving variables never needs to be paired, but
    // it has to be visible to the LP pruning pass.
    let lp_nonneg: Vec<bool> = (0..n)
        .map(|j| sys.nonneg()[j] && !todo[j] && !removed[j])
        .collect();

    let rows = match clean(rows, &eps, |r| r, |_, _| false) {
        Cleaned::Rows(r) => r,
        Cleaned::Infeasible => {
            return Ok((
                drop_columns(sys, vec![infeasible_row(n)], &mark_all(&removed, &todo)),
                stats,
            ))
        }
    };

    let fresh = |rows: Vec<LinearInequality<S>>| -> Vec<Tracked<S>> {
        let m = rows.len();
        rows.into_iter()
            .enumerate()
            .map(|(i, row)| Tracked {
                row,
                anc: Ancestors::single(i, m),
            })
            .collect()
    };
    let mut tracked = fresh(rows);
    let mut steps_since_reset = 0usize;
    stats.peak_rows = tracked.len();

    let neg_eps = -eps.clone();
    while let Some(j) = pick_variable(&tracked, &todo, &eps) {
        steps_since_reset += 1;
        let limit = steps_since_reset as u32 + 1;
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for t in tracked {
            if t.row.coeffs[j] > eps {
                pos.push(t);
            } else if t.row.coeffs[j] < neg_eps {
                neg.push(t);
            } else {
                let mut t = t;
                t.row.coeffs[j] = S::zero();
                next.push(t);
            }
        }
        for p in &pos {
            for q in &neg {
                let anc = p.anc.union(&q.anc);
                if anc.count() > limit {
                    continue;
                }
                next.push(Tracked {
                    row: combine(&p.row, &q.row, j, &eps),
                    anc,
                });
            }
        }
        todo[j] = false;
        removed[j] = true;
        stats.paired += 1;

        tracked = match clean(next, &eps, |t| &t.row, |a, b| a.anc.count() < b.anc.count()) {
            Cleaned::Rows(r) => r,
            Cleaned::Infeasible => {
                let all = mark_all(&removed, &todo);
                return Ok((drop_columns(sys, vec![infeasible_row(n)], &all), stats));
            }
        };
        stats.peak_rows = stats.peak_rows.max(tracked.len());

        if tracked.len() > PRUNE_ABOVE {
            let mut plain: Vec<LinearInequality<S>> = tracked.into_iter().map(|t| t.row).collect();
            prune_implied(&mut plain, &lp_nonneg, &eps);
            stats.lp_prunes += 1;
            // Ancestor bounds only hold relative to the rows they were
            // counted against, so pruning restarts the count.
            tracked = fresh(plain);
            steps_since_reset = 0;
        }
    }

    let rows: Vec<LinearInequality<S>> = tracked.into_iter().map(|t| t.row).collect();
    stats.final_rows = rows.len();
    Ok((drop_columns(sys, rows, &removed), stats))
}

fn mark_all(removed: &[bool], todo: &[bool]) -> Vec<bool> {
    removed.iter().zip(todo).map(|(a, b)| *a || *b).collect()
}

/// Next variable to pair off: the one producing the fewest new rows.
fn pick_variable<S: Scalar>(rows: &[Tracked<S>], todo: &[bool], eps: &S) -> Option<usize> {
    let neg_eps = -eps.clone();
    (0..todo.len()).filter(|&j| todo[j]).min_by_key(|&j| {
        let p = rows.iter().filter(|t| t.row.coeffs[j] > *eps).count() as i64;
        let q = rows.iter().filter(|t| t.row.coeffs[j] < neg_eps).count() as i64;
        p * q - p - q
    })
}

/// Drops rows that are slack everywhere on the feasible set, duplicates of a
/// tighter parallel row, and rows implied by nonnegativity alone.
///
/// Rows that touch the feasible set are kept even when the others imply
/// them, so facet-adjacent bounds meeting the region in a single point
/// survive.
pub fn remove_redundant<S: Scalar>(sys: &HalfspaceSystem<S>) -> HalfspaceSystem<S> {
    if !sys.is_feasible() {
        return sys.clone();
    }
    let eps = sys.eps();
    let zero = S::zero();
    let sign_implied = |r: &LinearInequality<S>| {
        le_eps(&zero, &r.rhs, eps)
            && r.coeffs.iter().zip(sys.nonneg()).all(|(a, nn)| {
                if *nn {
                    le_eps(a, &zero, eps)
                } else {
                    a.abs() <= *eps
                }
            })
    };
    let rows: Vec<LinearInequality<S>> = sys
        .rows()
        .iter()
        .filter(|r| !sign_implied(r))
        .cloned()
        .collect();
    let rows = match clean(rows, eps, |r| r, |_, _| false) {
        Cleaned::Rows(r) => r,
        Cleaned::Infeasible => unreachable!("feasible system cannot contain 0 <= negative"),
    };
    let kept: Vec<LinearInequality<S>> = rows
        .iter()
        .filter(
            |r| match lp::solve(sys.nonneg(), &rows, Some(&r.coeffs), eps) {
                LpOutcome::Optimal { value, .. } => le_eps(&r.rhs, &value, eps),
                _ => true,
            },
        )
        .cloned()
        .collect();
    HalfspaceSystem::from_parts(
        sys.variables().to_vec(),
        sys.nonneg().to_vec(),
        kept,
        eps.clone(),
    )
}
