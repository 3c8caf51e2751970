//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's geometry or search code; the
//! oracles work on plain `i64` rows and are deliberately naive.

#![allow(dead_code)]

use hironaka::{GameState, PointConfiguration, VariantRules};
use proptest::prelude::*;

pub type Rows = Vec<Vec<i64>>;

pub fn rows(config: &PointConfiguration) -> Rows {
    config
        .points()
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .map(|c| c.as_i64().expect("integer coordinate"))
                .collect()
        })
        .collect()
}

pub fn sorted_dedup(mut r: Rows) -> Rows {
    r.sort();
    r.dedup();
    r
}

pub fn config(r: &Rows) -> PointConfiguration {
    PointConfiguration::from_i64(r).unwrap()
}

/// Points with no other point componentwise below them.
pub fn undominated(points: &Rows) -> Rows {
    let pts = sorted_dedup(points.clone());
    pts.iter()
        .filter(|p| {
            !pts.iter()
                .any(|q| q != *p && q.iter().zip(p.iter()).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect()
}

/// Determinant by fraction-free elimination.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        n: usize,
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(n, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(n, k, 0, &mut Vec::with_capacity(k), f)
}

/// Whether `p = sum lambda_q q + r` with `lambda >= 0`, `sum lambda = 1`,
/// `r >= 0` has a solution, by enumerating every basis of the equality
/// system and solving it with Cramer's rule.
pub fn in_positive_hull(p: &[i64], others: &Rows) -> bool {
    if others.is_empty() {
        return false;
    }
    let n = p.len();
    // Columns: (q, 1) for each q, then (e_j, 0) for each coordinate.
    let mut columns: Vec<Vec<i128>> = others
        .iter()
        .map(|q| q.iter().map(|&v| v as i128).chain([1]).collect())
        .collect();
    for j in 0..n {
        columns.push((0..=n).map(|r| (r == j) as i128).collect());
    }
    let rhs: Vec<i128> = p.iter().map(|&v| v as i128).chain([1]).collect();
    combinations(columns.len(), n + 1, &mut |basis| {
        let matrix = |replace: Option<usize>| -> Vec<Vec<i128>> {
            (0..=n)
                .map(|r| {
                    basis
                        .iter()
                        .enumerate()
                        .map(|(c, &col)| {
                            if Some(c) == replace {
                                rhs[r]
                            } else {
                                columns[col][r]
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let d = det(matrix(None));
        d != 0 && (0..=n).all(|c| det(matrix(Some(c))).signum() * d.signum() >= 0)
    })
}

/// Vertices of `conv(S) + R^n_+`.
pub fn vertices(points: &Rows) -> Rows {
    let pts = sorted_dedup(points.clone());
    pts.iter()
        .filter(|p| {
            let others: Rows = pts.iter().filter(|q| q != p).cloned().collect();
            !in_positive_hull(p, &others)
        })
        .cloned()
        .collect()
}

/// All minimum-size coordinate sets hitting every vertex, as sorted index
/// lists in lexicographic order; `None` if a vertex is the origin.
pub fn hitting_sets(points: &Rows) -> Option<Vec<Vec<usize>>> {
    let n = points[0].len();
    let vs = vertices(points);
    if vs.iter().any(|v| v.iter().all(|&x| x == 0)) {
        return None;
    }
    let hits = |set: &[usize]| vs.iter().all(|v| set.iter().any(|&j| v[j] > 0));
    let all: Vec<Vec<usize>> = (1u32..1 << n)
        .map(|mask| (0..n).filter(|j| mask >> j & 1 == 1).collect::<Vec<_>>())
        .filter(|s| hits(s))
        .collect();
    let min = all.iter().map(Vec::len).min()?;
    let mut out: Vec<Vec<usize>> = all.into_iter().filter(|s| s.len() == min).collect();
    out.sort();
    Some(out)
}

/// The unpruned transformation: coordinate `i` becomes the sum over `subset`.
pub fn transform(points: &Rows, subset: &[usize], i: usize) -> Rows {
    points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q[i] = subset.iter().map(|&k| p[k]).sum();
            q
        })
        .collect()
}

/// Whether the host can force termination within `depth` moves; plain
/// recursion, no memo.
pub fn forced_within(rules: &VariantRules, state: &GameState, depth: u32) -> bool {
    if rules.is_terminal(state) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    rules.legal_host_moves(state).unwrap().into_iter().any(|m| {
        rules
            .legal_agent_moves(state, m)
            .into_iter()
            .all(|i| forced_within(rules, &rules.apply(state, m, i).unwrap(), depth - 1))
    })
}

/// Fewest moves forcing termination, if at most `cap`.
pub fn brute_value(rules: &VariantRules, state: &GameState, cap: u32) -> Option<u32> {
    (0..=cap).find(|&d| forced_within(rules, state, d))
}

/// `k` points in dimension `n` with coordinates in `0..=max`.
pub fn rows_strategy(
    n: impl Strategy<Value = usize>,
    k: std::ops::RangeInclusive<usize>,
    max: i64,
) -> impl Strategy<Value = Rows> {
    n.prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..=max, n), k.clone()))
}
