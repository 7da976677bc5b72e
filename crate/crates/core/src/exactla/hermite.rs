//! Row-style Hermite normal form over Z, optionally tracking the unimodular
//! transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Reduces `rows` in place to Hermite normal form: nonzero rows first, in
/// echelon order, with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Every row operation is mirrored on `transform` when
/// given, so that `transform · original = result` holds when `transform`
/// starts as the identity.
///
/// Returns the pivot columns; their count is the rank.
pub(crate) fn hermite(rows: &mut [Vec<BigInt>], ncols: usize, mut transform: Option<&mut [Vec<BigInt>]>) -> Vec<usize> {
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..ncols {
        if pr == m {
            break;
        }
        loop {
            let best = (pr..m)
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pr, best);
            if let Some(t) = transform.as_deref_mut() {
                t.swap(pr, best);
            }
            let mut clean = true;
            for i in pr + 1..m {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[pr][col]);
                sub_row(rows, i, pr, &q);
                if let Some(t) = transform.as_deref_mut() {
                    sub_row(t, i, pr, &q);
                }
                if !rows[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[pr][col].is_zero() {
            continue;
        }
        if rows[pr][col].is_negative() {
            negate_row(rows, pr);
            if let Some(t) = transform.as_deref_mut() {
                negate_row(t, pr);
            }
        }
        for i in 0..pr {
            let q = rows[i][col].div_floor(&rows[pr][col]);
            if !q.is_zero() {
                sub_row(rows, i, pr, &q);
                if let Some(t) = transform.as_deref_mut() {
                    sub_row(t, i, pr, &q);
                }
            }
        }
        pivots.push(col);
        pr += 1;
    }
    pivots
}

fn sub_row(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let (t, s) = if target < source {
        let (a, b) = rows.split_at_mut(source);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(target);
        (&mut b[0], &a[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn negate_row(rows: &mut [Vec<BigInt>], r: usize) {
    for x in rows[r].iter_mut() {
        *x = -std::mem::take(x);
    }
}
