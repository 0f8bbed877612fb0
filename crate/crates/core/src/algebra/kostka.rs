//! Weight multiplicities by tableau counting, independent of any explicit
//! module construction.

use crate::algebra::{ModuleSpec, Partition};
use crate::scalar::Scalar;

/// Number of semistandard tableaux of shape `lambda` and content `content`
/// (the multiplicity of the weight `content` in `L_lambda`).
pub fn kostka(lambda: &Partition, content: &[usize]) -> u64 {
    if lambda.size() != content.iter().sum::<usize>() {
        return 0;
    }
    let shape = lambda.parts().to_vec();
    count_strips(&shape, &vec![0; shape.len()], content)
}

/// Counts chains of horizontal strips from `cur` up to `shape`, strip sizes given by `content`.
fn count_strips(shape: &[usize], cur: &[usize], content: &[usize]) -> u64 {
    let Some((&size, rest)) = content.split_first() else {
        return u64::from(cur == shape);
    };
    let mut total = 0;
    let mut next = cur.to_vec();
    add_strip(shape, cur, &mut next, 0, size, &mut |n| total += count_strips(shape, n, rest));
    total
}

/// Enumerates `next ⊇ cur` with `next / cur` a horizontal strip of `left` boxes inside `shape`.
fn add_strip(shape: &[usize], cur: &[usize], next: &mut Vec<usize>, row: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
    if row == shape.len() {
        if left == 0 {
            f(next);
        }
        return;
    }
    // a horizontal strip never extends row r past the old length of row r-1
    let cap = if row == 0 { shape[0] } else { shape[row].min(cur[row - 1]) };
    let max_add = cap.saturating_sub(cur[row]).min(left);
    for a in 0..=max_add {
        next[row] = cur[row] + a;
        add_strip(shape, cur, next, row + 1, left - a, f);
    }
    next[row] = cur[row];
}

/// `dim (⊗_s L_{λ^(s)})_λ` from tableau counts.
pub fn dimension_oracle<F: Scalar>(spec: &ModuleSpec<F>) -> u64 {
    let rank = spec.rank();
    let target = spec.weight().padded(rank);
    let mut total = 0;
    sum_over_splits(spec, rank, 0, target, 1, &mut total);
    total
}

fn sum_over_splits<F: Scalar>(spec: &ModuleSpec<F>, rank: usize, s: usize, left: Vec<usize>, acc: u64, total: &mut u64) {
    if s == spec.factors() {
        if left.iter().all(|&x| x == 0) {
            *total += acc;
        }
        return;
    }
    for content in compositions(spec.n_s(s), rank) {
        if content.iter().zip(&left).any(|(c, l)| c > l) {
            continue;
        }
        let k = kostka(&spec.partitions()[s], &content);
        if k == 0 {
            continue;
        }
        let rest = left.iter().zip(&content).map(|(l, c)| l - c).collect();
        sum_over_splits(spec, rank, s + 1, rest, acc * k, total);
    }
}

/// All compositions of `n` into `parts` non-negative parts.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_kostka_numbers() {
        assert_eq!(kostka(&p(&[2, 1]), &[1, 1, 1]), 2);
        assert_eq!(kostka(&p(&[2]), &[1, 1]), 1);
        assert_eq!(kostka(&p(&[1, 1]), &[2, 0]), 0);
        assert_eq!(kostka(&p(&[2, 2]), &[1, 1, 1, 1]), 2);
        assert_eq!(kostka(&p(&[1]), &[0, 1]), 1);
        // sum over all contents of L_(2,1) for gl_3 equals dim 8
        let dim: u64 = compositions(3, 3).iter().map(|c| kostka(&p(&[2, 1]), c)).sum();
        assert_eq!(dim, 8);
    }
}
