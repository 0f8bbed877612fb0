use std::collections::HashMap;

use crate::algebra::Partition;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::scalar::Scalar;

/// A pure tensor `e_{j_1} ⊗ ... ⊗ e_{j_n}`; entries are zero-based.
pub type TensorIndex = Vec<usize>;

/// Ordered basis of one weight subspace of `V^{⊗n}` with a reverse lookup.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    weight: Vec<usize>,
    basis: Vec<TensorIndex>,
    index: HashMap<TensorIndex, usize>,
}

impl WeightSpace {
    /// All tensors whose entry counts equal `weight` (length = rank), in lexicographic order.
    pub fn new(weight: &[usize]) -> Self {
        let n: usize = weight.iter().sum();
        let mut basis = Vec::new();
        let mut remaining = weight.to_vec();
        let mut cur = Vec::with_capacity(n);
        fill(&mut remaining, &mut cur, n, &mut basis);
        let index = basis.iter().enumerate().map(|(k, j)| (j.clone(), k)).collect();
        WeightSpace {
            weight: weight.to_vec(),
            basis,
            index,
        }
    }

    pub fn weight(&self) -> &[usize] {
        &self.weight
    }

    pub fn basis(&self) -> &[TensorIndex] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, j: &TensorIndex) -> Option<usize> {
        self.index.get(j).copied()
    }

    /// Weight after applying `e_ij`, or `None` when the result is zero.
    pub fn shifted_weight(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        if self.weight[j] == 0 {
            return None;
        }
        let mut w = self.weight.clone();
        w[j] -= 1;
        w[i] += 1;
        Some(w)
    }
}

fn fill(remaining: &mut [usize], cur: &mut Vec<usize>, n: usize, out: &mut Vec<TensorIndex>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for v in 0..remaining.len() {
        if remaining[v] > 0 {
            remaining[v] -= 1;
            cur.push(v);
            fill(remaining, cur, n, out);
            cur.pop();
            remaining[v] += 1;
        }
    }
}

/// Weight basis of `(V^{⊗n})_λ` for `V = C^N`.
pub fn enumerate_weight_basis(rank: usize, n: usize, lambda: &Partition) -> Result<Vec<TensorIndex>> {
    if lambda.len() > rank {
        return Err(Error::InvalidInput(format!("{lambda} has more than {rank} parts")));
    }
    if lambda.size() != n {
        return Err(Error::InvalidInput(format!("|{lambda}| = {} differs from n = {n}", lambda.size())));
    }
    Ok(WeightSpace::new(&lambda.padded(rank)).basis)
}

/// `e_ij` acting in tensor factor `s` of the pure tensor `J` (all indices zero-based).
pub fn act_e(rank: usize, i: usize, j: usize, s: usize, index: &[usize]) -> Result<Option<TensorIndex>> {
    if i >= rank || j >= rank || s >= index.len() || index.iter().any(|&x| x >= rank) {
        return Err(Error::InvalidInput("generator or tensor index out of range".into()));
    }
    if index[s] != j {
        return Ok(None);
    }
    let mut out = index.to_vec();
    out[s] = i;
    Ok(Some(out))
}

/// Matrix of `sum_{p in positions} e_ij^{(p)}` from `from` to `to`.
pub fn e_op<F: Scalar>(i: usize, j: usize, positions: &[usize], from: &WeightSpace, to: &WeightSpace) -> ExactMatrix<F> {
    let mut m = ExactMatrix::<F>::zeros(to.dim(), from.dim());
    for (c, index) in from.basis.iter().enumerate() {
        for &p in positions {
            if index[p] == j {
                let mut img = index.clone();
                img[p] = i;
                if let Some(r) = to.position(&img) {
                    let v = m.get(r, c).clone() + F::one();
                    m.set(r, c, v);
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    #[test]
    fn weight_basis_examples() {
        let b = enumerate_weight_basis(2, 2, &Partition::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(b, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(enumerate_weight_basis(2, 4, &Partition::new(vec![2, 2]).unwrap()).unwrap().len(), 6);
        assert_eq!(enumerate_weight_basis(3, 3, &Partition::new(vec![1, 1, 1]).unwrap()).unwrap().len(), 6);
        assert!(enumerate_weight_basis(2, 3, &Partition::new(vec![1, 1]).unwrap()).is_err());
    }

    #[test]
    fn act_e_examples() {
        assert_eq!(act_e(2, 1, 0, 0, &[0, 1]).unwrap(), Some(vec![1, 1]));
        assert_eq!(act_e(2, 0, 1, 0, &[0, 1]).unwrap(), None);
        assert!(act_e(2, 2, 0, 0, &[0, 1]).is_err());
    }

    #[test]
    fn commutator_on_two_factors() {
        let w = WeightSpace::new(&[1, 1]);
        let all = [0, 1];
        let e11: ExactMatrix<Rat> = e_op(0, 0, &all, &w, &w);
        assert_eq!(e11, ExactMatrix::identity(2));
        // e_12 leaves the weight space, so [e_11, e_12] = e_12 is checked on the full space
        let up = WeightSpace::new(&[2, 0]);
        let e12: ExactMatrix<Rat> = e_op(0, 1, &all, &w, &up);
        let e11_up: ExactMatrix<Rat> = e_op(0, 0, &all, &up, &up);
        let comm = &(&e11_up * &e12) - &(&e12 * &e11);
        assert_eq!(comm, e12);
        assert_eq!(e12.get(0, 0), &rat(1, 1));
    }
}
