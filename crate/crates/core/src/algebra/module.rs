use std::collections::{BTreeMap, VecDeque};

use crate::algebra::tensor::{e_op, WeightSpace};
use crate::algebra::Partition;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::polyring::{MatRatFun, Poly};
use crate::scalar::Scalar;

/// Rank, twist, highest weights, evaluation points and target weight of
/// `(⊗_s L_{λ^(s)}(b_s))_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleSpec<F> {
    rank: usize,
    k: Vec<F>,
    partitions: Vec<Partition>,
    b: Vec<F>,
    weight: Partition,
}

impl<F: Scalar> ModuleSpec<F> {
    pub fn new(rank: usize, k: Vec<F>, partitions: Vec<Partition>, b: Vec<F>, weight: Partition) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        if k.len() != rank {
            return Err(Error::InvalidInput(format!("expected {rank} exponents, got {}", k.len())));
        }
        if has_duplicates(&k) {
            return Err(Error::InvalidInput("exponents K must be pairwise distinct".into()));
        }
        if partitions.is_empty() || partitions.len() != b.len() {
            return Err(Error::InvalidInput("need one evaluation point per partition".into()));
        }
        if has_duplicates(&b) {
            return Err(Error::InvalidInput("evaluation points b must be pairwise distinct".into()));
        }
        for p in partitions.iter().chain(std::iter::once(&weight)) {
            if p.len() > rank {
                return Err(Error::InvalidInput(format!("{p} has more than {rank} parts")));
            }
        }
        if partitions.iter().any(Partition::is_empty) {
            return Err(Error::InvalidInput("every factor needs a nonempty partition".into()));
        }
        let n: usize = partitions.iter().map(Partition::size).sum();
        if n != weight.size() {
            return Err(Error::InvalidInput(format!(
                "target weight {weight} has size {} but the factors have total size {n}",
                weight.size()
            )));
        }
        Ok(ModuleSpec { rank, k, partitions, b, weight })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn k(&self) -> &[F] {
        &self.k
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn b(&self) -> &[F] {
        &self.b
    }

    pub fn weight(&self) -> &Partition {
        &self.weight
    }

    /// Number of factors `k`.
    pub fn factors(&self) -> usize {
        self.b.len()
    }

    pub fn n_s(&self, s: usize) -> usize {
        self.partitions[s].size()
    }

    pub fn n(&self) -> usize {
        self.weight.size()
    }

    /// Whether every factor is the vector representation.
    pub fn is_vector_case(&self) -> bool {
        self.partitions.iter().all(Partition::is_vector)
    }

    /// Factor owning each ambient tensor position.
    pub fn position_factors(&self) -> Vec<usize> {
        (0..self.factors()).flat_map(|s| std::iter::repeat_n(s, self.n_s(s))).collect()
    }

    /// `prod_s (u - b_s)^{n_s}`.
    pub fn normalizer(&self) -> Poly<F> {
        (0..self.factors()).fold(Poly::one(), |acc, s| &acc * &Poly::linear(&self.b[s]).pow(self.n_s(s)))
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> ModuleSpec<G> {
        ModuleSpec {
            rank: self.rank,
            k: self.k.iter().map(&f).collect(),
            partitions: self.partitions.clone(),
            b: self.b.iter().map(&f).collect(),
            weight: self.weight.clone(),
        }
    }
}

fn has_duplicates<F: PartialEq>(v: &[F]) -> bool {
    (0..v.len()).any(|i| (i + 1..v.len()).any(|j| v[i] == v[j]))
}

/// A singular vector of weight `mu` in `V^{⊗n}`, `n = |mu|`, as coordinates on
/// the weight basis: the first vector of the reduced-echelon kernel basis of
/// the raising operators, scaled so its first nonzero coordinate is 1.
pub fn find_singular_vector<F: Scalar>(rank: usize, mu: &[usize]) -> Result<Vec<F>> {
    let space = WeightSpace::new(mu);
    let n: usize = mu.iter().sum();
    let all: Vec<usize> = (0..n).collect();
    let mut rows = Vec::new();
    for i in 0..rank.saturating_sub(1) {
        if let Some(w) = space.shifted_weight(i, i + 1) {
            let to = WeightSpace::new(&w);
            let m: ExactMatrix<F> = e_op(i, i + 1, &all, &space, &to);
            for r in 0..m.rows() {
                rows.push((0..m.cols()).map(|c| m.get(r, c).clone()).collect::<Vec<_>>());
            }
        }
    }
    let kernel = if rows.is_empty() {
        // no raising operators (rank 1): every vector is singular
        ExactMatrix::<F>::zeros(1, space.dim()).nullspace()
    } else {
        ExactMatrix::from_rows(rows).nullspace()
    };
    let mut v = kernel
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoSingularVector(format!("no singular vector of weight {mu:?}")))?;
    let first = v.iter().find(|x| !x.is_zero()).cloned().expect("kernel vectors are nonzero");
    let inv = F::one() / first;
    for x in v.iter_mut() {
        *x = x.clone() * inv.clone();
    }
    Ok(v)
}

/// Per-weight bases of `L_λ ⊂ V^{⊗|λ|}`, spanned from the singular vector by
/// the lowering operators `e_{i+1,i}` (breadth-first, exact rank updates).
pub fn irreducible_weight_spaces<F: Scalar>(
    rank: usize,
    lambda: &Partition,
) -> Result<BTreeMap<Vec<usize>, (WeightSpace, Vec<Vec<F>>)>> {
    let top = lambda.padded(rank);
    let n = lambda.size();
    let all: Vec<usize> = (0..n).collect();
    let v0 = find_singular_vector::<F>(rank, &top)?;
    let mut spaces: BTreeMap<Vec<usize>, (WeightSpace, Vec<Vec<F>>)> = BTreeMap::new();
    spaces.insert(top.clone(), (WeightSpace::new(&top), vec![v0]));
    let mut queue = VecDeque::from([top]);
    while let Some(w) = queue.pop_front() {
        let (space, vecs) = spaces[&w].clone();
        for i in 0..rank.saturating_sub(1) {
            let Some(w2) = space.shifted_weight(i + 1, i) else {
                continue;
            };
            let to = spaces
                .get(&w2)
                .map(|(s, _)| s.clone())
                .unwrap_or_else(|| WeightSpace::new(&w2));
            let lower: ExactMatrix<F> = e_op(i + 1, i, &all, &space, &to);
            let entry = spaces.entry(w2.clone()).or_insert_with(|| (to, Vec::new()));
            let mut grew = false;
            for v in &vecs {
                let img = lower.mul_vec(v);
                if img.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let mut cand = entry.1.clone();
                cand.push(img.clone());
                if ExactMatrix::from_rows(cand).rank() > entry.1.len() {
                    entry.1.push(img);
                    grew = true;
                }
            }
            if grew && !queue.contains(&w2) {
                queue.push_back(w2);
            }
        }
    }
    spaces.retain(|_, (_, v)| !v.is_empty());
    Ok(spaces)
}

/// Exact coordinates of `(⊗_s L_{λ^(s)}(b_s))_λ` inside the ambient weight
/// space `(⊗_s V(b_s)^{⊗ n_s})_λ`.
#[derive(Clone, Debug)]
pub struct EmbeddedModule<F> {
    spec: ModuleSpec<F>,
    ambient: WeightSpace,
    embed: ExactMatrix<F>,
    pivot_rows: Vec<usize>,
    pivot_inv: ExactMatrix<F>,
}

pub fn build_embedded_module<F: Scalar>(spec: &ModuleSpec<F>) -> Result<EmbeddedModule<F>> {
    let rank = spec.rank();
    let target = spec.weight().padded(rank);
    let ambient = WeightSpace::new(&target);
    let factor_spaces = spec
        .partitions()
        .iter()
        .map(|p| irreducible_weight_spaces::<F>(rank, p))
        .collect::<Result<Vec<_>>>()?;
    let mut columns: Vec<Vec<F>> = Vec::new();
    let mut chosen: Vec<&(WeightSpace, Vec<Vec<F>>)> = Vec::new();
    collect_columns(&factor_spaces, &target, vec![0; rank], &mut chosen, &ambient, &mut columns);
    if columns.is_empty() {
        return Err(Error::InvalidInput(format!(
            "the weight {} does not occur in the tensor product",
            spec.weight()
        )));
    }
    // order columns by leading ambient coordinate, so the vector case is the identity
    columns.sort_by_key(|c| c.iter().position(|x| !x.is_zero()));
    let embed = ExactMatrix::from_columns(ambient.dim(), &columns);
    let (_, pivot_rows) = transpose(&embed).rref();
    if pivot_rows.len() != columns.len() {
        return Err(Error::Construction("embedded basis is not linearly independent".into()));
    }
    let square = ExactMatrix::from_rows(pivot_rows.iter().map(|&r| row(&embed, r)).collect());
    let pivot_inv = square.inverse()?;
    Ok(EmbeddedModule {
        spec: spec.clone(),
        ambient,
        embed,
        pivot_rows,
        pivot_inv,
    })
}

fn collect_columns<'a, F: Scalar>(
    factors: &'a [BTreeMap<Vec<usize>, (WeightSpace, Vec<Vec<F>>)>],
    target: &[usize],
    acc: Vec<usize>,
    chosen: &mut Vec<&'a (WeightSpace, Vec<Vec<F>>)>,
    ambient: &WeightSpace,
    out: &mut Vec<Vec<F>>,
) {
    let s = chosen.len();
    if s == factors.len() {
        if acc == target {
            tensor_columns(chosen, ambient, out);
        }
        return;
    }
    for (w, entry) in &factors[s] {
        let next: Vec<usize> = acc.iter().zip(w).map(|(a, b)| a + b).collect();
        if next.iter().zip(target).any(|(a, t)| a > t) {
            continue;
        }
        chosen.push(entry);
        collect_columns(factors, target, next, chosen, ambient, out);
        chosen.pop();
    }
}

fn tensor_columns<F: Scalar>(chosen: &[&(WeightSpace, Vec<Vec<F>>)], ambient: &WeightSpace, out: &mut Vec<Vec<F>>) {
    // iterate over all choices of one basis vector per factor
    let counts: Vec<usize> = chosen.iter().map(|(_, v)| v.len()).collect();
    let mut pick = vec![0usize; chosen.len()];
    loop {
        let mut col = vec![F::zero(); ambient.dim()];
        let mut partial: Vec<(Vec<usize>, F)> = vec![(Vec::new(), F::one())];
        for (s, (space, vecs)) in chosen.iter().enumerate() {
            let v = &vecs[pick[s]];
            let mut next = Vec::new();
            for (idx, c) in &partial {
                for (k, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j.extend_from_slice(&space.basis()[k]);
                    next.push((j, c.clone() * x.clone()));
                }
            }
            partial = next;
        }
        for (j, c) in partial {
            let r = ambient.position(&j).expect("tensor of weight vectors has the target weight");
            col[r] = col[r].clone() + c;
        }
        out.push(col);
        // odometer
        let mut s = chosen.len();
        loop {
            if s == 0 {
                return;
            }
            s -= 1;
            pick[s] += 1;
            if pick[s] < counts[s] {
                break;
            }
            pick[s] = 0;
        }
    }
}

fn transpose<F: Scalar>(m: &ExactMatrix<F>) -> ExactMatrix<F> {
    ExactMatrix::from_columns(m.cols(), &(0..m.rows()).map(|r| row(m, r)).collect::<Vec<_>>())
}

fn row<F: Scalar>(m: &ExactMatrix<F>, r: usize) -> Vec<F> {
    (0..m.cols()).map(|c| m.get(r, c).clone()).collect()
}

impl<F: Scalar> EmbeddedModule<F> {
    pub fn spec(&self) -> &ModuleSpec<F> {
        &self.spec
    }

    pub fn ambient(&self) -> &WeightSpace {
        &self.ambient
    }

    /// Columns are the embedded basis in ambient coordinates.
    pub fn embedding(&self) -> &ExactMatrix<F> {
        &self.embed
    }

    pub fn dim(&self) -> usize {
        self.embed.cols()
    }

    /// Matrix of an ambient operator on the embedded subspace; fails unless the
    /// subspace is invariant.
    pub fn restrict(&self, op: &ExactMatrix<F>) -> Result<ExactMatrix<F>> {
        let image = op * &self.embed;
        let picked = ExactMatrix::from_rows(self.pivot_rows.iter().map(|&r| row(&image, r)).collect());
        let y = &self.pivot_inv * &picked;
        if F::EXACT && &self.embed * &y != image {
            return Err(Error::Construction("embedded subspace is not invariant under the operator".into()));
        }
        Ok(y)
    }

    pub fn restrict_matrat(&self, op: &MatRatFun<F>) -> Result<MatRatFun<F>> {
        let coeffs = op.num().iter().map(|m| self.restrict(m)).collect::<Result<Vec<_>>>()?;
        MatRatFun::new(self.dim(), self.dim(), coeffs, op.den().clone())
    }

    /// `e_ij(u) = sum_p e_ij^{(p)} / (u - b(p))` on the embedded basis. Off-diagonal
    /// generators change the weight, so their restriction to a weight space is zero.
    pub fn e_series_action(&self, i: usize, j: usize) -> Result<MatRatFun<F>> {
        let rank = self.spec.rank();
        if i >= rank || j >= rank {
            return Err(Error::InvalidInput("generator index out of range".into()));
        }
        if i != j {
            return Ok(MatRatFun::zeros(self.dim(), self.dim()));
        }
        let amb = Ambient::new(&self.spec);
        self.restrict_matrat(&amb.e_series(i, j, &self.ambient, &self.ambient))
    }

    /// Constant generator `e_ij = sum_p e_ij^{(p)}` on the embedded basis (diagonal only).
    pub fn e_constant(&self, i: usize) -> Result<ExactMatrix<F>> {
        let all: Vec<usize> = (0..self.spec.n()).collect();
        self.restrict(&e_op(i, i, &all, &self.ambient, &self.ambient))
    }
}

/// The ambient tensor power `⊗_s V(b_s)^{⊗ n_s}` with positions grouped by factor.
#[derive(Clone, Debug)]
pub struct Ambient<F> {
    groups: Vec<Vec<usize>>,
    b: Vec<F>,
}

impl<F: Scalar> Ambient<F> {
    pub fn new(spec: &ModuleSpec<F>) -> Self {
        let pf = spec.position_factors();
        let groups = (0..spec.factors())
            .map(|s| (0..pf.len()).filter(|&p| pf[p] == s).collect())
            .collect();
        Ambient {
            groups,
            b: spec.b().to_vec(),
        }
    }

    /// `e_ij(u)` from `from` to `to` as a matrix rational function with
    /// denominator `prod_s (u - b_s)`.
    pub fn e_series(&self, i: usize, j: usize, from: &WeightSpace, to: &WeightSpace) -> MatRatFun<F> {
        let k = self.b.len();
        let den = self.b.iter().fold(Poly::one(), |acc, b| &acc * &Poly::linear(b));
        let mut num: Vec<ExactMatrix<F>> = vec![ExactMatrix::zeros(to.dim(), from.dim()); k];
        for s in 0..k {
            let m: ExactMatrix<F> = e_op(i, j, &self.groups[s], from, to);
            if m.is_zero() {
                continue;
            }
            let others = (0..k)
                .filter(|&r| r != s)
                .fold(Poly::one(), |acc, r| &acc * &Poly::linear(&self.b[r]));
            for (d, c) in others.coeffs().iter().enumerate() {
                num[d] = &num[d] + &m.scale(c);
            }
        }
        MatRatFun::new(to.dim(), from.dim(), num, den).expect("nonzero denominator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn spec(rank: usize, parts: &[&[usize]], b: &[i64], weight: &[usize]) -> ModuleSpec<Rat> {
        ModuleSpec::new(
            rank,
            (0..rank as i64).map(|k| rat(k, 1)).collect(),
            parts.iter().map(|p| part(p)).collect(),
            b.iter().map(|&x| rat(x, 1)).collect(),
            part(weight),
        )
        .unwrap()
    }

    #[test]
    fn singular_vectors() {
        assert_eq!(find_singular_vector::<Rat>(2, &[1, 0]).unwrap(), vec![rat(1, 1)]);
        assert_eq!(find_singular_vector::<Rat>(2, &[1, 1]).unwrap(), vec![rat(1, 1), rat(-1, 1)]);
        assert_eq!(find_singular_vector::<Rat>(2, &[2, 0]).unwrap(), vec![rat(1, 1)]);
        assert!(find_singular_vector::<Rat>(2, &[0, 1]).is_err());
    }

    #[test]
    fn embedded_examples() {
        let m = build_embedded_module(&spec(2, &[&[1], &[1]], &[0, 1], &[1, 1])).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.embedding(), &ExactMatrix::identity(2));

        let m = build_embedded_module(&spec(2, &[&[2]], &[0], &[1, 1])).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.embedding().column(0), vec![rat(1, 1), rat(1, 1)]);

        let m = build_embedded_module(&spec(3, &[&[1, 1]], &[0], &[1, 1])).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.embedding().column(0), vec![rat(1, 1), rat(-1, 1)]);
    }

    #[test]
    fn e_series_on_two_points() {
        let m = build_embedded_module(&spec(2, &[&[1], &[1]], &[0, 1], &[1, 1])).unwrap();
        let e11 = m.e_series_action(0, 0).unwrap();
        // basis (1,2), (2,1): e_11 hits the first factor, then the second
        assert_eq!(e11.eval(&rat(2, 1)).unwrap(), ExactMatrix::from_rows(vec![
            vec![rat(1, 2), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ]));
        assert!(m.e_series_action(0, 1).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_specs() {
        let p = |v: &[usize]| part(v);
        let k = vec![rat(0, 1), rat(1, 1)];
        assert!(ModuleSpec::new(2, k.clone(), vec![p(&[1]), p(&[1])], vec![rat(0, 1), rat(0, 1)], p(&[1, 1])).is_err());
        assert!(ModuleSpec::new(2, vec![rat(0, 1), rat(0, 1)], vec![p(&[1])], vec![rat(0, 1)], p(&[1])).is_err());
        assert!(ModuleSpec::new(2, k, vec![p(&[1])], vec![rat(0, 1)], p(&[2])).is_err());
    }
}
