/// All permutations of `0..n` in lexicographic order with their signs.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push((perm.clone(), permutation_sign(&perm)));
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `n! / (k_1! ... k_m!)` for `n = sum k_i`.
pub fn multinomial(parts: &[usize]) -> u64 {
    let mut acc: u64 = 1;
    let mut total = 0usize;
    for &p in parts {
        for i in 1..=p {
            total += 1;
            acc = acc * total as u64 / i as u64;
        }
    }
    acc
}

/// Primes `>= start`, in increasing order.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&p| (2..).take_while(|d| d * d <= p).all(|d| p % d != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_of_three() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms[0], (vec![0, 1, 2], 1));
        assert_eq!(perms[1], (vec![0, 2, 1], -1));
        assert_eq!(perms.iter().map(|p| p.1).sum::<i64>(), 0);
        assert_eq!(signed_permutations(0), vec![(vec![], 1)]);
    }

    #[test]
    fn counting() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(multinomial(&[2, 2]), 6);
        assert_eq!(multinomial(&[1, 1, 1]), 6);
        assert_eq!(factorial(5), 120);
        let p: Vec<u64> = primes_from(13).take(4).collect();
        assert_eq!(p, vec![13, 17, 19, 23]);
    }
}
