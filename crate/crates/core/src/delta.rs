//! Generalized Kronecker delta and the index enumerations used to contract it.
//!
//! `generalized_delta(upper, lower)` is the determinant of the matrix
//! `[δ^{upper_b}_{lower_a}]`; it is `±1` when `lower` is a permutation of a
//! tuple of distinct `upper` indices (the sign of that permutation) and `0`
//! otherwise.

/// Sign of the permutation `perm` of `0..perm.len()`.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Generalized Kronecker delta `δ^{upper}_{lower}`.
pub fn generalized_delta(upper: &[usize], lower: &[usize]) -> i32 {
    assert_eq!(upper.len(), lower.len(), "delta needs matching index counts");
    let r = upper.len();
    for a in 0..r {
        for b in (a + 1)..r {
            if upper[a] == upper[b] {
                return 0;
            }
        }
    }
    let mut perm = Vec::with_capacity(r);
    let mut used = vec![false; r];
    for &l in lower {
        match upper.iter().position(|&u| u == l) {
            Some(p) if !used[p] => {
                used[p] = true;
                perm.push(p);
            }
            _ => return 0,
        }
    }
    permutation_sign(&perm)
}

/// Determinant form of the generalized delta, evaluated by cofactor expansion.
/// Only intended as a cross-check for [`generalized_delta`].
pub fn generalized_delta_det(upper: &[usize], lower: &[usize]) -> i32 {
    let r = upper.len();
    let m: Vec<Vec<i64>> = (0..r)
        .map(|a| (0..r).map(|b| i64::from(upper[b] == lower[a])).collect())
        .collect();
    det_int(&m) as i32
}

fn det_int(m: &[Vec<i64>]) -> i64 {
    let r = m.len();
    if r == 0 {
        return 1;
    }
    if r == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for col in 0..r {
        if m[0][col] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][col] * det_int(&minor);
    }
    total
}

/// All orderings of `items` together with the sign of the reordering.
pub fn signed_permutations(items: &[usize]) -> Vec<(Vec<usize>, i32)> {
    let r = items.len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    permute(&mut idx, 0, &mut |p| {
        out.push((p.iter().map(|&i| items[i]).collect(), permutation_sign(p)));
    });
    out
}

fn permute(idx: &mut Vec<usize>, pos: usize, visit: &mut dyn FnMut(&[usize])) {
    if pos == idx.len() {
        visit(idx);
        return;
    }
    for i in pos..idx.len() {
        idx.swap(pos, i);
        permute(idx, pos + 1, visit);
        idx.swap(pos, i);
    }
}

/// Visit every injective tuple of length `len` drawn from `0..dim`, skipping
/// the values in `exclude`.
pub fn for_each_injective(
    dim: usize,
    len: usize,
    exclude: &[usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    let mut used = vec![false; dim];
    for &e in exclude {
        if e < dim {
            used[e] = true;
        }
    }
    let mut tuple = Vec::with_capacity(len);
    injective_rec(dim, len, &mut used, &mut tuple, visit);
}

fn injective_rec(
    dim: usize,
    len: usize,
    used: &mut [bool],
    tuple: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if tuple.len() == len {
        visit(tuple);
        return;
    }
    for v in 0..dim {
        if used[v] {
            continue;
        }
        used[v] = true;
        tuple.push(v);
        injective_rec(dim, len, used, tuple, visit);
        tuple.pop();
        used[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..dim).map(move |v| {
                        let mut t = t.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn permutation_form_matches_determinant() {
        for r in 1..=3 {
            for up in all_tuples(4, r) {
                for low in all_tuples(4, r) {
                    assert_eq!(generalized_delta(&up, &low), generalized_delta_det(&up, &low));
                }
            }
        }
    }

    #[test]
    fn contraction_reduces_rank() {
        // δ^{i i_2..i_p}_{i j_2..j_p} summed over i equals (d - p + 1) δ^{i_2..i_p}_{j_2..j_p}
        let d = 4;
        for p in 2..=4 {
            for up in all_tuples(d, p - 1) {
                for low in all_tuples(d, p - 1) {
                    let contracted: i32 = (0..d)
                        .map(|i| {
                            let mut u = vec![i];
                            u.extend(&up);
                            let mut l = vec![i];
                            l.extend(&low);
                            generalized_delta(&u, &l)
                        })
                        .sum();
                    let expected = (d as i32 - p as i32 + 1) * generalized_delta(&up, &low);
                    assert_eq!(contracted, expected, "p={p} up={up:?} low={low:?}");
                }
            }
        }
    }

    #[test]
    fn signs_and_counts() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        let perms = signed_permutations(&[3, 5, 7, 9]);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().map(|(_, s)| s).sum::<i32>(), 0);
        let mut count = 0;
        for_each_injective(5, 3, &[2], &mut |_| count += 1);
        assert_eq!(count, 4 * 3 * 2);
    }
}
