//! Permutation signs from explicit one-line descriptions.

/// Sign of the permutation `k ↦ image[k-1]`, computed by counting inversions.
/// `image` must be a rearrangement of distinct labels; labels need not be
/// `1..=n` as long as they are distinct (the relative order is what counts).
pub fn sign_of(image: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..image.len() {
        for j in i + 1..image.len() {
            if image[i] > image[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the permutation described by ordered pairs
/// `(i1,i2),(i3,i4),…` flattened in order.
pub fn pairs_sign(pairs: &[(usize, usize)]) -> i8 {
    let flat: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    sign_of(&flat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_transposition() {
        assert_eq!(sign_of(&[1, 2, 3, 4]), 1);
        assert_eq!(sign_of(&[2, 1, 3, 4]), -1);
        assert_eq!(sign_of(&[]), 1);
    }

    #[test]
    fn swapping_two_pairs_keeps_the_sign() {
        let a = [(1, 4), (2, 3), (5, 6)];
        let b = [(2, 3), (1, 4), (5, 6)];
        let c = [(5, 6), (2, 3), (1, 4)];
        assert_eq!(pairs_sign(&a), pairs_sign(&b));
        assert_eq!(pairs_sign(&a), pairs_sign(&c));
    }

    #[test]
    fn reversing_one_pair_flips_the_sign() {
        assert_eq!(pairs_sign(&[(1, 4), (2, 3)]), -pairs_sign(&[(4, 1), (2, 3)]));
    }
}

/// All pairings of `0..n` in canonical order: the smallest unpaired index is
/// paired with each larger unpaired index in increasing order, recursively.
/// Pairs are listed in the order they were chosen (smaller element first).
/// Odd `n` has no pairings; `n = 0` has exactly the empty pairing.
pub fn pairings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some(first) = used.iter().position(|u| !u) else {
            out.push(current.clone());
            return;
        };
        used[first] = true;
        for partner in first + 1..used.len() {
            if used[partner] {
                continue;
            }
            used[partner] = true;
            current.push((first, partner));
            rec(used, current, out);
            current.pop();
            used[partner] = false;
        }
        used[first] = false;
    }

    let mut out = Vec::new();
    if n % 2 == 1 {
        return out;
    }
    rec(&mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod pairing_tests {
    use super::*;

    #[test]
    fn pairing_counts_are_double_factorials() {
        assert_eq!(pairings(0).len(), 1);
        assert_eq!(pairings(2).len(), 1);
        assert_eq!(pairings(4).len(), 3);
        assert_eq!(pairings(6).len(), 15);
        assert_eq!(pairings(8).len(), 105);
        assert!(pairings(5).is_empty());
    }

    #[test]
    fn four_point_pairings_in_canonical_order() {
        let p = pairings(4);
        assert_eq!(p[0], vec![(0, 1), (2, 3)]);
        assert_eq!(p[1], vec![(0, 2), (1, 3)]);
        assert_eq!(p[2], vec![(0, 3), (1, 2)]);
        let signs: Vec<i8> = p.iter().map(|d| pairs_sign(d)).collect();
        assert_eq!(signs, vec![1, -1, 1]);
    }
}
