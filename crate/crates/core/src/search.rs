//! Deterministic enumeration orders shared by the bounded searches.

use num_integer::Integer;

/// `0, 1, -1, 2, -2, ...` — the `k`-th term.
pub fn signed(k: u64) -> i64 {
    let h = k.div_ceil(2) as i64;
    if k % 2 == 1 {
        h
    } else {
        -h
    }
}

/// Integer vectors of length `n` with max-norm exactly `h`, content 1 and
/// first nonzero coordinate positive, lexicographic with respect to the
/// per-coordinate order `0, 1, -1, 2, -2, ...`.
pub fn vectors_of_height(n: usize, h: i64) -> impl Iterator<Item = Vec<i64>> {
    let width = (2 * h + 1) as u64;
    let total = width.checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).filter_map(move |mut code| {
        let mut v = vec![0i64; n];
        for slot in v.iter_mut().rev() {
            *slot = signed(code % width);
            code /= width;
        }
        let max = v.iter().map(|x| x.abs()).max().unwrap_or(0);
        let first = v.iter().find(|x| **x != 0).copied().unwrap_or(0);
        let content = v.iter().fold(0i64, |g, x| g.gcd(x));
        (max == h && first > 0 && content == 1).then_some(v)
    })
}

/// All primitive vectors up to max-norm `max_h`, by increasing height.
pub fn height_ordered(n: usize, max_h: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=max_h).flat_map(move |h| vectors_of_height(n, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_order() {
        let v: Vec<i64> = (0..7).map(signed).collect();
        assert_eq!(v, vec![0, 1, -1, 2, -2, 3, -3]);
    }

    #[test]
    fn height_one_in_two_dims() {
        let v: Vec<Vec<i64>> = vectors_of_height(2, 1).collect();
        assert_eq!(v, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, -1]]);
    }

    #[test]
    fn counts_match_primitive_projective_points() {
        // Primitive vectors up to sign in [-h, h]^2 of exact height h:
        // 4 at h=1 and 4*phi(h) after that.
        let counts: Vec<usize> = (1..=6).map(|h| vectors_of_height(2, h).count()).collect();
        assert_eq!(counts, vec![4, 4, 8, 8, 16, 8]);
    }
}
