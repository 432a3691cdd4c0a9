//! Cantor pairing between `ℕ` and `ℕ × ℕ`.

/// `(i, j) ↦ (i + j)(i + j + 1)/2 + j`.
pub fn cantor_pair(i: usize, j: usize) -> usize {
    let w = i + j;
    w * (w + 1) / 2 + j
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(k: usize) -> (usize, usize) {
    // w is the diagonal: the largest w with w(w+1)/2 <= k.
    let w = ((8 * k as u128 + 1).isqrt() as usize - 1) / 2;
    let t = w * (w + 1) / 2;
    let j = k - t;
    (w - j, j)
}
