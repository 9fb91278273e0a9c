//! Dense linear algebra over F_p with word-sized entries.

fn inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Reduces `rows` to row echelon form in place; returns the rank. Rows past
/// the rank are zero afterwards.
pub fn rank(rows: &mut Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] % p != 0) else { continue };
        rows.swap(r, piv);
        let iv = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mulm(*x, iv, p);
        }
        let pr = rows[r].clone();
        for i in 0..rows.len() {
            if i != r && rows[i][c] % p != 0 {
                let f = rows[i][c] % p;
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x = (*x + p - mulm(f, *y, p)) % p;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Basis of {x : A·x = 0} for A given by rows with `ncols` columns.
pub fn kernel(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let r = rank(&mut m, p);
    let mut pivots = Vec::new();
    for row in m.iter().take(r) {
        pivots.push(row.iter().position(|&x| x != 0).unwrap());
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = (p - row[free] % p) % p;
        }
        out.push(v);
    }
    out
}

/// Basis of {c : Σ cᵢ·rowsᵢ = 0}.
pub fn left_kernel(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let t: Vec<Vec<u64>> = (0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    if t.is_empty() {
        return (0..rows.len())
            .map(|i| (0..rows.len()).map(|j| u64::from(i == j)).collect())
            .collect();
    }
    kernel(&t, rows.len(), p)
}

/// Dimension of the span of `vectors`.
pub fn span_dim(vectors: &[Vec<u64>], p: u64) -> usize {
    let mut m = vectors.to_vec();
    rank(&mut m, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_kernel() {
        // x + y = 0 over F_3
        let k = kernel(&[vec![1, 1]], 2, 3);
        assert_eq!(k, vec![vec![2, 1]]);
        assert_eq!(left_kernel(&[vec![1, 2], vec![2, 4]], 2, 5), vec![vec![3, 1]]);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(0u64..5, 4), 0..5)) {
            let k = kernel(&rows, 4, 5);
            prop_assert_eq!(span_dim(&rows, 5) + k.len(), 4);
            for v in &k {
                for r in &rows {
                    let s: u64 = r.iter().zip(v).map(|(a, b)| a * b).sum();
                    prop_assert_eq!(s % 5, 0);
                }
            }
        }
    }
}
