//! Small dense helpers on `&[f64]` vectors of arbitrary dimension.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Returns `a / |a|`, or `None` for a (numerically) zero vector.
pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n <= 1e-300 || !n.is_finite() {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

pub fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal basis of the null space of the `rows × dim` matrix given by
/// `rows`, computed by Gaussian elimination with partial pivoting followed by
/// Gram–Schmidt. Pivots below `tol` (relative to the largest entry) count as
/// zero.
pub fn null_space(rows: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let scale_ref = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1e-300);
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        if row >= m.len() {
            break;
        }
        let (best, best_val) = (row..m.len())
            .map(|r| (r, m[r][col].abs()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_val <= tol * scale_ref {
            continue;
        }
        m.swap(row, best);
        let p = m[row][col];
        for v in m[row].iter_mut() {
            *v /= p;
        }
        for r in 0..m.len() {
            if r != row {
                let f = m[r][col];
                if f != 0.0 {
                    for c in 0..dim {
                        m[r][c] -= f * m[row][c];
                    }
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for &f in &free {
        let mut v = vec![0.0; dim];
        v[f] = 1.0;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][f];
        }
        basis.push(v);
    }
    gram_schmidt(basis, 1e-12)
}

/// Solves the square system `m · x = rhs` by Gaussian elimination with
/// partial pivoting. Returns `None` when a pivot falls below `tol` times the
/// largest entry.
pub fn solve(m: &[Vec<f64>], rhs: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let scale_ref = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= tol * scale_ref {
            return None;
        }
        a.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = a[r][n];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// Nonnegative least squares `min |Σ λ_j c_j − b|` over `λ ≥ 0`
/// (Lawson–Hanson active set).
pub fn nnls(cols: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let m = cols.len();
    let mut x = vec![0.0; m];
    let mut passive = vec![false; m];
    let tol = 1e-12 * (1.0 + norm(b)) * cols.iter().map(|c| norm(c)).fold(1.0, f64::max);
    let residual = |x: &[f64]| {
        let mut r = b.to_vec();
        for (c, &l) in cols.iter().zip(x) {
            for (ri, ci) in r.iter_mut().zip(c) {
                *ri -= l * ci;
            }
        }
        r
    };
    for _ in 0..3 * m + 10 {
        let r = residual(&x);
        let Some((j, w)) = (0..m)
            .filter(|&j| !passive[j])
            .map(|j| (j, dot(&cols[j], &r)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if w <= tol {
            break;
        }
        passive[j] = true;
        loop {
            let p: Vec<usize> = (0..m).filter(|&i| passive[i]).collect();
            let gram: Vec<Vec<f64>> =
                p.iter().map(|&i| p.iter().map(|&k| dot(&cols[i], &cols[k])).collect()).collect();
            let rhs: Vec<f64> = p.iter().map(|&i| dot(&cols[i], b)).collect();
            let Some(z) = solve(&gram, &rhs, 1e-13) else {
                passive[j] = false;
                return x;
            };
            if z.iter().all(|&v| v > 0.0) {
                for (&i, &v) in p.iter().zip(&z) {
                    x[i] = v;
                }
                break;
            }
            let mut alpha = 1.0f64;
            for (&i, &v) in p.iter().zip(&z) {
                if v <= 0.0 {
                    alpha = alpha.min(x[i] / (x[i] - v));
                }
            }
            for (&i, &v) in p.iter().zip(&z) {
                x[i] += alpha * (v - x[i]);
                if x[i] <= 1e-15 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if !passive.iter().any(|&q| q) {
                break;
            }
        }
    }
    x
}

/// Gram–Schmidt orthonormalisation; drops vectors that become numerically zero.
pub fn gram_schmidt(vectors: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in vectors {
        for _ in 0..2 {
            for q in &out {
                let c = dot(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        if let Some(u) = normalized(&v) {
            if norm(&v) > tol {
                out.push(u);
            }
        }
    }
    out
}

/// Affine rank of a point set together with an orthonormal basis of the
/// orthogonal complement of its affine hull (directions along which the set
/// has zero extent up to `tol`).
pub fn affine_complement(points: &[&[f64]], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    if points.is_empty() {
        return Vec::new();
    }
    let base = points[0];
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, base)).collect();
    let span = gram_schmidt(diffs, tol);
    let mut comp = Vec::new();
    for k in 0..dim {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        comp.push(e);
    }
    let all: Vec<Vec<f64>> = span.iter().cloned().chain(comp).collect();
    let q = gram_schmidt(all, 1e-9);
    q[span.len()..].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nnls_projects_onto_quadrant() {
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(nnls(&cols, &[2.0, -1.0]), vec![2.0, 0.0]);
        let cols = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let x = nnls(&cols, &[3.0, 1.0]);
        assert!((x[0] - 2.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn null_space_of_single_row_in_3d_is_plane() {
        let ns = null_space(&[vec![0.0, 0.0, 2.0]], 3, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(v[2].abs() < 1e-12);
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn null_space_of_full_rank_is_empty() {
        let rows = vec![vec![1.0, 2.0], vec![3.0, -1.0]];
        assert!(null_space(&rows, 2, 1e-12).is_empty());
    }

    #[test]
    fn solve_small_system() {
        let m = vec![vec![0.0, 2.0], vec![1.0, 1.0]];
        let x = solve(&m, &[4.0, 3.0], 1e-14).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        assert!(solve(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0], 1e-12).is_none());
    }

    #[test]
    fn affine_complement_of_coplanar_points() {
        let pts = [[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [2.0, 3.0, 1.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| &p[..]).collect();
        let c = affine_complement(&refs, 3, 1e-12);
        assert_eq!(c.len(), 1);
        assert!((c[0][2].abs() - 1.0).abs() < 1e-12);
    }
}
