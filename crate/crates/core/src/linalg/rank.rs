use super::matrix::norm2;
use super::DenseMatrix;

/// Numerical column rank by greedy column pivoting (modified Gram–Schmidt with
/// one reorthogonalization pass).
///
/// A pivot counts while its remaining norm exceeds `rel_tol` times the
/// largest column norm of the input.
pub fn column_pivoted_rank(a: &DenseMatrix, rel_tol: f64) -> usize {
    let mut cols: Vec<Vec<f64>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let largest = cols.iter().map(|c| norm2(c)).fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    let threshold = rel_tol * largest;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while !cols.is_empty() && basis.len() < a.rows() {
        let (idx, best) = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, norm2(c)))
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        if best <= threshold {
            break;
        }
        let mut q = cols.swap_remove(idx);
        // reorthogonalize the pivot against the basis once more
        for b in &basis {
            let d: f64 = q.iter().zip(b).map(|(x, y)| x * y).sum();
            q.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let qn = norm2(&q);
        if qn <= threshold {
            break;
        }
        q.iter_mut().for_each(|x| *x /= qn);
        for c in cols.iter_mut() {
            for _ in 0..2 {
                let d: f64 = c.iter().zip(&q).map(|(x, y)| x * y).sum();
                c.iter_mut().zip(&q).for_each(|(x, y)| *x -= d * y);
            }
        }
        basis.push(q);
    }
    basis.len()
}
