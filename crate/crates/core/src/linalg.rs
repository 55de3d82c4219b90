//! Small dense linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Residual norm of the least-squares projection of `v` onto the span of
/// `generators`, divided by `max(1, ‖G‖_max, ‖v‖_max)`.
pub(crate) fn span_residual(generators: &[Vec<f64>], v: &[f64]) -> f64 {
    let dim = v.len();
    let g = DMatrix::from_fn(dim, generators.len(), |r, c| generators[c][r]);
    let target = DVector::from_column_slice(v);
    let svd = g.clone().svd(true, true);
    let eps = 1e-14 * svd.singular_values.max().max(1.0);
    let coeffs = svd.solve(&target, eps).expect("U and V were computed");
    let residual = (&g * coeffs - &target).norm();
    residual / g.amax().max(target.amax()).max(1.0)
}

/// Numerical rank of the matrix whose columns are `vectors`.
pub(crate) fn rank(vectors: &[Vec<f64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let dim = vectors[0].len();
    let m = DMatrix::from_fn(dim, vectors.len(), |r, c| vectors[c][r]);
    let scale = m.amax().max(f64::MIN_POSITIVE);
    m.rank(1e-10 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_membership() {
        let gens = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]];
        assert!(span_residual(&gens, &[2.0, 3.0, 3.0]) < 1e-14);
        assert!((span_residual(&gens, &[0.0, 1.0, -1.0]) - 2f64.sqrt()).abs() < 1e-12);
        assert!((span_residual(&gens, &[0.0, 4.0, -4.0]) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(rank(&gens), 2);
    }
}
