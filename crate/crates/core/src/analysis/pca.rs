//! Covariance PCA of snapshot trajectories.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::trace::EpisodeTrace;
use crate::error::{Error, Result};

/// Principal components of a centered `steps × dims` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaResult {
    /// `q` orthonormal component vectors of length `dims`.
    pub components: Vec<Vec<f64>>,
    /// Variance (population convention) captured by each component.
    pub explained_variance: Vec<f64>,
    /// `explained_variance / total_variance`, descending.
    pub variance_ratio: Vec<f64>,
    /// `steps × q` projections of the centered data.
    pub scores: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub total_variance: f64,
    /// Set when the data has (numerically) no variance.
    pub degenerate: bool,
}

impl PcaResult {
    pub fn steps(&self) -> usize {
        self.scores.len()
    }

    pub fn q(&self) -> usize {
        self.components.len()
    }

    /// Scores of one component over time.
    pub fn component_scores(&self, component: usize) -> Vec<f64> {
        self.scores.iter().map(|row| row[component]).collect()
    }
}

pub fn pca(trace: &EpisodeTrace, q: usize) -> Result<PcaResult> {
    pca_matrix(&trace.snapshot_matrix(), q)
}

/// PCA of `data` (rows are time steps) after removing each column's mean.
///
/// Uses the `dims × dims` covariance when it is the smaller eigenproblem and
/// the `steps × steps` Gram matrix otherwise. Each component is signed so its
/// largest-magnitude entry is positive.
pub fn pca_matrix(data: &DMatrix<f64>, q: usize) -> Result<PcaResult> {
    let (n, d) = data.shape();
    if n < 2 {
        return Err(Error::Input(format!("PCA needs at least 2 steps, got {n}")));
    }
    if q == 0 || q > n.min(d) {
        return Err(Error::Input(format!(
            "requested {q} components but at most min(steps, dims) = {} are available",
            n.min(d)
        )));
    }
    let mean: Vec<f64> = (0..d).map(|k| data.column(k).sum() / n as f64).collect();
    let mut x = data.clone();
    for (k, m) in mean.iter().enumerate() {
        x.column_mut(k).add_scalar_mut(-m);
    }
    let nf = n as f64;
    let total_variance = x.norm_squared() / nf;
    let scale = data.amax().max(f64::MIN_POSITIVE);
    let degenerate = !(total_variance > (1e-10 * scale).powi(2));

    let mut pairs: Vec<(f64, DVector<f64>)> = if d <= n {
        let cov = x.transpose() * &x / nf;
        let eig = SymmetricEigen::new(cov);
        (0..d).map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned())).collect()
    } else {
        let gram = &x * x.transpose() / nf;
        let eig = SymmetricEigen::new(gram);
        let top = eig.eigenvalues.max().max(0.0);
        // Directions with negligible variance are completed below.
        let mut keep: Vec<usize> =
            (0..n).filter(|&i| eig.eigenvalues[i] > 1e-12 * top && eig.eigenvalues[i] > 0.0).collect();
        keep.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        keep.truncate(q);
        keep.into_iter()
            .map(|i| {
                let lambda = eig.eigenvalues[i];
                (lambda, x.tr_mul(&eig.eigenvectors.column(i)) / (nf * lambda).sqrt())
            })
            .collect()
    };
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs.truncate(q);

    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(q);
    let mut variances = Vec::with_capacity(q);
    for (lambda, v) in pairs {
        if let Some(u) = orthonormalize(&basis, v) {
            basis.push(u);
            variances.push(if degenerate { 0.0 } else { lambda.max(0.0) });
        }
    }
    let mut e = 0;
    while basis.len() < q && e < d {
        if let Some(u) = orthonormalize(&basis, DVector::from_fn(d, |k, _| if k == e { 1.0 } else { 0.0 })) {
            basis.push(u);
            variances.push(0.0);
        }
        e += 1;
    }
    for u in &mut basis {
        let (idx, _) = u.iter().enumerate().fold((0, 0.0), |best, (i, v)| {
            if v.abs() > best.1 {
                (i, v.abs())
            } else {
                best
            }
        });
        if u[idx] < 0.0 {
            u.neg_mut();
        }
    }

    let variance_ratio = variances
        .iter()
        .map(|v| if degenerate { 0.0 } else { v / total_variance })
        .collect();
    let comp = DMatrix::from_columns(&basis);
    let s = &x * &comp;
    let scores = (0..n).map(|t| s.row(t).iter().copied().collect()).collect();
    Ok(PcaResult {
        components: basis.iter().map(|u| u.iter().copied().collect()).collect(),
        explained_variance: variances,
        variance_ratio,
        scores,
        mean,
        total_variance: if degenerate { 0.0 } else { total_variance },
        degenerate,
    })
}

/// Two passes of Gram-Schmidt against `basis`; `None` if `v` lies in its span.
fn orthonormalize(basis: &[DVector<f64>], mut v: DVector<f64>) -> Option<DVector<f64>> {
    let start = v.norm();
    if start == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let p = b.dot(&v);
            v.axpy(-p, b, 1.0);
        }
    }
    let norm = v.norm();
    (norm > 1e-8 * start).then(|| v / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_trace_is_degenerate() {
        let data = DMatrix::from_element(30, 4, 0.1);
        let p = pca_matrix(&data, 3).unwrap();
        assert!(p.degenerate);
        assert!(p.variance_ratio.iter().all(|r| *r == 0.0));
        for (i, a) in p.components.iter().enumerate() {
            for (j, b) in p.components.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bad_q() {
        let data = DMatrix::from_fn(10, 3, |i, j| (i * j) as f64);
        assert!(pca_matrix(&data, 4).is_err());
        assert!(pca_matrix(&data, 0).is_err());
        assert!(pca_matrix(&DMatrix::zeros(1, 3), 1).is_err());
    }

    #[test]
    fn circle_in_high_dims() {
        // Gram route: more dims than steps.
        let n = 60;
        let d = 200;
        let data = DMatrix::from_fn(n, d, |t, k| {
            let th = t as f64 * 0.3;
            match k {
                7 => 2.0 * th.sin(),
                150 => 2.0 * th.cos(),
                _ => 0.5,
            }
        });
        let p = pca_matrix(&data, 3).unwrap();
        assert!(p.variance_ratio[0] + p.variance_ratio[1] > 0.999999);
        assert!(p.variance_ratio[2] < 1e-9);
        let sum: f64 = p.variance_ratio.iter().sum();
        assert!(sum <= 1.0 + 1e-9);
    }
}
