use num_complex::Complex;

use super::RankDecision;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::Real;

/// `||P_{T_{d-1}} t_d|| / ||t_d||` for `d = 1 ..= cols`: the fraction of column
/// `d` lying in the span of the columns before it. Zero columns get `None`.
pub fn projection_ratios<T: Real>(t: &ComplexMatrix<T>) -> Vec<Option<T>> {
    let mut basis: Vec<ComplexVector<T>> = Vec::new();
    let mut ratios = Vec::with_capacity(t.cols());
    for j in 0..t.cols() {
        let col = t.column(j);
        let norm = col.norm();
        if !(norm > T::zero()) {
            ratios.push(None);
            continue;
        }
        let mut proj = ComplexVector::zeros(col.len());
        for q in &basis {
            proj.axpy(q.dot(&col), q);
        }
        ratios.push(Some((proj.norm() / norm).min(T::one())));
        // modified Gram-Schmidt with one re-orthogonalization pass
        let mut v = col;
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&v);
                v.axpy(-c, q);
            }
        }
        let vn = v.norm();
        if vn > T::lit(1e-12) * norm {
            basis.push(v.scale(Complex::new(T::one() / vn, T::zero())));
        }
    }
    ratios
}

/// Largest `d` in `d_min ..= d_max` whose column is more than `δ` inside the
/// span of the earlier columns, else `d_min`. Scores are the ratios, with zero
/// columns scored 0.
pub fn select_rank_stopping<T: Real>(t: &ComplexMatrix<T>, delta: T, d_min: usize, d_max: usize) -> RankDecision<T> {
    let d_max = d_max.min(t.cols());
    let ratios = projection_ratios(&t.leading_columns(d_max));
    let mut d_opt = d_min;
    let mut scores = Vec::with_capacity(d_max + 1 - d_min);
    for d in d_min..=d_max {
        match ratios[d - 1] {
            Some(r) => {
                if r > delta {
                    d_opt = d;
                }
                scores.push(r);
            }
            None => {
                log::warn!("column {d} of the projection is zero; skipped by the stopping rule");
                scores.push(T::zero());
            }
        }
    }
    RankDecision { d_opt, d_min, scores }
}
