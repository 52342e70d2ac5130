//! Kullback-Leibler and Jensen-Shannon divergences in bits.

use thiserror::Error;

use super::TopicDistribution;

#[derive(Debug, Error, PartialEq)]
pub enum DivergenceError {
    #[error("distribution lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("q has zero mass at index {0} where p is positive")]
    SupportViolation(usize),
}

fn check_len(p: &[f64], q: &[f64]) -> Result<(), DivergenceError> {
    if p.len() != q.len() {
        return Err(DivergenceError::LengthMismatch(p.len(), q.len()));
    }
    Ok(())
}

/// `Σ p_k log2(p_k / q_k)` with `0 · log(0 / ·) = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64, DivergenceError> {
    check_len(p, q)?;
    let mut sum = 0.0;
    for (i, (&pk, &qk)) in p.iter().zip(q).enumerate() {
        if pk == 0.0 {
            continue;
        }
        if qk <= 0.0 {
            return Err(DivergenceError::SupportViolation(i));
        }
        sum += pk * (pk / qk).log2();
    }
    Ok(sum)
}

/// Jensen-Shannon divergence `½ KL(c ‖ v) + ½ KL(f ‖ v)` with `v = ½(f + c)`,
/// clamped to [0, 1].
pub fn js_divergence(f: &[f64], c: &[f64]) -> Result<f64, DivergenceError> {
    check_len(f, c)?;
    let v: Vec<f64> = f.iter().zip(c).map(|(a, b)| 0.5 * (a + b)).collect();
    // The mixture covers both supports, so neither call can fail.
    let js = 0.5 * kl_divergence(c, &v)? + 0.5 * kl_divergence(f, &v)?;
    Ok(js.clamp(0.0, 1.0))
}

/// Square root of [`js_divergence`], the metric form.
pub fn js_distance(f: &[f64], c: &[f64]) -> Result<f64, DivergenceError> {
    js_divergence(f, c).map(f64::sqrt)
}

/// Topic novelty between a work's distribution and its window centroid.
pub fn topic_novelty_score(f: &TopicDistribution, c: &TopicDistribution) -> Result<f64, DivergenceError> {
    js_divergence(f.as_slice(), c.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kl_examples() {
        assert_eq!(kl_divergence(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        let v = kl_divergence(&[0.5, 0.5], &[0.25, 0.75]).unwrap();
        let expected = 0.5 * 2f64.log2() + 0.5 * (2.0f64 / 3.0).log2();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.2075).abs() < 1e-4);
        assert_eq!(kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(
            kl_divergence(&[0.5, 0.5], &[1.0, 0.0]),
            Err(DivergenceError::SupportViolation(1))
        );
        assert!(kl_divergence(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn js_examples() {
        assert_eq!(js_divergence(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert_eq!(js_divergence(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        let v = js_divergence(&[0.5, 0.5], &[0.25, 0.75]).unwrap();
        assert!((v - 0.0488).abs() < 1e-4, "{v}");
        assert!((js_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    fn simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, n).prop_filter_map("nonzero", |v| {
            let s: f64 = v.iter().sum();
            (s > 0.0).then(|| v.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn js_symmetric_and_bounded((p, q) in (2usize..8).prop_flat_map(|n| (simplex(n), simplex(n)))) {
            let a = js_divergence(&p, &q).unwrap();
            let b = js_divergence(&q, &p).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(js_divergence(&p, &p).unwrap() == 0.0);
        }
    }
}
