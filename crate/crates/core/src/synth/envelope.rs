/// Envelope segment length in samples, at least one.
pub fn segment_len_samples(segment_s: f64, sample_rate_hz: u32) -> usize {
    ((segment_s * sample_rate_hz as f64).round() as usize).max(1)
}

/// Levels needed to cover `n` samples with segments of `seg_len`.
pub(crate) fn n_levels(n: usize, seg_len: usize) -> usize {
    n.div_ceil(seg_len) + 1
}

/// Piecewise envelope through `levels`, one level per segment boundary,
/// joined by raised-cosine cross-fades.
pub fn cosine_crossfade(levels: &[f64], seg_len: usize, n: usize) -> Vec<f64> {
    assert!(seg_len > 0 && levels.len() >= n_levels(n, seg_len));
    let ramp: Vec<f64> = (0..seg_len)
        .map(|i| 0.5 - 0.5 * (std::f64::consts::PI * i as f64 / seg_len as f64).cos())
        .collect();
    (0..n)
        .map(|i| {
            let (j, r) = (i / seg_len, i % seg_len);
            let (a, b) = (levels[j], levels[j + 1]);
            a + (b - a) * ramp[r]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes_through_levels() {
        let levels = [1.0, 3.0, 2.0, 0.5];
        let env = cosine_crossfade(&levels, 4, 10);
        assert_eq!(env.len(), 10);
        assert_eq!(env[0], 1.0);
        assert_eq!(env[4], 3.0);
        assert_eq!(env[8], 2.0);
        assert!((env[2] - 2.0).abs() < 1e-12);
        assert!(env[4..8].windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn segment_length_is_positive() {
        assert_eq!(segment_len_samples(0.001, 32_000), 32);
        assert_eq!(segment_len_samples(1e-9, 32_000), 1);
        assert_eq!(n_levels(160_000, 32), 5001);
        assert_eq!(n_levels(33, 32), 3);
    }
}
