use crate::error::{Error, Result};
use crate::SignalBuffer;

/// Splits into consecutive non-overlapping segments of `seg_len_s` seconds.
/// A trailing remainder shorter than one segment is dropped.
pub fn segment(signal: &SignalBuffer, seg_len_s: f64) -> Result<Vec<SignalBuffer>> {
    if !(seg_len_s > 0.0 && seg_len_s.is_finite()) {
        return Err(Error::param(format!("segment length must be > 0, got {seg_len_s}")));
    }
    let seg = (seg_len_s * signal.sample_rate_hz() as f64).round() as usize;
    if seg == 0 {
        return Err(Error::param(format!(
            "segment length {seg_len_s} s is shorter than one sample"
        )));
    }
    signal
        .samples()
        .chunks_exact(seg)
        .map(|c| SignalBuffer::new(c.to_vec(), signal.sample_rate_hz()))
        .collect()
}
