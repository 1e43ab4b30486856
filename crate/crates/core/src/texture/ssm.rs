use ndarray::Array2;

use crate::dsp::{frame_count, frames};
use crate::error::{Error, Result};
use crate::SignalBuffer;

/// Cosine similarity between every pair of zero-meaned frames.
#[derive(Debug, Clone)]
pub struct SelfSimilarityMatrix {
    pub values: Array2<f64>,
    pub frame_len: usize,
    pub hop: usize,
    /// Frames with zero variance; their rows and columns are 0 apart from
    /// the unit diagonal.
    pub silent_frames: Vec<usize>,
}

impl SelfSimilarityMatrix {
    pub fn size(&self) -> usize {
        self.values.nrows()
    }

    /// Mean of each superdiagonal: entry k averages S[i, i + k]. Periodic
    /// input shows up as peaks at multiples of the period in frames.
    pub fn lag_profile(&self) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|k| (0..n - k).map(|i| self.values[[i, i + k]]).sum::<f64>() / (n - k) as f64)
            .collect()
    }
}

pub fn self_similarity(signal: &SignalBuffer, frame_len: usize, hop: usize) -> Result<SelfSimilarityMatrix> {
    if frame_len == 0 || hop == 0 {
        return Err(Error::param("frame length and hop must be positive"));
    }
    let n = frame_count(signal.len(), frame_len, hop);
    if n == 0 {
        return Err(Error::SignalTooShort {
            needed: frame_len,
            got: signal.len(),
        });
    }
    let mut unit = Array2::zeros((n, frame_len));
    let mut silent_frames = Vec::new();
    for (i, frame) in frames(signal.samples(), frame_len, hop).enumerate() {
        let mean = frame.iter().sum::<f64>() / frame_len as f64;
        let norm = frame.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            silent_frames.push(i);
            continue;
        }
        for (dst, v) in unit.row_mut(i).iter_mut().zip(frame) {
            *dst = (v - mean) / norm;
        }
    }
    let mut values = unit.dot(&unit.t());
    for i in 0..n {
        values[[i, i]] = 1.0;
        for j in i + 1..n {
            let v = values[[i, j]].clamp(-1.0, 1.0);
            values[[i, j]] = v;
            values[[j, i]] = v;
        }
    }
    if !silent_frames.is_empty() {
        log::debug!("{} silent frames in self-similarity input", silent_frames.len());
    }
    Ok(SelfSimilarityMatrix {
        values,
        frame_len,
        hop,
        silent_frames,
    })
}
