use std::path::Path;

use ndarray::ArrayView2;

use super::write_atomic;
use crate::error::{Error, Result};

/// Min-max scales `values` to 8 bits; row 0 of the matrix is image row 0.
/// A constant matrix maps to black.
pub fn encode_gray_png(values: ArrayView2<f64>) -> Result<Vec<u8>> {
    let (h, w) = values.dim();
    if h == 0 || w == 0 {
        return Err(Error::param("cannot export an empty matrix as PNG"));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    let pixels: Vec<u8> = values
        .iter()
        .map(|&v| {
            if span > 0.0 {
                ((v - lo) / span * 255.0).round() as u8
            } else {
                0
            }
        })
        .collect();
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, w as u32, h as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().map_err(|e| Error::Png(e.to_string()))?;
        writer.write_image_data(&pixels).map_err(|e| Error::Png(e.to_string()))?;
    }
    Ok(out)
}

pub fn write_png(values: ArrayView2<f64>, path: &Path) -> Result<()> {
    write_atomic(path, &encode_gray_png(values)?)
}

/// Matrix as headerless CSV, one line per row, shortest round-trip floats.
pub fn matrix_to_csv(values: ArrayView2<f64>) -> String {
    let mut out = String::new();
    for row in values.rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(values: ArrayView2<f64>, path: &Path) -> Result<()> {
    write_atomic(path, matrix_to_csv(values).as_bytes())
}

/// Parses a matrix written by [`write_matrix_csv`].
pub fn parse_matrix_csv(text: &str) -> Result<ndarray::Array2<f64>> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::param(format!("matrix CSV line {}: {e}", i + 1)))?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(Error::param(format!("matrix CSV line {} has {} columns", i + 1, row.len())));
        }
        data.extend(row);
        rows += 1;
    }
    ndarray::Array2::from_shape_vec((rows, cols.unwrap_or(0)), data)
        .map_err(|e| Error::param(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn png_header_and_scaling() {
        let m = array![[0.0, 1.0, 2.0], [3.0, 4.0, 6.0]];
        let bytes = encode_gray_png(m.view()).unwrap();
        let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
        let mut reader = decoder.read_info().unwrap();
        let mut buf = vec![0; reader.output_buffer_size().unwrap()];
        let info = reader.next_frame(&mut buf).unwrap();
        assert_eq!((info.width, info.height), (3, 2));
        assert_eq!(info.color_type, png::ColorType::Grayscale);
        assert_eq!(&buf[..6], &[0, 43, 85, 128, 170, 255]);
    }

    #[test]
    fn constant_matrix_is_black() {
        let bytes = encode_gray_png(ndarray::Array2::from_elem((2, 2), 7.0).view()).unwrap();
        assert!(!bytes.is_empty());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let m = array![[0.1, -2.5e-300], [1.0 / 3.0, 42.0]];
        assert_eq!(parse_matrix_csv(&matrix_to_csv(m.view())).unwrap(), m);
    }
}
