//! Grayscale rendering of measures on grids as binary PGM (P5), plus the
//! measure CSV format.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::measure::StarMeasure;
use crate::space::Space;

/// Renders a measure on a 2D grid: width is the axis-0 node count, height
/// the axis-1 node count, maxval 255, one byte per pixel with value
/// `round-half-away-from-zero(255 * u)`. Row 0 is the top of the box
/// (largest axis-1 coordinate).
pub fn render_pgm(measure: &StarMeasure, path: &Path) -> Result<()> {
    let grid = measure
        .space()
        .as_grid()
        .ok_or(Error::NotAGrid)?;
    if grid.dim() != 2 {
        return Err(Error::NotTwoDimensional);
    }
    let width = grid.resolution()[0];
    let height = grid.resolution()[1];
    let mut bytes = Vec::with_capacity(width * height);
    for row in 0..height {
        let iy = height - 1 - row;
        for ix in 0..width {
            bytes.push(level_byte(measure.value(ix + width * iy)));
        }
    }
    write_pgm(path, width, height, &bytes)
}

/// Renders a 1D measure as a one-row strip, left to right along the axis.
pub fn render_pgm_strip(measure: &StarMeasure, path: &Path) -> Result<()> {
    let grid = measure
        .space()
        .as_grid()
        .ok_or(Error::NotAGrid)?;
    if grid.dim() != 1 {
        return Err(Error::NotTwoDimensional);
    }
    let width = grid.resolution()[0];
    let bytes: Vec<u8> = (0..width).map(|x| level_byte(measure.value(x))).collect();
    write_pgm(path, width, 1, &bytes)
}

#[inline]
fn level_byte(u: f64) -> u8 {
    // f64::round is round-half-away-from-zero, which is the pixel rule:
    // 0.5 maps to 127.5 and then to 128.
    (255.0 * u).round() as u8
}

fn write_pgm(path: &Path, width: usize, height: usize, bytes: &[u8]) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(file, "P5\n{width} {height}\n255\n")?;
    file.write_all(bytes)?;
    file.flush()?;
    Ok(())
}

/// Writes `point_index,value` rows with a header. Values use the shortest
/// representation that round-trips, so re-reading reproduces the exact
/// bits.
pub fn write_measure_csv(measure: &StarMeasure, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(measure.values().len() * 8 + 32);
    out.push_str("point_index,value\n");
    for (i, v) in measure.values().iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a measure CSV back onto the given space.
pub fn read_measure_csv(space: std::sync::Arc<Space>, path: &Path) -> Result<StarMeasure> {
    let text = std::fs::read_to_string(path)?;
    let mut values = vec![0.0f64; space.len()];
    let mut seen = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line.trim() != "point_index,value" {
                return Err(Error::Config(vec![format!(
                    "{}: expected header 'point_index,value', got '{line}'",
                    path.display()
                )]));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, ',');
        let index: usize = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Config(vec![format!("bad point index on line {lineno}")]))?;
        let value: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Config(vec![format!("bad value on line {lineno}")]))?;
        if index >= values.len() {
            return Err(Error::PointOutOfRange {
                index,
                len: values.len(),
            });
        }
        values[index] = value;
        seen += 1;
    }
    if seen != space.len() {
        return Err(Error::Config(vec![format!(
            "measure csv has {seen} rows for a space of {} points",
            space.len()
        )]));
    }
    StarMeasure::new(space, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{GridMetric, GridSpace};
    use std::sync::Arc;

    fn grid2d(nx: usize, ny: usize) -> Arc<Space> {
        Arc::new(Space::Grid(
            GridSpace::new(
                vec![[0.0, 1.0], [0.0, 1.0]],
                vec![nx, ny],
                GridMetric::Chebyshev,
            )
            .unwrap(),
        ))
    }

    #[test]
    fn byte_levels() {
        assert_eq!(level_byte(1.0), 255);
        assert_eq!(level_byte(0.0), 0);
        // 127.5 rounds away from zero.
        assert_eq!(level_byte(0.5), 128);
    }

    #[test]
    fn full_measure_renders_all_white() {
        let s = grid2d(4, 3);
        let m = StarMeasure::from_support(s, &(0..12).collect::<Vec<_>>()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("full.pgm");
        render_pgm(&m, &path).unwrap();
        let data = std::fs::read(&path).unwrap();
        let header = b"P5\n4 3\n255\n";
        assert_eq!(&data[..header.len()], header);
        assert!(data[header.len()..].iter().all(|&b| b == 255));
        assert_eq!(data.len() - header.len(), 12);
    }

    #[test]
    fn dirac_renders_one_pixel_top_row() {
        let s = grid2d(3, 3);
        // Node (ix=1, iy=2) sits at the top row of the image.
        let m = StarMeasure::dirac(s, 1 + 3 * 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dirac.pgm");
        render_pgm(&m, &path).unwrap();
        let data = std::fs::read(&path).unwrap();
        let pixels = &data[b"P5\n3 3\n255\n".len()..];
        assert_eq!(pixels.iter().filter(|&&b| b == 255).count(), 1);
        assert_eq!(pixels[1], 255, "expected the lit pixel in row 0, column 1");
    }

    #[test]
    fn rejects_non_2d() {
        let s = Arc::new(Space::Grid(
            GridSpace::new(vec![[0.0, 1.0]], vec![5], GridMetric::Chebyshev).unwrap(),
        ));
        let m = StarMeasure::dirac(s, 0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        assert!(render_pgm(&m, &dir.path().join("x.pgm")).is_err());
        assert!(render_pgm_strip(&m, &dir.path().join("strip.pgm")).is_ok());
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let s = grid2d(3, 2);
        let m = StarMeasure::new(
            s.clone(),
            vec![1.0, 0.1234567890123456, 0.0, 1e-300, 0.75, 0.3333333333333333],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        write_measure_csv(&m, &path).unwrap();
        let back = read_measure_csv(s, &path).unwrap();
        assert_eq!(m.values(), back.values());
    }
}
