//! Deterministic writers for grids and tables: CSV with a `#` metadata
//! header, binary PGM (P5) grayscale, and binary PPM (P6) diverging
//! color maps.  All formatting goes through Rust's shortest-roundtrip
//! float display, so identical inputs produce identical bytes.

use std::io::Write;

use crate::density::Grid2D;
use crate::error::Result;

/// Write `# key: value` metadata lines followed by a `x1,x2,value` table
/// of the grid in row-major order (cell centers).
pub fn write_grid_csv<W: Write>(
    w: &mut W,
    grid: &Grid2D,
    metadata: &[(&str, String)],
) -> Result<()> {
    for (key, value) in metadata {
        writeln!(w, "# {key}: {value}")?;
    }
    writeln!(w, "x1,x2,value")?;
    let r = grid.r();
    for i in 0..r {
        for j in 0..r {
            let [x1, x2] = grid.center(i, j);
            writeln!(w, "{x1},{x2},{}", grid.get(i, j))?;
        }
    }
    Ok(())
}

/// Write a generic CSV table with `#` metadata lines, a header row, and
/// pre-formatted cells.
pub fn write_rows_csv<W: Write>(
    w: &mut W,
    metadata: &[(&str, String)],
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    for (key, value) in metadata {
        writeln!(w, "# {key}: {value}")?;
    }
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

fn byte(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Pixel layout shared by the image writers: x₁ increases rightward,
/// x₂ increases upward, so image row 0 is the j = r−1 band.
fn pixel_order(r: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..r).rev().flat_map(move |j| (0..r).map(move |i| (i, j)))
}

/// Binary PGM (P5): linear grayscale, vmin ↦ 0 and vmax ↦ 255.  A flat
/// grid (vmin == vmax) renders mid-gray.
pub fn write_grid_pgm<W: Write>(w: &mut W, grid: &Grid2D) -> Result<()> {
    let r = grid.r();
    let (vmin, vmax) = grid.min_max();
    let span = vmax - vmin;
    write!(w, "P5\n{r} {r}\n255\n")?;
    let mut bytes = Vec::with_capacity(r * r);
    for (i, j) in pixel_order(r) {
        let v = grid.get(i, j);
        bytes.push(if span > 0.0 {
            byte((v - vmin) / span * 255.0)
        } else {
            128
        });
    }
    w.write_all(&bytes)?;
    Ok(())
}

/// Binary PPM (P6): diverging map symmetric about zero — zero is white,
/// negative values shade toward blue, positive toward red, scaled by
/// max|v|.  An all-zero grid renders white.
pub fn write_grid_ppm<W: Write>(w: &mut W, grid: &Grid2D) -> Result<()> {
    let r = grid.r();
    let (vmin, vmax) = grid.min_max();
    let m = vmin.abs().max(vmax.abs());
    write!(w, "P6\n{r} {r}\n255\n")?;
    let mut bytes = Vec::with_capacity(3 * r * r);
    for (i, j) in pixel_order(r) {
        let t = if m > 0.0 { grid.get(i, j) / m } else { 0.0 };
        let fade = byte(255.0 * (1.0 - t.abs()));
        let (red, green, blue) = if t < 0.0 {
            (fade, fade, 255)
        } else {
            (255, fade, fade)
        };
        bytes.extend_from_slice(&[red, green, blue]);
    }
    w.write_all(&bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2(values: [f64; 4]) -> Grid2D {
        Grid2D::new(2, values.to_vec()).unwrap()
    }

    #[test]
    fn csv_golden_bytes() {
        let grid = grid2([1.0, -2.0, 0.5, 0.25]);
        let mut out = Vec::new();
        write_grid_csv(&mut out, &grid, &[("r", "2".to_string())]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "# r: 2\nx1,x2,value\n0.25,0.25,1\n0.25,0.75,-2\n0.75,0.25,0.5\n0.75,0.75,0.25\n"
        );
    }

    #[test]
    fn csv_repeat_is_byte_identical() {
        let grid = grid2([0.1, 0.2, -0.3, 1e-17]);
        let meta = [("alpha", "example1".to_string()), ("t", "1000.5".to_string())];
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_grid_csv(&mut a, &grid, &meta).unwrap();
        write_grid_csv(&mut b, &grid, &meta).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rows_csv_shape() {
        let mut out = Vec::new();
        write_rows_csv(
            &mut out,
            &[("kind", "landau".to_string())],
            &["x", "sum_re"],
            &[vec!["2".into(), "-0.5".into()], vec!["3".into(), "0.25".into()]],
        )
        .unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "# kind: landau\nx,sum_re\n2,-0.5\n3,0.25\n");
    }

    #[test]
    fn pgm_header_and_scaling() {
        // (i=1, j=0) holds the max; it lands in image row 1, column 1
        let grid = grid2([0.0, 1.0, 3.0, 2.0]);
        let mut out = Vec::new();
        write_grid_pgm(&mut out, &grid).unwrap();
        let header = b"P5\n2 2\n255\n";
        assert_eq!(&out[..header.len()], header);
        let px = &out[header.len()..];
        // rows top to bottom: j=1 then j=0; columns i=0,1
        assert_eq!(px, &[85, 170, 0, 255]);
    }

    #[test]
    fn pgm_flat_grid_is_mid_gray() {
        let grid = grid2([0.7; 4]);
        let mut out = Vec::new();
        write_grid_pgm(&mut out, &grid).unwrap();
        let px = &out[b"P5\n2 2\n255\n".len()..];
        assert_eq!(px, &[128; 4]);
    }

    #[test]
    fn ppm_diverging_endpoints() {
        let grid = grid2([-1.0, 0.0, 0.5, 1.0]);
        let mut out = Vec::new();
        write_grid_ppm(&mut out, &grid).unwrap();
        let header = b"P6\n2 2\n255\n";
        assert_eq!(&out[..header.len()], header);
        let px = &out[header.len()..];
        // row 0 (j=1): cells (0,1)=0.0 → white, (1,1)=1.0 → pure red
        assert_eq!(&px[0..3], &[255, 255, 255]);
        assert_eq!(&px[3..6], &[255, 0, 0]);
        // row 1 (j=0): cells (0,0)=-1.0 → pure blue, (1,0)=0.5 → half red
        assert_eq!(&px[6..9], &[0, 0, 255]);
        assert_eq!(&px[9..12], &[255, 128, 128]);
    }

    #[test]
    fn ppm_zero_grid_is_white() {
        let grid = grid2([0.0; 4]);
        let mut out = Vec::new();
        write_grid_ppm(&mut out, &grid).unwrap();
        let px = &out[b"P6\n2 2\n255\n".len()..];
        assert!(px.iter().all(|&b| b == 255));
    }

    #[test]
    fn image_sizes() {
        let grid = Grid2D::new(5, (0..25).map(|k| k as f64).collect()).unwrap();
        let mut pgm = Vec::new();
        write_grid_pgm(&mut pgm, &grid).unwrap();
        assert_eq!(pgm.len(), b"P5\n5 5\n255\n".len() + 25);
        let mut ppm = Vec::new();
        write_grid_ppm(&mut ppm, &grid).unwrap();
        assert_eq!(ppm.len(), b"P6\n5 5\n255\n".len() + 75);
    }
}
