//! Points files: one point pair per line, complex coordinates as "re,im"
//! tokens separated by whitespace, first the left point's coordinates and
//! then the right point's. Lines starting with '#' are comments.

use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

use bergkern::ComplexPoint;

pub fn parse_points_file(path: &Path, arity: usize) -> Result<Vec<(ComplexPoint, ComplexPoint)>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading points file {}", path.display()))?;
    parse_points(&text, arity).with_context(|| format!("in points file {}", path.display()))
}

pub fn parse_points(text: &str, arity: usize) -> Result<Vec<(ComplexPoint, ComplexPoint)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 * arity {
            bail!(
                "line {}: expected {} coordinates (2 points x arity {}), found {}",
                lineno + 1,
                2 * arity,
                arity,
                tokens.len()
            );
        }
        let mut coords = Vec::with_capacity(2 * arity);
        for tok in &tokens {
            let (re, im) = tok.split_once(',').ok_or_else(|| {
                anyhow::anyhow!("line {}: coordinate '{tok}' is not re,im", lineno + 1)
            })?;
            let re: f64 = re
                .trim()
                .parse()
                .with_context(|| format!("line {}: bad real part '{re}'", lineno + 1))?;
            let im: f64 = im
                .trim()
                .parse()
                .with_context(|| format!("line {}: bad imaginary part '{im}'", lineno + 1))?;
            coords.push(Complex64::new(re, im));
        }
        let x = ComplexPoint::new(coords[..arity].to_vec())?;
        let y = ComplexPoint::new(coords[arity..].to_vec())?;
        pairs.push((x, y));
    }
    Ok(pairs)
}
