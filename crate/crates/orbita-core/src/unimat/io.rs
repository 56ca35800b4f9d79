//! Text file format for windowed matrices.
//!
//! ```text
//! # optional comments
//! window 3 1        (or: size 4)
//! triangle upper    (upper | lower | functional | dense)
//! 2 3 x[2,3]
//! 4 5 -1/2
//! ```
//!
//! Values are rationals `p/q` or expressions in the polynomial grammar.
//! Unlisted in-window entries default to 0 off the diagonal and to 1 on the
//! diagonal of unipotent matrices. Rendering is canonical, so a written file
//! re-parses to an equal object byte for byte.

use std::fmt::Write as _;

use super::{DenseMatrix, Functional, MatError, Triangle, UnipotentMatrix, Window};
use crate::symbolic::{parse_ratfun, RatFun};

/// A parsed matrix file.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFile {
    Unipotent(UnipotentMatrix<RatFun>),
    Functional(Functional<RatFun>),
    Dense { window: Window, matrix: DenseMatrix<RatFun> },
}

impl MatrixFile {
    pub fn window(&self) -> Window {
        match self {
            MatrixFile::Unipotent(m) => m.window(),
            MatrixFile::Functional(f) => f.window(),
            MatrixFile::Dense { window, .. } => *window,
        }
    }

    pub fn as_unipotent(&self) -> Result<&UnipotentMatrix<RatFun>, MatError> {
        match self {
            MatrixFile::Unipotent(m) => Ok(m),
            _ => Err(MatError::BadFile("expected a unitriangular matrix file".into())),
        }
    }

    pub fn as_functional(&self) -> Result<&Functional<RatFun>, MatError> {
        match self {
            MatrixFile::Functional(f) => Ok(f),
            _ => Err(MatError::BadFile("expected a functional matrix file".into())),
        }
    }

    /// Any variant as a dense window-square matrix.
    pub fn to_dense(&self) -> DenseMatrix<RatFun> {
        match self {
            MatrixFile::Unipotent(m) => m.to_dense(),
            MatrixFile::Functional(f) => f.to_dense(),
            MatrixFile::Dense { matrix, .. } => matrix.clone(),
        }
    }
}

/// Parse the matrix text format.
pub fn read_matrix_str(src: &str) -> Result<MatrixFile, MatError> {
    let mut lines = src
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| MatError::BadFile("missing window/size header".into()))?;
    let window = parse_window_header(header)?;
    let shape = lines
        .next()
        .ok_or_else(|| MatError::BadFile("missing triangle header".into()))?;
    let shape = shape
        .strip_prefix("triangle")
        .ok_or_else(|| MatError::BadFile(format!("expected 'triangle ...', got {shape:?}")))?
        .trim();

    let mut entries: Vec<(i32, i32, RatFun)> = Vec::new();
    for line in lines {
        let mut it = line.splitn(3, char::is_whitespace);
        let k = parse_i32(it.next(), line)?;
        let r = parse_i32(it.next(), line)?;
        let raw = it
            .next()
            .ok_or_else(|| MatError::BadFile(format!("missing value in line {line:?}")))?
            .trim();
        let v = parse_ratfun(raw).map_err(|e| MatError::BadFile(format!("{line:?}: {e}")))?;
        entries.push((k, r, v));
    }

    match shape {
        "upper" | "lower" => {
            let tri = if shape == "upper" { Triangle::Upper } else { Triangle::Lower };
            let mut m = UnipotentMatrix::identity(window, tri);
            for (k, r, v) in entries {
                m.set(k, r, v)?;
            }
            Ok(MatrixFile::Unipotent(m))
        }
        "functional" => {
            let mut f = Functional::zero(window);
            for (k, r, v) in entries {
                f.set(k, r, v)?;
            }
            Ok(MatrixFile::Functional(f))
        }
        "dense" => {
            let idx: Vec<i32> = window.indices().collect();
            let mut m = DenseMatrix::zero(idx.clone(), idx);
            for (k, r, v) in entries {
                if !window.contains(k) || !window.contains(r) {
                    return Err(MatError::IndexOutOfWindow(k, r));
                }
                m.set(k, r, v)?;
            }
            Ok(MatrixFile::Dense { window, matrix: m })
        }
        other => Err(MatError::BadFile(format!("unknown triangle kind {other:?}"))),
    }
}

/// Render the matrix text format, bit-exact for round-tripping.
pub fn write_matrix(file: &MatrixFile) -> String {
    let mut out = String::new();
    let w = file.window();
    if w.lo == 1 {
        let _ = writeln!(out, "size {}", w.hi);
    } else if (w.lo + w.hi) % 2 != 0 {
        let m = (w.lo + w.hi - 1) / 2;
        let _ = writeln!(out, "window {} {}", m, m - w.lo);
    } else {
        let _ = writeln!(out, "span {} {}", w.lo, w.hi);
    }
    match file {
        MatrixFile::Unipotent(m) => {
            let _ = writeln!(
                out,
                "triangle {}",
                match m.triangle() {
                    Triangle::Upper => "upper",
                    Triangle::Lower => "lower",
                }
            );
            for (&(k, r), v) in m.entries() {
                let _ = writeln!(out, "{} {} {}", k, r, v);
            }
        }
        MatrixFile::Functional(f) => {
            let _ = writeln!(out, "triangle functional");
            for (&(k, r), v) in f.entries() {
                let _ = writeln!(out, "{} {} {}", k, r, v);
            }
        }
        MatrixFile::Dense { window, matrix } => {
            let _ = writeln!(out, "triangle dense");
            for k in window.indices() {
                for r in window.indices() {
                    let v = matrix.get(k, r);
                    if !num_traits::Zero::is_zero(v) {
                        let _ = writeln!(out, "{} {} {}", k, r, v);
                    }
                }
            }
        }
    }
    out
}

fn parse_window_header(line: &str) -> Result<Window, MatError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    match parts.as_slice() {
        ["size", n] => {
            let n: i32 = n
                .parse()
                .map_err(|_| MatError::BadFile(format!("bad size {n:?}")))?;
            if n < 1 {
                return Err(MatError::BadFile("size must be >= 1".into()));
            }
            Ok(Window::size(n))
        }
        ["window", m, n] => {
            let m: i32 = m
                .parse()
                .map_err(|_| MatError::BadFile(format!("bad window center {m:?}")))?;
            let n: i32 = n
                .parse()
                .map_err(|_| MatError::BadFile(format!("bad window radius {n:?}")))?;
            if n < 1 {
                return Err(MatError::BadFile("window radius must be >= 1".into()));
            }
            Ok(Window::centered(m, n))
        }
        ["span", lo, hi] => {
            let lo: i32 = lo
                .parse()
                .map_err(|_| MatError::BadFile(format!("bad span bound {lo:?}")))?;
            let hi: i32 = hi
                .parse()
                .map_err(|_| MatError::BadFile(format!("bad span bound {hi:?}")))?;
            if lo > hi {
                return Err(MatError::BadFile("span needs lo <= hi".into()));
            }
            Ok(Window::new(lo, hi))
        }
        _ => Err(MatError::BadFile(format!(
            "expected 'window <m> <n>' or 'size <n>', got {line:?}"
        ))),
    }
}

fn parse_i32(tok: Option<&str>, line: &str) -> Result<i32, MatError> {
    tok.ok_or_else(|| MatError::BadFile(format!("short line {line:?}")))?
        .parse()
        .map_err(|_| MatError::BadFile(format!("bad index in {line:?}")))
}

/// Convert a symbolic file to exact rational entries when possible.
pub fn unipotent_to_rational(
    m: &UnipotentMatrix<RatFun>,
) -> Result<UnipotentMatrix<crate::symbolic::Rational>, MatError> {
    let mut out = UnipotentMatrix::identity(m.window(), m.triangle());
    for (&(k, r), v) in m.entries() {
        let q = crate::scalar::Scalar::to_rational(v).ok_or_else(|| {
            MatError::BadFile(format!("entry ({k},{r}) is symbolic, expected rational"))
        })?;
        out.set(k, r, q)?;
    }
    Ok(out)
}

/// Convert a symbolic functional to exact rational entries when possible.
pub fn functional_to_rational(
    f: &Functional<RatFun>,
) -> Result<Functional<crate::symbolic::Rational>, MatError> {
    let mut out = Functional::zero(f.window());
    for (&(k, r), v) in f.entries() {
        let q = crate::scalar::Scalar::to_rational(v).ok_or_else(|| {
            MatError::BadFile(format!("entry ({k},{r}) is symbolic, expected rational"))
        })?;
        out.set(k, r, q)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_upper() {
        let src = "# fixture\nwindow 3 1\ntriangle upper\n2 3 x[2,3]\n4 5 -1/2\n";
        let m = read_matrix_str(src).unwrap();
        let rendered = write_matrix(&m);
        let again = read_matrix_str(&rendered).unwrap();
        assert_eq!(m, again);
        assert_eq!(rendered, write_matrix(&again));
    }

    #[test]
    fn round_trip_functional_and_dense() {
        let src = "size 4\ntriangle functional\n3 1 y[3,1]\n4 2 7/3\n";
        let f = read_matrix_str(src).unwrap();
        assert_eq!(read_matrix_str(&write_matrix(&f)).unwrap(), f);

        let d = "size 2\ntriangle dense\n1 1 2\n1 2 1\n2 1 1\n2 2 1\n";
        let m = read_matrix_str(d).unwrap();
        assert_eq!(read_matrix_str(&write_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_wrong_triangle() {
        let src = "size 3\ntriangle upper\n3 1 1/2\n";
        assert!(read_matrix_str(src).is_err());
    }
}
