//! Generators for the named test matrices and matrix parsing/serialization.
//!
//! The matrix file format is: line 1 holds the dimension `n`, followed by
//! `n` lines of `n` whitespace-separated entries. Entries are integers,
//! fractions `p/q`, or decimals; decimals parse to exact rationals from
//! their digits.

use crate::ratlin::{fmt_rat, rat_int, Rat, SymmetricRationalMatrix};
use crate::zeros::float::SymMatF64;
use num_bigint::BigInt;
use num_traits::Zero;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MatGenError {
    #[error("T-matrix angles must satisfy theta_i >= 0 and sum < pi; got sum = {0}")]
    Domain(f64),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("asymmetric input: entry ({0},{1}) differs from ({1},{0})")]
    Asymmetry(usize, usize),
}

/// Where a matrix comes from.
#[derive(Debug, Clone)]
pub enum MatrixSource {
    Horn,
    TMatrix([f64; 5]),
    File(std::path::PathBuf),
    Inline(String),
}

impl MatrixSource {
    /// Loads through the exact backend. The trigonometric family is not
    /// exactly representable and is refused here.
    pub fn load_exact(&self) -> Result<SymmetricRationalMatrix, MatGenError> {
        match self {
            MatrixSource::Horn => Ok(gen_horn()),
            MatrixSource::TMatrix(theta) => Err(MatGenError::Parse {
                line: 0,
                col: 0,
                msg: format!("trigonometric family {theta:?} has no exact form"),
            }),
            MatrixSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| MatGenError::Parse {
                    line: 0,
                    col: 0,
                    msg: format!("reading {}: {e}", path.display()),
                })?;
                parse_matrix(&text)
            }
            MatrixSource::Inline(text) => parse_matrix(text),
        }
    }

    /// Loads through the float backend.
    pub fn load_float(&self) -> Result<SymMatF64, MatGenError> {
        match self {
            MatrixSource::Horn => Ok(gen_tmat([0.0; 5]).expect("zero angles are valid")),
            MatrixSource::TMatrix(theta) => gen_tmat(*theta),
            MatrixSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| MatGenError::Parse {
                    line: 0,
                    col: 0,
                    msg: format!("reading {}: {e}", path.display()),
                })?;
                parse_matrix_f64(&text)
            }
            MatrixSource::Inline(text) => parse_matrix_f64(text),
        }
    }
}

/// The classical 5x5 exceptional extremal matrix with unit diagonal and
/// entries in {-1, +1}: -1 on the cyclic band, +1 elsewhere. It equals the
/// all-angles-zero limit of [`gen_tmat`].
pub fn gen_horn() -> SymmetricRationalMatrix {
    SymmetricRationalMatrix::from_fn(5, |i, j| {
        if i == j {
            rat_int(1)
        } else {
            let d = (j + 5 - i) % 5;
            if d == 1 || d == 4 {
                rat_int(-1)
            } else {
                rat_int(1)
            }
        }
    })
}

/// The 5x5 one-parameter-family matrix with band entries `-cos(theta_i)`
/// and off-band entries `cos(theta_i + theta_j)` as dictated by the cyclic
/// pattern. Requires `theta_i >= 0` and `sum theta_i < pi` strictly.
pub fn gen_tmat(theta: [f64; 5]) -> Result<SymMatF64, MatGenError> {
    let sum: f64 = theta.iter().sum();
    if theta.iter().any(|&t| t < 0.0) || sum >= PI {
        return Err(MatGenError::Domain(sum));
    }
    let t = |i: usize| theta[i % 5];
    let mut rows = vec![vec![0.0f64; 5]; 5];
    for i in 0..5 {
        rows[i][i] = 1.0;
    }
    // Band: entry (i, i+1) = -cos(theta_{i+1}) with 1-based angle numbering.
    for i in 0..5 {
        let j = (i + 1) % 5;
        let v = -t(i).cos();
        rows[i][j] = v;
        rows[j][i] = v;
    }
    // Off-band: entry (i, i+2) = cos(theta_{i+1} + theta_{i+2}).
    for i in 0..5 {
        let j = (i + 2) % 5;
        let v = (t(i) + t(i + 1)).cos();
        rows[i][j] = v;
        rows[j][i] = v;
    }
    Ok(SymMatF64::from_rows(rows))
}

/// Parses a single entry: integer, `p/q`, or decimal (exact from digits).
pub fn parse_entry(tok: &str) -> Result<Rat, String> {
    if let Some((p, q)) = tok.split_once('/') {
        let pn: BigInt = p.parse().map_err(|e| format!("bad numerator: {e}"))?;
        let qn: BigInt = q.parse().map_err(|e| format!("bad denominator: {e}"))?;
        if qn.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(Rat::new(pn, qn));
    }
    if tok.contains('.') || tok.contains('e') || tok.contains('E') {
        return parse_decimal(tok);
    }
    let n: BigInt = tok.parse().map_err(|e| format!("bad integer: {e}"))?;
    Ok(Rat::from_integer(n))
}

fn parse_decimal(tok: &str) -> Result<Rat, String> {
    // [sign] digits [ . digits ] [ (e|E) [sign] digits ]
    let (mantissa, exp) = match tok.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|err| format!("bad exponent: {err}"))?;
            (m, exp)
        }
        None => (tok, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(d) => (true, d),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err("empty number".into());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(format!("bad decimal: {tok}"));
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|e| format!("bad digits: {e}"))?
    };
    let shift = exp - frac_part.len() as i64;
    let mut r = Rat::from_integer(numer);
    let ten = Rat::from_integer(BigInt::from(10));
    if shift > 0 {
        for _ in 0..shift {
            r *= &ten;
        }
    } else {
        for _ in 0..(-shift) {
            r /= &ten;
        }
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Parses the matrix file format into an exact symmetric matrix.
pub fn parse_matrix(text: &str) -> Result<SymmetricRationalMatrix, MatGenError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (nline, nstr) = lines
        .next()
        .ok_or(MatGenError::Parse { line: 1, col: 1, msg: "empty input".into() })?;
    let n: usize = nstr.trim().parse().map_err(|e| MatGenError::Parse {
        line: nline + 1,
        col: 1,
        msg: format!("bad dimension: {e}"),
    })?;
    if n == 0 {
        return Err(MatGenError::Parse {
            line: nline + 1,
            col: 1,
            msg: "dimension must be positive".into(),
        });
    }
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for _ in 0..n {
        let (lno, line) = lines.next().ok_or(MatGenError::Parse {
            line: nline + 1 + n,
            col: 1,
            msg: format!("expected {n} matrix rows"),
        })?;
        let mut row = Vec::with_capacity(n);
        for tok in line.split_whitespace() {
            let col = line.find(tok).unwrap_or(0) + 1;
            row.push(parse_entry(tok).map_err(|msg| MatGenError::Parse {
                line: lno + 1,
                col,
                msg,
            })?);
        }
        if row.len() != n {
            return Err(MatGenError::Parse {
                line: lno + 1,
                col: 1,
                msg: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rows[i][j] != rows[j][i] {
                return Err(MatGenError::Asymmetry(i + 1, j + 1));
            }
        }
    }
    Ok(SymmetricRationalMatrix::from_fn(n, |i, j| rows[i][j].clone()))
}

/// Serializes an exact matrix in the file format; inverse of
/// [`parse_matrix`] up to whitespace normalization.
pub fn serialize_matrix(m: &SymmetricRationalMatrix) -> String {
    let n = m.n();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| fmt_rat(m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Serializes a float matrix; entries use the shortest representation that
/// round-trips through `f64`.
pub fn serialize_matrix_f64(m: &SymMatF64) -> String {
    let n = m.n();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{}", m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the matrix file format directly into the float backend. Entries
/// parse with the standard correctly-rounded string-to-f64 conversion, so
/// output of [`serialize_matrix_f64`] round-trips bit-exactly.
pub fn parse_matrix_f64(text: &str) -> Result<SymMatF64, MatGenError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (nline, nstr) = lines
        .next()
        .ok_or(MatGenError::Parse { line: 1, col: 1, msg: "empty input".into() })?;
    let n: usize = nstr.trim().parse().map_err(|e| MatGenError::Parse {
        line: nline + 1,
        col: 1,
        msg: format!("bad dimension: {e}"),
    })?;
    if n == 0 {
        return Err(MatGenError::Parse {
            line: nline + 1,
            col: 1,
            msg: "dimension must be positive".into(),
        });
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let (lno, line) = lines.next().ok_or(MatGenError::Parse {
            line: nline + 1 + n,
            col: 1,
            msg: format!("expected {n} matrix rows"),
        })?;
        let row: Result<Vec<f64>, _> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|e| MatGenError::Parse {
                    line: lno + 1,
                    col: 1,
                    msg: format!("bad float entry {tok:?}: {e}"),
                })
            })
            .collect();
        let row = row?;
        if row.len() != n {
            return Err(MatGenError::Parse {
                line: lno + 1,
                col: 1,
                msg: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rows[i][j] != rows[j][i] {
                return Err(MatGenError::Asymmetry(i + 1, j + 1));
            }
        }
    }
    Ok(SymMatF64::from_rows(rows))
}

/// Parses a vector in the command-line grammar: comma-separated entries,
/// each an integer, `p/q`, or decimal.
pub fn parse_vector(text: &str) -> Result<Vec<Rat>, MatGenError> {
    let mut out = Vec::new();
    for (k, tok) in text.split(',').enumerate() {
        let tok = tok.trim();
        if tok.is_empty() {
            return Err(MatGenError::Parse {
                line: 1,
                col: k + 1,
                msg: "empty vector entry".into(),
            });
        }
        out.push(parse_entry(tok).map_err(|msg| MatGenError::Parse {
            line: 1,
            col: k + 1,
            msg,
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rat;
    use num_traits::Signed;

    #[test]
    fn horn_is_unit_diagonal_sign_matrix() {
        let h = gen_horn();
        assert!(h.has_unit_diagonal());
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    let v = h.get(i, j);
                    assert!(v == &rat_int(1) || v == &rat_int(-1));
                }
            }
        }
        // Cyclic band is -1.
        for i in 0..5 {
            assert_eq!(h.get(i, (i + 1) % 5), &rat_int(-1));
            assert_eq!(h.get(i, (i + 2) % 5), &rat_int(1));
        }
    }

    #[test]
    fn tmat_at_zero_equals_horn() {
        let t = gen_tmat([0.0; 5]).unwrap();
        let h = gen_horn();
        for i in 0..5 {
            for j in 0..5 {
                let hv = if h.get(i, j).is_positive() { 1.0 } else { -1.0 };
                assert_eq!(t.get(i, j), hv);
            }
        }
    }

    #[test]
    fn tmat_band_entry() {
        let t = gen_tmat([PI / 10.0; 5]).unwrap();
        assert!((t.get(0, 1) - (-(PI / 10.0).cos())).abs() < 1e-15);
        assert!((t.get(0, 1) - (-0.951_056_516_295_153_5)).abs() < 1e-12);
    }

    #[test]
    fn tmat_domain_errors() {
        assert!(matches!(
            gen_tmat([PI / 5.0; 5]),
            Err(MatGenError::Domain(_))
        ));
        assert!(matches!(
            gen_tmat([-0.1, 0.0, 0.0, 0.0, 0.0]),
            Err(MatGenError::Domain(_))
        ));
        assert!(gen_tmat([0.1; 5]).is_ok());
    }

    #[test]
    fn parse_simple_matrix() {
        let m = parse_matrix("2\n1 -1\n-1 1\n").unwrap();
        assert_eq!(m.get(0, 1), &rat_int(-1));
        assert_eq!(m.n(), 2);
    }

    #[test]
    fn parse_fraction_and_decimal_entries() {
        assert_eq!(parse_entry("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_entry("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_entry("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_entry("1.5e2").unwrap(), rat_int(150));
        assert_eq!(parse_entry("5e-1").unwrap(), rat(1, 2));
    }

    #[test]
    fn parse_detects_asymmetry() {
        let e = parse_matrix("2\n1 0.5\n0.4 1\n");
        assert_eq!(e, Err(MatGenError::Asymmetry(1, 2)));
    }

    #[test]
    fn parse_reports_location() {
        match parse_matrix("2\n1 x\n0 1\n") {
            Err(MatGenError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn serialize_parse_roundtrip_exact() {
        let m = SymmetricRationalMatrix::from_fn(3, |i, j| rat((i + j) as i64, 7));
        let text = serialize_matrix(&m);
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn float_serialize_roundtrips() {
        let t = gen_tmat([PI / 10.0, PI / 11.0, PI / 12.0, PI / 13.0, PI / 14.0]).unwrap();
        let text = serialize_matrix_f64(&t);
        let back = parse_matrix_f64(&text).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(t.get(i, j), back.get(i, j), "entry ({i},{j})");
            }
        }
        // The same text also parses exactly as rationals.
        assert!(parse_matrix(&text).is_ok());
    }

    #[test]
    fn matrix_sources_load() {
        let h = MatrixSource::Horn.load_exact().unwrap();
        assert_eq!(h, gen_horn());
        let t = MatrixSource::TMatrix([0.1; 5]).load_float().unwrap();
        assert!((t.get(0, 1) - (-0.1f64.cos())).abs() < 1e-15);
        assert!(MatrixSource::TMatrix([0.1; 5]).load_exact().is_err());
        let inline = MatrixSource::Inline("2\n1 -1\n-1 1\n".into());
        assert_eq!(inline.load_exact().unwrap().get(0, 1), &rat_int(-1));
        assert_eq!(inline.load_float().unwrap().get(0, 1), -1.0);
    }

    #[test]
    fn parse_vector_grammar() {
        let v = parse_vector("1,2,1/2,0.25").unwrap();
        assert_eq!(v, vec![rat_int(1), rat_int(2), rat(1, 2), rat(1, 4)]);
        assert!(parse_vector("1,,2").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rat> {
            (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
        }

        proptest! {
            #[test]
            fn serialize_parse_is_identity(n in 1usize..=5, seed in proptest::collection::vec(small_rat(), 25)) {
                let m = SymmetricRationalMatrix::from_fn(n, |i, j| seed[i * 5 + j].clone());
                let text = serialize_matrix(&m);
                prop_assert_eq!(parse_matrix(&text).unwrap(), m);
            }

            #[test]
            fn decimal_entries_parse_exactly(p in -10_000i64..=10_000, shift in 0u32..=6) {
                // A decimal with `shift` fractional digits equals p / 10^shift.
                let scale = 10i64.pow(shift);
                let whole = p / scale;
                let frac = (p % scale).abs();
                let text = if shift == 0 {
                    format!("{p}")
                } else {
                    let sign = if p < 0 && whole == 0 { "-" } else { "" };
                    format!("{sign}{whole}.{frac:0width$}", width = shift as usize)
                };
                prop_assert_eq!(parse_entry(&text).unwrap(), rat(p, scale));
            }
        }
    }
}
