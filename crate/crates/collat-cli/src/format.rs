//! The matrix file format: line 1 holds `rows cols`, followed by `rows`
//! lines of `cols` whitespace-separated scalars in the exact scalar
//! grammar, optionally followed by a trailing `spectrum: λ₁ λ₂ …` line.
//! Printing is canonical, so parse(print(f)) reproduces the value bit for
//! bit.

use std::fmt;

use collat::{GaussianRational, Matrix};

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub matrix: Matrix,
    pub spectrum: Option<Vec<GaussianRational>>,
}

/// Parse error with 1-based line/column position.
#[derive(Debug, Clone)]
pub struct FileError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.msg)
    }
}

impl std::error::Error for FileError {}

fn err(line: usize, column: usize, msg: impl Into<String>) -> FileError {
    FileError {
        line,
        column,
        msg: msg.into(),
    }
}

/// Column (1-based) of each whitespace-separated token in a line.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        out.push((start + 1, &line[start..end]));
    }
    out
}

fn parse_scalar_at(token: &str, line_no: usize, col: usize) -> Result<GaussianRational, FileError> {
    token
        .parse::<GaussianRational>()
        .map_err(|e| err(line_no, col + e.pos, e.msg))
}

pub fn parse_matrix_file(text: &str) -> Result<MatrixFile, FileError> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| err(1, 1, "empty file; expected `rows cols` header"))?;
    let header_tokens = tokens_with_columns(header);
    if header_tokens.len() != 2 {
        return Err(err(
            header_no + 1,
            1,
            format!(
                "header must be `rows cols`, found {} token(s)",
                header_tokens.len()
            ),
        ));
    }
    let parse_count = |(col, tok): (usize, &str)| -> Result<usize, FileError> {
        tok.parse::<usize>()
            .map_err(|_| err(header_no + 1, col, format!("invalid dimension `{tok}`")))
    };
    let rows = parse_count(header_tokens[0])?;
    let cols = parse_count(header_tokens[1])?;
    if rows == 0 || cols == 0 {
        return Err(err(header_no + 1, 1, "dimensions must be positive"));
    }

    let mut entries: Vec<Vec<GaussianRational>> = Vec::with_capacity(rows);
    let mut spectrum: Option<Vec<GaussianRational>> = None;
    let mut last_line = header_no + 1;
    for (line_no, line) in lines {
        last_line = line_no + 1;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix("spectrum:") {
            if entries.len() < rows {
                return Err(err(
                    line_no + 1,
                    1,
                    format!("spectrum line before all {rows} matrix rows were read"),
                ));
            }
            if spectrum.is_some() {
                return Err(err(line_no + 1, 1, "duplicate spectrum line"));
            }
            let offset = line.len() - rest.len();
            let mut values = Vec::new();
            for (col, tok) in tokens_with_columns(rest) {
                values.push(parse_scalar_at(tok, line_no + 1, offset + col)?);
            }
            if values.is_empty() {
                return Err(err(line_no + 1, 1, "spectrum line lists no eigenvalues"));
            }
            spectrum = Some(values);
            continue;
        }
        if entries.len() == rows {
            return Err(err(line_no + 1, 1, "unexpected content after the matrix"));
        }
        let toks = tokens_with_columns(line);
        if toks.len() != cols {
            return Err(err(
                line_no + 1,
                1,
                format!(
                    "row {} has {} entries, expected {cols}",
                    entries.len() + 1,
                    toks.len()
                ),
            ));
        }
        let mut row = Vec::with_capacity(cols);
        for (col, tok) in toks {
            row.push(parse_scalar_at(tok, line_no + 1, col)?);
        }
        entries.push(row);
    }
    if entries.len() < rows {
        return Err(err(
            last_line,
            1,
            format!("expected {rows} matrix rows, found {}", entries.len()),
        ));
    }
    let matrix = Matrix::from_rows(entries).expect("rows validated above");
    Ok(MatrixFile { matrix, spectrum })
}

pub fn print_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if c > 0 {
                out.push(' ');
            }
            out.push_str(&m.at(r, c).to_string());
        }
        out.push('\n');
    }
    out
}

pub fn print_matrix_file(f: &MatrixFile) -> String {
    let mut out = format!("{} {}\n", f.matrix.rows(), f.matrix.cols());
    out.push_str(&print_matrix(&f.matrix));
    if let Some(spectrum) = &f.spectrum {
        let values: Vec<String> = spectrum.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("spectrum: {}\n", values.join(" ")));
    }
    out
}

/// Single-line rendering of a matrix: rows joined by `;`.
pub fn matrix_inline(m: &Matrix) -> String {
    if m.cols() == 0 || m.rows() == 0 {
        return "(empty)".into();
    }
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| m.at(r, c).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(" ; ")
}

/// Parse the inline rendering produced by [`matrix_inline`]: rows
/// separated by `;`, entries by whitespace.
pub fn parse_matrix_inline(text: &str) -> Result<Matrix, FileError> {
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for (i, row_text) in text.split(';').enumerate() {
        let mut row = Vec::new();
        for (col, tok) in tokens_with_columns(row_text) {
            row.push(parse_scalar_at(tok, i + 1, col)?);
        }
        if row.is_empty() {
            return Err(err(i + 1, 1, "empty matrix row"));
        }
        rows.push(row);
    }
    Matrix::from_rows(rows).map_err(|e| err(1, 1, e.to_string()))
}

/// Parse a comma-separated spectrum flag value.
pub fn parse_spectrum_flag(text: &str) -> Result<Vec<GaussianRational>, FileError> {
    let mut out = Vec::new();
    for (i, part) in text.split(',').enumerate() {
        let trimmed = part.trim();
        if trimmed.is_empty() {
            return Err(err(1, 1, format!("empty eigenvalue at position {}", i + 1)));
        }
        out.push(
            trimmed
                .parse::<GaussianRational>()
                .map_err(|e| err(1, 1, format!("eigenvalue {}: {}", i + 1, e)))?,
        );
    }
    if out.is_empty() {
        return Err(err(1, 1, "spectrum flag lists no eigenvalues"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_spectrum() {
        let text = "2 2\n1 1/2\n-i 3+1/2i\nspectrum: 1 2-3i\n";
        let parsed = parse_matrix_file(text).unwrap();
        assert_eq!(print_matrix_file(&parsed), text);
    }

    #[test]
    fn inline_rendering_round_trips() {
        let m = Matrix::from_int_rows(&[&[1, -2], &[0, 7]]);
        assert_eq!(parse_matrix_inline(&matrix_inline(&m)).unwrap(), m);
    }

    #[test]
    fn randomized_file_round_trips() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let rows = rng.gen_range(1..=4usize);
            let cols = rng.gen_range(1..=4usize);
            let matrix = Matrix::from_fn(rows, cols, |_, _| {
                GaussianRational::from_parts(
                    rng.gen_range(-9i64..=9),
                    rng.gen_range(1i64..=9),
                    rng.gen_range(-9i64..=9),
                    rng.gen_range(1i64..=9),
                )
            });
            let spectrum = if rng.gen_bool(0.5) {
                Some(vec![GaussianRational::from_int(rng.gen_range(-3i64..=3))])
            } else {
                None
            };
            let file = MatrixFile { matrix, spectrum };
            let printed = print_matrix_file(&file);
            let back = parse_matrix_file(&printed).unwrap();
            assert_eq!(back.matrix, file.matrix);
            assert_eq!(back.spectrum, file.spectrum);
            assert_eq!(print_matrix_file(&back), printed);
            assert_eq!(
                parse_matrix_inline(&matrix_inline(&file.matrix)).unwrap(),
                file.matrix
            );
        }
    }

    #[test]
    fn position_annotated_errors() {
        let e = parse_matrix_file("2 2\n1 2\n3 x\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_matrix_file("2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_matrix_file("2 2\n1 2\n").unwrap_err();
        assert!(e.msg.contains("expected 2 matrix rows"));
        let e = parse_matrix_file("1 1\n1/0\n").unwrap_err();
        assert!(e.msg.contains("zero denominator"));
    }
}
