//! Text file formats: matrices and decomposition records.
//!
//! Matrix file: a line with the qubit count n, then N = 2^n lines of N
//! whitespace-separated `re,im` entries. Decomposition record file: three
//! header lines (`n`, `skipped`, `residual`) followed by one line per gate,
//! `step row col pattern v11 v12 v21 v22` with each block entry a `re,im`
//! pair. All floats are written with 17 significant digits so a write/read
//! round trip is bit-exact.

use gatedec::{
    ControlledGate, Complex64, ComplexMatrix, DecomposedGate, Decomposition, GatePattern,
    TwoByTwoUnitary, UnitaryMatrix,
};

/// Unitarity tolerance for matrices read from files; looser than the
/// library default because hand-typed entries lose digits.
pub const MATRIX_FILE_TOL: f64 = 1e-8;

/// A file-format violation, with a human-readable reason.
#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

fn fmt_complex(c: Complex64) -> String {
    format!("{:.16e},{:.16e}", c.re, c.im)
}

fn parse_complex(token: &str) -> Result<Complex64, ParseError> {
    let Some((re, im)) = token.split_once(',') else {
        return fail(format!("expected re,im pair, found {token:?}"));
    };
    let re: f64 = re
        .parse()
        .map_err(|_| ParseError(format!("bad real part {re:?}")))?;
    let im: f64 = im
        .parse()
        .map_err(|_| ParseError(format!("bad imaginary part {im:?}")))?;
    Ok(Complex64::new(re, im))
}

pub fn write_matrix(u: &UnitaryMatrix) -> String {
    let dim = u.dim();
    let mut out = String::new();
    out.push_str(&format!("{}\n", u.qubits()));
    for i in 0..dim {
        let row: Vec<String> = (0..dim).map(|j| fmt_complex(u.entry(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a matrix file and certifies it unitary at [`MATRIX_FILE_TOL`].
/// The unitarity failure is surfaced as a [`gatedec::Error`] so the caller
/// can distinguish it from a malformed file.
pub fn read_matrix(text: &str) -> Result<UnitaryMatrix, MatrixReadError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let Some(first) = lines.next() else {
        return Err(ParseError("empty matrix file".into()).into());
    };
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| ParseError(format!("bad qubit count {:?}", first.trim())))?;
    if !(1..=gatedec::MAX_QUBITS).contains(&n) {
        return Err(ParseError(format!(
            "qubit count {n} outside supported range 1..={}",
            gatedec::MAX_QUBITS
        ))
        .into());
    }
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        let Some(line) = lines.next() else {
            return Err(ParseError(format!("expected {dim} rows, found {i}")).into());
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != dim {
            return Err(ParseError(format!(
                "row {}: expected {dim} entries, found {}",
                i + 1,
                tokens.len()
            ))
            .into());
        }
        for (j, t) in tokens.iter().enumerate() {
            m[(i, j)] = parse_complex(t)?;
        }
    }
    if lines.next().is_some() {
        return Err(ParseError(format!("trailing data after {dim} rows")).into());
    }
    UnitaryMatrix::new(m, MATRIX_FILE_TOL).map_err(MatrixReadError::Invalid)
}

/// Either the file is malformed, or it parses but fails validation
/// (most importantly: the matrix is not unitary).
#[derive(Debug)]
pub enum MatrixReadError {
    Format(ParseError),
    Invalid(gatedec::Error),
}

impl From<ParseError> for MatrixReadError {
    fn from(e: ParseError) -> Self {
        MatrixReadError::Format(e)
    }
}

impl std::fmt::Display for MatrixReadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatrixReadError::Format(e) => write!(f, "{e}"),
            MatrixReadError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

pub fn write_decomposition(d: &Decomposition) -> String {
    let mut out = String::new();
    out.push_str(&format!("n {}\n", d.n()));
    out.push_str(&format!("skipped {}\n", d.skipped));
    out.push_str(&format!("residual {:.16e}\n", d.residual));
    for g in &d.gates {
        out.push_str(&format!(
            "{} {} {} {} {} {} {} {}\n",
            g.step,
            g.row,
            g.col,
            g.gate.pattern,
            fmt_complex(g.gate.v.entry(0, 0)),
            fmt_complex(g.gate.v.entry(0, 1)),
            fmt_complex(g.gate.v.entry(1, 0)),
            fmt_complex(g.gate.v.entry(1, 1)),
        ));
    }
    out
}

fn header_value<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str, ParseError> {
    let Some(line) = line else {
        return fail(format!("missing {key:?} header line"));
    };
    match line.split_once(' ') {
        Some((k, v)) if k == key => Ok(v.trim()),
        _ => fail(format!("expected {key:?} header line, found {line:?}")),
    }
}

pub fn read_decomposition(text: &str) -> Result<Decomposition, ParseError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = header_value(lines.next(), "n")?
        .parse()
        .map_err(|_| ParseError("bad qubit count in header".into()))?;
    let skipped: usize = header_value(lines.next(), "skipped")?
        .parse()
        .map_err(|_| ParseError("bad skipped count in header".into()))?;
    let residual: f64 = header_value(lines.next(), "residual")?
        .parse()
        .map_err(|_| ParseError("bad residual in header".into()))?;
    let mut gates = Vec::new();
    for line in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 8 {
            return fail(format!("gate line needs 8 fields, found {}", tokens.len()));
        }
        let step: u32 = tokens[0]
            .parse()
            .map_err(|_| ParseError(format!("bad step {:?}", tokens[0])))?;
        let row: u32 = tokens[1]
            .parse()
            .map_err(|_| ParseError(format!("bad row {:?}", tokens[1])))?;
        let col: u32 = tokens[2]
            .parse()
            .map_err(|_| ParseError(format!("bad column {:?}", tokens[2])))?;
        let pattern = GatePattern::parse(tokens[3]).map_err(|e| ParseError(e.to_string()))?;
        let v = TwoByTwoUnitary::new([
            [parse_complex(tokens[4])?, parse_complex(tokens[5])?],
            [parse_complex(tokens[6])?, parse_complex(tokens[7])?],
        ])
        .map_err(|e| ParseError(e.to_string()))?;
        gates.push(DecomposedGate {
            step,
            row,
            col,
            gate: ControlledGate::new(pattern, v),
        });
    }
    Decomposition::from_parts(n, gates, skipped, residual).map_err(|e| ParseError(e.to_string()))
}
