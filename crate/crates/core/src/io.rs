//! Plain-text instance files and solver reports.
//!
//! Instances are whitespace-separated numbers, one logical row per line, with
//! `#` starting a comment that runs to the end of the line:
//!
//! ```text
//! LP            SDP                     OT
//! d m           n m                     n1 n2
//! c (d)         C (n lines of n)        cost (n1 lines of n2)
//! A (m rows)    A_1 … A_m (n lines)     p (n1)
//! b (m)         b (m)                   q (n2)
//! ```
//!
//! Numbers are written with 17 significant digits, so serializing and
//! parsing again reproduces every value bit for bit.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{LpInstance, OtInstance, PrimalPoint, SdpInstance, SolveReport, SymMatrix, SYMMETRY_TOL};

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Lp(LpInstance),
    Sdp(SdpInstance),
    Ot(OtInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Lp(_) => "LP",
            Instance::Sdp(_) => "SDP",
            Instance::Ot(_) => "OT",
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

struct Reader<'a> {
    lines: std::vec::IntoIter<Line<'a>>,
    last_line: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            last_line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &content[s..pos],
                            column: content[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            if !tokens.is_empty() {
                lines.push(Line { number: idx + 1, tokens });
            }
        }
        Reader {
            lines: lines.into_iter(),
            last_line,
        }
    }

    fn next_line(&mut self, what: &str) -> Result<Line<'a>> {
        self.lines
            .next()
            .ok_or_else(|| parse_err(self.last_line + 1, 1, format!("unexpected end of input, expected {what}")))
    }

    fn fixed_line(&mut self, len: usize, what: &str) -> Result<Line<'a>> {
        let line = self.next_line(what)?;
        if line.tokens.len() != len {
            let column = line.tokens.get(len).map_or(1, |t| t.column);
            return Err(parse_err(
                line.number,
                column,
                format!("expected {len} entries for {what}, found {}", line.tokens.len()),
            ));
        }
        Ok(line)
    }

    fn numbers(&mut self, len: usize, what: &str) -> Result<(usize, Vec<f64>)> {
        let line = self.fixed_line(len, what)?;
        let values = line
            .tokens
            .iter()
            .map(|t| parse_number(line.number, t))
            .collect::<Result<Vec<_>>>()?;
        Ok((line.number, values))
    }

    fn matrix(&mut self, rows: usize, cols: usize, what: &str) -> Result<(usize, DMatrix<f64>)> {
        let mut data = Vec::with_capacity(rows * cols);
        let mut first = 0;
        for r in 0..rows {
            let (number, row) = self.numbers(cols, what)?;
            if r == 0 {
                first = number;
            }
            data.extend(row);
        }
        Ok((first, DMatrix::from_row_slice(rows, cols, &data)))
    }

    fn dims(&mut self, what: &str) -> Result<(usize, usize)> {
        let line = self.fixed_line(2, what)?;
        let parse = |t: &Token| {
            t.text
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| parse_err(line.number, t.column, format!("expected a positive integer, found `{}`", t.text)))
        };
        Ok((parse(&line.tokens[0])?, parse(&line.tokens[1])?))
    }

    fn finish(mut self) -> Result<()> {
        match self.lines.next() {
            None => Ok(()),
            Some(line) => Err(parse_err(line.number, line.tokens[0].column, "trailing data after instance")),
        }
    }
}

fn parse_number(line: usize, token: &Token) -> Result<f64> {
    match token.text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(parse_err(line, token.column, format!("non-finite number `{}`", token.text))),
        Err(_) => Err(parse_err(line, token.column, format!("invalid number `{}`", token.text))),
    }
}

/// Wraps a validation failure of the assembled instance.
fn invalid(line: usize, err: Error) -> Error {
    parse_err(line, 1, err.to_string())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut reader = Reader::new(text);
    let header = reader.next_line("instance header")?;
    if header.tokens.len() != 1 {
        return Err(parse_err(header.number, header.tokens[1].column, "header must be a single word"));
    }
    let instance = match header.tokens[0].text {
        "LP" => {
            let (d, m) = reader.dims("`d m`")?;
            let (_, cost) = reader.numbers(d, "the cost vector")?;
            let (_, a) = reader.matrix(m, d, "a constraint row")?;
            let (last, b) = reader.numbers(m, "the right-hand side")?;
            let lp = LpInstance::new(DVector::from_vec(cost), a, DVector::from_vec(b)).map_err(|e| invalid(last, e))?;
            Instance::Lp(lp)
        }
        "SDP" => {
            let (n, m) = reader.dims("`n m`")?;
            let sym = |reader: &mut Reader, what: &str| -> Result<SymMatrix> {
                let (first, block) = reader.matrix(n, n, what)?;
                SymMatrix::from_matrix_checked(block).map_err(|_| {
                    parse_err(first, 1, format!("{what} is not symmetric within {SYMMETRY_TOL:e}"))
                })
            };
            let cost = sym(&mut reader, "the cost matrix")?;
            let cons = (0..m)
                .map(|k| sym(&mut reader, &format!("constraint matrix {}", k + 1)))
                .collect::<Result<Vec<_>>>()?;
            let (last, b) = reader.numbers(m, "the right-hand side")?;
            let sdp = SdpInstance::new(cost, cons, DVector::from_vec(b)).map_err(|e| invalid(last, e))?;
            Instance::Sdp(sdp)
        }
        "OT" => {
            let (n1, n2) = reader.dims("`n1 n2`")?;
            let (_, cost) = reader.matrix(n1, n2, "a cost row")?;
            let (_, p) = reader.numbers(n1, "the source marginal")?;
            let (last, q) = reader.numbers(n2, "the target marginal")?;
            let ot = OtInstance::new(cost, DVector::from_vec(p), DVector::from_vec(q)).map_err(|e| invalid(last, e))?;
            Instance::Ot(ot)
        }
        other => {
            return Err(parse_err(
                header.number,
                header.tokens[0].column,
                format!("unknown instance kind `{other}`, expected LP, SDP or OT"),
            ))
        }
    };
    reader.finish()?;
    Ok(instance)
}

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_row<'a>(out: &mut String, values: impl IntoIterator<Item = &'a f64>) {
    let row: Vec<String> = values.into_iter().map(|&v| format_number(v)).collect();
    out.push_str(&row.join(" "));
    out.push('\n');
}

fn write_matrix(out: &mut String, m: &DMatrix<f64>) {
    for row in m.row_iter() {
        write_row(out, row.iter());
    }
}

pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    match instance {
        Instance::Lp(lp) => {
            let _ = writeln!(out, "LP\n{} {}", lp.num_vars(), lp.num_cons());
            write_row(&mut out, lp.cost().iter());
            write_matrix(&mut out, lp.matrix());
            write_row(&mut out, lp.rhs().iter());
        }
        Instance::Sdp(sdp) => {
            let _ = writeln!(out, "SDP\n{} {}", sdp.dim(), sdp.num_cons());
            write_matrix(&mut out, sdp.cost().as_matrix());
            for a in sdp.constraints() {
                write_matrix(&mut out, a.as_matrix());
            }
            write_row(&mut out, sdp.rhs().iter());
        }
        Instance::Ot(ot) => {
            let _ = writeln!(out, "OT\n{} {}", ot.rows(), ot.cols());
            write_matrix(&mut out, ot.cost());
            write_row(&mut out, ot.source().iter());
            write_row(&mut out, ot.target().iter());
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    /// Aligned, human-oriented summary.
    Text,
    /// `key = value` lines followed by named number blocks.
    KeyValue,
}

/// Ordered report: scalar fields, then named vector or matrix blocks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    scalars: Vec<(String, String)>,
    blocks: Vec<(String, Vec<Vec<f64>>)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn scalar(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.scalars.push((key.to_string(), value.to_string()));
        self
    }

    pub fn number(&mut self, key: &str, value: f64) -> &mut Self {
        self.scalar(key, format_number(value))
    }

    pub fn vector(&mut self, name: &str, v: &DVector<f64>) -> &mut Self {
        self.blocks.push((name.to_string(), vec![v.iter().copied().collect()]));
        self
    }

    pub fn matrix(&mut self, name: &str, m: &DMatrix<f64>) -> &mut Self {
        let rows = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        self.blocks.push((name.to_string(), rows));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.scalars.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Appends every field of `other` with `prefix` prepended to its name.
    pub fn extend_prefixed(&mut self, prefix: &str, other: &Report) -> &mut Self {
        for (k, v) in &other.scalars {
            self.scalars.push((format!("{prefix}{k}"), v.clone()));
        }
        for (k, rows) in &other.blocks {
            self.blocks.push((format!("{prefix}{k}"), rows.clone()));
        }
        self
    }

    pub fn render(&self, format: ReportFormat) -> String {
        let mut out = String::new();
        match format {
            ReportFormat::KeyValue => {
                for (k, v) in &self.scalars {
                    let _ = writeln!(out, "{k} = {v}");
                }
                for (name, rows) in &self.blocks {
                    let cols = rows.first().map_or(0, Vec::len);
                    let _ = writeln!(out, "[{name}] {} {}", rows.len(), cols);
                    for row in rows {
                        write_row(&mut out, row);
                    }
                }
            }
            ReportFormat::Text => {
                let width = self.scalars.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.scalars {
                    let _ = writeln!(out, "{k:<width$}  {v}");
                }
                for (name, rows) in &self.blocks {
                    let _ = writeln!(out, "\n{name}:");
                    for row in rows {
                        out.push_str("  ");
                        write_row(&mut out, row);
                    }
                }
            }
        }
        out
    }
}

pub fn solve_report(report: &SolveReport) -> Report {
    let mut r = Report::new();
    r.scalar("termination", report.termination.as_str())
        .scalar("converged", report.converged)
        .number("epsilon", report.epsilon)
        .number("dual_value", report.dual_value)
        .number("primal_value", report.primal_value)
        .number("duality_gap", report.duality_gap())
        .number("grad_inf_norm", report.grad_inf_norm)
        .scalar("iterations", report.iterations)
        .scalar("warmup_iterations", report.warmup_iterations)
        .vector("lambda", &report.dual_opt);
    match &report.primal_point {
        PrimalPoint::Vector(x) => r.vector("x", x),
        PrimalPoint::Matrix(x) => r.matrix("X", x.as_matrix()),
    };
    r
}
