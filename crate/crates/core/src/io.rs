//! Table input formats and full-precision JSON/CSV rendering.
//!
//! Tables are read either as CSV, one line per table row (`0.4,0.2\n0.1,0.3`),
//! as JSON `{"rows": [[0.4, 0.2], [0.1, 0.3]]}`, or inline with rows separated
//! by `;` (`0.4,0.2;0.1,0.3`). Every floating-point number written out uses
//! 17 significant digits, enough to round-trip any `f64`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::error::{Error, Result};
use crate::tables::{ProbTable2x2, ProbTable2x3};

/// Raw entries of a 2×2 or 2×3 table, before validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RawTable {
    TwoByTwo([f64; 4]),
    TwoByThree([f64; 6]),
}

#[derive(Debug, Deserialize, Serialize)]
struct JsonTable {
    rows: Vec<Vec<f64>>,
}

impl RawTable {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        match rows {
            [r0, r1] if r0.len() == 2 && r1.len() == 2 => {
                Ok(RawTable::TwoByTwo([r0[0], r0[1], r1[0], r1[1]]))
            }
            [r0, r1] if r0.len() == 3 && r1.len() == 3 => Ok(RawTable::TwoByThree([
                r0[0], r0[1], r0[2], r1[0], r1[1], r1[2],
            ])),
            _ => Err(Error::Parse(format!(
                "expected a 2x2 or 2x3 table, got {} row(s) of lengths {:?}",
                rows.len(),
                rows.iter().map(Vec::len).collect::<Vec<_>>()
            ))),
        }
    }

    /// Validates as probabilities, or divides by the total when `normalize` is set.
    pub fn into_table(self, normalize: bool, tol: f64) -> Result<Table> {
        Ok(match (self, normalize) {
            (RawTable::TwoByTwo(p), false) => Table::TwoByTwo(ProbTable2x2::new(p, tol)?),
            (RawTable::TwoByTwo(p), true) => Table::TwoByTwo(ProbTable2x2::from_counts(p)?),
            (RawTable::TwoByThree(p), false) => Table::TwoByThree(ProbTable2x3::new(p, tol)?),
            (RawTable::TwoByThree(p), true) => Table::TwoByThree(ProbTable2x3::from_counts(p)?),
        })
    }
}

/// A validated table of either shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Table {
    TwoByTwo(ProbTable2x2),
    TwoByThree(ProbTable2x3),
}

fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: `{s}`")))
}

/// `a,b;c,d` or `a,b,c;d,e,f`.
pub fn parse_inline(s: &str) -> Result<RawTable> {
    let rows = s
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| r.split(',').map(parse_number).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    RawTable::from_rows(&rows)
}

pub fn parse_csv(text: &str) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        rows.push(record.iter().map(parse_number).collect::<Result<Vec<_>>>()?);
    }
    RawTable::from_rows(&rows)
}

pub fn parse_json_table(text: &str) -> Result<RawTable> {
    let t: JsonTable = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    RawTable::from_rows(&t.rows)
}

/// Reads a table file; JSON when the extension is `.json` or the text starts with `{`.
pub fn load_table(path: &Path) -> Result<RawTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('{');
    if is_json {
        parse_json_table(&text)
    } else {
        parse_csv(&text)
    }
}

/// `%.17g`-style rendering: 17 significant digits, trailing zeros removed,
/// scientific notation outside `1e-5 <= |x| < 1e17`.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let mut digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }
    let sign = if negative { "-" } else { "" };
    if (-5..17).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                format!("{sign}{digits}{}", "0".repeat(int_len - digits.len()))
            } else {
                format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
        }
    } else if digits.len() == 1 {
        format!("{sign}{digits}e{exp}")
    } else {
        format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..])
    }
}

/// A JSON number carrying the [`fmt17`] digits; `null` for non-finite values.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(fmt17(x).parse::<Number>().expect("valid JSON number"))
}

fn reformat(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_u64() || n.is_i64()) => match n.as_f64() {
            Some(x) => num(x),
            None => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(reformat).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, reformat(v))).collect()),
        other => other,
    }
}

/// Serializes `value` and re-renders every float with [`fmt17`].
pub fn to_json17<T: Serialize + ?Sized>(value: &T) -> Value {
    reformat(serde_json::to_value(value).expect("serializable report"))
}

pub fn rows_json<const N: usize>(rows: &[[f64; N]; 2]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|&x| num(x)).collect()))
            .collect(),
    )
}
