//! Input documents, entry expressions and report serialization.
//!
//! A document is either JSON,
//!
//! ```json
//! {"form": "d/dz", "matrix": [["-5*z^-2", "5/z"], ["0", "1"]]}
//! ```
//!
//! or plain text with one row per line and entries separated by `;`. Text
//! documents may start with a `form: theta` or `form: d/dz` line (default
//! `d/dz`); lines starting with `#` are ignored.
//!
//! Entries are rational expressions in `z`: integer literals, `z`, the binary
//! operators `+ - * /`, `^` with a signed integer exponent, unary minus and
//! parentheses. `^` binds tighter than unary minus, which binds tighter than
//! `*` and `/`, so `-5*z^-2` is `−5·z⁻²`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::connection::{SystemForm, SystemMatrix};
use crate::error::EntryError;
use crate::ranks::RankReport;
use crate::scalar::RationalFunction;
use crate::{Error, Result};

/// Parse a single entry expression.
pub fn parse_entry(s: &str) -> Result<RationalFunction> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).map_err(|_| Error::Parse {
                    position: at,
                    message: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        self.pos += 1;
        let exp = self.exponent()?;
        base.pow(exp).map_err(|e| Error::Parse {
            position: at,
            message: match e {
                Error::DivisionByZero => "negative power of zero".into(),
                other => other.to_string(),
            },
        })
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.eat(b'(') {
            let e = self.exponent()?;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(e);
        }
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let start = self.pos;
        let digits = self
            .digits()
            .ok_or_else(|| self.error("expected integer exponent"))?;
        let e: i64 = digits.parse().map_err(|_| Error::Parse {
            position: start,
            message: "exponent out of range".into(),
        })?;
        Ok(if negative { -e } else { e })
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(RationalFunction::z())
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                let n: BigInt = d.parse().expect("ascii digits");
                Ok(RationalFunction::constant(BigRational::from_integer(n)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form {
    #[serde(rename = "d/dz", alias = "ddz")]
    DDz,
    #[serde(rename = "theta")]
    Theta,
}

impl From<Form> for SystemForm {
    fn from(f: Form) -> Self {
        match f {
            Form::DDz => SystemForm::DDz,
            Form::Theta => SystemForm::Theta,
        }
    }
}

/// Expected ranks stored alongside regression inputs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poincare_rank: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_poincare_rank: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub katz_rank: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub form: Form,
    pub matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

impl InputDocument {
    /// JSON when the text starts with `{`, the line format otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Ok(serde_json::from_str(text)?)
        } else {
            Self::parse_text(text)
        }
    }

    fn parse_text(text: &str) -> Result<Self> {
        let mut form = None;
        let mut matrix = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("form") {
                if form.is_some() || !matrix.is_empty() {
                    return Err(Error::Document("misplaced form line".into()));
                }
                let value = rest.trim_start_matches([':', '=', ' ']).trim();
                form = Some(match value {
                    "d/dz" | "ddz" => Form::DDz,
                    "theta" => Form::Theta,
                    other => return Err(Error::Document(format!("unknown form {other:?}"))),
                });
                continue;
            }
            matrix.push(line.split(';').map(|e| e.trim().to_string()).collect());
        }
        Ok(InputDocument {
            form: form.unwrap_or(Form::DDz),
            matrix,
            name: None,
            expected: None,
        })
    }

    /// Parse every entry, reporting all failures at once.
    pub fn to_system(&self) -> Result<SystemMatrix> {
        let n = self.matrix.len();
        if n == 0 {
            return Err(Error::Document("empty matrix".into()));
        }
        for (row, r) in self.matrix.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NonSquare {
                    row,
                    found: r.len(),
                    expected: n,
                });
            }
        }
        let mut errors = Vec::new();
        let rows: Vec<Vec<RationalFunction>> = self
            .matrix
            .iter()
            .enumerate()
            .map(|(row, r)| {
                r.iter()
                    .enumerate()
                    .map(|(col, s)| {
                        parse_entry(s).unwrap_or_else(|e| {
                            errors.push(EntryError {
                                row,
                                col,
                                error: Box::new(e),
                            });
                            RationalFunction::zero()
                        })
                    })
                    .collect()
            })
            .collect();
        if !errors.is_empty() {
            return Err(Error::Entries(errors));
        }
        SystemMatrix::new(self.form.into(), rows)
    }
}

/// Parse a document into its θ-form system.
pub fn parse_document(text: &str) -> Result<SystemMatrix> {
    InputDocument::parse(text)?.to_system()
}

/// θ-form JSON document for `system`; parsing it gives back `system`.
pub fn serialize_system(system: &SystemMatrix) -> String {
    let doc = InputDocument {
        form: Form::Theta,
        matrix: system
            .theta_matrix()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect(),
        name: None,
        expected: None,
    };
    serde_json::to_string_pretty(&doc).expect("documents serialize")
}

/// `p/q` with an explicit denominator, `1` included.
pub fn format_fraction(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `p`, `p/q` or a decimal-free signed fraction.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("{s:?} is not a rational number"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

#[derive(Serialize)]
struct WitnessJson {
    k: String,
    equal: bool,
}

#[derive(Serialize)]
struct ReportJson {
    poincare_rank: u64,
    true_poincare_rank: u64,
    katz_rank: String,
    n: usize,
    active_columns: usize,
    witnesses: Vec<WitnessJson>,
}

pub fn serialize_report(report: &RankReport) -> String {
    let json = ReportJson {
        poincare_rank: report.poincare,
        true_poincare_rank: report.true_poincare,
        katz_rank: format_fraction(&report.katz),
        n: report.n,
        active_columns: report.m_active,
        witnesses: report
            .witnesses
            .iter()
            .map(|w| WitnessJson {
                k: format_fraction(&w.k),
                equal: w.equal,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&json).expect("reports serialize")
}
