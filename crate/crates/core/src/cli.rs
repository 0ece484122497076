//! Command-line front end.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::connection::SystemMatrix;
use crate::ext::{Ext, Tropical};
use crate::io::{format_fraction, parse_document, parse_fraction, serialize_report};
use crate::ranks::{rank_report, RankAnalysis};
use crate::tropical::{project, TropicalPoint};
use crate::vmatroid::ValuatedMatroid;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "katzrank",
    version,
    about = "Poincaré, true Poincaré and Katz ranks of z·dX/dz = B(z)·X at z = 0"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the three ranks.
    Ranks {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Project a membrane point or explicit coordinates onto the tropical linear space.
    Project {
        #[command(flatten)]
        input: Input,
        /// Membrane point `ℓ,k`; `k` may be a fraction such as `3/2`.
        #[arg(
            long,
            value_name = "L,K",
            conflicts_with = "coords",
            required_unless_present = "coords"
        )]
        point: Option<String>,
        /// Comma-separated coordinates, one per active membrane column.
        #[arg(long, value_name = "C1,...,CM", allow_hyphen_values = true)]
        coords: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Inspect the valuated matroid of the membrane.
    Matroid {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "N", default_value_t = 5)]
        bases_sample: usize,
        #[arg(long, value_name = "N", default_value_t = 100)]
        check_axiom: usize,
        #[arg(long, value_name = "S", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input document; standard input when omitted.
    pub file: Option<PathBuf>,
}

impl Input {
    fn read(&self, stdin: &mut dyn Read) -> Result<String, Failure> {
        let mut text = String::new();
        match &self.file {
            Some(path) => {
                text = std::fs::read_to_string(path).map_err(|e| Failure {
                    code: EXIT_USAGE,
                    message: format!("cannot read {}: {e}", path.display()),
                })?;
            }
            None => {
                stdin.read_to_string(&mut text).map_err(|e| Failure {
                    code: EXIT_USAGE,
                    message: format!("cannot read standard input: {e}"),
                })?;
            }
        }
        Ok(text)
    }

    fn system(&self, stdin: &mut dyn Read) -> Result<SystemMatrix, Failure> {
        Ok(parse_document(&self.read(stdin)?)?)
    }
}

/// An error message with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Entries(_)
            | Error::Document(_)
            | Error::NonSquare { .. }
            | Error::Json(_)
            | Error::DivisionByZero => EXIT_PARSE,
            Error::InvalidArgument(_) | Error::Io(_) => EXIT_USAGE,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Run the tool on `args` (program name first) and return the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&config.command, stdin) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: &Command, stdin: &mut dyn Read) -> Result<String, Failure> {
    match command {
        Command::Ranks { input, json } => cmd_ranks(&input.system(stdin)?, *json),
        Command::Project {
            input,
            point,
            coords,
            json,
        } => {
            let system = input.system(stdin)?;
            match (point, coords) {
                (Some(p), _) => cmd_project_point(&system, p, *json),
                (None, Some(c)) => cmd_project_coords(&system, c, *json),
                (None, None) => unreachable!("clap requires --point or --coords"),
            }
        }
        Command::Matroid {
            input,
            bases_sample,
            check_axiom,
            seed,
            json,
        } => cmd_matroid(
            &input.system(stdin)?,
            *bases_sample,
            *check_axiom,
            *seed,
            *json,
        ),
    }
}

fn cmd_ranks(system: &SystemMatrix, json: bool) -> Result<String, Failure> {
    let r = rank_report(system)?;
    if json {
        return Ok(serialize_report(&r));
    }
    let mut lines = vec![
        format!(
            "poincare={} true={} katz={}",
            r.poincare, r.true_poincare, r.katz
        ),
        format!("n={} active_columns={}", r.n, r.m_active),
    ];
    lines.extend(
        r.witnesses
            .iter()
            .map(|w| format!("k={} {}", w.k, if w.equal { "equal" } else { "differ" })),
    );
    Ok(lines.join("\n"))
}

fn coordinate(t: &Tropical) -> String {
    match t {
        Ext::Finite(q) => q.to_string(),
        Ext::Infinity => "inf".into(),
    }
}

fn coordinates(p: &TropicalPoint) -> Vec<String> {
    p.coords().iter().map(coordinate).collect()
}

fn render_projection(x: &TropicalPoint, w: &TropicalPoint, extra: Value, json: bool) -> String {
    if json {
        let mut v = json!({ "point": coordinates(x), "projection": coordinates(w) });
        if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
            map.extend(more);
        }
        serde_json::to_string_pretty(&v).expect("values serialize")
    } else {
        format!("point      {x}\nprojection {w}")
    }
}

fn cmd_project_point(system: &SystemMatrix, spec: &str, json: bool) -> Result<String, Failure> {
    let (ell, k) = spec
        .split_once(',')
        .ok_or_else(|| Error::InvalidArgument(format!("--point expects L,K, got {spec:?}")))?;
    let ell: usize = ell
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{ell:?} is not a block index")))?;
    let k = parse_fraction(k)?;
    let mut analysis = RankAnalysis::new(system);
    let u = analysis.membrane().membrane_point(ell, &k)?;
    let w = analysis.projection(ell, &k)?;
    let extra = json!({ "ell": ell, "k": format_fraction(&k) });
    Ok(render_projection(&u.coords, &w, extra, json))
}

fn cmd_project_coords(system: &SystemMatrix, spec: &str, json: bool) -> Result<String, Failure> {
    let coords = spec
        .split(',')
        .map(|c| match c.trim() {
            "inf" => Ok(Ext::Infinity),
            c => parse_fraction(c).map(Ext::Finite),
        })
        .collect::<Result<Vec<Tropical>, Error>>()?;
    let x = TropicalPoint::new(coords);
    let matroid = ValuatedMatroid::from_membrane(&system.membrane());
    let w = project(&matroid, &x)?;
    Ok(render_projection(&x, &w, json!({}), json))
}

fn cmd_matroid(
    system: &SystemMatrix,
    bases_sample: usize,
    check_axiom: usize,
    seed: u64,
    json: bool,
) -> Result<String, Failure> {
    let membrane = system.membrane();
    let matroid = ValuatedMatroid::from_membrane(&membrane);
    let sampled: Vec<(Vec<usize>, BigRational)> = matroid
        .sample_bases(bases_sample, seed)
        .into_iter()
        .map(|b| {
            let v = matroid.value(&b).finite().expect("sampled sets are bases");
            (b, v)
        })
        .collect();
    let report = matroid.check_exchange_axiom(check_axiom, seed);
    if json {
        let v = json!({
            "ground_size": matroid.ground_size(),
            "rank": matroid.rank(),
            "active_columns": membrane.active(),
            "bases": sampled
                .iter()
                .map(|(b, v)| json!({ "basis": b, "value": format_fraction(v) }))
                .collect::<Vec<_>>(),
            "axiom": {
                "samples": check_axiom,
                "seed": seed,
                "checked": report.checked,
                "trivial": report.trivial,
                "violations": report
                    .violations
                    .iter()
                    .map(|v| json!({ "basis": v.basis, "other": v.other, "element": v.element }))
                    .collect::<Vec<_>>(),
            },
        });
        return Ok(serde_json::to_string_pretty(&v).expect("values serialize"));
    }
    let mut lines = vec![
        format!(
            "ground_size={} rank={}",
            matroid.ground_size(),
            matroid.rank()
        ),
        format!("active_columns={:?}", membrane.active()),
    ];
    lines.extend(
        sampled
            .iter()
            .map(|(b, v)| format!("basis {b:?} value={v}")),
    );
    lines.push(format!(
        "axiom samples={check_axiom} seed={seed} checked={} trivial={} violations={}",
        report.checked,
        report.trivial,
        report.violations.len()
    ));
    lines.extend(
        report
            .violations
            .iter()
            .map(|v| format!("violation B={:?} B'={:?} u={}", v.basis, v.other, v.element)),
    );
    Ok(lines.join("\n"))
}
