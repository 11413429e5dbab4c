//! Command-line front end. Every subcommand is a [`Command`] registered by
//! name; reports are JSON on stdout, diagnostics on stderr.

mod commands;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use serde_json::{json, Value};

use crate::arrangement::{build_poset, parse_key, Arrangement, FlatKey, StratGraph};
use crate::error::{Error, Result};
use crate::quiver::Rep;
use crate::verma::build_verma_on;
use crate::weights::Weights;

pub const SCHEMA: &str = "1";

#[derive(Clone, Debug, Parser)]
#[command(name = "hyperquiver", about = "Quiver models of D-modules on hyperplane arrangements")]
pub struct JobSpec {
    /// Subcommand name (see `list`).
    pub subcommand: String,
    #[arg(long)]
    pub arrangement: Option<PathBuf>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Representation JSON; when absent, commands that need one use the Verma
    /// representation of `--weights`.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    /// A flat key such as "[0,2]", or for `specialize` a comma-separated chain.
    #[arg(long)]
    pub flat: Option<String>,
    /// `verma`: build the Verma representation supported on this flat.
    #[arg(long)]
    pub at: Option<String>,
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// `nonres`: a zero difference between distinct arrows also counts.
    #[arg(long)]
    pub strict: bool,
    /// `theta`: highest filtration level to check.
    #[arg(long, default_value_t = 4)]
    pub max_level: i64,
}

/// What a subcommand computed, and whether its asserted checks held.
pub struct Outcome {
    pub passed: bool,
    pub report: Value,
}

pub trait Command {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn run(&self, job: &JobSpec) -> Result<Outcome>;
}

pub struct Registry {
    commands: BTreeMap<&'static str, Box<dyn Command>>,
}

impl Registry {
    pub fn empty() -> Registry {
        Registry { commands: BTreeMap::new() }
    }

    pub fn register(&mut self, c: Box<dyn Command>) {
        self.commands.insert(c.name(), c);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands.get(name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.commands.keys().copied().collect()
    }

    fn listing(&self) -> Value {
        let cmds: BTreeMap<&str, &str> = self.commands.values().map(|c| (c.name(), c.about())).collect();
        json!({"schema": SCHEMA, "commands": cmds})
    }
}

impl Default for Registry {
    fn default() -> Registry {
        let mut r = Registry::empty();
        for c in commands::all() {
            r.register(c);
        }
        r
    }
}

impl JobSpec {
    fn require<'a, T>(&'a self, v: &'a Option<T>, flag: &str) -> Result<&'a T> {
        v.as_ref().ok_or_else(|| Error::Usage(format!("`{}` needs --{flag}", self.subcommand)))
    }

    pub fn load_arrangement(&self) -> Result<Arrangement> {
        Arrangement::from_json(&std::fs::read_to_string(self.require(&self.arrangement, "arrangement")?)?)
    }

    pub fn load_weights(&self, arr: &Arrangement) -> Result<Weights> {
        Weights::from_json(&std::fs::read_to_string(self.require(&self.weights, "weights")?)?, arr)
    }

    /// `--rep` if given, else the Verma representation of `--weights`.
    pub fn load_rep(&self, arr: &Arrangement) -> Result<Rep> {
        let g = Arc::new(build_poset(arr));
        match &self.rep {
            Some(p) => Rep::from_json(&std::fs::read_to_string(p)?, g),
            None if self.weights.is_some() => Ok(build_verma_on(g, &self.load_weights(arr)?)?.rep),
            None => Err(Error::Usage(format!("`{}` needs --rep or --weights", self.subcommand))),
        }
    }

    pub fn flat_vertex(&self, g: &StratGraph) -> Result<usize> {
        flat_vertex(g, self.require(&self.flat, "flat")?)
    }

    pub fn cutoff(&self) -> Result<usize> {
        self.require(&self.cutoff, "cutoff").copied()
    }
}

fn flat_vertex(g: &StratGraph, s: &str) -> Result<usize> {
    let key = parse_key(s)?;
    g.find(&key).ok_or_else(|| Error::UnknownFlat(s.trim().to_string()))
}

/// Splits `"[0],[0,1]"` at the commas between bracket groups.
pub fn parse_chain(s: &str) -> Result<Vec<FlatKey>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_key(&s[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
        }
    }
    out.push(parse_key(&s[start..])?);
    Ok(out)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Reading(_) => 1,
        _ => 2,
    }
}

fn emit(out: &mut dyn Write, v: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

/// Parses `argv` (program name first), runs the subcommand and writes its report.
/// Returns the process exit code: 0 passed, 1 a check failed, 2 bad input.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let job = match JobSpec::try_parse_from(argv) {
        Ok(j) => j,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let registry = Registry::default();
    if job.subcommand == "list" {
        emit(out, &registry.listing());
        return 0;
    }
    let Some(cmd) = registry.get(&job.subcommand) else {
        let _ = writeln!(err, "unknown subcommand {:?}; known: {}", job.subcommand, registry.names().join(", "));
        return 2;
    };
    match cmd.run(&job) {
        Ok(o) => {
            let mut report = json!({"schema": SCHEMA, "command": cmd.name(), "passed": o.passed});
            if let (Value::Object(dst), Value::Object(src)) = (&mut report, o.report) {
                dst.extend(src);
            }
            emit(out, &report);
            if o.passed {
                0
            } else {
                let _ = writeln!(err, "{}: check failed", cmd.name());
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", cmd.name());
            let code = exit_code(&e);
            emit(out, &json!({"schema": SCHEMA, "command": cmd.name(), "passed": false, "error": e.to_string()}));
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains() {
        assert_eq!(parse_chain("[0],[0,1]").unwrap(), vec![vec![0], vec![0, 1]]);
        assert_eq!(parse_chain("[]").unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(parse_chain(" [2, 0] ").unwrap(), vec![vec![0, 2]]);
        assert!(parse_chain("[0]],[1").is_err());
    }

    #[test]
    fn registry_names() {
        let r = Registry::default();
        let expect =
            ["check", "dual", "grcheck", "incat", "koszul", "model", "nonres", "poset", "specialize", "theta", "verma"];
        assert_eq!(r.names(), expect);
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["hq", "poset"], &mut o, &mut e), 2);
        assert_eq!(run(["hq", "nosuch"], &mut o, &mut e), 2);
        assert_eq!(run(["hq", "check", "--bogus"], &mut o, &mut e), 2);
    }
}
