use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::{flat_vertex, parse_chain, Command, JobSpec, Outcome};
use crate::arrangement::{build_poset, format_key};
use crate::dmod::{build_sections_model, check_d_squared, check_weyl_relations, gr_model, koszul_differential, theta_spectrum};
use crate::error::{Error, Result};
use crate::quiver::{check_relations, dualize, Rep};
use crate::specialize::specialize_along_flag;
use crate::verma::{build_verma, build_verma_at, flag_bases_json};
use crate::weights::{in_category, is_nonresonant};

pub fn all() -> Vec<Box<dyn Command>> {
    vec![
        Box::new(Poset),
        Box::new(Verma),
        Box::new(Check),
        Box::new(Dual),
        Box::new(Nonres),
        Box::new(Incat),
        Box::new(Specialize),
        Box::new(Koszul),
        Box::new(Model),
        Box::new(GrCheck),
        Box::new(Theta),
    ]
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn dims(rep: &Rep) -> BTreeMap<String, usize> {
    let g = rep.graph();
    (0..g.len()).map(|v| (format_key(g.key(v)), rep.dim(v))).collect()
}

struct Poset;

impl Command for Poset {
    fn name(&self) -> &'static str {
        "poset"
    }
    fn about(&self) -> &'static str {
        "strat graph of --arrangement"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let g = build_poset(&job.load_arrangement()?);
        let vertices: Vec<Value> =
            (0..g.len()).map(|v| json!({"key": g.key(v), "codim": g.codim(v), "point": g.point(v)})).collect();
        let arrows: Vec<Value> = g.arrows.iter().map(|&(a, b)| json!({"from": g.key(a), "to": g.key(b)})).collect();
        Ok(Outcome { passed: true, report: json!({"vertices": vertices, "arrows": arrows}) })
    }
}

struct Verma;

impl Command for Verma {
    fn name(&self) -> &'static str {
        "verma"
    }
    fn about(&self) -> &'static str {
        "Verma representation of --weights, optionally supported on --at FLAT"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let w = job.load_weights(&arr)?;
        let (rep, sidecar) = match &job.at {
            Some(key) => {
                let g = Arc::new(build_poset(&arr));
                let alpha = flat_vertex(&g, key)?;
                (build_verma_at(&arr, g, &w, alpha)?, Value::Null)
            }
            None => {
                let v = build_verma(&arr, &w)?;
                let sidecar = flag_bases_json(&v)["flag_bases"].clone();
                (v.rep, sidecar)
            }
        };
        let relations = check_relations(&rep)?;
        let incat = in_category(&rep, &w)?;
        let mut report = json!({
            "dims": dims(&rep),
            "relations": relations.passed,
            "in_category": incat,
            "rep": rep.to_json_value(),
        });
        if !sidecar.is_null() {
            report["flag_bases"] = sidecar;
        }
        Ok(Outcome { passed: relations.passed && incat, report })
    }
}

struct Check;

impl Command for Check {
    fn name(&self) -> &'static str {
        "check"
    }
    fn about(&self) -> &'static str {
        "quadratic relations of --rep"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let r = check_relations(&job.load_rep(&arr)?)?;
        Ok(Outcome { passed: r.passed, report: json!({"violations": to_value(&r.violations)}) })
    }
}

struct Dual;

impl Command for Dual {
    fn name(&self) -> &'static str {
        "dual"
    }
    fn about(&self) -> &'static str {
        "dual representation of --rep, with its relation check"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let d = dualize(&job.load_rep(&arr)?);
        let r = check_relations(&d)?;
        Ok(Outcome {
            passed: r.passed,
            report: json!({"rep": d.to_json_value(), "violations": to_value(&r.violations)}),
        })
    }
}

struct Nonres;

impl Command for Nonres {
    fn name(&self) -> &'static str {
        "nonres"
    }
    fn about(&self) -> &'static str {
        "non-resonance of --weights (--strict also rejects equal arrow weights)"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let w = job.load_weights(&arr)?;
        let r = is_nonresonant(&build_poset(&arr), &w, job.strict);
        Ok(Outcome { passed: r.nonresonant, report: json!({"strict": r.strict, "witnesses": to_value(&r.witnesses)}) })
    }
}

struct Incat;

impl Command for Incat {
    fn name(&self) -> &'static str {
        "incat"
    }
    fn about(&self) -> &'static str {
        "membership of --rep in the weighted category of --weights"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let w = job.load_weights(&arr)?;
        let rep = job.load_rep(&arr)?;
        let relations = check_relations(&rep)?;
        let member = in_category(&rep, &w)?;
        Ok(Outcome { passed: member, report: json!({"in_category": member, "relations": relations.passed}) })
    }
}

struct Specialize;

impl Command for Specialize {
    fn name(&self) -> &'static str {
        "specialize"
    }
    fn about(&self) -> &'static str {
        "specialization of --rep along --flat KEY[,KEY...]"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let rep = job.load_rep(&arr)?;
        let g = rep.graph();
        let chain_arg = job.flat.as_deref().ok_or_else(|| Error::Usage("`specialize` needs --flat".into()))?;
        let chain = parse_chain(chain_arg)?
            .iter()
            .map(|k| g.find(k).ok_or_else(|| Error::UnknownFlat(format_key(k))))
            .collect::<Result<Vec<_>>>()?;
        let sp = specialize_along_flag(&rep, &arr, &chain)?;
        let r = check_relations(&sp.rep)?;
        let mut report = sp.to_json_value(g);
        report["dims"] = to_value(&dims(&sp.rep));
        report["violations"] = to_value(&r.violations);
        Ok(Outcome { passed: r.passed, report })
    }
}

struct Koszul;

impl Command for Koszul {
    fn name(&self) -> &'static str {
        "koszul"
    }
    fn about(&self) -> &'static str {
        "d∘d = 0 for the Koszul complex of --rep"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let cx = koszul_differential(&job.load_rep(&arr)?)?;
        let r = check_d_squared(&cx);
        let ranks: Vec<usize> = cx.generators.iter().map(Vec::len).collect();
        Ok(Outcome { passed: r.passed, report: json!({"ranks": ranks, "witnesses": to_value(&r.witnesses)}) })
    }
}

struct Model;

impl Command for Model {
    fn name(&self) -> &'static str {
        "model"
    }
    fn about(&self) -> &'static str {
        "global-sections model of --rep up to --cutoff, with the Weyl relations"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let rep = job.load_rep(&arr)?;
        let cutoff = job.cutoff()?;
        let relations = check_relations(&rep)?;
        if !relations.passed {
            return Ok(Outcome { passed: false, report: json!({"violations": to_value(&relations.violations)}) });
        }
        let m = build_sections_model(&rep, cutoff)?;
        let r = check_weyl_relations(&m);
        Ok(Outcome {
            passed: r.passed,
            report: json!({
                "cutoff": cutoff,
                "dims_by_degree": m.dims_by_degree(),
                "checked_degree": r.checked_degree,
                "witnesses": to_value(&r.witnesses),
            }),
        })
    }
}

struct GrCheck;

impl Command for GrCheck {
    fn name(&self) -> &'static str {
        "grcheck"
    }
    fn about(&self) -> &'static str {
        "associated graded of --rep along --flat against the specialized model, up to --cutoff"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let rep = job.load_rep(&arr)?;
        let alpha = job.flat_vertex(rep.graph())?;
        let gr = gr_model(&rep, &arr, alpha, job.cutoff()?)?;
        let r = gr.compare();
        let dims: Vec<Value> =
            gr.dims().iter().map(|(&(level, degree), &dim)| json!({"level": level, "degree": degree, "dim": dim})).collect();
        let mut report = to_value(&r);
        report["dims"] = Value::Array(dims);
        Ok(Outcome { passed: r.passed, report })
    }
}

struct Theta;

impl Command for Theta {
    fn name(&self) -> &'static str {
        "theta"
    }
    fn about(&self) -> &'static str {
        "eigenvalues of the conormal Euler field on the graded slices along --flat"
    }
    fn run(&self, job: &JobSpec) -> Result<Outcome> {
        let arr = job.load_arrangement()?;
        let w = job.load_weights(&arr)?;
        let rep = job.load_rep(&arr)?;
        let alpha = job.flat_vertex(rep.graph())?;
        let gr = gr_model(&rep, &arr, alpha, job.cutoff()?)?;
        let r = theta_spectrum(&gr, &w, job.max_level);
        Ok(Outcome { passed: r.passed, report: to_value(&r) })
    }
}
