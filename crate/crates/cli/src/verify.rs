//! The `verify` command: every desk-scale validator that applies to an instance.

use std::fmt;

use drlift::decomposition::{decompose, decompose_refined, verify_completeness, Epsilon};
use drlift::instance::Instance;
use drlift::lattice_fn::{Validation, Validator};
use drlift::reduction::{
    check_submodular_exhaustive, BuildMode, Constraint, ReducedInstance, MAX_EXHAUSTIVE_ELEMENTS,
};
use num_rational::Ratio;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        if self.detail.is_empty() {
            write!(f, "{tag} {}", self.name)
        } else {
            write!(f, "{tag} {}: {}", self.name, self.detail)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn push_validation(&mut self, name: &str, v: &Validation) {
        match &v.counterexample {
            None => self.push(
                name,
                Status::Pass,
                format!("{} points, tolerance {:e}", v.points, v.tolerance),
            ),
            Some(c) => self.push(name, Status::Fail, c.to_string()),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Runs the validators on a built instance. Size guards surface as errors.
pub fn verify(inst: &Instance, epsilon: Option<Epsilon>) -> CliResult<Report> {
    let f = &inst.function;
    let gc = &inst.coordinates;
    let validator = Validator::default();
    let mut report = Report::default();

    let dr = validator.check_dr(f, gc)?;
    report.push_validation("dr-submodular", &dr);
    let ls = validator.check_lattice_submodular(f, gc)?;
    report.push_validation("lattice-submodular", &ls);
    if f.is_monotone() {
        let mono = validator.check_monotone(f, gc)?;
        report.push_validation("monotone", &mono);
    } else {
        report.push("monotone", Status::Skip, "not declared monotone");
    }

    for (i, &b) in gc.bounds().iter().enumerate() {
        let name = format!("completeness[{}]", gc.labels()[i]);
        if b == 0 {
            report.push(name, Status::Skip, "zero bound");
            continue;
        }
        let mut parts = vec![("exact", decompose(b)?)];
        let mut skipped = None;
        if let Some(eps) = epsilon {
            if eps * Ratio::from_integer(b) < Ratio::from_integer(1) {
                skipped = Some(format!("{eps} * {b} is below one"));
            } else {
                parts.push(("refined", decompose_refined(b, eps)?));
            }
        }
        for (label, d) in parts {
            let r = verify_completeness(&d)?;
            let name = format!("{name} {label}");
            let detail = format!("B = {b}, parts {:?}", d.parts());
            match r.first_missing {
                None => report.push(name, Status::Pass, detail),
                Some(q) => report.push(name, Status::Fail, format!("{detail}, no subset sums to {q}")),
            }
        }
        if let Some(why) = skipped {
            report.push(format!("{name} refined"), Status::Skip, why);
        }
    }

    let ri = ReducedInstance::build(f, gc, BuildMode::Exact)?;
    if ri.len() <= MAX_EXHAUSTIVE_ELEMENTS {
        let element = |k: usize| {
            let e = ri.elements()[k];
            format!("({},{})", e.coordinate, e.part)
        };
        let set = |mask: u64| {
            let items: Vec<String> = (0..ri.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(element)
                .collect();
            format!("{{{}}}", items.join(","))
        };
        match check_submodular_exhaustive(&ri, dr.tolerance)? {
            None => report.push("lifted-submodular", Status::Pass, format!("|E'| = {}", ri.len())),
            Some((s, t, e)) => report.push(
                "lifted-submodular",
                Status::Fail,
                format!("S = {}, T = {}, e = {}", set(s), set(t), element(e)),
            ),
        }
    } else {
        report.push(
            "lifted-submodular",
            Status::Skip,
            format!("|E'| = {} exceeds {}", ri.len(), MAX_EXHAUSTIVE_ELEMENTS),
        );
    }

    if let Some(Constraint::Polymatroid(p)) = &inst.constraint {
        match p.validate()? {
            Ok(()) => report.push("rank-oracle", Status::Pass, ""),
            Err(msg) => report.push("rank-oracle", Status::Fail, msg),
        }
    }
    Ok(report)
}
