//! Task dispatch and human-readable rendering.

use slopelab_core::elimpres::{build_multi, clean, cross_check_theorems, Germ};
use slopelab_core::newton::build_polyhedron;
use slopelab_core::samuel::{
    kernel_lambda, kernel_lambda_with, nubar, samuel_slope, LocalRingPresentation, NubarStrategy, SamuelOptions,
};

use crate::job::{Job, StrategyName, Task};
use crate::report::{KernelJson, NubarJson, PresentationJson, Report, SamuelSlopeJson, TheoremJson};
use crate::CliError;

pub struct Settings {
    pub opts: SamuelOptions,
    pub max_rounds: u32,
}

/// The report kind each subcommand produces.
pub fn kind_of(op: &str) -> fn(&Report) -> bool {
    match op {
        "nubar" => |r| matches!(r, Report::Nubar(_)),
        "kernel" => |r| matches!(r, Report::Kernel(_)),
        "samuel-slope" => |r| matches!(r, Report::Slope(_)),
        "slope" => |r| matches!(r, Report::Presentation(_)),
        _ => |r| matches!(r, Report::Theorems(_)),
    }
}

pub fn run_tasks(job: &Job, op: &str, s: &Settings) -> Result<Vec<Report>, CliError> {
    let tasks: Vec<&Task> = job.file.tasks.iter().filter(|t| t.op() == op).collect();
    if tasks.is_empty() {
        return Err(CliError::Invalid(format!("the job has no {op} tasks")));
    }
    tasks.into_iter().map(|t| run_task(job, t, s)).collect()
}

fn run_task(job: &Job, task: &Task, s: &Settings) -> Result<Report, CliError> {
    let ring = &job.ring;
    match task {
        Task::Nubar { f, ideal, strategy, certificate } => {
            let a = job.local_ring()?;
            let ideal_name = ideal.clone().unwrap_or_else(|| "m".into());
            let i = job.ideal(&ideal_name)?;
            let cert = certificate.as_ref().map(|c| job.certificate(c)).transpose()?;
            let strat = match (strategy, cert) {
                (Some(StrategyName::Monomial), _) => NubarStrategy::Monomial,
                (Some(StrategyName::Limit), _) => NubarStrategy::Limit,
                (Some(StrategyName::Certificate), Some(c)) | (None, Some(c)) => NubarStrategy::Certificate(c),
                (Some(StrategyName::Certificate), None) => {
                    return Err(CliError::Invalid("certificate strategy without a certificate".into()))
                }
                (Some(StrategyName::Auto), c) => NubarStrategy::Auto(c),
                (None, None) => NubarStrategy::Auto(None),
            };
            let poly = job.poly(f)?;
            let r = nubar(&a, &poly, &i, &strat, &s.opts)?;
            let decl = certificate.as_ref().map(|c| job.file.certificates[c].clone());
            let polyhedron = if a.ideal().is_zero_ideal() && i.is_monomial() && !i.is_zero_ideal() {
                Some(build_polyhedron(&i)?)
            } else {
                None
            };
            Ok(Report::Nubar(NubarJson::new(&ring.format(&poly), &ideal_name, &r, decl, polyhedron)))
        }
        Task::Kernel { method } => {
            let a = job.local_ring()?;
            let k = match method {
                Some(m) => kernel_lambda_with(&a, *m, &[], &s.opts)?,
                None => kernel_lambda(&a, &s.opts)?,
            };
            Ok(Report::Kernel(KernelJson::new(ring, &k)))
        }
        Task::SamuelSlope { candidates } => {
            let a = job.local_ring()?;
            let seqs = candidates.iter().map(|c| job.sequence(c)).collect::<Result<Vec<_>, _>>()?;
            let r = samuel_slope(&a, &seqs, &NubarStrategy::Auto(None), &s.opts)?;
            Ok(Report::Slope(SamuelSlopeJson::new(ring, &r)))
        }
        Task::Slope { presentation, samuel } => {
            let (poly, split) = job.presentation(presentation)?;
            let p = ring.field().characteristic();
            let mut pres = build_multi(std::slice::from_ref(&poly), &split, p)?;
            if let Some(gens) = job.elimination(presentation)? {
                pres = pres.with_elimination(gens);
            }
            let report = clean(&pres, &job.point, s.max_rounds)?;
            let sam = if *samuel {
                let a = LocalRingPresentation::new(ring.clone(), vec![poly], job.point.clone())?;
                Some(SamuelSlopeJson::new(ring, &samuel_slope(&a, &[], &NubarStrategy::Auto(None), &s.opts)?))
            } else {
                None
            };
            Ok(Report::Presentation(PresentationJson::new(ring, presentation, &report, sam)))
        }
        Task::CheckTheorems { presentation } => {
            let (poly, split) = job.presentation(presentation)?;
            let a = LocalRingPresentation::new(ring.clone(), vec![poly.clone()], job.point.clone())?;
            let c = cross_check_theorems(&a, &Germ { poly, split }, &job.point, &s.opts, s.max_rounds)?;
            Ok(Report::Theorems(TheoremJson::new(ring, presentation, &c)))
        }
    }
}

pub fn render(r: &Report) -> String {
    match r {
        Report::Nubar(n) => format!("nubar_{}({}) = {} [{}, {}]", n.ideal, n.f, n.value, n.status, n.source),
        Report::Kernel(k) => format!(
            "ker(lambda): r = {}, t = {}, {} via {}, basis [{}]",
            k.r,
            k.t,
            k.class,
            k.method,
            k.basis.join(", ")
        ),
        Report::Slope(s) => format!(
            "Samuel slope {} {} (witness [{}], {} sequences tried)",
            if s.exact { "=" } else { ">=" },
            s.lower_bound,
            s.witness_sequence.join(", "),
            s.sequences_tried
        ),
        Report::Presentation(p) => {
            let mut out = format!(
                "{}: H-ord = {}, elimination order = {}, slope = {}, case {}",
                p.presentation, p.h_ord, p.elim_ord, p.slope, p.case
            );
            if let Some(f) = &p.flag {
                out.push_str(&format!(" ({f})"));
            }
            for t in &p.translations {
                out.push_str(&format!("\n  translated {} -> {} + ({})", t.var, t.var, t.shift));
            }
            if let Some(s) = &p.samuel_slope {
                out.push_str(&format!("\n  Samuel slope {} {}", if s.exact { "=" } else { ">=" }, s.lower_bound));
            }
            out
        }
        Report::Theorems(t) => format!(
            "{}: {} theorem {}: {}",
            t.presentation,
            t.theorem,
            if t.pass { "holds" } else { "FAILS" },
            t.detail
        ),
    }
}
