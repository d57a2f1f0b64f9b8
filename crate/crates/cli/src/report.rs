//! Report types. Every field is a string, integer or boolean, so reports
//! re-parse exactly and serialize to canonical JSON.

use serde::{Deserialize, Serialize};
use slopelab_core::elimpres::{CheckReport, SlopeReport};
use slopelab_core::newton::NewtonPolyhedron;
use slopelab_core::poly::Ring;
use slopelab_core::samuel::{KernelReport, NubarResult, NubarSource, NubarStatus, SlopeResult};

use crate::job::CertificateDecl;

pub const REPORT_SCHEMA: &str = "slopelab-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Report {
    Nubar(NubarJson),
    Kernel(KernelJson),
    Slope(SamuelSlopeJson),
    Presentation(PresentationJson),
    Theorems(TheoremJson),
}

impl Report {
    /// False for lower bounds and approximations.
    pub fn is_exact(&self) -> bool {
        match self {
            Report::Nubar(n) => n.status == "exact",
            Report::Kernel(k) => k.class != "unknown",
            Report::Slope(s) => s.exact,
            Report::Presentation(p) => p.flag.as_deref() != Some("elimination-approximate")
                && p.samuel_slope.as_ref().is_none_or(|s| s.exact),
            Report::Theorems(t) => t.exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub schema: String,
    pub reports: Vec<Report>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NubarJson {
    pub f: String,
    pub ideal: String,
    pub value: String,
    pub status: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_lower_bound: Option<String>,
    /// `(n, ν(fⁿ))` pairs of the limit computation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<(u32, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyhedron: Option<NewtonPolyhedron>,
}

impl NubarJson {
    pub fn new(
        f: &str,
        ideal: &str,
        r: &NubarResult,
        certificate: Option<CertificateDecl>,
        polyhedron: Option<NewtonPolyhedron>,
    ) -> Self {
        NubarJson {
            f: f.to_string(),
            ideal: ideal.to_string(),
            value: r.value.to_string(),
            status: match r.status {
                NubarStatus::Exact => "exact",
                NubarStatus::LowerBound => "lower-bound",
            }
            .into(),
            source: match r.source {
                NubarSource::Monomial => "monomial",
                NubarSource::Certificate => "certificate",
                NubarSource::Limit => "limit",
            }
            .into(),
            certificate,
            limit_lower_bound: r.limit_lower_bound.as_ref().map(|v| v.to_string()),
            trace: r.trace.iter().map(|(n, v)| (*n, v.to_string())).collect(),
            polyhedron,
        }
    }
}

fn kebab<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelJson {
    pub basis: Vec<String>,
    pub r: usize,
    pub t: usize,
    pub class: String,
    pub method: String,
    pub dim: usize,
    pub embedding_dim: usize,
    pub tangent_cone_exact: bool,
}

impl KernelJson {
    pub fn new(ring: &Ring, k: &KernelReport) -> Self {
        KernelJson {
            basis: k.basis.iter().map(|g| ring.format(g)).collect(),
            r: k.r,
            t: k.t,
            class: kebab(&k.class),
            method: kebab(&k.method),
            dim: k.dim,
            embedding_dim: k.embedding_dim,
            tangent_cone_exact: k.tangent_cone_exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamuelSlopeJson {
    pub lower_bound: String,
    pub exact: bool,
    pub witness_sequence: Vec<String>,
    pub witness_values: Vec<String>,
    pub sequences_tried: usize,
    pub kernel: KernelJson,
}

impl SamuelSlopeJson {
    pub fn new(ring: &Ring, s: &SlopeResult) -> Self {
        SamuelSlopeJson {
            lower_bound: s.lower_bound.to_string(),
            exact: s.exact,
            witness_sequence: s.witness.iter().map(|g| ring.format(g)).collect(),
            witness_values: s.witness_values.iter().map(|v| v.value.to_string()).collect(),
            sequences_tried: s.sequences_tried,
            kernel: KernelJson::new(ring, &s.kernel),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberJson {
    pub var: String,
    pub degree: u32,
    pub case: String,
    /// `ν(ã_j)/j` for `j = 1..q`.
    pub orders: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationJson {
    pub var: String,
    pub shift: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub presentation: String,
    #[serde(rename = "Hord")]
    pub h_ord: String,
    pub elim_ord: String,
    pub slope: String,
    pub case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
    pub fibers: Vec<FiberJson>,
    pub translations: Vec<TranslationJson>,
    pub rounds: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samuel_slope: Option<SamuelSlopeJson>,
}

impl PresentationJson {
    pub fn new(ring: &Ring, name: &str, s: &SlopeReport, samuel: Option<SamuelSlopeJson>) -> Self {
        let var = |v: usize| ring.names()[v].clone();
        let flag = if s.degenerate {
            Some("degenerate".to_string())
        } else if s.elimination_approximate {
            Some("elimination-approximate".to_string())
        } else {
            None
        };
        PresentationJson {
            presentation: name.to_string(),
            h_ord: s.h_ord.as_ref().map_or("none".into(), |h| h.to_string()),
            elim_ord: s.elimination_order.to_string(),
            slope: s.slope.to_string(),
            case: s.case.to_string(),
            flag,
            fibers: s
                .fibers
                .iter()
                .map(|f| FiberJson {
                    var: var(f.var),
                    degree: f.degree,
                    case: f.case.to_string(),
                    orders: f.orders.iter().map(|o| o.to_string()).collect(),
                })
                .collect(),
            translations: s
                .transcript
                .iter()
                .map(|t| TranslationJson { var: var(t.var), shift: ring.format(&t.shift) })
                .collect(),
            rounds: s.rounds,
            samuel_slope: samuel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremJson {
    pub presentation: String,
    pub theorem: String,
    pub pass: bool,
    /// False when the check rests on a Samuel-slope lower bound.
    pub exact: bool,
    #[serde(rename = "Hord")]
    pub h_ord: String,
    pub ord: String,
    pub detail: String,
    pub kernel: KernelJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samuel_slope: Option<SamuelSlopeJson>,
}

impl TheoremJson {
    pub fn new(ring: &Ring, name: &str, c: &CheckReport) -> Self {
        TheoremJson {
            presentation: name.to_string(),
            theorem: kebab(&c.theorem),
            pass: c.pass,
            exact: c.samuel_slope.as_ref().is_none_or(|s| s.exact || s.lower_bound >= c.ord),
            h_ord: c.h_ord.to_string(),
            ord: c.ord.to_string(),
            detail: c.detail.clone(),
            kernel: KernelJson::new(ring, &c.kernel),
            samuel_slope: c.samuel_slope.as_ref().map(|s| SamuelSlopeJson::new(ring, s)),
        }
    }
}
