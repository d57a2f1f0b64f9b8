//! Job files: one ring, named objects over it, and a list of tasks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use slopelab_core::arith::{parse_rational, Field};
use slopelab_core::groebner::IdealPresentation;
use slopelab_core::newton::MonomialValuation;
use slopelab_core::poly::{Polynomial, Ring, VariableSplit};
use slopelab_core::samuel::{
    CertifiedValuation, KernelMethod, LocalRingPresentation, PointSpec, ValuationCertificate,
};

use crate::report::Report;
use crate::CliError;

pub const JOB_SCHEMA: &str = "slopelab-job/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDecl {
    pub vars: Vec<String>,
    #[serde(default)]
    pub char: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationDecl {
    pub weights: Vec<String>,
    pub ideal_value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationDecl {
    pub var: String,
    pub shift: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDecl {
    pub valuations: Vec<ValuationDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub translations: Vec<TranslationDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedDecl {
    pub poly: String,
    pub weight: u32,
}

/// A hypersurface monic in its fiber variables, with an optional explicit
/// generating set for its elimination algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDecl {
    pub poly: String,
    pub fiber: Vec<String>,
    #[serde(default)]
    pub elimination: Option<Vec<WeightedDecl>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    Auto,
    Monomial,
    Certificate,
    Limit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Nubar {
        f: String,
        #[serde(default)]
        ideal: Option<String>,
        #[serde(default)]
        strategy: Option<StrategyName>,
        #[serde(default)]
        certificate: Option<String>,
    },
    Kernel {
        #[serde(default)]
        method: Option<KernelMethod>,
    },
    SamuelSlope {
        #[serde(default)]
        candidates: Vec<String>,
    },
    Slope {
        presentation: String,
        #[serde(default)]
        samuel: bool,
    },
    CheckTheorems {
        presentation: String,
    },
}

impl Task {
    pub fn op(&self) -> &'static str {
        match self {
            Task::Nubar { .. } => "nubar",
            Task::Kernel { .. } => "kernel",
            Task::SamuelSlope { .. } => "samuel-slope",
            Task::Slope { .. } => "slope",
            Task::CheckTheorems { .. } => "check-theorems",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub schema: String,
    pub ring: RingDecl,
    /// Generators of `J`, with `A = k[x]/J` localized at `point`.
    #[serde(default)]
    pub defining: Vec<String>,
    /// Variables generating the point's prime; the origin when absent.
    #[serde(default)]
    pub point: Option<Vec<String>>,
    #[serde(default)]
    pub polynomials: BTreeMap<String, String>,
    #[serde(default)]
    pub ideals: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub certificates: BTreeMap<String, CertificateDecl>,
    /// Candidate λ-sequences.
    #[serde(default)]
    pub sequences: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub presentations: BTreeMap<String, PresentationDecl>,
    #[serde(default)]
    pub tasks: Vec<Task>,
    /// Expected reports, compared in order against those the run produces.
    #[serde(default)]
    pub expect: Vec<Report>,
}

/// A job with every name resolved against its ring.
pub struct Job {
    pub file: JobFile,
    pub ring: Ring,
    pub point: PointSpec,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl Job {
    pub fn parse(text: &str) -> Result<Job, CliError> {
        let file: JobFile = serde_json::from_str(text).map_err(|e| invalid(format!("job file: {e}")))?;
        if file.schema != JOB_SCHEMA {
            return Err(invalid(format!("unsupported schema {:?}, expected {JOB_SCHEMA:?}", file.schema)));
        }
        let field = Field::from_characteristic(file.ring.char)
            .ok_or_else(|| invalid(format!("characteristic {} is neither 0 nor prime", file.ring.char)))?;
        let ring = Ring::new(file.ring.vars.clone(), field).map_err(|e| invalid(e.to_string()))?;
        let point = match &file.point {
            None => PointSpec::Origin,
            Some(vars) => {
                let mut idx = ring.indices_of(vars).map_err(|e| invalid(e.to_string()))?;
                idx.sort_unstable();
                idx.dedup();
                if idx.len() == ring.nvars() {
                    PointSpec::Origin
                } else {
                    PointSpec::CoordinatePrime(idx)
                }
            }
        };
        let job = Job { file, ring, point };
        job.validate()?;
        Ok(job)
    }

    /// Every name a task refers to is defined and every polynomial parses.
    fn validate(&self) -> Result<(), CliError> {
        for g in &self.file.defining {
            self.poly(g)?;
        }
        for (name, text) in &self.file.polynomials {
            self.ring.parse(text).map_err(|e| invalid(format!("polynomial {name}: {e}")))?;
        }
        for name in self.file.ideals.keys() {
            self.ideal(name)?;
        }
        for name in self.file.certificates.keys() {
            self.certificate(name)?;
        }
        for name in self.file.sequences.keys() {
            self.sequence(name)?;
        }
        for name in self.file.presentations.keys() {
            self.presentation(name)?;
            self.elimination(name)?;
        }
        for task in &self.file.tasks {
            match task {
                Task::Nubar { f, ideal, certificate, .. } => {
                    self.poly(f)?;
                    if let Some(i) = ideal {
                        self.ideal(i)?;
                    }
                    if let Some(c) = certificate {
                        self.certificate(c)?;
                    }
                }
                Task::SamuelSlope { candidates } => {
                    for c in candidates {
                        self.sequence(c)?;
                    }
                }
                Task::Slope { presentation, .. } | Task::CheckTheorems { presentation } => {
                    self.presentation(presentation)?;
                }
                Task::Kernel { .. } => {}
            }
        }
        Ok(())
    }

    /// A named polynomial, or polynomial text.
    pub fn poly(&self, s: &str) -> Result<Polynomial, CliError> {
        let text = self.file.polynomials.get(s).map(String::as_str).unwrap_or(s);
        self.ring.parse(text).map_err(|e| invalid(format!("polynomial {s:?}: {e}")))
    }

    pub fn local_ring(&self) -> Result<LocalRingPresentation, CliError> {
        let gens = self.file.defining.iter().map(|g| self.poly(g)).collect::<Result<_, _>>()?;
        Ok(LocalRingPresentation::new(self.ring.clone(), gens, self.point.clone())?)
    }

    /// A named ideal; `m` names the maximal ideal of the point unless redefined.
    pub fn ideal(&self, name: &str) -> Result<IdealPresentation, CliError> {
        match self.file.ideals.get(name) {
            Some(gens) => {
                let gens = gens.iter().map(|g| self.poly(g)).collect::<Result<_, _>>()?;
                Ok(IdealPresentation::new(self.ring.field(), self.ring.nvars(), gens))
            }
            None if name == "m" => Ok(self.point.ideal(self.ring.field(), self.ring.nvars())),
            None => Err(invalid(format!("undefined ideal {name:?}"))),
        }
    }

    pub fn certificate(&self, name: &str) -> Result<ValuationCertificate, CliError> {
        let decl = self.file.certificates.get(name).ok_or_else(|| invalid(format!("undefined certificate {name:?}")))?;
        let rational = |s: &str| parse_rational(s).ok_or_else(|| invalid(format!("certificate {name}: bad rational {s:?}")));
        let mut valuations = Vec::new();
        for v in &decl.valuations {
            if v.weights.len() != self.ring.nvars() {
                return Err(invalid(format!("certificate {name}: one weight per variable")));
            }
            let weights = v.weights.iter().map(|w| rational(w)).collect::<Result<_, _>>()?;
            valuations.push(CertifiedValuation {
                valuation: MonomialValuation::new(weights),
                ideal_value: rational(&v.ideal_value)?,
            });
        }
        let mut translations = Vec::new();
        for t in &decl.translations {
            let var = self.ring.index_of(&t.var).map_err(|e| invalid(e.to_string()))?;
            translations.push((var, self.poly(&t.shift)?));
        }
        Ok(ValuationCertificate { valuations, translations })
    }

    pub fn sequence(&self, name: &str) -> Result<Vec<Polynomial>, CliError> {
        let seq = self.file.sequences.get(name).ok_or_else(|| invalid(format!("undefined sequence {name:?}")))?;
        seq.iter().map(|g| self.poly(g)).collect()
    }

    pub fn presentation(&self, name: &str) -> Result<(Polynomial, VariableSplit), CliError> {
        let decl =
            self.file.presentations.get(name).ok_or_else(|| invalid(format!("undefined presentation {name:?}")))?;
        let fiber = self.ring.indices_of(&decl.fiber).map_err(|e| invalid(e.to_string()))?;
        let split = VariableSplit::new(self.ring.nvars(), fiber).map_err(|e| invalid(e.to_string()))?;
        Ok((self.poly(&decl.poly)?, split))
    }

    /// The user-supplied elimination generators of a presentation, if any.
    pub fn elimination(&self, name: &str) -> Result<Option<Vec<(Polynomial, u32)>>, CliError> {
        let Some(list) = self.file.presentations.get(name).and_then(|d| d.elimination.as_ref()) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for w in list {
            if w.weight == 0 {
                return Err(invalid(format!("presentation {name}: elimination weights are positive")));
            }
            out.push((self.poly(&w.poly)?, w.weight));
        }
        Ok(Some(out))
    }
}
