//! `gamma(G_{n,m})` with a certificate of how it was established.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::closed::gamma_closed_form;
use super::construct::{construct_dominating_set, greedy_dominating_set};
use super::transfer::{run_pipeline, PipelineOptions};
use crate::grid::{
    gamma_bruteforce_with_limit, gamma_profile_dp_with_limit, GridDims, Vertex, VertexSet,
};
use crate::grid::{DEFAULT_BRUTE_LIMIT, DEFAULT_PROFILE_WIDTH};
use crate::store::MatrixStore;
use crate::{Error, Result};

/// Largest grid whose witness [`GammaCertificate::validate`] will check.
pub const MAX_WITNESS_CELLS: usize = 1 << 26;

/// How a bound was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Method {
    Brute,
    ProfileDp,
    ClosedForm,
    TransferLower(u32),
    Construction,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Brute => f.write_str("brute"),
            Method::ProfileDp => f.write_str("profile-dp"),
            Method::ClosedForm => f.write_str("closed-form"),
            Method::TransferLower(k) => write!(f, "transfer-lower({k})"),
            Method::Construction => f.write_str("construction"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "brute" => Method::Brute,
            "profile-dp" => Method::ProfileDp,
            "closed-form" => Method::ClosedForm,
            "construction" => Method::Construction,
            _ => {
                let k = s
                    .strip_prefix("transfer-lower(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::input(format!("unknown method {s:?}")))?;
                Method::TransferLower(k)
            }
        })
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaCertificate {
    #[serde(flatten)]
    pub dims: GridDims,
    pub lower: i64,
    pub upper: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<i64>,
    pub methods: Vec<Method>,
    /// A dominating set of size `upper`, as `[i, j]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_star: Option<u32>,
    /// Period and constant of the shift, when the lower bound used one with
    /// period above one (`B` is then scaled by the period).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<[i64; 2]>,
}

impl GammaCertificate {
    fn new(dims: GridDims) -> Self {
        // Loss is never negative, so gamma >= ceil(nm/5); the whole grid
        // dominates itself.
        let cells = dims.len() as i64;
        GammaCertificate {
            dims,
            lower: (cells + 4) / 5,
            upper: cells,
            exact: None,
            methods: Vec::new(),
            witness: None,
            k: None,
            b: None,
            p_star: None,
            shift: None,
        }
    }

    fn raise(&mut self, lower: i64, method: Method) {
        self.lower = self.lower.max(lower);
        self.note(method);
    }

    fn lower_to(&mut self, set: &VertexSet, method: Method, witness_limit: usize) {
        let size = set.len() as i64;
        if size < self.upper || (size == self.upper && self.witness.is_none()) {
            self.upper = size;
            self.witness =
                (set.len() <= witness_limit).then(|| set.iter().map(|v| [v.i, v.j]).collect());
        }
        self.note(method);
    }

    fn pin(&mut self, value: i64, method: Method) {
        self.lower = self.lower.max(value);
        if value < self.upper {
            self.upper = value;
            self.witness = None;
        }
        self.note(method);
    }

    fn note(&mut self, method: Method) {
        if !self.methods.contains(&method) {
            self.methods.push(method);
        }
    }

    fn seal(mut self) -> Result<Self> {
        if self.lower > self.upper {
            return Err(Error::Inconsistent {
                n: self.dims.n,
                m: self.dims.m,
                lower: self.lower,
                upper: self.upper,
            });
        }
        self.exact = (self.lower == self.upper).then_some(self.lower);
        Ok(self)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn witness_set(&self) -> Result<Option<VertexSet>> {
        self.witness
            .as_ref()
            .map(|w| VertexSet::from_vertices(self.dims, w.iter().map(|&[i, j]| Vertex::new(i, j))))
            .transpose()
    }

    /// Checks the internal invariants: ordered bounds, `exact` exactly when
    /// they meet, and a dominating witness of size `upper`.
    pub fn validate(&self) -> Result<()> {
        if self.lower > self.upper {
            return Err(Error::input(format!(
                "lower {} above upper {}",
                self.lower, self.upper
            )));
        }
        let cells = self.dims.len() as i64;
        if self.lower < 1 || self.upper > cells {
            return Err(Error::input(format!(
                "[{}, {}] is outside [1, {cells}]",
                self.lower, self.upper
            )));
        }
        let meets = self.lower == self.upper;
        if self.exact.is_some() != meets || self.exact.is_some_and(|e| e != self.lower) {
            return Err(Error::input(
                "exact must be present iff lower = upper, and equal to them",
            ));
        }
        if let Some(w) = &self.witness {
            if w.len() as i64 != self.upper {
                return Err(Error::input(format!(
                    "witness lists {} vertices, upper is {}",
                    w.len(),
                    self.upper
                )));
            }
            if self.dims.len() > MAX_WITNESS_CELLS {
                return Err(Error::Size {
                    what: "witness grid cells",
                    actual: self.dims.len(),
                    limit: MAX_WITNESS_CELLS,
                });
            }
        }
        if let Some(w) = self.witness_set()? {
            if !w.is_dominating() || w.len() as i64 != self.upper {
                return Err(Error::input(format!(
                    "witness of size {} does not certify {}",
                    w.len(),
                    self.upper
                )));
            }
        }
        Ok(())
    }
}

/// What to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Strongest cheap evidence first: brute force, profile DP, closed form.
    #[default]
    Auto,
    Brute,
    Profile,
    ClosedForm,
    /// Transfer lower bound against the constructive upper bound only.
    Sandwich,
}

#[derive(Clone, Debug)]
pub struct ResolveOptions {
    pub strategy: Strategy,
    pub brute_limit: usize,
    pub profile_width: usize,
    /// Width for the transfer lower bound. With [`Strategy::Auto`] it adds a
    /// sandwich check on top of the exact value.
    pub k: Option<u32>,
    pub pipeline: PipelineOptions,
    pub store: MatrixStore,
    /// Witnesses larger than this are left out of the certificate.
    pub witness_limit: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions {
            strategy: Strategy::Auto,
            brute_limit: DEFAULT_BRUTE_LIMIT,
            profile_width: DEFAULT_PROFILE_WIDTH,
            k: None,
            pipeline: PipelineOptions::default(),
            store: MatrixStore::ephemeral(),
            witness_limit: 2048,
        }
    }
}

/// Default width for [`Strategy::Sandwich`] without an explicit `k`.
pub const DEFAULT_SANDWICH_K: u32 = 3;

/// Certified `gamma(G_{n,m})`. Returns an interval when no method pins the
/// value; errors when two methods contradict each other or a forced method
/// does not apply.
pub fn resolve_gamma(dims: GridDims, options: &ResolveOptions) -> Result<GammaCertificate> {
    let mut cert = GammaCertificate::new(dims);
    let limit = options.witness_limit;
    match options.strategy {
        Strategy::Brute => brute(&mut cert, options)?,
        Strategy::Profile => profile(&mut cert, options)?,
        Strategy::ClosedForm => closed(&mut cert)?,
        Strategy::Sandwich => {
            sandwich(&mut cert, options, options.k.unwrap_or(DEFAULT_SANDWICH_K))?;
        }
        Strategy::Auto => {
            let narrow = dims.n.min(dims.m) as usize;
            if dims.len() <= options.brute_limit {
                brute(&mut cert, options)?;
            } else if narrow <= options.profile_width {
                profile(&mut cert, options)?;
            } else {
                closed(&mut cert)?;
            }
            if cert.witness.is_none() && narrow >= 8 {
                cert.lower_to(
                    &construct_dominating_set(dims)?,
                    Method::Construction,
                    limit,
                );
            }
            if let Some(k) = options.k {
                sandwich(&mut cert, options, k)?;
            }
        }
    }
    cert.seal()
}

fn brute(cert: &mut GammaCertificate, options: &ResolveOptions) -> Result<()> {
    let (value, set) = gamma_bruteforce_with_limit(cert.dims, options.brute_limit)?;
    cert.pin(value.get() as i64, Method::Brute);
    cert.lower_to(&set, Method::Brute, options.witness_limit);
    Ok(())
}

fn profile(cert: &mut GammaCertificate, options: &ResolveOptions) -> Result<()> {
    let value = gamma_profile_dp_with_limit(cert.dims, options.profile_width)?;
    cert.pin(value.get() as i64, Method::ProfileDp);
    Ok(())
}

fn closed(cert: &mut GammaCertificate) -> Result<()> {
    let value = gamma_closed_form(cert.dims)
        .ok_or_else(|| Error::input(format!("no closed form for {}", cert.dims)))?;
    cert.pin(value as i64, Method::ClosedForm);
    Ok(())
}

fn sandwich(cert: &mut GammaCertificate, options: &ResolveOptions, k: u32) -> Result<()> {
    let dims = cert.dims;
    let summary = run_pipeline(k, &options.store, options.pipeline, &mut |_| {})?;
    let report = summary.report(dims)?;
    if report.bound_gamma > cert.upper {
        return Err(Error::Inconsistent {
            n: dims.n,
            m: dims.m,
            lower: report.bound_gamma,
            upper: cert.upper,
        });
    }
    cert.raise(report.bound_gamma, Method::TransferLower(k));
    cert.k = Some(k);
    cert.b = Some(report.b);
    cert.p_star = Some(report.p_star);
    if report.period != 1 {
        cert.shift = Some([report.period as i64, report.shift_constant]);
    }
    let set = if dims.n.min(dims.m) >= 8 {
        construct_dominating_set(dims)?
    } else {
        greedy_dominating_set(dims)
    };
    if (set.len() as i64) < cert.lower {
        return Err(Error::Inconsistent {
            n: dims.n,
            m: dims.m,
            lower: cert.lower,
            upper: set.len() as i64,
        });
    }
    cert.lower_to(&set, Method::Construction, options.witness_limit);
    Ok(())
}
