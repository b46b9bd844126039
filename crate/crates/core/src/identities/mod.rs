//! Registry and verification of the identities linking the squared-basis
//! sums, Heun and confluent Heun functions, `₂F₁`, Legendre polynomials and
//! the Kantorovich entropies.
//!
//! Every identity can be checked in one or more modes:
//!
//! - [`CheckMode::ExactPoly`]: both sides are built as exact polynomials (or
//!   exact truncated Taylor series) and compared coefficientwise;
//! - [`CheckMode::OdeResidual`]: one side is certified to solve the relevant
//!   differential equation with the right normalization, by an exact residual;
//! - [`CheckMode::NumericGrid`]: floating-point evaluation of both sides on a
//!   grid, compared by relative error.

mod checks;
mod registry;
mod taylor;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, int, parse_rational, Rational};

pub use checks::{derivative_ladder_check, i314_rhs, LadderFamily, FD_STEP, FD_TOL};
pub use registry::{registry, RegistryEntry};
pub use taylor::kn_taylor;

macro_rules! identity_ids {
    ($($id:ident),* $(,)?) => {
        /// One identity of the registry.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum IdentityId {
            $($id),*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$id),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(IdentityId::$id => stringify!($id)),*
                }
            }
        }
    };
}

identity_ids!(
    I22, I31, I32, I33, I34, I35, I36, I37, I38, I39, I311_312, I313, I314, I42, I43, I45, I46,
    I47, I48, I49, I410,
);

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown identity `{s}`")))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// The mode family, without grid data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeKind {
    Exact,
    Ode,
    Numeric,
}

impl ModeKind {
    pub fn name(self) -> &'static str {
        match self {
            ModeKind::Exact => "exact",
            ModeKind::Ode => "ode",
            ModeKind::Numeric => "numeric",
        }
    }
}

impl FromStr for ModeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ModeKind::Exact),
            "ode" => Ok(ModeKind::Ode),
            "numeric" => Ok(ModeKind::Numeric),
            _ => Err(Error::InvalidParams(format!("unknown mode `{s}`"))),
        }
    }
}

impl Serialize for ModeKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckMode {
    ExactPoly,
    OdeResidual,
    NumericGrid { grid: Vec<f64>, tol: f64 },
}

impl CheckMode {
    pub fn kind(&self) -> ModeKind {
        match self {
            CheckMode::ExactPoly => ModeKind::Exact,
            CheckMode::OdeResidual => ModeKind::Ode,
            CheckMode::NumericGrid { .. } => ModeKind::Numeric,
        }
    }

    /// The default mode of a kind for one identity: the registry grid and
    /// tolerance for numeric checks.
    pub fn default_for(id: IdentityId, kind: ModeKind, params: &Params) -> CheckMode {
        match kind {
            ModeKind::Exact => CheckMode::ExactPoly,
            ModeKind::Ode => CheckMode::OdeResidual,
            ModeKind::Numeric => CheckMode::NumericGrid {
                grid: checks::default_grid(id, params),
                tol: checks::default_tol(id),
            },
        }
    }
}

/// Named rational parameters of a check (`n`, `i`, `q`, `j`, `p`, `alpha`, …).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Params(BTreeMap<String, Rational>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: Rational) -> Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn with_int(self, key: &str, value: i64) -> Self {
        self.with(key, int(value))
    }

    pub fn insert(&mut self, key: &str, value: Rational) {
        self.0.insert(key.to_string(), value);
    }

    pub fn remove(&mut self, key: &str) -> Option<Rational> {
        self.0.remove(key)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn get(&self, key: &str) -> Result<&Rational> {
        self.0
            .get(key)
            .ok_or_else(|| Error::MissingParam(key.to_string()))
    }

    pub fn get_opt(&self, key: &str) -> Option<&Rational> {
        self.0.get(key)
    }

    /// A nonnegative integer parameter.
    pub fn get_u32(&self, key: &str) -> Result<u32> {
        let v = self.get(key)?;
        if !v.is_integer() || v < &int(0) || v > &int(u32::MAX as i64) {
            return Err(Error::InvalidParams(format!(
                "`{key}` must be a nonnegative integer, got {}",
                format_rational(v)
            )));
        }
        Ok(v.to_integer().try_into().expect("range checked"))
    }

    /// Parses `key=value` pairs separated by commas or whitespace.
    pub fn parse(s: &str) -> Result<Params> {
        let mut p = Params::new();
        for item in s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got `{item}`")))?;
            p.insert(k.trim(), parse_rational(v.trim())?);
        }
        Ok(p)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{k}={}", format_rational(v))?;
        }
        Ok(())
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, &format_rational(v))?;
        }
        m.end()
    }
}

/// One comparison inside a check, with its own tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RouteReport {
    pub name: String,
    pub max_err: f64,
    pub tol: f64,
    pub points: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: IdentityId,
    pub params: Params,
    pub mode: CheckMode,
    /// Largest error over all routes: relative error for numeric routes, the
    /// largest absolute residual coefficient for exact ones (0 on success).
    pub max_err: f64,
    pub points_checked: usize,
    pub pass: bool,
    pub routes: Vec<RouteReport>,
}

impl VerificationReport {
    fn from_routes(
        id: IdentityId,
        params: Params,
        mode: CheckMode,
        routes: Vec<RouteReport>,
    ) -> Self {
        let max_err = routes.iter().map(|r| r.max_err).fold(0.0, nan_max);
        VerificationReport {
            id,
            params,
            mode,
            max_err,
            points_checked: routes.iter().map(|r| r.points).sum(),
            pass: !routes.is_empty() && routes.iter().all(|r| r.pass),
            routes,
        }
    }
}

pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Deliberate defects used to confirm that checks can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Negates the last term of the sum in [`i314_rhs`].
    FlipI314Sign,
    /// Adds `x` to every `F_n` used by the checks.
    PerturbFn,
}

impl IdentityId {
    /// Modes that make sense for this identity.
    pub fn admissible_modes(self) -> &'static [ModeKind] {
        use ModeKind::*;
        match self {
            IdentityId::I22 => &[Exact, Numeric],
            IdentityId::I31 | IdentityId::I32 | IdentityId::I34 | IdentityId::I311_312 => {
                &[Numeric]
            }
            IdentityId::I42 | IdentityId::I43 => &[Numeric],
            IdentityId::I33 | IdentityId::I314 => &[Exact, Ode, Numeric],
            IdentityId::I35 => &[Exact, Ode, Numeric],
            IdentityId::I36 | IdentityId::I37 | IdentityId::I38 | IdentityId::I39 => {
                &[Exact, Numeric]
            }
            IdentityId::I313 => &[Exact, Numeric],
            IdentityId::I45 => &[Exact, Ode, Numeric],
            IdentityId::I46 | IdentityId::I47 | IdentityId::I48 => &[Exact, Numeric],
            IdentityId::I49 => &[Exact],
            IdentityId::I410 => &[Ode],
        }
    }

    /// Whether the check builds `F_n` (affected by [`Mutation::PerturbFn`]).
    pub fn uses_fn(self) -> bool {
        matches!(
            self,
            IdentityId::I33
                | IdentityId::I35
                | IdentityId::I36
                | IdentityId::I37
                | IdentityId::I39
                | IdentityId::I313
        )
    }
}

/// Verifies one identity for one parameter set.
pub fn verify(id: IdentityId, params: &Params, mode: &CheckMode) -> Result<VerificationReport> {
    verify_with(id, params, mode, Mutation::None)
}

/// [`verify`] with a deliberate defect injected.
pub fn verify_with(
    id: IdentityId,
    params: &Params,
    mode: &CheckMode,
    mutation: Mutation,
) -> Result<VerificationReport> {
    if !id.admissible_modes().contains(&mode.kind()) {
        return Err(Error::InadmissibleMode {
            id: id.name().to_string(),
            mode: mode.kind().name().to_string(),
        });
    }
    let routes = checks::run(id, params, mode, mutation)?;
    Ok(VerificationReport::from_routes(
        id,
        params.clone(),
        mode.clone(),
        routes,
    ))
}

/// Parameter sets swept by [`verify_all`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParamRanges {
    /// Degrees `n` for the polynomial identities; `i` runs over `0..=n`.
    pub n: Vec<u32>,
    /// Accessory parameters `q` for the `₂F₁` representations.
    pub q: Vec<Rational>,
    /// `(α, β, γ)` for the Heun derivative formulas.
    pub heun_triples: Vec<(Rational, Rational, Rational)>,
    /// `(p, γ, α)` for the confluent Heun derivative formulas.
    pub confluent_triples: Vec<(Rational, Rational, Rational)>,
    /// `n` for the identities involving `K_n`.
    pub kn: Vec<u32>,
    /// Derivative orders `j` for `K_n^{(j)}`.
    pub j: Vec<u32>,
}

impl ParamRanges {
    pub fn empty() -> Self {
        ParamRanges {
            n: vec![],
            q: vec![],
            heun_triples: vec![],
            confluent_triples: vec![],
            kn: vec![],
            j: vec![],
        }
    }

    /// Parameter sets for one identity, in a deterministic order.
    pub fn params_for(&self, id: IdentityId) -> Vec<Params> {
        let n_from = |lo: u32| -> Vec<Params> {
            self.n
                .iter()
                .filter(|&&n| n >= lo)
                .map(|&n| Params::new().with_int("n", n as i64))
                .collect()
        };
        let kn_j = |j_max: u32| -> Vec<Params> {
            self.kn
                .iter()
                .flat_map(|&n| {
                    self.j.iter().filter(move |&&j| j <= j_max).map(move |&j| {
                        Params::new()
                            .with_int("n", n as i64)
                            .with_int("j", j as i64)
                    })
                })
                .collect()
        };
        match id {
            IdentityId::I22 => n_from(2),
            IdentityId::I31 | IdentityId::I32 => self
                .q
                .iter()
                .map(|q| Params::new().with("q", q.clone()))
                .collect(),
            IdentityId::I33
            | IdentityId::I36
            | IdentityId::I37
            | IdentityId::I38
            | IdentityId::I39 => n_from(0),
            IdentityId::I34 | IdentityId::I35 | IdentityId::I313 => n_from(1),
            IdentityId::I314 => self
                .n
                .iter()
                .flat_map(|&n| {
                    (0..=n).map(move |i| {
                        Params::new()
                            .with_int("n", n as i64)
                            .with_int("i", i as i64)
                    })
                })
                .collect(),
            IdentityId::I311_312 => self
                .heun_triples
                .iter()
                .map(|(a, b, g)| {
                    Params::new()
                        .with("alpha", a.clone())
                        .with("beta", b.clone())
                        .with("gamma", g.clone())
                })
                .collect(),
            IdentityId::I42 | IdentityId::I43 => self
                .confluent_triples
                .iter()
                .map(|(p, g, a)| {
                    Params::new()
                        .with("p", p.clone())
                        .with("gamma", g.clone())
                        .with("alpha", a.clone())
                })
                .collect(),
            IdentityId::I45 | IdentityId::I46 | IdentityId::I47 => self
                .kn
                .iter()
                .map(|&n| Params::new().with_int("n", n as i64))
                .collect(),
            IdentityId::I48 | IdentityId::I410 => kn_j(taylor::MAX_J),
            IdentityId::I49 => kn_j(u32::MAX),
        }
    }
}

impl Default for ParamRanges {
    /// `n <= 8`, `q ∈ {±1/2, ±1, 3/2}`, `K_n` for `n ∈ {1, 2, 3}` with
    /// `j <= 8`, and a handful of derivative-formula parameter triples.
    fn default() -> Self {
        use crate::exactalg::rat;
        let mut heun_triples: Vec<_> = (1..=4).map(|n| (int(-2 * n), int(1), int(1))).collect();
        heun_triples.extend([
            (int(2), int(1), int(1)),
            (rat(1, 2), int(1), int(1)),
            (rat(3, 2), rat(1, 2), int(2)),
            (rat(-1, 2), rat(5, 2), rat(3, 2)),
        ]);
        let mut confluent_triples: Vec<_> = (1..=3).map(|n| (int(n), int(1), rat(1, 2))).collect();
        confluent_triples.extend([(int(1), int(2), rat(3, 2)), (rat(1, 2), rat(3, 2), int(1))]);
        ParamRanges {
            n: (0..=8).collect(),
            q: vec![rat(-1, 2), rat(1, 2), int(-1), int(1), rat(3, 2)],
            heun_triples,
            confluent_triples,
            kn: vec![1, 2, 3],
            j: (0..=8).collect(),
        }
    }
}

/// Runs every identity over the ranges, in every admissible mode with its
/// default grid and tolerance. Reports are ordered by identity, then
/// parameters, then mode.
pub fn verify_all(ranges: &ParamRanges) -> Vec<VerificationReport> {
    verify_all_with(ranges, Mutation::None)
}

/// [`verify_all`] with a deliberate defect injected. Checks that error out
/// are reported as failures.
pub fn verify_all_with(ranges: &ParamRanges, mutation: Mutation) -> Vec<VerificationReport> {
    let jobs: Vec<(IdentityId, Params)> = IdentityId::ALL
        .iter()
        .flat_map(|&id| ranges.params_for(id).into_iter().map(move |p| (id, p)))
        .collect();
    let run = |(id, params): &(IdentityId, Params)| -> Vec<VerificationReport> {
        id.admissible_modes()
            .iter()
            .map(|&kind| {
                let mode = CheckMode::default_for(*id, kind, params);
                verify_with(*id, params, &mode, mutation).unwrap_or_else(|e| {
                    let route = RouteReport {
                        name: format!("error: {e}"),
                        max_err: f64::NAN,
                        tol: 0.0,
                        points: 0,
                        pass: false,
                    };
                    VerificationReport::from_routes(*id, params.clone(), mode, vec![route])
                })
            })
            .collect()
    };
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len().max(1));
    let chunk = jobs.len().div_ceil(workers.max(1)).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().flat_map(run).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification worker panicked"))
            .collect()
    })
}
