//! Command dispatch, run configuration, result caching and report rendering
//! shared by the command-line tool.

mod render;
mod store;

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::codim::{capelli_holds, cocharacter, codimension, Budget, CodimMode, IdentityMode};
use crate::error::{Error, Result};
use crate::exponent::{
    exponent_from_structure, find_lower_witness, growth_report, verify_upper, QPolySpec, UpperMode, WitnessOptions,
};
use crate::lie::{analyze, catalog, LieAlgebra, StructureOptions};

pub use render::render;
pub use store::{ResultStore, CACHE_VERSION, DEFAULT_CACHE_PATH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArithMode {
    Exact,
    Modular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    pub mode: ArithMode,
    pub prime_bits: u32,
    pub seed: u64,
    pub max_n: usize,
    pub tuple_budget: u128,
    pub jobs: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: ArithMode::Exact,
            prime_bits: 61,
            seed: 0,
            max_n: 5,
            tuple_budget: Budget::default().tuples,
            jobs: 0,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_n == 0 {
            return Err(Error::malformed("--max-n must be at least 1"));
        }
        if self.tuple_budget == 0 {
            return Err(Error::malformed("--budget must be positive"));
        }
        if !(8..=62).contains(&self.prime_bits) {
            return Err(Error::malformed("--prime-bits must lie in 8..=62"));
        }
        Ok(())
    }

    pub fn budget(&self) -> Budget {
        Budget {
            tuples: self.tuple_budget,
            ..Budget::default()
        }
    }

    pub fn codim_mode(&self) -> CodimMode {
        match self.mode {
            ArithMode::Exact => CodimMode::Exact,
            ArithMode::Modular => CodimMode::Modular {
                prime_bits: self.prime_bits,
                trials: 2,
                seed: self.seed,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Built-in algebras and their dimensions.
    Catalog,
    /// Parses the algebra and checks antisymmetry and the Jacobi identity.
    Validate,
    /// Radical, nilradical and simple components.
    Analyze,
    /// `c_n` for one degree, or for `1 ..= max_n`.
    Codim { n: Option<usize> },
    /// Cocharacter multiplicities for one degree, or for `1 ..= max_n`.
    Cocharacter { n: Option<usize> },
    /// Capelli identity of rank `rank` in degree `n`.
    Capelli {
        rank: usize,
        n: usize,
        samples: Option<u64>,
    },
    /// `d(L)`, optionally with the upper and lower checks.
    Exponent { checks: bool, samples: usize },
    /// Vanishing of the alternations over `k` disjoint `r`-sets in degree `n`
    /// (defaults `r = d + 1`, `k` = nilpotency index, `n = r k`).
    VerifyUpper {
        r: Option<usize>,
        k: Option<usize>,
        n: Option<usize>,
        full: bool,
        samples: usize,
    },
    /// Non-identity with `k` alternating `r`-sets (defaults `r = d`, `k = 1`).
    FindWitness { r: Option<usize>, k: Option<usize> },
    /// Codimension growth table up to `max_n`.
    Growth,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Catalog => "catalog",
            Command::Validate => "validate",
            Command::Analyze => "analyze",
            Command::Codim { .. } => "codim",
            Command::Cocharacter { .. } => "cocharacter",
            Command::Capelli { .. } => "capelli",
            Command::Exponent { .. } => "exponent",
            Command::VerifyUpper { .. } => "verify-upper",
            Command::FindWitness { .. } => "find-witness",
            Command::Growth => "growth",
        }
    }

    pub fn needs_algebra(&self) -> bool {
        !matches!(self, Command::Catalog)
    }
}

/// A catalog name or a path to a JSON algebra file.
pub fn load_algebra(source: &str) -> Result<LieAlgebra> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::malformed(format!("{source}: {e}")))?;
        return LieAlgebra::from_json(&text);
    }
    catalog::lookup(source)
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::MalformedInput(_) | Error::UnknownAlgebra(_) | Error::JacobiViolation(..) => 2,
        Error::HypothesisFailure(_) | Error::NotSemisimple(_) | Error::NotSplit(_) => 3,
        Error::BudgetExceeded { .. } => 4,
        Error::Invariant(_) => 5,
    }
}

/// Structured error object.
pub fn error_json(e: &Error) -> Value {
    let mut obj = json!({"kind": e.kind(), "message": e.to_string()});
    match e {
        Error::JacobiViolation(i, j, k) => obj["triple"] = json!([i, j, k]),
        Error::BudgetExceeded { what, required, budget } => {
            obj["what"] = json!(what);
            obj["required"] = json!(required.to_string());
            obj["budget"] = json!(budget.to_string());
        }
        _ => {}
    }
    json!({ "error": obj })
}

/// Result of one command: text to emit and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
    /// Problems that did not change the result, such as cache write failures.
    pub warnings: Vec<String>,
}

/// Runs one command and renders its report in the configured format.
///
/// Reports carry the configuration and the parameters; they never carry
/// timings or cache status, so equal inputs give byte-identical output.
pub fn run(command: &Command, algebra: Option<&str>, config: &RunConfig, store: &mut ResultStore) -> Outcome {
    let mut warnings = Vec::new();
    let result = config.validate().and_then(|_| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
        pool.install(|| report(command, algebra, config, store, &mut warnings))
    });
    match result.and_then(|r| render(command, &r, config.format)) {
        Ok(output) => Outcome {
            exit_code: 0,
            output,
            warnings,
        },
        Err(e) => Outcome {
            exit_code: exit_code(&e),
            output: format!("{:#}\n", error_json(&e)),
            warnings,
        },
    }
}

/// The full report as a JSON value.
pub fn report(
    command: &Command,
    algebra: Option<&str>,
    config: &RunConfig,
    store: &mut ResultStore,
    warnings: &mut Vec<String>,
) -> Result<Value> {
    let mut out = json!({
        "command": command.name(),
        "provenance": {
            "tool": "liepi",
            "version": env!("CARGO_PKG_VERSION"),
            "config": to_value(config)?,
            "parameters": to_value(command)?,
        },
    });
    if !command.needs_algebra() {
        out["result"] = catalog_listing();
        return Ok(out);
    }
    let source = algebra.ok_or_else(|| Error::malformed(format!("{} needs an algebra", command.name())))?;
    let l = load_algebra(source)?;
    let fingerprint = l.fingerprint();
    out["algebra"] = json!({"source": source, "dim": l.dim(), "fingerprint": fingerprint, "basis": l.labels()});
    let mut ctx = Ctx {
        l: &l,
        fingerprint: &fingerprint,
        config,
        budget: config.budget(),
        store,
        warnings,
    };
    out["result"] = ctx.dispatch(command)?;
    Ok(out)
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Invariant(format!("serialization: {e}")))
}

fn catalog_listing() -> Value {
    Value::Array(
        catalog::CATALOG
            .iter()
            .map(|(name, dim)| json!({"name": name, "dim": dim}))
            .collect(),
    )
}

struct Ctx<'a> {
    l: &'a LieAlgebra,
    fingerprint: &'a str,
    config: &'a RunConfig,
    budget: Budget,
    store: &'a mut ResultStore,
    warnings: &'a mut Vec<String>,
}

impl Ctx<'_> {
    fn degrees(&self, n: Option<usize>) -> Result<Vec<usize>> {
        match n {
            Some(0) => Err(Error::malformed("--n must be at least 1")),
            Some(n) => Ok(vec![n]),
            None => Ok((1..=self.config.max_n).collect()),
        }
    }

    /// Looks `operation` up in the store, computing and recording it on a miss.
    fn cached(&mut self, operation: &str, n: usize, compute: impl FnOnce(&Self) -> Result<Value>) -> Result<Value> {
        let params = json!({
            "n": n,
            "mode": to_value(&self.config.codim_mode())?,
            "exact_rank_dim": self.budget.exact_rank_dim,
        });
        let key = ResultStore::key(self.fingerprint, operation, &params);
        if let Some(v) = self.store.get(&key) {
            return Ok(v);
        }
        let v = compute(self)?;
        if let Err(e) = self.store.put(self.fingerprint, operation, params, v.clone()) {
            self.warnings.push(format!("cache write failed: {e}"));
        }
        Ok(v)
    }

    fn structure(&self) -> Result<crate::lie::StructureReport> {
        analyze(self.l, StructureOptions::default())
    }

    fn dispatch(&mut self, command: &Command) -> Result<Value> {
        let l = self.l;
        let budget = self.budget;
        let mode = self.config.codim_mode();
        match command {
            Command::Catalog => Ok(catalog_listing()),
            Command::Validate => Ok(json!({
                "valid": true,
                "dim": l.dim(),
                "abelian": l.is_abelian(),
                "algebra": serde_json::from_str::<Value>(&l.to_json()).map_err(|e| Error::Invariant(e.to_string()))?,
            })),
            Command::Analyze => to_value(&self.structure()?),
            Command::Codim { n } => {
                let mut values = serde_json::Map::new();
                let mut rows = Vec::new();
                for n in self.degrees(*n)? {
                    let row = self.cached("codim", n, |_| to_value(&codimension(l, n, mode, &budget)?))?;
                    values.insert(format!("c_{n}"), row["value"].clone());
                    rows.push(row);
                }
                Ok(json!({"codimensions": values, "rows": rows}))
            }
            Command::Cocharacter { n } => {
                let mut colengths = serde_json::Map::new();
                let mut tables = Vec::new();
                for n in self.degrees(*n)? {
                    let t = self.cached("cocharacter", n, |_| {
                        let t = cocharacter(l, n, mode, &budget)?;
                        if t.certainty == crate::codim::Certainty::Exact && !t.is_consistent() {
                            return Err(Error::Invariant(format!("cocharacter of degree {n} does not sum to c_{n}")));
                        }
                        to_value(&t)
                    })?;
                    colengths.insert(format!("l_{n}"), t["colength"].clone());
                    tables.push(t);
                }
                Ok(json!({"colengths": colengths, "tables": tables}))
            }
            Command::Capelli { rank, n, samples } => {
                let id_mode = match samples {
                    None => IdentityMode::Exhaustive,
                    Some(count) => IdentityMode::Sampled {
                        count: *count,
                        seed: self.config.seed,
                    },
                };
                to_value(&capelli_holds(l, *rank, *n, id_mode, &budget)?)
            }
            Command::Exponent { checks, samples } => {
                let rep = self.structure()?;
                let mut e = exponent_from_structure(l, &rep)?;
                if *checks {
                    let p = rep.nil_class.max(1);
                    let spec = QPolySpec::new(e.d + 1, p, (e.d + 1) * p)?;
                    let upper = UpperMode::Sampled {
                        count: *samples,
                        seed: self.config.seed,
                    };
                    e.upper_checks.push(verify_upper(l, spec, upper, &budget)?);
                    if e.d > 0 {
                        let opts = WitnessOptions {
                            max_n: self.config.max_n.max(e.d),
                        };
                        e.lower_witnesses
                            .extend(find_lower_witness(l, &rep, e.d, 1, opts, &budget)?);
                    }
                }
                let mut v = to_value(&e)?;
                v["conclusion"] = json!(exponent_conclusion(&e));
                Ok(v)
            }
            Command::VerifyUpper {
                r,
                k,
                n,
                full,
                samples,
            } => {
                let (r, k) = match (r, k) {
                    (Some(r), Some(k)) => (*r, *k),
                    _ => {
                        let rep = self.structure()?;
                        let e = exponent_from_structure(l, &rep)?;
                        (r.unwrap_or(e.d + 1), k.unwrap_or(rep.nil_class.max(1)))
                    }
                };
                let spec = QPolySpec::new(r, k, n.unwrap_or(r * k))?;
                let upper = if *full {
                    UpperMode::Full
                } else {
                    UpperMode::Sampled {
                        count: *samples,
                        seed: self.config.seed,
                    }
                };
                to_value(&verify_upper(l, spec, upper, &budget)?)
            }
            Command::FindWitness { r, k } => {
                let rep = self.structure()?;
                let r = match r {
                    Some(r) => *r,
                    None => exponent_from_structure(l, &rep)?.d,
                };
                let opts = WitnessOptions {
                    max_n: self.config.max_n,
                };
                let w = find_lower_witness(l, &rep, r, k.unwrap_or(1), opts, &budget)?;
                Ok(json!({
                    "found": w.is_some(),
                    "searched_up_to": self.config.max_n,
                    "witness": to_value(&w)?,
                }))
            }
            Command::Growth => to_value(&growth_report(l, self.config.max_n, mode, &budget)?),
        }
    }
}

fn exponent_conclusion(e: &crate::exponent::ExponentReport) -> String {
    let mut s = format!("d(L) = {}", e.d);
    for u in &e.upper_checks {
        let kind = if u.checks_run == u.total_checks { "all" } else { "a sample of" };
        s.push_str(&format!(
            "; {} {} of {} alternations over {} disjoint {}-sets in degree {} {}",
            kind,
            u.checks_run,
            u.total_checks,
            u.spec.k,
            u.spec.r,
            u.n,
            if u.passed { "vanish" } else { "do not all vanish" }
        ));
        if u.passed && u.checks_run == u.total_checks {
            s.push_str(&format!(", which bounds the exponent above by {}", e.d));
        }
    }
    for w in &e.lower_witnesses {
        s.push_str(&format!(
            "; a polynomial alternating on {} set(s) of size {} is a non-identity in degree {}",
            w.spec.k, w.spec.r, w.n
        ));
    }
    s
}
