//! Fully resolved run settings and their key=value manifest.

use std::path::PathBuf;

use hjcouple::coupling::{RegularityParams, FLAT_FRACTION};
use hjcouple::error::{Error, Result};
use hjcouple::experiment::{Experiment, SchemeKind};
use hjcouple::problems::ProblemSpec;

/// Every knob of a single run, with problem defaults already filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub scheme: SchemeKind,
    pub domain: (f64, f64),
    pub m: usize,
    pub nu: f64,
    pub t_final: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub snapshots: Vec<usize>,
    pub out: PathBuf,
}

/// Command-line values before defaults are applied.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub domain: Option<(f64, f64)>,
    pub m: Option<usize>,
    pub nu: Option<f64>,
    pub t_final: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub snapshots: Option<Vec<usize>>,
}

impl RunConfig {
    pub fn resolve(problem: &str, scheme: SchemeKind, o: &Overrides, out: PathBuf) -> Result<Self> {
        let spec = ProblemSpec::named(problem)?;
        let t_final = o.t_final.unwrap_or(spec.t_final);
        let epsilon = o.epsilon.unwrap_or(hjcouple::coupling::DEFAULT_EPSILON);
        let delta = o.delta.unwrap_or(spec.slope_bound_until(t_final) + epsilon);
        let mut cfg = Self {
            problem: spec.name.clone(),
            scheme,
            domain: o.domain.unwrap_or(spec.domain),
            m: o.m.unwrap_or(spec.ladder[spec.ladder.len().min(3) - 1]),
            nu: o.nu.unwrap_or(spec.nu),
            t_final,
            delta,
            epsilon,
            snapshots: Vec::new(),
            out,
        };
        let n = cfg.experiment()?.time()?.n_steps();
        cfg.snapshots = o.snapshots.clone().unwrap_or_else(|| vec![0, n]);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::InvalidParameter(format!("nu must lie in (0, 1], got {}", self.nu)));
        }
        let n = self.experiment()?.time()?.n_steps();
        if let Some(&k) = self.snapshots.iter().find(|&&k| k > n) {
            return Err(Error::InvalidParameter(format!("snapshot step {k} exceeds the {n} steps of this run")));
        }
        Ok(())
    }

    pub fn experiment(&self) -> Result<Experiment> {
        let mut problem = ProblemSpec::named(&self.problem)?;
        problem.domain = self.domain;
        let mut exp = Experiment::new(problem, self.scheme, self.m)?;
        let slope = exp.problem.slope_bound_until(self.t_final);
        exp.nu = self.nu;
        exp.t_final = self.t_final;
        exp.params = RegularityParams::new(self.delta, self.epsilon, FLAT_FRACTION * slope)?;
        exp.snapshots = self.snapshots.clone();
        exp.grid()?;
        Ok(exp)
    }

    pub fn to_manifest(&self) -> String {
        let steps: Vec<String> = self.snapshots.iter().map(usize::to_string).collect();
        let mut s = String::new();
        let mut put = |k: &str, v: String| s.push_str(&format!("{k}={v}\n"));
        put("problem", self.problem.clone());
        put("scheme", self.scheme.to_string());
        put("a", self.domain.0.to_string());
        put("b", self.domain.1.to_string());
        put("m", self.m.to_string());
        put("nu", self.nu.to_string());
        put("T", self.t_final.to_string());
        put("delta", self.delta.to_string());
        put("epsilon", self.epsilon.to_string());
        put("snapshots", steps.join(","));
        put("out", self.out.display().to_string());
        s
    }

    /// Parses a manifest; keys that describe derived quantities are ignored.
    pub fn from_manifest(text: &str) -> Result<Self> {
        let mut pairs = std::collections::HashMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("manifest line without `=`: {line}")))?;
            pairs.insert(k.trim(), v.trim());
        }
        let get = |k: &str| pairs.get(k).copied().ok_or_else(|| Error::InvalidParameter(format!("manifest lacks `{k}`")));
        let num = |k: &str| -> Result<f64> {
            get(k)?.parse().map_err(|_| Error::InvalidParameter(format!("manifest value of `{k}` is not a number")))
        };
        let snapshots = parse_list(get("snapshots")?)?;
        Ok(Self {
            problem: get("problem")?.to_string(),
            scheme: get("scheme")?.parse()?,
            domain: (num("a")?, num("b")?),
            m: num("m")? as usize,
            nu: num("nu")?,
            t_final: num("T")?,
            delta: num("delta")?,
            epsilon: num("epsilon")?,
            snapshots,
            out: PathBuf::from(get("out")?),
        })
    }
}

/// Comma-separated unsigned integers; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::InvalidParameter(format!("`{t}` is not a nonnegative integer"))))
        .collect()
}

/// A preset name (`ex1`..`ex4`) or a comma-separated list of cell counts.
pub fn parse_ladder(s: &str) -> Result<Vec<usize>> {
    if let Some(l) = hjcouple::experiment::ladder_preset(s) {
        return Ok(l);
    }
    let l = parse_list(s)?;
    if l.is_empty() {
        return Err(Error::InvalidParameter("empty ladder".into()));
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips() {
        let o = Overrides { delta: Some(f64::INFINITY), snapshots: Some(vec![3, 7]), ..Default::default() };
        let cfg = RunConfig::resolve("hj-abs", SchemeKind::Coupled, &o, "out dir".into()).unwrap();
        assert_eq!(RunConfig::from_manifest(&cfg.to_manifest()).unwrap(), cfg);
    }

    #[test]
    fn defaults_are_written_out() {
        let cfg = RunConfig::resolve("adv-smooth", SchemeKind::Sl, &Overrides::default(), "o".into()).unwrap();
        let text = cfg.to_manifest();
        assert!(text.contains("m=79\n") && text.contains("nu=0.9\n") && text.contains("T=2\n"));
        assert!(text.contains("snapshots=0,"));
    }

    #[test]
    fn bad_settings_are_rejected() {
        let bad_nu = Overrides { nu: Some(1.5), ..Default::default() };
        assert!(RunConfig::resolve("adv-smooth", SchemeKind::Ub, &bad_nu, "o".into()).is_err());
        let late = Overrides { snapshots: Some(vec![10_000]), ..Default::default() };
        assert!(RunConfig::resolve("adv-smooth", SchemeKind::Ub, &late, "o".into()).is_err());
        assert!(parse_ladder("19,x").is_err());
        assert!(parse_ladder("").is_err());
        assert_eq!(parse_ladder("ex1").unwrap()[0], 19);
    }
}
