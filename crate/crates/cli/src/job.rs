//! Job descriptions accepted from flags or from a JSON file.

use std::collections::BTreeMap;

use loopspec::{parse_word, GroupKind, GroupSpec, LassoWord, LoopspecError};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Area given to identifiers that have no entry in the area map.
pub const DEFAULT_AREA: f64 = 1.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Series,
    Mc,
    Walk,
    Holonomy,
    Master,
    Forest,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Series => "series",
            Engine::Mc => "mc",
            Engine::Walk => "walk",
            Engine::Holonomy => "holonomy",
            Engine::Master => "master",
            Engine::Forest => "forest",
        }
    }

    /// Engines working at finite `N`.
    pub fn needs_n(self) -> bool {
        !matches!(self, Engine::Master | Engine::Forest)
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

fn default_group() -> String {
    "U".to_string()
}

fn default_true() -> bool {
    true
}

/// One evaluation request. Field names match the JSON job file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub word: String,
    #[serde(default)]
    pub areas: BTreeMap<String, f64>,
    #[serde(default = "default_group")]
    pub group: String,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default)]
    pub engine: Engine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stepper: Option<String>,
    #[serde(default = "default_true")]
    pub normalized: bool,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub deterministic: bool,
}

impl JobSpec {
    /// A job with every optional field unset.
    pub fn new(word: &str, engine: Engine) -> Self {
        Self {
            word: word.to_string(),
            areas: BTreeMap::new(),
            group: default_group(),
            n: None,
            engine,
            k_max: None,
            budget: None,
            samples: None,
            seed: None,
            steps: None,
            stepper: None,
            normalized: true,
            format: OutputFormat::Json,
            deterministic: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Checks that the parameters present are exactly those the engine
    /// uses, and that the required ones are there.
    pub fn validate(&self) -> Result<(), CliError> {
        let kind: GroupKind = self.group.parse()?;
        let e = self.engine;
        let present = [
            ("k_max", self.k_max.is_some()),
            ("budget", self.budget.is_some()),
            ("samples", self.samples.is_some()),
            ("seed", self.seed.is_some()),
            ("J", self.steps.is_some()),
            ("stepper", self.stepper.is_some()),
            ("N", self.n.is_some()),
        ];
        let (required, allowed): (&[&str], &[&str]) = match e {
            Engine::Series => (&["N"], &["N", "k_max", "budget"]),
            Engine::Mc => (&["N", "samples", "seed"], &["N", "samples", "seed"]),
            Engine::Walk => (&["N"], &["N"]),
            Engine::Holonomy => (
                &["N", "samples", "seed", "J"],
                &["N", "samples", "seed", "J", "stepper"],
            ),
            Engine::Master => (&[], &[]),
            Engine::Forest => (&[], &[]),
        };
        for name in required {
            if !present.iter().any(|(k, p)| k == name && *p) {
                return Err(CliError::parse(format!(
                    "engine `{e}` requires parameter `{name}`"
                )));
            }
        }
        for (name, p) in present {
            if p && !allowed.contains(&name) {
                return Err(CliError::parse(format!(
                    "parameter `{name}` does not apply to engine `{e}`"
                )));
            }
        }
        if let Some(n) = self.n {
            GroupSpec::new(kind, n)?;
        }
        if !e.needs_n() && kind != GroupKind::U {
            return Err(CliError::parse(format!(
                "engine `{e}` computes the large-N unitary limit; group must be U"
            )));
        }
        if e == Engine::Walk && kind != GroupKind::U {
            return Err(CliError::refusal(format!(
                "the walk engine supports U(N) only, not {kind}"
            )));
        }
        if e == Engine::Master && !self.normalized {
            return Err(CliError::parse(
                "the master field is a normalized quantity; `normalized` must be true",
            ));
        }
        if let Some(s) = &self.stepper {
            s.parse::<holonomy_sim::Stepper>()
                .map_err(CliError::parse)?;
        }
        if let Some(k) = self.k_max {
            if k > 64 {
                return Err(CliError::parse(format!("k_max = {k} is above 64")));
            }
        }
        if self.samples == Some(0) {
            return Err(CliError::parse("samples must be positive"));
        }
        if self.steps == Some(0) {
            return Err(CliError::parse("J must be positive"));
        }
        Ok(())
    }

    /// The group, for finite-`N` engines.
    pub fn group_spec(&self) -> Result<Option<GroupSpec>, CliError> {
        let kind: GroupKind = self.group.parse()?;
        match self.n {
            Some(n) => Ok(Some(GroupSpec::new(kind, n)?)),
            None => Ok(None),
        }
    }

    pub fn parse_word(&self) -> Result<LassoWord, CliError> {
        word_with_defaults(&self.word, &self.areas)
    }
}

/// Parses `text`, giving [`DEFAULT_AREA`] to identifiers missing from
/// `areas`.
pub fn word_with_defaults(
    text: &str,
    areas: &BTreeMap<String, f64>,
) -> Result<LassoWord, CliError> {
    let mut areas = areas.clone();
    loop {
        match parse_word(text, &areas) {
            Ok(w) => return Ok(w),
            Err(LoopspecError::UnknownIdentifier { name, .. }) => {
                areas.insert(name, DEFAULT_AREA);
            }
            Err(e) => return Err(e.into()),
        }
    }
}
