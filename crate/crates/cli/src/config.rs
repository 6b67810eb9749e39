//! Experiment configuration: a JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};
use valuewalk::analytics::WalkParams;
use valuewalk::distributions::ValueDistribution;
use valuewalk::process::{BinaryValueModel, GeneralMarkovModel, MeanMap, RandomWalkModel, StopLaw, ValueProcess};
use valuewalk::schemes::{
    optimal_bin, optimal_constant_ppp, recommended_free_trial_bin, recommended_free_trial_ppp, rent_to_own_params,
    PricingScheme,
};
use valuewalk::strategy::RiskProfile;

/// Anything that makes the configuration unusable; maps to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] valuewalk::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Uniform,
    Power { k: f64 },
    Point { v: f64 },
    Table { xs: Vec<f64>, cdf: Vec<f64> },
}

impl DistributionSpec {
    pub fn build(&self) -> Result<ValueDistribution<f64>, ConfigError> {
        Ok(match self {
            Self::Uniform => ValueDistribution::uniform(),
            Self::Power { k } => ValueDistribution::power(*k)?,
            Self::Point { v } => ValueDistribution::point_mass(*v)?,
            Self::Table { xs, cdf } => ValueDistribution::piecewise(xs.clone(), cdf.clone())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeanSpec {
    Constant(f64),
    Linear { intercept: f64, slope: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StopSpec {
    Deterministic,
    Geometric,
    Table { support: Vec<u64>, weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProcessSpec {
    Walk {
        delta: f64,
    },
    Binary {
        stop: StopSpec,
        mean: MeanSpec,
    },
    /// Either `preset` ("symmetric" or "skewed") with `delta`, or explicit increments.
    Markov {
        #[serde(default)]
        preset: Option<String>,
        #[serde(default)]
        delta: Option<f64>,
        #[serde(default)]
        increments: Option<Vec<f64>>,
        #[serde(default)]
        probs: Option<Vec<f64>>,
    },
}

impl ProcessSpec {
    pub fn build(&self) -> Result<ValueProcess, ConfigError> {
        Ok(match self {
            Self::Walk { delta } => ValueProcess::Walk(RandomWalkModel::new(*delta)?),
            Self::Binary { stop, mean } => {
                let mean = match mean {
                    MeanSpec::Constant(c) => MeanMap::Constant(*c),
                    MeanSpec::Linear { intercept, slope } => MeanMap::Linear {
                        intercept: *intercept,
                        slope: *slope,
                    },
                };
                let stop = match stop {
                    StopSpec::Deterministic => StopLaw::Deterministic,
                    StopSpec::Geometric => StopLaw::Geometric,
                    StopSpec::Table { support, weights } => StopLaw::Table {
                        support: support.clone(),
                        weights: weights.clone(),
                    },
                };
                ValueProcess::Binary(BinaryValueModel::new(stop, mean)?)
            }
            Self::Markov {
                preset,
                delta,
                increments,
                probs,
            } => {
                let model = match (preset.as_deref(), delta, increments, probs) {
                    (Some("symmetric"), Some(d), None, None) => GeneralMarkovModel::symmetric(*d)?,
                    (Some("skewed"), Some(d), None, None) => GeneralMarkovModel::skewed(*d)?,
                    (None, None, Some(inc), Some(p)) => GeneralMarkovModel::new(inc.clone(), p.clone())?,
                    _ => {
                        return Err(ConfigError::Invalid(
                            "markov process needs preset (symmetric|skewed) with delta, or increments with probs".into(),
                        ))
                    }
                };
                ValueProcess::Markov(model)
            }
        })
    }

    fn set_delta(&mut self, d: f64) -> Result<(), ConfigError> {
        match self {
            Self::Walk { delta } => *delta = d,
            Self::Markov { preset: Some(_), delta, .. } => *delta = Some(d),
            _ => return Err(ConfigError::Invalid("--delta applies to walk or preset markov processes only".into())),
        }
        Ok(())
    }
}

/// A scheme; omitted parameters are filled in per risk profile (optimal or
/// recommended values).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SchemeSpec {
    Bin {
        #[serde(default)]
        price: Option<f64>,
    },
    Ppp {
        #[serde(default)]
        price: Option<f64>,
    },
    FreePpp {
        #[serde(default)]
        trial_length: Option<u64>,
        #[serde(default)]
        post_price: Option<f64>,
    },
    FreeBin {
        #[serde(default)]
        trial_length: Option<u64>,
        #[serde(default)]
        bin_price: Option<f64>,
    },
    Rto {
        #[serde(default)]
        price: Option<f64>,
        #[serde(default)]
        paid_rounds: Option<u64>,
    },
    Sequence {
        prices: Vec<f64>,
        tail: f64,
    },
}

impl SchemeSpec {
    /// Concrete scheme for buyers with `profile`.
    pub fn resolve(
        &self,
        profile: &RiskProfile,
        f: &ValueDistribution<f64>,
        model: &ValueProcess,
        grid: usize,
    ) -> Result<PricingScheme, ConfigError> {
        let walk_params = || -> Result<WalkParams<f64>, ConfigError> {
            let w = model
                .as_walk()
                .ok_or_else(|| ConfigError::Invalid(format!("{} defaults need the random walk process", self.name())))?;
            Ok(w.params())
        };
        let scheme = match self {
            Self::Bin { price: Some(p) } => PricingScheme::BuyItNow { price: *p },
            Self::Bin { price: None } => PricingScheme::BuyItNow {
                price: optimal_bin(f, model, profile, grid)?.price,
            },
            Self::Ppp { price: Some(p) } => PricingScheme::ConstantPpp { price: *p },
            Self::Ppp { price: None } => PricingScheme::ConstantPpp {
                price: optimal_constant_ppp(f, model, profile, grid)?.price,
            },
            Self::FreePpp {
                trial_length,
                post_price,
            } => {
                let (t, c) = match (trial_length, post_price) {
                    (Some(t), Some(c)) => (*t, *c),
                    _ => {
                        let PricingScheme::FreeTrialPpp { trial_length: t, post_price: c } =
                            recommended_free_trial_ppp(&walk_params()?)
                        else {
                            unreachable!()
                        };
                        (trial_length.unwrap_or(t), post_price.unwrap_or(c))
                    }
                };
                PricingScheme::FreeTrialPpp {
                    trial_length: t,
                    post_price: c,
                }
            }
            Self::FreeBin { trial_length, bin_price } => {
                let (t, c) = match (trial_length, bin_price) {
                    (Some(t), Some(c)) => (*t, *c),
                    _ => {
                        let PricingScheme::FreeTrialBin { trial_length: t, bin_price: c } =
                            recommended_free_trial_bin(&walk_params()?)
                        else {
                            unreachable!()
                        };
                        (trial_length.unwrap_or(t), bin_price.unwrap_or(c))
                    }
                };
                PricingScheme::FreeTrialBin {
                    trial_length: t,
                    bin_price: c,
                }
            }
            Self::Rto {
                price: Some(p),
                paid_rounds: Some(r),
            } => PricingScheme::RentToOwn {
                price: *p,
                paid_rounds: *r,
            },
            Self::Rto { .. } => {
                let v_star = optimal_bin(f, model, profile, grid)?.threshold.unwrap_or(0.0);
                rent_to_own_params(profile.alpha(), v_star, &walk_params()?)?
            }
            Self::Sequence { prices, tail } => PricingScheme::PriceSequence {
                prices: prices.clone(),
                tail: *tail,
            },
        };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Bin { .. } => "bin",
            Self::Ppp { .. } => "ppp",
            Self::FreePpp { .. } => "free_ppp",
            Self::FreeBin { .. } => "free_bin",
            Self::Rto { .. } => "rto",
            Self::Sequence { .. } => "sequence",
        }
    }
}

/// Risk parameter: a nonnegative number or the string "inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(pub f64);

impl Serialize for Alpha {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Alpha(x)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity") => Ok(Alpha(f64::INFINITY)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("alpha must be a number or \"inf\", got {t:?}"))),
        }
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn default_distribution() -> DistributionSpec {
    DistributionSpec::Uniform
}

fn default_process() -> ProcessSpec {
    ProcessSpec::Walk { delta: 0.1 }
}

fn default_schemes() -> Vec<SchemeSpec> {
    vec![SchemeSpec::Ppp { price: Some(0.5) }, SchemeSpec::Bin { price: None }]
}

fn default_profiles() -> Vec<Alpha> {
    vec![Alpha(0.0)]
}

fn default_n() -> u64 {
    100_000
}

fn default_grid() -> usize {
    1000
}

fn default_slack() -> f64 {
    10.0
}

fn default_scale() -> f64 {
    1.0
}

/// Everything an experiment needs. Every field has a default except the
/// master seed, which commands that sample must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_distribution")]
    pub distribution: DistributionSpec,
    #[serde(default = "default_process")]
    pub process: ProcessSpec,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<SchemeSpec>,
    #[serde(default = "default_profiles")]
    pub profiles: Vec<Alpha>,
    #[serde(default = "default_n")]
    pub n_samples: u64,
    #[serde(default)]
    pub master_seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_grid")]
    pub grid_resolution: usize,
    #[serde(default = "default_slack")]
    pub slack_constant: f64,
    /// Initial values tabulated by `analyze`; every grid point when absent.
    #[serde(default)]
    pub v_grid: Option<Vec<f64>>,
    /// Criteria run by `verify`; all when absent.
    #[serde(default)]
    pub criteria: Option<Vec<u8>>,
    /// Scales every Monte Carlo sample size in `verify`.
    #[serde(default = "default_scale")]
    pub mc_scale: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults parse")
    }
}

/// Command-line values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n: Option<u64>,
    pub delta: Option<f64>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>, o: &Overrides) -> Result<Self, ConfigError> {
        let mut cfg = match path {
            None => Self::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                    path: p.to_path_buf(),
                    source,
                })?;
                serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
                    path: p.to_path_buf(),
                    source,
                })?
            }
        };
        if let Some(s) = o.seed {
            cfg.master_seed = Some(s);
        }
        if let Some(n) = o.n {
            cfg.n_samples = n;
        }
        if let Some(d) = o.delta {
            cfg.process.set_delta(d)?;
        }
        if o.out.is_some() {
            cfg.output = o.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.distribution.build()?;
        self.process.build()?;
        for a in &self.profiles {
            RiskProfile::new(a.0)?;
        }
        if self.profiles.is_empty() {
            return Err(ConfigError::Invalid("at least one risk profile is required".into()));
        }
        if self.grid_resolution < valuewalk::schemes::MIN_GRID {
            return Err(ConfigError::Invalid(format!(
                "grid_resolution must be at least {}",
                valuewalk::schemes::MIN_GRID
            )));
        }
        if !(self.slack_constant >= 0.0) {
            return Err(ConfigError::Invalid("slack_constant must be nonnegative".into()));
        }
        if !(self.mc_scale > 0.0) {
            return Err(ConfigError::Invalid("mc_scale must be positive".into()));
        }
        if let Some(c) = &self.criteria {
            if let Some(bad) = c.iter().find(|k| !(1..=12).contains(*k)) {
                return Err(ConfigError::Invalid(format!("no criterion {bad}; criteria are 1 to 12")));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> Result<u64, ConfigError> {
        self.master_seed
            .ok_or_else(|| ConfigError::Invalid("master_seed is required (config field or --seed)".into()))
    }
}
