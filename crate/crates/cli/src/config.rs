//! Experiment configuration: command-line flags override config-file keys,
//! which override per-channel defaults. Config files are flat
//! `key = value` text; keys match the flag names with `-` or `_` freely.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qsl_core::bounds::{BoundKind, Witness};
use qsl_core::channels::{AdParams, ChannelModel, PdParams};
use qsl_core::qmat::DensityMatrix;

/// A configuration problem, named after the offending field.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid {}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Ad,
    Pd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Plus,
    Ground,
    Excited,
    Bloch(f64, f64, f64),
}

impl InitialState {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        match text {
            "plus" => Ok(Self::Plus),
            "ground" => Ok(Self::Ground),
            "excited" => Ok(Self::Excited),
            other => {
                let Some(rest) = other.strip_prefix("bloch:") else {
                    return Err(err(
                        "initial",
                        format!("expected plus|ground|excited|bloch:x,y,z, got `{other}`"),
                    ));
                };
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 3 {
                    return Err(err("initial", "bloch form needs three components x,y,z"));
                }
                let mut v = [0.0f64; 3];
                for (slot, part) in v.iter_mut().zip(parts.iter()) {
                    *slot = part
                        .trim()
                        .parse()
                        .map_err(|_| err("initial", format!("`{part}` is not a number")))?;
                }
                Ok(Self::Bloch(v[0], v[1], v[2]))
            }
        }
    }

    pub fn state(&self) -> Result<DensityMatrix, ConfigError> {
        match self {
            Self::Plus => Ok(DensityMatrix::plus()),
            Self::Ground => Ok(DensityMatrix::ground()),
            Self::Excited => Ok(DensityMatrix::excited()),
            Self::Bloch(x, y, z) => {
                DensityMatrix::from_bloch(*x, *y, *z).map_err(|e| err("initial", e.to_string()))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Plus => "plus".into(),
            Self::Ground => "ground".into(),
            Self::Excited => "excited".into(),
            Self::Bloch(x, y, z) => format!("bloch:{x},{y},{z}"),
        }
    }
}

/// Unresolved settings as they come from flags or a config file.
#[derive(Debug, Default, Clone)]
pub struct Settings {
    pub channel: Option<String>,
    pub gamma0_over_lambda: Option<f64>,
    pub s: Option<f64>,
    pub initial: Option<String>,
    pub epsilon: Option<f64>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub bounds: Option<String>,
    pub modified: Option<bool>,
    pub witness: Option<String>,
    pub output: Option<PathBuf>,
    /// Only meaningful inside sweep config files.
    pub command: Option<String>,
}

impl Settings {
    /// Fill unset fields from a lower-precedence source.
    pub fn or(mut self, fallback: Settings) -> Settings {
        self.channel = self.channel.or(fallback.channel);
        self.gamma0_over_lambda = self.gamma0_over_lambda.or(fallback.gamma0_over_lambda);
        self.s = self.s.or(fallback.s);
        self.initial = self.initial.or(fallback.initial);
        self.epsilon = self.epsilon.or(fallback.epsilon);
        self.t_max = self.t_max.or(fallback.t_max);
        self.dt = self.dt.or(fallback.dt);
        self.bounds = self.bounds.or(fallback.bounds);
        self.modified = self.modified.or(fallback.modified);
        self.witness = self.witness.or(fallback.witness);
        self.output = self.output.or(fallback.output);
        self.command = self.command.or(fallback.command);
        self
    }

    /// Parse a flat `key = value` config file.
    pub fn from_file(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err("config", format!("cannot read {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(
                    "config",
                    format!("{}:{}: expected `key = value`", path.display(), lineno + 1),
                ));
            };
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            map.insert(key, value.trim().to_string());
        }

        let mut settings = Settings::default();
        let parse_f64 = |field: &str, v: &str| -> Result<f64, ConfigError> {
            v.parse()
                .map_err(|_| err(field, format!("`{v}` is not a number")))
        };
        for (key, value) in map {
            match key.as_str() {
                "channel" => settings.channel = Some(value),
                "gamma0_over_lambda" => {
                    settings.gamma0_over_lambda = Some(parse_f64("gamma0-over-lambda", &value)?)
                }
                "s" => settings.s = Some(parse_f64("s", &value)?),
                "initial" => settings.initial = Some(value),
                "epsilon" => settings.epsilon = Some(parse_f64("epsilon", &value)?),
                "t_max" => settings.t_max = Some(parse_f64("t-max", &value)?),
                "dt" => settings.dt = Some(parse_f64("dt", &value)?),
                "bounds" => settings.bounds = Some(value),
                "modified" => {
                    settings.modified = Some(match value.as_str() {
                        "true" | "yes" | "1" => true,
                        "false" | "no" | "0" => false,
                        other => return Err(err("modified", format!("`{other}` is not a bool"))),
                    })
                }
                "witness" => settings.witness = Some(value),
                "output" => settings.output = Some(PathBuf::from(value)),
                "command" => settings.command = Some(value),
                other => return Err(err("config", format!("unknown key `{other}`"))),
            }
        }
        Ok(settings)
    }
}

/// A fully resolved, validated experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub channel: Channel,
    pub gamma0_over_lambda: Option<f64>,
    pub s: Option<f64>,
    pub initial: InitialState,
    pub epsilon: f64,
    pub t_max: f64,
    pub dt: f64,
    pub bounds: Vec<BoundKind>,
    pub modified: bool,
    pub witness: Witness,
    pub output: Option<PathBuf>,
}

impl Experiment {
    pub fn resolve(settings: Settings) -> Result<Experiment, ConfigError> {
        let channel = match settings.channel.as_deref() {
            Some("ad") => Channel::Ad,
            Some("pd") => Channel::Pd,
            Some(other) => return Err(err("channel", format!("expected ad|pd, got `{other}`"))),
            None => return Err(err("channel", "missing (required; use --channel ad|pd)")),
        };

        let (gamma0_over_lambda, s) = match channel {
            Channel::Ad => {
                let g = settings.gamma0_over_lambda.ok_or_else(|| {
                    err("gamma0-over-lambda", "missing (required for channel ad)")
                })?;
                if !(g.is_finite() && g > 0.0) {
                    return Err(err("gamma0-over-lambda", "must be finite and > 0"));
                }
                (Some(g), None)
            }
            Channel::Pd => {
                let s = settings
                    .s
                    .ok_or_else(|| err("s", "missing (required for channel pd)"))?;
                if !(s.is_finite() && s > 0.0) {
                    return Err(err("s", "must be finite and > 0"));
                }
                (None, Some(s))
            }
        };

        let initial = InitialState::parse(settings.initial.as_deref().unwrap_or("plus"))?;
        initial.state()?; // validate (bloch length) early

        let epsilon = settings.epsilon.unwrap_or(1e-6);
        if !(epsilon.is_finite() && epsilon > 0.0 && epsilon < 1.0) {
            return Err(err("epsilon", "must be in (0, 1)"));
        }

        // dimensionless horizons: lambda t for ad, w_c t for pd; phase
        // damping approaches its stationary state as a power law, so its
        // default window is much longer
        let t_max = settings.t_max.unwrap_or(match channel {
            Channel::Ad => 60.0,
            Channel::Pd => 1.0e6,
        });
        let dt = settings.dt.unwrap_or(match channel {
            Channel::Ad => 0.01,
            Channel::Pd => 50.0,
        });
        if !(dt.is_finite() && dt > 0.0) {
            return Err(err("dt", "must be finite and > 0"));
        }
        if !(t_max.is_finite() && t_max > dt) {
            return Err(err("t-max", "must be finite and > dt"));
        }

        let bounds = parse_bounds(settings.bounds.as_deref().unwrap_or("av,op,quant"))?;

        let witness = match settings.witness.as_deref().unwrap_or("trace-distance") {
            "trace-distance" => Witness::TraceDistanceToStationary,
            "decoherence" => Witness::DecoherenceMagnitude,
            other => {
                return Err(err(
                    "witness",
                    format!("expected trace-distance|decoherence, got `{other}`"),
                ))
            }
        };

        Ok(Experiment {
            channel,
            gamma0_over_lambda,
            s,
            initial,
            epsilon,
            t_max,
            dt,
            bounds,
            modified: settings.modified.unwrap_or(false),
            witness,
            output: settings.output,
        })
    }

    pub fn model(&self) -> Result<ChannelModel, ConfigError> {
        match self.channel {
            Channel::Ad => {
                let g = self.gamma0_over_lambda.expect("resolved");
                // lambda = 1 so times are in units of 1/lambda
                let params =
                    AdParams::new(g, 1.0).map_err(|e| err("gamma0-over-lambda", e.to_string()))?;
                Ok(ChannelModel::amplitude_damping(params))
            }
            Channel::Pd => {
                // omega_c = 1 so times are in units of 1/omega_c
                let params = PdParams::new(self.s.expect("resolved"), 1.0)
                    .map_err(|e| err("s", e.to_string()))?;
                Ok(ChannelModel::phase_damping(params))
            }
        }
    }

    pub fn initial_state(&self) -> Result<DensityMatrix, ConfigError> {
        self.initial.state()
    }

    /// Deterministic `# key = value` metadata lines.
    pub fn metadata_lines(&self) -> Vec<String> {
        let mut lines = vec![format!(
            "# channel = {}",
            match self.channel {
                Channel::Ad => "ad",
                Channel::Pd => "pd",
            }
        )];
        if let Some(g) = self.gamma0_over_lambda {
            lines.push(format!("# gamma0-over-lambda = {g}"));
        }
        if let Some(s) = self.s {
            lines.push(format!("# s = {s}"));
        }
        lines.push(format!("# initial = {}", self.initial.label()));
        lines.push(format!("# epsilon = {}", self.epsilon));
        lines.push(format!("# t-max = {}", self.t_max));
        lines.push(format!("# dt = {}", self.dt));
        lines.push(format!("# witness = {}", self.witness.label()));
        lines
    }
}

fn parse_bounds(text: &str) -> Result<Vec<BoundKind>, ConfigError> {
    let mut kinds = Vec::new();
    for part in text.split(',') {
        let kind = match part.trim() {
            "av" => BoundKind::Av,
            "op" => BoundKind::Op,
            "hs" => BoundKind::Hs,
            "tr" => BoundKind::Tr,
            "quant" => BoundKind::Quant,
            other => {
                return Err(err(
                    "bounds",
                    format!("expected a subset of av,op,hs,tr,quant, got `{other}`"),
                ))
            }
        };
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    if kinds.is_empty() {
        return Err(err("bounds", "at least one bound kind is required"));
    }
    Ok(kinds)
}
