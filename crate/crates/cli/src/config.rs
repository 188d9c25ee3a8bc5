//! Scenario configuration: defaults per command, a flat `key = value` file
//! format, and command-line overrides.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use kapitza_dirac::{GaussianMode, GratingParams, SingleMode, Statistics, Truncation};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!(
                "unknown format '{other}', expected csv or json"
            ))),
        }
    }
}

/// What `momentum` emits: a w-sweep of selected distinguishable lines, a
/// w-sweep of the first resonances, or a joint table at fixed `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumKind {
    Fig4,
    Fig6,
    Table,
}

impl fmt::Display for MomentumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentumKind::Fig4 => "fig4",
            MomentumKind::Fig6 => "fig6",
            MomentumKind::Table => "table",
        })
    }
}

impl FromStr for MomentumKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "fig4" => Ok(MomentumKind::Fig4),
            "fig6" => Ok(MomentumKind::Fig6),
            "table" => Ok(MomentumKind::Table),
            other => Err(CliError::Config(format!(
                "unknown momentum kind '{other}', expected fig4, fig6 or table"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Coefficients,
    Spatial,
    Multimode,
    Correlation,
    Momentum,
}

/// `lo:hi` with `lo < hi`, both finite.
pub fn parse_range(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("range '{s}' is not of the form lo:hi"));
    let (lo, hi) = s.trim().split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Config(format!(
            "range '{s}' must satisfy lo < hi with finite ends"
        )));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub w: f64,
    pub kl: f64,
    pub k0: f64,
    pub q0: f64,
    pub big_k0: f64,
    pub big_q0: f64,
    pub sigma2: f64,
    pub mu2: f64,
    pub stats: Statistics,
    pub points: usize,
    /// Scan range; `None` means the command's own default.
    pub range: Option<(f64, f64)>,
    /// Position of the fixed detector.
    pub y: f64,
    pub nmax: Truncation,
    /// Half-width of the `(n, m)` window of a momentum table.
    pub nrange: usize,
    pub kind: MomentumKind,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn defaults(scenario: Scenario) -> Self {
        let figure_truncation = match scenario {
            Scenario::Spatial | Scenario::Multimode => Truncation::Fixed(1),
            _ => Truncation::Auto,
        };
        ScenarioConfig {
            w: 0.2,
            kl: 1.0,
            k0: 0.9,
            q0: -0.9,
            big_k0: 0.0,
            big_q0: 0.0,
            sigma2: 0.2,
            mu2: 0.2,
            stats: Statistics::Distinguishable,
            points: match scenario {
                Scenario::Spatial | Scenario::Multimode => 2001,
                Scenario::Correlation => 64,
                Scenario::Momentum => 301,
                Scenario::Coefficients => 2,
            },
            range: None,
            y: 0.0,
            nmax: figure_truncation,
            nrange: 3,
            kind: MomentumKind::Table,
            format: Format::Csv,
            out: None,
        }
    }

    pub fn grating(&self) -> Result<GratingParams, CliError> {
        Ok(GratingParams::new(self.w, self.kl)?)
    }

    pub fn single_modes(&self) -> Result<(SingleMode, SingleMode), CliError> {
        Ok((
            SingleMode::new(self.k0, self.big_k0)?,
            SingleMode::new(self.q0, self.big_q0)?,
        ))
    }

    pub fn gaussian_modes(&self) -> Result<(GaussianMode, GaussianMode), CliError> {
        for (name, v) in [("sigma2", self.sigma2), ("mu2", self.mu2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok((
            GaussianMode::new(self.k0, self.sigma2.sqrt())?,
            GaussianMode::new(self.q0, self.mu2.sqrt())?,
        ))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.grating()?;
        self.single_modes()?;
        if self.points < 2 {
            return Err(CliError::Config(format!(
                "points must be at least 2, got {}",
                self.points
            )));
        }
        if let Some((lo, hi)) = self.range {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Config(format!(
                    "range {lo}:{hi} must satisfy lo < hi"
                )));
            }
        }
        if !self.y.is_finite() {
            return Err(CliError::Config("y must be finite".into()));
        }
        self.nmax.resolve(self.w)?;
        Ok(())
    }

    /// All settings as ordered `(key, value)` pairs; keys match the flag names.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut e = vec![
            ("w", self.w.to_string()),
            ("kl", self.kl.to_string()),
            ("k0", self.k0.to_string()),
            ("q0", self.q0.to_string()),
            ("K0", self.big_k0.to_string()),
            ("Q0", self.big_q0.to_string()),
            ("sigma2", self.sigma2.to_string()),
            ("mu2", self.mu2.to_string()),
            ("stats", self.stats.to_string()),
            ("points", self.points.to_string()),
        ];
        if let Some((lo, hi)) = self.range {
            e.push(("range", format!("{lo}:{hi}")));
        }
        e.extend([
            ("y", self.y.to_string()),
            ("nmax", self.nmax.to_string()),
            ("nrange", self.nrange.to_string()),
            ("kind", self.kind.to_string()),
            ("format", self.format.to_string()),
        ]);
        if let Some(out) = &self.out {
            e.push(("out", out.display().to_string()));
        }
        e
    }

    pub fn to_config_string(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
            value
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("invalid value '{value}' for {key}")))
        }
        match key {
            "w" => self.w = num(key, value)?,
            "kl" => self.kl = num(key, value)?,
            "k0" => self.k0 = num(key, value)?,
            "q0" => self.q0 = num(key, value)?,
            "K0" => self.big_k0 = num(key, value)?,
            "Q0" => self.big_q0 = num(key, value)?,
            "sigma2" => self.sigma2 = num(key, value)?,
            "mu2" => self.mu2 = num(key, value)?,
            "stats" => self.stats = value.parse()?,
            "points" => self.points = num(key, value)?,
            "range" => self.range = Some(parse_range(value)?),
            "y" => self.y = num(key, value)?,
            "nmax" => self.nmax = value.parse()?,
            "nrange" => self.nrange = num(key, value)?,
            "kind" => self.kind = value.parse()?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            other => return Err(CliError::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file on top of `self`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("-10:10").unwrap(), (-10.0, 10.0));
        assert_eq!(parse_range(" 0 : 1.5 ").unwrap(), (0.0, 1.5));
        assert!(parse_range("1:1").is_err());
        assert!(parse_range("2:1").is_err());
        assert!(parse_range("0..1").is_err());
        assert!(parse_range("0:inf").is_err());
    }

    #[test]
    fn config_text_round_trip() {
        let mut c = ScenarioConfig::defaults(Scenario::Multimode);
        c.w = 0.123_456_789_012_345_67;
        c.q0 = -1.0 / 3.0;
        c.range = Some((-2.5, 1e-7));
        c.stats = Statistics::Fermion;
        c.nmax = Truncation::Fixed(7);
        c.format = Format::Json;
        c.out = Some(PathBuf::from("out/data.json"));
        let mut back = ScenarioConfig::defaults(Scenario::Coefficients);
        back.apply_text(&c.to_config_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn bad_lines_are_config_errors() {
        let mut c = ScenarioConfig::defaults(Scenario::Spatial);
        assert!(matches!(c.apply_text("w 0.2"), Err(CliError::Config(_))));
        assert!(matches!(
            c.apply_text("colour = red"),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            c.apply_text("points = many"),
            Err(CliError::Config(_))
        ));
        assert!(c.apply_text("# comment\n\nw = 0.4\n").is_ok());
        assert_eq!(c.w, 0.4);
    }

    #[test]
    fn validation() {
        let mut c = ScenarioConfig::defaults(Scenario::Spatial);
        assert!(c.validate().is_ok());
        c.points = 1;
        assert!(c.validate().is_err());
        c.points = 10;
        c.w = -1.0;
        assert!(c.validate().is_err());
        c.w = 0.2;
        c.kl = 0.0;
        assert!(c.validate().is_err());
    }
}
