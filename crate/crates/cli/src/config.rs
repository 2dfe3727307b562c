//! TOML scenario files.
//!
//! Four optional sections, every key optional:
//!
//! ```toml
//! [macro]
//! tx_power_dbm = 46.0
//! [metro]
//! pattern = "quasi_omni"
//! downtilt_deg = 8.0
//! [buildings]
//! attenuation_db = -40.0
//! [simulation]
//! drops = 10000
//! power_mode = "same_eirp"
//! ```
//!
//! Units are part of the key names. Unknown keys are rejected.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use hetsim_core::simulation::{BuildingConfig, MacroConfig, MetroConfig};
use hetsim_core::{MetroAntenna, PowerMode, Scenario};

#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
}

impl ConfigError {
    fn new(message: impl Into<String>) -> Self {
        ConfigError {
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MacroSection {
    pub tx_power_dbm: f64,
    pub density_per_km2: f64,
    pub height_m: f64,
    pub horiz_hpbw_deg: f64,
    pub front_to_back_db: f64,
    pub downtilt_deg: f64,
    pub vert_hpbw_deg: f64,
    pub sll_db: f64,
    pub max_gain_dbi: f64,
    pub path_loss_intercept_db: f64,
    pub path_loss_slope_db: f64,
}

impl Default for MacroSection {
    fn default() -> Self {
        MacroSection::from(&MacroConfig::default())
    }
}

impl From<&MacroConfig> for MacroSection {
    fn from(m: &MacroConfig) -> Self {
        MacroSection {
            tx_power_dbm: m.tx_power_dbm,
            density_per_km2: m.density_per_km2,
            height_m: m.height_m,
            horiz_hpbw_deg: m.horiz_hpbw_deg,
            front_to_back_db: m.fbr_db,
            downtilt_deg: m.downtilt_deg,
            vert_hpbw_deg: m.vert_hpbw_deg,
            sll_db: m.sll_db,
            max_gain_dbi: m.max_gain_dbi,
            path_loss_intercept_db: m.path_loss_intercept_db,
            path_loss_slope_db: m.path_loss_slope_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetroSection {
    /// Used under `same_power`.
    pub tx_power_dbm: f64,
    /// Held fixed under `same_eirp`; the transmit power becomes
    /// `eirp_dbm - max gain of the pattern`.
    pub eirp_dbm: f64,
    pub density_per_km2: f64,
    pub height_m: f64,
    pub pattern: String,
    pub downtilt_deg: f64,
    pub path_loss_intercept_db: f64,
    pub path_loss_slope_db: f64,
}

impl Default for MetroSection {
    fn default() -> Self {
        MetroSection::from(&MetroConfig::default())
    }
}

impl From<&MetroConfig> for MetroSection {
    fn from(m: &MetroConfig) -> Self {
        MetroSection {
            tx_power_dbm: m.tx_power_dbm,
            eirp_dbm: m.eirp_dbm,
            density_per_km2: m.density_per_km2,
            height_m: m.height_m,
            pattern: m.antenna.name().to_string(),
            downtilt_deg: m.downtilt_deg,
            path_loss_intercept_db: m.path_loss_intercept_db,
            path_loss_slope_db: m.path_loss_slope_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildingSection {
    pub density_per_km2: f64,
    pub attenuation_db: f64,
    pub length_min_m: f64,
    pub length_max_m: f64,
    pub height_min_m: f64,
    pub height_max_m: f64,
}

impl Default for BuildingSection {
    fn default() -> Self {
        BuildingSection::from(&BuildingConfig::default())
    }
}

impl From<&BuildingConfig> for BuildingSection {
    fn from(b: &BuildingConfig) -> Self {
        BuildingSection {
            density_per_km2: b.density_per_km2,
            attenuation_db: b.attenuation_db,
            length_min_m: b.length_min_m,
            length_max_m: b.length_max_m,
            height_min_m: b.height_min_m,
            height_max_m: b.height_max_m,
        }
    }
}

/// TOML integers are signed, so seeds above `i64::MAX` are written as strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed(pub u64);

impl Serialize for Seed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => u64::try_from(v)
                .map(Seed)
                .map_err(|_| serde::de::Error::custom(format!("seed {v} is negative"))),
            Raw::Text(t) => t.trim().parse().map(Seed).map_err(|_| {
                serde::de::Error::custom(format!("seed `{t}` is not a 64-bit unsigned integer"))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub bias_db: f64,
    pub region_radius_km: f64,
    pub user_height_m: f64,
    pub carrier_frequency_ghz: f64,
    pub drops: i64,
    pub master_seed: Seed,
    pub power_mode: String,
}

impl Default for SimulationSection {
    fn default() -> Self {
        SimulationSection::from(&Scenario::default())
    }
}

impl From<&Scenario> for SimulationSection {
    fn from(s: &Scenario) -> Self {
        SimulationSection {
            bias_db: s.bias_db,
            region_radius_km: s.region_radius_km,
            user_height_m: s.user_height_m,
            carrier_frequency_ghz: s.carrier_frequency_ghz,
            drops: s.drops as i64,
            master_seed: Seed(s.master_seed),
            power_mode: s.power_mode.name().to_string(),
        }
    }
}

/// Parsed configuration file before validation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "macro")]
    pub macro_tier: MacroSection,
    pub metro: MetroSection,
    pub buildings: BuildingSection,
    pub simulation: SimulationSection,
}

impl From<&Scenario> for ConfigFile {
    fn from(s: &Scenario) -> Self {
        ConfigFile {
            macro_tier: MacroSection::from(&s.macro_tier),
            metro: MetroSection::from(&s.metro),
            buildings: BuildingSection::from(&s.buildings),
            simulation: SimulationSection::from(s),
        }
    }
}

/// Every accepted `section.key`.
pub fn known_keys() -> Vec<String> {
    let table = toml::Table::try_from(ConfigFile::default()).expect("defaults serialize");
    let mut keys = Vec::new();
    for (section, value) in &table {
        if let Some(inner) = value.as_table() {
            keys.extend(inner.keys().map(|k| format!("{section}.{k}")));
        }
    }
    keys
}

/// Line (1-based) where `section.key` is set in `text`, if it is.
fn locate(text: &str, dotted: &str) -> Option<usize> {
    let (section, key) = dotted.split_once('.')?;
    let mut current = String::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('[') {
            current = rest.trim_end_matches(']').trim().to_string();
            continue;
        }
        let Some((k, _)) = line.split_once('=') else {
            continue;
        };
        let k = k.trim().trim_matches('"');
        if k == dotted || (current == section && k == key) {
            return Some(n + 1);
        }
    }
    None
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::new(format!("invalid config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies a `section.key=value` override. The value is read as a TOML
    /// value, falling back to a bare string.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::new(format!("--set `{assignment}`: expected key=value")))?;
        let key = key.trim();
        if !known_keys().iter().any(|k| k == key) {
            return Err(ConfigError::new(format!(
                "--set: unknown config key `{key}`"
            )));
        }
        let (section, field) = key.split_once('.').expect("known keys are dotted");
        let raw = raw.trim();
        let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));

        let mut table = toml::Table::try_from(&*self).expect("config serializes");
        table
            .get_mut(section)
            .and_then(|s| s.as_table_mut())
            .expect("section exists")
            .insert(field.to_string(), value);
        *self = toml::Value::Table(table)
            .try_into()
            .map_err(|e| ConfigError::new(format!("--set {key}: {e}")))?;
        Ok(())
    }

    pub fn to_scenario(&self) -> Result<Scenario, ConfigError> {
        let antenna: MetroAntenna = self
            .metro
            .pattern
            .parse()
            .map_err(|e| ConfigError::new(format!("metro.pattern: {e}")))?;
        let power_mode: PowerMode = self
            .simulation
            .power_mode
            .parse()
            .map_err(|e| ConfigError::new(format!("simulation.power_mode: {e}")))?;
        let drops = usize::try_from(self.simulation.drops).map_err(|_| {
            ConfigError::new(format!(
                "simulation.drops: {} must be at least 1",
                self.simulation.drops
            ))
        })?;
        let m = &self.macro_tier;
        let t = &self.metro;
        let b = &self.buildings;
        Ok(Scenario {
            macro_tier: MacroConfig {
                tx_power_dbm: m.tx_power_dbm,
                density_per_km2: m.density_per_km2,
                height_m: m.height_m,
                horiz_hpbw_deg: m.horiz_hpbw_deg,
                fbr_db: m.front_to_back_db,
                downtilt_deg: m.downtilt_deg,
                vert_hpbw_deg: m.vert_hpbw_deg,
                sll_db: m.sll_db,
                max_gain_dbi: m.max_gain_dbi,
                path_loss_intercept_db: m.path_loss_intercept_db,
                path_loss_slope_db: m.path_loss_slope_db,
            },
            metro: MetroConfig {
                tx_power_dbm: t.tx_power_dbm,
                eirp_dbm: t.eirp_dbm,
                density_per_km2: t.density_per_km2,
                height_m: t.height_m,
                antenna,
                downtilt_deg: t.downtilt_deg,
                path_loss_intercept_db: t.path_loss_intercept_db,
                path_loss_slope_db: t.path_loss_slope_db,
            },
            buildings: BuildingConfig {
                density_per_km2: b.density_per_km2,
                attenuation_db: b.attenuation_db,
                length_min_m: b.length_min_m,
                length_max_m: b.length_max_m,
                height_min_m: b.height_min_m,
                height_max_m: b.height_max_m,
            },
            bias_db: self.simulation.bias_db,
            region_radius_km: self.simulation.region_radius_km,
            user_height_m: self.simulation.user_height_m,
            carrier_frequency_ghz: self.simulation.carrier_frequency_ghz,
            drops,
            master_seed: self.simulation.master_seed.0,
            power_mode,
        })
    }
}

/// Parses `text`, applies overrides and validates the result. Validation
/// messages name the offending key and, when it is set in `text`, its line.
pub fn load_str(text: &str, overrides: &[String]) -> Result<Scenario, ConfigError> {
    let mut file = ConfigFile::parse(text)?;
    for o in overrides {
        file.set(o)?;
    }
    let with_line = |e: ConfigError| {
        let key = e.message.split(':').next().unwrap_or_default().to_string();
        match locate(text, &key) {
            Some(line) => ConfigError::new(format!("{} (line {line})", e.message)),
            None => e,
        }
    };
    let scenario = file.to_scenario().map_err(with_line)?;
    scenario.validate().map_err(|e| {
        let message = match &e {
            hetsim_core::Error::InvalidParameter { name, reason } => format!("{name}: {reason}"),
            other => other.to_string(),
        };
        with_line(ConfigError::new(message))
    })?;
    Ok(scenario)
}

pub fn load_config(path: &Path, overrides: &[String]) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
    load_str(&text, overrides)
        .map_err(|e| ConfigError::new(format!("{}: {}", path.display(), e.message)))
}

pub fn scenario_to_toml(scenario: &Scenario) -> String {
    ConfigFile::from(scenario).to_toml()
}
