//! Parameter files, `key=value` overrides and sweep spec files.
//!
//! Layers resolve in increasing precedence: built-in profile, config file,
//! command-line assignments. A parameter file is a flat TOML table of keys
//! from [`crate::keys`], plus optional `profile` and `magnon_detuning_mode`:
//!
//! ```toml
//! profile = "paper-defaults"
//! g_ma_hz = 4.8e6
//! drive_power_mw = 0.3
//! phi = "1.5pi"
//! ```

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::keys::{Field, ParamKey, MODE_KEY};
use crate::params::{MagnonDetuning, SystemParams};
use crate::sweep::{figure_preset_on, Axis, Grid, Output, SweepSpec};

pub const PROFILE_KEY: &str = "profile";
pub const DEFAULT_PROFILE: &str = "paper-defaults";

/// Parses a number, allowing a trailing `pi` factor: `"1.5pi"`, `"pi"`,
/// `"0.5*pi"`.
pub fn parse_number(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::Config(format!("not a number: {text:?}"));
    let value = match t.strip_suffix("pi") {
        Some(coeff) => {
            let coeff = coeff.trim_end().trim_end_matches('*').trim_end();
            let c = if coeff.is_empty() { 1.0 } else { coeff.parse::<f64>().map_err(|_| bad())? };
            c * PI
        }
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_mode(text: &str) -> Result<fn(f64) -> MagnonDetuning> {
    match text.trim() {
        "pinned" => Ok(MagnonDetuning::Pinned),
        "self-consistent" => Ok(MagnonDetuning::SelfConsistent),
        other => Err(Error::Config(format!("{MODE_KEY} must be \"pinned\" or \"self-consistent\", got {other:?}"))),
    }
}

/// Applies one `key = value` assignment given as text.
pub fn apply_assignment(p: &mut SystemParams, key: &str, value: &str) -> Result<()> {
    let key = key.trim();
    if key == MODE_KEY {
        let mode = parse_mode(value)?;
        p.magnon_detuning = mode(p.magnon_detuning.value());
        return Ok(());
    }
    let k = ParamKey::parse(key)?;
    let v = parse_number(value).map_err(|e| Error::Config(format!("{key}: {e}")))?;
    k.set(p, v)
}

/// Splits `"key=value"`.
pub fn split_assignment(text: &str) -> Result<(&str, &str)> {
    text.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| Error::Config(format!("expected key=value, got {text:?}")))
}

fn toml_number(key: &str, v: &toml::Value) -> Result<f64> {
    match v {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        toml::Value::String(s) => parse_number(s).map_err(|e| Error::Config(format!("{key}: {e}"))),
        other => Err(Error::Config(format!("{key}: expected a number, got {}", other.type_str()))),
    }
}

/// Applies every parameter key of a table. `profile` is skipped; unknown
/// keys and two keys naming the same field are errors.
pub fn apply_table(p: &mut SystemParams, table: &toml::Table) -> Result<()> {
    let mut seen: HashMap<Field, &str> = HashMap::new();
    // Mode first so a detuning value in the same table is kept.
    if let Some(v) = table.get(MODE_KEY) {
        let s = v.as_str().ok_or_else(|| Error::Config(format!("{MODE_KEY} must be a string")))?;
        apply_assignment(p, MODE_KEY, s)?;
    }
    for (key, value) in table {
        if key == PROFILE_KEY || key == MODE_KEY {
            continue;
        }
        let k = ParamKey::parse(key)?;
        if let Some(prev) = seen.insert(k.field, key) {
            return Err(Error::Config(format!("{prev} and {key} set the same parameter")));
        }
        k.set(p, toml_number(key, value)?)?;
    }
    Ok(())
}

pub fn parse_table(text: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>().map_err(|e| Error::Config(format!("TOML: {e}")))
}

fn profile_of(table: &toml::Table) -> Result<Option<&str>> {
    match table.get(PROFILE_KEY) {
        None => Ok(None),
        Some(toml::Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(Error::Config("profile must be a string".into())),
    }
}

/// Applies `key=value` assignments in order (later ones win). A `profile`
/// assignment is ignored here; see [`resolve`].
pub fn apply_sets<S: AsRef<str>>(p: &mut SystemParams, sets: &[S]) -> Result<()> {
    for s in sets {
        let (k, v) = split_assignment(s.as_ref())?;
        if k != PROFILE_KEY {
            apply_assignment(p, k, v)?;
        }
    }
    Ok(())
}

/// Starts from a profile (the last one named by `sets`, else by the
/// tables, else the default), applies the tables in order, then `sets`.
/// The result is validated.
pub fn resolve<S: AsRef<str>>(tables: &[&toml::Table], sets: &[S]) -> Result<SystemParams> {
    let mut profile = DEFAULT_PROFILE;
    for t in tables {
        if let Some(name) = profile_of(t)? {
            profile = name;
        }
    }
    for s in sets {
        let (k, v) = split_assignment(s.as_ref())?;
        if k == PROFILE_KEY {
            profile = v;
        }
    }
    let mut p = SystemParams::profile(profile)?;
    for t in tables {
        apply_table(&mut p, t)?;
    }
    apply_sets(&mut p, sets)?;
    p.validate()
}

/// Parameters from optional config-file text and `key=value` overrides.
pub fn resolve_params<S: AsRef<str>>(config: Option<&str>, sets: &[S]) -> Result<SystemParams> {
    let table = config.map(parse_table).transpose()?;
    resolve(&table.iter().collect::<Vec<_>>(), sets)
}

fn parse_axis(table: &toml::Table, label: &str) -> Result<Axis> {
    let ctx = |m: String| Error::Config(format!("[{label}] {m}"));
    let key = table.get("key").and_then(toml::Value::as_str).ok_or_else(|| ctx("needs a string `key`".into()))?;
    for k in table.keys() {
        if !["key", "start", "stop", "count", "scale", "values"].contains(&k.as_str()) {
            return Err(ctx(format!("unknown field {k:?}")));
        }
    }
    let grid = if let Some(values) = table.get("values") {
        let arr = values.as_array().ok_or_else(|| ctx("`values` must be an array".into()))?;
        Grid::Values { values: arr.iter().map(|v| toml_number("values", v)).collect::<Result<_>>()? }
    } else {
        let num =
            |f: &str| -> Result<f64> { toml_number(f, table.get(f).ok_or_else(|| ctx(format!("missing `{f}`")))?) };
        let count = match table.get("count") {
            Some(toml::Value::Integer(n)) if *n >= 0 => *n as usize,
            _ => return Err(ctx("`count` must be a nonnegative integer".into())),
        };
        let (start, stop) = (num("start")?, num("stop")?);
        match table.get("scale").map(|v| v.as_str()) {
            None | Some(Some("linear")) => Grid::linear(start, stop, count),
            Some(Some("log")) => Grid::log(start, stop, count),
            _ => return Err(ctx("`scale` must be \"linear\" or \"log\"".into())),
        }
    };
    Axis::new(key, grid).map_err(|e| ctx(e.to_string()))
}

/// Parses a sweep spec file on top of an already resolved base.
///
/// ```toml
/// preset = "fig6"            # optional starting point
/// outputs = ["I_a", "I_b"]
/// line_cuts = [0.0, 1.0e7]   # optional, axis-1 values
///
/// [base]                     # parameter overrides
/// temperature = 5.0
///
/// [axis1]
/// key = "g_ma_hz"
/// start = 1e5
/// stop = 12e6
/// count = 120
/// scale = "linear"           # or "log"; or give `values = [...]`
///
/// [axis2]                    # optional
/// ```
///
/// `sets` are re-applied last so command-line assignments win over the
/// file and the preset.
pub fn parse_sweep_spec<S: AsRef<str>>(text: &str, base: SystemParams, sets: &[S]) -> Result<SweepSpec> {
    let doc = parse_table(text)?;
    for k in doc.keys() {
        if !["preset", "outputs", "line_cuts", "base", "axis1", "axis2"].contains(&k.as_str()) {
            return Err(Error::Config(format!("sweep spec: unknown key {k:?}")));
        }
    }
    let sub = |name: &str| -> Result<Option<&toml::Table>> {
        match doc.get(name) {
            None => Ok(None),
            Some(toml::Value::Table(t)) => Ok(Some(t)),
            Some(_) => Err(Error::Config(format!("sweep spec: `{name}` must be a table"))),
        }
    };

    let mut base = base;
    if let Some(t) = sub("base")? {
        if t.contains_key(PROFILE_KEY) {
            return Err(Error::Config("sweep spec: select the profile in the config file or with --set".into()));
        }
        apply_table(&mut base, t)?;
    }
    let preset = match doc.get("preset") {
        None => None,
        Some(toml::Value::String(name)) => Some(figure_preset_on(name, base)?),
        Some(_) => Err(Error::Config("sweep spec: `preset` must be a string".into()))?,
    };

    let axis1 = sub("axis1")?.map(|t| parse_axis(t, "axis1")).transpose()?;
    let axis2 = sub("axis2")?.map(|t| parse_axis(t, "axis2")).transpose()?;
    let outputs = match doc.get("outputs") {
        None => None,
        Some(toml::Value::Array(a)) => Some(
            a.iter()
                .map(|v| v.as_str().ok_or_else(|| Error::Config("outputs must be strings".into()))?.parse())
                .collect::<Result<Vec<Output>>>()?,
        ),
        Some(_) => return Err(Error::Config("sweep spec: `outputs` must be an array".into())),
    };

    let mut spec = match (preset, axis1) {
        (Some(mut s), a1) => {
            if let Some(a1) = a1 {
                s.axis1 = a1;
                s.line_cuts.clear();
            }
            s
        }
        (None, Some(a1)) => SweepSpec::new(a1, base, Vec::new()),
        (None, None) => return Err(Error::Config("sweep spec needs [axis1] or a preset".into())),
    };
    if axis2.is_some() {
        spec.axis2 = axis2;
    }
    if let Some(o) = outputs {
        spec.outputs = o;
    }
    if let Some(v) = doc.get("line_cuts") {
        let arr = v.as_array().ok_or_else(|| Error::Config("line_cuts must be an array".into()))?;
        spec.line_cuts = arr.iter().map(|v| toml_number("line_cuts", v)).collect::<Result<_>>()?;
    }
    apply_sets(&mut spec.base, sets)?;
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    const NO_SETS: [&str; 0] = [];

    #[test]
    fn numbers() {
        assert_eq!(parse_number("2.5").unwrap(), 2.5);
        assert_eq!(parse_number("pi").unwrap(), PI);
        assert_eq!(parse_number("1.5pi").unwrap(), 1.5 * PI);
        assert_eq!(parse_number(" 0.5 * pi ").unwrap(), 0.5 * PI);
        assert!(parse_number("abc").is_err());
        assert!(parse_number("inf").is_err());
    }

    #[test]
    fn precedence_profile_config_flag() {
        let cfg = "profile = \"paper-literal\"\ng_ma_hz = 3e6\ntemperature = 4\n";
        let p = resolve_params(Some(cfg), &["temperature=7"]).unwrap();
        assert_eq!(p.gamma_m, TAU * 15e6);
        assert_eq!(p.g_ma, TAU * 3e6);
        assert_eq!(p.temperature, 7.0);
        let p = resolve_params(Some(cfg), &["profile=paper-defaults"]).unwrap();
        assert_eq!(p.gamma_m, TAU * 0.6e6);
    }

    #[test]
    fn config_errors() {
        assert!(resolve_params(Some("omega_c = 1"), &NO_SETS).is_err());
        assert!(resolve_params(Some("g_ma = 1\ng_ma_hz = 1"), &NO_SETS).is_err());
        assert!(resolve_params(Some("g_ma = [1]"), &NO_SETS).is_err());
        assert!(resolve_params(Some("not toml ="), &NO_SETS).is_err());
        assert!(matches!(resolve_params(Some("gamma_a = 0"), &NO_SETS), Err(Error::Invalid(_))));
        assert!(resolve_params(None, &["xi"]).is_err());
    }

    #[test]
    fn detuning_mode() {
        let p = resolve_params(Some("magnon_detuning_mode = \"self-consistent\"\nmagnon_detuning_hz = 1e7"), &NO_SETS)
            .unwrap();
        assert_eq!(p.magnon_detuning, MagnonDetuning::SelfConsistent(TAU * 1e7));
        let p = resolve_params(None, &["magnon_detuning_mode=pinned"]).unwrap();
        assert!(matches!(p.magnon_detuning, MagnonDetuning::Pinned(_)));
    }

    #[test]
    fn sweep_spec_from_preset_with_flag_override() {
        let base = SystemParams::default();
        let spec = parse_sweep_spec("preset = \"fig6\"\n[base]\ntemperature = 2", base, &["xi=1"]).unwrap();
        assert_eq!(spec.base.temperature, 2.0);
        assert_eq!(spec.base.xi, 1.0);
        assert_eq!(spec.base.drive_power, 1e-7);
    }

    #[test]
    fn sweep_spec_explicit() {
        let text = r#"
            outputs = ["C_a", "stability"]
            [axis1]
            key = "temperature"
            start = 0.1
            stop = 10
            count = 5
            scale = "log"
            [axis2]
            key = "phi"
            values = ["0.5pi", "1.5pi"]
        "#;
        let spec = parse_sweep_spec(text, SystemParams::default(), &NO_SETS).unwrap();
        assert_eq!(spec.row_count(), 10);
        assert_eq!(spec.columns(), ["temperature", "phi", "C_a", "stable", "spectral_abscissa", "hurwitz"]);
        assert!(parse_sweep_spec("outputs = [\"C_a\"]", SystemParams::default(), &NO_SETS).is_err());
        let bad = "outputs = [\"C_a\"]\n[axis1]\nkey = \"temperature\"\nstart = 0\nstop = 1\ncount = 1";
        assert!(parse_sweep_spec(bad, SystemParams::default(), &NO_SETS).is_err());
    }
}
