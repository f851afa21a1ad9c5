use std::path::Path;
use std::process::{Command, Output};

use magcoh_core::config::resolve_params;
use magcoh_core::keys::KEYS;
use magcoh_core::SystemParams;
use serde_json::Value;

fn magcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magcoh")).args(args).env_remove("MAGCOH_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn point_reports_stable_defaults() {
    let v = json(&magcoh(&["point"]));
    assert_eq!(v["verdict"]["stable"], true);
    for k in ["c_a", "c_m", "c_b", "c_t"] {
        assert!(v["coherences"][k].as_f64().unwrap() > 0.0);
    }
    assert!(v.get("drift").is_none());
    let v = json(&magcoh(&["point", "--verbose"]));
    assert_eq!(v["drift"].as_array().unwrap().len(), 6);
    assert_eq!(v["covariance"]["v_norm"].as_array().unwrap().len(), 6);
}

#[test]
fn undriven_point_has_zero_coherence() {
    let v = json(&magcoh(&["point", "--set", "drive_power=0"]));
    assert_eq!(v["verdict"]["stable"], true);
    for k in ["c_a", "c_m", "c_b", "c_t"] {
        assert!(v["coherences"][k].as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn validation_error_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "gamma_a = 0\n");
    let o = magcoh(&["point", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gamma_a"), "{}", stderr(&o));

    for args in [
        &["point", "--set", "omega_c=1"][..],
        &["point", "--set", "xi"],
        &["point", "--config", "/nonexistent/config.toml"],
        &["sweep", "--preset", "fig9"],
        &["sweep"],
        &["point", "--threads", "0"],
    ] {
        assert_eq!(magcoh(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unstable_point_exits_3_only_when_strict() {
    let unstable = ["point", "--set", "xi_hz=3e7", "--set", "g_ma=0"];
    let o = magcoh(&unstable);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["stable"], false);
    assert!(v["coherences"].is_null());

    let strict: Vec<&str> = unstable.iter().copied().chain(["--strict"]).collect();
    let o = magcoh(&strict);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("unstable"));

    let o = magcoh(&["contrast", "--set", "xi_hz=3e7", "--set", "g_ma=0", "--strict"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn flags_override_config_for_every_key() {
    let base = SystemParams::paper_defaults();
    let dir = tempfile::tempdir().unwrap();
    for key in KEYS {
        let v0 = key.get(&base);
        let (from_file, from_flag) = if v0 == 0.0 { (0.5, 0.25) } else { (v0 * 1.01, v0 * 1.02) };
        let cfg = write(dir.path(), "p.toml", &format!("{} = {from_file:e}\n", key.name()));
        let set = format!("{}={from_flag:e}", key.name());
        let v = json(&magcoh(&["point", "--config", &cfg, "--set", &set]));
        let expected = resolve_params(None, &[set.as_str()]).unwrap();
        let config_only = resolve_params(Some(&format!("{} = {from_file:e}", key.name())), &[] as &[&str]).unwrap();
        assert_eq!(v["params"], serde_json::to_value(expected).unwrap(), "{key}");
        assert_ne!(v["params"], serde_json::to_value(config_only).unwrap(), "{key}");
    }

    let cfg =
        write(dir.path(), "mode.toml", "magnon_detuning_mode = \"self-consistent\"\nprofile = \"paper-literal\"\n");
    let v = json(&magcoh(&["point", "--config", &cfg]));
    assert_eq!(v["params"]["magnon_detuning"]["mode"], "self-consistent");
    assert!((v["params"]["gamma_m"].as_f64().unwrap() - std::f64::consts::TAU * 15e6).abs() < 1e-3);
    let v = json(&magcoh(&[
        "point",
        "--config",
        &cfg,
        "--set",
        "magnon_detuning_mode=pinned",
        "--set",
        "profile=paper-defaults",
    ]));
    assert_eq!(v["params"]["magnon_detuning"]["mode"], "pinned");
    assert!((v["params"]["gamma_m"].as_f64().unwrap() - std::f64::consts::TAU * 0.6e6).abs() < 1e-3);
}

#[test]
fn fig6_csv_layout_and_determinism() {
    let a = magcoh(&["sweep", "--preset", "fig6", "--threads", "1"]);
    let b = magcoh(&["sweep", "--preset", "fig6", "--threads", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("g_ma,I_a,I_m,I_b,status"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 120);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[4], "ok");
        for f in &fields[..4] {
            let mantissa = f.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{f}");
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig6.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_magcoh"))
        .args(["sweep", "--preset", "fig6", "--out", out.to_str().unwrap()])
        .env("MAGCOH_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn fig2_header_and_line_cuts() {
    let o = magcoh(&["sweep", "--preset", "fig2", "--line-cuts"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("xi,phi,C_a,C_m,C_b,C_T,status"));
    assert_eq!(text.lines().count(), 1 + 4 * 101);
    assert_eq!(magcoh(&["sweep", "--preset", "fig6", "--line-cuts"]).status.code(), Some(2));
}

#[test]
fn sweep_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.toml",
        r#"
outputs = ["C_b", "stability", "symplectic"]
[axis1]
key = "temperature"
start = 0.01
stop = 50
count = 6
scale = "log"
"#,
    );
    let o = magcoh(&["sweep", "--spec", &spec, "--set", "xi_hz=1e6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("temperature,C_b,stable,spectral_abscissa,hurwitz,w_1,w_2,w_3,status"));
    let cb: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(cb.windows(2).all(|w| w[1] < w[0]));

    let bad = write(
        dir.path(),
        "bad.toml",
        "[axis1]\nkey = \"temperature\"\nstart = 0\nstop = 1\ncount = 3\nscale = \"log\"\n",
    );
    assert_eq!(magcoh(&["sweep", "--spec", &bad]).status.code(), Some(2));
}

#[test]
fn strict_sweep_flags_unstable_rows() {
    let o = magcoh(&["sweep", "--preset", "fig4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(",unstable\n"));
    assert_eq!(magcoh(&["sweep", "--preset", "fig4", "--strict"]).status.code(), Some(3));
}

#[test]
fn contrast_limits() {
    let v = json(&magcoh(&["contrast", "--set", "g_ma=0", "--set", "xi_hz=3e6"]));
    assert_eq!(v["I_a"], 0.0);
    let v = json(&magcoh(&["contrast", "--set", "xi=0"]));
    for k in ["I_a", "I_m", "I_b"] {
        assert_eq!(v[k], 0.0);
    }
    assert!(v["plus"]["coherences"].is_object() && v["minus"]["coherences"].is_object());
}

#[test]
fn contrast_scan_reports_argmax() {
    let v = json(&magcoh(&["contrast", "--preset", "fig6"]));
    let best = v["argmax"]["I_b"]["value"].as_f64().unwrap();
    assert!((0.93..=1.0).contains(&best), "{best}");
    assert_eq!(v["at_max_I_b"]["I_b"].as_f64().unwrap(), best);
    assert!(v["argmax"]["I_b"]["g_ma"].as_f64().unwrap() > 0.0);

    let v = json(&magcoh(&[
        "contrast",
        "--axis",
        "g_ma_hz:1e5:12e6:5",
        "--set",
        "xi_hz=3.3e6",
        "--set",
        "drive_power=1e-7",
    ]));
    assert_eq!(v["grid"]["rows"].as_array().unwrap().len(), 5);
    assert_eq!(magcoh(&["contrast", "--axis", "g_ma:1:2"]).status.code(), Some(2));
}
