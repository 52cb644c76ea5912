//! Golden-fixture corpus runner. Each fixture file is a JSON array of
//! records `{name, paper_ref, query, params, expect, provenance}`; every
//! expectation is compared exactly, with candidate lists compared as
//! unordered sets of canonical decompositions.

use crate::CliError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeSet;
use std::io::IsTerminal;
use std::path::Path;
use tiltwall::exactnum::parse_rational;
use tiltwall::kuznetsov::{expected_dim, from_chern, ku_numeric_membership, serre_orbit, KuClass};
use tiltwall::lattice::{chi1, chi2, ChernCharacter, TruncatedCharacter};
use tiltwall::tilt::{numerical_wall, WallLocus};
use tiltwall::wallfinder::{
    canonical_pair, derived_bound_report, scan_region_left, scan_vertical, FilterSet, ScanBounds,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub paper_ref: String,
    pub query: String,
    pub params: Value,
    pub expect: Value,
    pub provenance: String,
}

struct Outcome {
    pass: bool,
    got: String,
    want: String,
}

fn malformed(file: &str, field: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("MalformedFixture: {file}: field {field:?}: {detail}"))
}

fn str_field<'a>(file: &str, params: &'a Value, key: &str) -> Result<&'a str, CliError> {
    params
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| malformed(file, key, "missing or not a string"))
}

fn int_field(file: &str, params: &Value, key: &str, default: i64) -> Result<i64, CliError> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_i64()
            .ok_or_else(|| malformed(file, key, "not an integer")),
    }
}

fn bool_field(file: &str, params: &Value, key: &str, default: bool) -> Result<bool, CliError> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_bool()
            .ok_or_else(|| malformed(file, key, "not a boolean")),
    }
}

fn parse_char(file: &str, field: &str, s: &str) -> Result<ChernCharacter, CliError> {
    s.parse().map_err(|e| malformed(file, field, e))
}

fn parse_trunc(file: &str, field: &str, s: &str) -> Result<TruncatedCharacter, CliError> {
    s.parse().map_err(|e| malformed(file, field, e))
}

/// Canonical unordered decomposition set named by one side of each pair.
fn pair_set(
    file: &str,
    target: &TruncatedCharacter,
    ps: &Value,
) -> Result<BTreeSet<(TruncatedCharacter, TruncatedCharacter)>, CliError> {
    let list = ps
        .as_array()
        .ok_or_else(|| malformed(file, "expect.survivors", "not an array"))?;
    let mut out = BTreeSet::new();
    for entry in list {
        let s = entry
            .as_str()
            .ok_or_else(|| malformed(file, "expect.survivors", "entry not a string"))?;
        let p = parse_trunc(file, "expect.survivors", s)?;
        let q = target.sub(&p);
        out.insert(canonical_pair(p, q));
    }
    Ok(out)
}

fn show_pairs(set: &BTreeSet<(TruncatedCharacter, TruncatedCharacter)>) -> String {
    let items: Vec<String> = set.iter().map(|(p, q)| format!("{{{p} | {q}}}")).collect();
    format!("[{}]", items.join(", "))
}

fn run_fixture(file: &str, f: &Fixture) -> Result<Outcome, CliError> {
    if !matches!(f.provenance.as_str(), "paper" | "trivial" | "derived") {
        return Err(malformed(file, "provenance", format!("unknown tag {:?}", f.provenance)));
    }
    let expect_str = || -> Result<String, CliError> {
        f.expect
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| malformed(file, "expect", "not a string"))
    };
    match f.query.as_str() {
        "chi" => {
            let v = parse_char(file, "v", str_field(file, &f.params, "v")?)?;
            let value = match f.params.get("w").and_then(Value::as_str) {
                Some(w) => chi2(&v, &parse_char(file, "w", w)?),
                None => chi1(&v),
            };
            let want = expect_str()?;
            Ok(Outcome { pass: value.to_string() == want, got: value.to_string(), want })
        }
        "wall" => {
            let v = parse_trunc(file, "v", str_field(file, &f.params, "v")?)?;
            let w = parse_trunc(file, "w", str_field(file, &f.params, "w")?)?;
            let wall = numerical_wall(&v, &w);
            let want: WallLocus = serde_json::from_value(f.expect.clone())
                .map_err(|e| malformed(file, "expect", e))?;
            Ok(Outcome {
                pass: wall == want,
                got: wall.to_string(),
                want: want.to_string(),
            })
        }
        "scan_vertical" | "scan_region" => {
            let target =
                parse_trunc(file, "target", str_field(file, &f.params, "target")?)?;
            let rank_max = int_field(file, &f.params, "rank_max", 6)?;
            let li = bool_field(file, &f.params, "li", true)?;
            let bounds = ScanBounds::new(rank_max)
                .map_err(|e| malformed(file, "rank_max", e))?;
            let filters = if li { FilterSet::default() } else { FilterSet::without_li() };
            let report = if f.query == "scan_vertical" {
                let beta = parse_rational(str_field(file, &f.params, "beta")?)
                    .map_err(|e| malformed(file, "beta", e))?;
                scan_vertical(&target, &beta, &bounds, &filters)
            } else {
                scan_region_left(&target, &bounds, &filters)
            }
            .map_err(|e| CliError::Domain(format!("{e}")))?;
            let got = report.survivor_pairs();
            let want = pair_set(
                file,
                &target,
                f.expect
                    .get("survivors")
                    .ok_or_else(|| malformed(file, "expect.survivors", "missing"))?,
            )?;
            Ok(Outcome {
                pass: got == want,
                got: show_pairs(&got),
                want: show_pairs(&want),
            })
        }
        "ku" => {
            let op = str_field(file, &f.params, "op")?;
            let v = parse_char(file, "v", str_field(file, &f.params, "v")?)?;
            match op {
                "decompose" => {
                    let want = expect_str()?;
                    let got = match from_chern(&v) {
                        Ok(k) => k.to_string(),
                        Err(e) => format!("NotInLattice ({e})"),
                    };
                    Ok(Outcome { pass: got == want, got, want })
                }
                "membership" => {
                    let want = f
                        .expect
                        .as_bool()
                        .ok_or_else(|| malformed(file, "expect", "not a boolean"))?;
                    let got = ku_numeric_membership(&v);
                    Ok(Outcome {
                        pass: got == want,
                        got: got.to_string(),
                        want: want.to_string(),
                    })
                }
                other => Err(malformed(file, "op", format!("unknown ku op {other:?}"))),
            }
        }
        "orbit" => {
            let class: KuClass = str_field(file, &f.params, "class")?
                .parse()
                .map_err(|e| malformed(file, "class", e))?;
            let got: Vec<String> = serre_orbit(&class).iter().map(|k| k.to_string()).collect();
            let want: Vec<String> = serde_json::from_value(f.expect.clone())
                .map_err(|e| malformed(file, "expect", e))?;
            Ok(Outcome {
                pass: got == want,
                got: got.join(" -> "),
                want: want.join(" -> "),
            })
        }
        "dim" => {
            let v = parse_char(file, "v", str_field(file, &f.params, "v")?)?;
            let want = expect_str()?;
            let got = expected_dim(&v).to_string();
            Ok(Outcome { pass: got == want, got, want })
        }
        "bound" => {
            let target =
                parse_trunc(file, "target", str_field(file, &f.params, "target")?)?;
            let want = expect_str()?;
            let got = derived_bound_report(&target).k.to_string();
            Ok(Outcome { pass: got == want, got, want })
        }
        other => Err(malformed(file, "query", format!("unknown query {other:?}"))),
    }
}

fn use_color() -> bool {
    std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

pub fn verify(dir: &Path, json: bool) -> Result<(), CliError> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Parse(format!("cannot read fixtures dir {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        eprintln!("warning: no fixture files in {}", dir.display());
        return Ok(());
    }
    let color = use_color();
    let (green, red, reset) = if color {
        ("\x1b[32m", "\x1b[31m", "\x1b[0m")
    } else {
        ("", "", "")
    };
    let mut passed = 0usize;
    let mut failed = 0usize;
    let mut results = Vec::new();
    for file in &files {
        let text = std::fs::read_to_string(file)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", file.display())))?;
        let name = file.display().to_string();
        let fixtures: Vec<Fixture> = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("MalformedFixture: {name}: {e}")))?;
        for fixture in &fixtures {
            let outcome = run_fixture(&name, fixture)?;
            if json {
                results.push(serde_json::json!({
                    "name": fixture.name,
                    "pass": outcome.pass,
                    "got": outcome.got,
                    "want": outcome.want,
                }));
            } else if outcome.pass {
                println!("{green}PASS{reset} {}", fixture.name);
            } else {
                println!(
                    "{red}FAIL{reset} {}: expected {} got {}",
                    fixture.name, outcome.want, outcome.got
                );
            }
            if outcome.pass {
                passed += 1;
            } else {
                failed += 1;
            }
        }
    }
    if json {
        println!(
            "{}",
            serde_json::json!({"results": results, "passed": passed, "failed": failed})
        );
    } else {
        println!("{passed} passed, {failed} failed");
    }
    if failed > 0 {
        Err(CliError::Verify(format!("{failed} fixture(s) failed")))
    } else {
        Ok(())
    }
}
