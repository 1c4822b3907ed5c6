//! Regression harness: solves every corpus model named in a fixture file and
//! compares the exact value against the recorded one.

use std::path::{Path, PathBuf};

use num_rational::Rational64;

use maskdist_core::solver::{distance, Mode};

use crate::{load_model, state_cap, timed, BenchArgs, Failure, EXIT_ERROR, EXIT_OK};

struct Row {
    model: String,
    params: String,
    mode: Mode,
    expected: Rational64,
}

fn parse_rows(path: &Path) -> Result<Vec<Row>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || {
            Failure::error(format!(
                "{}:{}: expected `model;params;mode;num/den`",
                path.display(),
                lineno + 1
            ))
        };
        let fields: Vec<&str> = line.split(';').collect();
        let [model, params, mode, value] = fields[..] else {
            return Err(bad());
        };
        let mode = match mode {
            "strong" => Mode::Strong,
            "weak" => Mode::Weak,
            _ => return Err(bad()),
        };
        let (num, den) = value.split_once('/').ok_or_else(bad)?;
        let num: i64 = num.parse().map_err(|_| bad())?;
        let den: i64 = den.parse().map_err(|_| bad())?;
        rows.push(Row {
            model: model.to_string(),
            params: params.to_string(),
            mode,
            expected: Rational64::new(num, den),
        });
    }
    Ok(rows)
}

/// Implementation file `<model>_<params>.gcl`; nominal file
/// `<model>_<params>_nominal.gcl`, or the shared `<model>_nominal.gcl` when
/// the nominal side does not depend on the parameters.
fn resolve_files(corpus: &Path, row: &Row) -> Result<(PathBuf, PathBuf), Failure> {
    let impl_path = corpus.join(format!("{}_{}.gcl", row.model, row.params));
    if !impl_path.exists() {
        return Err(Failure::error(format!(
            "missing model file {}",
            impl_path.display()
        )));
    }
    let sized = corpus.join(format!("{}_{}_nominal.gcl", row.model, row.params));
    let shared = corpus.join(format!("{}_nominal.gcl", row.model));
    let spec_path = if sized.exists() {
        sized
    } else if shared.exists() {
        shared
    } else {
        return Err(Failure::error(format!(
            "missing nominal model for {} ({} or {})",
            row.model,
            corpus
                .join(format!("{}_{}_nominal.gcl", row.model, row.params))
                .display(),
            shared.display()
        )));
    };
    Ok((spec_path, impl_path))
}

pub fn run(args: &BenchArgs) -> Result<u8, Failure> {
    let fixtures = args
        .fixtures
        .clone()
        .unwrap_or_else(|| args.corpus.join("fixtures.txt"));
    let rows = parse_rows(&fixtures)?;
    if rows.is_empty() {
        return Err(Failure::error(format!(
            "{}: no fixture rows",
            fixtures.display()
        )));
    }
    let cap = state_cap(args.state_cap)?;
    let mut failures = 0;
    for row in &rows {
        let (spec_path, impl_path) = resolve_files(&args.corpus, row)?;
        let spec = load_model(&spec_path, cap)?;
        let impl_ = load_model(&impl_path, cap)?;
        let (report, ms) = timed(|| distance(&spec, &impl_, row.mode));
        let report = report.map_err(|e| Failure::error(e.to_string()))?;
        let ok = report.value == row.expected;
        if !ok {
            failures += 1;
        }
        println!(
            "{} {}-{} [{}]: got {}/{}, expected {}/{} ({ms} ms)",
            if ok { "PASS" } else { "FAIL" },
            row.model,
            row.params,
            match row.mode {
                Mode::Strong => "strong",
                Mode::Weak => "weak",
            },
            report.value.numer(),
            report.value.denom(),
            row.expected.numer(),
            row.expected.denom(),
        );
    }
    if failures > 0 {
        println!("{failures} of {} row(s) failed", rows.len());
        Ok(EXIT_ERROR)
    } else {
        println!("all {} row(s) passed", rows.len());
        Ok(EXIT_OK)
    }
}
