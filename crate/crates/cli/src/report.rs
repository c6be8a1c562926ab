//! Report emission: JSON and CSV encodings, written atomically
//! (temp-then-rename) so partially written files never appear.

use std::io::Write;
use std::path::Path;

use ellbounds_core::{CheckResult, CheckStatus};

pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)
                        .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
                }
            }
            let tmp = path.with_extension("tmp");
            {
                let mut f = std::fs::File::create(&tmp)
                    .map_err(|e| format!("cannot create {}: {e}", tmp.display()))?;
                f.write_all(content.as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", tmp.display()))?;
                f.sync_all().ok();
            }
            std::fs::rename(&tmp, path).map_err(|e| format!("cannot move report into place: {e}"))
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

/// CSV encoding of check results, one row per check.
pub fn results_csv(results: &[CheckResult], config_hash: u64) -> String {
    let mut out = format!("# config-hash: {config_hash:016x}\n");
    out.push_str(
        "name,status,regime,anchors,lhs_log10,rhs_log10,margin_log10,error_allowance,detail\n",
    );
    for r in results {
        let (status, detail) = match &r.status {
            CheckStatus::Pass => ("pass", String::new()),
            CheckStatus::Fail => ("fail", String::new()),
            CheckStatus::Inconclusive => ("inconclusive", String::new()),
            CheckStatus::Inapplicable(reason) => ("inapplicable", reason.clone()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            csv_field(&r.name),
            status,
            csv_field(&r.regime),
            csv_field(&r.anchors),
            opt(r.lhs_log10),
            opt(r.rhs_log10),
            opt(r.margin_log10),
            r.error_allowance,
            csv_field(&detail),
        ));
    }
    out
}
