//! Command implementations behind the CLI. Each returns the process exit
//! code: 0 when every applicable check passes, 1 when a check fails, 2 on an
//! input or flag error. When both kinds of failure occur, 2 wins.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::catalog;
use crate::error::{Error, Result};
use crate::flow::{sweep, FlowConfig, SweepSummary};
use crate::geom::{PointCloud, ToleranceConfig};
use crate::io::{format_points, read_point_file, rows_to_csv, rows_to_html, ReportDocument};
use crate::pipeline::{analyze, Analysis};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

/// Every identity and inequality that applies to the analysed polytope.
pub fn checks_pass(a: &Analysis) -> bool {
    a.euler == 0 && a.verify.all_ok()
}

fn analyze_file(path: &Path, tol: &ToleranceConfig) -> Result<(PointCloud, Analysis)> {
    tol.validate()?;
    let cloud = read_point_file(path, tol.eps_unit)?;
    let analysis = analyze(&cloud, tol)?;
    Ok((cloud, analysis))
}

fn summary_table(a: &Analysis) -> String {
    let mut s = String::new();
    let f = a.stats.f;
    let census: Vec<String> = a.census.a.iter().map(|(j, n)| format!("{j}-gons: {n}")).collect();
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let lines = [
        ("f-vector", format!("({}, {}, {}, {})", f[0], f[1], f[2], f[3])),
        ("f03", a.stats.f03.to_string()),
        ("2-faces", census.join(", ")),
        ("euler residual", a.euler.to_string()),
        (
            "anti-self-polar",
            match &a.polarity {
                Some(p) if p.is_asp => format!("yes (c = {:.12}, residual {:.3e})", p.c, p.residual),
                Some(p) => format!("no (best c = {:.6}, residual {:.3e})", p.c, p.residual),
                None => "n/a (origin not interior)".to_string(),
            },
        ),
        (
            "diameter",
            format!(
                "{:.12} rad, chord {:.12}, e(G) = {}",
                a.graph.spherical_d,
                a.graph.max_dist,
                a.graph.edge_count()
            ),
        ),
        ("g2 (census)", a.verify.g2_census.to_string()),
        ("g2 (flag)", a.verify.g2_flag.to_string()),
        (
            "kalai",
            format!("{} >= {}", a.verify.kalai_lhs, a.verify.kalai_rhs),
        ),
        ("stanley", yes_no(a.verify.stanley_ok).to_string()),
        (
            "e(G) >= 3f0-5",
            match a.verify.theorem1 {
                Some(t) => format!(
                    "{} >= {}: {}{}",
                    a.graph.edge_count(),
                    t.bound,
                    yes_no(t.ok),
                    if t.equality { " (equality)" } else { "" }
                ),
                None => "not-applicable".to_string(),
            },
        ),
        (
            "dual g2",
            a.verify
                .dual_g2
                .map_or("n/a".to_string(), |g| g.to_string()),
        ),
    ];
    for (k, v) in lines {
        s.push_str(&format!("{k:<16} {v}\n"));
    }
    s
}

/// Analyses one point file. Prints the JSON report when `json` is set and a
/// readable summary otherwise; `report_path` additionally saves the JSON.
pub fn cmd_analyze(
    path: &Path,
    tol: &ToleranceConfig,
    json: bool,
    report_path: Option<&Path>,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let (cloud, analysis) = match analyze_file(path, tol) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return EXIT_INPUT_ERROR;
        }
    };
    let doc = ReportDocument::new(&cloud, tol, &analysis);
    if let Some(p) = report_path {
        if let Err(e) = std::fs::write(p, doc.to_json() + "\n") {
            let _ = writeln!(err, "error: {}: {e}", p.display());
            return EXIT_INPUT_ERROR;
        }
    }
    let _ = if json {
        writeln!(out, "{}", doc.to_json())
    } else {
        write!(out, "{}", summary_table(&analysis))
    };
    if checks_pass(&analysis) {
        EXIT_OK
    } else {
        let _ = writeln!(err, "check failed: {}", path.display());
        EXIT_CHECK_FAILED
    }
}

fn collect_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        let meta = std::fs::metadata(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        if meta.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|e| e.is_file())
                .filter(|e| !e.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

/// Runs the checks on every file (directories are expanded one level) and
/// prints one PASS / FAIL / ERROR line per file.
pub fn cmd_verify(
    paths: &[PathBuf],
    tol: &ToleranceConfig,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let files = match collect_files(paths) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    if files.is_empty() {
        let _ = writeln!(err, "error: no input files");
        return EXIT_INPUT_ERROR;
    }
    let (mut pass, mut fail, mut errors) = (0, 0, 0);
    for file in &files {
        match analyze_file(file, tol) {
            Ok((_, a)) if checks_pass(&a) => {
                pass += 1;
                let _ = writeln!(out, "PASS  {}  g2={}", file.display(), a.verify.g2_flag);
            }
            Ok((_, a)) => {
                fail += 1;
                let _ = writeln!(
                    out,
                    "FAIL  {}  euler={} g2_census={} g2_flag={} stanley={} dual_g2={:?}",
                    file.display(),
                    a.euler,
                    a.verify.g2_census,
                    a.verify.g2_flag,
                    a.verify.stanley_ok,
                    a.verify.dual_g2
                );
            }
            Err(e) => {
                errors += 1;
                let _ = writeln!(out, "ERROR {}  {e}", file.display());
            }
        }
    }
    let _ = writeln!(out, "{pass} passed, {fail} failed, {errors} input errors");
    if errors > 0 {
        EXIT_INPUT_ERROR
    } else if fail > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

#[derive(Debug, Clone)]
pub struct GenerateOptions {
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub html: Option<PathBuf>,
    /// Schedule settings; `n` and `seed` are overridden per trial.
    pub flow: FlowConfig,
    pub tol: ToleranceConfig,
}

impl GenerateOptions {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("--trials must be positive".into()));
        }
        if self.n_list.is_empty() {
            return Err(Error::InvalidConfig("empty range of n".into()));
        }
        self.tol.validate()?;
        for &n in &self.n_list {
            FlowConfig { n, ..self.flow.clone() }.validate()?;
        }
        Ok(())
    }
}

fn format_summary(s: &SweepSummary) -> String {
    format!(
        "trials {}, converged {}, collapsed {}, certified {}, certified in range {}, equality {}, bound violations {}\n",
        s.trials,
        s.converged,
        s.collapsed,
        s.certified,
        s.certified_in_range,
        s.equality_in_range,
        s.bound_violations.len()
    )
}

/// Runs the sweep, writes the table and prints the summary. Exit 1 only if a
/// certified configuration has e(G) < 3f₀ − 5.
pub fn cmd_generate(opts: &GenerateOptions, out: &mut impl Write, err: &mut impl Write) -> i32 {
    if let Err(e) = opts.validate() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT_ERROR;
    }
    let result = match sweep(&opts.n_list, opts.trials, opts.seed, &opts.flow, &opts.tol) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let written = rows_to_csv(&result.rows).and_then(|csv| {
        std::fs::write(&opts.out, csv).map_err(|e| Error::Io(format!("{}: {e}", opts.out.display())))?;
        if let Some(h) = &opts.html {
            std::fs::write(h, rows_to_html(&result.rows))
                .map_err(|e| Error::Io(format!("{}: {e}", h.display())))?;
        }
        Ok(())
    });
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT_ERROR;
    }
    for row in &result.rows {
        if let Some(reason) = &row.failure {
            let _ = writeln!(err, "n={} trial={}: unclassified: {reason}", row.n, row.trial);
        }
    }
    let _ = write!(out, "{}", format_summary(&result.summary));
    if result.summary.bound_violations.is_empty() {
        EXIT_OK
    } else {
        for (n, t) in &result.summary.bound_violations {
            let _ = writeln!(err, "bound violated: n={n} trial={t}");
        }
        EXIT_CHECK_FAILED
    }
}

/// Writes a catalog polytope as a point file, to `dest` or to `out`; with no
/// name, lists the catalog.
pub fn cmd_catalog(
    name: Option<&str>,
    dest: Option<&Path>,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let Some(name) = name else {
        for n in catalog::NAMES {
            let _ = writeln!(out, "{n}");
        }
        return EXIT_OK;
    };
    let cloud = match catalog::by_name(name) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e} (known: {})", catalog::NAMES.join(", "));
            return EXIT_INPUT_ERROR;
        }
    };
    let text = format_points(cloud.points(), Some(name));
    match dest {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                let _ = writeln!(err, "error: {}: {e}", p.display());
                return EXIT_INPUT_ERROR;
            }
        }
        None => {
            let _ = write!(out, "{text}");
        }
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_catalog(dir: &Path, name: &str) -> PathBuf {
        let p = dir.join(format!("{name}.txt"));
        assert_eq!(cmd_catalog(Some(name), Some(&p), &mut Vec::new(), &mut Vec::new()), 0);
        p
    }

    #[test]
    fn analyze_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let tol = ToleranceConfig::exact();
        let simplex = write_catalog(dir.path(), "simplex");
        let mut out = Vec::new();
        assert_eq!(cmd_analyze(&simplex, &tol, true, None, &mut out, &mut Vec::new()), 0);
        let json: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(json["verify"]["theorem1"]["equality"], true);

        let bad = dir.path().join("bad.txt");
        std::fs::write(&bad, "1 0 0 0\n1 2 x 4\n").unwrap();
        let mut err = Vec::new();
        assert_eq!(cmd_analyze(&bad, &tol, false, None, &mut Vec::new(), &mut err), 2);
        assert!(String::from_utf8(err).unwrap().contains("line 2"));
    }

    #[test]
    fn verify_directory_of_catalog_files() {
        let dir = tempfile::tempdir().unwrap();
        for n in catalog::NAMES {
            write_catalog(dir.path(), n);
        }
        let mut out = Vec::new();
        let code = cmd_verify(&[dir.path().to_path_buf()], &ToleranceConfig::exact(), &mut out, &mut Vec::new());
        let text = String::from_utf8(out).unwrap();
        assert_eq!(code, 0, "{text}");
        assert_eq!(text.matches("PASS").count(), 4);
    }

    #[test]
    fn verify_reports_flat_file_as_input_error() {
        let dir = tempfile::tempdir().unwrap();
        let flat = dir.path().join("flat.txt");
        let pts = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];
        let text: String = pts.iter().map(|p| format!("{} {} {} {}\n", p[0], p[1], p[2], p[3])).collect();
        std::fs::write(&flat, text).unwrap();
        let mut out = Vec::new();
        assert_eq!(cmd_verify(&[flat], &ToleranceConfig::exact(), &mut out, &mut Vec::new()), 2);
        assert!(String::from_utf8(out).unwrap().starts_with("ERROR"));
        let missing = dir.path().join("missing");
        assert_eq!(cmd_verify(&[missing], &ToleranceConfig::exact(), &mut Vec::new(), &mut Vec::new()), 2);
    }

    #[test]
    fn generate_rejects_zero_trials() {
        let dir = tempfile::tempdir().unwrap();
        let opts = GenerateOptions {
            n_list: vec![5],
            trials: 0,
            seed: 7,
            out: dir.path().join("t.csv"),
            html: None,
            flow: FlowConfig::new(5, 0),
            tol: ToleranceConfig::flow(),
        };
        assert_eq!(cmd_generate(&opts, &mut Vec::new(), &mut Vec::new()), 2);
        assert!(!opts.out.exists());
    }

    #[test]
    fn unknown_catalog_name() {
        let mut err = Vec::new();
        assert_eq!(cmd_catalog(Some("borsuk"), None, &mut Vec::new(), &mut err), 2);
        assert!(String::from_utf8(err).unwrap().contains("borsuk"));
    }
}
