//! File formats: point files, JSON analysis reports and the sweep table in
//! CSV and HTML.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::TableRow;
use crate::geom::{PointCloud, ToleranceConfig, Vec4};
use crate::pipeline::Analysis;
use crate::verify::Theorem1;

pub const SCHEMA_VERSION: u32 = 1;

/// Parses whitespace-separated 4-vectors, one per line; blank lines and lines
/// starting with '#' are skipped. Line numbers in errors are 1-based.
pub fn parse_points(text: &str) -> Result<Vec<Vec4>> {
    let mut points = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: k + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(format!("expected 4 coordinates, found {}", fields.len())));
        }
        let mut v = Vec4::ZERO;
        for (i, field) in fields.iter().enumerate() {
            let x: f64 = field
                .parse()
                .map_err(|_| parse_err(format!("invalid number {field:?}")))?;
            if !x.is_finite() {
                return Err(parse_err(format!("non-finite coordinate {field:?}")));
            }
            v[i] = x;
        }
        points.push(v);
    }
    Ok(points)
}

pub fn read_point_file(path: &Path, eps_unit: f64) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    PointCloud::new(parse_points(&text)?, eps_unit)
}

/// Coordinates with 17 significant digits, which round-trip every double.
pub fn format_points(points: &[Vec4], comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for p in points {
        let _ = writeln!(
            out,
            "{:.16e} {:.16e} {:.16e} {:.16e}",
            p[0], p[1], p[2], p[3]
        );
    }
    out
}

pub fn write_point_file(path: &Path, points: &[Vec4], comment: Option<&str>) -> Result<()> {
    std::fs::write(path, format_points(points, comment))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub points: Vec<[f64; 4]>,
    pub tolerances: ToleranceConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolaritySection {
    pub is_asp: bool,
    pub c: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterSection {
    pub d_spherical: f64,
    pub d_euclidean: f64,
    #[serde(rename = "eG")]
    pub e_g: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KalaiSection {
    pub lhs: i64,
    pub rhs: i64,
}

/// The diameter bound result, or the string "not-applicable" when the
/// polytope is not certified anti-self-polar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Theorem1Section {
    Checked(Theorem1),
    NotApplicable(String),
}

pub const NOT_APPLICABLE: &str = "not-applicable";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySection {
    pub g2_census: i64,
    pub g2_flag: i64,
    pub kalai: KalaiSection,
    pub stanley_ok: bool,
    pub theorem1: Theorem1Section,
    /// g₂ of the polar dual; absent when the origin is not interior.
    pub dual_g2: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub input: InputEcho,
    pub f_vector: [usize; 4],
    pub f03: usize,
    /// j ↦ number of j-gonal 2-faces.
    pub polygon_census: BTreeMap<usize, usize>,
    pub euler_residual: i64,
    /// Absent when the origin is not strictly inside the hull.
    pub polarity: Option<PolaritySection>,
    pub diameter: DiameterSection,
    pub verify: VerifySection,
}

impl ReportDocument {
    pub fn new(cloud: &PointCloud, tol: &ToleranceConfig, a: &Analysis) -> Self {
        let v = &a.verify;
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            input: InputEcho {
                points: cloud.points().iter().map(|p| p.0).collect(),
                tolerances: *tol,
            },
            f_vector: a.stats.f,
            f03: a.stats.f03,
            polygon_census: a.census.a.clone(),
            euler_residual: a.euler,
            polarity: a.polarity.as_ref().map(|p| PolaritySection {
                is_asp: p.is_asp,
                c: p.c,
                residual: p.residual,
            }),
            diameter: DiameterSection {
                d_spherical: a.graph.spherical_d,
                d_euclidean: a.graph.max_dist,
                e_g: a.graph.edge_count(),
            },
            verify: VerifySection {
                g2_census: v.g2_census,
                g2_flag: v.g2_flag,
                kalai: KalaiSection {
                    lhs: v.kalai_lhs,
                    rhs: v.kalai_rhs,
                },
                stanley_ok: v.stanley_ok,
                theorem1: match v.theorem1 {
                    Some(t) => Theorem1Section::Checked(t),
                    None => Theorem1Section::NotApplicable(NOT_APPLICABLE.to_string()),
                },
                dual_g2: v.dual_g2,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const CSV_HEADER: [&str; 18] = [
    "trial", "n", "converged", "collapsed", "d", "in_range", "is_asp", "c", "residual", "f0",
    "f1", "f2", "f3", "f03", "eG", "bound", "equality", "g2",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Table cells in header order; absent values are empty strings.
pub fn row_fields(row: &TableRow) -> [String; 18] {
    let f = |k: usize| opt(row.f.map(|f| f[k]));
    [
        row.trial.to_string(),
        row.n.to_string(),
        row.converged.to_string(),
        row.collapsed.to_string(),
        if row.d.is_finite() { row.d.to_string() } else { String::new() },
        row.in_range.to_string(),
        row.is_asp.to_string(),
        opt(row.c),
        opt(row.residual),
        f(0),
        f(1),
        f(2),
        f(3),
        opt(row.f03),
        opt(row.e_g),
        opt(row.bound),
        opt(row.equality),
        opt(row.g2),
    ]
}

pub fn rows_to_csv(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row_fields(row)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A static HTML page holding the same cells as the CSV.
pub fn rows_to_html(rows: &[TableRow]) -> String {
    let mut out = String::from(
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>Diameter flow sweep</title>\n</head>\n<body>\n<table>\n<thead>\n<tr>",
    );
    for h in CSV_HEADER {
        let _ = write!(out, "<th>{h}</th>");
    }
    out.push_str("</tr>\n</thead>\n<tbody>\n");
    for row in rows {
        out.push_str("<tr>");
        for cell in row_fields(row) {
            let _ = write!(out, "<td>{cell}</td>");
        }
        out.push_str("</tr>\n");
    }
    out.push_str("</tbody>\n</table>\n</body>\n</html>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::pipeline::analyze;

    #[test]
    fn parse_skips_comments_and_blanks() {
        let pts = parse_points("# header\n\n1 0 0 0\n  0 1 0 0  \n# x\n").unwrap();
        assert_eq!(pts, vec![Vec4::basis(0), Vec4::basis(1)]);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = parse_points("1 0 0 0\n\n1 2 x 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        assert!(matches!(parse_points("1 0 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_points("1 0 0 inf\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn coordinates_round_trip_exactly() {
        let c = catalog::cell24();
        let text = format_points(c.points(), Some("24-cell"));
        assert_eq!(parse_points(&text).unwrap(), c.points());
    }

    #[test]
    fn hypercube_report_shape() {
        let tol = ToleranceConfig::exact();
        let cloud = catalog::hypercube();
        let doc = ReportDocument::new(&cloud, &tol, &analyze(&cloud, &tol).unwrap());
        let json: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["verify"]["theorem1"], "not-applicable");
        assert_eq!(json["verify"]["g2_flag"], 2);
        assert_eq!(json["polygon_census"]["4"], 24);
        let back: ReportDocument = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn csv_and_html_hold_the_same_cells() {
        let mut row = crate::flow::classify(catalog::simplex().points(), &ToleranceConfig::flow());
        row.trial = 3;
        let collapsed = TableRow {
            collapsed: true,
            converged: false,
            is_asp: false,
            c: None,
            residual: None,
            f: None,
            f03: None,
            e_g: None,
            bound: None,
            equality: None,
            g2: None,
            ..row.clone()
        };
        let rows = [row, collapsed];
        let csv = rows_to_csv(&rows).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let html = rows_to_html(&rows);
        assert!(!html.contains("<script"));
        for (line, row) in lines.zip(&rows) {
            let cells = row_fields(row);
            assert_eq!(line, cells.join(","));
            let tr: String = cells.iter().map(|c| format!("<td>{c}</td>")).collect();
            assert!(html.contains(&tr));
        }
        assert!(csv.lines().nth(2).unwrap().ends_with(",,,,,,,,,,,"));
    }
}
