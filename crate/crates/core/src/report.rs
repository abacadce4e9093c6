//! Deterministic text rendering of reports.
//!
//! Two formats: `Table` is padded, human-first output whose per-type
//! statistics columns follow the order type, n, m, sigma_k, R, sigma_R;
//! `Structured` is comma-separated with a header row and full precision,
//! meant for machine diffing. Undefined quantities render as `undef` in
//! both, never as zeros.

use std::fmt::Write as _;

use crate::detect::DetectResult;
use crate::graph::Violation;
use crate::relevance::{LinkRelevance, LinkTypeRelevance, NodeRelevance, PairTypeMatrix, RelevanceOutlier};
use crate::stats::{DegreeDistribution, PathMatrix, RemovalImpact, TypeStatsReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Table,
    Structured,
}

fn opt3(v: Option<f64>) -> String {
    v.map_or_else(|| "undef".to_string(), |x| format!("{x:.3}"))
}

fn opt6(v: Option<f64>) -> String {
    v.map_or_else(|| "undef".to_string(), |x| format!("{x:.6}"))
}

fn pad_table(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                // first column left-aligned
                let _ = write!(line, "{cell:<width$}", width = widths[0]);
            } else {
                let _ = write!(line, "  {cell:>width$}", width = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn render_type_stats(report: &TypeStatsReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "yr-mode: {}", report.yr_mode);
            let _ = writeln!(out, "nodes: {}", report.total_nodes);
            let _ = writeln!(out, "links: {}", report.total_links);
            let mut rows = vec![vec![
                "type".to_string(),
                "n".to_string(),
                "m".to_string(),
                "sigma_k".to_string(),
                "R".to_string(),
                "sigma_R".to_string(),
            ]];
            for (deg, disp) in report.degree.iter().zip(&report.disparity) {
                rows.push(vec![
                    deg.node_type.clone(),
                    deg.n.to_string(),
                    opt3(deg.neighbors_per_type),
                    opt3(deg.degree_dispersion),
                    opt3(disp.ratio),
                    opt3(disp.ratio_dispersion),
                ]);
            }
            out.push_str(&pad_table(&rows));
            out
        }
        ReportFormat::Structured => {
            let mut out = String::new();
            let _ = writeln!(out, "yr-mode,{}", report.yr_mode);
            let _ = writeln!(out, "nodes,{}", report.total_nodes);
            let _ = writeln!(out, "links,{}", report.total_links);
            let _ = writeln!(
                out,
                "type,n,k0,mean_degree,mean_square_degree,m,sigma_k,contributing,y2_mean,y2_sigma,y2_random,R,sigma_R"
            );
            for (deg, disp) in report.degree.iter().zip(&report.disparity) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{:.6},{},{}",
                    deg.node_type,
                    deg.n,
                    deg.allowed_types,
                    opt6(deg.mean_degree),
                    opt6(deg.mean_square_degree),
                    opt6(deg.neighbors_per_type),
                    opt6(deg.degree_dispersion),
                    disp.contributing,
                    opt6(disp.mean),
                    opt6(disp.dispersion),
                    disp.random_baseline,
                    opt6(disp.ratio),
                    opt6(disp.ratio_dispersion),
                );
            }
            out
        }
    }
}

pub fn render_violations(violations: &[Violation]) -> String {
    if violations.is_empty() {
        return "conformant: no violations\n".to_string();
    }
    let mut out = format!("violations: {}\n", violations.len());
    for v in violations {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn render_degree_distributions(
    dists: &[DegreeDistribution],
    format: ReportFormat,
) -> String {
    let mut rows = vec![vec![
        "type".to_string(),
        "degree".to_string(),
        "count".to_string(),
    ]];
    for d in dists {
        for (k, c) in &d.frequencies {
            rows.push(vec![d.node_type.clone(), k.to_string(), c.to_string()]);
        }
    }
    match format {
        ReportFormat::Table => pad_table(&rows),
        ReportFormat::Structured => rows
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    }
}

pub fn render_path_matrix(matrix: &PathMatrix, format: ReportFormat) -> String {
    let mut rows = vec![vec![
        "source".to_string(),
        "target".to_string(),
        "mean".to_string(),
        "reachable".to_string(),
        "unreachable".to_string(),
    ]];
    for ((a, b), cell) in &matrix.cells {
        rows.push(vec![
            a.clone(),
            b.clone(),
            match format {
                ReportFormat::Table => opt3(cell.mean),
                ReportFormat::Structured => opt6(cell.mean),
            },
            cell.reachable.to_string(),
            cell.unreachable.to_string(),
        ]);
    }
    match format {
        ReportFormat::Table => pad_table(&rows),
        ReportFormat::Structured => rows
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    }
}

pub fn render_node_relevance(rows_in: &[NodeRelevance], format: ReportFormat) -> String {
    let mut rows = vec![vec![
        "node".to_string(),
        "mode".to_string(),
        "value".to_string(),
        "tau".to_string(),
        "useful".to_string(),
    ]];
    for r in rows_in {
        rows.push(vec![
            r.node.clone(),
            r.mode.to_string(),
            match format {
                ReportFormat::Table => format!("{:.3}", r.value),
                ReportFormat::Structured => format!("{:.6}", r.value),
            },
            format!("{}", r.threshold),
            r.useful.to_string(),
        ]);
    }
    match format {
        ReportFormat::Table => pad_table(&rows),
        ReportFormat::Structured => rows
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    }
}

pub fn render_link_type_relevance(
    rows_in: &[LinkTypeRelevance],
    format: ReportFormat,
) -> String {
    let mut rows = vec![vec![
        "link_type".to_string(),
        "count".to_string(),
        "mean_s".to_string(),
        "sigma".to_string(),
    ]];
    for r in rows_in {
        let (mean, sigma) = match format {
            ReportFormat::Table => (format!("{:.3}", r.mean), format!("{:.3}", r.stddev)),
            ReportFormat::Structured => (format!("{:.6}", r.mean), format!("{:.6}", r.stddev)),
        };
        rows.push(vec![
            r.link_type.clone(),
            r.link_count.to_string(),
            mean,
            sigma,
        ]);
    }
    match format {
        ReportFormat::Table => pad_table(&rows),
        ReportFormat::Structured => rows
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    }
}

pub fn render_outliers(rows_in: &[RelevanceOutlier], format: ReportFormat) -> String {
    let mut rows = vec![vec![
        "a".to_string(),
        "b".to_string(),
        "link_type".to_string(),
        "s".to_string(),
        "type_mean".to_string(),
        "type_sigma".to_string(),
    ]];
    for r in rows_in {
        let fmt = |x: f64| match format {
            ReportFormat::Table => format!("{x:.3}"),
            ReportFormat::Structured => format!("{x:.6}"),
        };
        rows.push(vec![
            r.a.clone(),
            r.b.clone(),
            r.link_type.clone(),
            fmt(r.score),
            fmt(r.type_mean),
            fmt(r.type_stddev),
        ]);
    }
    match format {
        ReportFormat::Table => pad_table(&rows),
        ReportFormat::Structured => rows
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    }
}

pub fn render_link_relevance(rows_in: &[LinkRelevance], format: ReportFormat) -> String {
    let mut rows = vec![vec![
        "a".to_string(),
        "b".to_string(),
        "common".to_string(),
        "total".to_string(),
        "s".to_string(),
    ]];
    for r in rows_in {
        rows.push(vec![
            r.a.clone(),
            r.b.clone(),
            r.common.to_string(),
            r.total.to_string(),
            match format {
                ReportFormat::Table => format!("{:.3}", r.score),
                ReportFormat::Structured => format!("{:.6}", r.score),
            },
        ]);
    }
    match format {
        ReportFormat::Table => pad_table(&rows),
        ReportFormat::Structured => rows
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    }
}

pub fn render_pair_type_matrix(matrix: &PairTypeMatrix, format: ReportFormat) -> String {
    let mut rows = vec![vec![
        "type_a".to_string(),
        "type_b".to_string(),
        "count".to_string(),
    ]];
    for (a, b, c) in matrix.entries() {
        rows.push(vec![a.to_string(), b.to_string(), c.to_string()]);
    }
    match format {
        ReportFormat::Table => format!("center: {}\n{}", matrix.center, pad_table(&rows)),
        ReportFormat::Structured => {
            format!(
                "center,{}\n{}\n",
                matrix.center,
                rows.iter().map(|r| r.join(",")).collect::<Vec<_>>().join("\n")
            )
        }
    }
}

pub fn render_removal_impact(rows_in: &[RemovalImpact], format: ReportFormat) -> String {
    let mut rows = vec![vec![
        "type".to_string(),
        "remaining".to_string(),
        "baseline_mean".to_string(),
        "removed_mean".to_string(),
        "mean_increase".to_string(),
        "newly_unreachable".to_string(),
        "disconnects".to_string(),
    ]];
    for r in rows_in {
        let fmt = |x: Option<f64>| match format {
            ReportFormat::Table => opt3(x),
            ReportFormat::Structured => opt6(x),
        };
        rows.push(vec![
            r.node_type.clone(),
            r.remaining_nodes.to_string(),
            fmt(r.baseline_mean),
            fmt(r.removed_mean),
            fmt(r.mean_increase),
            r.newly_unreachable.to_string(),
            r.disconnects().to_string(),
        ]);
    }
    match format {
        ReportFormat::Table => pad_table(&rows),
        ReportFormat::Structured => rows
            .iter()
            .map(|r| r.join(","))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    }
}

/// Summary line for a detection result; the subgraph itself is exported via
/// the canonical document form.
pub fn detect_summary(result: &DetectResult) -> String {
    format!(
        "source={} target={} distance={} nodes={} links={}\n",
        result.source,
        result.target,
        result
            .distance
            .map_or_else(|| "unreachable".to_string(), |d| d.to_string()),
        result.subgraph.node_count(),
        result.subgraph.link_count(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{type_stats_report, YrMode};
    use crate::testutil::meeting_fixture;

    #[test]
    fn table_header_follows_column_order() {
        let (graph, schema) = meeting_fixture();
        let report = type_stats_report(&graph, &schema, YrMode::Literal);
        let text = render_type_stats(&report, ReportFormat::Table);
        let header = text.lines().nth(3).unwrap();
        let cols: Vec<&str> = header.split_whitespace().collect();
        assert_eq!(cols, vec!["type", "n", "m", "sigma_k", "R", "sigma_R"]);
        assert!(text.starts_with("yr-mode: literal\n"));
    }

    #[test]
    fn structured_is_comma_separated() {
        let (graph, schema) = meeting_fixture();
        let report = type_stats_report(&graph, &schema, YrMode::Normalized);
        let text = render_type_stats(&report, ReportFormat::Structured);
        assert!(text.starts_with("yr-mode,normalized\n"));
        let header = text.lines().nth(3).unwrap();
        assert!(header.starts_with("type,n,k0,"));
    }

    #[test]
    fn undefined_marker_not_zero() {
        let mut schema = crate::ontology::OntologySchema::new();
        schema.declare_node_type("empty");
        let graph = crate::graph::build_graph(vec![], vec![], &schema).unwrap();
        let report = type_stats_report(&graph, &schema, YrMode::Literal);
        let text = render_type_stats(&report, ReportFormat::Table);
        assert!(text.contains("undef"));
    }
}
