//! The stored tables and their regeneration from the replayed cases.

use serde::Serialize;

use super::{CaseReport, ReplayOptions};
use crate::derivation::{Expr, KnowledgeBase};
use crate::error::ReplayError;
use crate::scenario::Scenario;

/// Columns as `(heading, k)` for the expression `1 + kx`.
pub const TABLE1_COLUMNS: [(&str, &str); 5] =
    [("1-x", "-1"), ("1+5x", "5"), ("1-5x", "-5"), ("1+x/5", "1/5"), ("1-x/5", "-1/5")];

/// `(x, 1+x, cells)` in the column order above.
static TABLE1: [StoredRow; 8] = [
    ("2", "1", ["{1,-1}", "{1}", "{1}", "{1}", "{1}"]),
    ("2", "-5", ["{-1}", "{-5}", "{1,-1}", "{-1,5}", "{1,-1}"]),
    ("-2", "1", ["{1}", "{1,-1}", "{1,-5}", "{1}", "{-1,5}"]),
    ("-2", "-1", ["{1,-5}", "{-1}", "{1,-5}", "{5,-5}", "{-5}"]),
    ("10", "1", ["{1,-1}", "{1,-5}", "{1}", "{1}", "{1}"]),
    ("10", "-5", ["{-1}", "{-5}", "{1,-1}", "{1,-5}", "{1}"]),
    ("-10", "1", ["{1,-5}", "{1,-1}", "{1}", "{1}", "{1,-5}"]),
    ("-10", "-1", ["{1,-5}", "{1,-1}", "{1,-5}", "{1,-1}", "{-5}"]),
];

/// Columns as `(heading, k)`; `k = ±1/2` stands for `2 ± x`.
pub const TABLE3_COLUMNS: [(&str, &str); 5] =
    [("1-x", "-1"), ("1+2x", "2"), ("1-2x", "-2"), ("2+x", "1/2"), ("2-x", "-1/2")];

static TABLE3: [StoredRow; 8] = [
    ("c", "1", ["{1,-1}", "{1}", "{1,-1}", "{2}", "{2,-2}"]),
    ("c", "-2", ["{1}", "{-2}", "{1}", "{-1,2}", "{2}"]),
    ("-c", "1", ["{1,-2}", "{1,-1}", "{1,-2}", "{2}", "{-1,2}"]),
    ("-c", "-1", ["{1}", "{-1}", "{1}", "{2,-2}", "{2}"]),
    ("2c", "1", ["{1,-1}", "{1,-2}", "{1,-1}", "{2}", "{2,-2}"]),
    ("2c", "-2", ["{1}", "{-2}", "{1}", "{1,-2}", "{2}"]),
    ("-2c", "1", ["{1,-2}", "{1,-1}", "{1,-2}", "{2}", "{-1,2}"]),
    ("-2c", "-1", ["{1}", "{-1}", "{1}", "{2,-2}", "{2}"]),
];

pub const TABLE2_COLUMNS: [&str; 3] = ["c-2", "c-3", "c-4"];

/// Classes of `c - 2, c - 3, c - 4` in each branch for the class of 3.
pub const TABLE2: [(Scenario, [&str; 3]); 2] =
    [(Scenario::CaseB3Is2, ["-2", "-2", "-1"]), (Scenario::CaseB3Is1, ["-2", "-1", "-1"])];

type StoredRow = (&'static str, &'static str, [&'static str; 5]);

fn lookup(rows: &'static [StoredRow], heads: &[(&str, &str); 5], x: &str, one: &str, col: &str) -> Option<&'static str> {
    let j = heads.iter().position(|(h, _)| *h == col)?;
    rows.iter().find(|(a, b, _)| *a == x && *b == one).map(|(_, _, c)| c[j])
}

pub fn table1_cell(x: &str, one: &str, col: &str) -> Option<&'static str> {
    lookup(&TABLE1, &TABLE1_COLUMNS, x, one, col)
}

pub fn table3_cell(x: &str, one: &str, col: &str) -> Option<&'static str> {
    lookup(&TABLE3, &TABLE3_COLUMNS, x, one, col)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub expr: String,
    pub derived: Vec<String>,
    pub stored: Vec<String>,
    pub contained: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub row: String,
    pub status: String,
    pub cells: Vec<TableCell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableBranch {
    pub scenario: Scenario,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub columns: Vec<String>,
    pub branches: Vec<TableBranch>,
    /// Table 3 only: both branches give the same derived cells.
    pub identical_across_branches: Option<bool>,
    pub ok: bool,
}

/// Regenerates a table from the replayed cases and compares with the stored cells.
pub fn generate_table(n: u8, opts: &ReplayOptions) -> Result<TableReport, ReplayError> {
    match n {
        1 | 3 => {
            let id = if n == 1 { "table-1" } else { "table-3" };
            let reports = super::replay(id, opts)?;
            Ok(table_from_reports(n, &reports))
        }
        2 => table_2(opts),
        _ => Err(ReplayError::UnknownTable(n.to_string())),
    }
}

fn table_from_reports(n: u8, reports: &[CaseReport]) -> TableReport {
    let heads = if n == 1 { TABLE1_COLUMNS } else { TABLE3_COLUMNS };
    let mut branches: Vec<TableBranch> = Vec::new();
    for r in reports {
        let row = TableRow {
            row: r.case.clone(),
            status: r.status.name().to_string(),
            cells: r
                .targets
                .iter()
                .map(|t| TableCell {
                    expr: t.target.clone(),
                    derived: t.derived.clone(),
                    stored: t.goal.clone(),
                    contained: t.holds && !t.derived.is_empty(),
                })
                .collect(),
        };
        match branches.iter_mut().find(|b| b.scenario == r.scenario) {
            Some(b) => b.rows.push(row),
            None => branches.push(TableBranch { scenario: r.scenario, rows: vec![row] }),
        }
    }
    let identical = (n == 3).then(|| {
        branches.windows(2).all(|w| {
            w[0].rows.len() == w[1].rows.len()
                && w[0].rows.iter().zip(&w[1].rows).all(|(a, b)| a.cells == b.cells)
        })
    });
    let ok = reports.iter().all(|r| r.ok())
        && branches.iter().all(|b| b.rows.iter().all(|r| r.cells.iter().all(|c| c.contained)))
        && identical.unwrap_or(true);
    TableReport {
        table: n,
        columns: heads.iter().map(|(h, _)| h.to_string()).collect(),
        branches,
        identical_across_branches: identical,
        ok,
    }
}

/// Recomputes each stored scalar class with the engine's scalar rule.
pub(crate) fn table2_rows() -> Vec<(Scenario, Vec<TableCell>)> {
    TABLE2
        .iter()
        .map(|(scenario, stored)| {
            let kb = KnowledgeBase::new(*scenario);
            let g = scenario.group();
            let cells = TABLE2_COLUMNS
                .iter()
                .zip(stored)
                .map(|(col, want)| {
                    let got = Expr::parse(col)
                        .ok()
                        .and_then(|e| e.as_constant())
                        .and_then(|s| kb.scalar_class(&s).ok().flatten())
                        .map(|c| vec![c.label()])
                        .unwrap_or_default();
                    let stored = vec![g.parse(want).map(|c| c.label()).unwrap_or_else(|_| want.to_string())];
                    TableCell { expr: col.to_string(), contained: got == stored, derived: got, stored }
                })
                .collect();
            (*scenario, cells)
        })
        .collect()
}

fn table_2(_opts: &ReplayOptions) -> Result<TableReport, ReplayError> {
    let branches: Vec<TableBranch> = table2_rows()
        .into_iter()
        .map(|(scenario, cells)| {
            let ok = cells.iter().all(|c| c.contained);
            TableBranch {
                scenario,
                rows: vec![TableRow {
                    row: format!("3 ~ {}", scenario.three().label()),
                    status: if ok { "proved" } else { "stuck" }.into(),
                    cells,
                }],
            }
        })
        .collect();
    let ok = branches.iter().all(|b| b.rows.iter().all(|r| r.cells.iter().all(|c| c.contained)));
    Ok(TableReport {
        table: 2,
        columns: TABLE2_COLUMNS.iter().map(|s| s.to_string()).collect(),
        branches,
        identical_across_branches: None,
        ok,
    })
}

/// Fixed-width rendering in the stored layout: one block per branch, rows
/// by case and columns by expression; `!` marks a cell outside the stored one.
pub fn render_text(t: &TableReport) -> String {
    let mut out = String::new();
    for b in &t.branches {
        out.push_str(&format!("Table {} ({})\n", t.table, b.scenario.name()));
        let mut grid: Vec<Vec<String>> = vec![std::iter::once("case".to_string()).chain(t.columns.iter().cloned()).collect()];
        for r in &b.rows {
            let mut line = vec![r.row.clone()];
            for c in &r.cells {
                let mut cell = set_text(&c.derived);
                if !c.contained {
                    cell.push_str(&format!(" ! {}", set_text(&c.stored)));
                }
                line.push(cell);
            }
            grid.push(line);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|j| grid.iter().map(|l| l.get(j).map_or(0, |s| s.chars().count())).max().unwrap_or(0))
            .collect();
        for line in &grid {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out.push('\n');
    }
    if let Some(same) = t.identical_across_branches {
        out.push_str(&format!("identical across branches: {same}\n"));
    }
    out.push_str(&format!("verdict: {}\n", if t.ok { "pass" } else { "fail" }));
    out
}

fn set_text(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

/// Markdown rendering: one table per branch; a cell shows the derived set,
/// followed by the stored set when they differ.
pub fn render_markdown(t: &TableReport) -> String {
    let mut out = String::new();
    for b in &t.branches {
        out.push_str(&format!("### Table {} ({})\n\n", t.table, b.scenario.name()));
        out.push_str("| case |");
        for c in &t.columns {
            out.push_str(&format!(" {c} |"));
        }
        out.push_str("\n|---|");
        for _ in &t.columns {
            out.push_str("---|");
        }
        out.push('\n');
        for r in &b.rows {
            out.push_str(&format!("| {} |", r.row));
            for c in &r.cells {
                let d = set_text(&c.derived);
                if c.derived == c.stored {
                    out.push_str(&format!(" {d} |"));
                } else {
                    let mark = if c.contained { "⊆" } else { "⊄" };
                    out.push_str(&format!(" {d} {mark} {} |", set_text(&c.stored)));
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    if let Some(same) = t.identical_across_branches {
        out.push_str(&format!("identical across branches: {same}\n"));
    }
    out.push_str(&format!("verdict: {}\n", if t.ok { "pass" } else { "fail" }));
    out
}
