//! Plot-ready files: CSV with a header row and 12 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hjcouple::coupling::project_sl;
use hjcouple::diagnostics::ErrorReport;
use hjcouple::experiment::ConvergenceTable;
use hjcouple::grid::{Alignment, Field};

pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

/// Three significant digits, for printed tables.
pub fn short(v: f64) -> String {
    format!("{v:.2E}")
}

pub fn write(dir: &Path, name: &str, content: &str) -> std::io::Result<()> {
    fs::write(dir.join(name), content)
}

pub fn columns(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

pub fn solution_csv(field: &Field) -> String {
    let rows = field.points().into_iter().zip(field.values()).map(|(x, v)| vec![num(x), num(*v)]);
    columns(&["x", "value"], rows)
}

pub fn sigma_csv(field: &Field, sigma: &[u8]) -> String {
    let rows = field.grid().nodes().into_iter().zip(sigma).map(|(x, s)| vec![num(x), s.to_string()]);
    columns(&["x", "sigma"], rows)
}

/// Node values of any field; cell averages are projected onto nodes.
pub fn at_nodes(field: &Field) -> Vec<f64> {
    match field.alignment() {
        Alignment::NodeCentered => field.values().to_vec(),
        Alignment::CellCentered => {
            let n = field.grid().node_count() as isize;
            (0..n).map(|j| project_sl(field.ghost(j - 1), field.ghost(j))).collect()
        }
    }
}

pub const ERROR_HEADER: [&str; 6] = ["dt", "dx", "l1", "l2", "linf", "linf_reg"];

pub fn error_fields(e: &ErrorReport) -> Vec<String> {
    [e.dt, e.dx, e.l1, e.l2, e.linf, e.linf_reg].into_iter().map(num).collect()
}

/// Aligned text table and CSV; order columns only when there are two rows or more.
pub fn convergence(table: &ConvergenceTable, with_reg: bool) -> (String, String) {
    let mut names = vec!["dt", "dx", "l1", "l2", "linf"];
    if with_reg {
        names.push("linf_reg");
    }
    let orders = table.rows.len() > 1;
    if orders {
        names.extend(["order_l1", "order_linf"]);
    }
    let o1 = table.orders(|r| r.l1);
    let oinf = table.orders(|r| r.linf);
    let mut text = String::new();
    let mut csv = names.join(",") + "\n";
    let _ = writeln!(text, "{} / {}", table.problem, table.scheme);
    let head: Vec<String> = names.iter().map(|n| format!("{n:>10}")).collect();
    let _ = writeln!(text, "{}", head.join(" "));
    for (k, r) in table.rows.iter().enumerate() {
        let mut vals = vec![r.dt, r.dx, r.l1, r.l2, r.linf];
        if with_reg {
            vals.push(r.linf_reg);
        }
        let mut cells: Vec<String> = vals.iter().map(|&v| format!("{:>10}", short(v))).collect();
        let mut raw: Vec<String> = vals.iter().map(|&v| num(v)).collect();
        if orders {
            for o in [&o1, &oinf] {
                match k.checked_sub(1).map(|i| o[i]) {
                    Some(v) => {
                        cells.push(format!("{v:>10.3}"));
                        raw.push(num(v));
                    }
                    None => {
                        cells.push(format!("{:>10}", "-"));
                        raw.push(String::new());
                    }
                }
            }
        }
        let _ = writeln!(text, "{}", cells.join(" "));
        csv.push_str(&raw.join(","));
        csv.push('\n');
    }
    (text, csv)
}
