//! Aligned text tables and CSV rows for reports.

use crate::verify::{
    BoundCheck, BoundsReport, InfoBoundCheck, ProtocolReport, UnambiguousBoundsReport,
};

/// Render rows as a space-padded table. The first row is treated as a
/// header only in the sense that all columns are sized to fit.
pub fn format_table(rows: &[Vec<String>]) -> String {
    if rows.is_empty() {
        return String::new();
    }
    let cols = rows.iter().map(|r| r.len()).max().unwrap();
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:>width$}", cell, width = widths[i]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn report_text(r: &ProtocolReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "classification: {}    max leakage = {:.3e}\n",
        r.classification, r.max_leakage
    ));
    out.push_str(&format!(
        "slots: {} total, {} live    rank = {}, channel = {}\n",
        r.slots(),
        r.live_slots,
        r.d_bar,
        r.channel_dim
    ));
    let taus: Vec<String> = r.taus.iter().map(|t| format!("{t:.6}")).collect();
    out.push_str(&format!(
        "tau: [{}]   mean = {:.6}\n",
        taus.join(", "),
        r.mean_tau()
    ));
    out.push_str("Pr(y|x), rows x = 1.., col 0 = failure:\n");
    let mut rows = Vec::new();
    let mut header = vec!["x \\ y".to_string()];
    header.extend((0..=r.slots()).map(|y| y.to_string()));
    rows.push(header);
    for (x, row) in r.cond_prob.iter().enumerate() {
        let mut cells = vec![(x + 1).to_string()];
        // flush display-only negative zeros
        cells.extend(
            row.iter()
                .map(|&p| format!("{:.4}", if p.abs() < 1e-12 { 0.0 } else { p })),
        );
        rows.push(cells);
    }
    out.push_str(&format_table(&rows));
    out
}

pub fn bounds_text(b: &BoundsReport) -> String {
    let mut rows = vec![
        vec!["quantity".to_string(), "value".to_string()],
        vec!["schmidt rank".into(), b.d_bar.to_string()],
        vec!["channel dimension".into(), b.d_chan.to_string()],
        vec!["capacity (bits)".into(), format!("{:.6}", b.capacity_bits)],
        vec!["deterministic message cap".into(), b.ld_cap.to_string()],
    ];
    if let Some(xi) = b.xi {
        rows.push(vec!["minimum Kraus rank".into(), xi.to_string()]);
    }
    if let Some(mu) = b.mu {
        rows.push(vec!["Kraus-rank message cap".into(), mu.to_string()]);
    }
    if let Some(v) = b.inv_tau_floor {
        rows.push(vec!["mean inverse success floor".into(), format!("{v:.6}")]);
    }
    if let Some(v) = b.avg_tau_cap {
        rows.push(vec![
            "mean success cap (orthogonal isometries)".into(),
            format!("{v:.6}"),
        ]);
    }
    if let Some(v) = b.info_ps_cap {
        rows.push(vec![
            "mean success cap (information)".into(),
            format!("{v:.6}"),
        ]);
    }
    format_table(&rows)
}

pub fn info_bound_text(c: &InfoBoundCheck) -> String {
    format!(
        "information bound: P_s log2 L = {:.6} <= {:.6}   slack = {:.6}  [{}]",
        c.lhs_bits,
        c.rhs_bits,
        c.slack_bits,
        if c.holds { "holds" } else { "VIOLATED" }
    )
}

fn bound_check_text(name: &str, c: &BoundCheck) -> String {
    match c {
        BoundCheck::Skipped { reason } => format!("{name}: skipped ({reason})"),
        BoundCheck::Checked {
            holds,
            lhs,
            rhs,
            margin,
            saturated,
        } => format!(
            "{name}: lhs = {:.6}, rhs = {:.6}, margin = {:.3e}  [{}{}]",
            lhs,
            rhs,
            margin,
            if *holds { "holds" } else { "VIOLATED" },
            if *saturated { ", saturated" } else { "" }
        ),
    }
}

pub fn unambiguous_bounds_text(u: &UnambiguousBoundsReport) -> String {
    format!(
        "{}\n{}",
        bound_check_text("mean inverse success floor", &u.inv_tau),
        bound_check_text("mean success cap", &u.avg_tau)
    )
}

/// CSV header for bound sweeps over states of a fixed rank.
pub fn sweep_csv_header(d_bar: usize) -> String {
    let mut cols: Vec<String> = (1..=d_bar).map(|j| format!("lambda_sq_{j}")).collect();
    cols.extend(
        [
            "capacity_bits",
            "ld_cap",
            "inv_tau_floor",
            "avg_tau_cap",
            "info_ps_cap",
            "tau_simulated",
            "saturation_gap",
        ]
        .map(String::from),
    );
    cols.join(",")
}

/// One CSV row of a bound sweep; `tau_simulated` is the common success
/// probability of the saturated protocol when the rank fits the channel.
pub fn sweep_csv_row(lambda_sq: &[f64], b: &BoundsReport, tau_simulated: Option<f64>) -> String {
    let mut cells: Vec<String> = lambda_sq.iter().map(|v| format!("{v:.12}")).collect();
    cells.push(format!("{:.12}", b.capacity_bits));
    cells.push(b.ld_cap.to_string());
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.12}"));
    cells.push(opt(b.inv_tau_floor));
    cells.push(opt(b.avg_tau_cap));
    cells.push(opt(b.info_ps_cap));
    cells.push(opt(tau_simulated));
    let gap = match (b.avg_tau_cap, tau_simulated) {
        (Some(cap), Some(t)) => Some(cap - t),
        _ => None,
    };
    cells.push(opt(gap));
    cells.join(",")
}

/// CSV rows for boundary-scan probes: `t, defect, feasible`.
pub fn boundary_csv(probes: &[crate::search::BoundaryProbe]) -> String {
    let mut out = String::from("t,defect,feasible\n");
    for p in probes {
        out.push_str(&format!("{:.12},{:.6e},{}\n", p.t, p.defect, p.feasible));
    }
    out
}
