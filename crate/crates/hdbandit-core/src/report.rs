//! CSV rendering for experiment outputs.
//!
//! All numbers are written with Rust's shortest round-trip float formatting
//! and rows follow input order, so a rerun with the same config and seed
//! produces byte-identical files.

use std::fmt::Write as _;

use crate::harness::{MemoryRow, SweepCell};

/// Header of the per-cell results table.
pub const SUMMARY_HEADER: &str = "agent,N,d,D,bits,epsilon,mean_reward,std,replicates";

/// Header of the memory-footprint table.
pub const MEMORY_HEADER: &str = "algorithm,bits,d,kib";

/// One row per tuned (agent, N, d) cell, in input order.
pub fn summary_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for cell in cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            cell.spec.label(),
            cell.num_actions,
            cell.context_dim,
            cell.hv_dim,
            cell.spec.storage_bits(),
            cell.summary.epsilon,
            cell.summary.mean_reward,
            cell.summary.std_reward,
            cell.summary.replicates,
        )
        .expect("writing to String cannot fail");
    }
    out
}

/// Per-round cumulative-reward trajectories, one `round` column plus a
/// mean and a standard-error column per agent. All cells must cover the
/// same horizon (they come from one run config).
pub fn trajectory_csv(cells: &[SweepCell]) -> String {
    assert!(!cells.is_empty(), "no cells to tabulate");
    let horizon = cells[0].summary.mean_cumulative.len();
    assert!(
        cells
            .iter()
            .all(|c| c.summary.mean_cumulative.len() == horizon),
        "trajectory lengths differ between agents"
    );

    let mut out = String::from("round");
    for cell in cells {
        let label = cell.spec.label();
        write!(out, ",{label}_mean_cumulative_reward,{label}_stderr")
            .expect("writing to String cannot fail");
    }
    out.push('\n');
    for round in 0..horizon {
        write!(out, "{}", round + 1).expect("writing to String cannot fail");
        for cell in cells {
            write!(
                out,
                ",{},{}",
                cell.summary.mean_cumulative[round], cell.summary.stderr_cumulative[round]
            )
            .expect("writing to String cannot fail");
        }
        out.push('\n');
    }
    out
}

/// The memory-footprint table, one row per (algorithm, d), in input order.
pub fn memory_csv(rows: &[MemoryRow]) -> String {
    let mut out = String::from(MEMORY_HEADER);
    out.push('\n');
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.algorithm, row.bits, row.context_dim, row.kib
        )
        .expect("writing to String cannot fail");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::AgentSpec;
    use crate::harness::{memory_table, Summary, MEMORY_DIMS};

    fn cell(label_spec: AgentSpec, n: usize, d: usize, eps: f64) -> SweepCell {
        SweepCell {
            spec: label_spec,
            num_actions: n,
            context_dim: d,
            hv_dim: 1024,
            summary: Summary {
                epsilon: eps,
                replicates: 2,
                mean_reward: 0.625,
                std_reward: 0.05,
                stderr_reward: 0.035355339059327376,
                mean_cumulative: vec![0.5, 1.25],
                stderr_cumulative: vec![0.0, 0.25],
            },
        }
    }

    #[test]
    fn summary_csv_layout() {
        let cells = vec![
            cell(AgentSpec::hdcb_prob(3), 10, 5, 0.05),
            cell(AgentSpec::lineps(), 10, 5, 0.1),
        ];
        let csv = summary_csv(&cells);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SUMMARY_HEADER);
        assert_eq!(lines[1], "hdcb_prob_k3,10,5,1024,3,0.05,0.625,0.05,2");
        assert_eq!(lines[2], "lineps,10,5,1024,32,0.1,0.625,0.05,2");
        assert_eq!(lines.len(), 3);
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn trajectory_csv_layout() {
        let cells = vec![
            cell(AgentSpec::hdcb_real(), 10, 5, 0.05),
            cell(AgentSpec::hdcb_bin(3), 10, 5, 0.1),
        ];
        let csv = trajectory_csv(&cells);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "round,hdcb_real_mean_cumulative_reward,hdcb_real_stderr,\
             hdcb_bin_q3_mean_cumulative_reward,hdcb_bin_q3_stderr"
        );
        assert_eq!(lines[1], "1,0.5,0,0.5,0");
        assert_eq!(lines[2], "2,1.25,0.25,1.25,0.25");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn memory_csv_layout() {
        let rows = memory_table(10, &MEMORY_DIMS, 1024);
        let csv = memory_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], MEMORY_HEADER);
        assert_eq!(lines.len(), 41);
        assert!(lines.iter().any(|l| l == &"hdcb_prob_k3,3,8,3.75"));
        // ridge at d=128: 10*(128*128+128)*32 bits = 645 KiB exactly
        assert!(lines.iter().any(|l| l == &"lineps,32,128,645"));
    }

    #[test]
    fn csv_output_is_reproducible() {
        let rows = memory_table(10, &MEMORY_DIMS, 1024);
        assert_eq!(memory_csv(&rows), memory_csv(&rows));
        let cells = vec![cell(AgentSpec::hdcb_prob(7), 15, 10, 0.02)];
        assert_eq!(summary_csv(&cells), summary_csv(&cells));
        assert_eq!(trajectory_csv(&cells), trajectory_csv(&cells));
    }
}
