//! Result files: rankings, convergence traces, assessment tables.

use std::io::{self, Write};

use maxtile_core::interestingness::{AreaRanked, RankedTile, SizeRow};
use maxtile_core::maxent::TraceEntry;
use serde::Serialize;

#[derive(Debug, Serialize)]
struct RankRecord<'a> {
    rank: usize,
    n_rows: usize,
    n_cols: usize,
    rows: &'a [usize],
    cols: &'a [usize],
    self_info: f64,
    incremental_self_info: f64,
    desc_len: f64,
    ratio: f64,
}

#[derive(Debug, Serialize)]
struct AreaRecord<'a> {
    rank: usize,
    n_rows: usize,
    n_cols: usize,
    rows: &'a [usize],
    cols: &'a [usize],
    area: usize,
    new_cells: usize,
}

pub fn write_ranking_jsonl<W: Write>(ranked: &[RankedTile], mut w: W) -> io::Result<()> {
    for r in ranked {
        let rec = RankRecord {
            rank: r.rank,
            n_rows: r.tile.rows.len(),
            n_cols: r.tile.cols.len(),
            rows: &r.tile.rows,
            cols: &r.tile.cols,
            self_info: r.self_info,
            incremental_self_info: r.incremental_self_info,
            desc_len: r.desc_len,
            ratio: r.ratio,
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn write_area_jsonl<W: Write>(ranked: &[AreaRanked], mut w: W) -> io::Result<()> {
    for r in ranked {
        let rec = AreaRecord {
            rank: r.rank,
            n_rows: r.tile.rows.len(),
            n_cols: r.tile.cols.len(),
            rows: &r.tile.rows,
            cols: &r.tile.cols,
            area: r.area,
            new_cells: r.new_cells,
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

fn preview(ids: &[usize], labels: Option<&[String]>) -> String {
    const SHOWN: usize = 8;
    let name = |&j: &usize| match labels.and_then(|l| l.get(j)) {
        Some(s) => s.clone(),
        None => j.to_string(),
    };
    let mut parts: Vec<String> = ids.iter().take(SHOWN).map(name).collect();
    if ids.len() > SHOWN {
        parts.push(format!("... (+{})", ids.len() - SHOWN));
    }
    parts.join(" ")
}

/// Fixed-width table, one line per tile. `labels` names columns if given.
pub fn write_ranking_table<W: Write>(
    ranked: &[RankedTile],
    labels: Option<&[String]>,
    mut w: W,
) -> io::Result<()> {
    writeln!(
        w,
        "{:>5} {:>5} {:>5} {:>10} {:>10} {:>10} {:>8}  columns",
        "rank", "|I|", "|J|", "info", "info+", "desc_len", "ratio"
    )?;
    for r in ranked {
        writeln!(
            w,
            "{:>5} {:>5} {:>5} {:>10.2} {:>10.2} {:>10.2} {:>8.4}  {}",
            r.rank,
            r.tile.rows.len(),
            r.tile.cols.len(),
            r.self_info,
            r.incremental_self_info,
            r.desc_len,
            r.ratio,
            preview(&r.tile.cols, labels)
        )?;
    }
    w.flush()
}

pub fn write_area_table<W: Write>(
    ranked: &[AreaRanked],
    labels: Option<&[String]>,
    mut w: W,
) -> io::Result<()> {
    writeln!(
        w,
        "{:>5} {:>5} {:>5} {:>8} {:>8}  columns",
        "rank", "|I|", "|J|", "area", "new"
    )?;
    for r in ranked {
        writeln!(
            w,
            "{:>5} {:>5} {:>5} {:>8} {:>8}  {}",
            r.rank,
            r.tile.rows.len(),
            r.tile.cols.len(),
            r.area,
            r.new_cells,
            preview(&r.tile.cols, labels)
        )?;
    }
    w.flush()
}

pub fn write_trace_csv<W: Write>(trace: &[TraceEntry], mut w: W) -> io::Result<()> {
    writeln!(w, "iteration,dual_value,gradient_norm")?;
    for t in trace {
        writeln!(
            w,
            "{},{:e},{:e}",
            t.iteration, t.dual_value, t.gradient_norm
        )?;
    }
    w.flush()
}

pub fn write_sizes_csv<W: Write>(rows: &[SizeRow], mut w: W) -> io::Result<()> {
    writeln!(w, "size,observed,mean,p5,p95")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.size, r.observed, r.mean, r.p5, r.p95)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxtile_core::tiles::Tile;

    fn ranked() -> Vec<RankedTile> {
        vec![RankedTile {
            tile: Tile::new(vec![0, 1], (0..10).collect()),
            self_info: 6.0,
            desc_len: 20.0,
            incremental_self_info: 6.0,
            ratio: 0.3,
            rank: 1,
        }]
    }

    #[test]
    fn jsonl_fields() {
        let mut buf = Vec::new();
        write_ranking_jsonl(&ranked(), &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["rank"], 1);
        assert_eq!(v["n_cols"], 10);
        assert_eq!(v["ratio"], 0.3);
    }

    #[test]
    fn table_truncates_long_column_lists() {
        let mut buf = Vec::new();
        write_ranking_table(&ranked(), None, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .ends_with("0 1 2 3 4 5 6 7 ... (+2)"));
    }

    #[test]
    fn trace_csv_header() {
        let mut buf = Vec::new();
        let trace = [TraceEntry {
            iteration: 0,
            dual_value: 2.5,
            gradient_norm: 0.25,
        }];
        write_trace_csv(&trace, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "iteration,dual_value,gradient_norm\n0,2.5e0,2.5e-1\n"
        );
    }
}
