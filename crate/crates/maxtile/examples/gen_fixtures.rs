//! Regenerates the shipped fixtures under `tests/fixtures`.
//!
//! `cargo run -p maxtile --example gen_fixtures`

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use maxtile::core::rng::stream;
use maxtile::core::synth::TextLike;
use maxtile::core::SparseBinaryMatrix;
use maxtile::io::write_fimi;
use rand::Rng;

const ICDM_ROWS: usize = 859;
const ICDM_COLS: usize = 4976;
const ICDM_ONES: usize = 42_005;

/// A bag-of-words look-alike of the ICDM abstracts, adjusted to exactly
/// `ICDM_ONES` ones with every column used at least once.
fn icdm_like() -> SparseBinaryMatrix {
    let spec = TextLike {
        n_rows: ICDM_ROWS,
        n_cols: ICDM_COLS,
        ..TextLike::abstracts()
    };
    let freqs = spec.column_frequencies();
    let base = spec.generate(2009);
    let mut rows: Vec<BTreeSet<usize>> = base.rows().map(|r| r.iter().copied().collect()).collect();
    let mut rng = stream(2009, u64::MAX);

    let mut used = vec![false; ICDM_COLS];
    for row in &rows {
        for &j in row {
            used[j] = true;
        }
    }
    for (j, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
        rows[rng.gen_range(0..ICDM_ROWS)].insert(j);
    }

    let total = |rows: &[BTreeSet<usize>]| rows.iter().map(BTreeSet::len).sum::<usize>();
    let mut col_count = vec![0usize; ICDM_COLS];
    for row in &rows {
        for &j in row {
            col_count[j] += 1;
        }
    }
    // columns drawn in proportion to their frequency
    let cumulative: Vec<f64> = freqs
        .iter()
        .scan(0.0, |acc, f| {
            *acc += f;
            Some(*acc)
        })
        .collect();
    let mass = *cumulative.last().unwrap();
    while total(&rows) < ICDM_ONES {
        let u = rng.gen::<f64>() * mass;
        let j = cumulative.partition_point(|&c| c <= u).min(ICDM_COLS - 1);
        let i = rng.gen_range(0..ICDM_ROWS);
        if rows[i].insert(j) {
            col_count[j] += 1;
        }
    }
    while total(&rows) > ICDM_ONES {
        let i = rng.gen_range(0..ICDM_ROWS);
        if rows[i].len() < 2 {
            continue;
        }
        let j = *rows[i].iter().nth(rng.gen_range(0..rows[i].len())).unwrap();
        if col_count[j] > 1 {
            rows[i].remove(&j);
            col_count[j] -= 1;
        }
    }
    let rows = rows.into_iter().map(|r| r.into_iter().collect()).collect();
    SparseBinaryMatrix::from_rows(ICDM_COLS, rows).unwrap()
}

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    std::fs::create_dir_all(&dir)?;
    let d = icdm_like();
    assert_eq!(d.nnz(), ICDM_ONES);
    write_fimi(&d, BufWriter::new(File::create(dir.join("icdm_like.dat"))?))?;
    println!(
        "icdm_like.dat: {} x {}, {} ones",
        d.n_rows(),
        d.n_cols(),
        d.nnz()
    );
    Ok(())
}
