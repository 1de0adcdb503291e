//! Tile lists, one tile per line: row ids, `|`, column ids.

use std::io::{self, BufRead, Write};

use maxtile_core::tiles::Tile;

use crate::io::ReadError;

pub fn read_tiles<R: BufRead>(reader: R) -> Result<Vec<Tile>, ReadError> {
    let mut tiles = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (rows, cols) = text.split_once('|').ok_or_else(|| ReadError::Parse {
            line: k + 1,
            message: "missing `|` between rows and columns".into(),
        })?;
        let ids = |part: &str| -> Result<Vec<usize>, ReadError> {
            part.split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| ReadError::Parse {
                        line: k + 1,
                        message: format!("`{t}` is not a nonnegative integer"),
                    })
                })
                .collect()
        };
        tiles.push(Tile::new(ids(rows)?, ids(cols)?));
    }
    Ok(tiles)
}

pub fn write_tile<W: Write>(tile: &Tile, mut w: W) -> io::Result<()> {
    let join = |ids: &[usize]| {
        ids.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(w, "{} | {}", join(&tile.rows), join(&tile.cols))
}

pub fn write_tiles<W: Write>(tiles: &[Tile], mut w: W) -> io::Result<()> {
    for t in tiles {
        write_tile(t, &mut w)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let tiles = vec![
            Tile::new(vec![3, 1], vec![0, 4]),
            Tile::new(vec![0], vec![]),
        ];
        let mut buf = Vec::new();
        write_tiles(&tiles, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "1 3 | 0 4\n0 | \n");
        assert_eq!(read_tiles(buf.as_slice()).unwrap(), tiles);
    }

    #[test]
    fn errors_name_the_line() {
        assert!(matches!(
            read_tiles("0 | 1\n0 1\n".as_bytes()),
            Err(ReadError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_tiles("a | 1\n".as_bytes()),
            Err(ReadError::Parse { line: 1, .. })
        ));
    }
}
