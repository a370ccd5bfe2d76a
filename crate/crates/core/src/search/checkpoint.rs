//! Checkpoint records: `x_lo x_hi s_lo s_hi status hit_count`, followed by
//! one `HIT s x y alpha_1 .. alpha_m` line per hit.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{ChunkStatus, Hit, SearchChunk, SearchError};

pub fn write_chunk<W: Write>(mut out: W, chunk: &SearchChunk) -> io::Result<()> {
    writeln!(
        out,
        "{} {} {} {} {} {}",
        chunk.x_lo,
        chunk.x_hi,
        chunk.s_lo,
        chunk.s_hi,
        chunk.status,
        chunk.hits.len()
    )?;
    for h in &chunk.hits {
        write!(out, "HIT {} {} {}", h.s, h.x, h.y)?;
        for a in &h.alphas {
            write!(out, " {a}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn parse_hit(line: &str) -> Result<Hit, String> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() < 5 || fields[0] != "HIT" {
        return Err(format!("malformed hit line {line:?}"));
    }
    let num = |t: &str| t.parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    let (s, x, y) = (num(fields[1])? as u32, num(fields[2])?, num(fields[3])?);
    let alphas = &fields[4..];
    let hit = Hit::evaluate(s, x, y, alphas.len() as u32)
        .ok_or_else(|| format!("({s}, {x}, {y}) is not a hit"))?;
    let recorded: Vec<String> = alphas.iter().map(|a| a.to_string()).collect();
    let actual: Vec<String> = hit.alphas.iter().map(|a| a.to_string()).collect();
    if recorded != actual {
        return Err(format!("alpha values of ({s}, {x}, {y}) do not match"));
    }
    Ok(hit)
}

fn parse_header(line: &str) -> Result<(SearchChunk, usize), String> {
    let f: Vec<&str> = line.split(' ').collect();
    if f.len() != 6 {
        return Err(format!("expected 6 fields, got {line:?}"));
    }
    let num = |t: &str| t.parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    let status = match f[4] {
        "done" => ChunkStatus::Done,
        "pending" => ChunkStatus::Pending,
        other => return Err(format!("unknown status {other:?}")),
    };
    let mut c = SearchChunk::pending(num(f[2])? as u32, num(f[3])? as u32, num(f[0])?, num(f[1])?);
    c.status = status;
    Ok((c, num(f[5])? as usize))
}

/// Parses checkpoint text. A truncated final record (missing newline or
/// missing hit lines at end of input) is dropped; anything else malformed is
/// an error carrying its 1-based line number.
pub fn parse_checkpoint(text: &str) -> Result<Vec<SearchChunk>, (usize, String)> {
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    let lines: Vec<&str> = complete.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (mut chunk, count) = parse_header(lines[i]).map_err(|m| (i + 1, m))?;
        if i + count >= lines.len() {
            break;
        }
        for j in 1..=count {
            chunk
                .hits
                .push(parse_hit(lines[i + j]).map_err(|m| (i + j + 1, m))?);
        }
        out.push(chunk);
        i += count + 1;
    }
    Ok(out)
}

pub fn read_checkpoint(path: &Path) -> Result<Vec<SearchChunk>, SearchError> {
    let text = fs::read_to_string(path).map_err(|source| SearchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_checkpoint(&text).map_err(|(line, msg)| SearchError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    })
}

/// Largest `X` such that done chunks covering `s` tile `[1, X]` with no hit
/// for `s`.
pub fn attested_coverage(chunks: &[SearchChunk], s: u32) -> u64 {
    let mut relevant: Vec<&SearchChunk> = chunks
        .iter()
        .filter(|c| c.status == ChunkStatus::Done && c.s_lo <= s && s <= c.s_hi && c.x_lo <= c.x_hi)
        .collect();
    relevant.sort_by_key(|c| c.x_lo);
    let mut covered = 0u64;
    for c in relevant {
        if c.x_lo > covered + 1 {
            break;
        }
        if let Some(h) = c.hits.iter().find(|h| h.s == s) {
            return covered.max(h.x - 1);
        }
        covered = covered.max(c.x_hi);
    }
    covered
}

/// Appends finished chunks, syncing after each one.
pub struct CheckpointWriter {
    path: PathBuf,
    file: File,
}

impl CheckpointWriter {
    /// Starts the file afresh containing `keep`, written through a temporary
    /// file and renamed into place.
    pub fn create(path: &Path, keep: &[SearchChunk]) -> Result<Self, SearchError> {
        let io_err = |source| SearchError::Io {
            path: path.to_path_buf(),
            source,
        };
        let tmp = path.with_extension("tmp");
        {
            let mut w = BufWriter::new(File::create(&tmp).map_err(io_err)?);
            for c in keep {
                write_chunk(&mut w, c).map_err(io_err)?;
            }
            let f = w.into_inner().map_err(|e| io_err(e.into_error()))?;
            f.sync_all().map_err(io_err)?;
        }
        fs::rename(&tmp, path).map_err(io_err)?;
        let file = OpenOptions::new().append(true).open(path).map_err(io_err)?;
        Ok(CheckpointWriter {
            path: path.to_path_buf(),
            file,
        })
    }

    pub fn append(&mut self, chunk: &SearchChunk) -> Result<(), SearchError> {
        let mut buf = Vec::new();
        write_chunk(&mut buf, chunk).expect("writing to memory");
        let io_err = |source| SearchError::Io {
            path: self.path.clone(),
            source,
        };
        self.file.write_all(&buf).map_err(io_err)?;
        self.file.sync_data().map_err(io_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn done(s_lo: u32, s_hi: u32, x_lo: u64, x_hi: u64) -> SearchChunk {
        let mut c = SearchChunk::pending(s_lo, s_hi, x_lo, x_hi);
        c.status = ChunkStatus::Done;
        c
    }

    #[test]
    fn round_trip() {
        let mut c = done(2, 2, 10, 20);
        c.hits.push(Hit::evaluate(2, 14, 20, 2).unwrap());
        let mut buf = Vec::new();
        write_chunk(&mut buf, &c).unwrap();
        write_chunk(&mut buf, &done(10, 287, 1, 100)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "10 20 2 2 done 1\nHIT 2 14 20 21 120\n1 100 10 287 done 0\n"
        );
        let back = parse_checkpoint(&text).unwrap();
        assert_eq!(back, vec![c, done(10, 287, 1, 100)]);
    }

    #[test]
    fn truncated_tail_is_dropped() {
        let text = "1 100 10 287 done 0\n101 200 10 28";
        assert_eq!(parse_checkpoint(text).unwrap(), vec![done(10, 287, 1, 100)]);
        let text = "1 100 2 2 done 1\n";
        assert!(parse_checkpoint(text).unwrap().is_empty());
    }

    #[test]
    fn bad_lines_are_errors() {
        assert_eq!(parse_checkpoint("1 2 3\n").unwrap_err().0, 1);
        assert_eq!(
            parse_checkpoint("1 100 10 287 done 0\n1 2 3 4 maybe 0\n")
                .unwrap_err()
                .0,
            2
        );
        assert!(parse_checkpoint("10 20 2 2 done 1\nHIT 2 14 20 21 121\n").is_err());
        assert!(parse_checkpoint("10 20 2 2 done 1\nHIT 2 14 21 1\n").is_err());
    }

    #[test]
    fn coverage() {
        let chunks = vec![
            done(10, 287, 101, 200),
            done(10, 287, 1, 100),
            done(10, 20, 201, 300),
            done(10, 287, 302, 400),
        ];
        assert_eq!(attested_coverage(&chunks, 15), 300);
        assert_eq!(attested_coverage(&chunks, 100), 200);
        assert_eq!(attested_coverage(&chunks, 9), 0);
        let mut with_hit = done(2, 2, 1, 100);
        with_hit.hits.push(Hit::evaluate(2, 14, 20, 2).unwrap());
        assert_eq!(attested_coverage(&[with_hit], 2), 13);
        let pending = SearchChunk::pending(10, 287, 1, 100);
        assert_eq!(attested_coverage(&[pending], 10), 0);
    }

    #[test]
    fn writer_keeps_previous_and_appends() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.txt");
        let mut w = CheckpointWriter::create(&path, &[done(10, 11, 1, 5)]).unwrap();
        w.append(&done(10, 11, 6, 9)).unwrap();
        drop(w);
        assert_eq!(
            read_checkpoint(&path).unwrap(),
            vec![done(10, 11, 1, 5), done(10, 11, 6, 9)]
        );
        assert!(matches!(
            read_checkpoint(&dir.path().join("none")),
            Err(SearchError::Io { .. })
        ));
    }
}
