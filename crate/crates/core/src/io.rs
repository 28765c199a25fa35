//! Point set serialization.
//!
//! CSV (version 1):
//!
//! ```text
//! # kfree point set v1
//! # spec: visible
//! # window: ball:2:10
//! -10,0
//! -9,-4
//! ...
//! ```
//!
//! One point per line in lexicographic order; `#` lines are comments.
//!
//! Run-length binary (version 1), all integers LEB128:
//!
//! ```text
//! "KFPS" | version u8 | header len, header utf-8 ("<spec> <window>")
//!        | dim | lo_1..lo_n (signed) | hi_1..hi_n (signed) | point count
//!        | run lengths, alternating absent/present, starting with absent
//! ```
//!
//! Runs cover the bounding box in row-major order (last coordinate fastest).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::pointsets::{for_each_in_box, Point, PointSet};

pub const CSV_MAGIC: &str = "# kfree point set v1";
pub const RLE_MAGIC: &[u8; 4] = b"KFPS";
pub const RLE_VERSION: u8 = 1;

/// Points read back from a file together with its provenance header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredPoints {
    pub header: String,
    pub points: Vec<Point>,
}

fn write_err(e: std::io::Error) -> Error {
    Error::io("<writer>", e)
}

pub fn write_csv<W: Write>(set: &PointSet, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{CSV_MAGIC}").map_err(write_err)?;
    writeln!(out, "# spec: {}", set.spec()).map_err(write_err)?;
    writeln!(out, "# window: {}", set.window()).map_err(write_err)?;
    let mut res = Ok(());
    let mut line = String::new();
    set.for_each(|x| {
        if res.is_err() {
            return;
        }
        line.clear();
        for (i, c) in x.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&c.to_string());
        }
        res = writeln!(out, "{line}");
    });
    res.map_err(write_err)?;
    out.flush().map_err(write_err)
}

pub fn read_csv<R: Read>(input: R) -> Result<StoredPoints> {
    let reader = BufReader::new(input);
    let mut header = Vec::new();
    let mut points = Vec::new();
    let mut dim = None;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            if lineno == 0 && t != CSV_MAGIC {
                return Err(Error::Parse(format!("unsupported header '{t}'")));
            }
            if lineno > 0 {
                header.push(c.trim().to_string());
            }
            continue;
        }
        let p = t
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<Point, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        match dim {
            None => dim = Some(p.len()),
            Some(d) if d != p.len() => return Err(Error::DimensionMismatch { expected: d, got: p.len() }),
            _ => {}
        }
        points.push(p);
    }
    Ok(StoredPoints { header: header.join("; "), points })
}

pub fn write_rle<W: Write>(set: &PointSet, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let header = format!("{} {}", set.spec(), set.window());
    let (lo, hi) = set.sieve().bounds();
    let mut runs = Vec::new();
    let mut current = false;
    let mut run = 0u64;
    let mut count = 0u64;
    for_each_in_box(lo, hi, |x| {
        let present = set.contains(x);
        count += present as u64;
        if present != current {
            runs.push(run);
            run = 0;
            current = present;
        }
        run += 1;
    });
    runs.push(run);

    out.write_all(RLE_MAGIC).map_err(write_err)?;
    out.write_all(&[RLE_VERSION]).map_err(write_err)?;
    leb128::write::unsigned(&mut out, header.len() as u64).map_err(write_err)?;
    out.write_all(header.as_bytes()).map_err(write_err)?;
    leb128::write::unsigned(&mut out, lo.len() as u64).map_err(write_err)?;
    for &c in lo.iter().chain(hi) {
        leb128::write::signed(&mut out, c).map_err(write_err)?;
    }
    leb128::write::unsigned(&mut out, count).map_err(write_err)?;
    for r in runs {
        leb128::write::unsigned(&mut out, r).map_err(write_err)?;
    }
    out.flush().map_err(write_err)
}

fn leb_err(e: leb128::read::Error) -> Error {
    Error::Parse(format!("truncated or malformed run-length data: {e}"))
}

pub fn read_rle<R: Read>(input: R) -> Result<StoredPoints> {
    let mut r = BufReader::new(input);
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic).map_err(|_| Error::Parse("missing header".into()))?;
    if &magic[..4] != RLE_MAGIC {
        return Err(Error::Parse("not a run-length point set".into()));
    }
    if magic[4] != RLE_VERSION {
        return Err(Error::Parse(format!("unsupported version {}", magic[4])));
    }
    let hlen = leb128::read::unsigned(&mut r).map_err(leb_err)? as usize;
    if hlen > 1 << 20 {
        return Err(Error::Parse("header too long".into()));
    }
    let mut header = vec![0u8; hlen];
    r.read_exact(&mut header).map_err(|_| Error::Parse("truncated header".into()))?;
    let header = String::from_utf8(header).map_err(|e| Error::Parse(e.to_string()))?;
    let dim = leb128::read::unsigned(&mut r).map_err(leb_err)? as usize;
    if dim == 0 || dim > 64 {
        return Err(Error::Parse(format!("bad dimension {dim}")));
    }
    let mut bounds = Vec::with_capacity(2 * dim);
    for _ in 0..2 * dim {
        bounds.push(leb128::read::signed(&mut r).map_err(leb_err)?);
    }
    let (lo, hi) = bounds.split_at(dim);
    let count = leb128::read::unsigned(&mut r).map_err(leb_err)?;
    let cells: u128 = lo
        .iter()
        .zip(hi)
        .map(|(l, h)| if h >= l { (h - l + 1) as u128 } else { 0 })
        .product();

    let mut points = Vec::new();
    let mut present = false;
    let mut remaining = leb128::read::unsigned(&mut r).map_err(leb_err)?;
    let mut seen: u128 = 0;
    let mut failure = None;
    for_each_in_box(lo, hi, |x| {
        if failure.is_some() {
            return;
        }
        while remaining == 0 {
            match leb128::read::unsigned(&mut r) {
                Ok(v) => {
                    remaining = v;
                    present = !present;
                }
                Err(e) => {
                    failure = Some(leb_err(e));
                    return;
                }
            }
        }
        if present {
            points.push(x.to_vec());
        }
        remaining -= 1;
        seen += 1;
    });
    if let Some(e) = failure {
        return Err(e);
    }
    if seen != cells || remaining != 0 || points.len() as u64 != count {
        return Err(Error::Parse("run lengths disagree with the stored box or point count".into()));
    }
    Ok(StoredPoints { header, points })
}

pub fn save_csv(set: &PointSet, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(set, f).map_err(|e| with_path(e, path))
}

pub fn save_rle(set: &PointSet, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_rle(set, f).map_err(|e| with_path(e, path))
}

/// Reads either format, chosen by the leading bytes.
pub fn load(path: &Path) -> Result<StoredPoints> {
    let mut f = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut head = [0u8; 4];
    let n = f.read(&mut head).map_err(|e| Error::io(path, e))?;
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    let res = if n == 4 && &head == RLE_MAGIC { read_rle(f) } else { read_csv(f) };
    res.map_err(|e| with_path(e, path))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointsets::{generate, FreenessSpec, LatticeWindow, DEFAULT_WINDOW_CAP};
    use proptest::prelude::*;

    fn set(spec: &str, window: LatticeWindow) -> PointSet {
        generate(&spec.parse().unwrap(), &window, DEFAULT_WINDOW_CAP).unwrap()
    }

    #[test]
    fn csv_layout() {
        let ps = set("visible", LatticeWindow::ball(2, 1.0));
        let mut buf = Vec::new();
        write_csv(&ps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# kfree point set v1\n# spec: visible\n# window: ball:2:1\n-1,0\n0,-1\n0,1\n1,0\n"
        );
        let back = read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.points, ps.points());
        assert_eq!(back.header, "spec: visible; window: ball:2:1");
    }

    #[test]
    fn rle_rejects_garbage() {
        assert!(read_rle(&b"nope"[..]).is_err());
        assert!(read_rle(&b"KFPS\x02"[..]).is_err());
        let ps = set("visible", LatticeWindow::ball(2, 3.0));
        let mut buf = Vec::new();
        write_rle(&ps, &mut buf).unwrap();
        buf.truncate(buf.len() - 2);
        assert!(read_rle(&buf[..]).is_err());
    }

    #[test]
    fn csv_rejects_bad_rows() {
        assert!(read_csv(&b"# kfree point set v1\n1,2\n3\n"[..]).is_err());
        assert!(read_csv(&b"# kfree point set v1\n1,x\n"[..]).is_err());
        assert!(read_csv(&b"# other v9\n1,2\n"[..]).is_err());
    }

    #[test]
    fn load_detects_format() {
        let dir = tempfile::tempdir().unwrap();
        let ps = set("kfree:2,2", LatticeWindow::ball(2, 6.0));
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.kfps");
        save_csv(&ps, &a).unwrap();
        save_rle(&ps, &b).unwrap();
        assert_eq!(load(&a).unwrap().points, ps.points());
        assert_eq!(load(&b).unwrap().points, ps.points());
        match load(&dir.path().join("missing.csv")) {
            Err(Error::Io { path, .. }) => assert!(path.ends_with("missing.csv")),
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn round_trip(spec in prop::sample::select(vec!["visible", "kfree:2,2", "kfree:1,2", "bfree:2:2,3", "kfree:3,1"]),
                      lo in -20i64..5, extent in 0i64..25, radius in 0.0f64..12.0, use_ball in any::<bool>()) {
            let spec: FreenessSpec = spec.parse().unwrap();
            let n = spec.dim();
            let window = if use_ball {
                LatticeWindow::ball(n, radius)
            } else {
                LatticeWindow::boxed(vec![lo; n], vec![lo + extent; n]).unwrap()
            };
            let ps = generate(&spec, &window, DEFAULT_WINDOW_CAP).unwrap();
            let mut csv = Vec::new();
            write_csv(&ps, &mut csv).unwrap();
            let mut rle = Vec::new();
            write_rle(&ps, &mut rle).unwrap();
            let pts = ps.points();
            prop_assert_eq!(&read_csv(&csv[..]).unwrap().points, &pts);
            prop_assert_eq!(&read_rle(&rle[..]).unwrap().points, &pts);
        }
    }
}
