//! Fixed-format file emission. Floats are written as `{:.8e}` so that a
//! rerun reproduces every byte.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub fn num(v: f64) -> String {
    format!("{v:.8e}")
}

pub struct Csv {
    path: PathBuf,
    out: BufWriter<File>,
    columns: usize,
}

impl Csv {
    pub fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        let path = dir.join(name);
        let file =
            File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut csv = Csv {
            path,
            out: BufWriter::new(file),
            columns: header.len(),
        };
        csv.line(header.iter().map(|s| s.to_string()))?;
        Ok(csv)
    }

    fn line(&mut self, cells: impl Iterator<Item = String>) -> Result<()> {
        let mut n = 0;
        for (i, c) in cells.enumerate() {
            if i > 0 {
                self.out.write_all(b",")?;
            }
            self.out.write_all(c.as_bytes())?;
            n += 1;
        }
        debug_assert_eq!(n, self.columns, "{}", self.path.display());
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn row(&mut self, values: &[f64]) -> Result<()> {
        self.line(values.iter().map(|&v| num(v)))
    }

    /// Leading integer columns followed by floats.
    pub fn row_mixed(&mut self, ints: &[usize], values: &[f64]) -> Result<()> {
        self.line(
            ints.iter()
                .map(|i| i.to_string())
                .chain(values.iter().map(|&v| num(v))),
        )
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.out
            .flush()
            .with_context(|| format!("cannot write {}", self.path.display()))?;
        Ok(self.path)
    }
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}
