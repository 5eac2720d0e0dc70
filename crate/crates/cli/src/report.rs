//! CSV and run-report emission. Every number is serialized with 17
//! significant digits so identical configs produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn new(dir: &Path) -> std::io::Result<OutDir> {
        std::fs::create_dir_all(dir)?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn csv(&self, name: &str, header: &str) -> std::io::Result<CsvWriter> {
        let file = File::create(self.path(name))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{header}")?;
        Ok(CsvWriter { w })
    }

    pub fn report(&self) -> Report {
        Report {
            lines: Vec::new(),
            path: self.path("report.txt"),
        }
    }
}

pub struct CsvWriter {
    w: BufWriter<File>,
}

impl CsvWriter {
    pub fn row(&mut self, fields: &[String]) -> std::io::Result<()> {
        writeln!(self.w, "{}", fields.join(","))
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        self.w.flush()
    }
}

/// Key-value run report, written in insertion order.
pub struct Report {
    lines: Vec<(String, String)>,
    path: PathBuf,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.lines.push((key.to_string(), value.into()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fmt_f64(value));
    }

    pub fn write(self) -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(&self.path)?);
        for (k, v) in &self.lines {
            writeln!(w, "{k} = {v}")?;
        }
        w.flush()
    }
}
