//! Grid parsing and serialization shared by the subcommands.

use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

/// Inclusive grid `start:stop:steps`; the final point is exactly `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, steps: usize) -> Self {
        Self { start, stop, steps }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.steps < 1 {
            return Err("grid needs at least one step".into());
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err("grid endpoints must be finite".into());
        }
        if self.start > self.stop {
            return Err(format!(
                "grid start {} exceeds stop {}",
                self.start, self.stop
            ));
        }
        if self.steps == 1 && self.start != self.stop {
            return Err("a single-step grid needs start = stop".into());
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        (0..self.steps)
            .map(|k| {
                if k == self.steps - 1 {
                    self.stop
                } else {
                    self.start + span * k as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:steps, got '{s}'"));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|e| format!("bad grid start '{}': {e}", parts[0]))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|e| format!("bad grid stop '{}': {e}", parts[1]))?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|e| format!("bad grid steps '{}': {e}", parts[2]))?;
        let grid = Self::new(start, stop, steps);
        grid.validate()?;
        Ok(grid)
    }
}

/// 17 significant digits: enough to round-trip any f64.
pub fn g17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output path; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputOpts {
    pub fn emit(&self, content: &str) -> Result<(), String> {
        match &self.out {
            Some(path) => std::fs::write(path, content)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| format!("cannot write to stdout: {e}")),
        }
    }
}

/// One CSV table with a header row, LF-terminated records.
pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new<const W: usize>(header: [&str; W]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(header)
            .expect("writing to memory cannot fail");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer
            .write_record(fields)
            .expect("writing to memory cannot fail");
    }

    pub fn finish(self) -> String {
        let bytes = self
            .writer
            .into_inner()
            .expect("flushing to memory cannot fail");
        String::from_utf8(bytes).expect("CSV output is UTF-8")
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}
