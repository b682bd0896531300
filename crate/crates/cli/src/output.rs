use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};

/// A TSV document: `#`-prefixed header lines, then tab-separated rows.
/// Several tables may follow each other, each with its own `#method:` line.
#[derive(Default)]
pub struct Report {
    text: String,
    columns: Vec<String>,
}

impl Report {
    pub fn comment(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.text, "# {}", line.as_ref());
    }

    pub fn table(&mut self, method: &str, columns: &[&str]) {
        if !self.columns.is_empty() {
            // gnuplot data blocks are separated by two blank lines
            self.text.push_str("\n\n");
        }
        let _ = writeln!(self.text, "#method: {method}");
        let _ = writeln!(self.text, "{}", columns.join("\t"));
        if self.columns.is_empty() {
            self.columns = columns.iter().map(|c| c.to_string()).collect();
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join("\t"));
    }

    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        match out {
            Some(p) => std::fs::write(p, &self.text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                match out.write_all(self.text.as_bytes()).and_then(|()| out.flush()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                    _ => Ok(()),
                }
            }
        }
    }

    /// Companion gnuplot script plotting every column of the first table
    /// against the first.
    pub fn gnuplot(&self, data: Option<&Path>) -> String {
        let file = data.map_or("-".to_string(), |p| p.display().to_string());
        let mut s = String::from("set datafile separator \"\\t\"\nset key autotitle columnhead\n");
        let plots: Vec<String> = (2..=self.columns.len())
            .map(|i| format!("'{file}' index 0 using 1:{i} with linespoints"))
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        s
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.12}")
    }
}
