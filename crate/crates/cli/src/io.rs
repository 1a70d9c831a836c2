// SPDX-License-Identifier: Apache-2.0

//! Config loading and output files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Parse a JSON file. Syntax and schema errors carry line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    parse_json(&text, path)
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &Path) -> CliResult<T> {
    // serde_json's message already ends in "at line L column C".
    serde_json::from_str(text).map_err(|e| CliError::config(format!("{}: {e}", origin.display())))
}

/// Read a two-column vertex CSV with header `x_plus,x_minus`.
pub fn read_path_csv(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let mut rdr =
        csv::Reader::from_path(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        .clone();
    if headers.len() != 2 || &headers[0] != "x_plus" || &headers[1] != "x_minus" {
        return Err(CliError::config(format!(
            "{}: expected header `x_plus,x_minus`, got `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let field = |i: usize| -> CliResult<f64> {
            record[i].trim().parse().map_err(|e| {
                CliError::config(format!(
                    "{}: row {}: `{}`: {e}",
                    path.display(),
                    row + 2,
                    &record[i]
                ))
            })
        };
        out.push((field(0)?, field(1)?));
    }
    Ok(out)
}

/// Floats in CSV output: 17 significant digits, enough to round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// The output directory. Every file goes through [`OutDir::create`], which
/// only accepts bare file names, so nothing lands outside the directory.
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn new(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn create(&mut self, name: &str) -> CliResult<BufWriter<File>> {
        let bare = Path::new(name).file_name().map(|f| f == name).unwrap_or(false);
        assert!(bare, "output name `{name}` must be a bare file name");
        let path = self.root.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(BufWriter::new(file))
    }

    pub fn write_csv<R>(&mut self, name: &str, header: &str, rows: R) -> CliResult<()>
    where
        R: IntoIterator<Item = Vec<String>>,
    {
        let path = self.root.join(name);
        let mut w = self.create(name)?;
        let io = |e| CliError::io(&path, e);
        writeln!(w, "{header}").map_err(io)?;
        for row in rows {
            writeln!(w, "{}", row.join(",")).map_err(io)?;
        }
        w.flush().map_err(io)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let path = self.root.join(name);
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(&path, e))?;
        writeln!(w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(&path, e))
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }
}
