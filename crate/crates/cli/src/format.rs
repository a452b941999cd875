//! JSON operator files: `labels`, `dims` and a row-major `matrix` of
//! `[re, im]` pairs, plus an optional free-form `metadata` object.

use std::fmt::Write as _;
use std::path::Path;

use markovrec::tensor::{from_row_major, to_row_major, SubsystemLayout};
use markovrec::{DensityOperator, C64};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    labels: Vec<String>,
    dims: Vec<usize>,
    matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    metadata: Map<String, Value>,
}

#[derive(Clone, Debug)]
pub struct OperatorFile {
    pub state: DensityOperator,
    pub metadata: Map<String, Value>,
}

impl OperatorFile {
    pub fn new(state: DensityOperator) -> Self {
        Self {
            state,
            metadata: Map::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// One matrix row per line; every entry with 17 significant digits.
    pub fn to_json(&self) -> String {
        let layout = self.state.layout();
        let d = self.state.dim();
        let entries = to_row_major(self.state.matrix());
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(
            out,
            "  \"labels\": {},",
            serde_json::to_string(layout.labels()).expect("strings serialise")
        );
        let _ = writeln!(
            out,
            "  \"dims\": {},",
            serde_json::to_string(layout.dims()).expect("integers serialise")
        );
        out.push_str("  \"matrix\": [\n");
        for r in 0..d {
            out.push_str("    [");
            for c in 0..d {
                let z = entries[r * d + c];
                if c > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "[{:.16e}, {:.16e}]", z.re, z.im);
            }
            out.push(']');
            out.push_str(if r + 1 < d { ",\n" } else { "\n" });
        }
        out.push_str("  ]");
        if !self.metadata.is_empty() {
            let meta = serde_json::to_string(&self.metadata).expect("json values serialise");
            let _ = write!(out, ",\n  \"metadata\": {meta}");
        }
        out.push_str("\n}\n");
        out
    }

    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let raw: RawOperator = serde_json::from_str(text)
            .map_err(|e| CliError::input(origin, Some(e.line()), e.to_string()))?;
        let key_line = |key: &str| find_key_line(text, key);
        if raw.labels.len() != raw.dims.len() {
            return Err(CliError::input(
                origin,
                key_line("dims"),
                format!("{} labels but {} dims", raw.labels.len(), raw.dims.len()),
            ));
        }
        let layout = SubsystemLayout::new(raw.labels, raw.dims)
            .map_err(|e| CliError::input(origin, key_line("labels"), e.to_string()))?;
        let d = layout.total_dim();
        if raw.matrix.len() != d {
            return Err(CliError::input(
                origin,
                key_line("matrix"),
                format!(
                    "matrix has {} rows, layout {layout} needs {d}",
                    raw.matrix.len()
                ),
            ));
        }
        let rows = row_lines(text);
        let mut entries = Vec::with_capacity(d * d);
        for (r, row) in raw.matrix.iter().enumerate() {
            if row.len() != d {
                return Err(CliError::input(
                    origin,
                    rows.get(r).copied(),
                    format!("matrix row {r} has {} entries, expected {d}", row.len()),
                ));
            }
            entries.extend(row.iter().map(|[re, im]| C64::new(*re, *im)));
        }
        let state = DensityOperator::new(layout, from_row_major(d, d, &entries))
            .map_err(|e| CliError::input(origin, key_line("matrix"), e.to_string()))?;
        Ok(Self {
            state,
            metadata: raw.metadata,
        })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }
}

/// 1-based line of the first `"key"` token.
pub(crate) fn find_key_line(text: &str, key: &str) -> Option<usize> {
    let pos = text.find(&format!("\"{key}\""))?;
    Some(line_of(text, pos))
}

fn line_of(text: &str, pos: usize) -> usize {
    text[..pos].bytes().filter(|b| *b == b'\n').count() + 1
}

/// Line on which each row of the `matrix` array opens.
fn row_lines(text: &str) -> Vec<usize> {
    let Some(key) = text.find("\"matrix\"") else {
        return Vec::new();
    };
    let Some(open) = text[key..].find('[').map(|p| key + p) else {
        return Vec::new();
    };
    let mut depth = 0usize;
    let mut line = line_of(text, open);
    let mut out = Vec::new();
    for b in text[open..].bytes() {
        match b {
            b'\n' => line += 1,
            b'[' => {
                depth += 1;
                if depth == 2 {
                    out.push(line);
                }
            }
            b']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    out
}
