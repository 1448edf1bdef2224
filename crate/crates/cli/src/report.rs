//! Self-describing, deterministic reports.

use crate::error::CliError;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Tabular view of a result, used for CSV output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub result: serde_json::Value,
    #[serde(skip)]
    pub table: Table,
    /// False when a verify suite had failing checks.
    #[serde(skip)]
    pub success: bool,
}

impl Report {
    pub fn new(command: String, seed: u64, result: impl Serialize, table: Table) -> Report {
        Report {
            tool: "tritile",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            result: serde_json::to_value(result).expect("results serialize"),
            table,
            success: true,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut out = format!(
                    "# {} {}\n# command: {}\n# seed: {}\n",
                    self.tool, self.version, self.command, self.seed
                );
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                w.write_record(&self.table.header)?;
                for row in &self.table.rows {
                    w.write_record(row)?;
                }
                let bytes = w.into_inner().expect("writing to memory cannot fail");
                out.push_str(&String::from_utf8(bytes).expect("csv of UTF-8 fields"));
                Ok(out)
            }
        }
    }
}

/// Shell-style rendering of an argument vector, quoting where needed.
pub fn command_line(argv: &[String]) -> String {
    let quote = |a: &String| {
        let plain = !a.is_empty() && a.chars().all(|c| c.is_ascii_alphanumeric() || "-_./:=,+".contains(c));
        if plain {
            a.clone()
        } else {
            format!("'{}'", a.replace('\'', r"'\''"))
        }
    };
    std::iter::once("tritile".to_string()).chain(argv.iter().map(quote)).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_comment_header() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        let r = Report::new("tritile x".into(), 3, serde_json::json!({}), t);
        let text = r.render(Format::Csv).unwrap();
        assert!(text.starts_with("# tritile "));
        assert!(text.ends_with("a,b\n1,\"x,y\"\n"));
    }

    #[test]
    fn quoting() {
        let argv: Vec<String> = ["enumerate", "my file.json", "--seed", "3"].map(String::from).to_vec();
        assert_eq!(command_line(&argv), "tritile enumerate 'my file.json' --seed 3");
    }
}
