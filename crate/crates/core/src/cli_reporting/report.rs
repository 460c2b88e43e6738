use std::collections::BTreeMap;
use std::fmt::Write;

use super::json::{format_g17, Node};
use crate::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows for CSV output.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportDocument {
    pub config_echo: Node,
    pub results: BTreeMap<String, Node>,
    pub hypothesis_flags: BTreeMap<String, bool>,
    pub error_estimates: BTreeMap<String, f64>,
    pub timings: BTreeMap<String, f64>,
    pub table: Option<Table>,
}

impl ReportDocument {
    pub fn new(config_echo: Node) -> Self {
        ReportDocument {
            config_echo,
            results: BTreeMap::new(),
            hypothesis_flags: BTreeMap::new(),
            error_estimates: BTreeMap::new(),
            timings: BTreeMap::new(),
            table: None,
        }
    }

    /// Scalar result with its error estimate, mirrored in `error_estimates`.
    pub fn scalar(&mut self, key: &str, value: f64, error: f64) {
        self.results.insert(key.into(), Node::scalar(value, error));
        self.error_estimates.insert(key.into(), error);
    }

    pub fn insert(&mut self, key: &str, node: Node) {
        self.results.insert(key.into(), node);
    }

    pub fn flag(&mut self, key: &str, value: bool) {
        self.hypothesis_flags.insert(key.into(), value);
    }

    pub fn to_node(&self) -> Node {
        let nums = |m: &BTreeMap<String, f64>| {
            Node::Obj(m.iter().map(|(k, v)| (k.clone(), Node::Num(*v))).collect())
        };
        Node::obj([
            ("tool_version", Node::Str(TOOL_VERSION.into())),
            ("config_echo", self.config_echo.clone()),
            ("results", Node::Obj(self.results.clone())),
            (
                "hypothesis_flags",
                Node::Obj(self.hypothesis_flags.iter().map(|(k, v)| (k.clone(), Node::Bool(*v))).collect()),
            ),
            ("error_estimates", nums(&self.error_estimates)),
            ("timings", nums(&self.timings)),
        ])
    }

    pub fn to_json(&self) -> String {
        self.to_node().to_text()
    }

    pub fn to_csv(&self) -> Result<String> {
        let table =
            self.table.as_ref().ok_or_else(|| Error::Config("this command has no tabular output".into()))?;
        let mut out = table.header.join(",");
        out.push('\n');
        for row in &table.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let cell = if v.is_finite() { format_g17(*v) } else { format!("{v}") };
                write!(out, "{cell}").unwrap();
            }
            out.push('\n');
        }
        Ok(out)
    }
}
