//! Native JSON format.
//!
//! ```json
//! {
//!   "name": "example",
//!   "variables": [
//!     { "name": "A", "outcomes": ["yes", "no"], "parents": [], "cpt": [[0.2, 0.8]] },
//!     { "name": "B", "outcomes": ["yes", "no"], "parents": ["A"],
//!       "cpt": [[0.9, 0.1], [0.3, 0.7]] }
//!   ]
//! }
//! ```
//!
//! Variables appear in topological order. `cpt` holds one column per parent
//! configuration, first parent most significant. `name` and `properties`
//! (a list of opaque strings, on the network or on a variable) are optional.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Deserialize;

use super::{model_error_variable, ParseError, ParseErrorKind, Pos};
use crate::model::{Network, VariableSpec};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    properties: Vec<String>,
    variables: Vec<Var>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Var {
    name: String,
    outcomes: Vec<String>,
    #[serde(default)]
    parents: Vec<String>,
    cpt: Vec<Vec<f64>>,
    #[serde(default)]
    properties: Vec<String>,
}

pub fn parse_native(text: &str) -> Result<Network, ParseError> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| {
        let pos = Pos {
            line: e.line().max(1),
            column: e.column().max(1),
        };
        ParseError::new(ParseErrorKind::Syntax, pos, e.to_string())
    })?;

    let mut seen: HashMap<&str, usize> = HashMap::new();
    let all: HashMap<&str, usize> = doc
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.as_str(), i))
        .collect();
    let mut specs = Vec::with_capacity(doc.variables.len());
    for (i, v) in doc.variables.iter().enumerate() {
        let mut parents = Vec::with_capacity(v.parents.len());
        for p in &v.parents {
            match seen.get(p.as_str()) {
                Some(&j) => parents.push(j),
                None => {
                    let msg = if all.contains_key(p.as_str()) {
                        format!(
                            "parent `{p}` of `{}` is declared after it; variables must be in topological order",
                            v.name
                        )
                    } else {
                        format!("unknown parent `{p}` of `{}`", v.name)
                    };
                    return Err(ParseError::new(
                        ParseErrorKind::Semantic,
                        locate_variable(text, &v.name),
                        msg,
                    ));
                }
            }
        }
        seen.insert(&v.name, i);
        let mut spec = VariableSpec::new(v.name.clone(), v.outcomes.clone(), parents, v.cpt.clone());
        spec.properties = v.properties.clone();
        specs.push(spec);
    }
    Network::with_properties(doc.name, specs, doc.properties).map_err(|e| {
        let pos = model_error_variable(&e).map_or(Pos::START, |name| locate_variable(text, name));
        ParseError::from_model(pos, e)
    })
}

/// Position of the `"name": "<name>"` entry for a variable, or the start of
/// the text if it cannot be found.
fn locate_variable(text: &str, name: &str) -> Pos {
    let quoted = serde_json::to_string(name).expect("strings serialize");
    for (at, _) in text.match_indices(&quoted) {
        let before = text[..at].trim_end();
        if let Some(rest) = before.strip_suffix(':') {
            if rest.trim_end().ends_with("\"name\"") {
                return Pos::of_offset(text, at);
            }
        }
    }
    Pos::START
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_list<T: AsRef<str>>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|s| json_str(s.as_ref())).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical text form. Numbers use the shortest decimal that reads back to
/// the same `f64`, so `parse_native(&write_native(net))` equals `net`.
pub fn write_native(net: &Network) -> String {
    let mut out = String::from("{\n");
    if let Some(name) = net.name() {
        let _ = writeln!(out, "  \"name\": {},", json_str(name));
    }
    if !net.properties().is_empty() {
        let _ = writeln!(out, "  \"properties\": {},", json_list(net.properties()));
    }
    out.push_str("  \"variables\": [\n");
    for (i, v) in net.variables().iter().enumerate() {
        out.push_str("    {\n");
        let _ = writeln!(out, "      \"name\": {},", json_str(v.name()));
        let _ = writeln!(out, "      \"outcomes\": {},", json_list(v.outcomes()));
        let parents: Vec<&str> = v.parents().iter().map(|&p| net.variable(p).name()).collect();
        let _ = writeln!(out, "      \"parents\": {},", json_list(&parents));
        if !v.properties().is_empty() {
            let _ = writeln!(out, "      \"properties\": {},", json_list(v.properties()));
        }
        out.push_str("      \"cpt\": [\n");
        let cols: Vec<String> = v
            .columns()
            .map(|c| serde_json::to_string(c).expect("finite numbers serialize"))
            .map(|c| format!("        {}", c.replace(',', ", ")))
            .collect();
        out.push_str(&cols.join(",\n"));
        out.push_str("\n      ]\n");
        out.push_str(if i + 1 < net.len() { "    },\n" } else { "    }\n" });
    }
    out.push_str("  ]\n}\n");
    out
}
