//! Graph arguments: a name understood by `parse_graph_spec`, `json:` with an
//! inline JSON graph, or `@path` naming a file holding either.

use std::fs;

use turan_core::{parse_graph_spec, Graph, GraphSource};

use crate::report::CliError;

pub fn graph_arg(arg: &str) -> Result<Graph, CliError> {
    let bad = |e: String| CliError::Input(format!("graph {arg:?}: {e}"));
    if let Some(path) = arg.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
        let text = text.trim();
        return if text.starts_with('{') || text.starts_with('"') {
            json_graph(text).map_err(bad)
        } else {
            parse_graph_spec(text).map_err(|e| bad(e.to_string()))
        };
    }
    if let Some(json) = arg.strip_prefix("json:") {
        return json_graph(json).map_err(bad);
    }
    parse_graph_spec(arg).map_err(|e| bad(e.to_string()))
}

fn json_graph(text: &str) -> Result<Graph, String> {
    let source: GraphSource = serde_json::from_str(text).map_err(|e| e.to_string())?;
    source.resolve().map_err(|e| e.to_string())
}

/// Reads `@path` or returns the argument itself.
pub fn text_arg(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn number_list(arg: &str) -> Result<Vec<usize>, CliError> {
    arg.split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("expected comma-separated integers, got {arg:?}")))
}
