//! Command-line driver and REPL.
//!
//! Exit codes: 0 on success, 1 when the query is rejected, 2 on I/O or
//! usage errors.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::Parser;

use crate::analyze::analyze;
use crate::eval::{eval_graph_pattern, ResultTable};
use crate::graph::{load_graph_file, PropertyGraph};
use crate::oracle::{oracle_match, path_len_bound, OracleConfig};
use crate::output::{write_table, Format};
use crate::syntax::render;

/// Graph file used when `--graph` is absent and `GPML_FIXTURE` is unset.
pub const DEFAULT_GRAPH: &str = "fixtures/paper-graph.json";

/// Longest walk the oracle tries when `--max-path-len` is not given.
pub const ORACLE_LEN_CEILING: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "gpml", version, about = "Run graph pattern queries against a property graph file")]
pub struct Args {
    /// Graph document (JSON). Defaults to $GPML_FIXTURE, then the bundled fixture.
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Query text. Without --query or --query-file an interactive session starts.
    #[arg(long, value_name = "TEXT", conflicts_with = "query_file")]
    pub query: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub query_file: Option<PathBuf>,
    #[arg(long, default_value = "table")]
    pub format: Format,
    /// Print at most N rows.
    #[arg(long, value_name = "N")]
    pub limit: Option<usize>,
    /// Analyze the query without evaluating it.
    #[arg(long, conflicts_with = "oracle")]
    pub check: bool,
    /// Evaluate with the brute-force reference matcher.
    #[arg(long)]
    pub oracle: bool,
    /// Longest walk the oracle enumerates. Defaults to a bound derived from
    /// the query, at most 8.
    #[arg(long, value_name = "N", requires = "oracle")]
    pub max_path_len: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Run,
    Repl,
    Oracle,
    Check,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuerySource {
    Text(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub graph_path: PathBuf,
    /// `None` in REPL mode.
    pub query: Option<QuerySource>,
    pub format: Format,
    pub row_limit: Option<usize>,
    pub mode: Mode,
    pub max_path_len: Option<usize>,
}

impl CliConfig {
    pub fn from_args(args: Args, fixture_env: Option<OsString>) -> Result<CliConfig, String> {
        let query = match (args.query, args.query_file) {
            (Some(t), None) => Some(QuerySource::Text(t)),
            (None, Some(p)) => Some(QuerySource::File(p)),
            (None, None) => None,
            (Some(_), Some(_)) => return Err("--query and --query-file are exclusive".into()),
        };
        let mode = match (&query, args.check, args.oracle) {
            (None, true, _) => return Err("--check needs --query or --query-file".into()),
            (None, _, true) => return Err("--oracle needs --query or --query-file".into()),
            (None, false, false) => Mode::Repl,
            (Some(_), true, _) => Mode::Check,
            (Some(_), _, true) => Mode::Oracle,
            (Some(_), false, false) => Mode::Run,
        };
        let graph_path = args
            .graph
            .or_else(|| fixture_env.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_GRAPH));
        Ok(CliConfig {
            graph_path,
            query,
            format: args.format,
            row_limit: args.limit,
            mode,
            max_path_len: args.max_path_len,
        })
    }
}

/// Failure of one query, with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn rejected(message: String) -> Self {
        Failure { code: 1, message }
    }

    fn io(message: String) -> Self {
        Failure { code: 2, message }
    }
}

fn load(path: &PathBuf) -> Result<PropertyGraph, Failure> {
    load_graph_file(path).map_err(|e| Failure::io(e.to_string()))
}

fn evaluate(text: &str, graph: &PropertyGraph, cfg: &CliConfig) -> Result<String, Failure> {
    let analyzed = analyze(text).map_err(|r| Failure::rejected(r.to_string()))?;
    if cfg.mode == Mode::Check {
        return Ok(format!("ok: {}\n", render(&analyzed.query)));
    }
    let mut table: ResultTable = if cfg.mode == Mode::Oracle {
        let max_path_len = cfg
            .max_path_len
            .unwrap_or_else(|| path_len_bound(&analyzed.query, graph, ORACLE_LEN_CEILING));
        let config = OracleConfig {
            max_path_len,
            ..OracleConfig::default()
        };
        oracle_match(&analyzed.query, graph, &config).map_err(|e| Failure::io(e.to_string()))?
    } else {
        eval_graph_pattern(&analyzed, graph)
    };
    if let Some(n) = cfg.row_limit {
        table.rows.truncate(n);
    }
    Ok(write_table(&table, graph, cfg.format))
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let cfg = match CliConfig::from_args(args, std::env::var_os("GPML_FIXTURE")) {
        Ok(c) => c,
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
            return 2;
        }
    };
    let result = match &cfg.query {
        None => return repl(&cfg, input, out),
        Some(src) => one_shot(&cfg, src),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

fn one_shot(cfg: &CliConfig, src: &QuerySource) -> Result<String, Failure> {
    let text = match src {
        QuerySource::Text(t) => t.clone(),
        QuerySource::File(p) => {
            std::fs::read_to_string(p).map_err(|e| Failure::io(format!("{}: {e}", p.display())))?
        }
    };
    let graph = if cfg.mode == Mode::Check {
        PropertyGraph::new()
    } else {
        load(&cfg.graph_path)?
    };
    evaluate(&text, &graph, cfg)
}

/// Reads blank-line-terminated queries until `:quit` or end of input.
fn repl(cfg: &CliConfig, input: &mut dyn BufRead, out: &mut dyn Write) -> i32 {
    let mut cfg = cfg.clone();
    let mut graph = match load(&cfg.graph_path) {
        Ok(g) => g,
        Err(f) => {
            let _ = writeln!(out, "error: {}", f.message);
            return f.code;
        }
    };
    let mut block = String::new();
    let _ = write!(out, "gpml> ");
    let _ = out.flush();
    let mut line = String::new();
    loop {
        line.clear();
        let eof = matches!(input.read_line(&mut line), Ok(0) | Err(_));
        let trimmed = line.trim();
        if block.is_empty() && trimmed.starts_with(':') {
            let (cmd, arg) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            let arg = arg.trim();
            match cmd {
                ":quit" | ":q" => return 0,
                ":load" => match load(&PathBuf::from(arg)) {
                    Ok(g) => {
                        let _ = writeln!(out, "loaded {} nodes, {} edges", g.node_count(), g.edge_count());
                        graph = g;
                        cfg.graph_path = PathBuf::from(arg);
                    }
                    Err(f) => {
                        let _ = writeln!(out, "error: {}", f.message);
                    }
                },
                ":format" => match arg.parse::<Format>() {
                    Ok(f) => cfg.format = f,
                    Err(m) => {
                        let _ = writeln!(out, "error: {m}");
                    }
                },
                _ => {
                    let _ = writeln!(out, "error: unknown command `{cmd}` (try :quit, :load <file>, :format <f>)");
                }
            }
            let _ = write!(out, "gpml> ");
            let _ = out.flush();
            continue;
        }
        if !trimmed.is_empty() {
            block.push_str(&line);
            if !eof {
                continue;
            }
        }
        if !block.trim().is_empty() {
            match evaluate(&block, &graph, &cfg) {
                Ok(text) => {
                    let _ = out.write_all(text.as_bytes());
                }
                Err(f) => {
                    let _ = writeln!(out, "error: {}", f.message);
                }
            }
            block.clear();
        }
        if eof {
            return 0;
        }
        let _ = write!(out, "gpml> ");
        let _ = out.flush();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<CliConfig, String> {
        let a = Args::try_parse_from(std::iter::once("gpml").chain(args.iter().copied())).map_err(|e| e.to_string())?;
        CliConfig::from_args(a, None)
    }

    #[test]
    fn modes() {
        assert_eq!(parse(&[]).unwrap().mode, Mode::Repl);
        assert_eq!(parse(&["--query", "MATCH (x)"]).unwrap().mode, Mode::Run);
        assert_eq!(parse(&["--query", "MATCH (x)", "--check"]).unwrap().mode, Mode::Check);
        assert_eq!(parse(&["--query-file", "q.gpml", "--oracle"]).unwrap().mode, Mode::Oracle);
        assert!(parse(&["--check"]).is_err());
        assert!(parse(&["--query", "x", "--query-file", "y"]).is_err());
        assert!(parse(&["--query", "x", "--max-path-len", "3"]).is_err());
        assert!(parse(&["--query", "x", "--format", "xml"]).is_err());
    }

    #[test]
    fn graph_path_precedence() {
        let a = Args::try_parse_from(["gpml"]).unwrap();
        assert_eq!(
            CliConfig::from_args(a, Some("env.json".into())).unwrap().graph_path,
            PathBuf::from("env.json")
        );
        let a = Args::try_parse_from(["gpml", "--graph", "g.json"]).unwrap();
        assert_eq!(
            CliConfig::from_args(a, Some("env.json".into())).unwrap().graph_path,
            PathBuf::from("g.json")
        );
        assert_eq!(parse(&[]).unwrap().graph_path, PathBuf::from(DEFAULT_GRAPH));
    }
}
