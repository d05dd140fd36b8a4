//! The `kger` command.
//!
//! Exit status 0 means success or conformance, 1 means diagnostics or
//! violations were found, and 2 means a usage, syntax, or IO error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use kger_core::emit::{emit_dot, emit_pg_schema, emit_shacl, emit_shex, emit_sql, verbalize, EmitterOutput};
use kger_core::validate::{validate_core, validate_implicit_disjointness};
use kger_core::wf::check_well_formed;
use kger_core::{Code, Diagnostic, Schema};

use crate::graph_file::load_graph;
use crate::report::{render_structured, render_text};
use crate::text::{parse_schema, SchemaError};

#[derive(Debug, Parser)]
#[command(name = "kger", version, about = "Check, validate, and compile KG-ER schemas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a schema for well-formedness.
    Check { schema: PathBuf },
    /// Validate a graph against a schema.
    Validate {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Core)]
        semantics: SemanticsArg,
        /// Add every Isa-ancestor to each entity instance before checking.
        #[arg(long)]
        close_isa: bool,
        /// Print the first-order clause of each violated statement.
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compile a schema to another formalism.
    Compile {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe a schema in English.
    Verbalize { schema: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Core,
    Implicit,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Sql,
    Shacl,
    Shex,
    Pgschema,
    Dot,
}

/// Failure that ends a command early, with its exit status.
struct Exit(i32);

fn print_diagnostics(err: &mut dyn Write, diags: &[Diagnostic]) {
    for d in diags {
        let _ = writeln!(err, "{d}");
    }
}

fn read(path: &Path, err: &mut dyn Write) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
        Exit(2)
    })
}

fn load_schema(path: &Path, err: &mut dyn Write) -> Result<Schema, Exit> {
    let source = read(path, err)?;
    parse_schema(&source).map_err(|e| {
        match &e {
            SchemaError::Syntax(errors) => {
                for pe in errors {
                    let _ = writeln!(err, "{}:{pe}", path.display());
                }
            }
            SchemaError::Invalid(diags) => print_diagnostics(err, diags),
        }
        Exit(match e {
            SchemaError::Syntax(_) => 2,
            SchemaError::Invalid(_) => 1,
        })
    })
}

/// Rejects schemas that are not well-formed.
fn require_well_formed(schema: &Schema, err: &mut dyn Write) -> Result<(), Exit> {
    let diags = check_well_formed(schema);
    if diags.is_empty() {
        Ok(())
    } else {
        print_diagnostics(err, &diags);
        Err(Exit(1))
    }
}

fn write_output(out: &mut dyn Write, err: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Exit> {
    let result = match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    };
    result.map_err(|e| {
        let _ = writeln!(err, "error: cannot write output: {e}");
        Exit(2)
    })
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    match cli.command {
        Command::Check { schema } => {
            let schema = load_schema(&schema, err)?;
            require_well_formed(&schema, err)?;
            Ok(0)
        }
        Command::Validate { schema, graph, semantics, close_isa, explain, format } => {
            let schema = load_schema(&schema, err)?;
            require_well_formed(&schema, err)?;
            let source = read(&graph, err)?;
            let mut graph = load_graph(&source, &schema).map_err(|diags| {
                print_diagnostics(err, &diags);
                Exit(if diags.iter().any(|d| d.code == Code::GraphSyntax) { 2 } else { 1 })
            })?;
            if close_isa {
                graph = graph.close_isa(&schema);
            }
            let report = match semantics {
                SemanticsArg::Core => validate_core(&schema, &graph),
                SemanticsArg::Implicit => validate_implicit_disjointness(&schema, &graph),
            };
            let text = match format {
                Format::Text => render_text(&report, explain.then_some(&schema)),
                Format::Structured => render_structured(&report),
            };
            write_output(out, err, None, &text)?;
            Ok(if report.conforms { 0 } else { 1 })
        }
        Command::Compile { schema, target, out: path } => {
            let schema = load_schema(&schema, err)?;
            require_well_formed(&schema, err)?;
            let output = match target {
                Target::Sql => emit_sql(&schema),
                Target::Shacl => emit_shacl(&schema),
                Target::Shex => emit_shex(&schema),
                Target::Pgschema => emit_pg_schema(&schema),
                Target::Dot => EmitterOutput { artifact: emit_dot(&schema), unexpressed: Vec::new() },
            };
            write_output(out, err, path.as_deref(), &output.artifact)?;
            print_diagnostics(err, &output.unexpressed);
            Ok(0)
        }
        Command::Verbalize { schema } => {
            let schema = load_schema(&schema, err)?;
            write_output(out, err, None, &verbalize(&schema))?;
            Ok(0)
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ =
                if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) | Err(Exit(code)) => code,
    }
}
