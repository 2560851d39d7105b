//! `tmuml`: the UML → thinging-machine pipeline from the command line.
//!
//! Exit codes: 0 ok, 1 error-level findings, 2 parse or reference error,
//! 3 usage or I/O error.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tmuml_core::events::{
    check_method_paths, graph_from_document, parse_events, parse_events_document,
    print_events_document, recognize_methods, simulate, validate_regions, BehaviorGraph, EventDef,
    EventsError,
};
use tmuml_core::render::{emit_dot, RenderView, View};
use tmuml_core::tm::{parse_tm, print_tm, validate_static, StaticModel};
use tmuml_core::transform::{build_static, parse_bindings, BindingMap, TransformError};
use tmuml_core::uml::{parse_class, parse_usecase, serialize_class, serialize_usecase};
use tmuml_core::ValidationReport;

#[derive(Parser)]
#[command(
    name = "tmuml",
    version,
    about = "UML use-case and class models to thinging-machine models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse any input file and print it in canonical form.
    Parse { file: PathBuf },
    /// Build the static model from use-case, class and binding files.
    Transform {
        #[command(flatten)]
        inputs: UmlInputs,
        /// Write the model here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a static model for well-formedness.
    Validate { tm: PathBuf },
    /// Check the event regions of an events file against a static model.
    Events {
        #[arg(long)]
        tm: PathBuf,
        events: PathBuf,
    },
    /// Check that every method path follows behavior edges.
    Behavior {
        events: PathBuf,
        /// Also resolve regions against this static model.
        #[arg(long)]
        tm: Option<PathBuf>,
    },
    /// Walk the behavior graph with a seeded random choice.
    Simulate {
        events: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Emit Graphviz DOT for one view.
    Render {
        #[arg(long)]
        tm: PathBuf,
        #[arg(long, default_value = "static")]
        view: View,
        #[arg(long)]
        events: Option<PathBuf>,
        #[arg(long)]
        no_storage: bool,
        #[arg(long)]
        no_conditions: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run every stage and write all artifacts to a directory.
    Pipeline {
        #[command(flatten)]
        inputs: UmlInputs,
        #[arg(long)]
        events: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct UmlInputs {
    #[arg(long)]
    usecase: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    bindings: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Start events; defaults to events with no incoming edge.
    #[arg(long)]
    start: Vec<String>,
}

struct Failure {
    code: u8,
    message: String,
}

type Outcome = Result<u8, Failure>;

fn usage(message: impl Display) -> Failure {
    Failure {
        code: 3,
        message: message.to_string(),
    }
}

/// Errors from the library carry `line:column:` when they have a position;
/// prefixing the path gives the usual `file:line:column:` form.
fn parse_failure(path: &Path, err: impl Display) -> Failure {
    let err = err.to_string();
    let sep = if err.starts_with(|c: char| c.is_ascii_digit()) {
        ":"
    } else {
        ": "
    };
    Failure {
        code: 2,
        message: format!("{}{sep}{err}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_tm(path: &Path) -> Result<StaticModel, Failure> {
    parse_tm(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn transform_error(path: &Path, e: TransformError) -> Failure {
    match e {
        TransformError::Parse(p) => parse_failure(path, p),
        other => Failure {
            code: 1,
            message: other.to_string(),
        },
    }
}

fn load_static(inputs: &UmlInputs) -> Result<StaticModel, Failure> {
    let uc =
        parse_usecase(&read(&inputs.usecase)?).map_err(|e| parse_failure(&inputs.usecase, e))?;
    let cm = parse_class(&read(&inputs.class)?).map_err(|e| parse_failure(&inputs.class, e))?;
    let bind = match &inputs.bindings {
        Some(p) => parse_bindings(&read(p)?).map_err(|e| transform_error(p, e))?,
        None => BindingMap::default(),
    };
    let path = inputs.bindings.as_deref().unwrap_or(&inputs.class);
    build_static(&uc, &cm, &bind).map_err(|e| transform_error(path, e))
}

fn events_failure(path: &Path, e: EventsError) -> Failure {
    match e {
        EventsError::EmptyStartSet
        | EventsError::UnknownEvent(_)
        | EventsError::DuplicateMethod(_) => Failure {
            code: 2,
            message: format!("{}: {e}", path.display()),
        },
        other => parse_failure(path, other),
    }
}

fn load_events(
    path: &Path,
    model: &StaticModel,
) -> Result<(Vec<EventDef>, BehaviorGraph), Failure> {
    parse_events(&read(path)?, model).map_err(|e| events_failure(path, e))
}

fn load_graph(path: &Path) -> Result<BehaviorGraph, Failure> {
    let doc = parse_events_document(&read(path)?).map_err(|e| parse_failure(path, e))?;
    graph_from_document(&doc).map_err(|e| events_failure(path, e))
}

fn report_status(reports: &[&ValidationReport]) -> u8 {
    u8::from(reports.iter().any(|r| r.has_errors()))
}

fn print_report(r: &ValidationReport) {
    print!("{r}");
}

fn start_set(g: &BehaviorGraph, start: &[String]) -> BTreeSet<String> {
    if start.is_empty() {
        g.entry_events()
    } else {
        start.iter().cloned().collect()
    }
}

fn methods_text(g: &BehaviorGraph, steps: &[String]) -> String {
    recognize_methods(g, steps)
        .into_iter()
        .map(|(name, i)| format!("{name} {i}\n"))
        .collect()
}

fn render_view(view: View, no_storage: bool, no_conditions: bool) -> RenderView {
    let mut v = RenderView::new(view);
    v.options.show_storage = !no_storage;
    v.options.condition_labels = !no_conditions;
    v
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Parse { file } => {
            let text = read(&file)?;
            let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("");
            let out = match ext {
                "tm" => print_tm(&parse_tm(&text).map_err(|e| parse_failure(&file, e))?),
                "uc" => {
                    serialize_usecase(&parse_usecase(&text).map_err(|e| parse_failure(&file, e))?)
                }
                "cls" => serialize_class(&parse_class(&text).map_err(|e| parse_failure(&file, e))?),
                "ev" => print_events_document(
                    &parse_events_document(&text).map_err(|e| parse_failure(&file, e))?,
                ),
                "bind" => parse_bindings(&text)
                    .map_err(|e| transform_error(&file, e))?
                    .to_text(),
                _ => {
                    return Err(usage(format!(
                        "{}: unknown file kind (expected .tm, .uc, .cls, .ev or .bind)",
                        file.display()
                    )))
                }
            };
            print!("{out}");
            Ok(0)
        }
        Command::Transform { inputs, out } => {
            let model = load_static(&inputs)?;
            emit(out.as_deref(), &print_tm(&model))?;
            Ok(0)
        }
        Command::Validate { tm } => {
            let report = validate_static(&load_tm(&tm)?);
            print_report(&report);
            Ok(report_status(&[&report]))
        }
        Command::Events { tm, events } => {
            let model = load_tm(&tm)?;
            let (defs, _) = load_events(&events, &model)?;
            let report = validate_regions(&model, &defs);
            print_report(&report);
            Ok(report_status(&[&report]))
        }
        Command::Behavior { events, tm } => {
            let g = match tm {
                Some(tm) => load_events(&events, &load_tm(&tm)?)?.1,
                None => load_graph(&events)?,
            };
            let report = check_method_paths(&g);
            print_report(&report);
            Ok(report_status(&[&report]))
        }
        Command::Simulate { events, sim, out } => {
            let g = load_graph(&events)?;
            let trace = simulate(&g, &start_set(&g, &sim.start), sim.seed, sim.steps)
                .map_err(|e| usage(e.to_string()))?;
            emit(out.as_deref(), &trace.to_text())?;
            Ok(0)
        }
        Command::Render {
            tm,
            view,
            events,
            no_storage,
            no_conditions,
            out,
        } => {
            let model = load_tm(&tm)?;
            let loaded = match &events {
                Some(p) => Some(load_events(p, &model)?),
                None => None,
            };
            let dot = emit_dot(
                &model,
                loaded.as_ref().map(|(d, _)| d.as_slice()),
                loaded.as_ref().map(|(_, g)| g),
                &render_view(view, no_storage, no_conditions),
            )
            .map_err(usage)?;
            emit(out.as_deref(), &dot)?;
            Ok(0)
        }
        Command::Pipeline {
            inputs,
            events,
            sim,
            out,
        } => {
            let model = load_static(&inputs)?;
            let (defs, g) = load_events(&events, &model)?;
            fs::create_dir_all(&out).map_err(|e| usage(format!("{}: {e}", out.display())))?;

            let static_report = validate_static(&model);
            let region_report = validate_regions(&model, &defs);
            let method_report = check_method_paths(&g);
            let trace = simulate(&g, &start_set(&g, &sim.start), sim.seed, sim.steps)
                .map_err(|e| usage(e.to_string()))?;

            write(&out.join("model.tm"), &print_tm(&model))?;
            write(&out.join("static_report.txt"), &static_report.to_string())?;
            write(&out.join("events_report.txt"), &region_report.to_string())?;
            write(&out.join("behavior_report.txt"), &method_report.to_string())?;
            write(&out.join("trace.txt"), &trace.to_text())?;
            write(&out.join("methods.txt"), &methods_text(&g, &trace.steps))?;
            for (name, view) in [
                ("static.dot", View::Static),
                ("events.dot", View::Events),
                ("behavior.dot", View::Behavior),
            ] {
                let dot = emit_dot(&model, Some(&defs), Some(&g), &RenderView::new(view))
                    .map_err(usage)?;
                write(&out.join(name), &dot)?;
            }

            for r in [&static_report, &region_report, &method_report] {
                print_report(r);
            }
            println!(
                "wrote {} ({} machines, {} events, {} trace steps)",
                out.display(),
                model.machines.len(),
                defs.len(),
                trace.steps.len()
            );
            Ok(report_status(&[
                &static_report,
                &region_report,
                &method_report,
            ]))
        }
    }
}

fn styled_error(message: &str) -> String {
    let color = std::env::var_os("NO_COLOR").is_none() && std::io::stderr().is_terminal();
    if color {
        format!("\x1b[1;31merror\x1b[0m: {message}")
    } else {
        format!("error: {message}")
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if help { 0 } else { 3 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", styled_error(&f.message));
            ExitCode::from(f.code)
        }
    }
}
