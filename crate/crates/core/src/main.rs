//! Command-line front end: run built-in scenarios, export them as config
//! documents, re-run monodromy and toricness checks from a document, and
//! evaluate the retraction maps at exact rational points.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use skelfan::normal_bundle::check_toric_along_stratum;
use skelfan::pl_retractions::{
    assemble_pi_prime, collapse_kappa, ks_wing_retraction, quintic_combinatorial_retraction,
    quintic_vertex_retraction, wing_model_contraction, PlMap,
};
use skelfan::report::Report;
use skelfan::scenarios::{self, run_loop, ScenarioData};
use skelfan::spec_doc::{self, rat_from_string, rat_to_string};
use skelfan::RVec;

#[derive(Parser)]
#[command(
    name = "skelfan",
    version,
    about = "exact combinatorics of degenerations: fans, affine structures, monodromy, retractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario end to end and report every check
    Scenario(ScenarioArgs),
    /// Write a built-in scenario as a config document
    Export {
        /// scenario name
        name: String,
        /// output path
        path: PathBuf,
    },
    /// Recompute one monodromy loop from a config document
    Monodromy {
        /// config document path
        spec: PathBuf,
        /// loop name as listed in the document
        loop_name: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the toricness hypothesis checks for one stratum of a document
    CheckToric {
        /// config document path
        spec: PathBuf,
        /// stratum id as listed in the document
        stratum: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate retraction maps exactly
    Retract {
        #[command(subcommand)]
        command: RetractCommand,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// one of: quartic-k3, k3-combined, k3-dispersion, k3-collision,
    /// quintic, quintic-local, fermat-li
    name: String,
    /// emit the full report as a structured document
    #[arg(long)]
    json: bool,
    /// verification grid density (denominator of the sample grid)
    #[arg(long, default_value_t = 12)]
    samples: i64,
    /// write the report to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RetractCommand {
    /// Evaluate a named map at an exact rational point, e.g.
    /// `retract eval quintic-vertex 0 1/3 1`
    Eval {
        /// quintic-vertex, quintic-combinatorial, pi-prime, kappa, or wing(a)
        map: String,
        /// point coordinates as exact rationals (negative values allowed)
        #[arg(allow_hyphen_values = true)]
        coords: Vec<String>,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("run with --help for usage");
    ExitCode::from(2)
}

fn scenario_report(name: &str, samples: i64) -> Option<Result<Report, String>> {
    let run = |r: scenarios::Result<(ScenarioData, Report)>| -> Result<Report, String> {
        r.map(|(_, report)| report).map_err(|e| e.to_string())
    };
    Some(match name {
        "quartic-k3" => run(scenarios::k3::quartic_k3()),
        "k3-combined" => run(scenarios::k3::k3_combined(&BTreeMap::new())),
        "k3-dispersion" => {
            let points = vec![
                skelfan::rat(-3, 5),
                skelfan::rat(-1, 5),
                skelfan::rat(1, 5),
                skelfan::rat(3, 5),
            ];
            run(scenarios::k3::k3_dispersion((0, 1), &points))
        }
        "k3-collision" => run(scenarios::k3::k3_collision()),
        "quintic" => scenarios::quintic::quintic(samples)
            .map(|(_, report)| report)
            .map_err(|e| e.to_string()),
        "quintic-local" => scenarios::local_model::quintic_local_model().map_err(|e| e.to_string()),
        "fermat-li" => {
            let mut report = scenarios::fermat::fermat_li_charts(3);
            report.extend(scenarios::fermat::fermat_li_charts(2));
            Ok(report)
        }
        _ => return None,
    })
}

fn scenario_data(name: &str) -> Option<scenarios::Result<ScenarioData>> {
    Some(match name {
        "quartic-k3" => scenarios::k3::quartic_k3().map(|(d, _)| d),
        "k3-combined" => scenarios::k3::k3_combined(&BTreeMap::new()).map(|(d, _)| d),
        "k3-dispersion" => {
            let points = vec![
                skelfan::rat(-3, 5),
                skelfan::rat(-1, 5),
                skelfan::rat(1, 5),
                skelfan::rat(3, 5),
            ];
            scenarios::k3::k3_dispersion((0, 1), &points).map(|(d, _)| d)
        }
        "k3-collision" => scenarios::k3::k3_collision().map(|(d, _)| d),
        "quintic" => scenarios::quintic::quintic(4).map(|(o, _)| o.data),
        _ => return None,
    })
}

fn emit_report(report: &Report, json: bool, out: Option<&PathBuf>) -> ExitCode {
    let rendered = if json {
        report.to_json()
    } else {
        report.render_text()
    };
    match out {
        None => print!("{rendered}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
            println!(
                "{}: {} checks, {} failed -> {}",
                report.title,
                report.records.len(),
                report.failures(),
                path.display()
            );
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_scenario(args: &ScenarioArgs) -> ExitCode {
    match scenario_report(&args.name, args.samples) {
        None => usage_error(&format!(
            "unknown scenario {:?}; expected one of quartic-k3, k3-combined, k3-dispersion, k3-collision, quintic, quintic-local, fermat-li",
            args.name
        )),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Some(Ok(report)) => emit_report(&report, args.json, args.out.as_ref()),
    }
}

fn cmd_export(name: &str, path: &PathBuf) -> ExitCode {
    match scenario_data(name) {
        None => usage_error(&format!(
            "scenario {name:?} is not exportable; expected one of quartic-k3, k3-combined, k3-dispersion, k3-collision, quintic"
        )),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Some(Ok(data)) => {
            let doc = spec_doc::from_scenario(&data);
            match std::fs::write(path, spec_doc::to_json(&doc)) {
                Ok(()) => {
                    println!("wrote {}", path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::FAILURE
                }
            }
        }
    }
}

fn load_scenario(path: &PathBuf) -> Result<ScenarioData, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })?;
    let doc = spec_doc::parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(2)
    })?;
    spec_doc::to_scenario(&doc).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn cmd_monodromy(path: &PathBuf, loop_name: &str, json: bool) -> ExitCode {
    let data = match load_scenario(path) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let spec = match data.loops.iter().find(|l| l.name == loop_name) {
        Some(s) => s,
        None => {
            eprintln!(
                "error: no loop named {loop_name:?}; available: {}",
                data.loops
                    .iter()
                    .map(|l| l.name.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            return ExitCode::from(2);
        }
    };
    match run_loop(&data.complex, &data.models, spec) {
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Ok(outcome) => {
            let mut report = Report::new(format!("monodromy {loop_name}"));
            scenarios::report_loop(&mut report, &outcome);
            emit_report(&report, json, None)
        }
    }
}

fn cmd_check_toric(path: &PathBuf, stratum_id: &str, json: bool) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let doc = match spec_doc::parse(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let stratum_doc = match doc.strata.iter().find(|s| s.id == stratum_id) {
        Some(s) => s,
        None => {
            eprintln!(
                "error: no stratum named {stratum_id:?}; available: {}",
                doc.strata
                    .iter()
                    .map(|s| s.id.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            return ExitCode::from(2);
        }
    };
    let mut report = Report::new(format!("check-toric {stratum_id}"));
    match spec_doc::stratum_from_doc(stratum_doc) {
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
        Ok(None) => {
            report.check(
                format!("{stratum_id}: toric certification"),
                false,
                "stratum fan data",
                "cannot certify: no fan data recorded for this stratum",
                "",
            );
        }
        Ok(Some(stratum)) => {
            let tb = check_toric_along_stratum(&stratum);
            scenarios::report_toricity(&mut report, &tb);
        }
    }
    emit_report(&report, json, None)
}

fn named_map(name: &str) -> Option<PlMap> {
    if let Some(rest) = name.strip_prefix("wing(").and_then(|r| r.strip_suffix(')')) {
        let a = rat_from_string(rest).ok()?;
        return ks_wing_retraction(&a).ok();
    }
    match name {
        "quintic-vertex" => Some(quintic_vertex_retraction()),
        "quintic-combinatorial" => Some(quintic_combinatorial_retraction()),
        "pi-prime" => Some(assemble_pi_prime()),
        "kappa" => Some(collapse_kappa()),
        "wing-contraction" => Some(wing_model_contraction()),
        _ => None,
    }
}

fn cmd_retract_eval(map_name: &str, coords: &[String]) -> ExitCode {
    let map = match named_map(map_name) {
        Some(m) => m,
        None => {
            return usage_error(&format!(
                "unknown map {map_name:?}; expected quintic-vertex, quintic-combinatorial, pi-prime, kappa, wing-contraction, or wing(a)"
            ))
        }
    };
    if coords.len() != map.dim {
        return usage_error(&format!(
            "map {map_name} expects {} coordinates, got {}",
            map.dim,
            coords.len()
        ));
    }
    let mut entries = Vec::with_capacity(coords.len());
    for c in coords {
        match rat_from_string(c) {
            Ok(v) => entries.push(v),
            Err(e) => return usage_error(&format!("bad coordinate {c:?}: {e}")),
        }
    }
    match map.eval(&RVec::new(entries)) {
        Ok(image) => {
            let parts: Vec<String> = image.entries().iter().map(rat_to_string).collect();
            println!("{}", parts.join(" "));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Scenario(args) => cmd_scenario(args),
        Command::Export { name, path } => cmd_export(name, path),
        Command::Monodromy {
            spec,
            loop_name,
            json,
        } => cmd_monodromy(spec, loop_name, *json),
        Command::CheckToric {
            spec,
            stratum,
            json,
        } => cmd_check_toric(spec, stratum, *json),
        Command::Retract { command } => match command {
            RetractCommand::Eval { map, coords } => cmd_retract_eval(map, coords),
        },
    }
}
