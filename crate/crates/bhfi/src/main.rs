use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use bhfi::equivalence::{homology_basis_of_mor, omega_equivalence, DEFAULT_MAX_SUM};
use bhfi::error::{Error, Result};
use bhfi::involutive::{involutive_pair, iota_on_mor, mcg_action, InvolutiveAInf, InvolutiveTypeD, OmegaSource};
use bhfi::io::{builtin, load_structure, save_structure, standard_fixtures, structure_from_json, StructureJson};
use bhfi::structures::{box_tensor, check_structure, Kind, Structure};
use bhfi::triangle::verify_hfi_triangle;

/// Bordered Floer calculator: HF-hat, HFI-hat and friends over F2.
#[derive(Parser, Debug)]
#[command(name = "bhfi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Built-in structure, used before positional files (repeatable).
    #[arg(long = "builtin", global = true, value_name = "NAME")]
    builtins: Vec<String>,
    /// Write the report (or fixtures, for dump-standard) here.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest sum of homology classes tried by equivalence searches.
    #[arg(long = "max-sum-size", global = true, default_value_t = DEFAULT_MAX_SUM, value_name = "N")]
    max_sum: usize,
    /// Largest number of algebra inputs in A-infinity searches.
    #[arg(long = "max-arity", global = true, default_value_t = 2, value_name = "N")]
    max_arity: usize,
    /// Timing output on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology of a gluing: two type D files (morphism route) or type A then type D.
    Hfhat { files: Vec<PathBuf> },
    /// Involutive homology, same inputs as hfhat.
    Hfihat { files: Vec<PathBuf> },
    /// Check the structure relations of each input.
    Verify { files: Vec<PathBuf> },
    /// Exactness of the surgery triangle paired with a genus-one type A module.
    Triangle { files: Vec<PathBuf> },
    /// Mapping class action: module, type D, bimodule, inverse bimodule.
    Mcg { files: Vec<PathBuf> },
    /// Write the standard objects as structure files into --out (default fixtures/).
    DumpStandard,
}

fn inputs(cli: &Cli, files: &[PathBuf]) -> Result<Vec<Structure>> {
    let mut out: Vec<Structure> = cli.builtins.iter().map(|b| builtin(b)).collect::<Result<_>>()?;
    for f in files {
        out.push(load_structure(f)?);
    }
    Ok(out)
}

fn expect_n(v: &[Structure], n: usize, what: &str) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} takes {n} inputs, got {}", v.len())))
    }
}

fn pairing_kind(v: &[Structure]) -> Result<bool> {
    match (v[0].kind, v[1].kind) {
        (Kind::D, Kind::D) => Ok(false),
        (Kind::A, Kind::D) => Ok(true),
        (a, b) => Err(Error::InvalidArgument(format!("cannot pair {a:?} with {b:?}"))),
    }
}

/// Report plus whether every check passed.
fn run(cli: &Cli) -> Result<(serde_json::Value, bool)> {
    match &cli.command {
        Command::Hfhat { files } => {
            let v = inputs(cli, files)?;
            expect_n(&v, 2, "hfhat")?;
            let hf = if pairing_kind(&v)? {
                box_tensor(&v[0], &v[1])?.0.to_chain_complex().homology().dim
            } else {
                homology_basis_of_mor(&v[0], &v[1])?.dim()
            };
            Ok((json!({ "hf_dim": hf }), true))
        }
        Command::Hfihat { files } => {
            let v = inputs(cli, files)?;
            expect_n(&v, 2, "hfihat")?;
            let report = if pairing_kind(&v)? {
                let d = InvolutiveTypeD::new(v[1].clone(), cli.max_sum)?;
                let a = InvolutiveAInf::new(v[0].clone(), cli.max_arity, cli.max_sum)?;
                let alg = v[1].out_strands().cloned().expect("type D");
                // The bimodule-level Omega is only tractable in low genus.
                match omega_equivalence(&alg, cli.max_sum) {
                    Ok(omega) => involutive_pair(&a, &d, OmegaSource::Da(&omega), cli.max_sum)?.report(),
                    Err(Error::Divergence(_)) => involutive_pair(&a, &d, OmegaSource::Search, cli.max_sum)?.report(),
                    Err(e) => return Err(e),
                }
            } else {
                iota_on_mor(&v[0], &v[1], cli.max_sum)?.report
            };
            let value: serde_json::Value = serde_json::from_str(&report.to_json())?;
            Ok((value, report.is_involution()))
        }
        Command::Verify { files } => {
            let mut reports = Vec::new();
            let mut all = true;
            let mut items: Vec<(String, Result<Structure>)> =
                cli.builtins.iter().map(|b| (b.clone(), builtin(b))).collect();
            for f in files {
                let parsed = std::fs::read_to_string(f)
                    .map_err(Error::from)
                    .and_then(|t| Ok(serde_json::from_str::<StructureJson>(&t)?))
                    .and_then(|j| structure_from_json(&j));
                items.push((f.display().to_string(), parsed));
            }
            for (name, s) in items {
                let s = s?;
                let v = check_structure(&s);
                all &= v.is_empty();
                reports.push(json!({
                    "input": name,
                    "kind": format!("{:?}", s.kind),
                    "generators": s.len(),
                    "terms": s.arrows.len(),
                    "violations": v.len(),
                    "first_violation": v.first().map(|x| x.message.clone()),
                    "pass": v.is_empty(),
                }));
            }
            Ok((json!({ "results": reports, "pass": all }), all))
        }
        Command::Triangle { files } => {
            let v = inputs(cli, files)?;
            expect_n(&v, 1, "triangle")?;
            let r = verify_hfi_triangle(&v[0])?;
            let mut value = serde_json::to_value(&r)?;
            value["pass"] = json!(r.ok());
            Ok((value, r.ok()))
        }
        Command::Mcg { files } => {
            let v = inputs(cli, files)?;
            expect_n(&v, 4, "mcg")?;
            let m = mcg_action(&v[0], &v[1], &v[2], &v[3], cli.max_arity, cli.max_sum)?;
            Ok((json!({ "hf_dim": m.rows(), "action": m.to_rows() }), true))
        }
        Command::DumpStandard => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("fixtures"));
            std::fs::create_dir_all(&dir)?;
            let mut written = Vec::new();
            for (name, file) in standard_fixtures() {
                save_structure(&builtin(name)?, &dir.join(file))?;
                written.push(file);
            }
            Ok((json!({ "dir": dir.display().to_string(), "written": written }), true))
        }
    }
}

fn text(value: &serde_json::Value) -> String {
    match value.as_object() {
        Some(map) => map.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n"),
        None => value.to_string(),
    }
}

fn emit(cli: &Cli, body: String) -> Result<()> {
    match (&cli.out, &cli.command) {
        (Some(p), c) if !matches!(c, Command::DumpStandard) => std::fs::write(Path::new(p), body + "\n")?,
        _ => println!("{body}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    if cli.verbose > 0 {
        eprintln!("elapsed {:?}", start.elapsed());
    }
    match result {
        Ok((value, ok)) => {
            let body = if cli.json { value.to_string() } else { text(&value) };
            if let Err(e) = emit(&cli, body) {
                eprintln!("{e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            let diag = json!({ "error": e.to_string(), "code": e.exit_code() });
            eprintln!("{diag}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
