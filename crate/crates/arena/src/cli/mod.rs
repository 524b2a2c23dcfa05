// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 validation error,
//! 4 I/O error.

pub mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::active::{
    execute_active, recon_exhaustive, recon_path_informed, Seeds, Victim, DEFAULT_PROBE_SHOTS,
};
use crate::circuits::{grover_2q, LogicalCircuit};
use crate::experiments::{
    experiment1, experiment2, experiment3, experiment4, exp3_labels, exp3_listeners, exp3_victim,
    exp4_labels, exp4_listeners, exp4_victim, Exp1Params, Exp2Params, PassiveParams,
    PassiveResult, RunSettings, DEFAULT_SHOTS,
};
use crate::noise::{load_noise_profile, CrosstalkModel, NoiseError};
use crate::passive::{
    learn_signatures, measure_signature, predict, rank_qubits, select_qubits, CrosstalkSignature,
    PassiveError, SelectionStrategy, SignatureDataset, VictimBuilder,
};
use crate::router::{swap_path, Layout};
use crate::topology::{build_heavy_hex, load_topology, DeviceTopology, TopologyError};
use crate::{circuits::CircuitError, Error};
use report::{curve_csv, matrix_csv, options_csv, prediction_csv, sweep_csv, Outputs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_IO: u8 = 4;

pub const THREADS_ENV: &str = "CROSSTALK_ARENA_THREADS";

#[derive(Debug, Parser)]
#[command(name = "crosstalk-arena", version, about = "SWAP-path crosstalk attack simulator")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Device topology JSON; defaults to the 127-qubit heavy-hex lattice.
    #[arg(long, global = true)]
    pub device: Option<PathBuf>,
    /// Noise profile JSON; defaults to the shipped calibrated profile.
    #[arg(long, global = true)]
    pub noise: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SHOTS)]
    pub shots: usize,
    #[arg(long = "transpile-seed", global = true, default_value_t = 0)]
    pub transpile_seed: u64,
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// optimal, default or non-optimal.
    #[arg(long, global = true)]
    pub strategy: Option<String>,
    /// Comma-separated listening sizes.
    #[arg(long, global = true, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
pub enum Command {
    /// Print the seeded SWAP path between two physical qubits.
    PathQuery {
        #[arg(long)]
        src: usize,
        #[arg(long)]
        dst: usize,
    },
    /// Run one attacker pair against a 2-qubit victim.
    Attack {
        #[arg(long, value_delimiter = ',', default_values_t = [63usize, 64])]
        victim_qubits: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        attacker: Vec<usize>,
        /// Grover marked state of the victim.
        #[arg(long, default_value = "11")]
        marked: String,
        /// Custom victim circuit JSON (overrides --marked).
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
    /// Reconnaissance over every second qubit for a fixed first qubit.
    Recon {
        #[arg(long, value_delimiter = ',', default_values_t = [63usize, 64])]
        victim_qubits: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        fixed: usize,
        #[arg(long, default_value = "11")]
        marked: String,
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_PROBE_SHOTS)]
        probe_shots: usize,
        /// Only probe pairs whose SWAP path crosses the victim.
        #[arg(long)]
        path_informed: bool,
    },
    /// Learn a signature dataset (or, with --observe, one fresh signature).
    Learn {
        /// 3 = victim size labels, 4 = hidden-shift labels.
        #[arg(long, default_value_t = 3)]
        experiment: u8,
        #[arg(long)]
        observe: Option<String>,
    },
    /// Match an observed signature against a dataset.
    Predict {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        observed: PathBuf,
        #[arg(long)]
        true_label: Option<String>,
    },
    /// Recon table for the fixed first qubit plus victim-position accuracy.
    Experiment1 {
        #[arg(long, default_value_t = DEFAULT_PROBE_SHOTS)]
        probe_shots: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [63usize, 64])]
        victim_qubits: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        fixed: usize,
    },
    /// Fixed attacker pair against a sliding 2-qubit victim.
    Experiment2,
    /// Victim-size inference from listening qubits.
    Experiment3 {
        #[arg(long, default_value_t = crate::passive::DEFAULT_EVAL_REPETITIONS)]
        repetitions: usize,
    },
    /// Hidden-shift inference on a spread 14-qubit victim.
    Experiment4 {
        #[arg(long, default_value_t = crate::passive::DEFAULT_EVAL_REPETITIONS)]
        repetitions: usize,
    },
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::Topology(TopologyError::Parse(_) | TopologyError::UnsupportedSize { .. })
        | Error::Noise(NoiseError::Parse(_))
        | Error::Circuit(CircuitError::Parse(_))
        | Error::Passive(PassiveError::Parse(_) | PassiveError::UnknownStrategy(_)) => EXIT_CONFIG,
        Error::Io(_) | Error::Topology(TopologyError::Io(_)) | Error::Noise(NoiseError::Io(_)) => {
            EXIT_IO
        }
        _ => EXIT_VALIDATION,
    }
}

/// Parses `std::env::args`, runs the command and maps errors to exit codes.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads(std::env::var(THREADS_ENV).ok().as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e));
    }
    match run(&cli) {
        Ok(lines) => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            for l in lines {
                // A closed pipe (e.g. `| head`) is not an error for us.
                if writeln!(out, "{l}").is_err() {
                    break;
                }
            }
            ExitCode::from(EXIT_OK)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn configure_threads(value: Option<&str>) -> Result<(), Error> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV}={v:?} is not a positive integer")))?;
    // A pool may already exist when embedded; the cap is then best effort.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

struct Context {
    device: DeviceTopology,
    run: RunSettings,
    config: serde_json::Value,
}

fn load_context(cli: &Cli) -> Result<Context, Error> {
    let c = &cli.common;
    if c.shots == 0 {
        return Err(Error::Config("--shots must be at least 1".into()));
    }
    let device = match &c.device {
        Some(p) => load_topology(p)?,
        None => build_heavy_hex(127)?,
    };
    let model = match &c.noise {
        Some(p) => load_noise_profile(p)?,
        None => CrosstalkModel::calibrated(),
    };
    let run = RunSettings {
        model,
        shots: c.shots,
        seeds: Seeds {
            transpile: c.transpile_seed,
            master: c.seed,
        },
    };
    let config = json!({
        "device": c.device.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "heavy-hex-127".into()),
        "device_sha256": report::sha256_hex(device.to_json().as_bytes()),
        "noise": model,
        "shots": c.shots,
        "transpile_seed": c.transpile_seed,
        "seed": c.seed,
        "strategy": c.strategy,
        "k": c.k,
        "command": cli.command,
    });
    Ok(Context {
        device,
        run,
        config,
    })
}

fn strategy(c: &Common) -> Result<Option<SelectionStrategy>, Error> {
    c.strategy
        .as_deref()
        .map(|s| s.parse().map_err(Error::from))
        .transpose()
}

fn pair(v: &[usize], what: &str) -> Result<(usize, usize), Error> {
    match v {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Config(format!("{what} needs exactly two qubits, got {v:?}"))),
    }
}

fn read_circuit(path: &Path) -> Result<LogicalCircuit, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(LogicalCircuit::from_json_str(&text)?)
}

fn victim(
    qubits: &[usize],
    marked: &str,
    circuit: &Option<PathBuf>,
) -> Result<Victim, Error> {
    let circuit = match circuit {
        Some(p) => read_circuit(p)?,
        None => grover_2q(marked)?,
    };
    Ok(Victim {
        layout: Layout::new(qubits.to_vec())?,
        circuit,
    })
}

/// Runs a parsed command. Returns the lines to print on success.
pub fn run(cli: &Cli) -> Result<Vec<String>, Error> {
    let ctx = load_context(cli)?;
    let c = &cli.common;
    let only = strategy(c)?;
    let (name, outputs, mut lines) = match &cli.command {
        Command::PathQuery { src, dst } => {
            let p = swap_path(&ctx.device, *src, *dst, c.transpile_seed)?;
            let text = serde_json::to_string(&json!({
                "src": src, "dst": dst, "seed": p.seed,
                "hops": p.nodes.len() - 1, "nodes": p.nodes,
            }))
            .expect("path serializes");
            return Ok(vec![text]);
        }
        Command::Attack {
            victim_qubits,
            attacker,
            marked,
            circuit,
        } => {
            let v = victim(victim_qubits, marked, circuit)?;
            let pair = pair(attacker, "--attacker")?;
            let r = execute_active(&v, pair, &ctx.device, &ctx.run.model, c.shots, ctx.run.seeds)?;
            let mut out = Outputs::default();
            out.add_json("attack.json", &r);
            let line = format!(
                "attacker {:?} -> acc0 {:.5}, deviation {:.2}%, {} (path crosses victim: {})",
                pair, r.acc0, r.deviation_pct, r.severity, r.intersected
            );
            ("attack", out, vec![line])
        }
        Command::Recon {
            victim_qubits,
            fixed,
            marked,
            circuit,
            probe_shots,
            path_informed,
        } => {
            let v = victim(victim_qubits, marked, circuit)?;
            let mut out = Outputs::default();
            let line = if *path_informed {
                let r = recon_path_informed(&v, *fixed, &ctx.device, &ctx.run.model, *probe_shots, ctx.run.seeds)?;
                out.add("recon.csv", options_csv(&r.options));
                out.add_json(
                    "recon.json",
                    &json!({"searched": r.searched, "candidates": r.candidates, "options": r.options}),
                );
                format!("path-informed recon searched {} of {} pairs", r.searched, r.candidates)
            } else {
                let r = recon_exhaustive(&v, *fixed, &ctx.device, &ctx.run.model, *probe_shots, ctx.run.seeds)?;
                out.add("recon.csv", options_csv(&r));
                out.add_json("recon.json", &json!({"searched": r.len(), "options": r}));
                format!("exhaustive recon searched {} pairs", r.len())
            };
            ("recon", out, vec![line])
        }
        Command::Learn { experiment, observe } => learn(&ctx, *experiment, observe.as_deref())?,
        Command::Predict {
            dataset,
            observed,
            true_label,
        } => {
            let ds = SignatureDataset::load(dataset)?;
            let text = std::fs::read_to_string(observed)
                .map_err(|e| Error::Io(format!("{}: {e}", observed.display())))?;
            let obs: CrosstalkSignature = serde_json::from_str(&text)
                .map_err(|e| PassiveError::Parse(e.to_string()))?;
            let (ds, obs) = match (only, &c.k) {
                (Some(s), Some(ks)) => {
                    let k = *ks.first().ok_or_else(|| Error::Config("--k is empty".into()))?;
                    let chosen = select_qubits(&rank_qubits(&ds)?, k, s)?;
                    (ds.restrict(&chosen)?, obs.restrict(&chosen)?)
                }
                (None, None) => (ds, obs),
                _ => return Err(Error::Config("--strategy and --k go together".into())),
            };
            let p = predict(&ds, &obs, true_label.as_deref())?;
            let mut out = Outputs::default();
            out.add("prediction.csv", prediction_csv(&p));
            out.add_json("prediction.json", &p);
            let mut line = format!("predicted {} (confidence {:.4})", p.predicted, p.confidence);
            if let Some(a) = p.acc1 {
                line.push_str(&format!(", acc1 {a:.4}"));
            }
            ("predict", out, vec![line])
        }
        Command::Experiment1 {
            probe_shots,
            victim_qubits,
            fixed,
        } => {
            let params = Exp1Params {
                probe_shots: *probe_shots,
                victim_qubits: pair(victim_qubits, "--victim-qubits")?,
                fixed_attacker_qubit: *fixed,
                ..Exp1Params::default()
            };
            let r = experiment1(&ctx.device, &params, &ctx.run)?;
            let mut out = Outputs::default();
            out.add("experiment1_options.csv", options_csv(&r.options));
            out.add("experiment1_path_informed.csv", options_csv(&r.informed.options));
            let series = r
                .paths
                .iter()
                .map(|(q, path, hit)| {
                    let o = r.options.iter().find(|o| o.attacker_pair.1 == *q).unwrap();
                    vec![
                        q.to_string(),
                        format!("{:.5}", o.acc0),
                        if *hit { "TRUE" } else { "FALSE" }.to_string(),
                        path.nodes.len().to_string(),
                    ]
                })
                .collect::<Vec<_>>();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["second_qubit", "acc0", "intersects", "path_nodes"]).unwrap();
            for row in series {
                w.write_record(row).unwrap();
            }
            out.add("experiment1_accuracy_by_position.csv", w.into_inner().unwrap());
            out.add_json(
                "experiment1.json",
                &json!({
                    "params": params,
                    "options": r.options,
                    "probes": r.probes,
                    "paths": r.paths.iter().map(|(q, p, hit)| json!({"second_qubit": q, "nodes": p.nodes, "intersects": hit})).collect::<Vec<_>>(),
                    "path_informed": {"searched": r.informed.searched, "candidates": r.informed.candidates, "options": r.informed.options},
                }),
            );
            let line = format!(
                "experiment1: {} options; path-informed search {} of {}",
                r.options.len(),
                r.informed.searched,
                r.informed.candidates
            );
            ("experiment1", out, vec![line])
        }
        Command::Experiment2 => {
            let params = Exp2Params::default();
            let reports = experiment2(&ctx.device, &params, &ctx.run)?;
            let mut out = Outputs::default();
            out.add("experiment2.csv", sweep_csv(&reports));
            out.add_json("experiment2.json", &json!({"params": params, "reports": reports}));
            let lines = reports
                .iter()
                .map(|r| {
                    format!(
                        "({},{}) intersects={} deviation {:.2}% {}",
                        r.victim_layout[0], r.victim_layout[1], r.intersected, r.deviation_pct, r.severity
                    )
                })
                .collect();
            ("experiment2", out, lines)
        }
        Command::Experiment3 { repetitions } => {
            let mut params = PassiveParams::exp3();
            params.repetitions = *repetitions;
            if let Some(ks) = &c.k {
                params.k_grid = ks.clone();
            }
            let r = experiment3(&ctx.device, &params, &ctx.run)?;
            passive_outputs("experiment3", &r, &params, only)?
        }
        Command::Experiment4 { repetitions } => {
            let mut params = PassiveParams::exp4();
            params.repetitions = *repetitions;
            if let Some(ks) = &c.k {
                params.k_grid = ks.clone();
            }
            let r = experiment4(&ctx.device, &params, &ctx.run)?;
            passive_outputs("experiment4", &r, &params, only)?
        }
    };
    let names: Vec<String> = outputs.names().map(String::from).collect();
    outputs.commit(&c.out, name, &ctx.config)?;
    lines.push(format!("wrote {} to {}", names.join(", "), c.out.display()));
    Ok(lines)
}

fn learn(
    ctx: &Context,
    experiment: u8,
    observe: Option<&str>,
) -> Result<(&'static str, Outputs, Vec<String>), Error> {
    let device = &ctx.device;
    let exp3 = |l: &str| {
        let size: usize = l
            .parse()
            .map_err(|_| PassiveError::Parse(format!("size label {l:?}")))?;
        exp3_victim(device, size)
    };
    let exp4 = |l: &str| exp4_victim(device, l);
    let (labels, listeners, builder): (Vec<String>, Vec<usize>, &VictimBuilder) = match experiment {
        3 => (exp3_labels(), exp3_listeners(), &exp3),
        4 => (exp4_labels(), exp4_listeners(device)?, &exp4),
        other => return Err(Error::Config(format!("--experiment must be 3 or 4, got {other}"))),
    };
    let mut out = Outputs::default();
    if let Some(label) = observe {
        let sig = measure_signature(
            label,
            builder,
            &listeners,
            device,
            &ctx.run.model,
            ctx.run.shots,
            ctx.run.seeds.transpile,
            ctx.run.seeds.master,
        )?;
        out.add_json(format!("observed-{label}.json"), &sig);
        return Ok(("learn", out, vec![format!("observed one signature for label {label}")]));
    }
    let ds = learn_signatures(&labels, builder, &listeners, device, &ctx.run.model, ctx.run.shots, ctx.run.seeds)?;
    let mut text = ds.to_json();
    text.push('\n');
    out.add(format!("experiment{experiment}_dataset.json"), text);
    Ok(("learn", out, vec![format!("learned {} signatures", ds.len())]))
}

fn passive_outputs(
    name: &'static str,
    r: &PassiveResult,
    params: &PassiveParams,
    only: Option<SelectionStrategy>,
) -> Result<(&'static str, Outputs, Vec<String>), Error> {
    let mut out = Outputs::default();
    let mut text = r.dataset.to_json();
    text.push('\n');
    out.add(format!("{name}_dataset.json"), text);
    let labels: Vec<String> = r.dataset.labels().map(String::from).collect();
    let mut lines = Vec::new();
    for (s, points) in &r.curves {
        if only.is_some_and(|o| o != *s) {
            continue;
        }
        out.add(format!("{name}_curve_{s}.csv"), curve_csv(points));
        let summary = points
            .iter()
            .map(|p| format!("k={} acc1={:.4}", p.k, p.mean_acc1))
            .collect::<Vec<_>>()
            .join(" ");
        lines.push(format!("{s}: {summary}"));
    }
    for m in &r.matrices {
        out.add(
            format!("{name}_mse_k{}_{}.csv", m.k, m.strategy),
            matrix_csv(&labels, m),
        );
    }
    out.add_json(
        format!("{name}.json"),
        &json!({
            "params": params,
            "curves": r.curves.iter().map(|(s, p)| json!({"strategy": s.to_string(), "points": p})).collect::<Vec<_>>(),
            "matrices": r.matrices.iter().map(|m| json!({"strategy": m.strategy.to_string(), "k": m.k, "qubits": m.qubits})).collect::<Vec<_>>(),
        }),
    );
    Ok((name, out, lines))
}
