use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use incident_core::curves::{
    bound_audit, curve_equation, curve_oracle_check, maximize_bound, roncisvalle_check, singularity_report, PsiFrame,
};
use incident_core::epw::{build_a_plus, epw_equation, epw_multiplicity};
use incident_core::io::{curve_json, epw_json, LagrangianFile, PlaneFamilyFile};
use incident_core::lagrangian::{completeness_certificate, isotropic_span, lagrangian_complete, theta_enumerate_modp};
use incident_core::planes::{
    enumerate_incident_lines_modp, enumerate_incident_planes_modp, fano_family, fano_restricted, family_report,
    i_plus_plane, random_incident_family, GeneratorMode,
};
use incident_core::{Error, PrimeField, Rational, Subspace};

#[derive(Parser, Debug)]
#[command(name = "incident", version, about = "Verification runs for families of pairwise incident planes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Prime for modular checks (repeatable).
    #[arg(long = "prime", global = true)]
    primes: Vec<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock time in the manifest (output is then no longer reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The Fano configuration (ambient 7), or its first `count` planes cut to ambient 6.
    Fano {
        #[arg(long, default_value_t = 7)]
        ambient: usize,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Incidence report of a plane family.
    Report { input: String },
    /// Lines of P^5 meeting every plane of a family, over each prime.
    Lines { input: String },
    /// Completeness certificate of a plane family.
    Complete { input: String },
    /// Planes of Θ_A over each prime.
    Theta { input: String },
    /// EPW sextic of a Lagrangian.
    Epw { input: String },
    /// dim(A ∩ F_v) and the multiplicity of Y_A at v.
    Mult {
        input: String,
        /// Comma-separated coordinates of v.
        #[arg(long)]
        point: String,
    },
    /// The Lagrangian A₊(U) with its i₊-planes.
    Aplus,
    /// The curve C_{W,A} for a listed member W and its singularity report.
    Curve {
        #[arg(long)]
        lagrangian: String,
        #[arg(long)]
        member: usize,
        /// Number of components of the curve, as known to the caller.
        #[arg(long, default_value_t = 1)]
        components: usize,
    },
    /// Compare the common zeros of ψ with the projected Grassmannian over small primes.
    PsiCheck,
    /// Upper bound on #Θ_A from the singularity tallies.
    Audit {
        #[arg(long, default_value_t = 0)]
        l1: usize,
        #[arg(long, default_value_t = 0)]
        l2: usize,
        #[arg(long, default_value_t = 0)]
        l3: usize,
        #[arg(long, default_value_t = 0)]
        l4: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Report the largest bound over all feasible inputs instead.
        #[arg(long)]
        maximize: bool,
    },
    /// A seeded pairwise incident family, or with --lagrangian a Lagrangian containing it.
    Gen {
        #[arg(long, default_value = "common-point")]
        mode: String,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long)]
        lagrangian: bool,
    },
}

#[derive(Serialize)]
struct RunManifest {
    command: Vec<String>,
    input_digests: BTreeMap<String, String>,
    seed: u64,
    primes: Vec<u32>,
    versions: BTreeMap<&'static str, &'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_ms: Option<u128>,
}

struct Run {
    manifest: RunManifest,
    started: Instant,
}

impl Run {
    fn read(&mut self, name: &str) -> Result<Value, Error> {
        let mut bytes = Vec::new();
        if name == "-" {
            std::io::stdin().read_to_end(&mut bytes)?;
        } else {
            bytes = std::fs::read(name)?;
        }
        self.manifest
            .input_digests
            .insert(name.to_string(), hex::encode(Sha256::digest(&bytes)));
        let v: Value = serde_json::from_slice(&bytes).map_err(|e| Error::Format(e.to_string()))?;
        // accept the output envelope of another subcommand
        Ok(match v {
            Value::Object(mut m) if m.contains_key("manifest") && m.contains_key("result") => m.remove("result").unwrap(),
            v => v,
        })
    }

    fn family(&mut self, name: &str) -> Result<incident_core::PlaneFamily, Error> {
        let f: PlaneFamilyFile = serde_json::from_value(self.read(name)?).map_err(|e| Error::Format(e.to_string()))?;
        f.to_family()
    }

    fn lagrangian(&mut self, name: &str) -> Result<LagrangianFile, Error> {
        serde_json::from_value(self.read(name)?).map_err(|e| Error::Format(e.to_string()))
    }

    fn primes(&self, default: &[u32]) -> Vec<u32> {
        if self.manifest.primes.is_empty() {
            default.to_vec()
        } else {
            self.manifest.primes.clone()
        }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn lift_rows(w: &Subspace<PrimeField>) -> Vec<Vec<String>> {
    let fp = *w.field();
    w.basis_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| fp.lift(x).to_string()).collect())
        .collect()
}

fn parse_point(s: &str) -> Result<Vec<Rational>, Error> {
    let v: Vec<Rational> = s
        .split(',')
        .map(|t| t.trim().parse::<Rational>())
        .collect::<Result<_, _>>()?;
    if v.len() != 6 {
        return Err(Error::Usage(format!("--point needs 6 coordinates, got {}", v.len())));
    }
    Ok(v)
}

fn parse_mode(s: &str) -> Result<GeneratorMode, Error> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|_| {
        Error::Usage(format!(
            "unknown mode {s:?}; expected common-point, line-in-plane, hyperplane, quadric-ruling or greedy"
        ))
    })
}

fn execute(run: &mut Run, command: &Command) -> Result<Value, Error> {
    let seed = run.manifest.seed;
    Ok(match command {
        Command::Fano { ambient, count } => {
            let t = match (ambient, count) {
                (7, None) => fano_family(),
                (6, Some(k)) if (1..=7).contains(k) => fano_restricted(*k),
                (6, None) => fano_restricted(4),
                _ => return Err(Error::Usage("use --ambient 7, or --ambient 6 with --count 1..=7".into())),
            };
            to_value(&PlaneFamilyFile::from_family(&t))
        }
        Command::Report { input } => to_value(&family_report(&run.family(input)?)),
        Command::Lines { input } => {
            let t = run.family(input)?;
            let mut out = Vec::new();
            for p in run.primes(&[2, 3, 5]) {
                let scan = enumerate_incident_lines_modp(&t, p)?;
                let mut lines: Vec<_> = scan.matches.iter().map(lift_rows).collect();
                lines.sort();
                out.push(json!({"prime": p, "visited": scan.visited, "count": lines.len(), "lines": lines}));
            }
            Value::Array(out)
        }
        Command::Complete { input } => {
            let t = run.family(input)?;
            let default: &[u32] = if t.ambient() == 7 { &[2] } else { &[2, 3] };
            let primes = run.primes(default);
            let cert = completeness_certificate(&t, &primes, seed)?;
            let mut v = to_value(&cert);
            if t.ambient() == 7 {
                let mut scans = Vec::new();
                for p in primes {
                    let s = enumerate_incident_planes_modp(&t, p)?;
                    scans.push(json!({"prime": p, "visited": s.visited, "incident_planes": s.matches.len()}));
                }
                v["plane_scans"] = Value::Array(scans);
            }
            v
        }
        Command::Theta { input } => {
            let a = run.lagrangian(input)?.to_lagrangian()?;
            let mut out = Vec::new();
            for p in run.primes(&[2, 3]) {
                let th = theta_enumerate_modp(&a, p)?;
                let mut planes: Vec<_> = th.members.iter().map(lift_rows).collect();
                planes.sort();
                out.push(json!({"prime": p, "visited": th.visited, "count": planes.len(), "planes": planes}));
            }
            Value::Array(out)
        }
        Command::Epw { input } => {
            let a = run.lagrangian(input)?.to_lagrangian()?;
            epw_json(&epw_equation(&a)?)
        }
        Command::Mult { input, point } => {
            let v = parse_point(point)?;
            let a = run.lagrangian(input)?.to_lagrangian()?;
            let eq = epw_equation(&a)?;
            to_value(&epw_multiplicity(&a, &eq, &v)?)
        }
        Command::Aplus => {
            let a = build_a_plus()?;
            let members: Vec<_> = incident_core::epw::a_plus_points().iter().map(i_plus_plane).collect();
            to_value(&LagrangianFile::from_lagrangian(&a, &members))
        }
        Command::Curve {
            lagrangian,
            member,
            components,
        } => {
            let file = run.lagrangian(lagrangian)?;
            let a = file.to_lagrangian()?;
            let members = file.member_spaces()?;
            let w = members
                .get(*member)
                .ok_or_else(|| Error::Usage(format!("--member {member}: the file lists {} members", members.len())))?;
            let eq = curve_equation(&a, w)?;
            let mut v = json!({"curve": curve_json(&eq)});
            if !eq.is_plane() {
                v["singularities"] = to_value(&singularity_report(&eq, w, &members, *components)?);
                let mut checks = Vec::new();
                for p in run.primes(&[2, 3]) {
                    checks.push(to_value(&curve_oracle_check(&a, &eq, p, 200, seed)?));
                }
                v["oracle_checks"] = Value::Array(checks);
            }
            v
        }
        Command::PsiCheck => {
            let frame = PsiFrame::random(seed);
            let mut out = Vec::new();
            for p in run.primes(&[2, 3]) {
                out.push(to_value(&roncisvalle_check(&frame, p)?));
            }
            Value::Array(out)
        }
        Command::Audit {
            l1,
            l2,
            l3,
            l4,
            s,
            maximize,
        } => {
            if *maximize {
                let (bound, at) = maximize_bound(None, None);
                json!({"max_theta": bound, "attained_at": at})
            } else {
                to_value(&bound_audit([*l1, *l2, *l3, *l4], *s)?)
            }
        }
        Command::Gen { mode, count, lagrangian } => {
            let mode = parse_mode(mode)?;
            let t = random_incident_family(seed, *count, mode)?;
            if *lagrangian {
                let a = lagrangian_complete(&isotropic_span(&t)?, seed)?;
                to_value(&LagrangianFile::from_lagrangian(&a, t.members()))
            } else {
                to_value(&PlaneFamilyFile::from_family(&t))
            }
        }
    })
}

fn emit(out: &Option<PathBuf>, v: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn fail(code: &str, message: &str, exit: u8) -> ExitCode {
    let v = json!({"error": {"code": code, "message": message}});
    println!("{}", serde_json::to_string_pretty(&v).unwrap());
    ExitCode::from(exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("USAGE", e.to_string().trim(), 2),
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail("USAGE", &e.to_string(), 2);
        }
    }
    let mut run = Run {
        manifest: RunManifest {
            command: std::env::args().skip(1).collect(),
            input_digests: BTreeMap::new(),
            seed: cli.global.seed,
            primes: cli.global.primes.clone(),
            versions: BTreeMap::from([("incident", env!("CARGO_PKG_VERSION"))]),
            wall_clock_ms: None,
        },
        started: Instant::now(),
    };
    match execute(&mut run, &cli.command) {
        Ok(result) => {
            if cli.global.timing {
                run.manifest.wall_clock_ms = Some(run.started.elapsed().as_millis());
            }
            let v = json!({"manifest": run.manifest, "result": result});
            match emit(&cli.global.out, &v) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail("IO", &e.to_string(), 1),
            }
        }
        Err(e) => {
            let code = serde_json::to_value(e.code()).unwrap();
            let exit = if matches!(e, Error::Usage(_)) { 2 } else { 1 };
            fail(code.as_str().unwrap(), &e.to_string(), exit)
        }
    }
}
