//! Command-line front end.
//!
//! Every subcommand writes a CSV (to `--output`, or stdout when omitted).
//! A file output gets a run manifest next to it, at `<output>.manifest.json`.
//! The manifest records the exact argument vector, so `spinj replay` on it
//! produces the same CSV again, byte for byte.
//!
//! Errors are printed with a category prefix and mapped to exit codes:
//! `USAGE` → 1, `CAPACITY` → 2, `NUMERIC` → 3.

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::asymptotics::approx_distribution;
use crate::composition::{classical_sum, product_projection_distribution, total_j2_expectation, ProductState};
use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::orbital::{sph_harm_sq, uniform_cos_grid, MAX_L};
use crate::rotations::{rotate_state, wigner_d, EulerAngles};
use crate::sg_dynamics::{run_config, RunConfig};
use crate::spin_core::{coherent_state, measurement_distribution, random_state, Direction, SpinState};
use crate::stellar::{inverse_stereographic, state_to_stars_with, Star, StellarConvention};

/// Parses an angle: decimal radians, or a rational multiple of π such as
/// `pi`, `-pi/4`, `3pi/4`, `3*pi/4`, `0.5pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    let bad = || SpinError::Usage(format!("malformed angle {s:?}: expected radians or a multiple of pi like 3pi/4"));
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    };
    let (head, tail) = (&t[..pos], &t[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let den = match tail {
        "" => 1.0,
        d => d.strip_prefix('/').and_then(|d| d.parse::<f64>().ok()).filter(|d| *d != 0.0).ok_or_else(bad)?,
    };
    let v = coef * PI / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parses a direction `θ,φ`; `x`, `y`, `z`, `-x`, `-y`, `-z` are accepted as shorthands.
pub fn parse_direction(s: &str) -> Result<Direction> {
    match s.trim() {
        "z" | "+z" => return Ok(Direction::Z),
        "-z" => return Ok(Direction::MINUS_Z),
        "x" | "+x" => return Ok(Direction::X),
        "-x" => return Ok(Direction::new(PI / 2.0, PI)),
        "y" | "+y" => return Ok(Direction::Y),
        "-y" => return Ok(Direction::new(PI / 2.0, -PI / 2.0)),
        _ => {}
    }
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| SpinError::Usage(format!("malformed direction {s:?}: expected theta,phi")))?;
    Ok(Direction::new(parse_angle(a)?, parse_angle(b)?))
}

fn parse_euler(s: &str) -> Result<EulerAngles> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(SpinError::Usage(format!("malformed Euler angles {s:?}: expected gamma,theta,phi")));
    }
    Ok(EulerAngles::new(parse_angle(parts[0])?, parse_angle(parts[1])?, parse_angle(parts[2])?))
}

fn angle_arg(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn direction_arg(s: &str) -> std::result::Result<Direction, String> {
    parse_direction(s).map_err(|e| e.to_string())
}

fn euler_arg(s: &str) -> std::result::Result<EulerAngles, String> {
    parse_euler(s).map_err(|e| e.to_string())
}

fn halfint_arg(s: &str) -> std::result::Result<HalfInt, String> {
    s.parse::<HalfInt>().map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "spinj", version, about = "Spin-j states from small j to the classical limit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jz distribution of a coherent state along a measurement axis.
    CoherentDist(CoherentDistArgs),
    /// Stellar representation of a state.
    Stars(StarsArgs),
    /// Rotation of a state, or the rotation matrix itself.
    Rotate(RotateArgs),
    /// Two coherent states composed into a product state.
    Compose(ComposeArgs),
    /// Angular intensity |Y_lm|² on a uniform cos θ grid.
    Orbital(OrbitalArgs),
    /// Haar-random states: distributions or dispersion table.
    Random(RandomArgs),
    /// Stern–Gerlach run from a TOML configuration.
    SgSim(SgSimArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct OutputArg {
    /// CSV destination; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoherentDistArgs {
    #[arg(long, value_parser = halfint_arg)]
    pub j: HalfInt,
    /// Polar angle of the state; repeat for several columns.
    #[arg(long, value_parser = angle_arg, required = true)]
    pub theta: Vec<f64>,
    #[arg(long, value_parser = angle_arg, default_value = "0")]
    pub phi: f64,
    /// Measurement axis as theta,phi.
    #[arg(long, value_parser = direction_arg, default_value = "z")]
    pub axis: Direction,
    /// Use the large-j saddle-point form instead of exact amplitudes.
    #[arg(long)]
    pub approx: bool,
    /// Grid points for --approx (default 2j+1, one per m).
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Coherent,
    Random,
    Basis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Doubled,
    Majorana,
}

impl From<ConventionArg> for StellarConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Doubled => StellarConvention::Doubled,
            ConventionArg::Majorana => StellarConvention::Majorana,
        }
    }
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, value_parser = halfint_arg)]
    pub j: HalfInt,
    #[arg(long, value_enum, default_value = "coherent")]
    pub state: StateKind,
    #[arg(long, value_parser = angle_arg, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, value_parser = angle_arg, default_value = "0")]
    pub phi: f64,
    /// Seed for --state random.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Basis index k (m = −j + k) for --state basis.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
}

impl StateArgs {
    fn build(&self) -> Result<SpinState> {
        match self.state {
            StateKind::Coherent => Ok(coherent_state(self.j, Direction::new(self.theta, self.phi))),
            StateKind::Random => Ok(random_state(self.j, self.seed)),
            StateKind::Basis => SpinState::basis(self.j, self.k),
        }
    }

    fn seed(&self) -> Option<u64> {
        (self.state == StateKind::Random).then_some(self.seed)
    }
}

#[derive(Debug, Args)]
pub struct StarsArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value = "doubled")]
    pub convention: ConventionArg,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Debug, Args)]
pub struct RotateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Euler angles gamma,theta,phi of D = U_z(γ) U_y(θ) U_z(φ).
    #[arg(long, value_parser = euler_arg)]
    pub euler: Option<EulerAngles>,
    /// Rotate so that this direction is carried to +z (overrides --euler).
    #[arg(long, value_parser = direction_arg)]
    pub align: Option<Direction>,
    /// Emit the rotation matrix instead of the rotated state.
    #[arg(long)]
    pub matrix: bool,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[arg(long, value_parser = halfint_arg)]
    pub j1: HalfInt,
    #[arg(long, value_parser = direction_arg)]
    pub n1: Direction,
    #[arg(long, value_parser = halfint_arg)]
    pub j2: HalfInt,
    #[arg(long, value_parser = direction_arg)]
    pub n2: Direction,
    #[arg(long, value_parser = direction_arg, default_value = "z")]
    pub axis: Direction,
    /// Emit the full (m, p) distribution instead of the summary row.
    #[arg(long)]
    pub distribution: bool,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Debug, Args)]
pub struct OrbitalArgs {
    #[arg(long)]
    pub l: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long, value_parser = halfint_arg)]
    pub j: HalfInt,
    /// One or more seeds (repeat or comma-separate).
    #[arg(long = "seed", value_delimiter = ',', required = true)]
    pub seeds: Vec<u64>,
    #[arg(long, value_parser = direction_arg, default_value = "z")]
    pub axis: Direction,
    /// Emit a (seed, mean, std, std/j) table instead of distributions.
    #[arg(long)]
    pub emit_dispersion: bool,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Debug, Args)]
pub struct SgSimArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Provenance written next to each output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the subcommand, exactly as given.
    pub args: Vec<String>,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn path_for(output: &Path) -> PathBuf {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| SpinError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| SpinError::Config(format!("bad manifest {}: {e}", path.display())))
    }
}

/// Exit code for an error category.
pub fn exit_code(e: &SpinError) -> i32 {
    match e {
        SpinError::Usage(_) | SpinError::Domain(_) | SpinError::Config(_) => 1,
        SpinError::Capacity { .. } => 2,
        SpinError::Numeric(_) => 3,
    }
}

/// `USAGE: …`, `CAPACITY: …` or `NUMERIC: …`.
pub fn error_line(e: &SpinError) -> String {
    let tag = match exit_code(e) {
        1 => "USAGE",
        2 => "CAPACITY",
        _ => "NUMERIC",
    };
    format!("{tag}: {e}")
}

/// Parses `argv` (program name first) and runs it; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    match run_argv(&argv) {
        Ok(()) => 0,
        Err(Failure::Clap(e)) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
        Err(Failure::Spin(e)) => {
            eprintln!("{}", error_line(&e));
            exit_code(&e)
        }
    }
}

enum Failure {
    Clap(clap::Error),
    Spin(SpinError),
}

impl From<SpinError> for Failure {
    fn from(e: SpinError) -> Self {
        Failure::Spin(e)
    }
}

fn run_argv(argv: &[String]) -> std::result::Result<(), Failure> {
    let cli = Cli::try_parse_from(argv).map_err(Failure::Clap)?;
    if let Command::Replay(r) = &cli.command {
        let m = RunManifest::load(&r.manifest)?;
        let mut again = vec![argv.first().cloned().unwrap_or_else(|| "spinj".into()), m.command.clone()];
        again.extend(m.args.iter().cloned());
        if matches!(Cli::try_parse_from(&again), Ok(Cli { command: Command::Replay(_) })) {
            return Err(SpinError::Usage("a manifest cannot record a replay".into()).into());
        }
        return run_argv(&again);
    }
    let name = argv.get(1).cloned().unwrap_or_default();
    let rest = argv.get(2..).map(<[String]>::to_vec).unwrap_or_default();
    let started = Instant::now();
    let out = execute(&cli.command)?;
    let target = output_of(&cli.command);
    write_output(target, &out.csv)?;
    if let Some(path) = target {
        let manifest = RunManifest {
            command: name,
            args: rest,
            parameters: out.parameters,
            seed: out.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: vec![path.to_path_buf()],
            wall_clock_seconds: started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| SpinError::numeric(format!("manifest: {e}")))?;
        let mpath = RunManifest::path_for(path);
        fs::write(&mpath, text + "\n").map_err(|e| SpinError::Usage(format!("cannot write {}: {e}", mpath.display())))?;
    }
    if let Some(note) = out.note {
        eprintln!("{note}");
    }
    Ok(())
}

fn output_of(c: &Command) -> Option<&Path> {
    match c {
        Command::CoherentDist(a) => a.out.output.as_deref(),
        Command::Stars(a) => a.out.output.as_deref(),
        Command::Rotate(a) => a.out.output.as_deref(),
        Command::Compose(a) => a.out.output.as_deref(),
        Command::Orbital(a) => a.out.output.as_deref(),
        Command::Random(a) => a.out.output.as_deref(),
        Command::SgSim(a) => a.out.output.as_deref(),
        Command::Replay(_) => None,
    }
}

fn write_output(path: Option<&Path>, csv: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, csv).map_err(|e| SpinError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout().write_all(csv).map_err(|e| SpinError::Usage(format!("stdout: {e}"))),
    }
}

/// Result of one subcommand, before it is written anywhere.
pub struct CommandOutput {
    pub csv: Vec<u8>,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    /// Extra human-readable line for stderr.
    pub note: Option<String>,
}

fn sci(v: f64) -> String {
    format!("{v:.11e}")
}

fn table(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let io = |e: csv::Error| SpinError::numeric(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| SpinError::numeric(format!("csv: {e}")))
}

fn head(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

fn dir_json(n: &Direction) -> serde_json::Value {
    serde_json::json!([n.theta(), n.phi()])
}

/// Runs a parsed subcommand and returns its CSV without touching the filesystem
/// (except for reading `sg-sim` configurations).
pub fn execute(c: &Command) -> Result<CommandOutput> {
    match c {
        Command::CoherentDist(a) => cmd_coherent_dist(a),
        Command::Stars(a) => cmd_stars(a),
        Command::Rotate(a) => cmd_rotate(a),
        Command::Compose(a) => cmd_compose(a),
        Command::Orbital(a) => cmd_orbital(a),
        Command::Random(a) => cmd_random(a),
        Command::SgSim(a) => cmd_sg_sim(a),
        Command::Replay(_) => Err(SpinError::Usage("replay is handled by the dispatcher".into())),
    }
}

/// Columns `m, p` for one θ; `m, p_1, …` for several, in the order given.
pub fn cmd_coherent_dist(a: &CoherentDistArgs) -> Result<CommandOutput> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(a.theta.len());
    let mut m: Vec<f64> = Vec::new();
    for &theta in &a.theta {
        let n = Direction::new(theta, a.phi);
        let (ms, ps) = if a.approx {
            let size = a.grid.unwrap_or(a.j.dim());
            let prof = approx_distribution(a.j, n.angle_to(&a.axis), size)?;
            // Nominal grid positions; the profile itself is evaluated at interior points.
            let (j, last) = (a.j.value(), (size.max(2) - 1) as f64);
            let ms = if size == 1 { vec![0.0] } else { (0..size).map(|k| j * (2.0 * k as f64 / last - 1.0)).collect() };
            (ms, prof.probs)
        } else {
            let d = measurement_distribution(&coherent_state(a.j, n), a.axis)?;
            ((0..d.probs.len()).map(|k| d.m(k)).collect(), d.probs)
        };
        m = ms;
        cols.push(ps);
    }
    let mut header = head(&["m"]);
    if cols.len() == 1 {
        header.push("p".into());
    } else {
        header.extend((1..=cols.len()).map(|i| format!("p_{i}")));
    }
    let rows = (0..m.len()).map(|k| {
        let mut r = vec![format!("{}", m[k])];
        r.extend(cols.iter().map(|c| sci(c[k])));
        r
    });
    Ok(CommandOutput {
        csv: table(&header, rows)?,
        parameters: serde_json::json!({
            "j": a.j.to_string(), "theta": a.theta, "phi": a.phi, "axis": dir_json(&a.axis),
            "approx": a.approx, "grid": a.grid,
        }),
        seed: None,
        note: None,
    })
}

/// One row per star: `index, re, im, x, y, z, theta, phi`; `re`/`im` are `inf` for the star at ∞.
pub fn cmd_stars(a: &StarsArgs) -> Result<CommandOutput> {
    let s = a.state.build()?;
    let cfg = state_to_stars_with(&s, a.convention.into())?;
    let rows = cfg.stars().iter().enumerate().map(|(i, st)| {
        let p = st.sphere_point();
        let d = inverse_stereographic(*st);
        let (re, im) = match st {
            Star::Finite(w) => (sci(w.re), sci(w.im)),
            Star::Infinity => ("inf".to_string(), "inf".to_string()),
        };
        vec![i.to_string(), re, im, sci(p[0]), sci(p[1]), sci(p[2]), sci(d.theta()), sci(d.phi())]
    });
    Ok(CommandOutput {
        csv: table(&head(&["index", "re", "im", "x", "y", "z", "theta", "phi"]), rows)?,
        parameters: state_json(&a.state, serde_json::json!({ "convention": format!("{:?}", a.convention).to_lowercase() })),
        seed: a.state.seed(),
        note: None,
    })
}

fn state_json(s: &StateArgs, mut extra: serde_json::Value) -> serde_json::Value {
    let base = serde_json::json!({
        "j": s.j.to_string(), "state": format!("{:?}", s.state).to_lowercase(),
        "theta": s.theta, "phi": s.phi, "seed": s.seed, "k": s.k,
    });
    if let (Some(e), serde_json::Value::Object(b)) = (extra.as_object_mut(), base) {
        e.extend(b);
    }
    extra
}

/// Rotated state as `m, re, im, p`, or with `--matrix` the elements `m, m_prime, re, im`.
pub fn cmd_rotate(a: &RotateArgs) -> Result<CommandOutput> {
    let omega = match (a.align, a.euler) {
        (Some(n), _) => EulerAngles::aligning(n),
        (None, Some(e)) => e,
        (None, None) => return Err(SpinError::Usage("rotate needs --euler or --align".into())),
    };
    let j = a.state.j;
    let csv = if a.matrix {
        let d = wigner_d(j, &omega)?;
        let dim = j.dim();
        let rows = (0..dim).flat_map(|r| (0..dim).map(move |c| (r, c))).map(|(r, c)| {
            let v = d.get(r, c);
            vec![format!("{}", j.m_of_index(r)), format!("{}", j.m_of_index(c)), sci(v.re), sci(v.im)]
        });
        table(&head(&["m", "m_prime", "re", "im"]), rows)?
    } else {
        let s = rotate_state(&a.state.build()?, &omega)?;
        if s.dim() > 1 << 20 {
            return Err(SpinError::Capacity { what: "rotated-state output rows", limit: 1 << 20, requested: s.dim() });
        }
        let amps = s.amplitudes();
        let rows = amps.iter().enumerate().map(|(k, c)| vec![format!("{}", j.m_of_index(k)), sci(c.re), sci(c.im), sci(c.norm_sqr())]);
        table(&head(&["m", "re", "im", "p"]), rows)?
    };
    Ok(CommandOutput {
        csv,
        parameters: state_json(
            &a.state,
            serde_json::json!({ "euler": [omega.gamma, omega.theta, omega.phi], "matrix": a.matrix }),
        ),
        seed: a.state.seed(),
        note: None,
    })
}

/// Summary row `mean, classical_mean, variance, j2, j_tot, j_tot_sq` or, with
/// `--distribution`, the product-state `m, p`.
pub fn cmd_compose(a: &ComposeArgs) -> Result<CommandOutput> {
    let p = ProductState::new(coherent_state(a.j1, a.n1), coherent_state(a.j2, a.n2));
    let dist = product_projection_distribution(&p, a.axis)?;
    let sum = classical_sum(a.j1, a.n1, a.j2, a.n2);
    let v = a.j1.value() * a.n1.vector() + a.j2.value() * a.n2.vector();
    let classical_mean = v.dot(&a.axis.vector());
    let j2 = total_j2_expectation(&p);
    let csv = if a.distribution {
        let rows = (0..dist.probs.len()).map(|k| vec![format!("{}", dist.m(k)), sci(dist.probs[k])]);
        table(&head(&["m", "p"]), rows)?
    } else {
        let row = vec![
            sci(dist.mean()),
            sci(classical_mean),
            sci(dist.variance()),
            sci(j2),
            sci(sum.j_tot),
            sci(sum.j_tot * (sum.j_tot + 1.0)),
        ];
        table(&head(&["mean", "classical_mean", "variance", "j2", "j_tot", "j_tot_sq"]), [row])?
    };
    Ok(CommandOutput {
        csv,
        parameters: serde_json::json!({
            "j1": a.j1.to_string(), "n1": dir_json(&a.n1), "j2": a.j2.to_string(), "n2": dir_json(&a.n2),
            "axis": dir_json(&a.axis), "distribution": a.distribution,
        }),
        seed: None,
        note: None,
    })
}

/// Columns `cos_theta, intensity` with intensity `|Y_lm|²`.
pub fn cmd_orbital(a: &OrbitalArgs) -> Result<CommandOutput> {
    if a.l > MAX_L {
        return Err(SpinError::Capacity { what: "orbital l", limit: MAX_L as usize, requested: a.l as usize });
    }
    if a.points < 2 {
        return Err(SpinError::Usage("--points must be at least 2".into()));
    }
    let prof = sph_harm_sq(a.l, a.m, &uniform_cos_grid(a.points))?;
    let rows = prof.cos_theta.iter().zip(&prof.intensity).map(|(x, i)| vec![sci(*x), sci(*i)]);
    Ok(CommandOutput {
        csv: table(&head(&["cos_theta", "intensity"]), rows)?,
        parameters: serde_json::json!({ "l": a.l, "m": a.m, "points": a.points }),
        seed: None,
        note: None,
    })
}

/// Columns `m, p_<seed>…`, or with `--emit-dispersion` rows `seed, mean, std, std_over_j`.
pub fn cmd_random(a: &RandomArgs) -> Result<CommandOutput> {
    let j = a.j.value();
    let dists = a
        .seeds
        .iter()
        .map(|&s| measurement_distribution(&random_state(a.j, s), a.axis))
        .collect::<Result<Vec<_>>>()?;
    let (csv, note) = if a.emit_dispersion {
        let rows = a.seeds.iter().zip(&dists).map(|(s, d)| vec![s.to_string(), sci(d.mean()), sci(d.std_dev()), sci(d.std_dev() / j)]);
        let avg = dists.iter().map(|d| d.std_dev() / j).sum::<f64>() / dists.len() as f64;
        (table(&head(&["seed", "mean", "std", "std_over_j"]), rows)?, Some(format!("mean ΔJ/j = {avg:.6}")))
    } else {
        let mut header = head(&["m"]);
        header.extend(a.seeds.iter().map(|s| format!("p_{s}")));
        let rows = (0..a.j.dim()).map(|k| {
            let mut r = vec![format!("{}", a.j.m_of_index(k))];
            r.extend(dists.iter().map(|d| sci(d.probs[k])));
            r
        });
        (table(&header, rows)?, None)
    };
    Ok(CommandOutput {
        csv,
        parameters: serde_json::json!({
            "j": a.j.to_string(), "seeds": a.seeds, "axis": dir_json(&a.axis), "emit_dispersion": a.emit_dispersion,
        }),
        seed: a.seeds.first().copied(),
        note,
    })
}

/// Delegates to the run-configuration document; the summary goes to the manifest.
pub fn cmd_sg_sim(a: &SgSimArgs) -> Result<CommandOutput> {
    let text = fs::read_to_string(&a.config).map_err(|e| SpinError::Usage(format!("cannot read {}: {e}", a.config.display())))?;
    let cfg = RunConfig::from_toml_str(&text)?;
    let out = run_config(&cfg)?;
    let mut csv = Vec::new();
    out.write_csv(&mut csv)?;
    let summary = out.summary();
    Ok(CommandOutput {
        csv,
        note: Some(summary.to_string()),
        parameters: serde_json::json!({
            "config": a.config, "run": serde_json::to_value(&cfg).unwrap_or_default(), "summary": summary,
        }),
        seed: cfg.profile.as_ref().map(|p| p.seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> String {
        let cli = Cli::try_parse_from(std::iter::once("spinj").chain(args.iter().copied())).unwrap();
        String::from_utf8(execute(&cli.command).unwrap().csv).unwrap()
    }

    #[test]
    fn angles() {
        let close = |s: &str, v: f64| assert!((parse_angle(s).unwrap() - v).abs() < 1e-15, "{s}");
        close("pi/2", PI / 2.0);
        close("3pi/4", 0.75 * PI);
        close("3*pi/4", 0.75 * PI);
        close("-pi", -PI);
        close("PI", PI);
        close("0.25", 0.25);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("half").is_err());
        assert!(parse_angle("pi/x").is_err());
    }

    #[test]
    fn directions() {
        let d = parse_direction("pi/2,pi").unwrap();
        assert!((d.vector().x + 1.0).abs() < 1e-15);
        assert!(parse_direction("-z").unwrap().is_south_pole());
        assert!(parse_direction("1.0").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&SpinError::Usage("x".into())), 1);
        assert_eq!(exit_code(&SpinError::Domain("x".into())), 1);
        assert_eq!(exit_code(&SpinError::Capacity { what: "x", limit: 1, requested: 2 }), 2);
        assert_eq!(exit_code(&SpinError::Numeric("x".into())), 3);
        assert!(error_line(&SpinError::Numeric("x".into())).starts_with("NUMERIC: "));
    }

    #[test]
    fn coherent_dist_equator_is_binomial() {
        let csv = run(&["coherent-dist", "--j", "13/2", "--theta", "pi/2"]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "m,p");
        assert_eq!(lines.len(), 15);
        // Peak binom(13,6)/2^13 at m = -1/2.
        assert_eq!(lines[7], format!("-0.5,{:.11e}", 1716.0 / 8192.0));
        assert_eq!(lines[1].split(',').nth(1), lines[14].split(',').nth(1));
    }

    #[test]
    fn two_thetas_make_two_columns() {
        let csv = run(&["coherent-dist", "--j", "2", "--theta", "pi/2", "--theta", "pi/4"]);
        assert_eq!(csv.lines().next().unwrap(), "m,p_1,p_2");
    }

    #[test]
    fn coincident_stars_share_coordinates() {
        let csv = run(&["stars", "--j", "3", "--state", "coherent", "--theta", "pi/3"]);
        let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 6);
        for r in &rows {
            for c in 3..6 {
                let (a, b): (f64, f64) = (r[c].parse().unwrap(), rows[0][c].parse().unwrap());
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn compose_mean_matches_vector_sum() {
        let csv = run(&["compose", "--j1", "1000", "--n1", "0,0", "--j2", "1000", "--n2", "pi/2,0", "--axis", "pi/4,0"]);
        let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        let expect = 1000.0 * (PI / 4.0).cos() + 1000.0 * (PI / 4.0).sin();
        assert!((row[0] - expect).abs() < 1e-8 * expect);
        assert!((row[1] - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn rotate_needs_angles() {
        let cli = Cli::try_parse_from(["spinj", "rotate", "--j", "1"]).unwrap();
        assert!(matches!(execute(&cli.command), Err(SpinError::Usage(_))));
    }

    #[test]
    fn bad_halfint_is_usage() {
        assert_eq!(main_with_args(["spinj", "coherent-dist", "--j", "13/3", "--theta", "0"]), 1);
    }
}
