//! Command-line driver: sweeps and verification runs emitting CSV or JSON.
//!
//! Exit codes: `0` success, `1` usage error, `2` verification failure, `3` cap exceeded.

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bcs::{
    bcs_profile, factorization_residual, pair_entanglement, parseval_residual, BcsProfile,
    CorrelatorGrid,
};
use crate::error::{Error, Result};
use crate::measures::{
    block_entropy_paired, block_entropy_paired_asymptotic, block_entropy_unpaired, local_measures,
    odlro,
};
use crate::numerics::Filling;
use crate::persistency::{simulate_trajectories_capped, Strategy};
use crate::qmeasure::{q_curve, q_kspace_over_modes, QReport};
use crate::slotstate::{
    build_eta_state_capped, reduce_with_ordering, Caps, EtaParams, OrbitalOrdering, Picture,
};
use crate::spectra::{block_spectrum_finite, generic_modes, BlockSpec};
use output::{num, Check, Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Largest lattice accepted by `qsweep`.
pub const QSWEEP_MAX_LENGTH: usize = 10_000;
/// `qsweep` appends brute-force oracle columns up to this length.
pub const QSWEEP_ORACLE_LENGTH: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "etapair",
    version,
    about = "Correlation structure of eta-pairing and BCS states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local entropies, mutual informations, negativities and ODLRO over a filling grid.
    Measures(MeasuresArgs),
    /// Block entropies of unpaired and paired momentum modes.
    BlockEntropy(BlockEntropyArgs),
    /// Meyer–Wallach Q over all fillings for a list of block sizes.
    Qsweep(QsweepArgs),
    /// Brute-force oracle against every closed form; exits 2 on any failure.
    Verify(VerifyArgs),
    /// BCS pair negativities, anomalous and normal correlators.
    Bcs(BcsArgs),
    /// Persistency of entanglement: closed forms and Monte-Carlo trajectories.
    Persistency(PersistencyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct CapArgs {
    /// Maximum number of slot configurations the oracle may enumerate.
    #[arg(long, default_value_t = 10_000_000)]
    pub cap_states: u128,
    /// Maximum reduced-density-matrix dimension.
    #[arg(long, default_value_t = 65_536)]
    pub cap_dim: u128,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_states: self.cap_states,
            max_dimension: self.cap_dim,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct MeasuresArgs {
    /// Hole fraction a = 1 − n_d: a list `0.1,0.5` or a range `start..end:step`.
    #[arg(long, default_value = "0.1..0.9:0.1")]
    pub filling: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BlockEntropyArgs {
    /// Hole fraction a = 1 − n_d.
    #[arg(long, default_value_t = 0.5)]
    pub filling: f64,
    /// Unpaired mode counts D1.
    #[arg(long, default_value = "0")]
    pub d1: String,
    /// Paired mode counts D2 (even).
    #[arg(long, default_value = "")]
    pub d2: String,
    /// Add the Gaussian asymptote for the paired part.
    #[arg(long)]
    pub asymptotic: bool,
    /// Lattice length, for an explicit finite block.
    #[arg(short = 'L', long)]
    pub length: Option<usize>,
    /// Pair number, for an explicit finite block.
    #[arg(short = 'n', long)]
    pub pairs: Option<usize>,
    /// Explicit block, `u:k1,k2;p:k3` (momentum) or a site list (direct).
    #[arg(long)]
    pub block: Option<String>,
    #[arg(long, default_value_t = Picture::Momentum)]
    pub picture: Picture,
    #[command(flatten)]
    #[serde(flatten)]
    pub caps: CapArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct QsweepArgs {
    #[arg(short = 'L', long, default_value_t = 1000)]
    pub length: usize,
    /// Block sizes, e.g. `2,4,8,16` (momentum: even only).
    #[arg(short = 'D', long = "sizes", default_value = "2,4,8,16")]
    pub sizes: String,
    /// Shorthand for the sizes `2, 4, …, dmax` (momentum) or `1, …, dmax` (direct).
    #[arg(long)]
    pub dmax: Option<usize>,
    #[arg(long, default_value_t = Picture::Momentum)]
    pub picture: Picture,
    /// Restrict to one pair number.
    #[arg(short = 'n', long)]
    pub pairs: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub caps: CapArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Largest lattice length checked (at most 12).
    #[arg(long, default_value_t = 12)]
    pub lmax: usize,
    /// Largest block size checked.
    #[arg(long, default_value_t = 6)]
    pub dmax: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Overrides every tolerance (test hook).
    #[arg(long, hide = true, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub caps: CapArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BcsArgs {
    #[arg(short = 'L', long, default_value_t = 64)]
    pub length: usize,
    #[arg(long, default_value_t = 1.0)]
    pub hopping: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gap: f64,
    /// CSV profile with columns k_index,u,v (replaces the tight-binding profile).
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Also write the profile used to this CSV file.
    #[arg(long)]
    pub export_profile: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PersistencyArgs {
    #[arg(short = 'L', long, default_value_t = 6)]
    pub length: usize,
    /// Pair number (all of 0..=L when omitted).
    #[arg(short = 'n', long)]
    pub pairs: Option<usize>,
    #[arg(long, default_value_t = Picture::Direct)]
    pub picture: Picture,
    /// `fixed-order` or `random`.
    #[arg(long, default_value = "fixed-order")]
    pub strategy: String,
    #[arg(long, default_value_t = 10_000)]
    pub trajectories: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub caps: CapArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

/// Parses `x`, `x,y,z` or `start..end:step` (inclusive end) into floats.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidParameters(format!("cannot parse `{text}` as a list or range"));
    if let Some((range, step)) = text.split_once(':') {
        let (start, end) = range.split_once("..").ok_or_else(bad)?;
        let start: f64 = start.trim().parse().map_err(|_| bad())?;
        let end: f64 = end.trim().parse().map_err(|_| bad())?;
        let step: f64 = step.trim().parse().map_err(|_| bad())?;
        if step.is_nan() || step <= 0.0 || end < start {
            return Err(bad());
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        // rounding keeps 0.1 + 2·0.1 printing as 0.3
        return Ok((0..count)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect());
    }
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

/// Parses `3`, `1,2,4` or `start..end[:step]` (inclusive end) into integers.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidParameters(format!("cannot parse `{text}` as a list or range"));
    if let Some((start, rest)) = text.split_once("..") {
        let (end, step) = match rest.split_once(':') {
            Some((e, s)) => (e, s.trim().parse::<usize>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let start: usize = start.trim().parse().map_err(|_| bad())?;
        let end: usize = end.trim().parse().map_err(|_| bad())?;
        if step == 0 || end < start {
            return Err(bad());
        }
        return Ok((start..=end).step_by(step).collect());
    }
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
        .collect()
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_cap() {
                EXIT_CAP
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn emit(report: &Report, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write(output.format, &mut w)?;
            w.flush()?;
        }
        None => report.write(output.format, stdout)?,
    }
    Ok(())
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    let (report, output, gate) = match &command {
        Command::Measures(a) => (cmd_measures(a)?, &a.output, false),
        Command::BlockEntropy(a) => (cmd_block_entropy(a)?, &a.output, false),
        Command::Qsweep(a) => (cmd_qsweep(a)?, &a.output, false),
        Command::Verify(a) => (cmd_verify(a)?, &a.output, true),
        Command::Bcs(a) => (cmd_bcs(a)?, &a.output, false),
        Command::Persistency(a) => (cmd_persistency(a)?, &a.output, false),
    };
    emit(&report, output, stdout)?;
    Ok(if gate && !report.all_pass() {
        EXIT_VERIFY
    } else {
        EXIT_OK
    })
}

pub fn cmd_measures(args: &MeasuresArgs) -> Result<Report> {
    let grid = parse_f64_list(&args.filling)?;
    if grid.is_empty() {
        return Err(Error::InvalidParameters("empty filling grid".into()));
    }
    let mut r = Report::new(
        "measures",
        args,
        &[
            "a",
            "S_single[bits]",
            "S_pair[bits]",
            "I_pair[bits]",
            "N_raw[definitional]",
            "N_third[ab/3]",
            "S_fourmode[bits]",
            "I_twopair[bits]",
            "ODLRO",
        ],
    );
    for a in grid {
        let f = Filling::new(a)?;
        let m = local_measures(f);
        r.push(vec![
            num(a),
            num(m.s_single),
            num(m.s_pair),
            num(m.i_pair),
            num(m.n_pair_raw),
            num(m.n_pair_third),
            num(m.s_fourmode),
            num(m.i_twopair),
            num(odlro(f)),
        ]);
    }
    Ok(r)
}

pub fn cmd_block_entropy(args: &BlockEntropyArgs) -> Result<Report> {
    if let Some(text) = &args.block {
        return block_entropy_explicit(args, text);
    }
    let f = Filling::new(args.filling)?;
    let d1s = parse_usize_list(&args.d1)?;
    let mut d2s = parse_usize_list(&args.d2)?;
    if args.asymptotic && d2s.is_empty() {
        return Err(Error::InvalidParameters(
            "--asymptotic needs a nonempty --d2 list".into(),
        ));
    }
    if d1s.is_empty() {
        return Err(Error::InvalidParameters("empty --d1 list".into()));
    }
    if d2s.is_empty() {
        d2s.push(0);
    }
    if let Some(odd) = d2s.iter().find(|&&d| d % 2 == 1) {
        return Err(Error::InvalidParameters(format!(
            "D2 = {odd} is odd; paired modes come in (−k, k) pairs"
        )));
    }
    let mut r = Report::new(
        "block-entropy",
        args,
        &[
            "D1",
            "D2",
            "S_exact[bits]",
            "S_asymptotic[bits]",
            "abs_error[bits]",
        ],
    );
    for &d1 in &d1s {
        for &d2 in &d2s {
            let unpaired = block_entropy_unpaired(f, d1);
            let exact = unpaired + block_entropy_paired(f, d2);
            let asym = if args.asymptotic {
                block_entropy_paired_asymptotic(f, d2)
                    .ok()
                    .map(|s| s + unpaired)
            } else {
                None
            };
            r.push(vec![
                json!(d1),
                json!(d2),
                num(exact),
                asym.map_or(Value::Null, num),
                asym.map_or(Value::Null, |s| num((s - exact).abs())),
            ]);
        }
    }
    Ok(r)
}

fn block_entropy_explicit(args: &BlockEntropyArgs, text: &str) -> Result<Report> {
    let (Some(l), Some(n)) = (args.length, args.pairs) else {
        return Err(Error::InvalidParameters(
            "--block needs --length and --pairs".into(),
        ));
    };
    let params = EtaParams::new(l, n)?;
    let block = BlockSpec::parse(l, args.picture, text)?;
    let closed = block_spectrum_finite(params, &block)?;
    let caps = args.caps.caps();
    let state = build_eta_state_capped(params, &caps)?;
    let rho = reduce_with_ordering(&state, &block, OrbitalOrdering::SlotMajor, &caps)?;
    let (s_closed, s_oracle) = (closed.entropy()?, rho.entropy()?);
    let dev = closed.max_sorted_deviation(&rho.spectrum());
    let mut r = Report::new(
        "block-entropy",
        args,
        &[
            "block",
            "D1",
            "D2",
            "S_finite[bits]",
            "S_oracle[bits]",
            "max_eigenvalue_deviation",
        ],
    );
    r.push(vec![
        json!(text),
        json!(block.d1()),
        json!(block.d2()),
        num(s_closed),
        num(s_oracle),
        num(dev),
    ]);
    r.checks
        .push(Check::within("spectrum_oracle_agreement", dev, 1e-12, ""));
    Ok(r)
}

fn qsweep_sizes(args: &QsweepArgs) -> Result<Vec<usize>> {
    let sizes = match args.dmax {
        Some(m) => match args.picture {
            Picture::Momentum => (2..=m).step_by(2).collect(),
            Picture::Direct => (1..=m).collect(),
        },
        None => parse_usize_list(&args.sizes)?,
    };
    if sizes.is_empty() {
        return Err(Error::InvalidParameters("empty list of block sizes".into()));
    }
    if args.picture == Picture::Momentum {
        if let Some(&odd) = sizes.iter().find(|&&d| d % 2 == 1) {
            return Err(Error::OddBlockSize(odd));
        }
    }
    Ok(sizes)
}

pub fn cmd_qsweep(args: &QsweepArgs) -> Result<Report> {
    let l = args.length;
    if l == 0 || l > QSWEEP_MAX_LENGTH {
        return Err(Error::InvalidParameters(format!(
            "L = {l} outside 1..={QSWEEP_MAX_LENGTH}"
        )));
    }
    let sizes = qsweep_sizes(args)?;
    let with_oracle = args.picture == Picture::Momentum && l <= QSWEEP_ORACLE_LENGTH;
    let mut columns = vec!["n_d", "N_d", "D", "Q"];
    if with_oracle {
        columns.extend(["Q_generic_modes", "Q_oracle_generic_modes"]);
    }
    let mut r = Report::new("qsweep", args, &columns);
    let caps = args.caps.caps();

    let mut curves: Vec<Vec<QReport>> = Vec::new();
    for &d in &sizes {
        let curve = match args.pairs {
            Some(n) => vec![crate::qmeasure::q_measure(
                EtaParams::new(l, n)?,
                d,
                args.picture,
            )?],
            None => q_curve(l, d, args.picture)?,
        };
        for q in &curve {
            let mut row = vec![
                num(q.pairs as f64 / l as f64),
                json!(q.pairs),
                json!(d),
                num(q.q),
            ];
            if with_oracle {
                let params = EtaParams::new(l, q.pairs)?;
                let modes = generic_modes(l).len();
                if d <= modes {
                    let generic = q_kspace_over_modes(params, d, modes)?;
                    let state = build_eta_state_capped(params, &caps)?;
                    let purity = verify::oracle_mean_purity_generic(&state, d, &caps)?;
                    let norm = 1.0 / (1.0 - 4f64.powi(-(d as i32)));
                    let oracle = norm * (1.0 - purity);
                    row.push(num(generic.q));
                    row.push(num(oracle.clamp(0.0, 1.0)));
                } else {
                    row.extend([Value::Null, Value::Null]);
                }
            }
            r.push(row);
        }
        curves.push(curve);
    }

    // Post-hoc properties of the sweep.
    let mut monotone = true;
    for pair in curves.windows(2) {
        for (lo, hi) in pair[0].iter().zip(&pair[1]) {
            let interior = lo.pairs > 0 && lo.pairs < l;
            if hi.q < lo.q - 1e-12 || (interior && hi.q <= lo.q) {
                monotone = false;
            }
        }
    }
    r.checks.push(Check::flag(
        "monotone_in_D",
        monotone,
        "Q increases with D at every interior filling",
    ));
    if args.pairs.is_none() {
        let asym = curves
            .iter()
            .flat_map(|c| c.iter().zip(c.iter().rev()).map(|(x, y)| (x.q - y.q).abs()))
            .fold(0.0, f64::max);
        r.checks.push(Check::within(
            "symmetric_in_n_d",
            asym,
            1e-12,
            "Q(N_d) = Q(L − N_d)",
        ));
    }
    if with_oracle {
        let mut worst = 0.0f64;
        for row in &r.rows {
            if let (Some(a), Some(b)) = (row[4].as_f64(), row[5].as_f64()) {
                worst = worst.max((a - b).abs());
            }
        }
        r.checks.push(Check::within(
            "oracle_generic_modes",
            worst,
            1e-10,
            "closed form over generic modes vs brute-force average",
        ));
    }
    Ok(r)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Report> {
    let rows = verify::run_suite(&verify::VerifyOptions {
        lmax: args.lmax,
        dmax: args.dmax,
        seed: args.seed,
        tolerance: args.tolerance,
        caps: args.caps.caps(),
    })?;
    let mut r = Report::new(
        "verify",
        args,
        &["check", "L", "cases", "max_error", "tolerance", "pass"],
    );
    for row in &rows {
        r.push(vec![
            json!(row.check),
            json!(row.length),
            json!(row.cases),
            num(row.max_error),
            num(row.tolerance),
            json!(row.pass),
        ]);
    }
    let failed = rows.iter().filter(|x| !x.pass).count();
    r.checks.push(Check::flag(
        "all_identities",
        failed == 0,
        format!("{} rows, {failed} failed", rows.len()),
    ));
    Ok(r)
}

pub fn cmd_bcs(args: &BcsArgs) -> Result<Report> {
    let profile = match &args.profile {
        Some(path) => BcsProfile::read_csv(File::open(path)?)?,
        None => bcs_profile(args.length, args.hopping, args.mu, args.gap)?,
    };
    if let Some(path) = &args.export_profile {
        profile.write_csv(BufWriter::new(File::create(path)?))?;
    }
    let grid = CorrelatorGrid::new(&profile)?;
    let pairs = pair_entanglement(&profile);
    let mut r = Report::new(
        "bcs",
        args,
        &[
            "index",
            "k",
            "u",
            "v",
            "concurrence",
            "N_norm[2uv]",
            "N_raw[definitional]",
            "f_re",
            "f_im",
            "f_from_negativity_re",
            "f_from_negativity_im",
            "route_residual",
            "g_re",
            "g_im",
        ],
    );
    for (j, p) in pairs.iter().enumerate() {
        let (f, fn_, g) = (grid.f[j], grid.f_from_negativity[j], grid.g[j]);
        r.push(vec![
            json!(j),
            num(p.k),
            num(profile.u()[j]),
            num(profile.v()[j]),
            num(p.concurrence),
            num(p.negativity_norm),
            num(p.negativity_raw),
            num(f.re),
            num(f.im),
            num(fn_.re),
            num(fn_.im),
            num((f - fn_).norm()),
            num(g.re),
            num(g.im),
        ]);
    }
    r.checks.push(Check::within(
        "two_route_f",
        grid.route_residual(),
        1e-12,
        "index doubles as Δx for f, g",
    ));
    r.checks.push(Check::within(
        "parseval",
        parseval_residual(&profile),
        1e-10,
        "",
    ));
    r.checks.push(Check {
        name: "odlro_factorization_residual".into(),
        pass: true,
        value: factorization_residual(&profile),
        tolerance: f64::INFINITY,
        detail: "max |ρ2 − ½ I I f f*| at the two largest separations (reported)".into(),
    });
    Ok(r)
}

pub fn cmd_persistency(args: &PersistencyArgs) -> Result<Report> {
    let strategy: Strategy = args.strategy.parse()?;
    let l = args.length;
    let pairs: Vec<usize> = match args.pairs {
        Some(n) => vec![n],
        None => (0..=l).collect(),
    };
    let caps = args.caps.caps();
    let mut r = Report::new(
        "persistency",
        args,
        &[
            "L",
            "N_d",
            "optimistic",
            "guaranteed",
            "mc_min",
            "mc_mean",
            "mc_p50",
            "mc_p90",
            "mc_max",
            "censored",
            "extremal_min",
            "max_self_similarity_deviation",
        ],
    );
    let mut floor_ok = true;
    let mut similar = 0.0f64;
    for n in pairs {
        let params = EtaParams::new(l, n)?;
        let res = simulate_trajectories_capped(
            params,
            args.picture,
            strategy,
            args.trajectories,
            args.seed,
            &caps,
        )?;
        let s = &res.stats;
        if let Some(min) = s.min {
            floor_ok &= min >= res.optimistic;
        }
        similar = similar.max(s.max_deviation);
        let opt = |x: Option<usize>| x.map_or(Value::Null, |v| json!(v));
        r.push(vec![
            json!(l),
            json!(n),
            json!(res.optimistic),
            json!(res.guaranteed),
            opt(s.min),
            num(s.mean),
            opt(s.p50),
            opt(s.p90),
            opt(s.max),
            json!(s.censored),
            opt(s.extremal_min),
            num(s.max_deviation),
        ]);
    }
    r.checks.push(Check::flag(
        "trajectories_respect_optimistic_floor",
        floor_ok,
        "no trajectory is shorter than the optimistic value",
    ));
    r.checks.push(Check::within(
        "self_similarity",
        similar,
        crate::persistency::SELF_SIMILARITY_TOLERANCE,
        "",
    ));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_ranges() {
        assert_eq!(parse_f64_list("0.1..0.9:0.1").unwrap().len(), 9);
        assert_eq!(parse_f64_list("0.1..0.9:0.1").unwrap()[2], 0.3);
        assert_eq!(parse_f64_list("0.5, 1").unwrap(), vec![0.5, 1.0]);
        assert!(parse_f64_list("").unwrap().is_empty());
        assert!(parse_f64_list("0.1..0.9").is_err());
        assert!(parse_f64_list("0.9..0.1:0.1").is_err());
        assert!(parse_f64_list("0.1..0.9:0").is_err());
        assert!(parse_f64_list("a,b").is_err());
    }

    #[test]
    fn integer_ranges() {
        assert_eq!(parse_usize_list("2,4,8").unwrap(), vec![2, 4, 8]);
        assert_eq!(parse_usize_list("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_usize_list("2..8:3").unwrap(), vec![2, 5, 8]);
        assert!(parse_usize_list("4..1").is_err());
        assert!(parse_usize_list("x").is_err());
    }

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["etapair"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
        assert_eq!(run_capture(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["measures", "--filling", "0.1..x"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_capture(&["verify", "--lmax", "13"]).0, EXIT_CAP);
        assert_eq!(run_capture(&["verify", "--lmax", "4"]).0, EXIT_OK);
        assert_eq!(
            run_capture(&["verify", "--lmax", "4", "--tolerance", "-1"]).0,
            EXIT_VERIFY
        );
        assert_eq!(
            run_capture(&["qsweep", "-L", "20", "-D", "3"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn measures_rows() {
        let (code, out, _) = run_capture(&["measures"]);
        assert_eq!(code, 0);
        let data: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 10);
        let half = data.iter().find(|l| l.starts_with("0.5,")).unwrap();
        assert!(half.starts_with("0.5,2.0,1.5,2.5,0.25,"));
    }
}
