//! Subcommand implementations. Each builds its output as a string (JSON
//! with a trailing newline, or CSV) and `run` writes it to `--out` or
//! stdout, so output handling and exit-code mapping stay in one place.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use frs::decoder::{
    agreement_fraction_degree1, agreement_fraction_linear, agreement_fraction_multiplicity,
    list_decode, list_recover, recover_threshold, DecodeStats,
};
use frs::derive_seed;
use frs::evasive::{audit_set, sample_evasive, EvasiveAudit};
use frs::frs_code::{encode, Codeword, FrsParams};
use frs::gf::{make_field, FieldElem};
use frs::interp::Variant;

use crate::config::{code_setup, CliError, Config};
use crate::{Cli, Cmd};

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg_path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Msg("--config is required".to_string()))?;
    let cfg = Config::load(cfg_path)?;
    let output = match &cli.cmd {
        Cmd::Encode { message } => cmd_encode(&cfg, message)?,
        Cmd::Decode { received } => cmd_decode(&cli, &cfg, received)?,
        Cmd::Simulate => cmd_simulate(&cli, &cfg)?,
        Cmd::RadiusTable => cmd_radius_table(&cfg)?,
        Cmd::EvasiveAudit => cmd_evasive_audit(&cli, &cfg)?,
        Cmd::Recover { sets } => cmd_recover(&cli, &cfg, sets)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, output)
            .map_err(|e| CliError::Msg(format!("writing {}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    Ok(())
}

fn resolve_seed(cli: &Cli, cfg: &Config) -> Result<u64, CliError> {
    Ok(match cli.seed {
        Some(s) => s,
        None => cfg.parse::<u64>("seed")?.unwrap_or(0),
    })
}

fn resolve_trials(cli: &Cli, cfg: &Config) -> Result<u64, CliError> {
    Ok(match cli.trials {
        Some(t) => t,
        None => cfg.parse::<u64>("trials")?.unwrap_or(10),
    })
}

fn resolve_cap(cli: &Cli, cfg: &Config) -> Result<u64, CliError> {
    Ok(match cli.cap {
        Some(c) => c,
        None => cfg.parse::<u64>("cap")?.unwrap_or(1_000_000),
    })
}

fn resolve_variant(cli: &Cli, cfg: &Config) -> Result<Variant, CliError> {
    let name = match &cli.variant {
        Some(v) => Some(v.clone()),
        None => cfg.get_str("variant").map(|s| s.to_string()),
    };
    match name {
        Some(v) => Ok(v.parse::<Variant>()?),
        None => Ok(Variant::Affine),
    }
}

fn to_ints(f: &[FieldElem]) -> Vec<u64> {
    f.iter().map(|c| c.value()).collect()
}

fn pretty<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(format!("{}\n", serde_json::to_string_pretty(value)?))
}

#[derive(Serialize)]
struct TimingsOut {
    interp_secs: f64,
    solve_secs: f64,
    prune_secs: f64,
}

fn timings_out(cli: &Cli, stats: &DecodeStats) -> Option<TimingsOut> {
    (!cli.no_timings).then(|| TimingsOut {
        interp_secs: stats.interp_secs,
        solve_secs: stats.solve_secs,
        prune_secs: stats.prune_secs,
    })
}

// ---------------------------------------------------------------------------
// encode
// ---------------------------------------------------------------------------

fn cmd_encode(cfg: &Config, message: &Path) -> Result<String, CliError> {
    let params = code_setup(cfg)?;
    let text = fs::read_to_string(message)
        .map_err(|e| CliError::Msg(format!("message {}: {e}", message.display())))?;
    let raw: Vec<u64> = serde_json::from_str(&text)?;
    if raw.len() != params.k() {
        return Err(CliError::Msg(format!(
            "message has {} elements, code expects k = {}",
            raw.len(),
            params.k()
        )));
    }
    let ctx = params.ctx();
    let f: Vec<FieldElem> = raw
        .iter()
        .map(|&v| ctx.elem(v))
        .collect::<frs::Result<_>>()?;
    let cw = encode(&params, &f)?;
    Ok(format!("{}\n", serde_json::to_string(&cw)?))
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SpaceOut {
    free_positions: Vec<usize>,
    offset: Vec<u64>,
    basis: Vec<Vec<u64>>,
}

#[derive(Serialize)]
struct DecodeOut {
    t_min: usize,
    dimension: usize,
    empty: bool,
    enumerated: u64,
    candidates: Vec<Vec<u64>>,
    space: SpaceOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<TimingsOut>,
}

fn cmd_decode(cli: &Cli, cfg: &Config, received: &Path) -> Result<String, CliError> {
    let params = code_setup(cfg)?;
    let s = cfg.require::<usize>("s")?;
    let variant = resolve_variant(cli, cfg)?;
    let cap = resolve_cap(cli, cfg)?;
    let text = fs::read_to_string(received)
        .map_err(|e| CliError::Msg(format!("received {}: {e}", received.display())))?;
    let raw: Vec<Vec<u64>> = serde_json::from_str(&text)?;
    let y = Codeword::from_ints(&params, &raw)?;
    let res = list_decode(&params, s, &y, variant, cap)?;
    pretty(&DecodeOut {
        t_min: res.t_min,
        dimension: res.space.dim(),
        empty: res.space.is_empty_space(),
        enumerated: res.stats.enumerated,
        candidates: res.candidates.iter().map(|f| to_ints(f)).collect(),
        space: SpaceOut {
            free_positions: res.space.free_positions().to_vec(),
            offset: to_ints(res.space.offset()),
            basis: res.space.basis_matrix().iter().map(|r| to_ints(r)).collect(),
        },
        timings: timings_out(cli, &res.stats),
    })
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

enum Channel {
    RandomCount(usize),
    RandomProb(f64),
    Burst(usize),
}

impl Channel {
    fn from_config(cfg: &Config, num_columns: usize) -> Result<Channel, CliError> {
        let kind = cfg.get_str("channel").unwrap_or("random");
        let errors = cfg.parse::<usize>("errors")?;
        let error_prob = cfg.parse::<f64>("error_prob")?;
        if errors.is_some() && error_prob.is_some() {
            return Err(CliError::Msg(
                "set either errors= or error_prob=, not both".to_string(),
            ));
        }
        if let Some(e) = errors {
            if e > num_columns {
                return Err(CliError::Msg(format!(
                    "errors = {e} exceeds the {num_columns} codeword columns"
                )));
            }
        }
        if let Some(p) = error_prob {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Msg(format!(
                    "error_prob = {p} outside [0, 1]"
                )));
            }
        }
        match kind {
            "random" => match (errors, error_prob) {
                (Some(e), None) => Ok(Channel::RandomCount(e)),
                (None, Some(p)) => Ok(Channel::RandomProb(p)),
                (None, None) => Err(CliError::Msg(
                    "channel needs errors= or error_prob=".to_string(),
                )),
                _ => unreachable!(),
            },
            "burst" => match (errors, error_prob) {
                (Some(e), None) => Ok(Channel::Burst(e)),
                _ => Err(CliError::Msg(
                    "burst channel needs errors= (a count), not error_prob=".to_string(),
                )),
            },
            other => Err(CliError::Msg(format!(
                "channel must be 'random' or 'burst', got '{other}'"
            ))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Channel::RandomCount(_) | Channel::RandomProb(_) => "random",
            Channel::Burst(_) => "burst",
        }
    }

    /// Columns to corrupt this trial, in ascending order.
    fn pick_columns(&self, rng: &mut ChaCha8Rng, num_columns: usize) -> Vec<usize> {
        let mut cols = match self {
            Channel::RandomCount(e) => {
                let mut idx: Vec<usize> = (0..num_columns).collect();
                for i in 0..*e {
                    let j = rng.gen_range(i..num_columns);
                    idx.swap(i, j);
                }
                idx.truncate(*e);
                idx
            }
            Channel::RandomProb(p) => (0..num_columns)
                .filter(|_| rng.gen_bool(*p))
                .collect(),
            Channel::Burst(e) => {
                if *e == 0 {
                    Vec::new()
                } else {
                    let start = rng.gen_range(0..num_columns);
                    (0..*e).map(|i| (start + i) % num_columns).collect()
                }
            }
        };
        cols.sort_unstable();
        cols
    }
}

/// Replaces each listed column with a uniformly random different column.
fn corrupt(
    params: &FrsParams,
    clean: &Codeword,
    cols: &[usize],
    rng: &mut ChaCha8Rng,
) -> Codeword {
    let ctx = params.ctx();
    let q = ctx.order();
    let mut columns = clean.columns().to_vec();
    for &j in cols {
        let orig = columns[j].clone();
        loop {
            for cell in columns[j].iter_mut() {
                *cell = ctx.elem(rng.gen_range(0..q)).unwrap();
            }
            if columns[j] != orig {
                break;
            }
        }
    }
    Codeword::from_columns(columns).unwrap()
}

#[derive(Serialize)]
struct TrialOut {
    trial: u64,
    errors: usize,
    success: bool,
    list_size: usize,
    dimension: usize,
    enumerated: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<TimingsOut>,
}

#[derive(Serialize)]
struct SimAggregate {
    success_rate: f64,
    dimension_histogram: BTreeMap<usize, u64>,
    mean_list_size: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_timings: Option<TimingsOut>,
}

#[derive(Serialize)]
struct SimulateOut {
    p: u64,
    e: u32,
    q: u64,
    gamma: u64,
    n: usize,
    m: usize,
    k: usize,
    s: usize,
    variant: String,
    channel: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    errors: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_prob: Option<f64>,
    seed: u64,
    trials: u64,
    cap: u64,
    t_min: usize,
    per_trial: Vec<TrialOut>,
    aggregate: SimAggregate,
}

fn cmd_simulate(cli: &Cli, cfg: &Config) -> Result<String, CliError> {
    let params = code_setup(cfg)?;
    let s = cfg.require::<usize>("s")?;
    let variant = resolve_variant(cli, cfg)?;
    let cap = resolve_cap(cli, cfg)?;
    let seed = resolve_seed(cli, cfg)?;
    let trials = resolve_trials(cli, cfg)?;
    let channel = Channel::from_config(cfg, params.num_columns())?;
    let ctx = params.ctx().clone();
    let q = ctx.order();
    let k = params.k();
    let t_min = frs::decoder::decode_threshold(&params, s, variant)?;

    let mut per_trial = Vec::with_capacity(trials as usize);
    let mut successes = 0u64;
    let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
    let mut list_sum = 0u64;
    let mut time_sum = (0.0f64, 0.0f64, 0.0f64);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial));
        let f: Vec<FieldElem> = (0..k)
            .map(|_| ctx.elem(rng.gen_range(0..q)).unwrap())
            .collect();
        let clean = encode(&params, &f)?;
        let cols = channel.pick_columns(&mut rng, params.num_columns());
        let y = corrupt(&params, &clean, &cols, &mut rng);
        let res = list_decode(&params, s, &y, variant, cap)?;
        let success = res.candidates.contains(&f);
        successes += u64::from(success);
        *histogram.entry(res.space.dim()).or_insert(0) += 1;
        list_sum += res.candidates.len() as u64;
        time_sum.0 += res.stats.interp_secs;
        time_sum.1 += res.stats.solve_secs;
        time_sum.2 += res.stats.prune_secs;
        per_trial.push(TrialOut {
            trial,
            errors: cols.len(),
            success,
            list_size: res.candidates.len(),
            dimension: res.space.dim(),
            enumerated: res.stats.enumerated,
            timings: timings_out(cli, &res.stats),
        });
    }

    let denom = trials.max(1) as f64;
    let aggregate = SimAggregate {
        success_rate: successes as f64 / denom,
        dimension_histogram: histogram,
        mean_list_size: list_sum as f64 / denom,
        mean_timings: (!cli.no_timings).then(|| TimingsOut {
            interp_secs: time_sum.0 / denom,
            solve_secs: time_sum.1 / denom,
            prune_secs: time_sum.2 / denom,
        }),
    };
    pretty(&SimulateOut {
        p: ctx.characteristic(),
        e: ctx.extension_degree(),
        q,
        gamma: params.gamma().value(),
        n: params.n(),
        m: params.m(),
        k,
        s,
        variant: variant.to_string(),
        channel: channel.name().to_string(),
        errors: match &channel {
            Channel::RandomCount(e) | Channel::Burst(e) => Some(*e),
            Channel::RandomProb(_) => None,
        },
        error_prob: match &channel {
            Channel::RandomProb(p) => Some(*p),
            _ => None,
        },
        seed,
        trials,
        cap,
        t_min,
        per_trial,
        aggregate,
    })
}

// ---------------------------------------------------------------------------
// radius-table
// ---------------------------------------------------------------------------

/// Integer agreement threshold of the affine decoder straight from the
/// counting formulas; None when the instance is degenerate.
fn table_threshold(n: usize, m: usize, s: usize, k: usize) -> Option<usize> {
    if n % m != 0 || k == 0 || k >= n || s > m {
        return None;
    }
    let cols = n / m;
    let conditions = cols * (m - s + 1);
    if conditions + 1 < k + s + 1 {
        return None;
    }
    let d = (conditions - k + 1) / (s + 1);
    if d < 1 {
        return None;
    }
    let t = (d + k - 1) / (m - s + 1) + 1;
    (t <= cols).then_some(t)
}

fn cmd_radius_table(cfg: &Config) -> Result<String, CliError> {
    let s_min = cfg.parse::<usize>("s_min")?.unwrap_or(1);
    let s_max = cfg.parse::<usize>("s_max")?.unwrap_or(4);
    let m_min = cfg.parse::<usize>("m_min")?.unwrap_or(1);
    let m_max = cfg.parse::<usize>("m_max")?.unwrap_or(8);
    let rates = match cfg.list::<f64>("rates")? {
        Some(r) => r,
        None => (1..=19).map(|i| i as f64 * 0.05).collect(),
    };
    let n_ref = cfg.parse::<usize>("n")?;
    if s_min < 1 || s_min > s_max {
        return Err(CliError::Msg(format!(
            "need 1 <= s_min <= s_max, got {s_min}..{s_max}"
        )));
    }
    if m_min > m_max {
        return Err(CliError::Msg(format!(
            "need m_min <= m_max, got {m_min}..{m_max}"
        )));
    }
    if rates.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(CliError::Msg("rates must lie strictly in (0, 1)".to_string()));
    }

    let mut out = String::from(
        "s,m,R,frac_multiplicity,frac_degree1,frac_linear,amgm_ok,t_min,e_max,status\n",
    );
    for s in s_min..=s_max {
        for m in m_min.max(s)..=m_max {
            for &rate in &rates {
                let frac_mult = agreement_fraction_multiplicity(s, m, rate);
                let frac_deg1 = agreement_fraction_degree1(s, m, rate);
                let frac_lin = agreement_fraction_linear(s, m, rate);
                let amgm_ok = frac_deg1 + 1e-12 >= frac_mult;
                let (t_cell, e_cell, status) = match n_ref {
                    None => (String::new(), String::new(), "ok"),
                    Some(n) => {
                        let k = ((rate * n as f64).round() as usize).clamp(1, n - 1);
                        match table_threshold(n, m, s, k) {
                            Some(t) => (t.to_string(), (n / m - t).to_string(), "ok"),
                            None => (String::new(), String::new(), "degenerate"),
                        }
                    }
                };
                out.push_str(&format!(
                    "{s},{m},{rate},{frac_mult:.6},{frac_deg1:.6},{frac_lin:.6},{amgm_ok},{t_cell},{e_cell},{status}\n"
                ));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// evasive-audit
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AuditAggregate {
    max_le_tp_rate: f64,
    size_in_band_rate: f64,
    band: [u64; 2],
    pass: bool,
}

#[derive(Serialize)]
struct AuditOut {
    q: u64,
    k: usize,
    r: usize,
    t_p: usize,
    s: usize,
    seeds: u64,
    subspaces: u64,
    seed: u64,
    audits: Vec<EvasiveAudit>,
    aggregate: AuditAggregate,
}

fn cmd_evasive_audit(cli: &Cli, cfg: &Config) -> Result<String, CliError> {
    let p = cfg.require::<u64>("p")?;
    let e = cfg.parse::<u32>("e")?.unwrap_or(1);
    let modulus = cfg.list::<u64>("modulus")?;
    let ctx = make_field(p, e, modulus.as_deref())?;
    let k = cfg.require::<usize>("k")?;
    let r = cfg.require::<usize>("r")?;
    let t_p = cfg.require::<usize>("t_p")?;
    let s = cfg.parse::<usize>("s")?.unwrap_or(2);
    let seeds = cfg.parse::<u64>("seeds")?.unwrap_or(50);
    let subspaces = cfg.parse::<u64>("subspaces")?.unwrap_or(100);
    let size_samples = cfg.parse::<u64>("size_samples")?.unwrap_or(65536);
    let master = resolve_seed(cli, cfg)?;
    let cap = resolve_cap(cli, cfg)?;
    let q = ctx.order();

    let mut audits = Vec::with_capacity(seeds as usize);
    for i in 0..seeds {
        let set_seed = derive_seed(master, i);
        let set = sample_evasive(&ctx, k, r, t_p, set_seed)?;
        audits.push(audit_set(&set, s, subspaces, set_seed, cap, size_samples)?);
    }

    let expected = q.checked_pow(r as u32).ok_or_else(|| {
        CliError::Msg(format!("q^r overflows at q = {q}, r = {r}"))
    })?;
    let band = [expected / 2, 2 * expected];
    let denom = seeds.max(1) as f64;
    let max_ok = audits
        .iter()
        .filter(|a| a.max_intersection <= t_p as u64)
        .count() as f64
        / denom;
    let size_ok = audits
        .iter()
        .filter(|a| (band[0]..=band[1]).contains(&a.set_size))
        .count() as f64
        / denom;
    let aggregate = AuditAggregate {
        max_le_tp_rate: max_ok,
        size_in_band_rate: size_ok,
        band,
        pass: max_ok >= 0.95 && size_ok >= 0.90,
    };
    pretty(&AuditOut {
        q,
        k,
        r,
        t_p,
        s,
        seeds,
        subspaces,
        seed: master,
        audits,
        aggregate,
    })
}

// ---------------------------------------------------------------------------
// recover
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RecoverTimings {
    total_secs: f64,
}

#[derive(Serialize)]
struct RecoverOut {
    threshold: usize,
    t: usize,
    candidates: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<RecoverTimings>,
}

fn cmd_recover(cli: &Cli, cfg: &Config, sets_path: &Path) -> Result<String, CliError> {
    let params = code_setup(cfg)?;
    let s = cfg.require::<usize>("s")?;
    let t = cfg.require::<usize>("t")?;
    let cap = resolve_cap(cli, cfg)?;
    let text = fs::read_to_string(sets_path)
        .map_err(|e| CliError::Msg(format!("sets {}: {e}", sets_path.display())))?;
    let raw: Vec<Vec<Vec<u64>>> = serde_json::from_str(&text)?;
    let ctx = params.ctx();
    let sets: Vec<Vec<Vec<FieldElem>>> = raw
        .iter()
        .map(|position| {
            position
                .iter()
                .map(|col| col.iter().map(|&v| ctx.elem(v)).collect::<frs::Result<_>>())
                .collect::<frs::Result<_>>()
        })
        .collect::<frs::Result<_>>()?;
    let threshold = recover_threshold(&params, s, &sets)?;
    let start = Instant::now();
    let candidates = list_recover(&params, s, &sets, t, cap)?;
    let total_secs = start.elapsed().as_secs_f64();
    pretty(&RecoverOut {
        threshold,
        t,
        candidates: candidates.iter().map(|f| to_ints(f)).collect(),
        timings: (!cli.no_timings).then_some(RecoverTimings { total_secs }),
    })
}
