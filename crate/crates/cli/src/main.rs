use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hisigma::audit::{self, AuditConfig, Side, Window};
use hisigma::context::{self, ScaleKind};
use hisigma::fattail::{self, TDistSpec};
use hisigma::tailprob::{self, TailMode};
use hisigma::{Error, LotteryModel, Magnitude, TailQuery, TailResult};

mod render;

use render::{real_sci, sci, Format, Output, Table};

/// Largest k accepted; beyond this the accuracy contract is not checked.
const MAX_K: f64 = 1e6;

#[derive(Parser)]
#[command(
    name = "hisigma",
    version,
    about = "Probabilities of k-sigma events, far past the range of ordinary floats"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Trading days per year.
    #[arg(
        long,
        global = true,
        env = "HISIGMA_DAYS_PER_YEAR",
        default_value_t = 250,
        value_parser = clap::value_parser!(u32).range(1..)
    )]
    dpy: u32,

    /// Significant digits in printed numbers.
    #[arg(
        long,
        global = true,
        default_value_t = 4,
        value_parser = clap::value_parser!(u8).range(1..=15)
    )]
    digits: u8,

    /// Tail evaluation: exact, asymptotic, paper-appendix or auto.
    #[arg(long, global = true, default_value = "auto")]
    mode: TailMode,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl Opts {
    fn sig(&self) -> usize {
        self.digits as usize
    }
}

#[derive(Subcommand)]
enum Command {
    /// Probability, percent and expected occurrence period of a k-sigma day.
    Prob {
        #[arg(allow_negative_numbers = true)]
        k: f64,
    },

    /// One row per k: percent and occurrence period in days and years.
    Table {
        /// Comma-separated sigma levels, e.g. 3,4,5,6,7.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        ks: Vec<f64>,
    },

    /// Expected occurrence period of a k-sigma day or of a daily probability.
    Occurrence {
        #[arg(required_unless_present = "p", conflicts_with = "p", allow_negative_numbers = true)]
        k: Option<f64>,
        /// Daily probability instead of a sigma level.
        #[arg(long)]
        p: Option<Magnitude>,
    },

    /// Probability of k-sigma days on M consecutive days.
    Streak {
        #[arg(allow_negative_numbers = true)]
        k: f64,
        #[arg(long)]
        days: u32,
    },

    /// How many lottery wins in a row are as likely as probability P.
    Lottery {
        #[arg(long)]
        p: Magnitude,
        /// Chance of winning one draw.
        #[arg(long, default_value = "4e-7")]
        win_prob: Magnitude,
    },

    /// The sigma level whose expected occurrence period is Y years.
    Invert {
        #[arg(long)]
        years: Magnitude,
    },

    /// Occurrence period of a k-sigma day next to reference time scales.
    Context {
        #[arg(allow_negative_numbers = true)]
        k: f64,
        /// CSV of name,kind,low[,high] rows replacing the built-in scales.
        #[arg(long)]
        refs: Option<PathBuf>,
    },

    /// Student-t tail probability beyond k, against the Gaussian one.
    Ttail {
        #[arg(allow_negative_numbers = true)]
        k: f64,
        #[arg(long)]
        nu: f64,
        /// Rescale to unit variance so k is in standard deviations.
        #[arg(long)]
        standardized: bool,
    },

    /// Sigma-score a date,value CSV and test how surprising the count of
    /// k-sigma days is.
    Audit {
        file: PathBuf,
        /// `full` or a trailing window length in days.
        #[arg(long, default_value = "full")]
        window: Window,
        #[arg(long, default_value_t = 2.0)]
        threshold: f64,
        #[arg(long, default_value = "loss")]
        side: Side,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli.command, &cli.opts) {
        Ok(out) => {
            print!("{}", out.render(cli.opts.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_domain() { 3 } else { 1 })
        }
    }
}

fn run(command: &Command, o: &Opts) -> hisigma::Result<Output> {
    match command {
        Command::Prob { k } => prob(*k, o),
        Command::Table { ks } => table(ks, o),
        Command::Occurrence { k, p } => occurrence(*k, p.as_ref(), o),
        Command::Streak { k, days } => streak(*k, *days, o),
        Command::Lottery { p, win_prob } => lottery(p, win_prob, o),
        Command::Invert { years } => invert(years, o),
        Command::Context { k, refs } => compare(*k, refs.as_ref(), o),
        Command::Ttail { k, nu, standardized } => ttail(*k, *nu, *standardized, o),
        Command::Audit {
            file,
            window,
            threshold,
            side,
        } => audit_file(file, *window, *threshold, *side, o),
    }
}

fn tail(k: f64, o: &Opts) -> hisigma::Result<TailResult> {
    if k > MAX_K {
        return Err(Error::Domain(format!(
            "k = {k} is beyond the supported range (k <= {MAX_K:e})"
        )));
    }
    tailprob::gauss_tail(&TailQuery::new(k).days_per_year(o.dpy).mode(o.mode))
}

#[derive(Serialize)]
struct ProbJson<'a> {
    mode: TailMode,
    #[serde(flatten)]
    result: &'a TailResult,
}

fn prob(k: f64, o: &Opts) -> hisigma::Result<Output> {
    let r = tail(k, o)?;
    let d = o.sig();
    let mut out = Output::new(ProbJson {
        mode: o.mode,
        result: &r,
    });
    out.field("k", k.to_string())
        .field("probability", sci(&r.probability, d))
        .field("percent", format!("{} %", sci(&r.percent, d)))
        .field("occurrence_days", sci(&r.occurrence_days, d))
        .field("occurrence_years", sci(&r.occurrence_years, d))
        .field("days_per_year", o.dpy.to_string())
        .field("mode", o.mode.to_string())
        .field("path", r.diagnostics.path.to_string())
        .field("terms_used", r.diagnostics.terms_used.to_string())
        .field("truncation_bound", real_sci(r.diagnostics.truncation_bound, 2))
        .field("cancellation_safe", r.diagnostics.cancellation_safe.to_string());
    Ok(out)
}

#[derive(Serialize)]
struct TableRow {
    k: f64,
    probability: Magnitude,
    percent: Magnitude,
    occurrence_days: Magnitude,
    occurrence_years: Magnitude,
}

#[derive(Serialize)]
struct TableJson {
    days_per_year: u32,
    mode: TailMode,
    rows: Vec<TableRow>,
}

fn table(ks: &[f64], o: &Opts) -> hisigma::Result<Output> {
    let d = o.sig();
    // CSV keeps the percent column numeric
    let unit = if o.format == Format::Csv { "" } else { " %" };
    let mut t = Table::new(&["k", "percent", "occurrence_days", "occurrence_years"]);
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let r = tail(k, o)?;
        t.push(vec![
            k.to_string(),
            format!("{}{unit}", sci(&r.percent, d)),
            sci(&r.occurrence_days, d),
            sci(&r.occurrence_years, d),
        ]);
        rows.push(TableRow {
            k,
            probability: r.probability,
            percent: r.percent,
            occurrence_days: r.occurrence_days,
            occurrence_years: r.occurrence_years,
        });
    }
    let mut out = Output::new(TableJson {
        days_per_year: o.dpy,
        mode: o.mode,
        rows,
    });
    out.table = Some(t);
    Ok(out)
}

#[derive(Serialize)]
struct OccurrenceJson {
    k: Option<f64>,
    probability: Magnitude,
    occurrence_days: Magnitude,
    occurrence_years: Magnitude,
    events_per_year: Magnitude,
    days_per_year: u32,
}

fn occurrence(k: Option<f64>, p: Option<&Magnitude>, o: &Opts) -> hisigma::Result<Output> {
    let p = match (k, p) {
        (Some(k), _) => tail(k, o)?.probability,
        (None, Some(p)) => {
            if p.is_zero() || *p > Magnitude::one() {
                return Err(Error::Domain(format!("probability must lie in (0, 1], got {p}")));
            }
            *p
        }
        (None, None) => unreachable!("clap requires k or --p"),
    };
    let j = OccurrenceJson {
        k,
        probability: p,
        occurrence_days: tailprob::occurrence_days(&p)?,
        occurrence_years: tailprob::occurrence_years(&p, o.dpy)?,
        events_per_year: p.scale(o.dpy as f64)?,
        days_per_year: o.dpy,
    };
    let d = o.sig();
    let mut out = Output::new(&j);
    if let Some(k) = k {
        out.field("k", k.to_string());
    }
    out.field("probability", sci(&j.probability, d))
        .field("occurrence_days", sci(&j.occurrence_days, d))
        .field("occurrence_years", sci(&j.occurrence_years, d))
        .field("events_per_year", sci(&j.events_per_year, d))
        .field("days_per_year", o.dpy.to_string());
    Ok(out)
}

#[derive(Serialize)]
struct StreakJson {
    k: f64,
    days: u32,
    daily_probability: Magnitude,
    probability: Magnitude,
    lottery_wins: (i64, i64),
    percent_squared: Magnitude,
}

fn streak(k: f64, days: u32, o: &Opts) -> hisigma::Result<Output> {
    let d = o.sig();
    let r = tail(k, o)?;
    let probability = tailprob::streak_probability(&r.probability, days)?;
    let wins = context::lottery_equivalent(&probability, &LotteryModel::default())?;
    // the percent form as printed, raised to the same power: a common
    // slip that multiplies percents instead of probabilities
    let shown_percent: Magnitude = sci(&r.percent, d).parse()?;
    let percent_squared = tailprob::streak_probability(&shown_percent, days)?;
    let mut out = Output::new(StreakJson {
        k,
        days,
        daily_probability: r.probability,
        probability,
        lottery_wins: wins,
        percent_squared,
    });
    out.field("k", k.to_string())
        .field("days", days.to_string())
        .field("daily_probability", sci(&r.probability, d))
        .field("probability", sci(&probability, d))
        .field(
            "lottery_wins",
            format!("between {} and {} consecutive wins", wins.0, wins.1),
        );
    out.notes.push(format!(
        "note: raising the percent figure {} % to the power {days} gives {}; that mixes units and is not a probability",
        sci(&shown_percent, d),
        sci(&percent_squared, d)
    ));
    Ok(out)
}

#[derive(Serialize)]
struct LotteryJson {
    probability: Magnitude,
    win_probability: Magnitude,
    wins_low: i64,
    wins_high: i64,
    win_probability_pow_low: Magnitude,
    win_probability_pow_high: Magnitude,
}

fn lottery(p: &Magnitude, q: &Magnitude, o: &Opts) -> hisigma::Result<Output> {
    let model = LotteryModel::new(*q)?;
    let (n, n1) = context::lottery_equivalent(p, &model)?;
    let j = LotteryJson {
        probability: *p,
        win_probability: *q,
        wins_low: n,
        wins_high: n1,
        win_probability_pow_low: q.pow_int(n)?,
        win_probability_pow_high: q.pow_int(n1)?,
    };
    let d = o.sig();
    let mut out = Output::new(&j);
    out.field("probability", sci(p, d))
        .field("win_probability", sci(q, d))
        .field("wins", format!("between {n} and {n1} consecutive wins"))
        .field("q^n", format!("{} (n = {n})", sci(&j.win_probability_pow_low, d)))
        .field("q^(n+1)", format!("{} (n + 1 = {n1})", sci(&j.win_probability_pow_high, d)));
    Ok(out)
}

#[derive(Serialize)]
struct InvertJson {
    years: Magnitude,
    days_per_year: u32,
    k: f64,
}

fn invert(years: &Magnitude, o: &Opts) -> hisigma::Result<Output> {
    let k = tailprob::sigma_for_period(years, o.dpy)?;
    let mut out = Output::new(InvertJson {
        years: *years,
        days_per_year: o.dpy,
        k,
    });
    out.field("years", sci(years, o.sig()))
        .field("days_per_year", o.dpy.to_string())
        .field("k", format!("{k:.*}", o.sig()));
    out.notes.push(format!("k ≈ {k:.2}"));
    Ok(out)
}

#[derive(Serialize)]
struct ContextJson {
    k: f64,
    occurrence_years: Magnitude,
    days_per_year: u32,
    comparisons: Vec<context::Comparison<f64>>,
}

fn compare(k: f64, refs: Option<&PathBuf>, o: &Opts) -> hisigma::Result<Output> {
    let d = o.sig();
    let years = tail(k, o)?.occurrence_years;
    let scales = match refs {
        Some(path) => context::load_references(path)?,
        None => context::builtin_references(),
    };
    let comparisons = context::compare_to_references(&years, &scales)?;
    let mut t = Table::new(&["reference", "kind", "scale", "ratio", "note"]);
    for (s, c) in scales.iter().zip(&comparisons) {
        let range = |lo: &Magnitude, hi: &Magnitude| {
            if lo == hi {
                sci(lo, d)
            } else {
                format!("{} to {}", sci(lo, d), sci(hi, d))
            }
        };
        let note = match c.kind {
            ScaleKind::Years => "",
            ScaleKind::Count | ScaleKind::Probability => "unit mismatch: bare numbers",
        };
        t.push(vec![
            s.name.clone(),
            s.kind.to_string(),
            range(&s.low, &s.high),
            range(&c.ratio_high, &c.ratio_low),
            note.to_string(),
        ]);
    }
    let mut out = Output::new(ContextJson {
        k,
        occurrence_years: years,
        days_per_year: o.dpy,
        comparisons,
    });
    out.field("k", k.to_string())
        .field("occurrence_years", sci(&years, d))
        .field("days_per_year", o.dpy.to_string());
    out.table = Some(t);
    Ok(out)
}

#[derive(Serialize)]
struct TtailJson {
    k: f64,
    nu: f64,
    standardized: bool,
    t: f64,
    probability: Magnitude,
    gaussian_probability: Magnitude,
    orders_above_gaussian: Option<i64>,
}

fn ttail(k: f64, nu: f64, standardized: bool, o: &Opts) -> hisigma::Result<Output> {
    let spec = TDistSpec::new(nu, standardized)?;
    let probability = fattail::student_t_tail(k, &spec)?;
    let gaussian = tail(k, o)?.probability;
    let gap = if k >= tailprob::ASYMPTOTIC_MIN_K {
        Some(fattail::gap_vs_gaussian(k, &spec)?)
    } else {
        None
    };
    let d = o.sig();
    let mut out = Output::new(TtailJson {
        k,
        nu,
        standardized,
        t: spec.t_of(k),
        probability,
        gaussian_probability: gaussian,
        orders_above_gaussian: gap,
    });
    out.field("k", k.to_string())
        .field("nu", nu.to_string())
        .field("standardized", standardized.to_string())
        .field("t", real_sci(spec.t_of(k), d))
        .field("probability", sci(&probability, d))
        .field("gaussian_probability", sci(&gaussian, d));
    if let Some(g) = gap {
        out.field("orders_above_gaussian", g.to_string());
    }
    Ok(out)
}

fn audit_file(
    file: &PathBuf,
    window: Window,
    threshold_k: f64,
    side: Side,
    o: &Opts,
) -> hisigma::Result<Output> {
    let series = audit::load_series(file)?;
    let config = AuditConfig {
        window,
        threshold_k,
        side,
        days_per_year: o.dpy,
    };
    let r = audit::build_report(&series, &config)?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    let d = o.sig();
    let mut t = Table::new(&["date", "sigma_score"]);
    for f in &r.flagged {
        t.push(vec![f.date.to_string(), format!("{:.4}", f.sigma_score)]);
    }
    let mut out = Output::new(&r);
    out.field("source", r.source_label.clone())
        .field("n_days", r.n_days.to_string())
        .field("n_scored", r.n_scored.to_string())
        .field("mean", real_sci(r.mean, d))
        .field("stdev", real_sci(r.stdev, d))
        .field("window", r.window.to_string())
        .field("threshold_k", r.threshold_k.to_string())
        .field("side", r.side.to_string())
        .field("days_per_year", r.days_per_year.to_string())
        .field("model_probability", sci(&r.model_probability, d))
        .field("expected_count", real_sci(r.expected_count, d))
        .field("observed_count", r.observed_count.to_string())
        .field("p_value_at_least_observed", sci(&r.p_value_at_least_observed, d));
    out.table = Some(t);
    out.notes.push(format!("assumption: {}", r.assumption));
    Ok(out)
}
