//! `udwit` — command-line surface for the unit-distance witness workbench.
//!
//! Exit codes: 0 = Proven / valid / success, 1 = Refuted / invalid,
//! 2 = Undecided / failure to construct, 3 = usage or input error.
//!
//! Claim syntax (for `verify`, `refute`, `strengthen`):
//!   star:X,Y        strong distance claim on the pair (X, Y)
//!   wstar:X,Y       weak (injective, biconditional) distance claim
//!   diamond:K,L,M,N strong congruence claim on segments KL and MN
//!   wdiamond:K,L,M,N weak congruence claim
//!   eps:X,Y,EXPR    epsilon claim with tolerance EXPR (e.g. `eps:A,C,1/2`)

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use udwit::claims::{refute, verify, Claim, Mode, Outcome, Verdict};
use udwit::combine::{strengthen_diamond, strengthen_star, EpsilonBuilder};
use udwit::congruence::{
    truncated_equiv_closed_form, truncated_equiv_search, TruncationQuery, Verdict3,
};
use udwit::enumerate::{enumerate_config, spectrum, EnumError};
use udwit::gadgets::{
    attach_rhombus, attach_triangle, build_chain, build_epsilon_witness, build_spindle,
    constructible_closure, search_witness, SearchBudget, SearchOutcome, Side,
};
use udwit::refute::RefuterParams;
use udwit::report::{CongruenceRow, Report, RunManifest, SolutionOut, ValueOut};
use udwit::{CReal, Configuration, DEFAULT_PRECISION};

#[derive(Parser)]
#[command(name = "udwit", version, about = "Unit-distance witness workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Configuration file (UTF-8 JSON)
    input: PathBuf,
    /// Refinement budget in bits (default: UDRIG_PRECISION or 256)
    #[arg(long)]
    precision: Option<u32>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that declared unit edges are certified unit and nothing else is
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate all placements up to isometry
    Enumerate {
        #[command(flatten)]
        common: Common,
    },
    /// Achievable image distances for one pair
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Pair of labels, e.g. --pair A,C
        #[arg(long)]
        pair: String,
    },
    /// Certify a claim by exhaustive enumeration
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        claim: String,
    },
    /// Search numerically for a counterexample, then certify it
    Refute {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        claim: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: u32,
    },
    /// Construct a gadget; the report embeds the resulting configuration
    Build {
        #[arg(value_enum)]
        gadget: Gadget,
        /// Host configuration (omit for `spindle`)
        input: Option<PathBuf>,
        /// Attachment pair, e.g. --pair X,Y
        #[arg(long)]
        pair: Option<String>,
        /// Triangle side (ccw of the pair is `up`)
        #[arg(long, value_enum, default_value_t = SideArg::Up)]
        side: SideArg,
        /// Chain length k
        #[arg(long = "N")]
        n: Option<u32>,
        /// Epsilon expression for `epsilon`
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adjoin witness kits for every pair (Theorem 2 union)
    Strengthen {
        #[command(flatten)]
        common: Common,
        /// star:X,Y or diamond:K,L,M,N
        #[arg(long)]
        claim: String,
    },
    /// Constructible closure: iterated unit-circle intersections
    Closure {
        #[command(flatten)]
        common: Common,
        /// Closure depth
        #[arg(long = "N", default_value_t = 1)]
        n: u32,
        /// Cap on generated points
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Best-first search for a witness configuration for one pair
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pair: String,
        /// Max configurations explored
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Max points adjoined per configuration
        #[arg(long = "N", default_value_t = 4)]
        n: usize,
    },
    /// Finite truncations of segment congruence for two point pairs
    Congruence {
        #[command(flatten)]
        common: Common,
        /// Highest truncation level
        #[arg(long = "N", default_value_t = 5)]
        n: u32,
        #[arg(long = "denominator-bound", default_value_t = 64)]
        denominator_bound: u64,
        /// Four labels a,b,c,d (default: first four points of the file)
        #[arg(long)]
        labels: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Gadget {
    Triangle,
    Rhombus,
    Chain,
    Spindle,
    Epsilon,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Up,
    Down,
}

/// Input or usage problem; always maps to exit code 3.
struct Usage(String);

impl<T: std::fmt::Display> From<T> for Usage {
    fn from(e: T) -> Usage {
        Usage(e.to_string())
    }
}

fn precision_bits(flag: Option<u32>) -> u32 {
    flag.or_else(|| {
        std::env::var("UDRIG_PRECISION")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_PRECISION)
}

fn load(path: &PathBuf, bits: u32, manifest: &mut RunManifest) -> Result<Configuration, Usage> {
    let bytes =
        fs::read(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    manifest.record_input(&path.display().to_string(), &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Usage(format!("{} is not UTF-8", path.display())))?;
    let cfg = Configuration::from_json(&text)?;
    Ok(cfg.with_budget(bits))
}

fn split_labels(s: &str, n: usize, what: &str) -> Result<Vec<String>, Usage> {
    let parts: Vec<String> = s.split(',').map(|p| p.trim().to_string()).collect();
    if parts.len() != n || parts.iter().any(String::is_empty) {
        return Err(Usage(format!(
            "{what} must be {n} comma-separated labels, got {s:?}"
        )));
    }
    Ok(parts)
}

fn parse_claim(s: &str) -> Result<Claim, Usage> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| Usage(format!("claim {s:?} lacks a kind prefix like star:")))?;
    match kind {
        "star" | "wstar" => {
            let l = split_labels(rest, 2, "star claim")?;
            Ok(Claim::Distance {
                x: l[0].clone(),
                y: l[1].clone(),
                mode: if kind == "star" { Mode::Strong } else { Mode::Weak },
            })
        }
        "diamond" | "wdiamond" => {
            let l = split_labels(rest, 4, "diamond claim")?;
            Ok(Claim::Congruence {
                k: l[0].clone(),
                l: l[1].clone(),
                m: l[2].clone(),
                n: l[3].clone(),
                mode: if kind == "diamond" { Mode::Strong } else { Mode::Weak },
            })
        }
        "eps" => {
            let parts: Vec<&str> = rest.splitn(3, ',').collect();
            if parts.len() != 3 {
                return Err(Usage(format!("eps claim needs X,Y,EXPR, got {rest:?}")));
            }
            let eps = CReal::parse(parts[2].trim())?;
            Ok(Claim::Epsilon {
                x: parts[0].trim().to_string(),
                y: parts[1].trim().to_string(),
                eps,
            })
        }
        other => Err(Usage(format!(
            "unknown claim kind {other:?} (expected star, wstar, diamond, wdiamond, eps)"
        ))),
    }
}

fn outcome_code(o: Outcome) -> u8 {
    match o {
        Outcome::Proven => 0,
        Outcome::Refuted => 1,
        Outcome::Undecided => 2,
    }
}

/// Human summary to one stream, JSON report to --out or the other stream.
fn emit(report: &Report, human: &str, out: Option<&PathBuf>, code: u8) -> ExitCode {
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, report.to_json()) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(3);
            }
            println!("{human}");
        }
        None => {
            eprintln!("{human}");
            println!("{}", report.to_json());
        }
    }
    ExitCode::from(code)
}

fn fill_verdict(report: &mut Report, v: &Verdict) {
    report.verdict = Some(v.outcome);
    report.reason = v.reason.clone();
    if let Some(sp) = &v.spectrum {
        report.spectrum = Some(sp.values.iter().map(ValueOut::of).collect());
        report.spectrum_complete = Some(sp.complete);
    }
    report.solutions = v.witness.as_ref().map(|w| vec![SolutionOut::of(w)]);
}

fn embed_config(report: &mut Report, cfg: &Configuration) {
    report.configuration =
        Some(serde_json::from_str(&cfg.to_json()).expect("configuration JSON is valid"));
}

fn verdict_summary(v: &Verdict, claim: &Claim) -> String {
    let mut s = format!("{}: {:?}", claim.describe(), v.outcome);
    if let Some(r) = &v.reason {
        s.push_str(&format!(" ({r})"));
    }
    if let Some(sp) = &v.spectrum {
        s.push_str(&format!(
            "\nspectrum = {{{}}}{}",
            sp.render().join(", "),
            if sp.complete { "" } else { " (incomplete)" }
        ));
    }
    s
}

fn run(cli: Cli) -> Result<ExitCode, Usage> {
    match cli.cmd {
        Cmd::Validate { common } => {
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("validate");
            manifest.set("precision", bits);
            let cfg = load(&common.input, bits, &mut manifest)?;
            let vr = cfg.validate();
            let ok = vr.is_valid();
            let human = if ok {
                format!("valid: {} points, {} unit edges", cfg.points.len(), cfg.unit_edges.len())
            } else {
                format!("invalid: {}", vr.summary())
            };
            let mut report = Report::new(manifest);
            report.validation = Some(vr);
            Ok(emit(&report, &human, common.out.as_ref(), u8::from(!ok)))
        }
        Cmd::Enumerate { common } => {
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("enumerate");
            manifest.set("precision", bits);
            let cfg = load(&common.input, bits, &mut manifest)?;
            let mut report = Report::new(manifest);
            match enumerate_config(&cfg) {
                Ok(e) => {
                    report.solution_count = Some(e.solutions.len());
                    report.stats = Some(e.stats);
                    report.solutions = Some(e.solutions.iter().map(SolutionOut::of).collect());
                    let human = format!(
                        "{} solution(s), enumeration {}",
                        e.solutions.len(),
                        if e.complete { "complete" } else { "incomplete" }
                    );
                    Ok(emit(&report, &human, common.out.as_ref(), u8::from(!e.complete) * 2))
                }
                Err(EnumError::Invalid(m)) => Err(Usage(m)),
                Err(e) => {
                    report.reason = Some(format!("{e:?}"));
                    Ok(emit(&report, &format!("enumeration failed: {e:?}"), common.out.as_ref(), 2))
                }
            }
        }
        Cmd::Spectrum { common, pair } => {
            let labels = split_labels(&pair, 2, "--pair")?;
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("spectrum");
            manifest.set("precision", bits);
            manifest.set("pair", &pair);
            let cfg = load(&common.input, bits, &mut manifest)?;
            let sp = spectrum(&cfg, &labels[0], &labels[1]).map_err(|e| Usage(format!("{e:?}")))?;
            let mut report = Report::new(manifest);
            report.spectrum = Some(sp.values.iter().map(ValueOut::of).collect());
            report.spectrum_complete = Some(sp.complete);
            let human = format!(
                "spectrum({}, {}) = {{{}}}{}",
                labels[0],
                labels[1],
                sp.render().join(", "),
                if sp.complete { "" } else { " (incomplete)" }
            );
            Ok(emit(&report, &human, common.out.as_ref(), u8::from(!sp.complete) * 2))
        }
        Cmd::Verify { common, claim } => {
            let claim = parse_claim(&claim)?;
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("verify");
            manifest.set("precision", bits);
            manifest.set("claim", claim.describe());
            let cfg = load(&common.input, bits, &mut manifest)?;
            let v = verify(&cfg, &claim)?;
            let mut report = Report::new(manifest);
            report.claim = Some(claim.describe());
            fill_verdict(&mut report, &v);
            Ok(emit(&report, &verdict_summary(&v, &claim), common.out.as_ref(), outcome_code(v.outcome)))
        }
        Cmd::Refute { common, claim, seed, restarts } => {
            let claim = parse_claim(&claim)?;
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("refute");
            manifest.set("precision", bits);
            manifest.set("claim", claim.describe());
            manifest.set("seed", seed);
            manifest.set("restarts", restarts);
            let cfg = load(&common.input, bits, &mut manifest)?;
            let params = RefuterParams { seed, restarts, ..RefuterParams::default() };
            let v = refute(&cfg, &claim, &params)?;
            let mut report = Report::new(manifest);
            report.claim = Some(claim.describe());
            fill_verdict(&mut report, &v);
            Ok(emit(&report, &verdict_summary(&v, &claim), common.out.as_ref(), outcome_code(v.outcome)))
        }
        Cmd::Build { gadget, input, pair, side, n, eps, precision, out } => {
            let bits = precision_bits(precision);
            let mut manifest = RunManifest::new("build");
            manifest.set("precision", bits);
            let need_pair = |pair: &Option<String>| -> Result<Vec<String>, Usage> {
                split_labels(pair.as_deref().ok_or(Usage("--pair is required".into()))?, 2, "--pair")
            };
            let need_input = |input: &Option<PathBuf>, m: &mut RunManifest| -> Result<Configuration, Usage> {
                load(input.as_ref().ok_or(Usage("an input configuration is required".into()))?, bits, m)
            };
            let built = match gadget {
                Gadget::Triangle => {
                    manifest.set("gadget", "triangle");
                    let l = need_pair(&pair)?;
                    let host = need_input(&input, &mut manifest)?;
                    let s = match side { SideArg::Up => Side::Up, SideArg::Down => Side::Down };
                    attach_triangle(&host, &l[0], &l[1], s).map(|(c, _)| c)
                }
                Gadget::Rhombus => {
                    manifest.set("gadget", "rhombus");
                    let l = need_pair(&pair)?;
                    let host = need_input(&input, &mut manifest)?;
                    attach_rhombus(&host, &l[0], &l[1]).map(|(c, _, _)| c)
                }
                Gadget::Chain => {
                    manifest.set("gadget", "chain");
                    let l = need_pair(&pair)?;
                    let k = n.ok_or(Usage("--N (chain length) is required".into()))?;
                    manifest.set("N", k);
                    let host = need_input(&input, &mut manifest)?;
                    build_chain(&host, &l[0], &l[1], k).map(|(c, _)| c)
                }
                Gadget::Spindle => {
                    manifest.set("gadget", "spindle");
                    Ok(build_spindle())
                }
                Gadget::Epsilon => {
                    manifest.set("gadget", "epsilon");
                    let l = need_pair(&pair)?;
                    let e = CReal::parse(eps.as_deref().ok_or(Usage("--eps is required".into()))?)?;
                    manifest.set("eps", e.expr().to_string());
                    let host = need_input(&input, &mut manifest)?;
                    build_epsilon_witness(&host, &l[0], &l[1], &e)
                }
            };
            let mut report = Report::new(manifest);
            match built {
                Ok(cfg) => {
                    embed_config(&mut report, &cfg);
                    let human = format!(
                        "built configuration: {} points, {} unit edges",
                        cfg.points.len(),
                        cfg.unit_edges.len()
                    );
                    Ok(emit(&report, &human, out.as_ref(), 0))
                }
                Err(e) => {
                    report.reason = Some(e.to_string());
                    Ok(emit(&report, &format!("construction failed: {e}"), out.as_ref(), 2))
                }
            }
        }
        Cmd::Strengthen { common, claim } => {
            let claim = parse_claim(&claim)?;
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("strengthen");
            manifest.set("precision", bits);
            manifest.set("claim", claim.describe());
            let cfg = load(&common.input, bits, &mut manifest)?;
            let mut builder = EpsilonBuilder;
            let result = match &claim {
                Claim::Distance { x, y, .. } => strengthen_star(&cfg, x, y, &mut builder),
                Claim::Congruence { k, l, m, n, .. } => {
                    strengthen_diamond(&cfg, k, l, m, n, &mut builder)
                }
                Claim::Epsilon { .. } => {
                    return Err(Usage("strengthen takes a star or diamond claim".into()))
                }
            };
            let mut report = Report::new(manifest);
            report.claim = Some(claim.describe());
            match result {
                Ok(s) => {
                    let human = format!(
                        "strengthened: {} kits adjoined, {} points total",
                        s.kits.len(),
                        s.config.points.len()
                    );
                    report.kits = Some(s.kits);
                    embed_config(&mut report, &s.config);
                    Ok(emit(&report, &human, common.out.as_ref(), 0))
                }
                Err(e) => {
                    report.reason = Some(e.to_string());
                    Ok(emit(&report, &format!("strengthening failed: {e}"), common.out.as_ref(), 2))
                }
            }
        }
        Cmd::Closure { common, n, budget } => {
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("closure");
            manifest.set("precision", bits);
            manifest.set("N", n);
            manifest.set("budget", budget);
            let cfg = load(&common.input, bits, &mut manifest)?;
            let mut report = Report::new(manifest);
            match constructible_closure(&cfg, n, budget) {
                Ok(points) => {
                    let human = format!("closure depth {n}: {} new point(s)", points.len());
                    let mut extended = cfg.clone();
                    extended.points.extend(points);
                    embed_config(&mut report, &extended);
                    Ok(emit(&report, &human, common.out.as_ref(), 0))
                }
                Err(e) => {
                    report.reason = Some(e.to_string());
                    Ok(emit(&report, &format!("closure failed: {e}"), common.out.as_ref(), 2))
                }
            }
        }
        Cmd::Search { common, pair, budget, n } => {
            let labels = split_labels(&pair, 2, "--pair")?;
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("search");
            manifest.set("precision", bits);
            manifest.set("pair", &pair);
            manifest.set("budget", budget);
            manifest.set("N", n);
            let cfg = load(&common.input, bits, &mut manifest)?;
            let budget = SearchBudget { max_points: n, max_configs: budget };
            let mut report = Report::new(manifest);
            match search_witness(&cfg, &labels[0], &labels[1], &budget) {
                Ok(SearchOutcome::Found(found)) => {
                    embed_config(&mut report, &found);
                    let human = format!(
                        "witness found: {} points, {} unit edges",
                        found.points.len(),
                        found.unit_edges.len()
                    );
                    Ok(emit(&report, &human, common.out.as_ref(), 0))
                }
                Ok(SearchOutcome::Exhausted { best }) => {
                    if let Some(sp) = &best {
                        report.spectrum = Some(sp.values.iter().map(ValueOut::of).collect());
                        report.spectrum_complete = Some(sp.complete);
                    }
                    report.reason = Some("search budget exhausted".to_string());
                    Ok(emit(&report, "search budget exhausted", common.out.as_ref(), 2))
                }
                Err(e) => {
                    report.reason = Some(e.to_string());
                    Ok(emit(&report, &format!("search failed: {e}"), common.out.as_ref(), 2))
                }
            }
        }
        Cmd::Congruence { common, n, denominator_bound, labels } => {
            let bits = precision_bits(common.precision);
            let mut manifest = RunManifest::new("congruence");
            manifest.set("precision", bits);
            manifest.set("N", n);
            manifest.set("denominator_bound", denominator_bound);
            let cfg = load(&common.input, bits, &mut manifest)?;
            let names = match &labels {
                Some(s) => split_labels(s, 4, "--labels")?,
                None => {
                    if cfg.points.len() < 4 {
                        return Err(Usage(format!(
                            "congruence needs 4 points, file has {}",
                            cfg.points.len()
                        )));
                    }
                    cfg.points[..4].iter().map(|p| p.label.clone()).collect()
                }
            };
            manifest.set("labels", names.join(","));
            let pick = |l: &str| {
                cfg.point(l)
                    .map(|p| p.clone())
                    .map_err(|e| Usage(format!("{e}")))
            };
            let query = TruncationQuery {
                a: pick(&names[0])?,
                b: pick(&names[1])?,
                c: pick(&names[2])?,
                d: pick(&names[3])?,
                n_max: n,
                denominator_bound,
            };
            let closed = truncated_equiv_closed_form(&query)?;
            let search = truncated_equiv_search(&query)?;
            let mut rows = Vec::new();
            let mut table = format!("{:>3}  {:<9} {:<7} r", "n", "closed", "search");
            for ((level, cv), sl) in closed.levels.iter().zip(&search) {
                let witness_r = sl.witness.as_ref().map(|w| w.r.to_string());
                table.push_str(&format!(
                    "\n{:>3}  {:<9} {:<7} {}",
                    level,
                    format!("{cv:?}").to_lowercase(),
                    if sl.holds { "holds" } else { "fails" },
                    witness_r.as_deref().unwrap_or("-")
                ));
                rows.push(CongruenceRow {
                    n: *level,
                    closed_form: *cv,
                    search_holds: Some(sl.holds),
                    false_by_search: Some(sl.false_by_search),
                    witness_r,
                });
            }
            let mut report = Report::new(manifest);
            report.congruence = Some(rows);
            let code = match closed.overall {
                Verdict3::Holds => 0,
                Verdict3::Fails => 1,
                Verdict3::Undecided => 2,
            };
            let human = format!(
                "truncated congruence through N = {n}: {:?}\n{table}",
                closed.overall
            );
            Ok(emit(&report, &human, common.out.as_ref(), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
