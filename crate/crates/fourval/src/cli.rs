//! Command-line front end. Data goes to stdout (human table, JSON, or CSV);
//! diagnostics and progress go to stderr. Exit codes: 0 success/match,
//! 1 verification mismatch, 2 usage error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::affine;
use crate::bpoly;
use crate::error::Result;
use crate::expsum::{self, ExpSumContext};
use crate::field::{Elem, Field, TowerParams};
use crate::linzero;
use crate::seq::{self, ExpSumTables, SeqPair, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "fourval", version, about = "four-valued cross-correlation of m-sequence pairs over binary field towers")]
pub struct Cli {
    /// Worker threads for sweeps (default: FOURVAL_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TowerArgs {
    /// Odd tower degree n >= 3.
    #[arg(long)]
    n: u32,
    /// Base field degree k >= 1; m = 2nk.
    #[arg(long)]
    k: u32,
    /// Override the primitive modulus for GF(2^m), as an integer.
    #[arg(long)]
    modulus: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Show the field and tower parameters.
    FieldInfo {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Measure a cross-correlation spectrum.
    Spectrum {
        /// Odd tower degree n (with --k; d is then derived).
        #[arg(long, conflicts_with_all = ["m", "d"], requires = "k")]
        n: Option<u32>,
        #[arg(long, requires = "n")]
        k: Option<u32>,
        /// Raw field degree m (with --d).
        #[arg(long, requires = "d")]
        m: Option<u32>,
        /// Raw decimation d (with --m).
        #[arg(long, requires = "m")]
        d: Option<u64>,
        #[arg(long)]
        modulus: Option<u32>,
        /// Also emit the predicted distribution and a match verdict.
        #[arg(long)]
        predict: bool,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Classify every a by the zero count of the affine polynomial.
    Classify {
        #[command(flatten)]
        tower: TowerArgs,
        /// Emit one JSON line per a with zeros and traces.
        #[arg(long)]
        detail: bool,
    },
    /// Sweep decimations of GF(2^m) and flag four-valued spectra.
    Search {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d_min: Option<u64>,
        #[arg(long)]
        d_max: Option<u64>,
        #[arg(long)]
        modulus: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Run the full verification suite.
    Verify {
        #[command(flatten)]
        tower: TowerArgs,
    },
    /// Time the main computation paths.
    Bench {
        #[command(flatten)]
        tower: TowerArgs,
    },
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("FOURVAL_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::FieldInfo { tower, format } => cmd_field_info(tower, format),
        Command::Spectrum { n, k, m, d, modulus, predict, format } => {
            cmd_spectrum(n, k, m, d, modulus, predict, format)
        }
        Command::Classify { tower, detail } => cmd_classify(tower, detail),
        Command::Search { m, d_min, d_max, modulus, format } => {
            cmd_search(m, d_min, d_max, modulus, format)
        }
        Command::Verify { tower } => cmd_verify(tower),
        Command::Bench { tower } => cmd_bench(tower),
    }
}

fn cmd_field_info(tower: TowerArgs, format: Format) -> Result<ExitCode> {
    let tp = TowerParams::new(tower.n, tower.k)?;
    let field = Field::for_tower(&tp, tower.modulus)?;
    let info = json!({
        "n": tp.n,
        "k": tp.k,
        "m": tp.m,
        "period": field.p(),
        "half_period": (1u64 << tp.nk()) - 1,
        "d": tp.d,
        "modulus": format!("{:#x}", field.modulus()),
        "alpha": field.to_hex(field.alpha()),
        "subfield_degrees": [tp.k, 2 * tp.k, tp.nk(), tp.m],
        "degenerate_k1": tp.degenerate_k1,
    });
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&info).unwrap()),
        _ => {
            println!("tower      GF(2^{}) < GF(2^{}) < GF(2^{})", tp.k, tp.nk(), tp.m);
            println!("modulus    {:#x}", field.modulus());
            println!("period     {}", field.p());
            println!("decimation {}", tp.d);
            if tp.degenerate_k1 {
                println!("note       k=1: three-valued regime");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_spectrum(label: &str, spectrum: &Spectrum, format: Format) {
    match format {
        Format::Human => {
            println!("{label} (m={}, d={}):", spectrum.m, spectrum.d);
            for (value, count) in &spectrum.entries {
                println!("  {value:>8}  x{count}");
            }
        }
        Format::Json => println!("{}", spectrum.to_json()),
        Format::Csv => print!("{}", spectrum.to_csv()),
    }
}

fn cmd_spectrum(
    n: Option<u32>,
    k: Option<u32>,
    m: Option<u32>,
    d: Option<u64>,
    modulus: Option<u32>,
    predict: bool,
    format: Format,
) -> Result<ExitCode> {
    let (field, d, tp) = match (n, k, m, d) {
        (Some(n), Some(k), _, _) => {
            let tp = TowerParams::new(n, k)?;
            let field = Field::for_tower(&tp, modulus)?;
            (field, tp.d as u64, Some(tp))
        }
        (_, _, Some(m), Some(d)) => (Field::new(m, modulus)?, d, None),
        _ => {
            eprintln!("error: pass either --n/--k or --m/--d");
            return Ok(ExitCode::from(2));
        }
    };
    let measured = SeqPair::new(&field, d)?.spectrum_direct();
    emit_spectrum("measured", &measured, format);
    if !predict {
        return Ok(ExitCode::SUCCESS);
    }
    let Some(tp) = tp else {
        eprintln!("error: --predict needs --n/--k");
        return Ok(ExitCode::from(2));
    };
    let predicted = if tp.degenerate_k1 {
        expsum::k1_spectrum(&tp)?
    } else {
        expsum::predicted_spectrum(&tp)?
    };
    emit_spectrum("predicted", &predicted, format);
    let matched = measured.same_values(&predicted);
    match format {
        Format::Human => println!("match: {matched}"),
        Format::Json => println!("{}", json!({ "match": matched })),
        Format::Csv => println!("match,{matched}"),
    }
    Ok(if matched { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_classify(tower: TowerArgs, detail: bool) -> Result<ExitCode> {
    let ctx = ExpSumContext::new(tower.n, tower.k, tower.modulus)?;
    let (field, tp) = (&ctx.field, &ctx.tp);
    let counts = affine::classify_all(field, tp)?;
    if detail {
        for a in field.subfield_units(tp.nk())? {
            let report = affine::classify_a(field, tp, a, ctx.c)?;
            let line = json!({
                "a": field.to_hex(a),
                "class": report.zero_class,
                "zeros": report.zeros.iter().map(|&z| field.to_hex(z)).collect::<Vec<_>>(),
                "traces": report.traces,
            });
            println!("{line}");
        }
    }
    println!(
        "{}",
        json!({
            "n": tp.n,
            "k": tp.k,
            "counts": counts,
            "expected": affine::expected_class_counts(tp),
        })
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(
    m: u32,
    d_min: Option<u64>,
    d_max: Option<u64>,
    modulus: Option<u32>,
    format: Format,
) -> Result<ExitCode> {
    let field = Field::new(m, modulus)?;
    if !m.is_multiple_of(2) {
        eprintln!("error: search needs even m");
        return Ok(ExitCode::from(2));
    }
    let q1 = (1u64 << (m / 2)) - 1;
    let lo = d_min.unwrap_or(1);
    let hi = d_max.unwrap_or(q1 - 1);
    eprintln!("searching d = {lo}..={hi} at m = {m}");
    let entries = seq::decimation_search(&field, lo..=hi)?;
    match format {
        Format::Human => {
            println!("{:>8} {:>8} {:>9} {:>12} tower", "d", "coprime", "values", "four-valued");
            for e in &entries {
                let tower = e
                    .tower_match
                    .map(|(n, k)| format!("(n,k)=({n},{k})"))
                    .unwrap_or_default();
                println!(
                    "{:>8} {:>8} {:>9} {:>12} {tower}",
                    e.d, e.coprime, e.distinct_values, e.four_valued
                );
            }
        }
        Format::Json => {
            for e in &entries {
                println!("{}", serde_json::to_string(e).unwrap());
            }
        }
        Format::Csv => {
            println!("d,coprime,distinct_values,four_valued,tower_n,tower_k");
            for e in &entries {
                let (tn, tk) = e
                    .tower_match
                    .map(|(n, k)| (n.to_string(), k.to_string()))
                    .unwrap_or_default();
                println!("{},{},{},{},{tn},{tk}", e.d, e.coprime, e.distinct_values, e.four_valued);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name, pass, detail: detail.into() }
}

/// Every module-level claim in one sweep. Exhaustive where the field is
/// small, deterministic stride samples where it is not.
fn cmd_verify(tower: TowerArgs) -> Result<ExitCode> {
    if 2 * tower.n * tower.k > 20 {
        eprintln!("warning: m = {} exceeds the comfortable runtime budget", 2 * tower.n * tower.k);
    }
    let started = std::time::Instant::now();
    let ctx = ExpSumContext::new(tower.n, tower.k, tower.modulus)?;
    let (field, tp) = (&ctx.field, &ctx.tp);
    let mut checks: Vec<CheckResult> = Vec::new();

    let units: Vec<Elem> = field.subfield_units(tp.nk())?.collect();
    let sample: Vec<Elem> = units.iter().copied().step_by(units.len().div_ceil(128)).collect();

    eprintln!("[1/9] recurrence and zero counts");
    let rec_ok = units.iter().all(|&a| {
        (1..=tp.n + 1).all(|i| {
            bpoly::b_eval(field, tp, a, i).unwrap() == bpoly::b_eval_alt(field, tp, a, i).unwrap()
        })
    });
    checks.push(check("recurrence_equivalence", rec_ok, "dB1 == dB2 on all a"));
    let zc = bpoly::zero_counts(field, tp)?;
    let zc_expected = bpoly::expected_zero_counts(tp);
    checks.push(check("zero_counts", zc == zc_expected, format!("{zc:?} vs {zc_expected:?}")));

    eprintln!("[2/9] trace identities");
    let sets = bpoly::ZeroSets::build(field, tp)?;
    let ti_ok = sets
        .zn
        .iter()
        .filter(|a| !sets.bn.contains(a))
        .all(|&a| bpoly::trace_identities_check(field, tp, a).unwrap());
    let tr_bnzn = units.iter().all(|&a| {
        let s = field.add(
            bpoly::b_eval(field, tp, a, tp.n).unwrap(),
            bpoly::z_eval(field, tp, a).unwrap(),
        );
        field.trace_between(s, tp.k, tp.nk()).unwrap() == Elem::ZERO
    });
    checks.push(check("trace_identities", ti_ok && tr_bnzn, "V-form points and Tr(B_n+Z_n)=0"));

    eprintln!("[3/9] determinant identities");
    let det_ok = sample.iter().all(|&a| {
        bpoly::det_check_mn(field, tp, a).unwrap()
            && (1..=1u32 << tp.k).all(|i| {
                let r_i = field.pow(ctx.r, linzero::d_shift(tp.k, i));
                bpoly::det_check_mn_prime(field, tp, r_i, a).unwrap()
            })
    });
    checks.push(check("determinant_identities", det_ok, format!("{} sampled a", sample.len())));

    eprintln!("[4/9] affine classification vs brute force");
    let affine_sample: &[Elem] = if tp.nk() <= 8 { &units } else { &sample };
    let aff_ok = affine_sample.par_iter().all(|&a| {
        let report = affine::classify_a(field, tp, a, ctx.c).unwrap();
        report.zeros == affine::brute_zeros_a(field, tp, a, ctx.c).unwrap()
            && affine::trace_pattern_check(field, tp, &report).unwrap()
    });
    let class_counts = affine::classify_all(field, tp)?;
    let class_ok = class_counts == affine::expected_class_counts(tp);
    checks.push(check(
        "affine_classification",
        aff_ok && class_ok,
        format!("counts {class_counts:?}, {} a against oracle", affine_sample.len()),
    ));

    eprintln!("[5/9] Bluher counts");
    let bluher = affine::bluher_counts(field, tp)?;
    let bluher_ok = bluher == affine::expected_bluher_counts(tp)
        && bluher.n0 == class_counts.one
        && bluher.n_2k_minus_1 == class_counts.two_k
        && bluher.n_22k_minus_1 == class_counts.two_2k;
    checks.push(check("bluher_counts", bluher_ok, format!("{bluher:?}")));

    eprintln!("[6/9] linearized kernels");
    let lin_ok = units.par_iter().all(|&a| {
        (1..=1u32 << tp.k).all(|i| {
            let t = linzero::t_a(field, tp, a, ctx.r, i).unwrap();
            (t == 1 || t == 1 << (2 * tp.k))
                && linzero::verify_y_dichotomy(field, tp, ctx.delta, a, ctx.r, i).unwrap()
                && linzero::q_invariant_check(field, tp, a, ctx.r, i).unwrap()
        })
    });
    let closure_ok = sample.par_iter().all(|&a| {
        let matrix = linzero::build_linear_map(field, tp, a, ctx.r).unwrap();
        let kernel = linzero::kernel_elements(field, &matrix);
        kernel.iter().all(|&v| {
            field
                .subfield_iter(2 * tp.k)
                .unwrap()
                .all(|s| kernel.binary_search(&field.mul(s, v)).is_ok())
        })
    });
    checks.push(check("linearized_kernels", lin_ok && closure_ok, "dichotomy, Q-invariant, closure"));

    eprintln!("[7/9] S_0 cross-check");
    let s0_ok = units
        .par_iter()
        .all(|&a| ctx.s0_direct(a).unwrap() == ctx.s0_via_affine(a).unwrap());
    checks.push(check("s0_cross_check", s0_ok, "direct == via affine zeros, all a"));

    eprintln!("[8/9] S_i laws");
    let si_ok = units.par_iter().all(|&a| {
        let s_i: Vec<i64> = (1..=1u32 << tp.k)
            .map(|i| ctx.s_i_direct(a, i).unwrap())
            .collect();
        (1..=1usize << (tp.k - 1)).all(|j| s_i[j - 1] == s_i[(1 << tp.k) - j])
            && (1..=1u32 << tp.k).all(|i| {
                let t = linzero::t_a(field, tp, a, ctx.r, i).unwrap();
                let si = s_i[(i - 1) as usize];
                si * si == (1i64 << tp.m) * t as i64
            })
    });
    checks.push(check("s_i_laws", si_ok, "symmetry and square law, all (a, i)"));

    eprintln!("[9/9] distribution");
    let report = expsum::verify_distribution(&ctx)?;
    checks.push(check(
        "distribution",
        report.ok,
        report.first_mismatch.clone().unwrap_or_else(|| "predicted == measured == resolved".into()),
    ));
    checks.push(check(
        "power_sum",
        seq::power_sum_check(&report.measured_sequence),
        "sum of C over all shifts is 1",
    ));

    let all_pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let payload = json!({
        "n": tp.n,
        "k": tp.k,
        "checks": checks,
        "report": report,
        "ok": all_pass,
        "wall_ms": started.elapsed().as_millis() as u64,
    });
    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_bench(tower: TowerArgs) -> Result<ExitCode> {
    use std::time::Instant;
    let mut rows: Vec<(String, u128)> = Vec::new();

    let t = Instant::now();
    let ctx = ExpSumContext::new(tower.n, tower.k, tower.modulus)?;
    rows.push(("context (field + trace tables)".into(), t.elapsed().as_millis()));

    let t = Instant::now();
    let pair = SeqPair::new(&ctx.field, ctx.tp.d as u64)?;
    rows.push(("sequence pair".into(), t.elapsed().as_millis()));

    let t = Instant::now();
    let direct = pair.spectrum_direct();
    rows.push((format!("spectrum, sequence path ({} shifts)", direct.total()), t.elapsed().as_millis()));

    let t = Instant::now();
    let via_s = ExpSumTables::new(&ctx.field, ctx.tp.d as u64)?.spectrum()?;
    rows.push((format!("spectrum, S(a) path ({} args)", via_s.total()), t.elapsed().as_millis()));

    let t = Instant::now();
    let decomps = ctx.sweep()?;
    rows.push((format!("full S decomposition sweep ({} args)", decomps.len()), t.elapsed().as_millis()));

    for (label, ms) in rows {
        println!("{ms:>8} ms  {label}");
    }
    Ok(ExitCode::SUCCESS)
}
