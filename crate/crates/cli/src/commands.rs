use std::collections::BTreeSet;
use std::fs;
use std::ops::Range;
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use ttlab::ershov::{
    classify_ce_level, decompose_even, decompose_odd, decompose_omega, CeLevelReport, Delta2Approx, OddDecomposition,
    StageSetFamily,
};
use ttlab::formulas::ReductionClass;
use ttlab::hammers::adversary::{adversary_for, AdversaryConfig, AdversaryOutcome};
use ttlab::hammers::corpus::{generate, CorpusEntry};
use ttlab::hammers::{recheck_triggers, suffix_agrees, switching_reduction, Arity, SwitchTrace};
use ttlab::randomness::{dimension_profile, DimensionReport};
use ttlab::reductions::{ClassCheck, WttCheck};
use ttlab::streams::{Family, FamilyDesc};
use ttlab::util::{bits_from_str, bits_to_string};
use ttlab::{BitStream, EstimatorSpec, IndexSet, TTReduction, UseBound};

use crate::config::ExperimentConfig;
use crate::io::{json_arg, load_reduction, parse_range, OutDir};
use crate::Status;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Decomposition {
    Even { k: u64, family: StageSetFamily },
    Odd { k: u64, split: OddDecomposition },
    Omega { family: StageSetFamily },
}

/// Self-contained record of a run, re-checkable with `ttlab verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "artifact", rename_all = "snake_case")]
pub enum Certificate {
    Stream {
        stream: BitStream,
        n: u64,
        /// Bit file, relative to the certificate.
        bits_file: String,
    },
    Reduce {
        reduction: TTReduction,
        oracle: BitStream,
        n: u64,
        bits: String,
        class_check: ClassCheck,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        wtt: Option<(UseBound, WttCheck)>,
    },
    Switch {
        family: FamilyDesc,
        estimator: EstimatorSpec,
        trace: SwitchTrace,
    },
    Adversary {
        reduction: TTReduction,
        config: AdversaryConfig,
        outcome: AdversaryOutcome,
    },
    Dims {
        stream: BitStream,
        estimator: EstimatorSpec,
        family: Vec<IndexSet>,
        report: DimensionReport,
    },
    Ershov {
        approx: Delta2Approx,
        xs: Range<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<UseBound>,
        report: CeLevelReport,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decomposition: Option<Decomposition>,
    },
}

fn open(cfg: &ExperimentConfig) -> Result<OutDir> {
    let out = OutDir::create(&cfg.out)?;
    out.json("config.json", cfg)?;
    Ok(out)
}

pub fn reduction_from(path: Option<&str>, template: Option<&str>, class: Option<ReductionClass>) -> Result<TTReduction> {
    match (path, template) {
        (Some(p), None) => load_reduction(p, class),
        (None, Some(t)) => {
            let class = class.ok_or_else(|| anyhow!("--class is required with --template"))?;
            Ok(TTReduction::from_template(t, class)?)
        }
        _ => bail!("give exactly one of --reduction and --template"),
    }
}

pub fn gen(cfg: &ExperimentConfig, stream: &str, n: Option<u64>) -> Result<Status> {
    let stream: BitStream = json_arg(stream)?;
    let n = n.unwrap_or(cfg.horizon);
    let bits = stream.prefix(n)?;
    let out = open(cfg)?;
    out.text("bits.txt", &(bits_to_string(&bits) + "\n"))?;
    out.json(
        "stream.json",
        &Certificate::Stream {
            stream,
            n,
            bits_file: "bits.txt".into(),
        },
    )?;
    println!("wrote {n} bits to {}", out.path("bits.txt").display());
    Ok(Status::Ok)
}

/// Row values evaluated without the class check, so violating rows can
/// still be reported.
fn reduce_outputs(r: &TTReduction, oracle: &BitStream, n: u64) -> Result<Vec<bool>> {
    (0..n).map(|i| Ok(r.row(i)?.evaluate(oracle)?)).collect()
}

pub fn reduce(cfg: &ExperimentConfig, r: &TTReduction, oracle: &str, bound: Option<&str>, n: Option<u64>) -> Result<Status> {
    let oracle: BitStream = json_arg(oracle)?;
    let n = n.unwrap_or(cfg.horizon).min(r.horizon().unwrap_or(u64::MAX));
    ensure!(n > 0, "nothing to evaluate");
    let bits = reduce_outputs(r, &oracle, n)?;
    let class_check = r.verify_class(n - 1)?;
    let wtt = match bound {
        Some(b) => {
            let b: UseBound = json_arg(b)?;
            let check = r.check_wtt(&b, n - 1)?;
            Some((b, check))
        }
        None => None,
    };
    let out = open(cfg)?;
    let mut w = out.csv("rows.csv")?;
    w.write_record(["n", "bit", "queries", "formula"])?;
    for (i, &b) in bits.iter().enumerate() {
        let q: Vec<String> = r.query_set(i as u64)?.iter().map(u64::to_string).collect();
        w.write_record([i.to_string(), u8::from(b).to_string(), q.join(" "), r.row(i as u64)?.to_string()])?;
    }
    w.flush()?;
    if let Some((_, WttCheck { first_violation: Some(v), .. })) = &wtt {
        println!("row {v} exceeds the use bound");
    }
    let violation = class_check.counterexample;
    out.json(
        "reduce.json",
        &Certificate::Reduce {
            reduction: r.clone(),
            oracle,
            n,
            bits: bits_to_string(&bits),
            class_check,
            wtt,
        },
    )?;
    if let Some(bad) = violation {
        bail!("row {bad} is not {}: {}", r.declared_class, r.row(bad)?);
    }
    Ok(Status::Ok)
}

fn parse_arity(text: &str) -> Result<Arity> {
    if text.eq_ignore_ascii_case("omega") {
        return Ok(Arity::Omega);
    }
    let a: u64 = text.parse().with_context(|| format!("arity must be a number or omega, got {text:?}"))?;
    ensure!(a > 0, "arity must be positive");
    Ok(Arity::Finite(a))
}

pub fn switch(cfg: &ExperimentConfig, family: &str, arity: &str) -> Result<Status> {
    let desc: FamilyDesc = json_arg(family)?;
    let fam = Family::from_desc(&desc)?;
    let e = cfg.estimator.build()?;
    let run = switching_reduction(&fam, parse_arity(arity)?, e.as_ref(), cfg.horizon)?;
    let out = open(cfg)?;
    let mut w = out.csv("events.csv")?;
    for ev in &run.trace.events {
        w.serialize(ev)?;
    }
    w.flush()?;
    out.text("output.txt", &(bits_to_string(&run.output.prefix(cfg.horizon)?) + "\n"))?;
    println!(
        "{} switches; settled on column {} from stage {}",
        run.trace.events.len(),
        run.trace.final_column,
        run.trace.settled_from()
    );
    out.json(
        "switch.json",
        &Certificate::Switch {
            family: desc,
            estimator: cfg.estimator.clone(),
            trace: run.trace,
        },
    )?;
    Ok(Status::Ok)
}

fn outcome_status(o: &AdversaryOutcome) -> Status {
    match o {
        AdversaryOutcome::Witness(_) => Status::Ok,
        AdversaryOutcome::Inconclusive { .. } => Status::Inconclusive,
    }
}

pub fn adversary(cfg: &ExperimentConfig, r: &TTReduction) -> Result<Status> {
    let acfg = cfg.adversary();
    let outcome = adversary_for(r, &acfg)?;
    let out = open(cfg)?;
    let mut w = out.csv("witness.csv")?;
    w.write_record(["row", "forced"])?;
    match &outcome {
        AdversaryOutcome::Witness(wit) => {
            for n in &wit.witness {
                w.write_record([n.to_string(), u8::from(wit.forced).to_string()])?;
            }
            println!("{} witness rows forced to {}", wit.witness.len(), u8::from(wit.forced));
        }
        AdversaryOutcome::Inconclusive { reason } => println!("inconclusive: {reason}"),
    }
    w.flush()?;
    let status = outcome_status(&outcome);
    out.json(
        "adversary.json",
        &Certificate::Adversary {
            reduction: r.clone(),
            config: acfg,
            outcome,
        },
    )?;
    Ok(status)
}

pub fn dims(cfg: &ExperimentConfig, stream: &str, family: Option<&str>) -> Result<Status> {
    let stream: BitStream = json_arg(stream)?;
    let family: Vec<IndexSet> = match family {
        Some(f) => json_arg(f)?,
        None => vec![IndexSet::tail(1)],
    };
    let e = cfg.estimator.build()?;
    let report = dimension_profile(e.as_ref(), &stream, cfg.horizon, &family)?;
    let out = open(cfg)?;
    report.write_profile_csv(fs::File::create(out.path("profile.csv")).context("writing profile.csv")?)?;
    let mut w = out.csv("dims.csv")?;
    w.write_record(["dimension", "value"])?;
    for (name, v) in [
        ("hausdorff", report.hausdorff),
        ("complex_packing", report.complex_packing),
        ("inescapable", report.inescapable),
        ("packing", report.packing),
    ] {
        w.write_record([name.to_string(), v.to_string()])?;
    }
    w.flush()?;
    println!(
        "hausdorff {} complex_packing {} inescapable {} packing {}",
        report.hausdorff, report.complex_packing, report.inescapable, report.packing
    );
    out.json(
        "dims.json",
        &Certificate::Dims {
            stream,
            estimator: cfg.estimator.clone(),
            family,
            report,
        },
    )?;
    Ok(Status::Ok)
}

fn load_approx(arg: &str, stage_horizon: u64) -> Result<Delta2Approx> {
    let a = if arg.ends_with(".csv") {
        let f = fs::File::open(arg).with_context(|| format!("opening {arg}"))?;
        Delta2Approx::from_csv(f, stage_horizon)?
    } else {
        json_arg(arg)?
    };
    a.validate()?;
    Ok(a)
}

fn decompose(a: &Delta2Approx, method: &str, xs: Range<u64>, upto: u64) -> Result<Decomposition> {
    let level = |s: &str| -> Result<u64> { s.parse().with_context(|| format!("bad level {s:?}")) };
    Ok(match method.split_once(':') {
        Some(("even", k)) => {
            let k = level(k)?;
            Decomposition::Even {
                k,
                family: decompose_even(a, k, xs, upto)?,
            }
        }
        Some(("odd", k)) => {
            let k = level(k)?;
            Decomposition::Odd {
                k,
                split: decompose_odd(a, k, xs, upto)?,
            }
        }
        None if method == "omega" => Decomposition::Omega {
            family: decompose_omega(a, xs, upto)?,
        },
        _ => bail!("expected even:K, odd:K or omega, got {method:?}"),
    })
}

pub fn ershov(
    cfg: &ExperimentConfig,
    approx: &str,
    xs: &str,
    upto: Option<u64>,
    bound: Option<&str>,
    method: Option<&str>,
) -> Result<Status> {
    let a = load_approx(approx, cfg.horizon)?;
    let xs = parse_range(xs)?;
    let upto = upto.unwrap_or(a.stage_horizon);
    let bound: Option<UseBound> = bound.map(json_arg).transpose()?;
    let report = classify_ce_level(&a, xs.clone(), upto, bound.as_ref())?;
    let decomposition = method.map(|m| decompose(&a, m, xs.clone(), upto)).transpose()?;
    let out = open(cfg)?;
    let mut w = out.csv("counts.csv")?;
    w.write_record(["x", "mind_changes", "starts_at_one"])?;
    for (&x, &c) in &report.counts {
        let flag = report.nonzero_start.binary_search(&x).is_ok();
        w.write_record([x.to_string(), c.to_string(), u8::from(flag).to_string()])?;
    }
    w.flush()?;
    if let Some(d) = &decomposition {
        let mut w = out.csv("sets.csv")?;
        w.write_record(["x", "level", "set", "entry_stage"])?;
        let (fam, ce) = match d {
            Decomposition::Even { family, .. } | Decomposition::Omega { family } => (family, None),
            Decomposition::Odd { split, .. } => (&split.even_part, Some(&split.ce_part)),
        };
        for (x, level, set, stage) in fam.rows() {
            w.write_record([x.to_string(), level.to_string(), set.to_string(), stage.to_string()])?;
        }
        for (x, stage) in ce.into_iter().flatten() {
            w.write_record([x.to_string(), String::new(), "C".into(), stage.to_string()])?;
        }
        w.flush()?;
    }
    match report.n_ce {
        Some(n) => println!("consistent with {n}-c.e. at stage {upto}"),
        None => println!("f(x, 0) = 1 at {:?}", report.nonzero_start),
    }
    if let Some(v) = &report.omega {
        println!("omega-c.e. under the bound: {}", if v.consistent { "consistent" } else { "violated" });
    }
    out.json(
        "ershov.json",
        &Certificate::Ershov {
            approx: a,
            xs,
            bound,
            report,
            decomposition,
        },
    )?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct CorpusRow<'a> {
    name: &'a str,
    class: String,
    template: String,
    outcome: &'static str,
    forced: Option<u8>,
    witnesses: usize,
    verified: bool,
}

pub fn corpus(cfg: &ExperimentConfig, seed: u64, run: bool) -> Result<Status> {
    let entries = generate(seed);
    let out = open(cfg)?;
    out.json("corpus.json", &entries)?;
    if !run {
        println!("wrote {} reductions", entries.len());
        return Ok(Status::Ok);
    }
    let acfg = cfg.adversary();
    let mut w = out.csv("corpus_summary.csv")?;
    let mut outcomes = Vec::with_capacity(entries.len());
    let mut inconclusive = 0;
    for CorpusEntry { name, reduction } in &entries {
        let outcome = adversary_for(reduction, &acfg)?;
        let (kind, forced, witnesses, verified) = match &outcome {
            AdversaryOutcome::Witness(wit) => (
                "witness",
                Some(u8::from(wit.forced)),
                wit.witness.len(),
                wit.verify(reduction, acfg.threshold)?.holds,
            ),
            AdversaryOutcome::Inconclusive { .. } => {
                inconclusive += 1;
                ("inconclusive", None, 0, false)
            }
        };
        w.serialize(CorpusRow {
            name,
            class: reduction.declared_class.to_string(),
            template: reduction.row(0)?.to_string(),
            outcome: kind,
            forced,
            witnesses,
            verified,
        })?;
        outcomes.push(Certificate::Adversary {
            reduction: reduction.clone(),
            config: acfg.clone(),
            outcome,
        });
    }
    w.flush()?;
    out.json("outcomes.json", &outcomes)?;
    println!("{} reductions, {inconclusive} inconclusive", entries.len());
    Ok(if inconclusive == 0 { Status::Ok } else { Status::Inconclusive })
}

fn limit_set(a: &Delta2Approx, xs: Range<u64>, stage: u64) -> Result<BTreeSet<u64>> {
    let mut set = BTreeSet::new();
    for x in xs {
        if a.value(x, stage)? {
            set.insert(x);
        }
    }
    Ok(set)
}

fn check_family(fam: &StageSetFamily) -> Result<()> {
    for s in 0..fam.upto_stage {
        ensure!(fam.nested_at(s), "nesting fails at stage {s}");
    }
    Ok(())
}

fn verify_one(cert: &Certificate, dir: &Path) -> Result<Status> {
    match cert {
        Certificate::Stream { stream, n, bits_file } => {
            let path = dir.join(bits_file);
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let stored = bits_from_str(text.trim())?;
            ensure!(stored.len() as u64 == *n, "bit file holds {} bits, expected {n}", stored.len());
            ensure!(stored == stream.prefix(*n)?, "bit file differs from the stream");
        }
        Certificate::Reduce {
            reduction,
            oracle,
            n,
            bits,
            class_check,
            wtt,
        } => {
            ensure!(
                bits_to_string(&reduce_outputs(reduction, oracle, *n)?) == *bits,
                "output bits differ"
            );
            ensure!(reduction.verify_class(n - 1)? == *class_check, "class check differs");
            if let Some((b, check)) = wtt {
                ensure!(reduction.check_wtt(b, n - 1)? == *check, "use-bound audit differs");
            }
        }
        Certificate::Switch { family, estimator, trace } => {
            let fam = Family::from_desc(family)?;
            let e = estimator.build()?;
            let events = recheck_triggers(&fam, trace.arity, e.as_ref(), trace.horizon)?;
            ensure!(events == trace.events, "recomputed triggers differ from the trace");
            let run = switching_reduction(&fam, trace.arity, e.as_ref(), trace.horizon)?;
            ensure!(run.trace == *trace, "rerun trace differs");
            ensure!(suffix_agrees(&run, &fam)?, "output leaves the final column after the last switch");
        }
        Certificate::Adversary {
            reduction,
            config,
            outcome,
        } => {
            match outcome {
                AdversaryOutcome::Witness(w) => {
                    let check = w.verify(reduction, config.threshold)?;
                    ensure!(check.holds, "witness fails: {check:?}");
                }
                AdversaryOutcome::Inconclusive { .. } => {
                    ensure!(adversary_for(reduction, config)? == *outcome, "rerun outcome differs");
                    return Ok(Status::Inconclusive);
                }
            }
        }
        Certificate::Dims {
            stream,
            estimator,
            family,
            report,
        } => {
            let e = estimator.build()?;
            let again = dimension_profile(e.as_ref(), stream, report.horizon, family)?;
            ensure!(again == *report, "recomputed dimension report differs");
            ensure!(
                report.hausdorff <= report.complex_packing
                    && report.complex_packing <= report.packing
                    && report.hausdorff <= report.inescapable
                    && report.inescapable <= report.packing,
                "dimension ordering fails"
            );
        }
        Certificate::Ershov {
            approx,
            xs,
            bound,
            report,
            decomposition,
        } => {
            let again = classify_ce_level(approx, xs.clone(), report.upto_stage, bound.as_ref())?;
            ensure!(again == *report, "recomputed mind-change report differs");
            let last = report.upto_stage.saturating_sub(1);
            let target = limit_set(approx, xs.clone(), last)?;
            match decomposition {
                None => {}
                Some(Decomposition::Even { family, .. } | Decomposition::Omega { family }) => {
                    check_family(family)?;
                    ensure!(family.reconstruct(last) == target, "reconstruction differs from the final-stage set");
                }
                Some(Decomposition::Odd { split, .. }) => {
                    check_family(&split.even_part)?;
                    ensure!(split.reconstruct(last) == target, "reconstruction differs from the final-stage set");
                }
            }
        }
    }
    Ok(Status::Ok)
}

pub fn verify(path: &Path) -> Result<Status> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let parsed = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text)
    } else {
        serde_json::from_str(&text).map(|c| vec![c])
    };
    let certs: Vec<Certificate> = parsed.with_context(|| format!("parsing {}", path.display()))?;
    let mut status = Status::Ok;
    for (i, c) in certs.iter().enumerate() {
        if verify_one(c, dir).with_context(|| format!("certificate {i}"))? == Status::Inconclusive {
            status = Status::Inconclusive;
        }
    }
    println!("verified {} certificate(s)", certs.len());
    Ok(status)
}
