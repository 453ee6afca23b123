//! Batch front-end over the library: descriptors in, reports out.
//!
//! Descriptors are passed inline as JSON (arguments starting with `{`) or
//! as paths to JSON files. Reports go to stdout or `--out`; identical
//! invocations produce identical bytes unless `--timings` is set.
//!
//! Exit codes: 0 success, certified equality, or a passing check; 1 a
//! refutation or a validation failure; 2 an inconclusive verdict; 3 usage,
//! IO, or construction errors.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use circord::construct::{
    approx_dn, cofinal_central, convergence_table, genuine_sequence, lex_extend,
    quotient_circular, CofinalCentralDatum, DEFAULT_COFINALITY_BOUND,
};
use circord::descriptor::{
    build_element, build_group, build_left_order, build_morphism, build_ordering, build_ses,
    element_to_value,
};
use circord::enumerate::{enumerate_co_cyclic, enumerate_lo_ball};
use circord::groups::{Element, Group};
use circord::orders::{validate, CircularOrder, LeftOrder};
use circord::semiconj::{default_pair_sample, is_secret, rot, semiconjugate, tau, Verdict};

use report::{
    envelope, rotation_csv, rotation_row_value, rotation_value, validation_value, verdict_exit,
    verdict_value,
};

#[derive(Parser)]
#[command(
    name = "circord",
    version,
    about = "Circular orderings of groups: validation, rotation numbers, semiconjugacy, constructions, enumeration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format; CSV applies to rotation tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed determining every sampled element and pair.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Depth of certified rotation estimates.
    #[arg(long, short = 'n', global = true, default_value_t = 256)]
    depth: u64,
    /// Add wall-clock timings to the report (bytes then vary run to run).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ApproxSource {
    /// Group descriptor for the ordered ambient group.
    #[arg(long)]
    h: String,
    /// The cofinal central element, as a coordinate array.
    #[arg(long)]
    z: String,
    /// Left-order descriptor for the ambient group; defaults to the
    /// all-positive coordinate order.
    #[arg(long = "h-order")]
    h_order: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the three ordering axioms on a ball, exhaustively when small.
    Validate {
        #[arg(long)]
        ordering: String,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        /// Sampled quadruples when the ball is too large to exhaust.
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
    },
    /// Rotation numbers of elements, exact when a closed path applies.
    Rot {
        #[arg(long)]
        ordering: String,
        /// Elements, each a coordinate array (or bare integer in rank one).
        #[arg(long = "element", required = true)]
        elements: Vec<String>,
        /// Fail unless every value comes out exact.
        #[arg(long)]
        exact: bool,
    },
    /// The translation defect tau of a pair.
    Tau {
        #[arg(long)]
        ordering: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Decide whether the ordering is induced by a left order.
    Secret {
        #[arg(long)]
        ordering: String,
        #[arg(long, default_value_t = 2)]
        radius: u32,
    },
    /// Compare two orderings of one group up to semiconjugacy.
    Semiconj {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Generators to compare rotation numbers on; defaults to the
        /// radius-1 ball.
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long, default_value_t = 2)]
        radius: u32,
    },
    /// Extend a kernel order and a quotient ordering along a short exact
    /// sequence.
    Lex {
        #[arg(long)]
        ses: String,
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        quotient: String,
    },
    /// The finite cyclic quotient ordering by the n-th power of a cofinal
    /// central element.
    Quotient {
        #[command(flatten)]
        source: ApproxSource,
        #[arg(long)]
        n: u64,
    },
    /// The approximation ordering d_n on the ambient group itself.
    Approx {
        #[command(flatten)]
        source: ApproxSource,
        #[arg(long)]
        n: u64,
        /// Optionally also report rotation numbers of these elements.
        #[arg(long = "element")]
        elements: Vec<String>,
    },
    /// Build the approximation sequence through a morphism and certify
    /// that each member fails to be order-induced.
    Genuine {
        /// Morphism name, e.g. "heisenberg_to_z2".
        #[arg(long)]
        phi: String,
        /// Indices, comma separated, e.g. "2,3,4".
        #[arg(long)]
        ns: String,
        /// Kernel order descriptor for extensions along a central kernel.
        #[arg(long = "kernel-order")]
        kernel_order: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: u32,
    },
    /// Enumerate circular orderings of a finite cyclic group, or positive
    /// cone candidates on a ball.
    Enumerate {
        /// Order of the cyclic group to enumerate.
        #[arg(long, conflicts_with_all = ["group", "radius"])]
        n: Option<u64>,
        /// Group descriptor for the cone-candidate search.
        #[arg(long, requires = "radius")]
        group: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
        /// Work cap; overrides the CIRCORD_MAX_CELLS environment variable.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// First agreement indices of the approximation sequence against a
    /// target ordering, over all ball triples.
    Convergence {
        #[arg(long)]
        target: String,
        #[command(flatten)]
        source: ApproxSource,
        /// Indices, comma separated.
        #[arg(long)]
        ns: String,
        #[arg(long, default_value_t = 3)]
        radius: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

/// Inline JSON if the argument starts with '{' or '[', otherwise a file.
fn load_value(arg: &str) -> anyhow::Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with('-')
        || trimmed.chars().next().is_some_and(|c| c.is_ascii_digit())
    {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading descriptor file {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {arg}"))
}

fn load_ordering(arg: &str) -> anyhow::Result<CircularOrder> {
    Ok(build_ordering(&load_value(arg)?, "$")?)
}

fn load_element(group: &Group, arg: &str) -> anyhow::Result<Element> {
    Ok(build_element(group, &load_value(arg)?, "$")?)
}

fn parse_ns(arg: &str) -> anyhow::Result<Vec<u64>> {
    let ns = arg
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .context("parsing the index list; expected comma-separated integers")?;
    if ns.is_empty() {
        bail!("the index list is empty");
    }
    Ok(ns)
}

fn load_datum(source: &ApproxSource) -> anyhow::Result<CofinalCentralDatum> {
    let h = build_group(&load_value(&source.h)?, "$.h")?;
    let order = match &source.h_order {
        Some(o) => build_left_order(&load_value(o)?, "$.h_order")?,
        None => LeftOrder::lex(h.clone(), vec![1; h.arity()])?,
    };
    if order.group() != &h {
        bail!("the ambient order does not order the group in --h");
    }
    let z = build_element(&h, &load_value(&source.z)?, "$.z")?;
    Ok(cofinal_central(&order, &z, DEFAULT_COFINALITY_BOUND)?)
}

fn work_cap(flag: Option<u64>) -> anyhow::Result<u64> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("CIRCORD_MAX_CELLS") {
        Ok(s) => s
            .parse::<u64>()
            .context("parsing CIRCORD_MAX_CELLS as an integer"),
        Err(_) => Ok(100_000_000),
    }
}

fn run(cli: &Cli) -> anyhow::Result<i32> {
    let start = Instant::now();
    let (mut body, csv, exit, command_name): (Map<String, Value>, Option<String>, i32, &str) =
        match &cli.command {
            Command::Validate {
                ordering,
                radius,
                samples,
            } => {
                let c = load_ordering(ordering)?;
                let r = validate(&c, *radius, *samples, cli.seed);
                let mut body = Map::new();
                body.insert("ordering".into(), c.descriptor());
                body.insert("validation".into(), validation_value(&r));
                let exit = if r.passed() { 0 } else { 1 };
                (body, None, exit, "validate")
            }
            Command::Rot {
                ordering,
                elements,
                exact,
            } => {
                let c = load_ordering(ordering)?;
                let mut rows = Vec::new();
                for arg in elements {
                    let g = load_element(c.group(), arg)?;
                    let r = rot(&c, &g, cli.depth);
                    if *exact && !r.value.is_exact() {
                        bail!(
                            "no exact path for element {g}; rerun without --exact for a certified interval"
                        );
                    }
                    rows.push((g, r));
                }
                let mut body = Map::new();
                body.insert("ordering".into(), c.descriptor());
                body.insert("depth".into(), json!(cli.depth));
                body.insert(
                    "rotations".into(),
                    Value::Array(
                        rows.iter()
                            .map(|(g, r)| rotation_row_value(g, r))
                            .collect(),
                    ),
                );
                let csv = (cli.format == Format::Csv).then(|| rotation_csv(&rows));
                (body, csv, 0, "rot")
            }
            Command::Tau {
                ordering,
                left,
                right,
            } => {
                let c = load_ordering(ordering)?;
                let g = load_element(c.group(), left)?;
                let h = load_element(c.group(), right)?;
                let value = tau(&c, &g, &h, cli.depth);
                let mut body = Map::new();
                body.insert("ordering".into(), c.descriptor());
                body.insert("depth".into(), json!(cli.depth));
                body.insert(
                    "pair".into(),
                    json!([element_to_value(&g), element_to_value(&h)]),
                );
                body.insert("tau".into(), rotation_value(&value));
                (body, None, 0, "tau")
            }
            Command::Secret { ordering, radius } => {
                let c = load_ordering(ordering)?;
                let verdict = is_secret(&c, *radius, cli.depth)?;
                let mut body = Map::new();
                body.insert("ordering".into(), c.descriptor());
                body.insert("radius".into(), json!(radius));
                body.insert("depth".into(), json!(cli.depth));
                body.insert("result".into(), verdict_value(&verdict));
                (body, None, verdict_exit(&verdict), "secret")
            }
            Command::Semiconj {
                a,
                b,
                gens,
                radius,
            } => {
                let c = load_ordering(a)?;
                let d = load_ordering(b)?;
                let group = c.group().clone();
                let generators = if gens.is_empty() {
                    group
                        .ball(1)?
                        .into_iter()
                        .filter(|g| !group.is_id(g))
                        .collect()
                } else {
                    gens.iter()
                        .map(|arg| load_element(&group, arg))
                        .collect::<anyhow::Result<Vec<_>>>()?
                };
                let pairs = default_pair_sample(&group, *radius, cli.seed)?;
                let verdict = semiconjugate(&c, &d, &generators, &pairs, cli.depth)?;
                let mut body = Map::new();
                body.insert("a".into(), c.descriptor());
                body.insert("b".into(), d.descriptor());
                body.insert(
                    "generators".into(),
                    Value::Array(generators.iter().map(element_to_value).collect()),
                );
                body.insert("pair_count".into(), json!(pairs.len()));
                body.insert("depth".into(), json!(cli.depth));
                body.insert("result".into(), verdict_value(&verdict));
                (body, None, verdict_exit(&verdict), "semiconj")
            }
            Command::Lex {
                ses,
                kernel,
                quotient,
            } => {
                let sequence = build_ses(&load_value(ses)?, "$.ses")?;
                let kernel_order = build_left_order(&load_value(kernel)?, "$.kernel")?;
                let quotient_order = load_ordering(quotient)?;
                let c = lex_extend(&sequence, &kernel_order, &quotient_order)?;
                let mut body = Map::new();
                body.insert("group".into(), c.group().descriptor());
                body.insert("ordering".into(), c.descriptor());
                (body, None, 0, "lex")
            }
            Command::Quotient { source, n } => {
                let datum = load_datum(source)?;
                let c = quotient_circular(&datum, *n)?;
                let mut body = Map::new();
                body.insert("group".into(), c.group().descriptor());
                body.insert("ordering".into(), c.descriptor());
                (body, None, 0, "quotient")
            }
            Command::Approx {
                source,
                n,
                elements,
            } => {
                let datum = load_datum(source)?;
                let c = approx_dn(&datum, *n)?;
                let mut rows = Vec::new();
                for arg in elements {
                    let g = load_element(c.group(), arg)?;
                    let r = rot(&c, &g, cli.depth);
                    rows.push((g, r));
                }
                let mut body = Map::new();
                body.insert("group".into(), c.group().descriptor());
                body.insert("ordering".into(), c.descriptor());
                body.insert(
                    "rotations".into(),
                    Value::Array(
                        rows.iter()
                            .map(|(g, r)| rotation_row_value(g, r))
                            .collect(),
                    ),
                );
                let csv = (cli.format == Format::Csv).then(|| rotation_csv(&rows));
                (body, csv, 0, "approx")
            }
            Command::Genuine {
                phi,
                ns,
                kernel_order,
                radius,
            } => {
                let ns = parse_ns(ns)?;
                let codomain = Group::free_abelian(2)?;
                let phi = build_morphism(&json!(phi), &codomain, "$.phi")?;
                let kernel = kernel_order
                    .as_deref()
                    .map(|o| anyhow::Ok(build_left_order(&load_value(o)?, "$.kernel_order")?))
                    .transpose()?;
                let orderings = genuine_sequence(&phi, kernel.as_ref(), &ns)?;
                let mut results = Vec::new();
                let mut refuted = 0usize;
                let mut inconclusive = 0usize;
                for (n, c) in ns.iter().zip(&orderings) {
                    let verdict = is_secret(c, *radius, cli.depth)?;
                    match verdict {
                        Verdict::Refuted(_) => refuted += 1,
                        Verdict::Inconclusive { .. } => inconclusive += 1,
                        Verdict::CertifiedEqual => {}
                    }
                    results.push(json!({
                        "n": n,
                        "ordering": c.descriptor(),
                        "order_induced": verdict_value(&verdict),
                    }));
                }
                let mut body = Map::new();
                body.insert("domain".into(), orderings[0].group().descriptor());
                body.insert("results".into(), Value::Array(results));
                let exit = if refuted == ns.len() {
                    0
                } else if inconclusive > 0 {
                    2
                } else {
                    1
                };
                (body, None, exit, "genuine")
            }
            Command::Enumerate {
                n,
                group,
                radius,
                cap,
            } => {
                let cap = work_cap(*cap)?;
                let mut body = Map::new();
                match (n, group) {
                    (Some(n), None) => {
                        let found = enumerate_co_cyclic(*n, cap)?;
                        body.insert("n".into(), json!(n));
                        body.insert("count".into(), json!(found.len()));
                        body.insert(
                            "orderings".into(),
                            Value::Array(found.iter().map(|c| c.descriptor()).collect()),
                        );
                    }
                    (None, Some(group)) => {
                        let g = build_group(&load_value(group)?, "$.group")?;
                        let radius = radius.expect("clap enforces --radius with --group");
                        let candidates = enumerate_lo_ball(&g, radius, cap)?;
                        body.insert("group".into(), g.descriptor());
                        body.insert("radius".into(), json!(radius));
                        body.insert("count".into(), json!(candidates.len()));
                        body.insert(
                            "candidates".into(),
                            Value::Array(
                                candidates
                                    .iter()
                                    .map(|cand| {
                                        json!({
                                            "radius": cand.radius(),
                                            "assignment": cand
                                                .assignment()
                                                .iter()
                                                .map(|(e, s)| json!([element_to_value(e), s]))
                                                .collect::<Vec<_>>(),
                                        })
                                    })
                                    .collect(),
                            ),
                        );
                    }
                    _ => bail!("pass either --n for a cyclic group or --group with --radius"),
                }
                body.insert("cap".into(), json!(cap));
                (body, None, 0, "enumerate")
            }
            Command::Convergence {
                target,
                source,
                ns,
                radius,
            } => {
                let target = load_ordering(target)?;
                let datum = load_datum(source)?;
                let ns = parse_ns(ns)?;
                let sequence = ns
                    .iter()
                    .map(|&n| Ok((n, approx_dn(&datum, n)?)))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let ball = target.group().ball(*radius)?;
                let mut triples = Vec::new();
                for a in &ball {
                    for b in &ball {
                        for c in &ball {
                            triples.push([a.clone(), b.clone(), c.clone()]);
                        }
                    }
                }
                let rows = convergence_table(&target, &sequence, &triples);
                let mut body = Map::new();
                body.insert("target".into(), target.descriptor());
                body.insert(
                    "rows".into(),
                    Value::Array(
                        rows.iter()
                            .map(|row| {
                                json!({
                                    "triple": row.triple.iter().map(element_to_value).collect::<Vec<_>>(),
                                    "first_agreement": row.first_agreement,
                                })
                            })
                            .collect(),
                    ),
                );
                (body, None, 0, "convergence")
            }
        };

    if cli.timings {
        body.insert(
            "elapsed_ms".into(),
            json!(start.elapsed().as_millis() as u64),
        );
    }
    let rendered = match csv {
        Some(csv) => csv,
        None => {
            let report = envelope(command_name, cli.seed, body);
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            text
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(exit)
}
