//! Command-line surface over the library: triple classification,
//! exhaustive audits, dihedral representations, exact trigonometric
//! identities, and certified generation verification.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 a discrepancy
//! was flagged during an audit (so pipelines can trap formula-vs-oracle
//! disagreements). With `--json`, stdout carries line-delimited JSON —
//! one record with the run's outputs and discrepancy flags, then one
//! footer line; only the footer contains timing, so the record lines
//! are byte-stable across runs.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use trigroup::arith::{self, h_double_prime_structure, IntMatrix};
use trigroup::cyclo::{angle_sum_condition, product_condition, RationalAngle};
use trigroup::dihedral::{involution_triple, DihedralElement};
use trigroup::lattice::{
    affine_order, generation_witnesses, standard_generators, verify_generation, AffineElement,
    AffineOrder, Verdict, WordCertificate,
};
use trigroup::repr::{build_faithful_rep, rational_inventory};
use trigroup::triples::{
    check_condition_c, count_reduced, decompose, enumerate_reduced, solve_condition_d, Triple,
};

#[derive(Parser)]
#[command(
    name = "trigroup",
    about = "Exact arithmetic for integer triples, dihedral groups, and affine reflection groups",
    version
)]
struct Cli {
    /// Emit line-delimited JSON (one record, then a timing footer)
    /// instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a triple: arithmetic condition, sieve solution, counts.
    Classify { a1: u64, a2: u64, a3: u64 },
    /// Closed-form reduced-solution counts, optionally audited against
    /// brute-force enumeration.
    Count {
        a1: u64,
        a2: u64,
        a3: u64,
        /// Enumerate all reduced solutions and compare with the formulas.
        #[arg(long)]
        oracle: bool,
    },
    /// Exhaustive equivalence and count audit over a range of triples or
    /// an explicit list.
    Sweep {
        /// Audit every triple with entries in 2..=MAX.
        #[arg(long, value_name = "MAX")]
        max: Option<u64>,
        /// Worker threads (overrides TRIGROUP_JOBS; 0 = all cores).
        #[arg(long, value_name = "J")]
        jobs: Option<usize>,
        /// Read triples from FILE, one per line ("-" for stdin).
        #[arg(long = "in", value_name = "FILE")]
        input: Option<String>,
    },
    /// Three reflections realizing a condition-triple in a dihedral group.
    Involutions { a1: u64, a2: u64, a3: u64 },
    /// Integral matrices of the faithful irreducible representation.
    Repr {
        n: u64,
        /// List the complete rational irreducible inventory instead.
        #[arg(long)]
        inventory: bool,
    },
    /// Invariant factors of Z²/⟨(p,0), (0,q), (r,r)⟩.
    Snf { a1: u64, a2: u64, a3: u64 },
    /// Exact equivalence of the angle-sum and product identities for
    /// three fractions of a half-turn, written K/M.
    Identity {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// Certified membership chain for the three standard affine
    /// involutions of a triple.
    Witnesses { p: u64, q: u64, r: u64 },
    /// Full generation verification: verdict, lattice index, and
    /// obstruction witness.
    Verify { p: u64, q: u64, r: u64 },
    /// Order of the affine element (v, g^k) or (v, g^k s) at level N.
    Order {
        n: u64,
        k: i64,
        /// Use the reflection g^k s instead of the rotation g^k.
        #[arg(long)]
        reflection: bool,
        /// Translation part as comma-separated integers (default: zero).
        #[arg(long, value_name = "V", allow_hyphen_values = true)]
        vec: Option<String>,
    },
}

/// What a subcommand hands back to `main` for rendering.
struct CmdOut {
    outputs: Value,
    flags: Vec<Value>,
    text: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    let started = Instant::now();
    let name = command_name(&cli.command);
    let inputs = command_inputs(&cli.command);
    match run(cli.command) {
        Ok(out) => {
            let code = if out.flags.is_empty() { 0 } else { 2 };
            if cli.json {
                let record = json!({
                    "command": name,
                    "inputs": inputs,
                    "outputs": out.outputs,
                    "discrepancy_flags": out.flags,
                });
                println!("{record}");
                let footer = json!({
                    "footer": { "command": name, "elapsed_ms": started.elapsed().as_millis() as u64 }
                });
                println!("{footer}");
            } else {
                for line in &out.text {
                    println!("{line}");
                }
                for flag in &out.flags {
                    println!(
                        "discrepancy [{}] at {}: {}",
                        flag["kind"].as_str().unwrap_or("?"),
                        flag["input"],
                        flag["details"].as_str().unwrap_or("?")
                    );
                }
                eprintln!("elapsed: {} ms", started.elapsed().as_millis());
            }
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Count { .. } => "count",
        Command::Sweep { .. } => "sweep",
        Command::Involutions { .. } => "involutions",
        Command::Repr { .. } => "repr",
        Command::Snf { .. } => "snf",
        Command::Identity { .. } => "identity",
        Command::Witnesses { .. } => "witnesses",
        Command::Verify { .. } => "verify",
        Command::Order { .. } => "order",
    }
}

fn command_inputs(c: &Command) -> Value {
    match c {
        Command::Classify { a1, a2, a3 }
        | Command::Involutions { a1, a2, a3 }
        | Command::Snf { a1, a2, a3 } => json!([a1, a2, a3]),
        Command::Count { a1, a2, a3, oracle } => json!({
            "triple": [a1, a2, a3],
            "oracle": oracle,
        }),
        Command::Sweep { max, jobs, input } => json!({
            "max": max,
            "jobs": jobs,
            "in": input,
        }),
        Command::Repr { n, inventory } => json!({ "n": n, "inventory": inventory }),
        Command::Identity { a, b, c } => json!([a, b, c]),
        Command::Witnesses { p, q, r } | Command::Verify { p, q, r } => json!([p, q, r]),
        Command::Order {
            n,
            k,
            reflection,
            vec,
        } => json!({
            "n": n,
            "k": k,
            "reflection": reflection,
            "vec": vec,
        }),
    }
}

fn run(c: Command) -> Result<CmdOut, String> {
    match c {
        Command::Classify { a1, a2, a3 } => classify(a1, a2, a3),
        Command::Count { a1, a2, a3, oracle } => count(a1, a2, a3, oracle),
        Command::Sweep { max, jobs, input } => sweep(max, jobs, input),
        Command::Involutions { a1, a2, a3 } => involutions(a1, a2, a3),
        Command::Repr { n, inventory } => repr(n, inventory),
        Command::Snf { a1, a2, a3 } => snf(a1, a2, a3),
        Command::Identity { a, b, c } => identity(&a, &b, &c),
        Command::Witnesses { p, q, r } => witnesses(p, q, r),
        Command::Verify { p, q, r } => verify(p, q, r),
        Command::Order {
            n,
            k,
            reflection,
            vec,
        } => order(n, k, reflection, vec.as_deref()),
    }
}

// ---------------------------------------------------------------------------
// classify / count
// ---------------------------------------------------------------------------

fn classify(a1: u64, a2: u64, a3: u64) -> Result<CmdOut, String> {
    let t = Triple::new(a1, a2, a3).map_err(|e| e.to_string())?;
    let cond = check_condition_c(&t);
    let mut flags = Vec::new();
    let solved = solve_condition_d(&t);
    if cond.holds() != solved.is_some() {
        flags.push(json!({
            "input": [a1, a2, a3],
            "kind": "equivalence-mismatch",
            "details": format!("condition {} but sieve solution {}",
                cond.holds(), if solved.is_some() { "found" } else { "absent" }),
        }));
    }
    let mut outputs = json!({
        "triple": [a1, a2, a3],
        "c1": cond.c1,
        "c2": cond.c2,
        "holds": cond.holds(),
    });
    let mut text = vec![
        format!("triple ({a1}, {a2}, {a3})"),
        format!(
            "condition: C1 (equal pairwise lcms) {}, C2 (2-adic constraint) {}, overall {}",
            cond.c1,
            cond.c2,
            cond.holds()
        ),
    ];
    if let Some(solved) = solved {
        let dec = decompose(&t).map_err(|e| e.to_string())?;
        let counts = count_reduced(&t).map_err(|e| e.to_string())?;
        let s = solved.solution;
        outputs["n"] = json!(dec.n());
        outputs["w"] = json!(dec.w());
        outputs["b"] = json!([dec.b1(), dec.b2(), dec.b3()]);
        outputs["solution"] = json!({ "c1": s.c1 as i64, "c2": s.c2 as i64, "c3": s.c3 as i64 });
        outputs["reduced_count"] = json!(counts.proof_body.to_string());
        outputs["shorter_count"] = json!(counts.simplified.to_string());
        text.push(format!(
            "lcm n = {}, gcd w = {}, cofactors b = ({}, {}, {})",
            dec.n(),
            dec.w(),
            dec.b1(),
            dec.b2(),
            dec.b3()
        ));
        text.push(format!(
            "sieve solution (c1, c2, c3) = ({}, {}, {})",
            s.c1, s.c2, s.c3
        ));
        text.push(format!(
            "reduced solutions: {} (shorter formula: {})",
            counts.proof_body, counts.simplified
        ));
    } else {
        text.push("no solutions exist".to_string());
    }
    Ok(CmdOut {
        outputs,
        flags,
        text,
    })
}

fn count(a1: u64, a2: u64, a3: u64, oracle: bool) -> Result<CmdOut, String> {
    let t = Triple::new(a1, a2, a3).map_err(|e| e.to_string())?;
    let counts = count_reduced(&t).map_err(|e| e.to_string())?;
    let mut flags = Vec::new();
    let mut outputs = json!({
        "triple": [a1, a2, a3],
        "detailed": counts.proof_body.to_string(),
        "shorter": counts.simplified.to_string(),
    });
    let mut text = vec![format!(
        "({a1}, {a2}, {a3}): {} reduced solutions (detailed formula); shorter formula gives {}",
        counts.proof_body, counts.simplified
    )];
    if counts.discrepancy() {
        flags.push(json!({
            "input": [a1, a2, a3],
            "kind": "shorter-formula-differs",
            "details": format!("detailed {} vs shorter {}", counts.proof_body, counts.simplified),
        }));
    }
    if oracle {
        let enumerated = enumerate_reduced(&t).len() as u128;
        outputs["enumerated"] = json!(enumerated.to_string());
        outputs["oracle_agrees"] = json!(enumerated == counts.proof_body);
        text.push(format!("brute-force enumeration: {enumerated}"));
        if enumerated != counts.proof_body {
            flags.push(json!({
                "input": [a1, a2, a3],
                "kind": "count-mismatch",
                "details": format!("enumerated {enumerated} vs detailed {}", counts.proof_body),
            }));
        }
    }
    Ok(CmdOut {
        outputs,
        flags,
        text,
    })
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn sweep(max: Option<u64>, jobs: Option<usize>, input: Option<String>) -> Result<CmdOut, String> {
    let triples: Vec<(u64, u64, u64)> = match (max, &input) {
        (Some(_), Some(_)) => {
            return Err("choose either --max or --in, not both".to_string());
        }
        (None, None) => {
            return Err("one of --max or --in is required".to_string());
        }
        (Some(m), None) => {
            if m < 2 {
                return Err("--max must be at least 2".to_string());
            }
            let mut v = Vec::new();
            for a1 in 2..=m {
                for a2 in 2..=m {
                    for a3 in 2..=m {
                        v.push((a1, a2, a3));
                    }
                }
            }
            v
        }
        (None, Some(path)) => read_triples(path)?,
    };

    let workers = jobs.or_else(|| {
        std::env::var("TRIGROUP_JOBS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| format!("could not start the worker pool: {e}"))?;

    // each worker owns a slice; results come back in input order
    let audited: Vec<(bool, Option<Value>)> = pool.install(|| {
        triples
            .par_iter()
            .map(|&(a1, a2, a3)| {
                let t = match Triple::new(a1, a2, a3) {
                    Ok(t) => t,
                    Err(e) => {
                        return (
                            false,
                            Some(json!({
                                "input": [a1, a2, a3],
                                "kind": "invalid-input",
                                "details": e.to_string(),
                            })),
                        )
                    }
                };
                let c = check_condition_c(&t).holds();
                let d = solve_condition_d(&t).is_some();
                let reduced = enumerate_reduced(&t);
                let e = !reduced.is_empty();
                if c != d || d != e {
                    return (
                        c,
                        Some(json!({
                            "input": [a1, a2, a3],
                            "kind": "equivalence-mismatch",
                            "details": format!(
                                "condition {c}, sieve {d}, enumeration nonempty {e}"
                            ),
                        })),
                    );
                }
                if !c {
                    return (false, None);
                }
                let counts = count_reduced(&t).expect("condition holds");
                if counts.proof_body != reduced.len() as u128 {
                    return (
                        true,
                        Some(json!({
                            "input": [a1, a2, a3],
                            "kind": "count-mismatch",
                            "details": format!(
                                "enumerated {} vs detailed {}",
                                reduced.len(),
                                counts.proof_body
                            ),
                        })),
                    );
                }
                if counts.discrepancy() {
                    return (
                        true,
                        Some(json!({
                            "input": [a1, a2, a3],
                            "kind": "shorter-formula-differs",
                            "details": format!(
                                "detailed {} vs shorter {}",
                                counts.proof_body, counts.simplified
                            ),
                        })),
                    );
                }
                (true, None)
            })
            .collect()
    });

    let condition_triples = audited.iter().filter(|(c, _)| *c).count();
    let flags: Vec<Value> = audited.into_iter().filter_map(|(_, f)| f).collect();
    let count_of = |kind: &str| {
        flags
            .iter()
            .filter(|f| f["kind"].as_str() == Some(kind))
            .count()
    };
    let equivalence_mismatches = count_of("equivalence-mismatch");
    let count_mismatches = count_of("count-mismatch");
    let shorter_disagreements = count_of("shorter-formula-differs");
    let invalid = count_of("invalid-input");
    let outputs = json!({
        "triples_audited": triples.len(),
        "condition_triples": condition_triples,
        "equivalence_mismatches": equivalence_mismatches,
        "count_mismatches": count_mismatches,
        "shorter_formula_disagreements": shorter_disagreements,
        "invalid_inputs": invalid,
    });
    let text = vec![
        format!("audited {} triples", triples.len()),
        format!("condition-triples: {condition_triples}"),
        format!("equivalence mismatches: {equivalence_mismatches}"),
        format!("count mismatches: {count_mismatches}"),
        format!("shorter-formula disagreements: {shorter_disagreements}"),
    ];
    Ok(CmdOut {
        outputs,
        flags,
        text,
    })
}

fn read_triples(path: &str) -> Result<Vec<(u64, u64, u64)>, String> {
    let contents = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("could not read stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("could not read {path}: {e}"))?
    };
    let mut triples = Vec::new();
    for (i, line) in contents.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(format!(
                "line {}: expected three integers, got {line:?}",
                i + 1
            ));
        }
        let parse = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| format!("line {}: malformed integer {s:?}", i + 1))
        };
        triples.push((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?));
    }
    if triples.is_empty() {
        return Err("the input list contains no triples".to_string());
    }
    Ok(triples)
}

// ---------------------------------------------------------------------------
// involutions / repr / snf
// ---------------------------------------------------------------------------

fn involutions(a1: u64, a2: u64, a3: u64) -> Result<CmdOut, String> {
    let t = Triple::new(a1, a2, a3).map_err(|e| e.to_string())?;
    let family = involution_triple(&t).map_err(|e| e.to_string())?;
    let (o12, o13, o23) = family.product_orders();
    let (c1, c2p, c3) = family.adjusted;
    let outputs = json!({
        "triple": [a1, a2, a3],
        "n": t.lcm(),
        "s1": family.s1.to_string(),
        "s2": family.s2.to_string(),
        "s3": family.s3.to_string(),
        "product_orders": { "s1s2": o12, "s1s3": o13, "s2s3": o23 },
        "adjusted_solution": [c1 as i64, c2p as i64, c3 as i64],
    });
    let text = vec![
        format!("dihedral group of order {}", 2 * t.lcm()),
        format!("s1 = {}", family.s1),
        format!("s2 = {}", family.s2),
        format!("s3 = {}", family.s3),
        format!("product orders: |s1 s2| = {o12}, |s1 s3| = {o13}, |s2 s3| = {o23}"),
        format!("adjusted solution: ({c1}, {c2p}, {c3})"),
    ];
    Ok(CmdOut {
        outputs,
        flags: Vec::new(),
        text,
    })
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn repr(n: u64, inventory: bool) -> Result<CmdOut, String> {
    if inventory {
        if n < 3 {
            return Err(format!("the group level must be at least 3, got {n}"));
        }
        let inv = rational_inventory(n);
        let entries: Vec<Value> = inv
            .entries
            .iter()
            .map(|e| {
                json!({
                    "label": e.label,
                    "degree": e.degree,
                    "kernel": e.kernel,
                })
            })
            .collect();
        let mut text = vec![format!(
            "{} rational irreducible representations at level {n}:",
            inv.entries.len()
        )];
        for e in &inv.entries {
            text.push(format!(
                "  {} (degree {}, kernel {})",
                e.label, e.degree, e.kernel
            ));
        }
        return Ok(CmdOut {
            outputs: json!({ "n": n, "count": inv.entries.len(), "entries": entries }),
            flags: Vec::new(),
            text,
        });
    }
    let rep = build_faithful_rep(n).map_err(|e| e.to_string())?;
    let outputs = json!({
        "n": n,
        "degree": rep.degree(),
        "g": matrix_json(rep.g_mat()),
        "s": matrix_json(rep.s_mat()),
        "char_poly_g": rep
            .g_mat()
            .char_poly()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>(),
        "trace_g": rep.g_mat().trace().to_string(),
        "det_g": rep.g_mat().det().to_string(),
    });
    let text = vec![
        format!("faithful representation at level {n}, degree {}", rep.degree()),
        format!("G =\n{}", rep.g_mat()),
        format!("S =\n{}", rep.s_mat()),
        format!(
            "char(G) coefficients (ascending): {:?}",
            rep.g_mat()
                .char_poly()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
        ),
    ];
    Ok(CmdOut {
        outputs,
        flags: Vec::new(),
        text,
    })
}

fn snf(a1: u64, a2: u64, a3: u64) -> Result<CmdOut, String> {
    let (d1, d2) = h_double_prime_structure(a1, a2, a3).map_err(|e| e.to_string())?;
    let outputs = json!({
        "triple": [a1, a2, a3],
        "invariant_factors": [d1, d2],
    });
    let text = vec![format!(
        "Z^2 / <({a1},0), (0,{a2}), ({a3},{a3})> has invariant factors ({d1}, {d2})"
    )];
    Ok(CmdOut {
        outputs,
        flags: Vec::new(),
        text,
    })
}

// ---------------------------------------------------------------------------
// identity
// ---------------------------------------------------------------------------

fn parse_fraction(s: &str) -> Result<RationalAngle, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim()
                .parse::<i64>()
                .map_err(|_| format!("malformed numerator in {s:?}"))?,
            d.trim()
                .parse::<i64>()
                .map_err(|_| format!("malformed denominator in {s:?}"))?,
        ),
        None => (
            s.trim()
                .parse::<i64>()
                .map_err(|_| format!("malformed fraction {s:?} (expected K/M)"))?,
            1,
        ),
    };
    RationalAngle::new(num, den).map_err(|e| e.to_string())
}

fn identity(a: &str, b: &str, c: &str) -> Result<CmdOut, String> {
    let (x, y, z) = (parse_fraction(a)?, parse_fraction(b)?, parse_fraction(c)?);
    let sum_side = angle_sum_condition(x, y, z);
    let product_side = product_condition(x, y, z);
    let mut flags = Vec::new();
    if sum_side != product_side {
        flags.push(json!({
            "input": [a, b, c],
            "kind": "identity-mismatch",
            "details": format!("angle-sum {sum_side} but product identity {product_side}"),
        }));
    }
    let outputs = json!({
        "angles": [x.to_string(), y.to_string(), z.to_string()],
        "angle_sum": sum_side,
        "product": product_side,
        "agree": sum_side == product_side,
    });
    let text = vec![
        format!("normalized angles: {x}, {y}, {z} (as fractions of a half-turn)"),
        format!("angle-sum condition (some c = ±a ± b mod Z): {sum_side}"),
        format!("product identity (αβγ = (4−α−β−γ)²): {product_side}"),
    ];
    Ok(CmdOut {
        outputs,
        flags,
        text,
    })
}

// ---------------------------------------------------------------------------
// witnesses / verify / order
// ---------------------------------------------------------------------------

fn certificate_json(cert: &WordCertificate) -> Value {
    json!({
        "label": cert.label,
        "target": cert.target.to_string(),
        "word": trigroup::lattice::word_to_string(&cert.word),
    })
}

fn witnesses(p: u64, q: u64, r: u64) -> Result<CmdOut, String> {
    let gd = standard_generators(p, q, r).map_err(|e| e.to_string())?;
    let chain = generation_witnesses(&gd).map_err(|e| e.to_string())?;
    let (lp, lq, lr) = gd.relabeled();
    let outputs = json!({
        "triple": [p, q, r],
        "relabeled": [lp, lq, lr],
        "n": gd.n(),
        "sigma1": gd.sigma1().to_string(),
        "sigma2": gd.sigma2().to_string(),
        "sigma3": gd.sigma3().to_string(),
        "certificates": chain.iter().map(certificate_json).collect::<Vec<_>>(),
        "count": chain.len(),
    });
    let mut text = vec![
        format!("triple ({p}, {q}, {r}), labeled ({lp}, {lq}, {lr}), level n = {}", gd.n()),
        format!("sigma1 = {}", gd.sigma1()),
        format!("sigma2 = {}", gd.sigma2()),
        format!("sigma3 = {}", gd.sigma3()),
        format!("{} certificates:", chain.len()),
    ];
    for cert in &chain {
        text.push(format!("  {} = {}", cert.label, cert.target));
        text.push(format!("    word: {}", trigroup::lattice::word_to_string(&cert.word)));
    }
    Ok(CmdOut {
        outputs,
        flags: Vec::new(),
        text,
    })
}

fn verify(p: u64, q: u64, r: u64) -> Result<CmdOut, String> {
    let report = verify_generation(p, q, r).map_err(|e| e.to_string())?;
    let verdict = match &report.verdict {
        Verdict::Generated => json!({ "kind": "generated" }),
        Verdict::Obstructed {
            prime,
            lattice_index,
        } => json!({
            "kind": "obstructed",
            "prime": prime,
            "lattice_index": lattice_index.as_ref().map(|d| d.to_string()),
        }),
        Verdict::Inconclusive { reason } => json!({
            "kind": "inconclusive",
            "reason": reason,
        }),
    };
    let prime_checks: Vec<Value> = report
        .prime_checks
        .iter()
        .map(|c| {
            json!({
                "prime": c.prime,
                "submodule_dim": c.submodule_dim,
                "ambient_dim": c.ambient_dim,
                "spans_everything": c.spans_everything,
                "submodule_basis": c.submodule_basis,
                "missing_vector": c.missing_vector,
            })
        })
        .collect();
    let (lp, lq, lr) = report.generators.relabeled();
    let outputs = json!({
        "triple": [p, q, r],
        "relabeled": [lp, lq, lr],
        "n": report.generators.n(),
        "verdict": verdict,
        "point_group_order": report.point_group_order,
        "rotations_surject": report.rotations_surject,
        "invariant_factors": report
            .invariant_factors
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>(),
        "lattice_index": report.lattice_index.as_ref().map(|d| d.to_string()),
        "certified_translations": report.translation_certificates.len(),
        "witness_chain_length": report.witness_chain.as_ref().map(|c| c.len()),
        "prime_checks": prime_checks,
    });
    let mut text = vec![
        format!(
            "triple ({p}, {q}, {r}), labeled ({lp}, {lq}, {lr}), level n = {}",
            report.generators.n()
        ),
        format!(
            "point group: order {} (full group: {})",
            report.point_group_order, report.rotations_surject
        ),
        format!(
            "collected translation lattice: invariant factors {:?}, index {}",
            report
                .invariant_factors
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>(),
            report
                .lattice_index
                .as_ref()
                .map_or("infinite".to_string(), |d| d.to_string())
        ),
        format!(
            "certified translations: {}; membership chain: {}",
            report.translation_certificates.len(),
            report
                .witness_chain
                .as_ref()
                .map_or("not applicable (degenerate labeling)".to_string(), |c| {
                    format!("{} certificates", c.len())
                })
        ),
    ];
    match &report.verdict {
        Verdict::Generated => text.push("verdict: generated".to_string()),
        Verdict::Obstructed {
            prime,
            lattice_index,
        } => {
            text.push(format!(
                "verdict: obstructed mod {prime} (lattice index {})",
                lattice_index
                    .as_ref()
                    .map_or("infinite".to_string(), |d| d.to_string())
            ));
            if let Some(check) = report.prime_checks.iter().find(|c| c.prime == *prime) {
                text.push(format!(
                    "  witness: mod-{prime} span has dimension {} of {}; missing vector {:?}",
                    check.submodule_dim, check.ambient_dim, check.missing_vector
                ));
            }
        }
        Verdict::Inconclusive { reason } => text.push(format!("verdict: inconclusive ({reason})")),
    }
    Ok(CmdOut {
        outputs,
        flags: Vec::new(),
        text,
    })
}

fn order(n: u64, k: i64, reflection: bool, vec: Option<&str>) -> Result<CmdOut, String> {
    if n < 3 {
        return Err(format!("the dihedral level must be at least 3, got {n}"));
    }
    let phi = arith::totient(n) as usize;
    let v: Vec<BigInt> = match vec {
        None => vec![BigInt::from(0); phi],
        Some(s) => {
            let parsed: Result<Vec<BigInt>, String> = s
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map(BigInt::from)
                        .map_err(|_| format!("malformed coordinate {x:?}"))
                })
                .collect();
            parsed?
        }
    };
    let h = DihedralElement::new(n, k as i128, reflection);
    let element = AffineElement::new(v, h).map_err(|e| e.to_string())?;
    let result = affine_order(&element);
    let order_json = match result {
        AffineOrder::Finite(f) => json!(f),
        AffineOrder::Infinite => json!("infinite"),
    };
    let outputs = json!({
        "n": n,
        "element": element.to_string(),
        "order": order_json,
    });
    let text = vec![format!("order of {element} is {result}")];
    Ok(CmdOut {
        outputs,
        flags: Vec::new(),
        text,
    })
}
