//! Command-line front end: exact distributions, counting checks and the
//! desk verification suite, with JSON/CSV/pretty output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use apncodes::codes::{dual_min_distance_at_most, make_code, weight_distribution};
use apncodes::error::Error;
use apncodes::expsums::{
    n4_convolution, n4_formula, n4_naive, pair_distribution, s_distribution, t0_distribution,
    t_distribution,
};
use apncodes::field::{cyclotomic_coset, FieldCtx};
use apncodes::report::run_desk_suite;
use apncodes::tables::{
    apn_exponent_families, classify_exponent, enumerate_cc_exponents, generate_table, TableData,
    TableId,
};

#[derive(Parser)]
#[command(
    name = "apncodes",
    version,
    about = "Exact value and weight distributions of cyclic codes from PN/APN power maps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for exhaustive scans (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Work budget in outer evaluations (default: APNCODES_BUDGET or 10^8)
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Bruteforce,
    Formula,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SumKind {
    T0,
    T,
    S,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build GF(p^m) and print its descriptor
    Field {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        /// Comma-separated modulus coefficients, constant term first
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Cyclotomic cosets modulo q - 1
    Cosets {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        /// Single coset of j; all representatives when omitted
        #[arg(long)]
        j: Option<u64>,
    },
    /// Certificates for exponents: congruence-condition witnesses and tables
    Exponents {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        /// Classify this exponent; enumerate all classes when omitted
        #[arg(long)]
        e: Option<u64>,
        /// List the APN exponent families instead (p = 3 only)
        #[arg(long)]
        apn: bool,
    },
    /// Weight distribution of C(1,e) or C(1,e,s)
    Weights {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        e: u64,
        /// Add the exponent s = (q-1)/2 as a third parity-check zero
        #[arg(long)]
        with_s: bool,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Value distribution of an exponential sum over GF(q)^2 (and Omega)
    Expsum {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum)]
        kind: SumKind,
        /// k parameter for T0 (exponent p^k + 1)
        #[arg(long)]
        k: Option<u64>,
        /// e parameter for T and S
        #[arg(long)]
        e: Option<u64>,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Joint value distribution of (T0(a,b), T0(-a,b))
    Pairdist {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Solution count of the four-variable system, formula vs enumeration
    N4 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Count with the naive q^4 loop instead of the convolution
        #[arg(long)]
        naive: bool,
    },
    /// Bounded search for the dual minimum distance
    Dualdist {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        with_s: bool,
        #[arg(long, default_value_t = 5)]
        bound: u64,
    },
    /// Run a verification suite and report every check
    Verify {
        #[arg(long, default_value = "desk")]
        suite: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        modulus: Option<String>,
    },
}

/// Output of one subcommand in all three formats; `mismatch` drives exit 1.
struct CmdOut {
    json: Value,
    csv: String,
    pretty: String,
    mismatch: bool,
}

fn parse_modulus(s: &Option<String>) -> Result<Option<Vec<u64>>, Error> {
    match s {
        None => Ok(None),
        Some(s) => s
            .split(',')
            .map(|c| c.trim().parse::<u64>())
            .collect::<Result<Vec<u64>, _>>()
            .map(Some)
            .map_err(|_| Error::Usage(format!("cannot parse modulus '{s}'"))),
    }
}

fn dist_csv(caption: &str, rows: &[(String, String)]) -> String {
    let mut out = format!("# {caption}\nvalue,count\n");
    for (v, c) in rows {
        out.push_str(&format!("\"{v}\",{c}\n"));
    }
    out
}

fn value_dist_rows(d: &apncodes::expsums::ValueDist) -> Vec<(String, String)> {
    d.entries
        .iter()
        .map(|(v, c)| (v.pretty(), c.to_string()))
        .collect()
}

fn weight_dist_rows(d: &apncodes::codes::WeightDist) -> Vec<(String, String)> {
    d.entries
        .iter()
        .map(|(w, c)| (w.to_string(), c.to_string()))
        .collect()
}

fn run(cli: &Cli) -> Result<CmdOut, Error> {
    let budget = cli.budget.unwrap_or_else(apncodes::default_budget);
    match &cli.cmd {
        Cmd::Field { p, m, modulus } => {
            let modulus = parse_modulus(modulus)?;
            let ctx = FieldCtx::new(*p, *m, modulus.as_deref())?;
            let json = ctx.descriptor();
            let pretty = format!(
                "GF({}^{}) with modulus {:?} (primitive)\n",
                p,
                m,
                ctx.modulus()
            );
            let csv = format!("p,m,modulus\n{},{},\"{:?}\"\n", p, m, ctx.modulus());
            Ok(CmdOut {
                json,
                csv,
                pretty,
                mismatch: false,
            })
        }
        Cmd::Cosets { p, m, j } => {
            let n = p
                .checked_pow(*m)
                .filter(|&q| q <= 10_000_000)
                .ok_or_else(|| Error::Usage("q out of range".into()))?
                - 1;
            let cosets: Vec<_> = match j {
                Some(j) => vec![cyclotomic_coset(*p, n, *j % n)],
                None => {
                    let mut seen = vec![false; n as usize];
                    let mut out = Vec::new();
                    for j in 0..n {
                        if !seen[j as usize] {
                            let c = cyclotomic_coset(*p, n, j);
                            for &t in &c.members {
                                seen[t as usize] = true;
                            }
                            out.push(c);
                        }
                    }
                    out
                }
            };
            let json = json!({
                "p": p, "m": m, "n": n,
                "cosets": cosets.iter().map(|c| json!({
                    "representative": c.representative,
                    "members": c.members,
                })).collect::<Vec<_>>(),
            });
            let mut csv = String::from("representative,size,members\n");
            let mut pretty = String::new();
            for c in &cosets {
                csv.push_str(&format!(
                    "{},{},\"{:?}\"\n",
                    c.representative,
                    c.members.len(),
                    c.members
                ));
                pretty.push_str(&format!("G_{} = {:?}\n", c.representative, c.members));
            }
            Ok(CmdOut {
                json,
                csv,
                pretty,
                mismatch: false,
            })
        }
        Cmd::Exponents { p, m, e, apn } => {
            if p.checked_pow(*m)
                .map_or(true, |q| e.is_none() && q > 10_000_000)
            {
                return Err(Error::Usage(
                    "q too large to enumerate exponent classes".into(),
                ));
            }
            if *apn {
                if *p != 3 {
                    return Err(Error::Usage("--apn requires p = 3".into()));
                }
                let fams = apn_exponent_families(*m);
                let json = json!({
                    "p": p, "m": m,
                    "families": fams.iter().map(|f| json!({
                        "family": f.family,
                        "e": f.e,
                        "companion_d": f.companion_d,
                        "certificate": classify_exponent(*p, *m, f.e).to_json(),
                    })).collect::<Vec<_>>(),
                });
                let mut csv = String::from("family,e,companion_d\n");
                let mut pretty = String::new();
                for f in &fams {
                    csv.push_str(&format!("{},{},{}\n", f.family, f.e, f.companion_d));
                    pretty.push_str(&format!(
                        "family {}: e = {}, companion d = {}\n",
                        f.family, f.e, f.companion_d
                    ));
                }
                return Ok(CmdOut {
                    json,
                    csv,
                    pretty,
                    mismatch: false,
                });
            }
            match e {
                Some(e) => {
                    let cert = classify_exponent(*p, *m, *e);
                    let pretty = format!("{}\n", cert.to_json());
                    Ok(CmdOut {
                        json: cert.to_json(),
                        csv: format!(
                            "e,coset_rep,cc_witness,thm1i_witness,tables\n{},{},\"{:?}\",\"{:?}\",\"{:?}\"\n",
                            cert.e, cert.coset_rep, cert.cc_witness, cert.thm1i_witness,
                            cert.table_ids.iter().map(|t| t.code()).collect::<Vec<_>>()
                        ),
                        pretty,
                        mismatch: false,
                    })
                }
                None => {
                    let (reps, census) = enumerate_cc_exponents(*p, *m);
                    let json = json!({
                        "p": p, "m": m,
                        "classes": reps.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                        "census": {
                            "coset_classes": census.coset_classes,
                            "expected_classes": census.expected_classes,
                        },
                    });
                    let mut csv = String::from("coset_rep,parity,tables\n");
                    let mut pretty = String::new();
                    for c in &reps {
                        let tables: Vec<_> = c.table_ids.iter().map(|t| t.code()).collect();
                        csv.push_str(&format!(
                            "{},{},\"{:?}\"\n",
                            c.coset_rep,
                            if c.parity_even { "even" } else { "odd" },
                            tables
                        ));
                        pretty.push_str(&format!(
                            "e = {} ({}), tables {:?}\n",
                            c.coset_rep,
                            if c.parity_even { "even" } else { "odd" },
                            tables
                        ));
                    }
                    pretty.push_str(&format!(
                        "{} classes (phi-census reference: {})\n",
                        census.coset_classes, census.expected_classes
                    ));
                    Ok(CmdOut {
                        json,
                        csv,
                        pretty,
                        mismatch: false,
                    })
                }
            }
        }
        Cmd::Weights {
            p,
            m,
            e,
            with_s,
            mode,
            modulus,
        } => {
            let modulus = parse_modulus(modulus)?;
            let ctx = FieldCtx::new(*p, *m, modulus.as_deref())?;
            let cert = classify_exponent(*p, *m, *e);
            let table_id = if *with_s {
                cert.cc_witness.map(|_| {
                    if cert.parity_even {
                        TableId::Thm5Even
                    } else {
                        TableId::Thm5Odd
                    }
                })
            } else {
                cert.weight_table()
            };
            let exps: Vec<u64> = if *with_s {
                vec![1, *e, ctx.n() / 2]
            } else {
                vec![1, *e]
            };
            let code = make_code(&ctx, &exps)?;
            let measured = if *mode != Mode::Formula {
                Some(weight_distribution(&ctx, &code, budget)?)
            } else {
                None
            };
            let formula = match (mode, table_id) {
                (Mode::Bruteforce, _) => None,
                (_, Some(id)) => {
                    let TableData::Weights(w) = generate_table(id, *p, *m)? else {
                        unreachable!()
                    };
                    Some(w)
                }
                (Mode::Formula, None) => {
                    return Err(Error::Usage(format!(
                        "no closed-form table applies to e = {e}"
                    )))
                }
                (Mode::Both, None) => None,
            };
            let matched = match (&measured, &formula) {
                (Some(a), Some(b)) => Some(a.entries == b.entries),
                _ => None,
            };
            let shown = measured.as_ref().or(formula.as_ref()).unwrap();
            let caption = table_id.map(|t| t.caption()).unwrap_or("no table");
            let json = json!({
                "code": code.name(),
                "p": p, "m": m, "e": e, "with_s": with_s,
                "dimension": code.dimension,
                "dist": shown.to_json()["dist"],
                "formula_table": table_id.map(|t| t.code()),
                "caption": table_id.map(|t| t.caption()),
                "match": matched,
            });
            let csv = dist_csv(caption, &weight_dist_rows(shown));
            let mut pretty = format!(
                "{} over GF({}^{}), dimension {}\n",
                code.name(),
                p,
                m,
                code.dimension
            );
            for (w, c) in weight_dist_rows(shown) {
                pretty.push_str(&format!("  weight {w}: {c}\n"));
            }
            if let Some(mt) = matched {
                pretty.push_str(&format!("matches {}: {}\n", table_id.unwrap().code(), mt));
            }
            Ok(CmdOut {
                json,
                csv,
                pretty,
                mismatch: matched == Some(false),
            })
        }
        Cmd::Expsum {
            p,
            m,
            kind,
            k,
            e,
            modulus,
        } => {
            let modulus = parse_modulus(modulus)?;
            let ctx = FieldCtx::new(*p, *m, modulus.as_deref())?;
            let (dist, table_id, params) = match kind {
                SumKind::T0 => {
                    let k = k.unwrap_or(1);
                    (
                        t0_distribution(&ctx, k, budget)?,
                        Some(TableId::T0Dist),
                        json!({"p": p, "m": m, "kind": "t0", "k": k}),
                    )
                }
                SumKind::T | SumKind::S => {
                    let e = e.ok_or_else(|| Error::Usage("--e is required for t/s".into()))?;
                    let cert = classify_exponent(*p, *m, e);
                    let id = if cert.cc_witness.is_some() && *p % 4 == 3 {
                        Some(match (kind, cert.parity_even) {
                            (SumKind::T, false) => TableId::TOdd,
                            (SumKind::T, true) => TableId::TEven,
                            (SumKind::S, false) => TableId::SOdd,
                            (SumKind::S, true) => TableId::SEven,
                            _ => unreachable!(),
                        })
                    } else {
                        None
                    };
                    let dist = match kind {
                        SumKind::T => t_distribution(&ctx, e, budget)?,
                        SumKind::S => s_distribution(&ctx, e, budget)?,
                        _ => unreachable!(),
                    };
                    (
                        dist,
                        id,
                        json!({
                            "p": p, "m": m,
                            "kind": if *kind == SumKind::T { "t" } else { "s" },
                            "e": e,
                        }),
                    )
                }
            };
            let matches_table = match table_id {
                Some(id) => match generate_table(id, *p, *m) {
                    Ok(TableData::Values(want)) => Some(dist == want),
                    _ => None,
                },
                None => None,
            };
            let caption = table_id.map(|t| t.caption()).unwrap_or("raw distribution");
            let json = json!({
                "params": params,
                "dist": dist.to_json()["dist"],
                "population": dist.population.to_string(),
                "matches_table": matches_table,
                "table": table_id.map(|t| t.code()),
                "caption": table_id.map(|t| t.caption()),
            });
            let csv = dist_csv(caption, &value_dist_rows(&dist));
            let mut pretty = format!("{}\n", json["params"]);
            for (v, c) in value_dist_rows(&dist) {
                pretty.push_str(&format!("  {v}: {c}\n"));
            }
            if let Some(mt) = matches_table {
                pretty.push_str(&format!("matches {}: {mt}\n", table_id.unwrap().code()));
            }
            Ok(CmdOut {
                json,
                csv,
                pretty,
                mismatch: matches_table == Some(false),
            })
        }
        Cmd::Pairdist { p, m, k, modulus } => {
            let modulus = parse_modulus(modulus)?;
            let ctx = FieldCtx::new(*p, *m, modulus.as_deref())?;
            let dist = pair_distribution(&ctx, *k, budget)?;
            let matches_table = match generate_table(TableId::Pair, *p, *m) {
                Ok(TableData::Pairs(want)) => Some(dist == want),
                _ => None,
            };
            let rows: Vec<(String, String)> = dist
                .entries
                .iter()
                .map(|((a, b), c)| (format!("({}, {})", a.pretty(), b.pretty()), c.to_string()))
                .collect();
            let json = json!({
                "params": {"p": p, "m": m, "k": k},
                "dist": dist.to_json()["dist"],
                "population": dist.population.to_string(),
                "matches_table": matches_table,
                "table": TableId::Pair.code(),
                "caption": TableId::Pair.caption(),
            });
            let csv = dist_csv(TableId::Pair.caption(), &rows);
            let mut pretty = String::new();
            for (v, c) in &rows {
                pretty.push_str(&format!("  {v}: {c}\n"));
            }
            if let Some(mt) = matches_table {
                pretty.push_str(&format!("matches {}: {mt}\n", TableId::Pair.code()));
            }
            Ok(CmdOut {
                json,
                csv,
                pretty,
                mismatch: matches_table == Some(false),
            })
        }
        Cmd::N4 {
            p,
            m,
            k,
            mode,
            naive,
        } => {
            let ctx = FieldCtx::new(*p, *m, None)?;
            let formula = n4_formula(*p, *m);
            let counted = if *mode != Mode::Formula {
                Some(if *naive {
                    n4_naive(&ctx, *k, budget)?
                } else {
                    n4_convolution(&ctx, *k, budget)?
                })
            } else {
                None
            };
            let matched = counted.as_ref().map(|c| *c == formula);
            let json = json!({
                "p": p, "m": m, "k": k,
                "strategy": if *naive { "naive" } else { "convolution" },
                "formula": formula.to_string(),
                "bruteforce": counted.as_ref().map(|c| c.to_string()),
                "match": matched,
            });
            let pretty = format!("{json}\n");
            let csv = format!(
                "formula,bruteforce,match\n{},{},{:?}\n",
                formula,
                counted.as_ref().map(|c| c.to_string()).unwrap_or_default(),
                matched
            );
            Ok(CmdOut {
                json,
                csv,
                pretty,
                mismatch: matched == Some(false),
            })
        }
        Cmd::Dualdist {
            p,
            m,
            e,
            with_s,
            bound,
        } => {
            let ctx = FieldCtx::new(*p, *m, None)?;
            let exps: Vec<u64> = if *with_s {
                vec![1, *e, ctx.n() / 2]
            } else {
                vec![1, *e]
            };
            let code = make_code(&ctx, &exps)?;
            let d = dual_min_distance_at_most(&ctx, &code, *bound, budget)?;
            let json = json!({
                "code": code.name(),
                "p": p, "m": m, "bound": bound,
                "distance": d,
            });
            let pretty = match d {
                Some(d) => format!("dual minimum distance of {} is {d}\n", code.name()),
                None => format!(
                    "dual of {} has no dependent set of size <= {bound}\n",
                    code.name()
                ),
            };
            let csv = format!("code,bound,distance\n{},{},{:?}\n", code.name(), bound, d);
            Ok(CmdOut {
                json,
                csv,
                pretty,
                mismatch: false,
            })
        }
        Cmd::Verify {
            suite,
            p,
            m,
            modulus,
        } => {
            if suite != "desk" {
                return Err(Error::Usage(format!("unknown suite '{suite}'")));
            }
            let modulus = parse_modulus(modulus)?;
            let report = run_desk_suite(*p, *m, budget, modulus.as_deref())?;
            Ok(CmdOut {
                json: report.to_json(),
                csv: report.to_csv(),
                pretty: report.pretty(),
                mismatch: !report.pass(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let work = || run(&cli);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(Error::Usage(format!("cannot build thread pool: {e}"))),
        },
        None => work(),
    };
    match result {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.json).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Csv => out.csv,
                Format::Pretty => out.pretty,
            };
            let write_result = match &cli.out {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = write_result {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if out.mismatch {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Error::IdentityViolated(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
