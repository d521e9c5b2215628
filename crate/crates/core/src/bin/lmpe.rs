use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lmpe::bounds::{gv_bound, sphere_packing, BoundVariant};
use lmpe::classify::{
    build_reduced_table, find_critical_vectors, remainder_error_patterns, ReducedClassTable, TABLE_ONE,
};
use lmpe::constructions::{parse_messages, CodeSpec, LmpeCode, Variant};
use lmpe::field::{format_poly, Field};
use lmpe::gray::{gray_efficiency, gray_search, GrayMapping, GrayPolicy};
use lmpe::prob::parse_words;
use lmpe::sim::{simulate, simulate_exhaustive, EXHAUSTIVE_GUARD};
use lmpe::{LmpeError, Result};

/// Codes for composite DNA symbols under limited-magnitude probability
/// errors.
#[derive(Parser)]
#[command(name = "lmpe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from a JSON spec and print its parameters as JSON.
    Build(CodeArgs),
    /// Encode messages (`x1,x2,x3,x4;... | i1,i2,...`, one per line).
    Encode(StreamArgs),
    /// Decode codewords (`x1,x2,x3,x4;...`, one per line) into messages.
    Decode(StreamArgs),
    /// Run random or exhaustive error trials and print a JSON report.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Master seed; defaults to the code file's seed, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Decode every (l,t) error of each of `--trials` codewords.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = EXHAUSTIVE_GUARD)]
        guard: u64,
    },
    /// Bound sweeps as CSV. Columns `t,SPB_rate,GVB_rate`, or
    /// `k,efficiency` with `--efficiency`.
    Bounds {
        #[arg(long, default_value_t = 1023)]
        n: usize,
        /// Resolution, or a range `a..b` with `--efficiency`.
        #[arg(long, default_value = "100")]
        k: String,
        /// Number of symbol errors, a value or a range `a..b`.
        #[arg(long, default_value = "1..15")]
        t: String,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value = "relaxed")]
        variant: BoundVariant,
        /// Accepted for compatibility; output is always CSV.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        efficiency: bool,
        #[arg(long, default_value_t = 27)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        g: u32,
    },
    /// Greedy Gray mapping search; prints `digits -> x1,x2,x3,x4` lines.
    SearchGray {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        g: u32,
        /// Explore magnitude-`m` balls instead of `2l`.
        #[arg(long)]
        neighbor_magnitude: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List critical vectors for magnitude `l`, one per line.
    SearchCritical {
        #[arg(long)]
        l: u32,
    },
    /// Print a classification or error-pattern table.
    Tables {
        #[arg(value_enum)]
        table: Table,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value_t = 12)]
        k: u32,
        /// Critical vector for `reduced`, e.g. `1,1,1,0`.
        #[arg(long)]
        critical: Option<String>,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    /// Remainder vectors and their GF(27) elements.
    Table1,
    /// Critical vectors for l = 1..4.
    Table3,
    /// Remainder error patterns in GF((2l+1)^3).
    Table5,
    /// Reduced classes for `--l`, `--k`, `--critical`.
    Reduced,
}

#[derive(clap::Args)]
struct CodeArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Gray mapping file for systematic codes; searched when absent.
    #[arg(long)]
    gray: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct StreamArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Input file; stdin when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_code(args: &CodeArgs) -> Result<LmpeCode> {
    let spec = CodeSpec::from_json(&fs::read_to_string(&args.spec)?).map_err(|e| match e {
        LmpeError::Json(j) => LmpeError::Parse {
            line: j.line(),
            msg: j.to_string(),
        },
        other => other,
    })?;
    match (&args.gray, spec.variant) {
        (Some(path), Variant::Systematic) => {
            let text = fs::read_to_string(path)?;
            let q = spec.q.unwrap_or((2 * spec.l + 1).pow(3));
            let gray = GrayMapping::from_text(&text, spec.k, spec.l, q, spec.g.unwrap_or(2))?;
            LmpeCode::build_with_gray(&spec, gray)
        }
        _ => LmpeCode::build(&spec),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || LmpeError::InvalidParameter(format!("expected `a` or `a..b`, got `{s}`"));
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let a = num(s)?;
            Ok(a..=a)
        }
    }
}

fn fmt_vec(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn render(rows: &[Vec<String>], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        for r in rows {
            out.push_str(&r.iter().map(|c| if c.contains(',') { format!("\"{c}\"") } else { c.clone() }).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        return out;
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn reduced_rows(table: &ReducedClassTable) -> Vec<Vec<String>> {
    let mut rows = vec![std::iter::once("class".to_string())
        .chain((0..table.num_cols()).map(|c| format!("col{c}")))
        .collect()];
    for (i, row) in table.rows().iter().enumerate() {
        rows.push(
            std::iter::once(i.to_string())
                .chain(row.iter().map(|b| fmt_vec(b)))
                .collect(),
        );
    }
    rows
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build(args) => {
            let code = load_code(&args)?;
            let json = serde_json::to_string_pretty(&code.summary())?;
            write_output(args.out.as_deref(), &(json + "\n"))
        }
        Command::Encode(args) => {
            let code = load_code(&args.code)?;
            let messages = parse_messages(&read_input(args.input.as_deref())?)?;
            let mut out = String::new();
            for m in &messages {
                out.push_str(&code.encode(m)?.to_string());
                out.push('\n');
            }
            write_output(args.code.out.as_deref(), &out)
        }
        Command::Decode(args) => {
            let code = load_code(&args.code)?;
            let words = parse_words(&read_input(args.input.as_deref())?, Some(code.k()))?;
            let mut out = String::new();
            for w in &words {
                out.push_str(&code.decode(w)?.message.to_string());
                out.push('\n');
            }
            write_output(args.code.out.as_deref(), &out)
        }
        Command::Simulate {
            code,
            trials,
            seed,
            exhaustive,
            guard,
        } => {
            let lc = load_code(&code)?;
            let seed = seed.or(lc.spec().seed).unwrap_or(0);
            let report = if exhaustive {
                simulate_exhaustive(&lc, trials, seed, guard)?
            } else {
                simulate(&lc, trials, seed)?
            };
            let json = serde_json::to_string_pretty(&report)?;
            write_output(code.out.as_deref(), &(json + "\n"))
        }
        Command::Bounds {
            n,
            k,
            t,
            l,
            variant,
            csv: _,
            efficiency,
            q,
            g,
        } => {
            let mut out = String::new();
            if efficiency {
                out.push_str("k,efficiency\n");
                for k in parse_range(&k)? {
                    let e = gray_efficiency(q, g, k as u32);
                    out.push_str(&format!("{k},{:.6}\n", e.value()));
                }
            } else {
                let k: u32 = k
                    .parse()
                    .map_err(|_| LmpeError::InvalidParameter(format!("bad resolution `{k}`")))?;
                out.push_str("t,SPB_rate,GVB_rate\n");
                for t in parse_range(&t)? {
                    let t = t as usize;
                    let spb = sphere_packing(n, k, t, l, variant)?;
                    let gvb = gv_bound(n, k, t, l)?;
                    out.push_str(&format!("{t},{:.6},{:.6}\n", spb.rate, gvb.rate));
                }
            }
            write_output(None, &out)
        }
        Command::SearchGray {
            k,
            l,
            q,
            g,
            neighbor_magnitude,
            out,
        } => {
            let policy = GrayPolicy {
                neighbor_magnitude,
                ..GrayPolicy::default()
            };
            let m = gray_search(k, l, q, g, &policy)?;
            write_output(out.as_deref(), &m.to_text())
        }
        Command::SearchCritical { l } => {
            let mut out = String::new();
            for b in find_critical_vectors(l) {
                out.push_str(&fmt_vec(&b));
                out.push('\n');
            }
            write_output(None, &out)
        }
        Command::Tables {
            table,
            l,
            k,
            critical,
            csv,
        } => {
            let rows: Vec<Vec<String>> = match table {
                Table::Table1 => {
                    let mut rows = vec![vec!["remainder".to_string(), "element".to_string()]];
                    rows.extend(TABLE_ONE.iter().map(|(b, e)| vec![fmt_vec(b), e.to_string()]));
                    rows
                }
                Table::Table3 => {
                    let mut rows = vec![vec!["l".to_string(), "critical".to_string()]];
                    for l in 1..=4 {
                        for b in find_critical_vectors(l) {
                            rows.push(vec![l.to_string(), fmt_vec(&b)]);
                        }
                    }
                    rows
                }
                Table::Table5 => {
                    let d = 2 * l + 1;
                    let field = Field::new(d, 3, None)?;
                    let mut rows = vec![vec![
                        "pattern".to_string(),
                        "power".to_string(),
                        "polynomial".to_string(),
                        "integer".to_string(),
                    ]];
                    let mut entries = remainder_error_patterns(l)
                        .into_iter()
                        .map(|p| Ok((field.from_poly(&p[..3])?, p)))
                        .collect::<Result<Vec<_>>>()?;
                    entries.sort_by_key(|(e, _)| *e);
                    for (e, p) in entries {
                        let power = field.log(e)?;
                        rows.push(vec![
                            fmt_vec(&p),
                            format!("α^{power}"),
                            format_poly(&field.to_poly(e)),
                            e.value().to_string(),
                        ]);
                    }
                    rows
                }
                Table::Reduced => {
                    let critical = match critical {
                        Some(c) => {
                            let v: Vec<u32> = c
                                .split(',')
                                .map(|x| x.trim().parse::<u32>())
                                .collect::<std::result::Result<_, _>>()
                                .map_err(|_| LmpeError::InvalidParameter(format!("bad vector `{c}`")))?;
                            <[u32; 4]>::try_from(v)
                                .map_err(|_| LmpeError::InvalidParameter(format!("`{c}` needs 4 entries")))?
                        }
                        None => *find_critical_vectors(l)
                            .first()
                            .ok_or_else(|| LmpeError::SearchFailed(format!("no critical vector for l = {l}")))?,
                    };
                    reduced_rows(&build_reduced_table(l, k, critical)?)
                }
            };
            write_output(None, &render(&rows, csv))
        }
    }
}

fn exit_code(e: &LmpeError) -> u8 {
    match e {
        LmpeError::InvalidParameter(_) | LmpeError::GuardExceeded(_) => 2,
        LmpeError::Parse { .. } | LmpeError::InvalidSymbol { .. } | LmpeError::Json(_) | LmpeError::Io(_) => 3,
        LmpeError::DecodeFailure(_) => 4,
        LmpeError::SearchFailed(_) => 5,
        LmpeError::DivisionByZero | LmpeError::LogOfZero => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lmpe: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
