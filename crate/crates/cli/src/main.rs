use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cremona_core::catalog::{coble_conditions, csv_rows, enumerate_roots, residue_counts_mod2};
use cremona_core::config::{act_by_word, is_coble_set, is_unnodal_halphen, projectively_equivalent, PointConfiguration};
use cremona_core::cubic::{classify_cubic, harbourne_check, KernelDescription, TernaryCubic};
use cremona_core::field::Field;
use cremona_core::lattice::{gram_matrix, simple_roots, LatticeIsometry, LatticeVector};
use cremona_core::residue::{find_root_in_submodule, ResidueModule, ResidueSubmodule, SearchBudget, SearchMethod};
use cremona_core::weyl::{classify_isometry, noether_reduce, word_to_isometry, IsometryClass, WeylWord};
use cremona_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser)]
#[command(name = "cremona", version, about = "Weyl group actions on blow-ups of the plane")]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized searches
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Step logs on stderr
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Theory,
    Bfs,
}

#[derive(Subcommand)]
enum Command {
    /// Gram matrix of the simple roots
    Gram {
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Roots of bounded degree, as CSV
    EnumerateRoots {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// The residue families of the Coble conditions
    CobleConditions,
    /// Isotropic and norm-one residue counts mod 2
    ResidueCounts,
    /// Elliptic / parabolic / hyperbolic type of an isometry
    Classify {
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Weyl word, e.g. [0,1,2]
        #[arg(long)]
        word: Option<String>,
        /// Integer matrix rows (inline JSON or file)
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Noether reduction of a root
    Reduce {
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Root as JSON (inline or file)
        #[arg(long)]
        vector: String,
    },
    /// Unnodal Halphen test for 9 points
    HalphenCheck {
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Coble test for 10 points
    CobleCheck {
        #[arg(long)]
        config: String,
    },
    /// Kernel of the restriction map for points on the cuspidal cubic y^2 z = x^3
    HarbourneCheck {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// JSON array of cusp parameters
        #[arg(long)]
        params: String,
    },
    /// Cremona action of a Weyl word on a configuration
    CremonaAct {
        #[arg(long)]
        config: String,
        #[arg(long)]
        word: String,
    },
    /// Whether a word fixes a configuration up to projective equivalence
    OrbitFixed {
        #[arg(long)]
        config: String,
        #[arg(long)]
        word: String,
    },
    /// A root of E_10 with residue in a submodule of E_10 / m
    FindRootMod {
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Method::Bfs)]
        method: Method,
        /// JSON {"generators": [[...], ...]}; a random rank-8 submodule otherwise
        #[arg(long)]
        submodule: Option<String>,
        /// Word length (theory) or depth (bfs) bound
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Summary of the standard checks
    Report,
}

/// Inline JSON, or the contents of a file.
fn read_json(arg: &str) -> Result<Value> {
    let t = arg.trim();
    let text = if t.starts_with('[') || t.starts_with('{') {
        t.to_string()
    } else {
        std::fs::read_to_string(t).map_err(|e| Error::invalid(format!("cannot read {t}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

fn read_word(arg: &str) -> Result<WeylWord> {
    serde_json::from_value(read_json(arg)?).map_err(|e| Error::Parse(format!("word: {e}")))
}

fn read_config(arg: &str) -> Result<PointConfiguration> {
    PointConfiguration::from_json(&read_json(arg)?)
}

fn read_matrix(arg: &str) -> Result<LatticeIsometry> {
    let rows: Vec<LatticeVector> =
        serde_json::from_value(read_json(arg)?).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
    LatticeIsometry::from_rows(rows.into_iter().map(|r| r.into_coords()).collect())
}

fn emit(json: bool, text: String, value: Value) -> String {
    if json {
        serde_json::to_string_pretty(&value).unwrap() + "\n"
    } else {
        text
    }
}

fn run(cli: &Cli) -> Result<String> {
    let json = cli.json;
    match &cli.command {
        Command::Gram { n } => {
            let g = gram_matrix(&simple_roots(*n)?)?;
            let text = g
                .iter()
                .map(|r| r.iter().map(|x| format!("{x:>3}")).collect::<Vec<_>>().join(""))
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            let rows: Vec<Vec<String>> = g.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            Ok(emit(json, text, json!({ "n": n, "gram": rows })))
        }
        Command::EnumerateRoots { n, max_degree } => {
            let roots = enumerate_roots(*n, *max_degree)?;
            if json {
                return Ok(serde_json::to_string_pretty(&roots).unwrap() + "\n");
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in csv_rows(&roots)? {
                w.write_record(&row).map_err(|e| Error::invalid(e.to_string()))?;
            }
            Ok(String::from_utf8(w.into_inner().unwrap()).unwrap())
        }
        Command::CobleConditions => {
            let fams = coble_conditions();
            let mut text = String::new();
            for f in &fams {
                writeln!(text, "{} count={} representative={}", f.label, f.members.len(), f.representative).unwrap();
            }
            writeln!(text, "families={} total={}", fams.len(), fams.iter().map(|f| f.members.len()).sum::<usize>()).unwrap();
            let v = serde_json::to_value(&fams).unwrap();
            Ok(emit(json, text, v))
        }
        Command::ResidueCounts => {
            let (iso, one) = residue_counts_mod2();
            Ok(emit(
                json,
                format!("isotropic={iso} norm_one={one}\n"),
                json!({ "isotropic": iso, "norm_one": one }),
            ))
        }
        Command::Classify { n, word, matrix } => {
            let g = match (word, matrix) {
                (Some(w), None) => word_to_isometry(&read_word(w)?, *n)?,
                (None, Some(m)) => read_matrix(m)?,
                _ => return Err(Error::invalid("give exactly one of --word and --matrix")),
            };
            let (text, v) = match classify_isometry(&g)? {
                IsometryClass::Elliptic { order, invariant } => (
                    format!("kind=elliptic order={order} invariant={invariant}\n"),
                    json!({ "kind": "elliptic", "order": order.to_string(), "invariant": invariant }),
                ),
                IsometryClass::Parabolic { witness } => (
                    format!("kind=parabolic witness={witness}\n"),
                    json!({ "kind": "parabolic", "witness": witness }),
                ),
                IsometryClass::Hyperbolic { spectral_radius } => (
                    format!("kind=hyperbolic spectral_radius={spectral_radius:.12}\n"),
                    json!({ "kind": "hyperbolic", "spectral_radius": spectral_radius }),
                ),
            };
            Ok(emit(json, text, v))
        }
        Command::Reduce { n, vector } => {
            let v: LatticeVector =
                serde_json::from_value(read_json(vector)?).map_err(|e| Error::Parse(format!("vector: {e}")))?;
            let red = noether_reduce(&v, *n)?;
            if cli.trace {
                for line in red.trace_lines() {
                    eprintln!("{line}");
                }
            }
            Ok(emit(
                json,
                format!("terminal={} word={} steps={}\n", red.terminal, red.word, red.steps.len()),
                serde_json::to_value(&red).unwrap(),
            ))
        }
        Command::HalphenCheck { config, m } => {
            let cfg = read_config(config)?;
            let v = is_unnodal_halphen(&cfg, *m)?;
            let text = match &v.witness {
                None => format!("unnodal=true classes_checked={}\n", v.classes_checked),
                Some(w) => format!("unnodal=false witness={w} classes_checked={}\n", v.classes_checked),
            };
            Ok(emit(
                json,
                text,
                json!({ "unnodal": v.unnodal, "witness": v.witness, "classes_checked": v.classes_checked, "field": cfg.field().descriptor() }),
            ))
        }
        Command::CobleCheck { config } => {
            let cfg = read_config(config)?;
            let r = is_coble_set(&cfg)?;
            let text = match &r.violated {
                None => format!("coble={} sextic_dimension={}\n", r.is_coble, r.sextic_dimension),
                Some((k, c)) => format!("coble=false sextic_dimension={} violated={k} class={c}\n", r.sextic_dimension),
            };
            let violated = r.violated.as_ref().map(|(k, c)| json!({ "kind": k.to_string(), "class": c }));
            Ok(emit(
                json,
                text,
                json!({ "coble": r.is_coble, "sextic_dimension": r.sextic_dimension, "violated": violated, "field": cfg.field().descriptor() }),
            ))
        }
        Command::HarbourneCheck { p, e, params } => {
            let f = Field::new(*p, *e)?;
            let ts = match read_json(params)? {
                Value::Array(a) => a.iter().map(|x| f.from_json(x)).collect::<Result<Vec<_>>>()?,
                _ => return Err(Error::Parse("params must be a JSON array".into())),
            };
            let c = classify_cubic(&TernaryCubic::weierstrass(f.clone(), [0, 0, 0, 0, 0])?)?;
            let pts = ts.iter().map(|t| c.point_from_parameter(t)).collect::<Result<Vec<_>>>()?;
            let h = harbourne_check(&c, &pts)?;
            let (kernel, witness) = match &h.kernel {
                KernelDescription::PKPerp => ("pK_perp", None),
                KernelDescription::Larger { root } => ("larger", root.clone()),
            };
            let mut text = format!("harbourne={} kernel={kernel}", h.is_harbourne);
            if !h.is_harbourne {
                write!(text, " rank={}", h.rank).unwrap();
                match &witness {
                    Some(w) => write!(text, " witness={w}").unwrap(),
                    None => text.push_str(" witness=none"),
                }
            }
            text.push('\n');
            Ok(emit(
                json,
                text,
                json!({ "harbourne": h.is_harbourne, "kernel": kernel, "rank": h.rank, "n": h.n, "witness": witness, "field": f.descriptor() }),
            ))
        }
        Command::CremonaAct { config, word } => {
            let cfg = read_config(config)?;
            let out = act_by_word(&cfg, &read_word(word)?)?;
            Ok(serde_json::to_string_pretty(&out.to_json()).unwrap() + "\n")
        }
        Command::OrbitFixed { config, word } => {
            let cfg = read_config(config)?;
            let out = act_by_word(&cfg, &read_word(word)?)?;
            let t = projectively_equivalent(&cfg, &out)?;
            let f = cfg.field();
            let rows: Option<Vec<Vec<Value>>> =
                t.as_ref().map(|m| m.iter().map(|r| r.iter().map(|x| f.to_json(x)).collect()).collect());
            let mut text = format!("fixed={}\n", t.is_some());
            if let Some(m) = &t {
                for r in m {
                    writeln!(text, "{}", r.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(" ")).unwrap();
                }
            }
            Ok(emit(json, text, json!({ "fixed": t.is_some(), "transform": rows })))
        }
        Command::FindRootMod { m, method, submodule, budget } => {
            let l = ResidueModule::new(*m)?;
            let v = match submodule {
                Some(s) => {
                    let val = read_json(s)?;
                    let gens: Vec<Vec<u64>> = serde_json::from_value(val.get("generators").cloned().unwrap_or(Value::Null))
                        .map_err(|e| Error::Parse(format!("generators: {e}")))?;
                    let gens = gens.into_iter().map(|g| g.into_iter().map(|x| x % m).collect()).collect();
                    ResidueSubmodule::new(l, gens)?
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    loop {
                        let s = ResidueSubmodule::random(l.clone(), 8, &mut rng);
                        if s.free_rank() == 8 {
                            break s;
                        }
                    }
                }
            };
            let mut b = SearchBudget::default();
            let method = match method {
                Method::Theory => {
                    if let Some(x) = budget {
                        b.max_length = *x;
                    }
                    SearchMethod::Theory
                }
                Method::Bfs => {
                    b.max_depth = *budget;
                    SearchMethod::OrbitBfs
                }
            };
            let c = find_root_in_submodule(&v, method, b)?;
            if cli.trace {
                eprintln!("word length {}", c.word.len());
            }
            let text = format!(
                "# seed={} m={} method={}\nroot={} word={} residue={:?}\n",
                cli.seed,
                m,
                c.method,
                c.root,
                c.word,
                c.residue
            );
            Ok(emit(json, text, c.to_json()))
        }
        Command::Report => report(cli),
    }
}

fn report(cli: &Cli) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# cremona-core {} seed={}", cremona_core::VERSION, cli.seed).unwrap();
    for n in [9usize, 10, 11] {
        let g = gram_matrix(&simple_roots(n)?)?;
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| g[i][j] == 1.into()).count();
        writeln!(out, "gram n={n} diagonal=-2 edges={edges}").unwrap();
    }
    let (iso, one) = residue_counts_mod2();
    writeln!(out, "residues mod 2: isotropic={iso} norm_one={one}").unwrap();
    let fams = coble_conditions();
    writeln!(out, "coble families={} integral_classes={}", fams.len(), fams.iter().map(|f| f.members.len()).sum::<usize>()).unwrap();
    let cox = WeylWord::new((0..10).collect());
    if let IsometryClass::Hyperbolic { spectral_radius } = classify_isometry(&word_to_isometry(&cox, 10)?)? {
        writeln!(out, "coxeter element n=10: hyperbolic spectral_radius={spectral_radius:.12}").unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    for m in 2..=6u64 {
        let l = ResidueModule::new(m)?;
        let v = loop {
            let s = ResidueSubmodule::random(l.clone(), 8, &mut rng);
            if s.free_rank() == 8 {
                break s;
            }
        };
        let budget = SearchBudget {
            max_depth: Some(16),
            ..Default::default()
        };
        match find_root_in_submodule(&v, SearchMethod::OrbitBfs, budget) {
            Ok(c) => writeln!(out, "root mod {m}: {} (word length {})", c.root, c.word.len()).unwrap(),
            Err(e) => writeln!(out, "root mod {m}: {e}").unwrap(),
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
