//! The `resfin` command line.
//!
//! Machine-readable results go to stdout as one `key=value` record per line;
//! human-readable commentary goes to stderr. Exit codes: 0 conclusive,
//! 1 a theorem check failed, 2 inconclusive, 64 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bench::{bench_f, bench_vn, BenchError, MAX_BENCH_LENGTH};
use crate::catalog::{enumerate_groups, handcoded_extension, standard_catalog, GroupCatalog, MAX_ENUMERATED};
use crate::detect::{
    abelian_k, is_law, k_w, psl2_witness, shortest_law, Detection, LawOutcome, Psl2Budget, Psl2Outcome, SearchPhase,
    ShortestLaw, DEFAULT_SHORTEST_LAW_CAP,
};
use crate::group::{cyclic, dihedral, symmetric, FiniteGroup};
use crate::law::{commutator_word, power_law, LawRecipe};
use crate::parse::{parse_word, parse_word_with_rank};
use crate::record::read_group;
use crate::small::MAX_KNOWN_ORDER;
use crate::stallings::{buskin_bound, divisibility, subgroup_graph, Divisibility};
use crate::word::{generator_name, Word};
use crate::wordgen::{random_reduced_words, reduced_words};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable naming the default catalog file.
pub const CATALOG_ENV: &str = "RESFIN_CATALOG";

#[derive(Debug, Parser)]
#[command(name = "resfin", version, about = "Laws, detection and divisibility in free groups")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (outputs do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CatalogArg {
    /// Catalog file; defaults to $RESFIN_CATALOG, else built in memory.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a law word.
    #[command(subcommand)]
    Lawgen(Lawgen),
    /// Compute k(w): the least order of a catalog group detecting w.
    Detect {
        word: String,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Decide whether a word is a law in a group.
    IsLaw {
        word: String,
        #[arg(long)]
        group: String,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Search for the shortest law of a group in F_2.
    ShortestLaw {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Find a PSL_2(F_p) tuple detecting w.
    Psl2Witness { word: String },
    /// Least order of an abelian group detecting an exponent vector.
    AbelianK {
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
    /// Compute D(w): the least index of a subgroup missing w.
    Divide {
        word: String,
        #[arg(long, default_value_t = 16)]
        max_index: usize,
    },
    /// Print the folded Stallings graph of a subgroup.
    Fold {
        /// Generators separated by `;`.
        #[arg(long)]
        generators: String,
    },
    /// Check D(w) ≤ ⌊|w|/2⌋ + 2 for reduced words of F_2.
    BuskinSweep {
        #[arg(long)]
        max_len: usize,
        /// Check this many random words instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Build or validate a catalog file.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Check v_n as a law over the catalog, for a range like `1..12`.
    BenchVn {
        range: String,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Maximum of k(w) over reduced words of each length.
    BenchF {
        #[arg(long, default_value_t = MAX_BENCH_LENGTH)]
        max_len: usize,
        #[command(flatten)]
        catalog: CatalogArg,
    },
}

#[derive(Debug, Subcommand)]
enum Lawgen {
    /// v_n = w_{n, n-1, ..., 1}.
    Vn { n: u64 },
    /// w_{r1, ..., rm} for a strictly decreasing list.
    Commutator { exponents: String },
    /// x^{n!}.
    Power { n: u64 },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// Enumerate groups and write a catalog.
    Build {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = MAX_KNOWN_ORDER)]
        max_order: usize,
    },
    /// Load and revalidate a catalog file.
    Validate { path: PathBuf },
}

/// An error that ends the command with a usage exit code.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

/// Buffered output streams; flushed once the command finishes.
#[derive(Default)]
struct Io {
    out: Vec<u8>,
    err: Vec<u8>,
}

impl Io {
    fn record(&mut self, fields: &[(&str, String)]) {
        let line: Vec<String> = fields.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        let _ = writeln!(self.out, "{}", line.join(" "));
    }

    fn say(&mut self, text: &str) {
        let _ = writeln!(self.err, "{}", text);
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{}", text);
            } else {
                let _ = write!(out, "{}", text);
            }
            return code;
        }
    };
    let mut io = Io::default();
    let code = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(pool) => match pool.install(|| dispatch(&cli, &mut io)) {
            Ok(code) => code,
            Err(Usage(msg)) => {
                io.say(&format!("error: {}", msg));
                EXIT_USAGE
            }
        },
        Err(e) => {
            io.say(&format!("error: {}", e));
            EXIT_USAGE
        }
    };
    let _ = out.write_all(&io.out);
    let _ = err.write_all(&io.err);
    code
}

fn load_catalog(arg: &CatalogArg) -> Result<GroupCatalog, Usage> {
    let path = arg
        .catalog
        .clone()
        .or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from));
    match path {
        Some(p) => GroupCatalog::load(&p).map_err(|e| Usage(format!("{}: {}", p.display(), e))),
        None => Ok(standard_catalog()?),
    }
}

/// `psl2:p`, `sl2:p`, `cyclic:n`, `sym:n`, `dihedral:<order>`, a catalog id,
/// or a path to a group record.
fn resolve_group(spec: &str, catalog: &CatalogArg) -> Result<FiniteGroup, Usage> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| Usage(format!("bad number in group spec `{}`", spec)));
    if let Some((kind, arg)) = spec.split_once(':') {
        return match kind {
            "psl2" => Ok(FiniteGroup::psl2(num(arg)? as u32)?),
            "sl2" => Ok(FiniteGroup::sl2(num(arg)? as u32)?),
            "cyclic" if num(arg)? >= 1 => Ok(cyclic(num(arg)?)),
            "sym" if (1..=8).contains(&num(arg)?) => Ok(symmetric(num(arg)?)),
            "dihedral" if num(arg)? >= 6 && num(arg)? % 2 == 0 => Ok(dihedral(num(arg)? / 2)),
            _ => Err(Usage(format!("unknown or out-of-range group spec `{}`", spec))),
        };
    }
    if spec.starts_with('o') && spec.contains('-') {
        let cat = load_catalog(catalog)?;
        return cat
            .get(spec)
            .map(|e| e.group.clone())
            .ok_or_else(|| Usage(format!("no catalog entry `{}`", spec)));
    }
    let text = std::fs::read_to_string(Path::new(spec)).map_err(|e| Usage(format!("{}: {}", spec, e)))?;
    Ok(read_group(&text)?)
}

fn word_fields(w: &Word) -> Vec<(&'static str, String)> {
    vec![("word", w.to_string()), ("length", w.len().to_string())]
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
}

fn parse_range(text: &str) -> Result<RangeInclusive<u64>, Usage> {
    let bad = || Usage(format!("expected a range like `1..12`, got `{}`", text));
    match text.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.parse().map_err(|_| bad())?;
            let b: u64 = b.trim_start_matches('=').parse().map_err(|_| bad())?;
            if a == 0 || a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let n: u64 = text.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            Ok(n..=n)
        }
    }
}

fn dispatch(cli: &Cli, io: &mut Io) -> Result<i32, Usage> {
    match &cli.command {
        Command::Lawgen(l) => {
            let (kind, w, bound, expr) = match l {
                Lawgen::Vn { n } => {
                    let r = LawRecipe::descending(*n)?;
                    (format!("vn n={}", n), r.word()?, Some(r.length_bound()), Some(r.to_string()))
                }
                Lawgen::Commutator { exponents } => {
                    let rs: Result<Vec<u64>, _> = exponents.split(',').map(|s| s.trim().parse::<u64>()).collect();
                    let rs = rs.map_err(|_| Usage(format!("bad exponent list `{}`", exponents)))?;
                    let r = LawRecipe::new(&rs)?;
                    let w = commutator_word(&rs)?;
                    (format!("commutator exponents={}", join(&rs, ",")), w, Some(r.length_bound()), Some(r.to_string()))
                }
                Lawgen::Power { n } => (format!("power n={}", n), power_law(*n)?, None, None),
            };
            debug_assert!(matches!(l, Lawgen::Power { .. }) || !w.is_identity());
            let mut fields = vec![("law", kind)];
            fields.extend(word_fields(&w));
            if let Some(b) = bound {
                fields.push(("bound", b.to_string()));
            }
            if let Some(e) = &expr {
                io.say(&format!("{} (length {})", e, w.len()));
            }
            io.record(&fields);
            Ok(EXIT_OK)
        }
        Command::Detect { word, catalog } => {
            let w = parse_word(word)?;
            let cat = load_catalog(catalog)?;
            match k_w(&w, &cat)? {
                Detection::Detected(r) => {
                    let g = &cat.get(&r.witness_group).expect("witness from catalog").group;
                    let elems: Vec<String> = r.witness_tuple.iter().map(|&e| g.describe_element(e)).collect();
                    io.say(&format!(
                        "k({}) = {}: detected in {} ({}) at {}",
                        w,
                        r.min_order,
                        r.witness_group,
                        r.witness_name,
                        elems.join(", ")
                    ));
                    let mut fields = word_fields(&w);
                    fields.extend([
                        ("min_order", r.min_order.to_string()),
                        ("witness", r.witness_group.clone()),
                        ("name", r.witness_name.clone()),
                        ("tuple", join(&r.witness_tuple, ",")),
                        ("value", r.witness_value.to_string()),
                        ("exhaustive_bound", r.exhaustive_bound.to_string()),
                    ]);
                    io.record(&fields);
                    Ok(EXIT_OK)
                }
                Detection::Undetected { exhaustive_bound } => {
                    io.say(&format!("k({}) > {}: no catalog group detects it", w, exhaustive_bound));
                    let mut fields = word_fields(&w);
                    fields.extend([
                        ("min_order", format!(">{}", exhaustive_bound)),
                        ("exhaustive_bound", exhaustive_bound.to_string()),
                    ]);
                    io.record(&fields);
                    Ok(EXIT_OK)
                }
                Detection::Inconclusive { group, tuples, cap } => {
                    io.say(&format!("inconclusive: {} needs {} tuples, cap {}", group, tuples, cap));
                    let mut fields = word_fields(&w);
                    fields.extend([("status", "inconclusive".to_string()), ("group", group)]);
                    io.record(&fields);
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::IsLaw { word, group, catalog } => {
            let g = resolve_group(group, catalog)?;
            let w = parse_word(word)?;
            let mut fields = word_fields(&w);
            fields.extend([("group", g.name().to_string()), ("order", g.order().to_string())]);
            match is_law(&w, &g) {
                LawOutcome::Law => {
                    io.say(&format!("{} is a law in {}", w, g.name()));
                    fields.push(("law", "true".into()));
                    io.record(&fields);
                    Ok(EXIT_OK)
                }
                LawOutcome::Counterexample(t) => {
                    let elems: Vec<String> = t.iter().map(|&e| g.describe_element(e)).collect();
                    io.say(&format!("{} is not a law in {}: fails at {}", w, g.name(), elems.join(", ")));
                    fields.extend([("law", "false".into()), ("tuple", join(&t, ","))]);
                    io.record(&fields);
                    Ok(EXIT_OK)
                }
                LawOutcome::Inconclusive { tuples, cap } => {
                    io.say(&format!("inconclusive: {} tuples exceed the cap {}", tuples, cap));
                    fields.push(("law", "inconclusive".into()));
                    io.record(&fields);
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::ShortestLaw { group, max_len, catalog } => {
            let g = resolve_group(group, catalog)?;
            let mut fields = vec![("group", g.name().to_string()), ("max_len", max_len.to_string())];
            match shortest_law(&g, *max_len, DEFAULT_SHORTEST_LAW_CAP) {
                ShortestLaw::Found { word, length } => {
                    io.say(&format!("shortest law of {}: {} (length {})", g.name(), word, length));
                    fields.extend([("law", word.to_string()), ("length", length.to_string())]);
                    io.record(&fields);
                    Ok(EXIT_OK)
                }
                ShortestLaw::NoneUpTo { max_len } => {
                    io.say(&format!("{} has no law of length <= {}", g.name(), max_len));
                    fields.push(("law", "none".into()));
                    io.record(&fields);
                    Ok(EXIT_OK)
                }
                ShortestLaw::Inconclusive { cost, cap } => {
                    io.say(&format!("inconclusive: estimated cost {} exceeds cap {}", cost, cap));
                    fields.push(("law", "inconclusive".into()));
                    io.record(&fields);
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Psl2Witness { word } => {
            let w = parse_word(word)?;
            let budget = Psl2Budget {
                seed: cli.seed,
                ..Psl2Budget::default()
            };
            let mut fields = word_fields(&w);
            match psl2_witness(&w, budget)? {
                Psl2Outcome::Witness(r) => {
                    io.say(&format!(
                        "k({}) <= {} via PSL2(F_{}), images {}",
                        w,
                        r.group_order,
                        r.p,
                        join(&r.tuple, " ")
                    ));
                    let phase = match r.phase {
                        SearchPhase::Sweep => "sweep",
                        SearchPhase::Random => "random",
                    };
                    fields.extend([
                        ("p", r.p.to_string()),
                        ("group_order", r.group_order.to_string()),
                        ("tuple", join(&r.tuple, ";")),
                        ("value", r.value.to_string()),
                        ("phase", phase.into()),
                        ("attempts", r.attempts.to_string()),
                    ]);
                    io.record(&fields);
                    Ok(EXIT_OK)
                }
                Psl2Outcome::Inconclusive { p, budget } => {
                    io.say("inconclusive: search budget exhausted");
                    fields.extend([
                        ("p", p.to_string()),
                        ("status", "inconclusive".into()),
                        ("sweep", budget.sweep.to_string()),
                        ("random", budget.random.to_string()),
                        ("seed", budget.seed.to_string()),
                    ]);
                    io.record(&fields);
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::AbelianK { vector } => {
            let v: Result<Vec<i64>, _> = vector.split(',').map(|s| s.trim().parse::<i64>()).collect();
            let v = v.map_err(|_| Usage(format!("bad integer vector `{}`", vector)))?;
            let k = abelian_k(&v)?;
            io.say(&format!("abelian k({}) = {}", join(&v, ","), k));
            io.record(&[("vector", join(&v, ",")), ("k", k.to_string())]);
            Ok(EXIT_OK)
        }
        Command::Divide { word, max_index } => {
            let w = parse_word(word)?;
            if w.is_identity() {
                return Err(Usage("the trivial word lies in every subgroup".into()));
            }
            let mut fields = word_fields(&w);
            match divisibility(&w, *max_index) {
                Divisibility::Found { index, table, endpoint } => {
                    let perms = table.complete();
                    io.say(&format!(
                        "D({}) = {}; action {}",
                        w,
                        index,
                        perms
                            .iter()
                            .enumerate()
                            .map(|(i, p)| format!("{}={}", generator_name(i + 1), p))
                            .collect::<Vec<_>>()
                            .join(" ")
                    ));
                    fields.extend([("d", index.to_string()), ("endpoint", endpoint.to_string())]);
                }
                Divisibility::ExceedsMaxIndex { max_index } => {
                    io.say(&format!("D({}) > {}", w, max_index));
                    fields.push(("d", format!(">{}", max_index)));
                }
            }
            io.record(&fields);
            Ok(EXIT_OK)
        }
        Command::Fold { generators } => {
            let texts: Vec<&str> = generators.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
            let parsed: Vec<_> = texts.iter().map(|t| crate::parse::parse(t)).collect::<Result<_, _>>()?;
            let highest: Vec<usize> = parsed.iter().map(|e| e.max_generator()).collect::<Result<_, _>>()?;
            let rank = highest.into_iter().max().unwrap_or(0).max(2);
            let words: Vec<Word> = texts
                .iter()
                .map(|t| parse_word_with_rank(t, rank))
                .collect::<Result<_, _>>()?;
            let g = subgroup_graph(rank, &words);
            let _ = write!(io.err, "{}", g);
            io.record(&[("vertices", g.vertex_count().to_string()), ("edges", g.edges().len().to_string())]);
            for &(u, v, l) in g.edges() {
                io.record(&[
                    ("edge", format!("{},{}", u, v)),
                    ("label", generator_name(l)),
                ]);
            }
            Ok(EXIT_OK)
        }
        Command::BuskinSweep { max_len, sample } => {
            let (words, mode) = match sample {
                None => {
                    let words: Vec<Word> = (1..=*max_len).flat_map(reduced_words).collect();
                    (words, "exhaustive")
                }
                Some(count) => {
                    if *max_len == 0 {
                        return Err(Usage("--max-len must be positive".into()));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    (random_reduced_words(&mut rng, *count, *max_len), "sample")
                }
            };
            let results: Vec<Option<usize>> = words
                .par_iter()
                .map(|w| divisibility(w, buskin_bound(w)).index())
                .collect();
            let mut failures = 0;
            for len in 1..=*max_len {
                let at: Vec<(&Word, &Option<usize>)> =
                    words.iter().zip(&results).filter(|(w, _)| w.len() == len as u64).collect();
                if at.is_empty() {
                    continue;
                }
                let bad: Vec<&Word> = at.iter().filter(|(_, d)| d.is_none()).map(|(w, _)| *w).collect();
                failures += bad.len();
                let max_d = at.iter().filter_map(|(_, d)| **d).max().unwrap_or(0);
                io.record(&[
                    ("length", len.to_string()),
                    ("words", at.len().to_string()),
                    ("max_d", max_d.to_string()),
                    ("bound", (len / 2 + 2).to_string()),
                    ("holds", bad.is_empty().to_string()),
                ]);
                for w in bad {
                    io.say(&format!("bound fails for {}", w));
                }
            }
            io.say(&format!("{} sweep over {} words: {} failures", mode, words.len(), failures));
            io.record(&[
                ("mode", mode.into()),
                ("words", words.len().to_string()),
                ("failures", failures.to_string()),
            ]);
            Ok(if failures == 0 { EXIT_OK } else { EXIT_FALSIFIED })
        }
        Command::Catalog(CatalogCommand::Build { out, max_order }) => {
            let cat = if *max_order <= MAX_ENUMERATED {
                enumerate_groups(*max_order)?
            } else {
                handcoded_extension(enumerate_groups(MAX_ENUMERATED)?, *max_order)?
            };
            cat.save(out)?;
            io.say(&format!("wrote {} groups of order <= {} to {}", cat.len(), max_order, out.display()));
            io.record(&[
                ("catalog", out.display().to_string()),
                ("max_order", cat.max_order().to_string()),
                ("entries", cat.len().to_string()),
                ("counts", join(&cat.counts(), ",")),
            ]);
            Ok(EXIT_OK)
        }
        Command::Catalog(CatalogCommand::Validate { path }) => {
            let cat = GroupCatalog::load(path).map_err(|e| Usage(format!("{}: {}", path.display(), e)))?;
            io.say(&format!("{}: valid, {} groups", path.display(), cat.len()));
            io.record(&[
                ("catalog", path.display().to_string()),
                ("valid", "true".into()),
                ("max_order", cat.max_order().to_string()),
                ("entries", cat.len().to_string()),
                ("counts", join(&cat.counts(), ",")),
            ]);
            Ok(EXIT_OK)
        }
        Command::BenchVn { range, catalog } => {
            let ns = parse_range(range)?;
            let cat = load_catalog(catalog)?;
            match bench_vn(ns, &cat) {
                Ok(report) => {
                    for row in &report.vn {
                        let (arg, lower) = row.growth_point();
                        io.record(&[
                            ("n", row.n.to_string()),
                            ("length", row.length.to_string()),
                            ("bound", row.length_bound.to_string()),
                            ("order_bound", row.order_bound.to_string()),
                            ("covered", row.covered.to_string()),
                            ("groups", row.groups_checked.to_string()),
                            ("verdict", row.verdict.to_string()),
                            ("growth", format!("F({})>{}", arg, lower)),
                        ]);
                    }
                    io.say(&format!("{} rows, catalog complete through order {}", report.vn.len(), report.catalog_bound));
                    Ok(EXIT_OK)
                }
                Err(e @ (BenchError::NotALaw { .. } | BenchError::TooLong { .. })) => {
                    io.say(&format!("FALSIFIED: {}", e));
                    io.record(&[("status", "falsified".into())]);
                    Ok(EXIT_FALSIFIED)
                }
                Err(BenchError::Inconclusive { group }) => {
                    io.say(&format!("inconclusive law check in {}", group));
                    io.record(&[("status", "inconclusive".into()), ("group", group)]);
                    Ok(EXIT_INCONCLUSIVE)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::BenchF { max_len, catalog } => {
            let cat = load_catalog(catalog)?;
            match bench_f(*max_len, &cat) {
                Ok(report) => {
                    for row in &report.f {
                        let k = match row.max_k {
                            Some(k) => k.to_string(),
                            None => format!(">{}", report.catalog_bound),
                        };
                        io.record(&[
                            ("length", row.length.to_string()),
                            ("max_k", k),
                            ("word", row.word.to_string()),
                            ("words", row.words_checked.to_string()),
                        ]);
                    }
                    io.say(&format!(
                        "length cap {}; values exact through catalog order {}",
                        max_len, report.catalog_bound
                    ));
                    Ok(EXIT_OK)
                }
                Err(BenchError::Inconclusive { group }) => {
                    io.record(&[("status", "inconclusive".into()), ("group", group)]);
                    Ok(EXIT_INCONCLUSIVE)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}
