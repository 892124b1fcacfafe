//! `uftree`: recognize Union and Union-Find trees, run the 3-Partition
//! reduction, simulate disjoint-set forests and enumerate small classes.
//!
//! Exit status: 0 when the property holds, 1 when it fails, 2 on usage or
//! input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uftree_core::forest::{random_script, Forest, OpScript};
use uftree_core::oracle::{enum_rooted_trees, enum_uf_trees, enum_union_trees};
use uftree_core::recognizer::{
    decide_flat_uf, group_sizes, is_flat, union_violations, ChargeContext, UfSearch,
};
use uftree_core::reduction::{build_tree, planted_instance, solve_3partition, RawInstance};
use uftree_core::{gen, Tree};

#[derive(Parser)]
#[command(name = "uftree", version, about = "Union and Union-Find tree toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a tree is a Union tree.
    CheckUnion {
        file: PathBuf,
        /// List every node violating the Union condition.
        #[arg(long)]
        verbose: bool,
    },
    /// Check whether a tree is a Union-Find tree.
    CheckUf {
        file: PathBuf,
        /// Write the push sequence reaching a Union tree here.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Cap on the number of pushes along one search branch.
        #[arg(long)]
        max_depth: Option<usize>,
        /// Prune states of negative total charge at this threshold.
        #[arg(long)]
        prune_heaviness: Option<usize>,
    },
    /// Validate a flat tree and decide whether it is a Union-Find tree.
    FlatCheck {
        file: PathBuf,
        #[arg(long)]
        heaviness: usize,
        /// Write the grouping of light nodes here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Build the flat tree of a 3-Partition instance.
    Reduce {
        file: PathBuf,
        /// Shift a plain 3-Partition instance into the required form first.
        #[arg(long)]
        normalize: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve a 3-Partition instance by exhaustive search.
    #[command(name = "solve-3p")]
    Solve3p { file: PathBuf },
    /// Run an operation script on a disjoint-set forest.
    Sim {
        file: PathBuf,
        /// Reject the run if any snapshot is not a Union-Find tree.
        #[arg(long)]
        check: bool,
        /// Also snapshot after every K operations.
        #[arg(long, value_name = "K")]
        dump_every: Option<usize>,
        /// Number of elements; defaults to the largest id in the script.
        #[arg(long, value_name = "N")]
        universe: Option<usize>,
    },
    /// Generate random inputs.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// List all tree shapes with N nodes in a class.
    Enum {
        n: usize,
        #[arg(long, value_enum, default_value_t = Class::All)]
        class: Class,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// A random tree on N nodes.
    Tree {
        n: usize,
        #[arg(long, value_enum, default_value_t = Class::All)]
        class: Class,
        #[arg(long)]
        seed: u64,
    },
    /// A random union/find script on N elements with K operations.
    Script {
        n: usize,
        k: usize,
        #[arg(long)]
        seed: u64,
    },
    /// A solvable 3-Partition instance with M triples and B = 2^D + d.
    Instance {
        m: usize,
        #[arg(long, default_value_t = 4)]
        exponent: u32,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Class {
    All,
    Union,
    Uf,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_tree(path: &Path) -> Result<Tree> {
    Tree::parse(&read(path)?).with_context(|| format!("{}: malformed tree", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn read_instance(path: &Path) -> Result<RawInstance> {
    RawInstance::parse(&read(path)?).with_context(|| format!("{}: malformed instance", path.display()))
}

/// `Ok(true)` maps to exit 0, `Ok(false)` to 1, errors to 2.
fn run(cli: Cli, out: &mut impl Write) -> Result<bool> {
    match cli.command {
        Command::CheckUnion { file, verbose } => {
            let t = read_tree(&file)?;
            let violations = union_violations(&t);
            if verbose {
                for v in &violations {
                    writeln!(out, "node {} child {} deficit {}", v.node, v.child, v.deficit)?;
                }
            }
            let ok = violations.is_empty();
            writeln!(out, "{}", if ok { "union" } else { "not union" })?;
            Ok(ok)
        }
        Command::CheckUf { file, witness, max_depth, prune_heaviness } => {
            let t = read_tree(&file)?;
            let mut search = UfSearch::new();
            if let Some(d) = max_depth {
                search = search.max_depth(d);
            }
            if let Some(h) = prune_heaviness {
                search = search.charge_pruning(ChargeContext::new(h)?);
            }
            let report = search.run(&t);
            match report.witness {
                Some(seq) => {
                    writeln!(out, "union-find ({} pushes)", seq.len())?;
                    if let Some(p) = witness {
                        write(&p, &seq.to_string())?;
                    }
                    Ok(true)
                }
                None if report.depth_limited => {
                    writeln!(out, "not found within depth cap")?;
                    Ok(false)
                }
                None => {
                    writeln!(out, "not union-find")?;
                    Ok(false)
                }
            }
        }
        Command::FlatCheck { file, heaviness, witness } => {
            let t = read_tree(&file)?;
            let ctx = ChargeContext::new(heaviness)?;
            let stats = is_flat(&t, ctx).map_err(|e| anyhow!("not flat: {e}"))?;
            writeln!(out, "flat H={} K={}", heaviness, stats.k())?;
            match decide_flat_uf(&t, ctx)? {
                Some(p) => {
                    for sizes in group_sizes(&t, &p) {
                        let s: Vec<String> = sizes.iter().map(usize::to_string).collect();
                        writeln!(out, "group {}", s.join(" "))?;
                    }
                    if let Some(path) = witness {
                        write(&path, &p.to_string())?;
                    }
                    writeln!(out, "union-find")?;
                    Ok(true)
                }
                None => {
                    writeln!(out, "not union-find")?;
                    Ok(false)
                }
            }
        }
        Command::Reduce { file, normalize, output } => {
            let raw = read_instance(&file)?;
            let inst = if normalize { raw.normalize()? } else { raw.validate()? };
            let r = build_tree(&inst)?;
            write(&output, &r.tree.to_text())?;
            writeln!(out, "H={} K={}", r.ctx.heaviness(), inst.m() - 1)?;
            Ok(true)
        }
        Command::Solve3p { file } => {
            let inst = read_instance(&file)?.validate()?;
            match solve_3partition(&inst) {
                Some(p) => {
                    write!(out, "{p}")?;
                    Ok(true)
                }
                None => {
                    writeln!(out, "no solution")?;
                    Ok(false)
                }
            }
        }
        Command::Sim { file, check, dump_every, universe } => {
            let script: OpScript = read(&file)?.parse().with_context(|| format!("{}: malformed script", file.display()))?;
            let n = universe.unwrap_or(script.max_id() as usize);
            let mut forest = Forest::new(n)?;
            let snapshots = forest.run(&script, dump_every)?;
            for s in &snapshots {
                let members: Vec<String> = s.members.iter().map(|m| m.to_string()).collect();
                writeln!(out, "# step {} root {} members {}", s.step, s.root, members.join(" "))?;
                write!(out, "{}", s.tree.to_text())?;
                if check && UfSearch::new().run(&s.tree).witness.is_none() {
                    writeln!(out, "rejected: snapshot at step {} rooted at {}", s.step, s.root)?;
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Command::Gen { kind } => {
            match kind {
                GenKind::Tree { n, class, seed } => {
                    if n == 0 {
                        bail!("n must be at least 1");
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let t = match class {
                        Class::All => gen::random_tree(n, &mut rng),
                        Class::Union => gen::random_union_tree(n, &mut rng),
                        Class::Uf => gen::random_uf_tree(n, &mut rng),
                    };
                    write!(out, "{}", t.to_text())?;
                }
                GenKind::Script { n, k, seed } => {
                    if n == 0 {
                        bail!("n must be at least 1");
                    }
                    write!(out, "{}", random_script(n, k, seed))?;
                }
                GenKind::Instance { m, exponent, seed } => {
                    if m == 0 || exponent < 4 {
                        bail!("need m >= 1 and exponent >= 4");
                    }
                    write!(out, "{}", planted_instance(m, exponent, seed).to_raw())?;
                }
            }
            Ok(true)
        }
        Command::Enum { n, class } => {
            let set = match class {
                Class::All => enum_rooted_trees(n)?,
                Class::Union => enum_union_trees(n)?,
                Class::Uf => enum_uf_trees(n)?,
            };
            for code in set.of_size(n) {
                writeln!(out, "{code}")?;
            }
            writeln!(out, "count {}", set.count(n))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
