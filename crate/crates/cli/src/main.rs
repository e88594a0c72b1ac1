//! `vrpf`: validate and collapse graphs of free groups, solve the word
//! problem, and emit or check p-group separation certificates.
//!
//! Exit codes: 0 success (or certificate), 1 identity element / rejected
//! certificate, 2 element outside the p-cover (NonPWitness), 3 a cap was
//! exceeded, 4 invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vrpf_core::gog::{
    britton_reduce, pi1_presentation, polyfree_chain, validate_clean, CleanPresentation, GoGWord,
    GraphOfGroups,
};
use vrpf_core::lemmalab::{run_suite, LabConfig, Suite};
use vrpf_core::pfiltration::build_lambda_oracle;
use vrpf_core::separator::{rewrite_into_cover, separate, setup, verify_certificate, Outcome, SeparateConfig};
use vrpf_core::{fixtures, Caps, Certificate, Error, Word};

const OK: u8 = 0;
const IDENTITY: u8 = 1;
const NON_P: u8 = 2;
const CAP: u8 = 3;
const INVALID: u8 = 4;

#[derive(Parser)]
#[command(name = "vrpf", version, about = "Residual p-finiteness certificates for graphs of free groups")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct RunConfig {
    /// Prime (2, 3 or 5).
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// Deepest filtration level searched (default: 4 for p = 2, 3; 3 for p = 5).
    #[arg(long, global = true)]
    depth_cap: Option<usize>,
    /// Largest certificate permutation degree.
    #[arg(long, global = true)]
    order_cap: Option<usize>,
    /// Largest explicitly enumerated set.
    #[arg(long, global = true)]
    element_cap: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Depths evaluated concurrently by `separate`; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

impl RunConfig {
    fn caps(&self) -> Result<Caps, Error> {
        let mut caps = Caps::default();
        for (name, v, slot) in [
            ("order", self.order_cap, &mut caps.order_cap),
            ("element", self.element_cap, &mut caps.element_cap),
        ] {
            if let Some(v) = v {
                if v == 0 {
                    return Err(Error::Invalid(format!("{name} cap must be positive")));
                }
                *slot = v;
            }
        }
        if self.depth_cap == Some(0) {
            return Err(Error::Invalid("depth cap must be positive".into()));
        }
        caps.depth_cap = self.depth_cap;
        Ok(caps)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that a graph of groups is algebraically clean.
    Validate { graph: String },
    /// Print the collapsed one-vertex presentation as JSON.
    Collapse { graph: String },
    /// Britton normal form of a word over the collapsed presentation.
    Reduce { graph: String, word: String },
    /// Separate a word by a finite p-group quotient of the cover subgroup.
    Separate {
        graph: String,
        word: String,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Check a certificate against a graph of groups and a word.
    Verify { certificate: PathBuf, graph: String, word: String },
    /// Run a property suite: filtration-laws, sigma-order, theta-propagation, generated-subgroups.
    Lemmalab {
        suite: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Collapse summary, poly-free chain and layer dimensions.
    Info {
        graph: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Lower exponent-p central series of a free group.
    Pfilt {
        #[command(subcommand)]
        command: PfiltCommand,
    },
}

#[derive(Subcommand)]
enum PfiltCommand {
    /// dim L_j for j = 1..depth-1, the layers of F/γ^p_depth.
    Dims {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Is the word in γ^p_level(F)?
    Member {
        word: String,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::IdentityElement => IDENTITY,
        Error::CapExceeded { .. } | Error::DepthExceeded { .. } => CAP,
        _ => INVALID,
    }
}

/// Variant name of an error, for diagnostics.
fn kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

/// A path, or `fixture:NAME` for a shipped example.
fn load_graph(spec: &str) -> Result<GraphOfGroups, Error> {
    if let Some(name) = spec.strip_prefix("fixture:") {
        return fixtures::by_name(name)
            .map(|f| f.gog())
            .ok_or_else(|| Error::Invalid(format!("no fixture named `{name}`")));
    }
    let text = fs::read_to_string(spec).map_err(|e| Error::Invalid(format!("{spec}: {e}")))?;
    GraphOfGroups::from_json(&text)
}

fn load_presentation(spec: &str) -> Result<CleanPresentation, Error> {
    vrpf_core::gog::collapse(&load_graph(spec)?)
}

fn parse_word(c: &CleanPresentation, text: &str) -> Result<GoGWord, Error> {
    c.parse_word(text)
}

fn write_out(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Error> {
    let caps = cli.run.caps()?;
    let p = cli.run.p;
    match cli.command {
        Command::Validate { graph } => {
            let g = load_graph(&graph)?;
            let report = validate_clean(&g);
            if report.is_ok() {
                println!("clean: {} vertices, {} edges", g.vertices.len(), g.edges.len());
                Ok(OK)
            } else {
                for v in &report.violations {
                    eprintln!("violation [{}]: {v}", kind(v));
                }
                Ok(INVALID)
            }
        }
        Command::Collapse { graph } => {
            let c = load_presentation(&graph)?;
            println!("{}", serde_json::to_string_pretty(&c).expect("presentation serialises"));
            Ok(OK)
        }
        Command::Reduce { graph, word } => {
            let c = load_presentation(&graph)?;
            let w = parse_word(&c, &word)?;
            let r = britton_reduce(&w, &c);
            println!("{}", if r.is_empty() { "1".to_string() } else { r.to_string() });
            Ok(OK)
        }
        Command::Separate { graph, word, cert_out } => {
            let c = load_presentation(&graph)?;
            let w = parse_word(&c, &word)?;
            let cfg = SeparateConfig { p, caps, jobs: cli.run.jobs };
            match separate(&c, &w, &cfg)? {
                Outcome::Certificate(cert) => {
                    let json = cert.to_json();
                    match cert_out {
                        Some(path) => {
                            write_out(&path, &json)?;
                            println!(
                                "certificate: degree {}, order {}^{}, depth {}, written to {}",
                                cert.degree,
                                cert.p,
                                cert.order_exp,
                                cert.meta.depth,
                                path.display()
                            );
                        }
                        None => println!("{json}"),
                    }
                    Ok(OK)
                }
                Outcome::NonPWitness(nw) => {
                    println!("{}", serde_json::to_string_pretty(&nw).expect("witness serialises"));
                    eprintln!("element lies outside the p-cover subgroup (θ₁ image group of order {})", nw.group_order);
                    Ok(NON_P)
                }
            }
        }
        Command::Verify { certificate, graph, word } => {
            let text = fs::read_to_string(&certificate)
                .map_err(|e| Error::Invalid(format!("{}: {e}", certificate.display())))?;
            let cert = Certificate::from_json(&text)?;
            let c = load_presentation(&graph)?;
            let w = parse_word(&c, &word)?;
            let s = setup(&c, cert.p, &caps)?;
            let cw = match rewrite_into_cover(&w, &s.cover) {
                Ok(cw) => cw,
                Err(e) => {
                    println!("rejected: {e}");
                    return Ok(IDENTITY);
                }
            };
            let report = verify_certificate(&cert, &s.presentation, &cw);
            if report.ok {
                println!("accepted: group order {}^{}", cert.p, cert.order_exp);
                Ok(OK)
            } else {
                println!("rejected: {}", report.diagnostic);
                Ok(IDENTITY)
            }
        }
        Command::Lemmalab { suite, rank, depth, samples } => {
            let suite: Suite = suite.parse()?;
            let cfg = LabConfig { p, rank, depth, seed: cli.run.seed, samples, caps };
            let report = run_suite(suite, &cfg)?;
            print!("{report}");
            Ok(if report.passed() { OK } else { IDENTITY })
        }
        Command::Info { graph, depth } => {
            let g = load_graph(&graph)?;
            let c = vrpf_core::gog::collapse(&g)?;
            println!("graph: {}", g.name.as_deref().unwrap_or("(unnamed)"));
            println!("vertices: {}, edge pairs: {}", g.vertices.len(), g.edges.len() / 2);
            println!("collapsed rank: {}", c.rank);
            println!("loops: {}", c.loop_count());
            for (i, l) in c.loops.iter().enumerate() {
                let basis = c.basis();
                let images: Vec<String> = l.map.images().iter().map(|w| basis.render(w)).collect();
                println!(
                    "  t{}: N = <{}> -> M = <{}>, basis images [{}]",
                    i + 1,
                    l.domain.selected().iter().map(|j| format!("x{j}")).collect::<Vec<_>>().join(", "),
                    l.codomain.selected().iter().map(|j| format!("x{j}")).collect::<Vec<_>>().join(", "),
                    images.join(", ")
                );
            }
            if let Some(tr) = &c.tree_record {
                for (v, words) in &tr.vertex_dictionary {
                    let basis = c.basis();
                    let ws: Vec<String> = words.iter().map(|w| basis.render(w)).collect();
                    println!("  vertex {v} generators -> [{}]", ws.join(", "));
                }
            }
            let pres = pi1_presentation(&c);
            println!("presentation: {} generators, {} relators", pres.generator_names().len(), pres.relators.len());
            let chain = polyfree_chain(&c);
            println!(
                "poly-free chain: quotient rank {}, relators project trivially: {}, kernel is a tree of free groups: {}, length {}",
                chain.quotient_rank, chain.relators_project_trivially, chain.kernel_is_tree_of_free_groups, chain.length
            );
            let oracle = build_lambda_oracle(p, c.rank, depth, &caps)?;
            let dims: Vec<String> = oracle.layer_dims().iter().map(|d| d.to_string()).collect();
            println!("layer dims (p = {p}, L_1..L_{}): [{}]", depth.saturating_sub(1), dims.join(", "));
            Ok(OK)
        }
        Command::Pfilt { command } => match command {
            PfiltCommand::Dims { rank, depth } => {
                let oracle = build_lambda_oracle(p, rank, depth, &caps)?;
                let dims: Vec<String> = oracle.layer_dims().iter().map(|d| d.to_string()).collect();
                println!("[{}]", dims.join(", "));
                Ok(OK)
            }
            PfiltCommand::Member { word, level, rank } => {
                let w = Word::parse(&word, rank)?;
                let oracle = build_lambda_oracle(p, rank, level, &caps)?;
                println!("{}", oracle.member(&w, level)?);
                Ok(OK)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
