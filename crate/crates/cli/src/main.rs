use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use loose_core::aut::{comb_aut_group, proj_aut_group};
use loose_core::graph::{read_graph, read_morphism};
use loose_core::matrices::{global_matrix, injectivity_criterion, kernel_f1};
use loose_core::proj::ProjPoint;
use loose_core::scheme::{build_scheme, classify_lines, count_points, LineKind, SchemeModel};
use loose_core::theorems::{run_suite, verify, Manifest, TheoremId, Verdict, VerifyOptions, DEFAULT_SEED};
use loose_core::{Error, FField};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "loose", version, about = "Schemes of loose graphs over finite fields")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Extension-degree bound for constructible tests (default: number of coordinates).
    #[arg(long = "ext", global = true, value_name = "R")]
    ext: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the rational points of the scheme.
    Points {
        graph: PathBuf,
        #[arg(long)]
        q: usize,
    },
    /// List the lines of the scheme with their kind.
    Lines {
        graph: PathBuf,
        #[arg(long)]
        q: usize,
    },
    /// Count points over several fields and interpolate the counting polynomial.
    Count {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        q: Vec<usize>,
    },
    /// Compute an automorphism group of the scheme.
    Aut {
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = GroupKind::Proj)]
        group: GroupKind,
    },
    /// Print the global 0/1 matrix of a morphism.
    Matrix { morphism: PathBuf },
    /// Points of the F2-model of the source killed by a morphism.
    Kernel { morphism: PathBuf },
    /// Check one theorem on one graph.
    Verify {
        theorem: TheoremId,
        graph: PathBuf,
        #[arg(long)]
        q: usize,
    },
    /// Run the theorem suite over a corpus manifest.
    Suite {
        manifest: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        q: Vec<usize>,
        /// Restrict to these theorems (comma separated).
        #[arg(long, value_delimiter = ',')]
        theorems: Vec<TheoremId>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupKind {
    Proj,
    Comb,
}

/// What a command produced: text, JSON, and whether every check held.
struct Output {
    text: String,
    json: serde_json::Value,
    ok: bool,
}

fn output(text: String, json: impl Serialize, ok: bool) -> Result<Output, Error> {
    let json = serde_json::to_value(json).map_err(|e| Error::Io(e.to_string()))?;
    Ok(Output { text, json, ok })
}

fn point_str(p: &ProjPoint) -> String {
    let c: Vec<String> = p.0.iter().map(|x| x.to_string()).collect();
    format!("({})", c.join(","))
}

fn scheme(path: &Path, q: usize, ext: Option<usize>) -> Result<SchemeModel, Error> {
    let s = build_scheme(&read_graph(path)?, &FField::new(q)?)?;
    match ext {
        Some(r) => s.with_ext_bound(r),
        None => Ok(s),
    }
}

fn name_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Points { graph, q } => {
            let s = scheme(graph, *q, cli.ext)?;
            let mut text = format!("{} points\ncoordinates: {}\n", s.len(), s.coordinate_names().join(" "));
            for p in &s.points {
                text += &format!("{}\n", point_str(p));
            }
            let pts: Vec<&Vec<u8>> = s.points.iter().map(|p| &p.0).collect();
            output(text, json!({"coordinates": s.coordinate_names(), "count": s.len(), "points": pts, "q": q}), true)
        }
        Command::Lines { graph, q } => {
            let s = scheme(graph, *q, cli.ext)?;
            let geo = classify_lines(&s)?;
            let mut text = format!(
                "{} projective, {} complete affine\n",
                geo.lines_of_kind(LineKind::Projective).count(),
                geo.lines_of_kind(LineKind::CompleteAffine).count()
            );
            for l in &geo.lines {
                let pts: Vec<String> = l.points.iter().map(|&i| point_str(&s.points[i])).collect();
                text += &format!("{:?}: {}\n", l.kind, pts.join(" "));
            }
            output(text, &geo, true)
        }
        Command::Count { graph, q } => {
            let c = count_points(&read_graph(graph)?, q)?;
            let mut text = String::new();
            for (q, n) in &c.counts {
                text += &format!("q = {q}: {n}\n");
            }
            text += &format!("N(q) = {}\n", c.polynomial);
            output(text, &c, true)
        }
        Command::Aut { graph, q, group } => {
            let s = scheme(graph, *q, cli.ext)?;
            match group {
                GroupKind::Proj => {
                    let a = proj_aut_group(&s)?.summary();
                    let mut text = format!(
                        "order {} (linear {}, semilinear quotient {}, kernel {}), extension bound {}\n",
                        a.order, a.linear_order, a.quotient_order, a.kernel_order, a.ext_bound
                    );
                    for g in &a.generators {
                        let rows: Vec<String> =
                            g.matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
                        text += &format!("[{}] frobenius^{}\n", rows.join("; "), g.frobenius);
                    }
                    output(text, &a, true)
                }
                GroupKind::Comb => {
                    let g = comb_aut_group(&classify_lines(&s)?)?.summary();
                    let mut text = format!("order {}\n", g.order);
                    for p in &g.generators {
                        text += &format!("{p}\n");
                    }
                    output(text, &g, true)
                }
            }
        }
        Command::Matrix { morphism } => {
            let f = read_morphism(morphism)?;
            let m = global_matrix(&f);
            let inj = injectivity_criterion(&f);
            let mut text = format!("columns: {}\n", m.col_labels.join(" "));
            for (label, row) in m.row_labels.iter().zip(m.row_strings()) {
                text += &format!("{label}: {row}\n");
            }
            text += &format!("rank {}\n", m.rank());
            output(text, json!({"matrix": m, "rank": m.rank(), "injectivity": inj}), true)
        }
        Command::Kernel { morphism } => {
            let f = read_morphism(morphism)?;
            let s = build_scheme(&f.source, &FField::new(2)?)?;
            let k = kernel_f1(&f, &s)?;
            let mut text = format!("{} kernel points\n", k.members.len());
            for (p, _) in &k.members {
                text += &format!("{}\n", point_str(p));
            }
            output(text, &k, true)
        }
        Command::Verify { theorem, graph, q } => {
            let opts = VerifyOptions {
                seed: cli.seed,
                ext_bound: cli.ext,
                expected_igp: None,
            };
            let r = verify(*theorem, &read_graph(graph)?, &name_of(graph), *q, &opts)?;
            let mut text = format!("{} {} q={}: {}\n", r.theorem, r.graph, r.q, r.verdict);
            for qn in &r.quantities {
                text += &format!("  {} = {}\n", qn.name, qn.value);
            }
            if let Some(w) = r.witness.as_ref().or(r.reason.as_ref()) {
                text += &format!("  {w}\n");
            }
            let ok = r.verdict != Verdict::Fail;
            output(text, &r, ok)
        }
        Command::Suite { manifest, q, theorems } => {
            let m = Manifest::read(manifest)?;
            let ids = if theorems.is_empty() { TheoremId::ALL.to_vec() } else { theorems.clone() };
            let opts = VerifyOptions {
                seed: cli.seed,
                ext_bound: cli.ext,
                expected_igp: None,
            };
            let rep = run_suite(&m, q, &ids, &opts)?;
            let mut text = String::new();
            for r in &rep.reports {
                text += &format!("{:<18} {:<16} q={} {}", r.theorem.as_str(), r.graph, r.q, r.verdict);
                if r.verdict != Verdict::Pass {
                    if let Some(w) = r.witness.as_ref().or(r.reason.as_ref()) {
                        text += &format!(": {w}");
                    }
                }
                text.push('\n');
            }
            for e in &rep.manifest_errors {
                text += &format!("manifest: {e}\n");
            }
            text += &format!(
                "{} pass, {} fail, {} skipped, {} reported\n",
                rep.count(Verdict::Pass),
                rep.count(Verdict::Fail),
                rep.count(Verdict::Skipped),
                rep.count(Verdict::Reported)
            );
            output(text, &rep, rep.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n"
            } else {
                out.text
            };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
