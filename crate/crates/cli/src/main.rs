//! `dighom`: homology of binary digital images from the command line.
//!
//! Exit status: 0 on success, 1 when an axiom check fails, 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dighom::axioms::{self, AxiomReport};
use dighom::io::{declared_dim, load_image, Format, ResultDocument};
use dighom::{
    check_excision, check_les, cycle_to_loop, homology, hurewicz, relative_homology, Adjacency, DigitalImage,
    DigitalPath, ImagePair, PointSet,
};

#[derive(Parser)]
#[command(name = "dighom", version, about = "Cubical singular homology of binary digital images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology groups of the image
    Compute(Common),
    /// Relative homology of the pair (X, A)
    Relative {
        #[command(flatten)]
        common: Common,
        /// Subset A, in the input format
        #[arg(long)]
        a_input: PathBuf,
    },
    /// Hurewicz class of a loop, and a loop realizing each H_1 generator
    Hurewicz {
        #[command(flatten)]
        common: Common,
        /// Loop as a point sequence in points format (`dim d`, then one point per line)
        #[arg(long = "loop")]
        loop_path: PathBuf,
    },
    /// Excision check for (X - W, A - W) -> (X, A)
    Excision {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a_input: PathBuf,
        #[arg(long)]
        w_input: PathBuf,
    },
    /// Exactness of the long exact sequence of (X, A)
    Les {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a_input: PathBuf,
    },
    /// Seeded campaign over all axioms on the image
    Axioms(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "grid")]
    format: FormatArg,
    /// Adjacency c_l: points differ by at most 1 in at most l coordinates
    #[arg(long = "l", conflicts_with = "kappa")]
    l: Option<usize>,
    /// Adjacency by neighbour count (4, 8, 6, 18, 26, ...)
    #[arg(long)]
    kappa: Option<u64>,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Grid,
    Pbm,
    Points,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Grid => Format::Grid,
            FormatArg::Pbm => Format::Pbm,
            FormatArg::Points => Format::Points,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn text(bytes: &[u8], path: &Path) -> Result<String, Failure> {
    String::from_utf8(bytes.to_vec()).map_err(|_| Failure(format!("{}: not valid UTF-8", path.display())))
}

struct Loaded {
    image: DigitalImage,
    bytes: Vec<u8>,
}

impl Common {
    fn adjacency(&self, dim: usize) -> Result<Adjacency, Failure> {
        Ok(match (self.l, self.kappa) {
            (_, Some(k)) => Adjacency::from_kappa(dim, k)?,
            (Some(l), None) => Adjacency::new(dim, l)?,
            (None, None) => Adjacency::new(dim, 1)?,
        })
    }

    fn load(&self) -> Result<Loaded, Failure> {
        let bytes = read(&self.input)?;
        let s = text(&bytes, &self.input)?;
        let format = self.format.into();
        let adj = self.adjacency(declared_dim(format, &s)?)?;
        let image = load_image(format, &s, adj).map_err(|e| Failure(format!("{}: {e}", self.input.display())))?;
        Ok(Loaded { image, bytes })
    }

    fn subset(&self, image: &DigitalImage, path: &Path) -> Result<PointSet, Failure> {
        let s = text(&read(path)?, path)?;
        let sub = load_image(self.format.into(), &s, image.adjacency())
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        if let Some(p) = sub.points().iter().find(|p| !image.contains(p)) {
            return Err(Failure(format!("{}: point {p} is not in the image", path.display())));
        }
        Ok(sub.point_set())
    }
}

fn run(command: &Command) -> Result<(ResultDocument, Output), Failure> {
    let start = Instant::now();
    let (mut doc, output) = match command {
        Command::Compute(c) => {
            let x = c.load()?;
            let h = homology(&x.image, c.max_dim)?;
            let doc = ResultDocument::new("compute", &x.image, c.max_dim, &x.bytes).with_groups(&h);
            (doc, c.output)
        }
        Command::Relative { common: c, a_input } => {
            let x = c.load()?;
            let a = c.subset(&x.image, a_input)?;
            let h = relative_homology(&ImagePair::new(x.image.clone(), a)?, c.max_dim)?;
            let doc = ResultDocument::new("relative", &x.image, c.max_dim, &x.bytes).with_groups(&h);
            (doc, c.output)
        }
        Command::Hurewicz { common: c, loop_path } => {
            let x = c.load()?;
            let h = homology(&x.image, c.max_dim.max(1))?;
            let s = text(&read(loop_path)?, loop_path)?;
            let pts = load_loop(&s, x.image.adjacency()).map_err(|e| Failure(format!("{}: {e}", loop_path.display())))?;
            let f = DigitalPath::new(&x.image, &pts)?;
            let class = hurewicz(&f, &h[1])?;
            let generators = if dighom::is_connected(&x.image) {
                h[1].basis()
                    .iter()
                    .map(|z| {
                        let g = cycle_to_loop(&x.image, z, &pts[0])?;
                        Ok(point_lists(&g.points(&x.image)))
                    })
                    .collect::<Result<Vec<_>, Failure>>()?
            } else {
                Vec::new()
            };
            let mut doc = ResultDocument::new("hurewicz", &x.image, c.max_dim.max(1), &x.bytes).with_groups(&h);
            doc.result = json!({
                "loop_length": f.len(),
                "class": class,
                "h1": h[1].shape(),
                "generator_loops": generators,
            });
            (doc, c.output)
        }
        Command::Excision { common: c, a_input, w_input } => {
            let x = c.load()?;
            let a = c.subset(&x.image, a_input)?;
            let w = c.subset(&x.image, w_input)?;
            let report = check_excision(&x.image, &a, &w, c.max_dim)?;
            let mut doc = ResultDocument::new("excision", &x.image, c.max_dim, &x.bytes);
            doc.result = json!({ "depth": axioms::excision_depth(&x.image, &a, &w)? });
            doc.reports.push(report);
            (doc, c.output)
        }
        Command::Les { common: c, a_input } => {
            let x = c.load()?;
            let a = c.subset(&x.image, a_input)?;
            let report = check_les(&ImagePair::new(x.image.clone(), a)?, c.max_dim)?;
            let mut doc = ResultDocument::new("les", &x.image, c.max_dim, &x.bytes);
            doc.reports.push(report);
            (doc, c.output)
        }
        Command::Axioms(c) => {
            let x = c.load()?;
            let h = homology(&x.image, c.max_dim)?;
            let mut doc = ResultDocument::new("axioms", &x.image, c.max_dim, &x.bytes).with_groups(&h);
            doc.reports = axioms::campaign(&x.image, c.seed, c.max_dim)?;
            (doc, c.output)
        }
    };
    doc.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((doc, output))
}

fn point_lists(points: &[dighom::Point]) -> Vec<Vec<i64>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}

/// A loop file is points format, but repeated points are the point of a loop.
fn load_loop(s: &str, adj: Adjacency) -> dighom::Result<Vec<dighom::Point>> {
    let mut out = Vec::new();
    let mut header = false;
    for (r, raw) in s.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !header {
            if line != format!("dim {}", adj.dim()) {
                return Err(dighom::Error::Parse {
                    line: r + 1,
                    column: 1,
                    message: format!("expected the header `dim {}`", adj.dim()),
                });
            }
            header = true;
            continue;
        }
        let one = format!("dim {}\n{line}\n", adj.dim());
        let p = load_image(Format::Points, &one, adj).map_err(|e| match e {
            dighom::Error::Parse { column, message, .. } => dighom::Error::Parse {
                line: r + 1,
                column,
                message,
            },
            other => other,
        })?;
        out.push(p.points()[0].clone());
    }
    if out.is_empty() {
        return Err(dighom::Error::Parse {
            line: 1,
            column: 1,
            message: "the loop has no points".into(),
        });
    }
    Ok(out)
}

fn print_text(doc: &ResultDocument) {
    let a = &doc.adjacency;
    println!("{}: d={} l={} kappa={}", doc.command, a.dim, a.l, a.kappa);
    println!("points: {}, components: {}", doc.points, doc.components);
    for (n, (b, t)) in doc.betti.iter().zip(&doc.torsion).enumerate() {
        println!("H_{n} = {}", dighom::GroupShape::new(*b, t.clone()));
    }
    for (n, t) in doc.torsion.iter().enumerate().filter(|(_, t)| !t.is_empty()) {
        println!("note: torsion in H_{n}: {t:?}");
    }
    if !doc.result.is_null() {
        println!("result: {}", doc.result);
    }
    for r in &doc.reports {
        print_report(r);
    }
    println!("time: {:.1} ms", doc.timing_ms);
}

fn print_report(r: &AxiomReport) {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    println!("[{verdict}] {}", r.axiom);
    for d in &r.details {
        let mark = match d.holds {
            Some(true) => "ok  ",
            Some(false) => "FAIL",
            None => "info",
        };
        let degree = d.degree.map(|n| format!("n={n} ")).unwrap_or_default();
        println!("  {mark} {degree}{}", d.check);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((doc, output)) => {
            match output {
                Output::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("serializable document")),
                Output::Text => print_text(&doc),
            }
            if doc.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
