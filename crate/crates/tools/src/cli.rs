//! The `sseq` command line.
//!
//! Exit codes: 0 on success, 1 when a domain check fails or an input is
//! rejected, 2 on usage errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sseq_core::k1::{self, TwoLocalGroup};
use sseq_core::periodic::{c2_periodic_pattern, tile, ytilde_pattern, YTILDE_BASE};
use sseq_core::rational::parse_rational;
use sseq_core::tau;
use sseq_core::vline::{self, combine_cofiber, pipeline, reference, verify_banded, VlParams};
use sseq_core::{Bidegree, Chart};

use crate::dsl;
use crate::render::{render_svg, GuideLine, RenderOptions};

#[derive(Debug, Parser)]
#[command(name = "sseq", version, about = "Spectral sequence charts, vanishing lines and K(1)-local bookkeeping")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a chart file and print its canonical form.
    Parse { file: PathBuf },
    /// Render one page of a chart as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        page: u32,
        #[arg(long)]
        page_max: Option<u32>,
        /// Stem and filtration ranges: x0 x1 y0 y1.
        #[arg(long, num_args = 4, value_names = ["X0", "X1", "Y0", "Y1"], allow_negative_numbers = true)]
        range: Option<Vec<i32>>,
        /// Guide line `slope,intercept[,solid|dashed|dotted]`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        guide: Vec<String>,
        #[arg(long, default_value_t = 40)]
        scale: u32,
        /// Draw class names.
        #[arg(long)]
        names: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Vanishing-line parameter arithmetic on tuples `(b<=d,v,m,c,r)`.
    Vline {
        #[command(subcommand)]
        command: VlineCommand,
    },
    /// K(1)-local homotopy of the sphere and the mod 2 Moore spectrum.
    K1 {
        #[command(subcommand)]
        command: K1Command,
    },
    /// Materialize a built-in periodic pattern over a stem range.
    Tile {
        #[arg(long, value_enum)]
        pattern: PatternName,
        #[arg(long, allow_negative_numbers = true)]
        from: i32,
        #[arg(long, allow_negative_numbers = true)]
        to: i32,
        /// Keep only filtrations in f0..=f1.
        #[arg(long, num_args = 2, value_names = ["F0", "F1"], allow_negative_numbers = true)]
        filtration: Option<Vec<i32>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a chart against a banded vanishing line.
    Verify {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// Expected K(1)-local orders by stem residue, comma separated.
        #[arg(long)]
        orders: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        from: Option<i32>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<i32>,
    },
    /// Recompute the vanishing-line route from Ỹ to C(2) and compare each
    /// tuple with the published one.
    VerifyMahowald,
    /// Print the τ-module of an Adams chart and its Cτ^k homotopy.
    Tau {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum VlineCommand {
    /// Shift a tuple by (Δstem, Δfiltration).
    Suspend {
        #[arg(allow_hyphen_values = true)]
        params: String,
        #[arg(allow_negative_numbers = true)]
        stem: i32,
        #[arg(allow_negative_numbers = true)]
        filtration: i32,
    },
    /// Tuple for B in a cofiber sequence A -> B -> C.
    Combine {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// Whether the first tuple is at least as strong as the second.
    Dominates {
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum K1Command {
    /// π_i of the K(1)-local sphere.
    Sphere {
        #[arg(allow_negative_numbers = true)]
        i: i64,
    },
    /// Orders of π_{8k+j} of the K(1)-local Moore spectrum, j = 0..7.
    MooreOrders,
    /// Groups π_{8k+j} of the K(1)-local Moore spectrum, j = 0..7.
    MooreGroups,
    /// Sphere and Moore groups over a range of degrees.
    Table {
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
        /// One `i=<n> group=<...>` line per degree.
        #[arg(long)]
        machine: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PatternName {
    C2,
    Ytilde,
}

fn read_chart(path: &Path) -> Result<Chart> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    dsl::parse(&text).with_context(|| format!("{}", path.display()))
}

fn params(text: &str) -> Result<VlParams> {
    text.parse::<VlParams>().with_context(|| format!("bad parameter tuple `{text}`"))
}

fn guide(text: &str) -> Result<GuideLine> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let (m, c, style) = match parts.as_slice() {
        [m, c] => (*m, *c, "solid"),
        [m, c, s] => (*m, *c, *s),
        _ => bail!("guide `{text}` must be slope,intercept[,style]"),
    };
    Ok(GuideLine {
        slope: parse_rational(m).with_context(|| format!("bad slope `{m}`"))?,
        intercept: parse_rational(c).with_context(|| format!("bad intercept `{c}`"))?,
        style: style.parse().map_err(anyhow::Error::msg)?,
    })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(Into::into),
    }
}

/// Runs one command. `Ok(false)` means the command ran but its check failed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Parse { file } => {
            let chart = read_chart(&file)?;
            out.write_all(dsl::serialize(&chart).as_bytes())?;
        }
        Command::Render { file, page, page_max, range, guide: guides, scale, names, output } => {
            let chart = read_chart(&file)?;
            let options = RenderOptions {
                page,
                page_max,
                x_range: range.as_ref().map(|r| (r[0], r[1])),
                y_range: range.as_ref().map(|r| (r[2], r[3])),
                scale,
                guides: guides.iter().map(|g| guide(g)).collect::<Result<_>>()?,
                show_names: names,
            };
            emit(out, output.as_deref(), &render_svg(&chart, &options)?)?;
        }
        Command::Vline { command } => match command {
            VlineCommand::Suspend { params: p, stem, filtration } => {
                writeln!(out, "{}", params(&p)?.suspend(stem, filtration))?;
            }
            VlineCommand::Combine { a, c } => {
                writeln!(out, "{}", combine_cofiber(&params(&a)?, &params(&c)?)?)?;
            }
            VlineCommand::Dominates { first, second } => {
                writeln!(out, "{}", params(&first)?.dominates(&params(&second)?))?;
            }
        },
        Command::K1 { command } => k1_command(command, out)?,
        Command::Tile { pattern, from, to, filtration, output } => {
            let (p, base) = match pattern {
                PatternName::C2 => (c2_periodic_pattern(), Bidegree::new(0, 0)),
                PatternName::Ytilde => (ytilde_pattern(), YTILDE_BASE),
            };
            let window = filtration.map(|f| f[0]..=f[1]);
            let chart = tile(&p, base, from..=to, window);
            emit(out, output.as_deref(), &dsl::serialize_periodic(&chart, p.period()))?;
        }
        Command::Verify { file, params: p, orders, from, to } => {
            let chart = read_chart(&file)?;
            let p = params(&p)?;
            let orders: Vec<u64> = match orders {
                Some(text) => text
                    .split(',')
                    .map(|s| s.trim().parse().with_context(|| format!("bad order `{s}`")))
                    .collect::<Result<_>>()?,
                None => Vec::new(),
            };
            let bounds = chart.stem_bounds();
            let (Some(lo), Some(hi)) = (from.or(bounds.map(|b| b.0)), to.or(bounds.map(|b| b.1))) else {
                bail!("the chart is empty; give --from and --to");
            };
            let report = verify_banded(&chart, &p, lo..=hi, &orders);
            write!(out, "{report}")?;
            return Ok(report.passed());
        }
        Command::VerifyMahowald => return verify_mahowald(out),
        Command::Tau { file, k } => {
            let chart = read_chart(&file)?;
            let module = tau::chart_to_tau(&chart)?;
            write!(out, "{module}")?;
            for ((n, t), d) in tau::tensor_with_ctau(&module, k).iter() {
                if d > 0 {
                    writeln!(out, "ctau^{k} n={n} t={t} dim={d}")?;
                }
            }
        }
    }
    Ok(true)
}

fn k1_command(command: K1Command, out: &mut dyn Write) -> Result<()> {
    match command {
        K1Command::Sphere { i } => writeln!(out, "{}", k1::k1_sphere(i))?,
        K1Command::MooreOrders => {
            let orders: Vec<String> = k1::moore_orders().iter().map(u64::to_string).collect();
            writeln!(out, "{}", orders.join(","))?;
        }
        K1Command::MooreGroups => {
            for (j, entry) in k1::moore_groups().iter().enumerate() {
                write!(out, "residue={j} order={} group={}", entry.group.order().unwrap_or(0), entry.group.machine())?;
                if let Some(note) = entry.note {
                    write!(out, " extension=\"{note}\"")?;
                }
                writeln!(out)?;
            }
        }
        K1Command::Table { from, to, machine } => {
            if from > to {
                bail!("empty range {from}..{to}");
            }
            if !machine {
                writeln!(out, "{:>6}  {:<16}  {}", "i", "sphere", "moore")?;
            }
            for i in from..=to {
                let sphere = k1::k1_sphere(i);
                let moore = k1::moore_group(i).ok().map(|r| r.group);
                if machine {
                    let m = moore.as_ref().map_or_else(|| "unsupported".to_string(), TwoLocalGroup::machine);
                    writeln!(out, "i={i} group={} moore={m}", sphere.machine())?;
                } else {
                    let m = moore.map_or_else(|| "unsupported".to_string(), |g| g.to_string());
                    writeln!(out, "{i:>6}  {:<16}  {m}", sphere.to_string())?;
                }
            }
        }
    }
    Ok(())
}

fn verdict(computed: &VlParams, published: &VlParams) -> Option<&'static str> {
    if computed == published {
        Some("exact")
    } else if computed.dominates(published) {
        Some("computed-dominates-paper")
    } else {
        None
    }
}

fn verify_mahowald(out: &mut dyn Write) -> Result<bool> {
    let run = pipeline();
    let rows: [(&str, VlParams, VlParams); 7] = [
        ("Y", run.ytilde, reference::ytilde()),
        ("Y2", run.ytilde2, reference::ytilde2_initial()),
        ("Y2 raised", run.ytilde2_raised, reference::ytilde2_improved()),
        ("Y3", run.ytilde3, reference::ytilde3_initial()),
        ("Y3 raised", run.ytilde3_raised, reference::ytilde3_improved()),
        ("C(2) from published Y3", run.c2_from_reference, reference::c2()),
        ("C(2)", run.c2, reference::c2()),
    ];
    let mut ok = true;
    for (name, computed, published) in rows {
        let v = verdict(&computed, &published);
        ok &= v.is_some();
        writeln!(
            out,
            "{name}: {} computed={computed} published={published}",
            v.unwrap_or("mismatch")
        )?;
    }
    let y3 = reference::ytilde3_initial();
    let exact_bdr = (run.ytilde3.b, run.ytilde3.d, run.ytilde3.r) == (y3.b, y3.d, y3.r);
    ok &= exact_bdr;
    writeln!(out, "Y3 b,d,r: {}", if exact_bdr { "exact" } else { "mismatch" })?;
    writeln!(out, "final={}", vline::reference::c2())?;
    Ok(ok)
}

/// Parses the process arguments and runs; see the module docs for exit codes.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
