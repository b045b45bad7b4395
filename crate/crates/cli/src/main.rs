//! `vilenkin`: verify wavelet sets, scaling sets and masks on `G*`.

mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vilenkin_core::format::{self, ParsedMask};
use vilenkin_core::mask::{self, Mask, Scalar, MAX_MASK_LEN};
use vilenkin_core::stepfn::EtaFunction;
use vilenkin_core::stream::DEFAULT_DEPTH;
use vilenkin_core::verdict::{fmt_rational, Verdict, Witness};
use vilenkin_core::{scaling, wavelet, Cylinder, CylinderSet, Error, PieceStream};

use report::{Outcome, EXIT_INPUT, EXIT_PASS};

#[derive(Parser, Debug)]
#[command(name = "vilenkin", version, about = "Exact checks on the Vilenkin dual group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    /// Enumeration depth J for sets given by tails.
    #[arg(long, default_value_t = DEFAULT_DEPTH, global = true)]
    depth: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a property of a set.
    #[command(subcommand)]
    Verify(Verify),
    /// Build a set and check it.
    #[command(subcommand)]
    Construct(Construct),
    /// Analyze a Walsh-polynomial mask.
    #[command(subcommand)]
    Mask(MaskCommand),
    /// Write λ*-interval views.
    #[command(subcommand)]
    Export(Export),
}

#[derive(Args, Debug)]
struct SetInput {
    /// Set file.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Dilation tiling plus translation congruence.
    WaveletSet(SetInput),
    /// Joint dilation tiling plus congruence of each set.
    MultiwaveletSet {
        /// Set files, one per set.
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
    },
    /// Translation congruence to U* alone.
    Congruence(SetInput),
    /// The four generalized-scaling-set conditions and the wavelet set BS \ S.
    Gss {
        /// Set file of S.
        #[arg(long, required_unless_present = "from_wavelet_set", conflicts_with = "from_wavelet_set")]
        input: Option<PathBuf>,
        /// Check S = ⋃_{j>=1} B^-j Ω for the wavelet set Ω in this file.
        #[arg(long)]
        from_wavelet_set: Option<PathBuf>,
        /// Also check the closed form B^-1(Ω ∪ S) = S for this Ω.
        #[arg(long, requires = "input")]
        closure_candidate: Option<PathBuf>,
    },
    /// The consistency equation 1 + η_S = η_BS.
    Consistency(SetInput),
    /// The θ-neighborhood criterion for BS \ S to be a wavelet set.
    NeighborhoodCriterion(SetInput),
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// S = ⋃_{j>=1} B^-j Ω from a wavelet set Ω.
    Gss {
        #[arg(long)]
        input: PathBuf,
        /// Write the constructed set file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The chain Υ_0 ⊇ .. ⊇ Υ_n from a set 𝒰 ⊆ U*.
    Upsilon {
        #[arg(long)]
        input: PathBuf,
        /// Last index of the chain.
        #[arg(short = 'n', default_value_t = 3)]
        n: u32,
        /// Write Υ_n here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct MaskInput {
    /// Mask file.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum MaskCommand {
    /// Coefficient sum, m(θ) = 1 and the QMF identity.
    Check(MaskInput),
    /// The maximal blocked set; exits 0 whenever detection ran.
    Blocked(MaskInput),
    /// φ̂ on B^R U* with the scaling-function criteria.
    Phihat {
        #[arg(long)]
        input: PathBuf,
        /// Region scale R.
        #[arg(short = 'R', long = "scale")]
        scale: u32,
        /// Write φ̂ as TSV intervals here.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Export {
    /// The set (or η_S with -K) as `lo\thi\tvalue` rows.
    Intervals {
        #[arg(long)]
        input: PathBuf,
        /// Write η_S on the cells of this resolution instead of the set.
        #[arg(short = 'K', long = "resolution")]
        resolution: Option<i64>,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An input or usage problem; always exit 3.
#[derive(Debug)]
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type Run<T> = Result<T, InputError>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Run<()> {
    fs::write(path, text).map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))
}

fn load_set(path: &Path) -> Run<PieceStream> {
    format::parse_set(&read(path)?)
        .map_err(|e| InputError(format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)))
}

fn load_finite(path: &Path) -> Run<CylinderSet> {
    load_set(path)?
        .as_finite()
        .cloned()
        .ok_or_else(|| InputError(format!("{}: expected a finite set (no tails)", path.display())))
}

fn load_mask(path: &Path) -> Run<ParsedMask> {
    format::parse_mask(&read(path)?)
        .map_err(|e| InputError(format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)))
}

fn run(cli: &Cli) -> Run<Option<Outcome>> {
    let depth = cli.depth;
    let outcome = match &cli.command {
        Command::Verify(v) => verify(v, depth)?,
        Command::Construct(c) => construct(c, depth)?,
        Command::Mask(m) => match m {
            MaskCommand::Check(i) => with_mask(&i.input, |m| Ok(m.check()))?,
            MaskCommand::Blocked(i) => with_mask(&i.input, |m| Ok(m.blocked()))?,
            MaskCommand::Phihat {
                input,
                scale,
                export,
            } => with_mask(input, |m| mask_phihat(m, *scale, export.as_deref()))?,
        },
        Command::Export(Export::Intervals {
            input,
            resolution,
            out,
        }) => {
            let text = export_intervals(input, *resolution, depth)?;
            match out {
                Some(path) => write(path, &text)?,
                None => print!("{text}"),
            }
            return Ok(None);
        }
    };
    Ok(Some(outcome))
}

fn verify(v: &Verify, depth: u32) -> Run<Outcome> {
    let single = |name: &str, input: &Path, check: fn(&PieceStream, u32) -> Verdict| -> Run<Outcome> {
        let s = load_set(input)?;
        Ok(Outcome::new(name, s.prime(), Some(depth), check(&s, depth)))
    };
    match v {
        Verify::WaveletSet(i) => single("verify wavelet-set", &i.input, wavelet::check_wavelet_set),
        Verify::Congruence(i) => single(
            "verify congruence",
            &i.input,
            wavelet::check_translation_congruence,
        ),
        Verify::Consistency(i) => single("verify consistency", &i.input, scaling::consistency_check),
        Verify::NeighborhoodCriterion(i) => single(
            "verify neighborhood-criterion",
            &i.input,
            scaling::neighborhood_criterion_check,
        ),
        Verify::MultiwaveletSet { input } => {
            let sets = input.iter().map(|p| load_set(p)).collect::<Run<Vec<_>>>()?;
            let prime = sets[0].prime();
            if let Some((path, s)) = input.iter().zip(&sets).find(|(_, s)| s.prime() != prime) {
                return Err(InputError(format!(
                    "{}: p = {} but the first set has p = {prime}",
                    path.display(),
                    s.prime()
                )));
            }
            let verdict = wavelet::check_multiwavelet_set(&sets, depth);
            Ok(Outcome::new("verify multiwavelet-set", prime, Some(depth), verdict))
        }
        Verify::Gss {
            input,
            from_wavelet_set,
            closure_candidate,
        } => {
            let command = "verify gss";
            if let Some(path) = from_wavelet_set {
                let omega = load_finite(path)?;
                let verdict = match scaling::gss_from_wavelet(&omega) {
                    Ok(s) => scaling::gss_wavelet_report(&s, depth),
                    Err(e) => Verdict::fail(Witness::new(format!("the dilates of Ω overlap: {e}"))),
                };
                return Ok(Outcome::new(command, omega.prime(), Some(depth), verdict));
            }
            let path = input.as_ref().expect("clap requires an input");
            let s = load_set(path)?;
            let mut verdict = scaling::gss_wavelet_report(&s, depth);
            if let Some(cpath) = closure_candidate {
                let omega = load_finite(cpath)?;
                let finite = s.as_finite().ok_or_else(|| {
                    InputError("--closure-candidate needs a finite S".to_string())
                })?;
                if omega.prime() != finite.prime() {
                    return Err(InputError(format!("{}: prime differs from S", cpath.display())));
                }
                verdict = Verdict::all(vec![
                    ("generalized scaling set".into(), verdict),
                    ("closure".into(), scaling::closure_verify(finite, &omega)),
                ]);
            }
            Ok(Outcome::new(command, s.prime(), Some(depth), verdict))
        }
    }
}

fn construct(c: &Construct, depth: u32) -> Run<Outcome> {
    match c {
        Construct::Gss { input, out } => {
            let omega = load_finite(input)?;
            let command = "construct gss";
            let s = match scaling::gss_from_wavelet(&omega) {
                Ok(s) => s,
                Err(e) => {
                    let v = Verdict::fail(Witness::new(format!("the dilates of Ω overlap: {e}")));
                    return Ok(Outcome::new(command, omega.prime(), Some(depth), v));
                }
            };
            let text = format::print_stream(&s).expect("described stream");
            if let Some(path) = out {
                write(path, &text)?;
            }
            let mut o = Outcome::new(command, s.prime(), Some(depth), scaling::gss_check(&s, depth));
            o.payload = json!({ "set": text });
            o.text = Some(format!("constructed set:\n{text}"));
            Ok(o)
        }
        Construct::Upsilon { input, n, out } => {
            let u = load_finite(input)?;
            let command = "construct upsilon";
            let chain = match scaling::upsilon_construct(&u, *n) {
                Ok(chain) => chain,
                Err(Error::Hypothesis(_)) => {
                    let v = scaling::upsilon_hypothesis(&u)?;
                    return Ok(Outcome::new(command, u.prime(), None, v));
                }
                Err(e) => return Err(e.into()),
            };
            let last = &chain.steps.last().expect("n + 1 steps").set;
            if let Some(path) = out {
                write(path, &format::print_set(last))?;
            }
            let steps: Vec<Value> = chain
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "index": s.index,
                        "measure": fmt_rational(&s.set.measure()),
                        "set": format::print_set(&s.set),
                    })
                })
                .collect();
            let mut o = Outcome::new(command, u.prime(), None, chain.verdict());
            o.payload = json!({ "steps": steps });
            o.text = Some(format!("Υ_{n}:\n{}", format::print_set(last)));
            Ok(o)
        }
    }
}

/// Runs `f` on either backend of a parsed mask.
fn with_mask(path: &Path, f: impl Fn(&dyn MaskView) -> Run<Outcome>) -> Run<Outcome> {
    match load_mask(path)? {
        ParsedMask::Exact(m) => f(&m),
        ParsedMask::Float(m) => f(&m).map(|mut o| {
            let note = format!("floating backend, tolerance {}", mask::cyclotomic::FLOAT_TOLERANCE);
            o.verdict = o.verdict.with_note(note);
            o
        }),
    }
}

/// The backend-independent operations the mask commands need.
trait MaskView {
    fn check(&self) -> Outcome;
    fn blocked(&self) -> Outcome;
    fn phihat(&self, scale: u32) -> Run<(Outcome, String)>;
}

impl<S: Scalar> MaskView for Mask<S> {
    fn check(&self) -> Outcome {
        let h = mask::check_mask_hypotheses(self);
        let rows: Vec<Value> = self
            .values()
            .rows()
            .into_iter()
            .map(|(lo, hi, v)| json!([fmt_rational(&lo), fmt_rational(&hi), v.to_string()]))
            .collect();
        let mut o = Outcome::new("mask check", self.prime(), None, h.verdict());
        o.payload = json!({ "n": self.n(), "values": rows });
        o
    }

    fn blocked(&self) -> Outcome {
        let report = mask::blocked_set_find(self);
        let resolution = self.n() as i64 - 1;
        let cells: Option<Vec<String>> = report.blocked.as_ref().map(|cells| {
            cells
                .iter()
                .map(|&s| Cylinder::from_index(self.prime(), &(s as u64).into(), resolution).to_string())
                .collect()
        });
        let mut o = Outcome::new(
            "mask blocked",
            self.prime(),
            None,
            report.verdict(resolution, self.prime()),
        );
        o.payload = json!({
            "generates_mra": report.generates_mra(),
            "blocked": cells,
            "removed": report.removed.len(),
        });
        o.text = Some(format!(
            "MRA: {}\n",
            if report.generates_mra() { "yes" } else { "no" }
        ));
        o.exit = Some(EXIT_PASS);
        o
    }

    fn phihat(&self, scale: u32) -> Run<(Outcome, String)> {
        let c = mask::scaling_criteria_check(self, scale)?;
        let tsv = format::write_table_intervals(&c.phi);
        let mut o = Outcome::new("mask phihat", self.prime(), None, c.verdict());
        o.payload = json!({
            "scale": scale,
            "theta_value": c.theta_value.to_string(),
            "partial_sums": c.partial_sums.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        });
        Ok((o, tsv))
    }
}

fn mask_phihat(m: &dyn MaskView, scale: u32, export: Option<&Path>) -> Run<Outcome> {
    let (o, tsv) = m.phihat(scale)?;
    if let Some(path) = export {
        write(path, &tsv)?;
    }
    Ok(o)
}

fn export_intervals(input: &Path, resolution: Option<i64>, depth: u32) -> Run<String> {
    let s = load_set(input)?;
    let e = s
        .enumerate(depth)
        .map_err(|o| InputError(format!("pieces overlap: {o}")))?;
    if !e.is_complete() {
        eprintln!(
            "note: only pieces up to depth {depth} are exported; the rest has measure {}",
            fmt_rational(&e.tail_bound)
        );
    }
    let Some(k) = resolution else {
        return Ok(format::write_set_intervals(&e.union));
    };
    let prime = s.prime();
    if k < 0 {
        return Err(InputError("-K must be nonnegative".into()));
    }
    let eta = EtaFunction::of_set(&e.union);
    if eta.values.resolution() > k {
        return Err(InputError(format!(
            "η_S is not constant on cells of resolution {k}; use -K {} or more",
            eta.values.resolution()
        )));
    }
    let count = u32::try_from(k)
        .ok()
        .and_then(|k| (prime.get() as u64).checked_pow(k))
        .filter(|&c| c <= MAX_MASK_LEN)
        .ok_or_else(|| InputError(format!("p^{k} cells is too many")))?;
    let values = eta.cell_values(k);
    Ok(format::write_rows((0..count).map(|s| {
        let (lo, hi) = Cylinder::from_index(prime, &s.into(), k).interval();
        (lo, hi, values[s as usize])
    })))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS });
        }
    };
    match run(&cli) {
        Ok(None) => ExitCode::from(EXIT_PASS),
        Ok(Some(outcome)) => {
            let text = match cli.format {
                OutputFormat::Text => outcome.to_text(),
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&outcome.to_json()).expect("json");
                    s.push('\n');
                    s
                }
            };
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(outcome.exit_code())
        }
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
