mod files;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cubicpoles::config::{enumerate_4lines, generate_instance, m_sequence, InstanceKind, MSequence, PointSet};
use cubicpoles::construct::{
    lemma2_construct, theorem_case_construct, verify_certificate, ConstructionReport, Outcome, PotentialCertificate,
    VerificationReport,
};
use cubicpoles::currents::{
    estimate_growth, estimate_pole_weight, growth_radii, lelong_inequality_check, pole_radii, sharpness_example,
    ArrangementCurrent, GrowthEstimate, InequalityReport, LelongEstimate, Sampling,
};
use cubicpoles::linsys::{build_system, VanishingCondition};
use cubicpoles::{par, rational};
use serde::{Deserialize, Serialize};

use files::{
    emit, parse_point, read, CliError, CliResult, PointsInput, Versioned, EXIT_UNSUPPORTED, EXIT_VERIFICATION,
};

#[derive(Parser)]
#[command(name = "cubicpoles", version, about = "Exact plane-curve certificates for potentials with prescribed poles")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized choice.
    #[arg(long, global = true, env = "CUBICPOLES_SEED", default_value_t = 1)]
    seed: u64,
    /// Worker threads for data-parallel steps.
    #[arg(long, global = true, env = "CUBICPOLES_JOBS")]
    jobs: Option<usize>,
    /// Allowed distance between estimated and claimed pole weights.
    #[arg(long, global = true, env = "CUBICPOLES_TOLERANCE", default_value_t = 0.05)]
    tolerance: f64,
    /// Report file; the report goes to stdout and the summary to stderr when omitted.
    #[arg(long, global = true, env = "CUBICPOLES_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Realize a named point configuration.
    Generate {
        /// generic12, figure1..figure5, case2, case3, case4, case4-line, case4-line-conic,
        /// lemma-case2, lemma-case3, conic7 or example6lines.
        #[arg(long)]
        kind: InstanceKind,
    },
    /// Maximal numbers of points on a line, a conic and a cubic, with witnesses.
    Msequence {
        /// Instance or point file.
        input: PathBuf,
    },
    /// Curves of a given degree with prescribed orders at labeled points.
    Linsys {
        /// Instance or point file.
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        degree: u32,
        /// Labels with order 2 (default 1..=6).
        #[arg(long, value_delimiter = ',')]
        doubles: Option<Vec<usize>>,
        /// Labels with order 1 (default: all others).
        #[arg(long, value_delimiter = ',')]
        simple: Option<Vec<usize>>,
    },
    /// Build and verify a potential certificate for a twelve-point set.
    Construct {
        /// Instance or point file with twelve points.
        input: PathBuf,
        /// Extra point `x,y,z` for sets with eleven points on a cubic.
        #[arg(long)]
        extra_point: Option<String>,
    },
    /// Re-verify a certificate or construction report from scratch.
    Certify {
        /// Certificate file or `construct` report.
        input: PathBuf,
    },
    /// Estimate pole weights and growth of a certified potential.
    Lelong {
        /// Certificate file or `construct` report.
        input: PathBuf,
        /// Radii for the pole fits (default 2^-8..2^-16).
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Radii for the growth fit (default 2^8..2^16).
        #[arg(long, value_delimiter = ',')]
        growth_radii: Option<Vec<f64>>,
        /// Allowed distance between the growth slope and the total weight.
        #[arg(long, default_value_t = 0.1)]
        growth_tolerance: f64,
        /// Write `log r, max u` rows for every fit here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Unit-mass line arrangement to check the weighted Lelong inequality against.
        #[arg(long)]
        arrangement: Option<PathBuf>,
    },
    /// The six-line example with fifteen points of Lelong number 1/3.
    Sharpness,
    /// Families of four-point lines up to relabeling.
    Enumerate {
        #[arg(long, default_value_t = 12)]
        points: usize,
        /// Most four-point lines through any one point.
        #[arg(long, default_value_t = 2)]
        cap: usize,
    },
}

struct Ctx {
    out: Option<PathBuf>,
    started: Instant,
}

impl Ctx {
    fn say(&self, line: &str) {
        if self.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }

    fn emit<T: Serialize>(&self, body: T) -> CliResult<()> {
        emit(self.out.as_ref(), body)?;
        self.say(&format!("elapsed {:.2}s", self.started.elapsed().as_secs_f64()));
        Ok(())
    }
}

#[derive(Serialize)]
struct MSequenceReport<'a> {
    points: &'a PointSet,
    m_sequence: MSequence,
    witnesses_sound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_metadata: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct ConstructOutput {
    m_sequence: [usize; 3],
    report: ConstructionReport,
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    certificate: PotentialCertificate,
}

#[derive(Serialize)]
struct CertifyOutput {
    verification: VerificationReport,
}

#[derive(Serialize)]
struct LelongOutput {
    sampling: Sampling,
    tolerance: f64,
    growth_tolerance: f64,
    poles: Vec<LelongEstimate>,
    growth: GrowthEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    inequality: Option<InequalityReport>,
    pass: bool,
}

#[derive(Deserialize)]
struct ArrangementFile {
    arrangement: ArrangementCurrent,
}

fn labels_in(s: &PointSet, labels: &[usize]) -> CliResult<()> {
    match labels.iter().find(|&&l| l == 0 || l > s.len()) {
        Some(l) => Err(CliError::new(files::EXIT_PRECONDITION, format!("label {l} is outside 1..={}", s.len()))),
        None => Ok(()),
    }
}

fn read_certificate(path: &Path) -> CliResult<PotentialCertificate> {
    if files::has_field(path, "certificate")? {
        return Ok(read::<Versioned<CertificateFile>>(path)?.body.certificate);
    }
    let out: Versioned<ConstructOutput> = read(path)?;
    match out.body.report.outcome {
        Outcome::Certificate(c) => Ok(c),
        other => Err(CliError::new(
            files::EXIT_PRECONDITION,
            format!("{}: the report holds no certificate ({other:?})", path.display()),
        )),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let g = cli.global;
    if let Some(j) = g.jobs {
        par::set_jobs(j);
    }
    let ctx = Ctx { out: g.out.clone(), started: Instant::now() };
    match cli.command {
        Command::Generate { kind } => {
            let inst = generate_instance(kind, g.seed)?;
            ctx.say(&format!(
                "{kind} seed {}: m = {:?} after {} attempts",
                g.seed,
                inst.m_sequence.values(),
                inst.attempts
            ));
            ctx.emit(inst)
        }
        Command::Msequence { input } => {
            let inp = PointsInput::read(&input)?;
            let m = m_sequence(inp.points())?;
            let matches_metadata = match &inp {
                PointsInput::Instance(i) => Some(i.certify().is_ok() && i.m_sequence == m),
                PointsInput::Points(_) => None,
            };
            ctx.say(&format!("m = {:?}", m.values()));
            let witnesses_sound = m.witnesses_sound(inp.points());
            ctx.emit(MSequenceReport { points: inp.points(), m_sequence: m, witnesses_sound, matches_metadata })
        }
        Command::Linsys { input, degree, doubles, simple } => {
            let inp = PointsInput::read(&input)?;
            let s = inp.points();
            let doubles = doubles.unwrap_or_else(|| (1..=6.min(s.len())).collect());
            let simple = simple.unwrap_or_else(|| (1..=s.len()).filter(|l| !doubles.contains(l)).collect());
            labels_in(s, &doubles)?;
            labels_in(s, &simple)?;
            let conditions: Vec<VanishingCondition> = doubles
                .iter()
                .map(|&l| VanishingCondition::new(s.get(l).clone(), 2))
                .chain(simple.iter().map(|&l| VanishingCondition::new(s.get(l).clone(), 1)))
                .collect();
            let sys = build_system(degree, &conditions)?;
            ctx.say(&format!(
                "degree {degree}: rank {}, dimension {} (expected {})",
                sys.matrix_rank,
                sys.dim(),
                sys.expected_dim
            ));
            ctx.emit(sys)
        }
        Command::Construct { input, extra_point } => {
            let inp = PointsInput::read(&input)?;
            let extra = match extra_point {
                Some(s) => Some(parse_point(&s)?),
                None => inp.extra_point().cloned(),
            };
            let m = m_sequence(inp.points())?;
            let report = if m.m3 == 9 {
                lemma2_construct(inp.points())?
            } else {
                theorem_case_construct(inp.points(), extra.as_ref())?
            };
            ctx.say(&format!("trace: {}", report.trace.join(" > ")));
            let code = match &report.outcome {
                Outcome::Certificate(c) => {
                    ctx.say(&format!(
                        "certificate: gamma {} total weight {} verified {}",
                        c.gamma_u, c.total_weight, c.verified
                    ));
                    0
                }
                Outcome::Contradiction { reason } => {
                    ctx.say(&format!("contradiction: {reason}"));
                    0
                }
                Outcome::Unsupported { reason } => {
                    ctx.say(&format!("unsupported: {reason}"));
                    EXIT_UNSUPPORTED
                }
            };
            ctx.emit(ConstructOutput { m_sequence: m.values(), report })?;
            if code != 0 {
                return Err(CliError::new(code, "no certificate for this configuration"));
            }
            Ok(())
        }
        Command::Certify { input } => {
            let cert = read_certificate(&input)?;
            let verification = verify_certificate(&cert);
            for f in &verification.failures {
                ctx.say(&format!("failure: {f}"));
            }
            ctx.say(&format!("verified {}", verification.verified));
            let ok = verification.verified;
            ctx.emit(CertifyOutput { verification })?;
            if !ok {
                return Err(CliError::new(EXIT_VERIFICATION, "certificate failed verification"));
            }
            Ok(())
        }
        Command::Lelong { input, radii, growth_radii: gr, growth_tolerance, csv, arrangement } => {
            let cert = read_certificate(&input)?;
            let sampling = Sampling { seed: g.seed, ..Sampling::default() };
            let radii = radii.unwrap_or_else(pole_radii);
            let gr = gr.unwrap_or_else(growth_radii);
            let poles = cert
                .points
                .iter()
                .map(|p| estimate_pole_weight(&cert, &p.point, &radii, sampling))
                .collect::<cubicpoles::Result<Vec<_>>>()?;
            let growth = estimate_growth(&cert, &gr, sampling)?;
            let inequality = match arrangement {
                Some(path) => {
                    Some(lelong_inequality_check(&read::<Versioned<ArrangementFile>>(&path)?.body.arrangement, &cert)?)
                }
                None => None,
            };
            for (p, e) in cert.points.iter().zip(&poles) {
                let name = p.label.map_or("extra".to_string(), |l| format!("x{l}"));
                ctx.say(&format!(
                    "{name}: claimed {} estimated {:.4} (residual {:.1e})",
                    rational::format(&p.weight),
                    e.extrapolated,
                    e.residual
                ));
            }
            ctx.say(&format!("growth: claimed {} estimated {:.4}", rational::format(&growth.claimed), growth.slope));
            if let Some(i) = &inequality {
                ctx.say(&format!("weighted Lelong sum {} <= {}: {}", i.lhs, i.rhs, i.pass));
            }
            if let Some(path) = csv {
                let mut text = String::new();
                for (p, e) in cert.points.iter().zip(&poles) {
                    text.push_str(&format!("# pole {}\n{}", p.point, e.csv()));
                }
                text.push_str(&format!("# growth\n{}", growth.csv()));
                std::fs::write(&path, text)
                    .map_err(|e| CliError::new(files::EXIT_PRECONDITION, format!("{}: {e}", path.display())))?;
            }
            let pass = poles.iter().all(|e| e.within(g.tolerance))
                && growth.within(growth_tolerance)
                && inequality.as_ref().is_none_or(|i| i.pass);
            ctx.emit(LelongOutput {
                sampling,
                tolerance: g.tolerance,
                growth_tolerance,
                poles,
                growth,
                inequality,
                pass,
            })?;
            if !pass {
                return Err(CliError::new(EXIT_VERIFICATION, "estimates disagree with the certificate"));
            }
            Ok(())
        }
        Command::Sharpness => {
            let s = sharpness_example(g.seed)?;
            ctx.say(&format!(
                "seed {}: 15 points, all Lelong 1/3: {}, all 105 thirteen-point ranks 10: {}, m = {:?}",
                g.seed,
                s.all_one_third,
                s.all_full_rank,
                s.m_sequence.values()
            ));
            let ok = s.all_one_third && s.all_full_rank && s.no_three_concurrent;
            ctx.emit(s)?;
            if !ok {
                return Err(CliError::new(EXIT_VERIFICATION, "the example does not have the expected properties"));
            }
            Ok(())
        }
        Command::Enumerate { points, cap } => {
            let r = enumerate_4lines(points, cap)?;
            ctx.say(&format!(
                "{points} labels, cap {cap}: maximum {} lines, {} maximal classes",
                r.maximum,
                r.maximal.len()
            ));
            ctx.emit(r)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
