//! Command-line front end. Every command produces one JSON document; with
//! `--out` it goes to the file and a human summary to stdout, otherwise the
//! JSON goes to stdout and the summary to stderr.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::conegeo::{self, LeeCase, ResidualReport, DEFAULT_H, DEFAULT_SAMPLES, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::exterior::{stabilizer_dim, Form};
use crate::groups::{self, DEFAULT_CAP};
use crate::json::{
    octonion_to_json, parse_frame, parse_generators, FormJson, GroupFile, GroupMetadata,
};
use crate::octonion::CayleyTable;
use crate::{structures, verify};

#[derive(Parser, Debug)]
#[command(
    name = "lcpforms",
    version,
    about = "Exact G2 / Spin(7) form algebra, octonionic frame groups and cone checks"
)]
pub struct Cli {
    /// Seed for every randomized procedure.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormSel {
    G2,
    Spin7,
    #[value(name = "spin7-oct")]
    Spin7Oct,
}

impl FormSel {
    pub fn form(self) -> Form {
        match self {
            FormSel::G2 => structures::g2_form(),
            FormSel::Spin7 => structures::spin7_form(),
            FormSel::Spin7Oct => structures::spin7_form_octonionic(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseSel {
    G2,
    Spin7,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print one of the standard forms.
    Form {
        #[arg(long, value_enum)]
        form: FormSel,
    },
    /// Dimension of the stabilizer in so(n).
    Stab {
        #[arg(
            long,
            value_enum,
            conflicts_with = "input",
            required_unless_present = "input"
        )]
        form: Option<FormSel>,
        /// Form JSON file.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Lee form from a structure form and its derivative.
    Lee(LeeArgs),
    /// Torsion term for a Lee form.
    Torsion {
        #[arg(long, value_enum, default_value = "g2")]
        case: CaseSel,
        /// 1-form JSON file with the Lee form.
        #[arg(long)]
        theta: PathBuf,
    },
    #[command(subcommand)]
    Group(GroupCmd),
    #[command(subcommand)]
    Cone(ConeCmd),
    #[command(subcommand)]
    Nk(NkCmd),
    #[command(subcommand)]
    Dilation(DilationCmd),
    /// Run every acceptance criterion.
    VerifyAll,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct NumericArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_H)]
    pub h: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct LeeArgs {
    #[command(subcommand)]
    pub sub: Option<LeeCmd>,
    #[arg(long, value_enum, default_value = "g2")]
    pub case: CaseSel,
    /// JSON file with the derivative (4-form for g2, 5-form for spin7).
    #[arg(long)]
    pub d: Option<PathBuf>,
    /// JSON file with the structure form; defaults to the standard one.
    #[arg(long)]
    pub structure: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum LeeCmd {
    /// Numeric Lee-form closedness on the cylinder model.
    Check {
        #[arg(long, value_enum, default_value = "g2")]
        case: CaseSel,
        #[command(flatten)]
        num: NumericArgs,
    },
    /// Lee constants recovered from `d = s beta ^ form` over basis `beta`.
    Recover {
        #[arg(long, value_enum, default_value = "g2")]
        case: CaseSel,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Generate a group from a frame or from explicit generators.
    Gen {
        /// Comma-separated basis labels, e.g. e1,e2,-e7.
        #[arg(long, group = "source")]
        frame: Option<String>,
        /// JSON array of exact octonions.
        #[arg(long, group = "source")]
        frame_file: Option<PathBuf>,
        /// JSON list of matrices (or {"generators": [...]}).
        #[arg(long, group = "source")]
        generators: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Freeness on S^7 and preservation of a Spin(7) form.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "spin7-oct")]
        form: FormSel,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConeCmd {
    /// Check d_S sigma = k rho and d_S rho = 0 on the sphere.
    Verify {
        #[arg(long, value_enum, default_value = "g2")]
        form: FormSel,
        #[command(flatten)]
        num: NumericArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum NkCmd {
    /// Type (3,0)+(0,3) of d_S F on S^6.
    Check {
        #[command(flatten)]
        num: NumericArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum DilationCmd {
    /// Dilation invariance of the rescaled Cayley form.
    Check {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = conegeo::DILATION_REL_TOL)]
        tol: f64,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub lines: Vec<String>,
    pub passed: bool,
}

impl Report {
    fn ok(json: Value) -> Self {
        Report {
            json,
            lines: Vec::new(),
            passed: true,
        }
    }

    fn residual(r: &ResidualReport) -> Result<Self> {
        Ok(Report {
            json: serde_json::to_value(r)?,
            lines: vec![r.summary_line()],
            passed: r.passed,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn read_form(path: &Path) -> Result<Form> {
    let j: FormJson = serde_json::from_str(&read(path)?)?;
    Form::try_from(&j)
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn check_numeric(n: &NumericArgs) -> Result<()> {
    if n.samples == 0 || n.h.is_nan() || n.h <= 0.0 || n.tol.is_nan() || n.tol <= 0.0 {
        return Err(Error::InvalidArgument(
            "samples, h and tol must be positive".into(),
        ));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Report> {
    let table = CayleyTable::standard();
    let seed = cli.seed;
    match &cli.command {
        Command::Form { form } => Ok(Report::ok(to_value(&FormJson::from(&form.form()))?)),
        Command::Stab { form, input } => {
            let f = match (form, input) {
                (Some(sel), _) => sel.form(),
                (None, Some(p)) => read_form(p)?,
                (None, None) => return Err(Error::InvalidArgument("give --form or --in".into())),
            };
            let d = stabilizer_dim(&f);
            Ok(Report {
                json: json!({ "stabilizer_dim": d }),
                lines: vec![format!("stabilizer dimension {d}")],
                passed: true,
            })
        }
        Command::Lee(args) => match &args.sub {
            Some(LeeCmd::Check { case, num }) => {
                check_numeric(num)?;
                let case = match case {
                    CaseSel::G2 => LeeCase::G2,
                    CaseSel::Spin7 => LeeCase::Spin7,
                };
                Report::residual(&conegeo::lee_closedness_check(
                    case,
                    num.samples,
                    num.h,
                    num.tol,
                    seed,
                )?)
            }
            Some(LeeCmd::Recover { case }) => {
                let r = match case {
                    CaseSel::G2 => structures::lee_recovery_g2(&structures::g2_form())?,
                    CaseSel::Spin7 => structures::lee_recovery_spin7(&structures::spin7_form())?,
                };
                let passed = r.constant.is_some();
                let line = match &r.constant {
                    Some(c) => format!("PASS uniform Lee constant {c}"),
                    None => "FAIL Lee constant varies over the basis".into(),
                };
                Ok(Report {
                    json: to_value(&r)?,
                    lines: vec![line],
                    passed,
                })
            }
            None => {
                let d_path = args
                    .d
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("lee needs --d <file>".into()))?;
                let d = read_form(d_path)?;
                let base = match &args.structure {
                    Some(p) => read_form(p)?,
                    None => match args.case {
                        CaseSel::G2 => structures::g2_form(),
                        CaseSel::Spin7 => structures::spin7_form(),
                    },
                };
                let theta = match args.case {
                    CaseSel::G2 => structures::lee_g2(&base, &d)?,
                    CaseSel::Spin7 => structures::lee_spin7(&base, &d)?,
                };
                Ok(Report::ok(to_value(&FormJson::from(&theta))?))
            }
        },
        Command::Torsion { case, theta } => {
            let t = read_form(theta)?;
            let out = match case {
                CaseSel::G2 => structures::torsion_g2(&t, &structures::g2_form())?,
                CaseSel::Spin7 => structures::torsion_spin7(&t, &structures::spin7_form())?,
            };
            Ok(Report::ok(to_value(&FormJson::from(&out))?))
        }
        Command::Group(GroupCmd::Gen {
            frame,
            frame_file,
            generators,
            cap,
        }) => {
            let (group, metadata) = match (frame, frame_file, generators) {
                (Some(spec), _, _) => {
                    let fr = groups::parse_frame_labels(spec)?;
                    let g = groups::frame_group(table, &fr, *cap)?;
                    let meta = GroupMetadata {
                        source: format!("frame {spec}"),
                        frame: Some(fr.iter().map(octonion_to_json).collect()),
                        expected_order: Some(1 << (fr.len() + 1)),
                    };
                    (g, meta)
                }
                (_, Some(path), _) => {
                    let fr = parse_frame(&read(path)?)?;
                    let g = groups::frame_group(table, &fr, *cap)?;
                    let meta = GroupMetadata {
                        source: format!("frame file {}", path.display()),
                        frame: Some(fr.iter().map(octonion_to_json).collect()),
                        expected_order: Some(1 << (fr.len() + 1)),
                    };
                    (g, meta)
                }
                (_, _, Some(path)) => {
                    let gens = parse_generators(&read(path)?)?;
                    let g = groups::closure(&gens, *cap)?;
                    (
                        g,
                        GroupMetadata {
                            source: format!("generators {}", path.display()),
                            ..Default::default()
                        },
                    )
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "give --frame, --frame-file or --generators".into(),
                    ))
                }
            };
            let line = format!("group of order {}", group.order());
            Ok(Report {
                json: to_value(&GroupFile::from_group(&group, metadata))?,
                lines: vec![line],
                passed: true,
            })
        }
        Command::Group(GroupCmd::Classify { input, form, cap }) => {
            let file: GroupFile = serde_json::from_str(&read(input)?)?;
            let g = file.to_group(*cap)?;
            let r = groups::classify(&g, &form.form())?;
            let line = format!(
                "order {}, free on S^7: {}, preserves Spin(7) form: {}",
                r.order, r.is_free_on_sphere, r.preserves_spin7
            );
            Ok(Report {
                json: to_value(&r)?,
                lines: vec![line],
                passed: true,
            })
        }
        Command::Cone(ConeCmd::Verify { form, num }) => {
            check_numeric(num)?;
            Report::residual(&conegeo::verify_cone_identity(
                &form.form(),
                num.samples,
                num.h,
                num.tol,
                seed,
            )?)
        }
        Command::Nk(NkCmd::Check { num }) => {
            check_numeric(num)?;
            Report::residual(&conegeo::nearly_kaehler_check(
                table,
                num.samples,
                num.h,
                num.tol,
                seed,
            )?)
        }
        Command::Dilation(DilationCmd::Check { samples, tol }) => {
            Report::residual(&conegeo::dilation_invariance_check(*samples, *tol, seed)?)
        }
        Command::VerifyAll => {
            let outcomes = verify::run_all(seed);
            let passed = outcomes.iter().all(|o| o.passed);
            let mut lines: Vec<String> = outcomes.iter().map(verify::Outcome::line).collect();
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            lines.push(if passed {
                "ALL PASS".into()
            } else {
                format!("{failed} of {} criteria FAILED", outcomes.len())
            });
            Ok(Report {
                json: json!({ "seed": seed, "passed": passed, "criteria": outcomes }),
                lines,
                passed,
            })
        }
    }
}

/// Error document written to stderr.
pub fn error_json(e: &Error) -> Value {
    json!({ "error": e.kind(), "message": e.to_string() })
}

/// Parses `args`, runs, prints. Returns the process exit code: 0 on
/// success, 1 when a check fails, 2 on errors.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            return 2;
        }
    };
    let text = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
    let verify_all = matches!(cli.command, Command::VerifyAll);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("{}", error_json(&Error::Io(e)));
                return 2;
            }
            for l in &report.lines {
                println!("{l}");
            }
        }
        None if verify_all => {
            for l in &report.lines {
                println!("{l}");
            }
        }
        None => {
            println!("{text}");
            for l in &report.lines {
                eprintln!("{l}");
            }
        }
    }
    if report.passed {
        0
    } else {
        1
    }
}
