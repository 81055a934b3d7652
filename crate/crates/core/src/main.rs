use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bjorth::experiments::{experiment_ids, run_experiment};
use bjorth::io::{self, format_rational, parse_rational, parse_vector, LoadedOperator, LoadedSpace};
use bjorth::operators::{
    counterexample_operator, is_scalar_isometry, preserves_eps_at, preserves_eps_global, Family, PreservationConfig,
};
use bjorth::orthogonality::{epsilon_x, is_eps_orthogonal, is_eps_orthogonal_definitional, OrthoConfig};
use bjorth::render::{render_ball_svg, RenderOptions};
use bjorth::scalar::Rational;
use bjorth::space::{cross_polytope, cube, preset_space, Face, Preset, Space};
use bjorth::{Error, Result};

#[derive(Parser)]
#[command(name = "bjorth", version, about = "Approximate Birkhoff-James orthogonality in polyhedral and l_p spaces")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Float)]
    mode: ModeArg,
    /// Float-mode tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Args)]
struct SpaceArg {
    /// A space JSON file or a preset such as `linf(3)`, `lp(4,2.5)`,
    /// `regular_2n_gon(4)`, `octagonal_prism`.
    #[arg(long)]
    space: String,
}

#[derive(Args)]
struct OperatorArg {
    /// Operator JSON file.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    operator: Option<PathBuf>,
    /// Named operator: `lp(n,p,eps)`, `l1(n,eps)`, `linf3_local(eps)`,
    /// `octagon_to_linf2`.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a space from a point file or preset and print it.
    Build(SpaceArg),
    Norm {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Extreme supporting functionals at x.
    Jset {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Birkhoff-James orthogonality of x to y.
    Orth {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Use the norm-only line search instead of support functionals.
        #[arg(long)]
        definitional: bool,
    },
    EpsOrth {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        definitional: bool,
    },
    /// Does T preserve eps-orthogonality (at x, or everywhere)?
    Preserves {
        #[command(flatten)]
        op: OperatorArg,
        #[arg(long)]
        eps: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    EpsilonX(SpaceArg),
    /// Neighboring cone regions of each facet (or one facet).
    Neighbors {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        facet: Option<usize>,
    },
    /// Is T a scalar multiple of an isometry?
    Isometry {
        #[command(flatten)]
        op: OperatorArg,
    },
    /// Run a registered experiment, or `all`.
    Experiment {
        id: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// SVG picture of a 2-D unit ball.
    Render {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        cones: bool,
        /// A point to mark; may be repeated.
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
        /// Draw the Birkhoff-James orthogonal directions of marked points.
        #[arg(long)]
        orth_rays: bool,
        #[arg(long, default_value_t = 400)]
        size: u32,
    },
}

/// What a command produced: text or JSON, and whether its verdicts passed.
struct Output {
    value: Value,
    text: String,
    pass: bool,
}

impl Output {
    fn info(value: Value, text: String) -> Self {
        Output { value, text, pass: true }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.value).expect("JSON values serialize") + "\n"
            } else {
                out.text
            };
            if let Err(e) = emit(cli.out.as_deref(), &body) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.pass {
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

fn emit(path: Option<&Path>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn load_space(arg: &str, cli: &Cli) -> Result<LoadedSpace> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        let loaded = io::space_from_json(&text, Some(cli.tol))?;
        if cli.mode == ModeArg::Exact && loaded.exact.is_none() && loaded.space.as_polyhedral().is_some() {
            return Err(Error::Parse("--mode exact needs a file with \"mode\":\"exact\"".into()));
        }
        return Ok(loaded);
    }
    let preset: Preset = arg.parse()?;
    if cli.mode == ModeArg::Exact {
        return match preset {
            Preset::Linf(n) => Ok(cube::<Rational>(n).into()),
            Preset::L1(n) => Ok(cross_polytope::<Rational>(n).into()),
            other => Err(Error::Parse(format!("preset {other} has no exact form"))),
        };
    }
    preset_space(&preset).map(Into::into)
}

fn load_operator(arg: &OperatorArg, cli: &Cli) -> Result<LoadedOperator> {
    if let Some(path) = &arg.operator {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        return io::operator_from_json(&text, Some(cli.tol));
    }
    let family: Family = arg.family.as_deref().unwrap_or_default().parse()?;
    let op = counterexample_operator(&family)?;
    Ok(LoadedOperator {
        domain: op.domain().clone().into(),
        codomain: op.codomain().clone().into(),
        exact: None,
        op,
    })
}

fn ortho(cli: &Cli, eps: f64) -> Result<OrthoConfig> {
    let cfg = OrthoConfig {
        epsilon: eps,
        tol: cli.tol,
        ..Default::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c}")).collect();
    format!("({})", parts.join(", "))
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.cmd {
        Cmd::Build(a) => {
            let s = load_space(&a.space, cli)?;
            let value = io::space_to_value(&s);
            let mut text = format!("{}\n", s.space.describe());
            if let Some(p) = s.space.as_polyhedral() {
                text += &format!("{} vertices, {} facets\n", p.vertices().len(), p.dual_vertices().len());
            }
            text += &io::space_to_json(&s);
            text.push('\n');
            Ok(Output::info(value, text))
        }
        Cmd::Norm { space, x } => {
            let s = load_space(&space.space, cli)?;
            if let Some(exact) = &s.exact {
                let xq: Vec<Rational> = x.split(',').map(parse_rational).collect::<Result<_>>()?;
                let n = exact.norm(&xq)?;
                let q = format_rational(&n);
                return Ok(Output::info(json!({"norm": q, "mode": "exact"}), format!("{q}\n")));
            }
            let xv = parse_vector(x)?;
            let n = s.space.norm(&xv)?;
            Ok(Output::info(json!({"norm": n, "mode": "float"}), format!("{n}\n")))
        }
        Cmd::Jset { space, x } => {
            let s = load_space(&space.space, cli)?;
            let xv = parse_vector(x)?;
            let set = s.space.support_set(&xv)?;
            let order = s.space.smoothness_order(&xv)?;
            let (value, text) = match &set.face {
                Face::Extremes { functionals, labels } => {
                    let fs: Vec<Vec<f64>> = functionals.iter().map(|f| f.0.clone()).collect();
                    let mut text = format!("norm {}; {} extreme supporting functional(s), smoothness order {order}\n", set.value, fs.len());
                    for (i, f) in fs.iter().enumerate() {
                        match labels {
                            Some(l) => text += &format!("  f{} = {}\n", l[i], fmt_vec(f)),
                            None => text += &format!("  {}\n", fmt_vec(f)),
                        }
                    }
                    (json!({"norm": set.value, "functionals": fs, "labels": labels, "smoothness_order": order}), text)
                }
                Face::SignPattern { signs, free } => (
                    json!({"norm": set.value, "signs": signs, "free": free, "count": set.extreme_count(), "smoothness_order": order}),
                    format!(
                        "norm {}; sign pattern {:?} with free coordinates {:?} ({} extremes), smoothness order {order}\n",
                        set.value,
                        signs,
                        free,
                        set.extreme_count()
                    ),
                ),
            };
            Ok(Output::info(value, text))
        }
        Cmd::Orth { space, x, y, definitional } => decide(cli, space, x, y, 0.0, *definitional),
        Cmd::EpsOrth {
            space,
            x,
            y,
            eps,
            definitional,
        } => decide(cli, space, x, y, *eps, *definitional),
        Cmd::Preserves { op, eps, x, samples } => {
            let lo = load_operator(op, cli)?;
            let cfg = PreservationConfig {
                tol: cli.tol,
                samples: *samples,
                seed: cli.seed,
            };
            let v = match x {
                Some(x) => preserves_eps_at(&lo.op, &parse_vector(x)?, *eps, &cfg)?,
                None => preserves_eps_global(&lo.op, *eps, &cfg)?,
            };
            let mut text = format!(
                "{} (method {}, margin {:.3e}, {} checked)\n",
                if v.holds { "preserves" } else { "does not preserve" },
                serde_json::to_value(v.method).unwrap_or_default().as_str().unwrap_or_default(),
                v.margin,
                v.checked
            );
            if let Some(w) = &v.witness {
                text += &format!("witness: x = {}, y = {}, margin {:.3e}\n", fmt_vec(&w.x), fmt_vec(&w.y), w.margin);
            }
            let pass = v.holds;
            Ok(Output {
                value: serde_json::to_value(&v).unwrap_or_default(),
                text,
                pass,
            })
        }
        Cmd::EpsilonX(a) => {
            let s = load_space(&a.space, cli)?;
            let e = epsilon_x(&s.space)?;
            let mut text = format!("eps_X = {}\n", e.value);
            if e.overridden {
                match e.formula {
                    Some(f) => text += &format!("pairwise formula gives {f}; 1 is used for this space\n"),
                    None => text += "1 is used for this space\n",
                }
            }
            Ok(Output::info(serde_json::to_value(e).unwrap_or_default(), text))
        }
        Cmd::Neighbors { space, facet } => {
            let s = load_space(&space.space, cli)?;
            let p = s
                .space
                .as_polyhedral()
                .cloned()
                .or_else(|| s.space.as_lp().and_then(|l| l.to_polyhedral()))
                .ok_or_else(|| Error::UnsupportedSpace("neighbors need a polyhedral space".into()))?;
            let which: Vec<usize> = match facet {
                Some(f) => vec![*f],
                None => (0..p.dual_vertices().len()).collect(),
            };
            let mut rows = Vec::new();
            let mut text = String::new();
            for f in which {
                let nb = bjorth::cones::neighbors(&p, f)?;
                text += &format!("f{f}: {:?}\n", nb);
                rows.push(json!({"facet": f, "neighbors": nb}));
            }
            Ok(Output::info(Value::Array(rows), text))
        }
        Cmd::Isometry { op } => {
            let lo = load_operator(op, cli)?;
            let k = is_scalar_isometry(&lo.op, cli.tol.max(1e-12) * 100.0)?;
            let text = match k {
                Some(k) => format!("scalar multiple of an isometry, k = {k}\n"),
                None => "not a scalar multiple of an isometry\n".to_string(),
            };
            Ok(Output::info(json!({ "scalar": k }), text))
        }
        Cmd::Experiment { id, list } => {
            if *list || id.is_none() {
                let ids = experiment_ids();
                let text = ids.iter().map(|i| format!("{i}\n")).collect();
                return Ok(Output::info(json!(ids), text));
            }
            let id = id.as_deref().unwrap_or_default();
            let ids: Vec<&str> = if id.eq_ignore_ascii_case("all") {
                experiment_ids()
            } else {
                vec![id]
            };
            let mut records = Vec::new();
            let mut text = String::new();
            let mut pass = true;
            for i in ids {
                let r = run_experiment(i, cli.seed, cli.tol)?;
                pass &= r.passed();
                text += &format!("{} [{}] {} ms\n", r.id, if r.passed() { "pass" } else { "FAIL" }, r.runtime_ms);
                for c in &r.verdicts {
                    text += &format!("  {:<5} {} (margin {:.3e})\n", if c.holds { "ok" } else { "FAIL" }, c.name, c.margin);
                }
                records.push(serde_json::to_value(&r).unwrap_or_default());
            }
            let value = if records.len() == 1 {
                records.pop().unwrap_or_default()
            } else {
                Value::Array(records)
            };
            Ok(Output { value, text, pass })
        }
        Cmd::Render {
            space,
            cones,
            points,
            orth_rays,
            size,
        } => {
            let s = load_space(&space.space, cli)?;
            let opts = RenderOptions {
                size: *size,
                cones: *cones,
                points: points.iter().map(|p| parse_vector(p)).collect::<Result<_>>()?,
                orth_rays: *orth_rays,
            };
            let svg = render_ball_svg(&s.space, &opts)?;
            Ok(Output::info(json!({ "svg": svg }), svg))
        }
    }
}

fn decide(cli: &Cli, space: &SpaceArg, x: &str, y: &str, eps: f64, definitional: bool) -> Result<Output> {
    let s = load_space(&space.space, cli)?;
    let (xv, yv) = (parse_vector(x)?, parse_vector(y)?);
    let cfg = ortho(cli, eps)?;
    let d = if definitional {
        is_eps_orthogonal_definitional(&s.space, &xv, &yv, &cfg)?
    } else {
        is_eps_orthogonal(&s.space, &xv, &yv, &cfg)?
    };
    let text = format!(
        "{} (margin {:.6e}{})\n",
        if d.holds { "orthogonal" } else { "not orthogonal" },
        d.margin,
        if d.is_tie(cli.tol) { ", within the tie band" } else { "" }
    );
    Ok(Output {
        value: json!({"holds": d.holds, "margin": d.margin, "eps": eps, "tie": d.is_tie(cli.tol)}),
        text,
        pass: d.holds,
    })
}

#[allow(dead_code)]
fn space_kind(s: &Space) -> &'static str {
    match s {
        Space::Polyhedral(_) => "polyhedral",
        Space::Lp(_) => "lp",
    }
}
