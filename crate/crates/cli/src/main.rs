use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jetsplit::composition::run_trajectory;
use jetsplit::grammar::CATALOG;
use jetsplit::{GadgetKind, JetPoint, ProlongedRealization, RunRecord};
use jetsplit_lab::bracket_check::{default_eps, up2_bracket_check, BracketCheck};
use jetsplit_lab::config::{ExperimentConfig, Overrides, Resolved, Scenario};
use jetsplit_lab::dho::{run_dho, DhoMethod, DhoSplitting};
use jetsplit_lab::double_well::{
    attractor_runs, double_well_convergence, run_double_well, DwSplitting, ATTRACTOR_SEEDS,
};
use jetsplit_lab::output::{join, slug, write_convergence_csv, write_table, write_trajectory_csv};
use jetsplit_lab::svg::{convergence_plot, phase_plot, Plot, Projection, Series, Style};
use jetsplit_lab::universal::{describe, Universal};
use jetsplit_lab::vdp::{run_vdp, vdp_convergence, VdpMethod};
use jetsplit_lab::{ConvergenceTable, LabError, SlopeExpectation, Sweep};

const PASS: u8 = 0;
const ACCEPTANCE_FAILURE: u8 = 1;
const CONFIG_ERROR: u8 = 2;
const BLOW_UP: u8 = 3;

#[derive(Parser)]
#[command(name = "jetsplit", version, about = "Contact splitting integrators on J¹(ℝⁿ)", after_help = after_help())]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML experiment file; flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Time span.
    #[arg(long = "T", global = true)]
    span: Option<f64>,
    /// Preset name or scheme specification.
    #[arg(long, global = true)]
    scheme: Option<String>,
    #[arg(long, global = true)]
    sigma: Option<f64>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    omega: Option<f64>,
    #[arg(long, global = true)]
    amp: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    svg: bool,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Damped harmonic oscillator trajectory with exact-decay diagnostics.
    Dho,
    /// Forced Van der Pol runs for each method, with boundedness checks.
    Vdp,
    /// Double-well runs and attractor portraits from four seeds.
    DoubleWell,
    /// Convergence study against a reference solution.
    Convergence {
        #[arg(long, value_enum)]
        scenario: Option<ScenarioArg>,
        /// Polynomial Hamiltonian for the custom scenario.
        #[arg(long)]
        hamiltonian: Option<String>,
        /// Slope every study must reach; defaults to the scheme's known order.
        #[arg(long)]
        expect_slope: Option<f64>,
        /// Half-width of the accepted slope band.
        #[arg(long)]
        slope_tol: Option<f64>,
    },
    /// Commutator gadget against the exact bracket flow of up² = [−u²/2, p²].
    BracketCheck {
        #[arg(long, value_enum)]
        gadget: Option<GadgetArg>,
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    /// Depth-one representation of a polynomial Hamiltonian.
    Decompose { hamiltonian: String },
    /// Scheme built from the depth-one representation, run from --z0.
    Universal {
        hamiltonian: String,
        #[arg(long, value_enum, default_value = "symmetric")]
        gadget: GadgetArg,
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Outer splitting order (1 or 2).
        #[arg(long, default_value_t = 2)]
        outer: u32,
        /// Lift every prolonged generator with RK4 instead of using closed forms.
        #[arg(long)]
        lifted: bool,
        /// Initial state `x1,..,xn,u,p1,..,pn`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        z0: Option<Vec<f64>>,
        /// Also run a convergence study over the configured step sizes.
        #[arg(long)]
        convergence: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Dho,
    Vdp,
    DoubleWell,
    Custom,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Dho => Scenario::Dho,
            ScenarioArg::Vdp => Scenario::Vdp,
            ScenarioArg::DoubleWell => Scenario::DoubleWell,
            ScenarioArg::Custom => Scenario::Custom,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetArg {
    Basic,
    Symmetric,
    Yoshida,
}

impl GadgetArg {
    fn kind(self, m: usize) -> GadgetKind {
        match self {
            GadgetArg::Basic => GadgetKind::Basic,
            GadgetArg::Symmetric => GadgetKind::Symmetric { m },
            GadgetArg::Yoshida => GadgetKind::Yoshida { m },
        }
    }
}

fn after_help() -> String {
    let mut s = String::from(
        "Scheme grammar:\n  node := NAME ['[' params ']'] ['(' node, .. ')'] [':' params]\n",
    );
    s.push_str("  combinators: lie, strang, yoshida4, gadget, gadget_sym[m=..; scale=..], gadget_yoshida[m=..; scale=..]\n");
    s.push_str("  leaves:\n");
    for (name, params) in CATALOG {
        if params.is_empty() {
            s.push_str(&format!("    {name}\n"));
        } else {
            s.push_str(&format!("    {name}:{params}\n"));
        }
    }
    s.push_str(&format!("Presets:\n  dho: {}\n", DhoMethod::PRESETS));
    s.push_str(&format!("  vdp: {}\n", VdpMethod::PRESETS));
    s.push_str(&format!("  double-well: {}\n", DwSplitting::PRESETS));
    s.push_str("Exit codes: 0 pass, 1 acceptance failure, 2 configuration error, 3 blow-up before any output\n");
    s
}

/// Outcome of a subcommand that finished without an error.
type Outcome = std::result::Result<u8, LabError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code)
}

fn exit_code(e: &LabError) -> u8 {
    use jetsplit::Error as E;
    match e {
        LabError::Core(E::BlowUp { .. } | E::NonFinite { .. } | E::Orientation { .. })
        | LabError::Core(E::ProlongationSingular { .. } | E::StepUnderflow { .. }) => BLOW_UP,
        LabError::DegenerateFit(_) => ACCEPTANCE_FAILURE,
        _ => CONFIG_ERROR,
    }
}

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    let overrides = Overrides {
        h: c.h,
        span: c.span,
        scheme: c.scheme.clone(),
        sigma: c.sigma,
        gamma: c.gamma,
        eps: c.eps,
        omega: c.omega,
        amp: c.amp,
        out: c.out.clone(),
        seed: c.seed,
        svg: c.svg,
    };
    let load = |scenario: Option<Scenario>| -> Result<ExperimentConfig, LabError> {
        let mut cfg = match (&c.config, scenario) {
            (Some(path), want) => {
                let cfg = ExperimentConfig::load(path)?;
                if let Some(want) = want {
                    if cfg.scenario != want {
                        return Err(LabError::Config(format!(
                            "{} describes the {:?} scenario, not {want:?}",
                            path.display(),
                            cfg.scenario
                        )));
                    }
                }
                cfg
            }
            (None, want) => ExperimentConfig::new(want.unwrap_or(Scenario::Dho)),
        };
        cfg.apply(&overrides);
        Ok(cfg)
    };
    match cli.command {
        Command::Dho => dho(&load(Some(Scenario::Dho))?.resolve()?),
        Command::Vdp => vdp(&load(Some(Scenario::Vdp))?.resolve()?),
        Command::DoubleWell => double_well(&load(Some(Scenario::DoubleWell))?.resolve()?),
        Command::Convergence {
            scenario,
            hamiltonian,
            expect_slope,
            slope_tol,
        } => {
            let mut cfg = load(scenario.map(Scenario::from))?;
            if hamiltonian.is_some() {
                cfg.hamiltonian = hamiltonian;
            }
            convergence(&cfg.resolve()?, expect_slope, slope_tol)
        }
        Command::BracketCheck { gadget, m } => {
            let cfg = load(None)?.resolve()?;
            let kinds = match gadget {
                Some(g) => vec![g.kind(m)],
                None => vec![
                    GadgetKind::Basic,
                    GadgetKind::Symmetric { m },
                    GadgetKind::Yoshida { m },
                ],
            };
            bracket(&cfg, &kinds)
        }
        Command::Decompose { hamiltonian } => {
            let u = Universal::new(
                &hamiltonian,
                2,
                GadgetKind::Basic,
                ProlongedRealization::ExactIfAvailable,
            )?;
            println!("H = {}", u.hamiltonian);
            print!("{}", describe(&u.representation));
            println!("reconstruction: exact");
            Ok(PASS)
        }
        Command::Universal {
            hamiltonian,
            gadget,
            m,
            outer,
            lifted,
            z0,
            convergence,
        } => {
            let realization = if lifted {
                ProlongedRealization::Lifted
            } else {
                ProlongedRealization::ExactIfAvailable
            };
            let u = Universal::new(&hamiltonian, outer, gadget.kind(m), realization)?;
            let mut cfg = load(None)?;
            cfg.scenario = Scenario::Custom;
            cfg.hamiltonian = Some(hamiltonian);
            let n = u.hamiltonian.dim();
            let start = match z0 {
                Some(v) => Some(JetPoint::from_slice(n, &v)?),
                None => None,
            };
            if start.is_none() && cfg.z0.is_none() {
                return Err(LabError::Config(format!(
                    "universal needs --z0 with {} values (x1,..,xn,u,p1,..,pn)",
                    2 * n + 1
                )));
            }
            if let Some(z) = &start {
                cfg.z0 = Some(jetsplit_lab::config::InitialState {
                    x: jetsplit_lab::config::Coords::Many(z.x.clone()),
                    p: jetsplit_lab::config::Coords::Many(z.p.clone()),
                    u: z.u,
                });
            }
            universal(&cfg.resolve()?, &u, &kind_name(gadget.kind(m)), convergence)
        }
    }
}

/// Writes a record, or reports a blow-up on the very first step.
fn emit_record(
    path: &Path,
    rec: &RunRecord,
    reference: Option<&jetsplit_lab::output::ReferenceColumns>,
) -> Outcome {
    if let Some(f) = &rec.failure {
        if rec.len() == 1 {
            eprintln!(
                "{}: failed on the first step at t = {}: {}",
                rec.label, f.time, f.error
            );
            return Ok(BLOW_UP);
        }
        eprintln!("{}: stopped at t = {}: {}", rec.label, f.time, f.error);
    }
    write_trajectory_csv(path, rec, reference)?;
    println!("wrote {}", path.display());
    Ok(if rec.failure.is_some() {
        ACCEPTANCE_FAILURE
    } else {
        PASS
    })
}

fn save(plot: &Plot, path: &Path) -> Result<(), LabError> {
    plot.write(path)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn worst(code: u8, other: u8) -> u8 {
    // A blow-up outranks an acceptance failure.
    code.max(other)
}

fn dho(cfg: &Resolved) -> Outcome {
    let scheme = cfg.scheme.clone().unwrap_or_else(|| "strang1".into());
    let run = run_dho(cfg, &scheme, false)?;
    let name = format!("dho_{}", slug(&scheme));
    let mut code = emit_record(
        &join(&cfg.out, &name, "csv"),
        &run.record,
        Some(&run.reference),
    )?;
    if code == BLOW_UP {
        return Ok(code);
    }
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    println!("scheme {}", run.record.label);
    println!("  steps            {}", run.record.len() - 1);
    println!(
        "  max |H/H_exact-1| {:.3e}",
        max_abs(&run.reference.h_rel_err)
    );
    println!(
        "  max |σ_cum + γt|  {:.3e}",
        max_abs(&run.reference.lambda_err)
    );
    println!(
        "  contact residual {:.3e} ({} checks, {})",
        run.spot.worst_residual,
        run.spot.checked,
        if run.spot.passed { "ok" } else { "FAIL" }
    );
    if !run.spot.passed {
        code = worst(code, ACCEPTANCE_FAILURE);
    }
    if cfg.svg {
        let rec = &run.record;
        let h0 = rec.h_values[0];
        let mut energy = Plot::new(&format!("DHO energy, {scheme}"), "t", "H");
        energy.log_y = true;
        energy.series.push(Series {
            label: "numerical".into(),
            points: rec
                .times
                .iter()
                .zip(&rec.h_values)
                .map(|(t, h)| (*t, *h))
                .collect(),
            style: Style::Line,
        });
        energy.series.push(Series {
            label: "H0 exp(-γt)".into(),
            points: rec
                .times
                .iter()
                .map(|t| (*t, h0 * (-cfg.gamma * (t - cfg.t0)).exp()))
                .collect(),
            style: Style::Line,
        });
        save(&energy, &join(&cfg.out, &format!("{name}_energy"), "svg"))?;
        let phase = phase_plot(
            &format!("DHO, {scheme}"),
            &[(&scheme, rec)],
            Projection::XP,
            0.0,
        );
        save(&phase, &join(&cfg.out, &format!("{name}_xp"), "svg"))?;
    }
    Ok(code)
}

fn scheme_list(cfg: &Resolved, all: &[&'static str]) -> Vec<String> {
    match &cfg.scheme {
        Some(s) => vec![s.clone()],
        None => all.iter().map(|s| s.to_string()).collect(),
    }
}

fn vdp(cfg: &Resolved) -> Outcome {
    let names = scheme_list(cfg, &VdpMethod::ALL.map(VdpMethod::preset_name));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let runs = run_vdp(cfg, &refs)?;
    let mut code = PASS;
    for r in &runs {
        let name = format!("vdp_{}", slug(&r.name));
        code = worst(
            code,
            emit_record(&join(&cfg.out, &name, "csv"), &r.record, None)?,
        );
        println!(
            "{}: reached t = {}, sup|x| = {:.3e}, {} coorientation reversals, contact residual {:.2e}, bounded: {}",
            r.name,
            r.record.times.last().copied().unwrap_or(cfg.t0),
            r.sup_abs_x,
            r.reversals.len(),
            r.spot.worst_residual,
            if r.bounded() { "yes" } else { "NO" }
        );
        if !r.bounded() || !r.spot.passed {
            code = worst(code, ACCEPTANCE_FAILURE);
        }
        if cfg.svg {
            for proj in [Projection::XU, Projection::XP] {
                let (a, b) = proj.axes();
                let plot = phase_plot(
                    &format!("Van der Pol, {}", r.name),
                    &[(&r.name, &r.record)],
                    proj,
                    cfg.span / 3.0,
                );
                save(&plot, &join(&cfg.out, &format!("{name}_{a}{b}"), "svg"))?;
            }
        }
    }
    Ok(code)
}

fn double_well(cfg: &Resolved) -> Outcome {
    let names = scheme_list(cfg, &DwSplitting::ALL.map(DwSplitting::preset_name));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let runs = run_double_well(cfg, &refs)?;
    let mut code = PASS;
    for r in &runs {
        let name = format!("double_well_{}", slug(&r.name));
        code = worst(
            code,
            emit_record(&join(&cfg.out, &name, "csv"), &r.record, None)?,
        );
        println!(
            "{}: H {:.6} -> {:.6}, contact residual {:.2e}",
            r.name,
            r.record.h_values[0],
            r.record.h_values.last().copied().unwrap_or(f64::NAN),
            r.spot.worst_residual
        );
        if !r.spot.passed {
            code = worst(code, ACCEPTANCE_FAILURE);
        }
        let seeds = attractor_runs(cfg, &r.name)?;
        for (k, rec) in seeds.iter().enumerate() {
            let path = join(&cfg.out, &format!("{name}_seed{}", k + 1), "csv");
            code = worst(code, emit_record(&path, rec, None)?);
        }
        if cfg.svg {
            let labels: Vec<String> = ATTRACTOR_SEEDS
                .iter()
                .map(|(x, p, u)| format!("(x, p, u) = ({x}, {p}, {u})"))
                .collect();
            let pairs: Vec<(&str, &RunRecord)> =
                labels.iter().map(String::as_str).zip(&seeds).collect();
            for proj in [Projection::XU, Projection::XP] {
                let (a, b) = proj.axes();
                let plot = phase_plot(
                    &format!("double well, {}, σ = {}", r.name, cfg.sigma),
                    &pairs,
                    proj,
                    cfg.span / 3.0,
                );
                save(&plot, &join(&cfg.out, &format!("{name}_{a}{b}"), "svg"))?;
            }
        }
    }
    Ok(code)
}

fn band(target: f64, slope_tol: Option<f64>) -> SlopeExpectation {
    let tol = slope_tol.unwrap_or(if target >= 4.0 { 0.3 } else { 0.2 });
    SlopeExpectation::Within { target, tol }
}

fn report(
    cfg: &Resolved,
    tables: &[(ConvergenceTable, Option<SlopeExpectation>)],
    stem: &str,
) -> Outcome {
    let mut code = PASS;
    for (t, want) in tables {
        println!("{} ({:?} error)", t.label, t.norm);
        for r in &t.rows {
            println!(
                "  h = {:.4e}  steps = {:7}  error = {:.4e}",
                r.h,
                r.steps,
                r.error(t.norm)
            );
        }
        let verdict = match want {
            Some(w) if w.holds(t.fitted_slope) => format!("PASS (want {w})"),
            Some(w) => {
                code = ACCEPTANCE_FAILURE;
                format!("FAIL (want {w})")
            }
            None => "no expected order".into(),
        };
        println!(
            "  slope {:.3}, r² {:.4}: {verdict}",
            t.fitted_slope, t.fit_r2
        );
        let path = join(&cfg.out, &format!("{stem}_{}", slug(&t.label)), "csv");
        write_convergence_csv(&path, t)?;
        println!("  wrote {}", path.display());
    }
    if cfg.svg {
        let refs: Vec<&ConvergenceTable> = tables.iter().map(|(t, _)| t).collect();
        save(&convergence_plot(stem, &refs), &join(&cfg.out, stem, "svg"))?;
    }
    Ok(code)
}

fn convergence(cfg: &Resolved, expect: Option<f64>, slope_tol: Option<f64>) -> Outcome {
    let fixed = expect.map(|s| band(s, slope_tol));
    let mut tables = Vec::new();
    let stem = match cfg.scenario {
        Scenario::Dho => {
            let all: Vec<String> = DhoSplitting::ALL
                .iter()
                .flat_map(|&s| {
                    [
                        DhoMethod::LieTrotter(s),
                        DhoMethod::Strang(s),
                        DhoMethod::Yoshida4(s),
                    ]
                })
                .chain([DhoMethod::FullRk4, DhoMethod::LiftedRk4])
                .map(DhoMethod::preset_name)
                .collect();
            let names = cfg.scheme.clone().map_or(all, |s| vec![s]);
            for name in names {
                let run = run_dho(cfg, &name, true)?;
                let order = DhoMethod::from_preset(&name).map(|m| m.declared_order());
                let want = fixed.or(order.map(|o| band(f64::from(o), slope_tol)));
                let mut table = run.table.expect("requested a convergence table");
                table.label = name;
                tables.push((table, want));
            }
            "dho_convergence"
        }
        Scenario::DoubleWell => {
            let names = scheme_list(cfg, &DwSplitting::ALL.map(DwSplitting::preset_name));
            for name in names {
                let want = fixed
                    .or(DwSplitting::from_preset(&name)
                        .map(|s| band(s.expected_slope(), slope_tol)));
                tables.push((double_well_convergence(cfg, &name)?, want));
            }
            "double_well_convergence"
        }
        Scenario::Vdp => {
            let v = vdp_convergence(cfg)?;
            let at_least =
                |order: f64| Some(fixed.unwrap_or(SlopeExpectation::AtLeast(order - 0.3)));
            tables.push((v.lifted_rk4, at_least(4.0)));
            tables.push((v.strang, at_least(2.0)));
            tables.push((v.mutual, at_least(2.0)));
            "vdp_convergence"
        }
        Scenario::Custom => {
            let spec = cfg
                .scheme
                .as_deref()
                .ok_or_else(|| LabError::Config("the custom scenario needs --scheme".into()))?;
            let text = cfg.hamiltonian.as_deref().unwrap_or_default();
            let ham: jetsplit::FloatHamiltonian = text.parse()?;
            let parsed = jetsplit::parse_scheme(spec, ham.dim())?;
            let reference = |times: &[f64], _h: f64| -> Result<Vec<JetPoint>, LabError> {
                Ok(jetsplit::reference_contact_flow(
                    &ham,
                    &cfg.z0,
                    cfg.t0,
                    times,
                    jetsplit::Tolerance::default(),
                )?)
            };
            let table =
                jetsplit_lab::convergence_study(spec, &*parsed.step, reference, &sweep(cfg))?;
            let want = fixed.or(parsed.declared_order.map(|o| band(f64::from(o), slope_tol)));
            tables.push((table, want));
            "custom_convergence"
        }
    };
    report(cfg, &tables, stem)
}

fn sweep(cfg: &Resolved) -> Sweep {
    Sweep {
        z0: cfg.z0.clone(),
        t0: cfg.t0,
        span: cfg.span,
        hs: cfg.h_sweep.clone(),
        norm: cfg.norm,
    }
}

fn expected_rate(kind: GadgetKind) -> SlopeExpectation {
    match kind {
        GadgetKind::Basic => SlopeExpectation::Within {
            target: 3.0,
            tol: 0.3,
        },
        _ => SlopeExpectation::Within {
            target: 4.0,
            tol: 0.1,
        },
    }
}

fn kind_name(kind: GadgetKind) -> String {
    match kind {
        GadgetKind::Basic => "basic".into(),
        GadgetKind::Symmetric { m } => format!("symmetric_m{m}"),
        GadgetKind::Yoshida { m } => format!("yoshida_m{m}"),
    }
}

fn bracket(cfg: &Resolved, kinds: &[GadgetKind]) -> Outcome {
    let eps = default_eps();
    let mut code = PASS;
    let mut plot = Plot::new("gadget vs exact bracket flow", "ε", "max error");
    plot.log_x = true;
    plot.log_y = true;
    for &kind in kinds {
        let check: BracketCheck = up2_bracket_check(kind, &eps, cfg.seed)?;
        let want = expected_rate(kind);
        let ok = want.holds(check.rate) && check.dropped.is_empty();
        if !ok {
            code = ACCEPTANCE_FAILURE;
        }
        println!(
            "{}: rate {:.3} (want {want}), r² {:.4}{}: {}",
            kind_name(kind),
            check.rate,
            check.r2,
            if check.dropped.is_empty() {
                String::new()
            } else {
                format!(", dropped ε {:?}", check.dropped)
            },
            if ok { "PASS" } else { "FAIL" }
        );
        let path = join(&cfg.out, &format!("bracket_{}", kind_name(kind)), "csv");
        write_table(
            &path,
            &["eps".to_string(), "error".to_string()],
            check.rows.iter().map(|r| vec![r.eps, r.error]),
        )?;
        println!("  wrote {}", path.display());
        plot.series.push(Series {
            label: format!("{} (rate {:.2})", kind_name(kind), check.rate),
            points: check.rows.iter().map(|r| (r.eps, r.error)).collect(),
            style: Style::LineMarkers,
        });
    }
    if cfg.svg {
        save(&plot, &join(&cfg.out, "bracket_check", "svg"))?;
    }
    Ok(code)
}

fn universal(cfg: &Resolved, u: &Universal, gadget: &str, convergence: bool) -> Outcome {
    print!("{}", describe(&u.representation));
    println!("scheme {}", jetsplit::ContactStep::label(&u.scheme));
    let ham = u.float_hamiltonian();
    let rec = run_trajectory(&u.scheme, &cfg.z0, cfg.t0, cfg.h, cfg.span, &ham)?;
    let name = format!("universal_{}", slug(&u.hamiltonian.to_string()));
    let mut code = emit_record(&join(&cfg.out, &name, "csv"), &rec, None)?;
    if code == BLOW_UP {
        return Ok(code);
    }
    if cfg.svg {
        let plot = phase_plot(
            &format!("H = {}", u.hamiltonian),
            &[("trajectory", &rec)],
            Projection::XP,
            0.0,
        );
        save(&plot, &join(&cfg.out, &format!("{name}_xp"), "svg"))?;
    }
    if convergence {
        let mut table = u.convergence(&sweep(cfg))?;
        table.label = format!("{gadget} gadget");
        code = worst(
            code,
            report(cfg, &[(table, None)], &format!("{name}_convergence"))?,
        );
    }
    Ok(code)
}
