//! Scenario runner behind the `rswave` binary.
//!
//! Each subcommand builds its inputs from a [`ScenarioConfig`], runs the
//! relevant module, writes its artifacts into the output directory, and
//! collects invariant checks into a plain-text [`Report`]. Everything is
//! seeded from the config, so the same config always gives the same bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::action::{
    self, ActionConfig, ActionKind, CurrentField, Direction, FieldStrengthVar, GaugeField, GradientInputs,
    Lattice4,
};
use crate::config::{ScenarioConfig, SourceConfig};
use crate::covariant::{self, AntisymTensor, PlaneWave, SL2C};
use crate::error::{Error, Result};
use crate::field::{self, Grid3, Helicity, RSField};
use crate::propagator::{self, Method, PropagationConfig};
use crate::rng;
use crate::spin;
use crate::vortex::{self, PlaneWaveSpec, TraceOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Propagate,
    Spectrum,
    Vortex,
    CheckCovariance,
    CheckAction,
}

impl Subcommand {
    pub const ALL: [Subcommand; 5] = [
        Subcommand::Propagate,
        Subcommand::Spectrum,
        Subcommand::Vortex,
        Subcommand::CheckCovariance,
        Subcommand::CheckAction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Propagate => "propagate",
            Subcommand::Spectrum => "spectrum",
            Subcommand::Vortex => "vortex",
            Subcommand::CheckCovariance => "check-covariance",
            Subcommand::CheckAction => "check-action",
        }
    }
}

impl FromStr for Subcommand {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown subcommand `{s}`"))
    }
}

/// One measured quantity compared against its tolerance (`measured <= tolerance`).
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReportLine {
    Info(String, String),
    Check(Check),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub subcommand: Subcommand,
    pub lines: Vec<ReportLine>,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

impl Report {
    fn new(subcommand: Subcommand) -> Self {
        Report {
            subcommand,
            lines: Vec::new(),
        }
    }

    fn info(&mut self, name: &str, value: impl ToString) {
        self.lines.push(ReportLine::Info(name.to_string(), value.to_string()));
    }

    fn check(&mut self, cfg: &ScenarioConfig, name: &str, measured: f64, default_tol: f64) {
        self.lines.push(ReportLine::Check(Check {
            name: name.to_string(),
            measured,
            tolerance: cfg.checks.tolerance(name, default_tol),
        }));
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.lines.iter().filter_map(|l| match l {
            ReportLine::Check(c) => Some(c),
            ReportLine::Info(..) => None,
        })
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks().filter(|c| !c.passed()).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "rswave {}", self.subcommand.name()).unwrap();
        for line in &self.lines {
            match line {
                ReportLine::Info(k, v) => writeln!(s, "INFO {k} = {v}").unwrap(),
                ReportLine::Check(c) => writeln!(
                    s,
                    "{} {} measured={} tolerance={}",
                    if c.passed() { "PASS" } else { "FAIL" },
                    c.name,
                    num(c.measured),
                    num(c.tolerance)
                )
                .unwrap(),
            }
        }
        let failed: Vec<&str> = self.failures().iter().map(|c| c.name.as_str()).collect();
        if failed.is_empty() {
            writeln!(s, "RESULT PASS").unwrap();
        } else {
            writeln!(s, "RESULT FAIL {}", failed.join(",")).unwrap();
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    /// Files written, report last.
    pub artifacts: Vec<PathBuf>,
}

/// Loads `config_path` and runs `sub`, writing into `out_dir`.
pub fn run_scenario(sub: Subcommand, config_path: &Path, out_dir: &Path) -> Result<Outcome> {
    let cfg = ScenarioConfig::load(config_path)?;
    run_with_config(sub, &cfg, out_dir)
}

pub fn run_with_config(sub: Subcommand, cfg: &ScenarioConfig, out_dir: &Path) -> Result<Outcome> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut report = Report::new(sub);
    let mut artifacts = Vec::new();
    match sub {
        Subcommand::Propagate => propagate(cfg, out_dir, &mut report, &mut artifacts)?,
        Subcommand::Spectrum => spectrum(cfg, out_dir, &mut report, &mut artifacts)?,
        Subcommand::Vortex => vortex_lines(cfg, out_dir, &mut report, &mut artifacts)?,
        Subcommand::CheckCovariance => check_covariance(cfg, &mut report)?,
        Subcommand::CheckAction => check_action(cfg, &mut report)?,
    }
    let path = out_dir.join(&cfg.output.report);
    fs::write(&path, report.render()).map_err(|e| Error::io(&path, e))?;
    artifacts.push(path);
    Ok(Outcome { report, artifacts })
}

fn require_field_inputs(cfg: &ScenarioConfig, sub: Subcommand) -> Result<()> {
    cfg.require(sub.name(), &["source"])?;
    if !matches!(cfg.source, Some(SourceConfig::File { .. })) {
        cfg.require(sub.name(), &["grid"])?;
    }
    Ok(())
}

/// Analytic `(E, B)` of the configured source, when it has one.
fn analytic_em(cfg: &ScenarioConfig) -> Option<Box<dyn Fn(&[f64; 3]) -> ([f64; 3], [f64; 3]) + Sync + '_>> {
    let units = cfg.units;
    match cfg.source.as_ref()? {
        SourceConfig::PlaneWaves { waves, t, .. } => {
            let t = *t;
            Some(Box::new(move |p| {
                vortex::superposition_em(waves, p, t, &units).expect("wavevectors validated")
            }))
        }
        SourceConfig::LgBeam {
            params,
            counter_amplitude,
            t,
            ..
        } => {
            let counter = counter_wave(params, *counter_amplitude);
            let (params, t) = (*params, *t);
            Some(Box::new(move |p| {
                let (mut e, mut b) = vortex::lg_beam_em(&params, p, t, &units);
                if let Some(w) = &counter {
                    let (e2, b2) = w.em(p, t, &units).expect("nonzero wavevector");
                    for c in 0..3 {
                        e[c] += e2[c];
                        b[c] += b2[c];
                    }
                }
                (e, b)
            }))
        }
        _ => None,
    }
}

/// Circular plane wave travelling along `-z` with the beam's wavenumber.
fn counter_wave(params: &vortex::LGBeamParams, amplitude: f64) -> Option<PlaneWaveSpec> {
    (amplitude != 0.0).then(|| PlaneWaveSpec {
        k: [0.0, 0.0, -params.wavenumber()],
        amplitude,
        polarization: params.polarization,
        phase: 0.0,
    })
}

/// Builds the initial field described by `[grid]` and `[source]`.
pub fn build_field(cfg: &ScenarioConfig) -> Result<RSField> {
    let src = cfg
        .source
        .as_ref()
        .ok_or_else(|| Error::InvalidPropagation("no [source] section".into()))?;
    if let SourceConfig::File { path } = src {
        let f = crate::io::read_field(path)?;
        if let Some(g) = &cfg.grid {
            g.ensure_same(f.grid())?;
        }
        return Ok(f);
    }
    let grid: &Grid3 = cfg
        .grid
        .as_ref()
        .ok_or_else(|| Error::InvalidGrid("no [grid] section".into()))?;
    match src {
        SourceConfig::RandomTransverse {
            seed,
            max_mode,
            helicity,
        } => Ok(field::random_transverse(grid, *helicity, *max_mode, *seed)),
        SourceConfig::PlaneWaves { waves, branch, t } => {
            vortex::plane_wave_superposition(waves, grid, *t, &cfg.units, *branch)
        }
        SourceConfig::LgBeam { params, branch, .. } => {
            params.validate()?;
            let em_fn = analytic_em(cfg).expect("analytic source");
            let em = field::RealEMField::from_fn(grid.clone(), |p| em_fn(&p));
            Ok(field::rs_from_em(&em, *branch, &cfg.units))
        }
        SourceConfig::File { .. } => unreachable!(),
    }
}

fn write_artifact(
    out_dir: &Path,
    name: &str,
    artifacts: &mut Vec<PathBuf>,
    body: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
) -> Result<()> {
    let path = out_dir.join(name);
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(&path, e))?;
    artifacts.push(path);
    Ok(())
}

fn relative(a: f64, reference: f64) -> f64 {
    if reference > 0.0 {
        (a - reference).abs() / reference
    } else {
        a.abs()
    }
}

fn propagate(cfg: &ScenarioConfig, out: &Path, report: &mut Report, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    let sub = Subcommand::Propagate;
    require_field_inputs(cfg, sub)?;
    cfg.require(sub.name(), &["propagation"])?;
    let p = cfg.propagation.as_ref().expect("checked");
    let f0 = build_field(cfg)?;
    let sign = p.sign.unwrap_or(f0.helicity());
    let dt = p.dt.unwrap_or_else(|| propagator::default_dt(f0.grid(), &cfg.units));
    let pc = PropagationConfig::new(p.t_final, dt, p.method, sign)?;
    let f1 = propagator::evolve(&f0, &pc, &cfg.units)?;

    let path = out.join(&cfg.output.field);
    crate::io::write_field(&path, &f1)?;
    artifacts.push(path);

    let method = match p.method {
        Method::Spectral => "spectral",
        Method::FiniteDifference => "fd",
    };
    report.info("method", method);
    report.info("points", f0.grid().len());
    report.info("t_final", num(p.t_final));
    report.info("dt", num(dt));
    report.info("sign", sign.as_i32());

    let (e0, e1) = (field::energy_norm(&f0), field::energy_norm(&f1));
    // each stepper is checked against the divergence it conserves
    let divergence = |f: &RSField| match p.method {
        Method::Spectral => field::divergence_residual(f).l2,
        Method::FiniteDifference => propagator::fd_divergence_residual(f).l2,
    };
    let (d0, d1) = (divergence(&f0), divergence(&f1));
    report.info("energy_initial", num(e0));
    report.info("energy_final", num(e1));
    report.info("divergence_initial", num(d0));
    report.info("divergence_final", num(d1));
    let (tol_e, tol_d) = match p.method {
        Method::Spectral => (1e-11, 1e-10),
        Method::FiniteDifference => (1e-2, 1e-10),
    };
    report.check(cfg, "energy_drift", relative(e1, e0), tol_e);
    report.check(cfg, "divergence_drift", (d1 - d0).abs(), tol_d);
    Ok(())
}

fn spectrum(cfg: &ScenarioConfig, out: &Path, report: &mut Report, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    require_field_inputs(cfg, Subcommand::Spectrum)?;
    let f = build_field(cfg)?;
    let spec = spin::helicity_decompose(&f);
    write_artifact(out, &cfg.output.spectrum, artifacts, |w| {
        writeln!(w, "kx,ky,kz,abs_a_plus,abs_a_minus,abs_a_zero")?;
        for m in &spec.modes {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                num(m.k[0]),
                num(m.k[1]),
                num(m.k[2]),
                num(m.plus.norm()),
                num(m.minus.norm()),
                num(m.zero.norm())
            )?;
        }
        Ok(())
    })?;
    let e = field::energy_norm(&f);
    report.info("modes", spec.modes.len());
    report.info("energy", num(e));
    report.info("energy_plus", num(spec.plus_energy()));
    report.info("energy_minus", num(spec.minus_energy()));
    report.info("energy_longitudinal", num(spec.longitudinal_energy()));
    report.check(cfg, "parseval", relative(spec.total_energy(), e), 1e-12);
    if let Some(SourceConfig::RandomTransverse { .. }) = cfg.source {
        report.check(cfg, "longitudinal_fraction", spec.longitudinal_energy() / e.max(f64::MIN_POSITIVE), 1e-12);
    }
    Ok(())
}

fn vortex_lines(cfg: &ScenarioConfig, out: &Path, report: &mut Report, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    require_field_inputs(cfg, Subcommand::Vortex)?;
    let f = build_field(cfg)?;
    let vs = vortex::vortex_scalar(&f);
    let mean = vortex::mean_intensity(&f);
    report.info("points", f.grid().len());
    report.info("mean_intensity", num(mean));
    report.info("max_abs_w", num(vs.max_abs()));
    if vs.degenerate {
        report.info("degenerate", "true");
        report.info("lines", 0);
        report.check(cfg, "null_field", vs.max_abs() / mean.max(f64::MIN_POSITIVE), 1e-12);
        return write_artifact(out, &cfg.output.lines, artifacts, |w| {
            vortex::VortexLineSet::default().write_csv(w)
        });
    }

    let units = cfg.units;
    let branch = f.helicity();
    let em = analytic_em(cfg);
    let eval = em.as_ref().map(|em| {
        move |p: &[f64; 3]| -> Complex64 {
            let (e, b) = em(p);
            vortex::vortex_scalar_at(&e, &b, branch, &units)
        }
    });
    let opts = TraceOptions {
        evaluator: eval.as_ref().map(|e| e as vortex::WEvaluator<'_>),
        refine: eval.is_some(),
    };
    let set = vortex::trace_vortex_lines(&vs, &opts)?;
    write_artifact(out, &cfg.output.lines, artifacts, |w| set.write_csv(w))?;

    report.info("degenerate", "false");
    report.info("lines", set.len());
    report.info("closed_lines", set.lines.iter().filter(|l| l.closed).count());
    report.info("vertices", set.vertex_count());
    report.info("residual_source", if eval.is_some() { "analytic" } else { "interpolated" });
    report.check(cfg, "vertex_residual", set.max_residual() / mean.max(f64::MIN_POSITIVE), 1e-3);
    Ok(())
}

fn check_covariance(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let sub = Subcommand::CheckCovariance;
    cfg.require(sub.name(), &["checks"])?;
    let trials = cfg.checks.trials;
    let units = cfg.units;
    let mut r = rng::from_seed(cfg.checks.seed);
    let (mut metric, mut cover, mut compose, mut spinor) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut duality, mut recon, mut wave, mut saturation) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let a = SL2C::random(&mut r, 0.5);
        let b = SL2C::random(&mut r, 0.5);
        let la = covariant::lorentz_from_sl2c(&a);
        let lb = covariant::lorentz_from_sl2c(&b);
        metric = metric.max(la.metric_deviation());
        let ln = covariant::lorentz_from_sl2c(&a.neg());
        cover = cover.max((ln.0 - la.0).abs().max());
        let lab = covariant::lorentz_from_sl2c(&a.mul(&b));
        compose = compose.max((lab.0 - la.mul(&lb).0).abs().max() / la.0.abs().max().max(1.0));

        let e = rng::vec3(&mut r);
        let bf = rng::vec3(&mut r);
        spinor = spinor.max(covariant::covariance_check(&a, &e, &bf, &units)?);

        let t = AntisymTensor::random(&mut r);
        let parts = covariant::selfdual_split(&t);
        duality = duality
            .max(covariant::duality_deviation(&parts.plus, 1.0))
            .max(covariant::duality_deviation(&parts.minus, -1.0));
        recon = recon.max(parts.reconstruct().max_abs_diff(&t) / t.max_abs().max(1.0));

        let k = rng::vec3(&mut r).map(|v| 4.0 * v);
        if k != [0.0; 3] {
            let x = rng::vec3(&mut r);
            let time = rng::symmetric(&mut r);
            for sign in [Helicity::Plus, Helicity::Minus] {
                let pw = PlaneWave::helical(k, sign, &units)?;
                let jet = pw.jet(&x, time, &units);
                let res = covariant::spinor_wave_residual(&jet, sign);
                let scale = 1.0 + k.iter().map(|v| v * v).sum::<f64>().sqrt();
                wave = wave.max(res.max_abs() / scale);
                saturation = saturation.max(saturation_mismatch(&jet, &res, sign) / scale);
            }
        }
    }
    report.info("trials", trials);
    report.info("seed", cfg.checks.seed);
    report.check(cfg, "lorentz_metric", metric, 1e-10);
    report.check(cfg, "double_cover", cover, 0.0);
    report.check(cfg, "composition", compose, 1e-10);
    report.check(cfg, "spinor_covariance", spinor, 1e-10);
    report.check(cfg, "self_duality", duality, 1e-12);
    report.check(cfg, "reconstruction", recon, 1e-15);
    report.check(cfg, "wave_residual", wave, 1e-10);
    report.check(cfg, "saturation", saturation, 1e-10);
    Ok(())
}

/// Saturated components against `∇·F` and `∂₀F + i·sign ∇×F` from the jet.
fn saturation_mismatch(jet: &covariant::SpinorJet, res: &covariant::WaveResidual, sign: Helicity) -> f64 {
    let g = &jet.grad;
    let div = g[0][0] + g[1][1] + g[2][2];
    let curl = [g[1][2] - g[2][1], g[2][0] - g[0][2], g[0][1] - g[1][0]];
    let i_s = Complex64::new(0.0, sign.sign());
    let mut worst = (res.divergence() - div).norm();
    for c in 0..3 {
        worst = worst.max((res.evolution()[c] - (jet.d0[c] + i_s * curl[c])).norm());
    }
    worst
}

/// `L2(residual_A)` of a sourced wave on an `n⁴` lattice of unit extent.
pub fn action_refinement_residual(n: usize, cfg: &ActionConfig) -> Result<f64> {
    use std::f64::consts::PI;
    let l = Lattice4::hypercube(n, 1.0)?;
    let k = 2.0 * PI;
    let phase = move |x: [f64; 4]| k * (x[0] - x[2] - x[3]);
    let a = GaugeField::from_fn(l.clone(), move |x| [0.0, phase(x).cos(), 0.0, 0.0]);
    // continuum source for ω = |k_y| = |k_z| = 2π
    let amp = 0.5 * cfg.coupling().powi(2) * (k * k - 2.0 * k * k);
    let data = (0..l.len()).map(|i| [0.0, amp * phase(l.position(i)).cos(), 0.0, 0.0]).collect();
    let j = CurrentField::new(l.clone(), data)?;
    let fs = action::stationary_field_strength(&a, cfg);
    Ok(action::euler_lagrange_residuals(&a, &fs, &j, cfg)?.l2_a(&l))
}

fn check_action(cfg: &ScenarioConfig, report: &mut Report) -> Result<()> {
    let sub = Subcommand::CheckAction;
    cfg.require(sub.name(), &["action"])?;
    let s = cfg.action.as_ref().expect("checked");
    let acfg = ActionConfig {
        a_norm: s.a_norm,
        include_l0: s.include_l0,
    };
    let l = Lattice4::new(s.n, s.spacing)?;
    let mut r = rng::from_seed(s.seed);
    let a = GaugeField::random(l.clone(), &mut r);
    let j = CurrentField::random_conserved(l.clone(), &mut r);
    let fr = FieldStrengthVar::random(l.clone(), &mut r);
    let at = GaugeField::random(l.clone(), &mut r);
    let b = GaugeField::random(l.clone(), &mut r);
    let dv = GaugeField::random(l.clone(), &mut r);
    let dtn = FieldStrengthVar::random(l.clone(), &mut r);
    let chi: Vec<f64> = (0..l.len()).map(|_| rng::symmetric(&mut r)).collect();

    report.info("lattice", format!("{:?}", s.n));
    report.info("spacing", num(s.spacing));
    report.info("coupling", num(acfg.coupling()));
    report.check(cfg, "current_continuity", j.max_divergence(), 1e-10);

    let fs = action::stationary_field_strength(&a, &acfg);
    let res = action::euler_lagrange_residuals(&a, &fs, &j, &acfg)?;
    report.check(cfg, "stationarity_f", res.max_f(), 1e-12);
    if acfg.include_l0 {
        // F⋆ = -λ X: compare against the antisymmetrised difference directly
        let x = action::half_curl(&a);
        let mut worst = 0.0f64;
        for (fv, xv) in fs.data().iter().zip(x.data()) {
            for p in 0..6 {
                worst = worst.max((fv[p] + acfg.coupling() * xv[p]).abs());
            }
        }
        report.check(cfg, "stationary_shape", worst, 1e-12);
    }

    let i_red = action::reduced_action(&a, &j, &acfg)?;
    let i_first = action::assemble_first_order_action(&a, &fs, &j, &acfg)?;
    report.info("reduced_action", num(i_red));
    if acfg.include_l0 {
        report.check(cfg, "first_order_vs_reduced", (i_first - i_red).abs() / i_red.abs().max(1.0), 1e-11);
    }
    let a2 = action::gauge_transform(&a, &chi)?;
    let i_gauge = action::reduced_action(&a2, &j, &acfg)?;
    report.check(cfg, "gauge_invariance", (i_gauge - i_red).abs(), 1e-10);

    if acfg.include_l0 {
        let coarse = action_refinement_residual(8, &acfg)?;
        let fine = action_refinement_residual(16, &acfg)?;
        report.info("refinement_residual_8", num(coarse));
        report.info("refinement_residual_16", num(fine));
        report.check(cfg, "refinement_order", ((coarse / fine) - 4.0).abs() / 4.0, 0.25);
    }

    let inputs = GradientInputs {
        a: &a,
        f: &fr,
        j: &j,
        a_tilde: &at,
        b: &b,
    };
    for (name, kind, dir) in [
        ("gradient_first_order_a", ActionKind::FirstOrderA, Direction::Vector(&dv)),
        ("gradient_first_order_f", ActionKind::FirstOrderF, Direction::Tensor(&dtn)),
        ("gradient_reduced", ActionKind::Reduced, Direction::Vector(&dv)),
    ] {
        let c = action::functional_gradient_check(kind, &inputs, dir, &acfg, 1e-3)?;
        report.check(cfg, name, c.relative_error, 1e-6);
    }
    let c = action::functional_gradient_check(ActionKind::DoubledB, &inputs, Direction::Vector(&dv), &acfg, 1e-3)?;
    report.check(cfg, "b_dropout", c.numeric.abs().max(c.analytic.abs()), 1e-11);

    let sl = Lattice4::hypercube(s.signature_n, 1.0)?;
    let n = s.signature_n as i64;
    let mut wrong = 0usize;
    let mut ratio_err = 0.0f64;
    let mut done = 0usize;
    while done < s.momentum_trials {
        let k: [i64; 4] = std::array::from_fn(|_| (rng::symmetric(&mut r) * n as f64).floor() as i64);
        if k.iter().all(|v| v.rem_euclid(n) == 0) {
            continue;
        }
        let sig = action::doubled_sector_signature(&sl, k)?;
        if (sig.sign_plus, sig.sign_minus) != (1, -1) {
            wrong += 1;
        }
        ratio_err = ratio_err
            .max((sig.ratio_plus - 2.0).abs())
            .max((sig.ratio_minus + 2.0).abs());
        done += 1;
    }
    report.info("momenta", done);
    report.check(cfg, "signature_mismatches", wrong as f64, 0.0);
    report.check(cfg, "signature_ratio", ratio_err, 1e-10);
    Ok(())
}
