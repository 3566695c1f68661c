//! The four scenario pipelines and their check lines.

use std::fmt;
use std::path::{Path, PathBuf};

use evolution_solver::{
    compute_t1, evolve_etd, norm_series, picard_mild_solve, picard_navier_stokes, ExistenceConstants, FlowState,
    PicardConfig, PicardSolution, T1Mode, TimeGrid,
};
use forcing_factory::{
    control_gevrey_constant, control_gevrey_ratio, make_gevrey_scalar, make_gevrey_vector, unit_time_grid, ForceSpec,
};
use gevrey_diagnostics::{
    besov_norm, besov_time_grid, gevrey_report, improved_sobolev_ratio, liouville_indicator, AnnulusRow, GevreyReport,
};
use serde::Serialize;
use spectral_core::{Error, SpectralScalarField, SpectralVectorField};
use stationary_solver::{solve_navier_stokes, solve_stationary, Forcing, StationaryResult};

use crate::artifacts::ArtifactWriter;
use crate::config::{echo, effective_seed, Scenario, ScenarioConfig};

pub const THETA_RATIO_TOL: f64 = 1e-8;
pub const DRIFT_TOL: f64 = 1e-6;
pub const MIN_R_SQUARED: f64 = 0.99;
pub const CONTROL_GEVREY_SLACK: f64 = 1e-6;
pub const DECAY_TOL: f64 = 1e-8;
/// Time samples of `(0, 1]` for the Control-Gevrey sup.
pub const CONTROL_GEVREY_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "RECORDED")]
    Recorded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Recorded => "RECORDED",
        })
    }
}

/// One summary line, tied to a single acceptance criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub status: Status,
    pub criterion: u8,
    pub name: String,
    pub detail: String,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [criterion {}] {}: {}", self.status, self.criterion, self.name, self.detail)
    }
}

fn check(pass: bool, criterion: u8, name: &str, detail: String) -> CheckLine {
    CheckLine { status: if pass { Status::Pass } else { Status::Fail }, criterion, name: name.into(), detail }
}

fn recorded(criterion: u8, name: &str, detail: String) -> CheckLine {
    CheckLine { status: Status::Recorded, criterion, name: name.into(), detail }
}

/// A numerical failure, with the pipeline stage it happened in.
#[derive(Debug)]
pub struct RunError {
    pub stage: &'static str,
    pub source: Error,
    /// Artifacts written before the failure.
    pub artifacts: Vec<PathBuf>,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage `{}` failed: {}", self.stage, self.source)
    }
}

impl std::error::Error for RunError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub checks: Vec<CheckLine>,
    pub artifacts: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }
}

/// Everything written to `report.json`.
#[derive(Clone, Debug, Serialize)]
struct Report<'a> {
    scenario: &'static str,
    stationary_iterations: Option<usize>,
    energy: Option<stationary_solver::EnergyReport>,
    constants: Option<&'a ExistenceConstants>,
    picard_iterations: Option<usize>,
    max_relative_drift: Option<f64>,
    gevrey: Option<&'a GevreyReport>,
    checks: &'a [CheckLine],
}

#[derive(Serialize)]
struct ShellRow {
    xi: f64,
    max_abs: f64,
}

#[derive(Serialize)]
struct DecayRow {
    t: f64,
    #[serde(rename = "u_H1")]
    u_h1: f64,
    #[serde(rename = "theta_H1")]
    theta_h1: f64,
    liouville_indicator: f64,
    besov_norm: f64,
}

struct Run<'a> {
    cfg: &'a ScenarioConfig,
    out: ArtifactWriter,
    checks: Vec<CheckLine>,
    stage: &'static str,
}

type StageResult<T> = std::result::Result<T, Error>;

/// Execute the scenario and write its artifacts into `dir`.
pub fn run_scenario(cfg: &ScenarioConfig, dir: &Path) -> Result<RunOutcome, RunError> {
    let out = ArtifactWriter::create(dir).map_err(|e| RunError { stage: "output", source: e, artifacts: vec![] })?;
    let mut run = Run { cfg, out, checks: Vec::new(), stage: "output" };
    let result = run.execute();
    match result {
        Ok(()) => Ok(RunOutcome { checks: run.checks, artifacts: run.out.written().to_vec() }),
        Err(source) => {
            let _ = run.write_summary();
            Err(RunError { stage: run.stage, source, artifacts: run.out.written().to_vec() })
        }
    }
}

impl Run<'_> {
    fn execute(&mut self) -> StageResult<()> {
        self.out.text("config.json", &(echo(self.cfg) + "\n"))?;
        match self.cfg.scenario {
            Scenario::Nonhomogeneous => self.coupled(T1Mode::Uniform)?,
            Scenario::Homogeneous => self.coupled(T1Mode::Homogeneous)?,
            Scenario::NavierStokes => self.navier_stokes()?,
            Scenario::LiouvilleDecay => self.liouville()?,
        }
        self.stage = "output";
        self.write_summary()
    }

    fn write_summary(&mut self) -> StageResult<()> {
        let text: String = self.checks.iter().map(|c| format!("{c}\n")).collect();
        self.out.text("summary.txt", &text)
    }

    fn spec(&self, spec: &Option<ForceSpec>) -> Option<ForceSpec> {
        spec.clone().map(|mut s| {
            s.seed = effective_seed(self.cfg.seed, s.seed);
            s
        })
    }

    fn scalar(&self, spec: &Option<ForceSpec>) -> StageResult<SpectralScalarField> {
        match self.spec(spec) {
            Some(s) => make_gevrey_scalar(&s, &self.cfg.box_spec),
            None => Ok(SpectralScalarField::zeros(&self.cfg.box_spec)),
        }
    }

    fn vector(&self, spec: &Option<ForceSpec>, div_free: bool) -> StageResult<SpectralVectorField> {
        match self.spec(spec) {
            Some(s) => make_gevrey_vector(&s, &self.cfg.box_spec, div_free),
            None => Ok(SpectralVectorField::zeros(&self.cfg.box_spec)),
        }
    }

    fn forcing(&mut self) -> StageResult<Forcing> {
        self.stage = "data";
        let forces = &self.cfg.forces;
        Forcing::new(self.vector(&forces.f, true)?, self.scalar(&forces.g)?, self.vector(&forces.gvec, false)?)
    }

    fn picard_config(&self) -> PicardConfig {
        let e = &self.cfg.evolution;
        PicardConfig { tol: e.picard_tol, max_iters: e.max_picard_iters, calibration_c: e.calibration_c }
    }

    fn stationary(&mut self, data: &Forcing) -> StageResult<StationaryResult> {
        self.stage = "stationary";
        let stat = solve_stationary(data, &self.cfg.stationary)?;
        self.out.csv("stationary_history.csv", &stat.history)?;
        Ok(stat)
    }

    fn write_state(&mut self, u: &SpectralVectorField, theta: Option<&SpectralScalarField>) -> StageResult<()> {
        self.out.vector("u.bsq", u)?;
        if let Some(t) = theta {
            self.out.scalar("theta.bsq", t)?;
        }
        Ok(())
    }

    fn energy_checks(&mut self, stat: &StationaryResult) {
        let e = stat.energy_report;
        self.checks.push(check(
            e.theta_ratio <= 1.0 + THETA_RATIO_TOL,
            3,
            "theta energy estimate",
            format!("|θ|_H1 / |g|_H-1 = {:.12}", e.theta_ratio),
        ));
        self.checks.push(recorded(3, "u energy ratio", format!("{:.6e}", e.u_ratio)));
    }

    fn constants(&mut self, initial: &FlowState, data: &Forcing, mode: T1Mode) -> StageResult<ExistenceConstants> {
        self.stage = "constants";
        let k =
            compute_t1(&initial.u, &initial.theta, data, self.cfg.gevrey_r, self.cfg.evolution.calibration_c, mode)?;
        self.out.json("constants.json", &k)?;
        Ok(k)
    }

    /// Evolution checks over `[0, T₁]` started at the stationary state.
    fn evolution_checks(
        &mut self,
        initial: &FlowState,
        sol: &PicardSolution,
        k: &ExistenceConstants,
    ) -> StageResult<f64> {
        let scale = initial.h1();
        let worst = sol.trajectory.states.iter().map(|s| s.sub(initial).h1()).fold(0.0, f64::max);
        let drift = if worst == 0.0 { 0.0 } else { worst / scale };
        self.checks.push(check(
            drift <= DRIFT_TOL,
            6,
            "stationary drift",
            format!("max relative drift {drift:.3e} over [0, T1 = {:.6e}]", sol.trajectory.grid.t_end),
        ));
        self.checks.push(check(
            sol.in_ball,
            5,
            "Picard ball",
            format!("max iterate {:.6e} vs 3δ0 = {:.6e}", sol.max_iterate_norm, 3.0 * k.delta0),
        ));
        let series = norm_series(&sol.trajectory, self.cfg.gevrey_r);
        self.out.csv("norms.csv", &series)?;
        let weighted = series.iter().map(|s| s.gevrey_weighted_h1).fold(0.0, f64::max);
        let bound = 3.0 * k.delta1.unwrap_or(f64::INFINITY);
        self.checks.push(check(
            weighted <= bound,
            7,
            "Gevrey-weighted norm",
            format!("sup {weighted:.6e} vs 3δ1 = {bound:.6e}"),
        ));
        Ok(drift)
    }

    fn gevrey_checks(
        &mut self,
        u: &SpectralVectorField,
        theta: &SpectralScalarField,
        rho: f64,
    ) -> StageResult<Option<GevreyReport>> {
        self.stage = "diagnostics";
        if u.is_zero() && theta.is_zero() {
            self.checks.push(check(true, 7, "analyticity radius", "zero state, entire".into()));
            return Ok(None);
        }
        let rep = gevrey_report(u, theta, Some(rho))?;
        let shells: Vec<ShellRow> = rep.shell_data.iter().map(|&(xi, max_abs)| ShellRow { xi, max_abs }).collect();
        self.out.csv("shells.csv", &shells)?;
        self.out.csv::<AnnulusRow>("annuli.csv", &rep.annulus_sups)?;
        self.checks.push(check(
            rep.measured_radius >= rho && rep.r_squared >= MIN_R_SQUARED,
            7,
            "analyticity radius",
            format!("measured {:.6e} vs rho {rho:.6e}, R² {:.6}", rep.measured_radius, rep.r_squared),
        ));
        if let Some(i) = rep.liouville_indicator {
            self.checks.push(recorded(9, "Liouville indicator", format!("{i:.6e}")));
        }
        if let Some(s) = rep.improved_sobolev_ratio {
            self.checks.push(recorded(9, "improved Sobolev ratio", format!("{s:.6e}")));
        }
        Ok(Some(rep))
    }

    fn control_gevrey_checks(&mut self, data: &Forcing) -> StageResult<()> {
        self.stage = "control-gevrey";
        let r = self.cfg.gevrey_r;
        let c_r = control_gevrey_constant(r)?;
        let times = unit_time_grid(CONTROL_GEVREY_SAMPLES);
        let fields: [(&str, Option<f64>); 2] = [
            ("f", (!data.f.is_zero()).then(|| control_gevrey_ratio(&data.f, r, &times)).transpose()?),
            ("g", (!data.g.is_zero()).then(|| control_gevrey_ratio(&data.g, r, &times)).transpose()?),
        ];
        for (name, ratio) in fields {
            if let Some(q) = ratio {
                self.checks.push(check(
                    q <= c_r * (1.0 + CONTROL_GEVREY_SLACK),
                    8,
                    &format!("Control-Gevrey bound for {name}"),
                    format!("ratio {q:.6e} vs C_r = {c_r:.6e}"),
                ));
            }
        }
        Ok(())
    }

    fn report(
        &mut self,
        stat: Option<&StationaryResult>,
        k: &ExistenceConstants,
        sol: &PicardSolution,
        drift: f64,
        gevrey: Option<&GevreyReport>,
    ) -> StageResult<()> {
        self.stage = "output";
        let checks = self.checks.clone();
        let rep = Report {
            scenario: self.cfg.scenario.name(),
            stationary_iterations: stat.map(|s| s.iterations),
            energy: stat.map(|s| s.energy_report),
            constants: Some(k),
            picard_iterations: Some(sol.iterations),
            max_relative_drift: Some(drift),
            gevrey,
            checks: &checks,
        };
        self.out.json("report.json", &rep)
    }

    /// Nonhomogeneous and homogeneous scenarios.
    fn coupled(&mut self, mode: T1Mode) -> StageResult<()> {
        let data = self.forcing()?;
        let stat = self.stationary(&data)?;
        self.write_state(&stat.u, Some(&stat.theta))?;
        self.out.scalar("pressure_u.bsq", &stat.pressure_u)?;
        self.out.scalar("pressure_theta.bsq", &stat.pressure_theta)?;
        self.energy_checks(&stat);

        let initial = FlowState::new(stat.u.clone(), stat.theta.clone())?;
        let k = self.constants(&initial, &data, mode)?;
        let t1 = k.t1.expect("compute_t1 fills T1");
        self.stage = "evolution";
        let grid = TimeGrid::new(t1, self.cfg.evolution.steps)?;
        let sol = picard_mild_solve(&initial.u, &initial.theta, &data, &grid, &self.picard_config())?;
        let drift = self.evolution_checks(&initial, &sol, &k)?;

        let gevrey = self.gevrey_checks(&stat.u, &stat.theta, k.rho.expect("compute_t1 fills rho"))?;
        self.control_gevrey_checks(&data)?;
        self.report(Some(&stat), &k, &sol, drift, gevrey.as_ref())
    }

    fn navier_stokes(&mut self) -> StageResult<()> {
        let data = self.forcing()?;
        self.stage = "stationary";
        let u = solve_navier_stokes(&data.f, &self.cfg.stationary)?;
        let coupled = self.stationary(&data)?;
        self.write_state(&u, None)?;
        self.checks.push(check(
            u == coupled.u && coupled.theta.is_zero(),
            10,
            "stationary reduction",
            "Navier-Stokes solve vs coupled solve with θ = 0, g = 0, g⃗ = 0".into(),
        ));

        let b = self.cfg.box_spec;
        let initial = FlowState::new(u.clone(), SpectralScalarField::zeros(&b))?;
        let k = self.constants(&initial, &data, T1Mode::Uniform)?;
        self.stage = "evolution";
        let grid = TimeGrid::new(k.t1.expect("compute_t1 fills T1"), self.cfg.evolution.steps)?;
        let cfg = self.picard_config();
        let sol = picard_navier_stokes(&u, &data.f, &grid, &cfg)?;
        let coupled_sol = picard_mild_solve(&u, &initial.theta, &data, &grid, &cfg)?;
        let identical = sol.trajectory.states.iter().zip(&coupled_sol.trajectory.states).all(|(a, c)| a == c);
        self.checks.push(check(
            identical,
            10,
            "evolution reduction",
            format!("{} trajectory nodes compared", sol.trajectory.states.len()),
        ));
        let drift = self.evolution_checks(&initial, &sol, &k)?;

        let gevrey = self.gevrey_checks(&u, &initial.theta, k.rho.expect("compute_t1 fills rho"))?;
        self.control_gevrey_checks(&data)?;
        self.report(Some(&coupled), &k, &sol, drift, gevrey.as_ref())
    }

    fn liouville(&mut self) -> StageResult<()> {
        let data = self.forcing()?;
        let u0 = self.vector(&self.cfg.forces.initial_u, true)?;
        let theta0 = self.scalar(&self.cfg.forces.initial_theta)?;
        self.out.vector("u0.bsq", &u0)?;
        self.out.scalar("theta0.bsq", &theta0)?;

        self.stage = "evolution";
        let e = &self.cfg.evolution;
        let (t_final, dt) = (e.t_final.expect("validated"), e.dt.expect("validated"));
        let steps = (t_final / dt).round().max(1.0) as usize;
        let every = e.record_every;
        let besov_grid = besov_time_grid(&self.cfg.box_spec);
        let mut rows: Vec<StageResult<DecayRow>> = Vec::new();
        let mut n = 0usize;
        let last = evolve_etd(&u0, &theta0, &data, dt, steps, |t, s| {
            if n.is_multiple_of(every) || n == steps {
                rows.push(decay_row(t, s, &besov_grid));
            }
            n += 1;
        })?;
        let rows: Vec<DecayRow> = rows.into_iter().collect::<StageResult<_>>()?;
        self.out.csv("decay.csv", &rows)?;
        self.write_state(&last.u, Some(&last.theta))?;

        self.stage = "diagnostics";
        let (first, end) = (rows.first().expect("t = 0 row"), rows.last().expect("final row"));
        let pairs = [
            ("Liouville indicator decay", first.liouville_indicator, end.liouville_indicator),
            ("Besov norm decay", first.besov_norm, end.besov_norm),
            ("H1 norm decay", first.u_h1 + first.theta_h1, end.u_h1 + end.theta_h1),
        ];
        for (name, a, z) in pairs {
            let rel = if z == 0.0 { 0.0 } else { z / a };
            self.checks.push(check(
                rel <= DECAY_TOL,
                9,
                name,
                format!("final/initial = {rel:.3e} at t = {:.6e}", end.t),
            ));
        }
        for (name, ratio) in [
            ("improved Sobolev ratio u0", (!u0.is_zero()).then(|| improved_sobolev_ratio(&u0))),
            ("improved Sobolev ratio theta0", (!theta0.is_zero()).then(|| improved_sobolev_ratio(&theta0))),
        ] {
            if let Some(q) = ratio.transpose()? {
                self.checks.push(recorded(9, name, format!("{q:.6e}")));
            }
        }
        self.stage = "output";
        let checks = self.checks.clone();
        self.out.json(
            "report.json",
            &serde_json::json!({
                "scenario": self.cfg.scenario.name(),
                "steps": steps,
                "dt": dt,
                "t_final": end.t,
                "checks": checks,
            }),
        )
    }
}

fn decay_row(t: f64, s: &FlowState, besov_grid: &[f64]) -> StageResult<DecayRow> {
    let (indicator, _) = liouville_indicator(&s.u, &s.theta)?;
    Ok(DecayRow {
        t,
        u_h1: s.u_h1(),
        theta_h1: s.theta_h1(),
        liouville_indicator: indicator,
        besov_norm: besov_norm(&s.u, besov_grid).0 + besov_norm(&s.theta, besov_grid).0,
    })
}
