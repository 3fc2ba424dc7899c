use std::path::PathBuf;

use serde_json::{json, Value};
use tra_spectrum::hmd::linear_grid;
use tra_spectrum::oracle::{quadrature_discrepancy, Kernel, MAX_ORACLE_DEGREE};
use tra_spectrum::potential::{classify_shape, max_basis_index};
use tra_spectrum::solver::{self, FixedRule, NuRule};
use tra_spectrum::wavefunction::{default_grid, log_grid, sample_wavefunction, DEFAULT_SAMPLES};
use tra_spectrum::{BasisParams, BoundSpectrum, NuRuleRegistry, PotentialParams, ShapeReport, SolverRegistry};

use crate::args::{BasisArgs, Format, GridArgs, NuSetting, OutputArgs, PotentialArgs};
use crate::error::CliError;
use crate::output::{csv_text, emit, json_text, num, nums, sig};

const NO_BOUND_STATES: &str = "A > −1/2 admits no bound states";

/// Validated parameters shared by the spectrum-based commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: PotentialParams,
    /// Basis size `N`.
    pub basis_degree: usize,
    pub mu: f64,
    pub nu: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Resolves `ν = auto` and checks `μ > −1`, `μ + ν < −2N − 1` before any work.
    pub fn resolve(p: &PotentialArgs, b: &BasisArgs, o: &OutputArgs) -> Result<Self, CliError> {
        let potential = PotentialParams::new(p.a, p.b, p.c, p.lambda)?;
        if b.basis_degree == 0 {
            return Err(CliError::config("--basis-degree must be at least 1"));
        }
        let n = b.basis_degree as f64;
        let nu = match b.nu {
            NuSetting::Auto => -2.0 * n - b.mu - 2.0,
            NuSetting::Value(v) => v,
        };
        if !(b.mu > -1.0) || !b.mu.is_finite() {
            return Err(CliError::config(format!("μ = {} must exceed −1", b.mu)));
        }
        if !(b.mu + nu < -2.0 * n - 1.0) {
            return Err(CliError::config(format!(
                "μ + ν = {} must be below −2N − 1 = {} for N = {}",
                b.mu + nu,
                -2.0 * n - 1.0,
                b.basis_degree
            )));
        }
        Ok(Self { potential, basis_degree: b.basis_degree, mu: b.mu, nu, format: o.format, out: o.out.clone() })
    }

    pub fn basis(&self) -> Result<BasisParams, CliError> {
        Ok(BasisParams::with_size(self.mu, self.nu, self.basis_degree)?)
    }

    fn potential_json(&self) -> Value {
        let p = &self.potential;
        json!({ "A": num(p.a), "B": num(p.b), "C": num(p.c), "lambda": num(p.lambda) })
    }

    fn basis_json(&self) -> Value {
        json!({ "basis_degree": self.basis_degree, "mu": num(self.mu), "nu": num(self.nu) })
    }
}

/// Bound spectrum, or `None` with a note when `A > −1/2`.
fn bound_spectrum(cfg: &RunConfig, solver_name: &str) -> Result<Option<BoundSpectrum>, CliError> {
    let registry = SolverRegistry::with_builtins();
    let solver = registry.get(solver_name)?;
    if max_basis_index(cfg.potential.a).is_none() {
        return Ok(None);
    }
    Ok(Some(solver.solve(&cfg.basis()?, &cfg.potential)?))
}

pub fn spectrum(cfg: &RunConfig, solver_name: &str) -> Result<(), CliError> {
    let result = bound_spectrum(cfg, solver_name)?;
    let minus: Vec<f64> = result.as_ref().map(|s| s.report_units.clone()).unwrap_or_default();
    let note = result.is_none().then_some(NO_BOUND_STATES);
    let text = match cfg.format {
        Format::Csv => {
            if let Some(n) = note {
                eprintln!("note: {n}");
            }
            let header = ["n", "minus_epsilon", "E_over_half_lambda_sq"].map(String::from);
            let rows: Vec<Vec<String>> =
                minus.iter().enumerate().map(|(k, &m)| vec![k.to_string(), sig(m), sig(-m)]).collect();
            csv_text(&header, &rows)?
        }
        Format::Json => {
            let states: Vec<Value> = minus
                .iter()
                .enumerate()
                .map(|(k, &m)| json!({ "n": k, "minus_epsilon": num(m), "E_over_half_lambda_sq": num(-m) }))
                .collect();
            let diagnostics = result.as_ref().map(|s| {
                let d = &s.diagnostics;
                json!({
                    "raw_negative_count": d.raw_negative_count,
                    "discarded_count": d.discarded_count,
                    "max_relative_residual": num(d.max_relative_residual),
                    "precision": d.precision,
                })
            });
            json_text(&json!({
                "command": "spectrum",
                "potential": cfg.potential_json(),
                "basis": cfg.basis_json(),
                "solver": solver_name,
                "states": states,
                "diagnostics": diagnostics,
                "note": note,
            }))
        }
    };
    emit(cfg.out.as_deref(), &text)
}

fn shape_json(s: &ShapeReport) -> Value {
    json!({
        "gamma": num(s.gamma),
        "xi": num(s.xi),
        "crossings": s.crossings.iter().map(|c| json!({ "x": num(c.x), "r": num(c.r) })).collect::<Vec<_>>(),
        "extrema": s.extrema.iter()
            .map(|e| json!({ "x": num(e.x), "r": num(e.r), "value": num(e.value) }))
            .collect::<Vec<_>>(),
        "admits_bound_states": s.admits_bound_states,
        "satisfies_b_ge_c": s.satisfies_b_ge_c,
    })
}

pub fn potential(
    p: &PotentialArgs,
    grid: &GridArgs,
    shape_out: Option<PathBuf>,
    o: &OutputArgs,
) -> Result<(), CliError> {
    let params = PotentialParams::new(p.a, p.b, p.c, p.lambda)?;
    if params.c == 0.0 {
        return Err(CliError::config("C must be non-zero: the curve is reported in units of λ²C/2"));
    }
    let r_min = grid.r_min.unwrap_or(0.05 / params.lambda);
    let r_max = grid.r_max.unwrap_or(5.0 / params.lambda);
    let samples = grid.samples.unwrap_or(500);
    if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
        return Err(CliError::config(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
    }
    if samples < 2 {
        return Err(CliError::config("--samples must be at least 2"));
    }
    let r = linear_grid(r_min, r_max, samples);
    let v = r.iter().map(|&r| Ok(params.u_of_r(r)? / params.c)).collect::<Result<Vec<f64>, CliError>>()?;
    let shape = shape_json(&classify_shape(&params)?);
    let text = match o.format {
        Format::Csv => {
            let shape_text = json_text(&shape);
            match shape_out {
                Some(path) => emit(Some(&path), &shape_text)?,
                None => eprint!("{shape_text}"),
            }
            let header = ["r", "V_over_half_lambda_sq_C"].map(String::from);
            let rows: Vec<Vec<String>> = r.iter().zip(&v).map(|(&r, &v)| vec![sig(r), sig(v)]).collect();
            csv_text(&header, &rows)?
        }
        Format::Json => json_text(&json!({
            "command": "potential",
            "potential": json!({ "A": num(p.a), "B": num(p.b), "C": num(p.c), "lambda": num(p.lambda) }),
            "r": nums(&r),
            "V_over_half_lambda_sq_C": nums(&v),
            "shape": shape,
        })),
    };
    emit(o.out.as_deref(), &text)
}

pub fn wavefunction(
    cfg: &RunConfig,
    solver_name: &str,
    grid: &GridArgs,
    state: usize,
    terms: Option<usize>,
) -> Result<(), CliError> {
    let lambda = cfg.potential.lambda;
    let r = match (grid.r_min, grid.r_max, grid.samples) {
        (None, None, None) => default_grid(lambda)?,
        (lo, hi, n) => {
            log_grid(lo.unwrap_or(1e-3 / lambda), hi.unwrap_or(15.0 / lambda), n.unwrap_or(DEFAULT_SAMPLES))?
        }
    };
    let eps = bound_spectrum(cfg, solver_name)?.map(|s| s.epsilons).unwrap_or_default();
    let Some(&e) = eps.get(state) else {
        return Err(CliError::config(format!(
            "state {state} out of range: {} bound state(s) available{}",
            eps.len(),
            if eps.is_empty() { String::new() } else { format!(" (0..={})", eps.len() - 1) }
        )));
    };
    let p = &cfg.potential;
    let t = sample_wavefunction(state, e, p, &r, terms)?;
    if t.underflow_count > 0 {
        eprintln!("note: {} sample(s) below e^-700 reported as 0", t.underflow_count);
    }
    let text = match cfg.format {
        Format::Csv => {
            let header = ["r", "psi"].map(String::from);
            let rows: Vec<Vec<String>> = t.r_grid.iter().zip(&t.psi).map(|(&r, &v)| vec![sig(r), sig(v)]).collect();
            csv_text(&header, &rows)?
        }
        Format::Json => json_text(&json!({
            "command": "wavefunction",
            "potential": cfg.potential_json(),
            "basis": cfg.basis_json(),
            "solver": solver_name,
            "state_index": t.state_index,
            "epsilon": num(t.epsilon),
            "mu_k": num(t.mu_k),
            "nu_k": num(t.nu_k),
            "terms_used": t.terms_used,
            "underflow_count": t.underflow_count,
            "r": nums(&t.r_grid),
            "psi": nums(&t.psi),
        })),
    };
    emit(cfg.out.as_deref(), &text)
}

pub struct PlateauRequest<'a> {
    pub mu_min: f64,
    pub mu_max: f64,
    pub mu_steps: usize,
    pub nu_rule: &'a str,
    pub solver: &'a str,
}

pub fn plateau(cfg: &RunConfig, req: &PlateauRequest<'_>) -> Result<(), CliError> {
    if req.mu_steps == 0 {
        return Err(CliError::config("--mu-steps must be at least 1"));
    }
    if !(req.mu_min <= req.mu_max) || (req.mu_steps > 1 && req.mu_min == req.mu_max) {
        return Err(CliError::config(format!("need mu-min < mu-max, got [{}, {}]", req.mu_min, req.mu_max)));
    }
    let solvers = SolverRegistry::with_builtins();
    let solver = solvers.get(req.solver)?;
    let fixed = FixedRule(cfg.nu);
    let rules = NuRuleRegistry::with_builtins();
    let rule: &dyn NuRule = if req.nu_rule == "fixed" { &fixed } else { rules.get(req.nu_rule)? };
    let grid = linear_grid(req.mu_min, req.mu_max, req.mu_steps);
    let scan = solver::plateau_scan(solver, rule, &cfg.potential, cfg.basis_degree, &grid)?;

    let states = scan.states.len();
    let text = match cfg.format {
        Format::Csv => {
            for s in &scan.states {
                match (s.mu_range, s.delta) {
                    (Some((a, b)), Some(d)) => {
                        eprintln!("state {}: plateau mu in [{}, {}], delta = {}", s.state, sig(a), sig(b), sig(d))
                    }
                    _ => eprintln!("state {}: no plateau", s.state),
                }
            }
            let mut header = vec!["mu".to_string(), "nu".to_string()];
            header.extend((0..states).map(|k| format!("minus_eps_{k}")));
            let rows: Vec<Vec<String>> = scan
                .rows
                .iter()
                .map(|row| {
                    let mut cells = vec![sig(row.mu), sig(row.nu)];
                    cells.extend((0..states).map(|k| row.minus_epsilon.get(k).map_or(String::new(), |&v| sig(v))));
                    cells
                })
                .collect();
            csv_text(&header, &rows)?
        }
        Format::Json => json_text(&json!({
            "command": "plateau",
            "potential": cfg.potential_json(),
            "basis_degree": cfg.basis_degree,
            "nu_rule": rule.name(),
            "solver": req.solver,
            "rows": scan.rows.iter()
                .map(|r| json!({ "mu": num(r.mu), "nu": num(r.nu), "minus_epsilon": nums(&r.minus_epsilon) }))
                .collect::<Vec<_>>(),
            "states": scan.states.iter()
                .map(|s| json!({
                    "state": s.state,
                    "mu_range": s.mu_range.map(|(a, b)| nums(&[a, b])),
                    "delta": s.delta.map(num),
                }))
                .collect::<Vec<_>>(),
        })),
    };
    emit(cfg.out.as_deref(), &text)
}

pub struct QuadratureRequest {
    pub mu: f64,
    pub nu: NuSetting,
    pub min_degree: usize,
    pub max_degree: usize,
    pub tol: f64,
}

pub fn check_quadrature(req: &QuadratureRequest, o: &OutputArgs) -> Result<(), CliError> {
    if req.max_degree > MAX_ORACLE_DEGREE {
        return Err(CliError::config(format!("--max-degree {} exceeds {MAX_ORACLE_DEGREE}", req.max_degree)));
    }
    if req.min_degree > req.max_degree {
        return Err(CliError::config(format!(
            "empty degree range: min-degree {} > max-degree {}",
            req.min_degree, req.max_degree
        )));
    }
    let mut rows = Vec::new();
    for degree in req.min_degree..=req.max_degree {
        let nu = match req.nu {
            NuSetting::Auto => -2.0 * (degree + 1) as f64 - req.mu - 2.0,
            NuSetting::Value(v) => v,
        };
        let basis = BasisParams::new(req.mu, nu, degree)?;
        for kernel in Kernel::HAMILTONIAN {
            let d = quadrature_discrepancy(&basis, kernel, req.tol)?;
            rows.push((degree, nu, d));
        }
    }
    let text = match o.format {
        Format::Csv => {
            let header = ["degree", "mu", "nu", "kernel", "max_abs_discrepancy", "max_abs_entry"].map(String::from);
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|(deg, nu, d)| {
                    vec![
                        deg.to_string(),
                        sig(req.mu),
                        sig(*nu),
                        d.label.to_string(),
                        sig(d.max_abs_discrepancy),
                        sig(d.max_abs_entry),
                    ]
                })
                .collect();
            csv_text(&header, &cells)?
        }
        Format::Json => json_text(&json!({
            "command": "check-quadrature",
            "tolerance": num(req.tol),
            "rows": rows.iter()
                .map(|(deg, nu, d)| json!({
                    "degree": deg,
                    "mu": num(req.mu),
                    "nu": num(*nu),
                    "kernel": d.label,
                    "max_abs_discrepancy": num(d.max_abs_discrepancy),
                    "max_abs_entry": num(d.max_abs_entry),
                }))
                .collect::<Vec<_>>(),
        })),
    };
    emit(o.out.as_deref(), &text)
}
