//! Runtime-selectable spectrum solvers and ν rules.
//!
//! Both registries map a name to a boxed strategy so the command line can
//! pick one without the library knowing about it.

use std::collections::BTreeMap;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::hmd::{self, BoundSpectrum, PlateauScan};
use crate::potential::PotentialParams;
use crate::real::{DoubleDouble, Real};
use crate::tra::BasisParams;

pub trait SpectrumSolver: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn solve(&self, basis: &BasisParams, potential: &PotentialParams) -> Result<BoundSpectrum>;
}

/// Cholesky reduction of the pencil `(H, ω)` in precision `T`.
pub struct CholeskySolver<T>(PhantomData<T>);

impl<T> CholeskySolver<T> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<T> Default for CholeskySolver<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Node-basis solve where the overlap is diagonal.
pub struct NodalSolver<T>(PhantomData<T>);

impl<T> NodalSolver<T> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<T> Default for NodalSolver<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn precision_suffix<T: Real>() -> bool {
    T::LABEL == f64::LABEL
}

impl<T: Real> SpectrumSolver for CholeskySolver<T> {
    fn name(&self) -> &'static str {
        if precision_suffix::<T>() {
            "cholesky-f64"
        } else {
            "cholesky"
        }
    }

    fn description(&self) -> &'static str {
        if precision_suffix::<T>() {
            "Cholesky reduction in double precision (fast, loses digits beyond ~50 basis functions)"
        } else {
            "Cholesky reduction in double-double precision"
        }
    }

    fn solve(&self, basis: &BasisParams, potential: &PotentialParams) -> Result<BoundSpectrum> {
        let sys = hmd::assemble_system::<T>(basis, potential)?;
        let eigs = hmd::generalized_spectrum(&sys)?;
        Ok(hmd::bound_states(&eigs, basis, self.name(), T::LABEL))
    }
}

impl<T: Real> SpectrumSolver for NodalSolver<T> {
    fn name(&self) -> &'static str {
        if precision_suffix::<T>() {
            "nodal-f64"
        } else {
            "nodal"
        }
    }

    fn description(&self) -> &'static str {
        if precision_suffix::<T>() {
            "node-basis scaling with diagonal overlap, double precision"
        } else {
            "node-basis scaling with diagonal overlap, double-double precision"
        }
    }

    fn solve(&self, basis: &BasisParams, potential: &PotentialParams) -> Result<BoundSpectrum> {
        let eigs = hmd::nodal_spectrum::<T>(basis, potential)?;
        Ok(hmd::bound_states(&eigs, basis, self.name(), T::LABEL))
    }
}

pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Box<dyn SpectrumSolver>>,
    default: &'static str,
}

impl SolverRegistry {
    pub fn empty(default: &'static str) -> Self {
        Self { solvers: BTreeMap::new(), default }
    }

    /// `cholesky` (default), `cholesky-f64`, `nodal`, `nodal-f64`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty("cholesky");
        r.register(Box::new(CholeskySolver::<DoubleDouble>::new()));
        r.register(Box::new(CholeskySolver::<f64>::new()));
        r.register(Box::new(NodalSolver::<DoubleDouble>::new()));
        r.register(Box::new(NodalSolver::<f64>::new()));
        r
    }

    /// Replaces any solver of the same name.
    pub fn register(&mut self, solver: Box<dyn SpectrumSolver>) {
        self.solvers.insert(solver.name(), solver);
    }

    pub fn get(&self, name: &str) -> Result<&dyn SpectrumSolver> {
        self.solvers
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::invalid(format!("unknown solver '{name}' (available: {})", self.names().join(", "))))
    }

    pub fn default_solver(&self) -> Result<&dyn SpectrumSolver> {
        self.get(self.default)
    }

    pub fn default_name(&self) -> &'static str {
        self.default
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.keys().copied().collect()
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// How the computational ν follows μ.
pub trait NuRule: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// ν for a basis of `size` functions.
    fn nu(&self, mu: f64, size: usize, potential: &PotentialParams) -> Result<f64>;
}

/// `ν = −2N − μ − 2` with `N` the basis size.
pub struct TableRule;

impl NuRule for TableRule {
    fn name(&self) -> &'static str {
        "table"
    }

    fn description(&self) -> &'static str {
        "ν = −2N − μ − 2 with N the basis size"
    }

    fn nu(&self, mu: f64, size: usize, _: &PotentialParams) -> Result<f64> {
        Ok(-2.0 * size as f64 - mu - 2.0)
    }
}

/// `ν = −√(μ² − 2A)`, which removes the `1/(1+x)` kernel from the Hamiltonian
/// but ties ν to the potential. Usable only for small bases.
pub struct EliminateRule;

impl NuRule for EliminateRule {
    fn name(&self) -> &'static str {
        "eliminate"
    }

    fn description(&self) -> &'static str {
        "ν = −√(μ² − 2A), cancels the 1/(1+x) term; restricts the basis size"
    }

    fn nu(&self, mu: f64, _: usize, p: &PotentialParams) -> Result<f64> {
        let radicand = mu * mu - 2.0 * p.a;
        if radicand < 0.0 {
            return Err(Error::invalid(format!("μ² − 2A = {radicand} is negative")));
        }
        Ok(-radicand.sqrt())
    }
}

/// A constant ν independent of μ.
pub struct FixedRule(pub f64);

impl NuRule for FixedRule {
    fn name(&self) -> &'static str {
        "fixed"
    }

    fn description(&self) -> &'static str {
        "constant ν"
    }

    fn nu(&self, _: f64, _: usize, _: &PotentialParams) -> Result<f64> {
        Ok(self.0)
    }
}

pub struct NuRuleRegistry {
    rules: BTreeMap<&'static str, Box<dyn NuRule>>,
}

impl NuRuleRegistry {
    /// `table` and `eliminate`.
    pub fn with_builtins() -> Self {
        let mut r = Self { rules: BTreeMap::new() };
        r.register(Box::new(TableRule));
        r.register(Box::new(EliminateRule));
        r
    }

    pub fn register(&mut self, rule: Box<dyn NuRule>) {
        self.rules.insert(rule.name(), rule);
    }

    pub fn get(&self, name: &str) -> Result<&dyn NuRule> {
        self.rules
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::invalid(format!("unknown ν rule '{name}' (available: {})", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.rules.keys().copied().collect()
    }
}

impl Default for NuRuleRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

/// [`hmd::plateau_scan`] driven by registry strategies.
pub fn plateau_scan(
    solver: &dyn SpectrumSolver,
    rule: &dyn NuRule,
    p: &PotentialParams,
    size: usize,
    mu_grid: &[f64],
) -> Result<PlateauScan> {
    // resolve ν up front so rule errors surface before the parallel part
    let nus = mu_grid.iter().map(|&mu| rule.nu(mu, size, p)).collect::<Result<Vec<_>>>()?;
    let lookup = |mu: f64| {
        let i = mu_grid.iter().position(|&m| m == mu).expect("μ from grid");
        nus[i]
    };
    hmd::plateau_scan(p, size, mu_grid, lookup, |b, p| solver.solve(b, p))
}
