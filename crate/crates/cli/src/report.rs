//! Report construction: run the pipeline per route, attach diagnostics,
//! and serialize to JSON deterministically.

use conic_qm::linalg::{vec_norm, vec_sub};
use conic_qm::measure::distribution_distance;
use conic_qm::{born_oracle, outcome_distribution, q_numeric, q_spectral};
use conic_qm::{Error, OutcomeDistribution, Route, StateVector};
use serde::{Deserialize, Serialize};

use crate::scenario::{ResolvedScenario, RouteSpec, ScenarioConfig};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostics {
    /// |e(Qx) - 1|
    pub e_drift: f64,
    /// Cone membership margin of the decohered state (negative = outside).
    pub membership_margin: f64,
    /// ||Q(Qx) - Qx||
    pub q_idempotence_residual: f64,
    /// Largest probability gap against the density-matrix Born rule;
    /// present only on the spectral route of Hermitian-observable scenarios.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub born_delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RouteReport {
    pub route: Route,
    pub distribution: OutcomeDistribution,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultReport {
    /// The scenario as parsed; re-serializing gives an equivalent input.
    pub scenario: ScenarioConfig,
    /// Coordinates actually fed to the pipeline (after any normalization).
    pub state: StateVector,
    pub routes: Vec<RouteReport>,
    /// Wall time; excluded by default so identical runs byte-match.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

fn check_finite(d: &OutcomeDistribution) -> Result<(), Error> {
    let ok = d.entries.iter().all(|e| {
        e.value.is_finite()
            && e.probability.is_finite()
            && e.representative.coords().iter().all(|c| c.is_finite())
    });
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant("report contains non-finite values".into()))
    }
}

fn run_route(
    config: &ScenarioConfig,
    resolved: &ResolvedScenario,
    route: Route,
) -> Result<RouteReport, Error> {
    let q = &resolved.quantity;
    let x = &resolved.state;
    let y = match route {
        Route::Spectral => q_spectral(q, x)?,
        Route::Numeric { epsilon, nodes } => q_numeric(q, x, epsilon, nodes)?,
    };
    let yy = match route {
        Route::Spectral => q_spectral(q, &y)?,
        Route::Numeric { epsilon, nodes } => q_numeric(q, &y, epsilon, nodes)?,
    };
    let distribution = outcome_distribution(q, x, route, resolved.outcome_tol)?;
    check_finite(&distribution)?;

    let born_delta = match (&route, config.hermitian_observable()) {
        (Route::Spectral, Some(a_hat)) => {
            let rho = resolved.cone.state_to_matrix(x)?;
            let oracle = born_oracle(&a_hat, &rho, resolved.outcome_tol)?;
            let delta = distribution_distance(&distribution, &oracle, 1e-6);
            if !delta.is_finite() || delta > 1e-6 {
                return Err(Error::Invariant(format!(
                    "pipeline disagrees with the Born oracle (delta = {delta:e})"
                )));
            }
            Some(delta)
        }
        _ => None,
    };

    Ok(RouteReport {
        route,
        distribution,
        diagnostics: Diagnostics {
            e_drift: (resolved.cone.e_value(&y)? - 1.0).abs(),
            membership_margin: resolved.cone.membership_margin(&y)?,
            q_idempotence_residual: vec_norm(&vec_sub(yy.coords(), y.coords())),
            born_delta,
        },
    })
}

/// Routes a scenario expands into. The numeric route runs at the smallest
/// ε of the scenario's list — the best finite-ε stand-in for the limit;
/// per-ε behaviour belongs to `converge`.
pub fn routes_for(resolved: &ResolvedScenario) -> Vec<Route> {
    let numeric = Route::Numeric {
        epsilon: resolved.epsilons.iter().copied().fold(f64::INFINITY, f64::min),
        nodes: resolved.nodes,
    };
    match resolved.route {
        RouteSpec::Spectral => vec![Route::Spectral],
        RouteSpec::Numeric => vec![numeric],
        RouteSpec::Both => vec![Route::Spectral, numeric],
    }
}

pub fn build_report(config: &ScenarioConfig, timing: bool) -> Result<ResultReport, Error> {
    let start = std::time::Instant::now();
    let resolved = config.resolve()?;
    let routes = routes_for(&resolved)
        .into_iter()
        .map(|r| run_route(config, &resolved, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResultReport {
        scenario: config.clone(),
        state: resolved.state,
        routes,
        wall_time_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}
