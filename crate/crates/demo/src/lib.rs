//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! The page exposes three operations: redrawing the closed-form curves as the
//! model sliders move, running a seeded Monte Carlo sweep, and inspecting the
//! per-N breakdown of one network size.

use teleport_sim::cli_io::{render_chart, render_csv};
use teleport_sim::engine::{run_sweep_with, SweepOptions, SweepSpec};
use teleport_sim::model::{self, ModelParams, PolicyKind};
use teleport_sim::stats::{AnalyticRow, AttemptsDenominator};
use wasm_bindgen::prelude::*;

/// Largest network size the page lets you sweep to.
const MAX_N: u32 = 1 << 12;

fn js_err(e: teleport_sim::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Parameters shared by all demo operations.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct DemoParams {
    params: ModelParams,
    max_n: u32,
}

#[wasm_bindgen]
impl DemoParams {
    #[wasm_bindgen(constructor)]
    pub fn new(
        p0: f64,
        beta: f64,
        kappa: f64,
        rounds: u32,
        max_n: u32,
    ) -> Result<DemoParams, JsValue> {
        let params = ModelParams::new(p0, beta, kappa, rounds).map_err(js_err)?;
        if !(2..=MAX_N).contains(&max_n) {
            return Err(JsValue::from_str(&format!("max N must be in [2, {MAX_N}]")));
        }
        Ok(DemoParams { params, max_n })
    }

    #[wasm_bindgen(js_name = withSimulation)]
    pub fn with_simulation(
        &self,
        trials: u32,
        cache_capacity: u32,
        seed: u64,
    ) -> Result<DemoParams, JsValue> {
        let params = self
            .params
            .with_trials(trials)
            .map_err(js_err)?
            .with_cache_capacity(cache_capacity)
            .with_seed(seed);
        Ok(DemoParams { params, ..*self })
    }
}

impl DemoParams {
    /// Powers of two from 2 up to `max_n`.
    fn grid(&self) -> Vec<u32> {
        std::iter::successors(Some(2u32), |n| n.checked_mul(2))
            .take_while(|&n| n <= self.max_n)
            .collect()
    }

    fn spec(&self) -> Result<SweepSpec, JsValue> {
        SweepSpec::new(self.grid(), PolicyKind::ALL.to_vec(), self.params).map_err(js_err)
    }

    fn analytic_rows(&self) -> Result<Vec<AnalyticRow>, JsValue> {
        self.spec()?
            .points()
            .into_iter()
            .map(|(n, p)| AnalyticRow::compute(n, p, &self.params, AttemptsDenominator::All))
            .collect::<Result<_, _>>()
            .map_err(js_err)
    }
}

/// SVG of the closed-form success and attempt curves for both policies.
#[wasm_bindgen(js_name = analyticChart)]
pub fn analytic_chart(params: &DemoParams) -> Result<String, JsValue> {
    render_chart(&[], &params.analytic_rows()?).map_err(js_err)
}

/// Result of a seeded simulation sweep: chart plus CSV table.
#[wasm_bindgen]
pub struct SimulationView {
    svg: String,
    csv: String,
}

#[wasm_bindgen]
impl SimulationView {
    #[wasm_bindgen(getter)]
    pub fn svg(&self) -> String {
        self.svg.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn csv(&self) -> String {
        self.csv.clone()
    }
}

/// Runs the Monte Carlo sweep over the power-of-two grid on a single thread
/// and overlays the closed-form curves.
#[wasm_bindgen]
pub fn simulate(params: &DemoParams) -> Result<SimulationView, JsValue> {
    let spec = params.spec()?;
    let options = SweepOptions {
        threads: 1,
        denominator: AttemptsDenominator::All,
    };
    let summaries = run_sweep_with(&spec, options, |_| {}).map_err(js_err)?;
    let analytic = params.analytic_rows()?;
    Ok(SimulationView {
        svg: render_chart(&summaries, &analytic).map_err(js_err)?,
        csv: render_csv(&summaries, &analytic).map_err(js_err)?,
    })
}

/// Per-N breakdown:
/// `[p_eff, K_naive, K_orch, p_round_naive, p_round_orch, success_naive,
/// success_orch, attempts_naive, attempts_orch]`.
#[wasm_bindgen(js_name = pointBreakdown)]
pub fn point_breakdown(params: &DemoParams, n: u32) -> Result<Vec<f64>, JsValue> {
    let p = &params.params;
    let naive = PolicyKind::NaiveSequential;
    let orch = PolicyKind::OrchestratedParallel;
    let row = || -> teleport_sim::Result<Vec<f64>> {
        Ok(vec![
            model::effective_success_probability(n, p)?,
            f64::from(model::parallelism(n, naive, p)?),
            f64::from(model::parallelism(n, orch, p)?),
            model::round_success_probability(n, naive, p)?,
            model::round_success_probability(n, orch, p)?,
            model::analytic_success(n, naive, p)?,
            model::analytic_success(n, orch, p)?,
            model::analytic_expected_attempts(n, naive, p)?,
            model::analytic_expected_attempts(n, orch, p)?,
        ])
    };
    row().map_err(js_err)
}
