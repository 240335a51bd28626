//! Benchmark harness: generate a batch of feasible instances, solve each
//! for every requested augmentation factor, cross-check against the
//! exhaustive oracle, and emit one CSV row per (instance, k).

use std::fmt::Write as _;

use vchc_core::cover::solve_augmented;
use vchc_core::gen::{gen_random, GenParams};
use vchc_core::oracle;
use vchc_core::rational::{rat_to_decimal, rat_to_string, Rat};

use vchc_core::num_traits::Zero;

pub struct BenchConfig {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub max_edge_size: usize,
    pub ks: Vec<u64>,
    pub count: u64,
    pub seed: u64,
    pub budget: u64,
}

pub struct BenchOutcome {
    pub csv: String,
    pub all_pass: bool,
    pub rows: usize,
}

#[derive(Debug)]
pub enum BenchError {
    /// Some generated instance exceeded the oracle budget.
    Budget(String),
    Other(String),
}

impl std::fmt::Display for BenchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchError::Budget(m) | BenchError::Other(m) => write!(f, "{}", m),
        }
    }
}

impl std::error::Error for BenchError {}

/// Columns: seed, n, m, f, k, solver_cost, opt, ratio, bound, dual_lb,
/// pass, then decimal convenience columns for the money/ratio values.
/// `ratio` is blank when the optimum is zero; `pass` is the exact
/// comparison `solver_cost <= bound * opt`. Rows are ordered by seed, then
/// k.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome, BenchError> {
    let mut csv = String::from(
        "seed,n,m,f,k,solver_cost,opt,ratio,bound,dual_lb,pass,\
         solver_cost_dec,opt_dec,ratio_dec,bound_dec,dual_lb_dec\n",
    );
    let mut all_pass = true;
    let mut rows = 0usize;
    for offset in 0..cfg.count {
        let seed = cfg.seed.wrapping_add(offset);
        let params = GenParams::small(cfg.vertex_count, cfg.edge_count, cfg.max_edge_size, seed);
        let inst =
            gen_random(&params).map_err(|e| BenchError::Other(format!("seed {}: {}", seed, e)))?;
        let opt = oracle::exact_opt(&inst, cfg.budget).map_err(|e| match e {
            oracle::OracleError::BudgetExceeded { .. } => {
                BenchError::Budget(format!("seed {}: {}", seed, e))
            }
            other => BenchError::Other(format!("seed {}: {}", seed, other)),
        })?;
        let opt_cost = opt.opt_cost.ok_or_else(|| {
            BenchError::Other(format!("seed {}: generated instance infeasible", seed))
        })?;
        for &k in &cfg.ks {
            let run = solve_augmented(&inst, k)
                .map_err(|e| BenchError::Other(format!("seed {} k {}: {}", seed, k, e)))?;
            let bound = &run.cover.guaranteed_ratio;
            let pass = run.cover.cost <= bound * &opt_cost;
            all_pass &= pass;
            rows += 1;
            let ratio: Option<Rat> = if opt_cost.is_zero() {
                None
            } else {
                Some(&run.cover.cost / &opt_cost)
            };
            let ratio_str = ratio.as_ref().map(rat_to_string).unwrap_or_default();
            let ratio_dec = ratio
                .as_ref()
                .map(|r| rat_to_decimal(r, 6))
                .unwrap_or_default();
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                seed,
                inst.vertices.len(),
                inst.edges.len(),
                inst.max_edge_size(),
                k,
                rat_to_string(&run.cover.cost),
                rat_to_string(&opt_cost),
                ratio_str,
                rat_to_string(bound),
                rat_to_string(&run.cover.dual_lower_bound),
                pass,
                rat_to_decimal(&run.cover.cost, 6),
                rat_to_decimal(&opt_cost, 6),
                ratio_dec,
                rat_to_decimal(bound, 6),
                rat_to_decimal(&run.cover.dual_lower_bound, 6),
            );
        }
    }
    Ok(BenchOutcome {
        csv,
        all_pass,
        rows,
    })
}
