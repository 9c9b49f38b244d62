//! Greedy scanpath generation with inhibition of return.
//!
//! Each step rebuilds a suppressed copy of the fresh saliency map from the
//! full fixation history and picks its global maximum. The weight of the
//! `i`-th earlier fixation depends on the index `n` of the fixation being
//! predicted, so the suppression pattern changes from step to step.

use crate::error::{Error, Result};
use crate::types::{DecayKind, GridCell, RolloutConfig, SaliencyMap, Scanpath};

/// IOR weight of history entry `i` (1-based) when predicting fixation `n`.
///
/// Requires `1 <= i <= n - 1`. `BaselineLinear` is deliberately left
/// unclamped here: for `n > 12` the oldest entries get negative weights.
pub fn decay_weight(kind: DecayKind, gamma: f64, n: usize, i: usize) -> f64 {
    debug_assert!(i >= 1 && i < n, "history index {i} out of range for n = {n}");
    let age = (n - i - 1) as i64;
    match kind {
        // Integer numerator keeps e.g. (n=13, i=1) at exactly -0.1.
        DecayKind::BaselineLinear => (10 - age) as f64 / 10.0,
        DecayKind::ExponentialGamma => gamma.powi(age as i32),
        DecayKind::Full => 1.0,
    }
}

/// Multiplicative factor applied inside the disk of history entry `i`.
pub fn suppression_factor(kind: DecayKind, gamma: f64, n: usize, i: usize) -> f64 {
    1.0 - decay_weight(kind, gamma, n, i).clamp(0.0, 1.0)
}

/// Suppresses `map` around every history cell.
///
/// Cells within Euclidean distance `cfg.radius_px()` of the `i`-th history
/// entry are scaled by `1 - clamp(w_i, 0, 1)`; overlapping disks multiply.
/// `n` is taken as `history.len() + 1`. The result may be all zero.
pub fn apply_ior_mask(map: &SaliencyMap, history: &[GridCell], cfg: &RolloutConfig) -> SaliencyMap {
    let (w, h) = (map.width(), map.height());
    let mut values = map.values().to_vec();
    let n = history.len() + 1;
    let r = cfg.radius_px();
    let r2 = r * r;
    let reach = r.floor() as usize;
    for (k, cell) in history.iter().enumerate() {
        let factor = suppression_factor(cfg.decay, cfg.gamma, n, k + 1);
        if factor == 1.0 {
            continue;
        }
        let rows = cell.row.saturating_sub(reach)..(cell.row + reach + 1).min(h);
        for row in rows {
            let dy = row as f64 - cell.row as f64;
            let cols = cell.col.saturating_sub(reach)..(cell.col + reach + 1).min(w);
            for col in cols {
                let dx = col as f64 - cell.col as f64;
                if dx * dx + dy * dy <= r2 {
                    values[row * w + col] *= factor;
                }
            }
        }
    }
    SaliencyMap::with_zeros_allowed(w, h, values).expect("scaling by [0, 1] keeps the map valid")
}

/// Working state of one rollout.
#[derive(Debug, Clone)]
pub struct IorState<'a> {
    fresh: &'a SaliencyMap,
    cfg: RolloutConfig,
    history: Vec<GridCell>,
    working: SaliencyMap,
    fallback_steps: usize,
}

impl<'a> IorState<'a> {
    pub fn new(fresh: &'a SaliencyMap, cfg: &RolloutConfig) -> Result<Self> {
        cfg.validate()?;
        if fresh.is_all_zero() {
            return Err(Error::AllZeroMap);
        }
        Ok(Self {
            fresh,
            cfg: *cfg,
            history: Vec::with_capacity(cfg.n_fixations),
            working: fresh.clone(),
            fallback_steps: 0,
        })
    }

    pub fn history(&self) -> &[GridCell] {
        &self.history
    }

    /// Suppressed map used for the most recent selection.
    pub fn working_map(&self) -> &SaliencyMap {
        &self.working
    }

    pub fn fallback_steps(&self) -> usize {
        self.fallback_steps
    }

    /// Selects the next fixation, or `None` once every cell has been used.
    pub fn step(&mut self) -> Option<GridCell> {
        self.working = apply_ior_mask(self.fresh, &self.history, &self.cfg);
        let cell = if self.working.is_all_zero() {
            // Everything is masked: take the best fresh cell not yet chosen.
            let history = &self.history;
            let cell = self.fresh.argmax_where(|c| !history.contains(&c))?;
            self.fallback_steps += 1;
            cell
        } else {
            self.working.argmax()
        };
        self.history.push(cell);
        Some(cell)
    }
}

/// Full record of a rollout.
#[derive(Debug, Clone, PartialEq)]
pub struct RolloutTrace {
    pub scanpath: Scanpath,
    pub cells: Vec<GridCell>,
    /// Steps where the suppressed map was entirely zero.
    pub fallback_steps: usize,
}

pub fn rollout_with_trace(map: &SaliencyMap, cfg: &RolloutConfig) -> Result<RolloutTrace> {
    let mut state = IorState::new(map, cfg)?;
    for _ in 0..cfg.n_fixations {
        if state.step().is_none() {
            break;
        }
    }
    let fixations = state
        .history
        .iter()
        .map(|&c| {
            let (x, y) = map.cell_center(c);
            crate::types::Fixation::new(x, y)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RolloutTrace {
        scanpath: Scanpath::new(fixations, "", Some("model".into()))?,
        fallback_steps: state.fallback_steps,
        cells: state.history,
    })
}

/// Predicts `cfg.n_fixations` fixations by greedy argmax with IOR masking.
pub fn rollout(map: &SaliencyMap, cfg: &RolloutConfig) -> Result<Scanpath> {
    rollout_with_trace(map, cfg).map(|t| t.scanpath)
}
