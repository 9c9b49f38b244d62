//! Scanpath comparison metrics: DTW, Eyenalysis, and the cross-recurrence
//! measures Determinism and Laminarity.
//!
//! Distances are Euclidean in normalized coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Fixation, Scanpath};

fn non_empty(a: &Scanpath, b: &Scanpath) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        Err(Error::EmptyScanpath)
    } else {
        Ok(())
    }
}

/// Dynamic time warping distance: the minimum summed point distance over
/// all monotone, continuous alignments that start at both first points and
/// end at both last points. Not normalized by path length.
pub fn dtw(a: &Scanpath, b: &Scanpath) -> Result<f64> {
    non_empty(a, b)?;
    Ok(dtw_points(a.fixations(), b.fixations()))
}

fn dtw_points(a: &[Fixation], b: &[Fixation]) -> f64 {
    let m = b.len();
    let mut prev = vec![0.0f64; m];
    let mut cur = vec![0.0; m];
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            let d = p.distance(q);
            cur[j] = d + match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(cur[j - 1]).min(prev[j - 1]),
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

/// Mean nearest-neighbour distance after mapping every fixation of each
/// scanpath onto the closest fixation of the other.
pub fn eyenalysis(a: &Scanpath, b: &Scanpath) -> Result<f64> {
    non_empty(a, b)?;
    let nearest = |p: &Fixation, other: &[Fixation]| {
        other.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min)
    };
    let fa = a.fixations();
    let fb = b.fixations();
    let ab: f64 = fa.iter().map(|p| nearest(p, fb)).sum();
    let ba: f64 = fb.iter().map(|q| nearest(q, fa)).sum();
    Ok((ab + ba) / (fa.len() + fb.len()) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceConfig {
    /// Recurrence threshold in normalized units.
    pub rho: f64,
    /// Minimum run length for diagonal, horizontal and vertical lines.
    pub min_line_len: usize,
}

impl Default for RecurrenceConfig {
    fn default() -> Self {
        Self {
            rho: 0.1,
            min_line_len: 2,
        }
    }
}

impl RecurrenceConfig {
    pub fn new(rho: f64, min_line_len: usize) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::OutOfRange {
                field: "rho",
                value: rho,
                expected: "(0, inf)",
            });
        }
        if min_line_len < 2 {
            return Err(Error::OutOfRange {
                field: "min_line_len",
                value: min_line_len as f64,
                expected: "[2, inf)",
            });
        }
        Ok(Self { rho, min_line_len })
    }
}

/// Dense boolean matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
}

impl RecurrenceMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut cells = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                cells.push(f(i, j));
            }
        }
        Self { rows, cols, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.cols + j]
    }

    pub fn recurrences(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Marks every recurrent cell lying on a run of at least `min_len`
    /// consecutive recurrences along direction `(di, dj)`, starting from
    /// each cell in `starts`.
    fn mark_runs(
        &self,
        starts: impl Iterator<Item = (usize, usize)>,
        (di, dj): (usize, usize),
        min_len: usize,
        marks: &mut [bool],
    ) {
        for (si, sj) in starts {
            let (mut i, mut j) = (si, sj);
            let mut run_start = None;
            loop {
                let inside = i < self.rows && j < self.cols;
                let on = inside && self.get(i, j);
                match (on, run_start) {
                    (true, None) => run_start = Some((i, j)),
                    (false, Some((ri, rj))) => {
                        let len = if di > 0 { i - ri } else { j - rj };
                        if len >= min_len {
                            for k in 0..len {
                                marks[(ri + k * di) * self.cols + rj + k * dj] = true;
                            }
                        }
                        run_start = None;
                    }
                    _ => {}
                }
                if !inside {
                    break;
                }
                i += di;
                j += dj;
            }
        }
    }

    /// Recurrent points on diagonal runs of length `>= min_len`, each counted
    /// once.
    pub fn diagonal_points(&self, min_len: usize) -> usize {
        let mut marks = vec![false; self.cells.len()];
        let starts = (0..self.rows)
            .map(|i| (i, 0))
            .chain((1..self.cols).map(|j| (0, j)));
        self.mark_runs(starts, (1, 1), min_len, &mut marks);
        marks.iter().filter(|&&m| m).count()
    }

    pub fn horizontal_points(&self, min_len: usize) -> usize {
        let mut marks = vec![false; self.cells.len()];
        self.mark_runs((0..self.rows).map(|i| (i, 0)), (0, 1), min_len, &mut marks);
        marks.iter().filter(|&&m| m).count()
    }

    pub fn vertical_points(&self, min_len: usize) -> usize {
        let mut marks = vec![false; self.cells.len()];
        self.mark_runs((0..self.cols).map(|j| (0, j)), (1, 0), min_len, &mut marks);
        marks.iter().filter(|&&m| m).count()
    }

    /// `100 * diagonal points / recurrences`, or 0 without recurrences.
    pub fn determinism(&self, min_len: usize) -> f64 {
        let total = self.recurrences();
        if total == 0 {
            return 0.0;
        }
        100.0 * self.diagonal_points(min_len) as f64 / total as f64
    }

    /// `100 * (horizontal + vertical points) / (2 * recurrences)`, or 0
    /// without recurrences.
    pub fn laminarity(&self, min_len: usize) -> f64 {
        let total = self.recurrences();
        if total == 0 {
            return 0.0;
        }
        let hv = self.horizontal_points(min_len) + self.vertical_points(min_len);
        100.0 * hv as f64 / (2 * total) as f64
    }
}

/// `M[i][j]` is set when fixation `i` of `a` and fixation `j` of `b` lie
/// within `rho` of each other.
pub fn cross_recurrence_matrix(a: &Scanpath, b: &Scanpath, cfg: &RecurrenceConfig) -> RecurrenceMatrix {
    let (fa, fb) = (a.fixations(), b.fixations());
    RecurrenceMatrix::from_fn(fa.len(), fb.len(), |i, j| fa[i].distance(&fb[j]) <= cfg.rho)
}

pub fn determinism(a: &Scanpath, b: &Scanpath, cfg: &RecurrenceConfig) -> Result<f64> {
    non_empty(a, b)?;
    Ok(cross_recurrence_matrix(a, b, cfg).determinism(cfg.min_line_len))
}

pub fn laminarity(a: &Scanpath, b: &Scanpath, cfg: &RecurrenceConfig) -> Result<f64> {
    non_empty(a, b)?;
    Ok(cross_recurrence_matrix(a, b, cfg).laminarity(cfg.min_line_len))
}

/// The four metrics for one (predicted, ground truth) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub dtw: f64,
    pub eyenalysis: f64,
    pub determinism_pct: f64,
    pub laminarity_pct: f64,
    pub recurrence_count: usize,
}

/// Names and accessors of the reported metrics, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Dtw,
    Eyenalysis,
    Determinism,
    Laminarity,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Dtw, Metric::Eyenalysis, Metric::Determinism, Metric::Laminarity];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Dtw => "dtw",
            Metric::Eyenalysis => "eyenalysis",
            Metric::Determinism => "determinism",
            Metric::Laminarity => "laminarity",
        }
    }

    pub fn of(&self, r: &MetricReport) -> f64 {
        match self {
            Metric::Dtw => r.dtw,
            Metric::Eyenalysis => r.eyenalysis,
            Metric::Determinism => r.determinism_pct,
            Metric::Laminarity => r.laminarity_pct,
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings for [`evaluate_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub recurrence: RecurrenceConfig,
    /// Multiplier applied to the reported DTW value. 1.0 keeps normalized
    /// units.
    pub dtw_scale: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            recurrence: RecurrenceConfig::default(),
            dtw_scale: 1.0,
        }
    }
}

pub fn evaluate_pair(pred: &Scanpath, truth: &Scanpath, cfg: &EvalConfig) -> Result<MetricReport> {
    non_empty(pred, truth)?;
    let m = cross_recurrence_matrix(pred, truth, &cfg.recurrence);
    let l = cfg.recurrence.min_line_len;
    Ok(MetricReport {
        dtw: dtw(pred, truth)? * cfg.dtw_scale,
        eyenalysis: eyenalysis(pred, truth)?,
        determinism_pct: m.determinism(l),
        laminarity_pct: m.laminarity(l),
        recurrence_count: m.recurrences(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(points: &[(f64, f64)]) -> Scanpath {
        Scanpath::from_points(points).unwrap()
    }

    fn matrix(rows: &[&str]) -> RecurrenceMatrix {
        let cols = rows[0].len();
        RecurrenceMatrix::from_fn(rows.len(), cols, |i, j| rows[i].as_bytes()[j] == b'1')
    }

    #[test]
    fn dtw_examples() {
        let a = sp(&[(0.1, 0.2), (0.5, 0.5), (0.9, 0.1)]);
        assert_eq!(dtw(&a, &a).unwrap(), 0.0);
        assert_eq!(dtw(&sp(&[(0.0, 0.0)]), &sp(&[(0.3, 0.4)])).unwrap(), 0.5);
        assert_eq!(dtw(&sp(&[(0.0, 0.0), (1.0, 0.0)]), &sp(&[(0.0, 0.0)])).unwrap(), 1.0);
    }

    #[test]
    fn eyenalysis_examples() {
        let a = sp(&[(0.0, 0.0), (1.0, 1.0)]);
        let b = sp(&[(0.0, 0.0)]);
        let v = eyenalysis(&a, &b).unwrap();
        assert!((v - 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert!((v - 0.4714).abs() < 1e-4);
        assert_eq!(eyenalysis(&a, &a).unwrap(), 0.0);
        assert_eq!(eyenalysis(&b, &a).unwrap(), v);
    }

    #[test]
    fn recurrence_matrix_examples() {
        let cfg = RecurrenceConfig::new(0.1, 2).unwrap();
        let a = sp(&[(0.1, 0.1), (0.5, 0.5), (0.9, 0.9)]);
        let m = cross_recurrence_matrix(&a, &a, &cfg);
        assert_eq!(m, matrix(&["100", "010", "001"]));

        let same = sp(&[(0.3, 0.3); 3]);
        assert_eq!(cross_recurrence_matrix(&same, &same, &cfg), matrix(&["111", "111", "111"]));

        let a = sp(&[(0.0, 0.0), (0.5, 0.0)]);
        let b = sp(&[(0.0, 0.05)]);
        assert_eq!(cross_recurrence_matrix(&a, &b, &cfg), matrix(&["1", "0"]));
    }

    #[test]
    fn determinism_examples() {
        let cfg = RecurrenceConfig::new(0.05, 2).unwrap();
        let a = sp(&[(0.1, 0.1), (0.5, 0.5), (0.9, 0.9)]);
        assert_eq!(determinism(&a, &a, &cfg).unwrap(), 100.0);

        assert_eq!(matrix(&["000", "010", "000"]).determinism(2), 0.0);
        let m = matrix(&["1000", "0100", "0001", "0010"]);
        // (0,0)-(1,1) is a run of two; (2,3) and (3,2) are isolated.
        assert_eq!(m.recurrences(), 4);
        assert_eq!(m.determinism(2), 50.0);
        assert_eq!(RecurrenceMatrix::from_fn(2, 2, |_, _| false).determinism(2), 0.0);
    }

    #[test]
    fn laminarity_examples() {
        assert_eq!(matrix(&["100", "010", "001"]).laminarity(2), 0.0);

        let cfg = RecurrenceConfig::new(0.1, 2).unwrap();
        let a = sp(&[(0.2, 0.2), (0.2, 0.2), (0.2, 0.2), (0.2, 0.2)]);
        let b = sp(&[(0.2, 0.2)]);
        let m = cross_recurrence_matrix(&a, &b, &cfg);
        assert_eq!((m.rows(), m.cols()), (4, 1));
        assert_eq!(m.vertical_points(2), 4);
        assert_eq!(m.horizontal_points(2), 0);
        assert_eq!(laminarity(&a, &b, &cfg).unwrap(), 50.0);

        for k in 2..6 {
            let ones = RecurrenceMatrix::from_fn(k, k, |_, _| true);
            assert_eq!(ones.laminarity(2), 100.0);
        }
    }

    #[test]
    fn every_cell_on_some_diagonal_run() {
        // Runs of 3, 2 and 2 cover all seven recurrences.
        let m = matrix(&["110", "111", "011"]);
        assert_eq!(m.diagonal_points(2), 7);
        assert_eq!(m.recurrences(), 7);
    }

    #[test]
    fn longer_min_line_len() {
        let m = matrix(&["100", "010", "001"]);
        assert_eq!(m.determinism(3), 100.0);
        assert_eq!(m.determinism(4), 0.0);
    }

    #[test]
    fn report_scales_only_dtw() {
        let a = sp(&[(0.0, 0.0), (1.0, 0.0)]);
        let b = sp(&[(0.0, 0.0)]);
        let cfg = EvalConfig {
            dtw_scale: 2.25,
            ..EvalConfig::default()
        };
        let r = evaluate_pair(&a, &b, &cfg).unwrap();
        assert_eq!(r.dtw, 2.25);
        assert_eq!(r.eyenalysis, 1.0 / 3.0);
        assert_eq!(r.recurrence_count, 1);
    }

    #[test]
    fn recurrence_config_domain() {
        assert!(RecurrenceConfig::new(0.0, 2).is_err());
        assert!(RecurrenceConfig::new(f64::NAN, 2).is_err());
        assert!(RecurrenceConfig::new(0.1, 1).is_err());
    }
}
