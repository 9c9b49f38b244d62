use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::types::GuiType;

/// Paired Student's t-test on `x - y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: usize,
    /// Two-tailed.
    pub p_value: f64,
    /// Paired effect size `d_z = mean(d) / sd(d)`.
    pub cohens_d: f64,
    pub n_pairs: usize,
    pub mean_difference: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation with `n - 1` in the denominator; 0 for fewer
/// than two values.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

pub fn paired_t_test(x: &[f64], y: &[f64]) -> Result<PairedTestResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewSamples { required: 2, found: n });
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite {
            field: "paired difference",
            value: f64::NAN,
        });
    }
    let m = mean(&diffs);
    let sd = sample_sd(&diffs);
    if !(sd > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let t = m / (sd / (n as f64).sqrt());
    let df = n - 1;
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(PairedTestResult {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: p,
        cohens_d: m / sd,
        n_pairs: n,
        mean_difference: m,
    })
}

/// GUI type of a result row, or the pooled group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GuiGroup {
    Type(GuiType),
    All,
}

impl fmt::Display for GuiGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuiGroup::Type(t) => t.fmt(f),
            GuiGroup::All => f.write_str("all"),
        }
    }
}

impl From<GuiGroup> for String {
    fn from(g: GuiGroup) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for GuiGroup {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl std::str::FromStr for GuiGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            Ok(GuiGroup::All)
        } else {
            s.parse().map(GuiGroup::Type)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

impl Summary {
    /// A single value has no spread; its sd is reported as 0.
    pub fn is_degenerate(&self) -> bool {
        self.n < 2
    }
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    Some(Summary {
        mean: mean(values),
        sd: sample_sd(values),
        n: values.len(),
    })
}

/// Mean ± sd per `(key, GUI type)` plus a pooled `All` group per key.
pub fn aggregate<K: Ord + Clone + fmt::Debug>(
    samples: &[(K, GuiType, f64)],
) -> Result<BTreeMap<(K, GuiGroup), Summary>> {
    let mut groups: BTreeMap<(K, GuiGroup), Vec<f64>> = BTreeMap::new();
    for (k, t, v) in samples {
        groups.entry((k.clone(), GuiGroup::Type(*t))).or_default().push(*v);
        groups.entry((k.clone(), GuiGroup::All)).or_default().push(*v);
    }
    groups
        .into_iter()
        .map(|(key, vals)| {
            summarize(&vals)
                .map(|s| (key.clone(), s))
                .ok_or_else(|| Error::EmptyGroup(format!("{key:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_t() {
        let r = paired_t_test(&[1.0, 2.0, 3.0, 4.0], &[0.0; 4]).unwrap();
        assert_eq!(r.degrees_of_freedom, 3);
        assert!((r.mean_difference - 2.5).abs() < 1e-15);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((sd - 1.2910).abs() < 1e-4);
        assert!((r.t_statistic - 2.5 / (sd / 2.0)).abs() < 1e-12);
        assert!((r.t_statistic - 3.873).abs() < 1e-3);
        assert!((r.cohens_d - 2.5 / sd).abs() < 1e-12);
    }

    #[test]
    fn no_systematic_difference() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [1.001, 1.999, 3.001, 3.999, 5.001, 5.999];
        let r = paired_t_test(&x, &y).unwrap();
        assert!(r.t_statistic.abs() < 1e-9);
        assert!((r.p_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn df_follows_pair_count() {
        let x: Vec<f64> = (0..108).map(|i| (i as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = (0..108).map(|i| (i as f64 * 0.11).cos()).collect();
        assert_eq!(paired_t_test(&x, &y).unwrap().degrees_of_freedom, 107);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(paired_t_test(&[1.0, 2.0], &[1.0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(paired_t_test(&[1.0], &[0.0]), Err(Error::TooFewSamples { .. })));
        assert!(matches!(
            paired_t_test(&[1.0, 2.0, 3.0], &[0.0, 1.0, 2.0]),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn antisymmetric_in_arguments() {
        let x = [0.3, 1.2, 2.2, 0.1, 5.0];
        let y = [0.1, 1.0, 2.9, 0.0, 4.1];
        let a = paired_t_test(&x, &y).unwrap();
        let b = paired_t_test(&y, &x).unwrap();
        assert_eq!(a.t_statistic, -b.t_statistic);
        assert_eq!(a.p_value, b.p_value);
    }

    #[test]
    fn summaries() {
        let s = summarize(&[2.0, 4.0]).unwrap();
        assert_eq!(s.mean, 3.0);
        assert!((s.sd - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.sd - 1.4142).abs() < 1e-4);
        let one = summarize(&[5.0]).unwrap();
        assert_eq!((one.mean, one.sd, one.n), (5.0, 0.0, 1));
        assert!(one.is_degenerate());
        assert_eq!(summarize(&[7.0; 5]).unwrap().sd, 0.0);
        assert!(summarize(&[]).is_none());
    }

    #[test]
    fn aggregate_adds_pooled_group() {
        let rows = vec![
            ("c1", GuiType::Web, 1.0),
            ("c1", GuiType::Web, 3.0),
            ("c1", GuiType::Poster, 5.0),
        ];
        let agg = aggregate(&rows).unwrap();
        assert_eq!(agg.len(), 3);
        assert_eq!(agg[&("c1", GuiGroup::Type(GuiType::Web))].mean, 2.0);
        assert_eq!(agg[&("c1", GuiGroup::Type(GuiType::Poster))].n, 1);
        assert_eq!(agg[&("c1", GuiGroup::All)].mean, 3.0);
        assert_eq!(agg[&("c1", GuiGroup::All)].n, 3);
    }
}
