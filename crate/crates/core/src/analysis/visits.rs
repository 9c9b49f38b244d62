use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::types::{ElementBox, ElementCategory, Scanpath};

/// Minimum number of intervening fixations elsewhere before a return to an
/// element counts as a revisit.
pub const REVISIT_GAP: usize = 3;

/// Element hit by each fixation, `None` for background.
pub type ElementSequence = Vec<Option<String>>;

/// Assigns each fixation to the smallest-area box containing it.
///
/// Ties in area go to the lexicographically smallest element id, so the
/// result does not depend on box order.
pub fn map_fixations_to_elements(sp: &Scanpath, boxes: &[ElementBox]) -> ElementSequence {
    sp.fixations()
        .iter()
        .map(|f| {
            boxes
                .iter()
                .filter(|b| b.contains(f))
                .min_by(|a, b| {
                    a.area()
                        .total_cmp(&b.area())
                        .then_with(|| a.element_id.cmp(&b.element_id))
                })
                .map(|b| b.element_id.clone())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryVisits {
    /// Elements in the category present on the image.
    pub element_count: usize,
    pub visited_count: usize,
    pub revisited_count: usize,
    /// `visited_count / element_count`, 0 for an empty category.
    pub visited_ratio: f64,
    /// `revisited_count / element_count`, 0 for an empty category.
    pub revisited_ratio: f64,
}

impl CategoryVisits {
    fn from_counts(element_count: usize, visited_count: usize, revisited_count: usize) -> Self {
        let ratio = |k: usize| if element_count == 0 { 0.0 } else { k as f64 / element_count as f64 };
        Self {
            element_count,
            visited_count,
            revisited_count,
            visited_ratio: ratio(visited_count),
            revisited_ratio: ratio(revisited_count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisitStats {
    pub per_category: BTreeMap<ElementCategory, CategoryVisits>,
    pub visited: BTreeSet<String>,
    pub revisited: BTreeSet<String>,
}

impl VisitStats {
    pub fn category(&self, c: ElementCategory) -> CategoryVisits {
        self.per_category.get(&c).copied().unwrap_or_default()
    }

    /// Sums counts over several images and recomputes the ratios.
    pub fn pooled<'a>(stats: impl IntoIterator<Item = &'a VisitStats>) -> BTreeMap<ElementCategory, CategoryVisits> {
        let mut sums: BTreeMap<ElementCategory, (usize, usize, usize)> = BTreeMap::new();
        for s in stats {
            for (cat, v) in &s.per_category {
                let e = sums.entry(*cat).or_default();
                e.0 += v.element_count;
                e.1 += v.visited_count;
                e.2 += v.revisited_count;
            }
        }
        sums.into_iter()
            .map(|(c, (n, v, r))| (c, CategoryVisits::from_counts(n, v, r)))
            .collect()
    }
}

/// Visit and revisit counts per element category.
///
/// Consecutive fixations on the same element collapse into one visit event
/// first. An element is revisited when one of its visit events follows the
/// previous one with at least [`REVISIT_GAP`] fixations in between, counting
/// background fixations.
pub fn visit_revisit(seq: &[Option<String>], boxes: &[ElementBox]) -> VisitStats {
    let mut events: Vec<&Option<String>> = Vec::with_capacity(seq.len());
    for e in seq {
        let dup = matches!((events.last(), e), (Some(Some(prev)), Some(cur)) if prev == cur);
        if !dup {
            events.push(e);
        }
    }

    let mut last_seen: BTreeMap<&str, usize> = BTreeMap::new();
    let mut visited = BTreeSet::new();
    let mut revisited = BTreeSet::new();
    for (pos, e) in events.iter().enumerate() {
        let Some(id) = e else { continue };
        if let Some(&prev) = last_seen.get(id.as_str()) {
            if pos - prev - 1 >= REVISIT_GAP {
                revisited.insert(id.clone());
            }
        }
        last_seen.insert(id, pos);
        visited.insert(id.clone());
    }

    let mut per_category = BTreeMap::new();
    for cat in ElementCategory::ALL {
        let ids: BTreeSet<&str> = boxes
            .iter()
            .filter(|b| b.category == cat)
            .map(|b| b.element_id.as_str())
            .collect();
        let v = ids.iter().filter(|id| visited.contains(**id)).count();
        let r = ids.iter().filter(|id| revisited.contains(**id)).count();
        per_category.insert(cat, CategoryVisits::from_counts(ids.len(), v, r));
    }
    VisitStats {
        per_category,
        visited,
        revisited,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ElementCategory::*;

    fn ids(seq: &[&str]) -> Vec<Option<String>> {
        seq.iter()
            .map(|s| if *s == "-" { None } else { Some(s.to_string()) })
            .collect()
    }

    fn boxes() -> Vec<ElementBox> {
        vec![
            ElementBox::new(0.0, 0.0, 0.2, 0.2, Image, "E1").unwrap(),
            ElementBox::new(0.3, 0.0, 0.5, 0.2, Text, "E2").unwrap(),
            ElementBox::new(0.6, 0.0, 0.8, 0.2, Text, "E3").unwrap(),
            ElementBox::new(0.0, 0.5, 0.2, 0.7, Face, "E4").unwrap(),
        ]
    }

    #[test]
    fn mapping_picks_innermost_box() {
        let outer = ElementBox::new(0.2, 0.2, 0.8, 0.8, Image, "outer").unwrap();
        let inner = ElementBox::new(0.4, 0.4, 0.6, 0.6, Text, "inner").unwrap();
        let sp = Scanpath::from_points(&[(0.5, 0.5), (0.3, 0.3), (0.9, 0.9)]).unwrap();
        let seq = map_fixations_to_elements(&sp, &[outer.clone(), inner.clone()]);
        assert_eq!(seq, ids(&["inner", "outer", "-"]));
        assert_eq!(map_fixations_to_elements(&sp, &[inner, outer]), seq);
    }

    #[test]
    fn single_box_and_background() {
        let b = ElementBox::new(0.4, 0.4, 0.6, 0.6, Text, "only").unwrap();
        let sp = Scanpath::from_points(&[(0.5, 0.5), (0.1, 0.9)]).unwrap();
        assert_eq!(map_fixations_to_elements(&sp, &[b]), ids(&["only", "-"]));
    }

    #[test]
    fn three_intervening_fixations_make_a_revisit() {
        let s = visit_revisit(&ids(&["E1", "E2", "E3", "E4", "E1"]), &boxes());
        assert!(s.revisited.contains("E1"));
        assert_eq!(s.category(Image).revisited_count, 1);
        assert_eq!(s.category(Text).visited_count, 2);
        assert_eq!(s.category(Face).visited_ratio, 1.0);
    }

    #[test]
    fn one_intervening_fixation_is_not_enough() {
        let s = visit_revisit(&ids(&["E1", "E2", "E1"]), &boxes());
        assert!(s.visited.contains("E1"));
        assert!(s.revisited.is_empty());
    }

    #[test]
    fn leading_duplicates_collapse() {
        let s = visit_revisit(&ids(&["E1", "E1", "E2", "E3", "E4", "E1"]), &boxes());
        assert_eq!(s.revisited.len(), 1);
        assert_eq!(s.category(Image).revisited_count, 1);
    }

    #[test]
    fn empty_category_has_zero_ratios() {
        let only_text = vec![ElementBox::new(0.3, 0.0, 0.5, 0.2, Text, "E2").unwrap()];
        let s = visit_revisit(&ids(&["E2"]), &only_text);
        assert_eq!(s.category(Face), CategoryVisits::default());
        assert_eq!(s.category(Text).visited_ratio, 1.0);
    }
}
