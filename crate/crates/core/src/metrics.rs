//! Community-quality metrics: CPS, LDR, CPF and F1.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{PcsError, Result};
use crate::graph::{GpTree, PTree, ProfiledGraph, VertexId};
use crate::query::Community;

/// Unit-cost tree edit distance between two subtrees of one GP-tree.
///
/// Both trees are induced rooted subtrees of the same taxonomy, so the
/// cheapest edit script deletes `a ∖ b` and inserts `b ∖ a`.
pub fn tree_edit_distance(a: &PTree, b: &PTree) -> usize {
    a.symmetric_difference_len(b)
}

fn pair_distance(a: &PTree, b: &PTree) -> f64 {
    let union = a.len() + b.len() - a.intersection(b).len();
    if union == 0 {
        0.0
    } else {
        tree_edit_distance(a, b) as f64 / union as f64
    }
}

/// Mean normalized TED over all ordered member pairs (diagonal included, at
/// zero) of one community.
pub fn community_dissimilarity(c: &Community, g: &ProfiledGraph) -> f64 {
    let trees: Vec<&PTree> = c.vertices.iter().map(|&v| g.ptree(v)).collect();
    let s = trees.len() as f64;
    let mut sum = 0.0;
    for (i, a) in trees.iter().enumerate() {
        for b in &trees[i + 1..] {
            sum += 2.0 * pair_distance(a, b);
        }
    }
    sum / (s * s)
}

/// Community profile similarity: one minus the mean, over communities, of
/// [`community_dissimilarity`].
pub fn cps(result: &[Community], g: &ProfiledGraph) -> Result<f64> {
    if result.is_empty() {
        return Err(PcsError::Metric("CPS of an empty result".into()));
    }
    let total: f64 = result.iter().map(|c| community_dissimilarity(c, g)).sum();
    Ok(1.0 - total / result.len() as f64)
}

fn labels_at_level(result: &[Community], gp: &GpTree, level: u32) -> usize {
    result
        .iter()
        .map(|c| c.mct.iter().filter(|&l| gp.depth(l) == level).count())
        .sum()
}

/// Level-diversity ratio of `other` against `pcs`, per level of `T(q)`.
/// Levels where `pcs` has no label are skipped.
pub fn ldr_levels(
    tq: &PTree,
    other: &[Community],
    pcs: &[Community],
    gp: &GpTree,
) -> Vec<Option<f64>> {
    let depth = tq.iter().map(|l| gp.depth(l)).max().unwrap_or(0);
    (1..=depth)
        .map(|i| {
            let den = labels_at_level(pcs, gp, i);
            (den > 0).then(|| labels_at_level(other, gp, i) as f64 / den as f64)
        })
        .collect()
}

pub fn ldr(tq: &PTree, other: &[Community], pcs: &[Community], gp: &GpTree) -> Result<f64> {
    if pcs.is_empty() {
        return Err(PcsError::Metric("LDR against an empty PCS result".into()));
    }
    let levels: Vec<f64> = ldr_levels(tq, other, pcs, gp)
        .into_iter()
        .flatten()
        .collect();
    if levels.is_empty() {
        return Err(PcsError::Metric(
            "LDR has no level with a non-zero denominator".into(),
        ));
    }
    Ok(levels.iter().sum::<f64>() / levels.len() as f64)
}

/// Fraction of community members holding each node of `T(q)`, averaged over
/// nodes; one value per community.
pub fn cpf_per_community(tq: &PTree, result: &[Community], g: &ProfiledGraph) -> Vec<f64> {
    result
        .iter()
        .map(|c| {
            let size = c.vertices.len() as f64;
            let held: usize = tq
                .iter()
                .map(|j| {
                    c.vertices
                        .iter()
                        .filter(|&&v| g.ptree(v).contains(j))
                        .count()
                })
                .sum();
            held as f64 / (size * tq.len() as f64)
        })
        .collect()
}

/// Community profile frequency of `T(q)` over `result`.
pub fn cpf(tq: &PTree, result: &[Community], g: &ProfiledGraph) -> Result<f64> {
    if result.is_empty() {
        return Err(PcsError::Metric("CPF of an empty result".into()));
    }
    if tq.is_empty() {
        return Err(PcsError::Metric("CPF with an empty query profile".into()));
    }
    if result.iter().any(|c| c.vertices.is_empty()) {
        return Err(PcsError::Metric("CPF of an empty community".into()));
    }
    let per = cpf_per_community(tq, result, g);
    Ok(per.iter().sum::<f64>() / per.len() as f64)
}

/// F1 of two vertex sets (sorted or not).
pub fn f1_pair(found: &[VertexId], truth: &[VertexId]) -> f64 {
    let truth: HashSet<VertexId> = truth.iter().copied().collect();
    let hit = found.iter().filter(|v| truth.contains(v)).count();
    if hit == 0 {
        return 0.0;
    }
    let p = hit as f64 / found.len() as f64;
    let r = hit as f64 / truth.len() as f64;
    2.0 * p * r / (p + r)
}

fn best_match(sets: &[Vec<VertexId>], against: &[Vec<VertexId>]) -> Vec<f64> {
    sets.iter()
        .map(|s| against.iter().map(|t| f1_pair(s, t)).fold(0.0, f64::max))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct F1Breakdown {
    /// Best F1 of each found community against the truth circles.
    pub found_to_truth: Vec<f64>,
    /// Best F1 of each truth circle against the found communities.
    pub truth_to_found: Vec<f64>,
}

/// Mean over found communities of their best F1 against any truth circle.
pub fn f1(found: &[Community], truth: &[Vec<VertexId>]) -> Result<(f64, F1Breakdown)> {
    if truth.is_empty() {
        return Err(PcsError::Metric("F1 against an empty truth list".into()));
    }
    let sets: Vec<Vec<VertexId>> = found.iter().map(|c| c.vertices.clone()).collect();
    let breakdown = F1Breakdown {
        found_to_truth: best_match(&sets, truth),
        truth_to_found: best_match(truth, &sets),
    };
    let score = if sets.is_empty() {
        0.0
    } else {
        breakdown.found_to_truth.iter().sum::<f64>() / sets.len() as f64
    };
    Ok((score, breakdown))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub cps: Option<f64>,
    pub ldr: Option<f64>,
    pub cpf: Option<f64>,
    pub f1: Option<f64>,
    pub cps_per_community: Vec<f64>,
    pub ldr_per_level: Vec<Option<f64>>,
    pub cpf_per_community: Vec<f64>,
    pub f1_breakdown: Option<F1Breakdown>,
}

/// Every metric computable from the inputs. `other` enables LDR and `truth`
/// enables F1; metrics undefined on the inputs are left empty.
pub fn report(
    g: &ProfiledGraph,
    q: VertexId,
    result: &[Community],
    other: Option<&[Community]>,
    truth: Option<&[Vec<VertexId>]>,
) -> Result<MetricReport> {
    g.check_vertex(q)?;
    let tq = g.ptree(q);
    let mut r = MetricReport {
        cps: cps(result, g).ok(),
        cpf: cpf(tq, result, g).ok(),
        cps_per_community: result
            .iter()
            .map(|c| 1.0 - community_dissimilarity(c, g))
            .collect(),
        ..MetricReport::default()
    };
    if !tq.is_empty() {
        r.cpf_per_community = cpf_per_community(tq, result, g);
    }
    if let Some(other) = other {
        r.ldr = ldr(tq, other, result, g.gptree()).ok();
        r.ldr_per_level = ldr_levels(tq, other, result, g.gptree());
    }
    if let Some(truth) = truth {
        let (score, breakdown) = f1(result, truth)?;
        r.f1 = Some(score);
        r.f1_breakdown = Some(breakdown);
    }
    Ok(r)
}

impl MetricReport {
    /// `key=value` lines; undefined metrics print as `nan`.
    pub fn to_text(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), |x| format!("{x:.6}"));
        format!(
            "cps={}\nldr={}\ncpf={}\nf1={}\n",
            fmt(self.cps),
            fmt(self.ldr),
            fmt(self.cpf),
            fmt(self.f1)
        )
    }
}

/// Parses ground-truth circles: one per line, vertex ids separated by
/// whitespace or commas. `#` lines and blank lines are ignored.
pub fn parse_truth(text: &str) -> Result<Vec<Vec<VertexId>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut circle = Vec::new();
        for tok in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let v = tok
                .parse::<VertexId>()
                .map_err(|_| PcsError::parse("truth", i + 1, format!("bad vertex id {tok:?}")))?;
            circle.push(v);
        }
        circle.sort_unstable();
        circle.dedup();
        out.push(circle);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::graph::LabelId;

    fn t(ids: &[u32]) -> PTree {
        PTree::from_closed(ids.iter().map(|&i| LabelId(i)).collect())
    }

    fn community(vertices: &[VertexId]) -> Community {
        Community {
            vertices: vertices.to_vec(),
            mct: PTree::empty(),
        }
    }

    #[test]
    fn ted_examples() {
        assert_eq!(tree_edit_distance(&t(&[0, 1]), &t(&[0, 1])), 0);
        assert_eq!(tree_edit_distance(&t(&[0]), &t(&[0, 1])), 1);
        assert_eq!(tree_edit_distance(&t(&[0, 1, 2]), &t(&[0, 4])), 3);
    }

    #[test]
    fn cps_two_members() {
        // A = {r, CM, ML, AI} (a = 4), F = {r, HW} (b = 2): share only r.
        let g = fixture::graph();
        let c = community(&[1, 5]);
        let (a, b) = (4.0, 2.0);
        let expected = 1.0 - (2.0 * (a + b - 2.0) / (a + b - 1.0)) / 4.0;
        assert!((cps(&[c], &g).unwrap() - expected).abs() < 1e-12);
        assert_eq!(cps(&[community(&[1, 2])], &g).unwrap(), 1.0);
    }

    #[test]
    fn cpf_examples() {
        let g = fixture::graph();
        let d = fixture::vertex("D");
        assert_eq!(cpf(g.ptree(d), &[community(&[3])], &g).unwrap(), 1.0);
        // B holds every node of T(B); F holds only r of it.
        let tb = g.ptree(1).clone();
        let got = cpf(&tb, &[community(&[1, 5])], &g).unwrap();
        assert!((got - (4.0 + 1.0) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn ldr_examples() {
        let g = fixture::graph();
        let gp = g.gptree();
        let tq = g.ptree(3);
        let pcs = vec![
            Community {
                vertices: vec![1, 2, 3],
                mct: t(&[0, 1, 2, 3]),
            },
            Community {
                vertices: vec![0, 3, 4],
                mct: t(&[0, 4, 5, 6]),
            },
        ];
        assert_eq!(ldr(tq, &pcs, &pcs, gp).unwrap(), 1.0);
        let flat = vec![Community {
            vertices: vec![3],
            mct: t(&[0]),
        }];
        assert!(ldr(tq, &flat, &pcs, gp).unwrap() < 1.0);
        let none = vec![Community {
            vertices: vec![3],
            mct: PTree::empty(),
        }];
        assert!(ldr(tq, &pcs, &none, gp).is_err());
    }

    #[test]
    fn f1_examples() {
        let truth = vec![vec![0, 1, 2], vec![3, 4, 5]];
        assert_eq!(
            f1(&[community(&[0, 1, 2]), community(&[3, 4, 5])], &truth)
                .unwrap()
                .0,
            1.0
        );
        assert_eq!(f1(&[community(&[7, 8])], &truth).unwrap().0, 0.0);
        let (score, _) = f1(&[community(&[0, 1, 2, 3, 4, 5])], &truth).unwrap();
        assert!((score - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn truth_parse_errors_name_the_line() {
        assert_eq!(
            parse_truth("0 1\n# c\n2,3\n").unwrap(),
            vec![vec![0, 1], vec![2, 3]]
        );
        let err = parse_truth("0 1\nx 2\n").unwrap_err().to_string();
        assert!(err.contains(":2:"), "{err}");
    }
}
