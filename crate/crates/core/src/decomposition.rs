//! Path decompositions and the predicates the rest of the toolkit is tested
//! against: validity, width, connectivity variants, bag intervals and the
//! in/pre/post classification of branches relative to a decomposition.
//!
//! Bag indices in every public report are 1-based; internal storage is
//! 0-based.

use crate::graph::Graph;
use crate::set::VertexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("set {0} does not intersect any bag")]
    NotPresent(String),
    #[error("occurrences of {set} are not contiguous (bags {first} and {again} with gap at {gap})")]
    NotContiguous {
        set: String,
        first: usize,
        gap: usize,
        again: usize,
    },
    #[error("{0} has no in-branch")]
    NoInBranch(String),
    #[error("bad decomposition JSON: {0}")]
    Json(String),
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
}

/// An ordered sequence of bags. Construction does not validate the
/// decomposition conditions; `verify` does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    bags: Vec<VertexSet>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<VertexSet>) -> Self {
        assert!(!bags.is_empty(), "a path decomposition has at least one bag");
        let n = bags[0].universe();
        assert!(bags.iter().all(|b| b.universe() == n));
        PathDecomposition { bags }
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn universe(&self) -> usize {
        self.bags[0].universe()
    }

    /// Largest bag size minus one; 0 for the degenerate all-empty case.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Union of all bags.
    pub fn covered(&self) -> VertexSet {
        let mut u = VertexSet::empty(self.universe());
        for b in &self.bags {
            u.union_with(b);
        }
        u
    }

    pub fn last_bag(&self) -> &VertexSet {
        self.bags.last().unwrap()
    }

    pub fn to_json_string(&self) -> String {
        let dto = BagsJson {
            bags: self.bags.iter().map(|b| b.to_vec()).collect(),
        };
        serde_json::to_string(&dto).expect("bag lists always serialize")
    }

    pub fn from_json_str(text: &str, n: usize) -> Result<Self, DecompositionError> {
        let dto: BagsJson =
            serde_json::from_str(text).map_err(|e| DecompositionError::Json(e.to_string()))?;
        if dto.bags.is_empty() {
            return Err(DecompositionError::Json("no bags".into()));
        }
        let mut bags = Vec::with_capacity(dto.bags.len());
        for ids in dto.bags {
            for &v in &ids {
                if v >= n {
                    return Err(DecompositionError::VertexOutOfRange { v, n });
                }
            }
            bags.push(VertexSet::from_ids(n, ids));
        }
        Ok(PathDecomposition::new(bags))
    }
}

#[derive(Serialize, Deserialize)]
struct BagsJson {
    bags: Vec<Vec<usize>>,
}

/// Closed 1-based bag index range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        assert!(1 <= start && start <= end);
        Interval { start, end }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.start <= i && i <= self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_disjoint(&self, other: &Interval) -> bool {
        self.end < other.start || other.end < self.start
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        other.start <= self.start && self.end <= other.end
    }

    /// Nested one way or the other, or disjoint.
    pub fn nested_or_disjoint(&self, other: &Interval) -> bool {
        self.is_subset(other) || other.is_subset(self) || self.is_disjoint(other)
    }
}

/// Outcome of `verify`, one diagnostic slot per decomposition condition.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub width: usize,
    /// First vertex missing from every bag, if any.
    pub missing_vertex: Option<usize>,
    /// First edge contained in no bag, if any.
    pub uncovered_edge: Option<(usize, usize)>,
    /// First vertex whose occurrence set is not an interval, if any.
    pub contiguity: Option<ContiguityViolation>,
    /// First empty bag (1-based), unless the decomposition is the one-bag
    /// empty decomposition of the empty graph.
    pub empty_bag: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContiguityViolation {
    pub vertex: usize,
    pub present: usize,
    pub gap: usize,
    pub present_again: usize,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.missing_vertex.is_none()
            && self.uncovered_edge.is_none()
            && self.contiguity.is_none()
            && self.empty_bag.is_none()
    }
}

/// Checks the three decomposition conditions of `p` against `g` and reports
/// the first violation of each, plus the width.
pub fn verify(g: &Graph, p: &PathDecomposition) -> Verdict {
    assert_eq!(p.universe(), g.n(), "decomposition universe must match graph");
    let covered = p.covered();
    let missing_vertex = g.vertices().difference(&covered).min();

    let mut uncovered_edge = None;
    'edges: for (u, v) in g.edges() {
        for bag in p.bags() {
            if bag.contains(u) && bag.contains(v) {
                continue 'edges;
            }
        }
        uncovered_edge = Some((u, v));
        break;
    }

    let mut contiguity = None;
    'vertices: for v in covered.iter() {
        let mut first = None;
        let mut gap = None;
        for (i, bag) in p.bags().iter().enumerate() {
            if bag.contains(v) {
                if first.is_none() {
                    first = Some(i + 1);
                } else if let Some(t) = gap {
                    contiguity = Some(ContiguityViolation {
                        vertex: v,
                        present: first.unwrap(),
                        gap: t,
                        present_again: i + 1,
                    });
                    break 'vertices;
                }
            } else if first.is_some() && gap.is_none() {
                gap = Some(i + 1);
            }
        }
    }

    let degenerate = g.n() == 0 && p.len() == 1;
    let empty_bag = if degenerate {
        None
    } else {
        p.bags().iter().position(|b| b.is_empty()).map(|i| i + 1)
    };

    Verdict {
        width: p.width(),
        missing_vertex,
        uncovered_edge,
        contiguity,
        empty_bag,
    }
}

fn prefixes_ok(g: &Graph, p: &PathDecomposition, mut check: impl FnMut(&[VertexSet]) -> bool) -> bool {
    let mut union = VertexSet::empty(g.n());
    for bag in p.bags() {
        union.union_with(bag);
        if !check(&g.components(&union)) {
            return false;
        }
    }
    true
}

/// True iff every prefix union induces a connected subgraph.
pub fn is_connected_decomposition(g: &Graph, p: &PathDecomposition) -> bool {
    prefixes_ok(g, p, |comps| comps.len() <= 1)
}

/// True iff every connected component of every prefix-induced subgraph
/// contains a seed. Any connected subgraph lies inside a component, so the
/// component-level check is equivalent to quantifying over all connected
/// subgraphs.
pub fn is_i_connected(g: &Graph, p: &PathDecomposition, seeds: &VertexSet) -> bool {
    prefixes_ok(g, p, |comps| comps.iter().all(|c| c.intersects(seeds)))
}

fn is_partial_decomposition_of_covered(g: &Graph, p: &PathDecomposition) -> bool {
    let covered = p.covered();
    // every edge inside the covered subgraph sits in some bag
    for u in covered.iter() {
        for v in g.neighbors(u).intersection(&covered).iter() {
            if u < v && !p.bags().iter().any(|b| b.contains(u) && b.contains(v)) {
                return false;
            }
        }
    }
    // contiguous occurrences, no empty bags
    for v in covered.iter() {
        let occupied: Vec<bool> = p.bags().iter().map(|b| b.contains(v)).collect();
        let first = occupied.iter().position(|&x| x).unwrap();
        let last = occupied.iter().rposition(|&x| x).unwrap();
        if occupied[first..=last].iter().any(|&x| !x) {
            return false;
        }
    }
    if p.bags().iter().any(|b| b.is_empty()) && !(g.n() == 0 && p.len() == 1) {
        return false;
    }
    // covered vertices with uncovered neighbors must sit in the last bag
    g.border(&covered).is_subset(p.last_bag())
}

/// True iff `p` is a connected path decomposition of the subgraph induced by
/// its bag union and every covered vertex with an uncovered neighbor lies in
/// the last bag.
pub fn is_partial_connected(g: &Graph, p: &PathDecomposition) -> bool {
    is_partial_decomposition_of_covered(g, p) && is_connected_decomposition(g, p)
}

/// Seeded variant of `is_partial_connected`: prefix components must each
/// contain a seed rather than being unique.
pub fn is_partial_i_connected(g: &Graph, p: &PathDecomposition, seeds: &VertexSet) -> bool {
    is_partial_decomposition_of_covered(g, p) && is_i_connected(g, p, seeds)
}

/// The 1-based index range of bags intersecting `h`. Errors when `h` never
/// occurs or its occurrences have a gap, which signals invalid inputs.
pub fn subgraph_interval(
    p: &PathDecomposition,
    h: &VertexSet,
) -> Result<Interval, DecompositionError> {
    let hits: Vec<bool> = p.bags().iter().map(|b| b.intersects(h)).collect();
    let first = hits
        .iter()
        .position(|&x| x)
        .ok_or_else(|| DecompositionError::NotPresent(h.to_string()))?;
    let last = hits.iter().rposition(|&x| x).unwrap();
    if let Some(gap) = hits[first..=last].iter().position(|&x| !x) {
        return Err(DecompositionError::NotContiguous {
            set: h.to_string(),
            first: first + 1,
            gap: first + gap + 1,
            again: last + 1,
        });
    }
    Ok(Interval::new(first + 1, last + 1))
}

/// How a component of `G − S` sits relative to the interval of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchClass {
    /// Branch with `S` fully present at both interval endpoints.
    In,
    /// Branch starting before the interval of `S`.
    Pre,
    /// Branch starting inside the interval and ending after it.
    Post,
    /// Branch that fits none of the above. Cannot occur when `S` has an
    /// in-branch; used when the interval of `S` is undefined.
    Other,
    /// Component of `G − S` that is not a branch of `S`.
    NonBranch,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifiedComponent {
    pub vertices: VertexSet,
    pub class: BranchClass,
    pub interval: Interval,
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Classification of every component of `G − base` against a decomposition,
/// plus the interval of `base` (absent when it has no in-branch).
#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub base: VertexSet,
    pub interval: Option<Interval>,
    pub components: Vec<ClassifiedComponent>,
    /// Bag budget the report was requested for.
    pub budget: usize,
}

impl BranchReport {
    pub fn count(&self, class: BranchClass) -> usize {
        self.components.iter().filter(|c| c.class == class).count()
    }

    /// Branches of `base` that are not in-branches.
    pub fn non_in_branches(&self) -> usize {
        self.components
            .iter()
            .filter(|c| matches!(c.class, BranchClass::Pre | BranchClass::Post | BranchClass::Other))
            .count()
    }
}

/// Classifies every component of `G − s` as in-, pre-, post-branch or
/// non-branch relative to `p`. With no in-branch the interval is reported as
/// `None` and branches fall back to `Other`.
pub fn classify_branches(
    g: &Graph,
    p: &PathDecomposition,
    s: &VertexSet,
    budget: usize,
) -> Result<BranchReport, DecompositionError> {
    let family = g.branch_family(s);
    let mut branch_spans = Vec::new();
    for h in &family.branches {
        let iv = subgraph_interval(p, h)?;
        let is_in = s.is_subset(&p.bags()[iv.start - 1]) && s.is_subset(&p.bags()[iv.end - 1]);
        branch_spans.push((h.clone(), iv, is_in));
    }

    let interval = {
        let start = branch_spans
            .iter()
            .filter(|(_, _, is_in)| *is_in)
            .map(|(_, iv, _)| iv.start)
            .min();
        let end = branch_spans
            .iter()
            .filter(|(_, _, is_in)| *is_in)
            .map(|(_, iv, _)| iv.end)
            .max();
        match (start, end) {
            (Some(s), Some(e)) => Some(Interval::new(s, e)),
            _ => None,
        }
    };

    let mut components = Vec::new();
    for (vertices, iv, is_in) in branch_spans {
        let class = if is_in {
            BranchClass::In
        } else {
            match interval {
                Some(window) => {
                    if iv.start < window.start {
                        BranchClass::Pre
                    } else if iv.end > window.end {
                        BranchClass::Post
                    } else {
                        BranchClass::Other
                    }
                }
                None => BranchClass::Other,
            }
        };
        components.push(ClassifiedComponent {
            vertices,
            class,
            interval: iv,
        });
    }
    for c in &family.non_branch_components {
        components.push(ClassifiedComponent {
            vertices: c.clone(),
            class: BranchClass::NonBranch,
            interval: subgraph_interval(p, c)?,
        });
    }

    Ok(BranchReport {
        base: s.clone(),
        interval,
        components,
        budget,
    })
}

/// True iff the trace of `h` is constant across the bags of `iv`.
pub fn waits_in(p: &PathDecomposition, h: &VertexSet, iv: &Interval) -> bool {
    debug_assert!(iv.end <= p.len());
    let reference = p.bags()[iv.start - 1].intersection(h);
    (iv.start..=iv.end).all(|i| p.bags()[i - 1].intersection(h) == reference)
}

/// True iff every pre-branch, post-branch and non-branch component of
/// `G − s` waits in the interval of `s`. Errors when `s` has no in-branch.
pub fn is_structured(
    g: &Graph,
    p: &PathDecomposition,
    s: &VertexSet,
    budget: usize,
) -> Result<bool, DecompositionError> {
    let report = classify_branches(g, p, s, budget)?;
    let window = report
        .interval
        .ok_or_else(|| DecompositionError::NoInBranch(s.to_string()))?;
    Ok(report
        .components
        .iter()
        .filter(|c| c.class != BranchClass::In)
        .all(|c| waits_in(p, &c.vertices, &window)))
}

/// Drops bags that are subsets of a neighboring bag until none remain.
/// The result is never empty.
pub fn compact(p: &PathDecomposition) -> PathDecomposition {
    let mut bags = p.bags().to_vec();
    loop {
        let mut removed = false;
        let mut i = 0;
        while i < bags.len() && bags.len() > 1 {
            let redundant = (i > 0 && bags[i].is_subset(&bags[i - 1]))
                || (i + 1 < bags.len() && bags[i].is_subset(&bags[i + 1]));
            if redundant {
                bags.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            break;
        }
    }
    PathDecomposition::new(bags)
}
