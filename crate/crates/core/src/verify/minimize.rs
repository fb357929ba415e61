use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::colouring::DiscreteColouring;
use crate::counting::{count_solutions_with, enumerate_solutions, CountQuery};
use crate::equation::EquationSpec;
use crate::exec::Exec;

pub const DEFAULT_BUDGET: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizeReport {
    pub n: u64,
    pub r: u8,
    pub eq: EquationSpec,
    /// Minimum number of monochromatic solutions (ordered, degenerate included).
    pub minimum: u64,
    /// An optimal colouring of `[2, N]`.
    pub witness: DiscreteColouring,
    /// Count of `witness` recomputed by the counting engine.
    pub recounted: u64,
    pub participating: usize,
    pub nodes: u64,
}

/// Solution sets with multiplicities, indexed by the branching position of
/// their last element.
struct Problem {
    order: Vec<u64>,
    /// `closing[p]`: sets completed at position `p`, as (positions, weight).
    closing: Vec<Vec<(Vec<usize>, u64)>>,
    r: u8,
}

impl Problem {
    fn build(eq: &EquationSpec, r: u8, n: u64) -> Result<Self, VerifyError> {
        let q = CountQuery::new(eq.clone(), 2, n);
        let iter = enumerate_solutions(&q).map_err(|e| VerifyError::Parameter(e.to_string()))?;
        let mut sets: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for s in iter {
            let mut set: Vec<u64> = s.xs.iter().chain(std::iter::once(&s.y)).map(|v| v.to_u64().expect("within [2, N]")).collect();
            set.sort_unstable();
            set.dedup();
            *sets.entry(set).or_default() += 1;
        }
        let mut degree: BTreeMap<u64, u64> = BTreeMap::new();
        for (set, w) in &sets {
            for &e in set {
                *degree.entry(e).or_default() += w;
            }
        }
        let mut order: Vec<u64> = degree.keys().copied().collect();
        order.sort_by(|a, b| degree[b].cmp(&degree[a]).then(a.cmp(b)));
        let pos: BTreeMap<u64, usize> = order.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut closing = vec![Vec::new(); order.len()];
        for (set, w) in sets {
            let ps: Vec<usize> = set.iter().map(|e| pos[e]).collect();
            let last = *ps.iter().max().expect("non-empty");
            closing[last].push((ps, w));
        }
        Ok(Self { order, closing, r })
    }

    fn added(&self, p: usize, colours: &[u8]) -> u64 {
        let c = colours[p];
        self.closing[p].iter().filter(|(ps, _)| ps.iter().all(|&q| colours[q] == c)).map(|(_, w)| w).sum()
    }

    fn greedy(&self) -> u64 {
        let mut colours = vec![0u8; self.order.len()];
        let mut total = 0;
        let mut used = 0u8;
        for p in 0..self.order.len() {
            let mut best = (u64::MAX, 1);
            for c in 1..=(used + 1).min(self.r) {
                colours[p] = c;
                let a = self.added(p, &colours);
                if a < best.0 {
                    best = (a, c);
                }
            }
            colours[p] = best.1;
            used = used.max(best.1);
            total += best.0;
        }
        total
    }
}

struct Search<'a> {
    problem: &'a Problem,
    colours: Vec<u8>,
    best: u64,
    best_colours: Option<Vec<u8>>,
    nodes: u64,
}

impl Search<'_> {
    fn dfs(&mut self, p: usize, used: u8, cost: u64) {
        self.nodes += 1;
        if cost >= self.best {
            return;
        }
        if p == self.colours.len() {
            self.best = cost;
            self.best_colours = Some(self.colours.clone());
            return;
        }
        for c in 1..=(used + 1).min(self.problem.r) {
            self.colours[p] = c;
            let a = self.problem.added(p, &self.colours);
            self.dfs(p + 1, used.max(c), cost + a);
        }
        self.colours[p] = 0;
    }
}

/// Prefix assignments of the first `depth` positions, symmetry broken, with
/// their accumulated costs.
fn frontier(problem: &Problem, depth: usize) -> Vec<(Vec<u8>, u8, u64)> {
    let mut out = vec![(Vec::new(), 0u8, 0u64)];
    for p in 0..depth.min(problem.order.len()) {
        let mut next = Vec::new();
        for (prefix, used, cost) in out {
            for c in 1..=(used + 1).min(problem.r) {
                let mut colours = prefix.clone();
                colours.push(c);
                colours.resize(problem.order.len(), 0);
                let a = problem.added(p, &colours);
                colours.truncate(p + 1);
                next.push((colours, used.max(c), cost + a));
            }
        }
        out = next;
    }
    out
}

/// Exact minimum over all `r`-colourings of `[2, N]` by branch and bound.
pub fn minimize(eq: &EquationSpec, r: u8, n: u64, budget: usize, exec: Exec) -> Result<MinimizeReport, VerifyError> {
    minimize_with_split(eq, r, n, budget, 6, exec)
}

/// [`minimize`] with an explicit number of leading positions expanded into
/// independent subtrees. The result does not depend on `split`.
pub fn minimize_with_split(
    eq: &EquationSpec,
    r: u8,
    n: u64,
    budget: usize,
    split: usize,
    exec: Exec,
) -> Result<MinimizeReport, VerifyError> {
    if n < 2 {
        return Err(VerifyError::Parameter(format!("N = {n} must be at least 2")));
    }
    if r == 0 {
        return Err(VerifyError::Parameter("r must be positive".into()));
    }
    let problem = Problem::build(eq, r, n)?;
    let participating = problem.order.len();
    if participating > budget {
        return Err(VerifyError::Budget { participating, budget });
    }
    let start = problem.greedy() + 1;
    let len = participating;
    let results = exec.map(frontier(&problem, split), |(prefix, used, cost)| {
        let depth = prefix.len();
        let mut colours = prefix;
        colours.resize(len, 0);
        let mut s = Search { problem: &problem, colours, best: start, best_colours: None, nodes: 0 };
        s.dfs(depth, used, cost);
        (s.best, s.best_colours, s.nodes)
    });
    let nodes = results.iter().map(|r| r.2).sum();
    let (minimum, best) = results
        .into_iter()
        .filter_map(|(v, c, _)| c.map(|c| (v, c)))
        .min_by_key(|(v, _)| *v)
        .expect("the greedy colouring lies in some subtree");
    let mut dense = vec![1u8; (n - 1) as usize];
    for (p, &e) in problem.order.iter().enumerate() {
        dense[(e - 2) as usize] = best[p];
    }
    let witness = DiscreteColouring::new(2, r, dense).map_err(|e| VerifyError::Domain(e.to_string()))?;
    let recounted = count_solutions_with(&CountQuery::new(eq.clone(), 2, n).with_colouring(&witness), exec)
        .map_err(|e| VerifyError::Domain(e.to_string()))?
        .per_colour
        .values()
        .map(|v| v.total)
        .sum();
    Ok(MinimizeReport { n, r, eq: eq.clone(), minimum, witness, recounted, participating, nodes })
}
