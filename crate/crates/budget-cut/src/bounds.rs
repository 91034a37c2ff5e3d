//! Fractional-knapsack style bounds on budget-constrained cut values, plus
//! the unconstrained minimum-cut lower bound used for pruning.
//!
//! All bound arithmetic is exact rational, so comparisons against integer
//! incumbents never suffer rounding.

use num_rational::Ratio;

use crate::error::Result;
use crate::graph::{EdgeId, WeightedGraph};
use crate::mincut::{self, CutAttribute};

/// Exact rational value used throughout the bounds and the Lagrangian dual.
pub type Rational = Ratio<i64>;

pub fn rational(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

/// An edge ranked by its weight-cost ratio.
#[derive(Clone, Copy, Debug)]
pub struct RankedEdge {
    pub edge: EdgeId,
    pub weight: u64,
    pub cost: u64,
}

impl RankedEdge {
    /// Exact ratio `weight / cost`; `None` for zero-cost edges, which sort
    /// as infinitely profitable.
    pub fn ratio(&self) -> Option<Rational> {
        if self.cost == 0 {
            None
        } else {
            Some(Ratio::new(self.weight as i64, self.cost as i64))
        }
    }
}

/// Collects the live edges of the working graph as ranked edges.
pub fn ranked_edges(g: &WeightedGraph) -> Vec<RankedEdge> {
    g.live_edges()
        .map(|e| {
            let rec = &g.edge_records()[e.0];
            RankedEdge {
                edge: e,
                weight: rec.weight,
                cost: rec.cost,
            }
        })
        .collect()
}

fn sorted_for_max(edges: &[RankedEdge]) -> Vec<RankedEdge> {
    let mut v = edges.to_vec();
    // Zero-cost edges first (always fully taken), then ratio non-increasing;
    // edge id breaks ties deterministically.
    v.sort_by(|a, b| match (a.ratio(), b.ratio()) {
        (None, None) => a.edge.cmp(&b.edge),
        (None, Some(_)) => std::cmp::Ordering::Less,
        (Some(_), None) => std::cmp::Ordering::Greater,
        (Some(ra), Some(rb)) => rb.cmp(&ra).then(a.edge.cmp(&b.edge)),
    });
    v
}

fn sorted_for_min(edges: &[RankedEdge]) -> Vec<RankedEdge> {
    let mut v = edges.to_vec();
    // Ratio non-decreasing; zero-cost edges (ratio infinite) last.
    v.sort_by(|a, b| match (a.ratio(), b.ratio()) {
        (None, None) => a.edge.cmp(&b.edge),
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (Some(_), None) => std::cmp::Ordering::Less,
        (Some(ra), Some(rb)) => ra.cmp(&rb).then(a.edge.cmp(&b.edge)),
    });
    v
}

/// Greedy prefix value of a ratio-sorted edge list: whole edges while the
/// cumulative cost stays within `t`, plus the fractional share of the next.
fn greedy_prefix_value(sorted: &[RankedEdge], t: u64) -> Rational {
    // Clamp: with the whole edge set affordable the fractional term vanishes.
    let total_cost: u64 = sorted.iter().map(|e| e.cost).sum();
    let t = t.min(total_cost);

    let mut value = Rational::from_integer(0);
    let mut spent = 0u64;
    for e in sorted {
        if spent + e.cost <= t {
            spent += e.cost;
            value += Rational::from_integer(e.weight as i64);
        } else {
            let slack = t - spent;
            if slack > 0 {
                // e.cost > 0 here: zero-cost edges always fit above.
                value += Rational::new(slack as i64 * e.weight as i64, e.cost as i64);
            }
            break;
        }
    }
    value
}

/// Upper bound on the budget-constrained maximum cut: take edges in
/// non-increasing weight-cost ratio order while the budget lasts, then a
/// fractional share of the next. No edge subset of cost at most `t` can
/// weigh more.
pub fn fractional_max_bound(edges: &[RankedEdge], t: u64) -> Rational {
    greedy_prefix_value(&sorted_for_max(edges), t)
}

/// The companion expression with edges in non-decreasing ratio order.
/// Exposed as a faithful reference; it is *not* used for pruning, and its
/// soundness as a lower bound is checked only empirically in the tests.
pub fn fractional_min_bound(edges: &[RankedEdge], t: u64) -> Rational {
    greedy_prefix_value(&sorted_for_min(edges), t)
}

/// Weight of the unconstrained global minimum cut: a valid lower bound for
/// any budget-constrained minimum cut of `g`.
pub fn min_cut_lower_bound(g: &WeightedGraph) -> Result<u64> {
    Ok(mincut::minimum_cut(g, CutAttribute::Weight)?.weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    fn f4() -> WeightedGraph {
        WeightedGraph::from_edges(
            4,
            vec![
                (1, 2, 1, 1),
                (1, 3, 2, 1),
                (2, 3, 3, 2),
                (3, 4, 4, 1),
                (2, 4, 1, 3),
            ],
        )
        .unwrap()
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn max_bound_on_fixture() {
        // Ratios 4, 2, 3/2, 1, 1/3; prefix costs 1, 2, 4, 5, 8.
        let edges = ranked_edges(&f4());
        assert_eq!(fractional_max_bound(&edges, 5), int(10));
        // Budget 3: edges (3,4) and (1,3) whole, half of (2,3).
        assert_eq!(fractional_max_bound(&edges, 3), int(6) + rational(3, 2));
    }

    #[test]
    fn max_bound_degenerate_budgets() {
        let edges = ranked_edges(&f4());
        assert_eq!(fractional_max_bound(&edges, 0), int(0));
        // Budget beyond the total cost: the whole weight, no fraction.
        assert_eq!(fractional_max_bound(&edges, 100), int(11));
    }

    #[test]
    fn max_bound_pure_fraction() {
        let edges = [RankedEdge {
            edge: EdgeId(0),
            weight: 7,
            cost: 2,
        }];
        assert_eq!(fractional_max_bound(&edges, 1), rational(7, 2));
    }

    #[test]
    fn zero_cost_edges_are_taken_first() {
        let edges = [
            RankedEdge {
                edge: EdgeId(0),
                weight: 5,
                cost: 0,
            },
            RankedEdge {
                edge: EdgeId(1),
                weight: 3,
                cost: 2,
            },
        ];
        assert_eq!(fractional_max_bound(&edges, 0), int(5));
        assert_eq!(fractional_max_bound(&edges, 1), int(5) + rational(3, 2));
    }

    #[test]
    fn min_bound_on_fixture() {
        // Non-decreasing ratios 1/3, 1, 3/2, 2, 4; prefix costs 3, 4, 6, ...
        let edges = ranked_edges(&f4());
        assert_eq!(fractional_min_bound(&edges, 5), int(2) + rational(3, 2));
    }

    #[test]
    fn min_bound_degenerate_cases() {
        let one = [RankedEdge {
            edge: EdgeId(0),
            weight: 1,
            cost: 1,
        }];
        assert_eq!(fractional_min_bound(&one, 1), int(1));
        let edges = ranked_edges(&f4());
        assert_eq!(fractional_min_bound(&edges, 100), int(11));
    }

    #[test]
    fn bounds_are_monotone_in_budget() {
        let edges = ranked_edges(&f4());
        let mut prev_max = int(-1);
        let mut prev_min = int(-1);
        for t in 0..12 {
            let bmax = fractional_max_bound(&edges, t);
            let bmin = fractional_min_bound(&edges, t);
            assert!(bmax >= prev_max);
            assert!(bmin >= prev_min);
            prev_max = bmax;
            prev_min = bmin;
        }
    }

    #[test]
    fn min_cut_lower_bound_on_fixture() {
        assert_eq!(min_cut_lower_bound(&f4()).unwrap(), 3);
    }

    #[test]
    fn min_cut_lower_bound_on_tree_is_min_edge() {
        let g = WeightedGraph::from_edges(4, vec![(1, 2, 6, 1), (2, 3, 2, 1), (3, 4, 9, 1)])
            .unwrap();
        assert_eq!(min_cut_lower_bound(&g).unwrap(), 2);
    }
}
