//! Lagrangian-relaxation heuristic for the budget-constrained minimum cut.
//!
//! Relaxing the budget constraint with multiplier `λ ≥ 0` turns each
//! subproblem into a plain minimum cut under the derived edge attribute
//! `w + λ·c`, solved exactly by the Stoer-Wagner engine with rational
//! arithmetic. The dual is searched one-dimensionally: hold an infeasible
//! extreme `A` and a feasible extreme `B`, probe the multiplier where their
//! Lagrangian lines cross, and shrink the bracket until the probe reproduces
//! a known support. Every relaxed value `L(λ)` lower-bounds the constrained
//! optimum; the best feasible cut seen anywhere is the primal answer.
//!
//! Two refinements from the Stoer-Wagner route: each phase's intermediate
//! cut-of-the-phase is harvested and tested against the true objective and
//! budget (they are free by-products and occasionally beat the subproblem
//! optimum), and the final primal can be polished by single-vertex
//! local search.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::bounds::Rational;
use crate::error::Result;
use crate::graph::{Cut, Side, VertexId, WeightedGraph};
use crate::mincut;

/// A cut evaluated under multiplier `λ`.
#[derive(Clone, Debug)]
pub struct LagrangePoint {
    pub lambda: Rational,
    pub cut: Cut,
    /// Σ w over the cut (the true objective).
    pub l1: u64,
    /// Σ c over the cut minus the budget; feasible iff `l2 <= 0`.
    pub l2: i64,
    /// `L(λ) = l1 + λ·l2`, the relaxed value: a lower bound on the optimum.
    pub value: Rational,
}

impl LagrangePoint {
    pub fn feasible(&self) -> bool {
        self.l2 <= 0
    }

    fn support(&self) -> (u64, i64) {
        (self.l1, self.l2)
    }
}

/// Knobs for [`solve_dual`].
#[derive(Clone, Debug)]
pub struct LagrangeOptions {
    pub max_iterations: u64,
    /// Evaluate every phase's intermediate cut against the true problem.
    pub harvest: bool,
    /// Polish the final primal with single-vertex local search.
    pub refine: bool,
}

impl Default for LagrangeOptions {
    fn default() -> Self {
        LagrangeOptions {
            max_iterations: 100,
            harvest: true,
            refine: true,
        }
    }
}

/// Result of the dual search.
#[derive(Clone, Debug)]
pub struct DualReport {
    /// Best feasible cut seen anywhere; `None` means no cut fits the budget.
    pub best_primal: Option<Cut>,
    /// Largest relaxed value `L(λ)` over all evaluated multipliers.
    pub dual_bound: Rational,
    /// Number of relaxed subproblems solved.
    pub iterations: u64,
    /// How many times a harvested intermediate cut improved the primal.
    pub harvested_improvements: u64,
    /// Whether local search improved the final primal.
    pub refined: bool,
}

impl DualReport {
    /// The result is a certified optimum when the primal value meets the
    /// dual bound exactly (this covers the feasible-at-λ=0 shortcut).
    pub fn proven(&self) -> bool {
        match &self.best_primal {
            Some(c) => Ratio::from_integer(c.weight as i64) == self.dual_bound,
            None => true, // proven infeasible
        }
    }
}

/// Solves the relaxed subproblem at `lambda`: the global minimum cut under
/// the derived attribute `w + λ·c`, packaged with its Lagrangian value.
pub fn evaluate_lambda(g: &WeightedGraph, t: u64, lambda: Rational) -> Result<LagrangePoint> {
    evaluate_lambda_with_harvest(g, t, lambda, |_| {})
}

/// Like [`evaluate_lambda`], reporting each phase's intermediate cut.
pub fn evaluate_lambda_with_harvest(
    g: &WeightedGraph,
    t: u64,
    lambda: Rational,
    mut harvest: impl FnMut(&Cut),
) -> Result<LagrangePoint> {
    debug_assert!(lambda >= Ratio::from_integer(0));
    let cut = mincut::minimum_cut_by(
        g,
        |e| Ratio::from_integer(e.weight as i64) + lambda * Ratio::from_integer(e.cost as i64),
        |c| harvest(c),
    )?;
    Ok(point_at(lambda, cut, t))
}

fn point_at(lambda: Rational, cut: Cut, t: u64) -> LagrangePoint {
    let l1 = cut.weight;
    let l2 = cut.cost as i64 - t as i64;
    let value = Ratio::from_integer(l1 as i64) + lambda * Ratio::from_integer(l2);
    LagrangePoint {
        lambda,
        cut,
        l1,
        l2,
        value,
    }
}

/// One-dimensional dual search for the budget-constrained minimum cut.
///
/// Returns the best feasible primal seen anywhere (final subproblem cuts,
/// harvested intermediates, and the optional local-search polish) together
/// with the best dual bound. `best_primal == None` certifies that no cut
/// fits the budget. Optimality of a returned primal is only claimed by
/// [`DualReport::proven`] when it meets the dual bound exactly.
pub fn solve_dual(g: &WeightedGraph, t: u64, options: &LagrangeOptions) -> Result<DualReport> {
    let mut best_primal: Option<Cut> = None;
    let mut harvested_improvements = 0u64;
    let mut iterations = 0u64;
    let mut dual_bound: Option<Rational> = None;

    let absorb_primal = |cut: &Cut, best: &mut Option<Cut>| -> bool {
        if cut.cost <= t && best.as_ref().map_or(true, |b| cut.weight < b.weight) {
            *best = Some(cut.clone());
            true
        } else {
            false
        }
    };

    let evaluate = |lambda: Rational,
                        best: &mut Option<Cut>,
                        harvested: &mut u64,
                        iterations: &mut u64,
                        bound: &mut Option<Rational>|
     -> Result<LagrangePoint> {
        let mut improvements = 0u64;
        let point = if options.harvest {
            let mut pending: Vec<Cut> = Vec::new();
            let p = evaluate_lambda_with_harvest(g, t, lambda, |c| pending.push(c.clone()))?;
            for cut in &pending {
                if absorb_primal(cut, best) {
                    improvements += 1;
                }
            }
            p
        } else {
            evaluate_lambda(g, t, lambda)?
        };
        *harvested += improvements;
        absorb_primal(&point.cut, best);
        *iterations += 1;
        if bound.map_or(true, |b| point.value > b) {
            *bound = Some(point.value);
        }
        Ok(point)
    };

    // λ = 0: the unconstrained minimum cut. Feasibility here ends the search
    // with a certified optimum.
    let mut a = evaluate(
        Ratio::from_integer(0),
        &mut best_primal,
        &mut harvested_improvements,
        &mut iterations,
        &mut dual_bound,
    )?;
    if a.feasible() {
        return Ok(DualReport {
            best_primal,
            dual_bound: dual_bound.unwrap(),
            iterations,
            harvested_improvements,
            refined: false,
        });
    }

    // A multiplier past the total weight makes cost strictly dominate, so
    // the subproblem returns a cost-minimal cut: the feasibility probe.
    let lambda_big = Ratio::from_integer(g.total_weight() as i64 + 1);
    let mut b = evaluate(
        lambda_big,
        &mut best_primal,
        &mut harvested_improvements,
        &mut iterations,
        &mut dual_bound,
    )?;
    if !b.feasible() {
        // Even the cost-minimal cut exceeds the budget.
        return Ok(DualReport {
            best_primal: None,
            dual_bound: dual_bound.unwrap(),
            iterations,
            harvested_improvements,
            refined: false,
        });
    }

    while iterations < options.max_iterations {
        // Multiplier where the two support lines cross.
        let num = b.l1 as i64 - a.l1 as i64;
        let den = a.l2 - b.l2;
        debug_assert!(den > 0);
        let lambda = Ratio::new(num, den);
        if lambda < Ratio::from_integer(0) {
            break;
        }
        let c = evaluate(
            lambda,
            &mut best_primal,
            &mut harvested_improvements,
            &mut iterations,
            &mut dual_bound,
        )?;
        if c.support() == a.support() || c.support() == b.support() {
            break;
        }
        if c.feasible() {
            b = c;
        } else {
            a = c;
        }
    }

    let mut refined = false;
    if options.refine {
        if let Some(best) = &best_primal {
            let polished = kl_refine(g, best, t)?;
            if polished.weight < best.weight {
                refined = true;
                best_primal = Some(polished);
            }
        }
    }

    Ok(DualReport {
        best_primal,
        dual_bound: dual_bound.unwrap(),
        iterations,
        harvested_improvements,
        refined,
    })
}

/// Single-vertex local search: repeatedly moves the first vertex (by id)
/// whose flip strictly decreases the cut weight while keeping the cost
/// within budget and both sides non-empty. The result is never worse than
/// the start.
pub fn kl_refine(g: &WeightedGraph, start: &Cut, t: u64) -> Result<Cut> {
    let mut labels: BTreeMap<VertexId, Side> = start.partition.clone();
    let mut current = g.evaluate_partition(&labels)?;
    loop {
        let mut moved = false;
        for v in g.vertices() {
            let side = labels[&v];
            let side_count = labels.values().filter(|s| **s == side).count();
            if side_count == 1 {
                continue; // the move would empty a side
            }
            labels.insert(v, side.flip());
            let candidate = g.evaluate_partition(&labels)?;
            if candidate.cost <= t && candidate.weight < current.weight {
                current = candidate;
                moved = true;
                break;
            }
            labels.insert(v, side); // undo
        }
        if !moved {
            return Ok(current);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnb::Sense;
    use crate::bounds::rational;
    use crate::oracle::brute_force_cut;

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

    /// Triangle where the weight-minimal and cost-minimal cuts disagree.
    fn triangle() -> WeightedGraph {
        WeightedGraph::from_edges(3, vec![(1, 2, 1, 10), (1, 3, 2, 1), (2, 3, 3, 1)]).unwrap()
    }

    #[test]
    fn lambda_zero_on_the_fixture_is_feasible() {
        let p = evaluate_lambda(&f4(), 4, Ratio::from_integer(0)).unwrap();
        assert_eq!(p.l1, 3);
        assert_eq!(p.l2, -2);
        assert!(p.feasible());
    }

    #[test]
    fn lambda_extremes_on_the_triangle() {
        let p0 = evaluate_lambda(&triangle(), 3, Ratio::from_integer(0)).unwrap();
        assert_eq!((p0.l1, p0.l2), (3, 8));
        assert!(!p0.feasible());

        let pbig = evaluate_lambda(&triangle(), 3, Ratio::from_integer(1000)).unwrap();
        assert_eq!((pbig.l1, pbig.l2), (5, -1));
        assert!(pbig.feasible());
        assert_eq!(pbig.cut.side_b(), vec![VertexId(3)]);
    }

    #[test]
    fn dual_search_shortcut_at_lambda_zero() {
        let report = solve_dual(&f4(), 4, &LagrangeOptions::default()).unwrap();
        let best = report.best_primal.clone().unwrap();
        assert_eq!(best.weight, 3);
        assert!(report.proven());
        assert_eq!(report.iterations, 1);
    }

    #[test]
    fn dual_search_on_the_triangle() {
        let report = solve_dual(&triangle(), 3, &LagrangeOptions::default()).unwrap();
        let best = report.best_primal.clone().unwrap();
        // Only the cut {3} fits the budget; the duality gap stays open.
        assert_eq!(best.weight, 5);
        assert_eq!(report.dual_bound, rational(43, 9));
        assert!(!report.proven());
        assert_eq!(report.iterations, 3);
    }

    #[test]
    fn infeasible_instance_is_detected() {
        let g = WeightedGraph::from_edges(3, vec![(1, 2, 1, 9), (1, 3, 1, 9), (2, 3, 1, 9)]).unwrap();
        // Every cut costs at least 18.
        let report = solve_dual(&g, 10, &LagrangeOptions::default()).unwrap();
        assert!(report.best_primal.is_none());
        assert!(report.proven());
    }

    #[test]
    fn weak_duality_against_the_oracle() {
        for t in [2, 3, 4, 6] {
            let report = solve_dual(&f4(), t, &LagrangeOptions::default()).unwrap();
            if let Some(opt) = brute_force_cut(&f4(), t, Sense::Min, None, None).unwrap() {
                assert!(report.dual_bound <= Ratio::from_integer(opt.weight as i64));
                let best = report.best_primal.clone().unwrap();
                assert!(best.cost <= t);
                assert!(best.weight >= opt.weight);
            } else {
                assert!(report.best_primal.is_none());
            }
        }
    }

    #[test]
    fn refine_is_a_fixed_point_at_local_optima() {
        let g = f4();
        let start = brute_force_cut(&g, 5, Sense::Min, None, None).unwrap().unwrap();
        let refined = kl_refine(&g, &start, 5).unwrap();
        assert_eq!(refined, start);
    }

    #[test]
    fn refine_improves_the_fixture_split() {
        let g = f4();
        // Start from {1,2}|{3,4}: weight 6, cost 6, feasible for T = 6.
        let labels: BTreeMap<VertexId, Side> = [
            (VertexId(1), Side::A),
            (VertexId(2), Side::A),
            (VertexId(3), Side::B),
            (VertexId(4), Side::B),
        ]
        .into_iter()
        .collect();
        let start = g.evaluate_partition(&labels).unwrap();
        assert_eq!((start.weight, start.cost), (6, 6));
        // Single-vertex moves from here: moving 4 gives {3}|{1,2,4} with
        // weight 9 (worse); moving 3 gives {4}|{1,2,3} with weight 5.
        let refined = kl_refine(&g, &start, 6).unwrap();
        assert_eq!(refined.weight, 5);
        assert!(refined.cost <= 6);
        assert!(refined.weight <= start.weight);
    }

    #[test]
    fn harvest_only_improves() {
        let g = triangle();
        let with = solve_dual(&g, 3, &LagrangeOptions::default()).unwrap();
        let without = solve_dual(
            &g,
            3,
            &LagrangeOptions {
                harvest: false,
                refine: false,
                ..LagrangeOptions::default()
            },
        )
        .unwrap();
        let w_with = with.best_primal.unwrap().weight;
        let w_without = without.best_primal.unwrap().weight;
        assert!(w_with <= w_without);
    }
}
