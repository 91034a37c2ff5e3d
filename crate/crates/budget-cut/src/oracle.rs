//! Brute-force ground truth for desk-scale verification.
//!
//! Nothing here is meant to be fast. `brute_force_cut` enumerates every
//! bipartition and is the reference all solvers are tested against;
//! `knapsack_dp` is the reference for the knapsack-to-cut reduction.

use std::collections::BTreeMap;

use crate::bnb::Sense;
use crate::error::{Error, Result};
use crate::graph::{Cut, Side, VertexId, WeightedGraph};

/// Default vertex cap for exhaustive enumeration.
pub const DEFAULT_ORACLE_CAP: usize = 20;

/// An item of the binary knapsack: profit to collect, weight to pay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnapsackItem {
    pub profit: u64,
    pub weight: u64,
}

/// Enumerates all `2^(n-1)` bipartitions (the lowest vertex pinned to side
/// A), filters by budget and terminal separation, and returns the best cut
/// by `sense`. Ties break toward the lexicographically smallest side-B
/// vertex set. Returns `None` when no bipartition is feasible.
pub fn brute_force_cut(
    g: &WeightedGraph,
    rho: u64,
    sense: Sense,
    terminals: Option<(VertexId, VertexId)>,
    cap: Option<usize>,
) -> Result<Option<Cut>> {
    let cap = cap.unwrap_or(DEFAULT_ORACLE_CAP);
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    if n > cap {
        return Err(Error::TooLarge(format!("{n} vertices exceeds cap {cap}")));
    }
    if n < 2 {
        return Ok(None);
    }

    let free = &verts[1..]; // verts[0] is pinned to side A
    let mut best: Option<Cut> = None;
    for mask in 1u64..(1u64 << (n - 1)) {
        let mut labels: BTreeMap<VertexId, Side> = BTreeMap::new();
        labels.insert(verts[0], Side::A);
        for (bit, &v) in free.iter().enumerate() {
            let side = if mask >> bit & 1 == 1 { Side::B } else { Side::A };
            labels.insert(v, side);
        }
        let cut = g.evaluate_partition(&labels)?;
        if cut.cost > rho {
            continue;
        }
        if let Some((s, t)) = terminals {
            match (cut.partition.get(&s), cut.partition.get(&t)) {
                (Some(a), Some(b)) if a != b => {}
                _ => continue,
            }
        }
        let better = match &best {
            None => true,
            Some(b) => {
                let strictly = match sense {
                    Sense::Min => cut.weight < b.weight,
                    Sense::Max => cut.weight > b.weight,
                };
                strictly || (cut.weight == b.weight && cut.side_b() < b.side_b())
            }
        };
        if better {
            best = Some(cut);
        }
    }
    Ok(best)
}

/// Standard 0/1 knapsack dynamic program over capacities `0..=t`. Returns
/// the maximum total profit of a packing whose weight does not exceed `t`.
pub fn knapsack_dp(items: &[KnapsackItem], t: u64) -> u64 {
    let cap = t as usize;
    let mut dp = vec![0u64; cap + 1];
    for item in items {
        if item.weight > t {
            continue;
        }
        let w = item.weight as usize;
        if w == 0 {
            // Free item: always packed.
            for slot in dp.iter_mut() {
                *slot += item.profit;
            }
            continue;
        }
        for j in (w..=cap).rev() {
            dp[j] = dp[j].max(dp[j - w] + item.profit);
        }
    }
    dp[cap]
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

    #[test]
    fn f4_min_within_budget_five() {
        let cut = brute_force_cut(&f4(), 5, Sense::Min, None, None)
            .unwrap()
            .unwrap();
        assert_eq!((cut.weight, cut.cost), (3, 2));
        assert_eq!(cut.side_b(), vec![VertexId(2), VertexId(3), VertexId(4)]);
    }

    #[test]
    fn f4_max_within_budget_five() {
        let cut = brute_force_cut(&f4(), 5, Sense::Max, None, None)
            .unwrap()
            .unwrap();
        assert_eq!((cut.weight, cut.cost), (9, 4));
        assert_eq!(cut.side_b(), vec![VertexId(3)]);
    }

    #[test]
    fn infeasible_budget_returns_none() {
        // Cheapest cut of the fixture costs 2.
        assert!(brute_force_cut(&f4(), 1, Sense::Min, None, None)
            .unwrap()
            .is_none());
    }

    #[test]
    fn terminal_separation_is_enforced() {
        // Cheapest 2-4 separating cut: {2}|{1,3,4} or {4}|{1,2,3} among others.
        let cut = brute_force_cut(&f4(), 10, Sense::Min, Some((VertexId(2), VertexId(4))), None)
            .unwrap()
            .unwrap();
        let p = &cut.partition;
        assert_ne!(p[&VertexId(2)], p[&VertexId(4)]);
    }

    #[test]
    fn cap_is_enforced() {
        let g = WeightedGraph::from_edges(5, vec![(1, 2, 1, 1), (2, 3, 1, 1), (3, 4, 1, 1), (4, 5, 1, 1)])
            .unwrap();
        assert!(matches!(
            brute_force_cut(&g, 10, Sense::Min, None, Some(4)),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn knapsack_three_item_example() {
        let items = [
            KnapsackItem { profit: 6, weight: 2 },
            KnapsackItem { profit: 10, weight: 4 },
            KnapsackItem { profit: 12, weight: 6 },
        ];
        assert_eq!(knapsack_dp(&items, 8), 18); // items 1 and 3
    }

    #[test]
    fn knapsack_edge_cases() {
        let items = [
            KnapsackItem { profit: 5, weight: 3 },
            KnapsackItem { profit: 7, weight: 2 },
        ];
        assert_eq!(knapsack_dp(&items, 0), 0);
        assert_eq!(knapsack_dp(&[KnapsackItem { profit: 9, weight: 4 }], 7), 9);
    }

    #[test]
    fn knapsack_matches_subset_enumeration() {
        // Deterministic pseudo-random item sets, checked against 2^n scan.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let n = (next() % 10 + 1) as usize;
            let items: Vec<KnapsackItem> = (0..n)
                .map(|_| KnapsackItem {
                    profit: next() % 11,
                    weight: next() % 11,
                })
                .collect();
            let t = next() % 30;
            let mut best = 0;
            for mask in 0..(1u32 << n) {
                let (mut p, mut w) = (0u64, 0u64);
                for (i, item) in items.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        p += item.profit;
                        w += item.weight;
                    }
                }
                if w <= t {
                    best = best.max(p);
                }
            }
            assert_eq!(knapsack_dp(&items, t), best);
        }
    }
}
