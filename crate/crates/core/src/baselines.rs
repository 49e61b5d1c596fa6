//! Reference colorings: greedy distance-2 coloring, and an exhaustive
//! minimum pseudo-schedule search for tiny graphs.

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::verify::oracle_pseudo_check;

/// Largest graph [`exact_min_pseudo`] accepts.
pub const EXACT_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    GreedyStrict,
    ExactMinPseudo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub algorithm: Baseline,
    pub coloring: Coloring,
    pub colors_used_max: u32,
}

/// Colors vertices in `order`, each with the least color (from 0) not used
/// within distance two. The result is a strict schedule.
pub fn greedy_strict(g: &Graph, order: &[Vertex]) -> Result<BaselineResult> {
    let n = g.n();
    if order.len() != n {
        return Err(Error::InvalidParameter(format!(
            "order has {} entries, graph has {n} vertices",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        g.check_vertex(v)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidParameter(format!("vertex {v} repeated in order")));
        }
    }
    let mut colors: Vec<Option<Color>> = vec![None; n];
    let mut taken = Vec::new();
    for &v in order {
        taken.clear();
        for &u in g.neighbors(v) {
            taken.extend(colors[u]);
            for &w in g.neighbors(u) {
                if w != v {
                    taken.extend(colors[w]);
                }
            }
        }
        taken.sort_unstable();
        taken.dedup();
        let k = taken
            .iter()
            .enumerate()
            .find(|&(i, &c)| i as Color != c)
            .map_or(taken.len() as Color, |(i, _)| i as Color);
        colors[v] = Some(k);
    }
    let coloring = Coloring::from_partial(colors);
    Ok(BaselineResult {
        algorithm: Baseline::GreedyStrict,
        colors_used_max: coloring.colors_used_max(),
        coloring,
    })
}

/// [`greedy_strict`] in ascending ID order.
pub fn greedy_strict_by_id(g: &Graph) -> Result<BaselineResult> {
    let order: Vec<_> = (0..g.n()).collect();
    greedy_strict(g, &order)
}

/// A pseudo-schedule with the fewest colors, at most `max_colors`, found by
/// exhaustive search and checked with the path-enumerating oracle. `None`
/// when every coloring within the budget fails.
pub fn exact_min_pseudo(g: &Graph, max_colors: usize) -> Result<Option<BaselineResult>> {
    let n = g.n();
    if n > EXACT_MAX_N {
        return Err(Error::TooLarge { n, limit: EXACT_MAX_N });
    }
    g.ensure_connected()?;
    for k in 1..=max_colors.min(n.max(1)) {
        let mut colors = vec![0 as Color; n];
        if let Some(found) = search(g, k as Color, &mut colors, 0, 0)? {
            let coloring = Coloring::from_total(found);
            return Ok(Some(BaselineResult {
                algorithm: Baseline::ExactMinPseudo,
                colors_used_max: coloring.colors_used_max(),
                coloring,
            }));
        }
    }
    Ok(None)
}

/// Enumerates colorings in restricted-growth form (vertex `i` uses at most
/// one more than the largest color before it) that use exactly `k` colors.
fn search(g: &Graph, k: Color, colors: &mut [Color], i: usize, used: Color) -> Result<Option<Vec<Color>>> {
    let n = colors.len();
    if i == n {
        if used != k {
            return Ok(None);
        }
        let c = Coloring::from_total(colors.to_vec());
        return Ok(oracle_pseudo_check(g, &c)?.then(|| colors.to_vec()));
    }
    // Not enough vertices left to reach k colors.
    if (used as usize) + (n - i) < k as usize {
        return Ok(None);
    }
    for c in 0..(used + 1).min(k) {
        colors[i] = c;
        let found = search(g, k, colors, i + 1, used.max(c + 1))?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
