use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::Result;
use crate::graph::Graph;
use crate::tree::{min_valid_d, RootedTree};

/// Color-count bounds for a d-band coloring, with the quantities they were
/// computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsVerdict {
    /// Greatest color plus one.
    pub h: u64,
    pub d: usize,
    pub delta_g: usize,
    pub delta_t: usize,
    pub height: usize,
    /// `d` is valid, `d <= height + 1` and `Δ_G >= 2`.
    pub applicable: bool,
    /// `d(Δ_T - 1) + 1`, or `d` when `Δ_T <= 2`.
    pub lower: u64,
    /// `2d(Δ_G - 1)`.
    pub upper: u64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl BoundsVerdict {
    /// Not-applicable verdicts pass vacuously.
    pub fn passed(&self) -> bool {
        !self.applicable || (self.lower_ok && self.upper_ok)
    }
}

pub fn check_color_bounds(g: &Graph, t: &RootedTree, d: usize, c: &Coloring) -> Result<BoundsVerdict> {
    c.ensure_len(g.n())?;
    c.ensure_total()?;
    let h = u64::from(c.colors_used_max());
    let delta_g = g.max_degree();
    let delta_t = t.max_degree();
    let height = t.height();
    let applicable = d >= min_valid_d(g, t)? && d <= height + 1 && delta_g >= 2;
    let d64 = d as u64;
    let lower = if delta_t >= 3 {
        d64 * (delta_t as u64 - 1) + 1
    } else {
        d64
    };
    let upper = 2 * d64 * (delta_g.max(1) as u64 - 1);
    Ok(BoundsVerdict {
        h,
        d,
        delta_g,
        delta_t,
        height,
        applicable,
        lower,
        upper,
        lower_ok: h >= lower,
        upper_ok: h <= upper,
    })
}
