use crate::coloring::Color;
use crate::error::{Error, Result};

/// Colors available to a vertex at `level`: `level mod d + i*d` for
/// `0 <= i <= i_max`, ascending.
pub fn palette(level: usize, d: usize, i_max: usize) -> Result<impl Iterator<Item = Color>> {
    if d == 0 {
        return Err(Error::InvalidParameter("band count d must be positive".into()));
    }
    Ok(bands(level, d, i_max))
}

fn bands(level: usize, d: usize, i_max: usize) -> impl Iterator<Item = Color> {
    let base = (level % d) as Color;
    let step = d as Color;
    (0..=i_max as Color).map(move |i| base + i * step)
}

/// Default palette cap for a graph of maximum degree `max_degree`.
pub fn default_cap(max_degree: usize) -> usize {
    2 * (max_degree + 1)
}

/// Smallest palette color not rejected by `forbidden`.
pub fn first_free(level: usize, d: usize, i_max: usize, forbidden: impl Fn(Color) -> bool) -> Option<Color> {
    bands(level, d.max(1), i_max).find(|&k| !forbidden(k))
}
