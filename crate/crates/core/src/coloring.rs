//! Vertex colorings with an explicit unknown value.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Vertex;

/// A color (time slot or frequency). The twice-degree algorithm numbers
/// colors from 1, the d-band algorithm from 0; this type does not care.
pub type Color = u32;

/// Maps each vertex to a color or to unknown (`None`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<Option<Color>>,
}

impl Coloring {
    pub fn unknown(n: usize) -> Self {
        Self {
            colors: vec![None; n],
        }
    }

    pub fn from_total(colors: Vec<Color>) -> Self {
        Self {
            colors: colors.into_iter().map(Some).collect(),
        }
    }

    pub fn from_partial(colors: Vec<Option<Color>>) -> Self {
        Self { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.colors[v]
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        self.colors[v] = Some(c);
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    /// Errors with the first uncolored vertex if the coloring is partial.
    pub fn ensure_total(&self) -> Result<()> {
        match self.colors.iter().position(Option::is_none) {
            Some(v) => Err(Error::PartialColoring(v)),
            None => Ok(()),
        }
    }

    pub fn ensure_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::ColoringSize {
                expected: n,
                got: self.len(),
            })
        }
    }

    /// Largest assigned color, if any vertex is colored.
    pub fn max_color(&self) -> Option<Color> {
        self.colors.iter().flatten().copied().max()
    }

    /// Gap-inclusive color count: greatest assigned color plus one.
    pub fn colors_used_max(&self) -> u32 {
        self.max_color().map_or(0, |c| c + 1)
    }

    /// Number of distinct assigned colors.
    pub fn colors_used_distinct(&self) -> usize {
        self.colors.iter().flatten().collect::<BTreeSet<_>>().len()
    }
}
