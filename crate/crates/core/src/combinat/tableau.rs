//! Standard Young tableaux in French notation and the gravity-drop tableau
//! of a composition.
//!
//! Boxes live in the nonnegative quadrant with the first box at (0, 0);
//! a box at (col, row) has coarm col and coleg row, so its q,t-content is
//! q^col * t^row.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::{QPoly, Rat};

use super::partition::{Composition, Partition};

/// A standard Young tableau. `rows[0]` is the bottom row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len()).collect());
        let t = Tableau { shape, rows };
        if !t.is_standard() {
            return Err(Error::Invalid("not a standard Young tableau".into()));
        }
        Ok(t)
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.shape.size()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// (col, row) of the box holding `label` (1-based).
    pub fn position(&self, label: usize) -> Option<(usize, usize)> {
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v == label {
                    return Some((c, r));
                }
            }
        }
        None
    }

    /// Positions indexed by label: `positions()[i]` is the box of label i+1.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut pos = vec![(0, 0); self.size()];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                pos[v - 1] = (c, r);
            }
        }
        pos
    }

    pub fn is_standard(&self) -> bool {
        let n = self.size();
        let mut seen = vec![false; n + 1];
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 && row.len() > self.rows[r - 1].len() {
                return false;
            }
            for (c, &v) in row.iter().enumerate() {
                if v == 0 || v > n || seen[v] {
                    return false;
                }
                seen[v] = true;
                if c > 0 && row[c - 1] >= v {
                    return false;
                }
                if r > 0 && self.rows[r - 1][c] >= v {
                    return false;
                }
            }
        }
        true
    }
}

/// All standard Young tableaux of the given shape, in a fixed order
/// (labels placed greedily by ascending row index).
pub fn syt(shape: &Partition) -> Vec<Tableau> {
    let n = shape.size();
    let parts = shape.parts().to_vec();
    let mut fills: Vec<Vec<usize>> = parts.iter().map(|&len| Vec::with_capacity(len)).collect();
    let mut out = Vec::new();
    fn rec(
        label: usize,
        n: usize,
        parts: &[usize],
        fills: &mut Vec<Vec<usize>>,
        out: &mut Vec<Tableau>,
    ) {
        if label > n {
            let rows = fills.clone();
            let shape = Partition::new(parts.to_vec());
            out.push(Tableau { shape, rows });
            return;
        }
        for r in 0..parts.len() {
            let filled = fills[r].len();
            if filled >= parts[r] {
                continue;
            }
            if r > 0 && filled >= fills[r - 1].len() {
                continue;
            }
            fills[r].push(label);
            rec(label + 1, n, parts, fills, out);
            fills[r].pop();
        }
    }
    if n == 0 {
        return vec![Tableau { shape: Partition::empty(), rows: vec![] }];
    }
    rec(1, n, &parts, &mut fills, &mut out);
    out
}

/// The gravity-drop tableau of a composition: horizontal strips of sizes
/// alpha_1, alpha_2, ... are dropped in order, each box falling to the lowest
/// free cell of its column. The result is standard of shape sort(alpha).
pub fn composition_tableau(alpha: &Composition) -> Tableau {
    let max_cols = alpha.parts().iter().copied().max().unwrap_or(0);
    let mut heights = vec![0usize; max_cols];
    let mut cells: Vec<(usize, usize, usize)> = Vec::new(); // (row, col, label)
    let mut label = 1usize;
    for &a in alpha.parts() {
        for c in 0..a {
            cells.push((heights[c], c, label));
            heights[c] += 1;
            label += 1;
        }
    }
    let nrows = heights.iter().copied().max().unwrap_or(0);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    cells.sort();
    for (r, _c, l) in cells {
        rows[r].push(l);
    }
    let shape = Partition::new(rows.iter().map(|r| r.len()).collect());
    Tableau { shape, rows }
}

/// Content exponents at t = 1, read strip by strip: position within the
/// strip, zero-based.
pub fn content_exponents(alpha: &Composition) -> Vec<usize> {
    let mut out = Vec::with_capacity(alpha.size());
    for &a in alpha.parts() {
        out.extend(0..a);
    }
    out
}

/// The t = 1 contents of the composition tableau as monomials in q.
pub fn content_vector_t1(alpha: &Composition) -> Vec<QPoly> {
    content_exponents(alpha)
        .into_iter()
        .map(|e| Poly::monomial(e, Rat::from_integer(1.into())))
        .collect()
}
