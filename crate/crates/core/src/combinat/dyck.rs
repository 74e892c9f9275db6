//! Rational Dyck paths under (or strictly under) a slope-m/n diagonal.

use num_integer::Integer;

use crate::error::{Error, Result};

/// A lattice path in a `kn`-wide, `km`-tall rectangle staying weakly below
/// the diagonal, recorded by its horizontal steps per height level.
///
/// `steps[j]` is the number of east steps at height `j`; trailing zero
/// entries are dropped, internal zeros are kept (they matter for the
/// strictly-below bookkeeping). The area counts full lattice squares between
/// the path and the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyckPath {
    steps: Vec<usize>,
    area: usize,
    width: usize,
    height: usize,
}

impl DyckPath {
    /// Horizontal steps per height, trailing zeros dropped.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// The nonzero horizontal steps, in path order (e_0 = 1 is dropped).
    pub fn composition(&self) -> Vec<usize> {
        self.steps.iter().copied().filter(|&s| s > 0).collect()
    }

    pub fn area(&self) -> usize {
        self.area
    }

    pub fn rectangle(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Enumerate all Dyck paths in the `kn` x `km` rectangle weakly below the
/// diagonal of slope m/n, or (with `strict`) touching it only at the two
/// endpoints. Deterministic lexicographic order on the step vectors.
pub fn dyck_paths(m: usize, n: usize, k: usize, strict: bool) -> Result<Vec<DyckPath>> {
    if n < 1 || k < 1 {
        return Err(Error::Invalid("dyck_paths requires n >= 1 and k >= 1".into()));
    }
    if m.gcd(&n) != 1 {
        return Err(Error::NonCoprime { m, n });
    }
    let width = k * n;
    let height = k * m;
    if height == 0 {
        // Slope zero: the single path along the bottom edge.
        return Ok(vec![DyckPath {
            steps: if width > 0 { vec![width] } else { vec![] },
            area: 0,
            width,
            height,
        }]);
    }
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(height);
    // Walk height levels 0..height; at level j we choose the number of east
    // steps taken there, then take one north step. All east steps happen
    // strictly below the top edge, so the step vector determines the path.
    fn rec(
        m: usize,
        n: usize,
        width: usize,
        height: usize,
        strict: bool,
        level: usize,
        x: usize,
        area: usize,
        steps: &mut Vec<usize>,
        out: &mut Vec<DyckPath>,
    ) {
        if level == height {
            if x == width {
                let mut s = steps.clone();
                while s.last() == Some(&0) {
                    s.pop();
                }
                out.push(DyckPath { steps: s, area, width, height });
            }
            return;
        }
        // After the north step to height level+1 at abscissa x', we need
        // n*(level+1) <= m*x' (weak) or, for strict paths, no lattice point
        // of the path on the open diagonal.
        for e in 0..=(width - x) {
            let nx = x + e;
            if n * (level + 1) > m * nx {
                continue;
            }
            if strict {
                // The east run covers points (x..=nx, level); the north step
                // lands on (nx, level+1). Reject any interior diagonal touch.
                let run_touch = (x..=nx).any(|px| {
                    m * px == n * level && !(px == 0 && level == 0)
                });
                let north_touch =
                    m * nx == n * (level + 1) && !(nx == width && level + 1 == height);
                if run_touch || north_touch {
                    continue;
                }
            }
            // Full squares gained in the columns covered by this east run:
            // column px holds the squares from height `level` up to
            // floor(m*px/n) - 1, i.e. max(0, floor(m*px/n) - level) of them.
            let mut gained = 0usize;
            for px in x..nx {
                let cap = (m * px) / n;
                if cap > level {
                    gained += cap - level;
                }
            }
            steps.push(e);
            rec(m, n, width, height, strict, level + 1, nx, area + gained, steps, out);
            steps.pop();
        }
    }
    rec(m, n, width, height, strict, 0, 0, 0, &mut steps, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;

    #[test]
    fn twenty_three_paths_for_three_halves_doubled() {
        let paths = dyck_paths(3, 2, 2, false).unwrap();
        assert_eq!(paths.len(), 23);
    }

    #[test]
    fn unit_square() {
        let paths = dyck_paths(1, 1, 1, false).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].composition(), vec![1]);
        assert_eq!(paths[0].area(), 0);
    }

    #[test]
    fn strict_paths_with_internal_zero_steps() {
        // 3-wide, 4-tall, strictly below the slope-4/3 diagonal.
        let paths = dyck_paths(4, 3, 1, true).unwrap();
        let seqs: Vec<Vec<usize>> = paths.iter().map(|p| p.steps().to_vec()).collect();
        let mut expected = vec![
            vec![3],
            vec![2, 1],
            vec![2, 0, 1],
            vec![1, 2],
            vec![1, 1, 1],
        ];
        expected.sort();
        let mut got = seqs.clone();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn areas_in_small_rectangles() {
        // Slope 1: the 2x2 square has paths (1,1) area 0 and (2) area 1.
        let paths = dyck_paths(1, 1, 2, false).unwrap();
        let mut by_comp: Vec<(Vec<usize>, usize)> = paths
            .iter()
            .map(|p| (p.composition(), p.area()))
            .collect();
        by_comp.sort();
        assert_eq!(by_comp, vec![(vec![1, 1], 0), (vec![2], 1)]);
        // Slope 3/2 in the 2x3 rectangle: (1,1) area 0 and (2) area 1.
        let paths = dyck_paths(3, 2, 1, false).unwrap();
        let mut by_comp: Vec<(Vec<usize>, usize)> =
            paths.iter().map(|p| (p.composition(), p.area())).collect();
        by_comp.sort();
        assert_eq!(by_comp, vec![(vec![1, 1], 0), (vec![2], 1)]);
    }

    #[test]
    fn rational_catalan_counts() {
        for m in 1..=8usize {
            for n in 1..=8usize {
                if m.gcd(&n) != 1 {
                    continue;
                }
                let count = dyck_paths(m, n, 1, false).unwrap().len();
                let expected = binomial(m + n, n) / (m + n);
                assert_eq!(count, expected, "rational Catalan failed for ({m},{n})");
            }
        }
    }

    #[test]
    fn strict_equals_weak_for_coprime_k1() {
        // With a primitive diagonal there are no interior lattice touches.
        for (m, n) in [(3usize, 2usize), (4, 3), (5, 3)] {
            let weak = dyck_paths(m, n, 1, false).unwrap().len();
            let strict = dyck_paths(m, n, 1, true).unwrap().len();
            assert_eq!(weak, strict);
        }
        // With k = 2 strictness bites: the slope-1 4x4 square.
        let weak = dyck_paths(1, 1, 2, false).unwrap().len();
        let strict = dyck_paths(1, 1, 2, true).unwrap().len();
        assert!(strict < weak);
    }

    #[test]
    fn non_coprime_is_rejected() {
        assert!(matches!(
            dyck_paths(2, 4, 1, false),
            Err(Error::NonCoprime { m: 2, n: 4 })
        ));
    }
}
