//! Dyadic cubes in `R^n x R^n` and the maximal admissible cubes relative to
//! the diagonal.
//!
//! A cube `Q x R` of level `m` has sidelength `l = 2^m`, with
//! `Q = prod [q_i l, (q_i + 1) l)` and `R` likewise. It is admissible when
//! `l = 1`, or `l > 1` and the open 2-dilate (same center, twice the side)
//! misses the diagonal. In corner units that is `|q_j - r_j| >= 2` for
//! some `j`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicCube {
    pub n: usize,
    pub m: i32,
    pub q: Vec<i64>,
    pub r: Vec<i64>,
}

fn floor_div(x: f64, m: i32) -> i64 {
    (x * 2f64.powi(-m)).floor() as i64
}

impl DyadicCube {
    pub fn new(m: i32, q: Vec<i64>, r: Vec<i64>) -> Result<Self> {
        if q.len() != r.len() || q.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "corners of lengths {} and {}",
                q.len(),
                r.len()
            )));
        }
        Ok(DyadicCube { n: q.len(), m, q, r })
    }

    pub fn sidelength(&self) -> f64 {
        2f64.powi(self.m)
    }

    /// Half-open membership `q_i l <= x_i < (q_i + 1) l`, same for `y`.
    pub fn contains(&self, x: &[f64], y: &[f64]) -> bool {
        let inside = |v: f64, c: i64| floor_div(v, self.m) == c;
        x.iter().zip(&self.q).all(|(&v, &c)| inside(v, c))
            && y.iter().zip(&self.r).all(|(&v, &c)| inside(v, c))
    }

    pub fn parent(&self) -> DyadicCube {
        DyadicCube {
            n: self.n,
            m: self.m + 1,
            q: self.q.iter().map(|v| v.div_euclid(2)).collect(),
            r: self.r.iter().map(|v| v.div_euclid(2)).collect(),
        }
    }

    /// Ancestor at level `level >= m`.
    pub fn ancestor(&self, level: i32) -> DyadicCube {
        let shift = (level - self.m) as u32;
        DyadicCube {
            n: self.n,
            m: level,
            q: self.q.iter().map(|v| v >> shift).collect(),
            r: self.r.iter().map(|v| v >> shift).collect(),
        }
    }

    /// Lower and upper corners of `Q` (first) and `R` (second) per axis.
    pub fn bounds(&self) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
        let l = self.sidelength();
        let b = |c: &[i64]| c.iter().map(|&v| (v as f64 * l, (v + 1) as f64 * l)).collect();
        (b(&self.q), b(&self.r))
    }

    pub fn center(&self) -> (Vec<f64>, Vec<f64>) {
        let l = self.sidelength();
        let c = |c: &[i64]| c.iter().map(|&v| (v as f64 + 0.5) * l).collect();
        (c(&self.q), c(&self.r))
    }

    /// `inf max_j |x_j - y_j|` over the closed cube: `max_j (|q_j - r_j| - 1)^+ l`.
    pub fn separation(&self) -> f64 {
        let l = self.sidelength();
        self.q
            .iter()
            .zip(&self.r)
            .map(|(a, b)| ((a - b).abs() - 1).max(0) as f64 * l)
            .fold(0.0, f64::max)
    }
}

/// The level-`m` cube containing `(x, y)`.
pub fn cube_of(x: &[f64], y: &[f64], m: i32) -> DyadicCube {
    assert_eq!(x.len(), y.len(), "points of different dimension");
    DyadicCube {
        n: x.len(),
        m,
        q: x.iter().map(|&v| floor_div(v, m)).collect(),
        r: y.iter().map(|&v| floor_div(v, m)).collect(),
    }
}

pub fn is_admissible(c: &DyadicCube) -> Result<bool> {
    if c.m < 0 {
        return Err(Error::InvalidArgument(format!(
            "sub-unit cube of level {} is outside the decomposition",
            c.m
        )));
    }
    Ok(c.m == 0 || c.q.iter().zip(&c.r).any(|(a, b)| (a - b).abs() >= 2))
}

pub fn is_maximal(c: &DyadicCube) -> Result<bool> {
    Ok(is_admissible(c)? && !is_admissible(&c.parent())?)
}

/// Walks up from the unit cube of `(x, y)` while the parent stays admissible.
pub fn maximal_admissible(x: &[f64], y: &[f64]) -> DyadicCube {
    let mut c = cube_of(x, y, 0);
    loop {
        let p = c.parent();
        if is_admissible(&p).expect("levels are nonnegative") {
            c = p;
        } else {
            return c;
        }
    }
}

/// Axis-aligned box `prod [lo_i, hi_i)` in `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Window {
    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        Window {
            lo: vec![lo; n],
            hi: vec![hi; n],
        }
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| rng.random_range(a..b))
            .collect()
    }
}

/// All level-`m` dyadic `R` inside `window` with `Q x R` maximal admissible,
/// where `Q` has corner `q`. At most `6^n` exist.
pub fn partners(m: i32, q: &[i64], window: &Window) -> Result<Vec<DyadicCube>> {
    let n = q.len();
    if window.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "window in R^{} for a cube in R^{n}",
            window.n()
        )));
    }
    let l = 2f64.powi(m);
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| ((window.lo[i] / l).ceil() as i64, (window.hi[i] / l).floor() as i64 - 1))
        .collect();
    if ranges.iter().any(|(a, b)| a > b) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut r: Vec<i64> = ranges.iter().map(|(a, _)| *a).collect();
    loop {
        let c = DyadicCube {
            n,
            m,
            q: q.to_vec(),
            r: r.clone(),
        };
        if is_maximal(&c)? {
            out.push(c);
        }
        let mut axis = 0;
        loop {
            if axis == n {
                let bound = 6usize.pow(n as u32);
                if out.len() > bound {
                    return Err(Error::ContractViolation(format!(
                        "{} partners exceed the bound {bound}",
                        out.len()
                    )));
                }
                return Ok(out);
            }
            r[axis] += 1;
            if r[axis] <= ranges[axis].1 {
                break;
            }
            r[axis] = ranges[axis].0;
            axis += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub samples: usize,
    pub distinct_cubes: usize,
    /// Returned cubes that do not contain their pair.
    pub containment_violations: usize,
    /// Pairs of distinct returned cubes that intersect.
    pub overlap_violations: usize,
    /// Returned cubes that are not maximal admissible.
    pub maximality_violations: usize,
}

impl PartitionReport {
    pub fn ok(&self) -> bool {
        self.containment_violations == 0
            && self.overlap_violations == 0
            && self.maximality_violations == 0
    }
}

/// Samples `samples` seeded pairs in `window x window` and checks that the
/// maximal cubes contain their pairs and are pairwise identical or disjoint.
pub fn partition_check(window: &Window, samples: usize, seed: u64) -> Result<PartitionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cubes = HashSet::new();
    let mut containment_violations = 0;
    for _ in 0..samples {
        let x = window.sample(&mut rng);
        let y = window.sample(&mut rng);
        let c = maximal_admissible(&x, &y);
        if !c.contains(&x, &y) {
            containment_violations += 1;
        }
        cubes.insert(c);
    }
    check_family(&cubes, samples, containment_violations)
}

/// Disjointness and maximality of a family of returned cubes. Two dyadic
/// cubes intersect iff one is an ancestor of the other.
pub fn check_family(
    cubes: &HashSet<DyadicCube>,
    samples: usize,
    containment_violations: usize,
) -> Result<PartitionReport> {
    let top = cubes.iter().map(|c| c.m).max().unwrap_or(0);
    let mut overlap_violations = 0;
    let mut maximality_violations = 0;
    for c in cubes {
        if !is_maximal(c)? {
            maximality_violations += 1;
        }
        for level in (c.m + 1)..=top {
            if cubes.contains(&c.ancestor(level)) {
                overlap_violations += 1;
            }
        }
    }
    Ok(PartitionReport {
        samples,
        distinct_cubes: cubes.len(),
        containment_violations,
        overlap_violations,
        maximality_violations,
    })
}
