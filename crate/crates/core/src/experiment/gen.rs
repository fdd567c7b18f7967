//! Seeded generators for commuting tuples and their perturbations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{eigh, CMatrix, CommutingTuple, HermitianMatrix, DEFAULT_COMMUTATION_TOL};
use crate::C64;

/// Derives an independent stream seed from a base seed and a path of tags.
pub fn sub_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut z = seed;
    for &t in tags {
        z = splitmix(z ^ splitmix(t.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    z
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Axis-aligned box for spectrum points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SpectrumBox {
    pub fn cube(n: usize, half_width: f64) -> Self {
        SpectrumBox {
            lo: vec![-half_width; n],
            hi: vec![half_width; n],
        }
    }

    pub fn around(center: &[f64], half_width: f64) -> Self {
        SpectrumBox {
            lo: center.iter().map(|c| c - half_width).collect(),
            hi: center.iter().map(|c| c + half_width).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| if a < b { rng.random_range(a..b) } else { a })
            .collect()
    }
}

/// Orthonormalised complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::gaussian(dim, dim, rng)
        .orthonormalize_columns()
        .expect("Gaussian matrices have full rank almost surely")
}

/// `A_j = U diag(points[.][j]) U*`.
pub fn tuple_from(u: &CMatrix, points: &[Vec<f64>]) -> Result<CommutingTuple> {
    let dim = u.rows();
    if points.len() != dim || dim == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{} spectrum points for dimension {dim}",
            points.len()
        )));
    }
    let n = points[0].len();
    let adj = u.adjoint();
    let mats = (0..n)
        .map(|j| {
            let scaled = CMatrix::from_fn(dim, dim, |i, k| u[(i, k)] * points[k][j]);
            HermitianMatrix::new((&scaled * &adj).hermitian_part())
        })
        .collect::<Result<Vec<_>>>()?;
    CommutingTuple::new(mats, DEFAULT_COMMUTATION_TOL)
}

pub fn gen_commuting_tuple(dim: usize, n: usize, spectrum: &SpectrumBox, seed: u64) -> Result<CommutingTuple> {
    if dim == 0 || n == 0 || spectrum.n() != n {
        return Err(Error::InvalidArgument(format!(
            "need dim, n >= 1 and a box in R^n (dim={dim}, n={n}, box in R^{})",
            spectrum.n()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = haar_unitary(dim, &mut rng);
    let points: Vec<Vec<f64>> = (0..dim).map(|_| spectrum.sample(&mut rng)).collect();
    tuple_from(&u, &points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbMode {
    /// Same eigenbasis, each spectrum coordinate moved by at most `eps`.
    SpectralShift,
    /// `B_j = V A_j V*` with `V = exp(i eps K)`, `K` Hermitian of unit norm.
    BasisRotate,
    /// Half the budget on each of the two moves above.
    Both,
    /// `B` drawn independently of `A`; `eps` only matters when zero.
    Independent,
}

impl PerturbMode {
    pub fn label(self) -> &'static str {
        match self {
            Self::SpectralShift => "spectral-shift",
            Self::BasisRotate => "basis-rotate",
            Self::Both => "both",
            Self::Independent => "independent",
        }
    }
}

/// A pair of tuples together with the measured `max_j |A_j - B_j|_op`.
#[derive(Clone, Debug)]
pub struct PerturbedPair {
    pub a: CommutingTuple,
    pub b: CommutingTuple,
    pub delta: f64,
}

/// `max_j |A_j - B_j|` in the Schatten `p`-norm (`p = inf` for the operator norm).
pub fn tuple_distance(a: &CommutingTuple, b: &CommutingTuple, p: f64) -> Result<f64> {
    let mut worst = 0.0_f64;
    for j in 0..a.n() {
        let d = a.get(j).as_matrix() - b.get(j).as_matrix();
        worst = worst.max(crate::spectral::schatten_norm(&d, p)?);
    }
    Ok(worst)
}

fn unit_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let g = CMatrix::gaussian(dim, dim, rng).hermitian_part();
    let norm = g.op_norm().max(f64::MIN_POSITIVE);
    HermitianMatrix::new(g.scale_real(1.0 / norm).hermitian_part()).expect("Hermitian part")
}

/// `exp(i t K)` for Hermitian `K`.
pub fn unitary_exp(k: &HermitianMatrix, t: f64) -> CMatrix {
    let e = eigh(k);
    let dim = k.dim();
    let scaled = CMatrix::from_fn(dim, dim, |i, c| e.vectors[(i, c)] * C64::from_polar(1.0, t * e.values[c]));
    &scaled * &e.vectors.adjoint()
}

/// Spectrum points for `A`: uniform in `spectrum`, except that the first
/// `clustered` points are drawn from `cluster` when given.
#[derive(Clone, Debug)]
pub struct PairSpec {
    pub dim: usize,
    pub spectrum: SpectrumBox,
    pub cluster: Option<(SpectrumBox, usize)>,
    pub eps: f64,
    pub mode: PerturbMode,
}

pub fn gen_pair(spec: &PairSpec, seed: u64) -> Result<PerturbedPair> {
    let (dim, n) = (spec.dim, spec.spectrum.n());
    if dim == 0 || n == 0 {
        return Err(Error::InvalidArgument("dim and n must be positive".into()));
    }
    if !(spec.eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {}", spec.eps)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = haar_unitary(dim, &mut rng);
    let points: Vec<Vec<f64>> = (0..dim)
        .map(|k| match &spec.cluster {
            Some((b, count)) if k < *count => b.sample(&mut rng),
            _ => spec.spectrum.sample(&mut rng),
        })
        .collect();
    let a = tuple_from(&u, &points)?;
    if spec.eps == 0.0 {
        return Ok(PerturbedPair {
            b: a.clone(),
            a,
            delta: 0.0,
        });
    }
    let shift = |pts: &[Vec<f64>], eps: f64, rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        pts.iter()
            .map(|p| p.iter().map(|v| v + rng.random_range(-eps..=eps)).collect())
            .collect()
    };
    let b = match spec.mode {
        PerturbMode::SpectralShift => tuple_from(&u, &shift(&points, spec.eps, &mut rng))?,
        PerturbMode::BasisRotate => {
            let v = unitary_exp(&unit_hermitian(dim, &mut rng), spec.eps);
            tuple_from(&(&v * &u), &points)?
        }
        PerturbMode::Both => {
            let moved = shift(&points, 0.5 * spec.eps, &mut rng);
            let v = unitary_exp(&unit_hermitian(dim, &mut rng), 0.5 * spec.eps);
            tuple_from(&(&v * &u), &moved)?
        }
        PerturbMode::Independent => {
            let w = haar_unitary(dim, &mut rng);
            let fresh: Vec<Vec<f64>> = (0..dim).map(|_| spec.spectrum.sample(&mut rng)).collect();
            tuple_from(&w, &fresh)?
        }
    };
    let delta = tuple_distance(&a, &b, f64::INFINITY)?;
    Ok(PerturbedPair { a, b, delta })
}

/// Pair with spectrum uniform in `[-half_width, half_width]^n`.
pub fn gen_perturbed_pair(
    dim: usize,
    n: usize,
    half_width: f64,
    eps: f64,
    mode: PerturbMode,
    seed: u64,
) -> Result<PerturbedPair> {
    gen_pair(
        &PairSpec {
            dim,
            spectrum: SpectrumBox::cube(n, half_width),
            cluster: None,
            eps,
            mode,
        },
        seed,
    )
}
