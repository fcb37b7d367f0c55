//! Monte-Carlo estimate of the Lyapunov spectrum of i.i.d. random products of
//! finitely many matrices.
//!
//! An orthonormal frame is pushed through the product and re-orthonormalised by
//! Householder QR every `renorm_interval` steps. The exponents are the averaged
//! logarithms of the diagonal of `R`; standard errors come from batch means.
//!
//! Randomness: `ChaCha20Rng::seed_from_u64(seed)` with stream number equal to
//! the replicate index, so replicates of one seed never share a keystream.

use nalgebra::DMatrix;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::BigRat;
use crate::error::{Error, Result};
use crate::symplectic::IntMatrix;

/// Name of the generator recorded with every estimate.
pub const RNG_NAME: &str = "ChaCha20 (rand_chacha 0.3), seed_from_u64(seed), stream = replicate";

/// Number of batches used for the batch-means standard error.
pub const BATCHES: usize = 32;

#[derive(Clone, Debug)]
pub struct RandomWalkSpec {
    generators: Vec<DMatrix<f64>>,
    weights: Vec<BigRat>,
    pub steps: u64,
    pub seed: u64,
    pub renorm_interval: u64,
}

impl RandomWalkSpec {
    /// Generators given as real matrices. Weights must be positive and sum to one.
    pub fn new(generators: Vec<DMatrix<f64>>, weights: Vec<BigRat>, steps: u64, seed: u64) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidWalk("no generators".into()))?;
        let dim = first.nrows();
        if generators.iter().any(|g| g.nrows() != dim || g.ncols() != dim) {
            return Err(Error::InvalidWalk("generators must be square of one size".into()));
        }
        if weights.len() != generators.len() {
            return Err(Error::InvalidWalk(format!(
                "{} weights for {} generators",
                weights.len(),
                generators.len()
            )));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidWalk("weights must be positive".into()));
        }
        let total: BigRat = weights.iter().fold(BigRat::zero(), |acc, w| acc + w);
        if total != BigRat::from_integer(1.into()) {
            return Err(Error::InvalidWalk(format!("weights sum to {total}, not 1")));
        }
        if steps == 0 {
            return Err(Error::InvalidWalk("steps must be positive".into()));
        }
        Ok(Self {
            generators,
            weights,
            steps,
            seed,
            renorm_interval: 1,
        })
    }

    pub fn from_int_generators(generators: &[IntMatrix], weights: Vec<BigRat>, steps: u64, seed: u64) -> Result<Self> {
        Self::new(generators.iter().map(IntMatrix::to_f64).collect(), weights, steps, seed)
    }

    /// Equal weight on every generator.
    pub fn uniform(generators: &[IntMatrix], steps: u64, seed: u64) -> Result<Self> {
        let n = generators.len().max(1);
        let w = BigRat::new(1.into(), (n as i64).into());
        Self::from_int_generators(generators, vec![w; generators.len()], steps, seed)
    }

    pub fn with_renorm_interval(mut self, interval: u64) -> Result<Self> {
        if interval == 0 {
            return Err(Error::InvalidWalk("renorm interval must be positive".into()));
        }
        self.renorm_interval = interval;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    pub fn weights(&self) -> &[BigRat] {
        &self.weights
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovEstimate {
    /// Descending, in nats per step.
    pub exponents: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub steps: u64,
    pub seed: u64,
    pub replicate: u64,
    pub rng: &'static str,
}

impl LyapunovEstimate {
    /// `λᵢ + λ_{n+1−i}` for the first half of the spectrum.
    pub fn pairing_defects(&self) -> Vec<f64> {
        let n = self.exponents.len();
        (0..n / 2)
            .map(|i| self.exponents[i] + self.exponents[n - 1 - i])
            .collect()
    }
}

fn mean_and_se(batches: &[f64]) -> (f64, f64) {
    let k = batches.len() as f64;
    let mean = batches.iter().sum::<f64>() / k;
    if batches.len() < 2 {
        return (mean, 0.0);
    }
    let var = batches.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

pub fn estimate_spectrum(spec: &RandomWalkSpec) -> Result<LyapunovEstimate> {
    estimate_replicate(spec, 0)
}

/// One walk on stream `replicate` of the seed.
pub fn estimate_replicate(spec: &RandomWalkSpec, replicate: u64) -> Result<LyapunovEstimate> {
    let n = spec.dim();
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    rng.set_stream(replicate);
    let weights: Vec<f64> = spec
        .weights
        .iter()
        .map(|w| w.to_f64().unwrap_or(f64::NAN))
        .collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidWalk(e.to_string()))?;

    let renorms = spec.steps.div_ceil(spec.renorm_interval);
    let batches = (renorms as usize).clamp(1, BATCHES);
    let mut batch_sums = vec![vec![0.0; n]; batches];
    let mut batch_steps = vec![0u64; batches];

    let mut frame = DMatrix::<f64>::identity(n, n);
    let mut done = 0u64;
    let mut event = 0u64;
    while done < spec.steps {
        let chunk = spec.renorm_interval.min(spec.steps - done);
        for _ in 0..chunk {
            let g = &spec.generators[dist.sample(&mut rng)];
            frame = g * frame;
        }
        done += chunk;
        if frame.iter().any(|x| !x.is_finite()) {
            return Err(Error::RenormOverflow(done));
        }
        let qr = frame.qr();
        let r = qr.r();
        let batch = (event * batches as u64 / renorms) as usize;
        for i in 0..n {
            let d = r[(i, i)].abs();
            if d == 0.0 || !d.is_finite() {
                return Err(Error::RenormOverflow(done));
            }
            batch_sums[batch][i] += d.ln();
        }
        batch_steps[batch] += chunk;
        frame = qr.q();
        event += 1;
    }

    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let rates: Vec<f64> = (0..batches)
                .map(|b| batch_sums[b][i] / batch_steps[b] as f64)
                .collect();
            // overall rate is the step-weighted mean; batch spread gives the error
            let total: f64 = (0..batches).map(|b| batch_sums[b][i]).sum();
            let (_, se) = mean_and_se(&rates);
            (total / spec.steps as f64, se)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(LyapunovEstimate {
        exponents: pairs.iter().map(|p| p.0).collect(),
        std_errors: pairs.iter().map(|p| p.1).collect(),
        steps: spec.steps,
        seed: spec.seed,
        replicate,
        rng: RNG_NAME,
    })
}

/// Independent replicates `0..replicates` run in parallel.
pub fn estimate_ensemble(spec: &RandomWalkSpec, replicates: u64) -> Result<Vec<LyapunovEstimate>> {
    (0..replicates)
        .into_par_iter()
        .map(|r| estimate_replicate(spec, r))
        .collect()
}
