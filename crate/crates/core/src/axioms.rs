//! Seeded sampling and exact checks of the seminorm axioms.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use num_traits::{Signed, Zero};

use crate::norms::FunctionalSpec;
use crate::rational::{self, Rational};
use crate::seq::SparseSeq;

pub const MAX_INDEX: usize = 20;
pub const MAX_SUPPORT: usize = 6;
pub const MAX_NUMERATOR: i64 = 50;
pub const MAX_DENOMINATOR: i64 = 10;

/// Deterministic source of small rational test data.
///
/// Sequences have support drawn from `1..=20` with `0..=6` entries, and
/// coefficients `p/q` with `|p| <= 50`, `1 <= q <= 10`.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Rational {
        let p = self.rng.random_range(-MAX_NUMERATOR..=MAX_NUMERATOR);
        let q = self.rng.random_range(1..=MAX_DENOMINATOR);
        rational::frac(p, q)
    }

    pub fn index(&mut self, max_index: usize) -> usize {
        self.rng.random_range(1..=max_index)
    }

    pub fn seq(&mut self) -> SparseSeq {
        self.seq_within(MAX_INDEX, MAX_SUPPORT)
    }

    /// A sequence supported in `1..=max_index` with at most `max_support`
    /// entries.
    pub fn seq_within(&mut self, max_index: usize, max_support: usize) -> SparseSeq {
        let size = self.rng.random_range(0..=max_support.min(max_index));
        let picks = index::sample(&mut self.rng, max_index, size).into_vec();
        let mut pairs: Vec<(usize, Rational)> = Vec::with_capacity(size);
        for i in picks {
            pairs.push((i + 1, self.rational()));
        }
        SparseSeq::from_pairs(pairs).expect("distinct indices >= 1")
    }

    pub fn seqs(&mut self, count: usize) -> Vec<SparseSeq> {
        (0..count).map(|_| self.seq()).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// One sampled input `(x, y, alpha)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomSample {
    pub x: SparseSeq,
    pub y: SparseSeq,
    #[serde(with = "rational::as_string")]
    pub alpha: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// Samples with `S(x) < 0`.
    pub nonnegativity_violations: Vec<AxiomSample>,
    /// Samples with `S(alpha x) != |alpha| S(x)`.
    pub homogeneity_violations: Vec<AxiomSample>,
    /// Samples with `S(x + y) > S(x) + S(y)`.
    pub subadditivity_violations: Vec<AxiomSample>,
    /// Samples with `|S(x) - S(y)| > S(x - y)`.
    pub reverse_triangle_violations: Vec<AxiomSample>,
    pub samples_checked: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.nonnegativity_violations.is_empty()
            && self.homogeneity_violations.is_empty()
            && self.subadditivity_violations.is_empty()
            && self.reverse_triangle_violations.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.nonnegativity_violations.len()
            + self.homogeneity_violations.len()
            + self.subadditivity_violations.len()
            + self.reverse_triangle_violations.len()
    }
}

/// Checks one sample against all four inequalities, recording failures.
pub fn check_sample(spec: &FunctionalSpec, sample: &AxiomSample, report: &mut AxiomReport) {
    let AxiomSample { x, y, alpha } = sample;
    let sx = spec.evaluate(x);
    let sy = spec.evaluate(y);
    if sx.is_negative() || sy.is_negative() {
        report.nonnegativity_violations.push(sample.clone());
    }
    if spec.evaluate(&x.scale(alpha)) != alpha.abs() * &sx {
        report.homogeneity_violations.push(sample.clone());
    }
    if spec.evaluate(&(x + y)) > &sx + &sy {
        report.subadditivity_violations.push(sample.clone());
    }
    if (&sx - &sy).abs() > spec.evaluate(&(x - y)) {
        report.reverse_triangle_violations.push(sample.clone());
    }
    report.samples_checked += 1;
}

/// Exact axiom checks on `sample_count` seeded triples.
pub fn verify_axioms(spec: &FunctionalSpec, sample_count: usize, seed: u64) -> AxiomReport {
    let mut sampler = Sampler::new(seed);
    let mut report = AxiomReport::default();
    for _ in 0..sample_count {
        let sample = AxiomSample {
            x: sampler.seq(),
            y: sampler.seq(),
            alpha: sampler.rational(),
        };
        check_sample(spec, &sample, &mut report);
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MajorizationViolation {
    pub x: SparseSeq,
    #[serde(with = "rational::as_string")]
    pub lower: Rational,
    #[serde(with = "rational::as_string")]
    pub upper: Rational,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MajorizationReport {
    pub violations: Vec<MajorizationViolation>,
    pub samples_checked: usize,
}

impl MajorizationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every `x` with `lower(x) > upper(x)`.
pub fn check_majorization(
    lower: &FunctionalSpec,
    upper: &FunctionalSpec,
    samples: &[SparseSeq],
) -> MajorizationReport {
    let mut report = MajorizationReport::default();
    for x in samples {
        let lo = lower.evaluate(x);
        let hi = upper.evaluate(x);
        if lo > hi {
            report.violations.push(MajorizationViolation {
                x: x.clone(),
                lower: lo,
                upper: hi,
            });
        }
        report.samples_checked += 1;
    }
    report
}

pub fn sample_majorization(
    lower: &FunctionalSpec,
    upper: &FunctionalSpec,
    sample_count: usize,
    seed: u64,
) -> MajorizationReport {
    let samples = Sampler::new(seed).seqs(sample_count);
    check_majorization(lower, upper, &samples)
}

/// Nonzero samples on which `spec` vanishes.
pub fn kernel_hits(spec: &FunctionalSpec, samples: &[SparseSeq]) -> Vec<SparseSeq> {
    samples
        .iter()
        .filter(|x| !x.is_zero() && spec.evaluate(x).is_zero())
        .cloned()
        .collect()
}
