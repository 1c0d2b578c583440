//! Closed-form witness sequences and exact per-term claim checkers.
//!
//! Limits are not decidable from finitely many terms. A certificate here
//! checks the per-n inequalities up to a horizon and carries the limit claim
//! as a note.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use crate::norms::FunctionalSpec;
use crate::rational::{self, Rational};
use crate::report::{CertificateReport, Comparison, Relation, ReportRow, RowKey};
use crate::rule::{PositiveRule, Rule};
use crate::seq::SparseSeq;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("witness index must be >= 1")]
    ZeroIndex,
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Box<Rational>),
    #[error("null bound must be positive at every index")]
    NonPositiveBound,
    #[error("need 0 < beta <= gamma, got beta = {beta}, gamma = {gamma}")]
    BadConstants {
        beta: Box<Rational>,
        gamma: Box<Rational>,
    },
    #[error("pair list is empty")]
    NoPairs,
    #[error("pair ({m},{n}) must satisfy 1 <= m < n")]
    BadPair { m: usize, n: usize },
    #[error("no closed-form modulus for `{norm}` on the {witness} witness")]
    UnsupportedModulus { norm: String, witness: WitnessSpec },
    #[error("empty range: start {start} exceeds n_max {n_max}")]
    EmptyRange { start: usize, n_max: usize },
    #[error("`{0}` is not positive-definite by construction")]
    NotANorm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessSpec {
    /// `e_n / n`.
    ScaledBasis,
    /// `e_n`.
    CanonicalBasis,
    /// `n` entries equal to `1/n`.
    FlatBlock,
    /// `(1/2, 1/4, ..., 1/2^n)`.
    GeometricTail,
}

impl WitnessSpec {
    pub const ALL: [WitnessSpec; 4] = [
        WitnessSpec::ScaledBasis,
        WitnessSpec::CanonicalBasis,
        WitnessSpec::FlatBlock,
        WitnessSpec::GeometricTail,
    ];

    pub fn generate(&self, n: usize) -> Result<SparseSeq, WitnessError> {
        if n < 1 {
            return Err(WitnessError::ZeroIndex);
        }
        let seq = match self {
            WitnessSpec::ScaledBasis => SparseSeq::from_pairs([(n, rational::frac(1, n as i64))]),
            WitnessSpec::CanonicalBasis => SparseSeq::basis(n),
            WitnessSpec::FlatBlock => Ok(SparseSeq::from_dense(
                (0..n).map(|_| rational::frac(1, n as i64)),
            )),
            WitnessSpec::GeometricTail => Ok(SparseSeq::from_dense(
                (1..=n).map(|i| rational::pow2_neg(i as u64)),
            )),
        };
        Ok(seq.expect("index >= 1"))
    }

    pub fn name(&self) -> &'static str {
        match self {
            WitnessSpec::ScaledBasis => "scaled-basis",
            WitnessSpec::CanonicalBasis => "canonical-basis",
            WitnessSpec::FlatBlock => "flat-block",
            WitnessSpec::GeometricTail => "geometric-tail",
        }
    }
}

impl fmt::Display for WitnessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        WitnessSpec::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| {
                format!("unknown witness `{s}` (expected scaled-basis, canonical-basis, flat-block or geometric-tail)")
            })
    }
}

/// `norm(x_n) <= null_bound(n)` and `seminorm(x_n) >= epsilon` for every
/// `n >= start`: the norm tends to zero along the witness while the
/// seminorm stays away from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscontinuityClaim {
    pub seminorm: FunctionalSpec,
    pub norm: FunctionalSpec,
    pub witness: WitnessSpec,
    epsilon: Rational,
    null_bound: PositiveRule,
    pub start: usize,
}

impl DiscontinuityClaim {
    pub fn new(
        seminorm: FunctionalSpec,
        norm: FunctionalSpec,
        witness: WitnessSpec,
        epsilon: Rational,
        null_bound: Rule,
        start: usize,
    ) -> Result<Self, WitnessError> {
        if !epsilon.is_positive() {
            return Err(WitnessError::NonPositiveEpsilon(Box::new(epsilon)));
        }
        if start < 1 {
            return Err(WitnessError::ZeroIndex);
        }
        let null_bound =
            PositiveRule::new(null_bound).map_err(|_| WitnessError::NonPositiveBound)?;
        Ok(Self {
            seminorm,
            norm,
            witness,
            epsilon,
            null_bound,
            start,
        })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn null_bound(&self) -> &Rule {
        self.null_bound.rule()
    }
}

pub fn check_discontinuity(
    c: &DiscontinuityClaim,
    n_max: usize,
) -> Result<CertificateReport, WitnessError> {
    if c.start > n_max {
        return Err(WitnessError::EmptyRange {
            start: c.start,
            n_max,
        });
    }
    let rows = (c.start..=n_max)
        .map(|n| {
            let x = c.witness.generate(n).expect("n >= 1");
            ReportRow::new(
                RowKey::Index(n),
                vec![
                    Comparison::new(
                        format!("{}(x_n)", c.norm),
                        c.norm.evaluate(&x),
                        Relation::Le,
                        c.null_bound.value(n),
                    ),
                    Comparison::new(
                        format!("{}(x_n)", c.seminorm),
                        c.seminorm.evaluate(&x),
                        Relation::Ge,
                        c.epsilon.clone(),
                    ),
                ],
            )
        })
        .collect();
    let title = format!(
        "discontinuity of {} w.r.t. {} on {}",
        c.seminorm, c.norm, c.witness
    );
    Ok(CertificateReport::new(title, rows).with_note(format!(
        "claim: {}(x_n) <= {} -> 0 and {}(x_n) >= {} for all n >= {}",
        c.norm,
        c.null_bound.rule().in_var('n'),
        c.seminorm,
        c.epsilon,
        c.start
    )))
}

/// `beta n1(x) <= n2(x) <= gamma n1(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClaim {
    pub n1: FunctionalSpec,
    pub n2: FunctionalSpec,
    beta: Rational,
    gamma: Rational,
}

impl EquivalenceClaim {
    pub fn new(
        n1: FunctionalSpec,
        n2: FunctionalSpec,
        beta: Rational,
        gamma: Rational,
    ) -> Result<Self, WitnessError> {
        if !beta.is_positive() || beta > gamma {
            return Err(WitnessError::BadConstants {
                beta: Box::new(beta),
                gamma: Box::new(gamma),
            });
        }
        Ok(Self {
            n1,
            n2,
            beta,
            gamma,
        })
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }
}

pub fn check_equivalence(
    c: &EquivalenceClaim,
    witness: WitnessSpec,
    n_max: usize,
) -> CertificateReport {
    let rows = (1..=n_max)
        .map(|n| {
            let x = witness.generate(n).expect("n >= 1");
            let a = c.n1.evaluate(&x);
            let b = c.n2.evaluate(&x);
            ReportRow::new(
                RowKey::Index(n),
                vec![
                    Comparison::new(
                        "beta*N1(x_n) <= N2(x_n)",
                        &c.beta * &a,
                        Relation::Le,
                        b.clone(),
                    ),
                    Comparison::new("N2(x_n) <= gamma*N1(x_n)", b, Relation::Le, &c.gamma * &a),
                ],
            )
        })
        .collect();
    CertificateReport::new(
        format!(
            "{} * {} <= {} <= {} * {} on {}",
            c.beta, c.n1, c.n2, c.gamma, c.n1, witness
        ),
        rows,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub constant: Rational,
    /// First `n` violating the bound, if one exists up to the search limit.
    pub first_violation: Option<usize>,
    /// Both sides of the bound at the violation (or at the limit).
    pub lhs: Rational,
    pub rhs: Rational,
}

/// For each `beta`, the first `n <= limit` with `beta n1(x_n) > n2(x_n)`.
pub fn sweep_lower_bounds(
    n1: &FunctionalSpec,
    n2: &FunctionalSpec,
    witness: WitnessSpec,
    betas: &[Rational],
    limit: usize,
) -> Vec<SweepOutcome> {
    sweep(n1, n2, witness, betas, limit, |c, a, b| (c * a, b.clone()))
}

/// For each `gamma`, the first `n <= limit` with `n2(x_n) > gamma n1(x_n)`.
pub fn sweep_upper_bounds(
    n1: &FunctionalSpec,
    n2: &FunctionalSpec,
    witness: WitnessSpec,
    gammas: &[Rational],
    limit: usize,
) -> Vec<SweepOutcome> {
    sweep(n1, n2, witness, gammas, limit, |c, a, b| (b.clone(), c * a))
}

fn sweep(
    n1: &FunctionalSpec,
    n2: &FunctionalSpec,
    witness: WitnessSpec,
    constants: &[Rational],
    limit: usize,
    sides: impl Fn(&Rational, &Rational, &Rational) -> (Rational, Rational),
) -> Vec<SweepOutcome> {
    let values: Vec<(Rational, Rational)> = (1..=limit)
        .map(|n| {
            let x = witness.generate(n).expect("n >= 1");
            (n1.evaluate(&x), n2.evaluate(&x))
        })
        .collect();
    constants
        .iter()
        .map(|c| {
            let mut last = (Rational::one(), Rational::one());
            for (k, (a, b)) in values.iter().enumerate() {
                let (lhs, rhs) = sides(c, a, b);
                if lhs > rhs {
                    return SweepOutcome {
                        constant: c.clone(),
                        first_violation: Some(k + 1),
                        lhs,
                        rhs,
                    };
                }
                last = (lhs, rhs);
            }
            SweepOutcome {
                constant: c.clone(),
                first_violation: None,
                lhs: last.0,
                rhs: last.1,
            }
        })
        .collect()
}

/// One row per constant; a row passes when a violating `n` was found.
pub fn sweep_report(
    title: impl Into<String>,
    label: &str,
    outcomes: &[SweepOutcome],
) -> CertificateReport {
    let rows = outcomes
        .iter()
        .map(|o| {
            ReportRow::new(
                RowKey::Constant {
                    value: o.constant.clone(),
                    at: o.first_violation,
                },
                vec![Comparison::with_condition(
                    label,
                    o.lhs.clone(),
                    Relation::Gt,
                    o.rhs.clone(),
                    o.first_violation.is_some(),
                )],
            )
        })
        .collect();
    CertificateReport::new(title, rows)
}

/// Exact Cauchy moduli of the geometric tail:
/// `N_inf(x_n - x_m) = 2^-(m+1)` and `N_1(x_n - x_m) = 2^-m - 2^-n <= 2^-m`.
pub fn check_cauchy_modulus(
    norm: &FunctionalSpec,
    witness: WitnessSpec,
    pairs: &[(usize, usize)],
) -> Result<CertificateReport, WitnessError> {
    let unsupported = || WitnessError::UnsupportedModulus {
        norm: norm.to_string(),
        witness,
    };
    if witness != WitnessSpec::GeometricTail {
        return Err(unsupported());
    }
    if !matches!(norm, FunctionalSpec::L1 | FunctionalSpec::LInf) {
        return Err(unsupported());
    }
    if pairs.is_empty() {
        return Err(WitnessError::NoPairs);
    }
    let mut rows = Vec::with_capacity(pairs.len());
    for &(m, n) in pairs {
        if m < 1 || m >= n {
            return Err(WitnessError::BadPair { m, n });
        }
        let d = &witness.generate(n)? - &witness.generate(m)?;
        let value = norm.evaluate(&d);
        let pm = rational::pow2_neg(m as u64);
        let comparisons = match norm {
            FunctionalSpec::LInf => vec![Comparison::new(
                "Ninf(x_n - x_m) = 2^-(m+1)",
                value,
                Relation::Eq,
                rational::pow2_neg(m as u64 + 1),
            )],
            _ => vec![
                Comparison::new(
                    "N1(x_n - x_m) = 2^-m - 2^-n",
                    value.clone(),
                    Relation::Eq,
                    &pm - rational::pow2_neg(n as u64),
                ),
                Comparison::new("N1(x_n - x_m) <= 2^-m", value, Relation::Le, pm),
            ],
        };
        rows.push(ReportRow::new(RowKey::Pair(m, n), comparisons));
    }
    Ok(CertificateReport::new(
        format!("Cauchy modulus of {witness} in {norm}"),
        rows,
    ))
}

/// `N(x_n - y) >= 2^-(k+1)` for `n` in `k+1..=n_max`, where `k` is the
/// largest index of `y` (0 for `y = 0`): coordinate `k+1` of `x_n - y` is
/// `2^-(k+1)`.
pub fn check_escape(
    norm: &FunctionalSpec,
    witness: WitnessSpec,
    y: &SparseSeq,
    n_max: usize,
) -> Result<CertificateReport, WitnessError> {
    if witness != WitnessSpec::GeometricTail
        || !matches!(norm, FunctionalSpec::L1 | FunctionalSpec::LInf)
    {
        return Err(WitnessError::UnsupportedModulus {
            norm: norm.to_string(),
            witness,
        });
    }
    let k = y.max_index();
    if k + 1 > n_max {
        return Err(WitnessError::EmptyRange {
            start: k + 1,
            n_max,
        });
    }
    let bound = rational::pow2_neg(k as u64 + 1);
    let rows = (k + 1..=n_max)
        .map(|n| {
            let x = witness.generate(n).expect("n >= 1");
            ReportRow::new(
                RowKey::Index(n),
                vec![Comparison::new(
                    format!("{norm}(x_n - y) >= 2^-(k+1)"),
                    norm.evaluate(&(&x - y)),
                    Relation::Ge,
                    bound.clone(),
                )],
            )
        })
        .collect();
    Ok(CertificateReport::new(
        format!("escape of {witness} from y = {y} (k = {k}) in {norm}"),
        rows,
    ))
}

/// `S + N0`: a norm that majorizes `S` whenever `N0` is positive-definite.
pub fn make_dominating_norm(
    s: &FunctionalSpec,
    n0: &FunctionalSpec,
) -> Result<FunctionalSpec, WitnessError> {
    if !n0.is_norm_candidate() {
        return Err(WitnessError::NotANorm(n0.to_string()));
    }
    Ok(FunctionalSpec::sum(s.clone(), n0.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{self, Sampler};
    use crate::rational::{frac, int, pow2_neg};

    fn thm4_seminorm() -> FunctionalSpec {
        FunctionalSpec::rescaled(Rule::Reciprocal, [1]).unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(
            WitnessSpec::FlatBlock.generate(3).unwrap(),
            SparseSeq::from_dense([frac(1, 3), frac(1, 3), frac(1, 3)])
        );
        assert_eq!(
            WitnessSpec::GeometricTail.generate(2).unwrap(),
            SparseSeq::from_dense([frac(1, 2), frac(1, 4)])
        );
        assert_eq!(
            WitnessSpec::ScaledBasis.generate(1).unwrap(),
            SparseSeq::basis(1).unwrap()
        );
        assert_eq!(
            WitnessSpec::ScaledBasis.generate(0),
            Err(WitnessError::ZeroIndex)
        );
        for w in WitnessSpec::ALL {
            assert_eq!(w.name().parse::<WitnessSpec>().unwrap(), w);
        }
    }

    #[test]
    fn discontinuity_of_the_rescaled_seminorm() {
        for norm in [FunctionalSpec::L1, FunctionalSpec::LInf] {
            let c = DiscontinuityClaim::new(
                thm4_seminorm(),
                norm,
                WitnessSpec::ScaledBasis,
                int(1),
                Rule::Reciprocal,
                2,
            )
            .unwrap();
            let r = check_discontinuity(&c, 100).unwrap();
            assert!(r.overall());
            assert_eq!(r.rows().len(), 99);
        }
    }

    #[test]
    fn coordinate_seminorm_is_not_a_witness() {
        let c = DiscontinuityClaim::new(
            FunctionalSpec::CoordinateAbs(1),
            FunctionalSpec::L1,
            WitnessSpec::ScaledBasis,
            int(1),
            Rule::Reciprocal,
            2,
        )
        .unwrap();
        assert_eq!(
            check_discontinuity(&c, 10).unwrap().first_failing_index(),
            Some(2)
        );
    }

    #[test]
    fn claim_validation() {
        let bad = DiscontinuityClaim::new(
            FunctionalSpec::L1,
            FunctionalSpec::L1,
            WitnessSpec::ScaledBasis,
            int(0),
            Rule::Reciprocal,
            1,
        );
        assert!(matches!(bad, Err(WitnessError::NonPositiveEpsilon(_))));
        assert!(
            EquivalenceClaim::new(FunctionalSpec::L1, FunctionalSpec::L1, int(2), int(1)).is_err()
        );
        assert!(
            EquivalenceClaim::new(FunctionalSpec::L1, FunctionalSpec::L1, int(0), int(1)).is_err()
        );
    }

    #[test]
    fn doubled_norm_is_equivalent() {
        let c = EquivalenceClaim::new(
            FunctionalSpec::L1,
            FunctionalSpec::sum(FunctionalSpec::L1, FunctionalSpec::L1),
            int(2),
            int(2),
        )
        .unwrap();
        for w in WitnessSpec::ALL {
            assert!(check_equivalence(&c, w, 30).overall());
        }
    }

    #[test]
    fn flat_block_breaks_l1_linf_equivalence() {
        let betas = [int(1), frac(1, 2), frac(1, 10), frac(1, 100)];
        let out = sweep_lower_bounds(
            &FunctionalSpec::L1,
            &FunctionalSpec::LInf,
            WitnessSpec::FlatBlock,
            &betas,
            1000,
        );
        let found: Vec<Option<usize>> = out.iter().map(|o| o.first_violation).collect();
        assert_eq!(found, vec![Some(2), Some(3), Some(11), Some(101)]);
        let c = EquivalenceClaim::new(
            FunctionalSpec::L1,
            FunctionalSpec::LInf,
            frac(1, 10),
            int(1),
        )
        .unwrap();
        assert_eq!(
            check_equivalence(&c, WitnessSpec::FlatBlock, 100).first_failing_index(),
            Some(11)
        );
        assert!(sweep_report("t", "l", &out).overall());
    }

    #[test]
    fn weighted_norm_against_linf() {
        let w = FunctionalSpec::weighted(Rule::inverse_powers_of_two()).unwrap();
        let betas = [int(1), frac(1, 2), frac(1, 10), frac(1, 100)];
        let out = sweep_lower_bounds(
            &FunctionalSpec::LInf,
            &w,
            WitnessSpec::CanonicalBasis,
            &betas,
            200,
        );
        let found: Vec<Option<usize>> = out.iter().map(|o| o.first_violation).collect();
        assert_eq!(found, vec![Some(1), Some(2), Some(4), Some(7)]);
        // the other direction holds with gamma = 1/2
        let up = sweep_upper_bounds(
            &FunctionalSpec::LInf,
            &w,
            WitnessSpec::CanonicalBasis,
            &[frac(1, 2)],
            50,
        );
        assert_eq!(up[0].first_violation, None);
        assert!(!sweep_report("t", "l", &up).overall());
    }

    #[test]
    fn cauchy_moduli() {
        let r = check_cauchy_modulus(&FunctionalSpec::LInf, WitnessSpec::GeometricTail, &[(3, 5)])
            .unwrap();
        assert!(r.overall());
        assert_eq!(r.rows()[0].comparisons[0].lhs, frac(1, 16));
        let r = check_cauchy_modulus(&FunctionalSpec::L1, WitnessSpec::GeometricTail, &[(3, 5)])
            .unwrap();
        assert_eq!(r.rows()[0].comparisons[0].lhs, frac(3, 32));
        assert!(r.overall());
        for k in 1..30 {
            let r = check_cauchy_modulus(
                &FunctionalSpec::L1,
                WitnessSpec::GeometricTail,
                &[(k, k + 1)],
            )
            .unwrap();
            assert_eq!(r.rows()[0].comparisons[0].lhs, pow2_neg(k as u64 + 1));
        }
        assert!(matches!(
            check_cauchy_modulus(&FunctionalSpec::L1, WitnessSpec::FlatBlock, &[(1, 2)]),
            Err(WitnessError::UnsupportedModulus { .. })
        ));
        assert_eq!(
            check_cauchy_modulus(&FunctionalSpec::L1, WitnessSpec::GeometricTail, &[(5, 5)]),
            Err(WitnessError::BadPair { m: 5, n: 5 })
        );
        assert_eq!(
            check_cauchy_modulus(&FunctionalSpec::L1, WitnessSpec::GeometricTail, &[]),
            Err(WitnessError::NoPairs)
        );
    }

    #[test]
    fn escape_bounds() {
        let y = SparseSeq::from_dense([frac(1, 2), frac(1, 4)]);
        let r = check_escape(&FunctionalSpec::L1, WitnessSpec::GeometricTail, &y, 50).unwrap();
        assert!(r.overall());
        assert_eq!(r.rows().first().unwrap().key, RowKey::Index(3));
        let r = check_escape(
            &FunctionalSpec::LInf,
            WitnessSpec::GeometricTail,
            &SparseSeq::zero(),
            40,
        )
        .unwrap();
        assert!(r
            .rows()
            .iter()
            .all(|row| row.comparisons[0].lhs == frac(1, 2)));
        let x7 = WitnessSpec::GeometricTail.generate(7).unwrap();
        let r = check_escape(&FunctionalSpec::L1, WitnessSpec::GeometricTail, &x7, 20).unwrap();
        assert_eq!(r.rows().first().unwrap().key, RowKey::Index(8));
        assert!(r.overall());
    }

    #[test]
    fn dominating_norm() {
        let s = FunctionalSpec::CoordinateAbs(1);
        let n = make_dominating_norm(&s, &FunctionalSpec::L1).unwrap();
        assert!(n.is_norm_candidate());
        assert!(axioms::sample_majorization(&s, &n, 1000, 3).holds());
        assert!(matches!(
            make_dominating_norm(&s, &s),
            Err(WitnessError::NotANorm(_))
        ));

        let q = FunctionalSpec::parse("quotient:l1:basis=[e1]").unwrap();
        let n = make_dominating_norm(&q, &FunctionalSpec::LInf).unwrap();
        assert!(axioms::verify_axioms(&n, 200, 5).passed());
        let samples = Sampler::new(5).seqs(200);
        assert!(axioms::kernel_hits(&n, &samples).is_empty());
    }
}
