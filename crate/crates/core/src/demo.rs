//! Fixed, named scenarios that reproduce each construction end to end.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::axioms::{self, Sampler};
use crate::maps::LinearMapSpec;
use crate::norms::{FunctionalSpec, PolyhedralNorm};
use crate::quotient::{self, Subspace};
use crate::rational::{self, frac, int, Rational};
use crate::report::{CertificateReport, Comparison, Relation, ReportBundle, ReportRow, RowKey};
use crate::rule::Rule;
use crate::seq::SparseSeq;
use crate::witnesses::{self, DiscontinuityClaim, WitnessSpec};

pub const DEFAULT_N_MAX: usize = 100;
/// Search horizon for equivalence sweeps, independent of `n_max`:
/// `beta = 1/100` on the flat block first fails at `n = 101`.
pub const SWEEP_LIMIT: usize = 1000;
pub const SAMPLE_COUNT: usize = 1000;
pub const SEED: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DemoId {
    Thm4,
    Thm5,
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DemoError {
    #[error("unknown demo `{0}` (expected one of thm4, thm5, ex1, ex2, ex3, ex4, incomplete)")]
    UnknownDemo(String),
    #[error("n_max must be at least 2, got {0}")]
    NMaxTooSmall(usize),
}

impl DemoId {
    pub const ALL: [DemoId; 7] = [
        DemoId::Thm4,
        DemoId::Thm5,
        DemoId::Ex1,
        DemoId::Ex2,
        DemoId::Ex3,
        DemoId::Ex4,
        DemoId::Incomplete,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DemoId::Thm4 => "thm4",
            DemoId::Thm5 => "thm5",
            DemoId::Ex1 => "ex1",
            DemoId::Ex2 => "ex2",
            DemoId::Ex3 => "ex3",
            DemoId::Ex4 => "ex4",
            DemoId::Incomplete => "incomplete",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            DemoId::Thm4 => {
                "rescaled basis g_n = e_n/n: N1(g_n) = 1/n, N'(g_n) = 1, S(g_n) = 1 for n >= 2"
            }
            DemoId::Thm5 => {
                "quotient seminorms S(x) = dist_N(x, V): majorized by N, vanishing exactly on V"
            }
            DemoId::Ex1 => "|x_1| <= Ninf <= N1 and the flat block separating N1 from Ninf",
            DemoId::Ex2 => "the rescaled seminorm is discontinuous at zero for both N1 and Ninf",
            DemoId::Ex3 => "weighted norm sum 2^-i |x_i| against Ninf on the canonical basis",
            DemoId::Ex4 => "F(x) = R(f(L x)) + T(x) keeps the first entry, so |x_1| <= Ninf(F x)",
            DemoId::Incomplete => {
                "geometric tail: exact Cauchy moduli and escape from every finitely supported y"
            }
        }
    }
}

impl fmt::Display for DemoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DemoId {
    type Err = DemoError;
    fn from_str(s: &str) -> Result<Self, DemoError> {
        DemoId::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| DemoError::UnknownDemo(s.to_string()))
    }
}

pub fn run_demo(id: DemoId, n_max: usize) -> Result<ReportBundle, DemoError> {
    if n_max < 2 {
        return Err(DemoError::NMaxTooSmall(n_max));
    }
    let sections = match id {
        DemoId::Thm4 => thm4(n_max),
        DemoId::Thm5 => thm5(n_max),
        DemoId::Ex1 => ex1(n_max),
        DemoId::Ex2 => ex2(n_max),
        DemoId::Ex3 => ex3(n_max),
        DemoId::Ex4 => ex4(n_max),
        DemoId::Incomplete => incomplete(n_max),
    };
    Ok(ReportBundle::new(
        format!("{id}: {}", id.description()),
        sections,
    ))
}

fn eq(label: impl Into<String>, lhs: Rational, rhs: Rational) -> Comparison {
    Comparison::new(label, lhs, Relation::Eq, rhs)
}

fn count_row(label: &str, violations: usize, checked: usize) -> ReportRow {
    ReportRow::new(
        RowKey::Named(format!("{checked} samples")),
        vec![eq(label, int(violations as i64), int(0))],
    )
}

fn thm4_norms() -> (FunctionalSpec, FunctionalSpec) {
    let full = FunctionalSpec::rescaled(Rule::Reciprocal, []).expect("1/n is positive");
    let tail = FunctionalSpec::rescaled(Rule::Reciprocal, [1]).expect("1/n is positive");
    (full, tail)
}

fn discontinuity(
    seminorm: &FunctionalSpec,
    norm: FunctionalSpec,
    start: usize,
    n_max: usize,
) -> CertificateReport {
    let claim = DiscontinuityClaim::new(
        seminorm.clone(),
        norm,
        WitnessSpec::ScaledBasis,
        Rational::one(),
        Rule::Reciprocal,
        start,
    )
    .expect("epsilon and bound are positive");
    witnesses::check_discontinuity(&claim, n_max).expect("start <= 2 <= n_max")
}

fn thm4(n_max: usize) -> Vec<CertificateReport> {
    let (full, tail) = thm4_norms();
    let rows = (1..=n_max)
        .map(|n| {
            let g = WitnessSpec::ScaledBasis.generate(n).expect("n >= 1");
            let s_expected = if n == 1 {
                Rational::zero()
            } else {
                Rational::one()
            };
            ReportRow::new(
                RowKey::Index(n),
                vec![
                    eq(
                        "N1(g_n)",
                        FunctionalSpec::L1.evaluate(&g),
                        frac(1, n as i64),
                    ),
                    eq("N'(g_n)", full.evaluate(&g), Rational::one()),
                    eq("S(g_n)", tail.evaluate(&g), s_expected),
                ],
            )
        })
        .collect();
    vec![
        CertificateReport::new(
            format!("identities on g_n = e_n/n with N' = {full}, S = {tail}"),
            rows,
        ),
        discontinuity(&full, FunctionalSpec::L1, 1, n_max),
        discontinuity(&tail, FunctionalSpec::L1, 2, n_max),
    ]
}

fn thm5_subspace() -> Subspace {
    let b1 = SparseSeq::from_pairs([(1, int(1)), (2, int(1))]).expect("valid");
    let b2 = SparseSeq::from_pairs([(2, int(1)), (3, int(-2))]).expect("valid");
    Subspace::new(vec![b1, b2]).expect("independent")
}

fn thm5(n_max: usize) -> Vec<CertificateReport> {
    let v = thm5_subspace();
    let ambients = [
        PolyhedralNorm::L1,
        PolyhedralNorm::LInf,
        PolyhedralNorm::WeightedL1(Rule::inverse_powers_of_two().try_into().expect("positive")),
    ];
    let mut sampler = Sampler::new(SEED);
    let points: Vec<SparseSeq> = (0..=n_max).map(|_| sampler.seq_within(8, 4)).collect();
    ambients
        .into_iter()
        .map(|ambient| {
            let s = FunctionalSpec::Quotient {
                ambient: ambient.clone(),
                subspace: v.clone(),
            };
            let mut rows: Vec<ReportRow> = v
                .basis()
                .iter()
                .enumerate()
                .map(|(j, b)| {
                    ReportRow::new(RowKey::Named(format!("b{}", j + 1)), vec![eq("S(b_j)", s.evaluate(b), int(0))])
                })
                .collect();
            for n in 1..=n_max {
                let x = &points[n - 1];
                let next = &points[n];
                let d = quotient::polyhedral_distance(&ambient, &v, x);
                let (lp_primal, lp_dual) = d.lp_objectives();
                let shift = v.combine(&[int(n as i64), frac(-1, n as i64)]);
                let in_v = v.contains(x);
                rows.push(ReportRow::new(
                    RowKey::Index(n),
                    vec![
                        Comparison::new("S(x_n) <= N(x_n)", d.value.clone(), Relation::Le, ambient.evaluate(x)),
                        eq("N(x_n - v*) = S(x_n)", ambient.evaluate(&(x - &d.minimizer)), d.value.clone()),
                        Comparison::with_condition(
                            "S(x_n) = 0 iff x_n in V",
                            d.value.clone(),
                            Relation::Ge,
                            int(0),
                            d.value.is_zero() == in_v,
                        ),
                        Comparison::with_condition(
                            "LP certificate: c^T x = b^T y",
                            lp_primal.clone(),
                            Relation::Eq,
                            lp_dual.clone(),
                            d.certificate_verifies(),
                        ),
                        eq("S(x_n + v) = S(x_n)", s.evaluate(&(x + &shift)), d.value.clone()),
                        Comparison::new(
                            "S(x_n + x_n+1) <= S(x_n) + S(x_n+1)",
                            s.evaluate(&(x + next)),
                            Relation::Le,
                            &d.value + s.evaluate(next),
                        ),
                    ],
                ));
            }
            CertificateReport::new(format!("S = {s}"), rows)
                .with_note("x_n are seeded samples supported in 1..=8; v is a fixed element of V depending on n")
        })
        .collect()
}

fn ex1(n_max: usize) -> Vec<CertificateReport> {
    let coord = FunctionalSpec::CoordinateAbs(1);
    let rows = (1..=n_max)
        .map(|n| {
            let x = WitnessSpec::FlatBlock.generate(n).expect("n >= 1");
            let n1 = FunctionalSpec::L1.evaluate(&x);
            let ninf = FunctionalSpec::LInf.evaluate(&x);
            ReportRow::new(
                RowKey::Index(n),
                vec![
                    eq("N1(x_n)", n1.clone(), Rational::one()),
                    eq("Ninf(x_n)", ninf.clone(), frac(1, n as i64)),
                    Comparison::new(
                        "|x_1| <= Ninf(x_n)",
                        coord.evaluate(&x),
                        Relation::Le,
                        ninf.clone(),
                    ),
                    Comparison::new("Ninf(x_n) <= N1(x_n)", ninf, Relation::Le, n1),
                ],
            )
        })
        .collect();
    let samples = Sampler::new(SEED).seqs(SAMPLE_COUNT);
    let lower = axioms::check_majorization(&coord, &FunctionalSpec::LInf, &samples);
    let upper = axioms::check_majorization(&FunctionalSpec::LInf, &FunctionalSpec::L1, &samples);
    let chain = CertificateReport::new(
        "chain |x_1| <= Ninf <= N1 on seeded samples",
        vec![
            count_row(
                "violations of |x_1| <= Ninf",
                lower.violations.len(),
                lower.samples_checked,
            ),
            count_row(
                "violations of Ninf <= N1",
                upper.violations.len(),
                upper.samples_checked,
            ),
        ],
    );
    vec![
        CertificateReport::new("flat block x_n = (1/n, ..., 1/n)", rows),
        chain,
        beta_sweep(
            &FunctionalSpec::L1,
            &FunctionalSpec::LInf,
            WitnessSpec::FlatBlock,
        ),
    ]
}

fn beta_sweep(n1: &FunctionalSpec, n2: &FunctionalSpec, witness: WitnessSpec) -> CertificateReport {
    let betas = [int(1), frac(1, 2), frac(1, 10), frac(1, 100)];
    let out = witnesses::sweep_lower_bounds(n1, n2, witness, &betas, SWEEP_LIMIT);
    witnesses::sweep_report(
        format!("no beta > 0 with beta*{n1} <= {n2} on {witness}"),
        "beta*N1(x_n) > N2(x_n)",
        &out,
    )
    .with_note(format!("first violating n searched up to {SWEEP_LIMIT}"))
}

fn ex2(n_max: usize) -> Vec<CertificateReport> {
    let (_, tail) = thm4_norms();
    let samples = Sampler::new(SEED).seqs(SAMPLE_COUNT);
    let m = axioms::check_majorization(&FunctionalSpec::LInf, &FunctionalSpec::L1, &samples);
    vec![
        discontinuity(&tail, FunctionalSpec::L1, 2, n_max),
        discontinuity(&tail, FunctionalSpec::LInf, 2, n_max),
        CertificateReport::new(
            "Ninf <= N1 on seeded samples",
            vec![count_row(
                "violations of Ninf <= N1",
                m.violations.len(),
                m.samples_checked,
            )],
        ),
    ]
}

fn ex3(n_max: usize) -> Vec<CertificateReport> {
    let w = FunctionalSpec::weighted(Rule::inverse_powers_of_two()).expect("positive");
    let rows = (1..=n_max)
        .map(|n| {
            let e = WitnessSpec::CanonicalBasis.generate(n).expect("n >= 1");
            ReportRow::new(
                RowKey::Index(n),
                vec![
                    eq("N'(e_n)", w.evaluate(&e), rational::pow2_neg(n as u64)),
                    eq(
                        "Ninf(e_n)",
                        FunctionalSpec::LInf.evaluate(&e),
                        Rational::one(),
                    ),
                ],
            )
        })
        .collect();
    vec![
        CertificateReport::new(format!("canonical basis with N' = {w}"), rows),
        beta_sweep(&FunctionalSpec::LInf, &w, WitnessSpec::CanonicalBasis),
    ]
}

/// The maps `f` used for `F(x) = R(f(L x)) + T(x)`.
pub fn ex4_maps() -> Vec<LinearMapSpec> {
    [
        "identity",
        "diag(i)",
        "table(1->e1+e2,2->-3*e1,4->1/2*e7)",
        "compose(R,L)",
        "compose(L,compose(diag(2^-i),R))",
    ]
    .iter()
    .map(|t| t.parse().expect("fixed map grammar"))
    .collect()
}

fn ex4(n_max: usize) -> Vec<CertificateReport> {
    let mut sampler = Sampler::new(SEED);
    let points: Vec<(SparseSeq, SparseSeq, Rational)> = (0..n_max)
        .map(|_| (sampler.seq(), sampler.seq(), sampler.rational()))
        .collect();
    let identity = LinearMapSpec::sum(
        LinearMapSpec::compose(LinearMapSpec::ShiftRight, LinearMapSpec::ShiftLeft),
        LinearMapSpec::TruncateFirst,
    );
    let n1 = FunctionalSpec::L1;
    let coord = FunctionalSpec::CoordinateAbs(1);
    ex4_maps()
        .into_iter()
        .map(|f| {
            let big_f = LinearMapSpec::first_entry_lift(f);
            let n2 = FunctionalSpec::pullback(FunctionalSpec::LInf, big_f.clone());
            let rows = points
                .iter()
                .enumerate()
                .map(|(k, (x, y, a))| {
                    let fx = big_f.apply(x);
                    let fy = big_f.apply(y);
                    let additive = &(&big_f.apply(&(x + y)) - &fx) - &fy;
                    let homogeneous = &big_f.apply(&x.scale(a)) - &fx.scale(a);
                    ReportRow::new(
                        RowKey::Index(k + 1),
                        vec![
                            eq("F(x)_1 = x_1", fx.coord(1), x.coord(1)),
                            Comparison::new(
                                "|x_1| <= N2(x)",
                                coord.evaluate(x),
                                Relation::Le,
                                n2.evaluate(x),
                            ),
                            eq("N1(F(x+y) - F(x) - F(y))", n1.evaluate(&additive), int(0)),
                            eq("N1(F(a x) - a F(x))", n1.evaluate(&homogeneous), int(0)),
                            eq(
                                "N1(R(L x) + T(x) - x)",
                                n1.evaluate(&(&identity.apply(x) - x)),
                                int(0),
                            ),
                        ],
                    )
                })
                .collect();
            CertificateReport::new(format!("{big_f} with N2 = {n2}"), rows)
                .with_note("rows are seeded samples (x, y, a)")
        })
        .collect()
}

fn incomplete(n_max: usize) -> Vec<CertificateReport> {
    let w = WitnessSpec::GeometricTail;
    let closed = (1..=n_max)
        .map(|n| {
            let x = w.generate(n).expect("n >= 1");
            ReportRow::new(
                RowKey::Index(n),
                vec![
                    eq(
                        "N1(x_n) = 1 - 2^-n",
                        FunctionalSpec::L1.evaluate(&x),
                        int(1) - rational::pow2_neg(n as u64),
                    ),
                    eq(
                        "Ninf(x_n) = 1/2",
                        FunctionalSpec::LInf.evaluate(&x),
                        frac(1, 2),
                    ),
                ],
            )
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = (1..n_max).map(|m| (m, m + 1)).collect();
    pairs.extend((1..n_max - 1).map(|m| (m, n_max)));
    pairs.sort_unstable();
    let ys: Vec<SparseSeq> = [
        "0",
        "1/2*e1+1/4*e2",
        "e1",
        "3*e2-1/2*e6",
        "1/2*e1+1/4*e2+1/8*e3+1/16*e4+1/32*e5",
    ]
    .iter()
    .map(|t| t.parse().expect("fixed sequence grammar"))
    .filter(|y: &SparseSeq| y.max_index() < n_max)
    .collect();
    let mut out = vec![CertificateReport::new(
        "closed forms of x_n = (1/2, ..., 1/2^n)",
        closed,
    )];
    for norm in [FunctionalSpec::L1, FunctionalSpec::LInf] {
        out.push(witnesses::check_cauchy_modulus(&norm, w, &pairs).expect("supported modulus"));
    }
    for norm in [FunctionalSpec::L1, FunctionalSpec::LInf] {
        for y in &ys {
            out.push(witnesses::check_escape(&norm, w, y, n_max).expect("k < n_max"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in DemoId::ALL {
            assert_eq!(id.name().parse::<DemoId>().unwrap(), id);
        }
        assert_eq!(
            "thm9".parse::<DemoId>(),
            Err(DemoError::UnknownDemo("thm9".into()))
        );
    }

    #[test]
    fn small_n_max_is_rejected() {
        assert_eq!(run_demo(DemoId::Thm4, 1), Err(DemoError::NMaxTooSmall(1)));
    }

    #[test]
    fn every_demo_passes_at_small_scale() {
        for id in DemoId::ALL {
            for n_max in [2, 3, 12] {
                let b = run_demo(id, n_max).unwrap();
                assert!(b.overall(), "{id} at n_max = {n_max}: {}", b.summary_line());
            }
        }
    }

    #[test]
    fn thm4_rows() {
        let b = run_demo(DemoId::Thm4, 5).unwrap();
        let first = &b.sections[0].rows()[0];
        assert_eq!(first.comparisons[2].lhs, int(0));
        assert_eq!(b.sections[0].rows().len(), 5);
    }

    #[test]
    fn sweeps_find_the_expected_indices() {
        let b = run_demo(DemoId::Ex1, 20).unwrap();
        let keys: Vec<String> = b.sections[2]
            .rows()
            .iter()
            .map(|r| r.key.to_string())
            .collect();
        assert_eq!(keys, ["1@n=2", "1/2@n=3", "1/10@n=11", "1/100@n=101"]);
        let b = run_demo(DemoId::Ex3, 20).unwrap();
        let keys: Vec<String> = b.sections[1]
            .rows()
            .iter()
            .map(|r| r.key.to_string())
            .collect();
        assert_eq!(keys, ["1@n=1", "1/2@n=2", "1/10@n=4", "1/100@n=7"]);
    }
}
