//! Closed-form maps from a positive index to a rational value.
//!
//! These describe weights (`2^-i`), basis scalings (`1/n`), diagonal
//! operators and bounds without storing infinite data.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `ratio^i`.
    Geometric {
        ratio: Rational,
    },
    /// `1/i`.
    Reciprocal,
    /// `i`.
    Index,
    Constant(Rational),
    /// Listed values at finitely many indices, `default` elsewhere.
    Table {
        values: BTreeMap<usize, Rational>,
        default: Rational,
    },
}

impl Rule {
    /// `2^-i`.
    pub fn inverse_powers_of_two() -> Self {
        Rule::Geometric {
            ratio: rational::frac(1, 2),
        }
    }

    pub fn value(&self, i: usize) -> Rational {
        debug_assert!(i >= 1);
        match self {
            Rule::Geometric { ratio } => rational::pow(ratio, i as i64),
            Rule::Reciprocal => Rational::new(1.into(), i.into()),
            Rule::Index => Rational::from_integer(i.into()),
            Rule::Constant(c) => c.clone(),
            Rule::Table { values, default } => values.get(&i).unwrap_or(default).clone(),
        }
    }

    /// True when `value(i) > 0` for every `i >= 1`.
    pub fn is_positive(&self) -> bool {
        match self {
            Rule::Geometric { ratio } => ratio.is_positive(),
            Rule::Reciprocal | Rule::Index => true,
            Rule::Constant(c) => c.is_positive(),
            Rule::Table { values, default } => {
                default.is_positive() && values.values().all(Signed::is_positive)
            }
        }
    }

    /// True when `value(i) != 0` for every `i >= 1`.
    pub fn is_nowhere_zero(&self) -> bool {
        match self {
            Rule::Geometric { ratio } => !ratio.is_zero(),
            Rule::Reciprocal | Rule::Index => true,
            Rule::Constant(c) => !c.is_zero(),
            Rule::Table { values, default } => {
                !default.is_zero() && values.values().all(|v| !v.is_zero())
            }
        }
    }

    /// Writes the grammar form using `var` as the index variable.
    pub(crate) fn write_with(
        &self,
        f: &mut std::fmt::Formatter<'_>,
        var: char,
    ) -> std::fmt::Result {
        match self {
            Rule::Geometric { ratio } => {
                if ratio.numer().is_one() && ratio.denom() > &1.into() {
                    write!(f, "{}^-{var}", ratio.denom())
                } else if ratio.is_integer() && !ratio.is_negative() {
                    write!(f, "{ratio}^{var}")
                } else {
                    write!(f, "({ratio})^{var}")
                }
            }
            Rule::Reciprocal => write!(f, "1/{var}"),
            Rule::Index => write!(f, "{var}"),
            Rule::Constant(c) => write!(f, "{c}"),
            Rule::Table { values, default } => {
                f.write_str("table(")?;
                for (k, (i, v)) in values.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{i}={v}")?;
                }
                write!(f, ";else={default})")
            }
        }
    }
}

impl Rule {
    /// The grammar form with `var` as the index variable, e.g. `1/n`.
    pub fn in_var(&self, var: char) -> String {
        struct With<'a>(&'a Rule, char);
        impl std::fmt::Display for With<'_> {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                self.0.write_with(f, self.1)
            }
        }
        With(self, var).to_string()
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.write_with(f, 'i')
    }
}

/// A [`Rule`] checked to be strictly positive at every index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositiveRule(Rule);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rule `{0}` is not strictly positive at every index")]
pub struct NotPositive(pub Rule);

impl PositiveRule {
    pub fn new(rule: Rule) -> Result<Self, NotPositive> {
        if rule.is_positive() {
            Ok(Self(rule))
        } else {
            Err(NotPositive(rule))
        }
    }

    pub fn rule(&self) -> &Rule {
        &self.0
    }

    pub fn value(&self, i: usize) -> Rational {
        self.0.value(i)
    }
}

impl TryFrom<Rule> for PositiveRule {
    type Error = NotPositive;
    fn try_from(rule: Rule) -> Result<Self, NotPositive> {
        Self::new(rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn values() {
        let half = Rule::inverse_powers_of_two();
        assert_eq!(half.value(3), frac(1, 8));
        assert_eq!(Rule::Reciprocal.value(5), frac(1, 5));
        assert_eq!(Rule::Index.value(4), int(4));
        let t = Rule::Table {
            values: [(2, int(7))].into_iter().collect(),
            default: int(1),
        };
        assert_eq!(t.value(2), int(7));
        assert_eq!(t.value(3), int(1));
    }

    #[test]
    fn positivity() {
        assert!(PositiveRule::new(Rule::Reciprocal).is_ok());
        assert!(PositiveRule::new(Rule::Constant(int(0))).is_err());
        assert!(PositiveRule::new(Rule::Geometric { ratio: frac(-1, 2) }).is_err());
        assert!(Rule::Geometric { ratio: frac(-1, 2) }.is_nowhere_zero());
        let t = Rule::Table {
            values: [(2, int(0))].into_iter().collect(),
            default: int(1),
        };
        assert!(!t.is_nowhere_zero());
        assert!(!t.is_positive());
    }
}
