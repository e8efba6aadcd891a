//! Marginal utility curves: the utility of the j-th funded project of a
//! partition of substitutes.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarginalCurve {
    /// Only the first funded project of the partition counts.
    UnitDemand,
    /// `I` for the first project, `I / M` for every further one, where `M` is
    /// the project count of the instance the curve was built for.
    MinimalSubstitutes { project_count: usize },
    /// `I / j`.
    Pav,
    /// Explicit values for `j = 1, 2, ...`; the last entry extends to all
    /// larger `j`.
    Custom(Vec<Rational>),
}

impl MarginalCurve {
    /// Builds a custom curve, enforcing nonnegative and non-increasing values.
    pub fn custom(table: Vec<Rational>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::invalid("custom curve table is empty"));
        }
        if table.iter().any(|v| v.is_negative()) {
            return Err(Error::invalid("custom curve has a negative value"));
        }
        if table.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid("custom curve is not non-increasing"));
        }
        Ok(MarginalCurve::Custom(table))
    }

    pub fn minimal_substitutes(project_count: usize) -> Result<Self> {
        if project_count == 0 {
            return Err(Error::invalid("minimal substitutes needs M >= 1"));
        }
        Ok(MarginalCurve::MinimalSubstitutes { project_count })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MarginalCurve::UnitDemand => "unit_demand",
            MarginalCurve::MinimalSubstitutes { .. } => "minimal_substitutes",
            MarginalCurve::Pav => "pav",
            MarginalCurve::Custom(_) => "custom",
        }
    }

    /// Value of the `j`-th funded project (1-based) for base intensity
    /// `intensity`. Custom curves ignore `intensity`.
    pub fn value(&self, intensity: &Rational, j: usize) -> Result<Rational> {
        if j == 0 {
            return Err(Error::invalid("marginal curves are indexed from j = 1"));
        }
        Ok(self.value_unchecked(intensity, j))
    }

    pub(crate) fn value_unchecked(&self, intensity: &Rational, j: usize) -> Rational {
        debug_assert!(j >= 1);
        match self {
            MarginalCurve::UnitDemand => {
                if j == 1 {
                    intensity.clone()
                } else {
                    Rational::zero()
                }
            }
            MarginalCurve::MinimalSubstitutes { project_count } => {
                if j == 1 {
                    intensity.clone()
                } else {
                    intensity / Rational::from_integer((*project_count).into())
                }
            }
            MarginalCurve::Pav => intensity / Rational::from_integer(j.into()),
            MarginalCurve::Custom(table) => table[(j - 1).min(table.len() - 1)].clone(),
        }
    }

    /// Sum of the first `count` marginal values.
    pub fn prefix_sum(&self, intensity: &Rational, count: usize) -> Rational {
        (1..=count).fold(Rational::zero(), |acc, j| {
            acc + self.value_unchecked(intensity, j)
        })
    }
}

/// Free-function form of [`MarginalCurve::value`].
pub fn curve_value(curve: &MarginalCurve, intensity: &Rational, j: usize) -> Result<Rational> {
    curve.value(intensity, j)
}
