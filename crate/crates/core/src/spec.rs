//! JSON descriptions of potentials and observable weights.
//!
//! ```json
//! {"kind": "power_law", "a_plus": 0.5, "v_plus": 1, "alpha_plus": 2,
//!  "a_minus": 0, "v_minus": 1, "alpha_minus": 2}
//! {"kind": "polynomial", "coeffs": [0, 0, 0, 0, 1]}
//! {"kind": "table", "domain": "full_line", "branches": [
//!   {"from": null, "to": 0, "branch": {"type": "poly", "coeffs": [0, 0, 4]}},
//!   {"from": 0, "to": null, "branch": {"type": "power", "scale": 1, "exponent": 2}}]}
//! ```
//!
//! `null` bounds stand for the ends of the domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{make_power_law, Branch, Domain, Piece, Potential};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DomainSpec {
    #[default]
    FullLine,
    HalfLine,
}

impl From<DomainSpec> for Domain {
    fn from(d: DomainSpec) -> Self {
        match d {
            DomainSpec::FullLine => Domain::FullLine,
            DomainSpec::HalfLine => Domain::HalfLine,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BranchSpec {
    Poly {
        coeffs: Vec<f64>,
    },
    Power {
        #[serde(default)]
        offset: f64,
        scale: f64,
        exponent: f64,
        #[serde(default)]
        center: f64,
    },
    #[serde(alias = "exp-quadratic")]
    ExpQuadratic {
        #[serde(default)]
        offset: f64,
        scale: f64,
        rate: f64,
        #[serde(default)]
        center: f64,
    },
}

impl BranchSpec {
    pub fn build(&self) -> Branch {
        match self.clone() {
            BranchSpec::Poly { coeffs } => Branch::Poly(coeffs),
            BranchSpec::Power {
                offset,
                scale,
                exponent,
                center,
            } => Branch::Power {
                offset,
                scale,
                exponent,
                center,
            },
            BranchSpec::ExpQuadratic {
                offset,
                scale,
                rate,
                center,
            } => Branch::ExpQuadratic {
                offset,
                scale,
                rate,
                center,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub branch: BranchSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    PowerLaw {
        a_plus: f64,
        v_plus: f64,
        alpha_plus: f64,
        a_minus: f64,
        v_minus: f64,
        alpha_minus: f64,
        #[serde(default)]
        truncation: Option<(f64, f64)>,
    },
    Polynomial {
        coeffs: Vec<f64>,
        #[serde(default)]
        domain: DomainSpec,
        #[serde(default)]
        decay_exponent: Option<f64>,
        #[serde(default)]
        truncation: Option<(f64, f64)>,
    },
    Table {
        #[serde(default)]
        domain: DomainSpec,
        branches: Vec<PieceSpec>,
        #[serde(default)]
        decay_exponent: Option<f64>,
        #[serde(default)]
        truncation: Option<(f64, f64)>,
        #[serde(default)]
        reference: Option<f64>,
    },
}

fn finish(
    mut p: Potential,
    decay: Option<f64>,
    truncation: Option<(f64, f64)>,
    reference: Option<f64>,
) -> Result<Potential> {
    if let Some(r) = decay {
        p = p.with_decay_exponent(r);
    }
    if let Some((lo, hi)) = truncation {
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!("truncation ({lo}, {hi}) is empty")));
        }
        p = p.with_truncation(lo, hi);
    }
    if let Some(x) = reference {
        p = p.with_reference(x);
    }
    Ok(p)
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Potential> {
        match self {
            PotentialSpec::PowerLaw {
                a_plus,
                v_plus,
                alpha_plus,
                a_minus,
                v_minus,
                alpha_minus,
                truncation,
            } => {
                let p = make_power_law(*a_plus, *v_plus, *alpha_plus, *a_minus, *v_minus, *alpha_minus)?;
                finish(p, None, *truncation, None)
            }
            PotentialSpec::Polynomial {
                coeffs,
                domain,
                decay_exponent,
                truncation,
            } => {
                if coeffs.is_empty() {
                    return Err(Error::InvalidParameter(
                        "polynomial needs at least one coefficient".into(),
                    ));
                }
                let branch = Branch::Poly(coeffs.clone());
                let p = match domain {
                    DomainSpec::FullLine => Potential::smooth(branch),
                    DomainSpec::HalfLine => Potential::half_line(branch),
                };
                finish(p, *decay_exponent, *truncation, None)
            }
            PotentialSpec::Table {
                domain,
                branches,
                decay_exponent,
                truncation,
                reference,
            } => {
                let domain: Domain = (*domain).into();
                let pieces = branches
                    .iter()
                    .map(|b| Piece {
                        start: b.from.unwrap_or(domain.start()),
                        end: b.to.unwrap_or(f64::INFINITY),
                        branch: b.branch.build(),
                    })
                    .collect();
                let p = Potential::piecewise(domain, pieces)?;
                finish(p, *decay_exponent, *truncation, *reference)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    One,
    /// `w = v`
    Potential,
    /// Indicator of `(lo, hi)`; `null` is unbounded.
    Indicator {
        lo: Option<f64>,
        hi: Option<f64>,
    },
    Monomial {
        k: i32,
    },
}

impl WeightSpec {
    pub fn build(&self, pot: &Potential) -> Weight {
        match self {
            WeightSpec::One => Weight::one(),
            WeightSpec::Potential => Weight::potential(pot),
            WeightSpec::Indicator { lo, hi } => {
                Weight::indicator(lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))
            }
            WeightSpec::Monomial { k } => Weight::monomial(*k),
        }
    }

    pub fn label(&self) -> String {
        match self {
            WeightSpec::One => "1".into(),
            WeightSpec::Potential => "v".into(),
            WeightSpec::Indicator { lo, hi } => {
                let f = |b: &Option<f64>, inf: &str| b.map_or(inf.to_string(), |x| format!("{x:?}"));
                format!("1({},{})", f(lo, "-inf"), f(hi, "inf"))
            }
            WeightSpec::Monomial { k } => format!("x^{k}"),
        }
    }
}
