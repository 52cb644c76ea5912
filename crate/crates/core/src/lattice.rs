//! Chern-character arithmetic on a degree-3 polarized threefold.
//!
//! Characters are stored as coefficients of powers of the hyperplane class
//! `H`, so `(4, -1, -5/6, 1/6)` means `(4, -H, -5/6 H^2, 1/6 H^3)`.
//! Intersection numbers like `H^2·ch_1 = 3·ch_1` are folded in on demand.
//! The Euler pairing comes from Riemann-Roch with the Todd coefficients of
//! the cubic threefold, `td(X) = 1 + H + 2/3 H^2 + 1/3 H^3`, which gives
//! the closed form `χ(v) = ch_0 + 2 ch_1 + 3 ch_2 + 3 ch_3`.

use crate::exactnum::{parse_rational, rat, ratio, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse character {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// The polarized threefold the lattice lives on. Only the cubic is used,
/// but keeping the intersection and Todd data explicit lets tests assert
/// `χ(O_X) = 1` against the derived coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variety {
    /// Degree `H^3`.
    pub h3: BigInt,
    /// Coefficient of `H` in the Todd class.
    pub todd1: Rational,
    /// Coefficient of `H^2`.
    pub todd2: Rational,
    /// Coefficient of `H^3`.
    pub todd3: Rational,
}

impl Variety {
    /// The smooth cubic threefold in `P^4`: `c(T_X) = (1+H)^5 / (1+3H)`.
    pub fn cubic_threefold() -> Self {
        Variety {
            h3: BigInt::from(3),
            todd1: rat(1),
            todd2: ratio(2, 3),
            todd3: ratio(1, 3),
        }
    }

    /// Euler characteristic of a character by Riemann-Roch.
    pub fn chi(&self, v: &ChernCharacter) -> Rational {
        let h3 = Rational::from_integer(self.h3.clone());
        let rank = Rational::from_integer(v.ch0.clone());
        h3 * (rank * &self.todd3 + &v.ch1 * &self.todd2 + &v.ch2 * &self.todd1 + &v.ch3)
    }
}

/// A full Chern character `(ch_0, ch_1, ch_2, ch_3)` in `H`-power units.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChernCharacter {
    pub ch0: BigInt,
    pub ch1: Rational,
    pub ch2: Rational,
    pub ch3: Rational,
}

/// A character truncated to degree 2, the data walls depend on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedCharacter {
    pub ch0: BigInt,
    pub ch1: Rational,
    pub ch2: Rational,
}

impl ChernCharacter {
    pub fn new(ch0: i64, ch1: Rational, ch2: Rational, ch3: Rational) -> Self {
        ChernCharacter { ch0: BigInt::from(ch0), ch1, ch2, ch3 }
    }

    pub fn zero() -> Self {
        ChernCharacter::new(0, rat(0), rat(0), rat(0))
    }

    /// `ch(O_X)`.
    pub fn structure_sheaf() -> Self {
        ChernCharacter::new(1, rat(0), rat(0), rat(0))
    }

    /// `ch(O_X(kH)) = e^{kH}`.
    pub fn line_bundle(k: i64) -> Self {
        Self::structure_sheaf().twist(&rat(-k))
    }

    pub fn trunc(&self) -> TruncatedCharacter {
        TruncatedCharacter {
            ch0: self.ch0.clone(),
            ch1: self.ch1.clone(),
            ch2: self.ch2.clone(),
        }
    }

    /// Twisted character `ch^β = e^{-βH}·ch`.
    pub fn twist(&self, beta: &Rational) -> ChernCharacter {
        let r = Rational::from_integer(self.ch0.clone());
        let b2 = beta * beta;
        let b3 = &b2 * beta;
        ChernCharacter {
            ch0: self.ch0.clone(),
            ch1: &self.ch1 - beta * &r,
            ch2: &self.ch2 - beta * &self.ch1 + &b2 / rat(2) * &r,
            ch3: &self.ch3 - beta * &self.ch2 + &b2 / rat(2) * &self.ch1 - &b3 / rat(6) * &r,
        }
    }

    /// Arithmetic shadow of the derived dual: sign flip in odd degrees.
    pub fn dual(&self) -> ChernCharacter {
        ChernCharacter {
            ch0: self.ch0.clone(),
            ch1: -&self.ch1,
            ch2: self.ch2.clone(),
            ch3: -&self.ch3,
        }
    }

    /// Product of Chern characters (the tensor-product rule).
    pub fn product(&self, other: &ChernCharacter) -> ChernCharacter {
        let a0 = Rational::from_integer(self.ch0.clone());
        let b0 = Rational::from_integer(other.ch0.clone());
        ChernCharacter {
            ch0: &self.ch0 * &other.ch0,
            ch1: &a0 * &other.ch1 + &self.ch1 * &b0,
            ch2: &a0 * &other.ch2 + &self.ch1 * &other.ch1 + &self.ch2 * &b0,
            ch3: &a0 * &other.ch3
                + &self.ch1 * &other.ch2
                + &self.ch2 * &other.ch1
                + &self.ch3 * &b0,
        }
    }

    pub fn add(&self, other: &ChernCharacter) -> ChernCharacter {
        ChernCharacter {
            ch0: &self.ch0 + &other.ch0,
            ch1: &self.ch1 + &other.ch1,
            ch2: &self.ch2 + &other.ch2,
            ch3: &self.ch3 + &other.ch3,
        }
    }

    pub fn sub(&self, other: &ChernCharacter) -> ChernCharacter {
        ChernCharacter {
            ch0: &self.ch0 - &other.ch0,
            ch1: &self.ch1 - &other.ch1,
            ch2: &self.ch2 - &other.ch2,
            ch3: &self.ch3 - &other.ch3,
        }
    }

    pub fn scale(&self, c: i64) -> ChernCharacter {
        let cr = rat(c);
        ChernCharacter {
            ch0: &self.ch0 * BigInt::from(c),
            ch1: &self.ch1 * &cr,
            ch2: &self.ch2 * &cr,
            ch3: &self.ch3 * &cr,
        }
    }

    /// Slope `μ_H = ch_1/ch_0`; `None` encodes `+∞` for rank zero.
    pub fn mu_h(&self) -> Option<Rational> {
        self.trunc().mu_h()
    }

    /// Integrality violations against the lattice of sheaf classes.
    /// `ch_3` is only required to lie in `(1/6)Z`; failure of Riemann-Roch
    /// integrality is surfaced by [`ChernCharacter::riemann_roch_warning`]
    /// instead of here.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.trunc().validate();
        if !(&self.ch3 * rat(6)).is_integer() {
            out.push(Violation::Ch3NotSixth { ch3: self.ch3.clone() });
        }
        out
    }

    /// `Some(χ)` when the Euler characteristic fails to be an integer.
    pub fn riemann_roch_warning(&self) -> Option<Rational> {
        let chi = chi1(self);
        (!chi.is_integer()).then_some(chi)
    }
}

impl TruncatedCharacter {
    pub fn new(ch0: i64, ch1: Rational, ch2: Rational) -> Self {
        TruncatedCharacter { ch0: BigInt::from(ch0), ch1, ch2 }
    }

    /// Extends by a `ch_3` value.
    pub fn extend(&self, ch3: Rational) -> ChernCharacter {
        ChernCharacter {
            ch0: self.ch0.clone(),
            ch1: self.ch1.clone(),
            ch2: self.ch2.clone(),
            ch3,
        }
    }

    pub fn twist(&self, beta: &Rational) -> TruncatedCharacter {
        let r = Rational::from_integer(self.ch0.clone());
        let b2 = beta * beta;
        TruncatedCharacter {
            ch0: self.ch0.clone(),
            ch1: &self.ch1 - beta * &r,
            ch2: &self.ch2 - beta * &self.ch1 + &b2 / rat(2) * &r,
        }
    }

    pub fn add(&self, other: &TruncatedCharacter) -> TruncatedCharacter {
        TruncatedCharacter {
            ch0: &self.ch0 + &other.ch0,
            ch1: &self.ch1 + &other.ch1,
            ch2: &self.ch2 + &other.ch2,
        }
    }

    pub fn sub(&self, other: &TruncatedCharacter) -> TruncatedCharacter {
        TruncatedCharacter {
            ch0: &self.ch0 - &other.ch0,
            ch1: &self.ch1 - &other.ch1,
            ch2: &self.ch2 - &other.ch2,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ch0.is_zero() && self.ch1.is_zero() && self.ch2.is_zero()
    }

    pub fn mu_h(&self) -> Option<Rational> {
        if self.ch0.is_zero() {
            None
        } else {
            Some(&self.ch1 / Rational::from_integer(self.ch0.clone()))
        }
    }

    /// `H`-discriminant `Δ_H = (H^2·ch_1)^2 - 2(H^3·ch_0)(H·ch_2)`.
    pub fn delta(&self) -> Rational {
        delta_with_h3(self, 3)
    }

    /// Normalized discriminant `Δ_H / (H^3)^2 = ch_1^2 - 2·ch_0·ch_2`.
    pub fn delta_normalized(&self) -> Rational {
        self.delta() / rat(9)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.ch1.is_integer() {
            out.push(Violation::Ch1NotIntegral { ch1: self.ch1.clone() });
        }
        let six_ch2 = &self.ch2 * rat(6);
        if !six_ch2.is_integer() {
            out.push(Violation::Ch2NotSixth { ch2: self.ch2.clone() });
        } else if self.ch1.is_integer() {
            let a = six_ch2.to_integer();
            let b = self.ch1.to_integer();
            if (&a - &b) % BigInt::from(2) != BigInt::zero() {
                out.push(Violation::Ch2Parity { six_ch2: a, ch1: b });
            }
        }
        out
    }
}

fn delta_with_h3(v: &TruncatedCharacter, h3: i64) -> Rational {
    let h = rat(h3);
    let r = Rational::from_integer(v.ch0.clone());
    let a = &h * &v.ch1;
    &a * &a - rat(2) * &h * r * &h * &v.ch2
}

/// A named integrality failure; `Display` spells out the broken rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Ch1NotIntegral { ch1: Rational },
    Ch2NotSixth { ch2: Rational },
    Ch2Parity { six_ch2: BigInt, ch1: BigInt },
    Ch3NotSixth { ch3: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Ch1NotIntegral { ch1 } => write!(f, "ch1 = {ch1} not integral"),
            Violation::Ch2NotSixth { ch2 } => write!(f, "6*ch2 = {} not integral", ch2 * rat(6)),
            Violation::Ch2Parity { six_ch2, ch1 } => {
                write!(f, "parity: 6*ch2 = {six_ch2} != ch1 = {ch1} (mod 2)")
            }
            Violation::Ch3NotSixth { ch3 } => write!(f, "6*ch3 = {} not integral", ch3 * rat(6)),
        }
    }
}

/// Euler characteristic `χ(v)` on the cubic threefold.
pub fn chi1(v: &ChernCharacter) -> Rational {
    Variety::cubic_threefold().chi(v)
}

/// Euler pairing `χ(v, w) = χ(v^∨ · w)`.
pub fn chi2(v: &ChernCharacter, w: &ChernCharacter) -> Rational {
    chi1(&v.dual().product(w))
}

/// Characters of the degree-`d` curve pair: the torsion sheaf class
/// `(0, 1, (2d-3)/6, -1/6)` on a hyperplane section and the rank-`d`
/// kernel class `(d, -1, -(2d-3)/6, 1/6)`, which sum to `d·ch(O_X)`.
pub fn curve_characters(d: i64) -> Result<(ChernCharacter, ChernCharacter), LatticeError> {
    if d < 3 {
        return Err(LatticeError::Domain(format!(
            "curve degree must be at least 3, got {d}"
        )));
    }
    let half = ratio(2 * d - 3, 6);
    let torsion = ChernCharacter::new(0, rat(1), half.clone(), ratio(-1, 6));
    let kernel = ChernCharacter::new(d, rat(-1), -half, ratio(1, 6));
    Ok((torsion, kernel))
}

/// Curve degrees the construction is vetted for; other `d >= 3` are
/// accepted with a warning at the CLI layer.
pub const VETTED_CURVE_DEGREES: std::ops::RangeInclusive<i64> = 4..=6;

fn parse_components(s: &str, n: usize) -> Result<Vec<Rational>, LatticeError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(LatticeError::Parse {
            input: s.to_string(),
            reason: format!("expected {n} comma-separated components, got {}", parts.len()),
        });
    }
    parts
        .iter()
        .map(|p| {
            parse_rational(p).map_err(|_| LatticeError::Parse {
                input: s.to_string(),
                reason: format!("bad rational component {p:?}"),
            })
        })
        .collect()
}

fn integer_rank(s: &str, x: &Rational) -> Result<BigInt, LatticeError> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(LatticeError::Parse {
            input: s.to_string(),
            reason: format!("rank {x} is not an integer"),
        })
    }
}

impl FromStr for ChernCharacter {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let c = parse_components(s, 4)?;
        Ok(ChernCharacter {
            ch0: integer_rank(s, &c[0])?,
            ch1: c[1].clone(),
            ch2: c[2].clone(),
            ch3: c[3].clone(),
        })
    }
}

impl FromStr for TruncatedCharacter {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let c = parse_components(s, 3)?;
        Ok(TruncatedCharacter {
            ch0: integer_rank(s, &c[0])?,
            ch1: c[1].clone(),
            ch2: c[2].clone(),
        })
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.ch0, self.ch1, self.ch2, self.ch3)
    }
}

impl fmt::Display for TruncatedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.ch0, self.ch1, self.ch2)
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(ChernCharacter);
string_serde!(TruncatedCharacter);

/// `ν = (4, -1, -5/6, 1/6)`, the rank-4 class the engine is built around.
pub fn nu() -> ChernCharacter {
    ChernCharacter::new(4, rat(-1), ratio(-5, 6), ratio(1, 6))
}
