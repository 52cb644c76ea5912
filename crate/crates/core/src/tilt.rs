//! Tilt-stability numerics on the `(α, β)` upper half plane.
//!
//! The central charge is
//! `Z_{α,β} = ½α²·H³ch₀^β − H·ch₂^β + i·H²ch₁^β`,
//! and a numerical wall for a pair of classes is the locus where their
//! tilt slopes agree. Writing a truncated class as `(r, c, d)` in
//! `H`-power units, equality of slopes reduces to
//!
//! ```text
//! ½(α² + β²)·(r₁c₂ − r₂c₁) − β·(r₁d₂ − r₂d₁) + (c₁d₂ − c₂d₁) = 0,
//! ```
//!
//! linear in `α²`, so every wall is a semicircle `(β−c)² + α² = r²`, a
//! vertical line, everything, or empty. Points carry `α²` rather than `α`
//! and walls carry `radius²`, which keeps every predicate rational even
//! when the radius itself is a surd.

use crate::exactnum::{rat, ratio, ExactNumError, QuadraticValue, Rational};
use crate::lattice::TruncatedCharacter;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Degree of the polarization, `H^3`.
const H3: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TiltError {
    #[error("rank zero: operation needs ch0 != 0")]
    RankZero,
    #[error("alpha must be positive, got {0}")]
    NonPositiveAlpha(Rational),
    #[error("negative discriminant {0}: beta± are not real")]
    NegativeDiscriminant(Rational),
    #[error(transparent)]
    Num(#[from] ExactNumError),
}

/// A point of the upper half plane, parametrized by `α² > 0` and `β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfPlanePoint {
    alpha_sq: Rational,
    beta: Rational,
}

impl HalfPlanePoint {
    pub fn new(alpha_sq: Rational, beta: Rational) -> Result<Self, TiltError> {
        if !alpha_sq.is_positive() {
            return Err(TiltError::NonPositiveAlpha(alpha_sq));
        }
        Ok(HalfPlanePoint { alpha_sq, beta })
    }

    pub fn alpha_sq(&self) -> &Rational {
        &self.alpha_sq
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }
}

/// Exact `(Re Z, Im Z)` of the tilt central charge at a point.
pub fn central_charge(v: &TruncatedCharacter, pt: &HalfPlanePoint) -> (Rational, Rational) {
    let tw = v.twist(pt.beta());
    let h3 = rat(H3);
    let r = Rational::from_integer(tw.ch0.clone());
    let re = pt.alpha_sq() / rat(2) * &h3 * r - &h3 * &tw.ch2;
    let im = &h3 * &tw.ch1;
    (re, im)
}

/// Compares tilt slopes `μ_{α,β} = -Re Z / Im Z` at a point, with
/// `Im Z <= 0` counted as slope `+∞`, by exact cross-multiplication.
pub fn slope_cmp(
    v: &TruncatedCharacter,
    w: &TruncatedCharacter,
    pt: &HalfPlanePoint,
) -> Ordering {
    let (re_v, im_v) = central_charge(v, pt);
    let (re_w, im_w) = central_charge(w, pt);
    let v_finite = im_v.is_positive();
    let w_finite = im_w.is_positive();
    match (v_finite, w_finite) {
        (false, false) => Ordering::Equal,
        (false, true) => Ordering::Greater,
        (true, false) => Ordering::Less,
        // -re_v/im_v vs -re_w/im_w with positive denominators
        (true, true) => (re_w * im_v).cmp(&(re_v * im_w)),
    }
}

/// Locus of tilt-slope equality for a pair of classes.
///
/// Degenerate outcomes are kept, never erased: a circle equation whose
/// `radius²` is non-positive is reported as [`WallLocus::Empty`] with its
/// center data, and a pair whose slopes agree nowhere (for instance two
/// non-proportional rank-zero classes) as [`WallLocus::Empty`] without.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WallLocus {
    Circle {
        #[serde(with = "rational_string")]
        center: Rational,
        #[serde(with = "rational_string")]
        radius_sq: Rational,
    },
    Vertical {
        #[serde(with = "rational_string")]
        beta: Rational,
    },
    Everywhere,
    Empty {
        #[serde(with = "rational_string_opt", default, skip_serializing_if = "Option::is_none")]
        center: Option<Rational>,
        #[serde(with = "rational_string_opt", default, skip_serializing_if = "Option::is_none")]
        radius_sq: Option<Rational>,
    },
}

impl WallLocus {
    pub fn circle(center: Rational, radius_sq: Rational) -> Self {
        WallLocus::Circle { center, radius_sq }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, WallLocus::Circle { .. })
    }
}

impl fmt::Display for WallLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WallLocus::Circle { center, radius_sq } => {
                write!(f, "circle center {center} radius_sq {radius_sq}")
            }
            WallLocus::Vertical { beta } => write!(f, "vertical line beta {beta}"),
            WallLocus::Everywhere => write!(f, "everywhere"),
            WallLocus::Empty { center: Some(c), radius_sq: Some(r) } => {
                write!(f, "empty (center {c}, radius_sq {r})")
            }
            WallLocus::Empty { .. } => write!(f, "empty"),
        }
    }
}

mod rational_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        crate::exactnum::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

mod rational_string_opt {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| crate::exactnum::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Solves `μ_{α,β}(v) = μ_{α,β}(w)` exactly.
pub fn numerical_wall(v: &TruncatedCharacter, w: &TruncatedCharacter) -> WallLocus {
    let r1 = Rational::from_integer(v.ch0.clone());
    let r2 = Rational::from_integer(w.ch0.clone());
    let (c1, d1) = (&v.ch1, &v.ch2);
    let (c2, d2) = (&w.ch1, &w.ch2);
    let a = &r1 * c2 - &r2 * c1;
    let b = &r1 * d2 - &r2 * d1;
    let c = c1 * d2 - c2 * d1;
    if !a.is_zero() {
        let center = &b / &a;
        let radius_sq = &center * &center - rat(2) * &c / &a;
        if radius_sq.is_positive() {
            WallLocus::Circle { center, radius_sq }
        } else {
            WallLocus::Empty { center: Some(center), radius_sq: Some(radius_sq) }
        }
    } else if !b.is_zero() {
        WallLocus::Vertical { beta: &c / &b }
    } else if c.is_zero() {
        WallLocus::Everywhere
    } else {
        WallLocus::Empty { center: None, radius_sq: None }
    }
}

/// Roots `(β₋, β₊)` of the zero-slope equation `H·ch₂^β(v) = 0`,
/// `β∓ = μ_H(v) ∓ sqrt(Δ_H/(H³ch₀)²)`.
pub fn beta_pm(v: &TruncatedCharacter) -> Result<(QuadraticValue, QuadraticValue), TiltError> {
    if v.ch0.is_zero() {
        return Err(TiltError::RankZero);
    }
    let mu = v.mu_h().expect("nonzero rank");
    let delta = v.delta();
    if delta.is_negative() {
        return Err(TiltError::NegativeDiscriminant(delta));
    }
    let denom_sq = {
        let d = rat(H3) * Rational::from_integer(v.ch0.clone());
        &d * &d
    };
    let radicand = delta / denom_sq;
    let minus = QuadraticValue::new(mu.clone(), rat(-1), radicand.clone())?;
    let plus = QuadraticValue::new(mu, rat(1), radicand)?;
    Ok((minus, plus))
}

/// The hyperbola `μ_{α,β}(v) = 0` in the form `(β − μ)² − α² = rhs`,
/// returned as `(μ_H(v), Δ_H/(H³ch₀)²)`.
pub fn zero_slope_locus(v: &TruncatedCharacter) -> Result<(Rational, Rational), TiltError> {
    if v.ch0.is_zero() {
        return Err(TiltError::RankZero);
    }
    let mu = v.mu_h().expect("nonzero rank");
    let denom = rat(H3) * Rational::from_integer(v.ch0.clone());
    Ok((mu, v.delta() / (&denom * &denom)))
}

/// Admissibility of the normalized point `(ch₁/ch₀, ch₂/ch₀)` against the
/// forbidden open region bounded by the segments `y = nx − n²/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiVerdict {
    /// Strictly below the boundary: admissible.
    Outside,
    /// Exactly on the boundary; admissible only for ranks `±1`, `±2`.
    Boundary { rank_ok: bool },
    /// Strictly inside the forbidden region.
    Inside,
}

impl LiVerdict {
    /// Whether a tilt-stable object with this verdict can exist.
    pub fn admissible(&self) -> bool {
        match self {
            LiVerdict::Outside => true,
            LiVerdict::Boundary { rank_ok } => *rank_ok,
            LiVerdict::Inside => false,
        }
    }
}

pub fn li_admissible(v: &TruncatedCharacter) -> Result<LiVerdict, TiltError> {
    if v.ch0.is_zero() {
        return Err(TiltError::RankZero);
    }
    let r = Rational::from_integer(v.ch0.clone());
    let x = &v.ch1 / &r;
    let y = &v.ch2 / &r;
    // Nearest integer; at half-integers the adjacent segments agree.
    let n = Rational::from_integer((&x + ratio(1, 2)).floor().to_integer());
    let boundary = &n * &x - &n * &n / rat(2);
    Ok(match y.cmp(&boundary) {
        Ordering::Less => LiVerdict::Outside,
        Ordering::Equal => {
            let abs = v.ch0.magnitude();
            LiVerdict::Boundary { rank_ok: *abs == 1u32.into() || *abs == 2u32.into() }
        }
        Ordering::Greater => LiVerdict::Inside,
    })
}

/// Membership in the triangular region where the induced stability
/// conditions on the Kuznetsov component live:
/// `{−1/2 ≤ β, α < −β} ∪ {−1 < β < −1/2, α ≤ 1+β}`.
pub fn region_v_contains(alpha: &Rational, beta: &Rational) -> Result<bool, TiltError> {
    if !alpha.is_positive() {
        return Err(TiltError::NonPositiveAlpha(alpha.clone()));
    }
    let left = *beta >= ratio(-1, 2) && *alpha < -beta;
    let right = *beta > rat(-1) && *beta < ratio(-1, 2) && *alpha <= rat(1) + beta;
    Ok(left || right)
}

/// Where a wall meets the vertical scan line `β = β₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineCrossing {
    /// Crosses at `α² > 0`.
    At(Rational),
    /// Misses the line (including tangency at `α = 0`).
    Nowhere,
    /// The wall contains the whole line.
    WholeLine,
}

pub fn wall_alpha_sq_at(wall: &WallLocus, beta0: &Rational) -> LineCrossing {
    match wall {
        WallLocus::Circle { center, radius_sq } => {
            let off = beta0 - center;
            let alpha_sq = radius_sq - &off * &off;
            if alpha_sq.is_positive() {
                LineCrossing::At(alpha_sq)
            } else {
                LineCrossing::Nowhere
            }
        }
        WallLocus::Vertical { beta } => {
            if beta == beta0 {
                LineCrossing::WholeLine
            } else {
                LineCrossing::Nowhere
            }
        }
        WallLocus::Everywhere => LineCrossing::WholeLine,
        WallLocus::Empty { .. } => LineCrossing::Nowhere,
    }
}
