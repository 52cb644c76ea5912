//! Bounded exhaustive enumeration of candidate destabilizing decompositions.
//!
//! A scan takes a target truncated character `E`, decomposes it as
//! `E = p + q` over the integral lattice, and runs each unordered pair
//! through the filter pipeline: heart positivity on the scan line,
//! discriminant window, discriminant additivity, rank/slope restrictions,
//! wall geometry, and the admissible-region test on both pieces. Reports
//! are deterministic: pairs are stored under a lexicographic canonical
//! representative and sorted, so neither enumeration order nor worker
//! count can change the output.
//!
//! Two conventions are load-bearing and mirror how the source case
//! analyses run:
//!
//! * The discriminant window `0 ≤ Δ ≤ Δ(E)` is applied to the piece of
//!   maximal `|ch₀|` in the pair (to both on a tie). This is exactly the
//!   "change the roles of A and B" normalization: the checked side is the
//!   one the case analyses name `A`.
//! * Candidates are enumerated as untwisted integral characters with
//!   `6·ch₂ ≡ ch₁ (mod 2)`; twisted coordinates are derived on demand.

use crate::exactnum::{rat, QuadraticValue, Rational};
use crate::lattice::{TruncatedCharacter, Violation};
use crate::tilt::{
    beta_pm, li_admissible, numerical_wall, wall_alpha_sq_at, LineCrossing, LiVerdict, WallLocus,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScanError {
    #[error("invalid target {target}: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidTarget {
        target: TruncatedCharacter,
        violations: Vec<Violation>,
    },
    #[error("invalid target {target}: {reason}")]
    UnusableTarget {
        target: TruncatedCharacter,
        reason: String,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bounds error: {0}")]
    Bounds(String),
}

/// Enumeration bounds: a hard cap on `|ch₀|` of the enumerated piece and
/// an optional explicit range for `6·ch₂` (the default range is derived
/// from the discriminant window, which is always finite).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBounds {
    pub rank_max: i64,
    pub ch2_sixths: Option<(i64, i64)>,
}

impl ScanBounds {
    pub fn new(rank_max: i64) -> Result<Self, ScanError> {
        if rank_max < 1 {
            return Err(ScanError::Bounds(format!(
                "rank_max must be at least 1, got {rank_max}"
            )));
        }
        Ok(ScanBounds { rank_max, ch2_sixths: None })
    }

    pub fn with_ch2_sixths(mut self, lo: i64, hi: i64) -> Self {
        self.ch2_sixths = Some((lo, hi));
        self
    }
}

/// Which checks run. All on by default; the Li filters are the ones the
/// replayed case analyses switch off to expose their pre-exclusion lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterSet {
    pub heart: bool,
    pub discriminant: bool,
    pub discriminant_additivity: bool,
    pub li_on_p: bool,
    pub li_on_q: bool,
    pub rank_slope: bool,
    pub alpha_positive: bool,
    pub region: bool,
}

impl Default for FilterSet {
    fn default() -> Self {
        FilterSet {
            heart: true,
            discriminant: true,
            discriminant_additivity: true,
            li_on_p: true,
            li_on_q: true,
            rank_slope: true,
            alpha_positive: true,
            region: true,
        }
    }
}

impl FilterSet {
    /// Everything on except the admissible-region tests.
    pub fn without_li() -> Self {
        FilterSet { li_on_p: false, li_on_q: false, ..FilterSet::default() }
    }
}

/// Outcome of one filter for one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Passed, but worth surfacing (boundary contact of the admissible
    /// region with allowed rank).
    PassFlagged(String),
    Fail(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        !matches!(self, Verdict::Fail(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::PassFlagged(note) => write!(f, "pass: {note}"),
            Verdict::Fail(reason) => write!(f, "fail: {reason}"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(match s.as_str() {
            "pass" => Verdict::Pass,
            _ if s.starts_with("pass: ") => Verdict::PassFlagged(s[6..].to_string()),
            _ if s.starts_with("fail: ") => Verdict::Fail(s[6..].to_string()),
            _ => Verdict::Fail(s),
        })
    }
}

/// An unordered decomposition `{p, q}` of the target, stored with
/// `p <= q` lexicographically by `(ch0, ch1, ch2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub p: TruncatedCharacter,
    pub q: TruncatedCharacter,
    pub wall: WallLocus,
    #[serde(with = "rat_str_opt", default, skip_serializing_if = "Option::is_none")]
    pub alpha_sq_at_ref: Option<Rational>,
    pub verdicts: BTreeMap<String, Verdict>,
}

/// Canonical unordered form of a decomposition.
pub fn canonical_pair(
    p: TruncatedCharacter,
    q: TruncatedCharacter,
) -> (TruncatedCharacter, TruncatedCharacter) {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedCandidate {
    pub p: TruncatedCharacter,
    pub q: TruncatedCharacter,
    pub first_failed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanQuery {
    Vertical {
        #[serde(with = "rat_str")]
        beta0: Rational,
        bounds: ScanBounds,
        filters: FilterSet,
    },
    RegionLeft {
        bounds: ScanBounds,
        filters: FilterSet,
    },
}

mod rat_str {
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

mod rat_str_opt {
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

/// Deterministic scan output: survivors and rejections partition the
/// enumerated candidates, both sorted by canonical pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub target: TruncatedCharacter,
    pub query: ScanQuery,
    pub survivors: Vec<CandidatePair>,
    pub rejected: Vec<RejectedCandidate>,
    /// First-failing-filter tallies, plus a `survivors` total.
    pub counts: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ScanReport {
    pub fn survivor_pairs(&self) -> BTreeSet<(TruncatedCharacter, TruncatedCharacter)> {
        self.survivors.iter().map(|c| (c.p.clone(), c.q.clone())).collect()
    }
}

/// The scan line candidates are tested against.
enum ScanLine {
    Vertical(Rational),
    BetaMinus(QuadraticValue),
}

impl ScanLine {
    /// `H²·ch₁^β(v) / H³`, i.e. `ch₁ - β·ch₀`, as an exact value on the line.
    fn twisted_ch1(&self, v: &TruncatedCharacter) -> QuadraticValue {
        let r = Rational::from_integer(v.ch0.clone());
        match self {
            ScanLine::Vertical(beta) => QuadraticValue::from_rational(&v.ch1 - beta * &r),
            ScanLine::BetaMinus(beta) => beta.scale(&-r).add_rational(&v.ch1),
        }
    }
}

enum ScanKind {
    Vertical,
    RegionLeft,
}

struct ScanContext {
    target: TruncatedCharacter,
    delta_e: Rational,
    mu_e: Option<Rational>,
    beta_minus_e: Option<QuadraticValue>,
    line: ScanLine,
    kind: ScanKind,
    filters: FilterSet,
}

pub const FILTER_ORDER: [&str; 8] = [
    "heart",
    "discriminant",
    "discriminant_additivity",
    "rank_slope",
    "alpha_positive",
    "region",
    "li_on_p",
    "li_on_q",
];

impl ScanContext {
    fn enabled(&self, name: &str) -> bool {
        match name {
            "heart" => self.filters.heart,
            "discriminant" => self.filters.discriminant,
            "discriminant_additivity" => self.filters.discriminant_additivity,
            "rank_slope" => self.filters.rank_slope,
            "alpha_positive" => self.filters.alpha_positive,
            "region" => self.filters.region,
            "li_on_p" => self.filters.li_on_p,
            "li_on_q" => self.filters.li_on_q,
            _ => unreachable!("unknown filter {name}"),
        }
    }

    fn heart(&self, p: &TruncatedCharacter, q: &TruncatedCharacter) -> Verdict {
        for side in [p, q] {
            if self.line.twisted_ch1(side).sign() <= 0 {
                return Verdict::Fail(format!("H^2 ch1^beta({side}) <= 0 on the scan line"));
            }
        }
        Verdict::Pass
    }

    /// Window `0 ≤ Δ ≤ Δ(E)` on the max-`|ch₀|` piece(s).
    fn discriminant(&self, p: &TruncatedCharacter, q: &TruncatedCharacter) -> Verdict {
        for side in max_rank_sides(p, q) {
            let d = side.delta();
            if d.is_negative() {
                return Verdict::Fail(format!("Delta({side}) = {d} < 0"));
            }
            if d > self.delta_e {
                return Verdict::Fail(format!("Delta({side}) = {d} > Delta(target) = {}", self.delta_e));
            }
        }
        Verdict::Pass
    }

    fn additivity(&self, p: &TruncatedCharacter, q: &TruncatedCharacter) -> Verdict {
        let sum = p.delta() + q.delta();
        if sum > self.delta_e {
            Verdict::Fail(format!(
                "Delta(p) + Delta(q) = {sum} > Delta(target) = {}",
                self.delta_e
            ))
        } else {
            Verdict::Pass
        }
    }

    /// Restrictions on destabilizing sequences for positive-rank targets:
    /// some piece must have positive rank and slope at most the target's,
    /// and on region scans that piece also needs
    /// `β₋(target) < β₋(piece)` (semicircular-wall chain).
    fn rank_slope(&self, p: &TruncatedCharacter, q: &TruncatedCharacter) -> Verdict {
        if !self.target.ch0.is_positive() {
            return Verdict::Pass;
        }
        let mu_e = self.mu_e.as_ref().expect("positive rank");
        let qualifying: Vec<&TruncatedCharacter> = [p, q]
            .into_iter()
            .filter(|s| s.ch0.is_positive() && s.mu_h().as_ref() <= Some(mu_e))
            .collect();
        if qualifying.is_empty() {
            return Verdict::Fail(
                "no piece has positive rank and slope at most the target's".into(),
            );
        }
        if matches!(self.kind, ScanKind::RegionLeft) {
            let beta_minus_e = self.beta_minus_e.as_ref().expect("region scan");
            for side in qualifying {
                match beta_pm(side) {
                    Ok((beta_minus, _)) => {
                        if beta_minus <= *beta_minus_e {
                            return Verdict::Fail(format!(
                                "beta_-({side}) <= beta_-(target)"
                            ));
                        }
                        if side.mu_h().as_ref() >= Some(mu_e) {
                            return Verdict::Fail(format!(
                                "mu_H({side}) is not strictly below mu_H(target)"
                            ));
                        }
                    }
                    Err(_) => {
                        return Verdict::Fail(format!(
                            "beta_-({side}) undefined (negative discriminant)"
                        ))
                    }
                }
            }
        }
        Verdict::Pass
    }

    fn wall_geometry(
        &self,
        wall: &WallLocus,
    ) -> (Verdict, Verdict, Option<Rational>) {
        match self.kind {
            ScanKind::Vertical => {
                let beta0 = match &self.line {
                    ScanLine::Vertical(b) => b,
                    ScanLine::BetaMinus(_) => unreachable!(),
                };
                let alpha = match wall_alpha_sq_at(wall, beta0) {
                    LineCrossing::At(a) => {
                        return (Verdict::Pass, Verdict::Pass, Some(a));
                    }
                    LineCrossing::Nowhere => Verdict::Fail(format!(
                        "wall ({wall}) does not cross the scan line at alpha^2 > 0"
                    )),
                    LineCrossing::WholeLine => Verdict::Fail(
                        "slope equality holds along the whole scan line".into(),
                    ),
                };
                (alpha, Verdict::Pass, None)
            }
            ScanKind::RegionLeft => {
                let geometry = if wall.is_circle() {
                    Verdict::Pass
                } else {
                    Verdict::Fail(format!("wall is not a semicircle ({wall})"))
                };
                let region = match wall {
                    WallLocus::Circle { center, .. } => {
                        let mu_e = self.mu_e.as_ref().expect("positive rank");
                        if center < mu_e {
                            Verdict::Pass
                        } else {
                            Verdict::Fail(format!(
                                "wall center {center} is not strictly left of the vertical wall beta = {mu_e}"
                            ))
                        }
                    }
                    _ => Verdict::Pass,
                };
                (geometry, region, None)
            }
        }
    }

    fn li(&self, side: &TruncatedCharacter) -> Verdict {
        if side.ch0.is_zero() {
            return Verdict::PassFlagged("rank zero, bound not applicable".into());
        }
        match li_admissible(side).expect("nonzero rank") {
            LiVerdict::Outside => Verdict::Pass,
            LiVerdict::Boundary { rank_ok: true } => {
                Verdict::PassFlagged("on admissible-region boundary with rank +-1/+-2".into())
            }
            LiVerdict::Boundary { rank_ok: false } => Verdict::Fail(format!(
                "normalized point of {side} on admissible-region boundary with |rank| > 2"
            )),
            LiVerdict::Inside => Verdict::Fail(format!(
                "normalized point of {side} inside the forbidden region"
            )),
        }
    }

    /// Runs the pipeline on one canonical pair. `Ok` carries the full
    /// candidate record; `Err` carries the first failing filter.
    fn evaluate(
        &self,
        p: TruncatedCharacter,
        q: TruncatedCharacter,
    ) -> Result<CandidatePair, RejectedCandidate> {
        let wall = numerical_wall(&self.target, &p);
        let (alpha_verdict, region_verdict, alpha_sq) = self.wall_geometry(&wall);
        let mut verdicts = BTreeMap::new();
        let mut first_failed: Option<String> = None;
        for name in FILTER_ORDER {
            if !self.enabled(name) {
                continue;
            }
            let verdict = match name {
                "heart" => self.heart(&p, &q),
                "discriminant" => self.discriminant(&p, &q),
                "discriminant_additivity" => self.additivity(&p, &q),
                "rank_slope" => self.rank_slope(&p, &q),
                "alpha_positive" => alpha_verdict.clone(),
                "region" => region_verdict.clone(),
                "li_on_p" => self.li(&p),
                "li_on_q" => self.li(&q),
                _ => unreachable!(),
            };
            if !verdict.passed() && first_failed.is_none() {
                first_failed = Some(name.to_string());
            }
            verdicts.insert(name.to_string(), verdict);
        }
        match first_failed {
            None => Ok(CandidatePair { p, q, wall, alpha_sq_at_ref: alpha_sq, verdicts }),
            Some(first_failed) => Err(RejectedCandidate { p, q, first_failed }),
        }
    }
}

fn max_rank_sides<'a>(
    p: &'a TruncatedCharacter,
    q: &'a TruncatedCharacter,
) -> Vec<&'a TruncatedCharacter> {
    let ap = p.ch0.magnitude();
    let aq = q.ch0.magnitude();
    match ap.cmp(aq) {
        std::cmp::Ordering::Greater => vec![p],
        std::cmp::Ordering::Less => vec![q],
        std::cmp::Ordering::Equal => vec![p, q],
    }
}

/// Inclusive `ch₂` interval for a piece of nonzero rank `r` and first
/// class `c1`, from `0 ≤ 9c1² − 18·r·d ≤ Δ(E)`.
fn window_interval(r: &BigInt, c1: &Rational, delta_e: &Rational) -> (Rational, Rational) {
    let rr = Rational::from_integer(r.clone());
    let nine_c1_sq = rat(9) * c1 * c1;
    let a = (&nine_c1_sq - delta_e) / (rat(18) * &rr);
    let b = nine_c1_sq / (rat(18) * rr);
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn intersect(
    a: (Rational, Rational),
    b: (Rational, Rational),
) -> (Rational, Rational) {
    (a.0.max(b.0), a.1.min(b.1))
}

/// Integer values of `6·ch₂` inside a rational interval, with the parity
/// constraint `6·ch₂ ≡ ch₁ (mod 2)` (the lattice condition
/// `c₂ ∈ (1/3)H²·Z`). Disabling parity strictly enlarges the enumeration;
/// it is compiled in for real scans and only relaxed by in-module tests.
fn six_ch2_values(
    lo: &Rational,
    hi: &Rational,
    c1: &Rational,
    enforce_parity: bool,
) -> Vec<BigInt> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let c1_int = c1.to_integer();
    let mut n = lo.ceil().to_integer();
    let last = hi.floor().to_integer();
    while n <= last {
        if !enforce_parity || (&n - &c1_int) % BigInt::from(2) == BigInt::zero() {
            out.push(n.clone());
        }
        n += 1;
    }
    out
}

fn validate_target(target: &TruncatedCharacter) -> Result<(), ScanError> {
    let violations = target.validate();
    if !violations.is_empty() {
        return Err(ScanError::InvalidTarget { target: target.clone(), violations });
    }
    Ok(())
}

/// Integer part of a quadratic value, exact.
fn qv_floor(v: &QuadraticValue) -> BigInt {
    if let Some(r) = v.as_rational() {
        return r.floor().to_integer();
    }
    // Rational estimate of sqrt(d) good to ~1e-18, then exact fix-up.
    let scale = BigInt::from(10u64.pow(18));
    let d = v.radicand();
    let n = d.numer() * d.denom() * &scale * &scale;
    let s = num_integer::Roots::sqrt(&n);
    let sqrt_lo = Rational::new(s, d.denom() * &scale);
    let estimate = v.rational_part() + v.surd_coefficient() * sqrt_lo;
    let mut k = estimate.floor().to_integer();
    let as_qv = |k: &BigInt| QuadraticValue::from_rational(Rational::from_integer(k.clone()));
    while *v >= as_qv(&(&k + BigInt::from(1))) {
        k += 1;
    }
    while *v < as_qv(&k) {
        k -= 1;
    }
    k
}

fn collect_pairs_vertical(
    target: &TruncatedCharacter,
    beta0: &Rational,
    bounds: &ScanBounds,
    delta_e: &Rational,
    enforce_parity: bool,
) -> BTreeSet<(TruncatedCharacter, TruncatedCharacter)> {
    let mut pairs = BTreeSet::new();
    let width = {
        let r = Rational::from_integer(target.ch0.clone());
        &target.ch1 - beta0 * r
    };
    if !width.is_positive() {
        return pairs;
    }
    for r_p in -bounds.rank_max..=bounds.rank_max {
        let r_p_big = BigInt::from(r_p);
        let r_q = &target.ch0 - &r_p_big;
        let lo = beta0 * rat(r_p);
        let hi = &lo + &width;
        // Integer c1 strictly between lo and hi.
        let mut c1 = lo.floor().to_integer();
        loop {
            let c1_rat = Rational::from_integer(c1.clone());
            if c1_rat >= hi {
                break;
            }
            if c1_rat > lo {
                push_candidates_for_stratum(
                    target,
                    &r_p_big,
                    &r_q,
                    &c1_rat,
                    delta_e,
                    bounds,
                    enforce_parity,
                    &mut pairs,
                );
            }
            c1 += 1;
        }
    }
    pairs
}

#[allow(clippy::too_many_arguments)]
fn push_candidates_for_stratum(
    target: &TruncatedCharacter,
    r_p: &BigInt,
    r_q: &BigInt,
    c1: &Rational,
    delta_e: &Rational,
    bounds: &ScanBounds,
    enforce_parity: bool,
    pairs: &mut BTreeSet<(TruncatedCharacter, TruncatedCharacter)>,
) {
    let c_q = &target.ch1 - c1;
    if r_p.is_zero() && r_q.is_zero() {
        // Rank-zero pairs have β-independent slopes; the only candidate
        // ch₂ is the proportional one, and only when the target has a
        // finite slope direction to share.
        if target.ch1.is_zero() {
            return;
        }
        let d = &target.ch2 * c1 / &target.ch1;
        if (&d * rat(6)).is_integer() {
            for n in six_ch2_values(&(&d * rat(6)), &(&d * rat(6)), c1, enforce_parity) {
                let d = Rational::new(n, BigInt::from(6));
                let p = TruncatedCharacter { ch0: r_p.clone(), ch1: c1.clone(), ch2: d.clone() };
                let q = TruncatedCharacter {
                    ch0: r_q.clone(),
                    ch1: c_q.clone(),
                    ch2: &target.ch2 - &d,
                };
                pairs.insert(canonical_pair(p, q));
            }
        }
        return;
    }
    let interval = match bounds.ch2_sixths {
        Some((lo, hi)) => (Rational::new(BigInt::from(lo), 6.into()), Rational::new(BigInt::from(hi), 6.into())),
        None => {
            let on_p = (!r_p.is_zero()).then(|| window_interval(r_p, c1, delta_e));
            let on_q = (!r_q.is_zero()).then(|| {
                let (lo, hi) = window_interval(r_q, &c_q, delta_e);
                // Δ window on q in terms of d(p) = ch2(target) - d(q).
                (&target.ch2 - hi, &target.ch2 - lo)
            });
            match (r_p.magnitude().cmp(r_q.magnitude()), on_p, on_q) {
                (std::cmp::Ordering::Greater, Some(w), _) => w,
                (std::cmp::Ordering::Less, _, Some(w)) => w,
                (std::cmp::Ordering::Equal, Some(a), Some(b)) => intersect(a, b),
                (_, Some(w), None) | (_, None, Some(w)) => w,
                (_, None, None) => unreachable!("both ranks zero handled above"),
            }
        }
    };
    let (lo, hi) = (&interval.0 * rat(6), &interval.1 * rat(6));
    for n in six_ch2_values(&lo, &hi, c1, enforce_parity) {
        let d = Rational::new(n, BigInt::from(6));
        let p = TruncatedCharacter { ch0: r_p.clone(), ch1: c1.clone(), ch2: d.clone() };
        let q = TruncatedCharacter {
            ch0: r_q.clone(),
            ch1: c_q.clone(),
            ch2: &target.ch2 - &d,
        };
        pairs.insert(canonical_pair(p, q));
    }
}

fn run_scan(
    ctx: &ScanContext,
    pairs: BTreeSet<(TruncatedCharacter, TruncatedCharacter)>,
    query: ScanQuery,
    warnings: Vec<String>,
) -> ScanReport {
    let results: Vec<_> = pairs
        .into_par_iter()
        .map(|(p, q)| ctx.evaluate(p, q))
        .collect();
    let mut survivors = Vec::new();
    let mut rejected = Vec::new();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in results {
        match r {
            Ok(c) => survivors.push(c),
            Err(r) => {
                *counts.entry(r.first_failed.clone()).or_default() += 1;
                rejected.push(r);
            }
        }
    }
    survivors.sort_by(|a, b| (&a.p, &a.q).cmp(&(&b.p, &b.q)));
    rejected.sort_by(|a, b| (&a.p, &a.q).cmp(&(&b.p, &b.q)));
    counts.insert("survivors".into(), survivors.len());
    ScanReport {
        target: ctx.target.clone(),
        query,
        survivors,
        rejected,
        counts,
        warnings,
    }
}

/// Scans for decompositions crossing the vertical line `β = β₀`.
pub fn scan_vertical(
    target: &TruncatedCharacter,
    beta0: &Rational,
    bounds: &ScanBounds,
    filters: &FilterSet,
) -> Result<ScanReport, ScanError> {
    scan_vertical_inner(target, beta0, bounds, filters, true)
}

fn scan_vertical_inner(
    target: &TruncatedCharacter,
    beta0: &Rational,
    bounds: &ScanBounds,
    filters: &FilterSet,
    enforce_parity: bool,
) -> Result<ScanReport, ScanError> {
    validate_target(target)?;
    let delta_e = target.delta();
    let mut warnings = Vec::new();
    if delta_e.is_negative() {
        warnings.push(format!("target discriminant {delta_e} is negative"));
    }
    if BigInt::from(bounds.rank_max) < target.ch0.magnitude().clone().into() {
        warnings.push(format!(
            "rank_max = {} is below |ch0(target)| = {}",
            bounds.rank_max,
            target.ch0.magnitude()
        ));
    }
    let pairs = collect_pairs_vertical(target, beta0, bounds, &delta_e, enforce_parity);
    let ctx = ScanContext {
        target: target.clone(),
        delta_e,
        mu_e: target.mu_h(),
        beta_minus_e: None,
        line: ScanLine::Vertical(beta0.clone()),
        kind: ScanKind::Vertical,
        filters: *filters,
    };
    let query = ScanQuery::Vertical {
        beta0: beta0.clone(),
        bounds: bounds.clone(),
        filters: *filters,
    };
    Ok(run_scan(&ctx, pairs, query, warnings))
}

/// Scans for semicircular walls strictly left of the vertical wall of a
/// positive-rank target; the scan line is `β = β₋(target)`, which every
/// such wall crosses.
pub fn scan_region_left(
    target: &TruncatedCharacter,
    bounds: &ScanBounds,
    filters: &FilterSet,
) -> Result<ScanReport, ScanError> {
    validate_target(target)?;
    if !target.ch0.is_positive() {
        return Err(ScanError::UnusableTarget {
            target: target.clone(),
            reason: "region scan needs a strictly positive rank".into(),
        });
    }
    let delta_e = target.delta();
    if delta_e.is_negative() {
        return Err(ScanError::UnusableTarget {
            target: target.clone(),
            reason: format!("discriminant {delta_e} is negative"),
        });
    }
    let mut warnings = Vec::new();
    if BigInt::from(bounds.rank_max) < target.ch0.magnitude().clone().into() {
        warnings.push(format!(
            "rank_max = {} is below ch0(target) = {}",
            bounds.rank_max, target.ch0
        ));
    }
    let (beta_minus, _) = beta_pm(target).expect("positive rank, nonnegative discriminant");
    let mu_e = target.mu_h().expect("positive rank");
    // Heart width on the line: ch1 - β₋·ch0 of the target.
    let width = beta_minus
        .scale(&-Rational::from_integer(target.ch0.clone()))
        .add_rational(&target.ch1);
    if width.sign() <= 0 {
        warnings.push("target has no semicircular walls: discriminant is zero".into());
    }

    let mut pairs = BTreeSet::new();
    for r_p in 1..=bounds.rank_max {
        let r_p_big = BigInt::from(r_p);
        let r_q = &target.ch0 - &r_p_big;
        let line_lo = beta_minus.scale(&rat(r_p));
        let line_hi = line_lo.checked_add(&width).expect("same radicand");
        let k_lo = qv_floor(&line_lo);
        let k_hi = qv_floor(&line_hi);
        let mut c1 = k_lo.clone();
        while c1 <= &k_hi + BigInt::from(1) {
            let c1_rat = Rational::from_integer(c1.clone());
            let c1_qv = QuadraticValue::from_rational(c1_rat.clone());
            let in_heart = c1_qv > line_lo && c1_qv < line_hi;
            // μ_H(p) ≤ μ_H(target), the normalization of the piece the
            // chain conditions attach to.
            let slope_ok = &c1_rat / rat(r_p) <= mu_e;
            if in_heart && slope_ok {
                push_candidates_for_stratum(
                    target,
                    &r_p_big,
                    &r_q,
                    &c1_rat,
                    &delta_e,
                    bounds,
                    true,
                    &mut pairs,
                );
            }
            c1 += 1;
        }
    }
    let ctx = ScanContext {
        target: target.clone(),
        delta_e,
        mu_e: Some(mu_e),
        beta_minus_e: Some(beta_minus.clone()),
        line: ScanLine::BetaMinus(beta_minus),
        kind: ScanKind::RegionLeft,
        filters: *filters,
    };
    let query = ScanQuery::RegionLeft { bounds: bounds.clone(), filters: *filters };
    Ok(run_scan(&ctx, pairs, query, warnings))
}

/// The discriminant-window inequality in the `(a, b, c)` coordinates the
/// case analyses use (`A = (a, bH, (c/6)H²)`): `3b² − K ≤ ac ≤ 3b²` with
/// `K = Δ_H(target)/3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub target: TruncatedCharacter,
    #[serde(with = "rat_str")]
    pub k: Rational,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "3b^2-{} <= ac <= 3b^2", self.k)
    }
}

pub fn derived_bound_report(target: &TruncatedCharacter) -> BoundReport {
    BoundReport { target: target.clone(), k: target.delta() / rat(3) }
}

/// Exclusion test for an `O_X^{⊕r}[1]` quotient on the tangent wall of
/// the rank-4 analysis: true iff `(5/6)² > (23/3) / (4r(r−4))`.
pub fn oplus_exclusion(r: i64) -> Result<bool, ScanError> {
    if r <= 4 {
        return Err(ScanError::Domain(format!(
            "quotient count must exceed 4, got {r}"
        )));
    }
    let lhs = crate::exactnum::ratio(5, 6) * crate::exactnum::ratio(5, 6);
    let rhs = crate::exactnum::ratio(23, 3) / rat(4 * r * (r - 4));
    Ok(lhs > rhs)
}
