//! Shared machinery for the randomized property suites and the naive
//! scan oracle. Used by the per-topic test files and re-run wholesale by
//! the acceptance target.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use tiltwall::exactnum::{rat, ratio, QuadraticValue, Rational};
use tiltwall::lattice::{chi1, chi2, ChernCharacter, TruncatedCharacter};
use tiltwall::tilt::{beta_pm, numerical_wall, zero_slope_locus, WallLocus};
use tiltwall::wallfinder::{canonical_pair, scan_region_left, scan_vertical, FilterSet, ScanBounds};

pub type Pair = (TruncatedCharacter, TruncatedCharacter);

pub fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x7a11_0000 ^ tag)
}

pub fn tr(s: &str) -> TruncatedCharacter {
    s.parse().unwrap()
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(-60i64..=60);
    let d = rng.gen_range(1i64..=12);
    Rational::new(n.into(), d.into())
}

/// A random point of the integral lattice truncated to degree 2.
pub fn lattice_trunc(rng: &mut ChaCha8Rng) -> TruncatedCharacter {
    let r = rng.gen_range(-6i64..=6);
    let c1 = rng.gen_range(-6i64..=6);
    let mut n = rng.gen_range(-30i64..=30);
    if (n - c1).rem_euclid(2) == 1 {
        n += 1;
    }
    TruncatedCharacter::new(r, rat(c1), Rational::new(n.into(), 6.into()))
}

pub fn nonzero_lattice_trunc(rng: &mut ChaCha8Rng) -> TruncatedCharacter {
    loop {
        let v = lattice_trunc(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A random point of the full lattice of sheaf classes, sampled from its
/// generators `ch(O_X)`, `ch(O_X(H))`, `(0,0,1/3,0)`, `(0,0,0,1/3)`.
pub fn sheaf_lattice_point(rng: &mut ChaCha8Rng) -> ChernCharacter {
    let gens = [
        ChernCharacter::structure_sheaf(),
        ChernCharacter::line_bundle(1),
        ChernCharacter::new(0, rat(0), Rational::new(1.into(), 3.into()), rat(0)),
        ChernCharacter::new(0, rat(0), rat(0), Rational::new(1.into(), 3.into())),
    ];
    let mut v = ChernCharacter::zero();
    for g in &gens {
        let k = rng.gen_range(-8i64..=8);
        v = v.add(&g.scale(k));
    }
    v
}

pub fn translate(wall: &WallLocus, t: &Rational) -> WallLocus {
    match wall {
        WallLocus::Circle { center, radius_sq } => WallLocus::Circle {
            center: center - t,
            radius_sq: radius_sq.clone(),
        },
        WallLocus::Vertical { beta } => WallLocus::Vertical { beta: beta - t },
        WallLocus::Everywhere => WallLocus::Everywhere,
        WallLocus::Empty { center, radius_sq } => WallLocus::Empty {
            center: center.as_ref().map(|c| c - t),
            radius_sq: radius_sq.clone(),
        },
    }
}

// ------------------------------------------------------------------
// Property suites. Each takes its case count so the acceptance target
// can re-run them at full volume.
// ------------------------------------------------------------------

pub fn suite_wall_symmetry(cases: usize) {
    let mut rng = rng(1);
    for _ in 0..cases {
        let v = lattice_trunc(&mut rng);
        let w = lattice_trunc(&mut rng);
        assert_eq!(numerical_wall(&v, &w), numerical_wall(&w, &v), "v={v} w={w}");
    }
}

/// `W(v, k·w + j·v) = W(v, w)` for every nonzero integer `k` and every
/// `j`; rational pencil shifts follow by rescaling, which leaves slope
/// equality untouched.
pub fn suite_pencil_invariance(cases: usize) {
    let mut rng = rng(2);
    for _ in 0..cases {
        let v = lattice_trunc(&mut rng);
        let w = lattice_trunc(&mut rng);
        let k = loop {
            let k = rng.gen_range(-9i64..=9);
            if k != 0 {
                break k;
            }
        };
        let j = rng.gen_range(-9i64..=9);
        let moved = TruncatedCharacter {
            ch0: BigInt::from(k) * &w.ch0 + BigInt::from(j) * &v.ch0,
            ch1: rat(k) * &w.ch1 + rat(j) * &v.ch1,
            ch2: rat(k) * &w.ch2 + rat(j) * &v.ch2,
        };
        assert_eq!(
            numerical_wall(&v, &moved),
            numerical_wall(&v, &w),
            "v={v} w={w} k={k} j={j}"
        );
    }
}

pub fn suite_twist_equivariance(cases: usize) {
    let mut rng = rng(3);
    for _ in 0..cases {
        let v = lattice_trunc(&mut rng);
        let w = lattice_trunc(&mut rng);
        let t = small_rational(&mut rng);
        let lhs = numerical_wall(&v.twist(&t), &w.twist(&t));
        let rhs = translate(&numerical_wall(&v, &w), &t);
        assert_eq!(lhs, rhs, "v={v} w={w} t={t}");
    }
}

pub fn suite_delta_twist_invariance(cases: usize) {
    let mut rng = rng(4);
    for _ in 0..cases {
        let v = lattice_trunc(&mut rng);
        let t = small_rational(&mut rng);
        assert_eq!(v.twist(&t).delta(), v.delta(), "v={v} t={t}");
    }
}

pub fn suite_apex_on_hyperbola(cases: usize) {
    let mut rng = rng(5);
    let mut seen = 0usize;
    while seen < cases {
        let v = nonzero_lattice_trunc(&mut rng);
        if v.ch0.is_zero() {
            continue;
        }
        let w = lattice_trunc(&mut rng);
        if let WallLocus::Circle { center, radius_sq } = numerical_wall(&v, &w) {
            let (mu, rhs) = zero_slope_locus(&v).unwrap();
            let off = &center - &mu;
            assert_eq!(&off * &off - radius_sq, rhs, "v={v} w={w}");
            seen += 1;
        }
    }
}

pub fn suite_rank_zero_apex_line(cases: usize) {
    let mut rng = rng(6);
    let mut seen = 0usize;
    while seen < cases {
        let v = lattice_trunc(&mut rng);
        if !v.ch0.is_zero() || v.ch1.is_zero() {
            continue;
        }
        let w = lattice_trunc(&mut rng);
        if let WallLocus::Circle { center, .. } = numerical_wall(&v, &w) {
            assert_eq!(center, &v.ch2 / &v.ch1, "v={v} w={w}");
            seen += 1;
        }
    }
}

pub fn suite_walls_never_cross(cases: usize) {
    let mut rng = rng(7);
    let mut seen = 0usize;
    while seen < cases {
        let v = nonzero_lattice_trunc(&mut rng);
        if v.delta().is_negative() {
            continue;
        }
        let w1 = lattice_trunc(&mut rng);
        let w2 = lattice_trunc(&mut rng);
        let (c1, r1) = match numerical_wall(&v, &w1) {
            WallLocus::Circle { center, radius_sq } => (center, radius_sq),
            _ => continue,
        };
        let (c2, r2) = match numerical_wall(&v, &w2) {
            WallLocus::Circle { center, radius_sq } => (center, radius_sq),
            _ => continue,
        };
        seen += 1;
        if (&c1, &r1) == (&c2, &r2) {
            continue;
        }
        // Two circles meet iff |r1 - r2| < dist < r1 + r2, i.e. exactly
        // when (dist² - r1² - r2²)² < 4·r1²·r2²; everything here is
        // rational in the squared data.
        let dist_sq = (&c1 - &c2) * (&c1 - &c2);
        let lhs = &dist_sq - &r1 - &r2;
        assert!(
            &lhs * &lhs >= rat(4) * &r1 * &r2,
            "walls of v={v} cross: w1={w1} ({c1},{r1}), w2={w2} ({c2},{r2})"
        );
    }
}

/// Substituting β = β± into `H·ch₂^β(v)` gives exactly zero, in quadratic
/// field arithmetic.
pub fn suite_beta_pm_roots(cases: usize) {
    let mut rng = rng(8);
    let mut seen = 0usize;
    while seen < cases {
        let v = nonzero_lattice_trunc(&mut rng);
        if v.ch0.is_zero() || v.delta().is_negative() {
            continue;
        }
        let (minus, plus) = beta_pm(&v).unwrap();
        for beta in [minus, plus] {
            let beta_sq = beta.checked_mul(&beta).unwrap();
            let r_half = Rational::from_integer(v.ch0.clone()) / rat(2);
            let value = beta_sq
                .scale(&r_half)
                .checked_add(&beta.scale(&-&v.ch1))
                .unwrap()
                .add_rational(&v.ch2);
            assert!(value.is_zero(), "v={v}");
        }
        seen += 1;
    }
}

pub fn suite_chi2_bilinear_integral(cases: usize) {
    let mut rng = rng(9);
    let o = ChernCharacter::structure_sheaf();
    for _ in 0..cases {
        let u = sheaf_lattice_point(&mut rng);
        let v = sheaf_lattice_point(&mut rng);
        let w = sheaf_lattice_point(&mut rng);
        let a = rng.gen_range(-5i64..=5);
        let b = rng.gen_range(-5i64..=5);
        let left = chi2(&u.scale(a).add(&v.scale(b)), &w);
        assert_eq!(left, rat(a) * chi2(&u, &w) + rat(b) * chi2(&v, &w));
        let right = chi2(&w, &u.scale(a).add(&v.scale(b)));
        assert_eq!(right, rat(a) * chi2(&w, &u) + rat(b) * chi2(&w, &v));
        assert!(u.validate().is_empty());
        assert!(chi2(&u, &v).is_integer(), "chi({u}, {v}) not integral");
        assert_eq!(chi1(&u), chi2(&o, &u));
    }
}

pub fn suite_qv_cmp_vs_decimal_oracle(cases: usize) {
    let mut rng = rng(10);
    for _ in 0..cases {
        let x = random_qv(&mut rng);
        let y = random_qv(&mut rng);
        let (sx, ex) = scaled_decimal(&x);
        let (sy, ey) = scaled_decimal(&y);
        let margin = ex + ey;
        let diff = &sx - &sy;
        if diff.magnitude() > margin.magnitude() {
            let expected = if diff.is_positive() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            };
            assert_eq!(x.cmp(&y), expected, "x={x} y={y}");
        } else {
            // Within oracle error the values must be exactly equal:
            // distinct quadratic irrationals with these parameter sizes
            // are separated by far more than 10^-100.
            assert_eq!(x.cmp(&y), std::cmp::Ordering::Equal, "x={x} y={y}");
        }
    }
}

/// Total-order laws of the quadratic comparison over random triples.
pub fn suite_qv_order_laws(cases: usize) {
    let mut rng = rng(11);
    for _ in 0..cases {
        let x = random_qv(&mut rng);
        let y = random_qv(&mut rng);
        let z = random_qv(&mut rng);
        assert_eq!(x.cmp(&y), y.cmp(&x).reverse(), "x={x} y={y}");
        if x <= y && y <= z {
            assert!(x <= z, "x={x} y={y} z={z}");
        }
    }
}

/// Twisting is a group action: twist(twist(v, a), b) = twist(v, a + b).
pub fn suite_twist_composition(cases: usize) {
    let mut rng = rng(12);
    for _ in 0..cases {
        let v = lattice_trunc(&mut rng);
        let a = small_rational(&mut rng);
        let b = small_rational(&mut rng);
        assert_eq!(v.twist(&a).twist(&b), v.twist(&(&a + &b)), "v={v} a={a} b={b}");
        let full = sheaf_lattice_point(&mut rng);
        assert_eq!(full.twist(&a).twist(&b), full.twist(&(&a + &b)));
    }
}

pub fn random_qv(rng: &mut ChaCha8Rng) -> QuadraticValue {
    let p = small_rational(rng);
    let q = small_rational(rng);
    let d = loop {
        let d = small_rational(rng);
        if !d.is_negative() {
            break d;
        }
    };
    QuadraticValue::new(p, q, d).unwrap()
}

/// `(round(value · 10^100), error bound)` using integer square roots.
pub fn scaled_decimal(v: &QuadraticValue) -> (BigInt, BigInt) {
    let scale = BigInt::from(10u32).pow(100);
    let p_scaled =
        (v.rational_part() * Rational::from_integer(scale.clone())).floor().to_integer();
    if v.surd_coefficient().is_zero() {
        return (p_scaled, BigInt::from(2));
    }
    let d = v.radicand();
    // sqrt(n/m) = sqrt(n·m)/m; isqrt(n·m·scale²) approximates to one ulp.
    let nm = d.numer() * d.denom();
    let root = (nm * &scale * &scale).sqrt();
    let sqrt_scaled = Rational::new(root, d.denom().clone());
    let q_scaled = (v.surd_coefficient() * sqrt_scaled).floor().to_integer();
    // Error: 1 from each floor, plus |q|/denom from the root's ulp.
    let q_err = (v.surd_coefficient() / Rational::from_integer(d.denom().clone()))
        .abs()
        .ceil()
        .to_integer();
    (p_scaled + q_scaled, q_err + BigInt::from(3))
}

// ------------------------------------------------------------------
// Naive reference scanner: static ranges, direct predicates.
// ------------------------------------------------------------------

pub fn naive_delta(r: &BigInt, c: &Rational, d: &Rational) -> Rational {
    let r = Rational::from_integer(r.clone());
    rat(9) * c * c - rat(18) * r * d
}

fn li_ok(r: &BigInt, c: &Rational, d: &Rational) -> bool {
    if r.is_zero() {
        return true;
    }
    let rr = Rational::from_integer(r.clone());
    let x = c / &rr;
    let y = d / &rr;
    let n = Rational::from_integer((&x + ratio(1, 2)).floor().to_integer());
    let boundary = &n * &x - &n * &n / rat(2);
    if y < boundary {
        true
    } else if y == boundary {
        let a = r.magnitude();
        *a == 1u32.into() || *a == 2u32.into()
    } else {
        false
    }
}

fn window_ok(p: &TruncatedCharacter, q: &TruncatedCharacter, delta_e: &Rational) -> bool {
    let dp = naive_delta(&p.ch0, &p.ch1, &p.ch2);
    let dq = naive_delta(&q.ch0, &q.ch1, &q.ch2);
    let in_window = |x: &Rational| !x.is_negative() && x <= delta_e;
    match p.ch0.magnitude().cmp(q.ch0.magnitude()) {
        std::cmp::Ordering::Greater => in_window(&dp),
        std::cmp::Ordering::Less => in_window(&dq),
        std::cmp::Ordering::Equal => in_window(&dp) && in_window(&dq),
    }
}

fn rank_slope_exists(
    target: &TruncatedCharacter,
    p: &TruncatedCharacter,
    q: &TruncatedCharacter,
) -> bool {
    if !target.ch0.is_positive() {
        return true;
    }
    let mu_e = &target.ch1 / Rational::from_integer(target.ch0.clone());
    [p, q].into_iter().any(|s| {
        s.ch0.is_positive() && &s.ch1 / Rational::from_integer(s.ch0.clone()) <= mu_e
    })
}

fn alpha_sq_positive(
    target: &TruncatedCharacter,
    p: &TruncatedCharacter,
    beta: &Rational,
) -> bool {
    let im = |v: &TruncatedCharacter| &v.ch1 - beta * Rational::from_integer(v.ch0.clone());
    let tw2 = |v: &TruncatedCharacter| {
        &v.ch2 - beta * &v.ch1 + beta * beta / rat(2) * Rational::from_integer(v.ch0.clone())
    };
    let coef = Rational::from_integer(p.ch0.clone()) * im(target)
        - Rational::from_integer(target.ch0.clone()) * im(p);
    let rhs = rat(2) * (tw2(p) * im(target) - tw2(target) * im(p));
    if coef.is_zero() {
        return false;
    }
    (rhs / coef).is_positive()
}

const SIX_CH2_RANGE: i64 = 1500;

pub fn naive_vertical(
    target: &TruncatedCharacter,
    beta0: &Rational,
    rank_max: i64,
    li: bool,
) -> BTreeSet<Pair> {
    let delta_e = naive_delta(&target.ch0, &target.ch1, &target.ch2);
    let mut out = BTreeSet::new();
    for r_p in -rank_max..=rank_max {
        for c1_int in -(3 * rank_max + 9)..=(3 * rank_max + 9) {
            let p0 = BigInt::from(r_p);
            let c1 = rat(c1_int);
            let heart_p = &c1 - beta0 * rat(r_p);
            let heart_q =
                (&target.ch1 - &c1) - beta0 * Rational::from_integer(&target.ch0 - &p0);
            if !heart_p.is_positive() || !heart_q.is_positive() {
                continue;
            }
            for n in -SIX_CH2_RANGE..=SIX_CH2_RANGE {
                if (n - c1_int).rem_euclid(2) != 0 {
                    continue;
                }
                let d = Rational::new(n.into(), 6.into());
                let p = TruncatedCharacter { ch0: p0.clone(), ch1: c1.clone(), ch2: d };
                let q = target.sub(&p);
                if !window_ok(&p, &q, &delta_e) {
                    continue;
                }
                let additive =
                    naive_delta(&p.ch0, &p.ch1, &p.ch2) + naive_delta(&q.ch0, &q.ch1, &q.ch2);
                if additive > delta_e {
                    continue;
                }
                if !rank_slope_exists(target, &p, &q) {
                    continue;
                }
                if !alpha_sq_positive(target, &p, beta0) {
                    continue;
                }
                if li && !(li_ok(&p.ch0, &p.ch1, &p.ch2) && li_ok(&q.ch0, &q.ch1, &q.ch2)) {
                    continue;
                }
                out.insert(canonical_pair(p, q));
            }
        }
    }
    out
}

fn naive_beta_minus(v: &TruncatedCharacter) -> Option<QuadraticValue> {
    let d = naive_delta(&v.ch0, &v.ch1, &v.ch2);
    if d.is_negative() {
        return None;
    }
    let r = Rational::from_integer(v.ch0.clone());
    let mu = &v.ch1 / &r;
    let denom = rat(3) * &r;
    Some(QuadraticValue::new(mu, rat(-1), d / (&denom * &denom)).unwrap())
}

pub fn naive_region_left(
    target: &TruncatedCharacter,
    rank_max: i64,
    li: bool,
) -> BTreeSet<Pair> {
    let delta_e = naive_delta(&target.ch0, &target.ch1, &target.ch2);
    let mu_e = &target.ch1 / Rational::from_integer(target.ch0.clone());
    let beta_minus_e = naive_beta_minus(target).expect("target discriminant nonnegative");
    let mut out = BTreeSet::new();
    for r_p in 1..=rank_max {
        for c1 in -(3 * rank_max + 9)..=(3 * rank_max + 9) {
            let c1_rat = rat(c1);
            let p_ch1_line = beta_minus_e.scale(&rat(-r_p)).add_rational(&c1_rat);
            let q_ch1_line = beta_minus_e
                .scale(&-Rational::from_integer(&target.ch0 - BigInt::from(r_p)))
                .add_rational(&(&target.ch1 - &c1_rat));
            if p_ch1_line.sign() <= 0 || q_ch1_line.sign() <= 0 {
                continue;
            }
            if &c1_rat / rat(r_p) > mu_e {
                continue;
            }
            for n in -SIX_CH2_RANGE..=SIX_CH2_RANGE {
                if (n - c1).rem_euclid(2) != 0 {
                    continue;
                }
                let d = Rational::new(n.into(), 6.into());
                let p =
                    TruncatedCharacter { ch0: BigInt::from(r_p), ch1: c1_rat.clone(), ch2: d };
                let q = target.sub(&p);
                if !window_ok(&p, &q, &delta_e) {
                    continue;
                }
                let additive =
                    naive_delta(&p.ch0, &p.ch1, &p.ch2) + naive_delta(&q.ch0, &q.ch1, &q.ch2);
                if additive > delta_e {
                    continue;
                }
                // Chain conditions on each positive-rank piece of slope
                // at most the target's.
                let mut chain_ok = true;
                let mut any_qualifies = false;
                for side in [&p, &q] {
                    if !side.ch0.is_positive() {
                        continue;
                    }
                    let mu_s = &side.ch1 / Rational::from_integer(side.ch0.clone());
                    if mu_s > mu_e {
                        continue;
                    }
                    any_qualifies = true;
                    match naive_beta_minus(side) {
                        Some(b) if b > beta_minus_e && mu_s < mu_e => {}
                        _ => chain_ok = false,
                    }
                }
                if !any_qualifies || !chain_ok {
                    continue;
                }
                // Wall geometry: a genuine semicircle strictly left of
                // the vertical wall, from the completed-square form of
                // the slope-equality equation.
                let r1 = Rational::from_integer(target.ch0.clone());
                let r2 = Rational::from_integer(p.ch0.clone());
                let a = &r1 * &p.ch1 - &r2 * &target.ch1;
                let b = &r1 * &p.ch2 - &r2 * &target.ch2;
                let c = &target.ch1 * &p.ch2 - &p.ch1 * &target.ch2;
                if a.is_zero() {
                    continue;
                }
                let center = &b / &a;
                let radius_sq = &center * &center - rat(2) * &c / &a;
                if !radius_sq.is_positive() || center >= mu_e {
                    continue;
                }
                if li && !(li_ok(&p.ch0, &p.ch1, &p.ch2) && li_ok(&q.ch0, &q.ch1, &q.ch2)) {
                    continue;
                }
                out.insert(canonical_pair(p, q));
            }
        }
    }
    out
}

pub fn check_vertical_scans_match_oracle() {
    let cases: [(&str, Rational); 6] = [
        ("5,-2,-1/3", rat(-1)),
        ("5,-2,-2/3", rat(-1)),
        ("-5,2,1/3", rat(0)),
        ("0,1,5/6", ratio(5, 6)),
        ("0,1,1/6", ratio(1, 6)),
        ("3,-1,-1/2", rat(-1)),
    ];
    let bounds = ScanBounds::new(4).unwrap();
    for (target, beta0) in cases {
        let target = tr(target);
        for li in [true, false] {
            let filters = if li { FilterSet::default() } else { FilterSet::without_li() };
            let report = scan_vertical(&target, &beta0, &bounds, &filters).unwrap();
            let expected = naive_vertical(&target, &beta0, 4, li);
            assert_eq!(
                report.survivor_pairs(),
                expected,
                "target {target}, beta0 {beta0}, li {li}"
            );
        }
    }
}

pub fn check_region_scans_match_oracle() {
    let bounds = ScanBounds::new(4).unwrap();
    for target in ["4,-1,-5/6", "1,0,-1/3", "3,-1,-1/2", "2,-1,1/6", "5,-2,-2/3"] {
        let target = tr(target);
        for li in [true, false] {
            let filters = if li { FilterSet::default() } else { FilterSet::without_li() };
            let report = scan_region_left(&target, &bounds, &filters).unwrap();
            let expected = naive_region_left(&target, 4, li);
            assert_eq!(report.survivor_pairs(), expected, "target {target}, li {li}");
        }
    }
}
