//! The rank-2 numerical lattice of the Kuznetsov component.
//!
//! The lattice is `Z[I] ⊕ Z[S(I)]` with basis characters
//! `ch(I) = (1, 0, -1/3, 0)` and `ch(S(I)) = (2, -1, -1/6, 1/6)`.
//! Numeric membership in the component is the vanishing of the Euler
//! pairings against `ch(O_X)` and `ch(O_X(H))`. The Euler pairing matrix
//! on the basis is `[[-1, -1], [0, -1]]`, and the numerical Serre action
//! is the unique integer matrix `M` with `χ(x, y) = χ(y, Mx)`, namely
//! `M = [[0, -1], [1, 1]]`, whose cube is minus the identity.

use crate::exactnum::{rat, ratio, Rational};
use crate::lattice::{chi2, ChernCharacter, LatticeError};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KuError {
    #[error("{v} is not in the rank-2 lattice: {reason}")]
    NotInLattice { v: ChernCharacter, reason: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The class `a[I] + b[S(I)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KuClass {
    pub a: BigInt,
    pub b: BigInt,
}

impl KuClass {
    pub fn new(a: i64, b: i64) -> Self {
        KuClass { a: BigInt::from(a), b: BigInt::from(b) }
    }

    /// Node label in the form `a[I]+b[S(I)]`.
    pub fn label(&self) -> String {
        let b = if self.b >= BigInt::zero() {
            format!("+{}", self.b)
        } else {
            self.b.to_string()
        };
        format!("{}[I]{}[S(I)]", self.a, b)
    }
}

impl fmt::Display for KuClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl FromStr for KuClass {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        let err = |reason: &str| LatticeError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if parts.len() != 2 {
            return Err(err("expected two comma-separated integers"));
        }
        let a = BigInt::from_str(parts[0]).map_err(|_| err("bad integer"))?;
        let b = BigInt::from_str(parts[1]).map_err(|_| err("bad integer"))?;
        Ok(KuClass { a, b })
    }
}

impl Serialize for KuClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KuClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `ch(I)`, the ideal-sheaf class of a line.
pub fn ideal_line_character() -> ChernCharacter {
    ChernCharacter::new(1, rat(0), ratio(-1, 3), rat(0))
}

/// `ch(S(I))`, its image under the Serre functor.
pub fn serre_ideal_character() -> ChernCharacter {
    ChernCharacter::new(2, rat(-1), ratio(-1, 6), ratio(1, 6))
}

/// `a·ch(I) + b·ch(S(I))`.
pub fn to_chern(k: &KuClass) -> ChernCharacter {
    let a = Rational::from_integer(k.a.clone());
    let b = Rational::from_integer(k.b.clone());
    let i = ideal_line_character();
    let s = serre_ideal_character();
    ChernCharacter {
        ch0: &k.a * &i.ch0 + &k.b * &s.ch0,
        ch1: &a * &i.ch1 + &b * &s.ch1,
        ch2: &a * &i.ch2 + &b * &s.ch2,
        ch3: &a * &i.ch3 + &b * &s.ch3,
    }
}

/// Inverts [`to_chern`]: `b = -ch1`, `a = ch0 - 2b`, with the remaining
/// components checked for consistency.
pub fn from_chern(v: &ChernCharacter) -> Result<KuClass, KuError> {
    let not_in = |reason: String| KuError::NotInLattice { v: v.clone(), reason };
    if !v.ch1.is_integer() {
        return Err(not_in(format!("ch1 = {} is not an integer", v.ch1)));
    }
    let b = -v.ch1.to_integer();
    let a = &v.ch0 - BigInt::from(2) * &b;
    let k = KuClass { a, b };
    let back = to_chern(&k);
    if back.ch2 != v.ch2 {
        return Err(not_in(format!(
            "(a,b) = ({},{}) forces ch2 = {}, got {}",
            k.a, k.b, back.ch2, v.ch2
        )));
    }
    if back.ch3 != v.ch3 {
        return Err(not_in(format!(
            "(a,b) = ({},{}) forces ch3 = {}, got {}",
            k.a, k.b, back.ch3, v.ch3
        )));
    }
    Ok(k)
}

/// Numeric membership test via the semiorthogonal decomposition:
/// both `χ(O_X, v)` and `χ(O_X(H), v)` must vanish.
pub fn ku_numeric_membership(v: &ChernCharacter) -> bool {
    let o = ChernCharacter::structure_sheaf();
    let oh = ChernCharacter::line_bundle(1);
    chi2(&o, v).is_zero() && chi2(&oh, v).is_zero()
}

/// Euler pairing matrix `χ(basis_i, basis_j)`, computed from the pairing
/// itself rather than stored.
pub fn pairing_matrix() -> [[Rational; 2]; 2] {
    let basis = [ideal_line_character(), serre_ideal_character()];
    [
        [chi2(&basis[0], &basis[0]), chi2(&basis[0], &basis[1])],
        [chi2(&basis[1], &basis[0]), chi2(&basis[1], &basis[1])],
    ]
}

/// Numerical Serre action on column vectors `(a, b)`, in basis order
/// `([I], [S(I)])`.
pub const SERRE_MATRIX: [[i64; 2]; 2] = [[0, -1], [1, 1]];

/// Applies the Serre matrix; a shift acts as `-1` on classes.
pub fn serre_apply(k: &KuClass, shift: bool) -> KuClass {
    let m = SERRE_MATRIX;
    let a = BigInt::from(m[0][0]) * &k.a + BigInt::from(m[0][1]) * &k.b;
    let b = BigInt::from(m[1][0]) * &k.a + BigInt::from(m[1][1]) * &k.b;
    if shift {
        KuClass { a: -a, b: -b }
    } else {
        KuClass { a, b }
    }
}

/// The three-node orbit `[k, S(k), S[1](S(k))]`; one more application of
/// `S` returns to `k`.
pub fn serre_orbit(k: &KuClass) -> [KuClass; 3] {
    let first = serre_apply(k, false);
    let second = serre_apply(&first, true);
    [k.clone(), first, second]
}

/// Expected moduli dimension `1 - χ(v, v)` at a stable class.
pub fn expected_dim(v: &ChernCharacter) -> Rational {
    rat(1) - chi2(v, v)
}
