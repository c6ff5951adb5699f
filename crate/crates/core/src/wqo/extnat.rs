use std::fmt;
use std::ops::Add;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Result};

/// A natural number or ω.
///
/// The derived order puts every `Fin(n)` below `Omega`, which is also the
/// canonical order used when sorting ideal generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Omega,
}

pub use ExtNat::{Fin, Omega};

impl ExtNat {
    pub const ZERO: ExtNat = Fin(0);

    pub fn is_omega(self) -> bool {
        self == Omega
    }

    pub fn is_zero(self) -> bool {
        self == Fin(0)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Fin(n) => Some(n),
            Omega => None,
        }
    }

    /// Replaces ω by `n`.
    pub fn instantiate(self, n: u64) -> u64 {
        self.finite().unwrap_or(n)
    }

    /// Truncated subtraction of a finite amount; ω stays ω.
    pub fn saturating_sub(self, n: u64) -> ExtNat {
        match self {
            Fin(m) => Fin(m.saturating_sub(n)),
            Omega => Omega,
        }
    }

    /// Whether the finite value `n` fits under `self`.
    pub fn admits(self, n: u64) -> bool {
        match self {
            Fin(m) => n <= m,
            Omega => true,
        }
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        Fin(0)
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        Fin(n)
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Fin(a), Fin(b)) => Fin(a.saturating_add(b)),
            _ => Omega,
        }
    }
}

impl std::iter::Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(Fin(0), |acc, x| acc + x)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(n) => write!(f, "{n}"),
            Omega => write!(f, "ω"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Fin(n) => serializer.serialize_u64(*n),
            Omega => serializer.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtNatVisitor;

        impl Visitor<'_> for ExtNatVisitor {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative integer or \"omega\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtNat, E> {
                Ok(Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtNat, E> {
                u64::try_from(v)
                    .map(Fin)
                    .map_err(|_| E::custom(format!("negative value {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtNat, E> {
                match v {
                    "omega" | "ω" => Ok(Omega),
                    _ => Err(E::custom(format!("expected \"omega\", found {v:?}"))),
                }
            }
        }

        deserializer.deserialize_any(ExtNatVisitor)
    }
}

/// A vector of extended naturals over a fixed, positional index set.
///
/// `↓x` is the set of integer vectors below `x`; every ideal of `ℕ^X`
/// arises this way.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExtVec(pub Vec<ExtNat>);

impl ExtVec {
    pub fn new(entries: Vec<ExtNat>) -> Self {
        ExtVec(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        ExtVec(vec![Fin(0); dim])
    }

    pub fn omegas(dim: usize) -> Self {
        ExtVec(vec![Omega; dim])
    }

    pub fn from_finite(entries: &[u64]) -> Self {
        ExtVec(entries.iter().map(|&n| Fin(n)).collect())
    }

    /// The vector with `value` at `index` and 0 elsewhere.
    pub fn unit(dim: usize, index: usize, value: ExtNat) -> Self {
        let mut v = ExtVec::zeros(dim);
        v.0[index] = value;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[ExtNat] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| !x.is_omega())
    }

    /// Indices carrying ω.
    pub fn omega_support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.0[i].is_omega()).collect()
    }

    /// The finite part, with every ω replaced by 0.
    pub fn finite_part(&self) -> Vec<u64> {
        self.0.iter().map(|x| x.finite().unwrap_or(0)).collect()
    }

    /// Replaces every ω by `n`.
    pub fn instantiate(&self, n: u64) -> Vec<u64> {
        self.0.iter().map(|x| x.instantiate(n)).collect()
    }

    /// Componentwise order; errors on mismatched index sets.
    pub fn leq(&self, other: &ExtVec) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &ExtVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Whether the finite vector `v` lies in `↓self`.
    pub fn covers(&self, v: &[u64]) -> bool {
        v.len() == self.dim() && self.0.iter().zip(v).all(|(a, &n)| a.admits(n))
    }

    /// Componentwise minimum: the generator of `↓self ∩ ↓other`.
    pub fn meet(&self, other: &ExtVec) -> ExtVec {
        ExtVec(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl From<Vec<ExtNat>> for ExtVec {
    fn from(v: Vec<ExtNat>) -> Self {
        ExtVec(v)
    }
}

impl fmt::Display for ExtVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand used throughout the tests: `ev(&[Fin(2), Omega])`.
pub fn ev(entries: &[ExtNat]) -> ExtVec {
    ExtVec(entries.to_vec())
}

/// Parses `"2,w"`-style vectors where `w` stands for ω.
#[cfg(test)]
pub(crate) fn parse_vec(s: &str) -> ExtVec {
    ExtVec(
        s.split(',')
            .map(|t| match t.trim() {
                "w" => Omega,
                n => Fin(n.parse().unwrap()),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_omega_on_top() {
        assert!(Fin(0) < Fin(7));
        assert!(Fin(u64::MAX) < Omega);
        assert!(Omega <= Omega);
    }

    #[test]
    fn addition_absorbs_omega() {
        assert_eq!(Fin(2) + Fin(3), Fin(5));
        assert_eq!(Fin(2) + Omega, Omega);
        assert_eq!(Omega + Fin(9), Omega);
        assert_eq!([Fin(1), Fin(2), Omega].into_iter().sum::<ExtNat>(), Omega);
    }

    #[test]
    fn vec_leq_examples() {
        assert!(parse_vec("2,w").leq(&parse_vec("2,w")).unwrap());
        assert!(!parse_vec("3,0").leq(&parse_vec("2,w")).unwrap());
        assert!(parse_vec("1,5").leq(&parse_vec("w,5")).unwrap());
    }

    #[test]
    fn vec_leq_rejects_mismatched_index_sets() {
        let err = parse_vec("1,2").leq(&parse_vec("1,2,3")).unwrap_err();
        assert_eq!(
            err,
            crate::Error::Dimension {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn serde_uses_omega_string() {
        let v = parse_vec("3,w");
        let json = serde_json::to_string(&v.0).unwrap();
        assert_eq!(json, r#"[3,"omega"]"#);
        let back: Vec<ExtNat> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v.0);
        assert!(serde_json::from_str::<ExtNat>("\"infinity\"").is_err());
        assert!(serde_json::from_str::<ExtNat>("-1").is_err());
    }
}
