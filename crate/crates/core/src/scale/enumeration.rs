//! Enumerations of countable index sets.
//!
//! Every enumeration here is a bijection of `ℕ⁺` with itself: finite tables
//! permute an initial segment `1..=K` and act as the identity beyond it.

use serde::Serialize;

use crate::error::Error;

/// Largest special point of the skip enumeration that fits in a `u64`:
/// `⌈e^{i^i}⌉` for `i = 0, 1, 2, 3`.
pub(crate) const SKIP_POINTS: [u64; 4] = [1, 3, 55, 532_048_240_602];

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Identity,
    Permutation { forward: Vec<u64>, inverse: Vec<u64> },
    /// `k ↦ k + 1` except at the points `s_i = ⌈e^{i^i}⌉`, which map to
    /// `s_{i-1} + 1` (and `1 ↦ 1`).
    Skip,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    name: String,
    kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationKind {
    Identity,
    Permutation,
    Skip,
}

impl Enumeration {
    pub fn identity() -> Self {
        Enumeration { name: "id".into(), kind: Kind::Identity }
    }

    /// The enumeration that lags one step behind the identity everywhere
    /// except at the sparse points `⌈e^{i^i}⌉`, where it jumps far back.
    pub fn skip() -> Self {
        Enumeration { name: "skip".into(), kind: Kind::Skip }
    }

    /// A permutation of `1..=K` given by its forward images
    /// (`forward[x - 1] = γ(x)`).
    pub fn from_forward(name: impl Into<String>, forward: Vec<u64>) -> Result<Self, Error> {
        let k = forward.len() as u64;
        let mut inverse = vec![0u64; forward.len()];
        for (i, &v) in forward.iter().enumerate() {
            if v == 0 || v > k {
                return Err(Error::NotBijective(format!("value {v} outside 1..={k}")));
            }
            let slot = &mut inverse[(v - 1) as usize];
            if *slot != 0 {
                return Err(Error::NotBijective(format!("value {v} taken twice")));
            }
            *slot = i as u64 + 1;
        }
        Ok(Enumeration { name: name.into(), kind: Kind::Permutation { forward, inverse } })
    }

    /// Builds the enumeration listing `order[0], order[1], ...` as `1, 2, ...`.
    pub fn from_order(name: impl Into<String>, order: &[u64]) -> Result<Self, Error> {
        let mut forward = vec![0u64; order.len()];
        for (j, &x) in order.iter().enumerate() {
            if x == 0 || x as usize > order.len() || forward[(x - 1) as usize] != 0 {
                return Err(Error::NotBijective(format!("order entry {x} invalid")));
            }
            forward[(x - 1) as usize] = j as u64 + 1;
        }
        Self::from_forward(name, forward)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn kind(&self) -> EnumerationKind {
        match self.kind {
            Kind::Identity => EnumerationKind::Identity,
            Kind::Permutation { .. } => EnumerationKind::Permutation,
            Kind::Skip => EnumerationKind::Skip,
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.kind {
            Kind::Identity => true,
            Kind::Permutation { forward, .. } => {
                forward.iter().enumerate().all(|(i, &v)| v == i as u64 + 1)
            }
            Kind::Skip => false,
        }
    }

    /// Length of the stored table, if any; beyond it the map is the identity.
    pub fn table_len(&self) -> Option<u64> {
        match &self.kind {
            Kind::Permutation { forward, .. } => Some(forward.len() as u64),
            _ => None,
        }
    }

    pub fn forward(&self, x: u64) -> Result<u64, Error> {
        if x == 0 {
            return Err(Error::OutOfDomain(format!("index 0 for enumeration {}", self.name)));
        }
        Ok(match &self.kind {
            Kind::Identity => x,
            Kind::Permutation { forward, .. } => {
                forward.get((x - 1) as usize).copied().unwrap_or(x)
            }
            Kind::Skip => {
                if x == 1 {
                    1
                } else if let Some(i) = SKIP_POINTS.iter().position(|&s| s == x) {
                    SKIP_POINTS[i - 1] + 1
                } else {
                    x.checked_add(1).ok_or(Error::Overflow("skip enumeration".into()))?
                }
            }
        })
    }

    pub fn inverse(&self, k: u64) -> Result<u64, Error> {
        if k == 0 {
            return Err(Error::OutOfDomain(format!("value 0 for enumeration {}", self.name)));
        }
        Ok(match &self.kind {
            Kind::Identity => k,
            Kind::Permutation { inverse, .. } => {
                inverse.get((k - 1) as usize).copied().unwrap_or(k)
            }
            Kind::Skip => {
                if k == 1 {
                    1
                } else if let Some(i) = SKIP_POINTS[..3].iter().position(|&s| s + 1 == k) {
                    SKIP_POINTS[i + 1]
                } else if k == SKIP_POINTS[3] + 1 {
                    // preimage is ⌈e^{256}⌉, beyond u64
                    return Err(Error::Overflow("skip enumeration preimage".into()));
                } else {
                    k - 1
                }
            }
        })
    }

    /// Checks `inverse ∘ forward = id` and `forward ∘ inverse = id` on `1..=k`.
    pub fn verify_prefix(&self, k: u64) -> Result<(), Error> {
        for x in 1..=k {
            let y = self.forward(x)?;
            if self.inverse(y)? != x {
                return Err(Error::NotBijective(format!("{}: inverse(forward({x})) != {x}", self.name)));
            }
            if self.forward(self.inverse(x)?)? != x {
                return Err(Error::NotBijective(format!("{}: forward(inverse({x})) != {x}", self.name)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skip_points_are_ceilings_of_tower() {
        assert_eq!(SKIP_POINTS[1], 1f64.exp().ceil() as u64);
        assert_eq!(SKIP_POINTS[2], 4f64.exp().ceil() as u64);
        assert_eq!(SKIP_POINTS[3], 27f64.exp().ceil() as u64);
    }

    #[test]
    fn skip_enumeration_values() {
        let g = Enumeration::skip();
        let got: Vec<u64> = (1..=5).map(|x| g.forward(x).unwrap()).collect();
        assert_eq!(got, vec![1, 3, 2, 5, 6]);
        assert_eq!(g.forward(55).unwrap(), 4);
        assert_eq!(g.forward(56).unwrap(), 57);
        assert_eq!(g.forward(SKIP_POINTS[3]).unwrap(), 56);
        assert_eq!(g.forward(SKIP_POINTS[3] + 1).unwrap(), SKIP_POINTS[3] + 2);
        g.verify_prefix(2000).unwrap();
    }

    #[test]
    fn permutation_round_trip() {
        let g = Enumeration::from_forward("p", vec![3, 1, 2]).unwrap();
        assert_eq!(g.forward(1).unwrap(), 3);
        assert_eq!(g.inverse(3).unwrap(), 1);
        assert_eq!(g.forward(10).unwrap(), 10);
        g.verify_prefix(20).unwrap();
        assert!(Enumeration::from_forward("bad", vec![1, 1]).is_err());
        assert!(Enumeration::from_forward("bad", vec![1, 4]).is_err());
    }

    #[test]
    fn order_builds_inverse_listing() {
        let g = Enumeration::from_order("o", &[2, 3, 1]).unwrap();
        assert_eq!(g.forward(2).unwrap(), 1);
        assert_eq!(g.forward(1).unwrap(), 3);
    }
}
