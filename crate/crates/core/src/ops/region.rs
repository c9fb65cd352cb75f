use serde::{Deserialize, Serialize};

use super::serde_nat;
use crate::Nat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// `x > y`
    Delta,
    /// `x < y`
    Nabla,
}

/// `Δ_{S1,S2}` or `∇_{S1,S2}` for finite, strictly increasing `S1`, `S2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    #[serde(with = "serde_nat::seq")]
    pub s1: Vec<Nat>,
    #[serde(with = "serde_nat::seq")]
    pub s2: Vec<Nat>,
}

impl Region {
    /// Sorts and deduplicates the witness sets.
    pub fn new(kind: RegionKind, mut s1: Vec<Nat>, mut s2: Vec<Nat>) -> Self {
        s1.sort();
        s1.dedup();
        s2.sort();
        s2.dedup();
        Region { kind, s1, s2 }
    }

    pub fn delta(s1: Vec<Nat>, s2: Vec<Nat>) -> Self {
        Region::new(RegionKind::Delta, s1, s2)
    }

    pub fn nabla(s1: Vec<Nat>, s2: Vec<Nat>) -> Self {
        Region::new(RegionKind::Nabla, s1, s2)
    }

    pub fn holds(kind: RegionKind, x: &Nat, y: &Nat) -> bool {
        match kind {
            RegionKind::Delta => x > y,
            RegionKind::Nabla => x < y,
        }
    }

    pub fn contains(&self, x: &Nat, y: &Nat) -> bool {
        Region::holds(self.kind, x, y)
            && self.s1.binary_search(x).is_ok()
            && self.s2.binary_search(y).is_ok()
    }

    /// Points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (&Nat, &Nat)> + '_ {
        self.s1.iter().flat_map(move |x| {
            self.s2
                .iter()
                .filter(move |y| Region::holds(self.kind, x, y))
                .map(move |y| (x, y))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    #[test]
    fn membership_matches_definition() {
        let r = Region::delta(vec![nat(5), nat(2)], vec![nat(0), nat(3), nat(3)]);
        assert_eq!(r.s2, vec![nat(0), nat(3)]);
        assert!(r.contains(&nat(5), &nat(3)));
        assert!(!r.contains(&nat(2), &nat(3)));
        assert!(!r.contains(&nat(4), &nat(0)));
        let pts: Vec<_> = r.points().map(|(x, y)| (x.clone(), y.clone())).collect();
        assert_eq!(pts, vec![(nat(2), nat(0)), (nat(5), nat(0)), (nat(5), nat(3))]);
        let n = Region::nabla(vec![nat(1)], vec![nat(1), nat(4)]);
        assert_eq!(n.points().count(), 1);
    }
}
