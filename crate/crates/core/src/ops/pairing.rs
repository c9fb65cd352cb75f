use num_traits::{One, Zero};

use crate::Nat;

/// The shifted Cantor pairing `p(x,y) = (x+y)(x+y+1)/2 + y + 1`.
///
/// A bijection from ℕ×ℕ onto ℕ∖{0}; for fixed `x` it is increasing in `y`
/// and for fixed `y` increasing in `x`. `p(x,y) > x` everywhere.
pub fn pair(x: &Nat, y: &Nat) -> Nat {
    let s = x + y;
    let tri = (&s * (&s + 1u32)) >> 1u32;
    tri + y + 1u32
}

/// Inverse of [`pair`]. `None` for 0, which is outside the range of `p`.
pub fn unpair(z: &Nat) -> Option<(Nat, Nat)> {
    if z.is_zero() {
        return None;
    }
    let w: Nat = z - 1u32;
    // largest t with t(t+1)/2 <= w
    let mut t: Nat = ((&w << 3u32) + 1u32).sqrt();
    t = (t - 1u32) >> 1u32;
    let tri = |t: &Nat| -> Nat { (t * (t + Nat::one())) >> 1u32 };
    while tri(&t) > w {
        t -= 1u32;
    }
    while tri(&(&t + 1u32)) <= w {
        t += 1u32;
    }
    let y = &w - tri(&t);
    let x = &t - &y;
    Some((x, y))
}

/// `p_Δ(x,y) = p(x,y)` when `x > y`, else 0.
pub fn pair_delta(x: &Nat, y: &Nat) -> Nat {
    if x > y {
        pair(x, y)
    } else {
        Nat::zero()
    }
}

/// `p_∇(x,y) = p(x,y)` when `x < y`, else 0.
pub fn pair_nabla(x: &Nat, y: &Nat) -> Nat {
    if x < y {
        pair(x, y)
    } else {
        Nat::zero()
    }
}

/// `p(x,x) = 2x² + 2x + 1`, the largest value of `p(x,·)` on `y ≤ x`.
pub fn pair_diag(x: &Nat) -> Nat {
    pair(x, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(pair(&nat(0), &nat(0)), nat(1));
        assert_eq!(pair(&nat(1), &nat(0)), nat(2));
        assert_eq!(pair(&nat(0), &nat(1)), nat(3));
        assert_eq!(pair(&nat(2), &nat(1)), nat(8));
        assert_eq!(pair(&nat(1), &nat(1)), nat(5));
    }

    #[test]
    fn unpair_examples() {
        assert_eq!(unpair(&nat(1)), Some((nat(0), nat(0))));
        assert_eq!(unpair(&nat(0)), None);
        assert_eq!(unpair(&nat(8)), Some((nat(2), nat(1))));
    }

    #[test]
    fn gated_pairs() {
        assert_eq!(pair_delta(&nat(2), &nat(1)), nat(8));
        assert_eq!(pair_delta(&nat(1), &nat(2)), nat(0));
        assert_eq!(pair_delta(&nat(1), &nat(1)), nat(0));
        assert_eq!(pair_nabla(&nat(1), &nat(2)), pair(&nat(1), &nat(2)));
        assert_eq!(pair_nabla(&nat(2), &nat(1)), nat(0));
    }

    #[test]
    fn diag_closed_form() {
        for x in 0..50u64 {
            assert_eq!(pair_diag(&nat(x)), nat(2 * x * x + 2 * x + 1));
        }
    }

    proptest! {
        #[test]
        fn roundtrip_big(x in any::<u128>(), y in any::<u128>()) {
            let (x, y) = (Nat::from(x), Nat::from(y));
            prop_assert_eq!(unpair(&pair(&x, &y)), Some((x, y)));
        }

        #[test]
        fn exceeds_first_coordinate(x in 0u64..1_000_000, y in 0u64..1_000_000) {
            prop_assert!(pair(&nat(x), &nat(y)) > nat(x));
        }
    }
}
