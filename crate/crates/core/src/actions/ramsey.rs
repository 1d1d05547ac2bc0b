use serde::Serialize;

/// Diagonal two-colour Ramsey number `R(k, k)` when known exactly (`k ≤ 4`),
/// otherwise the Erdős–Szekeres bound `C(2k-2, k-1)`. Second component
/// tells which.
pub fn ramsey_number(k: u32) -> (u64, bool) {
    match k {
        0 | 1 => (1, true),
        2 => (2, true),
        3 => (6, true),
        4 => (18, true),
        _ => (binomial(2 * k as u64 - 2, k as u64 - 1), false),
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamseyBound {
    pub r: u32,
    pub dim: u32,
    /// `max(R, dim)`: below the dimension the bound says nothing, since
    /// `R + 2` pairwise transverse hyperplanes could exist.
    pub r_effective: u32,
    /// `Ram(r_effective + 2)` or an upper bound for it.
    pub l: u64,
    pub exact: bool,
    /// `dim·(R+1) + 1`: the smaller threshold that pigeonhole on
    /// `d∞ ≥ ⌈d₁/dim⌉` already gives.
    pub pigeonhole: u64,
}

/// Distance threshold `L` past which any two vertices are separated by
/// `R + 2` pairwise disjoint hyperplanes.
pub fn ramsey_bound(r: u32, dim: u32) -> RamseyBound {
    let r_effective = r.max(dim);
    let (l, exact) = ramsey_number(r_effective + 2);
    RamseyBound {
        r,
        dim,
        r_effective,
        l,
        exact,
        pigeonhole: dim as u64 * (r as u64 + 1) + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(ramsey_bound(1, 1).l, 6);
        assert_eq!(ramsey_bound(2, 1).l, 18);
        assert!(ramsey_bound(2, 2).exact);
        assert_eq!(binomial(6, 3), 20);
        assert!(ramsey_number(4).0 <= binomial(6, 3));
        let b = ramsey_bound(3, 2);
        assert_eq!((b.r_effective, b.l, b.exact), (3, 70, false));
        // dimension dominates small R
        assert_eq!(ramsey_bound(1, 3).r_effective, 3);
    }

    #[test]
    fn ram3_by_brute_force() {
        assert!(crate::oracle::every_colouring_has_mono_triangle(6));
        assert!(!crate::oracle::every_colouring_has_mono_triangle(5));
    }
}
