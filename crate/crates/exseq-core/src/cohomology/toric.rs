//! Toric bundles `X(ℓ,V;c)`: pushforward splitting plus Bott on `P^ℓ`.

use super::{bott_projective, CohomologyVector, ImmPiece, MaculateRegion};
use crate::variety::{LineBundle, ToricSpec};

/// The four maculate cones; degrees `ℓ` and `V` may coincide.
pub(super) fn regions(t: &ToricSpec) -> [MaculateRegion; 4] {
    let (l, v) = (t.ell() as i64, t.v() as i64);
    let (a, b) = (t.alpha(), t.beta());
    [
        MaculateRegion::new(0, (0, 0), [(1, 0), (-a, 1)]),
        MaculateRegion::new(l as usize, (-l - 1, 0), [(-1, 0), (0, 1)]),
        MaculateRegion::new(v as usize, (b, -v - 1), [(1, 0), (0, -1)]),
        MaculateRegion::new((l + v) as usize, (b - l - 1, -v - 1), [(-1, 0), (a, -1)]),
    ]
}

pub(super) fn degree_mask(t: &ToricSpec, l: LineBundle) -> u64 {
    regions(t).iter().filter(|r| r.contains(l)).fold(0, |m, r| m | 1 << r.degree)
}

pub(super) fn h_dims(t: &ToricSpec, l: LineBundle) -> CohomologyVector {
    let v = t.v() as i64;
    if l.j >= 0 {
        pushforward(t, l)
    } else if l.j >= -v {
        CohomologyVector::zero(t.ell() + t.v())
    } else {
        let k = LineBundle::new(t.beta() - t.ell() as i64 - 1, -v - 1);
        pushforward(t, k - l).reversed()
    }
}

/// `RΓ(P^ℓ, O(i) ⊗ Sym^j E^∨)` for `j ≥ 0`, summed over the splitting.
fn pushforward(t: &ToricSpec, l: LineBundle) -> CohomologyVector {
    debug_assert!(l.j >= 0);
    let ell = t.ell();
    let mut dims = vec![0u64; (ell + t.v()) as usize + 1];
    for (s, count) in multiset_sum_counts(&t.splitting_degrees(), l.j as usize).into_iter().enumerate() {
        if count == 0 {
            continue;
        }
        let (h0, hl) = bott_projective(ell, l.i + s as i64);
        dims[0] += count * h0;
        dims[ell as usize] += count * hl;
    }
    CohomologyVector::from_dims(dims)
}

/// `counts[s]` = number of size-`size` multisets of `degrees` (by index)
/// whose entries sum to `s`.
pub(crate) fn multiset_sum_counts(degrees: &[i64], size: usize) -> Vec<u64> {
    let max_deg = degrees.iter().copied().max().unwrap_or(0).max(0) as usize;
    let max_sum = max_deg * size;
    let mut dp = vec![vec![0u64; max_sum + 1]; size + 1];
    dp[0][0] = 1;
    for &d in degrees {
        let d = d as usize;
        // Ascending size lets each degree be reused: unbounded multiplicity.
        for n in 1..=size {
            for s in d..=max_sum {
                dp[n][s] += dp[n - 1][s - d];
            }
        }
    }
    dp.swap_remove(size)
}

pub(super) fn is_immaculate(t: &ToricSpec, l: LineBundle) -> bool {
    let (ell, v) = (t.ell() as i64, t.v() as i64);
    let (a, b) = (t.alpha(), t.beta());
    if l.j >= 0 {
        -ell <= l.i && l.i < -a * l.j
    } else if l.j >= -v {
        true
    } else {
        let m = -v - 1 - l.j;
        b - ell + a * m <= l.i && l.i < b
    }
}

pub(super) fn immaculate_pieces(t: &ToricSpec) -> Vec<ImmPiece> {
    let (ell, v) = (t.ell() as i64, t.v() as i64);
    let (a, b) = (t.alpha(), t.beta());
    let mut pieces = vec![ImmPiece::Horizontal { lo: -v, hi: -1 }];
    if a == 0 {
        pieces.push(ImmPiece::Vertical { lo: -ell, hi: -1 });
        return pieces;
    }
    // Both triangles are empty once αm exceeds ℓ − 1.
    for m in 0..=(ell - 1) / a {
        pieces.extend((-ell..=-a * m - 1).map(|i| ImmPiece::Point(LineBundle::new(i, m))));
        pieces.extend(
            (b - ell + a * m..=b - 1).map(|i| ImmPiece::Point(LineBundle::new(i, -v - 1 - m))),
        );
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts_match_stars_and_bars() {
        // All degrees zero: C(size + V, V) multisets of sum 0.
        assert_eq!(multiset_sum_counts(&[0, 0, 0], 4), vec![15]);
        // Degrees {0, 2} for Hirzebruch F₂: one multiset per sum 0, 2, …, 2j.
        assert_eq!(multiset_sum_counts(&[0, 2], 2), vec![1, 0, 1, 0, 1]);
        assert_eq!(multiset_sum_counts(&[0, 1, 1], 2), vec![1, 2, 3]);
        assert_eq!(multiset_sum_counts(&[0, 1], 0), vec![1]);
    }

    #[test]
    fn euler_characteristic_is_polynomial_sum() {
        // χ(O(i) ⊗ Sym^j E^∨) is Σ_multisets C(i + s + ℓ, ℓ) with polynomial binomials.
        let t = ToricSpec::new(2, 2, &[-1, -2]).unwrap();
        let spec = crate::variety::VarietySpec::Toric(t.clone());
        for i in -9..=9 {
            for j in 0..=6 {
                let counts = multiset_sum_counts(&t.splitting_degrees(), j as usize);
                let chi: i128 = counts
                    .iter()
                    .enumerate()
                    .map(|(s, &c)| c as i128 * super::super::poly_binomial(i + s as i64 + 2, 2))
                    .sum();
                let h = super::super::h_dims(&spec, LineBundle::new(i, j));
                assert_eq!(h.euler_characteristic(), chi, "({i},{j})");
            }
        }
    }
}
