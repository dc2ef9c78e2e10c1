//! `X_ℓ = P(Ω(−1))`: a six-cone region table with the Weyl dimension formula.

use super::{poly_binomial, CohomologyVector, ImmPiece, MaculateRegion};
use crate::variety::LineBundle;

/// Region table with degrees `0, ℓ−1, ℓ, ℓ−1, ℓ, 2ℓ−1`. The cones are
/// disjoint and cover exactly the complement of the immaculate locus.
pub(super) fn regions(ell: u32) -> [MaculateRegion; 6] {
    let l = ell as i64;
    let (u, d) = (ell as usize, 2 * ell as usize - 1);
    [
        MaculateRegion::new(0, (0, 0), [(1, 0), (0, 1)]),
        MaculateRegion::new(u - 1, (-l, 1), [(0, 1), (-1, 1)]),
        MaculateRegion::new(u, (-l - 1, 0), [(-1, 1), (-1, 0)]),
        MaculateRegion::new(u - 1, (1, -l), [(1, 0), (1, -1)]),
        MaculateRegion::new(u, (0, -l - 1), [(1, -1), (0, -1)]),
        MaculateRegion::new(d, (-l, -l), [(-1, 0), (0, -1)]),
    ]
}

/// The region table exactly as printed in the source, kept for the
/// discrepancy report. It differs from [`regions`] in two degree labels for
/// `ℓ ≥ 3` and in the apex of the fourth cone.
pub fn printed_regions(ell: u32) -> [MaculateRegion; 6] {
    let l = ell as i64;
    let (u, d) = (ell as usize, 2 * ell as usize - 1);
    [
        MaculateRegion::new(0, (0, 0), [(1, 0), (0, 1)]),
        MaculateRegion::new(1, (-l, 1), [(0, 1), (-1, 1)]),
        MaculateRegion::new(u, (-l - 1, 0), [(-1, 1), (-1, 0)]),
        MaculateRegion::new(u - 1, (-l, 1), [(1, 0), (1, -1)]),
        MaculateRegion::new(2 * u - 2, (0, -l - 1), [(1, -1), (0, -1)]),
        MaculateRegion::new(d, (-l, -l), [(-1, 0), (0, -1)]),
    ]
}

/// Weyl dimension `|C(i+ℓ,ℓ)C(j+ℓ,ℓ) − C(i−1+ℓ,ℓ)C(j−1+ℓ,ℓ)|` with
/// polynomial binomials; nonzero exactly off the immaculate locus.
pub(super) fn magnitude(ell: u32, l: LineBundle) -> u64 {
    let n = ell as i64;
    let v = poly_binomial(l.i + n, ell) * poly_binomial(l.j + n, ell)
        - poly_binomial(l.i - 1 + n, ell) * poly_binomial(l.j - 1 + n, ell);
    v.unsigned_abs() as u64
}

/// The dimension formula exactly as printed:
/// `|C(i−j+ℓ,ℓ)C(j+ℓ,ℓ) − C(i−j+1+ℓ,ℓ)C(j−1+ℓ,ℓ)|`.
pub fn printed_magnitude(ell: u32, l: LineBundle) -> u64 {
    let n = ell as i64;
    let v = poly_binomial(l.i - l.j + n, ell) * poly_binomial(l.j + n, ell)
        - poly_binomial(l.i - l.j + 1 + n, ell) * poly_binomial(l.j - 1 + n, ell);
    v.unsigned_abs() as u64
}

pub(super) fn degree_mask(ell: u32, l: LineBundle) -> u64 {
    regions(ell).iter().filter(|r| r.contains(l)).fold(0, |m, r| m | 1 << r.degree)
}

pub(super) fn h_dims(ell: u32, l: LineBundle) -> CohomologyVector {
    let dim = 2 * ell - 1;
    match regions(ell).iter().find(|r| r.contains(l)) {
        Some(r) => {
            let m = magnitude(ell, l);
            debug_assert!(m > 0, "zero magnitude inside a maculate cone at {l}");
            CohomologyVector::concentrated(dim, r.degree, m)
        }
        None => CohomologyVector::zero(dim),
    }
}

pub(super) fn is_immaculate(ell: u32, l: LineBundle) -> bool {
    let n = ell as i64;
    (-n + 1..=-1).contains(&l.j) || (-n + 1..=-1).contains(&l.i) || l.i + l.j == -n
}

pub(super) fn immaculate_pieces(ell: u32) -> Vec<ImmPiece> {
    let n = ell as i64;
    vec![
        ImmPiece::Horizontal { lo: -n + 1, hi: -1 },
        ImmPiece::Vertical { lo: -n + 1, hi: -1 },
        ImmPiece::AntiDiagonal { lo: -n, hi: -n },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions_are_disjoint_and_exhaustive() {
        for ell in 2..=6 {
            for i in -15..=15 {
                for j in -15..=15 {
                    let l = LineBundle::new(i, j);
                    let hits = regions(ell).iter().filter(|r| r.contains(l)).count();
                    assert_eq!(hits, usize::from(!is_immaculate(ell, l)), "ℓ={ell} {l}");
                    assert_eq!(magnitude(ell, l) == 0, is_immaculate(ell, l), "ℓ={ell} {l}");
                }
            }
        }
    }

    #[test]
    fn printed_formula_vanishes_at_one_one() {
        assert_eq!(printed_magnitude(2, LineBundle::new(1, 1)), 0);
        assert_eq!(magnitude(2, LineBundle::new(1, 1)), 8);
    }

    #[test]
    fn sigma_symmetry() {
        for ell in 2..=4 {
            for i in -10..=10 {
                for j in -10..=10 {
                    let l = LineBundle::new(i, j);
                    assert_eq!(h_dims(ell, l), h_dims(ell, l.swapped()));
                }
            }
        }
    }
}
