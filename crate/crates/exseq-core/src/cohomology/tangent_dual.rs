//! `X_ℓ^∨ = P(T(2))`: reduced to `X_ℓ` by relative and Serre duality.

use super::{cotangent, CohomologyVector, ImmPiece};
use crate::variety::LineBundle;

pub(super) fn h_dims(ell: u32, l: LineBundle) -> CohomologyVector {
    let n = ell as i64;
    let dim = 2 * ell - 1;
    if l.j >= 0 {
        // hᵏ(X^∨, (i, j)) = h^{ℓ−k}(X_ℓ, (−(ℓ+i+j+1), j)) for j ≥ 0.
        let mirror = cotangent::h_dims(ell, LineBundle::new(-(n + l.i + l.j + 1), l.j));
        let mut dims = vec![0u64; dim as usize + 1];
        for k in mirror.nonzero_degrees() {
            debug_assert!(k <= ell as usize, "pushforward cohomology above degree ℓ");
            dims[ell as usize - k] = mirror.get(k);
        }
        CohomologyVector::from_dims(dims)
    } else if l.j > -n {
        CohomologyVector::zero(dim)
    } else {
        h_dims(ell, LineBundle::new(-2, -n) - l).reversed()
    }
}

pub(super) fn is_immaculate(ell: u32, l: LineBundle) -> bool {
    let n = ell as i64;
    (-n + 1..=-1).contains(&l.j) || l.i == -1 || (-n..=-2).contains(&(l.i + l.j))
}

pub(super) fn immaculate_pieces(ell: u32) -> Vec<ImmPiece> {
    let n = ell as i64;
    vec![
        ImmPiece::Horizontal { lo: -n + 1, hi: -1 },
        ImmPiece::Vertical { lo: -1, hi: -1 },
        ImmPiece::AntiDiagonal { lo: -n, hi: -2 },
    ]
}
