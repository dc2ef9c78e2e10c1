//! Line-bundle cohomology: exact dimension vectors, maculate regions and the
//! immaculate locus for every supported family.

mod cotangent;
pub mod oracle;
mod tangent_dual;
mod toric;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::variety::{Cone, LineBundle, Sublattice, VarietySpec};

pub use cotangent::{printed_magnitude, printed_regions};

/// `h⁰, …, h^dim` of a line bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohomologyVector {
    dims: Vec<u64>,
}

impl CohomologyVector {
    pub fn zero(dim: u32) -> Self {
        CohomologyVector { dims: vec![0; dim as usize + 1] }
    }

    pub fn from_dims(dims: Vec<u64>) -> Self {
        CohomologyVector { dims }
    }

    /// A single nonzero entry `value` in degree `k`.
    pub fn concentrated(dim: u32, k: usize, value: u64) -> Self {
        let mut v = Self::zero(dim);
        v.dims[k] = value;
        v
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn get(&self, k: usize) -> u64 {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims.iter().skip(1).all(|&d| d == 0)
    }

    /// Highest degree with nonzero cohomology.
    pub fn top_degree(&self) -> Option<usize> {
        self.dims.iter().rposition(|&d| d != 0)
    }

    pub fn nonzero_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.dims.iter().enumerate().filter(|(_, &d)| d != 0).map(|(k, _)| k)
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i128 } else { -(d as i128) })
            .sum()
    }

    /// Serre-dual vector: entry `k` becomes entry `dim − k`.
    pub fn reversed(&self) -> Self {
        CohomologyVector { dims: self.dims.iter().rev().copied().collect() }
    }
}

impl fmt::Display for CohomologyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.dims)
    }
}

/// A cone on which exactly the cohomology in `degree` is nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaculateRegion {
    pub degree: usize,
    pub cone: Cone,
}

impl MaculateRegion {
    pub fn new(degree: usize, apex: (i64, i64), rays: [(i64, i64); 2]) -> Self {
        MaculateRegion {
            degree,
            cone: Cone::new(apex.into(), [rays[0].into(), rays[1].into()]),
        }
    }

    pub fn contains(&self, l: LineBundle) -> bool {
        self.cone.contains(l)
    }
}

/// One piece of the immaculate locus. Strips are closed ranges of a linear
/// form; points are isolated classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImmPiece {
    /// `lo ≤ j ≤ hi`.
    Horizontal { lo: i64, hi: i64 },
    /// `lo ≤ i ≤ hi`.
    Vertical { lo: i64, hi: i64 },
    /// `lo ≤ i + j ≤ hi`.
    AntiDiagonal { lo: i64, hi: i64 },
    Point(LineBundle),
}

impl ImmPiece {
    pub fn contains(&self, l: LineBundle) -> bool {
        match *self {
            ImmPiece::Horizontal { lo, hi } => (lo..=hi).contains(&l.j),
            ImmPiece::Vertical { lo, hi } => (lo..=hi).contains(&l.i),
            ImmPiece::AntiDiagonal { lo, hi } => (lo..=hi).contains(&(l.i + l.j)),
            ImmPiece::Point(p) => p == l,
        }
    }

    /// The linear form and value range of a strip.
    fn strip(&self) -> Option<((i64, i64), i64, i64)> {
        match *self {
            ImmPiece::Horizontal { lo, hi } => Some(((0, 1), lo, hi)),
            ImmPiece::Vertical { lo, hi } => Some(((1, 0), lo, hi)),
            ImmPiece::AntiDiagonal { lo, hi } => Some(((1, 1), lo, hi)),
            ImmPiece::Point(_) => None,
        }
    }
}

/// Zero-convention binomial: `C(n,k) = 0` for `n < k` and for `n < 0`.
pub fn binomial(n: i64, k: u32) -> u64 {
    if n < k as i64 || n < 0 {
        return 0;
    }
    let k = k.min((n - k as i64) as u32) as i64;
    (0..k).fold(1u128, |acc, t| acc * (n - t) as u128 / (t + 1) as u128) as u64
}

/// Polynomial binomial `n(n−1)…(n−k+1)/k!`, defined for every integer `n`.
pub fn poly_binomial(n: i64, k: u32) -> i128 {
    let mut num: i128 = 1;
    for t in 0..k as i64 {
        num *= (n - t) as i128;
    }
    num / (1..=k as i128).product::<i128>()
}

/// `(h⁰, h^ℓ)` of `O(d)` on `P^ℓ`; all other degrees vanish.
pub fn bott_projective(ell: u32, d: i64) -> (u64, u64) {
    let l = ell as i64;
    if d >= 0 {
        (binomial(d + l, ell), 0)
    } else if d < -l {
        (0, binomial(-d - 1, ell))
    } else {
        (0, 0)
    }
}

/// Exact cohomology dimensions of `L`.
pub fn h_dims(spec: &VarietySpec, l: LineBundle) -> CohomologyVector {
    match spec {
        VarietySpec::Toric(t) => toric::h_dims(t, l),
        VarietySpec::Cotangent { ell } => cotangent::h_dims(*ell, l),
        VarietySpec::TangentDual { ell } => tangent_dual::h_dims(*ell, l),
    }
}

/// Closed-form immaculacy test from the strip and point description.
pub fn is_immaculate(spec: &VarietySpec, l: LineBundle) -> bool {
    match spec {
        VarietySpec::Toric(t) => toric::is_immaculate(t, l),
        VarietySpec::Cotangent { ell } => cotangent::is_immaculate(*ell, l),
        VarietySpec::TangentDual { ell } => tangent_dual::is_immaculate(*ell, l),
    }
}

/// Bitmask of the degrees in which `L` has nonzero cohomology, read from the
/// region table (no dimension arithmetic).
pub fn nonzero_degree_mask(spec: &VarietySpec, l: LineBundle) -> u64 {
    match spec {
        VarietySpec::Toric(t) => toric::degree_mask(t, l),
        VarietySpec::Cotangent { ell } => cotangent::degree_mask(*ell, l),
        VarietySpec::TangentDual { .. } => {
            h_dims(spec, l).nonzero_degrees().fold(0, |m, k| m | 1 << k)
        }
    }
}

/// `Hᵏ(L) = 0` for all `k ≥ 1`.
pub fn is_acyclic(spec: &VarietySpec, l: LineBundle) -> bool {
    nonzero_degree_mask(spec, l) & !1 == 0
}

/// `H⁰(L) ≠ 0`.
pub fn is_effective(spec: &VarietySpec, l: LineBundle) -> bool {
    nonzero_degree_mask(spec, l) & 1 != 0
}

/// The immaculate locus as a finite union of strips and isolated points.
pub fn immaculate_pieces(spec: &VarietySpec) -> Vec<ImmPiece> {
    match spec {
        VarietySpec::Toric(t) => toric::immaculate_pieces(t),
        VarietySpec::Cotangent { ell } => cotangent::immaculate_pieces(*ell),
        VarietySpec::TangentDual { ell } => tangent_dual::immaculate_pieces(*ell),
    }
}

/// Regions where cohomology is nonzero, one cone per degree and piece.
pub fn maculate_regions(spec: &VarietySpec) -> Result<Vec<MaculateRegion>> {
    match spec {
        VarietySpec::Toric(t) => Ok(toric::regions(t).to_vec()),
        VarietySpec::Cotangent { ell } => Ok(cotangent::regions(*ell).to_vec()),
        VarietySpec::TangentDual { .. } => Err(Error::Unsupported(
            "maculate regions of the tangent-dual family (available pointwise only)".into(),
        )),
    }
}

/// True iff no nonzero point of `lattice` lies in `Imm ∪ −Imm`. Decided
/// exactly: on a strip `lo ≤ f ≤ hi` the values of `f` on the lattice form
/// `gZ`, and a value `0` is hit by the rank-one kernel, which is nonzero.
pub fn is_admissible(spec: &VarietySpec, lattice: &Sublattice) -> bool {
    immaculate_pieces(spec).iter().all(|piece| {
        [1i64, -1].iter().all(|&sign| match piece.strip() {
            Some((form, lo, hi)) => {
                let (lo, hi) = if sign == 1 { (lo, hi) } else { (-hi, -lo) };
                let g = lattice.form_gcd(form);
                // Smallest multiple of g that is ≥ lo.
                let first = lo.div_euclid(g) * g + if lo.rem_euclid(g) == 0 { 0 } else { g };
                first > hi
            }
            None => {
                let ImmPiece::Point(p) = *piece else { unreachable!() };
                let p = sign * p;
                p == LineBundle::ZERO || !lattice.contains(p)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toric(ell: u32, v: u32, c: &[i64]) -> VarietySpec {
        VarietySpec::toric(ell, v, c).unwrap()
    }

    fn window(w: i64) -> impl Iterator<Item = LineBundle> {
        (-w..=w).flat_map(move |i| (-w..=w).map(move |j| LineBundle::new(i, j)))
    }

    fn specs() -> Vec<VarietySpec> {
        vec![
            toric(1, 1, &[0, -2]),
            toric(4, 3, &[0, -1, -1]),
            toric(4, 3, &[0, 0, 0]),
            toric(2, 2, &[-1, -2]),
            VarietySpec::cotangent(2).unwrap(),
            VarietySpec::cotangent(3).unwrap(),
            VarietySpec::tangent_dual(2).unwrap(),
            VarietySpec::tangent_dual(3).unwrap(),
        ]
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(1, 2), 0);
        assert_eq!(binomial(-3, 2), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(poly_binomial(-1, 2), 1);
        assert_eq!(poly_binomial(-3, 3), -10);
        assert_eq!(poly_binomial(1, 2), 0);
    }

    #[test]
    fn hirzebruch_examples() {
        let f2 = toric(1, 1, &[0, -2]);
        assert_eq!(h_dims(&f2, LineBundle::new(0, 1)).dims(), &[4, 0, 0]);
        assert_eq!(h_dims(&f2, LineBundle::new(0, 0)).dims(), &[1, 0, 0]);
        assert_eq!(h_dims(&f2, LineBundle::new(-2, 0)).dims(), &[0, 1, 0]);
    }

    #[test]
    fn structure_sheaf_and_canonical() {
        for s in specs() {
            let o = h_dims(&s, LineBundle::ZERO);
            assert_eq!(o, CohomologyVector::concentrated(s.dim(), 0, 1), "{s}");
            let k = h_dims(&s, s.canonical());
            assert_eq!(k, CohomologyVector::concentrated(s.dim(), s.dim() as usize, 1), "{s}");
            assert!(!is_immaculate(&s, LineBundle::ZERO));
            assert!(is_acyclic(&s, LineBundle::ZERO) && is_effective(&s, LineBundle::ZERO));
        }
    }

    #[test]
    fn serre_duality_and_closed_forms_agree() {
        for s in specs() {
            let k = s.canonical();
            for l in window(10) {
                let h = h_dims(&s, l);
                assert_eq!(h.dims().len(), s.dim() as usize + 1);
                assert_eq!(h.reversed(), h_dims(&s, k - l), "{s} {l}");
                assert_eq!(h.is_zero(), is_immaculate(&s, l), "{s} {l}");
                let mask = h.nonzero_degrees().fold(0u64, |m, d| m | 1 << d);
                assert_eq!(mask, nonzero_degree_mask(&s, l), "{s} {l}");
                assert_eq!(
                    immaculate_pieces(&s).iter().any(|p| p.contains(l)),
                    is_immaculate(&s, l),
                    "{s} {l}"
                );
            }
        }
    }

    #[test]
    fn regions_match_dimensions() {
        for s in specs().into_iter().filter(|s| s.as_toric().is_some() || matches!(s, VarietySpec::Cotangent { .. })) {
            let regions = maculate_regions(&s).unwrap();
            for l in window(10) {
                let h = h_dims(&s, l);
                for k in 0..=s.dim() as usize {
                    let inside = regions.iter().any(|r| r.degree == k && r.contains(l));
                    assert_eq!(inside, h.get(k) > 0, "{s} {l} degree {k}");
                }
            }
        }
        assert!(maculate_regions(&VarietySpec::tangent_dual(3).unwrap()).is_err());
    }

    #[test]
    fn toric_region_apexes() {
        let t = toric(4, 3, &[0, -1, -1]);
        let regions = maculate_regions(&t).unwrap();
        let top = regions.iter().find(|r| r.degree == 7).unwrap();
        assert_eq!(top.cone.apex, t.canonical());
        let product = toric(4, 3, &[0, 0, 0]);
        let h0 = maculate_regions(&product).unwrap()[0];
        assert_eq!(h0.degree, 0);
        assert_eq!(h0.cone, Cone::first_quadrant());
    }

    #[test]
    fn cotangent_examples() {
        let x2 = VarietySpec::cotangent(2).unwrap();
        assert_eq!(h_dims(&x2, LineBundle::new(1, 0)).dims(), &[3, 0, 0, 0]);
        assert!(h_dims(&x2, LineBundle::new(-1, 4)).is_zero());
        assert!(is_immaculate(&x2, LineBundle::new(3, -5)));
        // (1,−4) sits on the anti-diagonal i + j = −3 of X₃.
        let x3 = VarietySpec::cotangent(3).unwrap();
        assert!(h_dims(&x3, LineBundle::new(1, -4)).is_zero());
        let cot = maculate_regions(&x3).unwrap();
        assert!(cot.iter().any(|r| r.cone.apex == LineBundle::new(-3, 1)));
        // At most one nonzero degree.
        for l in window(12) {
            assert!(h_dims(&x3, l).nonzero_degrees().count() <= 1);
        }
    }

    #[test]
    fn toric_immaculate_example() {
        let t = toric(4, 3, &[0, -1, -1]);
        assert!(is_immaculate(&t, LineBundle::new(-1, -2)));
        assert!(!is_immaculate(&t, LineBundle::new(-1, 2)));
        // Five points on the row j = 0 between the H^ℓ and H⁰ cones.
        assert!(is_immaculate(&t, LineBundle::new(-4, 0)));
    }

    #[test]
    fn tangent_dual_matches_cotangent_at_two() {
        let d = VarietySpec::tangent_dual(2).unwrap();
        let c = VarietySpec::cotangent(2).unwrap();
        for l in window(10) {
            assert_eq!(h_dims(&d, l), h_dims(&c, l), "{l}");
        }
    }

    #[test]
    fn tangent_dual_examples() {
        let d = VarietySpec::tangent_dual(3).unwrap();
        assert!(h_dims(&d, LineBundle::new(-5, 1)).get(3) > 0);
    }

    #[test]
    fn admissibility() {
        let t = toric(4, 3, &[0, -1, -1]);
        assert!(is_admissible(&t, &t.canonical_sublattice()));
        let x = VarietySpec::cotangent(2).unwrap();
        assert!(is_admissible(&x, &x.canonical_sublattice()));
        let bad = Sublattice::new(x.canonical(), LineBundle::new(-3, 0)).unwrap();
        assert!(!is_admissible(&x, &bad));
    }

    #[test]
    fn admissibility_matches_window_scan() {
        let lattices = [
            ((2, 4), (6, 8)),
            ((-3, 0), (0, -3)),
            ((1, 2), (0, 5)),
            ((-3, -4), (-5, 0)),
            ((-2, -2), (-3, 0)),
            ((4, 1), (1, 4)),
            ((7, 0), (0, 7)),
        ];
        for s in specs() {
            let w = 10 * s.dim() as i64;
            for (a, b) in lattices {
                let lat = Sublattice::new(a.into(), b.into()).unwrap();
                let q = lat.quotient();
                let scan = (-w..=w)
                    .flat_map(|i| (-w..=w).map(move |j| LineBundle::new(i, j)))
                    .filter(|&p| p != LineBundle::ZERO && q.project(p) == Default::default())
                    .all(|p| !is_immaculate(&s, p) && !is_immaculate(&s, -p));
                assert_eq!(is_admissible(&s, &lat), scan, "{s} {a:?} {b:?}");
            }
        }
    }
}
