//! Variety specifications, the Picard lattice Z² in nef coordinates, cones,
//! and sublattices with their Smith-normal-form quotients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A line bundle `i·h + j·H`, stored in nef coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LineBundle {
    pub i: i64,
    pub j: i64,
}

impl LineBundle {
    pub const ZERO: LineBundle = LineBundle { i: 0, j: 0 };

    pub const fn new(i: i64, j: i64) -> Self {
        LineBundle { i, j }
    }

    /// Coordinate swap `(i, j) ↦ (j, i)`.
    pub const fn swapped(self) -> Self {
        LineBundle { i: self.j, j: self.i }
    }

    /// Sort key for the vertical lexicographic order (row first).
    pub const fn vertical_key(self) -> (i64, i64) {
        (self.j, self.i)
    }

    /// Sort key for the horizontal lexicographic order (column first).
    pub const fn horizontal_key(self) -> (i64, i64) {
        (self.i, self.j)
    }
}

impl From<[i64; 2]> for LineBundle {
    fn from([i, j]: [i64; 2]) -> Self {
        LineBundle { i, j }
    }
}

impl From<LineBundle> for [i64; 2] {
    fn from(l: LineBundle) -> Self {
        [l.i, l.j]
    }
}

impl From<(i64, i64)> for LineBundle {
    fn from((i, j): (i64, i64)) -> Self {
        LineBundle { i, j }
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl Add for LineBundle {
    type Output = LineBundle;
    fn add(self, o: LineBundle) -> LineBundle {
        LineBundle::new(self.i + o.i, self.j + o.j)
    }
}

impl AddAssign for LineBundle {
    fn add_assign(&mut self, o: LineBundle) {
        self.i += o.i;
        self.j += o.j;
    }
}

impl Sub for LineBundle {
    type Output = LineBundle;
    fn sub(self, o: LineBundle) -> LineBundle {
        LineBundle::new(self.i - o.i, self.j - o.j)
    }
}

impl Neg for LineBundle {
    type Output = LineBundle;
    fn neg(self) -> LineBundle {
        LineBundle::new(-self.i, -self.j)
    }
}

impl Mul<LineBundle> for i64 {
    type Output = LineBundle;
    fn mul(self, l: LineBundle) -> LineBundle {
        LineBundle::new(self * l.i, self * l.j)
    }
}

/// Parameters of the toric bundle `P(O ⊕ O(c¹) ⊕ … ⊕ O(c^V)) → P^ℓ`.
///
/// Invariant: `0 ≥ c¹ ≥ … ≥ c^V`, `ell ≥ 1`, `v ≥ 1`, `β ≤ αV`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToricSpec {
    ell: u32,
    v: u32,
    twists: Vec<i64>,
}

impl ToricSpec {
    /// Accepts `c` of length `V` (c¹..c^V) or of length `V+1` with a leading
    /// zero (c⁰ included), which is dropped.
    pub fn new(ell: u32, v: u32, c: &[i64]) -> Result<Self> {
        if ell == 0 || v == 0 {
            return Err(Error::InvalidSpec("ell and v must be at least 1".into()));
        }
        let twists: Vec<i64> = if c.len() == v as usize {
            c.to_vec()
        } else if c.len() == v as usize + 1 && c[0] == 0 {
            c[1..].to_vec()
        } else {
            return Err(Error::InvalidSpec(format!(
                "twist list {c:?} has neither V={v} nor V+1 entries with leading 0"
            )));
        };
        if twists.iter().any(|&t| t > 0) {
            return Err(Error::InvalidSpec(format!("positive twist in {c:?}")));
        }
        if twists.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidSpec(format!("twists {c:?} are not weakly decreasing")));
        }
        let spec = ToricSpec { ell, v, twists };
        // Holds automatically for decreasing non-positive twists; kept as a guard.
        if spec.beta() > spec.alpha() * v as i64 {
            return Err(Error::InvalidSpec("effective inequality β ≤ αV violated".into()));
        }
        Ok(spec)
    }

    /// The product `P^ℓ × P^V`.
    pub fn product(ell: u32, v: u32) -> Result<Self> {
        Self::new(ell, v, &vec![0; v as usize])
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    /// c¹..c^V.
    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    /// `α = −c^V`.
    pub fn alpha(&self) -> i64 {
        -self.twists.last().copied().unwrap_or(0)
    }

    /// `β = −Σ cᵏ`.
    pub fn beta(&self) -> i64 {
        -self.twists.iter().sum::<i64>()
    }

    /// Splitting degrees `−c⁰, −c¹, …, −c^V` of `π_*O(H)`, with `c⁰ = 0`.
    pub fn splitting_degrees(&self) -> Vec<i64> {
        std::iter::once(0).chain(self.twists.iter().map(|&c| -c)).collect()
    }
}

/// Which family a computation runs on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecFields", into = "SpecRepr")]
pub enum VarietySpec {
    Toric(ToricSpec),
    /// `X_ℓ = P(Ω(−1))` over `P^ℓ`, the flag variety `Fl(1, ℓ; ℓ+1)`.
    Cotangent { ell: u32 },
    /// `X_ℓ^∨ = P(T(2))` over `P^ℓ`.
    TangentDual { ell: u32 },
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SpecRepr {
    Toric { ell: u32, v: u32, c: Vec<i64> },
    Cotangent { ell: u32 },
    TangentDual { ell: u32 },
}

/// Flat input form, so deserialisation errors keep their field path.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFields {
    kind: SpecKind,
    ell: u32,
    #[serde(default)]
    v: Option<u32>,
    #[serde(default)]
    c: Option<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum SpecKind {
    Toric,
    Cotangent,
    TangentDual,
}

impl TryFrom<SpecFields> for VarietySpec {
    type Error = Error;
    fn try_from(f: SpecFields) -> Result<Self> {
        let no_twists = |spec: Result<VarietySpec>| match (f.v, &f.c) {
            (None, None) => spec,
            _ => Err(Error::InvalidSpec("only toric specs take v and c".into())),
        };
        match f.kind {
            SpecKind::Toric => match (f.v, &f.c) {
                (Some(v), Some(c)) => VarietySpec::toric(f.ell, v, c),
                _ => Err(Error::InvalidSpec("toric specs need v and c".into())),
            },
            SpecKind::Cotangent => no_twists(VarietySpec::cotangent(f.ell)),
            SpecKind::TangentDual => no_twists(VarietySpec::tangent_dual(f.ell)),
        }
    }
}

impl From<VarietySpec> for SpecRepr {
    fn from(s: VarietySpec) -> Self {
        match s {
            VarietySpec::Toric(t) => SpecRepr::Toric { ell: t.ell, v: t.v, c: t.twists },
            VarietySpec::Cotangent { ell } => SpecRepr::Cotangent { ell },
            VarietySpec::TangentDual { ell } => SpecRepr::TangentDual { ell },
        }
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietySpec::Toric(t) => write!(f, "X({},{};{:?})", t.ell, t.v, t.twists),
            VarietySpec::Cotangent { ell } => write!(f, "X_{ell}"),
            VarietySpec::TangentDual { ell } => write!(f, "X_{ell}^dual"),
        }
    }
}

impl VarietySpec {
    pub fn toric(ell: u32, v: u32, c: &[i64]) -> Result<Self> {
        ToricSpec::new(ell, v, c).map(VarietySpec::Toric)
    }

    pub fn cotangent(ell: u32) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidSpec("cotangent family needs ell ≥ 2".into()));
        }
        Ok(VarietySpec::Cotangent { ell })
    }

    pub fn tangent_dual(ell: u32) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidSpec("tangent-dual family needs ell ≥ 2".into()));
        }
        Ok(VarietySpec::TangentDual { ell })
    }

    /// Base dimension ℓ.
    pub fn ell(&self) -> u32 {
        match self {
            VarietySpec::Toric(t) => t.ell,
            VarietySpec::Cotangent { ell } | VarietySpec::TangentDual { ell } => *ell,
        }
    }

    /// Relative dimension of the bundle projection.
    pub fn fiber_dim(&self) -> u32 {
        match self {
            VarietySpec::Toric(t) => t.v,
            VarietySpec::Cotangent { ell } | VarietySpec::TangentDual { ell } => ell - 1,
        }
    }

    pub fn as_toric(&self) -> Option<&ToricSpec> {
        match self {
            VarietySpec::Toric(t) => Some(t),
            _ => None,
        }
    }

    pub fn dim(&self) -> u32 {
        self.ell() + self.fiber_dim()
    }

    /// Rank of the Grothendieck group: (base rank) × (fiber rank).
    pub fn rank_k0(&self) -> usize {
        ((self.ell() + 1) * (self.fiber_dim() + 1)) as usize
    }

    pub fn canonical(&self) -> LineBundle {
        match self {
            VarietySpec::Toric(t) => {
                LineBundle::new(t.beta() - t.ell as i64 - 1, -(t.v as i64) - 1)
            }
            VarietySpec::Cotangent { ell } => LineBundle::new(-(*ell as i64), -(*ell as i64)),
            VarietySpec::TangentDual { ell } => LineBundle::new(-2, -(*ell as i64)),
        }
    }

    /// Generators `⟨h, −αh + H⟩` (toric) or the first quadrant.
    pub fn effective_cone(&self) -> Cone {
        match self {
            VarietySpec::Toric(t) => Cone::new(
                LineBundle::ZERO,
                [LineBundle::new(1, 0), LineBundle::new(-t.alpha(), 1)],
            ),
            _ => Cone::first_quadrant(),
        }
    }

    pub fn nef_cone(&self) -> Cone {
        Cone::first_quadrant()
    }

    pub fn in_effective_cone(&self, l: LineBundle) -> bool {
        self.effective_cone().contains(l)
    }

    pub fn in_nef_cone(&self, l: LineBundle) -> bool {
        l.i >= 0 && l.j >= 0
    }

    /// The sublattice used for quotient maps: `⟨K, π*K_{P^ℓ}⟩` for toric
    /// bundles, `⟨(−ℓ−1,0),(0,−ℓ−1)⟩` for the (co)tangent families.
    pub fn canonical_sublattice(&self) -> Sublattice {
        let l = self.ell() as i64;
        match self {
            VarietySpec::Toric(_) => {
                Sublattice::new(self.canonical(), LineBundle::new(-l - 1, 0))
                    .expect("canonical toric sublattice has full rank")
            }
            _ => Sublattice::new(LineBundle::new(-l - 1, 0), LineBundle::new(0, -l - 1))
                .expect("diagonal sublattice has full rank"),
        }
    }
}

/// Lattice points of `apex + ℝ≥0·rays[0] + ℝ≥0·rays[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub apex: LineBundle,
    pub rays: [LineBundle; 2],
}

impl Cone {
    pub fn new(apex: LineBundle, rays: [LineBundle; 2]) -> Self {
        Cone { apex, rays }
    }

    pub fn first_quadrant() -> Self {
        Cone::new(LineBundle::ZERO, [LineBundle::new(1, 0), LineBundle::new(0, 1)])
    }

    pub fn contains(&self, l: LineBundle) -> bool {
        let p = l - self.apex;
        let [a, b] = self.rays;
        let det = a.i * b.j - a.j * b.i;
        // Cramer's rule scaled by det: p = s·a + t·b.
        let s = p.i * b.j - p.j * b.i;
        let t = a.i * p.j - a.j * p.i;
        if det > 0 {
            s >= 0 && t >= 0
        } else {
            s <= 0 && t <= 0
        }
    }
}

/// A full-rank sublattice of Z² given by two generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sublattice {
    gens: [LineBundle; 2],
}

impl Sublattice {
    pub fn new(a: LineBundle, b: LineBundle) -> Result<Self> {
        if a.i * b.j - a.j * b.i == 0 {
            return Err(Error::SingularLattice);
        }
        Ok(Sublattice { gens: [a, b] })
    }

    pub fn generators(&self) -> [LineBundle; 2] {
        self.gens
    }

    pub fn det(&self) -> i64 {
        let [a, b] = self.gens;
        a.i * b.j - a.j * b.i
    }

    /// Index of the sublattice.
    pub fn index(&self) -> u64 {
        self.det().unsigned_abs()
    }

    pub fn quotient(&self) -> Quotient {
        Quotient::new(self)
    }

    pub fn contains(&self, l: LineBundle) -> bool {
        self.quotient().project(l) == QuotientClass::default()
    }

    /// Greatest common divisor of the values of `f(i,j) = a·i + b·j` on the
    /// lattice; the image of the lattice under `f` is `gZ`.
    pub fn form_gcd(&self, (a, b): (i64, i64)) -> i64 {
        let [g1, g2] = self.gens;
        gcd(a * g1.i + b * g1.j, a * g2.i + b * g2.j)
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Residues of a class in `Z/d₁ × Z/d₂`, reduced into `[0, dₖ)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientClass(pub i64, pub i64);

/// The quotient map `Z² → Z²/Λ` in Smith normal form: `x ↦ P·x mod (d₁, d₂)`
/// where `P·M·Q = diag(d₁, d₂)` and `d₁ | d₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quotient {
    row_transform: [[i64; 2]; 2],
    moduli: [i64; 2],
}

impl Quotient {
    pub fn new(lattice: &Sublattice) -> Self {
        let [a, b] = lattice.generators();
        let (row_transform, moduli) = smith_normal_form([[a.i, b.i], [a.j, b.j]]);
        Quotient { row_transform, moduli }
    }

    pub fn moduli(&self) -> [i64; 2] {
        self.moduli
    }

    pub fn order(&self) -> u64 {
        (self.moduli[0] * self.moduli[1]) as u64
    }

    pub fn project(&self, l: LineBundle) -> QuotientClass {
        let p = &self.row_transform;
        let y0 = p[0][0] * l.i + p[0][1] * l.j;
        let y1 = p[1][0] * l.i + p[1][1] * l.j;
        QuotientClass(y0.rem_euclid(self.moduli[0]), y1.rem_euclid(self.moduli[1]))
    }
}

/// Smith normal form of a nonsingular 2×2 matrix. Returns the accumulated
/// row transform `P` and the positive invariant factors `d₁ | d₂`.
/// Already-diagonal inputs with `|d₁| | |d₂|` keep `P = I`.
fn smith_normal_form(m: [[i64; 2]; 2]) -> ([[i64; 2]; 2], [i64; 2]) {
    let mut a = m;
    let mut p = [[1, 0], [0, 1]];
    let swap_rows = |a: &mut [[i64; 2]; 2], p: &mut [[i64; 2]; 2]| {
        a.swap(0, 1);
        p.swap(0, 1);
    };
    let swap_cols = |a: &mut [[i64; 2]; 2]| {
        for row in a.iter_mut() {
            row.swap(0, 1);
        }
    };
    loop {
        // Move the smallest nonzero entry to (0,0).
        let mut best = (0, 0);
        for r in 0..2 {
            for c in 0..2 {
                let v = a[r][c].abs();
                if v != 0 && (a[best.0][best.1] == 0 || v < a[best.0][best.1].abs()) {
                    best = (r, c);
                }
            }
        }
        if best.0 == 1 {
            swap_rows(&mut a, &mut p);
        }
        if best.1 == 1 {
            swap_cols(&mut a);
        }
        let piv = a[0][0];
        // Clear column 0 below the pivot by a row operation.
        let q = a[1][0] / piv;
        if q != 0 {
            let (a0, p0) = (a[0], p[0]);
            a[1].iter_mut().zip(a0).for_each(|(x, y)| *x -= q * y);
            p[1].iter_mut().zip(p0).for_each(|(x, y)| *x -= q * y);
        }
        // Clear row 0 right of the pivot by a column operation.
        let q = a[0][1] / piv;
        if q != 0 {
            for row in a.iter_mut() {
                row[1] -= q * row[0];
            }
        }
        if a[1][0] != 0 || a[0][1] != 0 {
            continue;
        }
        if a[1][1] % piv != 0 {
            // Add row 1 to row 0 and repeat to restore divisibility.
            for c in 0..2 {
                a[0][c] += a[1][c];
                p[0][c] += p[1][c];
            }
            continue;
        }
        break;
    }
    // Column sign changes do not touch P.
    ([[p[0][0], p[0][1]], [p[1][0], p[1][1]]], [a[0][0].abs(), a[1][1].abs()])
}
