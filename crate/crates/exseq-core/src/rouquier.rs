//! Tilting bundles from strong Orlov-type sequences and the resulting bounds
//! on the Rouquier dimension.
//!
//! The generation time of a tilting bundle `T` is `dim X + i₀`, where `i₀` is
//! the top nonvanishing degree of `Hom^•(T, T ⊗ K^{-1})`. `dim X` is always a
//! lower bound, so a witness with `i₀ = 0` pins the dimension exactly.

use std::fmt;

use serde::Serialize;

use crate::cohomology::h_dims;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poset::is_exceptional_sequence;
use crate::variety::{LineBundle, VarietySpec};

/// Largest gap tried between consecutive row offsets.
pub const DEFAULT_GAP_WINDOW: i64 = 6;

/// A strong full sequence whose direct sum is a tilting bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TiltingSpec {
    #[serde(skip)]
    spec: VarietySpec,
    offsets: Vec<i64>,
    bundles: Vec<LineBundle>,
}

impl TiltingSpec {
    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn bundles(&self) -> &[LineBundle] {
        &self.bundles
    }

    /// Row offsets `a₀ = 0, a₁, …`.
    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }
}

/// Row `j` is the horizontal chain `(a_j, j), …, (a_j + ℓ, j)`, rows in order.
pub fn orlov_rows(spec: &VarietySpec, offsets: &[i64]) -> Vec<LineBundle> {
    let ell = spec.ell() as i64;
    offsets
        .iter()
        .zip(0..)
        .flat_map(|(&a, j)| (0..=ell).map(move |i| LineBundle::new(a + i, j)))
        .collect()
}

fn offsets_from_gaps(gaps: &[i64]) -> Vec<i64> {
    std::iter::once(0)
        .chain(gaps.iter().scan(0, |acc, &g| {
            *acc += g;
            Some(*acc)
        }))
        .collect()
}

/// No higher cohomology between any two members, in either order.
pub fn is_strong(spec: &VarietySpec, bundles: &[LineBundle]) -> bool {
    bundles.iter().all(|&a| {
        bundles.iter().all(|&b| {
            let h = h_dims(spec, b - a);
            h.dims().iter().skip(1).all(|&d| d == 0)
        })
    })
}

/// The Orlov-type sequence with consecutive row offsets differing by
/// `gaps`; one gap per pair of adjacent rows.
pub fn orlov_tilting(spec: &VarietySpec, gaps: &[i64]) -> Result<TiltingSpec> {
    let rows = spec.fiber_dim() as usize + 1;
    if gaps.len() + 1 != rows {
        return Err(Error::InvalidSpec(format!("{} gaps for {rows} rows", gaps.len())));
    }
    let offsets = offsets_from_gaps(gaps);
    let bundles = orlov_rows(spec, &offsets);
    if !is_exceptional_sequence(spec, &bundles)? {
        return Err(Error::Internal(format!("Orlov rows {offsets:?} are not exceptional")));
    }
    if !is_strong(spec, &bundles) {
        return Err(Error::NotStrong);
    }
    Ok(TiltingSpec { spec: spec.clone(), offsets, bundles })
}

/// Largest `k` with `H^k(b − a − K) ≠ 0` over all ordered pairs, `0` when
/// everything sits in degree zero.
pub fn compute_i0(tilting: &TiltingSpec, exec: Exec) -> usize {
    let spec = &tilting.spec;
    let anti = -spec.canonical();
    let tops = exec.map(tilting.bundles(), |&a| {
        tilting
            .bundles()
            .iter()
            .filter_map(|&b| h_dims(spec, b - a + anti).top_degree())
            .max()
            .unwrap_or(0)
    });
    tops.into_iter().max().unwrap_or(0)
}

/// `dim X + i₀`.
pub fn generation_time_bound(tilting: &TiltingSpec, exec: Exec) -> u32 {
    tilting.spec.dim() + compute_i0(tilting, exec) as u32
}

/// Rouquier dimension of `D(X)`: exact when a witness has `i₀ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RouquierDimension {
    Exact { value: u32 },
    Interval { lower: u32, upper: u32 },
}

impl fmt::Display for RouquierDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RouquierDimension::Exact { value } => write!(f, "{value}"),
            RouquierDimension::Interval { lower, upper } => write!(f, "[{lower}, {upper}]"),
        }
    }
}

/// Best witness found and the bound it gives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouquierReport {
    pub dim: u32,
    pub i0: usize,
    pub generation_time: u32,
    pub witness: TiltingSpec,
    pub rouquier: RouquierDimension,
}

/// All gap vectors in `[0, window]^n`, ordered by total then lexicographically.
fn gap_vectors(n: usize, window: i64) -> Vec<Vec<i64>> {
    let mut all: Vec<Vec<i64>> = (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (0..=window).map(move |g| {
                    let mut w = v.clone();
                    w.push(g);
                    w
                })
            })
            .collect()
    });
    all.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    all
}

/// The strong Orlov-type witness with uniform gap, smallest first.
pub fn uniform_tilting(spec: &VarietySpec, window: i64) -> Result<TiltingSpec> {
    let n = spec.fiber_dim() as usize;
    (0..=window)
        .find_map(|g| orlov_tilting(spec, &vec![g; n]).ok())
        .ok_or(Error::NotStrong)
}

/// Searches gap vectors in `[0, window]` for the witness with the smallest
/// `i₀`, stopping at the first `i₀ = 0`.
pub fn rouquier_dimension(spec: &VarietySpec, window: i64, exec: Exec) -> Result<RouquierReport> {
    let candidates = gap_vectors(spec.fiber_dim() as usize, window);
    let strong: Vec<TiltingSpec> =
        exec.map(&candidates, |gaps| orlov_tilting(spec, gaps).ok()).into_iter().flatten().collect();
    let mut best: Option<(usize, TiltingSpec)> = None;
    for t in strong {
        let i0 = compute_i0(&t, exec);
        if best.as_ref().is_none_or(|(b, _)| i0 < *b) {
            best = Some((i0, t));
        }
        if i0 == 0 {
            break;
        }
    }
    let (i0, witness) = best.ok_or(Error::NotStrong)?;
    let dim = spec.dim();
    let generation_time = dim + i0 as u32;
    let rouquier = if i0 == 0 {
        RouquierDimension::Exact { value: dim }
    } else {
        RouquierDimension::Interval { lower: dim, upper: generation_time }
    };
    Ok(RouquierReport { dim, i0, generation_time, witness, rouquier })
}

/// `−K` nef, read off the canonical class.
pub fn anticanonical_nef(spec: &VarietySpec) -> bool {
    spec.in_nef_cone(-spec.canonical())
}
