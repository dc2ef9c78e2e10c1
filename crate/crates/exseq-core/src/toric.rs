//! Maximal exceptional sets on toric bundles `X(ℓ,V;c)`: admissible sets,
//! the X/Y/Z construction, layer decomposition, and the layer criteria for
//! strong and effective sets.
//!
//! Normal form: `Z` occupies rows `0..=V`, `X` rows `V+1..=2V+1`. When `X` is
//! nonempty its row `V+1` ends at `(ℓ−β, V+1)`; otherwise row `0` starts at
//! `(0, 0)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cohomology::{h_dims, is_immaculate};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poset::{is_exceptional_sequence, ExceptionalSet};
use crate::variety::{LineBundle, ToricSpec, VarietySpec};

/// A finite subset of `Δ_up` satisfying (Ai)–(Aiii), with every nonempty row
/// a horizontal chain (required for the leftward completion to a chain).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AdmissibleSet {
    points: BTreeSet<LineBundle>,
}

impl AdmissibleSet {
    pub fn new(spec: &ToricSpec, points: impl IntoIterator<Item = LineBundle>) -> Result<Self> {
        let set = AdmissibleSet { points: points.into_iter().collect() };
        set.validate(spec)?;
        Ok(set)
    }

    pub fn points(&self) -> impl Iterator<Item = LineBundle> + '_ {
        self.points.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Abscissae of row `j`, ascending.
    pub fn row(&self, j: i64) -> Vec<i64> {
        self.points.iter().filter(|p| p.j == j).map(|p| p.i).collect()
    }

    fn validate(&self, spec: &ToricSpec) -> Result<()> {
        let v = spec.v() as i64;
        let (a, b) = (spec.alpha(), spec.beta());
        if let Some(p) = self.points.iter().find(|p| !in_delta_up(spec, **p)) {
            return Err(Error::Inadmissible(format!("{p} outside Δ_up")));
        }
        if let Some(p) = self.points.iter().find(|p| p.j > 2 * v + 1) {
            return Err(Error::Inadmissible(format!("{p} above row 2V+1")));
        }
        let anchor = LineBundle::new(spec.ell() as i64 - b, v + 1);
        if !self.points.is_empty() && !self.points.contains(&anchor) {
            return Err(Error::Inadmissible(format!("nonempty set misses {anchor}")));
        }
        for j in v + 1..=2 * v + 1 {
            let row = self.row(j);
            if row.len() > 1 && row[row.len() - 1] - row[0] + 1 != row.len() as i64 {
                return Err(Error::Inadmissible(format!("row {j} is not a horizontal chain")));
            }
        }
        for p in &self.points {
            if p.j > v + 1 {
                if let Some(x) = (0..=a).map(|d| LineBundle::new(p.i + d, p.j - 1)).find(|q| !self.points.contains(q)) {
                    return Err(Error::Inadmissible(format!("{p} needs {x} below it")));
                }
            }
        }
        Ok(())
    }
}

/// `Δ_up = {−β < i, V < j, i + αj ≤ ℓ + α(V+1) − β}`.
pub fn in_delta_up(spec: &ToricSpec, p: LineBundle) -> bool {
    let (l, v) = (spec.ell() as i64, spec.v() as i64);
    let (a, b) = (spec.alpha(), spec.beta());
    -b < p.i && v < p.j && p.i + a * p.j <= l + a * (v + 1) - b
}

/// Abscissa range of `Δ_up` on row `j` (empty when `lo > hi`).
fn delta_up_row(spec: &ToricSpec, j: i64) -> (i64, i64) {
    let (l, v) = (spec.ell() as i64, spec.v() as i64);
    let (a, b) = (spec.alpha(), spec.beta());
    (-b + 1, l + a * (v + 1) - b - a * j)
}

/// All admissible sets, row by row: row `V+1` is a chain ending at the
/// anchor, and each higher row is a chain supported by the row below.
pub fn enumerate_admissible(spec: &ToricSpec) -> Vec<AdmissibleSet> {
    let v = spec.v() as i64;
    let a = spec.alpha();
    let anchor = spec.ell() as i64 - spec.beta();
    let mut out = vec![AdmissibleSet::default()];
    let (lo, _) = delta_up_row(spec, v + 1);
    for left in lo..=anchor {
        extend_rows(spec, v + 1, (left..=anchor).collect(), &mut Vec::new(), &mut out, a, v);
    }
    out.sort();
    out
}

fn extend_rows(
    spec: &ToricSpec,
    j: i64,
    row: Vec<i64>,
    below: &mut Vec<LineBundle>,
    out: &mut Vec<AdmissibleSet>,
    a: i64,
    v: i64,
) {
    let mark = below.len();
    below.extend(row.iter().map(|&i| LineBundle::new(i, j)));
    out.push(AdmissibleSet { points: below.iter().copied().collect() });
    if j < 2 * v + 1 {
        let (lo, hi) = delta_up_row(spec, j + 1);
        // The supported points form one interval, since `row` does.
        let support: Vec<i64> =
            (lo..=hi).filter(|&x| (0..=a).all(|d| row.binary_search(&(x + d)).is_ok())).collect();
        for (s, &x0) in support.iter().enumerate() {
            for &x1 in &support[s..] {
                extend_rows(spec, j + 1, (x0..=x1).collect(), below, out, a, v);
            }
        }
    }
    below.truncate(mark);
}

/// Free rows of `Z`: `k ∈ 0..=V` with `X(k+V+1) = ∅`.
pub fn free_rows(spec: &ToricSpec, adm: &AdmissibleSet) -> Vec<u32> {
    let v = spec.v() as i64;
    (0..=spec.v()).filter(|&k| adm.row(k as i64 + v + 1).is_empty()).collect()
}

/// Left end of the reference chain (in `Z` coordinates) that free-row
/// offsets are measured from.
fn offset_reference(spec: &ToricSpec, adm: &AdmissibleSet) -> i64 {
    let v = spec.v() as i64;
    (0..=v)
        .rev()
        .map(|k| adm.row(k + v + 1))
        .find(|r| !r.is_empty())
        .map_or(0, |r| r[r.len() - 1] - spec.ell() as i64 + spec.beta())
}

/// The set `Z ∪ X`, in vertical-lex order.
pub fn build_mes(spec: &ToricSpec, adm: &AdmissibleSet, offsets: &BTreeMap<u32, i64>) -> Result<ExceptionalSet> {
    let (l, v) = (spec.ell() as i64, spec.v() as i64);
    let free = free_rows(spec, adm);
    if offsets.keys().copied().collect::<Vec<_>>() != free {
        return Err(Error::Inadmissible(format!("offsets {offsets:?} do not match free rows {free:?}")));
    }
    let reference = offset_reference(spec, adm);
    let mut points: Vec<LineBundle> = adm.points().collect();
    for k in 0..=v {
        let row = adm.row(k + v + 1);
        match row.last() {
            Some(&max) => points.extend(
                (max - l..=max).filter(|x| !row.contains(x)).map(|x| LineBundle::new(x + spec.beta(), k)),
            ),
            None => {
                let left = reference + offsets[&(k as u32)];
                points.extend((left..=left + l).map(|x| LineBundle::new(x, k)));
            }
        }
    }
    points.sort_by_key(|p| p.vertical_key());
    let spec_v = VarietySpec::Toric(spec.clone());
    let set = ExceptionalSet::new(spec_v.clone(), points.clone())
        .map_err(|e| Error::Internal(format!("construction produced a non-exceptional set: {e}")))?;
    if !set.is_maximal() || !is_exceptional_sequence(&spec_v, &points)? {
        return Err(Error::Internal("construction lost maximality or vertical order".into()));
    }
    Ok(set)
}

/// All offset vectors in `[−w, w]` for the free rows; row 0 is pinned at 0
/// when `X = ∅` (it fixes the horizontal twist).
fn offset_vectors(free: &[u32], pinned_zero: bool, w: i64) -> Vec<BTreeMap<u32, i64>> {
    free.iter().fold(vec![BTreeMap::new()], |acc, &k| {
        let range: Vec<i64> = if pinned_zero && k == 0 { vec![0] } else { (-w..=w).collect() };
        acc.into_iter()
            .flat_map(|m| {
                range.iter().map(move |&o| {
                    let mut m = m.clone();
                    m.insert(k, o);
                    m
                })
            })
            .collect()
    })
}

/// Twist-normalised key: translate so the vertical-lex minimum is `(0,0)`.
pub fn canonical_key(bundles: &[LineBundle]) -> Vec<LineBundle> {
    let Some(min) = bundles.iter().min_by_key(|p| p.vertical_key()) else {
        return Vec::new();
    };
    let mut key: Vec<LineBundle> = bundles.iter().map(|&p| p - *min).collect();
    key.sort_by_key(|p| p.vertical_key());
    key
}

/// Every MES whose free-row offsets lie in `[−w, w]`, deduplicated up to
/// twist and sorted canonically. In the product case `σ`-images of sets on
/// `X(V,ℓ;0)` are included.
pub fn enumerate_mes(spec: &ToricSpec, w: i64, exec: Exec) -> Result<Vec<ExceptionalSet>> {
    let mut found = enumerate_direct(spec, w, exec)?;
    if spec.alpha() == 0 {
        let swapped = ToricSpec::product(spec.v(), spec.ell())?;
        let variety = VarietySpec::Toric(spec.clone());
        for s in enumerate_direct(&swapped, w, exec)? {
            let image: Vec<LineBundle> = s.bundles().iter().map(|p| p.swapped()).collect();
            found.push(ExceptionalSet::new(variety.clone(), image)?);
        }
    }
    let mut unique: BTreeMap<Vec<LineBundle>, ExceptionalSet> = BTreeMap::new();
    for s in found {
        unique.entry(canonical_key(s.bundles())).or_insert(s);
    }
    Ok(unique.into_values().collect())
}

fn enumerate_direct(spec: &ToricSpec, w: i64, exec: Exec) -> Result<Vec<ExceptionalSet>> {
    let jobs: Vec<(AdmissibleSet, BTreeMap<u32, i64>)> = enumerate_admissible(spec)
        .into_iter()
        .flat_map(|adm| {
            let free = free_rows(spec, &adm);
            offset_vectors(&free, adm.is_empty(), w).into_iter().map(move |o| (adm.clone(), o))
        })
        .collect();
    exec.try_map(&jobs, |(adm, offsets)| build_mes(spec, adm, offsets))
}

/// Position of a layer in `−∞ < 0 < … < V < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerIndex {
    NegInf,
    Row(u32),
    PosInf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub index: LayerIndex,
    pub left: LineBundle,
    pub right: LineBundle,
}

/// Layer data of a MES in normal form. All points are in normalised
/// coordinates: the input equals `twist + (σ-applied? swapped : identity)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerDecomposition {
    #[serde(skip)]
    pub spec: ToricSpec,
    pub sigma_applied: bool,
    pub twist: LineBundle,
    pub admissible: AdmissibleSet,
    pub offsets: BTreeMap<u32, i64>,
    pub x: Vec<LineBundle>,
    pub y: Vec<LineBundle>,
    pub z: Vec<LineBundle>,
    pub z_free: Vec<LineBundle>,
    pub z_residual: Vec<LineBundle>,
    pub layers: Vec<Layer>,
}

impl LayerDecomposition {
    fn layer_pairs(&self) -> impl Iterator<Item = (&Layer, &Layer)> + '_ {
        self.layers
            .iter()
            .enumerate()
            .flat_map(move |(n, hi)| self.layers[..n].iter().map(move |lo| (lo, hi)))
    }

    /// Layers with some lower layer whose left end is not nef-below.
    pub fn displaced_layers(&self) -> Vec<LayerIndex> {
        let mut out: Vec<LayerIndex> =
            self.layer_pairs().filter(|(lo, hi)| !nef_le(lo.left, hi.left)).map(|(_, hi)| hi.index).collect();
        out.dedup();
        out
    }

    /// Displaced layers whose offending lower right end is not eff-below.
    pub fn bad_layers(&self) -> Vec<LayerIndex> {
        let mut out: Vec<LayerIndex> = self
            .layer_pairs()
            .filter(|(lo, hi)| !nef_le(lo.left, hi.left) && !self.eff_le(lo.right, hi.left))
            .map(|(_, hi)| hi.index)
            .collect();
        out.dedup();
        out
    }

    pub fn has_displaced_layer(&self) -> bool {
        !self.displaced_layers().is_empty()
    }

    pub fn has_bad_layer(&self) -> bool {
        !self.bad_layers().is_empty()
    }

    /// Strong iff no layer is displaced.
    pub fn strong_by_layers(&self) -> bool {
        !self.has_displaced_layer()
    }

    /// Effective iff no layer is bad.
    pub fn effective_by_layers(&self) -> bool {
        !self.has_bad_layer()
    }

    fn eff_le(&self, a: LineBundle, b: LineBundle) -> bool {
        let d = b - a;
        d.j >= 0 && d.i + self.spec.alpha() * d.j >= 0
    }
}

fn nef_le(a: LineBundle, b: LineBundle) -> bool {
    a.i <= b.i && a.j <= b.j
}

/// Recognise the normal form of a MES and compute its layers. In the product
/// case a set that fails directly is retried as `σ` of a set on `X(V,ℓ;0)`.
pub fn decompose_layers(spec: &ToricSpec, bundles: &[LineBundle]) -> Result<LayerDecomposition> {
    match decompose_direct(spec, bundles) {
        Ok(d) => Ok(d),
        Err(e) if spec.alpha() == 0 => {
            let swapped = ToricSpec::product(spec.v(), spec.ell())?;
            let image: Vec<LineBundle> = bundles.iter().map(|p| p.swapped()).collect();
            let mut d = decompose_direct(&swapped, &image).map_err(|_| e)?;
            d.sigma_applied = true;
            Ok(d)
        }
        Err(e) => Err(e),
    }
}

fn decompose_direct(spec: &ToricSpec, bundles: &[LineBundle]) -> Result<LayerDecomposition> {
    let (l, v) = (spec.ell() as i64, spec.v() as i64);
    let b = spec.beta();
    let shape = |m: &str| Error::NotLayered(m.to_string());
    let variety = VarietySpec::Toric(spec.clone());
    if bundles.len() != variety.rank_k0() {
        return Err(shape("cardinality differs from the rank of K₀"));
    }
    let min_row = bundles.iter().map(|p| p.j).min().expect("nonempty");
    let lifted: Vec<LineBundle> = bundles.iter().map(|&p| p - LineBundle::new(0, min_row)).collect();
    if lifted.iter().any(|p| p.j > 2 * v + 1) {
        return Err(shape("more than 2V+2 rows"));
    }
    let anchor_row: Vec<i64> = lifted.iter().filter(|p| p.j == v + 1).map(|p| p.i).collect();
    let shift = match anchor_row.iter().max() {
        Some(&max) => max - (l - b),
        None => lifted.iter().filter(|p| p.j == 0).map(|p| p.i).min().ok_or_else(|| shape("row 0 empty"))?,
    };
    let twist = LineBundle::new(shift, min_row);
    let points: Vec<LineBundle> = bundles.iter().map(|&p| p - twist).collect();
    let adm = AdmissibleSet::new(spec, points.iter().copied().filter(|p| p.j > v))?;
    let reference = offset_reference(spec, &adm);
    let mut offsets = BTreeMap::new();
    for k in free_rows(spec, &adm) {
        let row: Vec<i64> = {
            let mut r: Vec<i64> = points.iter().filter(|p| p.j == k as i64).map(|p| p.i).collect();
            r.sort_unstable();
            r
        };
        if row.len() != l as usize + 1 || row[row.len() - 1] - row[0] != l {
            return Err(shape("free row is not a horizontal chain"));
        }
        offsets.insert(k, row[0] - reference);
    }
    let rebuilt = build_mes(spec, &adm, &offsets)?;
    let mut given = points.clone();
    given.sort_by_key(|p| p.vertical_key());
    if rebuilt.bundles() != given.as_slice() {
        return Err(shape("set differs from the construction of its own data"));
    }

    let x: Vec<LineBundle> = given.iter().copied().filter(|p| p.j > v).collect();
    let z: Vec<LineBundle> = given.iter().copied().filter(|p| p.j <= v).collect();
    let y: Vec<LineBundle> = z.iter().map(|&p| p + LineBundle::new(-b, v + 1)).collect();
    let free: BTreeSet<i64> = offsets.keys().map(|&k| k as i64).collect();
    let (z_free, z_residual): (Vec<LineBundle>, Vec<LineBundle>) = z.iter().partition(|p| free.contains(&p.j));

    let mut layers = Vec::new();
    if let Some(k0) = z_residual.iter().map(|p| p.j).max() {
        let right = *z_residual.iter().filter(|p| p.j == k0).max_by_key(|p| p.i).expect("row k₀");
        layers.push(Layer { index: LayerIndex::NegInf, left: right - LineBundle::new(l, 0), right });
    }
    for &k in &free {
        let row = z_free.iter().filter(|p| p.j == k);
        let left = *row.clone().min_by_key(|p| p.i).expect("free row nonempty");
        let right = *row.max_by_key(|p| p.i).expect("free row nonempty");
        layers.push(Layer { index: LayerIndex::Row(k as u32), left, right });
    }
    if let Some(left) = x.iter().filter(|p| p.j == v + 1).min_by_key(|p| p.i).copied() {
        layers.push(Layer { index: LayerIndex::PosInf, left, right: left + LineBundle::new(l, 0) });
    }
    Ok(LayerDecomposition {
        spec: spec.clone(),
        sigma_applied: false,
        twist,
        admissible: adm,
        offsets,
        x,
        y,
        z,
        z_free,
        z_residual,
        layers,
    })
}

/// Both sides of the acyclicity threshold `Eff ∩ −Imm ⊆ Acyc ⟺ ℓ ≥ αV`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdCheck {
    pub closed_form: bool,
    pub scan: bool,
}

impl ThresholdCheck {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.scan
    }
}

/// Closed form `ℓ ≥ αV` against a scan of `Eff ∩ −Imm ∩ H^ℓ` over a window
/// that contains its leftmost possible column `i = −αV`.
pub fn acyclicity_threshold(spec: &ToricSpec) -> ThresholdCheck {
    let (l, v, a) = (spec.ell() as i64, spec.v() as i64, spec.alpha());
    let variety = VarietySpec::Toric(spec.clone());
    let w = l + a * v + v + 2;
    let scan = (-w..=w).flat_map(|i| (0..=w).map(move |j| LineBundle::new(i, j))).all(|p| {
        let in_triple = variety.in_effective_cone(p)
            && is_immaculate(&variety, -p)
            && h_dims(&variety, p).get(l as usize) > 0;
        !in_triple
    });
    ThresholdCheck { closed_form: l >= a * v, scan }
}

pub fn vertical_lex(seq: &[LineBundle]) -> Vec<LineBundle> {
    let mut s = seq.to_vec();
    s.sort_by_key(|p| p.vertical_key());
    s
}

pub fn horizontal_lex(seq: &[LineBundle]) -> Vec<LineBundle> {
    let mut s = seq.to_vec();
    s.sort_by_key(|p| p.horizontal_key());
    s
}

/// `(i, j) ↦ (j, i)` elementwise.
pub fn sigma_involution(seq: &[LineBundle]) -> Vec<LineBundle> {
    seq.iter().map(|p| p.swapped()).collect()
}
