//! Maximal exceptional sets on `X₂ = P(Ω_{P²}(−1))`: colours and gap points
//! in `Pic/Λ ≅ (Z/3)²`, exhaustive window enumeration, and recognition of
//! the helix classes I–V and their `σ`-images.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cohomology::is_immaculate;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poset::ExceptionalSet;
use crate::toric::canonical_key;
use crate::variety::{LineBundle, QuotientClass, VarietySpec};

/// Default enumeration window.
pub const DEFAULT_WINDOW: i64 = 8;
/// Smallest window containing every non-parametric template.
pub const MIN_WINDOW: i64 = 4;

fn x2() -> VarietySpec {
    VarietySpec::cotangent(2).expect("ℓ = 2 is valid")
}

/// Image in `Pic(X_ℓ)/⟨(ℓ+1,0),(0,ℓ+1)⟩ ≅ (Z/(ℓ+1))²`.
pub fn residue(ell: u32, l: LineBundle) -> QuotientClass {
    let m = ell as i64 + 1;
    QuotientClass(l.i.rem_euclid(m), l.j.rem_euclid(m))
}

/// Which strip of the negated immaculate locus a residue class comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorClass {
    /// Anti-diagonal strip only.
    Blue,
    /// Vertical strip only.
    Green,
    /// Horizontal strip only.
    Red,
    /// Common point of all three strips.
    Mixed,
    /// Classes of `O` and `−K`.
    NonImmaculate,
}

pub fn color_of(l: LineBundle) -> ColorClass {
    match residue(2, l) {
        QuotientClass(2, 0) | QuotientClass(0, 2) => ColorClass::Blue,
        QuotientClass(0, 1) | QuotientClass(2, 1) => ColorClass::Red,
        QuotientClass(1, 0) | QuotientClass(1, 2) => ColorClass::Green,
        QuotientClass(1, 1) => ColorClass::Mixed,
        _ => ColorClass::NonImmaculate,
    }
}

/// Shifted diagonal `p + Δ` containing a residue, indexed by `(i − j) mod (ℓ+1)`.
fn diagonal_of(ell: u32, q: QuotientClass) -> i64 {
    (q.0 - q.1).rem_euclid(ell as i64 + 1)
}

/// Gap point of each shifted diagonal of a MES on `X_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapPoints {
    /// Diagonal index `(i − j) mod (ℓ+1)` → missing residue.
    pub gaps: BTreeMap<i64, QuotientClass>,
}

/// One gap per shifted diagonal; every diagonal carries exactly `ℓ` image
/// points and the image has `ℓ(ℓ+1)` points.
pub fn gap_points(spec: &VarietySpec, bundles: &[LineBundle]) -> Result<GapPoints> {
    let VarietySpec::Cotangent { ell } = *spec else {
        return Err(Error::Unsupported("gap points are defined on X_ℓ".into()));
    };
    let m = ell as i64 + 1;
    let image: BTreeSet<QuotientClass> = bundles.iter().map(|&l| residue(ell, l)).collect();
    if image.len() != bundles.len() || bundles.len() != spec.rank_k0() {
        return Err(Error::NotExceptional("image in Pic/Λ is not a maximal injective image".into()));
    }
    let mut gaps = BTreeMap::new();
    for d in 0..m {
        let diagonal: Vec<QuotientClass> = (0..m).map(|a| QuotientClass((d + a) % m, a)).collect();
        let missing: Vec<&QuotientClass> = diagonal.iter().filter(|q| !image.contains(q)).collect();
        match missing.as_slice() {
            [gap] => {
                gaps.insert(d, **gap);
            }
            _ => return Err(Error::NotExceptional(format!("diagonal {d} has {} gaps", missing.len()))),
        }
    }
    Ok(GapPoints { gaps })
}

/// Position along its diagonal counted from the gap: `p + ν(1,1)` has step `ν`.
pub fn diagonal_step(ell: u32, gaps: &GapPoints, l: LineBundle) -> i64 {
    let q = residue(ell, l);
    let gap = gaps.gaps[&diagonal_of(ell, q)];
    (q.1 - gap.1).rem_euclid(ell as i64 + 1)
}

fn compatible(spec: &VarietySpec, a: LineBundle, b: LineBundle) -> bool {
    is_immaculate(spec, a - b) || is_immaculate(spec, b - a)
}

/// All MES on `X₂` with vertical-lex minimum `(0,0)` and every point in
/// `[−w, w] × [0, w]`; one representative per twist class.
pub fn enumerate_mes_x2(w: i64, exec: Exec) -> Result<Vec<ExceptionalSet>> {
    if w < MIN_WINDOW {
        return Err(Error::InvalidSpec(format!("window {w} < {MIN_WINDOW}")));
    }
    let spec = x2();
    let origin = LineBundle::ZERO;
    let candidates: Vec<LineBundle> = (0..=w)
        .flat_map(|j| (-w..=w).map(move |i| LineBundle::new(i, j)))
        .filter(|p| p.j > 0 || p.i > 0)
        .filter(|&p| compatible(&spec, origin, p))
        .collect();
    let firsts: Vec<usize> = (0..candidates.len()).collect();
    let found: Vec<Vec<Vec<LineBundle>>> = exec.map(&firsts, |&k| {
        let mut out = Vec::new();
        let mut cur = vec![origin, candidates[k]];
        search(&spec, &candidates, k + 1, &mut cur, &mut out);
        out
    });
    let mut sets = Vec::new();
    for bundles in found.into_iter().flatten() {
        sets.push(ExceptionalSet::new(spec.clone(), bundles)?);
    }
    sets.sort_by_key(|s| canonical_key(s.bundles()));
    Ok(sets)
}

fn search(spec: &VarietySpec, pool: &[LineBundle], start: usize, cur: &mut Vec<LineBundle>, out: &mut Vec<Vec<LineBundle>>) {
    if cur.len() == spec.rank_k0() {
        if ExceptionalSet::new(spec.clone(), cur.clone()).is_ok() {
            out.push(cur.clone());
        }
        return;
    }
    for (k, &p) in pool.iter().enumerate().skip(start) {
        if cur.iter().all(|&q| compatible(spec, p, q)) && image_stays_admissible(cur, p) {
            cur.push(p);
            search(spec, pool, k + 1, cur, out);
            cur.pop();
        }
    }
}

/// Injectivity into `(Z/3)²` and at most two points per shifted diagonal.
fn image_stays_admissible(cur: &[LineBundle], p: LineBundle) -> bool {
    let q = residue(2, p);
    let d = diagonal_of(2, q);
    cur.iter().all(|&x| residue(2, x) != q) && cur.iter().filter(|&&x| diagonal_of(2, residue(2, x)) == d).count() < 2
}

/// Helix classes; primed classes are `σ`-images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MesClass {
    I,
    II,
    III,
    IV,
    V,
    #[serde(rename = "I'")]
    IPrime,
    #[serde(rename = "III'")]
    IIIPrime,
}

impl MesClass {
    /// Recognition order; overlapping sets get the first matching class.
    pub const PRIORITY: [MesClass; 7] =
        [MesClass::I, MesClass::II, MesClass::III, MesClass::IV, MesClass::V, MesClass::IPrime, MesClass::IIIPrime];

    pub fn is_primed(self) -> bool {
        matches!(self, MesClass::IPrime | MesClass::IIIPrime)
    }

    /// The class before `σ`.
    pub fn base(self) -> MesClass {
        match self {
            MesClass::IPrime => MesClass::I,
            MesClass::IIIPrime => MesClass::III,
            c => c,
        }
    }

    pub fn is_parametric(self) -> bool {
        self.base() == MesClass::I
    }

    /// Number of template sequences in the class.
    pub fn sequence_count(self) -> usize {
        if self.is_parametric() {
            3
        } else {
            6
        }
    }

    fn key(self) -> &'static str {
        match self.base() {
            MesClass::I => "I",
            MesClass::II => "II",
            MesClass::III => "III",
            MesClass::IV => "IV",
            _ => "V",
        }
    }
}

impl fmt::Display for MesClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.key(), if self.is_primed() { "'" } else { "" })
    }
}

#[derive(Deserialize)]
struct TemplateFile {
    parametric: BTreeMap<String, Vec<Vec<[i64; 3]>>>,
    fixed: BTreeMap<String, Vec<Vec<[i64; 2]>>>,
}

fn templates() -> &'static TemplateFile {
    static DATA: OnceLock<TemplateFile> = OnceLock::new();
    DATA.get_or_init(|| {
        serde_json::from_str(include_str!("../data/x2_templates.json")).expect("bundled template file parses")
    })
}

/// Template sequence `index` (1-based) of a class, with parameter `a` for
/// class I, before twisting.
pub fn template(class: MesClass, index: usize, a: Option<i64>) -> Result<Vec<LineBundle>> {
    let data = templates();
    let idx = index.checked_sub(1).filter(|&k| k < class.sequence_count()).ok_or(Error::OutOfRange(index))?;
    let base: Vec<LineBundle> = if class.is_parametric() {
        let a = a.ok_or_else(|| Error::InvalidSpec("class I needs a parameter".into()))?;
        data.parametric[class.key()][idx].iter().map(|&[i, j, k]| LineBundle::new(i + k * a, j)).collect()
    } else {
        data.fixed[class.key()][idx].iter().map(|&p| p.into()).collect()
    };
    Ok(if class.is_primed() { base.iter().map(|p| p.swapped()).collect() } else { base })
}

/// Recognised class of a MES on `X₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MesClassLabel {
    pub class: MesClass,
    /// 1-based position in the class's helix list.
    pub helix_index: usize,
    pub sigma_applied: bool,
    pub twist: LineBundle,
    pub parameter: Option<i64>,
}

impl fmt::Display for MesClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class {} seq {}", self.class, self.helix_index)?;
        if let Some(a) = self.parameter {
            write!(f, " a={a}")?;
        }
        write!(f, " twist {}", self.twist)
    }
}

/// The labelled template sequence, twisted: an exceptional order of the set.
pub fn reconstruct(label: &MesClassLabel) -> Result<Vec<LineBundle>> {
    Ok(template(label.class, label.helix_index, label.parameter)?.into_iter().map(|p| p + label.twist).collect())
}

/// First class in [`MesClass::PRIORITY`] with a template equal to the set up
/// to twist.
pub fn classify(bundles: &[LineBundle]) -> Result<MesClassLabel> {
    if bundles.len() != 6 {
        return Err(Error::Unclassified);
    }
    let key = canonical_key(bundles);
    let min = *bundles.iter().min_by_key(|p| p.vertical_key()).expect("six points");
    let spread = bundles.iter().flat_map(|p| [p.i - min.i, p.j - min.j]).map(i64::abs).max().unwrap_or(0);
    let params: Vec<Option<i64>> = (-(2 * spread + 4)..=2 * spread + 4).map(Some).collect();
    for class in MesClass::PRIORITY {
        let choices: &[Option<i64>] = if class.is_parametric() { &params } else { &[None] };
        for index in 1..=class.sequence_count() {
            for &a in choices {
                let seq = template(class, index, a)?;
                if canonical_key(&seq) == key {
                    let tmin = *seq.iter().min_by_key(|p| p.vertical_key()).expect("six points");
                    return Ok(MesClassLabel {
                        class,
                        helix_index: index,
                        sigma_applied: class.is_primed(),
                        twist: min - tmin,
                        parameter: a,
                    });
                }
            }
        }
    }
    Err(Error::Unclassified)
}

/// `F ∖ Eff` for a sequence, as 1-based index pairs in the given order.
pub fn pf0_table(seq: &[LineBundle]) -> Result<BTreeSet<(usize, usize)>> {
    let set = ExceptionalSet::new(x2(), seq.to_vec())?;
    set.proper_f()
}

/// `F ∖ Eff` of a labelled class member, indexed along its template order.
pub fn pf0_of_label(label: &MesClassLabel) -> Result<BTreeSet<(usize, usize)>> {
    pf0_table(&reconstruct(label)?)
}

/// Every helix rotation (as many as the length) is strongly exceptional.
pub fn strongly_cyclic(spec: &VarietySpec, seq: &[LineBundle]) -> Result<bool> {
    let mut cur = seq.to_vec();
    for _ in 0..seq.len() {
        if !ExceptionalSet::new(spec.clone(), cur.clone())?.is_strongly_exceptional()? {
            return Ok(false);
        }
        cur = crate::mutation::helix_right(spec, &cur)?;
    }
    Ok(true)
}

/// Every template (all classes, indices, and class-I parameters up to
/// `|a| ≤ bound`) normalised to the enumeration window convention.
pub fn template_keys(a_bound: i64) -> Result<BTreeMap<Vec<LineBundle>, Vec<MesClassLabel>>> {
    let mut out: BTreeMap<Vec<LineBundle>, Vec<MesClassLabel>> = BTreeMap::new();
    for class in MesClass::PRIORITY {
        let params: Vec<Option<i64>> =
            if class.is_parametric() { (-a_bound..=a_bound).map(Some).collect() } else { vec![None] };
        for index in 1..=class.sequence_count() {
            for &a in &params {
                let seq = template(class, index, a)?;
                let key = canonical_key(&seq);
                let tmin = *seq.iter().min_by_key(|p| p.vertical_key()).expect("six points");
                out.entry(key).or_default().push(MesClassLabel {
                    class,
                    helix_index: index,
                    sigma_applied: class.is_primed(),
                    twist: -tmin,
                    parameter: a,
                });
            }
        }
    }
    Ok(out)
}

/// Whether a canonical key lies in the enumeration window.
pub fn fits_window(key: &[LineBundle], w: i64) -> bool {
    key.iter().all(|p| (-w..=w).contains(&p.i) && (0..=w).contains(&p.j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::helix_right;

    fn lbs(v: &[(i64, i64)]) -> Vec<LineBundle> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn colours() {
        assert_eq!(color_of(LineBundle::new(2, 0)), ColorClass::Blue);
        assert_eq!(color_of(LineBundle::new(0, 1)), ColorClass::Red);
        assert_eq!(color_of(LineBundle::new(1, 2)), ColorClass::Green);
        assert_eq!(color_of(LineBundle::new(4, 4)), ColorClass::Mixed);
        assert_eq!(color_of(LineBundle::ZERO), ColorClass::NonImmaculate);
        assert_eq!(color_of(LineBundle::new(2, 2)), ColorClass::NonImmaculate);
    }

    #[test]
    fn colours_match_negated_immaculate_strips() {
        // Residues hit by −Imm inside a period box, per strip.
        let spec = x2();
        let strip = |i: i64, j: i64| [j == -1, i == -1, i + j == -2];
        let mut hits: BTreeMap<QuotientClass, BTreeSet<usize>> = BTreeMap::new();
        for i in -9..=9 {
            for j in -9..=9 {
                if is_immaculate(&spec, LineBundle::new(i, j)) {
                    for (k, on) in strip(i, j).into_iter().enumerate() {
                        if on {
                            hits.entry(residue(2, LineBundle::new(-i, -j))).or_default().insert(k);
                        }
                    }
                }
            }
        }
        for (q, strips) in hits {
            let expected = match strips.iter().copied().collect::<Vec<_>>().as_slice() {
                [0] => ColorClass::Red,
                [1] => ColorClass::Green,
                [2] => ColorClass::Blue,
                _ => ColorClass::Mixed,
            };
            assert_eq!(color_of(LineBundle::new(q.0, q.1)), expected, "{q:?}");
        }
    }

    #[test]
    fn templates_are_exceptional_helix_orbits() {
        let spec = x2();
        for class in [MesClass::II, MesClass::III, MesClass::IV, MesClass::V] {
            for k in 1..=6 {
                let seq = template(class, k, None).unwrap();
                assert!(crate::poset::is_exceptional_sequence(&spec, &seq).unwrap());
                let next = helix_right(&spec, &seq).unwrap();
                assert_eq!(canonical_key(&next), canonical_key(&template(class, k % 6 + 1, None).unwrap()));
            }
        }
        for a in -6..=6 {
            let s1 = template(MesClass::I, 1, Some(a)).unwrap();
            let s3 = template(MesClass::I, 3, Some(a)).unwrap();
            assert_eq!(canonical_key(&helix_right(&spec, &s1).unwrap()), canonical_key(&template(MesClass::I, 2, Some(a)).unwrap()));
            assert_eq!(canonical_key(&helix_right(&spec, &s3).unwrap()), canonical_key(&template(MesClass::I, 1, Some(2 - a)).unwrap()));
        }
    }

    #[test]
    fn helix_of_first_class_ii_member() {
        let spec = x2();
        let s1 = template(MesClass::II, 1, None).unwrap();
        let shifted: Vec<LineBundle> = helix_right(&spec, &s1).unwrap().into_iter().map(|p| p - LineBundle::new(0, 1)).collect();
        assert_eq!(shifted, lbs(&[(0, 0), (1, 0), (0, 1), (1, 1), (1, 2), (2, 1)]));
    }

    #[test]
    fn classification_examples() {
        let s = template(MesClass::I, 1, Some(7)).unwrap();
        let label = classify(&s).unwrap();
        assert_eq!((label.class, label.parameter), (MesClass::I, Some(7)));
        let sig: Vec<LineBundle> = template(MesClass::III, 1, None).unwrap().iter().map(|p| p.swapped() + LineBundle::new(3, -2)).collect();
        let label = classify(&sig).unwrap();
        assert_eq!(label.class, MesClass::IIIPrime);
        let back: BTreeSet<LineBundle> = reconstruct(&label).unwrap().into_iter().collect();
        assert_eq!(back, sig.into_iter().collect());
        assert!(classify(&lbs(&[(0, 0), (1, 0), (2, 0)])).is_err());
    }

    #[test]
    fn class_ii_fourth_sequence_is_enumerated_and_round_trips() {
        let all = enumerate_mes_x2(MIN_WINDOW, Exec::default()).unwrap();
        let fourth = canonical_key(&template(MesClass::II, 4, None).unwrap());
        assert!(all.iter().any(|s| canonical_key(s.bundles()) == fourth));
        for s in &all {
            assert!(s.is_maximal());
            let label = classify(s.bundles()).unwrap();
            let rebuilt: BTreeSet<LineBundle> = reconstruct(&label).unwrap().into_iter().collect();
            assert_eq!(rebuilt, s.bundles().iter().copied().collect());
        }
    }

    #[test]
    fn gap_points_on_templates() {
        let spec = x2();
        let seq = template(MesClass::II, 1, None).unwrap();
        let gaps = gap_points(&spec, &seq).unwrap();
        assert_eq!(gaps.gaps.len(), 3);
        // Along each diagonal the step-1 point precedes the step-2 point.
        for (x, &a) in seq.iter().enumerate() {
            for &b in &seq[..x] {
                let (sa, sb) = (diagonal_step(2, &gaps, a), diagonal_step(2, &gaps, b));
                let same = diagonal_of(2, residue(2, a)) == diagonal_of(2, residue(2, b));
                assert!(!(same && sb > sa));
            }
        }
        assert!(gap_points(&spec, &seq[..5]).is_err());
    }

    #[test]
    fn pf0_examples() {
        assert!(pf0_table(&template(MesClass::I, 1, Some(3)).unwrap()).unwrap().is_empty());
        assert_eq!(pf0_table(&template(MesClass::IV, 1, None).unwrap()).unwrap(), BTreeSet::from([(3, 4)]));
        for k in 1..=6 {
            assert!(pf0_table(&template(MesClass::II, k, None).unwrap()).unwrap().is_empty());
        }
    }

    #[test]
    fn strong_cyclicity() {
        let spec = x2();
        assert!(strongly_cyclic(&spec, &template(MesClass::II, 1, None).unwrap()).unwrap());
        for k in 1..=3 {
            assert!(strongly_cyclic(&spec, &template(MesClass::I, k, Some(1)).unwrap()).unwrap());
        }
        assert!(!strongly_cyclic(&spec, &template(MesClass::III, 1, None).unwrap()).unwrap());
    }
}
