//! Sequence operators at line-bundle level: helixing, orthogonal swaps,
//! Lex/Helex, Orlov-type recognition, the two certified `X₂` rewrite rules,
//! and reduction of `X₂` MES to Orlov type with replayable traces.
//!
//! Shifts are tracked in a per-position ledger for audit only; verification
//! ignores them.

use serde::{Deserialize, Serialize};

use crate::cohomology::is_immaculate;
use crate::error::{Error, Result};
use crate::poset::is_exceptional_sequence;
use crate::variety::{LineBundle, VarietySpec};
use crate::x2::{classify, reconstruct, template, MesClass, MesClassLabel};

fn verified(spec: &VarietySpec, seq: Vec<LineBundle>, what: &str) -> Result<Vec<LineBundle>> {
    if is_exceptional_sequence(spec, &seq)? {
        Ok(seq)
    } else {
        Err(Error::NotExceptional(format!("{what} produced {seq:?}")))
    }
}

fn require_exceptional(spec: &VarietySpec, seq: &[LineBundle]) -> Result<()> {
    if is_exceptional_sequence(spec, seq)? {
        Ok(())
    } else {
        Err(Error::NotExceptional(format!("{seq:?}")))
    }
}

/// `(E₁,…,E_n) ↦ (E₂,…,E_n, E₁ ⊗ K⁻¹)`.
pub fn helix_right(spec: &VarietySpec, seq: &[LineBundle]) -> Result<Vec<LineBundle>> {
    require_exceptional(spec, seq)?;
    let Some((&first, rest)) = seq.split_first() else {
        return Ok(Vec::new());
    };
    let mut out = rest.to_vec();
    out.push(first - spec.canonical());
    verified(spec, out, "helix_right")
}

/// `(E₁,…,E_n) ↦ (E_n ⊗ K, E₁,…,E_{n−1})`.
pub fn helix_left(spec: &VarietySpec, seq: &[LineBundle]) -> Result<Vec<LineBundle>> {
    require_exceptional(spec, seq)?;
    let Some((&last, rest)) = seq.split_last() else {
        return Ok(Vec::new());
    };
    let out = std::iter::once(last + spec.canonical()).chain(rest.iter().copied()).collect();
    verified(spec, out, "helix_left")
}

/// Both differences of the pair are immaculate.
pub fn mutually_orthogonal(spec: &VarietySpec, a: LineBundle, b: LineBundle) -> bool {
    is_immaculate(spec, a - b) && is_immaculate(spec, b - a)
}

/// Exchange positions `i` and `i+1`; needs mutual orthogonality.
pub fn swap_orthogonal(spec: &VarietySpec, seq: &[LineBundle], i: usize) -> Result<Vec<LineBundle>> {
    require_exceptional(spec, seq)?;
    if i + 1 >= seq.len() {
        return Err(Error::OutOfRange(i));
    }
    if !mutually_orthogonal(spec, seq[i], seq[i + 1]) {
        return Err(Error::NotOrthogonal(seq[i], seq[i + 1]));
    }
    let mut out = seq.to_vec();
    out.swap(i, i + 1);
    verified(spec, out, "swap_orthogonal")
}

/// Adjacent swaps (as positions) sorting `seq` by `key`, each certified.
pub fn sorting_swaps<K: Ord>(
    spec: &VarietySpec,
    seq: &[LineBundle],
    key: impl Fn(LineBundle) -> K,
) -> Result<(Vec<LineBundle>, Vec<usize>)> {
    require_exceptional(spec, seq)?;
    let mut cur = seq.to_vec();
    let mut swaps = Vec::new();
    for end in (1..cur.len()).rev() {
        for i in 0..end {
            if key(cur[i]) > key(cur[i + 1]) {
                if !mutually_orthogonal(spec, cur[i], cur[i + 1]) {
                    return Err(Error::NotOrthogonal(cur[i], cur[i + 1]));
                }
                cur.swap(i, i + 1);
                swaps.push(i);
            }
        }
    }
    Ok((verified(spec, cur, "lex")?, swaps))
}

/// Vertical-lex order reached through orthogonal swaps.
pub fn lex_operator(spec: &VarietySpec, seq: &[LineBundle]) -> Result<Vec<LineBundle>> {
    sorting_swaps(spec, seq, LineBundle::vertical_key).map(|(s, _)| s)
}

/// `helix_right ∘ lex`.
pub fn helex(spec: &VarietySpec, seq: &[LineBundle]) -> Result<Vec<LineBundle>> {
    helix_right(spec, &lex_operator(spec, seq)?)
}

/// Rows of horizontal chains: `fiber_dim + 1` consecutive rows in weakly
/// increasing order, each an increasing chain of `ℓ + 1` consecutive points.
pub fn is_orlov_type(spec: &VarietySpec, seq: &[LineBundle]) -> bool {
    let chain = spec.ell() as usize + 1;
    let rows = spec.fiber_dim() as usize + 1;
    if seq.len() != chain * rows {
        return false;
    }
    seq.chunks(chain).enumerate().all(|(r, block)| {
        block.iter().all(|p| p.j == seq[0].j + r as i64)
            && block.windows(2).all(|w| w[1].i == w[0].i + 1)
    })
}

/// Orlov type for the second projection: `σ` of the sequence is Orlov type.
pub fn is_column_orlov_type(spec: &VarietySpec, seq: &[LineBundle]) -> bool {
    let swapped: Vec<LineBundle> = seq.iter().map(|p| p.swapped()).collect();
    is_orlov_type(spec, &swapped)
}

/// The two `X₂` rewrite patterns relative to a twist `t`: moving the first
/// entry right turns `before` into `after`.
/// Three offsets relative to the pivot bundle.
type Pattern = [(i64, i64); 3];

const BANANAS: [(Pattern, Pattern); 2] = [
    ([(-2, 1), (-1, -1), (-1, 0)], [(-1, -1), (-1, 0), (0, 0)]),
    ([(0, 0), (1, 0), (1, 1)], [(1, 0), (1, 1), (2, -1)]),
];

fn require_x2(spec: &VarietySpec) -> Result<()> {
    match spec {
        VarietySpec::Cotangent { ell: 2 } => Ok(()),
        _ => Err(Error::Unsupported("banana rewrites exist on X₂ only".into())),
    }
}

fn rewrite(seq: &[LineBundle], i: usize, from: &[(i64, i64); 3], to: &[(i64, i64); 3]) -> Option<Vec<LineBundle>> {
    let triple = seq.get(i..i + 3)?;
    let t = triple[0] - LineBundle::from(from[0]);
    let matches = triple.iter().zip(from).all(|(&p, &q)| p == t + q.into());
    matches.then(|| {
        let mut out = seq.to_vec();
        for (k, &q) in to.iter().enumerate() {
            out[i + k] = t + q.into();
        }
        out
    })
}

/// Move entry `i` past the next two through a banana pattern.
pub fn banana_right(spec: &VarietySpec, seq: &[LineBundle], i: usize) -> Result<Vec<LineBundle>> {
    require_x2(spec)?;
    require_exceptional(spec, seq)?;
    let out = BANANAS.iter().find_map(|(from, to)| rewrite(seq, i, from, to)).ok_or(Error::PatternMismatch(i))?;
    verified(spec, out, "banana_right")
}

/// Move entry `i + 2` before the previous two; inverse of [`banana_right`].
pub fn banana_left(spec: &VarietySpec, seq: &[LineBundle], i: usize) -> Result<Vec<LineBundle>> {
    require_x2(spec)?;
    require_exceptional(spec, seq)?;
    let out = BANANAS.iter().find_map(|(from, to)| rewrite(seq, i, to, from)).ok_or(Error::PatternMismatch(i))?;
    verified(spec, out, "banana_left")
}

/// One rewrite step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "arg", rename_all = "snake_case")]
pub enum Step {
    HelixLeft,
    HelixRight,
    Swap(usize),
    Lex,
    BananaLeft(usize),
    BananaRight(usize),
    Twist(LineBundle),
}

impl Step {
    pub fn apply(self, spec: &VarietySpec, seq: &[LineBundle]) -> Result<Vec<LineBundle>> {
        match self {
            Step::HelixLeft => helix_left(spec, seq),
            Step::HelixRight => helix_right(spec, seq),
            Step::Swap(i) => swap_orthogonal(spec, seq, i),
            Step::Lex => lex_operator(spec, seq),
            Step::BananaLeft(i) => banana_left(spec, seq, i),
            Step::BananaRight(i) => banana_right(spec, seq, i),
            Step::Twist(t) => Ok(seq.iter().map(|&p| p + t).collect()),
        }
    }

    /// Permute and update the audit shift ledger alongside the sequence.
    fn update_shifts(self, shifts: &mut [i64]) {
        match self {
            Step::HelixLeft => shifts.rotate_right(1),
            Step::HelixRight => shifts.rotate_left(1),
            Step::Swap(i) => shifts.swap(i, i + 1),
            Step::BananaRight(i) => {
                shifts[i..i + 3].rotate_left(1);
                shifts[i + 2] += 1;
            }
            Step::BananaLeft(i) => {
                shifts[i..i + 3].rotate_right(1);
                shifts[i] -= 1;
            }
            Step::Lex | Step::Twist(_) => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: Step,
    pub before: Vec<LineBundle>,
    pub after: Vec<LineBundle>,
}

/// Which projection the final sequence is Orlov type for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrlovKind {
    Rows,
    Columns,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    #[serde(skip)]
    pub spec: Option<VarietySpec>,
    pub label: Option<MesClassLabel>,
    pub initial: Vec<LineBundle>,
    pub steps: Vec<TraceStep>,
    /// Audit-only shift per final position.
    pub shifts: Vec<i64>,
    pub orlov: Option<OrlovKind>,
}

impl DerivationTrace {
    pub fn new(spec: &VarietySpec, initial: Vec<LineBundle>) -> Self {
        let shifts = vec![0; initial.len()];
        DerivationTrace { spec: Some(spec.clone()), label: None, initial, steps: Vec::new(), shifts, orlov: None }
    }

    pub fn current(&self) -> &[LineBundle] {
        self.steps.last().map_or(&self.initial, |s| &s.after)
    }

    /// Apply and record a step; its precondition is checked by the operator.
    pub fn push(&mut self, spec: &VarietySpec, step: Step) -> Result<()> {
        let before = self.current().to_vec();
        let after = step.apply(spec, &before)?;
        step.update_shifts(&mut self.shifts);
        self.steps.push(TraceStep { step, before, after });
        Ok(())
    }

    /// Re-run every step from the initial sequence and compare.
    pub fn replay(&self, spec: &VarietySpec) -> Result<Vec<LineBundle>> {
        let mut cur = self.initial.clone();
        for (k, s) in self.steps.iter().enumerate() {
            if s.before != cur {
                return Err(Error::Internal(format!("trace step {k} starts from a different sequence")));
            }
            cur = s.step.apply(spec, &cur)?;
            if s.after != cur {
                return Err(Error::Internal(format!("trace step {k} does not reproduce its result")));
            }
        }
        Ok(cur)
    }

    pub fn final_sequence(&self) -> &[LineBundle] {
        self.current()
    }
}

/// Class representative at which the per-class script runs (1-based).
fn script_index(class: MesClass) -> usize {
    if class.is_parametric() {
        1
    } else {
        4
    }
}

/// Classify, rotate to the class representative, then swap or banana into
/// Orlov type. Primed classes end in Orlov type for the second projection.
pub fn reduce_to_orlov(bundles: &[LineBundle]) -> Result<DerivationTrace> {
    let spec = VarietySpec::cotangent(2)?;
    let label = classify(bundles)?;
    let mut trace = DerivationTrace::new(&spec, reconstruct(&label)?);
    trace.label = Some(label);
    if label.twist != LineBundle::ZERO {
        trace.push(&spec, Step::Twist(-label.twist))?;
    }
    let target = script_index(label.class);
    let (helix, count) = if label.class.is_parametric() {
        (Step::HelixLeft, label.helix_index - target)
    } else {
        (Step::HelixRight, (target + 6 - label.helix_index) % 6)
    };
    for _ in 0..count {
        trace.push(&spec, helix)?;
    }
    let representative = template(label.class, target, label.parameter)?;
    let offset = trace.current()[0] - representative[0];
    if offset != LineBundle::ZERO {
        trace.push(&spec, Step::Twist(-offset))?;
    }
    if trace.current() != representative.as_slice() {
        return Err(Error::Internal(format!("rotation of {label} missed its representative")));
    }
    match label.class.base() {
        MesClass::I => {}
        MesClass::II | MesClass::III => {
            let (_, swaps) = if label.class.is_primed() {
                sorting_swaps(&spec, trace.current(), LineBundle::horizontal_key)?
            } else {
                sorting_swaps(&spec, trace.current(), LineBundle::vertical_key)?
            };
            for i in swaps {
                trace.push(&spec, Step::Swap(i))?;
            }
        }
        MesClass::IV => trace.push(&spec, Step::BananaRight(2))?,
        _ => trace.push(&spec, Step::BananaLeft(1))?,
    }
    let end = trace.current();
    trace.orlov = if is_orlov_type(&spec, end) {
        Some(OrlovKind::Rows)
    } else if is_column_orlov_type(&spec, end) {
        Some(OrlovKind::Columns)
    } else {
        return Err(Error::Internal(format!("script for {label} did not end in Orlov type")));
    };
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::vertical_lex;
    use proptest::prelude::*;

    fn lbs(v: &[(i64, i64)]) -> Vec<LineBundle> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn x2() -> VarietySpec {
        VarietySpec::cotangent(2).unwrap()
    }

    #[test]
    fn helix_inverse_pair() {
        let spec = x2();
        let s = template(MesClass::III, 2, None).unwrap();
        assert_eq!(helix_left(&spec, &helix_right(&spec, &s).unwrap()).unwrap(), s);
        assert_eq!(helix_right(&spec, &helix_left(&spec, &s).unwrap()).unwrap(), s);
        let toric = VarietySpec::toric(2, 1, &[0, -1]).unwrap();
        let orlov = lbs(&[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]);
        // Helixing keeps maximality but leaves Orlov type: the rows become 2, 3, 1.
        let rotated = lex_operator(&toric, &helix_right(&toric, &orlov).unwrap()).unwrap();
        assert!(crate::poset::ExceptionalSet::new(toric.clone(), rotated.clone()).unwrap().is_maximal());
        assert!(!is_orlov_type(&toric, &rotated));
    }

    #[test]
    fn swaps() {
        let spec = x2();
        let seq = lbs(&[(0, 0), (1, 0), (-1, 1), (2, 0), (0, 1), (1, 1)]);
        let once = swap_orthogonal(&spec, &seq, 2).unwrap();
        assert_eq!(swap_orthogonal(&spec, &once, 2).unwrap(), seq);
        assert!(matches!(swap_orthogonal(&spec, &seq, 0), Err(Error::NotOrthogonal(..))));
        assert!(mutually_orthogonal(&spec, LineBundle::new(1, -1), LineBundle::new(0, 2)));
        assert!(mutually_orthogonal(&spec, LineBundle::new(1, 1), LineBundle::new(0, 2)));
    }

    #[test]
    fn banana_displays() {
        let spec = x2();
        let a = lbs(&[(-2, 1), (-1, -1), (-1, 0)]);
        let b = banana_right(&spec, &a, 0).unwrap();
        assert_eq!(b, lbs(&[(-1, -1), (-1, 0), (0, 0)]));
        assert_eq!(banana_left(&spec, &b, 0).unwrap(), a);
        let c = lbs(&[(0, 0), (1, 0), (1, 1)]);
        let d = banana_right(&spec, &c, 0).unwrap();
        assert_eq!(d, lbs(&[(1, 0), (1, 1), (2, -1)]));
        assert_eq!(banana_left(&spec, &d, 0).unwrap(), c);
        assert!(matches!(banana_right(&spec, &d, 0), Err(Error::PatternMismatch(0))));
        let toric = VarietySpec::toric(2, 1, &[0, -1]).unwrap();
        assert!(banana_right(&toric, &c, 0).is_err());
    }

    #[test]
    fn orlov_recognition() {
        let spec = x2();
        assert!(is_orlov_type(&spec, &template(MesClass::I, 1, Some(3)).unwrap()));
        assert!(!is_orlov_type(&spec, &lbs(&[(0, 0), (1, 0), (2, 0)])));
        assert!(!is_orlov_type(&spec, &template(MesClass::IV, 1, None).unwrap()));
    }

    #[test]
    fn per_class_reductions() {
        let spec = x2();
        let one = reduce_to_orlov(&template(MesClass::I, 1, Some(-2)).unwrap()).unwrap();
        assert!(one.steps.is_empty());
        let two = reduce_to_orlov(&template(MesClass::II, 4, None).unwrap()).unwrap();
        assert!(two.steps.iter().all(|s| matches!(s.step, Step::Swap(_))));
        let four = reduce_to_orlov(&template(MesClass::IV, 4, None).unwrap()).unwrap();
        assert_eq!(four.steps.len(), 1);
        assert_eq!(four.final_sequence(), lbs(&[(0, 0), (1, 0), (2, 0), (2, 1), (3, 1), (4, 1)]).as_slice());
        assert_eq!(four.shifts, vec![0, 0, 0, 0, 1, 0]);
        for class in MesClass::PRIORITY {
            for k in 1..=class.sequence_count() {
                let seq: Vec<LineBundle> =
                    template(class, k, class.is_parametric().then_some(4)).unwrap().into_iter().map(|p| p + LineBundle::new(-3, 5)).collect();
                let trace = reduce_to_orlov(&seq).unwrap();
                assert_eq!(trace.replay(&spec).unwrap(), trace.final_sequence());
                let expected = if class.is_primed() { OrlovKind::Columns } else { OrlovKind::Rows };
                assert_eq!(trace.orlov, Some(expected), "{class} {k}");
            }
        }
    }

    #[test]
    fn lex_on_scrambled_toric_order() {
        let spec = VarietySpec::toric(4, 3, &[0, -1, -1]).unwrap();
        let t = spec.as_toric().unwrap().clone();
        let set = crate::toric::enumerate_mes(&t, 1, crate::exec::Exec::Sequential).unwrap().swap_remove(7);
        let orders = set.exceptional_orders(50).unwrap().orders;
        for order in orders {
            let sorted = lex_operator(&spec, order.bundles()).unwrap();
            assert_eq!(sorted, vertical_lex(order.bundles()));
            assert_eq!(helex(&spec, order.bundles()).unwrap(), helix_right(&spec, &sorted).unwrap());
        }
    }

    proptest! {
        #[test]
        fn helix_orbit_returns_twisted(class_ix in 0usize..7, k in 1usize..=6, a in -5i64..=5) {
            let class = MesClass::PRIORITY[class_ix];
            let k = (k - 1) % class.sequence_count() + 1;
            let spec = x2();
            let seq = template(class, k, class.is_parametric().then_some(a)).unwrap();
            let mut cur = seq.clone();
            for _ in 0..6 {
                cur = helix_right(&spec, &cur).unwrap();
            }
            let twisted: Vec<LineBundle> = seq.iter().map(|&p| p - spec.canonical()).collect();
            prop_assert_eq!(cur, twisted);
        }
    }
}
