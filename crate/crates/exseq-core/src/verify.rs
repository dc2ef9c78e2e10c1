//! Regression harness: one runnable check per acceptance criterion, each
//! returning a [`Verdict`] with structured details and, on failure, a
//! minimal counterexample.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use serde_json::{json, Value};

use crate::chow::{divide_total_chern, verify_banana_ses, ChowRing};
use crate::cohomology::oracle::{cotangent_report, DiscrepancyReport};
use crate::cohomology::{h_dims, immaculate_pieces, nonzero_degree_mask};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::mutation::{is_column_orlov_type, is_orlov_type, reduce_to_orlov, OrlovKind};
use crate::poset::{is_exceptional_sequence, ExceptionalSet};
use crate::rouquier::{
    anticanonical_nef, compute_i0, orlov_tilting, rouquier_dimension, uniform_tilting, RouquierDimension,
    DEFAULT_GAP_WINDOW,
};
use crate::toric::{acyclicity_threshold, canonical_key, decompose_layers, enumerate_mes};
use crate::variety::{LineBundle, ToricSpec, VarietySpec};
use crate::x2::{
    classify, enumerate_mes_x2, fits_window, gap_points, pf0_table, strongly_cyclic, template, template_keys,
    MesClass, DEFAULT_WINDOW,
};

/// Square window for cohomology scans.
pub const COHOMOLOGY_WINDOW: i64 = 12;
/// Offset window for toric enumeration.
pub const TORIC_OFFSETS: i64 = 3;
/// Number of acceptance criteria.
pub const CRITERIA: u8 = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub criterion: u8,
    pub claim: &'static str,
    pub status: Status,
    pub summary: String,
    /// First failing instance; present exactly when the status is `Fail`.
    pub counterexample: Option<Value>,
    pub details: Value,
}

impl Verdict {
    fn new(criterion: u8, summary: String, failures: Vec<Value>, details: Value) -> Self {
        let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
        Verdict {
            criterion,
            claim: claim_id(criterion),
            status,
            summary,
            counterexample: failures.into_iter().next(),
            details,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] criterion {:>2} {:<24} {}", self.status, self.criterion, self.claim, self.summary)
    }
}

/// Stable claim identifier of a criterion.
pub fn claim_id(criterion: u8) -> &'static str {
    match criterion {
        1 => "cohomology-sanity",
        2 => "x2-immaculate-strips",
        3 => "poset-linear-extensions",
        4 => "toric-layer-criteria",
        5 => "toric-acyclic-threshold",
        6 => "x2-classification",
        7 => "x2-strongness-tables",
        8 => "x2-orlov-reduction",
        9 => "x2-rewrite-sequence",
        10 => "rouquier-dimension",
        11 => "x2-gap-points",
        _ => "unknown",
    }
}

/// Criterion number for a claim id or a plain number.
pub fn parse_section(id: &str) -> Option<u8> {
    id.parse::<u8>()
        .ok()
        .filter(|n| (1..=CRITERIA).contains(n))
        .or_else(|| (1..=CRITERIA).find(|&n| claim_id(n) == id))
}

/// Shared state: the `X₂` window enumeration is computed once.
pub struct Verifier {
    exec: Exec,
    x2_sets: OnceLock<Result<Vec<ExceptionalSet>>>,
}

impl Verifier {
    pub fn new(exec: Exec) -> Self {
        Verifier { exec, x2_sets: OnceLock::new() }
    }

    fn x2_sets(&self) -> Result<&[ExceptionalSet]> {
        self.x2_sets
            .get_or_init(|| enumerate_mes_x2(DEFAULT_WINDOW, self.exec))
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    pub fn run(&self, criterion: u8) -> Result<Verdict> {
        match criterion {
            1 => self.cohomology_sanity(),
            2 => self.immaculate_strips().map(|(v, _)| v),
            3 => self.poset_extensions(),
            4 => self.layer_criteria(),
            5 => Ok(self.threshold()),
            6 => self.classification(),
            7 => self.strongness_tables(),
            8 => self.orlov_reduction(),
            9 => Ok(self.rewrite_sequence()),
            10 => self.rouquier(),
            11 => self.gap_points(),
            n => Err(Error::OutOfRange(n as usize)),
        }
    }

    pub fn run_all(&self) -> Result<Vec<Verdict>> {
        (1..=CRITERIA).map(|n| self.run(n)).collect()
    }

    /// Serre duality everywhere, and region table against dimensions.
    pub fn cohomology_sanity(&self) -> Result<Verdict> {
        let specs = vec![
            VarietySpec::toric(1, 1, &[0, -2])?,
            VarietySpec::toric(4, 3, &[0, -1, -1])?,
            VarietySpec::toric(4, 3, &[0, 0, 0])?,
            VarietySpec::cotangent(2)?,
            VarietySpec::cotangent(3)?,
        ];
        let points = window_points(COHOMOLOGY_WINDOW);
        let mut failures = Vec::new();
        for spec in &specs {
            let k = spec.canonical();
            let bad = self.exec.flat_map(&points, |&l| {
                let h = h_dims(spec, l);
                let mut out = Vec::new();
                if h.reversed() != h_dims(spec, k - l) {
                    out.push(json!({"spec": spec.to_string(), "bundle": l, "check": "serre"}));
                }
                let mask = h.nonzero_degrees().fold(0u64, |m, d| m | 1 << d);
                if mask != nonzero_degree_mask(spec, l) {
                    out.push(json!({"spec": spec.to_string(), "bundle": l, "check": "regions"}));
                }
                out
            });
            failures.extend(bad);
        }
        let checked = specs.len() * points.len();
        Ok(Verdict::new(
            1,
            format!("{checked} bundles, {} violations", failures.len()),
            failures,
            json!({"window": COHOMOLOGY_WINDOW, "specs": specs.iter().map(ToString::to_string).collect::<Vec<_>>()}),
        ))
    }

    /// Strip description against region logic on `X₂`, plus the oracle
    /// report for the magnitude formula.
    pub fn immaculate_strips(&self) -> Result<(Verdict, DiscrepancyReport)> {
        let spec = VarietySpec::cotangent(2)?;
        let pieces = immaculate_pieces(&spec);
        let failures: Vec<Value> = window_points(COHOMOLOGY_WINDOW)
            .into_iter()
            .filter(|&l| pieces.iter().any(|p| p.contains(l)) != (nonzero_degree_mask(&spec, l) == 0))
            .map(|l| json!({"bundle": l}))
            .collect();
        let report = cotangent_report(2, COHOMOLOGY_WINDOW, self.exec)?;
        let mut all = failures;
        if report.runtime_mismatches > 0 {
            all.push(json!({"runtime_mismatches": report.runtime_mismatches}));
        }
        let summary = format!(
            "strips agree; runtime/oracle mismatches {}, printed formula mismatches {}",
            report.runtime_mismatches, report.printed_magnitude_mismatches
        );
        let details = json!({
            "window": COHOMOLOGY_WINDOW,
            "printed_region_mismatches": report.printed_region_mismatches,
            "printed_magnitude_mismatches": report.printed_magnitude_mismatches,
        });
        Ok((Verdict::new(2, summary, all, details), report))
    }

    /// Exceptional permutations are exactly the linear extensions of `⟨F⟩`.
    pub fn poset_extensions(&self) -> Result<Verdict> {
        let sets = self.x2_sets()?;
        let failures = self.exec.try_map(sets, |set| {
            let brute: BTreeSet<Vec<LineBundle>> = permutations(set.len())
                .into_iter()
                .map(|p| p.iter().map(|&k| set.bundles()[k]).collect::<Vec<_>>())
                .filter(|seq| is_exceptional_sequence(set.spec(), seq).unwrap_or(false))
                .collect();
            let poset = set.poset()?;
            let extensions: BTreeSet<Vec<LineBundle>> = permutations(set.len())
                .into_iter()
                .filter(|p| poset.respected_by(p))
                .map(|p| p.iter().map(|&k| set.bundles()[k]).collect())
                .collect();
            let enumerated: BTreeSet<Vec<LineBundle>> =
                set.exceptional_orders(usize::MAX)?.orders.iter().map(|o| o.bundles().to_vec()).collect();
            Ok((brute != extensions || brute != enumerated).then(|| json!({"set": set.bundles()})))
        })?;
        let failures: Vec<Value> = failures.into_iter().flatten().collect();
        Ok(Verdict::new(
            3,
            format!("{} sets x 720 permutations, {} mismatches", sets.len(), failures.len()),
            failures,
            json!({"sets": sets.len()}),
        ))
    }

    /// Layer criteria against cohomological strongness and effectivity.
    pub fn layer_criteria(&self) -> Result<Verdict> {
        let mut failures = Vec::new();
        let mut counted = 0usize;
        for t in toric_grid() {
            let sets = enumerate_mes(&t, TORIC_OFFSETS, self.exec)?;
            counted += sets.len();
            let bad = self.exec.try_map(&sets, |s| {
                let d = decompose_layers(&t, s.bundles())?;
                let ok = d.strong_by_layers() == s.is_strongly_exceptional()?
                    && d.effective_by_layers() == s.is_effective()?;
                Ok((!ok).then(|| json!({"spec": format!("{t:?}"), "set": s.bundles()})))
            })?;
            failures.extend(bad.into_iter().flatten());
        }
        Ok(Verdict::new(
            4,
            format!("{counted} sets over {} specs, {} mismatches", toric_grid().len(), failures.len()),
            failures,
            json!({"offsets": TORIC_OFFSETS, "sets": counted}),
        ))
    }

    /// `ℓ ≥ αV` against the window scan, including two pinned instances.
    pub fn threshold(&self) -> Verdict {
        let grid = toric_grid();
        let mut failures: Vec<Value> = grid
            .iter()
            .map(|t| (t, acyclicity_threshold(t)))
            .filter(|(_, c)| !c.agrees())
            .map(|(t, c)| json!({"spec": format!("{t:?}"), "check": c}))
            .collect();
        let pinned = [((2, 2, vec![0, -2]), false), ((4, 3, vec![0, -1, -1]), true)];
        for ((ell, v, c), expected) in pinned {
            let t = ToricSpec::new(ell, v, &c).expect("valid pinned spec");
            let check = acyclicity_threshold(&t);
            if !check.agrees() || check.closed_form != expected {
                failures.push(json!({"spec": format!("{t:?}"), "expected": expected, "check": check}));
            }
        }
        Verdict::new(
            5,
            format!("{} specs plus 2 pinned, {} mismatches", grid.len(), failures.len()),
            failures,
            json!({"specs": grid.len()}),
        )
    }

    /// Enumeration equals the template list inside the window.
    pub fn classification(&self) -> Result<Verdict> {
        let sets = self.x2_sets()?;
        let templates = template_keys(2 * DEFAULT_WINDOW)?;
        let expected: BTreeSet<&Vec<LineBundle>> =
            templates.keys().filter(|k| fits_window(k, DEFAULT_WINDOW)).collect();
        let found: BTreeSet<Vec<LineBundle>> = sets.iter().map(|s| canonical_key(s.bundles())).collect();
        let mut failures: Vec<Value> = Vec::new();
        failures.extend(found.iter().filter(|k| !expected.contains(k)).map(|k| json!({"extra": k})));
        failures.extend(expected.iter().filter(|k| !found.contains(**k)).map(|k| json!({"missing": k})));
        let mut per_class: BTreeMap<String, usize> = BTreeMap::new();
        let mut parameters = BTreeSet::new();
        for s in sets {
            match classify(s.bundles()) {
                Ok(label) => {
                    *per_class.entry(label.class.to_string()).or_default() += 1;
                    if let Some(a) = label.parameter {
                        parameters.insert(a);
                    }
                }
                Err(_) => failures.push(json!({"unclassified": s.bundles()})),
            }
        }
        for class in MesClass::PRIORITY {
            if !per_class.contains_key(&class.to_string()) {
                failures.push(json!({"class_absent": class.to_string()}));
            }
        }
        Ok(Verdict::new(
            6,
            format!("{} sets, {} expected, {} discrepancies", found.len(), expected.len(), failures.len()),
            failures,
            json!({"per_class": per_class, "class_i_parameters": parameters}),
        ))
    }

    /// Computed `F ∖ Eff` and strongness against the printed tables.
    pub fn strongness_tables(&self) -> Result<Verdict> {
        let spec = VarietySpec::cotangent(2)?;
        let mut failures = Vec::new();
        let mut compared = 0usize;
        for entry in printed_pf0_entries() {
            let seq = template(entry.class, entry.index, entry.parameter)?;
            let computed = pf0_table(&seq)?;
            compared += 1;
            if computed != entry.pairs {
                failures.push(json!({
                    "class": entry.class.to_string(),
                    "sequence": entry.index,
                    "a": entry.parameter,
                    "printed": entry.pairs,
                    "computed": computed,
                }));
            }
        }
        for k in 1..=3 {
            for &a in class_i_samples().iter() {
                let seq = template(MesClass::I, k, Some(a))?;
                let strong = ExceptionalSet::new(spec.clone(), seq.clone())?.is_strongly_exceptional()?;
                let expected = if k == 1 { a >= 1 } else { a == 1 };
                compared += 1;
                if strong != expected {
                    failures.push(json!({"class": "I", "sequence": k, "a": a, "printed_strong": expected}));
                }
            }
            compared += 1;
            if !strongly_cyclic(&spec, &template(MesClass::I, k, Some(1))?)? {
                failures.push(json!({"class": "I", "sequence": k, "a": 1, "printed": "strongly cyclic"}));
            }
        }
        compared += 1;
        if !strongly_cyclic(&spec, &template(MesClass::II, 1, None)?)? {
            failures.push(json!({"class": "II", "printed": "strongly cyclic"}));
        }
        Ok(Verdict::new(
            7,
            format!("{compared} printed entries, {} disagree", failures.len()),
            failures.clone(),
            json!({"disagreements": failures}),
        ))
    }

    /// Every window MES reduces to Orlov type with a replayable trace.
    pub fn orlov_reduction(&self) -> Result<Verdict> {
        let sets = self.x2_sets()?;
        let spec = VarietySpec::cotangent(2)?;
        let outcomes = self.exec.map(sets, |s| {
            let fail = |why: String| Some(json!({"set": s.bundles(), "reason": why}));
            let trace = match reduce_to_orlov(s.bundles()) {
                Ok(t) => t,
                Err(e) => return fail(e.to_string()),
            };
            let end = trace.final_sequence();
            let shaped = match trace.orlov {
                Some(OrlovKind::Rows) => is_orlov_type(&spec, end),
                Some(OrlovKind::Columns) => is_column_orlov_type(&spec, end),
                None => false,
            };
            match trace.replay(&spec) {
                Ok(replayed) if replayed == end && shaped => None,
                Ok(_) => fail("trace does not end in Orlov type".into()),
                Err(e) => fail(e.to_string()),
            }
        });
        let failures: Vec<Value> = outcomes.into_iter().flatten().collect();
        Ok(Verdict::new(
            8,
            format!("{}/{} sets reduced", sets.len() - failures.len(), sets.len()),
            failures,
            json!({"sets": sets.len()}),
        ))
    }

    /// Chern-class certificate of the rewrite sequence.
    pub fn rewrite_sequence(&self) -> Verdict {
        let ring = ChowRing::tangent_p2();
        let num = ring.poly(&[(1, 0, 0), (-3, 1, 0), (3, 2, 0)]);
        let den = ring.line_bundle_chern(0, 1);
        let target = ring.poly(&[(1, 0, 0), (-3, 1, 0), (-1, 0, 1)]);
        let mut failures = Vec::new();
        if !verify_banana_ses() {
            failures.push(json!({"check": "sequence"}));
        }
        match divide_total_chern(&num, &den) {
            Ok(q) if q == target && &target * &den == num => {}
            Ok(q) => failures.push(json!({"check": "division", "quotient": q.to_string()})),
            Err(e) => failures.push(json!({"check": "division", "error": e.to_string()})),
        }
        Verdict::new(9, format!("{} checks failed", failures.len()), failures, json!({"quotient": target.to_string()}))
    }

    /// `i₀ = 0` witnesses and the tangent-dual interval.
    pub fn rouquier(&self) -> Result<Verdict> {
        let mut failures = Vec::new();
        let mut exact = Vec::new();
        for (ell, dim) in [(2u32, 3u32), (3, 5), (4, 7)] {
            let spec = VarietySpec::cotangent(ell)?;
            let t = uniform_tilting(&spec, DEFAULT_GAP_WINDOW)?;
            let i0 = compute_i0(&t, self.exec);
            let r = rouquier_dimension(&spec, DEFAULT_GAP_WINDOW, self.exec)?;
            exact.push(json!({"spec": spec.to_string(), "rouquier": r.rouquier}));
            if i0 != 0 || r.rouquier != (RouquierDimension::Exact { value: dim }) {
                failures.push(json!({"spec": spec.to_string(), "i0": i0, "rouquier": r.rouquier}));
            }
        }
        let mut toric_checked = 0;
        for t in toric_grid() {
            let spec = VarietySpec::Toric(t.clone());
            if !anticanonical_nef(&spec) {
                continue;
            }
            toric_checked += 1;
            let tilt = orlov_tilting(&spec, &vec![0; t.v() as usize])?;
            let i0 = compute_i0(&tilt, self.exec);
            let r = rouquier_dimension(&spec, 0, self.exec)?;
            if i0 != 0 || r.rouquier != (RouquierDimension::Exact { value: spec.dim() }) {
                failures.push(json!({"spec": format!("{t:?}"), "i0": i0}));
            }
        }
        let dual = VarietySpec::tangent_dual(3)?;
        for g1 in 0..=4 {
            for g2 in 0..=4 {
                let strong = orlov_tilting(&dual, &[g1, g2]).is_ok();
                if strong != (g1 >= 2 && g2 >= 2) {
                    failures.push(json!({"spec": dual.to_string(), "gaps": [g1, g2], "strong": strong}));
                }
            }
        }
        let r = rouquier_dimension(&dual, DEFAULT_GAP_WINDOW, self.exec)?;
        if r.rouquier != (RouquierDimension::Interval { lower: 5, upper: 8 }) {
            failures.push(json!({"spec": dual.to_string(), "rouquier": r.rouquier}));
        }
        Ok(Verdict::new(
            10,
            format!("3 cotangent and {toric_checked} toric exact, tangent dual {}", r.rouquier),
            failures,
            json!({"cotangent": exact, "tangent_dual": r}),
        ))
    }

    /// Six image points, one gap on each shifted diagonal.
    pub fn gap_points(&self) -> Result<Verdict> {
        let sets = self.x2_sets()?;
        let spec = VarietySpec::cotangent(2)?;
        let failures: Vec<Value> = sets
            .iter()
            .filter(|s| !matches!(gap_points(&spec, s.bundles()), Ok(g) if g.gaps.len() == 3))
            .map(|s| json!({"set": s.bundles()}))
            .collect();
        Ok(Verdict::new(11, format!("{} sets, {} violations", sets.len(), failures.len()), failures, json!({})))
    }
}

fn window_points(w: i64) -> Vec<LineBundle> {
    (-w..=w).flat_map(|i| (-w..=w).map(move |j| LineBundle::new(i, j))).collect()
}

/// Every toric spec with `ℓ, V ≤ 3` and `α ≤ 2`.
pub fn toric_grid() -> Vec<ToricSpec> {
    let mut out = Vec::new();
    for ell in 1..=3 {
        for v in 1..=3u32 {
            for c in decreasing_twists(v as usize, 2) {
                out.push(ToricSpec::new(ell, v, &c).expect("grid twists are normalised"));
            }
        }
    }
    out
}

/// Weakly decreasing sequences in `[−bound, 0]` of length `n`.
fn decreasing_twists(n: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v: Vec<i64>| {
                let top = v.last().copied().unwrap_or(0);
                (-bound..=top).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect()
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    permutations(n - 1)
        .into_iter()
        .flat_map(|p| {
            (0..n).map(move |k| {
                let mut q = p.clone();
                q.insert(k, n - 1);
                q
            })
        })
        .collect()
}

/// One printed `F ∖ Eff` entry (1-based positions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedEntry {
    pub class: MesClass,
    pub index: usize,
    pub parameter: Option<i64>,
    pub pairs: BTreeSet<(usize, usize)>,
}

/// Sampled class-I parameters: `1`, `5..=8` and `−8..=−4`.
pub fn class_i_samples() -> Vec<i64> {
    std::iter::once(1).chain(5..=8).chain(-8..=-4).collect()
}

fn block(rows: impl IntoIterator<Item = usize> + Clone, cols: impl IntoIterator<Item = usize> + Clone) -> BTreeSet<(usize, usize)> {
    rows.into_iter().flat_map(|a| cols.clone().into_iter().map(move |b| (a, b))).collect()
}

/// The printed tables, restricted to sampled parameters they cover.
pub fn printed_pf0_entries() -> Vec<PrintedEntry> {
    let mut out = Vec::new();
    let mut push = |class, index, parameter, pairs: BTreeSet<(usize, usize)>| {
        out.push(PrintedEntry { class, index, parameter, pairs })
    };
    for a in class_i_samples() {
        let p = Some(a);
        match a {
            a if a >= 1 => push(MesClass::I, 1, p, BTreeSet::new()),
            a if a <= -6 => push(MesClass::I, 1, p, block(1..=3, 4..=6)),
            _ => {}
        }
        match a {
            1 => push(MesClass::I, 2, p, BTreeSet::new()),
            a if a >= 5 => push(MesClass::I, 2, p, BTreeSet::from([(3, 6), (4, 6), (5, 6)])),
            a if a <= -4 => push(MesClass::I, 2, p, block(1..=2, 3..=5)),
            _ => {}
        }
        match a {
            1 => push(MesClass::I, 3, p, BTreeSet::new()),
            a if a >= 7 => push(MesClass::I, 3, p, block(2..=4, 5..=6)),
            a if a <= -4 => push(MesClass::I, 3, p, BTreeSet::from([(1, 2), (1, 3), (1, 4)])),
            _ => {}
        }
    }
    for k in 1..=6 {
        push(MesClass::II, k, None, BTreeSet::new());
    }
    let iii: [&[(usize, usize)]; 6] =
        [&[(2, 3), (4, 5)], &[(1, 2), (3, 4)], &[(2, 3)], &[(1, 2), (5, 6)], &[(4, 5)], &[(3, 4), (5, 6)]];
    let iv: [&[(usize, usize)]; 6] =
        [&[(3, 4)], &[(2, 3), (5, 6)], &[(1, 2), (4, 5)], &[(3, 4)], &[(2, 3), (5, 6)], &[(1, 2), (4, 5)]];
    for (k, pairs) in iii.iter().enumerate() {
        push(MesClass::III, k + 1, None, pairs.iter().copied().collect());
    }
    for class in [MesClass::IV, MesClass::V] {
        for (k, pairs) in iv.iter().enumerate() {
            push(class, k + 1, None, pairs.iter().copied().collect());
        }
    }
    out
}
