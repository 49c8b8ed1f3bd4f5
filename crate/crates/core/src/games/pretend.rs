//! Pretending functions for heap games: faithfulness and the almost-tame
//! hypothesis gate.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::octal::{grundy_sequence, OctalCode};
use crate::catalog::GrundyLabeledBM;
use crate::monoid::{is_normal, kernel, BipartiteMonoid};

/// `Φ(H_n)` for heaps `1..=M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PretendingFunction {
    /// `values[n - 1] = Φ(H_n)`.
    pub values: Vec<usize>,
}

impl PretendingFunction {
    pub fn max_heap(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, n: usize) -> Option<usize> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }
}

/// `{"M": int, "values": {"1": elem, ...}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiJson {
    #[serde(rename = "M")]
    pub m: usize,
    pub values: BTreeMap<String, usize>,
}

#[derive(Debug, Error)]
pub enum PhiJsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("M must be at least 1")]
    EmptyDomain,
    #[error("bad heap key {0:?}")]
    BadKey(String),
    #[error("no value for heap {0}")]
    Missing(usize),
    #[error("heap {0} is beyond M")]
    Beyond(usize),
    #[error("heap {heap} maps to {elem}, outside a monoid of order {size}")]
    OutOfRange { heap: usize, elem: usize, size: usize },
}

/// Largest `M` accepted from JSON.
pub const MAX_PHI_DOMAIN: usize = 1 << 16;

impl PhiJson {
    pub fn parse(text: &str) -> Result<PretendingFunction, PhiJsonError> {
        let j: PhiJson = serde_json::from_str(text)?;
        j.into_phi()
    }

    pub fn into_phi(self) -> Result<PretendingFunction, PhiJsonError> {
        if self.m == 0 {
            return Err(PhiJsonError::EmptyDomain);
        }
        if self.m > MAX_PHI_DOMAIN {
            return Err(PhiJsonError::Beyond(self.m));
        }
        let mut values = vec![None; self.m];
        for (k, v) in self.values {
            let n: usize = k.trim().parse().map_err(|_| PhiJsonError::BadKey(k.clone()))?;
            if n == 0 {
                return Err(PhiJsonError::BadKey(k));
            }
            if n > self.m {
                return Err(PhiJsonError::Beyond(n));
            }
            values[n - 1] = Some(v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or(PhiJsonError::Missing(i + 1)))
            .collect::<Result<_, _>>()?;
        Ok(PretendingFunction { values })
    }

    pub fn from_phi(phi: &PretendingFunction) -> Self {
        PhiJson {
            m: phi.values.len(),
            values: phi.values.iter().enumerate().map(|(i, &v)| ((i + 1).to_string(), v)).collect(),
        }
    }
}

pub fn check_phi_range(phi: &PretendingFunction, b: &BipartiteMonoid) -> Result<(), PhiJsonError> {
    for (i, &v) in phi.values.iter().enumerate() {
        if v >= b.size() {
            return Err(PhiJsonError::OutOfRange { heap: i + 1, elem: v, size: b.size() });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelConflict {
    pub element: usize,
    pub first: u32,
    pub second: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulnessReport {
    pub faithful: bool,
    /// Grundy labels reached from the identity by the observed images.
    pub labels: Vec<Option<u32>>,
    pub conflict: Option<LabelConflict>,
}

impl FaithfulnessReport {
    pub fn labeled(&self, b: &BipartiteMonoid) -> Option<GrundyLabeledBM> {
        self.faithful.then(|| GrundyLabeledBM { bm: b.clone(), labels: self.labels.clone() })
    }
}

/// Labels the target by `label(1) = 0` and `label(x·Φ(G)) = label(x) ⊕ G(G)`
/// over every observation `(Φ(G), G(G))`; faithful iff no element receives
/// two labels.
pub fn faithfulness_check(observations: &[(usize, u32)], target: &BipartiteMonoid) -> FaithfulnessReport {
    let mut labels = vec![None; target.size()];
    labels[target.identity()] = Some(0);
    let mut queue = VecDeque::from([target.identity()]);
    let mut obs = observations.to_vec();
    obs.sort_unstable();
    obs.dedup();
    while let Some(x) = queue.pop_front() {
        let lx = labels[x].expect("queued elements are labeled");
        for &(h, g) in &obs {
            let y = target.mul(x, h);
            match labels[y] {
                None => {
                    labels[y] = Some(lx ^ g);
                    queue.push_back(y);
                }
                Some(l) if l != lx ^ g => {
                    return FaithfulnessReport {
                        faithful: false,
                        labels,
                        conflict: Some(LabelConflict { element: y, first: l, second: lx ^ g }),
                    };
                }
                Some(_) => {}
            }
        }
    }
    FaithfulnessReport { faithful: true, labels, conflict: None }
}

/// Faithfulness of `phi` against the heap Grundy values of `code`.
pub fn faithfulness_check_code(
    code: &OctalCode,
    phi: &PretendingFunction,
    target: &BipartiteMonoid,
) -> FaithfulnessReport {
    let g = grundy_sequence(code, phi.max_heap() as u32);
    let obs: Vec<(usize, u32)> = phi.values.iter().enumerate().map(|(i, &x)| (x, g[i + 1])).collect();
    faithfulness_check(&obs, target)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisFailure {
    NotNormal,
    Unfaithful(LabelConflict),
    WindowMiss { heap: usize, image: usize },
    PhiTooShort { needed: usize, have: usize },
    BadN0,
}

impl fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisFailure::NotNormal => write!(f, "normality: the quotient is not normal"),
            HypothesisFailure::Unfaithful(c) => {
                write!(f, "faithfulness: element {} labeled both {} and {}", c.element, c.first, c.second)
            }
            HypothesisFailure::WindowMiss { heap, image } => {
                write!(f, "window: heap {heap} maps to {image}, outside the kernel")
            }
            HypothesisFailure::PhiTooShort { needed, have } => {
                write!(f, "window: phi defined through heap {have}, needs {needed}")
            }
            HypothesisFailure::BadN0 => write!(f, "window: n0 must be at least 1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlmostTameVerdict {
    /// Hypotheses hold: `Q(Γ) ≅ T^k(Q,P)` for some `k ∈ ℕ ∪ {∞}`, and heaps
    /// from `n0` on map into the kernel.
    Ladder {
        base_order: usize,
        window: Vec<(usize, usize)>,
    },
    Inapplicable(Vec<HypothesisFailure>),
}

impl AlmostTameVerdict {
    pub fn statement(&self) -> String {
        match self {
            AlmostTameVerdict::Ladder { base_order, .. } => {
                format!("Q(Γ) ≅ T^k(Q) for some k ∈ ℕ ∪ {{∞}}, where Q has order {base_order}")
            }
            AlmostTameVerdict::Inapplicable(f) => {
                let why: Vec<String> = f.iter().map(|x| x.to_string()).collect();
                format!("inapplicable: {}", why.join("; "))
            }
        }
    }
}

/// Checks the almost-tame hypotheses: `b` normal, `phi` faithful, and
/// `Φ(H_n) ∈ K` for `n0 ≤ n < 2·n0 + d`.
pub fn almost_tame_check(
    code: &OctalCode,
    n0: usize,
    b: &GrundyLabeledBM,
    phi: &PretendingFunction,
) -> AlmostTameVerdict {
    let mut failures = Vec::new();
    if !is_normal(&b.bm) {
        failures.push(HypothesisFailure::NotNormal);
    }
    let faith = faithfulness_check_code(code, phi, &b.bm);
    if let Some(c) = faith.conflict {
        failures.push(HypothesisFailure::Unfaithful(c));
    }
    if n0 == 0 {
        failures.push(HypothesisFailure::BadN0);
        return AlmostTameVerdict::Inapplicable(failures);
    }
    let end = 2 * n0 + code.last_digit_position();
    if phi.max_heap() + 1 < end {
        failures.push(HypothesisFailure::PhiTooShort { needed: end - 1, have: phi.max_heap() });
    }
    let k = kernel(b.bm.monoid());
    let mut window = Vec::new();
    for n in n0..end.min(phi.max_heap() + 1) {
        let x = phi.get(n).expect("within domain");
        if !k.contains(x) {
            failures.push(HypothesisFailure::WindowMiss { heap: n, image: x });
        }
        window.push((n, x));
    }
    if failures.is_empty() {
        AlmostTameVerdict::Ladder { base_order: b.bm.size(), window }
    } else {
        AlmostTameVerdict::Inapplicable(failures)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_r, make_tn, t_z, T_A};
    use crate::monoid::Monoid;

    fn toy() -> (OctalCode, PretendingFunction) {
        // subtraction game {1,2}: G(H_n) = n mod 3
        let code: OctalCode = "0.33".parse().unwrap();
        let values = (1..=5).map(|n| if n == 1 { T_A } else { t_z(n % 3) }).collect();
        (code, PretendingFunction { values })
    }

    #[test]
    fn nim_heap_into_t1() {
        let t1 = make_tn(1).bm;
        let r = faithfulness_check(&[(1, 1)], &t1);
        assert!(r.faithful);
        assert_eq!(r.labels[1], Some(1));
    }

    #[test]
    fn conflicting_heaps() {
        let t2 = make_tn(2).bm;
        let r = faithfulness_check(&[(T_A, 1), (T_A, 2)], &t2);
        assert!(!r.faithful);
        assert!(r.conflict.is_some());
    }

    #[test]
    fn catalog_labels_are_faithful() {
        for b in [make_tn(2), make_tn(3), make_r(2)] {
            let obs: Vec<(usize, u32)> =
                (0..b.bm.size()).filter_map(|x| b.labels[x].map(|l| (x, l))).collect();
            let r = faithfulness_check(&obs, &b.bm);
            assert!(r.faithful);
            for x in 0..b.bm.size() {
                if let (Some(l), Some(m)) = (b.labels[x], r.labels[x]) {
                    assert_eq!(l, m);
                }
            }
        }
    }

    #[test]
    fn toy_ladder() {
        let (code, phi) = toy();
        let v = almost_tame_check(&code, 2, &make_tn(2), &phi);
        match &v {
            AlmostTameVerdict::Ladder { base_order, window } => {
                assert_eq!(*base_order, 6);
                assert_eq!(window.iter().map(|w| w.0).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
            }
            other => panic!("{other:?}"),
        }
        assert!(v.statement().contains("for some k"));
    }

    #[test]
    fn gates() {
        let (code, phi) = toy();
        let short = PretendingFunction { values: phi.values[..3].to_vec() };
        assert!(matches!(
            almost_tame_check(&code, 2, &make_tn(2), &short),
            AlmostTameVerdict::Inapplicable(f) if f.contains(&HypothesisFailure::PhiTooShort { needed: 5, have: 3 })
        ));
        let v = almost_tame_check(&code, 1, &make_tn(2), &phi);
        assert!(matches!(v, AlmostTameVerdict::Inapplicable(ref f)
            if f.contains(&HypothesisFailure::WindowMiss { heap: 1, image: T_A })));
        // Z4 with P = {2}: the kernel is everything and misses its identity
        let t = (0..4).map(|x| (0..4).map(|y| (x + y) % 4).collect()).collect();
        let z4 = BipartiteMonoid::new(Monoid::from_rows(t, 0, vec![1]).unwrap(), [2]).unwrap();
        let z4 = GrundyLabeledBM { bm: z4, labels: vec![Some(0), Some(1), Some(2), Some(3)] };
        let phi_z = PretendingFunction { values: vec![1; 5] };
        let v = almost_tame_check(&code, 2, &z4, &phi_z);
        assert!(
            matches!(v, AlmostTameVerdict::Inapplicable(ref f) if f.contains(&HypothesisFailure::NotNormal))
        );
    }

    #[test]
    fn phi_json() {
        let phi = PhiJson::parse(r#"{"M": 2, "values": {"1": 1, "2": 4}}"#).unwrap();
        assert_eq!(phi.values, vec![1, 4]);
        assert!(PhiJson::parse(r#"{"M": 2, "values": {"1": 1}}"#).is_err());
        assert!(PhiJson::parse(r#"{"M": 1, "values": {"0": 1}}"#).is_err());
        assert!(check_phi_range(&phi, &make_tn(1).bm).is_err());
    }
}
