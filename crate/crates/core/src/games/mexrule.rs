//! The Generalized Mex Rule, kernel-subset extensions, and the discriminant
//! of an option set over `T_n`.
//!
//! The rule quantifies over every game `Y` already present and every
//! `n ≥ 0`. A game enters only through its pair `(Φ(Y), Φ″Y)`, so ranging
//! over the pairs of a transition algebra covers all `Y`; and since the
//! powers of `x` in a finite monoid repeat with some index and period, every
//! `n` beyond `index + period` repeats a case already checked.

use std::fmt;

use thiserror::Error;

use crate::catalog::{tame_bar_identity, tame_extend_labeled, GrundyLabeledBM, T_A, T_ONE};
use crate::monoid::{kernel, meximal_set, BipartiteMonoid};
use crate::transition::{OptionSet, TransitionAlgebra, TransitionPair};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MexCounterexample {
    /// Condition (i): an option value outside `M_x`.
    NotMeximal { option: usize },
    /// Condition (ii) fails for this pair and exponent.
    Unanswered { pair: TransitionPair, n: usize },
    /// The extension is not generated by the base together with `x`.
    NotGenerated,
}

impl fmt::Display for MexCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MexCounterexample::NotMeximal { option } => {
                write!(f, "option value {option} is not in the meximal set")
            }
            MexCounterexample::Unanswered { pair, n } => {
                write!(f, "no answer for pair {pair} at n = {n}")
            }
            MexCounterexample::NotGenerated => write!(f, "extension is not generated by base and x"),
        }
    }
}

/// Checks whether a game with option values `e` may take value `x` in the
/// extension `ext ⊇ base`, where `embed` sends base elements into `ext`.
pub fn gen_mex_check(
    base: &TransitionAlgebra,
    ext: &BipartiteMonoid,
    embed: &[usize],
    x: usize,
    e: OptionSet,
) -> Result<(), MexCounterexample> {
    let mut seed: Vec<usize> = embed.to_vec();
    seed.push(x);
    if ext.monoid().closure(seed).iter().any(|&r| !r) {
        return Err(MexCounterexample::NotGenerated);
    }
    let mx = OptionSet::from_iter(meximal_set(ext, x));
    if let Some(option) = e.iter().find(|&y| !mx.contains(y)) {
        return Err(MexCounterexample::NotMeximal { option });
    }
    let (index, period) = ext.monoid().index_period(x);
    for &pair in &base.pairs {
        let y = embed[pair.value];
        let mut xn = ext.identity(); // x^n
        for n in 0..=index + period {
            let xn1 = ext.mul(xn, x);
            if !ext.in_p(ext.mul(xn1, y)) {
                let by_y = pair.options.iter().any(|f| ext.in_p(ext.mul(xn1, embed[f])));
                let by_g = e.iter().any(|g| ext.in_p(ext.mul(ext.mul(xn, g), y)));
                if !by_y && !by_g {
                    return Err(MexCounterexample::Unanswered { pair, n });
                }
            }
            xn = xn1;
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct KernelExtension {
    pub quotient: GrundyLabeledBM,
    /// `Φ(G)` in `quotient`.
    pub element: usize,
    /// Whether `quotient` is the tame extension rather than the input.
    pub tame: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelSubsetError {
    #[error("element {0} is not in the kernel")]
    NotInKernel(usize),
    #[error("kernel element {0} has no Grundy label")]
    Unlabeled(usize),
}

/// A game whose options take values in `e ⊆ K`: a proper subset yields
/// `z_{mex}` in the same quotient, the whole kernel yields `z̄` in `T(b)`.
pub fn extend_by_kernel_subset(
    b: &GrundyLabeledBM,
    e: OptionSet,
) -> Result<KernelExtension, KernelSubsetError> {
    let k = kernel(b.bm.monoid());
    if let Some(x) = e.iter().find(|&x| !k.contains(x)) {
        return Err(KernelSubsetError::NotInKernel(x));
    }
    let mut seen = Vec::with_capacity(e.len());
    for x in e.iter() {
        seen.push(b.labels[x].ok_or(KernelSubsetError::Unlabeled(x))?);
    }
    if e.len() == k.len() {
        return Ok(KernelExtension {
            quotient: tame_extend_labeled(b),
            element: tame_bar_identity(&b.bm),
            tame: true,
        });
    }
    let m = super::store::mex(&seen);
    let element = b.kernel_element(m).ok_or(KernelSubsetError::Unlabeled(m as usize))?;
    Ok(KernelExtension { quotient: b.clone(), element, tame: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Discriminant {
    Restive,
    Restless,
    Tame,
}

impl Discriminant {
    pub fn is_wild(self) -> bool {
        self != Discriminant::Tame
    }
}

/// `Δ = E ∩ {1, a, z, az}` over the `T_n` layout.
pub fn discriminant(e: OptionSet) -> Discriminant {
    let (one, a, z, az) = (T_ONE, T_A, crate::catalog::t_z(0), crate::catalog::t_z(1));
    let delta = OptionSet(e.0 & OptionSet::from_iter([one, a, z, az]).0);
    let pair = |x, y| OptionSet::from_iter([x, y]);
    if delta == pair(one, z) || delta == pair(a, az) {
        Discriminant::Restive
    } else if delta == pair(a, z) || delta == pair(one, az) {
        Discriminant::Restless
    } else {
        Discriminant::Tame
    }
}

/// `E ∩ {a, z} ≠ ∅` and `E ∩ {1, az} ≠ ∅`, over the `T_n` layout.
pub fn is_complemented(e: OptionSet) -> bool {
    let (z, az) = (crate::catalog::t_z(0), crate::catalog::t_z(1));
    e.intersects(OptionSet::from_iter([T_A, z])) && e.intersects(OptionSet::from_iter([T_ONE, az]))
}
