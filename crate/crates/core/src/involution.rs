//! The weight-reversing involution on PPR forests and its exhaustive checker.
//!
//! For a PPR forest let `a` be the smallest vertex outside the tree rooted
//! at 0, `u` the root of its tree and `v` the root paired with `u`. Let `a'`
//! be the smallest descendant of any inversion-initiating child of 0, `v'`
//! that child and `u'` the child of `v'` on the path down to `a'`.
//!
//! * If `a` is smaller (merge): hang `v` below 0 and `u` below `v`, dropping
//!   the pair. The pair-count goes down by one.
//! * If `a'` is smaller (split): cut `0 v'` and `v' u'`, making `{u', v'}`
//!   a new pair. The pair-count goes up by one.
//! * If neither exists the forest is special and is left alone.

use std::fmt;

use serde::Serialize;

use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::exactmath::{takacs_count, Natural, SignedCount};
use crate::model::{PprForest, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MergeSite {
    pub a: Vertex,
    pub u: Vertex,
    pub v: Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SplitSite {
    pub a_prime: Vertex,
    pub v_prime: Vertex,
    pub u_prime: Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvolutionAction {
    Special,
    Merge(MergeSite),
    Split(SplitSite),
}

impl fmt::Display for InvolutionAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvolutionAction::Special => write!(f, "special"),
            InvolutionAction::Merge(s) => write!(f, "merge a={} u={} v={}", s.a, s.u, s.v),
            InvolutionAction::Split(s) => write!(
                f,
                "split a'={} v'={} u'={}",
                s.a_prime, s.v_prime, s.u_prime
            ),
        }
    }
}

pub fn find_merge_site(f: &PprForest) -> Option<MergeSite> {
    if f.pair_count() == 0 {
        return None;
    }
    let a = (1..=f.n()).find(|&x| f.root_of(x) != 0)?;
    let u = f.root_of(a);
    let v = f
        .partner(u)
        .expect("every non-zero root of a valid forest is paired");
    Some(MergeSite { a, u, v })
}

pub fn find_split_site(f: &PprForest) -> Option<SplitSite> {
    let (a_prime, v_prime) = f
        .children(0)
        .into_iter()
        .filter_map(|c| {
            let smallest = *f.descendants(c).first()?;
            (smallest < c).then_some((smallest, c))
        })
        .min()?;
    let mut u_prime = a_prime;
    while let Some(p) = f.parent(u_prime) {
        if p == v_prime {
            break;
        }
        u_prime = p;
    }
    Some(SplitSite {
        a_prime,
        v_prime,
        u_prime,
    })
}

pub fn classify(f: &PprForest) -> Result<InvolutionAction> {
    match (find_merge_site(f), find_split_site(f)) {
        (None, None) => Ok(InvolutionAction::Special),
        (Some(m), None) => Ok(InvolutionAction::Merge(m)),
        (None, Some(s)) => Ok(InvolutionAction::Split(s)),
        (Some(m), Some(s)) if m.a < s.a_prime => Ok(InvolutionAction::Merge(m)),
        (Some(m), Some(s)) if s.a_prime < m.a => Ok(InvolutionAction::Split(s)),
        (Some(m), Some(_)) => Err(Error::Internal(format!(
            "vertex {} is both inside and outside the tree rooted at 0",
            m.a
        ))),
    }
}

/// Applies the involution, returning a new forest and the action taken.
pub fn apply_with_action(f: &PprForest) -> Result<(PprForest, InvolutionAction)> {
    let action = classify(f)?;
    let mut parent = f.parents().to_vec();
    let mut pairs = f.pairs().to_vec();
    match action {
        InvolutionAction::Special => return Ok((f.clone(), action)),
        InvolutionAction::Merge(MergeSite { u, v, .. }) => {
            parent[v] = Some(0);
            parent[u] = Some(v);
            pairs.retain(|&(r, s)| r != v && s != v);
        }
        InvolutionAction::Split(SplitSite {
            v_prime, u_prime, ..
        }) => {
            parent[v_prime] = None;
            parent[u_prime] = None;
            pairs.push((u_prime, v_prime));
        }
    }
    Ok((PprForest::from_parts_unchecked(parent, pairs), action))
}

pub fn apply(f: &PprForest) -> Result<PprForest> {
    apply_with_action(f).map(|(g, _)| g)
}

/// Outcome of checking the involution on every PPR forest of one size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub total_ppr: Natural,
    pub per_pair_count: Vec<Natural>,
    pub special_count: Natural,
    pub signed_sum: SignedCount,
    pub involution_ok: bool,
    pub sign_reversal_ok: bool,
    pub fixed_points_ok: bool,
    /// Hex canonical encoding of the first forest that failed a check.
    pub first_counterexample: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.involution_ok
            && self.sign_reversal_ok
            && self.fixed_points_ok
            && self.first_counterexample.is_none()
    }
}

#[derive(Default)]
struct Tally {
    per_pair_count: Vec<u64>,
    special: u64,
    involution_ok: bool,
    sign_reversal_ok: bool,
    fixed_points_ok: bool,
    first_counterexample: Option<String>,
}

impl Tally {
    fn fail(&mut self, f: &PprForest) {
        if self.first_counterexample.is_none() {
            self.first_counterexample = Some(f.canonical_hex());
        }
    }

    fn record(&mut self, f: &PprForest) -> Result<()> {
        let j = f.pair_count();
        if self.per_pair_count.len() <= j {
            self.per_pair_count.resize(j + 1, 0);
        }
        self.per_pair_count[j] += 1;
        let special = f.is_special();
        if special {
            self.special += 1;
        }
        let image = apply(f)?;
        let fixed = image == *f;
        if fixed != special {
            self.fixed_points_ok = false;
            self.fail(f);
        }
        if apply(&image)? != *f {
            self.involution_ok = false;
            self.fail(f);
        }
        if !special && image.pair_count().abs_diff(j) != 1 {
            self.sign_reversal_ok = false;
            self.fail(f);
        }
        Ok(())
    }
}

/// Runs the involution over every PPR forest on `[0, n]` and checks that it
/// is self-inverse, flips the weight off its fixed points, fixes exactly the
/// special forests, and that the signed total equals the number of unrooted
/// forests given by the alternating sum.
pub fn verify_involution(n: usize, enumerator: &Enumerator) -> Result<VerificationReport> {
    let mut tally = Tally {
        involution_ok: true,
        sign_reversal_ok: true,
        fixed_points_ok: true,
        ..Tally::default()
    };
    for f in enumerator.ppr_forests(n, None)? {
        tally.record(&f)?;
    }
    let per_pair_count: Vec<Natural> = tally
        .per_pair_count
        .iter()
        .map(|&c| Natural::from(c))
        .collect();
    let signed_sum: SignedCount = per_pair_count
        .iter()
        .enumerate()
        .map(|(j, c)| SignedCount::alternating(j) * SignedCount::from(c.clone()))
        .sum();
    let special_count = Natural::from(tally.special);
    let total_ppr = per_pair_count.iter().cloned().sum();
    let expected = takacs_count(
        u32::try_from(n).map_err(|_| Error::Domain(format!("n = {n} is too large")))?,
    )?;
    let mut report = VerificationReport {
        n,
        total_ppr,
        per_pair_count,
        special_count,
        signed_sum,
        involution_ok: tally.involution_ok,
        sign_reversal_ok: tally.sign_reversal_ok,
        fixed_points_ok: tally.fixed_points_ok,
        first_counterexample: tally.first_counterexample,
    };
    let telescopes = report.signed_sum == SignedCount::from(report.special_count.clone())
        && report.special_count == expected;
    if !telescopes && report.first_counterexample.is_none() {
        report.first_counterexample = Some(format!(
            "signed sum {} and special count {} do not both equal {}",
            report.signed_sum, report.special_count, expected
        ));
    }
    Ok(report)
}
