//! Isomorph-free census of support families.
//!
//! Families are generated by orderly extension: a family is stored as its
//! sorted subset sequence, children append a subset strictly after the last
//! one, and only children equal to their own canonical relabeling are kept.
//! Since the prefix of a canonical family is canonical, every equivalence
//! class is visited exactly once, as its canonical representative.
//!
//! The antichain condition and the chain-extension condition are monotone
//! under adding subsets, so with pruning enabled a violating family cuts
//! its whole subtree. The matching and slack-program conditions are
//! evaluated per visited family only.

pub mod tables;

use crate::families::{
    cond_i_ii, cond_iii, cond_iv, is_canonical, ChainMode, SupportFamily,
};
use crate::lp::holds_condition_v_fast;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

/// Which of the conditions (i)-(v) a census applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CondSet {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    pub iv: bool,
    pub v: bool,
}

impl CondSet {
    pub const ALL: CondSet = CondSet {
        i: true,
        ii: true,
        iii: true,
        iv: true,
        v: true,
    };

    pub const I_II: CondSet = CondSet {
        i: true,
        ii: true,
        iii: false,
        iv: false,
        v: false,
    };

    pub fn none() -> CondSet {
        CondSet {
            i: false,
            ii: false,
            iii: false,
            iv: false,
            v: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.i || self.ii || self.iii || self.iv || self.v)
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.i {
            out.push("i");
        }
        if self.ii {
            out.push("ii");
        }
        if self.iii {
            out.push("iii");
        }
        if self.iv {
            out.push("iv");
        }
        if self.v {
            out.push("v");
        }
        out
    }

    /// Parses a comma-separated list such as `i,ii,iv`.
    pub fn parse(text: &str) -> Result<CondSet, String> {
        let mut out = CondSet::none();
        for tok in text.split(',') {
            match tok.trim().to_ascii_lowercase().as_str() {
                "i" => out.i = true,
                "ii" => out.ii = true,
                "iii" => out.iii = true,
                "iv" => out.iv = true,
                "v" => out.v = true,
                "" => {}
                other => return Err(format!("unknown condition: {other}")),
            }
        }
        if out.is_empty() {
            return Err("conditions must be nonempty".into());
        }
        Ok(out)
    }
}

impl fmt::Display for CondSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels().join(","))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("ground-set size must be between 2 and 7, got {0}")]
    BadN(usize),
    #[error("conditions must be nonempty")]
    EmptyConditions,
    #[error("the n = 7 census without the chain condition is refused: the published class count for the antichain conditions alone already exceeds 14028724")]
    RefusedWithoutChainCondition,
    #[error("the n = 7 census is a long-running job; enable allow_long to run it")]
    NeedsAllowLong,
    #[error("node budget of {0} exceeded")]
    GuardExceeded(u64),
}

/// Options controlling a census run.
#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Cut subtrees as soon as a monotone condition fails.
    pub prune: bool,
    /// Permit the long n = 7 runs.
    pub allow_long: bool,
    /// Chain-order reading used by the chain-extension condition.
    pub chain_mode: ChainMode,
    /// Abort after visiting this many canonical families.
    pub node_budget: u64,
    /// Collect canonical representatives (counts are always produced).
    pub collect_classes: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            prune: true,
            allow_long: false,
            chain_mode: ChainMode::NonStrict,
            node_budget: 50_000_000,
            collect_classes: true,
        }
    }
}

/// Census output.
#[derive(Debug, Clone, Serialize)]
pub struct CensusResult {
    pub n: usize,
    pub conditions: Vec<&'static str>,
    pub count: u64,
    pub classes: Vec<SupportFamily>,
    pub elapsed_ms: u128,
    /// Canonical families visited, including ones failing the requested
    /// conditions.
    pub nodes: u64,
}

struct Ctx {
    n: usize,
    universe: Vec<u16>,
    conds: CondSet,
    prune: bool,
    chain_mode: ChainMode,
    budget: u64,
    nodes: AtomicU64,
    collect: bool,
}

#[derive(Default)]
struct Bucket {
    count: u64,
    classes: Vec<SupportFamily>,
}

/// Enumerates equivalence classes (under ground-set permutation) of
/// nonempty families of subsets with cardinalities in `[2, n-2]` that
/// satisfy the requested conditions.
pub fn enumerate_classes(
    n: usize,
    conds: CondSet,
    opts: &CensusOptions,
) -> Result<CensusResult, CensusError> {
    if !(2..=7).contains(&n) {
        return Err(CensusError::BadN(n));
    }
    if conds.is_empty() {
        return Err(CensusError::EmptyConditions);
    }
    if n == 7 {
        if !conds.iii {
            return Err(CensusError::RefusedWithoutChainCondition);
        }
        if !opts.allow_long {
            return Err(CensusError::NeedsAllowLong);
        }
    }
    let start = std::time::Instant::now();

    let mut universe: Vec<u16> = Vec::new();
    if n >= 4 {
        let full: u16 = (1 << n) - 1;
        universe = (1..=full)
            .filter(|m| {
                let c = m.count_ones() as usize;
                c >= 2 && c <= n - 2
            })
            .collect();
        universe.sort_by(|&a, &b| crate::families::cmp_masks(a, b));
    }

    let ctx = Ctx {
        n,
        universe,
        conds,
        prune: opts.prune,
        chain_mode: opts.chain_mode,
        budget: opts.node_budget,
        nodes: AtomicU64::new(0),
        collect: opts.collect_classes,
    };

    // Depth-1 roots, then parallel exploration of depth-2 subtrees. The
    // merge order matches sequential depth-first traversal, so output is
    // independent of the worker count.
    let mut total = Bucket::default();
    let mut subtree_roots: Vec<(Vec<u16>, usize)> = Vec::new();
    for first in 0..ctx.universe.len() {
        let family = vec![ctx.universe[first]];
        if !canonical_ok(&ctx, &family) {
            continue;
        }
        let Some(state) = visit(&ctx, &family)? else {
            continue;
        };
        tally(&ctx, &family, &state, &mut total);
        if state.keep_extending {
            for second in first + 1..ctx.universe.len() {
                let child = extend(&ctx, &family, second);
                let Some(child) = child else { continue };
                if !canonical_ok(&ctx, &child) {
                    continue;
                }
                subtree_roots.push((child, second));
            }
        }
    }

    let buckets: Result<Vec<Bucket>, CensusError> = subtree_roots
        .into_par_iter()
        .map(|(family, last)| {
            let mut bucket = Bucket::default();
            let Some(state) = visit(&ctx, &family)? else {
                return Ok(bucket);
            };
            tally(&ctx, &family, &state, &mut bucket);
            if state.keep_extending {
                explore(&ctx, &family, last, &mut bucket)?;
            }
            Ok(bucket)
        })
        .collect();
    for b in buckets? {
        total.count += b.count;
        total.classes.extend(b.classes);
    }

    Ok(CensusResult {
        n,
        conditions: conds.labels(),
        count: total.count,
        classes: total.classes,
        elapsed_ms: start.elapsed().as_millis(),
        nodes: ctx.nodes.load(Ordering::Relaxed),
    })
}

struct VisitState {
    counted: bool,
    keep_extending: bool,
}

fn canonical_ok(ctx: &Ctx, family: &[u16]) -> bool {
    let f = SupportFamily::from_masks(ctx.n, family.to_vec());
    debug_assert_eq!(f.masks(), family, "extensions keep the family sorted");
    is_canonical(&f)
}

/// Antichain-compatible extension; `None` when the new subset nests with an
/// existing member while the antichain condition is being pruned on.
fn extend(ctx: &Ctx, family: &[u16], idx: usize) -> Option<Vec<u16>> {
    let s = ctx.universe[idx];
    if ctx.conds.ii && ctx.prune {
        for &m in family {
            if m & s == m || m & s == s {
                return None;
            }
        }
    }
    let mut child = Vec::with_capacity(family.len() + 1);
    child.extend_from_slice(family);
    child.push(s);
    Some(child)
}

/// Evaluates the conditions on a canonical family: whether it is counted
/// and whether its subtree stays alive.
fn visit(ctx: &Ctx, family: &[u16]) -> Result<Option<VisitState>, CensusError> {
    let visited = ctx.nodes.fetch_add(1, Ordering::Relaxed) + 1;
    if visited > ctx.budget {
        return Err(CensusError::GuardExceeded(ctx.budget));
    }
    let f = SupportFamily::from_masks(ctx.n, family.to_vec());

    // (i) holds by the universe construction.
    let (ci, cii) = cond_i_ii(&f);
    debug_assert!(ci.passed());
    let mut alive = true;
    let mut pass = true;
    if ctx.conds.ii && !cii.passed() {
        pass = false;
        alive = false; // antichain violations persist under extension
    }
    if pass && ctx.conds.iii && !cond_iii(&f, ctx.chain_mode).passed() {
        pass = false;
        alive = false; // chain violations persist under extension
    }
    if pass && ctx.conds.iv && !cond_iv(&f).passed() {
        pass = false;
    }
    if pass && ctx.conds.v {
        let ok = holds_condition_v_fast(&f).expect("family satisfies the builder precondition");
        if !ok {
            pass = false;
        }
    }
    let keep_extending = alive || !ctx.prune;
    Ok(Some(VisitState {
        counted: pass,
        keep_extending,
    }))
}

fn tally(ctx: &Ctx, family: &[u16], state: &VisitState, bucket: &mut Bucket) {
    if state.counted {
        bucket.count += 1;
        if ctx.collect {
            bucket.classes.push(SupportFamily::from_masks(ctx.n, family.to_vec()));
        }
    }
}

fn explore(ctx: &Ctx, family: &[u16], last: usize, bucket: &mut Bucket) -> Result<(), CensusError> {
    for idx in last + 1..ctx.universe.len() {
        let Some(child) = extend(ctx, family, idx) else {
            continue;
        };
        if !canonical_ok(ctx, &child) {
            continue;
        }
        let Some(state) = visit(ctx, &child)? else {
            continue;
        };
        tally(ctx, &child, &state, bucket);
        if state.keep_extending {
            explore(ctx, &child, idx, bucket)?;
        }
    }
    Ok(())
}
