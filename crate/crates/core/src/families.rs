//! Support-family combinatorics.
//!
//! A support family is a set of index subsets of `{1..n}`, the candidate
//! minimal support set of a copositive matrix. This module hosts the
//! structural conditions on such families (cardinality window, antichain,
//! the chain-extension condition, the bipartite matching condition) and
//! canonical forms under coordinate permutation.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("ground-set size must be between 1 and 16, got {0}")]
    BadGroundSet(usize),
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("empty subset is not allowed")]
    EmptySubset,
    #[error("family literal parse error at byte {0}: {1}")]
    Parse(usize, String),
    #[error("canonical form guard: n = {0} exceeds the supported maximum of {1}")]
    GuardExceeded(usize, usize),
}

/// Maximum ground-set size accepted by [`canonical_form`].
pub const CANONICAL_GUARD: usize = 9;

/// A family of index subsets of `{1..n}`, deduplicated and kept in a fixed
/// deterministic order (by cardinality, then lexicographically on the sorted
/// element lists).
///
/// Subsets are stored as bitmasks; bit `i` encodes index `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportFamily {
    n: usize,
    sets: Vec<u16>,
}

/// Total order key for a subset mask: cardinality first, then
/// lexicographic on the ascending element list. At equal cardinality the
/// set containing the lowest differing element comes first, which the
/// bit-reversed complement encodes numerically.
#[inline]
pub(crate) fn order_key(mask: u16) -> u32 {
    (mask.count_ones() << 16) | (!mask.reverse_bits() as u32 & 0xFFFF)
}

/// Compares two subset masks by cardinality, then lexicographically on
/// ascending element lists (smaller first element wins).
pub fn cmp_masks(a: u16, b: u16) -> std::cmp::Ordering {
    order_key(a).cmp(&order_key(b))
}

pub fn mask_to_list(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

pub fn list_to_mask(list: &[usize]) -> u16 {
    list.iter().fold(0u16, |m, &i| m | (1 << (i - 1)))
}

impl SupportFamily {
    /// Builds a family from 1-based index lists.
    pub fn new(n: usize, sets: &[Vec<usize>]) -> Result<Self, FamilyError> {
        if !(1..=16).contains(&n) {
            return Err(FamilyError::BadGroundSet(n));
        }
        let mut masks = Vec::with_capacity(sets.len());
        for s in sets {
            if s.is_empty() {
                return Err(FamilyError::EmptySubset);
            }
            for &i in s {
                if i == 0 || i > n {
                    return Err(FamilyError::IndexOutOfRange(i, n));
                }
            }
            masks.push(list_to_mask(s));
        }
        Ok(Self::from_masks(n, masks))
    }

    /// Builds from bitmasks, deduplicating and sorting.
    pub fn from_masks(n: usize, mut masks: Vec<u16>) -> Self {
        masks.retain(|&m| m != 0);
        masks.sort_by(|&a, &b| cmp_masks(a, b));
        masks.dedup();
        Self { n, sets: masks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn masks(&self) -> &[u16] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The subsets as sorted 1-based index lists.
    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&m| mask_to_list(m)).collect()
    }

    /// Parses the family literal grammar, e.g. `{1,2},{2,3},{3,4}`.
    pub fn parse(n: usize, text: &str) -> Result<Self, FamilyError> {
        let bytes = text.as_bytes();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut pos = 0usize;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && (bytes[*pos] as char).is_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'{' {
                return Err(FamilyError::Parse(pos, "expected '{'".into()));
            }
            pos += 1;
            let mut cur = Vec::new();
            loop {
                skip_ws(&mut pos);
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == start {
                    return Err(FamilyError::Parse(pos, "expected an index".into()));
                }
                let v: usize = text[start..pos]
                    .parse()
                    .map_err(|e| FamilyError::Parse(start, format!("bad index: {e}")))?;
                cur.push(v);
                skip_ws(&mut pos);
                match bytes.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b'}') => {
                        pos += 1;
                        break;
                    }
                    _ => return Err(FamilyError::Parse(pos, "expected ',' or '}'".into())),
                }
            }
            sets.push(cur);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                None => break,
                Some(b',') => pos += 1,
                _ => return Err(FamilyError::Parse(pos, "expected ',' between subsets".into())),
            }
        }
        if sets.is_empty() {
            return Err(FamilyError::Parse(0, "empty family literal".into()));
        }
        Self::new(n, &sets)
    }

    /// Relabels the family through a permutation given as `perm[old] = new`
    /// over 0-based positions.
    pub fn apply_perm(&self, perm: &[u8]) -> Self {
        let masks = self.sets.iter().map(|&m| permute_mask(m, perm)).collect();
        Self::from_masks(self.n, masks)
    }
}

impl fmt::Display for SupportFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.to_lists().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (k, v) in s.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl Serialize for SupportFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let lists = self.to_lists();
        let mut seq = serializer.serialize_seq(Some(lists.len()))?;
        for l in lists {
            seq.serialize_element(&l)?;
        }
        seq.end()
    }
}

fn permute_mask(mask: u16, perm: &[u8]) -> u16 {
    let mut out = 0u16;
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        out |= 1 << perm[b];
        m &= m - 1;
    }
    out
}

fn permutations(n: usize) -> &'static [Vec<u8>] {
    static TABLES: OnceLock<Vec<OnceLock<Vec<Vec<u8>>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| (0..=CANONICAL_GUARD).map(|_| OnceLock::new()).collect());
    tables[n].get_or_init(|| {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        fn heap(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if k <= 1 {
                out.push(cur.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, cur, out);
                if k % 2 == 0 {
                    cur.swap(i, k - 1);
                } else {
                    cur.swap(0, k - 1);
                }
            }
        }
        heap(n, &mut cur, &mut out);
        out
    })
}

/// Precomputed permutation action on all masks, for the enumeration hot
/// path. Only built for small n; memory is perms x 2^n entries.
const MAP_TABLE_MAX_N: usize = 7;

fn perm_mask_tables(n: usize) -> &'static [Vec<u16>] {
    static TABLES: OnceLock<Vec<OnceLock<Vec<Vec<u16>>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| (0..=MAP_TABLE_MAX_N).map(|_| OnceLock::new()).collect());
    tables[n].get_or_init(|| {
        permutations(n)
            .iter()
            .map(|perm| {
                (0..(1u32 << n))
                    .map(|m| permute_mask(m as u16, perm))
                    .collect()
            })
            .collect()
    })
}

/// Compares two sorted mask sequences lexicographically under [`cmp_masks`].
fn cmp_families(a: &[u16], b: &[u16]) -> std::cmp::Ordering {
    for (&x, &y) in a.iter().zip(b.iter()) {
        match cmp_masks(x, y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// The lexicographically least relabeling of `f` over all permutations of
/// the ground set.
pub fn canonical_form(f: &SupportFamily) -> Result<SupportFamily, FamilyError> {
    if f.n() > CANONICAL_GUARD {
        return Err(FamilyError::GuardExceeded(f.n(), CANONICAL_GUARD));
    }
    let mut best: Option<Vec<u16>> = None;
    let mut buf: Vec<u16> = Vec::with_capacity(f.len());
    for perm in permutations(f.n()) {
        buf.clear();
        buf.extend(f.sets.iter().map(|&m| permute_mask(m, perm)));
        buf.sort_by(|&a, &b| cmp_masks(a, b));
        match &best {
            None => best = Some(buf.clone()),
            Some(b) => {
                if cmp_families(&buf, b) == std::cmp::Ordering::Less {
                    best = Some(buf.clone());
                }
            }
        }
    }
    Ok(SupportFamily {
        n: f.n(),
        sets: best.unwrap_or_default(),
    })
}

/// True when `f` equals its own canonical form. Cheaper than
/// [`canonical_form`] because the permutation scan aborts on the first
/// improvement, and most permutations are rejected on the minimum mapped
/// set alone.
pub fn is_canonical(f: &SupportFamily) -> bool {
    debug_assert!(f.n() <= CANONICAL_GUARD);
    if f.n() <= MAP_TABLE_MAX_N {
        return is_canonical_fast(f);
    }
    let mut buf: Vec<u16> = Vec::with_capacity(f.len());
    for perm in permutations(f.n()) {
        buf.clear();
        buf.extend(f.sets.iter().map(|&m| permute_mask(m, perm)));
        buf.sort_by(|&a, &b| cmp_masks(a, b));
        if cmp_families(&buf, &f.sets) == std::cmp::Ordering::Less {
            return false;
        }
    }
    true
}

fn is_canonical_fast(f: &SupportFamily) -> bool {
    let maps = perm_mask_tables(f.n());
    let first_key = match f.sets.first() {
        Some(&m) => order_key(m),
        None => return true,
    };
    let keys: Vec<u32> = f.sets.iter().map(|&m| order_key(m)).collect();
    let mut buf: Vec<u32> = vec![0; f.sets.len()];
    for map in maps {
        // Cheap rejection: the smallest mapped set decides most cases.
        let mut min = u32::MAX;
        for (slot, &m) in buf.iter_mut().zip(&f.sets) {
            let k = order_key(map[m as usize]);
            *slot = k;
            if k < min {
                min = k;
            }
        }
        if min > first_key {
            continue;
        }
        buf.sort_unstable();
        match buf.iter().cmp(keys.iter()) {
            std::cmp::Ordering::Less => return false,
            _ => continue,
        }
    }
    true
}

/// Tri-state condition verdict carrying a serializable witness on failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict<W> {
    Pass,
    Fail { witness: W },
    NotEvaluated,
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CardinalityWitness {
    pub set: Vec<usize>,
    pub cardinality: usize,
    pub lo: usize,
    pub hi: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionWitness {
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainWitness {
    /// The base index set `I`.
    pub base: Vec<usize>,
    /// The chain members, ordered by their intersection with `I`.
    pub chain: Vec<Vec<usize>>,
    /// The member covered by `I` and the chain elements but absent from the
    /// chain.
    pub offender: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingWitness {
    /// Vertex sets of the bipartite components of the pair-support graph.
    pub bipartite_components: Vec<Vec<usize>>,
    pub required: usize,
    pub achieved: usize,
}

/// Combined per-condition report. Condition (v) is filled in by the caller
/// from the LP layer; its witness is the serialized certificate.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub cond_i: Verdict<CardinalityWitness>,
    pub cond_ii: Verdict<InclusionWitness>,
    pub cond_iii: Verdict<ChainWitness>,
    pub cond_iv: Verdict<MatchingWitness>,
    pub cond_v: Verdict<serde_json::Value>,
}

/// How the intersection chain in condition (iii) is ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainMode {
    /// Intersections may repeat along the chain.
    #[default]
    NonStrict,
    /// Intersections must strictly increase along the chain.
    Strict,
}

/// Condition (i): every subset has between 2 and n-2 elements; and
/// condition (ii): no subset strictly contains another.
pub fn cond_i_ii(
    f: &SupportFamily,
) -> (Verdict<CardinalityWitness>, Verdict<InclusionWitness>) {
    let lo = 2usize;
    let hi = f.n().saturating_sub(2);
    let mut ci = Verdict::Pass;
    for &m in f.masks() {
        let c = m.count_ones() as usize;
        if c < lo || c > hi {
            ci = Verdict::Fail {
                witness: CardinalityWitness {
                    set: mask_to_list(m),
                    cardinality: c,
                    lo,
                    hi,
                },
            };
            break;
        }
    }
    let mut cii = Verdict::Pass;
    'outer: for &a in f.masks() {
        for &b in f.masks() {
            if a != b && a & b == a {
                cii = Verdict::Fail {
                    witness: InclusionWitness {
                        inner: mask_to_list(a),
                        outer: mask_to_list(b),
                    },
                };
                break 'outer;
            }
        }
    }
    (ci, cii)
}

/// Condition (iii), the chain-extension condition.
///
/// For every index set `I` strictly contained in some member, and every
/// subfamily S of members whose difference with `I` is a single element and
/// whose intersections with `I` form a chain, any member contained in `I`
/// together with the single extra elements of S must itself belong to S.
///
/// A failure is searched for in reduced form: for a candidate offender
/// `I_j`, one chain member is selected per element of `I_j \ I`; a valid
/// selection with pairwise comparable intersections is exactly a violation,
/// and any violation prunes down to one of this shape.
pub fn cond_iii(f: &SupportFamily, mode: ChainMode) -> Verdict<ChainWitness> {
    let (ci, cii) = cond_i_ii(f);
    if !ci.passed() || !cii.passed() {
        return Verdict::NotEvaluated;
    }
    let members = f.masks();

    // All strict subsets of members, deduplicated.
    let mut bases: BTreeSet<u16> = BTreeSet::new();
    for &m in members {
        let mut s = m;
        loop {
            s = s.wrapping_sub(1) & m;
            bases.insert(s);
            if s == 0 {
                break;
            }
        }
    }

    for &base in &bases {
        // Members reachable from `base` by adding a single element.
        // candidates[k] lists members T with T \ base = {k}.
        let mut candidates: Vec<Vec<u16>> = vec![Vec::new(); 16];
        let mut reachable = 0u16;
        for &t in members {
            let d = t & !base;
            if d != 0 && d & (d - 1) == 0 {
                candidates[d.trailing_zeros() as usize].push(t);
                reachable |= d;
            }
        }
        if reachable == 0 {
            continue;
        }
        for &off in members {
            let need = off & !base;
            if need == 0 || need & !reachable != 0 {
                continue;
            }
            // Pick one chain member per element of `need`, avoiding the
            // offender itself, with pairwise comparable intersections.
            let bits: Vec<usize> = (0..16).filter(|b| need & (1 << b) != 0).collect();
            let mut chosen: Vec<u16> = Vec::with_capacity(bits.len());
            if select_chain(&bits, 0, base, off, &candidates, mode, &mut chosen) {
                let mut chain = chosen.clone();
                chain.sort_by_key(|&t| (t & base).count_ones());
                return Verdict::Fail {
                    witness: ChainWitness {
                        base: mask_to_list(base),
                        chain: chain.into_iter().map(mask_to_list).collect(),
                        offender: mask_to_list(off),
                    },
                };
            }
        }
    }
    Verdict::Pass
}

fn select_chain(
    bits: &[usize],
    pos: usize,
    base: u16,
    offender: u16,
    candidates: &[Vec<u16>],
    mode: ChainMode,
    chosen: &mut Vec<u16>,
) -> bool {
    if pos == bits.len() {
        return true;
    }
    for &t in &candidates[bits[pos]] {
        if t == offender {
            continue;
        }
        let inter = t & base;
        let compatible = chosen.iter().all(|&u| {
            let ui = u & base;
            let comparable = ui & inter == ui || ui & inter == inter;
            match mode {
                ChainMode::NonStrict => comparable,
                ChainMode::Strict => comparable && ui != inter,
            }
        });
        if compatible {
            chosen.push(t);
            if select_chain(bits, pos + 1, base, offender, candidates, mode, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Condition (iv): the bipartite matching condition.
///
/// Vertices of the pair-support graph are all of `{1..n}`; isolated
/// vertices count as bipartite components. Each bipartite component must be
/// matched to a distinct support of cardinality at least 3 that touches it.
pub fn cond_iv(f: &SupportFamily) -> Verdict<MatchingWitness> {
    let comps = bipartite_components(f);
    let r = comps.len();
    if r == 0 {
        return Verdict::Pass;
    }
    let bigs: Vec<u16> = f
        .masks()
        .iter()
        .copied()
        .filter(|m| m.count_ones() >= 3)
        .collect();
    let adj: Vec<Vec<usize>> = comps
        .iter()
        .map(|&c| (0..bigs.len()).filter(|&w| c & bigs[w] != 0).collect())
        .collect();
    let achieved = max_bipartite_matching(&adj, bigs.len());
    if achieved == r {
        Verdict::Pass
    } else {
        Verdict::Fail {
            witness: MatchingWitness {
                bipartite_components: comps.iter().map(|&c| mask_to_list(c)).collect(),
                required: r,
                achieved,
            },
        }
    }
}

/// Connected components of the pair-support graph that are bipartite, as
/// vertex masks. Isolated vertices are single-vertex bipartite components.
pub fn bipartite_components(f: &SupportFamily) -> Vec<u16> {
    let n = f.n();
    let mut adj = vec![0u16; n];
    for &m in f.masks() {
        if m.count_ones() == 2 {
            let a = m.trailing_zeros() as usize;
            let b = (m & (m - 1)).trailing_zeros() as usize;
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    let mut seen = 0u16;
    let mut out = Vec::new();
    for v in 0..n {
        if seen & (1 << v) != 0 {
            continue;
        }
        // BFS with 2-coloring.
        let mut color = vec![-1i8; n];
        color[v] = 0;
        let mut queue = vec![v];
        let mut comp = 0u16;
        let mut bipartite = true;
        while let Some(u) = queue.pop() {
            comp |= 1 << u;
            let mut nb = adj[u];
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if color[w] == -1 {
                    color[w] = 1 - color[u];
                    queue.push(w);
                } else if color[w] == color[u] {
                    bipartite = false;
                }
            }
        }
        seen |= comp;
        if bipartite {
            out.push(comp);
        }
    }
    out
}

/// Maximum matching in a bipartite graph given as left-vertex adjacency
/// lists, via augmenting paths.
pub fn max_bipartite_matching(adj: &[Vec<usize>], right_count: usize) -> usize {
    let mut matched_right: Vec<Option<usize>> = vec![None; right_count];
    let mut size = 0;
    for left in 0..adj.len() {
        let mut seen = vec![false; right_count];
        if augment(left, adj, &mut matched_right, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(
    left: usize,
    adj: &[Vec<usize>],
    matched_right: &mut Vec<Option<usize>>,
    seen: &mut Vec<bool>,
) -> bool {
    for &r in &adj[left] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if matched_right[r].is_none()
            || augment(matched_right[r].unwrap(), adj, matched_right, seen)
        {
            matched_right[r] = Some(left);
            return true;
        }
    }
    false
}
