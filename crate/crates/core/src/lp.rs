//! Exact rational linear programming and the support-family feasibility
//! program.
//!
//! The feasibility program turns the strict relations imposed on the
//! off-diagonal parameters `alpha_ij` by a candidate minimal support set
//! into a single maximize-slack LP: strict inequalities receive the shared
//! slack `eps` on their smaller side, cut-polytope membership is encoded by
//! convex-combination weights over the cut vectors, and relative-interior
//! membership bounds those weights below by a positive multiple of `eps`.
//! The family passes exactly when the optimal slack is strictly positive.

pub mod simplex;

use crate::families::{cond_i_ii, mask_to_list, SupportFamily};
use crate::ratlin::{fmt_rat, rat, rat_int, Rat, RatVec};
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

pub use simplex::simplex_solve;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("family must satisfy the cardinality and antichain conditions before building the program")]
    Precondition,
}

/// Relation of a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
}

/// One constraint `coeffs . x (=|>=) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: RatVec,
    pub rel: Rel,
    pub rhs: Rat,
}

/// An exact LP in maximize form. All variables are nonnegative; any further
/// bounds are expressed as constraint rows.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub var_names: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub objective: RatVec,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    fn sparse_row(&self, entries: &[(usize, Rat)], rel: Rel, rhs: Rat) -> Constraint {
        let mut coeffs = vec![Rat::zero(); self.num_vars()];
        for (i, v) in entries {
            coeffs[*i] = v.clone();
        }
        Constraint { coeffs, rel, rhs }
    }
}

/// Outcome of an exact solve, always carrying a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// Optimal value and a point attaining it, satisfying every constraint
    /// exactly.
    Optimal { value: Rat, point: RatVec },
    /// Row multipliers `y` (free on equality rows, nonnegative on `>=`
    /// rows) with `sum y_i row_i <= 0` componentwise and `y . rhs > 0`.
    Infeasible { farkas: RatVec },
    /// A feasible improving ray: nonnegative, preserves every constraint
    /// direction, strictly improves the objective.
    Unbounded { ray: RatVec },
}

/// Text dump, one constraint per line, rationals as `p/q`.
pub fn dump_lp(lp: &LinearProgram) -> String {
    let term = |c: &Rat, name: &str| format!("{}*{}", fmt_rat(c), name);
    let mut out = String::new();
    let obj: Vec<String> = lp
        .objective
        .iter()
        .zip(&lp.var_names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| term(c, n))
        .collect();
    out.push_str(&format!("max: {}\n", obj.join(" + ")));
    for c in &lp.constraints {
        let lhs: Vec<String> = c
            .coeffs
            .iter()
            .zip(&lp.var_names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| term(c, n))
            .collect();
        let rel = match c.rel {
            Rel::Eq => "=",
            Rel::Ge => ">=",
        };
        out.push_str(&format!("{} {} {}\n", lhs.join(" + "), rel, fmt_rat(&c.rhs)));
    }
    out
}

/// The vertices of the cut polytope on `k` nodes: the sign vectors
/// `v in {-1,+1}^k` with `v_1 = +1`, whose outer products `v v^T` span the
/// polytope. There are `2^(k-1)` of them, pairwise distinct, all with unit
/// diagonal.
#[derive(Debug, Clone)]
pub struct CutPolytopeVertices {
    pub k: usize,
    pub vectors: Vec<Vec<i8>>,
}

pub fn cut_polytope_vertices(k: usize) -> CutPolytopeVertices {
    assert!(k >= 1 && k <= 16);
    let vectors = (0..(1usize << (k - 1)))
        .map(|bits| {
            let mut v = vec![1i8; k];
            for (pos, x) in v.iter_mut().enumerate().skip(1) {
                if bits & (1 << (pos - 1)) != 0 {
                    *x = -1;
                }
            }
            v
        })
        .collect();
    CutPolytopeVertices { k, vectors }
}

impl CutPolytopeVertices {
    /// Entry `(i, j)` of the vertex matrix `v v^T` for vertex `idx`.
    pub fn matrix_entry(&self, idx: usize, i: usize, j: usize) -> i8 {
        self.vectors[idx][i] * self.vectors[idx][j]
    }
}

fn pair_index(n: usize, p: usize, q: usize) -> usize {
    // 0-based p < q; lexicographic over (p, q).
    debug_assert!(p < q && q < n);
    p * n - p * (p + 1) / 2 + (q - p - 1)
}

/// Layout bookkeeping for the feasibility program built by
/// [`build_condition_v_lp`].
#[derive(Debug, Clone)]
pub struct ConditionVLayout {
    pub n: usize,
    pub eps_col: usize,
    /// Members of cardinality >= 3 with their weight-block column ranges.
    pub membership_blocks: Vec<(Vec<usize>, std::ops::Range<usize>)>,
    /// Strict subsets (of some member) with their interior-weight blocks.
    pub interior_blocks: Vec<(Vec<usize>, std::ops::Range<usize>)>,
}

/// Builds the condition-(v) feasibility program for a support family.
///
/// Variables: `alpha_pq` for all pairs, the slack `eps`, and one simplex of
/// weights per cut-polytope membership constraint. Constraints:
///
/// - (a) `alpha_ij = 0` for pair supports;
/// - (b) `alpha_ij >= eps` for non-support pairs;
/// - (c) for each support `I` with `|I| >= 3`, the matrix `2 alpha - 1`
///   restricted to `I` is a convex combination of cut vertices on `|I|`
///   nodes;
/// - (d) for each `I` with `2 <= |I|` strictly contained in some support,
///   the same combination with every weight at least `eps / 2^|I|`;
/// - (e) pair sums equal to 1 on triple supports;
/// - (f) pair sums at least `1 + eps` on triples containing no support;
/// - (g) `alpha_ik + alpha_jk >= 1` for pair supports and every other `k`;
/// - (h) the ten pairwise values of every 5-subset sum to at least 4.
///
/// `eps` is capped at 1, so the program is never unbounded. Upper bounds
/// `alpha <= 1` are added only where no weight block already enforces them.
pub fn build_condition_v_lp(f: &SupportFamily) -> Result<(LinearProgram, ConditionVLayout), LpError> {
    let (ci, cii) = cond_i_ii(f);
    if !ci.passed() || !cii.passed() {
        return Err(LpError::Precondition);
    }
    let n = f.n();
    let np = n * (n - 1) / 2;

    let mut var_names: Vec<String> = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            var_names.push(format!("a_{}_{}", p + 1, q + 1));
        }
    }
    var_names.push("eps".to_string());
    let eps_col = np;

    let members: Vec<u16> = f.masks().to_vec();
    let pair_members: Vec<u16> = members.iter().copied().filter(|m| m.count_ones() == 2).collect();
    let big_members: Vec<u16> = members.iter().copied().filter(|m| m.count_ones() >= 3).collect();

    // Deduplicated strict subsets of members with cardinality >= 2.
    let mut interior_sets: Vec<u16> = {
        let mut s = std::collections::BTreeSet::new();
        for &m in &members {
            let mut sub = m;
            loop {
                sub = sub.wrapping_sub(1) & m;
                if sub == 0 {
                    break;
                }
                if sub != m && sub.count_ones() >= 2 {
                    s.insert(sub);
                }
            }
        }
        s.into_iter().collect()
    };
    interior_sets.sort_by(|&a, &b| crate::families::cmp_masks(a, b));

    let mut membership_blocks = Vec::new();
    for (mi, &m) in big_members.iter().enumerate() {
        let k = m.count_ones() as usize;
        let start = var_names.len();
        for vi in 0..(1usize << (k - 1)) {
            var_names.push(format!("lc{}_{}", mi, vi));
        }
        membership_blocks.push((mask_to_list(m), start..var_names.len()));
    }
    let mut interior_blocks = Vec::new();
    for (si, &m) in interior_sets.iter().enumerate() {
        let k = m.count_ones() as usize;
        let start = var_names.len();
        for vi in 0..(1usize << (k - 1)) {
            var_names.push(format!("ld{}_{}", si, vi));
        }
        interior_blocks.push((mask_to_list(m), start..var_names.len()));
    }

    let mut lp = LinearProgram {
        var_names,
        constraints: Vec::new(),
        objective: Vec::new(),
    };
    lp.objective = vec![Rat::zero(); lp.num_vars()];
    lp.objective[eps_col] = rat_int(1);

    let pcol = |p: usize, q: usize| pair_index(n, p.min(q), p.max(q));

    // Pairs covered by a weight block have alpha in [0,1] implied.
    let mut covered = vec![false; np];
    let mark = |covered: &mut Vec<bool>, mask: u16| {
        let idx = mask_indices(mask);
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                covered[pcol(idx[a], idx[b])] = true;
            }
        }
    };
    for &m in &big_members {
        mark(&mut covered, m);
    }
    for &m in &interior_sets {
        mark(&mut covered, m);
    }

    // Caps: eps <= 1 and alpha <= 1 where not otherwise bounded.
    let row = |lp: &LinearProgram, entries: &[(usize, Rat)], rel: Rel, rhs: Rat| {
        lp.sparse_row(entries, rel, rhs)
    };
    let c = row(&lp, &[(eps_col, rat_int(-1))], Rel::Ge, rat_int(-1));
    lp.constraints.push(c);
    for p in 0..n {
        for q in p + 1..n {
            if !covered[pcol(p, q)] {
                let c = row(&lp, &[(pcol(p, q), rat_int(-1))], Rel::Ge, rat_int(-1));
                lp.constraints.push(c);
            }
        }
    }

    // (a) and (b).
    let pair_mask_of = |p: usize, q: usize| (1u16 << p) | (1u16 << q);
    for &m in &pair_members {
        let idx = mask_indices(m);
        let c = row(&lp, &[(pcol(idx[0], idx[1]), rat_int(1))], Rel::Eq, rat_int(0));
        lp.constraints.push(c);
    }
    for p in 0..n {
        for q in p + 1..n {
            if !pair_members.contains(&pair_mask_of(p, q)) {
                let c = row(
                    &lp,
                    &[(pcol(p, q), rat_int(1)), (eps_col, rat_int(-1))],
                    Rel::Ge,
                    rat_int(0),
                );
                lp.constraints.push(c);
            }
        }
    }

    // (c) and (d): couplings 2 alpha_pq - sum_v w_v (v v^T)_pq = 1, the
    // weight simplex, and for (d) the lower bounds w_v >= eps / 2^k.
    let emit_block = |lp: &mut LinearProgram, set: &[usize], cols: std::ops::Range<usize>, interior: bool| {
        let k = set.len();
        let verts = cut_polytope_vertices(k);
        for a in 0..k {
            for b in a + 1..k {
                let mut entries = vec![(pcol(set[a] - 1, set[b] - 1), rat_int(2))];
                for (vi, col) in cols.clone().enumerate() {
                    entries.push((col, -rat_int(verts.matrix_entry(vi, a, b) as i64)));
                }
                let c = lp.sparse_row(&entries, Rel::Eq, rat_int(1));
                lp.constraints.push(c);
            }
        }
        let simplex_row: Vec<(usize, Rat)> = cols.clone().map(|c| (c, rat_int(1))).collect();
        let c = lp.sparse_row(&simplex_row, Rel::Eq, rat_int(1));
        lp.constraints.push(c);
        if interior {
            let bound = rat(1, 1i64 << k);
            for col in cols {
                let c = lp.sparse_row(
                    &[(col, rat_int(1)), (eps_col, -bound.clone())],
                    Rel::Ge,
                    rat_int(0),
                );
                lp.constraints.push(c);
            }
        }
    };
    for (set, cols) in membership_blocks.clone() {
        emit_block(&mut lp, &set, cols, false);
    }
    for (set, cols) in interior_blocks.clone() {
        emit_block(&mut lp, &set, cols, true);
    }

    // (e) and (f).
    for &m in &members {
        if m.count_ones() == 3 {
            let idx = mask_indices(m);
            let entries = vec![
                (pcol(idx[0], idx[1]), rat_int(1)),
                (pcol(idx[0], idx[2]), rat_int(1)),
                (pcol(idx[1], idx[2]), rat_int(1)),
            ];
            let c = lp.sparse_row(&entries, Rel::Eq, rat_int(1));
            lp.constraints.push(c);
        }
    }
    for p in 0..n {
        for q in p + 1..n {
            for r in q + 1..n {
                let tri = (1u16 << p) | (1 << q) | (1 << r);
                if members.iter().any(|&m| m & tri == m) {
                    continue;
                }
                let entries = vec![
                    (pcol(p, q), rat_int(1)),
                    (pcol(p, r), rat_int(1)),
                    (pcol(q, r), rat_int(1)),
                    (eps_col, rat_int(-1)),
                ];
                let c = lp.sparse_row(&entries, Rel::Ge, rat_int(1));
                lp.constraints.push(c);
            }
        }
    }

    // (g).
    for &m in &pair_members {
        let idx = mask_indices(m);
        let (i, j) = (idx[0], idx[1]);
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            let entries = vec![(pcol(i, k), rat_int(1)), (pcol(j, k), rat_int(1))];
            let c = lp.sparse_row(&entries, Rel::Ge, rat_int(1));
            lp.constraints.push(c);
        }
    }

    // (h): every 5-subset.
    if n >= 5 {
        let mut sel = [0usize; 5];
        fn rec(
            n: usize,
            start: usize,
            depth: usize,
            sel: &mut [usize; 5],
            lp: &mut LinearProgram,
            pcol: &dyn Fn(usize, usize) -> usize,
        ) {
            if depth == 5 {
                let mut entries = Vec::with_capacity(10);
                for a in 0..5 {
                    for b in a + 1..5 {
                        entries.push((pcol(sel[a], sel[b]), rat_int(1)));
                    }
                }
                let c = lp.sparse_row(&entries, Rel::Ge, rat_int(4));
                lp.constraints.push(c);
                return;
            }
            for v in start..n {
                sel[depth] = v;
                rec(n, v + 1, depth + 1, sel, lp, pcol);
            }
        }
        rec(n, 0, 0, &mut sel, &mut lp, &pcol);
    }

    let layout = ConditionVLayout {
        n,
        eps_col,
        membership_blocks,
        interior_blocks,
    };
    Ok((lp, layout))
}

fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).collect()
}

/// Certificate attached to a condition-(v) verdict.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionVCertificate {
    /// A feasible assignment with strictly positive slack; `alpha` holds
    /// the pair values in lexicographic order, as `p/q` strings.
    Feasible { eps: String, alpha: Vec<String> },
    /// The optimal slack is nonpositive.
    NonpositiveOptimum { eps: String },
    /// The constraint system is infeasible; the multipliers form the
    /// certificate row combination.
    Infeasible { farkas: Vec<String> },
}

#[derive(Debug, Clone)]
pub struct ConditionVOutcome {
    pub passed: bool,
    pub eps: Option<Rat>,
    pub certificate: ConditionVCertificate,
}

/// Decides condition (v): pass iff the optimal slack is strictly positive.
pub fn holds_condition_v(f: &SupportFamily) -> Result<ConditionVOutcome, LpError> {
    condition_v_with(f, false)
}

/// As [`holds_condition_v`] but may stop at the first feasible point with
/// positive slack instead of solving to optimality. The verdict is
/// identical; only the reported slack may differ.
pub fn holds_condition_v_fast(f: &SupportFamily) -> Result<bool, LpError> {
    Ok(condition_v_with(f, true)?.passed)
}

fn condition_v_with(f: &SupportFamily, early: bool) -> Result<ConditionVOutcome, LpError> {
    let (lp, layout) = build_condition_v_lp(f)?;
    let np = layout.n * (layout.n - 1) / 2;
    let outcome = simplex::solve_with(&lp, early);
    Ok(match outcome {
        LpOutcome::Optimal { value, point } => {
            let alpha: Vec<String> = point[..np].iter().map(fmt_rat).collect();
            if value.is_positive() {
                ConditionVOutcome {
                    passed: true,
                    eps: Some(value.clone()),
                    certificate: ConditionVCertificate::Feasible {
                        eps: fmt_rat(&value),
                        alpha,
                    },
                }
            } else {
                ConditionVOutcome {
                    passed: false,
                    eps: Some(value.clone()),
                    certificate: ConditionVCertificate::NonpositiveOptimum {
                        eps: fmt_rat(&value),
                    },
                }
            }
        }
        LpOutcome::Infeasible { farkas } => ConditionVOutcome {
            passed: false,
            eps: None,
            certificate: ConditionVCertificate::Infeasible {
                farkas: farkas.iter().map(fmt_rat).collect(),
            },
        },
        // The slack cap keeps the program bounded; an unbounded verdict
        // still means a positive slack exists.
        LpOutcome::Unbounded { .. } => ConditionVOutcome {
            passed: true,
            eps: None,
            certificate: ConditionVCertificate::Feasible {
                eps: "unbounded".into(),
                alpha: Vec::new(),
            },
        },
    })
}

/// Checks an outcome point against every constraint, exactly.
pub fn point_satisfies(lp: &LinearProgram, x: &[Rat]) -> bool {
    if x.len() != lp.num_vars() || x.iter().any(|v| v.is_negative()) {
        return false;
    }
    lp.constraints.iter().all(|c| {
        let lhs: Rat = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match c.rel {
            Rel::Eq => lhs == c.rhs,
            Rel::Ge => lhs >= c.rhs,
        }
    })
}

/// Checks a Farkas certificate: `y` must be nonnegative on `>=` rows, the
/// combined row must be nonpositive in every variable, and the combined
/// right-hand side must be positive.
pub fn farkas_valid(lp: &LinearProgram, y: &[Rat]) -> bool {
    if y.len() != lp.constraints.len() {
        return false;
    }
    for (c, yi) in lp.constraints.iter().zip(y) {
        if c.rel == Rel::Ge && yi.is_negative() {
            return false;
        }
    }
    let nv = lp.num_vars();
    for j in 0..nv {
        let combined: Rat = lp
            .constraints
            .iter()
            .zip(y)
            .map(|(c, yi)| &c.coeffs[j] * yi)
            .sum();
        if combined.is_positive() {
            return false;
        }
    }
    let rhs: Rat = lp.constraints.iter().zip(y).map(|(c, yi)| &c.rhs * yi).sum();
    rhs.is_positive()
}
