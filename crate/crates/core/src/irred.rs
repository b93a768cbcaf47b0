//! Irreducibility of a copositive matrix with respect to the nonnegative
//! and PSD cones, single generators, and the trigonometric parametrization
//! diagnostics.
//!
//! Irreducibility with respect to the nonnegative cone reduces to the
//! single generators `E_ij`: for every index pair there must be a minimal
//! zero `u` with `(Au)_i = (Au)_j = 0` and `u_i + u_j > 0`. Irreducibility
//! with respect to the PSD cone holds exactly when the minimal zeros span
//! the whole space.

use crate::families::SupportFamily;
use crate::ratlin::{rank, rat, rat_int, Rat, RatVec, SymmetricRationalMatrix};
use crate::zeros::float::{FloatMinimalZeroSet, SymMatF64};
use crate::zeros::MinimalZeroSet;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IrredError {
    #[error("entry ({0},{1}) = {2} is outside [-1, 1] or the diagonal is not 1")]
    OutOfRange(usize, usize, String),
    #[error("rank-one generator must be a nonzero vector")]
    ZeroGenerator,
}

/// Verdict for irreducibility with respect to the nonnegative cone, with
/// one witness minimal zero per index pair (1-based, i <= j).
#[derive(Debug, Clone, Serialize)]
pub struct NonnegativeReport {
    pub irreducible: bool,
    /// Pair -> index of the witnessing zero in the minimal zero set.
    pub witnesses: BTreeMap<(usize, usize), usize>,
    /// Pairs with no witness.
    pub missing: Vec<(usize, usize)>,
}

/// Verdict for irreducibility with respect to the PSD cone.
#[derive(Debug, Clone, Serialize)]
pub struct PsdConeReport {
    pub irreducible: bool,
    /// Rank of the span of the minimal zeros.
    pub rank: usize,
}

/// A single generator to test against.
#[derive(Debug, Clone)]
pub enum Generator {
    /// The symmetric unit pattern at (i, j), 1-based.
    Eij(usize, usize),
    /// The rank-one matrix `w w^T`.
    RankOne(RatVec),
}

impl Generator {
    fn label(&self) -> String {
        match self {
            Generator::Eij(i, j) => format!("E_{i}_{j}"),
            Generator::RankOne(w) => format!(
                "ww^T[{}]",
                w.iter().map(crate::ratlin::fmt_rat).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// Combined irreducibility verdicts for one matrix.
#[derive(Debug, Clone, Serialize)]
pub struct IrreducibilityReport {
    pub wrt_nonnegative: NonnegativeReport,
    pub wrt_psd: PsdConeReport,
    /// Per-generator verdicts, when individual generators were requested.
    pub generator_results: Option<BTreeMap<String, bool>>,
}

/// Evaluates both cone verdicts and, optionally, individual generators.
pub fn irreducibility_report(
    a: &SymmetricRationalMatrix,
    mz: &MinimalZeroSet,
    generators: &[Generator],
) -> Result<IrreducibilityReport, IrredError> {
    let generator_results = if generators.is_empty() {
        None
    } else {
        let mut map = BTreeMap::new();
        for g in generators {
            map.insert(g.label(), irreducible_wrt_generator(a, mz, g)?);
        }
        Some(map)
    };
    Ok(IrreducibilityReport {
        wrt_nonnegative: irreducible_wrt_nonnegative(a, mz),
        wrt_psd: irreducible_wrt_psd(a, mz),
        generator_results,
    })
}

/// Irreducible with respect to the nonnegative cone: every unordered pair
/// (i, j), including i = j, needs a minimal zero `u` with
/// `(Au)_i = (Au)_j = 0` and `u_i + u_j > 0`.
pub fn irreducible_wrt_nonnegative(
    a: &SymmetricRationalMatrix,
    mz: &MinimalZeroSet,
) -> NonnegativeReport {
    let n = a.n();
    let au: Vec<RatVec> = mz.zeros().iter().map(|z| a.mul_vec(&z.vector)).collect();
    let mut witnesses = BTreeMap::new();
    let mut missing = Vec::new();
    for i in 0..n {
        for j in i..n {
            let found = mz.zeros().iter().enumerate().find(|(k, z)| {
                au[*k][i].is_zero()
                    && au[*k][j].is_zero()
                    && (&z.vector[i] + &z.vector[j]).is_positive()
            });
            match found {
                Some((k, _)) => {
                    witnesses.insert((i + 1, j + 1), k);
                }
                None => missing.push((i + 1, j + 1)),
            }
        }
    }
    NonnegativeReport {
        irreducible: missing.is_empty(),
        witnesses,
        missing,
    }
}

/// Irreducible with respect to the PSD cone: the minimal zeros span R^n.
pub fn irreducible_wrt_psd(a: &SymmetricRationalMatrix, mz: &MinimalZeroSet) -> PsdConeReport {
    let vectors: Vec<RatVec> = mz.zeros().iter().map(|z| z.vector.clone()).collect();
    let r = rank(&vectors).expect("zero vectors share the matrix dimension");
    PsdConeReport {
        irreducible: r == a.n(),
        rank: r,
    }
}

/// Irreducibility with respect to a single generator.
pub fn irreducible_wrt_generator(
    a: &SymmetricRationalMatrix,
    mz: &MinimalZeroSet,
    gen: &Generator,
) -> Result<bool, IrredError> {
    match gen {
        Generator::Eij(i, j) => {
            let (i, j) = (*i - 1, *j - 1);
            let ok = mz.zeros().iter().any(|z| {
                let au = a.mul_vec(&z.vector);
                au[i].is_zero() && au[j].is_zero() && (&z.vector[i] + &z.vector[j]).is_positive()
            });
            Ok(ok)
        }
        Generator::RankOne(w) => {
            if w.iter().all(|x| x.is_zero()) {
                return Err(IrredError::ZeroGenerator);
            }
            let ok = mz.zeros().iter().any(|z| {
                let dot: Rat = w.iter().zip(&z.vector).map(|(a, b)| a * b).sum();
                !dot.is_zero()
            });
            Ok(ok)
        }
    }
}

/// Float-backend variant of [`irreducible_wrt_nonnegative`].
pub fn irreducible_wrt_nonnegative_f64(
    a: &SymMatF64,
    mz: &FloatMinimalZeroSet,
    tau: f64,
) -> NonnegativeReport {
    let n = a.n();
    let au: Vec<Vec<f64>> = mz.zeros.iter().map(|z| a.mul_vec(&z.vector)).collect();
    let mut witnesses = BTreeMap::new();
    let mut missing = Vec::new();
    for i in 0..n {
        for j in i..n {
            let found = mz.zeros.iter().enumerate().find(|(k, z)| {
                au[*k][i].abs() <= tau
                    && au[*k][j].abs() <= tau
                    && z.vector[i] + z.vector[j] > tau
            });
            match found {
                Some((k, _)) => {
                    witnesses.insert((i + 1, j + 1), k);
                }
                None => missing.push((i + 1, j + 1)),
            }
        }
    }
    NonnegativeReport {
        irreducible: missing.is_empty(),
        witnesses,
        missing,
    }
}

/// Float-backend variant of [`irreducible_wrt_psd`]: the rank is the number
/// of Gram eigenvalues above `tau`.
pub fn irreducible_wrt_psd_f64(a: &SymMatF64, mz: &FloatMinimalZeroSet, tau: f64) -> PsdConeReport {
    let n = a.n();
    let m = mz.zeros.len();
    if m == 0 {
        return PsdConeReport {
            irreducible: false,
            rank: 0,
        };
    }
    // Gram matrix of the zero vectors.
    let mut g = vec![vec![0.0f64; m]; m];
    for p in 0..m {
        for q in p..m {
            let dot: f64 = (0..n).map(|i| mz.zeros[p].vector[i] * mz.zeros[q].vector[i]).sum();
            g[p][q] = dot;
            g[q][p] = dot;
        }
    }
    let (vals, _) = crate::zeros::float::jacobi_eigen(&SymMatF64::from_rows(g));
    let r = vals.iter().filter(|&&l| l > tau).count();
    PsdConeReport {
        irreducible: r == n,
        rank: r,
    }
}

/// One off-diagonal parameter: exact when the matrix entry is -1, 0 or 1,
/// floating point otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaValue {
    Exact(Rat),
    Approx(f64),
}

impl AlphaValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            AlphaValue::Exact(r) => {
                use num_traits::ToPrimitive;
                r.to_f64().unwrap_or(f64::NAN)
            }
            AlphaValue::Approx(v) => *v,
        }
    }
}

/// The parameters `alpha_ij` in `[0, 1]` with `A_ij = -cos(alpha_ij pi)`,
/// stored for i < j; the diagonal is 1 by convention and not stored.
#[derive(Debug, Clone)]
pub struct AlphaMatrix {
    n: usize,
    entries: Vec<AlphaValue>,
}

impl AlphaMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `alpha` for a 0-based pair.
    pub fn get(&self, i: usize, j: usize) -> &AlphaValue {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        &self.entries[i * self.n - i * (i + 1) / 2 + (j - i - 1)]
    }
}

/// Exact or approximate scalar used when combining alpha values.
#[derive(Debug, Clone)]
enum Val {
    Exact(Rat),
    Approx(f64),
}

impl Val {
    fn zero() -> Self {
        Val::Exact(Rat::zero())
    }

    fn add(&self, other: &AlphaValue) -> Val {
        match (self, other) {
            (Val::Exact(a), AlphaValue::Exact(b)) => Val::Exact(a + b),
            _ => Val::Approx(self.as_f64() + other.as_f64()),
        }
    }

    fn as_f64(&self) -> f64 {
        match self {
            Val::Exact(r) => {
                use num_traits::ToPrimitive;
                r.to_f64().unwrap_or(f64::NAN)
            }
            Val::Approx(v) => *v,
        }
    }

    fn ge(&self, bound: &Rat, tol: f64) -> bool {
        match self {
            Val::Exact(r) => r >= bound,
            Val::Approx(v) => {
                use num_traits::ToPrimitive;
                *v >= bound.to_f64().unwrap() - tol
            }
        }
    }

    fn gt(&self, bound: &Rat, tol: f64) -> bool {
        match self {
            Val::Exact(r) => r > bound,
            Val::Approx(v) => {
                use num_traits::ToPrimitive;
                *v > bound.to_f64().unwrap() + tol
            }
        }
    }

    fn eq_to(&self, bound: &Rat, tol: f64) -> bool {
        match self {
            Val::Exact(r) => r == bound,
            Val::Approx(v) => {
                use num_traits::ToPrimitive;
                (*v - bound.to_f64().unwrap()).abs() <= tol
            }
        }
    }
}

/// Which relation of the parameter system a check instance belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub relation: Relation,
    /// The 1-based indices the instance ranges over.
    pub indices: Vec<usize>,
    /// `None` = not evaluated (membership checks above 3 indices defer to
    /// the exact LP setting).
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    /// True when no evaluated instance failed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| c.passed == Some(false))
    }
}

/// Computes the alpha parametrization of a unit-diagonal exact matrix with
/// entries in [-1, 1]. Entries in {-1, 0, 1} map to exact alpha in
/// {0, 1/2, 1}; everything else is evaluated in floating point.
pub fn alpha_matrix(a: &SymmetricRationalMatrix) -> Result<AlphaMatrix, IrredError> {
    let n = a.n();
    for i in 0..n {
        if !a.get(i, i).is_one() {
            return Err(IrredError::OutOfRange(
                i + 1,
                i + 1,
                crate::ratlin::fmt_rat(a.get(i, i)),
            ));
        }
    }
    let one = rat_int(1);
    let mut entries = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let v = a.get(i, j);
            if v > &one || v < &-one.clone() {
                return Err(IrredError::OutOfRange(
                    i + 1,
                    j + 1,
                    crate::ratlin::fmt_rat(v),
                ));
            }
            let av = if v == &-one.clone() {
                AlphaValue::Exact(Rat::zero())
            } else if v.is_zero() {
                AlphaValue::Exact(rat(1, 2))
            } else if v == &one {
                AlphaValue::Exact(one.clone())
            } else {
                use num_traits::ToPrimitive;
                AlphaValue::Approx((-v.to_f64().unwrap()).acos() / std::f64::consts::PI)
            };
            entries.push(av);
        }
    }
    Ok(AlphaMatrix { n, entries })
}

/// Alpha parametrization of a float matrix.
pub fn alpha_matrix_f64(a: &SymMatF64, tol: f64) -> Result<AlphaMatrix, IrredError> {
    let n = a.n();
    for i in 0..n {
        if (a.get(i, i) - 1.0).abs() > tol {
            return Err(IrredError::OutOfRange(i + 1, i + 1, a.get(i, i).to_string()));
        }
    }
    let mut entries = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let v = a.get(i, j);
            if !(-1.0 - tol..=1.0 + tol).contains(&v) {
                return Err(IrredError::OutOfRange(i + 1, j + 1, v.to_string()));
            }
            entries.push(AlphaValue::Approx((-v.clamp(-1.0, 1.0)).acos() / std::f64::consts::PI));
        }
    }
    Ok(AlphaMatrix { n, entries })
}

/// Evaluates the relations (a)-(h) of the parameter system against a
/// minimal support set.
///
/// Membership relations (c), (d) are evaluated through the triangle facet
/// description for index sets of at most 3 elements and reported as not
/// evaluated above that; the exact LP setting covers the general case.
pub fn relation_checks(
    alpha: &AlphaMatrix,
    supports: &SupportFamily,
    tol: f64,
) -> RelationReport {
    let n = alpha.n();
    let mut checks = Vec::new();
    let members = supports.masks();
    let pair_members: Vec<u16> = members
        .iter()
        .copied()
        .filter(|m| m.count_ones() == 2)
        .collect();
    let is_member = |mask: u16| members.contains(&mask);

    let one = rat_int(1);
    let zero = Rat::zero();
    let a_of = |i: usize, j: usize| alpha.get(i, j);
    let sum3 = |i: usize, j: usize, k: usize| {
        Val::zero().add(a_of(i, j)).add(a_of(i, k)).add(a_of(j, k))
    };

    // (a) and (b) over all pairs.
    for i in 0..n {
        for j in i + 1..n {
            let pm = (1u16 << i) | (1 << j);
            let v = Val::zero().add(a_of(i, j));
            if pair_members.contains(&pm) {
                checks.push(RelationCheck {
                    relation: Relation::A,
                    indices: vec![i + 1, j + 1],
                    passed: Some(v.eq_to(&zero, tol)),
                    detail: format!("alpha = {}", v.as_f64()),
                });
            } else {
                checks.push(RelationCheck {
                    relation: Relation::B,
                    indices: vec![i + 1, j + 1],
                    passed: Some(v.gt(&zero, tol)),
                    detail: format!("alpha = {}", v.as_f64()),
                });
            }
        }
    }

    // (c): members; triangle facets up to 3 indices.
    for &m in members {
        let idx: Vec<usize> = (0..16).filter(|b| m & (1 << b) != 0).collect();
        match idx.len() {
            2 => {
                // B in [-1, 1] holds by construction of alpha.
                checks.push(RelationCheck {
                    relation: Relation::C,
                    indices: idx.iter().map(|&b| b + 1).collect(),
                    passed: Some(true),
                    detail: "pair membership holds by the parametrization".into(),
                });
            }
            3 => {
                let passed = triangle_membership(alpha, &idx, false, tol);
                checks.push(RelationCheck {
                    relation: Relation::C,
                    indices: idx.iter().map(|&b| b + 1).collect(),
                    passed: Some(passed),
                    detail: "triangle facet membership".into(),
                });
            }
            _ => checks.push(RelationCheck {
                relation: Relation::C,
                indices: idx.iter().map(|&b| b + 1).collect(),
                passed: None,
                detail: "membership above 3 indices is checked in the LP setting".into(),
            }),
        }
    }

    // (d): strict subsets of members with at least 2 elements.
    let mut seen = std::collections::BTreeSet::new();
    for &m in members {
        let mut sub = m;
        loop {
            sub = sub.wrapping_sub(1) & m;
            if sub == 0 {
                break;
            }
            if sub != m && sub.count_ones() >= 2 && seen.insert(sub) {
                let idx: Vec<usize> = (0..16).filter(|b| sub & (1 << b) != 0).collect();
                let passed = match idx.len() {
                    2 => {
                        let v = Val::zero().add(a_of(idx[0], idx[1]));
                        Some(v.gt(&zero, tol) && !v.ge(&one, tol).then(|| v.eq_to(&one, tol)).unwrap_or(false) && v.as_f64() < 1.0 + tol && strict_below_one(&v, tol))
                    }
                    3 => Some(triangle_membership(alpha, &idx, true, tol)),
                    _ => None,
                };
                checks.push(RelationCheck {
                    relation: Relation::D,
                    indices: idx.iter().map(|&b| b + 1).collect(),
                    passed,
                    detail: "relative interior membership".into(),
                });
            }
        }
    }

    // (e) and (f) over all triples.
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let tri = (1u16 << i) | (1 << j) | (1 << k);
                let s = sum3(i, j, k);
                if is_member(tri) {
                    checks.push(RelationCheck {
                        relation: Relation::E,
                        indices: vec![i + 1, j + 1, k + 1],
                        passed: Some(s.eq_to(&one, tol)),
                        detail: format!("sum = {}", s.as_f64()),
                    });
                } else if !members.iter().any(|&m| m & tri == m) {
                    checks.push(RelationCheck {
                        relation: Relation::F,
                        indices: vec![i + 1, j + 1, k + 1],
                        passed: Some(s.gt(&one, tol)),
                        detail: format!("sum = {}", s.as_f64()),
                    });
                }
            }
        }
    }

    // (g): pair supports against every third index.
    for &m in &pair_members {
        let i = m.trailing_zeros() as usize;
        let j = (m & (m - 1)).trailing_zeros() as usize;
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            let s = Val::zero().add(a_of(i, k)).add(a_of(j, k));
            checks.push(RelationCheck {
                relation: Relation::G,
                indices: vec![i + 1, j + 1, k + 1],
                passed: Some(s.ge(&one, tol)),
                detail: format!("alpha_ik + alpha_jk = {}", s.as_f64()),
            });
        }
    }

    // (h): every 5-subset sums to at least 4 over its ten pairs.
    if n >= 5 {
        let four = rat_int(4);
        let mut sel = Vec::with_capacity(5);
        fn rec(
            n: usize,
            start: usize,
            sel: &mut Vec<usize>,
            alpha: &AlphaMatrix,
            four: &Rat,
            tol: f64,
            checks: &mut Vec<RelationCheck>,
        ) {
            if sel.len() == 5 {
                let mut s = Val::zero();
                for a in 0..5 {
                    for b in a + 1..5 {
                        s = s.add(alpha.get(sel[a], sel[b]));
                    }
                }
                checks.push(RelationCheck {
                    relation: Relation::H,
                    indices: sel.iter().map(|&v| v + 1).collect(),
                    passed: Some(s.ge(four, tol)),
                    detail: format!("sum = {}", s.as_f64()),
                });
                return;
            }
            for v in start..n {
                sel.push(v);
                rec(n, v + 1, sel, alpha, four, tol, checks);
                sel.pop();
            }
        }
        rec(n, 0, &mut sel, alpha, &four, tol, &mut checks);
    }

    RelationReport { checks }
}

fn strict_below_one(v: &Val, tol: f64) -> bool {
    match v {
        Val::Exact(r) => r < &rat_int(1),
        Val::Approx(x) => *x < 1.0 - tol,
    }
}

/// Cut-polytope membership on three nodes via the four triangle facets:
/// each of `B12+B13+B23`, `B12-B13-B23`, `-B12+B13-B23`, `-B12-B13+B23`
/// must be at least -1 (strictly greater for relative interior).
fn triangle_membership(alpha: &AlphaMatrix, idx: &[usize], strict: bool, tol: f64) -> bool {
    let b = |p: usize, q: usize| -> Val {
        // B = 2 alpha - 1.
        match alpha.get(idx[p], idx[q]) {
            AlphaValue::Exact(r) => Val::Exact(rat_int(2) * r - rat_int(1)),
            AlphaValue::Approx(v) => Val::Approx(2.0 * v - 1.0),
        }
    };
    let combos: [[i64; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    let vals = [b(0, 1), b(0, 2), b(1, 2)];
    let neg_one = rat_int(-1);
    combos.iter().all(|signs| {
        let mut exact = Rat::zero();
        let mut approx = 0.0f64;
        let mut is_exact = true;
        for (s, v) in signs.iter().zip(&vals) {
            match v {
                Val::Exact(r) => {
                    exact += r * rat_int(*s);
                    approx += v.as_f64() * (*s as f64);
                }
                Val::Approx(x) => {
                    is_exact = false;
                    approx += x * (*s as f64);
                }
            }
        }
        if is_exact {
            if strict {
                exact > neg_one
            } else {
                exact >= neg_one
            }
        } else if strict {
            approx > -1.0 + tol
        } else {
            approx >= -1.0 - tol
        }
    })
}

/// Full diagnostic for an exact matrix: alpha parametrization plus the
/// relation report against the given minimal support set.
pub fn lin_rel_check(
    a: &SymmetricRationalMatrix,
    supports: &SupportFamily,
    tol: f64,
) -> Result<(AlphaMatrix, RelationReport), IrredError> {
    let alpha = alpha_matrix(a)?;
    let report = relation_checks(&alpha, supports, tol);
    Ok((alpha, report))
}

/// Float-backend variant of [`lin_rel_check`].
pub fn lin_rel_check_f64(
    a: &SymMatF64,
    supports: &SupportFamily,
    tol: f64,
) -> Result<(AlphaMatrix, RelationReport), IrredError> {
    let alpha = alpha_matrix_f64(a, tol)?;
    let report = relation_checks(&alpha, supports, tol);
    Ok((alpha, report))
}
