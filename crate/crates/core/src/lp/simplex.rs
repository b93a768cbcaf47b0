//! Exact two-phase simplex with Bland's anti-cycling rule.
//!
//! The solver works on the equality form obtained by adding one surplus
//! column per `>=` row and one artificial column per row. Phase 1 drives
//! the artificials to zero or yields the infeasibility multipliers from
//! their final reduced costs; phase 2 maximizes the true objective.
//!
//! Arithmetic is exact throughout. Pivoting runs over machine-word
//! fractions (i64 numerator and denominator with i128 intermediates) and
//! transparently restarts over arbitrary-precision rationals if any value
//! leaves the machine-word range, so results are identical to a pure
//! big-rational solve.

use super::{LinearProgram, LpOutcome, Rel};
use crate::ratlin::Rat;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Solves the program exactly.
pub fn simplex_solve(lp: &LinearProgram) -> LpOutcome {
    solve_with(lp, false)
}

/// Like [`simplex_solve`], but when `stop_when_positive` is set, phase 2
/// returns as soon as the running objective value becomes positive. The
/// returned point is feasible and its value exact, just not necessarily
/// optimal. Verdicts of the form "is the optimum positive" are unaffected
/// because the objective only increases along the pivot path.
pub(crate) fn solve_with(lp: &LinearProgram, stop_when_positive: bool) -> LpOutcome {
    match solve_generic::<Q64>(lp, stop_when_positive) {
        Some(out) => out,
        None => solve_generic::<Rat>(lp, stop_when_positive)
            .expect("big-rational arithmetic does not overflow"),
    }
}

/// Exact scalar for the tableau. Operations return `None` on overflow of
/// the representation (never for [`Rat`]).
pub(crate) trait Scalar: Clone + PartialEq + Sized {
    fn from_rat(r: &Rat) -> Option<Self>;
    fn to_rat(&self) -> Rat;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn cmp_exact(&self, o: &Self) -> Ordering;
}

impl Scalar for Rat {
    fn from_rat(r: &Rat) -> Option<Self> {
        Some(r.clone())
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        <Rat as Signed>::is_positive(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn cmp_exact(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
}

/// Machine-word fraction: reduced, denominator positive. All intermediate
/// products fit in i128; only the reduced result must narrow back to i64.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Q64 {
    n: i64,
    d: i64,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn q64(n: i128, d: i128) -> Option<Q64> {
    debug_assert!(d != 0);
    let (n, d) = if d < 0 { (n.checked_neg()?, d.checked_neg()?) } else { (n, d) };
    if n == 0 {
        return Some(Q64 { n: 0, d: 1 });
    }
    let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
    let (n, d) = (n / g, d / g);
    if (i64::MIN as i128..=i64::MAX as i128).contains(&n) && d <= i64::MAX as i128 {
        Some(Q64 {
            n: n as i64,
            d: d as i64,
        })
    } else {
        None
    }
}

impl Scalar for Q64 {
    fn from_rat(r: &Rat) -> Option<Self> {
        use num_traits::ToPrimitive;
        let n = r.numer().to_i64()?;
        let d = r.denom().to_i64()?;
        q64(n as i128, d as i128)
    }
    fn to_rat(&self) -> Rat {
        crate::ratlin::rat(self.n, self.d)
    }
    fn zero() -> Self {
        Q64 { n: 0, d: 1 }
    }
    fn one() -> Self {
        Q64 { n: 1, d: 1 }
    }
    fn is_zero(&self) -> bool {
        self.n == 0
    }
    fn is_positive(&self) -> bool {
        self.n > 0
    }
    fn neg(&self) -> Self {
        Q64 { n: -self.n, d: self.d }
    }
    fn add(&self, o: &Self) -> Option<Self> {
        let lhs = (self.n as i128) * (o.d as i128);
        let rhs = (o.n as i128) * (self.d as i128);
        q64(lhs.checked_add(rhs)?, (self.d as i128) * (o.d as i128))
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        q64((self.n as i128) * (o.n as i128), (self.d as i128) * (o.d as i128))
    }
    fn div(&self, o: &Self) -> Option<Self> {
        debug_assert!(o.n != 0);
        q64((self.n as i128) * (o.d as i128), (self.d as i128) * (o.n as i128))
    }
    fn cmp_exact(&self, o: &Self) -> Ordering {
        ((self.n as i128) * (o.d as i128)).cmp(&((o.n as i128) * (self.d as i128)))
    }
}

fn solve_generic<S: Scalar>(lp: &LinearProgram, stop_when_positive: bool) -> Option<LpOutcome> {
    let nv = lp.num_vars();
    let m = lp.constraints.len();

    let n_surplus = lp.constraints.iter().filter(|c| c.rel == Rel::Ge).count();
    let n_cols = nv + n_surplus + m; // originals | surplus | artificials
    let art0 = nv + n_surplus;

    // Equality-form rows with nonnegative right-hand sides; `flip[i]` tracks
    // rows multiplied by -1 so certificates can be mapped back.
    let mut tab: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut flip: Vec<bool> = Vec::with_capacity(m);
    let mut surplus_at = 0usize;
    for c in &lp.constraints {
        let mut row: Vec<S> = vec![S::zero(); n_cols + 1];
        for (j, v) in c.coeffs.iter().enumerate() {
            row[j] = S::from_rat(v)?;
        }
        if c.rel == Rel::Ge {
            row[nv + surplus_at] = S::one().neg();
            surplus_at += 1;
        }
        row[n_cols] = S::from_rat(&c.rhs)?;
        let f = c.rhs.is_negative();
        if f {
            for x in row.iter_mut() {
                *x = x.neg();
            }
        }
        flip.push(f);
        tab.push(row);
    }
    for (i, row) in tab.iter_mut().enumerate() {
        row[art0 + i] = S::one();
    }
    let mut basis: Vec<usize> = (0..m).map(|i| art0 + i).collect();

    // Phase 1: maximize minus the sum of artificials. With the artificial
    // basis, the reduced cost of a column is its sum and the value is minus
    // the rhs sum.
    let mut rc = vec![S::zero(); n_cols];
    for j in 0..art0 {
        let mut acc = S::zero();
        for row in &tab {
            if !row[j].is_zero() {
                acc = acc.add(&row[j])?;
            }
        }
        rc[j] = acc;
    }
    let mut val = S::zero();
    for row in &tab {
        val = val.sub(&row[n_cols])?;
    }
    // Artificials never re-enter.
    let enterable: Vec<bool> = (0..n_cols).map(|j| j < art0).collect();

    match run_phase(&mut tab, &mut basis, &mut rc, &mut val, &enterable, false)? {
        PhaseEnd::Optimal => {}
        _ => unreachable!("phase 1 objective is bounded above by zero"),
    }

    if val.cmp_exact(&S::zero()) == Ordering::Less {
        // Infeasible. The reduced cost on artificial i equals -1 - pi_i for
        // the dual multipliers pi, and y = -pi certifies infeasibility in
        // the flipped row space.
        let farkas: Vec<Rat> = (0..m)
            .map(|i| {
                let yi = S::one().add(&rc[art0 + i]).map(|v| v.to_rat());
                yi.map(|v| if flip[i] { -v } else { v })
            })
            .collect::<Option<Vec<Rat>>>()?;
        debug_assert!(super::farkas_valid(lp, &farkas));
        return Some(LpOutcome::Infeasible { farkas });
    }

    // Drive remaining artificials out of the basis; rows that cannot pivot
    // are redundant and dropped.
    let mut r = 0;
    while r < tab.len() {
        if basis[r] >= art0 {
            debug_assert!(tab[r][n_cols].is_zero());
            if let Some(e) = (0..art0).find(|&j| !tab[r][j].is_zero()) {
                pivot(&mut tab, &mut basis, r, e, &mut rc, &mut val)?;
                r += 1;
            } else {
                tab.remove(r);
                basis.remove(r);
            }
        } else {
            r += 1;
        }
    }

    // Phase 2 with the true objective.
    let obj: Vec<S> = lp
        .objective
        .iter()
        .map(|v| S::from_rat(v))
        .collect::<Option<Vec<S>>>()?;
    let mut rc = vec![S::zero(); n_cols];
    let mut val = S::zero();
    for j in 0..art0 {
        let mut zj = S::zero();
        for (row, &b) in tab.iter().zip(&basis) {
            if b < nv && !row[j].is_zero() && !obj[b].is_zero() {
                zj = zj.add(&obj[b].mul(&row[j])?)?;
            }
        }
        let cj = if j < nv { obj[j].clone() } else { S::zero() };
        rc[j] = cj.sub(&zj)?;
    }
    for (row, &b) in tab.iter().zip(&basis) {
        if b < nv && !obj[b].is_zero() {
            val = val.add(&obj[b].mul(&row[n_cols])?)?;
        }
    }

    match run_phase(
        &mut tab,
        &mut basis,
        &mut rc,
        &mut val,
        &enterable,
        stop_when_positive,
    )? {
        PhaseEnd::Optimal | PhaseEnd::StoppedPositive => {
            let point = extract_point(&tab, &basis, nv);
            debug_assert!(super::point_satisfies(lp, &point));
            Some(LpOutcome::Optimal {
                value: val.to_rat(),
                point,
            })
        }
        PhaseEnd::Unbounded(enter) => {
            let mut dir = vec![<Rat as Zero>::zero(); n_cols];
            dir[enter] = <Rat as One>::one();
            for (row, &b) in tab.iter().zip(basis.iter()) {
                dir[b] = -row[enter].to_rat();
            }
            let ray: Vec<Rat> = dir[..nv].to_vec();
            debug_assert!(ray.iter().all(|x| !x.is_negative()));
            Some(LpOutcome::Unbounded { ray })
        }
    }
}

fn extract_point<S: Scalar>(tab: &[Vec<S>], basis: &[usize], nv: usize) -> Vec<Rat> {
    let n_cols = tab.first().map_or(nv, |r| r.len() - 1);
    let mut full = vec![<Rat as Zero>::zero(); n_cols];
    for (row, &b) in tab.iter().zip(basis) {
        full[b] = row[row.len() - 1].to_rat();
    }
    full.truncate(nv);
    full
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
    StoppedPositive,
}

fn run_phase<S: Scalar>(
    tab: &mut [Vec<S>],
    basis: &mut [usize],
    rc: &mut [S],
    val: &mut S,
    enterable: &[bool],
    stop_when_positive: bool,
) -> Option<PhaseEnd> {
    loop {
        if stop_when_positive && val.is_positive() {
            return Some(PhaseEnd::StoppedPositive);
        }
        // Bland: smallest-index column with positive reduced cost.
        let Some(e) = (0..rc.len()).find(|&j| enterable[j] && rc[j].is_positive()) else {
            return Some(PhaseEnd::Optimal);
        };
        // Ratio test; ties go to the smallest basic variable index.
        let width = tab.first().map_or(0, |r| r.len());
        let mut best: Option<(S, usize, usize)> = None; // (ratio, basis var, row)
        for (i, row) in tab.iter().enumerate() {
            if row[e].is_positive() {
                let ratio = row[width - 1].div(&row[e])?;
                let replace = match &best {
                    None => true,
                    Some((r, bv, _)) => match ratio.cmp_exact(r) {
                        Ordering::Less => true,
                        Ordering::Equal => basis[i] < *bv,
                        Ordering::Greater => false,
                    },
                };
                if replace {
                    best = Some((ratio, basis[i], i));
                }
            }
        }
        let Some((_, _, r)) = best else {
            return Some(PhaseEnd::Unbounded(e));
        };
        pivot(tab, basis, r, e, rc, val)?;
    }
}

fn pivot<S: Scalar>(
    tab: &mut [Vec<S>],
    basis: &mut [usize],
    r: usize,
    e: usize,
    rc: &mut [S],
    val: &mut S,
) -> Option<()> {
    let width = tab[r].len();
    let piv = tab[r][e].clone();
    if piv != S::one() {
        for x in tab[r].iter_mut() {
            if !x.is_zero() {
                *x = x.div(&piv)?;
            }
        }
    }
    let prow = std::mem::take(&mut tab[r]);
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[e].is_zero() {
            continue;
        }
        let f = std::mem::replace(&mut row[e], S::zero());
        for j in 0..width {
            if j != e && !prow[j].is_zero() {
                row[j] = row[j].sub(&prow[j].mul(&f)?)?;
            }
        }
    }
    if !rc[e].is_zero() {
        let f = std::mem::replace(&mut rc[e], S::zero());
        *val = val.add(&f.mul(&prow[width - 1])?)?;
        for (j, x) in rc.iter_mut().enumerate() {
            if j != e && !prow[j].is_zero() {
                *x = x.sub(&prow[j].mul(&f)?)?;
            }
        }
    }
    tab[r] = prow;
    basis[r] = e;
    Some(())
}
