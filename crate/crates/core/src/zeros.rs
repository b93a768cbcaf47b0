//! Minimal zeros of copositive matrices.
//!
//! A zero of a copositive matrix is found through its support: the index
//! set `I` carries a minimal zero exactly when the principal submatrix
//! `A_I` is positive semi-definite with corank 1 and its kernel generator
//! can be scaled to have strictly positive entries. The search enumerates
//! supports by increasing cardinality and prunes strict supersets of
//! accepted supports, which is sound because a support strictly containing
//! a minimal support cannot carry a minimal zero.
//!
//! Inputs are not certified copositive (that check is co-NP-complete); the
//! search instead surfaces any counter-evidence it stumbles on as an exact
//! witness vector.

pub mod float;

use crate::families::{mask_to_list, SupportFamily};
use crate::ratlin::{psd_status, rat_int, PsdVerdict, Rat, RatVec, SymmetricRationalMatrix};
use num_traits::{Signed, Zero as NumZero};
use thiserror::Error;

/// A nonnegative vector together with its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zero {
    /// The vector, scaled to coprime positive integers.
    pub vector: RatVec,
    /// Sorted 1-based indices of the strictly positive entries.
    pub support: Vec<usize>,
    /// Whether this zero is minimal (no zero has a strictly smaller support).
    pub minimal: bool,
}

/// The minimal zeros of a matrix, one normalized representative per support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalZeroSet {
    n: usize,
    zeros: Vec<Zero>,
}

impl MinimalZeroSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// The supports as a [`SupportFamily`].
    pub fn support_family(&self) -> SupportFamily {
        SupportFamily::new(self.n, &self.zeros.iter().map(|z| z.support.clone()).collect::<Vec<_>>())
            .expect("supports are valid index sets")
    }
}

/// Exact evidence that a matrix is not copositive: a nonnegative vector with
/// strictly negative quadratic value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("matrix is not copositive: witness x >= 0 with x^T A x = {}", crate::ratlin::fmt_rat(.value))]
pub struct NotCopositiveEvidence {
    pub witness: RatVec,
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("input is not a zero of the matrix: u^T A u = {}", crate::ratlin::fmt_rat(.0))]
    NotAZero(Rat),
    #[error("no minimal zero supported inside the residual; input is inconsistent or the matrix is not copositive")]
    NoMinimalZeroInside,
    #[error(transparent)]
    NotCopositive(#[from] NotCopositiveEvidence),
}

/// Per-zero diagnostic identities, all evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroDiagnostics {
    /// `u^T A u == 0`.
    pub is_zero: bool,
    /// The value `u^T A u`.
    pub value: Rat,
    /// `A u >= 0` entrywise.
    pub first_order_ok: bool,
    /// The vector `A u`.
    pub a_u: RatVec,
    /// `(A u)_i == 0` for every `i` in the support of `u`.
    pub support_orthogonality_ok: bool,
    /// For a minimal zero `u` and each support index `k`: with `u` scaled so
    /// `u_k = 1` and `I = Supp(u) \ {k}`, the identity `A_kk = u_I^T A_I u_I`
    /// holds. `None` when `u` is not a minimal zero of the matrix.
    pub pd_identity_ok: Option<bool>,
    /// Set when the evaluation itself certifies non-copositivity.
    pub not_copositive_evidence: Option<NotCopositiveEvidence>,
}

fn support_mask(u: &[Rat]) -> u16 {
    let mut m = 0u16;
    for (i, x) in u.iter().enumerate() {
        if !x.is_zero() {
            m |= 1 << i;
        }
    }
    m
}

fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).collect()
}

/// Embeds a subvector living on `idx` into dimension `n`.
fn embed(n: usize, idx: &[usize], v: &[Rat]) -> RatVec {
    let mut out = vec![Rat::zero(); n];
    for (pos, &i) in idx.iter().enumerate() {
        out[i] = v[pos].clone();
    }
    out
}

/// Builds evidence from a violated first-order condition: if `u` is a zero
/// but `(Au)_j < 0`, then `u + t e_j` has negative value for a suitable
/// exact `t > 0`.
fn first_order_evidence(
    a: &SymmetricRationalMatrix,
    u: &[Rat],
    au: &[Rat],
    j: usize,
) -> NotCopositiveEvidence {
    let ajj = a.get(j, j).clone();
    let t = if ajj.is_positive() {
        -&au[j] / &ajj
    } else {
        rat_int(1)
    };
    let mut x = u.to_vec();
    x[j] += &t;
    let value = a.quad_form(&x);
    debug_assert!(value.is_negative());
    NotCopositiveEvidence { witness: x, value }
}

/// Computes the minimal zeros of `a`.
///
/// Supports are enumerated in increasing cardinality, skipping strict
/// supersets of supports already accepted. A support `I` is accepted when
/// `A_I` is PSD with corank 1 and the kernel generator is sign-normalizable
/// to strictly positive entries; the normalized generator is the returned
/// zero.
///
/// The matrix is not assumed copositive. A candidate witness or kernel
/// vector that certifies `x^T A x < 0` for some `x >= 0` aborts the search
/// with that evidence.
pub fn find_minimal_zeros(
    a: &SymmetricRationalMatrix,
) -> Result<MinimalZeroSet, NotCopositiveEvidence> {
    let n = a.n();
    assert!(n <= 16, "support enumeration is limited to n <= 16");
    let mut accepted_masks: Vec<u16> = Vec::new();
    let mut zeros: Vec<Zero> = Vec::new();

    let full: u16 = if n == 16 { u16::MAX } else { (1 << n) - 1 };
    // All nonempty masks grouped by cardinality, each group ascending.
    for card in 1..=n {
        let mut mask_list: Vec<u16> = (1..=full).filter(|m| m.count_ones() as usize == card).collect();
        mask_list.sort_by(|&x, &y| crate::families::cmp_masks(x, y));
        for mask in mask_list {
            if accepted_masks.iter().any(|&s| s & mask == s) {
                continue;
            }
            let idx = mask_indices(mask);
            let sub = a.principal_submatrix(&idx);
            let st = psd_status(&sub);
            match st.verdict {
                PsdVerdict::NotPsd { witness } => {
                    // Only a sign-uniform witness certifies non-copositivity.
                    let nonneg = witness.iter().all(|x| !x.is_negative());
                    let nonpos = witness.iter().all(|x| !x.is_positive());
                    if nonneg || nonpos {
                        let w: RatVec = if nonneg {
                            witness
                        } else {
                            witness.iter().map(|x| -x).collect()
                        };
                        let wf = embed(n, &idx, &w);
                        let value = a.quad_form(&wf);
                        debug_assert!(value.is_negative());
                        return Err(NotCopositiveEvidence { witness: wf, value });
                    }
                }
                PsdVerdict::Psd if st.corank == 1 => {
                    let gen = &st.kernel_basis[0];
                    if gen.iter().all(|x| x.is_positive()) {
                        let u = embed(n, &idx, gen);
                        let au = a.mul_vec(&u);
                        if let Some(j) = au.iter().position(|x| x.is_negative()) {
                            return Err(first_order_evidence(a, &u, &au, j));
                        }
                        accepted_masks.push(mask);
                        zeros.push(Zero {
                            support: mask_to_list(mask),
                            vector: u,
                            minimal: true,
                        });
                    }
                }
                PsdVerdict::Psd => {}
            }
        }
    }
    Ok(MinimalZeroSet { n, zeros })
}

/// Decomposes a zero `u` of `a` into a positive combination of minimal
/// zeros, exactly: the returned pairs `(v^j, c_j)` satisfy
/// `sum c_j v^j = u` with `c_j > 0`.
///
/// The algorithm repeatedly subtracts the largest multiple of a minimal
/// zero supported inside the residual that keeps the residual nonnegative;
/// each step empties at least one more entry.
pub fn decompose_zero(
    a: &SymmetricRationalMatrix,
    u: &[Rat],
) -> Result<Vec<(Zero, Rat)>, DecomposeError> {
    assert_eq!(u.len(), a.n());
    assert!(u.iter().all(|x| !x.is_negative()), "input must be nonnegative");
    assert!(u.iter().any(|x| !x.is_zero()), "input must be nonzero");
    let value = a.quad_form(u);
    if !value.is_zero() {
        return Err(DecomposeError::NotAZero(value));
    }
    let mz = find_minimal_zeros(a)?;

    let mut residual = u.to_vec();
    let mut out: Vec<(Zero, Rat)> = Vec::new();
    while residual.iter().any(|x| !x.is_zero()) {
        let rmask = support_mask(&residual);
        let Some(z) = mz
            .zeros()
            .iter()
            .find(|z| {
                let zm = crate::families::list_to_mask(&z.support);
                zm & rmask == zm
            })
        else {
            return Err(DecomposeError::NoMinimalZeroInside);
        };
        // Largest multiple keeping the residual nonnegative.
        let c = z
            .support
            .iter()
            .map(|&i| &residual[i - 1] / &z.vector[i - 1])
            .min()
            .expect("support is nonempty");
        debug_assert!(c.is_positive());
        for i in 0..residual.len() {
            let upd = &z.vector[i] * &c;
            residual[i] -= upd;
        }
        debug_assert!(residual.iter().all(|x| !x.is_negative()));
        debug_assert!(a.quad_form(&residual).is_zero());
        out.push((z.clone(), c));
    }
    Ok(out)
}

/// Evaluates the per-zero identities for an arbitrary nonnegative vector.
pub fn zero_diagnostics(a: &SymmetricRationalMatrix, u: &[Rat]) -> ZeroDiagnostics {
    assert_eq!(u.len(), a.n());
    assert!(u.iter().all(|x| !x.is_negative()), "input must be nonnegative");
    assert!(u.iter().any(|x| !x.is_zero()), "input must be nonzero");

    let value = a.quad_form(u);
    let is_zero = value.is_zero();
    let au = a.mul_vec(u);
    let first_order_ok = au.iter().all(|x| !x.is_negative());
    let smask = support_mask(u);
    let sidx = mask_indices(smask);
    let support_orthogonality_ok = sidx.iter().all(|&i| au[i].is_zero());

    let mut evidence = None;
    if value.is_negative() {
        evidence = Some(NotCopositiveEvidence {
            witness: u.to_vec(),
            value: value.clone(),
        });
    } else if is_zero {
        if let Some(j) = au.iter().position(|x| x.is_negative()) {
            evidence = Some(first_order_evidence(a, u, &au, j));
        }
    }

    // The identity A_kk = u_I^T A_I u_I applies when u is a minimal zero.
    let pd_identity_ok = if is_zero && is_minimal_zero_of(a, u, smask) {
        let mut all_ok = true;
        for &k in &sidx {
            let rest: Vec<usize> = sidx.iter().copied().filter(|&i| i != k).collect();
            if rest.is_empty() {
                continue;
            }
            let sub = a.principal_submatrix(&rest);
            let ui: RatVec = rest.iter().map(|&i| u[i].clone()).collect();
            // Scale so that u_k = 1: compare A_kk * u_k^2 with u_I^T A_I u_I.
            let lhs = a.get(k, k) * &u[k] * &u[k];
            if lhs != sub.quad_form(&ui) {
                all_ok = false;
            }
        }
        Some(all_ok)
    } else {
        None
    };

    ZeroDiagnostics {
        is_zero,
        value,
        first_order_ok,
        a_u: au,
        support_orthogonality_ok,
        pd_identity_ok,
        not_copositive_evidence: evidence,
    }
}

fn is_minimal_zero_of(a: &SymmetricRationalMatrix, u: &[Rat], smask: u16) -> bool {
    let idx = mask_indices(smask);
    let sub = a.principal_submatrix(&idx);
    let st = psd_status(&sub);
    if !st.is_psd() || st.corank != 1 {
        return false;
    }
    let gen = &st.kernel_basis[0];
    if !gen.iter().all(|x| x.is_positive()) {
        return false;
    }
    // u restricted to its support must be proportional to the generator.
    let ui: RatVec = idx.iter().map(|&i| u[i].clone()).collect();
    let ratio = &ui[0] / &gen[0];
    ui.iter().zip(gen.iter()).all(|(x, g)| x == &(g * &ratio))
}
