//! Norm, transfer, and projector calculus for symmetric group actions on
//! exact rational modules.
//!
//! A `PermModule` carries matrices for the adjacent transpositions of Σ_n;
//! the defining relations are verified at construction, and the closure of
//! the generators re-derives every group element's matrix, flagging any
//! inconsistency. The norm is the exact sum over all n! element matrices,
//! the symmetrizer is norm/n!, and coinvariants are presented by the row
//! echelon form of the span of {v − σv} with first-nonzero pivoting.

use crate::linalg::{self, Mat, Rationals};
use crate::towers::{perm_compose, perm_identity, Perm, PermGroup};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

pub type QMat = Mat<BigRational>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransferError {
    #[error("dimension cap exceeded: {0}")]
    CapExceeded(u64),
    #[error("action matrices violate the defining relations: {0}")]
    RelationViolation(String),
    #[error("action matrix is singular")]
    SingularAction,
}

fn q_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn binomial_u64(n: u64, k: u64) -> u64 {
    crate::etale::binomial(n, k)
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product::<u64>().max(1)
}

/// A rational Σ_n-module: dimension, the symmetric group degree, and one
/// invertible matrix per adjacent transposition.
#[derive(Clone, Debug)]
pub struct PermModule {
    pub dim: usize,
    pub n: u32,
    pub action: Vec<QMat>,
}

impl PermModule {
    /// Validate invertibility and the standard presentation relations
    /// (involutions, braid, distant commutation).
    pub fn new(dim: usize, n: u32, action: Vec<QMat>) -> Result<PermModule, TransferError> {
        let f = Rationals;
        let expected_gens = (n as usize).saturating_sub(1);
        assert_eq!(action.len(), expected_gens, "one matrix per transposition");
        let id = linalg::identity(&f, dim);
        for (i, m) in action.iter().enumerate() {
            assert_eq!(m.len(), dim);
            if linalg::inverse(&f, m).is_none() {
                return Err(TransferError::SingularAction);
            }
            let sq = linalg::mat_mul(&f, m, m);
            if sq != id {
                return Err(TransferError::RelationViolation(format!(
                    "generator {i} is not an involution"
                )));
            }
        }
        for i in 0..expected_gens {
            for j in 0..i {
                let a = &action[i];
                let b = &action[j];
                if i == j + 1 {
                    let aba = linalg::mat_mul(&f, a, &linalg::mat_mul(&f, b, a));
                    let bab = linalg::mat_mul(&f, b, &linalg::mat_mul(&f, a, b));
                    if aba != bab {
                        return Err(TransferError::RelationViolation(format!(
                            "braid relation fails at ({j}, {i})"
                        )));
                    }
                } else {
                    let ab = linalg::mat_mul(&f, a, b);
                    let ba = linalg::mat_mul(&f, b, a);
                    if ab != ba {
                        return Err(TransferError::RelationViolation(format!(
                            "generators {j} and {i} do not commute"
                        )));
                    }
                }
            }
        }
        Ok(PermModule { dim, n, action })
    }

    /// The trivial one-dimensional module.
    pub fn trivial(n: u32) -> PermModule {
        let gens = (n as usize).saturating_sub(1);
        PermModule {
            dim: 1,
            n,
            action: vec![vec![vec![BigRational::one()]]; gens],
        }
    }

    /// The regular representation of Σ_n: basis indexed by group elements,
    /// generators acting by left multiplication.
    pub fn regular(n: u32) -> PermModule {
        let group = PermGroup::symmetric(n as usize);
        let elements = &group.elements;
        let order = elements.len();
        let mut action = Vec::new();
        for g in &group.generators {
            let mut m = linalg::zeros(&Rationals, order, order);
            for (col, w) in elements.iter().enumerate() {
                let img = perm_compose(g, w);
                let row = elements.binary_search(&img).expect("closed");
                m[row][col] = BigRational::one();
            }
            action.push(m);
        }
        PermModule {
            dim: order,
            n,
            action,
        }
    }

    /// Matrices of every group element, derived by closure from the
    /// generators. A disagreement between two derivations of the same
    /// element is a relation violation.
    pub fn element_matrices(&self) -> Result<Vec<(Perm, QMat)>, TransferError> {
        let f = Rationals;
        let deg = self.n as usize;
        let gens: Vec<Perm> = (0..deg.saturating_sub(1))
            .map(|i| {
                let mut p = perm_identity(deg);
                p.swap(i, i + 1);
                p
            })
            .collect();
        let mut table: BTreeMap<Perm, QMat> = BTreeMap::new();
        table.insert(perm_identity(deg), linalg::identity(&f, self.dim));
        let mut frontier = vec![perm_identity(deg)];
        while let Some(w) = frontier.pop() {
            let w_mat = table[&w].clone();
            for (g, g_mat) in gens.iter().zip(&self.action) {
                let next = perm_compose(g, &w);
                let next_mat = linalg::mat_mul(&f, g_mat, &w_mat);
                match table.get(&next) {
                    None => {
                        table.insert(next.clone(), next_mat);
                        frontier.push(next);
                    }
                    Some(existing) => {
                        if *existing != next_mat {
                            return Err(TransferError::RelationViolation(
                                "two derivations of one element disagree".into(),
                            ));
                        }
                    }
                }
            }
        }
        let expected = factorial(self.n);
        if table.len() as u64 != expected {
            return Err(TransferError::RelationViolation(format!(
                "closure has {} elements, expected {expected}",
                table.len()
            )));
        }
        Ok(table.into_iter().collect())
    }
}

/// The permutation action of Σ_n on (ℚ^d)^{⊗n}, permuting tensor slots.
pub fn tensor_power_module(d: usize, n: u32) -> Result<PermModule, TransferError> {
    let dim = (d as u64).checked_pow(n).filter(|&x| x <= 4096);
    let dim = dim.ok_or(TransferError::CapExceeded((d as u64).pow(n)))? as usize;
    let f = Rationals;
    let decode = |mut idx: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let i = idx % d;
                idx /= d;
                i
            })
            .collect()
    };
    let encode = |t: &[usize]| -> usize { t.iter().rev().fold(0, |acc, &i| acc * d + i) };
    let mut action = Vec::new();
    for k in 0..(n as usize).saturating_sub(1) {
        let mut m = linalg::zeros(&f, dim, dim);
        for col in 0..dim {
            let mut t = decode(col);
            t.swap(k, k + 1);
            m[encode(&t)][col] = BigRational::one();
        }
        action.push(m);
    }
    PermModule::new(dim, n, action)
}

/// Nm = Σ_{σ ∈ Σ_n} ρ(σ), the exact sum of all element matrices.
pub fn norm(m: &PermModule) -> Result<QMat, TransferError> {
    let f = Rationals;
    let mut acc = linalg::zeros(&f, m.dim, m.dim);
    for (_, mat) in m.element_matrices()? {
        acc = linalg::mat_add(&f, &acc, &mat);
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetrizerReport {
    pub dim: usize,
    pub n: u32,
    pub rank: usize,
    pub idempotent: bool,
}

/// The symmetrizer d_n = Nm/n!: checked idempotent; returns the projector,
/// a column basis of its image, and the report.
pub fn projector_sym(
    m: &PermModule,
) -> Result<(QMat, Vec<Vec<BigRational>>, SymmetrizerReport), TransferError> {
    let f = Rationals;
    let nm = norm(m)?;
    let inv_fact = BigRational::new(BigInt::one(), BigInt::from(factorial(m.n)));
    let d_n = linalg::mat_scale(&f, &inv_fact, &nm);
    let idempotent = linalg::mat_mul(&f, &d_n, &d_n) == d_n;
    let image = linalg::column_space_basis(&f, &d_n);
    let report = SymmetrizerReport {
        dim: m.dim,
        n: m.n,
        rank: image.len(),
        idempotent,
    };
    Ok((d_n, image, report))
}

/// Quotient presentation of the coinvariants V / span{v − σv}.
pub struct Coinvariants {
    /// Representative basis indices (the free columns).
    pub reps: Vec<usize>,
    /// Quotient map, dim_coinv × dim.
    pub pi: QMat,
}

pub fn coinvariants(m: &PermModule) -> Coinvariants {
    let f = Rationals;
    // span of {e_b − σ e_b} over the generators and all basis vectors
    let mut span_rows: QMat = Vec::new();
    for g_mat in &m.action {
        for b in 0..m.dim {
            let mut row = vec![BigRational::zero(); m.dim];
            row[b] += BigRational::one();
            for r in 0..m.dim {
                row[r] -= g_mat[r][b].clone();
            }
            if row.iter().any(|x| !x.is_zero()) {
                span_rows.push(row);
            }
        }
    }
    let ech = linalg::rref(&f, &span_rows);
    let pivots = ech.pivots.clone();
    let reps: Vec<usize> = (0..m.dim).filter(|c| !pivots.contains(c)).collect();
    let mut pi = linalg::zeros(&f, reps.len(), m.dim);
    for (qi, &r) in reps.iter().enumerate() {
        pi[qi][r] = BigRational::one();
    }
    for (row_idx, &p) in pivots.iter().enumerate() {
        // e_p ≡ −Σ_{free j} R[row][j] e_j modulo the span
        for (qi, &r) in reps.iter().enumerate() {
            pi[qi][p] = -ech.mat[row_idx][r].clone();
        }
    }
    Coinvariants { reps, pi }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferIdentityReport {
    pub dim: usize,
    pub n: u32,
    pub coinvariant_dim: usize,
    pub pi_tr_is_scaled_identity: bool,
    pub tr_pi_is_norm: bool,
}

/// The transfer pack: quotient map π to coinvariants, transfer tr with
/// π∘tr = n!·id, and the norm Nm = tr∘π.
pub struct NormTransferPack {
    pub module: PermModule,
    pub pi: QMat,
    pub tr: QMat,
    pub nm: QMat,
    pub report: TransferIdentityReport,
}

pub fn build_transfer(m: &PermModule) -> Result<NormTransferPack, TransferError> {
    let f = Rationals;
    let nm = norm(m)?;
    let coin = coinvariants(m);
    // tr([e_j]) = Nm e_j on the representative basis
    let tr: QMat = (0..m.dim)
        .map(|row| coin.reps.iter().map(|&j| nm[row][j].clone()).collect())
        .collect();
    let pi_tr = linalg::mat_mul(&f, &coin.pi, &tr);
    let scaled_id = linalg::mat_scale(
        &f,
        &q_int(factorial(m.n) as i64),
        &linalg::identity(&f, coin.reps.len()),
    );
    let tr_pi = linalg::mat_mul(&f, &tr, &coin.pi);
    let report = TransferIdentityReport {
        dim: m.dim,
        n: m.n,
        coinvariant_dim: coin.reps.len(),
        pi_tr_is_scaled_identity: pi_tr == scaled_id,
        tr_pi_is_norm: tr_pi == nm,
    };
    Ok(NormTransferPack {
        module: m.clone(),
        pi: coin.pi,
        tr,
        nm,
        report,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalIsoReport {
    pub d: usize,
    pub n: u32,
    pub dim: usize,
    pub u_factors_quotient: bool,
    pub xi_u_is_scaled_identity: bool,
    pub u_xi_over_factorial_is_identity: bool,
    pub invertible: bool,
    /// The matrix of u and its exact inverse, as rational strings.
    pub u_matrix: Vec<Vec<String>>,
    pub u_inverse: Vec<Vec<String>>,
}

/// The universal comparison between the coinvariant presentation and the
/// symmetrizer image: u is induced on the quotient, ξ = ϱ∘tr, and the two
/// composite identities ξ∘u = n!·id and u∘(ξ/n!) = id are asserted as
/// exact rational matrix equations, exhibiting u as an isomorphism.
pub fn verify_universal_iso(d: usize, n: u32) -> Result<UniversalIsoReport, TransferError> {
    let f = Rationals;
    let m = tensor_power_module(d, n)?;
    let (d_n, image, _) = projector_sym(&m)?;
    let k = image.len();
    // image basis as a dim × k matrix
    let mw: QMat = (0..m.dim)
        .map(|row| image.iter().map(|col| col[row].clone()).collect())
        .collect();
    // p: V → W, coordinates of d_n(v) in the image basis; solved exactly
    // from the augmented system [M_W | d_n]
    let aug: QMat = (0..m.dim)
        .map(|row| {
            let mut r = mw[row].clone();
            r.extend(d_n[row].iter().cloned());
            r
        })
        .collect();
    let ech = linalg::rref(&f, &aug);
    assert_eq!(ech.pivots, (0..k).collect::<Vec<_>>(), "image basis has full rank");
    let p: QMat = (0..k)
        .map(|row| ech.mat[row][k..].to_vec())
        .collect();
    // transfer into the image presentation: n! times the basis inclusion
    let tr_w = linalg::mat_scale(&f, &q_int(factorial(n) as i64), &mw);
    let coin = coinvariants(&m);
    let rho = coin.pi.clone();
    // u on the quotient: u ∘ ϱ = p, evaluated on representatives
    let u: QMat = (0..k)
        .map(|row| coin.reps.iter().map(|&j| p[row][j].clone()).collect())
        .collect();
    let u_factors_quotient = linalg::mat_mul(&f, &u, &rho) == p;
    let xi = linalg::mat_mul(&f, &rho, &tr_w);
    let xi_u = linalg::mat_mul(&f, &xi, &u);
    let scaled_id = linalg::mat_scale(
        &f,
        &q_int(factorial(n) as i64),
        &linalg::identity(&f, coin.reps.len()),
    );
    let xi_u_is_scaled_identity = xi_u == scaled_id;
    let inv_fact = BigRational::new(BigInt::one(), BigInt::from(factorial(n)));
    let u_inv = linalg::mat_scale(&f, &inv_fact, &xi);
    let u_xi = linalg::mat_mul(&f, &u, &u_inv);
    let u_xi_over_factorial_is_identity = u_xi == linalg::identity(&f, k);
    let fmt_mat = |m: &QMat| -> Vec<Vec<String>> {
        m.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    };
    Ok(UniversalIsoReport {
        d,
        n,
        dim: k,
        u_factors_quotient,
        xi_u_is_scaled_identity,
        u_xi_over_factorial_is_identity,
        invertible: u_factors_quotient
            && xi_u_is_scaled_identity
            && u_xi_over_factorial_is_identity,
        u_matrix: fmt_mat(&u),
        u_inverse: fmt_mat(&u_inv),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteSetTransferReport {
    pub set_size: usize,
    pub n: u32,
    pub tuple_dim: usize,
    pub multiset_dim: usize,
    pub pi_tr_is_scaled_identity: bool,
    pub tr_pi_is_norm_sum: bool,
}

/// The free-linearization model: ℚ[S^n] → ℚ[Sym^n S] with the transfer
/// sending a multiset to its orbit, weighted by n!/|orbit| per tuple, so
/// that both defining identities hold exactly.
pub fn finite_set_transfer(set_size: usize, n: u32) -> Result<FiniteSetTransferReport, TransferError> {
    let f = Rationals;
    let dim = (set_size as u64).checked_pow(n).filter(|&x| x <= 4096);
    let dim = dim.ok_or(TransferError::CapExceeded((set_size as u64).pow(n)))? as usize;
    let decode = |mut idx: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let i = idx % set_size.max(1);
                idx /= set_size.max(1);
                i
            })
            .collect()
    };
    // multiset index: sorted tuples, deterministic order
    let mut multisets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for idx in 0..dim {
        let mut t = decode(idx);
        t.sort_unstable();
        let next = multisets.len();
        multisets.entry(t).or_insert(next);
    }
    let ms_dim = multisets.len();
    // π: tuple ↦ its multiset
    let mut pi = linalg::zeros(&f, ms_dim, dim);
    let mut orbit_members: Vec<Vec<usize>> = vec![Vec::new(); ms_dim];
    for idx in 0..dim {
        let mut t = decode(idx);
        t.sort_unstable();
        let mi = multisets[&t];
        pi[mi][idx] = BigRational::one();
        orbit_members[mi].push(idx);
    }
    // tr: multiset ↦ (n!/|orbit|) Σ tuples in its orbit
    let mut tr = linalg::zeros(&f, dim, ms_dim);
    for (mi, members) in orbit_members.iter().enumerate() {
        let weight = BigRational::new(
            BigInt::from(factorial(n)),
            BigInt::from(members.len() as u64),
        );
        for &idx in members {
            tr[idx][mi] = weight.clone();
        }
    }
    // Σ_σ of the coordinate permutation matrices on ℚ[S^n]
    let tuple_module = tensor_power_module(set_size, n)?;
    let norm_sum = norm(&tuple_module)?;
    let pi_tr = linalg::mat_mul(&f, &pi, &tr);
    let scaled_id = linalg::mat_scale(
        &f,
        &q_int(factorial(n) as i64),
        &linalg::identity(&f, ms_dim),
    );
    let tr_pi = linalg::mat_mul(&f, &tr, &pi);
    Ok(FiniteSetTransferReport {
        set_size,
        n,
        tuple_dim: dim,
        multiset_dim: ms_dim,
        pi_tr_is_scaled_identity: pi_tr == scaled_id,
        tr_pi_is_norm_sum: tr_pi == norm_sum,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackInvariantsReport {
    pub set_size: usize,
    pub n: u32,
    pub image_dim: usize,
    pub invariants_dim: usize,
    pub subspaces_equal: bool,
}

/// For functions F = Maps(−, ℚ): the image of the pullback along
/// S^n → Sym^n S equals the subspace of Σ_n-invariant functions. Both are
/// computed as exact subspaces and compared by canonical form.
pub fn pullback_invariants_check(
    set_size: usize,
    n: u32,
) -> Result<PullbackInvariantsReport, TransferError> {
    let f = Rationals;
    let dim = (set_size as u64).checked_pow(n).filter(|&x| x <= 4096);
    let dim = dim.ok_or(TransferError::CapExceeded((set_size as u64).pow(n)))? as usize;
    let decode = |mut idx: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let i = idx % set_size.max(1);
                idx /= set_size.max(1);
                i
            })
            .collect()
    };
    let mut multisets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for idx in 0..dim {
        let mut t = decode(idx);
        t.sort_unstable();
        let next = multisets.len();
        multisets.entry(t).or_insert(next);
    }
    // image of the pullback: spanned by indicator functions of the fibers
    let mut image_rows: QMat = Vec::new();
    for (_, &mi) in multisets.iter() {
        let mut row = vec![BigRational::zero(); dim];
        for idx in 0..dim {
            let mut t = decode(idx);
            t.sort_unstable();
            if multisets[&t] == mi {
                row[idx] = BigRational::one();
            }
        }
        image_rows.push(row);
    }
    // invariant functions: kernel of (A_σ − I) stacked over generators,
    // where A_σ is precomposition with σ
    let tuple_module = tensor_power_module(set_size, n)?;
    let mut stacked: QMat = Vec::new();
    for g in &tuple_module.action {
        // precomposition acts by the transpose of the slot permutation
        let gt = linalg::transpose(g);
        for (i, row) in gt.iter().enumerate() {
            let mut r = row.clone();
            r[i] -= BigRational::one();
            if r.iter().any(|x| !x.is_zero()) {
                stacked.push(r);
            }
        }
    }
    let invariants = if stacked.is_empty() {
        linalg::identity(&f, dim)
    } else {
        linalg::kernel_basis(&f, &stacked)
    };
    let image_canon = linalg::row_space_basis(&f, &image_rows);
    let inv_canon = linalg::row_space_basis(&f, &invariants);
    let subspaces_equal = image_canon == inv_canon;
    Ok(PullbackInvariantsReport {
        set_size,
        n,
        image_dim: image_canon.len(),
        invariants_dim: inv_canon.len(),
        subspaces_equal,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleKunnethReport {
    pub d_v: usize,
    pub d_w: usize,
    pub n: u32,
    pub symmetrizer_rank: usize,
    pub coinvariant_dim: usize,
    pub binomial: u64,
    pub kunneth_sum: u64,
    pub all_equal: bool,
}

/// dim Sym^n(V ⊕ W) computed three independent ways (symmetrizer rank,
/// coinvariant dimension, binomial count) plus the coproduct sum rule
/// Σ_{i+j=n} dim Sym^i V · dim Sym^j W.
pub fn kunneth_modules(d_v: usize, d_w: usize, n: u32) -> Result<ModuleKunnethReport, TransferError> {
    let d = d_v + d_w;
    let m = tensor_power_module(d, n)?;
    let (_, image, rep) = projector_sym(&m)?;
    let coin = coinvariants(&m);
    let expected = binomial_u64((d + n as usize - 1) as u64, n as u64);
    let kunneth_sum: u64 = (0..=n)
        .map(|i| {
            binomial_u64((d_v as u64 + i as u64).saturating_sub(1), i as u64)
                * binomial_u64((d_w as u64 + (n - i) as u64).saturating_sub(1), (n - i) as u64)
        })
        .sum();
    let all_equal = rep.idempotent
        && image.len() as u64 == expected
        && coin.reps.len() as u64 == expected
        && kunneth_sum == expected;
    Ok(ModuleKunnethReport {
        d_v,
        d_w,
        n,
        symmetrizer_rank: image.len(),
        coinvariant_dim: coin.reps.len(),
        binomial: expected,
        kunneth_sum,
        all_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn traces_of_slot_permutations() {
        // swap on (Q^2)^⊗2 fixes the two diagonal tensors
        let m = tensor_power_module(2, 2).unwrap();
        let swap = &m.action[0];
        let trace: BigRational = (0..4).map(|i| swap[i][i].clone()).sum();
        assert_eq!(trace, q_int(2));

        // a 3-cycle on (Q^2)^⊗3 fixes only the diagonal tensors
        let m3 = tensor_power_module(2, 3).unwrap();
        let elements = m3.element_matrices().unwrap();
        let three_cycle = elements
            .iter()
            .find(|(p, _)| *p == vec![1, 2, 0])
            .map(|(_, m)| m)
            .unwrap();
        let trace: BigRational = (0..8).map(|i| three_cycle[i][i].clone()).sum();
        assert_eq!(trace, q_int(2));
    }

    #[test]
    fn norm_named_cases() {
        // trivial module: Nm = n!·id
        let t = PermModule::trivial(3);
        assert_eq!(norm(&t).unwrap(), vec![vec![q_int(6)]]);

        // regular representation of Σ2: the all-ones matrix
        let reg = PermModule::regular(2);
        let nm = norm(&reg).unwrap();
        assert_eq!(nm, vec![vec![q_int(1), q_int(1)], vec![q_int(1), q_int(1)]]);

        // Nm ∘ Nm = n! · Nm
        let m = tensor_power_module(2, 2).unwrap();
        let nm = norm(&m).unwrap();
        let f = Rationals;
        assert_eq!(
            linalg::mat_mul(&f, &nm, &nm),
            linalg::mat_scale(&f, &q_int(2), &nm)
        );
        let trace: BigRational = (0..4).map(|i| nm[i][i].clone()).sum();
        assert_eq!(trace, q_int(6)); // tr(id) + tr(swap) = 4 + 2
    }

    #[test]
    fn symmetrizer_ranks() {
        for (d, n, expect) in [(1usize, 3u32, 1u64), (2, 2, 3), (3, 2, 6), (2, 3, 4)] {
            let m = tensor_power_module(d, n).unwrap();
            let (_, image, rep) = projector_sym(&m).unwrap();
            assert!(rep.idempotent);
            assert_eq!(image.len() as u64, expect, "d={d} n={n}");
            assert_eq!(
                expect,
                binomial_u64((d + n as usize - 1) as u64, n as u64)
            );
        }
    }

    #[test]
    fn transfer_identities() {
        for (d, n) in [(1usize, 2u32), (2, 2), (2, 3), (3, 2)] {
            let m = tensor_power_module(d, n).unwrap();
            let pack = build_transfer(&m).unwrap();
            assert!(pack.report.pi_tr_is_scaled_identity, "d={d} n={n}");
            assert!(pack.report.tr_pi_is_norm, "d={d} n={n}");
            assert_eq!(
                pack.report.coinvariant_dim as u64,
                binomial_u64((d + n as usize - 1) as u64, n as u64)
            );
        }
    }

    #[test]
    fn universal_iso_named_cases() {
        let rep = verify_universal_iso(1, 2).unwrap();
        assert!(rep.invertible);
        assert_eq!(rep.dim, 1);

        let rep = verify_universal_iso(2, 2).unwrap();
        assert!(rep.invertible);
        assert_eq!(rep.dim, 3);

        let rep = verify_universal_iso(3, 3).unwrap();
        assert!(rep.invertible);
        assert_eq!(rep.dim, 10);
    }

    #[test]
    fn finite_set_transfer_named_cases() {
        // one-element set: tr is multiplication by n!
        let rep = finite_set_transfer(1, 3).unwrap();
        assert!(rep.pi_tr_is_scaled_identity && rep.tr_pi_is_norm_sum);
        assert_eq!((rep.tuple_dim, rep.multiset_dim), (1, 1));

        let rep = finite_set_transfer(2, 2).unwrap();
        assert!(rep.pi_tr_is_scaled_identity && rep.tr_pi_is_norm_sum);
        assert_eq!((rep.tuple_dim, rep.multiset_dim), (4, 3));

        let rep = finite_set_transfer(3, 2).unwrap();
        assert!(rep.pi_tr_is_scaled_identity && rep.tr_pi_is_norm_sum);
        assert_eq!(rep.multiset_dim, 6);
    }

    #[test]
    fn pullback_invariants_named_cases() {
        let rep = pullback_invariants_check(1, 2).unwrap();
        assert!(rep.subspaces_equal);
        assert_eq!(rep.image_dim, 1);

        let rep = pullback_invariants_check(2, 2).unwrap();
        assert!(rep.subspaces_equal);
        assert_eq!((rep.image_dim, rep.invariants_dim), (3, 3));

        // n = 1: everything is invariant
        let rep = pullback_invariants_check(3, 1).unwrap();
        assert!(rep.subspaces_equal);
        assert_eq!(rep.image_dim, 3);
    }

    #[test]
    fn module_kunneth_named_cases() {
        let rep = kunneth_modules(1, 1, 2).unwrap();
        assert!(rep.all_equal);
        assert_eq!(rep.binomial, 3);

        let rep = kunneth_modules(2, 1, 2).unwrap();
        assert!(rep.all_equal);
        assert_eq!(rep.binomial, 6);

        let rep = kunneth_modules(2, 2, 3).unwrap();
        assert!(rep.all_equal);
        assert_eq!(rep.binomial, 20);
    }

    #[test]
    fn bad_actions_are_rejected() {
        // a non-involution generator
        let doubling = vec![vec![q_int(2)]];
        let res = PermModule::new(1, 2, vec![doubling]);
        assert!(matches!(res, Err(TransferError::RelationViolation(_))));
    }
}
