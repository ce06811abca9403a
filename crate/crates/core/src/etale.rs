//! Tensor powers of finite field extensions, their symmetric-group
//! invariant subalgebras, étale decomposition, hom counting, and the
//! section-level comparison bijection.
//!
//! Throughout, 𝔽_q is a `GaloisField` over p and L = 𝔽_{q^r} is an
//! `ExtField` over it with basis v_i = t^i. Elements of L^{⊗n} are vectors
//! of 𝔽_q coefficients indexed by n-tuples (i_1, ..., i_n) ∈ [0, r)^n; the
//! symmetric group permutes tensor slots. Everything is exact.

use crate::finite::{prime_power, ExtField, FiniteFieldError, GaloisField};
use crate::linalg::FieldOps;
use itertools::Itertools;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EtaleError {
    #[error("tensor power dimension {0} exceeds the cap 256")]
    TensorTooLarge(u64),
    #[error("idempotent search space {0} exceeds the cap")]
    SearchTooLarge(u128),
    #[error("splitting field degree {0} exceeds the enumeration cap")]
    SplittingFieldTooLarge(u32),
    #[error("algebra is not étale: Frobenius is singular")]
    NotEtale,
    #[error("extension degree {0} out of range 1..=4")]
    BadDegree(u32),
    #[error(transparent)]
    Field(#[from] FiniteFieldError),
    #[error("input stanza {line}: {msg}")]
    Input { line: usize, msg: String },
}

/// 𝔽_q-linear field context for vectors of `GaloisField` indices.
#[derive(Clone)]
pub struct BaseField<'a>(pub &'a GaloisField);

impl FieldOps for BaseField<'_> {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.0.add(*a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.0.sub(*a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.0.mul(*a, *b)
    }
    fn inv(&self, a: &u64) -> u64 {
        self.0.inv(*a)
    }
}

/// L = 𝔽_{q^r} over 𝔽_q.
#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    pub q: u64,
    pub r: u32,
    pub ext: ExtField,
}

impl ExtensionSpec {
    /// Canonical extension with the deterministic smallest modulus.
    pub fn canonical(q: u64, r: u32) -> Result<ExtensionSpec, EtaleError> {
        if !(1..=4).contains(&r) {
            return Err(EtaleError::BadDegree(r));
        }
        let (p, e) = prime_power(q)?;
        let base = GaloisField::new(p, e);
        Ok(ExtensionSpec {
            q,
            r,
            ext: ExtField::canonical(base, r),
        })
    }

    /// With an explicit modulus over 𝔽_q (constant term first, monic);
    /// rejected if reducible.
    pub fn with_modulus(q: u64, modulus: Vec<u64>) -> Result<ExtensionSpec, EtaleError> {
        let r = (modulus.len() - 1) as u32;
        if !(1..=4).contains(&r) {
            return Err(EtaleError::BadDegree(r));
        }
        let (p, e) = prime_power(q)?;
        let base = GaloisField::new(p, e);
        Ok(ExtensionSpec {
            q,
            r,
            ext: ExtField::new(base, modulus)?,
        })
    }

    pub fn base(&self) -> &GaloisField {
        &self.ext.base
    }
}

/// L^{⊗_𝔽_q n} with the slot-permutation action of Σ_n.
pub struct TensorPowerAlgebra {
    pub spec: ExtensionSpec,
    pub n: u32,
    pub dim: usize,
}

impl TensorPowerAlgebra {
    pub fn new(spec: ExtensionSpec, n: u32) -> Result<TensorPowerAlgebra, EtaleError> {
        let dim = (spec.r as u64).checked_pow(n).filter(|&d| d <= 256);
        let dim = dim.ok_or_else(|| EtaleError::TensorTooLarge((spec.r as u64).pow(n)))? as usize;
        Ok(TensorPowerAlgebra { spec, n, dim })
    }

    pub fn r(&self) -> usize {
        self.spec.r as usize
    }

    /// Index of the basis tensor v_{t[0]} ⊗ ... ⊗ v_{t[n-1]}.
    pub fn tuple_index(&self, t: &[usize]) -> usize {
        let r = self.r();
        t.iter().rev().fold(0, |acc, &i| acc * r + i)
    }

    pub fn index_tuple(&self, mut idx: usize) -> Vec<usize> {
        let r = self.r();
        (0..self.n)
            .map(|_| {
                let i = idx % r;
                idx /= r;
                i
            })
            .collect()
    }

    pub fn zero_vec(&self) -> Vec<u64> {
        vec![0; self.dim]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.spec.base();
        a.iter().zip(b).map(|(x, y)| f.add(*x, *y)).collect()
    }

    /// Product of two general elements, expanded in the tensor basis.
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.spec.base().clone();
        let ext = &self.spec.ext;
        let mut out = self.zero_vec();
        for (ia, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            let ta = self.index_tuple(ia);
            for (ib, &cb) in b.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let tb = self.index_tuple(ib);
                let coeff = f.mul(ca, cb);
                // per-slot products in L, then the outer tensor expansion
                let slots: Vec<Vec<u64>> = ta
                    .iter()
                    .zip(&tb)
                    .map(|(&i, &j)| ext.mul(&ext.basis(i), &ext.basis(j)))
                    .collect();
                self.accumulate_tensor(&mut out, &slots, coeff, 0, 0, 1);
            }
        }
        out
    }

    fn accumulate_tensor(
        &self,
        out: &mut [u64],
        slots: &[Vec<u64>],
        scale: u64,
        slot: usize,
        idx: usize,
        stride: usize,
    ) {
        let f = self.spec.base();
        if slot == slots.len() {
            out[idx] = f.add(out[idx], scale);
            return;
        }
        for (m, &c) in slots[slot].iter().enumerate() {
            if c == 0 {
                continue;
            }
            self.accumulate_tensor(
                out,
                slots,
                f.mul(scale, c),
                slot + 1,
                idx + m * stride,
                stride * self.r(),
            );
        }
    }

    /// Apply a permutation of tensor slots to a vector: slot k of the
    /// result reads slot perm[k] of the argument's index tuple.
    pub fn permute(&self, v: &[u64], perm: &[usize]) -> Vec<u64> {
        let mut out = self.zero_vec();
        for (idx, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = self.index_tuple(idx);
            let img: Vec<usize> = (0..t.len()).map(|k| t[perm[k]]).collect();
            out[self.tuple_index(&img)] = c;
        }
        out
    }
}

/// The Σ_n-invariant subalgebra with its orbit-sum basis, one vector per
/// multiset of basis indices.
pub struct InvariantSubalgebra {
    pub algebra: TensorPowerAlgebra,
    /// Sorted index multisets, ascending.
    pub multisets: Vec<Vec<usize>>,
    /// Orbit-sum vectors, aligned with `multisets`.
    pub basis: Vec<Vec<u64>>,
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Orbit-sum basis of (L^{⊗n})^{Σ_n}: for each multiset, the sum over its
/// distinct slot arrangements.
pub fn build_invariants(spec: ExtensionSpec, n: u32) -> Result<InvariantSubalgebra, EtaleError> {
    let algebra = TensorPowerAlgebra::new(spec, n)?;
    let r = algebra.r();
    let mut multisets: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![0usize; n as usize];
    gen_multisets(r, n as usize, 0, 0, &mut stack, &mut multisets);
    let mut basis = Vec::with_capacity(multisets.len());
    for m in &multisets {
        let mut v = algebra.zero_vec();
        for perm in m.iter().copied().permutations(m.len()).unique() {
            v[algebra.tuple_index(&perm)] = 1;
        }
        basis.push(v);
    }
    debug_assert_eq!(
        multisets.len() as u64,
        binomial(r as u64 + n as u64 - 1, n as u64)
    );
    Ok(InvariantSubalgebra {
        algebra,
        multisets,
        basis,
    })
}

pub(crate) fn gen_multisets(
    r: usize,
    n: usize,
    depth: usize,
    min: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == n {
        out.push(stack.clone());
        return;
    }
    for i in min..r {
        stack[depth] = i;
        gen_multisets(r, n, depth + 1, i, stack, out);
    }
}

impl InvariantSubalgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dim_expected(&self) -> u64 {
        binomial(
            self.algebra.r() as u64 + self.algebra.n as u64 - 1,
            self.algebra.n as u64,
        )
    }

    /// Every adjacent-transposition slot swap fixes every basis vector.
    pub fn basis_is_fixed(&self) -> bool {
        let n = self.algebra.n as usize;
        if n <= 1 {
            return true;
        }
        (0..n - 1).all(|k| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(k, k + 1);
            self.basis
                .iter()
                .all(|v| self.algebra.permute(v, &perm) == *v)
        })
    }

    /// Express an algebra element in the orbit-sum basis, if possible; the
    /// coefficient of a multiset is read off at its sorted representative
    /// and the expansion is then verified exactly.
    pub fn expand(&self, v: &[u64]) -> Option<Vec<u64>> {
        let f = self.algebra.spec.base().clone();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for m in &self.multisets {
            coeffs.push(v[self.algebra.tuple_index(m)]);
        }
        // verify: Σ coeff_i · basis_i == v
        let mut acc = self.algebra.zero_vec();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (slot, &bv) in b.iter().enumerate() {
                if bv != 0 {
                    acc[slot] = f.add(acc[slot], f.mul(*c, bv));
                }
            }
        }
        if acc == v {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Multiplication table in the orbit-sum basis; `None` if some product
    /// fails to re-expand (closure is asserted, not assumed).
    pub fn multiplication_table(&self) -> Option<Vec<Vec<Vec<u64>>>> {
        let k = self.dim();
        let mut table = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..=i {
                let prod = self.algebra.mul(&self.basis[i], &self.basis[j]);
                let coeffs = self.expand(&prod)?;
                table[i][j] = coeffs.clone();
                table[j][i] = coeffs;
            }
        }
        Some(table)
    }

    /// Package as an abstract commutative algebra over 𝔽_q.
    pub fn as_algebra(&self) -> Result<CommAlgebra, EtaleError> {
        let table = self.multiplication_table().ok_or(EtaleError::NotEtale)?;
        // the unit of L^{⊗n} is v_0 ⊗ ... ⊗ v_0, the multiset (0,...,0)
        let one_pos = self
            .multisets
            .iter()
            .position(|m| m.iter().all(|&i| i == 0))
            .expect("unit multiset present");
        let mut one = vec![0u64; self.dim()];
        one[one_pos] = 1;
        Ok(CommAlgebra {
            fq: self.algebra.spec.base().clone(),
            dim: self.dim(),
            table,
            one,
        })
    }
}

/// A finite-dimensional commutative 𝔽_q-algebra given by structure
/// constants.
#[derive(Clone)]
pub struct CommAlgebra {
    pub fq: GaloisField,
    pub dim: usize,
    /// table[i][j] = coordinates of e_i · e_j
    pub table: Vec<Vec<Vec<u64>>>,
    pub one: Vec<u64>,
}

impl CommAlgebra {
    /// The split étale algebra 𝔽_q × ... × 𝔽_q (componentwise product).
    pub fn split(q: u64, k: usize) -> Result<CommAlgebra, EtaleError> {
        let (p, e) = prime_power(q)?;
        let fq = GaloisField::new(p, e);
        let mut table = vec![vec![vec![0u64; k]; k]; k];
        for (i, row) in table.iter_mut().enumerate() {
            row[i][i] = 1;
        }
        Ok(CommAlgebra {
            fq,
            dim: k,
            table,
            one: vec![1; k],
        })
    }

    /// 𝔽_{q^r} viewed as an algebra over 𝔽_q in the power basis.
    pub fn field_extension(spec: &ExtensionSpec) -> CommAlgebra {
        let r = spec.r as usize;
        let ext = &spec.ext;
        let mut table = vec![vec![vec![0u64; r]; r]; r];
        for i in 0..r {
            for j in 0..r {
                table[i][j] = ext.mul(&ext.basis(i), &ext.basis(j));
            }
        }
        let mut one = vec![0u64; r];
        one[0] = 1;
        CommAlgebra {
            fq: spec.base().clone(),
            dim: r,
            table,
            one,
        }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = &self.fq;
        let mut out = vec![0u64; self.dim];
        for (i, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in b.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let c = f.mul(ca, cb);
                for (k, &t) in self.table[i][j].iter().enumerate() {
                    if t != 0 {
                        out[k] = f.add(out[k], f.mul(c, t));
                    }
                }
            }
        }
        out
    }

    /// x ↦ x^q, computed by square-and-multiply through the table.
    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        let mut e = self.fq.size();
        let mut acc = self.one.clone();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub dim: usize,
    /// Field-factor degrees, ascending.
    pub degrees: Vec<u32>,
}

/// Split an étale algebra into field factors via the primitive idempotents
/// of its Frobenius-fixed subalgebra.
pub fn decompose_etale(b: &CommAlgebra) -> Result<DecompositionReport, EtaleError> {
    let f = BaseField(&b.fq);
    // Frobenius matrix, columns = φ(e_i)
    let cols: Vec<Vec<u64>> = (0..b.dim)
        .map(|i| {
            let mut e = vec![0u64; b.dim];
            e[i] = 1;
            b.frobenius(&e)
        })
        .collect();
    let frob: Vec<Vec<u64>> = (0..b.dim)
        .map(|row| (0..b.dim).map(|col| cols[col][row]).collect())
        .collect();
    if crate::linalg::rank(&f, &frob) != b.dim {
        return Err(EtaleError::NotEtale);
    }
    // fixed subalgebra = kernel of (φ − id)
    let mut shifted = frob.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] = b.fq.sub(row[i], 1);
    }
    let fixed = crate::linalg::kernel_basis(&f, &shifted);
    let s = fixed.len();
    let q = b.fq.size();
    let space = (q as u128).pow(s as u32);
    if space > 1 << 20 {
        return Err(EtaleError::SearchTooLarge(space));
    }
    // all idempotents of an étale algebra are Frobenius-fixed; scan the
    // fixed subalgebra exhaustively
    let mut idempotents: Vec<Vec<u64>> = Vec::new();
    for code in 0..space {
        let mut v = vec![0u64; b.dim];
        let mut rem = code;
        for basis_vec in &fixed {
            let lambda = (rem % q as u128) as u64;
            rem /= q as u128;
            if lambda != 0 {
                for (k, &c) in basis_vec.iter().enumerate() {
                    v[k] = b.fq.add(v[k], b.fq.mul(lambda, c));
                }
            }
        }
        if v.iter().any(|&c| c != 0) && b.mul(&v, &v) == v {
            idempotents.push(v);
        }
    }
    // primitive = atoms: the only subidempotents are 0 and itself
    let zero = vec![0u64; b.dim];
    let primitive: Vec<&Vec<u64>> = idempotents
        .iter()
        .filter(|e| {
            idempotents.iter().all(|g| {
                let prod = b.mul(e, g);
                prod != *g || g == *e || *g == zero
            })
        })
        .collect();
    // sanity: the primitive idempotents decompose 1
    let mut sum = vec![0u64; b.dim];
    for e in &primitive {
        sum = e.iter().zip(&sum).map(|(x, y)| b.fq.add(*x, *y)).collect();
    }
    if sum != b.one {
        return Err(EtaleError::NotEtale);
    }
    let mut degrees: Vec<u32> = primitive
        .iter()
        .map(|e| {
            // dim of the ideal B·e = rank of multiplication by e
            let mul_e: Vec<Vec<u64>> = (0..b.dim)
                .map(|row| {
                    (0..b.dim)
                        .map(|col| {
                            let mut basis_vec = vec![0u64; b.dim];
                            basis_vec[col] = 1;
                            b.mul(&basis_vec, e)[row]
                        })
                        .collect()
                })
                .collect();
            crate::linalg::rank(&f, &mul_e) as u32
        })
        .collect();
    degrees.sort_unstable();
    if degrees.iter().map(|&d| d as usize).sum::<usize>() != b.dim {
        return Err(EtaleError::NotEtale);
    }
    Ok(DecompositionReport {
        dim: b.dim,
        degrees,
    })
}

/// #Hom_{𝔽_q-alg}(B, 𝔽_{q^M}) = Σ_j d_j · [d_j | M].
pub fn count_homs(b: &CommAlgebra, m: u32) -> Result<u64, EtaleError> {
    let dec = decompose_etale(b)?;
    Ok(dec
        .degrees
        .iter()
        .filter(|&&d| m % d == 0)
        .map(|&d| d as u64)
        .sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    pub q: u64,
    pub r: u32,
    pub n: u32,
    pub dim_expected: u64,
    pub dim_actual: usize,
    pub factors: Vec<u32>,
    pub homs: u64,
    pub splitting_degree: u32,
    pub well_defined: bool,
    pub injective: bool,
    pub bijection_ok: bool,
}

/// The section-level comparison map: multisets of n embeddings L → K sent
/// to restrictions of their tensor product to the invariant subalgebra.
/// Checked to be well defined, injective, and a bijection by cardinality.
pub fn theta_bijection_check(spec: &ExtensionSpec, n: u32) -> Result<ThetaReport, EtaleError> {
    let inv = build_invariants(spec.clone(), n)?;
    let b = inv.as_algebra()?;
    let dec = decompose_etale(&b)?;
    let m = dec
        .degrees
        .iter()
        .fold(spec.r as u64, |acc, &d| num_integer::lcm(acc, d as u64))
        as u32;
    let (p, e) = prime_power(spec.q)?;
    if (p as u128).pow(e * m) > 1 << 22 {
        return Err(EtaleError::SplittingFieldTooLarge(m));
    }
    let k_field = GaloisField::new(p, e * m);

    // embed 𝔽_q into K: lexicographically smallest root of its modulus
    let base = spec.base();
    let base_mod_in_k: Vec<u64> = base.modulus.iter().map(|&c| k_field.from_int(c)).collect();
    let iota_root = *k_field
        .roots(&base_mod_in_k)
        .first()
        .expect("the splitting field contains 𝔽_q");
    let embed_base = |x: u64| -> u64 {
        let digits = base.decode(x);
        let mut acc = 0u64;
        for (i, &c) in digits.iter().enumerate() {
            let term = k_field.mul(k_field.from_int(c), k_field.pow(iota_root, i as u64));
            acc = k_field.add(acc, term);
        }
        acc
    };

    // roots of the degree-r modulus of L in K give the r embeddings
    let ext_mod_in_k: Vec<u64> = spec.ext.modulus.iter().map(|&c| embed_base(c)).collect();
    let roots = k_field.roots(&ext_mod_in_k);
    debug_assert_eq!(roots.len(), spec.r as usize, "L/𝔽_q splits in K");

    // value of (f_{s_1} ⊗ ... ⊗ f_{s_n}) on one orbit-sum basis vector
    let value_on = |assignment: &[usize], mi: usize| -> u64 {
        let alg = &inv.algebra;
        let mut acc = 0u64;
        for (idx, &c) in inv.basis[mi].iter().enumerate() {
            if c == 0 {
                continue;
            }
            let tuple = alg.index_tuple(idx);
            let mut prod = embed_base(c);
            for (slot, &i) in tuple.iter().enumerate() {
                prod = k_field.mul(prod, k_field.pow(roots[assignment[slot]], i as u64));
            }
            acc = k_field.add(acc, prod);
        }
        acc
    };

    // all n-multisets of embedding indices
    let mut emb_multisets: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![0usize; n as usize];
    gen_multisets(spec.r as usize, n as usize, 0, 0, &mut stack, &mut emb_multisets);

    let mut well_defined = true;
    let mut images: Vec<Vec<u64>> = Vec::new();
    for ms in &emb_multisets {
        let canonical: Vec<u64> = (0..inv.dim()).map(|mi| value_on(ms, mi)).collect();
        // independence of the ordering of the tensor factors
        for perm in ms.iter().copied().permutations(ms.len()).unique() {
            let other: Vec<u64> = (0..inv.dim()).map(|mi| value_on(&perm, mi)).collect();
            if other != canonical {
                well_defined = false;
            }
        }
        images.push(canonical);
    }
    let distinct: BTreeSet<&Vec<u64>> = images.iter().collect();
    let injective = distinct.len() == images.len();
    let homs = count_homs(&b, m)?;
    let dim_expected = inv.dim_expected();
    let bijection_ok = well_defined
        && injective
        && images.len() as u64 == dim_expected
        && homs == dim_expected;
    Ok(ThetaReport {
        q: spec.q,
        r: spec.r,
        n,
        dim_expected,
        dim_actual: inv.dim(),
        factors: dec.degrees,
        homs,
        splitting_degree: m,
        well_defined,
        injective,
        bijection_ok,
    })
}

/// Elementary symmetric values (e_1, ..., e_n) of a multiset in a finite
/// field: the lower coefficients of Π (T + v_i).
pub fn elementary_symmetric_signature(field: &GaloisField, values: &[u64]) -> Vec<u64> {
    let n = values.len();
    let mut coeffs = vec![0u64; n + 1];
    coeffs[0] = 1;
    let mut used = 0;
    for &v in values {
        used += 1;
        for k in (1..=used).rev() {
            coeffs[k] = field.add(coeffs[k], field.mul(coeffs[k - 1], v));
        }
    }
    coeffs[1..].to_vec()
}

/// Parse the extension input format `q=...; r=...; modulus=<poly in t>`,
/// one per stanza (blank-line separated). Modulus coefficients are integer
/// literals (mapped into the prime subfield); omit the modulus for the
/// canonical choice.
pub fn parse_extensions(src: &str) -> Result<Vec<ExtensionSpec>, EtaleError> {
    let mut out = Vec::new();
    for (stanza_idx, stanza) in src
        .split("\n\n")
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .enumerate()
    {
        let line = stanza_idx + 1;
        let err = |msg: &str| EtaleError::Input {
            line,
            msg: msg.to_string(),
        };
        let text = stanza.replace('\n', " ");
        let mut q: Option<u64> = None;
        let mut r: Option<u32> = None;
        let mut modulus_src: Option<String> = None;
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| err(&format!("expected key=value, got `{part}`")))?;
            match key.trim() {
                "q" => q = Some(value.trim().parse().map_err(|_| err("bad q"))?),
                "r" => r = Some(value.trim().parse().map_err(|_| err("bad r"))?),
                "modulus" => modulus_src = Some(value.trim().to_string()),
                other => return Err(err(&format!("unknown key `{other}`"))),
            }
        }
        let q = q.ok_or_else(|| err("missing q"))?;
        let r = r.ok_or_else(|| err("missing r"))?;
        let spec = match modulus_src {
            None => ExtensionSpec::canonical(q, r)?,
            Some(src) => {
                let (p, _) = prime_power(q)?;
                let ring = crate::poly::Ring::new(&["t"], crate::poly::FieldTag::Fp(p));
                let poly =
                    crate::poly::parse_poly(&src, &ring, crate::poly::MonomialOrder::Grevlex)
                        .map_err(|e| err(&e.to_string()))?;
                let deg = poly.total_degree() as usize;
                if deg != r as usize {
                    return Err(err(&format!("modulus degree {deg} but r = {r}")));
                }
                let mut coeffs = vec![0u64; deg + 1];
                for (mono, c) in &poly.terms {
                    let v = match c {
                        crate::poly::FieldElem::Fp { v, .. } => *v,
                        _ => unreachable!(),
                    };
                    coeffs[mono[0] as usize] = v;
                }
                if *coeffs.last().unwrap() != 1 {
                    return Err(err("modulus must be monic"));
                }
                ExtensionSpec::with_modulus(q, coeffs)?
            }
        };
        out.push(spec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_law_small_grid() {
        for q in [2u64, 3] {
            for r in 1..=4u32 {
                for n in 1..=4u32 {
                    if (r as u64).pow(n) > 256 {
                        continue;
                    }
                    let spec = ExtensionSpec::canonical(q, r).unwrap();
                    let inv = build_invariants(spec, n).unwrap();
                    assert_eq!(inv.dim() as u64, inv.dim_expected(), "q={q} r={r} n={n}");
                    assert!(inv.basis_is_fixed());
                }
            }
        }
    }

    #[test]
    fn trivial_extension_has_dimension_one() {
        let spec = ExtensionSpec::canonical(2, 1).unwrap();
        for n in 1..=4 {
            let inv = build_invariants(spec.clone(), n).unwrap();
            assert_eq!(inv.dim(), 1);
        }
    }

    #[test]
    fn cubic_square_has_the_six_element_pattern() {
        // r = 3, n = 2: three diagonal vectors and three swap-pair sums
        let spec = ExtensionSpec::canonical(2, 3).unwrap();
        let inv = build_invariants(spec, 2).unwrap();
        assert_eq!(inv.dim(), 6);
        let mut diagonal = 0;
        let mut pairs = 0;
        for (ms, v) in inv.multisets.iter().zip(&inv.basis) {
            let support = v.iter().filter(|&&c| c != 0).count();
            if ms[0] == ms[1] {
                assert_eq!(support, 1);
                diagonal += 1;
            } else {
                assert_eq!(support, 2);
                pairs += 1;
            }
            assert!(v.iter().all(|&c| c == 0 || c == 1));
        }
        assert_eq!((diagonal, pairs), (3, 3));
    }

    #[test]
    fn quadratic_cube_dimension() {
        let spec = ExtensionSpec::canonical(2, 2).unwrap();
        let inv = build_invariants(spec, 3).unwrap();
        assert_eq!(inv.dim(), 4); // C(4, 3)
    }

    #[test]
    fn tensor_algebra_is_associative_and_commutative() {
        let spec = ExtensionSpec::canonical(3, 3).unwrap();
        let alg = TensorPowerAlgebra::new(spec, 2).unwrap();
        // pseudorandom triples, fixed seed
        let mut state = 0x9e37_79b9u64;
        let mut next_vec = || {
            let mut v = alg.zero_vec();
            for slot in v.iter_mut() {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                *slot = (state >> 33) % 3;
            }
            v
        };
        for _ in 0..10 {
            let (a, b, c) = (next_vec(), next_vec(), next_vec());
            assert_eq!(alg.mul(&a, &alg.mul(&b, &c)), alg.mul(&alg.mul(&a, &b), &c));
            assert_eq!(alg.mul(&a, &b), alg.mul(&b, &a));
        }
    }

    #[test]
    fn invariants_close_under_multiplication() {
        for (q, r, n) in [(2u64, 2u32, 2u32), (2, 3, 2), (3, 2, 3), (2, 2, 4)] {
            let spec = ExtensionSpec::canonical(q, r).unwrap();
            let inv = build_invariants(spec, n).unwrap();
            assert!(
                inv.multiplication_table().is_some(),
                "products must re-expand exactly for q={q} r={r} n={n}"
            );
        }
    }

    #[test]
    fn decompose_named_cases() {
        // a field is one factor of full degree
        for r in 1..=3u32 {
            let spec = ExtensionSpec::canonical(2, r).unwrap();
            let alg = CommAlgebra::field_extension(&spec);
            let dec = decompose_etale(&alg).unwrap();
            assert_eq!(dec.degrees, vec![r]);
        }
        // split quadratic étale algebra
        let split = CommAlgebra::split(3, 2).unwrap();
        assert_eq!(decompose_etale(&split).unwrap().degrees, vec![1, 1]);

        // the invariant square of 𝔽_4 over 𝔽_2: degrees frozen after the
        // hom-count oracle run ({1,2}; total 3)
        let spec = ExtensionSpec::canonical(2, 2).unwrap();
        let inv = build_invariants(spec, 2).unwrap();
        let b = inv.as_algebra().unwrap();
        let dec = decompose_etale(&b).unwrap();
        assert_eq!(dec.degrees, vec![1, 2]);
        assert_eq!(dec.degrees.iter().sum::<u32>(), 3);
        // oracle: hom counts into 𝔽_2 and 𝔽_4 pin the degree multiset
        assert_eq!(count_homs(&b, 1).unwrap(), 1);
        assert_eq!(count_homs(&b, 2).unwrap(), 3);
    }

    #[test]
    fn hom_counts_of_fields() {
        let spec = ExtensionSpec::canonical(2, 3).unwrap();
        let alg = CommAlgebra::field_extension(&spec);
        assert_eq!(count_homs(&alg, 3).unwrap(), 3);
        assert_eq!(count_homs(&alg, 2).unwrap(), 0);
        assert_eq!(count_homs(&alg, 6).unwrap(), 3);
    }

    #[test]
    fn invariant_cubic_square_has_six_homs() {
        let spec = ExtensionSpec::canonical(2, 3).unwrap();
        let inv = build_invariants(spec, 2).unwrap();
        let b = inv.as_algebra().unwrap();
        let dec = decompose_etale(&b).unwrap();
        let m = dec
            .degrees
            .iter()
            .fold(1u64, |acc, &d| num_integer::lcm(acc, d as u64)) as u32;
        assert_eq!(count_homs(&b, m).unwrap(), 6);
    }

    #[test]
    fn theta_is_a_bijection_on_the_grid() {
        for q in [2u64, 3] {
            for r in [2u32, 3] {
                for n in [2u32, 3] {
                    let spec = ExtensionSpec::canonical(q, r).unwrap();
                    let rep = theta_bijection_check(&spec, n).unwrap();
                    assert!(rep.bijection_ok, "q={q} r={r} n={n}: {rep:?}");
                }
            }
        }
        // degenerate r = 1: both sides singletons
        let spec = ExtensionSpec::canonical(2, 1).unwrap();
        let rep = theta_bijection_check(&spec, 3).unwrap();
        assert!(rep.bijection_ok);
        assert_eq!(rep.dim_expected, 1);
    }

    #[test]
    fn signature_examples_and_injectivity() {
        let f16 = GaloisField::new(2, 4);
        // {α, α} → (2α, α²), which is (0, α²) in characteristic 2
        for alpha in 0..f16.size() {
            let sig = elementary_symmetric_signature(&f16, &[alpha, alpha]);
            assert_eq!(sig[0], f16.add(alpha, alpha));
            assert_eq!(sig[1], f16.mul(alpha, alpha));
        }
        // zeros map to zeros
        assert_eq!(
            elementary_symmetric_signature(&f16, &[0, 0, 0]),
            vec![0, 0, 0]
        );

        // exhaustive injectivity on multisets over 𝔽_16, n ≤ 3
        for n in 1..=3usize {
            let mut sigs = BTreeSet::new();
            let mut multisets = Vec::new();
            let mut stack = vec![0usize; n];
            gen_multisets(16, n, 0, 0, &mut stack, &mut multisets);
            for ms in &multisets {
                let vals: Vec<u64> = ms.iter().map(|&i| i as u64).collect();
                let sig = elementary_symmetric_signature(&f16, &vals);
                assert!(sigs.insert(sig), "collision at {ms:?}");
            }
            assert_eq!(sigs.len() as u64, binomial(16 + n as u64 - 1, n as u64));
        }
    }

    #[test]
    fn extension_parsing() {
        let specs = parse_extensions("q=2; r=2\n\nq=3; r=2; modulus=t^2 + 1").unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[0].r, 2);
        assert_eq!(specs[1].ext.modulus, vec![1, 0, 1]);
        // reducible modulus rejected: t^2 - 1 = (t-1)(t+1) over F_3
        assert!(parse_extensions("q=3; r=2; modulus=t^2 - 1").is_err());
    }
}
