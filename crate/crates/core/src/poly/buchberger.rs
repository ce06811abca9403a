//! Buchberger's algorithm, reduced bases, and elimination ideals.

use super::{FieldElem, Ideal, Monomial, MonomialOrder, PolyError, Polynomial, Ring};
use std::collections::{BTreeMap, BTreeSet};

/// Resource limits for basis computations. Exceeding any limit is a hard
/// error, never silent truncation.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Maximum number of reduction steps across one normal-form run.
    pub max_reduction_steps: u64,
    /// Maximum number of S-pairs processed.
    pub max_pairs: u64,
    /// Maximum number of terms in any intermediate polynomial.
    pub max_terms: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps {
            max_reduction_steps: 200_000,
            max_pairs: 20_000,
            max_terms: 20_000,
        }
    }
}

fn mono_divides(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn mono_div(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mono_lcm(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn is_coprime(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Remainder of `f` on division by `divisors` under `f`'s monomial order.
pub fn normal_form(
    f: &Polynomial,
    divisors: &[Polynomial],
    caps: &Caps,
) -> Result<Polynomial, PolyError> {
    let ring = f.ring.clone();
    let order = f.order;
    let mut rem: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
    let mut work = f.to_map();
    let mut steps: u64 = 0;
    while let Some((mono, coeff)) = work.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        work.remove(&mono);
        if coeff.is_zero() {
            continue;
        }
        steps += 1;
        if steps > caps.max_reduction_steps {
            return Err(PolyError::CapExceeded("reduction step limit"));
        }
        if work.len() > caps.max_terms || rem.len() > caps.max_terms {
            return Err(PolyError::CapExceeded("term limit"));
        }
        let divisor = divisors.iter().find(|d| {
            d.leading()
                .map(|(lm, _)| mono_divides(lm, &mono))
                .unwrap_or(false)
        });
        match divisor {
            None => {
                let entry = rem.entry(mono).or_insert_with(|| FieldElem::zero(ring.field));
                *entry = entry.add(&coeff);
            }
            Some(d) => {
                let (lm, lc) = d.leading().unwrap();
                let q_mono = mono_div(&mono, lm);
                let q_coeff = coeff.mul(&lc.inv()?);
                // subtract q * d from the working tail
                for (m, c) in d.terms.iter().skip(1) {
                    let tm = mono_mul(&q_mono, m);
                    let tc = q_coeff.mul(c).neg();
                    let newval = match work.get(&tm) {
                        Some(old) => old.add(&tc),
                        None => tc,
                    };
                    if newval.is_zero() {
                        work.remove(&tm);
                    } else {
                        work.insert(tm, newval);
                    }
                }
            }
        }
    }
    Ok(Polynomial::from_map(&ring, order, rem))
}

/// The S-polynomial of `f` and `g`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    let (fm, fc) = f.leading().ok_or(PolyError::EmptyIdeal)?;
    let (gm, gc) = g.leading().ok_or(PolyError::EmptyIdeal)?;
    let l = mono_lcm(fm, gm);
    let fmul = Polynomial {
        ring: f.ring.clone(),
        terms: vec![(mono_div(&l, fm), fc.inv()?)],
        order: f.order,
    };
    let gmul = Polynomial {
        ring: g.ring.clone(),
        terms: vec![(mono_div(&l, gm), gc.inv()?)],
        order: g.order,
    };
    f.mul(&fmul)?.sub(&g.mul(&gmul)?)
}

/// Buchberger's algorithm returning the reduced basis for the given order.
///
/// Pairs are processed in increasing lcm order (normal selection) and
/// pruned by the product criterion (coprime leading monomials) and the
/// chain criterion (an lcm divisible by a third leading term whose two
/// side pairs are already done). Intermediate elements are kept primitive so
/// rational coefficients stay small. The result is minimal, tail-reduced,
/// and monic, hence canonical.
pub fn buchberger(
    ideal: &Ideal,
    order: MonomialOrder,
    caps: &Caps,
) -> Result<Vec<Polynomial>, PolyError> {
    let gens: Vec<Polynomial> = ideal
        .generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order).primitive_scale())
        .collect();
    if gens.is_empty() {
        if ideal.generators.is_empty() {
            return Err(PolyError::EmptyIdeal);
        }
        return Ok(Vec::new()); // the zero ideal
    }
    let mut basis = gens;
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pending.insert((j, i));
        }
    }
    let lead = |basis: &[Polynomial], i: usize| basis[i].leading().unwrap().0.clone();
    let mut processed: u64 = 0;
    while !pending.is_empty() {
        processed += 1;
        if processed > caps.max_pairs {
            return Err(PolyError::CapExceeded("S-pair limit"));
        }
        // normal selection: smallest lcm in the monomial order
        let (&(i, j), _) = pending
            .iter()
            .map(|p| {
                let l = mono_lcm(&lead(&basis, p.0), &lead(&basis, p.1));
                (p, l)
            })
            .min_by(|(_, a), (_, b)| order.cmp(a, b))
            .expect("pending nonempty");
        pending.remove(&(i, j));
        let (lmi, lmj) = (lead(&basis, i), lead(&basis, j));
        if is_coprime(&lmi, &lmj) {
            continue;
        }
        let lcm_ij = mono_lcm(&lmi, &lmj);
        // chain criterion: some k with LT_k | lcm and both side pairs done
        let chained = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let pair_ik = (i.min(k), i.max(k));
            let pair_jk = (j.min(k), j.max(k));
            mono_divides(&lead(&basis, k), &lcm_ij)
                && !pending.contains(&pair_ik)
                && !pending.contains(&pair_jk)
        });
        if chained {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j])?;
        let r = normal_form(&s, &basis, caps)?;
        if !r.is_zero() {
            let k = basis.len();
            for idx in 0..k {
                pending.insert((idx, k));
            }
            basis.push(r.primitive_scale());
        }
    }
    reduce_basis(basis, caps)
}

/// Minimalize and tail-reduce a Gröbner basis; output is monic and sorted
/// by leading monomial (descending), so equal ideals give equal bases.
pub fn reduce_basis(mut basis: Vec<Polynomial>, caps: &Caps) -> Result<Vec<Polynomial>, PolyError> {
    basis.retain(|p| !p.is_zero());
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Polynomial> = Vec::new();
    for i in 0..basis.len() {
        let (lmi, _) = basis[i].leading().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, g)| {
            if i == j {
                return false;
            }
            let (lmj, _) = g.leading().unwrap();
            mono_divides(lmj, lmi) && (lmj != lmi || j < i)
        });
        if !redundant {
            keep.push(basis[i].clone());
        }
    }
    // tail-reduce each element against the others
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Polynomial> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = normal_form(&keep[i], &others, caps)?;
        if !r.is_zero() {
            out.push(r.monic());
        }
    }
    let order = out.first().map(|p| p.order);
    if let Some(order) = order {
        out.sort_by(|a, b| {
            order.cmp(
                &b.leading().unwrap().0,
                &a.leading().unwrap().0,
            )
        });
    }
    Ok(out)
}

/// Elimination ideal: generators of `I ∩ k[keep]`.
///
/// Internally the ring is permuted so the eliminated variables come first,
/// a lex basis is computed (lex is an elimination order for every such
/// split), and the basis is intersected with the subring on `keep`.
pub fn eliminate(ideal: &Ideal, keep: &[&str], caps: &Caps) -> Result<Ideal, PolyError> {
    let ring = &ideal.ring;
    for k in keep {
        if ring.var_index(k).is_none() {
            return Err(PolyError::UnknownVariable(k.to_string()));
        }
    }
    let eliminated: Vec<usize> = (0..ring.vars.len())
        .filter(|i| !keep.contains(&ring.vars[*i].as_str()))
        .collect();
    let kept: Vec<usize> = (0..ring.vars.len())
        .filter(|i| keep.contains(&ring.vars[*i].as_str()))
        .collect();
    // permuted ring: eliminated block first (greatest in lex)
    let perm: Vec<usize> = eliminated.iter().chain(kept.iter()).copied().collect();
    let perm_ring = Ring {
        vars: perm.iter().map(|&i| ring.vars[i].clone()).collect(),
        field: ring.field,
    };
    let remap = |p: &Polynomial, target: &Ring, positions: &[usize]| -> Polynomial {
        let map = p
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Monomial = positions.iter().map(|&i| m[i]).collect();
                (mono, c.clone())
            })
            .collect();
        Polynomial::from_map(target, MonomialOrder::Lex, map)
    };
    let perm_gens: Vec<Polynomial> = ideal
        .generators
        .iter()
        .map(|g| remap(g, &perm_ring, &perm))
        .collect();
    let basis = buchberger(&Ideal::new(&perm_ring, perm_gens), MonomialOrder::Lex, caps)?;

    let sub_ring = Ring {
        vars: kept.iter().map(|&i| ring.vars[i].clone()).collect(),
        field: ring.field,
    };
    let n_elim = eliminated.len();
    let mut sub_gens = Vec::new();
    for b in &basis {
        if b.terms.iter().all(|(m, _)| m[..n_elim].iter().all(|&e| e == 0)) {
            let positions: Vec<usize> = (n_elim..perm_ring.vars.len()).collect();
            sub_gens.push(remap(b, &sub_ring, &positions));
        }
    }
    Ok(Ideal::new(&sub_ring, sub_gens))
}
