//! Exact multivariate polynomial arithmetic over ℚ and 𝔽_p.
//!
//! Polynomials are kept in canonical form at all times: terms sorted in
//! descending monomial order, no zero coefficients, all coefficients in one
//! field. Rational coefficients are arbitrary-precision and always reduced;
//! prime moduli are capped at 2^31 so products fit in a `u64`.

mod buchberger;
mod parse;

pub use buchberger::{buchberger, eliminate, normal_form, reduce_basis, s_polynomial, Caps};
pub use parse::{parse_poly, ParseError};

use crate::linalg::{self, FieldOps};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable mismatch between rings")]
    RingMismatch,
    #[error("field mismatch between coefficients")]
    FieldMismatch,
    #[error("denominator not invertible modulo {0}")]
    NonInvertible(u64),
    #[error("{0} is not a prime ≤ 2^31")]
    BadPrime(u64),
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("desk-scale exceeded: {0}")]
    CapExceeded(&'static str),
    #[error("empty generator list")]
    EmptyIdeal,
}

/// Coefficient field: ℚ or 𝔽_p with p prime, p ≤ 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldTag {
    Q,
    Fp(u64),
}

impl FieldTag {
    pub fn fp(p: u64) -> Result<FieldTag, PolyError> {
        if p < 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(PolyError::BadPrime(p));
        }
        Ok(FieldTag::Fp(p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element: a reduced rational or a residue in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldElem {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

impl FieldElem {
    pub fn zero(tag: FieldTag) -> FieldElem {
        match tag {
            FieldTag::Q => FieldElem::Rat(BigRational::zero()),
            FieldTag::Fp(p) => FieldElem::Fp { v: 0, p },
        }
    }

    pub fn one(tag: FieldTag) -> FieldElem {
        match tag {
            FieldTag::Q => FieldElem::Rat(BigRational::one()),
            FieldTag::Fp(p) => FieldElem::Fp { v: 1, p },
        }
    }

    pub fn from_int(tag: FieldTag, n: i64) -> FieldElem {
        match tag {
            FieldTag::Q => FieldElem::Rat(BigRational::from(BigInt::from(n))),
            FieldTag::Fp(p) => FieldElem::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn tag(&self) -> FieldTag {
        match self {
            FieldElem::Rat(_) => FieldTag::Q,
            FieldElem::Fp { p, .. } => FieldTag::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Fp { v, .. } => *v == 0,
        }
    }

    pub fn add(&self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: p2 }) if p == p2 => {
                FieldElem::Fp { v: (a + b) % p, p: *p }
            }
            _ => panic!("field mismatch in coefficient arithmetic"),
        }
    }

    pub fn sub(&self, rhs: &FieldElem) -> FieldElem {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Fp { v, p } => FieldElem::Fp { v: (p - v) % p, p: *p },
        }
    }

    pub fn mul(&self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: p2 }) if p == p2 => {
                FieldElem::Fp { v: a * b % p, p: *p }
            }
            _ => panic!("field mismatch in coefficient arithmetic"),
        }
    }

    pub fn inv(&self) -> Result<FieldElem, PolyError> {
        match self {
            FieldElem::Rat(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Ok(FieldElem::Rat(a.recip()))
            }
            FieldElem::Fp { v, p } => {
                if *v == 0 {
                    return Err(PolyError::NonInvertible(*p));
                }
                Ok(FieldElem::Fp { v: mod_pow(*v, p - 2, *p), p: *p })
            }
        }
    }
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Field context over `FieldElem`, so the shared elimination routines work
/// for Jacobian ranks over either coefficient field.
#[derive(Clone, Copy, Debug)]
pub struct CoeffField(pub FieldTag);

impl FieldOps for CoeffField {
    type Elem = FieldElem;
    fn zero(&self) -> FieldElem {
        FieldElem::zero(self.0)
    }
    fn one(&self) -> FieldElem {
        FieldElem::one(self.0)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.add(b)
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.sub(b)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.mul(b)
    }
    fn inv(&self, a: &FieldElem) -> FieldElem {
        a.inv().expect("inverse of zero residue")
    }
}

/// Exponent vector aligned with the ring's variable list.
pub type Monomial = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
}

impl MonomialOrder {
    /// Compare monomials; `Greater` means `a` comes first in canonical form.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                match da.cmp(&db) {
                    Ordering::Equal => {
                        // tie: smaller exponent in the last differing variable wins
                        for i in (0..a.len()).rev() {
                            match a[i].cmp(&b[i]) {
                                Ordering::Equal => continue,
                                Ordering::Less => return Ordering::Greater,
                                Ordering::Greater => return Ordering::Less,
                            }
                        }
                        Ordering::Equal
                    }
                    other => other,
                }
            }
        }
    }
}

/// Ambient ring: ordered variable names plus the coefficient field.
/// Variable declaration order fixes every canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub vars: Vec<String>,
    pub field: FieldTag,
}

impl Ring {
    pub fn new(vars: &[&str], field: FieldTag) -> Ring {
        Ring {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            field,
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Multivariate polynomial in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub ring: Ring,
    /// (monomial, coefficient), descending in `order`, no zero coefficients.
    pub terms: Vec<(Monomial, FieldElem)>,
    pub order: MonomialOrder,
}

impl Polynomial {
    pub fn zero(ring: &Ring, order: MonomialOrder) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
            order,
        }
    }

    pub fn constant(ring: &Ring, order: MonomialOrder, c: FieldElem) -> Polynomial {
        let mut p = Polynomial::zero(ring, order);
        if !c.is_zero() {
            p.terms.push((vec![0; ring.vars.len()], c));
        }
        p
    }

    pub fn one(ring: &Ring, order: MonomialOrder) -> Polynomial {
        Polynomial::constant(ring, order, FieldElem::one(ring.field))
    }

    pub fn var(ring: &Ring, order: MonomialOrder, name: &str) -> Result<Polynomial, PolyError> {
        let idx = ring
            .var_index(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut mono = vec![0; ring.vars.len()];
        mono[idx] = 1;
        Ok(Polynomial {
            ring: ring.clone(),
            terms: vec![(mono, FieldElem::one(ring.field))],
            order,
        })
    }

    pub fn from_map(
        ring: &Ring,
        order: MonomialOrder,
        map: BTreeMap<Monomial, FieldElem>,
    ) -> Polynomial {
        let mut terms: Vec<(Monomial, FieldElem)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|(a, _), (b, _)| order.cmp(b, a));
        Polynomial {
            ring: ring.clone(),
            terms,
            order,
        }
    }

    pub fn to_map(&self) -> BTreeMap<Monomial, FieldElem> {
        self.terms.iter().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, FieldElem)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut map = self.to_map();
        for (m, c) in &other.terms {
            let entry = map
                .entry(m.clone())
                .or_insert_with(|| FieldElem::zero(self.ring.field));
            *entry = entry.add(c);
        }
        Ok(Polynomial::from_map(&self.ring, self.order, map))
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut map: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let prod = c1.mul(c2);
                let entry = map
                    .entry(m)
                    .or_insert_with(|| FieldElem::zero(self.ring.field));
                *entry = entry.add(&prod);
            }
        }
        Ok(Polynomial::from_map(&self.ring, self.order, map))
    }

    pub fn scale(&self, c: &FieldElem) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring, self.order);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect(),
            order: self.order,
        }
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::one(&self.ring, self.order);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Leading coefficient scaled to 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("leading coefficient invertible")),
        }
    }

    /// Cheap canonical scaling for intermediate basis elements: over ℚ,
    /// clear denominators and divide out the integer content, leading
    /// coefficient positive; over 𝔽_p, monic. Keeps coefficients small
    /// during basis computations.
    pub fn primitive_scale(&self) -> Polynomial {
        if self.terms.is_empty() {
            return self.clone();
        }
        match self.ring.field {
            FieldTag::Fp(_) => self.monic(),
            FieldTag::Q => {
                use num_integer::Integer;
                let mut denom_lcm = BigInt::one();
                for (_, c) in &self.terms {
                    if let FieldElem::Rat(r) = c {
                        denom_lcm = denom_lcm.lcm(r.denom());
                    }
                }
                let mut numer_gcd = BigInt::zero();
                for (_, c) in &self.terms {
                    if let FieldElem::Rat(r) = c {
                        let scaled = r.numer() * (&denom_lcm / r.denom());
                        numer_gcd = numer_gcd.gcd(&scaled);
                    }
                }
                if numer_gcd.is_zero() {
                    return self.clone();
                }
                let mut factor = BigRational::new(denom_lcm, numer_gcd);
                if let Some((_, FieldElem::Rat(lead))) = self.leading() {
                    if (lead * &factor).is_negative() {
                        factor = -factor;
                    }
                }
                self.scale(&FieldElem::Rat(factor))
            }
        }
    }

    /// Re-sort terms under a different order (same ring, same terms).
    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        Polynomial::from_map(&self.ring, order, self.to_map())
    }

    /// Formal partial derivative with respect to variable `idx`.
    pub fn partial(&self, idx: usize) -> Polynomial {
        let mut map: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[idx] -= 1;
            let scaled = c.mul(&FieldElem::from_int(self.ring.field, e as i64));
            let entry = map
                .entry(m2)
                .or_insert_with(|| FieldElem::zero(self.ring.field));
            *entry = entry.add(&scaled);
        }
        Polynomial::from_map(&self.ring, self.order, map)
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem, PolyError> {
        if point.len() != self.ring.vars.len() {
            return Err(PolyError::DimensionMismatch {
                expected: self.ring.vars.len(),
                got: point.len(),
            });
        }
        let mut acc = FieldElem::zero(self.ring.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitute `images[i]` for variable `i`; the images live in an
    /// arbitrary target ring over the same field.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        assert_eq!(images.len(), self.ring.vars.len());
        let target = &images
            .first()
            .expect("substitution needs at least one variable")
            .ring;
        let order = images[0].order;
        let mut acc = Polynomial::zero(target, order);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, order, c.clone());
            for (i, &e) in m.iter().enumerate() {
                t = t.mul(&images[i].pow(e)?)?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Polynomial {
    /// Canonical printing: descending monomial order, explicit `*` and `^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        self.ring.vars[j].clone()
                    } else {
                        format!("{}^{}", self.ring.vars[j], e)
                    }
                })
                .collect();
            let (neg, mag) = coeff_display(c);
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Split a coefficient into (is_negative, magnitude string).
fn coeff_display(c: &FieldElem) -> (bool, String) {
    match c {
        FieldElem::Rat(r) => {
            let neg = r.is_negative();
            let a = r.abs();
            if a.is_integer() {
                (neg, a.numer().to_string())
            } else {
                (neg, format!("{}/{}", a.numer(), a.denom()))
            }
        }
        FieldElem::Fp { v, .. } => (false, v.to_string()),
    }
}

/// A finitely generated ideal, with an optional cached reduced basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub ring: Ring,
    pub generators: Vec<Polynomial>,
    pub groebner: Option<(Vec<Polynomial>, MonomialOrder)>,
}

impl Ideal {
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> Ideal {
        Ideal {
            ring: ring.clone(),
            generators,
            groebner: None,
        }
    }

    /// The reduced basis for `order`, computed once and cached. A cached
    /// basis is always the reduced one, so reuse is sound.
    pub fn groebner_basis(
        &mut self,
        order: MonomialOrder,
        caps: &Caps,
    ) -> Result<&[Polynomial], PolyError> {
        let stale = match &self.groebner {
            Some((_, cached_order)) => *cached_order != order,
            None => true,
        };
        if stale {
            let basis = buchberger(self, order, caps)?;
            self.groebner = Some((basis, order));
        }
        Ok(&self.groebner.as_ref().expect("just cached").0)
    }
}

/// Rank of the Jacobian matrix of `polys` evaluated at `point`.
pub fn jacobian_rank_at(polys: &[Polynomial], point: &[FieldElem]) -> Result<usize, PolyError> {
    if polys.is_empty() {
        return Ok(0);
    }
    let ring = &polys[0].ring;
    if point.len() != ring.vars.len() {
        return Err(PolyError::DimensionMismatch {
            expected: ring.vars.len(),
            got: point.len(),
        });
    }
    let mut rows = Vec::with_capacity(polys.len());
    for p in polys {
        if p.ring != *ring {
            return Err(PolyError::RingMismatch);
        }
        let mut row = Vec::with_capacity(ring.vars.len());
        for i in 0..ring.vars.len() {
            row.push(p.partial(i).eval(point)?);
        }
        rows.push(row);
    }
    Ok(linalg::rank(&CoeffField(ring.field), &rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qring(vars: &[&str]) -> Ring {
        Ring::new(vars, FieldTag::Q)
    }

    #[test]
    fn grevlex_orders_by_degree_then_reverse_lex() {
        let o = MonomialOrder::Grevlex;
        // x^2 > xy > y^2 > x > y > 1 in grevlex on (x, y)
        let seq = [
            vec![2, 0],
            vec![1, 1],
            vec![0, 2],
            vec![1, 0],
            vec![0, 1],
            vec![0, 0],
        ];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), std::cmp::Ordering::Greater);
        }
        // grevlex tie-break differs from lex: u*w vs v^2 on (u, v, w)
        assert_eq!(
            o.cmp(&vec![1, 0, 1], &vec![0, 2, 0]),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    fn distributivity_on_fixed_triples() {
        let r = qring(&["x", "y"]);
        let parse = |s| parse_poly(s, &r, MonomialOrder::Grevlex).unwrap();
        let f = parse("x^2 - 3*y + 1/2");
        let g = parse("x*y + y^2");
        let h = parse("2*x - y");
        let lhs = f.add(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&h).unwrap().add(&g.mul(&h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn partial_derivatives_of_cone() {
        let r = qring(&["u", "v", "w"]);
        let cone = parse_poly("u*w - v^2", &r, MonomialOrder::Grevlex).unwrap();
        assert_eq!(cone.partial(0).to_string(), "w");
        assert_eq!(cone.partial(1).to_string(), "-2*v");
        assert_eq!(cone.partial(2).to_string(), "u");
    }

    #[test]
    fn jacobian_rank_examples() {
        let r = qring(&["u", "v", "w"]);
        let cone = parse_poly("u*w - v^2", &r, MonomialOrder::Grevlex).unwrap();
        let origin = vec![FieldElem::from_int(FieldTag::Q, 0); 3];
        let ones = vec![FieldElem::from_int(FieldTag::Q, 1); 3];
        assert_eq!(jacobian_rank_at(&[cone.clone()], &origin).unwrap(), 0);
        assert_eq!(jacobian_rank_at(&[cone], &ones).unwrap(), 1);

        let linear = parse_poly("u", &r, MonomialOrder::Grevlex).unwrap();
        assert_eq!(jacobian_rank_at(&[linear], &origin).unwrap(), 1);
    }

    #[test]
    fn fp_arithmetic_reduces_mod_p() {
        let r = Ring::new(&["x"], FieldTag::fp(2).unwrap());
        let f = parse_poly("x^2 - x^2", &r, MonomialOrder::Grevlex).unwrap();
        assert!(f.is_zero());
        let g = parse_poly("x + x", &r, MonomialOrder::Grevlex).unwrap();
        assert!(g.is_zero());
    }
}
