//! Arithmetic in 𝔽_{p^m} and in extension towers over it.
//!
//! A field is a context object; elements are `u64` indices. The index of an
//! element with coefficient vector (c_0, ..., c_{m-1}) over 𝔽_p (constant
//! coefficient first) is Σ c_i p^i, so index order is a fixed deterministic
//! order on field elements. The modulus is always the lexicographically
//! smallest monic irreducible of its degree, making every construction
//! reproducible across runs and platforms.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiniteFieldError {
    #[error("{0} is not a prime power within caps (p ≤ 7, q ≤ 64)")]
    BadPrimePower(u64),
    #[error("field too large: {0} elements exceeds the configured cap")]
    FieldTooLarge(u64),
    #[error("modulus is reducible")]
    ReducibleModulus,
    #[error("modulus has wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
}

/// Factor `q` as p^e for prime p, within the caps p ≤ 7, q ≤ 64.
pub fn prime_power(q: u64) -> Result<(u64, u32), FiniteFieldError> {
    if q < 2 || q > 64 {
        return Err(FiniteFieldError::BadPrimePower(q));
    }
    for p in [2u64, 3, 5, 7] {
        if q % p == 0 {
            let mut e = 0;
            let mut r = q;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            if r != 1 {
                return Err(FiniteFieldError::BadPrimePower(q));
            }
            return Ok((p, e));
        }
    }
    Err(FiniteFieldError::BadPrimePower(q))
}

/// 𝔽_{p^m} presented as 𝔽_p[t]/(modulus).
///
/// For fields of at most 2^16 elements a discrete-log table pair is built,
/// making multiplication and inversion table lookups; larger fields fall
/// back to schoolbook polynomial arithmetic.
#[derive(Clone, Debug)]
pub struct GaloisField {
    pub p: u64,
    pub m: u32,
    /// Monic modulus coefficients, degree m, constant term first (length m+1).
    pub modulus: Vec<u64>,
    size: u64,
    /// exp[k] = g^k for a fixed generator g; log[x] inverts it (x ≥ 1).
    tables: Option<(Vec<u64>, Vec<u32>)>,
}

const TABLE_LIMIT: u64 = 1 << 16;

impl GaloisField {
    /// The field 𝔽_{p^m} with the canonical (lexicographically smallest
    /// monic irreducible) modulus.
    pub fn new(p: u64, m: u32) -> GaloisField {
        assert!(matches!(p, 2 | 3 | 5 | 7), "prime out of caps");
        assert!(m >= 1);
        let modulus = smallest_irreducible(p, m);
        GaloisField::with_modulus(p, modulus).expect("canonical modulus is irreducible")
    }

    /// Build with an explicit modulus (constant coefficient first, monic);
    /// rejects reducible moduli.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<GaloisField, FiniteFieldError> {
        let m = (modulus.len() - 1) as u32;
        assert!(m >= 1 && *modulus.last().unwrap() == 1, "modulus must be monic");
        if !poly_is_irreducible(p, &modulus) {
            return Err(FiniteFieldError::ReducibleModulus);
        }
        let size = (p as u128).pow(m) as u64;
        let mut field = GaloisField {
            p,
            m,
            modulus,
            size,
            tables: None,
        };
        if size <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// The image of an integer under ℤ → 𝔽_p ⊆ 𝔽_{p^m}.
    pub fn from_int(&self, n: u64) -> u64 {
        n % self.p
    }

    pub fn decode(&self, x: u64) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.m as usize);
        let mut r = x;
        for _ in 0..self.m {
            v.push(r % self.p);
            r /= self.p;
        }
        v
    }

    pub fn encode(&self, coeffs: &[u64]) -> u64 {
        let mut x = 0u64;
        for &c in coeffs.iter().rev() {
            debug_assert!(c < self.p);
            x = x * self.p + c;
        }
        x
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (va, vb) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let va = self.decode(a);
        let n: Vec<u64> = va.iter().map(|x| (self.p - x) % self.p).collect();
        self.encode(&n)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some((exp, log)) = &self.tables {
            let k = (log[a as usize] as u64 + log[b as usize] as u64) % (self.size - 1);
            return exp[k as usize];
        }
        let (va, vb) = (self.decode(a), self.decode(b));
        let mut prod = vec![0u64; 2 * self.m as usize - 1];
        for (i, &x) in va.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in vb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.encode(&self.reduce(prod))
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let m = self.m as usize;
        for i in (m..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            v[i] = 0;
            // t^i = t^(i-m) * (t^m) and t^m = -(lower modulus terms)
            for j in 0..m {
                let sub = c * self.modulus[j] % self.p;
                v[i - m + j] = (v[i - m + j] + self.p - sub) % self.p;
            }
        }
        v.truncate(m);
        v
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        if let Some((exp, log)) = &self.tables {
            let k = (log[a as usize] as u128 * e as u128 % (self.size as u128 - 1)) as usize;
            return exp[k];
        }
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.size - 2)
    }

    /// x ↦ x^p, the absolute Frobenius.
    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(a, self.p)
    }

    /// Membership in the subfield of p^d elements (d must divide m).
    pub fn in_subfield(&self, a: u64, d: u32) -> bool {
        debug_assert!(self.m % d == 0);
        let q = (self.p as u128).pow(d) as u64;
        self.pow(a, q) == a
    }

    fn build_tables(&mut self) {
        let n = self.size;
        // smallest-index generator of the multiplicative group
        let factors = prime_factors(n - 1);
        let g = if n == 2 {
            1
        } else {
            (2..n)
                .find(|&g| {
                    factors
                        .iter()
                        .all(|&f| self.pow_raw(g, (n - 1) / f) != 1)
                })
                .expect("multiplicative group of a finite field is cyclic")
        };
        let mut exp = vec![0u64; (n - 1) as usize];
        let mut log = vec![0u32; n as usize];
        let mut acc = 1u64;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = acc;
            log[acc as usize] = k as u32;
            acc = self.mul_raw(acc, g);
        }
        debug_assert_eq!(acc, 1);
        self.tables = Some((exp, log));
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let (va, vb) = (self.decode(a), self.decode(b));
        let mut prod = vec![0u64; 2 * self.m as usize - 1];
        for (i, &x) in va.iter().enumerate() {
            for (j, &y) in vb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.encode(&self.reduce(prod))
    }

    fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    /// All roots in this field of a polynomial with coefficients here
    /// (constant term first), in index order.
    pub fn roots(&self, poly: &[u64]) -> Vec<u64> {
        (0..self.size)
            .filter(|&x| self.eval_poly(poly, x) == 0)
            .collect()
    }

    pub fn eval_poly(&self, poly: &[u64], x: u64) -> u64 {
        let mut acc = 0;
        for &c in poly.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- polynomial arithmetic over 𝔽_p, used only for modulus bookkeeping ---

fn poly_mod(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - dm;
            let inv = crate::poly::mod_pow(m[dm], p - 2, p);
            let c = lead * inv % p;
            for (i, &mc) in m.iter().enumerate() {
                let idx = i + shift;
                r[idx] = (r[idx] + p - c * mc % p) % p;
            }
        }
        r.pop();
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    r
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_mod(p, &prod, m)
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    loop {
        while x.len() > 1 && *x.last().unwrap() == 0 {
            x.pop();
        }
        while y.len() > 1 && *y.last().unwrap() == 0 {
            y.pop();
        }
        if y == [0] {
            return x;
        }
        let r = poly_mod(p, &x, &y);
        x = y;
        y = r;
    }
}

/// x^(p^k) mod f, by repeated Frobenius powering.
fn frobenius_power(p: u64, k: u32, f: &[u64]) -> Vec<u64> {
    let mut x = vec![0, 1]; // the polynomial t
    for _ in 0..k {
        let mut acc = vec![1];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(p, &acc, &base, f);
            }
            base = poly_mulmod(p, &base, &base, f);
            e >>= 1;
        }
        x = acc;
    }
    x
}

/// Irreducibility over 𝔽_p: f (monic, degree m) is irreducible iff it has
/// no root in 𝔽_{p^d} for any d ≤ m/2 and x^(p^m) ≡ x (mod f). A root in
/// 𝔽_{p^d} is detected as a common factor with x^(p^d) − x.
pub fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = (f.len() - 1) as u32;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    for d in 1..=(m / 2) {
        let xq = frobenius_power(p, d, f);
        // gcd(f, x^(p^d) - x)
        let mut diff = xq.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(p, f, &diff);
        if g.len() - 1 > 0 {
            return false;
        }
    }
    let xq = frobenius_power(p, m, f);
    let mut x = vec![0u64, 1];
    x.resize(xq.len().max(2), 0);
    let mut xq = xq;
    xq.resize(x.len(), 0);
    xq == x
}

/// The lexicographically smallest monic irreducible of degree m over 𝔽_p,
/// comparing coefficient tuples (c_{m-1}, ..., c_0).
pub fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    if m == 1 {
        return vec![0, 1]; // t itself
    }
    let total = (p as u128).pow(m) as u64;
    for code in 0..total {
        // code digits: c_0 least significant, so the scan ascends in the
        // (c_{m-1}, ..., c_0) lexicographic order
        let mut coeffs = vec![0u64; m as usize + 1];
        coeffs[m as usize] = 1;
        let mut r = code;
        for i in 0..m as usize {
            coeffs[i] = r % p;
            r /= p;
        }
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducibles of every degree exist over 𝔽_p")
}

/// An extension L = 𝔽_q[t]/(g) of degree r over 𝔽_q, with 𝔽_q itself a
/// `GaloisField`. Elements are coefficient vectors over 𝔽_q (degree < r).
#[derive(Clone, Debug)]
pub struct ExtField {
    pub base: GaloisField,
    pub r: u32,
    /// Monic modulus over 𝔽_q, constant term first, length r+1.
    pub modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(base: GaloisField, modulus: Vec<u64>) -> Result<ExtField, FiniteFieldError> {
        let r = (modulus.len() - 1) as u32;
        assert!(r >= 1 && *modulus.last().unwrap() == 1, "modulus must be monic");
        let ext = ExtField { base, r, modulus };
        if !ext.modulus_irreducible() {
            return Err(FiniteFieldError::ReducibleModulus);
        }
        Ok(ext)
    }

    /// Deterministic canonical extension: scan moduli in lexicographic
    /// order (leading coefficients first) for the first irreducible one.
    pub fn canonical(base: GaloisField, r: u32) -> ExtField {
        if r == 1 {
            return ExtField {
                base,
                r,
                modulus: vec![0, 1],
            };
        }
        let q = base.size();
        let total = (q as u128).pow(r);
        for code in 0..total {
            let mut coeffs = vec![0u64; r as usize + 1];
            coeffs[r as usize] = 1;
            let mut rem = code;
            for i in 0..r as usize {
                coeffs[i] = (rem % q as u128) as u64;
                rem /= q as u128;
            }
            let cand = ExtField {
                base: base.clone(),
                r,
                modulus: coeffs,
            };
            if cand.modulus_irreducible() {
                return cand;
            }
        }
        unreachable!("irreducibles of every degree exist over 𝔽_q")
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.r as usize]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    /// Basis element v_i = t^i.
    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(*x, *y)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.r as usize;
        let mut prod = vec![0u64; 2 * r - 1];
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                let t = self.base.mul(a[i], b[j]);
                prod[i + j] = self.base.add(prod[i + j], t);
            }
        }
        // reduce by the modulus
        for i in (r..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..r {
                let sub = self.base.mul(c, self.modulus[j]);
                prod[i - r + j] = self.base.sub(prod[i - r + j], sub);
            }
        }
        prod.truncate(r);
        prod
    }

    fn modulus_irreducible(&self) -> bool {
        if self.r == 1 {
            return true;
        }
        // no roots in 𝔽_{q^d} for d ≤ r/2, plus the degree identity;
        // roots are detected as gcd(f, x^(q^d) - x) ≠ 1 in 𝔽_q[x]
        for d in 1..=(self.r / 2) {
            if self.has_subfield_root(d) {
                return false;
            }
        }
        // x^(q^r) ≡ x mod f
        let xqr = self.x_power_q_pow(self.r);
        let mut x = self.zero();
        if self.r >= 2 {
            x[1] = 1;
        }
        xqr == x
    }

    fn has_subfield_root(&self, d: u32) -> bool {
        let xqd = self.x_power_q_pow(d);
        // gcd(f, xqd - x) over 𝔽_q
        let mut diff = xqd;
        diff[1] = self.base.sub(diff[1], 1);
        let gcd = self.poly_gcd_base(&self.modulus, &diff);
        gcd.len() - 1 > 0
    }

    /// x^(q^k) mod modulus, as a coefficient vector of length r.
    fn x_power_q_pow(&self, k: u32) -> Vec<u64> {
        let q = self.base.size();
        let mut x = self.basis(1.min(self.r as usize - 1));
        if self.r == 1 {
            // L = 𝔽_q; x ≡ -modulus[0]
            x = vec![self.base.neg(self.modulus[0])];
        }
        for _ in 0..k {
            // raise to the q-th power by square and multiply
            let mut acc = self.one();
            let mut base = x.clone();
            let mut e = q;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul(&acc, &base);
                }
                base = self.mul(&base, &base);
                e >>= 1;
            }
            x = acc;
        }
        x
    }

    fn poly_gcd_base(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        // euclidean algorithm on polynomials over 𝔽_q (the GaloisField base)
        let norm = |mut v: Vec<u64>| {
            while v.len() > 1 && *v.last().unwrap() == 0 {
                v.pop();
            }
            if v.is_empty() {
                v.push(0);
            }
            v
        };
        let mut x = norm(a.to_vec());
        let mut y = norm(b.to_vec());
        while y != [0] {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = norm(r);
        }
        x
    }

    fn poly_rem(&self, a: &[u64], m: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let shift = r.len() - 1 - dm;
                let c = self.base.mul(lead, self.base.inv(m[dm]));
                for (i, &mc) in m.iter().enumerate() {
                    let t = self.base.mul(c, mc);
                    r[i + shift] = self.base.sub(r[i + shift], t);
                }
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(0);
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli_are_the_expected_small_ones() {
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]); // t^2+t+1
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]); // t^3+t+1
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]); // t^2+1
    }

    #[test]
    fn field_axioms_spot_check() {
        for (p, m) in [(2, 4), (3, 3), (5, 2), (7, 1)] {
            let f = GaloisField::new(p, m);
            let n = f.size();
            // associativity/commutativity/distributivity over a pseudorandom sweep
            let mut x = 1u64;
            for _ in 0..50 {
                x = (x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407)) % n;
                let a = x;
                let b = (a * 7 + 3) % n;
                let c = (a * 31 + 11) % n;
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
            // Frobenius x ↦ x^p is additive
            let a = (n / 2).max(1);
            let b = (n / 3).max(1);
            assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        }
    }

    #[test]
    fn every_element_satisfies_field_equation() {
        let f = GaloisField::new(2, 4);
        for x in 0..f.size() {
            assert_eq!(f.pow(x, 16), x);
        }
        // subfield test: 𝔽_4 inside 𝔽_16 has 4 elements
        let sub: Vec<u64> = (0..f.size()).filter(|&x| f.in_subfield(x, 2)).collect();
        assert_eq!(sub.len(), 4);
    }

    #[test]
    fn irreducible_quadratic_has_no_small_roots() {
        // t^2 + t + 1 over 𝔽_2: no roots in 𝔽_2, two in 𝔽_4
        let f2 = GaloisField::new(2, 1);
        assert!(f2.roots(&[1, 1, 1]).is_empty());
        let f4 = GaloisField::new(2, 2);
        assert_eq!(f4.roots(&[1, 1, 1]).len(), 2);
    }

    #[test]
    fn extension_tower_multiplies_correctly() {
        // L = 𝔽_{4^2} over 𝔽_4
        let base = GaloisField::new(2, 2);
        let ext = ExtField::canonical(base.clone(), 2);
        let a = ext.basis(1); // t
        let sq = ext.mul(&a, &a); // t^2 reduced by the modulus
        // t^2 = -(m0 + m1 t)
        let expect = vec![base.neg(ext.modulus[0]), base.neg(ext.modulus[1])];
        assert_eq!(sq, expect);
        // nonzero elements are invertible: x^(q^r - 1) = 1
        let qr = base.size().pow(2);
        let mut pow = ext.one();
        for _ in 0..qr - 1 {
            pow = ext.mul(&pow, &a);
        }
        assert_eq!(pow, ext.one());
    }

    #[test]
    fn reducible_modulus_rejected() {
        let base = GaloisField::new(2, 1);
        // t^2 + 1 = (t+1)^2 over 𝔽_2
        assert_eq!(
            ExtField::new(base, vec![1, 0, 1]).unwrap_err(),
            FiniteFieldError::ReducibleModulus
        );
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(prime_power(2).unwrap(), (2, 1));
        assert_eq!(prime_power(64).unwrap(), (2, 6));
        assert_eq!(prime_power(49).unwrap(), (7, 2));
        assert!(prime_power(6).is_err());
        assert!(prime_power(128).is_err());
    }
}
