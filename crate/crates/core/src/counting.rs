//! Point counts of affine varieties over finite fields and of their
//! symmetric powers.
//!
//! A symmetric power count is computed two independent ways. The production
//! route derives the closed-point inventory c_d from the counts N_d by
//! Möbius inversion and reads off the t^n coefficient of
//! Π_d (1 − t^d)^(−c_d). The oracle route never inverts anything: it
//! enumerates actual points over 𝔽_{q^L}, L = lcm(1..n), splits them into
//! explicit Frobenius orbits by iterating x ↦ x^q on field elements, and
//! counts the Σ_n-orbits of n-tuples whose underlying multiset is stable
//! under coordinatewise Frobenius.

use crate::finite::{prime_power, FiniteFieldError, GaloisField};
use crate::poly::{FieldElem, FieldTag, MonomialOrder, ParseError, PolyError, Polynomial, Ring};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CountError {
    #[error("enumeration cap exceeded: {0} tuples")]
    CapExceeded(u128),
    #[error("count overflow (desk scale exceeded)")]
    Overflow,
    #[error("varieties live over different fields: q = {0} vs q = {1}")]
    MismatchedQ(u64, u64),
    #[error("too many variables: {0} (cap 3)")]
    TooManyVars(usize),
    #[error("equation uses undeclared variables")]
    BadEquation,
    #[error("equation coefficients must be over 𝔽_{0}")]
    WrongField(u64),
    #[error(transparent)]
    Field(#[from] FiniteFieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("input line {line}, column {column}: {msg}")]
    Input {
        line: usize,
        column: usize,
        msg: String,
    },
}

/// Resource limits for enumeration.
#[derive(Clone, Copy, Debug)]
pub struct CountCaps {
    /// Maximum number of coordinate tuples scanned in one enumeration.
    pub max_tuples: u128,
    /// Maximum field size per coordinate on the orbit-oracle path.
    pub max_oracle_field: u64,
}

impl Default for CountCaps {
    fn default() -> CountCaps {
        CountCaps {
            max_tuples: 1 << 22,
            max_oracle_field: 1 << 12,
        }
    }
}

/// An affine variety over 𝔽_q given by equations with 𝔽_p coefficients.
#[derive(Clone, Debug)]
pub struct AffineVarietySpec {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub vars: Vec<String>,
    pub equations: Vec<Polynomial>,
    pub label: String,
}

impl AffineVarietySpec {
    pub fn new(
        label: &str,
        q: u64,
        vars: &[&str],
        equations: Vec<Polynomial>,
    ) -> Result<AffineVarietySpec, CountError> {
        let (p, e) = prime_power(q)?;
        if vars.len() > 3 {
            return Err(CountError::TooManyVars(vars.len()));
        }
        let ring = Ring::new(vars, FieldTag::Fp(p));
        for eq in &equations {
            if eq.ring.vars != ring.vars {
                return Err(CountError::BadEquation);
            }
            if eq.ring.field != FieldTag::Fp(p) {
                return Err(CountError::WrongField(p));
            }
        }
        Ok(AffineVarietySpec {
            q,
            p,
            e,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            equations,
            label: label.to_string(),
        })
    }

    /// The point Spec(𝔽_q): zero variables, no equations.
    pub fn point(q: u64) -> AffineVarietySpec {
        AffineVarietySpec::new("point", q, &[], Vec::new()).unwrap()
    }

    /// The empty variety, cut out by 1 = 0.
    pub fn empty(q: u64) -> Result<AffineVarietySpec, CountError> {
        let (p, _) = prime_power(q)?;
        let ring = Ring::new(&["x"], FieldTag::Fp(p));
        let one = Polynomial::one(&ring, MonomialOrder::Grevlex);
        AffineVarietySpec::new("empty", q, &["x"], vec![one])
    }

    pub fn affine_line(q: u64) -> AffineVarietySpec {
        AffineVarietySpec::new("A1", q, &["x"], Vec::new()).unwrap()
    }

    pub fn affine_plane(q: u64) -> AffineVarietySpec {
        AffineVarietySpec::new("A2", q, &["x", "y"], Vec::new()).unwrap()
    }
}

/// Counts N_d = #X(𝔽_{q^d}) and closed-point counts c_d, for 1 ≤ d ≤ D.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedPointInventory {
    pub q: u64,
    pub label: String,
    /// rational point counts, n[d-1] = N_d
    pub n: Vec<u64>,
    /// closed points of degree d, c[d-1] = c_d
    pub c: Vec<u64>,
}

impl ClosedPointInventory {
    pub fn depth(&self) -> usize {
        self.c.len()
    }

    /// Σ_{d | m} d·c_d must reproduce N_m.
    pub fn moebius_consistent(&self) -> bool {
        (1..=self.depth()).all(|m| {
            let total: u64 = (1..=m)
                .filter(|d| m % d == 0)
                .map(|d| d as u64 * self.c[d - 1])
                .sum();
            total == self.n[m - 1]
        })
    }

    /// Inventory of a disjoint union: closed points add.
    pub fn disjoint_union(
        &self,
        other: &ClosedPointInventory,
    ) -> Result<ClosedPointInventory, CountError> {
        if self.q != other.q {
            return Err(CountError::MismatchedQ(self.q, other.q));
        }
        let depth = self.depth().min(other.depth());
        Ok(ClosedPointInventory {
            q: self.q,
            label: format!("{}+{}", self.label, other.label),
            n: (0..depth).map(|i| self.n[i] + other.n[i]).collect(),
            c: (0..depth).map(|i| self.c[i] + other.c[i]).collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    GeneratingFunction,
    OrbitOracle,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymCountReport {
    pub label: String,
    pub q: u64,
    pub n: u32,
    pub count: u64,
    pub method: CountMethod,
}

/// All points of X over 𝔽_{q^d}, as coordinate vectors of field indices in
/// the degree-(e·d) field over p. Deterministic lexicographic order.
pub fn enumerate_points(
    x: &AffineVarietySpec,
    d: u32,
    caps: &CountCaps,
) -> Result<(GaloisField, Vec<Vec<u64>>), CountError> {
    let field = GaloisField::new(x.p, x.e * d);
    let nvars = x.vars.len();
    let total = (field.size() as u128).pow(nvars as u32);
    if total > caps.max_tuples {
        return Err(CountError::CapExceeded(total));
    }
    // compile equations once: (coeff mod p, exponent vector)
    let compiled: Vec<Vec<(u64, Vec<u32>)>> = x
        .equations
        .iter()
        .map(|eq| {
            eq.terms
                .iter()
                .map(|(m, c)| {
                    let cv = match c {
                        FieldElem::Fp { v, .. } => *v,
                        FieldElem::Rat(_) => unreachable!("checked at construction"),
                    };
                    (cv % x.p, m.clone())
                })
                .collect()
        })
        .collect();
    let mut points = Vec::new();
    if nvars == 0 {
        // Spec(k): one empty tuple, excluded only by an inconsistent equation
        let ok = compiled.iter().all(|terms| {
            let mut acc = 0u64;
            for (cv, _) in terms {
                acc = field.add(acc, field.from_int(*cv));
            }
            acc == 0
        });
        if ok {
            points.push(Vec::new());
        }
        return Ok((field, points));
    }
    let size = field.size();
    let mut tuple = vec![0u64; nvars];
    'outer: loop {
        let ok = compiled.iter().all(|terms| {
            let mut acc = 0u64;
            for (cv, mono) in terms {
                let mut t = field.from_int(*cv);
                for (i, &e) in mono.iter().enumerate() {
                    if e > 0 {
                        t = field.mul(t, field.pow(tuple[i], e as u64));
                    }
                }
                acc = field.add(acc, t);
            }
            acc == 0
        });
        if ok {
            points.push(tuple.clone());
        }
        // odometer increment, last coordinate fastest
        for i in (0..nvars).rev() {
            tuple[i] += 1;
            if tuple[i] < size {
                continue 'outer;
            }
            tuple[i] = 0;
        }
        break;
    }
    Ok((field, points))
}

/// Closed-point inventory up to degree D, via Möbius inversion of the N_d.
pub fn closed_points(
    x: &AffineVarietySpec,
    depth: u32,
    caps: &CountCaps,
) -> Result<ClosedPointInventory, CountError> {
    let mut n = Vec::with_capacity(depth as usize);
    for d in 1..=depth {
        let (_, pts) = enumerate_points(x, d, caps)?;
        n.push(pts.len() as u64);
    }
    let mut c = vec![0u64; depth as usize];
    for d in 1..=depth as usize {
        // d·c_d = Σ_{e | d} μ(d/e)·N_e
        let mut acc: i128 = 0;
        for e in 1..=d {
            if d % e == 0 {
                acc += moebius((d / e) as u64) as i128 * n[e - 1] as i128;
            }
        }
        debug_assert!(acc >= 0 && acc % d as i128 == 0, "orbit counting must divide");
        c[d - 1] = (acc / d as i128) as u64;
    }
    let inv = ClosedPointInventory {
        q: x.q,
        label: x.label.clone(),
        n,
        c,
    };
    debug_assert!(inv.moebius_consistent());
    Ok(inv)
}

fn moebius(n: u64) -> i64 {
    let mut m = n;
    let mut factors = 0;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            factors += 1;
        }
        d += 1;
    }
    if m > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// #Sym^n X(𝔽_q) from an inventory: the t^n coefficient of
/// Π_{d ≤ n} (1 − t^d)^(−c_d).
pub fn sym_count_from_inventory(inv: &ClosedPointInventory, n: u32) -> Result<u64, CountError> {
    let n = n as usize;
    if n == 0 {
        return Ok(1);
    }
    assert!(inv.depth() >= n, "inventory too shallow");
    let mut series = vec![0u64; n + 1];
    series[0] = 1;
    for d in 1..=n {
        let c = inv.c[d - 1];
        if c == 0 {
            continue;
        }
        // multiply by (1 - t^d)^(-c): C(c+k-1, k) multisets of k points
        let mut next = vec![0u64; n + 1];
        for (deg, &coeff) in series.iter().enumerate() {
            if coeff == 0 {
                continue;
            }
            let mut k = 0;
            while deg + k * d <= n {
                let ways = binomial_u64(c + k as u64 - 1, k as u64).ok_or(CountError::Overflow)?;
                let add = coeff.checked_mul(ways).ok_or(CountError::Overflow)?;
                next[deg + k * d] = next[deg + k * d]
                    .checked_add(add)
                    .ok_or(CountError::Overflow)?;
                k += 1;
            }
        }
        series = next;
    }
    Ok(series[n])
}

fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k == 0 {
        return Some(1);
    }
    if n == 0 {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

pub fn sym_count(
    x: &AffineVarietySpec,
    n: u32,
    caps: &CountCaps,
) -> Result<SymCountReport, CountError> {
    let count = if n == 0 {
        1
    } else {
        let inv = closed_points(x, n, caps)?;
        sym_count_from_inventory(&inv, n)?
    };
    Ok(SymCountReport {
        label: x.label.clone(),
        q: x.q,
        n,
        count,
        method: CountMethod::GeneratingFunction,
    })
}

/// Independent oracle: Frobenius-stable Σ_n-orbits of n-tuples of points
/// over 𝔽_{q^L}, L = lcm(1..n).
pub fn sym_count_oracle(
    x: &AffineVarietySpec,
    n: u32,
    caps: &CountCaps,
) -> Result<SymCountReport, CountError> {
    assert!(n <= 3, "oracle path capped at n ≤ 3");
    let count = if n == 0 {
        1
    } else {
        let l = (1..=n as u64).fold(1u64, num_integer::lcm) as u32;
        let field_size = (x.q as u128).pow(l);
        if field_size > caps.max_oracle_field as u128 {
            return Err(CountError::CapExceeded(field_size));
        }
        let (field, points) = enumerate_points(x, l, caps)?;
        let orbit_sizes = frobenius_orbit_sizes(&field, &points, x.q);
        stable_multiset_count(&orbit_sizes, n as usize)?
    };
    Ok(SymCountReport {
        label: x.label.clone(),
        q: x.q,
        n,
        count,
        method: CountMethod::OrbitOracle,
    })
}

/// Partition `points` into orbits of coordinatewise x ↦ x^q; returns the
/// orbit sizes in first-seen order.
pub fn frobenius_orbit_sizes(field: &GaloisField, points: &[Vec<u64>], q: u64) -> Vec<usize> {
    let index: HashMap<&[u64], usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let mut seen = vec![false; points.len()];
    let mut sizes = Vec::new();
    for start in 0..points.len() {
        if seen[start] {
            continue;
        }
        let mut size = 0;
        let mut cur = points[start].clone();
        loop {
            let i = *index
                .get(cur.as_slice())
                .expect("Frobenius permutes the solution set");
            if seen[i] {
                break;
            }
            seen[i] = true;
            size += 1;
            cur = cur.iter().map(|&c| field.pow(c, q)).collect();
        }
        sizes.push(size);
    }
    sizes
}

/// Number of multisets of total size n built from whole orbits: the number
/// of solutions of Σ μ_j · s_j = n with μ_j ≥ 0.
fn stable_multiset_count(orbit_sizes: &[usize], n: usize) -> Result<u64, CountError> {
    let mut dp = vec![0u64; n + 1];
    dp[0] = 1;
    for &s in orbit_sizes {
        if s > n {
            continue;
        }
        for deg in s..=n {
            dp[deg] = dp[deg]
                .checked_add(dp[deg - s])
                .ok_or(CountError::Overflow)?;
        }
    }
    Ok(dp[n])
}

#[derive(Clone, Debug, Serialize)]
pub struct KunnethCountReport {
    pub label_x: String,
    pub label_y: String,
    pub q: u64,
    pub n: u32,
    pub lhs: u64,
    pub rhs: u64,
    pub rhs_terms: Vec<u64>,
    pub holds: bool,
}

/// #Sym^n(X ⊔ Y) versus Σ_{i+j=n} #Sym^i X · #Sym^j Y.
pub fn kunneth_verify(
    x: &AffineVarietySpec,
    y: &AffineVarietySpec,
    n: u32,
    caps: &CountCaps,
) -> Result<KunnethCountReport, CountError> {
    if x.q != y.q {
        return Err(CountError::MismatchedQ(x.q, y.q));
    }
    let depth = n.max(1);
    let inv_x = closed_points(x, depth, caps)?;
    let inv_y = closed_points(y, depth, caps)?;
    let union = inv_x.disjoint_union(&inv_y)?;
    let lhs = sym_count_from_inventory(&union, n)?;
    let mut rhs_terms = Vec::with_capacity(n as usize + 1);
    let mut rhs: u64 = 0;
    for i in 0..=n {
        let a = sym_count_from_inventory(&inv_x, i)?;
        let b = sym_count_from_inventory(&inv_y, n - i)?;
        let t = a.checked_mul(b).ok_or(CountError::Overflow)?;
        rhs_terms.push(t);
        rhs = rhs.checked_add(t).ok_or(CountError::Overflow)?;
    }
    Ok(KunnethCountReport {
        label_x: x.label.clone(),
        label_y: y.label.clone(),
        q: x.q,
        n,
        lhs,
        rhs,
        rhs_terms,
        holds: lhs == rhs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerCountReport {
    pub label_x: String,
    pub label_y: String,
    pub q: u64,
    pub n: u32,
    /// t_i = Σ_{n-i ≤ j ≤ n} #Sym^j X · #Sym^{n-j} Y, i = 0..n
    pub terms: Vec<u64>,
    /// t_i − t_{i−1}, which must equal #Sym^{n-i} X · #Sym^i Y
    pub cone_counts: Vec<u64>,
    pub monotone: bool,
    pub endpoints_match: bool,
    pub cones_match: bool,
}

/// Tower term counts for the coprojection X → X ⊔ Y.
pub fn tower_counts(
    x: &AffineVarietySpec,
    y: &AffineVarietySpec,
    n: u32,
    caps: &CountCaps,
) -> Result<TowerCountReport, CountError> {
    if x.q != y.q {
        return Err(CountError::MismatchedQ(x.q, y.q));
    }
    let depth = n.max(1);
    let inv_x = closed_points(x, depth, caps)?;
    let inv_y = closed_points(y, depth, caps)?;
    let sym_x: Vec<u64> = (0..=n)
        .map(|j| sym_count_from_inventory(&inv_x, j))
        .collect::<Result<_, _>>()?;
    let sym_y: Vec<u64> = (0..=n)
        .map(|j| sym_count_from_inventory(&inv_y, j))
        .collect::<Result<_, _>>()?;
    let mut terms = Vec::with_capacity(n as usize + 1);
    for i in 0..=n as usize {
        let mut t: u64 = 0;
        for j in (n as usize - i)..=(n as usize) {
            let prod = sym_x[j]
                .checked_mul(sym_y[n as usize - j])
                .ok_or(CountError::Overflow)?;
            t = t.checked_add(prod).ok_or(CountError::Overflow)?;
        }
        terms.push(t);
    }
    let cone_counts: Vec<u64> = (1..=n as usize).map(|i| terms[i] - terms[i - 1]).collect();
    let monotone = terms.windows(2).all(|w| w[0] <= w[1]);
    let cones_match = (1..=n as usize)
        .all(|i| cone_counts[i - 1] == sym_x[n as usize - i].saturating_mul(sym_y[i]));
    let kunneth = kunneth_verify(x, y, n, caps)?;
    let endpoints_match = terms[0] == sym_x[n as usize] && *terms.last().unwrap() == kunneth.lhs;
    Ok(TowerCountReport {
        label_x: x.label.clone(),
        label_y: y.label.clone(),
        q: x.q,
        n,
        terms,
        cone_counts,
        monotone,
        endpoints_match,
        cones_match,
    })
}

/// Parse the variety stanza format:
/// `label=...; q=...; vars=x,y; eqs: <poly>; <poly>`
/// Stanzas are separated by blank lines; `eqs:` may be omitted for affine
/// space and `vars=` may be empty for the point.
pub fn parse_varieties(src: &str) -> Result<Vec<AffineVarietySpec>, CountError> {
    let mut out = Vec::new();
    for (stanza, first_line) in split_stanzas(src) {
        out.push(parse_stanza(&stanza, first_line)?);
    }
    Ok(out)
}

fn split_stanzas(src: &str) -> Vec<(String, usize)> {
    let mut stanzas = Vec::new();
    let mut cur = String::new();
    let mut start_line = 0;
    for (i, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            if !cur.trim().is_empty() {
                stanzas.push((cur.clone(), start_line + 1));
            }
            cur.clear();
        } else {
            if cur.is_empty() {
                start_line = i;
            }
            cur.push_str(line);
            cur.push('\n');
        }
    }
    if !cur.trim().is_empty() {
        stanzas.push((cur, start_line + 1));
    }
    stanzas
}

fn parse_stanza(stanza: &str, line: usize) -> Result<AffineVarietySpec, CountError> {
    let err = |msg: &str| CountError::Input {
        line,
        column: 0,
        msg: msg.to_string(),
    };
    let text = stanza.replace('\n', " ");
    let (head, eqs_text) = match text.find("eqs:") {
        Some(i) => (&text[..i], Some(&text[i + 4..])),
        None => (text.as_str(), None),
    };
    let mut label = String::from("X");
    let mut q: Option<u64> = None;
    let mut vars: Vec<String> = Vec::new();
    for part in head.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| err(&format!("expected key=value, got `{part}`")))?;
        match key.trim() {
            "label" => label = value.trim().to_string(),
            "q" => {
                q = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| err("q must be an integer"))?,
                )
            }
            "vars" => {
                vars = value
                    .trim()
                    .split(',')
                    .map(|v| v.trim().to_string())
                    .filter(|v| !v.is_empty())
                    .collect()
            }
            other => return Err(err(&format!("unknown key `{other}`"))),
        }
    }
    let q = q.ok_or_else(|| err("missing q"))?;
    let (p, _) = prime_power(q)?;
    let ring = Ring::new(
        &vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        FieldTag::Fp(p),
    );
    let mut equations = Vec::new();
    if let Some(eqs) = eqs_text {
        for eq_src in eqs.split(';') {
            let eq_src = eq_src.trim();
            if eq_src.is_empty() {
                continue;
            }
            let poly = crate::poly::parse_poly(eq_src, &ring, MonomialOrder::Grevlex).map_err(
                |e: ParseError| CountError::Input {
                    line,
                    column: e.pos + 1,
                    msg: e.msg,
                },
            )?;
            equations.push(poly);
        }
    }
    AffineVarietySpec::new(
        &label,
        q,
        &vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        equations,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> CountCaps {
        CountCaps::default()
    }

    #[test]
    fn affine_line_point_counts() {
        let x = AffineVarietySpec::affine_line(2);
        let (_, pts) = enumerate_points(&x, 1, &caps()).unwrap();
        assert_eq!(pts.len(), 2);
        let inv = closed_points(&x, 2, &caps()).unwrap();
        assert_eq!(inv.c, vec![2, 1]); // x, x+1 and x^2+x+1
        assert!(inv.moebius_consistent());
    }

    #[test]
    fn irreducible_quadratic_has_points_only_in_degree_two() {
        let ring = Ring::new(&["x"], FieldTag::fp(2).unwrap());
        let eq = crate::poly::parse_poly("x^2 + x + 1", &ring, MonomialOrder::Grevlex).unwrap();
        let x = AffineVarietySpec::new("conj-pair", 2, &["x"], vec![eq]).unwrap();
        assert_eq!(enumerate_points(&x, 1, &caps()).unwrap().1.len(), 0);
        assert_eq!(enumerate_points(&x, 2, &caps()).unwrap().1.len(), 2);
    }

    #[test]
    fn point_and_empty_inventories() {
        let pt = AffineVarietySpec::point(3);
        let inv = closed_points(&pt, 3, &caps()).unwrap();
        assert_eq!(inv.c, vec![1, 0, 0]);

        let empty = AffineVarietySpec::empty(3).unwrap();
        let inv = closed_points(&empty, 3, &caps()).unwrap();
        assert_eq!(inv.c, vec![0, 0, 0]);
        assert_eq!(sym_count(&empty, 2, &caps()).unwrap().count, 0);
        assert_eq!(sym_count(&empty, 0, &caps()).unwrap().count, 1);
    }

    #[test]
    fn sym_counts_of_affine_line_are_q_to_the_n() {
        // monic-polynomial model: Sym^n A^1 = A^n
        for q in [2u64, 3] {
            let x = AffineVarietySpec::affine_line(q);
            for n in 0..=5u32 {
                assert_eq!(sym_count(&x, n, &caps()).unwrap().count, q.pow(n));
            }
        }
    }

    #[test]
    fn oracle_agrees_on_named_cases() {
        // A^1 over F_2, n = 2: both methods give 4
        let x = AffineVarietySpec::affine_line(2);
        assert_eq!(sym_count(&x, 2, &caps()).unwrap().count, 4);
        assert_eq!(sym_count_oracle(&x, 2, &caps()).unwrap().count, 4);

        // the conjugate pair {x^2+x+1 = 0} over F_2: the only degree-2
        // multiset is the closed point itself, so both methods give 1
        let ring = Ring::new(&["x"], FieldTag::fp(2).unwrap());
        let eq = crate::poly::parse_poly("x^2 + x + 1", &ring, MonomialOrder::Grevlex).unwrap();
        let y = AffineVarietySpec::new("conj-pair", 2, &["x"], vec![eq]).unwrap();
        assert_eq!(sym_count(&y, 2, &caps()).unwrap().count, 1);
        assert_eq!(sym_count_oracle(&y, 2, &caps()).unwrap().count, 1);

        // point: Sym^3 has one point
        let pt = AffineVarietySpec::point(2);
        assert_eq!(sym_count_oracle(&pt, 3, &caps()).unwrap().count, 1);
    }

    fn literal_stable_multisets(
        pts: &[Vec<u64>],
        field: &GaloisField,
        q: u64,
        n: usize,
    ) -> u64 {
        fn rec(
            pts: &[Vec<u64>],
            field: &GaloisField,
            q: u64,
            n: usize,
            start: usize,
            chosen: &mut Vec<usize>,
            count: &mut u64,
        ) {
            if chosen.len() == n {
                let mut img: Vec<Vec<u64>> = chosen
                    .iter()
                    .map(|&i| pts[i].iter().map(|&c| field.pow(c, q)).collect())
                    .collect();
                let mut orig: Vec<Vec<u64>> = chosen.iter().map(|&i| pts[i].clone()).collect();
                img.sort();
                orig.sort();
                if img == orig {
                    *count += 1;
                }
                return;
            }
            for i in start..pts.len() {
                chosen.push(i);
                rec(pts, field, q, n, i, chosen, count);
                chosen.pop();
            }
        }
        let mut count = 0;
        rec(pts, field, q, n, 0, &mut Vec::new(), &mut count);
        count
    }

    /// Literal version of the oracle on a micro input: enumerate every
    /// multiset of points of X(F_{q^L}) and test Frobenius stability
    /// elementwise. Validates the orbit-decomposition path.
    #[test]
    fn oracle_matches_literal_multiset_enumeration() {
        let ring = Ring::new(&["x", "y"], FieldTag::fp(2).unwrap());
        let eq = crate::poly::parse_poly("y^2 + x^3 + 1", &ring, MonomialOrder::Grevlex).unwrap();
        let x = AffineVarietySpec::new("curve", 2, &["x", "y"], vec![eq]).unwrap();
        for n in 1..=3u32 {
            let l = (1..=n as u64).fold(1u64, num_integer::lcm) as u32;
            let (field, pts) = enumerate_points(&x, l, &caps()).unwrap();
            let literal = literal_stable_multisets(&pts, &field, 2, n as usize);
            let oracle = sym_count_oracle(&x, n, &caps()).unwrap().count;
            let gf = sym_count(&x, n, &caps()).unwrap().count;
            assert_eq!(oracle, literal, "orbit path vs literal at n = {n}");
            assert_eq!(gf, literal, "generating function vs literal at n = {n}");
        }
    }

    #[test]
    fn kunneth_named_cases() {
        // two points, n = 2: multisets of size 2 from 2 elements
        let pt = AffineVarietySpec::point(2);
        let rep = kunneth_verify(&pt, &pt, 2, &caps()).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, 3);
        assert_eq!(rep.rhs_terms, vec![1, 1, 1]);

        // empty summand is neutral
        let x = AffineVarietySpec::affine_line(2);
        let empty = AffineVarietySpec::empty(2).unwrap();
        for n in 0..=4 {
            let rep = kunneth_verify(&x, &empty, n, &caps()).unwrap();
            assert!(rep.holds);
            assert_eq!(rep.lhs, sym_count(&x, n, &caps()).unwrap().count);
        }

        // two affine lines over F_2, n = 2: value frozen after checking
        // both routes (4 + 2·2 + 4)
        let rep = kunneth_verify(&x, &x, 2, &caps()).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, 12);

        // mismatched fields are rejected
        let y3 = AffineVarietySpec::affine_line(3);
        assert!(matches!(
            kunneth_verify(&x, &y3, 2, &caps()),
            Err(CountError::MismatchedQ(2, 3))
        ));
    }

    #[test]
    fn tower_named_cases() {
        let pt = AffineVarietySpec::point(2);
        let rep = tower_counts(&pt, &pt, 2, &caps()).unwrap();
        assert_eq!(rep.terms, vec![1, 2, 3]);
        assert!(rep.monotone && rep.endpoints_match && rep.cones_match);

        let line = AffineVarietySpec::affine_line(2);
        let rep = tower_counts(&line, &pt, 2, &caps()).unwrap();
        assert_eq!(rep.terms, vec![4, 6, 7]);
        assert!(rep.monotone && rep.endpoints_match && rep.cones_match);

        // empty second summand: constant tower
        let empty = AffineVarietySpec::empty(2).unwrap();
        let rep = tower_counts(&line, &empty, 3, &caps()).unwrap();
        assert!(rep.terms.windows(2).all(|w| w[0] == w[1]));
        assert!(rep.monotone && rep.endpoints_match && rep.cones_match);
    }

    #[test]
    fn stanza_parsing_round_trip() {
        let src = "\
label=conj-pair; q=2; vars=x; eqs: x^2 + x + 1

label=plane; q=3; vars=x,y
";
        let vs = parse_varieties(src).unwrap();
        assert_eq!(vs.len(), 2);
        assert_eq!(vs[0].label, "conj-pair");
        assert_eq!(vs[0].equations.len(), 1);
        assert_eq!(vs[1].vars, vec!["x", "y"]);
        assert!(vs[1].equations.is_empty());

        let bad = parse_varieties("label=x; q=6; vars=x");
        assert!(bad.is_err());
    }

    #[test]
    fn enumeration_cap_is_hard() {
        let x = AffineVarietySpec::affine_plane(3);
        let tight = CountCaps {
            max_tuples: 5,
            max_oracle_field: 4096,
        };
        assert!(matches!(
            enumerate_points(&x, 1, &tight),
            Err(CountError::CapExceeded(_))
        ));
    }

    #[test]
    fn disjoint_union_commutes_and_associates() {
        let caps = caps();
        let a = closed_points(&AffineVarietySpec::affine_line(2), 3, &caps).unwrap();
        let b = closed_points(&AffineVarietySpec::point(2), 3, &caps).unwrap();
        let ring = Ring::new(&["x"], FieldTag::fp(2).unwrap());
        let eq = crate::poly::parse_poly("x^2 + x", &ring, MonomialOrder::Grevlex).unwrap();
        let c = closed_points(
            &AffineVarietySpec::new("two-pts", 2, &["x"], vec![eq]).unwrap(),
            3,
            &caps,
        )
        .unwrap();
        let ab = a.disjoint_union(&b).unwrap();
        let ba = b.disjoint_union(&a).unwrap();
        assert_eq!(ab.c, ba.c);
        assert_eq!(ab.n, ba.n);
        let left = ab.disjoint_union(&c).unwrap();
        let right = a.disjoint_union(&b.disjoint_union(&c).unwrap()).unwrap();
        assert_eq!(left.c, right.c);
        assert!(left.moebius_consistent());
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    /// Random one-variable variety over 𝔽_q from raw coefficient data.
    fn arb_variety() -> impl Strategy<Value = AffineVarietySpec> {
        (
            prop_oneof![Just(2u64), Just(3u64)],
            proptest::collection::vec(proptest::collection::vec(0i64..3, 3), 0..3),
        )
            .prop_map(|(q, eq_coeffs)| {
                let ring = Ring::new(&["x"], FieldTag::fp(q).unwrap());
                let equations = eq_coeffs
                    .into_iter()
                    .map(|cs| {
                        let mut map = std::collections::BTreeMap::new();
                        for (deg, c) in cs.into_iter().enumerate() {
                            if c != 0 {
                                map.insert(
                                    vec![deg as u32],
                                    FieldElem::from_int(ring.field, c),
                                );
                            }
                        }
                        Polynomial::from_map(&ring, MonomialOrder::Grevlex, map)
                    })
                    .collect();
                AffineVarietySpec::new("prop", q, &["x"], equations).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn inventories_are_moebius_consistent(x in arb_variety()) {
            let inv = closed_points(&x, 4, &CountCaps::default()).unwrap();
            prop_assert!(inv.moebius_consistent());
            prop_assert!(inv.c.iter().all(|&c| c < u64::MAX));
        }

        #[test]
        fn both_count_methods_agree(x in arb_variety(), n in 0u32..=2) {
            let caps = CountCaps::default();
            let gf = sym_count(&x, n, &caps).unwrap().count;
            let orbit = sym_count_oracle(&x, n, &caps).unwrap().count;
            prop_assert_eq!(gf, orbit);
        }

        #[test]
        fn kunneth_identity_on_random_pairs(
            x in arb_variety(),
            y in arb_variety(),
            n in 0u32..=3,
        ) {
            if x.q == y.q {
                let rep = kunneth_verify(&x, &y, n, &CountCaps::default()).unwrap();
                prop_assert!(rep.holds, "lhs {} rhs {}", rep.lhs, rep.rhs);
            }
        }
    }
}
