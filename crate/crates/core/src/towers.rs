//! Finite pointed-set models of symmetric-power towers.
//!
//! For a coprojection X → X ∨ Y of finite pointed sets, the n-th smash
//! power filters by the number of coordinates landing in Y. The quotient
//! of the i-th filtration stage by the slot permutation action is the
//! categoric tower term; the wedge of smash products of symmetric powers
//! is the geometric one. The comparison map sends an orbit to the pair of
//! coordinate multisets. Smash products collapse every tuple containing
//! the basepoint, so non-base elements of Sym^n S are exactly the size-n
//! multisets of non-base elements of S.
//!
//! Group-theoretic checks (induced sets, weight-graded wedge quotients)
//! run on explicit permutation groups built by closure from generators.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("index {i} out of range 0..={n}")]
    IndexOutOfRange { i: u32, n: u32 },
    #[error("generators do not define a subgroup: {0}")]
    NotASubgroup(String),
    #[error("generator images do not define a group action")]
    NotAnAction,
}

const MAX_SET: usize = 12;
const MAX_POWER: u32 = 5;

/// A finite pointed set; index 0 is the basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedSet {
    pub labels: Vec<String>,
}

impl PointedSet {
    pub fn new(non_base: &[&str]) -> PointedSet {
        let mut labels = vec!["*".to_string()];
        labels.extend(non_base.iter().map(|s| s.to_string()));
        PointedSet { labels }
    }

    /// A pointed set with `k` anonymous non-base elements.
    pub fn of_size(k: usize) -> PointedSet {
        let mut labels = vec!["*".to_string()];
        labels.extend((0..k).map(|i| format!("e{i}")));
        PointedSet { labels }
    }

    pub fn base_only() -> PointedSet {
        PointedSet {
            labels: vec!["*".to_string()],
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn non_base(&self) -> usize {
        self.labels.len() - 1
    }
}

/// The canonical inclusion X → X ∨ Y.
#[derive(Clone, Debug)]
pub struct Coprojection {
    pub x: PointedSet,
    pub y: PointedSet,
}

impl Coprojection {
    pub fn new(x: PointedSet, y: PointedSet) -> Coprojection {
        Coprojection { x, y }
    }

    fn a(&self) -> usize {
        self.x.non_base()
    }

    fn b(&self) -> usize {
        self.y.non_base()
    }

    /// The wedge X ∨ Y: basepoints identified, labels disambiguated when
    /// the summands collide.
    pub fn target(&self) -> PointedSet {
        let mut labels = vec!["*".to_string()];
        labels.extend(self.x.labels[1..].iter().cloned());
        for l in &self.y.labels[1..] {
            if labels.contains(l) {
                labels.push(format!("{l}'"));
            } else {
                labels.push(l.clone());
            }
        }
        PointedSet { labels }
    }
}

/// Sorted size-n multisets over codes 1..=k, ascending.
fn multisets_over(k: usize, n: usize) -> Vec<Vec<u16>> {
    fn rec(k: usize, n: usize, min: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in min..=(k as u16) {
            cur.push(c);
            rec(k, n, c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, n, 1, &mut Vec::new(), &mut out);
    out
}

fn check_caps(s: &PointedSet, n: u32) -> Result<(), TowerError> {
    if s.size() > MAX_SET || n > MAX_POWER {
        return Err(TowerError::CapExceeded(format!(
            "|S| = {}, n = {n}",
            s.size()
        )));
    }
    Ok(())
}

/// Sym^n S = S^∧n / Σ_n: the basepoint plus one element per size-n
/// multiset of non-base elements, computed as canonical sorted-tuple
/// representatives of orbits of smash tuples.
pub fn smash_power_sym(s: &PointedSet, n: u32) -> Result<PointedSet, TowerError> {
    check_caps(s, n)?;
    let reps = multisets_over(s.non_base(), n as usize);
    let mut labels = vec!["*".to_string()];
    for rep in &reps {
        let parts: Vec<&str> = rep.iter().map(|&c| s.labels[c as usize].as_str()).collect();
        labels.push(format!("{{{}}}", parts.join(",")));
    }
    Ok(PointedSet { labels })
}

/// All ordered tuples of the i-th box stage: coordinates are non-base
/// wedge codes with at most i of them in the Y summand.
fn box_tuples(a: usize, b: usize, n: u32, i: u32) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let total = a + b;
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    if total == 0 {
        return out;
    }
    let mut tuple = vec![1u16; n as usize];
    'outer: loop {
        let y_count = tuple.iter().filter(|&&c| c as usize > a).count();
        if y_count <= i as usize {
            out.push(tuple.clone());
        }
        for k in (0..n as usize).rev() {
            tuple[k] += 1;
            if tuple[k] as usize <= total {
                continue 'outer;
            }
            tuple[k] = 1;
        }
        break;
    }
    out
}

/// The i-th box object of the coprojection: the pointed subset of
/// (X ∨ Y)^∧n of tuples with at most i coordinates in Y.
pub fn box_object(f: &Coprojection, n: u32, i: u32) -> Result<PointedSet, TowerError> {
    if i > n {
        return Err(TowerError::IndexOutOfRange { i, n });
    }
    let target = f.target();
    check_caps(&target, n)?;
    let tuples = box_tuples(f.a(), f.b(), n, i);
    let mut labels = vec!["*".to_string()];
    for t in &tuples {
        let parts: Vec<&str> = t
            .iter()
            .map(|&c| target.labels[c as usize].as_str())
            .collect();
        labels.push(format!("({})", parts.join(",")));
    }
    Ok(PointedSet { labels })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerKind {
    Categoric,
    Geometric,
}

/// A tower of pointed sets recorded by cardinalities.
#[derive(Clone, Debug, Serialize)]
pub struct KunnethTower {
    pub n: u32,
    pub kind: TowerKind,
    /// Full pointed cardinalities of the n+1 terms.
    pub term_sizes: Vec<usize>,
    /// term_sizes[i] − term_sizes[i−1] for i = 1..n.
    pub cone_sizes: Vec<usize>,
}

/// Orbit keys of the i-th categoric term: sorted box tuples.
fn categoric_term(a: usize, b: usize, n: u32, i: u32) -> BTreeSet<Vec<u16>> {
    box_tuples(a, b, n, i)
        .into_iter()
        .map(|mut t| {
            t.sort_unstable();
            t
        })
        .collect()
}

/// Keys of the i-th geometric term: wedge summand (l, xs, ys) with
/// n−i ≤ l ≤ n, xs a size-l multiset over X codes, ys over Y codes.
type GeomKey = (usize, Vec<u16>, Vec<u16>);

fn geometric_term(a: usize, b: usize, n: u32, i: u32) -> BTreeSet<GeomKey> {
    let mut out = BTreeSet::new();
    for l in (n - i) as usize..=n as usize {
        for xs in multisets_over(a, l) {
            for ys in multisets_over(b, n as usize - l) {
                out.insert((l, xs.clone(), ys));
            }
        }
    }
    out
}

/// The comparison map on keys: split the sorted wedge tuple into its X
/// and Y coordinate multisets.
fn theta_key(a: usize, key: &[u16]) -> GeomKey {
    let xs: Vec<u16> = key.iter().copied().filter(|&c| c as usize <= a).collect();
    let ys: Vec<u16> = key
        .iter()
        .copied()
        .filter(|&c| c as usize > a)
        .map(|c| c - a as u16)
        .collect();
    (xs.len(), xs, ys)
}

pub fn tower_categoric(f: &Coprojection, n: u32) -> Result<KunnethTower, TowerError> {
    check_caps(&f.target(), n)?;
    let sizes: Vec<usize> = (0..=n)
        .map(|i| categoric_term(f.a(), f.b(), n, i).len() + 1)
        .collect();
    Ok(tower_from_sizes(n, TowerKind::Categoric, sizes))
}

pub fn tower_geometric(f: &Coprojection, n: u32) -> Result<KunnethTower, TowerError> {
    check_caps(&f.target(), n)?;
    let sizes: Vec<usize> = (0..=n)
        .map(|i| geometric_term(f.a(), f.b(), n, i).len() + 1)
        .collect();
    Ok(tower_from_sizes(n, TowerKind::Geometric, sizes))
}

fn tower_from_sizes(n: u32, kind: TowerKind, term_sizes: Vec<usize>) -> KunnethTower {
    let cone_sizes = term_sizes.windows(2).map(|w| w[1] - w[0]).collect();
    KunnethTower {
        n,
        kind,
        term_sizes,
        cone_sizes,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaLadderReport {
    pub n: u32,
    pub sizes: Vec<usize>,
    pub geometric_sizes: Vec<usize>,
    pub cone_sizes: Vec<usize>,
    pub theta_bijective: bool,
    pub squares_commute: bool,
}

/// Build the comparison ladder and check each rung is a bijection and all
/// squares commute. Bijectivity here is an observed property of the finite
/// model; it is reported, not presumed.
pub fn theta_ladder(f: &Coprojection, n: u32) -> Result<ThetaLadderReport, TowerError> {
    check_caps(&f.target(), n)?;
    let (a, b) = (f.a(), f.b());
    let mut sizes = Vec::new();
    let mut geometric_sizes = Vec::new();
    let mut theta_bijective = true;
    let mut squares_commute = true;
    let mut maps: Vec<BTreeMap<Vec<u16>, GeomKey>> = Vec::new();
    let mut terms: Vec<BTreeSet<Vec<u16>>> = Vec::new();
    for i in 0..=n {
        let term = categoric_term(a, b, n, i);
        let geom = geometric_term(a, b, n, i);
        let map: BTreeMap<Vec<u16>, GeomKey> =
            term.iter().map(|k| (k.clone(), theta_key(a, k))).collect();
        let image: BTreeSet<&GeomKey> = map.values().collect();
        let injective = image.len() == map.len();
        let surjective = image.len() == geom.len() && image.iter().all(|k| geom.contains(*k));
        theta_bijective &= injective && surjective;
        sizes.push(term.len() + 1);
        geometric_sizes.push(geom.len() + 1);
        maps.push(map);
        terms.push(term);
    }
    for i in 0..n as usize {
        // the inclusion of terms is the identity on orbit keys, so the
        // square commutes iff the two routes agree key by key
        for key in &terms[i] {
            if !terms[i + 1].contains(key) {
                squares_commute = false;
                continue;
            }
            if maps[i][key] != maps[i + 1][key] {
                squares_commute = false;
            }
        }
    }
    let cone_sizes = sizes.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(ThetaLadderReport {
        n,
        sizes,
        geometric_sizes,
        cone_sizes,
        theta_bijective,
        squares_commute,
    })
}

/// A pointed map S → T: images of all elements, basepoint to basepoint.
#[derive(Clone, Debug)]
pub struct PointedMap {
    pub images: Vec<usize>,
}

impl PointedMap {
    pub fn new(images: Vec<usize>) -> PointedMap {
        assert_eq!(images[0], 0, "pointed maps preserve the basepoint");
        PointedMap { images }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaAuditReport {
    pub n: u32,
    pub x_size: usize,
    pub z_size: usize,
    /// Non-base counts of Sym^{n-i}X ∧ Sym^i Z for i = 0..n.
    pub cone_counts: Vec<usize>,
    pub unit_and_identity_ok: bool,
    pub tower_ok: bool,
    pub ladder_functorial: bool,
    pub passed: bool,
}

fn nb_sym(k: usize, n: usize) -> usize {
    // non-base count of Sym^n of a set with k non-base elements
    crate::etale::binomial((k + n).saturating_sub(1) as u64, n as u64) as usize
}

/// Audit the three structural properties on the split sequence
/// X → X ∨ Z → Z: unit and identity behaviour in degrees 0 and 1, the
/// tower with the prescribed cones, and functoriality of the ladder along
/// a morphism of split sequences.
pub fn lambda_audit(
    x: &PointedSet,
    z: &PointedSet,
    n: u32,
    morphism: Option<(&PointedSet, &PointedSet, &PointedMap, &PointedMap)>,
) -> Result<LambdaAuditReport, TowerError> {
    let f = Coprojection::new(x.clone(), z.clone());
    check_caps(&f.target(), n)?;

    // degree 0 is the unit (one non-base element), degree 1 the identity
    let unit_and_identity_ok = {
        let sym0 = smash_power_sym(x, 0)?;
        let sym1x = smash_power_sym(x, 1)?;
        let sym1z = smash_power_sym(z, 1)?;
        sym0.non_base() == 1 && sym1x.size() == x.size() && sym1z.size() == z.size()
    };

    // tower with cone i in bijection with non-base(Sym^{n-i}X ∧ Sym^i Z)
    let tower = tower_categoric(&f, n)?;
    let cone_counts: Vec<usize> = (0..=n as usize)
        .map(|i| nb_sym(x.non_base(), n as usize - i) * nb_sym(z.non_base(), i))
        .collect();
    let tower_ok = tower.term_sizes[0] == nb_sym(x.non_base(), n as usize) + 1
        && (1..=n as usize).all(|i| tower.cone_sizes[i - 1] == cone_counts[i])
        && explicit_cone_bijections(&f, n);

    // a morphism of split sequences induces a commuting ladder
    let ladder_functorial = match morphism {
        None => true,
        Some((x2, z2, phi_x, phi_z)) => ladder_square_check(x, z, x2, z2, phi_x, phi_z, n)?,
    };

    Ok(LambdaAuditReport {
        n,
        x_size: x.size(),
        z_size: z.size(),
        cone_counts,
        unit_and_identity_ok,
        tower_ok,
        ladder_functorial,
        passed: unit_and_identity_ok && tower_ok && ladder_functorial,
    })
}

/// The set difference L_i ∖ L_{i−1} must biject with non-base elements of
/// Sym^{n−i}X ∧ Sym^i Z, witnessed by the coordinate-multiset split.
fn explicit_cone_bijections(f: &Coprojection, n: u32) -> bool {
    let (a, b) = (f.a(), f.b());
    (1..=n).all(|i| {
        let prev = categoric_term(a, b, n, i - 1);
        let cur = categoric_term(a, b, n, i);
        let difference: Vec<&Vec<u16>> = cur.difference(&prev).collect();
        let expected: BTreeSet<GeomKey> = multisets_over(a, (n - i) as usize)
            .into_iter()
            .flat_map(|xs| {
                multisets_over(b, i as usize)
                    .into_iter()
                    .map(move |ys| ((n - i) as usize, xs.clone(), ys))
            })
            .collect();
        let image: BTreeSet<GeomKey> = difference.iter().map(|k| theta_key(a, k)).collect();
        image.len() == difference.len() && image == expected
    })
}

/// Apply a wedge-sum of pointed maps to an orbit key; collapse to `None`
/// (the basepoint) when any coordinate dies.
fn apply_wedge_map(
    key: &[u16],
    a: usize,
    phi_x: &PointedMap,
    phi_z: &PointedMap,
    a2: usize,
) -> Option<Vec<u16>> {
    let mut out = Vec::with_capacity(key.len());
    for &c in key {
        let img = if (c as usize) <= a {
            let v = phi_x.images[c as usize];
            if v == 0 {
                return None;
            }
            v as u16
        } else {
            let v = phi_z.images[c as usize - a];
            if v == 0 {
                return None;
            }
            v as u16 + a2 as u16
        };
        out.push(img);
    }
    out.sort_unstable();
    Some(out)
}

fn ladder_square_check(
    x: &PointedSet,
    z: &PointedSet,
    x2: &PointedSet,
    z2: &PointedSet,
    phi_x: &PointedMap,
    phi_z: &PointedMap,
    n: u32,
) -> Result<bool, TowerError> {
    assert_eq!(phi_x.images.len(), x.size());
    assert_eq!(phi_z.images.len(), z.size());
    assert!(phi_x.images.iter().all(|&v| v < x2.size()));
    assert!(phi_z.images.iter().all(|&v| v < z2.size()));
    let (a, b) = (x.non_base(), z.non_base());
    let (a2, b2) = (x2.non_base(), z2.non_base());
    check_caps(&Coprojection::new(x2.clone(), z2.clone()).target(), n)?;
    for i in 0..n {
        let term_lo = categoric_term(a, b, n, i);
        let term_hi = categoric_term(a, b, n, i + 1);
        let target_lo = categoric_term(a2, b2, n, i);
        let target_hi = categoric_term(a2, b2, n, i + 1);
        if !term_lo.iter().all(|k| term_hi.contains(k)) {
            return Ok(false);
        }
        for key in &term_lo {
            // both routes around the square are "apply the map, then
            // include"; they must land on the same key, inside the target
            let image = apply_wedge_map(key, a, phi_x, phi_z, a2);
            if let Some(img) = image {
                if !target_lo.contains(&img) || !target_hi.contains(&img) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// ---- permutation group machinery ----

pub type Perm = Vec<usize>;

pub fn perm_identity(deg: usize) -> Perm {
    (0..deg).collect()
}

/// (p ∘ q)(i) = p[q[i]].
pub fn perm_compose(p: &Perm, q: &Perm) -> Perm {
    q.iter().map(|&i| p[i]).collect()
}

/// A permutation group given by generators, with its elements enumerated
/// by closure.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
}

impl PermGroup {
    pub fn generated_by(degree: usize, generators: Vec<Perm>) -> PermGroup {
        for g in &generators {
            assert_eq!(g.len(), degree);
            let mut seen = vec![false; degree];
            for &i in g {
                assert!(i < degree && !seen[i], "not a permutation");
                seen[i] = true;
            }
        }
        let mut elements = vec![perm_identity(degree)];
        let mut set: BTreeSet<Perm> = elements.iter().cloned().collect();
        let mut frontier = elements.clone();
        while let Some(cur) = frontier.pop() {
            for g in &generators {
                let next = perm_compose(g, &cur);
                if set.insert(next.clone()) {
                    elements.push(next.clone());
                    frontier.push(next);
                }
            }
        }
        elements.sort();
        PermGroup {
            degree,
            generators,
            elements,
        }
    }

    pub fn symmetric(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let mut p = perm_identity(n);
            p.swap(i, i + 1);
            gens.push(p);
        }
        if gens.is_empty() {
            gens.push(perm_identity(n));
        }
        PermGroup::generated_by(n, gens)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self
                .elements
                .iter()
                .all(|e| other.elements.binary_search(e).is_ok())
    }

    /// Every subgroup, found by closing each subset of elements. Small
    /// groups only.
    pub fn subgroups(&self) -> Vec<PermGroup> {
        let n = self.order();
        assert!(n <= 8, "subset enumeration is for tiny groups");
        let mut seen: BTreeSet<Vec<Perm>> = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0..(1u32 << n) {
            let gens: Vec<Perm> = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| self.elements[i].clone())
                .collect();
            let sub = PermGroup::generated_by(self.degree, gens);
            if sub.is_subgroup_of(self) && seen.insert(sub.elements.clone()) {
                out.push(sub);
            }
        }
        out
    }
}

/// An action of `group` on {0, .., k−1}: one permutation per group
/// element, aligned with `group.elements`.
#[derive(Clone, Debug)]
pub struct GSet {
    pub group: PermGroup,
    pub size: usize,
    pub action: Vec<Perm>,
}

impl GSet {
    /// Build from images of the generators, verifying the relations by
    /// re-deriving every element's image along the Cayley graph.
    pub fn from_generator_images(
        group: &PermGroup,
        size: usize,
        images: &[Perm],
    ) -> Result<GSet, TowerError> {
        assert_eq!(images.len(), group.generators.len());
        for img in images {
            assert_eq!(img.len(), size);
        }
        let mut table: HashMap<Perm, Perm> = HashMap::new();
        table.insert(perm_identity(group.degree), perm_identity(size));
        let mut frontier = vec![perm_identity(group.degree)];
        while let Some(cur) = frontier.pop() {
            let cur_img = table[&cur].clone();
            for (g, img) in group.generators.iter().zip(images) {
                let next = perm_compose(g, &cur);
                let next_img = perm_compose(img, &cur_img);
                match table.get(&next) {
                    None => {
                        table.insert(next.clone(), next_img);
                        frontier.push(next);
                    }
                    Some(existing) => {
                        if *existing != next_img {
                            return Err(TowerError::NotAnAction);
                        }
                    }
                }
            }
        }
        let action = group.elements.iter().map(|e| table[e].clone()).collect();
        Ok(GSet {
            group: group.clone(),
            size,
            action,
        })
    }

    pub fn trivial(group: &PermGroup, size: usize) -> GSet {
        GSet {
            group: group.clone(),
            size,
            action: vec![perm_identity(size); group.order()],
        }
    }
}

fn orbit_labels(size: usize, perms: &[Perm]) -> Vec<usize> {
    let mut label = vec![usize::MAX; size];
    let mut next = 0;
    for start in 0..size {
        if label[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        label[start] = next;
        while let Some(s) = stack.pop() {
            for p in perms {
                let t = p[s];
                if label[t] == usize::MAX {
                    label[t] = next;
                    stack.push(t);
                }
            }
        }
        next += 1;
    }
    label
}

#[derive(Clone, Debug, Serialize)]
pub struct InducedQuotientReport {
    pub group_order: usize,
    pub subgroup_order: usize,
    pub set_size: usize,
    pub induced_size: usize,
    pub induced_orbits: usize,
    pub subgroup_orbits: usize,
    pub bijective: bool,
}

/// The induced G-set (G × S)/(g·h, s) ∼ (g, h·s) has the same orbit set as
/// the H-set S. Both orbit sets are computed and an explicit bijection is
/// constructed.
pub fn induced_quotient_check(
    g: &PermGroup,
    h: &PermGroup,
    s: &GSet,
) -> Result<InducedQuotientReport, TowerError> {
    if !h.is_subgroup_of(g) {
        return Err(TowerError::NotASubgroup(format!(
            "|H| = {}, |G| = {}",
            h.order(),
            g.order()
        )));
    }
    if g.order() > 24 || s.size > 8 {
        return Err(TowerError::CapExceeded(format!(
            "|G| = {}, |S| = {}",
            g.order(),
            s.size
        )));
    }
    assert_eq!(s.group.elements, h.elements, "S must be an H-set");
    let ng = g.order();
    if s.size == 0 {
        return Ok(InducedQuotientReport {
            group_order: ng,
            subgroup_order: h.order(),
            set_size: 0,
            induced_size: 0,
            induced_orbits: 0,
            subgroup_orbits: 0,
            bijective: true,
        });
    }
    let pair = |gi: usize, si: usize| gi * s.size + si;
    // glue (g∘h, s) ~ (g, h·s) for every h ∈ H
    let mut uf = UnionFind::new(ng * s.size);
    for (gi, ge) in g.elements.iter().enumerate() {
        for (hi, he) in h.elements.iter().enumerate() {
            let gh = perm_compose(ge, he);
            let ghi = g.elements.binary_search(&gh).expect("G is closed");
            for si in 0..s.size {
                uf.union(pair(ghi, si), pair(gi, s.action[hi][si]));
            }
        }
    }
    let (class_of, class_count) = uf.compress();
    // G acts on classes by left multiplication on the first component
    let g_perms: Vec<Perm> = g
        .elements
        .iter()
        .map(|ge| {
            let mut out = vec![usize::MAX; class_count];
            for (gi, g2) in g.elements.iter().enumerate() {
                let comp = perm_compose(ge, g2);
                let ci = g.elements.binary_search(&comp).expect("G is closed");
                for si in 0..s.size {
                    let from = class_of[pair(gi, si)];
                    let to = class_of[pair(ci, si)];
                    debug_assert!(
                        out[from] == usize::MAX || out[from] == to,
                        "left action must be well defined on classes"
                    );
                    out[from] = to;
                }
            }
            out
        })
        .collect();
    let induced_orbit_label = orbit_labels(class_count, &g_perms);
    let induced_orbits = induced_orbit_label.iter().copied().max().map_or(0, |m| m + 1);
    let s_orbit_label = orbit_labels(s.size, &s.action);
    let subgroup_orbits = s_orbit_label.iter().copied().max().map_or(0, |m| m + 1);
    // explicit bijection: the G-orbit of [(e, s)] ↔ the H-orbit of s
    let e_idx = g
        .elements
        .binary_search(&perm_identity(g.degree))
        .expect("identity present");
    let mut forward: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bijective = true;
    for si in 0..s.size {
        let g_orbit = induced_orbit_label[class_of[pair(e_idx, si)]];
        let h_orbit = s_orbit_label[si];
        match forward.get(&g_orbit) {
            None => {
                forward.insert(g_orbit, h_orbit);
            }
            Some(&existing) => {
                if existing != h_orbit {
                    bijective = false;
                }
            }
        }
    }
    let image: BTreeSet<usize> = forward.values().copied().collect();
    bijective &= forward.len() == induced_orbits
        && image.len() == subgroup_orbits
        && induced_orbits == subgroup_orbits;
    Ok(InducedQuotientReport {
        group_order: g.order(),
        subgroup_order: h.order(),
        set_size: s.size,
        induced_size: class_count,
        induced_orbits,
        subgroup_orbits,
        bijective,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    /// Returns (class index per element, number of classes).
    fn compress(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label: HashMap<usize, usize> = HashMap::new();
        let mut out = vec![0usize; n];
        for x in 0..n {
            let root = self.find(x);
            let next = label.len();
            out[x] = *label.entry(root).or_insert(next);
        }
        (out, label.len())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeWeightReport {
    pub n: u32,
    pub j: u32,
    pub quotient_size: usize,
    pub smash_size: usize,
    pub bijective: bool,
}

/// The wedge over weight-j binary words of smash products of X_0 and X_1,
/// quotiented by the simultaneous permutation of word positions and
/// factors, against Sym^{n−j}X_0 ∧ Sym^j X_1. Cardinalities and an
/// explicit bijection are checked.
pub fn wedge_weight_quotient_check(
    x0: &PointedSet,
    x1: &PointedSet,
    n: u32,
    j: u32,
) -> Result<WedgeWeightReport, TowerError> {
    if j > n {
        return Err(TowerError::IndexOutOfRange { i: j, n });
    }
    check_caps(x0, n)?;
    check_caps(x1, n)?;
    let (a0, a1) = (x0.non_base(), x1.non_base());
    // orbits: canonical multiset of (word bit, element) pairs
    let mut orbits: BTreeSet<Vec<(u8, u16)>> = BTreeSet::new();
    for w in binary_words(n as usize, j as usize) {
        // tuples with t_k a non-base element of X_{w_k}
        let sizes: Vec<usize> = w
            .iter()
            .map(|&bit| if bit == 0 { a0 } else { a1 })
            .collect();
        if sizes.iter().any(|&s| s == 0) {
            continue;
        }
        let mut tuple = vec![1u16; n as usize];
        'outer: loop {
            let mut key: Vec<(u8, u16)> = w.iter().copied().zip(tuple.iter().copied()).collect();
            key.sort_unstable();
            orbits.insert(key);
            for k in (0..n as usize).rev() {
                tuple[k] += 1;
                if (tuple[k] as usize) <= sizes[k] {
                    continue 'outer;
                }
                tuple[k] = 1;
            }
            break;
        }
    }
    // right-hand side: pairs of multisets
    let mut smash: BTreeSet<(Vec<u16>, Vec<u16>)> = BTreeSet::new();
    for xs in multisets_over(a0, (n - j) as usize) {
        for ys in multisets_over(a1, j as usize) {
            smash.insert((xs.clone(), ys));
        }
    }
    // explicit map: split each orbit key by word bit
    let mut image: BTreeSet<(Vec<u16>, Vec<u16>)> = BTreeSet::new();
    let mut injective = true;
    for key in &orbits {
        let xs: Vec<u16> = key
            .iter()
            .filter(|(b, _)| *b == 0)
            .map(|&(_, e)| e)
            .collect();
        let ys: Vec<u16> = key
            .iter()
            .filter(|(b, _)| *b == 1)
            .map(|&(_, e)| e)
            .collect();
        if !image.insert((xs, ys)) {
            injective = false;
        }
    }
    let bijective = injective && image == smash;
    Ok(WedgeWeightReport {
        n,
        j,
        quotient_size: orbits.len() + 1,
        smash_size: smash.len() + 1,
        bijective,
    })
}

fn binary_words(n: usize, j: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; n];
    fn rec(n: usize, j: usize, pos: usize, ones: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos == n {
            if ones == j {
                out.push(cur.clone());
            }
            return;
        }
        cur[pos] = 0;
        rec(n, j, pos + 1, ones, cur, out);
        if ones < j {
            cur[pos] = 1;
            rec(n, j, pos + 1, ones + 1, cur, out);
            cur[pos] = 0;
        }
    }
    rec(n, j, 0, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smash_sym_power_sizes() {
        let base = PointedSet::base_only();
        assert_eq!(smash_power_sym(&base, 3).unwrap().size(), 1);

        let one = PointedSet::new(&["a"]);
        assert_eq!(smash_power_sym(&one, 2).unwrap().size(), 2);

        // {*, a, b}, n = 2: brute-force orbit count of the 9 smash tuples
        // under the swap: base + {aa, ab, bb}
        let two = PointedSet::new(&["a", "b"]);
        let sym = smash_power_sym(&two, 2).unwrap();
        assert_eq!(sym.size(), 4);
    }

    #[test]
    fn box_objects_interpolate_the_smash_powers() {
        let x = PointedSet::new(&["a"]);
        let y = PointedSet::new(&["b"]);
        let f = Coprojection::new(x.clone(), y.clone());
        // i = 0 is X^∧n
        assert_eq!(box_object(&f, 2, 0).unwrap().size(), 2);
        // i = 1: tuples over {a, b} with at most one b
        assert_eq!(box_object(&f, 2, 1).unwrap().size(), 4);
        // i = n is the full smash power of the wedge
        assert_eq!(box_object(&f, 2, 2).unwrap().size(), 5);
        assert!(box_object(&f, 2, 3).is_err());
    }

    #[test]
    fn categoric_tower_named_cases() {
        let x = PointedSet::new(&["a"]);
        let y = PointedSet::new(&["b"]);
        let f = Coprojection::new(x, y);
        let t = tower_categoric(&f, 2).unwrap();
        assert_eq!(t.term_sizes, vec![2, 3, 4]);
        assert_eq!(t.cone_sizes, vec![1, 1]);

        // Y = {*}: the tower is constant
        let f2 = Coprojection::new(PointedSet::new(&["a", "b"]), PointedSet::base_only());
        let t2 = tower_categoric(&f2, 3).unwrap();
        assert!(t2.term_sizes.windows(2).all(|w| w[0] == w[1]));

        // X = {*}: stages below n collapse to the base; frozen after the
        // first verified run
        let y3 = PointedSet::new(&["u", "v"]);
        let f3 = Coprojection::new(PointedSet::base_only(), y3.clone());
        let t3 = tower_categoric(&f3, 2).unwrap();
        let sym2y = smash_power_sym(&y3, 2).unwrap();
        assert_eq!(t3.term_sizes, vec![1, 1, sym2y.size()]);
    }

    #[test]
    fn geometric_tower_matches_the_wedge_formula() {
        let x = PointedSet::new(&["a"]);
        let y = PointedSet::new(&["b"]);
        let f = Coprojection::new(x, y);
        let t = tower_geometric(&f, 2).unwrap();
        // i = 1: Sym²X ∧ Sym⁰Y ∨ Sym¹X ∧ Sym¹Y has 2 non-base elements
        assert_eq!(t.term_sizes, vec![2, 3, 4]);
    }

    #[test]
    fn theta_ladder_bijective_and_commuting() {
        let x = PointedSet::new(&["a"]);
        let y = PointedSet::new(&["b"]);
        let rep = theta_ladder(&Coprojection::new(x, y), 2).unwrap();
        assert!(rep.theta_bijective);
        assert!(rep.squares_commute);
        assert_eq!(rep.sizes, rep.geometric_sizes);

        let trivial = theta_ladder(
            &Coprojection::new(PointedSet::base_only(), PointedSet::base_only()),
            3,
        )
        .unwrap();
        assert!(trivial.theta_bijective && trivial.squares_commute);
        assert!(trivial.sizes.iter().all(|&s| s == 1));
    }

    #[test]
    fn audit_named_case() {
        // one non-base element each side, n = 2: cone counts (1, 1, 1)
        let x = PointedSet::new(&["a"]);
        let z = PointedSet::new(&["c"]);
        let rep = lambda_audit(&x, &z, 2, None).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.cone_counts, vec![1, 1, 1]);

        // n = 1 towers are trivially consistent
        let rep1 = lambda_audit(&x, &z, 1, None).unwrap();
        assert!(rep1.passed);
    }

    #[test]
    fn audit_with_an_explicit_morphism() {
        let x = PointedSet::new(&["a", "b"]);
        let z = PointedSet::new(&["c"]);
        let x2 = PointedSet::new(&["u"]);
        let z2 = PointedSet::new(&["v", "w"]);
        // a ↦ u, b ↦ *, c ↦ w
        let phi_x = PointedMap::new(vec![0, 1, 0]);
        let phi_z = PointedMap::new(vec![0, 2]);
        let rep = lambda_audit(&x, &z, 3, Some((&x2, &z2, &phi_x, &phi_z))).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn induced_quotient_named_cases() {
        // G = Σ2, H trivial, S a point
        let g = PermGroup::symmetric(2);
        let h = PermGroup::generated_by(2, vec![perm_identity(2)]);
        let s = GSet::trivial(&h, 1);
        let rep = induced_quotient_check(&g, &h, &s).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.induced_orbits, 1);
        assert_eq!(rep.induced_size, 2); // free induction of a point

        // G = Σ3, H = Σ2 (first two letters), S = {1, 2} with the swap
        let g3 = PermGroup::symmetric(3);
        let h2 = PermGroup::generated_by(3, vec![vec![1, 0, 2]]);
        let s = GSet::from_generator_images(&h2, 2, &[vec![1, 0]]).unwrap();
        let rep = induced_quotient_check(&g3, &h2, &s).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.induced_orbits, 1);
        assert_eq!(rep.subgroup_orbits, 1);

        // H = G: induction is the identity on orbit sets
        let s_full =
            GSet::from_generator_images(&g3, 3, &[vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        let rep = induced_quotient_check(&g3, &g3, &s_full).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.induced_orbits, rep.subgroup_orbits);

        // not a subgroup
        let c2_other = PermGroup::generated_by(3, vec![vec![0, 2, 1]]);
        let h_bad = PermGroup::generated_by(3, vec![vec![1, 0, 2]]);
        let s_bad = GSet::trivial(&h_bad, 1);
        assert!(induced_quotient_check(&c2_other, &h_bad, &s_bad).is_err());
    }

    #[test]
    fn action_relations_are_verified() {
        // the swap cannot act as a 3-cycle on 3 points (order mismatch)
        let h = PermGroup::generated_by(2, vec![vec![1, 0]]);
        assert!(matches!(
            GSet::from_generator_images(&h, 3, &[vec![1, 2, 0]]),
            Err(TowerError::NotAnAction)
        ));
    }

    #[test]
    fn wedge_weight_named_cases() {
        let x0 = PointedSet::new(&["a", "b"]);
        let x1 = PointedSet::new(&["c"]);
        // j = 0: Sym^n X0 on both sides
        let rep = wedge_weight_quotient_check(&x0, &x1, 3, 0).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.quotient_size, 5); // base + multisets of size 3 over 2
        // j = n: Sym^n X1
        let rep = wedge_weight_quotient_check(&x0, &x1, 3, 3).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.quotient_size, 2);
        // the single-element case from brute force over 3 words
        let xa = PointedSet::new(&["a"]);
        let rep = wedge_weight_quotient_check(&xa, &xa, 3, 1).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.quotient_size, 2);
        assert_eq!(rep.smash_size, 2);
    }

    #[test]
    fn subgroup_enumeration_of_sym3() {
        let g = PermGroup::symmetric(3);
        let subs = g.subgroups();
        // 1 trivial + 3 transposition C2 + 1 A3 + Σ3
        assert_eq!(subs.len(), 6);
        let mut orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn set_level_kunneth_rule() {
        // |Sym^n(X ∨ Y)| equals the wedge-of-smashes count, directly
        let x = PointedSet::new(&["a", "b"]);
        let y = PointedSet::new(&["c", "d", "e"]);
        let f = Coprojection::new(x.clone(), y.clone());
        for n in 0..=4u32 {
            let lhs = smash_power_sym(&f.target(), n).unwrap().size();
            let rhs = 1 + (0..=n)
                .map(|i| {
                    (smash_power_sym(&x, i).unwrap().size() - 1)
                        * (smash_power_sym(&y, n - i).unwrap().size() - 1)
                })
                .sum::<usize>();
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn towers_agree_and_ladders_hold(a in 0usize..=4, b in 0usize..=4, n in 1u32..=4) {
            let f = Coprojection::new(PointedSet::of_size(a), PointedSet::of_size(b));
            let cat = tower_categoric(&f, n).unwrap();
            let geo = tower_geometric(&f, n).unwrap();
            prop_assert_eq!(&cat.term_sizes, &geo.term_sizes);
            prop_assert!(cat.term_sizes.windows(2).all(|w| w[0] <= w[1]));
            let ladder = theta_ladder(&f, n).unwrap();
            prop_assert!(ladder.theta_bijective && ladder.squares_commute);
        }

        #[test]
        fn audits_pass_on_random_splits(x in 0usize..=4, z in 0usize..=4, n in 1u32..=4) {
            let xs = PointedSet::of_size(x);
            let zs = PointedSet::of_size(z);
            let rep = lambda_audit(&xs, &zs, n, None).unwrap();
            prop_assert!(rep.passed);
        }
    }
}
