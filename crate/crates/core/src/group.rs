//! Group abstraction, finite groups by table, the ambient group `G` and the
//! over-`G` structure `γ: π → G`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pc::{PcGroup, PcPresentation};
use crate::subgroup::Ips;
use crate::words::{FpPresentation, FreeWord};

/// A group with computable normal forms.
pub trait Group {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn pow(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let mut base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `by^-1 a by`
    fn conj(&self, a: &Self::Elem, by: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(&self.inv(by), a), by)
    }

    /// `a^-1 b^-1 a b`
    fn comm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    /// Substitutes generator images into `w` and multiplies out.
    fn eval_word(&self, w: &FreeWord, images: &[Self::Elem]) -> Self::Elem {
        let mut acc = self.identity();
        for &(g, e) in w.syllables() {
            acc = self.mul(&acc, &self.pow(&images[g], e));
        }
        acc
    }
}

impl<T: Group> Group for Arc<T> {
    type Elem = T::Elem;
    fn identity(&self) -> T::Elem {
        (**self).identity()
    }
    fn mul(&self, a: &T::Elem, b: &T::Elem) -> T::Elem {
        (**self).mul(a, b)
    }
    fn inv(&self, a: &T::Elem) -> T::Elem {
        (**self).inv(a)
    }
    fn is_identity(&self, a: &T::Elem) -> bool {
        (**self).is_identity(a)
    }
    fn pow(&self, a: &T::Elem, e: i64) -> T::Elem {
        (**self).pow(a, e)
    }
}

/// A finite group given by a validated multiplication table on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            let distinct: BTreeSet<usize> = row.iter().copied().collect();
            if distinct.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidTable(format!("row {i} is not a permutation of 0..{n}")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, inverse, identity })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            table: vec![vec![0]],
            inverse: vec![0],
            identity: 0,
        }
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Ok(FiniteGroup {
            table,
            inverse: (0..n).map(|a| (n - a) % n).collect(),
            identity: 0,
        })
    }

    /// The group generated by permutations of `0..degree`; element 0 is the identity.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<(Self, Vec<usize>)> {
        for p in gens {
            let set: BTreeSet<usize> = p.iter().copied().collect();
            if p.len() != degree || set.len() != degree || p.iter().any(|&x| x >= degree) {
                return Err(Error::InvalidTable(format!("{p:?} is not a permutation of 0..{degree}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let compose = |p: &Vec<usize>, q: &Vec<usize>| -> Vec<usize> { (0..degree).map(|i| q[p[i]]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let next = compose(&elems[i], g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(next);
                }
            }
        }
        let n = elems.len();
        let table = (0..n)
            .map(|a| (0..n).map(|b| index[&compose(&elems[a], &elems[b])]).collect())
            .collect();
        let images = gens.iter().map(|g| index[g]).collect();
        Ok((FiniteGroup::from_table(table)?, images))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Elements reachable from the identity by right multiplication with `gens`.
    pub fn closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.table[x][g];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

impl Group for FiniteGroup {
    type Elem = usize;
    fn identity(&self) -> usize {
        self.identity
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }
    fn inv(&self, a: &usize) -> usize {
        self.inverse[*a]
    }
}

/// How a finite ambient group was specified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiniteKind {
    Trivial,
    Cyclic(usize),
    Table,
    Permutations { degree: usize },
}

/// The ambient group `G`.
#[derive(Clone, Debug)]
pub enum AmbientGroup {
    Finite { kind: FiniteKind, group: FiniteGroup },
    Pc(PcGroup),
}

/// Element of an [`AmbientGroup`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GElem {
    Fin(usize),
    Pc(Vec<i64>),
}

impl GElem {
    pub fn index(&self) -> usize {
        match self {
            GElem::Fin(i) => *i,
            GElem::Pc(_) => panic!("polycyclic element has no table index"),
        }
    }
}

impl AmbientGroup {
    pub fn trivial() -> Self {
        AmbientGroup::Finite {
            kind: FiniteKind::Trivial,
            group: FiniteGroup::trivial(),
        }
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Ok(AmbientGroup::Finite {
            kind: if n == 1 { FiniteKind::Trivial } else { FiniteKind::Cyclic(n) },
            group: FiniteGroup::cyclic(n)?,
        })
    }

    pub fn table(table: Vec<Vec<usize>>) -> Result<Self> {
        Ok(AmbientGroup::Finite {
            kind: FiniteKind::Table,
            group: FiniteGroup::from_table(table)?,
        })
    }

    pub fn pc(p: PcPresentation) -> Result<Self> {
        let g = PcGroup::new(p)?;
        g.check_consistency()?;
        Ok(AmbientGroup::Pc(g))
    }

    pub fn kind_name(&self) -> String {
        match self {
            AmbientGroup::Finite { kind, group } => match kind {
                FiniteKind::Trivial => "trivial".into(),
                FiniteKind::Cyclic(n) => format!("cyclic:{n}"),
                FiniteKind::Table => format!("table:{}", group.order()),
                FiniteKind::Permutations { degree } => format!("perm:{degree}:{}", group.order()),
            },
            AmbientGroup::Pc(p) => format!("pc:{}", p.presentation().len()),
        }
    }

    pub fn finite(&self) -> Option<&FiniteGroup> {
        match self {
            AmbientGroup::Finite { group, .. } => Some(group),
            AmbientGroup::Pc(_) => None,
        }
    }

    pub fn require_finite(&self, op: &'static str) -> Result<&FiniteGroup> {
        self.finite().ok_or_else(|| Error::UnsupportedAmbient {
            op,
            kind: self.kind_name(),
        })
    }

    pub fn order(&self) -> Option<usize> {
        self.finite().map(FiniteGroup::order)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Some(1)
    }

    /// All elements, identity first (finite kinds only).
    pub fn elements(&self) -> Option<Vec<GElem>> {
        self.finite().map(|g| {
            let mut v = vec![GElem::Fin(g.identity_index())];
            v.extend((0..g.order()).filter(|&i| i != g.identity_index()).map(GElem::Fin));
            v
        })
    }

    /// Whether `gens` generate the whole group.
    pub fn generated_by(&self, gens: &[GElem]) -> bool {
        match self {
            AmbientGroup::Finite { group, .. } => {
                let idx: Vec<usize> = gens.iter().map(GElem::index).collect();
                group.closure(&idx).len() == group.order()
            }
            AmbientGroup::Pc(p) => {
                let vs: Vec<Vec<i64>> = gens
                    .iter()
                    .map(|g| match g {
                        GElem::Pc(v) => v.clone(),
                        GElem::Fin(_) => p.identity(),
                    })
                    .collect();
                Ips::generated(p, &vs).is_whole()
            }
        }
    }
}

impl Group for AmbientGroup {
    type Elem = GElem;
    fn identity(&self) -> GElem {
        match self {
            AmbientGroup::Finite { group, .. } => GElem::Fin(group.identity_index()),
            AmbientGroup::Pc(p) => GElem::Pc(p.identity()),
        }
    }
    fn mul(&self, a: &GElem, b: &GElem) -> GElem {
        match (self, a, b) {
            (AmbientGroup::Finite { group, .. }, GElem::Fin(x), GElem::Fin(y)) => GElem::Fin(group.mul(x, y)),
            (AmbientGroup::Pc(p), GElem::Pc(x), GElem::Pc(y)) => GElem::Pc(p.mul(x, y)),
            _ => panic!("element kind does not match ambient group"),
        }
    }
    fn inv(&self, a: &GElem) -> GElem {
        match (self, a) {
            (AmbientGroup::Finite { group, .. }, GElem::Fin(x)) => GElem::Fin(group.inv(x)),
            (AmbientGroup::Pc(p), GElem::Pc(x)) => GElem::Pc(p.inv(x)),
            _ => panic!("element kind does not match ambient group"),
        }
    }
}

/// An epimorphism `γ: π → G`.
#[derive(Clone, Debug)]
pub struct OverG {
    pub pi: FpPresentation,
    pub g: Arc<AmbientGroup>,
    pub images: Vec<GElem>,
}

impl OverG {
    pub fn new(pi: FpPresentation, g: Arc<AmbientGroup>, images: Vec<GElem>) -> Result<Self> {
        if images.len() != pi.ngens() {
            return Err(Error::Internal(format!(
                "gamma needs {} images, got {}",
                pi.ngens(),
                images.len()
            )));
        }
        for (i, r) in pi.relators.iter().enumerate() {
            if !g.is_identity(&g.eval_word(r, &images)) {
                return Err(Error::NotAHomomorphism(format!("relator {i} does not map to the identity of G")));
            }
        }
        if !g.generated_by(&images) {
            return Err(Error::NotSurjective);
        }
        Ok(OverG { pi, g, images })
    }

    /// `π` over the trivial group.
    pub fn trivial(pi: FpPresentation) -> Self {
        let images = vec![GElem::Fin(0); pi.ngens()];
        OverG {
            pi,
            g: Arc::new(AmbientGroup::trivial()),
            images,
        }
    }

    pub fn gamma(&self, w: &FreeWord) -> GElem {
        self.g.eval_word(w, &self.images)
    }

    /// `γ(w) = 1`.
    pub fn kernel_membership(&self, w: &FreeWord) -> bool {
        self.g.is_identity(&self.gamma(w))
    }

    pub fn same_ambient(&self, other: &OverG) -> bool {
        Arc::ptr_eq(&self.g, &other.g) || same_group(&self.g, &other.g)
    }
}

fn same_group(a: &AmbientGroup, b: &AmbientGroup) -> bool {
    match (a, b) {
        (AmbientGroup::Finite { group: x, .. }, AmbientGroup::Finite { group: y, .. }) => x == y,
        (AmbientGroup::Pc(x), AmbientGroup::Pc(y)) => x.presentation() == y.presentation(),
        _ => false,
    }
}

/// Checks `γ_B ∘ f = γ_A` generator by generator, `f` given by images of
/// `A`'s generators as words in `B`'s generators.
pub fn verify_over_g(images: &[FreeWord], a: &OverG, b: &OverG) -> Result<bool> {
    if !a.same_ambient(b) {
        return Err(Error::AmbientMismatch);
    }
    if images.len() != a.pi.ngens() {
        return Err(Error::Internal("image count does not match domain".into()));
    }
    for w in images {
        w.check_range(b.pi.ngens())?;
    }
    Ok(images.iter().zip(&a.images).all(|(w, ga)| b.gamma(w) == *ga))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FpPresentation {
        FpPresentation::free(["x", "y"])
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).is_ok());
        // a quasigroup that is not associative
        let bad = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        assert!(FiniteGroup::from_table(bad).is_err());
    }

    #[test]
    fn permutation_closure() {
        let (s3, imgs) = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(imgs.len(), 2);
    }

    #[test]
    fn apply_parity_and_exponent_sum() {
        let z2 = Arc::new(AmbientGroup::cyclic(2).unwrap());
        let g = OverG::new(f2(), z2, vec![GElem::Fin(1), GElem::Fin(0)]).unwrap();
        let xyx = FreeWord::from_syllables([(0, 1), (1, 1), (0, 1)]);
        assert_eq!(g.gamma(&xyx), GElem::Fin(0));
        assert_eq!(g.gamma(&FreeWord::from_syllables([(0, 1), (1, 1)])), GElem::Fin(1));
        let z4 = Arc::new(AmbientGroup::cyclic(4).unwrap());
        let g4 = OverG::new(f2(), z4, vec![GElem::Fin(1), GElem::Fin(2)]).unwrap();
        assert_eq!(g4.gamma(&FreeWord::from_syllables([(0, 1), (1, 1)])), GElem::Fin(3));
    }

    #[test]
    fn surjectivity_enforced() {
        let z4 = Arc::new(AmbientGroup::cyclic(4).unwrap());
        let r = OverG::new(f2(), z4, vec![GElem::Fin(2), GElem::Fin(0)]);
        assert!(matches!(r, Err(Error::NotSurjective)));
    }

    #[test]
    fn over_g_checks() {
        let z2 = Arc::new(AmbientGroup::cyclic(2).unwrap());
        let p = FpPresentation::free(["x"]);
        let g = OverG::new(p, z2, vec![GElem::Fin(1)]).unwrap();
        assert!(verify_over_g(&[FreeWord::generator(0)], &g, &g).unwrap());
        assert!(!verify_over_g(&[FreeWord::power_of(0, 2)], &g, &g).unwrap());
        let other = OverG::trivial(FpPresentation::free(["x"]));
        assert_eq!(
            verify_over_g(&[FreeWord::generator(0)], &g, &other),
            Err(Error::AmbientMismatch)
        );
    }
}
