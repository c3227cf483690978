//! Twisted homology with `Z[G]` coefficients from Fox calculus, the
//! Reidemeister–Schreier oracle for it, and `H_2` of pc groups from tails.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coset::kernel_presentation;
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, GElem, Group, OverG};
use crate::intmat::{abelian_invariants, hnf, left_kernel, AbelianInvariants, Lattice, Mat, Row};
use crate::nq::{Covering, TailPolicy};
use crate::pc::{PcGroup, PcPresentation};
use crate::relquo::{is_isomorphism_over_g, IsoReport, QuotientHom, RelativeQuotient};
use crate::words::FreeWord;

/// Element of `Z[F]`, keyed by reduced word.
pub type FreeGroupRing = BTreeMap<FreeWord, i64>;

fn add_term<K: Ord>(m: &mut BTreeMap<K, i64>, k: K, c: i64) {
    let e = m.entry(k).or_insert(0);
    *e += c;
    m.retain(|_, v| *v != 0);
}

/// Left Fox derivative `∂w/∂x`.
pub fn fox_derivative(w: &FreeWord, x: usize) -> FreeGroupRing {
    let mut out = FreeGroupRing::new();
    let mut prefix = FreeWord::identity();
    for (g, s) in w.letters() {
        let letter = FreeWord::power_of(g, s);
        if g == x {
            if s > 0 {
                add_term(&mut out, prefix.clone(), 1);
            } else {
                add_term(&mut out, prefix.mul(&letter), -1);
            }
        }
        prefix = prefix.mul(&letter);
    }
    out
}

/// Finite formal sum over `G`, sorted, without zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupRingElement {
    terms: Vec<(GElem, i64)>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GElem, i64)>) -> Self {
        let mut m = BTreeMap::new();
        for (g, c) in terms {
            *m.entry(g).or_insert(0) += c;
        }
        GroupRingElement {
            terms: m.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn single(g: GElem, c: i64) -> Self {
        Self::from_terms([(g, c)])
    }

    pub fn terms(&self) -> &[(GElem, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn augmentation(&self) -> i64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&o.terms).cloned())
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, c)| (g.clone(), -c)))
    }

    pub fn mul(&self, o: &Self, g: &AmbientGroup) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .flat_map(|(a, c)| o.terms.iter().map(move |(b, d)| (g.mul(a, b), c * d))),
        )
    }

    /// Pushes an element of `Z[F]` through `γ`.
    pub fn push(f: &FreeGroupRing, over: &OverG) -> Self {
        Self::from_terms(f.iter().map(|(w, c)| (over.gamma(w), *c)))
    }

    /// Matrix of right multiplication on `Z[G] = Z^{|G|}` (row vectors).
    pub fn regular_matrix(&self, g: &AmbientGroup) -> Result<Vec<Vec<i64>>> {
        let fin = g.require_finite("regular_representation")?;
        let n = fin.order();
        let mut m = vec![vec![0i64; n]; n];
        for (h, c) in &self.terms {
            for (a, row) in m.iter_mut().enumerate() {
                row[fin.table()[a][h.index()]] += c;
            }
        }
        Ok(m)
    }
}

/// `d2` (relators × generators) and `d1` (one entry per generator).
#[derive(Clone, Debug, Serialize)]
pub struct ChainComplexZG {
    pub d2: Vec<Vec<GroupRingElement>>,
    pub d1: Vec<GroupRingElement>,
}

pub fn fox_jacobian(over: &OverG) -> Result<ChainComplexZG> {
    let r = over.pi.ngens();
    let id = over.g.identity();
    let d1: Vec<GroupRingElement> = over
        .images
        .iter()
        .map(|g| GroupRingElement::from_terms([(g.clone(), 1), (id.clone(), -1)]))
        .collect();
    let d2: Vec<Vec<GroupRingElement>> = over
        .pi
        .relators
        .iter()
        .map(|rel| (0..r).map(|x| GroupRingElement::push(&fox_derivative(rel, x), over)).collect())
        .collect();
    for (i, row) in d2.iter().enumerate() {
        let mut acc = GroupRingElement::zero();
        for (a, b) in row.iter().zip(&d1) {
            acc = acc.add(&a.mul(b, &over.g));
        }
        if !acc.is_zero() {
            return Err(Error::Internal(format!("d2·d1 ≠ 0 on relator {i}")));
        }
    }
    Ok(ChainComplexZG { d2, d1 })
}

fn expand(rows: &[Vec<GroupRingElement>], g: &AmbientGroup, ncols: usize) -> Result<Mat> {
    let m = g.require_finite("h1_twisted")?.order();
    let mut out = Vec::new();
    for row in rows {
        let blocks = row.iter().map(|e| e.regular_matrix(g)).collect::<Result<Vec<_>>>()?;
        for a in 0..m {
            let mut r: Row = Vec::with_capacity(ncols * m);
            for b in &blocks {
                r.extend(b[a].iter().map(|&v| BigInt::from(v)));
            }
            out.push(r);
        }
    }
    Ok(out)
}

fn unit(n: usize, i: usize) -> Row {
    let mut e = vec![BigInt::zero(); n];
    e[i] = BigInt::one();
    e
}

/// `H_1(π; Z[G])` as `ker d1 / im d2` over the integers, keeping the cycle
/// basis so maps and the `G`-action can be evaluated.
#[derive(Clone, Debug)]
pub struct TwistedH1 {
    pub over: OverG,
    pub invariants: AbelianInvariants,
    cycles: Mat,
    solver: Lattice,
    boundaries: Mat,
}

impl TwistedH1 {
    pub fn compute(over: &OverG) -> Result<Self> {
        let cx = fox_jacobian(over)?;
        let m = over.g.require_finite("h1_twisted")?.order();
        let r = over.pi.ngens();
        let d1 = expand(&cx.d1.iter().map(|e| vec![e.clone()]).collect::<Vec<_>>(), &over.g, 1)?;
        let d2 = expand(&cx.d2, &over.g, r)?;
        let cycles = left_kernel(&d1, m);
        let mut solver = Lattice::with_tracking(m * r, cycles.len());
        for row in &cycles {
            if solver.insert(row.clone()).is_some() {
                return Err(Error::Internal("dependent cycle basis".into()));
            }
        }
        let mut h = TwistedH1 {
            over: over.clone(),
            invariants: AbelianInvariants::trivial(),
            cycles,
            solver,
            boundaries: Vec::new(),
        };
        h.boundaries = d2.iter().map(|row| h.coords(row)).collect::<Result<Mat>>()?;
        h.invariants = abelian_invariants(&h.boundaries, h.rank())?;
        Ok(h)
    }

    /// Rank of the cycle group.
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    fn coords(&self, chain: &[BigInt]) -> Result<Row> {
        self.solver
            .solve(chain)
            .ok_or_else(|| Error::Internal("chain is not a cycle".into()))
    }

    /// Coinvariants `H_1 / (g − 1)H_1` for every `g ≠ 1` in `G`.
    pub fn action_fingerprint(&self) -> Result<Vec<(GElem, AbelianInvariants)>> {
        let fin = self.over.g.require_finite("action_fingerprint")?;
        let m = fin.order();
        let mut out = Vec::new();
        for g in self.over.g.elements().unwrap_or_default() {
            if self.over.g.is_identity(&g) {
                continue;
            }
            let mut rows = self.boundaries.clone();
            for (i, k) in self.cycles.iter().enumerate() {
                // left multiplication by g inside each Z[G] block
                let mut moved = vec![BigInt::zero(); k.len()];
                for (pos, v) in k.iter().enumerate() {
                    let (blk, h) = (pos / m, pos % m);
                    moved[blk * m + fin.table()[g.index()][h]] = v.clone();
                }
                let mut c = self.coords(&moved)?;
                c[i] -= BigInt::one();
                rows.push(c);
            }
            out.push((g, abelian_invariants(&rows, self.rank())?));
        }
        Ok(out)
    }
}

pub fn h1_twisted(over: &OverG) -> Result<AbelianInvariants> {
    Ok(TwistedH1::compute(over)?.invariants)
}

/// Abelianization of the Reidemeister–Schreier presentation of `Ker γ`.
pub fn h1_kernel_via_rs(over: &OverG) -> Result<AbelianInvariants> {
    let kp = kernel_presentation(over)?;
    let n = kp.rank();
    let rows: Mat = kp
        .presentation
        .relators
        .iter()
        .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
        .collect();
    abelian_invariants(&rows, n)
}

/// Comparison of two twisted `H_1` modules without a map between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FingerprintReport {
    /// abelian invariants and coinvariants agree; a fingerprint, not a module isomorphism
    pub fingerprint_equal: bool,
    pub source: AbelianInvariants,
    pub target: AbelianInvariants,
    pub source_actions: Vec<(GElem, AbelianInvariants)>,
    pub target_actions: Vec<(GElem, AbelianInvariants)>,
}

pub fn h1_fingerprint_compare(a: &TwistedH1, b: &TwistedH1) -> Result<FingerprintReport> {
    let sa = a.action_fingerprint()?;
    let ta = b.action_fingerprint()?;
    let same_g = a.over.same_ambient(&b.over);
    Ok(FingerprintReport {
        fingerprint_equal: same_g && a.invariants == b.invariants && sa == ta,
        source: a.invariants.clone(),
        target: b.invariants.clone(),
        source_actions: sa,
        target_actions: ta,
    })
}

/// The map on twisted `H_1` induced by a homomorphism over `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1MapReport {
    pub surjective: bool,
    /// surjective with equal invariants; finitely generated abelian groups are Hopfian
    pub isomorphism: bool,
}

/// `images[x]` is a word in the generators of `b.over.pi`.
pub fn h1_induced_map(a: &TwistedH1, b: &TwistedH1, images: &[FreeWord]) -> Result<H1MapReport> {
    if !a.over.same_ambient(&b.over) {
        return Err(Error::AmbientMismatch);
    }
    if images.len() != a.over.pi.ngens() {
        return Err(Error::Internal("one image per generator required".into()));
    }
    for (x, w) in images.iter().enumerate() {
        if b.over.gamma(w) != a.over.images[x] {
            return Err(Error::NotAHomomorphism(format!("generator {x} is not mapped over G")));
        }
    }
    let g = &b.over.g;
    let m = g.require_finite("h1_induced_map")?.order();
    let rb = b.over.pi.ngens();
    // chain map on C_1: e_x ↦ Σ_y γ(∂f(x)/∂y) e_y
    let rows: Vec<Vec<GroupRingElement>> = images
        .iter()
        .map(|w| (0..rb).map(|y| GroupRingElement::push(&fox_derivative(w, y), &b.over)).collect())
        .collect();
    let f = expand(&rows, g, rb)?;
    let mut lat = Lattice::new(b.rank());
    for r in &b.boundaries {
        lat.insert(r.clone());
    }
    for k in &a.cycles {
        let mut img = vec![BigInt::zero(); m * rb];
        for (i, ki) in k.iter().enumerate() {
            if ki.is_zero() {
                continue;
            }
            for (j, v) in f[i].iter().enumerate() {
                img[j] += ki * v;
            }
        }
        lat.insert(b.coords(&img)?);
    }
    let surjective = b.rank() == 0 || lat.is_full();
    Ok(H1MapReport {
        surjective,
        isomorphism: surjective && a.invariants == b.invariants,
    })
}

/// `H_2` of the group of a consistent pc presentation: relations of the
/// Schur covering that die in the abelianization of the free group, modulo
/// consistency relations.
pub fn h2_pc_group(p: &PcPresentation) -> Result<AbelianInvariants> {
    let cov = Covering::build(p, TailPolicy::All, 0)?;
    let phi = tail_abelianization(&cov);
    let ker = left_kernel(&phi, p.len());
    let mut solver = Lattice::with_tracking(cov.tails, ker.len());
    for k in &ker {
        solver.insert(k.clone());
    }
    let rel = cov
        .relations
        .iter()
        .map(|r| solver.solve(r).ok_or_else(|| Error::Internal("consistency relation outside the kernel".into())))
        .collect::<Result<Mat>>()?;
    abelian_invariants(&rel, ker.len())
}

/// Raw tail ↦ exponent sum of its relator in the free group on pc generators.
fn tail_abelianization(cov: &Covering) -> Mat {
    let p = &cov.base;
    let n = p.len();
    let mut phi = vec![vec![BigInt::zero(); n]; cov.tails];
    for i in 0..n {
        if let Some(t) = cov.power_tail[i] {
            phi[t][i] += BigInt::from(p.orders[i]);
            if let Some(w) = &p.powers[i] {
                for (k, &e) in w.iter().enumerate() {
                    phi[t][k] -= BigInt::from(e);
                }
            }
        }
        for j in i + 1..n {
            if let Some(t) = cov.conj_tail[i][j] {
                phi[t][j] += BigInt::one();
                let w = p.conj[i][j].clone().unwrap_or_else(|| {
                    let mut v = vec![0; n];
                    v[j] = 1;
                    v
                });
                for (k, &e) in w.iter().enumerate() {
                    phi[t][k] -= BigInt::from(e);
                }
            }
        }
    }
    phi
}

/// Source of an `H_2` comparison.
#[derive(Clone, Debug)]
pub enum H2Source {
    /// Images in the target of the pc generators of a pc source.
    Pc { source: PcPresentation, images: Vec<Vec<i64>> },
    /// The caller asserts `H_2` of the source vanishes.
    DeclaredTrivial { provenance: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2CompareReport {
    pub equal: bool,
    /// route used for each source: "pc" or "declared-trivial: ..."
    pub routes: [String; 2],
    pub target: AbelianInvariants,
}

/// Image of `H_2(source)` in the tail group of the target's Schur covering.
fn h2_image(src: &H2Source, target: &PcPresentation, cov: &Covering) -> Result<(Mat, String)> {
    let (source, images) = match src {
        H2Source::DeclaredTrivial { provenance } => return Ok((Vec::new(), format!("declared-trivial: {provenance}"))),
        H2Source::Pc { source, images } => (source, images),
    };
    let sg = PcGroup::new(source.clone())?;
    sg.check_consistency()?;
    if images.len() != source.len() || images.iter().any(|v| v.len() != target.len()) {
        return Err(Error::Internal("image vectors do not match the presentations".into()));
    }
    let e = &cov.group;
    let lifts: Vec<Vec<i64>> = images.iter().map(|v| cov.element(v, &vec![0; cov.a_orders.len()])).collect();
    let eval = |w: &[i64]| -> Vec<i64> {
        let mut acc = e.identity();
        for (k, &x) in w.iter().enumerate() {
            if x != 0 {
                acc = e.mul(&acc, &e.pow(&lifts[k], x));
            }
        }
        acc
    };
    let scov = Covering::build(source, TailPolicy::All, 0)?;
    let n = source.len();
    // a-part of each source relation evaluated in the target covering
    let mut rel_image: Vec<Row> = vec![Vec::new(); scov.tails];
    let mut record = |t: usize, rho: Vec<i64>| -> Result<()> {
        if cov.q_part(&rho).iter().any(|&x| x != 0) {
            return Err(Error::NotAHomomorphism("a source relation does not hold in the target".into()));
        }
        rel_image[t] = cov.a_part(&rho).iter().map(|&x| BigInt::from(x)).collect();
        Ok(())
    };
    for i in 0..n {
        if let Some(t) = scov.power_tail[i] {
            let w = source.powers[i].clone().unwrap_or_else(|| vec![0; n]);
            let rho = e.mul(&e.inv(&eval(&w)), &e.pow(&lifts[i], source.orders[i]));
            record(t, rho)?;
        }
        for j in i + 1..n {
            if let Some(t) = scov.conj_tail[i][j] {
                let w = source.conj[i][j].clone().unwrap_or_else(|| {
                    let mut v = vec![0; n];
                    v[j] = 1;
                    v
                });
                let rho = e.mul(&e.inv(&eval(&w)), &e.conj(&lifts[j], &lifts[i]));
                record(t, rho)?;
            }
        }
    }
    let phi = tail_abelianization(&scov);
    let ker = left_kernel(&phi, n);
    let a_len = cov.a_orders.len();
    let mut out = Vec::new();
    for k in ker {
        let mut v = vec![BigInt::zero(); a_len];
        for (t, c) in k.iter().enumerate() {
            for (s, x) in rel_image[t].iter().enumerate() {
                v[s] += c * x;
            }
        }
        out.push(v);
    }
    Ok((out, "pc".to_string()))
}

pub fn h2_image_compare(a: &H2Source, b: &H2Source, target: &PcPresentation) -> Result<H2CompareReport> {
    let cov = Covering::build(target, TailPolicy::All, 0)?;
    let (ia, ra) = h2_image(a, target, &cov)?;
    let (ib, rb) = h2_image(b, target, &cov)?;
    let a_len = cov.a_orders.len();
    let torsion: Mat = cov
        .a_orders
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(j, &m)| {
            let mut r = unit(a_len, j);
            r[j] = BigInt::from(m);
            r
        })
        .collect();
    let span = |rows: &Mat| {
        let mut all = rows.clone();
        all.extend(torsion.iter().cloned());
        hnf(&all, a_len)
    };
    Ok(H2CompareReport {
        equal: span(&ia) == span(&ib),
        routes: [ra, rb],
        target: h2_pc_group(target)?,
    })
}

/// Hypotheses for the `H_2` side of a Stallings-type comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum H2Route {
    /// Both `H_2` groups are declared to vanish, with the justification.
    DeclaredTrivial(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct StallingsReport {
    pub h1_fingerprint: FingerprintReport,
    pub h1_map: H1MapReport,
    pub h2_route: H2Route,
    /// `(level, report)` for each requested level
    pub quotients: Vec<(usize, IsoReport)>,
    pub pass: bool,
}

/// Checks that `f: A → B` over `G` induces isomorphisms `A/Γ_nγ ≅ B/Γ_nγ`:
/// the `H_1` map is an isomorphism, the `H_2` hypothesis is recorded, and the
/// quotient maps are verified directly.
pub fn stallings_check(
    a: &OverG,
    b: &OverG,
    images: &[FreeWord],
    h2: H2Route,
    levels: &[usize],
) -> Result<StallingsReport> {
    let ha = TwistedH1::compute(a)?;
    let hb = TwistedH1::compute(b)?;
    let fp = h1_fingerprint_compare(&ha, &hb)?;
    let map = h1_induced_map(&ha, &hb, images)?;
    let mut quotients = Vec::new();
    for &n in levels {
        let qa = Arc::new(RelativeQuotient::new(a, n)?);
        let qb = Arc::new(RelativeQuotient::new(b, n)?);
        let imgs = images.iter().map(|w| qb.project(w)).collect();
        let f = QuotientHom::new(&qa, &qb, imgs)?;
        quotients.push((n, is_isomorphism_over_g(&f)?));
    }
    let pass = fp.fingerprint_equal && map.isomorphism && quotients.iter().all(|(_, r)| r.isomorphism);
    Ok(StallingsReport {
        h1_fingerprint: fp,
        h1_map: map,
        h2_route: h2,
        quotients,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::FpPresentation;

    fn trefoil() -> FpPresentation {
        FpPresentation::new(
            vec!["a".into(), "b".into()],
            vec![FreeWord::from_syllables([(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)])],
        )
        .unwrap()
    }

    fn f2_over(n: usize, imgs: &[usize]) -> OverG {
        OverG::new(
            FpPresentation::free(["x", "y"]),
            Arc::new(AmbientGroup::cyclic(n).unwrap()),
            imgs.iter().map(|&i| GElem::Fin(i)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn fox_basics() {
        let x = FreeWord::generator(0);
        assert_eq!(fox_derivative(&x, 0), FreeGroupRing::from([(FreeWord::identity(), 1)]));
        assert!(fox_derivative(&x, 1).is_empty());
        assert_eq!(fox_derivative(&x.inverse(), 0), FreeGroupRing::from([(x.inverse(), -1)]));
        let y = FreeWord::generator(1);
        let c = x.mul(&y).mul(&x.inverse()).mul(&y.inverse());
        let expect = FreeGroupRing::from([(FreeWord::identity(), 1), (x.mul(&y).mul(&x.inverse()), -1)]);
        assert_eq!(fox_derivative(&c, 0), expect);
    }

    #[test]
    fn trefoil_jacobian_augments_to_one_minus_one() {
        let cx = fox_jacobian(&OverG::trivial(trefoil())).unwrap();
        let aug: Vec<i64> = cx.d2[0].iter().map(|e| e.augmentation()).collect();
        assert_eq!(aug, vec![1, -1]);
        assert_eq!(h1_twisted(&OverG::trivial(trefoil())).unwrap(), AbelianInvariants::free(1));
    }

    #[test]
    fn free_group_covers() {
        assert_eq!(h1_twisted(&f2_over(4, &[1, 2])).unwrap(), AbelianInvariants::free(5));
        assert_eq!(h1_twisted(&f2_over(2, &[1, 0])).unwrap(), AbelianInvariants::free(3));
        assert_eq!(h1_kernel_via_rs(&f2_over(4, &[1, 2])).unwrap(), AbelianInvariants::free(5));
    }

    #[test]
    fn multipliers() {
        assert_eq!(h2_pc_group(&PcPresentation::free_abelian(2)).unwrap(), AbelianInvariants::free(1));
        assert_eq!(h2_pc_group(&PcPresentation::free_abelian(1)).unwrap(), AbelianInvariants::trivial());
        assert_eq!(h2_pc_group(&PcPresentation::free_abelian(3)).unwrap(), AbelianInvariants::free(3));
        assert_eq!(h2_pc_group(&PcPresentation::heisenberg()).unwrap(), AbelianInvariants::free(2));
        let klein = h2_pc_group(&PcPresentation::abelian(&[2, 2])).unwrap();
        assert_eq!(klein.torsion, vec![2]);
        assert!(h2_pc_group(&PcPresentation::abelian(&[6])).unwrap().is_trivial());
    }

    #[test]
    fn squaring_halves_the_multiplier_image() {
        let z2 = PcPresentation::free_abelian(2);
        let id = H2Source::Pc { source: z2.clone(), images: vec![vec![1, 0], vec![0, 1]] };
        let sq = H2Source::Pc { source: z2.clone(), images: vec![vec![2, 0], vec![0, 1]] };
        assert!(h2_image_compare(&id, &id, &z2).unwrap().equal);
        assert!(!h2_image_compare(&id, &sq, &z2).unwrap().equal);
        let t = H2Source::DeclaredTrivial { provenance: "aspherical".into() };
        assert!(h2_image_compare(&t, &t, &z2).unwrap().equal);
    }

    #[test]
    fn meridian_of_trefoil() {
        let z = OverG::trivial(FpPresentation::free(["m"]));
        let rep = stallings_check(
            &z,
            &OverG::trivial(trefoil()),
            &[FreeWord::generator(0)],
            H2Route::DeclaredTrivial("test".into()),
            &[2, 3],
        )
        .unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
