//! Extendable maps into relative quotients of a target knot group: checks,
//! the canonical map, bounded search, the tower, rebasing, boundary-condition
//! automorphisms and the meridian-killed conjugacy shadow.

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, OverG};
use crate::relquo::{is_isomorphism_over_g, IsoReport, QuotientHom, RelSubgroup, RelativeQuotient, RqElem};
use crate::words::FreeWord;

/// Images of the basis `(m, l)` of a rank-two lattice and a primitive vector `mu`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryCondition {
    pub m: FreeWord,
    pub l: FreeWord,
    pub mu: (i64, i64),
}

impl BoundaryCondition {
    pub fn new(m: FreeWord, l: FreeWord, mu: (i64, i64)) -> Result<Self> {
        if mu.0.gcd(&mu.1) != 1 {
            return Err(Error::Inconsistent(format!("({}, {}) is not primitive", mu.0, mu.1)));
        }
        Ok(BoundaryCondition { m, l, mu })
    }

    /// The standard condition: `mu = m`.
    pub fn meridional(m: FreeWord, l: FreeWord) -> Self {
        BoundaryCondition { m, l, mu: (1, 0) }
    }

    pub fn mu_word(&self) -> FreeWord {
        self.m.pow(self.mu.0).mul(&self.l.pow(self.mu.1))
    }
}

#[derive(Clone, Debug)]
pub struct KnotData {
    pub name: String,
    pub over: OverG,
    pub bc: BoundaryCondition,
    /// conjugator applied to the peripheral words
    pub basing: Option<FreeWord>,
}

impl KnotData {
    pub fn new(name: impl Into<String>, over: OverG, bc: BoundaryCondition) -> Result<Self> {
        bc.m.check_range(over.pi.ngens())?;
        bc.l.check_range(over.pi.ngens())?;
        Ok(KnotData {
            name: name.into(),
            over,
            bc,
            basing: None,
        })
    }

    fn based(&self, w: &FreeWord) -> FreeWord {
        match &self.basing {
            Some(b) => w.conjugate_by(b),
            None => w.clone(),
        }
    }

    pub fn meridian(&self) -> FreeWord {
        self.based(&self.bc.mu_word())
    }

    /// Based images of `m` and `l`.
    pub fn peripheral(&self) -> [FreeWord; 2] {
        [self.based(&self.bc.m), self.based(&self.bc.l)]
    }

    pub fn quotient(&self, n: usize) -> Result<Arc<RelativeQuotient>> {
        Ok(Arc::new(RelativeQuotient::new(&self.over, n)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendabilityReport {
    /// relators of the source die in the quotient
    pub homomorphism: bool,
    pub mu_condition: bool,
    pub peripheral_condition: bool,
    pub over_g_condition: bool,
    /// images of `m` and `l` commute in the target quotient, for source and target
    pub dagger_commute: bool,
    pub notion: &'static str,
    pub taints: Vec<String>,
    pub pass: bool,
}

const NOTION: &str = "group-level: peripheral subgroup, meridian image and G-compatibility";

#[derive(Clone, Debug)]
pub struct ExtendableMapCandidate {
    pub source: KnotData,
    pub target: KnotData,
    pub level: usize,
    pub quotient: Arc<RelativeQuotient>,
    /// images of the generators of `π_K`
    pub images: Vec<RqElem>,
    pub report: ExtendabilityReport,
}

impl ExtendableMapCandidate {
    pub fn new(source: &KnotData, target: &KnotData, quotient: Arc<RelativeQuotient>, images: Vec<RqElem>) -> Self {
        let report = check_extendable(source, target, &quotient, &images, &[]);
        ExtendableMapCandidate {
            source: source.clone(),
            target: target.clone(),
            level: quotient.level,
            quotient,
            images,
            report,
        }
    }

    /// Candidate sending each generator of `π_K` to the image of a word in `π_J`.
    pub fn from_words(source: &KnotData, target: &KnotData, quotient: Arc<RelativeQuotient>, words: &[FreeWord]) -> Self {
        let images = words.iter().map(|w| quotient.project(w)).collect();
        Self::new(source, target, quotient, images)
    }

    pub fn apply(&self, w: &FreeWord) -> RqElem {
        self.quotient.eval_word(w, &self.images)
    }

    pub fn with_taints(mut self, taints: &[String]) -> Self {
        for t in taints {
            if !self.report.taints.contains(t) {
                self.report.taints.push(t.clone());
            }
        }
        self
    }

    pub fn passes(&self) -> bool {
        self.report.pass
    }
}

/// The projection `π_J → π_J/Γ_nγ_J`.
pub fn canonical_tau(j: &KnotData, n: usize) -> Result<ExtendableMapCandidate> {
    let q = j.quotient(n)?;
    let images = q.gen_images.clone();
    Ok(ExtendableMapCandidate::new(j, j, q, images))
}

pub fn check_extendable(
    k: &KnotData,
    j: &KnotData,
    q: &Arc<RelativeQuotient>,
    images: &[RqElem],
    taints: &[String],
) -> ExtendabilityReport {
    let mut taints = taints.to_vec();
    let eval = |w: &FreeWord| q.eval_word(w, images);
    let homomorphism = images.len() == k.over.pi.ngens() && k.over.pi.relators.iter().all(|r| q.is_identity(&eval(r)));
    if !homomorphism {
        taints.push("images do not define a homomorphism".into());
        return ExtendabilityReport {
            homomorphism,
            mu_condition: false,
            peripheral_condition: false,
            over_g_condition: false,
            dagger_commute: false,
            notion: NOTION,
            taints,
            pass: false,
        };
    }
    let mu_condition = eval(&k.meridian()) == q.project(&j.meridian());
    let src: Vec<RqElem> = k.peripheral().iter().map(eval).collect();
    let tgt: Vec<RqElem> = j.peripheral().iter().map(|w| q.project(w)).collect();
    let peripheral_condition = RelSubgroup::generated(q, &src).equals(&RelSubgroup::generated(q, &tgt));
    let over_g_condition = Arc::ptr_eq(&k.over.g, &q.over.g) || k.over.same_ambient(&q.over);
    let over_g_condition = over_g_condition
        && (0..k.over.pi.ngens()).all(|x| q.to_g(&images[x]) == k.over.images[x]);
    let commute = |v: &[RqElem]| q.is_identity(&q.comm(&v[0], &v[1]));
    let dagger_commute = commute(&src) && commute(&tgt);
    if !dagger_commute {
        taints.push("peripheral images do not commute at this level".into());
    }
    ExtendabilityReport {
        homomorphism,
        mu_condition,
        peripheral_condition,
        over_g_condition,
        dagger_commute,
        notion: NOTION,
        pass: mu_condition && peripheral_condition && over_g_condition,
        taints,
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub candidates: Vec<ExtendableMapCandidate>,
    pub exhaustive: bool,
    pub examined: usize,
}

const SEARCH_LIMIT: usize = 2_000_000;

fn free_range(bound: i64) -> Vec<i64> {
    let mut v = vec![0];
    for b in 1..=bound {
        v.push(b);
        v.push(-b);
    }
    v
}

/// Every assignment of generator images over `G` with nilpotent coordinates
/// in the full torsion range and `[-bound, bound]` on infinite depths. A
/// meridian given by a single generator has its image fixed by the
/// meridional condition and is not enumerated.
pub fn search_extendable(k: &KnotData, j: &KnotData, n: usize, bound: i64) -> Result<SearchResult> {
    if !k.over.same_ambient(&j.over) {
        return Err(Error::AmbientMismatch);
    }
    let q = j.quotient(n)?;
    let orders = q.nq.presentation().orders.clone();
    let ranges: Vec<Vec<i64>> = orders
        .iter()
        .map(|&m| if m > 0 { (0..m).collect() } else { free_range(bound) })
        .collect();
    // a meridian that is a single generator letter has a forced image
    let target_mu = q.project(&j.meridian());
    let pinned: Option<(usize, RqElem)> = match k.meridian().syllables() {
        [(x, e)] if e.abs() == 1 => Some((*x, if *e == 1 { target_mu } else { q.inv(&target_mu) })),
        _ => None,
    };
    let free_gens: Vec<usize> = (0..k.over.pi.ngens()).filter(|&x| pinned.as_ref().is_none_or(|p| p.0 != x)).collect();
    let per_gen: usize = ranges.iter().map(Vec::len).product();
    let total = per_gen
        .checked_pow(free_gens.len() as u32)
        .filter(|&t| t <= SEARCH_LIMIT)
        .ok_or_else(|| Error::Undecidable(format!("search space exceeds {SEARCH_LIMIT} assignments")))?;
    let vectors: Vec<Vec<i64>> = ranges.iter().fold(vec![Vec::new()], |acc, r| {
        acc.into_iter()
            .flat_map(|v| {
                r.iter().map(move |&e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect()
    });
    let cosets: Vec<usize> = k.over.images.iter().map(|g| q.coset_of(g)).collect();
    let mut found = Vec::new();
    let mut idx = vec![0usize; free_gens.len()];
    let mut examined = 0;
    if total > 0 {
        loop {
            examined += 1;
            let mut images: Vec<RqElem> = cosets
                .iter()
                .map(|&c| RqElem { coset: c, n: Vec::new() })
                .collect();
            for (&i, &x) in idx.iter().zip(&free_gens) {
                images[x].n = vectors[i].clone();
            }
            if let Some((x, img)) = &pinned {
                images[*x] = img.clone();
            }
            let report = check_extendable(k, j, &q, &images, &[]);
            if report.pass {
                found.push(ExtendableMapCandidate {
                    source: k.clone(),
                    target: j.clone(),
                    level: n,
                    quotient: q.clone(),
                    images,
                    report,
                });
            }
            // odometer
            let mut p = 0;
            while p < idx.len() {
                idx[p] += 1;
                if idx[p] < vectors.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == idx.len() {
                break;
            }
        }
    }
    let free: Vec<usize> = (0..orders.len()).filter(|&d| orders[d] == 0).collect();
    let key = |c: &ExtendableMapCandidate| {
        let size = c.images.iter().flat_map(|x| free.iter().map(move |&d| x.n[d].abs())).max().unwrap_or(0);
        (size, c.images.clone())
    };
    found.sort_by_key(key);
    Ok(SearchResult {
        candidates: found,
        exhaustive: free.is_empty(),
        examined,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InducedIsoReport {
    pub level: usize,
    pub iso: IsoReport,
    pub mu_condition: bool,
    pub peripheral_condition: bool,
    pub pass: bool,
}

/// The map `π_K/Γ_{j+1}γ_K → π_J/Γ_{j+1}γ_J` induced by a candidate, with
/// the meridian and peripheral conditions re-checked at that level.
pub fn induced_quotient_iso(c: &ExtendableMapCandidate, j: usize) -> Result<InducedIsoReport> {
    if j == 0 || j >= c.level {
        return Err(Error::Level(format!("need 1 ≤ j < {}", c.level)));
    }
    let target = Arc::new(c.quotient.truncate(j + 1)?);
    let source = c.source.quotient(j + 1)?;
    let images: Vec<RqElem> = c.images.iter().map(|x| c.quotient.project_element(x, &target)).collect();
    let f = QuotientHom::new(&source, &target, images.clone())?;
    let iso = is_isomorphism_over_g(&f)?;
    let rep = check_extendable(&c.source, &c.target, &target, &images, &[]);
    Ok(InducedIsoReport {
        level: j + 1,
        pass: iso.isomorphism && rep.mu_condition && rep.peripheral_condition,
        iso,
        mu_condition: rep.mu_condition,
        peripheral_condition: rep.peripheral_condition,
    })
}

/// Composition with the tower map to level `n − 1`.
pub fn tower_project(c: &ExtendableMapCandidate) -> Result<ExtendableMapCandidate> {
    let lower = Arc::new(c.quotient.truncate(c.level - 1)?);
    let images = c.images.iter().map(|x| c.quotient.project_element(x, &lower)).collect();
    let out = ExtendableMapCandidate::new(&c.source, &c.target, lower, images);
    Ok(out.with_taints(&c.report.taints))
}

/// Same maps into quotients with the same data.
pub fn same_candidate(a: &ExtendableMapCandidate, b: &ExtendableMapCandidate) -> bool {
    a.level == b.level && a.images == b.images && a.quotient.same_data(&b.quotient)
}

#[derive(Clone, Debug)]
pub struct RebaseOutcome {
    pub candidate: Option<ExtendableMapCandidate>,
    /// `τ(a)` fails to centralize the meridian of the target
    pub obstruction: Option<String>,
}

/// Post-composition with conjugation by `τ(a)`.
pub fn rebase(c: &ExtendableMapCandidate, a: &FreeWord) -> Result<RebaseOutcome> {
    a.check_range(c.source.over.pi.ngens())?;
    let q = &c.quotient;
    let t = c.apply(a);
    let mu = q.project(&c.target.meridian());
    if q.conj(&mu, &t) != mu {
        return Ok(RebaseOutcome {
            candidate: None,
            obstruction: Some("the conjugator does not centralize the meridian".into()),
        });
    }
    let images = c.images.iter().map(|x| q.conj(x, &t)).collect();
    let out = ExtendableMapCandidate::new(&c.source, &c.target, q.clone(), images).with_taints(&c.report.taints);
    Ok(RebaseOutcome {
        candidate: Some(out),
        obstruction: None,
    })
}

/// An endomorphism of `π_J/Γ_nγ_J` with the checks defining the
/// boundary-condition automorphism group.
#[derive(Clone, Debug)]
pub struct BcAutomorphism {
    pub map: QuotientHom,
    pub report: AutomorphismReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphismReport {
    pub automorphism: bool,
    pub fixes_mu: bool,
    pub preserves_peripheral: bool,
    pub over_g: bool,
    pub is_identity: bool,
    pub member: bool,
}

impl BcAutomorphism {
    pub fn verify(j: &KnotData, map: QuotientHom) -> Result<Self> {
        let q = &map.source;
        let automorphism = is_isomorphism_over_g(&map)?.isomorphism;
        let mu = q.project(&j.meridian());
        let fixes_mu = map.apply(&mu) == mu;
        let per: Vec<RqElem> = j.peripheral().iter().map(|w| q.project(w)).collect();
        let moved: Vec<RqElem> = per.iter().map(|x| map.apply(x)).collect();
        let preserves_peripheral = RelSubgroup::generated(q, &per).equals(&RelSubgroup::generated(q, &moved));
        let over_g = map.is_over_g();
        let is_identity = map.images == q.gen_images;
        let report = AutomorphismReport {
            member: automorphism && fixes_mu && preserves_peripheral && over_g,
            automorphism,
            fixes_mu,
            preserves_peripheral,
            over_g,
            is_identity,
        };
        Ok(BcAutomorphism { map, report })
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &BcAutomorphism, j: &KnotData) -> Result<BcAutomorphism> {
        let images = other.map.images.iter().map(|x| self.map.apply(x)).collect();
        let map = QuotientHom::new(&other.map.source, &self.map.target, images)?;
        BcAutomorphism::verify(j, map)
    }
}

/// `p = g ∘ f^{-1}` for the quotient maps `f`, `g` induced by two candidates.
pub fn bc_automorphism_from_pair(c1: &ExtendableMapCandidate, c2: &ExtendableMapCandidate) -> Result<BcAutomorphism> {
    if c1.level != c2.level || !c1.quotient.same_data(&c2.quotient) {
        return Err(Error::Level("candidates live in different quotients".into()));
    }
    let q = c1.quotient.clone();
    let ek = c1.source.quotient(c1.level)?;
    let f = QuotientHom::new(&ek, &q, c1.images.clone())?;
    let g = QuotientHom::new(&ek, &q, c2.images.clone())?;
    let finv = f.inverse()?;
    let images = q.gen_images.iter().map(|y| g.apply(&finv.apply(y))).collect();
    let p = QuotientHom::new(&q, &q, images)?;
    BcAutomorphism::verify(&c1.target, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShadowVerdict {
    AgreeUpToConjugacy,
    Differ,
    UndecidedAtBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowReport {
    pub verdict: ShadowVerdict,
    /// conjugator found, as an element of the quotient
    pub witness: Option<RqElem>,
    pub exhaustive: bool,
    pub examined: usize,
    /// the meridian-killed quotient has trivial nilpotent part
    pub killed_quotient_is_g: bool,
}

/// Compares two candidates after killing the normal closure of `μ_J`.
/// Candidates with a common source are compared generator by generator up to
/// simultaneous conjugacy; otherwise only a quotient equal to `G` decides.
pub fn pi1_shadow_compare(c1: &ExtendableMapCandidate, c2: &ExtendableMapCandidate, bound: i64) -> Result<ShadowReport> {
    if c1.level != c2.level || !c1.quotient.same_data(&c2.quotient) {
        return Err(Error::Level("candidates live in different quotients".into()));
    }
    let q = &c1.quotient;
    let mu = q.project(&c1.target.meridian());
    let m = RelSubgroup::normal_closure(q, &[mu]);
    let killed_quotient_is_g = m.n_part().is_whole();
    let same_source = c1.source.over.pi == c2.source.over.pi;
    if !same_source {
        let verdict = if killed_quotient_is_g {
            ShadowVerdict::AgreeUpToConjugacy
        } else {
            ShadowVerdict::UndecidedAtBound
        };
        return Ok(ShadowReport {
            verdict,
            witness: None,
            exhaustive: killed_quotient_is_g,
            examined: 0,
            killed_quotient_is_g,
        });
    }
    let orders = q.nq.presentation().orders.clone();
    let mut exhaustive = true;
    let ranges: Vec<Vec<i64>> = (0..orders.len())
        .map(|d| match (m.n_part().lead(d), orders[d]) {
            (Some(l), _) => (0..l).collect(),
            (None, o) if o > 0 => (0..o).collect(),
            (None, _) => {
                exhaustive = false;
                free_range(bound)
            }
        })
        .collect();
    let same_mod_m = |t: &RqElem| {
        c1.images
            .iter()
            .zip(&c2.images)
            .all(|(a, b)| m.contains(&q.mul(&q.inv(b), &q.conj(a, t))))
    };
    let mut examined = 0;
    let per_coset: usize = ranges.iter().map(Vec::len).product();
    if per_coset.saturating_mul(q.index()) > SEARCH_LIMIT {
        return Err(Error::Undecidable("conjugator search space too large".into()));
    }
    for coset in 0..q.index() {
        let mut idx = vec![0usize; ranges.len()];
        loop {
            examined += 1;
            let t = RqElem {
                coset,
                n: idx.iter().zip(&ranges).map(|(&i, r)| r[i]).collect(),
            };
            if same_mod_m(&t) {
                return Ok(ShadowReport {
                    verdict: ShadowVerdict::AgreeUpToConjugacy,
                    witness: Some(t),
                    exhaustive,
                    examined,
                    killed_quotient_is_g,
                });
            }
            let mut p = 0;
            while p < idx.len() {
                idx[p] += 1;
                if idx[p] < ranges[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == idx.len() {
                break;
            }
        }
    }
    Ok(ShadowReport {
        verdict: if exhaustive { ShadowVerdict::Differ } else { ShadowVerdict::UndecidedAtBound },
        witness: None,
        exhaustive,
        examined,
        killed_quotient_is_g,
    })
}
