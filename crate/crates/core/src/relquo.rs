//! The relative quotient `π/Γ_nγ`: an extension of the finite group `G` by
//! the nilpotent group `Γγ/Γ_nγ`, stored as transversal, action and cocycle.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::coset::{kernel_presentation, KernelPresentation};
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, GElem, Group, OverG};
use crate::intmat::AbelianInvariants;
use crate::nq::{nilpotent_quotient, NilpotentQuotient};
use crate::pc::{PcGroup, PcPresentation};
use crate::subgroup::{Ips, NoShadow, Slp};
use crate::words::{FpPresentation, FreeWord};

/// `t_c · n` with `t_c` the transversal word of coset `c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RqElem {
    pub coset: usize,
    pub n: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct RelativeQuotient {
    pub over: OverG,
    pub level: usize,
    pub kernel: Option<KernelPresentation>,
    pub nq: NilpotentQuotient,
    /// `G`-label of each coset; coset 0 is the identity
    pub labels: Vec<GElem>,
    pub transversal: Vec<FreeWord>,
    coset_of: BTreeMap<GElem, usize>,
    /// `action[c][d]` = `t_c^{-1} b_d t_c`
    action: Vec<Vec<Vec<i64>>>,
    /// `cocycle[a][b]` = `t_{ab}^{-1} t_a t_b`
    cocycle: Vec<Vec<Vec<i64>>>,
    pub gen_images: Vec<RqElem>,
}

impl RelativeQuotient {
    /// `π/Γ_nγ` for `n ≥ 1` and finite `G`.
    pub fn new(over: &OverG, level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::Level("levels start at 1".into()));
        }
        over.g.require_finite("relative_quotient")?;
        let kp = kernel_presentation(over)?;
        let nq = nilpotent_quotient(&kp.presentation, level - 1)?;
        let n_group = nq.group.clone();
        let phi = |w: &FreeWord| -> Result<Vec<i64>> { Ok(nq.map_word(&kp.rewrite(w)?)) };
        let t = &kp.table;
        let m = t.len();
        // express each pc generator through the Schreier images once, then
        // replay that under conjugation by every transversal element
        let slp = Slp::default();
        let mut ips = Ips::new(n_group.clone(), slp.clone());
        for k in 0..kp.schreier_generators.len() {
            ips.add(nq.images[k].clone(), slp.input(k))?;
        }
        let programs = (0..n_group.len())
            .map(|d| ips.eval(&n_group.gen(d)).ok_or_else(|| Error::Internal("Schreier images do not generate".into())))
            .collect::<Result<Vec<_>>>()?;
        let mut action = Vec::with_capacity(m);
        for c in 0..m {
            let tc = &t.transversal[c];
            let inputs = kp
                .schreier_generators
                .iter()
                .map(|s| phi(&tc.inverse().mul(s).mul(tc)))
                .collect::<Result<Vec<_>>>()?;
            action.push(slp.replay(&n_group, &inputs, &programs));
        }
        let coset_of: BTreeMap<GElem, usize> = t.labels.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let mut cocycle = vec![vec![Vec::new(); m]; m];
        for a in 0..m {
            for b in 0..m {
                let ab = coset_of[&over.g.mul(&t.labels[a], &t.labels[b])];
                let w = t.transversal[ab].inverse().mul(&t.transversal[a]).mul(&t.transversal[b]);
                cocycle[a][b] = phi(&w)?;
            }
        }
        let mut gen_images = Vec::new();
        for x in 0..over.pi.ngens() {
            let c = coset_of[&over.images[x]];
            let w = t.transversal[c].inverse().mul(&FreeWord::generator(x));
            gen_images.push(RqElem { coset: c, n: phi(&w)? });
        }
        let rq = RelativeQuotient {
            over: over.clone(),
            level,
            labels: t.labels.clone(),
            transversal: t.transversal.clone(),
            kernel: Some(kp),
            nq,
            coset_of,
            action,
            cocycle,
            gen_images,
        };
        for (i, r) in rq.over.pi.relators.iter().enumerate() {
            if !rq.is_identity(&rq.project(r)) {
                return Err(Error::Internal(format!("relator {i} survives in the relative quotient")));
            }
        }
        Ok(rq)
    }

    /// A nilpotent group given directly by a pc presentation, as a quotient
    /// over the trivial group of the free group on its pc generators.
    pub fn from_pc(p: PcPresentation) -> Result<Self> {
        let group = PcGroup::new(p)?;
        group.check_consistency()?;
        let k = group.len();
        let names: Vec<String> = (1..=k).map(|i| format!("g{i}")).collect();
        let over = OverG::trivial(FpPresentation::free(names));
        let images: Vec<Vec<i64>> = (0..k).map(|d| group.gen(d)).collect();
        let class = group.presentation().class();
        let nq = NilpotentQuotient {
            class,
            group: group.clone(),
            images: images.clone(),
        };
        Ok(RelativeQuotient {
            over,
            level: class + 1,
            kernel: None,
            nq,
            labels: vec![GElem::Fin(0)],
            transversal: vec![FreeWord::identity()],
            coset_of: BTreeMap::from([(GElem::Fin(0), 0)]),
            action: vec![images.clone()],
            cocycle: vec![vec![vec![0; k]]],
            gen_images: images.into_iter().map(|n| RqElem { coset: 0, n }).collect(),
        })
    }

    pub fn n_group(&self) -> &PcGroup {
        &self.nq.group
    }

    pub fn g(&self) -> &Arc<AmbientGroup> {
        &self.over.g
    }

    pub fn index(&self) -> usize {
        self.labels.len()
    }

    pub fn hirsch_length(&self) -> usize {
        self.nq.presentation().hirsch_length()
    }

    /// Per-weight invariants of `Γγ/Γ_nγ`.
    pub fn layers(&self) -> Vec<AbelianInvariants> {
        self.nq.layers()
    }

    /// `N` is finite.
    pub fn nilpotent_part_finite(&self) -> bool {
        self.hirsch_length() == 0
    }

    pub fn coset_of(&self, g: &GElem) -> usize {
        self.coset_of[g]
    }

    pub fn to_g(&self, x: &RqElem) -> GElem {
        self.labels[x.coset].clone()
    }

    pub fn from_n(&self, n: Vec<i64>) -> RqElem {
        RqElem { coset: 0, n }
    }

    fn act(&self, c: usize, n: &[i64]) -> Vec<i64> {
        if c == 0 {
            return n.to_vec();
        }
        let g = self.n_group();
        let mut acc = g.identity();
        for (d, &e) in n.iter().enumerate() {
            if e != 0 {
                acc = g.mul(&acc, &g.pow(&self.action[c][d], e));
            }
        }
        acc
    }

    /// Image of a word of `π`, multiplying generator images.
    pub fn project(&self, w: &FreeWord) -> RqElem {
        self.eval_word(w, &self.gen_images)
    }

    /// Image of a word of `π` by rewriting the whole word into the kernel
    /// first; independent of [`project`](Self::project).
    pub fn project_by_rewriting(&self, w: &FreeWord) -> Result<RqElem> {
        let c = self.coset_of[&self.over.gamma(w)];
        let kp = self.kernel.as_ref().ok_or_else(|| Error::Undecidable("no kernel presentation".into()))?;
        let inner = self.transversal[c].inverse().mul(w);
        Ok(RqElem {
            coset: c,
            n: self.nq.map_word(&kp.rewrite(&inner)?),
        })
    }

    /// Lower level quotient by cutting the nilpotent part.
    pub fn truncate(&self, level: usize) -> Result<RelativeQuotient> {
        if level == 0 || level > self.level {
            return Err(Error::Level(format!("cannot project level {} to {level}", self.level)));
        }
        let nq = self.nq.truncate(level - 1)?;
        let k = nq.group.len();
        let cut = |v: &Vec<i64>| v[..k].to_vec();
        Ok(RelativeQuotient {
            over: self.over.clone(),
            level,
            kernel: self.kernel.clone(),
            nq,
            labels: self.labels.clone(),
            transversal: self.transversal.clone(),
            coset_of: self.coset_of.clone(),
            action: self.action.iter().map(|row| row[..k].iter().map(cut).collect()).collect(),
            cocycle: self.cocycle.iter().map(|row| row.iter().map(cut).collect()).collect(),
            gen_images: self.gen_images.iter().map(|x| RqElem { coset: x.coset, n: cut(&x.n) }).collect(),
        })
    }

    /// The tower map `π/Γ_{n}γ → π/Γ_{m}γ` on elements.
    pub fn project_element(&self, x: &RqElem, lower: &RelativeQuotient) -> RqElem {
        RqElem {
            coset: x.coset,
            n: x.n[..lower.n_group().len()].to_vec(),
        }
    }

    /// Same presentation data (used to compare a truncation with a fresh computation).
    pub fn same_data(&self, other: &RelativeQuotient) -> bool {
        self.level == other.level
            && self.labels == other.labels
            && self.nq.presentation() == other.nq.presentation()
            && self.action == other.action
            && self.cocycle == other.cocycle
            && self.gen_images == other.gen_images
    }

    /// Every element of the finite group, when `N` is finite.
    pub fn elements(&self) -> Option<Vec<RqElem>> {
        if !self.nilpotent_part_finite() {
            return None;
        }
        let orders = &self.nq.presentation().orders;
        let mut ns: Vec<Vec<i64>> = vec![Vec::new()];
        for &m in orders {
            ns = ns
                .into_iter()
                .flat_map(|v| {
                    (0..m).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        Some((0..self.index()).flat_map(|c| ns.iter().map(move |n| RqElem { coset: c, n: n.clone() })).collect())
    }
}

impl Group for RelativeQuotient {
    type Elem = RqElem;

    fn identity(&self) -> RqElem {
        RqElem {
            coset: 0,
            n: self.n_group().identity(),
        }
    }

    fn mul(&self, a: &RqElem, b: &RqElem) -> RqElem {
        let g = self.n_group();
        let gh = self.coset_of[&self.over.g.mul(&self.labels[a.coset], &self.labels[b.coset])];
        let n = g.mul(&g.mul(&self.cocycle[a.coset][b.coset], &self.act(b.coset, &a.n)), &b.n);
        RqElem { coset: gh, n }
    }

    fn inv(&self, a: &RqElem) -> RqElem {
        let g = self.n_group();
        let ginv = self.coset_of[&self.over.g.inv(&self.labels[a.coset])];
        let x = g.mul(&self.cocycle[a.coset][ginv], &self.act(ginv, &a.n));
        RqElem { coset: ginv, n: g.inv(&x) }
    }
}

/// Subgroup of a relative quotient: coset orbit with representatives, and an
/// induced sequence for the part inside `N`.
#[derive(Clone, Debug)]
pub struct RelSubgroup<S: Group + Clone = NoShadow> {
    pub e: Arc<RelativeQuotient>,
    shadow: S,
    reps: BTreeMap<usize, (RqElem, S::Elem)>,
    n_part: Ips<S>,
    gens: Vec<(RqElem, S::Elem)>,
}

impl RelSubgroup<NoShadow> {
    pub fn generated(e: &Arc<RelativeQuotient>, gens: &[RqElem]) -> Self {
        let pairs: Vec<(RqElem, ())> = gens.iter().map(|g| (g.clone(), ())).collect();
        RelSubgroup::with_shadow(e, NoShadow, &pairs).expect("trivial shadow never conflicts")
    }

    /// Normal closure of `gens` in the whole quotient.
    pub fn normal_closure(e: &Arc<RelativeQuotient>, gens: &[RqElem]) -> Self {
        let mut current: Vec<RqElem> = gens.to_vec();
        let conjugators: Vec<RqElem> = e
            .gen_images
            .iter()
            .flat_map(|x| [x.clone(), e.inv(x)])
            .collect();
        loop {
            let sub = RelSubgroup::generated(e, &current);
            let members: Vec<RqElem> = sub.generators_and_entries();
            let mut grew = false;
            for u in &members {
                for c in &conjugators {
                    let v = e.conj(u, c);
                    if !sub.contains(&v) {
                        current.push(v);
                        grew = true;
                    }
                }
            }
            if !grew {
                return sub;
            }
        }
    }
}

impl<S: Group + Clone> RelSubgroup<S> {
    pub fn with_shadow(e: &Arc<RelativeQuotient>, shadow: S, gens: &[(RqElem, S::Elem)]) -> Result<Self> {
        let mut reps: BTreeMap<usize, (RqElem, S::Elem)> = BTreeMap::new();
        reps.insert(0, (e.identity(), shadow.identity()));
        let mut n_part = Ips::new(e.n_group().clone(), shadow.clone());
        let mut queue = VecDeque::from([0usize]);
        let mut schreier = Vec::new();
        while let Some(c) = queue.pop_front() {
            let (r, sr) = reps[&c].clone();
            for (u, su) in gens {
                let ru = e.mul(&r, u);
                let sru = shadow.mul(&sr, su);
                match reps.get(&ru.coset) {
                    None => {
                        reps.insert(ru.coset, (ru.clone(), sru));
                        queue.push_back(ru.coset);
                    }
                    Some((rd, srd)) => {
                        schreier.push((e.mul(&ru, &e.inv(rd)), shadow.mul(&sru, &shadow.inv(srd))));
                    }
                }
            }
        }
        for (x, sx) in schreier {
            debug_assert_eq!(x.coset, 0);
            n_part.add(x.n, sx)?;
        }
        Ok(RelSubgroup {
            e: e.clone(),
            shadow,
            reps,
            n_part,
            gens: gens.to_vec(),
        })
    }

    /// Image of `x` under the shadow map, if `x` lies in the subgroup.
    pub fn eval(&self, x: &RqElem) -> Option<S::Elem> {
        let (r, sr) = self.reps.get(&x.coset)?;
        let y = self.e.mul(&self.e.inv(r), x);
        let sy = self.n_part.eval(&y.n)?;
        Some(self.shadow.mul(sr, &sy))
    }

    pub fn contains(&self, x: &RqElem) -> bool {
        match self.reps.get(&x.coset) {
            None => false,
            Some((r, _)) => self.n_part.contains(&self.e.mul(&self.e.inv(r), x).n),
        }
    }

    pub fn is_whole(&self) -> bool {
        self.reps.len() == self.e.index() && self.n_part.is_whole()
    }

    pub fn n_part(&self) -> &Ips<S> {
        &self.n_part
    }

    pub fn cosets(&self) -> impl Iterator<Item = usize> + '_ {
        self.reps.keys().copied()
    }

    pub fn generators(&self) -> &[(RqElem, S::Elem)] {
        &self.gens
    }

    /// Generators together with coset representatives and `N`-entries.
    pub fn generators_and_entries(&self) -> Vec<RqElem> {
        let mut v: Vec<RqElem> = self.gens.iter().map(|(x, _)| x.clone()).collect();
        v.extend(self.reps.values().map(|(r, _)| r.clone()));
        v.extend(self.n_part.entries().map(|(_, x, _)| self.e.from_n(x.clone())));
        v
    }

    /// `self ⊆ other` by sifting generators.
    pub fn is_subgroup_of<T: Group + Clone>(&self, other: &RelSubgroup<T>) -> bool {
        self.gens.iter().all(|(x, _)| other.contains(x))
    }

    pub fn equals<T: Group + Clone>(&self, other: &RelSubgroup<T>) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }
}

/// Homomorphism between relative quotients given on the generators of the
/// source's `π`, evaluated by sifting through its graph.
#[derive(Clone, Debug)]
pub struct QuotientHom {
    pub source: Arc<RelativeQuotient>,
    pub target: Arc<RelativeQuotient>,
    pub images: Vec<RqElem>,
    graph: RelSubgroup<Arc<RelativeQuotient>>,
}

impl QuotientHom {
    /// Fails with `NotAHomomorphism` when the images do not define a map on the quotient.
    pub fn new(source: &Arc<RelativeQuotient>, target: &Arc<RelativeQuotient>, images: Vec<RqElem>) -> Result<Self> {
        if images.len() != source.over.pi.ngens() {
            return Err(Error::Internal("one image per source generator required".into()));
        }
        let pairs: Vec<(RqElem, RqElem)> = source.gen_images.iter().cloned().zip(images.iter().cloned()).collect();
        let graph = RelSubgroup::with_shadow(source, target.clone(), &pairs)?;
        Ok(QuotientHom {
            source: source.clone(),
            target: target.clone(),
            images,
            graph,
        })
    }

    pub fn apply(&self, x: &RqElem) -> RqElem {
        self.graph.eval(x).expect("source generators generate the quotient")
    }

    /// Generic map into the target applied to a word of the source `π`.
    pub fn apply_word(&self, w: &FreeWord) -> RqElem {
        self.target.eval_word(w, &self.images)
    }

    pub fn is_surjective(&self) -> bool {
        RelSubgroup::generated(&self.target, &self.images).is_whole()
    }

    /// Commutes with the projections to `G`.
    pub fn is_over_g(&self) -> bool {
        self.source.over.same_ambient(&self.target.over)
            && self
                .source
                .gen_images
                .iter()
                .zip(&self.images)
                .all(|(x, y)| self.source.to_g(x) == self.target.to_g(y))
    }

    /// Inverse, when the map is bijective (checked through the shadow).
    pub fn inverse(&self) -> Result<QuotientHom> {
        let pairs: Vec<(RqElem, RqElem)> = self.images.iter().cloned().zip(self.source.gen_images.iter().cloned()).collect();
        let graph = RelSubgroup::with_shadow(&self.target, self.source.clone(), &pairs)
            .map_err(|_| Error::Inversion("map is not injective".into()))?;
        if !graph.is_whole() {
            return Err(Error::Inversion("map is not surjective".into()));
        }
        let images = self.target.gen_images.iter().map(|y| graph.eval(y).unwrap()).collect();
        QuotientHom::new(&self.target, &self.source, images)
    }
}

/// Verdict of an isomorphism check between relative quotients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub isomorphism: bool,
    pub over_g: bool,
    pub surjective: bool,
    pub source_layers: Vec<AbelianInvariants>,
    pub target_layers: Vec<AbelianInvariants>,
    pub reason: Option<String>,
}

/// Surjective, over `G`, and equal layer invariants of the nilpotent parts
/// (finitely generated nilpotent-by-finite groups are Hopfian).
pub fn is_isomorphism_over_g(f: &QuotientHom) -> Result<IsoReport> {
    for rq in [&f.source, &f.target] {
        if rq.kernel.is_none() && !rq.n_group().weights_are_lcs() {
            return Err(Error::Inconsistent("weights of a hand-built presentation are not its lower central series".into()));
        }
    }
    let over_g = f.is_over_g();
    let surjective = f.is_surjective();
    let sl = f.source.layers();
    let tl = f.target.layers();
    let reason = if !over_g {
        Some("map does not commute with the projections to G".to_string())
    } else if !surjective {
        Some("map is not surjective".to_string())
    } else if f.source.index() != f.target.index() {
        Some("different finite quotients".to_string())
    } else if sl != tl {
        let w = (0..sl.len().max(tl.len()))
            .find(|&i| sl.get(i) != tl.get(i))
            .unwrap();
        Some(format!(
            "layer {} differs: {} vs {}",
            w + 1,
            sl.get(w).cloned().unwrap_or_default(),
            tl.get(w).cloned().unwrap_or_default()
        ))
    } else {
        None
    };
    Ok(IsoReport {
        isomorphism: reason.is_none(),
        over_g,
        surjective,
        source_layers: sl,
        target_layers: tl,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AmbientGroup;

    fn f2_over(n: usize, imgs: &[usize]) -> OverG {
        OverG::new(
            FpPresentation::free(["x", "y"]),
            Arc::new(AmbientGroup::cyclic(n).unwrap()),
            imgs.iter().map(|&i| GElem::Fin(i)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn f2_over_z2_level_two() {
        let rq = RelativeQuotient::new(&f2_over(2, &[1, 0]), 2).unwrap();
        assert_eq!(rq.hirsch_length(), 3);
        assert_eq!(rq.index(), 2);
    }

    #[test]
    fn associativity_and_projection_routes() {
        let rq = RelativeQuotient::new(&f2_over(3, &[1, 0]), 3).unwrap();
        let words = [
            FreeWord::from_syllables([(0, 1), (1, 2)]),
            FreeWord::from_syllables([(1, -1), (0, 2), (1, 1)]),
            FreeWord::from_syllables([(0, -2), (1, 1), (0, 1)]),
        ];
        let el: Vec<RqElem> = words.iter().map(|w| rq.project(w)).collect();
        for a in &el {
            for b in &el {
                for c in &el {
                    assert_eq!(rq.mul(&rq.mul(a, b), c), rq.mul(a, &rq.mul(b, c)));
                }
            }
            assert!(rq.is_identity(&rq.mul(a, &rq.inv(a))));
        }
        for w in &words {
            assert_eq!(rq.project(w), rq.project_by_rewriting(w).unwrap());
        }
    }

    #[test]
    fn heisenberg_iso() {
        let over = OverG::trivial(FpPresentation::free(["x", "y"]));
        let rq = Arc::new(RelativeQuotient::new(&over, 3).unwrap());
        let h = Arc::new(RelativeQuotient::from_pc(PcPresentation::heisenberg()).unwrap());
        let f = QuotientHom::new(&rq, &h, vec![h.gen_images[0].clone(), h.gen_images[1].clone()]).unwrap();
        let rep = is_isomorphism_over_g(&f).unwrap();
        assert!(rep.isomorphism, "{rep:?}");
        let inv = f.inverse().unwrap();
        assert_eq!(inv.apply(&h.gen_images[0]), rq.gen_images[0]);
    }

    #[test]
    fn squaring_is_not_onto() {
        let over = OverG::trivial(FpPresentation::free(["x"]));
        let rq = Arc::new(RelativeQuotient::new(&over, 2).unwrap());
        let sq = rq.pow(&rq.gen_images[0], 2);
        let f = QuotientHom::new(&rq, &rq, vec![sq]).unwrap();
        let rep = is_isomorphism_over_g(&f).unwrap();
        assert!(!rep.isomorphism);
        assert!(!rep.surjective);
    }

    #[test]
    fn truncation_agrees_with_direct_computation() {
        let g = f2_over(2, &[1, 0]);
        let high = RelativeQuotient::new(&g, 3).unwrap();
        let low = RelativeQuotient::new(&g, 2).unwrap();
        assert!(high.truncate(2).unwrap().same_data(&low));
    }
}
