//! Coset enumeration for `Ker γ` with finite `G`, and Reidemeister–Schreier
//! rewriting to a presentation of the kernel.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::{GElem, Group, OverG};
use crate::words::{FpHom, FpPresentation, FreeWord, Verification};

/// Coset table of `Ker γ` in `π`. Coset 0 is the kernel itself.
#[derive(Clone, Debug)]
pub struct CosetTable {
    /// `G`-label of each coset
    pub labels: Vec<GElem>,
    /// `next[c][x]` = coset `c·x`; `prev[c][x]` = coset `c·x^{-1}`
    pub next: Vec<Vec<usize>>,
    pub prev: Vec<Vec<usize>>,
    /// Schreier transversal words
    pub transversal: Vec<FreeWord>,
    /// `tree[c][x]`: the edge `c --x--> c·x` lies in the spanning tree
    pub tree: Vec<Vec<bool>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn coset_of_label(&self, g: &GElem) -> Option<usize> {
        self.labels.iter().position(|l| l == g)
    }

    /// Coset reached from `start` by reading `w`.
    pub fn trace(&self, start: usize, w: &FreeWord) -> usize {
        w.letters()
            .fold(start, |c, (x, s)| if s > 0 { self.next[c][x] } else { self.prev[c][x] })
    }
}

/// Enumerates cosets of `Ker γ` breadth first, identifying cosets by their
/// image in `G`, then checks every relator closes up at every coset.
pub fn todd_coxeter(g: &OverG) -> Result<CosetTable> {
    let fin = g.g.require_finite("todd_coxeter")?;
    let limit = 10 * fin.order();
    let r = g.pi.ngens();
    let id = g.g.identity();
    let inv_images: Vec<GElem> = g.images.iter().map(|x| g.g.inv(x)).collect();
    let mut labels = vec![id.clone()];
    let mut index: BTreeMap<GElem, usize> = BTreeMap::from([(id, 0)]);
    let mut transversal = vec![FreeWord::identity()];
    let mut next: Vec<Vec<Option<usize>>> = vec![vec![None; r]];
    let mut prev: Vec<Vec<Option<usize>>> = vec![vec![None; r]];
    let mut tree = vec![vec![false; r]];
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for x in 0..r {
            for sign in [1i64, -1] {
                let slot = if sign > 0 { next[c][x] } else { prev[c][x] };
                if slot.is_some() {
                    continue;
                }
                let img = if sign > 0 { &g.images[x] } else { &inv_images[x] };
                let label = g.g.mul(&labels[c], img);
                let d = match index.get(&label) {
                    Some(&d) => d,
                    None => {
                        let d = labels.len();
                        if d >= limit {
                            return Err(Error::CosetLimit { limit });
                        }
                        labels.push(label.clone());
                        index.insert(label, d);
                        transversal.push(transversal[c].mul(&FreeWord::power_of(x, sign)));
                        next.push(vec![None; r]);
                        prev.push(vec![None; r]);
                        tree.push(vec![false; r]);
                        if sign > 0 {
                            tree[c][x] = true;
                        } else {
                            tree[d][x] = true;
                        }
                        queue.push_back(d);
                        d
                    }
                };
                if sign > 0 {
                    next[c][x] = Some(d);
                    prev[d][x] = Some(c);
                } else {
                    prev[c][x] = Some(d);
                    next[d][x] = Some(c);
                }
            }
        }
    }
    let unwrap = |t: Vec<Vec<Option<usize>>>| -> Result<Vec<Vec<usize>>> {
        t.into_iter()
            .map(|row| row.into_iter().map(|e| e.ok_or_else(|| Error::Internal("coset table not closed".into()))).collect())
            .collect()
    };
    let table = CosetTable {
        labels,
        next: unwrap(next)?,
        prev: unwrap(prev)?,
        transversal,
        tree,
    };
    if table.len() != fin.order() {
        return Err(Error::Internal(format!("{} cosets for |G| = {}", table.len(), fin.order())));
    }
    for c in 0..table.len() {
        for rel in &g.pi.relators {
            if table.trace(c, rel) != c {
                return Err(Error::Internal(format!("relator does not close at coset {c}")));
            }
        }
    }
    Ok(table)
}

/// Presentation of `Ker γ` on Schreier generators.
#[derive(Clone, Debug)]
pub struct KernelPresentation {
    pub table: CosetTable,
    pub presentation: FpPresentation,
    /// Schreier generators as words in `π`'s generators
    pub schreier_generators: Vec<FreeWord>,
    /// `(coset, generator)` → Schreier generator index, for non-tree edges
    edge_index: Vec<Vec<Option<usize>>>,
    pub embedding: FpHom,
}

impl KernelPresentation {
    /// Rewrites a word lying in the kernel as a word in the Schreier generators.
    pub fn rewrite(&self, w: &FreeWord) -> Result<FreeWord> {
        let (c, out) = self.rewrite_from(0, w);
        if c != 0 {
            return Err(Error::Internal("word passed to rewrite is not in the kernel".into()));
        }
        Ok(out)
    }

    fn rewrite_from(&self, start: usize, w: &FreeWord) -> (usize, FreeWord) {
        let t = &self.table;
        let mut c = start;
        let mut out = Vec::new();
        for (x, s) in w.letters() {
            if s > 0 {
                if let Some(k) = self.edge_index[c][x] {
                    out.push((k, 1));
                }
                c = t.next[c][x];
            } else {
                let d = t.prev[c][x];
                if let Some(k) = self.edge_index[d][x] {
                    out.push((k, -1));
                }
                c = d;
            }
        }
        (c, FreeWord::from_syllables(out))
    }

    pub fn rank(&self) -> usize {
        self.schreier_generators.len()
    }
}

pub fn reidemeister_schreier(t: &CosetTable, g: &OverG) -> Result<KernelPresentation> {
    let r = g.pi.ngens();
    let mut edge_index = vec![vec![None; r]; t.len()];
    let mut gens = Vec::new();
    for c in 0..t.len() {
        for x in 0..r {
            if !t.tree[c][x] {
                edge_index[c][x] = Some(gens.len());
                let d = t.next[c][x];
                gens.push(t.transversal[c].mul(&FreeWord::generator(x)).mul(&t.transversal[d].inverse()));
            }
        }
    }
    for s in &gens {
        if !g.kernel_membership(s) {
            return Err(Error::Internal("Schreier generator outside the kernel".into()));
        }
    }
    let names = (1..=gens.len()).map(|i| format!("s{i}")).collect();
    let mut kp = KernelPresentation {
        table: t.clone(),
        presentation: FpPresentation::free(Vec::<String>::new()),
        schreier_generators: gens.clone(),
        edge_index,
        embedding: FpHom::identity(&FpPresentation::free(Vec::<String>::new())),
    };
    let mut relators = Vec::new();
    for c in 0..t.len() {
        for rel in &g.pi.relators {
            let conj = t.transversal[c].mul(rel).mul(&t.transversal[c].inverse());
            relators.push(kp.rewrite(&conj)?);
        }
    }
    kp.presentation = FpPresentation::new(names, relators)?;
    kp.embedding = FpHom {
        domain: kp.presentation.clone(),
        codomain: g.pi.clone(),
        images: gens,
        verified: Verification::Verified,
    };
    Ok(kp)
}

/// Coset enumeration followed by rewriting.
pub fn kernel_presentation(g: &OverG) -> Result<KernelPresentation> {
    let t = todd_coxeter(g)?;
    reidemeister_schreier(&t, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AmbientGroup;
    use std::sync::Arc;

    fn over_cyclic(n: usize, imgs: &[usize]) -> OverG {
        OverG::new(
            FpPresentation::free(["x", "y"]),
            Arc::new(AmbientGroup::cyclic(n).unwrap()),
            imgs.iter().map(|&i| GElem::Fin(i)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn index_two_schreier_generators() {
        let g = over_cyclic(2, &[1, 0]);
        let t = todd_coxeter(&g).unwrap();
        assert_eq!(t.len(), 2);
        let k = reidemeister_schreier(&t, &g).unwrap();
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        assert_eq!(k.schreier_generators, vec![y.clone(), x.pow(2), x.mul(&y).mul(&x.inverse())]);
        assert!(k.presentation.relators.is_empty());
    }

    #[test]
    fn schreier_rank_formula() {
        for (n, imgs) in [(1, [0, 0]), (2, [1, 0]), (3, [1, 0]), (4, [1, 2]), (6, [1, 3])] {
            let k = kernel_presentation(&over_cyclic(n, &imgs)).unwrap();
            assert_eq!(k.rank(), 1 + n, "order {n}");
        }
    }

    #[test]
    fn trivial_g_returns_presentation() {
        let p = FpPresentation::new(
            vec!["a".into(), "b".into()],
            vec![FreeWord::from_syllables([(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)])],
        )
        .unwrap();
        let k = kernel_presentation(&OverG::trivial(p.clone())).unwrap();
        assert_eq!(k.presentation.relators, p.relators);
        assert_eq!(k.schreier_generators, p.generators());
    }

    #[test]
    fn rewrite_roundtrip() {
        let g = over_cyclic(4, &[1, 2]);
        let k = kernel_presentation(&g).unwrap();
        let w = FreeWord::from_syllables([(0, 3), (1, 1), (0, -1), (1, 1), (0, -2)]);
        assert!(g.kernel_membership(&w));
        let rw = k.rewrite(&w).unwrap();
        assert_eq!(rw.substitute(&k.schreier_generators), w);
    }
}
