//! Polycyclic presentations and collection to normal form.
//!
//! Elements are exponent vectors `(e_1, …, e_n)` standing for
//! `g_1^{e_1} ⋯ g_n^{e_n}` with `0 ≤ e_i < m_i` whenever `m_i > 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::intmat::{abelian_invariants, from_i64, AbelianInvariants, Lattice};

/// A polycyclic presentation.
///
/// `orders[i] == 0` means `g_i` has infinite relative order. `powers[i]` is
/// the normal form of `g_i^{m_i}` and `conj[i][j]` (for `i < j`) the normal
/// form of `g_j^{g_i} = g_i^{-1} g_j g_i`; `None` means `g_j` commutes with `g_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcPresentation {
    pub orders: Vec<i64>,
    pub weights: Vec<usize>,
    pub powers: Vec<Option<Vec<i64>>>,
    pub conj: Vec<Vec<Option<Vec<i64>>>>,
}

impl PcPresentation {
    /// Free abelian group of the given rank, all generators of weight 1.
    pub fn free_abelian(rank: usize) -> Self {
        PcPresentation::abelian(&vec![0; rank])
    }

    /// Direct product of cyclic groups with the given orders (0 = infinite).
    pub fn abelian(orders: &[i64]) -> Self {
        let n = orders.len();
        PcPresentation {
            orders: orders.to_vec(),
            weights: vec![1; n],
            powers: orders.iter().map(|&m| (m > 0).then(|| vec![0; n])).collect(),
            conj: vec![vec![None; n]; n],
        }
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        PcPresentation::abelian(&[])
    }

    /// `⟨g1, g2, g3 | [g1,g2] = g3, g3 central⟩`, i.e. `g2^{g1} = g2 g3^-1`.
    pub fn heisenberg() -> Self {
        let mut p = PcPresentation::free_abelian(3);
        p.weights = vec![1, 1, 2];
        p.conj[0][1] = Some(vec![0, 1, -1]);
        p
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn hirsch_length(&self) -> usize {
        self.orders.iter().filter(|&&m| m == 0).count()
    }

    pub fn class(&self) -> usize {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Structural validation: shapes, tails only in higher generators, reduced exponents.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let bad = |m: String| Err(Error::Inconsistent(m));
        if self.weights.len() != n || self.powers.len() != n || self.conj.len() != n {
            return bad("table sizes do not match generator count".into());
        }
        let check_nf = |v: &Vec<i64>, above: usize, what: &str| -> Result<()> {
            if v.len() != n {
                return Err(Error::Inconsistent(format!("{what}: wrong vector length")));
            }
            for (k, &e) in v.iter().enumerate() {
                if e != 0 && k <= above {
                    return Err(Error::Inconsistent(format!("{what}: involves generator {}", k + 1)));
                }
                if self.orders[k] > 0 && (e < 0 || e >= self.orders[k]) {
                    return Err(Error::Inconsistent(format!("{what}: exponent not reduced")));
                }
            }
            Ok(())
        };
        for i in 0..n {
            if self.orders[i] < 0 || self.orders[i] == 1 {
                return bad(format!("generator {} has relative order {}", i + 1, self.orders[i]));
            }
            match (&self.powers[i], self.orders[i] > 0) {
                (Some(w), true) => check_nf(w, i, &format!("power of g{}", i + 1))?,
                (None, false) => {}
                (None, true) => return bad(format!("missing power relation for g{}", i + 1)),
                (Some(_), false) => return bad(format!("power relation on infinite g{}", i + 1)),
            }
            if self.conj[i].len() != n {
                return bad("conjugation table has wrong shape".into());
            }
            for j in 0..n {
                if let Some(w) = &self.conj[i][j] {
                    if j <= i {
                        return bad(format!("conjugate g{}^g{} stored below the diagonal", j + 1, i + 1));
                    }
                    let mut rest = w.clone();
                    if rest[j] != 1 {
                        return bad(format!("g{}^g{} must start with g{}", j + 1, i + 1, j + 1));
                    }
                    rest[j] = 0;
                    check_nf(&rest, j, &format!("conjugate g{}^g{}", j + 1, i + 1))?;
                }
            }
        }
        Ok(())
    }

    /// Quotient by the generators with index `>= k` (must span a normal subgroup).
    pub fn truncate(&self, k: usize) -> PcPresentation {
        let cut = |v: &Vec<i64>| v[..k].to_vec();
        PcPresentation {
            orders: self.orders[..k].to_vec(),
            weights: self.weights[..k].to_vec(),
            powers: self.powers[..k].iter().map(|p| p.as_ref().map(cut)).collect(),
            conj: self.conj[..k]
                .iter()
                .map(|row| {
                    row[..k]
                        .iter()
                        .map(|c| {
                            c.as_ref().map(cut).and_then(|v| {
                                // a conjugate that became trivial modulo the cut commutes
                                let j = v.iter().position(|&e| e != 0)?;
                                (v.iter().enumerate().any(|(t, &e)| t != j && e != 0)).then_some(v)
                            })
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Number of generators of weight at most `c`.
    pub fn prefix_of_class(&self, c: usize) -> usize {
        self.weights.iter().take_while(|&&w| w <= c).count()
    }

    pub fn truncate_to_class(&self, c: usize) -> PcPresentation {
        self.truncate(self.prefix_of_class(c))
    }

    /// Abelian invariants of the weight-`w` layer, read from the power relations.
    pub fn layer_invariants(&self, w: usize) -> AbelianInvariants {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| self.weights[i] == w).collect();
        let rows: Vec<Vec<i64>> = idx
            .iter()
            .filter(|&&i| self.orders[i] > 0)
            .map(|&i| {
                let rhs = self.powers[i].as_ref().unwrap();
                idx.iter()
                    .map(|&k| if k == i { self.orders[i] } else { 0 } - rhs[k])
                    .collect()
            })
            .collect();
        abelian_invariants(&from_i64(&rows), idx.len()).expect("layer invariants fit in u64")
    }

    pub fn layers(&self) -> Vec<AbelianInvariants> {
        (1..=self.class()).map(|w| self.layer_invariants(w)).collect()
    }
}

/// A group given by a polycyclic presentation, with the derived tables for
/// conjugation by inverses.
#[derive(Clone, Debug)]
pub struct PcGroup {
    pres: PcPresentation,
    /// conj_inv[i][k] = g_k^{g_i^{-1}} for k > i
    conj_inv: Vec<Vec<Option<Vec<i64>>>>,
    /// g_i commutes with every later generator
    central_below: Vec<bool>,
}

impl PcGroup {
    pub fn new(pres: PcPresentation) -> Result<Self> {
        pres.validate()?;
        let n = pres.len();
        let central_below = (0..n).map(|i| pres.conj[i].iter().all(Option::is_none)).collect();
        let mut g = PcGroup {
            pres,
            conj_inv: vec![vec![None; n]; n],
            central_below,
        };
        // φ = conjugation by g_i^{-1}; from g_k^{g_i} = g_k d get φ(g_k) = g_k φ(d)^{-1}
        for i in (0..n).rev() {
            for k in (i + 1..n).rev() {
                let Some(c) = g.pres.conj[i][k].clone() else { continue };
                let mut d = c;
                d[k] = 0;
                let phi_d = g.apply_conj(&d, i, -1);
                let mut gk = vec![0; n];
                gk[k] = 1;
                let img = g.mul(&gk, &g.inv(&phi_d));
                g.conj_inv[i][k] = (img != gk).then_some(img);
            }
        }
        Ok(g)
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn len(&self) -> usize {
        self.pres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pres.is_empty()
    }

    pub fn gen(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.len()];
        v[i] = 1;
        v
    }

    pub fn order_of_gen(&self, i: usize) -> i64 {
        self.pres.orders[i]
    }

    /// Image of an element supported on generators `> i` under conjugation by `g_i^{sign}`.
    fn apply_conj(&self, s: &[i64], i: usize, sign: i64) -> Vec<i64> {
        let n = self.len();
        let mut acc = vec![0; n];
        for k in i + 1..n {
            if s[k] == 0 {
                continue;
            }
            let table = if sign > 0 { &self.pres.conj[i][k] } else { &self.conj_inv[i][k] };
            match table {
                None => self.mul_gen(&mut acc, k, s[k]),
                Some(img) => {
                    let p = self.pow(img, s[k]);
                    acc = self.mul(&acc, &p);
                }
            }
        }
        acc
    }

    /// `x := x · g_j^e`
    fn mul_gen(&self, x: &mut [i64], j: usize, e: i64) {
        if e == 0 {
            return;
        }
        let n = self.len();
        let suffix_zero = x[j + 1..].iter().all(|&v| v == 0);
        let mut s: Vec<i64> = vec![0; n];
        if !suffix_zero {
            s[j + 1..].copy_from_slice(&x[j + 1..]);
            if !self.central_below[j] {
                for _ in 0..e.unsigned_abs() {
                    s = self.apply_conj(&s, j, e.signum());
                }
            }
        }
        let t = x[j] + e;
        let m = self.pres.orders[j];
        let (r, q) = if m > 0 { (t.rem_euclid(m), t.div_euclid(m)) } else { (t, 0) };
        x[j] = r;
        let mut rest = if q != 0 {
            self.pow(self.pres.powers[j].as_ref().unwrap(), q)
        } else {
            vec![0; n]
        };
        if !suffix_zero {
            rest = if q == 0 { s } else { self.mul(&rest, &s) };
        }
        x[j + 1..].copy_from_slice(&rest[j + 1..]);
    }

    /// Normal form of a word given as `(generator, exponent)` syllables.
    pub fn collect(&self, word: &[(usize, i64)]) -> Vec<i64> {
        let mut x = self.identity();
        for &(g, e) in word {
            self.mul_gen(&mut x, g, e);
        }
        x
    }

    /// The consistency test pairs `(lhs, rhs)`; a presentation is consistent
    /// iff every pair agrees.
    pub fn consistency_pairs(&self) -> Vec<(String, Vec<i64>, Vec<i64>)> {
        let n = self.len();
        let ord = &self.pres.orders;
        let g = |i: usize, e: i64| {
            let mut v = vec![0; n];
            v[i] = e;
            v
        };
        let pw = |i: usize| self.pres.powers[i].clone().unwrap();
        let mut out = Vec::new();
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let lhs = self.mul(&self.mul(&g(k, 1), &g(j, 1)), &g(i, 1));
                    let rhs = self.mul(&g(k, 1), &self.mul(&g(j, 1), &g(i, 1)));
                    out.push((format!("(g{} g{}) g{}", k + 1, j + 1, i + 1), lhs, rhs));
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                if ord[j] > 0 {
                    let lhs = self.mul(&pw(j), &g(i, 1));
                    let rhs = self.mul(&g(j, ord[j] - 1), &self.mul(&g(j, 1), &g(i, 1)));
                    out.push((format!("g{}^m g{}", j + 1, i + 1), lhs, rhs));
                }
                if ord[i] > 0 {
                    let lhs = self.mul(&self.mul(&g(j, 1), &g(i, ord[i] - 1)), &g(i, 1));
                    let rhs = self.mul(&g(j, 1), &pw(i));
                    out.push((format!("g{} g{}^m", j + 1, i + 1), lhs, rhs));
                } else {
                    let lhs = self.mul(&self.mul(&g(j, 1), &g(i, -1)), &g(i, 1));
                    out.push((format!("(g{} g{}^-1) g{}", j + 1, i + 1, i + 1), lhs, g(j, 1)));
                }
                if ord[j] == 0 {
                    let lhs = self.mul(&g(j, -1), &self.mul(&g(j, 1), &g(i, 1)));
                    out.push((format!("g{}^-1 (g{} g{})", j + 1, j + 1, i + 1), lhs, g(i, 1)));
                    if ord[i] == 0 {
                        let lhs = self.mul(&self.mul(&g(j, -1), &g(i, -1)), &g(i, 1));
                        out.push((format!("(g{}^-1 g{}^-1) g{}", j + 1, i + 1, i + 1), lhs, g(j, -1)));
                    }
                }
            }
        }
        for i in 0..n {
            if ord[i] > 0 {
                let lhs = self.mul(&pw(i), &g(i, 1));
                let rhs = self.mul(&g(i, 1), &pw(i));
                out.push((format!("g{}^m g{}", i + 1, i + 1), lhs, rhs));
            }
        }
        out
    }

    pub fn check_consistency(&self) -> Result<()> {
        match self.consistency_pairs().into_iter().find(|(_, l, r)| l != r) {
            Some((what, l, r)) => Err(Error::Inconsistent(format!("{what}: {l:?} vs {r:?}"))),
            None => Ok(()),
        }
    }

    /// Weights describe the lower central series: commutators respect
    /// weights and each layer above the first is generated by commutators with
    /// weight-one generators.
    pub fn weights_are_lcs(&self) -> bool {
        let p = &self.pres;
        let n = self.len();
        if p.weights.windows(2).any(|w| w[0] > w[1]) || p.weights.first().is_some_and(|&w| w != 1) {
            return false;
        }
        // [g_j, g_i] = g_j^{-1} g_j^{g_i}
        let comm_of = |i: usize, j: usize| -> Vec<i64> {
            match &p.conj[i][j] {
                None => vec![0; n],
                Some(c) => self.mul(&self.inv(&self.gen(j)), c),
            }
        };
        for j in 0..n {
            for i in 0..j {
                let c = comm_of(i, j);
                if c.iter().enumerate().any(|(k, &e)| e != 0 && p.weights[k] < p.weights[i] + p.weights[j]) {
                    return false;
                }
            }
        }
        for w in 2..=p.class() {
            let idx: Vec<usize> = (0..n).filter(|&k| p.weights[k] == w).collect();
            let mut lat = Lattice::new(idx.len());
            for &i in idx.iter().filter(|&&i| p.orders[i] > 0) {
                let rhs = p.powers[i].as_ref().unwrap();
                lat.insert(from_i64(&[idx.iter().map(|&k| if k == i { p.orders[i] } else { 0 } - rhs[k]).collect()]).remove(0));
            }
            for i in (0..n).filter(|&i| p.weights[i] == 1) {
                for j in (0..n).filter(|&j| p.weights[j] == w - 1) {
                    let c = if i < j { comm_of(i, j) } else if j < i { comm_of(j, i) } else { continue };
                    lat.insert(from_i64(&[idx.iter().map(|&k| c[k]).collect()]).remove(0));
                }
            }
            if !lat.is_full() {
                return false;
            }
        }
        true
    }

    /// Exponent of `x` at depth (first nonzero coordinate).
    pub fn depth(&self, x: &[i64]) -> Option<usize> {
        x.iter().position(|&e| e != 0)
    }
}

impl Group for PcGroup {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.len()]
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        let mut x = a.clone();
        for (j, &e) in b.iter().enumerate() {
            if e != 0 {
                self.mul_gen(&mut x, j, e);
            }
        }
        x
    }

    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        let mut x = self.identity();
        for j in (0..self.len()).rev() {
            if a[j] != 0 {
                self.mul_gen(&mut x, j, -a[j]);
            }
        }
        x
    }

    fn is_identity(&self, a: &Vec<i64>) -> bool {
        a.iter().all(|&e| e == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_collection() {
        let h = PcGroup::new(PcPresentation::heisenberg()).unwrap();
        h.check_consistency().unwrap();
        assert_eq!(h.collect(&[(1, 1), (0, 1)]), vec![1, 1, -1]);
        // [g1, g2] = g3
        assert_eq!(h.comm(&h.gen(0), &h.gen(1)), h.gen(2));
        assert!(h.weights_are_lcs());
    }

    #[test]
    fn abelian_and_cyclic() {
        let z2 = PcGroup::new(PcPresentation::free_abelian(2)).unwrap();
        assert_eq!(z2.collect(&[(1, 1), (0, 1)]), vec![1, 1]);
        let c4 = PcGroup::new(PcPresentation::abelian(&[4])).unwrap();
        assert_eq!(c4.collect(&[(0, 15)]), vec![3]);
        assert_eq!(c4.inv(&vec![1]), vec![3]);
    }

    #[test]
    fn inconsistent_detected() {
        // g1^2 = 1 but g2^{g1} = g2 g3 with g3 central and infinite
        let mut p = PcPresentation::abelian(&[2, 0, 0]);
        p.conj[0][1] = Some(vec![0, 1, 1]);
        let g = PcGroup::new(p).unwrap();
        assert!(matches!(g.check_consistency(), Err(Error::Inconsistent(_))));
        // same action on Z/2 is fine
        let mut q = PcPresentation::abelian(&[2, 0, 2]);
        q.conj[0][1] = Some(vec![0, 1, 1]);
        PcGroup::new(q).unwrap().check_consistency().unwrap();
    }

    #[test]
    fn truncation() {
        let h = PcPresentation::heisenberg();
        let t = h.truncate_to_class(1);
        assert_eq!(t, PcPresentation::free_abelian(2));
        assert_eq!(h.layers(), vec![AbelianInvariants::free(2), AbelianInvariants::free(1)]);
    }
}
