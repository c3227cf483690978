//! Nilpotent quotients of finitely presented groups, one class at a time,
//! and the tails covering of a pc presentation that the step is built on.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::intmat::{from_i64, smith, Lattice, Mat};
use crate::pc::{PcGroup, PcPresentation};
use crate::subgroup::Ips;
use crate::words::{FpPresentation, FreeWord};

/// Which relations of a pc presentation receive a central tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailPolicy {
    /// Every power and conjugate relation (the Schur covering).
    All,
    /// Conjugate relations only when the weights add up to at most `class`.
    UpToClass(usize),
}

/// `Q` extended by a central subgroup `A = Z^T / C` of tails.
#[derive(Clone, Debug)]
pub struct Covering {
    pub base: PcPresentation,
    /// number of raw tails
    pub tails: usize,
    pub power_tail: Vec<Option<usize>>,
    pub conj_tail: Vec<Vec<Option<usize>>>,
    pub extra_tail: Vec<usize>,
    /// consistency relations among raw tails (Hermite basis)
    pub relations: Mat,
    /// orders of the generators of `A` after diagonalization (0 = infinite)
    pub a_orders: Vec<i64>,
    /// raw tail `t` ↦ coordinates in `A`
    pub a_image: Vec<Vec<i64>>,
    /// `Q ⋉ A` as a pc group (A central)
    pub group: PcGroup,
}

impl Covering {
    pub fn build(q: &PcPresentation, policy: TailPolicy, extra: usize) -> Result<Covering> {
        let n = q.len();
        let mut t = 0;
        let mut power_tail = vec![None; n];
        for i in 0..n {
            if q.orders[i] > 0 {
                power_tail[i] = Some(t);
                t += 1;
            }
        }
        let mut conj_tail = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let take = match policy {
                    TailPolicy::All => true,
                    TailPolicy::UpToClass(c) => q.weights[i] + q.weights[j] <= c,
                };
                if take {
                    conj_tail[i][j] = Some(t);
                    t += 1;
                }
            }
        }
        let extra_tail: Vec<usize> = (t..t + extra).collect();
        t += extra;

        // raw covering with free central tails
        let raw_unit = |k: usize| {
            let mut v = vec![0; t];
            v[k] = 1;
            v
        };
        let raw = extend(q, t, &|i| power_tail[i].map(raw_unit), &|i, j| conj_tail[i][j].map(raw_unit), &vec![0; t]);
        let raw_group = PcGroup::new(raw)?;
        let mut lat = Lattice::new(t);
        for (what, lhs, rhs) in consistency_on_prefix(&raw_group, n) {
            if lhs[..n] != rhs[..n] {
                return Err(Error::Inconsistent(format!("base presentation fails {what}")));
            }
            let diff: Vec<BigInt> = (n..n + t).map(|k| BigInt::from(lhs[k] - rhs[k])).collect();
            if diff.iter().any(|x| !x.is_zero()) {
                lat.insert(diff);
            }
        }
        let relations = lat.basis();
        let (diag, v) = smith(&relations, t);
        let mut kept = Vec::new();
        let mut a_orders = Vec::new();
        for j in 0..t {
            let d = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                kept.push(j);
                a_orders.push(d.to_i64().ok_or_else(|| Error::Internal("tail order too large".into()))?);
            }
        }
        let mut a_image = Vec::with_capacity(t);
        for row in &v {
            let mut img = Vec::with_capacity(kept.len());
            for (idx, &j) in kept.iter().enumerate() {
                let m = a_orders[idx];
                let y = if m > 0 { row[j].mod_floor_i64(m)? } else { big_to_i64(&row[j])? };
                img.push(y);
            }
            a_image.push(img);
        }
        let a_len = kept.len();
        let unit = |k: usize| a_image[k].clone();
        let mut e = extend(q, a_len, &|i| power_tail[i].map(unit), &|i, j| conj_tail[i][j].map(unit), &a_orders);
        // relative orders of A
        for (idx, &m) in a_orders.iter().enumerate() {
            e.orders[n + idx] = m;
            if m > 0 {
                e.powers[n + idx] = Some(vec![0; n + a_len]);
            }
        }
        let group = PcGroup::new(e)?;
        Ok(Covering {
            base: q.clone(),
            tails: t,
            power_tail,
            conj_tail,
            extra_tail,
            relations,
            a_orders,
            a_image,
            group,
        })
    }

    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    /// Element `(q, a)` of the covering.
    pub fn element(&self, q: &[i64], a: &[i64]) -> Vec<i64> {
        let mut v = q.to_vec();
        v.extend_from_slice(a);
        v
    }

    pub fn a_part<'a>(&self, x: &'a [i64]) -> &'a [i64] {
        &x[self.base_len()..]
    }

    pub fn q_part<'a>(&self, x: &'a [i64]) -> &'a [i64] {
        &x[..self.base_len()]
    }
}

trait ModFloor {
    fn mod_floor_i64(&self, m: i64) -> Result<i64>;
}

impl ModFloor for BigInt {
    fn mod_floor_i64(&self, m: i64) -> Result<i64> {
        use num_integer::Integer;
        big_to_i64(&self.mod_floor(&BigInt::from(m)))
    }
}

fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Internal(format!("integer {x} exceeds 64 bits")))
}

/// `q` with `k` extra central generators of weight `class + 1`, tails added to relations.
fn extend(
    q: &PcPresentation,
    k: usize,
    power_tail: &dyn Fn(usize) -> Option<Vec<i64>>,
    conj_tail: &dyn Fn(usize, usize) -> Option<Vec<i64>>,
    orders: &[i64],
) -> PcPresentation {
    let n = q.len();
    let total = n + k;
    let pad = |v: &[i64], tail: Option<Vec<i64>>| {
        let mut out = v.to_vec();
        out.extend(tail.unwrap_or_else(|| vec![0; k]));
        out
    };
    let w = q.class() + 1;
    let mut p = PcPresentation {
        orders: q.orders.iter().copied().chain(std::iter::repeat_n(0, k)).collect(),
        weights: q.weights.iter().copied().chain(std::iter::repeat_n(w, k)).collect(),
        powers: vec![None; total],
        conj: vec![vec![None; total]; total],
    };
    let _ = orders;
    for i in 0..n {
        if let Some(rhs) = &q.powers[i] {
            p.powers[i] = Some(pad(rhs, power_tail(i)));
        }
        for j in i + 1..n {
            let tail = conj_tail(i, j);
            let base = match &q.conj[i][j] {
                Some(c) => c.clone(),
                None => {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    e
                }
            };
            let has_tail = tail.as_ref().is_some_and(|t| t.iter().any(|&x| x != 0));
            if q.conj[i][j].is_some() || has_tail {
                p.conj[i][j] = Some(pad(&base, tail));
            }
        }
    }
    p
}

/// Consistency test pairs that only involve the first `n` generators.
fn consistency_on_prefix(g: &PcGroup, n: usize) -> Vec<(String, Vec<i64>, Vec<i64>)> {
    let total = g.len();
    let mut restricted = g.presentation().truncate(n);
    // the restricted presentation only drives which tests exist; evaluate in g
    restricted.weights.truncate(n);
    let ord = &restricted.orders;
    let e = |i: usize, k: i64| {
        let mut v = vec![0; total];
        v[i] = k;
        v
    };
    let pw = |i: usize| g.presentation().powers[i].clone().unwrap();
    let mut out = Vec::new();
    for k in 0..n {
        for j in 0..k {
            for i in 0..j {
                let lhs = g.mul(&g.mul(&e(k, 1), &e(j, 1)), &e(i, 1));
                let rhs = g.mul(&e(k, 1), &g.mul(&e(j, 1), &e(i, 1)));
                out.push((format!("(g{} g{}) g{}", k + 1, j + 1, i + 1), lhs, rhs));
            }
        }
    }
    for j in 0..n {
        for i in 0..j {
            if ord[j] > 0 {
                let lhs = g.mul(&pw(j), &e(i, 1));
                let rhs = g.mul(&e(j, ord[j] - 1), &g.mul(&e(j, 1), &e(i, 1)));
                out.push((format!("g{}^m g{}", j + 1, i + 1), lhs, rhs));
            }
            if ord[i] > 0 {
                let lhs = g.mul(&g.mul(&e(j, 1), &e(i, ord[i] - 1)), &e(i, 1));
                let rhs = g.mul(&e(j, 1), &pw(i));
                out.push((format!("g{} g{}^m", j + 1, i + 1), lhs, rhs));
            } else {
                let lhs = g.mul(&g.mul(&e(j, 1), &e(i, -1)), &e(i, 1));
                out.push((format!("(g{} g{}^-1) g{}", j + 1, i + 1, i + 1), lhs, e(j, 1)));
            }
            if ord[j] == 0 {
                let lhs = g.mul(&e(j, -1), &g.mul(&e(j, 1), &e(i, 1)));
                out.push((format!("g{}^-1 (g{} g{})", j + 1, j + 1, i + 1), lhs, e(i, 1)));
                if ord[i] == 0 {
                    let lhs = g.mul(&g.mul(&e(j, -1), &e(i, -1)), &e(i, 1));
                    out.push((format!("(g{}^-1 g{}^-1) g{}", j + 1, i + 1, i + 1), lhs, e(j, -1)));
                }
            }
        }
    }
    for i in 0..n {
        if ord[i] > 0 {
            let lhs = g.mul(&pw(i), &e(i, 1));
            let rhs = g.mul(&e(i, 1), &pw(i));
            out.push((format!("g{}^m g{}", i + 1, i + 1), lhs, rhs));
        }
    }
    out
}

/// Number of basic commutators of weight `w` on `r` generators.
pub fn witt_number(r: usize, w: usize) -> u128 {
    fn mobius(mut n: usize) -> i128 {
        let mut m = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let mut s: i128 = 0;
    for d in 1..=w {
        if w.is_multiple_of(d) {
            s += mobius(d) * (r as i128).pow((w / d) as u32);
        }
    }
    (s / w as i128) as u128
}

/// `π / γ_{c+1}(π)` as a weighted pc presentation with the quotient map.
#[derive(Clone, Debug)]
pub struct NilpotentQuotient {
    pub class: usize,
    pub group: PcGroup,
    /// image of each generator of `π`
    pub images: Vec<Vec<i64>>,
}

impl NilpotentQuotient {
    pub fn presentation(&self) -> &PcPresentation {
        self.group.presentation()
    }

    /// Layer invariants, one per weight.
    pub fn layers(&self) -> Vec<crate::intmat::AbelianInvariants> {
        let p = self.presentation();
        (1..=self.class).map(|w| p.layer_invariants(w)).collect()
    }

    /// Number of pc generators of each weight.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let p = self.presentation();
        (1..=self.class).map(|w| p.weights.iter().filter(|&&x| x == w).count()).collect()
    }

    /// Image of a word of `π`.
    pub fn map_word(&self, w: &FreeWord) -> Vec<i64> {
        self.group.eval_word(w, &self.images)
    }

    /// Quotient of lower class, obtained by cutting the presentation.
    pub fn truncate(&self, c: usize) -> Result<NilpotentQuotient> {
        if c > self.class {
            return Err(Error::Level(format!("cannot raise class {} to {c} by truncation", self.class)));
        }
        let k = self.presentation().prefix_of_class(c);
        Ok(NilpotentQuotient {
            class: c,
            group: PcGroup::new(self.presentation().truncate(k))?,
            images: self.images.iter().map(|v| v[..k].to_vec()).collect(),
        })
    }
}

/// Class-`c` quotient of the group presented by `p`.
pub fn nilpotent_quotient(p: &FpPresentation, c: usize) -> Result<NilpotentQuotient> {
    let mut q = NilpotentQuotient {
        class: 0,
        group: PcGroup::new(PcPresentation::trivial())?,
        images: vec![Vec::new(); p.ngens()],
    };
    for _ in 0..c {
        q = nq_step(p, &q)?;
    }
    Ok(q)
}

/// One class step `π/γ_{k+1} → π/γ_{k+2}`.
pub fn nq_step(p: &FpPresentation, q: &NilpotentQuotient) -> Result<NilpotentQuotient> {
    let k = q.class;
    let base = q.presentation();
    let n = base.len();
    let cov = Covering::build(base, TailPolicy::UpToClass(k + 1), p.ngens())?;
    let e = &cov.group;
    let lifts: Vec<Vec<i64>> = (0..p.ngens())
        .map(|s| cov.element(&q.images[s], &cov.a_image[cov.extra_tail[s]]))
        .collect();
    let h = Ips::generated(e, &lifts);
    for d in 0..n {
        if h.lead(d) != Some(1) {
            return Err(Error::Internal(format!("generator images miss pc generator {}", d + 1)));
        }
    }
    // lifts b_d of the old generators, with Q-part exactly g_d
    let mut b: Vec<Vec<i64>> = vec![Vec::new(); n];
    for d in (0..n).rev() {
        let mut x = h.entries().find(|(dd, _, _)| *dd == d).unwrap().1.clone();
        for d2 in d + 1..n {
            let c = x[d2];
            if c != 0 {
                x = e.mul(&x, &e.pow(&b[d2], -c));
            }
        }
        b[d] = x;
    }
    // H ∩ A and its relations
    let a_entries: Vec<(usize, Vec<i64>)> = h.entries().filter(|(d, _, _)| *d >= n).map(|(d, x, _)| (d, x.clone())).collect();
    let r = a_entries.len();
    let coords_in_h = |x: &[i64]| -> Result<Vec<i64>> {
        if x[..n].iter().any(|&v| v != 0) {
            return Err(Error::Internal("element expected in the central layer".into()));
        }
        let c = h
            .coords(x)
            .ok_or_else(|| Error::Internal("central element outside the lifted subgroup".into()))?;
        let mut out = vec![0; r];
        for (d, v) in c {
            let idx = a_entries.iter().position(|(dd, _)| *dd == d).unwrap();
            out[idx] = v;
        }
        Ok(out)
    };
    let mut rels: Vec<Vec<i64>> = Vec::new();
    for (idx, (d, x)) in a_entries.iter().enumerate() {
        let m = e.order_of_gen(*d);
        if m > 0 {
            let k = m / x[*d];
            let mut row = coords_in_h(&e.pow(x, k))?;
            row.iter_mut().for_each(|v| *v = -*v);
            row[idx] += k;
            rels.push(row);
        }
    }
    for rel in &p.relators {
        rels.push(coords_in_h(&e.eval_word(rel, &lifts))?);
    }
    let (diag, v2) = smith(&from_i64(&rels), r);
    let mut kept = Vec::new();
    let mut layer_orders = Vec::new();
    for j in 0..r {
        let d = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        if !d.is_one() {
            kept.push(j);
            layer_orders.push(big_to_i64(&d)?);
        }
    }
    let l = kept.len();
    let bound = witt_number(p.ngens(), k + 1);
    if l as u128 > bound {
        return Err(Error::Internal(format!("layer {} has {l} generators, above the bound {bound}", k + 1)));
    }
    let to_layer = |c: &[i64]| -> Result<Vec<i64>> {
        let big: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let y = crate::intmat::row_times_mat(&big, &v2, r);
        kept.iter()
            .zip(&layer_orders)
            .map(|(&j, &m)| if m > 0 { y[j].mod_floor_i64(m) } else { big_to_i64(&y[j]) })
            .collect()
    };
    // new normal form of an element of H
    let decompose = |z: &[i64]| -> Result<Vec<i64>> {
        let mut prod = e.identity();
        for d in 0..n {
            if z[d] != 0 {
                prod = e.mul(&prod, &e.pow(&b[d], z[d]));
            }
        }
        let rest = e.mul(&e.inv(&prod), &z.to_vec());
        let mut out = z[..n].to_vec();
        out.extend(to_layer(&coords_in_h(&rest)?)?);
        Ok(out)
    };
    let total = n + l;
    let mut np = PcPresentation {
        orders: base.orders.iter().copied().chain(layer_orders.iter().copied()).collect(),
        weights: base.weights.iter().copied().chain(std::iter::repeat_n(k + 1, l)).collect(),
        powers: vec![None; total],
        conj: vec![vec![None; total]; total],
    };
    for i in 0..n {
        if base.orders[i] > 0 {
            np.powers[i] = Some(decompose(&e.pow(&b[i], base.orders[i]))?);
        }
        for j in i + 1..n {
            let c = decompose(&e.conj(&b[j], &b[i]))?;
            let mut ej = vec![0; total];
            ej[j] = 1;
            np.conj[i][j] = (c != ej).then_some(c);
        }
    }
    for (idx, &m) in layer_orders.iter().enumerate() {
        if m > 0 {
            np.powers[n + idx] = Some(vec![0; total]);
        }
    }
    let images = lifts.iter().map(|z| decompose(z)).collect::<Result<Vec<_>>>()?;
    Ok(NilpotentQuotient {
        class: k + 1,
        group: PcGroup::new(np)?,
        images,
    })
}
