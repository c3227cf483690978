//! Induced polycyclic sequences for subgroups of pc groups, optionally
//! carrying a "shadow" in a second group.
//!
//! The shadow turns subgroup closure into homomorphism construction: adding
//! pairs `(x, φ(x))` builds the graph of `φ` restricted to the generated
//! subgroup, and a pair that sifts to `(1, s)` with `s ≠ 1` shows `φ` is not
//! well defined.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::rc::Rc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::pc::PcGroup;

/// The trivial shadow.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoShadow;

impl Group for NoShadow {
    type Elem = ();
    fn identity(&self) {}
    fn mul(&self, _: &(), _: &()) {}
    fn inv(&self, _: &()) {}
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Identity,
    Input(usize),
    Mul(usize, usize),
    Inv(usize),
    Pow(usize, i64),
}

/// Shadow that records how each element was built from numbered inputs, so
/// the construction can be replayed in another group. Relations are never
/// detected.
#[derive(Clone, Debug)]
pub struct Slp {
    steps: Rc<RefCell<Vec<Step>>>,
}

impl Default for Slp {
    fn default() -> Self {
        Slp {
            steps: Rc::new(RefCell::new(vec![Step::Identity])),
        }
    }
}

impl Slp {
    fn push(&self, s: Step) -> usize {
        let mut steps = self.steps.borrow_mut();
        steps.push(s);
        steps.len() - 1
    }

    pub fn input(&self, k: usize) -> usize {
        self.push(Step::Input(k))
    }

    /// Values of `targets` when input `k` is `inputs[k]`.
    pub fn replay<G: Group>(&self, g: &G, inputs: &[G::Elem], targets: &[usize]) -> Vec<G::Elem> {
        let steps = self.steps.borrow();
        let mut needed = vec![false; steps.len()];
        for &t in targets {
            needed[t] = true;
        }
        for i in (0..steps.len()).rev() {
            if needed[i] {
                match steps[i] {
                    Step::Mul(a, b) => {
                        needed[a] = true;
                        needed[b] = true;
                    }
                    Step::Inv(a) | Step::Pow(a, _) => needed[a] = true,
                    Step::Identity | Step::Input(_) => {}
                }
            }
        }
        let mut value: Vec<Option<G::Elem>> = vec![None; steps.len()];
        for i in 0..steps.len() {
            if !needed[i] {
                continue;
            }
            let v = |j: usize| value[j].as_ref().expect("operands precede results");
            value[i] = Some(match steps[i] {
                Step::Identity => g.identity(),
                Step::Input(k) => inputs[k].clone(),
                Step::Mul(a, b) => g.mul(v(a), v(b)),
                Step::Inv(a) => g.inv(v(a)),
                Step::Pow(a, e) => g.pow(v(a), e),
            });
        }
        targets.iter().map(|&t| value[t].clone().expect("target evaluated")).collect()
    }
}

impl Group for Slp {
    type Elem = usize;

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        match (*a, *b) {
            (0, x) | (x, 0) => x,
            (a, b) => self.push(Step::Mul(a, b)),
        }
    }

    fn inv(&self, a: &usize) -> usize {
        if *a == 0 {
            0
        } else {
            self.push(Step::Inv(*a))
        }
    }

    fn pow(&self, a: &usize, e: i64) -> usize {
        match (*a, e) {
            (0, _) | (_, 0) => 0,
            (a, 1) => a,
            (a, e) => self.push(Step::Pow(a, e)),
        }
    }

    fn is_identity(&self, _: &usize) -> bool {
        true
    }
}

#[derive(Clone, Debug)]
pub struct Ips<S: Group + Clone = NoShadow> {
    g: PcGroup,
    shadow: S,
    entries: Vec<Option<(Vec<i64>, S::Elem)>>,
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

impl Ips<NoShadow> {
    pub fn generated(g: &PcGroup, gens: &[Vec<i64>]) -> Self {
        let mut ips = Ips::new(g.clone(), NoShadow);
        for x in gens {
            ips.add(x.clone(), ()).expect("trivial shadow never conflicts");
        }
        ips
    }
}

impl<S: Group + Clone> Ips<S> {
    pub fn new(g: PcGroup, shadow: S) -> Self {
        let n = g.len();
        Ips {
            g,
            shadow,
            entries: vec![None; n],
        }
    }

    pub fn group(&self) -> &PcGroup {
        &self.g
    }

    pub fn shadow_group(&self) -> &S {
        &self.shadow
    }

    /// Entries `(depth, element, shadow)` in depth order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &Vec<i64>, &S::Elem)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(d, e)| e.as_ref().map(|(x, s)| (d, x, s)))
    }

    pub fn lead(&self, depth: usize) -> Option<i64> {
        self.entries[depth].as_ref().map(|(x, _)| x[depth])
    }

    pub fn len(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The subgroup is the whole group.
    pub fn is_whole(&self) -> bool {
        (0..self.g.len()).all(|d| self.lead(d) == Some(1))
    }

    /// Adds `x` (with shadow `sx`) and closes under products, inverses and conjugation.
    pub fn add(&mut self, x: Vec<i64>, sx: S::Elem) -> Result<()> {
        self.close(VecDeque::from([(x, sx)]), &[])
    }

    /// Adds `x` and closes to the normal closure under the given conjugators.
    pub fn add_normal(&mut self, x: Vec<i64>, sx: S::Elem, conjugators: &[(Vec<i64>, S::Elem)]) -> Result<()> {
        self.close(VecDeque::from([(x, sx)]), conjugators)
    }

    fn close(&mut self, mut queue: VecDeque<(Vec<i64>, S::Elem)>, conjugators: &[(Vec<i64>, S::Elem)]) -> Result<()> {
        while let Some((x, sx)) = queue.pop_front() {
            if let Some((d, y, sy)) = self.sift_insert(x, sx, &mut queue)? {
                // closure obligations for the new entry
                let (g, s) = (&self.g, &self.shadow);
                let m = g.order_of_gen(d);
                if m > 0 {
                    let k = m / y[d];
                    queue.push_back((g.pow(&y, k), s.pow(&sy, k)));
                }
                // pc relations of the induced sequence: the deeper entry
                // conjugated by the shallower one and its inverse
                for (d2, e, se) in self.entries() {
                    if d2 == d {
                        continue;
                    }
                    let ((lo, slo), (hi, shi)) = if d2 < d { ((e, se), (&y, &sy)) } else { ((&y, &sy), (e, se)) };
                    queue.push_back((g.conj(hi, lo), s.conj(shi, slo)));
                    queue.push_back((g.conj(hi, &g.inv(lo)), s.conj(shi, &s.inv(slo))));
                }
                for (c, sc) in conjugators {
                    queue.push_back((g.conj(&y, c), s.conj(&sy, sc)));
                    queue.push_back((g.conj(&y, &g.inv(c)), s.conj(&sy, &s.inv(sc))));
                }
            }
        }
        Ok(())
    }

    /// Sifts `x`; on reaching an empty or non-dividing depth installs a new
    /// entry and returns it. Displaced elements go back on the queue.
    fn sift_insert(
        &mut self,
        mut x: Vec<i64>,
        mut sx: S::Elem,
        queue: &mut VecDeque<(Vec<i64>, S::Elem)>,
    ) -> Result<Option<(usize, Vec<i64>, S::Elem)>> {
        let (g, s) = (self.g.clone(), self.shadow.clone());
        loop {
            let Some(d) = g.depth(&x) else {
                if s.is_identity(&sx) {
                    return Ok(None);
                }
                return Err(Error::NotAHomomorphism(
                    "an element sifting to the identity carries a nontrivial image".into(),
                ));
            };
            let m = g.order_of_gen(d);
            let a = x[d];
            match self.entries[d].clone() {
                Some((e, se)) if a % e[d] == 0 => {
                    let c = a / e[d];
                    x = g.mul(&g.pow(&e, -c), &x);
                    sx = s.mul(&s.pow(&se, -c), &sx);
                }
                Some((e, se)) => {
                    // gcd combination e^u x^v
                    let l = e[d];
                    let ext = l.extended_gcd(&a);
                    let (u, v) = (ext.x, ext.y);
                    let y = g.mul(&g.pow(&e, u), &g.pow(&x, v));
                    let sy = s.mul(&s.pow(&se, u), &s.pow(&sx, v));
                    queue.push_back((e, se));
                    queue.push_back((x, sx));
                    let (y, sy) = self.normalize(d, y, sy);
                    self.entries[d] = Some((y.clone(), sy.clone()));
                    return Ok(Some((d, y, sy)));
                }
                None => {
                    let (y, sy) = self.normalize(d, x.clone(), sx.clone());
                    if y != x {
                        queue.push_back((x, sx));
                    }
                    let _ = m;
                    self.entries[d] = Some((y.clone(), sy.clone()));
                    return Ok(Some((d, y, sy)));
                }
            }
        }
    }

    /// Makes the leading exponent positive (infinite depth) or a divisor of
    /// the relative order (finite depth).
    fn normalize(&self, d: usize, x: Vec<i64>, sx: S::Elem) -> (Vec<i64>, S::Elem) {
        let m = self.g.order_of_gen(d);
        let a = x[d];
        if m == 0 {
            if a < 0 {
                (self.g.inv(&x), self.shadow.inv(&sx))
            } else {
                (x, sx)
            }
        } else {
            let gcd = a.gcd(&m);
            if a == gcd {
                return (x, sx);
            }
            let u = mod_inverse(a / gcd, m / gcd);
            (self.g.pow(&x, u), self.shadow.pow(&sx, u))
        }
    }

    /// Left-peeling sift: returns `(coords, residue, shadow)` with
    /// `x = e_1^{c_1} ⋯ e_k^{c_k} · residue`.
    pub fn sift(&self, x: &[i64]) -> (Vec<(usize, i64)>, Vec<i64>, S::Elem) {
        let (g, s) = (&self.g, &self.shadow);
        let mut x = x.to_vec();
        let mut acc = s.identity();
        let mut coords = Vec::new();
        while let Some(d) = g.depth(&x) {
            match &self.entries[d] {
                Some((e, se)) if x[d] % e[d] == 0 => {
                    let c = x[d] / e[d];
                    x = g.mul(&g.pow(e, -c), &x);
                    acc = s.mul(&acc, &s.pow(se, c));
                    coords.push((d, c));
                }
                _ => break,
            }
        }
        (coords, x, acc)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.g.is_identity(&self.sift(x).1)
    }

    /// Image of `x` under the shadow map, if `x` lies in the subgroup.
    pub fn eval(&self, x: &[i64]) -> Option<S::Elem> {
        let (_, r, s) = self.sift(x);
        self.g.is_identity(&r).then_some(s)
    }

    /// Exponents with respect to the entries, if `x` lies in the subgroup.
    pub fn coords(&self, x: &[i64]) -> Option<Vec<(usize, i64)>> {
        let (c, r, _) = self.sift(x);
        self.g.is_identity(&r).then_some(c)
    }

    /// Subgroup inclusion `self ⊆ other` (shadows ignored).
    pub fn is_subgroup_of<T: Group + Clone>(&self, other: &Ips<T>) -> bool {
        self.entries().all(|(_, x, _)| other.contains(x))
    }

    /// Product of relative orders over finite depths; `None` when some depth is infinite.
    pub fn index_in_whole(&self) -> Option<i64> {
        let mut idx = 1i64;
        for d in 0..self.g.len() {
            let m = self.g.order_of_gen(d);
            match (self.lead(d), m) {
                (Some(l), 0) => idx = idx.checked_mul(l)?,
                (Some(l), m) => idx = idx.checked_mul(l.min(m))?,
                (None, 0) => return None,
                (None, m) => idx = idx.checked_mul(m)?,
            }
        }
        Some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pc::PcPresentation;

    #[test]
    fn heisenberg_generated_by_weight_one() {
        let h = PcGroup::new(PcPresentation::heisenberg()).unwrap();
        let ips = Ips::generated(&h, &[h.gen(0), h.gen(1)]);
        assert!(ips.is_whole());
        let center = Ips::generated(&h, &[h.gen(2)]);
        assert!(!center.is_whole());
        assert!(center.contains(&h.comm(&h.gen(0), &h.gen(1))));
        assert!(!center.contains(&h.gen(0)));
    }

    #[test]
    fn index_two_subgroup() {
        let z = PcGroup::new(PcPresentation::free_abelian(1)).unwrap();
        let two = Ips::generated(&z, &[vec![2], vec![-4]]);
        assert_eq!(two.lead(0), Some(2));
        assert!(!two.contains(&[3]));
        assert!(two.contains(&[-6]));
        assert!(!two.is_whole());
        let coprime = Ips::generated(&z, &[vec![6], vec![10], vec![15]]);
        assert!(coprime.is_whole());
    }

    #[test]
    fn shadow_detects_bad_map() {
        let z = PcGroup::new(PcPresentation::free_abelian(1)).unwrap();
        // x ↦ 2x is fine
        let mut ok = Ips::new(z.clone(), z.clone());
        ok.add(vec![2], vec![4]).unwrap();
        ok.add(vec![3], vec![6]).unwrap();
        assert_eq!(ok.eval(&[1]), Some(vec![2]));
        // 2 ↦ 1, 3 ↦ 1 is not a homomorphism
        let mut bad = Ips::new(z.clone(), z);
        bad.add(vec![2], vec![1]).unwrap();
        assert!(bad.add(vec![3], vec![1]).is_err());
    }

    #[test]
    fn finite_depth_normalization() {
        let c6 = PcGroup::new(PcPresentation::abelian(&[6])).unwrap();
        let ips = Ips::generated(&c6, &[vec![4]]);
        assert_eq!(ips.lead(0), Some(2));
        assert_eq!(ips.index_in_whole(), Some(2));
    }

    #[test]
    fn replayed_generators_match_direct_evaluation() {
        let h = PcGroup::new(PcPresentation::heisenberg()).unwrap();
        let slp = Slp::default();
        let mut ips = Ips::new(h.clone(), slp.clone());
        let (x, y) = (h.gen(0), h.gen(1));
        ips.add(x.clone(), slp.input(0)).unwrap();
        ips.add(y.clone(), slp.input(1)).unwrap();
        let programs: Vec<usize> = (0..3).map(|d| ips.eval(&h.gen(d)).unwrap()).collect();
        // swapping the inputs inverts the centre
        let swapped = slp.replay(&h, &[y.clone(), x.clone()], &programs);
        assert_eq!(swapped, vec![h.gen(1), h.gen(0), h.inv(&h.gen(2))]);
        assert_eq!(slp.replay(&h, &[x, y], &programs), (0..3).map(|d| h.gen(d)).collect::<Vec<_>>());
    }
}
