//! Free words, finite presentations and homomorphisms between them.
//!
//! Words are stored run-length encoded as `(generator, exponent)` pairs and are
//! always freely reduced. Generator names only exist at the text layer; every
//! internal structure addresses generators by index.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;

/// A freely reduced word in the free group on indexed generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    syllables: Vec<(usize, i64)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(index: usize) -> Self {
        FreeWord {
            syllables: vec![(index, 1)],
        }
    }

    pub fn power_of(index: usize, exp: i64) -> Self {
        FreeWord::from_syllables([(index, exp)])
    }

    /// Builds a word from arbitrary syllables, freely reducing as it goes.
    pub fn from_syllables<I: IntoIterator<Item = (usize, i64)>>(iter: I) -> Self {
        let mut w = FreeWord::identity();
        for (g, e) in iter {
            w.push(g, e);
        }
        w
    }

    /// Builds a word from single letters, `(index, inverse?)`.
    pub fn from_letters<I: IntoIterator<Item = (usize, bool)>>(iter: I) -> Self {
        FreeWord::from_syllables(iter.into_iter().map(|(g, inv)| (g, if inv { -1 } else { 1 })))
    }

    fn push(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, exp)) if *last == g => {
                *exp += e;
                if *exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((g, e)),
        }
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters (sum of absolute exponents).
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.syllables.iter().map(|(g, _)| *g).max()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &(g, e) in &other.syllables {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> FreeWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut w = FreeWord::identity();
        for _ in 0..e.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `u^-1 v^-1 u v`, the commutator convention used throughout the crate.
    pub fn commutator(u: &FreeWord, v: &FreeWord) -> FreeWord {
        u.inverse().mul(&v.inverse()).mul(u).mul(v)
    }

    /// `c^-1 w c`.
    pub fn conjugate_by(&self, c: &FreeWord) -> FreeWord {
        c.inverse().mul(self).mul(c)
    }

    /// Letters as `(generator, +1 | -1)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.syllables
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0; ngens];
        for &(g, e) in &self.syllables {
            v[g] += e;
        }
        v
    }

    pub fn check_range(&self, ngens: usize) -> Result<()> {
        match self.max_generator() {
            Some(g) if g >= ngens => Err(Error::GeneratorOutOfRange { index: g, count: ngens }),
            _ => Ok(()),
        }
    }

    /// Substitutes generator `i` by `images[i]`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut w = FreeWord::identity();
        for &(g, e) in &self.syllables {
            w = w.mul(&images[g].pow(e));
        }
        w
    }

    /// Renders with single-letter names, uppercase for inverses.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_identity() {
            return "1".into();
        }
        let mut out = String::new();
        for &(g, e) in &self.syllables {
            let name = &names[g];
            let shown = if e < 0 { name.to_uppercase() } else { name.clone() };
            if e.abs() == 1 {
                out.push_str(&shown);
            } else {
                out.push_str(&format!("{}^{}", shown, e.abs()));
            }
        }
        out
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|(g, e)| if *e == 1 { format!("x{g}") } else { format!("x{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Freely reduces a raw letter sequence, rejecting out-of-range generators.
pub fn reduce_word(raw: &[(usize, i64)], ngens: usize) -> Result<FreeWord> {
    for &(g, _) in raw {
        if g >= ngens {
            return Err(Error::GeneratorOutOfRange { index: g, count: ngens });
        }
    }
    Ok(FreeWord::from_syllables(raw.iter().copied()))
}

/// A finite presentation `<generators | relators>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpPresentation {
    pub names: Vec<String>,
    pub relators: Vec<FreeWord>,
}

impl FpPresentation {
    pub fn new(names: Vec<String>, relators: Vec<FreeWord>) -> Result<Self> {
        for r in &relators {
            r.check_range(names.len())?;
        }
        Ok(FpPresentation { names, relators })
    }

    /// Free group on `names`.
    pub fn free<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        FpPresentation {
            names: names.into_iter().map(Into::into).collect(),
            relators: Vec::new(),
        }
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn generators(&self) -> Vec<FreeWord> {
        (0..self.ngens()).map(FreeWord::generator).collect()
    }

    pub fn render(&self, w: &FreeWord) -> String {
        w.render(&self.names)
    }
}

/// Tri-state record of whether a homomorphism's relator images were checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    Verified,
    Unverified,
    Failed,
}

impl Verification {
    pub fn combine(self, other: Verification) -> Verification {
        use Verification::*;
        match (self, other) {
            (Failed, _) | (_, Failed) => Failed,
            (Unverified, _) | (_, Unverified) => Unverified,
            _ => Verified,
        }
    }
}

/// A homomorphism between finitely presented groups given by generator images.
///
/// Relator images are only checked up to free reduction and cyclic relator
/// matching, so most such maps stay `Unverified`; quotient-level checks live
/// with the quotient types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpHom {
    pub domain: FpPresentation,
    pub codomain: FpPresentation,
    pub images: Vec<FreeWord>,
    pub verified: Verification,
}

impl FpHom {
    pub fn new(domain: FpPresentation, codomain: FpPresentation, images: Vec<FreeWord>) -> Result<Self> {
        if images.len() != domain.ngens() {
            return Err(Error::Internal(format!(
                "hom needs {} images, got {}",
                domain.ngens(),
                images.len()
            )));
        }
        for w in &images {
            w.check_range(codomain.ngens())?;
        }
        let verified = if domain
            .relators
            .iter()
            .all(|r| is_free_consequence(&r.substitute(&images), &codomain.relators))
        {
            Verification::Verified
        } else {
            Verification::Unverified
        };
        Ok(FpHom {
            domain,
            codomain,
            images,
            verified,
        })
    }

    pub fn identity(p: &FpPresentation) -> Self {
        FpHom {
            domain: p.clone(),
            codomain: p.clone(),
            images: p.generators(),
            verified: Verification::Verified,
        }
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    pub fn compose(&self, after: &FpHom) -> FpHom {
        FpHom {
            domain: self.domain.clone(),
            codomain: after.codomain.clone(),
            images: self.images.iter().map(|w| after.apply(w)).collect(),
            verified: self.verified.combine(after.verified),
        }
    }
}

/// Cheap sufficient test that `w` is trivial: freely trivial, or a cyclic
/// permutation of a relator or its inverse.
fn is_free_consequence(w: &FreeWord, relators: &[FreeWord]) -> bool {
    if w.is_identity() {
        return true;
    }
    let letters: Vec<(usize, i64)> = w.letters().collect();
    relators.iter().any(|r| {
        let a: Vec<(usize, i64)> = r.letters().collect();
        let b: Vec<(usize, i64)> = r.inverse().letters().collect();
        is_rotation(&letters, &a) || is_rotation(&letters, &b)
    })
}

fn is_rotation(x: &[(usize, i64)], y: &[(usize, i64)]) -> bool {
    if x.len() != y.len() || x.is_empty() {
        return false;
    }
    (0..y.len()).any(|s| (0..x.len()).all(|i| x[i] == y[(i + s) % y.len()]))
}

/// The free group on `rank` generators, for evaluating words by free reduction.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    pub rank: usize,
}

impl Group for FreeGroup {
    type Elem = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.mul(b)
    }

    fn inv(&self, a: &FreeWord) -> FreeWord {
        a.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation() {
        assert!(reduce_word(&[(0, 1), (0, -1)], 1).unwrap().is_identity());
        assert_eq!(reduce_word(&[(0, 2), (0, -1)], 1).unwrap(), FreeWord::generator(0));
        let w = reduce_word(&[(0, 1), (1, 1), (1, -1), (0, 1)], 2).unwrap();
        assert_eq!(w, FreeWord::power_of(0, 2));
    }

    #[test]
    fn out_of_range() {
        assert_eq!(
            reduce_word(&[(3, 1)], 2),
            Err(Error::GeneratorOutOfRange { index: 3, count: 2 })
        );
    }

    #[test]
    fn commutator_convention() {
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let c = FreeWord::commutator(&x, &y);
        assert_eq!(c.syllables(), &[(0, -1), (1, -1), (0, 1), (1, 1)]);
    }

    #[test]
    fn hom_verification_by_cyclic_match() {
        let p = FpPresentation::new(
            vec!["a".into(), "b".into()],
            vec![FreeWord::from_syllables([(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)])],
        )
        .unwrap();
        let h = FpHom::new(p.clone(), p.clone(), p.generators()).unwrap();
        assert_eq!(h.verified, Verification::Verified);
        // swapping generators sends the relator to a rotation of its inverse
        let swap = FpHom::new(p.clone(), p.clone(), vec![FreeWord::generator(1), FreeWord::generator(0)]).unwrap();
        assert_eq!(swap.verified, Verification::Verified);
        let bad = FpHom::new(p.clone(), p, vec![FreeWord::generator(0), FreeWord::identity()]).unwrap();
        assert_eq!(bad.verified, Verification::Unverified);
    }
}
