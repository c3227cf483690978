//! Satellite knots `J(η, L)` as amalgams, the collapse homomorphism onto
//! `π_J`, and extendable maps obtained from characteristic maps.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GElem, Group, OverG};
use crate::intmat::left_kernel;
use crate::relquo::RelativeQuotient;
use crate::invariants::{canonical_tau, pi1_shadow_compare, BoundaryCondition, ExtendableMapCandidate, KnotData, ShadowReport, ShadowVerdict};
use crate::words::{FpPresentation, FreeWord};

pub const ASPHERICITY: &str = "ambient manifold assumed closed, orientable and aspherical";

#[derive(Clone, Debug)]
pub struct SatelliteInput {
    /// the knot `J` being modified
    pub j: KnotData,
    /// `π_1(E_J − N(η))`
    pub ej_eta: FpPresentation,
    /// `γ` on the generators of `π_1(E_J − N(η))`
    pub ej_gamma: Vec<GElem>,
    /// refilling `η`: generators of `π_1(E_J − N(η))` to words in `π_J`
    pub refill: Vec<FreeWord>,
    pub mu_eta: FreeWord,
    pub lambda_eta: FreeWord,
    /// meridian of `J` and longitude of the satellite, in `π_1(E_J − N(η))`
    pub mu_j: FreeWord,
    pub lambda_sat: FreeWord,
    /// a knot group in the 3-sphere with its peripheral words
    pub l_group: FpPresentation,
    pub mu_l: FreeWord,
    pub lambda_l: FreeWord,
}

#[derive(Clone, Debug)]
pub struct Amalgam {
    pub knot: KnotData,
    /// generators of `π_1(E_J − N(η))` come first
    pub l_offset: usize,
    /// abelianization of `π_L` normalized by `μ_L ↦ 1`
    pub l_abelianization: Vec<i64>,
}

/// `Hom(π_L, Z)` sending `μ_L` to 1.
fn knot_abelianization(l: &FpPresentation, mu: &FreeWord) -> Result<Vec<i64>> {
    let r = l.ngens();
    let cols = l.relators.len();
    let m: Vec<Vec<BigInt>> = (0..r)
        .map(|x| l.relators.iter().map(|rel| BigInt::from(rel.exponent_sums(r)[x])).collect())
        .collect();
    let ker = left_kernel(&m, cols);
    if ker.len() != 1 {
        return Err(Error::Inconsistent(format!("first homology of the companion has rank {}", ker.len())));
    }
    let mu_sums = mu.exponent_sums(r);
    let v: Vec<i64> = ker[0].iter().map(|x| x.to_i64().unwrap_or(0)).collect();
    let c: i64 = v.iter().zip(&mu_sums).map(|(a, b)| a * b).sum();
    if BigInt::from(c).abs() != BigInt::from(1) {
        return Err(Error::Inconsistent("meridian does not generate the first homology".into()));
    }
    Ok(v.into_iter().map(|x| x * c).collect())
}

fn shift(w: &FreeWord, by: usize) -> FreeWord {
    FreeWord::from_syllables(w.syllables().iter().map(|&(g, e)| (g + by, e)))
}

pub fn amalgam_presentation(s: &SatelliteInput) -> Result<Amalgam> {
    let k = s.ej_eta.ngens();
    let over_ej = OverG::new(s.ej_eta.clone(), s.j.over.g.clone(), s.ej_gamma.clone())?;
    let phi = knot_abelianization(&s.l_group, &s.mu_l)?;
    let mut names = s.ej_eta.names.clone();
    for n in &s.l_group.names {
        let mut name = n.clone();
        while names.contains(&name) {
            name.push('_');
        }
        names.push(name);
    }
    let mut relators = s.ej_eta.relators.clone();
    relators.extend(s.l_group.relators.iter().map(|r| shift(r, k)));
    relators.push(shift(&s.mu_l, k).mul(&s.lambda_eta));
    relators.push(shift(&s.lambda_l, k).mul(&s.mu_eta.inverse()));
    let pi = FpPresentation::new(names, relators)?;
    let g_lambda = over_ej.gamma(&s.lambda_eta);
    let mut images = s.ej_gamma.clone();
    images.extend(phi.iter().map(|&e| s.j.over.g.pow(&g_lambda, -e)));
    let over = OverG::new(pi, s.j.over.g.clone(), images)?;
    let bc = BoundaryCondition::meridional(s.mu_j.clone(), s.lambda_sat.clone());
    let knot = KnotData::new(format!("{}(eta, L)", s.j.name), over, bc)?;
    Ok(Amalgam {
        knot,
        l_offset: k,
        l_abelianization: phi,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    /// images of the amalgam generators in `π_J`
    pub images: Vec<FreeWord>,
    /// relators, including both gluing relators, die in `π_J/Γ_nγ_J`
    pub relators_die: bool,
    pub verification_level: usize,
    /// the satellite meridian maps to `μ_J` as a word
    pub meridian_preserved: bool,
    /// `μ_η` and `λ_η` commute in `π_1(E_J − N(η))/Γ_n`
    pub eta_torus_commutes: bool,
    pub over_g: bool,
}

/// `h`: the refill map on the `η` side and `π_L → Z → π_J`, `μ_L ↦ f(λ_η)^{-1}`, on the other.
pub fn satellite_collapse_hom(s: &SatelliteInput, am: &Amalgam, n: usize) -> Result<CollapseReport> {
    let mut images = s.refill.clone();
    let f_lambda = s.lambda_eta.substitute(&s.refill);
    images.extend(am.l_abelianization.iter().map(|&e| f_lambda.pow(-e)));
    let q = s.j.quotient(n)?;
    let relators_die = am
        .knot
        .over
        .pi
        .relators
        .iter()
        .all(|r| q.is_identity(&q.project(&r.substitute(&images))));
    let meridian_preserved = am.knot.meridian().substitute(&images) == s.j.meridian();
    let over_g = (0..images.len()).all(|x| s.j.over.gamma(&images[x]) == am.knot.over.images[x]);
    let ej_over = OverG::new(s.ej_eta.clone(), s.j.over.g.clone(), s.ej_gamma.clone())?;
    let ej = RelativeQuotient::new(&ej_over, n)?;
    let torus = ej.comm(&ej.project(&s.mu_eta), &ej.project(&s.lambda_eta));
    Ok(CollapseReport {
        images,
        relators_die,
        verification_level: n,
        meridian_preserved,
        eta_torus_commutes: ej.is_identity(&torus),
        over_g,
    })
}

#[derive(Clone, Debug)]
pub struct CharacteristicReport {
    pub candidate: ExtendableMapCandidate,
    pub shadow: ShadowReport,
    pub pass: bool,
}

/// `τ = q_n ∘ α` for `α: π_K → π_J` inducing the identity on `G`, compared
/// with the canonical map of `J`.
pub fn characteristic_to_extendable(k: &KnotData, j: &KnotData, alpha: &[FreeWord], n: usize) -> Result<CharacteristicReport> {
    if alpha.len() != k.over.pi.ngens() {
        return Err(Error::Internal("one image per generator required".into()));
    }
    for (x, w) in alpha.iter().enumerate() {
        w.check_range(j.over.pi.ngens())?;
        if !k.over.same_ambient(&j.over) || j.over.gamma(w) != k.over.images[x] {
            return Err(Error::NotAHomomorphism(format!("generator {x}: map does not induce the identity on G")));
        }
    }
    let canonical = canonical_tau(j, n)?;
    let q: Arc<_> = canonical.quotient.clone();
    let candidate = ExtendableMapCandidate::from_words(k, j, q, alpha).with_taints(&[ASPHERICITY.to_string()]);
    let shadow = pi1_shadow_compare(&candidate, &canonical, 2)?;
    Ok(CharacteristicReport {
        pass: candidate.passes() && shadow.verdict == ShadowVerdict::AgreeUpToConjugacy,
        candidate,
        shadow,
    })
}

#[derive(Clone, Debug)]
pub struct SatelliteReport {
    pub amalgam: Amalgam,
    pub collapse: CollapseReport,
    pub characteristic: CharacteristicReport,
    pub pass: bool,
}

pub fn satellite_pipeline(s: &SatelliteInput, n: usize) -> Result<SatelliteReport> {
    let amalgam = amalgam_presentation(s)?;
    let collapse = satellite_collapse_hom(s, &amalgam, n)?;
    let characteristic = characteristic_to_extendable(&amalgam.knot, &s.j, &collapse.images, n)?;
    let pass = collapse.relators_die && collapse.meridian_preserved && collapse.over_g && characteristic.pass;
    Ok(SatelliteReport {
        amalgam,
        collapse,
        characteristic,
        pass,
    })
}

/// Trefoil `⟨a, b | aba = bab⟩` with meridian `a` and longitude `(aba)^2 a^{-6}`.
pub fn trefoil_presentation(names: [&str; 2]) -> (FpPresentation, FreeWord, FreeWord) {
    let a = FreeWord::generator(0);
    let b = FreeWord::generator(1);
    let aba = a.mul(&b).mul(&a);
    let rel = aba.mul(&b.mul(&a).mul(&b).inverse());
    let p = FpPresentation::new(names.iter().map(|s| s.to_string()).collect(), vec![rel]).expect("two generators");
    let lambda = aba.pow(2).mul(&a.pow(-6));
    (p, a, lambda)
}

/// Satellite input with `η` a meridian of `J` (so `J(η, L)` is `J # L`),
/// over the trivial group; `J` is taken with generators `a, b, ...`.
pub fn meridian_satellite(j: &KnotData, l: (FpPresentation, FreeWord, FreeWord)) -> Result<SatelliteInput> {
    let r = j.over.pi.ngens();
    let mu = j.meridian();
    let s = FreeWord::generator(r);
    let mut names = j.over.pi.names.clone();
    names.push("s".into());
    let mut relators = j.over.pi.relators.clone();
    relators.push(FreeWord::commutator(&mu, &s));
    let ej_eta = FpPresentation::new(names, relators)?;
    let mut ej_gamma = j.over.images.clone();
    ej_gamma.push(j.over.g.identity());
    let mut refill = j.over.pi.generators();
    refill.push(FreeWord::identity());
    let [_, lambda_j] = j.peripheral();
    Ok(SatelliteInput {
        j: j.clone(),
        ej_eta,
        ej_gamma,
        refill,
        mu_eta: s.clone(),
        lambda_eta: mu.clone(),
        mu_j: mu,
        lambda_sat: lambda_j.mul(&s),
        l_group: l.0,
        mu_l: l.1,
        lambda_l: l.2,
    })
}

pub fn unknot_pattern() -> (FpPresentation, FreeWord, FreeWord) {
    (FpPresentation::free(["m"]), FreeWord::generator(0), FreeWord::identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::same_candidate;

    fn trefoil() -> KnotData {
        let (p, a, l) = trefoil_presentation(["a", "b"]);
        KnotData::new("trefoil", OverG::trivial(p), BoundaryCondition::meridional(a, l)).unwrap()
    }

    #[test]
    fn unknot_satellite_is_canonical() {
        let j = trefoil();
        let s = meridian_satellite(&j, unknot_pattern()).unwrap();
        let am = amalgam_presentation(&s).unwrap();
        assert_eq!(am.knot.over.pi.ngens(), 4);
        assert_eq!(am.knot.over.pi.relators.len(), 2 + 2);
        for n in 2..=3 {
            let rep = satellite_pipeline(&s, n).unwrap();
            assert!(rep.pass);
            // Tietze: s = 1, m = a^{-1}
            let a = FreeWord::generator(0);
            let dict = [a.clone(), FreeWord::generator(1), FreeWord::identity(), a.inverse()];
            let canon = canonical_tau(&j, n).unwrap();
            let expect: Vec<_> = dict.iter().map(|w| canon.apply(w)).collect();
            assert_eq!(rep.characteristic.candidate.images, expect);
        }
    }

    #[test]
    fn trefoil_companion() {
        let j = trefoil();
        let s = meridian_satellite(&j, trefoil_presentation(["c", "d"])).unwrap();
        let rep = satellite_pipeline(&s, 3).unwrap();
        assert!(rep.collapse.relators_die && rep.collapse.eta_torus_commutes);
        assert!(rep.pass);
    }

    #[test]
    fn identity_characteristic_map() {
        let j = trefoil();
        let r = characteristic_to_extendable(&j, &j, &j.over.pi.generators(), 3).unwrap();
        assert!(same_candidate(&r.candidate, &canonical_tau(&j, 3).unwrap()));
    }
}
