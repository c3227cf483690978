//! Algebraic certificates of n-concordance between two knots and the maps
//! they induce on relative quotients.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{verify_over_g, Group, OverG};
use crate::invariants::{ExtendableMapCandidate, KnotData};
use crate::relquo::{is_isomorphism_over_g, IsoReport, QuotientHom, RelSubgroup, RelativeQuotient, RqElem};
use crate::words::FreeWord;

#[derive(Clone, Debug)]
pub struct ConcordanceCertificate {
    pub k: KnotData,
    pub j: KnotData,
    pub v: OverG,
    /// images of the generators of `π_K` and `π_J` in `π_V`
    pub incl_k: Vec<FreeWord>,
    pub incl_j: Vec<FreeWord>,
    pub mu_k: FreeWord,
    pub mu_j: FreeWord,
    /// generating lists, in `π_V`, of the images of `π_1(∂E_J)` and `π_1(∂E_V)`
    pub boundary_j: Vec<FreeWord>,
    pub boundary_v: Vec<FreeWord>,
}

pub const BOUNDARY_ASSUMPTION: &str = "boundary generating lists are taken to generate the full peripheral images";

impl ConcordanceCertificate {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k: KnotData,
        j: KnotData,
        v: OverG,
        incl_k: Vec<FreeWord>,
        incl_j: Vec<FreeWord>,
        mu_k: FreeWord,
        mu_j: FreeWord,
        boundary_j: Vec<FreeWord>,
        boundary_v: Vec<FreeWord>,
    ) -> Result<Self> {
        for (name, imgs, src) in [("K", &incl_k, &k.over), ("J", &incl_j, &j.over)] {
            if !verify_over_g(imgs, src, &v)? {
                return Err(Error::NotAHomomorphism(format!("inclusion of {name} is not over G")));
            }
        }
        let r = v.pi.ngens();
        for w in [&mu_k, &mu_j].into_iter().chain(&boundary_j).chain(&boundary_v) {
            w.check_range(r)?;
        }
        Ok(ConcordanceCertificate {
            k,
            j,
            v,
            incl_k,
            incl_j,
            mu_k,
            mu_j,
            boundary_j,
            boundary_v,
        })
    }

    /// `V = E_J × I`: identity inclusions and equal boundary lists.
    pub fn product(j: &KnotData) -> Self {
        let gens = j.over.pi.generators();
        let mu = j.meridian();
        let boundary = j.peripheral().to_vec();
        ConcordanceCertificate {
            k: j.clone(),
            j: j.clone(),
            v: j.over.clone(),
            incl_k: gens.clone(),
            incl_j: gens,
            mu_k: mu.clone(),
            mu_j: mu,
            boundary_j: boundary.clone(),
            boundary_v: boundary,
        }
    }

    pub fn quotient(&self, n: usize) -> Result<Arc<RelativeQuotient>> {
        Ok(Arc::new(RelativeQuotient::new(&self.v, n)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcordanceReport {
    pub level: usize,
    /// relators of `π_K` and `π_J` die in `π_V/Γ_nγ_V` under the inclusions
    pub inclusions_defined: bool,
    pub boundary_equal: bool,
    pub based: Option<bool>,
    pub assumption: &'static str,
    pub pass: bool,
}

pub fn check_n_concordance(cert: &ConcordanceCertificate, n: usize, based: bool) -> Result<ConcordanceReport> {
    let q = cert.quotient(n)?;
    let kills = |src: &OverG, imgs: &[FreeWord]| {
        src.pi
            .relators
            .iter()
            .all(|r| q.is_identity(&q.project(&r.substitute(imgs))))
    };
    let inclusions_defined = kills(&cert.k.over, &cert.incl_k) && kills(&cert.j.over, &cert.incl_j);
    let img = |ws: &[FreeWord]| ws.iter().map(|w| q.project(w)).collect::<Vec<_>>();
    let boundary_equal =
        RelSubgroup::generated(&q, &img(&cert.boundary_j)).equals(&RelSubgroup::generated(&q, &img(&cert.boundary_v)));
    let based = based.then(|| q.project(&cert.mu_k) == q.project(&cert.mu_j));
    Ok(ConcordanceReport {
        level: n,
        inclusions_defined,
        boundary_equal,
        based,
        assumption: BOUNDARY_ASSUMPTION,
        pass: inclusions_defined && boundary_equal && based.unwrap_or(true),
    })
}

fn inclusion(src: &KnotData, imgs: &[FreeWord], level: usize, qv: &Arc<RelativeQuotient>) -> Result<QuotientHom> {
    let qs = src.quotient(level)?;
    QuotientHom::new(&qs, qv, imgs.iter().map(|w| qv.project(w)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcordanceIsoReport {
    pub level: usize,
    pub k_side: IsoReport,
    pub j_side: IsoReport,
    pub pass: bool,
}

/// The inclusions induce maps `π_L/Γ_{j+1}γ_L → π_V/Γ_{j+1}γ_V`; both are checked.
pub fn quotient_iso_from_concordance(cert: &ConcordanceCertificate, j: usize) -> Result<ConcordanceIsoReport> {
    let qv = cert.quotient(j + 1)?;
    let k_side = is_isomorphism_over_g(&inclusion(&cert.k, &cert.incl_k, j + 1, &qv)?)?;
    let j_side = is_isomorphism_over_g(&inclusion(&cert.j, &cert.incl_j, j + 1, &qv)?)?;
    Ok(ConcordanceIsoReport {
        level: j + 1,
        pass: k_side.isomorphism && j_side.isomorphism,
        k_side,
        j_side,
    })
}

#[derive(Clone, Debug)]
pub struct Extracted {
    pub candidate: ExtendableMapCandidate,
    /// the extracted map composed with the inclusion of `J` is the projection of `π_J`
    pub restriction_is_projection: bool,
}

/// `τ = (ι_J)^{-1} ∘ q_V ∘ ι_K` at level `j`.
pub fn extendable_from_concordance(cert: &ConcordanceCertificate, j: usize) -> Result<Extracted> {
    let qv = cert.quotient(j)?;
    let iota_j = inclusion(&cert.j, &cert.incl_j, j, &qv)?;
    let back = iota_j.inverse()?;
    let images: Vec<RqElem> = cert.incl_k.iter().map(|w| back.apply(&qv.project(w))).collect();
    let qj = back.target.clone();
    let restriction_is_projection = cert
        .incl_j
        .iter()
        .zip(&qj.gen_images)
        .all(|(w, y)| back.apply(&qv.project(w)) == *y);
    let candidate = ExtendableMapCandidate::new(&cert.k, &cert.j, qj, images);
    Ok(Extracted {
        candidate,
        restriction_is_projection,
    })
}

/// Records the word behind every element built during subgroup closure.
/// Words are never compared, so relations of the quotient are not detected.
#[derive(Clone, Copy, Debug)]
struct WordTracker;

impl Group for WordTracker {
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

    fn is_identity(&self, _: &FreeWord) -> bool {
        true
    }
}

#[derive(Clone, Debug)]
pub struct RebasedCertificate {
    pub certificate: Option<ConcordanceCertificate>,
    pub conjugator: Option<FreeWord>,
    pub exhaustive: bool,
    pub examined: usize,
}

/// Searches `π_V/Γ_nγ_V` for `g` with `g^{-1} μ_K g = μ_J`; on success the
/// certificate is amended by conjugating `μ_K` with a word for `g`.
pub fn rebase_certificate(cert: &ConcordanceCertificate, n: usize, bound: i64) -> Result<RebasedCertificate> {
    let q = cert.quotient(n)?;
    let mk = q.project(&cert.mu_k);
    let mj = q.project(&cert.mu_j);
    let orders = q.nq.presentation().orders.clone();
    let exhaustive = orders.iter().all(|&m| m > 0);
    let ranges: Vec<Vec<i64>> = orders
        .iter()
        .map(|&m| {
            if m > 0 {
                (0..m).collect()
            } else {
                let mut v = vec![0];
                for b in 1..=bound {
                    v.push(b);
                    v.push(-b);
                }
                v
            }
        })
        .collect();
    let mut examined = 0;
    let mut found = None;
    'outer: for coset in 0..q.index() {
        let mut idx = vec![0usize; ranges.len()];
        loop {
            examined += 1;
            let g = RqElem {
                coset,
                n: idx.iter().zip(&ranges).map(|(&i, r)| r[i]).collect(),
            };
            if q.conj(&mk, &g) == mj {
                found = Some(g);
                break 'outer;
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
    let Some(g) = found else {
        return Ok(RebasedCertificate {
            certificate: None,
            conjugator: None,
            exhaustive,
            examined,
        });
    };
    // a word for g, read off from the generator images
    let pairs: Vec<(RqElem, FreeWord)> = q.gen_images.iter().cloned().zip(cert.v.pi.generators()).collect();
    let words = RelSubgroup::with_shadow(&q, WordTracker, &pairs)?;
    let w = words
        .eval(&g)
        .filter(|w| q.project(w) == g)
        .ok_or_else(|| Error::Internal("no word found for the conjugator".into()))?;
    let mut amended = cert.clone();
    amended.mu_k = cert.mu_k.conjugate_by(&w);
    let check = check_n_concordance(&amended, n, true)?;
    if !check.based.unwrap_or(false) {
        return Err(Error::Internal("conjugator word does not base the certificate".into()));
    }
    Ok(RebasedCertificate {
        certificate: Some(amended),
        conjugator: Some(w),
        exhaustive,
        examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{canonical_tau, same_candidate, BoundaryCondition};
    use crate::words::FpPresentation;

    fn free2() -> KnotData {
        let over = OverG::trivial(FpPresentation::free(["x", "y"]));
        KnotData::new("free2", over, BoundaryCondition::meridional(FreeWord::generator(0), FreeWord::identity())).unwrap()
    }

    #[test]
    fn product_certificate() {
        let j = free2();
        let c = ConcordanceCertificate::product(&j);
        for n in 1..=3 {
            assert!(check_n_concordance(&c, n, true).unwrap().pass);
        }
        assert!(quotient_iso_from_concordance(&c, 2).unwrap().pass);
        let e = extendable_from_concordance(&c, 3).unwrap();
        assert!(e.restriction_is_projection);
        assert!(same_candidate(&e.candidate, &canonical_tau(&j, 3).unwrap()));
    }

    #[test]
    fn conjugate_meridian_rebased() {
        let j = free2();
        let mut c = ConcordanceCertificate::product(&j);
        let y = FreeWord::generator(1);
        c.mu_k = FreeWord::generator(0).conjugate_by(&y);
        assert!(!check_n_concordance(&c, 3, true).unwrap().pass);
        assert!(check_n_concordance(&c, 3, false).unwrap().pass);
        let r = rebase_certificate(&c, 3, 1).unwrap();
        let fixed = r.certificate.unwrap();
        assert!(check_n_concordance(&fixed, 3, true).unwrap().pass);
        assert!(rebase_certificate(&c, 3, 0).unwrap().certificate.is_none());
    }

    #[test]
    fn smaller_boundary_fails() {
        let j = free2();
        let mut c = ConcordanceCertificate::product(&j);
        c.boundary_v.push(FreeWord::generator(1));
        assert!(!check_n_concordance(&c, 2, false).unwrap().boundary_equal);
    }
}
