//! Command surface. Every subcommand writes one JSON report to standard output.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::concordance::{
    check_n_concordance, extendable_from_concordance, quotient_iso_from_concordance, ConcordanceCertificate,
    BOUNDARY_ASSUMPTION,
};
use crate::coset::kernel_presentation;
use crate::error::{Error, Result};
use crate::homology::{h1_kernel_via_rs, h2_pc_group, stallings_check, H2Route, TwistedH1};
use crate::invariants::{
    bc_automorphism_from_pair, canonical_tau, pi1_shadow_compare, rebase, same_candidate,
    search_extendable, tower_project, ExtendableMapCandidate, KnotData, ShadowVerdict,
};
use crate::io::format::{parse_document, InputDocument};
use crate::io::report::{Report, Verdict};
use crate::nq::nilpotent_quotient;
use crate::relquo::RelativeQuotient;
use crate::satellite::{characteristic_to_extendable, meridian_satellite, satellite_pipeline, ASPHERICITY};

#[derive(Parser, Debug)]
#[command(name = "lcsknot", version, about = "Lower central series quotients of knot groups over a finite group")]
struct Cli {
    /// indent the JSON report
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Presentation of the kernel of γ
    Kernel { file: PathBuf },
    /// Nilpotent quotient of π
    Nq {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
    },
    /// π/Γ_nγ as an extension of G
    Relquo {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
    },
    /// Twisted first homology
    H1 {
        file: PathBuf,
        /// also compute through the kernel presentation and compare
        #[arg(long)]
        oracle: bool,
    },
    /// Second homology of the nilpotent quotient of π
    H2 {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
    },
    /// Homology hypotheses and quotient isomorphisms for a map between groups over G
    Stallings {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 3)]
        class: usize,
    },
    /// Checks a candidate map E_K → E_J at level n
    ExtendableCheck {
        k: PathBuf,
        j: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Enumerates candidate maps with exponents in [-bound, bound]
    ExtendableSearch {
        k: PathBuf,
        j: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
        #[arg(long, default_value_t = 1)]
        bound: i64,
    },
    /// Projects a candidate at level n to level n − 1
    Tower {
        k: PathBuf,
        j: PathBuf,
        #[arg(long, default_value_t = 3)]
        class: usize,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Candidate with the basing changed by a word
    Rebase {
        k: PathBuf,
        j: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
        /// conjugating word in the generators of K
        #[arg(long)]
        by: String,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Boundary-condition automorphism relating a candidate and its rebasing
    AnAuto {
        k: PathBuf,
        j: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
        #[arg(long)]
        by: String,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Compares two candidates on induced fundamental groups
    ShadowCompare {
        k: PathBuf,
        j: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        other_map: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
    /// Checks a concordance certificate
    ConcordanceCheck {
        certificate: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
        #[arg(long)]
        based: bool,
    },
    /// Candidate map read off a certificate
    ConcordanceExtract {
        certificate: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
    },
    /// Satellite knot group, its quotients and the collapse map
    Satellite {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
    },
    /// Characteristic candidate of a map and its shadow
    Characteristic {
        k: PathBuf,
        j: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
    },
}

/// Exit code, standard output and standard error of one invocation.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            return Outcome {
                code,
                stdout: if code == 0 { e.to_string() } else { String::new() },
                stderr: if code == 0 { String::new() } else { e.to_string() },
            };
        }
    };
    let start = Instant::now();
    match run(&cli.command) {
        Ok(mut r) => {
            r.elapsed_ms = start.elapsed().as_millis();
            Outcome {
                code: r.verdict.exit_code(),
                stdout: r.render(cli.pretty) + "\n",
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: if matches!(e, Error::Parse { .. } | Error::Io(_)) { 3 } else { 4 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn load(path: &Path, r: &mut Report) -> Result<InputDocument> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    r.input(path, &bytes);
    let text = String::from_utf8(bytes).map_err(|_| Error::Io(format!("{}: not UTF-8", path.display())))?;
    parse_document(&text).map_err(|e| match e {
        Error::Parse { section, line, message } => Error::Parse {
            section: format!("{}: {section}", path.display()),
            line,
            message,
        },
        other => other,
    })
}

fn knot(path: &Path, r: &mut Report) -> Result<KnotData> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    load(path, r)?.knot(&name)
}

fn candidate(k: &KnotData, j: &KnotData, n: usize, map: Option<&PathBuf>, r: &mut Report) -> Result<ExtendableMapCandidate> {
    match map {
        Some(p) => {
            let words = load(p, r)?.map_words(&k.over.pi, &j.over.pi)?;
            Ok(ExtendableMapCandidate::from_words(k, j, j.quotient(n)?, &words))
        }
        None if k.over.pi == j.over.pi => canonical_tau(j, n),
        None => Err(Error::Parse {
            section: "--map".into(),
            line: 0,
            message: "source and target differ; a map file is required".into(),
        }),
    }
}

fn record_candidate(r: &mut Report, key: &str, c: &ExtendableMapCandidate) -> Result<()> {
    r.set(
        key,
        json!({
            "level": c.level,
            "images": c.images,
            "report": c.report,
        }),
    )?;
    for t in &c.report.taints {
        r.assume(t.clone());
    }
    Ok(())
}

fn quotient_summary(q: &RelativeQuotient) -> serde_json::Value {
    json!({
        "level": q.level,
        "index": q.index(),
        "hirsch_length": q.hirsch_length(),
        "layers": q.layers().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
    })
}

fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Kernel { file } => {
            let mut r = Report::new("kernel");
            let over = load(file, &mut r)?.over_g()?;
            let kp = kernel_presentation(&over)?;
            r.set("index", kp.table.len())?;
            r.set("rank", kp.rank())?;
            r.set("relators", kp.presentation.relators.len())?;
            r.set(
                "schreier_generators",
                kp.schreier_generators.iter().map(|w| over.pi.render(w)).collect::<Vec<_>>(),
            )?;
            Ok(r)
        }
        Command::Nq { file, class } => {
            let mut r = Report::new("nq");
            let pi = load(file, &mut r)?.presentation()?.clone();
            let q = nilpotent_quotient(&pi, *class)?;
            q.group.check_consistency()?;
            r.set("class", class)?;
            r.set("layer_sizes", q.layer_sizes())?;
            r.set("layers", q.layers().iter().map(|a| a.to_string()).collect::<Vec<_>>())?;
            r.set("hirsch_length", q.presentation().hirsch_length())?;
            Ok(r)
        }
        Command::Relquo { file, class } => {
            let mut r = Report::new("relquo");
            let over = load(file, &mut r)?.over_g()?;
            let q = RelativeQuotient::new(&over, *class)?;
            r.set("quotient", quotient_summary(&q))?;
            Ok(r)
        }
        Command::H1 { file, oracle } => {
            let mut r = Report::new("h1");
            let over = load(file, &mut r)?.over_g()?;
            let h = TwistedH1::compute(&over)?;
            r.set("h1", &h.invariants)?;
            r.set("h1_display", h.invariants.to_string())?;
            r.set(
                "action_fingerprint",
                h.action_fingerprint()?
                    .into_iter()
                    .map(|(g, a)| json!({"g": g.index(), "coinvariants": a.to_string()}))
                    .collect::<Vec<_>>(),
            )?;
            r.assume("module comparison by fingerprint equality, not isomorphism");
            if *oracle {
                let rs = h1_kernel_via_rs(&over)?;
                r.set("oracle", &rs)?;
                r.set("oracle_agrees", rs == h.invariants)?;
                r.verdict = Verdict::from_bool(rs == h.invariants);
            }
            Ok(r)
        }
        Command::H2 { file, class } => {
            let mut r = Report::new("h2");
            let pi = load(file, &mut r)?.presentation()?.clone();
            let q = nilpotent_quotient(&pi, *class)?;
            let h2 = h2_pc_group(q.presentation())?;
            r.set("class", class)?;
            r.set("h2", &h2)?;
            r.set("h2_display", h2.to_string())?;
            Ok(r)
        }
        Command::Stallings { source, target, map, class } => {
            let mut r = Report::new("stallings");
            let a = load(source, &mut r)?.over_g()?;
            let b = load(target, &mut r)?.over_g()?;
            let words = load(map, &mut r)?.map_words(&a.pi, &b.pi)?;
            let route = H2Route::DeclaredTrivial("second homology of both sides declared trivial by the caller".into());
            r.assume("second homology of both sides declared trivial by the caller");
            r.assume("first homology compared by exact induced map and fingerprint");
            let levels: Vec<usize> = (2..=*class).collect();
            let rep = stallings_check(&a, &b, &words, route, &levels)?;
            r.set("stallings", &rep)?;
            r.verdict = Verdict::from_bool(rep.pass);
            Ok(r)
        }
        Command::ExtendableCheck { k, j, class, map } => {
            let mut r = Report::new("extendable-check");
            let (kk, jj) = (knot(k, &mut r)?, knot(j, &mut r)?);
            let c = candidate(&kk, &jj, *class, map.as_ref(), &mut r)?;
            record_candidate(&mut r, "candidate", &c)?;
            r.verdict = Verdict::from_bool(c.passes());
            Ok(r)
        }
        Command::ExtendableSearch { k, j, class, bound } => {
            let mut r = Report::new("extendable-search");
            let (kk, jj) = (knot(k, &mut r)?, knot(j, &mut r)?);
            r.set("bound", bound)?;
            let s = match search_extendable(&kk, &jj, *class, *bound) {
                Ok(s) => s,
                Err(Error::Undecidable(why)) => {
                    r.set("reason", why)?;
                    r.exhaustive = Some(false);
                    r.verdict = Verdict::UndecidedAtBound;
                    return Ok(r);
                }
                Err(e) => return Err(e),
            };
            r.set("examined", s.examined)?;
            r.set("found", s.candidates.len())?;
            r.set("candidates", s.candidates.iter().map(|c| &c.images).collect::<Vec<_>>())?;
            r.exhaustive = Some(s.exhaustive);
            r.verdict = match (s.candidates.is_empty(), s.exhaustive) {
                (false, _) => Verdict::Pass,
                (true, true) => Verdict::Fail,
                (true, false) => Verdict::UndecidedAtBound,
            };
            Ok(r)
        }
        Command::Tower { k, j, class, map } => {
            let mut r = Report::new("tower");
            let (kk, jj) = (knot(k, &mut r)?, knot(j, &mut r)?);
            let c = candidate(&kk, &jj, *class, map.as_ref(), &mut r)?;
            let low = tower_project(&c)?;
            record_candidate(&mut r, "projected", &low)?;
            r.set("source_passes", c.passes())?;
            if kk.over.pi == jj.over.pi && map.is_none() {
                r.set("projects_to_canonical", same_candidate(&low, &canonical_tau(&jj, class - 1)?))?;
            }
            r.verdict = Verdict::from_bool(!c.passes() || low.passes());
            Ok(r)
        }
        Command::Rebase { k, j, class, by, map } => {
            let mut r = Report::new("rebase");
            let (kk, jj) = (knot(k, &mut r)?, knot(j, &mut r)?);
            let a = crate::io::format::parse_word(by, &kk.over.pi.names).map_err(|m| Error::Parse {
                section: "--by".into(),
                line: 0,
                message: m,
            })?;
            let c = candidate(&kk, &jj, *class, map.as_ref(), &mut r)?;
            let out = rebase(&c, &a)?;
            match &out.candidate {
                Some(rc) => {
                    record_candidate(&mut r, "rebased", rc)?;
                    r.verdict = Verdict::from_bool(rc.passes());
                }
                None => {
                    r.set("obstruction", &out.obstruction)?;
                    r.verdict = Verdict::Fail;
                }
            }
            Ok(r)
        }
        Command::AnAuto { k, j, class, by, map } => {
            let mut r = Report::new("an-auto");
            let (kk, jj) = (knot(k, &mut r)?, knot(j, &mut r)?);
            let a = crate::io::format::parse_word(by, &kk.over.pi.names).map_err(|m| Error::Parse {
                section: "--by".into(),
                line: 0,
                message: m,
            })?;
            let c = candidate(&kk, &jj, *class, map.as_ref(), &mut r)?;
            let Some(rc) = rebase(&c, &a)?.candidate else {
                r.set("obstruction", "the conjugator does not centralize the meridian")?;
                r.verdict = Verdict::Fail;
                return Ok(r);
            };
            let p = bc_automorphism_from_pair(&c, &rc)?;
            let id = bc_automorphism_from_pair(&c, &c)?;
            r.set("automorphism", &p.report)?;
            r.set("images", &p.map.images)?;
            r.set("self_pair_is_identity", id.report.is_identity && id.report.member)?;
            r.verdict = Verdict::from_bool(p.report.member && id.report.is_identity);
            Ok(r)
        }
        Command::ShadowCompare { k, j, class, map, other_map, bound } => {
            let mut r = Report::new("shadow-compare");
            let (kk, jj) = (knot(k, &mut r)?, knot(j, &mut r)?);
            let c1 = candidate(&kk, &jj, *class, map.as_ref(), &mut r)?;
            let c2 = match other_map {
                Some(_) => candidate(&kk, &jj, *class, other_map.as_ref(), &mut r)?,
                None => canonical_tau(&jj, *class)?,
            };
            let s = pi1_shadow_compare(&c1, &c2, *bound)?;
            r.set("shadow", &s)?;
            r.exhaustive = Some(s.exhaustive);
            r.assume("comparison at the level of induced fundamental groups only");
            r.verdict = match s.verdict {
                ShadowVerdict::AgreeUpToConjugacy => Verdict::Pass,
                ShadowVerdict::Differ => Verdict::Fail,
                ShadowVerdict::UndecidedAtBound => Verdict::UndecidedAtBound,
            };
            Ok(r)
        }
        Command::ConcordanceCheck { certificate, class, based } => {
            let mut r = Report::new("concordance-check");
            let cert = load_certificate(certificate, &mut r)?;
            let rep = check_n_concordance(&cert, *class, *based)?;
            r.assume(BOUNDARY_ASSUMPTION);
            r.set("check", &rep)?;
            let mut ok = rep.pass;
            if rep.pass && *class >= 2 {
                let iso = quotient_iso_from_concordance(&cert, class - 1)?;
                ok &= iso.pass;
                r.set("quotient_isomorphisms", &iso)?;
            }
            r.verdict = Verdict::from_bool(ok);
            Ok(r)
        }
        Command::ConcordanceExtract { certificate, class } => {
            let mut r = Report::new("concordance-extract");
            let cert = load_certificate(certificate, &mut r)?;
            r.assume(BOUNDARY_ASSUMPTION);
            let e = extendable_from_concordance(&cert, *class)?;
            record_candidate(&mut r, "candidate", &e.candidate)?;
            r.set("restriction_is_projection", e.restriction_is_projection)?;
            let canon = canonical_tau(&cert.j, *class)?;
            let s = pi1_shadow_compare(&e.candidate, &canon, 2)?;
            r.set("shadow", &s)?;
            r.verdict = Verdict::from_bool(
                e.candidate.passes() && e.restriction_is_projection && s.verdict == ShadowVerdict::AgreeUpToConjugacy,
            );
            Ok(r)
        }
        Command::Satellite { file, class } => {
            let mut r = Report::new("satellite");
            let doc = load(file, &mut r)?;
            let name = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let j = doc.knot(&name)?;
            let spec = doc.satellite.as_ref().ok_or_else(|| Error::Parse {
                section: "satellite".into(),
                line: 0,
                message: "document has no [satellite] section".into(),
            })?;
            let input = meridian_satellite(&j, (spec.l_group.clone(), spec.l_mu.clone(), spec.l_lambda.clone()))?;
            let rep = satellite_pipeline(&input, *class)?;
            let pi = &rep.amalgam.knot.over.pi;
            r.set("amalgam_generators", &pi.names)?;
            r.set("amalgam_relators", pi.relators.iter().map(|w| pi.render(w)).collect::<Vec<_>>())?;
            r.set(
                "collapse_images",
                rep.collapse.images.iter().map(|w| j.over.pi.render(w)).collect::<Vec<_>>(),
            )?;
            r.set("collapse", json!({
                "relators_die": rep.collapse.relators_die,
                "verification_level": rep.collapse.verification_level,
                "meridian_preserved": rep.collapse.meridian_preserved,
                "eta_torus_commutes": rep.collapse.eta_torus_commutes,
                "over_g": rep.collapse.over_g,
            }))?;
            record_candidate(&mut r, "candidate", &rep.characteristic.candidate)?;
            r.set("shadow", &rep.characteristic.shadow)?;
            r.assume(ASPHERICITY);
            r.verdict = Verdict::from_bool(rep.pass);
            Ok(r)
        }
        Command::Characteristic { k, j, map, class } => {
            let mut r = Report::new("characteristic");
            let (kk, jj) = (knot(k, &mut r)?, knot(j, &mut r)?);
            let words = load(map, &mut r)?.map_words(&kk.over.pi, &jj.over.pi)?;
            let rep = characteristic_to_extendable(&kk, &jj, &words, *class)?;
            record_candidate(&mut r, "candidate", &rep.candidate)?;
            r.set("shadow", &rep.shadow)?;
            r.assume(ASPHERICITY);
            r.verdict = Verdict::from_bool(rep.pass);
            Ok(r)
        }
    }
}

pub fn load_certificate(path: &Path, r: &mut Report) -> Result<ConcordanceCertificate> {
    let doc = load(path, r)?;
    let spec = doc.certificate.clone().ok_or_else(|| Error::Parse {
        section: "certificate".into(),
        line: 0,
        message: "document has no [certificate] section".into(),
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let k = knot(&dir.join(&spec.k), r)?;
    let j = knot(&dir.join(&spec.j), r)?;
    let v = doc.over_g()?;
    ConcordanceCertificate::new(
        k,
        j,
        v,
        spec.incl_k,
        spec.incl_j,
        spec.mu_k,
        spec.mu_j,
        spec.boundary_j,
        spec.boundary_v,
    )
}
