//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use lcsknot::group::Group;
use lcsknot::concordance::{check_n_concordance, extendable_from_concordance, ConcordanceCertificate};
use lcsknot::homology::{h1_kernel_via_rs, h1_twisted, stallings_check, H2Route};
use lcsknot::intmat::AbelianInvariants;
use lcsknot::invariants::{
    bc_automorphism_from_pair, canonical_tau, induced_quotient_iso, pi1_shadow_compare, rebase, same_candidate,
    search_extendable, tower_project, ExtendableMapCandidate, KnotData, ShadowVerdict,
};
use lcsknot::io::cli::dispatch;
use lcsknot::io::format::{parse_word, read_document};
use lcsknot::nq::nilpotent_quotient;
use lcsknot::pc::PcPresentation;
use lcsknot::relquo::{is_isomorphism_over_g, QuotientHom, RelativeQuotient};
use lcsknot::satellite::meridian_satellite;
use lcsknot::words::{FpPresentation, FreeWord};

type Check = Result<String, String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Knot fixtures over a finite group; `heisenberg.knot` has an infinite
/// target and only enters through kernel membership.
const KNOTS: [&str; 8] = [
    "trefoil.knot",
    "trefoil_tietze.knot",
    "trefoil_over_z2.knot",
    "trefoil_over_s3.knot",
    "free2.knot",
    "f2_over_z2.knot",
    "f2_over_z3.knot",
    "f2_over_z4.knot",
];

fn knot(name: &str) -> Result<KnotData, String> {
    read_document(&fixtures().join(name)).and_then(|d| d.knot(name)).map_err(err)
}

fn all_knots() -> Result<Vec<KnotData>, String> {
    KNOTS.iter().map(|n| knot(n)).collect()
}

/// First homology of the kernel, by counting: a free group of rank r has
/// index-m subgroups free of rank 1 + m(r - 1); a one-relator group over the
/// trivial group has abelianization Z^(r-1) + Z/d, d the gcd of exponent sums.
fn h1_oracle(p: &FpPresentation, order: usize) -> Option<(usize, Vec<u64>)> {
    let r = p.ngens();
    match p.relators.len() {
        0 => Some((1 + order * (r - 1), vec![])),
        1 if order == 1 => {
            let d = p.relators[0].exponent_sums(r).iter().fold(0i64, |g, &x| num_gcd(g, x));
            match d {
                0 => Some((r, vec![])),
                1 => Some((r - 1, vec![])),
                d => Some((r - 1, vec![d as u64])),
            }
        }
        _ => None,
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

fn criterion_1() -> Check {
    let cases = [
        ("trefoil.knot", 1, 0),
        ("free2.knot", 2, 0),
        ("f2_over_z2.knot", 3, 0),
        ("f2_over_z3.knot", 4, 0),
        ("f2_over_z4.knot", 5, 0),
    ];
    let mut seen = Vec::new();
    for (name, rank, _) in cases {
        let over = read_document(&fixtures().join(name)).and_then(|d| d.over_g()).map_err(err)?;
        let order = over.g.order().ok_or("finite G expected")?;
        let fox = h1_twisted(&over).map_err(err)?;
        let rs = h1_kernel_via_rs(&over).map_err(err)?;
        let (oracle_rank, oracle_torsion) = h1_oracle(&over.pi, order).ok_or("no oracle for fixture")?;
        ensure(fox == rs, || format!("{name}: fox {fox} vs kernel {rs}"))?;
        ensure(fox.free_rank == oracle_rank && fox.torsion.is_empty() == oracle_torsion.is_empty(), || {
            format!("{name}: {fox} vs counted rank {oracle_rank}")
        })?;
        ensure(fox.free_rank == rank, || format!("{name}: expected rank {rank}, got {fox}"))?;
        seen.push(format!("{}={fox}", name.trim_end_matches(".knot")));
    }
    Ok(seen.join(" "))
}

/// Basic commutators in the sense of Hall, counted by weight.
fn hall_basis_counts(r: usize, max_weight: usize) -> Vec<usize> {
    // (weight, Some((left, right))) with indices into the ordered list
    let mut basis: Vec<(usize, Option<(usize, usize)>)> = (0..r).map(|_| (1, None)).collect();
    for w in 2..=max_weight {
        let before = basis.len();
        let mut fresh = Vec::new();
        for i in 0..before {
            for j in 0..i {
                if basis[i].0 + basis[j].0 != w {
                    continue;
                }
                if let Some((_, t)) = basis[i].1 {
                    if t > j {
                        continue;
                    }
                }
                fresh.push((w, Some((i, j))));
            }
        }
        basis.extend(fresh);
    }
    (1..=max_weight).map(|w| basis.iter().filter(|b| b.0 == w).count()).collect()
}

fn criterion_2() -> Check {
    let q = nilpotent_quotient(&FpPresentation::free(["x", "y"]), 5).map_err(err)?;
    q.group.check_consistency().map_err(err)?;
    let got = q.layer_sizes();
    let oracle = hall_basis_counts(2, 5);
    ensure(got == oracle, || format!("nq {got:?} vs hall {oracle:?}"))?;
    ensure(q.layers().iter().all(|l| l.torsion.is_empty()), || "torsion in a free layer".into())?;
    ensure(got == [2, 1, 2, 3, 6], || format!("{got:?}"))?;
    Ok(format!("layer ranks {got:?}"))
}

fn criterion_3() -> Check {
    let a = read_document(&fixtures().join("meridian.knot")).and_then(|d| d.over_g()).map_err(err)?;
    let b = read_document(&fixtures().join("trefoil.knot")).and_then(|d| d.over_g()).map_err(err)?;
    let words = read_document(&fixtures().join("meridian.map"))
        .and_then(|d| d.map_words(&a.pi, &b.pi))
        .map_err(err)?;
    let route = H2Route::DeclaredTrivial("circle and knot exterior in the 3-sphere".into());
    let rep = stallings_check(&a, &b, &words, route, &[2, 3]).map_err(err)?;
    let z = AbelianInvariants::free(1);
    ensure(rep.h1_fingerprint.source == z && rep.h1_fingerprint.target == z, || {
        format!("fingerprints {} / {}", rep.h1_fingerprint.source, rep.h1_fingerprint.target)
    })?;
    ensure(rep.h1_map.isomorphism, || "induced map on H1 is not an isomorphism".into())?;
    ensure(matches!(&rep.h2_route, H2Route::DeclaredTrivial(p) if !p.is_empty()), || "no provenance".into())?;
    for (n, iso) in &rep.quotients {
        ensure(iso.isomorphism && iso.target_layers.iter().skip(1).all(|l| l.is_trivial()), || {
            format!("level {n}: {iso:?}")
        })?;
    }
    ensure(rep.pass, || "stallings check failed".into())?;
    Ok("Z -> trefoil iso at levels 2, 3".into())
}

fn criterion_4() -> Check {
    let mut count = 0;
    for j in all_knots()? {
        for n in 2..=4 {
            let c = canonical_tau(&j, n).map_err(err)?;
            ensure(c.passes(), || format!("{} at level {n}: {:?}", j.name, c.report))?;
            count += 1;
        }
    }
    Ok(format!("{count} canonical candidates"))
}

/// Every passing candidate used by the tower and quotient criteria.
fn passing_candidates(max_level: usize) -> Result<Vec<ExtendableMapCandidate>, String> {
    let mut out = Vec::new();
    for j in all_knots()? {
        for n in 2..=max_level {
            out.push(canonical_tau(&j, n).map_err(err)?);
        }
    }
    let k = knot("trefoil.knot")?;
    let j = knot("trefoil_tietze.knot")?;
    let words = read_document(&fixtures().join("trefoil_to_tietze.map"))
        .and_then(|d| d.map_words(&k.over.pi, &j.over.pi))
        .map_err(err)?;
    for n in 2..=max_level {
        out.push(ExtendableMapCandidate::from_words(&k, &j, j.quotient(n).map_err(err)?, &words));
    }
    let s3 = knot("trefoil_over_s3.knot")?;
    out.extend(search_extendable(&s3, &s3, 3, 0).map_err(err)?.candidates);
    for c in &out {
        ensure(c.passes(), || format!("{} -> {} level {} does not pass", c.source.name, c.target.name, c.level))?;
    }
    Ok(out)
}

fn criterion_5() -> Check {
    let cands = passing_candidates(4)?;
    let mut projected = 0;
    for c in cands.iter().filter(|c| c.level >= 3) {
        let low = tower_project(c).map_err(err)?;
        ensure(low.level + 1 == c.level && low.passes(), || {
            format!("{} -> {} level {}: projection fails", c.source.name, c.target.name, c.level)
        })?;
        projected += 1;
    }
    for j in all_knots()? {
        for n in 3..=4 {
            let down = tower_project(&canonical_tau(&j, n).map_err(err)?).map_err(err)?;
            ensure(same_candidate(&down, &canonical_tau(&j, n - 1).map_err(err)?), || {
                format!("{}: canonical at {n} does not project to canonical", j.name)
            })?;
        }
    }
    Ok(format!("{projected} projections"))
}

fn criterion_6() -> Check {
    let mut checks = 0;
    for c in passing_candidates(3)? {
        for j in 1..c.level {
            let r = induced_quotient_iso(&c, j).map_err(err)?;
            ensure(r.iso.isomorphism && r.mu_condition && r.peripheral_condition && r.level == j + 1, || {
                format!("{} -> {} at j = {j}: {r:?}", c.source.name, c.target.name)
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} induced isomorphisms"))
}

fn criterion_7() -> Check {
    let mut pairs = 0;
    for j in all_knots()? {
        for n in 2..=3 {
            let c = canonical_tau(&j, n).map_err(err)?;
            let id = bc_automorphism_from_pair(&c, &c).map_err(err)?;
            ensure(id.report.is_identity && id.report.member, || format!("{}: (c, c) not identity", j.name))?;
            let [mu, lambda] = j.peripheral();
            // peripheral words over the identity of G
            let g: &lcsknot::group::AmbientGroup = &j.over.g;
            let gm = j.over.gamma(&mu);
            let order = (1..=g.order().unwrap_or(1) as i64).find(|&k| g.is_identity(&g.pow(&gm, k))).unwrap_or(1);
            let mu_k = mu.pow(order);
            for a in [mu_k.clone(), lambda.clone(), mu_k.mul(&lambda), lambda.pow(-2)] {
                let out = rebase(&c, &a).map_err(err)?;
                let rc = out.candidate.ok_or_else(|| format!("{}: rebase refused a peripheral word", j.name))?;
                ensure(rc.passes(), || format!("{}: rebased candidate fails", j.name))?;
                let p = bc_automorphism_from_pair(&c, &rc).map_err(err)?;
                ensure(p.report.member, || format!("{} level {n}: p not in A_n: {:?}", j.name, p.report))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} rebased pairs"))
}

fn criterion_8() -> Check {
    let mut levels = 0;
    for j in all_knots()? {
        let cert = ConcordanceCertificate::product(&j);
        for n in 1..=4 {
            let r = check_n_concordance(&cert, n, true).map_err(err)?;
            ensure(r.pass, || format!("{} level {n}: {r:?}", j.name))?;
        }
        for n in 2..=4 {
            let e = extendable_from_concordance(&cert, n).map_err(err)?;
            let canon = canonical_tau(&j, n).map_err(err)?;
            ensure(e.restriction_is_projection && same_candidate(&e.candidate, &canon), || {
                format!("{} level {n}: extracted map differs from canonical", j.name)
            })?;
            let s = pi1_shadow_compare(&e.candidate, &canon, 1).map_err(err)?;
            ensure(s.verdict == ShadowVerdict::AgreeUpToConjugacy, || format!("{}: {s:?}", j.name))?;
            levels += 1;
        }
    }
    Ok(format!("{levels} extractions agree"))
}

fn criterion_9() -> Check {
    let mut done = Vec::new();
    for (name, unknot) in [("satellite_trefoil_unknot.sat", true), ("satellite_trefoil_trefoil.sat", false)] {
        let doc = read_document(&fixtures().join(name)).map_err(err)?;
        let j = doc.knot("trefoil").map_err(err)?;
        let spec = doc.satellite.clone().ok_or("no satellite section")?;
        let input = meridian_satellite(&j, (spec.l_group, spec.l_mu, spec.l_lambda)).map_err(err)?;
        for n in 2..=3 {
            let rep = lcsknot::satellite::satellite_pipeline(&input, n).map_err(err)?;
            let c = &rep.collapse;
            ensure(c.relators_die && c.meridian_preserved && c.over_g && c.eta_torus_commutes, || {
                format!("{name} level {n}: {c:?}")
            })?;
            let ch = &rep.characteristic;
            ensure(ch.candidate.passes() && ch.shadow.verdict == ShadowVerdict::AgreeUpToConjugacy, || {
                format!("{name} level {n}: characteristic map {:?}", ch.shadow.verdict)
            })?;
            if unknot {
                // Tietze moves on the amalgam: s = 1 and m = a^-1
                let a = FreeWord::generator(0);
                let dict = [a.clone(), FreeWord::generator(1), FreeWord::identity(), a.inverse()];
                let canon = canonical_tau(&j, n).map_err(err)?;
                let expect: Vec<_> = dict.iter().map(|w| canon.apply(w)).collect();
                ensure(ch.candidate.images == expect, || format!("level {n}: not canonical after Tietze"))?;
            }
        }
        done.push(if unknot { "L = unknot" } else { "L = trefoil" });
    }
    Ok(done.join(", "))
}

fn criterion_10() -> Check {
    let over = read_document(&fixtures().join("heisenberg.knot")).and_then(|d| d.over_g()).map_err(err)?;
    let w = parse_word("XYxyT", &over.pi.names)?;
    ensure(over.kernel_membership(&w), || "[x,y]t^-1 is not in the kernel".into())?;
    let f2 = lcsknot::group::OverG::trivial(FpPresentation::free(["x", "y"]));
    let rq = Arc::new(RelativeQuotient::new(&f2, 3).map_err(err)?);
    // x, y, [x, y] with [x, y] central
    let mut heis = PcPresentation::free_abelian(3);
    heis.weights = vec![1, 1, 2];
    heis.conj[0][1] = Some(vec![0, 1, -1]);
    ensure(heis == PcPresentation::heisenberg(), || "hand-built presentation differs from library's".into())?;
    let h = Arc::new(RelativeQuotient::from_pc(heis).map_err(err)?);
    let f = QuotientHom::new(&rq, &h, h.gen_images[..2].to_vec()).map_err(err)?;
    let r = is_isomorphism_over_g(&f).map_err(err)?;
    ensure(r.isomorphism, || format!("{r:?}"))?;
    let back = f.inverse().map_err(err)?;
    ensure(is_isomorphism_over_g(&back).map_err(err)?.isomorphism, || "inverse is not an isomorphism".into())?;
    Ok("F2/Γ3 isomorphic to Heisenberg".into())
}

fn strip_timing(s: &str) -> String {
    match s.find("\"timing\":{") {
        Some(i) => {
            let j = i + s[i..].find('}').expect("closing brace");
            format!("{}{}", &s[..i], &s[j + 1..])
        }
        None => s.to_string(),
    }
}

fn criterion_11() -> Check {
    let f = |n: &str| fixtures().join(n).display().to_string();
    let mut runs: Vec<Vec<String>> = Vec::new();
    for k in KNOTS {
        for cmd in ["kernel", "relquo", "h1", "h2", "nq"] {
            let mut v = vec![cmd.to_string(), f(k)];
            if cmd == "h1" {
                v.push("--oracle".into());
            }
            runs.push(v);
        }
        for cmd in ["extendable-check", "extendable-search", "tower", "shadow-compare"] {
            let class = if cmd == "extendable-search" { "2" } else { "3" };
            runs.push(vec![cmd.into(), f(k), f(k), "--class".into(), class.into()]);
        }
        for cmd in ["rebase", "an-auto"] {
            let by = if k.starts_with("trefoil") { "abaabaA^6" } else { "x" };
            let by = if k == "trefoil_tietze.knot" { "Dc" } else { by };
            runs.push(vec![cmd.into(), f(k), f(k), "--by".into(), by.into()]);
        }
    }
    for cmd in ["nq", "h2"] {
        runs.push(vec![cmd.into(), f("heisenberg.knot"), "--class".into(), "3".into()]);
    }
    for extra in [
        vec!["stallings", "meridian.knot", "trefoil.knot", "--map", "meridian.map"],
        vec!["stallings", "meridian_over_z2.knot", "trefoil_over_z2.knot", "--map", "meridian.map"],
        vec!["extendable-check", "trefoil.knot", "trefoil_tietze.knot", "--map", "trefoil_to_tietze.map"],
        vec!["characteristic", "trefoil.knot", "trefoil_tietze.knot", "--map", "trefoil_to_tietze.map"],
        vec!["concordance-check", "trefoil_product.cert", "--based"],
        vec!["concordance-check", "free2_conjugate.cert", "--based"],
        vec!["concordance-extract", "free2_product.cert"],
        vec!["satellite", "satellite_trefoil_unknot.sat"],
        vec!["satellite", "satellite_trefoil_trefoil.sat"],
        vec!["satellite", "satellite_unknot_trefoil.sat"],
    ] {
        runs.push(
            extra
                .into_iter()
                .map(|a| if a.contains('.') { f(a) } else { a.to_string() })
                .collect(),
        );
    }
    for args in &runs {
        let argv = std::iter::once("lcsknot".to_string()).chain(args.iter().cloned());
        let one = dispatch(argv.clone());
        let two = dispatch(argv);
        ensure(one.code == two.code && one.code < 3, || format!("{args:?}: exit {} / {} {}", one.code, two.code, one.stderr))?;
        ensure(strip_timing(&one.stdout) == strip_timing(&two.stdout), || format!("{args:?}: reports differ"))?;
    }
    Ok(format!("{} invocations reproduced", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("twisted H1 agrees with the kernel route and with counting", criterion_1),
        ("free nilpotent layer ranks match the Hall basis", criterion_2),
        ("meridian of the trefoil induces quotient isomorphisms", criterion_3),
        ("canonical maps are extendable", criterion_4),
        ("extendable maps project down the tower", criterion_5),
        ("extendable maps induce quotient isomorphisms", criterion_6),
        ("rebasing is realized by boundary automorphisms", criterion_7),
        ("product certificates reproduce the canonical map", criterion_8),
        ("meridian satellites collapse onto the companion", criterion_9),
        ("Heisenberg group as a target and as a quotient", criterion_10),
        ("reports are deterministic", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
