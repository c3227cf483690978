//! Sectioned line-based input documents.
//!
//! ```text
//! [group]
//! generators = a, b
//! relators = abaBAB
//!
//! [gamma]
//! G = cyclic:2
//! a = 1
//! b = 1
//!
//! [peripheral]
//! mu = a
//! lambda = abaabaA^6
//! ```
//!
//! Generators are single lowercase letters; an uppercase letter is the
//! inverse, `x^k` a power (`X^k` = `x^-k`), `1` the identity.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{AmbientGroup, FiniteGroup, FiniteKind, GElem, OverG};
use crate::invariants::{BoundaryCondition, KnotData};
use crate::pc::PcPresentation;
use crate::words::{FpPresentation, FreeWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaKind {
    Trivial,
    Cyclic(usize),
    Table(Vec<Vec<usize>>),
    Perm(usize),
    Pc(PcPresentation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSpec {
    pub kind: GammaKind,
    /// one integer list per generator, in generator order
    pub images: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralSpec {
    pub mu: FreeWord,
    pub lambda: FreeWord,
    pub basing: Option<FreeWord>,
    pub bc_mu: (i64, i64),
}

/// Knot files are referenced relative to the certificate; words live in the document's group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateSpec {
    pub k: String,
    pub j: String,
    pub incl_k: Vec<FreeWord>,
    pub incl_j: Vec<FreeWord>,
    pub mu_k: FreeWord,
    pub mu_j: FreeWord,
    pub boundary_j: Vec<FreeWord>,
    pub boundary_v: Vec<FreeWord>,
}

/// Companion knot in the 3-sphere; `η` is a meridian of the document's knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatelliteSpec {
    pub eta: String,
    pub l_group: FpPresentation,
    pub l_mu: FreeWord,
    pub l_lambda: FreeWord,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InputDocument {
    pub group: Option<FpPresentation>,
    pub gamma: Option<GammaSpec>,
    pub peripheral: Option<PeripheralSpec>,
    pub certificate: Option<CertificateSpec>,
    pub satellite: Option<SatelliteSpec>,
    /// `(source generator, word in the target's generators)`, unparsed
    pub map: Option<Vec<(String, String)>>,
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    value: &'a str,
}

fn perr(section: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        section: section.to_string(),
        line,
        message: message.into(),
    }
}

/// Parses a word over single-letter generator names.
pub fn parse_word(s: &str, names: &[String]) -> std::result::Result<FreeWord, String> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() || chars == ['1'] {
        return Ok(FreeWord::identity());
    }
    let mut syl = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !c.is_ascii_alphabetic() {
            return Err(format!("unexpected character '{c}' in word \"{s}\""));
        }
        let lower = c.to_ascii_lowercase().to_string();
        let g = names
            .iter()
            .position(|n| *n == lower)
            .ok_or_else(|| format!("undeclared generator '{lower}'"))?;
        let mut e: i64 = if c.is_ascii_uppercase() { -1 } else { 1 };
        i += 1;
        if i < chars.len() && chars[i] == '^' {
            let start = i + 1;
            let mut end = start;
            if end < chars.len() && chars[end] == '-' {
                end += 1;
            }
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            let k: i64 = chars[start..end]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| format!("malformed exponent in word \"{s}\""))?;
            e *= k;
            i = end;
        }
        syl.push((g, e));
    }
    Ok(FreeWord::from_syllables(syl))
}

fn parse_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_ints(s: &str) -> std::result::Result<Vec<i64>, String> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i64>().map_err(|_| format!("expected an integer, found \"{x}\"")))
        .collect()
}

fn parse_names(s: &str) -> std::result::Result<Vec<String>, String> {
    let names: Vec<String> = parse_list(s).into_iter().map(String::from).collect();
    for (i, n) in names.iter().enumerate() {
        if n.len() != 1 || !n.chars().all(|c| c.is_ascii_lowercase()) {
            return Err(format!("generator names are single lowercase letters, found \"{n}\""));
        }
        if names[..i].contains(n) {
            return Err(format!("generator \"{n}\" declared twice"));
        }
    }
    Ok(names)
}

/// `orders 0 0 0; weights 1 1 2; conj 1 2 = 0 1 -1; power 1 = 0 1`
pub fn parse_pc(s: &str) -> std::result::Result<PcPresentation, String> {
    let mut orders: Option<Vec<i64>> = None;
    let mut weights: Option<Vec<usize>> = None;
    let mut conj = Vec::new();
    let mut powers = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (head, rest) = part.split_once(char::is_whitespace).unwrap_or((part, ""));
        match head {
            "orders" => orders = Some(parse_ints(rest)?),
            "weights" => weights = Some(parse_ints(rest)?.into_iter().map(|w| w.max(0) as usize).collect()),
            "conj" | "power" => {
                let (idx, vec) = rest.split_once('=').ok_or_else(|| format!("missing '=' in \"{part}\""))?;
                let idx = parse_ints(idx)?;
                let v = parse_ints(vec)?;
                if head == "conj" {
                    if idx.len() != 2 {
                        return Err("conj takes two indices".into());
                    }
                    conj.push((idx[0], idx[1], v));
                } else {
                    if idx.len() != 1 {
                        return Err("power takes one index".into());
                    }
                    powers.push((idx[0], v));
                }
            }
            other => return Err(format!("unknown pc clause \"{other}\"")),
        }
    }
    let orders = orders.ok_or("pc presentation needs an orders clause")?;
    let n = orders.len();
    let mut p = PcPresentation::abelian(&orders);
    if let Some(w) = weights {
        if w.len() != n {
            return Err("weights length differs from orders".into());
        }
        p.weights = w;
    }
    let index = |i: i64| -> std::result::Result<usize, String> {
        if i < 1 || i as usize > n {
            Err(format!("pc generator index {i} out of range"))
        } else {
            Ok(i as usize - 1)
        }
    };
    for (i, j, v) in conj {
        p.conj[index(i)?][index(j)?] = Some(v);
    }
    for (i, v) in powers {
        p.powers[index(i)?] = Some(v);
    }
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

pub fn render_pc(p: &PcPresentation) -> String {
    let ints = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    let mut parts = vec![format!("orders {}", ints(&p.orders))];
    if p.weights.iter().any(|&w| w != 1) {
        parts.push(format!("weights {}", p.weights.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")));
    }
    for i in 0..p.len() {
        for j in 0..p.len() {
            if let Some(v) = &p.conj[i][j] {
                parts.push(format!("conj {} {} = {}", i + 1, j + 1, ints(v)));
            }
        }
    }
    for i in 0..p.len() {
        if let Some(v) = &p.powers[i] {
            if v.iter().any(|&x| x != 0) {
                parts.push(format!("power {} = {}", i + 1, ints(v)));
            }
        }
    }
    parts.join("; ")
}

fn parse_kind(value: &str) -> std::result::Result<GammaKind, String> {
    let (head, rest) = value.split_once(':').unwrap_or((value, ""));
    match head.trim() {
        "trivial" => Ok(GammaKind::Trivial),
        "cyclic" => rest
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(GammaKind::Cyclic)
            .ok_or_else(|| format!("cyclic order must be a positive integer, found \"{}\"", rest.trim())),
        "table" => {
            let rows = rest
                .split('/')
                .map(|r| parse_ints(r).map(|v| v.into_iter().map(|x| x.max(0) as usize).collect()))
                .collect::<std::result::Result<Vec<Vec<usize>>, _>>()?;
            Ok(GammaKind::Table(rows))
        }
        "perm" => rest
            .trim()
            .parse::<usize>()
            .map(GammaKind::Perm)
            .map_err(|_| "perm needs a degree".to_string()),
        "pc" => parse_pc(rest).map(GammaKind::Pc),
        other => Err(format!("unknown group kind \"{other}\"")),
    }
}

fn render_kind(k: &GammaKind) -> String {
    match k {
        GammaKind::Trivial => "trivial".into(),
        GammaKind::Cyclic(n) => format!("cyclic:{n}"),
        GammaKind::Table(rows) => format!(
            "table:{}",
            rows.iter()
                .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(" / ")
        ),
        GammaKind::Perm(d) => format!("perm:{d}"),
        GammaKind::Pc(p) => format!("pc:{}", render_pc(p)),
    }
}

fn split_sections(text: &str) -> Result<Vec<(String, usize, Vec<Line<'_>>)>> {
    let mut sections: Vec<(String, usize, Vec<Line<'_>>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            let name = line
                .strip_prefix('[')
                .and_then(|l| l.strip_suffix(']'))
                .ok_or_else(|| perr("", no, "malformed section header"))?
                .trim()
                .to_string();
            if sections.iter().any(|(s, _, _)| *s == name) {
                return Err(perr(&name, no, "section appears twice"));
            }
            sections.push((name, no, Vec::new()));
            continue;
        }
        let Some((section, _, lines)) = sections.last_mut() else {
            return Err(perr("", no, "content before the first section"));
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr(section, no, "expected key = value"))?;
        lines.push(Line {
            no,
            key: key.trim(),
            value: value.trim(),
        });
    }
    Ok(sections)
}

fn take<'a>(lines: &'a [Line<'a>], section: &str, at: usize, key: &str) -> Result<&'a Line<'a>> {
    lines
        .iter()
        .find(|l| l.key == key)
        .ok_or_else(|| perr(section, at, format!("missing key \"{key}\"")))
}

fn check_keys(lines: &[Line<'_>], section: &str, allowed: &[&str]) -> Result<()> {
    for l in lines {
        if !allowed.contains(&l.key) {
            return Err(perr(section, l.no, format!("unknown key \"{}\"", l.key)));
        }
    }
    Ok(())
}

fn words(l: &Line<'_>, section: &str, names: &[String]) -> Result<Vec<FreeWord>> {
    parse_list(l.value)
        .into_iter()
        .map(|w| parse_word(w, names).map_err(|m| perr(section, l.no, m)))
        .collect()
}

fn word(l: &Line<'_>, section: &str, names: &[String]) -> Result<FreeWord> {
    parse_word(l.value, names).map_err(|m| perr(section, l.no, m))
}

pub fn parse_document(text: &str) -> Result<InputDocument> {
    let sections = split_sections(text)?;
    let mut doc = InputDocument::default();
    let get = |name: &str| sections.iter().find(|(s, _, _)| s == name);
    for (name, no, _) in &sections {
        if !["group", "gamma", "peripheral", "certificate", "satellite", "map"].contains(&name.as_str()) {
            return Err(perr(name, *no, "unknown section"));
        }
    }
    let mut names: Vec<String> = Vec::new();
    if let Some((s, at, lines)) = get("group") {
        check_keys(lines, s, &["generators", "relators"])?;
        let g = take(lines, s, *at, "generators")?;
        names = parse_names(g.value).map_err(|m| perr(s, g.no, m))?;
        let rels = match lines.iter().find(|l| l.key == "relators") {
            Some(l) => words(l, s, &names)?,
            None => Vec::new(),
        };
        doc.group = Some(FpPresentation::new(names.clone(), rels)?);
    }
    if let Some((s, at, lines)) = get("gamma") {
        if doc.group.is_none() {
            return Err(perr(s, *at, "gamma needs a [group] section"));
        }
        let k = take(lines, s, *at, "G")?;
        let kind = parse_kind(k.value).map_err(|m| perr(s, k.no, m))?;
        let mut allowed: Vec<&str> = names.iter().map(String::as_str).collect();
        allowed.push("G");
        check_keys(lines, s, &allowed)?;
        let mut images = Vec::new();
        for n in &names {
            match lines.iter().find(|l| l.key == n) {
                Some(l) => images.push(parse_ints(l.value).map_err(|m| perr(s, l.no, m))?),
                None if kind == GammaKind::Trivial => images.push(vec![0]),
                None => return Err(perr(s, *at, format!("no image for generator \"{n}\""))),
            }
        }
        doc.gamma = Some(GammaSpec { kind, images });
    }
    if let Some((s, at, lines)) = get("peripheral") {
        check_keys(lines, s, &["mu", "lambda", "basing", "bc_mu"])?;
        let mu = word(take(lines, s, *at, "mu")?, s, &names)?;
        let lambda = word(take(lines, s, *at, "lambda")?, s, &names)?;
        let basing = lines.iter().find(|l| l.key == "basing").map(|l| word(l, s, &names)).transpose()?;
        let bc_mu = match lines.iter().find(|l| l.key == "bc_mu") {
            None => (1, 0),
            Some(l) => match parse_ints(l.value).map_err(|m| perr(s, l.no, m))?[..] {
                [a, b] => (a, b),
                _ => return Err(perr(s, l.no, "bc_mu takes two integers")),
            },
        };
        doc.peripheral = Some(PeripheralSpec { mu, lambda, basing, bc_mu });
    }
    if let Some((s, at, lines)) = get("certificate") {
        check_keys(lines, s, &["k", "j", "incl_k", "incl_j", "mu_k", "mu_j", "boundary_j", "boundary_v"])?;
        let t = |k: &str| take(lines, s, *at, k);
        doc.certificate = Some(CertificateSpec {
            k: t("k")?.value.to_string(),
            j: t("j")?.value.to_string(),
            incl_k: words(t("incl_k")?, s, &names)?,
            incl_j: words(t("incl_j")?, s, &names)?,
            mu_k: word(t("mu_k")?, s, &names)?,
            mu_j: word(t("mu_j")?, s, &names)?,
            boundary_j: words(t("boundary_j")?, s, &names)?,
            boundary_v: words(t("boundary_v")?, s, &names)?,
        });
    }
    if let Some((s, at, lines)) = get("satellite") {
        check_keys(lines, s, &["eta", "l_generators", "l_relators", "l_mu", "l_lambda"])?;
        let eta = take(lines, s, *at, "eta")?;
        if eta.value != "meridian" {
            return Err(perr(s, eta.no, "only eta = meridian is supported"));
        }
        let g = take(lines, s, *at, "l_generators")?;
        let l_names = parse_names(g.value).map_err(|m| perr(s, g.no, m))?;
        let rels = match lines.iter().find(|l| l.key == "l_relators") {
            Some(l) => words(l, s, &l_names)?,
            None => Vec::new(),
        };
        doc.satellite = Some(SatelliteSpec {
            eta: eta.value.to_string(),
            l_group: FpPresentation::new(l_names.clone(), rels)?,
            l_mu: word(take(lines, s, *at, "l_mu")?, s, &l_names)?,
            l_lambda: word(take(lines, s, *at, "l_lambda")?, s, &l_names)?,
        });
    }
    if let Some((_, _, lines)) = get("map") {
        doc.map = Some(lines.iter().map(|l| (l.key.to_string(), l.value.split_whitespace().collect())).collect());
    }
    Ok(doc)
}

/// Reads and parses a document; parse diagnostics carry the file name.
pub fn read_document(path: &std::path::Path) -> Result<InputDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| match e {
        Error::Parse { section, line, message } => Error::Parse {
            section: format!("{}: {section}", path.display()),
            line,
            message,
        },
        other => other,
    })
}

fn join_words(ws: &[FreeWord], names: &[String]) -> String {
    ws.iter().map(|w| w.render(names)).collect::<Vec<_>>().join(", ")
}

pub fn render_document(doc: &InputDocument) -> String {
    let mut out = String::new();
    let names = doc.group.as_ref().map(|g| g.names.clone()).unwrap_or_default();
    if let Some(g) = &doc.group {
        let _ = writeln!(out, "[group]\ngenerators = {}", g.names.join(", "));
        if !g.relators.is_empty() {
            let _ = writeln!(out, "relators = {}", join_words(&g.relators, &names));
        }
        out.push('\n');
    }
    if let Some(gm) = &doc.gamma {
        let _ = writeln!(out, "[gamma]\nG = {}", render_kind(&gm.kind));
        for (n, img) in names.iter().zip(&gm.images) {
            let _ = writeln!(out, "{n} = {}", img.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
        }
        out.push('\n');
    }
    if let Some(p) = &doc.peripheral {
        let _ = writeln!(out, "[peripheral]\nmu = {}\nlambda = {}", p.mu.render(&names), p.lambda.render(&names));
        if let Some(b) = &p.basing {
            let _ = writeln!(out, "basing = {}", b.render(&names));
        }
        if p.bc_mu != (1, 0) {
            let _ = writeln!(out, "bc_mu = {} {}", p.bc_mu.0, p.bc_mu.1);
        }
        out.push('\n');
    }
    if let Some(c) = &doc.certificate {
        let _ = writeln!(out, "[certificate]\nk = {}\nj = {}", c.k, c.j);
        let _ = writeln!(out, "incl_k = {}\nincl_j = {}", join_words(&c.incl_k, &names), join_words(&c.incl_j, &names));
        let _ = writeln!(out, "mu_k = {}\nmu_j = {}", c.mu_k.render(&names), c.mu_j.render(&names));
        let _ = writeln!(
            out,
            "boundary_j = {}\nboundary_v = {}",
            join_words(&c.boundary_j, &names),
            join_words(&c.boundary_v, &names)
        );
        out.push('\n');
    }
    if let Some(s) = &doc.satellite {
        let ln = &s.l_group.names;
        let _ = writeln!(out, "[satellite]\neta = {}\nl_generators = {}", s.eta, ln.join(", "));
        if !s.l_group.relators.is_empty() {
            let _ = writeln!(out, "l_relators = {}", join_words(&s.l_group.relators, ln));
        }
        let _ = writeln!(out, "l_mu = {}\nl_lambda = {}", s.l_mu.render(ln), s.l_lambda.render(ln));
        out.push('\n');
    }
    if let Some(m) = &doc.map {
        out.push_str("[map]\n");
        for (k, v) in m {
            let _ = writeln!(out, "{k} = {v}");
        }
    }
    out
}

impl InputDocument {
    pub fn presentation(&self) -> Result<&FpPresentation> {
        self.group.as_ref().ok_or_else(|| perr("group", 0, "document has no [group] section"))
    }

    /// `(π, G, γ)`; a missing [gamma] section means the trivial group.
    pub fn over_g(&self) -> Result<OverG> {
        let pi = self.presentation()?.clone();
        let Some(gm) = &self.gamma else {
            return Ok(OverG::trivial(pi));
        };
        let bad = |m: String| perr("gamma", 0, m);
        let scalar = |v: &Vec<i64>| -> Result<usize> {
            match v[..] {
                [x] if x >= 0 => Ok(x as usize),
                _ => Err(bad(format!("expected one nonnegative integer, found {v:?}"))),
            }
        };
        let (g, images) = match &gm.kind {
            GammaKind::Trivial => (AmbientGroup::trivial(), vec![GElem::Fin(0); pi.ngens()]),
            GammaKind::Cyclic(n) => {
                let imgs = gm
                    .images
                    .iter()
                    .map(|v| match v[..] {
                        [x] => Ok(GElem::Fin(x.rem_euclid(*n as i64) as usize)),
                        _ => Err(bad("cyclic images are single integers".into())),
                    })
                    .collect::<Result<_>>()?;
                (AmbientGroup::cyclic(*n)?, imgs)
            }
            GammaKind::Table(rows) => {
                let imgs = gm.images.iter().map(|v| scalar(v).map(GElem::Fin)).collect::<Result<Vec<_>>>()?;
                if imgs.iter().any(|g| g.index() >= rows.len()) {
                    return Err(bad("image index outside the table".into()));
                }
                (AmbientGroup::table(rows.clone()).map_err(|e| bad(e.to_string()))?, imgs)
            }
            GammaKind::Perm(d) => {
                let perms = gm
                    .images
                    .iter()
                    .map(|v| v.iter().map(|&x| usize::try_from(x).map_err(|_| bad("negative point".into()))).collect())
                    .collect::<Result<Vec<Vec<usize>>>>()?;
                let (fg, idx) = FiniteGroup::from_permutations(*d, &perms).map_err(|e| bad(e.to_string()))?;
                let g = AmbientGroup::Finite {
                    kind: FiniteKind::Permutations { degree: *d },
                    group: fg,
                };
                (g, idx.into_iter().map(GElem::Fin).collect())
            }
            GammaKind::Pc(p) => {
                if gm.images.iter().any(|v| v.len() != p.len()) {
                    return Err(bad("pc images need one exponent per pc generator".into()));
                }
                let g = AmbientGroup::pc(p.clone()).map_err(|e| bad(e.to_string()))?;
                let imgs = gm.images.iter().map(|v| GElem::Pc(v.clone())).collect();
                (g, imgs)
            }
        };
        OverG::new(pi, Arc::new(g), images)
    }

    pub fn knot(&self, name: &str) -> Result<KnotData> {
        let over = self.over_g()?;
        let p = self
            .peripheral
            .as_ref()
            .ok_or_else(|| perr("peripheral", 0, "document has no [peripheral] section"))?;
        let bc = BoundaryCondition::new(p.mu.clone(), p.lambda.clone(), p.bc_mu)?;
        let mut k = KnotData::new(name, over, bc)?;
        k.basing = p.basing.clone();
        Ok(k)
    }

    /// Images of `source` generators as words in `target`'s generators.
    pub fn map_words(&self, source: &FpPresentation, target: &FpPresentation) -> Result<Vec<FreeWord>> {
        let m = self.map.as_ref().ok_or_else(|| perr("map", 0, "document has no [map] section"))?;
        source
            .names
            .iter()
            .map(|n| {
                let (_, w) = m
                    .iter()
                    .find(|(k, _)| k == n)
                    .ok_or_else(|| perr("map", 0, format!("no image for generator \"{n}\"")))?;
                parse_word(w, &target.names).map_err(|e| perr("map", 0, e))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "[group]\ngenerators = a, b\nrelators = abaBAB\n\n[peripheral]\nmu = a\nlambda = abaabaA^6\n";

    #[test]
    fn words_and_powers() {
        let names = vec!["a".to_string(), "b".to_string()];
        let w = parse_word("abAB", &names).unwrap();
        let (a, b) = (FreeWord::generator(0), FreeWord::generator(1));
        assert_eq!(w, FreeWord::commutator(&a.inverse(), &b.inverse()));
        assert_eq!(parse_word("a^-3", &names).unwrap(), parse_word("A^3", &names).unwrap());
        assert!(parse_word("ac", &names).is_err());
    }

    #[test]
    fn roundtrip() {
        let d = parse_document(TREFOIL).unwrap();
        let again = parse_document(&render_document(&d)).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn undeclared_generator_position() {
        let err = parse_document("[group]\ngenerators = a, b\nrelators = abc\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                section: "group".into(),
                line: 3,
                message: "undeclared generator 'c'".into()
            }
        );
    }

    #[test]
    fn pc_gamma() {
        let text = "[group]\ngenerators = x, y, t\nrelators = XTxt, YTyt\n[gamma]\nG = pc: orders 0 0 0; weights 1 1 2; conj 1 2 = 0 1 -1\nx = 1 0 0\ny = 0 1 0\nt = 0 0 1\n";
        let d = parse_document(text).unwrap();
        let over = d.over_g().unwrap();
        let xy = parse_word("XYxyT", &over.pi.names).unwrap();
        assert!(over.kernel_membership(&xy));
        assert_eq!(parse_document(&render_document(&d)).unwrap(), d);
    }
}
