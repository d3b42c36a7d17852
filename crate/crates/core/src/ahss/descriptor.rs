//! File formats for the spectral-sequence inputs: space tables, coefficient
//! rows, hint files, and morphism files, with the consistency checks that run
//! at load time.

use crate::abelian::{
    tensor_tor_hom_ext, uct_cohomology, AbelianError, AbelianGroup, Coeff, GradedGroups, IntMatrix,
    UctVariant,
};
use crate::ring::{
    CoefficientRing, Generator, GeneratorKind, PairingTable, RingError, RingPresentation,
};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum AhssError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("{path}: {msg}")]
    Validation { path: String, msg: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("unresolved differential d^{r} at ({p},{q}); supply a hint")]
    Unresolved { r: u32, p: usize, q: usize },
    #[error("naturality hint failed for d^{r} at ({p},{q}): {msg}")]
    Naturality {
        r: u32,
        p: usize,
        q: usize,
        msg: String,
    },
    #[error("d o d is nonzero into ({p},{q}) on page {r}")]
    DdNonzero { r: u32, p: usize, q: usize },
    #[error("extension at n={n}, p={p}: {msg}")]
    Extension { n: usize, p: usize, msg: String },
    #[error("hint conflict: {0}")]
    HintConflict(String),
    #[error("cyclic dependency through {0}")]
    Cycle(String),
    #[error("{0}")]
    Other(String),
}

impl AhssError {
    pub fn parse(path: &Path, line: usize, msg: impl Into<String>) -> Self {
        AhssError::Parse {
            path: path.display().to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub fn validation(path: &Path, msg: impl Into<String>) -> Self {
        AhssError::Validation {
            path: path.display().to_string(),
            msg: msg.into(),
        }
    }
}

/// Group together with an ordered list of generator names. Free generators
/// come first, then torsion generators in invariant-factor order; labels are
/// positional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGroup {
    pub group: AbelianGroup,
    pub labels: Vec<String>,
}

impl LabeledGroup {
    pub fn zero_group() -> Self {
        LabeledGroup {
            group: AbelianGroup::zero_group(),
            labels: Vec::new(),
        }
    }

    /// Per-generator orders, 0 meaning a free generator.
    pub fn orders(&self) -> Vec<BigInt> {
        (0..self.group.gens())
            .map(|i| self.group.order_of(i))
            .collect()
    }
}

/// Graded homology table with labels, valid up to `cap`.
#[derive(Clone, Debug, Default)]
pub struct HomologyTable {
    pub by_degree: BTreeMap<usize, LabeledGroup>,
    pub cap: usize,
}

impl HomologyTable {
    pub fn get(&self, degree: usize) -> Result<LabeledGroup, AbelianError> {
        if degree > self.cap {
            return Err(AbelianError::MissingDegree(degree));
        }
        Ok(self
            .by_degree
            .get(&degree)
            .cloned()
            .unwrap_or_else(LabeledGroup::zero_group))
    }

    pub fn graded(&self) -> GradedGroups {
        let mut g = GradedGroups::new(self.cap);
        for (d, lg) in &self.by_degree {
            g.set(*d, lg.group.clone());
        }
        g
    }

    pub fn labels(&self, degree: usize) -> Vec<String> {
        self.by_degree
            .get(&degree)
            .map(|lg| lg.labels.clone())
            .unwrap_or_default()
    }
}

/// All stored data about one space: reduced homology over Z and Z/2, the
/// mod-2 cohomology ring with its Steenrod squares, an optional integral
/// cohomology table, and the (identity) pairing.
#[derive(Clone, Debug)]
pub struct SpaceDescriptor {
    pub name: String,
    pub cap: usize,
    pub homology_z: HomologyTable,
    pub homology_z2: HomologyTable,
    pub cohomology_z: Option<HomologyTable>,
    pub ring: RingPresentation,
    pub pairing: PairingTable,
    pub path: PathBuf,
}

/// One row of coefficients per q, with generator labels. `full` rows include
/// filtration column p = 0 (whole-space homology); reduced rows start at
/// p = 1.
#[derive(Clone, Debug)]
pub struct CoefficientRow {
    pub name: String,
    pub full: bool,
    pub max_q: usize,
    pub rows: BTreeMap<usize, LabeledGroup>,
}

impl CoefficientRow {
    /// The spin bordism coefficients of a point through degree 8.
    pub fn spin() -> Self {
        let mut rows = BTreeMap::new();
        let z = |l: &str| LabeledGroup {
            group: AbelianGroup::free(1),
            labels: vec![l.into()],
        };
        let z2 = |l: &str| LabeledGroup {
            group: AbelianGroup::cyclic(2),
            labels: vec![l.into()],
        };
        rows.insert(0, z("1"));
        rows.insert(1, z2("a1"));
        rows.insert(2, z2("a1^2"));
        rows.insert(4, z("a2"));
        rows.insert(
            8,
            LabeledGroup {
                group: AbelianGroup::free(2),
                labels: vec!["w1".into(), "w2".into()],
            },
        );
        CoefficientRow {
            name: "spin".into(),
            full: false,
            max_q: 8,
            rows,
        }
    }

    pub fn get(&self, q: usize) -> Option<LabeledGroup> {
        if q > self.max_q {
            return None;
        }
        Some(
            self.rows
                .get(&q)
                .cloned()
                .unwrap_or_else(LabeledGroup::zero_group),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HintKind {
    Zero,
    Value(IntMatrix),
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum HintJustification {
    Naturality(PathBuf),
    UserAsserted,
}

#[derive(Clone, Debug)]
pub struct DiffHint {
    pub r: u32,
    pub p: usize,
    pub q: usize,
    pub kind: HintKind,
    pub justification: HintJustification,
}

#[derive(Clone, Debug)]
pub struct ExtHint {
    pub n: usize,
    pub p: usize,
    pub map: PathBuf,
}

#[derive(Clone, Debug)]
pub struct TotalHint {
    pub n: usize,
    pub group: AbelianGroup,
}

#[derive(Clone, Debug, Default)]
pub struct HintFile {
    pub space: String,
    pub diffs: Vec<DiffHint>,
    pub exts: Vec<ExtHint>,
    pub totals: Vec<TotalHint>,
}

/// Morphism of spaces given by label images on both homology theories, with a
/// degree shift. Targets are labels of the target space (or 0).
#[derive(Clone, Debug)]
pub struct MapFile {
    pub name: String,
    pub source: String,
    pub target_space: PathBuf,
    pub target_hints: Option<PathBuf>,
    pub shift: usize,
    pub hom_z: BTreeMap<String, String>,
    pub hom_z2: BTreeMap<String, String>,
    pub path: PathBuf,
}

/// Splits a descriptor document into a preamble and bracketed sections,
/// keeping line numbers and dropping blank and # comment lines.
fn split_sections(content: &str) -> Vec<(Option<String>, Vec<(usize, String)>)> {
    let mut out: Vec<(Option<String>, Vec<(usize, String)>)> = vec![(None, Vec::new())];
    for (i, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            out.push((Some(line[1..line.len() - 1].trim().to_string()), Vec::new()));
        } else {
            out.last_mut().unwrap().1.push((i + 1, line.to_string()));
        }
    }
    out
}

/// Parses a rendered group such as `0`, `Z`, `Z^3`, `Z/2`, `Z + Z/2 + Z/4`.
/// `Z2` is accepted as a shorthand for `Z/2`.
pub fn parse_group_literal(s: &str) -> Result<AbelianGroup, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(AbelianGroup::zero_group());
    }
    let mut free = 0usize;
    let mut orders: Vec<BigInt> = Vec::new();
    for part in s.split('+') {
        let part = part.trim();
        if part == "Z" {
            free += 1;
        } else if let Some(rest) = part.strip_prefix("Z^") {
            free += usize::from_str(rest).map_err(|_| format!("bad rank in {part}"))?;
        } else if let Some(rest) = part.strip_prefix("Z/") {
            let d = BigInt::from_str(rest).map_err(|_| format!("bad order in {part}"))?;
            if d < BigInt::from(2) {
                return Err(format!("order must be >= 2 in {part}"));
            }
            orders.push(d);
        } else if let Some(rest) = part.strip_prefix('Z') {
            let d = BigInt::from_str(rest).map_err(|_| format!("cannot parse {part}"))?;
            if d < BigInt::from(2) {
                return Err(format!("order must be >= 2 in {part}"));
            }
            orders.push(d);
        } else {
            return Err(format!("cannot parse {part}"));
        }
    }
    let mut g = AbelianGroup::from_orders(&orders);
    g.free_rank += free;
    Ok(g)
}

fn parse_labeled_summands(
    path: &Path,
    line: usize,
    tokens: &[&str],
) -> Result<LabeledGroup, AhssError> {
    if tokens.len() % 2 != 0 {
        return Err(AhssError::parse(path, line, "expected GROUP LABEL pairs"));
    }
    let mut orders: Vec<BigInt> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for pair in tokens.chunks(2) {
        let order = if pair[0] == "Z" {
            BigInt::zero()
        } else if let Some(rest) = pair[0].strip_prefix("Z/") {
            BigInt::from_str(rest)
                .map_err(|_| AhssError::parse(path, line, format!("bad group token {}", pair[0])))?
        } else {
            return Err(AhssError::parse(
                path,
                line,
                format!("bad group token {}", pair[0]),
            ));
        };
        orders.push(order);
        labels.push(pair[1].to_string());
    }
    // free summands must come first so labels line up with normal form
    let first_torsion = orders.iter().position(|o| !o.is_zero());
    if let Some(ft) = first_torsion {
        if orders[ft..].iter().any(|o| o.is_zero()) {
            return Err(AhssError::parse(
                path,
                line,
                "free summands must precede torsion",
            ));
        }
    }
    let free = orders.iter().filter(|o| o.is_zero()).count();
    let torsion: Vec<BigInt> = orders.into_iter().filter(|o| !o.is_zero()).collect();
    let group = AbelianGroup {
        free_rank: free,
        torsion,
    };
    group
        .validate()
        .map_err(|e| AhssError::parse(path, line, e.to_string()))?;
    Ok(LabeledGroup { group, labels })
}

fn parse_degree_line(
    path: &Path,
    line_no: usize,
    line: &str,
    z2_only: bool,
) -> Result<(usize, LabeledGroup), AhssError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let degree = usize::from_str(tokens[0])
        .map_err(|_| AhssError::parse(path, line_no, "expected a degree"))?;
    let lg = if z2_only {
        let labels: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
        let group = AbelianGroup {
            free_rank: 0,
            torsion: vec![BigInt::from(2); labels.len()],
        };
        LabeledGroup { group, labels }
    } else {
        parse_labeled_summands(path, line_no, &tokens[1..])?
    };
    Ok((degree, lg))
}

pub fn parse_space(path: &Path, content: &str) -> Result<SpaceDescriptor, AhssError> {
    let sections = split_sections(content);
    let mut name = None;
    let mut cap = None;
    let mut homology_z = HomologyTable::default();
    let mut homology_z2 = HomologyTable::default();
    let mut cohomology_z: Option<HomologyTable> = None;
    let mut generators: Vec<Generator> = Vec::new();
    let mut sq_lines: Vec<(usize, u8, String, String)> = Vec::new();

    for (header, lines) in &sections {
        match header.as_deref() {
            None => {
                for (ln, line) in lines {
                    let t: Vec<&str> = line.split_whitespace().collect();
                    match t[0] {
                        "space" if t.len() == 2 => name = Some(t[1].to_string()),
                        "cap" if t.len() == 2 => {
                            cap = Some(usize::from_str(t[1]).map_err(|_| {
                                AhssError::parse(path, *ln, "cap must be an integer")
                            })?)
                        }
                        _ => return Err(AhssError::parse(path, *ln, format!("unexpected {line}"))),
                    }
                }
            }
            Some("homology Z") => {
                for (ln, line) in lines {
                    let (d, lg) = parse_degree_line(path, *ln, line, false)?;
                    homology_z.by_degree.insert(d, lg);
                }
            }
            Some("homology Z2") => {
                for (ln, line) in lines {
                    let (d, lg) = parse_degree_line(path, *ln, line, true)?;
                    homology_z2.by_degree.insert(d, lg);
                }
            }
            Some("cohomology Z") => {
                let table = cohomology_z.get_or_insert_with(HomologyTable::default);
                for (ln, line) in lines {
                    let (d, lg) = parse_degree_line(path, *ln, line, false)?;
                    table.by_degree.insert(d, lg);
                }
            }
            Some("ring Z2") => {
                for (ln, line) in lines {
                    let t: Vec<&str> = line.split_whitespace().collect();
                    match t[0] {
                        "generator" if t.len() == 4 => {
                            let degree = usize::from_str(t[2]).map_err(|_| {
                                AhssError::parse(path, *ln, "generator degree must be an integer")
                            })?;
                            let kind = match t[3] {
                                "exterior" => GeneratorKind::Exterior,
                                "polynomial" => GeneratorKind::Polynomial,
                                other => {
                                    return Err(AhssError::parse(
                                        path,
                                        *ln,
                                        format!("unknown generator kind {other}"),
                                    ))
                                }
                            };
                            generators.push(Generator {
                                label: t[1].into(),
                                degree,
                                kind,
                            });
                        }
                        "sq1" | "sq2" if t.len() == 3 => {
                            let which = if t[0] == "sq1" { 1 } else { 2 };
                            sq_lines.push((*ln, which, t[1].to_string(), t[2].to_string()));
                        }
                        _ => return Err(AhssError::parse(path, *ln, format!("unexpected {line}"))),
                    }
                }
            }
            Some(other) => {
                return Err(AhssError::validation(
                    path,
                    format!("unknown section [{other}]"),
                ))
            }
        }
    }

    let name = name.ok_or_else(|| AhssError::validation(path, "missing `space` line"))?;
    let cap = cap.ok_or_else(|| AhssError::validation(path, "missing `cap` line"))?;
    homology_z.cap = cap;
    homology_z2.cap = cap;
    if let Some(t) = cohomology_z.as_mut() {
        t.cap = cap;
    }

    let mut ring = RingPresentation::new(&name, CoefficientRing::Z2, generators, cap)
        .map_err(AhssError::Ring)?;
    for (ln, which, gen, target) in sq_lines {
        let gi = ring
            .generator_index(&gen)
            .map_err(|e| AhssError::parse(path, ln, e.to_string()))?;
        let target_degree = ring.generators[gi].degree + which as usize;
        if target_degree > cap {
            return Err(AhssError::parse(
                path,
                ln,
                format!("square of {gen} lands in degree {target_degree} beyond cap {cap}"),
            ));
        }
        let class = if target == "0" {
            None
        } else {
            let basis = ring.basis(target_degree).map_err(AhssError::Ring)?;
            let found = basis
                .iter()
                .find(|m| ring.monomial_label(m) == target)
                .cloned();
            match found {
                Some(m) => Some(ring.class_from_monomial(&m, BigInt::from(1))),
                None => {
                    return Err(AhssError::parse(
                        path,
                        ln,
                        format!("square target {target} is not a degree-{target_degree} monomial"),
                    ))
                }
            }
        };
        if let Some(c) = class {
            if which == 1 {
                ring.sq1.insert(gi, c);
            } else {
                ring.sq2.insert(gi, c);
            }
        }
    }

    let space = SpaceDescriptor {
        name,
        cap,
        homology_z,
        homology_z2,
        cohomology_z,
        ring,
        pairing: PairingTable::default(),
        path: path.to_path_buf(),
    };
    validate_space(&space)?;
    Ok(space)
}

fn validate_space(space: &SpaceDescriptor) -> Result<(), AhssError> {
    let path = &space.path;
    for (table, which) in [(&space.homology_z, "Z"), (&space.homology_z2, "Z2")] {
        for (d, lg) in &table.by_degree {
            if *d == 0 || *d > space.cap {
                return Err(AhssError::validation(
                    path,
                    format!("homology {which} degree {d} outside 1..={}", space.cap),
                ));
            }
            if lg.labels.len() != lg.group.gens() {
                return Err(AhssError::validation(
                    path,
                    format!("homology {which} degree {d}: label count mismatch"),
                ));
            }
        }
    }

    let hz = space.homology_z.graded();
    for d in 1..=space.cap {
        // stored mod-2 homology must match the universal-coefficient value
        let derived = uct_cohomology(&hz, d, &Coeff::z2(), UctVariant::HomologyMod)?;
        let stored = space.homology_z2.get(d)?;
        if derived != stored.group {
            return Err(AhssError::validation(
                path,
                format!(
                    "homology Z2 degree {d} is {} but reduction gives {derived}",
                    stored.group
                ),
            ));
        }
        // ring monomial count against the mod-2 rank
        let rank = stored.group.gens();
        let basis = space.ring.basis(d).map_err(AhssError::Ring)?;
        if basis.len() != rank {
            return Err(AhssError::validation(
                path,
                format!(
                    "ring has {} monomials in degree {d}, homology Z2 rank is {rank}",
                    basis.len()
                ),
            ));
        }
        if let Some(ct) = &space.cohomology_z {
            let derived = uct_cohomology(&hz, d, &Coeff::Z, UctVariant::Cohomology)?;
            let stored = ct.get(d)?;
            if derived != stored.group {
                return Err(AhssError::validation(
                    path,
                    format!(
                        "cohomology Z degree {d} is {} but duality gives {derived}",
                        stored.group
                    ),
                ));
            }
        }
    }

    // reduction by label: free and even-torsion integral classes persist mod 2,
    // odd-torsion classes must not
    for (d, lg) in &space.homology_z.by_degree {
        let z2_labels = space.homology_z2.labels(*d);
        for (i, label) in lg.labels.iter().enumerate() {
            let order = lg.group.order_of(i);
            let survives = order.is_zero() || (&order % BigInt::from(2)).is_zero();
            let present = z2_labels.iter().any(|l| l == label);
            if survives && !present {
                return Err(AhssError::validation(
                    path,
                    format!("degree {d}: label {label} has no mod-2 counterpart"),
                ));
            }
            if !survives && present {
                return Err(AhssError::validation(
                    path,
                    format!("degree {d}: odd-torsion label {label} reappears mod 2"),
                ));
            }
        }
    }
    Ok(())
}

pub fn parse_coeff(path: &Path, content: &str) -> Result<CoefficientRow, AhssError> {
    let sections = split_sections(content);
    let mut name = None;
    let mut full = None;
    let mut max_q = None;
    let mut rows = BTreeMap::new();
    for (header, lines) in &sections {
        if header.is_some() {
            return Err(AhssError::validation(
                path,
                "coefficient files have no sections",
            ));
        }
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            match t[0] {
                "coeff" if t.len() == 2 => name = Some(t[1].to_string()),
                "row" if t.len() == 2 => match t[1] {
                    "full" => full = Some(true),
                    "reduced" => full = Some(false),
                    other => {
                        return Err(AhssError::parse(path, *ln, format!("bad row mode {other}")))
                    }
                },
                "max" if t.len() == 2 => {
                    max_q = Some(
                        usize::from_str(t[1])
                            .map_err(|_| AhssError::parse(path, *ln, "max must be an integer"))?,
                    )
                }
                _ => {
                    let (q, lg) = parse_degree_line(path, *ln, line, false)?;
                    rows.insert(q, lg);
                }
            }
        }
    }
    let name = name.ok_or_else(|| AhssError::validation(path, "missing `coeff` line"))?;
    let full = full.ok_or_else(|| AhssError::validation(path, "missing `row` line"))?;
    let max_q = max_q.ok_or_else(|| AhssError::validation(path, "missing `max` line"))?;
    for q in rows.keys() {
        if *q > max_q {
            return Err(AhssError::validation(
                path,
                format!("row q={q} beyond max {max_q}"),
            ));
        }
    }
    Ok(CoefficientRow {
        name,
        full,
        max_q,
        rows,
    })
}

fn parse_matrix_literal(path: &Path, line: usize, s: &str) -> Result<IntMatrix, AhssError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| AhssError::parse(path, line, "matrix literal must be [..]"))?;
    let rows: Vec<&str> = inner.split(';').collect();
    let mut data: Vec<BigInt> = Vec::new();
    let mut cols = None;
    for row in &rows {
        let entries: Vec<BigInt> = row
            .split_whitespace()
            .map(|e| BigInt::from_str(e))
            .collect::<Result<_, _>>()
            .map_err(|_| AhssError::parse(path, line, "bad matrix entry"))?;
        if let Some(c) = cols {
            if entries.len() != c {
                return Err(AhssError::parse(path, line, "ragged matrix literal"));
            }
        } else {
            cols = Some(entries.len());
        }
        data.extend(entries);
    }
    let cols = cols.unwrap_or(0);
    IntMatrix::new(rows.len(), cols, data).map_err(AhssError::Abelian)
}

pub fn parse_hints(path: &Path, content: &str) -> Result<HintFile, AhssError> {
    let sections = split_sections(content);
    let mut out = HintFile::default();
    for (header, lines) in &sections {
        if header.is_some() {
            return Err(AhssError::validation(path, "hint files have no sections"));
        }
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            match t[0] {
                "hints" if t.len() == 2 => out.space = t[1].to_string(),
                "d" => {
                    if t.len() < 5 {
                        return Err(AhssError::parse(path, *ln, "short differential hint"));
                    }
                    let r = u32::from_str(t[1])
                        .map_err(|_| AhssError::parse(path, *ln, "bad page index"))?;
                    let p =
                        usize::from_str(t[2]).map_err(|_| AhssError::parse(path, *ln, "bad p"))?;
                    let q =
                        usize::from_str(t[3]).map_err(|_| AhssError::parse(path, *ln, "bad q"))?;
                    let (kind, rest) = match t[4] {
                        "zero" => (HintKind::Zero, &t[5..]),
                        "value" => {
                            if t.len() < 6 {
                                return Err(AhssError::parse(
                                    path,
                                    *ln,
                                    "value hint needs a matrix",
                                ));
                            }
                            // the matrix literal may contain spaces; rejoin up to the final token(s)
                            let tail = t[5..].join(" ");
                            let close = tail.find(']').ok_or_else(|| {
                                AhssError::parse(path, *ln, "unterminated matrix literal")
                            })?;
                            let m = parse_matrix_literal(path, *ln, &tail[..=close])?;
                            let after: Vec<&str> = tail[close + 1..].split_whitespace().collect();
                            let kind = HintKind::Value(m);
                            let justification = parse_justification(path, *ln, &after)?;
                            out.diffs.push(DiffHint {
                                r,
                                p,
                                q,
                                kind,
                                justification,
                            });
                            continue;
                        }
                        "unknown" => {
                            if t.len() != 6 {
                                return Err(AhssError::parse(
                                    path,
                                    *ln,
                                    "unknown hint needs a name",
                                ));
                            }
                            (HintKind::Unknown(t[5].to_string()), &t[6..])
                        }
                        other => {
                            return Err(AhssError::parse(
                                path,
                                *ln,
                                format!("bad assertion {other}"),
                            ))
                        }
                    };
                    let justification = if matches!(kind, HintKind::Unknown(_)) {
                        HintJustification::UserAsserted
                    } else {
                        parse_justification(path, *ln, rest)?
                    };
                    out.diffs.push(DiffHint {
                        r,
                        p,
                        q,
                        kind,
                        justification,
                    });
                }
                "ext" => {
                    if t.len() != 5 || t[3] != "via-map" {
                        return Err(AhssError::parse(
                            path,
                            *ln,
                            "ext hint: ext N P via-map FILE",
                        ));
                    }
                    let n =
                        usize::from_str(t[1]).map_err(|_| AhssError::parse(path, *ln, "bad n"))?;
                    let p =
                        usize::from_str(t[2]).map_err(|_| AhssError::parse(path, *ln, "bad p"))?;
                    out.exts.push(ExtHint {
                        n,
                        p,
                        map: PathBuf::from(t[4]),
                    });
                }
                "total" => {
                    if t.len() < 3 {
                        return Err(AhssError::parse(path, *ln, "total hint: total N GROUP"));
                    }
                    let n =
                        usize::from_str(t[1]).map_err(|_| AhssError::parse(path, *ln, "bad n"))?;
                    let group = parse_group_literal(&t[2..].join(" "))
                        .map_err(|e| AhssError::parse(path, *ln, e))?;
                    out.totals.push(TotalHint { n, group });
                }
                _ => return Err(AhssError::parse(path, *ln, format!("unexpected {line}"))),
            }
        }
    }
    if out.space.is_empty() {
        return Err(AhssError::validation(path, "missing `hints` line"));
    }
    Ok(out)
}

fn parse_justification(
    path: &Path,
    line: usize,
    tokens: &[&str],
) -> Result<HintJustification, AhssError> {
    match tokens {
        ["user-asserted"] => Ok(HintJustification::UserAsserted),
        ["naturality", file] => Ok(HintJustification::Naturality(PathBuf::from(file))),
        _ => Err(AhssError::parse(
            path,
            line,
            "expected `user-asserted` or `naturality FILE`",
        )),
    }
}

pub fn parse_map(path: &Path, content: &str) -> Result<MapFile, AhssError> {
    let sections = split_sections(content);
    let mut name = None;
    let mut source = None;
    let mut target_space = None;
    let mut target_hints = None;
    let mut shift = None;
    let mut hom_z = BTreeMap::new();
    let mut hom_z2 = BTreeMap::new();
    for (header, lines) in &sections {
        match header.as_deref() {
            None => {
                for (ln, line) in lines {
                    let t: Vec<&str> = line.split_whitespace().collect();
                    match t[0] {
                        "map" if t.len() == 2 => name = Some(t[1].to_string()),
                        "source" if t.len() == 2 => source = Some(t[1].to_string()),
                        "target" if t.len() == 2 => target_space = Some(PathBuf::from(t[1])),
                        "target-hints" if t.len() == 2 => {
                            if t[1] != "none" {
                                target_hints = Some(PathBuf::from(t[1]));
                            }
                        }
                        "shift" if t.len() == 2 => {
                            shift = Some(usize::from_str(t[1]).map_err(|_| {
                                AhssError::parse(path, *ln, "shift must be an integer")
                            })?)
                        }
                        _ => return Err(AhssError::parse(path, *ln, format!("unexpected {line}"))),
                    }
                }
            }
            Some(h @ ("hom Z" | "hom Z2")) => {
                let table = if h == "hom Z" {
                    &mut hom_z
                } else {
                    &mut hom_z2
                };
                for (ln, line) in lines {
                    let t: Vec<&str> = line.split_whitespace().collect();
                    if t.len() != 3 || t[1] != "->" {
                        return Err(AhssError::parse(path, *ln, "expected LABEL -> LABEL|0"));
                    }
                    table.insert(t[0].to_string(), t[2].to_string());
                }
            }
            Some(other) => {
                return Err(AhssError::validation(
                    path,
                    format!("unknown section [{other}]"),
                ))
            }
        }
    }
    Ok(MapFile {
        name: name.ok_or_else(|| AhssError::validation(path, "missing `map` line"))?,
        source: source.ok_or_else(|| AhssError::validation(path, "missing `source` line"))?,
        target_space: target_space
            .ok_or_else(|| AhssError::validation(path, "missing `target` line"))?,
        target_hints,
        shift: shift.ok_or_else(|| AhssError::validation(path, "missing `shift` line"))?,
        hom_z,
        hom_z2,
        path: path.to_path_buf(),
    })
}

/// Checks a map's labels against its source and target spaces: every source
/// label must be mapped, every image must exist in the matching degree, and
/// torsion must be respected.
pub fn validate_map(
    map: &MapFile,
    source: &SpaceDescriptor,
    target: &SpaceDescriptor,
) -> Result<(), AhssError> {
    if map.source != source.name {
        return Err(AhssError::validation(
            &map.path,
            format!(
                "map source {} does not match space {}",
                map.source, source.name
            ),
        ));
    }
    for (which, table, src_t, tgt_t) in [
        ("Z", &map.hom_z, &source.homology_z, &target.homology_z),
        ("Z2", &map.hom_z2, &source.homology_z2, &target.homology_z2),
    ] {
        for (d, lg) in &src_t.by_degree {
            for (i, label) in lg.labels.iter().enumerate() {
                let image = table.get(label).ok_or_else(|| {
                    AhssError::validation(
                        &map.path,
                        format!("hom {which}: source label {label} has no image"),
                    )
                })?;
                if image == "0" {
                    continue;
                }
                let td = d + map.shift;
                let t_lg = if td <= tgt_t.cap {
                    tgt_t.get(td)?
                } else {
                    LabeledGroup::zero_group()
                };
                let pos = t_lg.labels.iter().position(|l| l == image).ok_or_else(|| {
                    AhssError::validation(
                        &map.path,
                        format!("hom {which}: {label} -> {image} missing in target degree {td}"),
                    )
                })?;
                let so = lg.group.order_of(i);
                let to = t_lg.group.order_of(pos);
                let ok = if so.is_zero() {
                    true
                } else if to.is_zero() {
                    false
                } else {
                    (&so % &to).is_zero()
                };
                if !ok {
                    return Err(AhssError::validation(
                        &map.path,
                        format!("hom {which}: {label} -> {image} violates torsion"),
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn read_file(path: &Path) -> Result<String, AhssError> {
    std::fs::read_to_string(path).map_err(|e| AhssError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Tensor of a homology degree with one cyclic coefficient group of order m
/// (m not 0 or 2): groups by tensor/Tor, labels synthesized positionally.
pub fn general_coefficient_entry(
    hz: &HomologyTable,
    p: usize,
    m: &BigInt,
    coeff_label: &str,
) -> Result<LabeledGroup, AhssError> {
    let here = hz.get(p)?;
    let prev = if p == 0 {
        LabeledGroup::zero_group()
    } else {
        hz.get(p - 1)?
    };
    let mut orders = Vec::new();
    let mut labels = Vec::new();
    let d = tensor_tor_hom_ext(&here.group, &Coeff::Cyclic(m.clone()));
    for (i, o) in d.tensor.torsion.iter().enumerate() {
        orders.push(o.clone());
        labels.push(format!(
            "{}{}",
            coeff_label,
            here.labels.get(i).cloned().unwrap_or_default()
        ));
    }
    let dprev = tensor_tor_hom_ext(&prev.group, &Coeff::Cyclic(m.clone()));
    for (i, o) in dprev.tor.torsion.iter().enumerate() {
        orders.push(o.clone());
        labels.push(format!(
            "{}{}.",
            coeff_label,
            prev.labels.get(i).cloned().unwrap_or_default()
        ));
    }
    let group = AbelianGroup {
        free_rank: 0,
        torsion: orders,
    };
    group.validate().map_err(|_| {
        AhssError::Other(format!(
            "coefficient Z/{m} entry at p={p} has mixed torsion"
        ))
    })?;
    Ok(LabeledGroup { group, labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "
space tiny
cap 5

[homology Z]
3 Z x

[homology Z2]
3 x
5 x^t

[cohomology Z]
3 Z x

[ring Z2]
generator x 3 exterior
generator x^t 5 exterior
sq2 x x^t
";

    #[test]
    fn parse_and_validate_small_space() {
        // the tiny space above is deliberately inconsistent: degree 5 has a
        // mod-2 class with no integral origin
        let err = parse_space(Path::new("tiny.space"), TINY).unwrap_err();
        assert!(err.to_string().contains("degree 5"), "{err}");
    }

    const GOOD: &str = "
space tiny
cap 4

[homology Z]
3 Z x

[homology Z2]
3 x

[cohomology Z]
3 Z x

[ring Z2]
generator x 3 exterior
";

    #[test]
    fn good_space_loads() {
        let s = parse_space(Path::new("tiny.space"), GOOD).unwrap();
        assert_eq!(s.name, "tiny");
        assert_eq!(s.cap, 4);
        assert_eq!(s.homology_z.get(3).unwrap().labels, vec!["x"]);
        assert!(s.homology_z.get(4).unwrap().group.is_trivial());
        assert!(s.homology_z.get(5).is_err());
    }

    #[test]
    fn group_literals() {
        assert_eq!(
            parse_group_literal("0").unwrap(),
            AbelianGroup::zero_group()
        );
        assert_eq!(parse_group_literal("Z^2").unwrap(), AbelianGroup::free(2));
        assert_eq!(parse_group_literal("Z/2").unwrap(), AbelianGroup::cyclic(2));
        assert_eq!(parse_group_literal("Z2").unwrap(), AbelianGroup::cyclic(2));
        let g = parse_group_literal("Z + Z/2 + Z/4").unwrap();
        assert_eq!(g.to_string(), "Z + Z/2 + Z/4");
        assert!(parse_group_literal("Q").is_err());
    }

    #[test]
    fn hint_lines() {
        let src = "
hints su
d 3 8 0 zero naturality su_to_bsu.map
d 3 9 0 value [1] user-asserted
d 4 4 5 unknown k
ext 7 5 via-map su_to_kz3.map
total 8 Z^2
";
        let h = parse_hints(Path::new("t.hints"), src).unwrap();
        assert_eq!(h.space, "su");
        assert_eq!(h.diffs.len(), 3);
        assert_eq!(h.diffs[0].kind, HintKind::Zero);
        assert!(matches!(
            h.diffs[0].justification,
            HintJustification::Naturality(_)
        ));
        assert_eq!(
            h.diffs[1].kind,
            HintKind::Value(IntMatrix::from_i64(1, 1, &[1]))
        );
        assert_eq!(h.diffs[2].kind, HintKind::Unknown("k".into()));
        assert_eq!(h.exts.len(), 1);
        assert_eq!(h.totals[0].group, AbelianGroup::free(2));
    }

    #[test]
    fn coeff_rows() {
        let src = "
coeff t
row full
max 8

3 Z l2
7 Z l5 Z k3l2
";
        let c = parse_coeff(Path::new("t.coeff"), src).unwrap();
        assert!(c.full);
        assert_eq!(c.get(7).unwrap().labels, vec!["l5", "k3l2"]);
        assert!(c.get(4).unwrap().group.is_trivial());
        assert!(c.get(9).is_none());
        let spin = CoefficientRow::spin();
        assert_eq!(spin.get(4).unwrap().labels, vec!["a2"]);
        assert_eq!(spin.get(8).unwrap().group, AbelianGroup::free(2));
        assert_eq!(spin.get(3).unwrap().group, AbelianGroup::zero_group());
    }

    #[test]
    fn map_files() {
        let src = "
map su_to_bsu
source su
target bsu.space
target-hints none
shift 1

[hom Z]
b2 -> g2

[hom Z2]
b2 -> g2
";
        let m = parse_map(Path::new("t.map"), src).unwrap();
        assert_eq!(m.shift, 1);
        assert_eq!(m.hom_z["b2"], "g2");
        assert!(m.target_hints.is_none());
    }
}
