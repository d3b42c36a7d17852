//! Curated fixture tables: bordism groups of the point for six tangential
//! structures with generator names in low degrees, low homotopy of the
//! classifying space of E8, complex-type morphism records between compact
//! Lie groups, and a parser plus decision procedure for orientability of
//! gauge moduli problems over products of such groups.

use crate::abelian::AbelianGroup;
use crate::ahss::LabeledGroup;
use std::fmt;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("{what} {value} is outside the tabulated range 0..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("unknown tangential structure {0}")]
    UnknownStructure(String),
    #[error("classification covers dimensions 7 and 8, not {0}")]
    BadDimension(usize),
    #[error("no classification branch covers {0}")]
    Unclassified(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Structure {
    SO,
    O,
    Spin,
    SpinC,
    U,
    SU,
}

impl Structure {
    pub const ALL: [Structure; 6] = [
        Structure::SO,
        Structure::O,
        Structure::Spin,
        Structure::SpinC,
        Structure::U,
        Structure::SU,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Structure::SO => "so",
            Structure::O => "o",
            Structure::Spin => "spin",
            Structure::SpinC => "spinc",
            Structure::U => "u",
            Structure::SU => "su",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Structure::SO => "SO",
            Structure::O => "O",
            Structure::Spin => "Spin",
            Structure::SpinC => "Spin^c",
            Structure::U => "U",
            Structure::SU => "SU",
        };
        write!(f, "{}", s)
    }
}

impl std::str::FromStr for Structure {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, RegistryError> {
        match s.to_ascii_lowercase().as_str() {
            "so" => Ok(Structure::SO),
            "o" => Ok(Structure::O),
            "spin" => Ok(Structure::Spin),
            "spinc" | "spin^c" => Ok(Structure::SpinC),
            "u" => Ok(Structure::U),
            "su" => Ok(Structure::SU),
            other => Err(RegistryError::UnknownStructure(other.to_string())),
        }
    }
}

fn row(free: usize, two_torsion: usize) -> AbelianGroup {
    AbelianGroup {
        free_rank: free,
        torsion: vec![num_bigint::BigInt::from(2); two_torsion],
    }
}

fn point_table(structure: Structure) -> Vec<AbelianGroup> {
    let z = || row(1, 0);
    let o = AbelianGroup::zero_group;
    match structure {
        Structure::SO => vec![z(), o(), o(), o(), z(), row(0, 1), o(), o(), row(2, 0)],
        Structure::O => vec![
            row(0, 1),
            o(),
            row(0, 1),
            o(),
            row(0, 2),
            row(0, 1),
            row(0, 3),
            row(0, 1),
            row(0, 5),
        ],
        Structure::Spin => {
            vec![
                z(),
                row(0, 1),
                row(0, 1),
                o(),
                z(),
                o(),
                o(),
                o(),
                row(2, 0),
                row(0, 2),
            ]
        }
        Structure::SpinC => {
            vec![
                z(),
                o(),
                z(),
                o(),
                row(2, 0),
                o(),
                row(2, 0),
                o(),
                row(4, 0),
                o(),
            ]
        }
        Structure::U => vec![
            z(),
            o(),
            z(),
            o(),
            row(2, 0),
            o(),
            row(3, 0),
            o(),
            row(5, 0),
        ],
        Structure::SU => vec![
            z(),
            row(0, 1),
            row(0, 1),
            o(),
            z(),
            o(),
            z(),
            o(),
            row(2, 0),
        ],
    }
}

fn point_labels(structure: Structure, n: usize) -> Vec<String> {
    if structure != Structure::Spin {
        return Vec::new();
    }
    match n {
        0 => vec!["1".into()],
        1 => vec!["a1".into()],
        2 => vec!["a1^2".into()],
        4 => vec!["a2".into()],
        _ => Vec::new(),
    }
}

/// Bordism group of the point for the given structure and dimension, with
/// generator names where the tables name them.
pub fn lookup_point_bordism(structure: Structure, n: usize) -> Result<LabeledGroup, RegistryError> {
    let table = point_table(structure);
    let max = table.len() - 1;
    if n > max {
        return Err(RegistryError::OutOfRange {
            what: "dimension",
            value: n,
            max,
        });
    }
    Ok(LabeledGroup {
        group: table[n].clone(),
        labels: point_labels(structure, n),
    })
}

/// Homotopy of the classifying space of E8 in the metastable range: one
/// infinite cyclic group in degree 4, nothing else through degree 15.
pub fn lookup_e8_homotopy(d: usize) -> Result<AbelianGroup, RegistryError> {
    if d > 15 {
        return Err(RegistryError::OutOfRange {
            what: "degree",
            value: d,
            max: 15,
        });
    }
    Ok(if d == 4 {
        AbelianGroup::free(1)
    } else {
        AbelianGroup::zero_group()
    })
}

/// The point bordism row in the coefficient text format, with generator
/// names synthesized as w1, w2, .. where the tables leave them unnamed.
pub fn point_coefficient_text(structure: Structure) -> String {
    let table = point_table(structure);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# bordism groups of the point, {} structure",
        structure
    );
    let _ = writeln!(out, "coeff {}", structure.key());
    let _ = writeln!(out, "row reduced");
    let _ = writeln!(out, "max {}", table.len() - 1);
    for (n, g) in table.iter().enumerate() {
        if g.is_trivial() {
            continue;
        }
        let mut labels = point_labels(structure, n);
        if labels.is_empty() {
            labels = (1..=g.gens()).map(|i| format!("w{}", i)).collect();
        }
        let mut line = format!("{}", n);
        for i in 0..g.gens() {
            let order = g.order_of(i);
            let piece = if order == num_bigint::BigInt::from(0) {
                "Z".to_string()
            } else {
                format!("Z/{}", order)
            };
            let _ = write!(line, " {} {}", piece, labels[i]);
        }
        let _ = writeln!(out, "{}", line);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    SU,
    U,
    SO,
    Spin,
    Sp,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    fn name(&self) -> &'static str {
        match self {
            Family::SU => "SU",
            Family::U => "U",
            Family::SO => "SO",
            Family::Spin => "Spin",
            Family::Sp => "Sp",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        }
    }

    fn parametric(&self) -> bool {
        matches!(
            self,
            Family::SU | Family::U | Family::SO | Family::Spin | Family::Sp
        )
    }

    fn min_param(&self) -> u32 {
        match self {
            Family::SO | Family::Spin => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    pub family: Family,
    pub param: Option<u32>,
}

impl Atom {
    pub fn new(family: Family, param: Option<u32>) -> Self {
        Atom { family, param }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(m) => write!(f, "{}({})", self.family.name(), m),
            None => write!(f, "{}", self.family.name()),
        }
    }
}

/// A finite product of compact Lie group atoms, optionally quotiented by an
/// unspecified finite central subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupExpr {
    pub factors: Vec<Atom>,
    pub quotient: bool,
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" x "))?;
        if self.quotient {
            write!(f, "/K")?;
        }
        Ok(())
    }
}

fn parse_err(offset: usize, msg: impl Into<String>) -> RegistryError {
    RegistryError::Parse {
        offset,
        msg: msg.into(),
    }
}

/// Grammar: ATOM := NAME ["(" INT ")"]; EXPR := ATOM {"x" ATOM} ["/K"].
pub fn parse(text: &str) -> Result<GroupExpr, RegistryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    skip_ws(&chars, &mut pos);
    let mut factors = vec![parse_atom(&chars, &mut pos)?];
    loop {
        skip_ws(&chars, &mut pos);
        if pos < chars.len() && chars[pos] == 'x' {
            pos += 1;
            skip_ws(&chars, &mut pos);
            factors.push(parse_atom(&chars, &mut pos)?);
        } else {
            break;
        }
    }
    let mut quotient = false;
    if pos < chars.len() && chars[pos] == '/' {
        pos += 1;
        if pos < chars.len() && chars[pos] == 'K' {
            pos += 1;
            quotient = true;
        } else {
            return Err(parse_err(pos, "expected K after /"));
        }
    }
    skip_ws(&chars, &mut pos);
    if pos < chars.len() {
        return Err(parse_err(
            pos,
            format!("unexpected character {:?}", chars[pos]),
        ));
    }
    Ok(GroupExpr { factors, quotient })
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_atom(chars: &[char], pos: &mut usize) -> Result<Atom, RegistryError> {
    const NAMES: [(&str, Family); 10] = [
        ("Spin", Family::Spin),
        ("SU", Family::SU),
        ("SO", Family::SO),
        ("Sp", Family::Sp),
        ("E6", Family::E6),
        ("E7", Family::E7),
        ("E8", Family::E8),
        ("F4", Family::F4),
        ("G2", Family::G2),
        ("U", Family::U),
    ];
    let start = *pos;
    let rest: String = chars[*pos..].iter().collect();
    let family = NAMES
        .iter()
        .find(|(name, _)| rest.starts_with(name))
        .map(|(name, fam)| {
            *pos += name.chars().count();
            *fam
        })
        .ok_or_else(|| parse_err(start, "unknown group name"))?;
    let mut param = None;
    if *pos < chars.len() && chars[*pos] == '(' {
        *pos += 1;
        let digits_start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == digits_start {
            return Err(parse_err(digits_start, "expected an integer parameter"));
        }
        let value: String = chars[digits_start..*pos].iter().collect();
        let value: u32 = value
            .parse()
            .map_err(|_| parse_err(digits_start, "parameter does not fit in u32"))?;
        if *pos >= chars.len() || chars[*pos] != ')' {
            return Err(parse_err(*pos, "expected )"));
        }
        *pos += 1;
        param = Some(value);
    }
    match (family.parametric(), param) {
        (true, None) => Err(parse_err(
            start,
            format!("{} needs a parameter", family.name()),
        )),
        (false, Some(_)) => Err(parse_err(
            start,
            format!("{} takes no parameter", family.name()),
        )),
        (true, Some(m)) if m < family.min_param() => Err(parse_err(
            start,
            format!("{}({}) is below the valid range", family.name(), m),
        )),
        _ => Ok(Atom { family, param }),
    }
}

fn normalize_atom(a: Atom, quotient: &mut bool) -> Atom {
    let a = match (a.family, a.param) {
        // the orthogonal group is covered by the spin group with a central
        // two-element kernel
        (Family::SO, Some(k)) => {
            *quotient = true;
            Atom::new(Family::Spin, Some(k))
        }
        _ => a,
    };
    match (a.family, a.param) {
        (Family::Spin, Some(3)) => Atom::new(Family::SU, Some(2)),
        (Family::Spin, Some(5)) => Atom::new(Family::Sp, Some(2)),
        (Family::Spin, Some(6)) => Atom::new(Family::SU, Some(4)),
        (Family::Sp, Some(1)) => Atom::new(Family::SU, Some(2)),
        _ => a,
    }
}

/// Applies the exceptional isomorphisms and replaces orthogonal factors by
/// their spin covers, flagging the quotient. Idempotent.
pub fn normalize(g: &GroupExpr) -> GroupExpr {
    let mut quotient = g.quotient;
    let factors = g
        .factors
        .iter()
        .map(|a| normalize_atom(*a, &mut quotient))
        .collect();
    GroupExpr { factors, quotient }
}

/// A factor on the list of groups whose moduli problems are always
/// orientable. Stated for normalized atoms; the unnormalized low spin
/// entries are kept for the list as written.
fn in_good_list(a: &Atom) -> bool {
    match (a.family, a.param) {
        (Family::E8 | Family::E7 | Family::E6 | Family::G2, _) => true,
        (Family::Spin, Some(3)) => true,
        (Family::SU | Family::U, Some(_)) => true,
        (Family::Spin, Some(m)) => m % 2 == 0,
        _ => false,
    }
}

/// A factor whose presence yields a counterexample.
fn in_bad_list(a: &Atom) -> bool {
    match (a.family, a.param) {
        (Family::F4, _) => true,
        (Family::Sp, Some(m)) => m >= 2,
        (Family::Spin, Some(m)) => m % 2 == 1 && m >= 5,
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrientabilityVerdict {
    /// Every moduli problem over the stated base class is orientable; the
    /// flag restricts the claim to simply-connected bases.
    OrientableAll { simply_connected: bool },
    /// A named base manifold with a non-orientable moduli problem.
    Counterexample { manifold: String },
}

/// Decides orientability for principal bundles with the given structure
/// group over closed spin manifolds of dimension 7 or 8. With a quotient
/// flag the positive branch only covers simply-connected bases.
pub fn classify_orientability(
    g: &GroupExpr,
    n: usize,
) -> Result<OrientabilityVerdict, RegistryError> {
    if n != 7 && n != 8 {
        return Err(RegistryError::BadDimension(n));
    }
    let normalized = normalize(g);
    for atom in &normalized.factors {
        let good = in_good_list(atom);
        let bad = in_bad_list(atom);
        if good && bad {
            return Err(RegistryError::Unclassified(format!(
                "{} is on both lists",
                atom
            )));
        }
        if !good && !bad {
            return Err(RegistryError::Unclassified(atom.to_string()));
        }
        if bad {
            let base = "Sp(2) x_{Sp(1)xSp(1)} Sp(1)";
            let manifold = if n == 7 {
                base.to_string()
            } else {
                format!("({}) x S1", base)
            };
            return Ok(OrientabilityVerdict::Counterexample { manifold });
        }
    }
    Ok(OrientabilityVerdict::OrientableAll {
        simply_connected: normalized.quotient,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexTypeRecord {
    pub source: GroupExpr,
    pub target: GroupExpr,
    pub p: Option<u32>,
}

fn atom(family: Family, param: u32) -> Atom {
    Atom::new(family, Some(param))
}

fn simple(family: Family) -> Atom {
    Atom::new(family, None)
}

/// Looks up a morphism of complex type with the given source and target
/// among the recorded families. Connectivity bounds p are stored where the
/// records state them, without any claim of optimality.
pub fn complex_type(source: &GroupExpr, target: &GroupExpr) -> Option<ComplexTypeRecord> {
    if source.quotient || target.quotient || target.factors.len() != 1 {
        return None;
    }
    let t = target.factors[0];
    let mut fs = source.factors.clone();
    fs.sort();

    let record = |p: Option<u32>| {
        Some(ComplexTypeRecord {
            source: source.clone(),
            target: target.clone(),
            p,
        })
    };

    let fixed: [(&[Atom], Atom); 7] = [
        (
            &[atom(Family::U, 1), simple(Family::E7)],
            simple(Family::E8),
        ),
        (
            &[atom(Family::U, 1), atom(Family::U, 1), simple(Family::E6)],
            simple(Family::E8),
        ),
        (
            &[atom(Family::U, 1), atom(Family::Spin, 14)],
            simple(Family::E8),
        ),
        (
            &[atom(Family::U, 1), atom(Family::SU, 8)],
            simple(Family::E8),
        ),
        (
            &[atom(Family::U, 1), atom(Family::Sp, 3)],
            simple(Family::F4),
        ),
        (
            &[atom(Family::U, 1), atom(Family::Spin, 7)],
            simple(Family::F4),
        ),
        (&[simple(Family::G2)], atom(Family::Spin, 8)),
    ];
    for (src, tgt) in &fixed {
        let mut pattern = src.to_vec();
        pattern.sort();
        if fs == pattern && t == *tgt {
            return record(None);
        }
    }

    if fs.len() == 1 {
        if let (Family::U, Some(m)) = (fs[0].family, fs[0].param) {
            if t == atom(Family::SU, m + 1) {
                return record(None);
            }
        }
        if let (Family::Spin, Some(m)) = (fs[0].family, fs[0].param) {
            if t == atom(Family::SO, m) {
                return record(None);
            }
        }
    }

    if fs.len() == 2 && fs.contains(&atom(Family::U, 1)) {
        let other = if fs[0] == atom(Family::U, 1) {
            fs[1]
        } else {
            fs[0]
        };
        if let Some(m) = other.param {
            let stepped = match other.family {
                Family::SU if t == atom(Family::SU, m + 1) => Some(2 * m),
                Family::Sp if t == atom(Family::Sp, m + 1) => Some(4 * m + 2),
                Family::SO if t == atom(Family::SO, m + 2) => Some(m - 1),
                Family::Spin if t == atom(Family::Spin, m + 2) => Some(m - 1),
                _ => None,
            };
            if let Some(p) = stepped {
                return record(Some(p));
            }
        }
    }
    None
}
