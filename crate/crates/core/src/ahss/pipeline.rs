//! Orchestration: loading a space with its hints and coefficient row,
//! recursively building the runs it compares into, resolving differentials
//! page by page, and rendering the results.

use super::descriptor::{
    parse_coeff, parse_hints, parse_map, parse_space, read_file, validate_map, AhssError,
    CoefficientRow, HintFile, HintJustification, HintKind, SpaceDescriptor,
};
use super::engine::{
    build_e2, build_phi2, check_d2_commutes, check_dd, check_torsion_respect, deduce_vanishing,
    hom_is_zero, spin_d2_matrix, turn_page, DiffStatus, Page, ResolvedDifferential, Run,
    SSMorphism,
};
use super::extension::{assemble_reports, Assembled};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::rc::Rc;

/// Which coefficient row to run over: the builtin one or a row file.
#[derive(Clone, Debug)]
pub enum CoeffChoice {
    Spin,
    Path(PathBuf),
}

impl CoeffChoice {
    fn key(&self) -> Result<String, AhssError> {
        match self {
            CoeffChoice::Spin => Ok("spin".into()),
            CoeffChoice::Path(p) => Ok(canonical(p)?.display().to_string()),
        }
    }

    fn load(&self) -> Result<CoefficientRow, AhssError> {
        match self {
            CoeffChoice::Spin => Ok(CoefficientRow::spin()),
            CoeffChoice::Path(p) => {
                let c = canonical(p)?;
                parse_coeff(&c, &read_file(&c)?)
            }
        }
    }
}

fn canonical(p: &Path) -> Result<PathBuf, AhssError> {
    std::fs::canonicalize(p).map_err(|e| AhssError::Io {
        path: p.display().to_string(),
        source: e,
    })
}

type RunKey = (PathBuf, Option<PathBuf>, String, usize);

/// Builds and caches runs, following comparison maps recursively.
#[derive(Default)]
pub struct Runner {
    cache: HashMap<RunKey, Rc<Run>>,
    in_progress: HashSet<(PathBuf, Option<PathBuf>, String)>,
}

impl Runner {
    pub fn new() -> Self {
        Runner::default()
    }

    pub fn run(
        &mut self,
        space_path: &Path,
        hints_path: Option<&Path>,
        coeff: &CoeffChoice,
        upto: usize,
    ) -> Result<Rc<Run>, AhssError> {
        let space_c = canonical(space_path)?;
        let hints_c = hints_path.map(canonical).transpose()?;
        let ckey = coeff.key()?;
        let key = (space_c.clone(), hints_c.clone(), ckey.clone(), upto);
        if let Some(run) = self.cache.get(&key) {
            return Ok(run.clone());
        }
        let guard = (space_c.clone(), hints_c.clone(), ckey);
        if !self.in_progress.insert(guard.clone()) {
            return Err(AhssError::Cycle(space_c.display().to_string()));
        }
        let built = self.build(&space_c, hints_c.as_deref(), coeff, upto);
        self.in_progress.remove(&guard);
        let run = Rc::new(built?);
        self.cache.insert(key, run.clone());
        Ok(run)
    }

    fn build(
        &mut self,
        space_path: &Path,
        hints_path: Option<&Path>,
        coeff: &CoeffChoice,
        upto: usize,
    ) -> Result<Run, AhssError> {
        let space = parse_space(space_path, &read_file(space_path)?)?;
        let row = coeff.load()?;
        let hints = match hints_path {
            None => HintFile::default(),
            Some(h) => {
                let hf = parse_hints(h, &read_file(h)?)?;
                if hf.space != space.name {
                    return Err(AhssError::Validation {
                        path: h.display().to_string(),
                        msg: format!("hints are for {}, space is {}", hf.space, space.name),
                    });
                }
                hf
            }
        };
        let hints_dir = hints_path.and_then(|h| h.parent()).map(Path::to_path_buf);

        let mut pages: BTreeMap<u32, Page> = BTreeMap::new();
        pages.insert(2, build_e2(&space, &row, upto)?);

        let mut morphisms: BTreeMap<PathBuf, SSMorphism> = BTreeMap::new();
        let mut referenced: Vec<PathBuf> = Vec::new();
        for d in &hints.diffs {
            if let HintJustification::Naturality(f) = &d.justification {
                referenced.push(f.clone());
            }
        }
        for e in &hints.exts {
            referenced.push(e.map.clone());
        }
        for rel in referenced {
            let dir = hints_dir.clone().unwrap_or_else(|| PathBuf::from("."));
            let mpath = canonical(&dir.join(&rel))?;
            if morphisms.contains_key(&mpath) {
                continue;
            }
            let map = parse_map(&mpath, &read_file(&mpath)?)?;
            let map_dir = mpath.parent().map(Path::to_path_buf).unwrap_or_default();
            let tspace = map_dir.join(&map.target_space);
            let thints = map.target_hints.as_ref().map(|h| map_dir.join(h));
            let target = self.run(&tspace, thints.as_deref(), coeff, upto + map.shift)?;
            validate_map(&map, &space, &target.space)?;
            let phi2 = build_phi2(
                &map,
                &space,
                &row,
                pages.get(&2).unwrap(),
                &target.space,
                target.pages.get(&2).unwrap(),
            )?;
            morphisms.insert(
                mpath,
                SSMorphism {
                    name: map.name.clone(),
                    shift: map.shift,
                    target,
                    phi2,
                },
            );
        }

        let mut differentials: BTreeMap<(u32, usize, usize), ResolvedDifferential> =
            BTreeMap::new();
        let spin = matches!(coeff, CoeffChoice::Spin);
        for r in 2..=(upto as u32 + 1) {
            resolve_page(
                &space,
                spin,
                &hints,
                &morphisms,
                hints_dir.as_deref(),
                &pages,
                &mut differentials,
                r,
            )?;
            check_dd(pages.get(&r).unwrap(), &differentials, r)?;
            if r == 2 {
                for m in morphisms.values() {
                    check_d2_commutes(m, &m.name, pages.get(&2).unwrap(), &differentials)?;
                }
            }
            let next = turn_page(pages.get(&r).unwrap(), &differentials, r)?;
            pages.insert(r + 1, next);
        }

        let final_page = pages.get(&(upto as u32 + 2)).unwrap();
        let (reports, parametric) =
            assemble_reports(final_page, &hints, &morphisms, hints_dir.as_deref(), upto)?;
        Ok(Run {
            space,
            coeff: row,
            upto,
            pages,
            differentials,
            morphisms,
            reports,
            parametric,
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn resolve_page(
    space: &SpaceDescriptor,
    spin: bool,
    hints: &HintFile,
    morphisms: &BTreeMap<PathBuf, SSMorphism>,
    hints_dir: Option<&Path>,
    pages: &BTreeMap<u32, Page>,
    diffs: &mut BTreeMap<(u32, usize, usize), ResolvedDifferential>,
    r: u32,
) -> Result<(), AhssError> {
    let rr = r as usize;
    let page = pages.get(&r).expect("current page");
    let positions: Vec<(usize, usize)> = page.keys().cloned().collect();
    for (p, q) in positions {
        if p < rr {
            continue;
        }
        let tpos = (p - rr, q + rr - 1);
        let source = page.get(&(p, q)).unwrap();
        let Some(target) = page.get(&tpos) else {
            continue;
        };
        let hint = hints
            .diffs
            .iter()
            .find(|h| h.r == r && h.p == p && h.q == q);
        let record = |status: DiffStatus, matrix| ResolvedDifferential { status, matrix };

        if source.parametric.is_some() || target.parametric.is_some() {
            if hom_is_zero(&source.orders, &target.orders) {
                diffs.insert((r, p, q), record(DiffStatus::Computed, None));
                continue;
            }
            match hint {
                Some(h) => match &h.kind {
                    HintKind::Zero => {
                        diffs.insert((r, p, q), record(DiffStatus::AssertedZero, None));
                        continue;
                    }
                    HintKind::Unknown(name) => {
                        let repeats = target
                            .parametric
                            .as_deref()
                            .map(|d| d.ends_with(&format!("/{name}")))
                            .unwrap_or(false);
                        if repeats {
                            diffs.insert(
                                (r, p, q),
                                record(DiffStatus::UnknownParameter(name.clone()), None),
                            );
                            continue;
                        }
                        return Err(AhssError::HintConflict(format!(
                            "parameter {name} meets a differently parametrized entry at ({},{})",
                            tpos.0, tpos.1
                        )));
                    }
                    HintKind::Value(_) => {
                        return Err(AhssError::HintConflict(format!(
                            "explicit differential into an undetermined entry at ({},{})",
                            tpos.0, tpos.1
                        )))
                    }
                },
                None => return Err(AhssError::Unresolved { r, p, q }),
            }
        }

        if hom_is_zero(&source.orders, &target.orders) {
            diffs.insert((r, p, q), record(DiffStatus::Computed, None));
            continue;
        }
        if r == 2 && spin && q <= 1 {
            let m = spin_d2_matrix(space, p, q)?;
            if m.rows != target.gens() || m.cols != source.gens() {
                return Err(AhssError::Other(format!(
                    "formula differential at ({p},{q}) has shape {}x{}",
                    m.rows, m.cols
                )));
            }
            check_torsion_respect(&m, &source.orders, &target.orders).map_err(AhssError::Other)?;
            diffs.insert((r, p, q), record(DiffStatus::Computed, Some(m)));
            continue;
        }
        match hint {
            None => return Err(AhssError::Unresolved { r, p, q }),
            Some(h) => match &h.kind {
                HintKind::Zero => {
                    if let HintJustification::Naturality(f) = &h.justification {
                        let dir = hints_dir.unwrap_or_else(|| Path::new("."));
                        let mpath = canonical(&dir.join(f))?;
                        let m = morphisms.get(&mpath).ok_or_else(|| {
                            AhssError::Other(format!("map {} not loaded", f.display()))
                        })?;
                        deduce_vanishing(m, pages, r, p, q)
                            .map_err(|msg| AhssError::Naturality { r, p, q, msg })?;
                    }
                    diffs.insert((r, p, q), record(DiffStatus::AssertedZero, None));
                }
                HintKind::Value(mat) => {
                    if mat.rows != target.gens() || mat.cols != source.gens() {
                        return Err(AhssError::HintConflict(format!(
                            "asserted differential at page {r} ({p},{q}) has shape {}x{}, expected {}x{}",
                            mat.rows,
                            mat.cols,
                            target.gens(),
                            source.gens()
                        )));
                    }
                    check_torsion_respect(mat, &source.orders, &target.orders)
                        .map_err(AhssError::HintConflict)?;
                    diffs.insert(
                        (r, p, q),
                        record(DiffStatus::AssertedValue, Some(mat.clone())),
                    );
                }
                HintKind::Unknown(name) => {
                    diffs.insert(
                        (r, p, q),
                        record(DiffStatus::UnknownParameter(name.clone()), None),
                    );
                }
            },
        }
    }
    Ok(())
}

/// One line per surviving entry of the requested page, sorted by position.
pub fn render_page(run: &Run, r: u32) -> String {
    let mut out = String::new();
    if let Some(page) = run.pages.get(&r) {
        for (&(p, q), e) in page {
            if e.parametric.is_some() {
                out.push_str(&format!("({p},{q}) {}\n", e.render()));
            } else {
                out.push_str(&format!(
                    "({p},{q}) {}  {}\n",
                    e.render(),
                    e.labels.join(",")
                ));
            }
        }
    }
    out
}

/// The filtration detail and one summary line per total degree.
pub fn render_report(run: &Run) -> String {
    let mut out = String::new();
    for (n, rep) in &run.reports {
        for piece in &rep.pieces {
            match &piece.parametric {
                Some(desc) => out.push_str(&format!("  piece ({},{}) {desc}\n", piece.p, piece.q)),
                None => out.push_str(&format!(
                    "  piece ({},{}) {}  {}\n",
                    piece.p,
                    piece.q,
                    piece.group,
                    piece.labels.join(",")
                )),
            }
        }
        for ext in &rep.exts {
            out.push_str(&format!(
                "  extension p={} {} ({})\n",
                ext.p,
                ext.resolution.word(),
                ext.tag
            ));
        }
        let shown = match &rep.assembled {
            Assembled::Known(g) => g.to_string(),
            Assembled::Parametric(d) => d.clone(),
            Assembled::Undetermined(_) => "undetermined".into(),
        };
        out.push_str(&format!("n={n}: {shown}\n"));
    }
    out
}

/// Key=value form of the report for scripted consumers.
pub fn render_report_machine(run: &Run) -> String {
    let mut out = String::new();
    for (n, rep) in &run.reports {
        let shown = match &rep.assembled {
            Assembled::Known(g) => g.to_string(),
            Assembled::Parametric(d) => d.clone(),
            Assembled::Undetermined(_) => "undetermined".into(),
        };
        out.push_str(&format!("n.{n}={shown}\n"));
        for piece in &rep.pieces {
            let shown = match &piece.parametric {
                Some(d) => d.clone(),
                None => piece.group.to_string(),
            };
            out.push_str(&format!("piece.{n}.{}={shown}\n", piece.p));
            if piece.parametric.is_none() {
                out.push_str(&format!(
                    "labels.{n}.{}={}\n",
                    piece.p,
                    piece.labels.join(",")
                ));
            }
        }
        for ext in &rep.exts {
            out.push_str(&format!(
                "ext.{n}.{}={}:{}\n",
                ext.p,
                ext.resolution.word(),
                ext.tag
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn scratch_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("ahss-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn put(dir: &Path, name: &str, content: &str) -> PathBuf {
        let p = dir.join(name);
        let mut f = std::fs::File::create(&p).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        p
    }

    #[test]
    fn single_class_space_runs_clean() {
        let dir = scratch_dir("tiny");
        let space = put(
            &dir,
            "one.space",
            "space one\ncap 4\n\n[homology Z]\n3 Z x\n\n[homology Z2]\n3 x\n\n[ring Z2]\ngenerator x 3 exterior\n",
        );
        let mut runner = Runner::new();
        let run = runner.run(&space, None, &CoeffChoice::Spin, 4).unwrap();
        assert!(!run.parametric);
        let rendered = render_report(&run);
        assert!(rendered.contains("n=3: Z\n"), "{rendered}");
        assert!(rendered.contains("n=4: Z/2\n"), "{rendered}");
        assert!(rendered.contains("piece (3,1) Z/2  a1x"), "{rendered}");
        let machine = render_report_machine(&run);
        assert!(machine.contains("n.3=Z\n"), "{machine}");
        let page = render_page(&run, 2);
        assert!(page.contains("(3,0) Z  x"), "{page}");
    }

    #[test]
    fn missing_resolution_is_reported() {
        let dir = scratch_dir("unresolved");
        // two classes three apart so a page-three differential connects them
        let space = put(
            &dir,
            "two.space",
            "space two\ncap 6\n\n[homology Z]\n3 Z x\n6 Z/2 y\n\n[homology Z2]\n3 x\n6 y\n\n[ring Z2]\ngenerator x 3 exterior\ngenerator y 6 exterior\n",
        );
        let mut runner = Runner::new();
        let err = match runner.run(&space, None, &CoeffChoice::Spin, 6) {
            Ok(_) => panic!("expected an unresolved differential"),
            Err(e) => e,
        };
        match err {
            AhssError::Unresolved { r, p, q } => {
                assert_eq!((r, p, q), (3, 6, 0));
            }
            other => panic!("unexpected error {other}"),
        }
    }
}
