//! Assembling the answer in each total degree from the surviving entries:
//! filtration pieces, extension problems, and the two ways of settling them
//! (comparison maps into a run with a torsion-free filtration stage, and a
//! known total group).

use super::descriptor::{AhssError, HintFile};
use super::engine::{EntryState, Page, SSMorphism};
use crate::abelian::AbelianGroup;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtResolution {
    Trivial,
    Nontrivial,
    Open,
}

impl ExtResolution {
    pub fn word(&self) -> &'static str {
        match self {
            ExtResolution::Trivial => "split",
            ExtResolution::Nontrivial => "nontrivial",
            ExtResolution::Open => "open",
        }
    }
}

/// One settled (or unsettled) extension step at filtration level `p`, with
/// the evidence that settled it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtRecord {
    pub p: usize,
    pub resolution: ExtResolution,
    pub tag: String,
}

/// A surviving entry contributing to one total degree.
#[derive(Clone, Debug)]
pub struct PieceRecord {
    pub p: usize,
    pub q: usize,
    pub group: AbelianGroup,
    pub labels: Vec<String>,
    pub parametric: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Assembled {
    Known(AbelianGroup),
    Parametric(String),
    Undetermined(String),
}

/// Everything known about one total degree: the pieces, the extension steps
/// taken, the assembled group, and the partial sums of the filtration.
#[derive(Clone, Debug)]
pub struct FiltrationReport {
    pub n: usize,
    pub pieces: Vec<PieceRecord>,
    pub exts: Vec<ExtRecord>,
    pub assembled: Assembled,
    pub filtration: BTreeMap<usize, AbelianGroup>,
}

impl FiltrationReport {
    /// The assembled subgroup of everything in filtration degree <= p.
    pub fn filtration_at(&self, p: usize) -> Option<&AbelianGroup> {
        self.filtration.range(..=p).next_back().map(|(_, g)| g)
    }
}

fn dsum(a: &AbelianGroup, b: &AbelianGroup) -> AbelianGroup {
    let mut orders: Vec<BigInt> = a.torsion.clone();
    orders.extend(b.torsion.iter().cloned());
    let mut g = AbelianGroup::from_orders(&orders);
    g.free_rank += a.free_rank + b.free_rank;
    g
}

fn is_small_prime(d: &BigInt) -> bool {
    let two = BigInt::from(2);
    if d < &two {
        return false;
    }
    let mut k = two.clone();
    while &k * &k <= *d {
        if (d % &k).is_zero() {
            return false;
        }
        k += 1;
    }
    true
}

/// Settles the extension under a finite cyclic piece by comparing into
/// another run: the piece must map nonzero to the other run's limit entry
/// while the receiving filtration stage is known and torsion-free, which
/// rules out the split answer.
pub fn resolve_extension_via_map(
    n: usize,
    p: usize,
    entry: &EntryState,
    m: &SSMorphism,
) -> Result<ExtResolution, AhssError> {
    let fail = |msg: String| AhssError::Extension { n, p, msg };
    if entry.orders.len() != 1 || entry.orders[0].is_zero() {
        return Err(fail(format!(
            "piece {} is not finite cyclic",
            entry.group()
        )));
    }
    let q = n - p;
    if m.is_zero_at_infinity(entry, (p, q)).map_err(&fail)? {
        return Err(fail("comparison map kills the piece".into()));
    }
    let tn = n + m.shift;
    let report = m
        .target
        .reports
        .get(&tn)
        .ok_or_else(|| fail(format!("target degree {tn} has no assembled answer")))?;
    if !matches!(report.assembled, Assembled::Known(_)) {
        return Err(fail(format!("target degree {tn} is not known")));
    }
    let stage = report
        .filtration_at(p + m.shift)
        .ok_or_else(|| fail("target filtration stage unknown".into()))?;
    if !stage.is_torsion_free() {
        return Err(fail(format!("target filtration stage {stage} has torsion")));
    }
    Ok(ExtResolution::Nontrivial)
}

type TotalOutcome = (Vec<ExtRecord>, BTreeMap<usize, AbelianGroup>, AbelianGroup);

/// Settles all extension steps in one degree from a known total group by
/// trying every split/absorb assignment for the torsion factors above the
/// bottom piece. Exactly one assignment must reproduce the total.
pub fn resolve_extensions_from_total(
    n: usize,
    pieces: &[(usize, AbelianGroup)],
    total: &AbelianGroup,
) -> Result<TotalOutcome, AhssError> {
    let mut slot_count = 0usize;
    for (_, g) in pieces.iter().skip(1) {
        slot_count += g.torsion.len();
    }
    if slot_count > 16 {
        return Err(AhssError::Extension {
            n,
            p: 0,
            msg: "too many undetermined extension steps".into(),
        });
    }
    let mut winners: Vec<TotalOutcome> = Vec::new();
    'combo: for mask in 0..(1u32 << slot_count) {
        let mut f = AbelianGroup::zero_group();
        let mut filtration = BTreeMap::new();
        let mut records = Vec::new();
        let mut slot = 0;
        for (i, (p, g)) in pieces.iter().enumerate() {
            if i == 0 {
                f = g.clone();
            } else {
                if g.free_rank > 0 {
                    f = dsum(&f, &AbelianGroup::free(g.free_rank));
                    records.push(ExtRecord {
                        p: *p,
                        resolution: ExtResolution::Trivial,
                        tag: "free-quotient".into(),
                    });
                }
                for d in &g.torsion {
                    let absorb = mask & (1 << slot) != 0;
                    slot += 1;
                    if absorb {
                        if f.free_rank == 0 {
                            continue 'combo;
                        }
                        records.push(ExtRecord {
                            p: *p,
                            resolution: ExtResolution::Nontrivial,
                            tag: "known-total".into(),
                        });
                    } else {
                        f = dsum(&f, &AbelianGroup::from_orders(std::slice::from_ref(d)));
                        records.push(ExtRecord {
                            p: *p,
                            resolution: ExtResolution::Trivial,
                            tag: "known-total".into(),
                        });
                    }
                }
            }
            filtration.insert(*p, f.clone());
        }
        if &f == total {
            let candidate = (records, filtration, f);
            if !winners
                .iter()
                .any(|w| w.0 == candidate.0 && w.1 == candidate.1)
            {
                winners.push(candidate);
            }
        }
    }
    match winners.len() {
        0 => Err(AhssError::Extension {
            n,
            p: 0,
            msg: format!("no split/absorb assignment reproduces the total {total}"),
        }),
        1 => Ok(winners.pop().unwrap()),
        _ => Err(AhssError::Extension {
            n,
            p: 0,
            msg: format!("several split/absorb assignments reproduce the total {total}"),
        }),
    }
}

/// Assembles one report per total degree from the limit page. Returns the
/// reports along with a flag saying whether any answer stayed symbolic.
pub fn assemble_reports(
    final_page: &Page,
    hints: &HintFile,
    morphisms: &BTreeMap<PathBuf, SSMorphism>,
    hints_dir: Option<&Path>,
    upto: usize,
) -> Result<(BTreeMap<usize, FiltrationReport>, bool), AhssError> {
    let mut reports = BTreeMap::new();
    let mut any_parametric = false;
    for n in 0..=upto {
        let pieces: Vec<(usize, &EntryState)> = (0..=n)
            .filter_map(|p| final_page.get(&(p, n - p)).map(|e| (p, e)))
            .collect();
        let piece_records: Vec<PieceRecord> = pieces
            .iter()
            .map(|(p, e)| PieceRecord {
                p: *p,
                q: n - p,
                group: e.group(),
                labels: e.labels.clone(),
                parametric: e.parametric.clone(),
            })
            .collect();
        let mut exts: Vec<ExtRecord> = Vec::new();
        let mut filtration: BTreeMap<usize, AbelianGroup> = BTreeMap::new();
        let assembled = if pieces.is_empty() {
            Assembled::Known(AbelianGroup::zero_group())
        } else if pieces.iter().any(|(_, e)| e.parametric.is_some()) {
            if pieces.len() == 1 {
                Assembled::Parametric(pieces[0].1.parametric.clone().unwrap())
            } else {
                Assembled::Undetermined("several pieces with at least one undetermined".into())
            }
        } else if let Some(total) = hints.totals.iter().find(|t| t.n == n) {
            let abstract_pieces: Vec<(usize, AbelianGroup)> =
                pieces.iter().map(|(p, e)| (*p, e.group())).collect();
            let (records, filt, g) =
                resolve_extensions_from_total(n, &abstract_pieces, &total.group)?;
            exts = records;
            filtration = filt;
            Assembled::Known(g)
        } else {
            let mut f = AbelianGroup::zero_group();
            let mut open = false;
            for (i, (p, entry)) in pieces.iter().enumerate() {
                let g = entry.group();
                if i == 0 {
                    f = g;
                } else {
                    if g.free_rank > 0 {
                        f = dsum(&f, &AbelianGroup::free(g.free_rank));
                        exts.push(ExtRecord {
                            p: *p,
                            resolution: ExtResolution::Trivial,
                            tag: "free-quotient".into(),
                        });
                    }
                    for d in &g.torsion {
                        let hint = hints.exts.iter().find(|h| h.n == n && h.p == *p);
                        match hint {
                            None => {
                                open = true;
                                exts.push(ExtRecord {
                                    p: *p,
                                    resolution: ExtResolution::Open,
                                    tag: "none".into(),
                                });
                            }
                            Some(h) => {
                                let dir = hints_dir.ok_or_else(|| AhssError::Extension {
                                    n,
                                    p: *p,
                                    msg: "no base directory for the map".into(),
                                })?;
                                let mpath =
                                    std::fs::canonicalize(dir.join(&h.map)).map_err(|e| {
                                        AhssError::Io {
                                            path: h.map.display().to_string(),
                                            source: e,
                                        }
                                    })?;
                                let m =
                                    morphisms.get(&mpath).ok_or_else(|| AhssError::Extension {
                                        n,
                                        p: *p,
                                        msg: format!("map {} not loaded", h.map.display()),
                                    })?;
                                resolve_extension_via_map(n, *p, entry, m)?;
                                if f.free_rank == 0 {
                                    return Err(AhssError::Extension {
                                        n,
                                        p: *p,
                                        msg: "no free summand below to absorb into".into(),
                                    });
                                }
                                if !is_small_prime(d) {
                                    return Err(AhssError::Extension {
                                        n,
                                        p: *p,
                                        msg: format!(
                                            "absorption of a factor of composite order {d} is ambiguous"
                                        ),
                                    });
                                }
                                let file = h
                                    .map
                                    .file_name()
                                    .map(|s| s.to_string_lossy().into_owned())
                                    .unwrap_or_else(|| h.map.display().to_string());
                                exts.push(ExtRecord {
                                    p: *p,
                                    resolution: ExtResolution::Nontrivial,
                                    tag: format!("naturality-map {file}"),
                                });
                            }
                        }
                    }
                }
                filtration.insert(*p, f.clone());
            }
            if open {
                filtration.clear();
                Assembled::Undetermined("unresolved extension step".into())
            } else {
                Assembled::Known(f)
            }
        };
        if !matches!(assembled, Assembled::Known(_)) {
            any_parametric = true;
        }
        reports.insert(
            n,
            FiltrationReport {
                n,
                pieces: piece_records,
                exts,
                assembled,
                filtration,
            },
        );
    }
    Ok((reports, any_parametric))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> AbelianGroup {
        AbelianGroup::free(1)
    }

    fn zmod(d: u64) -> AbelianGroup {
        AbelianGroup::cyclic(d)
    }

    #[test]
    fn total_forces_all_absorptions() {
        let pieces = vec![
            (4, z()),
            (6, zmod(2)),
            (7, zmod(2)),
            (8, dsum(&z(), &zmod(3))),
        ];
        let total = AbelianGroup::free(2);
        let (records, filtration, g) = resolve_extensions_from_total(8, &pieces, &total).unwrap();
        assert_eq!(g, total);
        assert_eq!(filtration[&4], z());
        assert_eq!(filtration[&6], z());
        assert_eq!(filtration[&7], z());
        assert_eq!(filtration[&8], AbelianGroup::free(2));
        let absorbed = records
            .iter()
            .filter(|r| r.resolution == ExtResolution::Nontrivial)
            .count();
        assert_eq!(absorbed, 3);
        assert!(records.iter().any(|r| r.p == 8 && r.tag == "free-quotient"));
    }

    #[test]
    fn impossible_total_is_rejected() {
        let pieces = vec![(3, zmod(2)), (5, zmod(2))];
        let total = zmod(3);
        let err = resolve_extensions_from_total(5, &pieces, &total).unwrap_err();
        assert!(err.to_string().contains("no split/absorb"), "{err}");
    }

    #[test]
    fn split_assignment_found_when_total_has_torsion() {
        let pieces = vec![(3, z()), (5, zmod(2))];
        let total = dsum(&z(), &zmod(2));
        let (records, _, g) = resolve_extensions_from_total(5, &pieces, &total).unwrap();
        assert_eq!(g, total);
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].resolution, ExtResolution::Trivial);
    }

    #[test]
    fn ambiguous_when_absorb_and_split_both_reach_total() {
        // two Z/2 steps over a free bottom: either one can absorb while the
        // other splits, so the total does not pin the assignment down
        let pieces = vec![(1, z()), (2, zmod(2)), (3, zmod(2))];
        let total = dsum(&z(), &zmod(2));
        let err = resolve_extensions_from_total(3, &pieces, &total).unwrap_err();
        assert!(err.to_string().contains("several"), "{err}");
    }

    #[test]
    fn primes_recognized() {
        assert!(is_small_prime(&BigInt::from(2)));
        assert!(is_small_prime(&BigInt::from(3)));
        assert!(!is_small_prime(&BigInt::from(4)));
        assert!(!is_small_prime(&BigInt::from(1)));
        assert!(is_small_prime(&BigInt::from(13)));
    }
}
