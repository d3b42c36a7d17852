//! End-to-end runs over the bundled sample spaces, checking the reported
//! groups, generator labels, extension records, and structural invariants
//! of the page-turning process.

use bordcalc::abelian::{uct_cohomology, Coeff, UctVariant};
use bordcalc::ahss::{render_report, Assembled, CoeffChoice, Runner, SpaceDescriptor};
use std::path::{Path, PathBuf};
use std::rc::Rc;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn table(run: &bordcalc::ahss::Run) -> Vec<String> {
    (0..=run.upto)
        .map(|n| match &run.reports[&n].assembled {
            Assembled::Known(g) => g.to_string(),
            Assembled::Parametric(d) => d.clone(),
            Assembled::Undetermined(_) => "undetermined".into(),
        })
        .collect()
}

#[test]
fn rank_four_unitary_group_table() {
    let mut runner = Runner::new();
    let run = runner
        .run(
            &fixture("su.space"),
            Some(&fixture("su.hints")),
            &CoeffChoice::Spin,
            8,
        )
        .unwrap();
    assert!(!run.parametric);
    assert_eq!(table(&run), ["0", "0", "0", "Z", "0", "Z", "0", "Z^2", "Z"]);

    let n5 = &run.reports[&5];
    assert_eq!(n5.pieces.len(), 1);
    assert_eq!((n5.pieces[0].p, n5.pieces[0].q), (5, 0));
    assert_eq!(n5.pieces[0].labels, ["2b3"]);

    let n7 = &run.reports[&7];
    let shape: Vec<(usize, usize, String, Vec<String>)> = n7
        .pieces
        .iter()
        .map(|pc| (pc.p, pc.q, pc.group.to_string(), pc.labels.clone()))
        .collect();
    assert_eq!(
        shape,
        [
            (3, 4, "Z".to_string(), vec!["a2b2".to_string()]),
            (5, 2, "Z/2".to_string(), vec!["a1^2b3".to_string()]),
            (7, 0, "Z".to_string(), vec!["b4".to_string()]),
        ]
    );
    let rendered = render_report(&run);
    assert!(rendered.contains("extension p=5 nontrivial (naturality-map su_to_kz3.map)"));
    assert!(rendered.contains("extension p=7 split (free-quotient)"));
    assert!(rendered.contains("n=7: Z^2"));

    let n8 = &run.reports[&8];
    assert_eq!(n8.pieces.len(), 1);
    assert_eq!(n8.pieces[0].labels, ["b2b3"]);
}

#[test]
fn degree_three_eilenberg_maclane_table() {
    let mut runner = Runner::new();
    let run = runner
        .run(
            &fixture("kz3.space"),
            Some(&fixture("kz3.hints")),
            &CoeffChoice::Spin,
            8,
        )
        .unwrap();
    assert!(!run.parametric);
    assert_eq!(table(&run), ["0", "0", "0", "Z", "0", "0", "0", "Z", "Z/2"]);

    let n7 = &run.reports[&7];
    let shape: Vec<(usize, usize, String, Vec<String>)> = n7
        .pieces
        .iter()
        .map(|pc| (pc.p, pc.q, pc.group.to_string(), pc.labels.clone()))
        .collect();
    assert_eq!(
        shape,
        [
            (3, 4, "Z".to_string(), vec!["a2d3".to_string()]),
            (5, 2, "Z/2".to_string(), vec!["a1^2d5'".to_string()]),
            (6, 1, "Z/2".to_string(), vec!["a1d3^2".to_string()]),
            (7, 0, "Z/3".to_string(), vec!["d7".to_string()]),
        ]
    );
    for (p, d) in [(5, 2u64), (6, 2), (7, 3)] {
        let rec = n7.exts.iter().find(|e| e.p == p).unwrap();
        assert_eq!(rec.resolution.word(), "nontrivial", "p={p} order {d}");
        assert_eq!(rec.tag, "naturality-map kz3_to_kz4.map");
    }

    let n8 = &run.reports[&8];
    assert_eq!(n8.pieces.len(), 1);
    assert_eq!((n8.pieces[0].p, n8.pieces[0].q), (8, 0));
    assert_eq!(n8.pieces[0].labels, ["d3d5'"]);
}

#[test]
fn degree_four_eilenberg_maclane_uses_recorded_total() {
    let mut runner = Runner::new();
    let run = runner
        .run(
            &fixture("kz4.space"),
            Some(&fixture("kz4.hints")),
            &CoeffChoice::Spin,
            8,
        )
        .unwrap();
    assert!(!run.parametric);
    assert_eq!(table(&run), ["0", "0", "0", "0", "Z", "0", "0", "0", "Z^2"]);

    let n8 = &run.reports[&8];
    let shape: Vec<(usize, usize, String)> = n8
        .pieces
        .iter()
        .map(|pc| (pc.p, pc.q, pc.group.to_string()))
        .collect();
    assert_eq!(
        shape,
        [
            (4, 4, "Z".to_string()),
            (6, 2, "Z/2".to_string()),
            (7, 1, "Z/2".to_string()),
            (8, 0, "Z + Z/3".to_string()),
        ]
    );
    for p in [6, 7, 8] {
        let rec = n8
            .exts
            .iter()
            .find(|e| e.p == p && e.tag == "known-total")
            .unwrap();
        assert_eq!(rec.resolution.word(), "nontrivial");
    }
    assert!(n8.exts.iter().any(|e| e.p == 8 && e.tag == "free-quotient"));
    let filt: Vec<(usize, String)> = n8
        .filtration
        .iter()
        .map(|(p, g)| (*p, g.to_string()))
        .collect();
    assert_eq!(
        filt,
        [
            (4, "Z".to_string()),
            (6, "Z".to_string()),
            (7, "Z".to_string()),
            (8, "Z^2".to_string()),
        ]
    );
}

#[test]
fn second_stage_runs_expose_parameters() {
    let mut runner = Runner::new();
    let lbsu = runner
        .run(
            &fixture("bsu.space"),
            Some(&fixture("lbsu.hints")),
            &CoeffChoice::Path(fixture("omega_su.coeff")),
            8,
        )
        .unwrap();
    assert!(lbsu.parametric);
    assert_eq!(
        table(&lbsu),
        ["0", "0", "0", "Z", "0", "Z", "0", "Z^3", "Z/k"]
    );
    let n7 = &lbsu.reports[&7];
    assert_eq!(n7.pieces[0].labels, ["l5", "k3l2"]);
    assert_eq!(n7.pieces[1].labels, ["l2g2"]);
    assert_eq!((n7.pieces[0].p, n7.pieces[1].p), (0, 4));
    match &lbsu.reports[&8].assembled {
        Assembled::Parametric(d) => assert_eq!(d, "Z/k"),
        other => panic!("expected a parametric degree eight, got {other:?}"),
    }

    let lkz4 = runner
        .run(
            &fixture("kz4.space"),
            Some(&fixture("lkz4.hints")),
            &CoeffChoice::Path(fixture("omega_kz3.coeff")),
            8,
        )
        .unwrap();
    assert!(lkz4.parametric);
    assert_eq!(
        table(&lkz4),
        ["0", "0", "0", "Z", "0", "0", "0", "Z^2", "Z/2/l"]
    );
    let n7 = &lkz4.reports[&7];
    assert_eq!(n7.pieces[0].labels, ["th"]);
    assert_eq!(n7.pieces[1].labels, ["d3e4"]);
}

#[test]
fn pages_only_shrink() {
    let mut runner = Runner::new();
    for (space, hints) in [("su.space", "su.hints"), ("kz3.space", "kz3.hints")] {
        let run = runner
            .run(
                &fixture(space),
                Some(&fixture(hints)),
                &CoeffChoice::Spin,
                8,
            )
            .unwrap();
        let pages: Vec<_> = run.pages.keys().cloned().collect();
        for w in pages.windows(2) {
            let (cur, next) = (&run.pages[&w[0]], &run.pages[&w[1]]);
            for (pos, entry) in next {
                let prev = cur
                    .get(pos)
                    .unwrap_or_else(|| panic!("{space}: entry {pos:?} appeared on page {}", w[1]));
                let (g_new, g_old) = (entry.group(), prev.group());
                assert!(
                    g_new.free_rank <= g_old.free_rank,
                    "{space} {pos:?}: rank grew from {g_old} to {g_new}"
                );
                if g_old.is_finite() && g_new.is_finite() {
                    let o_new = g_new.order().unwrap();
                    let o_old = g_old.order().unwrap();
                    assert!(
                        (&o_old % &o_new).bits() == 0,
                        "{space} {pos:?}: order {o_new} does not divide {o_old}"
                    );
                }
            }
        }
    }
}

#[test]
fn quiet_pages_are_copied_verbatim() {
    let mut runner = Runner::new();
    let run = runner
        .run(
            &fixture("su.space"),
            Some(&fixture("su.hints")),
            &CoeffChoice::Spin,
            8,
        )
        .unwrap();
    for r in run.pages.keys() {
        let quiet = run
            .differentials
            .iter()
            .filter(|((rr, _, _), _)| rr == r)
            .all(|(_, d)| d.matrix.is_none());
        if !quiet {
            continue;
        }
        let Some(next) = run.pages.get(&(r + 1)) else {
            continue;
        };
        let cur = &run.pages[r];
        assert_eq!(cur.len(), next.len(), "page {} changed size", r + 1);
        for (pos, entry) in cur {
            let after = &next[pos];
            assert_eq!(entry.orders, after.orders, "orders moved at {pos:?}");
            assert_eq!(entry.labels, after.labels, "labels moved at {pos:?}");
        }
    }
}

fn check_duality(space: &SpaceDescriptor) {
    let h = space.homology_z.graded();
    for d in 1..=space.cap {
        let mod_two = uct_cohomology(&h, d, &Coeff::z2(), UctVariant::HomologyMod).unwrap();
        let stored = space.homology_z2.get(d).unwrap().group;
        assert_eq!(
            mod_two, stored,
            "{} mod-two table at degree {d}",
            space.name
        );
        if let Some(coh) = &space.cohomology_z {
            let derived = uct_cohomology(&h, d, &Coeff::Z, UctVariant::Cohomology).unwrap();
            let stored = coh.get(d).unwrap().group;
            assert_eq!(
                derived, stored,
                "{} integral dual at degree {d}",
                space.name
            );
        }
    }
}

#[test]
fn stored_tables_satisfy_both_duality_directions() {
    let mut runner = Runner::new();
    let mut spaces: Vec<Rc<bordcalc::ahss::Run>> = Vec::new();
    spaces.push(
        runner
            .run(
                &fixture("su.space"),
                Some(&fixture("su.hints")),
                &CoeffChoice::Spin,
                8,
            )
            .unwrap(),
    );
    spaces.push(
        runner
            .run(&fixture("bsu.space"), None, &CoeffChoice::Spin, 8)
            .unwrap(),
    );
    spaces.push(
        runner
            .run(
                &fixture("kz3.space"),
                Some(&fixture("kz3.hints")),
                &CoeffChoice::Spin,
                8,
            )
            .unwrap(),
    );
    spaces.push(
        runner
            .run(
                &fixture("kz4.space"),
                Some(&fixture("kz4.hints")),
                &CoeffChoice::Spin,
                8,
            )
            .unwrap(),
    );
    let mut names = Vec::new();
    for run in &spaces {
        check_duality(&run.space);
        names.push(run.space.name.clone());
    }
    assert_eq!(names, ["su", "bsu", "kz3", "kz4"]);
}

#[test]
fn hint_file_for_wrong_space_is_rejected() {
    let mut runner = Runner::new();
    let err = match runner.run(
        &fixture("su.space"),
        Some(&fixture("kz4.hints")),
        &CoeffChoice::Spin,
        8,
    ) {
        Ok(_) => panic!("expected a validation failure"),
        Err(e) => e,
    };
    assert!(err.to_string().contains("hints are for kz4"), "{err}");
}
