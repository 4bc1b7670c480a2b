//! End-to-end acceptance suite. Each test prints a single pass/fail line
//! for its criterion and pins the runtime budget.

use highgenus::geom::{
    a_prime_rows, build_deformed_cube, cube_vertex, kernel_check_am, positive_dependency,
    verify_cube_combinatorics,
};
use highgenus::heffter::{check_self_dual_and_actions, heffter_surface, stellar_triangulation};
use highgenus::io::{mesh_to_file, obj_string, off_string, to_json_string, MeshMeta};
use highgenus::linalg::rank;
use highgenus::mirror::{build_qm, orient_qm, triangulate_equivelar};
use highgenus::rational::{rat, rat_int, Rat};
use highgenus::rotation::{
    check_delta_star, ringel_network, ringel_scheme, scheme_to_surface, trace_current_graph,
    RotationScheme,
};
use highgenus::schlegel::{realize_surface, EmbeddedMesh};
use highgenus::surface::CellSurface;
use highgenus::verify::{certify, check_pairwise, check_planarity_convexity};
use num::{One, Signed, Zero};
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::time::{Duration, Instant};

fn criterion(name: &str, budget: Duration, body: impl FnOnce() + UnwindSafe) {
    let start = Instant::now();
    let result = catch_unwind(body);
    let elapsed = start.elapsed();
    let ok = result.is_ok() && elapsed <= budget;
    println!(
        "criterion {name}: {} ({elapsed:.2?} of {budget:.0?} budget)",
        if ok { "pass" } else { "fail" }
    );
    if let Err(e) = result {
        resume_unwind(e);
    }
    assert!(elapsed <= budget, "{name} exceeded its {budget:?} budget");
}

fn degrees(s: &CellSurface) -> Vec<usize> {
    let mut deg = vec![0usize; s.n_vertices()];
    for (a, b) in s.edges() {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg
}

#[test]
fn criterion_1_moebius_golden_case() {
    criterion("1 (Moebius torus golden case)", Duration::from_secs(1), || {
        let scheme = ringel_scheme(0).unwrap();
        let listing = RotationScheme::new(
            7,
            vec![
                vec![1, 3, 2, 6, 4, 5],
                vec![2, 4, 3, 0, 5, 6],
                vec![3, 5, 4, 1, 6, 0],
                vec![4, 6, 5, 2, 0, 1],
                vec![5, 0, 6, 3, 1, 2],
                vec![6, 1, 0, 4, 2, 3],
                vec![0, 2, 1, 5, 3, 4],
            ],
        )
        .unwrap();
        assert_eq!(scheme.rows(), listing.rows());
        assert!(check_delta_star(&scheme).is_none());
        let report = scheme_to_surface(&scheme).unwrap().analyze();
        assert_eq!(
            (report.f_vector.f0, report.f_vector.f1, report.f_vector.f2),
            (7, 21, 14)
        );
        assert_eq!(report.genus, Some(1));
        assert!(report.neighborly && report.orientable && report.intersection_condition);
    });
}

#[test]
fn criterion_2_ringel_scaling() {
    criterion("2 (cyclic schemes up to n = 103)", Duration::from_secs(10), || {
        for s in 2usize..=8 {
            let n = (12 * s + 7) as i64;
            let scheme = ringel_scheme(s).unwrap();
            assert!(check_delta_star(&scheme).is_none(), "s = {s}");
            let report = scheme_to_surface(&scheme).unwrap().analyze();
            assert!(report.neighborly && report.orientable, "s = {s}");
            assert_eq!(report.genus, Some((n - 3) * (n - 4) / 12), "s = {s}");

            // the printed start of the traversal sequence, with s substituted
            let log = trace_current_graph(&ringel_network(s)).unwrap();
            let s = s as i64;
            let prefix = [
                1,
                -(5 * s + 3),
                -(3 * s + 2),
                -(3 * s + 3),
                -(3 * s + 1),
                -(3 * s + 4),
                -3 * s,
                -(3 * s + 5),
            ];
            assert_eq!(&log.entries[..8], &prefix);
        }
    });
}

#[test]
fn criterion_3_heffter_surfaces() {
    criterion("3 (self-dual finite-field surfaces)", Duration::from_secs(10), || {
        for q in [5usize, 9, 13, 17, 25, 29] {
            let qc2 = (q * (q - 1) / 2) as u64;
            let raw = heffter_surface(q).unwrap();
            let report = raw.analyze();
            assert_eq!(
                (report.f_vector.f0, report.f_vector.f1, report.f_vector.f2),
                (q as u64, qc2, q as u64)
            );
            assert_eq!(report.genus, Some(qc2 as i64 / 2 - q as i64 + 1));
            match raw.intersection_condition_witness() {
                None => assert_eq!(q, 5),
                Some(w) => assert_eq!(w.shared.len(), q - 2, "q = {q}"),
            }

            let actions = check_self_dual_and_actions(q).unwrap();
            assert!(actions.additive_action, "q = {q}");
            assert!(actions.multiplicative_action, "q = {q}");
            assert!(actions.dual_complete, "q = {q}");

            let stellar = stellar_triangulation(&raw).unwrap();
            let report = stellar.analyze();
            assert_eq!(
                (report.f_vector.f0, report.f_vector.f1, report.f_vector.f2),
                (2 * q as u64, 3 * qc2, 2 * qc2)
            );
            assert!(report.intersection_condition, "q = {q}");
            let n = 2 * q as i64;
            assert_eq!(report.genus, Some((n * n - 10 * n + 16) / 16));
            let mut deg = degrees(&stellar);
            deg.sort_unstable();
            let mut expected = vec![q - 1; q];
            expected.extend(vec![2 * q - 2; q]);
            expected.sort_unstable();
            assert_eq!(deg, expected, "q = {q}");
        }
    });
}

#[test]
fn criterion_4_quad_surface_combinatorics() {
    criterion("4 (cube quad surfaces m = 3..12)", Duration::from_secs(5), || {
        for m in 3usize..=12 {
            let q = build_qm(m).unwrap();
            let oriented = orient_qm(&q).unwrap();
            let fv = oriented.f_vector();
            assert_eq!(fv.f0, 1 << m);
            assert_eq!(fv.f1, (m as u64) << (m - 1));
            assert_eq!(fv.f2, (m as u64) << (m - 2));
            assert!(oriented.orientation().is_some(), "m = {m}");
            let genus = 1 + (fv.f1 as i64 - fv.f0 as i64 - fv.f2 as i64) / 2;
            assert_eq!(genus, 1 + (m as i64 - 4) * (1i64 << (m - 3)));
            if m == 5 {
                assert_eq!(genus, 5);
            }

            if m % 2 == 0 {
                let tri = triangulate_equivelar(&q).unwrap();
                let deg = degrees(&tri);
                assert!(deg.iter().all(|&d| d == 3 * m / 2), "m = {m}");
                assert!(tri.orientation().is_some());
            }
        }
    });
}

#[test]
fn criterion_5_deformed_cube() {
    criterion("5 (deformed cubes, exact arithmetic)", Duration::from_secs(30), || {
        for m in 4usize..=7 {
            for eps in [rat(1, 4), rat(1, 3)] {
                let cube = build_deformed_cube(m, eps.clone()).unwrap();
                assert_eq!(
                    verify_cube_combinatorics(&cube),
                    None,
                    "m = {m}, eps = {eps}"
                );
                // |x_k| < (1/3) (6/eps)^k at every vertex
                let base = rat_int(6) / &eps;
                for signs in 0..1u32 << m {
                    let v = cube_vertex(&cube, &(0..m).map(|k| signs >> k & 1 == 1).collect::<Vec<_>>());
                    let mut bound = Rat::one() / rat_int(3);
                    for x in &v.coords {
                        bound *= &base;
                        assert!(x.abs() < bound, "m = {m}, eps = {eps}");
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_6_kernel_and_dependency_oracle() {
    criterion("6 (kernel and positive dependencies)", Duration::from_secs(30), || {
        for m in 5usize..=16 {
            assert!(kernel_check_am(m), "m = {m}");
        }

        let m = 8usize;
        let rows = a_prime_rows(m);
        // all cyclically-adjacent pairs {t, t+1}, rows 1-indexed
        for t in 1..=m {
            let u = t % m + 1;
            let kept: Vec<Vec<Rat>> = (1..=m)
                .filter(|&i| i != t && i != u)
                .map(|i| rows[i - 1].clone())
                .collect();
            assert!(positive_dependency(&kept).is_some(), "pair {{{t}, {u}}}");
            assert_eq!(rank(&kept), m - 4, "pair {{{t}, {u}}}");
        }

        // closed-form coefficients (2^{i-t} - 1)(1 - 2^{t+1-i}): zero for
        // i = t, t+1, positive elsewhere, and (with 0 on row 1) an exact
        // dependency of the rows — matching LP feasibility when rows
        // {1, t, t+1} are all deleted
        let pow2 = |e: i64| -> Rat {
            if e >= 0 {
                rat_int(1i64 << e)
            } else {
                rat(1, 1i64 << -e)
            }
        };
        for t in 2..m {
            let mut combo = vec![Rat::zero(); m - 4];
            for i in 2..=m {
                let (i, t) = (i as i64, t as i64);
                let lambda = (pow2(i - t) - Rat::one()) * (Rat::one() - pow2(t + 1 - i));
                if i == t || i == t + 1 {
                    assert!(lambda.is_zero());
                } else {
                    assert!(lambda.is_positive(), "i = {i}, t = {t}");
                }
                for (c, r) in combo.iter_mut().zip(&rows[i as usize - 1]) {
                    *c += &lambda * r;
                }
            }
            assert!(combo.iter().all(Rat::is_zero), "t = {t}");

            let kept: Vec<Vec<Rat>> = (2..=m)
                .filter(|&i| i != t && i != t + 1)
                .map(|i| rows[i - 1].clone())
                .collect();
            assert!(positive_dependency(&kept).is_some(), "t = {t}");
        }
    });
}

#[test]
fn criterion_7_full_realization() {
    criterion("7 (exact realization and certification)", Duration::from_secs(600), || {
        for (m, genus) in [(4usize, 1i64), (5, 5), (6, 17)] {
            for f0 in [0usize, 1] {
                let mesh = realize_surface(m, rat(1, 4), Some(f0)).unwrap();
                let cert = certify(&mesh);
                assert!(cert.planar_ok, "m = {m}, f0 = {f0}: {:?}", cert.failures);
                assert!(cert.convex_ok, "m = {m}, f0 = {f0}: {:?}", cert.failures);
                assert!(cert.pairwise_ok, "m = {m}, f0 = {f0}: {:?}", cert.failures);
                assert!(cert.combinatorics_ok, "m = {m}, f0 = {f0}");
                assert_eq!(cert.genus_from_mesh, Some(genus), "m = {m}, f0 = {f0}");
            }
        }
    });
}

#[test]
fn criterion_8_defect_detection() {
    criterion("8 (injected defects are caught)", Duration::from_secs(30), || {
        let clean = realize_surface(4, rat(1, 4), None).unwrap();
        assert!(certify(&clean).ok());

        // off-plane vertex
        let mut off_plane = clean.clone();
        off_plane.vertices[clean.faces[0][0]][2] += rat(1, 97);
        let w = check_planarity_convexity(&off_plane).expect("off-plane vertex missed");
        assert!(w.kind.contains("not planar"), "got {}", w.kind);
        assert!(clean.faces[w.face_a].contains(&clean.faces[0][0]));
        assert!(!certify(&off_plane).planar_ok);

        // bowtie quad: swap two adjacent vertices of one face
        let mut bowtie = clean.clone();
        bowtie.faces[3].swap(0, 1);
        let w = check_planarity_convexity(&bowtie).expect("bowtie missed");
        assert!(w.kind.contains("convex"), "got {}", w.kind);
        assert_eq!(w.face_a, 3);

        // coplanar region overlap between faces that share no cell
        let overlap = EmbeddedMesh {
            vertices: vec![
                vec![rat_int(0), rat_int(0), rat_int(0)],
                vec![rat_int(4), rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(4), rat_int(0)],
                vec![rat_int(1), rat_int(1), rat_int(0)],
                vec![rat_int(5), rat_int(1), rat_int(0)],
                vec![rat_int(1), rat_int(5), rat_int(0)],
            ],
            faces: vec![vec![0, 1, 2], vec![3, 4, 5]],
            provenance: vec![],
        };
        let fails = check_pairwise(&overlap);
        assert_eq!(fails.len(), 1);
        assert!(fails[0].kind.contains("2-dimensional"), "got {}", fails[0].kind);
        assert_eq!((fails[0].face_a, fails[0].face_b), (0, Some(1)));
    });
}

#[test]
fn criterion_9_determinism() {
    criterion("9 (byte-identical artifacts)", Duration::from_secs(60), || {
        let runs: Vec<(String, String, String)> = (0..2)
            .map(|_| {
                let mesh = realize_surface(4, rat(1, 4), None).unwrap();
                let meta = MeshMeta { m: 4, eps: "1/4".into(), f0: 0 };
                (
                    to_json_string(&mesh_to_file(&mesh, Some(meta.clone()))),
                    off_string(&mesh, Some(&meta), 12),
                    obj_string(&mesh, Some(&meta), 12),
                )
            })
            .collect();
        assert_eq!(runs[0], runs[1]);

        for make in [
            (|| scheme_to_surface(&ringel_scheme(2).unwrap()).unwrap()) as fn() -> CellSurface,
            || heffter_surface(13).unwrap(),
            || orient_qm(&build_qm(6).unwrap()).unwrap(),
        ] {
            let a = to_json_string(&make().analyze());
            let b = to_json_string(&make().analyze());
            assert_eq!(a, b);
            let fa = to_json_string(&make().to_file());
            let fb = to_json_string(&make().to_file());
            assert_eq!(fa, fb);
        }
    });
}
