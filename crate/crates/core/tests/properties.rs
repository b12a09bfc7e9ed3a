use std::collections::HashMap;

use proptest::prelude::*;

use sts_atlas::classify::{emit_tables, survey, ClassReport, SurveyOptions};
use sts_atlas::cosets::{class_reps, coset_star};
use sts_atlas::geometry::orientable;
use sts_atlas::gf2m::gcd;
use sts_atlas::invariants::{monomial_record, v_direct, v_star};
use sts_atlas::rotation::{is_closed_surface, rotation_lines, spectrum};
use sts_atlas::{Convention, FieldCtx, Permutation, VStar};

/// Orientability of the triangulation with faces S ∪ G(S), decided by
/// propagating face orientations across shared edges.
fn orientable_by_faces(ctx: &FieldCtx, f: &Permutation, conv: Convention) -> bool {
    let g = f.effective(conv);
    let size = ctx.size() as u32;
    let mut faces: Vec<[u32; 3]> = Vec::new();
    for x in 1..size {
        for y in x + 1..size {
            let z = x ^ y;
            if z > y {
                faces.push([x, y, z]);
                let mut img = [g.apply(ctx, x), g.apply(ctx, y), g.apply(ctx, z)];
                img.sort_unstable();
                faces.push(img);
            }
        }
    }
    let mut by_edge: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])] {
            by_edge.entry((a, b)).or_default().push(i);
        }
    }
    // Direction of the edge x -> y along the positive cycle f0 -> f1 -> f2.
    let dir = |f: &[u32; 3], x: u32, y: u32| -> i8 {
        let pos = |p| f.iter().position(|&q| q == p).unwrap();
        if (pos(x) + 1) % 3 == pos(y) {
            1
        } else {
            -1
        }
    };
    let mut sign = vec![0i8; faces.len()];
    for start in 0..faces.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let f = faces[i];
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])] {
                for &j in &by_edge[&(a, b)] {
                    if j == i {
                        continue;
                    }
                    let want = -sign[i] * dir(&f, a, b) * dir(&faces[j], a, b);
                    if sign[j] == 0 {
                        sign[j] = want;
                        stack.push(j);
                    } else if sign[j] != want {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn vertex_parity_agrees_with_face_orientation() {
    let mut checked = 0;
    for m in [3, 5, 7] {
        let ctx = FieldCtx::new(m, None).unwrap();
        let (_, classes) = class_reps(ctx.n() as u64);
        for class in classes {
            let f = Permutation::monomial(&ctx, class.rep).unwrap();
            for conv in [Convention::Direct, Convention::Inverse] {
                if !is_closed_surface(&ctx, &f, conv) {
                    continue;
                }
                assert_eq!(orientable(&ctx, &f, conv).unwrap(), orientable_by_faces(&ctx, &f, conv), "m={m} t={}", class.rep);
                checked += 1;
            }
        }
    }
    assert!(checked >= 8);
}

#[test]
fn survey_round_trips_through_jsonl_files() {
    let ctx = FieldCtx::new(7, None).unwrap();
    let report = survey(&ctx, &SurveyOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_tables(&report, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("survey.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 1 + report.records.len());
    let back = ClassReport::from_jsonl(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_jsonl().unwrap(), report.to_jsonl().unwrap());
}

fn field(m: u32) -> FieldCtx {
    FieldCtx::new(m, None).unwrap()
}

fn coprime(max_m: u32) -> impl Strategy<Value = (u32, u64)> {
    (3u32..=max_m).prop_flat_map(|m| {
        let n = (1u64 << m) - 1;
        (Just(m), (2..n).prop_filter("coprime", move |&t| gcd(t, n) == 1))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_lines_partition_the_other_points((m, t) in coprime(10), a in 1u32..1000) {
        let ctx = field(m);
        let a = 1 + a % ctx.n();
        let f = Permutation::monomial(&ctx, t).unwrap();
        let lines = rotation_lines(&ctx, &f, a, Convention::Inverse).unwrap();
        let mut seen = vec![false; ctx.n() as usize + 1];
        for line in &lines {
            prop_assert_eq!(line.base.0, a);
            for p in line.entries.iter().flat_map(|&(x, y)| [x, y]) {
                prop_assert!(!seen[p.0 as usize]);
                seen[p.0 as usize] = true;
            }
        }
        prop_assert!(!seen[a as usize]);
        prop_assert_eq!(seen.iter().filter(|&&s| s).count() as u32, ctx.n() - 1);
        let s = spectrum(&ctx, &f, a, Convention::Inverse).unwrap();
        prop_assert_eq!(s.total(), ctx.n() as u64 - 1);
    }

    #[test]
    fn invariants_are_the_same_at_every_point((m, t) in coprime(9), a in 1u32..1000) {
        let ctx = field(m);
        let a = 1 + a % ctx.n();
        let f = Permutation::monomial(&ctx, t).unwrap();
        prop_assert_eq!(v_direct(&ctx, &f, a).unwrap(), v_direct(&ctx, &f, 1).unwrap());
        let star = v_star(&ctx, &f, a, Convention::Inverse).unwrap();
        prop_assert_eq!(&star, &v_star(&ctx, &f, 1, Convention::Inverse).unwrap());
        prop_assert_eq!(star.mass(), (ctx.n() as u64 - 1) / 2);
        let a_spec = spectrum(&ctx, &f, a, Convention::Inverse).unwrap();
        prop_assert_eq!(a_spec.reduced(), spectrum(&ctx, &f, 1, Convention::Inverse).unwrap().reduced());
    }

    #[test]
    fn records_are_constant_on_coset_classes((m, t) in coprime(11)) {
        let ctx = field(m);
        let n = ctx.n() as u64;
        let class = coset_star(n, t).unwrap();
        let rep = monomial_record(&ctx, class.rep, Convention::Inverse).map(|r| (r.v, r.vstar, r.spectrum));
        let mine = monomial_record(&ctx, t, Convention::Inverse).map(|r| (r.v, r.vstar, r.spectrum));
        prop_assert_eq!(rep.is_ok(), mine.is_ok());
        if let (Ok(a), Ok(b)) = (rep, mine) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn vstar_text_round_trips(entries in proptest::collection::btree_map(1u32..40, 1u64..5000, 1..6)) {
        let v = VStar(entries.into_iter().collect());
        let back: VStar = v.to_string().parse().unwrap();
        prop_assert_eq!(back, v);
    }
}
