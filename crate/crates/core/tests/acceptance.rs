//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when
//! any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use relquiv_core::ext::{arrow_multiset, ExtEngine, WitnessKind};
use relquiv_core::extension::{build_extension, ExtensionMode};
use relquiv_core::fixtures::{self, figure, figure_delta};
use relquiv_core::gentle::{check_gentle_extensions, gentle_new_arrows, tensor_relations};
use relquiv_core::modules::Interval;
use relquiv_core::oracle::Oracle;
use relquiv_core::resolution::{
    coresolve_projective, coresolve_uniserial, resolve_injective, resolve_uniserial,
};
use relquiv_core::selftest::SelftestConfig;
use relquiv_core::{gen_random_string_tree, new_arrows, NewArrow, StringPresentation, Vertex};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn v(p: &StringPresentation, name: &str) -> Vertex {
    p.vertex_by_name(name)
        .unwrap_or_else(|| panic!("no vertex {name}"))
}

fn pairs(p: &StringPresentation, arrows: &[NewArrow]) -> Vec<String> {
    let mut out: Vec<String> = arrows
        .iter()
        .map(|a| format!("{}->{}", p.vertex_name(a.source), p.vertex_name(a.target)))
        .collect();
    out.sort();
    out
}

fn sorted(items: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = items.iter().map(|s| s.to_string()).collect();
    out.sort();
    out
}

fn engine_matches_oracle(p: &StringPresentation) -> bool {
    arrow_multiset(&new_arrows(p)) == Oracle::new(p).new_arrow_multiset()
}

fn criterion_1() -> Outcome {
    let p = fixtures::fix_c();
    let iv = Interval::by_names(&p, "3", "9").expect("[3,9] is a path");
    let res = resolve_uniserial(&p, &iv).expect("resolution");
    let co = coresolve_uniserial(&p, &iv).expect("coresolution");
    let want_res = "0 → P(13) → P(12) → P(16) ⊕ P(11) ⊕ P(6) → P(10) ⊕ P(4) → P(3) → M[3,9] → 0";
    let want_co = "0 → M[3,9] → I(9) → I(1) → 0";
    let (got_res, got_co) = (res.sequence(&p), co.sequence(&p));
    let checks = [res.verify(&p), co.verify(&p)];
    let verified = checks.iter().all(Result::is_ok);
    Outcome::new(
        got_res == want_res && got_co == want_co && verified,
        format!("{got_res}; {got_co}; oracle exactness and minimality: {checks:?}"),
    )
}

fn criterion_2() -> Outcome {
    let p = fixtures::fix_f();
    let seq = resolve_injective(&p, v(&p, "1")).sequence(&p);
    let dim = Oracle::new(&p).ext_dim(v(&p, "1"), v(&p, "2"), 2);
    let witnesses = ExtEngine::new(&p).ext_witnesses(v(&p, "1"), v(&p, "2"), 2);
    let difference =
        witnesses.len() == 1 && matches!(witnesses[0].kind, WitnessKind::Difference { .. });
    Outcome::new(
        seq == "0 → P(3) ⊕ P(4) → P(2) → P(1) → I(1) → 0" && dim == 1 && difference,
        format!("{seq}; dim Ext^2(I(1),P(2)) = {dim}; difference witness: {difference}"),
    )
}

fn criterion_3() -> Outcome {
    let p = fixtures::fix_a();
    let e = ExtEngine::new(&p);
    let left = e
        .left_top_basis(v(&p, "2"), 2)
        .iter()
        .any(|(z, _)| *z == v(&p, "4"));
    let right = e
        .right_top_basis(v(&p, "4"), 2)
        .iter()
        .any(|(c, _)| *c == v(&p, "2"));
    let arrows = pairs(&p, &e.new_arrows());
    Outcome::new(
        left && !right && arrows == ["4->1"],
        format!(
            "z=4 in left top of c=2: {left}; c=2 in right top of z=4: {right}; arrows {arrows:?}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let p = fixtures::fix_b();
    let arrows = pairs(&p, &new_arrows(&p));
    let agree = engine_matches_oracle(&p);
    Outcome::new(
        arrows == sorted(&["4->1", "4->5", "5->1"]) && agree,
        format!("arrows {arrows:?}; oracle multiset agrees: {agree}"),
    )
}

fn criterion_5() -> Outcome {
    let p = fixtures::fix_e();
    let want = sorted(&["3->1", "6->4"]);
    let fast = pairs(&p, &gentle_new_arrows(&p).expect("gentle"));
    let engine = pairs(&p, &new_arrows(&p));
    let tensor = build_extension(&p, ExtensionMode::Tensor).expect("tensor");
    let tensor_gentle =
        tensor.presentation.validate().is_gentle && tensor.flags.gentle == Some(true);
    let trivial = build_extension(&p, ExtensionMode::Trivial).expect("trivial");
    let word = ["x_6_4_2", "r", "x_3_1_2"].map(String::from).to_vec();
    let has_word = trivial
        .relations
        .as_ref()
        .is_some_and(|rs| rs.contains(&word));
    let report = trivial.presentation.validate();
    let monomial = trivial.flags.monomial == Some(true) && report.admissible.holds;
    let g2_fails = !report.g2.holds;
    Outcome::new(
        fast == want && engine == want && tensor_gentle && has_word && monomial && g2_fails,
        format!(
            "overlapping arrows {fast:?}; engine arrows {engine:?}; tensor gentle {tensor_gentle}; \
             trivial has {} {has_word}, monomial {monomial}, G2 fails {g2_fails}",
            word.join("·")
        ),
    )
}

/// Figure containment plus oracle agreement; deltas are reported, not failed.
fn figure_criterion(name: &str, p: &StringPresentation) -> Outcome {
    let arrows = new_arrows(p);
    let drawn = figure(name).expect("figure stored");
    let delta = figure_delta(name, p, &drawn, &arrows);
    let agree = engine_matches_oracle(p);
    println!("figure-delta {}", serde_json::to_string(&delta).unwrap());
    Outcome::new(
        delta.missing.is_empty() && agree,
        format!(
            "arrows {:?}; figure missing {:?}; oracle multiset agrees: {agree}",
            pairs(p, &arrows),
            delta.missing
        ),
    )
}

fn criterion_6() -> Outcome {
    figure_criterion("fix-d", &fixtures::fix_d())
}

fn criterion_7() -> Outcome {
    figure_criterion("fix-c", &fixtures::fix_c())
}

fn random_instances(gentle: bool, count: usize) -> Vec<(u64, StringPresentation)> {
    let cfg = SelftestConfig {
        iterations: count,
        max_vertices: 12,
        gentle,
        ..SelftestConfig::default()
    };
    (0..count)
        .map(|k| {
            let (seed, spec) = cfg.instance(k);
            (
                seed,
                gen_random_string_tree(seed, spec).expect("generation"),
            )
        })
        .collect()
}

fn criterion_8(instances: &[(u64, StringPresentation)]) -> Outcome {
    let start = Instant::now();
    let bad: Vec<String> = instances
        .par_iter()
        .filter_map(|(seed, p)| {
            let o = Oracle::new(p);
            let e = ExtEngine::new(p);
            for i in 2..=o.global_dimension() {
                for c in p.vertices() {
                    for z in p.vertices() {
                        if e.ext_witnesses(c, z, i).is_empty() == (o.ext_dim(c, z, i) > 0) {
                            return Some(format!(
                                "seed {seed}: Ext mismatch at c={c:?} z={z:?} i={i}"
                            ));
                        }
                    }
                }
            }
            (arrow_multiset(&e.new_arrows()) != o.new_arrow_multiset())
                .then(|| format!("seed {seed}: arrow multiset mismatch"))
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        bad.is_empty() && secs < 300.0,
        format!(
            "{} string trees, {} failures {:?}, {secs:.1}s",
            instances.len(),
            bad.len(),
            bad
        ),
    )
}

fn criterion_9(instances: &[(u64, StringPresentation)]) -> Outcome {
    let bad: Vec<String> = instances
        .par_iter()
        .filter_map(|(seed, p)| {
            let fast = arrow_multiset(&gentle_new_arrows(p).ok()?);
            let engine = arrow_multiset(&new_arrows(p));
            let oracle = Oracle::new(p).new_arrow_multiset();
            if fast != engine || engine != oracle {
                return Some(format!("seed {seed}: arrows differ"));
            }
            if !tensor_relations(p).ok()?.iter().all(|r| r.len() == 2) {
                return Some(format!("seed {seed}: non-quadratic tensor relation"));
            }
            let r = check_gentle_extensions(p).ok()?;
            (!(r.tensor_gentle && r.trivial_monomial)).then(|| {
                format!(
                    "seed {seed}: tensor gentle {}, trivial monomial {}",
                    r.tensor_gentle, r.trivial_monomial
                )
            })
        })
        .collect();
    let not_gentle = instances
        .iter()
        .filter(|(_, p)| !p.validate().is_gentle)
        .count();
    Outcome::new(
        bad.is_empty() && not_gentle == 0,
        format!(
            "{} gentle trees, {} failures {:?}",
            instances.len(),
            bad.len(),
            bad
        ),
    )
}

#[derive(Default)]
struct Structural {
    wide_syzygies: Vec<String>,
    stray_points: Vec<String>,
    model_disagreements: Vec<String>,
    support_mismatches: Vec<String>,
    cosupport_mismatches: Vec<String>,
}

fn structural(label: &str, p: &StringPresentation) -> Structural {
    let mut out = Structural::default();
    let targets: BTreeSet<Vertex> = (0..p.relations().len())
        .map(|i| p.relation_path(i).target)
        .collect();
    let sources: BTreeSet<Vertex> = (0..p.relations().len())
        .map(|i| p.relation_path(i).source)
        .collect();
    for x in p.vertices() {
        for (side, tree, allowed) in [
            ("I", resolve_injective(p, x).tree, &targets),
            ("P", coresolve_projective(p, x).tree, &sources),
        ] {
            let width = tree.level(2).len();
            if width > 6 {
                out.wide_syzygies
                    .push(format!("{label} {side}({x:?}): {width}"));
            }
            for n in tree.nodes.iter().filter(|n| n.level >= 2) {
                if !allowed.contains(&n.point) {
                    out.stray_points.push(format!(
                        "{label} {side}({x:?}) level {} point {:?}",
                        n.level, n.point
                    ));
                }
            }
        }
    }
    let o = Oracle::new(p);
    let e = ExtEngine::new(p);
    let gldim = o.global_dimension();
    for i in 0..=gldim + 1 {
        for c in p.vertices() {
            for z in p.vertices() {
                let (a, b) = o.ext_dims(c, z, i);
                if a != b {
                    out.model_disagreements
                        .push(format!("{label} c={c:?} z={z:?} i={i}: {a} vs {b}"));
                }
            }
        }
    }
    for i in 2..=gldim {
        for x in p.vertices() {
            let zs: Vec<Vertex> = p.vertices().filter(|z| o.ext_dim(x, *z, i) > 0).collect();
            if e.ext_support(x, i).vertices() != zs {
                out.support_mismatches
                    .push(format!("{label} c={} i={i}", p.vertex_name(x)));
            }
            let cs: Vec<Vertex> = p.vertices().filter(|c| o.ext_dim(*c, x, i) > 0).collect();
            if e.ext_cosupport(x, i).vertices() != cs {
                out.cosupport_mismatches
                    .push(format!("{label} z={} i={i}", p.vertex_name(x)));
            }
        }
    }
    out
}

fn criterion_10(instances: &[(String, StringPresentation)]) -> Outcome {
    let results: Vec<Structural> = instances
        .par_iter()
        .map(|(l, p)| structural(l, p))
        .collect();
    let mut all = Structural::default();
    for r in results {
        all.wide_syzygies.extend(r.wide_syzygies);
        all.stray_points.extend(r.stray_points);
        all.model_disagreements.extend(r.model_disagreements);
        all.support_mismatches.extend(r.support_mismatches);
        all.cosupport_mismatches.extend(r.cosupport_mismatches);
    }
    let first = |v: &[String]| v.first().cloned().unwrap_or_default();
    let pass = all.wide_syzygies.is_empty()
        && all.stray_points.is_empty()
        && all.model_disagreements.is_empty()
        && all.support_mismatches.is_empty()
        && all.cosupport_mismatches.is_empty();
    Outcome::new(
        pass,
        format!(
            "{} instances; second syzygies over 6 summands: {}; level>=2 points off relations: {}; \
             Ext model disagreements: {}; z-support vs interval mismatches: {} (first: {}); \
             c-support vs interval mismatches: {} (first: {})",
            instances.len(),
            all.wide_syzygies.len(),
            all.stray_points.len(),
            all.model_disagreements.len(),
            all.support_mismatches.len(),
            first(&all.support_mismatches),
            all.cosupport_mismatches.len(),
            first(&all.cosupport_mismatches),
        ),
    )
}

fn main() {
    let strings = random_instances(false, 200);
    let gentles = random_instances(true, 100);
    let mut touched: Vec<(String, StringPresentation)> = fixtures::all()
        .into_iter()
        .map(|(n, p)| (n.to_string(), p))
        .collect();
    touched.extend(
        strings
            .iter()
            .map(|(s, p)| (format!("string seed {s}"), p.clone())),
    );
    touched.extend(
        gentles
            .iter()
            .map(|(s, p)| (format!("gentle seed {s}"), p.clone())),
    );

    let outcomes = [
        ("resolution fidelity", criterion_1()),
        ("injective resolution and difference witness", criterion_2()),
        ("two-sided top filter", criterion_3()),
        ("non-gentle new arrows", criterion_4()),
        ("gentle extensions", criterion_5()),
        ("figure containment with 2-cycle instance", criterion_6()),
        ("figure containment on the large tree", criterion_7()),
        (
            "oracle equivalence on random string trees",
            criterion_8(&strings),
        ),
        (
            "oracle equivalence on random gentle trees",
            criterion_9(&gentles),
        ),
        ("structural invariants", criterion_10(&touched)),
    ];
    let mut failed = 0;
    for (k, (name, o)) in outcomes.iter().enumerate() {
        println!(
            "criterion {:>2} {} {name}: {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
