//! Property-based invariants over the covering model and the file formats.

use gspkit::harness::gen::{gen_rcp, RcpGenSpec};
use gspkit::rcp::brute::{brute_force, BruteOutcome};
use gspkit::rcp::instance::{is_prefix_valid, prefix_closure, Selection};
use gspkit::rcp::preprocess::strip_compress;
use proptest::prelude::*;

fn arb_instance() -> impl Strategy<Value = gspkit::rcp::instance::RcpInstance> {
    (0u64..5000, 1usize..5, 1usize..4, prop::bool::ANY).prop_map(|(seed, rows, rects, feasible)| {
        gen_rcp(&RcpGenSpec {
            rows,
            max_rects_per_row: rects,
            seed,
            feasible,
            ..Default::default()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent_prefix_valid_and_monotone(inst in arb_instance(), mask in prop::collection::vec(prop::bool::ANY, 16)) {
        let picked: Vec<usize> = (0..inst.rect_count())
            .filter(|&i| mask.get(i % mask.len()).copied().unwrap_or(false))
            .collect();
        let sel = Selection::from_ids(picked.clone());
        let closed = prefix_closure(&inst, &sel);
        prop_assert!(is_prefix_valid(&inst, &closed));
        prop_assert!(sel.ids.is_subset(&closed.ids));
        prop_assert_eq!(prefix_closure(&inst, &closed), closed.clone());
        // monotone: a superset input closes to a superset
        let bigger = Selection::from_ids(picked.into_iter().chain([0]).collect::<Vec<_>>());
        let closed_bigger = prefix_closure(&inst, &bigger);
        prop_assert!(closed.ids.is_subset(&closed_bigger.ids));
    }

    #[test]
    fn strip_compression_preserves_the_optimum(inst in arb_instance()) {
        let (out, map) = strip_compress(&inst);
        prop_assert!(out.validate().errors.is_empty());
        // coordinates remap consistently
        for (row_a, row_b) in inst.rows.iter().zip(&out.rows) {
            for (ra, rb) in row_a.rects.iter().zip(&row_b.rects) {
                prop_assert_eq!(map.forward(ra.a), rb.a);
                prop_assert_eq!(map.forward(ra.b), rb.b);
            }
        }
        let before = brute_force(&inst, 1 << 24).unwrap();
        let after = brute_force(&out, 1 << 24).unwrap();
        match (before, after) {
            (BruteOutcome::Optimal { cost: cb, .. }, BruteOutcome::Optimal { cost: ca, .. }) => {
                prop_assert_eq!(cb, ca)
            }
            (BruteOutcome::Infeasible, BruteOutcome::Infeasible) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn rcp_json_roundtrip(inst in arb_instance()) {
        let text = serde_json::to_string(&inst).unwrap();
        let back: gspkit::rcp::instance::RcpInstance = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(inst, back);
    }

    #[test]
    fn gsp_json_roundtrip(seed in 0u64..5000, n in 1usize..6) {
        let inst = gspkit::harness::gen::gen_instance(&gspkit::harness::gen::GenSpec {
            n,
            p_max: 3,
            r_max: 3,
            mix: Default::default(),
            w_max: 3,
            d_max: 6,
            seed,
        });
        let text = serde_json::to_string(&inst).unwrap();
        let back: gspkit::GspInstance = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(inst, back);
    }
}

#[test]
fn spec_shaped_gsp_json_parses() {
    let text = r#"{"jobs":[{"id":0,"r":0,"p":2,"cost":{"kind":"tardiness","w":1,"d":2}}]}"#;
    let inst: gspkit::GspInstance = serde_json::from_str(text).unwrap();
    assert_eq!(inst.jobs.len(), 1);
    assert!(inst.jobs[0].cost.is_tardiness());
}

#[test]
fn spec_shaped_rcp_json_parses() {
    let text = r#"{"rows":[{"j":0,"rects":[{"a":0,"b":2,"c":"1","p":3}]}],"rays":[{"s":1,"t":2,"d":5}]}"#;
    let inst: gspkit::rcp::instance::RcpInstance = serde_json::from_str(text).unwrap();
    assert_eq!(inst.rows[0].rects[0].c, gspkit::ratio::rat_int(1));
    assert_eq!(inst.rays[0].d, 5);
}
