//! Cross-module integration checks on randomized inputs, smaller than the
//! acceptance suite but covering the same machinery.

use gspkit::gsp::opt::exhaustive_optimum;
use gspkit::harness::gen::{gen_instance, gen_rcp, GenSpec, MixWeights, RcpGenSpec};
use gspkit::ratio::{rat_frac, rat_u64, CostVal, Rat};
use gspkit::rcp::brute::{brute_force, BruteOutcome};
use gspkit::rcp::exact::{exact_solve, DEFAULT_LANE_CAP};
use gspkit::rcp::instance::{is_feasible, Selection};
use gspkit::rcp::subproblem::Subproblem;
use gspkit::reduction::solve::{reduction_loss_factor, solve_gsp, RcpMode};

fn brute_opt(inst: &gspkit::rcp::instance::RcpInstance) -> Option<(Selection, Rat)> {
    match brute_force(inst, 1 << 24).unwrap() {
        BruteOutcome::Optimal { selection, cost } => Some((selection, cost)),
        BruteOutcome::Infeasible => None,
    }
}

#[test]
fn lane_dp_matches_brute_force_on_random_instances() {
    for seed in 0..60 {
        let inst = gen_rcp(&RcpGenSpec {
            rows: 4,
            max_rects_per_row: 3,
            seed,
            feasible: seed % 3 != 0,
            ..Default::default()
        });
        let brute = brute_force(&inst, 1 << 24).unwrap();
        let exact = exact_solve(&inst, DEFAULT_LANE_CAP).unwrap();
        match (&brute, &exact) {
            (
                BruteOutcome::Optimal { cost: cb, .. },
                BruteOutcome::Optimal { cost: ce, selection },
            ) => {
                assert_eq!(cb, ce, "seed {seed}");
                assert!(is_feasible(&inst, selection), "seed {seed}");
            }
            (BruteOutcome::Infeasible, BruteOutcome::Infeasible) => {}
            other => panic!("seed {seed}: {other:?}"),
        }
    }
}

#[test]
fn oracle_recursion_feasible_and_within_ratio() {
    let eps = rat_frac(1, 4);
    let mut solved = 0;
    for seed in 0..40 {
        let inst = gen_rcp(&RcpGenSpec {
            rows: 4,
            max_rects_per_row: 3,
            seed: 1000 + seed,
            ..Default::default()
        });
        let Some((reference, opt_cost)) = brute_opt(&inst) else { continue };
        let root = Subproblem::root(&inst);
        assert!(root.is_feasible(&reference));
        let stats = inst.validate().stats;
        let mut ctx = gspkit::approx::Ctx::new(
            eps.clone(),
            stats.k_ratio,
            root.area.width().trailing_zeros() as u64,
        );
        let sel = gspkit::approx::solve_oracle(&root, &reference, &mut ctx)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(root.is_feasible(&sel), "seed {seed}");
        let cost = root.selection_cost(&sel);
        // (2 + 2 eps) * OPT
        let bound = (rat_u64(2) + rat_u64(2) * eps.clone()) * opt_cost;
        assert!(cost <= bound, "seed {seed}: {cost} vs {bound}");
        for cert in &ctx.certs {
            assert!(cert.all_ok(), "seed {seed}: {cert:?}");
        }
        solved += 1;
    }
    assert!(solved >= 20, "only {solved} feasible draws");
}

#[test]
fn tardiness_recursion_feasible_and_within_ratio() {
    let eps = rat_frac(1, 4);
    let mut solved = 0;
    for seed in 0..40 {
        let inst = gen_rcp(&RcpGenSpec {
            rows: 4,
            max_rects_per_row: 3,
            seed: 2000 + seed,
            ..Default::default()
        });
        // desk-scale integer instances are automatically on the delta grid
        let delta = eps.clone() / rat_u64(32);
        if !gspkit::rcp::structure::check_well_structured(&inst, &delta).ok {
            continue;
        }
        let Some((reference, opt_cost)) = brute_opt(&inst) else { continue };
        let root = Subproblem::root(&inst);
        let mut ctx = gspkit::tardiness::TardinessCtx { eps: eps.clone(), certs: Vec::new() };
        let sel = gspkit::tardiness::solve_tardiness_oracle(&root, &reference, &mut ctx)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(root.is_feasible(&sel), "seed {seed}");
        let cost = root.selection_cost(&sel);
        let bound = (Rat::from_integer(1.into()) + rat_u64(5) * eps.clone()) * opt_cost;
        assert!(cost <= bound, "seed {seed}: {cost} vs {bound}");
        for cert in &ctx.certs {
            assert!(cert.all_ok(), "seed {seed}: {cert:?}");
        }
        solved += 1;
    }
    assert!(solved >= 20, "only {solved} feasible draws");
}

#[test]
fn end_to_end_exact_within_loss_bound() {
    let eps = rat_frac(1, 2);
    let factor = reduction_loss_factor(&eps);
    for seed in 0..25 {
        let spec = GenSpec {
            n: 4,
            p_max: 3,
            r_max: 3,
            mix: MixWeights::default(),
            w_max: 3,
            d_max: 6,
            seed: 3000 + seed,
        };
        let inst = gen_instance(&spec);
        let opt = exhaustive_optimum(&inst);
        match solve_gsp(&inst, &eps, RcpMode::Exact) {
            Ok(report) => {
                let (opt_cost, _) = opt.expect("solver found a schedule, so must the search");
                let bound = opt_cost.scale(&factor);
                assert!(
                    report.cost <= bound,
                    "seed {seed}: cost {} vs bound {}",
                    report.cost,
                    bound
                );
            }
            Err(gspkit::reduction::SolveError::Infeasible) => {
                assert!(opt.is_none(), "seed {seed}: solver infeasible but optimum exists");
            }
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
}

#[test]
fn end_to_end_tardiness_pipeline() {
    let eps = rat_frac(1, 4);
    let factor = reduction_loss_factor(&eps);
    let tard_factor = Rat::from_integer(1.into()) + rat_u64(5) * eps.clone();
    for seed in 0..15 {
        let spec = GenSpec {
            n: 4,
            p_max: 3,
            r_max: 3,
            mix: MixWeights::tardiness_only(),
            w_max: 3,
            d_max: 6,
            seed: 4000 + seed,
        };
        let inst = gen_instance(&spec);
        let (opt_cost, _) = exhaustive_optimum(&inst).unwrap();
        let report = solve_gsp(&inst, &eps, RcpMode::Tardiness { preprocess: false })
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let bound = opt_cost.scale(&(factor.clone() * tard_factor.clone()));
        assert!(
            report.cost <= bound,
            "seed {seed}: cost {} vs bound {}",
            report.cost,
            bound
        );
    }
}

#[test]
fn exhaustive_mode_never_beats_feasibility_or_loses_to_oracle() {
    let eps = rat_frac(1, 4);
    for seed in 0..12 {
        let inst = gen_rcp(&RcpGenSpec {
            rows: 2,
            max_rects_per_row: 2,
            x_extent: 6,
            rays: 2,
            seed: 5000 + seed,
            ..Default::default()
        });
        let Some((reference, _)) = brute_opt(&inst) else { continue };
        let root = Subproblem::root(&inst);
        let stats = inst.validate().stats;
        let log_t = root.area.width().trailing_zeros() as u64;
        let mut ctx = gspkit::approx::Ctx::new(eps.clone(), stats.k_ratio.clone(), log_t);
        let oracle_sel = gspkit::approx::solve_oracle(&root, &reference, &mut ctx).unwrap();
        let oracle_cost = root.selection_cost(&oracle_sel);
        let mut ctx2 = gspkit::approx::Ctx::new(eps.clone(), stats.k_ratio, log_t);
        let mut budget = 2_000_000u64;
        match gspkit::approx::solve_exhaustive(
            &root,
            &mut ctx2,
            gspkit::approx::Caps { guesses: budget, depth: 16 },
            &mut budget,
        ) {
            Ok((sel, cost)) => {
                assert!(root.is_feasible(&sel), "seed {seed}");
                assert!(cost <= oracle_cost, "seed {seed}: {cost} > {oracle_cost}");
            }
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
}

#[test]
fn infinity_costs_flow_through_solver() {
    // a hard-deadline job forces its completion; tardiness job absorbs delay
    let (inst, diag) = gspkit::GspInstance::normalized(vec![
        gspkit::Job {
            id: 0,
            r: 0,
            p: 2,
            cost: gspkit::CostFunction::HardDeadline { d: 4 },
        },
        gspkit::Job {
            id: 1,
            r: 0,
            p: 2,
            cost: gspkit::CostFunction::Tardiness { w: 1, d: 0 },
        },
    ]);
    assert!(diag.ok());
    let report = solve_gsp(&inst, &rat_frac(1, 2), RcpMode::Exact).unwrap();
    assert!(matches!(report.cost, CostVal::Finite(_)));
    assert!(report.completions[0] <= 4);
}

#[test]
fn projection_roundtrip_never_exceeds_the_selection_budget() {
    use gspkit::gsp::edf::{deadline_feasible, edf_schedule};
    use gspkit::reduction::lift::{
        completions_to_selection, prepad_cost_with_base, selection_to_completions,
    };
    use gspkit::reduction::solve::{milestones_for, reduce_at_offset};
    let eps = rat_frac(1, 2);
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(99);
    let mut rounds = 0;
    for seed in 0..40u64 {
        let inst = gen_instance(&GenSpec {
            n: 3,
            p_max: 3,
            r_max: 3,
            mix: MixWeights::default(),
            w_max: 3,
            d_max: 6,
            seed: 6000 + seed,
        });
        if inst.jobs.is_empty() || inst.split_by_release_gaps().len() > 1 {
            continue;
        }
        let horizon = inst.horizon();
        let milestones = milestones_for(&inst, &eps, horizon, false);
        for offset in 1..=gspkit::reduction::tau::block_span(&eps) {
            let (rcp, vm) = reduce_at_offset(&inst, &eps, horizon, &milestones, offset).unwrap();
            assert!(
                gspkit::reduction::build::check_instance_bounds(&rcp, &eps).is_empty(),
                "seed {seed} offset {offset}"
            );
            // random feasible deadline vectors project and lift back within budget
            for _ in 0..6 {
                let completions: Vec<u64> = inst
                    .jobs
                    .iter()
                    .map(|j| {
                        use rand::Rng;
                        rng.gen_range(j.r + j.p..=horizon)
                    })
                    .collect();
                if !deadline_feasible(&inst, &completions) {
                    continue;
                }
                if !matches!(inst.total_cost(&completions), CostVal::Finite(_)) {
                    continue;
                }
                let sel = completions_to_selection(&vm, &completions);
                let lifted = selection_to_completions(&vm, &rcp, &sel)
                    .expect("projected selections cover every ray");
                assert!(deadline_feasible(&inst, &lifted), "seed {seed}");
                let schedule = edf_schedule(&inst, &lifted).unwrap();
                let cost = inst.total_cost(&schedule.completions);
                let budget = prepad_cost_with_base(&vm, &sel);
                assert!(
                    cost <= CostVal::Finite(budget.clone()),
                    "seed {seed} offset {offset}: {cost} vs {budget}"
                );
                rounds += 1;
            }
        }
    }
    assert!(rounds >= 100, "only {rounds} round trips exercised");
}

#[test]
fn oracle_on_the_reference_instance_respects_the_auxiliary_bound() {
    // two-row instance: a two-rectangle row over [0,4) and a centered row,
    // one ray demanding almost everything
    use gspkit::rcp::instance::{Ray, Rect, RcpInstance, Row};
    use gspkit::ratio::rat_int;
    let inst = RcpInstance {
        rows: vec![
            Row {
                j: 0,
                rects: vec![
                    Rect { a: 0, b: 2, c: rat_int(1), p: 3 },
                    Rect { a: 2, b: 4, c: rat_int(1), p: 3 },
                ],
            },
            Row { j: 1, rects: vec![Rect { a: 1, b: 3, c: rat_int(2), p: 2 }] },
        ],
        rays: vec![Ray { s: 1, t: 2, d: 5 }],
    };
    let (reference, opt) = brute_opt(&inst).unwrap();
    assert_eq!(opt, rat_int(4));
    let root = Subproblem::root(&inst);
    let eps = rat_frac(1, 4);
    let stats = inst.validate().stats;
    let mut ctx = gspkit::approx::Ctx::new(
        eps.clone(),
        stats.k_ratio,
        root.area.width().trailing_zeros() as u64,
    );
    let sel = gspkit::approx::solve_oracle(&root, &reference, &mut ctx).unwrap();
    let cost = root.selection_cost(&sel);
    let aux = gspkit::approx::auxiliary_cost(&root, &reference);
    // cost <= (1+eps) * aux(root, reference) <= (2+2eps) * OPT
    let bound1 = (rat_int(1) + eps.clone()) * aux.clone();
    let bound2 = (rat_int(2) + rat_u64(2) * eps) * opt;
    assert!(cost <= bound1, "{cost} vs {bound1}");
    assert!(aux <= rat_int(2) * rat_int(4));
    assert!(cost <= bound2);
}

#[test]
fn tardiness_exhaustive_never_loses_to_oracle_on_micro_instances() {
    let eps = rat_frac(1, 2);
    let mut done = 0;
    for seed in 0..30u64 {
        let inst = gen_rcp(&RcpGenSpec {
            rows: 2,
            max_rects_per_row: 2,
            x_extent: 6,
            rays: 2,
            seed: 7000 + seed,
            ..Default::default()
        });
        let Some((reference, _)) = brute_opt(&inst) else { continue };
        let root = Subproblem::root(&inst);
        let mut ctx = gspkit::tardiness::TardinessCtx { eps: eps.clone(), certs: Vec::new() };
        let oracle = gspkit::tardiness::solve_tardiness_oracle(&root, &reference, &mut ctx).unwrap();
        let oracle_cost = root.selection_cost(&oracle);
        let mut ctx2 = gspkit::tardiness::TardinessCtx { eps: eps.clone(), certs: Vec::new() };
        let mut budget = 3_000_000u64;
        let (sel, cost) =
            gspkit::tardiness::solve_tardiness_exhaustive(&root, &mut ctx2, &mut budget)
                .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(root.is_feasible(&sel), "seed {seed}");
        assert!(cost <= oracle_cost, "seed {seed}: {cost} vs {oracle_cost}");
        done += 1;
    }
    assert!(done >= 15, "only {done} micro instances drawn");
}
