// one-off soak: end-to-end pipelines across shapes, eps values, gap splits
use gspkit::gsp::opt::exhaustive_optimum;
use gspkit::harness::gen::{gen_instance, GenSpec, MixWeights};
use gspkit::ratio::{rat_frac, rat_u64, rat_int, Rat};
use gspkit::reduction::solve::{reduction_loss_factor, solve_gsp, RcpMode};

fn main() {
    let mut runs = 0u64;
    for seed in 0..400u64 {
        let n = (seed % 5 + 1) as usize;
        let r_max = if seed % 7 == 0 { 20 } else { 3 }; // occasionally force gap splits
        let spec = GenSpec {
            n,
            p_max: 3,
            r_max,
            mix: if seed % 2 == 0 { MixWeights::default() } else { MixWeights::tardiness_only() },
            w_max: 3,
            d_max: 6,
            seed: 51000 + seed,
        };
        let inst = gen_instance(&spec);
        let opt = exhaustive_optimum(&inst);
        for eps in [rat_frac(1, 2), rat_frac(1, 4)] {
            let factor = reduction_loss_factor(&eps);
            match solve_gsp(&inst, &eps, RcpMode::Exact) {
                Ok(report) => {
                    let (opt_cost, _) = opt.clone().expect("optimum exists");
                    let bound = opt_cost.scale(&factor);
                    assert!(report.cost <= bound, "seed {seed} eps {eps}: {} vs {}", report.cost, bound);
                    assert!(report.cost >= opt_cost, "seed {seed}: below optimum?!");
                    runs += 1;
                }
                Err(gspkit::reduction::SolveError::Infeasible) => {
                    assert!(opt.is_none(), "seed {seed} eps {eps}");
                }
                Err(e) => panic!("seed {seed} eps {eps}: {e}"),
            }
            // tardiness pipeline on all-tardiness draws
            if inst.jobs.iter().all(|j| j.cost.is_tardiness()) && !inst.jobs.is_empty() {
                let t_factor: Rat = factor.clone() * (rat_int(1) + rat_u64(5) * eps.clone());
                let report = solve_gsp(&inst, &eps, RcpMode::Tardiness { preprocess: false })
                    .unwrap_or_else(|e| panic!("seed {seed} eps {eps}: {e}"));
                let (opt_cost, _) = opt.clone().unwrap();
                let bound = opt_cost.scale(&t_factor);
                assert!(report.cost <= bound, "tardiness seed {seed} eps {eps}");
                // also through the preprocessing path
                let report2 = solve_gsp(&inst, &eps, RcpMode::Tardiness { preprocess: true })
                    .unwrap_or_else(|e| panic!("pre seed {seed} eps {eps}: {e}"));
                let pre_bound = opt_cost.scale(&(t_factor * (rat_int(1) + eps.clone())));
                assert!(report2.cost <= pre_bound, "preprocessed seed {seed} eps {eps}");
                runs += 2;
            }
        }
    }
    println!("soak2 ok: {runs} end-to-end solves within their bounds");
}
