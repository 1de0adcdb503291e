mod oracle;

use maxtile_core::embed::embed_tile;
use maxtile_core::interestingness::{
    assess_closed_set_sizes, cell_information, description_length, greedy_select, self_information,
    AssessConfig, InterestingnessConfig,
};
use maxtile_core::maxent::GroupedDual;
use maxtile_core::randomize::{
    log_prob_delta, sample_fast, sample_valued, swap_randomize, DeltaSwap, SamplerConfig,
};
use maxtile_core::rng::{stream, StreamRng};
use maxtile_core::tiles::{mine_closed_tiles, MinerConfig, Tile};
use maxtile_core::{
    fit, group, CellMatrix, Family, FitOptions, Marginals, SparseBinaryMatrix, ValuedMatrix,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn binary_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = SparseBinaryMatrix> {
    (1..=max_rows, 1..=max_cols, 0.05f64..0.9).prop_flat_map(|(m, n, density)| {
        proptest::collection::vec(proptest::bool::weighted(density), m * n).prop_map(move |cells| {
            let dense: Vec<Vec<u8>> = cells
                .chunks(n)
                .map(|r| r.iter().map(|&b| b as u8).collect())
                .collect();
            SparseBinaryMatrix::from_dense(&dense).unwrap()
        })
    })
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Random `(multiplicity, target)` groups and an in-domain point.
fn random_dual(family: Family, seed: u64) -> (GroupedDual, Vec<f64>) {
    let mut rng = stream(seed, 0);
    let nr = rng.gen_range(1..5);
    let nc = rng.gen_range(1..5);
    let group = |rng: &mut StreamRng| (rng.gen_range(1..4) as f64, rng.gen_range(0.2..3.0));
    let rows: Vec<(f64, f64)> = (0..nr).map(|_| group(&mut rng)).collect();
    let cols: Vec<(f64, f64)> = (0..nc).map(|_| group(&mut rng)).collect();
    let x: Vec<f64> = (0..nr + nc)
        .map(|_| match family {
            Family::Bernoulli => rng.gen_range(-2.0..2.0),
            _ => rng.gen_range(-1.5..-0.2),
        })
        .collect();
    (GroupedDual::new(family, rows, cols), x)
}

const FAMILIES: [Family; 3] = [Family::Bernoulli, Family::Geometric, Family::Exponential];

#[test]
fn dual_derivatives_match_finite_differences() {
    for family in FAMILIES {
        for seed in 0..50 {
            let (dual, x) = random_dual(family, seed);
            let g = dual.gradient(&x).unwrap();
            let h = dual.hessian(&x).unwrap();
            let k = x.len();
            let eps = 1e-5;
            for a in 0..k {
                let mut up = x.clone();
                let mut down = x.clone();
                up[a] += eps;
                down[a] -= eps;
                let fd = (dual.value(&up).unwrap() - dual.value(&down).unwrap()) / (2.0 * eps);
                assert!(
                    relative_gap(fd, g[a]) < 1e-6,
                    "{family:?} seed {seed}: grad[{a}] {} vs {fd}",
                    g[a]
                );
                let gu = dual.gradient(&up).unwrap();
                let gd = dual.gradient(&down).unwrap();
                for b in 0..k {
                    let fd = (gu[b] - gd[b]) / (2.0 * eps);
                    assert!(
                        relative_gap(fd, h[b * k + a]) < 1e-5,
                        "{family:?} seed {seed}: hess[{b},{a}]"
                    );
                }
            }
        }
    }
}

#[test]
fn dual_hessian_is_positive_semidefinite() {
    for family in FAMILIES {
        for seed in 100..150 {
            let (dual, x) = random_dual(family, seed);
            let k = x.len();
            let h = DMatrix::from_row_slice(k, k, &dual.hessian(&x).unwrap());
            assert_eq!(h, h.transpose());
            let eig = h.symmetric_eigenvalues();
            let scale = eig.amax().max(1.0);
            assert!(
                eig.iter().all(|&e| e >= -1e-10 * scale),
                "{family:?}: {eig}"
            );
        }
    }
}

#[test]
fn group_counts_obey_bounds_on_all_4x4_matrices() {
    let mut plain_root_violations = 0;
    for bits in 0u32..1 << 16 {
        let dense: Vec<Vec<u8>> = (0..4)
            .map(|i| (0..4).map(|j| (bits >> (4 * i + j) & 1) as u8).collect())
            .collect();
        let d = SparseBinaryMatrix::from_dense(&dense).unwrap();
        let marg = d.marginals();
        let groups = group(&marg);
        let s = d.nnz() as f64;
        let root = (2.0 * s).sqrt();
        for (axis, sums) in [
            (&groups.rows, &marg.row_sums),
            (&groups.cols, &marg.col_sums),
        ] {
            let k = axis.len() as f64;
            let max = sums.iter().copied().fold(0.0, f64::max);
            assert!(k <= 4.0 && k <= max + 1.0, "{bits:016b}");
            // k distinct sums use at least 0 + 1 + ... + (k - 1) ones
            assert!(k * (k - 1.0) / 2.0 <= s, "{bits:016b}");
            let nonzero = axis.groups().iter().filter(|g| g.value > 0.0).count() as f64;
            assert!(
                nonzero <= root,
                "{bits:016b}: {nonzero} nonzero groups vs {root}"
            );
            if k > root {
                plain_root_violations += 1;
            }
        }
    }
    // an empty row next to distinct nonzero rows exceeds the plain root bound,
    // e.g. a single one gives the sums {0, 1}
    assert!(plain_root_violations > 0);
    let single = SparseBinaryMatrix::from_dense(&[[1u8, 0], [0, 0]]).unwrap();
    assert_eq!(group(&single.marginals()).rows.len(), 2);
}

#[test]
fn fit_converges_on_every_small_binary_matrix() {
    for (m, n) in [(2usize, 3usize), (3, 3), (3, 4)] {
        for bits in 0u32..1 << (m * n) {
            let dense: Vec<Vec<u8>> = (0..m)
                .map(|i| (0..n).map(|j| (bits >> (i * n + j) & 1) as u8).collect())
                .collect();
            let marg = SparseBinaryMatrix::from_dense(&dense).unwrap().marginals();
            let model = fit(&marg, Family::Bernoulli, &FitOptions::default()).unwrap();
            let e = model.expected_marginals();
            for (a, b) in e
                .row_sums
                .iter()
                .zip(&marg.row_sums)
                .chain(e.col_sums.iter().zip(&marg.col_sums))
            {
                assert!((a - b).abs() < 1e-8, "{m}x{n} {bits:b}");
            }
        }
    }
}

#[test]
fn fit_agrees_with_joint_space_oracle() {
    let mut rng = stream(5, 0);
    for trial in 0..20 {
        let (m, n) = if trial % 2 == 0 { (2, 3) } else { (3, 3) };
        let p: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(0.05..0.95)).collect())
            .collect();
        let rows: Vec<f64> = p.iter().map(|r| r.iter().sum()).collect();
        let cols: Vec<f64> = (0..n).map(|j| p.iter().map(|r| r[j]).sum()).collect();
        let want = oracle::brute_force_probabilities(&rows, &cols);
        let model = fit(
            &Marginals::new(rows, cols),
            Family::Bernoulli,
            &FitOptions::default(),
        )
        .unwrap();
        for i in 0..m {
            for j in 0..n {
                assert!(
                    (model.cell_mean(i, j) - want[i][j]).abs() < 1e-6,
                    "trial {trial} cell ({i},{j})"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fitted_marginals_match_targets(d in binary_matrix(12, 12)) {
        let marg = d.marginals();
        let model = fit(&marg, Family::Bernoulli, &FitOptions::default()).unwrap();
        prop_assert!(model.convergence().gradient_norm < 1e-12);
        let e = model.expected_marginals();
        for (a, b) in e.row_sums.iter().zip(&marg.row_sums).chain(e.col_sums.iter().zip(&marg.col_sums)) {
            prop_assert!(relative_gap(*a, *b) < 1e-8);
        }
    }

    #[test]
    fn swap_randomization_keeps_marginals(d in binary_matrix(15, 15), seed in any::<u64>()) {
        let config = SamplerConfig { seed, ..SamplerConfig::default() };
        let out = swap_randomize(&d, &config).unwrap();
        prop_assert_eq!(out.marginals(), d.marginals());
    }

    #[test]
    fn binary_delta_swaps_keep_probability(d in binary_matrix(10, 10), seed in any::<u64>()) {
        let model = fit(&d.marginals(), Family::Bernoulli, &FitOptions::default()).unwrap();
        let mut d = d;
        let (m, n) = d.shape();
        prop_assume!(m >= 2 && n >= 2);
        let mut rng = stream(seed, 0);
        let before = model.log_prob(&d).unwrap();
        for _ in 0..200 {
            let i = rng.gen_range(0..m);
            let k = (i + rng.gen_range(1..m)) % m;
            let j = rng.gen_range(0..n);
            let l = (j + rng.gen_range(1..n)) % n;
            let swap = DeltaSwap::new((i, k), (j, l), if rng.gen() { 1.0 } else { -1.0 });
            if swap.is_allowed(&d, Family::Bernoulli).unwrap() {
                prop_assert!(log_prob_delta(&model, &d, &swap).unwrap().abs() < 1e-10);
                swap.apply(&mut d, Family::Bernoulli).unwrap();
            }
        }
        prop_assert!((model.log_prob(&d).unwrap() - before).abs() < 1e-9);
    }

    #[test]
    fn miner_matches_exhaustive_enumeration(d in binary_matrix(14, 9), support in 1usize..4) {
        let got: std::collections::BTreeSet<Tile> =
            mine_closed_tiles(&d, &MinerConfig::new(support).unwrap()).unwrap().into_iter().collect();
        prop_assert_eq!(got, oracle::brute_force_closed_tiles(&d, support));
    }

    #[test]
    fn lazy_greedy_matches_naive(d in binary_matrix(8, 8), seed in any::<u64>(), budgeted in any::<bool>()) {
        let (m, n) = d.shape();
        let model = fit(&d.marginals(), Family::Bernoulli, &FitOptions::default()).unwrap();
        let mut rng = stream(seed, 0);
        let pick = |rng: &mut StreamRng, len: usize| -> Vec<usize> {
            let v: Vec<usize> = (0..len).filter(|_| rng.gen_bool(0.4)).collect();
            if v.is_empty() { vec![rng.gen_range(0..len)] } else { v }
        };
        let mut candidates: Vec<Tile> = (0..rng.gen_range(1..25)).map(|_| Tile::new(pick(&mut rng, m), pick(&mut rng, n))).collect();
        candidates.push(candidates[0].clone());
        let p = rng.gen_range(0.05..0.6);
        let budget = budgeted.then(|| rng.gen_range(10.0..200.0));
        let config = InterestingnessConfig::new(p, budget).unwrap();
        let lazy = greedy_select(&model, &candidates, &config).unwrap();
        let naive = oracle::naive_greedy(&model, &candidates, &config);
        prop_assert_eq!(lazy.len(), naive.len());
        for (r, (tile, info, len, gain, ratio)) in lazy.iter().zip(&naive) {
            prop_assert_eq!(&r.tile, tile);
            prop_assert_eq!(r.self_info.to_bits(), info.to_bits());
            prop_assert_eq!(r.desc_len.to_bits(), len.to_bits());
            prop_assert_eq!(r.incremental_self_info.to_bits(), gain.to_bits());
            prop_assert_eq!(r.ratio.to_bits(), ratio.to_bits());
        }
    }
}

#[test]
fn valued_delta_swaps_keep_probability() {
    for family in [Family::Geometric, Family::Exponential] {
        let targets = Marginals::new(vec![3.0, 7.5, 1.0, 4.0, 2.5], vec![6.0, 2.0, 5.0, 5.0]);
        let model = fit(&targets, family, &FitOptions::default()).unwrap();
        let mut d: ValuedMatrix = sample_valued(&model, 9).unwrap();
        let before = model.log_prob(&d).unwrap();
        let mut rng = stream(9, 1);
        let mut applied = 0;
        for _ in 0..2000 {
            let i = rng.gen_range(0..5);
            let k = (i + rng.gen_range(1..5)) % 5;
            let j = rng.gen_range(0..4);
            let l = (j + rng.gen_range(1..4)) % 4;
            let delta = match family {
                Family::Geometric => rng.gen_range(-3i32..=3) as f64,
                _ => rng.gen_range(-2.0..2.0),
            };
            let swap = DeltaSwap::new((i, k), (j, l), delta);
            if swap.is_allowed(&d, family).unwrap() {
                assert!(log_prob_delta(&model, &d, &swap).unwrap().abs() < 1e-10);
                swap.apply(&mut d, family).unwrap();
                applied += 1;
            }
        }
        assert!(applied > 100, "{family:?}: only {applied} swaps allowed");
        assert!((model.log_prob(&d).unwrap() - before).abs() < 1e-9);
        for i in 0..5 {
            for j in 0..4 {
                assert!(family.contains(d.value(i, j)));
            }
        }
    }
}

#[test]
fn fast_sampler_mean_density_matches_model() {
    let base = SparseBinaryMatrix::from_rows(
        30,
        (0..40)
            .map(|i| (0..30).filter(|j| (i * 7 + j * 3) % 5 < 2).collect())
            .collect(),
    )
    .unwrap();
    let model = fit(&base.marginals(), Family::Bernoulli, &FitOptions::default()).unwrap();
    let runs = 400;
    let mut counts = vec![vec![0u32; 30]; 40];
    for seed in 0..runs {
        for (i, j) in sample_fast(&model, seed).unwrap().ones() {
            counts[i][j] += 1;
        }
    }
    for (i, row) in counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let p = model.cell_mean(i, j);
            let sd = (p * (1.0 - p) / runs as f64).sqrt();
            assert!(
                (c as f64 / runs as f64 - p).abs() <= 5.0 * sd + 1e-12,
                "cell ({i},{j})"
            );
        }
    }
}

#[test]
fn embedding_keeps_column_densities_in_expectation() {
    let d = SparseBinaryMatrix::from_rows(
        25,
        (0..60)
            .map(|i| {
                (0..25)
                    .filter(|j| (i * 11 + j * 5) % 7 < 2 + j % 3)
                    .collect()
            })
            .collect(),
    )
    .unwrap();
    let (m, k) = (60.0, 4usize);
    let base = d.marginals().col_sums;
    let seeds = 300;
    let mut total = vec![0.0; 25];
    for seed in 0..seeds {
        let (e, tile) = embed_tile(&d, k, seed).unwrap();
        assert!(tile.is_present(&e).unwrap());
        let cols = e.marginals().col_sums;
        for j in 0..25 {
            total[j] += cols[j];
        }
    }
    for j in 0..25 {
        // each new row adds a Bernoulli(c_j / m) one to column j
        let q = base[j] / m;
        let expected = base[j] + k as f64 * q;
        let sd = (k as f64 * q * (1.0 - q) / seeds as f64).sqrt();
        let mean = total[j] / seeds as f64;
        assert!(
            (mean - expected).abs() <= 3.0 * sd + 1e-12,
            "column {j}: {mean} vs {expected}"
        );
        // densities over m + k rows stay at c_j / m
        assert!(relative_gap(expected / (m + k as f64), q) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_gains_account_for_covered_cells(d in binary_matrix(8, 8), seed in any::<u64>()) {
        let (m, n) = d.shape();
        let model = fit(&d.marginals(), Family::Bernoulli, &FitOptions::default()).unwrap();
        let mut rng = stream(seed, 0);
        let candidates: Vec<Tile> = (0..rng.gen_range(1..15))
            .map(|_| {
                let rows: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
                let cols: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                let rows = if rows.is_empty() { vec![0] } else { rows };
                let cols = if cols.is_empty() { vec![n - 1] } else { cols };
                Tile::new(rows, cols)
            })
            .collect();
        let config = InterestingnessConfig::new(rng.gen_range(0.05..0.6), None).unwrap();
        let ranked = greedy_select(&model, &candidates, &config).unwrap();
        prop_assert_eq!(ranked.len(), candidates.len());

        let mut covered = std::collections::BTreeSet::new();
        for r in &ranked {
            covered.extend(r.tile.cover_cells());
        }
        let union: f64 = covered.iter().map(|&(i, j)| cell_information(&model, i, j)).sum();
        let total: f64 = ranked.iter().map(|r| r.incremental_self_info).sum();
        // cells the model pins to 0 or 1 carry infinite information
        if union.is_finite() {
            prop_assert!(relative_gap(union, total) < 1e-12, "{union} vs {total}");
        } else {
            prop_assert_eq!(union, total);
        }

        let best = candidates
            .iter()
            .map(|t| self_information(&model, t).unwrap() / description_length(t, &config, (m, n)).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(ranked[0].ratio, best);
        for w in ranked.windows(2) {
            prop_assert!(w[1].ratio <= w[0].ratio);
        }
        for r in &ranked {
            prop_assert!(r.incremental_self_info <= r.self_info);
        }
    }
}

#[test]
fn planted_block_stands_out_in_closed_set_sizes() {
    let mut rng = stream(5, 0);
    let rows: Vec<Vec<usize>> = (0..150)
        .map(|_| (0..40).filter(|_| rng.gen_bool(0.15)).collect())
        .collect();
    let d = SparseBinaryMatrix::from_rows(40, rows).unwrap();
    let (e, tile) = embed_tile(&d, 8, 2).unwrap();
    let model = fit(&e.marginals(), Family::Bernoulli, &FitOptions::default()).unwrap();
    let config = AssessConfig {
        num_samples: 40,
        miner: MinerConfig::new(5).unwrap(),
        sampler: SamplerConfig {
            seed: 3,
            ..SamplerConfig::default()
        },
    };
    let rows = assess_closed_set_sizes(&e, &model, &config).unwrap();
    let planted = tile.cols.len();
    assert!(
        rows.iter()
            .any(|r| r.size >= planted && r.observed as f64 > r.p95),
        "{rows:?}"
    );
}
