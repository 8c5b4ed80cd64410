//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use ramsey_cema::graph::{EdgeColoring, SimpleGraph};
use ramsey_cema::pattern::{PatternGraph, RewardReport};
use ramsey_cema::policy::{Observation, PolicyNetwork, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Copies by brute force: every ordered tuple of distinct host vertices is
/// tried as an image of the pattern, and the tally is divided by the number
/// of vertex permutations of the pattern that preserve its edges.
pub fn brute_force_copies(pattern: &SimpleGraph, host: &SimpleGraph) -> u64 {
    fn tuples(k: usize, n: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                tuples(k, n, cur, visit);
                cur.pop();
            }
        }
    }
    let k = pattern.n();
    let preserves =
        |g: &SimpleGraph, map: &[usize]| pattern.edges().all(|(i, j)| g.has_edge(map[i], map[j]));
    let mut maps = 0u64;
    tuples(k, host.n(), &mut Vec::new(), &mut |m| {
        maps += u64::from(preserves(host, m))
    });
    let mut auts = 0u64;
    tuples(k, k, &mut Vec::new(), &mut |m| {
        auts += u64::from(preserves(pattern, m))
    });
    assert_eq!(maps % auts, 0);
    maps / auts
}

pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> SimpleGraph {
    let mut g = SimpleGraph::empty(n).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

pub fn in_scope_patterns() -> Vec<PatternGraph> {
    [
        "B2", "B3", "B4", "B5", "B6", "W5", "W6", "W7", "K2,5", "K3,5", "K3", "K4",
    ]
    .iter()
    .map(|s| PatternGraph::parse(s).unwrap())
    .collect()
}

/// Dense reference forward pass built only from the flat parameter vector.
pub fn reference_loss(sizes: &[usize], params: &[f64], samples: &[(Vec<f64>, usize)]) -> f64 {
    let mut total = 0.0;
    for (x, action) in samples {
        let mut a = x.clone();
        let mut offset = 0;
        for (li, w) in sizes.windows(2).enumerate() {
            let (inputs, outputs) = (w[0], w[1]);
            let weights = &params[offset..offset + inputs * outputs];
            let bias = &params[offset + inputs * outputs..offset + inputs * outputs + outputs];
            offset += inputs * outputs + outputs;
            let mut z = bias.to_vec();
            for j in 0..inputs {
                for o in 0..outputs {
                    z[o] += a[j] * weights[j * outputs + o];
                }
            }
            a = if li + 2 < sizes.len() {
                z.iter().map(|v| v.max(0.0)).collect()
            } else {
                z
            };
        }
        let max = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = a.iter().map(|z| (z - max).exp()).sum::<f64>().ln() + max;
        total += log_sum - a[*action];
    }
    total / samples.len() as f64
}

pub fn random_trajectory(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Trajectory {
    let colors = (0..n * (n - 1) / 2)
        .map(|_| rng.gen_range(0..m) as u8)
        .collect();
    Trajectory {
        coloring: EdgeColoring::from_colors(n, m, colors).unwrap(),
        reward: RewardReport {
            per_color: vec![0; m],
            total: 0,
        },
    }
}

/// Largest relative error between backprop and central differences over all
/// parameters; near-zero gradients are compared on an absolute floor.
pub fn max_gradient_error(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=4);
    let m = rng.gen_range(2..=3);
    let hidden: Vec<usize> = (0..rng.gen_range(1..=2))
        .map(|_| rng.gen_range(3..=6))
        .collect();
    let net = PolicyNetwork::new(n, m, &hidden, seed).unwrap();
    let elites: Vec<Trajectory> = (0..rng.gen_range(1..=3))
        .map(|_| random_trajectory(n, m, &mut rng))
        .collect();
    let samples: Vec<(Observation, u8)> = elites.iter().flat_map(|t| t.steps()).collect();
    let dense: Vec<(Vec<f64>, usize)> = samples
        .iter()
        .map(|(o, a)| (o.to_dense(), usize::from(*a)))
        .collect();

    let (loss, grad) = net.loss_and_gradient(&samples).unwrap();
    let sizes = net.layer_sizes();
    let params = net.parameters();
    assert!((reference_loss(&sizes, &params, &dense) - loss).abs() < 1e-12);

    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for k in 0..params.len() {
        let mut plus = params.clone();
        plus[k] += h;
        let mut minus = params.clone();
        minus[k] -= h;
        let numeric = (reference_loss(&sizes, &plus, &dense)
            - reference_loss(&sizes, &minus, &dense))
            / (2.0 * h);
        let err = (grad[k] - numeric).abs() / grad[k].abs().max(numeric.abs()).max(1e-6);
        worst = worst.max(err);
    }
    worst
}
