mod common;

use common::{max_gradient_error, random_trajectory, reference_loss};
use ramsey_cema::graph::EdgeColoring;
use ramsey_cema::policy::{
    encode_observation, sample_action, Observation, PolicyNetwork, Trajectory,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn gradient_matches_finite_differences() {
    for seed in 0..20 {
        let err = max_gradient_error(seed);
        assert!(err < 1e-4, "seed {seed}: relative error {err}");
    }
}

#[test]
fn six_edge_instance_gradient() {
    // K_4 has six edges
    let net = PolicyNetwork::new(4, 2, &[5, 4], 99).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let elites: Vec<Trajectory> = (0..2).map(|_| random_trajectory(4, 2, &mut rng)).collect();
    let samples: Vec<(Observation, u8)> = elites.iter().flat_map(|t| t.steps()).collect();
    assert_eq!(samples.len(), 12);
    let dense: Vec<(Vec<f64>, usize)> = samples
        .iter()
        .map(|(o, a)| (o.to_dense(), usize::from(*a)))
        .collect();
    let (_, grad) = net.loss_and_gradient(&samples).unwrap();
    let sizes = net.layer_sizes();
    let params = net.parameters();
    let h = 1e-4;
    for k in 0..params.len() {
        let mut plus = params.clone();
        plus[k] += h;
        let mut minus = params.clone();
        minus[k] -= h;
        let numeric = (reference_loss(&sizes, &plus, &dense)
            - reference_loss(&sizes, &minus, &dense))
            / (2.0 * h);
        let err = (grad[k] - numeric).abs() / grad[k].abs().max(numeric.abs()).max(1e-6);
        assert!(err < 1e-4, "parameter {k}: {} vs {numeric}", grad[k]);
    }
}

#[test]
fn overfitting_one_trajectory() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let target = random_trajectory(5, 2, &mut rng);
    let mut net = PolicyNetwork::new(5, 2, &[32, 16], 4).unwrap();
    let elites = [target.clone()];
    let mut losses = Vec::new();
    for _ in 0..50 {
        losses.push(net.train_step(&elites, 1e-3).unwrap());
        assert!(net.is_finite());
    }
    for w in losses.windows(2) {
        assert!(w[1] < w[0], "loss did not decrease: {losses:?}");
    }
    let mut steps = 50;
    while steps < 5000 {
        let all_confident = target
            .steps()
            .all(|(obs, a)| net.forward(&obs).unwrap()[usize::from(a)] > 0.99);
        if all_confident {
            break;
        }
        net.train_step(&elites, 1e-3).unwrap();
        steps += 1;
    }
    assert!(steps < 5000, "policy never became confident");
    for (obs, a) in target.steps() {
        let dist = net.forward(&obs).unwrap();
        let argmax = dist
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .unwrap()
            .0;
        assert_eq!(argmax, usize::from(a));
    }
}

#[test]
fn forward_is_a_distribution_and_deterministic() {
    let net = PolicyNetwork::new(6, 3, &[16, 8], 21).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut c = EdgeColoring::new(6, 3).unwrap();
    for e in 0..c.num_edges() {
        let obs = encode_observation(&c, e).unwrap();
        let dist = net.forward(&obs).unwrap();
        assert_eq!(dist, net.forward(&obs).unwrap());
        assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        assert!(dist.iter().all(|&p| p > 0.0 && p < 1.0));
        c.push(sample_action(&dist, 0.0, &mut rng).unwrap())
            .unwrap();
    }
    assert!(c.is_complete());
}

fn three_sigma(p: f64, draws: usize) -> f64 {
    3.0 * (p * (1.0 - p) / draws as f64).sqrt()
}

#[test]
fn forced_uniform_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let draws = 10_000;
    let mut hits = [0usize; 3];
    for _ in 0..draws {
        hits[usize::from(sample_action(&[0.9, 0.05, 0.05], 1.0, &mut rng).unwrap())] += 1;
    }
    for h in hits {
        let freq = h as f64 / draws as f64;
        assert!(
            (freq - 1.0 / 3.0).abs() < three_sigma(1.0 / 3.0, draws),
            "{hits:?}"
        );
    }
}

#[test]
fn sampling_follows_distribution() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let draws = 10_000;
    let ones = (0..draws)
        .filter(|_| sample_action(&[0.25, 0.75], 0.0, &mut rng).unwrap() == 1)
        .count();
    let freq = ones as f64 / draws as f64;
    assert!((freq - 0.75).abs() < three_sigma(0.75, draws), "{freq}");
}

#[test]
fn sampling_is_reproducible() {
    let draw = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..100)
            .map(|_| sample_action(&[0.3, 0.7], 0.2, &mut rng).unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(draw(4), draw(4));
}
