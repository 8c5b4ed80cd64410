//! Feed-forward policy that maps a partial coloring plus the edge to color
//! next onto a distribution over colors, trained by cross-entropy on elite
//! trajectories.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{edge_count, EdgeColoring};
use crate::pattern::RewardReport;

/// Logits are clamped to this magnitude before normalization.
pub const LOGIT_CLAMP: f64 = 30.0;

pub const DEFAULT_HIDDEN: [usize; 2] = [128, 64];

/// Input for one construction step, stored as the indices of its one entries.
///
/// Layout for `E` edges and `m` colors: `E` blocks of `m` slots one-hot
/// encoding each colored edge (all zero while uncolored), then `E` slots
/// one-hot encoding the edge to color next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    width: usize,
    active: Vec<usize>,
}

impl Observation {
    pub fn width(&self) -> usize {
        self.width
    }

    /// Positions holding a one, ascending.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.width];
        for &i in &self.active {
            x[i] = 1.0;
        }
        x
    }
}

pub fn observation_width(n: usize, m: usize) -> usize {
    edge_count(n) * (m + 1)
}

/// Encodes the state before coloring edge `next_edge`.
pub fn encode_observation(c: &EdgeColoring, next_edge: usize) -> Result<Observation> {
    let edges = c.num_edges();
    if next_edge >= edges {
        return Err(Error::Parameter(format!(
            "edge {next_edge} out of range; K_{} has {edges} edges",
            c.n()
        )));
    }
    if c.colored_len() != next_edge {
        return Err(Error::Parameter(format!(
            "expected exactly edges 0..{next_edge} colored, found {}",
            c.colored_len()
        )));
    }
    Ok(encode_prefix(c.colors(), next_edge, c.m()))
}

fn encode_prefix(colors: &[u8], next_edge: usize, m: usize) -> Observation {
    let edges = colors.len();
    let mut active: Vec<usize> = colors[..next_edge]
        .iter()
        .enumerate()
        .map(|(e, &col)| e * m + usize::from(col))
        .collect();
    active.push(edges * m + next_edge);
    Observation {
        width: edges * (m + 1),
        active,
    }
}

/// A complete coloring built edge by edge, with its reward. Its
/// `(observation, action)` steps are regenerated from the coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub coloring: EdgeColoring,
    pub reward: RewardReport,
}

impl Trajectory {
    pub fn total(&self) -> u64 {
        self.reward.total
    }

    /// Step `k` pairs the state before edge `k` with the color it received.
    pub fn steps(&self) -> impl Iterator<Item = (Observation, u8)> + '_ {
        let colors = self.coloring.colors();
        let m = self.coloring.m();
        (0..colors.len()).map(move |k| (encode_prefix(colors, k, m), colors[k]))
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Dense {
    inputs: usize,
    outputs: usize,
    /// `inputs x outputs`, row-major by input.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl Dense {
    fn param_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Adam {
    beta1: f64,
    beta2: f64,
    eps: f64,
    step: u64,
    first: Vec<f64>,
    second: Vec<f64>,
}

/// Multilayer perceptron: rectified-linear hidden layers, softmax output.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyNetwork {
    n: usize,
    m: usize,
    layers: Vec<Dense>,
    adam: Adam,
}

impl PolicyNetwork {
    /// Uniform weights and biases in `±1/sqrt(fan_in)`, determined by `seed`.
    pub fn new(n: usize, m: usize, hidden: &[usize], seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::build(n, m, hidden, |fan_in| {
            let scale = 1.0 / (fan_in as f64).sqrt();
            rng.gen_range(-scale..=scale)
        })
    }

    /// Network with every parameter zero; its output is uniform.
    pub fn zeros(n: usize, m: usize, hidden: &[usize]) -> Result<Self> {
        Self::build(n, m, hidden, |_| 0.0)
    }

    fn build(
        n: usize,
        m: usize,
        hidden: &[usize],
        mut draw: impl FnMut(usize) -> f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!(
                "policy needs at least one edge, got n = {n}"
            )));
        }
        if m < 2 {
            return Err(Error::Parameter(format!("need at least 2 colors, got {m}")));
        }
        if hidden.is_empty() || hidden.contains(&0) {
            return Err(Error::Parameter(format!(
                "hidden layer sizes must be nonempty and positive, got {hidden:?}"
            )));
        }
        let mut sizes = vec![observation_width(n, m)];
        sizes.extend_from_slice(hidden);
        sizes.push(m);
        let layers: Vec<Dense> = sizes
            .windows(2)
            .map(|w| {
                let (inputs, outputs) = (w[0], w[1]);
                let weights = (0..inputs * outputs).map(|_| draw(inputs)).collect();
                let bias = (0..outputs).map(|_| draw(inputs)).collect();
                Dense {
                    inputs,
                    outputs,
                    weights,
                    bias,
                }
            })
            .collect();
        let total: usize = layers.iter().map(Dense::param_count).sum();
        Ok(Self {
            n,
            m,
            layers,
            adam: Adam {
                beta1: 0.9,
                beta2: 0.999,
                eps: 1e-8,
                step: 0,
                first: vec![0.0; total],
                second: vec![0.0; total],
            },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].inputs
    }

    /// Layer widths from input to output.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.input_width()];
        sizes.extend(self.layers.iter().map(|l| l.outputs));
        sizes
    }

    pub fn optimizer_steps(&self) -> u64 {
        self.adam.step
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Dense::param_count).sum()
    }

    /// All parameters, layer by layer: weights (row-major by input) then bias.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.bias);
        }
        out
    }

    pub fn set_parameters(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::Parameter(format!(
                "expected {} parameters, got {}",
                self.param_count(),
                params.len()
            )));
        }
        let mut rest = params;
        for l in &mut self.layers {
            let (w, tail) = rest.split_at(l.weights.len());
            let (b, tail) = tail.split_at(l.bias.len());
            l.weights.copy_from_slice(w);
            l.bias.copy_from_slice(b);
            rest = tail;
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.iter().chain(&l.bias).all(|x| x.is_finite()))
    }

    /// Color distribution for one observation.
    pub fn forward(&self, obs: &Observation) -> Result<Vec<f64>> {
        if obs.width != self.input_width() {
            return Err(Error::Parameter(format!(
                "observation width {} does not match network input {}",
                obs.width,
                self.input_width()
            )));
        }
        let trace = self.trace(&obs.active);
        Ok(trace.probs)
    }

    fn trace(&self, active: &[usize]) -> Trace {
        let first = &self.layers[0];
        let mut z = first.bias.clone();
        for &j in active {
            let row = &first.weights[j * first.outputs..(j + 1) * first.outputs];
            for (zo, w) in z.iter_mut().zip(row) {
                *zo += w;
            }
        }
        let mut pre = vec![z];
        let mut post: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers[1..] {
            let a: Vec<f64> = pre.last().unwrap().iter().map(|&x| x.max(0.0)).collect();
            let mut z = layer.bias.clone();
            for (j, &aj) in a.iter().enumerate() {
                if aj != 0.0 {
                    let row = &layer.weights[j * layer.outputs..(j + 1) * layer.outputs];
                    for (zo, w) in z.iter_mut().zip(row) {
                        *zo += aj * w;
                    }
                }
            }
            post.push(a);
            pre.push(z);
        }
        let probs = softmax(pre.last().unwrap());
        Trace { pre, post, probs }
    }

    /// Mean cross-entropy of `(observation, action)` samples and its gradient
    /// in [`parameters`](Self::parameters) order.
    pub fn loss_and_gradient(&self, samples: &[(Observation, u8)]) -> Result<(f64, Vec<f64>)> {
        if samples.is_empty() {
            return Err(Error::Parameter("no training samples".into()));
        }
        for (obs, action) in samples {
            if obs.width != self.input_width() || usize::from(*action) >= self.m {
                return Err(Error::Parameter(
                    "training sample does not fit the network".into(),
                ));
            }
        }
        const CHUNK: usize = 256;
        let scale = 1.0 / samples.len() as f64;
        // fixed chunking and ordered summation keep results independent of scheduling
        let parts: Vec<(f64, Vec<f64>)> = samples
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut grad = vec![0.0; self.param_count()];
                let mut loss = 0.0;
                for (obs, action) in chunk {
                    loss += self.accumulate(&obs.active, usize::from(*action), scale, &mut grad);
                }
                (loss, grad)
            })
            .collect();
        let mut loss = 0.0;
        let mut grad = vec![0.0; self.param_count()];
        for (l, g) in parts {
            loss += l;
            for (acc, x) in grad.iter_mut().zip(g) {
                *acc += x;
            }
        }
        Ok((loss * scale, grad))
    }

    /// Adds `scale * d(-ln p[action])/d(params)` to `grad`; returns `-ln p[action]`.
    fn accumulate(&self, active: &[usize], action: usize, scale: f64, grad: &mut [f64]) -> f64 {
        let trace = self.trace(active);
        let logits = trace.pre.last().unwrap();
        let mut delta: Vec<f64> = trace
            .probs
            .iter()
            .zip(logits)
            .enumerate()
            .map(|(k, (&p, &z))| {
                if z.abs() > LOGIT_CLAMP {
                    0.0
                } else {
                    scale * (p - if k == action { 1.0 } else { 0.0 })
                }
            })
            .collect();

        let offsets = self.offsets();
        for li in (0..self.layers.len()).rev() {
            let layer = &self.layers[li];
            let base = offsets[li];
            let (wgrad, bgrad) =
                grad[base..base + layer.param_count()].split_at_mut(layer.weights.len());
            for (b, d) in bgrad.iter_mut().zip(&delta) {
                *b += d;
            }
            if li == 0 {
                for &j in active {
                    let row = &mut wgrad[j * layer.outputs..(j + 1) * layer.outputs];
                    for (w, d) in row.iter_mut().zip(&delta) {
                        *w += d;
                    }
                }
                break;
            }
            let input = &trace.post[li - 1];
            let below = &trace.pre[li - 1];
            let mut next = vec![0.0; layer.inputs];
            for j in 0..layer.inputs {
                let row = j * layer.outputs..(j + 1) * layer.outputs;
                if input[j] != 0.0 {
                    for (w, d) in wgrad[row.clone()].iter_mut().zip(&delta) {
                        *w += input[j] * d;
                    }
                }
                if below[j] > 0.0 {
                    next[j] = layer.weights[row]
                        .iter()
                        .zip(&delta)
                        .map(|(w, d)| w * d)
                        .sum();
                }
            }
            delta = next;
        }
        -trace.probs[action].ln()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.layers
            .iter()
            .map(|l| {
                let o = acc;
                acc += l.param_count();
                o
            })
            .collect()
    }

    /// One Adam step on the mean cross-entropy between the policy and the
    /// actions of `elites`. Returns the loss before the step.
    pub fn train_step(&mut self, elites: &[Trajectory], learning_rate: f64) -> Result<f64> {
        if elites.is_empty() {
            return Err(Error::Parameter(
                "cannot train on an empty elite set".into(),
            ));
        }
        if !(learning_rate >= 0.0 && learning_rate.is_finite()) {
            return Err(Error::Parameter(format!(
                "invalid learning rate {learning_rate}"
            )));
        }
        let samples: Vec<(Observation, u8)> = elites.iter().flat_map(Trajectory::steps).collect();
        let (loss, grad) = self.loss_and_gradient(&samples)?;
        self.apply_adam(&grad, learning_rate);
        Ok(loss)
    }

    fn apply_adam(&mut self, grad: &[f64], lr: f64) {
        let adam = &mut self.adam;
        adam.step += 1;
        let t = adam.step as i32;
        let correct1 = 1.0 - adam.beta1.powi(t);
        let correct2 = 1.0 - adam.beta2.powi(t);
        let mut k = 0;
        for layer in &mut self.layers {
            for p in layer.weights.iter_mut().chain(layer.bias.iter_mut()) {
                let g = grad[k];
                adam.first[k] = adam.beta1 * adam.first[k] + (1.0 - adam.beta1) * g;
                adam.second[k] = adam.beta2 * adam.second[k] + (1.0 - adam.beta2) * g * g;
                let m_hat = adam.first[k] / correct1;
                let v_hat = adam.second[k] / correct2;
                *p -= lr * m_hat / (v_hat.sqrt() + adam.eps);
                k += 1;
            }
        }
    }

    /// Structured text: shapes, then decimal parameter values and optimizer
    /// state. Values are written in shortest round-trip form, so
    /// [`from_text`](Self::from_text) restores the network exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |xs: &[f64]| {
            xs.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "policy v1");
        let _ = writeln!(out, "shape {} {} {}", self.n, self.m, self.layers.len());
        for l in &self.layers {
            let _ = writeln!(out, "layer {} {}", l.inputs, l.outputs);
            let _ = writeln!(out, "w {}", join(&l.weights));
            let _ = writeln!(out, "b {}", join(&l.bias));
        }
        let a = &self.adam;
        let _ = writeln!(
            out,
            "adam {} {:?} {:?} {:?}",
            a.step, a.beta1, a.beta2, a.eps
        );
        let _ = writeln!(out, "m1 {}", join(&a.first));
        let _ = writeln!(out, "m2 {}", join(&a.second));
        let _ = writeln!(out, "end policy");
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut line = |tag: &str| -> Result<Vec<&str>> {
            let l = lines
                .next()
                .ok_or_else(|| Error::checkpoint(tag, "policy blob ends early"))?;
            let mut parts = l.split_whitespace();
            match parts.next() {
                Some(t) if t == tag => Ok(parts.collect()),
                _ => Err(Error::checkpoint(
                    tag,
                    format!("expected `{tag}` line, found `{l}`"),
                )),
            }
        };
        let header = line("policy")?;
        if header != ["v1"] {
            return Err(Error::checkpoint(
                "policy",
                "unsupported policy blob version",
            ));
        }
        let shape = parse_all::<usize>("shape", &line("shape")?)?;
        let [n, m, count] = shape[..] else {
            return Err(Error::checkpoint("shape", "expected `shape n m layers`"));
        };
        let mut layers = Vec::with_capacity(count);
        for _ in 0..count {
            let dims = parse_all::<usize>("layer", &line("layer")?)?;
            let [inputs, outputs] = dims[..] else {
                return Err(Error::checkpoint(
                    "layer",
                    "expected `layer inputs outputs`",
                ));
            };
            let weights = parse_all::<f64>("w", &line("w")?)?;
            let bias = parse_all::<f64>("b", &line("b")?)?;
            if weights.len() != inputs * outputs || bias.len() != outputs {
                return Err(Error::checkpoint(
                    "layer",
                    "value count does not match layer shape",
                ));
            }
            layers.push(Dense {
                inputs,
                outputs,
                weights,
                bias,
            });
        }
        let adam_fields = line("adam")?;
        if adam_fields.len() != 4 {
            return Err(Error::checkpoint(
                "adam",
                "expected `adam step beta1 beta2 eps`",
            ));
        }
        let step = adam_fields[0]
            .parse::<u64>()
            .map_err(|_| Error::checkpoint("adam", "bad step counter"))?;
        let hyper = parse_all::<f64>("adam", &adam_fields[1..])?;
        let first = parse_all::<f64>("m1", &line("m1")?)?;
        let second = parse_all::<f64>("m2", &line("m2")?)?;
        line("end")?;

        let net = Self {
            n,
            m,
            layers,
            adam: Adam {
                beta1: hyper[0],
                beta2: hyper[1],
                eps: hyper[2],
                step,
                first,
                second,
            },
        };
        let consistent = net.layers.first().map(|l| l.inputs) == Some(observation_width(n, m))
            && net.layers.last().map(|l| l.outputs) == Some(m)
            && net.layers.windows(2).all(|w| w[0].outputs == w[1].inputs)
            && net.adam.first.len() == net.param_count()
            && net.adam.second.len() == net.param_count();
        if !consistent {
            return Err(Error::checkpoint("layer", "layer shapes are inconsistent"));
        }
        Ok(net)
    }
}

fn parse_all<T: std::str::FromStr>(field: &str, parts: &[&str]) -> Result<Vec<T>> {
    parts
        .iter()
        .map(|p| {
            p.parse::<T>()
                .map_err(|_| Error::checkpoint(field, format!("malformed value `{p}`")))
        })
        .collect()
}

struct Trace {
    /// Pre-activations of every layer; the last entry holds the logits.
    pre: Vec<Vec<f64>>,
    /// Rectified outputs feeding layers `1..`.
    post: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let clamped: Vec<f64> = logits
        .iter()
        .map(|z| z.clamp(-LOGIT_CLAMP, LOGIT_CLAMP))
        .collect();
    let max = clamped.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = clamped.iter().map(|z| (z - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / sum).collect()
}

/// With probability `epsilon` a uniformly random color, otherwise a draw
/// from `dist`.
pub fn sample_action<R: Rng + ?Sized>(dist: &[f64], epsilon: f64, rng: &mut R) -> Result<u8> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Parameter(format!(
            "epsilon {epsilon} outside [0, 1]"
        )));
    }
    let sum: f64 = dist.iter().sum();
    if dist.len() < 2
        || dist.len() > usize::from(u8::MAX)
        || dist.iter().any(|p| !(p.is_finite() && *p >= 0.0))
        || (sum - 1.0).abs() > 1e-6
    {
        return Err(Error::Parameter(format!(
            "not a probability distribution: {dist:?}"
        )));
    }
    if epsilon > 0.0 && rng.gen::<f64>() < epsilon {
        return Ok(rng.gen_range(0..dist.len()) as u8);
    }
    let u = rng.gen::<f64>() * sum;
    let mut acc = 0.0;
    for (k, &p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(k as u8);
        }
    }
    // rounding left u at the very top; take the last color with mass
    Ok(dist.iter().rposition(|&p| p > 0.0).unwrap_or(0) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(colors: Vec<u8>, n: usize) -> Trajectory {
        Trajectory {
            coloring: EdgeColoring::from_colors(n, 2, colors).unwrap(),
            reward: RewardReport {
                per_color: vec![0, 0],
                total: 0,
            },
        }
    }

    #[test]
    fn observation_examples() {
        let c = EdgeColoring::new(3, 2).unwrap();
        let obs = encode_observation(&c, 0).unwrap();
        assert_eq!(obs.width(), 9);
        assert_eq!(obs.active(), &[6]);

        let mut c = EdgeColoring::new(3, 2).unwrap();
        c.push(1).unwrap();
        let obs = encode_observation(&c, 1).unwrap();
        assert_eq!(obs.active(), &[1, 7]);
        let dense = obs.to_dense();
        assert_eq!(dense, vec![0., 1., 0., 0., 0., 0., 0., 1., 0.]);

        let full = EdgeColoring::constant(3, 2, 0).unwrap();
        assert!(encode_observation(&full, 3).is_err());
        assert!(encode_observation(&c, 0).is_err());
    }

    #[test]
    fn input_width_for_k13() {
        let p = PolicyNetwork::new(13, 2, &DEFAULT_HIDDEN, 1).unwrap();
        assert_eq!(p.input_width(), 234);
        assert_eq!(p.layer_sizes(), vec![234, 128, 64, 2]);
    }

    #[test]
    fn init_is_seeded() {
        let a = PolicyNetwork::new(5, 2, &[8], 7).unwrap();
        let b = PolicyNetwork::new(5, 2, &[8], 7).unwrap();
        let c = PolicyNetwork::new(5, 2, &[8], 8).unwrap();
        assert_eq!(a.parameters(), b.parameters());
        assert_ne!(a.parameters(), c.parameters());
        let bound = 1.0 / (a.input_width() as f64).sqrt();
        assert!(a.layers[0].weights.iter().all(|w| w.abs() <= bound));
    }

    #[test]
    fn init_rejects_bad_shapes() {
        assert!(PolicyNetwork::new(5, 2, &[], 0).is_err());
        assert!(PolicyNetwork::new(5, 2, &[8, 0], 0).is_err());
        assert!(PolicyNetwork::new(1, 2, &[8], 0).is_err());
    }

    #[test]
    fn zero_network_is_uniform() {
        let p = PolicyNetwork::zeros(4, 3, &[5]).unwrap();
        let c = EdgeColoring::new(4, 3).unwrap();
        let dist = p.forward(&encode_observation(&c, 0).unwrap()).unwrap();
        for x in dist {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_rejects_wrong_width() {
        let p = PolicyNetwork::new(4, 2, &[5], 0).unwrap();
        let c = EdgeColoring::new(5, 2).unwrap();
        assert!(p.forward(&encode_observation(&c, 0).unwrap()).is_err());
    }

    #[test]
    fn softmax_clamps_large_logits() {
        let p = softmax(&[1e6, -1e6, 0.0]);
        assert!(p.iter().all(|&x| x > 0.0 && x.is_finite()));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert_eq!(sample_action(&[1.0, 0.0], 0.0, &mut rng).unwrap(), 0);
        }
        assert!(sample_action(&[0.5, 0.6], 0.0, &mut rng).is_err());
        assert!(sample_action(&[0.5, 0.5], 1.5, &mut rng).is_err());
    }

    #[test]
    fn zero_learning_rate_keeps_weights() {
        let mut p = PolicyNetwork::new(4, 2, &[6], 11).unwrap();
        let before = p.parameters();
        let loss = p
            .train_step(&[traj(vec![0, 1, 1, 0, 1, 0], 4)], 0.0)
            .unwrap();
        assert!(loss > 0.0);
        assert_eq!(p.parameters(), before);
        assert!(p.train_step(&[], 1e-3).is_err());
    }

    #[test]
    fn trajectory_steps_match_coloring() {
        let t = traj(vec![1, 0, 1], 3);
        let steps: Vec<_> = t.steps().collect();
        assert_eq!(steps.len(), 3);
        for (k, (obs, action)) in steps.iter().enumerate() {
            assert_eq!(*action, t.coloring.colors()[k]);
            assert_eq!(*obs.active().last().unwrap(), 6 + k);
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut p = PolicyNetwork::new(4, 3, &[5, 4], 2).unwrap();
        let t = Trajectory {
            coloring: EdgeColoring::from_colors(4, 3, vec![0, 2, 1, 1, 0, 2]).unwrap(),
            reward: RewardReport {
                per_color: vec![0, 0, 0],
                total: 0,
            },
        };
        p.train_step(&[t], 1e-2).unwrap();
        let back = PolicyNetwork::from_text(&p.to_text()).unwrap();
        assert_eq!(back, p);
        assert!(PolicyNetwork::from_text("policy v1\nshape 4 3 2\n").is_err());
    }
}
