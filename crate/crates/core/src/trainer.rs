//! The cross-entropy batch loop: roll out colorings, score them, train on
//! the elite fraction, carry the best few into the next batch, and raise the
//! share of random actions while the best reward stalls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certify::{verify_critical, Certificate};
use crate::error::{Error, Result};
use crate::graph::EdgeColoring;
use crate::pattern::{reward, PatternGraph};
use crate::policy::{encode_observation, sample_action, PolicyNetwork, Trajectory, DEFAULT_HIDDEN};

#[derive(Clone, Debug)]
pub struct TrainerConfig {
    pub n: usize,
    pub m: usize,
    /// One forbidden pattern per color.
    pub patterns: Vec<PatternGraph>,
    /// Fresh rollouts per batch; survivors come on top.
    pub batch_size: usize,
    /// Fraction of the batch trained on.
    pub learn_pct: f64,
    /// Fraction of the batch carried into the next one.
    pub survive_pct: f64,
    pub epsilon_initial: f64,
    pub epsilon_step: f64,
    pub epsilon_max: f64,
    /// Batches without a new best before epsilon grows by one step.
    pub stagnation_window: u64,
    pub max_batches: u64,
    pub seed: u64,
    pub hidden_sizes: Vec<usize>,
    pub learning_rate: f64,
}

impl TrainerConfig {
    /// Default hyperparameters for the given instance.
    pub fn new(n: usize, m: usize, patterns: Vec<PatternGraph>) -> Self {
        Self {
            n,
            m,
            patterns,
            batch_size: 400,
            learn_pct: 0.10,
            survive_pct: 0.02,
            epsilon_initial: 0.0,
            epsilon_step: 0.05,
            epsilon_max: 0.5,
            stagnation_window: 50,
            max_batches: 10_000,
            seed: 0,
            hidden_sizes: DEFAULT_HIDDEN.to_vec(),
            learning_rate: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |key: &str, msg: String| Err(Error::config(key, msg));
        if self.n < 2 {
            return fail("n", format!("need at least 2 vertices, got {}", self.n));
        }
        if self.n > crate::graph::MAX_VERTICES {
            return fail(
                "n",
                format!("at most {} vertices supported", crate::graph::MAX_VERTICES),
            );
        }
        if self.m < 2 || self.m > 10 {
            return fail(
                "m",
                format!("color count must be in 2..=10, got {}", self.m),
            );
        }
        if self.patterns.len() != self.m {
            return fail(
                "pattern",
                format!(
                    "{} patterns given for {} colors",
                    self.patterns.len(),
                    self.m
                ),
            );
        }
        if self.batch_size < 2 {
            return fail(
                "batch_size",
                format!("must be at least 2, got {}", self.batch_size),
            );
        }
        if !(self.learn_pct > 0.0 && self.learn_pct <= 1.0) {
            return fail(
                "learn_pct",
                format!("must be in (0, 1], got {}", self.learn_pct),
            );
        }
        if !(self.survive_pct > 0.0 && self.survive_pct <= self.learn_pct) {
            return fail(
                "survive_pct",
                format!(
                    "must be in (0, learn_pct = {}], got {}",
                    self.learn_pct, self.survive_pct
                ),
            );
        }
        for (key, v) in [
            ("epsilon_initial", self.epsilon_initial),
            ("epsilon_step", self.epsilon_step),
            ("epsilon_max", self.epsilon_max),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return fail(key, format!("must be in [0, 1], got {v}"));
            }
        }
        if self.epsilon_initial > self.epsilon_max {
            return fail("epsilon_initial", "must not exceed epsilon_max".into());
        }
        if self.stagnation_window == 0 {
            return fail("stagnation_window", "must be at least 1".into());
        }
        if self.hidden_sizes.is_empty() || self.hidden_sizes.contains(&0) {
            return fail("hidden", "layer sizes must be positive".into());
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return fail(
                "learning_rate",
                format!("invalid value {}", self.learning_rate),
            );
        }
        Ok(())
    }
}

/// Per-batch statistics, one row of the run log.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchStats {
    pub restart: u32,
    pub batch: u64,
    pub min_reward: u64,
    pub mean_reward: f64,
    pub epsilon: f64,
    pub best_reward: u64,
    /// Training loss; absent for the batch that found a critical coloring.
    pub loss: Option<f64>,
}

pub const STATS_HEADER: &str = "restart,batch,min_reward,mean_reward,epsilon,best_reward,loss";

impl BatchStats {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:?},{:?},{},{}",
            self.restart,
            self.batch,
            self.min_reward,
            self.mean_reward,
            self.epsilon,
            self.best_reward,
            self.loss.map_or_else(String::new, |l| format!("{l:?}"))
        )
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let bad = |what: &str| Error::checkpoint("stat", format!("malformed {what} in `{row}`"));
        let f: Vec<&str> = row.trim().split(',').collect();
        if f.len() != 7 {
            return Err(bad("row"));
        }
        Ok(Self {
            restart: f[0].parse().map_err(|_| bad("restart"))?,
            batch: f[1].parse().map_err(|_| bad("batch"))?,
            min_reward: f[2].parse().map_err(|_| bad("min_reward"))?,
            mean_reward: f[3].parse().map_err(|_| bad("mean_reward"))?,
            epsilon: f[4].parse().map_err(|_| bad("epsilon"))?,
            best_reward: f[5].parse().map_err(|_| bad("best_reward"))?,
            loss: match f[6] {
                "" => None,
                l => Some(l.parse().map_err(|_| bad("loss"))?),
            },
        })
    }
}

/// One scored batch: carried survivors first, then fresh rollouts in
/// episode order.
#[derive(Clone, Debug)]
pub struct BatchState {
    pub index: u64,
    pub epsilon: f64,
    pub trajectories: Vec<Trajectory>,
}

impl BatchState {
    pub fn min_reward(&self) -> Option<u64> {
        self.trajectories.iter().map(Trajectory::total).min()
    }

    pub fn mean_reward(&self) -> f64 {
        let sum: f64 = self.trajectories.iter().map(|t| t.total() as f64).sum();
        sum / self.trajectories.len().max(1) as f64
    }
}

/// Random stream for one episode. Streams are keyed by the run seed and
/// indexed by `batch * batch_size + episode`, so the result does not depend
/// on which worker runs the episode.
pub fn episode_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(b"rollouts");
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Colors the edges of `K_n` in order, sampling each color from the policy.
pub fn rollout_episode(
    policy: &PolicyNetwork,
    patterns: &[PatternGraph],
    epsilon: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Trajectory> {
    let mut coloring = EdgeColoring::new(policy.n(), policy.m())?;
    for edge in 0..coloring.num_edges() {
        let dist = policy.forward(&encode_observation(&coloring, edge)?)?;
        coloring.push(sample_action(&dist, epsilon, rng)?)?;
    }
    let reward = reward(&coloring, patterns)?;
    Ok(Trajectory { coloring, reward })
}

/// `batch_size` fresh rollouts in parallel, after the carried survivors.
pub fn generate_batch(
    policy: &PolicyNetwork,
    config: &TrainerConfig,
    seed: u64,
    index: u64,
    epsilon: f64,
    survivors: Vec<Trajectory>,
) -> Result<BatchState> {
    let first_stream = index * config.batch_size as u64;
    let fresh = (0..config.batch_size as u64)
        .into_par_iter()
        .map(|e| {
            let mut rng = episode_rng(seed, first_stream + e);
            rollout_episode(policy, &config.patterns, epsilon, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut trajectories = survivors;
    trajectories.extend(fresh);
    Ok(BatchState {
        index,
        epsilon,
        trajectories,
    })
}

fn take_count(pct: f64, size: usize) -> usize {
    // tolerance keeps e.g. 0.1 * 400 from rounding up to 41
    ((pct * size as f64 - 1e-9).ceil() as usize).clamp(1, size)
}

/// Indices of the batch sorted by reward; ties keep batch order.
fn ranked(batch: &[Trajectory]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..batch.len()).collect();
    idx.sort_by_key(|&i| batch[i].total());
    idx
}

/// The `ceil(learn_pct * size)` lowest-reward trajectories.
pub fn select_elites(batch: &[Trajectory], learn_pct: f64) -> Vec<Trajectory> {
    let k = take_count(learn_pct, batch.len());
    ranked(batch)
        .into_iter()
        .take(k)
        .map(|i| batch[i].clone())
        .collect()
}

/// The `ceil(survive_pct * size)` lowest-reward trajectories, keeping only
/// the first of any repeated coloring.
pub fn select_survivors(batch: &[Trajectory], survive_pct: f64) -> Vec<Trajectory> {
    let k = take_count(survive_pct, batch.len());
    let mut out: Vec<Trajectory> = Vec::with_capacity(k);
    for i in ranked(batch).into_iter().take(k) {
        if !out.iter().any(|t| t.coloring == batch[i].coloring) {
            out.push(batch[i].clone());
        }
    }
    out
}

/// Randomized-action rate and the stagnation counter that drives it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonSchedule {
    pub epsilon: f64,
    pub stagnation: u64,
}

impl EpsilonSchedule {
    pub fn new(config: &TrainerConfig) -> Self {
        Self {
            epsilon: config.epsilon_initial,
            stagnation: 0,
        }
    }

    /// Resets on a new best; otherwise every `stagnation_window` stalled
    /// batches add `epsilon_step`, up to `epsilon_max`.
    pub fn adapt(&mut self, improved: bool, config: &TrainerConfig) -> f64 {
        if improved {
            self.epsilon = config.epsilon_initial;
            self.stagnation = 0;
        } else {
            self.stagnation += 1;
            if self.stagnation.is_multiple_of(config.stagnation_window) {
                self.epsilon = (self.epsilon + config.epsilon_step).min(config.epsilon_max);
            }
        }
        self.epsilon
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// A zero-reward coloring was found.
    Found,
    /// `max_batches` ran out first.
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub certificate: Option<Certificate>,
    /// Best coloring seen; `None` only when no batch ran.
    pub best: Option<Trajectory>,
    pub stats: Vec<BatchStats>,
}

/// Resumable state of one run.
#[derive(Clone, Debug)]
pub struct Trainer {
    pub(crate) config: TrainerConfig,
    pub(crate) restart: u32,
    pub(crate) policy: PolicyNetwork,
    pub(crate) next_batch: u64,
    pub(crate) schedule: EpsilonSchedule,
    pub(crate) best: Option<Trajectory>,
    pub(crate) survivors: Vec<Trajectory>,
    pub(crate) stats: Vec<BatchStats>,
}

impl Trainer {
    pub fn new(config: TrainerConfig) -> Result<Self> {
        Self::with_restart(config, 0)
    }

    /// Fresh run number `restart`, seeded with `config.seed + restart`.
    pub fn with_restart(config: TrainerConfig, restart: u32) -> Result<Self> {
        config.validate()?;
        let seed = config.seed.wrapping_add(u64::from(restart));
        let policy = PolicyNetwork::new(config.n, config.m, &config.hidden_sizes, seed)?;
        Ok(Self {
            schedule: EpsilonSchedule::new(&config),
            config,
            restart,
            policy,
            next_batch: 0,
            best: None,
            survivors: Vec::new(),
            stats: Vec::new(),
        })
    }

    pub fn config(&self) -> &TrainerConfig {
        &self.config
    }

    /// Changes the batch budget. Everything else that shapes the run is fixed
    /// once the first batch is drawn, so this is the only knob a resume may turn.
    pub fn set_max_batches(&mut self, max_batches: u64) {
        self.config.max_batches = max_batches;
    }

    pub fn restart(&self) -> u32 {
        self.restart
    }

    pub fn seed(&self) -> u64 {
        self.config.seed.wrapping_add(u64::from(self.restart))
    }

    pub fn policy(&self) -> &PolicyNetwork {
        &self.policy
    }

    pub fn next_batch(&self) -> u64 {
        self.next_batch
    }

    /// Stream id of the first episode of the next batch.
    pub fn next_stream(&self) -> u64 {
        self.next_batch * self.config.batch_size as u64
    }

    pub fn epsilon(&self) -> f64 {
        self.schedule.epsilon
    }

    pub fn stagnation(&self) -> u64 {
        self.schedule.stagnation
    }

    pub fn best(&self) -> Option<&Trajectory> {
        self.best.as_ref()
    }

    pub fn survivors(&self) -> &[Trajectory] {
        &self.survivors
    }

    pub fn stats(&self) -> &[BatchStats] {
        &self.stats
    }

    pub fn found(&self) -> bool {
        self.best.as_ref().is_some_and(|b| b.total() == 0)
    }

    pub fn is_finished(&self) -> bool {
        self.found() || self.next_batch >= self.config.max_batches
    }

    /// Runs one batch: generate, score, track the best, then (unless a
    /// critical coloring turned up) train, select survivors and adapt epsilon.
    pub fn step(&mut self) -> Result<BatchStats> {
        let epsilon = self.schedule.epsilon;
        let survivors = std::mem::take(&mut self.survivors);
        let batch = generate_batch(
            &self.policy,
            &self.config,
            self.seed(),
            self.next_batch,
            epsilon,
            survivors,
        )?;
        let min = batch.min_reward().expect("batch is never empty");
        let improved = self.best.as_ref().is_none_or(|b| min < b.total());
        if improved {
            let first_min = batch
                .trajectories
                .iter()
                .find(|t| t.total() == min)
                .cloned();
            self.best = first_min;
        }
        let best_reward = self.best.as_ref().map_or(min, Trajectory::total);

        let loss = if best_reward == 0 {
            None
        } else {
            let elites = select_elites(&batch.trajectories, self.config.learn_pct);
            let loss = self.policy.train_step(&elites, self.config.learning_rate)?;
            self.survivors = select_survivors(&batch.trajectories, self.config.survive_pct);
            self.schedule.adapt(improved, &self.config);
            Some(loss)
        };
        let stats = BatchStats {
            restart: self.restart,
            batch: self.next_batch,
            min_reward: min,
            mean_reward: batch.mean_reward(),
            epsilon,
            best_reward,
            loss,
        };
        self.next_batch += 1;
        self.stats.push(stats.clone());
        Ok(stats)
    }

    /// Steps until a critical coloring is found or the budget runs out.
    pub fn run(&mut self) -> Result<RunOutcome> {
        while !self.is_finished() {
            self.step()?;
        }
        self.outcome()
    }

    /// Current result; a found coloring is re-verified from scratch.
    pub fn outcome(&self) -> Result<RunOutcome> {
        let certificate = match &self.best {
            Some(b) if b.total() == 0 => {
                let cert = verify_critical(&b.coloring, &self.config.patterns)?;
                if !cert.is_critical() {
                    return Err(Error::Pattern(
                        "trainer reward disagrees with independent verification".into(),
                    ));
                }
                Some(cert)
            }
            _ => None,
        };
        Ok(RunOutcome {
            status: if certificate.is_some() {
                RunStatus::Found
            } else {
                RunStatus::BudgetExhausted
            },
            certificate,
            best: self.best.clone(),
            stats: self.stats.clone(),
        })
    }
}

/// Runs the search once with `config.seed`.
pub fn run(config: TrainerConfig) -> Result<RunOutcome> {
    Trainer::new(config)?.run()
}

/// Runs up to `1 + restarts` independent searches with seeds `seed`,
/// `seed + 1`, ..., stopping at the first certificate. Returns the last
/// outcome, with statistics of all attempts concatenated.
pub fn run_with_restarts(config: TrainerConfig, restarts: u32) -> Result<RunOutcome> {
    let mut stats = Vec::new();
    let mut last = None;
    for r in 0..=restarts {
        let outcome = Trainer::with_restart(config.clone(), r)?.run()?;
        stats.extend(outcome.stats.iter().cloned());
        let found = outcome.status == RunStatus::Found;
        last = Some(outcome);
        if found {
            break;
        }
    }
    let mut outcome = last.expect("at least one attempt runs");
    outcome.stats = stats;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::RewardReport;

    fn fake(colors: &[u8], total: u64) -> Trajectory {
        Trajectory {
            coloring: EdgeColoring::from_colors(3, 2, colors.to_vec()).unwrap(),
            reward: RewardReport {
                per_color: vec![total, 0],
                total,
            },
        }
    }

    fn k3k3(n: usize) -> TrainerConfig {
        let k3 = PatternGraph::clique(3).unwrap();
        TrainerConfig::new(n, 2, vec![k3.clone(), k3])
    }

    #[test]
    fn elites_by_reward_with_stable_ties() {
        let batch = [
            fake(&[0, 0, 0], 5),
            fake(&[0, 0, 1], 2),
            fake(&[0, 1, 0], 9),
            fake(&[1, 0, 0], 2),
        ];
        let elites = select_elites(&batch, 0.5);
        assert_eq!(elites, vec![batch[1].clone(), batch[3].clone()]);
        assert_eq!(select_elites(&batch, 1.0).len(), 4);

        let flat = [
            fake(&[0, 0, 0], 1),
            fake(&[0, 0, 1], 1),
            fake(&[0, 1, 0], 1),
        ];
        assert_eq!(select_elites(&flat, 0.5), flat[..2].to_vec());
    }

    #[test]
    fn survivors_are_deduplicated() {
        let batch = [
            fake(&[0, 0, 0], 5),
            fake(&[0, 1, 1], 2),
            fake(&[0, 1, 0], 9),
            fake(&[0, 1, 1], 2),
        ];
        let s = select_survivors(&batch, 0.5);
        assert_eq!(s, vec![batch[1].clone()]);
        let single = select_survivors(&batch, 0.01);
        assert_eq!(single, vec![batch[1].clone()]);
    }

    #[test]
    fn take_count_rounds_up() {
        assert_eq!(take_count(0.1, 400), 40);
        assert_eq!(take_count(0.1, 405), 41);
        assert_eq!(take_count(0.02, 10), 1);
        assert_eq!(take_count(1.0, 7), 7);
    }

    #[test]
    fn epsilon_schedule() {
        let mut cfg = k3k3(5);
        cfg.epsilon_initial = 0.1;
        cfg.stagnation_window = 50;
        cfg.epsilon_step = 0.05;
        cfg.epsilon_max = 0.5;
        let mut s = EpsilonSchedule::new(&cfg);
        for _ in 0..100 {
            s.adapt(false, &cfg);
        }
        assert!((s.epsilon - 0.2).abs() < 1e-12);
        assert_eq!(s.stagnation, 100);
        assert_eq!(s.adapt(true, &cfg), 0.1);
        assert_eq!(s.stagnation, 0);
        for _ in 0..10_000 {
            assert!(s.adapt(false, &cfg) <= cfg.epsilon_max);
        }
        assert_eq!(s.epsilon, 0.5);
    }

    #[test]
    fn config_validation() {
        assert!(k3k3(5).validate().is_ok());
        let mut c = k3k3(5);
        c.learn_pct = 0.0;
        assert!(matches!(c.validate(), Err(Error::Config { key, .. }) if key == "learn_pct"));
        let mut c = k3k3(5);
        c.survive_pct = 0.2;
        assert!(matches!(c.validate(), Err(Error::Config { key, .. }) if key == "survive_pct"));
        let mut c = k3k3(5);
        c.batch_size = 1;
        assert!(c.validate().is_err());
        let mut c = k3k3(5);
        c.patterns.pop();
        assert!(c.validate().is_err());
    }

    #[test]
    fn rollout_on_k3() {
        let policy = PolicyNetwork::new(3, 2, &[4], 0).unwrap();
        let pats = k3k3(3).patterns;
        let t = rollout_episode(&policy, &pats, 0.3, &mut episode_rng(1, 0)).unwrap();
        assert!(t.coloring.is_complete());
        assert_eq!(t.steps().count(), 3);
        let again = rollout_episode(&policy, &pats, 0.3, &mut episode_rng(1, 0)).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn zero_budget() {
        let mut cfg = k3k3(5);
        cfg.max_batches = 0;
        let out = run(cfg).unwrap();
        assert_eq!(out.status, RunStatus::BudgetExhausted);
        assert!(out.best.is_none());
        assert!(out.stats.is_empty());
    }

    #[test]
    fn stats_row_round_trip() {
        let s = BatchStats {
            restart: 1,
            batch: 7,
            min_reward: 3,
            mean_reward: 12.345,
            epsilon: 0.1,
            best_reward: 2,
            loss: Some(0.6875),
        };
        assert_eq!(s.csv_row(), "1,7,3,12.345,0.1,2,0.6875");
        assert_eq!(BatchStats::from_csv_row(&s.csv_row()).unwrap(), s);
        let found = BatchStats { loss: None, ..s };
        assert_eq!(BatchStats::from_csv_row(&found.csv_row()).unwrap(), found);
    }
}
