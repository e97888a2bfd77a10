//! Discrete-time voter model on the block representation.
//!
//! A configuration `…111 0^{n1} 1^{m1} … 0^{nN} 1^{mN} 000…` is stored as the
//! finite block sizes; the two infinite end blocks are implicit. Each step
//! picks one of the `2N + 1` disagreeing neighbor pairs uniformly and
//! overwrites it with `00` or `11`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Default step cap of [`run_to_heaviside`].
pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VoterError {
    #[error("block sizes must be positive, got {0:?}")]
    EmptyBlock(Vec<(u64, u64)>),
    #[error("the Heaviside configuration has no interface to update")]
    Absorbed,
    #[error("interface {index} out of range for {count} interfaces")]
    NoSuchInterface { index: usize, count: usize },
    #[error("trial count must be at least one")]
    NoTrials,
}

/// Block sizes `(n_i, m_i)`; empty means the Heaviside class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BlockConfig {
    blocks: Vec<(u64, u64)>,
}

/// Value written over the chosen interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fill {
    Zeros,
    Ones,
}

impl BlockConfig {
    pub fn new(blocks: Vec<(u64, u64)>) -> Result<Self, VoterError> {
        if blocks.iter().any(|&(n, m)| n == 0 || m == 0) {
            return Err(VoterError::EmptyBlock(blocks));
        }
        Ok(Self { blocks })
    }

    pub fn heaviside() -> Self {
        Self { blocks: Vec::new() }
    }

    pub fn blocks(&self) -> &[(u64, u64)] {
        &self.blocks
    }

    /// Number of finite zero blocks.
    pub fn level(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_heaviside(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Count of `01`/`10` adjacencies, `2N + 1`.
    pub fn interfaces(&self) -> usize {
        2 * self.blocks.len() + 1
    }

    /// Overwrites interface `index` with `fill`.
    ///
    /// Interfaces are numbered left to right: `0` separates the infinite one
    /// block from `n1`, `2i - 1` separates `n_i | m_i`, `2i` separates
    /// `m_i | n_{i+1}` (or the infinite zero block for `i = N`).
    pub fn apply(&mut self, index: usize, fill: Fill) -> Result<(), VoterError> {
        if self.is_heaviside() {
            return Err(VoterError::Absorbed);
        }
        let count = self.interfaces();
        if index >= count {
            return Err(VoterError::NoSuchInterface { index, count });
        }
        // Flattened finite blocks: position p ∈ 1..=2N is block p of the
        // sequence ∞1, n1, m1, …, nN, mN, ∞0. Even positions hold ones.
        let last = 2 * self.blocks.len();
        let left = index;
        let right = index + 1;
        let left_value_is_one = left % 2 == 0;
        // Copying the left value onto the right site grows the left block.
        let grow_left = match fill {
            Fill::Ones => left_value_is_one,
            Fill::Zeros => !left_value_is_one,
        };
        let (grow, shrink) = if grow_left { (left, right) } else { (right, left) };
        if (1..=last).contains(&grow) {
            *self.block_mut(grow) += 1;
        }
        if (1..=last).contains(&shrink) {
            let size = self.block_mut(shrink);
            *size -= 1;
            if *size == 0 {
                self.merge_around(shrink);
            }
        }
        Ok(())
    }

    fn block_mut(&mut self, position: usize) -> &mut u64 {
        let pair = &mut self.blocks[(position - 1) / 2];
        if position % 2 == 1 {
            &mut pair.0
        } else {
            &mut pair.1
        }
    }

    /// Removes the vanished block at `position` and fuses its neighbors.
    fn merge_around(&mut self, position: usize) {
        let i = (position - 1) / 2;
        let n = self.blocks.len();
        if position % 2 == 1 {
            // n_{i+1} vanished: m_i and m_{i+1} fuse (m_0 is the infinite block).
            if i == 0 {
                self.blocks.remove(0);
            } else {
                let m_next = self.blocks[i].1;
                self.blocks[i - 1].1 += m_next;
                self.blocks.remove(i);
            }
        } else if i + 1 == n {
            // m_N vanished: n_N joins the infinite zero block.
            self.blocks.pop();
        } else {
            let n_next = self.blocks[i + 1].0;
            self.blocks[i].0 += n_next;
            self.blocks[i].1 = self.blocks[i + 1].1;
            self.blocks.remove(i + 1);
        }
    }

    /// One step of the dynamics driven by `rng`.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(), VoterError> {
        if self.is_heaviside() {
            return Err(VoterError::Absorbed);
        }
        let index = rng.random_range(0..self.interfaces());
        let fill = if rng.random_bool(0.5) {
            Fill::Zeros
        } else {
            Fill::Ones
        };
        self.apply(index, fill)
    }
}

/// Counter-based random stream: `(seed, stream_index)` fixes every draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// A level drop `from → from - 1` at the given step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelDrop {
    pub from: usize,
    pub time: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassageRecord {
    pub passage_times: Vec<LevelDrop>,
    /// `None` when the cap was hit first.
    pub heaviside_time: Option<u64>,
    pub steps_taken: u64,
}

impl PassageRecord {
    pub fn truncated(&self) -> bool {
        self.heaviside_time.is_none()
    }
}

/// Runs the dynamics until the Heaviside class or `cap` steps.
pub fn run_to_heaviside<R: Rng + ?Sized>(
    config: &BlockConfig,
    rng: &mut R,
    cap: u64,
) -> PassageRecord {
    let mut state = config.clone();
    let mut passage_times = Vec::with_capacity(state.level());
    let mut time = 0u64;
    while !state.is_heaviside() && time < cap {
        let before = state.level();
        state.step(rng).expect("non-Heaviside state always has interfaces");
        time += 1;
        if state.level() < before {
            passage_times.push(LevelDrop { from: before, time });
        }
    }
    PassageRecord {
        passage_times,
        heaviside_time: state.is_heaviside().then_some(time),
        steps_taken: time,
    }
}

/// Empirical law of the Heaviside hitting time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HittingEstimate {
    pub trials: u64,
    pub seed: u64,
    pub cap: u64,
    pub kmax: u64,
    /// `counts[k]` trials absorbed exactly at `k ≤ kmax`.
    pub counts: Vec<u64>,
    pub beyond_kmax: u64,
    pub truncated: u64,
    /// Sum of hitting times over untruncated trials.
    pub time_sum: u128,
}

impl HittingEstimate {
    fn empty(trials: u64, seed: u64, cap: u64, kmax: u64) -> Self {
        Self {
            trials,
            seed,
            cap,
            kmax,
            counts: vec![0; kmax as usize + 1],
            beyond_kmax: 0,
            truncated: 0,
            time_sum: 0,
        }
    }

    fn record(&mut self, outcome: Option<u64>) {
        match outcome {
            None => self.truncated += 1,
            Some(t) => {
                self.time_sum += t as u128;
                match self.counts.get_mut(t as usize) {
                    Some(c) => *c += 1,
                    None => self.beyond_kmax += 1,
                }
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.beyond_kmax += other.beyond_kmax;
        self.truncated += other.truncated;
        self.time_sum += other.time_sum;
        self
    }

    pub fn pmf(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }

    /// Mean hitting time over untruncated trials.
    pub fn mean(&self) -> f64 {
        let done = self.trials - self.truncated;
        if done == 0 {
            f64::NAN
        } else {
            self.time_sum as f64 / done as f64
        }
    }

    pub fn summary(&self) -> McSummary {
        McSummary {
            trials: self.trials,
            seed: self.seed,
            cap: self.cap,
            truncated: self.truncated,
            pmf: self.pmf().into_iter().enumerate().map(|(k, p)| (k as u64, p)).collect(),
            mean: self.mean(),
        }
    }
}

/// Serialized Monte Carlo summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub trials: u64,
    pub seed: u64,
    pub cap: u64,
    pub truncated: u64,
    pub pmf: Vec<(u64, f64)>,
    pub mean: f64,
}

/// Runs `trials` independent trajectories; trial `i` uses stream `i`, so the
/// result does not depend on how work is spread over threads.
pub fn estimate_distribution(
    config: &BlockConfig,
    trials: u64,
    seed: u64,
    kmax: u64,
    cap: u64,
) -> Result<HittingEstimate, VoterError> {
    if trials == 0 {
        return Err(VoterError::NoTrials);
    }
    let est = (0..trials)
        .into_par_iter()
        .fold(
            || HittingEstimate::empty(trials, seed, cap, kmax),
            |mut acc, i| {
                let mut rng = RngStream::new(seed, i).rng();
                acc.record(run_to_heaviside(config, &mut rng, cap).heaviside_time);
                acc
            },
        )
        .reduce(
            || HittingEstimate::empty(trials, seed, cap, kmax),
            HittingEstimate::merge,
        );
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(blocks: &[(u64, u64)]) -> BlockConfig {
        BlockConfig::new(blocks.to_vec()).unwrap()
    }

    #[test]
    fn interface_counts() {
        assert_eq!(cfg(&[(1, 1)]).interfaces(), 3);
        assert_eq!(cfg(&[(2, 3), (1, 4)]).interfaces(), 5);
        assert!(BlockConfig::heaviside().is_heaviside());
        assert!(BlockConfig::new(vec![(0, 1)]).is_err());
    }

    #[test]
    fn step_on_heaviside_fails() {
        let mut h = BlockConfig::heaviside();
        assert_eq!(h.apply(0, Fill::Ones), Err(VoterError::Absorbed));
        let mut rng = RngStream::new(1, 0).rng();
        assert_eq!(h.step(&mut rng), Err(VoterError::Absorbed));
    }

    #[test]
    fn single_block_moves() {
        // "01" between n1 and m1 overwritten by "00": m1 vanishes.
        let mut c = cfg(&[(1, 1)]);
        c.apply(1, Fill::Zeros).unwrap();
        assert!(c.is_heaviside());
        // Leftmost "10" overwritten by "00": the zero block grows.
        let mut c = cfg(&[(1, 1)]);
        c.apply(0, Fill::Zeros).unwrap();
        assert_eq!(c.blocks(), &[(2, 1)]);
    }

    #[test]
    fn single_block_law_is_the_step_kernel() {
        let start = (3u64, 4u64);
        let mut moves = Vec::new();
        for index in 0..3 {
            for fill in [Fill::Zeros, Fill::Ones] {
                let mut c = cfg(&[start]);
                c.apply(index, fill).unwrap();
                let (n, m) = c.blocks()[0];
                moves.push((n as i32 - start.0 as i32, m as i32 - start.1 as i32));
            }
        }
        moves.sort();
        let mut kernel = crate::walk::STEPS.to_vec();
        kernel.sort();
        assert_eq!(moves, kernel);
    }

    #[test]
    fn internal_merges() {
        // m1 vanishes: n1 and n2 fuse.
        let mut c = cfg(&[(2, 1), (3, 5)]);
        c.apply(2, Fill::Zeros).unwrap();
        assert_eq!(c.blocks(), &[(6, 5)]);
        // n2 vanishes: m1 and m2 fuse.
        let mut c = cfg(&[(2, 1), (1, 5)]);
        c.apply(2, Fill::Ones).unwrap();
        assert_eq!(c.blocks(), &[(2, 7)]);
        // n1 vanishes against the infinite one block.
        let mut c = cfg(&[(1, 4), (2, 2)]);
        c.apply(0, Fill::Ones).unwrap();
        assert_eq!(c.blocks(), &[(2, 2)]);
        // mN vanishes against the infinite zero block.
        let mut c = cfg(&[(1, 4), (2, 1)]);
        c.apply(4, Fill::Zeros).unwrap();
        assert_eq!(c.blocks(), &[(1, 4)]);
        assert_eq!(
            c.apply(3, Fill::Zeros),
            Err(VoterError::NoSuchInterface { index: 3, count: 3 })
        );
    }

    #[test]
    fn heaviside_start_takes_zero_steps() {
        let mut rng = RngStream::new(7, 0).rng();
        let r = run_to_heaviside(&BlockConfig::heaviside(), &mut rng, 10);
        assert_eq!(r.heaviside_time, Some(0));
        assert!(r.passage_times.is_empty());
    }

    #[test]
    fn two_blocks_record_two_drops() {
        for i in 0..50 {
            let mut rng = RngStream::new(11, i).rng();
            let r = run_to_heaviside(&cfg(&[(1, 1), (1, 1)]), &mut rng, DEFAULT_CAP);
            assert_eq!(r.passage_times.len(), 2);
            assert_eq!(r.passage_times[0].from, 2);
            assert_eq!(r.passage_times[1].from, 1);
            assert!(r.passage_times[0].time < r.passage_times[1].time);
            assert_eq!(r.heaviside_time, Some(r.passage_times[1].time));
        }
    }

    #[test]
    fn truncation_is_reported() {
        let mut rng = RngStream::new(3, 0).rng();
        let r = run_to_heaviside(&cfg(&[(50, 50)]), &mut rng, 5);
        assert!(r.truncated());
        assert_eq!(r.steps_taken, 5);
    }

    #[test]
    fn one_step_absorption_frequency() {
        let est = estimate_distribution(&cfg(&[(1, 1)]), 100_000, 42, 5, DEFAULT_CAP).unwrap();
        let pmf = est.pmf();
        assert_eq!(pmf[0], 0.0);
        assert!((pmf[1] - 2.0 / 3.0).abs() <= 0.005, "pmf[1] = {}", pmf[1]);
        assert!(pmf.iter().sum::<f64>() <= 1.0);
    }

    #[test]
    fn estimate_is_deterministic() {
        let c = cfg(&[(2, 1), (1, 3)]);
        let a = estimate_distribution(&c, 1, 9, 50, DEFAULT_CAP).unwrap();
        let b = estimate_distribution(&c, 1, 9, 50, DEFAULT_CAP).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| estimate_distribution(&c, 2000, 5, 50, DEFAULT_CAP).unwrap());
        let parallel = estimate_distribution(&c, 2000, 5, 50, DEFAULT_CAP).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(estimate_distribution(&c, 0, 5, 50, 10), Err(VoterError::NoTrials));
    }

    #[test]
    fn single_block_transition_frequencies() {
        // Keep the walk far from the axes so every step is an interior move.
        let mut rng = RngStream::new(2024, 3).rng();
        let mut counts = std::collections::HashMap::new();
        let steps = 1_000_000u32;
        for _ in 0..steps {
            let mut c = cfg(&[(1000, 1000)]);
            c.step(&mut rng).unwrap();
            let (n, m) = c.blocks()[0];
            *counts.entry((n as i64 - 1000, m as i64 - 1000)).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 6);
        for (_, c) in counts {
            assert!((c as f64 / steps as f64 - 1.0 / 6.0).abs() <= 0.002);
        }
    }

    proptest! {
        #[test]
        fn level_never_increases(
            blocks in prop::collection::vec((1u64..4, 1u64..4), 1..5),
            seed in any::<u64>(),
        ) {
            let mut c = BlockConfig::new(blocks).unwrap();
            let mut rng = RngStream::new(seed, 0).rng();
            for _ in 0..500 {
                if c.is_heaviside() {
                    break;
                }
                let before = c.level();
                c.step(&mut rng).unwrap();
                prop_assert!(c.level() == before || c.level() + 1 == before);
                prop_assert!(c.blocks().iter().all(|&(n, m)| n >= 1 && m >= 1));
            }
        }

        #[test]
        fn streams_are_reproducible(seed in any::<u64>(), stream in any::<u64>()) {
            let c = BlockConfig::new(vec![(2, 2), (1, 1)]).unwrap();
            let a = run_to_heaviside(&c, &mut RngStream::new(seed, stream).rng(), 10_000);
            let b = run_to_heaviside(&c, &mut RngStream::new(seed, stream).rng(), 10_000);
            prop_assert_eq!(a, b);
        }
    }
}
