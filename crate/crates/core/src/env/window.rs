//! Per-arm play counts over the trailing window.

use std::collections::VecDeque;

/// Counts how often each arm was played in the last `N` rounds plus the
/// current one, i.e. over rounds `max(t − N, 1) ..= t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlidingWindowCounter {
    window: usize,
    counts: Vec<u32>,
    ring: VecDeque<usize>,
}

impl SlidingWindowCounter {
    pub fn new(num_arms: usize, window: u32) -> Self {
        let window = window as usize;
        Self {
            window,
            counts: vec![0; num_arms],
            ring: VecDeque::with_capacity(window + 1),
        }
    }

    /// Records a play of `arm` in the current round and returns the updated
    /// count for that arm (the current round included).
    pub fn push(&mut self, arm: usize) -> u32 {
        if self.ring.len() == self.window + 1 {
            let old = self.ring.pop_front().expect("ring is full");
            self.counts[old] -= 1;
        }
        self.ring.push_back(arm);
        self.counts[arm] += 1;
        self.counts[arm]
    }

    pub fn count(&self, arm: usize) -> u32 {
        self.counts[arm]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn window(&self) -> u32 {
        self.window as u32
    }

    /// Number of rounds currently covered: `min(t, N + 1)` after `t` plays.
    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }
}
