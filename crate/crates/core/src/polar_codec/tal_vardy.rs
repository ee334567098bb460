//! Degrading-merge (Tal–Vardy) construction for binary symmetric channels.
//!
//! A binary memoryless symmetric channel is stored as a list of conjugate
//! output pairs `(a, b)` with `a = P(y|0) = P(ȳ|1)` and `b = P(y|1) = P(ȳ|0)`,
//! normalized so `a >= b`. Each polarization step squares the alphabet; it is
//! then shrunk back to at most `max_outputs` pairs by repeatedly merging the
//! two LLR-adjacent pairs whose merge loses the least mutual information.
//! Merging only ever degrades the channel, so the error probabilities
//! reported here are upper bounds on the true bit-channel error rates.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::thread;

type Pair = (f64, f64);

/// Bit-channel ML error probabilities for the `2^log_len` synthesized
/// channels of BSC(`crossover`), natural index order.
pub(crate) fn bit_channel_error_probabilities(
    crossover: f64,
    log_len: u32,
    max_outputs: usize,
) -> Vec<f64> {
    let max_outputs = max_outputs.max(2);
    let mut level: Vec<Vec<Pair>> = vec![vec![(1.0 - crossover, crossover)]];
    for _ in 0..log_len {
        level = next_level(&level, max_outputs);
    }
    level
        .iter()
        .map(|w| w.iter().map(|&(_, b)| b).sum::<f64>().min(0.5))
        .collect()
}

fn next_level(level: &[Vec<Pair>], max_outputs: usize) -> Vec<Vec<Pair>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = level.len().div_ceil(workers).max(1);
    thread::scope(|scope| {
        let handles: Vec<_> = level
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .flat_map(|w| {
                            [
                                merge_down(check_transform(w), max_outputs),
                                merge_down(variable_transform(w), max_outputs),
                            ]
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("construction worker panicked"))
            .collect()
    })
}

fn normalized(a: f64, b: f64) -> Pair {
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `W⁻(y1, y2 | u1) = ½ Σ_{u2} W(y1 | u1 ⊕ u2) W(y2 | u2)`.
///
/// Outputs `(i, j)` and `(j, i)` have equal likelihoods, as do `(y_i, y_j)`
/// and `(ȳ_i, ȳ_j)`, so each unordered index pair yields one conjugate pair.
fn check_transform(w: &[Pair]) -> Vec<Pair> {
    let mut out = Vec::with_capacity(w.len() * (w.len() + 1) / 2);
    for (i, &(a, b)) in w.iter().enumerate() {
        for (j, &(c, d)) in w.iter().enumerate().skip(i) {
            let k = if i == j { 1.0 } else { 2.0 };
            out.push(normalized(k * (a * c + b * d), k * (a * d + b * c)));
        }
    }
    out
}

/// `W⁺(y1, y2, u1 | u2) = ½ W(y1 | u1 ⊕ u2) W(y2 | u2)`.
fn variable_transform(w: &[Pair]) -> Vec<Pair> {
    let mut out = Vec::with_capacity(w.len() * (w.len() + 1));
    for (i, &(a, b)) in w.iter().enumerate() {
        for (j, &(c, d)) in w.iter().enumerate().skip(i) {
            let k = if i == j { 1.0 } else { 2.0 };
            out.push(normalized(k * a * c, k * b * d));
            out.push(normalized(k * a * d, k * b * c));
        }
    }
    out
}

/// Contribution of one conjugate pair to the channel capacity, in bits.
fn capacity_term(a: f64, b: f64) -> f64 {
    let total = a + b;
    if total <= 0.0 {
        return 0.0;
    }
    let term = |p: f64| {
        if p > 0.0 {
            p * (2.0 * p / total).log2()
        } else {
            0.0
        }
    };
    term(a) + term(b)
}

fn merge_cost(x: Pair, y: Pair) -> f64 {
    capacity_term(x.0, x.1) + capacity_term(y.0, y.1) - capacity_term(x.0 + y.0, x.1 + y.1)
}

struct Candidate {
    cost: f64,
    left: usize,
    left_version: u32,
    right: usize,
    right_version: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // min-heap on cost, then leftmost
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then(other.left.cmp(&self.left))
    }
}

/// Channels this close to perfect or useless are collapsed to a single BSC
/// pair; their descendants stay far from any frozen/data boundary.
const POLARIZED_MARGIN: f64 = 1e-10;

fn merge_down(mut pairs: Vec<Pair>, max_outputs: usize) -> Vec<Pair> {
    pairs.retain(|&(a, b)| a + b > 0.0);
    if pairs.len() <= max_outputs {
        return pairs;
    }
    let error: f64 = pairs.iter().map(|&(_, b)| b).sum();
    if !(POLARIZED_MARGIN..=0.5 - POLARIZED_MARGIN).contains(&error) {
        // merging every output pair is itself a degrading merge
        let mass: f64 = pairs.iter().map(|&(a, b)| a + b).sum();
        return vec![normalized(mass - error, error)];
    }
    // ascending posterior error probability, i.e. descending LLR
    pairs.sort_by(|x, y| (x.1 / (x.0 + x.1)).total_cmp(&(y.1 / (y.0 + y.1))));

    let len = pairs.len();
    let mut prev: Vec<Option<usize>> = (0..len).map(|i| i.checked_sub(1)).collect();
    let mut next: Vec<Option<usize>> = (0..len).map(|i| (i + 1 < len).then_some(i + 1)).collect();
    let mut version = vec![0u32; len];
    let mut alive = vec![true; len];
    let mut heap: BinaryHeap<Candidate> = (0..len - 1)
        .map(|i| Candidate {
            cost: merge_cost(pairs[i], pairs[i + 1]),
            left: i,
            left_version: 0,
            right: i + 1,
            right_version: 0,
        })
        .collect();

    let mut remaining = len;
    while remaining > max_outputs {
        let Some(c) = heap.pop() else { break };
        if !alive[c.left]
            || !alive[c.right]
            || version[c.left] != c.left_version
            || version[c.right] != c.right_version
        {
            continue;
        }
        let (l, r) = (c.left, c.right);
        pairs[l] = (pairs[l].0 + pairs[r].0, pairs[l].1 + pairs[r].1);
        alive[r] = false;
        version[l] += 1;
        next[l] = next[r];
        if let Some(n) = next[r] {
            prev[n] = Some(l);
        }
        remaining -= 1;
        if let Some(p) = prev[l] {
            heap.push(Candidate {
                cost: merge_cost(pairs[p], pairs[l]),
                left: p,
                left_version: version[p],
                right: l,
                right_version: version[l],
            });
        }
        if let Some(n) = next[l] {
            heap.push(Candidate {
                cost: merge_cost(pairs[l], pairs[n]),
                left: l,
                left_version: version[l],
                right: n,
                right_version: version[n],
            });
        }
    }
    pairs
        .into_iter()
        .zip(alive)
        .filter_map(|(p, keep)| keep.then_some(p))
        .collect()
}
