//! LFR benchmark graphs with a planted partition.
//!
//! Degrees follow a truncated power law with exponent `tau1`, community sizes
//! one with exponent `tau2`. Each node gets `round((1 − mu)·degree)` internal
//! edges; the rest leave its community. Generation runs in five stages:
//!
//! 1. degree sequence (minimum degree solved from the target mean),
//! 2. community sizes summing to `n`,
//! 3. node placement with kick-out relocation,
//! 4. stub matching inside each community and across communities,
//! 5. edge-swap rewiring until the graph is simple and every external edge
//!    really crosses communities.
//!
//! Everything is drawn from a single seeded stream, so equal parameters give
//! identical output.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Clustering, Graph};
use crate::seed::{self, Rng};

/// Swap sweeps allowed for removing self-loops and multi-edges.
pub const REWIRING_SWEEPS: usize = 100;
/// Relocations per node allowed while placing nodes into communities.
pub const RELOCATIONS_PER_NODE: usize = 100;
/// A sampled degree sequence is redrawn until its mean lies this close to
/// the requested average degree.
pub const DEGREE_MEAN_TOLERANCE: f64 = 0.5;
const RESAMPLE_ATTEMPTS: usize = 1000;
/// Swap partners tried for one invalid edge within a sweep.
const SWAP_ATTEMPTS: usize = 100;
/// Swaps per edge used to randomize a deterministic fallback wiring.
const MIXING_SWAPS_PER_EDGE: usize = 10;
/// `solve_degree_min` gives up when no minimum degree brings the mean this close.
const MIN_DEGREE_TOLERANCE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LfrParams {
    pub n: usize,
    pub k_avg: f64,
    pub k_max: usize,
    pub mu: f64,
    /// Degree exponent magnitude (`P(k) ∝ k^-tau1`).
    pub tau1: f64,
    /// Community-size exponent magnitude.
    pub tau2: f64,
    pub c_min: usize,
    pub c_max: usize,
    pub seed: u64,
}

impl LfrParams {
    /// The benchmark setting used across experiment sizes: average degree
    /// 25, maximum degree and maximum community size `n/10`, minimum
    /// community size 50, exponents 2 and 1.
    pub fn scaled(n: usize, mu: f64, seed: u64) -> Self {
        LfrParams {
            n,
            k_avg: 25.0,
            k_max: n / 10,
            mu,
            tau1: 2.0,
            tau2: 1.0,
            c_min: 50,
            c_max: n / 10,
            seed,
        }
    }

    fn internal_degree(&self, degree: usize) -> usize {
        ((1.0 - self.mu) * degree as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(0.0..=1.0).contains(&self.mu) {
            return bad(format!("mu = {} outside [0, 1]", self.mu));
        }
        if !(self.tau1 > 0.0 && self.tau2 > 0.0) {
            return bad("exponents must be positive magnitudes".into());
        }
        if !(self.k_avg >= 1.0 && self.k_avg <= self.k_max as f64 && self.k_max < self.n) {
            return bad(format!(
                "need 1 <= k ({}) <= maxk ({}) < N ({})",
                self.k_avg, self.k_max, self.n
            ));
        }
        if !(1 <= self.c_min && self.c_min <= self.c_max && self.c_max <= self.n) {
            return bad(format!(
                "need 1 <= minc ({}) <= maxc ({}) <= N ({})",
                self.c_min, self.c_max, self.n
            ));
        }
        if self.c_min as f64 <= self.k_avg * (1.0 - self.mu) {
            return bad(format!(
                "minc ({}) must exceed k·(1 − mu) = {}",
                self.c_min,
                self.k_avg * (1.0 - self.mu)
            ));
        }
        if self.internal_degree(self.k_max) + 1 > self.c_max {
            return bad(format!(
                "a node of degree maxk needs {} internal neighbors, more than maxc − 1",
                self.internal_degree(self.k_max)
            ));
        }
        Ok(())
    }
}

/// A generated graph with its planted partition.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldStandard {
    pub graph: Graph,
    pub truth: Clustering,
    pub empirical_mu: f64,
}

/// Truncated discrete power law on `[lo, hi]`.
struct PowerLaw {
    lo: usize,
    cdf: Vec<f64>,
}

impl PowerLaw {
    fn new(exponent: f64, lo: usize, hi: usize) -> Self {
        let mut acc = 0.0;
        let cdf = (lo..=hi)
            .map(|x| {
                acc += (x as f64).powf(-exponent);
                acc
            })
            .collect();
        PowerLaw { lo, cdf }
    }

    fn sample(&self, rng: &mut Rng) -> usize {
        let total = *self.cdf.last().expect("non-empty support");
        let u = rng.random::<f64>() * total;
        let idx = self
            .cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1);
        self.lo + idx
    }
}

fn check_support(exponent: f64, x_min: usize, x_max: usize) -> Result<()> {
    if x_min == 0 || x_min > x_max {
        return Err(Error::InvalidParams(format!(
            "power-law support [{x_min}, {x_max}] is empty or contains 0"
        )));
    }
    if exponent.is_nan() || exponent <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "exponent {exponent} must be positive"
        )));
    }
    Ok(())
}

/// `count` i.i.d. draws from `P(x) ∝ x^-exponent` on `[x_min, x_max]`.
pub fn sample_power_law(
    count: usize,
    exponent: f64,
    x_min: usize,
    x_max: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    check_support(exponent, x_min, x_max)?;
    if count == 0 {
        return Err(Error::InvalidParams(
            "sample count must be at least 1".into(),
        ));
    }
    let law = PowerLaw::new(exponent, x_min, x_max);
    let mut rng = seed::rng(seed);
    Ok((0..count).map(|_| law.sample(&mut rng)).collect())
}

/// Mean of the truncated power law on `[lo, hi]`.
pub fn truncated_mean(exponent: f64, lo: usize, hi: usize) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for x in lo..=hi {
        let w = (x as f64).powf(-exponent);
        num += x as f64 * w;
        den += w;
    }
    num / den
}

/// Minimum degree whose truncated power law on `[x_min, k_max]` has the mean
/// closest to `k_avg`, by exhaustive scan of `1..=k_avg`.
pub fn solve_degree_min(k_avg: f64, k_max: usize, exponent: f64) -> Result<usize> {
    if k_avg < 1.0 || k_avg > k_max as f64 {
        return Err(Error::InvalidParams(format!(
            "average degree {k_avg} outside [1, {k_max}]"
        )));
    }
    if k_avg == k_max as f64 {
        return Ok(k_max);
    }
    let mut best = (f64::INFINITY, 1);
    for x in 1..=(k_avg.floor() as usize) {
        let err = (truncated_mean(exponent, x, k_max) - k_avg).abs();
        if err < best.0 {
            best = (err, x);
        }
    }
    if best.0 > MIN_DEGREE_TOLERANCE {
        return Err(Error::generation(
            "degree sequence",
            format!(
                "no minimum degree reaches mean {k_avg} (closest misses by {:.3})",
                best.0
            ),
        ));
    }
    Ok(best.1)
}

/// Mean over nodes with at least one edge of the fraction of their edges that
/// leave their community.
pub fn measure_empirical_mu(graph: &Graph, clustering: &Clustering) -> Result<f64> {
    if graph.node_count() != clustering.node_count() {
        return Err(Error::InvalidClustering(format!(
            "clustering covers {} nodes, graph has {}",
            clustering.node_count(),
            graph.node_count()
        )));
    }
    let mut total = 0.0;
    let mut counted = 0usize;
    for v in 0..graph.node_count() {
        let deg = graph.degree(v);
        if deg == 0 {
            continue;
        }
        let c = clustering.community_of(v);
        let external = graph
            .neighbors(v)
            .iter()
            .filter(|&&w| clustering.community_of(w) != c)
            .count();
        total += external as f64 / deg as f64;
        counted += 1;
    }
    if counted == 0 {
        return Err(Error::InvalidGraph("every node has degree 0".into()));
    }
    Ok(total / counted as f64)
}

fn degree_sequence(params: &LfrParams, rng: &mut Rng) -> Result<Vec<usize>> {
    let x_min = solve_degree_min(params.k_avg, params.k_max, params.tau1)?;
    let law = PowerLaw::new(params.tau1, x_min, params.k_max);
    for _ in 0..RESAMPLE_ATTEMPTS {
        let mut degrees: Vec<usize> = (0..params.n).map(|_| law.sample(rng)).collect();
        let mean = degrees.iter().sum::<usize>() as f64 / params.n as f64;
        if (mean - params.k_avg).abs() > DEGREE_MEAN_TOLERANCE {
            continue;
        }
        if degrees.iter().sum::<usize>() % 2 == 1 {
            let raisable: Vec<usize> = (0..params.n)
                .filter(|&v| degrees[v] < params.k_max)
                .collect();
            let &v = raisable.choose(rng).ok_or_else(|| {
                Error::generation("degree sequence", "odd degree sum and every node at maxk")
            })?;
            degrees[v] += 1;
        }
        return Ok(degrees);
    }
    Err(Error::generation(
        "degree sequence",
        format!(
            "no sample with mean within {DEGREE_MEAN_TOLERANCE} of {}",
            params.k_avg
        ),
    ))
}

fn community_sizes(
    params: &LfrParams,
    largest_internal: usize,
    rng: &mut Rng,
) -> Result<Vec<usize>> {
    let law = PowerLaw::new(params.tau2, params.c_min, params.c_max);
    for _ in 0..RESAMPLE_ATTEMPTS {
        let mut sizes = Vec::new();
        let mut total = 0;
        while total < params.n {
            let s = law.sample(rng);
            sizes.push(s);
            total += s;
        }
        // Trim the overshoot without leaving [c_min, c_max].
        while total > params.n {
            let shrinkable: Vec<usize> = (0..sizes.len())
                .filter(|&i| sizes[i] > params.c_min)
                .collect();
            match shrinkable.choose(rng) {
                Some(&i) => {
                    sizes[i] -= 1;
                    total -= 1;
                }
                None => {
                    let dropped = sizes.pop().expect("total > 0");
                    total -= dropped;
                }
            }
        }
        while total < params.n {
            let growable: Vec<usize> = (0..sizes.len())
                .filter(|&i| sizes[i] < params.c_max)
                .collect();
            let &i = growable.choose(rng).ok_or_else(|| {
                Error::generation("community sizes", "no size assignment sums to N")
            })?;
            sizes[i] += 1;
            total += 1;
        }
        if sizes.iter().max().is_some_and(|&m| m > largest_internal) {
            return Ok(sizes);
        }
    }
    Err(Error::generation(
        "community sizes",
        format!("no community large enough for internal degree {largest_internal}"),
    ))
}

/// Places every node in a community whose size exceeds the node's internal
/// degree. A node joining a full community evicts a random member, which is
/// queued for placement again.
fn place_nodes(internal: &[usize], sizes: &[usize], rng: &mut Rng) -> Result<Vec<usize>> {
    let n = internal.len();
    let mut queue: VecDeque<usize> = {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        order.into()
    };
    let mut members: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s + 1)).collect();
    let budget = n * RELOCATIONS_PER_NODE;
    let mut relocations = 0;
    while let Some(v) = queue.pop_front() {
        let eligible: Vec<usize> = (0..sizes.len())
            .filter(|&c| sizes[c] > internal[v])
            .collect();
        let weights: Vec<usize> = eligible.iter().map(|&c| sizes[c]).collect();
        let total: usize = weights.iter().sum();
        if total == 0 {
            return Err(Error::generation(
                "community assignment",
                format!("internal degree {} fits no community", internal[v]),
            ));
        }
        let mut pick = rng.random_range(0..total);
        let mut chosen = eligible[0];
        for (&c, &w) in eligible.iter().zip(&weights) {
            if pick < w {
                chosen = c;
                break;
            }
            pick -= w;
        }
        members[chosen].push(v);
        if members[chosen].len() > sizes[chosen] {
            let idx = rng.random_range(0..members[chosen].len() - 1);
            let evicted = members[chosen].swap_remove(idx);
            queue.push_back(evicted);
            relocations += 1;
            if relocations > budget {
                return Err(Error::generation(
                    "community assignment",
                    format!("relocation budget of {budget} exhausted"),
                ));
            }
        }
    }
    let mut community = vec![0; n];
    for (c, list) in members.iter().enumerate() {
        for &v in list {
            community[v] = c;
        }
    }
    Ok(community)
}

/// Erdős–Gallai test for a degree sequence sorted in non-increasing order.
fn is_graphical(sorted: &[usize]) -> bool {
    if sorted.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    let mut lhs = 0;
    for k in 1..=sorted.len() {
        lhs += sorted[k - 1];
        let rhs = k * (k - 1) + sorted[k..].iter().map(|&d| d.min(k)).sum::<usize>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Lowers the two largest internal degrees of a community by one until the
/// sequence is graphical. The removed stubs become external stubs.
fn make_graphical(list: &[usize], internal: &mut [usize]) {
    loop {
        let mut order: Vec<usize> = list.to_vec();
        order.sort_by(|&a, &b| internal[b].cmp(&internal[a]).then(a.cmp(&b)));
        let sorted: Vec<usize> = order.iter().map(|&v| internal[v]).collect();
        if is_graphical(&sorted) || sorted.len() < 2 || sorted[1] == 0 {
            return;
        }
        internal[order[0]] -= 1;
        internal[order[1]] -= 1;
    }
}

/// Wires one community as a simple graph with the given internal degrees.
/// Dense communities are built as the complement of a sparse random graph
/// with degrees `size − 1 − internal`, which rewires far more easily.
fn wire_community(
    list: &[usize],
    internal: &[usize],
    rng: &mut Rng,
) -> Result<Vec<(usize, usize)>> {
    let s = list.len();
    let stubs_total: usize = list.iter().map(|&v| internal[v]).sum();
    let dense = stubs_total > s * s.saturating_sub(1) / 2;
    let target = |v: usize| {
        if dense {
            s - 1 - internal[v]
        } else {
            internal[v]
        }
    };
    let mut stubs: Vec<usize> = list
        .iter()
        .flat_map(|&v| std::iter::repeat_n(v, target(v)))
        .collect();
    let mut edges = match_stubs(&mut stubs, rng);
    let mut present = HashSet::new();
    if rewire(
        "internal rewiring",
        &mut edges,
        &mut present,
        |_, _| true,
        rng,
    )
    .is_err()
    {
        edges = havel_hakimi(list, &target)?;
        present = edges.iter().map(|&(u, v)| key(u, v)).collect();
        let swaps = MIXING_SWAPS_PER_EDGE * edges.len();
        randomize(&mut edges, &mut present, swaps, rng);
    }
    if !dense {
        return Ok(edges);
    }
    let mut complement = Vec::with_capacity(stubs_total / 2);
    for (i, &u) in list.iter().enumerate() {
        for &v in &list[i + 1..] {
            if !present.contains(&key(u, v)) {
                complement.push((u, v));
            }
        }
    }
    Ok(complement)
}

/// Deterministic simple graph with the given degrees (the sequence must be
/// graphical): the node with most remaining stubs connects to the next ones.
fn havel_hakimi(list: &[usize], degree: &dyn Fn(usize) -> usize) -> Result<Vec<(usize, usize)>> {
    let mut remaining: Vec<(usize, usize)> = list.iter().map(|&v| (degree(v), v)).collect();
    let mut edges = Vec::new();
    loop {
        remaining.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let (d, u) = remaining[0];
        if d == 0 {
            return Ok(edges);
        }
        if d >= remaining.len() || remaining[d].0 == 0 {
            return Err(Error::generation(
                "internal wiring",
                "internal degrees are not graphical",
            ));
        }
        remaining[0].0 = 0;
        for slot in remaining.iter_mut().skip(1).take(d) {
            slot.0 -= 1;
            edges.push((u, slot.1));
        }
    }
}

/// Random degree-preserving double-edge swaps that keep the graph simple.
fn randomize(
    edges: &mut [(usize, usize)],
    present: &mut HashSet<(usize, usize)>,
    swaps: usize,
    rng: &mut Rng,
) {
    if edges.len() < 2 {
        return;
    }
    for _ in 0..swaps {
        let i = rng.random_range(0..edges.len());
        let j = rng.random_range(0..edges.len());
        let (a, b) = edges[i];
        let (c, d) = if rng.random::<bool>() {
            edges[j]
        } else {
            (edges[j].1, edges[j].0)
        };
        if a == c || a == d || b == c || b == d {
            continue;
        }
        if present.contains(&key(a, c)) || present.contains(&key(b, d)) {
            continue;
        }
        present.remove(&key(a, b));
        present.remove(&key(c, d));
        present.insert(key(a, c));
        present.insert(key(b, d));
        edges[i] = (a, c);
        edges[j] = (b, d);
    }
}

/// Random pairing of stubs.
fn match_stubs(stubs: &mut [usize], rng: &mut Rng) -> Vec<(usize, usize)> {
    stubs.shuffle(rng);
    stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Double-edge swaps that remove self-loops, repeated edges and edges
/// rejected by `allowed`, while keeping every degree. `present` holds all
/// edges already placed elsewhere in the graph and receives `edges` once the
/// pool is clean.
fn rewire(
    stage: &'static str,
    edges: &mut [(usize, usize)],
    present: &mut HashSet<(usize, usize)>,
    allowed: impl Fn(usize, usize) -> bool,
    rng: &mut Rng,
) -> Result<()> {
    let mut multiplicity: HashMap<(usize, usize), usize> = HashMap::new();
    for &(u, v) in edges.iter() {
        *multiplicity.entry(key(u, v)).or_insert(0) += 1;
    }
    let valid_new = |u: usize, v: usize, multiplicity: &HashMap<(usize, usize), usize>| {
        u != v
            && allowed(u, v)
            && !present.contains(&key(u, v))
            && multiplicity.get(&key(u, v)).copied().unwrap_or(0) == 0
    };
    let is_bad =
        |i: usize, edges: &[(usize, usize)], multiplicity: &HashMap<(usize, usize), usize>| {
            let (u, v) = edges[i];
            u == v || !allowed(u, v) || present.contains(&key(u, v)) || multiplicity[&key(u, v)] > 1
        };

    if edges.len() >= 2 {
        for _ in 0..REWIRING_SWEEPS {
            let bad: Vec<usize> = (0..edges.len())
                .filter(|&i| is_bad(i, edges, &multiplicity))
                .collect();
            if bad.is_empty() {
                break;
            }
            for i in bad {
                if !is_bad(i, edges, &multiplicity) {
                    continue;
                }
                // Random partners first, then a full scan from a random offset
                // so that any single fixing swap is found.
                let offset = rng.random_range(0..edges.len());
                let random = (0..SWAP_ATTEMPTS)
                    .map(|_| rng.random_range(0..edges.len()))
                    .collect::<Vec<_>>();
                let scan = (0..edges.len()).map(|k| (offset + k) % edges.len());
                let mut fixed = false;
                for j in random.into_iter().chain(scan) {
                    if j == i {
                        continue;
                    }
                    let (a, b) = edges[i];
                    let (c, d) = edges[j];
                    *multiplicity.get_mut(&key(a, b)).unwrap() -= 1;
                    *multiplicity.get_mut(&key(c, d)).unwrap() -= 1;
                    let flip = rng.random::<bool>();
                    let options = if flip {
                        [((a, c), (b, d)), ((a, d), (b, c))]
                    } else {
                        [((a, d), (b, c)), ((a, c), (b, d))]
                    };
                    let chosen = options.into_iter().find(|&(e1, e2)| {
                        valid_new(e1.0, e1.1, &multiplicity)
                            && valid_new(e2.0, e2.1, &multiplicity)
                            && key(e1.0, e1.1) != key(e2.0, e2.1)
                    });
                    if let Some((e1, e2)) = chosen {
                        edges[i] = e1;
                        edges[j] = e2;
                        *multiplicity.entry(key(e1.0, e1.1)).or_insert(0) += 1;
                        *multiplicity.entry(key(e2.0, e2.1)).or_insert(0) += 1;
                        fixed = true;
                        break;
                    }
                    *multiplicity.get_mut(&key(a, b)).unwrap() += 1;
                    *multiplicity.get_mut(&key(c, d)).unwrap() += 1;
                }
                if !fixed {
                    // No single swap helps; shuffle valid edges so the next
                    // sweep sees a different neighborhood.
                    for _ in 0..SWAP_ATTEMPTS {
                        let j = rng.random_range(0..edges.len());
                        let k = rng.random_range(0..edges.len());
                        if j == k
                            || is_bad(j, edges, &multiplicity)
                            || is_bad(k, edges, &multiplicity)
                        {
                            continue;
                        }
                        let (a, b) = edges[j];
                        let (c, d) = edges[k];
                        let (e1, e2) = ((a, c), (b, d));
                        *multiplicity.get_mut(&key(a, b)).unwrap() -= 1;
                        *multiplicity.get_mut(&key(c, d)).unwrap() -= 1;
                        if valid_new(e1.0, e1.1, &multiplicity)
                            && valid_new(e2.0, e2.1, &multiplicity)
                            && key(e1.0, e1.1) != key(e2.0, e2.1)
                        {
                            edges[j] = e1;
                            edges[k] = e2;
                            *multiplicity.entry(key(e1.0, e1.1)).or_insert(0) += 1;
                            *multiplicity.entry(key(e2.0, e2.1)).or_insert(0) += 1;
                        } else {
                            *multiplicity.get_mut(&key(a, b)).unwrap() += 1;
                            *multiplicity.get_mut(&key(c, d)).unwrap() += 1;
                        }
                    }
                }
            }
        }
    }
    let remaining = (0..edges.len())
        .filter(|&i| is_bad(i, edges, &multiplicity))
        .count();
    if remaining > 0 {
        return Err(Error::generation(
            stage,
            format!("{remaining} invalid edges left after {REWIRING_SWEEPS} sweeps"),
        ));
    }
    present.extend(edges.iter().map(|&(u, v)| key(u, v)));
    Ok(())
}

pub fn generate(params: &LfrParams) -> Result<GoldStandard> {
    params.validate()?;
    let mut rng = seed::rng(params.seed);
    let n = params.n;

    let degrees = degree_sequence(params, &mut rng)?;
    // Nearest integer, with exact halves split by a coin flip so that the
    // mean mixing is not biased downward.
    let mut internal: Vec<usize> = degrees
        .iter()
        .map(|&d| {
            let x = (1.0 - params.mu) * d as f64;
            if x.fract() == 0.5 && rng.random::<bool>() {
                x.floor() as usize
            } else {
                params.internal_degree(d)
            }
        })
        .collect();
    let largest_internal = internal.iter().copied().max().unwrap_or(0);
    let sizes = community_sizes(params, largest_internal, &mut rng)?;
    let community = place_nodes(&internal, &sizes, &mut rng)?;

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for v in 0..n {
        members[community[v]].push(v);
    }

    // Each community needs an even number of internal stubs. Prefer turning
    // an external stub into an internal one; otherwise add an internal stub
    // to a node below maxk, which keeps the external stubs untouched.
    let mut degrees = degrees;
    let mut grown = 0usize;
    for list in &members {
        let stubs: usize = list.iter().map(|&v| internal[v]).sum();
        if stubs.is_multiple_of(2) {
            continue;
        }
        let cap = list.len() - 1;
        let convertible: Vec<usize> = list
            .iter()
            .copied()
            .filter(|&v| internal[v] < degrees[v] && internal[v] < cap)
            .collect();
        if let Some(&v) = convertible.choose(&mut rng) {
            internal[v] += 1;
            continue;
        }
        let growable: Vec<usize> = list
            .iter()
            .copied()
            .filter(|&v| degrees[v] < params.k_max && internal[v] < cap)
            .collect();
        let &v = growable
            .choose(&mut rng)
            .ok_or_else(|| Error::generation("wiring", "cannot make internal stub count even"))?;
        internal[v] += 1;
        degrees[v] += 1;
        grown += 1;
    }
    let external_stubs: usize = (0..n).map(|v| degrees[v] - internal[v]).sum();
    if external_stubs % 2 == 1 {
        let growable: Vec<usize> = (0..n)
            .filter(|&v| degrees[v] > internal[v] && degrees[v] < params.k_max)
            .collect();
        let &v = growable.choose(&mut rng).ok_or_else(|| {
            Error::generation(
                "wiring",
                format!("odd external stub count after {grown} adjustments"),
            )
        })?;
        degrees[v] += 1;
    }

    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut all_edges: Vec<(usize, usize)> = Vec::new();
    for list in &members {
        make_graphical(list, &mut internal);
        let edges = wire_community(list, &internal, &mut rng)?;
        present.extend(edges.iter().map(|&(u, v)| key(u, v)));
        all_edges.extend(edges);
    }

    let mut stubs: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degrees[v] - internal[v]))
        .collect();
    let mut edges = match_stubs(&mut stubs, &mut rng);
    rewire(
        "external rewiring",
        &mut edges,
        &mut present,
        |u, v| community[u] != community[v],
        &mut rng,
    )?;
    all_edges.extend(edges);

    let graph = Graph::from_edges(n, &all_edges)?;
    let truth = Clustering::from_labels(&community);
    let empirical_mu = measure_empirical_mu(&graph, &truth)?;
    Ok(GoldStandard {
        graph,
        truth,
        empirical_mu,
    })
}
