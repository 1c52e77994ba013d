//! k-means over focal elements.
//!
//! Focal elements are points of `{0,1}^n` weighted by their mass. The
//! distance is the size of the symmetric difference, and a center keeps an
//! element iff the members containing it outweigh the members that do not,
//! so centers stay crisp subsets of the frame. Snapping centers this way
//! means the objective need not decrease between iterations; runs stop at a
//! fixed point, on a repeated assignment, or after `max_iterations`.

use std::collections::{HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frame::SubsetMask;
use crate::mass::MassFunction;

use super::{betp_deviation, singleton_pl_deviation, ReductionReport};

/// `|A Δ B|`.
pub fn set_distance(a: SubsetMask, b: SubsetMask) -> u32 {
    a.symmetric_difference(b).cardinality()
}

/// Mass-majority center: `x` is kept iff the members containing `x` weigh
/// strictly more than those that do not.
pub fn cluster_center(members: &[(SubsetMask, f64)]) -> Result<SubsetMask> {
    if members.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let total: f64 = members.iter().map(|&(_, w)| w).sum();
    let union = members
        .iter()
        .fold(SubsetMask::EMPTY, |acc, &(a, _)| acc.union(a));
    let mut center = SubsetMask::EMPTY;
    for x in union.elements() {
        let inside = included_mass(members, x);
        if inside > total - inside {
            center = center.with(x);
        }
    }
    Ok(center)
}

fn included_mass(members: &[(SubsetMask, f64)], x: usize) -> f64 {
    members
        .iter()
        .filter(|(a, _)| a.contains(x))
        .map(|&(_, w)| w)
        .sum()
}

/// Element with the largest included mass, lowest index on ties.
fn heaviest_element(members: &[(SubsetMask, f64)]) -> SubsetMask {
    let union = members
        .iter()
        .fold(SubsetMask::EMPTY, |acc, &(a, _)| acc.union(a));
    let mut best = (0usize, f64::NEG_INFINITY);
    for x in union.elements() {
        let w = included_mass(members, x);
        if w > best.1 {
            best = (x, w);
        }
    }
    SubsetMask::singleton(best.0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Replace an empty center by the heaviest single element.
    pub closed_world: bool,
}

impl KMeansConfig {
    /// One greedy run, at most `k` iterations.
    pub fn new(k: usize) -> Self {
        Self {
            k,
            max_iterations: k,
            restarts: 1,
            seed: 0,
            closed_world: false,
        }
    }

    pub fn with_restarts(mut self, restarts: usize, seed: u64) -> Self {
        self.restarts = restarts;
        self.seed = seed;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn closed_world(mut self, closed_world: bool) -> Self {
        self.closed_world = closed_world;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    FixedPoint,
    Cycle,
    MaxIterations,
}

/// Final clustering of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterState {
    /// Focal elements of the input, ascending mask order.
    pub focal: Vec<SubsetMask>,
    /// `assignment[i]` is the cluster of `focal[i]`.
    pub assignment: Vec<usize>,
    pub centers: Vec<SubsetMask>,
    /// `Σ m(A) · |A Δ C[assign(A)]|`.
    pub objective: f64,
    pub iterations: usize,
    pub termination: Termination,
    /// Index of the winning run; 0 is the greedy initialization.
    pub run: usize,
}

impl ClusterState {
    pub fn cluster_of(&self, a: SubsetMask) -> Option<usize> {
        self.focal
            .binary_search(&a)
            .ok()
            .map(|i| self.assignment[i])
    }
}

/// Index of the nearest center for every point; ties go to the lowest index.
pub fn assign_step(points: &[(SubsetMask, f64)], centers: &[SubsetMask]) -> Vec<usize> {
    points
        .iter()
        .map(|&(a, _)| {
            let mut best = (0, u32::MAX);
            for (j, &c) in centers.iter().enumerate() {
                let d = set_distance(a, c);
                if d < best.1 {
                    best = (j, d);
                }
            }
            best.0
        })
        .collect()
}

fn recompute_centers(
    points: &[(SubsetMask, f64)],
    assignment: &[usize],
    centers: &[SubsetMask],
    closed_world: bool,
) -> Vec<SubsetMask> {
    let mut members: Vec<Vec<(SubsetMask, f64)>> = vec![Vec::new(); centers.len()];
    for (&p, &j) in points.iter().zip(assignment) {
        members[j].push(p);
    }
    members
        .iter()
        .zip(centers)
        .map(|(group, &old)| match cluster_center(group) {
            Ok(c) if c.is_empty() && closed_world => heaviest_element(group),
            Ok(c) => c,
            Err(_) => old,
        })
        .collect()
}

fn objective(points: &[(SubsetMask, f64)], assignment: &[usize], centers: &[SubsetMask]) -> f64 {
    points
        .iter()
        .zip(assignment)
        .map(|(&(a, w), &j)| w * f64::from(set_distance(a, centers[j])))
        .sum()
}

fn run(points: &[(SubsetMask, f64)], init: Vec<SubsetMask>, cfg: &KMeansConfig) -> ClusterState {
    let mut centers = init;
    centers.sort_unstable();
    let mut previous: Option<Vec<SubsetMask>> = None;
    let mut seen: HashSet<Vec<SubsetMask>> = HashSet::new();
    let mut best: Option<ClusterState> = None;
    let mut last: Option<ClusterState> = None;

    for it in 1..=cfg.max_iterations {
        let assignment = assign_step(points, &centers);
        let signature: Vec<SubsetMask> = assignment.iter().map(|&j| centers[j]).collect();
        let next = recompute_centers(points, &assignment, &centers, cfg.closed_world);
        let state = ClusterState {
            focal: points.iter().map(|&(a, _)| a).collect(),
            objective: objective(points, &assignment, &next),
            assignment,
            centers: next.clone(),
            iterations: it,
            termination: Termination::MaxIterations,
            run: 0,
        };

        if previous.as_ref() == Some(&signature) {
            return ClusterState {
                termination: Termination::FixedPoint,
                ..state
            };
        }
        let repeated = !seen.insert(signature.clone());
        if best.as_ref().is_none_or(|b| state.objective < b.objective) {
            best = Some(state.clone());
        }
        if repeated {
            let mut b = best.expect("at least one iterate");
            b.termination = Termination::Cycle;
            b.iterations = it;
            return b;
        }
        last = Some(state);
        previous = Some(signature);
        centers = next;
        centers.sort_unstable();
    }

    // Out of iterations: the last iterate stands.
    last.expect("max_iterations >= 1")
}

/// Clusters the focal set of `m` into at most `k` focal elements.
///
/// The first run starts from the `k` heaviest focal elements (ties by
/// ascending mask); further runs start from random `k`-subsets drawn from
/// `cfg.seed`. The run with the smallest final objective wins, earliest
/// first on ties.
pub fn kmeans_reduce(
    m: &MassFunction,
    cfg: &KMeansConfig,
) -> Result<(MassFunction, ClusterState, ReductionReport)> {
    if cfg.k == 0 || cfg.k > m.len() {
        return Err(Error::InvalidK {
            k: cfg.k,
            focal: m.len(),
        });
    }
    if cfg.max_iterations == 0 {
        return Err(Error::InvalidConfig(
            "max_iterations must be at least 1".into(),
        ));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }

    let points = m.sorted_entries();
    let mut by_mass: Vec<usize> = (0..points.len()).collect();
    by_mass.sort_by(|&i, &j| points[j].1.total_cmp(&points[i].1));
    let greedy: Vec<SubsetMask> = by_mass[..cfg.k].iter().map(|&i| points[i].0).collect();

    let mut inits = vec![greedy];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 1..cfg.restarts {
        let picks = rand::seq::index::sample(&mut rng, points.len(), cfg.k);
        inits.push(picks.iter().map(|i| points[i].0).collect());
    }

    let mut best: Option<ClusterState> = None;
    for (r, init) in inits.into_iter().enumerate() {
        let mut state = run(&points, init, cfg);
        state.run = r;
        if best.as_ref().is_none_or(|b| state.objective < b.objective) {
            best = Some(state);
        }
    }
    let state = best.expect("restarts >= 1");

    let mut table: HashMap<SubsetMask, f64> = HashMap::with_capacity(cfg.k);
    for (&(_, w), &j) in points.iter().zip(&state.assignment) {
        *table.entry(state.centers[j]).or_insert(0.0) += w;
    }
    let reduced = MassFunction::from_table(m.frame_arc().clone(), table);
    let report = ReductionReport {
        input_size: m.len(),
        output_size: reduced.len(),
        betp_deviation: betp_deviation(m, &reduced).unwrap_or(f64::INFINITY),
        secondary_deviation: singleton_pl_deviation(m, &reduced),
        negative_mass_flag: false,
    };
    Ok((reduced, state, report))
}
