use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point2 = (f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    pub centroids: Vec<Point2>,
    /// Cluster index for each input point, in input order.
    pub assignment: Vec<usize>,
    pub iterations: usize,
    /// Within-cluster sum of squares after each centroid update.
    pub objective_history: Vec<f64>,
}

impl KMeansResult {
    pub fn objective(&self, points: &[Point2]) -> f64 {
        sum_of_squares(points, &self.centroids, &self.assignment)
    }
}

fn dist2(a: Point2, b: Point2) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    dx * dx + dy * dy
}

/// Index of the nearest centroid; ties go to the lowest index.
pub fn nearest(p: Point2, centroids: &[Point2]) -> usize {
    let mut best = 0;
    let mut best_d = dist2(p, centroids[0]);
    for (i, &c) in centroids.iter().enumerate().skip(1) {
        let d = dist2(p, c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

pub fn sum_of_squares(points: &[Point2], centroids: &[Point2], assignment: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignment)
        .map(|(&p, &a)| dist2(p, centroids[a]))
        .sum()
}

/// Arithmetic mean of a non-empty point set.
pub fn mean(points: &[Point2]) -> Point2 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x, sy + y));
    (sx / n, sy / n)
}

/// k-means++ seeding: first centre uniform, each next one drawn with
/// probability proportional to squared distance from the chosen set.
fn seed_centroids(points: &[Point2], k: usize, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.gen_range(0..points.len())]);
    while centroids.len() < k {
        let weights: Vec<f64> = points
            .iter()
            .map(|&p| {
                centroids
                    .iter()
                    .map(|&c| dist2(p, c))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = points.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                if target < *w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            // Every point already coincides with a centre.
            rng.gen_range(0..points.len())
        };
        centroids.push(points[pick]);
    }
    centroids
}

/// Independent k-means++ starts per call; the lowest objective wins.
pub const KMEANS_RESTARTS: usize = 10;

/// Lloyd's algorithm from `KMEANS_RESTARTS` seeded k-means++ starts,
/// keeping the run with the lowest within-cluster sum of squares (ties go to
/// the earlier start).
///
/// Each run iterates until the assignment stops changing or `max_iter`
/// updates have been made. A cluster that loses all its points keeps its
/// previous centre.
pub fn kmeans(points: &[Point2], k: usize, seed: u64, max_iter: usize) -> Result<KMeansResult> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    if k == 0 || k > points.len() {
        return Err(Error::TooManyClusters { k, n: points.len() });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, KMeansResult)> = None;
    for _ in 0..KMEANS_RESTARTS {
        let start = seed_centroids(points, k, &mut rng);
        let run = lloyd(points, start, max_iter);
        let objective = run.objective(points);
        if best.as_ref().is_none_or(|(b, _)| objective < *b) {
            best = Some((objective, run));
        }
    }
    Ok(best.expect("at least one start").1)
}

fn lloyd(points: &[Point2], mut centroids: Vec<Point2>, max_iter: usize) -> KMeansResult {
    let k = centroids.len();
    let mut assignment: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    let mut iterations = 0;

    while iterations < max_iter {
        let next: Vec<usize> = points.iter().map(|&p| nearest(p, &centroids)).collect();
        if next == assignment {
            break;
        }
        assignment = next;

        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (&p, &a) in points.iter().zip(&assignment) {
            let s = &mut sums[a];
            s.0 += p.0;
            s.1 += p.1;
            s.2 += 1;
        }
        for (c, (sx, sy, n)) in centroids.iter_mut().zip(sums) {
            if n > 0 {
                *c = (sx / n as f64, sy / n as f64);
            }
        }
        iterations += 1;
        history.push(sum_of_squares(points, &centroids, &assignment));
    }
    if assignment.is_empty() {
        assignment = points.iter().map(|&p| nearest(p, &centroids)).collect();
    }

    KMeansResult {
        centroids,
        assignment,
        iterations,
        objective_history: history,
    }
}
