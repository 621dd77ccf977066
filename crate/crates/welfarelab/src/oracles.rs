//! Brute-force reference implementations that cross-validate the LP-based
//! checkers on small instances.
//!
//! The linear programs in [`crate::aggregation`] answer geometric questions —
//! convex-hull membership and existence of welfare weights rationalizing a
//! support. For small numbers of agents those questions also admit direct
//! answers: exact point/segment/triangle projection for hull membership, and
//! exhaustive search over candidate weight vectors (a fine simplex grid plus
//! every vertex of the feasible region, enumerated from pairwise tie
//! hyperplanes) for maximality. These independent routes are deliberately
//! implemented without the simplex solver so that agreement between the two
//! is evidence for both.
//!
//! Everything here is exponential or grid-sized in the number of agents and
//! alternatives; callers are expected to stay in the ranges the functions
//! document (`m ≤ 3` for exact hull geometry, `m ≤ 4` for weight search).
//!
//! ```
//! use welfarelab::lottery::{make_lottery, DecisionProblem};
//! use welfarelab::choice::ChoiceDistribution;
//! use welfarelab::oracles::{hull_distance, maximal_by_search};
//!
//! let menu = DecisionProblem::new(vec![
//!     make_lottery(&[1.0, 0.0]).unwrap(),
//!     make_lottery(&[0.0, 1.0]).unwrap(),
//! ]).unwrap();
//! let r1 = ChoiceDistribution::new(menu.clone(), vec![0.75, 0.25], None).unwrap();
//! let r2 = ChoiceDistribution::new(menu.clone(), vec![0.25, 0.75], None).unwrap();
//! let mid = ChoiceDistribution::new(menu, vec![0.5, 0.5], None).unwrap();
//! let agents = [r1, r2];
//! assert!(hull_distance(mid.probs(), &agents).unwrap() <= 1e-12);
//! assert!(maximal_by_search(&mid, &agents, 1e-9).unwrap());
//! ```

use crate::choice::ChoiceDistribution;
use crate::{Error, Result};

/// All weight vectors on the `m`-simplex whose coordinates are multiples of
/// `1/steps` — the classical barycentric grid, `C(steps + m − 1, m − 1)`
/// points.
pub fn barycentric_grid(m: usize, steps: usize) -> Vec<Vec<f64>> {
    assert!(
        m >= 1 && steps >= 1,
        "grid needs at least one agent and one step"
    );
    let mut out = Vec::new();
    let mut current = vec![0usize; m];
    fill_grid(&mut out, &mut current, 0, steps, steps);
    out
}

fn fill_grid(
    out: &mut Vec<Vec<f64>>,
    current: &mut Vec<usize>,
    pos: usize,
    remaining: usize,
    steps: usize,
) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.iter().map(|&k| k as f64 / steps as f64).collect());
        return;
    }
    for k in 0..=remaining {
        current[pos] = k;
        fill_grid(out, current, pos + 1, remaining - k, steps);
    }
}

/// Solves a small dense linear system by Gaussian elimination with partial
/// pivoting; `None` when (numerically) singular.
// Textbook index form: the elimination loop reads one row while writing
// another, which iterator rewrites only obscure.
#[allow(clippy::needless_range_loop)]
fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .expect("finite pivots")
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance from `point` to the segment `[a, b]`.
fn segment_distance(point: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ee: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    if ee < 1e-30 {
        return squared_distance(point, a).sqrt();
    }
    let de: f64 = point
        .iter()
        .zip(b)
        .zip(a.iter().zip(b))
        .map(|((p, bb), (aa, bb2))| (p - bb) * (aa - bb2))
        .sum();
    let t = (de / ee).clamp(0.0, 1.0);
    let closest: Vec<f64> = a.iter().zip(b).map(|(aa, bb)| bb + t * (aa - bb)).collect();
    squared_distance(point, &closest).sqrt()
}

/// Exact Euclidean distance from a choice row to the convex hull of up to
/// three agent rows, by direct point/segment/triangle projection — no linear
/// programming involved. Errors with [`Error::DomainError`] for more than
/// three rows.
pub fn hull_distance(point: &[f64], rows: &[ChoiceDistribution]) -> Result<f64> {
    let rows: Vec<&[f64]> = rows.iter().map(|r| r.probs()).collect();
    match rows.len() {
        0 => Err(Error::EmptyInput("agent rows")),
        1 => Ok(squared_distance(point, rows[0]).sqrt()),
        2 => Ok(segment_distance(point, rows[0], rows[1])),
        3 => {
            let (r1, r2, r3) = (rows[0], rows[1], rows[2]);
            let u: Vec<f64> = r1.iter().zip(r3).map(|(a, b)| a - b).collect();
            let v: Vec<f64> = r2.iter().zip(r3).map(|(a, b)| a - b).collect();
            let w: Vec<f64> = point.iter().zip(r3).map(|(a, b)| a - b).collect();
            let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };
            let (uu, uv, vv) = (dot(&u, &u), dot(&u, &v), dot(&v, &v));
            let det = uu * vv - uv * uv;
            let edges = |p: &[f64]| -> f64 {
                segment_distance(p, r1, r2)
                    .min(segment_distance(p, r2, r3))
                    .min(segment_distance(p, r1, r3))
            };
            // Relative degeneracy test: det/(uu·vv) = sin²(angle between the
            // edge vectors), so collinear rows — exact or to fp noise — fall
            // back to the segment union. A thin-but-genuine triangle keeps
            // every interior point near an edge, so the fallback stays exact
            // in the limit.
            if det <= 1e-12 * uu * vv {
                return Ok(edges(point));
            }
            let wu = dot(&w, &u);
            let wv = dot(&w, &v);
            let l1 = (wu * vv - wv * uv) / det;
            let l2 = (wv * uu - wu * uv) / det;
            if l1 >= 0.0 && l2 >= 0.0 && l1 + l2 <= 1.0 {
                // In-triangle barycentric coordinates: the distance is the
                // out-of-plane residual.
                let residual: f64 = (0..point.len())
                    .map(|k| {
                        let proj = r3[k] + l1 * u[k] + l2 * v[k];
                        (point[k] - proj) * (point[k] - proj)
                    })
                    .sum();
                Ok(residual.sqrt())
            } else {
                Ok(edges(point))
            }
        }
        m => Err(Error::DomainError(format!(
            "exact hull projection supports at most 3 rows, got {m}"
        ))),
    }
}

/// Grid-search convex-hull membership: scans the barycentric grid of the
/// given step count for a combination whose L∞ residual to `point` is within
/// `tol`. Finding one certifies membership; not finding one is evidence, not
/// proof (resolution-limited), so use planted or well-separated instances
/// when a definite "outside" answer matters.
pub fn in_hull_grid(point: &[f64], rows: &[ChoiceDistribution], steps: usize, tol: f64) -> bool {
    let rows: Vec<&[f64]> = rows.iter().map(|r| r.probs()).collect();
    if rows.is_empty() {
        return false;
    }
    'grid: for weights in barycentric_grid(rows.len(), steps) {
        for (k, &target) in point.iter().enumerate() {
            let mixed: f64 = weights.iter().zip(&rows).map(|(w, r)| w * r[k]).sum();
            if (mixed - target).abs() > tol {
                continue 'grid;
            }
        }
        return true;
    }
    false
}

/// Exhaustive-search maximality verdict, the reference answer for
/// [`crate::aggregation::is_maximal`].
///
/// A row `ρ` is maximal when some weight vector `y` on the agent simplex puts
/// all of `supp(ρ)` inside `argmax_x (yᵀR)_x`, `R` the agent-row matrix. The
/// feasible `y` form a polytope whose every vertex lies on `m − 1`
/// hyperplanes drawn from the simplex facets `y_i = 0` and the pairwise tie
/// planes `(yᵀR)_a = (yᵀR)_b`; enumerating all such intersections (plus a
/// fine simplex grid, which also covers full-dimensional feasible sets)
/// therefore decides the question for up to 4 agents. Candidate weights are
/// screened with slack tolerance `tol` on the argmax condition.
pub fn maximal_by_search(
    rho: &ChoiceDistribution,
    agents: &[ChoiceDistribution],
    tol: f64,
) -> Result<bool> {
    if agents.is_empty() {
        return Err(Error::EmptyInput("agent rows"));
    }
    let m = agents.len();
    if m > 4 {
        return Err(Error::DomainError(format!(
            "weight search supports at most 4 agents, got {m}"
        )));
    }
    for a in agents {
        if !a.menu().approx_eq(rho.menu(), 1e-12) {
            return Err(Error::MenuMismatch);
        }
    }
    let support = rho.support(1e-12);
    if support.is_empty() {
        return Ok(true);
    }
    let rows: Vec<&[f64]> = agents.iter().map(|r| r.probs()).collect();
    let n = rho.probs().len();

    // Hyperplane pool: simplex facets and pairwise tie planes.
    let mut planes: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        planes.push(e);
    }
    for a in 0..n {
        for b in a + 1..n {
            planes.push((0..m).map(|i| rows[i][a] - rows[i][b]).collect());
        }
    }

    // Candidates: the barycentric grid plus every (m − 1)-fold hyperplane
    // intersection with the normalization plane.
    let grid_steps = if m <= 3 { 120 } else { 40 };
    let mut candidates = barycentric_grid(m, grid_steps);
    let mut chosen = vec![0usize; m.saturating_sub(1)];
    enumerate_intersections(&planes, &mut chosen, 0, 0, m, &mut candidates);

    let passes = |y: &[f64]| -> bool {
        let scores: Vec<f64> = (0..n)
            .map(|x| (0..m).map(|i| y[i] * rows[i][x]).sum())
            .collect();
        let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        support.iter().all(|&s| scores[s] >= best - tol)
    };
    Ok(candidates.iter().any(|y| passes(y)))
}

fn enumerate_intersections(
    planes: &[Vec<f64>],
    chosen: &mut Vec<usize>,
    depth: usize,
    start: usize,
    m: usize,
    out: &mut Vec<Vec<f64>>,
) {
    if depth == chosen.len() {
        // Solve: chosen hyperplanes at zero, coordinates summing to one.
        let mut a: Vec<Vec<f64>> = chosen.iter().map(|&p| planes[p].clone()).collect();
        a.push(vec![1.0; m]);
        let mut b = vec![0.0; chosen.len()];
        b.push(1.0);
        if let Some(y) = solve_small(a, b) {
            if y.iter().all(|&c| c >= -1e-9) {
                let clipped: Vec<f64> = y.iter().map(|&c| c.max(0.0)).collect();
                let total: f64 = clipped.iter().sum();
                if total > 0.0 {
                    out.push(clipped.iter().map(|&c| c / total).collect());
                }
            }
        }
        return;
    }
    for p in start..planes.len() {
        chosen[depth] = p;
        enumerate_intersections(planes, chosen, depth + 1, p + 1, m, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lottery::{make_lottery, DecisionProblem};

    fn menu(n: usize) -> DecisionProblem {
        let lotteries = (0..n)
            .map(|i| {
                let mut p = vec![0.0; n];
                p[i] = 1.0;
                make_lottery(&p).unwrap()
            })
            .collect();
        DecisionProblem::new(lotteries).unwrap()
    }

    fn row(menu: &DecisionProblem, probs: &[f64]) -> ChoiceDistribution {
        ChoiceDistribution::new(menu.clone(), probs.to_vec(), None).unwrap()
    }

    #[test]
    fn grid_covers_the_simplex() {
        let g = barycentric_grid(3, 4);
        assert_eq!(g.len(), 15);
        for y in &g {
            let total: f64 = y.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(y.iter().all(|&c| c >= 0.0));
        }
    }

    #[test]
    fn hull_distance_matches_plane_geometry() {
        let m = menu(3);
        let rows = [
            row(&m, &[1.0, 0.0, 0.0]),
            row(&m, &[0.0, 1.0, 0.0]),
            row(&m, &[0.0, 0.0, 1.0]),
        ];
        // The uniform row is the centroid of the full simplex: inside.
        assert!(hull_distance(&[1.0 / 3.0; 3], &rows).unwrap() < 1e-12);
        // A vertex is inside; the midpoint of two rows is inside.
        assert!(hull_distance(&[1.0, 0.0, 0.0], &rows).unwrap() < 1e-12);
        assert!(hull_distance(&[0.5, 0.5, 0.0], &rows[..2]).unwrap() < 1e-12);
        // Distance from a vertex to the opposite edge in this geometry is
        // the triangle height √(3/2).
        let d = hull_distance(&[1.0, 0.0, 0.0], &rows[1..]).unwrap();
        assert!((d - (1.5_f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn grid_membership_certifies_planted_combinations() {
        let m = menu(4);
        let rows = [
            row(&m, &[0.5, 0.25, 0.25, 0.0]),
            row(&m, &[0.0, 0.5, 0.25, 0.25]),
            row(&m, &[0.25, 0.0, 0.5, 0.25]),
        ];
        // λ = (1/4, 1/4, 1/2) lies on the step-120 grid.
        let planted: Vec<f64> = (0..4)
            .map(|k| {
                0.25 * rows[0].probs()[k] + 0.25 * rows[1].probs()[k] + 0.5 * rows[2].probs()[k]
            })
            .collect();
        assert!(in_hull_grid(&planted, &rows, 120, 1e-12));
        assert!(!in_hull_grid(&[1.0, 0.0, 0.0, 0.0], &rows, 120, 1e-3));
    }

    #[test]
    fn search_agrees_on_hand_checkable_supports() {
        let m = menu(3);
        let agents = [row(&m, &[1.0, 0.0, 0.0]), row(&m, &[0.0, 0.9, 0.1])];
        // {0} is maximal via y = (1, 0); {1} via y = (0, 1); {2} is not:
        // alternative 2 never beats alternative 1 under any weights.
        let cases = [
            (vec![1.0, 0.0, 0.0], true),
            (vec![0.0, 1.0, 0.0], true),
            (vec![0.0, 0.0, 1.0], false),
            (vec![0.5, 0.5, 0.0], true),
            (vec![0.0, 0.5, 0.5], false),
        ];
        for (probs, expect) in cases {
            let rho = row(&m, &probs);
            assert_eq!(
                maximal_by_search(&rho, &agents, 1e-9).unwrap(),
                expect,
                "support of {probs:?}"
            );
        }
    }

    #[test]
    fn degenerate_rows_fall_back_to_segments() {
        let m = menu(3);
        // Three collinear rows: hull is a segment.
        let rows = [
            row(&m, &[1.0, 0.0, 0.0]),
            row(&m, &[0.5, 0.5, 0.0]),
            row(&m, &[0.0, 1.0, 0.0]),
        ];
        assert!(hull_distance(&[0.25, 0.75, 0.0], &rows).unwrap() < 1e-12);
        assert!(hull_distance(&[0.0, 0.0, 1.0], &rows).unwrap() > 1.0);
    }

    #[test]
    fn oversized_inputs_are_rejected() {
        let m = menu(2);
        let rows_vec: Vec<ChoiceDistribution> = (0..5).map(|_| row(&m, &[0.5, 0.5])).collect();
        assert!(hull_distance(&[0.5, 0.5], &rows_vec).is_err());
        assert!(maximal_by_search(&rows_vec[0], &rows_vec, 1e-9).is_err());
    }
}
