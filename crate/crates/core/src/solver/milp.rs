//! Depth-first branch-and-bound over binary columns.

use super::simplex::{solve_lp, solve_with_bounds};
use super::{LinearProgram, Sense, Solution, SolveStatus, SolverConfig};

struct Node {
    lower: Vec<f64>,
    upper: Vec<f64>,
    depth: usize,
    /// Parent relaxation value, in minimization form.
    bound: f64,
    seq: usize,
}

struct Incumbent {
    value: f64,
    x: Vec<f64>,
}

/// Solves `lp` to optimality over all points whose binary columns are
/// integral. Delegates to [`solve_lp`] when there are no binaries.
///
/// Branches on the most fractional binary (lowest index on ties), explores
/// the deepest open node first and breaks depth ties by the better parent
/// bound. Leaves that are integral only within `int_tol` are re-solved with
/// their binaries fixed exactly, so reported points satisfy indicator rows
/// without the `big_m * int_tol` leak.
pub fn solve_milp(lp: &LinearProgram, cfg: &SolverConfig) -> Solution {
    if !lp.has_binaries() {
        return solve_lp(lp, cfg);
    }
    let sign = match lp.sense() {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let binaries: Vec<usize> = lp.binary_vars().map(|v| v.index()).collect();

    let mut open = vec![Node {
        lower: lp.lower().to_vec(),
        upper: lp.upper().to_vec(),
        depth: 0,
        bound: f64::NEG_INFINITY,
        seq: 0,
    }];
    let mut seq = 1usize;
    let mut incumbent: Option<Incumbent> = None;
    let mut nodes = 0usize;
    let mut iterations = 0usize;

    let prunable = |bound: f64, inc: &Option<Incumbent>| -> bool {
        inc.as_ref()
            .is_some_and(|i| bound >= i.value - 1e-9 * (1.0 + i.value.abs()))
    };

    while let Some(node) = pop_next(&mut open) {
        if prunable(node.bound, &incumbent) {
            continue;
        }
        if nodes >= cfg.max_nodes {
            let mut out = Solution::without_point(SolveStatus::NodeLimit, iterations);
            out.node_count = nodes;
            return out;
        }
        nodes += 1;
        let relax = solve_with_bounds(lp, &node.lower, &node.upper, cfg);
        iterations += relax.iteration_count;
        match relax.status {
            SolveStatus::Optimal => {}
            SolveStatus::Infeasible => continue,
            status => {
                let mut out = Solution::without_point(status, iterations);
                out.node_count = nodes;
                return out;
            }
        }
        let value = sign * relax.objective_value;
        if prunable(value, &incumbent) {
            continue;
        }

        let x = &relax.variable_values;
        let free: Vec<usize> = binaries
            .iter()
            .copied()
            .filter(|&j| node.lower[j] < node.upper[j])
            .collect();
        let most_fractional = free
            .iter()
            .map(|&j| (j, (x[j] - x[j].round()).abs()))
            .filter(|&(_, dev)| dev > cfg.int_tol)
            .fold(None, |best: Option<(usize, f64)>, (j, dev)| match best {
                Some((_, b)) if b >= dev => best,
                _ => Some((j, dev)),
            });

        let branch_on = match most_fractional {
            Some((j, _)) => Some(j),
            None => {
                let largest_dev = binaries
                    .iter()
                    .map(|&j| (j, (x[j] - x[j].round()).abs()))
                    .filter(|&(_, dev)| dev > 0.0)
                    .filter(|&(j, _)| node.lower[j] < node.upper[j] || free.is_empty())
                    .fold(None, |best: Option<(usize, f64)>, (j, dev)| match best {
                        Some((_, b)) if b >= dev => best,
                        _ => Some((j, dev)),
                    });
                match largest_dev {
                    None => {
                        offer(&mut incumbent, value, x.clone());
                        None
                    }
                    Some((j, _)) => {
                        let mut lo = node.lower.clone();
                        let mut up = node.upper.clone();
                        for &b in &binaries {
                            let r = x[b].round();
                            lo[b] = r;
                            up[b] = r;
                        }
                        let fixed = solve_with_bounds(lp, &lo, &up, cfg);
                        iterations += fixed.iteration_count;
                        let mut exact = false;
                        if fixed.status == SolveStatus::Optimal {
                            let fv = sign * fixed.objective_value;
                            exact = fv <= value + 1e-9 * (1.0 + value.abs());
                            offer(&mut incumbent, fv, fixed.variable_values);
                        }
                        // With every binary already fixed there is nothing
                        // left to branch on: the polished point is this node.
                        let settled = node.lower[j] == node.upper[j];
                        if exact || settled {
                            None
                        } else {
                            Some(j)
                        }
                    }
                }
            }
        };

        if let Some(j) = branch_on {
            let preferred = if x[j] >= 0.5 { 1.0 } else { 0.0 };
            for v in [preferred, 1.0 - preferred] {
                let mut lower = node.lower.clone();
                let mut upper = node.upper.clone();
                lower[j] = v;
                upper[j] = v;
                open.push(Node {
                    lower,
                    upper,
                    depth: node.depth + 1,
                    bound: value,
                    seq,
                });
                seq += 1;
            }
        }
    }

    match incumbent {
        Some(inc) => {
            let mut x = inc.x;
            for &b in &binaries {
                if (x[b] - x[b].round()).abs() <= cfg.int_tol {
                    x[b] = x[b].round();
                }
            }
            Solution {
                status: SolveStatus::Optimal,
                objective_value: lp.evaluate(&x),
                variable_values: x,
                iteration_count: iterations,
                node_count: nodes,
            }
        }
        None => {
            let mut out = Solution::without_point(SolveStatus::Infeasible, iterations);
            out.node_count = nodes;
            out
        }
    }
}

fn offer(incumbent: &mut Option<Incumbent>, value: f64, x: Vec<f64>) {
    if incumbent.as_ref().is_none_or(|i| value < i.value) {
        *incumbent = Some(Incumbent { value, x });
    }
}

fn pop_next(open: &mut Vec<Node>) -> Option<Node> {
    let idx = open
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            b.depth
                .cmp(&a.depth)
                .then(a.bound.total_cmp(&b.bound))
                .then(a.seq.cmp(&b.seq))
        })
        .map(|(i, _)| i)?;
    Some(open.swap_remove(idx))
}
