//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use dea_core::solver::{solve_lp, LinearProgram, Relation, Sense, SolveStatus, SolverConfig, VarId};
use dea_core::{load_dataset, Dataset, Dmu};
use rand::rngs::StdRng;
use rand::Rng;

pub const TABLE_4_1: &str = "dmu,in:x,out:y
DMU1,1,2
DMU2,2,5
DMU3,3,6
DMU4,5,8
DMU5,8,8
DMU6,2,1
DMU7,3,3
DMU8,6,4
";

pub const TABLE_3_1_1: &str = "dmu,in:x,out:y
A,2,2
B,3,5
C,6,6
D,4,4
";

pub fn table_4_1() -> Dataset {
    load_dataset(TABLE_4_1.as_bytes()).unwrap()
}

pub fn table_3_1_1() -> Dataset {
    load_dataset(TABLE_3_1_1.as_bytes()).unwrap()
}

pub fn random_dataset(rng: &mut StdRng, n: usize, m: usize, s: usize) -> Dataset {
    let dmus = (0..n)
        .map(|j| Dmu {
            name: format!("u{j}"),
            inputs: (0..m).map(|_| rng.gen_range(1.0..=100.0)).collect(),
            outputs: (0..s).map(|_| rng.gen_range(1.0..=100.0)).collect(),
        })
        .collect();
    Dataset::new(
        (0..m).map(|i| format!("x{i}")).collect(),
        (0..s).map(|r| format!("y{r}")).collect(),
        dmus,
    )
    .unwrap()
}

/// Dense box-bounded equality LP, kept alongside its data for the oracle.
pub struct BoxLp {
    pub sense: Sense,
    pub cost: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxLp {
    pub fn random(rng: &mut StdRng) -> Self {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=5usize.min(n));
        let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..1.0)).collect();
        let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.5..5.0)).collect();
        let a: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let b = if rng.gen_bool(0.8) {
            let x0: Vec<f64> = (0..n).map(|j| rng.gen_range(lower[j]..upper[j])).collect();
            a.iter()
                .map(|row| row.iter().zip(&x0).map(|(p, q)| p * q).sum())
                .collect()
        } else {
            (0..m).map(|_| rng.gen_range(-20.0..20.0)).collect()
        };
        let sense = if rng.gen_bool(0.5) {
            Sense::Minimize
        } else {
            Sense::Maximize
        };
        let cost = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        Self {
            sense,
            cost,
            a,
            b,
            lower,
            upper,
        }
    }

    pub fn to_lp(&self) -> LinearProgram {
        let n = self.cost.len();
        LinearProgram::from_dense(
            self.sense,
            self.cost.clone(),
            &self.a,
            &vec![Relation::Eq; self.a.len()],
            &self.b,
            self.lower.clone(),
            self.upper.clone(),
            vec![false; n],
        )
        .unwrap()
    }

    /// Best objective over all basic feasible solutions, `None` if there is none.
    ///
    /// Every choice of `m` basic columns is tried with every lower/upper
    /// assignment of the remaining columns.
    pub fn enumerate_bases(&self) -> Option<f64> {
        let n = self.cost.len();
        let m = self.a.len();
        let mut best: Option<f64> = None;
        for basis in combinations(n, m) {
            let nonbasic: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
            for mask in 0u32..(1 << nonbasic.len()) {
                let mut x = vec![0.0; n];
                for (k, &j) in nonbasic.iter().enumerate() {
                    x[j] = if mask >> k & 1 == 1 {
                        self.upper[j]
                    } else {
                        self.lower[j]
                    };
                }
                let rhs: Vec<f64> = (0..m)
                    .map(|i| {
                        self.b[i] - nonbasic.iter().map(|&j| self.a[i][j] * x[j]).sum::<f64>()
                    })
                    .collect();
                let bmat: Vec<Vec<f64>> = (0..m)
                    .map(|i| basis.iter().map(|&j| self.a[i][j]).collect())
                    .collect();
                let Some(xb) = gauss_solve(bmat, rhs) else {
                    continue;
                };
                for (k, &j) in basis.iter().enumerate() {
                    x[j] = xb[k];
                }
                let feasible = (0..n)
                    .all(|j| x[j] >= self.lower[j] - 1e-9 && x[j] <= self.upper[j] + 1e-9);
                if !feasible {
                    continue;
                }
                let obj: f64 = self.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(match (best, self.sense) {
                    (None, _) => obj,
                    (Some(b), Sense::Minimize) => b.min(obj),
                    (Some(b), Sense::Maximize) => b.max(obj),
                });
            }
        }
        best
    }
}

/// Gaussian elimination with partial pivoting; `None` for a (near) singular matrix.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            for k in col..n {
                a[i][k] -= f * a[col][k];
            }
            b[i] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Random mixed-binary program with boxed continuous columns.
pub fn random_milp(rng: &mut StdRng) -> LinearProgram {
    let n_bin = rng.gen_range(1..=10);
    let n_cont = rng.gen_range(0..=3);
    let sense = if rng.gen_bool(0.5) {
        Sense::Minimize
    } else {
        Sense::Maximize
    };
    let mut lp = LinearProgram::new(sense);
    let mut vars: Vec<VarId> = (0..n_bin)
        .map(|_| lp.add_binary(rng.gen_range(-10.0..10.0)))
        .collect();
    for _ in 0..n_cont {
        vars.push(
            lp.add_var(0.0, rng.gen_range(1.0..5.0), rng.gen_range(-3.0..3.0))
                .unwrap(),
        );
    }
    let rows = rng.gen_range(1..=4);
    for _ in 0..rows {
        let terms: Vec<(VarId, f64)> = vars
            .iter()
            .filter_map(|&v| rng.gen_bool(0.7).then(|| (v, rng.gen_range(-4.0..6.0))))
            .collect();
        let (rel, rhs) = if rng.gen_bool(0.7) {
            (Relation::Le, rng.gen_range(0.0..(n_bin as f64 * 2.0)))
        } else {
            (Relation::Ge, rng.gen_range(-2.0..4.0))
        };
        lp.add_row(&terms, rel, rhs).unwrap();
    }
    if rng.gen_bool(0.3) {
        // Feasible for the relaxation, never for a binary.
        let parity = [(vars[0], 2.0)];
        lp.add_row(&parity, Relation::Eq, 1.0).unwrap();
    }
    lp
}

/// Best objective over every binary assignment, each completed by an LP.
pub fn enumerate_binaries(lp: &LinearProgram, cfg: &SolverConfig) -> (SolveStatus, f64) {
    let bins: Vec<VarId> = lp.binary_vars().collect();
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << bins.len()) {
        let mut fixed = lp.clone();
        for (k, &v) in bins.iter().enumerate() {
            let val = f64::from(mask >> k & 1);
            fixed.set_bounds(v, val, val).unwrap();
        }
        let sol = solve_lp(&fixed, cfg);
        if sol.status == SolveStatus::Optimal {
            let v = sol.objective_value;
            best = Some(match (best, lp.sense()) {
                (None, _) => v,
                (Some(b), Sense::Minimize) => b.min(v),
                (Some(b), Sense::Maximize) => b.max(v),
            });
        }
    }
    match best {
        Some(v) => (SolveStatus::Optimal, v),
        None => (SolveStatus::Infeasible, f64::NAN),
    }
}

/// Union of the supports of every convex combination of efficient units
/// that reproduces `(x, y)`.
///
/// For each subset `S` it maximizes the smallest weight `tau` over
/// combinations supported inside `S`; `S` is a realizable support when
/// `tau > 0`.
pub fn support_union_by_enumeration(
    ds: &Dataset,
    members: &[usize],
    x: &[f64],
    y: &[f64],
    cfg: &SolverConfig,
) -> Vec<usize> {
    let t = members.len();
    let mut union = vec![false; t];
    for mask in 1u32..(1 << t) {
        let subset: Vec<usize> = (0..t).filter(|k| mask >> k & 1 == 1).collect();
        let mut lp = LinearProgram::new(Sense::Maximize);
        let tau = lp.add_var(f64::NEG_INFINITY, 1.0, 1.0).unwrap();
        let lam: Vec<VarId> = subset
            .iter()
            .map(|_| lp.add_var(0.0, 1.0, 0.0).unwrap())
            .collect();
        for &l in &lam {
            lp.add_row(&[(l, 1.0), (tau, -1.0)], Relation::Ge, 0.0).unwrap();
        }
        for i in 0..ds.num_inputs() {
            let terms: Vec<_> = subset
                .iter()
                .zip(&lam)
                .map(|(&k, &l)| (l, ds.dmu(members[k]).inputs[i]))
                .collect();
            lp.add_row(&terms, Relation::Eq, x[i]).unwrap();
        }
        for r in 0..ds.num_outputs() {
            let terms: Vec<_> = subset
                .iter()
                .zip(&lam)
                .map(|(&k, &l)| (l, ds.dmu(members[k]).outputs[r]))
                .collect();
            lp.add_row(&terms, Relation::Eq, y[r]).unwrap();
        }
        let conv: Vec<_> = lam.iter().map(|&l| (l, 1.0)).collect();
        lp.add_row(&conv, Relation::Eq, 1.0).unwrap();
        let sol = solve_lp(&lp, cfg);
        if sol.status == SolveStatus::Optimal && sol.objective_value > 1e-7 {
            for &k in &subset {
                union[k] = true;
            }
        }
    }
    (0..t).filter(|&k| union[k]).map(|k| members[k]).collect()
}

/// Intersection of the horizontal line `y = level` with segment `p`-`q`.
pub fn segment_at_output(p: (f64, f64), q: (f64, f64), level: f64) -> (f64, f64) {
    let t = (level - p.1) / (q.1 - p.1);
    (p.0 + t * (q.0 - p.0), level)
}

/// Normalized intercept of the line through `p` and `q` at a point on it
/// with input `x0`: `u y - v x - w0 = 0` with `v x0 = 1`.
pub fn line_intercept(p: (f64, f64), q: (f64, f64), x0: f64) -> f64 {
    let slope = (q.1 - p.1) / (q.0 - p.0);
    let v = 1.0 / x0;
    let u = v / slope;
    // The line is y = slope * x + c, so u y - v x = u c.
    let c = p.1 - slope * p.0;
    u * c
}

/// Largest total slack over the technology: the furthest projection.
pub fn max_total_slack(ds: &Dataset, o: usize, cfg: &SolverConfig) -> f64 {
    let m = ds.num_inputs();
    let s = ds.num_outputs();
    let mut lp = LinearProgram::new(Sense::Maximize);
    let lam: Vec<VarId> = (0..ds.len())
        .map(|_| lp.add_var(0.0, f64::INFINITY, 0.0).unwrap())
        .collect();
    let sl: Vec<VarId> = (0..m + s)
        .map(|_| lp.add_var(0.0, f64::INFINITY, 1.0).unwrap())
        .collect();
    let unit = ds.dmu(o);
    for i in 0..m {
        let mut terms: Vec<_> = lam.iter().zip(ds.dmus()).map(|(&l, d)| (l, d.inputs[i])).collect();
        terms.push((sl[i], 1.0));
        lp.add_row(&terms, Relation::Eq, unit.inputs[i]).unwrap();
    }
    for r in 0..s {
        let mut terms: Vec<_> = lam.iter().zip(ds.dmus()).map(|(&l, d)| (l, d.outputs[r])).collect();
        terms.push((sl[m + r], -1.0));
        lp.add_row(&terms, Relation::Eq, unit.outputs[r]).unwrap();
    }
    let conv: Vec<_> = lam.iter().map(|&l| (l, 1.0)).collect();
    lp.add_row(&conv, Relation::Eq, 1.0).unwrap();
    let sol = solve_lp(&lp, cfg);
    assert_eq!(sol.status, SolveStatus::Optimal);
    sol.objective_value
}
