use super::SolverError;

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Relation between a row activity and its right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// Handle to a column of a [`LinearProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// One sparse row `sum(coeff * x) <relation> rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A linear program with explicit variable bounds and an optional set of
/// binary columns.
///
/// Bounds may be infinite on either side. Binary columns always carry bounds
/// inside `[0, 1]`; the LP path treats them as continuous and the
/// branch-and-bound path enforces integrality.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<f64>,
    rows: Vec<Row>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    binary: Vec<bool>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            objective: Vec::new(),
            rows: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            binary: Vec::new(),
        }
    }

    /// Builds a program from dense data, validating every dimension.
    #[allow(clippy::too_many_arguments)]
    pub fn from_dense(
        sense: Sense,
        objective: Vec<f64>,
        matrix: &[Vec<f64>],
        relations: &[Relation],
        rhs: &[f64],
        lower: Vec<f64>,
        upper: Vec<f64>,
        binary: Vec<bool>,
    ) -> Result<Self, SolverError> {
        let n = objective.len();
        if lower.len() != n || upper.len() != n || binary.len() != n {
            return Err(SolverError::Dimension(format!(
                "objective has {n} entries but bounds/binary mask have {}/{}/{}",
                lower.len(),
                upper.len(),
                binary.len()
            )));
        }
        if matrix.len() != relations.len() || matrix.len() != rhs.len() {
            return Err(SolverError::Dimension(format!(
                "{} matrix rows, {} relations, {} right-hand sides",
                matrix.len(),
                relations.len(),
                rhs.len()
            )));
        }
        let mut lp = Self::new(sense);
        for j in 0..n {
            if binary[j] {
                if lower[j] < 0.0 || upper[j] > 1.0 {
                    return Err(SolverError::Bounds(format!(
                        "binary column {j} has bounds [{}, {}] outside [0, 1]",
                        lower[j], upper[j]
                    )));
                }
                let id = lp.add_binary(objective[j]);
                lp.set_bounds(id, lower[j], upper[j])?;
            } else {
                lp.add_var(lower[j], upper[j], objective[j])?;
            }
        }
        for (i, coeffs) in matrix.iter().enumerate() {
            if coeffs.len() != n {
                return Err(SolverError::Dimension(format!(
                    "row {i} has {} coefficients, expected {n}",
                    coeffs.len()
                )));
            }
            let terms: Vec<(VarId, f64)> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0.0)
                .map(|(j, &a)| (VarId(j), a))
                .collect();
            lp.add_row(&terms, relations[i], rhs[i])?;
        }
        Ok(lp)
    }

    /// Adds a continuous column with bounds `[lower, upper]`.
    pub fn add_var(&mut self, lower: f64, upper: f64, cost: f64) -> Result<VarId, SolverError> {
        check_bounds(self.objective.len(), lower, upper)?;
        if !cost.is_finite() {
            return Err(SolverError::Dimension(format!("non-finite cost {cost}")));
        }
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.binary.push(false);
        Ok(VarId(self.objective.len() - 1))
    }

    /// Adds a binary column with bounds `[0, 1]`.
    pub fn add_binary(&mut self, cost: f64) -> VarId {
        self.objective.push(cost);
        self.lower.push(0.0);
        self.upper.push(1.0);
        self.binary.push(true);
        VarId(self.objective.len() - 1)
    }

    pub fn add_row(
        &mut self,
        terms: &[(VarId, f64)],
        relation: Relation,
        rhs: f64,
    ) -> Result<(), SolverError> {
        if !rhs.is_finite() {
            return Err(SolverError::Dimension(format!(
                "row {} has non-finite rhs {rhs}",
                self.rows.len()
            )));
        }
        let mut row = Vec::with_capacity(terms.len());
        for &(VarId(j), a) in terms {
            if j >= self.objective.len() {
                return Err(SolverError::Dimension(format!(
                    "row {} references column {j} but only {} exist",
                    self.rows.len(),
                    self.objective.len()
                )));
            }
            if !a.is_finite() {
                return Err(SolverError::Dimension(format!(
                    "row {} has non-finite coefficient on column {j}",
                    self.rows.len()
                )));
            }
            if a != 0.0 {
                row.push((j, a));
            }
        }
        self.rows.push(Row {
            terms: row,
            relation,
            rhs,
        });
        Ok(())
    }

    pub fn set_bounds(&mut self, var: VarId, lower: f64, upper: f64) -> Result<(), SolverError> {
        let j = var.0;
        if j >= self.objective.len() {
            return Err(SolverError::Dimension(format!("no column {j}")));
        }
        check_bounds(j, lower, upper)?;
        if self.binary[j] && (lower < 0.0 || upper > 1.0) {
            return Err(SolverError::Bounds(format!(
                "binary column {j} cannot take bounds [{lower}, {upper}]"
            )));
        }
        self.lower[j] = lower;
        self.upper[j] = upper;
        Ok(())
    }

    pub fn set_cost(&mut self, var: VarId, cost: f64) {
        self.objective[var.0] = cost;
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn is_binary(&self, var: VarId) -> bool {
        self.binary[var.0]
    }

    pub fn binary_vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.binary
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| VarId(j))
    }

    pub fn has_binaries(&self) -> bool {
        self.binary.iter().any(|&b| b)
    }

    /// Objective value of `x` in the program's own sense.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.rows {
            let act: f64 = row.terms.iter().map(|&(j, a)| a * x[j]).sum();
            let v = match row.relation {
                Relation::Eq => (act - row.rhs).abs(),
                Relation::Le => (act - row.rhs).max(0.0),
                Relation::Ge => (row.rhs - act).max(0.0),
            };
            worst = worst.max(v);
        }
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        worst
    }
}

fn check_bounds(j: usize, lower: f64, upper: f64) -> Result<(), SolverError> {
    if lower.is_nan() || upper.is_nan() || lower > upper || lower == f64::INFINITY || upper == f64::NEG_INFINITY
    {
        return Err(SolverError::Bounds(format!(
            "column {j} has invalid bounds [{lower}, {upper}]"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_bounds() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        assert!(matches!(lp.add_var(1.0, 0.0, 0.0), Err(SolverError::Bounds(_))));
    }

    #[test]
    fn rejects_unknown_column_in_row() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.add_var(0.0, 1.0, 1.0).unwrap();
        assert!(lp.add_row(&[(x, 1.0), (VarId(3), 1.0)], Relation::Le, 1.0).is_err());
    }

    #[test]
    fn dense_dimension_mismatch() {
        let err = LinearProgram::from_dense(
            Sense::Minimize,
            vec![1.0, 1.0],
            &[vec![1.0]],
            &[Relation::Eq],
            &[1.0],
            vec![0.0; 2],
            vec![1.0; 2],
            vec![false; 2],
        );
        assert!(matches!(err, Err(SolverError::Dimension(_))));
    }

    #[test]
    fn binary_bounds_must_stay_in_unit_box() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        let b = lp.add_binary(0.0);
        assert!(lp.set_bounds(b, 0.0, 2.0).is_err());
        assert!(lp.set_bounds(b, 1.0, 1.0).is_ok());
    }
}
