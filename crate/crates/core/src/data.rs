//! Observed units, CSV ingestion and slack priority rankings.
//!
//! The CSV header is `dmu,in:<name>...,out:<name>...`: a name column, then
//! every input column, then every output column. Row order is kept and acts
//! as the tie-break order for every downstream computation.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("empty input: no header row")]
    Empty,
    #[error("header column {column}: {message}")]
    Header { column: usize, message: String },
    #[error("row {row}, column {column}: {message}")]
    Cell {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}: duplicate DMU name {name:?}")]
    DuplicateName { row: usize, name: String },
    #[error("row {row}: DMU {name:?} has all inputs and outputs equal to zero")]
    AllZero { row: usize, name: String },
    #[error("dataset has no DMU rows")]
    NoRows,
    #[error("malformed CSV near row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("invalid priority: {0}")]
    Priority(String),
    #[error("inconsistent dimensions: {0}")]
    Dimension(String),
}

/// One decision-making unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmu {
    pub name: String,
    pub inputs: Vec<f64>,
    pub outputs: Vec<f64>,
}

/// Immutable table of `n` units with `m` inputs and `s` outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dmus: Vec<Dmu>,
    input_names: Vec<String>,
    output_names: Vec<String>,
}

impl Dataset {
    /// Validates and builds a dataset. Rows are numbered from 1 in errors.
    pub fn new(
        input_names: Vec<String>,
        output_names: Vec<String>,
        dmus: Vec<Dmu>,
    ) -> Result<Self, DataError> {
        if input_names.is_empty() || output_names.is_empty() {
            return Err(DataError::Dimension(
                "at least one input and one output are required".into(),
            ));
        }
        if dmus.is_empty() {
            return Err(DataError::NoRows);
        }
        let mut seen = HashSet::new();
        for (k, dmu) in dmus.iter().enumerate() {
            let row = k + 1;
            if dmu.inputs.len() != input_names.len() || dmu.outputs.len() != output_names.len() {
                return Err(DataError::Dimension(format!(
                    "DMU {:?} has {} inputs and {} outputs, expected {} and {}",
                    dmu.name,
                    dmu.inputs.len(),
                    dmu.outputs.len(),
                    input_names.len(),
                    output_names.len()
                )));
            }
            if dmu.name.is_empty() {
                return Err(DataError::Cell {
                    row,
                    column: 1,
                    message: "empty DMU name".into(),
                });
            }
            for (c, &v) in dmu.inputs.iter().chain(&dmu.outputs).enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(DataError::Cell {
                        row,
                        column: c + 2,
                        message: format!("value {v} is not a finite nonnegative number"),
                    });
                }
            }
            if dmu.inputs.iter().chain(&dmu.outputs).all(|&v| v == 0.0) {
                return Err(DataError::AllZero {
                    row,
                    name: dmu.name.clone(),
                });
            }
            if !seen.insert(dmu.name.as_str()) {
                return Err(DataError::DuplicateName {
                    row,
                    name: dmu.name.clone(),
                });
            }
        }
        Ok(Self {
            dmus,
            input_names,
            output_names,
        })
    }

    pub fn dmus(&self) -> &[Dmu] {
        &self.dmus
    }

    pub fn dmu(&self, j: usize) -> &Dmu {
        &self.dmus[j]
    }

    pub fn len(&self) -> usize {
        self.dmus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dmus.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.output_names.len()
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.dmus.iter().position(|d| d.name == name)
    }

    /// Returns a copy with `extra` appended as the last unit.
    pub fn with_appended(&self, extra: Dmu) -> Result<Self, DataError> {
        let mut dmus = self.dmus.clone();
        dmus.push(extra);
        Self::new(self.input_names.clone(), self.output_names.clone(), dmus)
    }

    /// Returns a copy with units reordered so that new position `k` holds old unit `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            dmus: order.iter().map(|&j| self.dmus[j].clone()).collect(),
            input_names: self.input_names.clone(),
            output_names: self.output_names.clone(),
        }
    }

    /// Labels of all slacks: every input, then every output.
    pub fn slack_labels(&self) -> Vec<SlackLabel> {
        (0..self.num_inputs())
            .map(SlackLabel::Input)
            .chain((0..self.num_outputs()).map(SlackLabel::Output))
            .collect()
    }

    pub fn slack_label_name(&self, label: SlackLabel) -> String {
        match label {
            SlackLabel::Input(i) => format!("in:{}", self.input_names[i]),
            SlackLabel::Output(r) => format!("out:{}", self.output_names[r]),
        }
    }

    /// Writes the dataset in the same CSV layout [`load_dataset`] accepts.
    /// Values use the shortest representation that round-trips exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dmu");
        for n in &self.input_names {
            out.push_str(",in:");
            out.push_str(n);
        }
        for n in &self.output_names {
            out.push_str(",out:");
            out.push_str(n);
        }
        out.push('\n');
        for d in &self.dmus {
            out.push_str(&d.name);
            for v in d.inputs.iter().chain(&d.outputs) {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Reads a dataset from CSV text.
pub fn load_dataset<R: Read>(source: R) -> Result<Dataset, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        None => return Err(DataError::Empty),
        Some(r) => r.map_err(|e| csv_error(&e, 1))?,
    };
    if header.len() == 1 && header.get(0) == Some("") {
        return Err(DataError::Empty);
    }
    let (input_names, output_names) = parse_header(&header)?;
    let width = 1 + input_names.len() + output_names.len();

    let mut dmus = Vec::new();
    for (k, rec) in records.enumerate() {
        let row = k + 1;
        let rec = rec.map_err(|e| csv_error(&e, row + 1))?;
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        if rec.len() != width {
            return Err(DataError::Ragged {
                row,
                expected: width,
                found: rec.len(),
            });
        }
        let mut values = Vec::with_capacity(width - 1);
        for c in 1..width {
            let cell = &rec[c];
            let v: f64 = cell.parse().map_err(|_| DataError::Cell {
                row,
                column: c + 1,
                message: format!("{cell:?} is not a number"),
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(DataError::Cell {
                    row,
                    column: c + 1,
                    message: format!("value {cell} must be finite and nonnegative"),
                });
            }
            values.push(v);
        }
        let outputs = values.split_off(input_names.len());
        dmus.push(Dmu {
            name: rec[0].to_string(),
            inputs: values,
            outputs,
        });
    }
    Dataset::new(input_names, output_names, dmus)
}

fn csv_error(e: &csv::Error, fallback_row: usize) -> DataError {
    let row = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback_row);
    DataError::Csv {
        row,
        message: e.to_string(),
    }
}

fn parse_header(header: &csv::StringRecord) -> Result<(Vec<String>, Vec<String>), DataError> {
    if header.get(0) != Some("dmu") {
        return Err(DataError::Header {
            column: 1,
            message: format!("expected \"dmu\", found {:?}", header.get(0).unwrap_or("")),
        });
    }
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut names = HashSet::new();
    for (c, field) in header.iter().enumerate().skip(1) {
        let column = c + 1;
        let (is_input, name) = if let Some(n) = field.strip_prefix("in:") {
            (true, n)
        } else if let Some(n) = field.strip_prefix("out:") {
            (false, n)
        } else {
            return Err(DataError::Header {
                column,
                message: format!("{field:?} must start with \"in:\" or \"out:\""),
            });
        };
        if name.is_empty() {
            return Err(DataError::Header {
                column,
                message: "empty measure name".into(),
            });
        }
        if is_input && !outputs.is_empty() {
            return Err(DataError::Header {
                column,
                message: "input columns must precede output columns".into(),
            });
        }
        if !names.insert(field) {
            return Err(DataError::Header {
                column,
                message: format!("duplicate column {field:?}"),
            });
        }
        if is_input {
            inputs.push(name.to_string());
        } else {
            outputs.push(name.to_string());
        }
    }
    if inputs.is_empty() {
        return Err(DataError::Header {
            column: 2,
            message: "no input columns".into(),
        });
    }
    if outputs.is_empty() {
        return Err(DataError::Header {
            column: header.len() + 1,
            message: "no output columns".into(),
        });
    }
    Ok((inputs, outputs))
}

/// Identifies one slack: input excess `i` or output shortfall `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlackLabel {
    Input(usize),
    Output(usize),
}

impl SlackLabel {
    /// Position in the slack vector `(s_1..s_m, s_{m+1}..s_{m+s})`.
    pub fn position(self, num_inputs: usize) -> usize {
        match self {
            SlackLabel::Input(i) => i,
            SlackLabel::Output(r) => num_inputs + r,
        }
    }
}

impl fmt::Display for SlackLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlackLabel::Input(i) => write!(f, "s_in[{i}]"),
            SlackLabel::Output(r) => write!(f, "s_out[{r}]"),
        }
    }
}

/// Order in which slacks are minimized; element 0 has rank 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityRanking {
    order: Vec<SlackLabel>,
}

impl PriorityRanking {
    pub fn new(order: Vec<SlackLabel>, num_inputs: usize, num_outputs: usize) -> Result<Self, DataError> {
        if order.len() != num_inputs + num_outputs {
            return Err(DataError::Priority(format!(
                "{} labels given, {} slacks declared",
                order.len(),
                num_inputs + num_outputs
            )));
        }
        let mut seen = vec![false; num_inputs + num_outputs];
        for &label in &order {
            let in_range = match label {
                SlackLabel::Input(i) => i < num_inputs,
                SlackLabel::Output(r) => r < num_outputs,
            };
            if !in_range {
                return Err(DataError::Priority(format!("{label} is not a declared slack")));
            }
            let p = label.position(num_inputs);
            if seen[p] {
                return Err(DataError::Priority(format!("{label} appears twice")));
            }
            seen[p] = true;
        }
        Ok(Self { order })
    }

    /// Parses `default` or a comma-separated list of column labels such as
    /// `out:revenue,in:staff`.
    pub fn parse(spec: &str, dataset: &Dataset) -> Result<Self, DataError> {
        let spec = spec.trim();
        if spec == "default" {
            return Ok(default_priority(dataset.num_inputs(), dataset.num_outputs()));
        }
        let mut order = Vec::new();
        for token in spec.split(',').map(str::trim) {
            let label = if let Some(n) = token.strip_prefix("in:") {
                dataset
                    .input_names()
                    .iter()
                    .position(|x| x == n)
                    .map(SlackLabel::Input)
            } else if let Some(n) = token.strip_prefix("out:") {
                dataset
                    .output_names()
                    .iter()
                    .position(|x| x == n)
                    .map(SlackLabel::Output)
            } else {
                None
            };
            order.push(label.ok_or_else(|| {
                DataError::Priority(format!("unknown slack label {token:?}"))
            })?);
        }
        Self::new(order, dataset.num_inputs(), dataset.num_outputs())
    }

    pub fn order(&self) -> &[SlackLabel] {
        &self.order
    }
}

/// Outputs before inputs, each group in declaration order.
pub fn default_priority(num_inputs: usize, num_outputs: usize) -> PriorityRanking {
    let order = (0..num_outputs)
        .map(SlackLabel::Output)
        .chain((0..num_inputs).map(SlackLabel::Input))
        .collect();
    PriorityRanking { order }
}
