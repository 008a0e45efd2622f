//! State-dependent and stateless discrete memoryless channels.
//!
//! An [`SdDmc`] holds the transition tensor `W[s][x][y]` together with the
//! state distribution `Q`. Construction always validates; once built, a
//! channel satisfies every standing assumption below and is immutable.
//!
//! Zeros are structural: an entry is "impossible" exactly when it is `0.0`
//! in the source document. No tolerance is ever applied to decide whether a
//! transition can happen.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-sum tolerance for stochastic rows and for `Q`.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// Serialized channel document.
///
/// `W` is indexed `[state][input][output]`. Labels are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<String>>,
    #[serde(rename = "Q")]
    pub q: Vec<f64>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<Vec<f64>>>,
}

impl ChannelDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Standing assumption checked by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    /// `W` is a rectangular `|S| x |X| x |Y|` tensor and `Q` has `|S|` entries.
    Shape,
    /// Label lists, when present, match the alphabet sizes.
    Labels,
    /// `|X| >= 2`, `|Y| >= 2`, `|S| >= 1`.
    AlphabetSizes,
    /// Every entry of `W` and `Q` is a finite number in `[0, 1]`.
    EntryRange,
    /// Every row `W[s][x][.]` sums to one.
    RowStochastic,
    /// Every state has strictly positive probability.
    StatesPositive,
    /// `Q` sums to one.
    StateDistribution,
    /// Every output is produced by some input in some state.
    OutputsReachable,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Assumption::Shape => "shape",
            Assumption::Labels => "labels",
            Assumption::AlphabetSizes => "alphabet_sizes",
            Assumption::EntryRange => "entry_range",
            Assumption::RowStochastic => "row_stochastic",
            Assumption::StatesPositive => "states_positive",
            Assumption::StateDistribution => "state_distribution",
            Assumption::OutputsReachable => "outputs_reachable",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    /// Indices into the document, e.g. `[s, x]` for a row or `[y]` for an output.
    pub indices: Vec<usize>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub assumption: Assumption,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offenders: Vec<Offender>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub checks: Vec<AssumptionCheck>,
}

impl ValidationReport {
    pub fn failed(&self) -> impl Iterator<Item = &AssumptionCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, assumption: Assumption) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| c.assumption == assumption)
    }

    pub fn summary(&self) -> String {
        if self.valid {
            return "all assumptions hold".to_owned();
        }
        self.failed()
            .map(|c| match c.offenders.first() {
                Some(o) => format!("{} at {:?}: {}", c.assumption, o.indices, o.note),
                None => c.assumption.to_string(),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

struct Checks(Vec<AssumptionCheck>);

impl Checks {
    fn push(&mut self, assumption: Assumption, offenders: Vec<Offender>) {
        self.0.push(AssumptionCheck {
            assumption,
            passed: offenders.is_empty(),
            offenders,
        });
    }

    fn finish(self) -> ValidationReport {
        ValidationReport {
            valid: self.0.iter().all(|c| c.passed),
            checks: self.0,
        }
    }
}

fn offender(indices: Vec<usize>, note: impl Into<String>) -> Offender {
    Offender {
        indices,
        note: note.into(),
    }
}

/// Checks every standing assumption on a channel document.
///
/// Structural checks run first; when the tensor is not rectangular the
/// numeric checks are skipped and the report only carries the shape failure.
pub fn validate(doc: &ChannelDoc) -> ValidationReport {
    let mut checks = Checks(Vec::new());

    let ns = doc.w.len();
    let nx = doc.w.first().map_or(0, Vec::len);
    let ny = doc
        .w
        .first()
        .and_then(|rows| rows.first())
        .map_or(0, Vec::len);

    let mut shape = Vec::new();
    if doc.q.len() != ns {
        shape.push(offender(
            vec![],
            format!("Q has {} entries but W has {} states", doc.q.len(), ns),
        ));
    }
    for (s, rows) in doc.w.iter().enumerate() {
        if rows.len() != nx {
            shape.push(offender(
                vec![s],
                format!("state has {} input rows, expected {}", rows.len(), nx),
            ));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != ny {
                shape.push(offender(
                    vec![s, x],
                    format!("row has {} outputs, expected {}", row.len(), ny),
                ));
            }
        }
    }
    let rectangular = shape.is_empty();
    checks.push(Assumption::Shape, shape);
    if !rectangular {
        return checks.finish();
    }

    let mut labels = Vec::new();
    for (name, list, size) in [
        ("inputs", &doc.inputs, nx),
        ("outputs", &doc.outputs, ny),
        ("states", &doc.states, ns),
    ] {
        if let Some(list) = list {
            if list.len() != size {
                labels.push(offender(
                    vec![],
                    format!("{} has {} labels for {} letters", name, list.len(), size),
                ));
            }
        }
    }
    checks.push(Assumption::Labels, labels);

    let mut sizes = Vec::new();
    if nx < 2 {
        sizes.push(offender(vec![], format!("|X| = {nx} < 2")));
    }
    if ny < 2 {
        sizes.push(offender(vec![], format!("|Y| = {ny} < 2")));
    }
    if ns < 1 {
        sizes.push(offender(vec![], "|S| = 0"));
    }
    checks.push(Assumption::AlphabetSizes, sizes);

    let mut range = Vec::new();
    for (s, rows) in doc.w.iter().enumerate() {
        for (x, row) in rows.iter().enumerate() {
            for (y, &p) in row.iter().enumerate() {
                if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                    range.push(offender(vec![s, x, y], format!("W entry {p} outside [0, 1]")));
                }
            }
        }
    }
    for (s, &p) in doc.q.iter().enumerate() {
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            range.push(offender(vec![s], format!("Q entry {p} outside [0, 1]")));
        }
    }
    checks.push(Assumption::EntryRange, range);

    let mut rows_bad = Vec::new();
    for (s, rows) in doc.w.iter().enumerate() {
        for (x, row) in rows.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if !((sum - 1.0).abs() <= STOCHASTIC_TOL) {
                rows_bad.push(offender(vec![s, x], format!("row sums to {sum}")));
            }
        }
    }
    checks.push(Assumption::RowStochastic, rows_bad);

    let zero_states = doc
        .q
        .iter()
        .enumerate()
        .filter(|(_, &p)| !(p > 0.0))
        .map(|(s, &p)| offender(vec![s], format!("Q(s) = {p} is not positive")))
        .collect();
    checks.push(Assumption::StatesPositive, zero_states);

    let q_sum: f64 = doc.q.iter().sum();
    let q_bad = if (q_sum - 1.0).abs() <= STOCHASTIC_TOL {
        vec![]
    } else {
        vec![offender(vec![], format!("Q sums to {q_sum}"))]
    };
    checks.push(Assumption::StateDistribution, q_bad);

    let unreachable = (0..ny)
        .filter(|&y| !doc.w.iter().flatten().any(|row| row[y] > 0.0))
        .map(|y| offender(vec![y], "output is never produced"))
        .collect();
    checks.push(Assumption::OutputsReachable, unreachable);

    checks.finish()
}

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A state-dependent discrete memoryless channel with i.i.d. states.
#[derive(Debug, Clone, PartialEq)]
pub struct SdDmc {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    s_labels: Vec<String>,
    q: Vec<f64>,
    /// Flat `[s][x][y]`.
    w: Vec<f64>,
}

impl SdDmc {
    /// Builds a channel from `W[s][x][y]` and `Q`, with default labels.
    pub fn new(w: Vec<Vec<Vec<f64>>>, q: Vec<f64>) -> Result<Self> {
        Self::from_doc(ChannelDoc {
            inputs: None,
            outputs: None,
            states: None,
            q,
            w,
        })
    }

    pub fn from_doc(doc: ChannelDoc) -> Result<Self> {
        let report = validate(&doc);
        if !report.valid {
            return Err(Error::Validation(report));
        }
        let ns = doc.w.len();
        let nx = doc.w[0].len();
        let ny = doc.w[0][0].len();
        Ok(SdDmc {
            x_labels: doc.inputs.unwrap_or_else(|| default_labels("x", nx)),
            y_labels: doc.outputs.unwrap_or_else(|| default_labels("y", ny)),
            s_labels: doc.states.unwrap_or_else(|| default_labels("s", ns)),
            q: doc.q,
            w: doc.w.into_iter().flatten().flatten().collect(),
        })
    }

    pub fn to_doc(&self) -> ChannelDoc {
        let w = (0..self.num_states())
            .map(|s| {
                (0..self.num_inputs())
                    .map(|x| self.row(x, s).to_vec())
                    .collect()
            })
            .collect();
        ChannelDoc {
            inputs: Some(self.x_labels.clone()),
            outputs: Some(self.y_labels.clone()),
            states: Some(self.s_labels.clone()),
            q: self.q.clone(),
            w,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("channel document serializes")
    }

    pub fn num_inputs(&self) -> usize {
        self.x_labels.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.y_labels.len()
    }

    pub fn num_states(&self) -> usize {
        self.s_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    pub fn s_labels(&self) -> &[String] {
        &self.s_labels
    }

    pub fn state_probs(&self) -> &[f64] {
        &self.q
    }

    /// `W(y | x, s)`. Panics on out-of-range indices.
    #[inline]
    pub fn prob(&self, y: usize, x: usize, s: usize) -> f64 {
        self.row(x, s)[y]
    }

    /// True when `W(y | x, s) > 0`.
    #[inline]
    pub fn reaches(&self, y: usize, x: usize, s: usize) -> bool {
        self.prob(y, x, s) > 0.0
    }

    /// The output distribution `W(. | x, s)`.
    #[inline]
    pub fn row(&self, x: usize, s: usize) -> &[f64] {
        let ny = self.num_outputs();
        let start = (s * self.num_inputs() + x) * ny;
        &self.w[start..start + ny]
    }

    /// Outputs reachable from input `x` in state `s`.
    pub fn support(&self, x: usize, s: usize) -> Result<Vec<usize>> {
        check_index("input", x, self.num_inputs())?;
        check_index("state", s, self.num_states())?;
        Ok(support_of(self.row(x, s)))
    }

    /// The stateless channel `W(. | ., s)` for a single state.
    pub fn state_channel(&self, s: usize) -> Result<Dmc> {
        check_index("state", s, self.num_states())?;
        let rows = (0..self.num_inputs())
            .map(|x| self.row(x, s).to_vec())
            .collect();
        Dmc::with_labels(rows, self.x_labels.clone(), self.y_labels.clone())
    }
}

/// Parses and validates a channel document.
pub fn load_channel(text: &str) -> Result<SdDmc> {
    SdDmc::from_doc(ChannelDoc::parse(text)?)
}

pub(crate) fn check_index(what: &'static str, index: usize, size: usize) -> Result<()> {
    if index < size {
        Ok(())
    } else {
        Err(Error::Index { what, index, size })
    }
}

pub(crate) fn support_of(row: &[f64]) -> Vec<usize> {
    row.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(y, _)| y)
        .collect()
}

/// A stateless discrete memoryless channel `W[x][y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    /// Flat `[x][y]`.
    w: Vec<f64>,
}

/// Serialized form of a [`Dmc`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmcDoc {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
}

impl Dmc {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map_or(0, Vec::len);
        Self::with_labels(rows, default_labels("x", nx), default_labels("y", ny))
    }

    pub fn with_labels(rows: Vec<Vec<f64>>, x_labels: Vec<String>, y_labels: Vec<String>) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map_or(0, Vec::len);
        let mut checks = Checks(Vec::new());
        let mut shape = Vec::new();
        if nx == 0 || ny == 0 {
            shape.push(offender(vec![], "empty alphabet"));
        }
        if x_labels.len() != nx || y_labels.len() != ny {
            shape.push(offender(vec![], "label count does not match alphabet size"));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != ny {
                shape.push(offender(vec![x], format!("row has {} outputs, expected {}", row.len(), ny)));
            }
        }
        let ok = shape.is_empty();
        checks.push(Assumption::Shape, shape);
        if ok {
            let mut range = Vec::new();
            let mut sums = Vec::new();
            for (x, row) in rows.iter().enumerate() {
                for (y, &p) in row.iter().enumerate() {
                    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                        range.push(offender(vec![x, y], format!("entry {p} outside [0, 1]")));
                    }
                }
                let sum: f64 = row.iter().sum();
                if !((sum - 1.0).abs() <= STOCHASTIC_TOL) {
                    sums.push(offender(vec![x], format!("row sums to {sum}")));
                }
            }
            checks.push(Assumption::EntryRange, range);
            checks.push(Assumption::RowStochastic, sums);
        }
        let report = checks.finish();
        if !report.valid {
            return Err(Error::Validation(report));
        }
        Ok(Dmc {
            x_labels,
            y_labels,
            w: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_doc(doc: DmcDoc) -> Result<Self> {
        Self::with_labels(doc.w, doc.inputs, doc.outputs)
    }

    pub fn to_doc(&self) -> DmcDoc {
        DmcDoc {
            inputs: self.x_labels.clone(),
            outputs: self.y_labels.clone(),
            w: self.rows().map(<[f64]>::to_vec).collect(),
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.x_labels.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.y_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    #[inline]
    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.row(x)[y]
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[f64] {
        let ny = self.num_outputs();
        &self.w[x * ny..(x + 1) * ny]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.w.chunks_exact(self.num_outputs())
    }

    pub fn support(&self, x: usize) -> Result<Vec<usize>> {
        check_index("input", x, self.num_inputs())?;
        Ok(support_of(self.row(x)))
    }

    /// True when every output is produced by at least one input.
    pub fn outputs_reachable(&self) -> bool {
        (0..self.num_outputs()).all(|y| self.rows().any(|row| row[y] > 0.0))
    }
}
