//! Published table values, embedded at build time.

use serde::{Deserialize, Serialize};

use crate::tables::TableId;

/// How a computed value is compared with the published one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Abs,
    Rel,
    /// Published as "-": the state must have no bound solution.
    None,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GoldenRow {
    pub row: String,
    pub column: String,
    pub published: String,
    pub tolerance: f64,
    pub mode: Mode,
}

impl GoldenRow {
    pub fn published_value(&self) -> Option<f64> {
        self.published.parse().ok()
    }
}

fn source(id: TableId) -> Option<&'static str> {
    Some(match id {
        TableId::OverlapHy => include_str!("../data/golden/v1/overlap-hy.csv"),
        TableId::ObsHy => include_str!("../data/golden/v1/obs-hy.csv"),
        TableId::RatiosHy => include_str!("../data/golden/v1/ratios-hy.csv"),
        TableId::OverlapHo => include_str!("../data/golden/v1/overlap-ho.csv"),
        TableId::ObsHo => include_str!("../data/golden/v1/obs-ho.csv"),
        TableId::RatiosHo => include_str!("../data/golden/v1/ratios-ho.csv"),
        TableId::Eckart => include_str!("../data/golden/v1/eckart.csv"),
        TableId::LogResults => include_str!("../data/golden/v1/log-results.csv"),
        TableId::ExpResults => include_str!("../data/golden/v1/exp-results.csv"),
        TableId::FigWavefunctions => return None,
    })
}

/// Golden rows of a table in file order; empty for figure datasets.
pub fn load(id: TableId) -> Vec<GoldenRow> {
    let Some(text) = source(id) else { return Vec::new() };
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .expect("embedded golden data is well formed")
}
