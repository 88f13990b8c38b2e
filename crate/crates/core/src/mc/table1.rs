use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    replicate_statistics, summarize, ExperimentConfig, McSummary, RepValue, Scenario, Statistic,
};
use crate::lrd::{Backend, LrdSpec, PathGenerator};
use crate::streams::{make_stream, StreamKey};
use crate::{Error, Result};

const TABLE1_TAG: u64 = 0x7461_626c_6531; // "table1"

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecords {
    pub scenario: Scenario,
    pub backend: Backend,
    /// `reps[r]` holds one value per configured statistic, in config order.
    pub reps: Vec<Vec<RepValue>>,
}

impl ScenarioRecords {
    pub fn values(&self, stat: Statistic) -> Vec<f64> {
        self.reps
            .iter()
            .filter_map(|rep| rep.iter().find(|v| v.statistic == stat))
            .map(|v| v.sup.sup_value)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Result {
    pub config: ExperimentConfig,
    /// Scenario-major, statistics in config order.
    pub summaries: Vec<McSummary>,
    pub records: Vec<ScenarioRecords>,
}

impl Table1Result {
    pub fn summary(&self, scenario: &Scenario, stat: Statistic) -> Option<&McSummary> {
        let label = scenario.label();
        self.summaries
            .iter()
            .find(|s| s.scenario == label && s.statistic == stat.name())
    }
}

fn scenario_spec(config: &ExperimentConfig, scenario: &Scenario) -> Result<LrdSpec> {
    match scenario {
        Scenario::Iid => Ok(LrdSpec::iid()),
        Scenario::Lrd(alpha) => {
            if config.backend == Backend::Iid {
                return Err(Error::Config(
                    "long-memory scenarios need the ma or fgn backend".into(),
                ));
            }
            LrdSpec::for_backend(config.backend, Some(*alpha), config.n, config.truncation)
        }
    }
}

/// Dispersion table of the sup statistics: for every scenario and
/// replication one error path and one predictor sample feed all statistics.
pub fn run_table1(config: &ExperimentConfig) -> Result<Table1Result> {
    config.validate()?;
    let n = config.n;
    let mut summaries = Vec::new();
    let mut records = Vec::new();
    for scenario in &config.scenarios {
        let spec = scenario_spec(config, scenario)?;
        let generator = PathGenerator::new(&spec, n)?;
        let reps: Vec<Vec<RepValue>> = (0..config.reps)
            .into_par_iter()
            .map(|rep| {
                let key = StreamKey::derive(
                    config.master_seed,
                    &[TABLE1_TAG, scenario.stream_label(), n as u64, rep as u64],
                );
                let mut stream = make_stream(key);
                let path = generator.sample(n, &mut stream);
                let x = config.model.x_law.sample(&mut stream, n);
                replicate_statistics(
                    &path.values,
                    &x,
                    &config.model,
                    &config.nw,
                    &config.statistics,
                )
            })
            .collect::<Result<_>>()?;
        let rec = ScenarioRecords {
            scenario: *scenario,
            backend: spec.backend(),
            reps,
        };
        for &stat in &config.statistics {
            summaries
                .push(summarize(&rec.values(stat))?.with_labels(stat.name(), scenario.label()));
        }
        records.push(rec);
    }
    Ok(Table1Result {
        config: config.clone(),
        summaries,
        records,
    })
}
