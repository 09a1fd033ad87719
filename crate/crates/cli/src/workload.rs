use serde::Serialize;

use crate::CliError;

/// Review load of an evaluation panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WorkloadQuery {
    pub papers: u64,
    pub reviews_per_paper: u64,
    pub panel_size: u64,
    pub working_days: u64,
}

impl WorkloadQuery {
    pub fn new(
        papers: u64,
        reviews_per_paper: u64,
        panel_size: u64,
        working_days: u64,
    ) -> Result<Self, CliError> {
        for (name, v) in [
            ("papers", papers),
            ("reviews_per_paper", reviews_per_paper),
            ("panel_size", panel_size),
            ("working_days", working_days),
        ] {
            if v == 0 {
                return Err(CliError::Usage(format!("{name} must be positive")));
            }
        }
        Ok(WorkloadQuery {
            papers,
            reviews_per_paper,
            panel_size,
            working_days,
        })
    }
}

/// Reviews each panel member must complete per working day.
pub fn workload(q: &WorkloadQuery) -> f64 {
    (q.papers as f64 * q.reviews_per_paper as f64) / (q.panel_size as f64 * q.working_days as f64)
}
