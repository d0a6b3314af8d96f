use std::io::Write;
use std::time::Duration;

use captl_core::mdp::Cardinality;

/// One row of the statistics table: sizes of the model and of the chain the
/// protocol is verified on, and where the time went.
#[derive(Debug, Clone)]
pub struct RunStats {
    pub case: String,
    pub model: Cardinality,
    /// Product chain for persistence runs, induced chain for pctl runs.
    pub product: Cardinality,
    pub construction: Duration,
    pub synthesis: Duration,
    pub product_time: Duration,
    pub verification: Duration,
    pub c: f64,
}

pub const HEADER: [&str; 12] = [
    "case",
    "model_states",
    "model_transitions",
    "model_choices",
    "product_states",
    "product_transitions",
    "product_choices",
    "construction_s",
    "synthesis_s",
    "product_s",
    "verification_s",
    "c",
];

impl RunStats {
    fn record(&self) -> Vec<String> {
        let secs = |d: Duration| format!("{:.6}", d.as_secs_f64());
        vec![
            self.case.clone(),
            self.model.states.to_string(),
            self.model.transitions.to_string(),
            self.model.choices.to_string(),
            self.product.states.to_string(),
            self.product.transitions.to_string(),
            self.product.choices.to_string(),
            secs(self.construction),
            secs(self.synthesis),
            secs(self.product_time),
            secs(self.verification),
            format!("{:.6}", self.c),
        ]
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[RunStats]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}
