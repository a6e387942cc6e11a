//! Evaluation protocol: antialias filtering, mesh simulation and PSNR
//! gain reports.

mod evaluate;
mod filter;
mod simulate;
mod synth;

pub use evaluate::{
    evaluate, evaluate_dir, load_corpus, report_csv, summarize, summary_csv, training_corpus,
    EvalConfig, EvalRow, SummaryRow,
};
pub use filter::{antialias, lowpass_taps, magnitude_response};
pub use simulate::{
    candidate_count, reference_grid, shuffle_prefix, simulate_mesh, uniform_below, SimConfig,
};
pub use synth::{synthetic_corpus, synthetic_scene};
