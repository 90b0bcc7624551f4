//! Experiment drivers: configuration, the three figure reproductions as CSV
//! files, and a small SVG line-chart writer.

mod config;
mod figures;
mod svg;

pub use config::{ExperimentConfig, Figure, MRange};
pub use figures::{
    fig1_file_name, fig3_file_name, metadata_line, run_fig1, run_fig2, run_fig3, selection_chain,
    write_fig1, write_fig2, write_fig3, Fig1Output, Fig1Row, Fig2Audit, Fig2Output, Fig2Row,
    Fig3Output, Fig3Row, FIG1_HARD_MAX_N,
};
pub use svg::{emit_svg, SvgOptions, SvgOutput};

/// Crate version written into every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
