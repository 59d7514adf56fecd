//! Exact q-series: theta series of Construction A lattices, E4 and Delta,
//! decomposition in C[E4, Delta] and the extremal defect.

mod decompose;
mod series;
mod theta;

pub use decompose::{
    basis_form, decompose_e4_delta, default_precision, extremal_defect, extremal_theta, mu_of,
    DecompositionResult,
};
pub use series::{QSeries, SeriesJson};
pub use theta::{delta24, e4, f_series, series_from_shells, theta_from_swe};
