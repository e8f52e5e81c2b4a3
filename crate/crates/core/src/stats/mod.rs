//! Level statistics of complex spectra.

pub mod anderson;
pub mod distributions;
pub mod histogram;
pub mod ratio;
pub mod repulsion;
pub mod spacing;
pub mod window;

pub use anderson::{anderson_darling, anderson_darling_unsorted, AndersonDarling, AD_THRESHOLD};
pub use distributions::{
    cdf_2dp, cdf_ginue, cdf_ginue_scaled, cdf_ginue_table, ginue_mean, p_2dp, p_ginue,
    p_ginue_scaled, ReferenceDistribution, ReferenceKind,
};
pub use histogram::{histogram, write_window_series_csv, Histogram};
pub use ratio::{
    complex_ratios, ratio_averages, RatioAverages, RatioSample, RatioSet, GINUE_MEAN_NEG_COS,
    GINUE_MEAN_R, POISSON_MEAN_NEG_COS, POISSON_MEAN_R,
};
pub use repulsion::fit_repulsion_exponent;
pub use spacing::{nn_spacings, unfold, SpacingSample, SpacingSet, DEFAULT_UNFOLD_NEIGHBORS};
pub use window::{moving_window_average, SpectrumAnalysis, WindowPoint, WindowStatistic};
