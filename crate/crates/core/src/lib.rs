//! Graph signal processing core.
//!
//! Graphs become shift operators ([`operator`]), whose eigendecomposition
//! defines the graph Fourier transform and frequency ordering ([`spectral`]).
//! Frequency responses are applied exactly, as matrix polynomials, or through
//! Chebyshev series ([`filter`], [`chebyshev`]). Bandlimited signals can be
//! sampled and reconstructed, and outliers found by high-pass filtering
//! ([`sampling`]).

pub mod chebyshev;
pub mod eigen;
pub mod error;
pub mod filter;
pub mod generators;
pub mod graph;
pub mod io;
pub mod operator;
pub mod sampling;
pub mod signal;
pub mod spectral;

pub use chebyshev::{spectral_upper_bound, ChebyshevFilter};
pub use error::{GspError, Result};
pub use filter::{
    apply_exact, apply_polynomial, check_shift_invariance, impulse_response, FilterKernel, GraphFilter, Response,
};
pub use graph::{Edge, Graph};
pub use operator::{ShiftKind, ShiftOperator, DENSE_THRESHOLD};
pub use sampling::{
    detect_outliers, greedy_select, random_bandlimited, reconstruct, uniqueness_check, BandlimitedModel, SamplingSet,
};
pub use signal::GraphSignal;
pub use spectral::{eigendecompose, gft, igft, order_frequencies, rayleigh_quotient, total_variation, SpectralBasis};
