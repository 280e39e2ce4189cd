//! Frequency-domain identification with orthonormal basis regressors.

mod basis;
mod envelope;
mod fit;
mod lyapunov;
mod plant;
mod scenario;
mod wls;

pub use basis::{default_poles, eval_basis, h2_gram_quadrature, make_basis, BasisGenerator, DEFAULT_POLES};
pub use envelope::{bode_envelope, EnvelopePoint};
pub use fit::{data_points, fit_qip, QipFit};
pub use lyapunov::{lyapunov_residual, lyapunov_solve, spectral_abscissa};
pub use plant::{cell_rng, log_grid, simulate_grid, simulate_plant, FrequencySample, PlantConfig};
pub use scenario::{run_scenario, FreqOutcome, GridConfig, ScaledBaseline, ScenarioConfig};
pub use wls::{fit_wls, ls_min_scaling, WlsFit, SIGMA_FLOOR};
