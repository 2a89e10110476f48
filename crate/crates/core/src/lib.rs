pub mod criticality;
pub mod entanglement;
pub mod error;
pub mod fisher_hartwig;
pub mod models;
pub mod numerics;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use models::{mode_energy, CustomInteraction, DispersionProfile, InteractionModel, MonotonicityReport};
pub use criticality::{
    classify_phase, fermi_points, free_energy, low_temperature_fit, FermiAnalysis, FermiPoint,
    LowTemperatureFit, Phase, ThermalResult,
};
pub use spectral::{
    correlation_row, correlation_row_finite, eigenvalues_symmetric, log_det_char, CorrelationSpectrum,
};
pub use entanglement::{
    log_f_factor,
    c_tilde, c_tilde_oracle, entropy_report, entropy_sweep, f_factor, i1, i1_quadrature, renyi_asymptotic,
    renyi_exact, AsymptoticEntropy, EntropyReport,
};
pub use fisher_hartwig::{fh_deviation, log_dl_asymptotic, symbol_params, FhSymbol};
pub use specfun::ComplexValue;
