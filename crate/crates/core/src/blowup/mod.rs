//! Blow-up diagnostics: the extremal ODE, Kato-type lifespan bounds, the
//! mean functional and the lifespan scaling fit.

mod comparison;
mod fit;
mod kato;
mod ode;

pub use comparison::{
    comparison_check, jensen_check, u0_functional, ComparisonReport, ComparisonSample, JensenCheck,
};
pub use fit::{
    fit_sweep, lifespan_fit, run_sweep, theoretical_slope, write_sweep_csv, AmplitudeSweep,
    ScalingFit, SweepPoint,
};
pub use kato::{
    build_instance, calibrate_c0, doubling_time, growth_constant, kato2_bound, kato_bound, kato_m,
    random_params, sample_instances, KatoBound, KatoBranch, KatoInstance, KatoParams,
    C0_SAMPLING_MARGIN,
};
pub use ode::{first_integral, ode_blowup_integrate, Dopri, OdeBlowup, OdePoint, PowerOde};
