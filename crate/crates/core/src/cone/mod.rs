//! Selfsimilar metrics on `M × ℝ>0` and the checks that separate
//! selfsimilar, conical and contact-type examples.

mod checks;
mod contact;
mod spec;

pub use checks::{
    check_cone_criterion, check_conical, check_dilation_equivariance,
    check_dilation_equivariance_along, check_selfsimilar, conical_residuals, ConicalReport,
};
pub use contact::{
    contact_selfsimilar_example, contact_volume, dual_norm_sq_expr, positivity_potential,
    CONTACT_VOLUME_FLOOR,
};
pub use spec::{
    assemble_selfsimilar_metric, check_positivity, cone_samples, ConeMetricSpec, Placement,
    PositivityReport, DEFAULT_T_NAME, DEFAULT_T_SAMPLE, POSITIVITY_FLOOR,
};
