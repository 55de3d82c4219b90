//! The totally geodesic equations: the induced connection `dotΓ` on
//! `J¹(E, n) → E`, the section `Γ̈`, unparametrized and parametrized
//! residuals, the connection `dotΓ_{pro_M}`, its distribution and a
//! geodesic integrator for `n = 1`.

mod distribution;
mod dot_gamma;
mod equivalence;
mod integrate;
mod pro;
mod quotient;
mod residual;
mod xi;

pub use distribution::{
    cover1_pushforward, distribution_fields, distribution_pushforward, pro_distribution_fields, DistributionPushforward,
};
pub use dot_gamma::{dot_gamma, DotGamma};
pub use equivalence::{grass_equivalent, EquivalenceReport};
pub use integrate::{integrate_geodesic, GeodesicStart, Trajectory};
pub use pro::{ddot_gamma_pro, dot_gamma_pro, param_residual2, ParamResidual2, ProLift};
pub use quotient::{quotient_diagram_residual, unparam_vertical};
pub use residual::{ddot_gamma, residual2, Residual2};
pub use xi::{dot_gamma_via_xi, omega_projection, OmegaProjection, XiTable};
