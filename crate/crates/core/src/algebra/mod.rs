//! Exact algebra of rotation-invariant valuations with `q * pi^m` scalars.

mod ring;
mod scalar;
mod verify;

pub use ring::{
    additive_coproduct, binomial_exact, convolution_constant, flag, kinematic_coproduct, omega, Constant,
    InvariantValuation, KinematicTensor, SoAlgebra,
};
pub use scalar::ScaledRational;
pub use verify::{
    exact_suite, verify_abstract, verify_additive_kf, verify_algebra_laws, verify_dxd, verify_lambda_steiner,
    verify_lefschetz_duality, verify_product_convolution_duality, verify_steiner, verify_tensor_shape,
    IdentityReport, Status,
};
