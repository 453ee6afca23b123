//! Circular orderings of groups as executable oracles.
//!
//! A circular order on a group G is a left-invariant function on triples
//! taking values in {-1, 0, +1}, zero exactly on degenerate triples and
//! satisfying the cocycle identity on quadruples. This crate represents
//! such orders as oracles over exact integer coordinates and builds the
//! surrounding machinery:
//!
//! - finitely generated backends (cyclic, free abelian, Tararin towers and
//!   their finite extensions, the discrete Heisenberg group) and the
//!   central extension of G by Z induced by a circular order ([`Group`]);
//! - left orders as positive-cone oracles, secret circular orders built
//!   from them, and validation of the axioms on sampled or exhaustive
//!   tuples ([`LeftOrder`], [`CircularOrder`], [`validate`]);
//! - the lift cocycle, translation-number floors, and rotation numbers
//!   carrying either exact rationals or certified error intervals
//!   ([`power_floor`], [`rot`], [`tau`]);
//! - semiconjugacy decisions that only certify equality from exact
//!   agreement and only refute with a concrete witness ([`semiconjugate`],
//!   [`is_secret`]);
//! - constructions: lexicographic extensions along short exact sequences,
//!   finite cyclic quotients by a cofinal central element, their
//!   approximations on the ambient group, pullbacks, and convergence
//!   tables ([`lex_extend`], [`quotient_circular`], [`approx_dn`],
//!   [`genuine_sequence`], [`convergence_table`]);
//! - enumeration of circular orders on finite cyclic groups and of
//!   positive-cone candidates on balls ([`enumerate_co_cyclic`],
//!   [`enumerate_lo_ball`]);
//! - JSON descriptors making every oracle serializable and reconstructible
//!   ([`build_ordering`], [`build_group`]).
//!
//! Everything is deterministic: sampling is seeded, caches do not affect
//! results, and reports serialize with sorted keys.

pub mod construct;
pub mod descriptor;
pub mod enumerate;
pub mod error;
pub mod groups;
pub mod lift;
pub mod morphism;
pub mod orders;
pub mod sample;
pub mod semiconj;

pub use construct::{
    approx_dn, approx_rot, cofinal_central, convergence_table, genuine_sequence, lex_extend,
    pullback, quotient_circular, CofinalCentralDatum, ConvergenceRow, Ses,
    DEFAULT_COFINALITY_BOUND,
};
pub use descriptor::{
    build_element, build_group, build_left_order, build_morphism, build_ordering, build_ses,
    element_to_value,
};
pub use enumerate::{
    canonical_tararin_cones, enumerate_co_cyclic, enumerate_lo_ball, ConeCandidate,
};
pub use error::{Error, Result};
pub use groups::{Element, Group, BALL_CAP};
pub use lift::{
    cocycle_f, eta_of_secret, floor, lift_id, lift_inv, lift_mul, lift_positive, lift_z,
    power_floor, power_floor_chain, EtaFunction, LiftElement,
};
pub use morphism::Morphism;
pub use orders::{
    cone_from_secret, secret_from_left, validate, Axiom, CircularOrder, LeftOrder,
    ValidationReport, Violation,
};
pub use sample::Sampler;
pub use semiconj::{
    check_conjugation_invariance, default_pair_sample, is_secret, mod_z_distance, rot,
    rot_estimate, rot_exact, semiconjugate, tau, InvarianceReport, RotPath, RotationResult,
    RotationValue, Verdict, Witness,
};
