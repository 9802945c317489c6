//! Complex geodesics from a dual map `h`.
//!
//! The pipeline takes `h`, computes support points of the domain in the
//! directions `conj(l) h(l)` on the circle, turns them into a holomorphic
//! candidate `phi`, and certifies it by sampling `Re psi_z(l) <= 0`.
//!
//! A `certified` verdict is a numerical certificate over seeded samples and
//! the node-wise support condition, not a proof.

mod certify;
mod connect;
mod lm;
mod mobius;
mod pipeline;
mod psi;
mod sibling;

pub use certify::{certify, CertificationReport, CertifyConfig, Verdict};
pub use connect::{connect, ConnectConfig, ConnectOutcome, ConnectStatus};
pub use mobius::{mobius_point, mobius_reparametrize};
pub use pipeline::{
    atom_compatibility, boundary_data_from_h, exempt_nodes, reconstruct, GeodesicCandidate,
};
pub use psi::{eval_psi, psi_quotient_form, psi_series_form, PSI_CROSSOVER};
pub use sibling::sibling_variation;
