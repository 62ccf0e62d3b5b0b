//! Weyl groups of types B_n, D_n and G_2, their torsors and invariants.

mod invariants;
mod perm;
mod torsor;
mod wreath;

pub use invariants::{
    eval_a_k, eval_a_l, eval_dn_traces, eval_g2, eval_g2_basis, eval_r, eval_sn_trace, eval_u, eval_v, eval_v_prime,
    eval_v_upto, lift_u, lift_v_prime, lift_v_upto,
};
pub use perm::Perm;
pub use torsor::{twist, GSet, MultiquadraticTorsor, TargetGroup, MAX_RANK};
pub use wreath::{dn_coset_action, even_vectors, rho, rho2, wreath_mul, WreathElement};
