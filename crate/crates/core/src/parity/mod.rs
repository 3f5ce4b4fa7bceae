//! Parity of conjugate self-dual representations: brute force via invariant
//! pairings on monomial models, closed forms via explicit intertwiners, and
//! the finite-group framework.

pub mod closed_form;
pub mod framework;
pub mod linalg;
pub mod monomial;
pub mod pairing;
pub mod theorem;

pub use closed_form::{parity_closed_form, ClosedFormWitness};
pub use monomial::{build_rep_d, MonomialMatrix, MonomialRep};
pub use pairing::{irreducibility_check, parity_bruteforce, solve_invariant_pairing, BilinearForm};
pub use theorem::{evaluate_instance, main_theorem_check, ParityOutcome};
