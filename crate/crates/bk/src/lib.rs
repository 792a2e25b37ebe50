//! A finite-model workbench for belief structures.
//!
//! This crate builds, checks and certifies finite multi-sorted belief
//! structures: type spaces for interacting agents together with the
//! relations that encode what each agent considers possible. On top of
//! the raw relational algebra it provides
//!
//! - a modal formula language with `believes` (`[R]`), possibility
//!   (`<R>`) and `assumes` (`[[R]]`) operators, with parsing, sort
//!   checking and evaluation ([`formula`]);
//! - the completeness notions that drive interactive diagonal arguments:
//!   assumption-completeness, belief-completeness, and (very) weak point
//!   surjectivity, each returning deterministic witness reports
//!   ([`completeness`]);
//! - the diagonal machinery itself: the believes-assumes assumptions,
//!   the basic fixpoint equivalence, truth-value operator fixpoints, the
//!   Brandenburger-Keisler impossibility certificate, and the
//!   generalization to multi-agent belief cycles ([`fixpoint`]);
//! - compositional gluing of belief relations, including the
//!   characteristic-function counterexample construction that
//!   characterizes belief-completeness ([`composition`]);
//! - a terminal-sequence tower for the bounded-powerset pair functor,
//!   with Lambek convergence detection and extraction of
//!   assumption-complete belief models at finite depth ([`coalgebra`]).
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run -p bk --example model_basics       # carriers, images, composition, diagonals
//! cargo run -p bk --example formula_eval       # parse, sort-check and evaluate modal formulas
//! cargo run -p bk --example completeness_zoo   # the four completeness notions side by side
//! cargo run -p bk --example diagonal_paradox   # q, D = not q, and the impossibility certificate
//! cargo run -p bk --example belief_cycles      # multi-agent chains of believes ending in assumes
//! cargo run -p bk --example composition_gluing # the composition lemma and its converse
//! cargo run -p bk --example coalgebra_tower    # terminal sequences and extracted models
//! ```
//!
//! A thin `bk` binary exposes the same operations as subcommands over
//! JSON model files; see the crate README for the format and flags.
//!
//! # A three-line tour
//!
//! ```
//! let m = bk::BeliefStructure::from_json(r#"{
//!     "sorts": {"Ua": 2, "Ub": 2},
//!     "relations": {
//!         "Ra": {"from": "Ua", "to": "Ub", "pairs": [[0,0],[0,1],[1,1]]},
//!         "Rb": {"from": "Ub", "to": "Ua", "pairs": [[0,0],[1,1]]}
//!     }
//! }"#).unwrap();
//! let q = bk::fixpoint::q_predicate(&m, "Ra", "Rb").unwrap();
//! assert_eq!(q.members(), vec![0, 1]);
//! ```

pub mod cli;
pub mod coalgebra;
pub mod completeness;
pub mod composition;
pub mod error;
pub mod fixpoint;
pub mod formula;
pub mod model;

pub use error::{Error, Result};
pub use model::{BeliefCycle, BeliefStructure, Predicate, PredicateFamily, Relation, Sort};
