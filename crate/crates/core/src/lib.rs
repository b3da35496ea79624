//! Input/output labelled transition systems and the ioco testing algebra.
//!
//! The crate covers the model itself ([`Iolts`]), quiescence and suspension
//! traces, parallel composition and hiding, the ioco and uioco conformance
//! checks, and friendly composition and hiding: composition restricted to
//! what a maximal friendly environment can drive the components into.
//!
//! ```
//! use iolts::{fixtures::load_fixture, friendly::friendly_compose};
//!
//! let s1 = load_fixture("vending/S1").unwrap();
//! let s2 = load_fixture("vending/S2").unwrap();
//! let outcome = friendly_compose(&s1, &s2).unwrap();
//! assert!(outcome.compatible);
//! ```

pub mod algebra;
pub mod conformance;
pub mod diagnostics;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod friendly;
pub mod lts;
pub mod randgen;
pub mod suspension;

pub use algebra::{add_input_selfloops, demonic_complete, hide, parallel_compose, selfloop_complete};
pub use conformance::{check, ioco_check, uioco_check, Relation, Verdict, Witness};
pub use error::{Error, ParseError, Result};
pub use friendly::{
    envdet, friendly_compose, friendly_hide, AmbiguousPair, EnvAutomaton, FriendlyConfig,
    FriendlyOutcome, PruneReport,
};
pub use lts::{
    is_composable, Action, Alphabet, Enabledness, Iolts, IoltsBuilder, Label, Polarity, StateId,
    StateSet, ValidationReport,
};
pub use suspension::{
    after, determinize, out_after, out_of, straces_upto, suspend, utraces_upto, DetMode, DetView,
    STrace, SuspensionAutomaton,
};
