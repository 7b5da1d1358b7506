//! Quadratic sign characters attached to tame twisted Levi data, and the
//! finite-field machinery needed to evaluate them.

pub mod checks;
pub mod chidata;
pub mod epschar;
pub mod gf;
pub mod hypercoh;
pub mod linalg;
pub mod presets;
pub mod quadspace;
pub mod rootsys;
pub mod scenario;
pub mod sigma_set;
pub mod synth;
pub mod torus;

pub use chidata::{ChiError, ChiVariant, TameCharacter, TameElement};
pub use epschar::{CharRow, CharValue, EpsError, Mode, Named, PhiKind, PhiSet};
pub use gf::{FieldDesc, FqElem, GfError, SquareClass};
pub use linalg::Matrix;
pub use scenario::{Invariant, Scenario, ScenarioDoc, ScenarioError};
pub use sigma_set::{GaloisFrame, OrbitClass, OrbitKind, SigmaSet};
pub use torus::{TorusError, TorusPoint};
