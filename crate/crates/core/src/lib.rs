pub mod axioms;
pub mod error;
pub mod graycode;
pub mod ir;
pub mod lopp;
pub mod normalize;
pub mod random;
pub mod semantics;
pub mod transpile;

pub use error::{Error, Result};
pub use ir::{Circuit, CircuitSpace, Node};
pub use lopp::LoppCircuit;
pub use normalize::{is_layer_form, measure, separate, Layer, Measure, Segment};
pub use semantics::{interp_lopp_sp, interp_qudit, Matrix};
pub use transpile::{decode, encode};
