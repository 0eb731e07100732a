pub mod alpha;
pub mod curvature;
pub mod diagnostics;
pub mod diagram;
pub mod error;
pub mod geom;
pub mod gradient;
pub mod io;
pub mod measures;
pub mod oracles;
pub mod sphtrig;

pub use diagram::Diagram;
pub use error::{Condition, Error, Result};
pub use geom::{Ball, BallSet, Momentum};
