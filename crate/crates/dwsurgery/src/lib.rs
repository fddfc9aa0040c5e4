//! Exact computation of the cohomological invariant `F(M, ρ) = ⟨(Bρ)*[α], [M]⟩` of closed
//! 3-manifolds presented by rational surgery on links, and of the Dijkgraaf–Witten sum
//! built from it, for finite groups Γ and 3-cocycles with values in ℚ/ℤ.
//!
//! The pipeline: [`algebra`] groups and ℚ/ℤ arithmetic, [`bar`] cochains and cohomology,
//! [`torus`] the solid-torus corrections, [`diagram`] Morse link diagrams and Wirtinger
//! data, [`reps`] representation enumeration, and [`engine`] which assembles the exterior
//! value and the closed invariant.

pub mod algebra;
pub mod bar;
pub mod diagram;
pub mod engine;
pub mod error;
pub mod io;
pub mod linalg;
pub mod reps;
pub mod torus;

pub use algebra::{CoeffValue, FiniteGroup, GroupElem, GroupSpec};
pub use bar::{Cochain2, Cochain3, FormalChain3};
pub use diagram::{parse_diagram, MorseDiagram, SurgeryPresentation, WirtingerPresentation};
pub use engine::{DwOptions, DwResult, Engine, TermLedger};
pub use error::{Error, Result};
pub use reps::{Coloring, PeripheralImage, Survivor};
pub use torus::{FramingCoefficient, SlTwoMatrix};
