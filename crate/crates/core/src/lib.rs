//! Totally positive windows of finite type and their Gabor systems.
//!
//! A window is given by its pole parameters `δ_1, …, δ_m`:
//! `ĝ(ξ) = C ∏ (1 + 2πj δ_k ξ)^{-1}`. The crate evaluates such windows,
//! computes their Zak transforms in closed form, builds compactly supported
//! dual windows on lattices `αℤ × βℤ` with `αβ < 1`, and checks frame and
//! Riesz properties of the sampled and periodized systems on `ℂ^L`.
//!
//! ```
//! use tpgabor::{TpfftWindow, zak};
//!
//! let g = TpfftWindow::with_deltas(&[1.0, -1.0]).unwrap();
//! assert_eq!(g.eval(0.0).unwrap(), 0.5);
//! let z = zak::zak(&g, 2.0, 1.0, 0.25).unwrap();
//! assert!(z.norm() < 1e-12);
//! ```

pub mod discretize;
pub mod dual;
pub mod error;
pub mod export;
pub mod finite;
pub mod lattice;
pub mod window;
pub mod zak;

pub use discretize::{PeriodicSignal, SampledSignal};
pub use dual::{DualAt, DualWindowTable, SupportPlan};
pub use error::{Error, Result};
pub use finite::{Bounds, FiniteGaborSystem};
pub use lattice::{Density, LatticeParams};
pub use window::{TpfftWindow, WindowSpec};
pub use zak::{CriticalBounds, CriticalOptions, Setting, ZakGrid, ZakZero};
