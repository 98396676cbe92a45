//! Exact-arithmetic engine for multi-page Adams-style spectral sequence charts.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`chart`]: bigraded charts with page-aware visibility of classes,
//!   differentials and structure lines.
//! - [`tau`]: bigraded modules over `F_2[τ]` as direct sums of cyclics, the
//!   `Cτ^k` homotopy they induce and the dictionary between τ-torsion and
//!   Adams differentials.
//! - [`vline`]: exact-rational parameter tuples `(b <= d, v, m, c, r)` for
//!   v₁-banded vanishing lines, their transport along cofiber sequences and
//!   suspensions, and region checks against chart data.
//! - [`k1`]: 2-adic bookkeeping for the homotopy of the K(1)-local sphere and
//!   Moore spectrum.
//! - [`periodic`]: v₁-periodic patterns, tiling, cofiber overlays and band
//!   censuses, with the built-in C(2) band pattern.
//!
//! Parsing, rendering and the command line live in the `sseq-tools` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chart;
pub mod k1;
pub mod periodic;
pub mod rational;
pub mod tau;
pub mod vline;

pub use chart::{Bidegree, Chart, ChartClass, ChartError, ClassRef, Differential, Generation, Grading, StructLine};
pub use rational::Rational;
