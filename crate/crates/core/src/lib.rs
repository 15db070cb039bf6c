//! Numerical toolkit for the fractional Makai-Hayman inequality
//! `λ₁ˢ(Ω) ≥ 𝒞ₛ / r_Ω^{2s}` on simply connected planar domains.
//!
//! The crate is organized along the ingredients of the inequality:
//!
//! * [`geometry`] — rasterized planar domains, inradius, connectivity;
//! * [`constants`] — the explicit constants chain `C₁,ₛ → C₂,ₛ → μₛ → 𝒯ₛ → 𝒞ₛ`;
//! * [`torus`] — the one-dimensional periodic Poincaré inequality;
//! * [`nonlocal`] — assembly of the Gagliardo-Slobodeckiĭ quadratic form;
//! * [`spectral`] — generalized eigensolvers, fractional and local;
//! * [`covering`] — boundary-centered disk coverings with coloring;
//! * [`extension`] — the Kelvin-inversion extension operator;
//! * [`harness`] — end-to-end experiments and machine-readable reports.
//!
//! # Quick start
//!
//! Verify the inequality on a coarse disk:
//!
//! ```
//! use fracmh::constants::{c_s, MsConfig};
//! use fracmh::geometry::{inradius, rasterize, ShapeSpec};
//! use fracmh::spectral::lambda1_s;
//!
//! let s = 0.75;
//! let mask = rasterize(&ShapeSpec::Disk { radius: 1.0 }, 1.0 / 8.0)?;
//! let lambda = lambda1_s(&mask, s)?.lambda;
//! let r = inradius(&mask)?;
//! let bound = c_s(s, &MsConfig::default())?;
//! assert!(lambda * r.powf(2.0 * s) >= bound);
//! # Ok::<(), fracmh::Error>(())
//! ```

pub mod constants;
pub mod covering;
pub mod error;
pub mod extension;
pub mod geometry;
pub mod harness;
pub mod nonlocal;
pub mod quad;
pub mod spectral;
pub mod torus;

pub use error::{Error, Result};
