//! Secrecy performance toolkit for STAR-RIS-assisted NOMA downlinks.
//!
//! A base station serves one reflecting and one transmitting user through a
//! simultaneously transmitting and reflecting surface, while eavesdroppers
//! form a planar Poisson field. The crate computes the secrecy outage
//! probability (SOP) and the average secrecy capacity (ASC) of the NOMA
//! user pair three ways:
//!
//! * semi-analytically, by adaptive integration of the closed-form channel
//!   and eavesdropper statistics ([`analytics`]);
//! * by fixed Gauss-Laguerre / Chebyshev-Gauss quadrature of the same
//!   integrals ([`analytics`] with [`analytics::Method::Quadrature`]);
//! * by an independent Monte Carlo simulation of the full system
//!   ([`simulator`]).
//!
//! The supporting layers are the special functions ([`special`]), the
//! quadrature rules ([`quadrature`]), the cascaded kappa-mu fading
//! statistics ([`fading`]) and the spatial model ([`geometry`]).

pub mod analytics;
pub mod error;
pub mod fading;
pub mod geometry;
pub mod quadrature;
pub mod simulator;
pub mod special;

pub use error::{Error, Result};
