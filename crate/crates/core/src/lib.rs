//! Desk-scale toolkit for Lie groupoid and Lie algebroid cohomology with
//! module coefficients.
//!
//! * [`exactalg`]: integer/rational linear algebra and mixed modules.
//! * [`barcoh`]: cohomology of discrete groups and finite groupoids.
//! * [`cealg`]: Chevalley–Eilenberg cohomology of Lie algebras.
//! * [`forms`]: symbolic Laurent differential forms.
//! * [`vanest`]: integration and differentiation of cocycles on coordinate groups.
//! * [`extend`]: central extensions built from 2-cocycles.
//! * [`periods`]: numerical periods and integrability verdicts.
//! * [`divisor`]: the module of meromorphic units with divisor at the origin.
//! * [`cli`]: spec files, reports and the golden suite.

pub mod barcoh;
pub mod cealg;
pub mod cli;
pub mod divisor;
pub mod exactalg;
pub mod extend;
pub mod forms;
pub mod periods;
pub mod vanest;
