#![allow(dead_code, clippy::excessive_precision, clippy::approx_constant)]

pub mod reference;
