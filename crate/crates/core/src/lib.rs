//! Software model of a double-pendulum pseudo-random number generator built
//! for an FPGA: its sign-magnitude fixed-point arithmetic, the pendulum
//! iteration, sensor-derived seeding, the 10-digit output stream, and a
//! statistics harness for checking the stream.

pub mod cli;
pub mod fixnum;
pub mod pendulum;
pub mod prng;
pub mod refcalc;
pub mod selftest;
pub mod sensorio;
pub mod stats;
