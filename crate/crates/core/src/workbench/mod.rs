//! Instance generators and testing harnesses.

pub mod compose;
pub mod diff;
pub mod lcm;
pub mod random;
pub mod sample;
