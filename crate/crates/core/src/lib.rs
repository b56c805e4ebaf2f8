pub mod spd;
pub mod dsp;
pub mod pipelines;
pub mod eval;
pub mod synth;
pub mod stats;
