//! Time rescaling, the fast-forward Hamiltonian and its integration.

mod schedule;

pub use schedule::Schedule;
mod evolution;

pub use evolution::{
    build_hff, drive_sample, evolve, evolve_with, fidelity, spectrum, DriveSample, EvolutionRecord, EvolveOptions,
    DRIVE_RESIDUAL_TOLERANCE, MIN_STEPS, NORM_DRIFT_LIMIT, VELOCITY_FLOOR,
};
