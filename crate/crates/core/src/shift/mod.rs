//! Argument shift: commuting families built from a Casimir and a shift
//! operator, in the classical, binary-operation and deformed settings.

mod binary;
mod classical;
mod family;
mod json;
mod quantum;
mod scan;

pub use binary::{binary_shift_check, vector_from_map, BinaryEntryJson, BinaryOpJson, BinaryOpModel, XiEntryJson};
pub use classical::{classical_shift, ShiftOptions, DEFAULT_DEGREE_CAP, DEFAULT_KMAX};
pub use family::{BracketEntry, BracketReport, Generator, GeneratorReport, HypothesisCheck, ShiftFamily, ShiftReport};
pub use quantum::{lift_classical, quantum_shift, standard_probes, QuantumOptions};
pub use scan::{scan_strong_nijenhuis, Candidate, GridJson, ScanJson, ScanProblem, ScanReport, SlotJson, DEFAULT_BUDGET};
pub use json::{
    run_classical, run_nijenhuis, run_quantum, BinaryProblemJson, ClassicalProblemJson, CutoffsJson, Overrides, PoissonJson,
    QuantumProblemJson, ShiftProblemJson,
};
