//! Lift low-level Z3 proof traces into explicit, human-readable Verus-level
//! verification chains, dig structured proof holes into them, and score
//! candidate completions.

pub mod z3proof;
