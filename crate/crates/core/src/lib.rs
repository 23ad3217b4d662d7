//! Genus theory and 5-class rank bounds for the pure quintic extensions Q(ζ₅, n^{1/5}) / Q(ζ₅).

pub mod ambiguous_rank;
pub mod cli_reports;
pub mod cyclotomic_ring;
pub mod filtration_oracle;
pub mod linalg;
pub mod prime_decomposition;
pub mod quintic_descent;
pub mod residue_symbols;
