//! Finite-N criteria: coverage scans, separation, gaps, close pairs and `f_A`.

mod coverage;
mod fa;
mod gaps;
mod separation;
mod verdict;

pub use coverage::{
    coverage, coverage_union, default_eps_ladder, default_windows, geometric_grid, ladder_from_table, ladder_scan,
    necessary_scan, sufficient_from_table, sufficient_scan, witnesses_from_table, CoverageReport, CoverageTable,
    LadderScan, SufficientScan, Witness, DEFAULT_D_FLOOR,
};
pub use fa::{dyadic_radii, f_a_estimate, midpoint_grid, FaEstimate, DEFAULT_ZERO_TOLERANCE};
pub use gaps::{close_pairs, gap_stats, GapStats, PairStats};
pub use separation::{
    greedy_separated_subset, lemma_bounds, separated_count, separation_profile, LemmaBounds, SeparationProfile,
    SeparationRow, SEPARATION_RTOL,
};
pub use verdict::{TheoremTag, Verdict};
