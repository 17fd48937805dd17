//! Exact q-series arithmetic, eta-quotient certification, and congruence
//! verification for partition functions.
//!
//! The crate is organized in layers:
//!
//! * [`series`]: truncated power series over exact big integers or fixed
//!   word-size residues, with the Euler product, dilation `q -> q^m`, and the
//!   coefficient-extraction operator `U_p`.
//! * [`eta`]: eta-quotients as exponent maps, modularity certification,
//!   exact cusp-order tables, and `U_3` order bounds from level 18 to 6.
//! * [`hauptmodul`]: polynomial decomposition in a degree-one generator,
//!   rigorous identity verification from pole bounds, power-sum recurrences.
//! * [`congruence`]: partition generating functions and bulk verification of
//!   congruence families, including the standing identity behind them.
//! * [`dsl`]: a small job language (`let`/`assert`) driving all of the above,
//!   shared by the command line tool.
//! * [`report`]: the uniform pass/fail/error report every verifier returns.
//!
//! Everything is exact: no floats, no probabilistic checks. A verifier never
//! panics on mathematical failure; it returns a report carrying the first
//! violating index and value.

pub mod congruence;
pub mod dsl;
pub mod eta;
pub mod hauptmodul;
pub mod report;
pub mod series;

pub use congruence::{
    cubic_partition_series, modular_inverse, partition_series, replay_section_3,
    verify_congruence_family, verify_theorem_1_1, verify_watson, CongruenceError,
    CongruenceFamily,
};
pub use dsl::{execute_program, parse_program, Diagnostic, Program};
pub use eta::{
    certification_report, cusp_set, order_rows, u3_order_bounds, Certification, Cusp,
    CuspOrderTable, EtaError, EtaQuotient,
};
pub use hauptmodul::{
    coefficient_valuations, decompose, evaluate_poly, newton_recurrence_check,
    rigorous_pole_bound, sigma_from_power_sums, verify_identity_rigorous, HauptError,
    HauptPolynomial, SigmaTriple, ValuationTable,
};
pub use report::{ConditionRow, OrderRow, ReportTables, Status, ValuationRow, VerificationReport, Violation};
pub use series::{eta_product_series, eta_product_series_mod, SeriesError, SeriesValuation, TruncatedSeries};
