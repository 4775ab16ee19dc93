use thiserror::Error;

/// Precondition and resource failures shared by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("{what} = {value} exceeds the limit {limit}")]
    TooLarge { what: &'static str, value: usize, limit: usize },
    #[error("empty input list")]
    EmptyInput,
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("table of {cells} cells exceeds the budget of {budget}")]
    Budget { cells: u128, budget: u128 },
    #[error("domain error: {0}")]
    Domain(String),
}
