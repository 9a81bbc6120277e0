"""Portfolio optimization with an illiquid asset: HJB residuals, executable
Lie symmetry algebras, invariant reductions, a Newton solver for the unique
admissible reduced problem, and Monte Carlo validation of its policy."""

__version__ = "1.0.0"
