#pragma once

namespace nascd {

/// Execution policy for the data-parallel kernels (margin sweep, batch trace
/// verification, Monte Carlo). Serial is the reference path kept for testing
/// and benchmarking; Parallel uses OpenMP when compiled in. Both paths
/// produce bit-identical results: parallel iterations write disjoint slots
/// and every reduction runs serially in a fixed order.
enum class ExecPolicy { Serial, Parallel };

/// Number of worker threads the Parallel policy would use (1 without OpenMP).
int hardware_threads();

}  // namespace nascd
