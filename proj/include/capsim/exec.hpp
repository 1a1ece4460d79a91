#pragma once

namespace capsim {

/// Execution policy for the data-parallel kernels. Serial runs the plain
/// reference loops; Parallel runs the OpenMP variants. Both produce
/// bit-identical results (independent work items, fixed combination order).
enum class Exec { Serial, Parallel };

/// Number of threads the Parallel policy would use (1 without OpenMP).
int max_threads();

}  // namespace capsim
