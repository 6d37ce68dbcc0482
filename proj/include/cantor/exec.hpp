#pragma once

namespace cantor {

// Execution policy for the data-parallel kernels. Every parallel kernel has a
// serial twin that computes the same bytes; tests compare the two.
enum class Exec { Serial, Parallel };

int max_threads();
void set_threads(int n);

}  // namespace cantor
