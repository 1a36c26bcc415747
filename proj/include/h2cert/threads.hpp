#pragma once

namespace h2cert {

// Worker count used by the sweep/grid kernels. All parallel reductions are
// max-reductions with deterministic tie-breaking, so results are identical
// for any thread count. 0 resolves to the hardware concurrency.
int thread_count();
void set_thread_count(int n);

}  // namespace h2cert
