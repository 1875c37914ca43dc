#pragma once

namespace serimat::runtime {

// Worker thread count for the parallelizable kernels (series matrix
// products). 1 = fully sequential. Results are identical for any setting.
unsigned thread_count();
void set_thread_count(unsigned n);

// Per-order residual trace logging from the lifting loops, to stderr.
bool trace_enabled();
void set_trace(bool on);

} // namespace serimat::runtime
