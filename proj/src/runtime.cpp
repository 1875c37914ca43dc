#include "serimat/runtime.hpp"

namespace serimat::runtime {

namespace {
unsigned g_threads = 1;
bool g_trace = false;
} // namespace

unsigned thread_count() { return g_threads; }
void set_thread_count(unsigned n) { g_threads = n == 0 ? 1 : n; }

bool trace_enabled() { return g_trace; }
void set_trace(bool on) { g_trace = on; }

} // namespace serimat::runtime
