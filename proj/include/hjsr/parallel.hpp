#pragma once

namespace hjsr {

// Number of worker threads for parallel regions.  Reads HJSR_THREADS on every
// call so tests and benchmarks can flip it at runtime; the value only caps
// what OpenMP would use.  Thread count never changes computed results.
int thread_count();

} // namespace hjsr
