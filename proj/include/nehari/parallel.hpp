#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nehari {

/// Number of worker threads used by parallel_for / chunked_sum.
/// Defaults to hardware concurrency, capped by the NEHARI_THREADS
/// environment variable (read once at first use).
int thread_count();

/// Override the thread cap programmatically (0 restores the default).
void set_thread_cap(int n);

/// Runs fn(begin, end) over disjoint subranges of [0, n), possibly on
/// multiple threads. Subranges never overlap, so element-wise writes
/// are race-free and results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Deterministic sum of term(i) for i in [0, n). The range is split
/// into a fixed number of chunks independent of the thread count; the
/// per-chunk partial sums are combined in chunk order, so the result
/// is bit-identical from run to run regardless of NEHARI_THREADS.
double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& term);

/// Same chunking scheme for a dot product of two raw arrays.
double chunked_dot(const double* a, const double* b, std::size_t n);

} // namespace nehari
