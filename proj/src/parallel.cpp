#include "nehari/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace nehari {

namespace {

std::atomic<int> g_thread_cap{-1}; // -1 = unresolved

int resolve_threads() {
    int cap = g_thread_cap.load();
    if (cap > 0) return cap;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("NEHARI_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) hw = std::min<long>(hw, v);
    }
    return hw;
}

// Fixed chunk count so that reduction order does not depend on the
// number of threads actually running.
constexpr std::size_t kReduceChunks = 512;

// Below this many elements threading costs more than it saves.
constexpr std::size_t kSerialCutoff = 4096;

void run_split(std::size_t n, int nt, const std::function<void(std::size_t, std::size_t)>& fn) {
    std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
    std::size_t block = (n + nthreads - 1) / nthreads;
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        std::size_t b = t * block;
        std::size_t e = std::min(n, b + block);
        if (b >= e) break;
        workers.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& w : workers) w.join();
}

} // namespace

int thread_count() { return resolve_threads(); }

void set_thread_cap(int n) { g_thread_cap.store(n > 0 ? n : -1); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    int nt = resolve_threads();
    if (nt <= 1 || n < kSerialCutoff) {
        fn(0, n);
        return;
    }
    run_split(n, nt, fn);
}

double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
    if (n == 0) return 0.0;
    std::size_t nchunks = std::min(kReduceChunks, n);
    std::size_t block = (n + nchunks - 1) / nchunks;
    nchunks = (n + block - 1) / block;
    std::vector<double> partial(nchunks, 0.0);
    auto work = [&](std::size_t cb, std::size_t ce) {
        for (std::size_t c = cb; c < ce; ++c) {
            std::size_t b = c * block;
            std::size_t e = std::min(n, b + block);
            double s = 0.0;
            for (std::size_t i = b; i < e; ++i) s += term(i);
            partial[c] = s;
        }
    };
    int nt = resolve_threads();
    if (nt <= 1 || n < kSerialCutoff)
        work(0, nchunks);
    else
        run_split(nchunks, nt, work);
    double total = 0.0;
    for (double s : partial) total += s; // fixed chunk order
    return total;
}

double chunked_dot(const double* a, const double* b, std::size_t n) {
    if (n == 0) return 0.0;
    std::size_t nchunks = std::min(kReduceChunks, n);
    std::size_t block = (n + nchunks - 1) / nchunks;
    nchunks = (n + block - 1) / block;
    std::vector<double> partial(nchunks, 0.0);
    auto work = [&](std::size_t cb, std::size_t ce) {
        for (std::size_t c = cb; c < ce; ++c) {
            std::size_t i0 = c * block;
            std::size_t i1 = std::min(n, i0 + block);
            double s = 0.0;
            for (std::size_t i = i0; i < i1; ++i) s += a[i] * b[i];
            partial[c] = s;
        }
    };
    int nt = resolve_threads();
    if (nt <= 1 || n < kSerialCutoff)
        work(0, nchunks);
    else
        run_split(nchunks, nt, work);
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

} // namespace nehari
