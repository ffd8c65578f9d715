#include "retsurv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace retsurv {

namespace {
std::atomic<int> g_worker_cap{0};  // 0 means "no explicit cap"

int env_cap() {
    const char* raw = std::getenv("RETSURV_MAX_WORKERS");
    if (raw == nullptr) return 0;
    const int v = std::atoi(raw);
    return v > 0 ? v : 0;
}
}  // namespace

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const int e = env_cap(); e > 0) n = std::min(n, e);
    if (const int c = g_worker_cap.load(); c > 0) n = std::min(n, c);
    return n;
}

void set_worker_cap(int cap) { g_worker_cap.store(cap > 0 ? cap : 0); }

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t total = end > begin ? end - begin : 0;
    if (total == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(worker_count(), total);
    if (workers <= 1) {
        body(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = begin + w * chunk;
        if (lo >= end) break;
        const std::size_t hi = std::min(lo + chunk, end);
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace retsurv
