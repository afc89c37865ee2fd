#include "rshear/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace rshear {

namespace {
std::atomic<int> g_threads{0};
}

void set_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int get_threads() {
    int n = g_threads.load();
    if (n == 0) {
        unsigned hc = std::thread::hardware_concurrency();
        n = hc == 0 ? 1 : static_cast<int>(hc);
    }
    return n;
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
    int count = end - begin;
    if (count <= 0) return;
    int workers = std::min(get_threads(), count);
    if (workers <= 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    std::atomic<int> next{begin};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        int chunk = std::max(1, count / (4 * workers));
        for (;;) {
            int lo = next.fetch_add(chunk);
            if (lo >= end || failed.load()) return;
            int hi = std::min(lo + chunk, end);
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(err);
}

} // namespace rshear
