#include "tailscope/parallel.h"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace tailscope {

namespace {
std::atomic<unsigned> g_thread_limit{0};
}

void set_thread_limit(unsigned limit) { g_thread_limit = limit; }

unsigned thread_limit() {
    const unsigned limit = g_thread_limit.load();
    if (limit != 0) return limit;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(thread_limit(), n);
    if (workers <= 1) {
        if (n > 0) body(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin < end) threads.emplace_back([&body, begin, end] { body(begin, end); });
    }
    body(0, std::min(n, chunk));
}

}  // namespace tailscope
