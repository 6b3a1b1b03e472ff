#pragma once

#include <cstddef>
#include <functional>

namespace tailscope {

/// Caps the worker count used by parallel_for. 0 means hardware concurrency.
void set_thread_limit(unsigned limit);
unsigned thread_limit();

/// Calls body(begin, end) over disjoint chunks of [0, n). Each index is
/// visited exactly once, so results written per index do not depend on the
/// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tailscope
