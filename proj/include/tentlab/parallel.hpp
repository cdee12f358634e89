#pragma once

#include <cstddef>
#include <functional>

namespace tentlab {

/// Worker count: TENTLAB_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

/// Overrides the environment for the current process (0 restores the default).
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n) on up to thread_count() threads with a static
/// block partition. Bodies must write only to slots owned by their index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tentlab
