#pragma once

#include <cstddef>
#include <functional>

namespace mixlens::util {

/// Runs body(i) for i in [0, n) on up to `jobs` threads. After a failure no
/// new indices are started; once workers stop, the exception with the
/// lowest index among those observed is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

/// std::thread::hardware_concurrency(), at least 1.
unsigned default_jobs();

}  // namespace mixlens::util
