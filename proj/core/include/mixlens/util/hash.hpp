#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mixlens::util {

/// 64-bit FNV-1a. Stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for one instance, independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::string_view instance_id);

std::string to_hex(std::uint64_t value);

}  // namespace mixlens::util
