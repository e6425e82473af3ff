#pragma once

#include <cstdint>
#include <string_view>

namespace stride {

/// Finalizer from SplitMix64; a bijection on 64-bit values.
std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// Derives a subordinate seed from a master seed and a subsystem label.
///
/// Every random stream in a run is seeded through this function, so a run is
/// fully determined by its master seed:
///
///     derive_seed(master, label) = splitmix64(master ^ splitmix64(fnv1a64(label)))
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

}  // namespace stride
