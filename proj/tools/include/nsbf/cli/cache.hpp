#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "nsbf/coefficients.hpp"

namespace nsbf::cli {

inline constexpr char kCacheMagic[8] = {'N', 'S', 'B', 'F', 'C', 'O', 'E', 'F'};
inline constexpr std::uint32_t kCacheVersion = 1;

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Layout: magic, version (u32), key (u64), payload size (u64), payload,
/// FNV-1a of the payload (u64). Little-endian host order.
void write_cache(const std::filesystem::path& path, std::uint64_t key, const CoefficientSet& coeffs);

/// The stored set when magic, version, key, size and checksum all match and
/// the payload fits the grid; otherwise nullopt with the reason in why.
std::optional<CoefficientSet> read_cache(const std::filesystem::path& path, std::uint64_t key,
                                         const GridPtr& grid, std::string* why = nullptr);

}  // namespace nsbf::cli
