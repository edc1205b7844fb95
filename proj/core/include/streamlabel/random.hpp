#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace streamlabel {

// Independent named generator streams derived from one trial seed, so that
// e.g. the arrival sequence does not shift when a policy draws more coins.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view name) noexcept;

std::mt19937_64 make_substream(std::uint64_t seed, std::string_view name);

}  // namespace streamlabel
