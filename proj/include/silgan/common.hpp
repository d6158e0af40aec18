#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace silgan {

/// Invalid user-supplied configuration (bad thresholds, weights, ...).
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Invalid call parameter (window size, crop offset, slice bounds, ...).
struct param_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Tensor/signal shape violates an interface contract.
struct shape_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Base for dataset/checkpoint container failures.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct magic_error : io_error {
  using io_error::io_error;
};

struct version_error : io_error {
  using io_error::io_error;
};

struct truncation_error : io_error {
  using io_error::io_error;
};

/// Non-finite value surfaced during training or search.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent seed for a named substream of `seed`. Keeping
/// substreams separate lets callers that skip a draw (e.g. no simplex draw
/// when K=1) still consume identical style-noise sequences.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t stream_id) {
  return splitmix64(seed ^ splitmix64(stream_id + 1));
}

}  // namespace silgan
