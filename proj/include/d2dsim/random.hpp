#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace d2dsim {

using Engine = std::mt19937_64;

/// Builds an engine from a tuple of keys. Distinct key tuples give
/// independent streams, so a draw can be addressed by (seed, link, index)
/// instead of by its position in one long sequence.
inline Engine keyed_engine(std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(keys.size() * 2);
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

/// Collapses a key tuple into a single 64-bit seed.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) {
  Engine eng = keyed_engine(keys);
  return eng();
}

}  // namespace d2dsim
