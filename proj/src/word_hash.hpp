#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mealy::detail {

struct WordHash {
  std::size_t operator()(const std::vector<std::uint32_t>& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto v : w) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace mealy::detail
