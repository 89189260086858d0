#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace epiplan {

// Fixed-width bitset sized at construction, one bit per atom of the task
// universe. operator< is a deterministic total order used as the
// "valuation ascending" schedule by partition refinement.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t width)
      : width_(width), words_((width + 63) / 64, 0) {}

  std::size_t size() const { return width_; }

  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i, bool value = true) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;
  friend std::strong_ordering operator<=>(const Bitset& a, const Bitset& b) {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

  // "0"/"1" per bit, lowest index first.
  std::string to_string() const {
    std::string out(width_, '0');
    for (std::size_t i = 0; i < width_; ++i) {
      if (test(i)) out[i] = '1';
    }
    return out;
  }

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace epiplan
