#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cnsga {

// Fixed-length bit string; bit k set means feature k is selected.
class Genome {
 public:
  Genome() = default;
  explicit Genome(std::size_t length, bool value = false) : bits_(length, value ? 1 : 0) {}

  // Parses a string of '0'/'1' characters. Throws std::invalid_argument on
  // any other character.
  static Genome from_string(std::string_view bits);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  bool operator[](std::size_t k) const { return bits_[k] != 0; }
  void set(std::size_t k, bool value) { bits_[k] = value ? 1 : 0; }
  void flip(std::size_t k) { bits_[k] ^= 1; }

  std::size_t count() const;
  bool none() const { return count() == 0; }

  std::string to_string() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Number of differing positions. Throws std::invalid_argument on a length
// mismatch.
std::size_t hamming(const Genome& a, const Genome& b);

struct GenomeHash {
  std::size_t operator()(const Genome& g) const noexcept;
};

}  // namespace cnsga
