#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eit {

// Minimal arbitrary-precision unsigned integer, enough for exact binomial
// coefficients of the inclusion-count formula n! / (k! (n-k)!).
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  explicit BigUint(std::uint64_t v);

  void mul(std::uint32_t v);
  void div_exact(std::uint32_t v);  // requires exact divisibility

  bool operator==(const BigUint& other) const { return limbs_ == other.limbs_; }
  bool equals_u64(std::uint64_t v) const;

  std::string to_string() const;
  std::size_t digit_count() const;
  double log10() const;

 private:
  std::vector<std::uint32_t> limbs_;  // little endian, base 2^32
};

/// Exact binomial coefficient C(n_cells, n_i).
BigUint count_inclusions(std::uint64_t n_cells, std::uint64_t n_i);

}  // namespace eit
