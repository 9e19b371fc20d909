#include "eit/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eit {

BigUint::BigUint(std::uint64_t v) {
  limbs_.push_back(static_cast<std::uint32_t>(v));
  if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
}

void BigUint::mul(std::uint32_t v) {
  std::uint64_t carry = 0;
  for (auto& limb : limbs_) {
    const std::uint64_t p = static_cast<std::uint64_t>(limb) * v + carry;
    limb = static_cast<std::uint32_t>(p);
    carry = p >> 32;
  }
  if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
}

void BigUint::div_exact(std::uint32_t v) {
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    const std::uint64_t cur = (rem << 32) | limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(cur / v);
    rem = cur % v;
  }
  if (rem != 0) throw std::logic_error("BigUint::div_exact: remainder nonzero");
  while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
}

bool BigUint::equals_u64(std::uint64_t v) const {
  return *this == BigUint(v);
}

std::string BigUint::to_string() const {
  std::vector<std::uint32_t> tmp = limbs_;
  std::string out;
  auto all_zero = [&] {
    return std::all_of(tmp.begin(), tmp.end(), [](std::uint32_t l) { return l == 0; });
  };
  if (all_zero()) return "0";
  while (!all_zero()) {
    std::uint64_t rem = 0;
    for (std::size_t i = tmp.size(); i-- > 0;) {
      const std::uint64_t cur = (rem << 32) | tmp[i];
      tmp[i] = static_cast<std::uint32_t>(cur / 1000000000u);
      rem = cur % 1000000000u;
    }
    for (int d = 0; d < 9; ++d) {
      out.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
    }
  }
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  std::reverse(out.begin(), out.end());
  return out;
}

std::size_t BigUint::digit_count() const { return to_string().size(); }

double BigUint::log10() const {
  // top three limbs give ~96 bits of mantissa, plenty for a log
  const std::size_t n = limbs_.size();
  const std::size_t lo = n > 3 ? n - 3 : 0;
  double top = 0.0;
  for (std::size_t i = n; i-- > lo;) top = top * 4294967296.0 + limbs_[i];
  return std::log10(top) + static_cast<double>(lo) * 32.0 * std::log10(2.0);
}

BigUint count_inclusions(std::uint64_t n_cells, std::uint64_t n_i) {
  if (n_i > n_cells) throw std::invalid_argument("count_inclusions: n_i exceeds cell count");
  if (n_i > n_cells - n_i) n_i = n_cells - n_i;
  BigUint c(1);
  // after step i the value is C(n_cells - n_i + i, i), an integer throughout
  for (std::uint64_t i = 1; i <= n_i; ++i) {
    c.mul(static_cast<std::uint32_t>(n_cells - n_i + i));
    c.div_exact(static_cast<std::uint32_t>(i));
  }
  return c;
}

}  // namespace eit
