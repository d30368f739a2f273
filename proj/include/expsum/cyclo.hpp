#pragma once

// Exact elements of Z[zeta_p] stored as coefficient vectors sum c_j zeta_p^j.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace expsum {

class CycloValue {
 public:
  CycloValue() = default;
  explicit CycloValue(std::uint32_t p) : p_(p), counts_(p, 0) {}
  CycloValue(std::uint32_t p, std::vector<std::int64_t> counts);
  static CycloValue integer(std::uint32_t p, std::int64_t v);

  std::uint32_t p() const { return p_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  /// Adds k * zeta^j.
  void add_term(std::uint32_t j, std::int64_t k = 1) { counts_[j % p_] += k; }
  CycloValue& operator+=(const CycloValue& o);
  CycloValue& operator-=(const CycloValue& o);
  CycloValue operator+(const CycloValue& o) const;
  CycloValue operator-(const CycloValue& o) const;
  CycloValue operator*(std::int64_t k) const;
  /// Multiplication by zeta^j.
  CycloValue rotated(std::uint32_t j) const;
  CycloValue operator*(const CycloValue& o) const;

  /// Representative with min count 0 (the relation sum_j zeta^j = 0 makes
  /// vectors differing by a constant equal).
  CycloValue canonical() const;
  bool operator==(const CycloValue& o) const;
  bool is_zero() const;
  /// The value as an integer when it lies in Z.
  std::optional<std::int64_t> as_integer() const;

  std::complex<double> to_complex() const;
  double abs() const { return std::abs(to_complex()); }
  /// e.g. "[3,0,1]" on the canonical representative.
  std::string to_string() const;

 private:
  std::uint32_t p_ = 0;
  std::vector<std::int64_t> counts_;
};

}  // namespace expsum
