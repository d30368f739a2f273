#include "expsum/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "expsum/errors.hpp"

namespace expsum {

namespace {

void require_same(std::uint32_t a, std::uint32_t b) {
  if (a != b) throw DomainError("cyclotomic values over different primes");
}

}  // namespace

CycloValue::CycloValue(std::uint32_t p, std::vector<std::int64_t> counts)
    : p_(p), counts_(std::move(counts)) {
  if (counts_.size() != p_) throw DomainError("cyclotomic count vector must have length p");
}

CycloValue CycloValue::integer(std::uint32_t p, std::int64_t v) {
  CycloValue c(p);
  c.counts_[0] = v;
  return c;
}

CycloValue& CycloValue::operator+=(const CycloValue& o) {
  require_same(p_, o.p_);
  for (std::uint32_t j = 0; j < p_; ++j) counts_[j] += o.counts_[j];
  return *this;
}

CycloValue& CycloValue::operator-=(const CycloValue& o) {
  require_same(p_, o.p_);
  for (std::uint32_t j = 0; j < p_; ++j) counts_[j] -= o.counts_[j];
  return *this;
}

CycloValue CycloValue::operator+(const CycloValue& o) const {
  CycloValue r = *this;
  r += o;
  return r;
}

CycloValue CycloValue::operator-(const CycloValue& o) const {
  CycloValue r = *this;
  r -= o;
  return r;
}

CycloValue CycloValue::operator*(std::int64_t k) const {
  CycloValue r = *this;
  for (auto& c : r.counts_) c *= k;
  return r;
}

CycloValue CycloValue::rotated(std::uint32_t j) const {
  CycloValue r(p_);
  for (std::uint32_t i = 0; i < p_; ++i) r.counts_[(i + j) % p_] = counts_[i];
  return r;
}

CycloValue CycloValue::operator*(const CycloValue& o) const {
  require_same(p_, o.p_);
  CycloValue r(p_);
  for (std::uint32_t i = 0; i < p_; ++i) {
    if (counts_[i] == 0) continue;
    for (std::uint32_t j = 0; j < p_; ++j) r.counts_[(i + j) % p_] += counts_[i] * o.counts_[j];
  }
  return r;
}

CycloValue CycloValue::canonical() const {
  if (counts_.empty()) return *this;
  CycloValue r = *this;
  const std::int64_t mn = *std::min_element(counts_.begin(), counts_.end());
  for (auto& c : r.counts_) c -= mn;
  return r;
}

bool CycloValue::operator==(const CycloValue& o) const {
  if (p_ != o.p_) return false;
  if (p_ == 0) return true;
  const std::int64_t shift = counts_[0] - o.counts_[0];
  for (std::uint32_t j = 1; j < p_; ++j) {
    if (counts_[j] - o.counts_[j] != shift) return false;
  }
  return true;
}

bool CycloValue::is_zero() const {
  return std::all_of(counts_.begin(), counts_.end(), [&](std::int64_t c) { return c == counts_[0]; });
}

std::optional<std::int64_t> CycloValue::as_integer() const {
  for (std::uint32_t j = 2; j < p_; ++j) {
    if (counts_[j] != counts_[1]) return std::nullopt;
  }
  return p_ < 2 ? counts_.at(0) : counts_[0] - counts_[1];
}

std::complex<double> CycloValue::to_complex() const {
  if (auto v = as_integer()) return {static_cast<double>(*v), 0.0};
  long double re = 0, im = 0;
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::uint32_t j = 0; j < p_; ++j) {
    if (counts_[j] == 0) continue;
    const long double ang = two_pi * j / p_;
    re += static_cast<long double>(counts_[j]) * std::cos(ang);
    im += static_cast<long double>(counts_[j]) * std::sin(ang);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

std::string CycloValue::to_string() const {
  const CycloValue c = canonical();
  std::string s = "[";
  for (std::uint32_t j = 0; j < p_; ++j) {
    if (j) s += ",";
    s += std::to_string(c.counts_[j]);
  }
  return s + "]";
}

}  // namespace expsum
