#include "expsum/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "expsum/errors.hpp"
#include "expsum/parallel.hpp"

namespace expsum {

namespace {

FieldPtr extension_field(std::uint32_t p, std::uint32_t n, std::size_t modulus_rank) {
  if (modulus_rank == 0) return FieldCtx::create(p, n);
  auto moduli = irreducible_moduli(p, n, modulus_rank + 1);
  if (moduli.size() <= modulus_rank) throw DomainError("not enough irreducible moduli of this degree");
  return FieldCtx::create_with_modulus(p, moduli[modulus_rank]);
}

}  // namespace

PowerSumSequence extension_sums(const SumSpec& spec, std::uint32_t p, std::size_t N, const EngineOptions& opt,
                                std::size_t modulus_rank) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (N == 0) throw DomainError("N must be positive");
  spec.validate();
  // Fail early on the largest field.
  std::uint64_t q = 1;
  for (std::size_t i = 0; i < N; ++i) {
    if (q > opt.enum_cap / p) throw CapExceeded("F_(p^N) exceeds the enumeration cap");
    q *= p;
  }
  checked_grid_size(q, spec.n, opt.enum_cap);
  PowerSumSequence seq;
  seq.p = p;
  seq.values.resize(N);
  seq.exact.resize(N);
  EngineOptions inner = opt;
  inner.workers = 1;
  parallel_for(N, opt.workers, [&](std::size_t i, unsigned) {
    auto k = extension_field(p, static_cast<std::uint32_t>(i + 1), modulus_rank);
    const auto r = eval_sum(spec, *k, inner);
    seq.values[i] = r.value;
    seq.exact[i] = r.exact;
  });
  return seq;
}

std::vector<double> WeightProfile::weights() const {
  std::vector<double> w;
  for (const auto& r : roots) w.push_back(r.weight);
  return w;
}

WeightProfile fit_recurrence(const PowerSumSequence& seq, double tol) {
  using Mat = Eigen::MatrixXcd;
  using Vec = Eigen::VectorXcd;
  const std::size_t N = seq.values.size();
  if (N < 2) throw RankError("at least two power sums are needed");
  if (!(tol > 0 && tol < 1)) throw DomainError("tolerance must lie in (0, 1)");
  const std::size_t M = N / 2;
  const std::size_t rows = N - M + 1;
  Mat H(rows, M);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < M; ++j) H(i, j) = seq.values[i + j];
  }
  Eigen::JacobiSVD<Mat> svd(H);
  const auto& sv = svd.singularValues();
  WeightProfile prof;
  prof.p = seq.p;
  for (Eigen::Index i = 0; i < sv.size(); ++i) prof.singular_values.push_back(sv(i));
  const double smax = sv.size() ? sv(0) : 0.0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * smax) ++r;
  }
  if (smax == 0.0) r = 0;
  if (r >= M) {
    throw RankError("recurrence rank is at least " + std::to_string(r) + " but N = " + std::to_string(N) +
                    " only resolves ranks up to " + std::to_string(M == 0 ? 0 : M - 1) + "; increase N");
  }
  prof.rank = r;
  prof.condition = r ? smax / sv(static_cast<Eigen::Index>(r - 1)) : 0.0;
  if (r == 0) {
    for (const auto& v : seq.values) prof.residual = std::max(prof.residual, std::abs(v));
    return prof;
  }

  // S_(k+r) = sum_i c_i S_(k+r-i), k = 1..N-r (0-based values index k-1).
  Mat A(N - r, r);
  Vec b(N - r);
  for (std::size_t k = 0; k < N - r; ++k) {
    for (std::size_t i = 1; i <= r; ++i) A(k, i - 1) = seq.values[k + r - i];
    b(k) = seq.values[k + r];
  }
  const Vec c = A.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  Mat comp = Mat::Zero(r, r);
  for (std::size_t i = 0; i < r; ++i) comp(0, i) = c(i);
  for (std::size_t i = 1; i < r; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Mat> es(comp);
  std::vector<std::complex<double>> alpha(r);
  for (std::size_t i = 0; i < r; ++i) alpha[i] = es.eigenvalues()(i);

  // Pair conjugates and clean near-real roots.
  std::vector<bool> used(r, false);
  for (std::size_t i = 0; i < r; ++i) {
    const double scale = std::max(1.0, std::abs(alpha[i]));
    if (std::abs(alpha[i].imag()) <= 1e-6 * scale) {
      bool real_input = true;
      for (const auto& v : seq.values) real_input = real_input && std::abs(v.imag()) <= 1e-9 * std::max(1.0, std::abs(v));
      if (real_input) alpha[i].imag(0.0);
      continue;
    }
    if (used[i]) continue;
    for (std::size_t j = i + 1; j < r; ++j) {
      if (!used[j] && std::abs(alpha[j] - std::conj(alpha[i])) <= 1e-6 * scale) {
        const std::complex<double> avg = 0.5 * (alpha[i] + std::conj(alpha[j]));
        alpha[i] = avg;
        alpha[j] = std::conj(avg);
        used[i] = used[j] = true;
        break;
      }
    }
  }

  Mat V(N, r);
  Vec s(N);
  for (std::size_t n = 0; n < N; ++n) {
    s(n) = seq.values[n];
    for (std::size_t j = 0; j < r; ++j) V(n, j) = std::pow(alpha[j], static_cast<double>(n + 1));
  }
  const Vec a = V.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(s);
  const double lp = std::log(static_cast<double>(seq.p));
  for (std::size_t j = 0; j < r; ++j) {
    SpectralRoot root;
    root.alpha = alpha[j];
    root.amplitude = a(j);
    const double rounded = std::round(a(j).real());
    prof.amplitude_error = std::max(prof.amplitude_error, std::abs(a(j) - std::complex<double>(rounded, 0.0)));
    root.sign = rounded < 0 ? -1 : 1;
    root.mult = static_cast<int>(std::abs(rounded));
    root.raw_weight = 2.0 * std::log(std::abs(alpha[j])) / lp;
    root.weight = std::round(2.0 * root.raw_weight) / 2.0;
    prof.roots.push_back(root);
  }
  std::sort(prof.roots.begin(), prof.roots.end(), [](const SpectralRoot& x, const SpectralRoot& y) {
    if (std::abs(x.alpha) != std::abs(y.alpha)) return std::abs(x.alpha) > std::abs(y.alpha);
    if (x.alpha.real() != y.alpha.real()) return x.alpha.real() > y.alpha.real();
    return x.alpha.imag() > y.alpha.imag();
  });
  double smax_abs = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    std::complex<double> rec = 0;
    for (const auto& root : prof.roots) {
      rec += static_cast<double>(root.sign * root.mult) * std::pow(root.alpha, static_cast<double>(n + 1));
    }
    prof.residual = std::max(prof.residual, std::abs(seq.values[n] - rec));
    smax_abs = std::max(smax_abs, std::abs(seq.values[n]));
  }
  prof.relative_residual = smax_abs > 0 ? prof.residual / smax_abs : prof.residual;
  return prof;
}

WeightCheck weight_check(const WeightProfile& profile, double w_max, double rel_tol) {
  WeightCheck out;
  for (std::size_t j = 0; j < profile.roots.size(); ++j) {
    const auto& r = profile.roots[j];
    const double expected = std::pow(static_cast<double>(profile.p), r.weight / 2.0);
    const bool on_grid = std::abs(std::abs(r.alpha) - expected) <= rel_tol * expected;
    if (r.weight > w_max + 1e-12 || !on_grid) {
      out.pass = false;
      out.offenders.push_back(j);
    }
  }
  return out;
}

QuasiOrthonormality quasi_orthonormality(const SumSpec& spec, std::uint32_t p, std::size_t N,
                                         const EngineOptions& opt) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  QuasiOrthonormality out;
  out.Q.resize(N);
  for (std::size_t n = 1; n <= N; ++n) {
    auto k = FieldCtx::create(p, static_cast<std::uint32_t>(n));
    out.Q[n - 1] = sum_of_squares(spec, *k, opt);
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double q : out.Q) {
    const double d = std::abs(q - 1.0);
    out.max_distance_from_one = std::max(out.max_distance_from_one, d);
    if (d > prev + 1e-12) out.monotone = false;
    prev = d;
  }
  return out;
}

}  // namespace expsum
