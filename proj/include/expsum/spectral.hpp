#pragma once

// Extension-field power sums S_1..S_N and recovery of the generalized
// power-sum decomposition S_n = sum_j eps_j alpha_j^n.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "expsum/sum_engine.hpp"

namespace expsum {

struct PowerSumSequence {
  std::uint32_t p = 0;
  std::vector<std::complex<double>> values;       // S_1..S_N
  std::vector<std::optional<CycloValue>> exact;  // when the SumSpec is exact
};

/// S_n = sum over V(F_(p^n)) for n = 1..N. modulus_rank picks the k-th
/// monic irreducible (in increasing code order) as the model of each F_(p^n).
PowerSumSequence extension_sums(const SumSpec& spec, std::uint32_t p, std::size_t N, const EngineOptions& opt = {},
                                std::size_t modulus_rank = 0);

struct SpectralRoot {
  std::complex<double> alpha;
  int sign = 1;              // eps_j
  int mult = 1;              // |rounded amplitude|
  std::complex<double> amplitude;  // fitted coefficient of alpha^n
  double weight = 0;         // 2 log_p |alpha|, snapped to a half-integer
  double raw_weight = 0;
};

struct WeightProfile {
  std::uint32_t p = 0;
  std::size_t rank = 0;
  std::vector<SpectralRoot> roots;
  double residual = 0;           // max_n |S_n - sum eps mult alpha^n|
  double relative_residual = 0;  // residual / max_n |S_n|
  double amplitude_error = 0;    // max distance of fitted amplitudes from integers
  std::vector<double> singular_values;
  double condition = 0;          // sigma_max / sigma_rank of the Hankel matrix

  std::vector<double> weights() const;
};

/// Hankel rank detection (singular values below tol * sigma_max are zero),
/// recurrence by least squares, companion-matrix roots, Vandermonde amplitudes.
/// Throws RankError when the detected rank reaches floor(N / 2).
WeightProfile fit_recurrence(const PowerSumSequence& seq, double tol = 1e-6);

struct WeightCheck {
  bool pass = true;
  std::vector<std::size_t> offenders;  // indices into profile.roots
};
WeightCheck weight_check(const WeightProfile& profile, double w_max, double rel_tol = 1e-3);

struct QuasiOrthonormality {
  std::vector<double> Q;  // Q_1..Q_N
  double max_distance_from_one = 0;
  bool monotone = true;   // |Q_n - 1| nonincreasing
};
QuasiOrthonormality quasi_orthonormality(const SumSpec& spec, std::uint32_t p, std::size_t N,
                                         const EngineOptions& opt = {});

}  // namespace expsum
