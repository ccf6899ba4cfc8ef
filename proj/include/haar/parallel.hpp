#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "haar/linalg.hpp"

namespace haar {

// requested > 0 wins; otherwise HAAR_TOOLKIT_THREADS, otherwise hardware concurrency.
int resolve_threads(int requested);

// Runs body(i) for every i in [0, n). Work is cut into fixed blocks, so which
// thread runs which block never affects any stored result.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

// out[i] = f(i), computed in parallel.
std::vector<double> parallel_samples(std::size_t n, int threads,
                                     const std::function<double(std::size_t)>& f);

struct MeanSE {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double se = 0.0;        // standard error of the mean
  std::size_t n = 0;
};

MeanSE mean_se(std::span<const double> xs);

// Sample variance with the standard error of that variance estimate.
struct VarianceSE {
  double variance = 0.0;
  double se = 0.0;
};
VarianceSE variance_se(std::span<const double> xs);

// Entrywise mean of a matrix-valued sample with per-entry standard errors of the
// real and imaginary parts.
struct MatrixStats {
  CMat mean;
  RMat se_re;
  RMat se_im;
  std::size_t n = 0;
};

MatrixStats parallel_matrix_mean(std::size_t n, int threads, Eigen::Index rows, Eigen::Index cols,
                                 const std::function<CMat(std::size_t)>& f);

// True when every entry satisfies |mean - exact| <= n_se * se + floor, separately
// for real and imaginary parts.
bool within_se(const MatrixStats& s, const CMat& exact, double n_se, double floor = 1e-12);

// Largest |mean - exact| / se over entries with se > 0.
double max_z(const MatrixStats& s, const CMat& exact);

}  // namespace haar
