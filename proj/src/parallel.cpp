#include "haar/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace haar {

namespace {

constexpr std::size_t kBlock = 256;

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HAAR_TOOLKIT_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(blocks, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
      const std::size_t lo = b * kBlock, hi = std::min(n, lo + kBlock);
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> parallel_samples(std::size_t n, int threads,
                                     const std::function<double(std::size_t)>& f) {
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

MeanSE mean_se(std::span<const double> xs) {
  MeanSE r;
  r.n = xs.size();
  if (xs.empty()) return r;
  double s = 0;
  for (double x : xs) s += x;
  r.mean = s / static_cast<double>(r.n);
  if (r.n < 2) return r;
  double ss = 0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.variance = ss / static_cast<double>(r.n - 1);
  r.se = std::sqrt(r.variance / static_cast<double>(r.n));
  return r;
}

VarianceSE variance_se(std::span<const double> xs) {
  const MeanSE m = mean_se(xs);
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m.mean) * (xs[i] - m.mean);
  const MeanSE v = mean_se(sq);
  // Bessel factor on the point estimate; the delta-method SE is unaffected at this order.
  return {m.variance, v.se};
}

MatrixStats parallel_matrix_mean(std::size_t n, int threads, Eigen::Index rows, Eigen::Index cols,
                                 const std::function<CMat(std::size_t)>& f) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<CMat> sum(blocks, CMat::Zero(rows, cols));
  std::vector<RMat> sq_re(blocks, RMat::Zero(rows, cols));
  std::vector<RMat> sq_im(blocks, RMat::Zero(rows, cols));

  // One task per block keeps the per-block fold order fixed.
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t lo = b * kBlock, hi = std::min(n, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      const CMat x = f(i);
      sum[b] += x;
      sq_re[b] += x.real().cwiseAbs2();
      sq_im[b] += x.imag().cwiseAbs2();
    }
  });

  CMat total = CMat::Zero(rows, cols);
  RMat tre = RMat::Zero(rows, cols), tim = RMat::Zero(rows, cols);
  for (std::size_t b = 0; b < blocks; ++b) {
    total += sum[b];
    tre += sq_re[b];
    tim += sq_im[b];
  }
  MatrixStats s;
  s.n = n;
  const double dn = static_cast<double>(n);
  s.mean = total / dn;
  s.se_re = RMat::Zero(rows, cols);
  s.se_im = RMat::Zero(rows, cols);
  if (n >= 2) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double mr = s.mean(i, j).real(), mi = s.mean(i, j).imag();
        const double vr = std::max(0.0, (tre(i, j) - dn * mr * mr) / (dn - 1));
        const double vi = std::max(0.0, (tim(i, j) - dn * mi * mi) / (dn - 1));
        s.se_re(i, j) = std::sqrt(vr / dn);
        s.se_im(i, j) = std::sqrt(vi / dn);
      }
    }
  }
  return s;
}

bool within_se(const MatrixStats& s, const CMat& exact, double n_se, double floor) {
  for (Eigen::Index i = 0; i < exact.rows(); ++i) {
    for (Eigen::Index j = 0; j < exact.cols(); ++j) {
      const Complex diff = s.mean(i, j) - exact(i, j);
      if (std::abs(diff.real()) > n_se * s.se_re(i, j) + floor) return false;
      if (std::abs(diff.imag()) > n_se * s.se_im(i, j) + floor) return false;
    }
  }
  return true;
}

double max_z(const MatrixStats& s, const CMat& exact) {
  double z = 0;
  for (Eigen::Index i = 0; i < exact.rows(); ++i) {
    for (Eigen::Index j = 0; j < exact.cols(); ++j) {
      const Complex diff = s.mean(i, j) - exact(i, j);
      if (s.se_re(i, j) > 0) z = std::max(z, std::abs(diff.real()) / s.se_re(i, j));
      if (s.se_im(i, j) > 0) z = std::max(z, std::abs(diff.imag()) / s.se_im(i, j));
    }
  }
  return z;
}

}  // namespace haar
