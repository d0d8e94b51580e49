#pragma once

// Grid sweep kernels. Every sweep has a serial reference (`*_serial`) and an
// OpenMP version with identical per-point arithmetic, so the two produce
// bit-identical output in the same order. Exceptions thrown by the point
// function are captured per point; the one with the lowest index is rethrown
// after the loop.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#if defined(ITERMEAN_HAVE_OPENMP)
#include <omp.h>
#endif

namespace itermean::kernels {

namespace detail {

inline void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

template <typename Fn>
std::vector<double> map1d_serial(std::span<const double> xs, Fn&& fn) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
  return out;
}

template <typename Fn>
std::vector<double> map1d(std::span<const double> xs, Fn&& fn) {
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  std::vector<double> out(xs.size());
  std::vector<std::exception_ptr> errors(xs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = fn(xs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  detail::rethrow_first(errors);
  return out;
}

/// Row-major values fn(xs[i], ys[j]) at index i * ys.size() + j.
template <typename Fn>
std::vector<double> map2d_serial(std::span<const double> xs, std::span<const double> ys,
                                 Fn&& fn) {
  std::vector<double> out(xs.size() * ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) out[i * ys.size() + j] = fn(xs[i], ys[j]);
  }
  return out;
}

template <typename Fn>
std::vector<double> map2d(std::span<const double> xs, std::span<const double> ys, Fn&& fn) {
  const auto rows = static_cast<std::ptrdiff_t>(xs.size());
  const std::size_t cols = ys.size();
  std::vector<double> out(xs.size() * cols);
  std::vector<std::exception_ptr> errors(xs.size() * cols);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * cols + j;
      try {
        out[k] = fn(xs[i], ys[j]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  }
  detail::rethrow_first(errors);
  return out;
}

template <typename Fn>
std::vector<double> map1d(std::span<const double> xs, Fn&& fn, bool parallel) {
  return parallel ? map1d(xs, fn) : map1d_serial(xs, fn);
}

template <typename Fn>
std::vector<double> map2d(std::span<const double> xs, std::span<const double> ys, Fn&& fn,
                          bool parallel) {
  return parallel ? map2d(xs, ys, fn) : map2d_serial(xs, ys, fn);
}

/// Minimum of fn over the 3-D lattice axis^3, with the argmin (first in
/// lexicographic order on ties).
struct Argmin3 {
  double value;
  std::size_t i, j, k;
};

template <typename Fn>
Argmin3 min3d_serial(std::span<const double> axis, Fn&& fn) {
  Argmin3 best{fn(axis[0], axis[0], axis[0]), 0, 0, 0};
  for (std::size_t i = 0; i < axis.size(); ++i)
    for (std::size_t j = 0; j < axis.size(); ++j)
      for (std::size_t k = 0; k < axis.size(); ++k) {
        const double v = fn(axis[i], axis[j], axis[k]);
        if (v < best.value) best = {v, i, j, k};
      }
  return best;
}

template <typename Fn>
Argmin3 min3d(std::span<const double> axis, Fn&& fn) {
  const auto n = static_cast<std::ptrdiff_t>(axis.size());
  // one slab minimum per i, reduced in index order afterwards
  std::vector<Argmin3> slabs(axis.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Argmin3 best{fn(axis[i], axis[0], axis[0]), static_cast<std::size_t>(i), 0, 0};
    for (std::size_t j = 0; j < axis.size(); ++j)
      for (std::size_t k = 0; k < axis.size(); ++k) {
        const double v = fn(axis[i], axis[j], axis[k]);
        if (v < best.value) best = {v, static_cast<std::size_t>(i), j, k};
      }
    slabs[i] = best;
  }
  Argmin3 best = slabs[0];
  for (const auto& s : slabs) {
    if (s.value < best.value) best = s;
  }
  return best;
}

inline int max_threads() {
#if defined(ITERMEAN_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace itermean::kernels
