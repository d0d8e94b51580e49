#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "itermean/config.hpp"
#include "itermean/kernels.hpp"

using namespace itermean;

TEST(Kernels, Map1dMatchesSerialBitForBit) {
  const auto xs = LogGrid{1e-3, 1e3, 1001}.points();
  const auto fn = [](double x) { return std::log1p(x) * std::sqrt(x) / (1 + x * x); };
  EXPECT_EQ(kernels::map1d(xs, fn), kernels::map1d_serial(xs, fn));
}

TEST(Kernels, Map2dIsRowMajorAndMatchesSerial) {
  const std::vector<double> xs{1, 2, 3}, ys{10, 20};
  const auto fn = [](double x, double y) { return x * 100 + y; };
  const auto par = kernels::map2d(xs, ys, fn);
  EXPECT_EQ(par, (std::vector<double>{110, 120, 210, 220, 310, 320}));
  EXPECT_EQ(par, kernels::map2d_serial(xs, ys, fn));
}

TEST(Kernels, LowestIndexExceptionWins) {
  std::vector<double> xs(200);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
  const auto fn = [](double x) -> double {
    if (x >= 17) throw std::runtime_error("bad " + std::to_string(static_cast<int>(x)));
    return x;
  };
  for (int rep = 0; rep < 5; ++rep) {
    try {
      (void)kernels::map1d(xs, fn);
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "bad 17");
    }
  }
}

TEST(Kernels, Min3dMatchesSerialIncludingArgmin) {
  std::vector<double> axis;
  for (int i = 0; i <= 40; ++i) axis.push_back(-2.0 + 0.1 * i);
  const auto fn = [](double a, double b, double c) {
    return (a - 0.3) * (a - 0.3) + std::abs(b + 1.1) + (c * c - 1) * (c * c - 1);
  };
  const auto p = kernels::min3d(axis, fn), s = kernels::min3d_serial(axis, fn);
  EXPECT_EQ(p.value, s.value);
  EXPECT_EQ(p.i, s.i);
  EXPECT_EQ(p.j, s.j);
  EXPECT_EQ(p.k, s.k);
}

TEST(Kernels, Min3dTiesResolveToFirstIndex) {
  const std::vector<double> axis{0, 1, 2, 3};
  const auto flat = [](double, double, double) { return 1.0; };
  const auto p = kernels::min3d(axis, flat);
  EXPECT_EQ(p.i + p.j + p.k, 0u);
}
