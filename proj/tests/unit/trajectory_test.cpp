// Copyright 2026 The failsafe-nmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "failsafe/errors.hpp"
#include "failsafe/trajectory.hpp"

namespace failsafe
{
namespace
{

// Boundary residuals evaluated from the raw coefficients.
double boundary_residual(
  const QuinticPath & p, double y0, double y0p, double y0pp, double yf, double yfp, double yfpp)
{
  const auto & a = p.coeffs;
  const double t = p.duration;
  auto pos = [&](double s) {
    return a[0] + s * (a[1] + s * (a[2] + s * (a[3] + s * (a[4] + s * a[5]))));
  };
  auto vel = [&](double s) {
    return a[1] + s * (2 * a[2] + s * (3 * a[3] + s * (4 * a[4] + s * 5 * a[5])));
  };
  auto acc = [&](double s) { return 2 * a[2] + s * (6 * a[3] + s * (12 * a[4] + s * 20 * a[5])); };
  double r = 0.0;
  for (double v : {pos(0) - y0, vel(0) - y0p, acc(0) - y0pp, pos(t) - yf, vel(t) - yfp,
                   acc(t) - yfpp}) {
    r = std::max(r, std::abs(v));
  }
  return r;
}

TEST(FitQuintic, FlatBoundaryGivesZeroPolynomial)
{
  const auto p = fit_quintic(0, 0, 0, 0, 0, 0, 4.0);
  for (double c : p.coeffs) {
    EXPECT_EQ(c, 0.0);
  }
}

TEST(FitQuintic, ShoulderManoeuvreMatchesClosedForm)
{
  const double d = 3.5, t = 5.0;
  const auto p = fit_quintic(0, 0, 0, d, 0, 0, t);
  const std::array<double, 6> expected{
    0, 0, 0, 10 * d / std::pow(t, 3), -15 * d / std::pow(t, 4), 6 * d / std::pow(t, 5)};
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(p.coeffs[i], expected[i], 1e-12) << "a" << i;
  }
  EXPECT_NEAR(p.coeffs[3], 0.28, 1e-12);
  EXPECT_NEAR(p.coeffs[4], -0.084, 1e-12);
  EXPECT_NEAR(p.coeffs[5], 0.00672, 1e-12);
}

TEST(FitQuintic, TimeReversalSymmetry)
{
  const double t = 4.5;
  const auto fwd = fit_quintic(0, 0, 0, -3.5, 0, 0, t);
  const auto rev = fit_quintic(-3.5, 0, 0, 0, 0, 0, t);
  for (int i = 0; i < 20; ++i) {
    const double s = t * i / 19.0;
    EXPECT_NEAR(rev.position(s), fwd.position(t - s), 1e-9);
  }
}

TEST(FitQuintic, RejectsDegenerateDuration)
{
  EXPECT_THROW(fit_quintic(0, 0, 0, 1, 0, 0, 0.0), InvalidArgumentError);
  EXPECT_THROW(fit_quintic(0, 0, 0, 1, 0, 0, -1.0), InvalidArgumentError);
}

TEST(FitQuintic, RandomBoundaryConditionsHold)
{
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> delta(-5.0, 5.0), dur(0.5, 10.0), der(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double y0 = delta(rng), yf = delta(rng), t = dur(rng);
    const double y0p = der(rng), y0pp = der(rng), yfp = der(rng), yfpp = der(rng);
    const auto p = fit_quintic(y0, y0p, y0pp, yf, yfp, yfpp, t);
    EXPECT_LE(boundary_residual(p, y0, y0p, y0pp, yf, yfp, yfpp), 1e-9);
  }
}

TEST(FitQuintic, ZeroDerivativeFitIsMonotone)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> delta(-5.0, 5.0), dur(0.5, 10.0);
  for (int i = 0; i < 50; ++i) {
    const double d = delta(rng), t = dur(rng);
    const auto p = fit_quintic(0, 0, 0, d, 0, 0, t);
    double prev = p.position(0.0);
    for (int k = 1; k <= 200; ++k) {
      const double y = p.position(t * k / 200.0);
      if (d >= 0) {
        EXPECT_GE(y, prev - 1e-12);
      } else {
        EXPECT_LE(y, prev + 1e-12);
      }
      prev = y;
    }
  }
}

TEST(SampleReference, TerminalHold)
{
  const auto p = fit_quintic(0, 0, 0, -3.5, 0, 0, 4.5);
  const auto refs = sample_reference(p, 4.5, 1.26, 30, 0.01, 20.0);
  ASSERT_EQ(refs.size(), 30u);
  for (const auto & r : refs) {
    EXPECT_EQ(r.z_v_x, 1.26);
    EXPECT_NEAR(r.z_d_y, -3.5, 1e-12);
    EXPECT_NEAR(r.z_theta, 0.0, 1e-12);
  }
  for (const auto & r : sample_reference(p, 100.0, 1.26, 5, 0.01, 20.0)) {
    EXPECT_NEAR(r.z_d_y, -3.5, 1e-12);
    EXPECT_EQ(r.z_theta, 0.0);
  }
}

TEST(SampleReference, StartPoint)
{
  const auto p = fit_quintic(0, 0, 0, -3.5, 0, 0, 4.5);
  const auto r = sample_reference(p, 0.0, 25.0, 1, 0.01, 25.0).front();
  EXPECT_EQ(r.z_v_x, 25.0);
  EXPECT_EQ(r.z_d_y, 0.0);
  EXPECT_EQ(r.z_theta, 0.0);
}

TEST(SampleReference, MidpointIsHalfTheOffset)
{
  const auto p = fit_quintic(0, 0, 0, 3.5, 0, 0, 5.0);
  const auto r = sample_reference(p, 2.5, 20.0, 1, 0.01, 20.0).front();
  const double expected = 0.28 * std::pow(2.5, 3) - 0.084 * std::pow(2.5, 4) +
                          0.00672 * std::pow(2.5, 5);
  EXPECT_NEAR(r.z_d_y, expected, 1e-12);
  EXPECT_NEAR(r.z_d_y, 1.75, 1e-12);
}

TEST(SampleReference, HeadingFollowsSlope)
{
  const auto p = fit_quintic(0, 0, 0, -3.5, 0, 0, 4.5);
  const auto r = sample_reference(p, 2.0, 20.0, 1, 0.01, 20.0).front();
  EXPECT_NEAR(r.z_theta, std::atan(p.velocity(2.0) / 20.0), 1e-15);
}

TEST(SampleReference, ShiftedWindowsOverlapExactly)
{
  const auto p = fit_quintic(0, 0, 0, -3.5, 0, 0, 4.5);
  for (std::int64_t k = 0; k < 500; k += 7) {
    const auto a = sample_reference_steps(p, k, 10.0, 30, 0.01, 20.0);
    const auto b = sample_reference_steps(p, k + 1, 10.0, 30, 0.01, 20.0);
    for (int i = 0; i + 1 < 30; ++i) {
      EXPECT_EQ(a[i + 1], b[i]);
    }
  }
}

}  // namespace
}  // namespace failsafe
