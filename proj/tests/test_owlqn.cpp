#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spellvar/owlqn.hpp"
#include "spellvar/random.hpp"

using namespace spellvar;
using namespace spellvar::optim;

TEST_CASE("L-BFGS finds the Rosenbrock minimum") {
  auto f = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  OwlqnOptions opt;
  opt.max_iterations = 500;
  opt.gradient_tolerance = 1e-8;
  const auto r = minimize(f, {-1.2, 1.0}, opt);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("OWL-QN soft-thresholds a separable quadratic") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 12;
    std::vector<double> a(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(0.5, 3.0);
      c[i] = rng.uniform(-3.0, 3.0);
    }
    const double l1 = rng.uniform(0.1, 2.0);
    auto f = [&](std::span<const double> x, std::span<double> g) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = a[i] * (x[i] - c[i]);
        v += 0.5 * a[i] * (x[i] - c[i]) * (x[i] - c[i]);
      }
      return v;
    };
    OwlqnOptions opt;
    opt.l1 = l1;
    opt.gradient_tolerance = 1e-10;
    const auto r = minimize(f, std::vector<double>(n, 0.0), opt);
    for (std::size_t i = 0; i < n; ++i) {
      const double shrunk = std::max(std::abs(c[i]) - l1 / a[i], 0.0);
      const double expected = std::copysign(shrunk, c[i]);
      if (shrunk == 0.0) {
        CHECK(r.x[i] == 0.0);
      } else {
        CHECK(r.x[i] == doctest::Approx(expected).epsilon(1e-6));
      }
    }
    for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] <= r.history[k - 1] + 1e-12);
  }
}

TEST_CASE("pseudo-gradient at the kink") {
  const std::vector<double> x{0.0, 0.0, 0.0, 1.0, -1.0};
  const std::vector<double> g{0.5, 2.0, -2.0, 0.5, 0.5};
  std::vector<double> out(5);
  pseudo_gradient(x, g, 1.0, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 1.0);
  CHECK(out[2] == -1.0);
  CHECK(out[3] == 1.5);
  CHECK(out[4] == -0.5);
}

TEST_CASE("zero iterations returns the start point") {
  auto f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2.0 * x[0];
    return x[0] * x[0];
  };
  OwlqnOptions opt;
  opt.max_iterations = 0;
  const auto r = minimize(f, {3.0}, opt);
  CHECK(r.x[0] == 3.0);
  CHECK(r.iterations == 0);
}

TEST_CASE("non-finite start is rejected") {
  auto f = [](std::span<const double>, std::span<double> g) {
    g[0] = 0.0;
    return std::nan("");
  };
  CHECK_THROWS_AS(minimize(f, {0.0}, OwlqnOptions{}), std::runtime_error);
}
