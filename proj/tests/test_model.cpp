#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "ldg/model.hpp"

using namespace ldg;

namespace {

// Physically relevant sampling range: nonnegative states inside the
// admissible interval.
std::pair<double, double> sample_range(const ProblemSpec& s) {
  double lo = std::max(s.admissible_lo, 0.0) + 1e-6;
  double hi = std::min(s.admissible_hi, 5.0) - 1e-6;
  return {lo, hi};
}

}  // namespace

TEST_CASE("f*H'' is nonnegative across presets") {
  std::mt19937 rng(7);
  for (const auto& name : preset_names()) {
    const ProblemSpec s = preset(name).spec;
    auto [lo, hi] = sample_range(s);
    std::uniform_real_distribution<double> du(lo, hi);
    for (int i = 0; i < 1000; ++i) {
      double u = du(rng);
      CHECK(s.f(u) * s.H_second(u) >= -1e-12);
    }
  }
}

TEST_CASE("H'' matches a finite difference of H', H' one of H") {
  std::mt19937 rng(11);
  double eps = 1e-6;
  for (const auto& name : preset_names()) {
    const ProblemSpec s = preset(name).spec;
    auto [lo, hi] = sample_range(s);
    lo += 1e-3;
    hi -= 1e-3;
    if (name == "porous1d") continue;  // H'' kink at 1/2, handled below
    std::uniform_real_distribution<double> du(lo, hi);
    for (int i = 0; i < 50; ++i) {
      double u = du(rng);
      double fd2 = (s.H_prime(u + eps) - s.H_prime(u - eps)) / (2 * eps);
      CHECK(std::abs(fd2 - s.H_second(u)) <
            1e-5 * std::max(1.0, std::abs(s.H_second(u))));
      double fd1 = (s.H(u + eps) - s.H(u - eps)) / (2 * eps);
      CHECK(std::abs(fd1 - s.H_prime(u)) <
            1e-5 * std::max(1.0, std::abs(s.H_prime(u))));
    }
  }
}

TEST_CASE("porous1d entropy derivatives are consistent on both branches") {
  const ProblemSpec s = preset("porous1d").spec;
  double eps = 1e-6;
  for (double u : {0.1, 0.3, 0.49, 0.7, 0.9, 1.3}) {
    double fd2 = (s.H_prime(u + eps) - s.H_prime(u - eps)) / (2 * eps);
    CHECK(std::abs(fd2 - s.H_second(u)) < 1e-5);
    double fd1 = (s.H(u + eps) - s.H(u - eps)) / (2 * eps);
    CHECK(std::abs(fd1 - s.H_prime(u)) < 1e-5);
  }
  // H'' is continuous at the branch point 1/2.
  CHECK(s.H_second(0.5 - 1e-9) == doctest::Approx(s.H_second(0.5 + 1e-9)));
  CHECK(s.H(0.0) == doctest::Approx(0.0));
}

TEST_CASE("fermion entropy value at one half") {
  const ProblemSpec s = preset("fermion2d").spec;
  CHECK(s.H(0.5) == doctest::Approx(-std::log(2.0)));
  CHECK(s.H_prime(0.5) == doctest::Approx(0.0));
  CHECK(s.H_second(0.5) == doctest::Approx(4.0));
  CHECK(s.f(0.5) == doctest::Approx(0.25));
}

TEST_CASE("boson1d initial mass equals the mass parameter") {
  for (double mass : {1.0, 10.0}) {
    const ProblemSpec s = preset("boson1d", mass).spec;
    // trapezoid on a fine grid; the tails are ~exp(-32), far below tol
    int n = 200000;
    double a = s.lower[0], b = s.upper[0], h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      double x = a + i * h;
      double w = (i == 0 || i == n) ? 0.5 : 1.0;
      sum += w * s.u0(&x);
    }
    CHECK(sum * h == doctest::Approx(mass).epsilon(1e-7));
  }
}

TEST_CASE("accuracy1d source closes the PDE for the exact solution") {
  // residual of u_t - (f(u)(phi + H'(u))_x)_x - S at interior points, all
  // derivatives by central differences of the closed-form exact solution
  const ProblemSpec s = preset("accuracy1d").spec;
  REQUIRE(s.has_exact());
  REQUIRE(s.has_source());
  double eps = 1e-5;
  auto flux = [&](double x, double t) {
    auto mu = [&](double y) { return s.H_prime(s.exact(&y, t)); };
    double u = s.exact(&x, t);
    return s.f(u) * (mu(x + eps) - mu(x - eps)) / (2 * eps);
  };
  for (double t : {0.1, 0.7}) {
    for (double x : {-0.6, -0.25, 0.0, 0.4, 0.8}) {
      double ut = (s.exact(&x, t + eps) - s.exact(&x, t - eps)) / (2 * eps);
      double div = (flux(x + eps, t) - flux(x - eps, t)) / (2 * eps);
      double res = ut - div - s.source(&x, t);
      CHECK(std::abs(res) < 1e-5);
    }
  }
}

TEST_CASE("entropy density adds the potential term") {
  const ProblemSpec s = preset("doublewell1d").spec;
  double x = 0.9, u = 0.4;
  CHECK(entropy_density(s, u, &x) ==
        doctest::Approx(u * s.phi(&x) + 0.5 * u * u));
}

TEST_CASE("entropy density stays finite at the ends of the range") {
  const ProblemSpec s = preset("fermion2d").spec;
  double x[2] = {0.0, 0.0};
  CHECK(std::isfinite(entropy_density(s, 0.0, x)));
  CHECK(std::isfinite(entropy_density(s, 1.0, x)));
}

TEST_CASE("polynomial problem assembles consistent callables") {
  // f(u) = u, H'(u) = u^2  ->  H(u) = u^3/3, H'' = 2u
  auto spec = make_polynomial_problem({0.0, 1.0}, {0.0, 0.0, 1.0},
                                      {-1.0, 1.0},
                                      [](const double*) { return 1.0; });
  CHECK(spec.f(0.7) == doctest::Approx(0.7));
  CHECK(spec.H_prime(0.7) == doctest::Approx(0.49));
  CHECK(spec.H_second(0.7) == doctest::Approx(1.4));
  CHECK(spec.H(0.7) == doctest::Approx(0.7 * 0.7 * 0.7 / 3.0));
}

TEST_CASE("unknown preset is rejected") {
  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("inadmissible states throw") {
  const ProblemSpec s = preset("fermion2d").spec;
  CHECK_THROWS_AS(s.check_admissible(-0.1, 3, 2), InadmissibleState);
  CHECK_THROWS_AS(s.check_admissible(1.0, 0, 0), InadmissibleState);
  CHECK_NOTHROW(s.check_admissible(0.5, 0, 0));
}
