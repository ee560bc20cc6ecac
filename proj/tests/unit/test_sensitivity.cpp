#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rdo/errors.hpp"
#include "rdo/sensitivity.hpp"

using namespace rdo;

namespace {

const Vector kLo{0.0, 0.0, 0.0};
const Vector kHi{1.0, 2.0, 4.0};

Individual member(Vector x) {
  Individual ind;
  ind.x = std::move(x);
  ind.f = {0.0, 0.0};
  return ind;
}

} // namespace

TEST_CASE("gradient of a linear function is exact") {
  const Vector a{1.5, -2.0, 0.25};
  ScalarObjective f = [&](std::span<const double> x) { return a[0] * x[0] + a[1] * x[1] + a[2] * x[2]; };
  const auto g = gradient_fd(f, Vector{0.5, 1.0, 2.0}, 1e-3, kLo, kHi);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(g[i] - a[i]) < 1e-9);

  // One-sided at the bounds.
  const auto gb = gradient_fd(f, Vector{0.0, 2.0, 4.0}, 1e-3, kLo, kHi);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(gb[i] - a[i]) < 1e-9);
}

TEST_CASE("gradient of a constant is zero") {
  ScalarObjective f = [](std::span<const double>) { return 4.0; };
  CHECK(gradient_fd(f, Vector{0.3, 0.3, 0.3}, 1e-3, kLo, kHi) == Vector{0.0, 0.0, 0.0});
}

TEST_CASE("gradient of a quadratic form") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector Q(9);
  for (auto& q : Q) q = unif(rng);
  ScalarObjective f = [&](std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += x[i] * Q[3 * i + j] * x[j];
    return s;
  };
  for (int trial = 0; trial < 20; ++trial) {
    Vector x{0.1 + 0.8 * (unif(rng) + 1) / 2, 0.2 + 1.6 * (unif(rng) + 1) / 2, 0.4 + 3.2 * (unif(rng) + 1) / 2};
    const auto g = gradient_fd(f, x, 1e-4, kLo, kHi);
    for (int i = 0; i < 3; ++i) {
      double expected = 0.0;
      for (int j = 0; j < 3; ++j) expected += (Q[3 * i + j] + Q[3 * j + i]) * x[j];
      CHECK(std::abs(g[i] - expected) < 1e-6);
    }
  }
}

TEST_CASE("central differences converge at second order") {
  ScalarObjective f = [](std::span<const double> x) { return x[0] * x[0] * x[0] + 2.0 * x[1] * x[1] * x[1] + x[0] * x[1] * x[2]; };
  const Vector x{0.4, 0.9, 1.7};
  const Vector exact{3 * x[0] * x[0] + x[1] * x[2], 6 * x[1] * x[1] + x[0] * x[2], x[0] * x[1]};
  auto err = [&](double h) {
    const auto g = gradient_fd(f, x, h, kLo, kHi);
    double e = 0.0;
    for (int i = 0; i < 3; ++i) e = std::max(e, std::abs(g[i] - exact[i]));
    return e;
  };
  for (double h : {1e-2, 4e-3}) {
    const double slope = std::log2(err(h) / err(h / 2));
    CHECK(slope >= 1.8);
    CHECK(slope <= 2.2);
  }
}

TEST_CASE("gradient_fd names the failing coordinate") {
  ScalarObjective f = [](std::span<const double> x) { return x[1] > 1.0 ? std::nan("") : x[0]; };
  try {
    gradient_fd(f, Vector{0.5, 1.0, 1.0}, 1e-2, kLo, kHi);
    FAIL("expected an EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("coordinate 1") != std::string::npos);
  }
  CHECK_THROWS_AS(gradient_fd(f, Vector{0.5, 1.0}, 1e-2, kLo, kHi), ContractViolation);
  CHECK_THROWS_AS(gradient_fd(f, Vector{0.5, 0.5, 0.5}, 0.0, kLo, kHi), ContractViolation);
}

TEST_CASE("constant objectives rank in input order") {
  std::vector<Individual> front{member({0.1, 0.1, 0.1}), member({0.5, 1.0, 2.0}), member({0.9, 1.9, 3.9})};
  std::vector<ScalarObjective> objs{[](std::span<const double>) { return 1.0; }, [](std::span<const double>) { return -2.0; }};
  const auto rep = robustness_rank(front, objs, 1e-3, kLo, kHi);
  CHECK(rep.order == std::vector<std::size_t>{0, 1, 2});
  for (const auto& m : rep.members) {
    CHECK(m.combined == 0.0);
    CHECK(m.s == Vector{0.0, 0.0});
  }
}

TEST_CASE("a member at the common minimum ranks first") {
  std::vector<Individual> front{member({0.9, 0.1, 3.0}), member({0.3, 0.6, 1.2}), member({0.0, 2.0, 0.5})};
  // Member 1 sits at the minimum of both objectives.
  const Vector c{0.3, 0.6, 1.2};
  auto bowl = [c](double w) {
    return ScalarObjective([c, w](std::span<const double> x) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += w * (x[i] - c[i]) * (x[i] - c[i]);
      return s;
    });
  };
  const auto rep = robustness_rank(front, {bowl(1.0), bowl(3.0)}, 1e-3, kLo, kHi);
  CHECK(rep.order.front() == 1);
  CHECK(rep.members[1].combined < 1e-9);
}

TEST_CASE("ranking follows the analytic gradient norms") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  ScalarObjective f1 = [](std::span<const double> x) { return (x[0] - 0.2) * (x[0] - 0.2) + 0.5 * x[1] * x[1]; };
  ScalarObjective f2 = [](std::span<const double> x) { return 3.0 * (x[0] - 0.8) * (x[0] - 0.8) + x[2]; };
  auto analytic = [](const Vector& x) {
    const double s1 = std::hypot(2.0 * (x[0] - 0.2), x[1]);
    const double s2 = std::hypot(6.0 * (x[0] - 0.8), 1.0);
    return std::max(s1, s2);
  };
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Individual> front;
    std::vector<double> truth;
    for (int k = 0; k < 5; ++k) {
      Vector x{unif(rng), 2.0 * unif(rng), 4.0 * unif(rng)};
      truth.push_back(analytic(x));
      front.push_back(member(x));
    }
    std::vector<std::size_t> expected(5);
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    std::stable_sort(expected.begin(), expected.end(), [&](auto a, auto b) { return truth[a] < truth[b]; });
    const auto rep = robustness_rank(front, {f1, f2}, 1e-4, kLo, kHi, 3);
    CHECK(rep.order == expected);
    for (int k = 0; k < 5; ++k) CHECK(rep.members[k].combined == doctest::Approx(truth[k]).epsilon(1e-6));

    // Common positive rescaling leaves the order alone.
    ScalarObjective g1 = [&](std::span<const double> x) { return 7.5 * f1(x); };
    ScalarObjective g2 = [&](std::span<const double> x) { return 7.5 * f2(x); };
    CHECK(robustness_rank(front, {g1, g2}, 1e-4, kLo, kHi).order == rep.order);
  }
}

TEST_CASE("a failing member is unranked, others are not affected") {
  std::vector<Individual> front{member({0.2, 0.2, 0.2}), member({0.5, 0.5, 0.5}), member({0.8, 0.8, 0.8})};
  ScalarObjective f = [](std::span<const double> x) {
    if (std::abs(x[0] - 0.5) < 0.01) return std::nan("");
    return 2.0 * x[0] + x[1];
  };
  ScalarObjective g = [](std::span<const double> x) { return x[0] * x[0]; };
  const auto rep = robustness_rank(front, {f, g}, 1e-3, kLo, kHi);
  CHECK_FALSE(rep.members[1].ranked);
  CHECK_FALSE(rep.members[1].error.empty());
  CHECK(rep.members[0].ranked);
  CHECK(rep.members[2].ranked);
  CHECK(rep.order == std::vector<std::size_t>{0, 2, 1});
  CHECK(rep.members[0].combined == doctest::Approx(std::sqrt(5.0)).epsilon(1e-6));
}

TEST_CASE("robustness_rank from a problem spec") {
  ProblemSpec spec({{"a", 0.0, 1.0}, {"b", -1.0, 1.0}}, 2, "lin", [](std::span<const double> x) {
    return Vector{x[0] + x[1], 3.0 * x[0]};
  });
  std::vector<Individual> front{member({0.5, 0.0}), member({0.1, 0.9})};
  const auto rep = robustness_rank(front, spec);
  REQUIRE(rep.members.size() == 2);
  for (const auto& m : rep.members) {
    CHECK(m.s[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(m.s[1] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(m.combined == doctest::Approx(3.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(robustness_rank(std::vector<Individual>{}, spec), ContractViolation);
}
