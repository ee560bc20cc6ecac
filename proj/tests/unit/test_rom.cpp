#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <random>

#include "rdo/errors.hpp"
#include "rdo/rom/heat.hpp"
#include "rdo/rom/identify.hpp"
#include "rdo/rom/io.hpp"
#include "rdo/rom/pod.hpp"
#include "rdo/rom/schwartz.hpp"
#include "rdo/rom/state_space.hpp"

using namespace rdo;

namespace {

SchwartzParams random_params(std::size_t n, double max_delta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-max_delta, max_delta);
  std::normal_distribution<double> g(0.0, 1.0);
  SchwartzParams p;
  for (std::size_t i = 0; i < n; ++i) {
    p.delta.push_back(d(rng));
    p.gamma.push_back(g(rng));
  }
  return p;
}

double dlt(double D) { return std::sqrt(1.0 - D * D); }

Vector step(std::size_t k) { return Vector(k, 1.0); }

// Heat rod snapshots under a unit step, t in (0, 1].
SnapshotMatrix heat_snapshots(const FirstOrderSystem& sys, std::size_t steps) {
  const auto ss = full_state_space(sys);
  const auto t = uniform_grid(1.0, steps);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(t.size()), 1);
  const auto traj = simulate_continuous(ss, u, t, Eigen::VectorXd::Zero(sys.size()), true);
  SnapshotMatrix snap;
  snap.U = traj.states.rightCols(static_cast<Eigen::Index>(steps));
  snap.times.assign(t.begin() + 1, t.end());
  return snap;
}

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "rdo_test_rom";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("Schwartz system with zero deltas is a shift register") {
  SchwartzParams p{{0, 0, 0, 0}, {1, 2, 3, 4}};
  const auto ss = build_schwartz_system(p);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 1; i < 4; ++i) shift(i, i - 1) = 1.0;
  CHECK(ss.A.isApprox(shift));
  CHECK(ss.B.isApprox(Eigen::VectorXd::Unit(4, 0)));
  CHECK(ss.C == Eigen::RowVectorXd{{1, 2, 3, 4}});

  const auto y = simulate_discrete(ss, Vector{1, 0, 0, 0, 0, 0, 0});
  CHECK(y == Vector{0, 1, 2, 3, 4, 0, 0});
  CHECK(simulate_discrete(ss, Vector(10, 0.0)) == Vector(10, 0.0));
}

TEST_CASE("Schwartz fourth-order structure") {
  SchwartzParams p{{0.3, -0.5, 0.7, 0.2}, {1, 1, 1, 1}};
  const auto& D = p.delta;
  const auto A = build_schwartz_system(p).A;
  // One-based spot checks of the printed matrix.
  CHECK(A(0, 0) == doctest::Approx(D[0]));
  CHECK(A(0, 1) == doctest::Approx(dlt(D[0]) * D[1]));
  CHECK(A(0, 3) == doctest::Approx(dlt(D[0]) * dlt(D[1]) * dlt(D[2]) * D[3]));
  CHECK(A(1, 2) == doctest::Approx(-D[0] * dlt(D[1]) * D[2]));
  CHECK(A(2, 3) == doctest::Approx(-D[1] * dlt(D[2]) * D[3]));
  CHECK(A(1, 1) == doctest::Approx(-D[0] * D[1]));
  CHECK(A(3, 3) == doctest::Approx(-D[2] * D[3]));
  CHECK(A(1, 0) == doctest::Approx(dlt(D[0])));
  CHECK(A(2, 1) == doctest::Approx(dlt(D[1])));
  CHECK(A(3, 2) == doctest::Approx(dlt(D[2])));
  CHECK(A(2, 0) == 0.0);
  CHECK(A(3, 0) == 0.0);
  CHECK(A(3, 1) == 0.0);
  const auto B = build_schwartz_system(p).B;
  CHECK(B[0] == 1.0);
  CHECK(B[1] == doctest::Approx(-D[0]));
  CHECK(B[3] == doctest::Approx(-D[2]));

  const auto printed = build_schwartz_system_as_printed(p).A;
  CHECK(printed(3, 2) == doctest::Approx(-dlt(D[2])));
  Eigen::MatrixXd diff = printed - A;
  diff(3, 2) = 0.0;
  CHECK(diff.norm() == 0.0);
  CHECK_THROWS_AS(build_schwartz_system_as_printed(SchwartzParams{{0.1}, {1}}), ContractViolation);
}

TEST_CASE("Schwartz system domain errors") {
  CHECK_THROWS_AS(build_schwartz_system(SchwartzParams{{0.1, 1.0}, {1, 1}}), DomainError);
  CHECK(std::isinf(identification_objective(SchwartzParams{{1.2}, {1}}, Vector{1, 1}, Vector{0, 0})));
}

TEST_CASE("Schwartz systems are stable for |delta| <= 0.99") {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const std::size_t n = 1 + draw % 6;
    const auto ss = build_schwartz_system(random_params(n, 0.99, rng));
    const double rho = ss.A.eigenvalues().cwiseAbs().maxCoeff();
    worst = std::max(worst, rho);
  }
  CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("simulate_discrete matches a naive recursion") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ss = build_schwartz_system(random_params(4, 0.95, rng));
    Vector u(100);
    for (auto& v : u) v = g(rng);
    Eigen::VectorXd x0(4);
    x0 << g(rng), g(rng), g(rng), g(rng);
    const auto y = simulate_discrete(ss, u, x0);
    Eigen::VectorXd x = x0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      CHECK(std::abs(y[k] - ss.C.dot(x)) < 1e-12);
      Eigen::VectorXd next(4);
      for (int i = 0; i < 4; ++i) {
        double s = ss.B[i] * u[k];
        for (int j = 0; j < 4; ++j) s += ss.A(i, j) * x[j];
        next[i] = s;
      }
      x = next;
    }
  }
}

TEST_CASE("simulate_discrete is linear in the input") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto ss = build_schwartz_system(random_params(5, 0.9, rng));
  Vector u(60), au(60);
  const double alpha = 4.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] = g(rng);
    au[k] = alpha * u[k];
  }
  const auto y = simulate_discrete(ss, u);
  const auto ay = simulate_discrete(ss, au);
  for (std::size_t k = 0; k < y.size(); ++k) CHECK(ay[k] == alpha * y[k]);
}

TEST_CASE("identification objective") {
  std::mt19937_64 rng(7);
  const auto p = random_params(4, 0.8, rng);
  const auto u = step(120);
  const auto t_ref = simulate_discrete(build_schwartz_system(p), u);
  CHECK(identification_objective(p, u, t_ref) == 0.0);

  auto shifted = t_ref;
  for (auto& v : shifted) v += 0.125;
  CHECK(identification_objective(p, u, shifted) == doctest::Approx(0.125));

  // Sign flip of gamma and output together.
  auto neg = p;
  for (auto& g : neg.gamma) g = -g;
  auto neg_ref = shifted;
  for (auto& v : neg_ref) v = -v;
  CHECK(identification_objective(neg, u, neg_ref) == doctest::Approx(identification_objective(p, u, shifted)));

  // Linear growth under a gamma perturbation.
  auto at = [&](double eps) {
    auto q = p;
    q.gamma[1] += eps;
    return identification_objective(q, u, t_ref);
  };
  const double f1 = at(1e-4), f2 = at(2e-4), f4 = at(4e-4);
  CHECK(f1 > 0.0);
  CHECK(f2 / f1 == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f4 / f2 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("identify recovers a synthetic fourth-order system") {
  SchwartzParams truth{{0.9, -0.4, 0.5, 0.2}, {0.3, 0.5, -0.2, 0.1}};
  const auto u = step(400);
  const auto t_ref = simulate_discrete(build_schwartz_system(truth), u);
  double peak = 0.0;
  for (double v : t_ref) peak = std::max(peak, std::abs(v));
  IdentifyConfig cfg;
  cfg.threads = 4;
  const auto r = identify(t_ref, u, 4, cfg);
  CHECK(r.objective < 1e-3 * peak);
  CHECK(r.objective == doctest::Approx(identification_objective(r.params, u, t_ref)));
  CHECK(r.restart_objectives.size() == cfg.restarts);
  for (double f : r.restart_objectives) CHECK(r.objective <= f);
  for (double d : r.params.delta) CHECK(std::abs(d) < 1.0 - cfg.bound_margin + 1e-15);
}

TEST_CASE("identify is independent of thread count") {
  SchwartzParams truth{{0.7, 0.3}, {1.0, -0.5}};
  const auto u = step(80);
  const auto t_ref = simulate_discrete(build_schwartz_system(truth), u);
  IdentifyConfig a;
  a.restarts = 4;
  a.max_iters = 500;
  auto b = a;
  b.threads = 3;
  const auto ra = identify(t_ref, u, 2, a);
  const auto rb = identify(t_ref, u, 2, b);
  CHECK(ra.params.packed() == rb.params.packed());
  CHECK(ra.objective == rb.objective);
}

TEST_CASE("identify recovers a first-order pole") {
  const double dt = 0.01, tau = 0.2;
  const double pole = std::exp(-dt / tau);
  Vector t_ref(300);
  for (std::size_t k = 0; k < t_ref.size(); ++k) t_ref[k] = 1.0 - std::pow(pole, static_cast<double>(k));
  const auto r = identify(t_ref, step(300), 1);
  CHECK(std::abs(r.params.delta[0] - pole) < 1e-3);
}

TEST_CASE("identify on a zero reference") {
  const auto r = identify(Vector(50, 0.0), step(50), 3);
  CHECK(r.objective == 0.0);
  for (double g : r.params.gamma) CHECK(g == 0.0);
}

TEST_CASE("pod_modes on exact low-rank data") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto [n, m] : {std::pair{30, 12}, std::pair{10, 40}}) {
    Eigen::MatrixXd a(n, 2), b(2, m);
    for (int i = 0; i < n; ++i) a(i, 0) = g(rng), a(i, 1) = g(rng);
    for (int j = 0; j < m; ++j) b(0, j) = g(rng), b(1, j) = g(rng);
    SnapshotMatrix snap{a * b, {}};
    for (int j = 0; j < m; ++j) snap.times.push_back(j);
    const auto basis = pod_modes(snap, 2);
    CHECK(basis.captured_energy >= 1.0 - 1e-12);
    CHECK(basis.padded == 0);

    const auto padded = pod_modes(snap, 4);
    CHECK(padded.padded == 2);
    CHECK((padded.modes.transpose() * padded.modes - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(padded.energy_fractions[2] == 0.0);
    CHECK(padded.energy_fractions[3] == 0.0);
  }
}

TEST_CASE("pod_modes are orthonormal and ordered") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto [n, m, r] : {std::tuple{20, 8, 5}, std::tuple{8, 25, 8}, std::tuple{15, 15, 10}}) {
    Eigen::MatrixXd U(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) U(i, j) = g(rng);
    SnapshotMatrix snap{U, {}};
    for (int j = 0; j < m; ++j) snap.times.push_back(0.1 * j);
    const auto basis = pod_modes(snap, static_cast<std::size_t>(r));
    CHECK((basis.modes.transpose() * basis.modes - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-10);
    for (std::size_t k = 1; k < basis.energy_fractions.size(); ++k) {
      CHECK(basis.energy_fractions[k] <= basis.energy_fractions[k - 1]);
    }
    const double total = basis.eigenvalues.sum();
    double s = 0.0;
    for (Eigen::Index k = 0; k < basis.eigenvalues.size(); ++k) s += basis.eigenvalues[k] / total;
    CHECK(std::abs(s - 1.0) < 1e-12);

    // Modes are eigenvectors of U U^T / m.
    const Eigen::MatrixXd C = U * U.transpose() / m;
    for (int k = 0; k < r; ++k) {
      const Eigen::VectorXd e = basis.modes.col(k);
      CHECK((C * e - basis.eigenvalues[k] * e).norm() < 1e-9 * basis.eigenvalues[0]);
    }
  }
  SnapshotMatrix bad{Eigen::MatrixXd::Ones(3, 3), {0, 1, 2}};
  CHECK_THROWS_AS(pod_modes(bad, 4), ContractViolation);
}

TEST_CASE("heat rod POD captures the energy in four modes") {
  const auto sys = heat_fd_model(HeatRodConfig{});
  const auto snap = heat_snapshots(sys, 200);
  const auto basis = pod_modes(snap, 4);
  CHECK(basis.captured_energy > 0.999);
}

TEST_CASE("pod_reduce with the identity basis reproduces the full system") {
  HeatRodConfig hc;
  hc.n_nodes = 12;
  hc.probe_nodes = {0, 5, 11};
  const auto sys = heat_fd_model(hc);
  const auto full = full_state_space(sys);
  const auto red = pod_reduce(sys, Eigen::MatrixXd::Identity(12, 12));
  CHECK(red.A.isApprox(full.A, 1e-12));
  CHECK(red.B.isApprox(full.B, 1e-12));
  CHECK(red.C.isApprox(full.C, 1e-12));
}

TEST_CASE("projection at full rank is lossless") {
  HeatRodConfig hc;
  hc.n_nodes = 15;
  hc.probe_nodes = {0, 7, 14};
  const auto sys = heat_fd_model(hc);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd R(15, 15);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) R(i, j) = g(rng);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(R).householderQ();
  const auto t = uniform_grid(0.5, 100);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(t.size()), 1);
  const auto a = simulate_continuous(full_state_space(sys), u, t, Eigen::VectorXd::Zero(15));
  const auto b = simulate_continuous(pod_reduce(sys, Q), u, t, Eigen::VectorXd::Zero(15));
  CHECK((a.outputs - b.outputs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("pod_reduce on an eigenvector gives its eigenvalue") {
  HeatRodConfig hc;
  hc.n_nodes = 10;
  hc.probe_nodes = {0};
  hc.density = 2.0;
  const auto sys = heat_fd_model(hc);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.S, sys.M);
  for (int k : {0, 3, 9}) {
    const Eigen::VectorXd v = es.eigenvectors().col(k).normalized();
    const auto red = pod_reduce(sys, v);
    REQUIRE(red.A.rows() == 1);
    CHECK(red.A(0, 0) == doctest::Approx(es.eigenvalues()[k]).epsilon(1e-10));
  }
  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(10, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(pod_reduce(sys, singular), ReductionError);
}

TEST_CASE("implicit Euler: ramp and first-order convergence") {
  ContinuousStateSpace ramp{Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Constant(1, 1, 2.0),
                            Eigen::MatrixXd::Identity(1, 1)};
  const auto t = uniform_grid(1.0, 10);
  const auto out = simulate_continuous(ramp, Eigen::MatrixXd::Ones(11, 1), t, Eigen::VectorXd::Zero(1));
  for (Eigen::Index k = 0; k <= 10; ++k) CHECK(out.outputs(k, 0) == doctest::Approx(2.0 * t[k]));

  ContinuousStateSpace decay{Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Zero(1, 1),
                             Eigen::MatrixXd::Identity(1, 1)};
  auto err = [&](std::size_t steps) {
    const auto g = uniform_grid(1.0, steps);
    const auto tr = simulate_continuous(decay, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.size()), 1), g,
                                        Eigen::VectorXd::Ones(1));
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) e = std::max(e, std::abs(tr.outputs(static_cast<Eigen::Index>(k), 0) - std::exp(-g[k])));
    return e;
  };
  const double slope1 = std::log2(err(100) / err(200));
  const double slope2 = std::log2(err(200) / err(400));
  CHECK(slope1 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(slope2 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("heat rod: halving the step roughly halves the error") {
  const auto ss = full_state_space(heat_fd_model(HeatRodConfig{}));
  auto probe_at_end = [&](std::size_t steps) {
    const auto t = uniform_grid(0.5, steps);
    const auto tr = simulate_continuous(ss, Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(t.size()), 1), t,
                                        Eigen::VectorXd::Zero(ss.order()));
    return tr.outputs.row(tr.outputs.rows() - 1).eval();
  };
  const auto ref = probe_at_end(12800);
  const double e1 = (probe_at_end(100) - ref).cwiseAbs().maxCoeff();
  const double e2 = (probe_at_end(200) - ref).cwiseAbs().maxCoeff();
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("simulate_continuous rejects a blow-up") {
  ContinuousStateSpace ss{Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Identity(1, 1)};
  // dt = 1 makes (I + dt A) singular.
  const auto t = uniform_grid(3.0, 3);
  CHECK_THROWS_AS(simulate_continuous(ss, Eigen::MatrixXd::Zero(4, 1), t, Eigen::VectorXd::Ones(1)), IntegrationError);
}

TEST_CASE("heat rod with zero input stays put") {
  const auto ss = full_state_space(heat_fd_model(HeatRodConfig{}));
  const auto t = uniform_grid(1.0, 50);
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(50, 3.5);
  const auto tr = simulate_continuous(ss, Eigen::MatrixXd::Zero(51, 1), t, x0, true);
  CHECK((tr.states.colwise() - x0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("heat rod energy balance") {
  HeatRodConfig hc;
  hc.density = 2.0;
  hc.heat_capacity = 3.0;
  hc.input_node = 17;
  const auto ss = full_state_space(heat_fd_model(hc));
  const double P = 2.5;
  const auto t = uniform_grid(0.8, 160);
  const auto tr = simulate_continuous(ss, Eigen::MatrixXd::Constant(161, 1, P), t, Eigen::VectorXd::Zero(50), true);
  for (std::size_t k = 0; k < t.size(); k += 20) {
    const double mean = tr.states.col(static_cast<Eigen::Index>(k)).mean();
    CHECK(mean == doctest::Approx(P * t[k] / (hc.density * hc.heat_capacity * hc.rod_length())).epsilon(1e-10));
  }
}

TEST_CASE("heat rod steady state is piecewise linear") {
  HeatRodConfig hc;
  hc.input_node = 20;
  hc.end_conductance = 4.0;
  hc.conductivity = 1.5;
  const auto sys = heat_fd_model(hc);
  const double P = 3.0;
  const Eigen::VectorXd x = sys.S.ldlt().solve(sys.F0 * P);
  const double dx = hc.element_length;
  for (Eigen::Index i = 0; i < 50; ++i) {
    const double expected = P / hc.end_conductance + P * dx / hc.conductivity * static_cast<double>(49 - std::max<Eigen::Index>(i, 20));
    CHECK(x[i] == doctest::Approx(expected).epsilon(1e-10));
  }

  // The transient settles onto it.
  const auto ss = full_state_space(sys);
  const auto t = uniform_grid(40.0, 400);
  const auto tr = simulate_continuous(ss, Eigen::MatrixXd::Constant(401, 1, P), t, Eigen::VectorXd::Zero(50), true);
  CHECK((tr.states.col(400) - x).cwiseAbs().maxCoeff() < 1e-6 * x.maxCoeff());
}

TEST_CASE("heat model validation") {
  HeatRodConfig hc;
  hc.n_nodes = 2;
  CHECK_THROWS_AS(heat_fd_model(hc), DomainError);
  hc = {};
  hc.conductivity = 0.0;
  CHECK_THROWS_AS(heat_fd_model(hc), DomainError);
}

TEST_CASE("snapshot and signal files roundtrip") {
  SnapshotMatrix snap{Eigen::MatrixXd::Random(6, 4), {0.0, 0.25, 0.5, 1.0}};
  const auto sp = temp_path("snap.csv");
  write_snapshots(sp, snap);
  const auto back = read_snapshots(sp);
  CHECK(back.times == snap.times);
  CHECK(back.U == snap.U);

  SignalTable table{{0, 0.1, 0.2}, {1, 1, 0}, {0.0, 0.5, 1.0 / 3.0}};
  const auto tp = temp_path("signal.csv");
  write_signal_table(tp, table);
  const auto tb = read_signal_table(tp);
  CHECK(tb.t == table.t);
  CHECK(tb.u == table.u);
  CHECK(tb.y == table.y);

  CHECK_THROWS_AS(read_snapshots(temp_path("missing.csv")), IoError);
}
