// Acceptance gate: nine end-to-end invariants of the library, run at pinned
// tolerances and seeds, one PASS/FAIL line each.  Exits nonzero if any line
// fails.  Kept framework-free so the gate has no dependencies beyond the
// library itself.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gfl/fields.hpp"
#include "gfl/hilbert.hpp"
#include "gfl/kernels.hpp"
#include "gfl/measures.hpp"
#include "gfl/numeric.hpp"
#include "gfl/rng.hpp"
#include "gfl/simulate.hpp"
#include "gfl/wold.hpp"

namespace {

using namespace gfl;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), format, a, b);
  return buffer;
}

std::vector<std::string> labels(Index m) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) out.push_back("l" + std::to_string(i));
  return out;
}

OperatorKernel gram_kernel(Rng& rng, Index q, Index m, Index extra) {
  const Matrix x = rng.complex_gaussian_matrix(m * q, m * q + extra);
  return kernel_from_assembled(labels(m), q, Matrix(x * x.adjoint()));
}

OperatorKernel hermitian_kernel(Rng& rng, Index q, Index m) {
  const Matrix a = rng.complex_gaussian_matrix(m * q, m * q);
  return kernel_from_assembled(labels(m), q,
                               Matrix(0.5 * (a + a.adjoint())));
}

StochasticMapping random_mapping(Rng& rng, Index q, Index p, Index m) {
  const ModuleSpace space(q, p);
  std::vector<RandomVariable> values;
  values.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    values.emplace_back(space, rng.complex_gaussian_matrix(q, p));
  return StochasticMapping(labels(m), std::move(values));
}

RandomField random_field(Rng& rng, const Grid& grid, Index q, Index p) {
  const ModuleSpace space(q, p);
  std::vector<RandomVariable> values;
  values.reserve(static_cast<std::size_t>(grid.size()));
  for (Index c = 0; c < grid.size(); ++c)
    values.emplace_back(space, rng.complex_gaussian_matrix(q, p));
  return RandomField(grid, std::move(values));
}

TestFunction full_support_function(Rng& rng, const Grid& grid) {
  const Vector samples = rng.complex_gaussian_matrix(grid.size(), 1);
  IndexBox box{{0, 0}, {grid.n - 1, grid.d == 2 ? grid.n - 1 : 0}};
  return TestFunction(grid, samples, box);
}

double elapsed_seconds(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// 1: factoring a positive kernel and recomputing its covariance is the
// identity, across 100 seeded kernels, in under 10 seconds.
Outcome factorization_roundtrip() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index q = 1 + t % 4;
    const Index m = 1 + (t / 4) % 4;
    Rng rng(Rng::split(101, static_cast<uint64_t>(t)));
    const OperatorKernel k = gram_kernel(rng, q, m, 2);
    const StochasticMapping phi = kolmogorov_factorize(k);
    const Matrix target = k.assembled();
    const double residual =
        (covariance_kernel(phi).assembled() - target).norm() / target.norm();
    worst = std::max(worst, residual);
  }
  const double seconds = elapsed_seconds(start);
  return {worst <= 1e-9 && seconds < 10.0,
          fmt("worst residual %.2e in %.2fs", worst, seconds)};
}

// 2: two factorizations of one kernel are linked by a gramian-unitary
// connector; the second factorization reverses the eigen-ordering.
Outcome factorization_connector() {
  double worst_unitary = 0.0;
  double worst_match = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Index q = 1 + t % 3;
    const Index m = 1 + (t / 3) % 4;
    Rng rng(Rng::split(202, static_cast<uint64_t>(t)));
    const OperatorKernel k = gram_kernel(rng, q, m, 2);
    const StochasticMapping phi1 = kolmogorov_factorize(k);
    const Index p = phi1.space().p;

    const HermitianEig eig = hermitian_eig(k.assembled());
    Matrix w2(m * q, p);
    for (Index j = 0; j < p; ++j)
      w2.col(j) =
          eig.eigenvectors.col(p - 1 - j) * std::sqrt(eig.eigenvalues[p - 1 - j]);
    const ModuleSpace space(q, p);
    std::vector<RandomVariable> values;
    for (Index i = 0; i < m; ++i)
      values.emplace_back(space, Matrix(w2.block(i * q, 0, q, p)));
    const StochasticMapping phi2(k.labels(), std::move(values));

    const Matrix u = gramian_unitary_connector(phi1, phi2);
    worst_unitary = std::max(
        worst_unitary,
        (u.adjoint() * u - Matrix::Identity(p, p)).norm());
    for (Index i = 0; i < m; ++i) {
      const Matrix lhs = phi1.value(k.labels()[i]).value();
      const Matrix rhs = phi2.value(k.labels()[i]).value() * u.adjoint();
      worst_match = std::max(
          worst_match, (lhs - rhs).norm() / std::max(1.0, lhs.norm()));
    }
  }
  return {worst_unitary <= 1e-8 && worst_match <= 1e-8,
          fmt("unitarity %.2e, matching %.2e", worst_unitary, worst_match)};
}

// 3: the eigenvalue test and the sampled operator-coefficient positivity
// oracle agree on 200 kernels spanning positive and indefinite.
Outcome positivity_oracle_agreement() {
  int disagreements = 0;
  for (int t = 0; t < 200; ++t) {
    const Index q = 1 + t % 3;
    const Index m = 1 + (t / 3) % 3;
    Rng rng(Rng::split(303, static_cast<uint64_t>(t)));
    const OperatorKernel k = t % 2 == 0 ? gram_kernel(rng, q, m, 1)
                                        : hermitian_kernel(rng, q, m);
    const bool pd = is_positive_definite(k);
    const bool sampled = operator_coefficient_positivity_sample(
        k, 200, Rng::split(304, static_cast<uint64_t>(t)));
    if (pd != sampled) ++disagreements;
  }
  return {disagreements == 0,
          fmt("%.0f disagreements in 200", double(disagreements))};
}

// 4: the reproducing-kernel subordination criterion coincides with
// measurement-space inclusion on 50 built positives and 50 built negatives.
Outcome subordination_equivalence() {
  int mismatches = 0;
  int wrong_constructions = 0;
  for (int t = 0; t < 100; ++t) {
    const Index q = 1 + t % 2;
    const Index m = 3;
    const Index p = 8;
    Rng rng(Rng::split(404, static_cast<uint64_t>(t)));
    const StochasticMapping psi = random_mapping(rng, q, p, m);

    Matrix stacked(m * q, p);
    for (Index i = 0; i < m; ++i)
      stacked.block(i * q, 0, q, p) = psi.value(psi.labels()[i]).value();

    const bool expected = t % 2 == 0;
    std::vector<RandomVariable> values;
    for (Index i = 0; i < m; ++i)
      values.emplace_back(
          psi.space(),
          Matrix(rng.complex_gaussian_matrix(q, m * q) * stacked));
    if (!expected) {
      Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
      const Index rank = svd.rank();
      Matrix bumped = values[0].value();
      bumped.row(0) += svd.matrixV().col(rank).adjoint();
      values[0] = RandomVariable(psi.space(), std::move(bumped));
    }
    const StochasticMapping phi(psi.labels(), std::move(values));

    const bool criterion = subordination_criterion(phi, psi);
    const bool inclusion =
        contains(measurements_space(psi), measurements_space(phi));
    if (criterion != inclusion) ++mismatches;
    if (criterion != expected) ++wrong_constructions;
  }
  return {mismatches == 0 && wrong_constructions == 0,
          fmt("%.0f mismatches, %.0f unintended labels in 100",
              double(mismatches), double(wrong_constructions))};
}

// 5: coefficient elements of the reproducing-kernel module have the same
// gramian as their mapping-module counterparts, and evaluation against a
// one-point element reproduces function values.
Outcome reproducing_kernel_identities() {
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index q = 1 + t % 3;
    const Index m = 1 + (t / 3) % 3;
    Rng rng(Rng::split(505, static_cast<uint64_t>(t)));
    const OperatorKernel kernel = gram_kernel(rng, q, m, 2);
    const auto handle = std::make_shared<const OperatorKernel>(kernel);
    const StochasticMapping phi = kolmogorov_factorize(kernel);

    std::vector<Matrix> a, b;
    for (Index i = 0; i < m; ++i) {
      a.push_back(rng.complex_gaussian_matrix(q, q));
      b.push_back(rng.complex_gaussian_matrix(q, q));
    }
    const Matrix lhs = rkhm_gramian(make_rkhm_element(handle, a),
                                    make_rkhm_element(handle, b));
    Matrix fa = Matrix::Zero(q, phi.space().p);
    Matrix fb = Matrix::Zero(q, phi.space().p);
    for (Index i = 0; i < m; ++i) {
      fa += a[static_cast<std::size_t>(i)] *
            phi.value(phi.labels()[i]).value();
      fb += b[static_cast<std::size_t>(i)] *
            phi.value(phi.labels()[i]).value();
    }
    const Matrix rhs = gramian(RandomVariable(phi.space(), fa),
                               RandomVariable(phi.space(), fb));
    worst = std::max(worst, rel_residual(lhs, rhs));

    std::vector<Vector> x;
    for (Index i = 0; i < m; ++i)
      x.push_back(rng.complex_gaussian_matrix(q, 1));
    const RKHSElement f = make_rkhs_element(handle, x);
    for (Index j = 0; j < m; ++j) {
      const Vector y = rng.complex_gaussian_matrix(q, 1);
      std::vector<Vector> point(static_cast<std::size_t>(m),
                                Vector::Zero(q));
      point[static_cast<std::size_t>(j)] = y;
      const Complex inner =
          rkhs_inner(f, make_rkhs_element(handle, point));
      const Complex value =
          (y.adjoint() * rkhs_evaluate(f, kernel.labels()[j]))(0, 0);
      const double scale =
          std::max({1.0, std::abs(inner), std::abs(value)});
      worst = std::max(worst, std::abs(inner - value) / scale);
    }
  }
  return {worst <= 1e-10, fmt("worst residual %.2e", worst)};
}

// 6: the covariance distribution of a smeared field equals the kernel
// quadrature, and the measure covariance equals the strict bimeasure
// integral, over 50 fields and 10 test-function pairs each.
Outcome smearing_coherence() {
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const bool line = t % 2 == 0;
    const Index n = line ? (Index(4) << ((t / 2) % 4)) : (Index(2) << ((t / 2) % 3));
    const Grid grid(line ? 1 : 2, n, 0.5, {0.0, 0.0});
    const Index q = 1 + t % 2;
    const Index p = 1 + t % 3;
    Rng rng(Rng::split(606, static_cast<uint64_t>(t)));
    const RandomField f = random_field(rng, grid, q, p);
    const OperatorKernel gamma = field_covariance_kernel(f);
    const StochasticMeasure xi = measure_from_field(f);
    const Bimeasure tau = bimeasure_of(xi);

    for (int pair = 0; pair < 10; ++pair) {
      const TestFunction phi = full_support_function(rng, grid);
      const TestFunction psi = full_support_function(rng, grid);

      const Matrix lhs = gramian(smear(f, phi), smear(f, psi));
      const Matrix rhs = kernel_to_distribution(grid, gamma, phi, psi);
      worst = std::max(worst, rel_residual(lhs, rhs));

      Matrix u_phi = Matrix::Zero(q, p);
      Matrix u_psi = Matrix::Zero(q, p);
      for (Index c = 0; c < grid.size(); ++c) {
        u_phi += phi.samples()(c) * xi.atom(c).value();
        u_psi += psi.samples()(c) * xi.atom(c).value();
      }
      const Matrix mlhs = gramian(RandomVariable(xi.space(), u_phi),
                                  RandomVariable(xi.space(), u_psi));
      const Matrix mrhs = mt_integral(tau, phi, conjugate(psi));
      worst = std::max(worst, rel_residual(mlhs, mrhs));
    }
  }
  return {worst <= 1e-11, fmt("worst residual %.2e", worst)};
}

// 7: exhaustive quaternary-phase semivariation matches an independent brute
// force bitwise for up to 8 cells, and never exceeds the operator variant.
Outcome semivariation_bounds() {
  bool exact = true;
  for (int t = 0; t < 20; ++t) {
    const Index na = 1 + t % 8;
    const Index n = std::max<Index>(na, 2);
    const Grid grid(1, n, 1.0, {0.0, 0.0});
    const Index q = 1 + t % 2;
    Rng rng(Rng::split(707, static_cast<uint64_t>(t)));
    const StochasticMeasure xi =
        measure_from_field(random_field(rng, grid, q, 2));
    std::vector<Index> cells;
    for (Index c = 0; c < na; ++c) cells.push_back(c);
    const CellSet a(grid, cells);

    const double fast =
        semivariation(xi, a, SemivariationStrategy::exhaustive()).lower_bound;

    const Complex roots[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    double brute = 0.0;
    std::size_t total = 1;
    for (Index c = 0; c < na; ++c) total *= 4;
    for (std::size_t code = 0; code < total; ++code) {
      Matrix sum = Matrix::Zero(q, 2);
      std::size_t rest = code;
      for (Index c = 0; c < na; ++c) {
        sum += roots[rest % 4] * xi.atom(a.members()[c]).value();
        rest /= 4;
      }
      brute = std::max(brute, sum.norm());
    }
    if (fast != brute) exact = false;
  }

  double worst_gap = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index q = 1 + t % 2;
    const Index n = 4 + t % 3;
    const Grid grid(1, n, 1.0, {0.0, 0.0});
    Rng rng(Rng::split(708, static_cast<uint64_t>(t)));
    const StochasticMeasure xi =
        measure_from_field(random_field(rng, grid, q, 2));
    std::vector<Index> cells;
    for (Index c = 0; c < std::min<Index>(n, 4); ++c) cells.push_back(c);
    const CellSet a(grid, cells);
    const SemivariationStrategy strategy = SemivariationStrategy::exhaustive();
    const double scalar = semivariation(xi, a, strategy).lower_bound;
    const double op = operator_semivariation(xi, a, strategy).lower_bound;
    worst_gap = std::max(worst_gap, scalar - op);
  }
  const bool ordered = worst_gap <= 1e-9;
  return {exact && ordered,
          std::string(exact ? "brute force matched bitwise"
                            : "brute force MISMATCH") +
              fmt(", worst ordering gap %.2e", worst_gap)};
}

// 8: the constant-direction, innovation, and direct-sum prototypes classify
// as deterministic, purely nondeterministic, and mixed, with every split and
// coherence clause passing on the full indicator basis.
Outcome wold_classification() {
  const Grid grid(1, 3, 1.0, {0.0, 0.0});

  const auto field_of = [&](std::vector<Matrix> rows, Index p) {
    const ModuleSpace space(1, p);
    std::vector<RandomVariable> values;
    for (auto& r : rows) values.emplace_back(space, std::move(r));
    return RandomField(grid, std::move(values));
  };

  std::vector<RandomField> fields;
  std::vector<Classification> expected;

  Matrix c0 = Matrix::Zero(1, 2);
  c0(0, 0) = 1.0;
  fields.push_back(field_of({c0, c0, c0}, 2));
  expected.push_back(Classification::deterministic);

  Matrix i0 = Matrix::Zero(1, 3);
  Matrix i1 = Matrix::Zero(1, 3);
  Matrix i2 = Matrix::Zero(1, 3);
  i1(0, 0) = 1.0;
  i2(0, 1) = 1.0;
  fields.push_back(field_of({i0, i1, i2}, 3));
  expected.push_back(Classification::purely_nondeterministic);

  // Direct sum of the two: first coordinate constant, rest innovating.
  Matrix s0 = Matrix::Zero(1, 4);
  Matrix s1 = Matrix::Zero(1, 4);
  Matrix s2 = Matrix::Zero(1, 4);
  s0(0, 0) = 1.0;
  s1(0, 0) = 1.0;
  s1(0, 1) = 1.0;
  s2(0, 0) = 1.0;
  s2(0, 2) = 1.0;
  fields.push_back(field_of({s0, s1, s2}, 4));
  expected.push_back(Classification::mixed);

  const ThresholdChain chain = ThresholdChain::diagonal(grid);
  std::string detail;
  bool pass = true;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::vector<TestFunction> basis;
    for (Index c = 0; c < grid.size(); ++c)
      basis.push_back(cell_indicator(grid, c));
    const RandomDistributionField u = field_to_rdf(fields[i], basis);

    const Classification got = classify(u, basis, chain);
    if (got != expected[i]) pass = false;
    const Report split = wold_split_report(u, basis, chain);
    if (!split.pass()) pass = false;
    const Report coherence = wold_coherence(fields[i], chain);
    if (!coherence.pass()) pass = false;
    if (!detail.empty()) detail += ", ";
    detail += to_string(got);
  }
  return {pass, detail};
}

// 9: empirical covariance error for the identity kernel shrinks with sample
// size along the inverse-square-root trend, in under 30 seconds.
Outcome monte_carlo_convergence() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::vector<Matrix>> blocks(
      3, std::vector<Matrix>(3, Matrix::Zero(2, 2)));
  for (std::size_t i = 0; i < 3; ++i)
    blocks[i][i] = Matrix::Identity(2, 2);
  const OperatorKernel k(labels(3), 2, std::move(blocks));

  const ConvergenceReport conv = convergence_report(k, {400, 1600, 6400}, 9);
  const double seconds = elapsed_seconds(start);
  std::string detail = "errors";
  for (const auto& pt : conv.points)
    detail += fmt(" %.3e", pt.rel_error);
  detail += ", ratios";
  for (double r : conv.ratios) detail += fmt(" %.2f", r);
  detail += fmt(" in %.2fs", seconds);
  return {conv.decreasing && conv.trend_ok && seconds < 30.0, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> gates = {
      {"factorization_roundtrip", factorization_roundtrip},
      {"factorization_connector", factorization_connector},
      {"positivity_oracle_agreement", positivity_oracle_agreement},
      {"subordination_equivalence", subordination_equivalence},
      {"reproducing_kernel_identities", reproducing_kernel_identities},
      {"smearing_coherence", smearing_coherence},
      {"semivariation_bounds", semivariation_bounds},
      {"wold_classification", wold_classification},
      {"monte_carlo_convergence", monte_carlo_convergence},
  };

  int failures = 0;
  for (const auto& [name, gate] : gates) {
    Outcome outcome;
    try {
      outcome = gate();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-30s %s\n", outcome.pass ? "PASS" : "FAIL",
                name.c_str(), outcome.detail.c_str());
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) std::printf("%d of 9 gates failed\n", failures);
  return failures == 0 ? 0 : 1;
}
