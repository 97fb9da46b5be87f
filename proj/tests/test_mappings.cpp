#include "gfl/mappings.hpp"

#include "test_support.hpp"

using namespace gfl;
using gfltest::make_labels;
using gfltest::random_mapping;
using gfltest::row2;

TEST_CASE("mapping construction validates labels and spaces") {
  const ModuleSpace space(1, 2);
  const RandomVariable v(space, row2(1.0, 0.0));
  CHECK_THROWS_AS(StochasticMapping({}, {}), ValidationError);
  CHECK_THROWS_AS(StochasticMapping({"a", "a"}, {v, v}), ValidationError);
  CHECK_THROWS_AS(StochasticMapping({"a"}, {v, v}), ValidationError);
  const RandomVariable w(ModuleSpace(1, 3), Matrix::Zero(1, 3));
  CHECK_THROWS_AS(StochasticMapping({"a", "b"}, {v, w}), SpaceMismatch);

  const StochasticMapping phi({"a", "b"}, {v, v});
  CHECK(phi.size() == 2);
  CHECK(phi.label_index("b") == 1);
  CHECK(rel_residual(phi.value("a").value(), v.value()) == 0.0);
  CHECK_THROWS_AS(phi.value("c"), UnknownLabel);
}

TEST_CASE("flatten is row-major and unflatten inverts it") {
  Matrix m(2, 2);
  m << Complex(1.0), Complex(2.0), Complex(3.0), Complex(4.0);
  const Vector v = flatten(m);
  CHECK(v[0] == Complex(1.0));
  CHECK(v[1] == Complex(2.0));
  CHECK(v[2] == Complex(3.0));
  CHECK(v[3] == Complex(4.0));
  CHECK(rel_residual(unflatten(v, 2, 2), m) == 0.0);
  CHECK_THROWS_AS(unflatten(v, 3, 2), DimensionMismatch);
}

TEST_CASE("vector and modular domains can differ") {
  // A single identity value: the vector span is one-dimensional, while the
  // module span reaches every coordinate direction.
  const ModuleSpace space(2, 2);
  const StochasticMapping phi({"a"},
                              {RandomVariable(space, Matrix::Identity(2, 2))});
  CHECK(vector_domain(phi).dim() == 1);
  CHECK(modular_domain(phi).gdim() == 2);
  CHECK(measurements_space(phi).dim() == 2);

  // The row-swapped value is a module combination but not a vector one.
  Matrix swapped(2, 2);
  swapped << Complex(0.0), Complex(1.0), Complex(1.0), Complex(0.0);
  const StochasticMapping psi({"a"}, {RandomVariable(space, swapped)});
  const SubordinationFlags flags = is_subordinate(psi, phi);
  CHECK(!flags.vector);
  CHECK(flags.operator_);
}

TEST_CASE("measurements space joins the conjugated rows of all values") {
  const ModuleSpace space(1, 2);
  const StochasticMapping phi(
      {"a", "b"}, {RandomVariable(space, row2(1.0, 0.0)),
                   RandomVariable(space, row2(0.0, 1.0))});
  CHECK(measurements_space(phi).dim() == 2);
  const StochasticMapping sub({"a"}, {RandomVariable(space, row2(1.0, 0.0))});
  const SubordinationFlags flags = is_subordinate(sub, phi);
  CHECK(flags.vector);
  CHECK(flags.operator_);
}

TEST_CASE("subordination flags are monotone under adding directions") {
  Rng rng(23);
  const StochasticMapping psi = random_mapping(rng, 2, 6, 3);
  // phi built from left multiples of psi values stays inside both domains.
  std::vector<RandomVariable> values;
  for (Index i = 0; i < psi.size(); ++i)
    values.push_back(outer_action(rng.complex_gaussian_matrix(2, 2),
                                  psi.value(i)));
  const StochasticMapping phi(make_labels(3), std::move(values));
  const SubordinationFlags flags = is_subordinate(phi, psi);
  CHECK(flags.operator_);

  // Vector subordination implies operator subordination on random samples.
  for (int trial = 0; trial < 10; ++trial) {
    const StochasticMapping a = random_mapping(rng, 2, 4, 2);
    const StochasticMapping b = random_mapping(rng, 2, 4, 3);
    const SubordinationFlags f = is_subordinate(a, b);
    if (f.vector) CHECK(f.operator_);
  }
}

TEST_CASE("product mapping stacks coordinatewise") {
  Rng rng(5);
  const StochasticMapping phi = random_mapping(rng, 2, 3, 2);
  const StochasticMapping psi = random_mapping(rng, 2, 3, 2);
  const StochasticMapping prod = product_mapping(phi, psi);
  CHECK(prod.space().q == 4);
  CHECK(prod.space().p == 3);
  CHECK(rel_residual(prod.value(0).value().topRows(2), phi.value(0).value()) ==
        0.0);
  CHECK(rel_residual(prod.value(1).value().bottomRows(2),
                     psi.value(1).value()) == 0.0);

  const StochasticMapping other(
      {"x", "y"}, {psi.value(0), psi.value(1)});
  CHECK_THROWS_AS(product_mapping(phi, other), LabelMismatch);
}
