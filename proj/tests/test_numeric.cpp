#include "gfl/numeric.hpp"

#include "gfl/rng.hpp"
#include "test_support.hpp"

using namespace gfl;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

constexpr Complex I{0.0, 1.0};

}  // namespace

TEST_CASE("rel_residual normalizes by the larger of one and both norms") {
  const Matrix a = from_rows({{3.0, 4.0}});
  const Matrix z = Matrix::Zero(1, 2);
  CHECK(rel_residual(a, a) == 0.0);
  // ||a|| = 5, residual 5 / max(1, 5, 0) = 1.
  CHECK(rel_residual(a, z) == doctest::Approx(1.0));
  // Small matrices divide by 1, so the residual is absolute.
  const Matrix s = from_rows({{0.3, 0.0}});
  CHECK(rel_residual(s, Matrix::Zero(1, 2)) == doctest::Approx(0.3));
  CHECK_THROWS_AS(rel_residual(a, Matrix::Zero(2, 1)), DimensionMismatch);
}

TEST_CASE("approx_equal applies eq_tol") {
  ToleranceContext ctx;
  ctx.eq_tol = 1e-6;
  const Matrix a = Matrix::Identity(2, 2);
  Matrix b = a;
  b(0, 0) += 1e-8;
  CHECK(approx_equal(a, b, ctx));
  b(0, 0) += 1e-3;
  CHECK(!approx_equal(a, b, ctx));
}

TEST_CASE("tolerance context rejects nonpositive cutoffs") {
  ToleranceContext ctx;
  ctx.eq_tol = 0.0;
  CHECK_THROWS_AS(ctx.validate(), ValidationError);
}

TEST_CASE("hermitian_eig returns descending eigenvalues and a unitary basis") {
  const Matrix a = from_rows({{2.0, 1.0}, {1.0, 2.0}});
  const HermitianEig eig = hermitian_eig(a);
  CHECK(eig.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
  const Matrix v = eig.eigenvectors;
  CHECK(rel_residual(v * v.adjoint(), Matrix::Identity(2, 2)) < 1e-12);
  const Matrix rebuilt =
      v * eig.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
  CHECK(rel_residual(rebuilt, a) < 1e-12);
}

TEST_CASE("hermitian_eig handles complex Hermitian input") {
  const Matrix a = from_rows({{2.0, I}, {-I, 2.0}});
  const HermitianEig eig = hermitian_eig(a);
  CHECK(eig.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig rejects clearly non-Hermitian input") {
  const Matrix a = from_rows({{0.0, 1.0}, {0.0, 0.0}});
  CHECK_THROWS_AS(hermitian_eig(a), NotHermitian);
  CHECK_THROWS_AS(hermitian_eig(Matrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("numerical_rank counts singular values above the relative cutoff") {
  Matrix a = Matrix::Zero(3, 3);
  CHECK(numerical_rank(a) == 0);
  a(0, 0) = 1.0;
  a(1, 1) = 1e-14;
  CHECK(numerical_rank(a) == 1);
  CHECK(numerical_rank(Matrix::Identity(4, 4)) == 4);
  ToleranceContext loose;
  loose.rank_tol = 0.5;
  a(1, 1) = 0.6;
  CHECK(numerical_rank(a, loose) == 2);
}

TEST_CASE("subspace wraps an orthonormal basis and builds its projector") {
  Matrix b(3, 1);
  b << Complex(1.0), Complex(0.0), Complex(0.0);
  const Subspace s(3, b);
  CHECK(s.ambient_dim() == 3);
  CHECK(s.dim() == 1);
  Matrix p = Matrix::Zero(3, 3);
  p(0, 0) = 1.0;
  CHECK(rel_residual(s.projector(), p) == 0.0);

  CHECK(Subspace::zero(3).dim() == 0);
  CHECK(Subspace::full(3).dim() == 3);
  CHECK(rel_residual(Subspace::full(3).projector(), Matrix::Identity(3, 3)) ==
        0.0);

  Matrix bad(3, 2);
  bad << Complex(1.0), Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0),
      Complex(0.0);
  CHECK_THROWS_AS(Subspace(3, bad), ValidationError);
  CHECK_THROWS_AS(Subspace(1, Matrix::Identity(2, 2)), DimensionMismatch);
}

TEST_CASE("span collapses dependent generators") {
  Vector e1 = Vector::Zero(3);
  e1[0] = 1.0;
  Vector e2 = Vector::Zero(3);
  e2[1] = 1.0;
  const Subspace s = span(3, {e1, e1, Vector(e1 + e2)});
  CHECK(s.dim() == 2);
  CHECK(span(3, {}).dim() == 0);
  CHECK(span(2, {Vector(Vector::Zero(2))}).dim() == 0);
}

TEST_CASE("column_space matches the matrix rank") {
  Matrix a(3, 2);
  a << Complex(1.0), Complex(2.0), Complex(0.0), Complex(0.0), Complex(1.0),
      Complex(2.0);
  const Subspace s = column_space(a);
  CHECK(s.ambient_dim() == 3);
  CHECK(s.dim() == 1);
}

TEST_CASE("intersect finds the common directions") {
  Vector e1 = Vector::Zero(3);
  e1[0] = 1.0;
  Vector e2 = Vector::Zero(3);
  e2[1] = 1.0;
  Vector e3 = Vector::Zero(3);
  e3[2] = 1.0;
  const Subspace s12 = span(3, {e1, e2});
  const Subspace s23 = span(3, {e2, e3});
  const Subspace meet = intersect(s12, s23);
  CHECK(meet.dim() == 1);
  Matrix p = Matrix::Zero(3, 3);
  p(1, 1) = 1.0;
  CHECK(rel_residual(meet.projector(), p) < 1e-12);

  CHECK(intersect(span(3, {e1}), span(3, {e2})).dim() == 0);
  const Subspace any = span(3, {Vector(e1 + 2.0 * e3)});
  CHECK(intersect(Subspace::full(3), any).dim() == 1);
}

TEST_CASE("contains orders subspaces by inclusion") {
  Vector e1 = Vector::Zero(3);
  e1[0] = 1.0;
  Vector e2 = Vector::Zero(3);
  e2[1] = 1.0;
  const Subspace big = span(3, {e1, e2});
  const Subspace small = span(3, {Vector(e1 + e2)});
  CHECK(contains(big, small));
  CHECK(!contains(small, big));
  CHECK(contains(big, Subspace::zero(3)));
  CHECK(contains(Subspace::full(3), big));
}

TEST_CASE("intersection lies inside both operands on random subspaces") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Subspace s1 = column_space(rng.complex_gaussian_matrix(5, 3));
    const Subspace s2 = column_space(rng.complex_gaussian_matrix(5, 3));
    const Subspace meet = intersect(s1, s2);
    CHECK(contains(s1, meet));
    CHECK(contains(s2, meet));
    // dim(s1 meet s2) >= dim s1 + dim s2 - ambient.
    CHECK(meet.dim() >= s1.dim() + s2.dim() - 5);
  }
}
