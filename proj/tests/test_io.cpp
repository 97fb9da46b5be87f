#include "gfl/io.hpp"

#include <cstdio>
#include <filesystem>

#include "test_support.hpp"

using namespace gfl;
using gfltest::random_field;
using gfltest::random_mapping;
using gfltest::random_pd_kernel;

namespace {

Matrix sample_matrix() {
  Matrix m(2, 3);
  m << Complex(1.0, -2.0), Complex(0.0, 0.5), 3.0, -1.0, Complex(0.0, 1.0),
      Complex(2.5, 2.5);
  return m;
}

}  // namespace

TEST_CASE("matrices survive a json round trip") {
  const Matrix m = sample_matrix();
  const Matrix back = io::matrix_from_json(io::to_json(m));
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("a missing imaginary part reads as a real matrix") {
  const Matrix back = io::matrix_from_json(
      R"({"rows": 1, "cols": 2, "re": [1.5, -2.0]})");
  CHECK(back(0, 0) == Complex(1.5, 0.0));
  CHECK(back(0, 1) == Complex(-2.0, 0.0));
}

TEST_CASE("matrix decoding validates shape and entry counts") {
  CHECK_THROWS_AS(io::matrix_from_json("{nonsense"), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(R"({"rows": 1, "cols": 1})"),
                  ValidationError);
  CHECK_THROWS_AS(
      io::matrix_from_json(R"({"rows": 2, "cols": 2, "re": [1, 2, 3]})"),
      ValidationError);
  CHECK_THROWS_AS(
      io::matrix_from_json(
          R"({"rows": 1, "cols": 1, "re": [1], "im": [0, 0]})"),
      ValidationError);
}

TEST_CASE("tolerances round trip and reject nonpositive entries") {
  ToleranceContext ctx;
  ctx.rank_tol = 1e-8;
  ctx.eq_tol = 1e-7;
  const ToleranceContext back = io::tolerance_from_json(io::to_json(ctx));
  CHECK(back.rank_tol == ctx.rank_tol);
  CHECK(back.psd_tol == ctx.psd_tol);
  CHECK(back.eq_tol == ctx.eq_tol);

  // Partial documents keep defaults for the absent fields.
  const ToleranceContext partial =
      io::tolerance_from_json(R"({"eq_tol": 1e-6})");
  CHECK(partial.eq_tol == 1e-6);
  CHECK(partial.rank_tol == ToleranceContext{}.rank_tol);

  CHECK_THROWS_AS(io::tolerance_from_json(R"({"eq_tol": 0.0})"),
                  ValidationError);
}

TEST_CASE("random variables embed their space in the matrix object") {
  const ModuleSpace space(2, 3);
  const RandomVariable f(space, sample_matrix());
  const RandomVariable back = io::random_variable_from_json(io::to_json(f));
  CHECK(back.space() == space);
  CHECK((back.value() - f.value()).norm() == 0.0);

  CHECK_THROWS_AS(io::random_variable_from_json(
                      R"({"q": 2, "p": 2, "rows": 1, "cols": 2,
                          "re": [1, 2]})"),
                  DimensionMismatch);
}

TEST_CASE("mappings and kernels round trip with their labels") {
  Rng rng(79);
  const StochasticMapping phi = random_mapping(rng, 2, 4, 3);
  const StochasticMapping phi2 = io::mapping_from_json(io::to_json(phi));
  CHECK(phi2.labels() == phi.labels());
  for (const auto& label : phi.labels())
    CHECK((phi2.value(label).value() - phi.value(label).value()).norm() ==
          0.0);

  const OperatorKernel k = random_pd_kernel(rng, 2, 3);
  const OperatorKernel k2 = io::kernel_from_json(io::to_json(k));
  CHECK(k2.labels() == k.labels());
  CHECK((k2.assembled() - k.assembled()).norm() == 0.0);
}

TEST_CASE("kernel decoding enforces hermitian symmetry") {
  // The off-diagonal pair is (i, i); a hermitian table needs (i, -i).
  const std::string text = R"({
    "labels": ["a", "b"], "q": 1,
    "blocks": [
      [{"rows":1,"cols":1,"re":[1]}, {"rows":1,"cols":1,"re":[0],"im":[1]}],
      [{"rows":1,"cols":1,"re":[0],"im":[1]}, {"rows":1,"cols":1,"re":[1]}]
    ]})";
  CHECK_THROWS_AS(io::kernel_from_json(text), NotHermitian);
}

TEST_CASE("grids round trip with their geometry") {
  const Grid grid(2, 4, 0.25, {1.0, -2.0});
  const Grid back = io::grid_from_json(io::to_json(grid));
  CHECK(back == grid);
  CHECK_THROWS_AS(io::grid_from_json(R"({"d": 1, "n": 4})"), ValidationError);
}

TEST_CASE("test functions keep their support box") {
  const Grid grid(1, 5, 1.0, {0.0, 0.0});
  Vector samples = Vector::Zero(5);
  samples(2) = Complex(0.5, -0.5);
  samples(3) = 1.0;
  const TestFunction phi(grid, samples, IndexBox{{2, 0}, {3, 0}});
  const TestFunction back = io::test_function_from_json(io::to_json(phi));
  CHECK((back.samples() - phi.samples()).norm() == 0.0);
  CHECK(back.support().lo == phi.support().lo);
  CHECK(back.support().hi == phi.support().hi);
}

TEST_CASE("a missing support box is derived from the samples") {
  const std::string text = R"({
    "grid": {"d": 1, "n": 4, "delta": 1.0, "origin": [0.0]},
    "re": [0.0, 2.0, 0.0, 0.0]})";
  const TestFunction phi = io::test_function_from_json(text);
  CHECK(phi.support().lo[0] == 1);
  CHECK(phi.support().hi[0] == 1);

  // Declared support must actually cover the nonzero samples.
  const std::string bad = R"({
    "grid": {"d": 1, "n": 4, "delta": 1.0, "origin": [0.0]},
    "re": [0.0, 2.0, 0.0, 0.0],
    "support": {"lo": [2, 0], "hi": [3, 0]}})";
  CHECK_THROWS_AS(io::test_function_from_json(bad), ValidationError);
}

TEST_CASE("fields and measures round trip over their grids") {
  Rng rng(83);
  const Grid grid(2, 3, 0.5, {0.0, 0.0});
  const RandomField f = random_field(rng, grid, 2, 3);
  const RandomField f2 = io::field_from_json(io::to_json(f));
  CHECK(f2.grid() == f.grid());
  for (Index c = 0; c < grid.size(); ++c)
    CHECK((f2.value(c).value() - f.value(c).value()).norm() == 0.0);

  const StochasticMeasure xi = measure_from_field(f);
  const StochasticMeasure xi2 = io::measure_from_json(io::to_json(xi));
  CHECK(xi2.grid() == xi.grid());
  CHECK(xi2.space() == xi.space());
  for (Index c = 0; c < grid.size(); ++c)
    CHECK((xi2.atom(c).value() - xi.atom(c).value()).norm() == 0.0);
}

TEST_CASE("cell sets serialize as plain index arrays") {
  const Grid grid(1, 6, 1.0, {0.0, 0.0});
  const CellSet a(grid, {4, 0, 2});
  const CellSet back = io::cell_set_from_json(io::to_json(a), grid);
  CHECK(back.members() == a.members());
  CHECK_THROWS_AS(io::cell_set_from_json("[9]", grid), GridMismatch);
}

TEST_CASE("reports serialize clause status and artifacts") {
  Report report;
  report.name = "demo";
  report.add("tight", 1e-12, 1e-9);
  report.add("loose", 0.5, 1e-9);
  report.add_skipped("absent");
  report.artifacts_json = R"({"p": 3})";
  const std::string text = io::to_json(report);
  CHECK(text.find("\"demo\"") != std::string::npos);
  CHECK(text.find("\"skipped\"") != std::string::npos);
  CHECK(text.find("\"pass\": false") != std::string::npos);
  CHECK(text.find("\"p\": 3") != std::string::npos);
}

TEST_CASE("files load, save atomically, and report missing paths") {
  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string path = dir + "/gfl_io_test.json";
  io::save_text_file_atomic(path, "{\"x\": 1}\n");
  CHECK(io::load_text_file(path) == "{\"x\": 1}\n");
  io::save_text_file_atomic(path, "{}\n");
  CHECK(io::load_text_file(path) == "{}\n");
  CHECK(!std::filesystem::exists(path + ".tmp"));
  std::remove(path.c_str());

  CHECK_THROWS_AS(io::load_text_file(dir + "/gfl_io_missing.json"),
                  ParseError);
}
