#include "gfl/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_codec.hpp"

namespace gfl::io {

namespace detail {

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.is_object())
    throw ValidationError(std::string("expected an object holding \"") + key +
                          "\"");
  auto it = j.find(key);
  if (it == j.end())
    throw ValidationError(std::string("missing field \"") + key + "\"");
  return *it;
}

double require_number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number())
    throw ValidationError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

Index require_integer(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer())
    throw ValidationError(std::string("field \"") + key +
                          "\" must be an integer");
  return v.get<Index>();
}

std::string require_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string())
    throw ValidationError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

const json& require_array(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array())
    throw ValidationError(std::string("field \"") + key + "\" must be an array");
  return v;
}

namespace {

std::vector<double> number_array(const json& arr, const char* key) {
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number())
      throw ValidationError(std::string("field \"") + key +
                            "\" must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)},
              {"im", std::move(im)}};
}

Matrix matrix_from_json(const json& j) {
  const Index rows = require_integer(j, "rows");
  const Index cols = require_integer(j, "cols");
  if (rows < 0 || cols < 0)
    throw ValidationError("matrix: negative dimensions");
  const std::vector<double> re = number_array(require_array(j, "re"), "re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = number_array(require_array(j, "im"), "im");
  const auto count = static_cast<std::size_t>(rows * cols);
  if (re.size() != count || im.size() != count)
    throw ValidationError("matrix: entry arrays must hold rows*cols numbers");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(i * cols + c);
      m(i, c) = Complex(re[k], im[k]);
    }
  return m;
}

json tolerance_to_json(const ToleranceContext& ctx) {
  return json{{"rank_tol", ctx.rank_tol},
              {"psd_tol", ctx.psd_tol},
              {"eq_tol", ctx.eq_tol}};
}

ToleranceContext tolerance_from_json(const json& j) {
  ToleranceContext ctx;
  if (j.contains("rank_tol")) ctx.rank_tol = require_number(j, "rank_tol");
  if (j.contains("psd_tol")) ctx.psd_tol = require_number(j, "psd_tol");
  if (j.contains("eq_tol")) ctx.eq_tol = require_number(j, "eq_tol");
  ctx.validate();
  return ctx;
}

json random_variable_to_json(const RandomVariable& f) {
  json j = matrix_to_json(f.value());
  j["q"] = f.space().q;
  j["p"] = f.space().p;
  return j;
}

RandomVariable random_variable_from_json(const json& j) {
  const ModuleSpace space(require_integer(j, "q"), require_integer(j, "p"));
  return RandomVariable(space, matrix_from_json(j));
}

json mapping_to_json(const StochasticMapping& phi) {
  json values = json::array();
  for (const auto& v : phi.values()) values.push_back(matrix_to_json(v.value()));
  return json{{"labels", phi.labels()},
              {"q", phi.space().q},
              {"p", phi.space().p},
              {"values", std::move(values)}};
}

StochasticMapping mapping_from_json(const json& j) {
  const ModuleSpace space(require_integer(j, "q"), require_integer(j, "p"));
  const json& labels_json = require_array(j, "labels");
  std::vector<std::string> labels;
  labels.reserve(labels_json.size());
  for (const auto& l : labels_json) {
    if (!l.is_string())
      throw ValidationError("mapping: labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  const json& values_json = require_array(j, "values");
  if (values_json.size() != labels.size())
    throw ValidationError("mapping: one value per label required");
  std::vector<RandomVariable> values;
  values.reserve(values_json.size());
  for (const auto& v : values_json)
    values.emplace_back(space, matrix_from_json(v));
  return StochasticMapping(std::move(labels), std::move(values));
}

json kernel_to_json(const OperatorKernel& k) {
  json blocks = json::array();
  for (Index i = 0; i < k.size(); ++i) {
    json row = json::array();
    for (Index j = 0; j < k.size(); ++j) row.push_back(matrix_to_json(k.block(i, j)));
    blocks.push_back(std::move(row));
  }
  return json{{"labels", k.labels()}, {"q", k.q()}, {"blocks", std::move(blocks)}};
}

OperatorKernel kernel_from_json(const json& j) {
  const Index q = require_integer(j, "q");
  const json& labels_json = require_array(j, "labels");
  std::vector<std::string> labels;
  labels.reserve(labels_json.size());
  for (const auto& l : labels_json) {
    if (!l.is_string())
      throw ValidationError("kernel: labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  const json& blocks_json = require_array(j, "blocks");
  if (blocks_json.size() != labels.size())
    throw ValidationError("kernel: blocks must form a square label array");
  std::vector<std::vector<Matrix>> blocks;
  blocks.reserve(blocks_json.size());
  for (const auto& row : blocks_json) {
    if (!row.is_array() || row.size() != labels.size())
      throw ValidationError("kernel: blocks must form a square label array");
    std::vector<Matrix> out_row;
    out_row.reserve(row.size());
    for (const auto& b : row) out_row.push_back(matrix_from_json(b));
    blocks.push_back(std::move(out_row));
  }
  return OperatorKernel(std::move(labels), q, std::move(blocks));
}

json grid_to_json(const Grid& grid) {
  json origin = json::array();
  for (int a = 0; a < grid.d; ++a)
    origin.push_back(grid.origin[static_cast<std::size_t>(a)]);
  return json{{"d", grid.d},
              {"n", grid.n},
              {"delta", grid.delta},
              {"origin", std::move(origin)}};
}

Grid grid_from_json(const json& j) {
  const int d = static_cast<int>(require_integer(j, "d"));
  const Index n = require_integer(j, "n");
  const double delta = require_number(j, "delta");
  std::array<double, 2> origin{0.0, 0.0};
  if (j.contains("origin")) {
    const json& o = require_array(j, "origin");
    if (o.size() != static_cast<std::size_t>(d) && o.size() != 2)
      throw ValidationError("grid: origin must have one entry per axis");
    for (std::size_t a = 0; a < o.size() && a < 2; ++a) {
      if (!o[a].is_number())
        throw ValidationError("grid: origin entries must be numbers");
      origin[a] = o[a].get<double>();
    }
  }
  return Grid(d, n, delta, origin);
}

json test_function_to_json(const TestFunction& phi) {
  const Grid& grid = phi.grid();
  json re = json::array();
  json im = json::array();
  for (Index c = 0; c < grid.size(); ++c) {
    re.push_back(phi.samples()[c].real());
    im.push_back(phi.samples()[c].imag());
  }
  json lo = json::array();
  json hi = json::array();
  for (int a = 0; a < grid.d; ++a) {
    lo.push_back(phi.support().lo[static_cast<std::size_t>(a)]);
    hi.push_back(phi.support().hi[static_cast<std::size_t>(a)]);
  }
  return json{{"grid", grid_to_json(grid)},
              {"re", std::move(re)},
              {"im", std::move(im)},
              {"support", json{{"lo", std::move(lo)}, {"hi", std::move(hi)}}}};
}

TestFunction test_function_from_json(const json& j) {
  const Grid grid = grid_from_json(require(j, "grid"));
  const std::vector<double> re = number_array(require_array(j, "re"), "re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = number_array(require_array(j, "im"), "im");
  if (re.size() != static_cast<std::size_t>(grid.size()) ||
      im.size() != re.size())
    throw ValidationError("test function: one sample per grid cell required");
  Vector samples(grid.size());
  for (Index c = 0; c < grid.size(); ++c)
    samples[c] = Complex(re[static_cast<std::size_t>(c)],
                         im[static_cast<std::size_t>(c)]);

  IndexBox box;
  if (j.contains("support")) {
    const json& s = require(j, "support");
    const json& lo = require_array(s, "lo");
    const json& hi = require_array(s, "hi");
    if (lo.size() != static_cast<std::size_t>(grid.d) ||
        hi.size() != static_cast<std::size_t>(grid.d))
      throw ValidationError("test function: support bounds need one entry per axis");
    box.lo = {0, 0};
    box.hi = {0, 0};
    for (int a = 0; a < grid.d; ++a) {
      const auto aa = static_cast<std::size_t>(a);
      if (!lo[aa].is_number_integer() || !hi[aa].is_number_integer())
        throw ValidationError("test function: support bounds must be integers");
      box.lo[aa] = lo[aa].get<Index>();
      box.hi[aa] = hi[aa].get<Index>();
    }
    bool empty = false;
    for (int a = 0; a < grid.d; ++a) {
      const auto aa = static_cast<std::size_t>(a);
      if (box.hi[aa] < box.lo[aa]) empty = true;
    }
    if (empty) box = IndexBox{{0, 0}, {-1, -1}};
  } else {
    // Minimal bounding box of the nonzero samples.
    bool any = false;
    std::array<Index, 2> lo{0, 0};
    std::array<Index, 2> hi{0, 0};
    for (Index c = 0; c < grid.size(); ++c) {
      if (samples[c] == Complex(0.0, 0.0)) continue;
      const auto mi = grid.multi_index(c);
      if (!any) {
        lo = mi;
        hi = mi;
        any = true;
      } else {
        for (int a = 0; a < grid.d; ++a) {
          const auto aa = static_cast<std::size_t>(a);
          lo[aa] = std::min(lo[aa], mi[aa]);
          hi[aa] = std::max(hi[aa], mi[aa]);
        }
      }
    }
    box = any ? IndexBox{lo, hi} : IndexBox{{0, 0}, {-1, -1}};
  }
  return TestFunction(grid, std::move(samples), box);
}

json field_to_json(const RandomField& f) {
  json values = json::array();
  for (const auto& v : f.values()) values.push_back(matrix_to_json(v.value()));
  return json{{"grid", grid_to_json(f.grid())},
              {"q", f.space().q},
              {"p", f.space().p},
              {"values", std::move(values)}};
}

RandomField field_from_json(const json& j) {
  const Grid grid = grid_from_json(require(j, "grid"));
  const ModuleSpace space(require_integer(j, "q"), require_integer(j, "p"));
  const json& values_json = require_array(j, "values");
  if (values_json.size() != static_cast<std::size_t>(grid.size()))
    throw ValidationError("field: one value per grid cell required");
  std::vector<RandomVariable> values;
  values.reserve(values_json.size());
  for (const auto& v : values_json)
    values.emplace_back(space, matrix_from_json(v));
  return RandomField(grid, std::move(values));
}

json measure_to_json(const StochasticMeasure& xi) {
  json atoms = json::array();
  for (const auto& a : xi.atoms()) atoms.push_back(matrix_to_json(a.value()));
  return json{{"grid", grid_to_json(xi.grid())}, {"atoms", std::move(atoms)}};
}

StochasticMeasure measure_from_json(const json& j) {
  const Grid grid = grid_from_json(require(j, "grid"));
  const json& atoms_json = require_array(j, "atoms");
  if (atoms_json.empty())
    throw ValidationError("measure: atoms must be present");
  std::vector<RandomVariable> atoms;
  atoms.reserve(atoms_json.size());
  Matrix first = matrix_from_json(atoms_json.front());
  const ModuleSpace space(first.rows(), first.cols());
  atoms.emplace_back(space, std::move(first));
  for (std::size_t i = 1; i < atoms_json.size(); ++i)
    atoms.emplace_back(space, matrix_from_json(atoms_json[i]));
  return StochasticMeasure(grid, std::move(atoms));
}

json cell_set_to_json(const CellSet& a) {
  json out = json::array();
  for (Index c : a.members()) out.push_back(c);
  return out;
}

CellSet cell_set_from_json(const json& j, const Grid& grid) {
  if (!j.is_array())
    throw ValidationError("cell set: expected an array of cell indices");
  std::vector<Index> members;
  members.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer())
      throw ValidationError("cell set: indices must be integers");
    members.push_back(v.get<Index>());
  }
  return CellSet(grid, std::move(members));
}

json report_to_json(const Report& report) {
  json clauses = json::array();
  for (const auto& c : report.clauses) {
    json e{{"name", c.name},
           {"residual", c.residual},
           {"tol", c.tol},
           {"pass", c.pass()}};
    if (c.status == Clause::Status::skipped) e["skipped"] = true;
    clauses.push_back(std::move(e));
  }
  return json{{"scenario", report.name},
              {"pass", report.pass()},
              {"clauses", std::move(clauses)},
              {"artifacts", parse_text(report.artifacts_json)}};
}

}  // namespace detail

namespace {

// Two-space indentation keeps reports diff-friendly.
std::string dump(const detail::json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json(const Matrix& m) { return dump(detail::matrix_to_json(m)); }

Matrix matrix_from_json(const std::string& text) {
  return detail::matrix_from_json(detail::parse_text(text));
}

std::string to_json(const ToleranceContext& ctx) {
  return dump(detail::tolerance_to_json(ctx));
}

ToleranceContext tolerance_from_json(const std::string& text) {
  return detail::tolerance_from_json(detail::parse_text(text));
}

std::string to_json(const RandomVariable& f) {
  return dump(detail::random_variable_to_json(f));
}

RandomVariable random_variable_from_json(const std::string& text) {
  return detail::random_variable_from_json(detail::parse_text(text));
}

std::string to_json(const StochasticMapping& phi) {
  return dump(detail::mapping_to_json(phi));
}

StochasticMapping mapping_from_json(const std::string& text) {
  return detail::mapping_from_json(detail::parse_text(text));
}

std::string to_json(const OperatorKernel& k) {
  return dump(detail::kernel_to_json(k));
}

OperatorKernel kernel_from_json(const std::string& text) {
  return detail::kernel_from_json(detail::parse_text(text));
}

std::string to_json(const Grid& grid) { return dump(detail::grid_to_json(grid)); }

Grid grid_from_json(const std::string& text) {
  return detail::grid_from_json(detail::parse_text(text));
}

std::string to_json(const TestFunction& phi) {
  return dump(detail::test_function_to_json(phi));
}

TestFunction test_function_from_json(const std::string& text) {
  return detail::test_function_from_json(detail::parse_text(text));
}

std::string to_json(const RandomField& f) {
  return dump(detail::field_to_json(f));
}

RandomField field_from_json(const std::string& text) {
  return detail::field_from_json(detail::parse_text(text));
}

std::string to_json(const StochasticMeasure& xi) {
  return dump(detail::measure_to_json(xi));
}

StochasticMeasure measure_from_json(const std::string& text) {
  return detail::measure_from_json(detail::parse_text(text));
}

std::string to_json(const CellSet& a) { return dump(detail::cell_set_to_json(a)); }

CellSet cell_set_from_json(const std::string& text, const Grid& grid) {
  return detail::cell_set_from_json(detail::parse_text(text), grid);
}

std::string to_json(const Report& report) {
  return dump(detail::report_to_json(report));
}

std::string load_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ParseError("cannot read file: " + path);
  return buffer.str();
}

void save_text_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + tmp);
    out << text;
    out.flush();
    if (!out.good()) throw Error("cannot write file: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error("cannot replace file: " + path + " (" + ec.message() + ")");
  }
}

}  // namespace gfl::io
