#pragma once

#include <string>

#include <json.hpp>

#include "gfl/fields.hpp"
#include "gfl/kernels.hpp"
#include "gfl/measures.hpp"
#include "gfl/report.hpp"

// Object-level codecs backing the string-level API of gfl/io.hpp; shared with
// the scenario runner, which embeds these objects in scenario files.
namespace gfl::io::detail {

using json = nlohmann::json;

json parse_text(const std::string& text);

const json& require(const json& j, const char* key);
double require_number(const json& j, const char* key);
Index require_integer(const json& j, const char* key);
std::string require_string(const json& j, const char* key);
const json& require_array(const json& j, const char* key);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json tolerance_to_json(const ToleranceContext& ctx);
ToleranceContext tolerance_from_json(const json& j);

json random_variable_to_json(const RandomVariable& f);
RandomVariable random_variable_from_json(const json& j);

json mapping_to_json(const StochasticMapping& phi);
StochasticMapping mapping_from_json(const json& j);

json kernel_to_json(const OperatorKernel& k);
OperatorKernel kernel_from_json(const json& j);

json grid_to_json(const Grid& grid);
Grid grid_from_json(const json& j);

json test_function_to_json(const TestFunction& phi);
TestFunction test_function_from_json(const json& j);

json field_to_json(const RandomField& f);
RandomField field_from_json(const json& j);

json measure_to_json(const StochasticMeasure& xi);
StochasticMeasure measure_from_json(const json& j);

json cell_set_to_json(const CellSet& a);
CellSet cell_set_from_json(const json& j, const Grid& grid);

json report_to_json(const Report& report);

}  // namespace gfl::io::detail
