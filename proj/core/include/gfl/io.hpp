#pragma once

#include <string>

#include "gfl/fields.hpp"
#include "gfl/kernels.hpp"
#include "gfl/measures.hpp"
#include "gfl/report.hpp"

namespace gfl::io {

// JSON codecs.  Matrices are {"rows","cols","re","im"} with row-major entry
// arrays; compound types nest that format.  Decoders throw ParseError on
// malformed JSON and ValidationError on structurally valid but inconsistent
// content.

std::string to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);

std::string to_json(const ToleranceContext& ctx);
ToleranceContext tolerance_from_json(const std::string& text);

std::string to_json(const RandomVariable& f);
RandomVariable random_variable_from_json(const std::string& text);

std::string to_json(const StochasticMapping& phi);
StochasticMapping mapping_from_json(const std::string& text);

std::string to_json(const OperatorKernel& k);
OperatorKernel kernel_from_json(const std::string& text);

std::string to_json(const Grid& grid);
Grid grid_from_json(const std::string& text);

std::string to_json(const TestFunction& phi);
TestFunction test_function_from_json(const std::string& text);

std::string to_json(const RandomField& f);
RandomField field_from_json(const std::string& text);

std::string to_json(const StochasticMeasure& xi);
StochasticMeasure measure_from_json(const std::string& text);

std::string to_json(const CellSet& a);
CellSet cell_set_from_json(const std::string& text, const Grid& grid);

std::string to_json(const Report& report);

std::string load_text_file(const std::string& path);

// Writes via a sibling temporary file and rename, so readers never observe a
// partial file.
void save_text_file_atomic(const std::string& path, const std::string& text);

}  // namespace gfl::io
