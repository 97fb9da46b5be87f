#pragma once

#include <string>
#include <vector>

namespace gfl {

// One verified identity: residual compared against its tolerance.  Skipped
// clauses record checks that were not applicable to the given inputs.
struct Clause {
  enum class Status { passed, failed, skipped };

  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  Status status = Status::passed;

  bool pass() const { return status != Status::failed; }
};

struct Report {
  std::string name;
  std::vector<Clause> clauses;
  // Kind-specific payload, serialized as a JSON object.
  std::string artifacts_json = "{}";

  Clause& add(std::string clause_name, double residual, double tol) {
    Clause c;
    c.name = std::move(clause_name);
    c.residual = residual;
    c.tol = tol;
    c.status = residual <= tol ? Clause::Status::passed
                               : Clause::Status::failed;
    clauses.push_back(std::move(c));
    return clauses.back();
  }

  Clause& add_flag(std::string clause_name, bool ok) {
    return add(std::move(clause_name), ok ? 0.0 : 1.0, 0.0);
  }

  Clause& add_skipped(std::string clause_name) {
    Clause c;
    c.name = std::move(clause_name);
    c.status = Clause::Status::skipped;
    clauses.push_back(std::move(c));
    return clauses.back();
  }

  bool pass() const {
    for (const auto& c : clauses)
      if (!c.pass()) return false;
    return true;
  }
};

}  // namespace gfl
