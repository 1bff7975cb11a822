#pragma once

#include <string>
#include <vector>

namespace mvi {

struct SuiteProblem {
  std::string name;  // matches data/<name>.json
  std::string kind;
  std::string json;
};

/// The bundled certificate suite.
const std::vector<SuiteProblem>& suite_problems();

}  // namespace mvi
