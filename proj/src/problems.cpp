#include "mvi/problems.hpp"

namespace mvi {

const std::vector<SuiteProblem>& suite_problems() {
  static const std::vector<SuiteProblem> problems = {
      {"canonical_1d", "linear", R"json({
  "function": {"id": "linear", "params": {"a": [1.0], "b": 0.0}},
  "A": [[0.0]],
  "B": [[1.0]],
  "delta": 0.5,
  "mu": -0.6,
  "s": 0.4,
  "epsilon": 0.1,
  "resolution": 101,
  "seed": 0
}
)json"},
      {"quadratic_1d", "smooth convex", R"json({
  "function": {"id": "quadratic", "params": {"Q": [[1.0]], "a": [1.0], "c": 0.0}},
  "A": [[0.0]],
  "B": [[1.0]],
  "delta": 0.5,
  "mu": -0.5,
  "s": 0.5,
  "epsilon": 0.1,
  "resolution": 101,
  "seed": 0
}
)json"},
      {"max_affine_1d", "max-affine", R"json({
  "function": {"id": "max_affine", "params": {"slopes": [[0.0], [2.0]], "offsets": [0.0, -1.0]}},
  "A": [[0.0]],
  "B": [[1.0]],
  "delta": 0.5,
  "mu": -0.1,
  "s": -0.2,
  "epsilon": 0.1,
  "resolution": 101,
  "seed": 0
}
)json"},
      {"sin_quad_1d", "smooth nonconvex", R"json({
  "function": {"id": "sin_quad", "params": {"amplitude": 0.2, "w": [4.0], "Q": [[1.0]], "a": [0.5]}},
  "A": [[0.0]],
  "B": [[1.0]],
  "delta": 0.5,
  "mu": -0.5,
  "s": 0.4,
  "epsilon": 0.1,
  "resolution": 101,
  "seed": 0
}
)json"},
      {"restricted_1d", "restricted domain", R"json({
  "function": {"id": "linear", "params": {"a": [1.0], "b": 0.0, "domain": {"type": "polytope", "vertices": [[-0.3], [3.0]]}}},
  "A": [[0.0]],
  "B": [[1.0]],
  "delta": 0.5,
  "mu": -0.5,
  "s": 0.4,
  "epsilon": 0.1,
  "resolution": 101,
  "seed": 0
}
)json"},
      {"linear_2d", "two-dimensional", R"json({
  "function": {"id": "linear", "params": {"a": [1.0, 0.0], "b": 0.0}},
  "A": [[0.0, 0.0], [0.0, 1.0]],
  "B": [[2.0, 0.0], [2.0, 1.0]],
  "delta": 0.5,
  "mu": -0.7,
  "s": 1.3,
  "epsilon": 0.1,
  "resolution": 41,
  "seed": 0
}
)json"},
  };
  return problems;
}

}  // namespace mvi
