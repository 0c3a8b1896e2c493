#include <array>
#include <string>

#include "qvi/errors.hpp"
#include "qvi/problem_io.hpp"

namespace qvi {
namespace {

struct Builtin {
  std::string_view name;
  std::string_view text;
};

constexpr std::array kBuiltins{
    Builtin{"remark5", R"json({
  "kind": "qvi",
  "name": "remark5",
  "description": "1-D QVI with a non-monotone f and a strongly monotone pair (f, Id - v)",
  "dim": 1,
  "f": ["-x1 + (1/3)*sin(x1)"],
  "v": ["2*x1 + (1/3)*cos(x1)"],
  "inverse": {"strategy": "bracket", "lower": -1000, "upper": 1000},
  "set": {"type": "orthant"},
  "constants": {"gamma": 0.2222222222222222}
})json"},
    Builtin{"example1", R"json({
  "kind": "qvi",
  "name": "example1",
  "description": "2-D QVI with linear displacement; v is 0.85-Lipschitz",
  "dim": 2,
  "f": {"matrix": [[3, 1], [1, 4]], "remainder": ["0.5*cos(x2)^3", "0.7*sin(x1)"]},
  "v": {"matrix": [[-0.2, -0.4], [-0.4, -0.6]]},
  "set": {"type": "box", "lower": -30, "upper": 40},
  "constants": {"mu": 1.68, "L": 5.32, "l": 0.85}
})json"},
    Builtin{"example2", R"json({
  "kind": "qvi",
  "name": "example2",
  "description": "3-D QVI with non-monotone f and a 23.12-Lipschitz linear displacement",
  "dim": 3,
  "f": {"matrix": [[5, 7, 2], [4, 3, -3], [8, 1, 2]],
        "remainder": ["1.2*abs(sin(x2)^3)", "1.1*abs(sin(x3))", "cos(abs(x1) + x3)^3"]},
  "v": {"matrix": [[-9, -14, -4], [-8, -5, 6], [-16, -2, -3]]},
  "set": {"type": "box", "lower": -400, "upper": 500},
  "constants": {"l": 23.12}
})json"},
    Builtin{"example3", R"json({
  "kind": "qvi",
  "name": "example3",
  "description": "3-D QVI with a semilinear displacement A x + v1(x)",
  "dim": 3,
  "f": {"matrix": [[5, 7, 2], [4, 3, -3], [8, 1, 2]],
        "remainder": ["0.8*sin(x2)^2", "0.7*sin(x3)", "0.8*cos(x1 + x3)^3"]},
  "v": {"matrix": [[-9, -14, -4], [-8, -5, 6], [-16, -2, -3]],
        "remainder": ["0.6*cos(x2)^2", "0.5*sin(x1)", "0.7*sin(x3)^2"]},
  "inverse": {"strategy": "semilinear", "lipschitz_g": 0.7},
  "set": {"type": "box", "lower": -400, "upper": 500}
})json"},
    Builtin{"example4", R"json({
  "kind": "zero",
  "name": "example4",
  "description": "nonsmooth equation A x + g(x) = 0 solved with w = A",
  "dim": 3,
  "f": {"matrix": [[5, 7, 2], [4, 3, -3], [8, 1, 2]],
        "remainder": ["3*abs(sin(x3))", "abs(cos(x1)) + 2*abs(sin(x2))", "3*cos(x1 + abs(x3))"]},
  "w": {"matrix": [[5, 7, 2], [4, 3, -3], [8, 1, 2]]}
})json"},
    Builtin{"rotation", R"json({
  "kind": "qvi",
  "name": "rotation",
  "description": "monotone but not strongly monotone rotation field on [-1, 1]^2",
  "dim": 2,
  "f": {"matrix": [[0, -1], [1, 0]]},
  "v": "zero",
  "set": {"type": "box", "lower": -1, "upper": 1},
  "constants": {"L": 1}
})json"},
    Builtin{"example1-unit", R"json({
  "kind": "qvi",
  "name": "example1-unit",
  "description": "example1 with unit coefficients on the nonlinear terms",
  "dim": 2,
  "f": {"matrix": [[3, 1], [1, 4]], "remainder": ["cos(x2)^3", "sin(x1)"]},
  "v": {"matrix": [[-0.2, -0.4], [-0.4, -0.6]]},
  "set": {"type": "box", "lower": -30, "upper": 40}
})json"},
    Builtin{"example3-zero", R"json({
  "kind": "zero",
  "name": "example3-zero",
  "description": "f(x) = 0 for the example3 f, solved with w = A",
  "dim": 3,
  "f": {"matrix": [[5, 7, 2], [4, 3, -3], [8, 1, 2]],
        "remainder": ["0.8*sin(x2)^2", "0.7*sin(x3)", "0.8*cos(x1 + x3)^3"]},
  "w": {"matrix": [[5, 7, 2], [4, 3, -3], [8, 1, 2]]}
})json"},
};

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& b : kBuiltins) out.emplace_back(b.name);
  return out;
}

std::string_view builtin_text(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return b.text;
  }
  throw ConfigError("unknown built-in problem '" + std::string(name) + "'");
}

}  // namespace qvi
