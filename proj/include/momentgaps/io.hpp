#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "momentgaps/curves.hpp"

namespace mgap::io {

using Json = nlohmann::ordered_json;

enum class Mode { Thmp, Gap, Curve };

struct Problem {
  std::string mode;  // as written in the file, e.g. "gap-last"
  Mode kind = Mode::Thmp;
  GapPattern pattern = GapPattern::Last;
  Curve curve = Curve::YX3;
  Arithmetic arithmetic = Arithmetic::Exact;
  Tolerance tol;
  double verify_tol = 1e-8;

  // univariate modes; nullopt marks a gap
  std::vector<std::optional<Rational>> moments;
  // curve modes
  Index k = 0;
  std::map<std::pair<Index, Index>, Rational> bivariate;
  std::optional<Rational> extra;
};

// Schema violation; message carries the offending field or line.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorCode::InvalidInput, what) {}
};

bool is_mode(const std::string& mode);
Problem parse_problem(const Json& j);
// Reads and parses a file; JSON syntax errors report line and column.
Problem read_problem(const std::string& path);

struct RunOptions {
  bool verify = true;
  bool timing = false;
};

struct RunResult {
  int exit_code = 2;  // 0 measure exists, 1 no measure, 2 input or usage error
  Json report;
};

RunResult run(const Problem& p, const RunOptions& opts = {});

// Problem file for the moments of m, erased per mode (gap modes) or lifted
// to the curve (curve modes).
Json sample_problem(const std::string& mode, const AtomicMeasure& m, Index k);

Json to_json(const Rational& q);
Json to_json(const Surd& s);
Json to_json(double v);

}  // namespace mgap::io
