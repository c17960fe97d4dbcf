#include "momentgaps/io.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mgap::io {

namespace {

const char* arithmetic_name(Arithmetic a) { return a == Arithmetic::Exact ? "exact" : "float"; }

Rational number_at(const Json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) {
      if (v.is_number_unsigned()) return Rational(mpz_class(std::to_string(v.get<std::uint64_t>())));
      return Rational(mpz_class(std::to_string(v.get<std::int64_t>())));
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw InputError(where + ": not a finite number");
      return rational_from_decimal(d);
    }
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected a number or a \"p/q\" string");
}

Index integer_at(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<Index>();
}

double positive_at(const Json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  const double d = v.get<double>();
  if (!(d > 0) || !std::isfinite(d)) throw InputError(where + ": must be positive");
  return d;
}

}  // namespace

bool is_mode(const std::string& mode) {
  static const char* modes[] = {"thmp",      "gap-last",  "gap-last2",  "gap-first", "gap-first2",
                                "curve-yx3", "curve-yx4", "curve-y2x3", "curve-y3x4"};
  for (const char* m : modes)
    if (mode == m) return true;
  return false;
}

Problem parse_problem(const Json& j) {
  if (!j.is_object()) throw InputError("top level: expected an object");
  Problem p;
  if (!j.contains("mode") || !j["mode"].is_string()) throw InputError("mode: missing or not a string");
  p.mode = j["mode"].get<std::string>();
  if (!is_mode(p.mode)) throw InputError("mode: unknown mode '" + p.mode + "'");
  if (p.mode == "thmp") p.kind = Mode::Thmp;
  else if (p.mode.rfind("gap-", 0) == 0) {
    p.kind = Mode::Gap;
    p.pattern = parse_gap_pattern(p.mode);
  } else {
    p.kind = Mode::Curve;
    p.curve = parse_curve(p.mode);
  }

  if (j.contains("arithmetic")) {
    const Json& a = j["arithmetic"];
    if (a == "exact") p.arithmetic = Arithmetic::Exact;
    else if (a == "float") p.arithmetic = Arithmetic::Float;
    else throw InputError("arithmetic: expected \"exact\" or \"float\"");
  }
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) throw InputError("tolerances: expected an object");
    for (const auto& [key, val] : t.items()) {
      const std::string where = "tolerances." + key;
      if (key == "psd") p.tol.eps_psd = positive_at(val, where);
      else if (key == "rank") p.tol.eps_rank = positive_at(val, where);
      else if (key == "verify") p.verify_tol = positive_at(val, where);
      else throw InputError(where + ": unknown tolerance");
    }
  }

  if (!j.contains("moments") || !j["moments"].is_array()) throw InputError("moments: missing or not an array");
  const Json& ms = j["moments"];

  if (p.kind != Mode::Curve) {
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string where = "moments[" + std::to_string(i) + "]";
      if (ms[i].is_null()) p.moments.emplace_back();
      else p.moments.emplace_back(number_at(ms[i], where));
    }
    if (p.moments.size() < 3 || p.moments.size() % 2 == 0)
      throw InputError("moments: need an odd number (2k+1 >= 3) of entries, got " + std::to_string(p.moments.size()));
    const Index k = static_cast<Index>(p.moments.size() / 2);
    std::vector<Index> gaps;
    if (p.kind == Mode::Gap) {
      if (k < minimum_k(p.pattern))
        throw InputError("moments: mode " + p.mode + " needs k >= " + std::to_string(minimum_k(p.pattern)));
      gaps = gap_indices(p.pattern, k);
    }
    for (std::size_t i = 0; i < p.moments.size(); ++i) {
      const bool gap = std::find(gaps.begin(), gaps.end(), static_cast<Index>(i)) != gaps.end();
      const std::string where = "moments[" + std::to_string(i) + "]";
      if (gap && p.moments[i]) throw InputError(where + ": mode " + p.mode + " expects a gap (null) here");
      if (!gap && !p.moments[i]) throw InputError(where + ": gap not allowed here in mode " + p.mode);
    }
    if (j.contains("extra_moment")) throw InputError("extra_moment: only used by curve modes");
    return p;
  }

  Index top = 0;
  for (std::size_t r = 0; r < ms.size(); ++r) {
    const std::string where = "moments[" + std::to_string(r) + "]";
    const Json& rec = ms[r];
    if (!rec.is_object() || !rec.contains("i") || !rec.contains("j") || !rec.contains("value"))
      throw InputError(where + ": expected a record {\"i\", \"j\", \"value\"}");
    const Index i = integer_at(rec["i"], where + ".i");
    const Index jj = integer_at(rec["j"], where + ".j");
    if (i < 0 || jj < 0) throw InputError(where + ": negative index");
    if (!p.bivariate.emplace(std::pair{i, jj}, number_at(rec["value"], where + ".value")).second)
      throw InputError(where + ": duplicate moment (" + std::to_string(i) + "," + std::to_string(jj) + ")");
    top = std::max(top, i + jj);
  }
  if (j.contains("k")) {
    p.k = integer_at(j["k"], "k");
    if (p.k < 1) throw InputError("k: must be at least 1");
    if (top > 2 * p.k) throw InputError("moments: degree " + std::to_string(top) + " exceeds 2k");
  } else {
    if (top == 0 || top % 2 != 0) throw InputError("moments: highest degree must be even and positive (or give k)");
    p.k = top / 2;
  }
  for (Index d = 0; d <= 2 * p.k; ++d)
    for (Index i = 0; i <= d; ++i)
      if (!p.bivariate.count({i, d - i}))
        throw InputError("moments: missing beta_{" + std::to_string(i) + "," + std::to_string(d - i) + "}");
  if (j.contains("extra_moment") && !j["extra_moment"].is_null()) {
    if (!curve_needs_extra(p.curve)) throw InputError("extra_moment: mode " + p.mode + " takes no extra moment");
    p.extra = number_at(j["extra_moment"], "extra_moment");
  } else if (curve_needs_extra(p.curve)) {
    throw Error(ErrorCode::MissingExtraMoment, std::string("extra_moment: required by mode ") + p.mode);
  }
  return p;
}

Problem read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line and column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
  return parse_problem(j);
}

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Surd& s) {
  if (s.is_rational()) return to_json(s.rational_part());
  const Rational& b = s.surd_coefficient();
  Rational radicand = b * b * s.radicand();
  radicand.canonicalize();
  Json out;
  out["center"] = to_json(s.rational_part());
  out["radicand"] = to_json(radicand);
  out["sign"] = sgn(b) > 0 ? 1 : -1;
  return out;
}

Json to_json(double v) { return v; }

namespace {

template <class T>
Json values_json(const std::map<Index, T>& m) {
  Json out = Json::array();
  for (const auto& [i, v] : m) out.push_back(Json{{"index", i}, {"value", to_json(v)}});
  return out;
}

Json measure_json(const AtomicMeasure& m) {
  Json out;
  Json atoms = Json::array(), weights = Json::array();
  for (std::size_t a = 0; a < m.size(); ++a) {
    atoms.push_back(m.exact_atoms ? to_json((*m.exact_atoms)[a]) : Json(m.atoms[a]));
    weights.push_back(m.exact_weights ? to_json((*m.exact_weights)[a]) : Json(m.weights[a]));
  }
  out["atoms"] = atoms;
  out["weights"] = weights;
  return out;
}

Json curve_measure_json(const CurveMeasure& m) {
  Json out;
  Json points = Json::array(), weights = Json::array(), params = Json::array();
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (m.exact_points) {
      const auto& [x, y] = (*m.exact_points)[a];
      points.push_back(Json::array({to_json(x), to_json(y)}));
      weights.push_back(to_json((*m.exact_weights)[a]));
    } else {
      points.push_back(Json::array({m.points[a].first, m.points[a].second}));
      weights.push_back(m.weights[a]);
    }
    params.push_back(m.parameters[a]);
  }
  out["points"] = points;
  out["weights"] = weights;
  out["parameters"] = params;
  return out;
}

template <class T>
Json gap_certificate(const GapVerdict<T>& v) {
  Json c;
  c["ranks"] = Json::object();
  for (const auto& [name, r] : v.ranks) c["ranks"][name] = r;
  if (v.admissible) {
    const auto& a = *v.admissible;
    c["interval"] = Json{{"index", v.admissible_index},
                         {"center", to_json(a.center)},
                         {"radicand", to_json(a.radicand)},
                         {"lower", to_json(a.x_minus)},
                         {"upper", to_json(a.x_plus)},
                         {"rank_at_endpoint", a.rank_at_endpoint},
                         {"rank_interior", a.rank_interior}};
  }
  if (v.lower_bound) c["lower_bound"] = to_json(*v.lower_bound);
  if (v.certificate) {
    Json dir = Json::array();
    for (Index i = 0; i < v.certificate->direction.size(); ++i) dir.push_back(to_json(v.certificate->direction(i)));
    c["not_psd"] = Json{{"rows", v.certificate->rows},
                        {"min_eigenvalue", v.certificate->min_eigenvalue},
                        {"direction", dir}};
  }
  return c;
}

template <class T>
void gap_fields(Json& r, const GapVerdict<T>& v) {
  r["exists"] = v.exists;
  r["reason"] = to_string(v.reason);
  r["branch"] = v.branch;
  if (v.exists) {
    r["atom_count"] = v.atom_count;
    r["minimal"] = v.minimal;
    r["completions"] = values_json(v.completions);
  }
}

// Direct summation in long double, independent of the solver's residual.
double resum_error(const std::vector<std::pair<Index, Rational>>& known, const std::vector<long double>& x,
                   const std::vector<long double>& w) {
  double worst = 0.0;
  for (const auto& [i, beta] : known) {
    long double sum = 0, abs_sum = 0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      const long double term = w[a] * std::pow(x[a], static_cast<long double>(i));
      sum += term;
      abs_sum += std::fabs(term);
    }
    const long double target = to_double(beta);
    const long double denom = std::max({std::fabs(target), abs_sum, 1e-300L});
    worst = std::max(worst, static_cast<double>(std::fabs(sum - target) / denom));
  }
  return worst;
}

// x-exponent num/den with den 1 or 3 (beta_{5/3,0}).
struct BivariateTarget {
  Index num, den, j;
  Rational value;
};

double resum_error_2d(const std::vector<BivariateTarget>& known, const CurveMeasure& m) {
  double worst = 0.0;
  for (const auto& t : known) {
    long double sum = 0, abs_sum = 0;
    for (std::size_t a = 0; a < m.size(); ++a) {
      const long double x = m.points[a].first, y = m.points[a].second;
      const long double base = t.den == 1 ? x : std::cbrt(x);
      const long double term = m.weights[a] * std::pow(base, static_cast<long double>(t.num)) *
                               std::pow(y, static_cast<long double>(t.j));
      sum += term;
      abs_sum += std::fabs(term);
    }
    const long double target = to_double(t.value);
    const long double denom = std::max({std::fabs(target), abs_sum, 1e-300L});
    worst = std::max(worst, static_cast<double>(std::fabs(sum - target) / denom));
  }
  return worst;
}

void attach_verification(Json& r, bool exists, double residual, std::optional<double> error, double tol) {
  if (!exists) return;
  r["residual"] = residual;
  if (!error) return;
  r["verification"] = Json{{"max_relative_error", *error}, {"tolerance", tol}, {"passed", *error <= tol}};
}

template <class T>
int run_typed(const Problem& p, const RunOptions& opts, Json& r) {
  auto conv = [](const Rational& q) { return Field<T>::from_rational(q); };

  if (p.kind == Mode::Thmp) {
    std::vector<T> s;
    std::vector<std::pair<Index, Rational>> known;
    for (std::size_t i = 0; i < p.moments.size(); ++i) {
      s.push_back(conv(*p.moments[i]));
      known.emplace_back(static_cast<Index>(i), *p.moments[i]);
    }
    const ThmpVerdict v = solve_thmp(MomentSequence<T>(s), p.tol);
    r["exists"] = v.exists;
    r["reason"] = to_string(v.reason);
    r["rank"] = v.rank;
    r["matrix_rank"] = v.matrix_rank;
    if (v.exists) {
      r["atom_count"] = static_cast<Index>(v.measure->size());
      r["measure"] = measure_json(*v.measure);
    }
    std::optional<double> err;
    if (v.exists && opts.verify) {
      std::vector<long double> x(v.measure->atoms.begin(), v.measure->atoms.end());
      std::vector<long double> w(v.measure->weights.begin(), v.measure->weights.end());
      err = resum_error(known, x, w);
    }
    attach_verification(r, v.exists, v.residual, err, p.verify_tol);
    if (err && *err > p.verify_tol) return 2;
    return v.exists ? 0 : 1;
  }

  if (p.kind == Mode::Gap) {
    std::vector<std::optional<T>> entries;
    std::vector<std::pair<Index, Rational>> known;
    for (std::size_t i = 0; i < p.moments.size(); ++i) {
      if (p.moments[i]) {
        entries.emplace_back(conv(*p.moments[i]));
        known.emplace_back(static_cast<Index>(i), *p.moments[i]);
      } else {
        entries.emplace_back();
      }
    }
    const auto g = GappedSequence<T>::from_entries(p.pattern, entries);
    const GapVerdict<T> v = solve_gap(g, p.tol);
    gap_fields(r, v);
    if (v.exists) r["measure"] = measure_json(*v.measure);
    r["certificate"] = gap_certificate(v);
    std::optional<double> err;
    if (v.exists && opts.verify) {
      std::vector<long double> x(v.measure->atoms.begin(), v.measure->atoms.end());
      std::vector<long double> w(v.measure->weights.begin(), v.measure->weights.end());
      err = resum_error(known, x, w);
    }
    attach_verification(r, v.exists, v.residual, err, p.verify_tol);
    if (err && *err > p.verify_tol) return 2;
    return v.exists ? 0 : 1;
  }

  std::map<std::pair<Index, Index>, T> beta;
  std::vector<BivariateTarget> known;
  for (const auto& [ij, q] : p.bivariate) {
    beta.emplace(ij, conv(q));
    known.push_back({ij.first, 1, ij.second, q});
  }
  std::optional<T> extra;
  if (p.extra) {
    extra = conv(*p.extra);
    if (p.curve == Curve::YX4) known.push_back({3, 1, 2 * p.k - 2, *p.extra});
    else known.push_back({5, 3, 0, *p.extra});
  }
  const BivariateSequence<T> b(p.k, beta, extra);
  const CurveVerdict<T> v = solve_curve(b, p.curve, p.tol);
  r["exists"] = v.exists;
  r["hypotheses"] = Json{{"psd", v.hypotheses.psd},
                         {"relation", v.hypotheses.relation},
                         {"rg", v.hypotheses.rg},
                         {"failures", v.hypotheses.failures}};
  if (v.gap) {
    Json uni;
    uni["pattern"] = to_string(v.reduced->pattern());
    uni["degree"] = v.reduced->degree();
    gap_fields(uni, *v.gap);
    uni["certificate"] = gap_certificate(*v.gap);
    r["reduced"] = uni;
  }
  if (v.exists) {
    r["atom_count"] = v.atom_count;
    r["measure"] = curve_measure_json(*v.measure);
  }
  std::optional<double> err;
  if (v.exists && opts.verify) err = resum_error_2d(known, *v.measure);
  attach_verification(r, v.exists, v.residual, err, p.verify_tol);
  if (err && *err > p.verify_tol) return 2;
  return v.exists ? 0 : 1;
}

}  // namespace

RunResult run(const Problem& p, const RunOptions& opts) {
  RunResult out;
  Json& r = out.report;
  r["mode"] = p.mode;
  r["arithmetic"] = arithmetic_name(p.arithmetic);
  const auto start = std::chrono::steady_clock::now();
  try {
    out.exit_code = p.arithmetic == Arithmetic::Exact ? run_typed<Surd>(p, opts, r) : run_typed<double>(p, opts, r);
    if (out.exit_code == 2) r["error"] = Json{{"code", "VerificationFailed"}, {"message", "re-summed moments exceed the verification tolerance"}};
  } catch (const Error& e) {
    out.exit_code = 2;
    r["error"] = Json{{"code", to_string(e.code())}, {"message", e.what()}};
  }
  if (opts.timing)
    r["timing"] = Json{{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  return out;
}

Json sample_problem(const std::string& mode, const AtomicMeasure& m, Index k) {
  if (!is_mode(mode)) throw InputError("mode: unknown mode '" + mode + "'");
  if (!m.is_exact()) throw InputError("sample: measure must be rational");
  Json j;
  j["mode"] = mode;
  j["arithmetic"] = "exact";
  if (mode.rfind("curve-", 0) == 0) {
    const Curve c = parse_curve(mode);
    const auto b = curve_moments<Surd>(c, k, *m.exact_atoms, *m.exact_weights);
    Json recs = Json::array();
    for (Index d = 0; d <= 2 * k; ++d)
      for (Index i = d; i >= 0; --i) recs.push_back(Json{{"i", i}, {"j", d - i}, {"value", to_json(b(i, d - i))}});
    j["k"] = k;
    j["moments"] = recs;
    if (b.extra()) j["extra_moment"] = to_json(*b.extra());
    return j;
  }
  const auto mom = exact_moments_of(m, 2 * k);
  std::vector<Index> gaps;
  if (mode != "thmp") gaps = gap_indices(parse_gap_pattern(mode), k);
  Json arr = Json::array();
  for (Index i = 0; i <= 2 * k; ++i) {
    if (std::find(gaps.begin(), gaps.end(), i) != gaps.end()) arr.push_back(nullptr);
    else arr.push_back(to_json(mom[static_cast<std::size_t>(i)]));
  }
  j["moments"] = arr;
  return j;
}

}  // namespace mgap::io
