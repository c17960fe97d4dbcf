// Command-line front end: solve a problem file, sample one, or scan a gap.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "momentgaps/io.hpp"
#include "momentgaps/oracle.hpp"

using namespace mgap;

namespace {

int emit(const io::Json& report, const std::string& output) {
  const std::string text = report.dump(2) + "\n";
  if (output.empty() || output == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(output);
  if (!out) {
    std::cerr << "momentgaps: cannot write " << output << "\n";
    return 2;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Hamburger moment problems with gaps, and moment problems on four plane curves"};
  app.require_subcommand(0, 1);

  std::string input, output, mode, arithmetic;
  double tol = 0.0;
  bool verify = true, timing = false;
  app.add_option("input,--input,-i", input, "problem file (JSON)");
  app.add_option("--output,-o", output, "report file (default: stdout)");
  app.add_option("--mode", mode, "override the mode given in the file");
  app.add_option("--arithmetic", arithmetic, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--tol", tol, "psd and rank tolerance for float arithmetic")->check(CLI::PositiveNumber);
  app.add_flag("--verify,!--no-verify", verify, "re-sum the moments of the returned measure (default on)");
  app.add_flag("--timing", timing, "add wall-clock time to the report");

  auto* sample = app.add_subcommand("sample", "write a problem file from a random rational measure");
  std::string sample_mode = "thmp", sample_out;
  Index atoms = 3, k = 3;
  std::uint64_t seed = 1;
  double lo = -2, hi = 2;
  sample->add_option("--mode", sample_mode, "problem mode")->required();
  sample->add_option("--atoms", atoms, "number of atoms")->check(CLI::PositiveNumber);
  sample->add_option("--k", k, "half degree")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "random seed");
  sample->add_option("--lo", lo, "smallest atom");
  sample->add_option("--hi", hi, "largest atom");
  sample->add_option("--output,-o", sample_out, "problem file (default: stdout)");

  auto* scan = app.add_subcommand("scan", "eigenvalue scan of the missing moments of a gap problem");
  std::string scan_in, scan_out;
  double step = 1e-3;
  scan->add_option("input", scan_in, "problem file (gap mode)")->required();
  scan->add_option("--step", step, "grid resolution")->check(CLI::PositiveNumber);
  scan->add_option("--output,-o", scan_out, "report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*sample) {
      const AtomicMeasure m = random_measure(atoms, lo, hi, seed);
      return emit(io::sample_problem(sample_mode, m, k), sample_out);
    }
    if (*scan) {
      const io::Problem p = io::read_problem(scan_in);
      if (p.kind != io::Mode::Gap) throw io::InputError("scan: needs a gap mode");
      std::vector<std::optional<Surd>> entries;
      for (const auto& v : p.moments) entries.push_back(v ? std::optional<Surd>(Surd(*v)) : std::nullopt);
      const ScanReport r = scan_gap(GappedSequence<Surd>::from_entries(p.pattern, entries), step);
      io::Json j;
      j["mode"] = p.mode;
      j["feasible"] = r.feasible();
      j["grid_step"] = r.grid_step;
      j["box"] = r.box;
      j["slack"] = r.slack;
      j["best_point"] = r.best_point;
      j["best_min_eigenvalue"] = r.best_min_eigenvalue;
      j["brackets"] = io::Json::array();
      for (const auto& [a, b] : r.brackets) j["brackets"].push_back({a, b});
      j["feasible_points"] = r.feasible_points.size();
      return emit(j, scan_out) == 0 ? (r.feasible() ? 0 : 1) : 2;
    }

    if (input.empty()) {
      std::cerr << "momentgaps: no input file\n" << app.help();
      return 2;
    }
    io::Problem p = io::read_problem(input);
    if (!mode.empty() && mode != p.mode) {
      // re-read with the overriding mode so the gap layout is validated against it
      std::ifstream in(input);
      io::Json j = io::Json::parse(in);
      j["mode"] = mode;
      p = io::parse_problem(j);
    }
    if (arithmetic == "exact") p.arithmetic = Arithmetic::Exact;
    if (arithmetic == "float") p.arithmetic = Arithmetic::Float;
    if (tol > 0) p.tol = Tolerance{tol, tol};
    const io::RunResult res = io::run(p, {verify, timing});
    if (res.report.contains("error")) std::cerr << "momentgaps: " << res.report["error"]["message"].get<std::string>() << "\n";
    if (emit(res.report, output) != 0) return 2;
    return res.exit_code;
  } catch (const Error& e) {
    std::cerr << "momentgaps: " << e.what() << "\n";
    emit(io::Json{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}}, output);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "momentgaps: " << e.what() << "\n";
    return 2;
  }
}
