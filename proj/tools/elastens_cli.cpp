// elastens: strong ellipticity checks for fourth-order elasticity tensors.
//
// Exit codes: 0 affirmative, 1 negative, 2 undecided/boundary, 3 solver
// error, 4 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "elastens/elastens.h"

using nlohmann::json;

namespace {

enum Exit { kAffirmative = 0, kNegative = 1, kUndecided = 2, kSolverError = 3, kInputError = 4 };

struct Config {
  std::string input;
  std::string format = "text";
  std::string output;
  std::string certificate;
  std::string emit_dense;
  std::string mode = "x";
  double epsilon = -1.0;
  double tol = 1e-10;
  int max_iter = 10000;
  int pocs_max_iter = 50000;
  uint64_t seed = 42;
  int samples = 1000;
  int grid = 0;
  bool no_enumerate = false;
  bool symmetrize = false;
  double z_tol = 0.0;
};

struct TensorDeleter {
  void operator()(elt_tensor* t) const { elt_tensor_free(t); }
};
using TensorPtr = std::unique_ptr<elt_tensor, TensorDeleter>;

bool is_input_error(elt_status s) {
  switch (s) {
    case ELT_ERR_DIMENSION_TOO_SMALL:
    case ELT_ERR_DIMENSION_MISMATCH:
    case ELT_ERR_SYMMETRY_VIOLATION:
    case ELT_ERR_NON_FINITE:
    case ELT_ERR_PARSE:
    case ELT_ERR_INVALID_ARGUMENT:
      return true;
    default:
      return false;
  }
}

int fail(elt_status s) {
  std::cerr << "error: " << elt_status_name(s) << ": " << elt_last_error() << "\n";
  return is_input_error(s) ? kInputError : kSolverError;
}

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

std::string vec(const json& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i].get<double>());
  return s + ")";
}

std::string pair_line(const json& p) {
  std::string s = "lambda = " + num(p["lambda"].get<double>(), 8) + "  x = " + vec(p["x"]) +
                  "  y = " + vec(p["y"]) + "  residual = " + num(p["residual"].get<double>(), 3);
  if (p["on_manifold"].get<bool>()) s += "  [continuum]";
  return s;
}

std::string text_info(const json& r) {
  std::ostringstream os;
  os << "n = " << r["n"] << "\n"
     << "symmetry: a_ijkl = a_jikl = a_ijlk holds\n"
     << "diagonal entries a_iikk: [" << num(r["diagonal"]["min"]) << ", "
     << num(r["diagonal"]["max"]) << "]\n"
     << "off-diagonal entries: [" << num(r["off_diagonal"]["min"]) << ", "
     << num(r["off_diagonal"]["max"]) << "]\n"
     << "Z-pattern: " << (r["z_pattern"]["is_z"].get<bool>() ? "yes" : "no");
  if (!r["z_pattern"]["is_z"].get<bool>()) {
    os << " (" << r["z_pattern"]["violation_count"] << " positive off-diagonal entries)";
  }
  os << "\nunfolding eigenvalues: [" << num(r["unfolding"]["min_eigenvalue"]) << ", "
     << num(r["unfolding"]["max_eigenvalue"]) << "]"
     << (r["unfolding"]["psd"].get<bool>() ? " (PSD)" : " (not PSD)") << "\n";
  return os.str();
}

std::string text_meig(const json& r) {
  std::ostringstream os;
  os << "power iteration max: " << pair_line(r["power_max"]) << "\n"
     << "power iteration min: " << pair_line(r["power_min"]) << "\n";
  if (!r["spectrum"].is_null()) {
    os << "M-eigenpairs (" << r["spectrum"]["pairs"].size() << "):\n";
    for (const auto& p : r["spectrum"]["pairs"]) os << "  " << pair_line(p) << "\n";
  }
  for (const auto& n : r["notes"]) os << "note: " << n.get<std::string>() << "\n";
  if (!r["spectrum"].is_null())
    for (const auto& n : r["spectrum"]["notes"]) os << "note: " << n.get<std::string>() << "\n";
  const std::string v = r["verdict"];
  os << "min M-eigenvalue " << num(r["min_lambda"].get<double>(), 8) << ": ";
  if (v == "SE_HOLDS") {
    os << "all M-eigenvalues positive => strong ellipticity holds\n";
  } else if (v == "SE_FAILS") {
    os << "a negative M-eigenvalue => strong ellipticity fails\n";
  } else {
    os << "zero within tolerance => undecided (boundary)\n";
  }
  os << "verdict: " << v << "\n";
  return os.str();
}

std::string text_check_se(const json& r) {
  std::ostringstream os;
  const auto& p = r["pocs"];
  os << "POCS (epsilon = " << num(p["epsilon"].get<double>()) << "): " << p["status"].get<std::string>()
     << " after " << p["iterations"] << " iterations, residual " << num(p["residual"].get<double>(), 3)
     << (p["stalled"].get<bool>() ? " (stalled)" : "") << "\n";
  if (!r["certificate"].is_null()) {
    os << "certificate: " << r["certificate"]["terms"].size() << " terms, reconstruction error "
       << num(r["certificate"]["reconstruction_error"].get<double>(), 3) << "\n";
  }
  if (!r["fallback"].is_null()) {
    os << "fallback (" << r["fallback"]["source"].get<std::string>()
       << "): " << pair_line(r["fallback"]["min_pair"]) << "\n";
  }
  os << "verdict: " << r["verdict"].get<std::string>() << "\n"
     << r["summary"].get<std::string>() << "\n";
  return os.str();
}

std::string text_classify(const json& r) {
  std::ostringstream os;
  os << "Z-pattern: " << (r["z_pattern"]["is_z"].get<bool>() ? "yes" : "no") << "\n"
     << "alpha = max a_iikk = " << num(r["alpha"].get<double>(), 8) << "\n";
  if (!r["rho_shift"].is_null()) {
    os << "rho_M(alpha E - A) = " << num(r["rho_shift"].get<double>(), 8) << "\n"
       << "alpha - rho = " << num(r["margins"]["alpha_minus_rho"].get<double>(), 8)
       << " (tolerance " << num(r["margins"]["margin_tol"].get<double>(), 3) << ")\n";
  }
  os << "verdict: " << r["verdict"].get<std::string>() << "\n";
  for (int id = 1; id <= 13; ++id) {
    const std::string key = "C" + std::to_string(id);
    if (!r["conditions"].contains(key)) continue;
    const auto& c = r["conditions"][key];
    os << "  " << key << ": " << c["status"].get<std::string>();
    if (c["sampled"].get<bool>() && c["status"] == "pass") os << " (sampled)";
    if (!c["note"].get<std::string>().empty()) os << "  [" << c["note"].get<std::string>() << "]";
    if (c["status"] == "fail" && !c["witness"].get<std::string>().empty())
      os << "  witness: " << c["witness"].get<std::string>();
    os << "\n";
  }
  if (!r["consistent"].get<bool>()) {
    for (const auto& d : r["discrepancies"]) os << "DISCREPANCY: " << d.get<std::string>() << "\n";
  }
  return os.str();
}

std::string text_unfold(const json& r) {
  std::ostringstream os;
  for (const auto& row : r["matrix"]) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << num(row[j].get<double>(), 12);
    os << "\n";
  }
  return os.str();
}

int emit(const Config& cfg, const json& report, const std::string& raw,
         std::string (*to_text)(const json&)) {
  const std::string body = cfg.format == "json" ? raw : to_text(report);
  if (cfg.output.empty()) {
    std::cout << body;
    std::cout.flush();
    return std::cout ? 0 : kSolverError;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  out << body;
  if (!out) {
    std::cerr << "error: cannot write " << cfg.output << "\n";
    return kInputError;
  }
  return 0;
}

int run(const std::string& command, const Config& cfg) {
  elt_tensor* raw_tensor = nullptr;
  elt_status s = elt_tensor_load_file(cfg.input.c_str(), cfg.symmetrize ? 1 : 0, &raw_tensor);
  if (s != ELT_OK) return fail(s);
  TensorPtr tensor(raw_tensor);

  if (!cfg.emit_dense.empty()) {
    char* dense = nullptr;
    s = elt_tensor_to_json(tensor.get(), &dense);
    if (s != ELT_OK) return fail(s);
    std::ofstream out(cfg.emit_dense, std::ios::binary);
    out << dense;
    elt_string_free(dense);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.emit_dense << "\n";
      return kInputError;
    }
  }

  elt_options opts;
  elt_options_init(&opts);
  opts.epsilon = cfg.epsilon;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  opts.pocs_max_iter = cfg.pocs_max_iter;
  opts.seed = cfg.seed;
  opts.n_samples = cfg.samples;
  opts.grid_density = cfg.grid;
  opts.use_enumeration = cfg.no_enumerate ? 0 : 1;
  opts.z_tol = cfg.z_tol;

  char* text = nullptr;
  std::string (*to_text)(const json&) = nullptr;
  if (command == "info") {
    s = elt_report_info(tensor.get(), &opts, &text);
    to_text = text_info;
  } else if (command == "meig") {
    s = elt_report_meig(tensor.get(), &opts, &text);
    to_text = text_meig;
  } else if (command == "check-se") {
    s = elt_report_check_se(tensor.get(), &opts, &text);
    to_text = text_check_se;
  } else if (command == "classify") {
    s = elt_report_classify(tensor.get(), &opts, &text);
    to_text = text_classify;
  } else {
    s = elt_report_unfold(tensor.get(), cfg.mode == "y" ? ELT_UNFOLD_Y : ELT_UNFOLD_X, &text);
    to_text = text_unfold;
  }
  if (s != ELT_OK) return fail(s);
  const std::string raw(text);
  elt_string_free(text);
  const json report = json::parse(raw);

  if (const int e = emit(cfg, report, raw, to_text)) return e;

  if (command == "check-se" && !cfg.certificate.empty() && !report["certificate"].is_null()) {
    std::ofstream out(cfg.certificate, std::ios::binary);
    out << report["certificate"].dump(2) << "\n";
    if (!out) {
      std::cerr << "error: cannot write " << cfg.certificate << "\n";
      return kInputError;
    }
  }

  if (!report.contains("verdict")) return kAffirmative;
  const std::string v = report["verdict"];
  if (v == "SE_HOLDS" || v == "CERTIFIED_M_PD" || v == "CERTIFIED_M_PSD" || v == "NONSINGULAR_M")
    return kAffirmative;
  if (v == "SE_FAILS" || v == "NOT_M" || v == "NOT_Z") return kNegative;
  return kUndecided;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong ellipticity checks for fourth-order elasticity tensors"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-i,--input", cfg.input, "tensor JSON file")->required();
    sub->add_option("--format", cfg.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("-o,--output", cfg.output, "write the report here instead of stdout");
    sub->add_option("--emit-dense", cfg.emit_dense, "also write the parsed tensor as a dense file");
    sub->add_flag("--symmetrize", cfg.symmetrize, "average entries over their symmetry orbits");
    sub->add_option("--tol", cfg.tol, "power iteration tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", cfg.max_iter, "power iteration limit per start")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--grid", cfg.grid, "enumeration directions per sphere (0 = default)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--no-enumerate", cfg.no_enumerate, "skip spectrum enumeration");
    sub->add_option("--z-tol", cfg.z_tol, "off-diagonal entries up to this count as non-positive")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--epsilon", cfg.epsilon, "check-se: certify A - eps E (default 1e-6 * max a_iikk)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--pocs-max-iter", cfg.pocs_max_iter, "check-se: alternating projection limit")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--certificate", cfg.certificate, "check-se: write the certificate JSON here");
    sub->add_option("--samples", cfg.samples, "classify: samples per sampled condition")
        ->check(CLI::PositiveNumber);
    sub->add_option("--mode", cfg.mode, "unfold: x or y")->check(CLI::IsMember({"x", "y"}));
  };

  for (const auto& [name, help] : {std::pair{"info", "summary of the tensor and its unfolding"},
                                   std::pair{"meig", "M-eigenvalues by power iteration and enumeration"},
                                   std::pair{"check-se", "POCS certificate with M-eigenvalue fallback"},
                                   std::pair{"classify", "Z / M / nonsingular M ladder and C1-C13"},
                                   std::pair{"unfold", "dump the n^2 x n^2 unfolding"}}) {
    add_common(app.add_subcommand(name, help));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
}
