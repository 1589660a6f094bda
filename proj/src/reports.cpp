#include "elastens/reports.hpp"

#include <algorithm>
#include <cmath>

#include "elastens/error.hpp"

namespace elastens {

using nlohmann::json;

namespace {

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json index_json(const std::array<int, 4>& q) {
  return json::array({q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1});
}

json z_pattern_json(const ZPattern& z) {
  json out{{"is_z", z.is_z}, {"violation_count", z.violations.size()}};
  json list = json::array();
  // Orbit members repeat the same value; a handful is enough to act on.
  for (std::size_t p = 0; p < z.violations.size() && p < 16; ++p) {
    list.push_back({{"index", index_json(z.violations[p].index)},
                    {"value", z.violations[p].value}});
  }
  out["violations"] = list;
  return out;
}

// Smallest M-eigenvalue from the power method, improved by the enumerator
// when it applies.
struct MinEstimate {
  MEigenpair pair;
  std::string source;
};

MinEstimate smallest_eigenvalue(const ElasticityTensor& a, const ReportOptions& opts,
                                const MSpectrum* spec) {
  MinEstimate m{power_method_min(a, opts.power).pair, "power_method_min"};
  if (spec && spec->min_lambda() < m.pair.lambda) {
    m.pair = spec->pairs.back();
    m.source = "enumerate_spectrum";
  }
  return m;
}

std::string sign_verdict(double lambda, double tol) {
  if (lambda > tol) return "SE_HOLDS";
  if (lambda < -tol) return "SE_FAILS";
  return "UNDECIDED";
}

}  // namespace

json pair_json(const MEigenpair& p) {
  return {{"lambda", p.lambda},
          {"x", vector_json(p.x)},
          {"y", vector_json(p.y)},
          {"residual", p.residual},
          {"on_manifold", p.on_manifold}};
}

json spectrum_json(const MSpectrum& s) {
  json pairs = json::array();
  for (const auto& p : s.pairs) pairs.push_back(pair_json(p));
  return {{"pairs", pairs},
          {"distinct_values", s.distinct_values()},
          {"seeds", s.seeds},
          {"diverged_seeds", s.diverged},
          {"notes", s.notes}};
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json certificate_json(const PsdCertificate& c) {
  json terms = json::array();
  for (const auto& t : c.terms) terms.push_back({{"alpha", t.alpha}, {"U", matrix_json(t.u)}});
  return {{"epsilon", c.epsilon},
          {"terms", terms},
          {"reconstruction_error", c.reconstruction_error}};
}

PsdCertificate certificate_from_json(const json& doc) {
  try {
    PsdCertificate c;
    c.epsilon = doc.at("epsilon").get<double>();
    c.reconstruction_error = doc.value("reconstruction_error", 0.0);
    for (const auto& t : doc.at("terms")) {
      CertificateTerm term;
      term.alpha = t.at("alpha").get<double>();
      const auto& rows = t.at("U");
      const auto n = static_cast<Eigen::Index>(rows.size());
      term.u = Matrix(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n) {
          throw Error(ErrorCode::ParseError, "certificate U is not square");
        }
        for (Eigen::Index k = 0; k < n; ++k) term.u(i, k) = rows[i][k].get<double>();
      }
      c.terms.push_back(std::move(term));
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("certificate: ") + e.what());
  }
}

json condition_json(const ConditionResult& r) {
  json out{{"status", to_string(r.status)},
           {"sampled", r.sampled},
           {"samples_used", r.samples_used},
           {"witness", r.witness},
           {"note", r.note},
           {"boundary", r.boundary}};
  out["value"] = r.value ? json(*r.value) : json(nullptr);
  if (r.witness_vector) out["witness_vector"] = vector_json(*r.witness_vector);
  if (r.witness_pair) out["witness_pair"] = pair_json(*r.witness_pair);
  return out;
}

double eigenvalue_decision_tol(const ElasticityTensor& a) {
  return 1e-8 * std::max(1.0, a.max_abs());
}

double default_epsilon(const ElasticityTensor& a) {
  const int n = a.dim();
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) d = std::max(d, a(i, i, k, k));
  return 1e-6 * d;
}

ClassifyOptions classify_options(const ReportOptions& opts) {
  ClassifyOptions c;
  c.power = opts.power;
  c.enumerate = opts.enumerate;
  c.use_enumeration = opts.use_enumeration;
  c.n_samples = opts.n_samples;
  c.seed = opts.seed;
  c.z_tol = opts.z_tol;
  return c;
}

json info_report(const ElasticityTensor& a, const ReportOptions& opts) {
  const int n = a.dim();
  double dmin = a(0, 0, 0, 0), dmax = dmin;
  double omin = 0.0, omax = 0.0;
  bool have_off = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = a(i, j, k, l);
          if (ElasticityTensor::is_diagonal_index(i, j, k, l)) {
            dmin = std::min(dmin, v);
            dmax = std::max(dmax, v);
          } else if (!have_off) {
            omin = omax = v;
            have_off = true;
          } else {
            omin = std::min(omin, v);
            omax = std::max(omax, v);
          }
        }
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(unfold(a, UnfoldMode::X).matrix,
                                                          Eigen::EigenvaluesOnly)
                        .eigenvalues();
  return {{"command", "info"},
          {"n", n},
          {"symmetric", true},
          {"diagonal", {{"min", dmin}, {"max", dmax}}},
          {"off_diagonal", {{"min", omin}, {"max", omax}}},
          {"max_abs", a.max_abs()},
          {"frobenius_norm", a.frobenius_norm()},
          {"z_pattern", z_pattern_json(z_pattern(a, opts.z_tol))},
          {"unfolding",
           {{"eigenvalues", vector_json(ev)},
            {"min_eigenvalue", ev.minCoeff()},
            {"max_eigenvalue", ev.maxCoeff()},
            {"psd", ev.minCoeff() >= -1e-12 * std::max(1.0, std::abs(ev.maxCoeff()))}}}};
}

json meig_report(const ElasticityTensor& a, const ReportOptions& opts) {
  json out{{"command", "meig"}, {"n", a.dim()}};
  const PowerResult pmax = power_method_max(a, opts.power);
  const PowerResult pmin = power_method_min(a, opts.power);
  out["power_max"] = pair_json(pmax.pair);
  out["power_min"] = pair_json(pmin.pair);
  out["power_shift"] = pmax.shift;
  std::optional<MSpectrum> spec;
  if (opts.use_enumeration && a.dim() <= 3) {
    spec = enumerate_spectrum(a, opts.enumerate);
    out["spectrum"] = spectrum_json(*spec);
  } else {
    out["spectrum"] = nullptr;
  }
  double lmin = pmin.pair.lambda;
  double lmax = pmax.pair.lambda;
  if (spec) {
    lmin = std::min(lmin, spec->min_lambda());
    lmax = std::max(lmax, spec->max_lambda());
  }
  const double tol = eigenvalue_decision_tol(a);
  out["min_lambda"] = lmin;
  out["max_lambda"] = lmax;
  out["decision_tol"] = tol;
  out["verdict"] = sign_verdict(lmin, tol);
  json notes = json::array();
  if (std::abs(lmin) <= tol) notes.push_back("boundary: smallest M-eigenvalue is zero within tolerance");
  if (!spec) notes.push_back("spectrum not enumerated; extremes from power iteration");
  out["notes"] = notes;
  return out;
}

json check_se_report(const ElasticityTensor& a, const ReportOptions& opts) {
  PocsOptions po;
  po.epsilon = opts.epsilon.value_or(default_epsilon(a));
  po.max_iter = opts.pocs_max_iter;
  const PocsOutcome pocs = pocs_verify(a, po);
  json out{{"command", "check-se"}, {"n", a.dim()}};
  out["pocs"] = {{"status", to_string(pocs.status)},
                 {"epsilon", pocs.epsilon},
                 {"iterations", pocs.iterations},
                 {"residual", pocs.residual},
                 {"residual_tol", pocs.residual_tol},
                 {"stalled", pocs.stalled},
                 {"min_unfolding_eigenvalue", pocs.min_unfolding_eigenvalue}};
  out["certificate"] = pocs.certificate ? certificate_json(*pocs.certificate) : json(nullptr);
  if (pocs.status != PocsStatus::Inconclusive) {
    out["verdict"] = to_string(pocs.status);
    out["fallback"] = nullptr;
    out["summary"] = pocs.status == PocsStatus::CertifiedMPd
                         ? "A - eps E has an S-PSD representative with eps > 0: strong ellipticity holds"
                         : "A has an S-PSD representative: A is M-positive semidefinite";
    return out;
  }
  std::optional<MSpectrum> spec;
  if (opts.use_enumeration && a.dim() <= 3) spec = enumerate_spectrum(a, opts.enumerate);
  const MinEstimate m = smallest_eigenvalue(a, opts, spec ? &*spec : nullptr);
  const double tol = eigenvalue_decision_tol(a);
  out["fallback"] = {{"min_pair", pair_json(m.pair)}, {"source", m.source}, {"decision_tol", tol}};
  out["verdict"] = sign_verdict(m.pair.lambda, tol);
  if (m.pair.lambda > tol) {
    out["summary"] = "POCS found no certificate; all M-eigenvalues positive: strong ellipticity holds";
  } else if (m.pair.lambda < -tol) {
    out["summary"] = "negative M-eigenvalue exhibited: strong ellipticity fails";
  } else {
    out["summary"] = "undecided: POCS sufficient condition not met and the smallest M-eigenvalue is zero within tolerance";
  }
  return out;
}

json classify_report(const ElasticityTensor& a, const ReportOptions& opts) {
  const ClassificationReport rep = classify(a, classify_options(opts));
  json out{{"command", "classify"}, {"n", a.dim()}};
  out["verdict"] = to_string(rep.verdict);
  out["alpha"] = rep.alpha;
  out["rho_shift"] = rep.rho_shift ? json(*rep.rho_shift) : json(nullptr);
  out["margins"] = {{"alpha_minus_rho", rep.margin ? json(*rep.margin) : json(nullptr)},
                    {"margin_tol", rep.margin_tol},
                    {"min_eigenvalue",
                     rep.min_eigenvalue ? json(*rep.min_eigenvalue) : json(nullptr)}};
  out["z_pattern"] = z_pattern_json(rep.z_pattern);
  json conds = json::object();
  for (const auto& r : rep.conditions) conds["C" + std::to_string(r.id)] = condition_json(r);
  out["conditions"] = conds;
  out["consistent"] = rep.consistent;
  out["discrepancies"] = rep.discrepancies;
  out["diagnostics"] = {
      {"perron_pair", rep.perron_pair ? pair_json(*rep.perron_pair) : json(nullptr)},
      {"n_samples", opts.n_samples},
      {"seed", opts.seed}};
  return out;
}

json unfold_report(const ElasticityTensor& a, UnfoldMode mode) {
  const Matrix m = unfold(a, mode).matrix;
  return {{"command", "unfold"},
          {"n", a.dim()},
          {"mode", mode == UnfoldMode::X ? "x" : "y"},
          {"rows", m.rows()},
          {"matrix", matrix_json(m)}};
}

}  // namespace elastens
