#include "elastens/tensor_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "elastens/error.hpp"

namespace elastens {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_fail(where, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

int as_index(const json& v, int n, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where, "expected an integer index");
  const auto i = v.get<long long>();
  if (i < 1 || i > n) {
    parse_fail(where, "index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
  return static_cast<int>(i - 1);
}

std::vector<double> read_dense(const json& e, int n) {
  std::vector<double> raw(tensor_size(n));
  auto expect_array = [n](const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != static_cast<std::size_t>(n)) {
      parse_fail(where, "expected an array of length " + std::to_string(n));
    }
  };
  expect_array(e, "entries");
  for (int i = 0; i < n; ++i) {
    const std::string wi = "entries[" + std::to_string(i) + "]";
    expect_array(e[i], wi);
    for (int j = 0; j < n; ++j) {
      const std::string wj = wi + "[" + std::to_string(j) + "]";
      expect_array(e[i][j], wj);
      for (int k = 0; k < n; ++k) {
        const std::string wk = wj + "[" + std::to_string(k) + "]";
        expect_array(e[i][j][k], wk);
        for (int l = 0; l < n; ++l) {
          raw[flat_index(n, i, j, k, l)] =
              as_number(e[i][j][k][l], wk + "[" + std::to_string(l) + "]");
        }
      }
    }
  }
  return raw;
}

std::vector<double> read_sparse(const json& e, int n, bool symmetrize) {
  if (!e.is_array()) parse_fail("entries", "expected an array of [i, j, k, l, value] rows");
  using Key = std::tuple<int, int, int, int>;
  std::map<Key, double> listed;
  for (std::size_t r = 0; r < e.size(); ++r) {
    const std::string where = "entries[" + std::to_string(r) + "]";
    const json& row = e[r];
    if (!row.is_array() || row.size() != 5) parse_fail(where, "expected [i, j, k, l, value]");
    const int i = as_index(row[0], n, where + "[0]");
    const int j = as_index(row[1], n, where + "[1]");
    const int k = as_index(row[2], n, where + "[2]");
    const int l = as_index(row[3], n, where + "[3]");
    const double v = as_number(row[4], where + "[4]");
    if (!listed.emplace(Key{i, j, k, l}, v).second) parse_fail(where, "duplicate index");
  }

  std::vector<double> raw(tensor_size(n), 0.0);
  if (!symmetrize) {
    for (const auto& [key, v] : listed) {
      const auto [i, j, k, l] = key;
      raw[flat_index(n, i, j, k, l)] = v;
    }
    return raw;
  }
  // Orbit representative: (min(i,j), max(i,j), min(k,l), max(k,l)).
  std::map<Key, std::pair<double, int>> orbit;
  for (const auto& [key, v] : listed) {
    const auto [i, j, k, l] = key;
    auto& acc = orbit[Key{std::min(i, j), std::max(i, j), std::min(k, l), std::max(k, l)}];
    acc.first += v;
    acc.second += 1;
  }
  for (const auto& [rep, acc] : orbit) {
    const auto [i, j, k, l] = rep;
    const double v = acc.first / acc.second;
    raw[flat_index(n, i, j, k, l)] = v;
    raw[flat_index(n, j, i, k, l)] = v;
    raw[flat_index(n, i, j, l, k)] = v;
    raw[flat_index(n, j, i, l, k)] = v;
  }
  return raw;
}

}  // namespace

ElasticityTensor tensor_from_json(const json& doc, bool force_symmetrize) {
  if (!doc.is_object()) parse_fail("document", "expected a JSON object");
  if (!doc.contains("n")) parse_fail("n", "missing");
  if (!doc["n"].is_number_integer()) parse_fail("n", "expected an integer");
  const auto n_raw = doc["n"].get<long long>();
  if (n_raw < 2) {
    throw Error(ErrorCode::DimensionTooSmall,
                "tensor dimension must be at least 2, got " + std::to_string(n_raw));
  }
  if (n_raw > 16) parse_fail("n", "dimension " + std::to_string(n_raw) + " is unreasonably large");
  const int n = static_cast<int>(n_raw);

  std::string format = "dense";
  if (doc.contains("format")) {
    if (!doc["format"].is_string()) parse_fail("format", "expected a string");
    format = doc["format"].get<std::string>();
  }
  bool symmetrize = false;
  if (doc.contains("symmetrize")) {
    if (!doc["symmetrize"].is_boolean()) parse_fail("symmetrize", "expected a boolean");
    symmetrize = doc["symmetrize"].get<bool>();
  }
  symmetrize = symmetrize || force_symmetrize;
  if (!doc.contains("entries")) parse_fail("entries", "missing");

  std::vector<double> raw;
  if (format == "dense") {
    raw = read_dense(doc["entries"], n);
  } else if (format == "sparse") {
    raw = read_sparse(doc["entries"], n, symmetrize);
  } else {
    parse_fail("format", "unknown format \"" + format + "\" (expected sparse or dense)");
  }
  return ElasticityTensor::from_entries(n, raw, symmetrize);
}

ElasticityTensor parse_tensor(std::string_view text, bool force_symmetrize) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return tensor_from_json(doc, force_symmetrize);
}

ElasticityTensor read_tensor_file(const std::filesystem::path& path, bool force_symmetrize) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_tensor(buf.str(), force_symmetrize);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) {
      throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    throw;
  }
}

json tensor_to_json(const ElasticityTensor& a) {
  const int n = a.dim();
  json entries = json::array();
  for (int i = 0; i < n; ++i) {
    json ji = json::array();
    for (int j = 0; j < n; ++j) {
      json jj = json::array();
      for (int k = 0; k < n; ++k) {
        json jk = json::array();
        for (int l = 0; l < n; ++l) jk.push_back(a(i, j, k, l));
        jj.push_back(std::move(jk));
      }
      ji.push_back(std::move(jj));
    }
    entries.push_back(std::move(ji));
  }
  return json{{"n", n}, {"format", "dense"}, {"symmetrize", false}, {"entries", std::move(entries)}};
}

}  // namespace elastens
