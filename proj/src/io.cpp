#include "pinchkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pinchkit/classifier.hpp"
#include "pinchkit/errors.hpp"
#include "pinchkit/rational.hpp"
#include "pinchkit/rng.hpp"

namespace pinchkit::io {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
  throw SchemaError(field + ": " + what);
}

int require_int(const json& doc, const char* key) {
  if (!doc.contains(key)) bad_field(key, "missing");
  const json& v = doc.at(key);
  if (!v.is_number_integer()) bad_field(key, "expected an integer");
  return v.get<int>();
}

// numeric field that may carry an exact "p/q" string
Rat parse_exact_number(const json& v, const std::string& field) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) return Rat(v.get<double>());
  bad_field(field, "expected a number or \"p/q\" string");
}

double parse_float_number(const json& v, const std::string& field) {
  if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
  if (v.is_number()) return v.get<double>();
  bad_field(field, "expected a number or \"p/q\" string");
}

std::string op_entry_name(int a, int i, int j) {
  std::ostringstream os;
  os << "shape_operators[" << a << "][" << i << "][" << j << "]";
  return os.str();
}

// one shape operator, either nested rows or a flat row-major list
void read_operator(const json& mat, int a, int n, bool exact, Eigen::MatrixXd& out,
                   std::vector<Rat>* out_exact) {
  const std::string field = "shape_operators[" + std::to_string(a) + "]";
  if (!mat.is_array()) bad_field(field, "expected an array");

  auto store = [&](int i, int j, const json& cell) {
    const std::string name = op_entry_name(a, i, j);
    if (exact) {
      const Rat r = parse_exact_number(cell, name);
      (*out_exact)[static_cast<std::size_t>(i) * n + j] = r;
      out(i, j) = to_double(r);
    } else {
      out(i, j) = parse_float_number(cell, name);
    }
  };

  if (static_cast<int>(mat.size()) == n * n && (mat.empty() || !mat[0].is_array())) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) store(i, j, mat[static_cast<std::size_t>(i) * n + j]);
    return;
  }
  if (static_cast<int>(mat.size()) != n)
    throw DimensionError(field + ": expected " + std::to_string(n) + " rows or " +
                         std::to_string(n * n) + " flat entries, got " +
                         std::to_string(mat.size()));
  for (int i = 0; i < n; ++i) {
    const json& row = mat[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw DimensionError(field + "[" + std::to_string(i) + "]: expected " +
                           std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) store(i, j, row[static_cast<std::size_t>(j)]);
  }
}

}  // namespace

PointData point_data_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("document is not a JSON object");
  const int n = require_int(doc, "n");
  const int m = require_int(doc, "m");
  if (n < 1) bad_field("n", "must be positive");
  if (m < 1) bad_field("m", "must be positive");

  bool exact = false;
  if (doc.contains("exact")) {
    if (!doc.at("exact").is_boolean()) bad_field("exact", "expected a boolean");
    exact = doc.at("exact").get<bool>();
  }

  if (!doc.contains("c")) bad_field("c", "missing");
  if (!doc.contains("shape_operators")) bad_field("shape_operators", "missing");
  const json& ops = doc.at("shape_operators");
  if (!ops.is_array()) bad_field("shape_operators", "expected an array");
  if (static_cast<int>(ops.size()) != m)
    throw DimensionError("shape_operators: expected " + std::to_string(m) +
                         " operators, got " + std::to_string(ops.size()));

  std::vector<Eigen::MatrixXd> mats(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(n, n));
  std::vector<std::vector<Rat>> exact_mats;
  if (exact) exact_mats.assign(static_cast<std::size_t>(m),
                               std::vector<Rat>(static_cast<std::size_t>(n) * n, Rat(0)));
  for (int a = 0; a < m; ++a)
    read_operator(ops[static_cast<std::size_t>(a)], a, n, exact, mats[static_cast<std::size_t>(a)],
                  exact ? &exact_mats[static_cast<std::size_t>(a)] : nullptr);

  std::string label;
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) bad_field("label", "expected a string");
    label = doc.at("label").get<std::string>();
  }

  PointData p;
  if (exact) {
    const Rat c = parse_exact_number(doc.at("c"), "c");
    p = make_exact_point_data(n, m, c, exact_mats);
  } else {
    const double c = parse_float_number(doc.at("c"), "c");
    p = make_point_data(n, m, c, mats);
  }
  p.label = label;
  return p;
}

nlohmann::json point_data_to_json(const PointData& p) {
  json doc;
  doc["n"] = p.n;
  doc["m"] = p.m;
  if (p.exact) {
    doc["exact"] = true;
    doc["c"] = format_rational(p.c_exact);
  } else {
    doc["c"] = p.c;
  }
  json ops = json::array();
  for (int a = 0; a < p.m; ++a) {
    json mat = json::array();
    for (int i = 0; i < p.n; ++i) {
      json row = json::array();
      for (int j = 0; j < p.n; ++j) {
        if (p.exact)
          row.push_back(format_rational(p.exact_entry(a, i, j)));
        else
          row.push_back(p.shape_ops[static_cast<std::size_t>(a)](i, j));
      }
      mat.push_back(std::move(row));
    }
    ops.push_back(std::move(mat));
  }
  doc["shape_operators"] = std::move(ops);
  if (!p.label.empty()) doc["label"] = p.label;
  return doc;
}

PointData load_point_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  // model output wraps the point next to its spec; accept it directly
  if (doc.is_object() && doc.contains("point")) return point_data_from_json(doc["point"]);
  return point_data_from_json(doc);
}

void save_point_data(const PointData& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError(path + ": cannot open file for writing");
  out << point_data_to_json(p).dump(2) << "\n";
}

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

// ==== batch classification ====

namespace {

struct BatchRow {
  std::string path;
  std::string label;
  std::string verdict;
  std::string detail;
  bool failed = false;
};

std::uint64_t per_point_seed(std::uint64_t master, int index) {
  return RngStream(master, 0xBA7C4ull, static_cast<std::uint64_t>(index)).next_u64();
}

}  // namespace

BatchResult batch_classify(const std::vector<std::string>& paths, int k, const RunConfig& cfg) {
  const int count = static_cast<int>(paths.size());
  std::vector<BatchRow> rows(static_cast<std::size_t>(count));

  parallel_for_ordered(count, cfg.workers, [&](int i) {
    BatchRow& row = rows[static_cast<std::size_t>(i)];
    row.path = paths[static_cast<std::size_t>(i)];
    try {
      const PointData p = load_point_data(row.path);
      row.label = p.label;
      classify::ClassifyConfig ccfg;
      ccfg.optimizer.seed = per_point_seed(cfg.seed, i);
      ccfg.detect.seed = ccfg.optimizer.seed;
      const classify::PointVerdict v = classify::classify_point(p, k, ccfg);
      row.verdict = classify::to_string(v.verdict);
      row.detail = "margin=" + format_double(v.pinching_margin);
      if (v.structure)
        row.detail += " residual=" + format_double(v.structure->residual);
    } catch (const std::exception& e) {
      row.verdict = "ERROR";
      row.detail = e.what();
      row.failed = true;
    }
  });

  std::ostringstream os;
  bool any_failed = false;
  if (cfg.format == "markdown") {
    os << "| # | file | label | verdict | detail |\n";
    os << "|---|------|-------|---------|--------|\n";
    for (int i = 0; i < count; ++i) {
      const BatchRow& r = rows[static_cast<std::size_t>(i)];
      os << "| " << i << " | " << r.path << " | " << r.label << " | " << r.verdict << " | "
         << r.detail << " |\n";
      any_failed = any_failed || r.failed;
    }
  } else {
    os << "index,file,label,verdict,detail\n";
    for (int i = 0; i < count; ++i) {
      const BatchRow& r = rows[static_cast<std::size_t>(i)];
      os << i << "," << r.path << "," << r.label << "," << r.verdict << ",\"" << r.detail
         << "\"\n";
      any_failed = any_failed || r.failed;
    }
  }
  return BatchResult{os.str(), any_failed ? 1 : 0};
}

}  // namespace pinchkit::io
