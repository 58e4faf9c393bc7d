#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pinchkit/bounds.hpp"
#include "pinchkit/classifier.hpp"
#include "pinchkit/curvature.hpp"
#include "pinchkit/errors.hpp"
#include "pinchkit/io.hpp"
#include "pinchkit/models.hpp"
#include "pinchkit/theta.hpp"
#include "pinchkit/verification.hpp"

namespace {

using nlohmann::json;
using namespace pinchkit;

std::uint64_t resolve_seed(bool flag_set, std::uint64_t flag_value) {
  if (flag_set) return flag_value;
  if (const char* env = std::getenv("PINCHKIT_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    throw DomainError(std::string("PINCHKIT_SEED is not an integer: ") + env);
  }
  return 42;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw SchemaError(out_path + ": cannot open file for writing");
  f << text;
  if (!text.empty() && text.back() != '\n') f << "\n";
}

std::vector<std::string> split_colon(const std::string& text) {
  std::vector<std::string> parts;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, ':')) parts.push_back(piece);
  return parts;
}

json matrix_to_json(const Eigen::MatrixXd& mat) {
  json rows = json::array();
  for (int i = 0; i < mat.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ==== bounds tables ====

std::string run_bounds(int n, const std::string& k_range, const std::string& h_grid,
                       const std::string& c_text, const std::string& format) {
  const auto range_parts = split_colon(k_range);
  if (range_parts.size() != 2) throw DomainError("--k-range expects lo:hi");
  const int k_lo = std::stoi(range_parts[0]);
  const int k_hi = std::stoi(range_parts[1]);
  if (k_lo < 2 || k_hi < k_lo || 2 * k_hi > n)
    throw DomainError("--k-range must satisfy 2 <= lo <= hi <= n/2");

  const auto grid_parts = split_colon(h_grid);
  if (grid_parts.size() != 3) throw DomainError("--h-grid expects lo:hi:count");
  const Rat h_lo = parse_rational(grid_parts[0]);
  const Rat h_hi = parse_rational(grid_parts[1]);
  const int count = std::stoi(grid_parts[2]);
  if (count < 1 || h_lo < 0 || h_hi < h_lo) throw DomainError("--h-grid must be 0 <= lo <= hi, count >= 1");

  const Rat c = parse_rational(c_text);
  // the b comparison lives on the unit sphere; only there is the
  // trichotomy decided exactly
  const bool exact_mode = (c == 1);
  const double c_f = to_double(c);

  struct RowText {
    std::vector<std::string> cells;
  };
  const std::vector<std::string> header = {"n",       "k",          "H",       "alpha",
                                           "b",       "xu_gu",      "gamma_k", "comparison",
                                           "difference", "decided"};
  std::vector<RowText> rows;
  for (int k = k_lo; k <= k_hi; ++k)
    for (int j = 0; j < count; ++j) {
      const Rat h = (count == 1) ? h_lo : h_lo + (h_hi - h_lo) * Rat(j, count - 1);
      const double h_f = to_double(h);
      RowText row;
      row.cells = {std::to_string(n), std::to_string(k), io::format_double(h_f)};
      if (exact_mode) {
        const auto rep = bounds::compare_alpha_b_exact(n, k, h);
        row.cells.push_back(io::format_double(rep.alpha));
        row.cells.push_back(io::format_double(rep.b));
        row.cells.push_back(io::format_double(rep.xu_gu));
        row.cells.push_back(std::to_string(rep.gamma_k));
        row.cells.push_back(bounds::to_string(rep.comparison));
        row.cells.push_back(io::format_double(rep.difference));
        row.cells.push_back("exact");
      } else {
        row.cells.push_back(io::format_double(bounds::alpha(n, k, h_f, c_f)));
        std::string cmp_text, diff_text;
        double b_value = bounds::b_vlachos(n, k, h_f);
        try {
          const auto rep = bounds::compare_alpha_b(n, k, h_f);
          cmp_text = bounds::to_string(rep.comparison);
          diff_text = io::format_double(rep.difference);
        } catch (const AmbiguousComparison&) {
          cmp_text = "AMBIGUOUS";
          diff_text = "0";
        }
        row.cells.push_back(io::format_double(b_value));
        row.cells.push_back(io::format_double(bounds::xu_gu_bound(n, h_f, c_f)));
        row.cells.push_back(std::to_string(bounds::gamma_k(n, k)));
        row.cells.push_back(cmp_text);
        row.cells.push_back(diff_text);
        row.cells.push_back("float_unit_sphere");
      }
      rows.push_back(std::move(row));
    }

  std::ostringstream os;
  if (format == "markdown") {
    os << "|";
    for (const auto& h : header) os << " " << h << " |";
    os << "\n|";
    for (std::size_t i = 0; i < header.size(); ++i) os << "---|";
    os << "\n";
    for (const auto& row : rows) {
      os << "|";
      for (const auto& cell : row.cells) os << " " << cell << " |";
      os << "\n";
    }
  } else {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.cells.size(); ++i) os << (i ? "," : "") << row.cells[i];
      os << "\n";
    }
  }
  return os.str();
}

// ==== analyze ====

std::string run_analyze(const std::string& path) {
  const PointData p = io::load_point_data(path);
  const auto summary = curvature::summarize(p);
  json doc;
  doc["n"] = p.n;
  doc["m"] = p.m;
  doc["c"] = p.c;
  if (!p.label.empty()) doc["label"] = p.label;
  doc["mean_vector"] = summary.mean_vector;
  doc["H"] = summary.H;
  doc["S"] = summary.S;
  doc["rho"] = summary.rho;
  doc["ric_min"] = summary.ric_min;
  json dir = json::array();
  for (int i = 0; i < p.n; ++i) dir.push_back(summary.ric_min_direction(i));
  doc["ric_min_direction"] = std::move(dir);
  doc["ricci"] = matrix_to_json(summary.ric);
  return doc.dump(2);
}

// ==== classify ====

json structure_to_json(const classify::BlockStructure& s) {
  json out;
  out["k"] = s.k;
  out["lambdas"] = s.lambdas;
  out["mus"] = s.mus;
  out["residual"] = s.residual;
  out["degenerate"] = s.degenerate;
  out["basis"] = matrix_to_json(s.basis);
  return out;
}

std::string run_classify(const std::string& path, int k, std::uint64_t seed) {
  const PointData p = io::load_point_data(path);
  classify::ClassifyConfig cfg;
  cfg.optimizer.seed = seed;
  cfg.detect.seed = seed;
  const auto verdict = classify::classify_point(p, k, cfg);
  json doc;
  doc["file"] = path;
  if (!p.label.empty()) doc["label"] = p.label;
  doc["k"] = k;
  doc["verdict"] = classify::to_string(verdict.verdict);
  doc["pinching_margin"] = verdict.pinching_margin;
  doc["margin_tolerance"] = verdict.tol;
  if (verdict.structure) {
    doc["structure"] = structure_to_json(*verdict.structure);
    doc["einstein_residual"] = verdict.einstein_residual;
  }
  return doc.dump(2);
}

// ==== optimize-theta / verdict ====

json theta_result_to_json(const theta::ThetaResult& res, bool with_basis) {
  json doc;
  doc["q"] = res.split.q;
  doc["value"] = res.value;
  doc["threshold"] = res.threshold;
  doc["verdict"] = theta::to_string(res.verdict);
  doc["global_certified"] = res.global_certified;
  doc["equality_tolerance"] = res.equality_tol;
  doc["starts_used"] = res.starts_used;
  doc["iterations"] = res.iterations;
  if (with_basis) doc["subspace_basis"] = matrix_to_json(res.split.basis.leftCols(res.split.q));
  return doc;
}

std::string run_optimize(const std::string& path, int q, const theta::OptimizerConfig& cfg,
                         bool verdict_only) {
  const PointData p = io::load_point_data(path);
  const auto res = verdict_only ? theta::homology_verdict(p, q, cfg)
                                : theta::maximize_theta(p, q, cfg);
  return theta_result_to_json(res, !verdict_only).dump(2);
}

// ==== model ====

json model_spec_to_json(const models::ModelSpec& spec) {
  json doc;
  doc["n"] = spec.n;
  doc["k"] = spec.k;
  doc["m"] = spec.m;
  doc["r"] = spec.r;
  doc["c"] = spec.c;
  doc["a"] = spec.a;
  doc["b"] = spec.b;
  doc["H_u"] = spec.H_u;
  doc["H_g"] = spec.H_g;
  doc["H"] = spec.H;
  doc["lambda1"] = spec.lambda1;
  doc["mu1"] = spec.mu1;
  doc["rho1"] = spec.rho1;
  doc["rho2"] = spec.rho2;
  doc["ric_value"] = spec.ric_value;
  if (spec.exact) {
    json ex;
    ex["r_sq"] = format_rational(spec.r2_q);
    ex["c"] = format_rational(spec.c_q);
    ex["a_sq"] = format_rational(spec.a2_q);
    ex["b_sq"] = format_rational(spec.b2_q);
    ex["ab"] = format_rational(spec.ab_q);
    ex["H_u_sq"] = format_rational(spec.hu2_q);
    ex["H_g_sq"] = format_rational(spec.hg2_q);
    ex["H_sq"] = format_rational(spec.h2_q);
    ex["ric_value"] = format_rational(spec.ric_q);
    ex["rho1_sq"] = format_rational(spec.rho1_sq_q);
    ex["rho2_sq"] = format_rational(spec.rho2_sq_q);
    doc["exact"] = std::move(ex);
  }
  return doc;
}

std::string run_model(const std::string& kind, int n, int k, const std::string& r_text,
                      const std::string& c_text, int m, const std::string& h_text,
                      bool exact_mode) {
  json doc;
  if (kind == "torus" || kind == "clifford") {
    int kk = k;
    if (kind == "clifford") {
      if (n % 2 != 0) throw DomainError("model clifford: --n must be even");
      kk = n / 2;
    }
    const Rat r = parse_rational(r_text);
    const Rat c = parse_rational(c_text);
    std::pair<PointData, models::ModelSpec> made =
        exact_mode
            ? (kind == "clifford" ? models::clifford_minimal_exact(kk, r * r, c, m)
                                  : models::einstein_torus_exact(n, kk, r * r, c, m))
            : (kind == "clifford"
                   ? models::clifford_minimal(kk, to_double(r), to_double(c), m)
                   : models::einstein_torus(n, kk, to_double(r), to_double(c), m));
    doc["point"] = io::point_data_to_json(made.first);
    doc["spec"] = model_spec_to_json(made.second);
  } else if (kind == "umbilical") {
    const double c = to_double(parse_rational(c_text));
    const double H = to_double(parse_rational(h_text));
    const PointData p = models::umbilical_sphere(n, m, c, H);
    doc["point"] = io::point_data_to_json(p);
    json spec;
    spec["n"] = n;
    spec["m"] = m;
    spec["c"] = c;
    spec["H"] = H;
    doc["spec"] = std::move(spec);
  } else {
    throw DomainError("model kind must be torus, clifford, or umbilical");
  }
  return doc.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwise submanifold curvature toolkit"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "write output to this path instead of stdout");

  std::string output;
  int exit_code = 0;

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "pinching bound table over a (k, H) grid");
  int b_n = 0;
  std::string b_krange, b_hgrid = "0:2:5", b_c = "1", b_format = "csv";
  bounds_cmd->add_option("--n", b_n, "tangent dimension")->required();
  bounds_cmd->add_option("--k-range", b_krange, "lo:hi")->required();
  bounds_cmd->add_option("--h-grid", b_hgrid, "lo:hi:count");
  bounds_cmd->add_option("--c", b_c, "ambient curvature (rational string accepted)");
  bounds_cmd->add_option("--format", b_format)->check(CLI::IsMember({"csv", "markdown"}));
  bounds_cmd->callback([&] { output = run_bounds(b_n, b_krange, b_hgrid, b_c, b_format); });

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "curvature summary of a point data file");
  std::string a_file;
  analyze_cmd->add_option("file", a_file, "point data JSON")->required();
  analyze_cmd->callback([&] { output = run_analyze(a_file); });

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "pointwise pinching classification");
  std::string cl_file;
  int cl_k = 0;
  std::uint64_t cl_seed = 0;
  classify_cmd->add_option("file", cl_file)->required();
  classify_cmd->add_option("--k", cl_k, "pinching index")->required();
  auto* cl_seed_opt = classify_cmd->add_option("--seed", cl_seed);
  classify_cmd->callback(
      [&] { output = run_classify(cl_file, cl_k, resolve_seed(cl_seed_opt->count() > 0, cl_seed)); });

  // optimize-theta / verdict
  auto add_theta_cmd = [&](const char* name, const char* help, bool verdict_only) {
    auto* cmd = app.add_subcommand(name, help);
    auto file = std::make_shared<std::string>();
    auto q = std::make_shared<int>(0);
    auto cfg = std::make_shared<theta::OptimizerConfig>();
    auto seed = std::make_shared<std::uint64_t>(0);
    cmd->add_option("file", *file)->required();
    cmd->add_option("--q", *q, "subspace dimension")->required();
    cmd->add_option("--starts", cfg->starts);
    auto* seed_opt = cmd->add_option("--seed", *seed);
    cmd->add_option("--max-iters", cfg->max_iters);
    cmd->add_option("--tol", cfg->grad_tol);
    cmd->callback([&, file, q, cfg, seed, seed_opt, verdict_only] {
      cfg->seed = resolve_seed(seed_opt->count() > 0, *seed);
      output = run_optimize(*file, *q, *cfg, verdict_only);
    });
  };
  add_theta_cmd("optimize-theta", "maximize the tangent-subspace functional", false);
  add_theta_cmd("verdict", "subspace functional verdict against q(n-q)c", true);

  // model
  auto* model_cmd = app.add_subcommand("model", "construct model-space point data");
  std::string m_kind, m_r = "1", m_c = "0", m_h = "1";
  int m_n = 0, m_k = 2, m_m = 2;
  bool m_exact = false;
  model_cmd->add_option("kind", m_kind, "torus | clifford | umbilical")->required();
  model_cmd->add_option("--n", m_n)->required();
  model_cmd->add_option("--k", m_k);
  model_cmd->add_option("--r", m_r);
  model_cmd->add_option("--c", m_c);
  model_cmd->add_option("--m", m_m);
  model_cmd->add_option("--H", m_h, "umbilical mean curvature");
  model_cmd->add_flag("--exact", m_exact, "exact rational layer");
  model_cmd->callback([&] { output = run_model(m_kind, m_n, m_k, m_r, m_c, m_m, m_h, m_exact); });

  // verify-paper
  auto* verify_cmd = app.add_subcommand("verify-paper", "run the full verification suite");
  std::uint64_t v_seed = 0;
  int v_workers = 1;
  auto* v_seed_opt = verify_cmd->add_option("--seed", v_seed);
  verify_cmd->add_option("--workers", v_workers)->check(CLI::Range(1, 64));
  verify_cmd->callback([&] {
    const auto report =
        verify::verify_paper(resolve_seed(v_seed_opt->count() > 0, v_seed), v_workers);
    output = report.text;
    exit_code = report.all_passed ? 0 : 1;
  });

  // batch-classify
  auto* batch_cmd = app.add_subcommand("batch-classify", "classify many files, ordered rows");
  std::vector<std::string> bt_files;
  int bt_k = 0, bt_workers = 1;
  std::uint64_t bt_seed = 0;
  std::string bt_format = "csv";
  batch_cmd->add_option("files", bt_files, "point data JSON files")->required();
  batch_cmd->add_option("--k", bt_k, "pinching index")->required();
  batch_cmd->add_option("--workers", bt_workers)->check(CLI::Range(1, 64));
  auto* bt_seed_opt = batch_cmd->add_option("--seed", bt_seed);
  batch_cmd->add_option("--format", bt_format)->check(CLI::IsMember({"csv", "markdown"}));
  batch_cmd->callback([&] {
    io::RunConfig cfg;
    cfg.seed = resolve_seed(bt_seed_opt->count() > 0, bt_seed);
    cfg.workers = bt_workers;
    cfg.format = bt_format;
    const auto result = io::batch_classify(bt_files, bt_k, cfg);
    output = result.report;
    exit_code = result.exit_code;
  });

  try {
    app.parse(argc, argv);
    write_output(out_path, output);
    return exit_code;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const SymmetryError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionMismatch& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NotAProjection& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CurvatureMismatch& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  }
}
