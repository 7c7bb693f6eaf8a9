#include "egem/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "egem/error.hpp"

namespace egem {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const Json& rows) {
  if (!rows.is_array() || rows.empty()) fail(ErrorCode::Io, "expected a non-empty array of rows");
  const auto r = rows.size();
  const auto c = rows[0].size();
  Matrix m(static_cast<Index>(r), static_cast<Index>(c));
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) fail(ErrorCode::Io, "ragged matrix in JSON");
    for (std::size_t j = 0; j < c; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j].get<double>();
  }
  return m;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <typename T>
void take(const Json& obj, const char* key, T& field) {
  if (obj.contains(key)) field = obj.at(key).get<T>();
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(ErrorCode::InvalidArgument, "invalid configuration: unknown key '" + k + "' in " + where);
  }
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  CsvTable out;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t j = 0; j < fields.size(); ++j) numeric = numeric && parse_number(fields[j], row[j]);
    if (!numeric) {
      if (rows.empty() && out.header.empty()) {
        out.header = fields;
        width = fields.size();
        continue;
      }
      fail(ErrorCode::Io, path + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (!std::all_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); })) {
      fail(ErrorCode::Io, path + ":" + std::to_string(line_no) + ": non-finite value");
    }
    if (width == 0) width = row.size();
    if (row.size() != width) fail(ErrorCode::Io, path + ":" + std::to_string(line_no) + ": expected " +
                                                     std::to_string(width) + " fields");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::Io, "'" + path + "' contains no data rows");
  out.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) out.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return out;
}

void write_csv(const std::string& path, const Matrix& values, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(i, j));
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

std::vector<int> read_labels(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.values.cols() != 1) fail(ErrorCode::Io, "label file must have one column");
  std::vector<int> labels;
  for (Index i = 0; i < t.values.rows(); ++i) {
    const double v = t.values(i, 0);
    if (v < 1.0 || v != std::floor(v)) fail(ErrorCode::Io, "labels must be positive integers");
    labels.push_back(static_cast<int>(v) - 1);
  }
  return labels;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << "label\n";
  for (int l : labels) out << l + 1 << '\n';
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::Io, "'" + path + "': " + e.what());
  }
}

void write_json(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

Json config_to_json(const GemConfig& c) {
  const auto& s = c.shape;
  const auto& g = c.generator;
  return Json{
      {"K", c.K},
      {"eta_mu", c.eta_mu},
      {"starts", c.starts},
      {"max_outer", c.max_outer},
      {"outer_tol", c.outer_tol},
      {"seed", c.seed},
      {"shape",
       {{"rho_T", s.rho_T},
        {"eps_r", s.eps_r},
        {"eps_pd", s.eps_pd},
        {"c_u", s.c_u},
        {"c_Omega", s.c_Omega},
        {"gamma_ebic", s.gamma_ebic},
        {"lambda_grid_multipliers", s.lambda_grid_multipliers},
        {"M_kr", s.M_kr},
        {"tyler_max_iter", s.tyler_max_iter},
        {"tyler_tol", s.tyler_tol},
        {"eta_Omega", s.eta_Omega},
        {"glasso_tol", s.glasso_tol},
        {"glasso_max_iter", s.glasso_max_iter}}},
      {"generator",
       {{"grid_size", g.grid_size},
        {"lambda_sp", g.lambda_sp},
        {"h_min", g.h_min},
        {"eps_u", g.eps_u},
        {"omega_min", g.omega_min},
        {"omega_max", g.omega_max},
        {"density_floor", g.density_floor}}},
      {"init", {{"permutations", c.init.permutations}, {"starts", c.init.starts}, {"max_iter", c.init.max_iter}}},
  };
}

GemConfig config_from_json(const Json& doc, GemConfig c) {
  if (!doc.is_object()) fail(ErrorCode::InvalidArgument, "invalid configuration: expected a JSON object");
  try {
    reject_unknown(doc, {"schema_version", "K", "eta_mu", "starts", "max_outer", "outer_tol", "seed", "threads", "shape",
                         "generator", "init"},
                   "top level");
    take(doc, "K", c.K);
    take(doc, "eta_mu", c.eta_mu);
    take(doc, "starts", c.starts);
    take(doc, "max_outer", c.max_outer);
    take(doc, "outer_tol", c.outer_tol);
    take(doc, "seed", c.seed);
    take(doc, "threads", c.threads);
    if (doc.contains("shape")) {
      const Json& s = doc.at("shape");
      reject_unknown(s, {"rho_T", "eps_r", "eps_pd", "c_u", "c_Omega", "gamma_ebic", "lambda_grid_multipliers", "M_kr",
                         "tyler_max_iter", "tyler_tol", "eta_Omega", "glasso_tol", "glasso_max_iter"},
                     "shape");
      take(s, "rho_T", c.shape.rho_T);
      take(s, "eps_r", c.shape.eps_r);
      take(s, "eps_pd", c.shape.eps_pd);
      take(s, "c_u", c.shape.c_u);
      take(s, "c_Omega", c.shape.c_Omega);
      take(s, "gamma_ebic", c.shape.gamma_ebic);
      take(s, "lambda_grid_multipliers", c.shape.lambda_grid_multipliers);
      take(s, "M_kr", c.shape.M_kr);
      take(s, "tyler_max_iter", c.shape.tyler_max_iter);
      take(s, "tyler_tol", c.shape.tyler_tol);
      take(s, "eta_Omega", c.shape.eta_Omega);
      take(s, "glasso_tol", c.shape.glasso_tol);
      take(s, "glasso_max_iter", c.shape.glasso_max_iter);
    }
    if (doc.contains("generator")) {
      const Json& g = doc.at("generator");
      reject_unknown(g, {"grid_size", "lambda_sp", "h_min", "eps_u", "omega_min", "omega_max", "density_floor"},
                     "generator");
      take(g, "grid_size", c.generator.grid_size);
      take(g, "lambda_sp", c.generator.lambda_sp);
      take(g, "h_min", c.generator.h_min);
      take(g, "eps_u", c.generator.eps_u);
      take(g, "omega_min", c.generator.omega_min);
      take(g, "omega_max", c.generator.omega_max);
      take(g, "density_floor", c.generator.density_floor);
    }
    if (doc.contains("init")) {
      const Json& i = doc.at("init");
      reject_unknown(i, {"permutations", "starts", "max_iter"}, "init");
      take(i, "permutations", c.init.permutations);
      take(i, "starts", c.init.starts);
      take(i, "max_iter", c.init.max_iter);
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("invalid configuration: ") + e.what());
  }
  return c;
}

Json model_to_json(const ModelState& m) {
  const auto& g = m.generator;
  return Json{
      {"pi", std::vector<double>(m.pi.data(), m.pi.data() + m.pi.size())},
      {"centers", matrix_json(m.centers)},
      {"Omega", matrix_json(m.omega.mat())},
      {"Sigma", matrix_json(m.sigma.mat())},
      {"generator",
       {{"bandwidth", g.bandwidth()},
        {"y_grid", g.y_grid()},
        {"u_grid", g.u_grid()},
        {"log_g", g.log_g()},
        {"score", g.score()}}},
  };
}

ModelState model_from_json(const Json& doc) {
  try {
    ModelState m;
    const auto pi = doc.at("pi").get<std::vector<double>>();
    m.pi = Eigen::Map<const Vector>(pi.data(), static_cast<Index>(pi.size()));
    m.centers = matrix_from(doc.at("centers"));
    m.omega = SymMatrix(matrix_from(doc.at("Omega")));
    m.sigma = SymMatrix(matrix_from(doc.at("Sigma")));
    const Json& g = doc.at("generator");
    m.generator = GeneratorEstimate(g.at("y_grid").get<std::vector<double>>(), g.at("u_grid").get<std::vector<double>>(),
                                    g.at("log_g").get<std::vector<double>>(), g.at("score").get<std::vector<double>>(),
                                    g.at("bandwidth").get<double>());
    if (m.pi.size() != m.centers.rows() || m.omega.dim() != m.centers.cols()) {
      fail(ErrorCode::Io, "model JSON has inconsistent dimensions");
    }
    return m;
  } catch (const Json::exception& e) {
    fail(ErrorCode::Io, std::string("malformed model JSON: ") + e.what());
  }
}

Json fit_to_json(const FitResult& f, const GemConfig& cfg) {
  Json iterations = Json::array();
  for (const auto& d : f.trace) {
    iterations.push_back({{"center_step", d.steps.center},
                          {"precision_step", d.steps.precision},
                          {"mixing_step", d.steps.mixing},
                          {"bandwidth", d.bandwidth},
                          {"factor_count", d.shape.factor_count},
                          {"lambda_u", d.shape.lambda_u},
                          {"lambda_glasso", d.shape.lambda_selected},
                          {"tyler_iterations", d.shape.tyler_iterations},
                          {"tyler_converged", d.shape.tyler_converged},
                          {"frozen_centers", d.frozen_centers}});
  }
  Json starts = Json::array();
  for (double l : f.start_logliks) starts.push_back(number_or_null(l));
  std::vector<int> labels;
  for (int l : f.labels) labels.push_back(l + 1);
  return Json{
      {"schema_version", kSchemaVersion},
      {"config", config_to_json(cfg)},
      {"model", model_to_json(f.model)},
      {"labels", labels},
      {"pseudo_loglik", f.pseudo_loglik},
      {"iterations", f.iterations},
      {"converged", f.converged},
      {"diagnostics", {{"winning_start", f.start}, {"start_pseudo_logliks", starts}, {"per_iteration", iterations}}},
  };
}

Json gap_to_json(const GapTable& t) {
  Json per_k = Json::array();
  for (std::size_t j = 0; j < t.Ks.size(); ++j) {
    Json refs = Json::array();
    for (Index b = 0; b < t.W_ref.rows(); ++b) refs.push_back(number_or_null(t.W_ref(b, static_cast<Index>(j))));
    per_k.push_back({{"K", t.Ks[j]},
                     {"W", number_or_null(t.W[j])},
                     {"W_ref", refs},
                     {"surviving_references", t.surviving[j]},
                     {"gap", number_or_null(t.gap[j])},
                     {"s", number_or_null(t.s[j])}});
  }
  return Json{{"schema_version", kSchemaVersion}, {"Ks", t.Ks}, {"per_K", per_k}, {"K_lse", t.K_lse},
              {"K_max", t.K_max}, {"notes", t.notes}};
}

}  // namespace egem
