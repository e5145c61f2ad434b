#include "flagcurv/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flagcurv/oracle.hpp"

#ifndef FLAGCURV_VERSION
#define FLAGCURV_VERSION "0.0.0"
#endif

namespace flagcurv::cli {
namespace {

using json = nlohmann::json;

[[noreturn]] void config_error(const std::string& field, const std::string& msg) {
  throw GeometryError(ErrorKind::ConfigError, "config field '" + field + "': " + msg);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) config_error(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) config_error(field, "expected a finite number");
  return x;
}

Vec get_vec(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) config_error(field, "expected a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = get_number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

Mat get_mat(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) config_error(field, "expected a row-major array of rows");
  const size_t rows = j.size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (size_t r = 0; r < rows; ++r) {
    const std::string rf = field + "[" + std::to_string(r) + "]";
    const Vec row = get_vec(j[r], rf);
    if (static_cast<size_t>(row.size()) != rows) config_error(rf, "matrix must be square");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

const json& require(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) config_error(field.empty() ? key : field + "." + key, "missing");
  return obj.at(key);
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vec(m.row(r).transpose())));
  return out;
}

json nullable(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string preset_spec(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (!j.is_object()) config_error("immersion", "expected a preset name or {\"preset\", \"params\"}");
  const json& name = require(j, "preset", "immersion");
  if (!name.is_string()) config_error("immersion.preset", "expected a string");
  std::string spec = name.get<std::string>();
  if (j.contains("params")) {
    const Vec p = get_vec(j.at("params"), "immersion.params");
    spec += "{";
    for (Eigen::Index i = 0; i < p.size(); ++i) spec += (i ? "," : "") + format_number(p[i]);
    spec += "}";
  }
  return spec;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results are written
/// by index, so output order never depends on scheduling.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

json config_echo(const RunConfig& cfg) {
  json echo;
  echo["mode"] = mode_name(cfg.mode);
  if (cfg.zermelo) echo["zermelo"] = {{"h", to_json(cfg.zermelo->h)}, {"W", to_json(cfg.zermelo->W)}};
  if (cfg.randers) echo["randers"] = {{"g", to_json(cfg.randers->g)}, {"B", to_json(cfg.randers->B)}};
  if (!cfg.immersion.empty()) echo["immersion"] = cfg.immersion;
  const bool sampling =
      cfg.mode == Mode::Curvature || cfg.mode == Mode::Verify || cfg.mode == Mode::ScalarCheck;
  if (sampling) {
    echo["samples"] = cfg.samples;
    echo["seed"] = cfg.seed;
    echo["tolerances"] = {{"oracle", cfg.tolerances.oracle},
                          {"consistency", cfg.tolerances.consistency},
                          {"scalar", cfg.tolerances.scalar}};
  }
  if (cfg.mode == Mode::Curvature) echo["oracle"] = cfg.oracle;
  if (cfg.mode == Mode::ScalarCheck) {
    echo["flagpoles"] = cfg.flagpoles;
    if (cfg.point) echo["point"] = to_json(*cfg.point);
  }
  if (cfg.eval) {
    json vs = json::array();
    for (const Vec& a : cfg.eval->vectors) vs.push_back(to_json(a));
    echo["eval"] = {{"v", to_json(cfg.eval->v)}, {"vectors", vs}};
  }
  return echo;
}

json report_header(const RunConfig& cfg) {
  json rep;
  rep["tool"] = "flagcurv";
  rep["version"] = FLAGCURV_VERSION;
  rep["mode"] = mode_name(cfg.mode);
  rep["config"] = config_echo(cfg);
  return rep;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- convert, eval, presets

RunResult run_convert(const RunConfig& cfg) {
  if (cfg.format != Format::Json) config_error("format", "convert only writes json");
  json rep = report_header(cfg);
  if (cfg.zermelo) {
    const RandersData R = zermelo_to_randers(*cfg.zermelo);
    rep["randers"] = {{"g", to_json(R.g)}, {"B", to_json(R.B)}};
  } else {
    const ZermeloData Z = randers_to_zermelo(*cfg.randers);
    rep["zermelo"] = {{"h", to_json(Z.h)}, {"W", to_json(Z.W)}};
  }
  return {kExitOk, rep.dump(2) + "\n"};
}

RunResult run_eval(const RunConfig& cfg) {
  if (cfg.format != Format::Json) config_error("format", "eval only writes json");
  const ZermeloData Z = cfg.zermelo_data();
  const EvalRequest& req = *cfg.eval;
  json rep = report_header(cfg);
  json out;
  out["F"] = zermelo_norm(Z, req.v);
  out["randers_norm"] = randers_norm(cfg.randers ? *cfg.randers : zermelo_to_randers(Z), req.v);
  out["phi"] = phi(Z, req.v);
  out["g_v"] = to_json(fundamental_tensor_matrix(Z, req.v));
  const auto& vs = req.vectors;
  if (vs.size() >= 2) out["g_v(a,b)"] = fundamental_tensor(Z, req.v, vs[0], vs[1]);
  if (vs.size() == 3) out["C_v(a,b,c)"] = cartan_tensor_full(Z, req.v, vs[0], vs[1], vs[2]);
  rep["result"] = out;
  return {kExitOk, rep.dump(2) + "\n"};
}

RunResult run_presets(const RunConfig& cfg) {
  if (cfg.format != Format::Json) config_error("format", "presets only writes json");
  json rep;
  rep["tool"] = "flagcurv";
  rep["version"] = FLAGCURV_VERSION;
  rep["mode"] = "presets";
  json list = json::array();
  for (const PresetInfo& p : preset_registry()) {
    list.push_back({{"name", p.name}, {"description", p.description}});
  }
  rep["presets"] = list;
  return {kExitOk, rep.dump(2) + "\n"};
}

// ---------------------------------------------------------------- curvature, verify

struct Sample {
  Vec x, v, u;
};

struct CurvatureRow {
  Sample s;
  double K_closed = 0.0;
  std::optional<double> K_oracle;
  std::optional<double> abs_diff;
  double K_h = 0.0;
  double phi = 0.0;
  double F_v = 0.0;
  std::optional<double> h_N_W;
  /// verify only: closed-form consistency residuals.
  std::optional<double> hyper_residual;
  std::optional<double> indicatrix_residual;
};

std::vector<Sample> draw_samples(const Immersion& imm, int m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int k = imm.param_dim();
  std::vector<Sample> out;
  out.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    Sample s;
    s.x = imm.sample_point(rng);
    s.v = rng.normal_vector(k);
    s.u = rng.normal_vector(k);
    out.push_back(std::move(s));
  }
  return out;
}

std::string csv_header(const char* prefix, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += std::string(prefix) + std::to_string(i) + ",";
  return out;
}

std::string csv_vec(const Vec& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += format_number(v[i]) + ",";
  return out;
}

std::string csv_opt(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

RunResult run_curvature(const RunConfig& cfg, bool verify) {
  const auto t0 = std::chrono::steady_clock::now();
  const ZermeloData Z = cfg.zermelo_data();
  const Immersion imm = make_preset(cfg.immersion, Z);
  const bool with_oracle = verify || cfg.oracle;
  const bool hypersurface = imm.codimension() == 1;
  const bool indicatrix = imm.name().rfind("indicatrix", 0) == 0;
  const ChartFinsler cf = ChartFinsler::induced(Z, imm);

  const std::vector<Sample> samples = draw_samples(imm, cfg.samples, cfg.seed);
  std::vector<CurvatureRow> rows(samples.size());
  parallel_for(cfg.samples, thread_count(), [&](int i) {
    const Sample& s = samples[static_cast<size_t>(i)];
    CurvatureRow& r = rows[static_cast<size_t>(i)];
    r.s = s;
    const FlagContext ctx(Z, imm, s.x, s.v);
    r.K_closed = ctx.flag_curvature(s.u);
    r.K_h = ctx.point().sectional_curvature(s.v, s.u);
    r.phi = ctx.phi();
    r.F_v = ctx.F();
    if (hypersurface) r.h_N_W = inner(Z.h, ctx.point().unit_normal(), Z.W);
    if (with_oracle) {
      r.K_oracle = spray_flag_curvature(cf, s.x, s.v, s.u);
      r.abs_diff = std::abs(r.K_closed - *r.K_oracle);
    }
    if (verify && hypersurface) {
      const double Kh = ctx.flag_curvature_hypersurface(s.u);
      r.hyper_residual = std::abs(Kh - r.K_closed) / std::max(1.0, std::abs(r.K_closed));
      if (indicatrix) {
        const Mat J = imm.jacobian(s.x);
        const double Ki = indicatrix_flag_curvature(Z, imm.point(s.x), J * s.v, J * s.u);
        r.indicatrix_residual = std::abs(Ki - Kh) / std::max(1.0, std::abs(Kh));
      }
    }
  });

  double max_abs_diff = 0.0, sum = 0.0, max_hyper = 0.0, max_ind = 0.0;
  for (const CurvatureRow& r : rows) {
    sum += r.K_closed;
    if (r.abs_diff) max_abs_diff = std::max(max_abs_diff, *r.abs_diff);
    if (r.hyper_residual) max_hyper = std::max(max_hyper, *r.hyper_residual);
    if (r.indicatrix_residual) max_ind = std::max(max_ind, *r.indicatrix_residual);
  }

  json checks = json::array();
  bool pass = true;
  auto add_check = [&](const char* name, double worst, double tol) {
    const bool ok = worst < tol;
    pass = pass && ok;
    checks.push_back({{"name", name}, {"max", worst}, {"tolerance", tol}, {"pass", ok}});
  };
  if (verify) {
    add_check("closed_vs_oracle", max_abs_diff, cfg.tolerances.oracle);
    if (hypersurface) add_check("hypersurface_vs_general", max_hyper, cfg.tolerances.consistency);
    if (indicatrix) add_check("indicatrix_vs_hypersurface", max_ind, cfg.tolerances.consistency);
  }
  const double runtime = elapsed_ms(t0);

  RunResult res;
  res.exit_code = pass ? kExitOk : kExitVerdictFail;
  if (cfg.format == Format::Csv) {
    const int k = imm.param_dim();
    std::string out = csv_header("x", k) + csv_header("v", k) + csv_header("u", k) +
                      "K_closed,K_oracle,abs_diff,K_h,phi,F_v\n";
    for (const CurvatureRow& r : rows) {
      out += csv_vec(r.s.x) + csv_vec(r.s.v) + csv_vec(r.s.u) + format_number(r.K_closed) + "," +
             csv_opt(r.K_oracle) + "," + csv_opt(r.abs_diff) + "," + format_number(r.K_h) + "," +
             format_number(r.phi) + "," + format_number(r.F_v) + "\n";
    }
    res.report = out;
    return res;
  }

  json rep = report_header(cfg);
  json jrows = json::array();
  for (const CurvatureRow& r : rows) {
    json row = {{"x", to_json(r.s.x)},      {"v", to_json(r.s.v)},
                {"u", to_json(r.s.u)},      {"K_closed", r.K_closed},
                {"K_oracle", nullable(r.K_oracle)}, {"abs_diff", nullable(r.abs_diff)},
                {"K_h", r.K_h},             {"phi", r.phi},
                {"F_v", r.F_v}};
    if (hypersurface) row["h_N_W"] = *r.h_N_W;
    jrows.push_back(row);
  }
  rep["rows"] = jrows;
  json summary = {{"samples", cfg.samples},
                  {"mean", sum / cfg.samples},
                  {"max_abs_diff", with_oracle ? json(max_abs_diff) : json(nullptr)},
                  {"runtime_ms", runtime}};
  rep["summary"] = summary;
  if (verify) {
    rep["checks"] = checks;
    rep["verdict"] = pass ? "pass" : "fail";
  }
  res.report = rep.dump(2) + "\n";
  return res;
}

// ---------------------------------------------------------------- scalar-check

RunResult run_scalar_check(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const ZermeloData Z = cfg.zermelo_data();
  const Immersion imm = make_preset(cfg.immersion, Z);
  if (cfg.point && cfg.point->size() != imm.param_dim()) {
    config_error("point", "expected " + std::to_string(imm.param_dim()) + " chart coordinates");
  }

  struct Pole {
    Vec x, v;
    std::uint64_t seed;
  };
  SplitMix64 rng(cfg.seed);
  std::vector<Pole> poles;
  for (int i = 0; i < cfg.flagpoles; ++i) {
    Pole p;
    p.x = cfg.point ? *cfg.point : imm.sample_point(rng);
    p.v = rng.normal_vector(imm.param_dim());
    p.seed = rng.next();
    poles.push_back(std::move(p));
  }
  std::vector<ScalarFlagReport> reports(poles.size());
  parallel_for(cfg.flagpoles, thread_count(), [&](int i) {
    const Pole& p = poles[static_cast<size_t>(i)];
    reports[static_cast<size_t>(i)] =
        scalar_flag_check(Z, imm, p.x, p.v, cfg.samples, p.seed, cfg.tolerances.scalar);
  });
  bool all = true;
  for (const auto& r : reports) all = all && r.verdict;
  const double runtime = elapsed_ms(t0);

  RunResult res;
  res.exit_code = all ? kExitOk : kExitVerdictFail;
  if (cfg.format == Format::Csv) {
    const int k = imm.param_dim();
    std::string out = csv_header("x", k) + csv_header("v", k) + "mean,spread,verdict\n";
    for (size_t i = 0; i < poles.size(); ++i) {
      out += csv_vec(poles[i].x) + csv_vec(poles[i].v) + format_number(reports[i].mean) + "," +
             format_number(reports[i].spread) + "," + (reports[i].verdict ? "true" : "false") + "\n";
    }
    res.report = out;
    return res;
  }
  json rep = report_header(cfg);
  json jrows = json::array();
  for (size_t i = 0; i < poles.size(); ++i) {
    const ScalarFlagReport& r = reports[i];
    jrows.push_back({{"x", to_json(poles[i].x)},
                     {"v", to_json(poles[i].v)},
                     {"samples", r.samples},
                     {"values", r.values},
                     {"mean", r.mean},
                     {"spread", r.spread},
                     {"verdict", r.verdict}});
  }
  rep["rows"] = jrows;
  rep["summary"] = {{"flagpoles", cfg.flagpoles}, {"all_scalar", all}, {"runtime_ms", runtime}};
  rep["verdict"] = all ? "pass" : "fail";
  res.report = rep.dump(2) + "\n";
  return res;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GeometryError(ErrorKind::ConfigError, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Mode parse_mode(std::string_view name) {
  if (name == "convert") return Mode::Convert;
  if (name == "eval") return Mode::Eval;
  if (name == "curvature") return Mode::Curvature;
  if (name == "scalar-check") return Mode::ScalarCheck;
  if (name == "verify") return Mode::Verify;
  if (name == "presets") return Mode::Presets;
  throw GeometryError(ErrorKind::ConfigError, "unknown mode '" + std::string(name) + "'");
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Convert: return "convert";
    case Mode::Eval: return "eval";
    case Mode::Curvature: return "curvature";
    case Mode::ScalarCheck: return "scalar-check";
    case Mode::Verify: return "verify";
    case Mode::Presets: return "presets";
  }
  return "unknown";
}

ZermeloData RunConfig::zermelo_data() const {
  if (zermelo) return *zermelo;
  if (randers) return randers_to_zermelo(*randers);
  throw GeometryError(ErrorKind::ConfigError, "exactly one of 'zermelo' or 'randers' is required");
}

RunConfig parse_config(const std::string& text, Mode mode) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GeometryError(ErrorKind::ConfigError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("<root>", "expected a JSON object");

  RunConfig cfg;
  cfg.mode = mode;
  if (doc.contains("mode")) {
    const json& m = doc.at("mode");
    if (!m.is_string()) config_error("mode", "expected a string");
    if (parse_mode(m.get<std::string>()) != mode) {
      config_error("mode", "'" + m.get<std::string>() + "' disagrees with the command line");
    }
  }
  if (mode == Mode::Presets) return cfg;

  const bool has_z = doc.contains("zermelo");
  const bool has_r = doc.contains("randers");
  if (has_z == has_r) config_error("zermelo/randers", "exactly one must be present");
  try {
    if (has_z) {
      const json& z = doc.at("zermelo");
      cfg.zermelo = ZermeloData::make(get_mat(require(z, "h", "zermelo"), "zermelo.h"),
                                      get_vec(require(z, "W", "zermelo"), "zermelo.W"));
    } else {
      const json& r = doc.at("randers");
      cfg.randers = RandersData::make(get_mat(require(r, "g", "randers"), "randers.g"),
                                      get_vec(require(r, "B", "randers"), "randers.B"));
    }
  } catch (const GeometryError& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error(has_z ? "zermelo" : "randers", e.what());
  }
  const int n = cfg.zermelo ? cfg.zermelo->dim() : cfg.randers->dim();

  if (doc.contains("immersion")) cfg.immersion = preset_spec(doc.at("immersion"));
  if (doc.contains("samples")) {
    const json& s = doc.at("samples");
    if (!s.is_number_integer()) config_error("samples", "expected an integer");
    cfg.samples = s.get<int>();
  }
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned()) config_error("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) config_error("tolerances", "expected an object");
    for (const auto& [key, val] : t.items()) {
      const double x = get_number(val, "tolerances." + key);
      if (!(x > 0.0)) config_error("tolerances." + key, "must be positive");
      if (key == "oracle") cfg.tolerances.oracle = x;
      else if (key == "consistency") cfg.tolerances.consistency = x;
      else if (key == "scalar") cfg.tolerances.scalar = x;
      else config_error("tolerances." + key, "unknown tolerance");
    }
  }
  if (doc.contains("oracle")) {
    if (!doc.at("oracle").is_boolean()) config_error("oracle", "expected true or false");
    cfg.oracle = doc.at("oracle").get<bool>();
  }
  if (doc.contains("flagpoles")) {
    const json& f = doc.at("flagpoles");
    if (!f.is_number_integer() || f.get<int>() < 1) config_error("flagpoles", "expected a positive integer");
    cfg.flagpoles = f.get<int>();
  }
  if (doc.contains("point")) cfg.point = get_vec(doc.at("point"), "point");
  if (doc.contains("eval")) {
    const json& e = doc.at("eval");
    if (!e.is_object()) config_error("eval", "expected an object");
    EvalRequest req;
    req.v = get_vec(require(e, "v", "eval"), "eval.v");
    if (req.v.size() != n) config_error("eval.v", "expected " + std::to_string(n) + " components");
    if (e.contains("vectors")) {
      const json& vs = e.at("vectors");
      if (!vs.is_array() || vs.size() > 3) config_error("eval.vectors", "expected up to three vectors");
      for (size_t i = 0; i < vs.size(); ++i) {
        const std::string f = "eval.vectors[" + std::to_string(i) + "]";
        req.vectors.push_back(get_vec(vs[i], f));
        if (req.vectors.back().size() != n) config_error(f, "expected " + std::to_string(n) + " components");
      }
    }
    cfg.eval = std::move(req);
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    if (!o.is_object()) config_error("output", "expected an object");
    if (o.contains("path")) {
      if (!o.at("path").is_string()) config_error("output.path", "expected a string");
      cfg.out_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      const json& f = o.at("format");
      if (f == "json") cfg.format = Format::Json;
      else if (f == "csv") cfg.format = Format::Csv;
      else config_error("output.format", "expected \"json\" or \"csv\"");
    }
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (cfg.mode == Mode::Presets || cfg.mode == Mode::Convert) return;
  if (cfg.mode == Mode::Eval) {
    if (!cfg.eval) config_error("eval", "missing");
    return;
  }
  if (cfg.immersion.empty()) config_error("immersion", "missing");
  if (cfg.samples < (cfg.mode == Mode::ScalarCheck ? 2 : 1)) {
    config_error("samples", cfg.mode == Mode::ScalarCheck ? "must be at least 2" : "must be at least 1");
  }
  try {
    make_preset(cfg.immersion, cfg.zermelo_data());
  } catch (const GeometryError& e) {
    config_error("immersion", e.what());
  }
}

int thread_count() {
  const char* env = std::getenv("FLAG_TOOL_THREADS");
  int n = 0;
  if (env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) {
      throw GeometryError(ErrorKind::ConfigError, "FLAG_TOOL_THREADS must be a non-negative integer");
    }
    n = static_cast<int>(std::min<long>(v, 1024));
  }
  if (n == 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

RunResult run(const RunConfig& cfg) {
  validate(cfg);
  switch (cfg.mode) {
    case Mode::Convert: return run_convert(cfg);
    case Mode::Eval: return run_eval(cfg);
    case Mode::Curvature: return run_curvature(cfg, false);
    case Mode::Verify: return run_curvature(cfg, true);
    case Mode::ScalarCheck: return run_scalar_check(cfg);
    case Mode::Presets: return run_presets(cfg);
  }
  return {kExitInvalidInput, ""};
}

int run_command_line(int argc, char** argv) {
  CLI::App app{"Flag curvature of submanifolds of Randers-Minkowski spaces"};
  std::string mode_str, config_path, out_path, format;
  std::uint64_t seed = 0;
  int samples = 0;
  app.add_option("mode", mode_str, "convert | eval | curvature | scalar-check | verify | presets")
      ->required();
  app.add_option("--config", config_path, "JSON run configuration");
  auto* out_opt = app.add_option("--out", out_path, "Report path (default: stdout)");
  auto* fmt_opt = app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  auto* samples_opt = app.add_option("--samples", samples, "Override the config sample count");
  app.set_version_flag("--version", FLAGCURV_VERSION);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    const Mode mode = parse_mode(mode_str);
    RunConfig cfg;
    if (config_path.empty()) {
      if (mode != Mode::Presets) {
        throw GeometryError(ErrorKind::ConfigError, "--config is required for mode " + mode_str);
      }
      cfg.mode = mode;
    } else {
      cfg = parse_config(read_file(config_path), mode);
    }
    if (*out_opt) cfg.out_path = out_path;
    if (*fmt_opt) cfg.format = format == "csv" ? Format::Csv : Format::Json;
    if (*seed_opt) cfg.seed = seed;
    if (*samples_opt) cfg.samples = samples;

    const RunResult res = run(cfg);
    if (cfg.out_path.empty()) {
      std::cout << res.report;
    } else {
      std::ofstream out(cfg.out_path, std::ios::binary);
      if (!out) throw GeometryError(ErrorKind::ConfigError, "cannot write '" + cfg.out_path + "'");
      out << res.report;
    }
    return res.exit_code;
  } catch (const GeometryError& e) {
    std::cerr << "flagcurv: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "flagcurv: " << e.what() << "\n";
    return kExitInvalidInput;
  }
}

}  // namespace flagcurv::cli
