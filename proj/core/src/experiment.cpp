#include "aniso/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "aniso/detail/summation.hpp"
#include "aniso/errors.hpp"
#include "aniso/field_sim.hpp"

namespace aniso {

namespace {

// Dense covariance matrices dominate memory; concurrent replications are
// capped so that their matrices fit in this budget.
constexpr double kMatrixBudgetBytes = 3.0 * 1024 * 1024 * 1024;

struct RawValue {
  bool is_list = false;
  bool quoted = false;
  std::string scalar;
  std::vector<std::string> items;
  int line = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& tok, int line, bool& quoted) {
  quoted = false;
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    quoted = true;
    return tok.substr(1, tok.size() - 2);
  }
  if (tok.find('"') != std::string::npos) fail_at(line, "unbalanced quote in '" + tok + "'");
  return tok;
}

RawValue parse_value(const std::string& text, int line) {
  RawValue v;
  v.line = line;
  if (text.empty()) fail_at(line, "missing value");
  if (text.front() == '[') {
    if (text.back() != ']') fail_at(line, "list must end with ']'");
    v.is_list = true;
    const std::string inner = trim(std::string_view(text).substr(1, text.size() - 2));
    if (inner.empty()) return v;
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) fail_at(line, "empty list element");
      bool q = false;
      v.items.push_back(unquote(t, line, q));
    }
    return v;
  }
  v.scalar = unquote(text, line, v.quoted);
  return v;
}

// One line may hold several `key = value` pairs separated by whitespace;
// a value is a quoted string, a bracketed list or a bare token.
std::vector<std::pair<std::string, std::string>> split_assignments(const std::string& body,
                                                                   int line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
  };
  for (skip_ws(); i < body.size(); skip_ws()) {
    const std::size_t k0 = i;
    while (i < body.size() && body[i] != '=' && body[i] != ' ' && body[i] != '\t') ++i;
    const std::string key = body.substr(k0, i - k0);
    skip_ws();
    if (i >= body.size() || body[i] != '=') fail_at(line, "expected key = value");
    if (key.empty()) fail_at(line, "missing key");
    ++i;
    skip_ws();
    const std::size_t v0 = i;
    if (i < body.size() && (body[i] == '"' || body[i] == '[')) {
      const char close = body[i] == '"' ? '"' : ']';
      const std::size_t end = body.find(close, i + 1);
      if (end == std::string::npos) {
        fail_at(line, close == '"' ? "unbalanced quote" : "list must end with ']'");
      }
      i = end + 1;
    } else {
      while (i < body.size() && body[i] != ' ' && body[i] != '\t') ++i;
    }
    out.emplace_back(key, body.substr(v0, i - v0));
  }
  return out;
}

double to_double(const std::string& key, const std::string& tok, int line) {
  double x = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
    fail_at(line, key + " expects a number, got '" + tok + "'");
  }
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& tok, int line) {
  std::uint64_t x = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    fail_at(line, key + " expects a nonnegative integer, got '" + tok + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& tok, int line) {
  if (tok == "true") return true;
  if (tok == "false") return false;
  fail_at(line, key + " expects true or false, got '" + tok + "'");
}

std::vector<std::string> as_items(const RawValue& v) {
  return v.is_list ? v.items : std::vector<std::string>{v.scalar};
}

const std::string& as_scalar(const std::string& key, const RawValue& v) {
  if (v.is_list) fail_at(v.line, key + " expects a single value, not a list");
  return v.scalar;
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (model == "gauss-aniso") {
    if (r_list.empty()) throw ConfigError("r must list at least one anisotropy ratio");
    for (double r : r_list) {
      if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("r values must be positive");
    }
  } else if (model == "matern") {
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
    if (!(ell > 0.0)) throw ConfigError("ell must be positive");
  } else {
    throw ConfigError("model must be \"gauss-aniso\" or \"matern\", got \"" + model + "\"");
  }
  if (n_list.empty()) throw ConfigError("n must list at least one sample size");
  for (std::size_t n : n_list) {
    if (n < 4) throw ConfigError("every n must be >= 4");
  }
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (threads && *threads < 1) throw ConfigError("threads must be >= 1 or \"auto\"");
  test.validate();
  if (!test.taper.is_smooth()) {
    throw ConfigError("the isotropy test requires taper = \"cos\" with alpha >= 3");
  }
}

std::vector<CovarianceModel> ExperimentConfig::models() const {
  std::vector<CovarianceModel> out;
  if (model == "matern") {
    out.push_back(CovarianceModel::matern(nu, ell));
  } else {
    for (double r : r_list) out.push_back(CovarianceModel::gaussian_aniso(r));
  }
  return out;
}

ExperimentConfig parse_config_text(const std::string& text, ConfigScope scope) {
  std::map<std::string, RawValue> raw;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    for (auto& [key, value] : split_assignments(trim(strip_comment(line)), line_no)) {
      if (raw.count(key)) fail_at(line_no, "duplicate key '" + key + "'");
      raw.emplace(key, parse_value(value, line_no));
    }
  }

  static const char* const kKnown[] = {"model", "r", "nu", "ell", "n", "reps", "alpha_level",
                                       "a", "lambda", "a_r", "lambda_r", "taper", "alpha",
                                       "truncate_c0", "seed", "threads", "timing", "out"};
  std::string unknown;
  for (const auto& [key, v] : raw) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      unknown += (unknown.empty() ? "" : ", ") + key;
    }
  }
  if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);

  ExperimentConfig cfg;
  auto get = [&](const char* key) -> const RawValue* {
    auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };
  if (auto* v = get("model")) cfg.model = as_scalar("model", *v);
  if (auto* v = get("r")) {
    if (cfg.model != "gauss-aniso") fail_at(v->line, "r applies to model \"gauss-aniso\" only");
    cfg.r_list.clear();
    for (const auto& t : as_items(*v)) cfg.r_list.push_back(to_double("r", t, v->line));
  }
  for (const char* key : {"nu", "ell"}) {
    if (auto* v = get(key)) {
      if (cfg.model != "matern") fail_at(v->line, std::string(key) + " applies to model \"matern\" only");
      (key[0] == 'n' ? cfg.nu : cfg.ell) = to_double(key, as_scalar(key, *v), v->line);
    }
  }
  if (auto* v = get("n")) {
    for (const auto& t : as_items(*v)) cfg.n_list.push_back(to_uint("n", t, v->line));
  }
  if (auto* v = get("reps")) cfg.reps = to_uint("reps", as_scalar("reps", *v), v->line);
  if (auto* v = get("alpha_level")) {
    cfg.test.alpha_level = to_double("alpha_level", as_scalar("alpha_level", *v), v->line);
  }
  auto get_int = [&](const char* key, int& dst) {
    if (auto* v = get(key)) {
      const std::uint64_t x = to_uint(key, as_scalar(key, *v), v->line);
      if (x > 1'000'000) fail_at(v->line, std::string(key) + " is unreasonably large");
      dst = static_cast<int>(x);
    }
  };
  get_int("a", cfg.test.a);
  get_int("a_r", cfg.test.a_r);
  if (auto* v = get("lambda")) cfg.test.lambda = to_double("lambda", as_scalar("lambda", *v), v->line);
  if (auto* v = get("lambda_r")) {
    cfg.test.lambda_r = to_double("lambda_r", as_scalar("lambda_r", *v), v->line);
  }
  int alpha = 3;
  get_int("alpha", alpha);
  std::string taper = "cos";
  if (auto* v = get("taper")) taper = as_scalar("taper", *v);
  if (taper == "cos") {
    cfg.test.taper = Taper::cosine(alpha);
  } else if (taper == "rect") {
    cfg.test.taper = Taper::rectangular();
  } else {
    fail_at(get("taper")->line, "taper must be \"cos\" or \"rect\"");
  }
  if (auto* v = get("truncate_c0")) {
    cfg.test.truncate_c0 = to_bool("truncate_c0", as_scalar("truncate_c0", *v), v->line);
  }
  if (auto* v = get("seed")) cfg.seed = to_uint("seed", as_scalar("seed", *v), v->line);
  if (auto* v = get("threads")) {
    const std::string& t = as_scalar("threads", *v);
    if (t != "auto") {
      const std::uint64_t x = to_uint("threads", t, v->line);
      if (x < 1 || x > 4096) fail_at(v->line, "threads must be in [1, 4096] or \"auto\"");
      cfg.threads = static_cast<unsigned>(x);
    }
  }
  if (auto* v = get("timing")) cfg.timing = to_bool("timing", as_scalar("timing", *v), v->line);
  if (auto* v = get("out")) cfg.out_path = as_scalar("out", *v);

  if (scope == ConfigScope::Experiment) {
    cfg.validate();
  } else {
    cfg.test.validate();
    if (!cfg.test.taper.is_smooth()) {
      throw ConfigError("the isotropy test requires taper = \"cos\" with alpha >= 3");
    }
  }
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path, ConfigScope scope) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), scope);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "model = \"" << c.model << "\"\n";
  auto list = [](const auto& xs, auto fmt) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
    return s + "]";
  };
  if (c.model == "matern") {
    os << "nu = " << fmt_double(c.nu) << "\n";
    os << "ell = " << fmt_double(c.ell) << "\n";
  } else {
    os << "r = " << list(c.r_list, fmt_double) << "\n";
  }
  os << "n = " << list(c.n_list, [](std::size_t n) { return std::to_string(n); }) << "\n";
  os << "reps = " << c.reps << "\n";
  os << "alpha_level = " << fmt_double(c.test.alpha_level) << "\n";
  os << "a = " << c.test.a << "\n";
  os << "lambda = " << fmt_double(c.test.lambda) << "\n";
  os << "a_r = " << c.test.a_r << "\n";
  os << "lambda_r = " << fmt_double(c.test.lambda_r) << "\n";
  if (c.test.taper.kind() == Taper::Kind::Rectangular) {
    os << "taper = \"rect\"\n";
  } else {
    os << "taper = \"cos\"\n";
    os << "alpha = " << c.test.taper.alpha() << "\n";
  }
  os << "truncate_c0 = " << (c.test.truncate_c0 ? "true" : "false") << "\n";
  os << "seed = " << c.seed << "\n";
  if (c.threads) {
    os << "threads = " << *c.threads << "\n";
  } else {
    os << "threads = \"auto\"\n";
  }
  os << "timing = " << (c.timing ? "true" : "false") << "\n";
  if (!c.out_path.empty()) os << "out = \"" << c.out_path << "\"\n";
  return os.str();
}

unsigned resolve_threads(const ExperimentConfig& config) {
  if (const char* env = std::getenv("ANISO_THREADS"); env && *env) {
    unsigned x = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, x);
    if (ec != std::errc() || ptr != end || x < 1) {
      throw ConfigError(std::string("ANISO_THREADS must be a positive integer, got '") + env + "'");
    }
    return x;
  }
  if (config.threads) return *config.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ReplicationOutcome run_replication(const IsotropyTester& tester, const CovarianceModel& model,
                                   std::size_t n, std::uint64_t seed, std::size_t rep) {
  ReplicationOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const Seed base{seed, static_cast<std::uint64_t>(rep)};
  const double lambda = tester.config().lambda;
  try {
    const Locations locs = sample_locations(n, lambda, base.child(0));
    const SpatialSample sample = simulate_field(model, lambda, locs, base.child(1));
    out.result = tester.evaluate(sample);
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

TestResult run_single(const ExperimentConfig& config, const Seed& seed) {
  config.validate();
  const IsotropyTester tester(config.test);
  const CovarianceModel model = config.models().front();
  const double lambda = config.test.lambda;
  const Locations locs = sample_locations(config.n_list.front(), lambda, seed.child(0));
  return tester.evaluate(simulate_field(model, lambda, locs, seed.child(1)));
}

MonteCarloRow aggregate_row(double r, std::size_t n, const std::vector<ReplicationOutcome>& outcomes,
                            double wall_seconds) {
  MonteCarloRow row;
  row.r = r;
  row.n = n;
  row.reps = outcomes.size();
  row.wall_seconds = wall_seconds;
  std::vector<double> stats, m_hats;
  for (const auto& o : outcomes) {
    if (o.failed) {
      ++row.failures;
      continue;
    }
    m_hats.push_back(o.result.m_hat);
    if (o.result.degenerate) {
      ++row.degenerate;
      continue;
    }
    stats.push_back(o.result.statistic);
    if (o.result.reject) ++row.rejections;
  }
  const double reps = static_cast<double>(row.reps);
  row.rate = reps > 0 ? static_cast<double>(row.rejections) / reps : 0.0;
  row.rate_se = reps > 0 ? std::sqrt(row.rate * (1.0 - row.rate) / reps) : 0.0;
  auto mean = [](const std::vector<double>& xs) {
    if (xs.empty()) return std::nan("");
    return detail::pairwise_sum<double>(xs) / static_cast<double>(xs.size());
  };
  row.mean_statistic = mean(stats);
  row.mean_m_hat = mean(m_hats);
  return row;
}

std::string format_csv_row(const MonteCarloRow& row) {
  std::ostringstream os;
  os << fmt_double(row.r) << ',' << row.n << ',' << row.reps << ',' << row.rejections << ','
     << fmt_double(row.rate) << ',' << fmt_double(row.rate_se) << ','
     << fmt_double(row.mean_statistic) << ',' << fmt_double(row.mean_m_hat) << ','
     << row.degenerate << ',' << fmt_double(row.wall_seconds);
  return os.str();
}

namespace {

nlohmann::json row_json(const MonteCarloRow& row) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  return {{"r", row.r},
          {"n", row.n},
          {"reps", row.reps},
          {"rejections", row.rejections},
          {"rate", row.rate},
          {"rate_se", row.rate_se},
          {"mean_statistic", num(row.mean_statistic)},
          {"mean_m_hat", num(row.mean_m_hat)},
          {"degenerate", row.degenerate},
          {"failures", row.failures},
          {"wall_seconds", row.wall_seconds}};
}

double row_ratio(const CovarianceModel& model) {
  if (const auto* g = std::get_if<GaussianAniso>(&model.kind())) return g->r;
  return 1.0;
}

}  // namespace

std::vector<MonteCarloRow> run_montecarlo(const ExperimentConfig& config,
                                          const std::function<void(const MonteCarloRow&)>& on_row) {
  config.validate();
  const unsigned threads = resolve_threads(config);

  namespace fs = std::filesystem;
  std::ofstream partial;
  fs::path dir, partial_path;
  if (!config.out_path.empty()) {
    dir = config.out_path;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    partial_path = dir / "montecarlo.csv.partial";
    partial.open(partial_path, std::ios::trunc);
    if (!partial) throw IoError("output directory is not writable: " + dir.string());
    partial << kMonteCarloCsvHeader << '\n' << std::flush;
  }

  const IsotropyTester tester(config.test);
  std::vector<MonteCarloRow> rows;
  for (const CovarianceModel& model : config.models()) {
    for (std::size_t n : config.n_list) {
      const double matrix_bytes = 8.0 * static_cast<double>(n) * static_cast<double>(n);
      const auto cap = static_cast<unsigned>(std::max(1.0, std::floor(kMatrixBudgetBytes / matrix_bytes)));
      const unsigned cell_threads = std::min(threads, cap);

      std::vector<ReplicationOutcome> outcomes(config.reps);
      const auto t0 = std::chrono::steady_clock::now();
      parallel_for(config.reps, cell_threads, [&](std::size_t rep) {
        outcomes[rep] = run_replication(tester, model, n, config.seed, rep);
      });
      const double wall =
          config.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                        : 0.0;
      rows.push_back(aggregate_row(row_ratio(model), n, outcomes, wall));
      if (partial.is_open()) {
        partial << format_csv_row(rows.back()) << '\n' << std::flush;
        if (!partial) throw IoError("write failed for " + partial_path.string());
      }
      if (on_row) on_row(rows.back());
    }
  }

  if (partial.is_open()) {
    partial.close();
    std::error_code ec;
    fs::rename(partial_path, dir / "montecarlo.csv", ec);
    if (ec) throw IoError("cannot finalize montecarlo.csv: " + ec.message());

    nlohmann::json doc;
    doc["config"] = serialize_config(config);
    doc["threads"] = config.timing ? nlohmann::json(threads) : nlohmann::json(nullptr);
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : rows) doc["rows"].push_back(row_json(row));
    std::ofstream js(dir / "montecarlo.json", std::ios::trunc);
    js << doc.dump(2) << '\n';
    if (!js) throw IoError("write failed for montecarlo.json");
  }
  return rows;
}

}  // namespace aniso
