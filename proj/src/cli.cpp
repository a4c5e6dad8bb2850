#include "polymer/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "polymer/errors.hpp"
#include "polymer/parallel.hpp"
#include "polymer/suites.hpp"

#ifndef POLYMER_LAB_VERSION
#define POLYMER_LAB_VERSION "dev"
#endif

namespace polymer::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kPlanSchema = "polymer-lab-plan/1";
constexpr const char* kManifestSchema = "polymer-lab-manifest/1";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Command {
  std::string name;
  std::string help;
  std::function<SuiteOutcome(const SuiteConfig&)> suite;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"shape-check", "special-function and shape identities", shape_suite},
      {"dp-verify", "partition-function tables against enumeration oracles", dp_suite},
      {"check-burke", "stationary increment marginals, independence and expectation", burke_suite},
      {"exit-time", "quenched exit probabilities of the stationary model", exit_suite},
      {"rw-sandwich", "random-walk sandwich of the free-energy profile", sandwich_suite},
      {"sample-paths", "quenched path sampler against the enumerated measure", sampler_suite},
      {"variance", "variance scaling of log Z_{0,N}", variance_suite},
      {"correlation", "time correlation of log Z_{0,r} and log Z_{0,N}", correlation_suite},
      {"tails", "upper and lower tail frequencies", tails_suite},
      {"nonrandom", "nonrandom fluctuation 2N f_d - E log Z", nonrandom_suite},
      {"transversal", "transversal exponent of the optimal crossing", transversal_suite},
      {"all-acceptance", "every suite at its default size", acceptance_suite},
  };
  return all;
}

struct Options {
  std::optional<double> mu;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::vector<int> n_values;
  std::vector<int> r_values;
  std::vector<double> ratios;
  std::vector<double> t_grid;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::optional<double> rho;
  std::optional<double> s;
  std::optional<double> q0;
  std::optional<std::string> plan;
  bool force = false;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_body(const std::vector<ResultRow>& rows) {
  std::string body = "experiment,N,r,statistic,value,stderr\r\n";
  for (const auto& r : rows) {
    body += csv_field(r.experiment) + ",";
    body += (r.n ? std::to_string(*r.n) : "") + ",";
    body += (r.r ? std::to_string(*r.r) : "") + ",";
    body += csv_field(r.statistic) + ",";
    body += format_double(r.value) + ",";
    body += (r.stderr_value ? format_double(*r.stderr_value) : "") + "\r\n";
  }
  return body;
}

void write_file(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << bytes;
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

template <typename T>
void take(const json& plan, const char* key, std::optional<T>& slot) {
  if (plan.contains(key)) slot = plan.at(key).get<T>();
}

template <typename T>
void take(const json& plan, const char* key, std::vector<T>& slot) {
  if (plan.contains(key)) slot = plan.at(key).get<std::vector<T>>();
}

// Plan file values fill whatever the command line left unset.
void merge_plan_file(const std::string& path, Options& opts, const CLI::App& sub) {
  std::ifstream f(path);
  if (!f) throw UsageError("plan file not found: " + path);
  json plan;
  try {
    plan = json::parse(f);
  } catch (const json::parse_error& e) {
    throw UsageError("plan file is not valid JSON: " + std::string(e.what()));
  }
  if (!plan.is_object() || plan.value("schema", "") != kPlanSchema) {
    throw UsageError(std::string("plan file must carry \"schema\": \"") + kPlanSchema + "\"");
  }
  static const std::vector<std::string> known{"schema", "mu",      "seed", "reps", "N", "r",  "ratios",
                                              "t",      "threads", "out",  "rho",  "s", "q0"};
  for (const auto& [key, value] : plan.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw UsageError("unknown plan field \"" + key + "\"");
    }
  }
  Options file;
  try {
    take(plan, "mu", file.mu);
    take(plan, "seed", file.seed);
    take(plan, "reps", file.reps);
    take(plan, "N", file.n_values);
    take(plan, "r", file.r_values);
    take(plan, "ratios", file.ratios);
    take(plan, "t", file.t_grid);
    take(plan, "threads", file.threads);
    take(plan, "out", file.out);
    take(plan, "rho", file.rho);
    take(plan, "s", file.s);
    take(plan, "q0", file.q0);
  } catch (const json::exception& e) {
    throw UsageError("bad plan field: " + std::string(e.what()));
  }
  auto given = [&](const char* flag) { return sub.count(flag) > 0; };
  if (!given("--mu")) opts.mu = file.mu;
  if (!given("--seed")) opts.seed = file.seed;
  if (!given("--reps")) opts.reps = file.reps;
  if (!given("--N")) opts.n_values = file.n_values;
  if (!given("--r")) opts.r_values = file.r_values;
  if (!given("--ratios")) opts.ratios = file.ratios;
  if (!given("--t")) opts.t_grid = file.t_grid;
  if (!given("--threads")) opts.threads = file.threads;
  if (!given("--out")) opts.out = file.out;
  if (!given("--rho")) opts.rho = file.rho;
  if (!given("--s")) opts.s = file.s;
  if (!given("--q0")) opts.q0 = file.q0;
}

SuiteConfig to_config(const Options& o) {
  SuiteConfig c;
  if (o.mu) c.mu = *o.mu;
  if (!(c.mu > 0) || !std::isfinite(c.mu)) throw UsageError("--mu must be positive");
  if (o.seed) c.seed = *o.seed;
  c.threads = o.threads.value_or(default_thread_count());
  if (c.threads == 0) throw UsageError("--threads must be at least 1");
  c.replicas = o.reps;
  if (c.replicas && *c.replicas < 2) throw UsageError("--reps must be at least 2");
  c.n_values = o.n_values;
  c.r_values = o.r_values;
  c.r_ratios = o.ratios;
  c.t_grid = o.t_grid;
  c.rho = o.rho;
  if (o.s) c.s = *o.s;
  if (o.q0) c.q0 = *o.q0;
  return c;
}

// Everything that determines the results; threads and paths are excluded.
json plan_echo(const std::string& command, const SuiteConfig& c) {
  json j;
  j["command"] = command;
  j["version"] = POLYMER_LAB_VERSION;
  j["mu"] = c.mu;
  j["seed"] = c.seed;
  j["reps"] = c.replicas ? json(*c.replicas) : json(nullptr);
  j["N"] = c.n_values;
  j["r"] = c.r_values;
  j["ratios"] = c.r_ratios;
  j["t"] = c.t_grid;
  j["rho"] = c.rho ? json(*c.rho) : json(nullptr);
  j["s"] = c.s;
  j["q0"] = c.q0;
  return j;
}

fs::path output_root(const Options& o) {
  if (o.out) return *o.out;
  if (const char* env = std::getenv("POLYMER_LAB_OUT"); env && *env) return env;
  return "polymer-lab-out";
}

std::optional<std::string> existing_plan_hash(const fs::path& manifest) {
  std::ifstream f(manifest);
  if (!f) return std::nullopt;
  try {
    const json j = json::parse(f);
    return j.at("plan_hash").get<std::string>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void add_options(CLI::App& sub, Options& o) {
  sub.add_option("--mu", o.mu, "inverse-gamma shape parameter");
  sub.add_option("--seed", o.seed, "master seed");
  sub.add_option("--reps", o.reps, "replica count");
  sub.add_option("--N", o.n_values, "system sizes, comma separated")->delimiter(',');
  sub.add_option("--r", o.r_values, "absolute levels r")->delimiter(',');
  sub.add_option("--ratios", o.ratios, "levels as fractions of N")->delimiter(',');
  sub.add_option("--t", o.t_grid, "tail thresholds in units of N^{1/3}")->delimiter(',');
  sub.add_option("--threads", o.threads, "worker threads (default: machine parallelism)");
  sub.add_option("--out", o.out, "output directory (default: $POLYMER_LAB_OUT)");
  sub.add_option("--rho", o.rho, "boundary parameter of the stationary model");
  sub.add_option("--s", o.s, "sandwich width parameter s");
  sub.add_option("--q0", o.q0, "sandwich parameter q0");
  sub.add_option("--plan", o.plan, "JSON plan file; flags override its values");
  sub.add_flag("--force", o.force, "overwrite results of an identical earlier run");
}

int report_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  json j{{"status", "error"}, {"kind", kind}, {"message", message}};
  err << j.dump() << "\n";
  return code;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo and exact checks for the inverse-gamma directed polymer", "polymer-lab"};
  app.require_subcommand(1);
  Options opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_options(*sub, opts);
    subs[c.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    return report_error(err, "argument", e.what(), kExitUsage);
  }

  const Command* command = nullptr;
  for (const auto& c : commands()) {
    if (subs[c.name]->parsed()) command = &c;
  }
  if (command == nullptr) return report_error(err, "argument", "no subcommand given", kExitUsage);

  SuiteConfig config;
  fs::path root;
  try {
    if (opts.plan) merge_plan_file(*opts.plan, opts, *subs[command->name]);
    config = to_config(opts);
    root = output_root(opts);
  } catch (const UsageError& e) {
    return report_error(err, "plan", e.what(), kExitUsage);
  }

  const json echo = plan_echo(command->name, config);
  const std::string plan_hash = sha256_hex(echo.dump());
  const fs::path manifest_path = root / (command->name + ".manifest.json");
  const fs::path csv_path = root / (command->name + ".csv");
  if (!opts.force && existing_plan_hash(manifest_path) == plan_hash) {
    json j{{"status", "refused"},
           {"kind", "idempotence"},
           {"message", "identical manifest exists; pass --force to overwrite"},
           {"manifest", manifest_path.string()}};
    err << j.dump() << "\n";
    return kExitUsage;
  }

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  SuiteOutcome outcome;
  std::optional<std::string> crash;
  try {
    outcome = command->suite(config);
  } catch (const DomainError& e) {
    return report_error(err, "plan", e.what(), kExitUsage);
  } catch (const GeometryError& e) {
    return report_error(err, "plan", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    crash = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool passed = !crash && outcome.passed();
  const int status = passed ? kExitPass : kExitCheckFailed;

  const std::string body = csv_body(outcome.rows);
  json manifest;
  manifest["schema"] = kManifestSchema;
  manifest["command"] = command->name;
  manifest["version"] = POLYMER_LAB_VERSION;
  manifest["plan"] = echo;
  manifest["plan_hash"] = plan_hash;
  manifest["seed"] = config.seed;
  manifest["threads"] = config.threads;
  manifest["started_at"] = started;
  manifest["finished_at"] = utc_now();
  manifest["wall_seconds"] = wall;
  manifest["exit_status"] = status;
  json checks = json::array();
  json failures = json::array();
  for (const auto& c : outcome.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    if (!c.passed) failures.push_back({{"check", c.name}, {"detail", c.detail}});
  }
  if (crash) failures.push_back({{"check", "run"}, {"detail", *crash}});
  manifest["checks"] = checks;
  manifest["failures"] = failures;
  manifest["results"] = json::array({{{"file", csv_path.filename().string()}, {"body_sha256", sha256_hex(body)}}});
  const std::string manifest_text = manifest.dump(2) + "\n";

  try {
    fs::create_directories(root);
    write_file(manifest_path, manifest_text);
    write_file(csv_path, "# manifest=sha256:" + sha256_hex(manifest_text) + "\r\n" + body);
  } catch (const std::exception& e) {
    return report_error(err, "io", e.what(), kExitUsage);
  }

  for (const auto& c : outcome.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
  json verdict{{"command", command->name},
               {"status", passed ? "pass" : "fail"},
               {"failures", failures},
               {"manifest", manifest_path.string()},
               {"csv", csv_path.string()}};
  out << verdict.dump() << "\n";
  return status;
}

}  // namespace polymer::cli
