#include "seirssp/errors.hpp"
#include "seirssp/experiments.hpp"
#include "seirssp/integrators.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace seirssp {

namespace {

constexpr std::string_view kDefaultConfig = R"(# rates
mu = 0.05
sigma = 0.25
gamma = 0.1867
delta = 0.011

# force of infection
incidence = media
beta = 1
c1 = 1
c2 = 1
k = 2
nu = 0.0115
eta = 0.001

# recruitment
recruitment = choiceC
kappa = 0.05
table_recruitments = choiceA,choiceB,choiceC
convergence_recruitment = choiceA

methods = euler,ssprk22,ssprk33,ssprk104

# initial state
s0 = 0.2
e0 = 0.6
i0 = 0.2
r0 = 0

tf_table = 1000
tf_simulate = 30
tf_convergence = 1000
convergence_output_dt = 10
bisect_tol = 1e-4

out_dir = .
)";

const std::vector<std::string_view>& known_keys() {
  static const std::vector<std::string_view> keys = {
      "mu",          "sigma",         "gamma",          "delta",
      "incidence",   "beta",          "c1",             "c2",
      "k",           "nu",            "eta",            "recruitment",
      "kappa",       "table_recruitments", "convergence_recruitment",
      "methods",     "s0",            "e0",             "i0",
      "r0",          "tf_table",      "tf_simulate",    "tf_convergence",
      "convergence_output_dt",        "bisect_tol",     "out_dir"};
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

using KeyMap = std::map<std::string, std::string, std::less<>>;

KeyMap parse_pairs(std::string_view text) {
  KeyMap out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    bool known = false;
    for (auto k : known_keys()) known = known || k == key;
    if (!known) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!out.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

double as_double(const KeyMap& m, std::string_view key) {
  const std::string& v = m.find(key)->second;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": not a number: '" + v + "'");
  }
  return out;
}

std::vector<std::string> as_list(const KeyMap& m, std::string_view key) {
  std::vector<std::string> out;
  std::string_view v = m.find(key)->second;
  while (true) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (item.empty()) throw ConfigError(std::string(key) + ": empty list item");
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    v = v.substr(comma + 1);
  }
  return out;
}

ExperimentConfig from_map(const KeyMap& m) {
  for (auto k : known_keys()) {
    if (m.find(k) == m.end()) throw ConfigError("missing key '" + std::string(k) + "'");
  }
  ExperimentConfig c;
  c.params = {as_double(m, "mu"), as_double(m, "sigma"), as_double(m, "gamma"),
              as_double(m, "delta")};
  c.incidence = m.find("incidence")->second;
  c.incidence_params = {as_double(m, "beta"), as_double(m, "c1"), as_double(m, "c2"),
                        as_double(m, "k"),    as_double(m, "nu"), as_double(m, "eta")};
  c.recruitment = m.find("recruitment")->second;
  c.kappa = as_double(m, "kappa");
  c.table_recruitments = as_list(m, "table_recruitments");
  c.convergence_recruitment = m.find("convergence_recruitment")->second;
  c.methods = as_list(m, "methods");
  c.s0 = as_double(m, "s0");
  c.e0 = as_double(m, "e0");
  c.i0 = as_double(m, "i0");
  c.r0 = as_double(m, "r0");
  c.tf_table = as_double(m, "tf_table");
  c.tf_simulate = as_double(m, "tf_simulate");
  c.tf_convergence = as_double(m, "tf_convergence");
  c.convergence_output_dt = as_double(m, "convergence_output_dt");
  c.bisect_tol = as_double(m, "bisect_tol");
  c.out_dir = m.find("out_dir")->second;

  // Surface bad keys and values at load time rather than mid-run.
  try {
    c.params.validate();
    (void)c.model();
    (void)c.model_with(c.convergence_recruitment);
    for (const auto& r : c.table_recruitments) (void)c.model_with(r);
    for (const auto& name : c.methods) (void)builtin_method(name);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!c.initial_state().admissible()) throw ConfigError("initial state must be non-negative");
  for (double t : {c.tf_table, c.tf_simulate, c.tf_convergence}) {
    if (!(t > 0.0)) throw ConfigError("final times must be positive");
  }
  if (!(c.bisect_tol > 0.0)) throw ConfigError("bisect_tol must be positive");
  if (!(c.convergence_output_dt > 0.0)) throw ConfigError("convergence_output_dt must be positive");
  return c;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? "," : "") + items[k];
  return out;
}

}  // namespace

Model ExperimentConfig::model_with(std::string_view recruitment_key) const {
  return Model{params, incidence_from_key(incidence, incidence_params),
               recruitment_from_key(recruitment_key, kappa)};
}

std::string_view default_config_text() { return kDefaultConfig; }

ExperimentConfig parse_config(std::string_view text) { return from_map(parse_pairs(text)); }

ExperimentConfig parse_config_overlay(std::string_view text) {
  KeyMap merged = parse_pairs(kDefaultConfig);
  for (auto& [k, v] : parse_pairs(text)) merged[k] = v;
  return from_map(merged);
}

ExperimentConfig default_config() { return parse_config(kDefaultConfig); }

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_overlay(buf.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream os;
  const auto put = [&](std::string_view k, double v) { os << k << " = " << format_double(v) << '\n'; };
  put("mu", c.params.mu);
  put("sigma", c.params.sigma);
  put("gamma", c.params.gamma);
  put("delta", c.params.delta);
  os << "incidence = " << c.incidence << '\n';
  put("beta", c.incidence_params.beta);
  put("c1", c.incidence_params.c1);
  put("c2", c.incidence_params.c2);
  put("k", c.incidence_params.k);
  put("nu", c.incidence_params.nu);
  put("eta", c.incidence_params.eta);
  os << "recruitment = " << c.recruitment << '\n';
  put("kappa", c.kappa);
  os << "table_recruitments = " << join(c.table_recruitments) << '\n';
  os << "convergence_recruitment = " << c.convergence_recruitment << '\n';
  os << "methods = " << join(c.methods) << '\n';
  put("s0", c.s0);
  put("e0", c.e0);
  put("i0", c.i0);
  put("r0", c.r0);
  put("tf_table", c.tf_table);
  put("tf_simulate", c.tf_simulate);
  put("tf_convergence", c.tf_convergence);
  put("convergence_output_dt", c.convergence_output_dt);
  put("bisect_tol", c.bisect_tol);
  os << "out_dir = " << c.out_dir << '\n';
  return os.str();
}

}  // namespace seirssp
