#include "core/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "core/errors.hpp"

namespace radbif {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d{
      {"model.name", "reference"},
      {"grid.N", "3"},
      {"grid.R", "1"},
      {"grid.M", "512"},
      {"newton.tol", "1e-10"},
      {"newton.max_iter", "50"},
      {"cont.ds0", "0.01"},
      {"cont.ds_min", "1e-8"},
      {"cont.ds_max", "0.5"},
      {"cont.eps_step_off", "1e-3"},
      {"cont.lambda_stop_low", "1e-3"},
      {"cont.max_points", "2000"},
      {"out.dir", "out"},
  };
  return d;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && !text.empty() && std::isfinite(v), ErrorCode::Config,
          "config: '" + key + "' expects a number, got '" + text + "'");
  return v;
}

}  // namespace

const std::vector<std::string>& RunConfig::valid_keys() {
  static const std::vector<std::string> keys{
      "model.name", "model.coeffs1", "model.coeffs2", "model.p1",       "model.p2",
      "model.b1",   "model.b2",      "model.nu1",     "model.nu2",      "model.K",
      "grid.N",     "grid.R",        "grid.M",        "newton.tol",     "newton.max_iter",
      "cont.ds0",   "cont.ds_min",   "cont.ds_max",   "cont.eps_step_off", "cont.lambda_stop_low",
      "cont.max_points", "out.dir"};
  return keys;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    std::istringstream words(item);
    std::string w;
    while (words >> w) out.push_back(parse_double("coefficient list", w));
  }
  return out;
}

RunConfig::RunConfig() : values_(defaults()) {}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::Config,
            "config line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Config, "config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos, ErrorCode::Config, "override '" + assignment + "' is not key=value");
  set(strip(assignment.substr(0, eq)), strip(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = valid_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    std::string msg = "config: unknown key '" + key + "'; valid keys:";
    for (const auto& k : keys) msg += " " + k;
    throw Error(ErrorCode::Config, msg);
  }
  values_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

double RunConfig::number(const std::string& key) const { return parse_double(key, values_.at(key)); }

int RunConfig::integer(const std::string& key) const {
  const double v = number(key);
  require(v == std::floor(v) && std::abs(v) < 1e9, ErrorCode::Config, "config: '" + key + "' must be an integer");
  return static_cast<int>(v);
}

NonlinearityModel RunConfig::model() const {
  GrowthParameters overrides;
  const std::pair<const char*, double GrowthParameters::*> fields[] = {
      {"model.p1", &GrowthParameters::p1}, {"model.p2", &GrowthParameters::p2},
      {"model.b1", &GrowthParameters::b1}, {"model.b2", &GrowthParameters::b2},
      {"model.nu1", &GrowthParameters::nu1}, {"model.nu2", &GrowthParameters::nu2},
      {"model.K", &GrowthParameters::K}};
  for (const auto& [key, field] : fields) {
    if (!has(key)) continue;
    const double v = number(key);
    require(v > 0.0, ErrorCode::Config, std::string("config: '") + key + "' must be positive");
    overrides.*field = v;
  }

  const bool has1 = has("model.coeffs1"), has2 = has("model.coeffs2");
  require(has1 == has2, ErrorCode::Config, "config: model.coeffs1 and model.coeffs2 must be given together");
  std::vector<double> c1, c2;
  double builtin_k = 0.0;
  std::string name = values_.at("model.name");
  if (has1) {
    c1 = parse_number_list(values_.at("model.coeffs1"));
    c2 = parse_number_list(values_.at("model.coeffs2"));
    if (name == "reference") name = "polynomial";
  } else if (name == "reference") {
    c1 = {1.0, -1.0, 1.0};
    c2 = {1.0, 0.5};
    builtin_k = 0.75;
  } else if (name == "left") {
    c1 = {1.0, 1.0};
    c2 = {1.0, 1.0};
    builtin_k = 1.0;
  } else if (name == "linear") {
    c1 = {1.0};
    c2 = {1.0};
    builtin_k = 1.0;
  } else {
    throw Error(ErrorCode::Config, "config: unknown model.name '" + name +
                                       "' (builtins: reference, left, linear; or give model.coeffs1/coeffs2)");
  }
  require(!c1.empty() && !c2.empty() && c1[0] > 0.0 && c2[0] > 0.0, ErrorCode::Config,
          "config: polynomial models need a positive linear coefficient a1");
  if (overrides.K == 0.0) overrides.K = builtin_k;
  return NonlinearityModel::from_coefficients(c1, c2, overrides, name);
}

RadialGrid RunConfig::grid() const { return {integer("grid.N"), number("grid.R"), integer("grid.M")}; }

NewtonConfig RunConfig::newton() const {
  NewtonConfig n;
  n.tol_residual = number("newton.tol");
  n.max_iter = integer("newton.max_iter");
  require(n.tol_residual > 0.0 && n.max_iter >= 1, ErrorCode::Config, "config: newton.tol > 0, newton.max_iter >= 1");
  return n;
}

ContinuationConfig RunConfig::continuation() const {
  ContinuationConfig c;
  c.ds0 = number("cont.ds0");
  c.ds_min = number("cont.ds_min");
  c.ds_max = number("cont.ds_max");
  c.eps_step_off = number("cont.eps_step_off");
  c.lambda_stop_low = number("cont.lambda_stop_low");
  c.max_points = integer("cont.max_points");
  c.newton = newton();
  return c;
}

std::string RunConfig::out_dir() const { return values_.at("out.dir"); }

std::string RunConfig::canonical_text() const {
  std::string text;
  for (const auto& [k, v] : values_) {
    if (k != "out.dir") text += k + "=" + v + "\n";
  }
  return text;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_text()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace radbif
