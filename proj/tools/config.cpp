#include "config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "sadet/types.hpp"

namespace sadet::cli {

Mode mode_from_string(const std::string& name) {
  if (name == "simulate") return Mode::simulate;
  if (name == "detect-sparse") return Mode::detect_sparse;
  if (name == "identify-sparse") return Mode::identify_sparse;
  if (name == "detect-clean") return Mode::detect_clean;
  if (name == "identify-clean") return Mode::identify_clean;
  if (name == "full-pipeline") return Mode::full_pipeline;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string mode_to_string(Mode mode) {
  switch (mode) {
    case Mode::simulate: return "simulate";
    case Mode::detect_sparse: return "detect-sparse";
    case Mode::identify_sparse: return "identify-sparse";
    case Mode::detect_clean: return "detect-clean";
    case Mode::identify_clean: return "identify-clean";
    case Mode::full_pipeline: return "full-pipeline";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

using KeyValues = std::map<std::string, std::string>;

KeyValues read_ini(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataQualityError(path + ": cannot open config file");
  KeyValues kv;
  std::string line;
  std::string section;
  int line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw DataQualityError(path + ":" + std::to_string(line_number) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataQualityError(path + ":" + std::to_string(line_number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw DataQualityError(path + ":" + std::to_string(line_number) + ": empty key");
    kv[section.empty() ? key : section + "." + key] = value;
  }
  return kv;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw DataQualityError("config: " + key + ": expected a number, got '" + value + "'");
  }
}

long long to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw DataQualityError("config: " + key + ": expected an integer, got '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw DataQualityError("config: " + key + ": expected a boolean, got '" + value + "'");
}

Eigen::MatrixXd to_matrix(const std::string& key, const std::string& value,
                          Eigen::Index rows, Eigen::Index cols) {
  std::istringstream ss(value);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(ss >> M(i, j)))
        throw DataQualityError("config: " + key + ": expected " +
                               std::to_string(rows * cols) + " row-major entries");
  double extra = 0.0;
  if (ss >> extra)
    throw DataQualityError("config: " + key + ": too many entries");
  return M;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  const KeyValues kv = read_ini(path);
  RunConfig config;
  std::map<std::string, bool> consumed;
  auto get = [&](const std::string& key) -> const std::string* {
    consumed[key] = true;
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (const auto* v = get("run.mode")) config.mode = mode_from_string(*v);
  if (const auto* v = get("run.seed"))
    config.seed = static_cast<std::uint64_t>(to_int("run.seed", *v));

  if (const auto* v = get("system.preset")) config.system_preset = *v;
  auto param = [&](const std::string& key, double& slot) {
    if (const auto* v = get("system." + key)) slot = to_double("system." + key, *v);
  };
  param("J1", config.three_inertia.J1);
  param("J2", config.three_inertia.J2);
  param("J3", config.three_inertia.J3);
  param("b1", config.three_inertia.b1);
  param("b2", config.three_inertia.b2);
  param("b3", config.three_inertia.b3);
  param("k1", config.three_inertia.k1);
  param("k2", config.three_inertia.k2);
  param("sample_period", config.three_inertia.sample_period);

  const auto* n = get("system.n");
  const auto* m = get("system.m");
  const auto* p = get("system.p");
  if (n || m || p) {
    if (!(n && m && p))
      throw DataQualityError("config: inline systems need all of system.n/m/p");
    const auto nn = to_int("system.n", *n);
    const auto mm = to_int("system.m", *m);
    const auto pp = to_int("system.p", *p);
    const auto* a = get("system.a");
    const auto* b = get("system.b");
    const auto* c = get("system.c");
    if (!(a && b && c))
      throw DataQualityError("config: inline systems need all of system.a/b/c");
    config.inline_system = InlineSystem{to_matrix("system.a", *a, nn, nn),
                                        to_matrix("system.b", *b, nn, mm),
                                        to_matrix("system.c", *c, pp, nn)};
    config.system_preset.clear();
  }

  if (const auto* v = get("input.length"))
    config.length = static_cast<int>(to_int("input.length", *v));
  if (const auto* v = get("input.amplitude"))
    config.input_amplitude = to_double("input.amplitude", *v);
  if (const auto* v = get("input.omega")) config.input_omega = to_double("input.omega", *v);
  if (const auto* v = get("input.noise_std"))
    config.noise_std = to_double("input.noise_std", *v);

  if (const auto* v = get("attack.preset")) config.attack_preset = *v;

  if (const auto* v = get("detector.q"))
    config.detector.q = static_cast<int>(to_int("detector.q", *v));
  if (const auto* v = get("detector.l"))
    config.detector.l = static_cast<int>(to_int("detector.l", *v));
  if (const auto* v = get("detector.n_bound"))
    config.detector.n_bound = static_cast<int>(to_int("detector.n_bound", *v));
  if (const auto* v = get("detector.rank_tol"))
    config.detector.rank_tol = linalg::RankTolerance::relative(to_double("detector.rank_tol", *v));
  if (const auto* v = get("detector.rank_tol_abs"))
    config.detector.rank_tol = linalg::RankTolerance::absolute(to_double("detector.rank_tol_abs", *v));
  if (const auto* v = get("detector.residual_eps"))
    config.detector.residual_eps = to_double("detector.residual_eps", *v);
  if (const auto* v = get("detector.parallel"))
    config.detector.parallel = to_bool("detector.parallel", *v);
  if (const auto* v = get("detector.t_star"))
    config.detector.t_star = static_cast<int>(to_int("detector.t_star", *v));

  if (const auto* v = get("io.data")) config.data_path = *v;
  if (const auto* v = get("io.out")) config.out_dir = *v;
  if (const auto* v = get("io.plotdata"))
    config.emit_plotdata = to_bool("io.plotdata", *v);

  for (const auto& [key, value] : kv)
    if (!consumed.count(key))
      throw DataQualityError("config: unknown key '" + key + "'");
  return config;
}

std::string RunConfig::canonical_dump() const {
  std::ostringstream out;
  out.precision(17);
  out << "mode=" << mode_to_string(mode) << "\nseed=" << seed
      << "\nsystem=" << system_preset;
  if (inline_system) {
    out << "\ninline.A=" << inline_system->A.format(Eigen::IOFormat(17))
        << "\ninline.B=" << inline_system->B.format(Eigen::IOFormat(17))
        << "\ninline.C=" << inline_system->C.format(Eigen::IOFormat(17));
  }
  out << "\nJ=" << three_inertia.J1 << "," << three_inertia.J2 << "," << three_inertia.J3
      << "\nb=" << three_inertia.b1 << "," << three_inertia.b2 << "," << three_inertia.b3
      << "\nk=" << three_inertia.k1 << "," << three_inertia.k2
      << "\nTs=" << three_inertia.sample_period << "\nlength=" << length
      << "\namplitude=" << input_amplitude << "\nomega=" << input_omega
      << "\nnoise_std=" << noise_std << "\nattack=" << attack_preset
      << "\nq=" << detector.q << "\nl=" << detector.l << "\nn_bound=" << detector.n_bound
      << "\nrank_tol_mode="
      << (detector.rank_tol.mode == linalg::RankTolerance::Mode::relative ? "relative"
                                                                          : "absolute")
      << "\nrank_tol=" << detector.rank_tol.value
      << "\nresidual_eps=" << detector.residual_eps << "\nparallel=" << detector.parallel
      << "\nt_star=" << detector.t_star << "\ndata=" << data_path << "\n";
  return out.str();
}

std::string config_digest(const RunConfig& config) {
  const std::string dump = config.canonical_dump();
  std::uint64_t hash = 1469598103934665603ull;
  for (const unsigned char c : dump) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace sadet::cli
