#include "stap/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace stap {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ConfigError("key '" + key + "': '" + value + "' is not a number");
  return v;
}

long long to_integer(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError("key '" + key + "': value out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("key '" + key + "': '" + value + "' is not a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(key, item));
  }
  return out;
}

const std::set<std::string>& scenario_keys() {
  static const std::set<std::string> keys{
      "carrier_frequency", "prf",           "platform_velocity", "platform_height",
      "num_elements",      "num_pulses",    "cnr_db",            "jnr_db",
      "jammer_azimuths",   "noise_power",   "target_azimuth",    "target_normalized_doppler",
      "snr_db",            "element_spacing"};
  return keys;
}

const std::set<std::string>& experiment_keys() {
  static const std::set<std::string> keys{"num_trials",      "base_seed",  "snapshot_count", "pfa",
                                          "output_dir",      "threads",    "normalize_power",
                                          "divergence_guard", "pd_min_db", "pd_max_db",      "pd_step_db"};
  return keys;
}

AlgorithmSpec parse_algorithm(const KeyValueFile::Section& section) {
  AlgorithmSpec spec;
  const auto it = section.values.find("name");
  if (it == section.values.end())
    throw ConfigError("[" + section.name + "] section at line " + std::to_string(section.line) +
                      " has no 'name'");
  spec.kind = parse_algorithm_kind(it->second);
  spec.label = std::string(algorithm_kind_name(spec.kind));
  for (const auto& [key, value] : section.values) {
    if (key == "name") continue;
    if (key == "label") spec.label = value;
    else if (key == "step_size") spec.step_size = to_double(key, value);
    else if (key == "forgetting") spec.forgetting = to_double(key, value);
    else if (key == "delta") spec.delta = to_double(key, value);
    else if (key == "loading") spec.loading = to_double(key, value);
    else if (key == "rank") spec.rank = to_int(key, value);
    else if (key == "sets") spec.sets = to_int(key, value);
    else if (key == "retrain_interval") spec.retrain_interval = to_int(key, value);
    else
      throw ConfigError("unknown key '" + key + "' in [" + section.name + "] section at line " +
                        std::to_string(section.line));
  }
  return spec;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

KeyValueFile parse_key_value(std::string_view text) {
  KeyValueFile kv;
  std::map<std::string, std::string>* current = &kv.globals;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      kv.sections.push_back({trim(std::string_view(line).substr(1, line.size() - 2)), {}, line_no});
      current = &kv.sections.back().values;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string_view rest = std::string_view(line).substr(eq + 1);
    // Trailing comment: '#' or ';' preceded by whitespace.
    for (std::size_t i = 1; i < rest.size(); ++i) {
      if ((rest[i] == '#' || rest[i] == ';') && std::isspace(static_cast<unsigned char>(rest[i - 1]))) {
        rest = rest.substr(0, i);
        break;
      }
    }
    std::string value = trim(rest);
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!current->emplace(key, value).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return kv;
}

KeyValueFile read_key_value_file(const std::filesystem::path& path) { return parse_key_value(read_file(path)); }

std::string_view algorithm_kind_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kAbfaSg: return "abfa-sg";
    case AlgorithmKind::kAbfaRls: return "abfa-rls";
    case AlgorithmKind::kFullRankSg: return "full-rank-sg";
    case AlgorithmKind::kFullRankRls: return "full-rank-rls";
    case AlgorithmKind::kSmi: return "smi";
    case AlgorithmKind::kMswf: return "mswf";
    case AlgorithmKind::kAvf: return "avf";
  }
  return "unknown";
}

AlgorithmKind parse_algorithm_kind(std::string_view name) {
  for (auto kind : {AlgorithmKind::kAbfaSg, AlgorithmKind::kAbfaRls, AlgorithmKind::kFullRankSg,
                    AlgorithmKind::kFullRankRls, AlgorithmKind::kSmi, AlgorithmKind::kMswf, AlgorithmKind::kAvf}) {
    if (algorithm_kind_name(kind) == name) return kind;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

void AlgorithmSpec::validate(int full_dimension) const {
  const std::string where = "algorithm '" + label + "': ";
  switch (kind) {
    case AlgorithmKind::kAbfaSg:
    case AlgorithmKind::kAbfaRls:
      if (rank < 1 || full_dimension % rank != 0)
        throw ConfigError(where + "rank must divide M = " + std::to_string(full_dimension));
      if (sets < 1 || sets > full_dimension / rank) throw ConfigError(where + "sets must lie in [1, M/rank]");
      break;
    case AlgorithmKind::kMswf:
      if (rank < 1 || rank > full_dimension) throw ConfigError(where + "rank must lie in [1, M]");
      break;
    case AlgorithmKind::kAvf:
      if (rank < 0 || rank > full_dimension) throw ConfigError(where + "rank must lie in [0, M]");
      break;
    default:
      break;
  }
  if (!(step_size >= 0.0) || !std::isfinite(step_size)) throw ConfigError(where + "step_size must be >= 0");
  if (!(forgetting > 0.0 && forgetting <= 1.0)) throw ConfigError(where + "forgetting must lie in (0, 1]");
  if (!(delta > 0.0)) throw ConfigError(where + "delta must be positive");
  if (!(loading >= 0.0)) throw ConfigError(where + "loading must be >= 0");
  if (retrain_interval < 1) throw ConfigError(where + "retrain_interval must be >= 1");
  if (label.empty() || label.find_first_of(",\n\"") != std::string::npos)
    throw ConfigError(where + "label must be non-empty and CSV-safe");
}

void ExperimentConfig::validate() const {
  scenario.validate();
  if (num_trials < 1) throw ConfigError("num_trials must be >= 1");
  if (snapshot_count < 1) throw ConfigError("snapshot_count must be >= 1");
  if (!(pfa > 0.0 && pfa < 1.0)) throw ConfigError("pfa must lie in (0, 1)");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (!(divergence_guard > 0.0)) throw ConfigError("divergence_guard must be positive");
  if (!(pd_step_db > 0.0) || !(pd_max_db >= pd_min_db)) throw ConfigError("invalid PD grid");
  std::set<std::string> labels;
  for (const auto& a : algorithms) {
    a.validate(scenario.full_dimension());
    if (!labels.insert(a.label).second) throw ConfigError("duplicate algorithm label '" + a.label + "'");
  }
}

ExperimentConfig ExperimentConfig::reference() {
  ExperimentConfig cfg;
  AlgorithmSpec abfa_rls{AlgorithmKind::kAbfaRls, "abfa-rls"};
  AlgorithmSpec abfa_sg{AlgorithmKind::kAbfaSg, "abfa-sg"};
  AlgorithmSpec fr_sg{AlgorithmKind::kFullRankSg, "full-rank-sg"};
  AlgorithmSpec fr_rls{AlgorithmKind::kFullRankRls, "full-rank-rls"};
  AlgorithmSpec mswf{AlgorithmKind::kMswf, "mswf"};
  AlgorithmSpec avf{AlgorithmKind::kAvf, "avf"};
  cfg.algorithms = {abfa_rls, abfa_sg, fr_sg, fr_rls, mswf, avf};
  return cfg;
}

RadarScenario parse_scenario(const KeyValueFile& kv, bool allow_other_keys) {
  RadarScenario sc;
  for (const auto& [key, value] : kv.globals) {
    if (key == "carrier_frequency") sc.carrier_frequency = to_double(key, value);
    else if (key == "prf") sc.prf = to_double(key, value);
    else if (key == "platform_velocity") sc.platform_velocity = to_double(key, value);
    else if (key == "platform_height") sc.platform_height = to_double(key, value);
    else if (key == "num_elements") sc.num_elements = to_int(key, value);
    else if (key == "num_pulses") sc.num_pulses = to_int(key, value);
    else if (key == "cnr_db") sc.cnr_db = to_double(key, value);
    else if (key == "jnr_db") sc.jnr_db = to_double(key, value);
    else if (key == "jammer_azimuths") sc.jammer_azimuths = to_list(key, value);
    else if (key == "noise_power") sc.noise_power = to_double(key, value);
    else if (key == "target_azimuth") sc.target_azimuth = to_double(key, value);
    else if (key == "target_normalized_doppler") sc.target_normalized_doppler = to_double(key, value);
    else if (key == "snr_db") sc.snr_db = to_double(key, value);
    else if (key == "element_spacing") sc.element_spacing = to_double(key, value);
    else if (!allow_other_keys) throw ConfigError("unknown scenario key '" + key + "'");
  }
  sc.validate();
  return sc;
}

RadarScenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_key_value_file(path), /*allow_other_keys=*/true);
}

ExperimentConfig parse_experiment(const KeyValueFile& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv.globals) {
    if (scenario_keys().count(key)) continue;
    if (!experiment_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
    if (key == "num_trials") cfg.num_trials = to_int(key, value);
    else if (key == "base_seed") {
      const char* begin = value.c_str();
      char* end = nullptr;
      errno = 0;
      const unsigned long long v = std::strtoull(begin, &end, 0);
      if (end == begin || *end != '\0' || errno == ERANGE || value.front() == '-')
        throw ConfigError("key 'base_seed': '" + value + "' is not an unsigned 64-bit integer");
      cfg.base_seed = v;
    } else if (key == "snapshot_count") cfg.snapshot_count = to_int(key, value);
    else if (key == "pfa") cfg.pfa = to_double(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "threads") cfg.threads = to_int(key, value);
    else if (key == "normalize_power") cfg.normalize_power = to_bool(key, value);
    else if (key == "divergence_guard") cfg.divergence_guard = to_double(key, value);
    else if (key == "pd_min_db") cfg.pd_min_db = to_double(key, value);
    else if (key == "pd_max_db") cfg.pd_max_db = to_double(key, value);
    else if (key == "pd_step_db") cfg.pd_step_db = to_double(key, value);
  }
  cfg.scenario = parse_scenario(kv, /*allow_other_keys=*/true);
  for (const auto& section : kv.sections) {
    if (section.name != "algorithm")
      throw ConfigError("unknown section [" + section.name + "] at line " + std::to_string(section.line));
    cfg.algorithms.push_back(parse_algorithm(section));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_key_value_file(path));
}

}  // namespace stap
