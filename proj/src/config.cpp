#include "qpent/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qpent {

SamplerConfig RunConfig::sampler_config() const {
  SamplerConfig sc;
  sc.rng_seed = rng_seed;
  sc.q_values = q_values;
  sc.charge_range = charge_range;
  sc.modulus_band = {modulus_band_lo, modulus_band_hi};
  sc.pole_margin = pole_margin;
  return sc;
}

BaileySamplerConfig RunConfig::bailey_sampler_config() const {
  BaileySamplerConfig bc;
  bc.q = bailey_q;
  bc.band = {bailey_s_lo, bailey_s_hi, bailey_t_lo, bailey_t_hi,
             bailey_u_lo, bailey_u_hi, bailey_w_lo, bailey_w_hi};
  bc.charge_range = bailey_charge_range;
  bc.compound_cap = bailey_compound_cap;
  bc.pole_margin = pole_margin;
  bc.force_charges = bailey_force_charges;
  bc.n_t = bailey_n_t;
  bc.n_s = bailey_n_s;
  bc.n_u = bailey_n_u;
  return bc;
}

CheckOptions RunConfig::check_options() const {
  CheckOptions co;
  co.grid_n = grid_n;
  co.m_max = m_max;
  co.tolerance = tolerance;
  co.safety_factor = safety_factor;
  co.policy = truncation_policy();
  co.tail_acceleration = tail_acceleration;
  return co;
}

TruncationPolicy RunConfig::truncation_policy() const {
  return {max_terms, target_tail};
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for key '" + key + "': '" +
                      value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer value for key '" + key + "': '" +
                      value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("invalid unsigned value for key '" + key + "': '" +
                      value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean value for key '" + key + "': '" + value +
                    "'");
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string v = trim(item);
    if (v.empty()) {
      throw ConfigError("empty element in list for key '" + key + "'");
    }
    out.push_back(parse_double(key, v));
  }
  if (out.empty()) {
    throw ConfigError("empty list for key '" + key + "'");
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct KeyEntry {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, KeyEntry>& key_table() {
  static const std::map<std::string, KeyEntry> table = [] {
    std::map<std::string, KeyEntry> t;
    const auto dbl = [&t](const std::string& key, double RunConfig::*field) {
      t[key] = {[key, field](RunConfig& c, const std::string& v) {
                  c.*field = parse_double(key, v);
                },
                [field](const RunConfig& c) { return fmt_double(c.*field); }};
    };
    const auto integer = [&t](const std::string& key, int RunConfig::*field) {
      t[key] = {[key, field](RunConfig& c, const std::string& v) {
                  c.*field = static_cast<int>(parse_long(key, v));
                },
                [field](const RunConfig& c) { return std::to_string(c.*field); }};
    };

    t["rng_seed"] = {[](RunConfig& c, const std::string& v) {
                       c.rng_seed = parse_u64("rng_seed", v);
                     },
                     [](const RunConfig& c) { return std::to_string(c.rng_seed); }};
    t["q_values"] = {[](RunConfig& c, const std::string& v) {
                       c.q_values = parse_double_list("q_values", v);
                     },
                     [](const RunConfig& c) {
                       std::string s;
                       for (std::size_t i = 0; i < c.q_values.size(); ++i) {
                         if (i) s += ",";
                         s += fmt_double(c.q_values[i]);
                       }
                       return s;
                     }};
    integer("charge_range", &RunConfig::charge_range);
    dbl("modulus_band_lo", &RunConfig::modulus_band_lo);
    dbl("modulus_band_hi", &RunConfig::modulus_band_hi);
    dbl("pole_margin", &RunConfig::pole_margin);
    integer("n_instances", &RunConfig::n_instances);
    integer("grid_n", &RunConfig::grid_n);
    integer("m_max", &RunConfig::m_max);
    integer("max_terms", &RunConfig::max_terms);
    dbl("target_tail", &RunConfig::target_tail);
    dbl("tolerance", &RunConfig::tolerance);
    dbl("agreement_tolerance", &RunConfig::agreement_tolerance);
    dbl("safety_factor", &RunConfig::safety_factor);
    t["tail_acceleration"] = {
        [](RunConfig& c, const std::string& v) {
          c.tail_acceleration = parse_bool("tail_acceleration", v);
        },
        [](const RunConfig& c) {
          return c.tail_acceleration ? std::string("true")
                                     : std::string("false");
        }};
    integer("bailey_pairs", &RunConfig::bailey_pairs);
    dbl("bailey_q", &RunConfig::bailey_q);
    integer("bailey_grid_n", &RunConfig::bailey_grid_n);
    integer("bailey_m_max", &RunConfig::bailey_m_max);
    dbl("bailey_tolerance", &RunConfig::bailey_tolerance);
    integer("bailey_charge_range", &RunConfig::bailey_charge_range);
    dbl("bailey_s_lo", &RunConfig::bailey_s_lo);
    dbl("bailey_s_hi", &RunConfig::bailey_s_hi);
    dbl("bailey_t_lo", &RunConfig::bailey_t_lo);
    dbl("bailey_t_hi", &RunConfig::bailey_t_hi);
    dbl("bailey_u_lo", &RunConfig::bailey_u_lo);
    dbl("bailey_u_hi", &RunConfig::bailey_u_hi);
    dbl("bailey_w_lo", &RunConfig::bailey_w_lo);
    dbl("bailey_w_hi", &RunConfig::bailey_w_hi);
    dbl("bailey_compound_cap", &RunConfig::bailey_compound_cap);
    const auto forced = [&t](const std::string& key, long RunConfig::*field) {
      t[key] = {[key, field](RunConfig& c, const std::string& v) {
                  c.*field = parse_long(key, v);
                  c.bailey_force_charges = true;
                },
                [field](const RunConfig& c) { return std::to_string(c.*field); }};
    };
    forced("bailey_n_t", &RunConfig::bailey_n_t);
    forced("bailey_n_s", &RunConfig::bailey_n_s);
    forced("bailey_n_u", &RunConfig::bailey_n_u);
    return t;
  }();
  return table;
}

}  // namespace

void apply_config_key(RunConfig& cfg, const std::string& key,
                      const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
  it->second.set(cfg, value);
}

void validate_config(const RunConfig& cfg) {
  const auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) {
      throw ConfigError(std::string("key '") + key + "' must be positive");
    }
  };
  if (cfg.q_values.empty()) throw ConfigError("key 'q_values' must be non-empty");
  for (const double q : cfg.q_values) {
    if (!(q > 0.0 && q < 1.0)) {
      throw ConfigError("key 'q_values' entries must lie in (0, 1)");
    }
  }
  if (cfg.charge_range < 0) {
    throw ConfigError("key 'charge_range' must be >= 0");
  }
  if (!(cfg.modulus_band_lo > 0.0 &&
        cfg.modulus_band_lo < cfg.modulus_band_hi)) {
    throw ConfigError(
        "keys 'modulus_band_lo' < 'modulus_band_hi' must be positive and "
        "ordered");
  }
  positive(cfg.pole_margin, "pole_margin");
  if (cfg.n_instances < 1) throw ConfigError("key 'n_instances' must be >= 1");
  if (cfg.grid_n < 2) throw ConfigError("key 'grid_n' must be >= 2");
  if (cfg.m_max < 0) throw ConfigError("key 'm_max' must be >= 0");
  if (cfg.max_terms < 1) throw ConfigError("key 'max_terms' must be >= 1");
  positive(cfg.target_tail, "target_tail");
  positive(cfg.tolerance, "tolerance");
  positive(cfg.agreement_tolerance, "agreement_tolerance");
  positive(cfg.safety_factor, "safety_factor");
  if (cfg.bailey_pairs < 1) throw ConfigError("key 'bailey_pairs' must be >= 1");
  if (!(cfg.bailey_q > 0.0 && cfg.bailey_q < 1.0)) {
    throw ConfigError("key 'bailey_q' must lie in (0, 1)");
  }
  if (cfg.bailey_grid_n < 2) throw ConfigError("key 'bailey_grid_n' must be >= 2");
  if (cfg.bailey_m_max < 0) throw ConfigError("key 'bailey_m_max' must be >= 0");
  positive(cfg.bailey_tolerance, "bailey_tolerance");
  if (cfg.bailey_charge_range < 0) {
    throw ConfigError("key 'bailey_charge_range' must be >= 0");
  }
  const auto band = [](double lo, double hi, const char* what) {
    if (!(lo > 0.0 && lo <= hi)) {
      throw ConfigError(std::string("keys '") + what +
                        "_lo/_hi' must be positive and ordered");
    }
  };
  band(cfg.bailey_s_lo, cfg.bailey_s_hi, "bailey_s");
  band(cfg.bailey_t_lo, cfg.bailey_t_hi, "bailey_t");
  band(cfg.bailey_u_lo, cfg.bailey_u_hi, "bailey_u");
  band(cfg.bailey_w_lo, cfg.bailey_w_hi, "bailey_w");
  positive(cfg.bailey_compound_cap, "bailey_compound_cap");
  if (cfg.bailey_force_charges &&
      cfg.bailey_n_t + cfg.bailey_n_s + cfg.bailey_n_u != 0) {
    throw ConfigError(
        "keys 'bailey_n_t' + 'bailey_n_s' + 'bailey_n_u' must sum to zero, "
        "got " +
        std::to_string(cfg.bailey_n_t + cfg.bailey_n_s + cfg.bailey_n_u));
  }
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;

  // Environment layer.
  for (const auto& [key, entry] : key_table()) {
    std::string env_key = "QPENT_";
    for (const char c : key) {
      env_key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (const char* v = std::getenv(env_key.c_str())) {
      entry.set(cfg, trim(v));
    }
  }

  // File layer.
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) {
      throw ConfigError("cannot open config file '" + path + "'");
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string stripped = trim(line);
      if (stripped.empty()) continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config file '" + path + "' line " +
                          std::to_string(line_no) +
                          ": expected key = value, got '" + stripped + "'");
      }
      const std::string key = trim(stripped.substr(0, eq));
      const std::string value = trim(stripped.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError("config file '" + path + "' line " +
                          std::to_string(line_no) + ": empty key");
      }
      apply_config_key(cfg, key, value);
    }
  }

  validate_config(cfg);
  return cfg;
}

std::string canonical_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, entry] : key_table()) {
    out += key;
    out += " = ";
    out += entry.get(cfg);
    out += "\n";
  }
  out += "bailey_force_charges = ";
  out += cfg.bailey_force_charges ? "true" : "false";
  out += "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace qpent
