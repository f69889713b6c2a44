// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>

namespace iwf {
namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string qualified(std::string_view section, std::string_view key) {
  return std::string(section) + "." + std::string(key);
}

double parse_double(std::string_view token, const std::string& where) {
  std::string buf(token);
  if (buf == "inf" || buf == "+inf" || buf == "unbounded") return kUnbounded;
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE || std::isnan(v)) {
    throw ConfigError(where + ": '" + buf + "' is not a number");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view token, const std::string& where) {
  std::string buf(trim(token));
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(buf.c_str(), &end, 10);
  if (buf.empty() || buf[0] == '-' || end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw ConfigError(where + ": '" + buf + "' is not a nonnegative integer");
  }
  return v;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<double> parse_numbers(std::string_view value, const std::string& where) {
  std::vector<double> out;
  for (const auto& tok : split_list(value)) out.push_back(parse_double(tok, where));
  return out;
}

// `count` values, or a single value broadcast to `count`.
std::vector<double> parse_broadcast(std::string_view value, std::size_t count,
                                    const std::string& where) {
  auto v = parse_numbers(value, where);
  if (v.size() == 1) return std::vector<double>(count, v.front());
  if (v.size() != count) {
    throw ConfigError(where + ": expected 1 or " + std::to_string(count) + " values, got " +
                      std::to_string(v.size()));
  }
  return v;
}

std::string join_numbers(std::span<const double> values) {
  std::string out;
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    if (idx) out += ' ';
    out += format_double(values[idx]);
  }
  return out;
}

// Single value when all entries agree, else the full list.
std::string join_compact(std::span<const double> values) {
  if (!values.empty() &&
      std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    return format_double(values[0]);
  }
  return join_numbers(values);
}

const std::set<std::string>& allowed_keys(const std::string& section) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name"}},
      {"network",
       {"users", "channels", "generator", "generator_seed", "noise", "budget", "mask"}},
      {"noise", {"kind", "ier_db", "variance", "decay_exponent", "scale", "seed"}},
      {"algorithms", {"list", "riwf.lambda", "aiwf.schedule", "aiwf.gamma", "aiwf.a", "aiwf.b"}},
      {"run", {"max_iters", "tol", "window", "decimation", "start", "reference"}},
      {"output", {"dir", "prefix"}},
  };
  auto it = keys.find(section);
  if (it == keys.end()) throw ConfigError("unknown section [" + section + "]");
  return it->second;
}

bool is_gain_key(std::string_view key) {
  if (key.substr(0, 5) != "gain.") return false;
  auto digits = key.substr(5);
  return !digits.empty() &&
         std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void check_keys(const ConfigDocument& doc) {
  for (const auto& [section, entries] : doc.sections()) {
    const auto& allowed = allowed_keys(section);
    for (const auto& [key, value] : entries) {
      if (allowed.count(key) == 0 && !(section == "network" && is_gain_key(key))) {
        throw ConfigError("unknown key '" + qualified(section, key) + "'");
      }
    }
  }
}

class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  std::optional<std::string> get(std::string_view section, std::string_view key) const {
    return doc_.get(section, key);
  }
  std::string require(std::string_view section, std::string_view key) const {
    auto v = doc_.get(section, key);
    if (!v) throw ConfigError("missing key '" + qualified(section, key) + "'");
    return *v;
  }
  double number(std::string_view section, std::string_view key, double fallback) const {
    auto v = doc_.get(section, key);
    return v ? parse_double(trim(*v), qualified(section, key)) : fallback;
  }
  std::uint64_t integer(std::string_view section, std::string_view key,
                        std::uint64_t fallback) const {
    auto v = doc_.get(section, key);
    return v ? parse_unsigned(*v, qualified(section, key)) : fallback;
  }

 private:
  const ConfigDocument& doc_;
};

Matrix parse_matrix(const Reader& r, std::string_view key, std::size_t rows,
                    std::size_t cols, std::optional<double> fallback) {
  auto v = r.get("network", key);
  if (!v) {
    if (!fallback) throw ConfigError("missing key '" + qualified("network", key) + "'");
    return Matrix(rows, cols, *fallback);
  }
  return Matrix(rows, cols, parse_broadcast(*v, rows * cols, qualified("network", key)));
}

NetworkModel read_network(const Reader& r, NetworkSource& source) {
  const std::size_t n = r.integer("network", "users", 0);
  const std::size_t kk = r.integer("network", "channels", 0);
  if (n == 0 || kk == 0) throw ConfigError("network.users and network.channels must be >= 1");
  const std::string generator = std::string(trim(r.get("network", "generator").value_or("inline")));

  if (generator == "random-weak") {
    for (const auto* key : {"noise"}) {
      if (r.get("network", key)) {
        throw ConfigError("network." + std::string(key) + " conflicts with generator = random-weak");
      }
    }
    source.kind = NetworkSource::Kind::kRandomWeak;
    source.seed = r.integer("network", "generator_seed", 1);
    source.mask = r.number("network", "mask", kUnbounded);
    const double budget = r.number("network", "budget", 10.0);
    return random_weak_network(n, kk, source.seed, source.mask, budget);
  }
  if (generator != "inline") {
    throw ConfigError("network.generator: unknown generator '" + generator + "'");
  }
  if (r.get("network", "generator_seed")) {
    throw ConfigError("network.generator_seed needs generator = random-weak");
  }

  source = {};
  std::vector<double> gain(n * n * kk);
  for (std::size_t k = 0; k < kk; ++k) {
    const std::string key = "gain." + std::to_string(k);
    auto values = parse_numbers(r.require("network", key), qualified("network", key));
    if (values.size() != n * n) {
      throw ConfigError("network." + key + ": expected " + std::to_string(n * n) + " values");
    }
    for (std::size_t tx = 0; tx < n; ++tx) {
      for (std::size_t rx = 0; rx < n; ++rx) {
        gain[(tx * n + rx) * kk + k] = values[tx * n + rx];
      }
    }
  }
  Matrix noise = parse_matrix(r, "noise", n, kk, std::nullopt);
  auto budget_text = r.require("network", "budget");
  auto budget = parse_broadcast(budget_text, n, "network.budget");
  Matrix mask = parse_matrix(r, "mask", n, kk, kUnbounded);
  return NetworkModel(n, kk, std::move(gain), std::move(noise), std::move(budget),
                      std::move(mask));
}

NoiseModel read_noise(const Reader& r, std::size_t n, std::size_t kk) {
  NoiseModel m;
  m.kind = parse_noise_kind(trim(r.get("noise", "kind").value_or("none")));
  m.ier_db = r.number("noise", "ier_db", m.ier_db);
  m.decay_exponent = r.number("noise", "decay_exponent",
                              m.kind == NoiseKind::kSummable ? 0.5 : m.decay_exponent);
  m.scale = r.number("noise", "scale", m.scale);
  m.seed = r.integer("noise", "seed", 0);
  if (auto v = r.get("noise", "variance")) {
    m.variance = Matrix(n, kk, parse_broadcast(*v, n * kk, "noise.variance"));
  } else if (m.kind == NoiseKind::kGaussianFixedVariance) {
    throw ConfigError("missing key 'noise.variance'");
  }
  return m;
}

std::vector<Algorithm> read_algorithms(const Reader& r) {
  auto items = split_list(r.get("algorithms", "list").value_or("iwf aiwf"));
  if (items.empty()) throw ConfigError("algorithms.list is empty");
  std::vector<double> lambdas = {0.5};
  if (auto v = r.get("algorithms", "riwf.lambda")) {
    lambdas = parse_numbers(*v, "algorithms.riwf.lambda");
    if (lambdas.empty()) throw ConfigError("algorithms.riwf.lambda is empty");
  }
  std::vector<std::string> schedules = {"harmonic"};
  if (auto v = r.get("algorithms", "aiwf.schedule")) schedules = split_list(*v);
  const double gamma = r.number("algorithms", "aiwf.gamma", 1.0);
  const double a = r.number("algorithms", "aiwf.a", 1.0);
  const double b = r.number("algorithms", "aiwf.b", 1.0);

  auto make_schedule = [&](const std::string& name) {
    ScheduleKind kind;
    try {
      kind = parse_schedule_kind(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("algorithms.aiwf.schedule: ") + e.what());
    }
    if (kind == ScheduleKind::kPowerDecay) return StepSizeSchedule::power_decay(a, b, gamma);
    if (kind == ScheduleKind::kHarmonic) return StepSizeSchedule::harmonic();
    throw ConfigError("algorithms.aiwf.schedule: aiwf cannot use a constant schedule");
  };

  std::vector<Algorithm> out;
  for (const auto& item : items) {
    const auto colon = item.find(':');
    const std::string head = item.substr(0, colon);
    const std::optional<std::string> param =
        colon == std::string::npos ? std::nullopt : std::optional(item.substr(colon + 1));
    AlgorithmKind kind;
    try {
      kind = parse_algorithm_kind(head);
    } catch (const std::invalid_argument&) {
      throw ConfigError("algorithms.list: unknown algorithm '" + item + "'");
    }
    switch (kind) {
      case AlgorithmKind::kIwf:
        if (param) throw ConfigError("algorithms.list: iwf takes no parameter");
        out.push_back(Algorithm::iwf());
        break;
      case AlgorithmKind::kRiwf:
        if (param) {
          out.push_back(Algorithm::riwf(parse_double(*param, "algorithms.list")));
        } else {
          for (double lambda : lambdas) out.push_back(Algorithm::riwf(lambda));
        }
        break;
      case AlgorithmKind::kAiwf:
        if (param) {
          out.push_back(Algorithm::aiwf(make_schedule(*param)));
        } else {
          for (const auto& s : schedules) out.push_back(Algorithm::aiwf(make_schedule(s)));
        }
        break;
    }
  }
  return out;
}

std::optional<PowerProfile> read_profile(const Reader& r, std::string_view key,
                                         std::string_view keyword, std::size_t n,
                                         std::size_t kk) {
  auto v = r.get("run", key);
  if (!v) return std::nullopt;
  auto text = trim(*v);
  if (text == keyword || text == "none") return std::nullopt;
  return PowerProfile(Matrix(n, kk, parse_numbers(text, qualified("run", key))));
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (current.empty()) throw ConfigError(where + ": empty section name");
      for (const auto& [name, entries] : doc.sections_) {
        if (name == current) throw ConfigError(where + ": duplicate section [" + current + "]");
      }
      doc.sections_.emplace_back(current, Entries{});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    if (current.empty()) throw ConfigError(where + ": key outside of any section");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (doc.get(current, key)) {
      throw ConfigError(where + ": duplicate key '" + qualified(current, key) + "'");
    }
    doc.sections_.back().second.emplace_back(std::move(key), std::move(value));
  }
  return doc;
}

std::optional<std::string> ConfigDocument::get(std::string_view section,
                                               std::string_view key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& [k, v] : entries) {
      if (k == key) return v;
    }
  }
  return std::nullopt;
}

void ConfigDocument::set(const std::string& section, const std::string& key,
                         std::string value) {
  for (auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (auto& [k, v] : entries) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries.emplace_back(key, std::move(value));
    return;
  }
  sections_.emplace_back(section, Entries{{key, std::move(value)}});
}

void ConfigDocument::erase(std::string_view section, std::string_view key) {
  for (auto& [name, entries] : sections_) {
    if (name != section) continue;
    std::erase_if(entries, [&](const auto& kv) { return kv.first == key; });
  }
}

void ConfigDocument::apply_override(std::string_view assignment) {
  auto eq = assignment.find('=');
  auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError("override '" + std::string(assignment) +
                      "' is not of the form section.key=value");
  }
  std::string section(trim(assignment.substr(0, dot)));
  std::string key(trim(assignment.substr(dot + 1, eq - dot - 1)));
  allowed_keys(section);
  set(section, key, std::string(trim(assignment.substr(eq + 1))));
}

std::string ConfigDocument::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, entries] : sections_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << name << "]\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
  }
  return out.str();
}

Scenario scenario_from_config(const ConfigDocument& doc) {
  check_keys(doc);
  Reader r(doc);
  try {
    NetworkSource source;
    NetworkModel network = read_network(r, source);
    const std::size_t n = network.num_users();
    const std::size_t kk = network.num_channels();
    Scenario s{.name = std::string(trim(r.get("scenario", "name").value_or("scenario"))),
               .network = std::move(network),
               .source = source,
               .noise = read_noise(r, n, kk),
               .algorithms = read_algorithms(r),
               .start = std::nullopt,
               .reference_equilibrium = std::nullopt};
    s.max_iters = r.integer("run", "max_iters", s.max_iters);
    s.tol = r.number("run", "tol", s.tol);
    s.window = r.integer("run", "window", s.window);
    s.decimation = r.integer("run", "decimation", s.decimation);
    s.start = read_profile(r, "start", "default", n, kk);
    auto ref_text = r.get("run", "reference");
    if (ref_text && trim(*ref_text) == "fixed-point") {
      s.reference_equilibrium = solve_fixed_point(s.network);
      s.reference_is_fixed_point = true;
    } else {
      s.reference_equilibrium = read_profile(r, "reference", "none", n, kk);
    }
    validate_scenario(s);
    return s;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ConfigDocument config_from_scenario(const Scenario& s) {
  ConfigDocument doc;
  const auto& net = s.network;
  const std::size_t n = net.num_users();
  const std::size_t kk = net.num_channels();
  doc.set("scenario", "name", s.name);

  doc.set("network", "users", std::to_string(n));
  doc.set("network", "channels", std::to_string(kk));
  if (s.source.kind == NetworkSource::Kind::kRandomWeak) {
    doc.set("network", "generator", "random-weak");
    doc.set("network", "generator_seed", std::to_string(s.source.seed));
    doc.set("network", "budget", format_double(net.power_budget(0)));
    doc.set("network", "mask", format_double(s.source.mask));
  } else {
    doc.set("network", "generator", "inline");
    for (std::size_t k = 0; k < kk; ++k) {
      std::vector<double> rows(n * n);
      for (std::size_t tx = 0; tx < n; ++tx) {
        for (std::size_t rx = 0; rx < n; ++rx) rows[tx * n + rx] = net.gain(tx, rx, k);
      }
      doc.set("network", "gain." + std::to_string(k), join_numbers(rows));
    }
    doc.set("network", "noise", join_compact(net.noise_floors().data()));
    doc.set("network", "budget", join_compact(net.power_budgets()));
    doc.set("network", "mask", join_compact(net.power_masks().data()));
  }

  const auto& noise = s.noise;
  doc.set("noise", "kind", std::string(to_string(noise.kind)));
  doc.set("noise", "seed", std::to_string(noise.seed));
  switch (noise.kind) {
    case NoiseKind::kNone:
      break;
    case NoiseKind::kGaussianIer:
      doc.set("noise", "ier_db", format_double(noise.ier_db));
      break;
    case NoiseKind::kGaussianFixedVariance:
      doc.set("noise", "variance", join_compact(noise.variance.data()));
      break;
    case NoiseKind::kDiminishing:
    case NoiseKind::kSummable:
      doc.set("noise", "scale", format_double(noise.scale));
      doc.set("noise", "decay_exponent", format_double(noise.decay_exponent));
      break;
  }

  std::string list;
  std::optional<StepSizeSchedule> power_decay;
  for (const auto& a : s.algorithms) {
    if (!list.empty()) list += ", ";
    switch (a.kind) {
      case AlgorithmKind::kIwf:
        list += "iwf";
        break;
      case AlgorithmKind::kRiwf:
        list += "riwf:" + format_double(a.lambda);
        break;
      case AlgorithmKind::kAiwf:
        list += "aiwf:" + std::string(to_string(a.schedule.kind));
        if (a.schedule.kind == ScheduleKind::kPowerDecay) {
          if (power_decay && !(*power_decay == a.schedule)) {
            throw std::invalid_argument(
                "cannot serialize power-decay schedules with different parameters");
          }
          power_decay = a.schedule;
        }
        break;
    }
  }
  doc.set("algorithms", "list", list);
  if (power_decay) {
    doc.set("algorithms", "aiwf.gamma", format_double(power_decay->gamma));
    doc.set("algorithms", "aiwf.a", format_double(power_decay->a));
    doc.set("algorithms", "aiwf.b", format_double(power_decay->b));
  }

  doc.set("run", "max_iters", std::to_string(s.max_iters));
  doc.set("run", "tol", format_double(s.tol));
  doc.set("run", "window", std::to_string(s.window));
  doc.set("run", "decimation", std::to_string(s.decimation));
  doc.set("run", "start", s.start ? join_numbers(s.start->values().data()) : "default");
  if (s.reference_is_fixed_point) {
    doc.set("run", "reference", "fixed-point");
  } else {
    doc.set("run", "reference",
            s.reference_equilibrium ? join_numbers(s.reference_equilibrium->values().data())
                                    : "none");
  }
  return doc;
}

std::string serialize_scenario(const Scenario& scenario) {
  return config_from_scenario(scenario).to_string();
}

Scenario parse_scenario(std::string_view text) {
  return scenario_from_config(ConfigDocument::parse(text));
}

ConfigDocument load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ConfigDocument::parse(text.str());
}

}  // namespace iwf
