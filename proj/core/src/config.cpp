#include "sdwave/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "sdwave/quadrature.hpp"

namespace sdwave {

ModalState StateProfile::at(double s, const SpectralBasis& basis) const {
  const Eigen::Index n = basis.size();
  ModalState z = ModalState::zero(n);
  switch (kind) {
    case Kind::zero:
      return z;
    case Kind::csv:
      throw std::logic_error("csv profiles are sampled from their file");
    case Kind::constant: {
      // Sine coefficients of a spatially constant field c: c sqrt(2/L) L (1 - (-1)^k) / (k pi).
      const double l = basis.length();
      for (Eigen::Index k = 0; k < n; ++k) {
        const double j = static_cast<double>(k + 1);
        const double integral =
            (k % 2 == 0) ? basis.normalization() * 2.0 * l / (j * std::numbers::pi) : 0.0;
        z.w[k] = w_amplitude * integral;
        z.v[k] = v_amplitude * integral;
      }
      return z;
    }
    case Kind::bump: {
      if (!(width > 0.0) || center - width < 0.0 || center + width > basis.length()) {
        throw std::out_of_range("bump support must lie inside [0, L]");
      }
      const auto rule = GaussLegendreRule::on(center - width, center + width, 96);
      for (Eigen::Index k = 0; k < n; ++k) {
        const double c = rule.integrate([&](double x) {
          const double b = std::cos(0.5 * std::numbers::pi * (x - center) / width);
          return b * b * basis.eigenfunction(k, x);
        });
        z.w[k] = w_amplitude * c;
        z.v[k] = v_amplitude * c;
      }
      return z;
    }
    case Kind::sine_mode:
    case Kind::standing_wave:
      break;
  }
  if (mode < 1 || mode > n) {
    throw std::out_of_range("profile mode " + std::to_string(mode) + " outside 1.." +
                            std::to_string(n));
  }
  const Eigen::Index k = mode - 1;
  if (kind == Kind::sine_mode) {
    z.w[k] = w_amplitude;
    z.v[k] = v_amplitude;
  } else {
    z.w[k] = w_amplitude * std::cos(frequency * s);
    z.v[k] = -w_amplitude * frequency * std::sin(frequency * s);
  }
  return z;
}

StateProfile::Kind parse_profile_kind(std::string_view name) {
  if (name == "zero") return StateProfile::Kind::zero;
  if (name == "sine_mode") return StateProfile::Kind::sine_mode;
  if (name == "standing_wave") return StateProfile::Kind::standing_wave;
  if (name == "constant") return StateProfile::Kind::constant;
  if (name == "bump") return StateProfile::Kind::bump;
  if (name == "csv") return StateProfile::Kind::csv;
  throw std::invalid_argument("unknown state profile '" + std::string(name) + "'");
}

std::string to_string(StateProfile::Kind kind) {
  switch (kind) {
    case StateProfile::Kind::zero: return "zero";
    case StateProfile::Kind::sine_mode: return "sine_mode";
    case StateProfile::Kind::standing_wave: return "standing_wave";
    case StateProfile::Kind::constant: return "constant";
    case StateProfile::Kind::bump: return "bump";
    case StateProfile::Kind::csv: return "csv";
  }
  return "?";
}

namespace {

// Typed accessors over one TOML table that reject unknown keys, so a typo
// in a config is an error instead of a silently ignored default.
class Section {
 public:
  Section(const toml::table* table, std::string name, std::set<std::string> allowed)
      : table_(table), name_(std::move(name)) {
    if (!table_) return;
    for (const auto& [key, node] : *table_) {
      if (!allowed.count(std::string(key.str()))) {
        throw ConfigError("[" + name_ + "] unknown key '" + std::string(key.str()) + "'");
      }
    }
  }

  std::optional<double> maybe_number(const std::string& key) const {
    const toml::node* node = find(key);
    if (!node) return std::nullopt;
    if (auto v = node->value<double>(); v && (node->is_floating_point() || node->is_integer())) {
      return *v;
    }
    throw ConfigError(where(key) + " must be a number");
  }

  double number(const std::string& key, double fallback) const {
    return maybe_number(key).value_or(fallback);
  }

  double required_number(const std::string& key) const {
    if (auto v = maybe_number(key)) return *v;
    throw ConfigError(where(key) + " is required");
  }

  int integer(const std::string& key, int fallback) const {
    const toml::node* node = find(key);
    if (!node) return fallback;
    if (!node->is_integer()) throw ConfigError(where(key) + " must be an integer");
    return static_cast<int>(*node->value<std::int64_t>());
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const toml::node* node = find(key);
    if (!node) return fallback;
    if (!node->is_string()) throw ConfigError(where(key) + " must be a string");
    return *node->value<std::string>();
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    const toml::node* node = find(key);
    if (!node) return out;
    const toml::array* arr = node->as_array();
    if (!arr) throw ConfigError(where(key) + " must be an array of numbers");
    for (const auto& item : *arr) {
      if (!(item.is_floating_point() || item.is_integer())) {
        throw ConfigError(where(key) + " must be an array of numbers");
      }
      out.push_back(*item.value<double>());
    }
    return out;
  }

  const toml::array* array(const std::string& key) const {
    const toml::node* node = find(key);
    if (!node) return nullptr;
    if (!node->is_array()) throw ConfigError(where(key) + " must be an array");
    return node->as_array();
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }
  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

 private:
  const toml::node* find(const std::string& key) const {
    return table_ ? table_->get(key) : nullptr;
  }

  const toml::table* table_;
  std::string name_;
};

const toml::table* subtable(const toml::table& root, const std::string& name) {
  const toml::node* node = root.get(name);
  if (!node) return nullptr;
  if (!node->is_table()) throw ConfigError("[" + name + "] must be a table");
  return node->as_table();
}

template <typename Fn>
auto translate(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

StateProfile parse_profile(const Section& s, const std::string& name, const std::string& fallback) {
  StateProfile p;
  const std::string kind = s.text("profile", fallback);
  p.kind = translate(s.where("profile"), [&] { return parse_profile_kind(kind); });
  p.mode = s.integer("mode", 1);
  p.w_amplitude = s.number("w_amplitude", 0.0);
  p.v_amplitude = s.number("v_amplitude", 0.0);
  p.frequency = s.number("frequency", 0.0);
  p.center = s.number("center", p.center);
  p.width = s.number("width", p.width);
  if (s.has("file")) p.file = s.text("file", "");
  if (p.kind == StateProfile::Kind::csv && p.file.empty()) {
    throw ConfigError("[" + name + "] csv profile needs 'file'");
  }
  return p;
}

ControlProfile parse_control(const Section& s, const std::string& prefix) {
  ControlProfile c;
  const std::string kind = s.text(prefix + "profile", "zero");
  c.kind = translate(s.where(prefix + "profile"), [&] { return parse_control_kind(kind); });
  c.mode = s.integer(prefix + "mode", 1) - 1;
  c.amplitude = s.number(prefix + "amplitude", 0.0);
  c.frequency = s.number(prefix + "frequency", 1.0);
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }

  const std::set<std::string> sections = {"model",   "domain",  "actuator", "nonlinearity",
                                          "memory",  "impulses", "history", "target",
                                          "control", "solver",  "sweep"};
  for (const auto& [key, node] : root) {
    if (!sections.count(std::string(key.str()))) {
      throw ConfigError("unknown section [" + std::string(key.str()) + "]");
    }
  }

  ExperimentConfig cfg;
  cfg.base_dir = base_dir;

  {
    Section s(subtable(root, "model"), "model", {"eta", "gamma", "delay", "horizon"});
    cfg.model.eta = s.required_number("eta");
    cfg.model.gamma = s.required_number("gamma");
    cfg.model.delay = s.required_number("delay");
    cfg.model.horizon = s.required_number("horizon");
  }
  {
    Section s(subtable(root, "domain"), "domain", {"length", "modes", "grid_points"});
    cfg.domain.length = s.number("length", std::numbers::pi);
    cfg.modes = s.integer("modes", 8);
    cfg.domain.grid_points = s.integer("grid_points", 0);
  }
  {
    Section s(subtable(root, "actuator"), "actuator", {"a", "b"});
    cfg.actuator.a = s.number("a", 0.0);
    cfg.actuator.b = s.number("b", cfg.domain.length);
  }
  {
    Section s(subtable(root, "nonlinearity"), "nonlinearity",
              {"f", "f_a", "f_b", "f_omega", "a0", "b0", "g", "g_amplitude"});
    auto& f = cfg.nonlinearity.f;
    const std::string fk = s.text("f", "zero");
    f.kind = translate(s.where("f"), [&] { return parse_forcing_kind(fk); });
    f.a = s.number("f_a", 0.0);
    f.b = s.number("f_b", 0.0);
    f.omega = s.number("f_omega", 1.0);
    f.declared_a0 = s.maybe_number("a0");
    f.declared_b0 = s.maybe_number("b0");
    auto& g = cfg.nonlinearity.g;
    const std::string gk = s.text("g", "zero");
    g.kind = translate(s.where("g"), [&] { return parse_memory_response_kind(gk); });
    g.amplitude = s.number("g_amplitude", 1.0);
  }
  {
    Section s(subtable(root, "memory"), "memory", {"kernel", "m0", "kappa"});
    const std::string kk = s.text("kernel", "constant");
    cfg.kernel.kind = translate(s.where("kernel"), [&] { return parse_kernel_kind(kk); });
    cfg.kernel.m0 = s.number("m0", 0.0);
    cfg.kernel.kappa = s.number("kappa", 0.0);
  }
  {
    Section s(subtable(root, "impulses"), "impulses", {"events"});
    if (const toml::array* events = s.array("events")) {
      for (std::size_t i = 0; i < events->size(); ++i) {
        const toml::table* ev = events->get(i)->as_table();
        const std::string name = "impulses.events[" + std::to_string(i) + "]";
        if (!ev) throw ConfigError(name + " must be an inline table");
        Section e(ev, name, {"time", "kind", "value", "gain", "clip"});
        ImpulseMap map;
        const std::string kind = e.text("kind", "kick");
        map.kind = translate(e.where("kind"), [&] { return parse_impulse_kind(kind); });
        map.value = e.number("value", 0.0);
        map.gain = e.number("gain", 0.0);
        map.clip = e.number("clip", 1.0);
        cfg.impulses.times.push_back(e.required_number("time"));
        cfg.impulses.maps.push_back(map);
      }
    }
  }
  const std::set<std::string> profile_keys = {"profile",   "mode",   "w_amplitude", "v_amplitude",
                                              "frequency", "center", "width",       "file"};
  cfg.history = parse_profile(Section(subtable(root, "history"), "history", profile_keys),
                              "history", "zero");
  cfg.target = parse_profile(Section(subtable(root, "target"), "target", profile_keys), "target",
                             "zero");
  if (cfg.target.kind == StateProfile::Kind::csv) {
    throw ConfigError("[target] csv profiles are only supported for the history");
  }
  {
    Section s(subtable(root, "control"), "control", {"profile", "mode", "amplitude", "frequency"});
    cfg.base_control = parse_control(s, "");
  }
  {
    Section s(subtable(root, "solver"), "solver",
              {"dt", "memory_quadrature", "control_nodes", "gramian_nodes"});
    cfg.solver.dt = s.number("dt", 1e-3);
    const std::string mq = s.text("memory_quadrature", "direct");
    if (mq == "direct") {
      cfg.solver.memory = MemoryQuadrature::direct;
    } else if (mq == "recursive") {
      cfg.solver.memory = MemoryQuadrature::recursive;
    } else {
      throw ConfigError(s.where("memory_quadrature") + ": expected 'direct' or 'recursive'");
    }
    cfg.solver.control_nodes = s.integer("control_nodes", 4);
    cfg.gramian_nodes = s.integer("gramian_nodes", 64);
  }
  {
    Section s(subtable(root, "sweep"), "sweep",
              {"alphas", "deltas", "output_dir", "epsilon", "threads", "auxiliary_profile",
               "auxiliary_mode", "auxiliary_amplitude", "auxiliary_frequency"});
    cfg.sweep.alphas = s.numbers("alphas");
    cfg.sweep.deltas = s.numbers("deltas");
    cfg.sweep.output_dir = s.text("output_dir", ".");
    cfg.sweep.epsilon = s.maybe_number("epsilon");
    cfg.sweep.threads = s.integer("threads", 1);
    if (s.has("auxiliary_profile")) cfg.sweep.auxiliary = parse_control(s, "auxiliary_");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
}

std::vector<ModalState> read_history_csv(const std::filesystem::path& path, Eigen::Index modes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open history file " + path.string());
  std::vector<ModalState> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> cells;
    std::stringstream row(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (samples.empty()) continue;  // header
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
    if (static_cast<Eigen::Index>(cells.size()) != 1 + 2 * modes) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(1 + 2 * modes) + " columns, found " +
                        std::to_string(cells.size()));
    }
    ModalState z = ModalState::zero(modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
      z.w[k] = cells[static_cast<std::size_t>(1 + k)];
      z.v[k] = cells[static_cast<std::size_t>(1 + modes + k)];
    }
    samples.push_back(std::move(z));
  }
  return samples;
}

}  // namespace sdwave
