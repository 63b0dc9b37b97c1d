#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qmem::cli {

using nlohmann::json;

namespace {

/// Field reader for one JSON object that remembers which keys were consumed.
class Fields {
 public:
  Fields(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  const json& at(const std::string& key) {
    if (!object_.contains(key)) fail(key, "missing required key");
    used_.insert(key);
    return object_.at(key);
  }

  const json* find(const std::string& key) {
    if (!object_.contains(key)) return nullptr;
    used_.insert(key);
    return &object_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "expected a finite number");
    return x;
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) fail(key, "must be positive");
    return x;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Fields child(const std::string& key) { return Fields(at(key), sub(key)); }

  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const std::string where = key.empty() ? path_ : sub(key);
    throw SchemaError((where.empty() ? std::string("scenario") : where) + ": " + message);
  }

  [[noreturn]] void fail_io(const std::string& key, const std::string& message) const {
    throw IoError(sub(key) + ": " + message);
  }

  /// Rejects keys that were never read.
  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!used_.count(it.key())) fail(it.key(), "unknown key");
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> used_;
};

ImaginaryQuaternion imaginary(Fields& f, const std::string& key) {
  const auto v = f.numbers(key);
  if (v.size() != 3) f.fail(key, "expected three components");
  return {v[0], v[1], v[2]};
}

ImaginaryQuaternion unit_axis(Fields& f, const std::string& key) {
  const ImaginaryQuaternion u = imaginary(f, key);
  if (!(u.norm() > 0.0)) f.fail(key, "axis must be nonzero");
  return u.normalized();
}

complex complex_entry(const json& v, Fields& f, const std::string& key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  f.fail(key, "spinor entries are numbers or [re, im] pairs");
}

Spinor spinor(Fields& f, const std::string& key) {
  const json& v = f.at(key);
  if (!v.is_array() || v.size() != 2) f.fail(key, "expected a two-component spinor");
  const Spinor s{complex_entry(v[0], f, key), complex_entry(v[1], f, key)};
  if (!(s.norm2() > 0.0) || !std::isfinite(s.norm2())) f.fail(key, "spinor must be nonzero");
  return s.normalized();
}

Parity parity(Fields& f, const std::string& key, Parity fallback) {
  if (!f.has(key)) return fallback;
  const std::string p = f.text(key);
  if (p == "even") return Parity::Even;
  if (p == "odd") return Parity::Odd;
  if (p == "none") return Parity::None;
  f.fail(key, "expected even, odd or none");
}

QuadratureRule rule(Fields& f, const std::string& key) {
  const std::string r = f.text(key, "trapezoid");
  if (r == "trapezoid") return QuadratureRule::Trapezoid;
  if (r == "midpoint") return QuadratureRule::Midpoint;
  f.fail(key, "expected trapezoid or midpoint");
}

/// Numeric CSV with a header line; returns the rows.
std::vector<std::vector<double>> read_table(const std::filesystem::path& path, std::size_t columns,
                                            Fields& f, const std::string& key) {
  std::ifstream in(path);
  if (!in) f.fail_io(key, "referenced file not found: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        f.fail(key, "non-numeric cell '" + cell + "' in " + path.string());
      }
    }
    if (row.size() != columns) {
      f.fail(key, "expected " + std::to_string(columns) + " columns in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

GaussianProfile profile(Fields& parent, const std::string& key) {
  Fields f = parent.child(key);
  GaussianProfile p;
  p.center = f.number("center", 0.0);
  p.width = f.positive("width", 1.0);
  p.amplitude = f.number("amplitude", 1.0);
  f.finish();
  return p;
}

PotentialSpec parse_potential(Fields f, const std::filesystem::path& base) {
  PotentialSpec p;
  const std::string type = f.text("type");
  if (type == "discrete") {
    p.type = PotentialType::Discrete;
    if (f.has("sites") == f.has("file")) f.fail("", "give exactly one of sites or file");
    if (f.has("sites")) {
      const json& arr = f.at("sites");
      if (!arr.is_array()) f.fail("sites", "expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Fields s(arr[i], f.sub("sites[" + std::to_string(i) + "]"));
        p.sites.push_back({s.number("x"), imaginary(s, "q")});
        s.finish();
      }
    } else {
      // JSON list of {x, g1, g2, g3}.
      const std::filesystem::path path = base / f.text("file");
      std::ifstream in(path);
      if (!in) f.fail_io("file", "referenced file not found: " + path.string());
      json arr;
      try {
        arr = json::parse(in);
      } catch (const json::parse_error& e) {
        f.fail("file", path.string() + " is not valid JSON: " + e.what());
      }
      if (!arr.is_array()) f.fail("file", path.string() + " must hold a JSON list of sites");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Fields e(arr[i], path.filename().string() + "[" + std::to_string(i) + "]");
        p.sites.push_back({e.number("x"), {e.number("g1"), e.number("g2"), e.number("g3")}});
        e.finish();
      }
    }
  } else if (type == "point-even" || type == "point-odd") {
    p.type = type == "point-even" ? PotentialType::PointEven : PotentialType::PointOdd;
    p.g = f.number("g");
    if (p.g < 0.0) f.fail("g", "must be nonnegative");
    p.u = f.has("u") ? unit_axis(f, "u") : ImaginaryQuaternion{0.0, 0.0, 1.0};
  } else if (type == "nonlocal-separable") {
    p.type = PotentialType::NonlocalSeparable;
    p.q = imaginary(f, "q");
    p.alpha = profile(f, "alpha");
    p.beta = f.has("beta") ? profile(f, "beta") : p.alpha;
  } else {
    f.fail("type", "expected discrete, point-even, point-odd or nonlocal-separable");
  }
  f.finish();
  return p;
}

Spectrum parse_spectrum(Fields f, const std::filesystem::path& base) {
  const std::string type = f.text("type");
  Spectrum s = Spectrum::rectangular(1.0, 2.0);
  if (type == "rectangular") {
    s = Spectrum::rectangular(f.positive("omega0", 1.0), f.number("K"));
  } else if (type == "gaussian") {
    GaussianPulse g;
    g.k0 = f.number("k0");
    g.sigma_k = f.positive("sigma_k", 0.05);
    g.energy = f.positive("energy", 1.0);
    g.span = f.positive("span", 10.0);
    s = Spectrum::gaussian(g);
  } else if (type == "tabulated") {
    std::vector<double> omega, density;
    if (f.has("file") == (f.has("omega") || f.has("density"))) {
      f.fail("", "give either file or omega and density");
    }
    if (f.has("file")) {
      for (const auto& row : read_table(base / f.text("file"), 2, f, "file")) {
        omega.push_back(row[0]);
        density.push_back(row[1]);
      }
    } else {
      omega = f.numbers("omega");
      density = f.numbers("density");
    }
    s = Spectrum::tabulated(std::move(omega), std::move(density), rule(f, "rule"));
  } else {
    f.fail("type", "expected rectangular, gaussian or tabulated");
  }
  f.finish();
  return s;
}

FrequencyGridSpec parse_grid(Fields f) {
  FrequencyGridSpec g;
  g.omega_min = f.positive("omega_min", 1.0);
  g.omega_max = f.positive("omega_max", 2.0);
  g.n = f.count("n", 65);
  const std::string spacing = f.text("spacing", "linear");
  if (spacing != "linear" && spacing != "log") f.fail("spacing", "expected linear or log");
  g.logarithmic = spacing == "log";
  if (!(g.omega_max > g.omega_min)) f.fail("omega_max", "must exceed omega_min");
  if (g.n < 2) f.fail("n", "needs at least two nodes");
  f.finish();
  return g;
}

void parse_tolerances(Fields f, Scenario& s) {
  auto& q = s.pipeline.quadrature;
  q.abs_tol = f.positive("quadrature_abs", q.abs_tol);
  q.min_level = static_cast<int>(f.count("min_level", static_cast<std::size_t>(q.min_level)));
  q.max_level = static_cast<int>(f.count("max_level", static_cast<std::size_t>(q.max_level)));
  if (q.max_level < q.min_level) f.fail("max_level", "must be at least min_level");
  s.pipeline.solve.max_condition = f.positive("max_condition", s.pipeline.solve.max_condition);
  s.consistency_tol = f.positive("consistency", s.consistency_tol);
  f.finish();
}

void parse_time(Fields f, TimeSpec& t) {
  if (f.has("grid")) {
    Fields g = f.child("grid");
    t.half_width = g.positive("half_width", t.half_width);
    t.nodes = g.count("n", t.nodes);
    if (t.nodes < 3) g.fail("n", "needs at least three nodes");
    g.finish();
  }
  if (f.has("packet")) {
    Fields p = f.child("packet");
    t.packet.k0 = p.positive("k0", t.packet.k0);
    t.packet.sigma_k = p.positive("sigma_k", t.packet.sigma_k);
    t.packet.energy = p.positive("energy", t.packet.energy);
    t.packet.X0 = p.positive("X0", t.packet.X0);
    p.finish();
  }
  auto& r = t.run;
  r.dt = f.positive("dt", r.dt);
  r.region_padding = f.positive("region_padding", r.region_padding);
  r.stop_probability = f.positive("stop_probability", r.stop_probability);
  r.edge_tolerance = f.positive("edge_tolerance", r.edge_tolerance);
  r.max_steps = f.count("max_steps", r.max_steps);
  r.record_every = f.count("record_every", 10);
  r.strict = f.flag("strict", r.strict);
  f.finish();
}

void parse_optimizer(Fields f, OptimizerSpec& o) {
  const std::string init = f.text("initial", "rectangular");
  if (init == "rectangular") {
    o.initial = InitialWeights::Rectangular;
  } else if (init == "uniform") {
    o.initial = InitialWeights::Uniform;
  } else if (init == "spectrum") {
    o.initial = InitialWeights::Spectrum;
  } else {
    f.fail("initial", "expected rectangular, uniform or spectrum");
  }
  o.rule = rule(f, "rule");
  o.options.max_iterations = f.count("max_iterations", o.options.max_iterations);
  o.options.relative_decrease = f.positive("relative_decrease", o.options.relative_decrease);
  o.options.armijo = f.positive("armijo", o.options.armijo);
  o.options.initial_step = f.positive("initial_step", o.options.initial_step);
  f.finish();
}

void parse_outputs(Fields f, OutputNames& o) {
  for (auto [key, slot] : {std::pair{"solution", &o.solution}, {"scattering", &o.scattering},
                           {"impurity", &o.impurity}, {"analytic", &o.analytic},
                           {"time_series", &o.time_series}, {"evolve", &o.evolve},
                           {"optimal_spectrum", &o.optimal_spectrum},
                           {"convergence", &o.convergence}, {"optimize", &o.optimize}}) {
    *slot = f.text(key, *slot);
    if (slot->empty() || slot->find('/') != std::string::npos) {
      f.fail(key, "expected a plain file name");
    }
  }
  f.finish();
}

}  // namespace

double GaussianProfile::operator()(double x) const {
  const double z = (x - center) / width;
  return amplitude * std::exp(-z * z);
}

double GaussianProfile::truncated(double x) const {
  return std::abs(x - center) > 6.0 * width ? 0.0 : (*this)(x);
}

PointInteraction PotentialSpec::point() const {
  if (!is_point()) throw SchemaError("potential: a point interaction is required here");
  return PointInteraction(g, u, type == PotentialType::PointEven ? Parity::Even : Parity::Odd);
}

DiscretePotential PotentialSpec::chain() const {
  switch (type) {
    case PotentialType::Discrete:
      return DiscretePotential(sites);
    case PotentialType::PointEven:
      return point().as_potential();
    case PotentialType::PointOdd:
      throw SchemaError("potential: the odd point channel has no site-chain form");
    case PotentialType::NonlocalSeparable:
      break;
  }
  throw SchemaError("potential: nonlocal-separable potentials are supported by evolve only");
}

std::vector<double> FrequencyGridSpec::nodes() const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = logarithmic ? omega_min * std::pow(omega_max / omega_min, t)
                         : omega_min + (omega_max - omega_min) * t;
  }
  out.back() = omega_max;
  return out;
}

const IncomingState& Scenario::require_incoming(const char* command) const {
  if (!incoming) throw SchemaError(std::string("incoming: required by ") + command);
  return *incoming;
}

const FrequencyGridSpec& Scenario::require_grid(const char* command) const {
  if (!frequency_grid) throw SchemaError(std::string("frequency_grid: required by ") + command);
  return *frequency_grid;
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
  }
  Scenario s;
  try {
    Fields root(doc, "");
    s.potential = parse_potential(root.child("potential"), base_dir);
    if (root.has("tolerances")) parse_tolerances(root.child("tolerances"), s);
    if (root.has("incoming")) {
      Fields in = root.child("incoming");
      const Spinor s_in = spinor(in, "s_in");
      const Parity p = parity(in, "parity", Parity::Even);
      Spectrum spectrum = parse_spectrum(in.child("spectrum"), base_dir);
      in.finish();
      s.incoming.emplace(std::move(spectrum), s_in, p);
    }
    if (root.has("frequency_grid")) s.frequency_grid = parse_grid(root.child("frequency_grid"));
    if (root.has("time")) parse_time(root.child("time"), s.time);
    if (root.has("optimizer")) parse_optimizer(root.child("optimizer"), s.optimizer);
    if (root.has("outputs")) parse_outputs(root.child("outputs"), s.outputs);
    if (root.has("seed")) s.seed = root.count("seed", 0);
    root.finish();
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("scenario rejected: ") + e.what());
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scenario rejected: ") + e.what());
  }

  if (s.incoming) {
    s.time.packet.s_in = s.incoming->s_in;
    s.time.packet.parity = s.incoming->parity;
    const bool point = s.potential.is_point();
    if (point && s.incoming->parity != s.potential.point().parity) {
      throw SchemaError("incoming.parity: must match the point interaction's channel");
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Scenario s = parse_scenario(buffer.str(), path.parent_path());
  s.source = path;
  return s;
}

}  // namespace qmem::cli
