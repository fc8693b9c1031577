#include "isoembed/config.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "isoembed/expr.hpp"

namespace isoembed {

namespace {

using json = nlohmann::json;

// Reads the keys of one object and rejects whatever was not read.
class Reader {
 public:
  Reader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(where(), "expected an object");
  }

  std::string at(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = object_.find(std::string(key));
    return it == object_.end() ? nullptr : &*it;
  }

  const json& require(std::string_view key) {
    const json* value = find(key);
    if (!value) throw ConfigError(at(key), "missing required key");
    return *value;
  }

  double number(std::string_view key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(at(key), "expected a number");
    return v->get<double>();
  }

  int integer(std::string_view key, int fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v->get<int>();
  }

  std::size_t count(std::string_view key, std::size_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<long long>() < 1)
      throw ConfigError(at(key), "expected a positive integer");
    return v->get<std::size_t>();
  }

  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
      throw ConfigError(at(key), "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::string string(std::string_view key, std::string fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<std::string> strings(std::string_view key) {
    const json* v = find(key);
    if (!v) return {};
    if (!v->is_array()) throw ConfigError(at(key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_string()) throw ConfigError(fmt::format("{}[{}]", at(key), i), "expected a string");
      out.push_back((*v)[i].get<std::string>());
    }
    return out;
  }

  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
  }

  std::string where() const { return path_.empty() ? "<root>" : path_; }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<std::vector<double>> read_matrix(const json& value, const std::string& path) {
  if (!value.is_array()) throw ConfigError(path, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const json& row = value[i];
    if (!row.is_array()) throw ConfigError(fmt::format("{}[{}]", path, i), "expected an array");
    std::vector<double> r;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number()) throw ConfigError(fmt::format("{}[{}][{}]", path, i, j), "expected a number");
      r.push_back(row[j].get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

expr::Expr parse_expression(const std::string& text, int n, const std::string& path) {
  try {
    return expr::parse(text, n);
  } catch (const expr::ParseError& e) {
    throw ConfigError(path, e.what());
  }
}

MetricConfig read_metric(const json& value, int n) {
  MetricConfig m;
  if (value.is_string()) {
    m.family = value.get<std::string>();
    if (m.family != "identity") throw ConfigError("metric", "only \"identity\" has a string shorthand");
    return m;
  }
  Reader r(value, "metric");
  m.family = r.string("family", "");
  if (m.family == "identity") {
  } else if (m.family == "constant") {
    m.matrix = read_matrix(r.require("matrix"), "metric.matrix");
    if (m.matrix.size() != static_cast<std::size_t>(n))
      throw ConfigError("metric.matrix", fmt::format("expected {} rows", n));
    for (std::size_t i = 0; i < m.matrix.size(); ++i) {
      if (m.matrix[i].size() != static_cast<std::size_t>(n))
        throw ConfigError(fmt::format("metric.matrix[{}]", i), fmt::format("expected {} entries", n));
      for (std::size_t j = 0; j < i; ++j)
        if (m.matrix[i][j] != m.matrix[j][i])
          throw ConfigError(fmt::format("metric.matrix[{}][{}]", i, j), "matrix is not symmetric");
    }
  } else if (m.family == "conformal") {
    m.exponent = r.string("exponent", "");
    parse_expression(m.exponent, n, "metric.exponent");
  } else if (m.family == "revolution") {
    if (n != 2) throw ConfigError("metric.family", "revolution metrics need n = 2");
    m.major_radius = r.number("R", m.major_radius);
    m.minor_radius = r.number("rho", m.minor_radius);
    m.offset = r.number("offset", 0.0);
    if (!(m.minor_radius > 0.0) || !(m.major_radius > m.minor_radius))
      throw ConfigError("metric", "revolution needs R > rho > 0");
    if (!(m.offset >= 0.0)) throw ConfigError("metric.offset", "must be non-negative");
  } else if (m.family == "expression") {
    m.entries = r.strings("entries");
    const std::size_t expected = static_cast<std::size_t>(n * (n + 1) / 2);
    if (m.entries.size() != expected)
      throw ConfigError("metric.entries", fmt::format("expected {} upper-triangle entries", expected));
    for (std::size_t i = 0; i < m.entries.size(); ++i)
      parse_expression(m.entries[i], n, fmt::format("metric.entries[{}]", i));
  } else {
    throw ConfigError("metric.family", fmt::format("unknown family '{}'", m.family));
  }
  r.finish();
  return m;
}

GroupConfig read_group(const json* value, int n) {
  GroupConfig g;
  if (!value) {
    g.name = fmt::format("torus-{}", n);
    return g;
  }
  if (value->is_string()) {
    g.name = value->get<std::string>();
  } else {
    Reader r(*value, "group");
    g.name = r.string("name", "custom");
    if (const json* gens = r.find("generators")) {
      if (!gens->is_array()) throw ConfigError("group.generators", "expected an array");
      for (std::size_t i = 0; i < gens->size(); ++i) {
        const std::string path = fmt::format("group.generators[{}]", i);
        Reader gr((*gens)[i], path);
        GeneratorConfig gen;
        const auto rows = read_matrix(gr.require("A"), path + ".A");
        for (const auto& row : rows) {
          std::vector<int> ints;
          for (double v : row) {
            if (v != static_cast<int>(v)) throw ConfigError(path + ".A", "entries must be integers");
            ints.push_back(static_cast<int>(v));
          }
          gen.linear.push_back(std::move(ints));
        }
        gen.shift = gr.strings("v");
        gr.finish();
        g.generators.push_back(std::move(gen));
      }
    }
    r.finish();
    if (g.name != "custom" && !g.generators.empty())
      throw ConfigError("group.generators", "only a custom group lists generators");
  }
  return g;
}

OracleConfig read_oracle(const json& value, int n) {
  OracleConfig o;
  o.n = n;
  if (value.is_string()) {
    o.name = value.get<std::string>();
    if (o.name != "clifford") throw ConfigError("oracle", "only \"clifford\" has a string shorthand");
    return o;
  }
  Reader r(value, "oracle");
  o.name = r.string("name", "");
  o.n = r.integer("n", n);
  if (o.n != n) throw ConfigError("oracle.n", fmt::format("oracle dimension {} does not match n = {}", o.n, n));
  if (o.name == "clifford") {
  } else if (o.name == "revolution") {
    if (n != 2) throw ConfigError("oracle.name", "the revolution oracle needs n = 2");
    o.major_radius = r.number("R", o.major_radius);
    o.minor_radius = r.number("rho", o.minor_radius);
    if (!(o.minor_radius > 0.0) || !(o.major_radius > o.minor_radius))
      throw ConfigError("oracle", "revolution needs R > rho > 0");
  } else if (o.name == "expression") {
    o.components = r.strings("components");
    if (o.components.empty()) throw ConfigError("oracle.components", "needs at least one component");
    for (std::size_t i = 0; i < o.components.size(); ++i)
      parse_expression(o.components[i], n, fmt::format("oracle.components[{}]", i));
  } else {
    throw ConfigError("oracle.name", fmt::format("unknown oracle '{}'", o.name));
  }
  r.finish();
  return o;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", fmt::format("malformed config: {}", e.what()));
  }
  return parse_config_document(document);
}

RunConfig parse_config_document(const json& document) {
  RunConfig c;
  Reader r(document, "");
  c.n = r.integer("n", -1);
  if (c.n == -1) throw ConfigError("n", "missing required key");
  if (c.n < 1 || c.n > 4) throw ConfigError("n", "dimension must be between 1 and 4");

  if (const json* m = r.find("metric")) c.metric = read_metric(*m, c.n);
  c.group = read_group(r.find("group"), c.n);
  if (const json* o = r.find("oracle")) c.oracle = read_oracle(*o, c.n);
  else c.oracle.n = c.n;

  c.split.resolution = default_resolution(c.n);
  if (const json* s = r.find("split")) {
    Reader sr(*s, "split");
    c.split.fraction = sr.number("fraction", c.split.fraction);
    c.split.resolution = sr.integer("resolution", c.split.resolution);
    sr.finish();
  }
  if (!(c.split.fraction > 0.0 && c.split.fraction < 1.0))
    throw ConfigError("split.fraction", "must lie in (0, 1)");
  if (c.split.resolution < 2) throw ConfigError("split.resolution", "must be at least 2");

  if (const json* s = r.find("spiral")) {
    Reader sr(*s, "spiral");
    c.spiral.r_in = sr.number("r_in", c.spiral.r_in);
    c.spiral.r_out = sr.number("r_out", c.spiral.r_out);
    c.spiral.k = sr.number("k", c.spiral.k);
    c.spiral.tol = sr.number("tol", c.spiral.tol);
    sr.finish();
  }
  if (!(c.spiral.r_in > 0.0) || !(c.spiral.r_out > c.spiral.r_in))
    throw ConfigError("spiral", "needs 0 < r_in < r_out");
  if (!(c.spiral.k > 0.0)) throw ConfigError("spiral.k", "must be positive");
  if (!(c.spiral.tol > 0.0)) throw ConfigError("spiral.tol", "must be positive");
  if (c.spiral.k * (c.spiral.r_out - c.spiral.r_in) / 4.0 >= 1.0)
    throw ConfigError("spiral", "speed budget violated: k (r_out - r_in) / 4 must be below 1");

  if (const json* v = r.find("verify")) {
    Reader vr(*v, "verify");
    auto& d = c.verify;
    d.seed = vr.unsigned_integer("seed", d.seed);
    d.samples = vr.count("samples", d.samples);
    d.window = vr.number("window", d.window);
    d.jacobian_samples = vr.count("jacobian_samples", d.jacobian_samples);
    d.translations = vr.count("translations", d.translations);
    d.translation_radius = vr.integer("translation_radius", d.translation_radius);
    d.bound_window = vr.number("bound_window", d.bound_window);
    d.bound_samples = vr.count("bound_samples", d.bound_samples);
    d.pairs = vr.count("pairs", d.pairs);
    d.domain_floor = vr.number("domain_floor", d.domain_floor);
    d.image_floor = vr.number("image_floor", d.image_floor);
    d.shift_radius = vr.integer("shift_radius", d.shift_radius);
    d.properness_samples = vr.count("properness_samples", d.properness_samples);
    d.properness_floor = vr.number("properness_floor", d.properness_floor);
    d.spiral_window = vr.number("spiral_window", d.spiral_window);
    d.spiral_samples = vr.count("spiral_samples", d.spiral_samples);
    d.pullback_tolerance = vr.number("pullback_tolerance", d.pullback_tolerance);
    d.fd_tolerance = vr.number("fd_tolerance", d.fd_tolerance);
    d.equivariance_tolerance = vr.number("equivariance_tolerance", d.equivariance_tolerance);
    vr.finish();
    for (auto [name, value] : {std::pair{"window", d.window}, {"bound_window", d.bound_window},
                               {"domain_floor", d.domain_floor}, {"image_floor", d.image_floor},
                               {"properness_floor", d.properness_floor},
                               {"spiral_window", d.spiral_window},
                               {"pullback_tolerance", d.pullback_tolerance},
                               {"fd_tolerance", d.fd_tolerance},
                               {"equivariance_tolerance", d.equivariance_tolerance}})
      if (!(value > 0.0)) throw ConfigError(std::string("verify.") + name, "must be positive");
    if (d.translation_radius < 1) throw ConfigError("verify.translation_radius", "must be at least 1");
    if (d.shift_radius < 1) throw ConfigError("verify.shift_radius", "must be at least 1");
  }

  if (const json* e = r.find("export")) {
    Reader er(*e, "export");
    c.exports.window = er.number("window", c.exports.window);
    c.exports.resolution = er.integer("resolution", c.exports.resolution);
    c.exports.samples = er.count("samples", c.exports.samples);
    if (const json* coords = er.find("coordinates")) {
      if (!coords->is_array() || coords->size() != 3)
        throw ConfigError("export.coordinates", "expected three coordinate indices");
      c.exports.coordinates.clear();
      for (const auto& v : *coords) {
        if (!v.is_number_integer() || v.get<int>() < 0)
          throw ConfigError("export.coordinates", "indices must be non-negative integers");
        c.exports.coordinates.push_back(v.get<int>());
      }
    }
    er.finish();
  }
  if (!(c.exports.window > 0.0)) throw ConfigError("export.window", "must be positive");
  if (c.exports.resolution < 2) throw ConfigError("export.resolution", "must be at least 2");

  r.finish();

  // Cross-checks that need the assembled objects.
  try {
    build_group(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("group", e.what());
  }
  return c;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  using ojson = nlohmann::ordered_json;
  ojson out;
  out["n"] = c.n;

  ojson metric = {{"family", c.metric.family}};
  if (c.metric.family == "constant") metric["matrix"] = c.metric.matrix;
  if (c.metric.family == "conformal") metric["exponent"] = c.metric.exponent;
  if (c.metric.family == "revolution") {
    metric["R"] = c.metric.major_radius;
    metric["rho"] = c.metric.minor_radius;
    metric["offset"] = c.metric.offset;
  }
  if (c.metric.family == "expression") metric["entries"] = c.metric.entries;
  out["metric"] = metric;

  ojson group = {{"name", c.group.name}};
  if (!c.group.generators.empty()) {
    ojson gens = ojson::array();
    for (const auto& g : c.group.generators) gens.push_back({{"A", g.linear}, {"v", g.shift}});
    group["generators"] = gens;
  }
  out["group"] = group;

  ojson oracle = {{"name", c.oracle.name}, {"n", c.oracle.n}};
  if (c.oracle.name == "revolution") {
    oracle["R"] = c.oracle.major_radius;
    oracle["rho"] = c.oracle.minor_radius;
  }
  if (c.oracle.name == "expression") oracle["components"] = c.oracle.components;
  out["oracle"] = oracle;

  out["split"] = {{"fraction", c.split.fraction}, {"resolution", c.split.resolution}};
  out["spiral"] = {{"r_in", c.spiral.r_in}, {"r_out", c.spiral.r_out}, {"k", c.spiral.k},
                   {"tol", c.spiral.tol}};
  const auto& v = c.verify;
  out["verify"] = {
      {"seed", v.seed},
      {"samples", v.samples},
      {"window", v.window},
      {"jacobian_samples", v.jacobian_samples},
      {"translations", v.translations},
      {"translation_radius", v.translation_radius},
      {"bound_window", v.bound_window},
      {"bound_samples", v.bound_samples},
      {"pairs", v.pairs},
      {"domain_floor", v.domain_floor},
      {"image_floor", v.image_floor},
      {"shift_radius", v.shift_radius},
      {"properness_samples", v.properness_samples},
      {"properness_floor", v.properness_floor},
      {"spiral_window", v.spiral_window},
      {"spiral_samples", v.spiral_samples},
      {"pullback_tolerance", v.pullback_tolerance},
      {"fd_tolerance", v.fd_tolerance},
      {"equivariance_tolerance", v.equivariance_tolerance},
  };
  out["export"] = {{"window", c.exports.window},
                   {"resolution", c.exports.resolution},
                   {"samples", c.exports.samples},
                   {"coordinates", c.exports.coordinates}};
  return out;
}

MetricField build_metric(const RunConfig& c) {
  const int n = c.n;
  const auto& m = c.metric;
  MetricField field = MetricField::identity(n);
  if (m.family == "constant") {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = m.matrix.at(i).at(j);
    field = MetricField::constant(g);
  } else if (m.family == "conformal") {
    field = MetricField::conformal(n, expr::parse(m.exponent, n));
  } else if (m.family == "revolution") {
    field = MetricField::revolution(m.major_radius, m.minor_radius, m.offset);
  } else if (m.family == "expression") {
    std::vector<expr::Expr> entries;
    for (const auto& e : m.entries) entries.push_back(expr::parse(e, n));
    field = MetricField::expression(n, std::move(entries));
  }
  return field.with_symmetry(build_group(c));
}

SymmetryGroup build_group(const RunConfig& c) {
  if (c.group.name != "custom") return SymmetryGroup::named(c.group.name, c.n);
  SymmetryGroup group{"custom", c.n, {}};
  for (std::size_t i = 0; i < c.group.generators.size(); ++i) {
    const auto& g = c.group.generators[i];
    const std::string path = fmt::format("group.generators[{}]", i);
    if (g.linear.size() != static_cast<std::size_t>(c.n) || g.shift.size() != static_cast<std::size_t>(c.n))
      throw ConfigError(path, fmt::format("generator must act on dimension {}", c.n));
    IntMatrix a(c.n, c.n);
    RationalVector v(c.n);
    for (int r = 0; r < c.n; ++r) {
      if (g.linear[r].size() != static_cast<std::size_t>(c.n))
        throw ConfigError(path + ".A", fmt::format("row {} has the wrong length", r));
      for (int k = 0; k < c.n; ++k) a(r, k) = g.linear[r][k];
      try {
        v[r] = parse_rational(g.shift[r]);
      } catch (const Error& e) {
        throw ConfigError(fmt::format("{}.v[{}]", path, r), e.what());
      }
    }
    try {
      group.generators.push_back(BieberbachElement::make(a, v));
    } catch (const Error& e) {
      throw ConfigError(path, e.what());
    }
  }
  return group;
}

SpiralParameters spiral_parameters(const RunConfig& c) {
  return SpiralParameters{c.spiral.r_in, c.spiral.r_out, c.spiral.k, c.spiral.tol};
}

}  // namespace isoembed
