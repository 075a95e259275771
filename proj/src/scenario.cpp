#include "mlop/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "mlop/errors.hpp"

namespace mlop {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double parse_real(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(field + ": expected a real number, got '" + text + "'");
  }
}

std::uint64_t parse_uint(const std::string& field, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ParseError(field + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError(field + ": expected true/false, got '" + text + "'");
}

MuLaw parse_mu(const std::string& field, const std::string& text) {
  const auto w = words(text);
  if (w.size() == 1) return MuLaw::point(parse_real(field, w[0]));
  if (w.size() == 2 && w[0] == "point") return MuLaw::point(parse_real(field, w[1]));
  if (w.size() == 3 && w[0] == "uniform")
    return MuLaw::uniform(parse_real(field, w[1]), parse_real(field, w[2]));
  throw ParseError(field + ": expected '<value>' or 'uniform <lo> <hi>', got '" + text + "'");
}

ThetaLaw parse_theta(const std::string& field, const std::string& text) {
  const auto w = words(text);
  if (w.size() == 1) return ThetaLaw::point(parse_real(field, w[0]));
  if (w.size() == 2 && w[0] == "point") return ThetaLaw::point(parse_real(field, w[1]));
  if (w.size() == 2 && w[0] == "biased") return ThetaLaw::biased(parse_real(field, w[1]));
  if (w.size() == 3 && w[0] == "uniform")
    return ThetaLaw::uniform(parse_real(field, w[1]), parse_real(field, w[2]));
  throw ParseError(field +
                   ": expected '<value>', 'uniform <lo> <hi>' or 'biased <offset>', got '" +
                   text + "'");
}

std::vector<Edge> parse_edge_list(const std::string& field, const std::string& text) {
  std::vector<Edge> edges;
  if (trim(text).empty()) return edges;
  for (const auto& item : split(text, ',')) {
    const auto ends = split(item, '-');
    if (ends.size() != 2) throw ParseError(field + ": bad edge '" + item + "'");
    const auto a = parse_uint(field, ends[0]);
    const auto b = parse_uint(field, ends[1]);
    if (a == 0 || b == 0) throw ParseError(field + ": vertices are 1-based");
    if (a == b) throw ParseError(field + ": self-loop '" + item + "'");
    edges.emplace_back(static_cast<Vertex>(a - 1), static_cast<Vertex>(b - 1));
  }
  return edges;
}

std::string format_real(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string format_mu(const MuLaw& law) {
  if (law.kind == MuLaw::Kind::point) return format_real(law.a);
  return "uniform " + format_real(law.a) + " " + format_real(law.b);
}

std::string format_theta(const ThetaLaw& law) {
  switch (law.kind) {
    case ThetaLaw::Kind::point: return format_real(law.a);
    case ThetaLaw::Kind::uniform: return "uniform " + format_real(law.a) + " " + format_real(law.b);
    case ThetaLaw::Kind::biased: return "biased " + format_real(law.a);
  }
  return {};
}

// Walks one section, dispatching each key and rejecting unknown ones.
template <class Handler>
void for_each_key(const pt::ptree& section, const std::string& where, Handler&& handle) {
  for (const auto& [key, node] : section) {
    const std::string field = where.empty() ? key : where + "." + key;
    if (!handle(key, field, trim(node.data())))
      throw ParseError("unknown key '" + field + "'");
  }
}

}  // namespace

std::string_view to_string(GraphSpec::Mode mode) noexcept {
  switch (mode) {
    case GraphSpec::Mode::er_chain: return "er_chain";
    case GraphSpec::Mode::er: return "er";
    case GraphSpec::Mode::fixed: return "static";
  }
  return "?";
}

std::string_view to_string(InitSpec::Law law) noexcept {
  switch (law) {
    case InitSpec::Law::uniform01: return "uniform01";
    case InitSpec::Law::cauchy: return "cauchy";
    case InitSpec::Law::explicit_values: return "explicit";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (n < 2) throw ConfigError("n: must be >= 2");
  if (m < 1) throw ConfigError("m: must be >= 1");
  if (d < 1) throw ConfigError("d: must be >= 1");
  if (horizon < 1) throw ConfigError("horizon: must be >= 1");
  if (!(convergence_tol > 0.0) || !std::isfinite(convergence_tol))
    throw ConfigError("convergence_tol: must be > 0");
  if (!(graph.p >= 0.0 && graph.p <= 1.0)) throw ConfigError("graph.p: must lie in [0, 1]");
  if (graph.mode == GraphSpec::Mode::fixed && !graph.layers.empty()) {
    if (graph.layers.size() != m)
      throw ConfigError("graph.layerK: explicit topology needs exactly m layers");
    for (const auto& layer : graph.layers)
      for (const Edge& e : layer)
        if (e.v >= n) throw ConfigError("graph.layerK: vertex beyond n");
  } else if (!graph.layers.empty()) {
    throw ConfigError("graph.layerK: explicit layers require graph.mode = static");
  }
  rates.validate();
  if (init.law == InitSpec::Law::cauchy && !(init.scale > 0.0))
    throw ConfigError("init.scale: must be > 0");
  if (init.law == InitSpec::Law::explicit_values) {
    if (init.values.size() != n * m * d)
      throw ConfigError("init.values: need m*n*d = " + std::to_string(n * m * d) + " values, got " +
                        std::to_string(init.values.size()));
    for (double v : init.values)
      if (!std::isfinite(v)) throw ConfigError("init.values: non-finite value");
  }
}

ScenarioConfig thm1_scenario() {
  ScenarioConfig c;
  c.name = "thm1";
  c.n = 100;
  c.m = 5;
  c.d = 1;
  c.horizon = 1000;
  c.graph = {GraphSpec::Mode::er_chain, 0.05, true, {}};
  c.matcher = MatcherLaw::chain_forced;
  c.rates.chain = {MuLaw::uniform(0.1, 0.5), ThetaLaw::biased(1.1)};
  c.rates.other = {MuLaw::uniform(0.0, 0.5), ThetaLaw::biased(1.0)};
  c.init.law = InitSpec::Law::uniform01;
  return c;
}

ScenarioConfig thm2_scenario() {
  ScenarioConfig c = thm1_scenario();
  c.name = "thm2";
  c.matcher = MatcherLaw::uniform;
  c.rates.chain = {MuLaw::uniform(0.1, 0.5), ThetaLaw::point(1.0)};
  c.rates.other = {MuLaw::uniform(0.0, 0.5), ThetaLaw::point(1.0)};
  c.init.law = InitSpec::Law::cauchy;
  c.init.loc = 0.0;
  c.init.scale = 1.0;
  return c;
}

std::vector<std::string> builtin_scenario_names() { return {"thm1", "thm2"}; }

std::optional<ScenarioConfig> builtin_scenario(std::string_view name) {
  if (name == "thm1") return thm1_scenario();
  if (name == "thm2") return thm2_scenario();
  return std::nullopt;
}

ScenarioConfig parse_scenario(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }

  ScenarioConfig c;
  if (const auto base = tree.get_optional<std::string>(pt::ptree::path_type("extends", '/'))) {
    auto found = builtin_scenario(trim(*base));
    if (!found) throw ParseError("extends: unknown built-in scenario '" + trim(*base) + "'");
    c = std::move(*found);
    c.name = "custom";
  }

  std::vector<std::vector<Edge>> explicit_layers;
  std::set<std::size_t> explicit_seen;

  for (const auto& [key, node] : tree) {
    const bool is_section = key == "graph" || key == "matcher" || key == "rates.chain" ||
                            key == "rates.other" || key == "init";
    if (node.empty() && is_section) continue;  // empty section
    if (node.empty()) {
      // Top-level key.
      const std::string v = trim(node.data());
      if (key == "extends") continue;
      else if (key == "name") c.name = v;
      else if (key == "n") c.n = parse_uint(key, v);
      else if (key == "m") c.m = parse_uint(key, v);
      else if (key == "d") c.d = parse_uint(key, v);
      else if (key == "horizon") c.horizon = parse_uint(key, v);
      else if (key == "seed") c.seed = parse_uint(key, v);
      else if (key == "record_every") c.record_every = parse_uint(key, v);
      else if (key == "convergence_tol") c.convergence_tol = parse_real(key, v);
      else throw ParseError("unknown key '" + key + "'");
      continue;
    }
    if (key == "graph") {
      for_each_key(node, key, [&](const std::string& k, const std::string& f, const std::string& v) {
        if (k == "mode") {
          if (v == "er_chain") c.graph.mode = GraphSpec::Mode::er_chain;
          else if (v == "er") c.graph.mode = GraphSpec::Mode::er;
          else if (v == "static") c.graph.mode = GraphSpec::Mode::fixed;
          else throw ParseError(f + ": expected er_chain, er or static, got '" + v + "'");
        } else if (k == "p") {
          c.graph.p = parse_real(f, v);
        } else if (k == "chain") {
          c.graph.chain = parse_bool(f, v);
        } else if (k.rfind("layer", 0) == 0 && k.size() > 5) {
          const auto idx = parse_uint(f, k.substr(5));
          if (idx == 0) throw ParseError(f + ": layers are 1-based");
          if (!explicit_seen.insert(idx).second) throw ParseError(f + ": duplicate layer");
          if (explicit_layers.size() < idx) explicit_layers.resize(idx);
          explicit_layers[idx - 1] = parse_edge_list(f, v);
        } else {
          return false;
        }
        return true;
      });
    } else if (key == "matcher") {
      for_each_key(node, key, [&](const std::string& k, const std::string& f, const std::string& v) {
        if (k != "law") return false;
        const auto law = parse_matcher_law(v);
        if (!law) throw ParseError(f + ": expected uniform, chain_forced or empty, got '" + v + "'");
        c.matcher = *law;
        return true;
      });
    } else if (key == "rates.chain" || key == "rates.other") {
      EdgeClassLaw& law = key == "rates.chain" ? c.rates.chain : c.rates.other;
      for_each_key(node, key, [&](const std::string& k, const std::string& f, const std::string& v) {
        if (k == "mu") law.mu = parse_mu(f, v);
        else if (k == "theta") law.theta = parse_theta(f, v);
        else return false;
        return true;
      });
    } else if (key == "init") {
      for_each_key(node, key, [&](const std::string& k, const std::string& f, const std::string& v) {
        if (k == "law") {
          if (v == "uniform01") c.init.law = InitSpec::Law::uniform01;
          else if (v == "cauchy") c.init.law = InitSpec::Law::cauchy;
          else if (v == "explicit") c.init.law = InitSpec::Law::explicit_values;
          else throw ParseError(f + ": expected uniform01, cauchy or explicit, got '" + v + "'");
        } else if (k == "loc") {
          c.init.loc = parse_real(f, v);
        } else if (k == "scale") {
          c.init.scale = parse_real(f, v);
        } else if (k == "values") {
          c.init.values.clear();
          for (const auto& item : split(v, ',')) c.init.values.push_back(parse_real(f, item));
        } else {
          return false;
        }
        return true;
      });
    } else {
      throw ParseError("unknown section '[" + key + "]'");
    }
  }

  if (!explicit_layers.empty()) c.graph.layers = std::move(explicit_layers);
  c.validate();
  return c;
}

ScenarioConfig load_scenario(std::string_view name_or_path) {
  if (auto builtin = builtin_scenario(name_or_path)) return *builtin;
  const std::filesystem::path path{std::string(name_or_path)};
  std::ifstream in(path);
  if (!in) {
    throw ParseError("scenario '" + std::string(name_or_path) +
                     "' is neither a built-in name (thm1, thm2) nor a readable file");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string to_ini(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "name = " << c.name << '\n'
      << "n = " << c.n << '\n'
      << "m = " << c.m << '\n'
      << "d = " << c.d << '\n'
      << "horizon = " << c.horizon << '\n'
      << "seed = " << c.seed << '\n'
      << "record_every = " << c.record_every << '\n'
      << "convergence_tol = " << format_real(c.convergence_tol) << '\n'
      << "\n[graph]\n"
      << "mode = " << to_string(c.graph.mode) << '\n'
      << "p = " << format_real(c.graph.p) << '\n'
      << "chain = " << (c.graph.chain ? "true" : "false") << '\n';
  for (std::size_t k = 0; k < c.graph.layers.size(); ++k) {
    out << "layer" << (k + 1) << " =";
    const char* sep = " ";
    for (const Edge& e : c.graph.layers[k]) {
      out << sep << (e.u + 1) << '-' << (e.v + 1);
      sep = ",";
    }
    out << '\n';
  }
  out << "\n[matcher]\nlaw = " << to_string(c.matcher) << '\n'
      << "\n[rates.chain]\nmu = " << format_mu(c.rates.chain.mu) << '\n'
      << "theta = " << format_theta(c.rates.chain.theta) << '\n'
      << "\n[rates.other]\nmu = " << format_mu(c.rates.other.mu) << '\n'
      << "theta = " << format_theta(c.rates.other.theta) << '\n'
      << "\n[init]\nlaw = " << to_string(c.init.law) << '\n';
  if (c.init.law == InitSpec::Law::cauchy)
    out << "loc = " << format_real(c.init.loc) << "\nscale = " << format_real(c.init.scale) << '\n';
  if (c.init.law == InitSpec::Law::explicit_values) {
    out << "values =";
    const char* sep = " ";
    for (double v : c.init.values) {
      out << sep << format_real(v);
      sep = ",";
    }
    out << '\n';
  }
  return out.str();
}

OpinionState initial_state(const ScenarioConfig& c) {
  if (c.init.law == InitSpec::Law::explicit_values)
    return OpinionState(c.n, c.m, c.d, c.init.values);
  Rng rng = Rng::keyed(c.seed, Stream::init, {});
  std::vector<double> values(c.n * c.m * c.d);
  for (double& v : values) {
    v = c.init.law == InitSpec::Law::cauchy ? rng.cauchy(c.init.loc, c.init.scale)
                                             : rng.uniform01();
  }
  return OpinionState(c.n, c.m, c.d, std::move(values));
}

MultilayerTopology topology_at(const ScenarioConfig& c, std::uint64_t t) {
  std::vector<LayerGraph> layers;
  layers.reserve(c.m);
  if (c.graph.mode == GraphSpec::Mode::fixed && !c.graph.layers.empty()) {
    for (const auto& edges : c.graph.layers) layers.emplace_back(c.n, edges);
    return MultilayerTopology(std::move(layers));
  }
  const bool fixed = c.graph.mode == GraphSpec::Mode::fixed;
  const bool chain = c.graph.mode == GraphSpec::Mode::er_chain || (fixed && c.graph.chain);
  const std::uint64_t key_t = fixed ? 0 : t;
  for (std::size_t k = 0; k < c.m; ++k) {
    Rng rng = Rng::keyed(c.seed, Stream::graph, {key_t, k});
    layers.push_back(generate_er(c.n, c.graph.p, rng, chain));
  }
  return MultilayerTopology(std::move(layers));
}

}  // namespace mlop
