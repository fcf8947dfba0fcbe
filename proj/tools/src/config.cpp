#include "robin_plap_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace robin_plap::cli {

namespace {

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run", {"command", "seed", "out"}},
      {"mesh", {"kind", "a", "b", "n", "lx", "ly", "nx", "ny", "quadrature_order"}},
      {"operator", {"p1", "p2", "beta1", "beta2", "eps_reg"}},
      {"reaction",
       {"name", "f1", "f2", "k1_plus", "k2_plus", "k1_minus", "k2_minus", "eta1", "eta2", "theta1", "theta2"}},
      {"bump", {"eta", "theta", "k_plus", "k_minus", "a", "b", "c", "m", "c_neg", "eta1", "theta1", "k_plus1",
                "k_minus1", "a1", "b1", "c1", "m1", "c_neg1", "eta2", "theta2", "k_plus2", "k_minus2", "a2", "b2",
                "c2", "m2", "c_neg2"}},
      {"constants", {}},
      {"solve", {"forcing", "tol", "max_iters"}},
      {"antimax", {"delta_grid", "below_factor", "assert_below"}},
      {"subsuper", {"probe_count", "picard_tol", "max_outer", "max_halvings"}},
      {"third", {"scales", "xi1", "xi2", "continuation", "tol"}},
  };
  return s;
}

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

double to_double(const std::string& section, const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || text.empty() || !std::isfinite(v))
    throw ConfigError(where(section, key) + ": expected a finite number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& section, const std::string& key, const std::string& text) {
  const double v = to_double(section, key, text);
  if (v != std::floor(v)) throw ConfigError(where(section, key) + ": expected an integer, got '" + text + "'");
  return static_cast<long long>(v);
}

std::vector<double> to_list(const std::string& section, const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError(where(section, key) + ": empty list entry");
    out.push_back(to_double(section, key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError(where(section, key) + ": empty list");
  return out;
}

bool to_bool(const std::string& section, const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(where(section, key) + ": expected a boolean, got '" + text + "'");
}

class Section {
 public:
  Section(std::string name, const ptree* tree) : name_(std::move(name)), tree_(tree) {}

  std::optional<std::string> text(const std::string& key) const {
    if (!tree_) return std::nullopt;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return it->second.data();
  }
  void number(const std::string& key, double& out) const {
    if (auto t = text(key)) out = to_double(name_, key, *t);
  }
  void integer(const std::string& key, int& out) const {
    if (auto t = text(key)) out = static_cast<int>(to_integer(name_, key, *t));
  }
  void string(const std::string& key, std::string& out) const {
    if (auto t = text(key)) out = *t;
  }
  void list(const std::string& key, std::vector<double>& out) const {
    if (auto t = text(key)) out = to_list(name_, key, *t);
  }
  const std::string& name() const { return name_; }
  const ptree* tree() const { return tree_; }

 private:
  std::string name_;
  const ptree* tree_;
};

Section section(const ptree& root, const std::string& name) {
  const auto it = root.find(name);
  return Section(name, it == root.not_found() ? nullptr : &it->second);
}

void parse_bump(const Section& s, std::array<BumpParameters, 2>& shape) {
  const std::pair<const char*, double BumpParameters::*> fields[] = {
      {"eta", &BumpParameters::eta}, {"theta", &BumpParameters::theta}, {"k_plus", &BumpParameters::k_plus},
      {"k_minus", &BumpParameters::k_minus}, {"a", &BumpParameters::a}, {"b", &BumpParameters::b},
      {"c", &BumpParameters::c}, {"m", &BumpParameters::m}, {"c_neg", &BumpParameters::c_neg}};
  for (const auto& [key, member] : fields) {
    for (int i = 0; i < 2; ++i) {
      s.number(key, shape[i].*member);
      s.number(std::string(key) + std::to_string(i + 1), shape[i].*member);
    }
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (std::find(known_commands().begin(), known_commands().end(), command) == known_commands().end())
    throw ConfigError("unknown command '" + command + "'");
  if (!mesh) throw ConfigError("missing [mesh] block");
  if (!op) throw ConfigError("missing [operator] block");
  const bool needs_reaction = command == "subsuper" || command == "third" || command == "verify-all";
  if (needs_reaction && !reaction) throw ConfigError("missing [reaction] block (required by '" + command + "')");

  if (mesh->kind == "interval") {
    if (!(mesh->a < mesh->b)) throw ConfigError("[mesh] requires a < b");
    if (mesh->n < 2) throw ConfigError("[mesh] requires n >= 2");
  } else if (mesh->kind == "rect") {
    if (!(mesh->lx > 0 && mesh->ly > 0)) throw ConfigError("[mesh] requires lx, ly > 0");
    if (mesh->nx < 2 || mesh->ny < 2) throw ConfigError("[mesh] requires nx, ny >= 2");
  } else {
    throw ConfigError("[mesh] kind must be 'interval' or 'rect', got '" + mesh->kind + "'");
  }
  if (mesh->quadrature_order < 1 || mesh->quadrature_order > 10)
    throw ConfigError("[mesh] quadrature_order must lie in 1..10");
  for (int i = 0; i < 2; ++i) {
    if (!(op->p[i] > 1.0)) throw ConfigError("[operator] p" + std::to_string(i + 1) + " must exceed 1");
    if (!(op->beta[i] > 0.0)) throw ConfigError("[operator] beta" + std::to_string(i + 1) + " must be positive");
  }
  if (op->eps_reg && *op->eps_reg < 0.0) throw ConfigError("[operator] eps_reg must be non-negative");
  if (reaction) {
    const auto& n = reaction->name;
    if (n != "bump" && n != "bump-coupled" && n != "zero" && n != "expression")
      throw ConfigError("[reaction] unknown name '" + n + "'");
    if (n == "expression" && (reaction->f1.empty() || reaction->f2.empty()))
      throw ConfigError("[reaction] expression reactions need f1 and f2");
  }
  if (solve.tol <= 0.0 || solve.max_iters < 1) throw ConfigError("[solve] tol and max_iters must be positive");
  if (subsuper.probe_count < 0) throw ConfigError("[subsuper] probe_count must be non-negative");
  if (third.scales.empty()) throw ConfigError("[third] scales must not be empty");
}

ScenarioConfig parse_config(std::istream& in) {
  ptree root;
  try {
    boost::property_tree::ini_parser::read_ini(in, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  for (const auto& [name, body] : root) {
    const auto it = schema().find(name);
    if (it == schema().end()) {
      if (body.empty()) throw ConfigError("key '" + name + "' outside any section");
      throw ConfigError("unknown section [" + name + "]");
    }
    if (name == "constants") continue;
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key " + where(name, key));
    }
  }

  ScenarioConfig cfg;
  const Section run = section(root, "run");
  run.string("command", cfg.command);
  if (auto t = run.text("seed")) cfg.seed = static_cast<std::uint64_t>(to_integer("run", "seed", *t));
  if (auto t = run.text("out")) cfg.out_dir = *t;

  if (const Section s = section(root, "mesh"); s.tree()) {
    MeshBlock m;
    s.string("kind", m.kind);
    s.number("a", m.a);
    s.number("b", m.b);
    s.integer("n", m.n);
    s.number("lx", m.lx);
    s.number("ly", m.ly);
    s.integer("nx", m.nx);
    s.integer("ny", m.ny);
    s.integer("quadrature_order", m.quadrature_order);
    cfg.mesh = m;
  }
  if (const Section s = section(root, "operator"); s.tree()) {
    OperatorBlock o;
    s.number("p1", o.p[0]);
    s.number("p2", o.p[1]);
    s.number("beta1", o.beta[0]);
    s.number("beta2", o.beta[1]);
    if (auto t = s.text("eps_reg")) o.eps_reg = to_double("operator", "eps_reg", *t);
    cfg.op = o;
  }
  if (const Section s = section(root, "reaction"); s.tree()) {
    ReactionBlock r;
    s.string("name", r.name);
    s.string("f1", r.f1);
    s.string("f2", r.f2);
    for (int i = 0; i < 2; ++i) {
      const std::string c = std::to_string(i + 1);
      s.number("k" + c + "_plus", r.k_plus[i]);
      s.number("k" + c + "_minus", r.k_minus[i]);
      s.number("eta" + c, r.eta[i]);
      s.number("theta" + c, r.theta[i]);
    }
    parse_bump(section(root, "bump"), r.shape);
    if (const Section c = section(root, "constants"); c.tree()) {
      for (const auto& [key, value] : *c.tree()) r.constants[key] = to_double("constants", key, value.data());
    }
    cfg.reaction = r;
  }
  if (const Section s = section(root, "solve"); s.tree()) {
    s.string("forcing", cfg.solve.forcing);
    s.number("tol", cfg.solve.tol);
    s.integer("max_iters", cfg.solve.max_iters);
  }
  if (const Section s = section(root, "antimax"); s.tree()) {
    s.list("delta_grid", cfg.antimax.delta_grid);
    s.number("below_factor", cfg.antimax.below_factor);
    s.number("assert_below", cfg.antimax.assert_below);
  }
  if (const Section s = section(root, "subsuper"); s.tree()) {
    s.integer("probe_count", cfg.subsuper.probe_count);
    s.number("picard_tol", cfg.subsuper.picard_tol);
    s.integer("max_outer", cfg.subsuper.max_outer);
    s.integer("max_halvings", cfg.subsuper.max_halvings);
  }
  if (const Section s = section(root, "third"); s.tree()) {
    s.list("scales", cfg.third.scales);
    s.number("tol", cfg.third.tol);
    if (auto t = s.text("continuation")) cfg.third.continuation = to_bool("third", "continuation", *t);
    const auto x1 = s.text("xi1");
    const auto x2 = s.text("xi2");
    if (x1.has_value() != x2.has_value()) throw ConfigError("[third] xi1 and xi2 must be given together");
    if (x1) cfg.third.xi = std::array<double, 2>{to_double("third", "xi1", *x1), to_double("third", "xi2", *x2)};
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace robin_plap::cli
