#include "hyperfermi/graph.hpp"

#include <algorithm>
#include <map>
#include <json.hpp>
#include <stdexcept>

#include "hyperfermi/errors.hpp"

namespace hyperfermi {

WeightedGraph::WeightedGraph(int num_vertices) : n_(num_vertices), eps_(num_vertices, Rational(0)) {
  if (num_vertices < 1) throw UsageError("graph needs at least one vertex");
  if (num_vertices > kMaxVertices) throw CapacityError("graph has more than 64 vertices");
}

void WeightedGraph::add_edge(int u, int v, const Rational& weight) {
  Rational w = weight;
  w.canonicalize();
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw UsageError("edge endpoint out of range");
  if (u == v) throw UsageError("self-loops are not allowed");
  if (w < 0) throw DomainError("edge weights must be nonnegative");
  if (u > v) std::swap(u, v);
  for (auto it = edges_.begin(); it != edges_.end(); ++it) {
    if (it->u == u && it->v == v) {
      it->weight += w;
      return;
    }
  }
  if (sgn(w) != 0) edges_.push_back({u, v, w});
}

void WeightedGraph::set_eps(int v, const Rational& value) {
  if (value < 0) throw DomainError("vertex field must be nonnegative");
  eps_.at(v) = value;
  eps_.at(v).canonicalize();
}

void WeightedGraph::set_uniform_eps(const Rational& value) {
  for (int v = 0; v < n_; ++v) set_eps(v, value);
}

Rational WeightedGraph::weight(int u, int v) const {
  if (u > v) std::swap(u, v);
  for (const auto& e : edges_) {
    if (e.u == u && e.v == v) return e.weight;
  }
  return 0;
}

SiteMask WeightedGraph::all() const { return n_ == 64 ? ~SiteMask{0} : (SiteMask{1} << n_) - 1; }

std::vector<int> WeightedGraph::induced_edges(SiteMask Y) const {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(edges_.size()); ++k) {
    if ((Y >> edges_[k].u & 1) && (Y >> edges_[k].v & 1)) out.push_back(k);
  }
  return out;
}

bool WeightedGraph::connected(SiteMask Y) const {
  if (Y == 0) return false;
  SiteMask reached = Y & (~Y + 1);
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& e : edges_) {
      const SiteMask bu = site_bit(e.u), bv = site_bit(e.v);
      if (!(Y & bu) || !(Y & bv)) continue;
      const bool hu = reached & bu, hv = reached & bv;
      if (hu != hv) {
        reached |= bu | bv;
        grew = true;
      }
    }
  }
  return reached == Y;
}

Rational WeightedGraph::max_weighted_degree() const {
  std::vector<Rational> deg(n_, Rational(0));
  for (const auto& e : edges_) {
    deg[e.u] += e.weight;
    deg[e.v] += e.weight;
  }
  return *std::max_element(deg.begin(), deg.end());
}

WeightedGraph WeightedGraph::scaled(const Rational& s) const {
  WeightedGraph g(n_);
  g.eps_ = eps_;
  for (const auto& e : edges_) g.add_edge(e.u, e.v, e.weight * s);
  return g;
}

WeightedGraph path_graph(int n, const Rational& J) {
  WeightedGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, J);
  return g;
}

WeightedGraph cycle_graph(int n, const Rational& J) {
  WeightedGraph g = path_graph(n, J);
  if (n > 2) g.add_edge(n - 1, 0, J);
  return g;
}

WeightedGraph complete_graph(int n, const Rational& J) {
  WeightedGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j, J);
  }
  return g;
}

WeightedGraph grid_graph(int L, int W, const Rational& J) {
  if (L < 1 || W < 1) throw UsageError("grid sides must be >= 1");
  if (static_cast<long>(L) * W > kMaxVertices) throw CapacityError("grid has more than 64 vertices");
  WeightedGraph g(L * W);
  for (int y = 0; y < W; ++y) {
    for (int x = 0; x < L; ++x) {
      if (x + 1 < L) g.add_edge(x + L * y, x + 1 + L * y, J);
      if (y + 1 < W) g.add_edge(x + L * y, x + L * (y + 1), J);
    }
  }
  return g;
}

namespace {

int parse_positive(std::string_view s, std::string_view whole) {
  if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("malformed lattice spec '" + std::string(whole) + "'");
  }
  const int v = std::stoi(std::string(s));
  if (v < 1) throw std::invalid_argument("lattice sides must be >= 1");
  return v;
}

Rational json_rational(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw std::invalid_argument("expected a rational string or number, got " + j.dump());
}

}  // namespace

WeightedGraph parse_lattice_spec(std::string_view spec) {
  if (spec.starts_with("1d:")) return path_graph(parse_positive(spec.substr(3), spec));
  if (spec.starts_with("2d:")) {
    auto rest = spec.substr(3);
    auto x = rest.find('x');
    if (x == std::string_view::npos) throw std::invalid_argument("2d lattice spec needs LxW");
    return grid_graph(parse_positive(rest.substr(0, x), spec), parse_positive(rest.substr(x + 1), spec));
  }
  throw std::invalid_argument("unknown lattice spec '" + std::string(spec) + "'");
}

WeightedGraph graph_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("graph JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("graph JSON must be an object");
  WeightedGraph g;
  std::map<long, int> index;
  if (j.contains("lattice")) {
    const auto& lat = j.at("lattice");
    const int dim = lat.value("dim", 1);
    const std::string coupling = lat.value("J", std::string("nn"));
    if (coupling != "nn") throw std::invalid_argument("only nearest-neighbour lattices are supported");
    if (dim == 1) {
      g = path_graph(lat.at("length").get<int>());
    } else if (dim == 2) {
      const int L = lat.at("length").get<int>();
      g = grid_graph(L, lat.value("width", L));
    } else {
      throw std::invalid_argument("lattice dim must be 1 or 2");
    }
  } else {
    std::vector<long> ids = j.at("vertices").get<std::vector<long>>();
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw std::invalid_argument("duplicate vertex id");
    }
    for (int k = 0; k < static_cast<int>(ids.size()); ++k) index[ids[k]] = k;
    auto lookup = [&](long id) {
      auto it = index.find(id);
      if (it == index.end()) throw std::invalid_argument("unknown vertex id " + std::to_string(id));
      return it->second;
    };
    if (ids.empty()) throw std::invalid_argument("graph needs at least one vertex");
    g = WeightedGraph(static_cast<int>(ids.size()));
    for (const auto& e : j.value("edges", nlohmann::json::array())) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) {
        throw std::invalid_argument("edge must be [i, j] or [i, j, weight]");
      }
      const Rational w = e.size() == 3 ? json_rational(e[2]) : Rational(1);
      g.add_edge(lookup(e[0].get<long>()), lookup(e[1].get<long>()), w);
    }
  }
  if (j.contains("eps")) {
    const auto& eps = j.at("eps");
    if (eps.is_object()) {
      for (const auto& [key, value] : eps.items()) {
        long id = std::stol(key);
        if (!index.empty()) {
          auto it = index.find(id);
          id = it == index.end() ? -1 : it->second;
        }
        if (id < 0 || id >= g.num_vertices()) throw std::invalid_argument("eps for unknown vertex " + key);
        g.set_eps(static_cast<int>(id), json_rational(value));
      }
    } else {
      g.set_uniform_eps(json_rational(eps));
    }
  }
  return g;
}

std::string graph_to_json(const WeightedGraph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < g.num_vertices(); ++v) j["vertices"].push_back(v);
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) j["edges"].push_back({e.u, e.v, to_string(e.weight)});
  j["eps"] = nlohmann::json::object();
  for (int v = 0; v < g.num_vertices(); ++v) j["eps"][std::to_string(v)] = to_string(g.eps(v));
  return j.dump();
}

std::vector<int> sites_of(SiteMask m) {
  std::vector<int> out;
  for (; m != 0; m &= m - 1) out.push_back(__builtin_ctzll(m));
  return out;
}

}  // namespace hyperfermi
