// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/fubini.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <unordered_map>

#include "ellhyp/error.hpp"
#include "ellhyp/templates.hpp"

namespace ellhyp {

namespace {

const Monomial kP = Monomial::generator("p");
const Monomial kQ = Monomial::generator("q");
const Monomial kSqrtP = Monomial::generator("p", Rational(1, 2));
const Monomial kSqrtQ = Monomial::generator("q", Rational(1, 2));

std::vector<Monomial> variant_labels(const Monomial& x, GammaVariant v) {
  if (v == GammaVariant::HALF) return {x, kSqrtQ * x, kSqrtP * x, kSqrtP * kSqrtQ * x};
  return {x};
}

std::vector<Monomial> square_orbit_labels(const Monomial& c) {
  std::vector<Monomial> out;
  const Monomial minus = Monomial::phase_turns(Rational(1, 2));
  for (const Monomial& s : {Monomial(), kP, kQ, kP * kQ}) {
    const Monomial r = mono_root(s * c, 2);
    out.push_back(r);
    out.push_back(minus * r);
  }
  return out;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_add_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_mul_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

// Dense exponent vector; slot 0 holds the phase in eighths mod 8.
using Dense = std::vector<int>;

struct DenseHash {
  std::size_t operator()(const Dense& d) const {
    std::size_t h = 1469598103934665603ULL;
    for (int x : d) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
      h *= 1099511628211ULL;
    }
    return h;
  }
};

class Codec {
 public:
  explicit Codec(const FubiniGraph& g) {
    auto note = [&](const Monomial& m) {
      for (const auto& [name, e] : m.eighths()) index_.emplace(name, 0);
    };
    for (const auto& e : g.edges) note(e.label);
    for (const auto& h : g.half_edges) note(h.label);
    index_.emplace("p", 0);
    index_.emplace("q", 0);
    int k = 1;
    for (auto& [name, slot] : index_) {
      slot = k++;
      names_.push_back(name);
    }
    p_ = index_.at("p");
    q_ = index_.at("q");
  }
  std::size_t width() const { return names_.size() + 1; }
  Dense encode(const Monomial& m) const {
    Dense d(width(), 0);
    d[0] = m.phase_eighths();
    for (const auto& [name, e] : m.eighths()) d[static_cast<std::size_t>(index_.at(name))] = e;
    return d;
  }
  Monomial decode(const Dense& d) const {
    Monomial m = Monomial::phase_turns(Rational(d[0], 8));
    for (std::size_t k = 1; k < d.size(); ++k)
      if (d[k]) m = m * Monomial::generator(names_[k - 1], Rational(d[k], 8));
    return m;
  }
  static void mul_into(Dense& acc, const Dense& x) {
    acc[0] = (acc[0] + x[0]) % 8;
    for (std::size_t k = 1; k < acc.size(); ++k) acc[k] += x[k];
  }
  bool inside(const Dense& d) const {
    if (d[0] != 0) return false;
    for (std::size_t k = 1; k < d.size(); ++k) {
      const int e = d[k];
      if (static_cast<int>(k) == p_ || static_cast<int>(k) == q_) {
        if (e % 8 != 0 || e > 0) return false;
      } else if (e != 0) {
        return false;
      }
    }
    return true;
  }

 private:
  std::map<std::string, int> index_;
  std::vector<std::string> names_;
  int p_ = 0, q_ = 0;
};

struct Node {
  int parent;  // arena index, -1 at a start
  int edge;    // edge id used to arrive
  int vertex;
};

struct StateKey {
  int start, vertex;
  Dense w;
  bool operator==(const StateKey& o) const { return start == o.start && vertex == o.vertex && w == o.w; }
};

struct StateHash {
  std::size_t operator()(const StateKey& k) const {
    return DenseHash{}(k.w) ^ (static_cast<std::size_t>(k.start) * 0x9e3779b97f4a7c15ULL) ^
           (static_cast<std::size_t>(k.vertex) << 20);
  }
};

struct StateVal {
  std::uint64_t count;
  int node;
};

struct Found {
  std::uint64_t multiplicity = 0;
  std::size_t length = 0;
  std::string witness;
};

struct Enumeration {
  std::map<Dense, Found> open, closed;  // ordered for deterministic output
};

std::string walk_text(const FubiniGraph& g, const std::vector<Node>& arena, int node) {
  std::vector<int> chain;
  for (int k = node; k >= 0; k = arena[static_cast<std::size_t>(k)].parent) chain.push_back(k);
  std::reverse(chain.begin(), chain.end());
  std::string s = g.vertices[static_cast<std::size_t>(arena[static_cast<std::size_t>(chain.front())].vertex)];
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const Node& nd = arena[static_cast<std::size_t>(chain[i])];
    s += " -(" + g.edges[static_cast<std::size_t>(nd.edge)].label.str() + ")- " +
         g.vertices[static_cast<std::size_t>(nd.vertex)];
  }
  return s;
}

Enumeration enumerate(const FubiniGraph& g, const Codec& codec, const EnumerationOptions& opts) {
  const int n = g.n();
  if (n < 1) fail(ErrorCode::invalid_argument, "Fubini graph needs at least one vertex");
  const std::size_t open_bound = open_length_bound(n), closed_bound = closed_length_bound(n);
  const std::size_t max_edges = std::max(open_bound >= 2 ? open_bound - 2 : 0, closed_bound);

  std::vector<Dense> edge_dense, half_dense;
  for (const auto& e : g.edges) edge_dense.push_back(codec.encode(e.label));
  for (const auto& h : g.half_edges) half_dense.push_back(codec.encode(h.label));
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));  // (edge, other)
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    adj[static_cast<std::size_t>(g.edges[i].a)].push_back({static_cast<int>(i), g.edges[i].b});
    adj[static_cast<std::size_t>(g.edges[i].b)].push_back({static_cast<int>(i), g.edges[i].a});
  }
  std::vector<std::vector<int>> halves(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < g.half_edges.size(); ++i)
    halves[static_cast<std::size_t>(g.half_edges[i].vertex)].push_back(static_cast<int>(i));

  Enumeration out;
  std::vector<Node> arena;
  std::size_t total_states = 0;
  auto overflow = [&] {
    fail(ErrorCode::overflow, "path enumeration exceeded the cap of " + std::to_string(opts.cap) +
                                  " distinct states/products (" + std::to_string(n) + " vertices)");
  };

  using Layer = std::unordered_map<StateKey, StateVal, StateHash>;
  Layer layer;
  for (int s = 0; s < n; ++s) {
    arena.push_back({-1, -1, s});
    layer.emplace(StateKey{s, s, Dense(codec.width(), 0)}, StateVal{1, static_cast<int>(arena.size() - 1)});
  }

  auto harvest = [&](const Layer& L, std::size_t k) {
    // Sort keys so witnesses do not depend on hash order.
    std::vector<const std::pair<const StateKey, StateVal>*> items;
    items.reserve(L.size());
    for (const auto& kv : L) items.push_back(&kv);
    std::sort(items.begin(), items.end(), [](auto* a, auto* b) {
      if (a->first.start != b->first.start) return a->first.start < b->first.start;
      if (a->first.vertex != b->first.vertex) return a->first.vertex < b->first.vertex;
      return a->first.w < b->first.w;
    });
    for (const auto* kv : items) {
      const StateKey& key = kv->first;
      const StateVal& val = kv->second;
      if (k + 2 <= open_bound) {
        for (int h1 : halves[static_cast<std::size_t>(key.start)])
          for (int h2 : halves[static_cast<std::size_t>(key.vertex)]) {
            Dense w = key.w;
            Codec::mul_into(w, half_dense[static_cast<std::size_t>(h1)]);
            Codec::mul_into(w, half_dense[static_cast<std::size_t>(h2)]);
            auto [it, fresh] = out.open.try_emplace(std::move(w));
            if (fresh) {
              if (out.open.size() > opts.cap) overflow();
              it->second.length = k + 2;
              it->second.witness = "[" + g.half_edges[static_cast<std::size_t>(h1)].label.str() + "] " +
                                   walk_text(g, arena, val.node) + " [" +
                                   g.half_edges[static_cast<std::size_t>(h2)].label.str() + "]";
            }
            it->second.multiplicity = sat_add(it->second.multiplicity, val.count);
          }
      }
      if (k >= 1 && k <= closed_bound && key.start == key.vertex) {
        auto [it, fresh] = out.closed.try_emplace(key.w);
        if (fresh) {
          if (out.closed.size() > opts.cap) overflow();
          it->second.length = k;
          it->second.witness = walk_text(g, arena, val.node);
        }
        it->second.multiplicity = sat_add(it->second.multiplicity, val.count);
      }
    }
  };

  harvest(layer, 0);
  for (std::size_t k = 1; k <= max_edges; ++k) {
    Layer next;
    std::vector<const std::pair<const StateKey, StateVal>*> items;
    for (const auto& kv : layer) items.push_back(&kv);
    std::sort(items.begin(), items.end(), [](auto* a, auto* b) {
      if (a->first.start != b->first.start) return a->first.start < b->first.start;
      if (a->first.vertex != b->first.vertex) return a->first.vertex < b->first.vertex;
      return a->first.w < b->first.w;
    });
    for (const auto* kv : items) {
      for (const auto& [edge, other] : adj[static_cast<std::size_t>(kv->first.vertex)]) {
        StateKey nk{kv->first.start, other, kv->first.w};
        Codec::mul_into(nk.w, edge_dense[static_cast<std::size_t>(edge)]);
        auto it = next.find(nk);
        if (it == next.end()) {
          arena.push_back({kv->second.node, edge, other});
          next.emplace(std::move(nk), StateVal{kv->second.count, static_cast<int>(arena.size() - 1)});
          if (++total_states > opts.cap) overflow();
        } else {
          it->second.count = sat_add(it->second.count, kv->second.count);
        }
      }
    }
    if (next.empty()) break;
    layer = std::move(next);
    harvest(layer, k);
  }
  return out;
}

}  // namespace

std::size_t open_length_bound(int n) {
  std::size_t b = 2;
  for (int k = 1; k < n; ++k) b *= 3;
  return b;
}

std::size_t closed_length_bound(int n) {
  if (n < 2) return 1;  // floor(4/3): no closed walk fits
  std::size_t b = 4;
  for (int k = 2; k < n; ++k) b *= 3;
  return b;
}

FubiniGraph graph_from_spec(const IntegralSpec& spec) {
  spec.validate();
  FubiniGraph g;
  std::map<std::string, std::vector<int>> ids;
  for (const auto& grp : spec.groups) {
    for (int j = 0; j < grp.dim(); ++j) {
      ids[grp.name].push_back(g.n());
      g.vertices.push_back(grp.dim() == 1 ? grp.name : grp.name + std::to_string(j + 1));
    }
    if (grp.kernel.family == KernelFamily::II) {
      const auto& v = ids[grp.name];
      const Monomial t = relations_reduce(grp.kernel.t, spec.balancing);
      for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b)
          for (const Monomial& lab : variant_labels(t, grp.kernel.variant))
            g.edges.push_back({v[a], v[b], lab, "kernel " + grp.name});
    }
  }
  auto vars_of = [&](const Slot& s) {
    const std::vector<int>& all = ids[s.group];
    if (s.index < 0 || all.empty()) return all;
    return std::vector<int>{all[static_cast<std::size_t>(s.index)]};
  };
  for (const auto& f : spec.factors) {
    if (f.slots.empty()) continue;
    const Monomial c = relations_reduce(f.coefficient, spec.balancing);
    if (f.slots.size() == 1) {
      for (int v : vars_of(f.slots[0]))
        for (const Monomial& lab : variant_labels(c, f.variant)) {
          if (f.slots[0].orbit == 1) {
            g.half_edges.push_back({v, lab, f.describe()});
          } else {
            for (const Monomial& h : square_orbit_labels(lab)) g.half_edges.push_back({v, h, f.describe()});
          }
        }
    } else {
      if (f.slots[0].orbit != 1 || f.slots[1].orbit != 1)
        fail(ErrorCode::unsupported, "cross factor " + f.describe() +
                                         " has a +-2 orbit; the path criterion does not cover it");
      for (int a : vars_of(f.slots[0]))
        for (int b : vars_of(f.slots[1]))
          for (const Monomial& lab : variant_labels(c, f.variant)) g.edges.push_back({a, b, lab, f.describe()});
    }
  }
  return g;
}

std::vector<PathProduct> enumerate_path_products(const FubiniGraph& g, const EnumerationOptions& opts) {
  const Codec codec(g);
  const Enumeration e = enumerate(g, codec, opts);
  std::vector<PathProduct> out;
  for (const auto& [w, f] : e.open) out.push_back({codec.decode(w), PathKind::open, f.multiplicity, f.length, f.witness});
  for (const auto& [w, f] : e.closed)
    out.push_back({codec.decode(w), PathKind::closed, f.multiplicity, f.length, f.witness});
  return out;
}

PrefactorArguments prefactor_arguments(const FubiniGraph& g, const EnumerationOptions& opts) {
  PrefactorArguments out;
  for (const auto& pp : enumerate_path_products(g, opts)) {
    if (pp.kind == PathKind::open) {
      out.open.emplace_back(pp.product, pp.multiplicity);
    } else {
      const std::uint64_t m2 = sat_mul(pp.multiplicity, 2);
      for (const Monomial& s : {Monomial(), kP, kQ, kP * kQ}) out.closed.emplace_back(s * pp.product, m2);
    }
  }
  return out;
}

FubiniVerdict check_admissibility(const FubiniGraph& g, const RelationSet& relations, const EnumerationOptions& opts) {
  // Labels are normally reduced already; reducing again is harmless.
  FubiniGraph reduced = g;
  for (auto& e : reduced.edges) e.label = relations_reduce(e.label, relations);
  for (auto& h : reduced.half_edges) h.label = relations_reduce(h.label, relations);
  const Codec codec(reduced);
  const Enumeration e = enumerate(reduced, codec, opts);
  FubiniVerdict v;
  v.open_distinct = e.open.size();
  v.closed_distinct = e.closed.size();
  auto scan = [&](const std::map<Dense, Found>& m, PathKind kind, std::uint64_t& total) {
    for (const auto& [w, f] : m) {
      total = sat_add(total, f.multiplicity);
      if (codec.inside(w)) v.offending.push_back({codec.decode(w), kind, f.multiplicity, f.length, f.witness});
    }
  };
  scan(e.open, PathKind::open, v.open_total);
  scan(e.closed, PathKind::closed, v.closed_total);
  v.admissible = v.offending.empty();
  return v;
}

Json graph_to_json(const FubiniGraph& g) {
  Json j;
  j["vertices"] = g.vertices;
  Json edges = Json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"a", g.vertices[static_cast<std::size_t>(e.a)]},
                     {"b", g.vertices[static_cast<std::size_t>(e.b)]},
                     {"label", e.label.str()}});
  j["edges"] = edges;
  Json halves = Json::array();
  for (const auto& h : g.half_edges)
    halves.push_back({{"vertex", g.vertices[static_cast<std::size_t>(h.vertex)]}, {"label", h.label.str()}});
  j["half_edges"] = halves;
  return j;
}

Json verdict_to_json(const FubiniVerdict& v) {
  Json j;
  j["admissible"] = v.admissible;
  Json off = Json::array();
  for (const auto& pp : v.offending)
    off.push_back({{"product", pp.product.str()},
                   {"kind", pp.kind == PathKind::open ? "open" : "closed"},
                   {"multiplicity", pp.multiplicity},
                   {"length", pp.length},
                   {"witness", pp.witness}});
  j["offending"] = off;
  j["open_distinct"] = v.open_distinct;
  j["closed_distinct"] = v.closed_distinct;
  j["open_total"] = v.open_total;
  j["closed_total"] = v.closed_total;
  return j;
}

FubiniCase fubini_case_from_json(const Json& doc) {
  try {
    FubiniCase c;
    c.name = doc.at("name").get<std::string>();
    c.description = doc.value("description", std::string());
    c.expected = doc.value("expected", std::string());
    VarBindings vars;
    if (doc.contains("vars"))
      for (const auto& [k, v] : doc.at("vars").items()) vars[k] = v.get<std::int64_t>();
    c.spec = tmpl::build_integral(doc.at("integral"), vars);
    if (doc.contains("balancing"))
      for (const auto& r : tmpl::build_relations(doc.at("balancing"), vars)) c.spec.balancing.add(r);
    return c;
  } catch (const Json::exception& e) {
    fail(ErrorCode::parse, std::string("fubini case: ") + e.what());
  }
}

FubiniCase load_fubini_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::parse, path + ": " + e.what());
  }
  return fubini_case_from_json(doc);
}

std::vector<std::string> list_fubini_corpus(const std::string& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.path().extension() == ".json") out.push_back(entry.path().string());
  if (ec) fail(ErrorCode::io, "cannot list " + dir + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ellhyp
