// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellhyp/ispec.hpp"
#include "ellhyp/json_io.hpp"

namespace ellhyp {

struct FubiniEdge {
  int a = 0, b = 0;
  Monomial label;
  std::string origin;
};

struct FubiniHalfEdge {
  int vertex = 0;
  Monomial label;
  std::string origin;
};

// One vertex per scalar integration variable.
struct FubiniGraph {
  std::vector<std::string> vertices;
  std::vector<FubiniEdge> edges;
  std::vector<FubiniHalfEdge> half_edges;
  int n() const { return static_cast<int>(vertices.size()); }
};

// Labels are reduced by spec.balancing. A variable factor Gamma(c z^{+-1})
// becomes a half-edge c, Gamma(c z^{+-2}) the eight half-edges
// +-sqrt(c), +-sqrt(pc), +-sqrt(qc), +-sqrt(pqc), and a cross factor
// Gamma(c y^{+-1} z^{+-1}) one edge c per variable pair. Half-base factors
// contribute the four labels x, q^1/2 x, p^1/2 x, (pq)^1/2 x; the (p,q^2)
// base is bounded by its (p,q) label. Cross factors with a +-2 orbit are
// rejected with ErrorCode::unsupported.
FubiniGraph graph_from_spec(const IntegralSpec& spec);

enum class PathKind { open, closed };

struct PathProduct {
  Monomial product;
  PathKind kind = PathKind::open;
  std::uint64_t multiplicity = 0;  // saturates at UINT64_MAX
  std::size_t length = 0;          // of the witness
  std::string witness;
};

struct EnumerationOptions {
  std::size_t cap = 1000000;  // distinct walk states and distinct products
};

// Open paths up to 2*3^(n-1) (half-edges count 1 each), closed paths up to
// 4*3^(n-2). Multiplicities count directed walks: a path and its reversal are
// distinct unless they coincide, and closed walks are counted once per
// starting position and direction.
std::vector<PathProduct> enumerate_path_products(const FubiniGraph& g, const EnumerationOptions& opts = {});

std::size_t open_length_bound(int n);
std::size_t closed_length_bound(int n);

struct PrefactorArguments {
  std::vector<std::pair<Monomial, std::uint64_t>> open;
  // w, pw, qw, pqw for every closed product, each with twice the path count.
  std::vector<std::pair<Monomial, std::uint64_t>> closed;
};

PrefactorArguments prefactor_arguments(const FubiniGraph& g, const EnumerationOptions& opts = {});

struct FubiniVerdict {
  bool admissible = true;
  std::vector<PathProduct> offending;
  std::size_t open_distinct = 0, closed_distinct = 0;
  std::uint64_t open_total = 0, closed_total = 0;
};

FubiniVerdict check_admissibility(const FubiniGraph& g, const RelationSet& relations,
                                  const EnumerationOptions& opts = {});

Json graph_to_json(const FubiniGraph& g);
Json verdict_to_json(const FubiniVerdict& v);

// Corpus case: an integral template instantiated at fixed template variables,
// with the verdict it is expected to receive.
struct FubiniCase {
  std::string name;
  std::string description;
  IntegralSpec spec;
  std::string expected;  // admissible | inadmissible | unsupported
};

FubiniCase fubini_case_from_json(const Json& doc);
FubiniCase load_fubini_case(const std::string& path);
std::vector<std::string> list_fubini_corpus(const std::string& dir);

}  // namespace ellhyp
