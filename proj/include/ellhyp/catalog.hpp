// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ellhyp/json_io.hpp"
#include "ellhyp/sampler.hpp"

namespace ellhyp {

// How an entry is evaluated.
//   transform   both sides by torus quadrature, rhs times prefactor
//   vanishing   lhs on the residue-corrected contour, expected value 0
//   fubini_pair the two iterated orders of a double integral versus a product
enum class EntryKind { transform, vanishing, fubini_pair };

struct ParamWindowSpec {
  Json names;  // template list
  std::string center = "1";
  std::string root = "1";
  double scale = 1.0;
  double spread = 0.1;
  std::optional<double> phase_halfwidth;
};

struct IdentityForm {
  std::string name;
  Json rhs;
  Json prefactor;
  int n_max = 0;  // 0 means the entry's range
};

struct SuiteCase {
  int n = 1;
  int m = 0;
  std::string form;
  std::map<std::string, int> signs;
};

struct IdentityEntry {
  std::string name;
  std::string anchor;
  std::string summary;
  EntryKind kind = EntryKind::transform;
  int n_min = 1, n_max = 1;
  bool uses_m = false;
  // Range of m, affine in n.
  AffineExpr m_min = AffineExpr::parse("0"), m_max = AffineExpr::parse("0");
  bool real_base = false;
  Base default_base{0.2, 0.2};
  std::map<int, double> tolerance;  // by n
  std::vector<ParamWindowSpec> windows;
  double margin = 0.05;  // contour margin required of sampled parameters
  Json balancing = Json::array();
  Json derived = Json::object();
  std::vector<std::string> sign_flags;
  Json lhs;
  std::vector<IdentityForm> forms;
  Json delegate;  // null unless the entry is a substitution of another
  // Coefficients whose pole lattices c p^a q^b must stay away from |z| = 1
  // (deformed-contour entries).
  Json lattice_guard = Json::array();
  std::map<std::string, std::vector<SuiteCase>> suites;

  double tolerance_for(int n) const;
  const IdentityForm& form(const std::string& name) const;
};

IdentityEntry entry_from_json(const Json& doc);

struct IdentityInfo {
  std::string name;
  std::string anchor;
  std::string summary;
  int n_min, n_max;
  bool uses_m;
  std::string m_range;
  EntryKind kind;
  std::vector<std::string> forms;
};

const char* entry_kind_name(EntryKind k);

class Catalog {
 public:
  // Loads every *.json in the directory, in file-name order.
  static Catalog load(const std::string& dir);
  static std::string default_dir();

  void add(IdentityEntry entry);
  std::vector<IdentityInfo> list_identities() const;
  const IdentityEntry& find(const std::string& name) const;
  const std::vector<IdentityEntry>& entries() const { return entries_; }

 private:
  std::vector<IdentityEntry> entries_;
};

struct InstanceRequest {
  std::string identity;
  int n = 1;
  int m = 0;
  std::string form;  // empty: the first form
  std::optional<Base> base;
  std::uint64_t seed = 1;
  std::optional<Assignment> params;  // free parameters; overrides sampling
  std::map<std::string, int> signs;  // sign flag name -> +1 / -1
};

struct Instance {
  IdentityEntry entry;
  int n = 1, m = 0;
  std::string form;
  Base base;
  std::uint64_t seed = 1;
  bool sampled = true;
  std::map<std::string, int> signs;
  VarBindings vars;
  RelationSet relations;
  std::map<std::string, Monomial, std::less<>> derived;
  std::vector<std::string> free_params;
  Assignment params;  // free, eliminated and derived
  IntegralSpec lhs, rhs;
  PrefactorSpec prefactor;
  ContourReport lhs_contour, rhs_contour;
  int sample_attempts = 0;
  std::shared_ptr<Instance> delegate;
  Assignment delegate_params;
};

Instance instantiate(const Catalog& catalog, const InstanceRequest& request);

struct VerifyPolicy {
  std::optional<ConvergencePolicy> grid;  // per-dimension defaults otherwise
  ParallelOptions par;
  bool timing = false;
};

enum class Verdict { pass, fail, no_converge };
const char* verdict_name(Verdict v);

struct SideResult {
  cplx value;
  int dim = 0;
  std::vector<int> grids;
  std::vector<double> deltas;
  bool converged = true;
};

struct VerificationReport {
  std::string identity;
  std::string form;
  int n = 1, m = 0;
  bool uses_m = false;
  Base base;
  std::uint64_t seed = 1;
  bool sampled = true;
  std::map<std::string, int> signs;
  std::vector<std::tuple<std::string, std::string, cplx>> params;  // name, expression, value
  SideResult lhs, rhs;
  cplx prefactor{1.0, 0.0};
  cplx rhs_total;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  std::optional<double> seconds;
  Verdict verdict = Verdict::pass;
  Json extras = Json::object();

  Json to_json() const;
};

VerificationReport verify(const Instance& instance, const VerifyPolicy& policy = {});

}  // namespace ellhyp
