// Copyright 2026 The ellhyp Authors
// SPDX-License-Identifier: Apache-2.0
#include "ellhyp/quad.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include "ellhyp/error.hpp"

namespace ellhyp {

namespace {

constexpr std::size_t kChunk = 1024;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

cplx pairwise_range(const cplx* v, std::size_t n) {
  if (n <= 8) {
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_range(v, h) + pairwise_range(v + h, n - h);
}

std::vector<cplx> roots_of_unity(int N) {
  std::vector<cplx> w(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    const double th = 2.0 * std::numbers::pi * k / N;
    w[static_cast<std::size_t>(k)] = cplx(std::cos(th), std::sin(th));
  }
  return w;
}

}  // namespace

Grid Grid::uniform(int dim, int N) { return Grid{std::vector<int>(static_cast<std::size_t>(dim), N)}; }

std::size_t Grid::points() const {
  std::size_t n = 1;
  for (int s : sizes) n *= static_cast<std::size_t>(s);
  return n;
}

void Grid::validate() const {
  for (int s : sizes)
    if (s < 8 || !is_pow2(s)) fail(ErrorCode::invalid_argument, "grid sizes must be powers of two >= 8");
}

unsigned ParallelOptions::resolved() const {
  if (threads) return threads;
  if (const char* env = std::getenv("ELLHYP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ConvergencePolicy ConvergencePolicy::for_dimension(int dim) {
  if (dim <= 1) return {32, 512, 1e-9};
  if (dim == 2) return {32, 256, 1e-9};
  return {32, 128, 1e-5};
}

cplx pairwise_sum(std::span<const cplx> values) { return pairwise_range(values.data(), values.size()); }

namespace {

// Generic chunked average over a mixed-radix grid.
cplx grid_average(const std::function<cplx(std::span<const int>)>& density, const std::vector<int>& sizes,
                  const ParallelOptions& par) {
  std::size_t total = 1;
  for (int s : sizes) total *= static_cast<std::size_t>(s);
  if (sizes.empty()) return density({});
  const std::size_t nchunks = (total + kChunk - 1) / kChunk;
  std::vector<cplx> chunk_sums(nchunks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    std::vector<cplx> buf(kChunk);
    std::vector<int> idx(sizes.size());
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks || failed.load()) return;
      const std::size_t begin = c * kChunk, end = std::min(total, begin + kChunk);
      try {
        for (std::size_t flat = begin; flat < end; ++flat) {
          std::size_t rem = flat;
          for (std::size_t d = sizes.size(); d-- > 0;) {
            idx[d] = static_cast<int>(rem % static_cast<std::size_t>(sizes[d]));
            rem /= static_cast<std::size_t>(sizes[d]);
          }
          buf[flat - begin] = density(idx);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
      chunk_sums[c] = pairwise_range(buf.data(), end - begin);
    }
  };

  const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(par.resolved(), nchunks));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return pairwise_sum(chunk_sums) / static_cast<double>(total);
}

}  // namespace

cplx torus_average(const IndexDensity& density, int dim, int N, const ParallelOptions& par) {
  if (dim < 0) fail(ErrorCode::invalid_argument, "negative dimension");
  if (dim > 0) Grid::uniform(dim, N).validate();
  return grid_average(density, std::vector<int>(static_cast<std::size_t>(dim), N), par);
}

cplx integrate_torus(const TorusDensity& density, const Grid& grid, const ParallelOptions& par) {
  grid.validate();
  std::vector<std::vector<cplx>> roots;
  for (int s : grid.sizes) roots.push_back(roots_of_unity(s));
  return grid_average(
      [&](std::span<const int> idx) {
        cplx z[16];
        std::vector<cplx> big;
        cplx* zp = z;
        if (idx.size() > 16) {
          big.resize(idx.size());
          zp = big.data();
        }
        for (std::size_t d = 0; d < idx.size(); ++d) zp[d] = roots[d][static_cast<std::size_t>(idx[d])];
        return density(std::span<const cplx>(zp, idx.size()));
      },
      grid.sizes, par);
}

QuadResult integrate_converged_indexed(const std::function<IndexDensity(int N)>& factory, int dim,
                                       const ConvergencePolicy& policy, const ParallelOptions& par) {
  QuadResult r;
  if (dim == 0) {
    r.value = factory(1)({});
    r.values.push_back(r.value);
    return r;
  }
  if (policy.n0 < 8 || !is_pow2(policy.n0)) fail(ErrorCode::invalid_argument, "N0 must be a power of two >= 8");
  if (!(policy.rtol > 0)) fail(ErrorCode::invalid_argument, "rtol must be positive");
  r.converged = false;
  for (int N = policy.n0;; N *= 2) {
    const cplx v = torus_average(factory(N), dim, N, par);
    r.grids_used.push_back(Grid::uniform(dim, N));
    r.values.push_back(v);
    r.value = v;
    if (r.values.size() >= 2) {
      const double delta = std::abs(v - r.values[r.values.size() - 2]) / std::max(1.0, std::abs(v));
      r.deltas.push_back(delta);
      r.last_refinement_delta = delta;
      if (delta <= policy.rtol) {
        r.converged = true;
        break;
      }
    }
    if (N * 2 > policy.n_max) break;
  }
  if (r.values.size() < 2) r.last_refinement_delta = std::numeric_limits<double>::infinity();
  return r;
}

QuadResult integrate_converged(const TorusDensity& density, int dim, const ConvergencePolicy& policy,
                               const ParallelOptions& par) {
  return integrate_converged_indexed(
      [&](int N) -> IndexDensity {
        auto roots = std::make_shared<std::vector<cplx>>(roots_of_unity(N));
        return [roots, &density](std::span<const int> idx) {
          std::vector<cplx> z(idx.size());
          for (std::size_t d = 0; d < idx.size(); ++d) z[d] = (*roots)[static_cast<std::size_t>(idx[d])];
          return density(z);
        };
      },
      dim, policy, par);
}

cplx residue_numeric(const std::function<cplx(cplx)>& f, cplx center, double radius, int N) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::invalid_argument, "residue radius must be positive");
  if (N < 8) fail(ErrorCode::invalid_argument, "residue needs at least 8 nodes");
  std::vector<cplx> terms(static_cast<std::size_t>(N));
  const auto w = roots_of_unity(N);
  for (int k = 0; k < N; ++k) {
    const cplx h = radius * w[static_cast<std::size_t>(k)];
    terms[static_cast<std::size_t>(k)] = f(center + h) * h;
  }
  return pairwise_sum(terms) / static_cast<double>(N);
}

PoleRegistry PoleRegistry::from_coefficients(std::span<const cplx> coefs, const Base& base, double reach) {
  base.validate();
  PoleRegistry reg;
  auto lattice = [&](cplx c, auto&& visit) {
    cplx pa = c;
    for (int a = 0; std::abs(pa) >= 1.0 / reach; ++a, pa *= base.p) {
      cplx pt = pa;
      for (int b = 0; std::abs(pt) >= 1.0 / reach; ++b, pt *= base.q) visit(pt, a, b);
    }
  };
  for (std::size_t i = 0; i < coefs.size(); ++i) {
    const cplx c = coefs[i];
    if (c == cplx(0.0, 0.0)) fail(ErrorCode::invalid_argument, "zero coefficient");
    lattice(c, [&](cplx pt, int a, int b) {
      if (std::abs(pt) <= reach) {
        reg.guards.push_back(pt);
        reg.guards.push_back(1.0 / pt);
      }
      if (std::abs(pt) > 1.0)
        reg.enclosed.push_back({pt, "c" + std::to_string(i) + "*p^" + std::to_string(a) + "*q^" + std::to_string(b)});
    });
  }
  // Poles of 1/Gamma(z^{+-2}) in the type I kernel: z^2 = p^{a+1} q^{b+1}.
  lattice(base.p * base.q, [&](cplx pt, int, int) {
    const cplx r = std::sqrt(pt);
    for (cplx g : {r, -r}) {
      reg.guards.push_back(g);
      reg.guards.push_back(1.0 / g);
    }
  });
  return reg;
}

void PoleRegistry::validate() const {
  for (std::size_t i = 0; i < enclosed.size(); ++i) {
    const cplx P = enclosed[i].location;
    if (!(std::abs(P) > 1.0 + 1e-10))
      fail(ErrorCode::invalid_argument, "registered pole " + enclosed[i].origin + " is not outside the unit circle");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(P - enclosed[j].location) < 1e-8 * std::abs(P))
        fail(ErrorCode::invalid_argument,
             "registered poles " + enclosed[j].origin + " and " + enclosed[i].origin + " coincide");
  }
}

DeformedResult integrate_deformed_1d(const std::function<cplx(cplx)>& density, const PoleRegistry& registry,
                                     const ConvergencePolicy& policy, const ParallelOptions& par) {
  registry.validate();
  DeformedResult out;
  // A pole hugging the unit circle stalls the trapezoid rule. Integrate on a
  // nearby circle instead and restore the unit-circle value with the residues
  // of the poles in between.
  auto gap = [&](double s) {
    double g = std::numeric_limits<double>::infinity();
    for (const cplx p : registry.guards) g = std::min(g, std::abs(std::log(std::abs(p)) - s));
    return g;
  };
  constexpr double kShiftBelow = 0.15, kStep = 1.0 / 128.0;
  double shift = 0.0;
  if (gap(0.0) < kShiftBelow) {
    double best = gap(0.0);
    for (int k = 1; k <= 64; ++k)
      for (const double s : {k * kStep, -k * kStep})
        if (const double g = gap(s); g > best) {
          best = g;
          shift = s;
        }
  }
  const double R = std::exp(shift);
  out.circle_radius = R;
  out.circle = integrate_converged([&](std::span<const cplx> z) { return density(R * z[0]); }, 1, policy, par);
  out.value = out.circle.value;
  out.scale = std::abs(out.circle.value);
  auto isolation = [&](cplx P) {
    double d = std::numeric_limits<double>::infinity();
    for (const cplx g : registry.guards)
      if (const double dist = std::abs(g - P); dist > 1e-9 * std::abs(P)) d = std::min(d, dist);
    return d;
  };
  std::vector<cplx> annulus;
  for (const cplx g : registry.guards) {
    const double s = std::log(std::abs(g));
    if (s > std::min(0.0, shift) && s < std::max(0.0, shift) &&
        std::none_of(annulus.begin(), annulus.end(), [&](cplx a) { return std::abs(a - g) <= 1e-9 * std::abs(g); }))
      annulus.push_back(g);
  }
  for (const cplx P : annulus) {
    const double d = isolation(P);
    if (d < 1e-6 * std::abs(P)) fail(ErrorCode::invalid_argument, "pole near the contour is too close to another singularity");
    const double radius = std::min(0.45 * d, 0.25 * std::abs(P));
    const cplx res = residue_numeric([&](cplx z) { return density(z) / z; }, P, radius, 64);
    const cplx term = shift < 0.0 ? res : -res;
    out.residue_terms.push_back(term);
    out.radii.push_back(radius);
    out.value += term;
    out.scale = std::max(out.scale, std::abs(term));
  }
  for (const auto& pole : registry.enclosed) {
    const cplx P = pole.location;
    double d = std::numeric_limits<double>::infinity();
    auto consider = [&](cplx g) {
      const double dist = std::abs(g - P);
      if (dist > 1e-9 * std::abs(P)) d = std::min(d, dist);
    };
    for (const auto& other : registry.enclosed) consider(other.location);
    for (const cplx g : registry.guards) consider(g);
    if (d < 1e-6 * std::abs(P)) fail(ErrorCode::invalid_argument, "pole " + pole.origin + " is too close to another singularity");
    const double radius = std::min(0.45 * d, 0.25 * std::abs(P));
    const cplx res = residue_numeric([&](cplx z) { return density(z) / z; }, P, radius, 64);
    out.residue_terms.push_back(2.0 * res);
    out.radii.push_back(radius);
    out.value += 2.0 * res;
    out.scale = std::max(out.scale, std::abs(2.0 * res));
  }
  return out;
}

}  // namespace ellhyp
