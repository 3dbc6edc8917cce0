// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "dense.hpp"
#include "qmg/app/commands.hpp"
#include "qmg/resources/estimator.hpp"
#include "qmg/sim/operations.hpp"

namespace {

using namespace qmg;
using app::RunOutcome;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double time_limit = 0.0;  // seconds; 0 for none
  std::function<Verdict()> check;
};

bool check_passed(const RunOutcome& o, const std::string& name) {
  for (const auto& c : o.checks) {
    if (c.name == name) return c.pass;
  }
  return false;
}

const std::string& artifact(const RunOutcome& o, const std::string& name) {
  for (const auto& a : o.artifacts) {
    if (a.name == name) return a.content;
  }
  throw std::runtime_error("missing artifact " + name);
}

RunOutcome share(std::uint64_t alpha, std::uint64_t beta, std::size_t bits) {
  auto c = app::defaults_for("share-demo");
  c.alpha = alpha;
  c.beta = beta;
  c.bits = bits;
  return app::run(c);
}

// m of the first table row
unsigned phase_record(const RunOutcome& o) {
  std::istringstream in(artifact(o, "share-demo.phases.csv"));
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::istringstream row(line);
  std::string field;
  for (int i = 0; i < 4; ++i) std::getline(row, field, ',');
  return static_cast<unsigned>(std::stoul(field));
}

Verdict sharing_round_trip() {
  double worst = 1.0;
  bool ok = true;
  for (unsigned a = 0; a < 2; ++a) {
    for (unsigned b = 0; b < 2; ++b) {
      const auto o = share(a, b, 1);
      const double fs = o.results.at("shared_state_fidelity").get<double>();
      const double fr = o.results.at("round_trip_fidelity").get<double>();
      worst = std::min({worst, fs, fr});
      // phi in {0, 1/4, 1/2} is m in {0, 2, 4}
      ok = ok && fs >= 1.0 - 1e-10 && fr >= 1.0 - 1e-10 && phase_record(o) == 2 * (a + b) &&
           check_passed(o, "phase_matches_bits") && check_passed(o, "decode_recovers_partner");
    }
  }
  return {ok, fmt::format("all four (alpha, beta), min fidelity {:.17g}", worst)};
}

Verdict phase_estimation_support() {
  double worst = 0.0;
  for (unsigned a = 0; a < 2; ++a) {
    for (unsigned b = 0; b < 2; ++b) {
      worst = std::max(worst, share(a, b, 1).results.at("off_support_probability").get<double>());
    }
  }
  return {worst < 1e-9, fmt::format("max off-support probability {:.3g}, limit 1e-9", worst)};
}

Verdict cost_accounting() {
  bool ok = true;
  for (unsigned a = 0; a < 2; ++a) {
    for (unsigned b = 0; b < 2; ++b) ok = ok && share(a, b, 1).results.at("qpe_u_invocations") == 14;
  }
  std::mt19937_64 rng(2024);
  std::string seen;
  for (std::size_t k = 2; k <= 8; ++k) {
    const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const auto u = share(rng() & mask, rng() & mask, k).results.at("qpe_u_invocations").get<std::uint64_t>();
    ok = ok && u == 14 * k;
    seen += fmt::format(" {}", u);
  }
  return {ok, fmt::format("14 per single-bit share; k = 2..8 gave{}", seen)};
}

Verdict quantum_jacobi() {
  auto c = app::defaults_for("quantum-jacobi");
  c.n = 2;
  c.k = 8;
  c.fb = 6;
  c.sweeps = 5;
  c.rhs = "rod";
  const auto o = app::run(c);
  const double dev = o.results.at("max_amplitude_deviation").get<double>();
  return {check_passed(o, "bit_exact_every_sweep") && dev <= 1e-12,
          fmt::format("N = 4, 5 sweeps bit-identical: {}, amplitude deviation {:.3g}",
                      check_passed(o, "bit_exact_every_sweep"), dev)};
}

Verdict quantum_vcycle() {
  auto c = app::defaults_for("quantum-mg");
  c.n = 3;
  c.levels = 3;
  c.s0 = 1;
  c.s1 = 1;
  c.k = 8;
  const auto o = app::run(c);
  return {check_passed(o, "word_identical_every_cycle"),
          fmt::format("N = 8, 3 levels, V(1,1): words {}", o.results.at("final_words").get<std::string>())};
}

Verdict classical_convergence() {
  auto c = app::defaults_for("classical-mg");
  c.n = 10;
  c.dx_exp = 0;
  c.s0 = 2;
  c.s1 = 2;
  c.omega = 2.0 / 3.0;
  c.study = true;
  c.study_epsilons = {1e-4, 1e-8, 1e-12};
  c.scale_lo = 5;
  c.scale_hi = 12;
  const auto o = app::run(c);
  const double k = o.results.at("max_contraction").get<double>();
  const double r2 = o.results.at("fit").at("r_squared").get<double>();
  const double ratio = o.results.at("scaling_ratio").get<double>();
  return {check_passed(o, "converged") && k <= 0.2 && r2 > 0.99 && ratio < 2.0,
          fmt::format("contraction {:.4f} (<= 0.2), R^2 {:.5f} (> 0.99), size ratio {:.3f} (< 2)", k, r2, ratio)};
}

Verdict amplification() {
  auto c = app::defaults_for("amplify-demo");
  c.n = 2;
  c.marked = 1;
  c.iterations = 1;
  const double p = app::run(c).results.at("region_probability").get<double>();
  return {std::abs(p - 1.0) <= 1e-10, fmt::format("region probability {:.17g}", p)};
}

// one random operation applied to both simulators
void random_op(sim::SparseState& s, testing::DenseVector& v, std::size_t w, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-3.14159, 3.14159);
  const std::size_t q = rng() % w;
  std::vector<std::size_t> controls;
  if (w > 1 && rng() % 2) {
    std::size_t c = rng() % w;
    if (c == q) c = (c + 1) % w;
    controls.push_back(c);
  }
  switch (rng() % 6) {
    case 0: {
      const sim::Matrix2 pick[] = {sim::gates::hadamard(), sim::gates::pauli_x(), sim::gates::pauli_z(),
                                   sim::gates::phase(ang(rng))};
      const auto u = pick[rng() % 4];
      sim::apply_single_qubit_gate(s, q, u, controls);
      testing::dense_gate(v, q, u, controls);
      break;
    }
    case 1: {
      // controlled XOR of a mask that avoids the control
      const std::uint64_t all = (std::uint64_t{1} << w) - 1;
      const std::size_t c = controls.empty() ? q : controls[0];
      const std::uint64_t mask = (rng() & all) & ~(std::uint64_t{1} << c);
      const sim::Register whole{"all", 0, w};
      const sim::Register touched[] = {whole};
      sim::apply_branch_function(
          s, [&](sim::BasisLabel& l) { if (l.bit(c)) l.xor_field(0, w, mask); }, touched);
      testing::dense_permute(v, [&](std::uint64_t x) { return (x >> c) & 1 ? x ^ mask : x; });
      break;
    }
    case 2: {
      std::vector<std::size_t> qs;
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < w; ++i) {
        if (rng() % 2) {
          qs.push_back(i);
          mask |= std::uint64_t{1} << i;
        }
      }
      if (qs.empty()) {
        qs.push_back(q);
        mask = std::uint64_t{1} << q;
      }
      sim::reflection_about_zero(s, qs);
      for (std::uint64_t x = 0; x < v.size(); ++x) {
        if (x & mask) v[x] = -v[x];
      }
      break;
    }
    case 3: {
      const std::uint64_t salt = rng();
      const auto marked = [salt](std::uint64_t x) { return ((x * 0x9E3779B97F4A7C15ULL) ^ salt) >> 63; };
      const sim::Amplitude f = std::polar(1.0, ang(rng));
      sim::apply_phase_oracle(s, [&](const sim::BasisLabel& l) { return marked(l.field(0, w)) != 0; }, f);
      for (std::uint64_t x = 0; x < v.size(); ++x) {
        if (marked(x)) v[x] *= f;
      }
      break;
    }
    case 4: {
      const sim::Amplitude f = std::polar(1.0, ang(rng));
      sim::scale(s, f);
      for (auto& a : v) a *= f;
      break;
    }
    default: {
      if (controls.empty()) controls.push_back((q + 1) % w);
      if (controls[0] == q) return;
      const auto u = sim::gates::phase(ang(rng));
      const auto h = sim::gates::hadamard();
      const std::size_t targets[] = {q};
      sim::apply_controlled(s, controls, targets, [&](sim::SparseState& sub) {
        sim::apply_single_qubit_gate(sub, q, h);
        sim::apply_single_qubit_gate(sub, q, u);
      });
      testing::dense_gate(v, q, h, controls);
      testing::dense_gate(v, q, u, controls);
    }
  }
}

Verdict dense_equivalence() {
  std::mt19937_64 rng(8);
  constexpr int kCases = 120;
  double worst = 0.0;
  for (int t = 0; t < kCases; ++t) {
    const std::size_t w = 2 + rng() % 11;
    const std::size_t m = 1 + rng() % w;
    sim::RegisterLayout layout(w);
    const auto index = layout.add("index", m);
    if (w > m) layout.add("rest", w - m);
    auto s = sim::prepare_uniform_index(layout, "index");
    testing::DenseVector v(std::size_t{1} << w);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(1u << m));
    for (int g = 0; g < 25; ++g) random_op(s, v, w, rng);
    worst = std::max(worst, testing::max_abs_diff(testing::to_dense(s), v));
    // marginals
    for (const auto& [x, p] : sim::register_distribution(s, index)) {
      double d = 0.0;
      for (std::uint64_t y = 0; y < v.size(); ++y) {
        if ((y & ((std::uint64_t{1} << m) - 1)) == x) d += std::norm(v[y]);
      }
      worst = std::max(worst, std::abs(d - p));
    }
  }
  return {worst <= 1e-10, fmt::format("{} random circuits on 2..12 qubits, max deviation {:.3g}", kCases, worst)};
}

Verdict compressibility() {
  auto c = app::defaults_for("compress-probe");
  c.n = 8;
  c.rhs = "sine";
  c.fraction = 0.1;
  c.threshold = 1e-3;
  const auto o = app::run(c);
  const double e = o.results.at("error_at_budget").get<double>();
  return {check_passed(o, "error_non_increasing") && e < 1e-3,
          fmt::format("non-increasing: {}, max error {:.3g} with {} of 256 modes", check_passed(o, "error_non_increasing"),
                      e, o.results.at("mode_budget").get<std::size_t>())};
}

Verdict resource_formulas() {
  struct CostCase {
    std::uint64_t cu, d;
    double eps;
    std::uint64_t want;
  };
  const CostCase costs[] = {{1, 0, 0.5, 14},
                            {10, 6, std::ldexp(1.0, -8), 1168},
                            {1, 0, 0.25, 28},
                            {2, 3, 1e-3, 310},
                            {5, 0, std::ldexp(1.0, -16), 1120}};
  struct CycleCase {
    double kappa, eps;
    std::uint64_t want;
  };
  const CycleCase cycles[] = {{std::exp(1.0), std::exp(-5.0), 5}, {2.0, std::ldexp(1.0, -10), 10}, {10.0, 1e-6, 6},
                              {4.0, std::ldexp(1.0, -20), 10},     {3.0, 0.1, 3},                   {2.0, 1.0, 0}};
  int ok = 0;
  int total = 0;
  for (const auto& c : costs) {
    resources::CostModel m;
    m.c_u = c.cu;
    m.d = c.d;
    m.epsilon = c.eps;
    ok += resources::sharing_cost(m) == c.want;
    ++total;
  }
  for (const auto& c : cycles) {
    ok += resources::vcycle_count(c.kappa, c.eps) == c.want;
    ++total;
  }
  return {ok == total, fmt::format("{}/{} hand-computed values reproduced", ok, total)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "sharing round trip", 1.0, sharing_round_trip},
      {"AC2", "phase estimation support", 0.0, phase_estimation_support},
      {"AC3", "U-invocation accounting", 0.0, cost_accounting},
      {"AC4", "quantum Jacobi equivalence", 10.0, quantum_jacobi},
      {"AC5", "quantum V-cycle equivalence", 60.0, quantum_vcycle},
      {"AC6", "classical multigrid convergence", 30.0, classical_convergence},
      {"AC7", "amplitude amplification readout", 0.0, amplification},
      {"AC8", "dense-oracle equivalence", 0.0, dense_equivalence},
      {"AC9", "compressibility probe", 0.0, compressibility},
      {"AC10", "resource formulas", 0.0, resource_formulas},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, fmt::format("aborted: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt::format("{:.2f} s", secs);
    if (c.time_limit > 0.0) {
      timing += fmt::format(" of {:.0f} s", c.time_limit);
      if (secs >= c.time_limit) {
        v.pass = false;
        v.detail += "; over the time limit";
      }
    }
    failed += !v.pass;
    std::cout << fmt::format("{:<5}{} {}: {} [{}]\n", c.id, v.pass ? "PASS" : "FAIL", c.title, v.detail, timing);
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
