#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "td/catalog.hpp"
#include "td/environment.hpp"
#include "td/expression.hpp"
#include "td/fingerprint.hpp"
#include "td/oracles.hpp"

namespace td::identities {

struct IdentityReport {
  std::string name;
  std::string strategy;  // "basis-exhaustion" | "randomized" | "exact"
  int trials = 0;
  uint64_t seed = 0;
  bool holds = false;
  std::string counterexample;  // bindings of the first failing trial
  double elapsed_seconds = 0.0;
};

// Binds every tuple of standard basis vectors to the listed slots and
// compares lhs and rhs exactly; sound and complete for identities
// multilinear in those slots. env0 supplies any fixed bindings.
IdentityReport verify_on_basis(const std::string& name, const DiagramExpression& lhs,
                               const DiagramExpression& rhs,
                               const std::vector<std::string>& vector_slots,
                               const Environment<Rational>& env0);

// Seeded integer matrices per trial (entries in lo..hi), exact
// comparison on the rational backend. product_bindings derive names such
// as AB := A*B before each trial.
IdentityReport verify_randomized(
    const std::string& name, const DiagramExpression& lhs, const DiagramExpression& rhs,
    const std::vector<std::string>& matrix_symbols, int trials, uint64_t seed, long lo = -9,
    long hi = 9,
    const std::vector<std::pair<std::string, std::pair<std::string, std::string>>>&
        product_bindings = {},
    int workers = 1);

IdentityReport verify_pair(const catalog::IdentityPair& pair, int trials, uint64_t seed);

// Evaluates char_coeff_diagram(n, k) against the principal-minor oracle
// on random integer matrices; all non-degenerate ratios must agree.
// Throws std::runtime_error("ratio not constant ...") otherwise.
Rational char_coeff_constant(int n, int k, int trials, uint64_t seed);

// measured constants for every (n, k), n in 2..4
std::map<std::pair<int, int>, Rational> measure_char_coeff_constants(int trials, uint64_t seed);
std::string char_coeff_constants_to_text(const std::map<std::pair<int, int>, Rational>& m);

struct PfaffianExperiment {
  int n = 0;
  int samples = 0;
  int degenerate = 0;  // samples with Pf(A - A^T) = 0
  bool fit = false;    // candidate = kappa * Pf(A - A^T) across all samples
  Rational kappa;
  std::string notes;
};

// Non-assertive: reports whether the closed one-node diagram tracks the
// Pfaffian of A - A^T, and with which constant.
PfaffianExperiment pfaffian_experiment(int n, int trials, uint64_t seed,
                                       const std::vector<std::pair<int, int>>& pairing = {});

// Every identity in the built-in suite, one report per row; all must
// hold. `workers` parallelizes randomized trials without changing the
// sampled values.
std::vector<IdentityReport> run_identity_suite(uint64_t seed, int trials = 25, int workers = 1);

// Trace relations extracted from the 3- and 4-crossing ladders. The
// four-matrix relation as usually quoted drops the crossing pairing term
// tr(AC)tr(BD); the exact extraction keeps it (see tests).
fingerprint::TraceRelation tr3_relation(uint64_t seed);
fingerprint::TraceRelation tr4_relation(uint64_t seed);

}  // namespace td::identities
