#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "td/environment.hpp"
#include "td/expression.hpp"
#include "td/rational.hpp"

namespace td::fingerprint {

// lexicographically least rotation
std::string cyclic_canonical(const std::string& word);

// Product of trace factors over cyclic-canonical words and det factors
// over single symbols. tr(AB) and tr(BA) are one monomial by construction.
struct TraceMonomial {
  std::vector<std::string> tr_words;  // cyclic-canonical, sorted
  std::vector<std::string> det_syms;  // sorted

  int factor_count() const { return static_cast<int>(tr_words.size() + det_syms.size()); }
  int degree() const;  // total matrix letters; det counts 2
  std::string str() const;
  Rational eval(const Environment<Rational>& env) const;
  bool operator==(const TraceMonomial&) const = default;
  bool operator<(const TraceMonomial& o) const { return str() < o.str(); }
};

// All monomials whose per-symbol letter count matches `multidegree`
// exactly (a det factor consumes two letters of its symbol).
std::vector<TraceMonomial> monomials_for_multidegree(const std::map<std::string, int>& multidegree);

struct Decomposition {
  std::vector<std::pair<TraceMonomial, Rational>> parts;  // nonzero coefficients
  std::string failure;  // empty iff the solve succeeded
  bool ok() const { return failure.empty(); }
};

// Exact linear solve of value_fn against the candidate monomials on
// seeded integer samples. Candidates are ordered by descending factor
// count (then name); the returned coefficients are the unique
// representation over the greedily selected independent subset, with
// dependent monomials held at zero. Sound by construction: the result is
// re-checked on fresh samples before it is returned.
Decomposition decompose(const std::function<Rational(const Environment<Rational>&)>& value_fn,
                        const std::map<std::string, int>& multidegree, int trials, uint64_t seed);

// Wrapper for a closed dimension-2 expression: the
// multidegree is read off the markings (terms must agree), degree_bound
// guards runaway bases, trials <= 0 picks enough samples automatically.
Decomposition fingerprint_decompose(const DiagramExpression& e,
                                    const std::vector<std::string>& symbols, int degree_bound,
                                    int trials, uint64_t seed);

// Zero-form of a trace relation: sum of coeff * monomial == 0.
struct TraceRelation {
  std::vector<std::pair<TraceMonomial, Rational>> zero_form;
  std::string failure;
  bool ok() const { return failure.empty(); }
  bool trivial() const { return zero_form.empty(); }  // the tautology 0 = 0
  std::string printable() const;                      // "lhs = rhs" rendering
};

// Extracts the identity encoded by the closed k-crossing ladder: the
// structural reading of the unexpanded closure minus the fingerprint of
// its binor expansion.
TraceRelation extract_ladder_identity(const std::vector<std::string>& names, uint64_t seed);

// golden-file round trip: "coeff monomial" per line, sorted by monomial
std::string relation_to_text(const TraceRelation& r);
TraceRelation relation_from_text(const std::string& text);

}  // namespace td::fingerprint
