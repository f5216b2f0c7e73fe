#include "td/fingerprint.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "td/evaluate.hpp"
#include "td/oracles.hpp"
#include "td/wiring.hpp"

namespace td::fingerprint {

std::string cyclic_canonical(const std::string& word) {
  if (word.empty()) return word;
  std::string best = word;
  std::string rot = word;
  for (size_t i = 1; i < word.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

int TraceMonomial::degree() const {
  int d = 0;
  for (const std::string& w : tr_words) d += static_cast<int>(w.size());
  d += 2 * static_cast<int>(det_syms.size());
  return d;
}

std::string TraceMonomial::str() const {
  std::vector<std::string> parts;
  for (const std::string& s : det_syms) parts.push_back("det(" + s + ")");
  for (const std::string& w : tr_words) parts.push_back("tr(" + w + ")");
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const std::string& p : parts) out += p;
  return out.empty() ? "1" : out;
}

Rational TraceMonomial::eval(const Environment<Rational>& env) const {
  Rational v(1);
  for (const std::string& w : tr_words) {
    std::vector<std::string> word;
    for (char ch : w) word.emplace_back(1, ch);
    v *= oracle::trace_word(env, word);
  }
  for (const std::string& s : det_syms) v *= oracle::det_cofactor(env.matrix(s));
  return v;
}

namespace {

void enumerate_words(const std::map<char, int>& remaining, std::string& prefix, size_t len,
                     std::set<std::string>& out) {
  if (prefix.size() == len) {
    if (cyclic_canonical(prefix) == prefix) out.insert(prefix);
    return;
  }
  for (auto& [ch, cnt] : remaining) {
    if (cnt == 0) continue;
    std::map<char, int> rest = remaining;
    --rest[ch];
    prefix.push_back(ch);
    enumerate_words(rest, prefix, len, out);
    prefix.pop_back();
  }
}

void enumerate_monomials(const std::map<char, int>& remaining, TraceMonomial& acc,
                         std::set<std::string>& seen, std::vector<TraceMonomial>& out) {
  int total = 0;
  for (auto& [ch, cnt] : remaining) total += cnt;
  if (total == 0) {
    TraceMonomial m = acc;
    std::sort(m.tr_words.begin(), m.tr_words.end());
    std::sort(m.det_syms.begin(), m.det_syms.end());
    if (seen.insert(m.str()).second) out.push_back(std::move(m));
    return;
  }
  for (auto& [ch, cnt] : remaining) {
    if (cnt < 2) continue;
    std::map<char, int> rest = remaining;
    rest[ch] -= 2;
    acc.det_syms.emplace_back(1, ch);
    enumerate_monomials(rest, acc, seen, out);
    acc.det_syms.pop_back();
  }
  for (int len = 1; len <= total; ++len) {
    std::set<std::string> words;
    std::string prefix;
    enumerate_words(remaining, prefix, static_cast<size_t>(len), words);
    for (const std::string& w : words) {
      std::map<char, int> rest = remaining;
      bool fits = true;
      for (char ch : w) {
        if (--rest[ch] < 0) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      acc.tr_words.push_back(w);
      enumerate_monomials(rest, acc, seen, out);
      acc.tr_words.pop_back();
    }
  }
}

}  // namespace

std::vector<TraceMonomial> monomials_for_multidegree(
    const std::map<std::string, int>& multidegree) {
  std::map<char, int> counts;
  for (auto& [sym, deg] : multidegree) {
    if (sym.size() != 1)
      throw std::invalid_argument("fingerprint symbols must be single letters: " + sym);
    if (deg > 0) counts[sym[0]] = deg;
  }
  std::vector<TraceMonomial> out;
  std::set<std::string> seen;
  TraceMonomial acc;
  enumerate_monomials(counts, acc, seen, out);
  // descending factor count, then name: products are preferred pivots so
  // single long traces land on the dependent side of the trace relations
  std::sort(out.begin(), out.end(), [](const TraceMonomial& a, const TraceMonomial& b) {
    if (a.factor_count() != b.factor_count()) return a.factor_count() > b.factor_count();
    return a.str() < b.str();
  });
  return out;
}

Decomposition decompose(const std::function<Rational(const Environment<Rational>&)>& value_fn,
                        const std::map<std::string, int>& multidegree, int trials, uint64_t seed) {
  Decomposition dec;
  std::vector<TraceMonomial> monos = monomials_for_multidegree(multidegree);
  const int m = static_cast<int>(monos.size());
  if (m == 0) {
    dec.failure = "empty candidate basis";
    return dec;
  }
  if (trials <= 0) trials = 2 * m + 8;
  if (trials < m + 4) {
    dec.failure = "insufficient samples";
    return dec;
  }
  std::vector<std::string> syms;
  for (auto& [s, d] : multidegree) syms.push_back(s);

  auto sample_env = [&](uint64_t stream) {
    Environment<Rational> env(2);
    Sampler smp(seed, stream);
    for (const std::string& s : syms) env.bind_matrix(s, smp.int_matrix(2));
    return env;
  };

  // rows: monomial values | target value
  std::vector<std::vector<Rational>> a(trials, std::vector<Rational>(m + 1));
  for (int t = 0; t < trials; ++t) {
    Environment<Rational> env = sample_env(static_cast<uint64_t>(t));
    for (int c = 0; c < m; ++c) a[t][c] = monos[c].eval(env);
    a[t][m] = value_fn(env);
  }

  // exact Gauss-Jordan; greedy pivots in candidate order
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < m && r < trials; ++c) {
    int pr = -1;
    for (int rr = r; rr < trials; ++rr)
      if (sgn(a[rr][c]) != 0) {
        pr = rr;
        break;
      }
    if (pr < 0) continue;
    std::swap(a[r], a[pr]);
    Rational inv = 1 / a[r][c];
    for (int cc = c; cc <= m; ++cc) a[r][cc] *= inv;
    for (int rr = 0; rr < trials; ++rr) {
      if (rr == r || sgn(a[rr][c]) == 0) continue;
      Rational f = a[rr][c];
      for (int cc = c; cc <= m; ++cc) a[rr][cc] -= f * a[r][cc];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int rr = r; rr < trials; ++rr) {
    if (sgn(a[rr][m]) != 0) {
      dec.failure = "basis deficient";
      return dec;
    }
  }
  std::vector<Rational> coeff(m, Rational(0));
  for (int i = 0; i < r; ++i) coeff[pivot_col[i]] = a[i][m];

  // soundness: fresh samples disjoint from the solve set
  for (int t = 0; t < 10; ++t) {
    Environment<Rational> env = sample_env(0x10000000ull + static_cast<uint64_t>(t));
    Rational lhs = value_fn(env);
    Rational rhs(0);
    for (int c = 0; c < m; ++c)
      if (sgn(coeff[c]) != 0) rhs += coeff[c] * monos[c].eval(env);
    if (lhs != rhs) {
      dec.failure = "basis deficient";
      return dec;
    }
  }
  for (int c = 0; c < m; ++c)
    if (sgn(coeff[c]) != 0) dec.parts.emplace_back(monos[c], coeff[c]);
  return dec;
}

Decomposition fingerprint_decompose(const DiagramExpression& e,
                                    const std::vector<std::string>& symbols, int degree_bound,
                                    int trials, uint64_t seed) {
  if (e.arity != 0) throw std::invalid_argument("fingerprint_decompose: open diagram");
  if (e.dim != 2 && !e.terms.empty())
    throw std::invalid_argument("fingerprint_decompose: dimension must be 2");

  std::map<std::string, int> multidegree;
  for (const std::string& s : symbols) multidegree[s] = 0;
  bool first = true;
  for (const auto& [c, g] : e.terms) {
    std::map<std::string, int> counts;
    for (const std::string& s : symbols) counts[s] = 0;
    for (const Edge& ed : g.edges)
      for (const Marking& mk : ed.markings) {
        auto it = counts.find(mk.matrix);
        if (it == counts.end())
          throw std::invalid_argument("fingerprint_decompose: unknown symbol " + mk.matrix);
        ++it->second;
      }
    if (first) {
      multidegree = counts;
      first = false;
    } else if (counts != multidegree) {
      Decomposition dec;
      dec.failure = "inhomogeneous expression";
      return dec;
    }
  }
  int total = 0;
  for (auto& [s, d] : multidegree) total += d;
  if (total > degree_bound) {
    Decomposition dec;
    dec.failure = "degree bound exceeded";
    return dec;
  }
  auto value_fn = [&e](const Environment<Rational>& env) {
    return evaluate_expression(e, env, Evaluator::kContracted).value();
  };
  return decompose(value_fn, multidegree, trials, seed);
}

TraceRelation extract_ladder_identity(const std::vector<std::string>& names, uint64_t seed) {
  TraceRelation rel;
  wiring::WiringTerm lad = wiring::ladder(names);
  DiagramGraph original = wiring::compile_wiring(lad);
  auto tp = wiring::read_trace_product(original);
  if (!tp) {
    rel.failure = "ladder closure is not a plain trace product";
    return rel;
  }
  TraceMonomial lhs;
  for (const auto& word : tp->words) {
    std::string w;
    for (const std::string& s : word) {
      if (s.size() != 1) {
        rel.failure = "ladder symbols must be single letters";
        return rel;
      }
      w += s;
    }
    lhs.tr_words.push_back(cyclic_canonical(w));
  }
  std::sort(lhs.tr_words.begin(), lhs.tr_words.end());
  Rational lhs_coeff(1);
  for (int i = 0; i < tp->bare_loops; ++i) lhs_coeff *= 2;

  DiagramExpression expansion = wiring::binor_expand(lad);
  int total = 0;
  for (const std::string& s : names) total += static_cast<int>(s.size());
  Decomposition dec = fingerprint_decompose(expansion, names, total, 0, seed);
  if (!dec.ok()) {
    rel.failure = dec.failure;
    return rel;
  }

  std::vector<std::pair<TraceMonomial, Rational>> zero;
  zero.emplace_back(lhs, lhs_coeff);
  for (auto& [mono, c] : dec.parts) zero.emplace_back(mono, -c);
  // merge by monomial
  std::sort(zero.begin(), zero.end(),
            [](const auto& x, const auto& y) { return x.first.str() < y.first.str(); });
  for (auto& [mono, c] : zero) {
    if (!rel.zero_form.empty() && rel.zero_form.back().first == mono)
      rel.zero_form.back().second += c;
    else
      rel.zero_form.emplace_back(mono, c);
  }
  std::erase_if(rel.zero_form, [](const auto& p) { return sgn(p.second) == 0; });
  return rel;
}

std::string TraceRelation::printable() const {
  if (!failure.empty()) return "<failed: " + failure + ">";
  if (zero_form.empty()) return "0 = 0";
  std::ostringstream lhs, rhs;
  bool lfirst = true, rfirst = true;
  auto emit = [](std::ostringstream& os, bool& first, const Rational& c,
                 const TraceMonomial& m) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << to_string(c) << " ";
    os << m.str();
  };
  for (const auto& [m, c] : zero_form) {
    if (sgn(c) > 0)
      emit(lhs, lfirst, c, m);
    else
      emit(rhs, rfirst, -c, m);
  }
  if (lfirst) return std::string("0 = ") + rhs.str();
  if (rfirst) return lhs.str() + " = 0";
  return lhs.str() + " = " + rhs.str();
}

std::string relation_to_text(const TraceRelation& r) {
  std::ostringstream os;
  for (const auto& [m, c] : r.zero_form) os << to_string(c) << " " << m.str() << "\n";
  return os.str();
}

TraceRelation relation_from_text(const std::string& text) {
  TraceRelation rel;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto sp = line.find(' ');
    if (sp == std::string::npos) throw std::invalid_argument("bad relation line: " + line);
    Rational c = parse_rational(line.substr(0, sp));
    std::string ms = line.substr(sp + 1);
    TraceMonomial mono;
    size_t pos = 0;
    while (pos < ms.size()) {
      if (ms.compare(pos, 4, "det(") == 0) {
        size_t close = ms.find(')', pos);
        mono.det_syms.push_back(ms.substr(pos + 4, close - pos - 4));
        pos = close + 1;
      } else if (ms.compare(pos, 3, "tr(") == 0) {
        size_t close = ms.find(')', pos);
        mono.tr_words.push_back(ms.substr(pos + 3, close - pos - 3));
        pos = close + 1;
      } else {
        throw std::invalid_argument("bad monomial: " + ms);
      }
    }
    std::sort(mono.tr_words.begin(), mono.tr_words.end());
    std::sort(mono.det_syms.begin(), mono.det_syms.end());
    rel.zero_form.emplace_back(std::move(mono), std::move(c));
  }
  return rel;
}

}  // namespace td::fingerprint
