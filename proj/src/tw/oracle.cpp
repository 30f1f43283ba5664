#include "tw/oracle.hpp"

#include <algorithm>
#include <random>

#include "tw/specker.hpp"

namespace tw {

FiniteWord finite_reduce_oracle(std::span<const Letter> letters) {
  std::vector<Letter> w(letters.begin(), letters.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      if (!ord_eq(w[i].coord, w[i + 1].coord)) continue;
      auto p = letter_mul(w[i], w[i + 1]);
      w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
      if (p) w.insert(w.begin() + static_cast<long>(i), *p);
      changed = true;
      break;
    }
  }
  return FiniteWord{std::move(w)};
}

std::vector<BruteOcc> occ_bruteforce(const Miniature& m) {
  const auto& w = m.word.letters;
  const auto& p = m.pattern.letters;
  std::vector<Letter> ip;
  for (auto it = p.rbegin(); it != p.rend(); ++it) ip.push_back(letter_inv(*it));

  std::vector<BruteOcc> out;
  auto scan = [&](const std::vector<Letter>& pat, int sign) {
    size_t mm = pat.size();
    for (size_t lo = 0; lo < w.size(); ++lo) {
      for (size_t hi = lo + 1; hi <= w.size(); ++hi) {
        size_t len = hi - lo;
        if (len > mm) break;
        bool match = true;
        for (size_t t = 0; t < len; ++t)
          if (!(w[lo + t] == pat[mm - len + t])) {
            match = false;
            break;
          }
        if (match) out.push_back(BruteOcc{lo, hi, sign, mm - len});
      }
    }
  };
  scan(p, +1);
  scan(ip, -1);
  return out;
}

namespace {

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = i;
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

// J1 ~ J2: there are j_i in J_i with equal tail sets {j in J_i : j >= j*}.
bool common_end_segment(const BruteOcc& a, const BruteOcc& b) {
  size_t j = std::max(a.lo, b.lo);
  return a.hi == b.hi && j < a.hi;
}

}  // namespace

std::pair<Nat, Nat> classes_bruteforce(std::span<const BruteOcc> occs, const FiniteWord& word) {
  (void)word;
  UnionFind uf(occs.size());
  for (size_t i = 0; i < occs.size(); ++i)
    for (size_t j = i + 1; j < occs.size(); ++j)
      if (occs[i].sign == occs[j].sign && common_end_segment(occs[i], occs[j])) uf.unite(i, j);
  Nat plus = 0, minus = 0;
  for (size_t i = 0; i < occs.size(); ++i) {
    if (uf.find(i) != i) continue;
    (occs[i].sign > 0 ? plus : minus) += 1;
  }
  return {plus, minus};
}

bool disjoint_or_equivalent(std::span<const BruteOcc> occs) {
  for (size_t i = 0; i < occs.size(); ++i)
    for (size_t j = i + 1; j < occs.size(); ++j) {
      const BruteOcc& a = occs[i];
      const BruteOcc& b = occs[j];
      if (a.sign != b.sign) continue;
      bool disjoint = a.hi <= b.lo || b.hi <= a.lo;
      if (!disjoint && !common_end_segment(a, b)) return false;
    }
  return true;
}

Miniature repeated_letter_counterexample(const Session& s) {
  Letter a = designated_letter(s, Ord::finite(0));
  Letter b = designated_letter(s, Ord::finite(1));
  Miniature m;
  m.pattern.letters = {a, b, a};
  m.word.letters = {a, b, a, b, a};
  m.mapping_note = "pattern letter at coordinate 0 repeats; the two full matches overlap without "
                   "a common end segment";
  return m;
}

// ---------------------------------------------------------------------------
// Randomized agreement trials

namespace {

Session make_trial_session(std::mt19937_64& rng) {
  Session s;
  switch (rng() % 3) {
    case 0:
      s.groups.base = GroupSpec::integers();
      break;
    case 1:
      s.groups.base = GroupSpec::cyclic(2 + rng() % 5);
      break;
    default:
      s.groups.base = GroupSpec::free_group(1 + rng() % 2);
      break;
  }
  return s;
}

GroupElement random_element(const GroupSpec& spec, std::mt19937_64& rng) {
  switch (spec.kind) {
    case GroupSpec::Kind::integers: {
      long long v = 1 + static_cast<long long>(rng() % 3);
      if (rng() % 2) v = -v;
      return *GroupElement::integer(v);
    }
    case GroupSpec::Kind::cyclic:
      return *GroupElement::cyclic(1 + static_cast<long long>(rng() % (spec.param - 1)),
                                   spec.param);
    case GroupSpec::Kind::free_group: {
      int sym = 1 + static_cast<int>(rng() % spec.param);
      if (rng() % 2) sym = -sym;
      auto e = GroupElement::free_word({sym}, spec.param);
      return *e;
    }
  }
  fail(Errc::domain, "bad group kind");
}

}  // namespace

Miniature trial_miniature(std::uint64_t seed, const TrialConfig& cfg, Session& session_out) {
  std::mt19937_64 rng(seed);
  session_out = make_trial_session(rng);
  const Session& s = session_out;
  Nat coords = 2 + rng() % 4;

  Miniature m;
  m.mapping_note = "kappa -> " + std::to_string(coords) + " coordinates, seed " +
                   std::to_string(seed);
  size_t plen = 1 + rng() % cfg.max_pattern;
  while (m.pattern.letters.size() < plen) {
    Ord c = Ord::finite(rng() % coords);
    if (!m.pattern.letters.empty() && ord_eq(m.pattern.letters.back().coord, c)) continue;
    m.pattern.letters.push_back(designated_letter(s, c));
  }

  size_t wlen = rng() % (cfg.max_word + 1);
  while (m.word.letters.size() < wlen) {
    Ord c = Ord::finite(rng() % coords);
    if (!m.word.letters.empty() && ord_eq(m.word.letters.back().coord, c)) continue;
    Letter l = rng() % 2 ? designated_letter(s, c) : Letter{c, random_element(s.groups.at(c), rng)};
    if (rng() % 4 == 0) l = letter_inv(l);
    m.word.letters.push_back(std::move(l));
  }
  return m;
}

TrialResult run_one_trial(std::uint64_t seed, const TrialConfig& cfg) {
  Session s;
  Miniature m = trial_miniature(seed, cfg, s);
  auto occs = occ_bruteforce(m);
  auto [bp, bm] = classes_bruteforce(occs, m.word);

  std::vector<Term> lits;
  for (const Letter& l : m.word.letters) lits.push_back(ast::lit(l));
  Term x = lits.empty() ? ast::empty() : ast::concat(std::move(lits));
  OccReport rep = class_count(reduce(x, s), PatternFamily::finite(m.pattern), s);

  TrialResult r;
  r.seed = seed;
  r.n = m.word.letters.size();
  r.agree = rep.plus == bp && rep.minus == bm;
  return r;
}

std::vector<TrialResult> run_agreement_trials(const TrialConfig& cfg) {
  std::vector<TrialResult> out(cfg.trials);
  if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(cfg.trials); ++i)
      out[static_cast<size_t>(i)] = run_one_trial(cfg.seed0 + static_cast<std::uint64_t>(i), cfg);
  } else {
    for (size_t i = 0; i < cfg.trials; ++i)
      out[i] = run_one_trial(cfg.seed0 + static_cast<std::uint64_t>(i), cfg);
  }
  // already seed-ordered by construction; keep the report deterministic
  std::sort(out.begin(), out.end(),
            [](const TrialResult& a, const TrialResult& b) { return a.seed < b.seed; });
  return out;
}

std::string trial_report(std::span<const TrialResult> results) {
  std::string s;
  Nat bad = 0;
  for (const TrialResult& r : results) {
    s += "seed=" + std::to_string(r.seed) + " n=" + std::to_string(r.n) +
         " agree=" + (r.agree ? "true" : "false") + "\n";
    if (!r.agree) ++bad;
  }
  s += "total=" + std::to_string(results.size()) + " disagreements=" + std::to_string(bad) + "\n";
  return s;
}

FiniteWord chunk_word(const Session& s, const GDescription& d, Nat block, Nat copies) {
  FiniteWord w;
  Nat width = block + 2;
  for (Nat xi = 0; xi < copies; ++xi)
    for (Nat i = 0; i < block; ++i) {
      Nat bit = static_cast<Nat>(d.at(Ord::finite(i)));
      w.letters.push_back(designated_letter(s, Ord::finite(width * xi + i + 2 * bit)));
    }
  return w;
}

bool star_bruteforce(const Session& s, const GDescription& a, const GDescription& b, Nat block,
                     Nat copies) {
  FiniteWord wa = chunk_word(s, a, block, copies);
  FiniteWord wb = chunk_word(s, b, block, copies);
  // A tail of the repetition word always spans complete chunks, so its
  // finite stand-in is a suffix of length at least one block; shorter
  // matches say nothing about separation.
  auto cross = [&](const FiniteWord& x, const FiniteWord& y) {
    for (size_t lo = 0; lo < x.letters.size(); ++lo)
      for (size_t hi = lo + static_cast<size_t>(block); hi <= x.letters.size(); ++hi) {
        size_t len = hi - lo;
        if (len > y.letters.size()) break;
        bool match = true;
        for (size_t t = 0; t < len; ++t)
          if (!(x.letters[lo + t] == y.letters[y.letters.size() - len + t])) {
            match = false;
            break;
          }
        if (match) return true;
      }
    return false;
  };
  return !cross(wa, wb) && !cross(wb, wa);
}

}  // namespace tw
