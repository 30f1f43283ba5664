// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Fixed seeds throughout, printed with each randomized criterion.
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "tw/dsl.hpp"
#include "tw/oracle.hpp"
#include "tw/specker.hpp"

using namespace tw;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int n, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %-38s %s  %s\n", n, name, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

double secs(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Term lits_term(const std::vector<Letter>& ls) {
  std::vector<Term> parts;
  for (const Letter& l : ls) parts.push_back(ast::lit(l));
  return parts.empty() ? ast::empty() : ast::concat(std::move(parts));
}

// ---------------------------------------------------------------------------
// 1. reduction agrees with the stack oracle on every word of length <= 6
//    over three cyclic groups of order 4

void criterion1() {
  auto t0 = Clock::now();
  Session s;
  s.groups.base = GroupSpec::cyclic(4);
  std::vector<Letter> alphabet;
  for (Nat c = 0; c < 3; ++c)
    for (Nat r = 1; r <= 3; ++r)
      alphabet.push_back(Letter{Ord::finite(c), *GroupElement::cyclic(static_cast<long long>(r), 4)});

  long long total = 0, bad = 0;
  for (size_t len = 0; len <= 6; ++len) {
    long long count = 1;
    for (size_t i = 0; i < len; ++i) count *= 9;
#pragma omp parallel for schedule(dynamic, 512) reduction(+ : total, bad)
    for (long long code = 0; code < count; ++code) {
      std::vector<Letter> letters;
      long long c = code;
      for (size_t i = 0; i < len; ++i) {
        letters.push_back(alphabet[static_cast<size_t>(c % 9)]);
        c /= 9;
      }
      FiniteWord expect = finite_reduce_oracle(letters);
      Word w = reduce(lits_term(letters), s);
      FiniteWord got;
      bool ok = true;
      for (const Seg& seg : w.segs) {
        if (const auto* l = std::get_if<LitSeg>(&seg))
          got.letters.push_back(l->l);
        else
          ok = false;
      }
      if (!ok || !(got == expect)) ++bad;
      ++total;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%lld words, %lld disagreements, %.1fs", total, bad, secs(t0));
  report(1, "reduction oracle equivalence", bad == 0 && total == 597871, buf);
}

// ---------------------------------------------------------------------------
// generators shared by criteria 2-4

Term gen_term(std::mt19937_64& rng, const Session& s, int depth) {
  auto mk_ord = [&]() -> Ord {
    switch (rng() % 3) {
      case 0:
        return Ord::finite(rng() % 6);
      case 1:
        return ord_add(Ord::omega(), Ord::finite(rng() % 4));
      default:
        return ord_add(Ord::omega(1, 1 + rng() % 2), Ord::finite(rng() % 3));
    }
  };
  if (depth <= 0 || rng() % 4 == 0) {
    switch (rng() % 5) {
      case 0:
        return ast::empty();
      case 1: {
        long long v = static_cast<long long>(rng() % 5) - 2;
        if (v == 0) v = 1;
        return ast::lit(Letter{Ord::finite(rng() % 5), *GroupElement::integer(v)});
      }
      case 2:
        return ast::lit(designated_letter(s, mk_ord()));
      case 3:
        return build_M_kappa(s, s.atoms.k1());
      default: {
        GDescription d;
        if (rng() % 2) d.exc.emplace_back(Ord::finite(rng() % 3), 1);
        return build_M_g(s, d, s.atoms.L());
      }
    }
  }
  switch (rng() % 3) {
    case 0: {
      std::vector<Term> parts;
      size_t n = 2 + rng() % 3;
      for (size_t i = 0; i < n; ++i) parts.push_back(gen_term(rng, s, depth - 1));
      return ast::concat(std::move(parts));
    }
    case 1:
      return ast::inv(gen_term(rng, s, depth - 1));
    default: {
      if (rng() % 2) return ast::seg(build_M_kappa(s, s.atoms.k1()), mk_ord());
      GDescription d;
      if (rng() % 2) d.exc.emplace_back(Ord::finite(rng() % 3), 1);
      Ord pos = rng() % 2
                    ? Ord::finite(rng() % 5)
                    : ord_add(Ord::of_atom(s.atoms.L(), 1 + rng() % 2), Ord::finite(rng() % 4));
      return ast::seg(build_M_g(s, d, s.atoms.L()), pos);
    }
  }
}

std::vector<Ord> gen_F(std::mt19937_64& rng, const Session& s) {
  std::vector<Ord> F;
  size_t n = 1 + rng() % 5;
  for (size_t i = 0; i < n; ++i) {
    Ord f;
    switch (rng() % 4) {
      case 0:
        f = Ord::finite(rng() % 10);
        break;
      case 1:
        f = ord_add(Ord::omega(), Ord::finite(rng() % 4));
        break;
      case 2:
        f = ord_add(Ord::of_atom(s.atoms.L(), 1 + rng() % 2), Ord::finite(rng() % 4));
        break;
      default:
        f = ord_add(Ord::of_atom(s.atoms.omega1()), Ord::finite(rng() % 3));
        break;
    }
    bool seen = false;
    for (const Ord& o : F) seen = seen || ord_eq(o, f);
    if (!seen) F.push_back(std::move(f));
  }
  return F;
}

// 2. reduce is idempotent and preserves finite-set equivalence

void criterion2() {
  std::mt19937_64 rng(20001);
  Session s;
  int terms = 0, violations = 0;
  while (terms < 500) {
    Term t = gen_term(rng, s, 3);
    Word w = reduce(t, s);
    if (!word_iso(reduce(w, s), w)) ++violations;
    for (int k = 0; k < 20; ++k) {
      auto F = gen_F(rng, s);
      if (!equiv_on(t, to_term(w), F, s)) ++violations;
    }
    ++terms;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "seed=20001 terms=%d violations=%d", terms, violations);
  report(2, "reduction contract", violations == 0, buf);
}

// 3. quasi-decomposition contract

void criterion3() {
  std::mt19937_64 rng(30001);
  Session s;
  int pairs = 0, violations = 0;
  while (pairs < 200) {
    Word x = reduce(gen_term(rng, s, 2), s);
    Word y = reduce(gen_term(rng, s, 2), s);
    auto qd = quasi_decompose(x, y, s);
    if (!word_iso(x, reduce(ast::concat({to_term(qd.left), to_term(qd.middle)}), s))) ++violations;
    if (!word_iso(y, reduce(ast::concat({ast::inv(to_term(qd.middle)), to_term(qd.right)}), s)))
      ++violations;
    // seam property: joining deletes nothing, at most one neighbor merge
    Word joined = reduce(ast::concat({to_term(qd.left), to_term(qd.right)}), s);
    size_t low = qd.left.segs.size() + qd.right.segs.size();
    if (!qd.left.empty() && !qd.right.empty()) --low;
    if (joined.segs.size() < low) ++violations;
    ++pairs;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "seed=30001 pairs=%d violations=%d", pairs, violations);
  report(3, "quasi-decomposition contract", violations == 0, buf);
}

// 4. phi is a homomorphism: additivity and antisymmetry, exact

void criterion4() {
  std::mt19937_64 rng(40001);
  Session s;
  PatternFamily fk = PatternFamily::canonical(s.atoms.k1());
  GDescription d1;
  d1.exc.emplace_back(Ord::finite(1), 1);
  PatternFamily fg = PatternFamily::bits(d1, s.atoms.L());

  Term mk = build_M_kappa(s, s.atoms.k1());
  Term mg = build_M_g(s, d1, s.atoms.L());
  Term mg0 = build_M_g(s, GDescription{}, s.atoms.L());

  auto sample = [&]() -> Term {
    switch (rng() % 7) {
      case 0:
        return ast::seg(mk, Ord::finite(rng() % 5));
      case 1:
        return ast::inv(ast::seg(mk, Ord::finite(rng() % 5)));
      case 2:
        return ast::lit(designated_letter(s, Ord::finite(rng() % 6)));
      case 3:
        return ast::seg(mg, Ord::finite(rng() % 4));
      case 4:
        return rng() % 2 ? ast::inv(mg) : mg0;
      case 5: {
        std::vector<Term> parts;
        for (int j = 0; j < 2; ++j)
          parts.push_back(rng() % 2 ? ast::seg(mk, Ord::finite(rng() % 4))
                                    : ast::inv(ast::seg(mg, Ord::finite(rng() % 3))));
        return ast::concat(std::move(parts));
      }
      default:
        return ast::inv(gen_term(rng, s, 1));
    }
  };

  int additive = 0, antisym = 0, violations = 0;
  while (additive < 200) {
    Term x = sample(), y = sample();
    for (const PatternFamily& f : {fk, fg}) {
      if (phi_eval(ast::concat({x, y}), f, s) != phi_eval(x, f, s) + phi_eval(y, f, s))
        ++violations;
    }
    ++additive;
  }
  while (antisym < 200) {
    Term x = sample();
    for (const PatternFamily& f : {fk, fg})
      if (phi_eval(ast::inv(x), f, s) != -phi_eval(x, f, s)) ++violations;
    ++antisym;
  }
  char buf[112];
  std::snprintf(buf, sizeof buf, "seed=40001 pairs=%d terms=%d violations=%d", additive, antisym,
                violations);
  report(4, "homomorphism suite", violations == 0, buf);
}

// 5 and 6. miniature oracle agreement + disjoint-or-equivalent

void criteria5_6() {
  auto t0 = Clock::now();
  TrialConfig cfg;
  cfg.trials = 1000;
  cfg.seed0 = 50001;
  auto results = run_agreement_trials(cfg);
  Nat bad = 0;
  for (const auto& r : results)
    if (!r.agree) ++bad;
  char buf[112];
  std::snprintf(buf, sizeof buf, "seed=50001 trials=%zu disagreements=%llu %.1fs", results.size(),
                static_cast<unsigned long long>(bad), secs(t0));
  report(5, "occurrence-counting oracle agreement", bad == 0, buf);

  // same corpus, injective-pattern instances only
  std::size_t checked = 0;
  Nat holds = 0;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    Session s;
    Miniature m = trial_miniature(cfg.seed0 + i, cfg, s);
    bool injective = true;
    for (size_t a = 0; a < m.pattern.letters.size(); ++a)
      for (size_t b = a + 1; b < m.pattern.letters.size(); ++b)
        if (m.pattern.letters[a] == m.pattern.letters[b]) injective = false;
    if (!injective) continue;
    if (disjoint_or_equivalent(occ_bruteforce(m))) ++holds;
    ++checked;
  }
  Session s0;
  Miniature bad_mini = repeated_letter_counterexample(s0);
  bool counterexample_fails = !disjoint_or_equivalent(occ_bruteforce(bad_mini));
  char buf2[128];
  std::snprintf(buf2, sizeof buf2,
                "injective instances=%zu all hold=%s, repeated-letter counterexample fails=%s",
                checked, holds == checked ? "yes" : "no", counterexample_fails ? "yes" : "no");
  report(6, "disjoint-or-equivalent", holds == checked && counterexample_fails && checked > 0,
         buf2);
}

// 7. witness: empty restriction and phi = 1 for sampled finite sets

void criterion7() {
  std::mt19937_64 rng(70001);
  Session s;
  Atom k = s.atoms.k1();
  int ok = 0, n = 0;
  while (n < 50) {
    std::vector<Ord> F;
    size_t sz = rng() % 9;
    while (F.size() < sz) {
      Ord f;
      switch (rng() % 3) {
        case 0:
          f = Ord::finite(rng() % 12);
          break;
        case 1:
          f = ord_add(Ord::omega(1, 1 + rng() % 3), Ord::finite(rng() % 5));
          break;
        default:
          f = ord_add(Ord::of_atom(s.atoms.omega1(), 1 + rng() % 2), Ord::finite(rng() % 4));
          break;
      }
      bool seen = false;
      for (const Ord& o : F) seen = seen || ord_eq(o, f);
      if (!seen) F.push_back(std::move(f));
    }
    WitnessReport w = specker_witness(F, k, s);
    if (w.ok()) ++ok;
    ++n;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "seed=70001 sets=%d passing=%d", n, ok);
  report(7, "non-factorization witness", ok == n, buf);
}

// 8. distinct homomorphisms at desk scale

void criterion8() {
  Session s;
  std::vector<GDescription> descs;
  for (Nat i = 0; i < 8; ++i) {
    GDescription d;
    d.exc.emplace_back(Ord::finite(i), 1);
    descs.push_back(std::move(d));
  }
  std::vector<SpeckerHom> singletons;
  for (const auto& d : descs)
    singletons.push_back(SpeckerHom::make({PatternFamily::bits(d, s.atoms.L())}));
  auto m = hom_matrix(singletons, s);
  bool identity = m.size() == 8;
  for (size_t i = 0; identity && i < 8; ++i)
    for (size_t j = 0; j < 8; ++j)
      if (m[i][j] != (i == j ? 1 : 0)) identity = false;

  std::mt19937_64 rng(80001);
  int distinct_rows = 0;
  for (int trial = 0; trial < 10; ++trial) {
    // two almost-disjoint index sets: neither contains the other
    std::vector<PatternFamily> i1, i2;
    size_t shared = rng() % 2;
    std::vector<size_t> pool{0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(pool.begin(), pool.end(), rng);
    for (size_t j = 0; j < shared; ++j) {
      i1.push_back(PatternFamily::bits(descs[pool[j]], s.atoms.L()));
      i2.push_back(PatternFamily::bits(descs[pool[j]], s.atoms.L()));
    }
    i1.push_back(PatternFamily::bits(descs[pool[shared]], s.atoms.L()));
    i1.push_back(PatternFamily::bits(descs[pool[shared + 1]], s.atoms.L()));
    i2.push_back(PatternFamily::bits(descs[pool[shared + 2]], s.atoms.L()));
    i2.push_back(PatternFamily::bits(descs[pool[shared + 3]], s.atoms.L()));
    std::vector<SpeckerHom> pair = {SpeckerHom::make(i1), SpeckerHom::make(i2)};
    auto rows = hom_matrix(pair, s);
    if (rows[0] != rows[1]) ++distinct_rows;
  }
  char buf[112];
  std::snprintf(buf, sizeof buf, "identity=%s almost-disjoint pairs distinct=%d/10 seed=80001",
                identity ? "yes" : "no", distinct_rows);
  report(8, "distinct homomorphisms", identity && distinct_rows == 10, buf);
}

// 9. separation checker vs exhaustive finite search

void criterion9() {
  std::mt19937_64 rng(90001);
  Session s;
  auto random_desc = [&](Nat span) {
    GDescription d;
    d.def = static_cast<int>(rng() % 2);
    std::vector<std::pair<Ord, int>> exc;
    for (Nat k = 0; k < span; ++k)
      if (rng() % 3 == 0) exc.emplace_back(Ord::finite(k), 1 - d.def);
    return GDescription::make(d.def, std::move(exc));
  };

  int self_ok = 0;
  for (int i = 0; i < 100; ++i) {
    PatternFamily f = PatternFamily::bits(random_desc(4), s.atoms.L());
    if (!star_check(f, f)) ++self_ok;
  }

  int cross_ok = 0, cross_n = 0;
  while (cross_n < 100) {
    GDescription a = random_desc(4), b = random_desc(4);
    if (a == b) continue;
    PatternFamily fa = PatternFamily::bits(a, s.atoms.L());
    PatternFamily fb = PatternFamily::bits(b, s.atoms.L());
    if (star_check(fa, fb)) ++cross_ok;
    ++cross_n;
  }

  int mini_agree = 0;
  for (int i = 0; i < 20; ++i) {
    GDescription a = random_desc(3), b = random_desc(3);
    bool expect = !(a == b);
    if (star_bruteforce(s, a, b, 3, 3) == expect) ++mini_agree;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "seed=90001 self=%d/100 cross=%d/100 miniature agreement=%d/20", self_ok,
                cross_ok, mini_agree);
  report(9, "separation checker", self_ok == 100 && cross_ok == 100 && mini_agree == 20, buf);
}

// 10. the finite-preimage law gates the two repetition forms

void criterion10() {
  Session s;
  LetterFun fun;
  Term block = ast::gen_seq(Ord(), Ord::of_atom(s.atoms.L()), fun);
  auto literal = validate_word(ast::rep_literal(block), s);
  bool rejected = !literal.valid && !literal.violations.empty() &&
                  literal.violations[0].witness_coord.has_value() &&
                  literal.violations[0].message.find("omega_1") != std::string::npos;

  auto chunked = validate_word(build_M_g(s, GDescription{}, s.atoms.L()), s);
  char buf[96];
  std::snprintf(buf, sizeof buf, "literal rejected=%s chunked accepted=%s",
                rejected ? "yes" : "no", chunked.valid ? "yes" : "no");
  report(10, "finite-preimage enforcement", rejected && chunked.valid, buf);
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criteria5_6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
