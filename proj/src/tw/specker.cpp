#include "tw/specker.hpp"

#include <json.hpp>

#include "tw/dsl.hpp"

namespace tw {

PatternFamily PatternFamily::canonical(Atom kappa) {
  if (!kappa.regular() || !kappa.uncountable())
    fail(Errc::not_regular_uncountable, "'" + kappa.name() + "' is not regular and uncountable");
  PatternFamily f;
  f.kind = Kind::canonical;
  f.kappa = std::move(kappa);
  return f;
}

PatternFamily PatternFamily::bits(GDescription d, Atom lambda, bool chunked) {
  if (!lambda.uncountable())
    fail(Errc::not_uncountable, "'" + lambda.name() + "' is not uncountable");
  PatternFamily f;
  f.kind = Kind::bits;
  f.desc = std::move(d);
  f.lambda = std::move(lambda);
  f.chunked = chunked;
  return f;
}

PatternFamily PatternFamily::finite(FiniteWord pattern) {
  if (pattern.empty()) fail(Errc::domain, "finite pattern must be nonempty");
  PatternFamily f;
  f.kind = Kind::finite;
  f.pattern = std::move(pattern);
  return f;
}

Term PatternFamily::word(const Session& s) const {
  switch (kind) {
    case Kind::canonical:
      return build_M_kappa(s, *kappa);
    case Kind::bits: {
      LetterFun fun;
      fun.kind = LetterFun::Kind::bits;
      fun.desc = desc;
      Term block = ast::gen_seq(Ord(), Ord::of_atom(*lambda), fun);
      return chunked ? ast::rep_disjoint(block) : ast::rep_literal(block);
    }
    case Kind::finite: {
      std::vector<Term> parts;
      for (const Letter& l : pattern.letters) parts.push_back(ast::lit(l));
      return parts.size() == 1 ? parts[0] : ast::concat(std::move(parts));
    }
  }
  fail(Errc::domain, "bad family kind");
}

bool operator==(const PatternFamily& a, const PatternFamily& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PatternFamily::Kind::canonical:
      return *a.kappa == *b.kappa;
    case PatternFamily::Kind::bits:
      return *a.lambda == *b.lambda && a.desc == b.desc && a.chunked == b.chunked;
    case PatternFamily::Kind::finite:
      return a.pattern == b.pattern;
  }
  return false;
}

Term build_M_kappa(const Session& s, const Atom& kappa) {
  (void)s;
  if (!kappa.regular() || !kappa.uncountable())
    fail(Errc::not_regular_uncountable, "'" + kappa.name() + "' is not regular and uncountable");
  LetterFun fun;  // canonical: beta |-> g_beta
  return ast::gen_seq(Ord(), Ord::of_atom(kappa), fun);
}

Term build_M_kappa(const Session& s, const Ord& kappa) {
  auto a = kappa.as_single_atom();
  if (!a)
    fail(Errc::not_regular_uncountable,
         "'" + kappa.str() + "' is not a regular uncountable cardinal");
  return build_M_kappa(s, *a);
}

Term build_M_g(const Session& s, GDescription desc, const Atom& lambda) {
  (void)s;
  if (!lambda.uncountable()) fail(Errc::not_uncountable, "'" + lambda.name() + "' is not uncountable");
  LetterFun fun;
  fun.kind = LetterFun::Kind::bits;
  fun.desc = std::move(desc);
  return ast::rep_disjoint(ast::gen_seq(Ord(), Ord::of_atom(lambda), fun));
}

// ---------------------------------------------------------------------------
// Occurrence scanning

namespace {

struct RunToKappa {
  Ord from_local;  // run start in the segment's local positions
  Ord to_local;    // exclusive end (local)
  Ord tail;        // matching end-segment start in the family word's domain
};

// Maximal consecutive coordinate run ending exactly at kappa inside a run
// with the given profile window [win_lo, win_hi) of local positions.
std::optional<RunToKappa> run_to_kappa(const GDescription& d, const Ord& base, const Ord& win_lo,
                                       const Ord& win_hi, const Ord& kappa) {
  if (d.def == 0) {
    auto hat = ord_left_sub(base, kappa);
    if (!hat || hat->is_zero()) return std::nullopt;
    if (!ord_le(*hat, win_hi)) return std::nullopt;
    Ord j = win_lo;
    if (auto m = d.max_exc_below(*hat)) {
      Ord after = ord_succ(*m);
      if (ord_lt(j, after)) j = after;
    }
    if (!ord_lt(j, *hat)) return std::nullopt;
    return RunToKappa{j, *hat, ord_add(base, j)};
  }
  // default bit 1: only a full suffix run reaches a limit coordinate
  if (!ord_eq(ord_add(base, win_hi), kappa)) return std::nullopt;
  Ord j = win_lo;
  if (auto m = d.max_exc_below(win_hi)) {
    Ord after = ord_succ(*m);
    if (ord_lt(j, after)) j = after;
  }
  if (!ord_lt(j, win_hi)) return std::nullopt;
  return RunToKappa{j, win_hi, ord_add(ord_add(base, j), Ord::finite(2))};
}

void scan_canonical(const Word& x, const Atom& kappa, std::vector<Occurrence>& out) {
  Ord k = Ord::of_atom(kappa);
  for (size_t i = 0; i < x.segs.size(); ++i) {
    const Seg& seg = x.segs[i];
    if (const auto* g = std::get_if<GenSeg>(&seg)) {
      bool canon = g->kind == LetterFun::Kind::canonical;
      Ord base = canon ? g->start : g->base;
      Ord len = canon ? *ord_left_sub(g->start, g->bound) : g->bound;
      const GDescription d = canon ? GDescription{} : g->desc;
      auto run = run_to_kappa(d, base, Ord(), len, k);
      if (!run) continue;
      Occurrence occ;
      occ.sign = g->rev ? -1 : +1;
      occ.matched_tail = run->tail;
      // canonical segments address cuts by absolute position
      occ.from = Cut{i, Ord(), canon ? ord_add(g->start, run->from_local) : run->from_local};
      occ.to = Cut{i, Ord(), canon ? ord_add(g->start, run->to_local) : run->to_local};
      out.push_back(std::move(occ));
      continue;
    }
    if (const auto* r = std::get_if<RepSeg>(&seg)) {
      if (!r->from_copy.is_zero()) continue;  // later chunks live above kappa <= lambda
      Ord lam = Ord::of_atom(r->lambda);
      auto run = run_to_kappa(r->desc, Ord(), r->from_offset, lam, k);
      if (!run) continue;
      Occurrence occ;
      occ.sign = r->rev ? -1 : +1;
      occ.matched_tail = run->tail;
      occ.from = Cut{i, Ord(), run->from_local};
      occ.to = ord_eq(run->to_local, lam) ? Cut{i, Ord::finite(1), r->block_start}
                                          : Cut{i, Ord(), run->to_local};
      out.push_back(std::move(occ));
    }
  }
}

void scan_bits(const Word& x, const PatternFamily& fam, std::vector<Occurrence>& out) {
  for (size_t i = 0; i < x.segs.size(); ++i) {
    const auto* r = std::get_if<RepSeg>(&x.segs[i]);
    if (!r) continue;
    if (!(r->lambda == *fam.lambda)) continue;
    if (!r->block_start.is_zero()) continue;
    // family descriptions are normalized over [0, lambda)
    GDescription want;
    want.def = fam.desc.def;
    Ord lam = Ord::of_atom(*fam.lambda);
    for (const auto& [key, v] : fam.desc.exc)
      if (ord_lt(key, lam)) want.exc.emplace_back(key, v);
    if (!(r->desc == want)) continue;
    Occurrence occ;
    occ.sign = r->rev ? -1 : +1;
    Ord delta = *ord_left_sub(r->block_start, r->from_offset);
    occ.matched_tail = r->from_copy.is_zero()
                           ? delta
                           : ord_add(Ord::of_atom(r->lambda, *r->from_copy.as_finite()), delta);
    occ.from = Cut{i, r->from_copy, r->from_offset};
    occ.to = Cut{i + 1, Ord(), Ord()};
    out.push_back(std::move(occ));
  }
}

void scan_finite(const Word& x, const FiniteWord& pattern, const Session& s,
                 std::vector<Occurrence>& out) {
  (void)s;
  FiniteWord ipattern;
  for (auto it = pattern.letters.rbegin(); it != pattern.letters.rend(); ++it)
    ipattern.letters.push_back(letter_inv(*it));

  size_t i = 0;
  while (i < x.segs.size()) {
    if (!std::holds_alternative<LitSeg>(x.segs[i])) {
      ++i;
      continue;
    }
    size_t a = i;
    std::vector<Letter> w;
    while (i < x.segs.size() && std::holds_alternative<LitSeg>(x.segs[i]))
      w.push_back(std::get<LitSeg>(x.segs[i++]).l);

    auto scan_pat = [&](const FiniteWord& p, int sign) {
      size_t m = p.letters.size();
      for (size_t e = 1; e <= w.size(); ++e) {
        size_t best = 0;
        for (size_t len = 1; len <= std::min(m, e); ++len) {
          bool match = true;
          for (size_t t = 0; t < len; ++t)
            if (!(w[e - len + t] == p.letters[m - len + t])) {
              match = false;
              break;
            }
          if (match) best = len;
        }
        if (best == 0) continue;
        Occurrence occ;
        occ.sign = sign;
        occ.from = Cut{a + e - best, Ord(), Ord()};
        occ.to = Cut{a + e, Ord(), Ord()};
        occ.matched_tail = Ord::finite(m - best);
        out.push_back(std::move(occ));
      }
    };
    scan_pat(pattern, +1);
    scan_pat(ipattern, -1);
  }
}

}  // namespace

std::vector<Occurrence> occurrences(const Word& x, const PatternFamily& fam, const Session& s) {
  std::vector<Occurrence> out;
  switch (fam.kind) {
    case PatternFamily::Kind::canonical:
      scan_canonical(x, *fam.kappa, out);
      break;
    case PatternFamily::Kind::bits:
      if (!fam.chunked)
        fail(Errc::validation, "literal omega_1 repetition family is not a word");
      scan_bits(x, fam, out);
      break;
    case PatternFamily::Kind::finite:
      scan_finite(x, fam.pattern, s, out);
      break;
  }
  return out;
}

OccReport class_count(const Word& x, const PatternFamily& fam, const Session& s) {
  // occurrences are listed one per end-segment class already
  OccReport r;
  r.reps = occurrences(x, fam, s);
  for (const Occurrence& o : r.reps)
    (o.sign > 0 ? r.plus : r.minus) += 1;
  return r;
}

long long phi_eval(const Word& x, const PatternFamily& fam, const Session& s) {
  OccReport r = class_count(x, fam, s);
  return static_cast<long long>(r.plus) - static_cast<long long>(r.minus);
}

long long phi_eval(const Term& x, const PatternFamily& fam, const Session& s) {
  return phi_eval(reduce(x, s), fam, s);
}

// ---------------------------------------------------------------------------

bool star_check(const PatternFamily& a, const PatternFamily& b) {
  if (a.kind != b.kind) return true;  // different shapes never share end segments
  switch (a.kind) {
    case PatternFamily::Kind::canonical:
      return !(*a.kappa == *b.kappa);
    case PatternFamily::Kind::bits:
      if (!a.chunked || !b.chunked)
        fail(Errc::unsupported_fragment, "literal repetition families are not comparable");
      return !(*a.lambda == *b.lambda && a.desc == b.desc);
    case PatternFamily::Kind::finite:
      return !(a.pattern.letters.back() == b.pattern.letters.back());
  }
  return true;
}

SpeckerHom SpeckerHom::make(std::vector<PatternFamily> families) {
  for (size_t i = 0; i < families.size(); ++i)
    for (size_t j = i + 1; j < families.size(); ++j)
      if (!star_check(families[i], families[j]))
        fail(Errc::domain, "index set families must be pairwise separated");
  SpeckerHom h;
  h.families = std::move(families);
  return h;
}

long long hom_eval(const SpeckerHom& h, const Term& x, const Session& s) {
  Word w = reduce(x, s);
  long long v = 0;
  for (const PatternFamily& f : h.families) v += phi_eval(w, f, s);
  return v;
}

std::vector<PatternFamily> hom_matrix_columns(std::span<const SpeckerHom> homs) {
  std::vector<PatternFamily> cols;
  for (const SpeckerHom& h : homs)
    for (const PatternFamily& f : h.families) {
      bool seen = false;
      for (const PatternFamily& c : cols)
        if (c == f) {
          seen = true;
          break;
        }
      if (!seen) cols.push_back(f);
    }
  return cols;
}

std::vector<std::vector<long long>> hom_matrix(std::span<const SpeckerHom> homs, const Session& s) {
  auto cols = hom_matrix_columns(homs);
  std::vector<Word> col_words;
  for (const PatternFamily& c : cols) col_words.push_back(reduce(c.word(s), s));
  std::vector<std::vector<long long>> m;
  for (const SpeckerHom& h : homs) {
    std::vector<long long> row;
    for (const Word& w : col_words) {
      long long v = 0;
      for (const PatternFamily& f : h.families) v += phi_eval(w, f, s);
      row.push_back(v);
    }
    m.push_back(std::move(row));
  }
  return m;
}

WitnessReport specker_witness(std::span<const Ord> F, const Atom& kappa, const Session& s) {
  Ord k = Ord::of_atom(kappa);
  std::optional<Ord> mx;
  for (const Ord& f : F) {
    if (!ord_lt(f, k)) continue;
    if (!mx || ord_lt(*mx, f)) mx = f;
  }
  WitnessReport r;
  r.beta = mx ? ord_succ(*mx) : Ord();
  Term w = r.beta.is_zero() ? build_M_kappa(s, kappa) : ast::seg(build_M_kappa(s, kappa), r.beta);
  r.restriction = restrict_finite(w, F, s);
  r.phi = phi_eval(w, PatternFamily::canonical(kappa), s);
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string cut_str(const Cut& c) {
  return std::to_string(c.seg) + ":" + c.copy.str() + ":" + c.offset.str();
}

nlohmann::json cut_json(const Cut& c) {
  return {{"seg", c.seg}, {"copy", c.copy.str()}, {"offset", c.offset.str()}};
}

}  // namespace

std::string occ_report_lines(const OccReport& r) {
  std::string s;
  s += "plus=" + std::to_string(r.plus) + "\n";
  s += "minus=" + std::to_string(r.minus) + "\n";
  for (const Occurrence& o : r.reps) {
    s += std::string("occ sign=") + (o.sign > 0 ? "+" : "-") + " region=[" + cut_str(o.from) +
         "," + cut_str(o.to) + ") tail=" + o.matched_tail.str() + "\n";
  }
  return s;
}

std::string occ_report_json(const OccReport& r) {
  nlohmann::json j;
  j["plus"] = r.plus;
  j["minus"] = r.minus;
  j["occurrences"] = nlohmann::json::array();
  for (const Occurrence& o : r.reps)
    j["occurrences"].push_back({{"sign", o.sign > 0 ? "+" : "-"},
                                {"from", cut_json(o.from)},
                                {"to", cut_json(o.to)},
                                {"tail", o.matched_tail.str()}});
  return j.dump();
}

std::string witness_lines(const WitnessReport& r, const Session& s) {
  std::string restr = r.restriction.empty() ? "eps" : print_finite_word(r.restriction, s);
  return "beta=" + r.beta.str() + " restriction=" + restr + " phi=" + std::to_string(r.phi) + "\n";
}

std::string witness_json(const WitnessReport& r, const Session& s) {
  nlohmann::json j;
  j["beta"] = r.beta.str();
  j["restriction"] = r.restriction.empty() ? "eps" : print_finite_word(r.restriction, s);
  j["phi"] = r.phi;
  j["ok"] = r.ok();
  return j.dump();
}

}  // namespace tw
