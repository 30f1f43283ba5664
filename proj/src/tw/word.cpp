#include "tw/word.hpp"

#include <algorithm>
#include <deque>

namespace tw {

// ---------------------------------------------------------------------------
// GDescription

GDescription GDescription::make(int def, std::vector<std::pair<Ord, int>> exc) {
  if (def != 0 && def != 1) fail(Errc::domain, "bit default must be 0 or 1");
  std::vector<std::pair<Ord, int>> kept;
  for (auto& [k, v] : exc) {
    if (v != 0 && v != 1) fail(Errc::domain, "bit value must be 0 or 1");
    if (v == def) continue;
    kept.emplace_back(k, v);
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return ord_lt(a.first, b.first); });
  for (size_t i = 0; i + 1 < kept.size(); ++i)
    if (ord_eq(kept[i].first, kept[i + 1].first))
      fail(Errc::domain, "duplicate bit exception at " + kept[i].first.str());
  GDescription d;
  d.def = def;
  d.exc = std::move(kept);
  return d;
}

int GDescription::at(const Ord& x) const {
  for (const auto& [k, v] : exc)
    if (ord_eq(k, x)) return v;
  return def;
}

GDescription GDescription::shifted_down(const Ord& delta, const Ord& len) const {
  GDescription d;
  d.def = def;
  for (const auto& [k, v] : exc) {
    auto s = ord_left_sub(delta, k);
    if (!s) continue;  // below the window
    if (!ord_lt(*s, len)) continue;
    d.exc.emplace_back(*s, v);
  }
  return d;
}

std::optional<Ord> GDescription::max_exc_below(const Ord& x) const {
  std::optional<Ord> best;
  for (const auto& [k, v] : exc)
    if (ord_lt(k, x)) best = k;  // exc sorted ascending
  return best;
}

std::string GDescription::str() const {
  std::string s = "{";
  bool first = true;
  if (def != 0) {
    s += "default=1";
    first = false;
  }
  for (const auto& [k, v] : exc) {
    if (!first) s += ", ";
    s += k.str() + ":" + std::to_string(v);
    first = false;
  }
  return s + "}";
}

bool operator==(const GDescription& a, const GDescription& b) {
  if (a.def != b.def || a.exc.size() != b.exc.size()) return false;
  for (size_t i = 0; i < a.exc.size(); ++i)
    if (!ord_eq(a.exc[i].first, b.exc[i].first) || a.exc[i].second != b.exc[i].second) return false;
  return true;
}

// ---------------------------------------------------------------------------
// AST constructors

namespace ast {
Term empty() { return std::make_shared<const TermNode>(TermNode{EmptyT{}}); }
Term lit(Letter l) { return std::make_shared<const TermNode>(TermNode{LitT{std::move(l)}}); }
Term concat(std::vector<Term> parts) {
  return std::make_shared<const TermNode>(TermNode{ConcatT{std::move(parts)}});
}
Term inv(Term t) { return std::make_shared<const TermNode>(TermNode{InvT{std::move(t)}}); }
Term gen_seq(Ord start, Ord bound, LetterFun fun) {
  return std::make_shared<const TermNode>(
      TermNode{GenSeqT{std::move(start), std::move(bound), std::move(fun)}});
}
Term rep_disjoint(Term block) {
  return std::make_shared<const TermNode>(TermNode{RepDisjointT{std::move(block)}});
}
Term rep_literal(Term block) {
  return std::make_shared<const TermNode>(TermNode{RepLiteralT{std::move(block)}});
}
Term seg(Term t, Ord pos) {
  return std::make_shared<const TermNode>(TermNode{SegT{std::move(t), std::move(pos)}});
}
}  // namespace ast

// ---------------------------------------------------------------------------
// Segment helpers

Ord gen_coord(const GenSeg& g, const Ord& p) {
  if (g.kind == LetterFun::Kind::canonical) return p;
  return ord_add(g.base, ord_add(p, Ord::finite(2 * static_cast<Nat>(g.desc.at(p)))));
}

Ord rep_coord(const RepSeg& r, const Ord& copy, const Ord& p) {
  Ord base = copy.is_zero() ? Ord() : Ord::of_atom(r.lambda, *copy.as_finite());
  return ord_add(base, ord_add(p, Ord::finite(2 * static_cast<Nat>(r.desc.at(p)))));
}

Letter gen_letter(const GenSeg& g, const Ord& p, const Session& s) {
  return designated_letter(s, gen_coord(g, p));
}

Letter rep_letter(const RepSeg& r, const Ord& copy, const Ord& p, const Session& s) {
  return designated_letter(s, rep_coord(r, copy, p));
}

std::optional<Ord> seg_length(const Seg& seg) {
  if (std::holds_alternative<LitSeg>(seg)) return Ord::finite(1);
  if (const auto* g = std::get_if<GenSeg>(&seg)) {
    if (g->kind == LetterFun::Kind::canonical) return *ord_left_sub(g->start, g->bound);
    return g->bound;
  }
  return std::nullopt;
}

namespace {

// Predecessor of a successor ordinal.
std::optional<Ord> ord_pred(const Ord& x) {
  if (x.tail() == 0) return std::nullopt;
  return Ord::make(x.parts(), x.tail() - 1);
}

struct Profile {
  Ord base;  // coordinate of position 0 when desc(0)==0
  Ord len;
  GDescription desc;
};

Profile gen_profile(const GenSeg& g) {
  if (g.kind == LetterFun::Kind::canonical)
    return Profile{g.start, *ord_left_sub(g.start, g.bound), GDescription{}};
  return Profile{g.base, g.bound, g.desc};
}

// Earliest absolute coordinate-space position from which the forward run pt
// and the body of the reversed run ps carry identical letters through their
// (shared) sup; nullopt when sups or defaults differ, so no end segment is
// shared at all.
std::optional<Ord> cotail_cut(const Profile& pt, const Profile& ps) {
  if (!ord_eq(ord_add(pt.base, pt.len), ord_add(ps.base, ps.len))) return std::nullopt;
  if (pt.desc.def != ps.desc.def) return std::nullopt;
  Ord cut = ord_lt(pt.base, ps.base) ? ps.base : pt.base;
  auto check = [&](const Profile& a, const Profile& b) {
    for (const auto& [k, v] : a.desc.exc) {
      Ord abs = ord_add(a.base, k);
      auto lb = ord_left_sub(b.base, abs);
      if (!lb || !ord_lt(*lb, b.len)) continue;  // lands in a remainder anyway
      if (b.desc.at(*lb) != v) {
        Ord c = ord_succ(abs);
        if (ord_lt(cut, c)) cut = c;
      }
    }
  };
  check(pt, ps);
  check(ps, pt);
  return cut;
}

// Canonical segments for a generator run over positions [start, bound) with
// letters at chunk_base + p + 2*desc(p) (canonical kind: at p itself).
// Finite runs expand to literal letters; trivial bit runs become canonical.
std::vector<Seg> make_gen_segs(LetterFun::Kind kind, const GDescription& desc, const Ord& base,
                               const Ord& start, const Ord& bound, bool rev, const Session& s) {
  std::vector<Seg> out;
  if (!ord_lt(start, bound)) return out;
  Ord len = *ord_left_sub(start, bound);
  if (auto n = len.as_finite()) {
    Ord p = start;
    for (Nat i = 0; i < *n; ++i) {
      GenSeg probe{kind, desc, base, Ord(), bound, false};
      Letter l = designated_letter(s, gen_coord(probe, p));
      out.push_back(LitSeg{rev ? letter_inv(l) : l});
      p = ord_succ(p);
    }
    if (rev) std::reverse(out.begin(), out.end());
    return out;
  }
  if (kind == LetterFun::Kind::canonical) {
    if (!base.is_zero()) fail(Errc::domain, "canonical run cannot carry a chunk base");
    out.push_back(GenSeg{kind, GDescription{}, Ord(), start, bound, rev});
    return out;
  }
  Ord folded_base = ord_add(base, start);
  GDescription d = desc.shifted_down(start, len);
  if (d.def == 0 && d.exc.empty()) {
    // coord(p) = folded_base + p: a plain consecutive run
    out.push_back(GenSeg{LetterFun::Kind::canonical, GDescription{}, Ord(), folded_base,
                         ord_add(folded_base, len), rev});
    return out;
  }
  out.push_back(GenSeg{LetterFun::Kind::bits, std::move(d), folded_base, Ord(), len, rev});
  return out;
}

Seg make_rep_seg(GDescription desc, const Atom& lambda, const Ord& block_start, Ord from_copy,
                 Ord from_offset, bool rev) {
  Ord lam = Ord::of_atom(lambda);
  GDescription d;
  d.def = desc.def;
  for (auto& [k, v] : desc.exc)
    if (ord_le(block_start, k) && ord_lt(k, lam)) d.exc.emplace_back(k, v);
  return RepSeg{std::move(d), lambda, block_start, std::move(from_copy), std::move(from_offset), rev};
}

bool rep_same_family(const RepSeg& a, const RepSeg& b) {
  return a.lambda == b.lambda && ord_eq(a.block_start, b.block_start) && a.desc == b.desc;
}

std::strong_ordering rep_pos_cmp(const RepSeg& a, const RepSeg& b) {
  auto c = ord_cmp(a.from_copy, b.from_copy);
  if (c != std::strong_ordering::equal) return c;
  return ord_cmp(a.from_offset, b.from_offset);
}

// Pieces of the repetition between positions (c1,o1) and (c2,o2), in word
// order; reversed and inverted when rev is set.
std::vector<Seg> expand_rep_range(const RepSeg& r, const Ord& c1, const Ord& o1, const Ord& c2,
                                  const Ord& o2, bool rev, const Session& s) {
  std::vector<Seg> out;
  Ord lam = Ord::of_atom(r.lambda);
  auto copy_base = [&](const Ord& c) {
    auto n = c.as_finite();
    if (!n) fail(Errc::unsupported_fragment, "repetition copy index beyond the finite fragment");
    return *n == 0 ? Ord() : Ord::of_atom(r.lambda, *n);
  };
  auto emit = [&](const Ord& c, const Ord& lo, const Ord& hi) {
    auto pieces = make_gen_segs(LetterFun::Kind::bits, r.desc, copy_base(c), lo, hi, rev, s);
    out.insert(out.end(), pieces.begin(), pieces.end());
  };
  if (ord_eq(c1, c2)) {
    emit(c1, o1, o2);
  } else {
    Nat k1 = *c1.as_finite(), k2 = *c2.as_finite();
    emit(c1, o1, lam);
    for (Nat k = k1 + 1; k < k2; ++k) emit(Ord::finite(k), r.block_start, lam);
    emit(c2, r.block_start, o2);
  }
  if (rev) std::reverse(out.begin(), out.end());
  return out;
}

bool seg_is_empty(const Seg& seg) {
  if (const auto* g = std::get_if<GenSeg>(&seg)) {
    if (g->kind == LetterFun::Kind::canonical) return !ord_lt(g->start, g->bound);
    return g->bound.is_zero();
  }
  return false;
}

Seg seg_inverted(const Seg& seg) {
  if (const auto* l = std::get_if<LitSeg>(&seg)) return LitSeg{letter_inv(l->l)};
  if (const auto* g = std::get_if<GenSeg>(&seg)) {
    GenSeg h = *g;
    h.rev = !h.rev;
    return h;
  }
  RepSeg h = std::get<RepSeg>(seg);
  h.rev = !h.rev;
  return h;
}

// The letter the reader of the word meets first/last in this segment
// (inversion applied for reversed segments); nullopt at limit edges.
std::optional<Letter> seg_first_letter(const Seg& seg, const Session& s) {
  if (const auto* l = std::get_if<LitSeg>(&seg)) return l->l;
  if (const auto* g = std::get_if<GenSeg>(&seg)) {
    Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
    if (!g->rev) return gen_letter(*g, lo, s);
    auto p = ord_pred(g->bound);
    if (!p) return std::nullopt;
    return letter_inv(gen_letter(*g, *p, s));
  }
  const auto& r = std::get<RepSeg>(seg);
  if (r.rev) return std::nullopt;
  return rep_letter(r, r.from_copy, r.from_offset, s);
}

std::optional<Letter> seg_last_letter(const Seg& seg, const Session& s) {
  if (const auto* l = std::get_if<LitSeg>(&seg)) return l->l;
  if (const auto* g = std::get_if<GenSeg>(&seg)) {
    Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
    if (g->rev) return letter_inv(gen_letter(*g, lo, s));
    auto p = ord_pred(g->bound);
    if (!p) return std::nullopt;
    return gen_letter(*g, *p, s);
  }
  const auto& r = std::get<RepSeg>(seg);
  if (!r.rev) return std::nullopt;
  return letter_inv(rep_letter(r, r.from_copy, r.from_offset, s));
}

// Remove the first/last letter of a segment; the result may need
// re-expansion (it can turn finite), hence a segment list.
std::vector<Seg> seg_drop_first(const Seg& seg, const Session& s) {
  if (std::holds_alternative<LitSeg>(seg)) return {};
  if (const auto* g = std::get_if<GenSeg>(&seg)) {
    if (!g->rev) {
      Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
      return make_gen_segs(g->kind, g->desc, g->base, ord_succ(lo), g->bound, false, s);
    }
    Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
    return make_gen_segs(g->kind, g->desc, g->base, lo, *ord_pred(g->bound), true, s);
  }
  const auto& r = std::get<RepSeg>(seg);
  if (r.rev) fail(Errc::domain, "reversed repetition has no first letter");
  RepSeg h = r;
  h.from_offset = ord_succ(h.from_offset);
  return {h};
}

std::vector<Seg> seg_drop_last(const Seg& seg, const Session& s) {
  if (std::holds_alternative<LitSeg>(seg)) return {};
  if (const auto* g = std::get_if<GenSeg>(&seg)) {
    if (g->rev) {
      Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
      return make_gen_segs(g->kind, g->desc, g->base, ord_succ(lo), g->bound, true, s);
    }
    Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
    return make_gen_segs(g->kind, g->desc, g->base, lo, *ord_pred(g->bound), false, s);
  }
  const auto& r = std::get<RepSeg>(seg);
  if (!r.rev) fail(Errc::domain, "forward repetition has no last letter");
  RepSeg h = r;
  h.from_offset = ord_succ(h.from_offset);
  return {h};
}

// ---------------------------------------------------------------------------
// The canonicalizing stack.

class CanonStack {
 public:
  explicit CanonStack(const Session& s) : s_(s) {}

  void push(Seg seg) {
    std::deque<Seg> pending;
    // re-normalize generator runs arriving from outside (finite expansion,
    // trivial-bit folding) so every rule sees canonical pieces
    if (const auto* g = std::get_if<GenSeg>(&seg)) {
      Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
      for (auto& piece : make_gen_segs(g->kind, g->desc, g->base, lo, g->bound, g->rev, s_))
        pending.push_back(std::move(piece));
    } else {
      pending.push_back(std::move(seg));
    }
    while (!pending.empty()) {
      Seg cur = std::move(pending.front());
      pending.pop_front();
      if (seg_is_empty(cur)) continue;
      if (out_.empty()) {
        out_.push_back(std::move(cur));
        continue;
      }
      std::vector<Seg> repl;
      if (apply_rules(cur, repl)) {
        for (auto it = repl.rbegin(); it != repl.rend(); ++it) pending.push_front(std::move(*it));
        continue;
      }
      out_.push_back(std::move(cur));
    }
  }

  Word take() { return Word{std::move(out_)}; }

 private:
  // On success the stack top has been popped and `repl` holds the
  // replacement stream (in word order) to reprocess; cur is consumed.
  bool apply_rules(const Seg& cur, std::vector<Seg>& repl) {
    const Seg& T = out_.back();

    // forward-then-reverse co-tails annihilate their common end segment
    if (const auto* tg = std::get_if<GenSeg>(&T)) {
      if (const auto* sg = std::get_if<GenSeg>(&cur)) {
        if (!tg->rev && sg->rev && cotail_cancel(*tg, *sg, repl)) {
          out_.pop_back();
          return true;
        }
        if (tg->rev && !sg->rev && gen_equal_body(*tg, *sg)) {
          out_.pop_back();  // inv(W)·W vanishes entirely
          return true;
        }
      }
    }
    if (const auto* tr = std::get_if<RepSeg>(&T)) {
      if (const auto* sr = std::get_if<RepSeg>(&cur)) {
        if (!tr->rev && sr->rev && rep_same_family(*tr, *sr)) {
          auto c = rep_pos_cmp(*tr, *sr);
          RepSeg a = *tr, b = *sr;
          out_.pop_back();
          if (c == std::strong_ordering::less)
            repl = expand_rep_range(a, a.from_copy, a.from_offset, b.from_copy, b.from_offset,
                                    false, s_);
          else if (c == std::strong_ordering::greater)
            repl = expand_rep_range(b, b.from_copy, b.from_offset, a.from_copy, a.from_offset,
                                    true, s_);
          return true;
        }
        if (tr->rev && !sr->rev && rep_same_family(*tr, *sr) &&
            rep_pos_cmp(*tr, *sr) == std::strong_ordering::equal) {
          out_.pop_back();
          return true;
        }
      }
    }

    // boundary letters in the same coordinate group must interact
    auto a = seg_last_letter(T, s_);
    auto b = seg_first_letter(cur, s_);
    if (a && b && ord_eq(a->coord, b->coord)) {
      auto prod = letter_mul(*a, *b);
      Seg t = T;
      out_.pop_back();
      repl = seg_drop_last(t, s_);
      if (prod) repl.push_back(LitSeg{*prod});
      auto right = seg_drop_first(cur, s_);
      repl.insert(repl.end(), right.begin(), right.end());
      return true;
    }

    // structural merges keeping the canonical form unique
    if (merge_rule(T, cur, repl)) {
      out_.pop_back();
      return true;
    }
    return false;
  }

  static bool gen_equal_body(const GenSeg& a, const GenSeg& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == LetterFun::Kind::canonical)
      return ord_eq(a.start, b.start) && ord_eq(a.bound, b.bound);
    return ord_eq(a.base, b.base) && ord_eq(a.bound, b.bound) && a.desc == b.desc;
  }

  // T forward, S reversed. True when the runs share an end segment (same
  // coordinate sup and same default bit); repl receives the uncancelled
  // prefixes of both sides.
  bool cotail_cancel(const GenSeg& T, const GenSeg& S, std::vector<Seg>& repl) {
    Profile pt = gen_profile(T), ps = gen_profile(S);
    auto cut = cotail_cut(pt, ps);
    if (!cut) return false;
    repl = make_gen_segs(LetterFun::Kind::bits, pt.desc, pt.base, Ord(),
                         *ord_left_sub(pt.base, *cut), false, s_);
    auto right = make_gen_segs(LetterFun::Kind::bits, ps.desc, ps.base, Ord(),
                               *ord_left_sub(ps.base, *cut), true, s_);
    repl.insert(repl.end(), right.begin(), right.end());
    return true;
  }

  bool merge_rule(const Seg& T, const Seg& S, std::vector<Seg>& repl) {
    // two generator runs chaining into one
    if (const auto* tg = std::get_if<GenSeg>(&T)) {
      if (const auto* sg = std::get_if<GenSeg>(&S)) {
        if (!tg->rev && !sg->rev) return chain_gens(*tg, *sg, false, repl);
        if (tg->rev && sg->rev) return chain_gens(*sg, *tg, true, repl);
      }
      // run followed by the repetition it prefixes
      if (const auto* sr = std::get_if<RepSeg>(&S)) {
        if (!tg->rev && !sr->rev && prefix_of_rep(*tg, *sr, repl)) return true;
      }
      if (const auto* sl = std::get_if<LitSeg>(&S)) {
        if (absorb_lit_after_gen(*tg, sl->l, repl)) return true;
      }
    }
    if (const auto* tl = std::get_if<LitSeg>(&T)) {
      if (const auto* sg = std::get_if<GenSeg>(&S)) {
        if (absorb_lit_before_gen(tl->l, *sg, repl)) return true;
      }
      if (const auto* sr = std::get_if<RepSeg>(&S)) {
        if (!sr->rev && absorb_lit_before_rep(tl->l, *sr, repl)) return true;
      }
    }
    if (const auto* tr = std::get_if<RepSeg>(&T)) {
      if (const auto* sg = std::get_if<GenSeg>(&S)) {
        if (tr->rev && sg->rev) {
          // mirror of prefix_of_rep for inverted words
          if (auto merged = prefix_of_rep_core(*sg, *tr)) {
            merged->rev = true;
            repl = {*merged};
            return true;
          }
        }
      }
      if (const auto* sl = std::get_if<LitSeg>(&S)) {
        if (tr->rev && absorb_lit_after_revrep(*tr, sl->l, repl)) return true;
      }
    }
    return false;
  }

  bool chain_gens(const GenSeg& left, const GenSeg& right, bool rev, std::vector<Seg>& repl) {
    Profile pl = gen_profile(left), pr = gen_profile(right);
    if (!ord_eq(ord_add(pl.base, pl.len), pr.base)) return false;
    if (pl.desc.def != pr.desc.def) return false;
    GDescription d;
    d.def = pl.desc.def;
    d.exc = pl.desc.exc;
    for (auto& [k, v] : pr.desc.exc) d.exc.emplace_back(ord_add(pl.len, k), v);
    repl = make_gen_segs(LetterFun::Kind::bits, d, pl.base, Ord(), ord_add(pl.len, pr.len), rev, s_);
    return true;
  }

  std::optional<RepSeg> prefix_of_rep_core(const GenSeg& g, const RepSeg& r) {
    if (!ord_eq(r.from_offset, r.block_start)) return std::nullopt;
    auto copies = r.from_copy.as_finite();
    if (!copies || *copies == 0) return std::nullopt;
    Profile p = gen_profile(g);
    auto split = ord_split_at_atom(p.base, r.lambda);
    if (!split) return std::nullopt;
    auto [xi, beta] = *split;
    if (xi + 1 != *copies) return std::nullopt;
    Ord lam = Ord::of_atom(r.lambda);
    if (!ord_le(r.block_start, beta) || !ord_lt(beta, lam)) return std::nullopt;
    if (!ord_eq(ord_add(beta, p.len), lam)) return std::nullopt;
    GDescription want = r.desc.shifted_down(beta, p.len);
    if (!(want == p.desc)) return std::nullopt;
    RepSeg merged = r;
    merged.from_copy = Ord::finite(xi);
    merged.from_offset = beta;
    return merged;
  }

  bool prefix_of_rep(const GenSeg& g, const RepSeg& r, std::vector<Seg>& repl) {
    auto merged = prefix_of_rep_core(g, r);
    if (!merged) return false;
    repl = {*merged};
    return true;
  }

  bool absorb_lit_after_gen(const GenSeg& g, const Letter& l, std::vector<Seg>& repl) {
    Profile p = gen_profile(g);
    // appending one position at the end (forward) / start extension (reversed)
    if (!g.rev) {
      auto bit = extension_bit(ord_add(p.base, p.len), l.coord);
      if (!bit) return false;
      Letter want = designated_letter(s_, l.coord);
      if (!(l == want)) return false;
      repl = extended(p, *bit, false);
      return true;
    }
    // reversed run ends at its lowest position; extend one below the base
    auto nb = ord_pred(p.base);
    if (!nb) return false;
    auto bit = prepended_bit(*nb, l.coord);
    if (!bit) return false;
    Letter want = letter_inv(designated_letter(s_, l.coord));
    if (!(l == want)) return false;
    repl = prepended(p, *bit, true);
    return true;
  }

  bool absorb_lit_before_gen(const Letter& l, const GenSeg& g, std::vector<Seg>& repl) {
    Profile p = gen_profile(g);
    if (!g.rev) {
      auto nb = ord_pred(p.base);
      if (!nb) return false;
      auto bit = prepended_bit(*nb, l.coord);
      if (!bit) return false;
      Letter want = designated_letter(s_, l.coord);
      if (!(l == want)) return false;
      repl = prepended(p, *bit, false);
      return true;
    }
    auto bit = extension_bit(ord_add(p.base, p.len), l.coord);
    if (!bit) return false;
    Letter want = letter_inv(designated_letter(s_, l.coord));
    if (!(l == want)) return false;
    repl = extended(p, *bit, true);
    return true;
  }

  bool absorb_lit_before_rep(const Letter& l, const RepSeg& r, std::vector<Seg>& repl) {
    auto prev = ord_pred(r.from_offset);
    if (!prev || ord_lt(*prev, r.block_start)) return false;
    Letter want = rep_letter(r, r.from_copy, *prev, s_);
    if (!(l == want)) return false;
    RepSeg h = r;
    h.from_offset = *prev;
    repl = {h};
    return true;
  }

  bool absorb_lit_after_revrep(const RepSeg& r, const Letter& l, std::vector<Seg>& repl) {
    auto prev = ord_pred(r.from_offset);
    if (!prev || ord_lt(*prev, r.block_start)) return false;
    Letter want = letter_inv(rep_letter(r, r.from_copy, *prev, s_));
    if (!(l == want)) return false;
    RepSeg h = r;
    h.from_offset = *prev;
    repl = {h};
    return true;
  }

  // Bit value making position `len` of a run with coordinate origin sup sit
  // at coordinate c; nullopt when c is not sup or sup+2.
  static std::optional<int> extension_bit(const Ord& sup, const Ord& c) {
    if (ord_eq(c, sup)) return 0;
    if (ord_eq(c, ord_add(sup, Ord::finite(2)))) return 1;
    return std::nullopt;
  }

  static std::optional<int> prepended_bit(const Ord& new_base, const Ord& c) {
    if (ord_eq(c, new_base)) return 0;
    if (ord_eq(c, ord_add(new_base, Ord::finite(2)))) return 1;
    return std::nullopt;
  }

  std::vector<Seg> extended(const Profile& p, int bit, bool rev) {
    GDescription d = p.desc;
    if (bit != d.def) d.exc.emplace_back(p.len, bit);
    return make_gen_segs(LetterFun::Kind::bits, d, p.base, Ord(), ord_succ(p.len), rev, s_);
  }

  std::vector<Seg> prepended(const Profile& p, int bit, bool rev) {
    GDescription d;
    d.def = p.desc.def;
    if (bit != d.def) d.exc.emplace_back(Ord(), bit);
    for (auto& [k, v] : p.desc.exc) d.exc.emplace_back(ord_add(Ord::finite(1), k), v);
    return make_gen_segs(LetterFun::Kind::bits, d, *ord_pred(p.base), Ord(),
                         ord_add(Ord::finite(1), p.len), rev, s_);
  }

  const Session& s_;
  std::vector<Seg> out_;
};

// ---------------------------------------------------------------------------
// Elaboration

struct RepBlockInfo {
  GDescription desc;
  Atom lambda;
  Ord block_start;
};

std::optional<RepBlockInfo> rep_block_info(const Term& block) {
  const auto* g = std::get_if<GenSeqT>(&block->node);
  Ord start;
  if (!g) {
    // a tail of a generator sequence is again a generator sequence
    const auto* sg = std::get_if<SegT>(&block->node);
    if (!sg) return std::nullopt;
    g = std::get_if<GenSeqT>(&sg->inner->node);
    if (!g) return std::nullopt;
    start = ord_add(g->start, sg->pos);
  } else {
    start = g->start;
  }
  auto lambda = g->bound.as_single_atom();
  if (!lambda || !lambda->uncountable()) return std::nullopt;
  if (!ord_lt(start, g->bound)) return std::nullopt;
  GDescription desc;
  if (g->fun.kind == LetterFun::Kind::bits) {
    if (!g->fun.chunk_base.is_zero()) return std::nullopt;
    desc = g->fun.desc;
  }
  return RepBlockInfo{std::move(desc), *lambda, std::move(start)};
}

Word tail_at_impl(const Word& w, const Ord& pos, const Session& s);

void emit_term(const Term& t, bool inverted, CanonStack& st, const Session& s) {
  if (std::holds_alternative<EmptyT>(t->node)) return;
  if (const auto* l = std::get_if<LitT>(&t->node)) {
    st.push(LitSeg{inverted ? letter_inv(l->l) : l->l});
    return;
  }
  if (const auto* c = std::get_if<ConcatT>(&t->node)) {
    if (!inverted)
      for (const Term& p : c->parts) emit_term(p, false, st, s);
    else
      for (auto it = c->parts.rbegin(); it != c->parts.rend(); ++it) emit_term(*it, true, st, s);
    return;
  }
  if (const auto* i = std::get_if<InvT>(&t->node)) {
    emit_term(i->inner, !inverted, st, s);
    return;
  }
  if (const auto* g = std::get_if<GenSeqT>(&t->node)) {
    for (auto& seg :
         make_gen_segs(g->fun.kind, g->fun.desc, g->fun.chunk_base, g->start, g->bound, inverted, s))
      st.push(std::move(seg));
    return;
  }
  if (const auto* r = std::get_if<RepDisjointT>(&t->node)) {
    auto info = rep_block_info(r->block);
    if (!info)
      fail(Errc::validation, "repetition block must be a zero-based generator sequence over an "
                             "uncountable cardinal");
    st.push(make_rep_seg(info->desc, info->lambda, info->block_start, Ord(), info->block_start,
                         inverted));
    return;
  }
  if (std::holds_alternative<RepLiteralT>(t->node))
    fail(Errc::validation, "literal omega_1 repetition is not a word");
  const auto& sg = std::get<SegT>(t->node);
  CanonStack sub(s);
  emit_term(sg.inner, false, sub, s);
  Word inner = sub.take();
  Word tail = tail_at_impl(inner, sg.pos, s);
  if (!inverted) {
    for (auto& seg : tail.segs) st.push(std::move(seg));
  } else {
    for (auto it = tail.segs.rbegin(); it != tail.segs.rend(); ++it) st.push(seg_inverted(*it));
  }
}

Word tail_at_impl(const Word& w, const Ord& pos, const Session& s) {
  Ord remaining = pos;
  for (size_t i = 0; i < w.segs.size(); ++i) {
    const Seg& seg = w.segs[i];
    if (const auto* r = std::get_if<RepSeg>(&seg)) {
      if (r->rev && !remaining.is_zero())
        fail(Errc::invalid_cut, "cannot cut inside a reversed repetition");
      auto split = ord_split_at_atom(remaining, r->lambda);
      if (!split) fail(Errc::invalid_cut, "cut position " + pos.str() + " beyond the word");
      auto [k, rest] = *split;
      RepSeg h = *r;
      if (k == 0) {
        h.from_offset = ord_add(h.from_offset, rest);
      } else {
        h.from_copy = ord_add(h.from_copy, Ord::finite(k));
        h.from_offset = ord_add(h.block_start, rest);
      }
      CanonStack st(s);
      st.push(h);
      for (size_t j = i + 1; j < w.segs.size(); ++j) st.push(w.segs[j]);
      return st.take();
    }
    Ord len = *seg_length(seg);
    if (ord_lt(remaining, len)) {
      CanonStack st(s);
      if (remaining.is_zero()) {
        for (size_t j = i; j < w.segs.size(); ++j) st.push(w.segs[j]);
        return st.take();
      }
      const auto* g = std::get_if<GenSeg>(&seg);
      if (!g || g->rev) fail(Errc::invalid_cut, "cannot cut inside a reversed segment");
      Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
      for (auto& piece : make_gen_segs(g->kind, g->desc, g->base, ord_add(lo, remaining), g->bound,
                                       false, s))
        st.push(std::move(piece));
      for (size_t j = i + 1; j < w.segs.size(); ++j) st.push(w.segs[j]);
      return st.take();
    }
    remaining = *ord_left_sub(len, remaining);
  }
  fail(Errc::invalid_cut, "cut position " + pos.str() + " is not inside the word");
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_walk(const Term& t, const Session& s, ValidationReport& rep) {
  if (std::holds_alternative<EmptyT>(t->node) || std::holds_alternative<LitT>(t->node)) return;
  if (const auto* c = std::get_if<ConcatT>(&t->node)) {
    for (const Term& p : c->parts) validate_walk(p, s, rep);
    return;
  }
  if (const auto* i = std::get_if<InvT>(&t->node)) {
    validate_walk(i->inner, s, rep);
    return;
  }
  if (const auto* g = std::get_if<GenSeqT>(&t->node)) {
    if (!g->bound.is_countable()) rep.sigma_word = false;
    if (g->fun.kind == LetterFun::Kind::bits) {
      // adjacency safety: positions p, p+1 land at p+2b and p+1+2b', which
      // are distinct for every bit combination
      for (int b1 = 0; b1 <= 1; ++b1)
        for (int b2 = 0; b2 <= 1; ++b2)
          if (2 * b1 == 1 + 2 * b2)
            rep.violations.push_back({"adjacent positions share a coordinate", std::nullopt});
    }
    return;
  }
  if (const auto* r = std::get_if<RepDisjointT>(&t->node)) {
    rep.sigma_word = false;
    auto info = rep_block_info(r->block);
    if (!info) {
      rep.violations.push_back(
          {"repetition block must be a zero-based generator sequence over an uncountable cardinal",
           std::nullopt});
      validate_walk(r->block, s, rep);
    }
    return;
  }
  if (const auto* r = std::get_if<RepLiteralT>(&t->node)) {
    rep.sigma_word = false;
    std::optional<Ord> witness;
    if (const auto* g = std::get_if<GenSeqT>(&r->block->node)) {
      if (g->fun.kind == LetterFun::Kind::canonical)
        witness = g->start;
      else
        witness = ord_add(g->fun.chunk_base,
                          ord_add(g->start, Ord::finite(2 * static_cast<Nat>(g->fun.desc.at(g->start)))));
    }
    std::string msg = "literal omega_1 repetition: coordinate " +
                      (witness ? witness->str() : std::string("of the block")) +
                      " is hit omega_1 times";
    rep.violations.push_back({std::move(msg), witness});
    return;
  }
  const auto& sg = std::get<SegT>(t->node);
  validate_walk(sg.inner, s, rep);
}

}  // namespace

ValidationReport validate_word(const Term& t, const Session& s) {
  ValidationReport rep;
  validate_walk(t, s, rep);
  rep.valid = rep.violations.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Public operations

Word reduce(const Term& t, const Session& s) {
  auto rep = validate_word(t, s);
  if (!rep.valid) fail(Errc::validation, rep.violations.front().message);
  CanonStack st(s);
  emit_term(t, false, st, s);
  return st.take();
}

Word reduce(const Word& w, const Session& s) {
  CanonStack st(s);
  for (const Seg& seg : w.segs) st.push(seg);
  return st.take();
}

namespace {

bool seg_eq(const Seg& a, const Seg& b) {
  if (a.index() != b.index()) return false;
  if (const auto* la = std::get_if<LitSeg>(&a)) return la->l == std::get<LitSeg>(b).l;
  if (const auto* ga = std::get_if<GenSeg>(&a)) {
    const auto& gb = std::get<GenSeg>(b);
    if (ga->kind != gb.kind || ga->rev != gb.rev) return false;
    if (ga->kind == LetterFun::Kind::canonical)
      return ord_eq(ga->start, gb.start) && ord_eq(ga->bound, gb.bound);
    return ord_eq(ga->base, gb.base) && ord_eq(ga->bound, gb.bound) && ga->desc == gb.desc;
  }
  const auto& ra = std::get<RepSeg>(a);
  const auto& rb = std::get<RepSeg>(b);
  return ra.rev == rb.rev && rep_same_family(ra, rb) &&
         rep_pos_cmp(ra, rb) == std::strong_ordering::equal;
}

}  // namespace

bool word_iso(const Word& a, const Word& b) {
  if (a.segs.size() != b.segs.size()) return false;
  for (size_t i = 0; i < a.segs.size(); ++i)
    if (!seg_eq(a.segs[i], b.segs[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Restriction

namespace {

bool in_set(const Ord& x, std::span<const Ord> F) {
  for (const Ord& f : F)
    if (ord_eq(x, f)) return true;
  return false;
}

struct PosLetter {
  Ord primary;    // position (or copy for repetitions)
  Ord secondary;  // offset within the copy
  Letter l;
};

void sort_hits(std::vector<PosLetter>& hits) {
  std::sort(hits.begin(), hits.end(), [](const PosLetter& a, const PosLetter& b) {
    auto c = ord_cmp(a.primary, b.primary);
    if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
    return ord_lt(a.secondary, b.secondary);
  });
}

void flush_hits(std::vector<PosLetter> hits, bool inverted, std::vector<Letter>& out) {
  sort_hits(hits);
  if (!inverted) {
    for (auto& h : hits) out.push_back(std::move(h.l));
  } else {
    for (auto it = hits.rbegin(); it != hits.rend(); ++it) out.push_back(letter_inv(it->l));
  }
}

// Positions p in [lo, hi) with chunk_base + p + 2*d(p) == f.
void gen_positions_at(const GDescription& d, const Ord& base, const Ord& lo, const Ord& hi,
                      const Ord& f, const Session& s, std::vector<PosLetter>& hits) {
  auto r = ord_left_sub(base, f);
  if (!r) return;
  auto consider = [&](const Ord& p, int bit) {
    if (d.at(p) != bit) return;
    if (!ord_le(lo, p) || !ord_lt(p, hi)) return;
    hits.push_back({p, Ord(), designated_letter(s, f)});
  };
  consider(*r, 0);
  if (r->tail() >= 2) consider(Ord::make(r->parts(), r->tail() - 2), 1);
}

void collect_term(const Term& t, bool inverted, std::span<const Ord> F, const Session& s,
                  std::vector<Letter>& out);

void collect_word_segs(const std::vector<Seg>& segs, bool inverted, std::span<const Ord> F,
                       const Session& s, std::vector<Letter>& out) {
  auto scan = [&](const Seg& seg) {
    if (const auto* l = std::get_if<LitSeg>(&seg)) {
      if (in_set(l->l.coord, F)) out.push_back(inverted ? letter_inv(l->l) : l->l);
      return;
    }
    if (const auto* g = std::get_if<GenSeg>(&seg)) {
      std::vector<PosLetter> hits;
      Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
      Ord hi = g->bound;
      for (const Ord& f : F) {
        if (g->kind == LetterFun::Kind::canonical) {
          if (ord_le(lo, f) && ord_lt(f, hi)) hits.push_back({f, Ord(), designated_letter(s, f)});
        } else {
          gen_positions_at(g->desc, g->base, lo, hi, f, s, hits);
        }
      }
      flush_hits(std::move(hits), inverted != g->rev, out);
      return;
    }
    const auto& r = std::get<RepSeg>(seg);
    std::vector<PosLetter> hits;
    Ord lam = Ord::of_atom(r.lambda);
    for (const Ord& f : F) {
      auto split = ord_split_at_atom(f, r.lambda);
      if (!split) continue;
      auto [k, rest] = *split;
      Ord copy = Ord::finite(k);
      auto consider = [&](const Ord& p, int bit) {
        if (r.desc.at(p) != bit) return;
        if (!ord_le(r.block_start, p) || !ord_lt(p, lam)) return;
        // position must lie in the suffix
        auto c = ord_cmp(copy, r.from_copy);
        if (c == std::strong_ordering::less) return;
        if (c == std::strong_ordering::equal && ord_lt(p, r.from_offset)) return;
        hits.push_back({copy, p, designated_letter(s, f)});
      };
      consider(rest, 0);
      if (rest.tail() >= 2) consider(Ord::make(rest.parts(), rest.tail() - 2), 1);
    }
    flush_hits(std::move(hits), inverted != r.rev, out);
  };
  if (!inverted) {
    for (const Seg& seg : segs) scan(seg);
  } else {
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) scan(*it);
  }
}

void collect_term(const Term& t, bool inverted, std::span<const Ord> F, const Session& s,
                  std::vector<Letter>& out) {
  if (std::holds_alternative<EmptyT>(t->node)) return;
  if (const auto* l = std::get_if<LitT>(&t->node)) {
    if (in_set(l->l.coord, F)) out.push_back(inverted ? letter_inv(l->l) : l->l);
    return;
  }
  if (const auto* c = std::get_if<ConcatT>(&t->node)) {
    if (!inverted)
      for (const Term& p : c->parts) collect_term(p, false, F, s, out);
    else
      for (auto it = c->parts.rbegin(); it != c->parts.rend(); ++it)
        collect_term(*it, true, F, s, out);
    return;
  }
  if (const auto* i = std::get_if<InvT>(&t->node)) {
    collect_term(i->inner, !inverted, F, s, out);
    return;
  }
  if (const auto* g = std::get_if<GenSeqT>(&t->node)) {
    std::vector<PosLetter> hits;
    for (const Ord& f : F) {
      if (g->fun.kind == LetterFun::Kind::canonical) {
        if (ord_le(g->start, f) && ord_lt(f, g->bound))
          hits.push_back({f, Ord(), designated_letter(s, f)});
      } else {
        gen_positions_at(g->fun.desc, g->fun.chunk_base, g->start, g->bound, f, s, hits);
      }
    }
    flush_hits(std::move(hits), inverted, out);
    return;
  }
  if (const auto* r = std::get_if<RepDisjointT>(&t->node)) {
    auto info = rep_block_info(r->block);
    if (!info) fail(Errc::validation, "repetition block must be a generator sequence");
    Seg seg = make_rep_seg(info->desc, info->lambda, info->block_start, Ord(), info->block_start,
                           false);
    collect_word_segs({seg}, inverted, F, s, out);
    return;
  }
  if (std::holds_alternative<RepLiteralT>(t->node))
    fail(Errc::validation, "literal omega_1 repetition is not a word");
  const auto& sg = std::get<SegT>(t->node);
  CanonStack sub(s);
  emit_term(sg.inner, false, sub, s);
  Word tail = tail_at_impl(sub.take(), sg.pos, s);
  collect_word_segs(tail.segs, inverted, F, s, out);
}

FiniteWord free_reduce(std::vector<Letter> letters) {
  std::vector<Letter> red;
  for (Letter& l : letters) {
    if (!red.empty() && ord_eq(red.back().coord, l.coord)) {
      auto p = letter_mul(red.back(), l);
      red.pop_back();
      if (p) red.push_back(*p);
      continue;
    }
    red.push_back(std::move(l));
  }
  return FiniteWord{std::move(red)};
}

}  // namespace

FiniteWord restrict_finite(const Term& t, std::span<const Ord> F, const Session& s) {
  auto rep = validate_word(t, s);
  if (!rep.valid) fail(Errc::validation, rep.violations.front().message);
  std::vector<Letter> out;
  collect_term(t, false, F, s, out);
  return free_reduce(std::move(out));
}

FiniteWord restrict_finite(const Word& w, std::span<const Ord> F, const Session& s) {
  std::vector<Letter> out;
  collect_word_segs(w.segs, false, F, s, out);
  return free_reduce(std::move(out));
}

bool equiv_on(const Term& a, const Term& b, std::span<const Ord> F, const Session& s) {
  return restrict_finite(a, F, s) == restrict_finite(b, F, s);
}

// ---------------------------------------------------------------------------
// Tails

Word tail_at(const Word& w, const Ord& pos, const Session& s) { return tail_at_impl(w, pos, s); }

Word tail_at(const Word& w, const Cut& cut, const Session& s) {
  if (cut.seg > w.segs.size()) fail(Errc::invalid_cut, "cut segment index out of range");
  CanonStack st(s);
  if (cut.seg < w.segs.size()) {
    const Seg& seg = w.segs[cut.seg];
    if (const auto* r = std::get_if<RepSeg>(&seg)) {
      RepSeg h = *r;
      auto c = ord_cmp(cut.copy, h.from_copy);
      bool after = c == std::strong_ordering::greater ||
                   (c == std::strong_ordering::equal && ord_le(h.from_offset, cut.offset));
      if (!after || !ord_le(h.block_start, cut.offset) ||
          !ord_lt(cut.offset, Ord::of_atom(h.lambda)))
        fail(Errc::invalid_cut, "cut outside the repetition suffix");
      h.from_copy = cut.copy;
      h.from_offset = cut.offset;
      st.push(h);
    } else if (const auto* g = std::get_if<GenSeg>(&seg)) {
      if (g->rev && !(ord_eq(cut.offset, g->kind == LetterFun::Kind::canonical ? g->start : Ord())))
        fail(Errc::invalid_cut, "cannot cut inside a reversed segment");
      Ord lo = g->kind == LetterFun::Kind::canonical ? g->start : Ord();
      if (!ord_le(lo, cut.offset) || !ord_lt(cut.offset, g->bound))
        fail(Errc::invalid_cut, "cut offset outside the segment");
      for (auto& piece : make_gen_segs(g->kind, g->desc, g->base, cut.offset, g->bound, g->rev, s))
        st.push(std::move(piece));
    } else {
      if (!cut.offset.is_zero()) fail(Errc::invalid_cut, "cut offset inside a letter");
      st.push(seg);
    }
    for (size_t j = cut.seg + 1; j < w.segs.size(); ++j) st.push(w.segs[j]);
  }
  return st.take();
}

// ---------------------------------------------------------------------------
// Quasi-decomposition

namespace {

// Exact structural inverse pair test for whole segments.
bool exact_inverse_pair(const Seg& a, const Seg& b, const Session& s) {
  Seg ib = seg_inverted(b);
  if (a.index() != ib.index()) return false;
  if (const auto* la = std::get_if<LitSeg>(&a)) return la->l == std::get<LitSeg>(ib).l;
  if (const auto* ga = std::get_if<GenSeg>(&a)) {
    const auto& gb = std::get<GenSeg>(ib);
    if (ga->rev != gb.rev || ga->kind != gb.kind) return false;
    if (ga->kind == LetterFun::Kind::canonical)
      return ord_eq(ga->start, gb.start) && ord_eq(ga->bound, gb.bound);
    return ord_eq(ga->base, gb.base) && ord_eq(ga->bound, gb.bound) && ga->desc == gb.desc;
  }
  (void)s;
  const auto& ra = std::get<RepSeg>(a);
  const auto& rb = std::get<RepSeg>(ib);
  return ra.rev == rb.rev && rep_same_family(ra, rb) &&
         rep_pos_cmp(ra, rb) == std::strong_ordering::equal;
}

}  // namespace

QuasiDecomposition quasi_decompose(const Word& x, const Word& y, const Session& s) {
  std::deque<Seg> left(x.segs.begin(), x.segs.end());
  std::deque<Seg> right(y.segs.begin(), y.segs.end());
  std::deque<Seg> mid;

  auto replace_back = [&](std::deque<Seg>& dq, std::vector<Seg> repl) {
    dq.pop_back();
    for (auto& p : repl) dq.push_back(std::move(p));
  };
  auto replace_front = [&](std::deque<Seg>& dq, std::vector<Seg> repl) {
    dq.pop_front();
    for (auto it = repl.rbegin(); it != repl.rend(); ++it) dq.push_front(std::move(*it));
  };

  while (!left.empty() && !right.empty()) {
    const Seg& A = left.back();
    const Seg& B = right.front();

    if (exact_inverse_pair(A, B, s)) {
      mid.push_front(A);
      left.pop_back();
      right.pop_front();
      continue;
    }

    // forward tail against reversed co-tail: the common end segment moves
    // into the middle
    const auto* ag = std::get_if<GenSeg>(&A);
    const auto* bg = std::get_if<GenSeg>(&B);
    if (ag && bg && !ag->rev && bg->rev) {
      Profile pa = gen_profile(*ag), pb = gen_profile(*bg);
      if (auto cut = cotail_cut(pa, pb)) {
        Ord la = *ord_left_sub(pa.base, *cut);
        Ord lb = *ord_left_sub(pb.base, *cut);
        auto common = make_gen_segs(LetterFun::Kind::bits, pa.desc, pa.base, la, pa.len, false, s);
        for (auto it = common.rbegin(); it != common.rend(); ++it) mid.push_front(std::move(*it));
        replace_back(left, make_gen_segs(LetterFun::Kind::bits, pa.desc, pa.base, Ord(), la,
                                         false, s));
        replace_front(right, make_gen_segs(LetterFun::Kind::bits, pb.desc, pb.base, Ord(), lb,
                                           true, s));
        continue;
      }
    }
    const auto* ar = std::get_if<RepSeg>(&A);
    const auto* br = std::get_if<RepSeg>(&B);
    if (ar && br && !ar->rev && br->rev && rep_same_family(*ar, *br)) {
      auto c = rep_pos_cmp(*ar, *br);
      if (c == std::strong_ordering::less) {
        RepSeg m = *ar;
        m.from_copy = br->from_copy;
        m.from_offset = br->from_offset;
        mid.push_front(m);
        right.pop_front();
        replace_back(left, expand_rep_range(*ar, ar->from_copy, ar->from_offset, br->from_copy,
                                            br->from_offset, false, s));
        continue;
      }
      // A is the shorter tail: all of A cancels
      mid.push_front(A);
      left.pop_back();
      replace_front(right, expand_rep_range(*br, br->from_copy, br->from_offset, ar->from_copy,
                                            ar->from_offset, true, s));
      continue;
    }

    // single-letter peel at the seam
    auto a = seg_last_letter(A, s);
    auto b = seg_first_letter(B, s);
    if (a && b && ord_eq(a->coord, b->coord) && letter_inv(*a) == *b) {
      mid.push_front(LitSeg{*a});
      replace_back(left, seg_drop_last(A, s));
      replace_front(right, seg_drop_first(B, s));
      continue;
    }
    break;
  }

  QuasiDecomposition qd;
  qd.left.segs.assign(left.begin(), left.end());
  qd.right.segs.assign(right.begin(), right.end());
  CanonStack st(s);
  for (Seg& seg : mid) st.push(std::move(seg));
  qd.middle = st.take();
  return qd;
}

// ---------------------------------------------------------------------------

Term to_term(const Word& w) {
  std::vector<Term> parts;
  for (const Seg& seg : w.segs) {
    if (const auto* l = std::get_if<LitSeg>(&seg)) {
      parts.push_back(ast::lit(l->l));
      continue;
    }
    if (const auto* g = std::get_if<GenSeg>(&seg)) {
      LetterFun fun;
      Term t;
      if (g->kind == LetterFun::Kind::canonical) {
        fun.kind = LetterFun::Kind::canonical;
        t = ast::gen_seq(g->start, g->bound, fun);
      } else {
        fun.kind = LetterFun::Kind::bits;
        fun.desc = g->desc;
        fun.chunk_base = g->base;
        t = ast::gen_seq(Ord(), g->bound, fun);
      }
      parts.push_back(g->rev ? ast::inv(t) : t);
      continue;
    }
    const auto& r = std::get<RepSeg>(seg);
    LetterFun fun;
    fun.kind = LetterFun::Kind::bits;
    fun.desc = r.desc;
    Term block = ast::gen_seq(r.block_start, Ord::of_atom(r.lambda), fun);
    Term t = ast::rep_disjoint(block);
    bool cut = !r.from_copy.is_zero() || !ord_eq(r.from_offset, r.block_start);
    if (cut) {
      Ord delta = *ord_left_sub(r.block_start, r.from_offset);
      Ord pos = r.from_copy.is_zero()
                    ? delta
                    : ord_add(Ord::of_atom(r.lambda, *r.from_copy.as_finite()), delta);
      t = ast::seg(t, pos);
    }
    parts.push_back(r.rev ? ast::inv(t) : t);
  }
  if (parts.empty()) return ast::empty();
  if (parts.size() == 1) return parts[0];
  return ast::concat(std::move(parts));
}

}  // namespace tw
