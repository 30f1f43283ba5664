#include "tw/dsl.hpp"

#include <cctype>

namespace tw {

namespace {

class Parser {
 public:
  Parser(std::string_view src, const Session& s) : src_(src), s_(s) {}

  Term expr() {
    Term t = primary();
    std::vector<Term> parts{t};
    while (true) {
      skip_ws();
      if (!eat('.')) break;
      parts.push_back(primary());
    }
    if (parts.size() == 1) return parts[0];
    return ast::concat(std::move(parts));
  }

  Ord ord() {
    Ord o = ord_item();
    while (true) {
      skip_ws();
      if (!eat('+')) break;
      o = ord_add(o, ord_item());
    }
    return o;
  }

  GDescription bits() {
    expect('{');
    skip_ws();
    int def = 0;
    std::vector<std::pair<Ord, int>> exc;
    if (peek_ident() == "default") {
      ident();
      expect('=');
      def = bit();
      skip_ws();
      (void)eat(',');
    }
    skip_ws();
    while (!eat('}')) {
      Ord key = ord();
      expect(':');
      int v = bit();
      exc.emplace_back(std::move(key), v);
      skip_ws();
      if (eat(',')) continue;
      expect('}');
      break;
    }
    return GDescription::make(def, std::move(exc));
  }

  void finish() {
    skip_ws();
    if (pos_ < src_.size()) err("trailing input");
  }

 private:
  Term primary() {
    skip_ws();
    size_t at = pos_;
    std::string id = peek_ident();
    if (id == "eps") {
      ident();
      return ast::empty();
    }
    if (id == "g" || id == "h") {
      ident();
      expect('[');
      Ord c = ord();
      expect(']');
      return ast::lit(designated_letter(s_, std::move(c)));
    }
    if (id == "elem") {
      ident();
      expect('(');
      Ord c = ord();
      expect(',');
      long long v = integer();
      expect(')');
      const GroupSpec& spec = s_.groups.at(c);
      std::optional<GroupElement> e;
      if (spec.kind == GroupSpec::Kind::integers)
        e = GroupElement::integer(v);
      else if (spec.kind == GroupSpec::Kind::cyclic)
        e = GroupElement::cyclic(v, spec.param);
      else
        err("element literals are not supported for free-group coordinates", at);
      if (!e) return ast::empty();  // identity letters vanish
      return ast::lit(Letter{std::move(c), *e});
    }
    if (id == "Mk") {
      ident();
      expect('(');
      std::string name = ident();
      expect(')');
      auto a = s_.atoms.find(name);
      if (!a) fail(Errc::undeclared_atom, "undeclared cardinal '" + name + "' at offset " +
                                              std::to_string(at));
      if (!a->regular() || !a->uncountable())
        fail(Errc::not_regular_uncountable, "'" + name + "' is not regular and uncountable");
      LetterFun fun;
      return ast::gen_seq(Ord(), Ord::of_atom(*a), fun);
    }
    if (id == "Mg") {
      ident();
      expect('(');
      GDescription d = bits();
      expect(')');
      LetterFun fun;
      fun.kind = LetterFun::Kind::bits;
      fun.desc = std::move(d);
      return ast::rep_disjoint(ast::gen_seq(Ord(), Ord::of_atom(s_.atoms.L()), fun));
    }
    if (id == "seg") {
      ident();
      expect('(');
      Term t = expr();
      expect(',');
      Ord p = ord();
      expect(')');
      return ast::seg(std::move(t), std::move(p));
    }
    if (id == "inv") {
      ident();
      expect('(');
      Term t = expr();
      expect(')');
      return ast::inv(std::move(t));
    }
    if (id == "rep_w1") {
      ident();
      expect('(');
      Term t = expr();
      expect(')');
      return ast::rep_disjoint(std::move(t));
    }
    if (id == "rep_w1_literal") {
      ident();
      expect('(');
      Term t = expr();
      expect(')');
      return ast::rep_literal(std::move(t));
    }
    err("expected one of: eps, g[, h[, elem(, Mk(, Mg(, seg(, inv(, rep_w1(, rep_w1_literal(");
  }

  Ord ord_item() {
    skip_ws();
    size_t at = pos_;
    if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      return Ord::finite(nat());
    std::string id = ident();
    Nat exp = 1, coeff = 1;
    if (id == "w") {
      skip_ws();
      if (eat('^')) exp = nat();
      skip_ws();
      if (eat('*')) coeff = nat();
      return Ord::omega(exp, coeff);
    }
    auto a = s_.atoms.find(id);
    if (!a)
      fail(Errc::undeclared_atom,
           "undeclared cardinal '" + id + "' at offset " + std::to_string(at));
    skip_ws();
    if (eat('*')) coeff = nat();
    return Ord::of_atom(*a, coeff);
  }

  int bit() {
    skip_ws();
    if (eat('0')) return 0;
    if (eat('1')) return 1;
    err("expected bit 0 or 1");
  }

  long long integer() {
    skip_ws();
    bool neg = eat('-');
    Nat n = nat();
    long long v = static_cast<long long>(n);
    return neg ? -v : v;
  }

  Nat nat() {
    skip_ws();
    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
      err("expected a number");
    Nat n = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      n = n * 10 + static_cast<Nat>(src_[pos_++] - '0');
    return n;
  }

  std::string peek_ident() {
    skip_ws();
    size_t p = pos_;
    if (p >= src_.size() || !std::isalpha(static_cast<unsigned char>(src_[p]))) return {};
    std::string id;
    while (p < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[p])) || src_[p] == '_'))
      id += src_[p++];
    return id;
  }

  std::string ident() {
    std::string id = peek_ident();
    if (id.empty()) err("expected an identifier");
    pos_ += id.size();
    return id;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (!eat(c)) err(std::string("expected '") + c + "'");
  }

  [[noreturn]] void err(const std::string& what) { err(what, pos_); }
  [[noreturn]] void err(const std::string& what, size_t at) {
    fail(Errc::parse, "parse error at offset " + std::to_string(at) + ": " + what);
  }

  std::string_view src_;
  const Session& s_;
  size_t pos_ = 0;
};

}  // namespace

Term parse_expr(std::string_view src, const Session& s) {
  Parser p(src, s);
  Term t = p.expr();
  p.finish();
  return t;
}

Ord parse_ord(std::string_view src, const Session& s) {
  Parser p(src, s);
  Ord o = p.ord();
  p.finish();
  return o;
}

GDescription parse_bits(std::string_view src, const Session& s) {
  Parser p(src, s);
  GDescription d = p.bits();
  p.finish();
  return d;
}

// ---------------------------------------------------------------------------
// Printing

std::string print_bits(const GDescription& d) { return d.str(); }

std::string print_letter(const Letter& l, const Session& s) {
  Letter des = designated_letter(s, l.coord);
  if (l.elem == des.elem) return "g[" + l.coord.str() + "]";
  if (const auto* z = std::get_if<ZElem>(&l.elem.value()))
    return "elem(" + l.coord.str() + "," + std::to_string(z->v) + ")";
  if (const auto* c = std::get_if<CycElem>(&l.elem.value()))
    return "elem(" + l.coord.str() + "," + std::to_string(c->r) + ")";
  return "elem(" + l.coord.str() + "," + l.elem.str() + ")";  // free: for diagnostics only
}

std::string print_finite_word(const FiniteWord& w, const Session& s) {
  if (w.empty()) return "eps";
  std::string out;
  for (const Letter& l : w.letters) {
    if (!out.empty()) out += ".";
    out += print_letter(l, s);
  }
  return out;
}

namespace {

// Smallest declared regular uncountable cardinal strictly above x.
Atom atom_above(const Ord& x, const Session& s) {
  const Atom* best = nullptr;
  for (const Atom& a : s.atoms.all()) {
    if (!a.regular() || !a.uncountable()) continue;
    if (ord_cmp(x, Ord::of_atom(a)) != std::strong_ordering::less) continue;
    if (!best || a.rank() < best->rank()) best = &a;
  }
  if (!best)
    fail(Errc::unsupported_fragment, "no declared cardinal above " + x.str() + " to print tails");
  return *best;
}

std::string print_canonical_run(const Ord& start, const Ord& bound, const Session& s) {
  if (auto a = bound.as_single_atom()) {
    std::string mk = "Mk(" + a->name() + ")";
    return start.is_zero() ? mk : "seg(" + mk + "," + start.str() + ")";
  }
  Atom a = atom_above(bound, s);
  std::string mk = "Mk(" + a.name() + ")";
  std::string head = start.is_zero() ? mk : "seg(" + mk + "," + start.str() + ")";
  return head + ".inv(seg(" + mk + "," + bound.str() + "))";
}

// A bits run prints as a product of per-chunk tail differences of Mg words.
std::string print_bits_run(const GDescription& d, const Ord& base, const Ord& len,
                           const Session& s) {
  Atom Lat = s.atoms.L();
  Ord lam = Ord::of_atom(Lat);
  auto split = ord_split_at_atom(base, Lat);
  if (!split) fail(Errc::unsupported_fragment, "cannot print run based at " + base.str());
  std::string out;
  Nat copy = split->first;
  Ord beta = split->second;
  Ord done;  // consumed prefix of the run's local positions
  while (ord_lt(done, len)) {
    Ord room = *ord_left_sub(beta, lam);
    Ord rest = *ord_left_sub(done, len);
    Ord step = ord_lt(rest, room) ? rest : room;
    // mother description for this chunk: local keys [done, done+step) land
    // at beta + (key - done)
    GDescription mother;
    mother.def = d.def;
    for (const auto& [k, v] : d.exc) {
      auto rel = ord_left_sub(done, k);
      if (!rel || !ord_lt(*rel, step)) continue;
      mother.exc.emplace_back(ord_add(beta, *rel), v);
    }
    Ord copy_ord = copy == 0 ? Ord() : Ord::of_atom(Lat, copy);
    Ord p1 = ord_add(copy_ord, beta);
    Ord p2 = ord_add(p1, step);
    std::string bits = mother.str();
    std::string head =
        p1.is_zero() ? "Mg(" + bits + ")" : "seg(Mg(" + bits + ")," + p1.str() + ")";
    std::string piece = head + ".inv(seg(Mg(" + bits + ")," + p2.str() + "))";
    if (!out.empty()) out += ".";
    out += piece;
    done = ord_add(done, step);
    beta = Ord();
    copy += 1;
  }
  return out;
}

std::string print_seg(const Seg& seg, const Session& s) {
  if (const auto* l = std::get_if<LitSeg>(&seg)) return print_letter(l->l, s);
  if (const auto* g = std::get_if<GenSeg>(&seg)) {
    std::string body = g->kind == LetterFun::Kind::canonical
                           ? print_canonical_run(g->start, g->bound, s)
                           : print_bits_run(g->desc, g->base, g->bound, s);
    return g->rev ? "inv(" + body + ")" : body;
  }
  const auto& r = std::get<RepSeg>(seg);
  if (!(r.lambda == s.atoms.L()))
    fail(Errc::unsupported_fragment,
         "repetition over '" + r.lambda.name() + "' has no expression form");
  std::string body;
  if (r.block_start.is_zero()) {
    body = "Mg(" + r.desc.str() + ")";
  } else {
    if (!(r.desc.def == 0 && r.desc.exc.empty()))
      fail(Errc::unsupported_fragment, "block-shifted bit repetition has no expression form");
    body = "rep_w1(seg(Mk(" + r.lambda.name() + ")," + r.block_start.str() + "))";
  }
  bool cut = !r.from_copy.is_zero() || !ord_eq(r.from_offset, r.block_start);
  if (cut) {
    Ord delta = *ord_left_sub(r.block_start, r.from_offset);
    Ord pos = r.from_copy.is_zero()
                  ? delta
                  : ord_add(Ord::of_atom(r.lambda, *r.from_copy.as_finite()), delta);
    body = "seg(" + body + "," + pos.str() + ")";
  }
  return r.rev ? "inv(" + body + ")" : body;
}

}  // namespace

std::string print_word(const Word& w, const Session& s) {
  if (w.empty()) return "eps";
  std::string out;
  for (const Seg& seg : w.segs) {
    if (!out.empty()) out += ".";
    out += print_seg(seg, s);
  }
  return out;
}

std::string print_term(const Term& t, const Session& s) { return print_word(reduce(t, s), s); }

}  // namespace tw
