#include "tw/ord.hpp"

#include <algorithm>

namespace tw {

AtomTable::AtomTable() {
  atoms_.emplace_back(std::make_shared<const AtomInfo>(AtomInfo{"w1", 0, true, true}));
  atoms_.emplace_back(std::make_shared<const AtomInfo>(AtomInfo{"k1", 1, true, true}));
  atoms_.emplace_back(std::make_shared<const AtomInfo>(AtomInfo{"L", 2, true, true}));
}

Atom AtomTable::declare(const std::string& name, std::optional<int> rank, bool regular,
                        bool uncountable) {
  if (find(name)) fail(Errc::domain, "cardinal '" + name + "' already declared");
  int r;
  if (rank) {
    r = *rank;
    for (const Atom& a : atoms_)
      if (a.rank() == r) fail(Errc::domain, "cardinal rank " + std::to_string(r) + " already taken");
  } else {
    r = 0;
    for (const Atom& a : atoms_) r = std::max(r, a.rank());
    ++r;
  }
  atoms_.emplace_back(std::make_shared<const AtomInfo>(AtomInfo{name, r, regular, uncountable}));
  return atoms_.back();
}

std::optional<Atom> AtomTable::find(const std::string& name) const {
  for (const Atom& a : atoms_)
    if (a.name() == name) return a;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// Term-order key: atoms above all omega powers, atoms by rank, powers by exp.
std::strong_ordering key_cmp(const OrdPart& a, const OrdPart& b) {
  if (a.atom && b.atom) return a.atom->rank() <=> b.atom->rank();
  if (a.atom) return std::strong_ordering::greater;
  if (b.atom) return std::strong_ordering::less;
  return a.exp <=> b.exp;
}



}  // namespace

Ord Ord::finite(Nat n) {
  Ord o;
  o.tail_ = n;
  return o;
}

Ord Ord::omega(Nat exp, Nat coeff) {
  if (exp == 0 || coeff == 0) fail(Errc::domain, "omega part needs exp>=1, coeff>=1");
  Ord o;
  o.parts_.push_back(OrdPart{std::nullopt, exp, coeff});
  return o;
}

Ord Ord::of_atom(const Atom& a, Nat coeff) {
  if (coeff == 0) fail(Errc::domain, "atom coefficient must be >= 1");
  Ord o;
  o.parts_.push_back(OrdPart{a, 1, coeff});
  return o;
}

Ord Ord::make(std::vector<OrdPart> parts, Nat tail) {
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].coeff == 0 || (!parts[i].atom && parts[i].exp == 0))
      fail(Errc::domain, "malformed ordinal part");
    if (i + 1 < parts.size() && key_cmp(parts[i], parts[i + 1]) != std::strong_ordering::greater)
      fail(Errc::domain, "ordinal parts not strictly decreasing");
  }
  Ord o;
  o.parts_ = std::move(parts);
  o.tail_ = tail;
  return o;
}

std::optional<Nat> Ord::as_finite() const {
  if (!parts_.empty()) return std::nullopt;
  return tail_;
}

bool Ord::is_countable() const {
  for (const OrdPart& p : parts_)
    if (p.atom) return false;
  return true;
}

std::optional<Atom> Ord::leading_atom() const {
  if (!parts_.empty() && parts_[0].atom) return parts_[0].atom;
  return std::nullopt;
}

std::optional<Atom> Ord::as_single_atom() const {
  if (parts_.size() == 1 && parts_[0].atom && parts_[0].coeff == 1 && tail_ == 0)
    return parts_[0].atom;
  return std::nullopt;
}

std::string Ord::str() const {
  if (is_zero()) return "0";
  std::string s;
  for (const OrdPart& p : parts_) {
    if (!s.empty()) s += "+";
    if (p.atom) {
      s += p.atom->name();
    } else {
      s += "w";
      if (p.exp > 1) s += "^" + std::to_string(p.exp);
    }
    if (p.coeff > 1) s += "*" + std::to_string(p.coeff);
  }
  if (tail_ > 0) {
    if (!s.empty()) s += "+";
    s += std::to_string(tail_);
  }
  return s;
}

std::strong_ordering ord_cmp(const Ord& a, const Ord& b) {
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  for (size_t i = 0; i < std::min(pa.size(), pb.size()); ++i) {
    auto k = key_cmp(pa[i], pb[i]);
    if (k != std::strong_ordering::equal) return k;
    if (pa[i].coeff != pb[i].coeff) return pa[i].coeff <=> pb[i].coeff;
  }
  if (pa.size() != pb.size()) return pa.size() <=> pb.size();
  return a.tail() <=> b.tail();
}

Ord ord_add(const Ord& a, const Ord& b) {
  if (b.is_zero()) return a;
  if (b.is_finite()) {
    // a + n: keep every infinite part of a.
    return Ord::make(a.parts(), a.tail() + b.tail());
  }
  const OrdPart& lead = b.parts()[0];
  std::vector<OrdPart> parts;
  for (const OrdPart& p : a.parts()) {
    auto k = key_cmp(p, lead);
    if (k == std::strong_ordering::greater) {
      parts.push_back(p);
    } else if (k == std::strong_ordering::equal) {
      OrdPart merged = lead;
      merged.coeff += p.coeff;
      parts.push_back(merged);
      parts.insert(parts.end(), b.parts().begin() + 1, b.parts().end());
      return Ord::make(std::move(parts), b.tail());
    } else {
      break;  // absorbed
    }
  }
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  return Ord::make(std::move(parts), b.tail());
}

Ord ord_succ(const Ord& a) { return ord_add(a, Ord::finite(1)); }

std::optional<Ord> ord_left_sub(const Ord& a, const Ord& b) {
  if (ord_cmp(a, b) == std::strong_ordering::greater) return std::nullopt;
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  for (size_t i = 0;; ++i) {
    if (i == pa.size()) {
      if (i < pb.size()) {
        // b keeps an infinite part here; it absorbs a's tail.
        std::vector<OrdPart> rest(pb.begin() + i, pb.end());
        return Ord::make(std::move(rest), b.tail());
      }
      return Ord::finite(b.tail() - a.tail());
    }
    // a <= b guarantees pb[i] exists and keys cannot favor a.
    auto k = key_cmp(pa[i], pb[i]);
    if (k == std::strong_ordering::less) {
      std::vector<OrdPart> rest(pb.begin() + i, pb.end());
      return Ord::make(std::move(rest), b.tail());
    }
    if (pa[i].coeff < pb[i].coeff) {
      std::vector<OrdPart> rest;
      OrdPart h = pb[i];
      h.coeff -= pa[i].coeff;
      rest.push_back(h);
      rest.insert(rest.end(), pb.begin() + i + 1, pb.end());
      return Ord::make(std::move(rest), b.tail());
    }
    if (pa[i].coeff > pb[i].coeff) return std::nullopt;  // unreachable when a <= b
  }
}

std::optional<std::pair<Nat, Ord>> ord_split_at_atom(const Ord& x, const Atom& a) {
  Nat k = 0;
  std::vector<OrdPart> rest;
  Ord probe = Ord::of_atom(a);
  for (const OrdPart& p : x.parts()) {
    auto c = key_cmp(p, probe.parts()[0]);
    if (c == std::strong_ordering::greater) return std::nullopt;
    if (c == std::strong_ordering::equal)
      k = p.coeff;
    else
      rest.push_back(p);
  }
  return std::make_pair(k, Ord::make(std::move(rest), x.tail()));
}

// ---------------------------------------------------------------------------
// Order terms.

OrderPtr OrderTerm::fin(Nat n) { return std::make_shared<const OrderTerm>(OrderTerm{FiniteOrder{n}}); }

OrderPtr OrderTerm::interval(Ord bound, Ord start) {
  if (!ord_lt(start, bound)) fail(Errc::domain, "interval start must be below its bound");
  return std::make_shared<const OrderTerm>(OrderTerm{IntervalOrder{std::move(bound), std::move(start)}});
}

OrderPtr OrderTerm::sum(OrderPtr l, OrderPtr r) {
  return std::make_shared<const OrderTerm>(OrderTerm{SumOrder{std::move(l), std::move(r)}});
}

OrderPtr OrderTerm::repeat_omega1(OrderPtr block) {
  return std::make_shared<const OrderTerm>(OrderTerm{RepeatOmegaOneOrder{std::move(block)}});
}

OrderPtr OrderTerm::reverse(OrderPtr inner) {
  // Reverse(Reverse(O)) normalizes to O.
  if (auto* rev = std::get_if<ReverseOrder>(&inner->node)) return rev->inner;
  return std::make_shared<const OrderTerm>(OrderTerm{ReverseOrder{std::move(inner)}});
}

namespace {

bool piece_eq(const OrderPiece& a, const OrderPiece& b);

bool piece_list_eq(const std::vector<OrderPiece>& a, const std::vector<OrderPiece>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!piece_eq(a[i], b[i])) return false;
  return true;
}

bool piece_eq(const OrderPiece& a, const OrderPiece& b) {
  if (a.reversed != b.reversed || a.omega1_rep != b.omega1_rep) return false;
  if (!a.opaque_block.empty() || !b.opaque_block.empty()) {
    if (a.opaque_block.empty() != b.opaque_block.empty())
      fail(Errc::unsupported_fragment, "cannot compare repeat blocks outside the interval fragment");
    if (piece_list_eq(a.opaque_block, b.opaque_block)) return true;
    fail(Errc::unsupported_fragment, "cannot decide isomorphism of distinct repeat blocks");
  }
  return ord_eq(a.type, b.type);
}

void reverse_pieces(std::vector<OrderPiece>& ps) {
  std::reverse(ps.begin(), ps.end());
  for (OrderPiece& p : ps) {
    if (p.type.is_finite() && !p.omega1_rep && p.opaque_block.empty()) continue;  // finite self-reverse
    p.reversed = !p.reversed;
  }
}

// a < base*omega_1, for single-atom base: every ordinal whose leading atom
// does not outrank base is absorbed when prepended.
bool below_atom_rep(const Ord& a, const Ord& base) {
  auto lead = a.leading_atom();
  auto b = base.leading_atom();
  if (!b) return a.is_countable();  // base omega_1 after normalization
  if (!lead) return true;
  return lead->rank() <= b->rank();
}

void append_piece(std::vector<OrderPiece>& out, OrderPiece p) {
  if (p.opaque_block.empty() && !p.omega1_rep && p.type.is_zero()) return;
  while (!out.empty()) {
    OrderPiece& t = out.back();
    bool t_plain = !t.omega1_rep && t.opaque_block.empty();
    bool p_plain = !p.omega1_rep && p.opaque_block.empty();
    if (t_plain && p_plain && !t.reversed && !p.reversed) {
      p.type = ord_add(t.type, p.type);
      out.pop_back();
      continue;
    }
    if (t_plain && p_plain && t.reversed && p.reversed) {
      // reverse of (p.type + t.type)
      p.type = ord_add(p.type, t.type);
      out.pop_back();
      continue;
    }
    if (t_plain && !t.reversed && p.omega1_rep && !p.reversed && p.opaque_block.empty() &&
        below_atom_rep(t.type, p.type)) {
      out.pop_back();  // absorbed below the repeat
      continue;
    }
    if (p_plain && p.reversed && t.omega1_rep && t.reversed && t.opaque_block.empty() &&
        below_atom_rep(p.type, t.type)) {
      return;  // reversed mirror: p vanishes into the reversed repeat
    }
    break;
  }
  out.push_back(std::move(p));
}

Atom builtin_omega1() {
  // Built-in atoms have fixed ranks, so a detached handle compares correctly.
  static const auto info = std::make_shared<const AtomInfo>(AtomInfo{"w1", 0, true, true});
  return Atom(info);
}

}  // namespace

std::vector<OrderPiece> order_canon(const OrderTerm& t) {
  std::vector<OrderPiece> out;
  if (const auto* f = std::get_if<FiniteOrder>(&t.node)) {
    if (f->n > 0) append_piece(out, OrderPiece{false, false, Ord::finite(f->n), {}});
    return out;
  }
  if (const auto* iv = std::get_if<IntervalOrder>(&t.node)) {
    auto ty = ord_left_sub(iv->start, iv->bound);
    if (!ty) fail(Errc::domain, "interval start above bound");
    append_piece(out, OrderPiece{false, false, *ty, {}});
    return out;
  }
  if (const auto* s = std::get_if<SumOrder>(&t.node)) {
    out = order_canon(*s->left);
    for (auto& p : order_canon(*s->right)) append_piece(out, std::move(p));
    return out;
  }
  if (const auto* r = std::get_if<RepeatOmegaOneOrder>(&t.node)) {
    auto block = order_canon(*r->block);
    if (block.empty()) fail(Errc::empty_order, "repeat of an empty order");
    OrderPiece p;
    if (block.size() == 1 && !block[0].reversed && !block[0].omega1_rep &&
        block[0].opaque_block.empty()) {
      if (auto lead = block[0].type.leading_atom()) {
        // (atom*k + rest) * omega_1 = atom * omega_1
        p.omega1_rep = true;
        p.type = Ord::of_atom(*lead);
      } else {
        // countable * omega_1 = omega_1 exactly
        p.type = Ord::of_atom(builtin_omega1());
      }
    } else {
      p.omega1_rep = true;
      p.opaque_block = std::move(block);
    }
    append_piece(out, std::move(p));
    return out;
  }
  const auto& rev = std::get<ReverseOrder>(t.node);
  out = order_canon(*rev.inner);
  reverse_pieces(out);
  std::vector<OrderPiece> merged;
  for (auto& p : out) append_piece(merged, std::move(p));
  return merged;
}

bool order_iso(const OrderTerm& a, const OrderTerm& b) {
  auto ca = order_canon(a);
  auto cb = order_canon(b);
  if (ca.size() != cb.size()) return false;
  for (size_t i = 0; i < ca.size(); ++i)
    if (!piece_eq(ca[i], cb[i])) return false;
  return true;
}

Ord cofinality(const OrderTerm& t) {
  auto ps = order_canon(t);
  if (ps.empty()) fail(Errc::empty_order, "cofinality of the empty order");
  const OrderPiece& last = ps.back();
  if (last.reversed) return Ord::finite(1);  // reversed well-order: has a maximum
  if (last.omega1_rep || !last.opaque_block.empty()) return Ord::of_atom(builtin_omega1());
  const Ord& ty = last.type;
  if (ty.tail() > 0) return Ord::finite(1);
  const OrdPart& p = ty.parts().back();
  if (p.atom) {
    if (!p.atom->regular())
      fail(Errc::unsupported_fragment, "cofinality of a non-regular atom bound");
    return Ord::of_atom(*p.atom);
  }
  return Ord::omega();
}

}  // namespace tw
