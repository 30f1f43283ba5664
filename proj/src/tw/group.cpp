#include "tw/group.hpp"

namespace tw {

GroupSpec GroupSpec::cyclic(Nat n) {
  if (n < 2) fail(Errc::domain, "cyclic group order must be >= 2");
  return {Kind::cyclic, n};
}

GroupSpec GroupSpec::free_group(Nat k) {
  if (k < 1) fail(Errc::domain, "free group needs at least one symbol");
  return {Kind::free_group, k};
}

std::optional<GroupElement> GroupElement::integer(long long v) {
  if (v == 0) return std::nullopt;
  return GroupElement(ZElem{v});
}

std::optional<GroupElement> GroupElement::cyclic(long long r, Nat n) {
  if (n < 2) fail(Errc::domain, "cyclic group order must be >= 2");
  long long m = r % static_cast<long long>(n);
  if (m < 0) m += static_cast<long long>(n);
  if (m == 0) return std::nullopt;
  return GroupElement(CycElem{static_cast<Nat>(m), n});
}

std::optional<GroupElement> GroupElement::free_word(std::vector<int> syms, Nat k) {
  std::vector<int> red;
  for (int s : syms) {
    if (s == 0 || static_cast<Nat>(s < 0 ? -s : s) > k)
      fail(Errc::domain, "free symbol out of range");
    if (!red.empty() && red.back() == -s)
      red.pop_back();
    else
      red.push_back(s);
  }
  if (red.empty()) return std::nullopt;
  return GroupElement(FreeElem{std::move(red)});
}

GroupElement GroupElement::inverse() const {
  if (const auto* z = std::get_if<ZElem>(&v_)) return GroupElement(ZElem{-z->v});
  if (const auto* c = std::get_if<CycElem>(&v_)) return GroupElement(CycElem{c->n - c->r, c->n});
  const auto& f = std::get<FreeElem>(v_);
  std::vector<int> syms(f.syms.rbegin(), f.syms.rend());
  for (int& s : syms) s = -s;
  return GroupElement(FreeElem{std::move(syms)});
}

std::string GroupElement::str() const {
  if (const auto* z = std::get_if<ZElem>(&v_)) return std::to_string(z->v);
  if (const auto* c = std::get_if<CycElem>(&v_)) return std::to_string(c->r);
  const auto& f = std::get<FreeElem>(v_);
  std::string s;
  for (int sym : f.syms) {
    s += "x" + std::to_string(sym < 0 ? -sym : sym);
    if (sym < 0) s += "'";
  }
  return s;
}

bool operator==(const GroupElement& a, const GroupElement& b) {
  if (a.v_.index() != b.v_.index()) return false;
  if (const auto* z = std::get_if<ZElem>(&a.v_)) return z->v == std::get<ZElem>(b.v_).v;
  if (const auto* c = std::get_if<CycElem>(&a.v_)) {
    const auto& d = std::get<CycElem>(b.v_);
    return c->r == d.r && c->n == d.n;
  }
  return std::get<FreeElem>(a.v_).syms == std::get<FreeElem>(b.v_).syms;
}

std::optional<GroupElement> elem_mul(const GroupElement& a, const GroupElement& b) {
  if (a.v_.index() != b.v_.index()) fail(Errc::domain, "elements of different group kinds");
  if (const auto* z = std::get_if<ZElem>(&a.v_)) return GroupElement::integer(z->v + std::get<ZElem>(b.v_).v);
  if (const auto* c = std::get_if<CycElem>(&a.v_)) {
    const auto& d = std::get<CycElem>(b.v_);
    if (c->n != d.n) fail(Errc::domain, "cyclic orders differ");
    return GroupElement::cyclic(static_cast<long long>(c->r + d.r), c->n);
  }
  const auto& f = std::get<FreeElem>(a.v_);
  const auto& g = std::get<FreeElem>(b.v_);
  std::vector<int> syms = f.syms;
  syms.insert(syms.end(), g.syms.begin(), g.syms.end());
  Nat k = 0;
  for (int s : syms) k = std::max<Nat>(k, static_cast<Nat>(s < 0 ? -s : s));
  return GroupElement::free_word(std::move(syms), k);
}

GroupElement designated(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::integers:
      return *GroupElement::integer(1);
    case GroupSpec::Kind::cyclic:
      return *GroupElement::cyclic(1, spec.param);
    case GroupSpec::Kind::free_group:
      return *GroupElement::free_word({1}, spec.param);
  }
  fail(Errc::domain, "bad group kind");
}

std::optional<Letter> letter_mul(const Letter& a, const Letter& b) {
  if (!ord_eq(a.coord, b.coord))
    fail(Errc::coordinate_mismatch,
         "letters at coordinates " + a.coord.str() + " and " + b.coord.str());
  auto p = elem_mul(a.elem, b.elem);
  if (!p) return std::nullopt;
  return Letter{a.coord, *p};
}

Letter letter_inv(const Letter& a) { return Letter{a.coord, a.elem.inverse()}; }

const GroupSpec& GroupAssignment::at(const Ord& coord) const {
  for (const Region& r : regions)
    if (ord_le(r.lo, coord) && ord_lt(coord, r.hi)) return r.spec;
  return base;
}

Letter designated_letter(const Session& s, Ord coord) {
  GroupElement e = designated(s.groups.at(coord));
  return Letter{std::move(coord), std::move(e)};
}

}  // namespace tw
