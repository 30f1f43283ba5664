#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tw/ord.hpp"

namespace tw {

/// Coordinate group shape: integers under addition, cyclic of order n >= 2,
/// or free on k >= 1 symbols.
struct GroupSpec {
  enum class Kind { integers, cyclic, free_group };
  Kind kind = Kind::integers;
  Nat param = 0;  // n for cyclic, k for free

  static GroupSpec integers() { return {Kind::integers, 0}; }
  static GroupSpec cyclic(Nat n);
  static GroupSpec free_group(Nat k);
  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.kind == b.kind && a.param == b.param;
  }
};

struct ZElem { long long v; };
struct CycElem { Nat r; Nat n; };              // 1 <= r < n
struct FreeElem { std::vector<int> syms; };    // freely reduced, +i / -i for symbol i

/// Non-identity group element; the identity is represented by absence
/// (construction and multiplication return nullopt for it).
class GroupElement {
 public:
  static std::optional<GroupElement> integer(long long v);
  static std::optional<GroupElement> cyclic(long long r, Nat n);
  static std::optional<GroupElement> free_word(std::vector<int> syms, Nat k);

  GroupElement inverse() const;
  std::string str() const;
  const std::variant<ZElem, CycElem, FreeElem>& value() const { return v_; }
  friend bool operator==(const GroupElement& a, const GroupElement& b);
  friend std::optional<GroupElement> elem_mul(const GroupElement& a, const GroupElement& b);

 private:
  explicit GroupElement(std::variant<ZElem, CycElem, FreeElem> v) : v_(std::move(v)) {}
  std::variant<ZElem, CycElem, FreeElem> v_;
};

/// The designated non-identity element of a group: 1, residue 1, or the
/// first free symbol.
GroupElement designated(const GroupSpec& spec);

/// A letter: a coordinate together with a non-identity element of that
/// coordinate's group. Identity letters vanish on construction.
struct Letter {
  Ord coord;
  GroupElement elem;
  friend bool operator==(const Letter& a, const Letter& b) {
    return ord_eq(a.coord, b.coord) && a.elem == b.elem;
  }
};

/// Product of same-coordinate letters; nullopt when the product is the
/// identity. Raises coordinate_mismatch for distinct coordinates.
std::optional<Letter> letter_mul(const Letter& a, const Letter& b);
Letter letter_inv(const Letter& a);

/// One GroupSpec for all coordinates, with finitely many declared regions
/// [lo, hi) overriding it. First matching region wins.
struct GroupAssignment {
  struct Region {
    Ord lo, hi;
    GroupSpec spec;
  };
  GroupSpec base = GroupSpec::integers();
  std::vector<Region> regions;
  const GroupSpec& at(const Ord& coord) const;
};

struct Session {
  AtomTable atoms;
  GroupAssignment groups;
};

Letter designated_letter(const Session& s, Ord coord);

}  // namespace tw
