#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tw/errors.hpp"

namespace tw {

using Nat = std::uint64_t;

/// A symbolic regular/uncountable cardinal. Atoms are opaque: only their
/// declared rank orders them, no cardinal arithmetic is ever attempted.
/// Every atom compares above every pure-omega ordinal.
struct AtomInfo {
  std::string name;
  int rank = 0;
  bool regular = true;
  bool uncountable = true;
};

class Atom {
 public:
  explicit Atom(std::shared_ptr<const AtomInfo> info) : info_(std::move(info)) {}
  const std::string& name() const { return info_->name; }
  int rank() const { return info_->rank; }
  bool regular() const { return info_->regular; }
  bool uncountable() const { return info_->uncountable; }
  friend bool operator==(const Atom& a, const Atom& b) { return a.rank() == b.rank(); }

 private:
  std::shared_ptr<const AtomInfo> info_;
};

/// Session registry of cardinal atoms. w1 (omega_1), k1 and L are built in,
/// with ranks 0 < 1 < 2. Names and ranks are unique per session.
class AtomTable {
 public:
  AtomTable();
  Atom declare(const std::string& name, std::optional<int> rank = std::nullopt,
               bool regular = true, bool uncountable = true);
  std::optional<Atom> find(const std::string& name) const;
  const std::vector<Atom>& all() const { return atoms_; }
  Atom omega1() const { return atoms_[0]; }
  Atom k1() const { return atoms_[1]; }
  Atom L() const { return atoms_[2]; }

 private:
  std::vector<Atom> atoms_;
};

/// One Cantor-normal-form term: coeff * atom, or coeff * w^exp.
struct OrdPart {
  std::optional<Atom> atom;
  Nat exp = 1;    // omega exponent, used when atom is empty; >= 1
  Nat coeff = 1;  // >= 1
};

/// Ordinal in CNF over omega with cardinal atoms as leading terms.
/// parts are strictly decreasing in term order (atoms by rank above all
/// omega powers, omega powers by exponent), tail is the finite part.
class Ord {
 public:
  Ord() = default;
  static Ord finite(Nat n);
  static Ord omega(Nat exp = 1, Nat coeff = 1);
  static Ord of_atom(const Atom& a, Nat coeff = 1);
  static Ord make(std::vector<OrdPart> parts, Nat tail);

  bool is_zero() const { return parts_.empty() && tail_ == 0; }
  bool is_finite() const { return parts_.empty(); }
  std::optional<Nat> as_finite() const;
  bool is_limit() const { return tail_ == 0 && !parts_.empty(); }
  bool is_countable() const;  // no atom parts
  std::optional<Atom> leading_atom() const;
  std::optional<Atom> as_single_atom() const;  // exactly atom*1
  const std::vector<OrdPart>& parts() const { return parts_; }
  Nat tail() const { return tail_; }
  std::string str() const;

 private:
  std::vector<OrdPart> parts_;
  Nat tail_ = 0;
};

std::strong_ordering ord_cmp(const Ord& a, const Ord& b);
inline bool ord_eq(const Ord& a, const Ord& b) { return ord_cmp(a, b) == std::strong_ordering::equal; }
inline bool ord_lt(const Ord& a, const Ord& b) { return ord_cmp(a, b) == std::strong_ordering::less; }
inline bool ord_le(const Ord& a, const Ord& b) { return ord_cmp(a, b) != std::strong_ordering::greater; }

Ord ord_add(const Ord& a, const Ord& b);
Ord ord_succ(const Ord& a);

/// Left difference: the unique g with a + g = b, or nullopt when a > b.
std::optional<Ord> ord_left_sub(const Ord& a, const Ord& b);

/// Splits x as atom*k + rest with rest entirely below the atom.
/// nullopt when x has a part strictly above the atom.
std::optional<std::pair<Nat, Ord>> ord_split_at_atom(const Ord& x, const Atom& a);

// ---------------------------------------------------------------------------
// Linear order terms.

struct OrderTerm;
using OrderPtr = std::shared_ptr<const OrderTerm>;

struct FiniteOrder { Nat n = 0; };
struct IntervalOrder { Ord bound; Ord start; };  // [start, bound), start < bound
struct SumOrder { OrderPtr left, right; };
struct RepeatOmegaOneOrder { OrderPtr block; };  // omega_1 many copies of block
struct ReverseOrder { OrderPtr inner; };

struct OrderTerm {
  std::variant<FiniteOrder, IntervalOrder, SumOrder, RepeatOmegaOneOrder, ReverseOrder> node;

  static OrderPtr fin(Nat n);
  static OrderPtr interval(Ord bound, Ord start);  // throws on start >= bound
  static OrderPtr sum(OrderPtr l, OrderPtr r);
  static OrderPtr repeat_omega1(OrderPtr block);
  static OrderPtr reverse(OrderPtr inner);
};

/// Canonical piece of a normalized order: an ordinal type, or type*omega_1,
/// either possibly reversed. Opaque repeats keep the block's piece list.
struct OrderPiece {
  bool reversed = false;
  bool omega1_rep = false;
  Ord type;                              // plain, or single-atom base of the repeat
  std::vector<OrderPiece> opaque_block;  // nonempty only for unnormalizable repeats
};

std::vector<OrderPiece> order_canon(const OrderTerm& t);

/// Sound everywhere; complete on the fragment of interval-built orders.
/// Outside the fragment raises unsupported_fragment rather than answering.
bool order_iso(const OrderTerm& a, const OrderTerm& b);

/// Cofinality of the order: 1 for orders with a maximum, omega for countable
/// limits, the atom for atom-bounded intervals, omega_1 for repeats.
Ord cofinality(const OrderTerm& t);

}  // namespace tw
