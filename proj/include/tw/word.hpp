#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tw/group.hpp"

namespace tw {

/// Finitely described {0,1}-valued function on ordinals: a default bit plus
/// finitely many exceptions carrying the other bit.
struct GDescription {
  int def = 0;
  std::vector<std::pair<Ord, int>> exc;  // sorted by ordinal, values != def

  static GDescription make(int def, std::vector<std::pair<Ord, int>> exc);
  int at(const Ord& x) const;
  /// d'(x) = d(delta + x), keys kept only when below len.
  GDescription shifted_down(const Ord& delta, const Ord& len) const;
  /// Largest exception key strictly below x, if any.
  std::optional<Ord> max_exc_below(const Ord& x) const;
  std::string str() const;  // bits syntax, e.g. {default=1, w:0}
  friend bool operator==(const GDescription& a, const GDescription& b);
};

/// Letter function of a generator sequence: position -> coordinate of the
/// designated letter placed there.
///   canonical: coord(p) = p
///   bits:      coord(p) = chunk_base + p + 2*desc(p)
struct LetterFun {
  enum class Kind { canonical, bits };
  Kind kind = Kind::canonical;
  GDescription desc;  // bits only
  Ord chunk_base;     // bits only; folded into GenSeg::base on normalization
};

// ---------------------------------------------------------------------------
// Canonical (reduced) words: a flat list of atomic segments.

struct LitSeg {
  Letter l;
};

/// Generator run over an interval.
/// canonical kind: positions [start, bound), letter at p is g_p.
/// bits kind: positions [0, bound) with start == 0; letter at p sits at
/// coordinate base + p + 2*desc(p). Infinite by invariant (finite runs are
/// expanded to literal letters).
struct GenSeg {
  LetterFun::Kind kind = LetterFun::Kind::canonical;
  GDescription desc;  // bits only
  Ord base;           // bits only
  Ord start, bound;
  bool rev = false;
};

/// Suffix of an omega_1-fold disjoint-chunk repetition of a bits block over
/// [block_start, lambda): copy xi occupies coordinates lambda*xi + p + 2*desc(p).
/// The suffix begins at (from_copy, from_offset).
struct RepSeg {
  GDescription desc;
  Atom lambda;
  Ord block_start;
  Ord from_copy, from_offset;
  bool rev = false;
};

using Seg = std::variant<LitSeg, GenSeg, RepSeg>;

struct Word {
  std::vector<Seg> segs;
  bool empty() const { return segs.empty(); }
};

/// Finite word in the free product on its coordinate set, freely reduced.
struct FiniteWord {
  std::vector<Letter> letters;
  bool empty() const { return letters.empty(); }
  friend bool operator==(const FiniteWord& a, const FiniteWord& b) { return a.letters == b.letters; }
};

// ---------------------------------------------------------------------------
// Word terms (the user-facing algebra, before reduction).

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct EmptyT {};
struct LitT { Letter l; };
struct ConcatT { std::vector<Term> parts; };
struct InvT { Term inner; };
struct GenSeqT { Ord start, bound; LetterFun fun; };
struct RepDisjointT { Term block; };
struct RepLiteralT { Term block; };
struct SegT { Term inner; Ord pos; };  // tail from a domain position

struct TermNode {
  std::variant<EmptyT, LitT, ConcatT, InvT, GenSeqT, RepDisjointT, RepLiteralT, SegT> node;
};

namespace ast {
Term empty();
Term lit(Letter l);
Term concat(std::vector<Term> parts);
Term inv(Term t);
Term gen_seq(Ord start, Ord bound, LetterFun fun);
Term rep_disjoint(Term block);
Term rep_literal(Term block);
Term seg(Term t, Ord pos);
}  // namespace ast

// ---------------------------------------------------------------------------
// Operations.

struct Violation {
  std::string message;
  std::optional<Ord> witness_coord;
};

struct ValidationReport {
  bool valid = true;
  bool sigma_word = true;  // countable domain
  std::vector<Violation> violations;
};

/// Checks the finite-preimage law (every coordinate hit finitely often) and
/// adjacency safety of generator sequences; report lists each violation with
/// a witness coordinate when one exists.
ValidationReport validate_word(const Term& t, const Session& s);

/// Canonical reduced form. Validates first; raises Errc::validation when the
/// term is not a word.
Word reduce(const Term& t, const Session& s);
Word reduce(const Word& w, const Session& s);  // re-canonicalization (idempotent)

/// Word isomorphism of reduced words: canonical forms match segment by
/// segment (orders isomorphic and letter functions aligned).
bool word_iso(const Word& a, const Word& b);

FiniteWord restrict_finite(const Term& t, std::span<const Ord> F, const Session& s);
FiniteWord restrict_finite(const Word& w, std::span<const Ord> F, const Session& s);
bool equiv_on(const Term& a, const Term& b, std::span<const Ord> F, const Session& s);

/// Position of a cut in a canonical word: segment index plus, for repeats,
/// the copy index, plus the offset inside the segment's position space.
struct Cut {
  std::size_t seg = 0;
  Ord copy;
  Ord offset;
};

Word tail_at(const Word& w, const Ord& pos, const Session& s);  // Errc::invalid_cut
Word tail_at(const Word& w, const Cut& cut, const Session& s);

struct QuasiDecomposition {
  Word left, middle, right;  // x ~ left*middle, y ~ inv(middle)*right
};

/// Lemma-style decomposition: peels the maximal cancelling seam so that
/// left*right reduces by neighbor merges only.
QuasiDecomposition quasi_decompose(const Word& x, const Word& y, const Session& s);

/// Concatenation of reduced words as a term, for re-reduction.
Term to_term(const Word& w);

// Internal helpers shared with the pattern scanner.
Ord gen_coord(const GenSeg& g, const Ord& p);
Ord rep_coord(const RepSeg& r, const Ord& copy, const Ord& p);
Letter gen_letter(const GenSeg& g, const Ord& p, const Session& s);   // unreversed letter at p
Letter rep_letter(const RepSeg& r, const Ord& copy, const Ord& p, const Session& s);
std::optional<Ord> seg_length(const Seg& seg);  // nullopt for repeats (lambda*omega_1)

}  // namespace tw
